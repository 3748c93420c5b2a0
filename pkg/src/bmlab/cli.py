"""Scenario-driven command line front end.

Runs one check per invocation, writes a canonical JSON report (sorted keys,
17-significant-digit floats, byte-stable across runs) plus a CSV for curve
commands, and exits 0 on pass/exploratory, 1 on a certified violation, 2 on
configuration or numeric errors.  BMLAB_THREADS caps internal worker counts.
"""

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import concavity, counterexamples, parallel
from .errors import BmlabError, ConfigError
from .measures import Density1D, DensityND, density_from_json
from .quadrature import MeasureEvaluator, QuadraturePolicy
from .report import ConcavityReport, VIOLATION
from .sets import DirectionUnit, IntervalUnion, ProductSet, set_from_json
from .util import parse_grid

__all__ = ["ScenarioConfig", "run_scenario", "emit_report", "main"]

COMMANDS = (
    "check-bm", "scan-dilates", "b-property", "prop-concave", "slab",
    "bonnesen", "hm", "dancs-uhrin", "counterexample-power",
    "counterexample-search", "parallel",
)

_REQUIRED = {
    "check-bm": ("measure", "sets", "s"),
    "scan-dilates": ("measure", "sets", "s"),
    "b-property": ("measure", "sets"),
    "prop-concave": ("measure", "sets"),
    "slab": ("measure", "sets"),
    "bonnesen": ("measure", "sets"),
    "hm": ("functions",),
    "dancs-uhrin": ("functions",),
    "counterexample-power": ("s", "r", "b"),
    "counterexample-search": ("family", "measure", "s"),
    "parallel": ("measure", "sets", "s"),
}

_DEFAULT_LAMBDA = "0:1:0.1"


@dataclass
class ScenarioConfig:
    """Declarative description of one check run."""

    command: str
    measure: dict | None = None
    sets: list = field(default_factory=list)
    functions: list = field(default_factory=list)
    s: float | None = None
    r: float | None = None
    a: float | None = None
    b: float | None = None
    family: str | None = None
    budget: int = 20000
    seed: int = 0
    u: tuple[float, float] = (1.0, 0.0)
    lam: float = 0.5
    gamma: float = -1.0
    lambda_grid: list = field(default_factory=lambda: parse_grid(_DEFAULT_LAMBDA))
    t_grid: list | None = None
    policy: QuadraturePolicy = field(default_factory=QuadraturePolicy)
    out: str = "."
    name: str | None = None

    @classmethod
    def from_dict(cls, obj: dict) -> "ScenarioConfig":
        if not isinstance(obj, dict):
            raise ConfigError("scenario must be a JSON object")
        cmd = obj.get("command")
        if cmd not in COMMANDS:
            raise ConfigError(f"scenario field 'command' must be one of {COMMANDS}, got {cmd!r}")
        for req in _REQUIRED[cmd]:
            if req not in obj or obj[req] in (None, [], {}):
                raise ConfigError(f"scenario for {cmd!r} is missing required field {req!r}")
        pol = obj.get("policy", {})
        if not isinstance(pol, dict):
            raise ConfigError("scenario field 'policy' must be an object")
        policy = QuadraturePolicy(
            abs_tol=float(pol.get("abs_tol", 1e-10)),
            rel_tol=float(pol.get("rel_tol", 1e-8)),
            max_depth=int(pol.get("max_depth", 40)),
            section_grid=int(pol.get("section_grid", 512)),
        )
        lam_grid = parse_grid(obj.get("lambda_grid", _DEFAULT_LAMBDA))
        if not lam_grid:
            raise ConfigError("lambda_grid must be non-empty")
        t_grid = parse_grid(obj["t_grid"]) if "t_grid" in obj else None
        if t_grid is not None and not t_grid:
            raise ConfigError("t_grid must be non-empty")
        return cls(
            command=cmd,
            measure=obj.get("measure"),
            sets=obj.get("sets", []),
            functions=obj.get("functions", []),
            s=_ext_float(obj.get("s")),
            r=_ext_float(obj.get("r")),
            a=_ext_float(obj.get("a")),
            b=_ext_float(obj.get("b")),
            family=obj.get("family"),
            budget=int(obj.get("budget", 20000)),
            seed=int(obj.get("seed", 0)),
            u=tuple(obj.get("u", (1.0, 0.0))),
            lam=float(obj.get("lam", 0.5)),
            gamma=float(obj.get("gamma", -1.0)),
            lambda_grid=lam_grid,
            t_grid=t_grid,
            policy=policy,
            out=obj.get("out", "."),
            name=obj.get("name"),
        )


def _ext_float(v):
    if v is None:
        return None
    if isinstance(v, str):
        if v in ("inf", "+inf", "Infinity"):
            return math.inf
        if v in ("-inf", "-Infinity"):
            return -math.inf
    return float(v)


# ---------------------------------------------------------------------------
# Grid-function descriptors (hm / dancs-uhrin scenarios)
# ---------------------------------------------------------------------------

def _build_grid_function_1d(desc: dict) -> concavity.GridFunction1D:
    if "xs" in desc and "values" in desc:
        return concavity.GridFunction1D(np.asarray(desc["xs"]), np.asarray(desc["values"]))
    d = density_from_json(desc["density"])
    if not isinstance(d, Density1D):
        raise ConfigError("1-D grid function needs a 1-D density")
    A = set_from_json(desc["set"])
    g = desc["grid"]
    xs = np.linspace(float(g["lo"]), float(g["hi"]), int(g["n"]))
    ind = np.array([1.0 if A.contains(float(x)) else 0.0 for x in xs])
    return concavity.GridFunction1D(xs, np.asarray(d(xs)) * ind)


def _build_grid_function_2d(desc: dict) -> concavity.GridFunction2D:
    d = density_from_json(desc["density"])
    if not isinstance(d, DensityND) or d.n != 2:
        raise ConfigError("2-D grid function needs a 2-D density")
    A = set_from_json(desc["set"])
    if not isinstance(A, ProductSet) or A.dimension != 2:
        raise ConfigError("2-D grid function set must be a coordinate product")
    g = desc["grid"]
    xs = np.linspace(float(g["lo"]), float(g["hi"]), int(g["n"]))
    ys = xs.copy()
    indx = np.array([1.0 if A.factors[0].contains(float(x)) else 0.0 for x in xs])
    indy = np.array([1.0 if A.factors[1].contains(float(y)) else 0.0 for y in ys])
    if d.is_separable:
        vals = np.outer(np.asarray(d.factor(0)(xs)) * indx, np.asarray(d.factor(1)(ys)) * indy)
    else:
        xx, yy = np.meshgrid(xs, ys, indexing="ij")
        vals = np.asarray(d.fn(xx, yy)) * np.outer(indx, indy)
    return concavity.GridFunction2D(xs, ys, vals)


# ---------------------------------------------------------------------------
# Command runners
# ---------------------------------------------------------------------------

def _evaluator(cfg: ScenarioConfig) -> MeasureEvaluator:
    if cfg.measure is None:
        raise ConfigError(f"scenario for {cfg.command!r} is missing required field 'measure'")
    return MeasureEvaluator(density_from_json(cfg.measure), cfg.policy)


def _need_sets(cfg: ScenarioConfig, n: int):
    if len(cfg.sets) < n:
        raise ConfigError(f"{cfg.command!r} needs {n} set descriptor(s), got {len(cfg.sets)}")
    return [set_from_json(s) for s in cfg.sets[:n]]


def _run_check_bm(cfg):
    ev = _evaluator(cfg)
    A, B = _need_sets(cfg, 2)
    return concavity.check_bm(ev, A, B, cfg.s, cfg.lambda_grid)


def _run_scan_dilates(cfg):
    ev = _evaluator(cfg)
    (A,) = _need_sets(cfg, 1)
    grid = cfg.t_grid if cfg.t_grid is not None else parse_grid("0.25:3:0.125")
    return concavity.scan_dilates(ev, A, grid, cfg.s if cfg.s is not None else 1.0 / ev.dimension)


def _run_b_property(cfg):
    ev = _evaluator(cfg)
    (A,) = _need_sets(cfg, 1)
    grid = cfg.t_grid if cfg.t_grid is not None else parse_grid("-2:2:0.125")
    return concavity.check_b_property(ev, A, grid)


def _run_prop_concave(cfg):
    ev = _evaluator(cfg)
    A, B = _need_sets(cfg, 2)
    return concavity.check_prop_concave(ev, A, B, cfg.lambda_grid)


def _run_slab(cfg):
    ev = _evaluator(cfg)
    A, B = _need_sets(cfg, 2)
    return concavity.check_slab(ev, A, B, cfg.lambda_grid)


def _run_bonnesen(cfg):
    ev = _evaluator(cfg)
    A, B = _need_sets(cfg, 2)
    u = DirectionUnit(cfg.u)
    A2, B2, info = concavity.match_max_section(ev, A, B, u)
    rep = concavity.check_bonnesen_sections(ev, A2, B2, u, cfg.lambda_grid)
    rep.extras["section_match"] = info
    return rep


def _run_hm(cfg):
    if len(cfg.functions) < 2:
        raise ConfigError("'hm' needs two grid-function descriptors in 'functions'")
    f = _build_grid_function_1d(cfg.functions[0])
    g = _build_grid_function_1d(cfg.functions[1])
    if cfg.functions[1].get("scale_to_match") and g.max() > 0:
        g = concavity.GridFunction1D(g.xs, g.values * (f.max() / g.max()))
    return concavity.check_henstock_macbeath(f, g, cfg.lam)


def _run_dancs_uhrin(cfg):
    if len(cfg.functions) < 2:
        raise ConfigError("'dancs-uhrin' needs two grid-function descriptors in 'functions'")
    f = _build_grid_function_2d(cfg.functions[0])
    g = _build_grid_function_2d(cfg.functions[1])
    u = DirectionUnit(cfg.u)
    axis = u.axis_index()
    if axis is None:
        raise ConfigError("'dancs-uhrin' supports only axis directions")
    if cfg.functions[1].get("scale_to_match") and g.m_u(axis) > 0:
        g = concavity.GridFunction2D(g.xs, g.ys, g.values * (f.m_u(axis) / g.m_u(axis)))
    return concavity.check_dancs_uhrin(f, g, u, cfg.lam, cfg.gamma)


def _run_counterexample_power(cfg):
    if cfg.a is not None:
        inst = counterexamples.PowerFamilyInstance(cfg.s, cfg.r, cfg.a, cfg.b)
        deficit = counterexamples.power_family_deficit(inst, cfg.lam)
        a_star = cfg.a
    else:
        a_star, deficit = counterexamples.power_family_search(cfg.s, cfg.r, cfg.b)
    masses = {
        "mu_A": counterexamples.power_mass(cfg.s, a_star),
        "mu_B": counterexamples.power_mass(cfg.s, cfg.b),
    }
    tol = 1e-12 * max(1.0, masses["mu_B"])
    witness = {"a": a_star, "b": cfg.b, "lambda": cfg.lam, **masses}
    return ConcavityReport.decide(deficit, tol, witness, 1,
                                  extras={"s": cfg.s, "r": cfg.r, "closed_form": True,
                                          "certified": bool(deficit < -tol)})


def _run_counterexample_search(cfg):
    fam = counterexamples.SearchFamily(cfg.family, density_from_json(cfg.measure),
                                       cfg.s, seed=cfg.seed)
    return counterexamples.violation_search(fam, cfg.budget)


def _run_parallel(cfg):
    ev = _evaluator(cfg)
    A, B = _need_sets(cfg, 2)
    grid = cfg.t_grid if cfg.t_grid is not None else parse_grid("0:2:0.05")
    curve = parallel.parallel_curve(ev, A, B, grid)
    rep = parallel.check_parallel_concavity(curve, cfg.s)
    return rep, curve


_RUNNERS = {
    "check-bm": _run_check_bm,
    "scan-dilates": _run_scan_dilates,
    "b-property": _run_b_property,
    "prop-concave": _run_prop_concave,
    "slab": _run_slab,
    "bonnesen": _run_bonnesen,
    "hm": _run_hm,
    "dancs-uhrin": _run_dancs_uhrin,
    "counterexample-power": _run_counterexample_power,
    "counterexample-search": _run_counterexample_search,
    "parallel": _run_parallel,
}


def run_scenario(cfg: ScenarioConfig) -> tuple[int, ConcavityReport, list[Path]]:
    """Execute the configured command; returns (exit_code, report, files written)."""
    result = _RUNNERS[cfg.command](cfg)
    curve = None
    if isinstance(result, tuple):
        report, curve = result
    else:
        report = result
    name = cfg.name or cfg.command
    outdir = Path(cfg.out)
    outdir.mkdir(parents=True, exist_ok=True)
    files = [emit_report(report, outdir / f"{name}-report.json")]
    if curve is not None:
        files.append(_emit_curve_csv(report, curve, outdir / f"{name}-curve.csv"))
    code = 1 if report.verdict == VIOLATION else 0
    return code, report, files


# ---------------------------------------------------------------------------
# Canonical output
# ---------------------------------------------------------------------------

def _canonical(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return '"nan"'
        if math.isinf(x):
            return '"inf"' if x > 0 else '"-inf"'
        return format(x, ".17g")
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ",".join(_canonical(v) for v in obj) + "]"
    if isinstance(obj, dict):
        items = sorted(obj.items(), key=lambda kv: str(kv[0]))
        return "{" + ",".join(json.dumps(str(k)) + ":" + _canonical(v) for k, v in items) + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def emit_report(report, path) -> Path:
    """Write canonical JSON: sorted keys, fixed float formatting, byte-stable."""
    path = Path(path)
    payload = report.to_dict() if hasattr(report, "to_dict") else report
    path.write_text(_canonical(payload) + "\n")
    return path


def _emit_curve_csv(report, curve, path) -> Path:
    """CSV with header: t, value, running minimum three-point deficit (0 until defined)."""
    path = Path(path)
    deficits = _running_deficits(curve, report)
    lines = ["t,value,cumulative_deficit"]
    for t, v, d in zip(curve.ts, curve.values, deficits):
        lines.append(f"{format(float(t), '.17g')},{format(float(v), '.17g')},{format(float(d), '.17g')}")
    path.write_text("\n".join(lines) + "\n")
    return path


def _running_deficits(curve, report):
    p = report.extras.get("p", report.extras.get("s", 1.0))
    out = [0.0, 0.0]
    running = math.inf
    for k in range(1, len(curve.ts) - 1):
        sub = concavity.check_curve_power_concavity(
            curve.ts[k - 1: k + 2], curve.values[k - 1: k + 2], p)
        running = min(running, sub.worst_deficit)
        out.append(running)
    return out[: len(curve.ts)]


# ---------------------------------------------------------------------------
# argparse front end
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="bmlab",
        description="Concavity checks for measures of Minkowski combinations of sets.")
    ap.add_argument("--scenario", help="path to a scenario JSON file")
    ap.add_argument("--out", help="output directory for reports")
    ap.add_argument("--name", help="basename for output files")
    ap.add_argument("--abs-tol", type=float, help="quadrature absolute tolerance")
    ap.add_argument("--rel-tol", type=float, help="quadrature relative tolerance")
    ap.add_argument("--section-grid", type=int, help="t-samples for section sweeps")
    ap.add_argument("--seed", type=int, help="search seed")
    ap.add_argument("--lambda-grid", help="a:b:step grid of lambda values")
    ap.add_argument("--t-grid", help="a:b:step grid of t values")

    sub = ap.add_subparsers(dest="command")
    for cmd in COMMANDS:
        sp = sub.add_parser(cmd)
        sp.add_argument("--measure", help="density descriptor JSON")
        sp.add_argument("--A", dest="set_a", help="first set descriptor JSON")
        sp.add_argument("--B", dest="set_b", help="second set descriptor JSON")
        sp.add_argument("--s", type=float, help="power-mean exponent")
        sp.add_argument("--r", type=float, help="stronger exponent (power family)")
        sp.add_argument("--a", type=float, help="inner radius (power family)")
        sp.add_argument("--b", type=float, help="outer radius (power family)")
        sp.add_argument("--family", choices=counterexamples.FAMILY_IDS)
        sp.add_argument("--budget", type=int, help="search evaluation budget")
        sp.add_argument("--u", help="direction as 'ux,uy'")
        sp.add_argument("--lam", type=float, help="single lambda value")
        sp.add_argument("--gamma", type=float, help="pairing exponent")
    return ap


def _config_from_args(args) -> ScenarioConfig:
    base: dict = {}
    if args.scenario:
        try:
            text = Path(args.scenario).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read scenario file: {exc}") from exc
        try:
            base = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(
                f"scenario JSON parse error at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
        if args.command:
            base["command"] = args.command
    elif args.command:
        base = {"command": args.command}
    else:
        raise ConfigError("give a subcommand or --scenario <file>")

    if args.command:
        for key, attr in (("measure", "measure"), ("s", "s"), ("r", "r"),
                          ("a", "a"), ("b", "b"), ("family", "family"),
                          ("budget", "budget"), ("lam", "lam"), ("gamma", "gamma")):
            val = getattr(args, attr, None)
            if val is not None:
                base[key] = json.loads(val) if key == "measure" else val
        sets = base.get("sets", [])
        if getattr(args, "set_a", None):
            sets = [json.loads(args.set_a)] + list(sets[1:])
        if getattr(args, "set_b", None):
            sets = list(sets[:1]) + [json.loads(args.set_b)] + list(sets[2:])
            if not sets[:1]:
                raise ConfigError("--B given without --A")
        if sets:
            base["sets"] = sets
        if getattr(args, "u", None):
            base["u"] = [float(v) for v in args.u.split(",")]

    for key, attr in (("out", "out"), ("name", "name"), ("seed", "seed"),
                      ("lambda_grid", "lambda_grid"), ("t_grid", "t_grid")):
        val = getattr(args, attr, None)
        if val is not None:
            base[key] = val
    pol = dict(base.get("policy", {}))
    for key, attr in (("abs_tol", "abs_tol"), ("rel_tol", "rel_tol"),
                      ("section_grid", "section_grid")):
        val = getattr(args, attr, None)
        if val is not None:
            pol[key] = val
    if pol:
        base["policy"] = pol
    return ScenarioConfig.from_dict(base)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config_from_args(args)
        code, report, files = run_scenario(cfg)
    except (BmlabError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    summary = report.verdict
    if report.verdict == VIOLATION:
        summary += f" (worst deficit {report.worst_deficit:.6g})"
    elif report.verdict == "vacuous":
        summary += f" ({report.reason})"
    else:
        summary += f" (worst deficit {report.worst_deficit:.6g})"
    print(f"{cfg.command}: {summary}")
    for f in files:
        print(f"wrote {f}")
    return code


if __name__ == "__main__":
    sys.exit(main())
