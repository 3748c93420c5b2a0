"""Hot-kernel backend selection.

The compiled extension is preferred when importable; the numpy reference
implementation is the fallback.  BMLAB_KERNELS=py forces the fallback,
BMLAB_KERNELS=cython insists on the extension (raising if missing).
"""

import os

_choice = os.environ.get("BMLAB_KERNELS", "auto").strip().lower()

if _choice in ("py", "python", "numpy", "ref"):
    from . import _ref as _impl
elif _choice in ("cython", "fast", "c"):
    from . import _fast as _impl  # type: ignore[no-redef]
elif _choice in ("", "auto"):
    try:
        from . import _fast as _impl  # type: ignore[no-redef]
    except ImportError:
        from . import _ref as _impl
else:
    raise ValueError(f"BMLAB_KERNELS={_choice!r}: expected auto, py, or cython")

BACKEND = _impl.BACKEND_NAME

KIND_GAUSSIAN = 0
KIND_EXP2 = 1
KIND_POWER_PLUS = 2
KIND_UNIFORM = 3

eval_catalog = _impl.eval_catalog
integrate_catalog = _impl.integrate_catalog
integrate_catalog_batch = _impl.integrate_catalog_batch
polygon_measure_sep = _impl.polygon_measure_sep
supconv_min_1d = _impl.supconv_min_1d
supconv_gamma_2d = _impl.supconv_gamma_2d

__all__ = [
    "BACKEND",
    "KIND_GAUSSIAN",
    "KIND_EXP2",
    "KIND_POWER_PLUS",
    "KIND_UNIFORM",
    "eval_catalog",
    "integrate_catalog",
    "integrate_catalog_batch",
    "polygon_measure_sep",
    "supconv_min_1d",
    "supconv_gamma_2d",
]
