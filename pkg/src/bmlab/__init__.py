"""bmlab: desk-scale numerical checks of power-mean concavity for measures
of Minkowski combinations of sets.

Submodules: measures (density catalog), sets (exact set arithmetic),
quadrature (mass evaluation), concavity (the inequality checkers),
counterexamples (violation families and search), parallel (grown-set
volume curves), cli (scenario runner).  Hot kernels live in _kernels with
a compiled and a numpy backend selected at import.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .measures import Density1D, DensityND, borell_gamma_to_s
from .quadrature import MeasureEvaluator, QuadraturePolicy
from .report import ConcavityReport
from .sets import ConvexPolygon, DirectionUnit, IntervalUnion, ProductSet

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND",
    "Density1D",
    "DensityND",
    "borell_gamma_to_s",
    "MeasureEvaluator",
    "QuadraturePolicy",
    "ConcavityReport",
    "ConvexPolygon",
    "DirectionUnit",
    "IntervalUnion",
    "ProductSet",
    "__version__",
]
