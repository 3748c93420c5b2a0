"""Semantic exception hierarchy shared by all modules."""


class BmlabError(Exception):
    """Base class for every error raised by this package."""


class DomainError(BmlabError, ValueError):
    """An input is outside the documented domain of an operation."""


class DimensionMismatchError(DomainError):
    """Two objects that must share a dimension do not."""


class SubConvexOnlyError(DomainError):
    """gamma < -1/n: the density class carries no power-concavity class for measures."""


class InfiniteMassError(BmlabError):
    """A measure evaluation would be infinite (e.g. the full line under an unnormalizable density)."""


class ConvergenceError(BmlabError, RuntimeError):
    """Adaptive quadrature exhausted its subdivision budget without meeting tolerance."""


class ResourceError(BmlabError, RuntimeError):
    """An operation would exceed its documented resource bound (e.g. sup-convolution grid size)."""


class ConfigError(BmlabError, ValueError):
    """A scenario configuration is malformed or incomplete."""
