"""Exception hierarchy for lie2vanest."""


class Lie2VanEstError(Exception):
    """Base class for every error raised by the package."""


class ShapeMismatchError(Lie2VanEstError, ValueError):
    """Operands have incompatible shapes or live on different levels."""


class LevelError(Lie2VanEstError, IndexError):
    """A face/degeneracy index or a simplicial level is out of range."""


class CapacityError(Lie2VanEstError):
    """A permutation sum is larger than the supported symmetric group."""


class NumericalError(Lie2VanEstError, ArithmeticError):
    """Non-finite evaluation or residual beyond the documented bound."""


class NormalizationError(Lie2VanEstError, ValueError):
    """Input that must be normalized is not annihilated by degeneracies."""


class AlgebraMismatchError(Lie2VanEstError, ValueError):
    """Weil elements built over different Lie 2-algebras were combined."""


class ConfigError(Lie2VanEstError, ValueError):
    """Invalid run configuration."""
