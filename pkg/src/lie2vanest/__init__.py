"""
lie2vanest.

Simplicial differentiation of strict Lie 2-groups given by matrix crossed
modules, the van Est map to the Weil algebra of the differentiated Lie
2-algebra, and the ``verify`` harness that checks all of it numerically.
"""

from .algebroid import Lie2Algebroid
from .coadjoint_example import CoadjointModel
from .config import RunConfig, ToleranceConfig
from .exceptions import (
    AlgebraMismatchError,
    CapacityError,
    ConfigError,
    Lie2VanEstError,
    LevelError,
    NormalizationError,
    NumericalError,
    ShapeMismatchError,
)
from .group2 import MatrixCrossedModule, crossed_module_by_name, differentiate
from .homotopy import Homotopies
from .lie2alg import CrossedModuleAlgData, Lie2AlgebraData
from .report import CheckReport, Report
from .runner import run
from .simplicial import StrictLie2Group
from .vanest import OperatorWord, VanEstMap
from .weil import WeilElement

__version__ = "1.0.0"

__all__ = [
    "AlgebraMismatchError",
    "CapacityError",
    "CheckReport",
    "CoadjointModel",
    "ConfigError",
    "CrossedModuleAlgData",
    "Homotopies",
    "Lie2Algebroid",
    "Lie2AlgebraData",
    "Lie2VanEstError",
    "LevelError",
    "MatrixCrossedModule",
    "NormalizationError",
    "NumericalError",
    "OperatorWord",
    "Report",
    "RunConfig",
    "ShapeMismatchError",
    "StrictLie2Group",
    "ToleranceConfig",
    "VanEstMap",
    "WeilElement",
    "crossed_module_by_name",
    "differentiate",
    "run",
]
