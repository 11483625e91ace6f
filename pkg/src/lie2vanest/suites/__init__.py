"""Suite agents, one per verification suite."""

from typing import Dict, Type

from ..config import SuiteName
from .algebra import CrossedModuleSuite, WeilSuite
from .algebroid import AlgebroidSuite, HomotopySuite
from .base import CheckOutcome, SuiteAgent, SuiteContext, SuiteResult, SuiteTask
from .simplicial import SimplicialSuite, SplittingSuite
from .vanest import CoadjointSuite, VanEstSuite

AGENTS: Dict[SuiteName, Type[SuiteAgent]] = {
    SuiteName.CROSSED_MODULE: CrossedModuleSuite,
    SuiteName.SIMPLICIAL: SimplicialSuite,
    SuiteName.SPLITTING: SplittingSuite,
    SuiteName.ALGEBROID: AlgebroidSuite,
    SuiteName.HOMOTOPY: HomotopySuite,
    SuiteName.WEIL: WeilSuite,
    SuiteName.VANEST: VanEstSuite,
    SuiteName.COADJOINT: CoadjointSuite,
}

__all__ = [
    "AGENTS",
    "AlgebroidSuite",
    "CheckOutcome",
    "CoadjointSuite",
    "CrossedModuleSuite",
    "HomotopySuite",
    "SimplicialSuite",
    "SplittingSuite",
    "SuiteAgent",
    "SuiteContext",
    "SuiteResult",
    "SuiteTask",
    "VanEstSuite",
    "WeilSuite",
]
