"""
Suite agents.

A suite agent owns a family of named checks. Each check is a capability with
a registered handler returning a :class:`CheckOutcome`; ``execute_task`` runs
one check and never raises.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Awaitable, Callable, Dict, List, Optional

import numpy as np

from ..algebroid import Lie2Algebroid
from ..coadjoint_example import CoadjointModel
from ..config import ExampleName, RunConfig
from ..group2 import MatrixCrossedModule, crossed_module_by_name
from ..groups import group_by_name
from ..homotopy import Homotopies
from ..simplicial import StrictLie2Group
from ..vanest import VanEstMap

logger = logging.getLogger(__name__)


@dataclass
class CheckOutcome:
    """Assertions evaluated by one check and the worst residual among them."""

    assertions: int
    max_residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return math.isfinite(self.max_residual) and self.max_residual <= self.tolerance

    def merge(self, residual: float, count: int = 1) -> None:
        self.assertions += count
        self.max_residual = max(self.max_residual, residual)


@dataclass
class SuiteTask:
    """One check to run, with its pre-seeded generator."""

    id: str
    name: str
    params: Dict[str, Any] = field(default_factory=dict)


@dataclass
class SuiteResult:
    task_id: str
    success: bool
    outcome: CheckOutcome
    error: Optional[str] = None
    metadata: Dict[str, Any] = field(default_factory=dict)


class SuiteContext:
    """The objects a run checks, built once from the config and shared by all agents."""

    def __init__(self, config: RunConfig, cm: Optional[MatrixCrossedModule] = None):
        self.config = config
        self.tolerances = config.tolerances
        self.budget = config.budget
        if cm is None:
            cm = crossed_module_by_name(
                config.group.value, config.crossed_module.value, config.group_dim
            )
        self.cm = cm
        self.group = StrictLie2Group(cm, cap=config.level_cap)
        self._algebroid: Optional[Lie2Algebroid] = None
        self._homotopies: Optional[Homotopies] = None
        self._vanest: Optional[VanEstMap] = None
        self._coadjoint: Optional[CoadjointModel] = None

    @property
    def algebroid(self) -> Lie2Algebroid:
        if self._algebroid is None:
            self._algebroid = Lie2Algebroid(self.group)
        return self._algebroid

    @property
    def homotopies(self) -> Homotopies:
        if self._homotopies is None:
            self._homotopies = Homotopies(self.algebroid)
        return self._homotopies

    @property
    def vanest(self) -> VanEstMap:
        if self._vanest is None:
            self._vanest = VanEstMap(self.group)
        return self._vanest

    @property
    def coadjoint(self) -> Optional[CoadjointModel]:
        if self.config.example != ExampleName.COADJOINT:
            return None
        if self._coadjoint is None:
            G = group_by_name(self.config.group.value, self.config.group_dim)
            self._coadjoint = CoadjointModel(G)
        return self._coadjoint

    @property
    def max_level(self) -> int:
        # the heavier checks stop at level 3 whatever the cap
        return min(self.config.level_cap, 3)


Handler = Callable[[SuiteContext, np.random.Generator], Awaitable[CheckOutcome]]


class SuiteAgent:
    """Base class of the suite agents."""

    def __init__(self, agent_id: str, name: str, agent_type: str = "suite"):
        self.agent_id = agent_id
        self.name = name
        self.agent_type = agent_type
        self.capabilities: List[str] = []
        self.handlers: Dict[str, Handler] = {}
        self.logger = logging.getLogger(f"{__name__}.{agent_id}")

    def add_capability(self, capability: str) -> None:
        if capability not in self.capabilities:
            self.capabilities.append(capability)

    def register_handler(self, capability: str, handler: Handler) -> None:
        self.handlers[capability] = handler

    async def execute_task(self, task: SuiteTask) -> SuiteResult:
        context: SuiteContext = task.params["context"]
        rng: np.random.Generator = task.params["rng"]
        metadata = {"agent": self.name, "task_type": task.name}
        try:
            self.logger.info(f"Running check {self.agent_id}/{task.name}")
            handler = self.handlers.get(task.name)
            if handler is None:
                raise KeyError(f"{self.name} has no check named {task.name!r}")
            outcome = await handler(context, rng)
            self.logger.info(
                f"Finished {self.agent_id}/{task.name}: {outcome.assertions} assertions, "
                f"max residual {outcome.max_residual:.3e}"
            )
            return SuiteResult(task.id, outcome.passed, outcome, metadata=metadata)
        except Exception as e:
            self.logger.error(f"❌ Error in check {self.agent_id}/{task.name}: {str(e)}")
            failed = CheckOutcome(0, math.inf, self.default_tolerance(context, task.name))
            return SuiteResult(task.id, False, failed, error=str(e), metadata=metadata)

    def default_tolerance(self, context: SuiteContext, check: str) -> float:
        return context.tolerances.tol_exact

    def checks(self, context: SuiteContext) -> List[str]:
        """The checks that apply to this context (all capabilities by default)."""
        return list(self.capabilities)
