"""Crossed-module axioms and the Chevalley-Eilenberg and Weil identities."""

import numpy as np

from ..group2 import NerveElement, differentiate
from ..lie2alg import ce_square_check, check_crossed_module, to_lie2
from ..weil import WeilElement, leibniz_residual, weil_d, weil_delta
from .base import CheckOutcome, SuiteAgent, SuiteContext

WEIL_BLOCKS = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (2, 0, 0, 0), (1, 0, 1, 0)]
LEIBNIZ_PAIRS = [
    ((1, 0, 0, 0), (0, 0, 1, 0)),
    ((0, 1, 0, 0), (0, 0, 0, 1)),
    ((0, 0, 1, 0), (1, 0, 0, 0)),
]


class CrossedModuleSuite(SuiteAgent):
    """
    Checks on the crossed module itself.

    Responsibilities:
    - Lie algebra axioms of the linearized crossed module
    - Equivariance and Peiffer identities of the groups
    - Interchange law of the 2-group products
    - Agreement of exact and numerical differentiation
    """

    def __init__(self) -> None:
        super().__init__(
            agent_id="crossed_module",
            name="Crossed Module Suite",
            agent_type="algebra",
        )

        self.add_capability("lie_axioms")
        self.add_capability("group_axioms")
        self.add_capability("interchange")
        self.add_capability("differentiate")

        self.register_handler("lie_axioms", self._check_lie_axioms)
        self.register_handler("group_axioms", self._check_group_axioms)
        self.register_handler("interchange", self._check_interchange)
        self.register_handler("differentiate", self._check_differentiate)

    def default_tolerance(self, context: SuiteContext, check: str) -> float:
        if check == "differentiate":
            return context.tolerances.tol_numdiff
        return context.tolerances.tol_exact

    async def _check_lie_axioms(
        self, context: SuiteContext, rng: np.random.Generator
    ) -> CheckOutcome:
        report = check_crossed_module(context.cm.exact_algebra())
        tolerance = context.tolerances.tol_exact
        return CheckOutcome(len(report.residuals), report.max_residual, tolerance)

    async def _check_group_axioms(
        self, context: SuiteContext, rng: np.random.Generator
    ) -> CheckOutcome:
        cm = context.cm
        outcome = CheckOutcome(0, 0.0, context.tolerances.tol_exact)
        for _ in range(context.budget.points):
            g, h1, h2 = cm.G.sample(rng), cm.H.sample(rng), cm.H.sample(rng)
            outcome.merge(cm.axiom_residual(g, h1, h2), 2)
        return outcome

    async def _check_interchange(
        self, context: SuiteContext, rng: np.random.Generator
    ) -> CheckOutcome:
        cm = context.cm
        outcome = CheckOutcome(0, 0.0, context.tolerances.tol_exact)
        for _ in range(context.budget.points):
            b, d = cm.sample(1, rng), cm.sample(1, rng)
            a = NerveElement((cm.H.sample(rng),), cm.target(b))
            c = NerveElement((cm.H.sample(rng),), cm.target(d))
            outcome.merge(cm.exchange_residual(a, b, c, d))
        return outcome

    async def _check_differentiate(
        self, context: SuiteContext, rng: np.random.Generator
    ) -> CheckOutcome:
        exact = to_lie2(context.cm.exact_algebra())
        numerical = to_lie2(differentiate(context.cm))
        return CheckOutcome(3, exact.residual(numerical), context.tolerances.tol_numdiff)


class WeilSuite(SuiteAgent):
    """
    Identities of the Chevalley-Eilenberg complex and the Weil algebra.

    Responsibilities:
    - δ_CE squares to zero
    - δ and d square to zero and anticommute
    - δ and d are derivations of the product
    """

    def __init__(self) -> None:
        super().__init__(agent_id="weil", name="Weil Suite", agent_type="algebra")

        self.add_capability("ce_square")
        self.add_capability("weil_square")
        self.add_capability("leibniz")

        self.register_handler("ce_square", self._check_ce_square)
        self.register_handler("weil_square", self._check_weil_square)
        self.register_handler("leibniz", self._check_leibniz)

    async def _check_ce_square(
        self, context: SuiteContext, rng: np.random.Generator
    ) -> CheckOutcome:
        alg = to_lie2(context.cm.exact_algebra())
        residual = ce_square_check(alg, rng, max_degree=5)
        return CheckOutcome(1, residual, context.tolerances.tol_exact)

    async def _check_weil_square(
        self, context: SuiteContext, rng: np.random.Generator
    ) -> CheckOutcome:
        alg = to_lie2(context.cm.exact_algebra())
        outcome = CheckOutcome(0, 0.0, context.tolerances.tol_exact)
        for block in WEIL_BLOCKS:
            u = WeilElement.random(alg, [block], rng)
            outcome.merge(weil_delta(weil_delta(u)).max_abs())
            outcome.merge(weil_d(weil_d(u)).max_abs())
            outcome.merge((weil_delta(weil_d(u)) + weil_d(weil_delta(u))).max_abs())
        return outcome

    async def _check_leibniz(self, context: SuiteContext, rng: np.random.Generator) -> CheckOutcome:
        alg = to_lie2(context.cm.exact_algebra())
        outcome = CheckOutcome(0, 0.0, context.tolerances.tol_exact)
        for left, right in LEIBNIZ_PAIRS:
            u = WeilElement.random(alg, [left], rng)
            v = WeilElement.random(alg, [right], rng)
            outcome.merge(leibniz_residual(weil_delta, u, v))
            outcome.merge(leibniz_residual(weil_d, u, v))
        return outcome
