"""Simplicial identities of the models and the splitting ε."""

from typing import Dict

import numpy as np

from ..simplicial import SimplicialModel, epsilon_residual, simplicial_identity_residual
from .base import CheckOutcome, Handler, SuiteAgent, SuiteContext

SPLITTING_CHECKS = ("section", "faces", "degeneracies", "closed_form")


class SimplicialSuite(SuiteAgent):
    """
    Simplicial identities on random points of every model.

    Responsibilities:
    - Nerve G_• and its décalage
    - W̄G and WG
    - W̄(dec G) and W(dec G)
    """

    def __init__(self) -> None:
        super().__init__(agent_id="simplicial", name="Simplicial Suite", agent_type="simplicial")

        for check in ("nerve", "decalage", "wbar", "w", "wbar_dec", "w_dec"):
            self.add_capability(check)
            self.register_handler(check, self._identities(check))

    @staticmethod
    def _models(context: SuiteContext) -> Dict[str, SimplicialModel]:
        group = context.group
        return {
            "nerve": group.G,
            "decalage": group.decG,
            "wbar": group.WbarG,
            "w": group.WG,
            "wbar_dec": group.WbarDecG,
            "w_dec": group.WDecG,
        }

    def _identities(self, check: str) -> Handler:
        async def run(context: SuiteContext, rng: np.random.Generator) -> CheckOutcome:
            model = self._models(context)[check]
            outcome = CheckOutcome(0, 0.0, context.tolerances.tol_exact)
            for n in range(min(context.config.level_cap, model.cap) + 1):
                for _ in range(context.budget.points):
                    outcome.merge(simplicial_identity_residual(model, n, model.sample(n, rng)))
            return outcome

        return run


class SplittingSuite(SuiteAgent):
    """
    The splitting ``ε: WG -> W(dec G)``.

    Responsibilities:
    - ``W d_0 ∘ ε = Id``
    - compatibility with faces and degeneracies
    - agreement with the crossed-module closed form
    """

    def __init__(self) -> None:
        super().__init__(agent_id="splitting", name="Splitting Suite", agent_type="simplicial")

        for check in SPLITTING_CHECKS:
            self.add_capability(check)
            self.register_handler(check, self._splitting(check))

    def _splitting(self, check: str) -> Handler:
        async def run(context: SuiteContext, rng: np.random.Generator) -> CheckOutcome:
            group = context.group
            top = min(context.config.level_cap, group.cap - 1, 4)
            if check == "closed_form":
                top = min(top, 3)
            outcome = CheckOutcome(0, 0.0, context.tolerances.tol_exact)
            for p in range(top + 1):
                for _ in range(context.budget.points):
                    residuals = epsilon_residual(group, group.sample_w(p, rng))
                    outcome.merge(residuals[check])
            return outcome

        return run
