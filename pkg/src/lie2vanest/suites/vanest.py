"""The van Est map and the coadjoint example."""

from typing import List, Tuple

import numpy as np

from ..coadjoint_example import (
    CLOSURE_TOLERANCE,
    PHI_BLOCK_TOLERANCE,
    PHI_RELATIVE_TOLERANCE,
    CoadjointModel,
)
from ..exceptions import ConfigError
from ..forms import FormField, random_normalized_form
from .base import CheckOutcome, Handler, SuiteAgent, SuiteContext

# (level, degree, mixed)
FormCase = Tuple[int, int, bool]


def random_form(
    context: SuiteContext, p: int, r: int, rng: np.random.Generator, mixed: bool = False
) -> FormField:
    """A random normalized r-form on level ``p`` of ``W̄G``."""
    return random_normalized_form(context.group.WbarG, p, r, rng, mixed)


def cochain_map_cases(context: SuiteContext) -> List[FormCase]:
    """``cochain_map_forms`` forms per ``(p, r)``, alternating product and mixed forms."""
    budget = context.budget
    top = min(context.config.level_cap - 1, budget.cochain_map_level)
    return [
        (p, r, i % 2 == 0)
        for p in range(1, top + 1)
        for r in range(budget.cochain_map_degree + 1)
        for i in range(budget.cochain_map_forms)
    ]


def zigzag_cases(context: SuiteContext) -> List[FormCase]:
    """Cochains and 1-forms spread over levels ``1..top``; mixed forms on the first pass."""
    budget = context.budget
    top = min(context.config.level_cap - 1, budget.zigzag_level)
    if top < 1:
        return []
    cases = []
    for count, degree in ((budget.zigzag_cochains, 0), (budget.zigzag_forms, 1)):
        for i in range(count):
            cases.append((1 + i % top, degree, (i // top) % 2 == 0))
    return cases


class VanEstSuite(SuiteAgent):
    """
    The van Est map on random normalized forms.

    Responsibilities:
    - ``Φ∂̄ = (-1)^r δΦ`` and ``Φd = dΦ``
    - agreement with the perturbation zig-zag
    """

    def __init__(self) -> None:
        super().__init__(agent_id="vanest", name="Van Est Suite", agent_type="vanest")

        self.add_capability("cochain_map")
        self.add_capability("de_rham")
        self.add_capability("zigzag")

        self.register_handler("cochain_map", self._check_cochain_map)
        self.register_handler("de_rham", self._check_de_rham)
        self.register_handler("zigzag", self._check_zigzag)

    def default_tolerance(self, context: SuiteContext, check: str) -> float:
        return context.tolerances.tol_oracle

    async def _cochain_map(
        self, context: SuiteContext, rng: np.random.Generator, key: str
    ) -> CheckOutcome:
        outcome = CheckOutcome(0, 0.0, context.tolerances.tol_oracle)
        for p, r, mixed in cochain_map_cases(context):
            residuals = context.vanest.cochain_map_check(random_form(context, p, r, rng, mixed))
            outcome.merge(residuals[key])
        return outcome

    async def _check_cochain_map(
        self, context: SuiteContext, rng: np.random.Generator
    ) -> CheckOutcome:
        return await self._cochain_map(context, rng, "coboundary")

    async def _check_de_rham(self, context: SuiteContext, rng: np.random.Generator) -> CheckOutcome:
        return await self._cochain_map(context, rng, "de_rham")

    async def _check_zigzag(self, context: SuiteContext, rng: np.random.Generator) -> CheckOutcome:
        outcome = CheckOutcome(0, 0.0, context.tolerances.tol_oracle)
        for p, r, mixed in zigzag_cases(context):
            form = random_form(context, p, r, rng, mixed)
            direct = context.vanest.phi_full(form)
            zigzag = context.homotopies.perturbation_zigzag(form, check=False)
            outcome.merge((direct - zigzag).max_abs())
        return outcome


class CoadjointSuite(SuiteAgent):
    """
    The coadjoint 2-group ``g* ⋊ G ⇉ G`` and its tautological forms.

    Responsibilities:
    - Φ of ``p2*θ`` against ``<ξ, z>``, block by block
    - Φ of ``p2*ω`` against ``ω^inf``
    - non-degeneracy pairing at the unit
    - closure under ``∂̄``
    - the hand-written level-3 face table
    - exact against chart-computed ``p2*ω``
    """

    def __init__(self) -> None:
        super().__init__(agent_id="coadjoint", name="Coadjoint Suite", agent_type="vanest")

        self.add_capability("phi_oracle")
        self.add_capability("phi_other_blocks")
        self.add_capability("phi_omega")
        self.add_capability("nondegeneracy")
        self.add_capability("closure")
        self.add_capability("face_table")
        self.add_capability("omega_charts")

        self.register_handler("phi_oracle", self._phi_handler("phi_0110"))
        self.register_handler("phi_other_blocks", self._phi_handler("other_blocks"))
        self.register_handler("phi_omega", self._phi_handler("omega_inf"))
        self.register_handler("nondegeneracy", self._check_nondegeneracy)
        self.register_handler("closure", self._check_closure)
        self.register_handler("face_table", self._check_face_table)
        self.register_handler("omega_charts", self._check_omega_charts)

    def checks(self, context: SuiteContext) -> List[str]:
        if context.coadjoint is None:
            return []
        return list(self.capabilities)

    def default_tolerance(self, context: SuiteContext, check: str) -> float:
        return {
            "phi_oracle": PHI_RELATIVE_TOLERANCE,
            "phi_other_blocks": PHI_BLOCK_TOLERANCE,
            "phi_omega": context.tolerances.tol_oracle,
            "nondegeneracy": context.tolerances.tol_numdiff,
            "closure": CLOSURE_TOLERANCE,
            "face_table": context.tolerances.tol_exact,
            "omega_charts": context.tolerances.tol_numdiff,
        }.get(check, context.tolerances.tol_exact)

    @staticmethod
    def _model(context: SuiteContext) -> CoadjointModel:
        model = context.coadjoint
        if model is None:
            raise ConfigError("the coadjoint checks need the coadjoint example")
        return model

    def _phi_handler(self, key: str) -> Handler:
        async def check(context: SuiteContext, rng: np.random.Generator) -> CheckOutcome:
            result = self._model(context).verify_phi(context.tolerances.tol_oracle)[key]
            return CheckOutcome(result.assertions, result.residual, result.tolerance)

        return check

    async def _check_nondegeneracy(
        self, context: SuiteContext, rng: np.random.Generator
    ) -> CheckOutcome:
        model = self._model(context)
        outcome = CheckOutcome(0, 0.0, context.tolerances.tol_numdiff)
        for _ in range(context.budget.pairs):
            eta, v = rng.standard_normal(model.n), rng.standard_normal(model.n)
            expected = model.pairing(eta, v)
            actual = model.nondegeneracy_pairing(eta, v)
            outcome.merge(abs(actual - expected) / max(1.0, abs(expected)))
        return outcome

    async def _check_closure(self, context: SuiteContext, rng: np.random.Generator) -> CheckOutcome:
        points = context.budget.closure_points
        residuals = self._model(context).closure_residual(rng, samples=points)
        return CheckOutcome(2 * points, max(residuals.values()), CLOSURE_TOLERANCE)

    async def _check_face_table(
        self, context: SuiteContext, rng: np.random.Generator
    ) -> CheckOutcome:
        model = self._model(context)
        outcome = CheckOutcome(0, 0.0, context.tolerances.tol_exact)
        for _ in range(context.budget.points):
            outcome.merge(model.face_table_residual(model.K.sample(3, rng)), 4)
        return outcome

    async def _check_omega_charts(
        self, context: SuiteContext, rng: np.random.Generator
    ) -> CheckOutcome:
        residual = self._model(context).omega_consistency(rng, samples=context.config.samples)
        return CheckOutcome(context.config.samples, residual, context.tolerances.tol_numdiff)
