"""Checks on the simplicial Lie 2-algebroid, its double complex and the homotopies."""

from typing import List, Optional, Sequence, TypeVar

import numpy as np

from ..algebroid import AFiber, DCElement, random_args, random_dc_element
from ..forms import FormField, RandomNormalizedForm
from ..graded import Signature
from ..group2 import differentiate
from ..lie2alg import CECochain, ce_differential, to_lie2
from ..numcore import tree_residual
from ..weil import WeilElement
from .base import CheckOutcome, Handler, SuiteAgent, SuiteContext

T = TypeVar("T")

DC_BLOCKS: List[Signature] = [(1, 0, 0, 0, 0), (0, 1, 0, 0, 0), (2, 0, 0, 0, 0)]
# tangent slots and shifted fibers
FORM_DC_BLOCKS: List[Signature] = [
    (0, 0, 0, 0, 1),
    (1, 0, 0, 0, 1),
    (0, 1, 0, 0, 1),
    (0, 0, 0, 0, 2),
    (0, 0, 1, 0, 0),
    (0, 0, 0, 1, 0),
]
CE_WEIL_BLOCKS = [(1, 0, 0, 0), (0, 1, 0, 0), (2, 0, 0, 0), (1, 1, 0, 0)]
CE_BLOCKS = [(1, 0), (0, 1), (2, 0), (1, 1)]


def dc_residual(
    context: SuiteContext,
    lhs: DCElement,
    rhs: Optional[DCElement],
    block: Signature,
    rng: np.random.Generator,
) -> float:
    """``|lhs - rhs|`` at a random base point and random arguments; ``rhs=None`` is zero."""
    algebroid = context.algebroid
    base = algebroid.sample_base(lhs.level, rng)
    args = random_args(algebroid, lhs.level, block, rng, base)
    expected = 0.0 if rhs is None else rhs(base, args)
    return abs(lhs(base, args) - expected)


def w_cochain(context: SuiteContext, p: int, rng: np.random.Generator) -> FormField:
    """A random smooth function on ``W_pG``."""
    template = context.group.sample_w(p, rng)
    return FormField(p, 0, RandomNormalizedForm(template, 0, rng), "f")


def cycled(items: Sequence[T], count: int) -> List[T]:
    """``count`` items taken round-robin; empty when ``items`` is."""
    items = list(items)
    return [items[i % len(items)] for i in range(count)] if items else []


def h_pi_factor(p: int) -> int:
    """``Σ_{i<=p} (-1)^i``: h sends ``π*_{p+1} ω`` to this multiple of ``π*_p ω``."""
    return 1 if p % 2 == 0 else 0


class AlgebroidSuite(SuiteAgent):
    """
    The algebroid ``H_• -> A_•`` and its double complex.

    Responsibilities:
    - constant A-faces against the faces computed from ε
    - ``∂∂ = 0`` and ``∂δ + δ∂ = 0``
    - ``ι0*π0* = Id`` and ``∂π0* = 0``
    - ``π0*ι0* = Id`` on ∂-closed elements
    - ``ι0*δπ0*`` against the Chevalley-Eilenberg differential
    - the Lie 2-algebra recovered from the algebroid
    """

    def __init__(self) -> None:
        super().__init__(agent_id="algebroid", name="Algebroid Suite", agent_type="algebroid")

        self.add_capability("a_faces")
        self.add_capability("partial_squared")
        self.add_capability("partial_delta")
        self.add_capability("iota_pi")
        self.add_capability("partial_pi")
        self.add_capability("pi_iota_closed")
        self.add_capability("ce_generators")
        self.add_capability("recovered_structure")

        self.register_handler("a_faces", self._check_a_faces)
        self.register_handler("partial_squared", self._check_partial_squared)
        self.register_handler("partial_delta", self._check_partial_delta)
        self.register_handler("iota_pi", self._check_iota_pi)
        self.register_handler("partial_pi", self._check_partial_pi)
        self.register_handler("pi_iota_closed", self._check_pi_iota_closed)
        self.register_handler("ce_generators", self._check_ce_generators)
        self.register_handler("recovered_structure", self._check_recovered_structure)

    def default_tolerance(self, context: SuiteContext, check: str) -> float:
        if check in ("a_faces", "partial_delta", "ce_generators", "recovered_structure"):
            return context.tolerances.tol_numdiff
        return context.tolerances.tol_exact

    async def _check_a_faces(self, context: SuiteContext, rng: np.random.Generator) -> CheckOutcome:
        algebroid = context.algebroid
        outcome = CheckOutcome(0, 0.0, context.tolerances.tol_numdiff)
        for p in range(1, context.max_level):
            for _ in range(context.budget.points):
                fiber = AFiber(
                    algebroid.sample_base(p, rng), rng.standard_normal(algebroid.levels.dim(p + 1))
                )
                for i in range(p + 1):
                    literal = algebroid.a_face_literal(i, fiber)
                    constant = algebroid.a_face(i, fiber)
                    outcome.merge(float(np.max(np.abs(literal.vec - constant.vec))))
        return outcome

    async def _check_partial_squared(
        self, context: SuiteContext, rng: np.random.Generator
    ) -> CheckOutcome:
        algebroid = context.algebroid
        outcome = CheckOutcome(0, 0.0, context.tolerances.tol_exact)
        for level in range(context.max_level - 1):
            for block in DC_BLOCKS:
                e = random_dc_element(algebroid, level, block, rng)
                twice = algebroid.horizontal_partial(algebroid.horizontal_partial(e))
                outcome.merge(dc_residual(context, twice, None, block, rng))
        return outcome

    async def _check_partial_delta(
        self, context: SuiteContext, rng: np.random.Generator
    ) -> CheckOutcome:
        algebroid = context.algebroid
        outcome = CheckOutcome(0, 0.0, context.tolerances.tol_numdiff)
        for block in DC_BLOCKS[:2]:
            e = random_dc_element(algebroid, 0, block, rng)
            lhs = algebroid.horizontal_partial(algebroid.vertical_delta(e))
            rhs = algebroid.vertical_delta(algebroid.horizontal_partial(e)).scale(-1.0)
            for target in sorted(lhs.blocks | rhs.blocks):
                outcome.merge(dc_residual(context, lhs, rhs, target, rng))
        return outcome

    async def _check_iota_pi(self, context: SuiteContext, rng: np.random.Generator) -> CheckOutcome:
        algebroid = context.algebroid
        outcome = CheckOutcome(0, 0.0, context.tolerances.tol_exact)
        for block in CE_WEIL_BLOCKS:
            omega = WeilElement.random(algebroid.alg, [block], rng)
            back = algebroid.iota_star(algebroid.pi_star(0, omega))
            outcome.merge((back - omega).max_abs())
        return outcome

    async def _check_partial_pi(
        self, context: SuiteContext, rng: np.random.Generator
    ) -> CheckOutcome:
        algebroid = context.algebroid
        outcome = CheckOutcome(0, 0.0, context.tolerances.tol_exact)
        for block in [(1, 0, 0, 0), (0, 1, 0, 0), (2, 0, 0, 0)]:
            pulled = algebroid.pi_star(0, WeilElement.random(algebroid.alg, [block], rng))
            boundary = algebroid.horizontal_partial(pulled)
            target = tuple(block) + (0,)
            outcome.merge(dc_residual(context, boundary, None, target, rng))
        return outcome

    async def _check_pi_iota_closed(
        self, context: SuiteContext, rng: np.random.Generator
    ) -> CheckOutcome:
        algebroid, homotopies = context.algebroid, context.homotopies
        outcome = CheckOutcome(0, 0.0, context.tolerances.tol_exact)
        partial = algebroid.horizontal_partial
        closed: List[DCElement] = []
        # e - h∂e is ∂-closed on level 0
        for block in cycled(DC_BLOCKS, context.budget.dc_elements):
            e = random_dc_element(algebroid, 0, block, rng)
            closed.append(e - homotopies.h_total(partial(e)))
        for block in CE_WEIL_BLOCKS:
            closed.append(algebroid.pi_star(0, WeilElement.random(algebroid.alg, [block], rng)))
        for c in closed:
            for block in sorted(c.blocks):
                outcome.merge(dc_residual(context, partial(c), None, block, rng))
                outcome.merge(dc_residual(context, homotopies.pi_iota(c), c, block, rng))
        return outcome

    async def _check_ce_generators(
        self, context: SuiteContext, rng: np.random.Generator
    ) -> CheckOutcome:
        algebroid = context.algebroid
        alg = algebroid.alg
        outcome = CheckOutcome(0, 0.0, context.tolerances.tol_numdiff)
        for k, l in CE_BLOCKS:
            cochain = CECochain.random(k, l, alg, rng)
            first, second = ce_differential(cochain, alg)
            expected = WeilElement.from_ce(first, alg)
            if second is not None:
                expected = expected + WeilElement.from_ce(second, alg)
            actual = algebroid.iota_star(algebroid.ce_delta(algebroid.pi_star(0, cochain)))
            outcome.merge((actual - expected).max_abs())
        return outcome

    async def _check_recovered_structure(
        self, context: SuiteContext, rng: np.random.Generator
    ) -> CheckOutcome:
        recovered = context.algebroid.recovered_structure()
        numerical = to_lie2(differentiate(context.cm))
        return CheckOutcome(3, recovered.residual(numerical), context.tolerances.tol_numdiff)


class HomotopySuite(SuiteAgent):
    """
    Contracting homotopies.

    Responsibilities:
    - ``h0*∂ + ∂h0* = Id`` and ``∂h + h∂ = Id - π*ι*``, on functions and on forms
    - h on π*-images: ``π*_p ω`` or zero by the parity of p, and commuting with δ
    - ``η0`` is a section of the last face and contracts ``W_•G``
    - side conditions ``η∘η = 0`` and ``ι*∘η = 0``
    """

    def __init__(self) -> None:
        super().__init__(agent_id="homotopy", name="Homotopy Suite", agent_type="algebroid")

        self.add_capability("h0")
        self.add_capability("total")
        self.add_capability("h0_forms")
        self.add_capability("total_forms")
        self.add_capability("h_pi")
        self.add_capability("h_delta")
        self.add_capability("eta0_section")
        self.add_capability("eta0")
        self.add_capability("eta_side")

        self.register_handler("h0", self._h0_handler(DC_BLOCKS, forms=False))
        self.register_handler("total", self._total_handler(DC_BLOCKS, forms=False))
        self.register_handler("h0_forms", self._h0_handler(FORM_DC_BLOCKS, forms=True))
        self.register_handler("total_forms", self._total_handler(FORM_DC_BLOCKS, forms=True))
        self.register_handler("h_pi", self._check_h_pi)
        self.register_handler("h_delta", self._check_h_delta)
        self.register_handler("eta0_section", self._check_eta0_section)
        self.register_handler("eta0", self._check_eta0)
        self.register_handler("eta_side", self._check_eta_side)

    def default_tolerance(self, context: SuiteContext, check: str) -> float:
        if check in ("h0_forms", "total_forms", "h_delta"):
            return context.tolerances.tol_numdiff
        return context.tolerances.tol_exact

    @staticmethod
    def top_level(context: SuiteContext) -> int:
        """Highest level the h identities run on; ``∂`` needs one level above it."""
        return min(context.budget.homotopy_level, context.config.level_cap - 1)

    def _h0_handler(self, blocks: List[Signature], forms: bool) -> Handler:
        async def check(context: SuiteContext, rng: np.random.Generator) -> CheckOutcome:
            algebroid, homotopies = context.algebroid, context.homotopies
            tolerance = self.default_tolerance(context, "h0_forms" if forms else "h0")
            outcome = CheckOutcome(0, 0.0, tolerance)
            partial = algebroid.horizontal_partial
            for level in range(1, self.top_level(context) + 1):
                for block in cycled(blocks, context.budget.dc_elements):
                    e = random_dc_element(algebroid, level, block, rng)
                    lhs = homotopies.h_i(0, partial(e)) + partial(homotopies.h_i(0, e))
                    outcome.merge(dc_residual(context, lhs, e, block, rng))
            return outcome

        return check

    def _total_handler(self, blocks: List[Signature], forms: bool) -> Handler:
        async def check(context: SuiteContext, rng: np.random.Generator) -> CheckOutcome:
            algebroid, homotopies = context.algebroid, context.homotopies
            outcome = CheckOutcome(
                0, 0.0, self.default_tolerance(context, "total_forms" if forms else "total")
            )
            for level in range(self.top_level(context) + 1):
                for block in cycled(blocks, context.budget.dc_elements):
                    e = random_dc_element(algebroid, level, block, rng)
                    lhs = homotopies.h_total(algebroid.horizontal_partial(e))
                    if level >= 1:
                        lhs = lhs + algebroid.horizontal_partial(homotopies.h_total(e))
                    rhs = e - homotopies.pi_iota(e)
                    outcome.merge(dc_residual(context, lhs, rhs, block, rng))
            return outcome

        return check

    async def _check_h_pi(self, context: SuiteContext, rng: np.random.Generator) -> CheckOutcome:
        algebroid, homotopies = context.algebroid, context.homotopies
        outcome = CheckOutcome(0, 0.0, context.tolerances.tol_exact)
        for p in range(self.top_level(context)):
            for block in CE_WEIL_BLOCKS:
                omega = WeilElement.random(algebroid.alg, [block], rng)
                lhs = homotopies.h_total(algebroid.pi_star(p + 1, omega))
                expected = algebroid.pi_star(p, omega).scale(h_pi_factor(p))
                outcome.merge(dc_residual(context, lhs, expected, tuple(block) + (0,), rng))
        return outcome

    async def _check_h_delta(
        self, context: SuiteContext, rng: np.random.Generator
    ) -> CheckOutcome:
        algebroid, homotopies = context.algebroid, context.homotopies
        outcome = CheckOutcome(0, 0.0, context.tolerances.tol_numdiff)
        for p in range(self.top_level(context)):
            for block in CE_WEIL_BLOCKS[:2]:
                pulled = algebroid.pi_star(p + 1, WeilElement.random(algebroid.alg, [block], rng))
                lhs = algebroid.ce_delta(homotopies.h_total(pulled))
                rhs = homotopies.h_total(algebroid.ce_delta(pulled))
                for target in sorted(lhs.blocks | rhs.blocks):
                    outcome.merge(dc_residual(context, lhs, rhs, target, rng))
        return outcome

    async def _check_eta0_section(
        self, context: SuiteContext, rng: np.random.Generator
    ) -> CheckOutcome:
        group, homotopies = context.group, context.homotopies
        outcome = CheckOutcome(0, 0.0, context.tolerances.tol_exact)
        for p in range(context.max_level):
            for _ in range(context.budget.points):
                stack = group.sample_w(p, rng)
                lifted = homotopies.eta0_map(stack)
                outcome.merge(tree_residual(group.w_face(p + 1, lifted), stack))
        return outcome

    async def _check_eta0(self, context: SuiteContext, rng: np.random.Generator) -> CheckOutcome:
        group, homotopies = context.group, context.homotopies
        outcome = CheckOutcome(0, 0.0, context.tolerances.tol_exact)
        for p in cycled(range(context.max_level - 1), context.budget.dc_elements):
            f = w_cochain(context, p, rng)
            lhs = homotopies.eta0(homotopies.w_coboundary(f))
            if p >= 1:
                lhs = lhs + homotopies.w_coboundary(homotopies.eta0(f))
            at_unit = f(group.WbarG.unit(1)) if p == 0 else 0.0
            for _ in range(context.budget.points):
                x = group.sample_w(p, rng)
                outcome.merge(abs(lhs(x) - f(x) + at_unit))
        return outcome

    async def _check_eta_side(
        self, context: SuiteContext, rng: np.random.Generator
    ) -> CheckOutcome:
        group, homotopies = context.group, context.homotopies
        outcome = CheckOutcome(0, 0.0, context.tolerances.tol_exact)
        for _ in range(context.budget.dc_elements):
            f = w_cochain(context, 2, rng)
            twice = homotopies.eta(homotopies.eta(f))
            outcome.merge(abs(twice(group.sample_w(0, rng))))
        # random cochains vanish at the unit
        for p in cycled(range(context.max_level - 1), context.budget.dc_elements):
            g = w_cochain(context, p + 1, rng)
            outcome.merge(abs(homotopies.eta(g)(group.WbarG.unit(p + 1))))
        return outcome
