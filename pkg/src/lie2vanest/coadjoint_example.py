"""
The shifted symplectic 2-group of a coadjoint crossed module.

For ``(G, g*, 1, Ad*)`` the level-3 space of ``K = W̄G`` carries the pullback
``p2*θ`` of the tautological form ``θ = <ξ, θ^r_g>`` on ``g* × G`` and its
differential ``p2*ω`` with ``ω = -dθ``. Φ sends ``p2*θ`` to ``<ξ, z>`` and
``p2*ω`` to ``ω^inf = -d<ξ, z>``.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, Sequence, Tuple

import numpy as np

from .forms import FormField, chart_d, random_tangent, simplicial_coboundary
from .group2 import NerveElement, adjoint_matrix, coadjoint_crossed_module
from .groups import MatrixGroupSpec
from .numcore import NESTED_STEP, linear_apply, mat_inv, push_forward, tree_residual
from .simplicial import Stack, StrictLie2Group
from .vanest import VanEstMap
from .weil import WeilElement, weil_d

logger = logging.getLogger(__name__)

ORACLE_TOLERANCE = 1e-5
PHI_RELATIVE_TOLERANCE = 1e-6
PHI_BLOCK_TOLERANCE = 1e-8
THETA_BLOCK = (0, 1, 1, 0)
CLOSURE_TOLERANCE = 1e-9

Coordinates = Tuple[Any, Any]


@dataclass(frozen=True)
class OracleResult:
    """One closed-form comparison: how many entries, the worst error, the bound."""

    assertions: int
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance


class CoadjointModel:
    """
    ``K = W̄(g* ⋊ G ⇉ G)`` with the tautological forms.

    Points of ``g*`` are unipotent ``[[I, ξ], [0, 1]]``; ``ξ`` is read off the
    last column and paired with ``g`` in the dual basis.
    """

    def __init__(self, G: MatrixGroupSpec, step: float = NESTED_STEP):
        self.G = G
        self.n = G.dim
        self.cm = coadjoint_crossed_module(G)
        self.group = StrictLie2Group(self.cm)
        self.K = self.group.WbarG
        self.vanest = VanEstMap(self.group, step=step)
        self.step = step

    def __repr__(self) -> str:
        return f"CoadjointModel({self.G.name})"

    @staticmethod
    def pairing(xi: np.ndarray, x: np.ndarray) -> float:
        return float(np.dot(xi, x))

    def covector(self, h: Any) -> Any:
        n = self.n
        return linear_apply(lambda m: m[:n, n], h)

    def p2(self, stack: Stack) -> Coordinates:
        """``(ξ_2, g_1)`` of a level-3 point, with ``ξ_2`` moved back along the top vertex."""
        top = stack[0]
        return self.covector(self.cm.act(mat_inv(top.g), top.hs[1])), stack[1].g

    # forms

    def _theta_at(self, point: Coordinates, tangent: Coordinates) -> float:
        xi, g = point
        _, dg = tangent
        return self.pairing(xi, self.G.coords(dg @ np.linalg.inv(g)))

    def theta_form(self) -> FormField:
        """``p2*θ`` at level 3, degree 1."""

        def evaluate(stack: Stack, tangents: Sequence[Stack]) -> float:
            point, pushed = push_forward(self.p2, stack, tangents[0])
            return self._theta_at(point, pushed)

        return FormField(3, 1, evaluate, "p2*θ")

    def omega_form(self, exact: bool = True) -> FormField:
        """
        ``p2*ω`` with ``ω = -dθ``.

        The exact version expands ``dθ(U, V) = <dξ(U), θ^r V> - <dξ(V), θ^r U>
        + <ξ, [θ^r U, θ^r V]>``; the other one runs :func:`chart_d` on ``p2*θ``.
        """
        if not exact:
            return chart_d(self.theta_form(), step=self.step).scale(-1.0)

        def evaluate(stack: Stack, tangents: Sequence[Stack]) -> float:
            pushed = [push_forward(self.p2, stack, v) for v in tangents]
            xi, g = pushed[0][0]
            (dxi_u, dg_u), (dxi_v, dg_v) = pushed[0][1], pushed[1][1]
            g_inv = np.linalg.inv(g)
            theta_u, theta_v = dg_u @ g_inv, dg_v @ g_inv
            d_theta = (
                self.pairing(dxi_u, self.G.coords(theta_v))
                - self.pairing(dxi_v, self.G.coords(theta_u))
                + self.pairing(xi, self.G.coords(theta_u @ theta_v - theta_v @ theta_u))
            )
            return -d_theta

        return FormField(3, 2, evaluate, "p2*ω")

    # checks

    def face_table(self, stack: Stack) -> Dict[int, Tuple[np.ndarray, ...]]:
        """
        Level-3 faces in ``(ξ, g)`` coordinates, written out by hand.

        For ``(ξ1, ξ2, g2; ξ, g1; g0)``: ``∂̄0 = (ξ, g1; g0)``,
        ``∂̄1 = (ξ2 + Ad*_{g2} ξ, g2 g1; g0)``, ``∂̄2 = (ξ1 + ξ2, g2; g1 g0)`` and
        ``∂̄3 = (ξ1, g2; g1)``.
        """
        (h1, h2), g2 = stack[0]
        (h,), g1 = stack[1]
        g0 = stack[2].g
        xi1, xi2, xi = (self.covector(m) for m in (h1, h2, h))
        coadjoint = np.linalg.inv(adjoint_matrix(self.G, g2)).T
        return {
            0: (xi, g1, g0),
            1: (xi2 + coadjoint @ xi, g2 @ g1, g0),
            2: (xi1 + xi2, g2, g1 @ g0),
            3: (xi1, g2, g1),
        }

    def face_table_residual(self, stack: Stack) -> float:
        residual = 0.0
        for i, expected in self.face_table(stack).items():
            face = self.K.face(3, i, stack)
            (hh,), gg = face[0]
            actual = (self.covector(hh), gg, face[1].g)
            residual = max(residual, tree_residual(actual, expected))
        return residual

    def nondegeneracy_pairing(self, eta: np.ndarray, v: np.ndarray, exact: bool = True) -> float:
        """
        ``ω(σ̄0 η, σ̄2σ̄1 v) - ω(σ̄1 η, σ̄2σ̄0 v) + ω(σ̄2 η, σ̄1σ̄0 v)``
        at the unit.

        ``η`` is a tangent to ``g*`` at the level-2 unit and ``v`` a tangent to
        G at the level-1 unit.
        """
        omega = self.omega_form(exact)
        K = self.K
        eta_tangent = (
            NerveElement((self.cm.H.hat(eta),), np.zeros_like(self.G.identity())),
            NerveElement((), np.zeros_like(self.G.identity())),
        )
        v_tangent = (NerveElement((), self.G.hat(v)),)
        unit2, unit1 = K.unit(2), K.unit(1)

        def lift_eta(i: int) -> Stack:
            return push_forward(lambda s: K.degeneracy(2, i, s), unit2, eta_tangent)[1]

        def lift_v(outer: int, inner: int) -> Stack:
            def both(s: Stack) -> Stack:
                return K.degeneracy(2, outer, K.degeneracy(1, inner, s))

            return push_forward(both, unit1, v_tangent)[1]

        point = K.unit(3)
        return (
            omega(point, [lift_eta(0), lift_v(2, 1)])
            - omega(point, [lift_eta(1), lift_v(2, 0)])
            + omega(point, [lift_eta(2), lift_v(1, 0)])
        )

    def closure_residual(self, rng: np.random.Generator, samples: int = 5) -> Dict[str, float]:
        """Pointwise ``|∂̄(p2*θ)|`` and ``|∂̄(p2*ω)|`` at level 4."""
        theta = simplicial_coboundary(self.theta_form(), self.K)
        omega = simplicial_coboundary(self.omega_form(), self.K)
        residuals = {"theta": 0.0, "omega": 0.0}
        for _ in range(samples):
            point = self.K.sample(4, rng)
            u, v = (random_tangent(self.cm, point, rng) for _ in range(2))
            residuals["theta"] = max(residuals["theta"], abs(theta(point, [u])))
            residuals["omega"] = max(residuals["omega"], abs(omega(point, [u, v])))
        return residuals

    def omega_consistency(self, rng: np.random.Generator, samples: int = 3) -> float:
        """Exact against chart-computed ``p2*ω``."""
        exact, charted = self.omega_form(True), self.omega_form(False)
        residual = 0.0
        for _ in range(samples):
            point = self.K.sample(3, rng)
            u, v = (random_tangent(self.cm, point, rng) for _ in range(2))
            residual = max(residual, abs(exact(point, [u, v]) - charted(point, [u, v])))
        return residual

    def theta_inf(self) -> WeilElement:
        """``<ξ, z>`` as the (0, 1, 1, 0) block."""
        return WeilElement(self.vanest.alg, {(0, 1, 1, 0): np.eye(self.n)}, project=False)

    @cached_property
    def theta_image(self) -> WeilElement:
        """``Φ(p2*θ)``, computed once."""
        return self.vanest.phi_full(self.theta_form())

    @cached_property
    def omega_image(self) -> WeilElement:
        """``Φ(p2*ω)``, computed once."""
        return self.vanest.phi_full(self.omega_form())

    def verify_phi(self, omega_tolerance: float = ORACLE_TOLERANCE) -> Dict[str, OracleResult]:
        """
        Φ(p2*θ) = <ξ, z> and Φ(p2*ω) = -d<ξ, z>.

        ``phi_0110`` compares every basis pair ``(e_i, e^j)`` with relative
        error; the other blocks of ``Φ(p2*θ)`` must vanish.
        """
        theta_image = self.theta_image
        expected = np.eye(self.n)
        block = theta_image.component(THETA_BLOCK)
        relative = np.abs(block - expected) / np.maximum(1.0, np.abs(expected))
        others = [theta_image.component(b) for b in theta_image.blocks if b != THETA_BLOCK]
        omega_error = self.omega_image + weil_d(self.theta_inf())
        results = {
            "phi_0110": OracleResult(block.size, float(np.max(relative)), PHI_RELATIVE_TOLERANCE),
            "other_blocks": OracleResult(
                sum(t.size for t in others),
                max((float(np.max(np.abs(t))) for t in others if t.size), default=0.0),
                PHI_BLOCK_TOLERANCE,
            ),
            "omega_inf": OracleResult(
                sum(t.size for t in omega_error.blocks.values()),
                omega_error.max_abs(),
                omega_tolerance,
            ),
        }
        logger.info(
            f"Coadjoint Φ residuals for {self.G.name}: "
            f"{ {key: result.residual for key, result in results.items()} }"
        )
        return results
