"""
Crossed modules of matrix Lie groups and the strict 2-group G_•.

A p-simplex of the nerve of ``H ⋊ G ⇉ G`` is stored as ``(h_1, ..., h_p; g)``.
Its vertices are ``x_i = ∂(h_{i+1} ⋯ h_p) g`` and its i-th arrow is
``(h_i; x_i)``, going from ``x_i`` to ``x_{i-1}``.

Every operation here is written with matrix products, inverses and the two
structure maps only, so feeding ``TangentAt`` values through them yields the
exact tangent maps.
"""

import logging
from functools import cached_property
from typing import Any, Callable, NamedTuple, Sequence, Tuple

import numpy as np
from scipy.linalg import expm

from .exceptions import ConfigError, LevelError, NumericalError, ShapeMismatchError
from .groups import MatrixGroupSpec, group_by_name, vector_group
from .lie2alg import (
    CrossedModuleAlgData,
    Lie2AlgebraData,
    LieAlgebraData,
    check_crossed_module,
    to_lie2,
)
from .numcore import (
    DEFAULT_STEP,
    MatLike,
    TangentAt,
    base_of,
    bilinear_apply,
    constant_like,
    curve_derivative,
    mat_inv,
    tree_residual,
)

logger = logging.getLogger(__name__)

DIFFERENTIATE_TOLERANCE = 1e-8


class NerveElement(NamedTuple):
    """A p-simplex ``(h_1, ..., h_p; g)`` of the nerve."""

    hs: Tuple[Any, ...]
    g: Any

    @property
    def level(self) -> int:
        return len(self.hs)


class MatrixCrossedModule:
    """
    Crossed module ``(G, H, ∂, α)`` of matrix groups.

    The action is ``α(g, h) = Φ(g) h Φ(g)^-1`` for a representation ``Φ`` of G
    on the ambient space of H.
    """

    def __init__(
        self,
        G: MatrixGroupSpec,
        H: MatrixGroupSpec,
        boundary: Callable[[MatLike], MatLike],
        representation: Callable[[MatLike], MatLike],
        name: str = "custom",
    ):
        self.G = G
        self.H = H
        self._boundary = boundary
        self._representation = representation
        self.name = name

    def __repr__(self) -> str:
        return f"MatrixCrossedModule({self.name}, G={self.G.name}, H={self.H.name})"

    # structure maps

    def boundary(self, h: MatLike) -> MatLike:
        return self._boundary(h)

    def representation(self, g: MatLike) -> MatLike:
        return self._representation(g)

    def act(self, g: MatLike, h: MatLike) -> MatLike:
        """``h^g``."""
        rep = self.representation(g)
        return rep @ h @ mat_inv(rep)

    def d_boundary(self, eta: np.ndarray) -> np.ndarray:
        """Differential of ∂ at the unit on an algebra matrix."""
        eye = self.H.identity()
        return self.boundary(TangentAt(eye, eta)).dir

    def d_representation(self, x: np.ndarray) -> np.ndarray:
        return self.representation(TangentAt(self.G.identity(), x)).dir

    def axiom_residual(self, g: np.ndarray, h1: np.ndarray, h2: np.ndarray) -> float:
        """Equivariance and Peiffer residuals at sample points."""
        equivariance = tree_residual(
            self.boundary(self.act(g, h1)), g @ self.boundary(h1) @ np.linalg.inv(g)
        )
        peiffer = tree_residual(
            self.act(self.boundary(h1), h2), h1 @ h2 @ np.linalg.inv(h1)
        )
        return max(equivariance, peiffer)

    # nerve

    def _h_unit(self, like: Any) -> MatLike:
        return constant_like(like, self.H.identity())

    def unit(self, p: int) -> NerveElement:
        return NerveElement(tuple(self.H.identity() for _ in range(p)), self.G.identity())

    def sample(self, p: int, rng: np.random.Generator) -> NerveElement:
        return NerveElement(tuple(self.H.sample(rng) for _ in range(p)), self.G.sample(rng))

    def vertices(self, u: NerveElement) -> Tuple[MatLike, ...]:
        """``(x_0, ..., x_p)``."""
        points = [u.g]
        for h in reversed(u.hs):
            points.append(self.boundary(h) @ points[-1])
        return tuple(reversed(points))

    def arrow(self, u: NerveElement, i: int) -> NerveElement:
        """The i-th arrow (1-based) as a 1-simplex."""
        if not 1 <= i <= u.level:
            raise LevelError(f"arrow {i} of a {u.level}-simplex")
        return NerveElement((u.hs[i - 1],), self.vertices(u)[i])

    def face(self, u: NerveElement, i: int) -> NerveElement:
        p = u.level
        if p == 0 or not 0 <= i <= p:
            raise LevelError(f"face d_{i} undefined at level {p}")
        if i == 0:
            return NerveElement(u.hs[1:], u.g)
        if i == p:
            return NerveElement(u.hs[:-1], self.boundary(u.hs[-1]) @ u.g)
        merged = u.hs[i - 1] @ u.hs[i]
        return NerveElement(u.hs[: i - 1] + (merged,) + u.hs[i + 1 :], u.g)

    def degeneracy(self, u: NerveElement, j: int) -> NerveElement:
        p = u.level
        if not 0 <= j <= p:
            raise LevelError(f"degeneracy s_{j} undefined at level {p}")
        return NerveElement(u.hs[:j] + (self._h_unit(u.g),) + u.hs[j:], u.g)

    def level_mult(self, u: NerveElement, v: NerveElement) -> NerveElement:
        """The group product ``u ⊻ v`` of G_p."""
        if u.level != v.level:
            raise ShapeMismatchError(f"cannot multiply levels {u.level} and {v.level}")
        xs = self.vertices(u)
        hs = tuple(h @ self.act(xs[i + 1], k) for i, (h, k) in enumerate(zip(u.hs, v.hs)))
        return NerveElement(hs, u.g @ v.g)

    def level_inverse(self, u: NerveElement) -> NerveElement:
        xs = self.vertices(u)
        hs = tuple(self.act(mat_inv(xs[i + 1]), mat_inv(h)) for i, h in enumerate(u.hs))
        return NerveElement(hs, mat_inv(u.g))

    def level_exp(self, etas: Sequence[np.ndarray], x: np.ndarray, t: float = 1.0) -> NerveElement:
        """
        One-parameter subgroup of G_p through the algebra element ``(etas; x)``.

        G_p embeds in ``GL ⊕ G`` arrowwise by ``(h; y) ↦ (h Φ(y), y)``, whose
        exponential is computed with ``expm``.
        """
        arrows_x = [x]
        for eta in reversed(etas):
            arrows_x.append(arrows_x[-1] + self.d_boundary(eta))
        arrows_x = list(reversed(arrows_x))
        hs = []
        for i, eta in enumerate(etas):
            source = arrows_x[i + 1]
            hs.append(
                expm(t * (eta + self.d_representation(source)))
                @ np.linalg.inv(self.representation(expm(t * source)))
            )
        return NerveElement(tuple(hs), expm(t * x))

    # groupoid structure of G_1

    def groupoid_inverse(self, a: NerveElement) -> NerveElement:
        (h,) = a.hs
        return NerveElement((mat_inv(h),), self.boundary(h) @ a.g)

    def groupoid_compose(self, a: NerveElement, b: NerveElement) -> NerveElement:
        """``a ⋈ b``: first ``b``, then ``a``."""
        return NerveElement((a.hs[0] @ b.hs[0],), b.g)

    def groupoid_composite(self, u: NerveElement) -> NerveElement:
        """The composite ``γ_1 ⋈ ⋯ ⋈ γ_p`` of the arrows of a p-simplex."""
        if u.level == 0:
            raise LevelError("a 0-simplex has no arrows")
        total = u.hs[0]
        for h in u.hs[1:]:
            total = total @ h
        return NerveElement((total,), u.g)

    def prepend_arrow(self, a: NerveElement, u: NerveElement) -> NerveElement:
        """Extend ``u`` by an arrow ``a`` whose source is the first vertex of ``u``."""
        return NerveElement(a.hs + u.hs, u.g)

    def append_arrow(self, u: NerveElement, a: NerveElement) -> NerveElement:
        """Extend ``u`` by an arrow ``a`` whose target is the last vertex of ``u``."""
        return NerveElement(u.hs + a.hs, a.g)

    def exchange_residual(
        self, a: NerveElement, b: NerveElement, c: NerveElement, d: NerveElement
    ) -> float:
        """``(a ⋈ b) ⊻ (c ⋈ d)`` against ``(a ⊻ c) ⋈ (b ⊻ d)``."""
        lhs = self.level_mult(self.groupoid_compose(a, b), self.groupoid_compose(c, d))
        rhs = self.groupoid_compose(self.level_mult(a, c), self.level_mult(b, d))
        return tree_residual(lhs, rhs)

    def target(self, a: NerveElement) -> MatLike:
        return self.vertices(a)[0]

    # infinitesimal data

    def exact_algebra(self) -> CrossedModuleAlgData:
        """Crossed module of Lie algebras computed with exact tangents."""
        g, h = self.G.lie_algebra(), self.H.lie_algebra()
        dmap = np.stack([self.G.coords(self.d_boundary(f)) for f in self.H.basis], axis=1)
        rho = np.zeros((g.dim, h.dim, h.dim))
        for a, e in enumerate(self.G.basis):
            lifted = self.representation(TangentAt(self.G.identity(), e))
            for b, f in enumerate(self.H.basis):
                moved = lifted @ f @ mat_inv(lifted)
                rho[a, :, b] = self.H.coords(moved.dir)
        return CrossedModuleAlgData(g, h, dmap, rho)

    @cached_property
    def lie2_algebra(self) -> Lie2AlgebraData:
        """The Lie 2-algebra ``h -> g0``, built once and shared by every consumer."""
        return to_lie2(self.exact_algebra())


def _structure_constants(spec: MatrixGroupSpec, step: float) -> LieAlgebraData:
    n = spec.dim
    c = np.zeros((n, n, n))
    for i, ei in enumerate(spec.basis):
        for j, ej in enumerate(spec.basis):
            # Ad_{exp(t e_i)} e_j differentiates to [e_i, e_j]
            flow = curve_derivative(
                lambda t, ei=ei, ej=ej: expm(t * ei) @ ej @ expm(-t * ei), step=step
            )
            c[i, j] = spec.coords(flow)
    return LieAlgebraData(c)


def differentiate(cm: MatrixCrossedModule, step: float = DEFAULT_STEP) -> CrossedModuleAlgData:
    """
    Crossed module of Lie algebras by differentiating exponential flows.

    Raises:
        NumericalError: if the result violates the axioms beyond 1e-8
    """
    g = _structure_constants(cm.G, step)
    h = _structure_constants(cm.H, step)
    dmap = np.stack(
        [
            cm.G.coords(curve_derivative(lambda t: base_of(cm.boundary(expm(t * f))), step=step))
            for f in cm.H.basis
        ],
        axis=1,
    )
    rho = np.zeros((g.dim, h.dim, h.dim))
    eye_h = cm.H.identity()
    for a, e in enumerate(cm.G.basis):
        for b, f in enumerate(cm.H.basis):
            flow = curve_derivative(
                lambda t, e=e, f=f: cm.act(expm(t * e), TangentAt(eye_h, f)).dir,
                step=step,
            )
            rho[a, :, b] = cm.H.coords(flow)
    result = CrossedModuleAlgData(g, h, dmap, rho)
    report = check_crossed_module(result)
    if report.max_residual > DIFFERENTIATE_TOLERANCE:
        raise NumericalError(
            f"differentiated crossed module violates axioms: {report.residuals}"
        )
    logger.debug(f"Differentiated {cm}: max axiom residual {report.max_residual:.2e}")
    return result


def tangent_crossed_module(G: MatrixGroupSpec) -> MatrixCrossedModule:
    """``(G, G, id, Ad)``."""
    return MatrixCrossedModule(G, G, lambda h: h, lambda g: g, name=f"tangent/{G.name}")


def adjoint_matrix(G: MatrixGroupSpec, g: MatLike) -> MatLike:
    """Matrix of ``Ad_g`` in the basis of the Lie algebra of G."""
    flat = np.stack([b.ravel() for b in G.basis], axis=1)
    coords = np.linalg.pinv(flat)
    conj = bilinear_apply(np.kron, g, mat_inv(g).T)
    return coords @ conj @ flat


def coadjoint_crossed_module(G: MatrixGroupSpec) -> MatrixCrossedModule:
    """``(G, g*, 1, Ad*)`` with g* realized as unipotent ``[[I, ξ], [0, 1]]``."""
    n = G.dim
    H = vector_group(n)
    embed = np.vstack([np.eye(n), np.zeros((1, n))])
    corner = np.zeros((n + 1, n + 1))
    corner[n, n] = 1.0

    def boundary(h: MatLike) -> MatLike:
        return constant_like(h, G.identity())

    def representation(g: MatLike) -> MatLike:
        coadjoint = mat_inv(adjoint_matrix(G, g)).T
        return embed @ coadjoint @ embed.T + corner

    return MatrixCrossedModule(G, H, boundary, representation, name=f"coadjoint/{G.name}")


def crossed_module_by_name(group: str, kind: str, dim: Any = None) -> MatrixCrossedModule:
    G = group_by_name(group, dim)
    if kind == "tangent":
        return tangent_crossed_module(G)
    if kind == "coadjoint":
        return coadjoint_crossed_module(G)
    raise ConfigError(f"unknown crossed module kind {kind!r}")
