"""
Lie algebras, crossed modules of Lie algebras and strict Lie 2-algebras.

Structure constants are dense tensors: ``c[i, j, k]`` is the k-th coordinate
of ``[e_i, e_j]``. A crossed module ``(g, h, dmap, rho)`` stores ``rho[a]`` as
the matrix of ``rho(e_a)`` acting on column vectors of h.

The Chevalley-Eilenberg complex of a strict Lie 2-algebra h -> g0 is
``Λ^k g0* ⊗ S^l h*`` with the differential of :func:`ce_differential`.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .exceptions import ShapeMismatchError
from .graded import antisymmetrize, project_block, symmetrize

logger = logging.getLogger(__name__)

AXIOM_TOLERANCE = 1e-10


def _max_abs(values: np.ndarray) -> float:
    return float(np.max(np.abs(values))) if np.size(values) else 0.0


@dataclass(frozen=True)
class LieAlgebraData:
    """Finite-dimensional Lie algebra given by structure constants."""

    c: np.ndarray

    def __post_init__(self) -> None:
        c = np.asarray(self.c, dtype=float)
        if c.ndim != 3 or not (c.shape[0] == c.shape[1] == c.shape[2]):
            raise ShapeMismatchError(f"structure constants must be n x n x n, got {c.shape}")
        object.__setattr__(self, "c", 0.5 * (c - c.transpose(1, 0, 2)))

    @property
    def dim(self) -> int:
        return int(self.c.shape[0])

    def bracket(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        return np.einsum("i,j,ijk->k", u, v, self.c)

    def ad(self, u: np.ndarray) -> np.ndarray:
        """Matrix of ``[u, .]`` on column vectors."""
        return np.einsum("i,ijk->kj", u, self.c)

    def jacobi_residual(self) -> float:
        first = np.einsum("ijm,mkn->ijkn", self.c, self.c)
        cyclic = first + first.transpose(1, 2, 0, 3) + first.transpose(2, 0, 1, 3)
        return _max_abs(cyclic)

    @classmethod
    def abelian(cls, dim: int) -> "LieAlgebraData":
        return cls(np.zeros((dim, dim, dim)))

    @classmethod
    def from_matrices(cls, basis: Sequence[np.ndarray]) -> "LieAlgebraData":
        """Structure constants of a matrix Lie algebra spanned by ``basis``."""
        flat = np.stack([np.asarray(b, dtype=float).ravel() for b in basis], axis=1)
        coords = np.linalg.pinv(flat)
        n = len(basis)
        c = np.zeros((n, n, n))
        for i in range(n):
            for j in range(n):
                comm = basis[i] @ basis[j] - basis[j] @ basis[i]
                c[i, j] = coords @ comm.ravel()
                if _max_abs(flat @ c[i, j] - comm.ravel()) > 1e-9:
                    raise ShapeMismatchError("basis does not span a Lie subalgebra")
        return cls(c)


@dataclass
class AxiomReport:
    """Per-axiom max residuals of a crossed module of Lie algebras."""

    residuals: Dict[str, float] = field(default_factory=dict)
    tolerance: float = AXIOM_TOLERANCE

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance

    def to_dict(self) -> Dict[str, float]:
        return dict(self.residuals)


@dataclass(frozen=True)
class CrossedModuleAlgData:
    """Crossed module of Lie algebras ``(g, h, dmap: h -> g, rho: g -> Der(h))``."""

    g: LieAlgebraData
    h: LieAlgebraData
    dmap: np.ndarray
    rho: np.ndarray

    def __post_init__(self) -> None:
        dmap = np.asarray(self.dmap, dtype=float)
        rho = np.asarray(self.rho, dtype=float)
        if dmap.shape != (self.g.dim, self.h.dim):
            raise ShapeMismatchError(
                f"dmap must be {self.g.dim} x {self.h.dim}, got {dmap.shape}"
            )
        if rho.shape != (self.g.dim, self.h.dim, self.h.dim):
            raise ShapeMismatchError(f"rho has shape {rho.shape}")
        object.__setattr__(self, "dmap", dmap)
        object.__setattr__(self, "rho", rho)

    def act(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.einsum("a,aij,j->i", x, self.rho, y)

    @classmethod
    def tangent(cls, g: LieAlgebraData) -> "CrossedModuleAlgData":
        """``(g, g, id, ad)``."""
        rho = np.stack([g.ad(e) for e in np.eye(g.dim)])
        return cls(g, g, np.eye(g.dim), rho)

    @classmethod
    def coadjoint(cls, g: LieAlgebraData) -> "CrossedModuleAlgData":
        """``(g, g*, 0, ad*)`` with ``ad*_x = -ad_x^T``."""
        rho = np.stack([-g.ad(e).T for e in np.eye(g.dim)])
        return cls(g, LieAlgebraData.abelian(g.dim), np.zeros((g.dim, g.dim)), rho)


def check_crossed_module(cm: CrossedModuleAlgData) -> AxiomReport:
    """Evaluate every crossed-module axiom on all basis tuples."""
    g, h, d, rho = cm.g, cm.h, cm.dmap, cm.rho
    ng, nh = g.dim, h.dim
    report = AxiomReport()
    report.residuals["jacobi_g"] = g.jacobi_residual()
    report.residuals["jacobi_h"] = h.jacobi_residual()

    # d[u, v]_h - [du, dv]_g
    d_of_bracket = np.einsum("abk,ik->abi", h.c, d)
    bracket_of_d = np.einsum("ia,jb,ijk->abk", d, d, g.c)
    report.residuals["dmap_homomorphism"] = _max_abs(d_of_bracket - bracket_of_d)

    # rho([x_a, x_b]) - [rho(x_a), rho(x_b)]
    rho_of_bracket = np.einsum("abk,kij->abij", g.c, rho)
    commutator = np.einsum("aik,bkj->abij", rho, rho) - np.einsum(
        "bik,akj->abij", rho, rho
    )
    report.residuals["rho_homomorphism"] = _max_abs(rho_of_bracket - commutator)

    derivation = 0.0
    for a in range(ng):
        for u in np.eye(nh):
            for v in np.eye(nh):
                lhs = rho[a] @ h.bracket(u, v)
                rhs = h.bracket(rho[a] @ u, v) + h.bracket(u, rho[a] @ v)
                derivation = max(derivation, _max_abs(lhs - rhs))
    report.residuals["rho_derivation"] = derivation

    equivariance = 0.0
    for x in np.eye(ng):
        for y in np.eye(nh):
            lhs = d @ cm.act(x, y)
            rhs = g.bracket(x, d @ y)
            equivariance = max(equivariance, _max_abs(lhs - rhs))
    report.residuals["equivariance"] = equivariance

    peiffer = 0.0
    for y1 in np.eye(nh):
        for y2 in np.eye(nh):
            peiffer = max(peiffer, _max_abs(cm.act(d @ y1, y2) - h.bracket(y1, y2)))
    report.residuals["peiffer"] = peiffer

    logger.debug(f"Crossed module axioms: {report.residuals}")
    return report


@dataclass(frozen=True)
class Lie2AlgebraData:
    """
    Strict Lie 2-algebra h -> g0 (``l3 = 0``).

    ``l2_gg`` is the bracket of g0 and ``l2_gh[a]`` the matrix of
    ``l2(e_a, .)`` on h. Mixed ``l2(y, x)`` is ``-l2(x, y)``.
    """

    V0: LieAlgebraData
    V1dim: int
    l1: np.ndarray
    l2_gh: np.ndarray

    @property
    def l2_gg(self) -> np.ndarray:
        return self.V0.c

    @property
    def dims(self) -> Dict[str, int]:
        n0, n1 = self.V0.dim, self.V1dim
        return {"x": n0, "y": n1, "z": n0, "w": n1}

    def bracket(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        return self.V0.bracket(u, v)

    def l2(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.einsum("a,aij,j->i", x, self.l2_gh, y)

    def apply_l1(self, y: np.ndarray) -> np.ndarray:
        return self.l1 @ y

    def h_bracket(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        return self.l2(self.apply_l1(u), v)

    def matches(self, other: "Lie2AlgebraData") -> bool:
        """Same dimensions and identical structure constants."""
        if (self.V0.dim, self.V1dim) != (other.V0.dim, other.V1dim):
            return False
        return self.residual(other) == 0.0

    def residual(self, other: "Lie2AlgebraData") -> float:
        if (self.V0.dim, self.V1dim) != (other.V0.dim, other.V1dim):
            raise ShapeMismatchError("Lie 2-algebras have different dimensions")
        return max(
            _max_abs(self.l2_gg - other.l2_gg),
            _max_abs(self.l1 - other.l1),
            _max_abs(self.l2_gh - other.l2_gh),
        )

    @classmethod
    def from_structure(
        cls,
        dim0: int,
        dim1: int,
        bracket: Callable[[np.ndarray, np.ndarray], np.ndarray],
        l2: Callable[[np.ndarray, np.ndarray], np.ndarray],
        l1: Callable[[np.ndarray], np.ndarray],
    ) -> "Lie2AlgebraData":
        """Tabulate brackets given as maps on vectors."""
        e0, e1 = np.eye(dim0), np.eye(dim1)
        c = np.array([[bracket(e0[i], e0[j]) for j in range(dim0)] for i in range(dim0)])
        l1_mat = np.stack([l1(e1[j]) for j in range(dim1)], axis=1)
        l2_gh = np.array(
            [np.stack([l2(e0[a], e1[j]) for j in range(dim1)], axis=1) for a in range(dim0)]
        )
        return cls(LieAlgebraData(c), dim1, l1_mat.reshape(dim0, dim1), l2_gh)


def to_lie2(cm: CrossedModuleAlgData) -> Lie2AlgebraData:
    return Lie2AlgebraData(V0=cm.g, V1dim=cm.h.dim, l1=cm.dmap, l2_gh=cm.rho)


@dataclass(frozen=True)
class CECochain:
    """Element of ``Λ^k g0* ⊗ S^l h*`` stored as a dense tensor."""

    k: int
    l: int
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        coeffs = np.asarray(self.coeffs, dtype=float)
        if coeffs.ndim != self.k + self.l:
            raise ShapeMismatchError(
                f"block ({self.k}, {self.l}) needs {self.k + self.l} axes, got {coeffs.ndim}"
            )
        object.__setattr__(self, "coeffs", project_block(coeffs, (self.k, self.l)))

    @property
    def degree(self) -> int:
        return self.k + 2 * self.l

    def evaluate(self, xs: Sequence[np.ndarray], ys: Sequence[np.ndarray]) -> float:
        value = self.coeffs
        for vec in list(xs) + list(ys):
            value = np.tensordot(vec, value, axes=([0], [0]))
        return float(value)

    @classmethod
    def zeros(cls, k: int, l: int, alg: Lie2AlgebraData) -> "CECochain":
        shape = (alg.V0.dim,) * k + (alg.V1dim,) * l
        return cls(k, l, np.zeros(shape))

    @classmethod
    def random(
        cls, k: int, l: int, alg: Lie2AlgebraData, rng: np.random.Generator
    ) -> "CECochain":
        shape = (alg.V0.dim,) * k + (alg.V1dim,) * l
        return cls(k, l, rng.standard_normal(shape))


def ce_differential(
    eta: CECochain, alg: Lie2AlgebraData
) -> Tuple[CECochain, Optional[CECochain]]:
    """
    Chevalley-Eilenberg differential of a ``(k, l)`` cochain.

    Returns the ``(k+1, l)`` component and, when ``k >= 1``, the ``(k-1, l+1)``
    component. On generators this gives ``δω(x0, x1) = -ω([x0, x1])``,
    ``δω(x; y) = -ω(l2(x, y))`` and ``δω(y) = -ω(l1 y)``.
    """
    k, l = eta.k, eta.l
    x_axes = list(range(k + 1))
    y_axes = list(range(k + 1, k + 1 + l))

    raised = np.zeros((alg.V0.dim,) * (k + 1) + (alg.V1dim,) * l)
    if k >= 1:
        bracket_term = -np.tensordot(alg.l2_gg, eta.coeffs, axes=([2], [0]))
        raised = raised + math.comb(k + 1, 2) * antisymmetrize(bracket_term, x_axes)
    if l >= 1:
        action = np.tensordot(alg.l2_gh, eta.coeffs, axes=([1], [k]))
        action = -np.moveaxis(action, 1, k + 1)
        action = symmetrize(antisymmetrize(action, x_axes), y_axes)
        raised = raised + (k + 1) * l * action
    first = CECochain(k + 1, l, raised)

    if k == 0:
        return first, None
    traded = np.tensordot(eta.coeffs, alg.l1, axes=([k - 1], [0]))
    traded = (-1) ** k * np.moveaxis(traded, -1, k - 1)
    traded = (l + 1) * symmetrize(traded, list(range(k - 1, k + l)))
    return first, CECochain(k - 1, l + 1, traded)


def ce_blocks(max_degree: int) -> List[Tuple[int, int]]:
    return [(k, l) for l in range(max_degree // 2 + 1) for k in range(max_degree - 2 * l + 1)]


def ce_square_check(
    alg: Lie2AlgebraData, rng: Optional[np.random.Generator] = None, max_degree: int = 6
) -> float:
    """Max residual of ``δ∘δ`` on random cochains of total degree ``<= max_degree - 2``."""
    rng = rng if rng is not None else np.random.default_rng(0)
    residual = 0.0
    for k, l in ce_blocks(max_degree - 2):
        eta = CECochain.random(k, l, alg, rng)
        first, second = ce_differential(eta, alg)
        aa, ab = ce_differential(first, alg)
        residual = max(residual, _max_abs(aa.coeffs))
        mixed = ab.coeffs if ab is not None else None
        if second is not None:
            ba, bb = ce_differential(second, alg)
            mixed = ba.coeffs if mixed is None else mixed + ba.coeffs
            if bb is not None:
                residual = max(residual, _max_abs(bb.coeffs))
        if mixed is not None:
            residual = max(residual, _max_abs(mixed))
        logger.debug(f"δ² residual after block ({k}, {l}): {residual:.3e}")
    return residual
