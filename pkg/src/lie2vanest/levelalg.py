"""
The simplicial Lie algebra g_• of G_•.

An element of ``g_p = h^p ⊕ g0`` is a flat vector ``[η_1, ..., η_p, x]``. The
i-th arrow of ``(η; x)`` is ``(η_i; X_i)`` with ``X_i = x + Σ_{j>i} ℓ1 η_j``;
brackets are taken arrowwise in ``h ⋊ g0``.
"""

import logging
from typing import List, Sequence, Tuple

import numpy as np

from .exceptions import LevelError, ShapeMismatchError
from .group2 import MatrixCrossedModule, NerveElement
from .lie2alg import Lie2AlgebraData
from .numcore import TangentAt, tree_lift

logger = logging.getLogger(__name__)


class LevelAlgebra:
    """Coordinates, brackets and structure maps of the g_p."""

    def __init__(self, cm: MatrixCrossedModule):
        self.cm = cm
        self.alg: Lie2AlgebraData = cm.lie2_algebra
        self.n0 = self.alg.V0.dim
        self.n1 = self.alg.V1dim

    def dim(self, p: int) -> int:
        return p * self.n1 + self.n0

    def split(self, p: int, vec: np.ndarray) -> Tuple[List[np.ndarray], np.ndarray]:
        vec = np.asarray(vec, dtype=float)
        if vec.shape != (self.dim(p),):
            raise ShapeMismatchError(f"g_{p} vectors have {self.dim(p)} entries, got {vec.shape}")
        etas = [vec[i * self.n1 : (i + 1) * self.n1] for i in range(p)]
        return etas, vec[p * self.n1 :]

    def join(self, etas: Sequence[np.ndarray], x: np.ndarray) -> np.ndarray:
        return np.concatenate(list(etas) + [np.asarray(x, dtype=float)])

    def arrow_sources(self, p: int, vec: np.ndarray) -> List[np.ndarray]:
        """``[X_0, X_1, ..., X_p]`` with ``X_p = x``."""
        etas, x = self.split(p, vec)
        sources = [x]
        for eta in reversed(etas):
            sources.append(sources[-1] + self.alg.apply_l1(eta))
        return list(reversed(sources))

    def bracket(self, p: int, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        alg = self.alg
        etas_u, x_u = self.split(p, u)
        etas_v, x_v = self.split(p, v)
        src_u = self.arrow_sources(p, u)
        src_v = self.arrow_sources(p, v)
        etas = [
            alg.h_bracket(a, b) + alg.l2(src_u[i + 1], b) - alg.l2(src_v[i + 1], a)
            for i, (a, b) in enumerate(zip(etas_u, etas_v))
        ]
        return self.join(etas, alg.bracket(x_u, x_v))

    def face(self, p: int, i: int, vec: np.ndarray) -> np.ndarray:
        """The linearized face ``∂̂_i: g_p -> g_{p-1}``."""
        if p == 0 or not 0 <= i <= p:
            raise LevelError(f"face ∂̂_{i} undefined on g_{p}")
        etas, x = self.split(p, vec)
        if i == 0:
            return self.join(etas[1:], x)
        if i == p:
            return self.join(etas[:-1], x + self.alg.apply_l1(etas[-1]))
        merged = etas[i - 1] + etas[i]
        return self.join(etas[: i - 1] + [merged] + etas[i + 1 :], x)

    def faces(self, p: int, indices: Sequence[int], vec: np.ndarray) -> np.ndarray:
        """``∂̂_{i_1} ∘ ⋯ ∘ ∂̂_{i_k}``, rightmost first."""
        for index in reversed(indices):
            vec = self.face(p, index, vec)
            p -= 1
        return vec

    def degeneracy(self, p: int, j: int, vec: np.ndarray) -> np.ndarray:
        if not 0 <= j <= p:
            raise LevelError(f"degeneracy σ̂_{j} undefined on g_{p}")
        etas, x = self.split(p, vec)
        return self.join(etas[:j] + [np.zeros(self.n1)] + etas[j:], x)

    def pi(self, p: int, vec: np.ndarray) -> np.ndarray:
        """Composite of last faces ``g_p -> g0``: ``x + Σ ℓ1 η_j``."""
        return self.arrow_sources(p, vec)[0]

    def iota(self, p: int, x: np.ndarray) -> np.ndarray:
        """``x ↦ (0, ..., 0; x)``, the total degeneracy of ``x``."""
        return self.join([np.zeros(self.n1)] * p, x)

    def y_embed(self, p: int, beta: int, y: np.ndarray) -> np.ndarray:
        """``y_β``: ``y`` in arrow slot ``β`` (1-based), zero elsewhere."""
        if not 1 <= beta <= p:
            raise LevelError(f"y_{beta} undefined on g_{p}")
        etas = [np.zeros(self.n1) for _ in range(p)]
        etas[beta - 1] = np.asarray(y, dtype=float)
        return self.join(etas, np.zeros(self.n0))

    def j(self, p: int, y: np.ndarray) -> np.ndarray:
        return self.y_embed(p, 1, y)

    # group level

    def to_matrices(self, p: int, vec: np.ndarray) -> NerveElement:
        """The tangent at the unit of G_p with these coordinates."""
        etas, x = self.split(p, vec)
        return NerveElement(tuple(self.cm.H.hat(eta) for eta in etas), self.cm.G.hat(x))

    def from_matrices(self, tangent: NerveElement) -> np.ndarray:
        etas = [self.cm.H.coords(d) for d in tangent.hs]
        return self.join(etas, self.cm.G.coords(tangent.g))

    def exp(self, p: int, vec: np.ndarray, t: float = 1.0) -> NerveElement:
        mats = self.to_matrices(p, vec)
        return self.cm.level_exp(mats.hs, mats.g, t)

    def right_translate(self, p: int, vec: np.ndarray, point: NerveElement) -> NerveElement:
        """Tangent ``ξ · point`` of the right-invariant field through ``ξ``."""
        unit = self.cm.unit(p)
        moved = self.cm.level_mult(tree_lift(unit, self.to_matrices(p, vec)), point)
        return NerveElement(tuple(h.dir for h in moved.hs), moved.g.dir)

    def right_coords(self, point: NerveElement, tangent: NerveElement) -> np.ndarray:
        """Inverse of :meth:`right_translate`."""
        lifted = tree_lift(point, tangent)
        back = self.cm.level_mult(lifted, self.cm.level_inverse(point))
        return self.from_matrices(
            NerveElement(
                tuple(h.dir if isinstance(h, TangentAt) else np.zeros_like(h) for h in back.hs),
                back.g.dir,
            )
        )
