"""
Simplicial manifolds built from a crossed module.

Models expose ``face(n, i, x)`` and ``degeneracy(n, j, x)`` on points of
level ``n``; every map is a composition of group2 operations, so points may
carry ``TangentAt`` leaves and the tangent maps come out exactly.

Points of ``W̄K`` are stacks: at level ``m`` a tuple of ``m`` entries with
``stack[t]`` in ``K_{m-1-t}`` (the top slot first). ``W = dec(W̄)``.
"""

import logging
from typing import Any, Dict, Tuple

import numpy as np

from .exceptions import LevelError
from .group2 import MatrixCrossedModule, NerveElement
from .numcore import tree_residual

logger = logging.getLogger(__name__)

DEFAULT_LEVEL_CAP = 5
Stack = Tuple[Any, ...]


class SimplicialModel:
    """A simplicial manifold given by face and degeneracy evaluators."""

    def __init__(self, cap: int = DEFAULT_LEVEL_CAP):
        self.cap = cap

    def check_level(self, n: int) -> None:
        if n < 0 or n > self.cap:
            raise LevelError(f"level {n} outside 0..{self.cap} of {type(self).__name__}")

    def check_index(self, n: int, i: int, upper: int) -> None:
        if not 0 <= i <= upper:
            raise LevelError(f"index {i} out of range 0..{upper} at level {n}")

    def face(self, n: int, i: int, x: Any) -> Any:
        raise NotImplementedError

    def degeneracy(self, n: int, j: int, x: Any) -> Any:
        raise NotImplementedError

    def sample(self, n: int, rng: np.random.Generator) -> Any:
        raise NotImplementedError

    def unit(self, n: int) -> Any:
        raise NotImplementedError

    def faces(self, n: int, indices: Tuple[int, ...], x: Any) -> Any:
        """Apply faces right to left: ``faces(n, (i, j), x) = d_i d_j x``."""
        for index in reversed(indices):
            x = self.face(n, index, x)
            n -= 1
        return x


class SimplicialGroupModel(SimplicialModel):
    """A simplicial model whose faces and degeneracies are homomorphisms."""

    def mult(self, n: int, a: Any, b: Any) -> Any:
        raise NotImplementedError

    def inverse(self, n: int, a: Any) -> Any:
        raise NotImplementedError


class NerveModel(SimplicialGroupModel):
    """The strict 2-group G_• of a crossed module."""

    def __init__(self, cm: MatrixCrossedModule, cap: int = DEFAULT_LEVEL_CAP):
        super().__init__(cap)
        self.cm = cm

    def face(self, n: int, i: int, x: NerveElement) -> NerveElement:
        self.check_index(n, i, n)
        return self.cm.face(x, i)

    def degeneracy(self, n: int, j: int, x: NerveElement) -> NerveElement:
        self.check_level(n + 1)
        self.check_index(n, j, n)
        return self.cm.degeneracy(x, j)

    def sample(self, n: int, rng: np.random.Generator) -> NerveElement:
        self.check_level(n)
        return self.cm.sample(n, rng)

    def unit(self, n: int) -> NerveElement:
        return self.cm.unit(n)

    def mult(self, n: int, a: NerveElement, b: NerveElement) -> NerveElement:
        return self.cm.level_mult(a, b)

    def inverse(self, n: int, a: NerveElement) -> NerveElement:
        return self.cm.level_inverse(a)


class Decalage(SimplicialModel):
    """``dec X``: level n is ``X_{n+1}`` with faces and degeneracies shifted by one."""

    def __init__(self, base: SimplicialModel):
        super().__init__(base.cap - 1)
        self.base = base

    def face(self, n: int, i: int, x: Any) -> Any:
        self.check_index(n, i, n)
        return self.base.face(n + 1, i + 1, x)

    def degeneracy(self, n: int, j: int, x: Any) -> Any:
        self.check_index(n, j, n)
        return self.base.degeneracy(n + 1, j + 1, x)

    def d0(self, n: int, x: Any) -> Any:
        """The simplicial map ``dec X -> X``."""
        return self.base.face(n + 1, 0, x)

    def sample(self, n: int, rng: np.random.Generator) -> Any:
        return self.base.sample(n + 1, rng)

    def unit(self, n: int) -> Any:
        return self.base.unit(n + 1)


class GroupDecalage(Decalage, SimplicialGroupModel):
    base: SimplicialGroupModel

    def mult(self, n: int, a: Any, b: Any) -> Any:
        return self.base.mult(n + 1, a, b)

    def inverse(self, n: int, a: Any) -> Any:
        return self.base.inverse(n + 1, a)


class WBar(SimplicialModel):
    """The classifying construction ``W̄K`` of a simplicial group ``K``."""

    def __init__(self, group: SimplicialGroupModel):
        super().__init__(group.cap + 1)
        self.group = group

    def face(self, m: int, i: int, stack: Stack) -> Stack:
        K = self.group
        if m == 0:
            raise LevelError("W̄_0 is a point and has no faces")
        self.check_index(m, i, m)
        if i == 0:
            return tuple(stack[1:])
        if i == m:
            return tuple(K.face(m - 1 - t, m - 1 - t, stack[t]) for t in range(m - 1))
        head = [K.face(m - 1 - t, i - 1 - t, stack[t]) for t in range(i - 1)]
        twisted = K.mult(m - 1 - i, K.face(m - i, 0, stack[i - 1]), stack[i])
        return tuple(head) + (twisted,) + tuple(stack[i + 1 :])

    def degeneracy(self, m: int, i: int, stack: Stack) -> Stack:
        K = self.group
        self.check_level(m + 1)
        self.check_index(m, i, m)
        head = [K.degeneracy(m - 1 - t, i - 1 - t, stack[t]) for t in range(i)]
        return tuple(head) + (K.unit(m - i),) + tuple(stack[i:])

    def sample(self, m: int, rng: np.random.Generator) -> Stack:
        self.check_level(m)
        return tuple(self.group.sample(m - 1 - t, rng) for t in range(m))

    def unit(self, m: int) -> Stack:
        return tuple(self.group.unit(m - 1 - t) for t in range(m))

    def left_action(self, k: Any, stack: Stack) -> Stack:
        """Left multiplication of the top slot by ``k``."""
        m = len(stack)
        if m == 0:
            raise LevelError("the left action starts at level 1")
        return (self.group.mult(m - 1, k, stack[0]),) + tuple(stack[1:])


class StrictLie2Group:
    """
    The simplicial spaces of a crossed module.

    Attributes:
        G: the nerve G_•
        decG: its décalage
        WbarG, WG: ``W̄G`` and ``WG = dec W̄G``
        WbarDecG, WDecG: the same for ``dec G``
    """

    def __init__(self, cm: MatrixCrossedModule, cap: int = DEFAULT_LEVEL_CAP):
        self.cm = cm
        self.cap = cap
        # ε at level p reaches G_{p+1}; the homotopies one level further
        self.G = NerveModel(cm, cap + 3)
        self.decG = GroupDecalage(self.G)
        self.WbarG = WBar(self.G)
        self.WG = Decalage(self.WbarG)
        self.WbarDecG = WBar(self.decG)
        self.WDecG = Decalage(self.WbarDecG)

    def w_face(self, i: int, stack: Stack) -> Stack:
        return self.WG.face(len(stack) - 1, i, stack)

    def w_faces(self, indices: Tuple[int, ...], stack: Stack) -> Stack:
        """``∂_{i_1} ∘ ⋯ ∘ ∂_{i_k}`` on W, rightmost first."""
        return self.WG.faces(len(stack) - 1, indices, stack)

    def sample_w(self, p: int, rng: np.random.Generator) -> Stack:
        self.check_level(p)
        return self.WbarG.sample(p + 1, rng)

    def check_level(self, p: int) -> None:
        if p < 0 or p > self.cap:
            raise LevelError(f"level {p} exceeds the level cap {self.cap}")

    def wd0(self, stack: Stack) -> Stack:
        """``W d_0``: slotwise ``d_0`` from ``W(dec G)`` to ``WG``."""
        return tuple(self.decG.d0(len(stack) - 1 - t, slot) for t, slot in enumerate(stack))

    def epsilon(self, stack: Stack) -> Stack:
        """
        The simplicial splitting ``ε_p: W_pG -> W_p(dec G)`` of ``W d_0``.

        Built recursively from ``ε_0`` and ``ε_1``.
        """
        p = len(stack) - 1
        if p < 0:
            raise LevelError("ε needs a point of W")
        if p > self.cap - 1:
            raise LevelError(f"ε_{p} exceeds the level cap {self.cap}")
        cm, G = self.cm, self.G
        top = stack[0]
        if p == 0:
            return (G.degeneracy(0, 0, top),)
        if p == 1:
            (g,) = stack[1:]
            middle = G.mult(
                1,
                G.mult(1, G.inverse(1, top), G.degeneracy(0, 0, G.face(1, 0, top))),
                G.degeneracy(0, 0, g),
            )
            return (G.degeneracy(1, 0, top), middle)
        lowered = self.w_faces(tuple(range(2, p + 1)), stack)
        arrow = self.epsilon(lowered)[1]
        second = cm.prepend_arrow(arrow, stack[1])
        rest = self.epsilon(self.w_face(0, stack))[1:]
        return (G.degeneracy(p, 0, top), second) + tuple(rest)

    def mu_closed_form(self, stack: Stack) -> Stack:
        """
        ``ε`` in crossed-module coordinates.

        Slot j is the stack entry ``γ^{p-j}`` with the arrow ``μ_p^j`` prepended,
        where ``μ_1^1(h, g_1; g_0) = α(g_1^-1, h^-1)`` and
        ``μ_p^j = μ_1^1 ∘ ∂_0 ∘ ⋯ ∘ ∂_{j-2} ∘ ∂_{j+1} ∘ ⋯ ∘ ∂_p``.
        """
        p = len(stack) - 1
        cm = self.cm
        slots = []
        for j, entry in enumerate(stack):
            if j == 0:
                mu = cm.H.identity()
            else:
                reduced = self.w_faces(tuple(range(0, j - 1)) + tuple(range(j + 1, p + 1)), stack)
                (h,), g1 = reduced[0]
                mu = cm.act(np.linalg.inv(g1), np.linalg.inv(h))
            slots.append(NerveElement((mu,) + tuple(entry.hs), entry.g))
        return tuple(slots)

    def epsilon_top(self, stack: Stack) -> NerveElement:
        """``pr_{p+1} ε_p``, the top slot of the splitting."""
        return self.epsilon(stack)[0]


def simplicial_identity_residual(model: SimplicialModel, n: int, x: Any) -> float:
    """Max residual of all simplicial identities starting from a level-n point."""
    residual = 0.0
    # d_i d_j = d_{j-1} d_i for i < j
    if n >= 2:
        for j in range(n + 1):
            for i in range(j):
                lhs = model.face(n - 1, i, model.face(n, j, x))
                rhs = model.face(n - 1, j - 1, model.face(n, i, x))
                residual = max(residual, tree_residual(lhs, rhs))
    if n + 1 <= model.cap:
        for j in range(n + 1):
            up = model.degeneracy(n, j, x)
            for i in range(n + 2):
                down = model.face(n + 1, i, up)
                if i < j:
                    expected = model.degeneracy(n - 1, j - 1, model.face(n, i, x))
                elif i in (j, j + 1):
                    expected = x
                else:
                    expected = model.degeneracy(n - 1, j, model.face(n, i - 1, x))
                residual = max(residual, tree_residual(down, expected))
    if n + 2 <= model.cap:
        for j in range(n + 1):
            for i in range(j + 1):
                lhs = model.degeneracy(n + 1, i, model.degeneracy(n, j, x))
                rhs = model.degeneracy(n + 1, j + 1, model.degeneracy(n, i, x))
                residual = max(residual, tree_residual(lhs, rhs))
    return residual



def epsilon_residual(group: StrictLie2Group, stack: Stack) -> Dict[str, float]:
    """
    Residuals of the splitting at a point of ``W_pG``.

    ``section`` is ``W d_0 ∘ ε = Id``, ``faces`` and ``degeneracies`` the
    simplicial compatibilities, ``closed_form`` the comparison with
    :meth:`StrictLie2Group.mu_closed_form`.
    """
    p = len(stack) - 1
    eps = group.epsilon(stack)
    residuals = {
        "section": tree_residual(group.wd0(eps), stack),
        "closed_form": tree_residual(group.mu_closed_form(stack), eps),
        "faces": 0.0,
        "degeneracies": 0.0,
    }
    if p >= 1:
        residuals["faces"] = max(
            tree_residual(group.WDecG.face(p, k, eps), group.epsilon(group.w_face(k, stack)))
            for k in range(p + 1)
        )
    if p + 1 <= group.cap - 1:
        residuals["degeneracies"] = max(
            tree_residual(
                group.WDecG.degeneracy(p, k, eps),
                group.epsilon(group.WG.degeneracy(p, k, stack)),
            )
            for k in range(p + 1)
        )
    return residuals
