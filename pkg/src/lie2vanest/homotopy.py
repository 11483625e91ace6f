"""
Contracting homotopies of the double complex and the perturbation zig-zag.

``h_i`` pulls back along the map ``A_{p} -> A_{p+1}`` that applies the last
``i`` faces and then the extra degeneracy ``i + 1`` times (on the base and on
the fibers alike); ``h = Σ_i (-1)^i h_i*``. ``η_0`` is the second contraction
of ``W_•G``, built recursively in crossed-module coordinates.
"""

import logging

import numpy as np

from .algebroid import DCElement, FormDCElement, Lie2Algebroid
from .exceptions import LevelError
from .forms import FormField, pullback, require_normalized, simplicial_coboundary
from .graded import Args
from .group2 import NerveElement
from .numcore import push_forward
from .simplicial import Stack
from .weil import WeilElement

logger = logging.getLogger(__name__)


class Homotopies:
    """The homotopy operators of the double complex over one crossed module."""

    def __init__(self, algebroid: Lie2Algebroid):
        self.algebroid = algebroid
        self.group = algebroid.group
        self.cm = algebroid.cm
        self.levels = algebroid.levels

    # h_i

    def h_base(self, i: int, stack: Stack) -> Stack:
        """``σ̄_0^{i+1} ∘ ∂_{p+1-i} ∘ ⋯ ∘ ∂_p`` from ``W_p`` to ``W_{p+1}``."""
        p = len(stack) - 1
        lowered = self.group.w_faces(tuple(range(p + 1 - i, p + 1)), stack)
        for _ in range(i + 1):
            lowered = self.group.WbarG.degeneracy(len(lowered), 0, lowered)
        return lowered

    def h_fiber(self, p: int, i: int, vec: np.ndarray) -> np.ndarray:
        """``σ̂_0^{i+1} ∘ ∂̂_{p+2-i} ∘ ⋯ ∘ ∂̂_{p+1}``: ``g_{p+1} -> g_{p+2}``."""
        levels = self.levels
        lowered = levels.faces(p + 1, tuple(range(p + 2 - i, p + 2)), vec)
        level = p + 1 - i
        for _ in range(i + 1):
            lowered = levels.degeneracy(level, 0, lowered)
            level += 1
        return lowered

    def h_i(self, i: int, e: DCElement) -> DCElement:
        p = e.level - 1
        if p < 0 or not 0 <= i <= p:
            raise LevelError(f"h_{i} undefined on level {e.level}")

        def evaluate(base: Stack, args: Args) -> float:
            moved: Args = []
            for kind, vec in args:
                if kind in ("x", "z"):
                    moved.append((kind, self.h_fiber(p, i, vec)))
                elif kind == "v":
                    moved.append((kind, push_forward(lambda s: self.h_base(i, s), base, vec)[1]))
                else:
                    moved.append((kind, vec))
            return e(self.h_base(i, base), moved)

        return e._like(p, e.blocks, evaluate, f"h_{i}({e.name})")

    def h_total(self, e: DCElement) -> DCElement:
        p = e.level - 1
        if p < 0:
            raise LevelError("h needs an element of level at least 1")
        total = self.h_i(0, e)
        for i in range(1, p + 1):
            total = total + self.h_i(i, e).scale((-1) ** i)
        return total

    def pi_iota(self, e: DCElement) -> DCElement:
        """``π* ι* e`` at the level of ``e``."""
        return self.algebroid.pi_star(e.level, self.algebroid.iota_star(e))

    # η_0 and η on W_•G

    def eta0_map(self, stack: Stack) -> Stack:
        """``(η_0)_p: W_pG -> W_{p+1}G``, a section of the last face."""
        p = len(stack) - 1
        cm, G = self.cm, self.group.G
        top = stack[0]
        if p == 0:
            return (G.degeneracy(0, 0, top), G.inverse(0, top))
        first = cm.append_arrow(top, cm.groupoid_inverse(cm.groupoid_composite(top)))
        if p == 1:
            reverse = cm.groupoid_inverse(top)
            base = G.mult(0, G.face(1, 0, top), stack[1])
            middle = G.mult(1, G.inverse(1, reverse), G.degeneracy(0, 0, base))
            return (first, middle, G.inverse(0, base))
        below = stack[1]
        anchor = NerveElement((), cm.target(below))
        twist = self.eta0_map((cm.arrow(top, 1), anchor))[1]
        closing = cm.groupoid_compose(cm.groupoid_inverse(cm.groupoid_composite(below)), twist)
        second = cm.append_arrow(below, closing)
        rest = self.eta0_map(self.group.w_face(0, stack))[1:]
        return (first, second) + tuple(rest)

    def eta_map(self, i: int, stack: Stack) -> Stack:
        p = len(stack) - 1
        lowered = self.group.w_faces(tuple(range(p + 1 - i, p + 1)), stack)
        for _ in range(i + 1):
            lowered = self.eta0_map(lowered)
        return lowered

    def eta0(self, form: FormField) -> FormField:
        """``η_0^♯ ω = (-1)^{p+1} (η_0)_p^* ω`` for ``ω`` on ``W_{p+1}``."""
        p = form.level - 1
        if p < 0:
            raise LevelError("η_0 needs a form of level at least 1")
        return pullback(form, self.eta0_map, p).scale((-1) ** (p + 1))

    def eta(self, form: FormField) -> FormField:
        p = form.level - 1
        if p < 0:
            raise LevelError("η needs a form of level at least 1")
        total = pullback(form, lambda s: self.eta_map(0, s), p)
        for i in range(1, p + 1):
            total = total + pullback(form, lambda s, i=i: self.eta_map(i, s), p).scale((-1) ** i)
        return total.scale((-1) ** (p + 1))

    def w_coboundary(self, form: FormField) -> FormField:
        return simplicial_coboundary(form, self.group.WG)

    # zig-zag

    def dbar0_star(self, form: FormField) -> DCElement:
        """``∂̄_0* ω`` as an element of ``C^{p,0}``: the top slot is dropped."""
        p = form.level
        block = (0, 0, 0, 0, form.degree)
        cls = FormDCElement if form.degree else DCElement

        def drop_top(stack: Stack) -> Stack:
            return tuple(stack[1:])

        def evaluate(base: Stack, args: Args) -> float:
            tangents = [push_forward(drop_top, base, vec)[1] for _, vec in args]
            return form(drop_top(base), tangents)

        return cls(p, [block], evaluate, f"∂̄0*({form.name})")

    def perturbation_zigzag(self, form: FormField, check: bool = True) -> WeilElement:
        """
        ``(-1)^p (-1)^{p(p-1)/2} ι_0* (δ h_0*)^p ∂̄_0* ω`` for a normalized form.

        Raises:
            NormalizationError: if ``ω`` is not normalized
        """
        if check:
            require_normalized(form, self.group.WbarG, self.cm)
        p = form.level
        element = self.dbar0_star(form)
        for round_ in range(p):
            element = self.algebroid.ce_delta(self.h_i(0, element))
            logger.debug(f"Zig-zag round {round_ + 1}/{p}: level {element.level}")
        sign = (-1) ** p * (-1) ** (p * (p - 1) // 2)
        return self.algebroid.iota_star(element).scale(sign)

