"""
The van Est map from normalized forms on ``W̄G`` to the Weil algebra.

``R_x`` and ``R_y`` are degeneracy pullbacks of Lie derivatives along the
generator fields of left multiplication on the top slot, ``J_z`` and ``J_w``
the same with contractions. A Weil block ``(k, l, a, b)`` of ``Φ(ω)`` sums
every ordering of the word ``R_x^k R_y^l J_z^a J_w^b`` with its block sign;
words act rightmost letter first.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from .exceptions import LevelError, ShapeMismatchError
from .forms import (
    FormField,
    chart_d,
    pullback,
    require_normalized,
    simplicial_coboundary,
)
from .graded import Args, tabulate_symmetric
from .levelalg import LevelAlgebra
from .numcore import NESTED_STEP, block_permutations, curve_derivative, push_forward, tree_zeros
from .simplicial import Stack, StrictLie2Group
from .weil import Block, WeilElement, blocks_of_bidegree, weil_d, weil_delta

logger = logging.getLogger(__name__)

# kind -> (operator, level drop, degree drop)
LETTERS: Dict[str, Tuple[str, int, int]] = {
    "x": ("R_x", 1, 0),
    "y": ("R_y", 2, 0),
    "z": ("J_z", 1, 1),
    "w": ("J_w", 2, 1),
}


class GeneratorField:
    """
    Fundamental field on ``W̄_pG`` of left multiplication of the top slot by
    ``exp(t u)``, where ``u`` is ``x^p = (0, ..., 0; x)`` or ``y_β^p`` in
    ``g_{p-1}``.
    """

    def __init__(
        self,
        levels: LevelAlgebra,
        kind: str,
        level: int,
        vec: np.ndarray,
        beta: Optional[int] = None,
    ):
        if level < 1:
            raise LevelError("generator fields start at level 1")
        self.levels = levels
        self.kind = kind
        self.level = level
        if kind == "x":
            self.generator = levels.iota(level - 1, vec)
        elif kind == "y":
            if beta is None:
                raise ShapeMismatchError("y generators need a slot index")
            self.generator = levels.y_embed(level - 1, beta, vec)
        else:
            raise ShapeMismatchError(f"unknown generator kind {kind!r}")

    def flow(self, t: float, stack: Stack) -> Stack:
        k = self.levels.exp(self.level - 1, self.generator, t)
        return (self.levels.cm.level_mult(k, stack[0]),) + tuple(stack[1:])

    def vector(self, stack: Stack) -> Stack:
        top = self.levels.right_translate(self.level - 1, self.generator, stack[0])
        return (top,) + tuple(tree_zeros(slot) for slot in stack[1:])


@dataclass(frozen=True, eq=False)
class OperatorWord:
    """A word in ``R_x, R_y, J_z, J_w`` taking ``(level, degree)`` down to ``(0, 0)``."""

    letters: Tuple[Tuple[str, np.ndarray], ...]
    level: int
    degree: int

    def __post_init__(self) -> None:
        for kind, _ in self.letters:
            if kind not in LETTERS:
                raise ShapeMismatchError(f"unknown letter kind {kind!r}")
        consumed = sum(LETTERS[kind][1] for kind, _ in self.letters)
        contracted = sum(LETTERS[kind][2] for kind, _ in self.letters)
        if consumed != self.level or contracted != self.degree:
            raise LevelError(
                f"word {self} consumes ({consumed}, {contracted}), "
                f"expected ({self.level}, {self.degree})"
            )

    def __str__(self) -> str:
        return " ".join(LETTERS[kind][0] for kind, _ in self.letters) or "1"


class VanEstMap:
    """Φ and its operators for one crossed module."""

    def __init__(self, group: StrictLie2Group, step: float = NESTED_STEP):
        self.group = group
        self.model = group.WbarG
        self.levels = LevelAlgebra(group.cm)
        self.alg = self.levels.alg
        self.step = step

    # operators

    def lie_derivative(self, field: GeneratorField, form: FormField) -> FormField:
        def evaluate(point: Stack, tangents: Sequence[Stack]) -> float:
            def along(t: float) -> float:
                def flow(stack: Stack) -> Stack:
                    return field.flow(t, stack)

                return form(flow(point), [push_forward(flow, point, v)[1] for v in tangents])

            return curve_derivative(along, step=self.step)

        return FormField(form.level, form.degree, evaluate, f"L({form.name})")

    def contraction(self, field: GeneratorField, form: FormField) -> FormField:
        if form.degree < 1:
            raise LevelError("cannot contract a 0-form")

        def evaluate(point: Stack, tangents: Sequence[Stack]) -> float:
            return form(point, [field.vector(point)] + list(tangents))

        return FormField(form.level, form.degree - 1, evaluate, f"ι({form.name})")

    def degenerate(self, form: FormField, indices: Sequence[int]) -> FormField:
        """Pullback along ``σ̄_{i_1} ∘ ⋯ ∘ σ̄_{i_k}`` (rightmost first)."""

        def lift(stack: Stack) -> Stack:
            for j in reversed(indices):
                stack = self.model.degeneracy(len(stack), j, stack)
            return stack

        return pullback(form, lift, form.level - len(indices))

    def _operator(self, kind: str, vec: np.ndarray, form: FormField) -> FormField:
        p = form.level
        contract = kind in ("z", "w")
        if contract and form.degree < 1:
            raise LevelError(f"J_{kind} needs a form of positive degree")
        apply = self.contraction if contract else self.lie_derivative
        if kind in ("x", "z"):
            if p < 1:
                raise LevelError(f"{LETTERS[kind][0]} needs level at least 1, got {p}")
            return self.degenerate(apply(GeneratorField(self.levels, "x", p, vec), form), (0,))
        if p < 2:
            raise LevelError(f"{LETTERS[kind][0]} needs level at least 2, got {p}")
        total: Optional[FormField] = None
        for beta in range(p - 1):
            field = GeneratorField(self.levels, "y", p, vec, beta + 1)
            term = self.degenerate(apply(field, form), (0, beta)).scale((-1) ** beta)
            total = term if total is None else total + term
        assert total is not None
        return total

    def op_R(self, vec: np.ndarray, form: FormField, kind: str = "x") -> FormField:
        """
        ``R_x ω = σ̄_0* L_{x^p} ω`` or
        ``R_y ω = Σ_β (-1)^β (σ̄_0 σ̄_β)* L_{y_{β+1}} ω``.
        """
        if kind not in ("x", "y"):
            raise ShapeMismatchError(f"R takes x or y arguments, got {kind!r}")
        return self._operator(kind, vec, form)

    def op_J(self, vec: np.ndarray, form: FormField, kind: str = "z") -> FormField:
        """``J_z ω = σ̄_0* ι_{z^p} ω`` and the analogous sum for ``J_w``."""
        if kind not in ("z", "w"):
            raise ShapeMismatchError(f"J takes z or w arguments, got {kind!r}")
        return self._operator(kind, vec, form)

    def apply_word(self, word: OperatorWord, form: FormField) -> float:
        if (form.level, form.degree) != (word.level, word.degree):
            raise LevelError(f"word {word} does not fit {form!r}")
        for kind, vec in reversed(word.letters):
            form = self._operator(kind, vec, form)
        return form((), ())

    # Φ

    @staticmethod
    def normalization_sign(block: Block) -> int:
        k, l, a, b = block
        p = k + 2 * l + a + 2 * b
        exponent = p * (p - 1) // 2 + k * a + k * b + b * (b - 1) // 2
        return -1 if exponent % 2 else 1

    def phi_value(self, block: Block, form: FormField, args: Args) -> float:
        """``Φ^{klab}(ω)`` on one ordered argument list."""
        letters = [(kind, np.asarray(vec, dtype=float)) for kind, vec in args]
        total = 0.0
        for bp, sign in block_permutations(tuple(block)):  # type: ignore[arg-type]
            word = OperatorWord(tuple(letters[i] for i in bp.perm), form.level, form.degree)
            total += sign * self.apply_word(word, form)
        return self.normalization_sign(block) * total

    def phi_component(self, block: Block, form: FormField, check: bool = True) -> np.ndarray:
        """
        The ``(k, l, a, b)`` Weil block of ``Φ(ω)``.

        Blocks of the wrong bidegree are zero.

        Raises:
            CapacityError: for more than six letters
            NormalizationError: if ``ω`` is not normalized
        """
        k, l, a, b = block
        dims = self.alg.dims
        shape = (dims["x"],) * k + (dims["y"],) * l + (dims["z"],) * a + (dims["w"],) * b
        if (form.level, form.degree) != (k + 2 * l + a + 2 * b, a + b):
            return np.zeros(shape)
        if check:
            require_normalized(form, self.model, self.group.cm)
        logger.debug(f"Φ block {block} of {form!r}")
        return tabulate_symmetric(
            lambda args: self.phi_value(block, form, args), tuple(block) + (0,), dims
        )

    def phi_full(self, form: FormField, check: bool = True) -> WeilElement:
        if check:
            require_normalized(form, self.model, self.group.cm)
        blocks = {
            block: self.phi_component(block, form, check=False)
            for block in blocks_of_bidegree(form.level, form.degree)
        }
        return WeilElement(self.alg, blocks, project=False)

    def cochain_map_check(self, form: FormField) -> Dict[str, float]:
        """
        Residuals of ``Φ(∂̄ω) = (-1)^r δΦ(ω)`` and ``Φ(dω) = dΦ(ω)``.

        ``dω`` is computed in right-invariant charts, so the second residual
        carries the chart differentiation error.
        """
        image = self.phi_full(form)
        coboundary = self.phi_full(simplicial_coboundary(form, self.model), check=False)
        expected = weil_delta(image).scale((-1) ** form.degree)
        de_rham = self.phi_full(chart_d(form, step=self.step), check=False)
        residuals = {
            "coboundary": (coboundary - expected).max_abs(),
            "de_rham": (de_rham - weil_d(image)).max_abs(),
        }
        logger.debug(f"Cochain map residuals for {form!r}: {residuals}")
        return residuals
