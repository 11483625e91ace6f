"""
Cochains and differential forms on the levels of a simplicial model.

A ``FormField`` of degree r evaluates ``ω_x(V_1, ..., V_r)`` where ``x`` is a
point of some level and the ``V_k`` are tangent trees with the same structure
as ``x``. Pullbacks push tangents through maps with exact ``TangentAt``
arithmetic; the only numerical derivative is in :func:`chart_d`.
"""

import logging
from typing import Any, Callable, List, Optional, Sequence

import numpy as np
from scipy.linalg import expm

from .exceptions import NormalizationError, ShapeMismatchError
from .group2 import MatrixCrossedModule, NerveElement
from .numcore import (
    DEFAULT_STEP,
    curve_derivative,
    push_forward,
    tree_base,
    tree_leaves,
    tree_lift,
    tree_map,
)
from .simplicial import SimplicialModel, Stack

logger = logging.getLogger(__name__)

NORMALIZATION_TOLERANCE = 1e-6

FormFn = Callable[[Any, Sequence[Any]], float]


class FormField:
    """A differential form of fixed degree on one level of a simplicial model."""

    def __init__(self, level: int, degree: int, fn: FormFn, name: str = ""):
        if degree < 0:
            raise ShapeMismatchError("form degree must be non-negative")
        self.level = level
        self.degree = degree
        self.fn = fn
        self.name = name

    def __repr__(self) -> str:
        return f"FormField({self.name or 'ω'}, level={self.level}, degree={self.degree})"

    def __call__(self, point: Any, tangents: Sequence[Any] = ()) -> float:
        if len(tangents) != self.degree:
            raise ShapeMismatchError(
                f"{self!r} takes {self.degree} tangents, got {len(tangents)}"
            )
        return float(self.fn(point, tangents))

    def __add__(self, other: "FormField") -> "FormField":
        self._check(other)
        return FormField(
            self.level, self.degree, lambda x, vs: self(x, vs) + other(x, vs), self.name
        )

    def __sub__(self, other: "FormField") -> "FormField":
        return self + other.scale(-1.0)

    def scale(self, factor: float) -> "FormField":
        return FormField(self.level, self.degree, lambda x, vs: factor * self(x, vs), self.name)

    def _check(self, other: "FormField") -> None:
        if (self.level, self.degree) != (other.level, other.degree):
            raise ShapeMismatchError(
                f"cannot combine {self!r} with {other!r}"
            )

    @classmethod
    def zero(cls, level: int, degree: int) -> "FormField":
        return cls(level, degree, lambda x, vs: 0.0, "0")


class CochainField(FormField):
    """A smooth function on one level (a form of degree 0)."""

    def __init__(self, level: int, fn: Callable[[Any], float], name: str = ""):
        super().__init__(level, 0, lambda x, vs: fn(x), name)


def pullback(form: FormField, fn: Callable[[Any], Any], level: int) -> FormField:
    """``F*ω`` for a map ``F`` written with TangentAt-compatible operations."""

    def evaluate(point: Any, tangents: Sequence[Any]) -> float:
        image = tree_base(fn(point))
        pushed = [push_forward(fn, point, v)[1] for v in tangents]
        return form(image, pushed)

    return FormField(level, form.degree, evaluate, f"pullback({form.name})")


def simplicial_coboundary(form: FormField, model: SimplicialModel) -> FormField:
    """``∂ω = Σ_i (-1)^i d_i* ω``, one level up."""
    n = form.level + 1
    pulled = [
        pullback(form, lambda x, i=i: model.face(n, i, x), n) for i in range(n + 1)
    ]

    def evaluate(point: Any, tangents: Sequence[Any]) -> float:
        return sum((-1) ** i * f(point, tangents) for i, f in enumerate(pulled))

    return FormField(n, form.degree, evaluate, f"∂({form.name})")


def degeneracy_pullbacks(form: FormField, model: SimplicialModel) -> List[FormField]:
    n = form.level - 1
    return [
        pullback(form, lambda x, i=i: model.degeneracy(n, i, x), n)
        for i in range(form.level)
    ]


def normalization_residual(
    form: FormField,
    model: SimplicialModel,
    points: Sequence[Any],
    tangents: Optional[Sequence[Sequence[Any]]] = None,
) -> float:
    """Max of ``|σ_i* ω|`` over lower-level sample points."""
    residual = 0.0
    for pulled in degeneracy_pullbacks(form, model):
        for index, point in enumerate(points):
            vs = tangents[index] if tangents is not None else ()
            residual = max(residual, abs(pulled(point, vs)))
    return residual


def normalize_check(
    form: FormField,
    model: SimplicialModel,
    points: Sequence[Any],
    tangents: Optional[Sequence[Sequence[Any]]] = None,
    tolerance: float = 1e-10,
) -> bool:
    return normalization_residual(form, model, points, tangents) <= tolerance


def require_normalized(
    form: FormField,
    model: SimplicialModel,
    cm: MatrixCrossedModule,
    samples: int = 2,
    tolerance: float = NORMALIZATION_TOLERANCE,
) -> None:
    """
    Spot-check normalization on seeded points one level down.

    Raises:
        NormalizationError: if some degeneracy pullback exceeds ``tolerance``
    """
    if form.level == 0:
        return
    rng = np.random.default_rng(0)
    points = [model.sample(form.level - 1, rng) for _ in range(samples)]
    tangents = [[random_tangent(cm, x, rng) for _ in range(form.degree)] for x in points]
    residual = normalization_residual(form, model, points, tangents)
    if residual > tolerance:
        raise NormalizationError(
            f"{form!r} is not normalized: degeneracy pullback of size {residual:.2e}"
        )


# Right-invariant charts.


def _right_log(tangent: Any, point: Any) -> Any:
    return tree_map(lambda d, m: d @ np.linalg.inv(m), tangent, point)


def _field_at(generator: Any, point: Any) -> Any:
    return tree_map(lambda u, m: u @ m, generator, point)


def _flow(generator: Any, point: Any, t: float) -> Any:
    return tree_map(lambda u, m: expm(t * u) @ m, generator, point)


def _bracket(first: Any, second: Any) -> Any:
    # right-invariant fields: [X_U, X_V] = X_{-[U, V]}
    return tree_map(lambda a, b: b @ a - a @ b, first, second)


def chart_d(form: FormField, step: float = DEFAULT_STEP) -> FormField:
    """
    De Rham differential in right-invariant frames.

    Each tangent is extended to the right-invariant field through it and
    ``dω(X_0, ..., X_r)`` is expanded with the invariant formula; the
    directional derivatives are taken along the exponential flows.
    """
    r = form.degree

    def evaluate(point: Any, tangents: Sequence[Any]) -> float:
        gens = [_right_log(v, point) for v in tangents]
        total = 0.0
        for i in range(r + 1):
            others = gens[:i] + gens[i + 1 :]

            def along(t: float, i: int = i, others: List[Any] = others) -> float:
                moved = _flow(gens[i], point, t)
                return form(moved, [_field_at(u, moved) for u in others])

            total += (-1) ** i * curve_derivative(along, step=step)
        for i in range(r + 1):
            for j in range(i + 1, r + 1):
                rest = [g for k, g in enumerate(gens) if k not in (i, j)]
                fields = [_field_at(u, point) for u in [_bracket(gens[i], gens[j])] + rest]
                total += (-1) ** (i + j) * form(point, fields)
        return total

    return FormField(form.level, r + 1, evaluate, f"d({form.name})")


# Random test data.


def flatten(tree: Any) -> np.ndarray:
    leaves = [np.ravel(leaf) for leaf in tree_leaves(tree_base(tree))]
    return np.concatenate(leaves) if leaves else np.zeros(0)


def _offsets(tree: Any) -> np.ndarray:
    return tree_map(lambda m: np.eye(m.shape[0]), tree)


def random_tangent(cm: MatrixCrossedModule, stack: Stack, rng: np.random.Generator) -> Stack:
    """Right-translated random algebra elements at every slot of a stack."""
    return tuple(
        NerveElement(
            tuple(cm.H.hat(rng.standard_normal(cm.H.dim)) @ h for h in slot.hs),
            cm.G.hat(rng.standard_normal(cm.G.dim)) @ slot.g,
        )
        for slot in stack
    )


def _offset(tree: Any) -> np.ndarray:
    """The flattened offset of a tree of matrices from the unit."""
    return flatten(tree) - flatten(_offsets(tree_base(tree)))


def _vanishing(tree: Any, linear: np.ndarray, square: np.ndarray) -> float:
    """``a·u + (b·u)^2`` with ``u`` the flattened offset from the unit; zero at the unit."""
    u = _offset(tree)
    return float(linear @ u + (square @ u) ** 2)


def _vanishing_d(tree: Any, tangent: Any, linear: np.ndarray, square: np.ndarray) -> float:
    """Derivative of :func:`_vanishing` along ``tangent``."""
    u, du = _offset(tree), flatten(tangent)
    return float(linear @ du + 2.0 * (square @ u) * (square @ du))


class RandomNormalizedForm:
    """
    Random normalized r-form on level ``m`` of ``W̄G``.

    ``ω_x(V) = Π_t φ_t(x_t) · det[dψ_k(V_j)]`` where ``x_t`` is the t-th slot,
    ``φ_t(M) = a·u + (b·u)^2`` with ``u`` the flattened ``M - 1`` and ``ψ`` a
    quadratic map to R^r. Every degeneracy inserts a unit slot, on which
    ``φ`` vanishes.
    """

    def __init__(self, template: Stack, degree: int, rng: np.random.Generator):
        self.level = len(template)
        self.degree = degree
        sizes = [flatten(slot).size for slot in template]
        self.slot_linear = [rng.standard_normal(size) for size in sizes]
        self.slot_square = [0.5 * rng.standard_normal(size) for size in sizes]
        total = sum(sizes)
        self.psi_linear = rng.standard_normal((degree, total))
        self.psi_square = 0.5 * rng.standard_normal((degree, total))

    def weight(self, stack: Stack) -> float:
        value = 1.0
        for slot, a, b in zip(stack, self.slot_linear, self.slot_square):
            value *= _vanishing(slot, a, b)
        return value

    def _dpsi(self, stack: Stack, tangent: Stack) -> np.ndarray:
        u = _offset(stack)
        du = flatten(tangent)
        return self.psi_linear @ du + 2.0 * (self.psi_square @ u) * (self.psi_square @ du)

    def __call__(self, stack: Stack, tangents: Sequence[Stack]) -> float:
        weight = self.weight(stack)
        if self.degree == 0:
            return weight
        matrix = np.stack([self._dpsi(stack, v) for v in tangents], axis=1)
        return weight * float(np.linalg.det(matrix))

    def field(self) -> FormField:
        return FormField(self.level, self.degree, self, "random")


class MixedNormalizedForm(RandomNormalizedForm):
    """
    Random normalized r-form on level ``m >= 2`` that does not split over the slots.

    ``ω = W·det[dψ_k(V_j)] + χ·det[dW(V_j); dψ_k(V_j)]_{k<r}`` with
    ``W = Π_j β_j(h_j)·(1 + c·u')`` over the arrows ``h_j`` of the top slot,
    ``u'`` the offset of the deeper slots and ``χ = 1 + e·u``. ``σ̄_0`` makes
    the top slot a unit and every other degeneracy puts a unit arrow into it,
    so ``W`` and ``dW`` pull back to zero. Unlike product forms, these reach
    the Φ blocks with ``y`` and ``w`` letters.
    """

    def __init__(self, template: Stack, degree: int, rng: np.random.Generator):
        if len(template) < 2:
            raise ShapeMismatchError("mixed forms need level at least 2")
        super().__init__(template, degree, rng)
        arrows = template[0].hs
        self.arrow_linear = [rng.standard_normal(np.size(h)) for h in arrows]
        self.arrow_square = [0.5 * rng.standard_normal(np.size(h)) for h in arrows]
        self.rest_linear = 0.5 * rng.standard_normal(flatten(tuple(template[1:])).size)
        self.chi_linear = 0.5 * rng.standard_normal(flatten(template).size)

    def _arrow_factors(self, stack: Stack) -> List[float]:
        return [
            _vanishing(h, a, b)
            for h, a, b in zip(stack[0].hs, self.arrow_linear, self.arrow_square)
        ]

    def _rest(self, stack: Stack) -> float:
        return 1.0 + float(self.rest_linear @ _offset(tuple(stack[1:])))

    def weight(self, stack: Stack) -> float:
        return self._rest(stack) * float(np.prod(self._arrow_factors(stack)))

    def weight_d(self, stack: Stack, tangent: Stack) -> float:
        """``dW`` along one tangent, by the product rule."""
        factors = self._arrow_factors(stack)
        total = float(self.rest_linear @ flatten(tuple(tangent[1:]))) * float(np.prod(factors))
        rest = self._rest(stack)
        pieces = zip(stack[0].hs, tangent[0].hs, self.arrow_linear, self.arrow_square)
        for j, (h, dh, a, b) in enumerate(pieces):
            others = float(np.prod(factors[:j] + factors[j + 1 :]))
            total += rest * _vanishing_d(h, dh, a, b) * others
        return total

    def __call__(self, stack: Stack, tangents: Sequence[Stack]) -> float:
        value = super().__call__(stack, tangents)
        if self.degree == 0:
            return value
        chi = 1.0 + float(self.chi_linear @ _offset(stack))
        first = np.array([[self.weight_d(stack, v) for v in tangents]])
        rows = np.stack([self._dpsi(stack, v)[: self.degree - 1] for v in tangents], axis=1)
        return value + chi * float(np.linalg.det(np.vstack([first, rows])))

    def field(self) -> FormField:
        return FormField(self.level, self.degree, self, "mixed")


def random_normalized_form(
    model: SimplicialModel, level: int, degree: int, rng: np.random.Generator, mixed: bool = False
) -> FormField:
    """A random normalized form on ``model``; ``mixed`` picks :class:`MixedNormalizedForm`."""
    cls = MixedNormalizedForm if mixed and level >= 2 else RandomNormalizedForm
    return cls(model.sample(level, rng), degree, rng).field()
