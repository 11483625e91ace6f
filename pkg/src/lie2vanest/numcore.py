"""
Numerical core.

Dense matrix helpers, exact first-order tangents of matrix-built maps
(``TangentAt``), the scalar-curve derivative engine and the permutation /
shuffle sign combinatorics used by the van Est map.

Every group-level differential in the package is exact: matrix expressions are
evaluated on ``TangentAt`` values and the product rule does the rest. The only
numerical differentiation happens in :func:`curve_derivative`.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterator, List, Sequence, Tuple, Union

import numpy as np

from .exceptions import CapacityError, NumericalError, ShapeMismatchError

logger = logging.getLogger(__name__)

DEFAULT_STEP = 1e-4
DEFAULT_RATIO = 2.0
NESTED_STEP = 1e-2
MAX_PERMUTATION_LETTERS = 6

Mat = np.ndarray


def as_mat(entries: Any) -> Mat:
    """Build a validated dense matrix (rows, cols > 0, finite entries)."""
    mat = np.array(entries, dtype=float)
    if mat.ndim != 2 or mat.shape[0] == 0 or mat.shape[1] == 0:
        raise ShapeMismatchError(f"expected a non-empty matrix, got shape {mat.shape}")
    if not np.all(np.isfinite(mat)):
        raise NumericalError("matrix entries must be finite")
    return mat


class TangentAt:
    """
    A tangent vector ``dir`` at the point ``base``.

    Arithmetic propagates first-order variations exactly, so any map written
    with ``+``, ``-``, ``*``, ``@``, ``.T`` and :func:`mat_inv` returns its
    tangent map when fed a ``TangentAt``.
    """

    __slots__ = ("base", "dir")
    __array_ufunc__ = None

    def __init__(self, base: Any, dir: Any):
        base = np.asarray(base, dtype=float)
        dir = np.asarray(dir, dtype=float)
        if base.shape != dir.shape:
            raise ShapeMismatchError(
                f"tangent direction {dir.shape} does not match base {base.shape}"
            )
        self.base = base
        self.dir = dir

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.base.shape

    @property
    def T(self) -> "TangentAt":
        return TangentAt(self.base.T, self.dir.T)

    def __repr__(self) -> str:
        return f"TangentAt(base={self.base!r}, dir={self.dir!r})"

    def __neg__(self) -> "TangentAt":
        return TangentAt(-self.base, -self.dir)

    def __add__(self, other: Any) -> "TangentAt":
        if isinstance(other, TangentAt):
            return TangentAt(self.base + other.base, self.dir + other.dir)
        return TangentAt(self.base + other, self.dir)

    __radd__ = __add__

    def __sub__(self, other: Any) -> "TangentAt":
        return self + (-other)

    def __rsub__(self, other: Any) -> "TangentAt":
        return (-self) + other

    def __mul__(self, other: Any) -> "TangentAt":
        if isinstance(other, TangentAt):
            return TangentAt(
                self.base * other.base, self.dir * other.base + self.base * other.dir
            )
        return TangentAt(self.base * other, self.dir * other)

    __rmul__ = __mul__

    def __truediv__(self, other: float) -> "TangentAt":
        return TangentAt(self.base / other, self.dir / other)

    def __matmul__(self, other: Any) -> "TangentAt":
        if isinstance(other, TangentAt):
            return TangentAt(
                self.base @ other.base, self.dir @ other.base + self.base @ other.dir
            )
        return TangentAt(self.base @ other, self.dir @ other)

    def __rmatmul__(self, other: Any) -> "TangentAt":
        return TangentAt(other @ self.base, other @ self.dir)

    def inv(self) -> "TangentAt":
        inverse = np.linalg.inv(self.base)
        return TangentAt(inverse, -inverse @ self.dir @ inverse)

    def sum(self) -> "TangentAt":
        return TangentAt(self.base.sum(), self.dir.sum())


MatLike = Union[Mat, TangentAt]


def mat_inv(value: MatLike) -> MatLike:
    if isinstance(value, TangentAt):
        return value.inv()
    return np.linalg.inv(value)


def linear_apply(fn: Callable[[Mat], Mat], value: MatLike) -> MatLike:
    """Apply a linear map, pushing tangents through it."""
    if isinstance(value, TangentAt):
        return TangentAt(fn(value.base), fn(value.dir))
    return fn(value)


def bilinear_apply(fn: Callable[[Mat, Mat], Mat], left: MatLike, right: MatLike) -> MatLike:
    """Apply a bilinear map with the product rule."""
    if not isinstance(left, TangentAt) and not isinstance(right, TangentAt):
        return fn(left, right)
    lb, ld = (left.base, left.dir) if isinstance(left, TangentAt) else (left, None)
    rb, rd = (right.base, right.dir) if isinstance(right, TangentAt) else (right, None)
    base = fn(lb, rb)
    direction = np.zeros_like(base)
    if ld is not None:
        direction = direction + fn(ld, rb)
    if rd is not None:
        direction = direction + fn(lb, rd)
    return TangentAt(base, direction)


def constant_like(value: MatLike, constant: Mat) -> MatLike:
    """``constant`` as a value of the same kind as ``value`` (zero tangent)."""
    if isinstance(value, TangentAt):
        return TangentAt(constant, np.zeros_like(constant))
    return constant


def base_of(value: MatLike) -> Mat:
    return value.base if isinstance(value, TangentAt) else value


def dir_of(value: MatLike) -> Mat:
    return value.dir if isinstance(value, TangentAt) else np.zeros_like(value)


def tangent_of_product(left: TangentAt, right: TangentAt) -> TangentAt:
    """Exact differential of matrix multiplication."""
    if left.shape[-1] != right.shape[0]:
        raise ShapeMismatchError(f"cannot compose {left.shape} with {right.shape}")
    return left @ right


def tangent_of_inverse(value: TangentAt) -> TangentAt:
    """Exact differential of matrix inversion: dir -> -A^-1 dir A^-1."""
    if len(value.shape) != 2 or value.shape[0] != value.shape[1]:
        raise ShapeMismatchError(f"cannot invert a {value.shape} matrix")
    return value.inv()


# Trees: nested tuples / NamedTuples whose leaves are matrices or TangentAt.


def tree_map(fn: Callable[..., Any], tree: Any, *rest: Any) -> Any:
    if isinstance(tree, tuple):
        items = [
            tree_map(fn, item, *(other[index] for other in rest))
            for index, item in enumerate(tree)
        ]
        if hasattr(tree, "_fields"):
            return type(tree)(*items)
        return tuple(items)
    return fn(tree, *rest)


def tree_leaves(tree: Any) -> List[Any]:
    if isinstance(tree, tuple):
        leaves: List[Any] = []
        for item in tree:
            leaves.extend(tree_leaves(item))
        return leaves
    return [tree]


def tree_lift(point: Any, tangent: Any) -> Any:
    """Pair a point with a tangent of the same structure."""
    return tree_map(TangentAt, point, tangent)


def tree_base(tree: Any) -> Any:
    return tree_map(base_of, tree)


def tree_dir(tree: Any) -> Any:
    return tree_map(dir_of, tree)


def tree_zeros(point: Any) -> Any:
    return tree_map(np.zeros_like, point)


def tree_add(left: Any, right: Any) -> Any:
    return tree_map(lambda a, b: a + b, left, right)


def tree_scale(tree: Any, factor: float) -> Any:
    return tree_map(lambda a: a * factor, tree)


def tree_residual(left: Any, right: Any) -> float:
    """Max absolute entry difference between two trees of the same structure."""
    leaves_a = tree_leaves(tree_base(left))
    leaves_b = tree_leaves(tree_base(right))
    if len(leaves_a) != len(leaves_b):
        raise ShapeMismatchError("trees have different structure")
    residual = 0.0
    for a, b in zip(leaves_a, leaves_b):
        if np.shape(a) != np.shape(b):
            raise ShapeMismatchError(f"leaf shapes differ: {np.shape(a)} vs {np.shape(b)}")
        if np.size(a):
            residual = max(residual, float(np.max(np.abs(np.asarray(a) - np.asarray(b)))))
    return residual


def push_forward(fn: Callable[[Any], Any], point: Any, tangent: Any) -> Tuple[Any, Any]:
    """Evaluate ``fn`` at ``point`` together with its exact tangent map."""
    lifted = fn(tree_lift(point, tangent))
    return tree_base(lifted), tree_dir(lifted)


def curve_derivative(
    fn: Callable[[float], Any],
    t0: float = 0.0,
    step: float = DEFAULT_STEP,
    ratio: float = DEFAULT_RATIO,
) -> Any:
    """
    Derivative of a scalar (or array) valued curve at ``t0``.

    Central differences at ``step`` and ``step / ratio`` combined by one
    Richardson extrapolation step.

    >>> round(curve_derivative(lambda t: math.exp(3 * t)), 7)
    3.0
    """
    def central(h: float) -> Any:
        return (np.asarray(fn(t0 + h)) - np.asarray(fn(t0 - h))) / (2.0 * h)

    coarse = central(step)
    fine = central(step / ratio)
    weight = ratio * ratio
    value = (weight * fine - coarse) / (weight - 1.0)
    if not np.all(np.isfinite(value)):
        raise NumericalError(f"non-finite derivative at t0={t0}")
    if np.ndim(value) == 0:
        return float(value)
    return value


# Permutations and signs.

BLOCK_KINDS = ("x", "y", "z", "w")
BIDEGREES: Dict[str, Tuple[int, int]] = {
    "x": (1, 0),
    "y": (2, 0),
    "z": (1, 1),
    "w": (2, 1),
}


def permutation_sign(perm: Sequence[int]) -> int:
    inversions = sum(
        1 for i, j in itertools.combinations(range(len(perm)), 2) if perm[i] > perm[j]
    )
    return -1 if inversions % 2 else 1


def koszul_sign(parities: Sequence[int], order: Sequence[int]) -> int:
    """Sign of reordering graded items so that item ``order[i]`` lands at slot i."""
    odd_swaps = 0
    for i, j in itertools.combinations(range(len(order)), 2):
        if order[i] > order[j] and parities[order[i]] % 2 and parities[order[j]] % 2:
            odd_swaps += 1
    return -1 if odd_swaps % 2 else 1


@dataclass(frozen=True)
class BlockPermutation:
    """
    A permutation of the letters of a (k, l, a, b) operator word.

    ``perm[i]`` is the original letter placed at position i. Letters
    ``0..k-1`` are x letters, the next ``l`` are y letters, then ``a`` z
    letters and ``b`` w letters.
    """

    sizes: Tuple[int, int, int, int]
    perm: Tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.sizes) != 4 or any(size < 0 for size in self.sizes):
            raise ShapeMismatchError(f"invalid block sizes {self.sizes}")
        if sorted(self.perm) != list(range(sum(self.sizes))):
            raise ShapeMismatchError(
                f"{self.perm} is not a bijection of {sum(self.sizes)} letters"
            )

    @property
    def size(self) -> int:
        return len(self.perm)

    def kind_of(self, letter: int) -> str:
        bound = 0
        for kind, size in zip(BLOCK_KINDS, self.sizes):
            bound += size
            if letter < bound:
                return kind
        raise ShapeMismatchError(f"letter {letter} outside the word")

    def block_start(self, kind: str) -> int:
        return sum(self.sizes[: BLOCK_KINDS.index(kind)])

    def compose(self, other: "BlockPermutation") -> "BlockPermutation":
        """The permutation ``self`` after ``other``."""
        if self.sizes != other.sizes:
            raise ShapeMismatchError("block sizes differ")
        return BlockPermutation(self.sizes, tuple(self.perm[i] for i in other.perm))

    @classmethod
    def identity(cls, sizes: Tuple[int, int, int, int]) -> "BlockPermutation":
        return cls(tuple(sizes), tuple(range(sum(sizes))))  # type: ignore[arg-type]


@dataclass(frozen=True)
class BlockFactorization:
    """Block factors (relative orders per block) and the residual shuffle."""

    blocks: Dict[str, Tuple[int, ...]]
    shuffle: Tuple[str, ...]


def factorize(bp: BlockPermutation) -> BlockFactorization:
    """Split ``bp`` into per-block permutations and a (k, l, a, b)-shuffle."""
    blocks: Dict[str, List[int]] = {kind: [] for kind in BLOCK_KINDS}
    shuffle = []
    for letter in bp.perm:
        kind = bp.kind_of(letter)
        blocks[kind].append(letter - bp.block_start(kind))
        shuffle.append(kind)
    return BlockFactorization(
        blocks={kind: tuple(order) for kind, order in blocks.items()},
        shuffle=tuple(shuffle),
    )


def shuffle_sign(shuffle: Sequence[str]) -> int:
    """Bigraded Koszul sign of a shuffle of block kinds."""
    sign = 1
    for i, j in itertools.combinations(range(len(shuffle)), 2):
        first, second = shuffle[i], shuffle[j]
        if BLOCK_KINDS.index(first) > BLOCK_KINDS.index(second):
            (p1, r1), (p2, r2) = BIDEGREES[first], BIDEGREES[second]
            if (p1 * p2 + r1 * r2) % 2:
                sign = -sign
    return sign


def block_sign(bp: BlockPermutation) -> int:
    """sgn of the x factor times sgn of the w factor times the shuffle sign."""
    factors = factorize(bp)
    return (
        permutation_sign(factors.blocks["x"])
        * permutation_sign(factors.blocks["w"])
        * shuffle_sign(factors.shuffle)
    )


def block_permutations(
    sizes: Tuple[int, int, int, int]
) -> Iterator[Tuple[BlockPermutation, int]]:
    """All permutations of a (k, l, a, b) word with their block signs."""
    total = sum(sizes)
    if total > MAX_PERMUTATION_LETTERS:
        raise CapacityError(
            f"{total} letters exceed the S_{MAX_PERMUTATION_LETTERS} capacity"
        )
    logger.debug(f"Enumerating {math.factorial(total)} permutations for sizes {sizes}")
    for perm in itertools.permutations(range(total)):
        bp = BlockPermutation(tuple(sizes), perm)  # type: ignore[arg-type]
        yield bp, block_sign(bp)
