"""
Graded multilinear functions and the derivation engine.

Elements of Chevalley-Eilenberg and Weil type algebras are handled as
graded-symmetric multilinear functions of typed arguments. The argument kinds
and their parities are:

    x  (odd)   element of g0
    y  (even)  element of h
    z  (even)  shifted element of g0
    w  (odd)   shifted element of h
    v  (odd)   tangent vector of the base

Arguments are always stored in the kind order x, y, z, w, v. A derivation
described by quadratic and linear rules acts on a function by inserting the
rule output in front of the remaining arguments, with the Koszul sign of the
moves.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Sequence, Set, Tuple

import numpy as np

from .exceptions import ShapeMismatchError
from .numcore import permutation_sign

logger = logging.getLogger(__name__)

KINDS = ("x", "y", "z", "w", "v")
PARITY: Dict[str, int] = {"x": 1, "y": 0, "z": 0, "w": 1, "v": 1}
ORDER: Dict[str, int] = {kind: index for index, kind in enumerate(KINDS)}

# v arguments carry tangent trees instead of vectors
Arg = Tuple[str, Any]
Args = List[Arg]
Signature = Tuple[int, int, int, int, int]
Evaluator = Callable[[Args], float]
QuadraticRule = Tuple[str, Callable[[np.ndarray, np.ndarray], np.ndarray]]
LinearRule = Tuple[str, Callable[[np.ndarray], np.ndarray]]


def signature(args: Sequence[Arg]) -> Signature:
    counts = [0] * len(KINDS)
    for kind, _ in args:
        counts[ORDER[kind]] += 1
    return tuple(counts)  # type: ignore[return-value]


def check_ordered(args: Sequence[Arg]) -> None:
    ranks = [ORDER[kind] for kind, _ in args]
    if ranks != sorted(ranks):
        raise ShapeMismatchError(f"arguments out of kind order: {[k for k, _ in args]}")


def make_args(groups: Dict[str, Sequence[np.ndarray]]) -> Args:
    """Assemble an ordered argument list from per-kind vectors."""
    args: Args = []
    for kind in KINDS:
        args.extend((kind, np.asarray(vec, dtype=float)) for vec in groups.get(kind, ()))
    return args


def split_args(args: Sequence[Arg]) -> Dict[str, List[np.ndarray]]:
    groups: Dict[str, List[np.ndarray]] = {kind: [] for kind in KINDS}
    for kind, vec in args:
        groups[kind].append(vec)
    return groups


def move_to_front_sign(args: Sequence[Arg], index: int) -> int:
    """Koszul sign of moving ``args[index]`` to the front."""
    if not PARITY[args[index][0]]:
        return 1
    passed = sum(PARITY[kind] for kind, _ in args[:index])
    return -1 if passed % 2 else 1


def insert_front(args: Sequence[Arg], kind: str, vec: np.ndarray) -> Tuple[int, Args]:
    """Place a new argument at the front of its kind block."""
    position = 0
    while position < len(args) and ORDER[args[position][0]] < ORDER[kind]:
        position += 1
    passed = sum(PARITY[k] for k, _ in args[:position])
    sign = -1 if PARITY[kind] and passed % 2 else 1
    return sign, list(args[:position]) + [(kind, vec)] + list(args[position:])


@dataclass(frozen=True)
class DerivationRules:
    """Quadratic and linear generator rules of a derivation."""

    quadratic: Dict[Tuple[str, str], QuadraticRule] = field(default_factory=dict)
    linear: Dict[str, LinearRule] = field(default_factory=dict)

    def source_signatures(self, target: Signature) -> Set[Signature]:
        """Signatures S such that the derivation maps a ``target`` block into S."""
        found: Set[Signature] = set()
        for (first, second), (out, _) in self.quadratic.items():
            if target[ORDER[out]] >= 1:
                counts = list(target)
                counts[ORDER[out]] -= 1
                counts[ORDER[first]] += 1
                counts[ORDER[second]] += 1
                found.add(tuple(counts))  # type: ignore[arg-type]
        for source, (out, _) in self.linear.items():
            if target[ORDER[out]] >= 1:
                counts = list(target)
                counts[ORDER[out]] -= 1
                counts[ORDER[source]] += 1
                found.add(tuple(counts))  # type: ignore[arg-type]
        return found


def apply_derivation(fn: Evaluator, args: Sequence[Arg], rules: DerivationRules) -> float:
    """Evaluate ``D fn`` on ``args`` for the derivation ``D`` given by ``rules``."""
    args = list(args)
    total = 0.0
    for index, (kind, vec) in enumerate(args):
        if kind not in rules.linear:
            continue
        out_kind, rule = rules.linear[kind]
        rest = args[:index] + args[index + 1 :]
        sign, new_args = insert_front(rest, out_kind, rule(vec))
        total += move_to_front_sign(args, index) * sign * fn(new_args)
    for i, j in itertools.combinations(range(len(args)), 2):
        key = (args[i][0], args[j][0])
        if key not in rules.quadratic:
            continue
        out_kind, rule = rules.quadratic[key]
        sign = move_to_front_sign(args, i)
        without_i = args[:i] + args[i + 1 :]
        sign *= move_to_front_sign(without_i, j - 1)
        rest = without_i[: j - 1] + without_i[j:]
        insert_sign, new_args = insert_front(rest, out_kind, rule(args[i][1], args[j][1]))
        total += sign * insert_sign * fn(new_args)
    return total


# Dense tensor blocks.


def contract(tensor: np.ndarray, vectors: Sequence[np.ndarray]) -> float:
    """Evaluate a multilinear tensor on vectors (first axis first)."""
    value = np.asarray(tensor, dtype=float)
    for vec in vectors:
        value = np.tensordot(vec, value, axes=([0], [0]))
    return float(value)


def _project(tensor: np.ndarray, axes: Sequence[int], alternating: bool) -> np.ndarray:
    if len(axes) < 2:
        return tensor
    result = np.zeros_like(tensor)
    for perm in itertools.permutations(range(len(axes))):
        order = list(range(tensor.ndim))
        for slot, source in zip(axes, perm):
            order[slot] = axes[source]
        weight = permutation_sign(perm) if alternating else 1
        result += weight * np.transpose(tensor, order)
    return result / math.factorial(len(axes))


def antisymmetrize(tensor: np.ndarray, axes: Sequence[int]) -> np.ndarray:
    return _project(tensor, axes, alternating=True)


def symmetrize(tensor: np.ndarray, axes: Sequence[int]) -> np.ndarray:
    return _project(tensor, axes, alternating=False)


def block_axes(counts: Sequence[int]) -> List[List[int]]:
    """Axis index ranges for consecutive kind blocks of the given sizes."""
    ranges = []
    start = 0
    for count in counts:
        ranges.append(list(range(start, start + count)))
        start += count
    return ranges


def project_block(tensor: np.ndarray, counts: Sequence[int]) -> np.ndarray:
    """Project onto the graded-symmetric part for kinds in storage order."""
    result = np.asarray(tensor, dtype=float)
    for kind, axes in zip(KINDS, block_axes(counts)):
        if PARITY[kind]:
            result = antisymmetrize(result, axes)
        else:
            result = symmetrize(result, axes)
    return result


def basis_tuples(dims: Sequence[int]) -> Iterable[Tuple[int, ...]]:
    return itertools.product(*(range(dim) for dim in dims))


def tabulate(fn: Evaluator, kinds: Sequence[str], dims: Dict[str, int]) -> np.ndarray:
    """Dense tensor of ``fn`` on all basis tuples of the given kinds."""
    shape = tuple(dims[kind] for kind in kinds)
    table = np.zeros(shape)
    eye = {kind: np.eye(dim) for kind, dim in dims.items()}
    for index in basis_tuples(shape):
        args = [(kind, eye[kind][i]) for kind, i in zip(kinds, index)]
        table[index] = fn(args)
    return table


def kinds_of(counts: Sequence[int]) -> List[str]:
    kinds: List[str] = []
    for kind, count in zip(KINDS, counts):
        kinds.extend([kind] * count)
    return kinds


def unshuffles(args: Sequence[Arg], left: Signature) -> Iterable[Tuple[int, Args, Args]]:
    """Splits of ``args`` into ``left``-shaped and remaining parts with Koszul signs."""
    positions: Dict[str, List[int]] = {kind: [] for kind in KINDS}
    for index, (kind, _) in enumerate(args):
        positions[kind].append(index)
    choices = [
        itertools.combinations(positions[kind], left[ORDER[kind]]) for kind in KINDS
    ]
    parities = [PARITY[kind] for kind, _ in args]
    for picked in itertools.product(*choices):
        chosen = sorted(i for group in picked for i in group)
        remaining = [i for i in range(len(args)) if i not in chosen]
        order = chosen + remaining
        odd_swaps = sum(
            1
            for a, b in itertools.combinations(range(len(order)), 2)
            if order[a] > order[b] and parities[order[a]] and parities[order[b]]
        )
        sign = -1 if odd_swaps % 2 else 1
        yield sign, [args[i] for i in chosen], [args[i] for i in remaining]


def tabulate_symmetric(fn: Evaluator, counts: Sequence[int], dims: Dict[str, int]) -> np.ndarray:
    """
    Like :func:`tabulate` for a graded-symmetric ``fn``.

    Only sorted index tuples are evaluated (strictly increasing within odd
    blocks); the rest of the tensor is filled by (anti)symmetry.
    """
    kinds = kinds_of(counts)
    table = np.zeros(tuple(dims[kind] for kind in kinds))
    eye = {kind: np.eye(dim) for kind, dim in dims.items()}
    blocks = [(kind, count) for kind, count in zip(KINDS, counts) if count]
    choices = [
        (itertools.combinations if PARITY[kind] else itertools.combinations_with_replacement)(
            range(dims[kind]), count
        )
        for kind, count in blocks
    ]
    orders = [list(itertools.permutations(range(count))) for _, count in blocks]
    for picked in itertools.product(*choices):
        index = [i for group in picked for i in group]
        value = fn([(kind, eye[kind][i]) for kind, i in zip(kinds, index)])
        for perms in itertools.product(*orders):
            moved: List[int] = []
            sign = 1
            for (kind, _), group, perm in zip(blocks, picked, perms):
                moved.extend(group[j] for j in perm)
                if PARITY[kind]:
                    sign *= permutation_sign(perm)
            table[tuple(moved)] = sign * value
    return table
