"""
Weil algebra W(h -> g0) of a strict Lie 2-algebra.

An element is a dict of dense blocks keyed by ``(k, l, a, b)``, each block a
tensor in ``Λ^k g0* ⊗ S^l h* ⊗ S^a g0* ⊗ Λ^b h*`` (the last two factors are the
d-shifted generators). Block ``(k, l, a, b)`` has bidegree
``(k + 2l + a + 2b, a + b)``.
"""

import logging
import math
from typing import Callable, Dict, Iterator, Optional, Sequence, Tuple

import numpy as np

from .exceptions import AlgebraMismatchError, ShapeMismatchError
from .graded import (
    Args,
    DerivationRules,
    apply_derivation,
    contract,
    kinds_of,
    project_block,
    signature,
    tabulate,
)
from .lie2alg import CECochain, Lie2AlgebraData

logger = logging.getLogger(__name__)

Block = Tuple[int, int, int, int]
Vec = np.ndarray


def delta_rules(
    bracket: Callable[[Vec, Vec], Vec],
    l2: Callable[[Vec, Vec], Vec],
    l1: Callable[[Vec], Vec],
) -> DerivationRules:
    """Generator rules of the Weil differential δ."""
    return DerivationRules(
        quadratic={
            ("x", "x"): ("x", lambda a, b: -bracket(a, b)),
            ("x", "y"): ("y", lambda x, y: -l2(x, y)),
            ("x", "z"): ("z", lambda x, z: -bracket(x, z)),
            ("y", "z"): ("w", lambda y, z: l2(z, y)),
            ("x", "w"): ("w", lambda x, w: -l2(x, w)),
        },
        linear={
            "y": ("x", lambda y: -l1(y)),
            "w": ("z", lambda w: l1(w)),
        },
    )


D_RULES = DerivationRules(
    linear={"z": ("x", lambda z: z), "w": ("y", lambda w: w)},
)


def bidegree(block: Block) -> Tuple[int, int]:
    k, l, a, b = block
    return k + 2 * l + a + 2 * b, a + b


def blocks_of_bidegree(q: int, r: int) -> Iterator[Block]:
    for b in range(r + 1):
        a = r - b
        rest = q - a - 2 * b
        for l in range(max(rest, -1) // 2 + 1):
            k = rest - 2 * l
            if k >= 0:
                yield (k, l, a, b)


class WeilElement:
    """A finite sum of homogeneous Weil blocks over a fixed Lie 2-algebra."""

    def __init__(
        self,
        alg: Lie2AlgebraData,
        blocks: Optional[Dict[Block, np.ndarray]] = None,
        project: bool = True,
    ):
        self.alg = alg
        self.blocks: Dict[Block, np.ndarray] = {}
        for block, tensor in (blocks or {}).items():
            tensor = np.asarray(tensor, dtype=float)
            expected = self.block_shape(block)
            if tensor.shape != expected:
                raise ShapeMismatchError(
                    f"block {block} needs shape {expected}, got {tensor.shape}"
                )
            self.blocks[tuple(block)] = (  # type: ignore[index]
                project_block(tensor, tuple(block) + (0,)) if project else tensor
            )

    def block_shape(self, block: Block) -> Tuple[int, ...]:
        dims = self.alg.dims
        return tuple(dims[kind] for kind in kinds_of(tuple(block) + (0,)))

    def __repr__(self) -> str:
        return f"WeilElement(blocks={sorted(self.blocks)})"

    def _check(self, other: "WeilElement") -> None:
        if other.alg is not self.alg and not self.alg.matches(other.alg):
            raise AlgebraMismatchError("Weil elements live over different Lie 2-algebras")

    def __add__(self, other: "WeilElement") -> "WeilElement":
        self._check(other)
        blocks = dict(self.blocks)
        for block, tensor in other.blocks.items():
            blocks[block] = blocks[block] + tensor if block in blocks else tensor
        return WeilElement(self.alg, blocks, project=False)

    def __neg__(self) -> "WeilElement":
        return self.scale(-1.0)

    def __sub__(self, other: "WeilElement") -> "WeilElement":
        return self + (-other)

    def scale(self, factor: float) -> "WeilElement":
        return WeilElement(
            self.alg, {b: factor * t for b, t in self.blocks.items()}, project=False
        )

    def component(self, block: Block) -> np.ndarray:
        if block in self.blocks:
            return self.blocks[block]
        return np.zeros(self.block_shape(block))

    def max_abs(self) -> float:
        return max((float(np.max(np.abs(t))) for t in self.blocks.values() if t.size), default=0.0)

    def evaluate(self, args: Args) -> float:
        sig = signature(args)
        if sig[4]:
            return 0.0
        tensor = self.blocks.get(sig[:4])  # type: ignore[arg-type]
        if tensor is None:
            return 0.0
        return contract(tensor, [vec for _, vec in args])

    @classmethod
    def zero(cls, alg: Lie2AlgebraData) -> "WeilElement":
        return cls(alg)

    @classmethod
    def unit(cls, alg: Lie2AlgebraData) -> "WeilElement":
        return cls(alg, {(0, 0, 0, 0): np.array(1.0)})

    @classmethod
    def generator(cls, alg: Lie2AlgebraData, kind: str, index: int) -> "WeilElement":
        """Dual basis generator: ``x`` is α^i, ``y`` is β^i, ``z`` and ``w`` their shifts."""
        block = {"x": (1, 0, 0, 0), "y": (0, 1, 0, 0), "z": (0, 0, 1, 0), "w": (0, 0, 0, 1)}[kind]
        tensor = np.zeros(alg.dims[kind])
        tensor[index] = 1.0
        return cls(alg, {block: tensor})  # type: ignore[dict-item]

    @classmethod
    def from_ce(cls, cochain: CECochain, alg: Lie2AlgebraData) -> "WeilElement":
        return cls(alg, {(cochain.k, cochain.l, 0, 0): cochain.coeffs})

    @classmethod
    def random(
        cls, alg: Lie2AlgebraData, blocks: Sequence[Block], rng: np.random.Generator
    ) -> "WeilElement":
        element = cls(alg)
        return cls(
            alg, {block: rng.standard_normal(element.block_shape(block)) for block in blocks}
        )


def _apply(w: WeilElement, rules: DerivationRules) -> WeilElement:
    targets = set()
    for block in w.blocks:
        targets |= rules.source_signatures(tuple(block) + (0,))  # type: ignore[arg-type]
    dims = dict(w.alg.dims, v=1)
    blocks = {}
    for sig in sorted(targets):
        if min(sig) < 0 or sig[4]:
            continue
        table = tabulate(
            lambda args: apply_derivation(w.evaluate, args, rules), kinds_of(sig), dims
        )
        blocks[sig[:4]] = table
    return WeilElement(w.alg, blocks, project=False)


def weil_d(w: WeilElement) -> WeilElement:
    """The de Rham differential: α ↦ α̇, β ↦ β̇, shifted generators ↦ 0."""
    return _apply(w, D_RULES)


def weil_delta(w: WeilElement) -> WeilElement:
    """The Lie derivative along the Chevalley-Eilenberg vector field."""
    alg = w.alg
    return _apply(w, delta_rules(alg.bracket, alg.l2, alg.apply_l1))


def _juxtapose_sign(left: Block, right: Block) -> int:
    # right x letters pass the left w letters
    return -1 if (right[0] * left[3]) % 2 else 1


def weil_product(u: WeilElement, v: WeilElement) -> WeilElement:
    """Graded-commutative product."""
    u._check(v)
    result = WeilElement(u.alg)
    for bu, tu in u.blocks.items():
        for bv, tv in v.blocks.items():
            block = tuple(p + q for p, q in zip(bu, bv))
            outer = np.multiply.outer(tu, tv)
            order = []
            offset_u, offset_v = 0, sum(bu)
            for cu, cv in zip(bu, bv):
                order.extend(range(offset_u, offset_u + cu))
                order.extend(range(offset_v, offset_v + cv))
                offset_u += cu
                offset_v += cv
            weight = _juxtapose_sign(bu, bv)
            for cu, cv in zip(bu, bv):
                weight *= math.comb(cu + cv, cu)
            tensor = weight * project_block(np.transpose(outer, order), block + (0,))
            blocks = {block: tensor}
            result = result + WeilElement(u.alg, blocks, project=False)  # type: ignore[arg-type]
    return result


def leibniz_residual(
    derivation: Callable[[WeilElement], WeilElement], u: WeilElement, v: WeilElement
) -> float:
    """``D(uv) - D(u)v - (-1)^|u| u D(v)`` for homogeneous ``u``."""
    degrees = {sum(bidegree(block)) % 2 for block in u.blocks}
    if len(degrees) > 1:
        raise ShapeMismatchError("Leibniz residual needs a homogeneous left factor")
    parity = degrees.pop() if degrees else 0
    lhs = derivation(weil_product(u, v))
    rhs = weil_product(derivation(u), v) + weil_product(u, derivation(v)).scale((-1) ** parity)
    return (lhs - rhs).max_abs()
