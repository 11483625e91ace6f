"""
The simplicial strict Lie 2-algebroid ``H_• -> A_•`` over ``W_•G``.

``A_p ≅ W_pG × g_{p+1}`` through the right-invariant frame
``ξ ↦ ξ · top ε_p(γ⃗)`` and ``H_p ≅ W_pG × h``. In these frames every A-face
is the constant map ``∂̂_{i+1}``, every H-face is the identity and the base
faces are those of ``W_•G``.

Elements of the double complex are evaluators on a base point of ``W_pG`` and
typed fiber arguments (see :mod:`lie2vanest.graded`). Function-level elements
take ``x`` (in ``g_{p+1}``) and ``y`` (in ``h``) arguments; form-level elements
also take the shifted ``z``, ``w`` and base tangents ``v``.
"""

import logging
from typing import Callable, Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Union

import numpy as np

from .exceptions import LevelError, ShapeMismatchError
from .forms import flatten, random_tangent
from .graded import (
    Args,
    DerivationRules,
    Signature,
    apply_derivation,
    check_ordered,
    contract,
    kinds_of,
    move_to_front_sign,
    project_block,
    signature,
    tabulate_symmetric,
)
from .levelalg import LevelAlgebra
from .lie2alg import CECochain, Lie2AlgebraData, LieAlgebraData
from .numcore import NESTED_STEP, curve_derivative, push_forward, tree_scale, tree_zeros
from .simplicial import Stack, StrictLie2Group
from .weil import WeilElement, delta_rules

logger = logging.getLogger(__name__)

DCFn = Callable[[Stack, Args], float]
FIBER_KINDS = ("x", "z")


class AFiber(NamedTuple):
    """A point of ``A_p``: a base point and its frame coordinates in ``g_{p+1}``."""

    base: Stack
    vec: np.ndarray


class HFiber(NamedTuple):
    """A point of ``H_p``: a base point and a vector of ``h``."""

    base: Stack
    vec: np.ndarray


class DCElement:
    """
    An element of ``C^{p,•}``.

    ``blocks`` lists the argument signatures ``(k, l, a, b, s)`` on which the
    evaluator may be non-zero; on any other signature the element vanishes.
    """

    def __init__(self, level: int, blocks: Iterable[Signature], fn: DCFn, name: str = ""):
        self.level = level
        self.blocks: FrozenSet[Signature] = frozenset(  # type: ignore[misc]
            tuple(b) for b in blocks
        )
        self._validate_blocks()
        self.fn = fn
        self.name = name

    def _validate_blocks(self) -> None:
        for block in self.blocks:
            if any(block[2:]):
                raise ShapeMismatchError(
                    f"{type(self).__name__} takes only x and y arguments, got block {block}"
                )

    def __repr__(self) -> str:
        name = self.name or "e"
        return f"{type(self).__name__}({name}, level={self.level}, blocks={sorted(self.blocks)})"

    def __call__(self, base: Stack, args: Args) -> float:
        check_ordered(args)
        if signature(args) not in self.blocks:
            return 0.0
        return float(self.fn(base, list(args)))

    def _like(self, level: int, blocks: Iterable[Signature], fn: DCFn, name: str) -> "DCElement":
        return type(self)(level, blocks, fn, name)

    def __add__(self, other: "DCElement") -> "DCElement":
        if self.level != other.level:
            raise ShapeMismatchError(f"cannot add levels {self.level} and {other.level}")
        owner = other if isinstance(other, FormDCElement) else self
        return owner._like(
            self.level,
            self.blocks | other.blocks,
            lambda base, args: self(base, args) + other(base, args),
            f"{self.name}+{other.name}",
        )

    def __sub__(self, other: "DCElement") -> "DCElement":
        return self + other.scale(-1.0)

    def scale(self, factor: float) -> "DCElement":
        return self._like(
            self.level, self.blocks, lambda base, args: factor * self(base, args), self.name
        )


class FormDCElement(DCElement):
    """A form-level element: Weil blocks of the fibers tensored with base forms."""

    def _validate_blocks(self) -> None:
        for block in self.blocks:
            if len(block) != 5 or min(block) < 0:
                raise ShapeMismatchError(f"invalid block {block}")


def _transport(args: Args, fn: Callable[[Stack], Stack], base: Stack) -> Args:
    """Push the tangent arguments through a base map."""
    return [
        (kind, push_forward(fn, base, vec)[1]) if kind == "v" else (kind, vec)
        for kind, vec in args
    ]


class Lie2Algebroid:
    """Structure maps and the double complex of ``H_• -> A_•``."""

    def __init__(self, group: StrictLie2Group, step: float = NESTED_STEP):
        self.group = group
        self.cm = group.cm
        self.levels = LevelAlgebra(group.cm)
        self.alg: Lie2AlgebraData = self.levels.alg
        self.step = step

    def fiber_dims(self, p: int) -> Dict[str, int]:
        n = self.levels.dim(p + 1)
        return {"x": n, "y": self.levels.n1, "z": n, "w": self.levels.n1}

    # base

    def sample_base(self, p: int, rng: np.random.Generator) -> Stack:
        return self.group.sample_w(p, rng)

    def unit_base(self, p: int) -> Stack:
        return self.group.WbarG.unit(p + 1)

    def base_face(self, p: int, i: int, stack: Stack) -> Stack:
        return self.group.WG.face(p, i, stack)

    # faces

    def a_face_vec(self, p: int, i: int, vec: np.ndarray) -> np.ndarray:
        if p == 0 or not 0 <= i <= p:
            raise LevelError(f"A-face {i} undefined at level {p}")
        return self.levels.face(p + 1, i + 1, vec)

    def a_face(self, i: int, fiber: AFiber) -> AFiber:
        p = len(fiber.base) - 1
        return AFiber(self.base_face(p, i, fiber.base), self.a_face_vec(p, i, fiber.vec))

    def h_face(self, i: int, fiber: HFiber) -> HFiber:
        p = len(fiber.base) - 1
        if p == 0 or not 0 <= i <= p:
            raise LevelError(f"H-face {i} undefined at level {p}")
        return HFiber(self.base_face(p, i, fiber.base), fiber.vec)

    def fiber_tangent(self, fiber: AFiber) -> Stack:
        """The tangent ``ξ · top ε_p(γ⃗)`` to ``W_p(dec G)`` at ``ε_p(γ⃗)``."""
        p = len(fiber.base) - 1
        eps = self.group.epsilon(fiber.base)
        top = self.levels.right_translate(p + 1, fiber.vec, eps[0])
        return (top,) + tuple(tree_zeros(slot) for slot in eps[1:])

    def a_face_literal(self, i: int, fiber: AFiber) -> AFiber:
        """
        The face of ``A_•`` computed from its definition: the tangent face of
        ``W(dec G)`` applied at ``ε_p(γ⃗)``, translated back to the identity.
        """
        p = len(fiber.base) - 1
        if p == 0 or not 0 <= i <= p:
            raise LevelError(f"A-face {i} undefined at level {p}")
        eps = self.group.epsilon(fiber.base)
        image, tangent = push_forward(
            lambda s: self.group.WDecG.face(p, i, s), eps, self.fiber_tangent(fiber)
        )
        vec = self.levels.right_coords(image[0], tangent[0])
        return AFiber(self.base_face(p, i, fiber.base), vec)

    # anchor and brackets

    def anchor_flow(self, p: int, vec: np.ndarray, stack: Stack, t: float) -> Stack:
        """Flow of ``ρ(ξ)``: the top slot is multiplied by ``exp(-t ∂̂_0 ξ)``."""
        k = self.levels.exp(p, self.levels.face(p + 1, 0, vec), -t)
        return (self.cm.level_mult(k, stack[0]),) + tuple(stack[1:])

    def anchor(self, p: int, vec: np.ndarray, stack: Stack) -> Stack:
        generator = self.levels.face(p + 1, 0, vec)
        top = self.levels.right_translate(p, -generator, stack[0])
        return (top,) + tuple(tree_zeros(slot) for slot in stack[1:])

    def fiber_rules(self, p: int, base: Optional[Stack] = None) -> DerivationRules:
        """
        Generator rules of δ on the fibers over level ``p``.

        With a base point, ``z`` arguments also contract the base form with
        ``-ρ(z)``.
        """
        levels, n = self.levels, p + 1
        rules = delta_rules(
            lambda a, b: levels.bracket(n, a, b),
            lambda a, y: self.alg.l2(levels.pi(n, a), y),
            lambda y: levels.j(n, y),
        )
        if base is None:
            return rules
        linear = dict(rules.linear)
        linear["z"] = ("v", lambda z: tree_scale(self.anchor(p, z, base), -1.0))
        return DerivationRules(rules.quadratic, linear)

    # the double complex

    def horizontal_partial(self, e: DCElement) -> DCElement:
        """``∂e = Σ_i (-1)^i ∂_i* e``, one level up."""
        p = e.level + 1
        self.group.check_level(p)

        def evaluate(base: Stack, args: Args) -> float:
            total = 0.0
            for i in range(p + 1):
                face = lambda s, i=i: self.base_face(p, i, s)  # noqa: E731
                moved: Args = []
                for kind, vec in args:
                    if kind in FIBER_KINDS:
                        moved.append((kind, self.a_face_vec(p, i, vec)))
                    elif kind == "v":
                        moved.append((kind, push_forward(face, base, vec)[1]))
                    else:
                        moved.append((kind, vec))
                total += (-1) ** i * e(face(base), moved)
            return total

        return e._like(p, e.blocks, evaluate, f"∂({e.name})")

    def _delta_blocks(self, e: DCElement) -> List[Signature]:
        rules = self.fiber_rules(e.level, self.unit_base(e.level))
        targets = set()
        for block in e.blocks:
            targets |= rules.source_signatures(block)
            targets.add((block[0] + 1,) + tuple(block[1:]))  # type: ignore[arg-type]
        return sorted(t for t in targets if min(t) >= 0)

    def ce_delta(self, e: DCElement) -> DCElement:
        """
        The CE differential of ``H_p -> A_p`` in the right-invariant frame.

        Each ``x`` argument differentiates along its anchor flow (tangent
        arguments transported by the flow); the constant-frame brackets come
        from ``g_{p+1}``.
        """
        p = e.level
        form = isinstance(e, FormDCElement)

        def along(vec: np.ndarray, base: Stack, rest: Args, t: float) -> float:
            flow = lambda s: self.anchor_flow(p, vec, s, t)  # noqa: E731
            return e(flow(base), _transport(rest, flow, base))

        def evaluate(base: Stack, args: Args) -> float:
            rules = self.fiber_rules(p, base if form else None)
            total = apply_derivation(lambda a: e(base, a), args, rules)
            for index, (kind, vec) in enumerate(args):
                if kind != "x":
                    continue
                rest = args[:index] + args[index + 1 :]
                total += move_to_front_sign(args, index) * curve_derivative(
                    lambda t, vec=vec, rest=rest: along(vec, base, rest, t), step=self.step
                )
            return total

        return e._like(p, self._delta_blocks(e), evaluate, f"δ({e.name})")

    def vertical_delta(self, e: DCElement) -> DCElement:
        """δ with the column sign ``(-1)^p``."""
        return self.ce_delta(e).scale((-1) ** e.level)

    # projections and inclusions

    def pi_star(self, p: int, element: Union[WeilElement, CECochain]) -> DCElement:
        """Pullback along ``π_p``: fibers map by ``g_{p+1} -> g0``, ``h`` by the identity."""
        if isinstance(element, CECochain):
            element = WeilElement.from_ce(element, self.alg)
        weil = element
        blocks = [tuple(block) + (0,) for block in weil.blocks]
        shifted = any(block[2] or block[3] for block in weil.blocks)
        cls = FormDCElement if shifted else DCElement

        def evaluate(base: Stack, args: Args) -> float:
            return weil.evaluate(
                [
                    (kind, self.levels.pi(p + 1, vec)) if kind in FIBER_KINDS else (kind, vec)
                    for kind, vec in args
                ]
            )

        return cls(p, blocks, evaluate, "π*")  # type: ignore[arg-type]

    def iota_star(self, e: DCElement) -> WeilElement:
        """Restriction to the unit with fibers ``x ↦ (0, ..., 0; x)``."""
        p = e.level
        unit = self.unit_base(p)

        def evaluate(args: Args) -> float:
            return e(
                unit,
                [
                    (kind, self.levels.iota(p + 1, vec)) if kind in FIBER_KINDS else (kind, vec)
                    for kind, vec in args
                ],
            )

        blocks = {
            block[:4]: tabulate_symmetric(evaluate, block, self.alg.dims)
            for block in sorted(e.blocks)
            if not block[4]
        }
        return WeilElement(self.alg, blocks, project=False)  # type: ignore[arg-type]

    def recovered_structure(self) -> Lie2AlgebraData:
        """The brackets of ``h -> g0`` read off ``ι_0* δ π_0*`` on dual generators."""
        n0, n1 = self.levels.n0, self.levels.n1
        c = np.zeros((n0, n0, n0))
        l1 = np.zeros((n0, n1))
        l2_gh = np.zeros((n0, n1, n1))
        for k in range(n0):
            generator = WeilElement.generator(self.alg, "x", k)
            image = self.iota_star(self.ce_delta(self.pi_star(0, generator)))
            c[:, :, k] = -image.component((2, 0, 0, 0))
            l1[k, :] = -image.component((0, 1, 0, 0))
        for k in range(n1):
            generator = WeilElement.generator(self.alg, "y", k)
            image = self.iota_star(self.ce_delta(self.pi_star(0, generator)))
            l2_gh[:, k, :] = -image.component((1, 1, 0, 0))
        logger.debug(f"Recovered Lie 2-structure of {self.cm}")
        return Lie2AlgebraData(LieAlgebraData(c), n1, l1, l2_gh)


def random_dc_element(
    algebroid: Lie2Algebroid, level: int, block: Signature, rng: np.random.Generator
) -> DCElement:
    """
    A random element with base dependence: a random Weil tensor on the frame
    coordinates times a smooth function of the base point. Tangent slots
    enter as ``det[dψ_k(v_j)]`` for a random quadratic ``ψ`` on the base.
    """
    dims = algebroid.fiber_dims(level)
    fiber_block = tuple(block[:4]) + (0,)
    kinds = kinds_of(fiber_block)
    tensor = project_block(rng.standard_normal(tuple(dims[k] for k in kinds)), fiber_block)
    weights = [rng.standard_normal(3) for _ in range(level + 1)]
    unit = flatten(algebroid.unit_base(level))
    psi_linear = rng.standard_normal((block[4], unit.size))
    psi_square = 0.5 * rng.standard_normal((block[4], unit.size))

    def base_factor(stack: Stack) -> float:
        value = 1.0
        for slot, (a, b, c) in zip(stack, weights):
            trace = float(np.trace(slot.g)) + sum(float(np.trace(h)) for h in slot.hs)
            value *= a + b * np.sin(trace) + c * np.cos(0.5 * trace)
        return value

    def tangent_factor(stack: Stack, tangents: List[Stack]) -> float:
        if not tangents:
            return 1.0
        u = flatten(stack) - unit
        rows = [
            psi_linear @ flatten(v) + 2.0 * (psi_square @ u) * (psi_square @ flatten(v))
            for v in tangents
        ]
        return float(np.linalg.det(np.stack(rows, axis=1)))

    def evaluate(base: Stack, args: Args) -> float:
        fibers = [vec for kind, vec in args if kind != "v"]
        tangents = [vec for kind, vec in args if kind == "v"]
        return base_factor(base) * tangent_factor(base, tangents) * contract(tensor, fibers)

    cls = FormDCElement if block[2] or block[3] or block[4] else DCElement
    return cls(level, [block], evaluate, "random")


def random_args(
    algebroid: Lie2Algebroid,
    level: int,
    block: Signature,
    rng: np.random.Generator,
    base: Optional[Stack] = None,
) -> Args:
    """
    Random arguments of one signature; tangent arguments need the base point.

    Raises:
        ShapeMismatchError: if the signature has tangent slots and no base is given
    """
    if block[4] and base is None:
        raise ShapeMismatchError("random tangent arguments need a base point")
    dims = algebroid.fiber_dims(level)
    args: Args = []
    for kind in kinds_of(block):
        if kind == "v":
            args.append((kind, random_tangent(algebroid.cm, base, rng)))  # type: ignore[arg-type]
        else:
            args.append((kind, rng.standard_normal(dims[kind])))
    return args
