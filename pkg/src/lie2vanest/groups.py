"""
Matrix Lie groups with an exponential chart.

Each group is described by a basis of its Lie algebra inside ``gl(n)``; the
exponential is ``scipy.linalg.expm`` and coordinates of algebra elements are
read back with the pseudo-inverse of the basis.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import expm

from .exceptions import ConfigError, ShapeMismatchError
from .lie2alg import LieAlgebraData
from .numcore import as_mat

logger = logging.getLogger(__name__)

SAMPLE_SCALE = 0.3


def _orthogonality_residual(mat: np.ndarray) -> float:
    eye = np.eye(mat.shape[0])
    return max(
        float(np.max(np.abs(mat.T @ mat - eye))), abs(float(np.linalg.det(mat)) - 1.0)
    )


def _unitriangular_residual(mat: np.ndarray) -> float:
    lower = np.tril(mat, -1)
    return max(float(np.max(np.abs(lower), initial=0.0)), float(np.max(np.abs(np.diag(mat) - 1.0))))


def _diagonal_residual(mat: np.ndarray) -> float:
    off = mat - np.diag(np.diag(mat))
    return float(np.max(np.abs(off), initial=0.0))


@dataclass(frozen=True, eq=False)
class MatrixGroupSpec:
    """
    A connected matrix Lie group.

    Attributes:
        name: Registry name
        basis: Basis of the Lie algebra as ambient matrices
        relation: Residual of the defining relations at a matrix, if known
    """

    name: str
    basis: Tuple[np.ndarray, ...]
    relation: Optional[Callable[[np.ndarray], float]] = None
    sample_scale: float = SAMPLE_SCALE
    _coords: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.basis:
            raise ShapeMismatchError(f"group {self.name} needs a non-empty basis")
        basis = tuple(as_mat(b) for b in self.basis)
        size = basis[0].shape
        if any(b.shape != size or size[0] != size[1] for b in basis):
            raise ShapeMismatchError(f"basis of {self.name} must be square matrices of one size")
        flat = np.stack([b.ravel() for b in basis], axis=1)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "_coords", np.linalg.pinv(flat))

    @property
    def size(self) -> int:
        return int(self.basis[0].shape[0])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def identity(self) -> np.ndarray:
        return np.eye(self.size)

    def hat(self, xi: Sequence[float]) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        if xi.shape != (self.dim,):
            raise ShapeMismatchError(f"{self.name} algebra vectors have {self.dim} entries")
        return np.tensordot(xi, np.stack(self.basis), axes=([0], [0]))

    def coords(self, mat: np.ndarray) -> np.ndarray:
        """Coordinates of an algebra matrix in the basis."""
        return self._coords @ np.asarray(mat, dtype=float).ravel()

    def exp(self, xi: Sequence[float]) -> np.ndarray:
        return expm(self.hat(xi))

    def multiply(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return a @ b

    def inverse(self, a: np.ndarray) -> np.ndarray:
        return np.linalg.inv(a)

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        return self.exp(self.sample_scale * rng.standard_normal(self.dim))

    def relation_residual(self, mat: np.ndarray) -> float:
        return self.relation(mat) if self.relation is not None else 0.0

    def lie_algebra(self) -> LieAlgebraData:
        return LieAlgebraData.from_matrices(self.basis)


def _elementary(n: int, i: int, j: int) -> np.ndarray:
    mat = np.zeros((n, n))
    mat[i, j] = 1.0
    return mat


def so3() -> MatrixGroupSpec:
    basis = (
        _elementary(3, 2, 1) - _elementary(3, 1, 2),
        _elementary(3, 0, 2) - _elementary(3, 2, 0),
        _elementary(3, 1, 0) - _elementary(3, 0, 1),
    )
    return MatrixGroupSpec("so3", basis, _orthogonality_residual)


def su2() -> MatrixGroupSpec:
    """SU(2) as unit quaternions acting on R^4 by left multiplication."""
    unit_i = np.array([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]], dtype=float)
    unit_j = np.array([[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]], dtype=float)
    unit_k = np.array([[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]], dtype=float)
    return MatrixGroupSpec("su2", (unit_i / 2, unit_j / 2, unit_k / 2), _orthogonality_residual)


def heis3() -> MatrixGroupSpec:
    basis = (_elementary(3, 0, 1), _elementary(3, 1, 2), _elementary(3, 0, 2))
    return MatrixGroupSpec("heis3", basis, _unitriangular_residual)


def rn(n: int = 1) -> MatrixGroupSpec:
    """(R^n, +) realized as positive diagonal matrices."""
    if n < 1:
        raise ConfigError("rn needs a positive dimension")
    basis = tuple(_elementary(n, i, i) for i in range(n))
    return MatrixGroupSpec(f"rn{n}", basis, _diagonal_residual)


def vector_group(n: int) -> MatrixGroupSpec:
    """(R^n, +) as unipotent matrices ``[[I, v], [0, 1]]``."""
    if n < 1:
        raise ConfigError("vector group needs a positive dimension")
    basis = tuple(_elementary(n + 1, i, n) for i in range(n))

    def residual(mat: np.ndarray) -> float:
        target = np.eye(n + 1)
        target[:n, n] = mat[:n, n]
        return float(np.max(np.abs(mat - target)))

    return MatrixGroupSpec(f"vec{n}", basis, residual)


GROUPS: Dict[str, Callable[[], MatrixGroupSpec]] = {
    "so3": so3,
    "su2": su2,
    "heis3": heis3,
}


def group_by_name(name: str, dim: Optional[int] = None) -> MatrixGroupSpec:
    if name == "rn":
        return rn(dim or 1)
    if name not in GROUPS:
        raise ConfigError(f"unknown group {name!r}; choose from {sorted(GROUPS) + ['rn']}")
    return GROUPS[name]()
