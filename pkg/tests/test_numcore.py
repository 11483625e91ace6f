"""
Tests for the numerical core: matrices, exact tangents, curve derivatives and
block permutation signs.
"""

import math

import numpy as np
import pytest

from lie2vanest.exceptions import CapacityError, NumericalError, ShapeMismatchError
from lie2vanest.numcore import (
    BlockPermutation,
    TangentAt,
    as_mat,
    block_permutations,
    block_sign,
    curve_derivative,
    factorize,
    mat_inv,
    push_forward,
    tangent_of_inverse,
    tangent_of_product,
    tree_residual,
)


class TestMatrices:
    """Test matrix construction and validation."""

    def test_as_mat_accepts_nested_lists(self):
        """Test that a nested list becomes a float matrix."""
        mat = as_mat([[1, 2], [3, 4]])

        assert mat.dtype == float
        assert mat.shape == (2, 2)

    @pytest.mark.parametrize("entries", [[], [[]], [1.0, 2.0]])
    def test_as_mat_rejects_empty_or_flat(self, entries):
        """Test that empty and one-dimensional input is rejected."""
        with pytest.raises(ShapeMismatchError):
            as_mat(entries)

    def test_as_mat_rejects_non_finite(self):
        """Test that NaN and infinite entries are rejected."""
        with pytest.raises(NumericalError):
            as_mat([[1.0, float("nan")]])
        with pytest.raises(NumericalError):
            as_mat([[float("inf")]])


class TestTangentAt:
    """Test exact first-order tangent arithmetic."""

    def test_shape_mismatch(self):
        """Test that base and direction must have one shape."""
        with pytest.raises(ShapeMismatchError):
            TangentAt(np.eye(2), np.zeros((3, 3)))

    def test_product_of_zero_tangents(self):
        """Test (I, 0)(I, 0) = (I, 0)."""
        eye = np.eye(3)
        result = tangent_of_product(TangentAt(eye, 0 * eye), TangentAt(eye, 0 * eye))

        assert np.allclose(result.base, eye)
        assert np.allclose(result.dir, 0.0)

    def test_product_rule_at_identity(self, rng):
        """Test (I, X)(I, Y) = (I, X + Y)."""
        eye = np.eye(3)
        X, Y = rng.standard_normal((3, 3)), rng.standard_normal((3, 3))
        result = tangent_of_product(TangentAt(eye, X), TangentAt(eye, Y))

        assert np.allclose(result.base, eye)
        assert np.allclose(result.dir, X + Y)

    def test_product_matches_finite_difference(self, rng):
        """Test the exact product tangent against a central difference."""
        A = TangentAt(rng.standard_normal((3, 3)), rng.standard_normal((3, 3)))
        B = TangentAt(rng.standard_normal((3, 3)), rng.standard_normal((3, 3)))
        numerical = curve_derivative(
            lambda t: (A.base + t * A.dir) @ (B.base + t * B.dir)
        )

        assert np.max(np.abs(tangent_of_product(A, B).dir - numerical)) < 1e-7

    def test_product_shape_check(self):
        """Test that incompatible factors are rejected."""
        with pytest.raises(ShapeMismatchError):
            tangent_of_product(
                TangentAt(np.eye(2), np.zeros((2, 2))), TangentAt(np.eye(3), np.zeros((3, 3)))
            )

    def test_inverse_matches_finite_difference(self, rng):
        """Test the exact inverse tangent against a central difference."""
        base = np.eye(3) + 0.1 * rng.standard_normal((3, 3))
        direction = rng.standard_normal((3, 3))
        numerical = curve_derivative(lambda t: np.linalg.inv(base + t * direction))

        exact = tangent_of_inverse(TangentAt(base, direction))
        assert np.max(np.abs(exact.dir - numerical)) < 1e-6
        assert np.allclose(exact.base, np.linalg.inv(base))

    def test_mat_inv_dispatch(self):
        """Test that mat_inv handles plain matrices and tangents."""
        mat = np.diag([2.0, 4.0])

        assert np.allclose(mat_inv(mat), np.diag([0.5, 0.25]))
        assert isinstance(mat_inv(TangentAt(mat, np.zeros((2, 2)))), TangentAt)

    def test_push_forward_of_square(self, rng):
        """Test push_forward on the map X -> X @ X."""
        X, V = rng.standard_normal((3, 3)), rng.standard_normal((3, 3))
        value, tangent = push_forward(lambda s: s @ s, X, V)

        assert np.allclose(value, X @ X)
        assert np.allclose(tangent, X @ V + V @ X)

    def test_push_forward_on_trees(self, rng):
        """Test push_forward through a tuple of matrices."""
        X, Y = rng.standard_normal((2, 2)), rng.standard_normal((2, 2))
        U, V = rng.standard_normal((2, 2)), rng.standard_normal((2, 2))
        value, tangent = push_forward(lambda s: (s[0] @ s[1],), (X, Y), (U, V))

        assert tree_residual(value, (X @ Y,)) < 1e-12
        assert tree_residual(tangent, (U @ Y + X @ V,)) < 1e-12


class TestCurveDerivative:
    """Test the Richardson-extrapolated central difference."""

    def test_constant(self):
        """Test that a constant curve has zero derivative."""
        assert curve_derivative(lambda t: 7.0, t0=1.3) == 0.0

    def test_even_function_at_zero(self):
        """Test f(t) = t^2 at t0 = 0."""
        assert abs(curve_derivative(lambda t: t * t)) < 1e-14

    def test_exponential(self):
        """Test f(t) = exp(3t) at 0 against the analytic value."""
        assert abs(curve_derivative(lambda t: math.exp(3 * t)) - 3.0) < 1e-7

    def test_array_valued(self):
        """Test that array-valued curves differentiate entrywise."""
        value = curve_derivative(lambda t: np.array([math.sin(t), math.cos(t)]))

        assert value.shape == (2,)
        assert abs(value[0] - 1.0) < 1e-8
        assert abs(value[1]) < 1e-8

    def test_non_finite(self):
        """Test that a blow-up is reported as a numerical error."""
        with pytest.raises(NumericalError):
            curve_derivative(lambda t: float("inf"))


class TestBlockSigns:
    """Test block permutations and their bigraded Koszul signs."""

    def test_identity_has_sign_plus_one(self):
        """Test the identity for several block sizes."""
        for sizes in [(1, 0, 0, 0), (2, 1, 0, 0), (1, 1, 1, 1), (0, 0, 2, 2)]:
            assert block_sign(BlockPermutation.identity(sizes)) == 1

    @pytest.mark.parametrize(
        "sizes,expected",
        [
            ((2, 0, 0, 0), -1),
            ((0, 2, 0, 0), 1),
            ((0, 0, 2, 0), 1),
            ((0, 0, 0, 2), -1),
            ((1, 1, 0, 0), 1),
            ((1, 0, 1, 0), -1),
            ((0, 0, 1, 1), -1),
        ],
    )
    def test_single_swap(self, sizes, expected):
        """Test the swap of a two-letter word."""
        assert block_sign(BlockPermutation(sizes, (1, 0))) == expected

    def test_factorization(self):
        """Test that a mixed permutation splits into block orders and a shuffle."""
        bp = BlockPermutation((2, 1, 0, 0), (2, 1, 0))
        factors = factorize(bp)

        assert factors.blocks["x"] == (1, 0)
        assert factors.blocks["y"] == (0,)
        assert factors.shuffle == ("y", "x", "x")

    def test_invalid_permutation(self):
        """Test that a non-bijection is rejected."""
        with pytest.raises(ShapeMismatchError):
            BlockPermutation((2, 0, 0, 0), (0, 0))

    def test_compose_with_inverse(self):
        """Test that a transposition composed with itself is the identity."""
        swap = BlockPermutation((2, 0, 0, 0), (1, 0))

        assert swap.compose(swap) == BlockPermutation.identity((2, 0, 0, 0))

    def test_enumeration_count(self):
        """Test that every permutation of the word is produced once."""
        perms = list(block_permutations((2, 1, 0, 0)))

        assert len(perms) == 6
        assert len({bp.perm for bp, _ in perms}) == 6
        assert all(sign in (1, -1) for _, sign in perms)

    def test_antisymmetric_block_sums_to_zero(self):
        """Test that the signs of a pure x word cancel."""
        assert sum(sign for _, sign in block_permutations((3, 0, 0, 0))) == 0

    def test_capacity(self):
        """Test that words longer than six letters are refused."""
        with pytest.raises(CapacityError):
            list(block_permutations((4, 3, 0, 0)))
