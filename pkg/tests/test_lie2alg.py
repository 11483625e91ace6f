"""
Tests for Lie algebras, crossed modules of Lie algebras, strict Lie
2-algebras and the Chevalley-Eilenberg differential.
"""

import numpy as np
import pytest

from lie2vanest.exceptions import ShapeMismatchError
from lie2vanest.groups import so3
from lie2vanest.lie2alg import (
    CECochain,
    CrossedModuleAlgData,
    Lie2AlgebraData,
    LieAlgebraData,
    ce_differential,
    ce_square_check,
    check_crossed_module,
    to_lie2,
)


@pytest.fixture
def so3_alg():
    """so(3) from its matrix basis."""
    return so3().lie_algebra()


class TestLieAlgebraData:
    """Test structure constants."""

    def test_so3_bracket(self, so3_alg):
        """Test [e1, e2] = e3 for the standard basis."""
        e = np.eye(3)

        assert np.allclose(so3_alg.bracket(e[0], e[1]), e[2])
        assert np.allclose(so3_alg.bracket(e[1], e[0]), -e[2])

    def test_antisymmetrized_on_construction(self, rng):
        """Test that constants are antisymmetric in the first two indices."""
        alg = LieAlgebraData(rng.standard_normal((3, 3, 3)))

        assert np.allclose(alg.c, -alg.c.transpose(1, 0, 2))

    def test_jacobi(self, so3_alg):
        """Test the Jacobi identity of so(3)."""
        assert so3_alg.jacobi_residual() <= 1e-12

    def test_ad_matches_bracket(self, so3_alg, rng):
        """Test that ad(u) v = [u, v]."""
        u, v = rng.standard_normal(3), rng.standard_normal(3)

        assert np.allclose(so3_alg.ad(u) @ v, so3_alg.bracket(u, v))

    def test_shape_validation(self):
        """Test that non-cubic constants are rejected."""
        with pytest.raises(ShapeMismatchError):
            LieAlgebraData(np.zeros((2, 2, 3)))

    def test_basis_must_close(self):
        """Test that a basis that is not a subalgebra is rejected."""
        upper = np.array([[0.0, 1.0], [0.0, 0.0]])
        with pytest.raises(ShapeMismatchError):
            LieAlgebraData.from_matrices([upper, upper.T])


class TestCrossedModuleAlgebra:
    """Test the crossed-module axioms."""

    def test_coadjoint_axioms(self, so3_alg):
        """Test (g, g*, 0, ad*)."""
        report = check_crossed_module(CrossedModuleAlgData.coadjoint(so3_alg))

        assert report.passed
        assert report.max_residual <= 1e-12

    def test_tangent_axioms(self, so3_alg):
        """Test (g, g, id, ad)."""
        report = check_crossed_module(CrossedModuleAlgData.tangent(so3_alg))

        assert report.passed
        assert set(report.residuals) == {
            "jacobi_g",
            "jacobi_h",
            "dmap_homomorphism",
            "rho_homomorphism",
            "rho_derivation",
            "equivariance",
            "peiffer",
        }

    def test_perturbed_action_breaks_equivariance(self, so3_alg, rng):
        """Test that a random perturbation of the action is detected."""
        tangent = CrossedModuleAlgData.tangent(so3_alg)
        broken = CrossedModuleAlgData(
            tangent.g, tangent.h, tangent.dmap, tangent.rho + 0.1 * rng.standard_normal((3, 3, 3))
        )
        report = check_crossed_module(broken)

        assert report.residuals["equivariance"] > 1e-3
        assert not report.passed

    def test_shape_validation(self, so3_alg):
        """Test that dmap and rho shapes are checked."""
        with pytest.raises(ShapeMismatchError):
            CrossedModuleAlgData(so3_alg, so3_alg, np.eye(2), np.zeros((3, 3, 3)))
        with pytest.raises(ShapeMismatchError):
            CrossedModuleAlgData(so3_alg, so3_alg, np.eye(3), np.zeros((3, 3)))


class TestLie2Algebra:
    """Test the strict Lie 2-algebra of a crossed module."""

    def test_coadjoint(self, so3_alg, rng):
        """Test l1 = 0 and l2(x, xi) = ad*_x xi."""
        alg = to_lie2(CrossedModuleAlgData.coadjoint(so3_alg))
        x, xi = rng.standard_normal(3), rng.standard_normal(3)

        assert np.allclose(alg.l1, 0.0)
        assert np.allclose(alg.l2(x, xi), -so3_alg.ad(x).T @ xi)

    def test_tangent(self, so3_alg):
        """Test l1 = id for (g, g, id, ad)."""
        alg = to_lie2(CrossedModuleAlgData.tangent(so3_alg))

        assert np.allclose(alg.l1, np.eye(3))
        assert alg.dims == {"x": 3, "y": 3, "z": 3, "w": 3}

    def test_h_bracket_round_trip(self, so3_alg, rng):
        """Test [u, v]_h = l2(l1 u, v)."""
        cm = CrossedModuleAlgData.tangent(so3_alg)
        alg = to_lie2(cm)
        u, v = rng.standard_normal(3), rng.standard_normal(3)

        assert np.allclose(alg.h_bracket(u, v), cm.h.bracket(u, v))

    def test_from_structure(self, so3_alg):
        """Test tabulating brackets given as functions."""
        cm = CrossedModuleAlgData.tangent(so3_alg)
        alg = to_lie2(cm)
        rebuilt = Lie2AlgebraData.from_structure(
            3, 3, alg.bracket, alg.l2, alg.apply_l1
        )

        assert rebuilt.residual(alg) <= 1e-12


class TestCEDifferential:
    """Test the Chevalley-Eilenberg differential."""

    def test_linear_form_on_h(self, tangent_alg, rng):
        """Test δη(y) = -η(l1 y) for η in g0*."""
        eta = CECochain.random(1, 0, tangent_alg, rng)
        _, traded = ce_differential(eta, tangent_alg)
        y = rng.standard_normal(3)

        assert traded is not None
        assert (traded.k, traded.l) == (0, 1)
        expected = -eta.evaluate([tangent_alg.apply_l1(y)], [])
        assert abs(traded.evaluate([], [y]) - expected) < 1e-12

    def test_linear_form_on_brackets(self, tangent_alg, rng):
        """Test δη(x0, x1) = -η([x0, x1])."""
        eta = CECochain.random(1, 0, tangent_alg, rng)
        raised, _ = ce_differential(eta, tangent_alg)
        x0, x1 = rng.standard_normal(3), rng.standard_normal(3)

        expected = -eta.evaluate([tangent_alg.bracket(x0, x1)], [])
        assert abs(raised.evaluate([x0, x1], []) - expected) < 1e-12

    def test_constant(self, tangent_alg):
        """Test that constants are closed."""
        raised, traded = ce_differential(CECochain(0, 0, np.array(2.5)), tangent_alg)

        assert traded is None
        assert np.allclose(raised.coeffs, 0.0)

    def test_coadjoint_has_no_traded_part(self, coadjoint_alg, rng):
        """Test that l1 = 0 kills the h* component of δα."""
        _, traded = ce_differential(CECochain.random(1, 0, coadjoint_alg, rng), coadjoint_alg)

        assert np.allclose(traded.coeffs, 0.0)

    def test_block_symmetry(self, tangent_alg, rng):
        """Test that cochains are antisymmetric in x and symmetric in y."""
        eta = CECochain.random(2, 2, tangent_alg, rng)

        assert np.allclose(eta.coeffs, -eta.coeffs.transpose(1, 0, 2, 3))
        assert np.allclose(eta.coeffs, eta.coeffs.transpose(0, 1, 3, 2))

    def test_wrong_axes(self, tangent_alg):
        """Test that the tensor rank must match the block."""
        with pytest.raises(ShapeMismatchError):
            CECochain(2, 0, np.zeros(3))

    def test_square_abelian(self, rng):
        """Test δδ = 0 trivially on an abelian algebra with l1 = l2 = 0."""
        alg = Lie2AlgebraData(LieAlgebraData.abelian(2), 2, np.zeros((2, 2)), np.zeros((2, 2, 2)))

        assert ce_square_check(alg, rng) == 0.0

    def test_square_coadjoint(self, coadjoint_alg, rng):
        """Test δδ = 0 for the coadjoint algebra."""
        assert ce_square_check(coadjoint_alg, rng, max_degree=5) <= 1e-12

    def test_square_tangent(self, tangent_alg, rng):
        """Test δδ = 0 for the tangent algebra."""
        assert ce_square_check(tangent_alg, rng, max_degree=5) <= 1e-12
