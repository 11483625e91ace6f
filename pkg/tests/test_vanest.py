"""
Tests for the van Est map: operator words, the R and J operators, Φ on
low-level forms and the comparison with the perturbation zig-zag.
"""

import numpy as np
import pytest

from lie2vanest.algebroid import Lie2Algebroid
from lie2vanest.exceptions import LevelError, NormalizationError, ShapeMismatchError
from lie2vanest.forms import CochainField, MixedNormalizedForm, RandomNormalizedForm
from lie2vanest.homotopy import Homotopies
from lie2vanest.vanest import GeneratorField, OperatorWord, VanEstMap


@pytest.fixture
def vanest(tangent_group):
    """Φ for the tangent crossed module over SO(3)."""
    return VanEstMap(tangent_group)


def random_form(group, level, degree, rng):
    """A random normalized form on W̄_level together with its generator."""
    generator = RandomNormalizedForm(group.WbarG.sample(level, rng), degree, rng)
    return generator, generator.field()


def mixed_form(group, level, degree, rng):
    """A random normalized form on W̄_level coupling the arrows of the top slot."""
    return MixedNormalizedForm(group.WbarG.sample(level, rng), degree, rng).field()


class TestOperatorWord:
    """Test the bookkeeping of operator words."""

    def test_str(self):
        """Test that words print rightmost letter last."""
        v = np.zeros(3)

        assert str(OperatorWord((("y", v), ("x", v)), 3, 0)) == "R_y R_x"
        assert str(OperatorWord((), 0, 0)) == "1"

    def test_unknown_letter(self):
        """Test that only x, y, z and w letters exist."""
        with pytest.raises(ShapeMismatchError):
            OperatorWord((("q", np.zeros(3)),), 1, 0)

    def test_level_must_be_consumed(self):
        """Test that a word must take (level, degree) down to (0, 0)."""
        with pytest.raises(LevelError):
            OperatorWord((("x", np.zeros(3)),), 2, 0)
        with pytest.raises(LevelError):
            OperatorWord((("z", np.zeros(3)),), 1, 0)

    @pytest.mark.parametrize(
        "block,sign",
        [
            ((1, 0, 0, 0), 1),
            ((2, 0, 0, 0), -1),
            ((0, 1, 0, 0), -1),
            ((1, 0, 1, 0), 1),
            ((1, 1, 0, 0), -1),
        ],
    )
    def test_normalization_sign(self, block, sign):
        """Test the overall sign of each Weil block."""
        assert VanEstMap.normalization_sign(block) == sign


class TestOperators:
    """Test R and J on forms of the wrong shape."""

    def test_generator_fields(self, vanest):
        """Test that generator fields need level 1 and y fields a slot."""
        with pytest.raises(LevelError):
            GeneratorField(vanest.levels, "x", 0, np.zeros(3))
        with pytest.raises(ShapeMismatchError):
            GeneratorField(vanest.levels, "y", 2, np.zeros(3))

    def test_contraction_of_function(self, vanest):
        """Test that J cannot act on a 0-form."""
        with pytest.raises(LevelError):
            vanest.op_J(np.zeros(3), CochainField(1, lambda s: 0.0))

    def test_letter_kinds(self, vanest):
        """Test that R takes x or y and J takes z or w."""
        f = CochainField(2, lambda s: 0.0)
        with pytest.raises(ShapeMismatchError):
            vanest.op_R(np.zeros(3), f, kind="z")
        with pytest.raises(ShapeMismatchError):
            vanest.op_J(np.zeros(3), f, kind="x")

    def test_r_y_needs_level_two(self, vanest):
        """Test that R_y consumes two levels."""
        with pytest.raises(LevelError):
            vanest.op_R(np.zeros(3), CochainField(1, lambda s: 0.0), kind="y")

    def test_word_must_fit_form(self, vanest):
        """Test that a word only applies to forms of its shape."""
        word = OperatorWord((("x", np.zeros(3)),), 1, 0)
        with pytest.raises(LevelError):
            vanest.apply_word(word, CochainField(2, lambda s: 0.0))


class TestPhi:
    """Test Φ on forms of low level."""

    def test_constant(self, vanest):
        """Test that Φ is the identity on functions on the point."""
        image = vanest.phi_full(CochainField(0, lambda s: 2.5))

        assert np.allclose(image.component((0, 0, 0, 0)), 2.5)

    def test_function_on_level_one(self, vanest, tangent_group, rng):
        """Test Φ(f)(x) = df_1(x) for f on W̄_1 = G."""
        generator, f = random_form(tangent_group, 1, 0, rng)
        G = tangent_group.cm.G
        expected = [generator.slot_linear[0] @ G.hat(e).ravel() for e in np.eye(3)]

        assert np.allclose(vanest.phi_component((1, 0, 0, 0), f), expected, atol=1e-6)

    def test_one_form_on_level_one(self, vanest, tangent_group, rng):
        """Test that a form vanishing at the unit has Φ = 0 on W̄_1."""
        _, omega = random_form(tangent_group, 1, 1, rng)

        assert np.allclose(vanest.phi_component((0, 0, 1, 0), omega), 0.0)

    def test_wrong_bidegree_is_zero(self, vanest, tangent_group, rng):
        """Test that blocks of another bidegree vanish."""
        _, f = random_form(tangent_group, 1, 0, rng)
        block = vanest.phi_component((2, 0, 0, 0), f)

        assert block.shape == (3, 3)
        assert np.allclose(block, 0.0)

    def test_requires_normalized(self, vanest):
        """Test that a non-normalized form is refused."""
        with pytest.raises(NormalizationError):
            vanest.phi_full(CochainField(1, lambda s: 1.0))

    def test_zigzag_on_functions(self, vanest, tangent_group, rng):
        """Test that Φ agrees with the perturbation zig-zag on W̄_1."""
        _, f = random_form(tangent_group, 1, 0, rng)
        homotopies = Homotopies(Lie2Algebroid(tangent_group))
        zigzag = homotopies.perturbation_zigzag(f, check=False)

        assert (vanest.phi_full(f) - zigzag).max_abs() <= 1e-5

    @pytest.mark.slow
    def test_cochain_map_on_functions(self, vanest, tangent_group, rng):
        """Test Φ∂̄ = δΦ and Φd = dΦ on a function on W̄_1."""
        _, f = random_form(tangent_group, 1, 0, rng)
        residuals = vanest.cochain_map_check(f)

        assert residuals["coboundary"] <= 1e-5
        assert residuals["de_rham"] <= 1e-5

    @pytest.mark.slow
    def test_zigzag_on_level_two(self, vanest, tangent_group, rng):
        """Test Φ against the zig-zag on a function on W̄_2."""
        _, f = random_form(tangent_group, 2, 0, rng)
        homotopies = Homotopies(Lie2Algebroid(tangent_group))

        assert (vanest.phi_full(f) - homotopies.perturbation_zigzag(f)).max_abs() <= 1e-5


class TestMixedForms:
    """Test Φ on normalized forms that do not split over the slots."""

    def test_product_forms_miss_the_y_block(self, vanest, tangent_group, rng):
        """Test that Φ^{0100} of a product function on W̄_2 vanishes."""
        _, f = random_form(tangent_group, 2, 0, rng)

        assert np.allclose(vanest.phi_component((0, 1, 0, 0), f), 0.0)

    def test_mixed_function_reaches_the_y_block(self, vanest, tangent_group, rng):
        """Test that Φ^{0100} of a mixed function on W̄_2 is the derivative along the arrow."""
        f = mixed_form(tangent_group, 2, 0, rng)

        assert np.max(np.abs(vanest.phi_component((0, 1, 0, 0), f))) > 1e-3

    def test_mixed_one_form_reaches_the_w_block(self, vanest, tangent_group, rng):
        """Test that Φ^{0001} of a mixed 1-form on W̄_2 is non-zero."""
        omega = mixed_form(tangent_group, 2, 1, rng)

        assert np.max(np.abs(vanest.phi_component((0, 0, 0, 1), omega))) > 1e-3

    @pytest.mark.slow
    def test_zigzag_on_mixed_level_two(self, vanest, tangent_group, rng):
        """Test Φ against the zig-zag on a mixed function on W̄_2."""
        f = mixed_form(tangent_group, 2, 0, rng)
        homotopies = Homotopies(Lie2Algebroid(tangent_group))

        assert (vanest.phi_full(f) - homotopies.perturbation_zigzag(f)).max_abs() <= 1e-5

    @pytest.mark.slow
    def test_zigzag_on_mixed_level_three(self, vanest, tangent_group, rng):
        """Test the signs of the mixed (1, 1, 0, 0) block against the zig-zag on W̄_3."""
        f = mixed_form(tangent_group, 3, 0, rng)
        homotopies = Homotopies(Lie2Algebroid(tangent_group))
        phi = vanest.phi_full(f)
        zigzag = homotopies.perturbation_zigzag(f)

        assert np.max(np.abs(phi.component((1, 1, 0, 0)))) > 1e-3
        assert np.allclose(
            phi.component((1, 1, 0, 0)), zigzag.component((1, 1, 0, 0)), atol=1e-5
        )
        assert (phi - zigzag).max_abs() <= 1e-5

    @pytest.mark.slow
    def test_cochain_map_on_mixed_one_form(self, vanest, tangent_group, rng):
        """Test Φ∂̄ = δΦ and Φd = dΦ on a mixed 1-form on W̄_2."""
        omega = mixed_form(tangent_group, 2, 1, rng)
        residuals = vanest.cochain_map_check(omega)

        assert residuals["coboundary"] <= 1e-5
        assert residuals["de_rham"] <= 1e-5
