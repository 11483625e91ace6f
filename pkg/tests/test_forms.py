"""
Tests for forms on simplicial levels: arithmetic, the simplicial coboundary,
normalization and the chart de Rham differential.
"""

import pytest

from lie2vanest.exceptions import NormalizationError, ShapeMismatchError
from lie2vanest.forms import (
    CochainField,
    FormField,
    MixedNormalizedForm,
    RandomNormalizedForm,
    chart_d,
    normalization_residual,
    random_normalized_form,
    random_tangent,
    require_normalized,
    simplicial_coboundary,
)
from lie2vanest.numcore import curve_derivative, tree_map


@pytest.fixture
def wbar(tangent_group):
    """W̄G for the tangent crossed module."""
    return tangent_group.WbarG


def random_form(wbar, level, degree, rng):
    """A random normalized form on W̄_level."""
    return RandomNormalizedForm(wbar.sample(level, rng), degree, rng).field()


class TestFormField:
    """Test the form container."""

    def test_degree_is_checked(self):
        """Test that the number of tangents must equal the degree."""
        form = FormField.zero(1, 2)
        with pytest.raises(ShapeMismatchError):
            form((), [()])
        with pytest.raises(ShapeMismatchError):
            FormField(1, -1, lambda x, vs: 0.0)

    def test_arithmetic(self):
        """Test sums, differences and scalar multiples pointwise."""
        f = CochainField(1, lambda x: 2.0)
        g = CochainField(1, lambda x: 0.5)

        assert (f + g)(()) == 2.5
        assert (f - g)(()) == 1.5
        assert f.scale(3.0)(()) == 6.0

    def test_level_mismatch(self):
        """Test that forms on different levels do not add."""
        with pytest.raises(ShapeMismatchError):
            CochainField(1, lambda x: 1.0) + CochainField(2, lambda x: 1.0)


class TestCoboundary:
    """Test ∂ = Σ (-1)^i d_i*."""

    def test_square_on_functions(self, wbar, rng):
        """Test ∂∂f = 0 for a function on W̄_1."""
        f = random_form(wbar, 1, 0, rng)
        twice = simplicial_coboundary(simplicial_coboundary(f, wbar), wbar)

        assert twice.level == 3
        assert abs(twice(wbar.sample(3, rng))) <= 1e-10

    def test_square_on_one_forms(self, wbar, tangent_so3, rng):
        """Test ∂∂ω = 0 for a 1-form on W̄_1."""
        omega = random_form(wbar, 1, 1, rng)
        twice = simplicial_coboundary(simplicial_coboundary(omega, wbar), wbar)
        point = wbar.sample(3, rng)

        assert abs(twice(point, [random_tangent(tangent_so3, point, rng)])) <= 1e-10

    def test_explicit_sum(self, wbar, rng):
        """Test ∂f = Σ (-1)^i d_i* f on W̄_2."""
        f = random_form(wbar, 1, 0, rng)
        point = wbar.sample(2, rng)
        faces = [f(wbar.face(2, i, point)) for i in range(3)]
        expected = faces[0] - faces[1] + faces[2]

        assert abs(simplicial_coboundary(f, wbar)(point) - expected) <= 1e-14


class TestNormalization:
    """Test the normalization of random forms."""

    def test_random_forms_are_normalized(self, wbar, tangent_so3, rng):
        """Test that degeneracy pullbacks vanish exactly."""
        omega = random_form(wbar, 2, 1, rng)
        points = [wbar.sample(1, rng) for _ in range(3)]
        tangents = [[random_tangent(tangent_so3, x, rng)] for x in points]

        assert normalization_residual(omega, wbar, points, tangents) == 0.0
        require_normalized(omega, wbar, tangent_so3)

    @pytest.mark.parametrize("level", [2, 3])
    def test_mixed_forms_are_normalized(self, wbar, tangent_so3, rng, level):
        """Test that forms coupling the top two slots are still normalized."""
        omega = MixedNormalizedForm(wbar.sample(level, rng), 1, rng).field()
        points = [wbar.sample(level - 1, rng) for _ in range(3)]
        tangents = [[random_tangent(tangent_so3, x, rng)] for x in points]

        assert normalization_residual(omega, wbar, points, tangents) == 0.0
        require_normalized(omega, wbar, tangent_so3)

    def test_mixed_forms_do_not_split_over_slots(self, wbar, rng):
        """Test that a unit deepest slot kills product forms but not mixed ones."""
        template = wbar.sample(3, rng)
        product = RandomNormalizedForm(template, 0, rng)
        mixed = MixedNormalizedForm(template, 0, rng)
        x = tuple(template[:2]) + (wbar.unit(3)[2],)

        assert product(x, ()) == 0.0
        assert mixed(x, ()) != 0.0

    def test_mixed_needs_two_slots(self, wbar, rng):
        """Test that level 1 falls back to the product form."""
        assert random_normalized_form(wbar, 1, 0, rng, mixed=True).name == "random"
        assert random_normalized_form(wbar, 2, 0, rng, mixed=True).name == "mixed"

    def test_constant_is_not_normalized(self, wbar, tangent_so3):
        """Test that a non-zero constant on W̄_1 is refused."""
        with pytest.raises(NormalizationError):
            require_normalized(CochainField(1, lambda x: 1.0), wbar, tangent_so3)

    def test_level_zero_is_exempt(self, wbar, tangent_so3):
        """Test that functions on the point are always accepted."""
        require_normalized(CochainField(0, lambda x: 1.0), wbar, tangent_so3)


class TestChartDifferential:
    """Test the de Rham differential in right-invariant frames."""

    def test_differential_of_function(self, wbar, tangent_so3, rng):
        """Test df(V) against the derivative along x + tV."""
        f = random_form(wbar, 1, 0, rng)
        point = wbar.sample(1, rng)
        tangent = random_tangent(tangent_so3, point, rng)
        expected = curve_derivative(
            lambda t: f(tree_map(lambda m, v: m + t * v, point, tangent))
        )

        assert abs(chart_d(f)(point, [tangent]) - expected) <= 1e-7

    def test_antisymmetry(self, wbar, tangent_so3, rng):
        """Test that dω of a 1-form is antisymmetric."""
        omega = random_form(wbar, 1, 1, rng)
        point = wbar.sample(1, rng)
        u, v = (random_tangent(tangent_so3, point, rng) for _ in range(2))
        d_omega = chart_d(omega)

        assert abs(d_omega(point, [u, v]) + d_omega(point, [v, u])) <= 1e-6

    def test_square(self, wbar, tangent_so3, rng):
        """Test dd f = 0 up to nested difference error."""
        f = random_form(wbar, 1, 0, rng)
        point = wbar.sample(1, rng)
        u, v = (random_tangent(tangent_so3, point, rng) for _ in range(2))

        assert abs(chart_d(chart_d(f), step=1e-3)(point, [u, v])) <= 1e-4
