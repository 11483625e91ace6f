"""
Tests for the simplicial models: the nerve, W̄, W = dec W̄ and the splitting ε.
"""

import pytest

from lie2vanest.exceptions import LevelError
from lie2vanest.numcore import tree_residual
from lie2vanest.simplicial import epsilon_residual, simplicial_identity_residual


class TestSimplicialIdentities:
    """Test the simplicial identities on every model of the 2-group."""

    @pytest.mark.parametrize("n", [0, 1, 2, 3])
    def test_nerve(self, tangent_group, rng, n):
        """Test the identities on G_n."""
        G = tangent_group.G

        assert simplicial_identity_residual(G, n, G.sample(n, rng)) <= 1e-10

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_wbar(self, tangent_group, rng, m):
        """Test the identities on W̄_m G."""
        model = tangent_group.WbarG

        assert simplicial_identity_residual(model, m, model.sample(m, rng)) <= 1e-10

    @pytest.mark.parametrize("p", [0, 1, 2])
    def test_w(self, coadjoint_group, rng, p):
        """Test the identities on W_p G."""
        model = coadjoint_group.WG

        assert simplicial_identity_residual(model, p, model.sample(p, rng)) <= 1e-10

    def test_wbar_of_decalage(self, tangent_group, rng):
        """Test the identities on W̄(dec G)."""
        model = tangent_group.WbarDecG

        assert simplicial_identity_residual(model, 2, model.sample(2, rng)) <= 1e-10


class TestWBar:
    """Test the stack conventions of W̄ and W."""

    def test_stack_lengths(self, tangent_group, rng):
        """Test that W_p is W̄_{p+1} and slot t lives in G_{m-1-t}."""
        stack = tangent_group.sample_w(2, rng)

        assert len(stack) == 3
        assert [slot.level for slot in stack] == [2, 1, 0]

    def test_face_zero_drops_top_slot(self, tangent_group, rng):
        """Test d_0 on W̄ forgets the first slot."""
        stack = tangent_group.WbarG.sample(3, rng)

        assert tree_residual(tangent_group.WbarG.face(3, 0, stack), stack[1:]) == 0.0

    def test_w_faces_are_shifted(self, tangent_group, rng):
        """Test that face i of W is face i + 1 of W̄."""
        stack = tangent_group.sample_w(2, rng)
        expected = tangent_group.WbarG.face(3, 2, stack)

        assert tree_residual(tangent_group.w_face(1, stack), expected) == 0.0

    def test_faces_apply_right_to_left(self, tangent_group, rng):
        """Test faces(n, (i, j), x) = d_i d_j x."""
        model = tangent_group.WbarG
        stack = model.sample(3, rng)
        expected = model.face(2, 0, model.face(3, 2, stack))

        assert tree_residual(model.faces(3, (0, 2), stack), expected) == 0.0

    def test_faces_of_unit(self, tangent_group):
        """Test that every face of the unit is the unit."""
        model = tangent_group.WbarG
        for i in range(4):
            assert tree_residual(model.face(3, i, model.unit(3)), model.unit(2)) <= 1e-14

    def test_point_has_no_faces(self, tangent_group):
        """Test that W̄_0 has no faces."""
        with pytest.raises(LevelError):
            tangent_group.WbarG.face(0, 0, ())

    def test_left_action(self, tangent_group, rng):
        """Test that the left action multiplies the top slot only."""
        model = tangent_group.WbarG
        stack = model.sample(2, rng)
        k = tangent_group.G.sample(1, rng)
        moved = model.left_action(k, stack)

        assert tree_residual(moved[0], tangent_group.G.mult(1, k, stack[0])) == 0.0
        assert tree_residual(moved[1:], stack[1:]) == 0.0
        with pytest.raises(LevelError):
            model.left_action(k, ())

    def test_level_cap(self, tangent_group):
        """Test that levels above the cap are refused."""
        with pytest.raises(LevelError):
            tangent_group.check_level(tangent_group.cap + 1)


class TestSplitting:
    """Test the splitting ε of W d_0."""

    @pytest.mark.parametrize("p", [0, 1, 2])
    def test_residuals(self, tangent_group, rng, p):
        """Test section, faces, degeneracies and the closed form."""
        residuals = epsilon_residual(tangent_group, tangent_group.sample_w(p, rng))

        assert set(residuals) == {"section", "closed_form", "faces", "degeneracies"}
        for name, value in residuals.items():
            assert value <= 1e-10, name

    def test_coadjoint(self, coadjoint_group, rng):
        """Test the splitting for the coadjoint crossed module at level 2."""
        residuals = epsilon_residual(coadjoint_group, coadjoint_group.sample_w(2, rng))

        assert max(residuals.values()) <= 1e-10

    def test_level_zero(self, tangent_group, rng):
        """Test ε_0(g) = s_0 g."""
        stack = tangent_group.sample_w(0, rng)
        (eps,) = tangent_group.epsilon(stack)

        assert tree_residual(eps, tangent_group.G.degeneracy(0, 0, stack[0])) == 0.0

    def test_top_slot(self, tangent_group, rng):
        """Test that epsilon_top is the first slot of ε."""
        stack = tangent_group.sample_w(1, rng)

        top = tangent_group.epsilon_top(stack)

        assert tree_residual(top, tangent_group.epsilon(stack)[0]) == 0.0

    def test_cap(self, tangent_group, rng):
        """Test that ε stops one level below the cap."""
        stack = tangent_group.sample_w(tangent_group.cap, rng)
        with pytest.raises(LevelError):
            tangent_group.epsilon(stack)
        with pytest.raises(LevelError):
            tangent_group.epsilon(())
