"""
Unit Tests for the Additive Hull
"""

import os
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

# Add src to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.addhull import (
    AddFunctor,
    AdditiveHull,
    AddMorphism,
    AddObject,
    add_compose,
    add_hom_group,
    biproduct,
)
from src.errors import EndpointMismatchError
from src.fincat import (
    LocalisationFunctor,
    LocalisedCategory,
    PathCategory,
    Quiver,
    QuiverArrow,
    arrow_path,
    hom_paths,
    paper_quiver,
    paper_sigma,
)

CHAIN = Quiver(("a", "b", "c"), (QuiverArrow("f", "a", "b"), QuiverArrow("g", "b", "c")))
PAPER_HULL = AdditiveHull(PathCategory(paper_quiver(2)))

A, B, C = AddObject(("a",)), AddObject(("b",)), AddObject(("c",))

objects_strategy = st.lists(st.sampled_from(paper_quiver(2).vertices), min_size=0, max_size=2).map(
    lambda vs: AddObject(tuple(vs))
)


def coefficients(length):
    return st.lists(st.integers(min_value=-3, max_value=3), min_size=length, max_size=length).map(tuple)


@pytest.fixture(scope="module")
def chain_hull():
    return AdditiveHull(PathCategory(CHAIN))


class TestHomGroups:
    """Tests for hom-groups of add(C)"""

    def test_zero_object(self, chain_hull):
        """Test the empty sum is a zero object"""
        zero = chain_hull.zero_object()
        assert zero.label == "0"
        assert chain_hull.is_zero_object(zero)
        assert chain_hull.rank(zero, A) == 0
        assert chain_hull.rank(A, zero) == 0

    def test_single_summands(self, chain_hull):
        """Test hom ranks between single summands are path counts"""
        assert chain_hull.rank(A, C) == 1
        assert chain_hull.rank(C, A) == 0
        assert chain_hull.rank(B, B) == 1

    @pytest.mark.parametrize("n", [0, 1, 2, 3, 4])
    def test_rank_formula(self, n):
        """Test rank hom(X, Y) is the sum of the path counts over summand pairs"""
        q = paper_quiver(n)
        hull = AdditiveHull(PathCategory(q))
        everything = AddObject(q.vertices)
        assert hull.rank(everything, everything) == 3 * n + 2
        x_and_z = AddObject(("x", "z"))
        expected = sum(len(hom_paths(q, s, t)) for s in q.vertices for t in ("x", "z"))
        assert hull.rank(everything, x_and_z) == expected

    def test_hom_group_basis(self, chain_hull):
        """Test the basis lists target summand first"""
        group, basis = add_hom_group(chain_hull, AddObject(("a", "b")), C)
        assert group.canonical == (2, ())
        assert [(i, j, m.label) for i, j, m in basis] == [(0, 0, "g·f"), (0, 1, "g")]

    def test_free_groups(self):
        """Test every hom-group of add(C) is free"""
        x, y = AddObject(("y1", "y2")), AddObject(("x", "z"))
        assert PAPER_HULL.hom(x, y).canonical == (4, ())


class TestComposition:
    """Tests for composition in add(C)"""

    def test_compose_arrows(self, chain_hull):
        """Test g∘f on single summands"""
        assert chain_hull.compose(A, B, C, (1,), (1,)) == (1,)
        assert chain_hull.compose(A, B, C, (2,), (-3,)) == (-6,)

    def test_identity(self, chain_hull):
        """Test the identity of a sum is the identity matrix"""
        ab = AddObject(("a", "b"))
        ident = chain_hull.identity(ab)
        assert chain_hull.to_add_morphism(ab, ab, ident).entries == (((1,), ()), ((0,), (1,)))

    def test_add_compose(self, chain_hull):
        """Test matrix morphisms compose"""
        f = AddMorphism(A, B, (((1,),),))
        g = AddMorphism(B, C, (((1,),),))
        assert add_compose(chain_hull, g, f) == AddMorphism(A, C, (((1,),),))

    def test_add_compose_mismatch(self, chain_hull):
        """Test incompatible matrix morphisms raise"""
        f = AddMorphism(A, B, (((1,),),))
        with pytest.raises(EndpointMismatchError):
            add_compose(chain_hull, f, f)

    def test_bad_entries(self, chain_hull):
        """Test entry matrices are checked against hom-set sizes"""
        with pytest.raises(EndpointMismatchError):
            chain_hull.morphism_vector(AddMorphism(A, B, (((1, 1),),)))

    def test_describe(self, chain_hull):
        """Test the readable form of a morphism"""
        assert chain_hull.describe(A, C, (2,)) == "+2·g·f[0,0]"
        assert chain_hull.describe(A, C, (0,)) == "0"

    @settings(max_examples=60, deadline=None)
    @given(st.data())
    def test_bilinearity(self, data):
        """Test composition is bilinear"""
        x, y, z = data.draw(objects_strategy), data.draw(objects_strategy), data.draw(objects_strategy)
        f = data.draw(coefficients(PAPER_HULL.rank(x, y)))
        g1 = data.draw(coefficients(PAPER_HULL.rank(y, z)))
        g2 = data.draw(coefficients(PAPER_HULL.rank(y, z)))
        left = PAPER_HULL.compose(x, y, z, PAPER_HULL.add(g1, g2), f)
        right = PAPER_HULL.add(PAPER_HULL.compose(x, y, z, g1, f), PAPER_HULL.compose(x, y, z, g2, f))
        assert left == right

    @settings(max_examples=60, deadline=None)
    @given(st.data())
    def test_associativity(self, data):
        """Test h∘(g∘f) = (h∘g)∘f"""
        w, x, y, z = (data.draw(objects_strategy) for _ in range(4))
        f = data.draw(coefficients(PAPER_HULL.rank(w, x)))
        g = data.draw(coefficients(PAPER_HULL.rank(x, y)))
        h = data.draw(coefficients(PAPER_HULL.rank(y, z)))
        left = PAPER_HULL.compose(w, y, z, h, PAPER_HULL.compose(w, x, y, g, f))
        right = PAPER_HULL.compose(w, x, z, PAPER_HULL.compose(x, y, z, h, g), f)
        assert left == right

    @settings(max_examples=40, deadline=None)
    @given(st.data())
    def test_composition_tensor(self, data):
        """Test the structure tensor reproduces composition"""
        x, y, z = data.draw(objects_strategy), data.draw(objects_strategy), data.draw(objects_strategy)
        f = data.draw(coefficients(PAPER_HULL.rank(x, y)))
        g = data.draw(coefficients(PAPER_HULL.rank(y, z)))
        tensor = PAPER_HULL.composition_tensor(x, y, z)
        expected = np.einsum("p,q,pqr->r", np.array(g, dtype=np.int64), np.array(f, dtype=np.int64), tensor)
        assert tuple(int(v) for v in expected) == PAPER_HULL.compose(x, y, z, g, f)


class TestBiproducts:
    """Tests for direct sums"""

    def test_biproduct_equations(self, chain_hull):
        """Test π∘ι = id, cross terms vanish and ι∘π sums to the identity"""
        ab = AddObject(("a", "b"))
        obj, (i_a, i_b), (p_a, p_b) = biproduct(chain_hull, A, ab)
        assert obj == AddObject(("a", "a", "b"))
        assert add_compose(chain_hull, p_a, i_a) == chain_hull.to_add_morphism(A, A, chain_hull.identity(A))
        assert add_compose(chain_hull, p_b, i_b) == chain_hull.to_add_morphism(ab, ab, chain_hull.identity(ab))
        cross = chain_hull.morphism_vector(add_compose(chain_hull, p_b, i_a))
        assert not any(cross)
        total = chain_hull.add(
            chain_hull.morphism_vector(add_compose(chain_hull, i_a, p_a)),
            chain_hull.morphism_vector(add_compose(chain_hull, i_b, p_b)),
        )
        assert total == chain_hull.identity(obj)

    def test_empty_sum(self, chain_hull):
        """Test the sum of nothing is the zero object"""
        assert chain_hull.direct_sum([]).obj == chain_hull.zero_object()


class TestAddFunctor:
    """Tests for the additive extension of the localisation functor"""

    def test_functoriality(self):
        """Test add(L) preserves identities and composites"""
        q = paper_quiver(1)
        paths = PathCategory(q)
        localised = LocalisedCategory(q, paper_sigma(1))
        source, target = AdditiveHull(paths), AdditiveHull(localised)
        functor = AddFunctor(source, target, LocalisationFunctor(paths, localised))

        y1x = AddObject(("y1", "x"))
        assert functor.on_object(y1x) == y1x
        image = functor.on_morphism(y1x, y1x, source.identity(y1x))
        assert image == target.identity(y1x)

        y1, x = AddObject(("y1",)), AddObject(("x",))
        sigma = source.from_terms(y1, x, [(0, 0, arrow_path(q, "sigma1"), 1)])
        assert functor.on_morphism(y1, x, sigma) == (1,)

        into_sum = source.from_terms(y1, y1x, [(0, 0, paths.identity("y1"), 1), (1, 0, arrow_path(q, "sigma1"), 2)])
        onto_x = source.from_terms(y1x, x, [(0, 1, paths.identity("x"), 1)])
        composite = source.compose(y1, y1x, x, onto_x, into_sum)
        assert functor.on_morphism(y1, x, composite) == target.compose(
            y1,
            y1x,
            x,
            functor.on_morphism(y1x, x, onto_x),
            functor.on_morphism(y1, y1x, into_sum),
        )

    def test_apply_add(self):
        """Test the matrix-level view of add(L)"""
        q = paper_quiver(1)
        paths = PathCategory(q)
        localised = LocalisedCategory(q, paper_sigma(1))
        source, target = AdditiveHull(paths), AdditiveHull(localised)
        functor = AddFunctor(source, target, LocalisationFunctor(paths, localised))
        tau = AddMorphism(AddObject(("y1",)), AddObject(("z",)), (((3,),),))
        assert functor.apply_add(tau).entries == (((3,),),)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
