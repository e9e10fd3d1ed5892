"""
Unit Tests for Quivers, Path Categories and Localisation
"""

import json
import os
import sys
from itertools import product

import networkx as nx
import pytest

# Add src to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.errors import (
    EndpointMismatchError,
    IncompleteLocalisationError,
    InfiniteHomSetError,
    QuiverFormatError,
)
from src.fincat import (
    Letter,
    LocalisationFunctor,
    LocalisedCategory,
    Path,
    PathCategory,
    Quiver,
    QuiverArrow,
    ZigzagWord,
    arrow_path,
    compose_paths,
    hom_paths,
    identity_path,
    is_reduced,
    localisation_functor,
    load_quiver_document,
    localised_hom,
    paper_quiver,
    paper_sigma,
    parse_quiver_document,
    quiver_to_document,
    reduce_word,
    rewrite_steps,
)

QUIVER_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "default_quivers")


def chain_quiver() -> Quiver:
    return Quiver(("a", "b", "c"), (QuiverArrow("f", "a", "b"), QuiverArrow("g", "b", "c")))


def loop_quiver() -> Quiver:
    return Quiver(("a",), (QuiverArrow("l", "a", "a"),))


class TestQuiver:
    """Tests for quiver construction and validation"""

    @pytest.mark.parametrize("n", [0, 1, 2, 5])
    def test_paper_quiver_counts(self, n):
        """Test vertex and arrow counts of the n-indexed quiver"""
        q = paper_quiver(n)
        assert len(q.vertices) == n + 2
        assert len(q.arrows) == 2 * n
        assert q.is_acyclic()
        assert paper_sigma(n) == tuple(f"sigma{i}" for i in range(1, n + 1))

    def test_negative_n(self):
        """Test that a negative index set is rejected"""
        with pytest.raises(ValueError):
            paper_quiver(-1)

    def test_duplicate_vertices(self):
        """Test duplicate vertex names are rejected"""
        with pytest.raises(QuiverFormatError, match="vertices"):
            Quiver(("a", "a"), ())

    def test_undeclared_vertex(self):
        """Test arrows must use declared vertices"""
        with pytest.raises(QuiverFormatError, match=r"arrows\[0\]\.tgt"):
            Quiver(("a",), (QuiverArrow("f", "a", "b"),))

    def test_graph_view(self):
        """Test the networkx view keeps parallel arrows"""
        q = Quiver(("a", "b"), (QuiverArrow("f", "a", "b"), QuiverArrow("g", "a", "b")))
        g = q.graph()
        assert isinstance(g, nx.MultiDiGraph)
        assert g.number_of_edges("a", "b") == 2

    def test_cycle_detected(self):
        """Test a loop makes the quiver cyclic"""
        assert not loop_quiver().is_acyclic()


class TestPathCategory:
    """Tests for the free category on an acyclic quiver"""

    def test_hom_paths_chain(self):
        """Test the paths of a chain"""
        q = chain_quiver()
        assert [p.label for p in hom_paths(q, "a", "c")] == ["g·f"]
        assert [p.label for p in hom_paths(q, "a", "a")] == ["id_a"]
        assert hom_paths(q, "c", "a") == ()

    def test_hom_paths_parallel(self):
        """Test parallel arrows are sorted by arrow index"""
        q = Quiver(("a", "b"), (QuiverArrow("g", "a", "b"), QuiverArrow("f", "a", "b")))
        assert [p.label for p in hom_paths(q, "a", "b")] == ["g", "f"]

    def test_paper_quiver_homs(self):
        """Test there are no paths x → z before localising"""
        q = paper_quiver(3)
        assert hom_paths(q, "x", "z") == ()
        assert [p.label for p in hom_paths(q, "y2", "x")] == ["sigma2"]

    def test_cyclic_quiver_rejected(self):
        """Test cyclic quivers have infinite hom-sets"""
        with pytest.raises(InfiniteHomSetError, match="infinite hom-set"):
            PathCategory(loop_quiver())
        with pytest.raises(InfiniteHomSetError):
            hom_paths(loop_quiver(), "a", "a")

    def test_composition_laws(self):
        """Test unit and associativity laws on the chain"""
        q = chain_quiver()
        cat = PathCategory(q)
        f, g = arrow_path(q, "f"), arrow_path(q, "g")
        assert cat.compose(f, cat.identity("a")) == f
        assert cat.compose(cat.identity("b"), f) == f
        gf = cat.compose(g, f)
        assert gf == Path("a", "c", ("f", "g"))
        assert cat.compose(cat.identity("c"), gf) == cat.compose(cat.compose(cat.identity("c"), g), f)

    def test_endpoint_mismatch(self):
        """Test non-composable paths raise"""
        q = chain_quiver()
        with pytest.raises(EndpointMismatchError):
            compose_paths(arrow_path(q, "f"), arrow_path(q, "g"))

    def test_identity_label(self):
        """Test identity paths are labelled by their vertex"""
        assert identity_path("x").label == "id_x"
        assert len(identity_path("x")) == 0


def _word(source, target, *letters):
    return ZigzagWord(source, target, tuple(letters))


class TestReduction:
    """Tests for zigzag word reduction"""

    def test_cancel_to_identity(self):
        """Test σ1∘σ1⁻¹ reduces to the identity"""
        w = _word("x", "x", Letter("sigma1", True), Letter("sigma1"))
        assert reduce_word(w).letters == ()

    def test_cancel_prefix(self):
        """Test σ1⁻¹∘σ1 cancels before τ1"""
        w = _word("y1", "z", Letter("sigma1"), Letter("sigma1", True), Letter("tau1"))
        assert reduce_word(w).letters == (Letter("tau1"),)

    def test_label_after_reduction(self):
        """Test labels read right to left"""
        w = _word(
            "x", "z", Letter("sigma1", True), Letter("sigma1"), Letter("sigma2", True), Letter("tau2")
        )
        assert reduce_word(w).label == "tau2·sigma2^-1"

    def test_reduced_words_are_fixed(self):
        """Test reduction leaves reduced words alone"""
        w = _word("x", "z", Letter("sigma1", True), Letter("tau1"))
        assert is_reduced(w)
        assert reduce_word(w) == w

    def test_confluence(self):
        """Test every rewrite class over abstract letters holds one reduced word"""
        letters = [Letter("s"), Letter("s", True), Letter("t"), Letter("t", True)]
        graph = nx.Graph()
        for length in range(7):
            for combo in product(letters, repeat=length):
                w = _word("v", "v", *combo)
                graph.add_node(w)
                for step in rewrite_steps(w):
                    graph.add_edge(w, step)
        for component in nx.connected_components(graph):
            reduced = {reduce_word(w) for w in component}
            assert len(reduced) == 1
            assert reduced.pop() in component
            assert sum(1 for w in component if is_reduced(w)) == 1

    def test_confluence_on_paper_quiver(self):
        """Test composable zigzags of length at most 6 over n = 2 reduce consistently"""
        q = paper_quiver(2)
        moves = {v: [] for v in q.vertices}
        for arrow in q.arrows:
            moves[arrow.source].append((Letter(arrow.name), arrow.target))
        for name in paper_sigma(2):
            arrow = q.arrows[q.arrow_index(name)]
            moves[arrow.target].append((Letter(name, True), arrow.source))
        graph = nx.Graph()
        frontier = [(v, v, ()) for v in q.vertices]
        for _ in range(7):
            grown = []
            for start, end, letters in frontier:
                w = _word(start, end, *letters)
                graph.add_node(w)
                for step in rewrite_steps(w):
                    graph.add_edge(w, step)
                grown += [(start, nxt, letters + (letter,)) for letter, nxt in moves[end]]
            frontier = grown
        for component in nx.connected_components(graph):
            reduced = {reduce_word(w) for w in component}
            assert len(reduced) == 1
            assert sum(1 for w in component if is_reduced(w)) == 1


class TestLocalisation:
    """Tests for hom-sets of C[Σ⁻¹]"""

    def test_hom_x_z(self):
        """Test the zigzags x → z for n = 2"""
        cat = LocalisedCategory(paper_quiver(2), paper_sigma(2))
        result = cat.localised_hom("x", "z")
        assert result.complete
        assert [w.label for w in result.words] == ["tau1·sigma1^-1", "tau2·sigma2^-1"]

    def test_hom_x_x(self):
        """Test only the identity survives at x"""
        cat = LocalisedCategory(paper_quiver(2), paper_sigma(2))
        assert [w.label for w in cat.hom("x", "x")] == ["id_x"]

    def test_hom_between_ys(self):
        """Test y1 → y2 through x"""
        cat = LocalisedCategory(paper_quiver(2), paper_sigma(2))
        assert [w.label for w in cat.hom("y1", "y2")] == ["sigma2^-1·sigma1"]

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_hom_count_grows_with_n(self, n):
        """Test |Hom(x, z)| = n after localising"""
        cat = LocalisedCategory(paper_quiver(n), paper_sigma(n))
        assert len(cat.hom("x", "z")) == n
        assert cat.is_complete()

    def test_composition_reduces(self):
        """Test composing a word with its inverse gives the identity"""
        cat = LocalisedCategory(paper_quiver(1), paper_sigma(1))
        sigma = cat.hom("y1", "x")[0]
        inverse = cat.hom("x", "y1")[0]
        assert cat.compose(sigma, inverse) == cat.identity("x")
        assert cat.compose(inverse, sigma) == cat.identity("y1")

    def test_loop_is_incomplete(self):
        """Test inverting a loop never stabilises"""
        cat = LocalisedCategory(loop_quiver(), ["l"], length_bound=4)
        assert not cat.localised_hom("a", "a").complete
        assert not cat.is_complete()
        with pytest.raises(IncompleteLocalisationError):
            cat.hom("a", "a")

    def test_bound_override(self):
        """Test a short bound truncates Hom(x, z)"""
        cat = LocalisedCategory(paper_quiver(2), paper_sigma(2))
        result = localised_hom(cat, "x", "z", length_bound=1)
        assert not result.complete
        assert result.words == ()

    def test_zero_bound_rejected(self):
        """Test an explicit zero bound is refused instead of defaulted"""
        with pytest.raises(ValueError, match="at least 1"):
            LocalisedCategory(paper_quiver(1), paper_sigma(1), length_bound=0)
        cat = LocalisedCategory(paper_quiver(1), paper_sigma(1))
        with pytest.raises(ValueError):
            localised_hom(cat, "x", "z", length_bound=0)

    def test_unknown_sigma_arrow(self):
        """Test Σ must name existing arrows"""
        with pytest.raises(QuiverFormatError, match="unknown arrow"):
            LocalisedCategory(paper_quiver(1), ["sigma9"])

    def test_empty_sigma_matches_paths(self):
        """Test localising at nothing keeps the path hom-sets"""
        q = chain_quiver()
        cat = LocalisedCategory(q, [])
        paths = PathCategory(q)
        for a in q.vertices:
            for b in q.vertices:
                assert len(cat.hom(a, b)) == len(paths.hom(a, b))

    def test_localisation_functor(self):
        """Test paths map to forward words"""
        q = paper_quiver(1)
        functor = LocalisationFunctor(PathCategory(q), LocalisedCategory(q, paper_sigma(1)))
        word = functor.on_morphism(arrow_path(q, "tau1"))
        assert word.label == "tau1"
        assert functor.on_object("z") == "z"
        assert localisation_functor(identity_path("x")) == functor.on_morphism(identity_path("x"))
        assert localisation_functor(identity_path("x")).label == "id_x"


class TestQuiverDocuments:
    """Tests for reading and writing quiver documents"""

    def test_round_trip(self):
        """Test a document rebuilds the same quiver"""
        q = paper_quiver(2)
        text = quiver_to_document(q, paper_sigma(2)).model_dump_json()
        parsed, sigma = parse_quiver_document(text)
        assert parsed == q
        assert sigma == paper_sigma(2)

    def test_bundled_documents(self):
        """Test the bundled quivers load"""
        q, sigma = load_quiver_document(os.path.join(QUIVER_DIR, "paper_quiver_2.json"))
        assert q == paper_quiver(2)
        assert sigma == ("sigma1", "sigma2")
        chain, chain_sigma = load_quiver_document(os.path.join(QUIVER_DIR, "chain.json"))
        assert chain.vertices == ("a", "b", "c")
        assert chain_sigma == ("f",)

    def test_malformed_json(self):
        """Test JSON errors report a line"""
        with pytest.raises(QuiverFormatError, match="line 1"):
            parse_quiver_document("{not json")

    def test_missing_field(self):
        """Test schema errors report their location"""
        text = json.dumps({"vertices": ["a"], "arrows": [{"name": "f", "tgt": "a"}]})
        with pytest.raises(QuiverFormatError, match=r"arrows\.0\.src"):
            parse_quiver_document(text)

    def test_unknown_sigma_in_document(self):
        """Test Σ is validated against the arrows"""
        text = json.dumps({"vertices": ["a"], "arrows": [], "sigma": ["f"]})
        with pytest.raises(QuiverFormatError, match=r"sigma\[0\]: unknown arrow"):
            parse_quiver_document(text)

    def test_missing_file(self, tmp_path):
        """Test a missing file is reported"""
        with pytest.raises(QuiverFormatError, match="file not found"):
            load_quiver_document(tmp_path / "absent.json")


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
