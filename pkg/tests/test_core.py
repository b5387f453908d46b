from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from copacetic.core import (
    INFINITE,
    STD,
    TRIPLE,
    C4Coloring,
    Embedding,
    Forest,
    Structure,
    SubsetHandle,
    TheoryVariant,
    ball_boundary,
    path_hull,
    set_distance,
    tree_distance,
    unique_path,
)
from copacetic.errors import StructureError, UnknownIdentifier

from .strategies import forests


def path_abc():
    return Forest("abc", [("a", "b", 1), ("b", "c", 2)])


class TestTheoryVariant:
    def test_named_instances(self):
        assert (STD.k, STD.capacities) == (2, (1, 2))
        assert (TRIPLE.k, TRIPLE.capacities) == (3, (1, 1, 1))
        assert str(STD) == "k=2 cap=1,2"

    @pytest.mark.parametrize("k,caps", [(1, (1,)), (2, (1,)), (2, (0, 1)), (3, (1, 1, -1))])
    def test_rejects_bad(self, k, caps):
        with pytest.raises(ValueError):
            TheoryVariant(k, caps)

    def test_smallest_other(self):
        assert STD.smallest_other(1) == 2
        assert STD.smallest_other(2) == 1
        assert TRIPLE.smallest_other(3) == 1


class TestForest:
    def test_rejects_cycle(self):
        with pytest.raises(StructureError) as exc:
            Forest("abc", [("a", "b", 1), ("b", "c", 1), ("c", "a", 2)])
        assert exc.value.axiom == "(C2)"

    def test_rejects_self_edge_and_duplicate(self):
        with pytest.raises(StructureError) as exc:
            Forest("a", [("a", "a", 1)])
        assert exc.value.axiom == "(C1)"
        with pytest.raises(StructureError):
            Forest("ab", [("a", "b", 1), ("b", "a", 2)])

    def test_rejects_bad_color_and_unknown_endpoint(self):
        with pytest.raises(StructureError):
            Forest("ab", [("a", "b", 3)])
        with pytest.raises(UnknownIdentifier):
            Forest("a", [("a", "z", 1)])

    def test_components_and_edges(self):
        f = Forest("abcd", {("b", "a"): 1, ("c", "d"): 2})
        assert f.edges() == [("a", "b", 1), ("c", "d", 2)]
        assert f.components() == [frozenset("ab"), frozenset("cd")]

    def test_equality_ignores_insertion_order(self):
        f1 = Forest("abc", [("a", "b", 1), ("b", "c", 2)])
        f2 = Forest("cba", [("c", "b", 2), ("b", "a", 1)])
        assert f1 == f2 and hash(f1) == hash(f2)


class TestGeometry:
    def test_tree_distance_examples(self):
        assert tree_distance(path_abc(), "a", "c") == 2
        assert tree_distance(Forest("uv"), "u", "v") is INFINITE
        star = Forest("sxy", [("s", "x", 1), ("s", "y", 2)])
        assert tree_distance(star, "x", "y") == 2
        assert tree_distance(star, "x", "x") == 0

    def test_infinite_compares_above_integers(self):
        assert INFINITE > 10**9 and not INFINITE < 3 and INFINITE == INFINITE

    def test_unique_path_examples(self):
        f = path_abc()
        assert unique_path(f, "a", "a") == ["a"]
        assert unique_path(f, "a", "c") == ["a", "b", "c"]
        assert unique_path(Forest("uv"), "u", "v") is None
        with pytest.raises(UnknownIdentifier):
            unique_path(f, "a", "zz")

    def test_ball_boundary_examples(self):
        assert ball_boundary(Forest("a"), "a", 1) == frozenset()
        f = Forest(["o", "u", "o2"], [("o", "u", 1), ("u", "o2", 1)])
        assert ball_boundary(f, "u", 1) == {"o", "o2"}
        g = Forest(["v", "o", "w1", "w2"], [("v", x, 2) for x in ("o", "w1", "w2")])
        assert ball_boundary(g, "v", 2) == {"o", "w1", "w2"}
        with pytest.raises(ValueError):
            ball_boundary(g, "v", 3)

    def test_path_hull_and_set_distance(self):
        f = Forest("abcdxy", [("a", "b", 1), ("b", "c", 1), ("c", "d", 2), ("x", "y", 1)])
        assert path_hull(f, {"a", "d", "x"}) == set("abcdx")
        assert set_distance(f, {"a"}, {"c", "d"}) == 2
        assert set_distance(f, {"a"}, {"y"}) is INFINITE

    @settings(max_examples=60, deadline=None)
    @given(forests(max_vertices=10))
    def test_triangle_inequality_with_equality_on_path(self, f):
        vs = sorted(f.vertices)
        for u, v, w in itertools.product(vs, repeat=3):
            duw = tree_distance(f, u, w)
            if duw is INFINITE or tree_distance(f, u, v) is INFINITE:
                continue
            total = tree_distance(f, u, v) + tree_distance(f, v, w)
            assert duw <= total
            assert (duw == total) == (v in unique_path(f, u, w))

    @settings(max_examples=60, deadline=None)
    @given(forests(max_vertices=10))
    def test_unique_path_is_a_simple_edge_path(self, f):
        for u, v in itertools.combinations(sorted(f.vertices), 2):
            p = unique_path(f, u, v)
            if p is None:
                continue
            assert len(set(p)) == len(p)
            assert all(f.color(x, y) is not None for x, y in zip(p, p[1:]))

    @settings(max_examples=60, deadline=None)
    @given(forests(max_vertices=10, k=3))
    def test_boundaries_of_distinct_colors_are_disjoint(self, f):
        for v in f.vertices:
            bs = [ball_boundary(f, v, i) for i in range(1, f.k + 1)]
            for x, y in itertools.combinations(bs, 2):
                assert not x & y


class TestStructure:
    def test_missing_rho_is_c3(self):
        with pytest.raises(StructureError) as exc:
            Structure(Forest("ab"), ["p"], {"p": {"a": 1}})
        assert exc.value.axiom == "(C3)"

    def test_strict_mode_rejects_c4(self):
        f = Forest(["u", "a1", "a2"], [("u", "a1", 1), ("u", "a2", 1)])
        rho = {"b": {"u": 2, "a1": 1, "a2": 1}}
        Structure(f, ["b"], rho)  # lenient by default
        with pytest.raises(StructureError) as exc:
            Structure(f, ["b"], rho, strict=True)
        assert exc.value.axiom == "(C4)"

    def test_sorts_are_disjoint(self):
        with pytest.raises(StructureError):
            Structure(Forest("a"), ["a"], {"a": {"a": 1}})

    def test_handle_and_restrict(self):
        s = Structure(path_abc(), ["p"], {"p": {"a": 1, "b": 2, "c": 1}})
        h = s.handle(["a", "p", "b"])
        assert h == SubsetHandle({"a", "b"}, {"p"})
        r = s.restrict(h)
        assert r.forest.edges() == [("a", "b", 1)] and r.row("p") == {"a": 1, "b": 2}
        with pytest.raises(UnknownIdentifier):
            s.handle(["q"])

    def test_images(self):
        f = Forest(["a", "n1", "n2", "m1", "m2"], [("a", "n1", 1), ("a", "n2", 1), ("a", "m1", 2), ("a", "m2", 2)])
        s = Structure(f, ["b"], {"b": {"a": 1, "n1": 1, "n2": 2, "m1": 2, "m2": 2}})
        assert s.images("b", "a", 1) == ("n1",)
        assert s.images("b", "a", 2) == ("m1", "m2")

    def test_fresh_identifiers_avoid_both_sorts(self):
        s = Structure(Forest(["n0", "n1"]), ["n2"], {"n2": {"n0": 1, "n1": 1}})
        assert s.fresh_vertex() not in {"n0", "n1", "n2"}


class TestC4Coloring:
    def test_merge_and_restrict(self):
        c = C4Coloring({"a": 1, "b": 2})
        assert c.restrict({"a"}) == C4Coloring({"a": 1})
        assert c.merged({"c": 1}).domain == {"a", "b", "c"}
        with pytest.raises(ValueError):
            c.merged({"a": 2})


class TestEmbedding:
    def test_identity_is_valid(self):
        s = Structure(path_abc(), ["p"], {"p": {"a": 1, "b": 2, "c": 1}})
        e = Embedding({v: v for v in s.vertices}, {"p": "p"})
        assert e.is_valid(s, s)

    def test_detects_broken_edge_and_rho(self):
        s = Structure(path_abc(), ["p"], {"p": {"a": 1, "b": 2, "c": 1}})
        swap = Embedding({"a": "b", "b": "a", "c": "c"}, {"p": "p"})
        problems = swap.problems(s, s)
        assert any("edge relation" in p for p in problems)
        assert any("rho" in p for p in problems)
