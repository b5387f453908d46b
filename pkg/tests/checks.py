"""Scalable property checks shared by the unit tests and the acceptance run.

Each function runs one family of checks on ``count`` generated instances
and returns a small summary dict; any failure raises ``AssertionError``
with the offending seed in the message.  Unit tests call them at small
scale, the acceptance module at full scale.
"""

from __future__ import annotations

import itertools
import random

import numpy as np

from copacetic.axioms import check_c4_coloring
from copacetic.coloring import brute_force_colorings, extend_coloring, interpolate_colorings, path_coloring
from copacetic.core import STD, TRIPLE, Forest

from . import oracles
from .builders import random_path_closed, random_tree_forest, sample_coloring, spider_instance


def _adj(f):
    return {v: dict(f._adj[v]) for v in f._adj}


def check_extension(count: int, seed: int = 0, max_vertices: int = 40, small_every: int = 2) -> dict:
    """Extension of random domain colorings; every ``small_every``-th instance has at most 12 vertices."""
    stats = {"instances": 0, "small": 0, "extension_sets": 0}
    for idx in range(count):
        rng = random.Random(f"{seed}-{idx}")
        variant = STD if idx % 3 else TRIPLE
        small = idx % small_every == 0
        n = rng.randint(1, 12 if small else max_vertices)
        if small and variant is TRIPLE:
            n = min(n, 9)
        f = random_tree_forest(rng, n, variant.k)
        domain = random_path_closed(rng, f)
        col = sample_coloring(rng, f, domain, variant)
        out = extend_coloring(f, domain, col, variant)
        adj = _adj(f)
        where = f"seed={seed} instance={idx}"
        assert set(out) == set(f.vertices), where
        assert {v: out[v] for v in domain} == col, where
        for v in f.vertices:
            if v in domain:
                continue
            for w, c in adj[v].items():
                if w in domain:
                    assert out[v] != c, f"{where}: {v} is an image of {w}"
        assert check_c4_coloring(f, out, variant).ok, where
        assert oracles.coloring_ok(adj, out, variant), where
        if len(f) <= 12:
            neighbor_ok = lambda c: all(  # noqa: E731
                c[v] != ec for v in f.vertices if v not in domain for w, ec in adj[v].items() if w in domain
            )
            lib = [c for c in brute_force_colorings(f, col, variant) if neighbor_ok(c)]
            ref = [c for c in oracles.valid_colorings(f, variant, col) if neighbor_ok(c)]
            assert lib and ref, where
            assert sorted(tuple(sorted(c.items())) for c in lib) == sorted(tuple(sorted(c.items())) for c in ref), where
            assert dict(out) in ref, where
            stats["small"] += 1
            stats["extension_sets"] += len(ref)
        stats["instances"] += 1
    return stats


def check_interpolation(count: int, seed: int = 0, sizes=(2, 3, 4), max_vertices: int = 200) -> dict:
    """Interpolation on spider forests; every fourth instance uses equal legs."""
    stats = {"instances": 0, "largest": 0}
    for n in sizes:
        for idx in range(count):
            rng = random.Random(f"{seed}-{n}-{idx}")
            variant = STD if idx % 2 else TRIPLE
            f, targets = spider_instance(rng, n, variant, max_vertices, equal_legs=idx % 4 == 0)
            assert len(f) <= max_vertices
            adj = _adj(f)
            where = f"seed={seed} n={n} instance={idx}"
            union, col = interpolate_colorings(f, targets, variant)
            assert set(col) == set(union), where
            for vs, tc in targets:
                assert vs <= union and {v: col[v] for v in vs} == tc, where
            assert oracles.connected_within(adj, union), where
            assert check_c4_coloring(f, col, variant).ok, where
            assert oracles.coloring_ok(adj, col, variant), where
            stats["instances"] += 1
            stats["largest"] = max(stats["largest"], len(f))
    return stats


def _bare_path(pattern):
    names = [f"o{j}" for j in range(len(pattern) + 1)]
    return names, Forest(names, [(names[j], names[j + 1], c) for j, c in enumerate(pattern)], TRIPLE.k)


def _call(pattern, c0, cn):
    names, f = _bare_path(pattern)
    out = path_coloring(f, {names[0]}, {names[-1]}, {names[0]: c0}, {names[-1]: cn}, TRIPLE)
    assert set(out) == set(names)
    assert out[names[0]] == c0 and out[names[-1]] == cn
    return tuple(out[v] for v in names)


_GRIDS: dict[int, np.ndarray] = {}


def _interior_grid(n):
    """Every interior assignment of a path with ``n`` edges, in base-3 order."""
    if n not in _GRIDS:
        _GRIDS[n] = np.array(list(itertools.product((1, 2, 3), repeat=n - 1)), dtype=np.int8)
    return _GRIDS[n]


def _valid_interiors(pattern, c0, cn):
    """Mask over :func:`_interior_grid` of the assignments respecting capacity one, by full enumeration."""
    n = len(pattern)
    grid = _interior_grid(n)
    colors = np.hstack([np.full((len(grid), 1), c0, dtype=np.int8), grid, np.full((len(grid), 1), cn, dtype=np.int8)])
    bad = np.zeros(len(grid), dtype=bool)
    for j in range(1, n):
        if pattern[j - 1] != pattern[j]:
            continue
        c = pattern[j - 1]
        bad |= (colors[:, j - 1] == c) & (colors[:, j + 1] == c)
    return ~bad


def _grid_index(interior):
    idx = 0
    for x in interior:
        idx = 3 * idx + (x - 1)
    return idx


def check_triple_paths(full_calls=range(5, 9), enumerated=range(5, 9), keyed=range(9, 13), samples: int = 300, seed: int = 0) -> dict:
    """Validate the three-color path rule on every edge-color pattern.

    * lengths in ``full_calls``: the routine runs on every pattern and every
      pair of endpoint colors; outputs are checked with the literal capacity
      rule, and for lengths in ``enumerated`` also against the full set of
      valid interior assignments.
    * lengths in ``keyed``: one call per (first edge, last edge, endpoint
      colors); sampled full calls confirm the output depends only on that
      key, and the keyed output is checked against every pattern at once.
    """
    stats = {"calls": 0, "patterns": 0, "interior_sets": 0, "lengths": []}
    ends = list(itertools.product((1, 2, 3), repeat=2))
    for n in full_calls:
        stats["lengths"].append(n)
        for pattern in itertools.product((1, 2, 3), repeat=n):
            _, f = _bare_path(pattern)
            adj = _adj(f)
            for c0, cn in ends:
                out = _call(pattern, c0, cn)
                stats["calls"] += 1
                assert oracles.coloring_ok(adj, dict(zip(sorted(adj, key=lambda v: int(v[1:])), out)), TRIPLE), (pattern, c0, cn)
                if n in enumerated:
                    valid = _valid_interiors(pattern, c0, cn)
                    assert valid.any() and valid[_grid_index(out[1:-1])], (pattern, c0, cn)
                    stats["interior_sets"] += 1
            stats["patterns"] += 1
    rng = random.Random(seed)
    for n in keyed:
        stats["lengths"].append(n)
        table = {}
        for e1, en in itertools.product((1, 2, 3), repeat=2):
            middle = (1,) * (n - 2)
            for c0, cn in ends:
                table[(e1, en, c0, cn)] = _call((e1, *middle, en), c0, cn)
                stats["calls"] += 1
        for _ in range(samples):
            pattern = tuple(rng.randint(1, 3) for _ in range(n))
            c0, cn = rng.choice(ends)
            assert _call(pattern, c0, cn) == table[(pattern[0], pattern[-1], c0, cn)], (pattern, c0, cn)
            stats["calls"] += 1
        patterns = np.array(list(itertools.product((1, 2, 3), repeat=n)), dtype=np.int8)
        for (e1, en, c0, cn), colors in table.items():
            rows = patterns[(patterns[:, 0] == e1) & (patterns[:, -1] == en)]
            bad = oracles.path_pattern_violations(rows, colors)
            assert not bad.any(), (n, e1, en, c0, cn, rows[bad][:1])
        stats["patterns"] += len(patterns)
    return stats


# -- closure ------------------------------------------------------------------


def random_pair(rng, variant=None, max_base: int = 4, cross_images: int = 3):
    """A fuzzed independent pair: ``(structure, M, A, B)`` with ``A``, ``B`` closed and meeting in ``M``."""
    from copacetic.core import SubsetHandle
    from copacetic.generate import Profile, extend_over, join_over, random_instance

    variant = variant or rng.choice([STD, TRIPLE])
    m = random_instance(rng, Profile(vertices=(0, max_base), params=(0, 2), variant=variant))
    m = m.renamed({v: "m" + v for v in m.vertices} | {p: "m" + p for p in m.params})
    x = extend_over(rng, m, "a")
    y = extend_over(rng, m, "b")
    pair = join_over(rng, m, x, y, cross_images)
    return pair.structure, SubsetHandle(m.vertices, m.params), pair.left, pair.right


def check_pairs(count: int, seed: int = 0, oracle_limit: int = 12) -> dict:
    """Two-sided closure equality for fuzzed independent pairs.

    Besides the report of :func:`pair_structure`, the closures are
    recomputed by subset enumeration whenever the structure is small enough.
    """
    from copacetic.axioms import check_closed
    from copacetic.closure import closure_of, pair_structure
    from copacetic.independence import independent

    stats = {"instances": 0, "nontrivial": 0, "oracle": 0}
    for idx in range(count):
        rng = random.Random(f"pair-{seed}-{idx}")
        s, m, a, b = random_pair(rng)
        where = f"seed={seed} instance={idx}"
        assert check_closed(a, s).ok and check_closed(b, s).ok, where
        assert independent(s, m, a, b).independent, where
        a_star, b_star, report = pair_structure(s, m, a, b)
        assert not report.hypothesis_failures, (where, report.hypothesis_failures)
        assert report.ok, (where, report.problems)
        assert closure_of(s, a | b) == a_star | b_star, where
        if a_star != a or b_star != b:
            stats["nontrivial"] += 1
        if len(s.forest) <= oracle_limit:
            joint = a.p | b.p
            assert oracles.closure_by_enumeration(s, a.o, joint) == set(a_star.o), where
            assert oracles.closure_by_enumeration(s, b.o, joint) == set(b_star.o), where
            assert oracles.closure_by_enumeration(s, a.o | b.o, joint) == set(a_star.o | b_star.o), where
            stats["oracle"] += 1
        stats["instances"] += 1
    return stats


# -- oracle agreement ------------------------------------------------------------


def _mutate(rng, s):
    """A possibly defective copy of ``s``: extra edges (maybe closing cycles), recolored or deleted rho entries."""
    from copacetic.core import Structure

    vs = sorted(s.vertices)
    adj = {v: dict(s.forest._adj[v]) for v in vs}
    for _ in range(rng.randint(0, 2)):
        u, v = rng.choice(vs), rng.choice(vs)
        if u != v and v not in adj[u]:
            adj[u][v] = adj[v][u] = rng.randint(1, s.variant.k)
    f = Forest._from_adj(adj, s.variant.k)
    rho = {b: dict(s.row(b)) for b in s.params}
    for b in sorted(rho):
        for v in vs:
            r = rng.random()
            if r < 0.15:
                rho[b][v] = rng.randint(1, s.variant.k)
            elif r < 0.18:
                del rho[b][v]
    return Structure(f, s.params, rho, s.variant, check=False)


def oracle_corpus(count: int = 300, seed: int = 0):
    """``count`` structures of at most 12 vertices and 3 params; every third one is mutated and may be defective."""
    from copacetic.generate import Profile, random_instance

    out = []
    for idx in range(count):
        rng = random.Random(f"corpus-{seed}-{idx}")
        variant = STD if idx % 2 else TRIPLE
        s = random_instance(rng, Profile(vertices=(0, 12), params=(0, 3), variant=variant))
        mutated = idx % 3 == 2 and len(s.forest) > 0
        out.append((_mutate(rng, s) if mutated else s, mutated, rng))
    return out


def check_oracle_agreement(count: int = 300, seed: int = 0, subsets: int = 4) -> dict:
    from copacetic.axioms import check_closed, verify_copacetic
    from copacetic.closure import closure_of
    from copacetic.core import SubsetHandle

    stats = {"instances": 0, "defective": 0, "subsets": 0, "closures": 0}
    for idx, (s, mutated, rng) in enumerate(oracle_corpus(count, seed)):
        where = f"seed={seed} instance={idx}"
        assert len(s.forest) <= 12 and len(s.params) <= 3, where
        found = verify_copacetic(s).axioms()
        assert found == oracles.copacetic_violations(s), (where, found)
        stats["instances"] += 1
        if found:
            stats["defective"] += 1
        if "(C1)" in found or "(C2)" in found or "(C3)" in found:
            continue  # subsets and closures presuppose a forest with total rows
        for _ in range(subsets):
            o = {v for v in sorted(s.vertices) if rng.random() < 0.4}
            p = {b for b in sorted(s.params) if rng.random() < 0.5}
            report = check_closed(SubsetHandle(o, p), s)
            cond_i, cond_ii = oracles.is_closed(s, o, p)
            assert (not report.of("(i)")) == cond_i and (not report.of("(ii)")) == cond_ii, where
            got = closure_of(s, SubsetHandle(o, p))
            assert set(got.o) == oracles.closure_by_enumeration(s, o, p) and got.p == p, where
            stats["subsets"] += 1
            stats["closures"] += 1
    return stats


# -- constructions --------------------------------------------------------------


def _copacetic(s) -> bool:
    from copacetic.axioms import verify_copacetic

    ok = verify_copacetic(s).ok
    if len(s.forest) <= 30:
        assert ok == (not oracles.copacetic_violations(s))
    return ok


def _instance(rng, lo=1, hi=14, params=(0, 3)):
    from copacetic.generate import Profile, random_instance

    return random_instance(rng, Profile(vertices=(lo, hi), params=params, variant=rng.choice([STD, TRIPLE])))


def check_add_closure_image(count: int, seed: int = 0) -> dict:
    from copacetic.construct import add_closure_image
    from copacetic.errors import CapacityError

    stats = {"applied": 0, "refused": 0}
    done = 0
    idx = 0
    while done < count:
        rng = random.Random(f"star-{seed}-{idx}")
        idx += 1
        s = _instance(rng, params=(1, 3))
        b = rng.choice(sorted(s.params))
        a = rng.choice(sorted(s.vertices))
        i = rng.choice(list(s.variant.colors))
        before = s.images(b, a, i)
        where = f"seed={seed} instance={idx - 1}"
        if len(before) >= s.variant.cap(i):
            try:
                add_closure_image(s, b, a, i)
            except CapacityError:
                stats["refused"] += 1
                continue
            raise AssertionError(f"{where}: capacity breach not refused")
        out = add_closure_image(s, b, a, i)
        (new,) = set(out.vertices) - set(s.vertices)
        assert out.images(b, a, i) == tuple(sorted((*before, new))), where
        assert out.forest.neighbors(new) == {a: i}, where
        assert out.row(b)[new] == i and all(out.row(p)[new] != i for p in s.params - {b}), where
        assert _copacetic(out), where
        stats["applied"] += 1
        done += 1
    return stats


def check_free_amalgam(count: int, seed: int = 0) -> dict:
    from copacetic.axioms import check_closed
    from copacetic.closure import closure_of
    from copacetic.construct import free_amalgam
    from copacetic.core import SubsetHandle
    from copacetic.generate import extend_over

    stats = {"instances": 0, "new_vertices": 0}
    for idx in range(count):
        rng = random.Random(f"amalgam-{seed}-{idx}")
        a = _instance(rng)
        seed_h = SubsetHandle(
            {v for v in sorted(a.vertices) if rng.random() < 0.25}, {p for p in sorted(a.params) if rng.random() < 0.5}
        )
        c = closure_of(a, seed_h)
        base = a.restrict(c)
        b = extend_over(rng, base, "x", max_new=6, max_params=0)
        # give some of B's new names a clash with A to exercise renaming
        if rng.random() < 0.3 and len(b.forest) > len(base.forest):
            clash = sorted(set(b.vertices) - c.o)[0]
            target = next((v for v in sorted(a.vertices) if v not in c.o), None)
            if target is not None and target not in b.vertices:
                b = b.renamed({clash: target})
        out, emb_a, emb_b = free_amalgam(a, c, b)
        where = f"seed={seed} instance={idx}"
        assert _copacetic(out), where
        assert not emb_a.problems(a, out) and not emb_b.problems(b, out), where
        assert all(emb_a.vertex_map[v] == v == emb_b.vertex_map[v] for v in c.o), where
        a_side = {emb_a.vertex_map[v] for v in a.vertices} - c.o
        b_side = {emb_b.vertex_map[v] for v in b.vertices} - c.o
        assert not a_side & b_side, where
        assert len(out.forest) == len(a.forest) + len(b_side), where
        for u, v, _ in out.forest.edges():
            assert not ((u in a_side and v in b_side) or (u in b_side and v in a_side)), f"{where}: cross edge {u}-{v}"
        a_img = SubsetHandle(a_side | c.o, a.params)
        b_img = SubsetHandle(b_side | c.o, b.params)
        assert check_closed(a_img, out).ok and check_closed(b_img, out).ok, where
        stats["instances"] += 1
        stats["new_vertices"] += len(b_side)
    return stats


def _far_targets(rng, s, n):
    """Up to ``n`` small connected sets pairwise farther apart than ``2**n`` (fewer if none fit)."""
    from copacetic.core import set_distance

    chosen = []
    vs = sorted(s.vertices)
    for _ in range(4 * n):
        if len(chosen) == n:
            break
        v = rng.choice(vs)
        group = {v}
        nbrs = sorted(s.forest.neighbors(v))
        if nbrs and rng.random() < 0.5:
            group.add(rng.choice(nbrs))
        group = frozenset(group)
        if all(set_distance(s.forest, group, g) > 2**n for g in chosen):
            chosen.append(group)
    out = []
    for group in chosen:
        out.append((group, sample_coloring(rng, s.forest, group, s.variant)))
    return out


def check_introduce_parameter(count: int, seed: int = 0) -> dict:
    from copacetic.construct import introduce_parameter
    from copacetic.errors import PreconditionError

    stats = {"instances": 0, "targets": 0, "refused": 0}
    for idx in range(count):
        rng = random.Random(f"param-{seed}-{idx}")
        s = _instance(rng, 1, 60)
        n = rng.randint(0, 3)
        targets = _far_targets(rng, s, n)
        where = f"seed={seed} instance={idx}"
        out = introduce_parameter(s, targets)
        (p,) = out.params - s.params
        row = out.row(p)
        for group, col in targets:
            assert {v: row[v] for v in group} == dict(col), where
        assert _copacetic(out), where
        assert out.forest == s.forest and all(out.row(q) == s.row(q) for q in s.params), where
        if len(targets) >= 2:
            # squeezing two targets together must be refused
            g0 = targets[0][0]
            v = next(iter(g0))
            nbrs = sorted(s.forest.neighbors(v))
            if nbrs:
                w = nbrs[0]
                try:
                    introduce_parameter(s, [({v}, {v: 1}), ({w}, {w: 1})])
                except PreconditionError:
                    stats["refused"] += 1
                else:
                    raise AssertionError(f"{where}: adjacent targets accepted")
        stats["instances"] += 1
        stats["targets"] += len(targets)
    return stats


# -- forge ----------------------------------------------------------------------


def _distances_from(f, source):
    """BFS distances written out directly over the raw adjacency."""
    dist = {source: 0}
    frontier = [source]
    while frontier:
        nxt = []
        for x in frontier:
            for y in f._adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    nxt.append(y)
        frontier = nxt
    return dist


def check_distances_preserved(before, after, sources=None) -> int:
    """Compare distances among ``before``'s vertices in both forests; returns the number of pairs compared."""
    old = sorted(before.vertices)
    assert set(old) <= set(after.vertices)
    pairs = 0
    for src in sources if sources is not None else old:
        d0 = _distances_from(before.forest, src)
        d1 = _distances_from(after.forest, src)
        for v in old:
            assert d0.get(v) == d1.get(v), (src, v, d0.get(v), d1.get(v))
        pairs += len(old)
    return pairs


def check_forge(steps: int = 1000, seed: int = 0, every: int = 100, depth: int = 1, sample: int = 40) -> dict:
    from copacetic.axioms import verify_copacetic
    from copacetic.construct import complete_budgeted, forge, iter_forge
    from copacetic.core import Structure
    from copacetic.serialization import serialize_structure

    stats = {"checkpoints": 0, "vertices": 0, "params": 0, "pairs": 0}
    first = None
    final = None
    for i, s in enumerate(iter_forge(Structure.empty(), steps, seed), start=1):
        if i % every == 0 or i == steps:
            assert verify_copacetic(s).ok, f"not copacetic after {i} steps"
            stats["checkpoints"] += 1
            if first is None:
                first = s
        final = s
    again = forge(Structure.empty(), steps, seed)
    assert serialize_structure(again) == serialize_structure(final)
    # all pairs at the first checkpoint, sampled sources on the final structure
    stats["pairs"] += check_distances_preserved(first, complete_budgeted(first, depth))
    rng = random.Random(seed)
    done = complete_budgeted(final, depth)
    assert verify_copacetic(done).ok
    old = sorted(final.vertices)
    stats["pairs"] += check_distances_preserved(final, done, rng.sample(old, min(sample, len(old))))
    stats["vertices"] = len(final.forest)
    stats["params"] = len(final.params)
    stats["completed_vertices"] = len(done.forest)
    return stats


# -- independence -----------------------------------------------------------------


def _random_handle(rng, s, pv, pp):
    from copacetic.core import SubsetHandle

    return SubsetHandle({v for v in sorted(s.vertices) if rng.random() < pv}, {p for p in sorted(s.params) if rng.random() < pp})


def independence_instance(rng):
    """Half fuzzed independent pairs (sometimes perturbed), half arbitrary subsets of random structures."""
    from copacetic.core import SubsetHandle

    if rng.random() < 0.5:
        s, m, a, b = random_pair(rng)
        if rng.random() < 0.3:
            extra = rng.choice(sorted(s.vertices))
            a = a | SubsetHandle({extra})
        return s, m, a, b
    s = _instance(rng, 1, 12)
    return s, _random_handle(rng, s, 0.15, 0.3), _random_handle(rng, s, 0.3, 0.4), _random_handle(rng, s, 0.3, 0.4)


def check_independence(count: int, seed: int = 0, oracle_limit: int = 12, budget_every: int = 5) -> dict:
    from copacetic.core import SubsetHandle
    from copacetic.independence import independent

    stats = {"instances": 0, "independent": 0, "oracle": 0, "budgeted": 0}
    for idx in range(count):
        rng = random.Random(f"indep-{seed}-{idx}")
        s, c, a, b = independence_instance(rng)
        where = f"seed={seed} instance={idx}"
        budget = 1 if idx % budget_every == 0 and len(s.params) <= 3 else 0
        stats["budgeted"] += bool(budget)
        ab = independent(s, c, a, b, budget)
        ba = independent(s, c, b, a, budget)
        assert ab.independent == ba.independent, f"{where}: symmetry"
        assert independent(s, c, a, c, budget).independent, f"{where}: base triviality"
        assert independent(s, c, c, b, budget).independent, f"{where}: base triviality"
        if ab.independent:
            stats["independent"] += 1
            for _ in range(3):
                a2 = SubsetHandle({v for v in sorted(a.o) if rng.random() < 0.6}, {p for p in sorted(a.p) if rng.random() < 0.6})
                b2 = SubsetHandle({v for v in sorted(b.o) if rng.random() < 0.6}, {p for p in sorted(b.p) if rng.random() < 0.6})
                assert independent(s, c, a2, b2, budget).independent, f"{where}: monotonicity"
        if not budget and len(s.forest) <= oracle_limit:
            assert ab.independent == oracles.independent_by_definition(s, c, a, b), f"{where}: oracle"
            stats["oracle"] += 1
        stats["instances"] += 1
    return stats


def check_triples(count: int, seed: int = 0, depth: int = 1) -> dict:
    from copacetic.generate import random_triple
    from copacetic.triple import triple_amalgam

    stats = {"instances": 0, "nontrivial": 0, "vertices": 0}
    for idx in range(count):
        rng = random.Random(f"triple-{seed}-{idx}")
        t = random_triple(rng, rng.choice([STD, TRIPLE]))
        result = triple_amalgam(t.m, t.ab, t.ac, t.bc, t.iso, depth=depth)
        report = result.report
        where = f"seed={seed} instance={idx}"
        assert report.ok, (where, report.lines())
        if len(result.a1.forest) > len(t.m.forest) + 3:
            stats["nontrivial"] += 1
        stats["instances"] += 1
        stats["vertices"] += len(result.structure.forest)
    return stats
