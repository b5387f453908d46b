"""Amalgamating three pairwise independent pairs over a common closed base.

Given a closed structure ``M`` and pair structures ``AB``, ``A'C`` and
``BC`` in which the named parts are independent over ``M``, build one
structure containing copies ``a~``, ``b~``, ``c~`` of the parts such that
each pair of copies looks exactly like the corresponding input pair and
``a~`` is independent from ``b~ c~`` over ``M``.

The construction runs in stages:

* ``A0``: the three parts glued freely over ``M``.  A parameter's colors
  on a vertex come from whichever input pair contains both.
* ``A1``: ``A0`` plus copies of the new closure points each input pair
  adds to its two parts, hung off the same vertices as in the input.
  Colors that no input pair determines (a parameter of the third part on
  such a copy) are filled in with :func:`extend_coloring`.
* ``A2``: budgeted completion of ``A1``, which only adds pendant vertices.

The :class:`TripleReport` records each property the construction is meant
to guarantee, checked directly on the output.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .axioms import check_closed, verify_copacetic
from .closure import closure_of, pair_structure
from .coloring import extend_coloring
from .construct import complete_budgeted
from .core import Embedding, Forest, Structure, SubsetHandle
from .errors import HypothesisFailure, InvariantBreach
from .independence import _avoiding_path, independent
from .isomorphism import find_isomorphism

__all__ = ["PairData", "TripleAmalgam", "TripleReport", "triple_amalgam"]


@dataclass(frozen=True)
class PairData:
    """A structure with two distinguished closed parts, ``left`` and ``right``."""

    structure: Structure
    left: SubsetHandle
    right: SubsetHandle


@dataclass
class TripleReport:
    a0_copacetic: bool = False
    a1_copacetic: bool = False
    a2_copacetic: bool = False
    pairs_match_in_a1: dict[str, bool] = field(default_factory=dict)
    pairs_match_in_a2: dict[str, bool] = field(default_factory=dict)
    no_path_avoiding_base: bool = False
    regions_closed_in_a1: dict[str, bool] = field(default_factory=dict)
    regions_path_closed_in_a2: dict[str, bool] = field(default_factory=dict)
    final_independent: bool = False
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        flags = [self.a0_copacetic, self.a1_copacetic, self.a2_copacetic, self.no_path_avoiding_base, self.final_independent]
        for d in (self.pairs_match_in_a1, self.pairs_match_in_a2, self.regions_closed_in_a1, self.regions_path_closed_in_a2):
            flags.extend(d.values())
        return all(flags)

    def lines(self) -> list[str]:
        out = [
            f"A0 copacetic: {self.a0_copacetic}",
            f"A1 copacetic: {self.a1_copacetic}",
            f"A2 copacetic: {self.a2_copacetic}",
        ]
        out += [f"pair {k} matches its source in A1: {v}" for k, v in sorted(self.pairs_match_in_a1.items())]
        out += [f"pair {k} matches its source in A2: {v}" for k, v in sorted(self.pairs_match_in_a2.items())]
        out.append(f"no path from a~ to the b~c~ region avoids M: {self.no_path_avoiding_base}")
        out += [f"region {k} closed in A1: {v}" for k, v in sorted(self.regions_closed_in_a1.items())]
        out += [f"region {k} path-closed in A2: {v}" for k, v in sorted(self.regions_path_closed_in_a2.items())]
        out.append(f"a~ independent from b~c~ over M: {self.final_independent}")
        return out + [f"problem: {p}" for p in self.problems]


@dataclass
class TripleAmalgam:
    structure: Structure
    a1: Structure
    a0: Structure
    a_emb: Embedding
    b_emb: Embedding
    c_emb: Embedding
    report: TripleReport


class _Namer:
    def __init__(self, taken):
        self.taken = set(taken)

    def __call__(self, prefix: str, x: str) -> str:
        name = prefix + x
        while name in self.taken:
            name += "_"
        self.taken.add(name)
        return name


def _check_pair(label: str, m: Structure, mh: SubsetHandle, pair: PairData) -> None:
    s = pair.structure
    for part, h in (("left", pair.left), ("right", pair.right)):
        try:
            h.validate(s)
        except Exception as exc:
            raise HypothesisFailure(f"{label}: {part} part is not part of the structure: {exc}", step="parts") from exc
    try:
        mh.validate(s)
    except Exception as exc:
        raise HypothesisFailure(f"{label}: M is not part of the structure: {exc}", step="base") from exc
    if s.variant != m.variant:
        raise HypothesisFailure(f"{label}: variant differs from M", step="base")
    if s.restrict(mh).with_strict(m.strict) != m:
        raise HypothesisFailure(f"{label}: M is not a substructure", step="base")
    bad = verify_copacetic(s)
    if not bad.ok:
        raise HypothesisFailure(f"{label} is not copacetic: {bad.render()}", step="copacetic")
    for part, h in (("M", mh), ("left", pair.left), ("right", pair.right)):
        bad = check_closed(h, s)
        if not bad.ok:
            raise HypothesisFailure(f"{label}: {part} is not closed: {bad.render()}", step="closed")
    if not (mh <= pair.left and mh <= pair.right):
        raise HypothesisFailure(f"{label}: M is not inside both parts", step="base")
    ok, witness = independent(s, mh, pair.left, pair.right)
    if not ok:
        raise HypothesisFailure(f"{label}: parts are dependent over M", step="independence", witness=witness)


def triple_amalgam(
    m: Structure,
    ab: PairData,
    ac: PairData,
    bc: PairData,
    iso: Embedding,
    depth: int = 1,
) -> TripleAmalgam:
    """Amalgamate ``ab``, ``ac`` and ``bc`` over ``m``.

    ``ab.right`` and ``bc.left`` name the same part ``b`` (identical
    identifiers and induced structure), and ``ac.right`` and ``bc.right`` the
    same part ``c``.  ``iso`` maps ``ab.left`` onto ``ac.left`` (the part
    ``a'``), fixing ``m``.  Raises :class:`HypothesisFailure` naming the
    first unmet hypothesis.
    """
    mh = m.whole()
    for label, pair in (("AB", ab), ("AC", ac), ("BC", bc)):
        _check_pair(label, m, mh, pair)
    if ab.right != bc.left:
        raise HypothesisFailure("the b part differs between AB and BC", step="parts")
    if ac.right != bc.right:
        raise HypothesisFailure("the c part differs between AC and BC", step="parts")
    b_part, c_part = bc.left, bc.right
    if ab.structure.restrict(b_part) != bc.structure.restrict(b_part):
        raise HypothesisFailure("AB and BC induce different structures on b", step="parts")
    if ac.structure.restrict(c_part) != bc.structure.restrict(c_part):
        raise HypothesisFailure("AC and BC induce different structures on c", step="parts")
    a_struct = ab.structure.restrict(ab.left)
    a2_struct = ac.structure.restrict(ac.left)
    if iso.problems(a_struct, a2_struct) or set(iso.vertex_map.values()) != set(ac.left.o) or set(iso.param_map.values()) != set(ac.left.p):
        raise HypothesisFailure("iso is not an isomorphism of a onto a'", step="iso")
    if any(iso(x) != x for x in mh.elements):
        raise HypothesisFailure("iso does not fix M", step="iso")

    # -- names and origins ---------------------------------------------------
    namer = _Namer(mh.elements)
    origin = {"AB": {}, "AC": {}, "BC": {}}  # new id -> id in the source pair
    for x in mh.elements:
        for k in origin:
            origin[k][x] = x
    a_map, b_map, c_map = {}, {}, {}
    for x in sorted(ab.left.elements - mh.elements):
        a_map[x] = y = namer("ta_", x)
        origin["AB"][y] = x
        origin["AC"][y] = iso(x)
    for x in sorted(b_part.elements - mh.elements):
        b_map[x] = y = namer("tb_", x)
        origin["AB"][y] = x
        origin["BC"][y] = x
    for x in sorted(c_part.elements - mh.elements):
        c_map[x] = y = namer("tc_", x)
        origin["AC"][y] = x
        origin["BC"][y] = x
    for x in mh.elements:
        a_map[x] = b_map[x] = c_map[x] = x

    pairs = {"AB": ab, "AC": ac, "BC": bc}
    tilde = {
        "AB": (ab.left, a_map, ab.right, b_map),
        "AC": (ac.left, {iso(x): y for x, y in a_map.items()}, ac.right, c_map),
        "BC": (bc.left, b_map, bc.right, c_map),
    }

    def parts_of(mapping, h):
        return SubsetHandle({mapping[v] for v in h.o}, {mapping[p] for p in h.p})

    at = parts_of(a_map, ab.left)
    bt = parts_of(b_map, b_part)
    ct = parts_of(c_map, c_part)
    params = at.p | bt.p | ct.p

    # -- A0 ------------------------------------------------------------------
    adj: dict[str, dict[str, int]] = {v: {} for v in at.o | bt.o | ct.o}
    for key, (left, lmap, right, rmap) in tilde.items():
        src = pairs[key].structure
        for h, mp in ((left, lmap), (right, rmap)):
            for u, v, col in src.forest.induced(h.o).edges():
                adj[mp[u]][mp[v]] = col
                adj[mp[v]][mp[u]] = col

    def rho_from_pairs(p: str, v: str) -> int | None:
        found = None
        for key, org in origin.items():
            if p in org and v in org:
                c = pairs[key].structure._cols[org[v]][org[p]]
                if found is not None and found != c:
                    raise InvariantBreach(f"input pairs disagree on rho({p},{v})")
                found = c
        return found

    cols0 = {v: {p: rho_from_pairs(p, v) for p in params} for v in adj}
    for v, col in cols0.items():
        missing = [p for p, c in col.items() if c is None]
        if missing:
            raise InvariantBreach(f"no input pair determines rho({missing[0]},{v})")
    f0 = Forest._from_adj({v: dict(n) for v, n in adj.items()}, m.variant.k)
    a0 = Structure._assemble(f0, params, cols0, m.variant, m.strict)
    report = TripleReport()
    report.a0_copacetic = verify_copacetic(a0).ok

    # -- A1: copies of the new closure points of each pair --------------------
    regions: dict[str, SubsetHandle] = {}
    new_vertices: list[str] = []
    new_edges: list[tuple[str, str, int]] = []
    for key, (left, lmap, right, rmap) in tilde.items():
        src = pairs[key].structure
        _, _, pr = pair_structure(src, mh, left, right)
        if not pr.ok:
            raise HypothesisFailure(f"{key}: new closure points are not two-sided: {pr.problems or pr.hypothesis_failures}", step="closure")
        full = dict(lmap)
        full.update(rmap)
        for side, part in (("l", pr.a_side), ("r", pr.b_side)):
            base = left if side == "l" else right
            for x in sorted(part.o - base.o):
                full[x] = y = namer(f"n{key.lower()}{side}_", x)
                origin[key][y] = x
                new_vertices.append(y)
        for u, v, col in src.forest.induced(pr.a_side.o | pr.b_side.o).edges():
            if full[u] not in adj or full[v] not in adj:
                new_edges.append((full[u], full[v], col))
        regions[key] = SubsetHandle({full[v] for v in pr.a_side.o | pr.b_side.o}, {full[p] for p in left.p | right.p})

    try:
        f1 = f0.extended(new_vertices, new_edges)
    except Exception as exc:
        raise InvariantBreach(f"copies of the new closure points do not form a forest: {exc}") from exc
    partial = {v: dict(c) for v, c in cols0.items()}
    for v in new_vertices:
        partial[v] = {}
        for p in params:
            c = rho_from_pairs(p, v)
            if c is not None:
                partial[v][p] = c
    cols1 = {v: dict(c) for v, c in partial.items()}
    for p in sorted(params):
        dom = {v: c[p] for v, c in partial.items() if p in c}
        if len(dom) == len(partial):
            continue
        try:
            row = extend_coloring(f1, dom.keys(), dom, m.variant)
        except Exception as exc:
            raise InvariantBreach(f"cannot extend {p} over the copied closure points: {exc}") from exc
        for v in partial:
            cols1[v][p] = row[v]
    a1 = Structure._assemble(f1, params, cols1, m.variant, m.strict)
    report.a1_copacetic = verify_copacetic(a1).ok

    # -- A2 ------------------------------------------------------------------
    a2 = complete_budgeted(a1, depth)
    report.a2_copacetic = verify_copacetic(a2).ok

    # -- report ----------------------------------------------------------------
    for key, (left, lmap, right, rmap) in tilde.items():
        src = pairs[key].structure
        fixed = {lmap[x]: x for x in left.elements}
        fixed.update({rmap[x]: x for x in right.elements})
        src_region = closure_of(src, left | right, left.p | right.p)
        iso1 = find_isomorphism(a1, regions[key], src, src_region, fixed)
        report.pairs_match_in_a1[key] = iso1 is not None
        if iso1 is None:
            report.problems.append(f"pair {key}: the copied region is not isomorphic to its source")
        lt, rt = parts_of(lmap, left), parts_of(rmap, right)
        src2 = complete_budgeted(src, depth)
        iso2 = find_isomorphism(a2, closure_of(a2, lt | rt), src2, closure_of(src2, left | right), fixed)
        report.pairs_match_in_a2[key] = iso2 is not None
        if iso2 is None:
            report.problems.append(f"pair {key}: closures after completion differ from the source")
        bad = check_closed(regions[key], a1)
        report.regions_closed_in_a1[key] = bad.ok
        if not bad.ok:
            report.problems.append(f"region {key} not closed in A1: {bad.render()}")
        bad2 = check_closed(SubsetHandle(regions[key].o), a2)
        report.regions_path_closed_in_a2[key] = bad2.ok
        if not bad2.ok:
            report.problems.append(f"region {key} not path-closed in A2: {bad2.render()}")

    far = regions["BC"].o - mh.o
    path = _avoiding_path(a2.forest, at.o - mh.o, far, mh.o)
    report.no_path_avoiding_base = path is None
    if path is not None:
        report.problems.append(f"path avoiding M: {'-'.join(path)}")
    ok, witness = independent(a2, mh, at, bt | ct)
    report.final_independent = ok
    if not ok:
        report.problems.append(f"a~ depends on b~c~ over M: {witness}")

    a_emb = Embedding({x: a_map[x] for x in ab.left.o}, {p: a_map[p] for p in ab.left.p})
    b_emb = Embedding({x: b_map[x] for x in b_part.o}, {p: b_map[p] for p in b_part.p})
    c_emb = Embedding({x: c_map[x] for x in c_part.o}, {p: c_map[p] for p in c_part.p})
    return TripleAmalgam(a2, a1, a0, a_emb, b_emb, c_emb, report)
