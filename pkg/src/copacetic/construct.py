"""Constructions that build larger copacetic structures from smaller ones."""

from __future__ import annotations

import random
from collections.abc import Iterable, Iterator, Mapping, Sequence

from .axioms import check_closed
from .closure import closure_of
from .coloring import extend_coloring, interpolate_colorings, random_extension
from .core import Embedding, Forest, Structure, SubsetHandle, _fresh, set_distance
from .errors import CapacityError, PreconditionError, UnknownIdentifier

__all__ = [
    "add_closure_image",
    "complete_budgeted",
    "connect_with_path",
    "forge",
    "free_amalgam",
    "introduce_parameter",
    "iter_forge",
]


def add_closure_image(s: Structure, b: str, a: str, i: int, name: str | None = None) -> Structure:
    """Attach a new color-``i`` neighbor of ``a`` that ``b`` colors ``i``.

    Every other parameter gives the new vertex the least color other than
    ``i``, so it is an image for ``b`` alone.  Raises :class:`CapacityError`
    when ``b`` already has ``cap(i)`` images at ``a``.
    """
    if b not in s.params:
        raise UnknownIdentifier(f"unknown parameter {b!r}")
    s.forest.require(a)
    s.variant.check_color(i)
    have = len(s.images(b, a, i))
    if have >= s.variant.cap(i):
        raise CapacityError(f"{b} already has {have} color-{i} images at {a} (capacity {s.variant.cap(i)})")
    new = name if name is not None else s.fresh_vertex()
    if s.is_vertex(new) or s.is_param(new):
        raise PreconditionError(f"identifier {new!r} is already in use")
    other = s.variant.smallest_other(i)
    cols = dict(s._cols)
    cols[new] = {p: (i if p == b else other) for p in s.params}
    return Structure._assemble(s.forest.with_pendant(new, a, i), s.params, cols, s.variant, s.strict)


def _same_on(a: Structure, b: Structure, sub: SubsetHandle) -> bool:
    if a.variant != b.variant:
        return False
    if a.forest.induced(sub.o) != b.forest.induced(sub.o):
        return False
    return all(a._cols[v][p] == b._cols[v][p] for v in sub.o for p in sub.p)


def free_amalgam(
    a: Structure, c: SubsetHandle, b: Structure
) -> tuple[Structure, Embedding, Embedding]:
    """Glue ``b`` onto ``a`` along ``c`` with no new edges between the two sides.

    ``c`` must be closed in both, and ``b``'s parameters must be exactly
    those of ``c``.  Parameters of ``a`` outside ``c`` are extended over the
    new vertices with :func:`extend_coloring`.  Vertices of ``b`` outside
    ``c`` keep their names unless they collide with an identifier of ``a``.
    Returns the amalgam and the embeddings of ``a`` and ``b`` into it.
    """
    c.validate(a)
    c.validate(b)
    if b.params != c.p:
        raise PreconditionError("the parameters of B must be exactly those of C")
    if not _same_on(a, b, c):
        raise PreconditionError("A and B induce different structures on C")
    for name, s in (("A", a), ("B", b)):
        bad = check_closed(c, s)
        if not bad.ok:
            raise PreconditionError(f"C is not closed in {name}: {bad.render()}")

    extra = sorted(set(b.vertices) - c.o)
    taken = set(a.vertices) | set(a.params)
    rename: dict[str, str] = {}
    for x in extra:
        if x in taken:
            new = _fresh(x + "_", taken, rename.values())
        else:
            new = x
        rename[x] = new
        taken.add(new)
    vmap = {v: v for v in c.o}
    vmap.update(rename)

    edges = [(vmap[u], vmap[v], col) for u, v, col in b.forest.edges() if u in rename or v in rename]
    forest = a.forest.extended(rename.values(), edges)

    cols = dict(a._cols)
    for x in extra:
        cols[rename[x]] = dict(b._cols[x])
    for p in sorted(a.params - c.p):
        row = extend_coloring(b.forest, c.o, {v: a._cols[v][p] for v in c.o}, a.variant)
        for x in extra:
            cols[rename[x]][p] = row[x]
    out = Structure._assemble(forest, a.params, cols, a.variant, a.strict)
    emb_a = Embedding({v: v for v in a.vertices}, {p: p for p in a.params})
    emb_b = Embedding(vmap, {p: p for p in c.p})
    return out, emb_a, emb_b


def introduce_parameter(
    s: Structure,
    targets: Sequence[tuple[Iterable[str], Mapping[str, int]]],
    name: str | None = None,
) -> Structure:
    """Add a parameter realizing prescribed colorings on far-apart connected sets.

    The sets must be pairwise farther apart than ``2**n``; the prescribed
    colorings are joined with :func:`interpolate_colorings` and the result is
    extended to every vertex.
    """
    union, col = interpolate_colorings(s.forest, list(targets), s.variant)
    row = extend_coloring(s.forest, union, col, s.variant)
    new = name if name is not None else s.fresh_param()
    if s.is_vertex(new) or s.is_param(new):
        raise PreconditionError(f"identifier {new!r} is already in use")
    cols = {a: {**col_a, new: row[a]} for a, col_a in s._cols.items()}
    return Structure._assemble(s.forest, s.params | {new}, cols, s.variant, s.strict)


def connect_with_path(s: Structure, b: str, b2: str, min_len: int, prefix: str = "t") -> Structure:
    """Join two components by a color-1 path through ``min_len`` new vertices.

    Every parameter colors the new vertices 2, so none of them is a closure
    image along the path and no ball boundary gains a member.
    """
    s.forest.require(b, b2)
    if min_len < 3:
        raise PreconditionError(f"min_len must be at least 3, got {min_len}")
    if b2 in s.forest.component_of(b):
        raise PreconditionError(f"{b} and {b2} are already connected; a new path would close a cycle (C2)")
    names = []
    for _ in range(min_len):
        names.append(_fresh(prefix, s._cols, s._params, names, start=len(s._cols)))
    chain = [b, *names, b2]
    forest = s.forest.extended(names, [(u, v, 1) for u, v in zip(chain, chain[1:])])
    other = s.variant.smallest_other(1)
    cols = dict(s._cols)
    for x in names:
        cols[x] = {p: other for p in s.params}
    return Structure._assemble(forest, s.params, cols, s.variant, s.strict)


def complete_budgeted(s: Structure, depth: int) -> Structure:
    """Run ``depth`` rounds of filling every missing closure image.

    Each round looks at the vertices present when the round starts and adds
    fresh images until every parameter has ``cap(i)`` color-``i`` images at
    each of them (for ``i`` other than the vertex's own color).  Stops early
    once nothing is missing.
    """
    if depth < 0:
        raise PreconditionError("depth must be non-negative")
    adj = {v: dict(n) for v, n in s.forest._adj.items()}
    cols = dict(s._cols)
    params = sorted(s.params)
    caps = s.variant.capacities
    colors = list(s.variant.colors)
    counter = [len(adj)]

    def fresh() -> str:
        name = _fresh("c", adj, s._params, start=counter[0])
        counter[0] = int(name[1:]) + 1
        return name

    for _ in range(depth):
        added = False
        for a in sorted(adj):
            nbrs = adj[a]
            for b in params:
                own = cols[a][b]
                for i in colors:
                    if i == own:
                        continue
                    have = sum(1 for w, c in nbrs.items() if c == i and cols[w].get(b) == i)
                    for _ in range(caps[i - 1] - have):
                        new = fresh()
                        other = s.variant.smallest_other(i)
                        cols[new] = {p: (i if p == b else other) for p in params}
                        adj[new] = {a: i}
                        nbrs[new] = i
                        added = True
        if not added:
            break
    if len(adj) == len(s.forest):
        return s
    forest = Forest._from_adj(adj, s.forest.k)
    return Structure._assemble(forest, s.params, cols, s.variant, s.strict)


# -- randomized forging ------------------------------------------------------


def _random_tree(rng: random.Random, names: list[str], anchor: str | None, k: int) -> list[tuple[str, str, int]]:
    nodes = [anchor] if anchor is not None else []
    edges = []
    for x in names:
        if nodes:
            edges.append((rng.choice(nodes), x, rng.randint(1, k)))
        nodes.append(x)
    return edges


def _step_complete(s: Structure, rng: random.Random, vertices: list[str], params: list[str]) -> Structure:
    b = rng.choice(params)
    a = rng.choice(vertices)
    own = s._cols[a][b]
    for i in s.variant.colors:
        if i == own:
            continue
        while len(s.images(b, a, i)) < s.variant.cap(i):
            s = add_closure_image(s, b, a, i)
    return s


def _step_extend(s: Structure, rng: random.Random, vertices: list[str], params: list[str], max_tree: int) -> Structure:
    anchor = rng.choice(vertices) if vertices and rng.random() < 0.8 else None
    cp = frozenset(p for p in params if rng.random() < 0.5)
    c = closure_of(s, SubsetHandle([anchor] if anchor is not None else (), cp))
    base = s.restrict(c)
    size = rng.randint(1, max_tree)
    names = []
    for _ in range(size):
        names.append(_fresh("n", s._cols, s._params, names, start=len(s._cols)))
    tree = base.forest.extended(names, _random_tree(rng, names, anchor, s.variant.k))
    rows = {}
    for p in sorted(cp):
        dom = {v: s._cols[v][p] for v in c.o}
        rows[p] = dict(random_extension(tree, c.o, dom, s.variant, rng))
    piece = Structure(tree, cp, rows, s.variant)
    out, _, _ = free_amalgam(s, c, piece)
    return out


def _step_parameter(s: Structure, rng: random.Random, vertices: list[str], max_targets: int) -> Structure:
    targets = []
    chosen: list[frozenset[str]] = []
    n = rng.randint(0, max_targets) if vertices else 0
    for _ in range(n):
        v = rng.choice(vertices)
        vs = {v}
        nbrs = sorted(s.forest._adj[v])
        if nbrs and rng.random() < 0.5:
            vs.add(rng.choice(nbrs))
        vs = frozenset(vs)
        bound = 2 ** n
        if any(set_distance(s.forest, vs, other) <= bound for other in chosen):
            continue
        sub = s.forest.induced(vs)
        col = random_extension(sub, (), {}, s.variant, rng)
        chosen.append(vs)
        targets.append((vs, col))
    return introduce_parameter(s, targets)


def iter_forge(
    seed: Structure,
    steps: int,
    rng: int | random.Random,
    weights: tuple[float, float, float] = (0.7, 0.2, 0.1),
    max_tree: int = 6,
    max_targets: int = 2,
) -> Iterator[Structure]:
    """Yield the structure after each of ``steps`` random construction steps.

    Each step is a completion step (fill every missing image of one random
    parameter at one random vertex), a tree extension by free amalgamation,
    or the introduction of a parameter, chosen with the given weights.  Every
    step preserves copaceticity, so every yielded structure is copacetic
    when ``seed`` is.  The sequence is a deterministic function of ``rng``.
    """
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    s = seed
    vertices = sorted(s.vertices)
    for _ in range(steps):
        params = sorted(s.params)
        kind = rng.choices(("complete", "extend", "parameter"), weights)[0]
        if kind == "complete" and not (params and vertices):
            kind = "extend"
        if kind == "complete":
            s = _step_complete(s, rng, vertices, params)
        elif kind == "extend":
            s = _step_extend(s, rng, vertices, params, max_tree)
        else:
            s = _step_parameter(s, rng, vertices, max_targets)
        if len(vertices) != len(s.forest):
            vertices = sorted(s.vertices)
        yield s


def forge(
    seed: Structure,
    steps: int,
    rng: int | random.Random,
    weights: tuple[float, float, float] = (0.7, 0.2, 0.1),
    max_tree: int = 6,
    max_targets: int = 2,
) -> Structure:
    """Final structure of :func:`iter_forge`."""
    s = seed
    for s in iter_forge(seed, steps, rng, weights, max_tree, max_targets):
        pass
    return s
