"""Constructive (C4)-coloring algorithms and the exhaustive enumeration oracle."""

from __future__ import annotations

import itertools
from collections import deque
from collections.abc import Iterable, Iterator, Mapping
from concurrent.futures import ProcessPoolExecutor

from .axioms import check_c4_coloring, is_connected, is_path_closed
from .core import INFINITE, STD, TRIPLE, C4Coloring, Forest, TheoryVariant, set_distance
from .errors import InvariantBreach, PreconditionError

__all__ = [
    "DEFAULT_BRUTE_FORCE_CAP",
    "brute_force_colorings",
    "extend_coloring",
    "interpolate_colorings",
    "iter_colorings",
    "path_coloring",
    "random_extension",
]

DEFAULT_BRUTE_FORCE_CAP = 14


def _require_valid(f: Forest, col: Mapping[str, int], variant: TheoryVariant, what: str) -> None:
    report = check_c4_coloring(f, col, variant)
    if not report.ok:
        raise PreconditionError(f"{what} is not a (C4)-coloring: {report.render()}")


def extend_coloring(
    f: Forest, closed_domain: Iterable[str], col: Mapping[str, int], variant: TheoryVariant
) -> C4Coloring:
    """Extend a (C4)-coloring of a path-closed vertex set to all of ``f``.

    Every component of the complement touches the domain through at most one
    edge.  Each such component is rooted at its attaching vertex (or at its
    least vertex when detached) and colored top-down: a vertex reached by a
    color-``i`` edge gets the least color other than ``i``.  So no vertex
    outside the domain is ever a closure image of its parent, which is what
    keeps every ball boundary within capacity.
    """
    domain = frozenset(closed_domain)
    if set(col) != domain:
        raise PreconditionError("coloring domain differs from the given closed domain")
    f.require(*domain)
    if not is_path_closed(f, domain):
        raise PreconditionError("domain is not path-closed in the forest (condition (ii))")
    _require_valid(f, col, variant, "input coloring")

    adj = f._adj
    out = dict(col)
    for start in sorted(adj):
        if start in out:
            continue
        comp = {start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in domain and y not in comp:
                    comp.add(y)
                    queue.append(y)
        attach = sorted((x, w, c) for x in comp for w, c in adj[x].items() if w in domain)
        if len(attach) > 1:
            raise PreconditionError(f"component of {start} meets the domain twice (condition (ii))")
        if attach:
            root, _, edge_color = attach[0]
            out[root] = variant.smallest_other(edge_color)
        else:
            root = min(comp)
            out[root] = 1
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y, c in sorted(adj[x].items()):
                if y in comp and y not in out:
                    out[y] = variant.smallest_other(c)
                    queue.append(y)
    return C4Coloring(out)


def random_extension(
    f: Forest, closed_domain: Iterable[str], col: Mapping[str, int], variant: TheoryVariant, rng
) -> C4Coloring:
    """Like :func:`extend_coloring` but with random choices.

    Detached roots get any color; other new vertices get a random color
    different from the color of the edge to their parent.  The result is a
    valid (C4)-coloring for the same reason the deterministic one is.
    """
    domain = frozenset(closed_domain)
    if set(col) != domain:
        raise PreconditionError("coloring domain differs from the given closed domain")
    adj = f._adj
    out = dict(col)
    for start in sorted(adj):
        if start in out:
            continue
        comp = {start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in domain and y not in comp:
                    comp.add(y)
                    queue.append(y)
        attach = sorted((x, w, c) for x in comp for w, c in adj[x].items() if w in domain)
        if len(attach) > 1:
            raise PreconditionError(f"component of {start} meets the domain twice (condition (ii))")
        if attach:
            root, _, edge_color = attach[0]
            out[root] = rng.choice([c for c in variant.colors if c != edge_color])
        else:
            root = min(comp)
            out[root] = rng.choice(list(variant.colors))
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y, c in sorted(adj[x].items()):
                if y in comp and y not in out:
                    out[y] = rng.choice([d for d in variant.colors if d != c])
                    queue.append(y)
    return C4Coloring(out)


def _check_piece(f: Forest, vs: frozenset[str], col: Mapping[str, int], variant: TheoryVariant, label: str) -> None:
    if not vs:
        raise PreconditionError(f"{label} is empty")
    if set(col) != set(vs):
        raise PreconditionError(f"{label}: coloring domain differs from the vertex set")
    f.require(*vs)
    if not is_connected(f, vs):
        raise PreconditionError(f"{label} is not connected")
    _require_valid(f, col, variant, f"{label} coloring")


def path_coloring(
    f: Forest,
    o1: Iterable[str],
    o2: Iterable[str],
    col1: Mapping[str, int],
    col2: Mapping[str, int],
    variant: TheoryVariant,
) -> C4Coloring:
    """Color two far-apart connected sets and the shortest path joining them.

    Returns a coloring of ``o1 | o2 | path`` restricting to ``col1`` and
    ``col2``.  Requires distance at least 5.
    """
    if variant not in (STD, TRIPLE):
        raise PreconditionError(f"path coloring is only available for STD and TRIPLE, not {variant}")
    o1, o2 = frozenset(o1), frozenset(o2)
    _check_piece(f, o1, col1, variant, "first set")
    _check_piece(f, o2, col2, variant, "second set")

    dist, parent = f.bfs(o1)
    reached = [(dist[v], v) for v in o2 if v in dist]
    if not reached:
        raise PreconditionError("the two sets lie in different components")
    n, end = min(reached)
    if n < 5:
        raise PreconditionError(f"the sets are at distance {n}, need at least 5")
    path = [end]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    path.reverse()  # o_0 in o1 ... o_n in o2

    adj = f._adj
    colors: dict[str, int] = {}
    colors.update(col1)
    colors.update(col2)
    interior = path[1:-1]
    c: dict[int, int] = {0: col1[path[0]], n: col2[path[n]]}
    c[1] = variant.smallest_other(adj[path[0]][path[1]])
    c[n - 1] = variant.smallest_other(adj[path[n - 1]][path[n]])
    if variant == STD:
        for j in range(2, n - 1):
            c[j] = 2
    else:
        # every center o_j needs its two path neighbors colored differently
        for j in range(2, n - 1):
            banned = {c[j - 2]}
            if j + 2 >= n - 1:
                banned.add(c[j + 2])
            c[j] = min(x for x in variant.colors if x not in banned)
    for j, v in enumerate(interior, start=1):
        colors[v] = c[j]

    out = C4Coloring(colors)
    report = check_c4_coloring(f, out, variant)
    if not report.ok:
        raise InvariantBreach(f"path coloring produced an invalid coloring: {report.render()}")
    return out


def interpolate_colorings(
    f: Forest, sets: list[tuple[Iterable[str], Mapping[str, int]]], variant: TheoryVariant
) -> tuple[frozenset[str], C4Coloring]:
    """Simultaneously realize colorings on ``n`` sets pairwise farther apart than ``2**n``.

    Repeatedly joins the closest pair with :func:`path_coloring`.  Sets in
    different components are never joined, so the returned vertex set is
    connected within each component it meets (hence path-closed).

    Raises :class:`PreconditionError` on bad input and
    :class:`InvariantBreach` if a merged set ever comes too close to a
    remaining one.
    """
    pieces = []
    for idx, (vs, col) in enumerate(sets):
        vs = frozenset(vs)
        _check_piece(f, vs, col, variant, f"set {idx}")
        pieces.append((vs, C4Coloring(col)))
    n = len(pieces)
    if n == 0:
        return frozenset(), C4Coloring()
    bound = 2 ** n
    for i, j in itertools.combinations(range(n), 2):
        d = set_distance(f, pieces[i][0], pieces[j][0])
        if d <= bound:
            raise PreconditionError(f"sets {i} and {j} are at distance {d}, need more than {bound}")

    while True:
        m = len(pieces)
        best = None
        for i, j in itertools.combinations(range(m), 2):
            d = set_distance(f, pieces[i][0], pieces[j][0])
            if d is not INFINITE and (best is None or d < best[0]):
                best = (d, i, j)
        if best is None:
            break
        d, i, j = best
        (vi, ci), (vj, cj) = pieces[i], pieces[j]
        joined = path_coloring(f, vi, vj, ci, cj, variant)
        merged = (joined.domain, joined)
        rest = [p for idx, p in enumerate(pieces) if idx not in (i, j)]
        for vs, _ in rest:
            e = set_distance(f, vs, merged[0])
            if e is INFINITE:
                continue
            if 2 * e < d or e <= 2 ** (m - 1):
                raise InvariantBreach(
                    f"merged set at distance {e} from a remaining set; need >= {d}/2 and > {2 ** (m - 1)}"
                )
        pieces = rest + [merged]

    union: frozenset[str] = frozenset()
    col = C4Coloring()
    for vs, c in pieces:
        union |= vs
        col = col.merged(c)
    return union, col


def iter_colorings(
    f: Forest,
    constraints: Mapping[str, int] | None,
    variant: TheoryVariant,
    cap: int = DEFAULT_BRUTE_FORCE_CAP,
) -> Iterator[C4Coloring]:
    """Yield every total (C4)-coloring of ``f`` agreeing with ``constraints``.

    Vertices are assigned in sorted order, colors ascending, so the output
    order is lexicographic.  Capacity is checked incrementally at each
    assignment, which prunes exactly the assignments a full check would
    reject.
    """
    constraints = dict(constraints or {})
    if f.k != variant.k:
        raise ValueError(f"forest has k={f.k} but variant has k={variant.k}")
    if len(f) > cap:
        raise PreconditionError(f"{len(f)} vertices exceeds the enumeration cap {cap}")
    f.require(*constraints)
    for v, c in constraints.items():
        variant.check_color(c)
    order = sorted(f.vertices)
    yield from _enumerate(f._adj, order, constraints, variant, {})


def _enumerate(adj, order, constraints, variant, prefix):
    caps = variant.capacities
    counts: dict[tuple[str, int], int] = {}
    assigned: dict[str, int] = {}
    for v, c in prefix.items():
        for x, ec in adj[v].items():
            if ec == c:
                counts[(x, c)] = counts.get((x, c), 0) + 1
        assigned[v] = c
    if any(counts[(x, c)] > caps[c - 1] for (x, c) in counts):
        return
    todo = [v for v in order if v not in prefix]
    choices = [(constraints[v],) if v in constraints else tuple(variant.colors) for v in todo]

    def rec(idx):
        if idx == len(todo):
            yield C4Coloring({v: assigned[v] for v in order})
            return
        v = todo[idx]
        for c in choices[idx]:
            bumped = []
            ok = True
            for x, ec in adj[v].items():
                if ec == c:
                    key = (x, c)
                    n = counts.get(key, 0) + 1
                    counts[key] = n
                    bumped.append(key)
                    if n > caps[c - 1]:
                        ok = False
            if ok:
                assigned[v] = c
                yield from rec(idx + 1)
                del assigned[v]
            for key in bumped:
                counts[key] -= 1

    yield from rec(0)


def _branch(args):
    adj, order, constraints, variant, prefix = args
    return list(_enumerate(adj, order, constraints, variant, prefix))


def brute_force_colorings(
    f: Forest,
    constraints: Mapping[str, int] | None,
    variant: TheoryVariant,
    cap: int = DEFAULT_BRUTE_FORCE_CAP,
    jobs: int = 1,
) -> list[C4Coloring]:
    """All total (C4)-colorings extending ``constraints``, in lexicographic order.

    With ``jobs > 1`` the search is split on the first free vertex's color
    and the branches run in worker processes; the merged order is the same.
    """
    if jobs <= 1 or len(f) == 0:
        return list(iter_colorings(f, constraints, variant, cap))
    constraints = dict(constraints or {})
    if len(f) > cap:
        raise PreconditionError(f"{len(f)} vertices exceeds the enumeration cap {cap}")
    f.require(*constraints)
    order = sorted(f.vertices)
    free = [v for v in order if v not in constraints]
    if not free:
        return list(iter_colorings(f, constraints, variant, cap))
    pivot = free[0]
    tasks = [(f._adj, order, constraints, variant, {pivot: c}) for c in variant.colors]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        branches = list(pool.map(_branch, tasks))
    # branches are per-pivot-color; restore global lexicographic order
    merged = [c for branch in branches for c in branch]
    merged.sort(key=lambda col: tuple(col[v] for v in order))
    return merged
