"""Domain types: theory variants, edge-colored forests, two-sorted structures.

A structure has a sort O of vertices carrying an edge-colored forest and a
sort P of parameters; every parameter assigns every vertex one color.  All
types are immutable; "modifying" builders return new objects and share
untouched internals with their source.
"""

from __future__ import annotations

import functools
from collections import deque
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from types import MappingProxyType

from .errors import StructureError, UnknownIdentifier

__all__ = [
    "INFINITE",
    "STD",
    "TRIPLE",
    "C4Coloring",
    "Embedding",
    "Forest",
    "Structure",
    "SubsetHandle",
    "TheoryVariant",
    "ball_boundary",
    "path_hull",
    "set_distance",
    "tree_distance",
    "unique_path",
]


@dataclass(frozen=True)
class TheoryVariant:
    """Number of colors ``k`` and the per-color capacity vector.

    ``capacities[i - 1]`` bounds how many vertices on the boundary of one
    unit color-``i`` ball a single parameter may color ``i``.
    """

    k: int
    capacities: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "capacities", tuple(int(c) for c in self.capacities))
        if self.k < 2:
            raise ValueError("a variant needs at least two colors")
        if len(self.capacities) != self.k:
            raise ValueError(f"expected {self.k} capacities, got {len(self.capacities)}")
        if any(c < 1 for c in self.capacities):
            raise ValueError("capacities must be positive")

    @property
    def colors(self) -> range:
        return range(1, self.k + 1)

    def cap(self, color: int) -> int:
        self.check_color(color)
        return self.capacities[color - 1]

    def check_color(self, color: int) -> None:
        if not (isinstance(color, int) and 1 <= color <= self.k):
            raise ValueError(f"color {color!r} out of range 1..{self.k}")

    def smallest_other(self, color: int) -> int:
        """Least color different from ``color``."""
        return 2 if color == 1 else 1

    def __str__(self) -> str:
        return f"k={self.k} cap={','.join(map(str, self.capacities))}"


STD = TheoryVariant(2, (1, 2))
TRIPLE = TheoryVariant(3, (1, 1, 1))


@functools.total_ordering
class _Infinite:
    """Distance between vertices in different components.

    Compares greater than every integer and equal only to itself.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __hash__(self):
        return hash("INFINITE")

    def __repr__(self):
        return "INFINITE"

    __str__ = __repr__


INFINITE = _Infinite()


def _edge_items(edges) -> Iterator[tuple[str, str, int]]:
    if isinstance(edges, Mapping):
        for (u, v), c in edges.items():
            yield u, v, c
    else:
        for u, v, c in edges:
            yield u, v, c


class Forest:
    """Finite acyclic simple graph whose edges carry colors in ``1..k``.

    With ``check=True`` (the default) the constructor rejects self-edges,
    repeated vertex pairs, out-of-range colors and cycles.  ``check=False``
    exists so verifiers can be exercised on defective input.
    """

    __slots__ = ("_adj", "k")

    def __init__(self, vertices: Iterable[str] = (), edges=(), k: int = 2, *, check: bool = True):
        adj: dict[str, dict[str, int]] = {v: {} for v in vertices}
        self.k = k
        parent = {v: v for v in adj}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v, c in _edge_items(edges):
            for x in (u, v):
                if x not in adj:
                    raise UnknownIdentifier(f"edge endpoint {x!r} is not a vertex")
            if check:
                if u == v:
                    raise StructureError(f"self-edge at {u}", "(C1)")
                if v in adj[u]:
                    raise StructureError(f"more than one edge between {u} and {v}", "(C1)")
                if not (isinstance(c, int) and 1 <= c <= k):
                    raise StructureError(f"edge color {c!r} out of range 1..{k}")
                ru, rv = find(u), find(v)
                if ru == rv:
                    raise StructureError(f"edge {u}-{v} closes a cycle", "(C2)")
                parent[ru] = rv
            adj[u][v] = c
            adj[v][u] = c
        self._adj = adj

    @classmethod
    def _from_adj(cls, adj: dict[str, dict[str, int]], k: int) -> Forest:
        f = cls.__new__(cls)
        f._adj = adj
        f.k = k
        return f

    # -- reading -----------------------------------------------------------

    @property
    def vertices(self):
        return self._adj.keys()

    def __contains__(self, v) -> bool:
        return v in self._adj

    def __len__(self) -> int:
        return len(self._adj)

    def __iter__(self) -> Iterator[str]:
        return iter(self._adj)

    def require(self, *vs: str) -> None:
        for v in vs:
            if v not in self._adj:
                raise UnknownIdentifier(f"unknown vertex {v!r}")

    def neighbors(self, v: str) -> Mapping[str, int]:
        self.require(v)
        return MappingProxyType(self._adj[v])

    def color(self, u: str, v: str) -> int | None:
        self.require(u, v)
        return self._adj[u].get(v)

    def degree(self, v: str) -> int:
        self.require(v)
        return len(self._adj[v])

    def edges(self) -> list[tuple[str, str, int]]:
        out = []
        for u, nbrs in self._adj.items():
            for v, c in nbrs.items():
                if u < v:
                    out.append((u, v, c))
        out.sort()
        return out

    def edge_count(self) -> int:
        return sum(len(n) for n in self._adj.values()) // 2

    def components(self) -> list[frozenset[str]]:
        seen: set[str] = set()
        comps = []
        for start in sorted(self._adj):
            if start in seen:
                continue
            comp = {start}
            queue = deque([start])
            while queue:
                x = queue.popleft()
                for y in self._adj[x]:
                    if y not in comp:
                        comp.add(y)
                        queue.append(y)
            seen |= comp
            comps.append(frozenset(comp))
        return comps

    def component_of(self, v: str) -> frozenset[str]:
        self.require(v)
        comp = {v}
        queue = deque([v])
        while queue:
            x = queue.popleft()
            for y in self._adj[x]:
                if y not in comp:
                    comp.add(y)
                    queue.append(y)
        return frozenset(comp)

    def bfs(self, sources: Iterable[str], blocked: Iterable[str] = ()) -> tuple[dict[str, int], dict[str, str | None]]:
        """Multi-source BFS avoiding ``blocked``; returns (distance, parent)."""
        blocked = set(blocked)
        dist: dict[str, int] = {}
        parent: dict[str, str | None] = {}
        queue: deque[str] = deque()
        for s in sorted(set(sources)):
            self.require(s)
            if s in blocked:
                continue
            dist[s] = 0
            parent[s] = None
            queue.append(s)
        while queue:
            x = queue.popleft()
            for y in sorted(self._adj[x]):
                if y not in dist and y not in blocked:
                    dist[y] = dist[x] + 1
                    parent[y] = x
                    queue.append(y)
        return dist, parent

    # -- building ----------------------------------------------------------

    def induced(self, vs: Iterable[str]) -> Forest:
        keep = set(vs)
        self.require(*keep)
        adj = {v: {w: c for w, c in self._adj[v].items() if w in keep} for v in keep}
        return Forest._from_adj(adj, self.k)

    def extended(self, vertices: Iterable[str] = (), edges=()) -> Forest:
        """New forest with extra vertices and edges, fully re-validated."""
        vs = list(self._adj) + [v for v in vertices]
        if len(set(vs)) != len(vs):
            raise StructureError("duplicate vertex identifier")
        return Forest(vs, self.edges() + list(_edge_items(edges)), self.k)

    def with_pendant(self, new: str, attach: str, color: int) -> Forest:
        """Add ``new`` joined to ``attach`` by one edge; cannot create a cycle."""
        self.require(attach)
        if new in self._adj:
            raise StructureError(f"vertex {new!r} already present")
        if not 1 <= color <= self.k:
            raise StructureError(f"edge color {color!r} out of range 1..{self.k}")
        adj = dict(self._adj)
        adj[attach] = {**adj[attach], new: color}
        adj[new] = {attach: color}
        return Forest._from_adj(adj, self.k)

    def renamed(self, mapping: Mapping[str, str]) -> Forest:
        r = lambda x: mapping.get(x, x)  # noqa: E731
        adj = {r(v): {r(w): c for w, c in nbrs.items()} for v, nbrs in self._adj.items()}
        if len(adj) != len(self._adj):
            raise StructureError("renaming is not injective")
        return Forest._from_adj(adj, self.k)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Forest):
            return NotImplemented
        return self.k == other.k and self._adj == other._adj

    def __hash__(self):
        return hash((self.k, frozenset(self._adj), self.edge_count()))

    def __repr__(self) -> str:
        return f"Forest({len(self)} vertices, {self.edge_count()} edges, k={self.k})"


def tree_distance(f: Forest, u: str, v: str):
    """Length of the unique ``u``–``v`` path, or :data:`INFINITE`."""
    path = unique_path(f, u, v)
    return INFINITE if path is None else len(path) - 1


def unique_path(f: Forest, u: str, v: str) -> list[str] | None:
    f.require(u, v)
    if u == v:
        return [u]
    adj = f._adj
    parent = {u: None}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y not in parent:
                parent[y] = x
                if y == v:
                    queue.clear()
                    break
                queue.append(y)
    if v not in parent:
        return None
    path = [v]
    while path[-1] != u:
        path.append(parent[path[-1]])
    path.reverse()
    return path


def ball_boundary(f: Forest, center: str, color: int) -> frozenset[str]:
    """Vertices joined to ``center`` by a color-``color`` edge."""
    f.require(center)
    if not (isinstance(color, int) and 1 <= color <= f.k):
        raise ValueError(f"color {color!r} out of range 1..{f.k}")
    return frozenset(w for w, c in f._adj[center].items() if c == color)


def path_hull(f: Forest, vs: Iterable[str]) -> frozenset[str]:
    """``vs`` plus every vertex on a path between two members of ``vs``.

    Computed per component: root at one member, then walk every other
    member up to the first already-marked ancestor.
    """
    vs = set(vs)
    f.require(*vs)
    hull = set(vs)
    remaining = set(vs)
    while remaining:
        root = min(remaining)
        _, parent = f.bfs([root])
        members = [v for v in remaining if v in parent]
        remaining -= set(members)
        marked = {root}
        for v in members:
            x = v
            trail = []
            while x not in marked:
                trail.append(x)
                x = parent[x]
            marked.update(trail)
        hull |= marked
    return frozenset(hull)


def set_distance(f: Forest, a: Iterable[str], b: Iterable[str]):
    """Least distance between a vertex of ``a`` and one of ``b``."""
    b = set(b)
    dist, _ = f.bfs(a)
    best = min((dist[x] for x in b if x in dist), default=None)
    return INFINITE if best is None else best


class C4Coloring(Mapping):
    """Partial vertex coloring, as induced by one (real or imagined) parameter.

    Validity against a forest is checked by :func:`copacetic.axioms.check_c4_coloring`;
    this class only stores the assignment.
    """

    __slots__ = ("_a",)

    def __init__(self, assignment: Mapping[str, int] | Iterable[tuple[str, int]] = ()):
        self._a = dict(assignment)

    @property
    def domain(self) -> frozenset[str]:
        return frozenset(self._a)

    def __getitem__(self, v):
        return self._a[v]

    def __iter__(self):
        return iter(self._a)

    def __len__(self):
        return len(self._a)

    def restrict(self, vs: Iterable[str]) -> C4Coloring:
        vs = set(vs)
        return C4Coloring({v: c for v, c in self._a.items() if v in vs})

    def merged(self, other: Mapping[str, int]) -> C4Coloring:
        out = dict(self._a)
        for v, c in other.items():
            if out.get(v, c) != c:
                raise ValueError(f"colorings disagree at {v}")
            out[v] = c
        return C4Coloring(out)

    def __eq__(self, other):
        if isinstance(other, C4Coloring):
            return self._a == other._a
        if isinstance(other, Mapping):
            return self._a == dict(other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._a.items()))

    def __repr__(self):
        body = ", ".join(f"{v}={c}" for v, c in sorted(self._a.items()))
        return f"C4Coloring({body})"


@dataclass(frozen=True)
class SubsetHandle:
    """A vertex part and a parameter part of one ambient structure."""

    o: frozenset[str] = field(default_factory=frozenset)
    p: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "o", frozenset(self.o))
        object.__setattr__(self, "p", frozenset(self.p))

    def __or__(self, other: SubsetHandle) -> SubsetHandle:
        return SubsetHandle(self.o | other.o, self.p | other.p)

    def __and__(self, other: SubsetHandle) -> SubsetHandle:
        return SubsetHandle(self.o & other.o, self.p & other.p)

    def __sub__(self, other: SubsetHandle) -> SubsetHandle:
        return SubsetHandle(self.o - other.o, self.p - other.p)

    def __le__(self, other: SubsetHandle) -> bool:
        return self.o <= other.o and self.p <= other.p

    @property
    def elements(self) -> frozenset[str]:
        return self.o | self.p

    def is_empty(self) -> bool:
        return not self.o and not self.p

    def validate(self, s: Structure) -> None:
        for v in self.o:
            if v not in s.forest:
                raise UnknownIdentifier(f"unknown vertex {v!r}")
        for b in self.p:
            if b not in s.params:
                raise UnknownIdentifier(f"unknown parameter {b!r}")

    def __str__(self):
        return f"O={{{','.join(sorted(self.o))}}} P={{{','.join(sorted(self.p))}}}"


class Structure:
    """A forest of vertices plus parameters, each coloring every vertex.

    ``rho`` maps each parameter to its row ``{vertex: color}``.  With
    ``check=True`` every row must be total with in-range colors (C3);
    ``strict=True`` additionally rejects capacity excess (C4) on
    construction.  Internally colors are stored per vertex so that adding a
    vertex does not copy every row.
    """

    __slots__ = ("forest", "variant", "strict", "_params", "_cols")

    def __init__(
        self,
        forest: Forest,
        params: Iterable[str] = (),
        rho: Mapping[str, Mapping[str, int]] | None = None,
        variant: TheoryVariant = STD,
        *,
        strict: bool = False,
        check: bool = True,
    ):
        params = frozenset(params)
        rho = rho or {}
        if forest.k != variant.k:
            raise StructureError(f"forest has k={forest.k} but variant has k={variant.k}")
        cols: dict[str, dict[str, int]] = {v: {} for v in forest.vertices}
        for b, row in rho.items():
            if b not in params:
                raise UnknownIdentifier(f"rho row for unknown parameter {b!r}")
            for a, c in row.items():
                if a not in cols:
                    raise UnknownIdentifier(f"rho entry for unknown vertex {a!r}")
                cols[a][b] = c
        if check:
            clash = params & set(cols)
            if clash:
                raise StructureError(f"identifier used for both sorts: {min(clash)}")
            for a, col in cols.items():
                for b in params:
                    c = col.get(b)
                    if c is None:
                        raise StructureError(f"rho({b},{a}) undefined", "(C3)")
                    if not (isinstance(c, int) and 1 <= c <= variant.k):
                        raise StructureError(f"rho({b},{a})={c!r} out of range", "(C3)")
        self.forest = forest
        self.variant = variant
        self.strict = strict
        self._params = params
        self._cols = cols
        if strict:
            for b, center, color, members in c4_excess(self):
                raise StructureError(
                    f"parameter {b} colors {len(members)} color-{color} neighbors of {center} with {color}",
                    "(C4)",
                )

    @classmethod
    def _assemble(cls, forest, params, cols, variant, strict=False) -> Structure:
        s = cls.__new__(cls)
        s.forest = forest
        s.variant = variant
        s.strict = strict
        s._params = frozenset(params)
        s._cols = cols
        return s

    @classmethod
    def empty(cls, variant: TheoryVariant = STD, strict: bool = False) -> Structure:
        return cls(Forest(k=variant.k), variant=variant, strict=strict)

    # -- reading -----------------------------------------------------------

    @property
    def vertices(self):
        return self.forest.vertices

    @property
    def params(self) -> frozenset[str]:
        return self._params

    def rho(self, b: str, a: str) -> int:
        if b not in self._params:
            raise UnknownIdentifier(f"unknown parameter {b!r}")
        self.forest.require(a)
        return self._cols[a][b]

    def row(self, b: str) -> dict[str, int]:
        if b not in self._params:
            raise UnknownIdentifier(f"unknown parameter {b!r}")
        return {a: col[b] for a, col in self._cols.items() if b in col}

    def coloring(self, b: str) -> C4Coloring:
        return C4Coloring(self.row(b))

    def column(self, a: str) -> Mapping[str, int]:
        self.forest.require(a)
        return MappingProxyType(self._cols[a])

    def images(self, b: str, a: str, color: int) -> tuple[str, ...]:
        """Color-``color`` neighbors of ``a`` that ``b`` colors ``color``, sorted."""
        adj = self.forest._adj
        return tuple(sorted(w for w, c in adj[a].items() if c == color and self._cols[w].get(b) == color))

    def is_vertex(self, x: str) -> bool:
        return x in self._cols

    def is_param(self, x: str) -> bool:
        return x in self._params

    def handle(self, ids: Iterable[str] = (), *, params: Iterable[str] = ()) -> SubsetHandle:
        """Resolve a mixed list of identifiers into a :class:`SubsetHandle`."""
        o, p = set(), set(params)
        for x in ids:
            if x in self._cols:
                o.add(x)
            elif x in self._params:
                p.add(x)
            else:
                raise UnknownIdentifier(f"unknown identifier {x!r}")
        h = SubsetHandle(o, p)
        h.validate(self)
        return h

    def whole(self) -> SubsetHandle:
        return SubsetHandle(self.forest.vertices, self._params)

    # -- building ----------------------------------------------------------

    def restrict(self, sub: SubsetHandle) -> Structure:
        """Induced substructure on ``sub``."""
        sub.validate(self)
        cols = {a: {b: c for b, c in self._cols[a].items() if b in sub.p} for a in sub.o}
        return Structure._assemble(self.forest.induced(sub.o), sub.p, cols, self.variant, self.strict)

    def renamed(self, mapping: Mapping[str, str]) -> Structure:
        r = lambda x: mapping.get(x, x)  # noqa: E731
        cols = {r(a): {r(b): c for b, c in col.items()} for a, col in self._cols.items()}
        params = frozenset(r(b) for b in self._params)
        if len(params) != len(self._params):
            raise StructureError("renaming is not injective")
        return Structure._assemble(self.forest.renamed(mapping), params, cols, self.variant, self.strict)

    def with_strict(self, strict: bool) -> Structure:
        return Structure._assemble(self.forest, self._params, self._cols, self.variant, strict)

    def fresh_vertex(self, prefix: str = "n") -> str:
        return _fresh(prefix, self._cols, self._params, start=len(self._cols))

    def fresh_param(self, prefix: str = "q") -> str:
        return _fresh(prefix, self._cols, self._params, start=len(self._params))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Structure):
            return NotImplemented
        return (
            self.variant == other.variant
            and self.strict == other.strict
            and self._params == other._params
            and self.forest == other.forest
            and self._cols == other._cols
        )

    def __hash__(self):
        return hash((self.variant, self._params, hash(self.forest)))

    def __repr__(self) -> str:
        return f"Structure({len(self.forest)} vertices, {len(self._params)} params, {self.variant})"


def _fresh(prefix: str, *taken, start: int = 0) -> str:
    i = start
    while True:
        name = f"{prefix}{i}"
        if not any(name in t for t in taken):
            return name
        i += 1


def c4_excess(s: Structure) -> Iterator[tuple[str, str, int, tuple[str, ...]]]:
    """Yield (param, center, color, members) for every over-capacity ball boundary."""
    adj = s.forest._adj
    caps = s.variant.capacities
    cols = s._cols
    for center in sorted(adj):
        by_color: dict[int, list[str]] = {}
        for w, c in adj[center].items():
            by_color.setdefault(c, []).append(w)
        for color, boundary in sorted(by_color.items()):
            if not 1 <= color <= len(caps) or len(boundary) <= caps[color - 1]:
                continue
            for b in sorted(s._params):
                members = tuple(sorted(w for w in boundary if cols[w].get(b) == color))
                if len(members) > caps[color - 1]:
                    yield b, center, color, members


@dataclass(frozen=True)
class Embedding:
    """Injective identifier maps from one structure into another."""

    vertex_map: Mapping[str, str]
    param_map: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "vertex_map", MappingProxyType(dict(self.vertex_map)))
        object.__setattr__(self, "param_map", MappingProxyType(dict(self.param_map)))

    def __call__(self, x: str) -> str:
        if x in self.vertex_map:
            return self.vertex_map[x]
        return self.param_map[x]

    def image(self, sub: SubsetHandle) -> SubsetHandle:
        return SubsetHandle({self.vertex_map[v] for v in sub.o}, {self.param_map[b] for b in sub.p})

    def problems(self, src: Structure, dst: Structure) -> list[str]:
        """Everything that stops this from being an embedding ``src -> dst``."""
        out = []
        vm, pm = self.vertex_map, self.param_map
        if set(vm) != set(src.vertices):
            out.append("vertex map is not total on the source")
        if set(pm) != set(src.params):
            out.append("param map is not total on the source")
        if len(set(vm.values())) != len(vm) or len(set(pm.values())) != len(pm):
            out.append("map is not injective")
        for v, w in vm.items():
            if w not in dst.forest:
                out.append(f"{v} maps to unknown vertex {w}")
        for b, q in pm.items():
            if q not in dst.params:
                out.append(f"{b} maps to unknown parameter {q}")
        if out:
            return out
        src_vs = sorted(vm)
        for i, u in enumerate(src_vs):
            for v in src_vs[i + 1:]:
                if src.forest._adj[u].get(v) != dst.forest._adj[vm[u]].get(vm[v]):
                    out.append(f"edge relation differs on {u},{v}")
        for b in sorted(pm):
            for a in src_vs:
                if src._cols[a][b] != dst._cols[vm[a]][pm[b]]:
                    out.append(f"rho({b},{a}) not preserved")
        return out

    def is_valid(self, src: Structure, dst: Structure) -> bool:
        return not self.problems(src, dst)
