"""Verifiers for copaceticity, completeness, closedness and (C4)-colorings.

Every verifier returns a :class:`ViolationReport` instead of raising; an
empty report means the checked property holds.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field

from .core import C4Coloring, Forest, Structure, SubsetHandle, TheoryVariant, c4_excess

__all__ = [
    "Violation",
    "ViolationReport",
    "check_c4_coloring",
    "check_closed",
    "check_completeness",
    "is_connected",
    "is_path_closed",
    "verify_copacetic",
]


@dataclass(frozen=True, order=True)
class Violation:
    axiom: str
    where: tuple[str, ...]
    detail: str = ""

    def line(self) -> str:
        text = f"{self.axiom} {' '.join(map(str, self.where))}".rstrip()
        return f"{text} : {self.detail}" if self.detail else text


@dataclass
class ViolationReport:
    violations: list[Violation] = field(default_factory=list)

    def add(self, axiom: str, where: Iterable, detail: str = "") -> None:
        self.violations.append(Violation(axiom, tuple(str(w) for w in where), detail))

    @property
    def ok(self) -> bool:
        return not self.violations

    def axioms(self) -> set[str]:
        return {v.axiom for v in self.violations}

    def of(self, axiom: str) -> list[Violation]:
        return [v for v in self.violations if v.axiom == axiom]

    def __len__(self) -> int:
        return len(self.violations)

    def __iter__(self) -> Iterator[Violation]:
        return iter(self.violations)

    def __add__(self, other: ViolationReport) -> ViolationReport:
        return ViolationReport(self.violations + other.violations)

    def render(self) -> str:
        """One violation per line, lexicographically sorted."""
        return "\n".join(sorted(v.line() for v in self.violations))


def verify_copacetic(s: Structure) -> ViolationReport:
    report = ViolationReport()
    adj = s.forest._adj
    k = s.variant.k

    for u in sorted(adj):
        for v, c in sorted(adj[u].items()):
            if u == v:
                report.add("(C1)", (u,), "self-edge")
            elif adj.get(v, {}).get(u) != c and u < v:
                report.add("(C1)", (u, v), "asymmetric edge relation")
            elif u < v and not (isinstance(c, int) and 1 <= c <= k):
                report.add("(C1)", (u, v), f"edge color {c!r} out of range")

    # (C2): union-find over edges, tracking a spanning forest to name the cycle
    parent = {v: v for v in adj}
    span: dict[str, list[str]] = {v: [] for v in adj}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v, _ in _raw_edges(adj):
        ru, rv = find(u), find(v)
        if ru == rv:
            cycle = _span_path(span, u, v)
            report.add("(C2)", (u, v), "cycle " + "-".join(cycle))
            continue
        parent[ru] = rv
        span[u].append(v)
        span[v].append(u)

    cols = s._cols
    for a in sorted(cols):
        col = cols[a]
        for b in sorted(s.params):
            c = col.get(b)
            if c is None:
                report.add("(C3)", (b, a), "rho undefined")
            elif not (isinstance(c, int) and 1 <= c <= k):
                report.add("(C3)", (b, a), f"rho value {c!r} out of range")

    for b, center, color, members in c4_excess(s):
        report.add("(C4)", (b, center, color), ",".join(members))
    return report


def _raw_edges(adj) -> list[tuple[str, str, int]]:
    seen = set()
    out = []
    for u in sorted(adj):
        for v, c in sorted(adj[u].items()):
            if u == v:
                continue
            key = (min(u, v), max(u, v))
            if key not in seen:
                seen.add(key)
                out.append((key[0], key[1], c))
    return out


def _span_path(span, u, v) -> list[str]:
    prev = {u: None}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        for y in span[x]:
            if y not in prev:
                prev[y] = x
                queue.append(y)
    path = [v]
    while path[-1] != u:
        path.append(prev[path[-1]])
    return path[::-1]


def check_completeness(s: Structure) -> ViolationReport:
    """Graded completeness: one record per missing closure image slot.

    For every parameter ``b``, vertex ``a`` and color ``i`` with
    ``rho(b, a) != i``, at least ``cap(i)`` color-``i`` neighbors of ``a``
    must be colored ``i`` by ``b``.
    """
    report = ViolationReport()
    for b in sorted(s.params):
        for a in sorted(s.vertices):
            own = s._cols[a][b]
            for i in s.variant.colors:
                if i == own:
                    continue
                have = len(s.images(b, a, i))
                need = s.variant.capacities[i - 1]
                if have < need:
                    report.add("(T2)", (b, a, i), f"{have}/{need}")
    return report


def check_closed(sub: SubsetHandle, s: Structure) -> ViolationReport:
    sub.validate(s)
    report = ViolationReport()
    for b in sorted(sub.p):
        for a in sorted(sub.o):
            for i in s.variant.colors:
                for img in s.images(b, a, i):
                    if img not in sub.o:
                        report.add("(i)", (b, a, i, img), "closure image outside the subset")
    for x, (u, v) in sorted(_escaping_vertices(s.forest, sub.o).items()):
        report.add("(ii)", (x,), f"on the path {u}..{v}")
    return report


def _escaping_vertices(f: Forest, vs: frozenset[str]) -> dict[str, tuple[str, str]]:
    """Vertices outside ``vs`` on a path between two members, with a witness pair."""
    escaping: dict[str, tuple[str, str]] = {}
    members = sorted(vs)
    for idx, u in enumerate(members):
        _, parent = f.bfs([u])
        for v in members[idx + 1:]:
            if v not in parent:
                continue
            x = parent[v]
            while x is not None and x != u:
                if x not in vs and x not in escaping:
                    escaping[x] = (u, v)
                x = parent[x]
    return escaping


def check_c4_coloring(f: Forest, col: Mapping[str, int], variant: TheoryVariant) -> ViolationReport:
    """Report every over-capacity group of same-colored vertices around a common neighbor."""
    if f.k != variant.k:
        raise ValueError(f"forest has k={f.k} but variant has k={variant.k}")
    f.require(*col)
    for v, c in col.items():
        if not (isinstance(c, int) and 1 <= c <= variant.k):
            raise ValueError(f"color {c!r} at {v} out of range 1..{variant.k}")
    buckets: dict[tuple[str, int], list[str]] = {}
    adj = f._adj
    for v, c in col.items():
        for center, ec in adj[v].items():
            if ec == c:
                buckets.setdefault((center, c), []).append(v)
    report = ViolationReport()
    for (center, c), members in sorted(buckets.items()):
        if len(members) > variant.capacities[c - 1]:
            report.add("(C4)", (center, c), ",".join(sorted(members)))
    return report


def is_connected(f: Forest, vs: Iterable[str]) -> bool:
    vs = set(vs)
    f.require(*vs)
    if len(vs) <= 1:
        return True
    start = min(vs)
    seen = {start}
    queue = deque([start])
    adj = f._adj
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y in vs and y not in seen:
                seen.add(y)
                queue.append(y)
    return len(seen) == len(vs)


def is_path_closed(f: Forest, vs: Iterable[str]) -> bool:
    """Condition (ii) alone: in a forest, each component must meet ``vs`` connectedly."""
    vs = set(vs)
    f.require(*vs)
    groups: dict[frozenset[str], set[str]] = {}
    for comp in f.components():
        part = vs & comp
        if part:
            groups[comp] = part
    return all(is_connected(f, part) for part in groups.values())


def as_coloring(col: Mapping[str, int]) -> C4Coloring:
    return col if isinstance(col, C4Coloring) else C4Coloring(col)
