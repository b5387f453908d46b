"""Closure images, the closure operator, and the structure of independent pairs."""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass, field

from .axioms import check_closed
from .core import Structure, SubsetHandle, path_hull
from .errors import UnknownIdentifier

__all__ = [
    "ClosureImageSet",
    "PairReport",
    "closure_images",
    "closure_of",
    "pair_structure",
]


@dataclass(frozen=True)
class ClosureImageSet:
    """The color-``color`` neighbors of ``vertex`` that ``param`` colors ``color``.

    ``images`` is sorted; ``image(j)`` gives the ``j``-th one (1-based), a
    fixed lexicographic indexing of an otherwise unordered set.
    """

    param: str
    vertex: str
    color: int
    images: tuple[str, ...]

    def image(self, j: int) -> str | None:
        return self.images[j - 1] if 1 <= j <= len(self.images) else None

    def __len__(self):
        return len(self.images)

    def __iter__(self):
        return iter(self.images)

    def __contains__(self, v):
        return v in self.images


def closure_images(s: Structure, b: str, a: str, i: int) -> ClosureImageSet:
    if b not in s.params:
        raise UnknownIdentifier(f"unknown parameter {b!r}")
    s.forest.require(a)
    s.variant.check_color(i)
    return ClosureImageSet(b, a, i, s.images(b, a, i))


def closure_of(s: Structure, seed: SubsetHandle, param_filter: Iterable[str] | None = None) -> SubsetHandle:
    """Least superset of ``seed`` closed under paths and closure images.

    The images followed are those of the seed's parameters, or of the
    parameters in ``param_filter`` when it is given.  The P-part of the
    result is always the seed's; parameters are never added.
    """
    seed.validate(s)
    if param_filter is None:
        params = sorted(seed.p)
    else:
        params = sorted(set(param_filter))
        SubsetHandle((), params).validate(s)
    o = set(path_hull(s.forest, seed.o))
    # an image is a neighbor of the current set, and a forest subset that is
    # convex stays convex when a neighbor is added, so one hull pass suffices
    adj = s.forest._adj
    cols = s._cols
    frontier = deque(sorted(o))
    while frontier:
        a = frontier.popleft()
        for w, c in adj[a].items():
            if w in o:
                continue
            col = cols[w]
            if any(col.get(b) == c for b in params):
                o.add(w)
                frontier.append(w)
    return SubsetHandle(o, seed.p)


@dataclass
class PairReport:
    """Outcome of :func:`pair_structure`.

    ``hypothesis_failures`` is non-empty when the inputs do not meet the
    hypotheses; the remaining claims are then left as ``None``.
    """

    hypothesis_failures: list[str] = field(default_factory=list)
    closure_equal: bool | None = None
    attachment_ok: bool | None = None
    a_closed_in_star: bool | None = None
    b_closed_in_star: bool | None = None
    a_side: SubsetHandle | None = None
    b_side: SubsetHandle | None = None
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.hypothesis_failures and all(
            x is True for x in (self.closure_equal, self.attachment_ok, self.a_closed_in_star, self.b_closed_in_star)
        )


def pair_structure(
    s: Structure, m: SubsetHandle, a: SubsetHandle, b: SubsetHandle
) -> tuple[SubsetHandle, SubsetHandle, PairReport]:
    """Closures of an independent pair ``a``, ``b`` over ``m`` under their joint parameters.

    Returns ``(a_star, b_star, report)`` where ``a_star`` closes ``a`` under
    the parameters of ``a`` and ``b`` (likewise ``b_star``).  The report
    checks that together they give the closure of ``a | b``, and splits the
    new vertices by the side they hang off: every connected group of new
    vertices must attach by a single edge to a vertex of ``a`` or ``b``
    outside ``m``.
    """
    from .independence import independent

    for h in (m, a, b):
        h.validate(s)
    joint = a.p | b.p
    a_star = closure_of(s, a, joint)
    b_star = closure_of(s, b, joint)
    report = PairReport()

    for name, h in (("M", m), ("A", a), ("B", b)):
        bad = check_closed(h, s)
        if not bad.ok:
            report.hypothesis_failures.append(f"{name} is not closed: {bad.render()}")
    if not (m <= a and m <= b):
        report.hypothesis_failures.append("M is not contained in both A and B")
    if not report.hypothesis_failures:
        indep, witness = independent(s, m, a, b)
        if not indep:
            report.hypothesis_failures.append(f"A and B are dependent over M: {witness}")
    if report.hypothesis_failures:
        return a_star, b_star, report

    whole = closure_of(s, a | b)
    report.closure_equal = whole == (a_star | b_star)
    if not report.closure_equal:
        report.problems.append("closure of A|B differs from a_star | b_star")

    old = a.o | b.o
    new = (a_star.o | b_star.o) - old
    adj = s.forest._adj
    a_new, b_new = set(), set()
    attachment_ok = True
    seen: set[str] = set()
    for start in sorted(new):
        if start in seen:
            continue
        group = {start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y in new and y not in group:
                    group.add(y)
                    queue.append(y)
        seen |= group
        anchors = sorted({(x, y) for x in group for y in adj[x] if y in old})
        if len(anchors) != 1 or anchors[0][1] in m.o:
            attachment_ok = False
            report.problems.append(f"new vertices {sorted(group)} attach at {anchors}")
            continue
        (a_new if anchors[0][1] in a.o else b_new).update(group)
    report.attachment_ok = attachment_ok
    report.a_side = SubsetHandle(a.o | a_new, a.p)
    report.b_side = SubsetHandle(b.o | b_new, b.p)

    report.a_closed_in_star = check_closed(a, s.restrict(a_star)).ok and check_closed(a, s.restrict(report.a_side)).ok
    report.b_closed_in_star = check_closed(b, s.restrict(b_star)).ok and check_closed(b, s.restrict(report.b_side)).ok
    return a_star, b_star, report
