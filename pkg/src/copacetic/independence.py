"""Independence over closed bases, type equality, and dividing certificates."""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import NamedTuple

from .axioms import check_c4_coloring
from .closure import closure_of
from .coloring import DEFAULT_BRUTE_FORCE_CAP, iter_colorings
from .construct import complete_budgeted
from .core import C4Coloring, Forest, Structure, SubsetHandle, ball_boundary
from .errors import PreconditionError
from .isomorphism import find_isomorphism

__all__ = [
    "CertificateCheck",
    "all_colorings_raw",
    "ConfigurationAbsent",
    "DependenceWitness",
    "Family",
    "ForkingCertificate",
    "ForkingWitness",
    "Independence",
    "check_certificate",
    "existence_failure_certificate",
    "forking_witness",
    "inconsistency_degree",
    "independent",
    "same_type_over",
]

SHARED_CLOSURE = "SHARED_CLOSURE"
PATH = "PATH"


@dataclass(frozen=True)
class DependenceWitness:
    """Why two sets fail to be independent.

    ``kind`` is ``SHARED_CLOSURE`` (``element`` lies in both closures but
    not in the base) or ``PATH`` (``path`` joins the two closures outside
    the base; its endpoints are the first and last entries).
    """

    kind: str
    element: str | None = None
    path: tuple[str, ...] = ()

    def __str__(self):
        if self.kind == SHARED_CLOSURE:
            return f"{SHARED_CLOSURE} {self.element}"
        return f"{PATH} {' '.join(self.path)}"


class Independence(NamedTuple):
    independent: bool
    witness: DependenceWitness | None


def _avoiding_path(f: Forest, xs: Iterable[str], ys: Iterable[str], blocked: Iterable[str]) -> list[str] | None:
    """Shortest path from ``xs`` to ``ys`` with no vertex in ``blocked`` (ties broken by endpoint)."""
    xs, ys = sorted(set(xs)), set(ys)
    if not xs or not ys:
        return None
    dist, parent = f.bfs(xs, blocked)
    hits = sorted((dist[y], y) for y in ys if y in dist)
    if not hits:
        return None
    path = [hits[0][1]]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    return path[::-1]


def _closures(s: Structure, c: SubsetHandle, a: SubsetHandle, b: SubsetHandle, budget: int):
    for h in (c, a, b):
        h.validate(s)
    if budget:
        s = complete_budgeted(s, budget)
    base = closure_of(s, c)
    return s, base, closure_of(s, base | a), closure_of(s, base | b)


def independent(
    s: Structure, c: SubsetHandle, a: SubsetHandle, b: SubsetHandle, budget: int = 0
) -> Independence:
    """Decide ``a`` independent from ``b`` over the closure of ``c``.

    After an optional ``budget`` rounds of completion, the closures of
    ``c | a`` and ``c | b`` must meet only inside the closure of ``c``, and no
    path outside the closure of ``c`` may join them.
    """
    s, base, cla, clb = _closures(s, c, a, b, budget)
    shared = (cla.elements & clb.elements) - base.elements
    if shared:
        return Independence(False, DependenceWitness(SHARED_CLOSURE, element=min(shared)))
    path = _avoiding_path(s.forest, cla.o - base.o, clb.o - base.o, base.o)
    if path is not None:
        return Independence(False, DependenceWitness(PATH, path=tuple(path)))
    return Independence(True, None)


@dataclass(frozen=True)
class ForkingWitness:
    """Endpoints and vertices of a shortest path joining two closures outside the base."""

    a0: str
    b0: str
    length: int
    path: tuple[str, ...]

    @property
    def interior(self) -> tuple[str, ...]:
        return self.path[1:-1]


def forking_witness(
    s: Structure, c: SubsetHandle, a: SubsetHandle, b: SubsetHandle, budget: int = 0
) -> ForkingWitness:
    """The path data behind a path-type dependence.

    Raises :class:`PreconditionError` when the sets are independent or when
    they depend only through a shared closure element.
    """
    s, base, cla, clb = _closures(s, c, a, b, budget)
    xs, ys = cla.o - base.o, clb.o - base.o
    path = _avoiding_path(s.forest, xs - ys, ys - xs, base.o)
    if path is None:
        if (cla.elements & clb.elements) - base.elements:
            raise PreconditionError("the dependence is a shared closure element; there is no path witness")
        raise PreconditionError("the sets are independent over the base")
    return ForkingWitness(path[0], path[-1], len(path) - 1, tuple(path))


def _tuple_sorts(s: Structure, t: Sequence[str]) -> tuple[str, ...]:
    out = []
    for x in t:
        if s.is_vertex(x):
            out.append("O")
        elif s.is_param(x):
            out.append("P")
        else:
            s.handle([x])  # raises UnknownIdentifier
    return tuple(out)


def same_type_over(s: Structure, c: SubsetHandle, t1: Sequence[str], t2: Sequence[str]) -> bool:
    """Whether ``t1`` and ``t2`` have the same quantifier-free type over ``c``.

    Decided by searching for an isomorphism between the closures of
    ``c | t1`` and ``c | t2`` that fixes ``c`` and sends ``t1`` to ``t2``.
    """
    c.validate(s)
    if len(t1) != len(t2):
        raise PreconditionError(f"tuples of different lengths {len(t1)} and {len(t2)}")
    if _tuple_sorts(s, t1) != _tuple_sorts(s, t2):
        raise PreconditionError("tuples have different sort profiles")
    fixed: dict[str, str] = {x: x for x in c.elements}
    for x, y in zip(t1, t2):
        if fixed.setdefault(x, y) != y:
            return False
    if len(set(fixed.values())) != len(fixed):
        return False
    cl1 = closure_of(s, c | s.handle(t1))
    cl2 = closure_of(s, c | s.handle(t2))
    return find_isomorphism(s, cl1, s, cl2, fixed) is not None


def _satisfiable(f: Forest, constraints: Sequence[tuple[str, int]], variant, cap: int) -> bool:
    want: dict[str, int] = {}
    for v, i in constraints:
        if want.setdefault(v, i) != i:
            return False
    return next(iter_colorings(f, want, variant, cap), None) is not None


def inconsistency_degree(
    s: Structure,
    family: Sequence[tuple[str, int]],
    cap: int,
    enum_cap: int = DEFAULT_BRUTE_FORCE_CAP,
) -> int | None:
    """Least ``m <= cap`` such that no valid coloring meets any ``m`` of the constraints.

    A constraint ``(v, i)`` asks a coloring to give ``v`` color ``i``; a
    coloring is any total (C4)-coloring of the whole forest.  Returns
    ``None`` when every ``m``-subset up to ``cap`` is satisfiable.
    """
    family = list(family)
    s.forest.require(*(v for v, _ in family))
    for _, i in family:
        s.variant.check_color(i)
    if len(s.forest) > enum_cap:
        raise PreconditionError(f"{len(s.forest)} vertices exceeds the enumeration cap {enum_cap}")
    for m in range(1, min(cap, len(family)) + 1):
        if not any(_satisfiable(s.forest, sub, s.variant, enum_cap) for sub in itertools.combinations(family, m)):
            return m
    return None


class ConfigurationAbsent(PreconditionError):
    """No suitable ball boundary through the target vertex for some color."""

    def __init__(self, message: str, color: int):
        super().__init__(message)
        self.color = color


@dataclass(frozen=True)
class Family:
    color: int
    center: str
    members: tuple[str, ...]
    degree: int


@dataclass(frozen=True)
class ForkingCertificate:
    """Dividing families around ``target``, one per color.

    Every coloring gives ``target`` some color (``coverage``), and for each
    color ``i`` no coloring gives ``degree`` members of family ``i`` the
    color ``i`` at once.  ``arity`` is the largest tuple size checked for
    equal types among family members.
    """

    target: str
    families: tuple[Family, ...]
    coverage: tuple[int, ...]
    arity: int = 2

    def family(self, color: int) -> Family:
        for fam in self.families:
            if fam.color == color:
                return fam
        raise KeyError(color)


def existence_failure_certificate(
    s: Structure, o: str, arity: int = 2, enum_cap: int = DEFAULT_BRUTE_FORCE_CAP
) -> ForkingCertificate:
    """Build a :class:`ForkingCertificate` for the vertex ``o``.

    For each color ``i`` the family is the boundary of the unit color-``i``
    ball around the least color-``i`` neighbor of ``o`` whose boundary has
    more than ``cap(i)`` vertices.  Family members must have equal
    quantifier-free types for all increasing tuples up to ``arity``.
    """
    s.forest.require(o)
    if arity < 1:
        raise PreconditionError("arity must be at least 1")
    families = []
    empty = SubsetHandle()
    for i in s.variant.colors:
        need = s.variant.cap(i) + 1
        centers = sorted(u for u, c in s.forest.neighbors(o).items() if c == i and len(ball_boundary(s.forest, u, i)) >= need)
        if not centers:
            raise ConfigurationAbsent(f"{o} has no color-{i} neighbor with at least {need} color-{i} neighbors", i)
        center = centers[0]
        members = (o, *sorted(ball_boundary(s.forest, center, i) - {o}))
        for r in range(1, min(arity, len(members)) + 1):
            tuples = list(itertools.combinations(members, r))
            for t in tuples[1:]:
                if not same_type_over(s, empty, tuples[0], t):
                    raise PreconditionError(f"family members {tuples[0]} and {t} have different types")
        degree = inconsistency_degree(s, [(v, i) for v in members], len(members), enum_cap)
        if degree != need:
            raise PreconditionError(f"color-{i} family around {center} has inconsistency degree {degree}, expected {need}")
        families.append(Family(i, center, members, degree))
    return ForkingCertificate(o, tuple(families), tuple(s.variant.colors), arity)


@dataclass
class CertificateCheck:
    problems: list[str] = field(default_factory=list)
    colorings: int = 0

    @property
    def ok(self) -> bool:
        return not self.problems


def all_colorings_raw(f: Forest, variant) -> list[C4Coloring]:
    """Every total (C4)-coloring of ``f``, by plain enumeration of all assignments."""
    vs = sorted(f.vertices)
    out = []
    for combo in itertools.product(variant.colors, repeat=len(vs)):
        col = dict(zip(vs, combo))
        if check_c4_coloring(f, col, variant).ok:
            out.append(C4Coloring(col))
    return out


def check_certificate(s: Structure, cert: ForkingCertificate, raw_cap: int = 12) -> CertificateCheck:
    """Re-verify a certificate independently of how it was produced.

    Enumerates every assignment of colors to the forest, keeps the valid
    ones, and checks each family against them directly; then cross-checks
    the degrees with :func:`inconsistency_degree`.
    """
    out = CertificateCheck()
    if len(s.forest) > raw_cap:
        raise PreconditionError(f"{len(s.forest)} vertices exceeds the raw enumeration cap {raw_cap}")
    s.forest.require(cert.target)
    valid = all_colorings_raw(s.forest, s.variant)
    out.colorings = len(valid)
    if not valid:
        out.problems.append("the forest admits no valid coloring at all")
    if set(cert.coverage) != set(s.variant.colors):
        out.problems.append(f"coverage {cert.coverage} does not list every color")
    if {fam.color for fam in cert.families} != set(cert.coverage):
        out.problems.append("families do not match the coverage colors")
    for col in valid:
        if col[cert.target] not in cert.coverage:
            out.problems.append(f"a coloring gives {cert.target} the uncovered color {col[cert.target]}")
            break
    for fam in cert.families:
        i, d = fam.color, fam.degree
        label = f"color-{i} family"
        if cert.target not in fam.members:
            out.problems.append(f"{label} does not contain {cert.target}")
        if len(fam.members) < s.variant.cap(i) + 1:
            out.problems.append(f"{label} has fewer than {s.variant.cap(i) + 1} members")
        if d != s.variant.cap(i) + 1:
            out.problems.append(f"{label} has degree {d}, expected {s.variant.cap(i) + 1}")
        for v in fam.members:
            if s.forest.color(v, fam.center) != i:
                out.problems.append(f"{label}: {v} is not a color-{i} neighbor of {fam.center}")
        for sub in itertools.combinations(fam.members, d):
            if any(all(col[v] == i for v in sub) for col in valid):
                out.problems.append(f"{label}: members {sub} can all take color {i}")
        for sub in itertools.combinations(fam.members, d - 1):
            if not any(all(col[v] == i for v in sub) for col in valid):
                out.problems.append(f"{label}: degree is not minimal, {sub} is already unsatisfiable")
        recomputed = inconsistency_degree(s, [(v, i) for v in fam.members], len(fam.members), max(len(s.forest), 1))
        if recomputed != d:
            out.problems.append(f"{label}: inconsistency_degree gives {recomputed}, certificate says {d}")
    return out
