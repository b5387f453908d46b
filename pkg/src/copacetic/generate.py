"""Random instance generators for fuzzing and the CLI."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .coloring import random_extension
from .construct import add_closure_image
from .core import STD, C4Coloring, Embedding, Forest, Structure, SubsetHandle, TheoryVariant
from .errors import CapacityError, PreconditionError
from .triple import PairData

__all__ = [
    "Profile",
    "TripleInput",
    "extend_over",
    "join_over",
    "random_coloring",
    "random_forest",
    "random_instance",
    "random_triple",
]

MAX_VERTICES = 200
MAX_PARAMS = 8


def _rng(rng) -> random.Random:
    return rng if isinstance(rng, random.Random) else random.Random(rng)


@dataclass(frozen=True)
class Profile:
    """Size ranges (inclusive) and shape knobs for :func:`random_instance`."""

    vertices: tuple[int, int] = (1, 12)
    params: tuple[int, int] = (0, 3)
    variant: TheoryVariant = STD
    attach: float = 0.85
    flips: float = 1.0


def random_forest(rng, n: int, k: int, attach: float = 0.85, prefix: str = "v") -> Forest:
    """``n`` vertices; each later vertex joins a random earlier one with probability ``attach``."""
    rng = _rng(rng)
    names = [f"{prefix}{i}" for i in range(n)]
    edges = []
    for i in range(1, n):
        if rng.random() < attach:
            edges.append((names[rng.randrange(i)], names[i], rng.randint(1, k)))
    return Forest(names, edges, k)


def random_coloring(rng, f: Forest, variant: TheoryVariant, flips: float = 1.0) -> C4Coloring:
    """A random valid (C4)-coloring: a random extension followed by capacity-respecting recolorings."""
    rng = _rng(rng)
    col = dict(random_extension(f, (), {}, variant, rng))
    adj = f._adj
    caps = variant.capacities
    vs = sorted(adj)
    for _ in range(int(flips * len(vs))):
        v = rng.choice(vs)
        c = rng.choice(list(variant.colors))
        ok = all(
            sum(1 for w, ec in adj[x].items() if ec == c and (c if w == v else col[w]) == c) <= caps[c - 1]
            for x, xc in adj[v].items()
            if xc == c
        )
        if ok:
            col[v] = c
    return C4Coloring(col)


def random_instance(rng, profile: Profile = Profile()) -> Structure:
    """A random copacetic structure within ``profile``."""
    rng = _rng(rng)
    if profile.vertices[1] > MAX_VERTICES or profile.params[1] > MAX_PARAMS:
        raise PreconditionError(f"profile exceeds the generator caps ({MAX_VERTICES} vertices, {MAX_PARAMS} params)")
    n = rng.randint(*profile.vertices)
    m = rng.randint(*profile.params)
    variant = profile.variant
    f = random_forest(rng, n, variant.k, profile.attach)
    params = [f"p{i}" for i in range(m)]
    rho = {p: dict(random_coloring(rng, f, variant, profile.flips)) for p in params}
    return Structure(f, params, rho, variant)


def extend_over(rng, m: Structure, prefix: str, max_new: int = 4, max_params: int = 2) -> Structure:
    """A random copacetic structure in which ``m`` sits as a closed substructure.

    New vertices hang off ``m`` (or start new components) so no path between
    vertices of ``m`` leaves it, and the parameters of ``m`` color the new
    vertices by a random extension, so none of them is an image at ``m``.
    """
    rng = _rng(rng)
    k = m.variant.k
    names = [f"{prefix}{i}" for i in range(rng.randint(0, max_new))]
    nodes = sorted(m.vertices)
    edges = []
    for x in names:
        if nodes and rng.random() < 0.85:
            edges.append((rng.choice(nodes), x, rng.randint(1, k)))
        nodes.append(x)
    f = m.forest.extended(names, edges)
    rho = {}
    for p in sorted(m.params):
        rho[p] = dict(random_extension(f, m.vertices, m.row(p), m.variant, rng))
    new_params = [f"{prefix}p{i}" for i in range(rng.randint(0, max_params))]
    for p in new_params:
        rho[p] = dict(random_coloring(rng, f, m.variant))
    return Structure(f, m.params | set(new_params), rho, m.variant)


def join_over(rng, m: Structure, x: Structure, y: Structure, cross_images: int = 3) -> PairData:
    """Freely join ``x`` and ``y`` over ``m`` and add images across the two sides.

    Parameters of one side color the other side's new vertices by a random
    extension.  Then up to ``cross_images`` closure images of one side's
    parameters are attached to the other side's new vertices (and, with some
    probability, further images hang off those).  The parts stay closed and
    independent over ``m``.
    """
    rng = _rng(rng)
    mo = set(m.vertices)
    xo, yo = set(x.vertices), set(y.vertices)
    if (xo & yo) != mo or (x.params & y.params) != m.params:
        raise PreconditionError("the two sides must meet exactly in M")
    f = x.forest.extended(sorted(yo - mo), [e for e in y.forest.edges() if not (e[0] in mo and e[1] in mo)])
    rho = {}
    for p in sorted(x.params | y.params):
        if p in m.params:
            row = {**x.row(p), **y.row(p)}
        elif p in x.params:
            row = dict(random_extension(f, xo, x.row(p), m.variant, rng))
        else:
            row = dict(random_extension(f, yo, y.row(p), m.variant, rng))
        rho[p] = row
    s = Structure(f, x.params | y.params, rho, m.variant)
    left = SubsetHandle(xo, x.params)
    right = SubsetHandle(yo, y.params)

    foreign = [(sorted(y.params - m.params), sorted(xo - mo)), (sorted(x.params - m.params), sorted(yo - mo))]
    fresh_points: list[str] = []
    for _ in range(cross_images):
        params, anchors = rng.choice(foreign)
        if not params or not anchors:
            continue
        b = rng.choice(params)
        a = rng.choice(anchors + fresh_points) if fresh_points and rng.random() < 0.3 else rng.choice(anchors)
        i = rng.choice(list(m.variant.colors))
        if a in fresh_points:
            b = rng.choice(sorted(s.params))
        name = s.fresh_vertex("x")
        try:
            s = add_closure_image(s, b, a, i, name=name)
        except CapacityError:
            continue
        fresh_points.append(name)
    return PairData(s, left, right)


@dataclass
class TripleInput:
    m: Structure
    ab: PairData
    ac: PairData
    bc: PairData
    iso: Embedding


def random_triple(rng, variant: TheoryVariant = STD, max_base: int = 4, cross_images: int = 3) -> TripleInput:
    """Random inputs satisfying the hypotheses of :func:`~copacetic.triple.triple_amalgam`."""
    rng = _rng(rng)
    m = random_instance(rng, Profile(vertices=(1, max_base), params=(0, 1), variant=variant))
    m = m.renamed({v: "m" + v for v in m.vertices} | {p: "m" + p for p in m.params})
    a = extend_over(rng, m, "a")
    b = extend_over(rng, m, "b")
    c = extend_over(rng, m, "c")
    rename = {x: "d" + x[1:] for x in (set(a.vertices) | set(a.params)) - set(m.vertices) - set(m.params)}
    a2 = a.renamed(rename)
    ab = join_over(rng, m, a, b, cross_images)
    ac = join_over(rng, m, a2, c, cross_images)
    bc = join_over(rng, m, b, c, cross_images)
    iso = Embedding(
        {v: rename.get(v, v) for v in a.vertices},
        {p: rename.get(p, p) for p in a.params},
    )
    return TripleInput(m, ab, ac, bc, iso)
