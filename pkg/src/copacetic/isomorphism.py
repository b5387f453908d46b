"""Backtracking search for isomorphisms between finite substructures.

Two tuples have the same quantifier-free type over a base exactly when the
substructures they generate are isomorphic by a map fixing the base and
sending one tuple to the other; :func:`find_isomorphism` decides that.
"""

from __future__ import annotations

from collections import Counter, deque
from collections.abc import Mapping

from .core import Embedding, Structure, SubsetHandle

__all__ = ["find_isomorphism"]


def find_isomorphism(
    s1: Structure,
    sub1: SubsetHandle,
    s2: Structure,
    sub2: SubsetHandle,
    fixed: Mapping[str, str] | None = None,
) -> Embedding | None:
    """An isomorphism from ``s1`` restricted to ``sub1`` onto ``s2`` restricted to ``sub2``.

    ``fixed`` prescribes the images of some identifiers (vertices to
    vertices, parameters to parameters).  Returns ``None`` when no
    isomorphism extends it.
    """
    sub1.validate(s1)
    sub2.validate(s2)
    fixed = dict(fixed or {})
    if s1.variant != s2.variant:
        return None
    if len(sub1.o) != len(sub2.o) or len(sub1.p) != len(sub2.p):
        return None

    fv, fp = {}, {}
    for x, y in fixed.items():
        if x in sub1.o and y in sub2.o:
            fv[x] = y
        elif x in sub1.p and y in sub2.p:
            fp[x] = y
        else:
            return None
    if len(set(fv.values())) != len(fv) or len(set(fp.values())) != len(fp):
        return None

    adj1 = {v: {w: c for w, c in s1.forest._adj[v].items() if w in sub1.o} for v in sub1.o}
    adj2 = {v: {w: c for w, c in s2.forest._adj[v].items() if w in sub2.o} for v in sub2.o}
    fixed_params = sorted(fp)
    free1 = sorted(sub1.p - fp.keys())
    free2 = sorted(sub2.p - set(fp.values()))
    cols1, cols2 = s1._cols, s2._cols

    def sig(adj, cols, v, fixed_ps, free_ps):
        return (
            tuple(cols[v][b] for b in fixed_ps),
            tuple(sorted(Counter(cols[v][b] for b in free_ps).items())),
            tuple(sorted(adj[v].values())),
        )

    sig1 = {v: sig(adj1, cols1, v, fixed_params, free1) for v in sub1.o}
    sig2 = {v: sig(adj2, cols2, v, [fp[b] for b in fixed_params], free2) for v in sub2.o}
    if Counter(sig1.values()) != Counter(sig2.values()):
        return None
    for x, y in fv.items():
        if sig1[x] != sig2[y]:
            return None

    # visiting order: components with fixed vertices first, each by BFS so
    # that every vertex after a component's root has a mapped parent
    order: list[tuple[str, str | None]] = []
    seen: set[str] = set()
    rarity = Counter(sig1.values())
    roots = sorted(fv) + sorted(sub1.o - fv.keys(), key=lambda v: (rarity[sig1[v]], v))
    for r in roots:
        if r in seen:
            continue
        seen.add(r)
        order.append((r, None))
        queue = deque([r])
        while queue:
            x = queue.popleft()
            for y in sorted(adj1[x]):
                if y not in seen:
                    seen.add(y)
                    order.append((y, x))
                    queue.append(y)

    vmap: dict[str, str] = {}
    used: set[str] = set()
    by_sig2: dict[tuple, list[str]] = {}
    for w in sorted(sub2.o):
        by_sig2.setdefault(sig2[w], []).append(w)

    def candidates(v, parent):
        if v in fv:
            return [fv[v]]
        if parent is not None:
            pw = vmap[parent]
            c = adj1[parent][v]
            return sorted(w for w, ec in adj2[pw].items() if ec == c)
        return by_sig2.get(sig1[v], [])

    def consistent(v, w):
        if w in used or sig1[v] != sig2[w]:
            return False
        if v in fv and fv[v] != w:
            return False
        for u, c in adj1[v].items():
            if u in vmap and adj2[w].get(vmap[u]) != c:
                return False
        inverse_hits = sum(1 for u in adj2[w] if u in used)
        mapped_nbrs = sum(1 for u in adj1[v] if u in vmap)
        return inverse_hits == mapped_nbrs

    def param_map():
        keys1: dict[tuple, list[str]] = {}
        vs = [v for v, _ in order]
        for b in free1:
            keys1.setdefault(tuple(cols1[v][b] for v in vs), []).append(b)
        keys2: dict[tuple, list[str]] = {}
        for q in free2:
            keys2.setdefault(tuple(cols2[vmap[v]][q] for v in vs), []).append(q)
        if {k: len(x) for k, x in keys1.items()} != {k: len(x) for k, x in keys2.items()}:
            return None
        pm = dict(fp)
        for key, bs in keys1.items():
            pm.update(zip(bs, keys2[key]))
        return pm

    # depth-first search with an explicit stack of candidate iterators
    stack = []
    idx = 0
    pm = None
    while True:
        if idx == len(order):
            pm = param_map()
            if pm is not None:
                break
        else:
            v, parent = order[idx]
            stack.append(iter(candidates(v, parent)))
        # advance the deepest iterator, backtracking as needed
        while stack:
            depth = len(stack) - 1
            v = order[depth][0]
            if v in vmap:
                used.discard(vmap.pop(v))
            w = next((w for w in stack[-1] if consistent(v, w)), None)
            if w is not None:
                vmap[v] = w
                used.add(w)
                idx = depth + 1
                break
            stack.pop()
        else:
            return None
    return Embedding(dict(vmap), pm)
