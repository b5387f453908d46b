"""Line-oriented text format for structures, colorings, subsets and certificates.

A structure file looks like::

    variant k=2 cap=1,2
    strict=0
    vertex a
    vertex b
    param p
    edge 1 a b
    rho 2 p a
    rho 1 p b

Blank lines and ``#`` comments are ignored; identifiers match
``[A-Za-z0-9_]+``.  Serialization is canonical: header first, then
vertices, parameters, edges (endpoints ordered) and rho entries, each
sorted.
"""

from __future__ import annotations

import re
from collections.abc import Mapping

from .core import C4Coloring, Forest, Structure, SubsetHandle, TheoryVariant
from .errors import ParseError, StructureError
from .generate import random_instance
from .independence import Family, ForkingCertificate

__all__ = [
    "parse_certificate",
    "parse_coloring",
    "parse_structure",
    "parse_subset",
    "random_instance",
    "serialize_certificate",
    "serialize_coloring",
    "serialize_structure",
    "serialize_subset",
]

_IDENT = re.compile(r"[A-Za-z0-9_]+\Z")
_VARIANT = re.compile(r"variant\s+k=(\d+)\s+cap=(\d+(?:,\d+)*)\Z")


def _lines(text: str):
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield n, line.split()


def _ident(tok: str, n: int) -> str:
    if not _IDENT.match(tok):
        raise ParseError(f"bad identifier {tok!r}", n)
    return tok


def _int(tok: str, n: int) -> int:
    if not tok.isdigit():
        raise ParseError(f"expected a non-negative integer, got {tok!r}", n)
    return int(tok)


def _variant_line(words, n) -> TheoryVariant:
    m = _VARIANT.match(" ".join(words))
    if not m:
        raise ParseError("expected 'variant k=<k> cap=<c1,..,ck>'", n)
    k = int(m.group(1))
    caps = tuple(int(x) for x in m.group(2).split(","))
    if len(caps) != k:
        raise ParseError(f"cap lists {len(caps)} values for k={k}", n)
    try:
        return TheoryVariant(k, caps)
    except ValueError as exc:
        raise ParseError(str(exc), n) from exc


def _variant_text(v: TheoryVariant) -> str:
    return f"variant k={v.k} cap={','.join(map(str, v.capacities))}"


def parse_structure(text: str) -> Structure:
    lines = list(_lines(text))
    if not lines or lines[0][1][0] != "variant":
        raise ParseError("missing 'variant' header", lines[0][0] if lines else 1)
    n0, words0 = lines[0]
    variant = _variant_line(words0, n0)
    body = lines[1:]
    strict = False
    if body and body[0][1][0].startswith("strict="):
        n, words = body[0]
        flag = words[0][len("strict="):]
        if len(words) != 1 or flag not in ("0", "1"):
            raise ParseError("expected 'strict=0' or 'strict=1'", n)
        strict = flag == "1"
        body = body[1:]

    vertices: dict[str, int] = {}
    params: dict[str, int] = {}
    edges: dict[tuple[str, str], tuple[int, int]] = {}
    rho: dict[str, dict[str, int]] = {}
    rho_line: dict[tuple[str, str], int] = {}
    for n, words in body:
        kind, args = words[0], words[1:]
        if kind == "vertex" and len(args) == 1:
            x = _ident(args[0], n)
            if x in vertices or x in params:
                raise ParseError(f"identifier {x} declared twice", n)
            vertices[x] = n
        elif kind == "param" and len(args) == 1:
            x = _ident(args[0], n)
            if x in vertices or x in params:
                raise ParseError(f"identifier {x} declared twice", n)
            params[x] = n
        elif kind == "edge" and len(args) == 3:
            c, u, v = _int(args[0], n), _ident(args[1], n), _ident(args[2], n)
            for x in (u, v):
                if x not in vertices:
                    raise ParseError(f"edge mentions undeclared vertex {x}", n)
            if u == v:
                raise ParseError(f"self-edge on {u} violates (C1)", n)
            key = (min(u, v), max(u, v))
            if key in edges:
                raise ParseError(f"duplicate edge {u} {v} violates (C1)", n)
            if not 1 <= c <= variant.k:
                raise ParseError(f"edge color {c} out of range 1..{variant.k}", n)
            edges[key] = (c, n)
        elif kind == "rho" and len(args) == 3:
            c, b, a = _int(args[0], n), _ident(args[1], n), _ident(args[2], n)
            if b not in params:
                raise ParseError(f"rho mentions undeclared parameter {b}", n)
            if a not in vertices:
                raise ParseError(f"rho mentions undeclared vertex {a}", n)
            if (b, a) in rho_line:
                raise ParseError(f"rho({b},{a}) given twice", n)
            if not 1 <= c <= variant.k:
                raise ParseError(f"rho color {c} out of range 1..{variant.k}", n)
            rho.setdefault(b, {})[a] = c
            rho_line[(b, a)] = n
        else:
            raise ParseError(f"unrecognized line: {' '.join(words)}", n)

    parent = {v: v for v in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (u, v), (_, n) in sorted(edges.items(), key=lambda item: item[1][1]):
        ru, rv = find(u), find(v)
        if ru == rv:
            raise ParseError(f"edge {u} {v} closes a cycle (C2)", n)
        parent[ru] = rv
    forest = Forest(vertices, {k: c for k, (c, _) in edges.items()}, variant.k)
    for b in params:
        for a in vertices:
            if a not in rho.get(b, {}):
                raise ParseError(f"rho({b},{a}) missing (C3)", params[b])
    try:
        return Structure(forest, params, rho, variant, strict=strict)
    except StructureError as exc:
        raise ParseError(f"{exc} {exc.axiom or ''}".strip(), _last_line(body)) from exc


def _last_line(body) -> int:
    return body[-1][0] if body else 1


def serialize_structure(s: Structure) -> str:
    out = [_variant_text(s.variant), f"strict={int(s.strict)}"]
    out += [f"vertex {v}" for v in sorted(s.vertices)]
    out += [f"param {p}" for p in sorted(s.params)]
    out += [f"edge {c} {u} {v}" for u, v, c in s.forest.edges()]
    for p in sorted(s.params):
        for a in sorted(s.vertices):
            out.append(f"rho {s._cols[a][p]} {p} {a}")
    return "\n".join(out) + "\n"


def parse_coloring(text: str) -> C4Coloring:
    col: dict[str, int] = {}
    for n, words in _lines(text):
        if words[0] != "assign" or len(words) != 3:
            raise ParseError("expected 'assign <vertex> <color>'", n)
        v, c = _ident(words[1], n), _int(words[2], n)
        if v in col:
            raise ParseError(f"{v} assigned twice", n)
        col[v] = c
    return C4Coloring(col)


def serialize_coloring(col: Mapping[str, int]) -> str:
    return "".join(f"assign {v} {col[v]}\n" for v in sorted(col))


def parse_subset(text: str, s: Structure | None = None) -> SubsetHandle:
    lines = list(_lines(text))
    if not lines or lines[0][1] != ["subset"]:
        raise ParseError("missing 'subset' header", lines[0][0] if lines else 1)
    o, p = set(), set()
    for n, words in lines[1:]:
        if len(words) != 2 or words[0] not in ("vertex", "param"):
            raise ParseError("expected 'vertex <id>' or 'param <id>'", n)
        (o if words[0] == "vertex" else p).add(_ident(words[1], n))
    h = SubsetHandle(o, p)
    if s is not None:
        h.validate(s)
    return h


def serialize_subset(h: SubsetHandle) -> str:
    out = ["subset"] + [f"vertex {v}" for v in sorted(h.o)] + [f"param {p}" for p in sorted(h.p)]
    return "\n".join(out) + "\n"


def serialize_certificate(cert: ForkingCertificate) -> str:
    out = [f"certificate vertex={cert.target} arity={cert.arity}"]
    for fam in sorted(cert.families, key=lambda f: f.color):
        out.append(f"family {fam.color} center={fam.center} degree={fam.degree} members={','.join(fam.members)}")
    out.append(f"coverage colors={','.join(map(str, cert.coverage))}")
    return "\n".join(out) + "\n"


def _fields(words, n, names) -> dict[str, str]:
    got = {}
    for w in words:
        key, eq, val = w.partition("=")
        if not eq or key not in names or key in got:
            raise ParseError(f"unexpected field {w!r}", n)
        got[key] = val
    if set(got) != set(names):
        raise ParseError(f"expected fields {', '.join(names)}", n)
    return got


def parse_certificate(text: str) -> ForkingCertificate:
    lines = list(_lines(text))
    if not lines or lines[0][1][0] != "certificate":
        raise ParseError("missing 'certificate' header", lines[0][0] if lines else 1)
    n, words = lines[0]
    head = _fields(words[1:], n, ("vertex", "arity"))
    target, arity = _ident(head["vertex"], n), _int(head["arity"], n)
    families = []
    coverage = None
    for n, words in lines[1:]:
        if words[0] == "family" and len(words) >= 2:
            color = _int(words[1], n)
            f = _fields(words[2:], n, ("center", "degree", "members"))
            members = tuple(_ident(x, n) for x in f["members"].split(","))
            families.append(Family(color, _ident(f["center"], n), members, _int(f["degree"], n)))
        elif words[0] == "coverage" and coverage is None:
            f = _fields(words[1:], n, ("colors",))
            coverage = tuple(_int(x, n) for x in f["colors"].split(","))
        else:
            raise ParseError(f"unrecognized line: {' '.join(words)}", n)
    if coverage is None:
        raise ParseError("missing 'coverage' line", lines[-1][0])
    return ForkingCertificate(target, tuple(families), coverage, arity)


def read_structure(path) -> Structure:
    with open(path, encoding="utf-8") as fh:
        return parse_structure(fh.read())


def write_text(path, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
