"""Command-line front end.

Exit status is 0 for an affirmative result, 1 for a negative one (a
violation, a dependence, a failed check) and 2 for usage or input errors.
"""

from __future__ import annotations

import argparse
import sys
from collections.abc import Sequence

from .axioms import check_closed, check_completeness, verify_copacetic
from .closure import closure_of
from .coloring import DEFAULT_BRUTE_FORCE_CAP, brute_force_colorings, extend_coloring, interpolate_colorings
from .construct import forge, free_amalgam
from .core import Embedding, Structure, SubsetHandle
from .errors import CopaceticError, HypothesisFailure
from .independence import (
    ConfigurationAbsent,
    check_certificate,
    existence_failure_certificate,
    forking_witness,
    independent,
)
from .serialization import (
    parse_certificate,
    parse_coloring,
    parse_structure,
    serialize_certificate,
    serialize_coloring,
    serialize_structure,
    serialize_subset,
)
from .triple import PairData, triple_amalgam

OK, NEGATIVE, USAGE = 0, 1, 2


class _Usage(Exception):
    pass


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load(path: str) -> Structure:
    return parse_structure(_read(path))


def _ids(text: str | None) -> list[str]:
    return [x for x in (text or "").split(",") if x]


def _subset(s: Structure, text: str | None) -> SubsetHandle:
    return s.handle(_ids(text))


def _assignment(text: str) -> dict[str, int]:
    out = {}
    for item in _ids(text):
        v, eq, c = item.partition("=")
        if not eq or not c.isdigit():
            raise _Usage(f"bad assignment {item!r}; expected vertex=color")
        out[v] = int(c)
    return out


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- subcommands -------------------------------------------------------------


def cmd_verify(args) -> int:
    s = _load(args.file)
    report = verify_copacetic(s)
    if args.completeness:
        report = report + check_completeness(s)
    if report.ok:
        print("copacetic" + (" and complete" if args.completeness else ""))
        return OK
    print(report.render())
    return NEGATIVE


def cmd_close(args) -> int:
    s = _load(args.file)
    seed = _subset(s, args.seed)
    if args.check:
        report = check_closed(seed, s)
        print("closed" if report.ok else report.render())
        return OK if report.ok else NEGATIVE
    params = None if args.params is None else _ids(args.params)
    _emit(args, serialize_subset(closure_of(s, seed, params)))
    return OK


def cmd_color_extend(args) -> int:
    s = _load(args.file)
    if args.coloring:
        col = dict(parse_coloring(_read(args.coloring)))
    else:
        col = _assignment(args.assign or "")
    domain = _ids(args.domain) if args.domain is not None else list(col)
    _emit(args, serialize_coloring(extend_coloring(s.forest, domain, col, s.variant)))
    return OK


def cmd_interpolate(args) -> int:
    s = _load(args.file)
    targets = []
    for t in args.target or []:
        col = _assignment(t)
        targets.append((col.keys(), col))
    _, col = interpolate_colorings(s.forest, targets, s.variant)
    _emit(args, serialize_coloring(col))
    return OK


def cmd_amalgam(args) -> int:
    a = _load(args.a)
    b = _load(args.b)
    c = _subset(a, args.base)
    out, _, _ = free_amalgam(a, c, b)
    _emit(args, serialize_structure(out))
    return OK


def cmd_triple_amalgam(args) -> int:
    m, ab, ac, bc = (_load(p) for p in (args.m, args.ab, args.ac, args.bc))
    a, a2, b, c = _ids(args.a), _ids(args.a_prime), _ids(args.b), _ids(args.c)
    if len(a) != len(a2):
        raise _Usage("--a and --a-prime must list the same number of identifiers")
    a_h, a2_h = ab.handle(a), ac.handle(a2)
    iso = Embedding(
        {x: y for x, y in zip(a, a2) if ab.is_vertex(x)},
        {x: y for x, y in zip(a, a2) if ab.is_param(x)},
    )
    result = triple_amalgam(
        m,
        PairData(ab, a_h, ab.handle(b)),
        PairData(ac, a2_h, ac.handle(c)),
        PairData(bc, bc.handle(b), bc.handle(c)),
        iso,
        depth=args.depth,
    )
    print("\n".join(result.report.lines()))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(serialize_structure(result.structure))
    return OK if result.report.ok else NEGATIVE


def cmd_forge(args) -> int:
    seed = _load(args.seed_file) if args.seed_file else Structure.empty()
    s = forge(seed, args.steps, args.rng)
    report = verify_copacetic(s)
    status = "copacetic" if report.ok else "NOT copacetic"
    print(f"forged {args.steps} steps: {len(s.forest)} vertices, {len(s.params)} params, {status}", file=sys.stderr)
    _emit(args, serialize_structure(s))
    return OK if report.ok else NEGATIVE


def cmd_indep(args) -> int:
    s = _load(args.file)
    base, left, right = (_subset(s, x) for x in (args.base, args.left, args.right))
    ok, witness = independent(s, base, left, right, args.depth)
    if ok:
        print("independent")
        return OK
    print(f"dependent: {witness}")
    if args.forking and witness.kind == "PATH":
        w = forking_witness(s, base, left, right, args.depth)
        print(f"forking witness: a0={w.a0} b0={w.b0} length={w.length} interior={','.join(w.interior)}")
    return NEGATIVE


def cmd_certify(args) -> int:
    s = _load(args.file)
    try:
        cert = existence_failure_certificate(s, args.vertex, args.radius, args.cap)
    except ConfigurationAbsent as exc:
        print(f"no certificate: {exc} (color {exc.color})")
        return NEGATIVE
    text = serialize_certificate(cert)
    check = check_certificate(s, cert)
    sys.stdout.write(text)
    print(f"independent check: {'passed' if check.ok else 'FAILED'} over {check.colorings} colorings")
    for p in check.problems:
        print(f"problem: {p}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return OK if check.ok else NEGATIVE


def cmd_oracle(args) -> int:
    s = _load(args.file)
    if args.certificate:
        check = check_certificate(s, parse_certificate(_read(args.certificate)))
        print(f"certificate {'valid' if check.ok else 'INVALID'} over {check.colorings} colorings")
        for p in check.problems:
            print(f"problem: {p}")
        return OK if check.ok else NEGATIVE
    cols = brute_force_colorings(s.forest, _assignment(args.constrain or ""), s.variant, args.cap, args.jobs)
    print(f"{len(cols)} colorings")
    if args.list:
        order = sorted(s.vertices)
        for col in cols:
            print(" ".join(f"{v}={col[v]}" for v in order))
    return OK if cols else NEGATIVE


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the resulting structure, coloring or certificate here")
    common.add_argument("--depth", type=int, default=2, help="completion budget (default 2)")
    common.add_argument("--rng", type=int, default=0, help="random seed (default 0)")

    p = argparse.ArgumentParser(prog="copacetic", description="Workbench for copacetic structures.")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("verify", parents=[common], help="check the structure axioms")
    q.add_argument("file")
    q.add_argument("--completeness", action="store_true", help="also report missing closure images")
    q.set_defaults(func=cmd_verify)

    q = sub.add_parser("close", parents=[common], help="closure of a subset, or check that it is closed")
    q.add_argument("file")
    q.add_argument("--seed", default="", help="comma-separated identifiers")
    q.add_argument("--params", help="parameters whose images to follow (default: those in the seed)")
    q.add_argument("--check", action="store_true", help="report whether the seed itself is closed")
    q.set_defaults(func=cmd_close)

    q = sub.add_parser("color-extend", parents=[common], help="extend a coloring of a path-closed set")
    q.add_argument("file")
    q.add_argument("--domain", help="comma-separated domain (default: the assigned vertices)")
    q.add_argument("--assign", help="vertex=color list")
    q.add_argument("--coloring", help="coloring file with 'assign' lines")
    q.set_defaults(func=cmd_color_extend)

    q = sub.add_parser("interpolate", parents=[common], help="realize colorings on far-apart sets at once")
    q.add_argument("file")
    q.add_argument("--target", action="append", help="vertex=color list for one connected set (repeatable)")
    q.set_defaults(func=cmd_interpolate)

    q = sub.add_parser("amalgam", parents=[common], help="free amalgam of two structures over a closed base")
    q.add_argument("a")
    q.add_argument("b")
    q.add_argument("--base", default="", help="identifiers of the common closed part")
    q.set_defaults(func=cmd_amalgam)

    q = sub.add_parser("triple-amalgam", parents=[common], help="amalgamate three independent pairs")
    for name in ("m", "ab", "ac", "bc"):
        q.add_argument(name)
    q.add_argument("--a", default="", help="part a in AB")
    q.add_argument("--a-prime", default="", help="part a' in AC, listed in the order matching --a")
    q.add_argument("--b", default="", help="part b (in AB and BC)")
    q.add_argument("--c", default="", help="part c (in AC and BC)")
    q.set_defaults(func=cmd_triple_amalgam)

    q = sub.add_parser("forge", parents=[common], help="grow a random copacetic structure")
    q.add_argument("--steps", type=int, default=100)
    q.add_argument("--seed-file", help="start from this structure instead of the empty one")
    q.set_defaults(func=cmd_forge)

    q = sub.add_parser("indep", parents=[common], help="test independence over a base")
    q.add_argument("file")
    q.add_argument("--base", default="")
    q.add_argument("--left", default="")
    q.add_argument("--right", default="")
    q.add_argument("--forking", action="store_true", help="also print the path witness data")
    q.set_defaults(func=cmd_indep)

    q = sub.add_parser("certify-noexistence", parents=[common], help="certificate that a vertex's type divides")
    q.add_argument("file")
    q.add_argument("--vertex", required=True)
    q.add_argument("--radius", type=int, default=2, help="tuple size up to which family members must agree in type")
    q.add_argument("--cap", type=int, default=DEFAULT_BRUTE_FORCE_CAP, help="enumeration cap")
    q.set_defaults(func=cmd_certify)

    q = sub.add_parser("oracle", parents=[common], help="enumerate all valid colorings")
    q.add_argument("file")
    q.add_argument("--constrain", help="vertex=color list")
    q.add_argument("--cap", type=int, default=DEFAULT_BRUTE_FORCE_CAP)
    q.add_argument("--jobs", type=int, default=1)
    q.add_argument("--list", action="store_true", help="print every coloring")
    q.add_argument("--certificate", help="re-check this certificate file instead")
    q.set_defaults(func=cmd_oracle)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _Usage as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except HypothesisFailure as exc:
        print(f"error: hypothesis failed at step {exc.step}: {exc}", file=sys.stderr)
        return USAGE
    except (CopaceticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


run = main

if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
