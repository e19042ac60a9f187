"""Command line front end: ``qdesign <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import designs as D
from . import fileformat as F
from . import km_search as K
from . import largesets as L
from . import params as P
from .gfq import Subspace, enumerate_subspaces, field_make

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    return D.default_workers()


def _emit(args, obj: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(obj, indent=1, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _verify_lines(rep: D.VerifyReport) -> list[str]:
    status = "ok" if rep.ok else "FAILED"
    lines = [
        f"{rep.params}: {status}",
        f"  blocks: {rep.blocks}",
        f"  t-subspaces covered: {rep.checked_t_subspaces} of {rep.expected_t_subspaces}",
        f"  incidence counts: min {rep.min_count}, max {rep.max_count}",
    ]
    if rep.first_violation:
        lines.append(f"  first violation: {rep.first_violation[0]} lies in {rep.first_violation[1]} blocks")
    return lines


def _point(text: str | None, d: D.Design) -> Subspace:
    if text is None:
        return D.first_point(d.field, d.v)
    return Subspace.from_text(text, d.field, d.v)


def _hyperplane(text: str | None, d: D.Design) -> Subspace:
    if text is None:
        return D.first_hyperplane(d.field, d.v)
    return Subspace.from_text(text, d.field, d.v)


def _finish_design(args, d: D.Design, what: str) -> int:
    F.write_design(d, args.out)
    obj = {"command": what, "params": str(d.params), "blocks": len(d), "out": args.out}
    lines = [f"{what}: {d.params} with {len(d)} blocks written to {args.out}"]
    code = EXIT_OK
    if getattr(args, "verify", False):
        rep = D.verify(d, _threads(args))
        obj["verify"] = rep.as_dict()
        lines += _verify_lines(rep)
        code = EXIT_OK if rep.ok else EXIT_FAIL
    _emit(args, obj, lines)
    return code


def _finish_ls(args, ls: L.LargeSet, what: str) -> int:
    F.write_ls(ls, args.out)
    obj = {"command": what, "large_set": ls.label, "out": args.out}
    lines = [f"{what}: {ls.label} written to {args.out}"]
    code = EXIT_OK
    if getattr(args, "verify", False):
        rep = L.verify_ls(ls, _threads(args))
        obj["verify"] = rep.as_dict()
        lines.append(f"  partition and member designs: {'ok' if rep.ok else 'FAILED'}")
        code = EXIT_OK if rep.ok else EXIT_FAIL
    _emit(args, obj, lines)
    return code


def cmd_params(args) -> int:
    p = P.ParameterSet(args.t, args.v, args.k, args.lam, args.q)
    rep = P.parameter_report(p)
    obj = rep.as_dict()
    if rep.admissible:
        lines = [f"{p}: admissible"]
    else:
        lines = [f"{p}: not admissible (λ_{rep.failing_s} non-integral)"]
    lines.append("  " + ", ".join(f"λ_{s} = {x}" for s, x in enumerate(rep.lambda_s)))
    for name, value in rep.mapped.items():
        lines.append(f"  {name}: {value}")
    if args.scan_q:
        qs = P.admissible_prime_powers(p.t, p.v, p.k, p.lam, args.scan_q)
        obj["admissible_q"] = qs
        lines.append(f"  admissible for prime powers q <= {args.scan_q}: {qs if qs else 'none'}")
    _emit(args, obj, lines)
    return EXIT_OK


def cmd_verify(args) -> int:
    d = F.read_design(args.file)
    rep = D.verify(d, _threads(args))
    _emit(args, rep.as_dict(), _verify_lines(rep))
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_derive(args) -> int:
    d = F.read_design(args.file)
    return _finish_design(args, D.derived(d, _point(args.point, d)), "derive")


def cmd_residual(args) -> int:
    d = F.read_design(args.file)
    return _finish_design(args, D.residual(d, _hyperplane(args.hyperplane, d)), "residual")


def cmd_dual(args) -> int:
    return _finish_design(args, D.dual(F.read_design(args.file)), "dual")


def cmd_reduce(args) -> int:
    return _finish_design(args, D.reduce(F.read_design(args.file)), "reduce")


def cmd_combine(args) -> int:
    der = F.read_design(args.derived)
    res = F.read_design(args.residual)
    target = P.ParameterSet.parse(args.target)
    return _finish_design(args, D.combine(der, res, target), "combine")


def cmd_search(args) -> int:
    p = P.ParameterSet(args.t, args.v, args.k, args.lam, args.q)
    if args.large_set:
        ls = K.find_large_set(p, args.large_set, args.group, args.node_limit)
        if ls is None:
            _emit(args, {"command": "search", "found": False}, [f"no LS[{args.large_set}] with members {p} found"])
            return EXIT_FAIL
        return _finish_ls(args, ls, "search")
    out = K.search_design(p, args.group, args.limit, args.node_limit, fallback=not args.no_fallback)
    obj = {
        "command": "search",
        "params": str(p),
        "group": out.group,
        "matrix_shape": list(out.shape),
        "solutions": len(out.designs),
        "attempts": out.attempts,
    }
    lines = [f"search {p}"] + [f"  {a}" for a in out.attempts]
    if not out.designs:
        lines.append("  no design found (search exhausted or budget reached; this is not a nonexistence proof)")
        _emit(args, obj, lines)
        return EXIT_FAIL
    d = out.designs[0]
    code = EXIT_OK
    if args.out:
        F.write_design(d, args.out)
        obj["out"] = args.out
        lines.append(f"  wrote {len(d)} blocks to {args.out}")
    if args.verify:
        rep = D.verify(d, _threads(args))
        obj["verify"] = rep.as_dict()
        lines += _verify_lines(rep)
        code = EXIT_OK if rep.ok else EXIT_FAIL
    _emit(args, obj, lines)
    return code


def cmd_enumerate(args) -> int:
    field = field_make(args.q)
    if args.count:
        n = sum(1 for _ in enumerate_subspaces(args.v, args.k, field))
        _emit(args, {"v": args.v, "k": args.k, "q": args.q, "count": n}, [str(n)])
        return EXIT_OK
    subs = [s.to_text() for s in enumerate_subspaces(args.v, args.k, field)]
    _emit(args, {"v": args.v, "k": args.k, "q": args.q, "subspaces": subs}, subs)
    return EXIT_OK


def cmd_ls_verify(args) -> int:
    ls = F.read_ls(args.file)
    rep = L.verify_ls(ls, _threads(args))
    lines = [
        f"{rep.label}: {'ok' if rep.ok else 'FAILED'}",
        f"  pairwise disjoint: {rep.disjoint}",
        f"  blocks: {rep.total_blocks} of {rep.expected_blocks}",
    ]
    for i, m in enumerate(rep.members):
        lines.append(f"  member {i}: {'ok' if m.ok else 'FAILED'} ({m.blocks} blocks)")
    _emit(args, rep.as_dict(), lines)
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_ls_dual(args) -> int:
    return _finish_ls(args, L.dual_ls(F.read_ls(args.file)), "ls-dual")


def cmd_ls_derive(args) -> int:
    ls = F.read_ls(args.file)
    return _finish_ls(args, L.derived_ls(ls, _point(args.point, ls.members[0])), "ls-derive")


def cmd_ls_residual(args) -> int:
    ls = F.read_ls(args.file)
    return _finish_ls(args, L.residual_ls(ls, _hyperplane(args.hyperplane, ls.members[0])), "ls-residual")


def cmd_ls_combine(args) -> int:
    der = F.read_ls(args.derived)
    res = F.read_ls(args.residual)
    target = P.ParameterSet.parse(args.target) if args.target else None
    pairing = None
    if args.pairing:
        try:
            pairing = [int(x) for x in args.pairing.split(",")]
        except ValueError:
            raise UsageError(f"--pairing must be comma-separated integers, got {args.pairing!r}") from None
    return _finish_ls(args, L.combine_ls(der, res, target, pairing), "ls-combine")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit the report as JSON")
    common.add_argument("--threads", type=int, default=None, help="worker processes (default: $QDESIGN_THREADS or all cores)")

    parser = argparse.ArgumentParser(prog="qdesign", description="Subspace designs over GF(q).")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
        return sp

    sp = add("params", cmd_params, "admissibility and parameter maps of t-(v,k,lambda)_q")
    for name in ("t", "v", "k"):
        sp.add_argument(name, type=int)
    sp.add_argument("lam", metavar="lambda", type=int)
    sp.add_argument("q", type=int)
    sp.add_argument("--scan-q", type=int, default=0, metavar="QMAX", help="also list the prime powers q <= QMAX that are admissible")

    sp = add("verify", cmd_verify, "verify a qdesign/1 file")
    sp.add_argument("file")

    for name, fn, extra in (
        ("derive", cmd_derive, "--point"),
        ("residual", cmd_residual, "--hyperplane"),
        ("dual", cmd_dual, None),
        ("reduce", cmd_reduce, None),
    ):
        sp = add(name, fn, f"{name} design of a qdesign/1 file")
        sp.add_argument("file")
        if extra:
            sp.add_argument(extra, default=None, help="subspace text, e.g. 1000000 (default: first unit vector / its dual)")
        sp.add_argument("--out", required=True)
        sp.add_argument("--verify", action="store_true")

    sp = add("combine", cmd_combine, "combine derived and residual ingredients into the reduced design")
    sp.add_argument("--derived", required=True)
    sp.add_argument("--residual", required=True)
    sp.add_argument("--target", required=True, help='parameter set, e.g. "3-(8,4,3)_2"')
    sp.add_argument("--out", required=True)
    sp.add_argument("--verify", action="store_true")

    sp = add("search", cmd_search, "Kramer-Mesner search under a prescribed group")
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--v", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--lambda", dest="lam", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--group", default="singer-normalizer", choices=["trivial", "singer", "singer-normalizer"])
    sp.add_argument("--limit", type=int, default=1)
    sp.add_argument("--node-limit", type=int, default=None)
    sp.add_argument("--no-fallback", action="store_true", help="do not retry with the plain Singer cycle")
    sp.add_argument("--large-set", type=int, default=0, metavar="N", help="search an LS[N] with these member parameters")
    sp.add_argument("--out")
    sp.add_argument("--verify", action="store_true")

    sp = add("enumerate", cmd_enumerate, "list the k-subspaces of GF(q)^v")
    sp.add_argument("--v", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--count", action="store_true")

    sp = add("ls-verify", cmd_ls_verify, "verify a qls/1 file")
    sp.add_argument("file")
    for name, fn, extra in (
        ("ls-dual", cmd_ls_dual, None),
        ("ls-derive", cmd_ls_derive, "--point"),
        ("ls-residual", cmd_ls_residual, "--hyperplane"),
    ):
        sp = add(name, fn, f"member-wise {name[3:]} of a large set")
        sp.add_argument("file")
        if extra:
            sp.add_argument(extra, default=None)
        sp.add_argument("--out", required=True)
        sp.add_argument("--verify", action="store_true")

    sp = add("ls-combine", cmd_ls_combine, "combine two large sets member by member")
    sp.add_argument("--derived", required=True)
    sp.add_argument("--residual", required=True)
    sp.add_argument("--target", default=None)
    sp.add_argument("--pairing", default=None, help="comma-separated permutation of residual members")
    sp.add_argument("--out", required=True)
    sp.add_argument("--verify", action="store_true")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if args.threads is not None and args.threads < 1:
        print(json.dumps({"error": "UsageError", "message": "--threads must be >= 1"}), file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, ValueError, OSError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
