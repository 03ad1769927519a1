"""Command-line interface: ``mspectra <command> ...``.

Exit codes: 0 when the verdict is true (or all checks pass), 1 when it is
false, 2 on malformed input.  ``--json`` switches to a versioned machine
report (``mspectra-report/1``) that depends only on the inputs and seed.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .algebra import MAX_N, algebra, format_word
from .documents import DocumentError, dumps, load_any, load_morphism, load_multicomplex
from .linalg import FieldError, QQ, field_from_descriptor
from .multicomplex import Morphism, Multicomplex, validate, validate_morphism

SCHEMA = "mspectra-report/1"


class InputError(Exception):
    pass


def parse_window(text):
    """``pmin:pmax,qmin:qmax`` -> ``(pmin, pmax, qmin, qmax)``."""
    try:
        ps, qs = text.split(",")
        pmin, pmax = (int(x) for x in ps.split(":"))
        qmin, qmax = (int(x) for x in qs.split(":"))
    except ValueError as exc:
        raise InputError(f"bad window {text!r}; expected pmin:pmax,qmin:qmax") from exc
    if pmin > pmax or qmin > qmax:
        raise InputError(f"empty window {text!r}")
    return pmin, pmax, qmin, qmax


def emit(args, command, params, result, lines):
    if args.json:
        doc = {"schema": SCHEMA, "command": command, "params": params, "result": result}
        sys.stdout.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    else:
        for line in lines:
            print(line)


def _field(args):
    try:
        return field_from_descriptor(args.field)
    except FieldError as exc:
        raise InputError(str(exc)) from exc


def _check_field(obj, args):
    if getattr(args, "field", None) and args.field_given:
        want = _field(args)
        have = obj.field if isinstance(obj, (Multicomplex, Morphism)) else None
        if have is not None and have is not want:
            raise InputError(f"document is over {have.descriptor}, but --field {want.descriptor} was given")


def _load_morphism(args):
    f = load_morphism(args.file)
    _check_field(f, args)
    bad = validate_morphism(f)
    if bad or validate(f.source) or validate(f.target):
        raise InputError(f"{args.file}: input is not a valid strict morphism")
    return f


# ---------------------------------------------------------------------------
# commands


def cmd_validate(args):
    obj = load_any(args.file)
    _check_field(obj, args)
    if isinstance(obj, Multicomplex):
        v = [str(x) for x in validate(obj)]
        kind = "multicomplex"
    else:
        v = [f"source: {x}" for x in validate(obj.source)]
        v += [f"target: {x}" for x in validate(obj.target)]
        v += [str(x) for x in validate_morphism(obj)]
        kind = "morphism"
    emit(args, "validate", {"file": args.file}, {"kind": kind, "valid": not v, "violations": v},
         [f"{kind}: valid"] if not v else [f"{kind}: {len(v)} violation(s)"] + v)
    return 0 if not v else 1


def cmd_basis(args):
    if not 2 <= args.N <= MAX_N:
        raise InputError(f"N must be in 2..{MAX_N}")
    words = [format_word(w) for w in algebra(args.N).basis(args.p, args.q)]
    emit(args, "basis", {"N": args.N, "p": args.p, "q": args.q}, {"words": words}, words)
    return 0


def cmd_zw(args):
    from .multicomplex import quotient_module, submodule_closure
    from .linalg import Matrix
    from .representables import zw

    field = _field(args)
    pmin, pmax, qmin, qmax = parse_window(args.window)
    if args.k < 0:
        raise InputError("k must be non-negative")
    W = zw(args.N, args.k, args.p, args.q).window(field, pmin)
    outside = {b: list(Matrix.identity(field, r).data) for b, r in W.ranks.items()
               if not (pmin <= b[0] <= pmax and qmin <= b[1] <= qmax)}
    if outside:
        W, _ = quotient_module(W, submodule_closure(W, outside))
        # the cut is no longer a half-plane; keep the marker, drop the region
        W = Multicomplex(W.N, W.field, W.ranks, W.diffs, exact=None)
        text = dumps(W).rstrip("\n")
        doc = json.loads(text)
        doc["truncated"] = True
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    else:
        sys.stdout.write(dumps(W))
    return 0


def cmd_pages(args):
    from .spectral import page

    A = load_multicomplex(args.file)
    _check_field(A, args)
    if validate(A):
        raise InputError(f"{args.file}: not a valid multicomplex")
    P = page(A, args.side, args.r)
    rows = []
    lines = [f"# {args.side} spectral sequence, page {args.r}", "p\tq\tdim" + ("\ttrusted" if A.exact else "")]
    for b, d in P.dims().items():
        row = {"p": b[0], "q": b[1], "dim": d}
        if A.exact is not None:
            row["trusted"] = P.trusted(b)
        if args.witnesses:
            row["representatives"] = [[A.field.format(x) for x in v] for v in P.entries[b].representatives]
        rows.append(row)
        line = f"{b[0]}\t{b[1]}\t{d}" + (f"\t{P.trusted(b)}" if A.exact else "")
        if args.witnesses:
            line += "\t" + " ".join("(" + ",".join(A.field.format(x) for x in v) + ")" for v in P.entries[b].representatives)
        lines.append(line)
    emit(args, "pages", {"file": args.file, "side": args.side, "r": args.r}, {"rows": rows}, lines)
    return 0


def _verdict_lines(name, v, certificates):
    lines = [f"{name}: {'yes' if v.holds else 'no'}"]
    if certificates:
        for c in v.certificates:
            lines.append(f"  {c.side} page {c.page} at {c.bidegree}: {c.reason} "
                         f"(rank {c.rank}, dims {c.source_dim} -> {c.target_dim})")
    return lines


def cmd_we(args):
    from .model import is_weak_equivalence

    f = _load_morphism(args)
    v = is_weak_equivalence(f, args.r, args.s)
    result = {"holds": v.holds, "certificates": [c.as_dict() for c in v.certificates] if args.certificates or args.json else []}
    emit(args, "we", {"file": args.file, "r": args.r, "s": args.s}, result,
         _verdict_lines(f"E_{{{args.r},{args.s}}} weak equivalence", v, args.certificates))
    return 0 if v.holds else 1


def cmd_fib(args):
    from .model import is_fibration

    f = _load_morphism(args)
    v = is_fibration(f, args.r, args.s)
    result = {"holds": v.holds, "certificates": [c.as_dict() for c in v.certificates] if args.certificates or args.json else []}
    emit(args, "fib", {"file": args.file, "r": args.r, "s": args.s}, result,
         _verdict_lines(f"({args.r},{args.s})-fibration", v, args.certificates))
    return 0 if v.holds else 1


def cmd_rlp(args):
    from .model import acyclic_fibration_crosscheck, rlp_against

    f = _load_morphism(args)
    window = parse_window(args.window) if args.window else None
    params = {"file": args.file, "r": args.r, "s": args.s, "family": args.family, "window": args.window}
    if args.crosscheck:
        rep = acyclic_fibration_crosscheck(f, args.r, args.s, window)
        ok = rep["agree_I"] and rep["agree_J"]
        lines = [
            f"RLP against I: {rep['rlp_I']}   fibration and weak equivalence: {rep['fibration'] and rep['weak_equivalence']}",
            f"RLP against J: {rep['rlp_J']}   fibration: {rep['fibration']}",
            "agreement" if ok else "DISAGREEMENT",
        ]
        emit(args, "rlp", params, rep, lines)
        return 0 if ok else 1
    v = rlp_against(f, args.r, args.s, args.family, window)
    lines = [f"RLP against {args.family}_{{{args.r},{args.s}}}: {'yes' if v.holds else 'no'}"]
    lines += [f"  fails against {g}" for g in v.certificates]
    emit(args, "rlp", params, {"holds": v.holds, "failing": [str(g) for g in v.certificates]}, lines)
    return 0 if v.holds else 1


def cmd_adjoint(args):
    from .adjunction import j, q, quillen_adjunction_smoke, unit

    if args.action == "smoke":
        rep = quillen_adjunction_smoke(args.r, args.s, args.samples, args.seed, _field(args))
        lines = [f"{k}: {rep[k]}" for k in ("samples", "surjective", "fib_ok", "we00", "we_ok", "ok")]
        emit(args, "adjoint smoke", {"r": args.r, "s": args.s, "samples": args.samples, "seed": args.seed}, rep, lines)
        return 0 if rep["ok"] else 1
    if not args.file:
        raise InputError(f"adjoint {args.action} needs an input file")
    A = load_multicomplex(args.file)
    _check_field(A, args)
    if validate(A):
        raise InputError(f"{args.file}: not a valid multicomplex")
    if args.action == "j":
        if A.N != 2:
            raise InputError("j takes a bicomplex (N=2)")
        sys.stdout.write(dumps(j(A)))
    elif args.action == "q":
        if A.N != 4:
            raise InputError("q takes a 4-multicomplex")
        sys.stdout.write(dumps(q(A)))
    else:
        if A.N != 4:
            raise InputError("unit takes a 4-multicomplex")
        sys.stdout.write(dumps(unit(A)))
    return 0


def _oracle_compare(A, rmax):
    from .spectral import classical_pages, page, page_two_via_page_one, witness_dims_as_classical, FIRST

    out = {"pages": {}, "agree": True}
    for r in range(rmax + 1):
        w = witness_dims_as_classical(A, r)
        c = classical_pages(A, r)
        same = w == c
        out["pages"][str(r)] = {"agree": same}
        if not same:
            out["agree"] = False
            out["pages"][str(r)]["witness"] = {f"{k[0]},{k[1]}": v for k, v in sorted(w.items())}
            out["pages"][str(r)]["classical"] = {f"{k[0]},{k[1]}": v for k, v in sorted(c.items())}
    two = page_two_via_page_one(A).dims() == page(A, FIRST, 2).dims()
    out["page_two_via_page_one"] = two
    out["agree"] = out["agree"] and two
    return out


def cmd_oracle(args):
    from .randgen import make_rng, random_multicomplex

    if args.file:
        A = load_multicomplex(args.file)
        if validate(A):
            raise InputError(f"{args.file}: not a valid multicomplex")
        rep = _oracle_compare(A, args.r)
        lines = [f"page {r}: {'agree' if v['agree'] else 'DISAGREE'}" for r, v in rep["pages"].items()]
        lines.append(f"page 2 via page 1: {'agree' if rep['page_two_via_page_one'] else 'DISAGREE'}")
        emit(args, "oracle", {"file": args.file, "r": args.r}, rep, lines)
        return 0 if rep["agree"] else 1
    field = _field(args)
    rng = make_rng(args.seed)
    bad = []
    for k in range(args.samples):
        A = random_multicomplex(rng, args.N, field)
        rep = _oracle_compare(A, args.r)
        if not rep["agree"]:
            bad.append(k)
    res = {"samples": args.samples, "disagreements": bad}
    emit(args, "oracle", {"N": args.N, "field": field.descriptor, "samples": args.samples, "seed": args.seed, "r": args.r},
         res, [f"{args.samples} samples, {len(bad)} disagreement(s)"])
    return 0 if not bad else 1


def run_suite(samples, seed, fields=("Q", "Fp:5")):
    """The randomized matrix: oracle, RLP cross-check and class axioms."""
    from .model import acyclic_fibration_crosscheck
    from .randgen import make_rng, random_morphism, random_multicomplex

    report = {"oracle": {}, "crosscheck": {}}
    for N in (2, 3, 4):
        for fd in fields:
            field = field_from_descriptor(fd)
            rng = make_rng(f"oracle/{seed}/{N}/{fd}")
            bad = 0
            for _ in range(samples):
                if not _oracle_compare(random_multicomplex(rng, N, field), 4)["agree"]:
                    bad += 1
            report["oracle"][f"N={N},{fd}"] = {"samples": samples, "disagreements": bad}
    for N in (2, 4):
        for r in (0, 1, 2):
            for s in (0, 1, 2):
                rng = make_rng(f"rlp/{seed}/{N}/{r}/{s}")
                bad = 0
                counts = {"acyclic_fibrations": 0, "fibrations": 0}
                for k in range(samples):
                    field = field_from_descriptor(fields[k % len(fields)])
                    rep = acyclic_fibration_crosscheck(random_morphism(rng, N, field), r, s)
                    bad += not (rep["agree_I"] and rep["agree_J"])
                    counts["fibrations"] += rep["fibration"]
                    counts["acyclic_fibrations"] += rep["rlp_I"]
                report["crosscheck"][f"N={N},r={r},s={s}"] = dict(samples=samples, disagreements=bad, **counts)
    ok = all(v["disagreements"] == 0 for part in report.values() for v in part.values())
    report["ok"] = ok
    return report


def cmd_suite(args):
    rep = run_suite(args.samples, args.seed)
    lines = []
    for part in ("oracle", "crosscheck"):
        for key, v in rep[part].items():
            lines.append(f"{part:10s} {key:16s} samples={v['samples']} disagreements={v['disagreements']}")
    lines.append("ok" if rep["ok"] else "FAILED")
    emit(args, "suite", {"samples": args.samples, "seed": args.seed}, rep, lines)
    return 0 if rep["ok"] else 1


# ---------------------------------------------------------------------------


def build_parser():
    ap = argparse.ArgumentParser(prog="mspectra", description="Spectral sequences and model-structure checks for N-multicomplexes.")
    ap.add_argument("--version", action="version", version=f"mspectra {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable report")
    common.add_argument("--field", default=None, help="Q (default) or Fp:<p>")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check the defining relations")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("basis", parents=[common], help="normal words of A_N in a bidegree")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("zw", parents=[common], help="export a window of ZW_k(p,q)")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--p", type=int, default=0)
    p.add_argument("--q", type=int, default=0)
    p.add_argument("--window", required=True, help="pmin:pmax,qmin:qmax")
    p.set_defaults(func=cmd_zw)

    p = sub.add_parser("pages", parents=[common], help="page table of one spectral sequence")
    p.add_argument("--side", choices=["first", "second"], default="first")
    p.add_argument("-r", type=int, required=True)
    p.add_argument("--witnesses", action="store_true", help="print representative vectors")
    p.add_argument("file")
    p.set_defaults(func=cmd_pages)

    for name, func, helptext in (("we", cmd_we, "E_{r,s} weak equivalence"), ("fib", cmd_fib, "(r,s)-fibration")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("-r", type=int, required=True)
        p.add_argument("-s", type=int, required=True)
        p.add_argument("--certificates", action="store_true")
        p.add_argument("file")
        p.set_defaults(func=func)

    p = sub.add_parser("rlp", parents=[common], help="right lifting property against I_{r,s} or J_{r,s}")
    p.add_argument("-r", type=int, required=True)
    p.add_argument("-s", type=int, required=True)
    p.add_argument("--family", choices=["I", "J"], default="I")
    p.add_argument("--window", default=None, help="restrict parameters to pmin:pmax,qmin:qmax")
    p.add_argument("--crosscheck", action="store_true")
    p.add_argument("file")
    p.set_defaults(func=cmd_rlp)

    p = sub.add_parser("adjoint", parents=[common], help="the functors j, q and the unit")
    p.add_argument("action", choices=["j", "q", "unit", "smoke"])
    p.add_argument("file", nargs="?")
    p.add_argument("-r", type=int, default=1)
    p.add_argument("-s", type=int, default=1)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_adjoint)

    p = sub.add_parser("oracle", parents=[common], help="witness pages against the filtered total complex")
    p.add_argument("file", nargs="?")
    p.add_argument("-r", type=int, default=4, help="highest page")
    p.add_argument("--N", type=int, default=2)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("suite", parents=[common], help="randomized test matrix")
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_suite)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    args.field_given = args.field is not None
    if args.field is None:
        args.field = QQ.descriptor
    try:
        return args.func(args)
    except (InputError, DocumentError, FieldError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
