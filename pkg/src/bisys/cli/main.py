"""Batch front door: parse documents, run constructions and verifiers.

Exit codes: 0 all verdicts pass, 1 a verdict failed, 2 input error.  Output
is deterministic for fixed inputs and flags; BISYS_MAX_DEPTH caps every
--depth as a safety valve.
"""

from __future__ import annotations

import argparse
import os
import sys

from .. import __version__
from ..bisystem import (
    from_lambda_graph_system,
    presented_words,
    transpose,
    validate,
    validate_lambda_graph_system,
)
from ..canonical import canonical_bisystem
from ..equivalence import (
    bipartite_split,
    detect_bipartite,
    psse_to_sse,
    verify_psse_1step,
    verify_sse_1step,
)
from ..ktheory import ck_oracle, k_groups
from ..smb import from_smb, to_smb, validate_smb
from ..subshift import admissible_words
from .documents import DocumentError, dump_document, load_document, save_document
from .dot import bisystem_dot

PASS, FAIL, INPUT_ERROR = 0, 1, 2


def _depth(args) -> int:
    cap = os.environ.get("BISYS_MAX_DEPTH")
    depth = args.depth
    if cap is not None:
        try:
            depth = min(depth, int(cap))
        except ValueError:
            pass
    return depth


def _load(path, depth=None):
    try:
        return load_document(path, depth)
    except DocumentError as e:
        print(f"error: {path}: {e}", file=sys.stderr)
        raise SystemExit(INPUT_ERROR)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        raise SystemExit(INPUT_ERROR)


def _write(text, out):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _axiom_report(rep):
    return {
        name: {"ok": v.ok, "counterexamples": list(v.counterexamples)}
        for name, v in rep.axioms
    }


def cmd_validate(args):
    import json

    kind, name, obj = _load(args.file)
    if kind == "bisystem":
        rep = validate(obj)
        if args.json:
            print(json.dumps({
                "schema_version": 1, "kind": kind, "ok": rep.ok,
                "depth": rep.depth, "axioms": _axiom_report(rep),
                "fpcc": rep.fpcc.ok, "standard": rep.standard.ok,
            }, indent=2, sort_keys=True))
        else:
            for line in rep.lines():
                print(line)
        return PASS if rep.ok else FAIL
    if kind == "smb":
        rep = validate_smb(obj)
        if args.json:
            print(json.dumps({
                "schema_version": 1, "kind": kind, "ok": rep.ok,
                "depth": rep.depth, "axioms": _axiom_report(rep),
            }, indent=2, sort_keys=True))
        else:
            for line in rep.lines():
                print(line)
        return PASS if rep.ok else FAIL
    if kind == "lambda_graph_system":
        defects = validate_lambda_graph_system(obj)
        if args.json:
            print(json.dumps({
                "schema_version": 1, "kind": kind, "ok": not defects,
                "defects": defects,
            }, indent=2, sort_keys=True))
        elif defects:
            print("one-sided system: INVALID")
            for d in defects[:10]:
                print(f"  {d}")
        else:
            print("one-sided system: valid")
        return FAIL if defects else PASS
    if kind == "subshift":
        g = obj.graph
        if args.json:
            print(json.dumps({
                "schema_version": 1, "kind": kind, "ok": True,
                "states": len(g.states), "edges": len(g.edges),
                "alphabet": list(g.labels),
                "irreducible": g.is_irreducible(),
            }, indent=2, sort_keys=True))
        else:
            print(
                f"subshift presentation: {len(g.states)} states, {len(g.edges)} "
                f"edges, alphabet {{{','.join(g.labels)}}}"
            )
            print(f"  irreducible: {'yes' if g.is_irreducible() else 'no'}")
        return PASS
    print(f"error: validate does not apply to kind {kind!r}", file=sys.stderr)
    return INPUT_ERROR


def cmd_canonical(args):
    kind, name, obj = _load(args.file)
    if kind != "subshift":
        print("error: canonical needs a subshift document", file=sys.stderr)
        return INPUT_ERROR
    depth = _depth(args)
    build = canonical_bisystem(obj, depth)
    b = build.bisystem
    for w in build.warnings:
        print(f"warning: {w}", file=sys.stderr)
    if args.emit == "dot":
        _write(bisystem_dot(b, name or "canonical"), args.output)
    elif args.emit == "json":
        _write(dump_document("bisystem", name or "canonical", b), args.output)
    elif args.emit == "smb":
        _write(dump_document("smb", name or "canonical", to_smb(b)), args.output)
    print(
        f"canonical build: depth {depth}, level sizes "
        f"{','.join(str(m) for m in b.level_sizes)}",
        file=sys.stderr,
    )
    return PASS


def cmd_invariants(args):
    depth = _depth(args)
    kind, name, obj = _load(args.file, depth)
    oracle = None
    if kind == "lambda_graph_system":
        if (
            args.side == "minus"
            and len(set(obj.level_sizes)) == 1
            and all(tuple(i) == tuple(range(obj.level_sizes[0])) for i in obj.iota)
        ):
            n = obj.level_sizes[0]
            counts = [[0] * n for _ in range(n)]
            for (s, t, _a) in obj.edges[0]:
                counts[s][t] += 1
            oracle = ck_oracle(counts)
        b = from_lambda_graph_system(obj)
    elif kind == "bisystem":
        b = obj
    elif kind == "subshift":
        b = canonical_bisystem(obj, depth).bisystem
    else:
        print("error: invariants needs a leveled system", file=sys.stderr)
        return INPUT_ERROR
    res = k_groups(b, args.side, min(depth, b.depth))
    print(f"side: {args.side}")
    for line in res.lines():
        print(line)
    if oracle is not None:
        print(f"cross-check (I - A^t): K0 = {oracle[0]}, K1 = {oracle[1]}")
        if res.stabilized and (res.k0, res.k1) != oracle:
            print("MISMATCH against the cross-check")
            return FAIL
    return PASS


def cmd_check_equivalence(args):
    depth = _depth(args)
    _, _, s_m = _load(args.system_m, depth)
    _, _, s_n = _load(args.system_n, depth)
    wkind, _, w = _load(args.witness)
    if args.mode == "psse":
        if wkind != "psse_witness":
            print("error: witness kind does not match --mode psse", file=sys.stderr)
            return INPUT_ERROR
        rep = verify_psse_1step(s_m, s_n, w, depth)
    else:
        if wkind != "sse_witness":
            print("error: witness kind does not match --mode sse", file=sys.stderr)
            return INPUT_ERROR
        rep = verify_sse_1step(s_m, s_n, w, depth)
    for line in rep.lines():
        print(line)
    if args.convert and args.mode == "psse" and rep.ok:
        save_document(args.convert, "sse_witness", "converted", psse_to_sse(w))
        print(f"wrote converted witness to {args.convert}")
    return PASS if rep.ok else FAIL


def cmd_bipartite(args):
    kind, name, s = _load(args.file)
    if kind != "smb":
        print("error: bipartite needs an smb document", file=sys.stderr)
        return INPUT_ERROR
    bip = detect_bipartite(s)
    if bip is None:
        print("no bipartite structure")
        return FAIL
    print(
        f"bipartite: C = {{{','.join(map(str, bip.alphabet_c.symbols))}}}, "
        f"D = {{{','.join(map(str, bip.alphabet_d.symbols))}}}"
    )
    s_cd, s_dc, w = bipartite_split(s, bip)
    rep = verify_psse_1step(s_cd, s_dc, w)
    print("split witness verifies:", "pass" if rep.ok else "FAIL")
    prefix = args.out_prefix
    if prefix:
        save_document(prefix + ".cd.json", "smb", (name or "split") + "-cd", s_cd)
        save_document(prefix + ".dc.json", "smb", (name or "split") + "-dc", s_dc)
        save_document(prefix + ".witness.json", "psse_witness", (name or "split"), w)
        print(f"wrote {prefix}.cd.json, {prefix}.dc.json, {prefix}.witness.json")
    return PASS if rep.ok else FAIL


def cmd_transpose(args):
    kind, name, obj = _load(args.file)
    if kind != "bisystem":
        print("error: transpose needs a bisystem document", file=sys.stderr)
        return INPUT_ERROR
    _write(dump_document("bisystem", (name or "bisystem") + "-transpose",
                         transpose(obj)), args.output)
    return PASS


def cmd_words(args):
    kind, name, obj = _load(args.file)
    if kind == "subshift":
        words = admissible_words(obj, args.length)
    elif kind == "bisystem":
        words = presented_words(obj, args.side, args.length)
    elif kind == "smb":
        words = presented_words(from_smb(obj), args.side, args.length)
    else:
        print("error: words needs a subshift, bisystem or smb document", file=sys.stderr)
        return INPUT_ERROR
    for w in words:
        print(".".join(w))
    return PASS


def cmd_from_lgs(args):
    kind, name, obj = _load(args.file, _depth(args))
    if kind != "lambda_graph_system":
        print("error: from-lgs needs a lambda_graph_system document", file=sys.stderr)
        return INPUT_ERROR
    b = from_lambda_graph_system(obj)
    _write(dump_document("bisystem", name or "imported", b), args.output)
    return PASS


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bisys",
        description="subshift presentations, their two-sided leveled systems, "
        "conjugacy witnesses and exact K-invariants",
    )
    parser.add_argument("--version", action="version", version=f"bisys {__version__}")
    parser.add_argument(
        "--seed", type=int, default=0, help="seed for randomized self-tests only"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a document's structural axioms")
    p.add_argument("file")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("canonical", help="canonical construction of a subshift")
    p.add_argument("file")
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--emit", choices=("dot", "json", "smb"), default="json")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(fn=cmd_canonical)

    p = sub.add_parser("invariants", help="level towers of the two K-groups")
    p.add_argument("file")
    p.add_argument("--side", choices=("minus", "plus"), default="minus")
    p.add_argument("--depth", type=int, default=6)
    p.set_defaults(fn=cmd_invariants)

    p = sub.add_parser("check-equivalence", help="verify an equivalence witness")
    p.add_argument("system_m")
    p.add_argument("system_n")
    p.add_argument("witness")
    p.add_argument("--mode", choices=("psse", "sse"), default="psse")
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--convert", default=None, help="write the one-step conversion here")
    p.set_defaults(fn=cmd_check_equivalence)

    p = sub.add_parser("bipartite", help="detect and split a bipartite system")
    p.add_argument("file")
    p.add_argument("--out-prefix", default=None)
    p.set_defaults(fn=cmd_bipartite)

    p = sub.add_parser("transpose", help="reverse all edges and swap the sides")
    p.add_argument("file")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(fn=cmd_transpose)

    p = sub.add_parser("words", help="admissible or presented words")
    p.add_argument("file")
    p.add_argument("--side", choices=("minus", "plus"), default="plus")
    p.add_argument("-n", "--length", type=int, default=3)
    p.set_defaults(fn=cmd_words)

    p = sub.add_parser("from-lgs", help="import a one-sided leveled system")
    p.add_argument("file")
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(fn=cmd_from_lgs)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else INPUT_ERROR
    except DocumentError as e:
        print(f"error: {e}", file=sys.stderr)
        return INPUT_ERROR
    except Exception as e:
        print(f"error: {e}", file=sys.stderr)
        return FAIL


if __name__ == "__main__":
    sys.exit(main())
