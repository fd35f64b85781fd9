"""Command-line front end.

Every subcommand prints a text report by default, or JSON with ``--output json``.
Exit status: 0 on success, 1 when an analysis fails, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from .cm import FgCM, Indec, MorphCM, NonSquareZero, canonical, decompose, hom_closed_form
from .formulas import (BoundExceeded, NotInInterval, ParseError, antichain_of, evaluate, formula_meet,
                       formula_sum, interval_report, is_minimal_pair, leq, pattern_dot, pattern_poset,
                       realize)
from .kernel import FieldError, InsufficientPrecision, SeriesMatrix, parse_field
from .kernel.series import ZeroDivisor
from .mdim import NonTerminating, PatternIntervalLattice, UnsupportedPresentation, tower
from .points import CatalogError, InfPoint
from .quilt import NotInSpan, build_quilt, export_dot
from .ziegler import CatalogMiss, SPECIALS, ZgPoint, basis_catalog, cb_analysis, closed_points, \
    open_set_of_pair

ANALYSIS_ERRORS = (InsufficientPrecision, NonSquareZero, CatalogMiss, CatalogError, NotInSpan, ParseError,
                   BoundExceeded, NotInInterval, ZeroDivisor, UnsupportedPresentation, NonTerminating)


class UsageError(Exception):
    pass


# -- argument parsing --------------------------------------------------------------------------

def _field(s):
    try:
        return parse_field(s)
    except FieldError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _at_least(k):
    def check(s):
        try:
            v = int(s)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {s!r}")
        if v < k:
            raise argparse.ArgumentTypeError(f"must be at least {k}")
        return v
    return check


DEFAULTS = {"field": parse_field("Q"), "prec": 24, "bound": 8, "output": "text", "seed": 0}


def _common(with_defaults: bool) -> argparse.ArgumentParser:
    # subcommands repeat the global flags; their defaults are suppressed so they do not
    # overwrite values given before the subcommand name
    c = argparse.ArgumentParser(add_help=False)
    d = (lambda k: DEFAULTS[k]) if with_defaults else (lambda k: argparse.SUPPRESS)
    c.add_argument("--field", type=_field, default=d("field"), help='"Q" or "Fp(p)" with p odd')
    c.add_argument("--prec", type=_at_least(4), default=d("prec"), help="y-adic working precision (>= 4)")
    c.add_argument("--bound", type=_at_least(2), default=d("bound"), help="window bound (>= 2)")
    c.add_argument("--output", choices=["text", "json", "dot"], default=d("output"))
    c.add_argument("--seed", type=int, default=d("seed"), help="seed for randomized sweeps")
    return c


def build_parser() -> argparse.ArgumentParser:
    common = _common(False)
    p = argparse.ArgumentParser(prog="cmzg", parents=[_common(True)],
                                description="CM-modules over F[[x,y]]/(x^2): decomposition, pp-formulas, "
                                            "Ziegler topology, m-dimension, radical and quilt")
    sub = p.add_subparsers(dest="cmd", metavar="COMMAND")
    sub.required = True

    d = sub.add_parser("decompose", parents=[common], help="split a square-zero x-action into indecomposables")
    src = d.add_mutually_exclusive_group(required=True)
    src.add_argument("--in", dest="infile", help='JSON file: {"X": rows} or a bare list of rows')
    src.add_argument("--blocks", help="comma-separated summands, e.g. R,I3,Iinf; conjugated randomly")

    h = sub.add_parser("hom", parents=[common], help="closed-form Hom generators between indecomposables")
    h.add_argument("source")
    h.add_argument("target")

    a = sub.add_parser("ar-check", parents=[common], help="check an almost split sequence")
    a.add_argument("n", help="index n >= 1, or inf for the sequence ending in Iinf")

    f = sub.add_parser("formula", parents=[common], help="pp-formula operations")
    f.add_argument("action", choices=["parse", "leq", "sum", "meet", "eval"])
    f.add_argument("formulas", nargs="+", help="formula text; for eval the last argument is the point")

    sub.add_parser("pattern", parents=[common], help="the pattern poset inside the window")

    i = sub.add_parser("interval", parents=[common], help="classify an interval [low, high]")
    i.add_argument("low")
    i.add_argument("high")

    z = sub.add_parser("zg", parents=[common], help="Ziegler topology")
    z.add_argument("action", choices=["cb-ranks", "basis", "open", "closed"])
    z.add_argument("args", nargs="*", help="basis: POINT; open: PHI PSI")

    sub.add_parser("mdim", parents=[common], help="derivative tower of the pattern interval")

    r = sub.add_parser("rad", parents=[common], help="radical layers and nilpotency")
    r.add_argument("action", choices=["layer", "nilpotency"])
    r.add_argument("--source", help="indecomposable, e.g. R or Iinf")
    r.add_argument("--target")
    r.add_argument("--matrix", help="JSON rows, e.g. '[[0,1],[0,0]]'")

    q = sub.add_parser("quilt", parents=[common], help="the quilt graph")
    q.add_argument("action", choices=["export"])
    q.add_argument("--dot", help="write DOT to this file")
    q.add_argument("--json", dest="json_out", help="write the JSON graph to this file")
    q.add_argument("--overlay", action="store_true", help="add the pattern poset as a cluster")

    c = sub.add_parser("accept", parents=[common], help="run the acceptance suite")
    c.add_argument("--only", help="comma-separated criterion numbers")
    return p


# -- helpers -----------------------------------------------------------------------------------

def _indec(s):
    try:
        return Indec.parse(s)
    except ValueError as exc:
        raise UsageError(str(exc))


def _point(s):
    """A catalog indecomposable or one of R~, Q, G."""
    try:
        return InfPoint.parse(s)
    except ValueError:
        return _indec(s)


def _emit(args, obj, text):
    if args.output == "json":
        print(json.dumps(obj, indent=2, ensure_ascii=False))
    else:
        print(text)


# -- subcommands ------------------------------------------------------------------------------

def cmd_decompose(args):
    fld, prec = args.field, args.prec
    if args.infile:
        try:
            with open(args.infile) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read {args.infile}: {exc}")
        rows = data["X"] if isinstance(data, dict) else data
        try:
            X = SeriesMatrix.from_json(rows, prec, fld)
        except (ValueError, TypeError, KeyError) as exc:
            raise UsageError(f"bad matrix: {exc}")
        M = FgCM(X)
    else:
        from .sampling import random_conjugate
        blocks = [_indec(b) for b in args.blocks.split(",") if b.strip()]
        M, _ = random_conjugate(random.Random(args.seed), blocks, prec, fld)
    d = decompose(M)
    obj = {"summands": [str(s) for s in d.summands], "basis": d.basis.to_json(),
           "input": M.X.to_json()}
    text = "summands: " + (" + ".join(str(s) for s in d.summands) or "0") + f"\nbasis:\n{d.basis}"
    _emit(args, obj, text)


def cmd_hom(args):
    X, Y = _indec(args.source), _indec(args.target)
    gens = hom_closed_form(X, Y, args.prec, args.field)
    obj = {"source": str(X), "target": str(Y), "rank": len(gens), "generators": [g.A.to_json() for g in gens]}
    text = f"Hom({X}, {Y}): rank {len(gens)}\n" + "\n".join(f"  {g.A}" for g in gens)
    _emit(args, obj, text)


def cmd_ar_check(args):
    if args.n in ("inf", "Iinf"):
        from .points import verify_ar_sequence_inf
        rep = verify_ar_sequence_inf(args.prec, args.field, seed=args.seed)
        obj = {"sequence": "R~ -> R~ + Iinf -> Iinf", "ok": rep.ok, "composite_zero": rep.composite_zero,
               "injective": rep.injective, "surjective": rep.surjective, "middle_exact": rep.middle_exact,
               "generators": rep.pp_generators_hold, "type_generated": rep.pp_type_generated}
    else:
        from .cm import ar_sequence, verify_exact
        try:
            n = int(args.n)
        except ValueError:
            raise UsageError(f"expected an index or 'inf', got {args.n!r}")
        if n < 1:
            raise UsageError("the index must be at least 1")
        rep = verify_exact(ar_sequence(n, args.prec, args.field), args.bound)
        obj = {"sequence": f"{Indec(n)} -> {Indec(n - 1)} + {Indec(n + 1)} -> {Indec(n)}", "ok": rep.ok,
               "composite_zero": rep.composite_zero, "kernel_equals_image": rep.kernel_equals_image,
               "left_almost_split": rep.left_almost_split, "failures": rep.failures}
    text = "\n".join(f"{k}: {v}" for k, v in obj.items())
    _emit(args, obj, text)
    return 0 if obj["ok"] else 1


def cmd_formula(args):
    fs = args.formulas
    act = args.action
    need = {"parse": 1, "leq": 2, "sum": 2, "meet": 2, "eval": 2}[act]
    if len(fs) != need:
        raise UsageError(f"formula {act} takes {need} argument(s)")
    if act == "eval":
        phi, P = realize(fs[0], args.prec, args.field), _point(fs[1])
        val = evaluate(phi, P)
        obj = {"formula": str(phi), "point": str(P),
               "value": val.to_json() if hasattr(val, "to_json") else str(val), "text": str(val)}
        return _emit(args, obj, f"{phi} at {P}: {val}")
    phis = [realize(t, args.prec, args.field) for t in fs]
    if act == "parse":
        phi = phis[0]
        try:
            ac = str(antichain_of(phi))
        except NotInInterval:
            ac = None
        return _emit(args, {"formula": str(phi), "realization": phi.to_json(), "antichain": ac},
                     f"{phi}" + (f"\nantichain: {ac}" if ac else ""))
    if act == "leq":
        v = leq(phis[0], phis[1])
        return _emit(args, {"leq": v}, str(v).lower())
    out = formula_sum(*phis) if act == "sum" else formula_meet(*phis)
    _emit(args, {"formula": str(out), "realization": out.to_json()}, str(out))


def cmd_pattern(args):
    if args.output == "dot":
        print(pattern_dot(args.bound), end="")
        return
    nodes, covers = pattern_poset(args.bound)
    obj = {"bound": args.bound, "nodes": [u.to_json() for u in sorted(nodes)],
           "covers": [[u.to_json(), v.to_json()] for u, v in sorted(covers)]}
    text = f"{len(nodes)} nodes, {len(covers)} covers\n" + "\n".join(f"  {u} < {v}" for u, v in sorted(covers))
    _emit(args, obj, text)


def _antichain(text, args):
    return antichain_of(realize(text, args.prec, args.field))


def cmd_interval(args):
    low, high = _antichain(args.low, args), _antichain(args.high, args)
    try:
        rep = interval_report(low, high, args.bound)
    except ValueError as exc:
        raise UsageError(str(exc))
    minimal = is_minimal_pair(low, high, args.bound)
    obj = rep.to_json()
    obj["minimal_pair"] = minimal
    text = (f"[{low}, {high}] at bound {args.bound}: {'chain' if rep.chain else 'not a chain'}, "
            f"type {rep.order_type.value}, counts {dict(rep.counts)}, minimal pair {minimal}")
    _emit(args, obj, text)


def cmd_zg(args):
    act, rest = args.action, args.args
    B = args.bound
    if act == "cb-ranks":
        rep = cb_analysis(B)
        rows = [("I_n (n < inf)", str(rep.finite_rank))] + [(str(p), str(rep.rank(p))) for p in SPECIALS]
        text = "\n".join(f"{a:<14} {b}" for a, b in rows) + f"\nspace rank     {rep.space_rank}"
        return _emit(args, rep.to_json(), text)
    if act == "closed":
        pts = sorted(closed_points(B), key=str)
        return _emit(args, {"closed_points": [str(p) for p in pts]}, "{" + ", ".join(map(str, pts)) + "}")
    if act == "basis":
        if len(rest) != 1:
            raise UsageError("zg basis takes one point")
        entries = basis_catalog(ZgPoint.parse(rest[0]), B)
        return _emit(args, [e.to_json() for e in entries],
                     "\n".join(f"{e.label}: {e.open_set}" for e in entries))
    if len(rest) != 2:
        raise UsageError("zg open takes two formulas")
    phi, psi = _antichain(rest[0], args), _antichain(rest[1], args)
    U = open_set_of_pair(phi, psi)
    _emit(args, {"phi": str(phi), "psi": str(psi), "open_set": U.to_json()}, str(U))


def cmd_mdim(args):
    rep = tower(PatternIntervalLattice(args.bound), args.bound)
    lines = [f"level {s.level}: {s.name}, {s.window_size} elements in window"
             + (", chain" if s.chain else "") + (", trivial" if s.trivial else "") for s in rep.steps]
    lines.append(f"m-dimension: {rep.m_dim}")
    _emit(args, rep.to_json(), "\n".join(lines))


def cmd_rad(args):
    from .radical import layer, verify_nilpotency
    if args.action == "nilpotency":
        rep = verify_nilpotency(args.bound, args.prec, args.field)
        _emit(args, rep.to_json(), rep.summary())
        return 0 if rep.ok else 1
    if not (args.source and args.target and args.matrix):
        raise UsageError("rad layer needs --source, --target and --matrix")
    X, Y = _indec(args.source), _indec(args.target)
    try:
        A = SeriesMatrix.from_json(json.loads(args.matrix), args.prec, args.field)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"bad matrix: {exc}")
    try:
        f = MorphCM(canonical(X, args.prec, args.field), canonical(Y, args.prec, args.field), A)
    except ValueError as exc:
        raise UsageError(str(exc))
    if not f.is_intertwining():
        raise UsageError("the matrix does not commute with the x-actions")
    lay = layer(f, bound=args.bound)
    _emit(args, {"source": str(X), "target": str(Y), "layer": str(lay)}, str(lay))


def cmd_quilt(args):
    g = build_quilt(args.bound)
    dot = export_dot(g, args.overlay)
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(dot)
    if args.json_out:
        with open(args.json_out, "w") as fh:
            fh.write(g.dumps() + "\n")
    if args.output == "dot" or not (args.dot or args.json_out) and args.output == "text":
        print(dot, end="")
    elif args.output == "json":
        print(g.dumps())


def cmd_accept(args):
    from .acceptance import run_all
    only = None
    if args.only:
        try:
            only = {int(k) for k in args.only.split(",")}
        except ValueError:
            raise UsageError("--only takes comma-separated criterion numbers")
    results = run_all(only, seed=args.seed)
    if args.output == "json":
        print(json.dumps([r.to_json() for r in results], indent=2, ensure_ascii=False))
    else:
        for r in results:
            print(r.line())
        print(f"{sum(r.ok for r in results)}/{len(results)} criteria passed")
    return 0 if all(r.ok for r in results) else 1


COMMANDS = {"decompose": cmd_decompose, "hom": cmd_hom, "ar-check": cmd_ar_check, "formula": cmd_formula,
            "pattern": cmd_pattern, "interval": cmd_interval, "zg": cmd_zg, "mdim": cmd_mdim, "rad": cmd_rad,
            "quilt": cmd_quilt, "accept": cmd_accept}


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code = COMMANDS[args.cmd](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    except ANALYSIS_ERRORS as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return code or 0


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
