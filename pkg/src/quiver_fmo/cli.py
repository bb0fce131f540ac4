"""Command-line interface: classification, monopole operators, Hilbert
series, and the theorem-verification sweeps, with deterministic JSON output.

Exit codes: 0 all checks pass, 1 a verification failed, 2 bad input or an
unsatisfied precondition, 3 internal inconsistency (a theorem-level check the
library itself guarantees came out false).
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys

from .multipoly import (
    MPoly,
    ParseError,
    PartialSymPoly,
    RatFunc,
    SymmetryError,
    poly_text,
    parse_poly,
    ratfunc_text,
)
from .quiver import (
    DimData,
    Quiver,
    a1_quiver,
    a2_quiver,
    affine_sl2_quiver,
    affine_classify,
    cartan_matrix,
    check_conicity,
    check_good,
    mu_pairing,
    theorem_prediction,
)
from .gklo import (
    GKLOContext,
    d_identity_check,
    dressing_basis,
    chevalley,
    fmo,
    fmo_minus,
    fmo_plus,
    make_context,
    orientation_flip_sign,
)
from .defect_embed import (
    DefectSplit,
    slice_target_context,
    verify_adding_defect_theorem,
    verify_restriction,
)
from .km_embedding import ChainReport, ConicityError, compose_embedding
from .monopole_hilbert import (
    BadTheoryError,
    classify_theory,
    hilbert_series,
)

BUILTIN_QUIVERS = {
    "a1": a1_quiver,
    "a2": a2_quiver,
    "affine_sl2": affine_sl2_quiver,
}


class InputError(ValueError):
    pass


def _load_quiver(spec: str) -> Quiver:
    if spec in BUILTIN_QUIVERS:
        return BUILTIN_QUIVERS[spec]()
    try:
        return Quiver.load(spec)
    except (OSError, KeyError, ValueError, json.JSONDecodeError) as exc:
        raise InputError("cannot load quiver from %r: %s" % (spec, exc)) from None


def _csv_ints(text: str, n: int, name: str):
    try:
        vals = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise InputError("--%s must be a comma-separated integer list" % name)
    if len(vals) != n:
        raise InputError("--%s needs %d entries for this quiver" % (name, n))
    return vals


def _ratfunc_json(value: RatFunc):
    return {"num": poly_text(value.num), "den": poly_text(value.den)}


def _emit(report, as_json: bool):
    if as_json:
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        _emit_human(report)


def _emit_human(report, indent=""):
    if isinstance(report, dict):
        for k in sorted(report):
            val = report[k]
            if isinstance(val, (dict, list)):
                print("%s%s:" % (indent, k))
                _emit_human(val, indent + "  ")
            else:
                print("%s%s: %s" % (indent, k, val))
    elif isinstance(report, list):
        for item in report:
            _emit_human(item, indent)
            if isinstance(item, (dict, list)):
                print("%s--" % indent)
    else:
        print("%s%s" % (indent, report))


def _context(args) -> GKLOContext:
    q = _load_quiver(args.quiver)
    w = _csv_ints(args.w, q.n, "w")
    v = _csv_ints(args.v, q.n, "v")
    try:
        return make_context(q, w, v)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _dressing(args, ctx, m) -> PartialSymPoly:
    if args.f is None:
        try:
            return PartialSymPoly.make(MPoly.one(), m, ctx.v)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    try:
        poly = parse_poly(args.f, n_vertices=ctx.quiver.n)
    except ParseError as exc:
        raise InputError(str(exc)) from None
    try:
        return PartialSymPoly.make(poly, m, ctx.v)
    except SymmetryError as exc:
        raise InputError("dressing is not partially symmetric: %s" % exc) from None
    except ValueError as exc:
        raise InputError(str(exc)) from None


# ---------------------------------------------------------------------------
# subcommands


def cmd_classify(args) -> int:
    q = _load_quiver(args.quiver)
    C = cartan_matrix(q)
    w = _csv_ints(args.w, q.n, "w")
    v = _csv_ints(args.v, q.n, "v")
    try:
        d = DimData.make(w, v)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    con = check_conicity(d, C)
    good = check_good(d, C)
    info = affine_classify(C)
    mp = mu_pairing(d, C)
    report = {
        "conical": con.holds,
        "good": good.holds,
        "min_value": con.min_value,
        "witness": list(con.witness) if con.witness is not None else None,
        "kind": info.kind,
        "mu_pairing": list(mp.vector),
        "mu_dominant": mp.dominant,
    }
    prediction = theorem_prediction(C, d)
    if info.kind == "affine":
        report["marks"] = list(info.marks)
        report["level"] = info.level(d, C)
    report["theorem_prediction"] = prediction
    exit_code = 0
    if prediction is not None:
        direct = ("good" if good.holds
                  else "conical-not-good" if con.holds else "not-conical")
        report["direct"] = direct
        if direct != prediction:
            report["internal_error"] = "level prediction disagrees with the direct check"
            exit_code = 3
    _emit(report, args.json)
    return exit_code


def cmd_fmo(args) -> int:
    ctx = _context(args)
    if args.m is None:
        raise InputError("fmo needs --m")
    m = _csv_ints(args.m, ctx.quiver.n, "m")
    f = _dressing(args, ctx, m)
    sign = args.sign or "+"
    try:
        element = fmo(ctx, m, f, sign)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    report = {
        "m": list(m),
        "sign": sign,
        "dressing": poly_text(f.value),
        "ring": element.ring_tag,
        "result": _ratfunc_json(element.value),
    }
    _emit(report, args.json)
    return 0


def cmd_hilbert(args) -> int:
    ctx = _context(args)
    cls = classify_theory(ctx)
    report = {
        "classification": cls.kind,
        "min_degree": cls.min_degree,
        "witness": list(cls.witness) if cls.witness is not None else None,
        "order": args.order,
        "poisson_cone_point": cls.kind == "good",
    }
    if cls.kind == "bad":
        report["error"] = "bad theory: the grading is unbounded below, no series"
        _emit(report, args.json)
        return 2
    series = hilbert_series(ctx, args.order)
    report["coeffs"] = list(series.coeffs)
    _emit(report, args.json)
    return 0


def _sweep_m(ctx, args):
    if args.m is not None:
        return [_csv_ints(args.m, ctx.quiver.n, "m")]
    return [m for m in itertools.product(*(range(vi + 1) for vi in ctx.v))]


def _sweep_f(ctx, args, m):
    if args.f is not None:
        return [_dressing(args, ctx, m)]
    return list(dressing_basis(ctx.v, tuple(m), args.max_degree))


def _sweep_signs(args):
    return [args.sign] if args.sign else ["+", "-"]


def _verify_restriction(args, ctx, cases):
    if args.vprime is None:
        raise InputError("verify restriction needs --vprime")
    v_prime = _csv_ints(args.vprime, ctx.quiver.n, "vprime")
    try:
        slice_target_context(ctx, v_prime)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    for m in _sweep_m(ctx, args):
        for f in _sweep_f(ctx, args, m):
            for sign in _sweep_signs(args):
                rep = verify_restriction(ctx, v_prime, m, f, sign)
                cases.append({
                    "m": list(m), "f": poly_text(f.value), "sign": sign,
                    "holds": rep.holds,
                    "lhs": _ratfunc_json(rep.lhs),
                    "rhs": _ratfunc_json(rep.rhs),
                })


def _verify_adding_defect(args, ctx, cases):
    if args.vprime is None:
        raise InputError("verify adding-defect needs --vprime")
    v_prime = _csv_ints(args.vprime, ctx.quiver.n, "vprime")
    split = DefectSplit.make(ctx.v, v_prime)
    for m in _sweep_m(ctx, args):
        for f in _sweep_f(ctx, args, m):
            rep = verify_adding_defect_theorem(ctx, split, m, f)
            cases.append({
                "m": list(m), "f": poly_text(f.value),
                "holds": rep.holds,
                "lhs": _ratfunc_json(rep.lhs),
                "rhs": _ratfunc_json(rep.rhs),
            })


def _verify_involution(args, ctx, cases):
    for m in _sweep_m(ctx, args):
        for f in _sweep_f(ctx, args, m):
            plus = fmo_plus(ctx, m, f)
            minus = fmo_minus(ctx, m, f)
            image = chevalley(ctx, plus)
            twice = chevalley(ctx, image)
            cases.append({
                "m": list(m), "f": poly_text(f.value),
                "holds": image.value == minus.value and twice.value == plus.value,
                "lhs": _ratfunc_json(image.value),
                "rhs": _ratfunc_json(minus.value),
            })


def _verify_d_identity(args, ctx, cases):
    for i in range(ctx.quiver.n):
        rep = d_identity_check(ctx, i)
        cases.append({
            "vertex": ctx.quiver.vertices[i],
            "holds": rep.holds,
            "d": _ratfunc_json(rep.d),
        })


def _verify_km(args, ctx, cases):
    if args.vprime is None:
        raise InputError("verify km-embedding needs --vprime")
    v_prime = _csv_ints(args.vprime, ctx.quiver.n, "vprime")
    split = DefectSplit.make(ctx.v, v_prime)
    try:
        slice_target_context(ctx, v_prime)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    for m in _sweep_m(ctx, args):
        for f in _sweep_f(ctx, args, m):
            for sign in _sweep_signs(args):
                try:
                    rep = compose_embedding(ctx, split, m, f, sign)
                except ConicityError as exc:
                    cases.append({
                        "m": list(m), "f": poly_text(f.value), "sign": sign,
                        "skipped": "conicity fails: %s" % exc,
                    })
                    continue
                cases.append({
                    "m": list(m), "f": poly_text(f.value), "sign": sign,
                    "holds": rep.matches_theorem,
                    "stages": [
                        {"stage": st.stage,
                         "gamma": [list(t) for t in st.mmo.gamma] if st.mmo else None,
                         "dressing": ratfunc_text(st.mmo.dressing) if st.mmo else "0",
                         "factor": st.sign_log[-1][1]}
                        for st in rep.states
                    ],
                    "lhs": _ratfunc_json(rep.result.value),
                    "rhs": _ratfunc_json(rep.expected.value),
                })


def _verify_orientation(args, ctx, cases):
    if not ctx.quiver.edges:
        return
    for k in range(len(ctx.quiver.edges)):
        for m in _sweep_m(ctx, args):
            for f in _sweep_f(ctx, args, m):
                rep = orientation_flip_sign(ctx, k, m, f.value)
                s, t = ctx.quiver.edges[k]
                cases.append({
                    "edge": {"source": ctx.quiver.vertices[s],
                             "target": ctx.quiver.vertices[t]},
                    "m": list(m), "f": poly_text(f.value),
                    "predicted_sign": rep.sign,
                    "holds": rep.matches,
                })


VERIFY_SUBJECTS = {
    "restriction": _verify_restriction,
    "adding-defect": _verify_adding_defect,
    "involution": _verify_involution,
    "d-identity": _verify_d_identity,
    "km-embedding": _verify_km,
    "orientation": _verify_orientation,
}


def cmd_verify(args) -> int:
    ctx = _context(args)
    cases = []
    VERIFY_SUBJECTS[args.subject](args, ctx, cases)
    checked = [c for c in cases if "holds" in c]
    all_hold = all(c["holds"] for c in checked)
    report = {
        "subject": args.subject,
        "cases": cases,
        "checked": len(checked),
        "skipped": len(cases) - len(checked),
        "all_hold": all_hold,
    }
    _emit(report, args.json)
    return 0 if all_hold else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quiver-fmo",
        description="Exact monopole-operator computations for quiver gauge theories.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, need_order=False):
        p.add_argument("--quiver", required=True,
                       help="path to a quiver JSON file, or one of: %s"
                       % ", ".join(sorted(BUILTIN_QUIVERS)))
        p.add_argument("--w", required=True, help="framing vector, comma-separated")
        p.add_argument("--v", required=True, help="gauge vector, comma-separated")
        p.add_argument("--json", action="store_true", help="emit JSON")

    p = sub.add_parser("classify", help="conicity / goodness / affine level")
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("fmo", help="one dressed monopole operator in coordinates")
    common(p)
    p.add_argument("--m", help="monopole charge, comma-separated")
    p.add_argument("--f", help="dressing polynomial, e.g. 'w[1,1]^2 + w[1,2]'")
    p.add_argument("--sign", choices=["+", "-"])
    p.set_defaults(func=cmd_fmo)

    p = sub.add_parser("hilbert", help="truncated monopole-formula Hilbert series")
    common(p)
    p.add_argument("--order", type=int, required=True)
    p.set_defaults(func=cmd_hilbert)

    p = sub.add_parser("verify", help="symbolic verification sweeps")
    p.add_argument("subject", choices=sorted(VERIFY_SUBJECTS))
    common(p)
    p.add_argument("--vprime", help="target gauge vector, comma-separated")
    p.add_argument("--m", help="restrict the sweep to one monopole charge")
    p.add_argument("--f", help="restrict the sweep to one dressing")
    p.add_argument("--sign", choices=["+", "-"])
    p.add_argument("--max-degree", type=int, default=2,
                   help="dressing-basis degree bound for sweeps (default 2)")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print("input error: %s" % exc, file=sys.stderr)
        return 2
    except BadTheoryError as exc:
        print("refused: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
