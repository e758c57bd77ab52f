"""Command-line front door: JSON in, deterministic JSON out.

Exit codes: 0 success, 2 schema/usage, 3 domain precondition, 4 precision,
5 convergence.  Reports are serialized with sorted keys and echo the
effective precision/truncation, so identical inputs give identical bytes
(the acceptance runner additionally prints measured runtimes).  SENLAB_PREC
overrides the default working precision; --prec and --trunc override
per-object settings.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import jsonio
from .accept import SUITES, run_suite
from .dpseries import coaction, dp_mul, gsharp_transport, log_t, sen_theta, solve_theta
from .errors import SenlabError, UsageError
from .field import FieldEmbedding, elem_arith, residue, scalar_embedding, trace_to_Qp, valuation
from .gamma import (build_level, g_minus_one, kernel_check, neumann_invert,
                    rho_bound)
from .padic import DEFAULT_PRECISION, PadicScalar
from .picard import boundary, functoriality_check, in_picard_image, kernel_lattice, witness_of_order
from .senmod import (SenModule, bk_twist, char_poly, cohomology, dual,
                     ht_weights, nearly_ht_test, operator_series,
                     semilinear_descent_matrix, tensor)


def _load(path_or_inline):
    """Read JSON from a file path, or parse inline when it looks like JSON."""
    if path_or_inline.lstrip().startswith(("{", "[")):
        text = path_or_inline
    else:
        try:
            with open(path_or_inline, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as err:
            raise UsageError(f"cannot read {path_or_inline}: {err}") from err
    try:
        return json.loads(text)
    except json.JSONDecodeError as err:
        raise UsageError(f"invalid JSON in {path_or_inline}: {err}") from err


def _emit(report, args):
    payload = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
    sys.stdout.write(payload)


def _settings(args, eff_prec=None, eff_trunc=None):
    prec = eff_prec if eff_prec is not None else _effective_prec(args)
    trunc = eff_trunc if eff_trunc is not None else args.trunc
    return {"prec": prec, "trunc": trunc}


def _effective_prec(args):
    if args.prec is not None:
        return args.prec
    env = os.environ.get("SENLAB_PREC")
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError("SENLAB_PREC must be an integer") from None
    return None


def _field_from_args(args):
    prec = _effective_prec(args)
    return jsonio.decode_field_spec(_load(args.field), prec_override=prec)


def _maybe_default_prec(args):
    return _effective_prec(args) or DEFAULT_PRECISION


# ---------------------------------------------------------------------------
# handlers
# ---------------------------------------------------------------------------

def _cmd_field_build(args):
    K = _field_from_args(args)
    exact, v_e = K.different_e.pivot_val()
    return {
        "settings": _settings(args, K.prec),
        "p": K.p, "residue_degree": K.f, "ramification_index": K.e_ram,
        "degree": K.degree,
        "different_e": jsonio.encode_element(K.different_e),
        "v_e": jsonio.encode_fraction(v_e),
        "pi": jsonio.encode_element(K.pi),
    }


def _cmd_field_arith(args):
    K = _field_from_args(args)
    x = jsonio.decode_element(_load(args.x), K, "x")
    y = jsonio.decode_element(_load(args.y), K, "y")
    return {"settings": _settings(args, K.prec),
            "result": jsonio.encode_element(elem_arith(x, y, args.op))}


def _cmd_field_valuation(args):
    K = _field_from_args(args)
    x = jsonio.decode_element(_load(args.elem), K, "elem")
    exact, v = valuation(x, normalize=args.normalize)
    return {"settings": _settings(args, K.prec), "exact": exact,
            "value": jsonio.encode_fraction(v)}


def _cmd_field_trace(args):
    K = _field_from_args(args)
    x = jsonio.decode_element(_load(args.elem), K, "elem")
    return {"settings": _settings(args, K.prec),
            "trace": jsonio.encode_scalar(trace_to_Qp(x))}


def _cmd_field_residue(args):
    K = _field_from_args(args)
    x = jsonio.decode_element(_load(args.elem), K, "elem")
    return {"settings": _settings(args, K.prec), "residue": list(residue(x))}


def _cmd_field_substitute(args):
    K = _field_from_args(args)
    x = jsonio.decode_element(_load(args.elem), K, "elem")
    y_img = jsonio.decode_element(_load(args.y_image), K, "y_image")
    u_img = jsonio.decode_element(_load(args.u_image), K, "u_image")
    emb = FieldEmbedding(K, K, y_img, u_img)
    return {"settings": _settings(args, K.prec),
            "result": jsonio.encode_element(emb(x))}


def _series_context(args):
    K = _field_from_args(args)
    obj = _load(args.g if hasattr(args, "g") and args.g else args.f)
    series = jsonio.decode_dpseries(obj, K, trunc_override=args.trunc)
    return K, series


def _cmd_dps_solve_theta(args):
    K, g = _series_context(args)
    return {"settings": _settings(args, K.prec, g.trunc),
            "result": jsonio.encode_dpseries(solve_theta(g))}


def _cmd_dps_theta(args):
    K, f = _series_context(args)
    out = sen_theta(f)
    return {"settings": _settings(args, K.prec, f.trunc), "valid_to": out.valid_to,
            "result": jsonio.encode_dpseries(out)}


def _cmd_dps_mul(args):
    K = _field_from_args(args)
    f = jsonio.decode_dpseries(_load(args.f), K, trunc_override=args.trunc)
    g = jsonio.decode_dpseries(_load(args.g), K, "g", trunc_override=args.trunc)
    return {"settings": _settings(args, K.prec),
            "result": jsonio.encode_dpseries(dp_mul(f, g))}


def _cmd_dps_coaction(args):
    K = _field_from_args(args)
    f = jsonio.decode_dpseries(_load(args.f), K, trunc_override=args.trunc)
    b = jsonio.decode_element(_load(args.b), K, "b")
    return {"settings": _settings(args, K.prec, f.trunc),
            "result": jsonio.encode_dpseries(coaction(f, b))}


def _cmd_dps_log_t(args):
    K = _field_from_args(args)
    trunc = args.trunc if args.trunc is not None else 32
    e = jsonio.decode_element(_load(args.e), K, "e") if args.e else None
    return {"settings": _settings(args, K.prec, trunc),
            "result": jsonio.encode_dpseries(log_t(K, trunc, e=e))}


def _cmd_dps_gsharp(args):
    K = _field_from_args(args)
    f = jsonio.decode_dpseries(_load(args.f), K, trunc_override=args.trunc)
    return {"settings": _settings(args, K.prec, f.trunc),
            "result": jsonio.encode_dpseries(gsharp_transport(f, args.direction))}


def _module_from_args(args):
    K = _field_from_args(args)
    theta = jsonio.decode_theta_matrix(_load(args.theta), K)
    return SenModule(K, theta)


def _cmd_senmod_charpoly(args):
    M = _module_from_args(args)
    return {"settings": _settings(args, M.field.prec),
            "char_poly": [jsonio.encode_element(c) for c in char_poly(M)]}


def _cmd_senmod_nearly_ht(args):
    M = _module_from_args(args)
    report = nearly_ht_test(M)
    out = jsonio.encode_classifier_report(report)
    out["slopes"] = out["polygon"]["slopes"]
    out["settings"] = _settings(args, M.field.prec)
    return out


def _cmd_senmod_weights(args):
    M = _module_from_args(args)
    rng = (args.nmin, args.nmax) if args.nmin is not None else None
    weights = ht_weights(M, rng)
    return {"settings": _settings(args, M.field.prec),
            "weights": [{"n": n, "multiplicity": m} for n, m in weights]}


def _cmd_senmod_cohomology(args):
    M = _module_from_args(args)
    coh = cohomology(M)
    return {"settings": _settings(args, M.field.prec),
            "h0": coh.h0_dim, "h1": coh.h1_dim,
            "h0_basis": [[jsonio.encode_element(x) for x in vec]
                         for vec in coh.h0_basis],
            "h1_basis_indices": coh.h1_basis_indices}


def _cmd_senmod_tensor(args):
    K = _field_from_args(args)
    m1 = SenModule(K, jsonio.decode_theta_matrix(_load(args.theta), K))
    m2 = SenModule(K, jsonio.decode_theta_matrix(_load(args.theta2), K, "theta2"))
    return {"settings": _settings(args, K.prec),
            "theta": jsonio.encode_matrix(tensor(m1, m2).matrix())}


def _cmd_senmod_dual(args):
    M = _module_from_args(args)
    return {"settings": _settings(args, M.field.prec),
            "theta": jsonio.encode_matrix(dual(M).matrix())}


def _cmd_senmod_twist(args):
    M = _module_from_args(args)
    return {"settings": _settings(args, M.field.prec),
            "theta": jsonio.encode_matrix(bk_twist(M, args.n).matrix())}


def _cmd_senmod_series(args):
    M = _module_from_args(args)
    b = jsonio.decode_element(_load(args.b), M.field, "b")
    return {"settings": _settings(args, M.field.prec),
            "matrix": jsonio.encode_matrix(operator_series(M, b))}


def _cmd_senmod_descent(args):
    M = _module_from_args(args)
    chi = jsonio.decode_scalar(_load(args.chi), "chi", p=M.field.p,
                               prec=M.field.prec)
    return {"settings": _settings(args, M.field.prec),
            "matrix": jsonio.encode_matrix(semilinear_descent_matrix(M, chi))}


def _level_from_args(args):
    prec = _maybe_default_prec(args)
    return build_level(args.p, args.m, args.a, prec)


def _cmd_gamma_delta(args):
    level = _level_from_args(args)
    values = [n for n in range(args.nmin, args.nmax + 1) if n != 0]
    if not values:
        raise UsageError("empty twist range")
    report = rho_bound(level, values)
    return {
        "settings": _settings(args, level.prec),
        "delta": jsonio.encode_fraction(report.delta),
        "per_n": {str(n): jsonio.encode_fraction(v)
                  for n, v in report.per_n.items()},
        "norms": {str(n): f"{level.p}^{v}" for n, v in report.per_n.items()},
    }


def _cmd_gamma_invert(args):
    level = _level_from_args(args)
    trunc = args.trunc if args.trunc is not None else 8
    e = PadicScalar.from_int(args.e, args.p, level.prec)
    T = g_minus_one(level, e, trunc)
    rhs = jsonio.decode_scalar_vector(_load(args.rhs), level.p, level.prec)
    res = neumann_invert(T, rhs, require_contraction=args.require_contraction)
    return {
        "settings": _settings(args, level.prec, trunc),
        "solution": [jsonio.encode_scalar(x) for x in res["solution"]],
        "residual_valuation": str(res["residual_valuation"]),
        "sup_norm_exponent": jsonio.encode_fraction(res["sup_norm_exponent"]),
    }


def _cmd_gamma_kernel(args):
    level = _level_from_args(args)
    trunc = args.trunc if args.trunc is not None else 8
    e = PadicScalar.from_int(args.e, args.p, level.prec)
    T = g_minus_one(level, e, trunc)
    con = T.contraction_report()
    return {"settings": _settings(args, level.prec, trunc),
            "kernel_dimension": kernel_check(T),
            "sup_norm_exponent": jsonio.encode_fraction(con["sup_norm_exponent"]),
            "topologically_nilpotent": con["topologically_nilpotent"]}


def _cmd_picard_boundary(args):
    K = _field_from_args(args)
    x = jsonio.decode_element(_load(args.elem), K, "elem")
    b = boundary(x)
    out = jsonio.encode_boundary(b)
    out["in_kernel"] = b.is_zero()
    out["settings"] = _settings(args, K.prec)
    return out


def _cmd_picard_kernel(args):
    K = _field_from_args(args)
    rep = kernel_lattice(K, args.s)
    return {"settings": _settings(args, K.prec),
            "basis": [jsonio.encode_element(x) for x in rep.basis],
            "image_order_exponent": rep.image_order_exponent}


def _cmd_picard_functorial(args):
    K = _field_from_args(args)
    L = jsonio.decode_field_spec(_load(args.ext), "ext",
                                 prec_override=_effective_prec(args))
    if args.y_image and args.u_image:
        emb = FieldEmbedding(K, L,
                             jsonio.decode_element(_load(args.y_image), L, "y_image"),
                             jsonio.decode_element(_load(args.u_image), L, "u_image"))
    else:
        emb = scalar_embedding(K, L)
    x = jsonio.decode_element(_load(args.elem), K, "elem")
    rep = functoriality_check(emb, x)
    return {"settings": _settings(args, K.prec),
            "lhs": jsonio.encode_boundary(rep["lhs"]),
            "rhs": jsonio.encode_boundary(rep["rhs"]),
            "equal": rep["equal"],
            "relative_degree": rep["relative_degree"]}


def _cmd_picard_witness(args):
    K = _field_from_args(args)
    w = witness_of_order(K, args.k)
    return {"settings": _settings(args, K.prec),
            "witness": jsonio.encode_element(w),
            "boundary": jsonio.encode_boundary(boundary(w))}


def _cmd_accept(args):
    results = run_suite(args.suite)
    failures = [r for r in results if not r["passed"]]
    for r in results:
        status = "PASS" if r["passed"] else "FAIL"
        line = (f"[{r['index']:2d}] {status}  {r['elapsed_s']:.2f}s "
                f"(budget {r['budget_s']:.1f}s)  {r['name']}")
        print(line, file=sys.stderr)
        if not r["passed"]:
            print(f"      {r['message']}", file=sys.stderr)
    report = {
        "suite": args.suite,
        "criteria": [
            {"index": r["index"], "name": r["name"], "passed": r["passed"],
             "message": r["message"], "details": _stringify(r["details"]),
             "elapsed_s": round(r["elapsed_s"], 3),
             "budget_s": r["budget_s"]}
            for r in results
        ],
        "passed": not failures,
    }
    _emit(report, args)
    if failures:
        raise SenlabError("first failing criterion: %d (%s)"
                          % (failures[0]["index"], failures[0]["message"]))
    return None


def _stringify(obj):
    if isinstance(obj, dict):
        return {k: _stringify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_stringify(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    return obj


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prec", type=int, default=None,
                        help="override working precision everywhere")
    common.add_argument("--trunc", type=int, default=None,
                        help="override series truncation")
    common.add_argument("--out", default=None, help="also write the report here")

    parser = argparse.ArgumentParser(
        prog="senlab",
        description="Exact computations with Sen operators over p-adic fields")
    sub = parser.add_subparsers(dest="group", required=True)

    def leaf(group, name, fn):
        q = group.add_parser(name, parents=[common])
        q.set_defaults(fn=fn)
        return q

    fld = sub.add_parser("field").add_subparsers(dest="cmd", required=True)
    q = leaf(fld, "build", _cmd_field_build)
    q.add_argument("--spec", required=True, dest="field")
    q = leaf(fld, "arith", _cmd_field_arith)
    q.add_argument("--field", required=True); q.add_argument("--x", required=True)
    q.add_argument("--y", required=True)
    q.add_argument("--op", required=True, choices=["add", "sub", "mul", "div"])
    q = leaf(fld, "valuation", _cmd_field_valuation)
    q.add_argument("--field", required=True); q.add_argument("--elem", required=True)
    q.add_argument("--normalize", default="p", choices=["p", "pi"])
    q = leaf(fld, "trace", _cmd_field_trace)
    q.add_argument("--field", required=True); q.add_argument("--elem", required=True)
    q = leaf(fld, "residue", _cmd_field_residue)
    q.add_argument("--field", required=True); q.add_argument("--elem", required=True)
    q = leaf(fld, "substitute", _cmd_field_substitute)
    q.add_argument("--field", required=True); q.add_argument("--elem", required=True)
    q.add_argument("--y-image", required=True, dest="y_image")
    q.add_argument("--u-image", required=True, dest="u_image")

    dps = sub.add_parser("dps").add_subparsers(dest="cmd", required=True)
    q = leaf(dps, "solve-theta", _cmd_dps_solve_theta)
    q.add_argument("--field", required=True); q.add_argument("--g", required=True)
    q = leaf(dps, "theta", _cmd_dps_theta)
    q.add_argument("--field", required=True); q.add_argument("--f", required=True)
    q = leaf(dps, "mul", _cmd_dps_mul)
    q.add_argument("--field", required=True); q.add_argument("--f", required=True)
    q.add_argument("--g", required=True)
    q = leaf(dps, "coaction", _cmd_dps_coaction)
    q.add_argument("--field", required=True); q.add_argument("--f", required=True)
    q.add_argument("--b", required=True)
    q = leaf(dps, "log-t", _cmd_dps_log_t)
    q.add_argument("--field", required=True); q.add_argument("--e", default=None)
    q = leaf(dps, "gsharp", _cmd_dps_gsharp)
    q.add_argument("--field", required=True); q.add_argument("--f", required=True)
    q.add_argument("--direction", required=True,
                   choices=["to_gsharp", "from_gsharp"])

    sen = sub.add_parser("senmod").add_subparsers(dest="cmd", required=True)
    for name, fn in [
        ("char-poly", _cmd_senmod_charpoly),
        ("nearly-ht", _cmd_senmod_nearly_ht),
        ("cohomology", _cmd_senmod_cohomology),
        ("dual", _cmd_senmod_dual),
    ]:
        q = leaf(sen, name, fn)
        q.add_argument("--field", required=True)
        q.add_argument("--theta", required=True)
    q = leaf(sen, "weights", _cmd_senmod_weights)
    q.add_argument("--field", required=True); q.add_argument("--theta", required=True)
    q.add_argument("--nmin", type=int, default=None)
    q.add_argument("--nmax", type=int, default=None)
    q = leaf(sen, "tensor", _cmd_senmod_tensor)
    q.add_argument("--field", required=True); q.add_argument("--theta", required=True)
    q.add_argument("--theta2", required=True)
    q = leaf(sen, "twist", _cmd_senmod_twist)
    q.add_argument("--field", required=True); q.add_argument("--theta", required=True)
    q.add_argument("--n", type=int, required=True)
    q = leaf(sen, "operator-series", _cmd_senmod_series)
    q.add_argument("--field", required=True); q.add_argument("--theta", required=True)
    q.add_argument("--b", required=True)
    q = leaf(sen, "descent", _cmd_senmod_descent)
    q.add_argument("--field", required=True); q.add_argument("--theta", required=True)
    q.add_argument("--chi", required=True)

    gam = sub.add_parser("gamma").add_subparsers(dest="cmd", required=True)
    q = leaf(gam, "delta", _cmd_gamma_delta)
    q.add_argument("--p", type=int, required=True)
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--a", type=int, required=True)
    q.add_argument("--nmin", type=int, required=True)
    q.add_argument("--nmax", type=int, required=True)
    q = leaf(gam, "invert", _cmd_gamma_invert)
    q.add_argument("--p", type=int, required=True)
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--a", type=int, required=True)
    q.add_argument("--e", type=int, required=True)
    q.add_argument("--rhs", required=True)
    q.add_argument("--require-contraction", action="store_true",
                   dest="require_contraction")
    q = leaf(gam, "kernel", _cmd_gamma_kernel)
    q.add_argument("--p", type=int, required=True)
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--a", type=int, required=True)
    q.add_argument("--e", type=int, required=True)

    pic = sub.add_parser("picard").add_subparsers(dest="cmd", required=True)
    q = leaf(pic, "boundary", _cmd_picard_boundary)
    q.add_argument("--field", required=True); q.add_argument("--elem", required=True)
    q = leaf(pic, "kernel", _cmd_picard_kernel)
    q.add_argument("--field", required=True)
    q.add_argument("--s", type=int, default=0)
    q = leaf(pic, "functorial", _cmd_picard_functorial)
    q.add_argument("--field", required=True); q.add_argument("--ext", required=True)
    q.add_argument("--elem", required=True)
    q.add_argument("--y-image", default=None, dest="y_image")
    q.add_argument("--u-image", default=None, dest="u_image")
    q = leaf(pic, "witness", _cmd_picard_witness)
    q.add_argument("--field", required=True)
    q.add_argument("--k", type=int, required=True)

    q = sub.add_parser("accept", parents=[common])
    q.add_argument("suite", nargs="?", default="all",
                   choices=["all"] + sorted(SUITES))
    q.set_defaults(fn=_cmd_accept)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return 2 if err.code not in (0, None) else 0
    try:
        report = args.fn(args)
    except SenlabError as err:
        payload = {
            "error": {
                "kind": type(err).__name__,
                "exit_code": err.exit_code,
                "message": str(err),
                "concept": err.concept,
            }
        }
        sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
        return err.exit_code
    if report is not None:
        _emit(report, args)
    return 0


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
