"""Командная строка: построение систем, сканы по простым, проверки и пересчёт таблиц.

Коды выхода: 0 (успех), 1 (проверка не прошла или таблица не совпала), 2 (некорректный ввод).
"""
from __future__ import annotations

import argparse
import logging
import sys
import time
from typing import Any, Callable, Optional, Sequence

from pydantic import ValidationError

from adelab import __version__
from adelab.config import Settings, resolve_threads
from adelab.core.errors import AdelabError, InvalidInput
from adelab.core.parse import parse_int_vector, parse_poly, parse_vector
from adelab.core.poly import PolyRing
from adelab.core.scalars import bernoulli, parse_rational
from adelab.reports import (
    ReportEnvelope,
    ScanConfig,
    algebraic_payload,
    binom_payload,
    codim_rows_payload,
    collinearity_payload,
    emit,
    period_series_payload,
    prime_scan_payload,
    series_payload,
)
from adelab.services import algfun, elliptic_fp, hodge_periods, linear_ode, modular, repro, vector_fields
from adelab.services.builders import ODE_KINDS, build_field, build_index_set, build_ode, parse_poly_list, read_monomials
from adelab.services.scan import primes_upto

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INVALID = 2

# обработчик возвращает (payload, прошла ли проверка)
Handler = Callable[[argparse.Namespace, Settings], tuple[dict[str, Any], bool]]

_COMMON = ("out", "threads", "timings", "handler", "group", "action")


def _index_set(args: argparse.Namespace) -> hodge_periods.DeformationIndexSet:
    monomials = read_monomials(args.monomials) if args.monomials else []
    return build_index_set(monomials, args.n, args.d)


# --- pcurv ---


def _ode(args: argparse.Namespace) -> linear_ode.OdeSystem:
    return build_ode(args.ode, args.params, args.coeffs)


def pcurv_test(args, settings):
    system = _ode(args)
    status = linear_ode.curvature_test(system, args.p, args.k)
    return {"label": system.label, "p": args.p, "k": args.k, "m": linear_ode.mpk(args.p, args.k), "status": status.value}, True


def pcurv_scan(args, settings):
    system = _ode(args)
    report = linear_ode.bad_prime_scan(
        system,
        args.pmax,
        args.k,
        maxbad=args.maxbad,
        workers=resolve_threads(args.threads, settings),
        chunksize=settings.scan_chunksize,
    )
    return prime_scan_payload(report), True


def pcurv_density(args, settings):
    system = _ode(args)
    report = linear_ode.bad_prime_scan(
        system, args.pmax, 1, workers=resolve_threads(args.threads, settings), chunksize=settings.scan_chunksize
    )
    density = linear_ode.density_of(report)
    return {
        "label": system.label,
        "density": density,
        "good": len(report.good()),
        "bad": len(report.bad()),
        "ring": report.ring(),
    }, True


def pcurv_single(args, settings):
    system = _ode(args)
    status = linear_ode.single_solution_test(system, args.p, args.k, parse_rational(args.z0), parse_vector(args.y0))
    return {"label": system.label, "p": args.p, "k": args.k, "status": status.value}, True


def pcurv_dsolve(args, settings):
    system = _ode(args)
    z0 = parse_rational(args.z0)
    ys = linear_ode.dsolve_formal(system, z0, parse_vector(args.y0), args.order)
    residual = linear_ode.ode_residual(system, z0, ys)
    primes = list(parse_int_vector(args.primes)) if args.primes else []
    payload = {
        "label": system.label,
        "solution": [series_payload(y) for y in ys],
        "residual_zero": all(r.is_zero() for r in residual),
        "integrality": {
            str(p): min(linear_ode.p_integrality_report(y, [p])[p] for y in ys) for p in primes
        },
    }
    return payload, payload["residual_zero"]


def pcurv_ucheck(args, settings):
    system = _ode(args)
    holds = linear_ode.frobenius_U_check(system, args.p, parse_rational(args.z0))
    return {"label": system.label, "p": args.p, "holds": holds}, holds


def pcurv_pullback(args, settings):
    target = _ode(args)
    source = parse_poly_list(args.source)
    holds = linear_ode.pullback_check(target, source, args.s)
    return {"label": target.label, "s": args.s, "holds": holds}, holds


# --- vf ---


def _field(args: argparse.Namespace) -> vector_fields.Derivation:
    return build_field(args.catalog, args.params, args.field, args.vars)


def vf_pclosed(args, settings):
    v = _field(args)
    point = parse_vector(args.point) if args.point else None
    if args.p is not None:
        reports = [vector_fields.is_pclosed(v, args.p, point)]
    elif args.pmax is not None:
        if point is not None:
            raise InvalidInput("--point goes with a single --p")
        reports = vector_fields.pclosed_scan(
            v, args.pmax, workers=resolve_threads(args.threads, settings), chunksize=settings.scan_chunksize
        )
    else:
        raise InvalidInput("give --p or --pmax")
    payload = collinearity_payload(reports)
    payload["label"] = v.label
    payload["ring"] = sorted(v.ring_primes())
    return payload, True


def vf_firstintegral(args, settings):
    v = _field(args)
    if args.f:
        f = parse_poly(args.f, v.ring)
        if args.p is not None:
            v, f = v.reduce(args.p), f.reduce(args.p)
    else:
        if args.p is None or v.label not in ("ramanujan-a", "ramanujan-e"):
            raise InvalidInput("without --f give a ramanujan catalog field and --p")
        convention = v.label[-1]
        f = vector_fields.ramanujan_first_integral(args.p, convention)
        v = v.reduce(args.p)
    holds = vector_fields.first_integral_check(v, f)
    return {"label": v.label, "f": f, "holds": holds}, holds


def vf_bianchini(args, settings):
    holds = vector_fields.bianchini_check(args.p)
    return {"p": args.p, "holds": holds}, holds


def vf_linearize(args, settings):
    v = _field(args).reduce(args.p)
    if args.matrix:
        A = [list(parse_int_vector(row)) for row in args.matrix.split(";")]
    else:
        A = vector_fields.linear_part(v)
    f = vector_fields.linearize_nd(v, A, args.order)
    return {"label": v.label, "p": args.p, "matrix": A, "order": args.order, "f": f}, True


def vf_membership(args, settings):
    p = args.p
    ring = modular.T123.reduced(p)
    if args.f:
        f = parse_poly(args.f, modular.T123).reduce(p)
    else:
        if args.index not in (1, 2, 3):
            raise InvalidInput("--index must be 1, 2 or 3")
        v = vector_fields.catalog("ramanujan-a").reduce(p)
        w = vector_fields.frobenius_power(v, p)
        f = w.components[args.index - 1] - v.components[args.index - 1]
    if f.ring != ring:
        raise InvalidInput("polynomial must live in t1, t2, t3")
    result = vector_fields.ramanujan_ideal_membership(f, p)
    ok = result.status == vector_fields.Membership.DIVISIBLE
    return {"p": p, "status": result.status.value, "remainder": result.remainder}, ok


# --- mf ---


def mf_eisenstein(args, settings):
    e = modular.eisenstein_q(args.weight, args.order)
    payload: dict[str, Any] = {"weight": args.weight, "coefficients": list(e.series.coefficients())}
    if args.weight >= 4:
        payload["decomposition"] = modular.eisenstein_decomposition(args.weight)
    return payload, True


def mf_ab(args, settings):
    A, B = modular.ab_polynomials(args.p, args.convention)
    return {"p": args.p, "convention": args.convention, "A": A, "B": B}, True


def mf_check_ep(args, settings):
    holds = modular.ep_congruence_check(args.p, args.order)
    return {"p": args.p, "order": args.order, "holds": holds}, holds


def mf_numerator(args, settings):
    multiplier = modular.numerator_multiplier(args.weight)
    expected = abs((bernoulli(args.weight) / args.weight).numerator)
    return {"weight": args.weight, "multiplier": multiplier, "bernoulli_numerator": expected}, multiplier == expected


def mf_ramanujan(args, settings):
    direct = modular.ramanujan_solution_check(args.order)
    solved = modular.ramanujan_recursion_solve(args.order)
    matches = solved.matches_eisenstein()
    integral = all(v >= 0 for v in solved.integrality.values())
    payload = {
        "order": args.order,
        "solution_check": direct,
        "recursion_matches": matches,
        "integrality": {str(p): v for p, v in solved.integrality.items()},
    }
    return payload, direct and matches and integral


# --- ec ---


def _curve(args: argparse.Namespace) -> elliptic_fp.WeierstrassCurve:
    return elliptic_fp.WeierstrassCurve(args.p, args.t2, args.t3)


def ec_hw(args, settings):
    curve = _curve(args)
    via_power = elliptic_fp.half_power_coeffs(curve).hasse_witt
    via_recursion = elliptic_fp.hasse_witt_recursion(args.p, curve.cubic())
    ok = via_power == via_recursion
    payload: dict[str, Any] = {"p": args.p, "half_power": via_power, "recursion": via_recursion}
    if curve.numeric and curve.discriminant:
        trace = elliptic_fp.trace_of_frobenius(curve)
        payload["trace"] = trace
        ok = ok and (trace - int(via_power)) % args.p == 0
    payload["agree"] = ok
    return payload, ok


def ec_count(args, settings):
    curve = _curve(args)
    points = elliptic_fp.point_count(curve)
    hw = int(elliptic_fp.half_power_coeffs(curve).hasse_witt)
    trace = args.p + 1 - points
    ok = (trace - hw) % args.p == 0
    return {"p": args.p, "points": points, "trace": trace, "hasse_witt": hw, "agree": ok}, ok


def ec_powersum(args, settings):
    curve = _curve(args)
    jmax = args.jmax if args.jmax is not None else (args.p - 1) // 2
    holds = elliptic_fp.power_sum_check(curve, jmax)
    return {"p": args.p, "jmax": jmax, "holds": holds}, holds


def ec_abcheck(args, settings):
    if args.p is not None:
        primes = [args.p]
    elif args.pmax is not None:
        primes = primes_upto(args.pmax, 5)
    else:
        raise InvalidInput("give --p or --pmax")
    results = {str(p): elliptic_fp.ab_congruence_check(p) for p in primes}
    return {"results": results}, all(results.values())


def ec_cartier(args, settings):
    curve = _curve(args)
    return {"p": args.p, "matrix": elliptic_fp.cartier_matrix(curve)}, True


def ec_exactform(args, settings):
    if args.p is not None:
        holds = elliptic_fp.exact_form_congruence_check(args.p)
        return {"p": args.p, "holds": holds}, holds
    if args.n is None:
        raise InvalidInput("give --n or --p")
    red = elliptic_fp.exact_form_reduce(args.n)
    verified = red.verify()
    return {"n": args.n, "a0": red.a0, "a1": red.a1, "q": red.q, "verified": verified}, verified


def ec_field(args, settings):
    holds = elliptic_fp.hw_field_identity_check(args.p, _curve(args))
    return {"p": args.p, "holds": holds}, holds


# --- hodge ---


def hodge_series(args, settings):
    index_set = _index_set(args)
    series = hodge_periods.period_series(index_set.n, index_set.d, parse_int_vector(args.beta), index_set, args.trunc)
    payload = period_series_payload(series)
    payload["terms_check"] = hodge_periods.check_period_terms(series)
    return payload, payload["terms_check"]


def hodge_denominators(args, settings):
    index_set = _index_set(args)
    series = hodge_periods.period_series(index_set.n, index_set.d, parse_int_vector(args.beta), index_set, args.trunc)
    report = hodge_periods.denominator_report(series)
    return {"degrees": {str(deg): {str(p): e for p, e in f.items()} for deg, f in report.items()}}, True


def hodge_codim(args, settings):
    if args.seq:
        value = hodge_periods.codim_C(args.n, args.d, parse_int_vector(args.seq))
    elif args.m is not None:
        value = hodge_periods.codim_VZ(args.n, args.d, args.m)
    else:
        raise InvalidInput("give --m or --seq")
    return {"n": args.n, "d": args.d, "codim": value}, True


def hodge_table(args, settings):
    return codim_rows_payload(hodge_periods.table_repro()), True


def hodge_balegh(args, settings):
    branch = parse_int_vector(args.branch)
    if len(branch) != 2:
        raise InvalidInput("--branch takes two root indices")
    residual = hodge_periods.balegh_numeric_check(
        args.d, args.beta, (branch[0], branch[1]), args.trunc, parse_vector(args.t), args.tol
    )
    ok = residual < args.tol
    return {"d": args.d, "beta": args.beta, "residual": f"{residual:.3e}", "within_tolerance": ok}, ok


def hodge_quartic(args, settings):
    index_set = _index_set(args)
    holds = hodge_periods.quartic_specialization_check(index_set, args.trunc)
    return {"monomials": len(index_set), "trunc": args.trunc, "holds": holds}, holds


# --- algfun ---


def algfun_taylor(args, settings):
    names = tuple(v.strip() for v in args.vars.split(","))
    poly = parse_poly(args.poly, PolyRing(names))
    z0 = parse_int_vector(args.z0)
    if len(z0) == 1 and len(names) == 2:
        cert = algfun.taylor_algebraic(poly, z0[0], args.y0, args.order)
    else:
        cert = algfun.taylor_algebraic_multi(poly, z0, args.y0, args.order)
    return algebraic_payload(cert), cert.certified


def algfun_binomring(args, settings):
    report = algfun.binom_ring_denominators(parse_rational(args.a), args.kmax)
    return binom_payload(report), True


# --- repro ---


def run_repro(args: argparse.Namespace, settings: Settings) -> int:
    ok, diff = repro.repro(args.table, settings.golden_dir, resolve_threads(args.threads, settings))
    if ok:
        print(f"{args.table}: ok")
        return EXIT_OK
    sys.stdout.write(diff)
    print(f"{args.table}: mismatch", file=sys.stderr)
    return EXIT_CHECK_FAILED


# --- разбор аргументов ---


def _common() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--out", choices=("json", "csv", "text"), default="json")
    parent.add_argument("--threads", type=int, default=None)
    parent.add_argument("--timings", action="store_true", help="добавить wall_ms в отчёт")
    return parent


def _ode_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--ode", choices=ODE_KINDS, required=True)
    p.add_argument("--params", default="")
    p.add_argument("--coeffs", default=None, help="'c0;c1;...;cr', многочлены от z")


def _field_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--catalog", default=None)
    p.add_argument("--params", default="")
    p.add_argument("--field", default=None, help="'v1;v2;...'")
    p.add_argument("--vars", default=None, help="'x,y,...'")


def _curve_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--t2", type=int, default=None)
    p.add_argument("--t3", type=int, default=None)


def _hodge_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--monomials", default=None)
    p.add_argument("--trunc", type=int, default=3)


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="adelab", description="Exact modulo-prime checks for differential equations")
    parser.add_argument("--version", action="version", version=f"adelab {__version__}")
    groups = parser.add_subparsers(dest="group", required=True)

    def leaf(sub, name: str, handler: Handler) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common])
        p.set_defaults(handler=handler)
        return p

    # pcurv
    pc = groups.add_parser("pcurv", help="p-кривизна линейных систем").add_subparsers(dest="action", required=True)
    p = leaf(pc, "test", pcurv_test)
    _ode_args(p)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p = leaf(pc, "scan", pcurv_scan)
    _ode_args(p)
    p.add_argument("--pmax", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--maxbad", type=int, default=None)
    p = leaf(pc, "density", pcurv_density)
    _ode_args(p)
    p.add_argument("--pmax", type=int, required=True)
    p = leaf(pc, "single", pcurv_single)
    _ode_args(p)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--z0", required=True)
    p.add_argument("--y0", required=True)
    p = leaf(pc, "dsolve", pcurv_dsolve)
    _ode_args(p)
    p.add_argument("--z0", default="0")
    p.add_argument("--y0", required=True)
    p.add_argument("--order", type=int, default=10)
    p.add_argument("--primes", default=None)
    p = leaf(pc, "ucheck", pcurv_ucheck)
    _ode_args(p)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--z0", default="0")
    p = leaf(pc, "pullback", pcurv_pullback)
    _ode_args(p)
    p.add_argument("--source", required=True, help="'s0;s1;s2', многочлены от z")
    p.add_argument("--s", type=int, required=True)

    # vf
    vf = groups.add_parser("vf", help="векторные поля").add_subparsers(dest="action", required=True)
    p = leaf(vf, "pclosed", vf_pclosed)
    _field_args(p)
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--pmax", type=int, default=None)
    p.add_argument("--point", default=None)
    p = leaf(vf, "firstintegral", vf_firstintegral)
    _field_args(p)
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--f", default=None)
    p = leaf(vf, "bianchini", vf_bianchini)
    p.add_argument("--p", type=int, required=True)
    p = leaf(vf, "linearize", vf_linearize)
    _field_args(p)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--matrix", default=None, help="'a,b;c,d'")
    p.add_argument("--order", type=int, default=6)
    p = leaf(vf, "membership", vf_membership)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--index", type=int, default=1)
    p.add_argument("--f", default=None)

    # mf
    mf = groups.add_parser("mf", help="модулярные формы").add_subparsers(dest="action", required=True)
    p = leaf(mf, "eisenstein", mf_eisenstein)
    p.add_argument("--weight", type=int, required=True)
    p.add_argument("--order", type=int, default=10)
    p = leaf(mf, "ab", mf_ab)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--convention", choices=("a", "e"), default="a")
    p = leaf(mf, "check-ep", mf_check_ep)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--order", type=int, default=30)
    p = leaf(mf, "numerator", mf_numerator)
    p.add_argument("--weight", type=int, required=True)
    p = leaf(mf, "ramanujan", mf_ramanujan)
    p.add_argument("--order", type=int, default=20)

    # ec
    ec = groups.add_parser("ec", help="эллиптические кривые над F_p").add_subparsers(dest="action", required=True)
    p = leaf(ec, "hw", ec_hw)
    _curve_args(p)
    p = leaf(ec, "count", ec_count)
    _curve_args(p)
    p = leaf(ec, "powersum", ec_powersum)
    _curve_args(p)
    p.add_argument("--jmax", type=int, default=None)
    p = leaf(ec, "abcheck", ec_abcheck)
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--pmax", type=int, default=None)
    p = leaf(ec, "cartier", ec_cartier)
    _curve_args(p)
    p = leaf(ec, "exactform", ec_exactform)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--p", type=int, default=None)
    p = leaf(ec, "field", ec_field)
    _curve_args(p)

    # hodge
    hd = groups.add_parser("hodge", help="периоды и локусы Ходжа").add_subparsers(dest="action", required=True)
    p = leaf(hd, "series", hodge_series)
    _hodge_args(p)
    p.add_argument("--beta", required=True)
    p = leaf(hd, "denominators", hodge_denominators)
    _hodge_args(p)
    p.add_argument("--beta", required=True)
    p = leaf(hd, "codim", hodge_codim)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--seq", default=None)
    leaf(hd, "table", hodge_table)
    p = leaf(hd, "balegh", hodge_balegh)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--beta", type=int, default=0)
    p.add_argument("--branch", default="0,1")
    p.add_argument("--trunc", type=int, default=12)
    p.add_argument("--t", required=True, help="d рациональных чисел через запятую")
    p.add_argument("--tol", type=float, default=hodge_periods.BALEGH_TOL)
    p = leaf(hd, "quartic", hodge_quartic)
    p.add_argument("--monomials", required=True)
    p.add_argument("--trunc", type=int, default=3)
    p.set_defaults(n=None, d=None)

    # algfun
    af = groups.add_parser("algfun", help="алгебраические функции").add_subparsers(dest="action", required=True)
    p = leaf(af, "taylor", algfun_taylor)
    p.add_argument("--poly", required=True)
    p.add_argument("--vars", default="z,y")
    p.add_argument("--z0", default="0")
    p.add_argument("--y0", type=int, required=True)
    p.add_argument("--order", type=int, default=8)
    p = leaf(af, "binomring", algfun_binomring)
    p.add_argument("--a", required=True)
    p.add_argument("--kmax", type=int, default=10)

    # repro
    p = groups.add_parser("repro", parents=[common], help="пересчёт таблицы и сверка с эталоном")
    p.add_argument("table", help=", ".join(repro.known_tables()))
    p.set_defaults(handler=None)

    return parser


def _config(args: argparse.Namespace, settings: Settings) -> ScanConfig:
    params = {
        key: str(value)
        for key, value in sorted(vars(args).items())
        if key not in _COMMON and key not in ("pmax", "k", "trunc") and value is not None and value != ""
    }
    return ScanConfig(
        command=f"{args.group} {args.action}",
        params=params,
        pmax=getattr(args, "pmax", None),
        k=getattr(args, "k", None),
        trunc=getattr(args, "trunc", None),
        workers=resolve_threads(args.threads, settings),
        output=args.out,
    )


def dispatch(argv: Optional[Sequence[str]] = None, settings: Optional[Settings] = None) -> int:
    """Разобрать argv, выполнить подкоманду, напечатать отчёт; вернуть код выхода."""
    settings = settings or Settings()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse завершает с 2 на ошибке и с 0 на --help/--version
        return int(exc.code or 0)
    try:
        if args.group == "repro":
            return run_repro(args, settings)
        config = _config(args, settings)
        started = time.perf_counter()
        payload, ok = args.handler(args, settings)
        wall_ms = (time.perf_counter() - started) * 1000 if args.timings else None
    except (AdelabError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    envelope = ReportEnvelope.from_config(config, payload, wall_ms)
    sys.stdout.write(emit(envelope, config.output))
    if not ok:
        logger.info("%s: check failed", config.command)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def main() -> None:
    settings = Settings()
    logging.basicConfig(
        level=settings.log_level.upper(),
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    sys.exit(dispatch(settings=settings))


if __name__ == "__main__":
    main()
