"""Command-line entry point.

Subcommands expose each module's computations and the verification
suites with machine-readable output:

- ``series``: coefficients of the named hypergeometric series;
- ``airy``: numeric-vs-asymptotic comparison reports (the only
  subcommand emitting decimals; everything else stays rational);
- ``descendents``: the closed and open potentials and single
  intersection numbers;
- ``fz``: kappa-polynomial relations;
- ``strata``: stable-graph census with automorphism orders;
- ``pixton``: relation classes as decorated-graph sums;
- ``frobenius``: the R-matrix and flatness residuals;
- ``verify``: the invariant suites, in dependency order for ``all``.

Exit codes: 0 on success, 1 on a failed check or invalid input data
(with a structured diff naming the location), 2 on usage errors.
Rationals serialize as "p/q" strings.  The environment variable
TAUTREL_THREADS caps internal parallelism.
"""

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import airy, descendents, frobenius, fz, named_series, open_potential
from . import pixton, strata
from .fz import NotARelationError
from .pixton import NotInPixtonSetError
from .series import PowerSeries

__all__ = ["main", "dispatch"]


class CheckFailure(Exception):
    """A verification check failed; carries the structured report."""

    def __init__(self, report):
        super().__init__(report.get("message", "check failed"))
        self.report = report


def thread_count():
    """Worker cap from TAUTREL_THREADS (default: cpu count, at least 1)."""
    raw = os.environ.get("TAUTREL_THREADS", "")
    if raw.strip():
        try:
            n = int(raw)
        except ValueError:
            raise CheckFailure(
                {"message": "TAUTREL_THREADS must be an integer", "got": raw}
            )
        return max(1, n)
    return max(1, os.cpu_count() or 1)


def _parse_int_list(text):
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            "expected a comma-separated integer list, got %r" % text
        )


def _parse_fraction(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError("malformed fraction %r" % text)


# ---------------------------------------------------------------------------
# subcommand implementations (each returns a JSON-ready report dict)

_SERIES = {
    "A": named_series.series_A,
    "B": named_series.series_B,
    "calA": named_series.series_calA,
    "calB": named_series.series_calB,
    "H0": named_series.series_H0,
    "H1": named_series.series_H1,
    "D": named_series.series_D,
}


def cmd_series(args):
    ps = _SERIES[args.which](args.order)
    return {
        "series": args.which,
        "order": args.order,
        "coefficients": [str(c) for c in ps.coeffs],
    }


def cmd_airy(args):
    rep = airy.asymptotic_report(
        args.x, args.k, prime=args.prime, precision_bits=args.precision_bits
    )
    out = rep.to_json()
    out["precision_bits"] = args.precision_bits
    if not rep.envelope_ok:
        raise CheckFailure(
            {
                "message": "asymptotic truncation outside the error envelope",
                "location": {"x": args.x, "terms": args.k},
                "computed": out["abs_error"],
                "expected_at_most": "2 * %s" % out["first_omitted_magnitude"],
            }
        )
    return out


def cmd_descendents_closed(args):
    Fc = descendents.build_Fc(args.degree)
    return {"degree": args.degree, "potential": Fc.to_json()}


def cmd_descendents_open(args):
    Fc = descendents.build_Fc(args.degree)
    Fo = open_potential.solve_open_kdv(Fc, args.degree)
    return {"degree": args.degree, "potential": Fo.to_json()}


def cmd_descendents_table(args):
    ks = args.ks
    if not ks or any(k < 0 for k in ks):
        raise CheckFailure(
            {
                "message": "descendent exponents must be nonnegative and "
                "nonempty",
                "location": {"ks": list(ks)},
            }
        )
    value = descendents.bracket(ks)
    return {"ks": list(ks), "value": str(value)}


def cmd_fz(args):
    sigma = args.sigma
    try:
        rel = fz.fz_relation(args.g, args.r, sigma)
    except NotARelationError as exc:
        raise CheckFailure(
            {
                "message": str(exc),
                "location": {"g": args.g, "r": args.r, "sigma": list(sigma)},
            }
        )
    return {
        "g": args.g,
        "r": args.r,
        "sigma": list(sigma),
        "relation": rel.to_json(),
    }


def cmd_strata(args):
    try:
        graphs = strata.enumerate_stable_graphs(args.g, args.n)
    except ValueError as exc:
        raise CheckFailure(
            {"message": str(exc), "location": {"g": args.g, "n": args.n}}
        )
    out = []
    for gr in graphs:
        item = gr.to_json()
        item["automorphisms"] = strata.automorphism_order(gr)
        out.append(item)
    return {"g": args.g, "n": args.n, "count": len(graphs), "graphs": out}


def cmd_pixton(args):
    A = args.a
    try:
        el = pixton.pixton_class(args.g, args.n, A, args.d)
    except (NotInPixtonSetError, ValueError) as exc:
        raise CheckFailure(
            {
                "message": str(exc),
                "location": {
                    "g": args.g,
                    "n": args.n,
                    "a": list(A),
                    "d": args.d,
                },
            }
        )
    return {"g": args.g, "n": args.n, "a": list(A), "d": args.d,
            "class": el.to_json()}


def cmd_frobenius(args):
    if args.action == "r-matrix":
        if args.model == "3spin":
            R = frobenius.solve_R(frobenius.spin3_structure(), args.order)
            return {"model": "3spin", "order": args.order,
                    "r_matrix": R.to_json()}
        # The exponential model is covered by its leading-order limit.
        ps = frobenius.cp1_leading_limit(args.order)
        return {
            "model": "cp1",
            "order": args.order,
            "leading_limit": [str(c) for c in ps.coeffs],
        }
    # action == "flatness"
    report = _suite_flatness(args.order, args.seed)
    return report


# ---------------------------------------------------------------------------
# verification suites


def _check(name, description, ok, expected=None, computed=None):
    item = {"name": name, "check": description, "ok": bool(ok)}
    if expected is not None:
        item["expected"] = expected
    if computed is not None:
        item["computed"] = computed
    return item


def _finish_suite(suite, order, seed, checks, started):
    report = {
        "suite": suite,
        "order": order,
        "seed": seed,
        "threads": thread_count(),
        "wall_time_s": round(time.monotonic() - started, 3),
        "checks": checks,
        "ok": all(c["ok"] for c in checks),
    }
    if not report["ok"]:
        bad = [c for c in checks if not c["ok"]]
        raise CheckFailure(
            {
                "message": "suite %r failed %d check(s)" % (suite, len(bad)),
                "failures": bad,
                "report": report,
            }
        )
    return report


def _suite_series(order, seed):
    started = time.monotonic()
    order = order or 30
    checks = []
    A = named_series.series_A(order + 2)
    B = named_series.series_B(order + 2)
    z = PowerSeries.identity(order, var="z")
    half = Fraction(1, 2)
    ode1 = (
        z * z * A.truncate(order).derivative() * 3
        + (z * half - PowerSeries.one(order)) * A.truncate(order)
        - B.truncate(order)
    )
    checks.append(
        _check(
            "first_ode",
            "3z^2 A' + (z/2 - 1)A - B == 0 through z^%d" % order,
            ode1.is_zero(),
            computed=None if ode1.is_zero() else ode1.to_json(),
        )
    )
    Ap = A.truncate(order + 1).derivative()
    ode2 = (
        z * z * Ap.truncate(order).derivative() * 3
        + (z * 6 - PowerSeries.one(order) * 2) * Ap.truncate(order)
        + A.truncate(order) * Fraction(5, 12)
    )
    checks.append(
        _check(
            "second_ode",
            "3z^2 A'' + (6z - 2)A' + (5/12)A == 0 through z^%d" % order,
            ode2.is_zero(),
        )
    )
    H0 = named_series.series_H0(order)
    H1 = named_series.series_H1(order)
    refl = H0 * H1.scale_argument(-1) + H0.scale_argument(-1) * H1
    two = PowerSeries.one(order) * 2
    checks.append(
        _check(
            "reflection",
            "H0(T)H1(-T) + H0(-T)H1(T) == 2 through T^%d" % order,
            refl == two,
        )
    )
    printed = {
        "H0": ([H0[0], H0[1], H0[2]], [Fraction(1), Fraction(-60), Fraction(27720)]),
        "H1": ([H1[0], H1[1], H1[2]], [Fraction(1), Fraction(84), Fraction(-32760)]),
    }
    for name, (got, want) in printed.items():
        checks.append(
            _check(
                "coefficients_%s" % name,
                "leading coefficients of %s" % name,
                got == want,
                expected=[str(c) for c in want],
                computed=[str(c) for c in got],
            )
        )
    d_order = min(order, 21)
    checks.append(
        _check(
            "d_series_ode",
            "closed-form D equals its ODE solution through x^%d" % d_order,
            named_series.series_D(d_order) == named_series.series_D_ode(d_order),
        )
    )
    return _finish_suite("series", order, seed, checks, started)


def _suite_descendents(order, seed):
    started = time.monotonic()
    degree = order or 12
    checks = []
    Fc = descendents.build_Fc(degree)
    E = Fc.exp()
    for n in range(-1, 3):
        res = descendents.apply_L(n, E)
        bound = degree - (2 * n + 3)
        checks.append(
            _check(
                "virasoro_L%d" % n,
                "L_%d exp(F^c) == 0 at weighted degree <= %d" % (n, bound),
                res.truncate(bound).is_zero(),
            )
        )
    for which, drop in ((1, 5), (2, 7)):
        res = descendents.kdv_residual(Fc, which)
        checks.append(
            _check(
                "kdv_%d" % which,
                "KdV residual %d vanishes through degree %d"
                % (which, degree - drop),
                res.truncate(degree - drop).is_zero(),
            )
        )
    spec = descendents.specialize_airy(Fc, min(degree - 2, 12))
    target = [Fraction(1), Fraction(-5, 24), Fraction(385, 1152)]
    got = [spec[0], spec[3], spec[6]]
    checks.append(
        _check(
            "airy_specialization",
            "specialized exp(F^c) reproduces the A-series coefficients",
            got == target,
            expected=[str(c) for c in target],
            computed=[str(c) for c in got],
        )
    )
    det = descendents.determinant_formula_check(Fc, 1, min(degree - 2, 10))
    checks.append(
        _check(
            "determinantal_N1",
            "determinantal formula, one variable",
            det["ok"],
        )
    )
    return _finish_suite("descendents", degree, seed, checks, started)


def _suite_open(order, seed):
    started = time.monotonic()
    degree = order or 8
    checks = []
    Fc = descendents.build_Fc(degree + 3)
    Fo = open_potential.solve_open_kdv(Fc, degree)
    Fb = open_potential.buryak_formula(Fc, degree)
    same = _named_terms(Fo, degree) == _named_terms(Fb, degree)
    checks.append(
        _check(
            "open_three_way",
            "open KdV solution == closed-form construction, degree <= %d"
            % degree,
            same,
        )
    )
    for n in (-1, 0, 1):
        res = open_potential.open_virasoro_residual(Fo, Fc, n)
        bound = min(degree, res.max_degree)
        checks.append(
            _check(
                "open_virasoro_L%d" % n,
                "open Virasoro residual %d vanishes through degree %d"
                % (n, bound),
                res.truncate(bound).is_zero(),
            )
        )
    checks.append(
        _check(
            "restriction",
            "restriction to the initial potential s^3/6 + t0 s",
            open_potential.restriction_check(Fo),
        )
    )
    return _finish_suite("open", degree, seed, checks, started)


def _named_terms(ms, max_degree):
    out = {}
    for e, c in ms.terms.items():
        if ms.grading.degree(e) <= max_degree:
            key = tuple(
                (ms.grading.names[i], x) for i, x in enumerate(e) if x
            )
            out[key] = c
    return out


def _suite_strata(order, seed):
    started = time.monotonic()
    checks = []
    for (g, n), want in [((0, 3), 1), ((1, 1), 2), ((2, 0), 7)]:
        got = len(strata.enumerate_stable_graphs(g, n))
        checks.append(
            _check(
                "census_%d_%d" % (g, n),
                "stable-graph count at (g, n) = (%d, %d)" % (g, n),
                got == want,
                expected=want,
                computed=got,
            )
        )
    aut_cases = [
        (strata.StableGraph((1,), (0,), []), 1),
        (strata.StableGraph((1,), (), [(0, 0)]), 2),
        (strata.StableGraph((0, 0), (), [(0, 1)] * 3), 12),
    ]
    for gr, want in aut_cases:
        got = strata.automorphism_order(gr)
        checks.append(
            _check(
                "aut_order",
                "automorphism order of %s" % (gr.key(),),
                got == want,
                expected=want,
                computed=got,
            )
        )
    return _finish_suite("strata", order, seed, checks, started)


def _pixton_pairings(g, n, A, d):
    el = pixton.pixton_class(g, n, A, d)
    extra = 3 * g - 3 + n - d
    jobs = []
    for psis in _compositions(extra, n):
        rem = extra - sum(psis)
        for ke in _kappa_monomials(rem):
            jobs.append((psis, ke))
    workers = thread_count()
    with ThreadPoolExecutor(max_workers=workers) as pool:
        values = list(
            pool.map(
                lambda job: strata.integrate(
                    el, psi_exps=job[0], kappa_exps=job[1]
                ),
                jobs,
            )
        )
    bad = [
        {"psi": list(j[0]), "kappa": list(j[1]), "value": str(v)}
        for j, v in zip(jobs, values)
        if v != 0
    ]
    return len(jobs), bad


def _compositions(total, n):
    if n == 0:
        yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, n - 1):
            yield (first,) + rest


def _kappa_monomials(deg):
    out = []

    def rec(prefix, rem, idx):
        if rem == 0:
            out.append(tuple(prefix))
            return
        if idx > rem:
            return
        for e in range(rem // idx + 1):
            rec(prefix + [e], rem - idx * e, idx + 1)

    rec([], deg, 1)
    return out


def _suite_pixton(order, seed):
    started = time.monotonic()
    checks = []
    sec = pixton.edge_factor(0, 1, 1)
    edge_values = {
        "constant_parity11": (sec[(1, 1)].coefficient(0, 0), Fraction(60)),
        "constant_parity00": (sec[(0, 0)].coefficient(0, 0), Fraction(-84)),
        "linear_same_side": (sec[(1, 0)].coefficient(1, 0), Fraction(32760)),
        "linear_cross_side": (sec[(1, 0)].coefficient(0, 1), Fraction(-27720)),
    }
    for name, (got, want) in edge_values.items():
        checks.append(
            _check(
                "edge_%s" % name,
                "edge-factor coefficient %s" % name,
                got == want,
                expected=str(want),
                computed=str(got),
            )
        )
    for g, n, A, d in [(1, 1, (1,), 1), (2, 0, (), 1), (2, 1, (1,), 1)]:
        count, bad = _pixton_pairings(g, n, A, d)
        checks.append(
            _check(
                "pairings_%d_%d_%s_%d" % (g, n, "".join(map(str, A)), d),
                "all %d pairings of the (%d,%d) class vanish" % (count, g, n),
                not bad,
                computed=bad or None,
            )
        )
    return _finish_suite("pixton", order, seed, checks, started)


def _suite_frobenius(order, seed):
    started = time.monotonic()
    order = order or 6
    checks = []
    R = frobenius.solve_R(frobenius.spin3_structure(), order)
    target = frobenius.hypergeometric_r_matrix(order)
    checks.append(
        _check(
            "r_matrix",
            "flatness-recursion R equals the A/B matrix through z^%d" % order,
            R == target,
            computed=None if R == target else R.to_json(),
        )
    )
    for data, label in [
        (frobenius.spin3_structure(), "3spin"),
        (frobenius.cp1_structure(Fraction(2)), "cp1"),
    ]:
        checks.append(
            _check(
                "product_%s" % label,
                "product table matches the potential (%s)" % label,
                data.product_consistency() and data.associativity_check(),
            )
        )
    phi = frobenius.cp1_phi_ode_check(order=15, trials=5, seed=seed)
    checks.append(
        _check(
            "phi_ode",
            "second-order ODE for the q-hypergeometric series",
            phi["ok"],
            computed=phi["samples"],
        )
    )
    checks.append(
        _check(
            "gamma_limit",
            "Gamma functional-equation limit identity",
            frobenius.cp1_gamma_limit_check(seed=seed),
        )
    )
    checks.append(
        _check(
            "leading_limit",
            "Gaussian-moment leading limit equals the A series",
            frobenius.cp1_leading_limit(10) == named_series.series_A(10),
        )
    )
    report = _finish_suite("frobenius", order, seed, checks, started)
    return report


def _suite_flatness(order, seed):
    started = time.monotonic()
    order = order or 6
    checks = []
    for branch in (1, -1):
        res = frobenius.airy_flatness_check(order, branch=branch)
        for name, series in res.items():
            checks.append(
                _check(
                    "branch%+d_%s" % (branch, name),
                    "flatness residual %s, branch %+d, through z^%d"
                    % (name, branch, order),
                    series.is_zero(),
                    computed=None if series.is_zero() else series.to_json(),
                )
            )
    return _finish_suite("flatness", order, seed, checks, started)


_SUITES = {
    "series": _suite_series,
    "descendents": _suite_descendents,
    "open": _suite_open,
    "strata": _suite_strata,
    "pixton": _suite_pixton,
    "frobenius": _suite_frobenius,
    "flatness": _suite_flatness,
}

_ALL_ORDER = ["series", "descendents", "open", "strata", "pixton", "frobenius"]


def cmd_verify(args):
    if args.suite == "all":
        started = time.monotonic()
        reports = []
        for name in _ALL_ORDER:
            # CheckFailure propagates, short-circuiting on the first
            # structural failure.
            reports.append(_SUITES[name](None, args.seed))
        return {
            "suite": "all",
            "seed": args.seed,
            "wall_time_s": round(time.monotonic() - started, 3),
            "suites": reports,
            "ok": True,
        }
    return _SUITES[args.suite](args.order, args.seed)


# ---------------------------------------------------------------------------
# output and dispatch


def _flatten_csv(report):
    rows = []

    def walk(prefix, value):
        if isinstance(value, dict):
            for k, v in value.items():
                walk(prefix + (str(k),), v)
        elif isinstance(value, list):
            for i, v in enumerate(value):
                walk(prefix + (str(i),), v)
        else:
            rows.append((".".join(prefix), value))

    walk((), report)
    return rows


def render(report, fmt):
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["key", "value"])
        for key, value in _flatten_csv(report):
            writer.writerow([key, value])
        return buf.getvalue().rstrip("\n")
    # text
    lines = []
    for key, value in _flatten_csv(report):
        lines.append("%s: %s" % (key, value))
    return "\n".join(lines)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format", choices=("text", "json", "csv"), default="text"
    )
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="write the report here")

    parser = argparse.ArgumentParser(
        prog="tautrel",
        description="exact computations with the hypergeometric relation "
        "series and tautological classes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("series", parents=[common])
    p.add_argument("--which", choices=sorted(_SERIES), default="A")
    p.add_argument("--order", type=int, default=10)
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("airy", parents=[common])
    p.add_argument("--x", type=float, default=10.0)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--prime", action="store_true")
    p.add_argument("--precision-bits", type=int, default=128)
    p.set_defaults(func=cmd_airy)

    p = sub.add_parser("descendents", parents=[common])
    dsub = p.add_subparsers(dest="mode", required=True)
    d = dsub.add_parser("closed", parents=[common])
    d.add_argument("--degree", type=int, default=8)
    d.set_defaults(func=cmd_descendents_closed)
    d = dsub.add_parser("open", parents=[common])
    d.add_argument("--degree", type=int, default=6)
    d.set_defaults(func=cmd_descendents_open)
    d = dsub.add_parser("table", parents=[common])
    d.add_argument("--ks", type=_parse_int_list, required=True)
    d.set_defaults(func=cmd_descendents_table)

    p = sub.add_parser("fz", parents=[common])
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--sigma", type=_parse_int_list, default=())
    p.set_defaults(func=cmd_fz)

    p = sub.add_parser("strata", parents=[common])
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_strata)

    p = sub.add_parser("pixton", parents=[common])
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--a", type=_parse_int_list, default=())
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(func=cmd_pixton)

    p = sub.add_parser("frobenius", parents=[common])
    p.add_argument(
        "action", choices=("r-matrix", "flatness"), nargs="?",
        default="r-matrix",
    )
    p.add_argument("--model", choices=("3spin", "cp1"), default="3spin")
    p.add_argument("--order", type=int, default=6)
    p.set_defaults(func=cmd_frobenius)

    p = sub.add_parser("verify", parents=[common])
    p.add_argument("suite", choices=sorted(_SUITES) + ["all"])
    p.add_argument("--order", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    return parser


def dispatch(argv):
    """Parse argv, run the subcommand, and return (exit_code, rendered).

    >>> code, out = dispatch(["fz", "--g", "4", "--r", "1"])
    >>> code
    1
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.func(args)
        code = 0
    except CheckFailure as exc:
        report = dict(exc.report)
        report["ok"] = False
        code = 1
    rendered = render(report, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(rendered + "\n")
    return code, rendered


def main(argv=None):
    code, rendered = dispatch(sys.argv[1:] if argv is None else argv)
    print(rendered)
    return code


if __name__ == "__main__":
    sys.exit(main())
