"""Command line driver.

Subcommands: solve, experiment, cycles, mixing, spectrum, badprimes.
Exit codes: 0 success, 1 assertion/acceptance failure, 2 usage error,
3 resource cap exceeded.
"""

import argparse
import sys

from . import coeffgraph, harness, primes, spectral, walk
from .group import AmbientPrimeSearchError, GroupParams, find_ambient_prime, is_prime
from .rng import uniform_below

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3

_RESOURCE_ERRORS = (
    walk.CollisionTimeout,
    walk.RestartsExhausted,
    coeffgraph.EnumerationLimit,
    primes.RangeCapExceeded,
    spectral.PowerIterationError,
    AmbientPrimeSearchError,
)

_USAGE_ERRORS = (
    coeffgraph.HypothesisViolated,
    primes.ThresholdUnsatisfiable,
    ValueError,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rho-lab")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="recover a discrete logarithm")
    p_solve.add_argument("--n", type=int, required=True)
    p_solve.add_argument("--p", type=int)
    p_solve.add_argument("--g", type=int)
    p_solve.add_argument("--h", type=int)
    p_solve.add_argument("--seed", type=int, default=0)
    p_solve.add_argument("--mode", choices=["fullstore", "floyd"], default="fullstore")
    p_solve.add_argument("--ell", default="2")

    p_exp = sub.add_parser("experiment", help="batch seeded collision trials")
    p_exp.add_argument("--config")
    p_exp.add_argument("--n", dest="n_list")
    p_exp.add_argument("--trials", type=int)
    p_exp.add_argument("--seed", type=int)
    p_exp.add_argument("--out")
    p_exp.add_argument("--format", choices=["jsonl", "csv"], default="jsonl")
    p_exp.add_argument("--workers", type=int, default=1)

    p_cyc = sub.add_parser("cycles", help="closed-walk counts on the coefficient graph")
    p_cyc.add_argument("--n", type=int, required=True)
    p_cyc.add_argument("--k", type=int, required=True)
    p_cyc.add_argument("--brute", action="store_true")

    p_mix = sub.add_parser("mixing", help="exact endpoint-count window check")
    p_mix.add_argument("--n", type=int, required=True)
    group = p_mix.add_mutually_exclusive_group(required=True)
    group.add_argument("--r", type=int)
    group.add_argument("--find-rstar", action="store_true")

    p_spec = sub.add_parser("spectrum", help="spectral gap sweep over a prime grid")
    p_spec.add_argument("--nmax", type=int, required=True)
    p_spec.add_argument("--dense-check", action="store_true")
    p_spec.add_argument("--a2-nmax", type=int, default=211)

    p_bad = sub.add_parser("badprimes", help="census of primes where 2 has small order")
    p_bad.add_argument("--x", type=float, required=True)
    p_bad.add_argument("--c", type=float, required=True)

    return parser


def _require_odd_prime(n: int) -> None:
    if not is_prime(n) or n % 2 == 0:
        raise ValueError(f"n={n} must be an odd prime")


def _cmd_solve(args) -> int:
    _require_odd_prime(args.n)
    if (args.p is None) != (args.g is None):
        raise ValueError("--p and --g must be given together")
    params = GroupParams(n=args.n, p=args.p, g=args.g) if args.p else find_ambient_prime(args.n)
    if args.ell == "auto":
        ell = primes.select_alternate_exponent(args.n).ell
    else:
        ell = int(args.ell)
    if args.h is not None:
        h = args.h
        expected = None
    else:
        # demo mode: draw a target from the seed so the run is self-checking
        expected = uniform_below(args.seed, "cli-demo-target", params.n - 2) + 2
        h = pow(params.g, expected, params.p)
        print(f"no --h given; using h = g^y for seeded y (n={params.n}, p={params.p}, g={params.g})")
    instance = walk.RhoInstance.from_seed(params, params.g, h, args.seed, exponent_step=ell)
    y = walk.solve(instance, mode=walk.CollisionMode(args.mode))
    print(f"y = {y}")
    if expected is not None and y != expected:
        print(f"FAIL: recovered {y} but target was {expected}", file=sys.stderr)
        return EXIT_FAIL
    oracle = walk.bsgs_oracle(params.g, h, params)
    if y != oracle:
        print(f"FAIL: oracle disagrees ({oracle})", file=sys.stderr)
        return EXIT_FAIL
    print("verified: g^y = h and oracle agrees")
    return EXIT_OK


def _cmd_experiment(args) -> int:
    if args.config:
        if args.n_list or args.trials:
            raise ValueError("--config excludes --n/--trials")
        config = harness.parse_config_file(args.config)
    else:
        if not args.n_list or args.trials is None:
            raise ValueError("either --config or both --n and --trials are required")
        config = harness.config_from_strings(
            {"n_list": args.n_list, "trials": args.trials}, source="command line")
    if args.seed is not None:
        from dataclasses import replace
        config = replace(config, master_seed=args.seed)
    report = harness.run_experiment(config, workers=args.workers)
    if args.out:
        harness.emit_report(report, args.format, args.out)
        print(f"wrote {args.format} report to {args.out}")
    for row in report.aggregate_rows:
        flag = " [small ord2]" if row.small_order_flag else ""
        print(f"n={row.n} ell={row.ell} trials={row.trials} "
              f"steps p10/p50/p90={row.steps_p10}/{row.steps_p50}/{row.steps_p90} "
              f"degenerate={row.degenerate_count} (rate {row.degeneracy_rate:.2e}, "
              f"bound {row.theorem_bound:.2e}) success={row.success_rate:.4f}{flag}")
    return EXIT_OK


def _cmd_cycles(args) -> int:
    _require_odd_prime(args.n)
    report = coeffgraph.cycle_count_report(args.n, args.k, brute=args.brute)
    print(f"n={report.n} k={report.k} ord2={report.ord2} "
          f"hypothesis_met={report.hypothesis_met}")
    if report.formula_count is not None:
        print(f"formula count 3^k - 2^k = {report.formula_count}")
    else:
        print(f"formula does not apply (k >= ord2={report.ord2})")
    if report.brute_count is not None:
        print(f"brute-force count      = {report.brute_count}")
        if report.formula_count is not None and report.formula_count != report.brute_count:
            print("FAIL: formula and brute-force counts disagree", file=sys.stderr)
            return EXIT_FAIL
    if report.hypothesis_met:
        ok = coeffgraph.return_probability_bound_check(args.n, args.k)
        print(f"return probability <= 1/n^2: {ok}")
    return EXIT_OK


def _cmd_mixing(args) -> int:
    _require_odd_prime(args.n)
    if args.find_rstar:
        try:
            report = coeffgraph.find_min_equidistribution_r(args.n)
        except ValueError as exc:
            print(f"FAIL: {exc}", file=sys.stderr)
            return EXIT_FAIL
        print(f"n={report.n}: minimal r with all endpoint counts in "
              f"[1/2, 3/2] * 3^r / n^2 is r* = {report.r} "
              f"(ratios [{report.min_ratio:.4f}, {report.max_ratio:.4f}])")
        return EXIT_OK
    report = coeffgraph.verify_equidistribution(args.n, args.r)
    print(f"n={report.n} r={report.r}: ratios [{report.min_ratio:.4f}, "
          f"{report.max_ratio:.4f}] pass={report.passed}")
    return EXIT_OK if report.passed else EXIT_FAIL


def _cmd_spectrum(args) -> int:
    grid = [p for p in primes.primes_in_range(3, args.nmax) if p > 2]
    if not grid:
        raise ValueError(f"no odd primes at or below {args.nmax}")
    reports, summary = spectral.fit_gap_constants(grid, a2_limit=args.a2_nmax)
    for r in reports:
        a2 = f"{r.a2_norm:.9f}" if r.a2_norm is not None else "-"
        print(f"n={r.n}: a2_norm={a2} doubling_max={r.doubling_form_max:.12f} "
              f"cosine_max={r.cosine_form_max:.12f} c'={r.fitted_c_prime:.6f}")
    print(f"grid minima: c={summary.min_c:.6f} c'={summary.min_c_prime:.6f}")
    if args.dense_check:
        worst = 0.0
        for r in reports:
            if r.n <= 13 and r.a2_norm is not None:
                diff = abs(r.a2_norm - spectral.a2_norm_dense(r.n))
                worst = max(worst, diff)
                print(f"dense check n={r.n}: |power - dense| = {diff:.3e}")
        if worst > 1e-8:
            print("FAIL: power iteration disagrees with the dense oracle", file=sys.stderr)
            return EXIT_FAIL
    if not summary.min_c_prime > 0:
        print("FAIL: fitted c' is not positive over the grid", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def _cmd_badprimes(args) -> int:
    try:
        report = primes.bad_prime_census(args.x, args.c)
    except primes.CensusBoundViolation as exc:
        print(f"FAIL: {exc}", file=sys.stderr)
        return EXIT_FAIL
    print(f"X={report.x} c={report.c}: threshold={report.threshold:.3f} "
          f"count={report.count} bound={report.bound:.3f}")
    for p, order in report.bad_primes:
        print(f"  p={p} ord2={order}")
    return EXIT_OK


_COMMANDS = {
    "solve": _cmd_solve,
    "experiment": _cmd_experiment,
    "cycles": _cmd_cycles,
    "mixing": _cmd_mixing,
    "spectrum": _cmd_spectrum,
    "badprimes": _cmd_badprimes,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except harness.OracleMismatch as exc:
        print(f"FAIL: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except _RESOURCE_ERRORS as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except _USAGE_ERRORS as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
