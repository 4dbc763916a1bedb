"""Command line entry point: ``trotter-jordan {sweep,verify-bounds,jet-check,demo}``.

Exit codes: 0 success, 1 bound violation or failed check, 2 configuration
error, 3 numerical overflow.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import harness
from .bounds import suzuki_bound
from .formulas import classic_formula, exact_exp_sum, g_formula
from .harness import ConfigError, SweepConfig
from .linalg import MatrixOverflowError, NormKind, TermSet, norm
from .verify import verify_bounds

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_CONFIG = 2
EXIT_OVERFLOW = 3


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _seed(text: str) -> int:
    return int(text, 0)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trotter-jordan",
        description="Jordan-product Lie-Trotter formulas: error sweeps and bound checks.",
    )
    parser.add_argument("--threads", type=int, default=None, help="worker pool size")
    sub = parser.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="error sweep over a grid of Trotter numbers")
    sw.add_argument("--dim", type=int, required=True)
    sw.add_argument("--terms", type=int, required=True, help="number of terms m")
    sw.add_argument("--formula", choices=["g", "h", "classic", "symmetrized"], required=True)
    sw.add_argument("--norm", choices=[k.value for k in NormKind], default="spectral")
    sw.add_argument("--n", type=_int_list, default=[1, 2, 4, 8, 16, 32, 64, 128, 256, 512])
    sw.add_argument("--trials", type=int, default=1)
    sw.add_argument("--seed", type=_seed, default=0)
    sw.add_argument("--scale", type=float, default=1.0, help="target sum of term norms")
    sw.add_argument("--hermitian", action="store_true")
    sw.add_argument("--commuting", action="store_true")
    sw.add_argument("--out", required=True)
    sw.add_argument("--format", choices=["json", "csv"], default="json")

    vb = sub.add_parser("verify-bounds", help="check every bound over the seeded ensemble")
    vb.add_argument("--seed", type=_seed, default=0)
    vb.add_argument("--trials", type=int, default=500, help="families per formula and norm")
    vb.add_argument("--out", default=None, help="write the JSON report here")

    jc = sub.add_parser("jet-check", help="degree-2 Taylor polynomial identities")
    jc.add_argument("--dim", type=int, default=4)
    jc.add_argument("--max-terms", type=int, default=7)
    jc.add_argument("--trials", type=int, default=200)
    jc.add_argument("--seed", type=_seed, default=0)

    sub.add_parser("demo", help="small worked two-term example")
    return parser


def cmd_sweep(args) -> int:
    config = SweepConfig(
        dim=args.dim,
        m=args.terms,
        formula=args.formula,
        n_grid=tuple(args.n),
        norm_kind=NormKind(args.norm),
        trials=args.trials,
        seed=args.seed,
        norm_scale=args.scale,
        hermitian=args.hermitian,
        commuting=args.commuting,
    )
    report = harness.run_sweep(config, threads=args.threads)
    harness.emit_report(report, args.out, args.format)
    fitted = [s for s in report.slopes() if s is not None]
    print(f"records: {len(report.records)}  max ratio: {report.max_ratio:.6g}")
    if fitted:
        print(f"fitted slopes: min {min(fitted):.4f}  max {max(fitted):.4f}  ({len(fitted)}/{config.trials} trials)")
    else:
        print("fitted slopes: none (errors at noise floor)")
    for d in report.diagnostics:
        print(f"diagnostic: {d}", file=sys.stderr)
    if report.diagnostics:
        return EXIT_OVERFLOW
    if report.violations():
        print(f"{len(report.violations())} bound violation(s)", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.trials < 1:
        raise ConfigError("trials must be positive")
    report = verify_bounds(args.seed, args.trials, threads=args.threads)
    for c in report.checks:
        status = "ok  " if c.violations == 0 else "FAIL"
        print(
            f"{status} {c.name:<16} {c.norm_kind.value:<9} cases={c.cases:<6} "
            f"violations={c.violations:<4} max_ratio={c.max_ratio:.6g}"
        )
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(harness.dumps_json(report.to_dict()))
    return EXIT_OK if report.passed else EXIT_VIOLATION


def cmd_jet_check(args) -> int:
    summary = harness.jet_check(args.seed, args.dim, args.max_terms, args.trials)
    for notice in summary.notices:
        print(f"notice: {notice}")
    print(
        f"cases={summary.cases} max deviation={summary.max_deviation:.3e} "
        f"max deviation/(1+|S|^2)={summary.max_normalized:.3e}"
    )
    for f in summary.failures[:20]:
        print(f"FAIL {f}")
    print("PASS" if summary.passed else "FAIL")
    return EXIT_OK if summary.passed else EXIT_VIOLATION


def cmd_demo(args) -> int:
    a = np.array([[0.0, 0.5], [0.5, 0.0]])  # X/2
    b = np.array([[0.5, 0.0], [0.0, -0.5]])  # Z/2
    terms = TermSet((a, b))
    exact = exact_exp_sum(terms)
    s = terms.total
    print("exp(A+B) with A = X/2, B = Z/2 (spectral norm, s = %.3g)" % s)
    print("base of g_n: (e^{A/n} e^{B/n} + e^{B/n} e^{A/n}) / 2")
    print()
    print(f"{'n':>5}  {'|exact - g_n|':>14}  {'|exact - classic_n|':>20}  {'bound':>12}  {'ratio':>8}")
    for n in (1, 2, 4, 8, 16, 32, 64):
        eg = norm(exact - g_formula(terms, n))
        ec = norm(exact - classic_formula(terms, n))
        bound = suzuki_bound(s, n)
        print(f"{n:>5}  {eg:>14.6e}  {ec:>20.6e}  {bound:>12.6e}  {eg / bound:>8.4f}")
    return EXIT_OK


COMMANDS = {
    "sweep": cmd_sweep,
    "verify-bounds": cmd_verify,
    "jet-check": cmd_jet_check,
    "demo": cmd_demo,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except MatrixOverflowError as exc:
        print(f"numerical overflow: {exc}", file=sys.stderr)
        return EXIT_OVERFLOW


if __name__ == "__main__":
    sys.exit(main())
