"""Command-line front end.

Exit status: 0 success, 2 usage error, 3 invalid input (state file,
parameters), 4 verification failure.
"""
from __future__ import annotations

import argparse
import sys
import warnings

import numpy as np

from . import tolerances
from .bounds import sweep
from .core import phase_marginals, random_state
from .correctability import asym_css, characteristic_exponent, sequence_scan
from .errors import BellQuditError
from .isotropic import (
    IsotropicParams,
    iso_b_step,
    iso_correctable,
    iso_exponent,
    printed_shortcut,
    product_margin,
)
from .oracle import oracle_b_step, oracle_mix
from .purification import b_step, b_step_homogeneous, dit_error_rate, mix, phase_deviation
from .stateio import format_state, read_state, write_state

EXIT_USAGE = 2
EXIT_INVALID = 3
EXIT_VERIFY = 4
VERIFY_LIMIT = 1e-9


def fmt(x) -> str:
    return f"{x:.12g}"


def _load(path):
    try:
        return read_state(path)
    except OSError as exc:
        raise BellQuditError(f"cannot read state file {path}: {exc}") from None


def cmd_bstep(args) -> int:
    s = _load(args.state)
    if args.mix:
        s = mix(s)
    result = b_step_homogeneous(s, args.n)
    print(f"survival\t{fmt(result.survival)}")
    print(f"x_n\t{fmt(dit_error_rate(result.state))}")
    print(f"y_n\t{fmt(phase_deviation(phase_marginals(result.state)))}")
    if args.out:
        write_state(args.out, result.state, comment=f"after B-step n={args.n}{' with mixing' if args.mix else ''}")
    else:
        sys.stdout.write(format_state(result.state))
    return 0


def cmd_exponent(args) -> int:
    s = _load(args.state)
    rep = characteristic_exponent(s, apply_mix=args.mix)
    print(f"r\t{fmt(rep.r)}")
    print(f"x_tilde\t{fmt(rep.x_tilde)}")
    print(f"y_tilde\t{fmt(rep.y_tilde)}")
    print(f"M\t{fmt(rep.m_value)}")
    print(f"shift\t{rep.shift}")
    print(f"verdict\t{rep.verdict}")
    for note in rep.warnings:
        print(f"warning\t{note}")
    if args.scan:
        scan = sequence_scan(s, args.scan, apply_mix=args.mix)
        print("n\tx_n\ty_n\tasym_css")
        for r in scan:
            print(f"{r.n}\t{fmt(r.x_n)}\t{fmt(r.y_n)}\t{fmt(r.asym_css_after)}")
        for n in scan.skipped:
            print(f"# n={n} skipped: survival underflow")
    return 0


def cmd_asymcss(args) -> int:
    print(fmt(asym_css(_load(args.state))))
    return 0


def cmd_isotropic(args) -> int:
    p = IsotropicParams(args.d, args.alpha, args.beta, args.gamma, args.delta)
    if args.n > 1:
        evolved, survival = iso_b_step(p, args.n)
        print(f"survival\t{fmt(survival)}")
        for name, v in zip(("alpha", "beta", "gamma", "delta"), evolved.as_tuple()):
            print(f"{name}\t{fmt(v)}")
    print(f"r\t{fmt(iso_exponent(p))}")
    print(f"verdict\t{iso_correctable(p)}")
    print(f"product_margin\t{fmt(product_margin(p))}")
    print(f"printed_shortcut\t{fmt(printed_shortcut(p))}")
    return 0


def _f_policy(text: str):
    if text in ("iso", "max"):
        return text
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--f must be iso, max or a number, got {text!r}") from None


def cmd_bounds(args) -> int:
    result = sweep(args.dmin, args.dmax, args.f)
    text = result.to_csv()
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if result.skipped:
        print(f"# skipped non-prime d: {' '.join(map(str, result.skipped))}", file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    rng = np.random.default_rng(args.seed)
    worst_state = worst_survival = worst_mix = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for _ in range(args.trials):
            states = [random_state(args.d, rng) for _ in range(args.n)]
            fast, slow = b_step(states), oracle_b_step(states)
            worst_state = max(worst_state, float(np.max(np.abs(fast.state.a - slow.state.a))))
            worst_survival = max(worst_survival, abs(fast.survival - slow.survival))
            worst_mix = max(worst_mix, float(np.max(np.abs(mix(states[0]).a - oracle_mix(states[0]).a))))
    print(f"b_step_max_deviation\t{fmt(worst_state)}")
    print(f"survival_max_deviation\t{fmt(worst_survival)}")
    print(f"mix_max_deviation\t{fmt(worst_mix)}")
    ok = max(worst_state, worst_survival, worst_mix) <= VERIFY_LIMIT
    print("PASS" if ok else "FAIL")
    return 0 if ok else EXIT_VERIFY


def _tol_item(text: str):
    try:
        return tolerances.parse_overrides(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bellqudit",
        description="B-step purification and correctability of Bell-diagonal qudit states",
    )
    parser.add_argument(
        "--tol", action="append", type=_tol_item, default=[], metavar="KEY=VALUE",
        help="override a tolerance (norm, renorm, survive, tie, r); also via $QP_TOL_OVERRIDES",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bstep", help="apply one homogeneous B-step to a state file")
    p.add_argument("--state", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mix", action="store_true", help="mix phases within columns first")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bstep)

    p = sub.add_parser("exponent", help="characteristic exponent and verdict")
    p.add_argument("--state", required=True)
    p.add_argument("--mix", action="store_true")
    p.add_argument("--scan", type=int, default=0, metavar="N", help="also tabulate n = 1..N")
    p.set_defaults(func=cmd_exponent)

    p = sub.add_parser("asymcss", help="quantum Shannon bound of a state")
    p.add_argument("--state", required=True)
    p.set_defaults(func=cmd_asymcss)

    p = sub.add_parser("isotropic", help="generalised isotropic state dynamics")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--n", type=int, default=1)
    p.set_defaults(func=cmd_isotropic)

    p = sub.add_parser("bounds", help="tolerable error-rate table over prime d")
    p.add_argument("--dmin", type=int, required=True)
    p.add_argument("--dmax", type=int, required=True)
    p.add_argument("--f", type=_f_policy, default="iso", help="iso (f=1), max (f=d-1) or a number")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify", help="compare fast paths with brute-force oracles")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    saved = tolerances.Tolerances(**vars(tolerances.TOL))
    try:
        try:
            tolerances.apply_env_overrides()
            for item in args.tol:
                tolerances.TOL.update(**item)
        except (KeyError, ValueError) as exc:
            parser.error(str(exc))
        try:
            return args.func(args)
        except BellQuditError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INVALID
    finally:
        tolerances.TOL.update(**vars(saved))


if __name__ == "__main__":
    sys.exit(main())
