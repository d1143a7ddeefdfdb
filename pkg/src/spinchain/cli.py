"""Command-line front end: CSV curves, oracle comparisons and the timescale.

Every command writes CSV (UTF-8, LF line endings, ``%.12e`` values) to
``--output`` or standard output.  Exit codes: 0 success, 2 usage error,
3 oracle-compare tolerance failure.
"""

from __future__ import annotations

import argparse
import cmath
import math
import sys

import numpy as np

from . import entanglement as ent
from . import fidelity as fid
from .compare import compare_curve
from .magnon import U_MODES, Family, InitialState
from .oracle import MAX_TWO_MAGNON_SITES, ChainConfig

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_TOLERANCE = 3

FAMILIES = [f.value for f in Family]


class UsageError(Exception):
    pass


def format_csv(names, columns) -> str:
    """Header ``names`` then one row per grid point."""
    cols = [np.asarray(c, dtype=float) for c in columns]
    lines = [",".join(names)]
    for row in zip(*cols):
        lines.append(",".join("%.12e" % v for v in row))
    return "\n".join(lines) + "\n"


def _emit(text: str, path) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror or exc}") from exc


def _code(args):
    """(alpha, beta) from --alpha2 and --phase."""
    a2 = args.alpha2
    if not 0.0 <= a2 <= 1.0:
        raise UsageError("--alpha2 must lie in [0, 1]")
    return math.sqrt(a2), math.sqrt(1.0 - a2) * cmath.exp(1j * args.phase)


def _grid(args):
    if not args.t_max > 0:
        raise UsageError("--t-max must be positive")
    if args.steps < 2:
        raise UsageError("--steps must be >= 2")
    return fid.time_grid(args.t_max, args.steps)


def _need_s(args):
    if args.family != Family.UNENTANGLED.value and args.s is None:
        raise UsageError(f"--s is required for the {args.family} family")
    if args.family != Family.UNENTANGLED.value and args.s == 0:
        raise UsageError("--s must be non-zero")
    if args.family == Family.UNENTANGLED.value and args.s not in (None, 0):
        raise UsageError("--s does not apply to the unentangled family")
    return 0 if args.s is None else args.s


def cmd_fidelity(args) -> int:
    s = _need_s(args)
    Ts = _grid(args)
    fam = Family(args.family)
    if args.coherent and fam is not Family.UNENTANGLED:
        raise UsageError("--coherent applies to the unentangled family only")
    dephased = not args.coherent
    if args.alpha2 is None:
        if args.phase:
            raise UsageError("--phase needs --alpha2")
        fn = fid.average_fidelity_fn(fam, args.r, s, dephased)
    else:
        a, b = _code(args)
        if fam is Family.UNENTANGLED:
            fn = lambda T: fid.fid_site_unentangled(args.r, T, args.alpha2, dephased)
        elif fam is Family.B1:
            fn = lambda T: fid.site_fidelity_b1(args.r, s, T, a, b)
        else:
            fn = lambda T: fid.site_fidelity_b2(args.r, s, T, a, b)
    _emit(format_csv(["T", "F"], [Ts, fid.evaluate_grid(fn, Ts)]), args.output)
    return EXIT_OK


def cmd_pair_fidelity(args) -> int:
    s = _need_s(args)
    fam = Family(args.family)
    if fam is Family.UNENTANGLED:
        raise UsageError("pair-fidelity needs --family b1 or b2")
    if fam is Family.B1 and args.u_mode is not None:
        raise UsageError("--u-mode applies to the b2 family only")
    if fam is Family.B2 and args.overlap is not None:
        raise UsageError("--overlap applies to the b1 family only")
    u_mode = args.u_mode or "paper_approx"
    form = args.overlap or "paper"
    Ts = _grid(args)
    if args.alpha2 is None:
        if args.phase:
            raise UsageError("--phase needs --alpha2")
        fn = fid.average_pair_fidelity_fn(fam, args.r, s, u_mode, form)
    else:
        a, b = _code(args)
        if fam is Family.B1:
            fn = lambda T: fid.pairfid_b1(args.r, s, T, a, b, form)
        else:
            fn = lambda T: fid.pairfid_b2(args.r, s, T, a, b, u_mode)
    _emit(format_csv(["T", "G"], [Ts, fid.evaluate_grid(fn, Ts)]), args.output)
    return EXIT_OK


def _parse_pair(text: str):
    try:
        i, j = (int(p) for p in text.split(":"))
    except ValueError:
        raise UsageError(f"--pair expects i:j with integer sites, got {text!r}") from None
    if i == j:
        raise UsageError(f"--pair needs two different sites, got {text!r}")
    return i, j


def cmd_concurrence(args) -> int:
    s = _need_s(args)
    fam = Family(args.family)
    if fam is not Family.B2 and args.u_mode is not None:
        raise UsageError("--u-mode applies to the b2 family only")
    u_mode = args.u_mode or "paper_approx"
    a, b = _code(args)
    l = args.l
    if args.pair:
        pairs = [_parse_pair(p) for p in args.pair]
    else:
        pairs = [(l + 1, l), (l + 2, l)]
        if fam is not Family.UNENTANGLED:
            pairs.append((l, l - s))
    Ts = _grid(args)
    if fam is Family.UNENTANGLED:
        state = InitialState.unentangled(l, a, b)
    elif fam is Family.B1:
        state = InitialState.b1(l, l - s, a, b)
    else:
        state = InitialState.b2(l, l - s, a, b)

    def column(i, j):
        if fam is Family.UNENTANGLED:
            f = lambda T: ent.concurrence_unentangled(i, j, l, T, abs(b) ** 2)
        elif fam is Family.B1:
            f = lambda T: ent.concurrence_b1(i, j, state, T)
        else:
            hi, lo = max(i, j), min(i, j)
            f = lambda T: ent.concurrence_b2(hi, lo, state, T, u_mode)
        return fid.evaluate_grid(f, Ts)

    names = ["T"] + [f"C_{i}_{j}" for i, j in pairs]
    _emit(format_csv(names, [Ts] + [column(i, j) for i, j in pairs]), args.output)
    return EXIT_OK


def cmd_oracle_compare(args) -> int:
    fam = Family(args.family)
    if args.s is None and fam is not Family.UNENTANGLED:
        args.s = 1
    s = _need_s(args)
    if args.n < 4:
        raise UsageError("--n must be >= 4")
    if fam is Family.B2 and args.n > MAX_TWO_MAGNON_SITES:
        raise UsageError(f"--n must be <= {MAX_TWO_MAGNON_SITES} for the b2 family")
    if not args.tol > 0:
        raise UsageError("--tol must be positive")
    if not args.t_max > 0:
        raise UsageError("--t-max must be positive")
    steps = args.steps if args.steps is not None else max(2, int(round(args.t_max / 0.5)))
    if steps < 2:
        raise UsageError("--steps must be >= 2")
    Ts = fid.time_grid(args.t_max, steps)
    a, b = _code(args)
    l = args.n // 2
    if fam is Family.UNENTANGLED:
        state = InitialState.unentangled(l, a, b)
    else:
        m = l - s
        if not 0 <= m < args.n:
            raise UsageError("--s places the second code site outside the chain")
        state = InitialState(fam, a, b, l, m)
    try:
        sites, devs = compare_curve(ChainConfig(args.n), state, Ts, args.tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    keys = list(devs[0].values)
    cols = [Ts] + [[d.values[k] for d in devs] for k in keys] + [[d.worst for d in devs]]
    _emit(format_csv(["T"] + keys + ["max"], cols), args.output)
    worst = max(d.worst for d in devs)
    if worst > args.tol:
        print(f"oracle-compare: deviation {worst:.3e} exceeds tolerance {args.tol:.3e}", file=sys.stderr)
        return EXIT_TOLERANCE
    return EXIT_OK


def cmd_timescale(args) -> int:
    try:
        tau = fid.timescale_seconds(args.coupling_ev)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(format_csv(["K_eV", "tau_s"], [[args.coupling_ev], [tau]]), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinchain",
        description="Entanglement transport in the Heisenberg-XY chain: CSV curves and oracle checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, t_max=120.0, steps=600):
        p.add_argument("--t-max", type=float, default=t_max, help="largest dimensionless time T (default %(default)s)")
        p.add_argument("--steps", type=int, default=steps, help="grid intervals on [0, t-max] (default %(default)s)")
        p.add_argument("-o", "--output", default=None, help="CSV path (default: stdout)")

    def code(p, default=None):
        p.add_argument("--alpha2", type=float, default=default, help="|alpha|^2 of the code")
        p.add_argument("--phase", type=float, default=0.0, help="relative phase of beta, radians")

    p = sub.add_parser("fidelity", help="single-site fidelity F(T)")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--r", type=int, required=True, help="transfer distance")
    p.add_argument("--s", type=int, default=None, help="code separation l - m (b1, b2)")
    p.add_argument("--coherent", action="store_true", help="keep sector coherences (unentangled)")
    code(p)
    common(p)
    p.set_defaults(func=cmd_fidelity)

    p = sub.add_parser("pair-fidelity", help="two-site fidelity G(T)")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--s", type=int, default=None)
    p.add_argument("--u-mode", choices=U_MODES, default=None, help="b2 only (default paper_approx)")
    p.add_argument("--overlap", choices=("paper", "exact"), default=None, help="b1 only (default paper)")
    code(p)
    common(p)
    p.set_defaults(func=cmd_pair_fidelity)

    p = sub.add_parser("concurrence", help="two-site concurrence C_ij(T)")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--s", type=int, default=None)
    p.add_argument("--l", type=int, default=0, help="launch site (default 0)")
    p.add_argument("--pair", action="append", default=None, metavar="I:J", help="site pair, repeatable; write --pair=I:J when I is negative")
    p.add_argument("--u-mode", choices=U_MODES, default=None, help="b2 only (default paper_approx)")
    code(p, default=0.5)
    common(p, t_max=20.0, steps=400)
    p.set_defaults(func=cmd_concurrence)

    p = sub.add_parser("oracle-compare", help="closed forms against the exact finite chain")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--n", type=int, default=41, help="chain length (default %(default)s)")
    p.add_argument("--s", type=int, default=None, help="code separation (default 1)")
    p.add_argument("--tol", type=float, default=1e-8)
    code(p, default=0.5)
    p.add_argument("--t-max", type=float, default=8.0)
    p.add_argument("--steps", type=int, default=None, help="default: spacing 0.5")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_oracle_compare)

    p = sub.add_parser("timescale", help="tau = hbar / K in seconds")
    p.add_argument("--coupling-ev", type=float, required=True)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_timescale)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"spinchain {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
