"""
Command-line interface.

Exit codes: 0 success/true, 1 semantic false, 2 parse or order errors,
3 domain errors, 4 solver errors, 5 I/O errors.
"""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .bde import (
    ChartMismatchError,
    DegenerateFieldError,
    blow_up_analysis,
    bde_case,
    figure_csv,
    figure_svg,
    integrate_configuration,
    principal_bde,
    valid_charts,
)
from .classify import RIDGE_ORDERINGS, NotSingularError, classify_discriminant, nondegeneracy, ridge_limit_witness
from .congruence import CongruenceGerm, InsufficientOrderError, discriminant, hw_identity_residual, w_series
from .germfile import GermFileError, format_germ, format_germ_json, parse_rational, read_germ
from .jets import (
    NormalizationError,
    NotUmbilicError,
    SolverError,
    UmbilicNormalForm,
    UnsupportedBranchError,
    dependent_slots,
    natural,
    normalize_umbilic,
    solve_jet,
)
from .series import Series2

EXIT_OK, EXIT_FALSE, EXIT_PARSE, EXIT_DOMAIN, EXIT_SOLVER, EXIT_IO = range(6)


class CliError(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        super().__init__(message)


def _load(args) -> CongruenceGerm:
    try:
        return read_germ(args.input, as_json=args.json or None)
    except GermFileError as exc:
        raise CliError(EXIT_PARSE, f"parse error: {exc}") from None
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {args.input}: {exc.strerror}") from None


def _random_rational(rng: random.Random, nonzero: bool = False) -> Fraction:
    while True:
        v = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
        if v or not nonzero:
            return v


def random_germ(rng: random.Random, cap: int) -> CongruenceGerm:
    """Germ with every coefficient an independent draw from ``[-5, 5]``."""
    p = {(j, n - j): _random_rational(rng) for n in range(cap + 1) for j in range(n + 1)}
    q = {(j, n - j): _random_rational(rng) for n in range(cap + 1) for j in range(n + 1)}
    return CongruenceGerm(Series2.from_derivatives(p, cap), Series2.from_derivatives(q, cap))


# --- commands ---------------------------------------------------------


def cmd_wcheck(args, out) -> int:
    germ = _load(args)
    try:
        W = w_series(germ)
    except InsufficientOrderError as exc:
        raise CliError(EXIT_PARSE, str(exc)) from None
    if W.is_zero():
        print(f"W ≡ 0 through order {W.cap}", file=out)
        return EXIT_OK
    print(f"W is not zero through order {W.cap}; nonzero derivatives at the origin:", file=out)
    for (j, k), v in sorted(W.derivatives().items(), key=lambda t: (sum(t[0]), t[0])):
        if v:
            print(f"  W_{j}{k} = {v}", file=out)
    return EXIT_FALSE


def cmd_classify(args, out) -> int:
    germ = _load(args)
    try:
        report = nondegeneracy(germ)
    except NotUmbilicError as exc:
        raise CliError(EXIT_DOMAIN, str(exc)) from None
    except InsufficientOrderError as exc:
        raise CliError(EXIT_PARSE, str(exc)) from None
    try:
        _, normal = normalize_umbilic(germ)
        m = normal.m
        m_note = ""
    except NormalizationError as exc:
        m, m_note = None, str(exc)
    delta = discriminant(germ)
    try:
        verdict = classify_discriminant(delta, args.cap_ainf, numeric=args.numeric)
    except NotSingularError as exc:
        raise CliError(EXIT_DOMAIN, str(exc)) from None
    except InsufficientOrderError as exc:
        raise CliError(EXIT_PARSE, str(exc)) from None
    witness = ridge_limit_witness(germ, args.ridge_order, args.ridge_ordering)

    fmt = lambda t: "(" + ", ".join(str(v) for v in t) + ")"  # noqa: E731
    print(f"Omega = {fmt(report.omega)}", file=out)
    print(f"J     = {fmt(report.jay)}", file=out)
    print(f"non-degenerate: {'yes' if report.nondegenerate else 'no'}", file=out)
    print(f"m = {m}" if m is not None else f"m unavailable: {m_note}", file=out)
    details = ", ".join(f"{k}={v}" for k, v in verdict.witnesses.items() if k != "vanishing")
    print(f"discriminant: {verdict.label} ({details})", file=out)
    if verdict.diagnostic:
        print(f"  note: {verdict.diagnostic}", file=out)
    if verdict.kernel_direction:
        print(f"  Hessian kernel direction: ({verdict.kernel_direction[0]:.6f}, {verdict.kernel_direction[1]:.6f})", file=out)
    if witness:
        print(f"ridge witness R({witness[0]},{witness[1]}) = {witness[2]} != 0", file=out)
    else:
        searched = min(args.ridge_order, max(germ.cap - 3, 0))
        print(f"ridge witness: none through order {searched} (the germ's cap bounds the search)", file=out)
    print("---", file=out)
    print(f"nondegenerate={'true' if report.nondegenerate else 'false'}", file=out)
    print(f"m={m if m is not None else 'NA'}", file=out)
    print(f"verdict={verdict.label}", file=out)
    for k, v in verdict.witnesses.items():
        if k != "vanishing":
            print(f"{k}={v}", file=out)
    print(f"ridge_witness={'R(%d,%d)=%s' % witness if witness else 'none'}", file=out)
    return EXIT_OK


def _free_slots(m, order: int) -> list[tuple]:
    """Free Taylor slots of orders 3 .. order + 1 (plus ``q20`` when ``m == 1``)."""
    dep = dependent_slots(m, order)
    slots = [
        (which, j, n - j)
        for n in range(3, order + 2)
        for which in ("p", "q")
        for j in range(n, -1, -1)
        if (which, j, n - j) not in dep
    ]
    if natural(m) == 1:
        slots.insert(0, ("q", 2, 0))
    return slots


def cmd_jetsolve(args, out) -> int:
    try:
        m = parse_rational(args.m)
    except (ValueError, ZeroDivisionError):
        raise CliError(EXIT_PARSE, f"--m expects a rational, got {args.m!r}") from None
    if m == 0 or m == -1:
        raise CliError(EXIT_DOMAIN, "m = 0 or m = -1 violates non-degeneracy")
    order = args.order
    free = {}
    p11 = Fraction(1)
    if args.input:
        germ = _load(args)
        for which, series in (("p", germ.xi1), ("q", germ.xi2)):
            for (j, k), v in series.derivatives().items():
                if v == 0 or j + k < 2:
                    continue
                if (which, j, k) == ("p", 1, 1):
                    p11 = v
                elif (which, j, k) != ("q", 0, 2):
                    free[(which, j, k)] = v
        q02 = germ.q(0, 2) if germ.cap >= 2 else 0
        if q02 != 0 and q02 != -m * p11:
            raise CliError(EXIT_DOMAIN, f"q02 = {q02} is inconsistent with m = {m} and p11 = {p11}")
    dep = dependent_slots(m, order)
    if args.random_free:
        rng = random.Random(args.seed)
        for slot in _free_slots(m, order):
            if slot not in free:
                free[slot] = _random_rational(rng, nonzero=slot == ("q", 2, 0))
    beyond = sorted(s for s in free if s[1] + s[2] > order + 1)
    if beyond:
        names = ", ".join(f"{w}{j}{k}" for w, j, k in beyond)
        raise CliError(EXIT_PARSE, f"coefficients above order {order + 1} cannot be used: {names}")
    bad = sorted(s for s in free if s in dep or s in {("p", 2, 0), ("p", 0, 2), ("q", 1, 1)})
    if bad:
        names = ", ".join(f"{w}{j}{k}" for w, j, k in bad)
        raise CliError(EXIT_DOMAIN, f"coefficients given for slots fixed by the normal form or the solver: {names}")
    if natural(m) != 1 and free.get(("q", 2, 0)):
        raise CliError(EXIT_DOMAIN, "q20 must vanish unless m = 1")
    try:
        normal = UmbilicNormalForm(p11=p11, q02=-m * p11, free_coeffs=free)
        germ, report = solve_jet(normal, order)
    except UnsupportedBranchError as exc:
        raise CliError(EXIT_SOLVER, str(exc)) from None
    except SolverError as exc:
        raise CliError(EXIT_SOLVER, f"solver error at (n,k)=({exc.n},{exc.k}): {exc}") from None
    except ValueError as exc:
        raise CliError(EXIT_DOMAIN, str(exc)) from None

    padded = germ.with_cap(order + 3)
    comments = [
        f"W-congruence jet solved through order {order}, m = {m}",
        f"coefficients of order {order + 2} and {order + 3} are set to zero",
    ]
    keep = {("xi1" if w == "p" else "xi2", j, k) for (w, j, k) in report.determined()}
    text = format_germ_json(padded, keep) if args.json else format_germ(padded, comments, keep)
    try:
        if args.output:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            out.write(text)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {args.output}: {exc.strerror}") from None
    log = sys.stderr if not args.output else out
    print(f"m = {m}, order reached = {report.order_reached}", file=log)
    for r in report.equations_used:
        eq = f"W_{r.n - r.k}{r.k}"
        if r.slot is None:
            print(f"  {eq}: not solved (W_m0 slot)", file=log)
        elif r.value is None:
            print(f"  {eq}: {r.slot[0]}{r.slot[1]}{r.slot[2]} left free (zero slope)", file=log)
        else:
            print(f"  {eq}: {r.slot[0]}{r.slot[1]}{r.slot[2]} = {r.value}  (slope {r.slope})", file=log)
    if report.wm0_residual is not None:
        print(f"W_{natural(m)}0 residual = {report.wm0_residual}", file=log)
    return EXIT_OK


def cmd_plot(args, out) -> int:
    germ = _load(args)
    try:
        bde = principal_bde(germ)
        fig = integrate_configuration(bde, args.window, args.step, args.seeds)
    except DegenerateFieldError as exc:
        raise CliError(EXIT_DOMAIN, str(exc)) from None
    except ValueError as exc:
        raise CliError(EXIT_PARSE, str(exc)) from None
    try:
        if args.csv:
            with open(args.csv, "w", encoding="utf-8", newline="") as fh:
                fh.write(figure_csv(fig))
        if args.svg:
            with open(args.svg, "w", encoding="utf-8") as fh:
                fh.write(figure_svg(fig, __version__))
        png = args.png
        if png is None and not args.no_png and (args.svg or args.csv):
            png = str(Path(args.svg or args.csv).with_suffix(".png"))
        if png:
            from .plotting import render_png

            render_png(fig, png, title=Path(args.input).stem)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write figure: {exc.strerror} ({exc.filename})") from None
    print(f"{len(fig.polylines)} principal lines, {len(fig.discriminant_curve)} discriminant segments", file=out)
    for flag in fig.flags:
        print(f"  note: {flag}", file=out)
    _blow_up_table(germ, out)
    return EXIT_OK


def _blow_up_table(germ: CongruenceGerm, out) -> None:
    try:
        normal_germ, normal = normalize_umbilic(germ)
        bde = principal_bde(normal_germ)
        m = bde_case(bde)
    except (NotUmbilicError, NormalizationError, ChartMismatchError) as exc:
        print(f"blow-up analysis skipped: {exc}", file=out)
        return
    charts = valid_charts(m)
    if not charts:
        print(f"blow-up analysis skipped: no charts for m = {m}", file=out)
        return
    print(f"blow-up analysis (normalized germ, m = {m}):", file=out)
    print("  chart        v0   det(DX)      type", file=out)
    for name in charts:
        points = blow_up_analysis(bde, name)
        if not points:
            print(f"  {name:<5}        -         -   no singular points", file=out)
        for p in points:
            print(f"  {name:<5} {p.v0:9.4f} {p.jacobian_det:9.4f}   {p.type}", file=out)


def cmd_identity(args, out) -> int:
    if args.input:
        germs = [_load(args)]
    else:
        rng = random.Random(args.seed)
        germs = [random_germ(rng, args.cap) for _ in range(args.random)]
    exact = 0
    for i, germ in enumerate(germs):
        try:
            residual = hw_identity_residual(germ)
        except InsufficientOrderError as exc:
            raise CliError(EXIT_PARSE, str(exc)) from None
        if residual.is_zero():
            exact += 1
        else:
            print(f"germ {i}: residual {residual.format()}", file=out)
    print(f"{exact}/{len(germs)} exact (c^2 R - S = -4 c^3 delta W)", file=out)
    return EXIT_OK if exact == len(germs) else EXIT_FALSE


# --- argument parsing -------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wcong", description="W-congruences: invariants, jets and umbilics.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def germ_arg(p, optional=False):
        if optional:
            p.add_argument("input", nargs="?", help="germ file")
        else:
            p.add_argument("input", help="germ file")
        p.add_argument("--json", action="store_true", help="read/write the JSON germ format")

    p = sub.add_parser("wcheck", help="is W the zero series?")
    germ_arg(p)
    p.set_defaults(func=cmd_wcheck)

    p = sub.add_parser("classify", help="non-degeneracy, m and the discriminant singularity")
    germ_arg(p)
    p.add_argument("--cap-ainf", type=int, default=None, help="order bound for the A-infinity test")
    p.add_argument("--numeric", action="store_true", help="float zero tests (relative tolerance 1e-9)")
    p.add_argument("--ridge-order", type=int, default=6, help="highest order searched for a ridge witness")
    p.add_argument(
        "--ridge-ordering",
        choices=RIDGE_ORDERINGS,
        default="k_ascending",
        help="scan order within one total degree (default: R_n0 first)",
    )
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("jetsolve", help="complete a jet of a W-congruence at a normalized umbilic")
    germ_arg(p, optional=True)
    p.add_argument("--m", required=True, help="m = -q02/p11 (rational)")
    p.add_argument("--order", type=int, required=True, help="solve W_{n-k,k} = 0 for n <= order")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--random-free", action="store_true", help="draw unspecified free coefficients at random")
    p.add_argument("-o", "--output", help="output germ file (default: stdout)")
    p.set_defaults(func=cmd_jetsolve)

    p = sub.add_parser("plot", help="principal lines near the origin")
    germ_arg(p)
    p.add_argument("--window", type=float, default=1.0)
    p.add_argument("--step", type=float, default=0.01)
    p.add_argument("--seeds", type=int, default=6)
    p.add_argument("--svg")
    p.add_argument("--csv")
    p.add_argument("--png", help="matplotlib rendering (default: next to --svg or --csv)")
    p.add_argument("--no-png", action="store_true", help="skip the matplotlib rendering")
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("identity", help="check c^2 R - S = -4 c^3 delta W exactly")
    germ_arg(p, optional=True)
    p.add_argument("--random", type=int, default=100)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--cap", type=int, default=5)
    p.set_defaults(func=cmd_identity)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
