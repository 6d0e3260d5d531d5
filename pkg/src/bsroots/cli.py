"""Command-line front end.

Exit codes: 0 success, 1 bad input, 2 (W) violated (``tau_Z != mu_Z``),
3 report printed but some candidates are UNDETERMINED, 4 an internal
invariant failed.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from . import bsengine, koszul, localspec
from .arrangements import arrangement
from .errors import BsrootsError, InputError, InvariantError, WViolation
from .polyring import parse_expr

EXIT_OK, EXIT_INPUT, EXIT_W, EXIT_UNDETERMINED, EXIT_INVARIANT = 0, 1, 2, 3, 4

_DEFAULT_ORDER = "xyzwvuts"
ROW_NAMES = {"gamma": "gamma", "mu": "mu", "nu": "nu", "mu2": "mu2", "nu2": "nu2",
             "mu_dblprime": "mu''", "mu_prime": "mu'", "delta": "delta"}


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, which would collide with EXIT_W
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# input helpers


def parse_vars(spec: str | None, text: str | None = None) -> list[str]:
    """``x,y,z`` or ``xyz``; without ``spec`` the letters of ``xyzwvuts``
    occurring in ``text`` are used in that order."""
    if spec:
        names = [s.strip() for s in spec.split(",")] if "," in spec else list(spec.strip())
    else:
        if text is None:
            raise InputError("--vars is required")
        found = set(re.findall(r"[A-Za-z_][A-Za-z_0-9]*", text))
        names = [c for c in _DEFAULT_ORDER if c in found]
    if not names or any(not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", v) for v in names):
        raise InputError(f"bad variable list {spec!r}")
    if len(set(names)) != len(names):
        raise InputError("variables must be distinct")
    return names


def _weights_input(args) -> tuple[Fraction, ...]:
    given = [a for a in ("weights", "type", "local_poly") if getattr(args, a, None)]
    if len(given) != 1:
        raise InputError("give exactly one of --weights, --type, --local-poly")
    if args.weights:
        return tuple(localspec.parse_rational(w) for w in args.weights.split(","))
    if args.type:
        return localspec.ade_weights(args.type, args.ambient)
    return localspec.weights_from_local_poly(args.local_poly, parse_vars(args.vars, args.local_poly))


def _method(args) -> str:
    return "modular" if getattr(args, "modular", False) else "exact"


def _poly(args):
    """``(f, names, szd_or_None)`` from a polynomial argument or ``--lines``."""
    if getattr(args, "lines", None):
        if args.poly:
            raise InputError("give either a polynomial or --lines, not both")
        names = parse_vars(args.vars or "x,y,z")
        f, szd = arrangement(args.lines, names)
        return f, names, szd
    if not args.poly:
        raise InputError("a polynomial is required")
    names = parse_vars(args.vars, args.poly)
    return parse_expr(args.poly, names), names, None


def _k_window(args, n: int, d: int) -> tuple[int, int]:
    lo = n if args.kmin is None else args.kmin
    hi = n * d if args.kmax is None else args.kmax
    if not 0 <= lo <= hi <= (n + 1) * d:
        raise InputError(f"k-range [{lo}, {hi}] must lie in [0, {(n + 1) * d}]")
    return lo, hi


# ---------------------------------------------------------------------------
# output helpers


def tables_text(tables, lo: int, hi: int) -> str:
    """Aligned layout: one row per table, blanks for zero entries."""
    header = ["k"] + [str(k) for k in range(lo, hi + 1)]
    rows = [header]
    for t in tables:
        rows.append([ROW_NAMES[t.label]] + [str(t[k]) if t[k] else "" for k in range(lo, hi + 1)])
    widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
    return "\n".join(
        " ".join(c.rjust(w) if i else c.ljust(w) for i, (c, w) in enumerate(zip(r, widths))).rstrip()
        for r in rows
    ) + "\n"


def _emit_tables(tables, lo, hi, fmt, out):
    if fmt == "json":
        out.write(json.dumps({t.label: t.to_dict() for t in tables}, sort_keys=True, indent=2) + "\n")
    elif fmt == "tsv":
        out.write(koszul.tables_tsv(tables, lo, hi))
    else:
        out.write(tables_text(tables, lo, hi))


def _fmt_list(qs) -> str:
    return "{" + ", ".join(localspec.fmt_rational(q) for q in sorted(qs)) + "}"


def report_text(r: bsengine.RootReport) -> str:
    s = r.singularities
    lines = [
        f"f = {r.poly}",
        f"n = {r.n}, d = {r.d}, tau = {r.tau}, mu_Z = {s.mu_Z}, chi(U) = {r.chi_U}",
        f"singular points: {s.n_points}",
        f"R_Z = {_fmt_list(s.R_Z)}",
        f"R_f^0 (certified) = {_fmt_list(r.R0)}",
        f"undetermined = {_fmt_list(r.undetermined)}",
        f"R_f (roots only, no multiplicities) = {_fmt_list(r.R_f)}",
        f"CS(f) = {sorted(r.cs_f)}, critical-degree condition {'holds' if r.condition11_holds else 'fails'}",
        f"support of delta off d R_Z: k_min = {r.k_min}, k_max = {r.k_max}, "
        f"connected = {r.connected_outside}",
        f"beta_f = {'inf' if r.beta_f is None else r.beta_f}",
    ]
    if r.corollary3_applicable:
        lines.append(f"support criterion applies; agrees with classification: {r.corollary3_agrees}")
    else:
        lines.append("support criterion does not apply")
    if r.theorem5 is not None:
        t = r.theorem5
        lines.append(f"threshold criterion hypotheses hold: {t.hypotheses_hold} "
                     f"(predicted k range [{t.predicted_k_min}, {t.predicted_k_max}], "
                     f"matches: {r.theorem5_prediction_matches})")
    if r.extremely_degenerated is not None:
        lines.append(f"extremely degenerated: {r.extremely_degenerated}")
    order = [k for k in bsengine.TABLE_ORDER if k in r.tables]
    lines.append("")
    return "\n".join(lines) + "\n" + tables_text([r.tables[k] for k in order], r.n, r.n * r.d)


# ---------------------------------------------------------------------------
# subcommands


def cmd_spectrum(args, out) -> int:
    ws = _weights_input(args)
    sp = localspec.spectrum(ws)
    if args.format == "json":
        out.write(json.dumps({
            "weights": [localspec.fmt_rational(w) for w in ws],
            "m": sp.m,
            "spectrum": sp.poly_string(),
            "milnor": localspec.milnor_number(ws),
        }, sort_keys=True, indent=2) + "\n")
    else:
        out.write(sp.poly_string() + "\n")
    return EXIT_OK


def cmd_local_bs(args, out) -> int:
    ws = _weights_input(args)
    full, reduced = localspec.local_bs_roots(ws)
    if args.format == "json":
        out.write(json.dumps({
            "weights": [localspec.fmt_rational(w) for w in ws],
            "roots": [localspec.fmt_rational(q) for q in sorted(full)],
            "reduced": [localspec.fmt_rational(q) for q in sorted(reduced)],
            "alpha_tilde": localspec.fmt_rational(min(reduced)),
        }, sort_keys=True, indent=2) + "\n")
    else:
        out.write(f"roots = {_fmt_list(full)}\nreduced = {_fmt_list(reduced)}\n")
    return EXIT_OK


def _n_d(args) -> tuple[int, int]:
    if args.poly:
        f = parse_expr(args.poly, parse_vars(args.vars, args.poly))
        return f.n_vars, f.degree
    if args.n is None or args.d is None:
        raise InputError("give a polynomial or both --n and --d")
    return args.n, args.d


def cmd_gamma(args, out) -> int:
    n, d = _n_d(args)
    g = koszul.gamma_table(n, d)
    _emit_tables([g], n, n * d - n, args.format, out)
    return EXIT_OK


def cmd_arnold(args, out) -> int:
    n, d = _n_d(args)
    ar = koszul.arnold_number(n, d)
    if args.format == "json":
        out.write(json.dumps({"n": n, "d": d, "arnold": ar}, sort_keys=True) + "\n")
    else:
        out.write(f"{ar}\n")
    return EXIT_OK


def cmd_tables(args, out) -> int:
    f, names, szd = _poly(args)
    n, d = f.n_vars, f.degree
    lo, hi = _k_window(args, n, d)
    t = bsengine.compute_tables(f, _method(args))
    order = ["gamma", "mu", "nu"]
    if args.e2:
        mu2, nu2 = koszul.e2_tables(f, t["nu"], method=_method(args))
        if szd is not None:
            bsengine.check_sandwich(t["delta"], mu2, szd)
        t["mu2"], t["nu2"] = mu2, nu2
        order += ["mu2", "nu2"]
    order += ["mu_dblprime", "mu_prime", "delta"]
    _emit_tables([t[k] for k in order], lo, hi, args.format, out)
    return EXIT_OK


def cmd_deltas(args, out) -> int:
    f, names, szd = _poly(args)
    t = bsengine.compute_tables(f, _method(args))
    delta = t["delta"]
    if args.format == "json":
        out.write(json.dumps(delta.to_dict(), sort_keys=True, indent=2) + "\n")
    elif args.format == "tsv":
        n, d = f.n_vars, f.degree
        out.write(koszul.tables_tsv([delta], *_k_window(args, n, d)))
    else:
        out.write(delta.poly_string() + "\n")
    return EXIT_OK


def _load_sing(args, f):
    if args.sing is None:
        return None
    return localspec.load_singularities(args.sing, f.n_vars)


def cmd_e2(args, out) -> int:
    f, names, szd = _poly(args)
    szd = szd or _load_sing(args, f)
    n, d = f.n_vars, f.degree
    t = bsengine.compute_tables(f, _method(args))
    mu2, nu2 = koszul.e2_tables(f, t["nu"], method=_method(args), route=args.route)
    if szd is not None:
        bsengine.validate_W(koszul.tau_from_mu(t["mu"]), szd)
        bsengine.check_sandwich(t["delta"], mu2, szd)
    lo, hi = _k_window(args, n, d)
    _emit_tables([t["mu"], t["nu"], mu2, nu2, t["delta"]], lo, hi, args.format, out)
    return EXIT_OK


def cmd_analyze(args, out) -> int:
    f, names, szd = _poly(args)
    if szd is None:
        szd = _load_sing(args, f)
        if szd is None:
            raise InputError("analyze needs --sing FILE or --lines")
    report = bsengine.analyze(f, szd, method=_method(args), n3_kmax_variant=args.n3_kmax_variant,
                              e2=args.e2, names=names)
    out.write(report.to_json() if args.format == "json" else report_text(report))
    return bsengine.exit_code(report)


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bsroots",
                description="Roots of Bernstein-Sato polynomials supported at the origin "
                            "for homogeneous polynomials with weighted homogeneous isolated "
                            "singularities on the projective hypersurface.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, fmt_default="text"):
        sp.add_argument("--format", choices=("json", "tsv", "text"), default=fmt_default)
        sp.add_argument("--vars", help="variable names, e.g. x,y,z (default: inferred)")

    def polyargs(sp, lines=True):
        sp.add_argument("poly", nargs="?", help="homogeneous polynomial")
        if lines:
            sp.add_argument("--lines", help="product of linear forms in x,y,z")
        m = sp.add_mutually_exclusive_group()
        m.add_argument("--exact", action="store_true", help="exact rank (default)")
        m.add_argument("--modular", action="store_true", help="rank modulo random primes")
        sp.add_argument("--kmin", type=int)
        sp.add_argument("--kmax", type=int)

    def weightargs(sp):
        sp.add_argument("--weights", help="comma-separated rationals, e.g. 2/11,3/11")
        sp.add_argument("--type", help="ADE type such as A1, D5, E8")
        sp.add_argument("--ambient", type=int, default=2, help="number of local variables")
        sp.add_argument("--local-poly", dest="local_poly", help="local weighted homogeneous equation")

    sp = sub.add_parser("spectrum", help="Steenbrink spectrum of a weighted homogeneous germ")
    common(sp)
    weightargs(sp)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("local-bs", help="roots of the local b-function")
    common(sp)
    weightargs(sp)
    sp.set_defaults(func=cmd_local_bs)

    for name, func, hlp in (("gamma", cmd_gamma, "coefficients of (t+...+t^{d-1})^n"),
                            ("arnold", cmd_arnold, "maximal number of nodes bound")):
        sp = sub.add_parser(name, help=hlp)
        common(sp)
        sp.add_argument("poly", nargs="?")
        sp.add_argument("--n", type=int)
        sp.add_argument("--d", type=int)
        sp.set_defaults(func=func)

    sp = sub.add_parser("tables", help="gamma, mu, nu, mu'', mu', delta tables")
    common(sp)
    polyargs(sp)
    sp.add_argument("--e2", action="store_true", help="add the E2 rows mu2 and nu2")
    sp.set_defaults(func=cmd_tables)

    sp = sub.add_parser("deltas", help="delta_k = mu_k - nu_{k+d}")
    common(sp)
    polyargs(sp)
    sp.set_defaults(func=cmd_deltas)

    sp = sub.add_parser("e2", help="E2 dimensions via the d1 differential")
    common(sp)
    polyargs(sp)
    sp.add_argument("--sing", help="singularity JSON file; enables the delta/mu2 check")
    sp.add_argument("--route", choices=sorted(koszul.E2_ROUTES), default="cokernel")
    sp.set_defaults(func=cmd_e2)

    sp = sub.add_parser("analyze", help="full root report")
    common(sp)
    polyargs(sp)
    sp.add_argument("--sing", help="singularity JSON file")
    sp.add_argument("--n3-kmax-variant", dest="n3_kmax_variant", action="store_true",
                    help="for n = 3 use k_max >= d-1 in the support criterion")
    sp.add_argument("--e2", action="store_true", help="also compute and check the E2 rows")
    sp.set_defaults(func=cmd_analyze)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except WViolation as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_W
    except InvariantError as e:
        print(f"invariant failure: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    except (InputError, BsrootsError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (OSError, json.JSONDecodeError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
