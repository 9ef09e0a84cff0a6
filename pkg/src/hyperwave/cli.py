"""Command-line entry point: ``hyperwave <command> [flags]``.

Exit codes: 0 success, 1 a check failed, 2 usage or domain error.
Set ``HYPERWAVE_LOG`` to ``error``, ``info`` or ``debug`` to control diagnostics on stderr
(unset: warnings are shown).
"""
from __future__ import annotations

import argparse
import decimal
import json
import logging
import os
import sys
import warnings
from typing import List, Optional, Sequence

from . import __version__, scattering, solutions, special, verify
from .modes import DEFAULT_GAMMA, ModeParameters, PhysicalUnits
from .opalg import checks
from .solutions import SolutionFamily

log = logging.getLogger("hyperwave")

SYSTEM_CHOICES = {"7": "sys7", "10": "sys10", "11c": "sys11c", "12": "sys12", "14c": "sys14c",
                  "16-17": "sys16_17", "19": "sys19"}


def _decimal(text: str) -> float:
    """Plain decimal number (``1e-8`` allowed); no nan/inf, no locale, no hex."""
    try:
        d = decimal.Decimal(text.strip())
    except decimal.InvalidOperation:
        raise argparse.ArgumentTypeError(f"not a decimal number: {text!r}") from None
    if not d.is_finite():
        raise argparse.ArgumentTypeError(f"not a finite number: {text!r}")
    return float(d)


def _decimal_list(text: str) -> List[float]:
    return [_decimal(t) for t in text.split(",") if t.strip()]


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def _add_mode_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--E", type=_decimal, default=0.1, help="nonrelativistic energy (default 0.1)")
    p.add_argument("--M", type=_decimal, default=1.0, help="mass (default 1)")
    p.add_argument("--a", type=_decimal, default=0.3, help="x-momentum (default 0.3)")
    p.add_argument("--b", type=_decimal, default=0.4, help="y-momentum (default 0.4)")
    p.add_argument("--gamma", type=_decimal, default=DEFAULT_GAMMA,
                   help="tetrad constant (default 1/sqrt(2), the value closing the Pauli system)")


def _add_family_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", choices=("I", "II"), default="I")
    p.add_argument("--regime", choices=("nonzero", "zero"), default="nonzero")
    p.add_argument("--branch", choices=("+", "-"), default=None,
                   help="sign of sigma (sigma != 0 regime only; default +)")


def _add_grid_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--z-min", type=_decimal, default=-3.0)
    p.add_argument("--z-max", type=_decimal, default=1.0)
    p.add_argument("--n", type=_positive_int, default=81)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hyperwave", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"hyperwave {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("verify-derivation", help="run every exact operator-identity check")

    p = sub.add_parser("eval", help="closed-form solution on a z grid, as CSV")
    _add_family_flags(p)
    _add_mode_flags(p)
    _add_grid_flags(p)
    p.add_argument("--out", help="output file (default stdout)")

    p = sub.add_parser("residuals", help="relative residual of one system on the closed form")
    p.add_argument("--system", choices=tuple(SYSTEM_CHOICES), required=True)
    _add_family_flags(p)
    _add_mode_flags(p)
    _add_grid_flags(p)
    p.add_argument("--tol", type=_decimal, default=1e-8)

    p = sub.add_parser("integrate-check", help="adaptive integration of the Psi1 equation vs the closed form")
    _add_family_flags(p)
    _add_mode_flags(p)
    p.add_argument("--z0", type=_decimal, default=-2.0)
    p.add_argument("--z1", type=_decimal, default=0.5)
    p.add_argument("--rel-tol", type=_decimal, default=1e-10)
    p.add_argument("--abs-tol", type=_decimal, default=1e-12)
    p.add_argument("--max-step", type=_decimal, default=0.5)
    p.add_argument("--tol", type=_decimal, default=1e-7)

    p = sub.add_parser("flat-limit", help="curved-equation residual on the flat plane wave vs rho")
    p.add_argument("--rho", type=_decimal_list, default=[10.0, 100.0, 1000.0])
    p.add_argument("--hbar", type=_decimal, default=1.0)
    p.add_argument("--c", type=_decimal, default=1.0)
    p.add_argument("--epsilon", type=_decimal, default=0.5)
    p.add_argument("--m", type=_decimal, default=1.0)
    p.add_argument("--P1", type=_decimal, default=0.3)
    p.add_argument("--P2", type=_decimal, default=0.4)
    p.add_argument("--out", help="output file (default stdout)")

    p = sub.add_parser("scatter", help="reflection coefficient sweep off the exponential barrier")
    p.add_argument("--k-list", type=_decimal_list, default=[0.5, 1.0, 2.0, 4.0])
    p.add_argument("--q-list", type=_decimal_list, default=[0.5, 1.0, 5.0, 10.0])
    p.add_argument("--out", help="output file (default stdout)")
    return parser


def _family(args) -> SolutionFamily:
    if args.regime == "zero":
        if args.branch is not None:
            log.warning("--branch is ignored in the sigma = 0 regime")
        return SolutionFamily.zero(args.family)
    return SolutionFamily.nonzero(args.family, args.branch or "+")


def _params(args) -> ModeParameters:
    p = ModeParameters(E=args.E, M=args.M, a=args.a, b=args.b, gamma=args.gamma)
    if p.bound_like:
        log.warning("E < 0: bound-like regime, sigma is imaginary")
    return p


def _header(command: str, **fields) -> List[str]:
    lines = [f"hyperwave {__version__} {command}"]
    for k, v in fields.items():
        lines.append(f"{k}: {json.dumps(v, sort_keys=True)}")
    return lines


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_verify(args) -> int:
    reports = checks.all_checks()
    doc = {"version": __version__, "gamma_squared": str(checks.GAMMA_SQUARED),
           "reports": [r.to_dict() for r in reports]}
    print(json.dumps(doc, indent=2))
    return 0 if all(r.passed for r in reports) else 1


def _cmd_eval(args) -> int:
    params, family = _params(args), _family(args)
    sigma = solutions.resolve_sigma(params, family)
    rows = solutions.evaluate_grid(params, family, args.z_min, args.z_max, args.n)
    if log.isEnabledFor(logging.DEBUG):
        for z, _ in rows:
            log.debug("z=%r %s", z, solutions.intermediates(params, family, z))
    header = _header("eval", params=params.with_sigma(sigma).to_dict(), family=family.label,
                     grid=[args.z_min, args.z_max, args.n])
    _emit(solutions.grid_to_csv(rows, header), args.out)
    return 0


def _cmd_residuals(args) -> int:
    params, family = _params(args), _family(args)
    grid = verify.Grid(args.z_min, args.z_max, args.n)
    report = verify.residuals(params, family, SYSTEM_CHOICES[args.system], grid)
    doc = {"version": __version__, "tol": args.tol, "passed": report.max_rel_residual <= args.tol}
    doc.update(report.to_dict())
    print(json.dumps(doc, indent=2))
    return 0 if doc["passed"] else 1


def _cmd_integrate(args) -> int:
    params, family = _params(args), _family(args)
    cfg = verify.IntegratorConfig(args.rel_tol, args.abs_tol, args.max_step)
    dev = verify.integrate_and_compare(params, family, args.z0, args.z1, cfg)
    sigma = solutions.resolve_sigma(params, family)
    doc = {"version": __version__, "params": params.with_sigma(sigma).to_dict(), "family": family.label,
           "interval": [args.z0, args.z1], "config": vars(cfg), "max_deviation": dev, "tol": args.tol,
           "passed": dev <= args.tol}
    print(json.dumps(doc, indent=2))
    return 0 if doc["passed"] else 1


def _cmd_flat(args) -> int:
    u = PhysicalUnits(rho=args.rho[0], hbar=args.hbar, c=args.c, epsilon_phys=args.epsilon, m_phys=args.m,
                      P1=args.P1, P2=args.P2)
    rows = verify.flat_limit_study(u, args.rho)
    if rows[0].evanescent:
        log.warning("p3^2 < 0: evanescent flat mode, comparing with exp(-|p3| Z)")
    fields = u.to_dict()
    del fields["rho"]
    header = _header("flat-limit", units=fields, rho=args.rho,
                     p3=[rows[0].p3.real, rows[0].p3.imag], evanescent=rows[0].evanescent)
    _emit(verify.flat_limit_csv(rows, header), args.out)
    decreasing = all(b.residual < a.residual for a, b in zip(rows, rows[1:]))
    return 0 if decreasing else 1


def _cmd_scatter(args) -> int:
    rows = scattering.sweep(args.k_list, args.q_list)
    header = _header("scatter", k_list=args.k_list, q_list=args.q_list, convention="R = A/B, A e^{ikz} + B e^{-ikz}")
    _emit(scattering.sweep_csv(rows, header), args.out)
    ok = all(abs(r.numeric.abs_R - 1) <= 1e-7
             and abs(scattering.phase_difference(r.numeric.phase, r.analytic.phase)) <= 1e-6 for r in rows)
    return 0 if ok else 1


COMMANDS = {
    "verify-derivation": _cmd_verify,
    "eval": _cmd_eval,
    "residuals": _cmd_residuals,
    "integrate-check": _cmd_integrate,
    "flat-limit": _cmd_flat,
    "scatter": _cmd_scatter,
}


def _configure_logging() -> None:
    # unset: warnings (degenerate families, E < 0) still reach stderr
    level = os.environ.get("HYPERWAVE_LOG", "warning").lower()
    levels = {"error": logging.ERROR, "warning": logging.WARNING, "info": logging.INFO, "debug": logging.DEBUG}
    if level not in levels:
        level = "warning"
    if not log.handlers:
        h = logging.StreamHandler(sys.stderr)
        h.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
        log.addHandler(h)
    log.setLevel(levels[level])
    log.propagate = False


def run(argv: Optional[Sequence[str]] = None) -> int:
    _configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            code = COMMANDS[args.command](args)
        for msg in dict.fromkeys(str(w.message) for w in caught):
            log.warning("%s", msg)
        return code
    except (ValueError, KeyError, special.DomainError, special.ConvergenceError) as exc:
        print(f"hyperwave {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (ArithmeticError, verify.IntegrationFailure) as exc:
        print(f"hyperwave {args.command}: failed: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
