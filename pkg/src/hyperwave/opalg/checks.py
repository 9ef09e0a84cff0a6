"""Machine checks of the exact derivation steps.

Each ``verify_*`` function returns a :class:`Report`. A check passes only when
the relevant difference is the literal zero operator or expression in the
exact coefficient ring.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from . import systems as S
from .bessel import BesselExpr, rewrite_bessel
from .operators import D, DiffOperator, OperatorMatrix, compose, right_remainder
from .ring import I, CoeffPoly, const, ez

# gamma enters the Pauli-level equations only through gamma**2 == 1/2
GAMMA_SQUARED = Fraction(1, 2)


class EliminationError(ArithmeticError):
    """Raised when a non-dynamical component cannot be solved for."""


@dataclass(frozen=True)
class Report:
    check_name: str
    passed: bool
    detail: str
    parts: Tuple[Tuple[str, bool, str], ...] = field(default=(), compare=False)

    def to_dict(self) -> dict:
        return {"check_name": self.check_name, "passed": self.passed, "detail": self.detail}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _first_term(op: DiffOperator) -> str:
    """Human-readable first non-cancelling term (order, monomial, coefficient)."""
    order = min(op.terms)
    coeff = op.terms[order]
    mono = min(coeff.terms)
    single = CoeffPoly({mono: coeff.terms[mono]})
    return f"order {order}: {single}"


def _compare_rows(name: str, got: OperatorMatrix, want: OperatorMatrix, row_names: Sequence[str],
                  col_names: Sequence[str]) -> Report:
    diff = got - want
    parts = []
    failures = []
    for i, rname in enumerate(row_names):
        bad = [(col_names[j], e) for j, e in enumerate(diff.rows[i]) if not e.is_zero()]
        if bad:
            col, op = bad[0]
            msg = f"{rname}: residual on {col}, {_first_term(op)}"
            failures.append(msg)
            parts.append((rname, False, msg))
        else:
            parts.append((rname, True, "zero difference"))
    if failures:
        return Report(name, False, "; ".join(failures), tuple(parts))
    return Report(name, True, f"all {len(row_names)} equations cancel exactly: " + ", ".join(row_names), tuple(parts))


# -- elimination of Phi0, H1, H2, H3 ---------------------------------------

def verify_elimination(system: Optional[OperatorMatrix] = None, mass=None) -> Report:
    """Substitute the elimination formulas into the first-order system.

    ``system`` defaults to :func:`systems.system_one`; ``mass`` optionally
    replaces the symbol M by a value before eliminating.
    """
    system = S.system_one() if system is None else system
    if mass is not None:
        system = system.map(lambda op: op.subs("M", mass))
    # the eliminated components must carry an invertible -M pivot
    pivots = [(0, 0)] + [(r, c) for r, c in zip(S.CONSTRAINT_ROWS[1:], (7, 8, 9))]
    for r, c in pivots:
        if system[r, c] != DiffOperator.mul(-S.M):
            raise EliminationError(
                f"elimination divides by M but the {S.FULL[c]} pivot of {S.FULL_ROW_NAMES[r]} is {system[r, c]!r}"
            )
    sub = S.elimination_substitution()
    reduced = system.select_rows(S.REDUCED_ROWS) @ sub
    report = _compare_rows("elimination", reduced, S.system_two(), S.REDUCED_ROW_NAMES, S.DYNAMICAL)
    leftover = system.select_rows(S.CONSTRAINT_ROWS) @ sub
    if not leftover.is_zero():
        names = [S.FULL_ROW_NAMES[r] for r in S.CONSTRAINT_ROWS]
        bad = _compare_rows("constraints", leftover, OperatorMatrix.zeros(4, 6), names, S.DYNAMICAL)
        return Report("elimination", False, "elimination formulas do not solve the constraints: " + bad.detail,
                      report.parts + bad.parts)
    return report


# -- second-order equations from the first-order pair ----------------------

def second_order_composition(component: int = 1) -> Tuple[DiffOperator, DiffOperator]:
    """(composed operator, 4 sigma^2 * target bracket) for Psi1 (``component=1``) or Psi3.

    For Psi1: ``e^{2z} B3 e^{-2z} B1 - (a^2+b^2)^2 e^{4z}``, obtained by
    multiplying the second pair equation by (a-ib)^2 and inserting the first.
    """
    b1, b3 = S.pair_brackets()
    outer, inner = (b3, b1) if component == 1 else (b1, b3)
    composed = compose(DiffOperator.mul(ez(2)), compose(outer, compose(DiffOperator.mul(ez(-2)), inner)))
    composed = composed - S.q2 * S.q2 * ez(4)
    target = DiffOperator.mul(4 * S.sigma * S.sigma) * S.second_order_bracket(+1 if component == 1 else -1)
    return composed, target


def verify_second_order_reduction() -> Report:
    parts = []
    for comp in (1, 3):
        composed, target = second_order_composition(comp)
        diff = composed - target
        name = f"Psi{comp}"
        if diff.is_zero():
            parts.append((name, True, "composed pair minus 4 sigma^2 * bracket is the zero operator"))
        else:
            parts.append((name, False, f"non-cancelling {_first_term(diff)}"))
    ok = all(p[1] for p in parts)
    return Report("second_order_reduction", ok, "; ".join(f"{n}: {d}" for n, _, d in parts), tuple(parts))


# -- Bessel recurrence identity --------------------------------------------

def bessel_pairing_expr(solution_class: str = "I", equation: int = 1) -> BesselExpr:
    """First-order pair equation applied to the class I or II Bessel pair.

    Class I: ``fbar1 = J_{nu}``, ``fbar3 = J_{-mu}``; class II: ``J_{-nu}``, ``J_{mu}``,
    with ``nu = 1 - i sigma`` and ``mu = 1 + i sigma``. The base order is
    ``-i sigma`` (class I) or ``+i sigma`` (class II).
    """
    if solution_class == "I":
        base = -I * S.sigma
        o1, o3 = S.nu, -S.mu
    else:
        base = I * S.sigma
        o1, o3 = -S.nu, S.mu
    f1 = BesselExpr.J(base, o1)
    f3 = BesselExpr.J(base, o3)
    x2 = const(1)  # x**2 carried by xpow
    if equation == 1:
        first = (f1.theta() + f1.scale(S.nu)).scale(2 * I * S.sigma) + f1.scale(x2, 2)
        return first + f3.scale(x2, 2)
    first = (f3.theta() + f3.scale(S.mu)).scale(-2 * I * S.sigma) + f3.scale(x2, 2)
    return first + f1.scale(x2, 2)


def recurrence_identity_expr() -> BesselExpr:
    """``2 i sigma J_{-i sigma} + x J_{-i sigma + 1} + x J_{-i sigma - 1}``."""
    base = -I * S.sigma
    return (
        BesselExpr.J(base, coeff=2 * I * S.sigma)
        + BesselExpr.J(base, base + 1, xpow=1)
        + BesselExpr.J(base, base - 1, xpow=1)
    )


def verify_bessel_identity() -> Report:
    parts = []
    nf = rewrite_bessel(recurrence_identity_expr())
    parts.append(("recurrence identity", nf.is_zero(), "normal form 0" if nf.is_zero() else f"normal form {nf}"))
    for cls in ("I", "II"):
        for eq in (1, 2):
            nf = rewrite_bessel(bessel_pairing_expr(cls, eq))
            parts.append((f"class {cls} pair equation {eq}", nf.is_zero(),
                          "normal form 0" if nf.is_zero() else f"normal form {nf}"))
    ok = all(p[1] for p in parts)
    return Report("bessel_recurrence_identity", ok, "; ".join(f"{n}: {d}" for n, _, d in parts), tuple(parts))


# -- variable change x = i sqrt(a^2+b^2) e^z in the first-order pair ----------

def default_transport_substitution() -> Tuple[CoeffPoly, CoeffPoly]:
    """Multipliers s1, s3 with ``Psi1 = s1 fbar1``, ``Psi3 = s3 fbar3``.

    ``Psi1 = x^2 f1 = x^2 fbar1 / (a+ib) = -(a-ib) e^{2z} fbar1``, mirrored for Psi3.
    """
    return -S.a_minus * ez(2), -S.a_plus * ez(2)


def verify_constraint_transport(substitution: Optional[Tuple[CoeffPoly, CoeffPoly]] = None) -> Report:
    """Check that the pair system becomes the rescaled Bessel pair.

    Row i of ``pair_system @ diag(s1, s3)`` must equal ``s_i * (transported row i)``.
    """
    s1, s3 = default_transport_substitution() if substitution is None else substitution
    got = S.pair_system() @ OperatorMatrix.diag([DiffOperator.mul(s1), DiffOperator.mul(s3)])
    want = OperatorMatrix.diag([DiffOperator.mul(s1), DiffOperator.mul(s3)]) @ S.transported_pair_system()
    report = _compare_rows("constraint_transport", got, want, ("fbar1 equation", "fbar3 equation"), ("fbar1", "fbar3"))
    if not report.passed:
        return report
    nu_derived = transported_order_constants()
    detail = report.detail + f"; derived orders nu = {nu_derived[0]}, mu = {nu_derived[1]}"
    return Report(report.check_name, True, detail, report.parts)


def transported_order_constants() -> Tuple[CoeffPoly, CoeffPoly]:
    """Read nu, mu back from the constant terms ``+-2 i sigma * order`` of the rescaled pair."""
    s1, s3 = default_transport_substitution()
    got = S.pair_system() @ OperatorMatrix.diag([DiffOperator.mul(s1), DiffOperator.mul(s3)])
    # at a=1, b=0 the multipliers are monomials and can be divided out
    at = lambda c: c.subs("a", 1).subs("b", 0)
    c1 = at(got[0, 0].coeff(0)) * at(s1) ** -1 - at(S.x2)
    c3 = at(got[1, 1].coeff(0)) * at(s3) ** -1 - at(S.x2)
    inv = (2 * I * S.sigma) ** -1
    return c1 * inv, -(c3 * inv)


# -- sigma = 0 branch ------------------------------------------------------

def sigma0_residual(drop_coupling: bool = False, gamma_squared: Optional[Fraction] = GAMMA_SQUARED) -> DiffOperator:
    """Remainder of the Psi2 equation, written on Psibar1, modulo the Psibar1 equation.

    The Psi2 equation is multiplied through by ``a^2 + b^2`` so that the
    substitution ``Psi2 = i/(gamma (a^2+b^2)) d/dz Psibar1`` stays polynomial.
    With ``gamma_squared`` set, gamma is reduced modulo ``gamma**2 == gamma_squared``.
    """
    L = S.barred_bracket()
    expr = compose(L, DiffOperator.mul(I * S.gamma ** -1) * D)
    if not drop_coupling:
        expr = expr - DiffOperator.mul(4 * I * S.gamma * S.q2 * ez(2))
    rem = right_remainder(expr, L)
    if gamma_squared is not None:
        rem = rem.map_coeffs(lambda c: c.reduce_square("gamma", gamma_squared))
    return rem


def verify_sigma0_identity(drop_coupling: bool = False, gamma_squared: Optional[Fraction] = GAMMA_SQUARED,
                           a_b_zero: bool = False) -> Report:
    rem = sigma0_residual(drop_coupling, gamma_squared)
    if a_b_zero:
        rem = rem.subs("a", 0).subs("b", 0)
    raw = sigma0_residual(drop_coupling, None)
    pair = (rem.coeff(0), rem.coeff(1))
    norm = "with gamma^2 = %s" % gamma_squared if gamma_squared is not None else "with gamma unconstrained"
    if rem.is_zero():
        detail = f"residual in (Psibar1, Psibar1') is (0, 0) {norm}"
        if not raw.is_zero():
            detail += f"; unconstrained residual ({raw.coeff(0)}, {raw.coeff(1)})"
        return Report("sigma0_consistency", True, detail)
    return Report("sigma0_consistency", False, f"nonzero residual ({pair[0]}, {pair[1]}) {norm}")


def verify_sigma0_reduction() -> Report:
    """The Pauli system with the sigma = 0 relations imposed gives the sigma = 0 system.

    Parametrise ``Psi1 = (a-ib) u``, ``Psi3 = -(a+ib) u``, ``Psi2 = (i/gamma) e^{-z} (D-1) u``.
    """
    param = OperatorMatrix([
        [DiffOperator.mul(S.a_minus)],
        [DiffOperator.mul(I * S.gamma ** -1 * ez(-1)) * (D - 1)],
        [DiffOperator.mul(-S.a_plus)],
    ])
    rel = S.sigma0_relations() @ param
    parts = [("sigma0 relations on parametrisation", rel.is_zero(), "identically satisfied" if rel.is_zero() else repr(rel))]
    pauli = S.pauli_system() @ param
    target = S.sigma0_system() @ param
    for i, name in enumerate(("Psi1 row", "Psi3 row", "Psi2 row")):
        ok = pauli.rows[i][0] == target.rows[i][0]
        parts.append((name, ok, "matches" if ok else f"differs: {_first_term(pauli.rows[i][0] - target.rows[i][0])}"))
    ok = all(p[1] for p in parts)
    return Report("sigma0_reduction", ok, "; ".join(f"{n}: {d}" for n, _, d in parts), tuple(parts))


def all_checks() -> List[Report]:
    return [
        verify_elimination(),
        verify_second_order_reduction(),
        verify_bessel_identity(),
        verify_sigma0_identity(),
        verify_constraint_transport(),
        verify_sigma0_reduction(),
    ]
