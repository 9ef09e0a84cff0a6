"""Reflection off the exponential barrier hidden in the sigma = 0 radial equations.

Removing the first-derivative term by an exponential substitution turns both
sigma = 0 equations into the Schroedinger form

    phi'' + k^2 phi - q^2 e^{2z} phi = 0,   k^2 = 2EM - 1,  q^2 = a^2 + b^2.

The barrier is impenetrable, so the solution bounded at z -> +inf is unique up
to a constant: it is K_{ik}(q e^z). Far to the left it splits into
``A e^{ikz} + B e^{-ikz}``; the reflection coefficient is reported as
``R = A / B``. Both the numeric and the analytic path use this convention.
"""
from __future__ import annotations

import cmath
import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from . import special
from .modes import ModeParameters, sigma_values
from .opalg import systems as S
from .opalg.operators import DiffOperator
from .opalg.ring import SYMBOLS


class SubThresholdError(ValueError):
    """2EM <= 1: no propagating channel at z -> -inf."""


class IllConditionedError(ArithmeticError):
    pass


@dataclass(frozen=True)
class BarrierProblem:
    k: float
    q: float

    def __post_init__(self):
        if not (self.k > 0 and math.isfinite(self.k)):
            raise ValueError("k must be positive and finite")
        if not (self.q > 0 and math.isfinite(self.q)):
            raise ValueError("q must be positive and finite")


@dataclass(frozen=True)
class ReflectionResult:
    R: complex
    abs_R: float
    phase: float

    @classmethod
    def from_R(cls, R: complex) -> "ReflectionResult":
        R = complex(R)
        return cls(R, float(abs(R)), float(cmath.phase(R)))


# -- reduction to Schroedinger form ----------------------------------------

FORMS = {
    # bracket acting on Psi1 and the exponent k of the substitution Psi = e^{kz} phi
    "17a": (S.sigma0_bracket, 2),
    "19c": (S.barred_bracket, 1),
}


def schroedinger_operator(form: str = "17a") -> DiffOperator:
    """The sigma = 0 bracket after the substitution that removes its d/dz term."""
    bracket, shift = FORMS[form]
    return bracket().conjugate_by_exp(shift)


def _constants(op: DiffOperator, values) -> tuple:
    """(k^2, q^2) from an operator of the form D^2 + k^2 - q^2 e^{2z}."""
    if op.order != 2 or op.coeff(2) != 1 or not op.coeff(1).is_zero():
        raise ArithmeticError(f"operator is not of Schroedinger form: {op}")
    k2 = 0j
    q2 = 0j
    for mono, c in op.coeff(0).terms.items():
        v = complex(c)
        for name, e in zip(SYMBOLS, mono):
            if e:
                v *= complex(values[name]) ** e
        if mono[-1] == 0:
            k2 += v
        elif mono[-1] == 2:
            q2 -= v
        else:
            raise ArithmeticError(f"unexpected e^{{{mono[-1]}z}} term")
    return k2, q2


def to_barrier(params: ModeParameters, form: str = "17a") -> BarrierProblem:
    """Barrier (k, q) of the sigma = 0 equations, via either substitution route."""
    values = {"sigma": 0.0, "E": params.E, "M": params.M, "a": params.a, "b": params.b, "gamma": params.gamma}
    k2, q2 = _constants(schroedinger_operator(form), values)
    if k2.real <= 0:
        raise SubThresholdError(f"2EM = {params.two_em:g} <= 1: no propagating channel")
    return BarrierProblem(math.sqrt(k2.real), math.sqrt(q2.real))


def sigma_nonzero_wavenumber(params: ModeParameters, branch: str = "+") -> complex:
    """Experimental: complex k of the sigma != 0 Psi1 equation after Psi1 = e^{2z} phi.

    The reduced equation is phi'' + (sigma + i)^2 phi - q^2 e^{2z} phi = 0, so k
    is not real and no unitary reflection statement applies.
    """
    plus, minus = sigma_values(params.E, params.M)
    sigma = plus if branch == "+" else minus
    op = S.second_order_bracket(+1).conjugate_by_exp(2)
    values = {"sigma": sigma, "E": params.E, "M": params.M, "a": params.a, "b": params.b, "gamma": params.gamma}
    k2, _ = _constants(op, values)
    k = cmath.sqrt(k2)
    # pick the root continuous with sigma + i
    return k if abs(k - (sigma + 1j)) <= abs(k + (sigma + 1j)) else -k


# -- reflection coefficient ------------------------------------------------

MATCH_ARGUMENT = 30.0
FAR_RATIO = 1e-6


def default_z_match(p: BarrierProblem) -> float:
    return math.log(MATCH_ARGUMENT / p.q)


def default_z_far(p: BarrierProblem) -> float:
    return math.log(FAR_RATIO * p.k / p.q)


def reflection_numeric(p: BarrierProblem, z_match: Optional[float] = None, z_far: Optional[float] = None,
                       rtol: float = 1e-12, atol: float = 1e-14) -> ReflectionResult:
    """Integrate the decaying solution leftward and split it into plane waves at ``z_far``."""
    z_match = default_z_match(p) if z_match is None else float(z_match)
    z_far = default_z_far(p) if z_far is None else float(z_far)
    if not z_far < z_match:
        raise ValueError("z_far must lie left of z_match")
    w_match = p.q * math.exp(z_match)
    if w_match < 25.0:
        raise ValueError(f"q e^z_match = {w_match:.3g} < 25: growing solution not negligible")
    if p.q * math.exp(z_far) > FAR_RATIO * p.k * (1 + 1e-12):
        raise ValueError("q e^z_far must not exceed 1e-6 k")

    K = special.bessel_k_imag_order(p.k, w_match).real
    dK = special.bessel_k_imag_order(p.k, w_match, derivative=True).real
    # normalise phi(z_match) = 1; d/dz = w d/dw
    y0 = np.array([1.0 + 0j, w_match * dK / K + 0j])
    k2, q2 = p.k ** 2, p.q ** 2

    def rhs(z, y):
        return np.array([y[1], (q2 * math.exp(2 * z) - k2) * y[0]])

    sol = solve_ivp(rhs, (z_match, z_far), y0, method="DOP853", rtol=rtol, atol=atol)
    if not sol.success:
        raise ArithmeticError(sol.message)
    phi, dphi = sol.y[0, -1], sol.y[1, -1]
    ik = 1j * p.k
    A = 0.5 * (phi + dphi / ik) * cmath.exp(-ik * z_far)
    B = 0.5 * (phi - dphi / ik) * cmath.exp(ik * z_far)
    if abs(A) < 1e-14 and abs(B) < 1e-14:
        raise IllConditionedError("both plane-wave amplitudes vanish")
    return ReflectionResult.from_R(A / B)


def reflection_analytic(p: BarrierProblem) -> ReflectionResult:
    """R = Gamma(-ik)/Gamma(ik) (q/2)^{2ik}, from the small-argument split of K_{ik}."""
    ik = 1j * p.k
    R = special.gamma(-ik) / special.gamma(ik) * cmath.exp(2 * ik * math.log(p.q / 2))
    if abs(abs(R) - 1.0) > 1e-14:
        raise ArithmeticError(f"|R| = {abs(R)!r} is not unit for real k")
    return ReflectionResult.from_R(R)


def phase_difference(a: float, b: float) -> float:
    """a - b wrapped into (-pi, pi]."""
    d = math.remainder(a - b, 2 * math.pi)
    return math.pi if d == -math.pi else d


@dataclass(frozen=True)
class SweepRow:
    k: float
    q: float
    numeric: ReflectionResult
    analytic: ReflectionResult


def sweep(k_list: Iterable[float], q_list: Iterable[float]) -> List[SweepRow]:
    qs = list(q_list)
    out = []
    for k in k_list:
        for q in qs:
            p = BarrierProblem(float(k), float(q))
            out.append(SweepRow(p.k, p.q, reflection_numeric(p), reflection_analytic(p)))
    return out


def sweep_csv(rows: Sequence[SweepRow], header_lines: Sequence[str] = ()) -> str:
    buf = io.StringIO()
    for line in header_lines:
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("k", "q", "abs_R", "phase"))
    for r in rows:
        w.writerow((repr(r.k), repr(r.q), repr(r.numeric.abs_R), repr(r.numeric.phase)))
    return buf.getvalue()
