"""Closed-form quasi-plane-wave solutions for the big components (Psi1, Psi2, Psi3).

All components are finite sums ``sum_p x^p (A_p J_alpha(x) + B_p theta J_alpha(x))``
with ``x = i sqrt(a^2+b^2) e^z`` and ``theta = x d/dx``. Because ``d/dz = theta``
on this locus, exact z-derivatives of any order follow from Bessel's equation
``theta^2 J = (alpha^2 - x^2) J``; no finite differences are involved anywhere.
"""
from __future__ import annotations

import cmath
import csv
import io
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from . import special
from .modes import DegenerateMomentaError, ModeParameters, sigma_values


class Regime(str, Enum):
    SIGMA_NONZERO = "sigma_nonzero"
    SIGMA_ZERO = "sigma_zero"


class SolutionClass(str, Enum):
    I = "I"
    II = "II"


class DegenerateSolutionWarning(UserWarning):
    """Class I and class II coincide (sigma = 0, 2EM = 1)."""


@dataclass(frozen=True)
class SolutionFamily:
    regime: Regime
    solution_class: SolutionClass = SolutionClass.I
    sigma_branch: Optional[str] = "+"

    def __post_init__(self):
        object.__setattr__(self, "regime", Regime(self.regime))
        object.__setattr__(self, "solution_class", SolutionClass(self.solution_class))
        if self.sigma_branch not in ("+", "-", None):
            raise ValueError("sigma_branch must be '+', '-' or None")
        if self.regime is Regime.SIGMA_NONZERO and self.sigma_branch is None:
            raise ValueError("the sigma != 0 regime needs a sigma branch")

    @classmethod
    def nonzero(cls, solution_class="I", branch="+") -> "SolutionFamily":
        return cls(Regime.SIGMA_NONZERO, SolutionClass(solution_class), branch)

    @classmethod
    def zero(cls, solution_class="I") -> "SolutionFamily":
        return cls(Regime.SIGMA_ZERO, SolutionClass(solution_class), None)

    @property
    def label(self) -> str:
        if self.regime is Regime.SIGMA_ZERO:
            return f"sigma0-{self.solution_class.value}"
        return f"sigma{self.sigma_branch}-{self.solution_class.value}"


@dataclass(frozen=True)
class WaveTriple:
    psi1: complex
    psi2: complex
    psi3: complex

    def __post_init__(self):
        for v in (self.psi1, self.psi2, self.psi3):
            if not cmath.isfinite(v):
                raise ArithmeticError("non-finite wave component")

    def as_tuple(self) -> Tuple[complex, complex, complex]:
        return (self.psi1, self.psi2, self.psi3)


# -- exact derivative bookkeeping ------------------------------------------

class _Jet:
    """``sum_alpha sum_p x^p (A[alpha][p] J_alpha + B[alpha][p] theta J_alpha)``."""

    def __init__(self, terms: Optional[Dict[complex, Tuple[Dict[int, complex], Dict[int, complex]]]] = None):
        self.terms = terms or {}

    @classmethod
    def bessel(cls, order: complex, coeff: complex = 1.0, xpow: int = 0) -> "_Jet":
        return cls({order: ({xpow: complex(coeff)}, {})})

    def __add__(self, other: "_Jet") -> "_Jet":
        out = {k: (dict(A), dict(B)) for k, (A, B) in self.terms.items()}
        for order, (A, B) in other.terms.items():
            tA, tB = out.setdefault(order, ({}, {}))
            for p, c in A.items():
                tA[p] = tA.get(p, 0j) + c
            for p, c in B.items():
                tB[p] = tB.get(p, 0j) + c
        return _Jet(out)

    def scale(self, c: complex, xpow: int = 0) -> "_Jet":
        return _Jet({
            k: ({p + xpow: c * v for p, v in A.items()}, {p + xpow: c * v for p, v in B.items()})
            for k, (A, B) in self.terms.items()
        })

    def theta(self) -> "_Jet":
        out = {}
        for order, (A, B) in self.terms.items():
            nA: Dict[int, complex] = {}
            nB: Dict[int, complex] = {}
            for p, c in A.items():
                nA[p] = nA.get(p, 0j) + p * c
                nB[p] = nB.get(p, 0j) + c
            for p, c in B.items():
                nB[p] = nB.get(p, 0j) + p * c
                nA[p] = nA.get(p, 0j) + order * order * c
                nA[p + 2] = nA.get(p + 2, 0j) - c
            out[order] = (nA, nB)
        return _Jet(out)

    def orders(self) -> Iterable[complex]:
        return self.terms.keys()

    def value(self, x: np.ndarray, cache: Mapping[complex, Tuple[np.ndarray, np.ndarray]]) -> np.ndarray:
        total = np.zeros_like(x)
        for order, (A, B) in self.terms.items():
            J, tJ = cache[order]
            for p, c in A.items():
                if c:
                    total = total + c * x ** p * J
            for p, c in B.items():
                if c:
                    total = total + c * x ** p * tJ
        return total


def _bessel_pair(order: complex, x: np.ndarray, domain: special.EvalDomain):
    """J_alpha(x) and theta J_alpha(x) = x J_{alpha-1}(x) - alpha J_alpha(x)."""
    J = special.bessel_j(order, x, domain)
    return J, x * special.bessel_j(order - 1, x, domain) - order * J


# -- family resolution -----------------------------------------------------

def resolve_sigma(params: ModeParameters, family: SolutionFamily) -> complex:
    """The helicity eigenvalue selected by ``family``; checks a preset sigma."""
    if family.regime is Regime.SIGMA_ZERO:
        sigma = 0j
    else:
        plus, minus = sigma_values(params.E, params.M)
        sigma = plus if family.sigma_branch == "+" else minus
        if sigma == 0:
            raise ValueError("sigma != 0 regime requested but 2EM = 0")
    if params.sigma is not None and abs(complex(params.sigma) - sigma) > 1e-12 * max(1.0, abs(sigma)):
        raise ValueError(f"preset sigma {params.sigma} does not match family {family.label} ({sigma})")
    return sigma


def orders(params: ModeParameters, family: SolutionFamily) -> Tuple[complex, complex]:
    """Bessel orders used for (Psi1, Psi3)."""
    if family.regime is Regime.SIGMA_ZERO:
        lam = cmath.sqrt(1.0 - params.two_em)
        s = 1 if family.solution_class is SolutionClass.I else -1
        return s * lam, s * lam
    sigma = resolve_sigma(params, family)
    nu, mu = 1 - 1j * sigma, 1 + 1j * sigma
    if family.solution_class is SolutionClass.I:
        return nu, -mu
    return -nu, mu


def is_degenerate(params: ModeParameters, family: SolutionFamily) -> bool:
    return family.regime is Regime.SIGMA_ZERO and abs(1.0 - params.two_em) == 0.0


@dataclass(frozen=True)
class _Construction:
    psi1: _Jet
    psi2: _Jet
    psi3: Optional[_Jet]
    psi3_factor: Optional[complex]  # sigma = 0: Psi3 = factor * Psi1, applied bitwise
    orders: Tuple[complex, complex]


def _construct(params: ModeParameters, family: SolutionFamily) -> _Construction:
    if params.q == 0:
        raise DegenerateMomentaError("solutions need (a, b) != (0, 0)")
    ap = complex(params.a, params.b)
    am = complex(params.a, -params.b)
    q = params.q
    g = params.gamma
    if family.regime is Regime.SIGMA_ZERO:
        if family.sigma_branch is not None:
            warnings.warn("sigma_branch is ignored in the sigma = 0 regime", UserWarning, stacklevel=3)
        order, _ = orders(params, family)
        if is_degenerate(params, family) and family.solution_class is SolutionClass.II:
            warnings.warn("2EM = 1: class II coincides with class I (order 0); returning class I",
                          DegenerateSolutionWarning, stacklevel=3)
        psi1 = _Jet.bessel(order, 1 / ap, 2)
        # Psi2 = i e^{-z} / (gamma (a - ib)) (d/dz - 1) Psi1, with e^{-z} = i q / x
        d1 = psi1.theta() + psi1.scale(-1.0)
        psi2 = d1.scale(-q / (g * am), -1)
        return _Construction(psi1, psi2, None, -ap / am, (order, order))
    sigma = resolve_sigma(params, family)
    o1, o3 = orders(params, family)
    psi1 = _Jet.bessel(o1, 1 / ap, 2)
    psi3 = _Jet.bessel(o3, 1 / am, 2)
    # Psi2 = (gamma/sigma) e^z [(a+ib) Psi1 + (a-ib) Psi3], with e^z = x / (i q)
    psi2 = (_Jet.bessel(o1, 1.0, 3) + _Jet.bessel(o3, 1.0, 3)).scale(g / (sigma * 1j * q))
    return _Construction(psi1, psi2, psi3, None, (o1, o3))


def _x_of(params: ModeParameters, z: np.ndarray) -> np.ndarray:
    return 1j * params.q * np.exp(z)


def derivative_table(params: ModeParameters, family: SolutionFamily, z, max_order: int = 3,
                     domain: special.EvalDomain = special.DEFAULT_DOMAIN) -> np.ndarray:
    """Array ``T[j, n, i]`` = n-th z-derivative of Psi_{j+1} at ``z[i]``.

    Derivatives are exact (through Bessel's equation), ``0 <= n <= max_order``.
    """
    z = np.atleast_1d(np.asarray(z, dtype=float))
    con = _construct(params, family)
    x = _x_of(params, z)
    if np.any(np.abs(x) > domain.max_abs_argument):
        raise special.DomainError(
            f"|x| = {np.max(np.abs(x)):.4g} exceeds the series ceiling {domain.max_abs_argument}")
    cache = {o: _bessel_pair(o, x, domain) for o in set(con.orders)}
    out = np.empty((3, max_order + 1, z.size), dtype=complex)
    j1, j2, j3 = con.psi1, con.psi2, con.psi3
    for n in range(max_order + 1):
        out[0, n] = j1.value(x, cache)
        out[1, n] = j2.value(x, cache)
        if j3 is None:
            # scalar products: vectorised complex multiply may differ in the last ulp
            out[2, n] = [con.psi3_factor * complex(v) for v in out[0, n]]
        else:
            out[2, n] = j3.value(x, cache)
        if n < max_order:
            j1, j2 = j1.theta(), j2.theta()
            j3 = None if j3 is None else j3.theta()
    return out


def evaluate(params: ModeParameters, family: SolutionFamily, z: float,
             domain: special.EvalDomain = special.DEFAULT_DOMAIN) -> WaveTriple:
    """(Psi1, Psi2, Psi3) at a single point."""
    t = derivative_table(params, family, [z], 0, domain)
    return WaveTriple(complex(t[0, 0, 0]), complex(t[1, 0, 0]), complex(t[2, 0, 0]))


def evaluate_grid(params: ModeParameters, family: SolutionFamily, z_min: float, z_max: float, n: int,
                  domain: special.EvalDomain = special.DEFAULT_DOMAIN) -> List[Tuple[float, WaveTriple]]:
    """Uniform grid of ``n`` points on ``[z_min, z_max]``."""
    if not z_min < z_max:
        raise ValueError("z_min must be below z_max")
    if n < 2:
        raise ValueError("n must be at least 2")
    zs = np.linspace(z_min, z_max, n)
    # point-by-point through the scalar path keeps grid values bitwise equal to evaluate()
    return [(float(z), evaluate(params, family, float(z), domain)) for z in zs]


def intermediates(params: ModeParameters, family: SolutionFamily, z: float) -> Dict[str, complex]:
    """Auxiliary functions of the construction at ``z`` (debug output)."""
    x = complex(_x_of(params, np.asarray(z)))
    ap = complex(params.a, params.b)
    am = complex(params.a, -params.b)
    w = evaluate(params, family, z)
    out = {"x": x, "f1": w.psi1 / x ** 2, "f3": w.psi3 / x ** 2}
    out["fbar1"] = ap * out["f1"]
    out["fbar3"] = am * out["f3"]
    if family.regime is Regime.SIGMA_ZERO:
        out["g1"] = out["fbar1"]
        out["psibar1"] = ap * cmath.exp(-z) * w.psi1
        out["psibar3"] = am * cmath.exp(-z) * w.psi3
    else:
        out["sigma"] = resolve_sigma(params, family)
    o1, o3 = orders(params, family)
    out["order1"], out["order3"] = o1, o3
    return out


CSV_COLUMNS = ("z", "psi1_re", "psi1_im", "psi2_re", "psi2_im", "psi3_re", "psi3_im")


def grid_to_csv(rows: Sequence[Tuple[float, WaveTriple]], header_lines: Sequence[str] = ()) -> str:
    """CSV text: optional '# ' comment lines, then the column header and one row per point."""
    buf = io.StringIO()
    for line in header_lines:
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for z, t in rows:
        w.writerow([repr(float(z))] + [repr(float(v)) for c in t.as_tuple() for v in (c.real, c.imag)])
    return buf.getvalue()
