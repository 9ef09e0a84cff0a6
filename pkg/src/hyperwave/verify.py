"""Numerical residuals of every differential system against the closed forms.

Each system is taken from :mod:`hyperwave.opalg.systems` (the same exact
operator matrices the symbolic checks use) and applied to the analytic
derivative table of :mod:`hyperwave.solutions`. The residual of one equation
at one point is ``|sum of terms| / max |term|``, so a vanishing e^{2z} term at
the left end of the grid cannot make a pass vacuous.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from . import solutions as sol
from .modes import ModeParameters, PhysicalUnits
from .opalg import systems as S
from .opalg.operators import OperatorMatrix
from .opalg.ring import SYMBOLS
from .solutions import Regime, SolutionFamily

SYSTEM_IDS = ("sys7", "sys10", "sys11c", "sys12", "sys14c", "sys16_17", "sys19")
_NONZERO_ONLY = {"sys11c", "sys12", "sys14c"}
_ZERO_ONLY = {"sys16_17", "sys19"}


class FamilyMismatchError(ValueError):
    """The chosen system does not apply to the chosen solution family."""


class IntegrationFailure(RuntimeError):
    pass


@dataclass(frozen=True)
class Grid:
    z_min: float = -3.0
    z_max: float = 1.0
    n: int = 81

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.n > 1 and not self.z_min < self.z_max:
            raise ValueError("z_min must be below z_max")

    def points(self) -> np.ndarray:
        if self.n == 1:
            return np.array([self.z_min])
        return np.linspace(self.z_min, self.z_max, self.n)


@dataclass(frozen=True)
class ResidualReport:
    system_id: str
    max_rel_residual: float
    grid: Tuple[float, float, int]
    params_echo: ModeParameters
    family: str = ""
    per_equation: Tuple[float, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if not self.max_rel_residual >= 0:
            raise ValueError("residual must be non-negative")

    def to_dict(self) -> dict:
        return {
            "system_id": self.system_id,
            "max_rel_residual": self.max_rel_residual,
            "grid": list(self.grid),
            "params_echo": self.params_echo.to_dict(),
            "family": self.family,
            "per_equation": list(self.per_equation),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


@dataclass(frozen=True)
class IntegratorConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = 0.5

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol"):
            v = getattr(self, name)
            if not 0 < v <= 1e-6:
                raise ValueError(f"{name} must lie in (0, 1e-6]")
        if not self.max_step > 0:
            raise ValueError("max_step must be positive")


# -- system registry -----------------------------------------------------

def _on_big(m: OperatorMatrix, cols: Sequence[int]) -> OperatorMatrix:
    """Embed a matrix acting on a subset of (Psi1, Psi2, Psi3) into all three columns."""
    from .opalg.operators import DiffOperator

    rows = []
    for r in m.rows:
        full = [DiffOperator() for _ in range(3)]
        for j, c in enumerate(cols):
            full[c] = r[j]
        rows.append(full)
    return OperatorMatrix(rows)


def system_matrix(system_id: str) -> OperatorMatrix:
    """Operator matrix (columns Psi1, Psi2, Psi3) of a residual system."""
    if system_id == "sys7":
        return S.pauli_system()
    if system_id == "sys10":
        return S.helicity_system()
    if system_id == "sys11c":
        pair = _on_big(S.pair_system(), (0, 2))
        return OperatorMatrix(list(pair.rows) + list(S.psi2_reconstruction().rows))
    if system_id == "sys12":
        return S.second_order_system()
    if system_id == "sys14c":
        return S.transported_pair_on_big()
    if system_id == "sys16_17":
        return OperatorMatrix(list(S.sigma0_relations().rows) + list(S.sigma0_system().rows))
    if system_id == "sys19":
        return S.barred_system()
    raise KeyError(f"unknown system {system_id!r}; expected one of {SYSTEM_IDS}")


def check_pairing(system_id: str, family: SolutionFamily) -> None:
    if system_id not in SYSTEM_IDS:
        raise KeyError(f"unknown system {system_id!r}; expected one of {SYSTEM_IDS}")
    if system_id in _NONZERO_ONLY and family.regime is not Regime.SIGMA_NONZERO:
        raise FamilyMismatchError(f"{system_id} applies to sigma != 0 families only")
    if system_id in _ZERO_ONLY and family.regime is not Regime.SIGMA_ZERO:
        raise FamilyMismatchError(f"{system_id} applies to the sigma = 0 family only")


def applicable_systems(family: SolutionFamily) -> Tuple[str, ...]:
    out = []
    for s in SYSTEM_IDS:
        try:
            check_pairing(s, family)
        except FamilyMismatchError:
            continue
        out.append(s)
    return tuple(out)


def _term_list(m: OperatorMatrix, values: Mapping[str, complex]):
    """Flatten to (row, col, deriv order, numeric constant, e^z power)."""
    out = []
    for i, row in enumerate(m.rows):
        for j, op in enumerate(row):
            for n, coeff in op.terms.items():
                for mono, c in coeff.terms.items():
                    v = complex(c)
                    for name, e in zip(SYMBOLS, mono):
                        if e:
                            v *= complex(values[name]) ** e
                    out.append((i, j, n, v, mono[-1]))
    return out


def _perturbed(table: np.ndarray, perturb: Optional[Mapping[str, float]]) -> np.ndarray:
    if not perturb:
        return table
    table = table.copy()
    for name, rel in perturb.items():
        idx = {"psi1": 0, "psi2": 1, "psi3": 2}[name]
        table[idx] *= 1.0 + rel
    return table


def equation_residuals(m: OperatorMatrix, values: Mapping[str, complex], z: np.ndarray,
                       table: np.ndarray) -> np.ndarray:
    """Relative residual of each row at each point, shape (rows, len(z))."""
    nrows = m.shape[0]
    total = np.zeros((nrows, z.size), dtype=complex)
    scale = np.zeros((nrows, z.size))
    for i, j, n, v, k in _term_list(m, values):
        term = v * np.exp(k * z) * table[j, n]
        total[i] += term
        scale[i] = np.maximum(scale[i], np.abs(term))
    with np.errstate(invalid="ignore", divide="ignore"):
        rel = np.where(scale > 0, np.abs(total) / np.where(scale > 0, scale, 1.0), 0.0)
    return rel


def residuals(params: ModeParameters, family: SolutionFamily, system_id: str, grid: Grid = Grid(),
              perturb: Optional[Mapping[str, float]] = None) -> ResidualReport:
    """Max relative residual of ``system_id`` over ``grid`` for the closed-form family.

    ``perturb`` maps component names (``psi1``, ``psi2``, ``psi3``) to a
    relative scaling applied to the component and all its derivatives; it
    exists for fault-injection checks of the suite itself.
    """
    check_pairing(system_id, family)
    sigma = sol.resolve_sigma(params, family)
    resolved = params.with_sigma(sigma)
    m = system_matrix(system_id)
    z = grid.points()
    table = _perturbed(sol.derivative_table(resolved, family, z, max_order=2), perturb)
    rel = equation_residuals(m, resolved.symbol_values(), z, table)
    per_eq = tuple(float(r.max()) for r in rel)
    return ResidualReport(system_id, float(rel.max()), (grid.z_min, grid.z_max, grid.n), resolved,
                          family.label, per_eq)


# -- independent integrator ----------------------------------------------

def _second_order_coeffs(params: ModeParameters, family: SolutionFamily):
    """(p, c0, c2) with Psi1'' = p Psi1' - (c0 - c2 e^{2z}) Psi1 for the Psi1 equation."""
    q2 = params.q ** 2
    if family.regime is Regime.SIGMA_ZERO:
        return 4.0, params.two_em + 3.0, q2
    sigma = sol.resolve_sigma(params, family)
    return 4.0, sigma * sigma + 3.0 + 2j * sigma, q2


def integrate_and_compare(params: ModeParameters, family: SolutionFamily, z0: float, z1: float,
                          cfg: IntegratorConfig = IntegratorConfig()) -> float:
    """Max pointwise relative deviation of an adaptive DOP853 solution of the Psi1 equation
    from the closed form, starting from closed-form value and slope at ``z0``.
    """
    if z1 == z0:
        return 0.0
    p, c0, c2 = _second_order_coeffs(params, family)
    t0 = sol.derivative_table(params, family, [z0], max_order=1)
    scale = 1.0 / abs(t0[0, 0, 0])
    y0 = np.array([t0[0, 0, 0], t0[0, 1, 0]], dtype=complex) * scale

    def rhs(z, y):
        return np.array([y[1], p * y[1] - (c0 - c2 * math.exp(2 * z)) * y[0]])

    n = max(2, int(abs(z1 - z0) / 0.01) + 1)
    zs = np.linspace(z0, z1, n)
    res = solve_ivp(rhs, (z0, z1), y0, method="DOP853", t_eval=zs, rtol=cfg.rel_tol, atol=cfg.abs_tol,
                    max_step=cfg.max_step)
    if not res.success:
        raise IntegrationFailure(res.message)
    exact = sol.derivative_table(params, family, zs, max_order=0)[0, 0] * scale
    return float(np.max(np.abs(res.y[0] - exact) / np.abs(exact)))


# -- flat limit ----------------------------------------------------------

@dataclass(frozen=True)
class FlatLimitRow:
    rho: float
    residual: float
    p3: complex
    evanescent: bool


def flat_wavenumber(u: PhysicalUnits) -> complex:
    """p3 with p3^2 = 2 eps m / hbar^2 - (P1^2 + P2^2) / hbar^2 (imaginary when evanescent)."""
    p3sq = 2 * u.epsilon_phys * u.m_phys / u.hbar ** 2 - (u.P1 ** 2 + u.P2 ** 2) / u.hbar ** 2
    return complex(math.sqrt(p3sq)) if p3sq >= 0 else 1j * math.sqrt(-p3sq)


def curved_residual(u: PhysicalUnits, Z: np.ndarray, f: np.ndarray, df: np.ndarray, d2f: np.ndarray) -> np.ndarray:
    """(curved - flat) Psi1 operator, in physical units, applied to ``f`` with Psi2 = 0.

    Curved:  f'' - (2/rho) f' + (2 eps m / hbar^2 + 1/rho^2) f - e^{2Z/rho} P^2/hbar^2 f
    Flat:    f'' + (2 eps m / hbar^2 - P^2/hbar^2) f
    """
    P2 = (u.P1 ** 2 + u.P2 ** 2) / u.hbar ** 2
    curved = d2f - (2.0 / u.rho) * df + (2 * u.epsilon_phys * u.m_phys / u.hbar ** 2 + 1.0 / u.rho ** 2) * f \
        - np.exp(2.0 * Z / u.rho) * P2 * f
    flat = d2f + (2 * u.epsilon_phys * u.m_phys / u.hbar ** 2 - P2) * f
    return curved - flat


def flat_limit_study(u: PhysicalUnits, rho_list: Sequence[float], n: int = 201) -> List[FlatLimitRow]:
    """Residual of the curved big-component equation on the flat plane wave, per rho."""
    rhos = [float(r) for r in rho_list]
    if not rhos or any(r <= 0 for r in rhos) or any(b <= a for a, b in zip(rhos, rhos[1:])):
        raise ValueError("rho_list must be positive and strictly ascending")
    p3 = flat_wavenumber(u)
    evanescent = p3.imag != 0
    Z = np.linspace(-1.0, 1.0, n)
    if evanescent:
        kappa = p3.imag
        f = np.exp(-kappa * Z).astype(complex)
        df, d2f = -kappa * f, kappa ** 2 * f
    else:
        f = np.exp(1j * p3.real * Z)
        df, d2f = 1j * p3.real * f, -(p3.real ** 2) * f
    out = []
    for rho in rhos:
        r = curved_residual(u.with_rho(rho), Z, f, df, d2f)
        out.append(FlatLimitRow(rho, float(np.max(np.abs(r))), p3, evanescent))
    return out


def flat_limit_csv(rows: Sequence[FlatLimitRow], header_lines: Sequence[str] = ()) -> str:
    buf = io.StringIO()
    for line in header_lines:
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("rho", "residual"))
    for r in rows:
        w.writerow((repr(r.rho), repr(r.residual)))
    return buf.getvalue()
