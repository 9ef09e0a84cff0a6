"""The differential systems of the spin-1 problem as exact operator matrices.

Every system is transcribed once here and shared by the symbolic checks
(:mod:`hyperwave.opalg.checks`) and the numeric residual suite
(:mod:`hyperwave.verify`). Unknown vectors:

* full field: ``(Phi0, Phi1, Phi2, Phi3, E1, E2, E3, H1, H2, H3)``
* dynamical field: ``(Phi1, Phi2, Phi3, E1, E2, E3)``
* big components: ``(Psi1, Psi2, Psi3)``

``eps`` (full energy) is written as ``M + E``.
"""
from __future__ import annotations

from typing import Dict, List, Mapping, Sequence

from .operators import D, ONE, DiffOperator, OperatorMatrix
from .ring import I, CoeffPoly, const, ez, sym

sigma, E, M, a, b, gamma = (sym(n) for n in ("sigma", "E", "M", "a", "b", "gamma"))
eps = M + E
a_plus = a + I * b
a_minus = a - I * b
q2 = a * a + b * b
x2 = -q2 * ez(2)  # x**2 for x = i*sqrt(a^2+b^2)*e^z
nu = const(1) - I * sigma
mu = const(1) + I * sigma
inv_M = M ** -1

FULL = ("Phi0", "Phi1", "Phi2", "Phi3", "E1", "E2", "E3", "H1", "H2", "H3")
DYNAMICAL = ("Phi1", "Phi2", "Phi3", "E1", "E2", "E3")
BIG = ("Psi1", "Psi2", "Psi3")

Row = Dict[str, DiffOperator]


def _op(x) -> DiffOperator:
    return DiffOperator.lift(x)


def _matrix(rows: Sequence[Mapping[str, object]], cols: Sequence[str]) -> OperatorMatrix:
    for r in rows:
        unknown = set(r) - set(cols)
        if unknown:
            raise KeyError(f"unknown unknowns {unknown}")
    return OperatorMatrix([[_op(r.get(c, DiffOperator())) for c in cols] for r in rows])


def _times(op, row: Mapping[str, object]) -> Row:
    op = _op(op)
    return {k: op * _op(v) for k, v in row.items()}


def _sum(*rows: Mapping[str, object]) -> Row:
    out: Row = {}
    for r in rows:
        for k, v in r.items():
            out[k] = out[k] + _op(v) if k in out else _op(v)
    return out


# -- first-order Duffin-Kemmer system after separation ----------------------

FULL_ROW_NAMES = (
    "Phi0-constraint", "E1-dynamics", "E2-dynamics", "E3-dynamics",
    "Phi1-dynamics", "Phi2-dynamics", "Phi3-dynamics",
    "H1-constraint", "H2-constraint", "H3-constraint",
)


def system_one() -> OperatorMatrix:
    """Ten first-order equations for the separated spin-1 field."""
    g = gamma
    rows = [
        {"E1": g * (I * a - b) * ez(), "E3": -g * (I * a + b) * ez(), "E2": -(D - 2), "Phi0": -M},
        {"E1": I * eps, "H2": -g * a_minus * ez(), "H1": I * (D - 1), "Phi1": -M},
        {"E2": I * eps, "H1": -g * a_plus * ez(), "H3": -g * a_minus * ez(), "Phi2": -M},
        {"E3": I * eps, "H2": -g * a_plus * ez(), "H3": -I * (D - 1), "Phi3": -M},
        {"Phi1": -I * eps, "Phi0": g * (b + I * a) * ez(), "E1": -M},
        {"Phi2": -I * eps, "Phi0": -D, "E2": -M},
        {"Phi3": -I * eps, "Phi0": g * (b - I * a) * ez(), "E3": -M},
        {"Phi2": g * a_minus * ez(), "Phi1": -I * (D - 1), "H1": -M},
        {"Phi1": g * a_plus * ez(), "Phi3": g * a_minus * ez(), "H2": -M},
        {"Phi2": g * a_plus * ez(), "Phi3": I * (D - 1), "H3": -M},
    ]
    return _matrix(rows, FULL)


# elimination of the non-dynamical components, as brackets before the 1/M
_PHI0 = {"E1": gamma * (I * a - b) * ez(), "E3": -gamma * (I * a + b) * ez(), "E2": -(D - 2)}
_H1 = {"Phi2": gamma * a_minus * ez(), "Phi1": -I * (D - 1)}
_H2 = {"Phi1": gamma * a_plus * ez(), "Phi3": gamma * a_minus * ez()}
_H3 = {"Phi2": gamma * a_plus * ez(), "Phi3": I * (D - 1)}


def elimination_substitution() -> OperatorMatrix:
    """10x6 map from the dynamical components to the full field."""
    rows: List[Row] = []
    for name in FULL:
        if name == "Phi0":
            rows.append(_times(inv_M, _PHI0))
        elif name in ("H1", "H2", "H3"):
            rows.append(_times(inv_M, {"H1": _H1, "H2": _H2, "H3": _H3}[name]))
        else:
            rows.append({name: ONE})
    return _matrix(rows, DYNAMICAL)


REDUCED_ROW_NAMES = ("E1-dynamics", "Phi1-dynamics", "E2-dynamics", "Phi2-dynamics", "E3-dynamics", "Phi3-dynamics")
# rows of system_one() that survive elimination, in the printed interleaved order
REDUCED_ROWS = (1, 4, 2, 5, 3, 6)
CONSTRAINT_ROWS = (0, 7, 8, 9)


def system_two() -> OperatorMatrix:
    """The six dynamical equations as printed after elimination."""
    g = gamma
    rows = [
        _sum({"E1": I * eps}, _times(-g * a_minus * ez() * inv_M, _H2), _times(I * (D - 1) * inv_M, _H1), {"Phi1": -M}),
        _sum({"Phi1": -I * eps}, _times(g * (b + I * a) * ez() * inv_M, _PHI0), {"E1": -M}),
        _sum({"E2": I * eps}, _times(-g * a_plus * ez() * inv_M, _H1), _times(-g * a_minus * ez() * inv_M, _H3), {"Phi2": -M}),
        _sum({"Phi2": -I * eps}, _times(-D * inv_M, _PHI0), {"E2": -M}),
        _sum({"E3": I * eps}, _times(-g * a_plus * ez() * inv_M, _H2), _times(-I * (D - 1) * inv_M, _H3), {"Phi3": -M}),
        _sum({"Phi3": -I * eps}, _times(g * (b - I * a) * ez() * inv_M, _PHI0), {"E3": -M}),
    ]
    return _matrix(rows, DYNAMICAL)


# -- Pauli approximation and its reductions --------------------------------

def pauli_bracket(shift: int) -> DiffOperator:
    """``D^2 - 2D + 2EM + shift - (a^2+b^2) e^{2z}``."""
    return D * D - 2 * D + (2 * E * M + shift) - q2 * ez(2)


def pauli_system() -> OperatorMatrix:
    """Three second-order equations for the big components."""
    g = gamma
    rows = [
        {"Psi1": pauli_bracket(1), "Psi2": 2 * I * g * ez() * a_minus},
        {"Psi3": pauli_bracket(1), "Psi2": -2 * I * g * ez() * a_plus},
        {"Psi2": pauli_bracket(0), "Psi1": -2 * I * g * ez() * a_plus, "Psi3": 2 * I * g * ez() * a_minus},
    ]
    return _matrix(rows, BIG)


def helicity_system() -> OperatorMatrix:
    """Helicity eigenvalue relations written as ``lhs - rhs = 0``."""
    g = gamma
    rows = [
        {"Psi2": g * a_minus * ez(), "Psi1": -(I * (D - 1) + sigma)},
        {"Psi1": g * a_plus * ez(), "Psi3": g * a_minus * ez(), "Psi2": -sigma},
        {"Psi2": g * a_plus * ez(), "Psi3": -(-I * (D - 1) + sigma)},
    ]
    return _matrix(rows, BIG)


def pair_brackets():
    """First-order brackets acting on Psi1 and Psi3 in the two-function system."""
    b1 = 2 * I * sigma * (D - 1) + 2 * sigma * sigma - q2 * ez(2)
    b3 = -2 * I * sigma * (D - 1) + 2 * sigma * sigma - q2 * ez(2)
    return _op(b1), _op(b3)


def pair_system() -> OperatorMatrix:
    """Two coupled first-order equations for (Psi1, Psi3), as ``rhs - lhs = 0``."""
    b1, b3 = pair_brackets()
    return OperatorMatrix([[b1, -(a_minus * a_minus) * ez(2)], [-(a_plus * a_plus) * ez(2), b3]])


def psi2_reconstruction() -> OperatorMatrix:
    """``Psi2 - (gamma/sigma) e^z [(a+ib) Psi1 + (a-ib) Psi3] = 0``."""
    k = gamma * sigma ** -1 * ez()
    return _matrix([{"Psi1": -k * a_plus, "Psi2": ONE, "Psi3": -k * a_minus}], BIG)


def second_order_bracket(sign: int) -> DiffOperator:
    """``D^2 - 4D + sigma^2 + 3 + sign*2i*sigma - (a^2+b^2) e^{2z}``; sign=+1 for Psi1."""
    return D * D - 4 * D + (sigma * sigma + 3 + sign * 2 * I * sigma) - q2 * ez(2)


def second_order_system() -> OperatorMatrix:
    return _matrix([{"Psi1": second_order_bracket(+1)}, {"Psi3": second_order_bracket(-1)}], BIG)


def transported_pair_system() -> OperatorMatrix:
    """First-order pair in the rescaled Bessel functions ``fbar1, fbar3`` (``x d/dx = D``)."""
    return OperatorMatrix([
        [2 * I * sigma * (D + nu) + x2, x2],
        [x2, -2 * I * sigma * (D + mu) + x2],
    ])


def transported_pair_on_big() -> OperatorMatrix:
    """The rescaled pair rewritten on (Psi1, Psi2, Psi3), each row scaled by a^2+b^2.

    Uses ``(a^2+b^2) fbar1 = -(a+ib) e^{-2z} Psi1`` and the mirror for Psi3.
    """
    t = transported_pair_system()
    s1 = -a_plus * ez(-2)
    s3 = -a_minus * ez(-2)
    rows = [{"Psi1": t[i, 0] * s1, "Psi3": t[i, 1] * s3} for i in range(2)]
    return _matrix(rows, BIG)


# -- sigma = 0 branch ------------------------------------------------------

def sigma0_relations() -> OperatorMatrix:
    """Proportionality of Psi3 to Psi1 and Psi2 in terms of Psi1, both as ``... = 0``."""
    return _matrix([
        {"Psi1": a_plus, "Psi3": a_minus},
        {"Psi2": gamma * a_minus * ez(), "Psi1": -I * (D - 1)},
    ], BIG)


def sigma0_bracket() -> DiffOperator:
    """``D^2 - 4D + 2EM + 3 - (a^2+b^2) e^{2z}``."""
    return D * D - 4 * D + (2 * E * M + 3) - q2 * ez(2)


def sigma0_system() -> OperatorMatrix:
    third = pauli_system().rows[2]
    return OperatorMatrix([
        [sigma0_bracket(), DiffOperator(), DiffOperator()],
        [DiffOperator(), DiffOperator(), sigma0_bracket()],
        list(third),
    ])


def barred_bracket() -> DiffOperator:
    """``D^2 - 2D + 2EM - (a^2+b^2) e^{2z}``, the equation for Psibar1."""
    return pauli_bracket(0)


def barred_system() -> OperatorMatrix:
    """sigma = 0 consistency relations on (Psi1, Psi2, Psi3) through ``Psibar1 = (a+ib) e^{-z} Psi1``."""
    bar1 = _op(a_plus * ez(-1))
    bar3 = _op(a_minus * ez(-1))
    L = barred_bracket()
    return _matrix([
        {"Psi1": bar1, "Psi3": bar3},
        {"Psi1": -I * D * bar1, "Psi2": gamma * q2},
        {"Psi1": L * bar1},
        {"Psi1": -4 * I * gamma * ez(2) * bar1, "Psi2": L},
    ], BIG)
