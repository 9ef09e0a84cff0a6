"""Exponential-barrier reflection: reduction, numerics and the Gamma-function phase."""
import math

import mpmath as mp
import numpy as np
import pytest

from hyperwave import scattering as S
from hyperwave.modes import ModeParameters

mp.mp.dps = 30


def analytic_phase_oracle(k, q):
    """arg of Gamma(-ik)/Gamma(ik) (q/2)^{2ik} at 30 digits."""
    ik = mp.mpc(0, k)
    return float(mp.arg(mp.gamma(-ik) / mp.gamma(ik) * mp.power(mp.mpf(q) / 2, 2 * ik)))


def test_reduction_example():
    p = S.to_barrier(ModeParameters(E=1, M=1, a=3, b=4))
    assert p.k == pytest.approx(1, abs=1e-15) and p.q == pytest.approx(5, abs=1e-15)


@pytest.mark.parametrize("E,M,a,b", [(1, 1, 3, 4), (0.8, 2.5, -1, 0.2), (3, 0.5, 0.1, -2)])
def test_both_substitution_routes_agree(E, M, a, b):
    m = ModeParameters(E=E, M=M, a=a, b=b)
    assert S.to_barrier(m, "17a") == S.to_barrier(m, "19c")


def test_sub_threshold():
    with pytest.raises(S.SubThresholdError):
        S.to_barrier(ModeParameters(E=0.4, M=1, a=3, b=4))


def test_unknown_form():
    with pytest.raises(KeyError):
        S.to_barrier(ModeParameters(E=1, M=1, a=3, b=4), "99")


@pytest.mark.parametrize("k,q", [(1, 1), (2, 5), (0.5, 10)])
def test_numeric_unitarity(k, q):
    r = S.reflection_numeric(S.BarrierProblem(k, q))
    assert abs(r.abs_R - 1) <= 1e-8


@pytest.mark.parametrize("k,q", [(1, 1), (2, 5), (0.5, 0.5), (4, 10)])
def test_numeric_phase_matches_analytic(k, q):
    p = S.BarrierProblem(k, q)
    d = S.phase_difference(S.reflection_numeric(p).phase, S.reflection_analytic(p).phase)
    assert abs(d) <= 1e-8


def test_matching_point_independence():
    p = S.BarrierProblem(1.0, 2.0)
    a = S.reflection_numeric(p)
    b = S.reflection_numeric(p, z_match=S.default_z_match(p) + 0.2)
    assert abs(a.R - b.R) < 1e-8


def test_matching_preconditions():
    p = S.BarrierProblem(1.0, 2.0)
    with pytest.raises(ValueError):
        S.reflection_numeric(p, z_match=math.log(10 / 2.0))
    with pytest.raises(ValueError):
        S.reflection_numeric(p, z_far=math.log(1e-3 / 2.0))
    with pytest.raises(ValueError):
        S.reflection_numeric(p, z_match=-20.0, z_far=-10.0)


def test_analytic_unitarity():
    for k in (0.1, 1, 3, 7):
        for q in (0.2, 1, 20):
            assert abs(S.reflection_analytic(S.BarrierProblem(k, q)).abs_R - 1) <= 1e-14


def test_analytic_phase_against_mpmath():
    assert abs(S.reflection_analytic(S.BarrierProblem(1, 2)).phase - analytic_phase_oracle(1, 2)) <= 1e-12


def test_analytic_phase_is_continuous_in_k():
    ks = np.arange(0.5, 3.0 + 1e-9, 1e-3)
    ph = [S.reflection_analytic(S.BarrierProblem(float(k), 1.0)).phase for k in ks]
    jumps = [abs(S.phase_difference(b, a)) for a, b in zip(ph, ph[1:])]
    assert max(jumps) < 0.1


def test_problem_validation():
    for k, q in [(0, 1), (-1, 1), (1, 0), (math.inf, 1)]:
        with pytest.raises(ValueError):
            S.BarrierProblem(k, q)


def test_phase_difference_wraps():
    assert S.phase_difference(math.pi - 0.1, -math.pi + 0.1) == pytest.approx(-0.2)
    assert S.phase_difference(-math.pi, math.pi) == 0


def test_sigma_nonzero_wavenumber_is_complex():
    m = ModeParameters(E=0.5, M=1, a=0.3, b=0.4)
    assert S.sigma_nonzero_wavenumber(m, "+") == pytest.approx(1 + 1j, abs=1e-14)
    assert S.sigma_nonzero_wavenumber(m, "-") == pytest.approx(-1 + 1j, abs=1e-14)


def test_sweep_and_csv():
    rows = S.sweep([1.0], [1.0, 5.0])
    assert [(r.k, r.q) for r in rows] == [(1.0, 1.0), (1.0, 5.0)]
    lines = S.sweep_csv(rows, ["h"]).splitlines()
    assert lines[:2] == ["# h", "k,q,abs_R,phase"] and len(lines) == 4
    assert "np." not in "".join(lines)
