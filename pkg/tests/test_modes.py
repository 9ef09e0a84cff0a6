import cmath
import math

import pytest
from hypothesis import given, settings, strategies as st

from hyperwave.modes import (DegenerateMomentaError, ModeParameters, PhysicalUnits, sigma_values, to_dimensionless,
                             to_x)


@pytest.mark.parametrize("E,M,want", [(0.5, 1, 1), (0, 1, 0), (2, 1, 2)])
def test_sigma_values(E, M, want):
    plus, minus = sigma_values(E, M)
    assert plus == want and minus == -want


def test_sigma_values_imaginary_below_zero_energy():
    plus, minus = sigma_values(-0.5, 1)
    assert plus == 1j and minus == -1j


def test_sigma_values_need_positive_mass():
    with pytest.raises(ValueError):
        sigma_values(1, 0)


@settings(max_examples=100)
@given(st.floats(-10, 10), st.floats(0.01, 10))
def test_sigma_pair_squares_to_2me(E, M):
    plus, minus = sigma_values(E, M)
    assert plus == -minus
    assert abs(plus * plus - 2 * M * E) <= 1e-15 * max(1.0, abs(2 * M * E))


def test_to_x_examples():
    assert to_x(ModeParameters(0.1, 1, 3, 4), 0) == 5j
    assert abs(to_x(ModeParameters(0.1, 1, 1, 0), math.log(2)) - 2j) < 1e-15
    assert abs(to_x(ModeParameters(0.1, 1, 0.3, 0.4), -1) - 0.5j * math.exp(-1)) < 1e-15


def test_to_x_degenerate():
    with pytest.raises(DegenerateMomentaError):
        to_x(ModeParameters(0.1, 1, 0, 0), 0)


def test_to_x_monotone():
    p = ModeParameters(0.1, 1, 0.3, -0.4)
    xs = [to_x(p, z).imag for z in [-3 + 0.1 * k for k in range(41)]]
    assert all(b > a for a, b in zip(xs, xs[1:]))
    assert all(to_x(p, 0.2).real == 0 for _ in range(1))


def test_to_dimensionless_examples():
    m = to_dimensionless(PhysicalUnits(1, 1, 1, 0.1, 1, 0.3, 0.4))
    assert (m.E, m.M, m.a, m.b) == (0.1, 1, 0.3, 0.4)
    m = to_dimensionless(PhysicalUnits(10, 1, 1, 0.05, 2, 0.1, 0))
    assert m.E == pytest.approx(0.5) and m.M == 20 and m.a == pytest.approx(1) and m.b == 0
    assert m.sigma is None


@settings(max_examples=50)
@given(st.floats(0.1, 100), st.floats(0.1, 10))
def test_rho_scaling(rho, lam):
    u = PhysicalUnits(rho, 1.3, 0.7, 0.2, 1.1, 0.3, -0.4)
    a, b = to_dimensionless(u), to_dimensionless(u.with_rho(lam * rho))
    for f in ("E", "M", "a", "b"):
        assert getattr(b, f) == pytest.approx(lam * getattr(a, f), rel=1e-13)
    assert b.two_em == pytest.approx(lam ** 2 * a.two_em, rel=1e-13)


def test_physical_units_validation():
    with pytest.raises(ValueError):
        PhysicalUnits(0, 1, 1, 0.1, 1, 0, 0)
    with pytest.raises(ValueError):
        PhysicalUnits(1, 1, 1, 0.1, -1, 0, 0)


def test_json_round_trip():
    p = ModeParameters(0.1, 1, 0.3, 0.4, gamma=0.5, sigma=0.2 + 0.1j)
    assert ModeParameters.from_json(p.to_json()) == p
    assert ModeParameters.from_json(ModeParameters(0.1, 1, 0.3, 0.4).to_json()).sigma is None
    u = PhysicalUnits(2, 1, 3, 0.1, 1, 0.3, 0.4)
    assert PhysicalUnits.from_json(u.to_json()) == u
    assert set(u.to_dict()) == {"rho", "hbar", "c", "epsilon_phys", "m_phys", "P1", "P2"}


def test_negative_energy_flagged():
    assert ModeParameters(-0.1, 1, 0.3, 0.4).bound_like
    assert not ModeParameters(0.1, 1, 0.3, 0.4).bound_like
