"""Residual suite, independent integrator and flat-limit study."""
import json
import math

import pytest

from hyperwave.modes import ModeParameters, PhysicalUnits
from hyperwave.solutions import SolutionFamily
from hyperwave import verify as V

G = 1 / math.sqrt(2)
NONZERO = SolutionFamily.nonzero("I", "+")
ZERO = SolutionFamily.zero("I")


def params(gamma=G, E=0.1):
    return ModeParameters(E=E, M=1, a=0.3, b=0.4, gamma=gamma)


@pytest.mark.parametrize("system", ["sys7", "sys10", "sys11c", "sys12", "sys14c"])
@pytest.mark.parametrize("family", [SolutionFamily.nonzero(c, s) for c in ("I", "II") for s in "+-"],
                         ids=lambda f: f.label)
def test_nonzero_systems_hold(system, family):
    r = V.residuals(params(), family, system)
    assert r.max_rel_residual <= 1e-9, r.per_equation


@pytest.mark.parametrize("system", ["sys7", "sys10", "sys16_17", "sys19"])
@pytest.mark.parametrize("family", [SolutionFamily.zero("I"), SolutionFamily.zero("II")], ids=lambda f: f.label)
def test_zero_systems_hold(system, family):
    r = V.residuals(params(E=0.9), family, system)
    assert r.max_rel_residual <= 1e-9, r.per_equation


def test_gamma_free_system_at_gamma_one():
    assert V.residuals(params(gamma=1.0), NONZERO, "sys12").max_rel_residual <= 1e-9


def test_gamma_coupled_system_fails_away_from_one_half():
    """The coupled big-component system only closes for gamma^2 = 1/2."""
    r = V.residuals(params(gamma=1.0), NONZERO, "sys7")
    assert r.max_rel_residual > 1e-3
    r0 = V.residuals(params(gamma=1.0, E=0.9), ZERO, "sys7")
    assert r0.max_rel_residual > 1e-3


def test_gamma_free_systems_do_not_depend_on_gamma():
    for system in ("sys11c", "sys12", "sys14c"):
        a = V.residuals(params(gamma=0.5), NONZERO, system).max_rel_residual
        b = V.residuals(params(gamma=2.0), NONZERO, system).max_rel_residual
        assert abs(a - b) < 1e-12


@pytest.mark.parametrize("component", ["psi1", "psi2", "psi3"])
def test_perturbation_is_detected(component):
    worst = max(V.residuals(params(), NONZERO, s, perturb={component: 1e-3}).max_rel_residual
                for s in V.applicable_systems(NONZERO))
    assert worst > 1e-4


def test_perturbing_psi2_breaks_reconstruction():
    r = V.residuals(params(), NONZERO, "sys11c", perturb={"psi2": 1e-3})
    assert r.max_rel_residual > 1e-4


def test_unknown_perturbation_key():
    with pytest.raises(KeyError):
        V.residuals(params(), NONZERO, "sys12", perturb={"psi4": 1e-3})


def test_family_mismatch():
    with pytest.raises(V.FamilyMismatchError):
        V.residuals(params(), NONZERO, "sys19")
    with pytest.raises(V.FamilyMismatchError):
        V.residuals(params(E=0.9), ZERO, "sys12")


def test_applicable_systems():
    assert set(V.applicable_systems(NONZERO)) == {"sys7", "sys10", "sys11c", "sys12", "sys14c"}
    assert set(V.applicable_systems(ZERO)) == {"sys7", "sys10", "sys16_17", "sys19"}


def test_grid_validation():
    with pytest.raises(ValueError):
        V.Grid(1, 0, 5)
    with pytest.raises(ValueError):
        V.Grid(0, 1, 0)
    assert V.Grid().points().shape == (81,)
    assert V.Grid(0.5, 0.5, 1).points().tolist() == [0.5]


def test_report_json():
    d = json.loads(V.residuals(params(), NONZERO, "sys12").to_json())
    assert d["system_id"] == "sys12" and d["grid"] == [-3, 1, 81]
    assert d["params_echo"]["sigma"] == [math.sqrt(0.2), 0.0]
    assert d["family"] == "sigma+-I"


def test_integrator_examples():
    assert V.integrate_and_compare(params(), NONZERO, -2, 0.5) <= 1e-7
    assert V.integrate_and_compare(params(E=0.375), ZERO, -2, 0.5) <= 1e-7


def test_integrator_zero_interval():
    assert V.integrate_and_compare(params(), NONZERO, 0.3, 0.3) == 0.0


def test_integrator_tracks_tolerance():
    devs = [V.integrate_and_compare(params(), NONZERO, -2, 0.5, V.IntegratorConfig(rel_tol=t, abs_tol=t * 1e-2))
            for t in (1e-8, 1e-10, 1e-12)]
    assert all(b <= 3 * a for a, b in zip(devs, devs[1:]))
    assert devs[-1] < devs[0]


def test_integrator_config_validation():
    with pytest.raises(ValueError):
        V.IntegratorConfig(rel_tol=1e-3)
    with pytest.raises(ValueError):
        V.IntegratorConfig(abs_tol=0)


UNITS = PhysicalUnits(rho=10, hbar=1, c=1, epsilon_phys=0.5, m_phys=1, P1=0.3, P2=0.4)


def test_flat_limit_scales_as_inverse_rho():
    rows = V.flat_limit_study(UNITS, [10, 100, 1000, 10000])
    for a, b in zip(rows, rows[1:]):
        assert 0.05 <= b.residual / a.residual <= 0.2
    assert all(b.residual < a.residual for a, b in zip(rows, rows[1:]))


def test_flat_limit_large_rho():
    r10, r6 = V.flat_limit_study(UNITS, [10, 1e6])
    assert r6.residual < 1e-5 * r10.residual * 1.0001


def test_flat_limit_constant_wave_is_exactly_inverse_rho_squared():
    u = PhysicalUnits(rho=10, hbar=1, c=1, epsilon_phys=0, m_phys=1, P1=0, P2=0)
    for row in V.flat_limit_study(u, [10, 100]):
        assert row.residual == 1 / row.rho ** 2


def test_flat_limit_evanescent():
    u = PhysicalUnits(rho=10, hbar=1, c=1, epsilon_phys=0.01, m_phys=1, P1=0.3, P2=0.4)
    rows = V.flat_limit_study(u, [10, 100])
    assert rows[0].evanescent and rows[0].p3.real == 0
    assert rows[1].residual < rows[0].residual


def test_flat_limit_rho_validation():
    with pytest.raises(ValueError):
        V.flat_limit_study(UNITS, [100, 10])
    with pytest.raises(ValueError):
        V.flat_limit_study(UNITS, [])


def test_flat_limit_csv():
    text = V.flat_limit_csv(V.flat_limit_study(UNITS, [10, 100]), ["x"])
    assert text.splitlines()[:2] == ["# x", "rho,residual"]
    assert len(text.splitlines()) == 4


def test_system_matrix_unknown():
    with pytest.raises(KeyError):
        V.system_matrix("sys99")


def test_zero_perturbation_changes_nothing():
    r1 = V.residuals(params(), NONZERO, "sys12", V.Grid(-1, 0, 5)).per_equation
    r2 = V.residuals(params(), NONZERO, "sys12", V.Grid(-1, 0, 5), perturb={"psi1": 0.0}).per_equation
    assert r1 == r2
