import math

import numpy as np
import pytest

from boundfuel.singleshot import (
    CentralSpinSystem,
    effective_temperature,
    evolve_single_shot,
    recurrence_ratio,
    single_shot_sweep,
)
from boundfuel.states import fls_state, ground_state, thermal_state, SIGMA_Z


@pytest.fixture(scope="module")
def system():
    return CentralSpinSystem()


def test_interaction_conserves_energy(system):
    assert system.commutator_defect < 1e-12


def test_tau_zero_is_initial_state(system):
    s = evolve_single_shot(fls_state(0.5), ground_state((2,)), 0.0, system)
    assert abs(s.delta_Q) < 1e-14 and abs(s.delta_S) < 1e-14 and s.T_eff == 0


def test_evolution_preserves_purity_and_energy(system):
    psi = np.zeros(32)
    psi[[3, 17]] = 1 / np.sqrt(2)
    rho = np.outer(psi, psi)
    for r in system.evolve(rho, np.array([0.7, 13.0])):
        assert np.trace(r @ r).real == pytest.approx(1.0, abs=1e-12)
        h0 = system.H_a + system.H_tq
        assert np.trace(h0 @ r).real == pytest.approx(np.trace(h0 @ rho).real, abs=1e-12)


@pytest.mark.parametrize("eps", [0.0, 0.5, 1.0])
def test_entropy_production_two_ways(system, eps):
    curve = single_shot_sweep([eps], np.linspace(0.05, 30, 40), system)[eps]
    assert np.max(curve["gibbs_defect"]) < 1e-12
    assert np.min(curve["sigma"]) > -1e-12
    assert np.max(np.abs(curve["sigma"] - curve["sigma_direct"])) < 1e-9
    assert np.max(curve["energy_drift"]) < 1e-12


def test_effective_temperature_cases():
    assert effective_temperature(np.diag([0.0, 1.0])) == 0.0
    assert math.isinf(effective_temperature(np.diag([0.5, 0.5])))
    assert effective_temperature(np.diag([0.7, 0.3])) < 0
    h = 0.5 * SIGMA_Z
    for t in (0.3, 1.0, 4.0):
        assert effective_temperature(thermal_state(1 / t, h)) == pytest.approx(t, rel=1e-12)


def test_recurrence_depends_on_eps(system):
    taus = np.arange(0, 100, 0.05)
    curves = single_shot_sweep([0.0, 1.0], taus, system)
    # full revival only when the cluster carries maximal coherence
    assert recurrence_ratio(curves[1.0]) < 0.01
    assert recurrence_ratio(curves[0.0]) > 0.01


def test_domain_checks(system):
    with pytest.raises(ValueError):
        evolve_single_shot(np.eye(8) / 8, ground_state((2,)), 1.0, system)
