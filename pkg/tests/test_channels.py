import itertools

import numpy as np
import pytest

from boundfuel import kernels
from boundfuel.channels import (
    KrausChannel,
    LindbladGenerator,
    apply_all,
    apply_local,
    complete_dephasing,
    gadc,
    gadc_strength,
    identity_channel,
    lindblad_integrate,
)
from boundfuel.core import HilbertSpace
from boundfuel.micromaser import CavityConfig
from boundfuel.states import fls_state, qubit_permutation, smolin_state

from conftest import random_state


def test_kraus_completeness_enforced():
    with pytest.raises(ValueError):
        KrausChannel(np.array([[[1, 0], [0, 0.5]]], dtype=complex))


def test_gadc_identity_and_reset(rng):
    rho = random_state(rng, 2)
    np.testing.assert_allclose(gadc(0.3, 0.0)(rho), rho, atol=1e-14)
    for nbar in (0.0, 0.05, 2.0):
        out = gadc(nbar, 1.0)(rho)
        z = 2 * nbar + 1
        np.testing.assert_allclose(out, np.diag([nbar / z, (nbar + 1) / z]), atol=1e-14)


def test_gadc_fixed_point_detailed_balance():
    nbar = 0.05
    fix = np.diag([nbar, nbar + 1]) / (2 * nbar + 1)
    for p in (0.1, 0.5, 0.9):
        np.testing.assert_allclose(gadc(nbar, p)(fix), fix, atol=1e-15)


def test_gadc_domain():
    with pytest.raises(ValueError):
        gadc(-0.1, 0.5)
    with pytest.raises(ValueError):
        gadc(0.1, 1.5)


def test_gadc_strength_values():
    cav = CavityConfig()
    assert gadc_strength(cav.gamma, 0.0, 0.05) == 0.0
    assert gadc_strength(cav.gamma, 50e-9, 0.05) == pytest.approx(0.158684, abs=1e-6)
    assert gadc_strength(cav.gamma, 2e-3, 0.05) == pytest.approx(1.0, abs=1e-12)


def test_superoperator_matches_call(rng):
    ch = gadc(0.2, 0.4)
    rho = random_state(rng, 2)
    np.testing.assert_allclose((ch.superoperator() @ rho.ravel()).reshape(2, 2), ch(rho), atol=1e-14)


def test_apply_local_equals_embedded_channel(rng):
    rho = random_state(rng, 8)
    ch = gadc(0.1, 0.3)
    out = apply_local(ch, rho, 1, (2, 2, 2))
    ks = [np.kron(np.kron(np.eye(2), k), np.eye(2)) for k in ch.kraus]
    ref = sum(k @ rho @ k.conj().T for k in ks)
    np.testing.assert_allclose(out, ref, atol=1e-14)


def test_apply_all_commutes_with_permutations():
    ch = gadc(0.05, 0.37)
    rho = fls_state(0.8).data
    out = apply_all(ch, rho, (2, 2, 2, 2))
    for perm in itertools.permutations(range(4)):
        lhs = apply_all(ch, qubit_permutation(rho, perm), (2, 2, 2, 2))
        np.testing.assert_allclose(lhs, qubit_permutation(out, perm), atol=1e-14)


def test_identity_and_dephasing():
    s = smolin_state()
    np.testing.assert_allclose(apply_all(identity_channel(), s).data, s.data)
    deph = apply_all(complete_dephasing(), s).data
    np.testing.assert_allclose(deph, np.diag(np.diag(s.data)), atol=1e-15)


def test_lindblad_zero_rates_is_static(rng):
    gen = LindbladGenerator.qutrit_amplitude_damping(0.0, 0.0)
    rho = random_state(rng, 9)
    traj = lindblad_integrate(rho, gen, 1.0, dt=1e-2)
    assert np.max(np.abs(traj.states[-1] - rho)) < 1e-12


def test_lindblad_decays_to_ground():
    gen = LindbladGenerator.qutrit_amplitude_damping(1.0, 0.5)
    rho = np.zeros((9, 9))
    rho[0, 0] = 1.0  # |ee>
    traj = lindblad_integrate(rho, gen, 30.0, dt=5e-3, stride=100)
    assert traj.states[-1][8, 8].real == pytest.approx(1.0, abs=1e-9)


def test_generator_annihilates_trace(rng):
    gen = LindbladGenerator.qutrit_amplitude_damping(1.3, 0.4)
    for _ in range(5):
        assert abs(np.trace(gen(random_state(rng, 9)))) < 1e-13
    with pytest.raises(ValueError):
        LindbladGenerator.qutrit_amplitude_damping(-1.0, 0.0)


def test_single_qubit_decay_matches_exponential():
    sge = np.array([[0, 0], [1, 0]], dtype=complex)
    gen = LindbladGenerator(HilbertSpace((2,)), (sge,))
    traj = lindblad_integrate(np.diag([1.0, 0]), gen, 2.0, dt=1e-3, stride=100)
    np.testing.assert_allclose(traj.states[:, 0, 0].real, np.exp(-traj.times), atol=1e-10)


@pytest.mark.skipif(len(kernels.available_backends()) < 2, reason="compiled kernels not built")
def test_backends_agree(rng):
    gen = LindbladGenerator.qutrit_amplitude_damping(1.0, 0.5)
    rho = random_state(rng, 9)
    ch = gadc(0.05, 0.3)
    rho16 = random_state(rng, 16)
    prev = kernels.backend()
    try:
        results = {}
        for name in kernels.available_backends():
            kernels.set_backend(name)
            results[name] = (
                lindblad_integrate(rho, gen, 0.5, dt=1e-3).states,
                apply_all(ch, rho16, (2, 2, 2, 2)),
            )
    finally:
        kernels.set_backend(prev)
    a, b = results["compiled"], results["python"]
    assert np.max(np.abs(a[0] - b[0])) < 1e-12
    assert np.max(np.abs(a[1] - b[1])) < 1e-14


def test_set_backend_rejects_unknown():
    with pytest.raises(ValueError):
        kernels.set_backend("fortran")
