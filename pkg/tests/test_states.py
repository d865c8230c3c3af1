import itertools

import numpy as np
import pytest

from boundfuel.core import partial_transpose
from boundfuel.states import (
    SIGMA3_SCHEME,
    V_TYPE_SCHEME,
    BasisMap,
    dephase,
    fls_state,
    ground_state,
    horodecki_state,
    maximally_mixed,
    negativity,
    plus_product,
    qubit_hamiltonian,
    qubit_permutation,
    qutrit_hamiltonian,
    realignment_parameter,
    reference_states,
    smolin_state,
    thermal_state,
)

SINGLET = np.outer([0, 1, -1, 0], [0, 1, -1, 0]) / 2
SMOLIN_NONZERO = [(1, 1), (1, 16), (4, 4), (4, 13), (6, 6), (6, 11), (7, 7), (7, 10),
                  (10, 10), (11, 11), (13, 13), (16, 16)]  # fmt: skip


def test_basis_map_labels():
    bm = BasisMap(4)
    assert bm.labels[0] == "eeee" and bm.labels[15] == "gggg"
    assert bm.one_based("egge") == 1 + 4 + 2
    assert sorted(bm.excitation_order) == list(range(16))
    ex = [bm.labels[k].count("g") for k in bm.excitation_order]
    assert ex == [0] + [1] * 4 + [2] * 6 + [3] * 4 + [4]


def test_basis_map_antidiagonal_pairs_are_complements():
    bm = BasisMap(4)
    o = bm.excitation_order
    for i in range(6, 12):
        assert o[i - 1] ^ o[17 - i - 1] == 15


def test_smolin_entries_and_energy():
    s = smolin_state().data
    nz = {(i + 1, j + 1) for i in range(16) for j in range(16) if abs(s[i, j]) > 1e-12 and i <= j}
    assert nz == set(SMOLIN_NONZERO)
    for i, j in SMOLIN_NONZERO:
        assert abs(s[i - 1, j - 1]) == pytest.approx(1 / 8)
    assert np.trace(s @ qubit_hamiltonian().data).real == pytest.approx(0, abs=1e-14)


def test_smolin_eigenvector_from_basis_vectors():
    bm = BasisMap(4)
    v = np.zeros(16)
    v[[bm.index("eegg"), bm.index("ggee")]] = 1 / np.sqrt(2)
    s = smolin_state().data
    assert v @ s @ v == pytest.approx(0.25)


@pytest.mark.parametrize("cut", [(2, 3), (1, 3), (1, 2)])
def test_smolin_balanced_cuts_ppt(cut):
    w = np.linalg.eigvalsh(partial_transpose(smolin_state(), cut))
    assert w[0] > -1e-12


def test_smolin_permutation_symmetric():
    s = smolin_state().data
    for perm in itertools.permutations(range(4)):
        np.testing.assert_allclose(qubit_permutation(s, perm), s, atol=1e-15)


def test_fls_entries_and_spectrum():
    r0 = fls_state(0).data
    np.testing.assert_allclose(np.diag(r0)[[0, 5, 10, 15]], 0.25)
    assert np.count_nonzero(np.abs(r0) > 0) == 4
    eps = 0.3
    w = np.sort(np.linalg.eigvalsh(fls_state(eps).data))[::-1]
    np.testing.assert_allclose(w, [0.175] * 4 + [0.075] * 4 + [0] * 8, atol=1e-14)
    h = qubit_hamiltonian().data
    for e in np.linspace(0, 1, 11):
        assert np.trace(fls_state(e).data @ h).real == pytest.approx(0, abs=1e-14)


def test_fls_affine_in_eps():
    a, b, c = (fls_state(e).data for e in (0.1, 0.4, 0.9))
    np.testing.assert_allclose((b - a) / 0.3, (c - a) / 0.8, atol=1e-13)


def test_fls_domain():
    with pytest.raises(ValueError):
        fls_state(1.2)


def test_fls_ppt_boundary():
    for e in np.linspace(0, 0.5, 6):
        assert negativity(fls_state(e), (2, 3)) < 1e-12
    assert np.linalg.eigvalsh(partial_transpose(fls_state(0.6), (2, 3)))[0] < 0
    for e in (0.55, 0.7, 1.0):
        assert negativity(fls_state(e), (2, 3)) > 1e-3


def test_horodecki_matrix():
    r = horodecki_state(3.0).data
    for i, j in itertools.product((0, 4, 8), repeat=2):
        assert r[i, j] == pytest.approx(2 / 21)
    for a in (2, 3.5, 5):
        assert np.trace(horodecki_state(a).data) == pytest.approx(1)
    with pytest.raises(ValueError):
        horodecki_state(1.9)


def test_horodecki_entanglement_classes():
    assert negativity(horodecki_state(4.2), (1,)) > 0
    assert negativity(horodecki_state(3.5), (1,)) < 1e-12
    assert realignment_parameter(horodecki_state(3.5), (1,)) > 0  # bound entangled


def test_horodecki_decay_labeling_is_local_relabeling():
    a, b = horodecki_state(4.2).data, horodecki_state(4.2, labeling="decay").data
    np.testing.assert_allclose(np.linalg.eigvalsh(a), np.linalg.eigvalsh(b), atol=1e-14)
    for cut in [(1,)]:
        np.testing.assert_allclose(
            np.linalg.eigvalsh(partial_transpose(a, cut, (3, 3))),
            np.linalg.eigvalsh(partial_transpose(b, cut, (3, 3))),
            atol=1e-14,
        )
    h = qutrit_hamiltonian().data
    assert np.trace(a @ h).real == pytest.approx(np.trace(b @ h).real)


def test_qutrit_schemes():
    np.testing.assert_allclose(np.diag(SIGMA3_SCHEME.hamiltonian()).real, [0.5, 0, -0.5])
    np.testing.assert_allclose(np.diag(V_TYPE_SCHEME.hamiltonian()).real, [0.5, 0.5, -0.5])


def test_reference_states():
    refs = reference_states()
    np.testing.assert_allclose(np.diag(refs["plus_product_4"].data), 1 / 16)
    np.testing.assert_allclose(refs["maximally_mixed_4"].data, np.eye(16) / 16)
    np.testing.assert_allclose(plus_product(2).data, np.full((4, 4), 0.25))


def test_dephase_and_thermal():
    d = dephase(smolin_state())
    np.testing.assert_allclose(d.data, np.diag(np.diag(smolin_state().data)))
    t = thermal_state(np.inf, qubit_hamiltonian(2))
    np.testing.assert_allclose(t.data, ground_state((2, 2)).data)
    t1 = thermal_state(1.3, qubit_hamiltonian(1))
    assert t1.data[0, 0].real / t1.data[1, 1].real == pytest.approx(np.exp(-1.3))


def test_negativity_and_realignment_basics(rng):
    assert negativity(np.kron(np.eye(2) / 2, np.diag([1.0, 0])), (1,), (2, 2)) == pytest.approx(0, abs=1e-14)
    assert negativity(SINGLET, (1,), (2, 2)) == pytest.approx(0.5)
    for d in (2, 3, 4):
        assert realignment_parameter(np.eye(d * d) / d**2, (1,), (d, d)) == pytest.approx(1 / d - 1)
    assert realignment_parameter(SINGLET, (1,), (2, 2)) > 0
    with pytest.raises(ValueError):
        negativity(maximally_mixed((2, 2, 2)))
