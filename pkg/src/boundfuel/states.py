"""State constructors, basis bookkeeping and entanglement diagnostics.

Conventions
-----------
Qubits use ``|e> = |0>`` and ``|g> = |1>``, so the computational index of a
four-qubit product ``|abcd>`` is ``8a + 4b + 2c + d`` (zero based).  Qutrits
use ``|e> = |0>``, ``|u> = |1>``, ``|g> = |2>`` and two-qutrit states are
ordered ``ee, eu, eg, ue, uu, ug, ge, gu, gg``.
"""

from __future__ import annotations

import dataclasses
import itertools
from functools import reduce
from typing import Sequence

import numpy as np

from .core import (
    DensityMatrix,
    HermitianOperator,
    HilbertSpace,
    _data,
    _space,
    partial_transpose,
    trace_norm,
)

__all__ = [
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "SIGMA_PLUS",
    "SIGMA_MINUS",
    "BasisMap",
    "QutritLevelScheme",
    "SIGMA3_SCHEME",
    "V_TYPE_SCHEME",
    "qubit_hamiltonian",
    "qutrit_hamiltonian",
    "smolin_state",
    "fls_state",
    "horodecki_state",
    "plus_product",
    "maximally_mixed",
    "thermal_state",
    "ground_state",
    "dephase",
    "reference_states",
    "negativity",
    "realignment_parameter",
]

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)  # +1 on |e>
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)  # |e><g|
SIGMA_MINUS = SIGMA_PLUS.T.copy()  # |g><e|

QUBIT_LEVELS = "eg"
QUTRIT_LEVELS = "eug"


# ---------------------------------------------------------------- bases


@dataclasses.dataclass(frozen=True)
class BasisMap:
    """Computational index <-> energy label for ``n`` qubits.

    ``labels[n]`` is the string ``x1..xN`` (``x in {e, g}``) of the zero-based
    computational index ``n``.  ``excitation_order[k]`` is the computational
    index sitting at position ``k`` of the excitation-ordered basis used by
    the pump-coefficient formulas (four qubits only): ``eeee``, then the four
    states with one ``g``, the six with two, the four with three, ``gggg``.
    """

    n_qubits: int = 4

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    @property
    def labels(self) -> tuple[str, ...]:
        n = self.n_qubits
        return tuple(
            "".join(QUBIT_LEVELS[(k >> (n - 1 - q)) & 1] for q in range(n)) for k in range(self.dim)
        )

    def index(self, label: str) -> int:
        """Zero-based computational index of an ``e``/``g`` label."""
        if len(label) != self.n_qubits or set(label) - set(QUBIT_LEVELS):
            raise ValueError(f"bad label {label!r} for {self.n_qubits} qubits")
        return int("".join("0" if c == "e" else "1" for c in label), 2)

    def one_based(self, label: str) -> int:
        """Index ``n = 1 + 8a + 4b + 2c + d`` with ``e -> 0``, ``g -> 1``."""
        return self.index(label) + 1

    @property
    def excitation_order(self) -> np.ndarray:
        if self.n_qubits != 4:
            raise ValueError("the excitation ordering is defined for four qubits")
        bit = lambda *qs: sum(1 << (3 - q) for q in qs)  # noqa: E731
        order = [0]
        order += [bit(q) for q in range(4)]
        order += [bit(3, 0), bit(3, 1), bit(3, 2), bit(0, 1), bit(0, 2), bit(1, 2)]
        order += [bit(0, 1, 2), bit(0, 1, 3), bit(0, 2, 3), bit(1, 2, 3)]
        order += [15]
        return np.array(order)

    def to_excitation_basis(self, rho) -> np.ndarray:
        """Reorder a 16x16 matrix into the excitation-ordered basis."""
        o = self.excitation_order
        return _data(rho)[np.ix_(o, o)]


# ---------------------------------------------------------- Hamiltonians


@dataclasses.dataclass(frozen=True)
class QutritLevelScheme:
    """Single-qutrit energies of ``(e, u, g)`` in units of ``omega``."""

    energies: tuple[float, float, float]
    name: str = ""

    def hamiltonian(self, omega: float = 1.0) -> np.ndarray:
        return omega * np.diag(np.asarray(self.energies, dtype=complex))


# H = (omega/2) sigma_3 with sigma_3 = diag(1, 0, -1); reproduces the
# tabulated two-qutrit ergotropy.
SIGMA3_SCHEME = QutritLevelScheme((0.5, 0.0, -0.5), "sigma3")
# Degenerate V-type energies (e and u both at +omega/2).
V_TYPE_SCHEME = QutritLevelScheme((0.5, 0.5, -0.5), "v_type")


def _local_sum(h1: np.ndarray, n: int) -> np.ndarray:
    d = h1.shape[0]
    eye = np.eye(d)
    out = np.zeros((d**n, d**n), dtype=complex)
    for k in range(n):
        out += reduce(np.kron, [h1 if m == k else eye for m in range(n)])
    return out


def qubit_hamiltonian(n: int = 4, omega: float = 1.0) -> HermitianOperator:
    """``(omega/2) sum_k sigma_z^k`` on ``n`` qubits."""
    space = HilbertSpace((2,) * n, tuple("ABCDEFGH"[:n]) if n <= 8 else ())
    return HermitianOperator(space, _local_sum(0.5 * omega * SIGMA_Z, n))


def qutrit_hamiltonian(
    n: int = 2, omega: float = 1.0, scheme: QutritLevelScheme = SIGMA3_SCHEME
) -> HermitianOperator:
    """Sum of identical local qutrit Hamiltonians."""
    space = HilbertSpace((3,) * n, tuple("ABCDEFGH"[:n]) if n <= 8 else ())
    return HermitianOperator(space, _local_sum(scheme.hamiltonian(omega), n))


# ----------------------------------------------------------------- states


def smolin_state() -> DensityMatrix:
    """Four-qubit Smolin state ``(1/16) sum_{i=0..3} sigma_i^{x4}``."""
    paulis = (np.eye(2, dtype=complex), SIGMA_X, SIGMA_Y, SIGMA_Z)
    data = sum(reduce(np.kron, [s] * 4) for s in paulis) / 16.0
    return DensityMatrix.from_array(data.real.astype(complex), (2,) * 4, "ABCD")


# One-based computational index pairs of the FLS matrix.
_FLS_DIAG = (1, 6, 11, 16)
_FLS_PAIRS = ((2, 5), (3, 9), (8, 14), (12, 15))


def fls_state(eps: float) -> DensityMatrix:
    """Four-qubit family interpolating between a bound entangled state (``eps = 0``)
    and a free entangled one (``eps = 1``); PPT across ``AB|CD`` for ``eps <= 0.5``.
    """
    eps = float(eps)
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"eps must lie in [0, 1], got {eps}")
    r = np.zeros((16, 16), dtype=complex)
    for i in _FLS_DIAG:
        r[i - 1, i - 1] = (1 - eps) / 4
    for i, j in _FLS_PAIRS:
        r[i - 1, i - 1] = r[j - 1, j - 1] = eps / 8
        r[i - 1, j - 1] = r[j - 1, i - 1] = -eps / 8
    return DensityMatrix.from_array(r, (2,) * 4, "ABCD")


def horodecki_state(alpha: float, labeling: str = "matrix") -> DensityMatrix:
    """Two-qutrit Horodecki state, separable / bound / free entangled on
    ``[2, 3]``, ``(3, 4]``, ``(4, 5]``.

    Parameters
    ----------
    alpha : float
        Mixing parameter in ``[2, 5]``.
    labeling : {"matrix", "decay"}
        ``"matrix"`` places the entries on the standard 9x9 pattern (support of
        the maximally entangled part on ``ee, uu, gg``).  ``"decay"`` relabels
        ``u <-> g`` on the first qutrit, i.e. the maximally entangled part sits
        on ``ee, gu, ug``.  The two differ by a local permutation, so spectra,
        partial-transpose spectra and energies coincide; only the response to
        level-specific decay differs.  The amplitude-damping dynamics use
        ``"decay"``.
    """
    alpha = float(alpha)
    if not 2.0 <= alpha <= 5.0:
        raise ValueError(f"alpha must lie in [2, 5], got {alpha}")
    r = np.zeros((9, 9), dtype=complex)
    for i in (0, 4, 8):
        for j in (0, 4, 8):
            r[i, j] = 2 / 21
    for i in (1, 5, 6):  # 01, 12, 20
        r[i, i] = alpha / 21
    for i in (2, 3, 7):  # 02, 10, 21
        r[i, i] = (5 - alpha) / 21
    if labeling == "decay":
        perm = np.array([0, 2, 1])
        p = np.kron(np.eye(3)[perm], np.eye(3))
        r = p @ r @ p.T
    elif labeling != "matrix":
        raise ValueError(f"unknown labeling {labeling!r}")
    return DensityMatrix.from_array(r, (3, 3), "AB")


def plus_product(n: int = 4) -> DensityMatrix:
    plus = np.full((2, 2), 0.5, dtype=complex)
    return DensityMatrix.from_array(reduce(np.kron, [plus] * n), (2,) * n)


def maximally_mixed(dims: Sequence[int] = (2, 2, 2, 2)) -> DensityMatrix:
    d = int(np.prod(dims))
    return DensityMatrix.from_array(np.eye(d, dtype=complex) / d, dims)


def thermal_state(beta: float, h) -> DensityMatrix:
    """Gibbs state ``exp(-beta H)/Z``; ``beta = inf`` gives the ground-space mixture."""
    m = _data(h)
    w, v = np.linalg.eigh(m)
    if np.isinf(beta):
        p = (np.abs(w - w[0]) < 1e-12).astype(float)
    else:
        p = np.exp(-beta * (w - w[0]))
    p /= p.sum()
    data = (v * p) @ v.conj().T
    space = h.space if hasattr(h, "space") else HilbertSpace((len(m),))
    return DensityMatrix(space, data)


def ground_state(dims: Sequence[int] = (2,)) -> DensityMatrix:
    """All factors in their lowest level (last basis vector)."""
    d = int(np.prod(dims))
    data = np.zeros((d, d), dtype=complex)
    data[-1, -1] = 1.0
    return DensityMatrix.from_array(data, dims)


def dephase(rho) -> DensityMatrix:
    """Complete dephasing in the energy (product) basis: drop all coherences."""
    data = np.diag(np.diag(_data(rho)))
    if isinstance(rho, DensityMatrix):
        return DensityMatrix(rho.space, data)
    return DensityMatrix.from_array(data, (len(data),))


def reference_states() -> dict[str, DensityMatrix]:
    """Separable comparison fuels for the four-qubit cluster."""
    return {
        "plus_product_4": plus_product(4),
        "maximally_mixed_4": maximally_mixed((2, 2, 2, 2)),
    }


# ------------------------------------------------------------ diagnostics


def _cut(space: HilbertSpace, cut: Sequence[int] | None) -> tuple[int, ...]:
    if cut is None:
        n = space.n_factors
        if n % 2:
            raise ValueError("no default balanced cut for an odd number of factors")
        cut = range(n // 2, n)
    return tuple(cut)


def negativity(rho, cut: Sequence[int] | None = None, dims: Sequence[int] | None = None) -> float:
    """``(||rho^{T_B}||_1 - 1)/2`` with ``B`` the factors in ``cut``.

    The default cut puts the second half of the factors in ``B``.
    """
    space = _space(rho, dims)
    pt = partial_transpose(_data(rho), _cut(space, cut), space.dims)
    w = np.linalg.eigvalsh(0.5 * (pt + pt.conj().T))
    return float(max(0.0, -np.sum(w[w < 0])))


def realignment_parameter(
    rho, cut: Sequence[int] | None = None, dims: Sequence[int] | None = None
) -> float:
    """``||R(rho)||_1 - 1`` with ``R[(i,k),(j,l)] = rho[(i,j),(k,l)]``.

    ``i, k`` index the complement of ``cut`` (party A), ``j, l`` the factors in
    ``cut`` (party B).  Positive values certify entanglement.
    """
    space = _space(rho, dims)
    b = _cut(space, cut)
    if not b or len(b) == space.n_factors or len(set(b)) != len(b):
        raise ValueError(f"bad bipartition {b}")
    a = tuple(k for k in range(space.n_factors) if k not in b)
    n = space.n_factors
    order = a + b
    t = _data(rho).reshape(space.dims * 2).transpose(order + tuple(n + k for k in order))
    da = int(np.prod([space.dims[k] for k in a]))
    db = int(np.prod([space.dims[k] for k in b]))
    t = t.reshape(da, db, da, db)  # rho[i, j, k, l]
    r = t.transpose(0, 2, 1, 3).reshape(da * da, db * db)
    return trace_norm(r) - 1.0


def qubit_permutation(rho, perm: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors of an ``n``-qubit matrix: new factor ``k`` is old ``perm[k]``."""
    m = _data(rho)
    n = int(round(np.log2(len(m))))
    perm = tuple(perm)
    t = m.reshape((2,) * (2 * n)).transpose(perm + tuple(n + p for p in perm))
    return t.reshape(m.shape)


def all_qubit_permutations(n: int = 4):
    return itertools.permutations(range(n))
