"""Local noise: Kraus channels and the Lindblad integrator.

Kraus channels act on one tensor factor at a time.  The generalized
amplitude damping channel (GADC) models the thermal noise an atomic cluster
picks up on its way to the cavity; the Lindblad integrator handles local
amplitude damping of qutrits.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Sequence

import numpy as np

from . import kernels
from .constants import TOL
from .core import DensityMatrix, HilbertSpace, _data, _space

__all__ = [
    "KrausChannel",
    "gadc",
    "gadc_strength",
    "identity_channel",
    "complete_dephasing",
    "apply_local",
    "apply_all",
    "LindbladGenerator",
    "Trajectory",
    "lindblad_integrate",
]


@dataclasses.dataclass(frozen=True, eq=False)
class KrausChannel:
    """CPTP map ``rho -> sum_k M_k rho M_k^+`` on a single ``d``-level factor.

    Attributes
    ----------
    kraus : ndarray, shape (K, d, d)
    params : dict
        Physical parameters the channel was built from (for bookkeeping).
    """

    kraus: np.ndarray
    params: dict = dataclasses.field(default_factory=dict)

    def __post_init__(self):
        k = np.asarray(self.kraus, dtype=complex)
        if k.ndim != 3 or k.shape[1] != k.shape[2]:
            raise ValueError("kraus must have shape (K, d, d)")
        defect = np.max(np.abs(np.einsum("kji,kjl->il", k.conj(), k) - np.eye(k.shape[1])))
        if defect > TOL.kraus:
            raise ValueError(f"Kraus operators are not complete (defect {defect:.3e})")
        k.setflags(write=False)
        object.__setattr__(self, "kraus", k)

    @property
    def dim(self) -> int:
        return self.kraus.shape[1]

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        r = _data(rho)
        return np.einsum("kab,bc,kdc->ad", self.kraus, r, self.kraus.conj())

    def superoperator(self) -> np.ndarray:
        """Row-major ``vec`` representation: ``vec(M r M^+) = (M kron M*) vec(r)``."""
        return sum(np.kron(m, m.conj()) for m in self.kraus)


def gadc(nbar: float, p: float) -> KrausChannel:
    """Generalized amplitude damping towards a thermal qubit with occupation ``nbar``.

    Kraus operators, with ``a = (nbar+1)/(2 nbar+1)`` and ``b = nbar/(2 nbar+1)``::

        sqrt(a) (|g><g| + sqrt(1-p) |e><e|)
        sqrt(b) (sqrt(1-p) |g><g| + |e><e|)
        sqrt(a p) |g><e|
        sqrt(b p) |e><g|
    """
    if nbar < 0:
        raise ValueError(f"nbar must be >= 0, got {nbar}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    a = (nbar + 1) / (2 * nbar + 1)
    b = nbar / (2 * nbar + 1)
    s = math.sqrt(1 - p)
    ee = np.array([[1, 0], [0, 0]], dtype=complex)
    gg = np.array([[0, 0], [0, 1]], dtype=complex)
    ge = np.array([[0, 0], [1, 0]], dtype=complex)  # |g><e|
    eg = ge.T.copy()
    ks = np.stack(
        [
            math.sqrt(a) * (gg + s * ee),
            math.sqrt(b) * (s * gg + ee),
            math.sqrt(a * p) * ge,
            math.sqrt(b * p) * eg,
        ]
    )
    return KrausChannel(ks, {"nbar": nbar, "p": p})


def gadc_strength(gamma: float, t_tr: float, nbar: float) -> float:
    """``p = 1 - exp(-gamma t_tr (1 + 2 nbar)/2)`` for angular rate ``gamma``."""
    if gamma < 0 or t_tr < 0:
        raise ValueError("gamma and t_tr must be non-negative")
    return -math.expm1(-gamma * t_tr * (1 + 2 * nbar) / 2)


def identity_channel(d: int = 2) -> KrausChannel:
    return KrausChannel(np.eye(d, dtype=complex)[None], {})


def complete_dephasing(d: int = 2) -> KrausChannel:
    """Projective measurement in the energy basis, outcome forgotten."""
    ks = np.zeros((d, d, d), dtype=complex)
    for k in range(d):
        ks[k, k, k] = 1.0
    return KrausChannel(ks, {})


def _wrap(rho, data, space: HilbertSpace):
    if isinstance(rho, DensityMatrix):
        return DensityMatrix(space, data, tol=TOL.cptp)
    return data


def apply_local(channel: KrausChannel, rho, factor: int, dims: Sequence[int] | None = None):
    """Apply ``channel`` to tensor factor ``factor`` of ``rho``."""
    space = _space(rho, dims)
    if not 0 <= factor < space.n_factors:
        raise ValueError(f"factor {factor} out of range")
    d = space.dims[factor]
    if d != channel.dim:
        raise ValueError(f"channel acts on d={channel.dim}, factor {factor} has d={d}")
    left = int(np.prod(space.dims[:factor]))
    right = int(np.prod(space.dims[factor + 1 :]))
    out = kernels.kraus_apply_local(_data(rho), channel.kraus, left, d, right)
    return _wrap(rho, out, space)


def apply_all(channel: KrausChannel, rho, dims: Sequence[int] | None = None):
    """Apply ``channel`` independently to every factor of ``rho``."""
    space = _space(rho, dims)
    data = _data(rho)
    for k in range(space.n_factors):
        data = apply_local(channel, data, k, space.dims)
    return _wrap(rho, data, space)


# --------------------------------------------------------------- Lindblad


def _embed(op: np.ndarray, k: int, dims: Sequence[int]) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    for m, d in enumerate(dims):
        out = np.kron(out, op if m == k else np.eye(d))
    return out


@dataclasses.dataclass(frozen=True, eq=False)
class LindbladGenerator:
    """``d rho/dt = -i[H, rho] + sum_k (L_k rho L_k^+ - {L_k^+ L_k, rho}/2)``.

    Rates are folded into the jump operators.
    """

    space: HilbertSpace
    jumps: tuple[np.ndarray, ...]
    hamiltonian: np.ndarray | None = None
    rates: dict = dataclasses.field(default_factory=dict)

    @classmethod
    def qutrit_amplitude_damping(
        cls, gamma_e: float, gamma_u: float, n_qutrits: int = 2
    ) -> "LindbladGenerator":
        """Independent decay ``e -> g`` (rate ``gamma_e``) and ``u -> g`` (``gamma_u``)."""
        if gamma_e < 0 or gamma_u < 0:
            raise ValueError("rates must be non-negative")
        dims = (3,) * n_qutrits
        sge = np.zeros((3, 3), dtype=complex)
        sge[2, 0] = 1.0
        sgu = np.zeros((3, 3), dtype=complex)
        sgu[2, 1] = 1.0
        jumps = []
        for k in range(n_qutrits):
            jumps.append(math.sqrt(gamma_e) * _embed(sge, k, dims))
            jumps.append(math.sqrt(gamma_u) * _embed(sgu, k, dims))
        return cls(HilbertSpace(dims), tuple(jumps), None, {"gamma_e": gamma_e, "gamma_u": gamma_u})

    @property
    def dim(self) -> int:
        return self.space.dim

    def effective_hamiltonian(self) -> np.ndarray:
        h = np.zeros((self.dim, self.dim), dtype=complex)
        if self.hamiltonian is not None:
            h += np.asarray(self.hamiltonian, dtype=complex)
        for L in self.jumps:
            h -= 0.5j * (L.conj().T @ L)
        return h

    def __call__(self, rho) -> np.ndarray:
        r = _data(rho)
        heff = self.effective_hamiltonian()
        out = -1j * (heff @ r - r @ heff.conj().T)
        for L in self.jumps:
            out += L @ r @ L.conj().T
        return out

    def max_rate(self) -> float:
        if not self.rates:
            return max((np.linalg.norm(L, 2) ** 2 for L in self.jumps), default=0.0)
        return max(self.rates.values())


@dataclasses.dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # (n_samples, d, d)
    space: HilbertSpace

    def __len__(self) -> int:
        return len(self.times)

    def state(self, k: int) -> DensityMatrix:
        return DensityMatrix(self.space, self.states[k], tol=TOL.trajectory)


def lindblad_integrate(
    rho0,
    gen: LindbladGenerator,
    t_end: float,
    dt: float | None = None,
    stride: int = 10,
    tol: float = TOL.trajectory,
) -> Trajectory:
    """Fixed-step RK4 integration from ``t = 0`` to ``t_end``.

    ``dt`` defaults to ``1e-3`` over the largest rate.  ``t_end`` is rounded to
    a whole number of steps.  Every stored sample is checked for Hermiticity,
    unit trace and positivity at ``tol``; a violation raises
    ``ArithmeticError`` (usually a sign that ``dt`` is too large).
    """
    if dt is None:
        rate = gen.max_rate()
        dt = 1e-3 / rate if rate > 0 else 1e-3
    if dt <= 0:
        raise ValueError("dt must be positive")
    if stride < 1:
        raise ValueError("stride must be >= 1")
    n_steps = int(round(t_end / dt))
    n_steps -= n_steps % stride
    r0 = _data(rho0)
    if r0.shape != (gen.dim, gen.dim):
        raise ValueError("initial state does not match the generator space")
    jumps = np.array(gen.jumps, dtype=complex).reshape(len(gen.jumps), gen.dim, gen.dim)
    states = kernels.lindblad_rk4(r0, gen.effective_hamiltonian(), jumps, dt, n_steps, stride)
    times = np.arange(len(states)) * (dt * stride)
    for k, s in enumerate(states):
        herm = np.max(np.abs(s - s.conj().T))
        tr = abs(np.trace(s) - 1)
        lo = np.linalg.eigvalsh(0.5 * (s + s.conj().T))[0]
        if herm > tol or tr > tol or lo < -tol:
            raise ArithmeticError(
                f"state invariants violated at t={times[k]:.6g} "
                f"(herm {herm:.2e}, trace {tr:.2e}, min eig {lo:.2e}); reduce dt"
            )
    return Trajectory(times, states, gen.space)
