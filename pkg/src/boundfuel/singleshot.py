"""Single-collision heat transfer from a four-qubit cluster to a target qubit.

The cluster (factors 0..3) and the target (factor 4) interact through the
homogeneous central-spin exchange ``g sum_i (s_i^+ s_0^- + s_i^- s_0^+)``,
which conserves the total excitation number.  For clusters carrying only
heat-exchange coherences the target stays diagonal, so it has a temperature
at every time.
"""

from __future__ import annotations

import dataclasses
import math
from functools import reduce
from typing import Sequence

import numpy as np

from .core import DensityMatrix, _data, relative_entropy, von_neumann_entropy
from .curves import CurveOutput
from .states import SIGMA_MINUS, SIGMA_PLUS, SIGMA_Z, fls_state, ground_state

__all__ = [
    "CentralSpinSystem",
    "SingleShotSample",
    "effective_temperature",
    "evolve_single_shot",
    "single_shot_sweep",
    "repeated_interaction_line",
]


def _embed(op: np.ndarray, k: int, n: int) -> np.ndarray:
    return reduce(np.kron, [op if m == k else np.eye(2) for m in range(n)])


@dataclasses.dataclass(frozen=True, eq=False)
class CentralSpinSystem:
    """Cluster of ``n`` qubits plus one target, energies ``(omega/2) sigma_z``."""

    n: int = 4
    omega: float = 1.0
    g: float = 0.1

    def __post_init__(self):
        tot = self.n + 1
        h_a = sum(_embed(0.5 * self.omega * SIGMA_Z, k, tot) for k in range(self.n))
        h_tq = _embed(0.5 * self.omega * SIGMA_Z, self.n, tot)
        sp0, sm0 = _embed(SIGMA_PLUS, self.n, tot), _embed(SIGMA_MINUS, self.n, tot)
        h_int = self.g * sum(
            _embed(SIGMA_PLUS, k, tot) @ sm0 + _embed(SIGMA_MINUS, k, tot) @ sp0 for k in range(self.n)
        )
        h0 = h_a + h_tq
        comm = float(np.max(np.abs(h0 @ h_int - h_int @ h0)))
        if comm > 1e-9:
            raise ArithmeticError(f"interaction does not conserve energy ({comm:.2e})")
        w, v = np.linalg.eigh(h0 + h_int)
        for name, val in (("H_a", h_a), ("H_tq", h_tq), ("H_int", h_int), ("_w", w), ("_v", v)):
            object.__setattr__(self, name, val)
        object.__setattr__(self, "commutator_defect", comm)

    @property
    def H_ss(self) -> np.ndarray:
        return self.H_a + self.H_tq + self.H_int

    def evolve(self, rho0: np.ndarray, taus: np.ndarray) -> np.ndarray:
        """``U(tau) rho0 U(tau)^+`` for each ``tau`` (exact, via the eigenbasis)."""
        r = self._v.conj().T @ rho0 @ self._v
        out = np.empty((len(taus),) + rho0.shape, dtype=complex)
        for k, t in enumerate(taus):
            ph = np.exp(-1j * self._w * t)
            out[k] = self._v @ (ph[:, None] * r * ph.conj()[None, :]) @ self._v.conj().T
        return out


@dataclasses.dataclass(frozen=True)
class SingleShotSample:
    tau: float
    T_eff: float
    delta_Q: float
    delta_S: float
    sigma: float
    sigma_direct: float
    gibbs_defect: float
    energy_drift: float
    p_e: float

    @property
    def flagged(self) -> bool:
        """Non-Gibbsian target or non-positive/infinite temperature."""
        return self.gibbs_defect > 1e-9 or self.p_e >= 0.5


def effective_temperature(rho_q, omega: float = 1.0) -> float:
    """``omega / ln(p_g / p_e)`` for a diagonal qubit state (``|e>`` first).

    Returns ``0`` for the exact ground state, ``inf`` at equal populations and a
    negative value under population inversion.
    """
    m = _data(rho_q)
    p_e, p_g = float(m[0, 0].real), float(m[1, 1].real)
    if p_e <= 0:
        return 0.0
    if p_g <= 0:
        return -0.0
    if p_e == p_g:
        return math.inf
    return omega / math.log(p_g / p_e)


def _reduce_target(rho: np.ndarray, n: int) -> np.ndarray:
    d = 2**n
    return np.trace(rho.reshape(d, 2, d, 2), axis1=0, axis2=2)


def _samples(system: CentralSpinSystem, cluster, target0, taus) -> list[SingleShotSample]:
    c, t0 = _data(cluster), _data(target0)
    if c.shape != (2**system.n, 2**system.n) or t0.shape != (2, 2):
        raise ValueError("cluster must be 2^n-dimensional and target 2-dimensional")
    rho0 = np.kron(c, t0)
    h0 = system.H_a + system.H_tq
    e_tot0 = float(np.real(np.trace(h0 @ rho0)))
    h_q = 0.5 * system.omega * SIGMA_Z
    eq0 = float(np.real(np.trace(h_q @ t0)))
    s0 = von_neumann_entropy(t0)
    t_init = effective_temperature(t0, system.omega)
    out = []
    taus = np.asarray(taus, dtype=float)
    for tau, rho in zip(taus, system.evolve(rho0, taus)):
        rq = _reduce_target(rho, system.n)
        rq = 0.5 * (rq + rq.conj().T)
        defect = float(abs(rq[0, 1]))
        dq = float(np.real(np.trace(h_q @ rq))) - eq0
        ds = von_neumann_entropy(rq) - s0
        t_eff = effective_temperature(rq, system.omega)
        if t_eff == 0 or math.isinf(t_eff):
            sigma = ds
        else:
            sigma = ds - dq / t_eff
        # with a Gibbsian final target, sigma equals D(rho_q(0) || rho_q(tau))
        sig_d = relative_entropy(t0, rq) if abs(dq) > 0 or tau > 0 else 0.0
        drift = abs(float(np.real(np.trace(h0 @ rho))) - e_tot0)
        if tau == 0:
            t_eff = t_init
        out.append(SingleShotSample(float(tau), t_eff, dq, ds, sigma, sig_d, defect, drift, float(rq[0, 0].real)))
    return out


def evolve_single_shot(
    cluster: DensityMatrix, target0: DensityMatrix, tau: float, system: CentralSpinSystem | None = None
) -> SingleShotSample:
    system = system or CentralSpinSystem()
    return _samples(system, cluster, target0, [tau])[0]


def repeated_interaction_line(eps: float) -> float:
    """Repeated-interaction cavity temperature for GADC-processed FLS, in units of omega."""
    from .micromaser import CavityConfig, analytic_temperature, process_cluster, pump_coefficients_4qubit

    cav = CavityConfig()
    c = pump_coefficients_4qubit(process_cluster(fls_state(eps), 50e-9, cav))
    return analytic_temperature(c, cav).reduced


def single_shot_sweep(
    eps_list: Sequence[float],
    taus: Sequence[float] | None = None,
    system: CentralSpinSystem | None = None,
) -> dict[float, CurveOutput]:
    """Per-``eps`` curves of temperature, heat, entropy change and entropy production.

    The target starts in its ground state; ``metadata["T_repeated"]`` holds the
    repeated-interaction temperature of the same fuel for comparison.
    """
    system = system or CentralSpinSystem()
    taus = np.arange(0.0, 100.0 + 1e-9, 0.05) if taus is None else np.asarray(taus, dtype=float)
    target = ground_state((2,))
    out = {}
    for eps in eps_list:
        samples = _samples(system, fls_state(eps), target, taus)
        cols = {
            name: np.array([getattr(s, name) for s in samples])
            for name in (
                "T_eff", "delta_Q", "delta_S", "sigma", "gibbs_defect",
                "sigma_direct", "energy_drift", "p_e",
            )
        }  # fmt: skip
        n_flag = int(sum(s.flagged for s in samples))
        out[eps] = CurveOutput(
            "tau",
            taus,
            cols,
            {"eps": eps, "T_repeated": repeated_interaction_line(eps), "flagged_samples": n_flag},
        )
    return out


def recurrence_ratio(curve: CurveOutput) -> float:
    """Smallest ``delta_Q`` after its first maximum, relative to the global maximum."""
    dq = curve["delta_Q"]
    k = int(np.argmax(dq > 0.5 * dq.max()))
    return float(dq[k:].min() / dq.max())
