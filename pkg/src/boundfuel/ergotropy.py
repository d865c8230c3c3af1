"""Ergotropy: maximal work extractable by a cyclic unitary."""

from __future__ import annotations

import dataclasses
from typing import Sequence

import numpy as np

from .channels import LindbladGenerator, lindblad_integrate
from .constants import TOL
from .core import DensityMatrix, _data, _space, partial_transpose
from .curves import CurveOutput
from .states import (
    fls_state,
    horodecki_state,
    negativity,
    qubit_hamiltonian,
    qutrit_hamiltonian,
    realignment_parameter,
)

__all__ = [
    "ErgotropyResult",
    "ergotropy",
    "optimal_unitary",
    "fls_ergotropy_formula",
    "horodecki_ergotropy_formula",
    "HORODECKI_BRANCH_GAP",
    "ergotropy_curve_fls",
    "ergotropy_curve_horodecki",
    "ergotropy_dynamics",
]


@dataclasses.dataclass(frozen=True, eq=False)
class ErgotropyResult:
    W: float
    E_initial: float
    E_final: float
    passive_state: DensityMatrix


def _sorted_pairs(rho: np.ndarray, h: np.ndarray):
    if rho.shape != h.shape:
        raise ValueError(f"state {rho.shape} and Hamiltonian {h.shape} differ in dimension")
    r, rv = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    e, ev = np.linalg.eigh(0.5 * (h + h.conj().T))
    # r descending, e ascending; eigh already returns ascending, stable order
    return r[::-1], rv[:, ::-1], e, ev


def ergotropy(rho, h, clamp: float = TOL.ergotropy_clamp) -> ErgotropyResult:
    """Work ``W = Tr(rho H) - sum_j r_j e_j`` with ``r`` descending and ``e`` ascending.

    Parameters
    ----------
    rho : DensityMatrix or ndarray
    h : HermitianOperator or ndarray
    clamp : float
        Negative ``W`` within ``clamp`` is reported as 0; below it is an error.
    """
    r_m, h_m = _data(rho), _data(h)
    r, _, e, ev = _sorted_pairs(r_m, h_m)
    e0 = float(np.real(np.einsum("ij,ji->", r_m, h_m)))
    ef = float(np.dot(r, e))
    w = e0 - ef
    if w < 0:
        if w < -clamp:
            raise ArithmeticError(f"negative ergotropy {w:.3e}")
        w = 0.0
    passive = (ev * r) @ ev.conj().T
    space = _space(rho, [len(r_m)]) if not hasattr(rho, "space") else rho.space
    return ErgotropyResult(w, e0, ef, DensityMatrix(space, passive, tol=1e-9))


def optimal_unitary(rho, h) -> np.ndarray:
    """``U = sum_j |e_j><r_j|`` mapping ``rho`` onto its passive state."""
    _, rv, _, ev = _sorted_pairs(_data(rho), _data(h))
    return ev @ rv.conj().T


# Printed closed forms, in units of omega.
def fls_ergotropy_formula(eps) -> np.ndarray:
    eps = np.asarray(eps, dtype=float)
    return np.where(eps <= 0.5, 1.25 - eps, 0.25 + eps)


def horodecki_ergotropy_formula(alpha) -> np.ndarray:
    """Two linear branches on ``[2, 2.5)`` and ``[2.5, 5]``."""
    alpha = np.asarray(alpha, dtype=float)
    return np.where(alpha < 2.5, 0.52144 - 0.071429 * alpha, 0.16667 + 0.071429 * alpha)


# Gap between the two printed branches at alpha = 2.5.
HORODECKI_BRANCH_GAP = float(
    (0.16667 + 0.071429 * 2.5) - (0.52144 - 0.071429 * 2.5)
)


def ergotropy_curve_fls(eps_grid: Sequence[float], omega: float = 1.0) -> CurveOutput:
    h = qubit_hamiltonian(4, omega)
    w = np.array([ergotropy(fls_state(e), h).W for e in eps_grid])
    ref = omega * fls_ergotropy_formula(eps_grid)
    return CurveOutput(
        "eps", eps_grid, {"W": w, "W_formula": ref, "abs_diff": np.abs(w - ref)}
    )


def ergotropy_curve_horodecki(alpha_grid: Sequence[float], omega: float = 1.0) -> CurveOutput:
    h = qutrit_hamiltonian(2, omega)
    w = np.array([ergotropy(horodecki_state(a), h).W for a in alpha_grid])
    ref = omega * horodecki_ergotropy_formula(alpha_grid)
    meta = {
        "branch_gap_at_2.5": HORODECKI_BRANCH_GAP,
        "note": "printed branches are discontinuous at alpha = 2.5",
    }
    return CurveOutput(
        "alpha", alpha_grid, {"W": w, "W_formula": ref, "abs_diff": np.abs(w - ref)}, meta
    )


def ergotropy_dynamics(
    rho0,
    gamma_e: float,
    gamma_u: float,
    t_end: float,
    dt: float | None = None,
    stride: int = 10,
    h=None,
) -> CurveOutput:
    """Ergotropy, negativity and realignment along two-qutrit amplitude damping.

    Time is reported as ``gamma_e t``.
    """
    gen = LindbladGenerator.qutrit_amplitude_damping(gamma_e, gamma_u)
    h = qutrit_hamiltonian(2) if h is None else h
    traj = lindblad_integrate(rho0, gen, t_end, dt=dt, stride=stride)
    w = np.array([ergotropy(s, h).W for s in traj.states])
    neg = np.array([negativity(s, (1,), (3, 3)) for s in traj.states])
    pt_min = np.array([_pt_min_eig(s) for s in traj.states])
    real = np.array([realignment_parameter(s, (1,), (3, 3)) for s in traj.states])
    scale = gamma_e if gamma_e > 0 else 1.0
    return CurveOutput(
        "gamma_e_t",
        traj.times * scale,
        {"ergotropy": w, "negativity": neg, "pt_min_eig": pt_min, "realignment": real},
        {"gamma_e": gamma_e, "gamma_u": gamma_u},
    )


def _pt_min_eig(rho: np.ndarray) -> float:
    pt = partial_transpose(rho, (1,), (3, 3))
    return float(np.linalg.eigvalsh(0.5 * (pt + pt.conj().T))[0])


def horodecki_dynamics(alpha: float, gamma_u_ratio: float = 0.5, t_end: float = 1.0, dt: float = 2e-4):
    """Convenience wrapper with ``gamma_e = 1`` on the decay-labelled Horodecki state."""
    return ergotropy_dynamics(
        horodecki_state(alpha, labeling="decay"), 1.0, gamma_u_ratio, t_end, dt=dt, stride=10
    )


def zero_crossing(x: np.ndarray, y: np.ndarray, level: float = 0.0, floor: float = 1e-12) -> float:
    """First ``x`` where ``y`` drops to ``level`` (linear interpolation)."""
    y = np.asarray(y) - level
    pos = y > floor
    for k in range(1, len(y)):
        if pos[k - 1] and not pos[k]:
            x0, x1, y0, y1 = x[k - 1], x[k], y[k - 1], y[k]
            return float(x0 + (x1 - x0) * y0 / (y0 - y1)) if y0 != y1 else float(x1)
    return float("nan")
