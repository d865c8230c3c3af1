"""Pure numpy implementations of the hot kernels (fallback backend)."""

import numpy as np


def lindblad_rk4(rho0, heff, jumps, dt, n_steps, stride):
    """Integrate ``d rho/dt = -i(Heff rho - rho Heff^+) + sum_k L_k rho L_k^+``.

    ``heff`` must already contain the ``-i/2 sum L^+ L`` anti-Hermitian part.
    Returns the samples taken every ``stride`` steps, starting with ``rho0``.
    """
    rho = np.array(rho0, dtype=complex, copy=True)
    heff = np.asarray(heff, dtype=complex)
    heff_dag = heff.conj().T
    jumps = np.asarray(jumps, dtype=complex)
    jumps_dag = np.conj(np.swapaxes(jumps, 1, 2))
    has_jumps = jumps.shape[0] > 0

    def rhs(r):
        out = -1j * (heff @ r - r @ heff_dag)
        if has_jumps:
            out += (jumps @ r @ jumps_dag).sum(axis=0)
        return out

    n_samples = n_steps // stride + 1
    out = np.empty((n_samples,) + rho.shape, dtype=complex)
    out[0] = rho
    half = 0.5 * dt
    s = 1
    for step in range(1, n_steps + 1):
        k1 = rhs(rho)
        k2 = rhs(rho + half * k1)
        k3 = rhs(rho + half * k2)
        k4 = rhs(rho + dt * k3)
        rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if step % stride == 0:
            out[s] = rho
            s += 1
    return out


def kraus_apply_local(rho, kraus, left, d, right):
    """Apply ``sum_k (1 x K_k x 1) rho (1 x K_k x 1)^+`` on the middle factor."""
    r = np.asarray(rho, dtype=complex).reshape(left, d, right, left, d, right)
    kraus = np.asarray(kraus, dtype=complex)
    out = np.einsum("kab,ibjlcm,kdc->iajldm", kraus, r, kraus.conj(), optimize=True)
    n = left * d * right
    return out.reshape(n, n)
