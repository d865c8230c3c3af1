# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: RK4 Lindblad stepping and local Kraus application.

Both target the small dense problems of this package (d <= ~64), where numpy
call overhead dominates over the arithmetic.
"""

import numpy as np
cimport numpy as cnp

ctypedef double complex cplx

cnp.import_array()


cdef void _matmul(const cplx[:, ::1] a, const cplx[:, ::1] b, cplx[:, ::1] out,
                  Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i, j, k
    cdef cplx aik
    for i in range(n):
        for j in range(n):
            out[i, j] = 0
        for k in range(n):
            aik = a[i, k]
            if aik == 0:
                continue
            for j in range(n):
                out[i, j] = out[i, j] + aik * b[k, j]


cdef void _rhs(const cplx[:, ::1] r, const cplx[:, ::1] heff,
               const cplx[:, :, ::1] jumps, cplx[:, ::1] out,
               cplx[:, ::1] tmp, cplx[:, ::1] tmp2, Py_ssize_t n,
               Py_ssize_t nj) noexcept nogil:
    cdef Py_ssize_t i, j, k, q
    cdef cplx acc, mi = -1j
    # -i (Heff r - r Heff^+)
    for i in range(n):
        for j in range(n):
            acc = 0
            for k in range(n):
                acc = acc + heff[i, k] * r[k, j] - r[i, k] * (heff[j, k].conjugate())
            out[i, j] = mi * acc
    for q in range(nj):
        # tmp = L r
        for i in range(n):
            for j in range(n):
                tmp[i, j] = 0
            for k in range(n):
                acc = jumps[q, i, k]
                if acc == 0:
                    continue
                for j in range(n):
                    tmp[i, j] = tmp[i, j] + acc * r[k, j]
        # out += tmp L^+
        for j in range(n):
            for k in range(n):
                acc = jumps[q, j, k].conjugate()
                if acc == 0:
                    continue
                for i in range(n):
                    out[i, j] = out[i, j] + tmp[i, k] * acc


def lindblad_rk4(rho0, heff, jumps, double dt, Py_ssize_t n_steps, Py_ssize_t stride):
    cdef cnp.ndarray[cplx, ndim=2] rho_a = np.ascontiguousarray(rho0, dtype=np.complex128).copy()
    cdef cplx[:, ::1] rho = rho_a
    cdef const cplx[:, ::1] h = np.ascontiguousarray(heff, dtype=np.complex128)
    cdef const cplx[:, :, ::1] L = np.ascontiguousarray(jumps, dtype=np.complex128)
    cdef Py_ssize_t n = rho.shape[0]
    cdef Py_ssize_t nj = L.shape[0]
    cdef Py_ssize_t n_samples = n_steps // stride + 1
    out_a = np.empty((n_samples, n, n), dtype=np.complex128)
    cdef cplx[:, :, ::1] out = out_a
    cdef cplx[:, ::1] k1 = np.empty((n, n), dtype=np.complex128)
    cdef cplx[:, ::1] k2 = np.empty((n, n), dtype=np.complex128)
    cdef cplx[:, ::1] k3 = np.empty((n, n), dtype=np.complex128)
    cdef cplx[:, ::1] k4 = np.empty((n, n), dtype=np.complex128)
    cdef cplx[:, ::1] y = np.empty((n, n), dtype=np.complex128)
    cdef cplx[:, ::1] tmp = np.empty((n, n), dtype=np.complex128)
    cdef cplx[:, ::1] tmp2 = np.empty((n, n), dtype=np.complex128)
    cdef Py_ssize_t step, i, j, s = 1
    cdef double half = 0.5 * dt, sixth = dt / 6.0
    out[0, :, :] = rho
    with nogil:
        for step in range(1, n_steps + 1):
            _rhs(rho, h, L, k1, tmp, tmp2, n, nj)
            for i in range(n):
                for j in range(n):
                    y[i, j] = rho[i, j] + half * k1[i, j]
            _rhs(y, h, L, k2, tmp, tmp2, n, nj)
            for i in range(n):
                for j in range(n):
                    y[i, j] = rho[i, j] + half * k2[i, j]
            _rhs(y, h, L, k3, tmp, tmp2, n, nj)
            for i in range(n):
                for j in range(n):
                    y[i, j] = rho[i, j] + dt * k3[i, j]
            _rhs(y, h, L, k4, tmp, tmp2, n, nj)
            for i in range(n):
                for j in range(n):
                    rho[i, j] = rho[i, j] + sixth * (k1[i, j] + 2 * k2[i, j] + 2 * k3[i, j] + k4[i, j])
            if step % stride == 0:
                out[s, :, :] = rho
                s += 1
    return out_a


def kraus_apply_local(rho, kraus, Py_ssize_t left, Py_ssize_t d, Py_ssize_t right):
    cdef const cplx[:, ::1] r = np.ascontiguousarray(rho, dtype=np.complex128)
    cdef const cplx[:, :, ::1] K = np.ascontiguousarray(kraus, dtype=np.complex128)
    cdef Py_ssize_t n = left * d * right
    cdef Py_ssize_t nk = K.shape[0]
    out_a = np.zeros((n, n), dtype=np.complex128)
    cdef cplx[:, ::1] out = out_a
    cdef Py_ssize_t q, i, a, b, c, e, jr, l, m, row, col
    cdef cplx kab, kec
    with nogil:
        for q in range(nk):
            for a in range(d):
                for b in range(d):
                    kab = K[q, a, b]
                    if kab == 0:
                        continue
                    for e in range(d):
                        for c in range(d):
                            kec = K[q, e, c].conjugate()
                            if kec == 0:
                                continue
                            kec = kab * kec
                            # out[(i,a,j),(l,e,m)] += K_ab rho[(i,b,j),(l,c,m)] K*_ec
                            for i in range(left):
                                for jr in range(right):
                                    row = (i * d + a) * right + jr
                                    for l in range(left):
                                        for m in range(right):
                                            col = (l * d + e) * right + m
                                            out[row, col] = out[row, col] + kec * r[(i * d + b) * right + jr, (l * d + c) * right + m]
    return out_a
