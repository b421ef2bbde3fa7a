# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled iteration kernels; see ``_kernel_py`` for the reference semantics."""
from libc.math cimport atan2, sqrt


cdef inline double _psi(double complex* M, Py_ssize_t n) noexcept nogil:
    cdef double mr = 0.0, mi = 0.0
    cdef Py_ssize_t a
    for a in range(n * n):
        mr += M[a].real
        mi += M[a].imag
    return <double>(n * n) - (mr * mr + mi * mi)


cdef inline void _scale_line(double complex* p, Py_ssize_t stride, Py_ssize_t n,
                             double* phase, bint track) noexcept nogil:
    # multiply a row (stride 1) or column (stride n) by conj(s)/|s|, s its sum
    cdef Py_ssize_t j
    cdef double sr = 0.0, si = 0.0, mod, fr, fi, xr, xi
    for j in range(n):
        sr += p[j * stride].real
        si += p[j * stride].imag
    mod = sqrt(sr * sr + si * si)
    if mod == 0.0:
        return
    if track:
        phase[0] -= atan2(si, sr)
    fr = sr / mod
    fi = -si / mod
    for j in range(n):
        xr = p[j * stride].real
        xi = p[j * stride].imag
        p[j * stride] = (xr * fr - xi * fi) + 1j * (xr * fi + xi * fr)


cdef inline void _step(double complex* M, double* lam, double* rho, Py_ssize_t n,
                       bint track) noexcept nogil:
    cdef Py_ssize_t a
    for a in range(n):
        _scale_line(M + a * n, 1, n, lam + a, track)
    for a in range(n):
        _scale_line(M + a, n, n, rho + a, track)


def run_steps(double complex[:, ::1] M, double[::1] lam, double[::1] rho,
              Py_ssize_t max_steps, double tol,
              double[::1] psi_out, double[::1] res_out):
    cdef Py_ssize_t n = M.shape[0]
    cdef Py_ssize_t i, a, b
    cdef double complex s, m
    cdef double res, d
    cdef Py_ssize_t done = max_steps
    with nogil:
        for i in range(max_steps):
            _step(&M[0, 0], &lam[0], &rho[0], n, True)
            res = 0.0
            m = 0
            for a in range(n):
                s = 0
                for b in range(n):
                    s = s + M[a, b]
                m = m + s
                d = sqrt((s.real - 1.0) * (s.real - 1.0) + s.imag * s.imag)
                if d > res:
                    res = d
            for b in range(n):
                s = 0
                for a in range(n):
                    s = s + M[a, b]
                d = sqrt((s.real - 1.0) * (s.real - 1.0) + s.imag * s.imag)
                if d > res:
                    res = d
            psi_out[i] = <double>(n * n) - (m.real * m.real + m.imag * m.imag)
            res_out[i] = res
            if res < tol:
                done = i + 1
                break
    return done


def batch_psi(double complex[:, :, ::1] Ms, Py_ssize_t steps, double[:, ::1] psi_out):
    cdef Py_ssize_t S = Ms.shape[0]
    cdef Py_ssize_t n = Ms.shape[1]
    cdef Py_ssize_t idx, k
    cdef double complex* M
    cdef double dummy = 0.0
    if S == 0:
        return
    with nogil:
        for idx in range(S):
            M = &Ms[idx, 0, 0]
            psi_out[idx, 0] = _psi(M, n)
            for k in range(1, steps + 1):
                # phases are not reported by batch runs
                _step(M, &dummy, &dummy, n, False)
                psi_out[idx, k] = _psi(M, n)
