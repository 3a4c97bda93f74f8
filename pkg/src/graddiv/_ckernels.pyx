# cython: language_level=3
"""Compiled special-function kernels (per-point scalar loops).

Mirrors graddiv._pykernels exactly; see that module for the contracts.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sin, cos, sqrt, fabs, M_PI

cnp.import_array()

cdef double RESCALE_AT = 1e250
cdef double START = 1e-280


cdef double _series(int order, double z) noexcept nogil:
    cdef double pref = 1.0, total = 1.0, term = 1.0
    cdef double mz2 = -0.5 * z * z
    cdef int i, k
    for i in range(1, order + 1):
        pref *= z / (2 * i + 1)
    for k in range(1, 80):
        term = term * mz2 / (k * (2 * order + 2 * k + 1))
        total += term
        if fabs(term) <= 1e-17 * fabs(total):
            break
    return pref * total


cdef int _miller_start(int n, double z) noexcept nogil:
    cdef double top = n + 1.0
    if z > top:
        top = z
    return <int>(top + 20 + sqrt(40.0 * top))


cdef inline void _store(int n, int order, double value, double* vals) noexcept nogil:
    if order == n - 1:
        vals[0] = value
    elif order == n:
        vals[1] = value
    elif order == n + 1:
        vals[2] = value


cdef void _triplet_point(int n, double z, double* o0, double* o1, double* o2) noexcept nogil:
    cdef double vals[3]
    cdef int orders[3]
    cdef int row, ell, start
    cdef double jm, j, jn, s, c, f, f_next, f_prev, f1, j0, j1, scale
    orders[0] = n - 1
    orders[1] = n
    orders[2] = n + 1
    vals[0] = 0.0
    vals[1] = 0.0
    vals[2] = 0.0
    if z == 0.0:
        if n == 0:
            vals[1] = 1.0
        elif n == 1:
            vals[0] = 1.0
    elif z < 0.1 * (n + 1):
        for row in range(3):
            if orders[row] >= 0:
                vals[row] = _series(orders[row], z)
    elif z >= n + 1:
        s = sin(z)
        c = cos(z)
        jm = s / z
        j = s / (z * z) - c / z
        _store(n, 0, jm, vals)
        _store(n, 1, j, vals)
        for ell in range(1, n + 1):
            jn = (2 * ell + 1) / z * j - jm
            jm = j
            j = jn
            _store(n, ell + 1, j, vals)
    else:
        start = _miller_start(n, z)
        f_next = 0.0
        f = START
        f1 = 0.0
        for ell in range(start, 0, -1):
            for row in range(3):
                if orders[row] == ell:
                    vals[row] = f
            if ell == 1:
                f1 = f
            f_prev = (2 * ell + 1) / z * f - f_next
            f_next = f
            f = f_prev
            if fabs(f) > RESCALE_AT:
                f /= RESCALE_AT
                f_next /= RESCALE_AT
                f1 /= RESCALE_AT
                for row in range(3):
                    vals[row] /= RESCALE_AT
        for row in range(3):
            if orders[row] == 0:
                vals[row] = f
        s = sin(z)
        c = cos(z)
        j0 = s / z
        j1 = s / (z * z) - c / z
        if fabs(f) >= fabs(f1):
            scale = j0 / f
        else:
            scale = j1 / f1
        for row in range(3):
            vals[row] *= scale
    o0[0] = vals[0]
    o1[0] = vals[1]
    o2[0] = vals[2]


def sph_bessel_triplet(int n, z):
    """Return rows (j_{n-1}, j_n, j_{n+1}) evaluated at every z >= 0."""
    cdef double[::1] zv = np.ascontiguousarray(z, dtype=np.float64).ravel()
    cdef Py_ssize_t i, npts = zv.shape[0]
    out = np.zeros((3, npts))
    cdef double[:, ::1] ov = out
    with nogil:
        for i in range(npts):
            _triplet_point(n, zv[i], &ov[0, i], &ov[1, i], &ov[2, i])
    return out


cdef double _pbar(int n, int k, double seed, const double* a, double x, double s,
                  int power) noexcept nogil:
    # a[ell] is the degree recurrence coefficient for order k, seed the P_k^k prefactor
    cdef double p_prev, p, tmp
    cdef int i, ell
    if k > n or k < 0:
        return 0.0
    p_prev = seed
    for i in range(power):
        p_prev *= s
    if n == k:
        return p_prev
    p = a[k + 1] * x * p_prev
    for ell in range(k + 2, n + 1):
        tmp = a[ell] * (x * p - p_prev / a[ell - 1])
        p_prev = p
        p = tmp
    return p


cdef _column_coeffs(int n, int k):
    """Seed prefactor and recurrence coefficients for order k up to degree n."""
    a = np.zeros(max(n + 2, 2))
    if k < 0 or k > n:
        return 0.0, a
    seed = 1.0 / sqrt(4.0 * M_PI)
    for i in range(1, k + 1):
        seed *= sqrt((2 * i + 1) / (2.0 * i))
    if k + 1 <= n:
        a[k + 1] = sqrt(2 * k + 3.0)
    for ell in range(k + 2, n + 1):
        a[ell] = sqrt((4.0 * ell * ell - 1) / (<double>ell * ell - <double>k * k))
    return seed, a


def legendre_triplet(int n, int k, x, s):
    """Return rows (P, dP/dtheta, P/sin(theta)) for orthonormal P_n^k."""
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef double[::1] sv = np.ascontiguousarray(s, dtype=np.float64).ravel()
    cdef Py_ssize_t i, npts = xv.shape[0]
    out = np.zeros((3, npts))
    cdef double[:, ::1] ov = out
    cdef double cl, cu, cn
    cdef int klo = 1 if k == 0 else k - 1
    cdef int khi = k + 1
    seed0, a0_arr = _column_coeffs(n, k)
    seedl, al_arr = _column_coeffs(n, klo)
    seedh, ah_arr = _column_coeffs(n, khi)
    cdef double s0 = seed0, sl = seedl, sh = seedh
    cdef double[::1] a0 = a0_arr
    cdef double[::1] al = al_arr
    cdef double[::1] ah = ah_arr
    cn = sqrt(n * (n + 1.0))
    cl = sqrt((n + k) * (n - k + 1.0))
    cu = sqrt((n + k + 1.0) * (n - k))
    with nogil:
        for i in range(npts):
            ov[0, i] = _pbar(n, k, s0, &a0[0], xv[i], sv[i], k)
            if k == 0:
                ov[1, i] = -cn * _pbar(n, 1, sl, &al[0], xv[i], sv[i], 1)
            else:
                ov[1, i] = 0.5 * (cl * _pbar(n, klo, sl, &al[0], xv[i], sv[i], klo)
                                  - cu * _pbar(n, khi, sh, &ah[0], xv[i], sv[i], khi))
                ov[2, i] = _pbar(n, k, s0, &a0[0], xv[i], sv[i], k - 1)
    return out
