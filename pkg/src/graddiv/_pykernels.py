"""Pure numpy versions of the hot special-function kernels.

Same signatures and results as the compiled ``_ckernels`` module; every
loop runs over orders or series terms, never over points.
"""
import math

import numpy as np

_INV_SQRT_4PI = 1.0 / math.sqrt(4.0 * math.pi)
_RESCALE_AT = 1e250
_START = 1e-280


def _series(order, z):
    """j_order(z) from its power series; used for small z only."""
    pref = np.ones_like(z)
    for i in range(1, order + 1):
        pref *= z / (2 * i + 1)
    total = np.ones_like(z)
    term = np.ones_like(z)
    mz2 = -0.5 * z * z
    for k in range(1, 80):
        term = term * mz2 / (k * (2 * order + 2 * k + 1))
        total += term
        if np.all(np.abs(term) <= 1e-17 * np.abs(total)):
            break
    return pref * total


def miller_start(n, z):
    """Starting order for the downward recurrence."""
    top = max(n + 1.0, z)
    return int(top + 20 + math.sqrt(40.0 * top))


def sph_bessel_triplet(n, z):
    """Return rows (j_{n-1}, j_n, j_{n+1}) evaluated at every z >= 0.

    Row 0 is zero when n == 0.
    """
    z = np.ascontiguousarray(z, dtype=float).ravel()
    out = np.zeros((3, z.size))
    orders = (n - 1, n, n + 1)

    zero = z == 0.0
    series = (z < 0.1 * (n + 1)) & ~zero
    up = (z >= n + 1) & ~series & ~zero
    down = ~(zero | series | up)

    if zero.any() and n == 0:
        out[1, zero] = 1.0
    if zero.any() and n == 1:
        out[0, zero] = 1.0

    if series.any():
        zs = z[series]
        for row, order in enumerate(orders):
            if order >= 0:
                out[row, series] = _series(order, zs)

    if up.any():
        zu = z[up]
        s, c = np.sin(zu), np.cos(zu)
        jm = s / zu
        j = s / (zu * zu) - c / zu
        vals = {0: jm, 1: j}
        for ell in range(1, n + 1):
            jm, j = j, (2 * ell + 1) / zu * j - jm
            vals[ell + 1] = j
        for row, order in enumerate(orders):
            if order >= 0:
                out[row, up] = vals[order]

    if down.any():
        zd = z[down]
        start = miller_start(n, float(zd.max()))
        f_next = np.zeros_like(zd)
        f = np.full_like(zd, _START)
        rows = np.zeros((3, zd.size))
        f1 = None
        for ell in range(start, 0, -1):
            if ell in orders:
                rows[orders.index(ell)] = f
            if ell == 1:
                f1 = f.copy()
            f, f_next = (2 * ell + 1) / zd * f - f_next, f
            big = np.abs(f) > _RESCALE_AT
            if big.any():
                f[big] /= _RESCALE_AT
                f_next[big] /= _RESCALE_AT
                rows[:, big] /= _RESCALE_AT
                if f1 is not None:
                    f1[big] /= _RESCALE_AT
        f0 = f
        if 0 in orders:
            rows[orders.index(0)] = f0
        s, c = np.sin(zd), np.cos(zd)
        j0 = s / zd
        j1 = s / (zd * zd) - c / zd
        use0 = np.abs(f0) >= np.abs(f1)
        scale = np.where(use0, j0 / np.where(use0, f0, 1.0),
                         j1 / np.where(use0, 1.0, f1))
        for row, order in enumerate(orders):
            if order >= 0:
                out[row, down] = rows[row] * scale
    return out


def _pbar_column(n, k, x, s, over_sin):
    """Orthonormal associated Legendre value of degree n, order k >= 0.

    With ``over_sin`` the result is divided by sin(theta), which is
    regular for k >= 1.
    """
    if k > n or k < 0:
        return np.zeros_like(x)
    coef = _INV_SQRT_4PI
    for i in range(1, k + 1):
        coef *= math.sqrt((2 * i + 1) / (2.0 * i))
    power = k - 1 if over_sin else k
    p_prev = coef * s ** power if power > 0 else np.full_like(x, coef)
    if n == k:
        return p_prev
    p = math.sqrt(2 * k + 3) * x * p_prev
    a_prev = math.sqrt(2 * k + 3)
    for ell in range(k + 2, n + 1):
        a = math.sqrt((4.0 * ell * ell - 1) / (ell * ell - k * k))
        p, p_prev = a * (x * p - p_prev / a_prev), p
        a_prev = a
    return p


def legendre_triplet(n, k, x, s):
    """Return rows (P, dP/dtheta, P/sin(theta)) for orthonormal P_n^k.

    ``x`` is cos(theta), ``s`` is sin(theta) >= 0; k >= 0. Row 2 is zero
    for k == 0. No Condon-Shortley phase.
    """
    x = np.ascontiguousarray(x, dtype=float).ravel()
    s = np.ascontiguousarray(s, dtype=float).ravel()
    out = np.zeros((3, x.size))
    out[0] = _pbar_column(n, k, x, s, False)
    if k == 0:
        out[1] = -math.sqrt(n * (n + 1.0)) * _pbar_column(n, 1, x, s, False)
    else:
        lower = _pbar_column(n, k - 1, x, s, False)
        upper = _pbar_column(n, k + 1, x, s, False)
        out[1] = 0.5 * (math.sqrt((n + k) * (n - k + 1.0)) * lower
                        - math.sqrt((n + k + 1.0) * (n - k)) * upper)
        out[2] = _pbar_column(n, k, x, s, True)
    return out
