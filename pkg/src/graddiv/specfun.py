"""Spherical Bessel functions psi_n = j_n, their derivatives and zeros.

psi_n(z) = (-z)^n (d / z dz)^n (sin z / z) is the spherical Bessel function
of the first kind. Values come from the kernels in ``graddiv.kernels``
(power series near the origin, Miller's downward recurrence for z < n + 1,
upward recurrence beyond). Derivatives use

    psi_n' = (n psi_{n-1} - (n + 1) psi_{n+1}) / (2n + 1),

never numerical differencing.

Zero tables are built lazily, once per (order, count), by bisection on
brackets obtained from interlacing, followed by a guarded Newton step.
"""
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
import math

import numpy as np

from .errors import DomainError, UnsupportedOrderError
from .kernels import sph_bessel_triplet

MAX_ORDER = 64
MAX_ZERO_INDEX = 256


class ZeroKind(str, Enum):
    PSI = "psi"
    PSI_PRIME = "psi-prime"


@dataclass(frozen=True)
class ZeroTable:
    """Positive zeros of psi_n (kind PSI) or psi_n' (kind PSI_PRIME).

    ``entries`` maps (n, m) with m >= 1 to the m-th positive zero.
    """

    kind: ZeroKind
    entries: dict = field(default_factory=dict)

    def rows(self):
        """(n, m, z) triples sorted by n then m."""
        return [(n, m, z) for (n, m), z in sorted(self.entries.items())]

    def __getitem__(self, key):
        return self.entries[key]

    def __len__(self):
        return len(self.entries)


def _check_order(n, max_order):
    if int(n) != n or n < 0:
        raise DomainError(f"order must be a nonnegative integer, got {n}")
    if n > max_order:
        raise UnsupportedOrderError(f"order {n} exceeds the cap {max_order}")


def _as_array(z):
    arr = np.asarray(z, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < 0):
        raise DomainError("argument must be finite and nonnegative")
    return arr


def _triplet(n, z):
    arr = _as_array(z)
    rows = sph_bessel_triplet(int(n), arr.ravel())
    return rows.reshape((3,) + arr.shape)


def _unwrap(values, z):
    return float(values) if np.ndim(z) == 0 else values


def psi(n, z, max_order=MAX_ORDER):
    """psi_n(z) for scalar or array z >= 0."""
    _check_order(n, max_order)
    return _unwrap(_triplet(n, z)[1], z)


def psi_prime(n, z, max_order=MAX_ORDER):
    """d psi_n / dz; finite at z = 0 (1/3 for n = 1, else 0)."""
    _check_order(n, max_order)
    jm, _, jp = _triplet(n, z)
    return _unwrap((n * jm - (n + 1) * jp) / (2 * n + 1), z)


def psi_second(n, z, max_order=MAX_ORDER):
    """Second derivative, from the first-derivative recurrence applied twice."""
    _check_order(n, max_order)
    upper = psi_prime(n + 1, z, max_order=max_order + 1)
    if n == 0:
        return -upper
    lower = psi_prime(n - 1, z, max_order=max_order)
    return (n * lower - (n + 1) * upper) / (2 * n + 1)


def psi_over_z(n, z, max_order=MAX_ORDER):
    """psi_n(z) / z with its limit at z = 0 (1/3 for n = 1, else 0)."""
    _check_order(n, max_order)
    arr = _as_array(z)
    val = _triplet(n, arr)[1]
    safe = np.where(arr == 0.0, 1.0, arr)
    out = np.where(arr == 0.0, 1.0 / 3.0 if n == 1 else 0.0, val / safe)
    return _unwrap(out, z)


def _refine(f, df, lo, hi):
    """Shrink sign-change brackets to adjacent floats, then polish."""
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    flo = f(lo)
    fhi = f(hi)
    if np.any(np.sign(flo) * np.sign(fhi) > 0):
        raise ArithmeticError("zero bracket without a sign change")
    for _ in range(2100):
        mid = lo + 0.5 * (hi - lo)
        active = (mid > lo) & (mid < hi)
        if not active.any():
            break
        fm = f(mid)
        left = (np.sign(fm) == np.sign(flo)) & active
        right = ~left & active
        lo = np.where(left, mid, lo)
        flo = np.where(left, fm, flo)
        hi = np.where(right, mid, hi)
    x = lo + 0.5 * (hi - lo)
    slope = df(x)
    with np.errstate(divide="ignore", invalid="ignore"):
        newton = x - f(x) / slope
    newton = np.where(np.isfinite(newton) & (newton >= lo) & (newton <= hi), newton, x)
    cands = np.stack([lo, hi, x, newton])
    resid = np.abs(np.stack([f(c) for c in cands]))
    return cands[np.argmin(resid, axis=0), np.arange(lo.size)]


def _round_count(count):
    return 16 * ((count + 15) // 16)


@lru_cache(maxsize=None)
def _psi_zeros(n, count):
    if n == 0:
        out = math.pi * np.arange(1, count + 1, dtype=float)
    else:
        prev = _psi_zeros(n - 1, _round_count(count + 1))
        out = _refine(lambda z: _triplet(n, z)[1],
                      lambda z: psi_prime(n, z, max_order=n),
                      prev[:count], prev[1:count + 1])
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def _psi_prime_zeros(n, count):
    if n == 0:
        out = _psi_zeros(1, count).copy()
    else:
        rho = _psi_zeros(n, count)
        # psi_n increases on (0, sqrt(n(n+1))), so the first critical point lies above it
        lo = np.concatenate([[math.sqrt(n * (n + 1.0))], rho[:-1]])
        out = _refine(lambda z: psi_prime(n, z, max_order=n),
                      lambda z: psi_second(n, z, max_order=n),
                      lo, rho)
    out.setflags(write=False)
    return out


def _check_index(m, max_index):
    if int(m) != m or m < 1:
        raise DomainError(f"zero index must be a positive integer, got {m}")
    if m > max_index:
        raise UnsupportedOrderError(f"zero index {m} exceeds the cap {max_index}")


def bessel_zeros(n, count, max_order=MAX_ORDER, max_index=MAX_ZERO_INDEX):
    """First ``count`` positive zeros rho_{n,1..count} of psi_n."""
    _check_order(n, max_order)
    _check_index(count, max_index)
    return _psi_zeros(int(n), _round_count(int(count)))[:count].copy()


def bessel_prime_zeros(n, count, max_order=MAX_ORDER, max_index=MAX_ZERO_INDEX):
    """First ``count`` positive zeros alpha_{n,1..count} of psi_n'.

    The root z = 0 of psi_0' is excluded, so alpha_{0,m} = rho_{1,m}.
    """
    _check_order(n, max_order)
    _check_index(count, max_index)
    return _psi_prime_zeros(int(n), _round_count(int(count)))[:count].copy()


def bessel_zero(n, m, max_order=MAX_ORDER, max_index=MAX_ZERO_INDEX):
    """rho_{n,m}, the m-th positive zero of psi_n."""
    _check_index(m, max_index)
    return float(bessel_zeros(n, m, max_order, max_index)[m - 1])


def bessel_prime_zero(n, m, max_order=MAX_ORDER, max_index=MAX_ZERO_INDEX):
    """alpha_{n,m}, the m-th positive zero of psi_n'."""
    _check_index(m, max_index)
    return float(bessel_prime_zeros(n, m, max_order, max_index)[m - 1])


def zero_table(kind, nmax, mmax, max_order=MAX_ORDER, max_index=MAX_ZERO_INDEX):
    """Build the table of zeros for 0 <= n <= nmax, 1 <= m <= mmax."""
    kind = ZeroKind(kind)
    getter = bessel_zeros if kind is ZeroKind.PSI else bessel_prime_zeros
    entries = {}
    for n in range(nmax + 1):
        for m, z in enumerate(getter(n, mmax, max_order, max_index), start=1):
            entries[(n, m)] = float(z)
    return ZeroTable(kind, entries)
