"""Real orthonormal spherical harmonics and their surface gradients.

Convention: for k > 0 the harmonic carries cos(k phi), for k < 0 it carries
sin(|k| phi), both scaled by sqrt(2); k = 0 is the zonal harmonic. No
Condon-Shortley phase. The set {Y_n^k} is orthonormal on the unit sphere.

The associated Legendre factor comes from a three-term recurrence in the
degree with the normalization built in. The azimuthal derivative divided
by sin(theta) is evaluated through P_n^k / sin(theta), which the same
recurrence produces directly, so the poles need no special casing.
"""
from dataclasses import dataclass
import math

import numpy as np

from .errors import DomainError, UnsupportedOrderError
from .kernels import legendre_triplet

MAX_DEGREE = 64
SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class AngularPoint:
    """Colatitude ``theta`` in [0, pi] and longitude ``phi`` in [0, 2 pi)."""

    theta: float
    phi: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise DomainError(f"theta={self.theta} outside [0, pi]")
        if not 0.0 <= self.phi < 2.0 * math.pi:
            raise DomainError(f"phi={self.phi} outside [0, 2 pi)")


def _check(n, k):
    if n < 0 or abs(k) > n:
        raise DomainError(f"need |k| <= n, got n={n}, k={k}")
    if n > MAX_DEGREE:
        raise UnsupportedOrderError(f"degree {n} exceeds the cap {MAX_DEGREE}")


def _angles(theta, phi):
    if isinstance(theta, AngularPoint):
        return theta.theta, theta.phi
    return theta, phi


def harmonic_factors(n, k, theta, phi):
    """Return (Y, dY/dtheta, (1/sin theta) dY/dphi) as arrays."""
    _check(n, k)
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    shape = np.broadcast(theta, phi).shape
    theta = np.broadcast_to(theta, shape).ravel()
    phi = np.broadcast_to(phi, shape).ravel()
    a = abs(k)
    p, dp, p_over_s = legendre_triplet(n, a, np.cos(theta), np.sin(theta))
    if k == 0:
        y, dth, dph = p, dp, np.zeros_like(p)
    elif k > 0:
        c, s = np.cos(a * phi), np.sin(a * phi)
        y, dth, dph = SQRT2 * p * c, SQRT2 * dp * c, -SQRT2 * a * p_over_s * s
    else:
        c, s = np.cos(a * phi), np.sin(a * phi)
        y, dth, dph = SQRT2 * p * s, SQRT2 * dp * s, SQRT2 * a * p_over_s * c
    return y.reshape(shape), dth.reshape(shape), dph.reshape(shape)


def real_sph_harm(n, k, theta, phi=None):
    """Orthonormal real harmonic Y_n^k at an AngularPoint or (theta, phi)."""
    theta, phi = _angles(theta, phi)
    y = harmonic_factors(n, k, theta, phi)[0]
    return float(y) if y.ndim == 0 else y


def sph_harm_angular_grad(n, k, theta, phi=None):
    """Surface-gradient components (dY/dtheta, (1/sin theta) dY/dphi).

    Finite at the poles, where the second component takes its limit.
    """
    theta, phi = _angles(theta, phi)
    _, dth, dph = harmonic_factors(n, k, theta, phi)
    if dth.ndim == 0:
        return float(dth), float(dph)
    return dth, dph


def degree_order_pairs(nmax):
    """All (n, k) with n <= nmax, k = -n..n, in degree-major order."""
    return [(n, k) for n in range(nmax + 1) for k in range(-n, n + 1)]
