"""Principal-symbol checks for grad div + lambda I and its curl extension.

grad div has symbol -xi xi^T, of rank one, so the operator alone is not
elliptic. Stacking lambda curl under it gives a 6 x 3 symbol of full rank
for lambda != 0. At the boundary, the half-line problem with frequency tau
along the sphere has decaying solutions w exp(-|tau| z) only along
omega = i tau - |tau| n, and the boundary operator n . w does not vanish
on it, so only the trivial decaying solution meets zero data.
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

RANK_RTOL = 1e-10


def _xi(xi):
    xi = np.asarray(xi, dtype=float).reshape(3)
    if not np.all(np.isfinite(xi)) or not np.any(xi):
        raise DomainError("xi must be a finite nonzero 3-vector")
    return xi


def cross_matrix(v):
    """[v]x with [v]x w = v cross w."""
    return np.array([[0, -v[2], v[1]], [v[2], 0, -v[0]], [-v[1], v[0], 0]])


def graddiv_symbol(xi):
    """Symbol of grad div at i xi: -xi xi^T."""
    xi = _xi(xi)
    return -np.outer(xi, xi)


def rot_symbol(xi):
    """Symbol of curl at i xi: the complex matrix i [xi]x."""
    return 1j * cross_matrix(_xi(xi))


def numerical_rank(matrix, rtol=RANK_RTOL):
    sv = np.linalg.svd(np.asarray(matrix), compute_uv=False)
    if sv[0] == 0:
        return 0
    return int(np.sum(sv > rtol * sv[0]))


def stacked_symbol(xi, lam):
    """[grad div ; lambda curl] with the blocks scaled to unit homogeneity.

    The blocks have orders 2 and 1; dividing by |xi|^2 and |xi| is the
    Douglis-Nirenberg weighting that makes the rank test scale invariant.
    """
    xi = _xi(xi)
    size = np.linalg.norm(xi)
    return np.vstack([graddiv_symbol(xi) / size ** 2, lam * rot_symbol(xi) / size])


def stacked_rank(xi, lam, rtol=RANK_RTOL):
    return numerical_rank(stacked_symbol(xi, lam), rtol)


def curl_identity_residual(xi):
    """Max entry of (i[xi]x)^2 - (|xi|^2 I - xi xi^T).

    This is curl curl = -Laplace + grad div read at the symbol level.
    """
    xi = _xi(xi)
    rot = rot_symbol(xi)
    expected = np.dot(xi, xi) * np.eye(3) + graddiv_symbol(xi)
    return float(np.max(np.abs(rot @ rot - expected)))


@dataclass
class CoveringReport:
    omega: np.ndarray
    omega_conj_dot: complex
    omega_dot: complex
    kernel_dim: int
    symbol_residual: float
    boundary_value: complex
    lam: float

    @property
    def passed(self):
        return (self.lam != 0 and self.kernel_dim == 2 and self.symbol_residual < 1e-10
                and abs(self.boundary_value) > 0)

    @property
    def status(self):
        return "PASS" if self.passed else "FAIL"


def covering_check(tau, normal, lam, ortho_tol=1e-12):
    """Covering condition for the boundary operator n . u on a frame (tau, n).

    With d/dz replaced by -|tau| the interior symbol acts on w through
    omega = i tau - |tau| n. omega . omega = 0 makes omega a solution of
    both symbol equations; the kernel of [lambda [omega]x ; omega omega^T]
    is the plane {w : omega . w = 0 and omega x w = 0}, spanned over C by
    omega alone, and it has real dimension 2. n . omega = -|tau| != 0, so
    zero boundary data forces c = 0.
    """
    tau = np.asarray(tau, dtype=float).reshape(3)
    normal = np.asarray(normal, dtype=float).reshape(3)
    size = np.linalg.norm(tau)
    if not size > 0:
        raise DomainError("tau must be nonzero")
    if abs(np.linalg.norm(normal) - 1.0) > 1e-12:
        raise DomainError("normal must be a unit vector")
    if abs(np.dot(tau, normal)) > ortho_tol * max(1.0, size):
        raise DomainError("tau must be orthogonal to the normal")
    omega = 1j * tau - size * normal
    system = np.vstack([lam * cross_matrix(omega), np.outer(omega, omega)])
    # real form of the complex system so the kernel dimension is counted over R
    real = np.block([[system.real, -system.imag], [system.imag, system.real]])
    sv = np.linalg.svd(real, compute_uv=False)
    kernel_dim = int(np.sum(sv <= RANK_RTOL * sv[0])) if sv[0] > 0 else 6
    residual = float(np.max(np.abs(system @ omega)))
    return CoveringReport(omega, complex(np.vdot(omega, omega)), complex(omega @ omega),
                          kernel_dim, residual, complex(normal @ omega), float(lam))


def random_frames(count, rng, tau_range=(0.1, 10.0)):
    """(tau, n) pairs with n a random unit vector and tau orthogonal to it."""
    frames = []
    for _ in range(count):
        n = rng.normal(size=3)
        n /= np.linalg.norm(n)
        t = rng.normal(size=3)
        t -= np.dot(t, n) * n
        t *= rng.uniform(*tau_range) / np.linalg.norm(t)
        frames.append((t, n))
    return frames


@dataclass
class EllipticityReport:
    lam: float
    ranks: list
    min_singular: float
    identity_residual: float
    covering: list = field(default_factory=list)

    @property
    def rank_ok(self):
        return all(r == 3 for r in self.ranks)

    @property
    def covering_ok(self):
        return all(c.passed for c in self.covering)

    @property
    def verdict(self):
        if self.lam != 0 and self.rank_ok and self.covering_ok:
            return "generalized elliptic"
        return "not elliptic"


def ellipticity_report(lam, samples=100, frames=50, seed=0):
    rng = np.random.default_rng(seed)
    xis = rng.normal(size=(samples, 3))
    ranks, smin, ident = [], np.inf, 0.0
    for xi in xis:
        sym = stacked_symbol(xi, lam)
        sv = np.linalg.svd(sym, compute_uv=False)
        ranks.append(int(np.sum(sv > RANK_RTOL * sv[0])))
        smin = min(smin, float(sv[-1]))
        ident = max(ident, curl_identity_residual(xi))
    cover = [covering_check(t, n, lam) for t, n in random_frames(frames, rng)]
    return EllipticityReport(float(lam), ranks, smin, ident, cover)
