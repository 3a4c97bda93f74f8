"""Neumann-Laplace eigenfunctions g and the grad-div eigenfields q = grad g.

On the ball of radius R,

    g_kappa(r, theta, phi) = c_kappa psi_n(alpha_{n,m} r / R) Y_n^k(theta, phi),

with alpha_{n,m} the zeros of psi_n', solves -Laplace g = nu^2 g with a
vanishing normal derivative, nu = alpha_{n,m} / R. Its gradient q_kappa is
curl-free, tangent to the sphere, and satisfies -grad div q = nu^2 q.
c_kappa is fixed so that ||q_kappa|| = 1 in L2(B), which by Green's
formula means ||g_kappa|| = 1 / nu.
"""
from dataclasses import dataclass, field
from concurrent.futures import ThreadPoolExecutor
import math
import os

import numpy as np

from . import fd
from .errors import DomainError
from .harmonics import harmonic_factors
from .kernels import sph_bessel_triplet
from .specfun import bessel_prime_zeros, MAX_ORDER


@dataclass(frozen=True, order=True)
class MultiIndex:
    n: int
    m: int
    k: int

    def __post_init__(self):
        if self.n < 0 or self.m < 1 or abs(self.k) > self.n:
            raise DomainError(f"invalid multi-index (n={self.n}, m={self.m}, k={self.k})")

    def __str__(self):
        return f"({self.n},{self.m},{self.k})"


@dataclass(frozen=True)
class Mode:
    """One resolved eigenpair.

    ``alpha`` is the tabled zero that sets the radial wavenumber alpha / R of
    the fields; ``nu`` is the eigenfrequency the mode claims. The two agree
    for every mode built here, and verify_mode detects when they do not.
    """

    kappa: MultiIndex
    alpha: float
    radius: float
    nu: float
    c_norm: float

    @property
    def n(self):
        return self.kappa.n

    @property
    def m(self):
        return self.kappa.m

    @property
    def k(self):
        return self.kappa.k

    @property
    def mu(self):
        """Eigenvalue of -grad div."""
        return self.nu * self.nu

    @property
    def wavenumber(self):
        return self.alpha / self.radius


def radial_norm_integral(n, alpha, radius=1.0):
    """Integral of psi_n(alpha r / R)^2 r^2 over [0, R], by Gauss-Legendre."""
    npts = int(alpha) + 64
    t, w = np.polynomial.legendre.leggauss(npts)
    x = 0.5 * alpha * (t + 1.0)
    vals = sph_bessel_triplet(n, x)[1]
    integral = 0.5 * alpha * np.sum(w * vals * vals * x * x)
    return float(integral * (radius / alpha) ** 3)


def _normalizer(n, alpha, radius):
    nu = alpha / radius
    return 1.0 / (nu * math.sqrt(radial_norm_integral(n, alpha, radius)))


def make_mode(n, m, k, radius=1.0):
    kappa = MultiIndex(n, m, k)
    alpha = float(bessel_prime_zeros(n, m)[m - 1])
    return Mode(kappa, alpha, float(radius), alpha / radius, _normalizer(n, alpha, radius))


def _modes_for(pairs, radius):
    modes = []
    for n, m, alpha in pairs:
        c = _normalizer(n, alpha, radius)
        for k in range(-n, n + 1):
            modes.append(Mode(MultiIndex(n, m, k), alpha, float(radius), alpha / radius, c))
    modes.sort(key=lambda md: (md.nu, md.n, md.m, md.k))
    return modes


def _pairs_below(bound):
    """All (n, m, alpha_{n,m}) with alpha_{n,m} <= bound."""
    pairs = []
    n = 0
    # alpha_{n,1} > sqrt(n(n+1)) > n
    while n <= MAX_ORDER and n <= bound:
        count = int(bound / math.pi) + 2
        alphas = bessel_prime_zeros(n, count)
        pairs.extend((n, m, float(a)) for m, a in enumerate(alphas, start=1) if a <= bound)
        n += 1
    return pairs


def enumerate_modes(nu_max=None, count=None, radius=1.0):
    """Modes sorted by (nu, n, m, k): all with nu <= nu_max, or the first ``count``."""
    if (nu_max is None) == (count is None):
        raise DomainError("give exactly one of nu_max or count")
    if not radius > 0:
        raise DomainError("radius must be positive")
    if nu_max is not None:
        if nu_max <= 0:
            raise DomainError("nu_max must be positive")
        modes = _modes_for(_pairs_below(nu_max * radius), radius)
        if not modes:
            raise DomainError(f"no modes with nu <= {nu_max}")
        return modes
    if count < 1:
        raise DomainError("count must be positive")
    # Weyl's law N(nu) ~ 2 (nu R)^3 / (9 pi) sizes the first guess
    bound = max(4.0, (4.5 * math.pi * count) ** (1.0 / 3.0) * 1.3)
    while True:
        pairs = _pairs_below(bound)
        total = sum(2 * n + 1 for n, _, _ in pairs)
        if total >= count:
            return _modes_for(pairs, radius)[:count]
        bound *= 1.5


def modes_up_to(nmax, mmax, radius=1.0):
    """All modes with n <= nmax and m <= mmax, in enumeration order."""
    pairs = []
    for n in range(nmax + 1):
        for m, a in enumerate(bessel_prime_zeros(n, mmax), start=1):
            pairs.append((n, m, float(a)))
    return _modes_for(pairs, radius)


def _frame(theta, phi):
    st, ct = np.sin(theta), np.cos(theta)
    sp, cp = np.sin(phi), np.cos(phi)
    rhat = np.stack([st * cp, st * sp, ct], axis=-1)
    that = np.stack([ct * cp, ct * sp, -st], axis=-1)
    phat = np.stack([-sp, cp, np.zeros_like(sp)], axis=-1)
    return rhat, that, phat


def spherical_coordinates(points):
    """(r, theta, phi) with theta = phi = 0 at the origin, phi in [0, 2 pi)."""
    points = np.asarray(points, dtype=float).reshape(-1, 3)
    r = np.linalg.norm(points, axis=1)
    safe = np.where(r > 0, r, 1.0)
    theta = np.arccos(np.clip(points[:, 2] / safe, -1.0, 1.0))
    phi = np.mod(np.arctan2(points[:, 1], points[:, 0]), 2.0 * math.pi)
    return r, theta, phi


class BasisSampler:
    """Basis fields on a fixed point set, built from cached factors.

    Each field is a radial profile times an angular pattern. For a
    quadrature rule the point set is the product radii x directions
    (``outer=True``) and fields are assembled by outer products; for a
    scattered point set radii and directions are paired one to one.
    """

    def __init__(self, r, theta, phi, radius, outer):
        self.r = np.asarray(r, dtype=float)
        self.theta = np.asarray(theta, dtype=float)
        self.phi = np.asarray(phi, dtype=float)
        self.radius = float(radius)
        self.outer = outer
        self.rhat, self.that, self.phat = _frame(self.theta, self.phi)
        self._radial = {}
        self._angular = {}

    @classmethod
    def from_rule(cls, rule):
        sampler = rule.cache.get("sampler")
        if sampler is None:
            sampler = cls(rule.r_nodes, rule.dir_theta, rule.dir_phi, rule.radius, True)
            rule.cache["sampler"] = sampler
        return sampler

    @classmethod
    def from_points(cls, points, radius, strict=True):
        r, theta, phi = spherical_coordinates(points)
        if strict and np.any(r > radius * (1.0 + 1e-12)):
            raise DomainError("evaluation point outside the closed ball")
        return cls(r, theta, phi, radius, False)

    @property
    def size(self):
        return self.r.size * self.theta.size if self.outer else self.r.size

    def radial(self, n, alpha):
        """(psi_n(z), psi_n'(z), psi_n(z)/z) at z = alpha r / R."""
        key = (n, alpha)
        if key not in self._radial:
            z = alpha * self.r / self.radius
            jm, j, jp = sph_bessel_triplet(n, z)
            dj = (n * jm - (n + 1) * jp) / (2 * n + 1)
            safe = np.where(z > 0, z, 1.0)
            j_over_z = np.where(z > 0, j / safe, 1.0 / 3.0 if n == 1 else 0.0)
            self._radial[key] = (j, dj, j_over_z)
        return self._radial[key]

    def angular(self, n, k):
        """(Y, Y rhat, surface gradient of Y) at the directions."""
        key = (n, k)
        if key not in self._angular:
            y, dth, dph = harmonic_factors(n, k, self.theta, self.phi)
            tang = dth[:, None] * self.that + dph[:, None] * self.phat
            self._angular[key] = (y, y[:, None] * self.rhat, tang)
        return self._angular[key]

    def _combine(self, a, v):
        if self.outer:
            return (a[:, None, None] * v[None]).reshape(-1, *v.shape[1:])
        return a[:, None] * v if v.ndim == 2 else a * v

    def _radial_profiles(self, mode):
        j, dj, j_over_z = self.radial(mode.n, mode.alpha)
        kw = mode.wavenumber
        return mode.c_norm * kw * dj, mode.c_norm * kw * j_over_z

    def g(self, mode):
        j = self.radial(mode.n, mode.alpha)[0]
        y = self.angular(mode.n, mode.k)[0]
        return self._combine(mode.c_norm * j, y)

    def q(self, mode):
        a, b = self._radial_profiles(mode)
        _, yr, tang = self.angular(mode.n, mode.k)
        return self._combine(a, yr) + self._combine(b, tang)

    def synthesize(self, modes, coeffs):
        """Sum of coeffs[j] q_{modes[j]}, grouped by angular pattern."""
        groups = {}
        for mode, c in zip(modes, coeffs):
            if c == 0.0:
                continue
            a, b = self._radial_profiles(mode)
            key = (mode.n, mode.k)
            if key in groups:
                groups[key][0] += c * a
                groups[key][1] += c * b
            else:
                groups[key] = [c * a, c * b]
        out = np.zeros((self.size, 3))
        for (n, k), (a, b) in groups.items():
            _, yr, tang = self.angular(n, k)
            out += self._combine(a, yr)
            out += self._combine(b, tang)
        return out

    def project(self, values, rule, modes):
        """Inner products of sampled vector values with every q in ``modes``."""
        if not self.outer:
            weighted = values * rule.weights[:, None]
            return np.array([np.sum(weighted * self.q(md)) for md in modes])
        fw = values.reshape(rule.n_r, rule.n_dir, 3) * rule.dir_weights[None, :, None]
        fw = fw.reshape(rule.n_r, -1)
        cache = {}
        out = np.empty(len(modes))
        for i, mode in enumerate(modes):
            key = (mode.n, mode.k)
            if key not in cache:
                _, yr, tang = self.angular(mode.n, mode.k)
                cache[key] = (fw @ yr.ravel(), fw @ tang.ravel())
            u, v = cache[key]
            a, b = self._radial_profiles(mode)
            out[i] = np.sum(rule.r_weights * (a * u + b * v))
        return out

    def gram(self, modes, rule):
        """Quadrature Gram matrix of the q fields on ``rule``."""
        if not self.outer:
            qs = np.stack([self.q(md) for md in modes])
            sq = qs * np.sqrt(rule.weights)[None, :, None]
            flat = sq.reshape(len(modes), -1)
            return flat @ flat.T
        keys = sorted({(md.n, md.k) for md in modes})
        pos = {key: i for i, key in enumerate(keys)}
        wd = np.sqrt(rule.dir_weights)[:, None]
        yr = np.stack([(self.angular(*key)[1] * wd).ravel() for key in keys])
        tg = np.stack([(self.angular(*key)[2] * wd).ravel() for key in keys])
        both = np.vstack([yr, tg])
        ang = both @ both.T
        p = len(keys)
        idx = np.array([pos[(md.n, md.k)] for md in modes])
        aa, at = ang[:p, :p][np.ix_(idx, idx)], ang[:p, p:][np.ix_(idx, idx)]
        ta, tt = ang[p:, :p][np.ix_(idx, idx)], ang[p:, p:][np.ix_(idx, idx)]
        prof = [self._radial_profiles(md) for md in modes]
        a = np.stack([pr[0] for pr in prof]) * np.sqrt(rule.r_weights)
        b = np.stack([pr[1] for pr in prof]) * np.sqrt(rule.r_weights)
        return (a @ a.T) * aa + (a @ b.T) * at + (b @ a.T) * ta + (b @ b.T) * tt


def _single(points):
    pts = np.asarray(points, dtype=float)
    return pts.ndim == 1, pts.reshape(-1, 3)


def scalar_eigenfunction(mode, points):
    """g_kappa at one point (3,) or many (N, 3) inside the closed ball."""
    single, pts = _single(points)
    vals = BasisSampler.from_points(pts, mode.radius).g(mode)
    return float(vals[0]) if single else vals


def vector_eigenfunction(mode, points):
    """q_kappa = grad g_kappa in Cartesian components."""
    single, pts = _single(points)
    vals = BasisSampler.from_points(pts, mode.radius).q(mode)
    return vals[0] if single else vals


def scalar_evaluator(mode, strict=False):
    """g_kappa as a plain evaluator; non-strict ones continue analytically past R."""
    return lambda pts: BasisSampler.from_points(pts, mode.radius, strict).g(mode)


def vector_evaluator(mode, strict=False):
    return lambda pts: BasisSampler.from_points(pts, mode.radius, strict).q(mode)


def gram_matrix(modes, rule):
    """Matrix of L2 inner products (q_i, q_j) under ``rule``."""
    if not modes:
        raise DomainError("need at least one mode")
    return BasisSampler.from_rule(rule).gram(list(modes), rule)


def random_ball_points(count, radius, rng, fraction=0.9):
    """Uniform random points with |x| <= fraction * radius."""
    d = rng.normal(size=(count, 3))
    d /= np.linalg.norm(d, axis=1)[:, None]
    r = fraction * radius * rng.uniform(size=count) ** (1.0 / 3.0)
    return d * r[:, None]


def random_sphere_points(count, radius, rng):
    d = rng.normal(size=(count, 3))
    d /= np.linalg.norm(d, axis=1)[:, None]
    return radius * d


@dataclass(frozen=True)
class ModeTolerances:
    divergence: float = 1e-5
    curl: float = 1e-5
    trace: float = 1e-10
    norm: float = 1e-9


@dataclass(frozen=True)
class ModeReport:
    kappa: MultiIndex
    nu: float
    div_residual: float
    curl_residual: float
    trace_residual: float
    norm_error: float
    tolerances: ModeTolerances = field(default_factory=ModeTolerances)

    @property
    def passed(self):
        t = self.tolerances
        return (self.div_residual <= t.divergence and self.curl_residual <= t.curl
                and self.trace_residual <= t.trace and self.norm_error <= t.norm)

    @property
    def status(self):
        return "PASS" if self.passed else "FAIL"


def verify_mode(mode, rule, n_points=50, n_boundary=500, seed=0, h=None,
                tolerances=ModeTolerances()):
    """Residuals of the eigenfield relations for one mode.

    (a) max |div q + nu^2 g| / (nu^2 max |g|) with a finite-difference
        divergence, (b) max |curl q| / (nu max |q|), (c) max |n . q| on the
        sphere, (d) | ||q|| - 1 | under ``rule``.
    """
    if h is None:
        h = 1e-3 * mode.radius
    rng = np.random.default_rng(seed)
    pts = random_ball_points(n_points, mode.radius, rng)
    qfun = vector_evaluator(mode)
    g = scalar_eigenfunction(mode, pts)
    q = vector_eigenfunction(mode, pts)
    div = fd.divergence(qfun, pts, h)
    gscale = max(np.max(np.abs(g)), 1e-300)
    qscale = max(np.max(np.linalg.norm(q, axis=1)), 1e-300)
    div_res = np.max(np.abs(div + mode.mu * g)) / (mode.mu * gscale)
    curl_res = np.max(np.linalg.norm(fd.curl(qfun, pts, h), axis=1)) / (mode.nu * qscale)
    bpts = random_sphere_points(n_boundary, mode.radius, rng)
    qb = vector_eigenfunction(mode, bpts)
    trace = np.max(np.abs(np.einsum("ij,ij->i", qb, bpts))) / mode.radius
    sampler = BasisSampler.from_rule(rule)
    q_rule = sampler.q(mode)
    norm = math.sqrt(np.sum(rule.weights * np.einsum("ij,ij->i", q_rule, q_rule)))
    return ModeReport(mode.kappa, mode.nu, float(div_res), float(curl_res),
                      float(trace), abs(norm - 1.0), tolerances)


def verify_modes(modes, rule, **kwargs):
    """verify_mode over many modes; GRADDIV_THREADS sets the worker count."""
    workers = max(1, int(os.environ.get("GRADDIV_THREADS", "1")))
    if workers == 1:
        return [verify_mode(md, rule, **kwargs) for md in modes]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda md: verify_mode(md, rule, **kwargs), modes))
