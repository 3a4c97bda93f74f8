"""Fourier analysis of potential fields in the orthonormal q basis.

For a field f in L2(B) the coefficients (f, q_kappa) describe its component
in the potential subspace; solenoidal fields tangent to the sphere have all
coefficients zero. Since -grad div q = mu q, the equation

    grad div u + lambda u = f

is diagonal in this basis: u_j = f_j / (lambda - mu_j) away from resonance.
"""
from dataclasses import dataclass, field
from enum import Enum
import math

import numpy as np

from . import fd
from .ballgrid import (FieldSample, _check_on_rule, sample, build_sphere_quadrature,
                       build_ball_quadrature)
from .eigenbasis import BasisSampler, make_mode
from .errors import DomainError, NodeMismatchError, UnsupportedOrderError


@dataclass(eq=False)
class CoeffVector:
    """Coefficients against an ordered list of modes."""

    modes: list
    values: np.ndarray

    def __post_init__(self):
        self.modes = list(self.modes)
        self.values = np.asarray(self.values, dtype=float).reshape(-1)
        if len(self.modes) != self.values.size:
            raise DomainError("modes and values differ in length")

    def __len__(self):
        return len(self.modes)

    @property
    def indices(self):
        return [md.kappa for md in self.modes]

    @property
    def mu(self):
        return np.array([md.mu for md in self.modes])

    @property
    def nu(self):
        return np.array([md.nu for md in self.modes])

    def with_values(self, values):
        return CoeffVector(self.modes, values)

    def truncate(self, count):
        return CoeffVector(self.modes[:count], self.values[:count])

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            fh.write("n,m,k,coeff\n")
            for md, v in zip(self.modes, self.values):
                fh.write(f"{md.n},{md.m},{md.k},{v:.17g}\n")

    @classmethod
    def from_csv(cls, path, radius=1.0):
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        modes = [make_mode(int(n), int(m), int(k), radius) for n, m, k, _ in data]
        return cls(modes, data[:, 3])


class CoefficientField:
    """The field sum_j c_j q_j as an evaluator.

    Outside the ball the series is continued analytically, which finite
    difference stencils near the sphere rely on.
    """

    def __init__(self, coeffs, radius=None):
        self.coeffs = coeffs
        self.radius = radius if radius is not None else (
            coeffs.modes[0].radius if len(coeffs) else 1.0)

    def __call__(self, points):
        pts = np.asarray(points, dtype=float).reshape(-1, 3)
        sampler = BasisSampler.from_points(pts, self.radius, strict=False)
        return sampler.synthesize(self.coeffs.modes, self.coeffs.values)

    def on_rule(self, rule):
        sampler = BasisSampler.from_rule(rule)
        return FieldSample(rule.points, sampler.synthesize(self.coeffs.modes, self.coeffs.values))


def _as_sample(f, rule):
    if isinstance(f, FieldSample):
        _check_on_rule(f, rule)
        return f
    if isinstance(f, CoeffVector):
        f = CoefficientField(f, rule.radius)
    return sample(f, rule)


def expand(f, modes, rule):
    """Coefficients (f, q_j) for a sampled field or an evaluator."""
    modes = list(modes)
    fs = _as_sample(f, rule)
    if not fs.is_vector:
        raise NodeMismatchError("expansion needs a vector field")
    values = BasisSampler.from_rule(rule).project(fs.values, rule, modes)
    return CoeffVector(modes, values)


def synthesize(coeffs, target):
    """sum_j c_j q_j on a quadrature rule or at points inside the closed ball."""
    if hasattr(target, "r_nodes"):
        return CoefficientField(coeffs, target.radius).on_rule(target)
    pts = np.asarray(target, dtype=float).reshape(-1, 3)
    radius = coeffs.modes[0].radius if len(coeffs) else 1.0
    sampler = BasisSampler.from_points(pts, radius)
    return FieldSample(pts, sampler.synthesize(coeffs.modes, coeffs.values))


def project_potential(f, modes, rule):
    """Orthogonal projection onto the span of ``modes``, sampled on the rule."""
    return synthesize(expand(f, modes, rule), rule)


class OutcomeKind(str, Enum):
    UNIQUE = "unique"
    RESONANT_SOLVABLE = "resonant-solvable"
    RESONANT_UNSOLVABLE = "resonant-unsolvable"


@dataclass
class SolveOutcome:
    kind: OutcomeKind
    solution: CoeffVector | None
    kernel_modes: list = field(default_factory=list)
    violation: float = 0.0


def default_resonance_tol(lam):
    return 1e-9 * max(1.0, abs(lam))


def solve_graddiv(f_coeffs, lam, resonance_tol=None):
    """Solve grad div u + lam u = f in coefficient space.

    Kernel modes (|lam - mu_j| <= tol) get a zero coefficient when f is
    orthogonal to them, which gives the minimal-norm solution.
    """
    if resonance_tol is None:
        resonance_tol = default_resonance_tol(lam)
    if not resonance_tol > 0:
        raise DomainError("resonance tolerance must be positive")
    values = f_coeffs.values
    if not np.all(np.isfinite(values)):
        raise DomainError("coefficients must be finite")
    gap = lam - f_coeffs.mu
    resonant = np.abs(gap) <= resonance_tol
    if not resonant.any():
        return SolveOutcome(OutcomeKind.UNIQUE, f_coeffs.with_values(values / gap))
    kernel = [md.kappa for md, hit in zip(f_coeffs.modes, resonant) if hit]
    violation = float(np.max(np.abs(values[resonant])))
    if violation > resonance_tol:
        return SolveOutcome(OutcomeKind.RESONANT_UNSOLVABLE, None, kernel, violation)
    out = np.zeros_like(values)
    out[~resonant] = values[~resonant] / gap[~resonant]
    return SolveOutcome(OutcomeKind.RESONANT_SOLVABLE, f_coeffs.with_values(out),
                        kernel, violation)


def apply_graddiv_plus_lambda(coeffs, lam):
    return coeffs.with_values((lam - coeffs.mu) * coeffs.values)


def pde_residual(solution, f_coeffs, lam, points, h=None):
    """max |grad div u + lam u - f| / max |f| at ``points``, finite-difference grad div."""
    u = CoefficientField(solution)
    radius = u.radius
    h = 1e-3 * radius if h is None else h
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    lhs = fd.graddiv(u, pts, h) + lam * u(pts)
    rhs = CoefficientField(f_coeffs, radius)(pts)
    return float(np.max(np.abs(lhs - rhs)) / max(np.max(np.abs(rhs)), 1e-300))


@dataclass
class SobolevReport:
    s: float
    truncations: list
    partial_sums: np.ndarray
    ratios: np.ndarray
    increments: np.ndarray
    diverging: bool

    @property
    def total(self):
        """Last partial sum, or inf when the sums show no sign of settling."""
        return math.inf if self.diverging else float(self.partial_sums[-1])


def sobolev_coeff_sum(coeffs, s, truncations=None):
    """Partial sums of nu^{2s} |c|^2 over growing leading blocks of modes.

    ``diverging`` flags the case where each shell adds at least 0.9 of what
    the previous shell added, i.e. the increments do not decay.
    """
    if s < 0:
        raise DomainError("s must be nonnegative")
    if truncations is None:
        truncations = [len(coeffs)]
    truncations = [int(t) for t in truncations]
    if any(t < 1 or t > len(coeffs) for t in truncations) or sorted(truncations) != truncations:
        raise DomainError("truncations must increase and fit the coefficient vector")
    terms = coeffs.nu ** (2.0 * s) * coeffs.values ** 2
    cum = np.cumsum(terms)
    sums = np.array([cum[t - 1] for t in truncations])
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = sums[1:] / sums[:-1]
    inc = np.diff(sums)
    diverging = False
    if inc.size >= 2:
        diverging = bool(np.all(inc > 0) and np.all(inc[1:] >= 0.9 * inc[:-1]))
    return SobolevReport(float(s), truncations, sums, ratios, inc, diverging)


def trace_orders(s):
    """Powers i of grad div whose normal traces must vanish for A^s_K.

    s = 0 imposes nothing. From s = 1 on the field itself must be tangent
    (the A_gamma condition); higher s adds i = 1, ..., floor(s/2) - 1.
    """
    if int(s) != s or s < 0:
        raise DomainError("s must be a nonnegative integer")
    if s == 0:
        return []
    return list(range(max(1, int(s) // 2)))


# nested finite differences lose too many digits beyond one power of grad div
MAX_TRACE_POWER = 1
EXTRAPOLATION_WEIGHTS = np.array([5.0, -10.0, 10.0, -5.0, 1.0])


@dataclass
class TraceReport:
    s: int
    orders: list
    residuals: list
    scales: list
    tolerances: list
    one_sided: list

    @property
    def passed(self):
        return all(r <= t * sc for r, sc, t in zip(self.residuals, self.scales, self.tolerances))

    @property
    def status(self):
        return "PASS" if self.passed else "FAIL"


def _graddiv_power(fn, i, h):
    for _ in range(i):
        fn = (lambda g: lambda pts: fd.graddiv(g, pts, h))(fn)
    return fn


def check_AsK_membership(f, s, radius=1.0, n_theta=24, n_phi=48, h=None,
                         stride=8, tol0=1e-8, tol=1e-5):
    """Normal traces |n . (grad div)^i f| on the sphere for the orders of A^s_K.

    i = 0 is evaluated on the sphere directly. For i >= 1 the nested
    central stencils would cross the sphere, so (grad div)^i f is taken at
    five inner radii and extrapolated to r = R (one-sided, flagged). A
    residual passes when it is below tol times
    max(max |(grad div)^i f|, max |f| / R^{2i}).
    """
    orders = trace_orders(s)
    if orders and orders[-1] > MAX_TRACE_POWER:
        raise UnsupportedOrderError(f"trace checks support s <= {2 * MAX_TRACE_POWER + 3}")
    rule = build_sphere_quadrature(radius, n_theta, n_phi)
    normals = rule.unit_vectors
    # the field can vanish on the sphere, so size it over the whole ball
    probe = build_ball_quadrature(radius, 8, 8, 16).points
    fmax = max(float(np.max(np.abs(f(probe)))), float(np.max(np.abs(f(radius * normals)))), 1e-300)
    residuals, scales, tols, flags = [], [], [], []
    for i in orders:
        if i == 0:
            vals = f(radius * normals)
            residuals.append(float(np.max(np.abs(np.einsum("ij,ij->i", vals, normals)))))
            scales.append(fmax)
            tols.append(tol0)
            flags.append(False)
            continue
        hi = 1e-3 * radius if h is None else h
        delta = 3.0 * hi * i
        dirs = normals[::stride]
        fn = _graddiv_power(f, i, hi)
        shells = np.stack([fn((radius - (j + 1) * delta) * dirs) for j in range(5)])
        vals = np.tensordot(EXTRAPOLATION_WEIGHTS, shells, axes=1)
        residuals.append(float(np.max(np.abs(np.einsum("ij,ij->i", vals, dirs)))))
        scales.append(max(float(np.max(np.abs(shells))), fmax / radius ** (2 * i)))
        tols.append(tol)
        flags.append(True)
    return TraceReport(int(s), orders, residuals, scales, tols, flags)


def _fd_graddiv_on_rule(mode, rule, h):
    key = ("fd-graddiv", mode.kappa, mode.alpha, h)
    if key not in rule.cache:
        qfun = lambda pts: BasisSampler.from_points(pts, mode.radius, strict=False).q(mode)
        rule.cache[key] = fd.graddiv(qfun, rule.points, h)
    return rule.cache[key]


def _operator_on_rule(coeffs, lam, rule, h):
    out = np.zeros((rule.size, 3))
    sampler = BasisSampler.from_rule(rule)
    for md, c in zip(coeffs.modes, coeffs.values):
        if c != 0.0:
            out += c * (_fd_graddiv_on_rule(md, rule, h) + lam * sampler.q(md))
    return out


def selfadjointness_check(u_coeffs, v_coeffs, lam, rule, h=None):
    """((grad div + lam) u, v) and (u, (grad div + lam) v) by quadrature.

    grad div is taken by finite differences of the synthesized fields at the
    rule nodes, so the two sides agree only as far as the operator is
    symmetric on the sampled span.
    """
    h = 1e-3 * rule.radius if h is None else h
    w = rule.weights[:, None]
    u = synthesize(u_coeffs, rule).values
    v = synthesize(v_coeffs, rule).values
    lhs = float(np.sum(w * _operator_on_rule(u_coeffs, lam, rule, h) * v))
    rhs = float(np.sum(w * u * _operator_on_rule(v_coeffs, lam, rule, h)))
    return lhs, rhs


@dataclass
class ConvergenceRow:
    n_modes: int
    l2_error: float
    c0_error: float
    coeff_sum: float


def convergence_table(f, s, truncations, rule, modes=None):
    """Errors of the partial sums S_N against f on the rule nodes."""
    truncations = [int(t) for t in truncations]
    if not truncations or sorted(set(truncations)) != truncations:
        raise DomainError("truncations must be strictly increasing")
    if modes is None:
        from .eigenbasis import enumerate_modes
        modes = enumerate_modes(count=truncations[-1], radius=rule.radius)
    fs = _as_sample(f, rule)
    coeffs = expand(fs, modes, rule)
    sums = sobolev_coeff_sum(coeffs, s, truncations).partial_sums
    sampler = BasisSampler.from_rule(rule)
    rows = []
    partial = np.zeros((rule.size, 3))
    done = 0
    for t, ssum in zip(truncations, sums):
        partial = partial + sampler.synthesize(coeffs.modes[done:t], coeffs.values[done:t])
        done = t
        err = fs.values - partial
        l2 = math.sqrt(max(float(np.sum(rule.weights * np.einsum("ij,ij->i", err, err))), 0.0))
        rows.append(ConvergenceRow(t, l2, float(np.max(np.linalg.norm(err, axis=1))), float(ssum)))
    return rows
