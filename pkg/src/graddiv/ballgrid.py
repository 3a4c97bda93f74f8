"""Tensor-product quadrature on the ball and its boundary sphere.

Nodes are Gauss-Legendre in r (mapped to [0, R], r^2 folded into the
weights) and in cos(theta), uniform in phi. Node order is radius-major,
then colatitude, then longitude, so every rule factors as
``radial (n_r) x direction (n_theta * n_phi)``; the spectral code relies on
that factorization to evaluate basis fields cheaply.
"""
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
import csv
import math

import numpy as np

from .errors import DomainError, NodeMismatchError


class Domain(str, Enum):
    BALL = "ball"
    SPHERE = "sphere"


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    radius: float
    r_nodes: np.ndarray
    r_weights: np.ndarray
    theta_nodes: np.ndarray
    theta_weights: np.ndarray
    n_phi: int
    domain: Domain = Domain.BALL
    cache: dict = field(default_factory=dict, repr=False)

    @property
    def n_r(self):
        return self.r_nodes.size

    @property
    def n_theta(self):
        return self.theta_nodes.size

    @property
    def n_dir(self):
        return self.n_theta * self.n_phi

    @property
    def size(self):
        return self.n_r * self.n_dir

    @cached_property
    def phi_nodes(self):
        return 2.0 * math.pi * np.arange(self.n_phi) / self.n_phi

    @cached_property
    def dir_theta(self):
        return np.repeat(self.theta_nodes, self.n_phi)

    @cached_property
    def dir_phi(self):
        return np.tile(self.phi_nodes, self.n_theta)

    @cached_property
    def dir_weights(self):
        return np.repeat(self.theta_weights, self.n_phi) * (2.0 * math.pi / self.n_phi)

    @cached_property
    def unit_vectors(self):
        """Outward unit normals of the directions, shape (n_dir, 3)."""
        st = np.sin(self.dir_theta)
        return np.stack([st * np.cos(self.dir_phi), st * np.sin(self.dir_phi),
                         np.cos(self.dir_theta)], axis=1)

    @cached_property
    def points(self):
        pts = self.r_nodes[:, None, None] * self.unit_vectors[None, :, :]
        return pts.reshape(-1, 3)

    @cached_property
    def weights(self):
        return np.outer(self.r_weights, self.dir_weights).ravel()

    def integrate(self, values):
        """Quadrature of a scalar array sampled on the nodes."""
        values = np.asarray(values, dtype=float)
        if values.shape[0] != self.size:
            raise NodeMismatchError(f"expected {self.size} samples, got {values.shape[0]}")
        return float(np.sum(self.weights * values))


def _check_counts(**counts):
    for name, value in counts.items():
        if int(value) != value or value < 1:
            raise DomainError(f"{name} must be a positive integer, got {value}")


def _theta_rule(n_theta):
    x, w = np.polynomial.legendre.leggauss(n_theta)
    # ascending colatitude
    return np.arccos(x[::-1]), w[::-1].copy()


def build_ball_quadrature(radius=1.0, n_r=64, n_theta=48, n_phi=96):
    """Rule for integrals over the ball |x| < radius."""
    if not radius > 0:
        raise DomainError("radius must be positive")
    _check_counts(n_r=n_r, n_theta=n_theta, n_phi=n_phi)
    t, w = np.polynomial.legendre.leggauss(n_r)
    r = 0.5 * radius * (t + 1.0)
    wr = 0.5 * radius * w * r * r
    theta, wt = _theta_rule(n_theta)
    return QuadratureRule(float(radius), r, wr, theta, wt, int(n_phi), Domain.BALL)


def build_sphere_quadrature(radius=1.0, n_theta=48, n_phi=96):
    """Rule for surface integrals over the sphere |x| = radius."""
    if not radius > 0:
        raise DomainError("radius must be positive")
    _check_counts(n_theta=n_theta, n_phi=n_phi)
    theta, wt = _theta_rule(n_theta)
    return QuadratureRule(float(radius), np.array([float(radius)]),
                          np.array([float(radius) ** 2]), theta, wt, int(n_phi),
                          Domain.SPHERE)


DEFAULT_ORDERS = (64, 48, 96)


def default_rule(radius=1.0):
    return build_ball_quadrature(radius, *DEFAULT_ORDERS)


@dataclass(eq=False)
class FieldSample:
    """Values of a scalar (N,) or vector (N, 3) field at Cartesian points."""

    points: np.ndarray
    values: np.ndarray
    radius: float | None = None

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float).reshape(-1, 3)
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape[0] != self.points.shape[0]:
            raise DomainError("points and values differ in length")
        if self.values.ndim not in (1, 2) or (self.values.ndim == 2 and self.values.shape[1] != 3):
            raise DomainError("values must be scalars or 3-vectors")
        if self.radius is not None:
            r = np.linalg.norm(self.points, axis=1)
            if np.any(r > self.radius * (1.0 + 1e-12)):
                raise DomainError("sample points outside the closed ball")

    @property
    def is_vector(self):
        return self.values.ndim == 2

    def __len__(self):
        return self.points.shape[0]


def sample(field_fn, rule):
    """Sample an evaluator on the rule's nodes.

    Evaluators exposing ``on_rule(rule)`` are asked directly, which lets
    basis expansions use the tensor-product fast path.
    """
    if hasattr(field_fn, "on_rule"):
        return field_fn.on_rule(rule)
    return FieldSample(rule.points, field_fn(rule.points))


def _check_on_rule(f, rule):
    if len(f) != rule.size:
        raise NodeMismatchError(f"field has {len(f)} samples, rule has {rule.size} nodes")
    if f.points is not rule.points and not np.array_equal(f.points, rule.points):
        raise NodeMismatchError("field samples are not on the rule nodes")


def inner_product(f, g, rule):
    """L2 inner product of two fields sampled on the rule nodes."""
    _check_on_rule(f, rule)
    _check_on_rule(g, rule)
    if f.is_vector != g.is_vector:
        raise NodeMismatchError("cannot pair a scalar field with a vector field")
    prod = np.einsum("ij,ij->i", f.values, g.values) if f.is_vector else f.values * g.values
    return float(np.sum(rule.weights * prod))


def l2_norm(f, rule):
    return math.sqrt(max(inner_product(f, f, rule), 0.0))


VECTOR_HEADER = ["x", "y", "z", "ux", "uy", "uz"]
SCALAR_HEADER = ["x", "y", "z", "s"]


def write_field_csv(sample_, path):
    """Write a field sample with 17 significant digits."""
    header = VECTOR_HEADER if sample_.is_vector else SCALAR_HEADER
    vals = sample_.values if sample_.is_vector else sample_.values[:, None]
    data = np.hstack([sample_.points, vals])
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in data:
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


def read_field_csv(path, radius=None):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = [h.strip() for h in next(reader)]
        rows = [[float(v) for v in row] for row in reader if row]
    data = np.array(rows, dtype=float).reshape(-1, len(header))
    if header == VECTOR_HEADER:
        return FieldSample(data[:, :3], data[:, 3:], radius)
    if header == SCALAR_HEADER:
        return FieldSample(data[:, :3], data[:, 3], radius)
    raise DomainError(f"unrecognised field CSV header {header}")


def read_points_csv(path):
    """Read a point cloud with at least columns x, y, z."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        pts = [[float(row["x"]), float(row["y"]), float(row["z"])] for row in reader]
    return np.array(pts, dtype=float).reshape(-1, 3)
