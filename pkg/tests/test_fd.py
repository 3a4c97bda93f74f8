import numpy as np
import pytest

from graddiv import fd


def field(p):
    x, y, z = p.T
    return np.stack([x**2 * y, np.sin(y) * z, x * y * z + z**3], axis=1)


def test_jacobian_divergence_curl(rng):
    pts = rng.uniform(-1, 1, size=(20, 3))
    x, y, z = pts.T
    jac = fd.jacobian(field, pts, 1e-3)
    assert np.allclose(jac[:, 0, 0], 2 * x * y, atol=1e-9)
    assert np.allclose(jac[:, 0, 1], x**2, atol=1e-9)
    assert np.allclose(jac[:, 1, 2], np.sin(y), atol=1e-9)
    div = fd.divergence(field, pts, 1e-3)
    assert np.allclose(div, 2 * x * y + np.cos(y) * z + x * y + 3 * z**2, atol=1e-9)
    curl = fd.curl(field, pts, 1e-3)
    expect = np.stack([x * z - np.sin(y), -y * z, -x**2], axis=1)
    assert np.allclose(curl, expect, atol=1e-9)


def test_graddiv_exact(rng):
    pts = rng.uniform(-1, 1, size=(20, 3))
    x, y, z = pts.T
    # div = 2xy + cos(y) z + xy + 3z^2
    expect = np.stack([3 * y, 3 * x - np.sin(y) * z, np.cos(y) + 6 * z], axis=1)
    assert np.allclose(fd.graddiv(field, pts, 1e-3), expect, atol=1e-7)


def test_gradient_and_laplacian(rng):
    f = lambda p: np.exp(p[:, 0]) * np.cos(p[:, 1]) + p[:, 2] ** 4
    pts = rng.uniform(-1, 1, size=(10, 3))
    grad = fd.gradient(f, pts, 1e-3)
    assert np.allclose(grad[:, 0], np.exp(pts[:, 0]) * np.cos(pts[:, 1]), atol=1e-10)
    assert np.allclose(grad[:, 2], 4 * pts[:, 2] ** 3, atol=1e-10)
    assert np.allclose(fd.laplacian(f, pts, 1e-3), 12 * pts[:, 2] ** 2, atol=1e-6)
