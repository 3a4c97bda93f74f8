import mpmath
import numpy as np
import pytest

from graddiv import _pykernels, kernels

try:
    from graddiv import _ckernels
except ImportError:
    _ckernels = None

needs_ext = pytest.mark.skipif(_ckernels is None, reason="compiled extension not built")


def oracle_jn(n, z):
    return float(mpmath.sqrt(mpmath.pi / (2 * z)) * mpmath.besselj(n + 0.5, z))


def test_backend_flag():
    assert kernels.BACKEND in ("cython", "python")


@pytest.mark.parametrize("backend", [_pykernels, pytest.param(_ckernels, marks=needs_ext)])
@pytest.mark.parametrize("n", [0, 1, 2, 7, 20, 64])
def test_bessel_matches_mpmath(backend, n):
    z = np.array([1e-3, 0.05, 0.7, 3.0, 12.5, 40.0, 71.3, 250.0])
    rows = backend.sph_bessel_triplet(n, z)
    for i, zi in enumerate(z):
        for row, order in ((1, n), (2, n + 1)):
            ref = oracle_jn(order, zi)
            assert abs(rows[row, i] - ref) <= 1e-13 * abs(ref) + 1e-300
        if n > 0:
            ref = oracle_jn(n - 1, zi)
            assert abs(rows[0, i] - ref) <= 1e-13 * abs(ref) + 1e-300


@pytest.mark.parametrize("backend", [_pykernels, pytest.param(_ckernels, marks=needs_ext)])
def test_bessel_at_origin(backend):
    rows = backend.sph_bessel_triplet(0, np.zeros(2))
    assert np.all(rows[1] == 1.0) and np.all(rows[2] == 0.0)
    rows = backend.sph_bessel_triplet(1, np.zeros(1))
    assert rows[0, 0] == 1.0 and rows[1, 0] == 0.0


@needs_ext
def test_backends_agree_bessel():
    z = np.linspace(0.0, 120.0, 3001)
    for n in range(0, 65, 3):
        a = _pykernels.sph_bessel_triplet(n, z)
        b = _ckernels.sph_bessel_triplet(n, z)
        scale = np.maximum(np.abs(a), 1e-280)
        assert np.max(np.abs(a - b) / scale) < 1e-12


@needs_ext
def test_backends_agree_legendre():
    theta = np.concatenate([[0.0, np.pi], np.linspace(1e-8, np.pi - 1e-8, 401)])
    x, s = np.cos(theta), np.sin(theta)
    for n in range(0, 40, 3):
        for k in range(0, n + 1, max(1, n // 4)):
            a = _pykernels.legendre_triplet(n, k, x, s)
            b = _ckernels.legendre_triplet(n, k, x, s)
            assert np.max(np.abs(a - b)) < 1e-11
