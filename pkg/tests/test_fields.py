import numpy as np
import pytest

from graddiv import eigenbasis as eb, fd, fields
from graddiv.errors import DomainError


def test_rotation_is_solenoidal_and_tangent(rng):
    pts = eb.random_ball_points(20, 1.0, rng)
    assert np.allclose(fd.divergence(fields.rigid_rotation, pts, 1e-3), 0, atol=1e-12)
    sphere = eb.random_sphere_points(20, 1.0, rng)
    assert np.allclose(np.einsum("ij,ij->i", fields.rigid_rotation(sphere), sphere), 0, atol=1e-15)


def test_presets(rng):
    pts = eb.random_ball_points(5, 1.0, rng)
    assert np.array_equal(fields.preset("grad-r2")(pts), 2 * pts)
    assert np.array_equal(fields.preset("preset:rigid-rotation")(pts), fields.rigid_rotation(pts))
    q = fields.preset("q(2, 1, -1)")
    assert np.allclose(q(pts), eb.vector_eigenfunction(eb.make_mode(2, 1, -1), pts))
    decay = fields.preset("decay(4,10)")
    assert len(decay.coeffs) == 10
    assert decay.coeffs.values[0] == pytest.approx(decay.coeffs.modes[0].nu ** -4)
    with pytest.raises(DomainError):
        fields.preset("q(1,1,5)")
    with pytest.raises(DomainError):
        fields.preset("mystery")
