import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from graddiv import ellipticity as el
from graddiv.errors import DomainError

vectors = st.lists(st.floats(-10, 10), min_size=3, max_size=3).filter(lambda v: np.linalg.norm(v) > 1e-3)


def test_graddiv_symbol():
    sym = el.graddiv_symbol([1, 0, 0])
    expect = np.zeros((3, 3))
    expect[0, 0] = -1
    assert np.array_equal(sym, expect)
    sym = el.graddiv_symbol([0.3, -1.2, 2.0])
    assert np.array_equal(sym, sym.T)
    with pytest.raises(DomainError):
        el.graddiv_symbol([0, 0, 0])


def test_ranks_random():
    rng = np.random.default_rng(0)
    for xi in rng.normal(size=(100, 3)):
        assert el.numerical_rank(el.graddiv_symbol(xi)) == 1
        assert el.numerical_rank(el.rot_symbol(xi)) == 2
        assert np.all(el.rot_symbol(xi) @ xi == 0)
        assert el.stacked_rank(xi, 1.0) == 3
        assert el.stacked_rank(xi, 0.0) == 1
        assert el.curl_identity_residual(xi) <= 1e-14 * max(1.0, np.dot(xi, xi))


def test_rot_singular_values():
    xi = np.array([1.0, 2.0, -2.0])
    sv = np.linalg.svd(el.rot_symbol(xi), compute_uv=False)
    assert np.allclose(sv, [3, 3, 0], atol=1e-14)


@settings(max_examples=50, deadline=None)
@given(vectors, st.floats(1e-3, 1e6), st.floats(-10, 10).filter(lambda v: abs(v) > 1e-3))
def test_rank_homogeneous(xi, scale, lam):
    xi = np.array(xi)
    assert el.stacked_rank(scale * xi, lam) == el.stacked_rank(xi, lam) == 3


def test_covering_reference_frame():
    rep = el.covering_check([1, 0, 0], [0, 0, 1], 1.0)
    assert rep.status == "PASS"
    assert np.allclose(rep.omega, [1j, 0, -1])
    assert rep.boundary_value == -1
    assert rep.omega_dot == 0
    assert rep.omega_conj_dot == 2


def test_covering_random_frames():
    rng = np.random.default_rng(3)
    for tau, n in el.random_frames(50, rng):
        rep = el.covering_check(tau, n, 2.0)
        assert rep.passed and rep.kernel_dim == 2
        assert rep.boundary_value.real == pytest.approx(-np.linalg.norm(tau), rel=1e-12)


def test_covering_preconditions():
    with pytest.raises(DomainError):
        el.covering_check([0, 0, 0], [0, 0, 1], 1.0)
    with pytest.raises(DomainError):
        el.covering_check([1, 0, 0.1], [0, 0, 1], 1.0)
    assert el.covering_check([1, 0, 0], [0, 0, 1], 0.0).status == "FAIL"


@pytest.mark.parametrize("lam,verdict", [(1.0, "generalized elliptic"), (-3.7, "generalized elliptic"),
                                         (0.0, "not elliptic")])
def test_report(lam, verdict):
    rep = el.ellipticity_report(lam)
    assert rep.verdict == verdict
    if lam:
        assert rep.min_singular > 1e-8
