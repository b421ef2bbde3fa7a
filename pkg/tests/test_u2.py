import numpy as np
import pytest

from conftest import HADAMARD
from unitscale.haar import RngStream, sample_unitary
from unitscale.matcore import line_sums, potential
from unitscale.scaler import scale
from unitscale.u2 import (
    Attractor,
    Branch,
    DegenerateCoset,
    U2Params,
    WrongDimension,
    attractor_matrix,
    named_points,
    real_line_sum_points,
    u2_analytic_zxz,
    u2_convergence_ratio,
    u2_from_params,
    u2_params,
    u2_predict_attractor,
)
from unitscale.zxz import negator


def rotation(t):
    return np.array([[np.cos(t), np.sin(t)], [-np.sin(t), np.cos(t)]], dtype=complex)


def test_params_identity():
    assert u2_params(np.eye(2)) == U2Params(0.0, 0.0, 0.0, 0.0)


def test_params_hadamard():
    p = u2_params(HADAMARD)
    np.testing.assert_allclose(
        [p.phi, p.theta, p.psi, p.chi], [np.pi / 4, np.pi / 2, -np.pi / 2, -np.pi / 2], atol=1e-15
    )


def test_params_rotation():
    p = u2_params(rotation(0.6))
    np.testing.assert_allclose([p.phi, p.theta, p.psi, p.chi], [0.6, 0, 0, 0], atol=1e-15)


def test_from_params():
    np.testing.assert_allclose(u2_from_params(U2Params(0, 0, 0, 0)), np.eye(2))
    H = u2_from_params(U2Params(np.pi / 4, np.pi / 2, -np.pi / 2, -np.pi / 2))
    np.testing.assert_allclose(H, HADAMARD, atol=1e-15)
    t = 0.4
    np.testing.assert_allclose(u2_from_params(U2Params(t, -t, 0, np.pi / 2)), negator(t), atol=1e-15)


def test_params_round_trip_random():
    for i in range(50):
        U = sample_unitary(2, RngStream(31, i))
        np.testing.assert_allclose(u2_params(U).matrix(), U, atol=1e-14)


def test_wrong_dimension():
    with pytest.raises(WrongDimension):
        u2_params(np.eye(3))


def test_analytic_identity():
    for b in Branch:
        d = u2_analytic_zxz(np.eye(2), b)
        assert d.alpha == 0 and d.Z1.is_identity() and d.Z2.is_identity()
        np.testing.assert_allclose(d.X, np.eye(2))


def test_analytic_rotation_second_branch():
    t = 0.5
    A = rotation(t)
    d = u2_analytic_zxz(A, Branch.SECOND)
    B = np.diag([np.exp(1j * t), 1j * np.exp(1j * t)]) @ A @ np.diag([1, -1j])
    np.testing.assert_allclose(d.X, B, atol=1e-15)
    assert d.residual(A) < 1e-15


def test_analytic_random():
    for i in range(100):
        U = sample_unitary(2, RngStream(32, i))
        for b in Branch:
            d = u2_analytic_zxz(U, b)
            assert d.residual(U) < 1e-14
            np.testing.assert_allclose(line_sums(d.X).all(), 1.0, atol=1e-14)


def test_predict_attractor():
    assert u2_predict_attractor(u2_from_params(U2Params(np.pi / 6, 0, 0, np.pi / 2))) is Attractor.B
    assert u2_predict_attractor(u2_from_params(U2Params(np.pi / 6, 0, 0, -np.pi / 2))) is Attractor.BPRIME
    assert u2_predict_attractor(rotation(0.5)) is Attractor.SEPARATRIX
    with pytest.raises(DegenerateCoset):
        u2_predict_attractor(np.eye(2))
    with pytest.raises(ValueError):
        attractor_matrix(0.3, Attractor.SEPARATRIX)


def test_predicted_attractor_is_reached():
    U = u2_from_params(U2Params(np.pi / 6, 0.3, 0.1, 1.2))
    B = scale(U).B
    np.testing.assert_allclose(B, attractor_matrix(np.pi / 6, Attractor.B), atol=1e-8)


@pytest.mark.parametrize(
    "phi, expected", [(np.pi / 4, 0.0), (np.pi / 6, 0.0625), (1e-9, 1.0)]
)
def test_convergence_ratio(phi, expected):
    assert u2_convergence_ratio(phi) == pytest.approx(expected, abs=1e-15)


def test_real_line_sum_points():
    phi = 0.35
    c, s = np.cos(phi), np.sin(phi)
    pts = real_line_sum_points(phi)
    assert len(pts) == 12
    psis = sorted(round(potential(p.matrix()), 12) for p in pts)
    for v in psis:
        assert min(abs(v - t) for t in (4, 4 * c * c, 4 * s * s, 0)) < 1e-12
    for p in pts:
        np.testing.assert_allclose(line_sums(p.matrix()).all().imag, 0.0, atol=1e-15)


def test_named_points():
    phi = np.pi / 6
    pts = named_points(phi)
    assert potential(pts["S"]) == pytest.approx(4 * np.sin(phi) ** 2)
    np.testing.assert_allclose(pts["B"], negator(phi), atol=1e-15)
    np.testing.assert_allclose(pts["B'"], negator(-phi), atol=1e-15)
    assert potential(pts["B"]) == pytest.approx(0, abs=1e-14)
