import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from unitscale.haar import RngStream, sample_unitary
from unitscale.matcore import DiagonalPhase, apply_diagonals, line_sums, potential, unitarity_residual
from unitscale.u2 import real_line_sum_points, u2_params
from unitscale.zxz import negator

angles = st.floats(-np.pi, np.pi, allow_nan=False)
unitaries = st.builds(
    lambda n, seed: sample_unitary(n, RngStream(seed, 0)),
    st.integers(1, 7),
    st.integers(0, 2**32),
)
u2s = st.integers(0, 2**32).map(lambda seed: sample_unitary(2, RngStream(seed, 1)))


@given(unitaries)
def test_matrix_sum_bounded(U):
    n = U.shape[0]
    s = line_sums(U)
    assert abs(s.matrix_sum) <= n + 1e-9
    assert abs((np.abs(s.rows) ** 2).sum() - n) < 1e-9
    assert abs((np.abs(s.cols) ** 2).sum() - n) < 1e-9
    assert abs(s.rows.sum() - s.matrix_sum) < 1e-12
    assert abs(s.cols.sum() - s.matrix_sum) < 1e-12
    assert -1e-9 <= potential(U) <= n * n + 1e-9


@given(unitaries, st.data())
def test_diagonal_scaling_preserves_unitarity(U, data):
    n = U.shape[0]
    lam = data.draw(st.lists(angles, min_size=n, max_size=n))
    rho = data.draw(st.lists(angles, min_size=n, max_size=n))
    B = apply_diagonals(DiagonalPhase(lam), U, DiagonalPhase(rho))
    assert unitarity_residual(B) < 1e-12
    np.testing.assert_allclose(np.abs(B), np.abs(U), atol=1e-15)


@given(angles, angles)
def test_negator_group_law(a, b):
    np.testing.assert_allclose(negator(a) @ negator(b), negator(a + b), atol=1e-14)


@given(u2s)
def test_u2_round_trip(U):
    np.testing.assert_allclose(u2_params(U).matrix(), U, atol=1e-14)


@given(u2s, angles, angles, angles, angles)
def test_u2_phi_is_coset_invariant(U, a, b, c, d):
    V = apply_diagonals(DiagonalPhase([a, b]), U, DiagonalPhase([c, d]))
    assert abs(u2_params(V).phi - u2_params(U).phi) < 1e-12


@settings(max_examples=50)
@given(st.floats(0.01, np.pi / 2 - 0.01))
def test_real_line_sum_points(phi):
    c2, s2 = np.cos(phi) ** 2, np.sin(phi) ** 2
    for p in real_line_sum_points(phi):
        M = p.matrix()
        np.testing.assert_allclose(line_sums(M).all().imag, 0.0, atol=1e-14)
        psi = potential(M)
        assert min(abs(psi - t) for t in (4.0, 4 * c2, 4 * s2, 0.0)) < 1e-12
