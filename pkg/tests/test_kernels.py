import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, special

from wallparticles import kernels as K
from wallparticles.errors import DomainError, InvalidInputError
from wallparticles.verify import det_fraction, integrate_C_chamber, integrate_chamber2

E = math.exp


def phi_d_by_quadrature(m, x):
    """Defining integral of the negative orders: (-1)^m int_x^inf (t-x)^(m-1)/(m-1)! phi(t) dt."""
    f = lambda t: (t - x) ** (m - 1) / math.factorial(m - 1) * K.phi(t)
    pts = [x, 0.0] if x < 0 else [x]
    v = sum(integrate.quad(f, pts[i], pts[i + 1], epsabs=1e-13)[0] for i in range(len(pts) - 1))
    v += integrate.quad(f, max(pts[-1], 0.0), np.inf, epsabs=1e-13)[0]
    return (-1) ** m * v


def test_phi_values():
    assert K.phi(0) == 0.5
    assert K.phi(1) == pytest.approx(0.5 * E(-1))
    assert K.phi(-2) == pytest.approx(0.0676676, abs=1e-7)
    assert K.phi(-2) == K.phi(2)


def test_phi_integrates_to_one():
    v = integrate.quad(K.phi, -np.inf, 0)[0] + integrate.quad(K.phi, 0, np.inf)[0]
    assert v == pytest.approx(1, abs=1e-8)


def test_phi_d_examples():
    assert K.phi_d(1, -1) == pytest.approx(0.1839397, abs=1e-7)
    assert K.phi_d(-1, -1) == pytest.approx(-0.8160603, abs=1e-7)
    assert K.phi_d(-2, -1) == pytest.approx(1.1839397, abs=1e-7)
    assert K.phi_d(0, 0.3) == K.phi(0.3)


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
@pytest.mark.parametrize("x", [-3.0, -1.0, -0.2, 0.0, 0.4, 2.0])
def test_negative_orders_match_defining_integral(m, x):
    assert K.phi_d(-m, x) == pytest.approx(phi_d_by_quadrature(m, x), abs=1e-9)


@pytest.mark.parametrize("m", range(-4, 5))
def test_right_branch_shared(m):
    xs = np.linspace(0, 5, 11)
    assert np.allclose(K.phi_d(m, xs), K.phi_d(abs(m), xs))


@pytest.mark.parametrize("m", range(-4, 4))
def test_derivative_ladder(m):
    h = 1e-4
    xs = np.concatenate([np.linspace(-4, -0.05, 25), np.linspace(0.05, 4, 25)])
    fd = (K.phi_d(m, xs + h) - K.phi_d(m, xs - h)) / (2 * h)
    assert np.max(np.abs(fd - K.phi_d(m + 1, xs))) < 1e-6


def test_q_kernel():
    ys = np.linspace(0, 5, 7)
    assert np.allclose(K.q_kernel(0.0, ys), np.exp(-ys))
    assert K.q_kernel(1, 1) == pytest.approx(0.5 + 0.5 * E(-2))
    assert K.q_kernel(2, 5) == pytest.approx(0.5 * E(-7) + 0.5 * E(-3))
    with pytest.raises(DomainError):
        K.q_kernel(-1, 1)


def test_q_kernel_is_density():
    for x in (0.0, 0.5, 3.0):
        v = integrate.quad(lambda y: K.q_kernel(x, y), 0, x, epsabs=1e-13)[0] + \
            integrate.quad(lambda y: K.q_kernel(x, y), x, np.inf, epsabs=1e-13)[0]
        assert v == pytest.approx(1, abs=1e-9)


def test_p_r():
    xs = np.linspace(0, 4, 9)
    for x in xs:
        assert np.allclose(K.p_r(0.0, x, xs), K.q_kernel(x, xs))
    assert K.p_r(1, 2, 2) == pytest.approx(0.5 + 0.5 * E(-2))
    v = integrate.quad(lambda y: K.p_r(1.0, 2.0, y), 1, 2)[0] + integrate.quad(lambda y: K.p_r(1.0, 2.0, y), 2, np.inf)[0]
    assert v == pytest.approx(1, abs=1e-8)
    with pytest.raises(DomainError):
        K.p_r(1.0, 0.5, 2.0)


def test_c_and_d():
    assert K.c_const(1) == 1 and K.d_func(1, [3.7]) == 1
    assert K.c_const(2) == 1 and K.d_func(2, [0.8]) == pytest.approx(0.8)
    assert K.c_const(3) == 2 and K.d_func(3, [2, 1]) == pytest.approx(1.5)
    assert K.c_const(4) == 6 and K.d_func(4, [2, 1]) == pytest.approx(1.0)
    with pytest.raises(InvalidInputError):
        K.d_func(3, [1.0])


def test_P_kernel_examples():
    for lam, beta in [(0.4, 1.3), (2.0, 0.7)]:
        assert K.P_kernel(1, [lam], [beta]) == pytest.approx(K.q_kernel(lam, beta))
    assert K.P_kernel(2, [1.0], [2.0]) == pytest.approx(E(-1) - E(-3))
    p = lambda x: 0.5 * E(-abs(x))
    m = [[p(0) + p(4), p(1) + p(3)], [p(-1) + p(3), p(0) + p(2)]]
    assert K.P_kernel(3, [2, 1], [2, 1]) == pytest.approx(m[0][0] * m[1][1] - m[0][1] * m[1][0])
    assert K.P_kernel(3, [2, 1], [2, 1]) == pytest.approx(0.245421, abs=1e-6)


@pytest.mark.parametrize("lam,beta", [([1, 2], [2, 1]), ([2, 2], [2, 1]), ([2, 0], [2, 1]), ([2, 1], [1, 1])])
def test_P_kernel_domain(lam, beta):
    with pytest.raises(DomainError):
        K.P_kernel(3, lam, beta)


@pytest.mark.parametrize("k,lam", [(2, (1.0,)), (3, (2.0, 1.0)), (4, (2.0, 1.0))])
def test_P_kernel_normalised(k, lam):
    p = K.spectral_dim(k)
    f = lambda *b: K.P_kernel(k, lam, b) if (p == 1 or b[0] > b[1] > 0) else 0.0
    assert integrate_C_chamber(f, p, lam) == pytest.approx(1, abs=1e-6)


def test_a_coeff_boundary():
    xs = np.linspace(0, 8, 17)
    assert np.all(K.a_coeff(2, 1, 0.0, xs) == pytest.approx(1.0, abs=1e-15))
    assert K.a_coeff(2, 1, 0.0, 7.3) == pytest.approx(1.0, abs=1e-15)
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            assert np.all(K.a_coeff(2 * i, 2 * j, xs, 0.0) == 0)
        for j in range(2 * i, 9):
            assert np.max(np.abs(K.a_coeff(2 * i, j, 0.0, xs[1:]))) < 1e-15
    assert np.allclose(K.a_coeff(1, 1, xs, xs[::-1]), K.q_kernel(xs, xs[::-1]))


def test_Q_kernel_small_cases():
    for y, yp in [(0.3, 1.2), (2.0, 0.1)]:
        assert K.Q_kernel(1, [y], [yp]) == pytest.approx(K.q_kernel(y, yp))
    y1 = np.linspace(0, 3, 7)
    # the origin itself sits on the jump of the boundary coefficient
    pts = np.array([(a, b) for a in y1 for b in y1 if a <= b and b > 0])
    assert np.allclose(K.Q_kernel(2, [0.0, 0.0], pts), np.exp(-pts[:, 1]))


def test_Q_kernel_hand_determinant():
    a11 = 0.5 + 0.5 * E(-2)
    a12 = -0.5 * E(-3) - 0.5 * E(-1)
    assert K.a_coeff(1, 2, 1.0, 2.0) == pytest.approx(a12)
    assert a12 == pytest.approx(-0.2088450, abs=2e-5)
    a21 = 0.5 * E(-3) + 0.5 * E(-1)
    a22 = 0.5 - 0.5 * E(-4)
    assert K.Q_kernel(2, [1, 2], [1, 2]) == pytest.approx(a11 * a22 - a12 * a21)


def test_Q_kernel_normalised():
    for y in [(1.0, 2.0), (0.0, 0.5)]:
        v = integrate_chamber2(lambda a, b: K.Q_kernel(2, y, (a, b)), y)
        assert v == pytest.approx(1, abs=1e-6)


def test_Q_kernel_rejects_unordered():
    with pytest.raises(DomainError):
        K.Q_kernel(2, [2.0, 1.0], [1.0, 2.0])


def test_det_lu():
    assert K.det_lu(np.eye(3)) == 1
    assert K.det_lu([[1, 2], [3, 4]]) == pytest.approx(-2)
    h = [[Fraction(1, i + j + 1) for j in range(3)] for i in range(3)]
    exact = det_fraction(h)
    assert exact == Fraction(1, 2160)
    assert K.det_lu(np.array(h, dtype=float)) == pytest.approx(float(exact), rel=1e-12)
    assert K.det_lu([[1, 2], [2, 4]]) == 0
    assert K.KernelMatrix([[2.0]]).det() == 2.0


@settings(max_examples=200, deadline=None)
@given(n=st.integers(1, 6), seed=st.integers(0, 2**32 - 1))
def test_det_lu_matches_numpy(n, seed):
    m = np.random.default_rng(seed).normal(size=(n, n))
    assert K.det_lu(m) == pytest.approx(np.linalg.det(m), rel=1e-10, abs=1e-12)


def test_lower_inc_gamma():
    for t in (0.0, 0.3, 2.0, 9.0):
        assert K.lower_inc_gamma_int(0, t) == pytest.approx(1 - E(-t), abs=1e-15)
    assert K.lower_inc_gamma_int(1, 1.0) == pytest.approx(1 - 2 * E(-1))
    assert K.lower_inc_gamma_int(3, math.inf) == 6
    assert K.lower_inc_gamma_int(3, 200.0) == pytest.approx(6)
    for m in range(6):
        for t in (0.01, 0.5, 3.0, 12.0):
            ref = special.gammainc(m + 1, t) * math.factorial(m)
            assert K.lower_inc_gamma_int(m, t) == pytest.approx(ref, rel=1e-12)
    with pytest.raises(InvalidInputError):
        K.lower_inc_gamma_int(-1, 1.0)
    with pytest.raises(InvalidInputError):
        K.lower_inc_gamma_int(1, -1.0)


def test_cdf_formula_as_printed():
    ts = [0.0, 0.5, 1.0, 3.0]
    for t in ts:
        assert K.cdf_last_particle(1, 1, t) == pytest.approx(1 - E(-t), abs=1e-15)
        assert K.cdf_last_particle(1, 2, t, normalized=False) == pytest.approx(1 - E(-t) * (1 + t), abs=1e-15)
    assert K.cdf_last_particle(1, 2, 1.0) != pytest.approx(K.cdf_first_particle_exact(2, 1.0), abs=0.1)
    assert K.cdf_last_particle(3, 2, math.inf, normalized=False) == pytest.approx(4.0)
    assert K.cdf_last_particle(3, 2, math.inf) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        K.cdf_last_particle(3, 1, 1.0)


def test_exact_first_particle_cdf_by_convolution():
    # |S_2| has density (1 + y) e^-y / 2 on y >= 0
    for t in (0.3, 1.0, 4.0):
        v = integrate.quad(lambda y: 0.5 * (1 + y) * E(-y), 0, t)[0]
        assert K.cdf_first_particle_exact(2, t) == pytest.approx(v, abs=1e-12)
