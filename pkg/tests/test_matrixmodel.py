import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from wallparticles.errors import InvalidInputError, NumericError
from wallparticles.linalg import jacobi_singular_values
from wallparticles.matrixmodel import (AntisymMatrix, J2, canonical_form, haar_orthogonal,
                                       increment_from_factor, minor_top_eigenvalues,
                                       positive_eigenvalues, run_process, run_process_batch,
                                       sample_increment)
from wallparticles.rng import NoiseStream


def test_identity_factor_gives_J():
    a = increment_from_factor(np.eye(2))
    assert np.array_equal(a, J2)
    assert positive_eigenvalues(a) == pytest.approx([1.0])


def test_increment_entries(stream):
    y = stream.normal((4, 2))
    a = increment_from_factor(y)
    assert a[0, 1] == pytest.approx(y[0, 0] * y[1, 1] - y[0, 1] * y[1, 0])
    assert np.array_equal(a, -a.T)


def test_sample_increment_antisymmetric(stream):
    for k in range(1, 6):
        a = sample_increment(k, stream).dense()
        assert a.shape == (k + 1, k + 1)
        assert np.max(np.abs(a + a.T)) == 0.0


def test_2x2_entry_is_laplace():
    y = NoiseStream(2, 2).normal((50_000, 2, 2))
    a12 = increment_from_factor(y)[:, 0, 1]
    assert stats.kstest(a12, "laplace").pvalue > 1e-3


def test_two_step_entry_law():
    A = run_process_batch(1, 2, 50_000, 31)
    x = A[:, 2, 0, 1]
    # density (1 + |x|) e^-|x| / 4
    cdf = lambda t: np.where(t < 0, 0.25 * (2 - t) * np.exp(t), 1 - 0.25 * (2 + t) * np.exp(-t))
    assert stats.kstest(x, cdf).pvalue > 1e-3


def test_run_process_partial_sums(stream):
    seq = run_process(3, 4, stream)
    assert np.all(seq[0].dense() == 0)
    assert len(seq) == 5
    again = run_process(3, 4, NoiseStream(stream.seed, stream.stream_id))
    assert all(np.array_equal(a.upper, b.upper) for a, b in zip(seq, again))


def test_positive_eigenvalues_small_cases():
    assert positive_eigenvalues(-2.5 * J2) == pytest.approx([2.5])
    a = np.zeros((3, 3))
    a[0, 1], a[1, 0] = 1.7, -1.7
    assert positive_eigenvalues(a) == pytest.approx([1.7])
    assert minor_top_eigenvalues(a) == pytest.approx([1.7, 1.7])
    assert minor_top_eigenvalues(-0.3 * J2) == pytest.approx([0.3])


def _antisym(rng, d):
    g = rng.normal(size=(d, d))
    return g - g.T


def test_char_poly_oracle(np_rng):
    for _ in range(50):
        a = _antisym(np_rng, 4)
        roots = np.roots(np.poly(1j * a))
        pos = np.sort(roots.real[roots.real > 0])[::-1]
        assert np.max(np.abs(np.abs(roots.imag))) < 1e-9
        assert positive_eigenvalues(a) == pytest.approx(pos, abs=1e-9)


def test_minor_oracle(np_rng):
    for _ in range(50):
        a = _antisym(np_rng, 4)
        expect = [np.linalg.eigvalsh(1j * a[:m, :m]).max() for m in range(2, 5)]
        assert minor_top_eigenvalues(a) == pytest.approx(expect, abs=1e-9)


@settings(max_examples=100, deadline=None)
@given(d=st.integers(2, 7), seed=st.integers(0, 2**32 - 1))
def test_pairing_and_monotone_minors(d, seed):
    a = _antisym(np.random.default_rng(seed), d)
    ev = np.linalg.eigvalsh(1j * a)
    assert np.max(np.abs(ev + ev[::-1])) <= 1e-9 * np.linalg.norm(a, 2)
    pos = positive_eigenvalues(a)
    assert pos == pytest.approx(np.sort(ev)[::-1][:d // 2], abs=1e-10)
    m = minor_top_eigenvalues(a)
    assert np.all(np.diff(m) >= -1e-12)


def test_jacobi_matches_lapack(np_rng):
    a = np_rng.normal(size=(200, 5, 3))
    assert jacobi_singular_values(a) == pytest.approx(np.linalg.svd(a, compute_uv=False), abs=1e-12)


def test_tiny_singular_values_relative_accuracy():
    # graded matrix: one-sided Jacobi keeps relative accuracy for small values
    d = np.diag([1.0, 1e-5, 1e-10])
    q = np.linalg.qr(np.random.default_rng(0).normal(size=(3, 3)))[0]
    sv = jacobi_singular_values(d @ q)
    assert sv == pytest.approx([1.0, 1e-5, 1e-10], rel=1e-8)


def test_non_finite_rejected():
    a = np.zeros((2, 2))
    a[0, 1] = np.nan
    with pytest.raises(NumericError):
        positive_eigenvalues(a)


def test_antisym_matrix_roundtrip(np_rng):
    a = _antisym(np_rng, 5)
    m = AntisymMatrix.from_dense(a)
    assert np.array_equal(m.dense(), a)
    with pytest.raises(InvalidInputError):
        AntisymMatrix.from_dense(np.eye(3))


def test_canonical_form_conjugated_spectrum(stream):
    lam = np.array([[2.0, 1.0]] * 10)
    o = haar_orthogonal(stream, 10, 5)
    assert np.allclose(o @ np.swapaxes(o, -1, -2), np.eye(5))
    a = o @ canonical_form(lam, 5) @ np.swapaxes(o, -1, -2)
    assert np.allclose(positive_eigenvalues(a), lam)
