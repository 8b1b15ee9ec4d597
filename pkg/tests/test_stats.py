import numpy as np
import pytest
from scipy import stats as sst

from wallparticles import stats as S
from wallparticles.errors import InvalidInputError
from wallparticles.rng import NoiseStream


def test_ks2_limits():
    a = np.linspace(0, 1, 50)
    d, p = S.ks2(a, a)
    assert d == 0 and p == pytest.approx(1)
    d, p = S.ks2(np.zeros(30), np.ones(30))
    assert d == 1 and p < 1e-10


def test_ecdf_sup_error():
    x = np.array([0.5])
    assert S.ecdf_sup_error(x, lambda t: t) == pytest.approx(0.5)
    u = np.random.default_rng(0).uniform(size=20000)
    assert S.ecdf_sup_error(u, lambda t: np.clip(t, 0, 1)) < 0.02


def test_energy_identical_samples(stream):
    a = np.random.default_rng(1).normal(size=(200, 2))
    t, p = S.energy_test(a, a.copy(), 199, stream)
    assert t == pytest.approx(0, abs=1e-12) and p == 1.0


def test_energy_disjoint_samples(stream):
    rng = np.random.default_rng(2)
    a = rng.normal(size=(150, 3))
    b = rng.normal(size=(150, 3)) + 10
    assert S.energy_test(a, b, 199, stream)[1] == pytest.approx(1 / 200)


def test_energy_sliced_disjoint(stream):
    rng = np.random.default_rng(3)
    a = rng.normal(size=(3000, 2))
    b = rng.normal(size=(3000, 2)) + 1
    assert S.energy_test(a, b, 100, stream, method="sliced")[1] == pytest.approx(1 / 101)


def test_sliced_numba_matches_numpy(stream):
    rng = np.random.default_rng(4)
    pooled = rng.normal(size=(500, 3))
    labels = np.zeros(500, dtype=bool)
    labels[:200] = True
    prep = S._energy_sliced_prep(pooled, 16, stream)
    assert S._energy_sliced(prep, labels) == pytest.approx(S._energy_sliced(prep, labels, use_numba=False), rel=1e-10)


def test_sliced_is_proportional_to_exact(stream):
    # averaged over directions, 1-D energy distance is c_d times the full one
    rng = np.random.default_rng(5)
    pooled = np.concatenate([rng.normal(size=(300, 2)), rng.normal(size=(300, 2)) * 2])
    labels = np.zeros(600, dtype=bool)
    labels[:300] = True
    ex = S._energy_exact(pooled, labels)
    sl = S._energy_sliced(S._energy_sliced_prep(pooled, 4000, stream), labels)
    assert sl / ex == pytest.approx(2 / np.pi, rel=0.05)


def test_energy_input_errors(stream):
    with pytest.raises(InvalidInputError):
        S.energy_test(np.zeros((5, 2)), np.zeros((5, 3)), 100, stream)
    with pytest.raises(InvalidInputError):
        S.energy_test(np.zeros((5, 2)), np.zeros((5, 2)), 10, stream)


def test_energy_calibration():
    # under the null, p-values should not pile up near zero
    rng = np.random.default_rng(6)
    ps = []
    for i in range(100):
        a, b = rng.normal(size=(40, 2)), rng.normal(size=(40, 2))
        ps.append(S.energy_test(a, b, 100, NoiseStream(7, i))[1])
    ps = np.array(ps)
    assert np.mean(ps <= 0.05) < 0.15
    assert sst.kstest(ps, "uniform").pvalue > 1e-3


def test_chi2_cells():
    probs = np.array([0.25, 0.25, 0.5])
    stat, dof, p = S.chi2_cells([25, 25, 50], probs)
    assert stat == 0 and dof == 2 and p == pytest.approx(1)
    stat, dof, p = S.chi2_cells([100, 0, 0, 0], [0.97, 0.01, 0.01, 0.01])
    assert dof == 1
    ref = sst.chisquare([100, 0], [97, 3])
    assert stat == pytest.approx(ref.statistic) and p == pytest.approx(ref.pvalue)
