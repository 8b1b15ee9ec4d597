"""Acceptance criteria at their stated scale and tolerance.

Each test records one PASS/FAIL line; the lines are printed together in the
terminal summary (see ``conftest.py``).
"""

import pytest

from wallparticles.suite import run_target
from wallparticles.verify import check_normalization

SEED = 1
RESULTS = {}


def record(num, title, reports, ok=None):
    ok = all(r.passed for r in reports if r.binding) if ok is None else ok
    detail = "; ".join(f"{r.name}: {'ok' if r.passed else 'failed'}" for r in reports)
    RESULTS[num] = f"criterion {num:>2} {'PASS' if ok else 'FAIL'}  {title}  [{detail}]"
    return ok


def explain(reports):
    return "\n".join(line for r in reports for line in r.lines())


@pytest.mark.slow
def test_c01_top_particle_vs_top_eigenvalue():
    reps = run_target("theorem1", SEED)
    assert record(1, "top particle = top eigenvalue in law (k=3 n=4 N=2e5, k=1 analytic)", reps), explain(reps)


@pytest.mark.slow
def test_c02_particle_vector_vs_minor_vector():
    reps = run_target("theorem2", SEED)
    assert record(2, "particle vector = minor vector in law (k=3 n=3 N=5e4)", reps), explain(reps)


@pytest.mark.slow
def test_c03_one_step_kernels():
    reps = run_target("lemmas", SEED)
    assert record(3, "one-step transitions match q and p_r (N=1e5)", reps), explain(reps)


@pytest.mark.slow
def test_c04_Q2_closed_form():
    reps = run_target("kernels", SEED)
    q2 = [r for r in reps if r.name == "Q_2 closed form"]
    assert len(q2) == 1
    assert record(4, "Q_2 closed form (chi-square, integral = 1)", q2), explain(q2)


def test_c05_P_normalisation():
    reps = [check_normalization()]
    assert record(5, "P_2 and P_3 integrate to 1 within 1e-6", reps), explain(reps)


@pytest.mark.slow
def test_c06_intertwining():
    reps = run_target("intertwining", SEED)
    assert record(6, "intertwining (k=2 quadrature, k=3 Monte Carlo n=2)", reps), explain(reps)


@pytest.mark.slow
def test_c07_gt_volumes():
    reps = run_target("volume", SEED)
    assert record(7, "GT volumes within 3 sigma of d_k (N=1e6)", reps), explain(reps)


@pytest.mark.slow
def test_c08_spectral_symmetry():
    reps = run_target("spectral", SEED)
    assert record(8, "spectral symmetry and monotone minors (1e4 matrices)", reps), explain(reps)


@pytest.mark.slow
def test_c09_dynamics_equivalence():
    reps = run_target("equivalence", SEED)
    assert record(9, "two-phase and one-pass updates agree pathwise (1e4 paths, k<=6, n=50)", reps), explain(reps)


def test_c10_identities():
    reps = run_target("identities", SEED)
    assert record(10, "Cauchy-Binet, interlacing determinant, boundary and integral identities", reps), explain(reps)


@pytest.mark.slow
def test_c11_cdf():
    reps = run_target("cdf", SEED)
    binding_ok = all(r.passed for r in reps)
    by_name = {r.name: r for r in reps}
    diag = [c for c in by_name["cdf k=1 n=2"].children if not c.binding]
    expected_diag_fail = len(diag) == 1 and not diag[0].passed
    ok = binding_ok and expected_diag_fail
    record(11, "CDF: binding Monte Carlo checks pass, printed formula flagged at k=1 n=2", reps, ok)
    assert ok, explain(reps)
