"""Checks that confront simulations and closed forms.

Every ``check_*`` function returns a :class:`TestReport`.  Composite checks
carry their sub-results in ``children``; the parent's statistic is the
number of failed binding children and its threshold is 0.  Reports marked
``binding=False`` are diagnostics: they are emitted but never decide the
exit status.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np
from scipy import integrate

from . import dynamics, gtpattern, kernels, matrixmodel
from . import rng as _rng
from .errors import InvalidInputError
from .stats import chi2_cells, ecdf_sup_error, energy_test, ks2

SIGNIFICANCE = 1e-3
QUAD_TOL = 1e-6
IDENTITY_TOL = 1e-12
N_PERM = 200


@dataclass
class TestReport:
    name: str
    statistic: float
    threshold: float
    p_value: float | None = None
    n_samples: int = 0
    passed: bool = False
    notes: str = ""
    binding: bool = True
    children: list = field(default_factory=list)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["children"] = [c.to_dict() for c in self.children]
        return d

    def lines(self, indent: int = 0):
        tag = "PASS" if self.passed else ("FAIL" if self.binding else "DIAG")
        p = "" if self.p_value is None else f" p={self.p_value:.4g}"
        yield (f"{'  ' * indent}[{tag}] {self.name}: stat={self.statistic:.6g} "
               f"thr={self.threshold:.6g}{p} n={self.n_samples}"
               + (f"  ({self.notes})" if self.notes else ""))
        for c in self.children:
            yield from c.lines(indent + 1)


def _pvalue_report(name, stat, p, n, sig=SIGNIFICANCE, notes="", binding=True, stat_max=None):
    ok = p > sig and (stat_max is None or stat < stat_max)
    if stat_max is not None:
        notes = (notes + "; " if notes else "") + f"also requires stat < {stat_max:g}"
    return TestReport(name, float(stat), sig, float(p), int(n), bool(ok), notes, binding)


def _bound_report(name, stat, thr, n=0, notes="", binding=True, strict=True):
    ok = stat < thr if strict else stat <= thr
    return TestReport(name, float(stat), float(thr), None, int(n), bool(ok), notes, binding)


def composite(name, children, notes="") -> TestReport:
    failed = sum(1 for c in children if c.binding and not c.passed)
    n = sum(c.n_samples for c in children)
    return TestReport(name, float(failed), 0.0, None, n, failed == 0, notes, True, list(children))


# ---------------------------------------------------------------- sampling

def particle_samples(k, n, N, seed, jobs=1, start=None):
    return dynamics.simulate_batch(k, n, N, seed, start=start, jobs=jobs)


def matrix_samples(k, n, N, seed, jobs=1):
    return matrixmodel.run_process_batch(k, n, N, seed, jobs=jobs)


def _seeds(seed, n):
    """Distinct child seeds so that the two sides of a comparison never share noise."""
    ss = np.random.SeedSequence(seed)
    return [int(s.generate_state(1, dtype=np.uint64)[0]) for s in ss.spawn(n)]


# ---------------------------------------------------------------- theorems

def check_theorem1(k, n, N, seed, *, times=(2, 4), joint_cap=20_000, n_perm=N_PERM,
                   ks_stat_max=None, jobs=1) -> TestReport:
    """Top particle against top eigenvalue, at time ``n`` and jointly at ``times``."""
    if k < 1 or n < 1:
        raise InvalidInputError("need k >= 1 and n >= 1")
    horizon = max(n, *times) if times else n
    s_part, s_mat, s_perm = _seeds(seed, 3)
    X = particle_samples(k, horizon, N, s_part, jobs)[:, :, k - 1]
    A = matrix_samples(k, horizon, N, s_mat, jobs)
    lam1 = np.empty((N, horizon + 1))
    lam1[:, 0] = 0.0
    for t in range(1, horizon + 1):
        lam1[:, t] = matrixmodel.positive_eigenvalues(A[:, t])[:, 0]
    kids = []
    st, p = ks2(X[:, n], lam1[:, n])
    kids.append(_pvalue_report(f"ks X_{k}({n}) vs Lambda_1({n})", st, p, 2 * N, stat_max=ks_stat_max))
    if k == 1 and n in (1, 2):
        thr = 3 / math.sqrt(N)
        cdf = lambda t: kernels.cdf_first_particle_exact(n, t)
        kids.append(_bound_report(f"sup|ECDF-F| X_1({n}) vs exact", ecdf_sup_error(X[:, n], cdf), thr, N))
        kids.append(_bound_report(f"sup|ECDF-F| Lambda_1({n}) vs exact", ecdf_sup_error(lam1[:, n], cdf), thr, N))
    if times:
        m = min(N, joint_cap)
        a = X[:m][:, list(times)]
        b = lam1[:m][:, list(times)]
        st, p = energy_test(a, b, n_perm, _rng.NoiseStream(s_perm))
        kids.append(_pvalue_report(f"energy joint at times {tuple(times)}", st, p, 2 * m))
    return composite(f"theorem1 k={k} n={n}", kids)


def check_theorem2(k, n, N, seed, *, n_perm=N_PERM, jobs=1) -> TestReport:
    """Particle vector against the vector of top eigenvalues of leading minors."""
    if k == 1:
        return check_theorem1(1, n, N, seed, times=(), jobs=jobs)
    s_part, s_mat, s_perm = _seeds(seed, 3)
    X = particle_samples(k, n, N, s_part, jobs)[:, n]
    M = matrixmodel.minor_top_eigenvalues(matrix_samples(k, n, N, s_mat, jobs)[:, n])
    kids = []
    for c in range(k):
        st, p = ks2(X[:, c], M[:, c])
        kids.append(_pvalue_report(f"ks X_{c + 1}({n}) vs Lambda1^({c + 2})({n})", st, p, 2 * N))
    st, p = energy_test(X, M, n_perm, _rng.NoiseStream(s_perm))
    kids.append(_pvalue_report("energy joint vector", st, p, 2 * N))
    return composite(f"theorem2 k={k} n={n}", kids)


# ---------------------------------------------------------------- lemmas

def bin_masses(density, edges, kinks=()):
    """Exact probability of each bin ``[edges[i], edges[i+1])`` under a 1-D density."""
    out = np.empty(len(edges) - 1)
    for i in range(len(edges) - 1):
        a, b = edges[i], edges[i + 1]
        if math.isinf(b):
            pts = [a] + [c for c in kinks if c > a]
            v = sum(integrate.quad(density, pts[j], pts[j + 1], epsabs=1e-13, epsrel=1e-12)[0]
                    for j in range(len(pts) - 1))
            v += integrate.quad(density, pts[-1], np.inf, epsabs=1e-13, epsrel=1e-12)[0]
        else:
            pts = [c for c in kinks if a < c < b]
            v = integrate.quad(density, a, b, points=pts or None, epsabs=1e-13, epsrel=1e-12)[0]
        out[i] = v
    return out


def histogram_error(sample, density, lo, kinks=(), width=0.2, span=10.0):
    edges = np.append(lo + width * np.arange(int(span / width) + 1), np.inf)
    counts, _ = np.histogram(sample, bins=edges)
    emp = counts / len(sample)
    exact = bin_masses(density, edges, kinks)
    return float(np.max(np.abs(emp - exact))), float(abs(exact.sum() - 1))


def check_lemma_kernels(N, seed, *, x0=1.0, z0=2.0, radii=(0.0, 0.5, 1.0)) -> TestReport:
    """One-step transitions of the folded walk, the 2x2 matrix model and blocked walks."""
    st = _rng.NoiseStream(seed, _rng.stream_id(_rng.AUX))
    thr = 5 / math.sqrt(N)
    kids = []

    s1 = np.abs(st.laplace(N))
    kids.append(_bound_report("|S_1| sup|ECDF - (1-e^-t)|", ecdf_sup_error(s1, lambda t: -np.expm1(-t)),
                              3 / math.sqrt(N), N))

    dens_q = lambda y: kernels.q_kernel(x0, y)
    walk = np.abs(x0 + st.laplace(N))
    err, mass = histogram_error(walk, dens_q, 0.0, kinks=(x0,))
    kids.append(_bound_report(f"|S| step from {x0} vs q", err, thr, N, f"bin mass defect {mass:.1e}"))

    a = matrixmodel.canonical_form(np.full((N, 1), x0), 2)
    a = a + matrixmodel.increment_from_factor(st.normal((N, 2, 2)))
    ev = matrixmodel.positive_eigenvalues(a)[:, 0]
    err, _ = histogram_error(ev, dens_q, 0.0, kinks=(x0,))
    kids.append(_bound_report(f"2x2 eigenvalue step from {x0} vs q", err, thr, N))

    first = dynamics.step(np.full((N, 1), x0), st.exponential((N, 1)), st.exponential((N, 1)))[:, 0]
    err, _ = histogram_error(first, dens_q, 0.0, kinks=(x0,))
    kids.append(_bound_report(f"first particle step from {x0} vs q", err, thr, N))

    for r in radii:
        z = dynamics.wall_walk_step(np.full(N, z0), r, st.exponential(N), st.exponential(N))
        dens = lambda y, r=r: kernels.p_r(r, z0, y)
        err, mass = histogram_error(z, dens, r, kinks=(z0,))
        kids.append(_bound_report(f"blocked walk r={r} step from {z0} vs p_r", err, thr, N,
                                  f"bin mass defect {mass:.1e}"))
    return composite("lemma kernels", kids, "sup histogram bin-probability error < 5/sqrt(N)")


def _inner_quad(f, a, b, kinks, tol):
    pts = [a] + sorted(c for c in set(kinks) if a < c < b) + [b]
    return sum(integrate.quad(f, pts[i], pts[i + 1], epsabs=tol, epsrel=tol, limit=200)[0]
               for i in range(len(pts) - 1))


def integrate_chamber2(f, kinks, hi=np.inf, tol=1e-12):
    """``int_{0 <= y1 <= y2} f(y1, y2)`` splitting at the given discontinuity lines."""
    outer = lambda y2: _inner_quad(lambda y1: f(y1, y2), 0.0, y2, kinks, tol)
    cut = max(kinks, default=0.0) + 1.0
    pts = [0.0] + sorted(c for c in set(kinks) if c > 0) + [cut]
    val = sum(integrate.quad(outer, pts[i], pts[i + 1], epsabs=tol, epsrel=tol, limit=200)[0]
              for i in range(len(pts) - 1))
    val += integrate.quad(outer, cut, hi, epsabs=tol, epsrel=tol, limit=200)[0]
    return val


def integrate_C_chamber(f, p, kinks, tol=1e-11):
    """Integral over ``{b_1 > ... > b_p > 0}`` for ``p`` in {1, 2}."""
    if p == 1:
        return _inner_quad(f, 0.0, max(kinks) + 1.0, kinks, tol) + \
            integrate.quad(f, max(kinks) + 1.0, np.inf, epsabs=tol, epsrel=tol)[0]
    if p == 2:
        return integrate_chamber2(lambda b2, b1: f(b1, b2), kinks, tol=tol)
    raise InvalidInputError("quadrature implemented for p <= 2")


def cell_probs(density, x_edges, y_edges, kinks):
    """Probabilities of rectangles intersected with ``{y1 <= y2}`` under a 2-D density."""
    probs = np.zeros((len(x_edges) - 1, len(y_edges) - 1))
    for j in range(len(y_edges) - 1):
        c, d = y_edges[j], y_edges[j + 1]
        for i in range(len(x_edges) - 1):
            a, b = x_edges[i], x_edges[i + 1]
            if a >= d:
                continue

            def outer(y2):
                top = min(b, y2)
                if top <= a:
                    return 0.0
                return _inner_quad(lambda y1: density(y1, y2), a, top, kinks, 1e-11)

            pts = [c] + sorted(k for k in set(kinks) | {a, b} if c < k < d and not math.isinf(k))
            if math.isinf(d):
                v = sum(integrate.quad(outer, pts[t], pts[t + 1], epsabs=1e-11, epsrel=1e-10, limit=200)[0]
                        for t in range(len(pts) - 1))
                v += integrate.quad(outer, pts[-1], np.inf, epsabs=1e-11, epsrel=1e-10, limit=200)[0]
            else:
                pts.append(d)
                v = sum(integrate.quad(outer, pts[t], pts[t + 1], epsabs=1e-11, epsrel=1e-10, limit=200)[0]
                        for t in range(len(pts) - 1))
            probs[i, j] = v
    return probs


def check_Q2(N, seed, *, jobs=1) -> TestReport:
    """Closed-form two-particle kernel against one simulated step, plus its normalisation."""
    kids = []
    s0, s1 = _seeds(seed, 2)
    xe = [0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, np.inf]
    ye = [0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0, np.inf]
    for start, s in (((0.0, 0.0), s0), ((1.0, 2.0), s1)):
        y = particle_samples(2, 1, N, s, jobs, start=start)[:, 1]
        dens = lambda a, b, start=start: kernels.Q_kernel(2, start, (a, b))
        probs = cell_probs(dens, xe, ye, kinks=start)
        counts, _, _ = np.histogram2d(y[:, 0], y[:, 1], bins=[xe, ye])
        stat, dof, p = chi2_cells(counts, probs)
        kids.append(_pvalue_report(f"chi2 one step from {start} vs Q_2", stat, p, N,
                                   notes=f"dof={dof}, cell mass defect {abs(probs.sum() - 1):.1e}"))
    tot = integrate_chamber2(lambda a, b: kernels.Q_kernel(2, (1.0, 2.0), (a, b)), (1.0, 2.0))
    kids.append(_bound_report("int Q_2((1,2),.) - 1", abs(tot - 1), QUAD_TOL, notes=f"integral={tot!r}"))
    return composite("Q_2 closed form", kids)


def check_normalization() -> TestReport:
    kids = []
    v = integrate.quad(kernels.phi, -np.inf, 0)[0] + integrate.quad(kernels.phi, 0, np.inf)[0]
    kids.append(_bound_report("int phi - 1", abs(v - 1), QUAD_TOL))
    v = _inner_quad(lambda y: kernels.p_r(1.0, 2.0, y), 1.0, 60.0, (2.0,), 1e-13)
    kids.append(_bound_report("int p_1(2,.) - 1", abs(v - 1), QUAD_TOL))
    for k, lam in ((2, (1.0,)), (3, (2.0, 1.0))):
        p = kernels.spectral_dim(k)
        f = lambda *b, k=k, lam=lam: kernels.P_kernel(k, lam, b) if (p == 1 or b[0] > b[1] > 0) else 0.0
        v = integrate_C_chamber(f, p, lam)
        kids.append(_bound_report(f"int P_{k}({lam},.) - 1", abs(v - 1), QUAD_TOL, notes=f"integral={v!r}"))
    return composite("kernel normalisation", kids)


# ---------------------------------------------------------------- intertwining

def intertwining_k2_grid(lam, grid=20, y_max=5.0):
    """``(L_2 Q_2)(lam, y)`` and ``(P_2 L_2)(lam, y)`` on a grid of the open chamber.

    ``L_2(lam, .)`` is the law of ``(U lam, lam)``, ``U`` uniform, so the left
    side is a one-dimensional integral over the free entry and the right side
    reduces to ``P_2(lam, y_2) / y_2``.
    """
    g = y_max * (np.arange(1, grid + 1) / grid)
    rows = []
    for y2 in g:
        for y1 in g * (y2 / y_max) - 0.5 * y2 / grid:
            f = lambda u: kernels.Q_kernel(2, (u, lam), (y1, y2))
            lhs = _inner_quad(f, 0.0, lam, (y1, y2), 1e-13) / lam
            rhs = kernels.P_kernel(2, (lam,), (y2,)) / y2
            rows.append((y1, y2, lhs, rhs))
    return np.array(rows)


def _P_step_then_L(k, lam, N, seed, sweeps):
    """One eigenvalue step from a matrix with spectrum ``lam``, then ``L_k``."""
    d = k + 1
    st = _rng.NoiseStream(seed, _rng.stream_id(_rng.ORTHO))
    o = matrixmodel.haar_orthogonal(st, N, d)
    a0 = matrixmodel.canonical_form(np.broadcast_to(lam, (N, len(lam))), d)
    a = o @ a0 @ np.swapaxes(o, -1, -2)
    a = a + matrixmodel.increment_from_factor(st.normal((N, d, 2)))
    beta = matrixmodel.positive_eigenvalues(a)
    return gtpattern.sample_L(k, beta, sweeps, _rng.NoiseStream(seed, _rng.stream_id(_rng.GT)))


def _L_then_Q_step(k, lam, N, seed, sweeps):
    y = gtpattern.sample_L(k, np.broadcast_to(lam, (N, len(lam))), sweeps,
                           _rng.NoiseStream(seed, _rng.stream_id(_rng.GT)))
    st = _rng.NoiseStream(seed, _rng.stream_id(_rng.AUX))
    return dynamics.step(y, st.exponential((N, k)), st.exponential((N, k)))


def check_intertwining(k, lam, mode, N_or_grid, seed, *, n=2, sweeps=200, n_perm=N_PERM,
                       rel_tol=QUAD_TOL, jobs=1) -> TestReport:
    """``L_k Q_k = P_k L_k`` by quadrature (``k = 2``) or Monte Carlo (``k <= 4``).

    The Monte Carlo mode also compares ``Q_k^n(0, .)`` with ``P_k^n L_k(0, .)``
    (``n`` steps from the origin; the matrix side is projected eigenvalues
    of ``A(n)`` pushed through ``L_k``).
    """
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    if mode == "quadrature":
        if k != 2:
            raise InvalidInputError("quadrature mode is implemented for k = 2")
        lam1 = float(lam[0])
        tab = intertwining_k2_grid(lam1, grid=int(N_or_grid))
        rel = np.abs(tab[:, 2] - tab[:, 3]) / np.abs(tab[:, 3])
        kids = [_bound_report(f"sup rel |L2Q2 - P2L2| at lambda={lam1}", rel.max(), rel_tol, len(tab),
                              strict=False)]
        # lambda -> 0: L_2(0,.) is the Dirac mass at the origin
        eps = 1e-7
        zs = []
        for y1, y2 in [(0.1, 0.5), (0.3, 1.0), (1.0, 2.0), (0.5, 4.0)]:
            left = kernels.Q_kernel(2, (0.0, 0.0), (y1, y2))
            right = kernels.P_kernel(2, (eps,), (y2,)) / y2
            zs.append(abs(left - right) / abs(left))
        kids.append(_bound_report("lambda->0: Q_2((0,0),.) vs P_2 L_2", max(zs), rel_tol, len(zs),
                                  notes=f"P_2 evaluated at lambda={eps:g}", strict=False))
        return composite(f"intertwining quadrature k=2 lambda={lam1}", kids)
    if mode != "mc":
        raise InvalidInputError("mode must be 'quadrature' or 'mc'")
    if not 1 <= k <= 4:
        raise InvalidInputError("mc mode supports k <= 4")
    N = int(N_or_grid)
    s_a, s_b, s_c, s_d, s_perm = _seeds(seed, 5)
    kids = []
    left = _L_then_Q_step(k, lam, N, s_a, sweeps)
    right = _P_step_then_L(k, lam, N, s_b, sweeps)
    st, p = energy_test(left, right, n_perm, _rng.NoiseStream(s_perm, 1))
    kids.append(_pvalue_report(f"one step from lambda={tuple(float(v) for v in lam)}: L_kQ_k vs P_kL_k", st, p, 2 * N))
    X = particle_samples(k, n, N, s_c, jobs)[:, n]
    A = matrix_samples(k, n, N, s_d, jobs)[:, n]
    Y = gtpattern.sample_L(k, matrixmodel.positive_eigenvalues(A), sweeps,
                           _rng.NoiseStream(s_d, _rng.stream_id(_rng.GT)))
    st, p = energy_test(X, Y, n_perm, _rng.NoiseStream(s_perm, 2))
    kids.append(_pvalue_report(f"Q_k^{n}(0,.) vs P_k^{n} L_k(0,.)", st, p, 2 * N))
    return composite(f"intertwining mc k={k}", kids)


# ---------------------------------------------------------------- GT volumes

def check_volume(N, seed, cases=((2, (1.0,)), (3, (2.0, 1.0)), (4, (2.0, 1.0)))) -> TestReport:
    kids = []
    for i, (k, lam) in enumerate(cases):
        est, se = gtpattern.volume_mc(k, np.array(lam), N, _rng.NoiseStream(seed, _rng.stream_id(_rng.GT, i)))
        exact = kernels.d_func(k, lam)
        kids.append(_bound_report(f"vol GT_{k}{lam} vs d_{k}={exact:g}", abs(est - exact), 3 * se, N,
                                  notes=f"estimate={est:.6g} se={se:.3g}", strict=False))
    return composite("GT volumes", kids)


def check_gt_sampler(N, seed, *, sweeps=200, cases=((2, (1.0,)), (3, (2.0, 1.0)), (4, (2.0, 1.0)))) -> TestReport:
    """Gibbs marginals against exact rejection samples, coordinate by coordinate."""
    kids = []
    for i, (k, lam) in enumerate(cases):
        lam = np.array(lam)
        g = gtpattern.gibbs_batch(k, np.broadcast_to(lam, (N, len(lam))), sweeps,
                                  _rng.NoiseStream(seed, _rng.stream_id(_rng.GT, i, 1)))
        r = gtpattern.rejection_batch(k, lam, N, _rng.NoiseStream(seed, _rng.stream_id(_rng.GT, i, 2)))
        for row in range(k - 1):
            for j in range(g[row].shape[1]):
                st, p = ks2(g[row][:, j], r[row][:, j])
                kids.append(_pvalue_report(f"GT_{k}{tuple(float(v) for v in lam)} row {row + 2} entry {j + 1}", st, p, 2 * N))
    return composite("GT Gibbs vs rejection", kids)


# ---------------------------------------------------------------- CDF

def check_cdf(k, n, N, seed, *, jobs=1) -> TestReport:
    """Empirical CDF of ``X_k(n)`` against the oracle, the matrix model and the determinant formula."""
    kernels._cdf_exponents(k, n)  # validity range
    s_part, s_mat = _seeds(seed, 2)
    X = particle_samples(k, n, N, s_part, jobs)[:, n, k - 1]
    lam1 = matrixmodel.positive_eigenvalues(matrix_samples(k, n, N, s_mat, jobs)[:, n])[:, 0]
    thr = 3 / math.sqrt(N)
    kids = []
    if k == 1 and n <= 2:
        kids.append(_bound_report(f"MC X_1({n}) vs exact CDF", ecdf_sup_error(
            X, lambda t: kernels.cdf_first_particle_exact(n, t)), thr, N))
    st, p = ks2(X, lam1)
    kids.append(_pvalue_report(f"MC X_{k}({n}) vs MC Lambda_1({n})", st, p, 2 * N))
    grid = np.linspace(0.0, max(12.0, float(np.quantile(X, 0.999))), 121)
    formula = np.array([kernels.cdf_last_particle(k, n, t, normalized=True) for t in grid])
    raw = np.array([kernels.cdf_last_particle(k, n, t, normalized=False) for t in grid])
    emp = np.searchsorted(np.sort(X), grid, side="right") / N
    gap = np.abs(formula - emp)
    i = int(np.argmax(gap))
    note = f"max gap at t={grid[i]:.3g}; raw limit at t=inf {kernels.cdf_last_particle(k, n, math.inf, False):.6g}"
    if k == 1 and n <= 2:
        ex = kernels.cdf_first_particle_exact(n, grid)
        j = int(np.argmax(np.abs(raw - ex)))
        note += f"; raw vs exact max gap {abs(raw[j] - ex[j]):.4g} at t={grid[j]:.3g}"
    kids.append(_bound_report(f"determinant formula (normalised) vs MC X_{k}({n})", gap.max(), thr, N,
                              notes=note, binding=False))
    return composite(f"cdf k={k} n={n}", kids)


# ---------------------------------------------------------------- identities

def det_fraction(rows) -> Fraction:
    """Exact determinant over the rationals (fraction-free elimination oracle)."""
    a = [[Fraction(v) for v in r] for r in rows]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            for j in range(c, n):
                a[r][j] -= f * a[c][j]
    return det


def cauchy_binet_sides(f, g, w):
    """Both sides of the Cauchy-Binet identity on a finite weighted set.

    ``f`` and ``g`` are ``(n, |E|)`` tables of the two function systems and
    ``w`` the point weights; the right side sums over all ``n``-tuples.
    """
    n, e = f.shape
    lhs = kernels.det_lu((f * w) @ g.T)
    rhs = 0.0
    for tup in itertools.product(range(e), repeat=n):
        idx = list(tup)
        rhs += kernels.det_lu(f[:, idx]) * kernels.det_lu(g[:, idx]) * np.prod(w[idx])
    return lhs, rhs / math.factorial(n)


def _strictly_interlaced(x, y):
    return bool(np.all(x > y) and np.all(y[:-1] > x[1:]))


def check_identities(seed) -> TestReport:
    st = _rng.NoiseStream(seed, _rng.stream_id(_rng.AUX))
    kids = []

    err = 0.0
    for n in (2, 3):
        for _ in range(5):
            f = st.normal((n, 5))
            g = st.normal((n, 5))
            w = st.uniform(5) + 0.1
            lhs, rhs = cauchy_binet_sides(f, g, w)
            err = max(err, abs(lhs - rhs))
    kids.append(_bound_report("Cauchy-Binet on 5-point measure", err, IDENTITY_TOL, 10, strict=False))

    bad = 0
    trials = 10_000
    for t in range(trials):
        n = 1 + t % 4
        if t % 2:
            v = -np.sort(-st.uniform(2 * n))
            x, y = v[0::2], v[1::2]
        else:
            x = -np.sort(-st.uniform(n))
            y = -np.sort(-st.uniform(n))
        if gtpattern.interlace_det(x, y) != float(_strictly_interlaced(x, y)):
            bad += 1
        if gtpattern.interlaces(x, y, strict=True) != _strictly_interlaced(x, y):
            bad += 1
    kids.append(_bound_report("det(1{x_i>y_j}) = 1{x > y}", bad, 0, trials, strict=False))

    xs = np.array([0.0, 0.1, 0.7, 1.3, 2.9, 7.3])
    xs_pos = xs[1:]
    worst = 0.0
    for i in range(1, 4):
        for j in range(1, 9):
            worst = max(worst, np.max(np.abs(kernels.a_coeff(2 * i, 2 * j, xs, 0.0))))
        worst = max(worst, np.max(np.abs(kernels.a_coeff(2 * i, 2 * i - 1, 0.0, xs) - 1.0)))
        for j in range(2 * i, 10):
            worst = max(worst, np.max(np.abs(kernels.a_coeff(2 * i, j, 0.0, xs_pos))))
    kids.append(_bound_report("a_ij boundary identities", worst, IDENTITY_TOL, strict=False,
                              notes="a_{2i,j}(0,x)=0 checked for x>0"))

    kids.append(_bound_report("a_ij integral relations (pointwise, kink-free paths)",
                              integral_relation_error(False), 1e-8, strict=False))
    kids.append(_bound_report("a_ij integral relations (with jump at x = x')",
                              integral_relation_error(True), 1e-8, strict=False))
    kids.append(_bound_report("phi_d derivative ladder", derivative_ladder_error(), 1e-6, strict=False))
    return composite("identities", kids)


def _jump(m):
    """``phi_d(m, 0+) - phi_d(m, 0-)``: nonzero only for odd positive orders."""
    return 0.5 * (-1.0) ** m - 0.5 if m >= 1 else 0.0


def integral_relation_error(distributional: bool,
                            points=((0.3, 1.1), (1.1, 0.3), (2.5, 0.7), (0.0, 1.7), (1.4, 0.0))):
    """Worst error of the two integral relations between neighbouring ``a_ij``.

    For odd ``j - i >= 1`` the antiderivative jumps at ``x = x'``.  The
    pointwise form (``distributional=False``) is checked only on integration
    paths that avoid that point; the distributional form adds the jump and is
    checked on every path.  The second relation integrates over the second
    argument and needs ``j >= i`` to converge.
    """
    worst = 0.0
    for i in range(1, 5):
        for j in range(1, 5):
            m = j - i
            for x, xp in points:
                target = kernels.a_coeff(i, j, x, xp)
                crosses = x < xp and _jump(m) != 0
                if distributional or not crosses:
                    f = lambda u: kernels.a_coeff(i - 1, j, u, xp)
                    v = _inner_quad(f, x, x + 60.0, (xp,), 1e-13)
                    if distributional and x < xp:
                        v += (-1.0) ** (i - 1 + j) * _jump(m)
                    worst = max(worst, abs(v - target))
                if j < i:
                    continue
                crosses = x > xp and _jump(m) != 0
                if distributional or not crosses:
                    g = lambda u: kernels.a_coeff(i, j + 1, x, u)
                    v = _inner_quad(g, xp, xp + x + 60.0, (x,), 1e-13)
                    if distributional and x > xp:
                        v += (-1.0) ** (i + j + 1) * _jump(m)
                    worst = max(worst, abs(-v - target))
    return worst


def derivative_ladder_error(h=1e-4):
    xs = np.concatenate([np.linspace(-4, -0.05, 30), np.linspace(0.05, 4, 30)])
    worst = 0.0
    for m in range(-4, 4):
        fd = (kernels.phi_d(m, xs + h) - kernels.phi_d(m, xs - h)) / (2 * h)
        worst = max(worst, float(np.max(np.abs(fd - kernels.phi_d(m + 1, xs)))))
    return worst


# ---------------------------------------------------------------- matrices & dynamics

def check_spectral_symmetry(n_mats, seed, ks=(1, 2, 3, 4, 5)) -> TestReport:
    """``+-`` pairing of the spectrum of ``iA`` and monotonicity of minor top eigenvalues."""
    kids = []
    per = n_mats // len(ks)
    for k, s in zip(ks, _seeds(seed, len(ks))):
        A = matrix_samples(k, 3, per, s)[:, 3]
        ev = np.linalg.eigvalsh(1j * A)
        norm = np.linalg.norm(A, ord=2, axis=(-2, -1))
        pair = np.max(np.abs(ev + ev[:, ::-1]) / norm[:, None])
        kids.append(_bound_report(f"k={k} max|l_i + l_(d+1-i)|/||A||", pair, 1e-9, per, strict=False))
        mins = matrixmodel.minor_top_eigenvalues(A)
        drops = int(np.sum(np.any(np.diff(mins, axis=1) < -1e-12 * norm[:, None], axis=1)))
        kids.append(_bound_report(f"k={k} minor vector nondecreasing (violations)", drops, 0, per, strict=False))
    return composite("spectral symmetry", kids)


def check_dynamics_equivalence(k, n, reps, seed, *, stepper=None) -> TestReport:
    """Bit-exact comparison of the two-phase and one-pass update rules under common noise."""
    stepper = stepper or dynamics.step_onepass
    st = _rng.NoiseStream(seed, _rng.stream_id(_rng.AUX, k))
    x = np.zeros((reps, k))
    y = np.zeros((reps, k))
    bad = np.zeros(reps, dtype=bool)
    for _ in range(n):
        xm = st.exponential((reps, k))
        xp = st.exponential((reps, k))
        x = dynamics.step(x, xm, xp, check=False)
        y = stepper(y, xm, xp, check=False)
        bad |= np.any(x != y, axis=1)
    mism = int(bad.sum())
    return _bound_report(f"step vs step_onepass k={k} n={n}", mism, 0, reps, strict=False,
                         notes="trajectories with any mismatch")
