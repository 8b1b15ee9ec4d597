"""Pre-registered verification runs, one entry per CLI target.

Sample sizes are the acceptance sizes; ``quick`` divides Monte Carlo sizes
by ten for smoke runs (such runs are not acceptance evidence).
"""

from __future__ import annotations

import time

from . import verify as V

TARGETS = ("theorem1", "theorem2", "lemmas", "kernels", "intertwining", "volume",
           "spectral", "cdf", "identities", "equivalence")


def _n(n, quick):
    return max(n // 10, 1000) if quick else n


def run_target(target: str, seed: int, jobs: int = 1, quick: bool = False) -> list:
    q = quick
    if target == "theorem1":
        t0 = time.perf_counter()
        main = V.check_theorem1(3, 4, _n(200_000, q), seed, ks_stat_max=0.01, jobs=jobs)
        dt = time.perf_counter() - t0
        main.children.append(V._bound_report("runtime seconds", dt, 60.0, notes="wall clock of the k=3 check"))
        main = V.composite(main.name, main.children)
        return [main,
                V.check_theorem1(1, 1, _n(100_000, q), seed + 1, jobs=jobs),
                V.check_theorem1(1, 2, _n(100_000, q), seed + 2, jobs=jobs)]
    if target == "theorem2":
        return [V.check_theorem2(3, 3, _n(50_000, q), seed, jobs=jobs),
                V.check_theorem2(2, 1, _n(50_000, q), seed + 1, jobs=jobs)]
    if target == "lemmas":
        return [V.check_lemma_kernels(_n(100_000, q), seed)]
    if target == "kernels":
        return [V.check_Q2(_n(100_000, q), seed, jobs=jobs), V.check_normalization()]
    if target == "intertwining":
        return [V.check_intertwining(2, (1.0,), "quadrature", 20, seed),
                V.check_intertwining(3, (2.0, 1.0), "mc", _n(50_000, q), seed, n=2, jobs=jobs)]
    if target == "volume":
        return [V.check_volume(_n(1_000_000, q), seed),
                V.check_gt_sampler(_n(10_000, q), seed)]
    if target == "spectral":
        return [V.check_spectral_symmetry(_n(10_000, q), seed)]
    if target == "cdf":
        return [V.check_cdf(1, 1, _n(100_000, q), seed, jobs=jobs),
                V.check_cdf(1, 2, _n(100_000, q), seed + 1, jobs=jobs),
                V.check_cdf(3, 2, _n(100_000, q), seed + 2, jobs=jobs)]
    if target == "identities":
        return [V.check_identities(seed)]
    if target == "equivalence":
        kids = [V.check_dynamics_equivalence(k, 50, _n(10_000, q), seed) for k in range(1, 7)]
        return [V.composite("dynamics equivalence", kids)]
    if target == "all":
        out = []
        for t in TARGETS:
            out.extend(run_target(t, seed, jobs, quick))
        return out
    raise ValueError(f"unknown target {target!r}")
