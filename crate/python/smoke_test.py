#!/usr/bin/env python3
"""Smoke test for the `tailq` extension module.

Builds the cdylib if needed, loads it without any packaging step, and
checks a handful of closed-form values end to end. Run from anywhere:

    python3 python/smoke_test.py
"""

import math
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def load_module():
    candidates = [
        REPO / "target" / "release" / "libtailq_py.so",
        REPO / "target" / "debug" / "libtailq_py.so",
        REPO / "target" / "release" / "libtailq_py.dylib",
        REPO / "target" / "debug" / "libtailq_py.dylib",
    ]
    lib = next((p for p in candidates if p.exists()), None)
    if lib is None:
        print("extension not built yet; running cargo build -p tailq-py --release")
        subprocess.run(
            ["cargo", "build", "-p", "tailq-py", "--release"], cwd=REPO, check=True
        )
        lib = candidates[0]
    tmp = Path(tempfile.mkdtemp(prefix="tailq_py_"))
    shutil.copy2(lib, tmp / "tailq.so")
    sys.path.insert(0, str(tmp))
    import tailq

    return tailq


def approx(a, b, tol=1e-9):
    assert abs(a - b) <= tol, f"{a} != {b} (tol {tol})"


def main():
    tq = load_module()
    checks = 0

    # special-function kernels
    approx(tq.harmonic(4), 25.0 / 12.0, 1e-14)
    approx(tq.generalized_harmonic(3, 2), 49.0 / 36.0, 1e-14)
    approx(tq.reg_incomplete_beta(0.25, 1.0, 2.0), 0.4375, 1e-12)
    approx(tq.std_normal_quantile(0.975), 1.959963984540054, 1e-9)
    approx(tq.std_normal_cdf(0.0), 0.5, 1e-15)
    approx(tq.kolmogorov_sf(1.0), 0.26999967168, 1e-6)
    checks += 6

    # tail models: closed-form quantiles and reproducible sampling
    par = tq.TailModel.pareto(1.0, 1.0)
    approx(par.quantile(0.5), 2.0, 1e-12)
    assert par.tail_index() == 1.0
    draws = par.sample(1000, 42, stream_id=7)
    assert draws == par.sample(1000, 42, stream_id=7)
    assert min(draws) > 1.0
    fre = tq.TailModel.frechet(1.0)
    approx(fre.quantile(math.exp(-1.0)), 1.0, 1e-12)
    checks += 4

    # estimators on the worked five-point sample
    sample = tq.OrderedSample([1.0, 2.0, 4.0, 8.0, 16.0])
    assert len(sample) == 5
    approx(sample.order_stat(1), 1.0)
    est = tq.q_estimator(sample, 2, 2)
    approx(est.q, math.log(4.0) / (5.0 / 6.0), 1e-12)
    approx(est.q_star, 2.0, 1e-12)
    approx(est.alpha_hat, 0.5, 1e-12)
    ci = tq.confidence_interval(sample, 2, 2, 0.95)
    assert ci.lower < est.alpha_hat < ci.upper
    assert ci.contains(est.alpha_hat)
    assert tq.design_indices(1499, 2) == (500, 500, 1000)
    checks += 7

    # exact law: unbiasedness and the k=2, s=2 variance 13/25
    law = tq.ExactLaw.q(2, 2, 1.0)
    mean, var = law.moments()
    approx(mean, 1.0, 1e-14)
    approx(var, 0.52, 1e-13)
    approx(law.chebyshev_bound(0.5), 2.08, 1e-12)
    law_star = tq.ExactLaw.q_star(1, 2, 1.0)
    approx(law_star.pdf(1e-12), math.log(2.0), 1e-9)
    assert law_star.cdf(0.0) == 0.0
    checks += 5

    # baselines on [1, e, e^2]
    e = math.e
    base = tq.OrderedSample([1.0, e, e * e])
    approx(tq.hill(base, 2).gamma_hat, 1.5, 1e-12)
    approx(tq.t_hill(base, 2).gamma_hat, 2.9744, 1e-4)
    approx(tq.moment_dedh(base, 2).gamma_hat, -2.5, 1e-10)
    assert tq.moment_dedh(base, 2).alpha_hat is None
    approx(tq.pickands(tq.OrderedSample([1.0, 2.0, 3.0, 7.0]), 1).gamma_hat, 1.0, 1e-12)
    checks += 5

    # asymptotics: Pareto limit variance and the delta-method route agree
    av = tq.delta_method_variance(par, 2)
    lim = tq.pareto_limit_variances(2, 1.0)
    approx(av.v, 1.5, 1e-12)
    approx(lim[0], 1.5, 1e-15)
    (d11, d12), (_, d22) = tq.quantile_covariance(par, 2)
    approx(d11, 1.125, 1e-12)
    approx(d12 / math.sqrt(d11 * d22), 0.5, 1e-12)
    approx(tq.log_quantile_ratio(par, 2), math.log(2.0), 1e-12)
    checks += 5

    # errors surface as ValueError
    for thunk in (
        lambda: tq.OrderedSample([1.0, -2.0]),
        lambda: tq.q_estimator(sample, 1, 2),
        lambda: tq.std_normal_quantile(0.0),
        lambda: tq.TailModel.pareto(-1.0, 1.0),
    ):
        try:
            thunk()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")
    checks += 4

    # a small seeded experiment: KS of simulated Q* against its law
    law22 = tq.ExactLaw.q_star(2, 2, 1.0)
    ratios = tq.log_ratio_samples(par, 2, 2, 2000, 20170823)
    q_star = [r / math.log(2.0) for r in ratios]
    d, p = tq.ks_gof(q_star, law22.cdf)
    assert p >= 0.01, f"KS p={p}"
    cov = tq.coverage(1.0, 2, 200, 500, 0.95, 20170823)
    assert 0.9 <= cov <= 1.0, f"coverage {cov}"
    checks += 2

    print(f"tailq python smoke test: {checks} check groups passed")


if __name__ == "__main__":
    main()
