"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines as they
complete.  Every tolerance is pinned here; nothing is deferred to later
calibration.
"""

import itertools
import math
import time

import numpy as np

from gapkit import (
    BackendConfig,
    eig_reference,
    flatten_check,
    gen_lowerbound_instance,
    gen_planted_gap,
    max_entangled_reduced_density,
    osp_sample,
    purified_trace,
    qcount,
    qeig,
    qenc,
    qgap_const,
    qshift,
    qsmin,
    sign_poly,
    verify_lowerbound_spectrum,
)
from gapkit.hermitian import hermitian_from_spectrum
from gapkit.osp import default_osp_source
from gapkit.rng import substream
from gapkit.validate import bench_rows, predicted_queries_uh


def report(num, name, ok, detail=""):
    print(f"ACCEPTANCE {num:2d} [{name}]: {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, f"criterion {num} ({name}) failed: {detail}"


def fixed_targets(n, seed):
    e1 = np.zeros(n)
    e1[0] = 1.0
    uniform = np.full(n, 1 / np.sqrt(n))
    g = substream(seed, 0)
    rnd = g.standard_normal(n) + 1j * g.standard_normal(n)
    rnd /= np.linalg.norm(rnd)
    lap = 2 * np.eye(n) - np.eye(n, k=1) - np.eye(n, k=-1)
    lap[0, 0] = lap[-1, -1] = 1.0
    vec = np.linalg.eigh(lap)[1][:, n // 2]
    return [e1, uniform, rnd, vec]


def test_criterion_01_osp_overlap():
    t0 = time.time()
    worst = 1.0
    for n in (32, 64):
        for target in fixed_targets(n, 100 + n):
            hits = sum(
                abs(np.vdot(osp_sample(n, seed=i).state, target)) > 1 / (2 * n)
                for i in range(2000)
            )
            worst = min(worst, hits / 2000)
    exact_hits = 0
    for signs in itertools.product((-1.0, 1.0), repeat=4):
        z = np.array(signs) / 2.0
        from gapkit import fwht

        exact_hits += abs(fwht(z)[0]) > 1 / 8
    elapsed = time.time() - t0
    ok = worst >= 0.57 and exact_hits == 10 and elapsed < 30
    report(1, "osp-overlap", ok,
           f"worst rate {worst:.4f}, exhaustive {exact_hits}/16, {elapsed:.1f}s")


def test_criterion_02_flattening():
    n, delta, trials = 64, 0.2, 2000
    g = substream(200, 0)
    y = g.standard_normal(n) + 1j * g.standard_normal(n)
    y /= np.linalg.norm(y)
    threshold = math.sqrt(2 * math.log(2 * n / delta) / n)
    exceed = sum(flatten_check(y, substream(201, i))[1] >= threshold for i in range(trials))
    rate = exceed / trials
    report(2, "flattening", rate <= 0.22, f"exceed rate {rate:.4f} (<= 0.22)")


def test_criterion_03_sign_polynomial():
    t0 = time.time()
    ok = True
    details = []
    for dp, eps in ((0.2, 1e-3), (0.1, 1e-4)):
        p = sign_poly(dp, eps)
        xs = np.linspace(-1, 1, 10 * p.degree + 1)
        vals = p.evaluate(xs)
        bound_ok = np.max(np.abs(vals)) <= 1 + 1e-10
        ok &= p.sup_err <= eps and bound_ok
        details.append(f"(gap {dp}, eps {eps}): deg {p.degree}, sup {p.sup_err:.2e}")
    degs = [sign_poly(dp, 1e-3).degree for dp in (0.2, 0.1, 0.05)]
    for a, b in zip(degs, degs[1:]):
        ok &= 1.7 <= b / a <= 2.3
    elapsed = time.time() - t0
    ok &= elapsed < 10
    report(3, "sign-polynomial", ok, "; ".join(details) + f"; ratios {degs}; {elapsed:.1f}s")


def test_criterion_04_purification_identity():
    worst = max(
        float(np.max(np.abs(max_entangled_reduced_density(n) - np.eye(2**n) / 2**n)))
        for n in (1, 2, 3)
    )
    report(4, "purification-identity", worst <= 1e-12, f"max deviation {worst:.2e}")


def test_criterion_05_trace_estimator():
    eps, delta, trials = 0.25, 0.1, 500
    worst = 1.0
    for f in range(20):
        g = substream(500, f)
        n = int(g.choice([4, 8, 16]))
        lam = g.uniform(-0.5, 0.5, n)
        h = hermitian_from_spectrum(lam, g)
        if f % 2 == 0:
            u = qenc(h, "exact")
        else:
            u = qenc(h, "frobenius", eps / (16 * n), g)
        true_trace = float(np.trace(h.mat).real)
        hits = sum(
            abs(purified_trace(u, eps, delta, substream(501, f, i)).value - true_trace) <= eps
            for i in range(trials)
        )
        worst = min(worst, hits / trials)
    report(5, "trace-estimator", worst >= 1 - delta - 0.02,
           f"worst fixture rate {worst:.4f} (>= {1 - delta - 0.02})")


def _promised_fixture(g):
    """(qube factory inputs, shift, promise, oracle count) with a certified
    promise on the smallest singular value at the shift."""
    n = int(g.choice([4, 8, 16]))
    h, _ = gen_planted_gap(n, int(g.integers(1, n)), 0.2, int(g.integers(0, 2**31)))
    dec = eig_reference(h)
    idx = int(g.integers(0, n - 1))
    shift = float((dec.eigenvalues[idx] + dec.eigenvalues[idx + 1]) / 2)
    promise = dec.gap(idx + 1) / 2 * 0.9
    return h, n, shift, promise, dec.count_below(shift)


def test_criterion_06_qcount_exactness():
    det_ok = 0
    det_total = 0
    for i in range(500):
        g = substream(600, i)
        h, n, shift, promise, truth = _promised_fixture(g)
        if promise < 1e-3:
            continue
        det_total += 1
        u = qenc(h, "frobenius", 0.0)
        det_ok += qcount(qshift(u, shift), promise, 0.1, idealized=True).z == truth

    delta = 0.1
    samp_ok = 0
    samp_total = 0
    for i in range(300):
        g = substream(601, i)
        h, n, shift, promise, truth = _promised_fixture(g)
        if promise < 1e-3:
            continue
        samp_total += 1
        u = qenc(h, "exact")
        samp_ok += qcount(qshift(u, shift), promise, delta, g, certified=True).z == truth
    det_rate = det_ok / det_total
    samp_rate = samp_ok / samp_total
    ok = det_rate == 1.0 and samp_rate >= 1 - delta - 0.02
    report(6, "qcount-exactness", ok,
           f"deterministic {det_ok}/{det_total}, sampling rate {samp_rate:.4f}")


def test_criterion_07_qsmin():
    eps_sigma, delta_sigma, trials = 0.02, 0.1, 400
    g = substream(700, 0)
    sigma_min = 0.25
    lam = np.concatenate(([sigma_min], g.uniform(0.31, 0.5, 15) * g.choice([-1, 1], 15)))
    h = hermitian_from_spectrum(lam, g)
    u = qenc(h, "exact")
    osp = default_osp_source(16)
    assert osp.delta_osp == 2 / 5
    hits = sum(
        abs(qsmin(u, eps_sigma, delta_sigma, osp, substream(701, i)).value - sigma_min**2)
        <= eps_sigma
        for i in range(trials)
    )
    rate = hits / trials
    report(7, "qsmin", rate >= 1 - delta_sigma - 0.02,
           f"rate {rate:.4f} (>= {1 - delta_sigma - 0.02})")


def test_criterion_08_qgapconst():
    t0 = time.time()
    delta = 0.2
    cfg = BackendConfig(sampling=True, encoding="frobenius")
    gaps = [0.1, 0.2, 0.3]
    good = 0
    total = 0
    iteration_ceiling_ok = True
    for i in range(200):
        gap = gaps[i % 3]
        g = substream(800, i)
        k = int(g.integers(1, 16))
        h, truth = gen_planted_gap(16, k, gap, int(g.integers(0, 2**31)))
        total += 1
        res = qgap_const(h, k, delta, config=cfg, rng=g)
        bounds_ok = (
            truth.gap / 2 <= res.gap_hat <= 4 * truth.gap
            and abs(res.mu_hat - truth.midpoint) <= (7 / 16) * truth.gap
        )
        if bounds_ok:
            good += 1
            iteration_ceiling_ok &= (res.iterations - 1) <= math.ceil(
                math.log2(1 / truth.gap)
            ) + 2
    rate = good / total
    elapsed = time.time() - t0
    ok = rate >= 1 - delta - 0.03 and iteration_ceiling_ok and elapsed < 300
    report(8, "qgapconst", ok,
           f"rate {rate:.4f} (>= {1 - delta - 0.03}), iter ceiling {iteration_ceiling_ok}, "
           f"{elapsed:.0f}s (< 300)")


def test_criterion_09_qeig():
    delta = 0.1
    cfg = BackendConfig(sampling=True, encoding="exact")
    rates = {}
    for eps in (0.05, 0.1):
        good = 0
        for i in range(100):
            g = substream(900 + int(eps * 100), i)
            h, truth = gen_planted_gap(32, 5, 0.15, int(g.integers(0, 2**31)))
            dec = eig_reference(h)
            lk, lk1 = dec.eigenvalues[4], dec.eigenvalues[5]
            res = qeig(h, 5, delta, eps, config=cfg, rng=g)
            slack = eps * truth.gap / 2
            good += (
                lk - slack <= res.lambda_k <= lk
                and lk1 <= res.lambda_k1 <= lk1 + slack
                and abs(res.mu - truth.midpoint) <= slack
                and (1 - eps) * truth.gap <= res.gap <= (1 + eps) * truth.gap
            )
        rates[eps] = good / 100

    det_cfg = BackendConfig(sampling=False, encoding="frobenius")
    det_good = 0
    for i in range(500):
        g = substream(910, i)
        n = int(g.choice([8, 16]))
        k = int(g.integers(1, n))
        eps = 0.1
        h, truth = gen_planted_gap(n, k, float(g.uniform(0.1, 0.3)), int(g.integers(0, 2**31)))
        dec = eig_reference(h)
        lk, lk1 = dec.eigenvalues[k - 1], dec.eigenvalues[k]
        res = qeig(h, k, delta, eps, config=det_cfg, rng=g)
        slack = eps * truth.gap / 2
        coarse_ok = (
            truth.gap / 2 <= res.coarse.gap_hat <= 4 * truth.gap
            and abs(res.coarse.mu_hat - truth.midpoint) <= (7 / 16) * truth.gap
        )
        det_good += (
            coarse_ok
            and lk - slack <= res.lambda_k <= lk
            and lk1 <= res.lambda_k1 <= lk1 + slack
            and abs(res.mu - truth.midpoint) <= slack
            and (1 - eps) * truth.gap <= res.gap <= (1 + eps) * truth.gap
        )
    ok = all(r >= 1 - delta - 0.03 for r in rates.values()) and det_good == 500
    report(9, "qeig", ok,
           f"sampling rates {rates} (>= {1 - delta - 0.03}), deterministic {det_good}/500")


def test_criterion_10_cost_ledger_scaling():
    gap, eps, delta = 0.2, 0.1, 0.1
    rows = bench_rows([8, 16, 32], gap, eps, delta, seed=1000, repeats=3)
    totals = {row["n"]: row["queries_uh"] for row in rows}
    model = {n: predicted_queries_uh(n, math.sqrt(n / 12), gap, eps, delta) for n in totals}
    c = totals[8] / model[8]
    ratios = {n: totals[n] / (c * model[n]) for n in (16, 32)}
    ok = all(0.5 <= r <= 2.0 for r in ratios.values())
    report(10, "cost-ledger-scaling", ok, f"fit ratios vs N^2 polylog model: {ratios}")


def test_criterion_11_lowerbound_reduction():
    all_ok = True
    for n in (2, 3, 4, 5):
        a = math.ceil(n * n / 2)
        for i in range(50):
            g = substream(1100, n, i)
            bits = g.integers(0, 2, n * n)
            adj = gen_lowerbound_instance(bits, a)
            all_ok &= verify_lowerbound_spectrum(adj, a, int(bits.sum()))
    report(11, "lowerbound-reduction", all_ok, "50 instances per N in {2,3,4,5}")
