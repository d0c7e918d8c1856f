"""Acceptance criteria 1-10.

Each test prints one ``ACCEPT <n> PASS|FAIL`` line (capture is bypassed, so
the line also shows under plain ``pytest -v``) and then asserts.  Run just
this file with ``pytest tests/test_acceptance.py -v``.
"""
import time

import numpy as np
import pytest

import oracles
from sarnaklab import (
    Alphabet,
    SymbolSequence,
    autocovariance,
    block_distribution,
    chowla_correlation,
    conditional_entropy,
    criterion_scan,
    difference_indicator,
    gen_iid,
    gen_liouville,
    gen_rotation_coding,
    kl_divergence,
    mean_conditional_tv,
    pinsker_bounds,
    shannon_entropy,
    skew_process,
)
from sarnaklab.infometrics import FiniteJoint, mean_conditional_tv_by_columns

SQRT2 = 1.41421356237309504880
LOWER_DIAGONAL = 0.980258143468547191713901723635


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\nACCEPT {number:>2} {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail
    return emit


def _sweep(seed, count, max_side, positive=False):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        shape = tuple(int(s) for s in rng.integers(1, max_side + 1, size=2))
        yield oracles.random_joint(rng, shape, positive=positive)


def test_1_tv_identity(report):
    t0 = time.perf_counter()
    worst = max(abs(mean_conditional_tv(p) - mean_conditional_tv_by_columns(p))
                for p in _sweep(1, 1000, 6))
    dt = time.perf_counter() - t0
    report(1, worst <= 1e-12 and dt < 1.0, f"TV identity: max |diff| = {worst:.2e} (tol 1e-12), {dt:.2f}s (< 1s)")


def test_2_pinsker_sandwich(report):
    t0 = time.perf_counter()
    slack = min(min(b.tv_mid - b.lower, b.upper - b.tv_mid)
                for b in map(pinsker_bounds, _sweep(2, 1000, 4, positive=True)))
    dt = time.perf_counter() - t0
    d = pinsker_bounds(np.array([[0.5, 0.0], [0.0, 0.5]]))
    diag_err = max(abs(d.lower - LOWER_DIAGONAL), abs(d.tv_mid - 1.0), abs(d.upper - SQRT2))
    ok = slack >= -1e-9 and diag_err <= 1e-9 and dt < 1.0
    report(2, ok, f"Pinsker sandwich: min slack = {slack:.2e} (>= -1e-9), diagonal "
                  f"({d.lower:.6f}, {d.tv_mid:.6f}, {d.upper:.6f}) err {diag_err:.1e}, {dt:.2f}s (< 1s)")


def test_3_info_gap_identity(report):
    worst = 0.0
    for p in _sweep(2, 1000, 4, positive=True):
        j = FiniteJoint(p)
        gap = shannon_entropy(j.px) - conditional_entropy(j)
        worst = max(worst, abs(gap - kl_divergence(p.ravel(), j.product_of_marginals().ravel())))
    report(3, worst <= 1e-10, f"H(X) - H(X|Y) = D(p_XY || p_X p_Y): max |diff| = {worst:.2e} (tol 1e-10)")


def test_4_tv_monotonicity(report):
    rng = np.random.default_rng(4)
    worst = np.inf
    for _ in range(1000):
        a, b, c = (int(s) for s in rng.integers(1, 5, size=3))
        p = oracles.random_joint(rng, (a, b, c))
        worst = min(worst, mean_conditional_tv(p.reshape(a, b * c)) - mean_conditional_tv(p.sum(axis=2)))
    report(4, worst >= -1e-12, f"TV(X; Y,Z) >= TV(X; Y): min difference = {worst:.2e} (tol -1e-12)")


def test_5_bernoulli_factor(report):
    t0 = time.perf_counter()
    u = gen_iid(Alphabet.pm1(), [0.5, 0.5], 10**6, seed=5)
    d = difference_indicator(u)
    worst = 0.0
    for m in range(1, 7):
        dist = block_distribution(d, m)
        full = np.zeros(2**m)
        full[dist.codes] = dist.probs
        worst = max(worst, float(np.abs(full - 2.0**-m).max()))
    dt = time.perf_counter() - t0
    report(5, worst <= 0.003 and dt < 5.0,
           f"difference indicator blocks m<=6: max |freq - 2^-m| = {worst:.5f} (tol 0.003), {dt:.2f}s (< 5s)")


def test_6_skew_recovery(report):
    n = 10**5
    y = gen_rotation_coding((5**0.5 - 1) / 2, 0.0, n)
    x = gen_iid(Alphabet.pm1(), [0.5, 0.5], n + 1, seed=6)
    r = skew_process(x, y)
    c = difference_indicator(r.x_prime).codes.astype(np.int64)
    yc = y.codes.astype(np.int64)
    k1 = r.clock[1:n]
    flip = (x.codes[k1 - 1] != x.codes[k1]).astype(np.int64)
    # identity exactly as stated: y shifted by one against C
    as_stated = np.array_equal(c[: n - 2], yc[1 : n - 1] * flip[: n - 2])
    mismatches = int(np.count_nonzero(c[: n - 2] != yc[1 : n - 1] * flip[: n - 2]))
    aligned = np.array_equal(c, yc[: n - 1] * flip)
    # distributional part: C read at the ticks of y is an i.i.d. fair bit stream
    ticks = c[yc[: n - 1] == 1]
    b = SymbolSequence(Alphabet.binary(), ticks.astype(np.uint8))
    worst = 0.0
    for ell in range(1, 5):
        dist = block_distribution(b, ell)
        full = np.zeros(2**ell)
        full[dist.codes] = dist.probs
        worst = max(worst, float(np.abs(full - 2.0**-ell).max()))
    ok = as_stated and worst <= 0.01
    report(6, ok, f"recovery identity with y[j+1]: {'holds' if as_stated else f'fails at {mismatches} of {n - 2} positions'}"
                  f" (with y[j]: {'holds' if aligned else 'fails'}); tick-conditioned C blocks l<=4: "
                  f"max |freq - 2^-l| = {worst:.4f} (tol 0.01)")


def test_7_criterion_separation(report, iid_1e6, alternating_1e6):
    t0 = time.perf_counter()
    iid = criterion_scan(iid_1e6, [1, 2, 4], 6, 0.05).sup_totals
    alt = criterion_scan(alternating_1e6, [1, 2, 4], 6, 0.05).sup_totals
    dt = time.perf_counter() - t0
    worst_iid = max(iid.values())
    worst_alt = max(abs(v - 0.5) for v in alt.values())
    ok = worst_iid < 0.02 and worst_alt <= 0.02 and dt < 10.0
    report(7, ok, f"iid max eps-total = {worst_iid:.5f} (< 0.02), alternating max |total - 0.5| = "
                  f"{worst_alt:.2e} (<= 0.02), {dt:.2f}s (< 10s)")


def test_8_empirical_pinsker(report, iid_1e6):
    rows = criterion_scan(iid_1e6, [1, 2, 4], 6, 0.05).rows
    worst = np.inf
    for r in rows:
        corr = 2 * abs(r.p_plus - 0.5)
        two_eps = 2 * r.epsilon_total
        worst = min(worst, two_eps - (r.pinsker_lower - corr), (r.pinsker_upper + corr) - two_eps)
    report(8, worst >= -1e-6,
           f"lower - 2|p+ - 1/2| <= 2 eps-total <= upper + 2|p+ - 1/2| over {len(rows)} (g,m): min slack = {worst:.2e} (>= -1e-6)")


def test_9_sieve(report):
    n = 10**4
    lam = gen_liouville(n).labels
    oracle = np.array([oracles.liouville(k) for k in range(1, n + 1)])
    exact = np.array_equal(lam, oracle)
    bad = 0
    for a in range(1, n + 1):
        bs = np.arange(1, n // a + 1)
        bad += int(np.count_nonzero(lam[a * bs - 1] != lam[a - 1] * lam[bs - 1]))
    report(9, exact and bad == 0, f"lambda(k), k <= 1e4 vs trial division: {'exact' if exact else 'MISMATCH'}; "
                                  f"multiplicativity violations for ab <= 1e4: {bad}")


def test_10_chowla_autocov(report, liouville_1e6, iid_1e6):
    same = all(
        chowla_correlation(u, [r], w) == autocovariance(u, r, w)
        for u in (liouville_1e6, iid_1e6[:12345], liouville_1e6[1000:2000])
        for r in (1, 2, 7)
        for w in ("cesaro", "logarithmic")
    )
    t0 = time.perf_counter()
    values = [chowla_correlation(gen_liouville(10**7, threads=t), [1]) for t in (1, 2, 4)]
    dt = (time.perf_counter() - t0) / len(values)
    spread = max(values) - min(values)
    ok = same and spread <= 1e-12 and dt < 20.0
    report(10, ok, f"chowla == autocov bitwise: {same}; Liouville n=1e7 lag-1 = {values[0]:.12g}, "
                   f"spread over threads 1/2/4 = {spread:.1e} (<= 1e-12), {dt:.2f}s per run (< 20s)")
