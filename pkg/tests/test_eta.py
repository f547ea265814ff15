import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from srrw import (
    DivergingTailError,
    EtaKernel,
    WeightFunction,
    WindowTooSmallError,
    eta_kernel_row,
    sample_eta_chain,
    stationary_distribution,
)
from srrw.eta import _row_from_p, marginal_law_table, power_step


def test_row_state0_exp(w_exp):
    row = eta_kernel_row(w_exp, 0)
    assert row.prob_at(-1) == 0.5
    assert row.prob_at(0) == pytest.approx(0.4404, abs=5e-5)
    assert row.prob_at(1) == pytest.approx(0.0585, abs=5e-5)


@settings(max_examples=40, deadline=None)
@given(state=st.integers(-8, 8), rate=st.sampled_from([0.5, 1.0, 2.0]))
def test_row_sums_and_support(state, rate):
    w = WeightFunction("exponential", (rate,))
    row = eta_kernel_row(w, state, eps_tail=1e-12)
    assert row.lo == state - 1
    assert row.mass() == pytest.approx(1.0, abs=1e-11)
    assert (row.probs >= 0).all()


def test_row_first_mass_is_step_probability(w_exp, w_ramp):
    for w in (w_exp, w_ramp):
        for state in (-4, 0, 3):
            row = eta_kernel_row(w, state)
            assert row.probs[0] == pytest.approx(w.p_right(-state), rel=1e-14)


def test_diverging_tail_detected():
    with pytest.raises(DivergingTailError):
        _row_from_p(lambda d: 0.0 if d < 0 else 0.5, 0, 1e-12, max_terms=500)


def test_stationary_mean_and_symmetry(stationary_exp):
    res = stationary_exp
    assert res.mean == pytest.approx(-0.5, abs=1e-6)
    assert res.r_law.symmetry_defect() < 1e-8
    assert res.r_law.mean() == pytest.approx(0.0, abs=1e-6)
    assert res.residual < 1e-12
    assert res.sigma2 > 0


def test_stationary_mean_ramp(w_ramp):
    res = stationary_distribution(EtaKernel(w_ramp))
    assert res.mean == pytest.approx(-0.5, abs=1e-6)
    assert res.r_law.symmetry_defect() < 1e-8


def test_stationary_positive_mass_bulk(stationary_exp):
    # positivity holds on the whole window mathematically; float underflow
    # caps how far out it is representable
    nu = stationary_exp.nu
    for eta in range(-20, 21):
        assert nu.prob_at(eta) > 0.0


def test_stationary_tail_decay(stationary_exp):
    nu = stationary_exp.nu
    for eta in range(3, 12):
        assert nu.prob_at(eta + 1) < nu.prob_at(eta)
        assert nu.prob_at(-eta - 2) < nu.prob_at(-eta - 1)


def test_stationary_fixed_point(kernel_exp, stationary_exp):
    lo, hi = stationary_exp.window
    P, _ = kernel_exp.window_matrix(lo, hi)
    v = stationary_exp.nu.probs
    moved = power_step(v, P)
    assert np.abs(moved - v).sum() < 1e-12


def test_stationary_increment_drift_zero(kernel_exp, stationary_exp):
    # E_nu[eta' - eta] = 0 at stationarity
    lo, hi = stationary_exp.window
    P, _ = kernel_exp.window_matrix(lo, hi)
    states = np.arange(lo, hi + 1, dtype=float)
    drift = float(stationary_exp.nu.probs @ (P @ states - states))
    assert abs(drift) < 1e-9


def test_window_too_small(kernel_exp):
    with pytest.raises(WindowTooSmallError):
        stationary_distribution(kernel_exp, window=(-3, 3), leak_target=1e-12)


def test_chain_starts_at_zero(kernel_exp):
    seq = sample_eta_chain(kernel_exp, 10, seed=1)
    assert seq.values[0] == 0
    again = sample_eta_chain(kernel_exp, 10, seed=1)
    assert np.array_equal(seq.values, again.values)


def test_chain_one_step_frequencies(kernel_exp):
    # sampler vs its own kernel rows: chi-square per visited state at 1e6 steps
    from collections import Counter

    from scipy.stats import chisquare

    seq = sample_eta_chain(kernel_exp, 1_000_000, seed=9)
    vals = seq.values
    counts = {}
    for a, b in zip(vals[:-1], vals[1:]):
        counts.setdefault(int(a), Counter())[int(b)] += 1
    checked = 0
    for state, ctr in counts.items():
        n = sum(ctr.values())
        if n < 2000:
            continue
        row = kernel_exp.row(state)
        obs, exp = [], []
        lump_o = lump_e = 0.0
        for v in range(row.lo, row.lo + len(row.probs)):
            e, o = row.prob_at(v) * n, ctr.get(v, 0)
            if e < 5:
                lump_o += o
                lump_e += e
            else:
                obs.append(o)
                exp.append(e)
        obs.append(lump_o)
        exp.append(lump_e)
        obs, exp = np.array(obs, float), np.array(exp, float)
        exp *= obs.sum() / exp.sum()
        p = chisquare(obs, exp).pvalue
        assert p > 0.001, f"state {state}: p={p}"
        checked += 1
    assert checked >= 4


def test_chain_long_run_mean(kernel_exp):
    seq = sample_eta_chain(kernel_exp, 10_000_000, seed=4)
    vals = seq.values.astype(float)
    mean = vals.mean()
    # integrated autocorrelation inflates the naive se; batch means over 200 chunks
    chunks = vals[: len(vals) // 200 * 200].reshape(200, -1).mean(axis=1)
    se = chunks.std(ddof=1) / np.sqrt(len(chunks))
    assert abs(mean + 0.5) < 3 * se


def test_marginal_table_matches_matrix_powers(kernel_exp, stationary_exp):
    table = marginal_law_table(kernel_exp, stationary_exp.window, stationary=stationary_exp)
    lo, hi = stationary_exp.window
    P, _ = kernel_exp.window_matrix(lo, hi)
    v = np.zeros(hi - lo + 1)
    v[-lo] = 1.0
    for j in range(min(6, table.j_star)):
        row = np.diff(np.concatenate(([0.0], table.cdfs[j])))
        assert np.abs(row - v / v.sum()).max() < 1e-12
        v = v @ P


def test_marginal_table_draw_law(kernel_exp, stationary_exp):
    table = marginal_law_table(kernel_exp, stationary_exp.window, stationary=stationary_exp)
    rng = np.random.Generator(np.random.Philox(12))
    idx = np.full(100_000, 2, dtype=np.int64)
    draws = table.draw(idx, rng)
    # compare with two exact kernel steps from 0
    lo, hi = stationary_exp.window
    P, _ = kernel_exp.window_matrix(lo, hi)
    v = np.zeros(hi - lo + 1)
    v[-lo] = 1.0
    v = (v @ P) @ P
    v /= v.sum()
    for state in range(-3, 4):
        p = v[state - lo]
        freq = (draws == state).mean()
        se = (p * (1 - p) / len(idx)) ** 0.5
        assert abs(freq - p) < 4 * se + 1e-4
