"""Acceptance suite: one test per criterion, at the declared tolerances.

Run with `pytest tests/test_acceptance.py -v -s` to see one PASS line per
criterion with its wall-clock time.  Master seeds are pinned; every run is
deterministic and thread-budget independent.
"""

import json
import math
import time

import numpy as np
import pytest
from scipy.stats import chisquare

import srrw
from srrw import vectorwalk as vw
from srrw.cli import main as cli_main
from srrw.enumeration import exact_position_law
from srrw.harness import load_expectations, substream

SEED = 20260809


def report(num, name, detail, t0, budget_s):
    dt = time.time() - t0
    print(f"\nACCEPTANCE {num} ({name}): PASS - {detail} [{dt:.1f}s / budget {budget_s}s]")
    assert dt < budget_s, f"criterion {num} exceeded its runtime budget: {dt:.0f}s"


@pytest.fixture(scope="module")
def step_law_exp(w_exp):
    return srrw.stationary_step_law(w_exp)


@pytest.fixture(scope="module")
def pmf_ladder(step_law_exp):
    return {N: srrw.exact_bivariate_pmf(step_law_exp, N) for N in (50, 100, 200, 400)}


def lumped_chisquare_p(counts, law, total):
    obs, exp = [], []
    lump_o = lump_e = 0.0
    for x, p in sorted(law.items()):
        e, o = p * total, counts.get(x, 0)
        if e < 5:
            lump_o += o
            lump_e += e
        else:
            obs.append(o)
            exp.append(e)
    lump_o += sum(c for x, c in counts.items() if x not in law)
    if lump_e > 0:
        obs.append(lump_o)
        exp.append(lump_e)
    obs, exp = np.array(obs, float), np.array(exp, float)
    exp *= obs.sum() / exp.sum()
    return chisquare(obs, exp).pvalue


def test_criterion_1_exact_dynamics_oracle(w_exp, w_ramp):
    """Full path-enumeration law of X(k), k <= 16, vs the batch simulator at
    1e6 replicas: chi-square p > 0.001 for every k and both weight families."""
    t0 = time.time()
    R = 1_000_000
    worst = 1.0
    for wi, w in enumerate((w_exp, w_ramp)):
        pos, _, _, snaps = vw.final_positions(
            w, 16, R, substream(SEED, 1, wi), snapshots=range(1, 17)
        )
        for k in range(1, 17):
            law = exact_position_law(w, k)
            vals, cnts = np.unique(snaps[k], return_counts=True)
            p = lumped_chisquare_p(dict(zip(vals.tolist(), cnts.tolist())), law, R)
            worst = min(worst, p)
            assert p > 0.001, f"family {w.family}, k={k}: chi-square p = {p:.5f}"
    report(1, "exact dynamics oracle", f"worst chi-square p = {worst:.4f} over 32 laws", t0, 60)


def test_criterion_2_kernel_rows(w_exp):
    """eta_kernel_row vs transition frequencies observed from walk dynamics,
    1e6 transitions per state, both departure directions, |state| <= 5,
    total variation < 0.01."""
    t0 = time.time()
    R = 1_000_000
    worst = 0.0
    for direction in ("+", "-"):
        for state in range(-5, 6):
            out, censored = vw.kernel_transition_samples(
                w_exp, state, direction, R, substream(SEED, 2, state + 16, 0 if direction == "+" else 1)
            )
            assert censored == 0
            row = srrw.eta_kernel_row(w_exp, state)
            vals, cnts = np.unique(out, return_counts=True)
            emp = dict(zip(vals.tolist(), (cnts / len(out)).tolist()))
            support = set(emp) | {int(v) for v in range(row.lo, row.lo + len(row.probs))}
            tv = 0.5 * sum(abs(emp.get(k, 0.0) - row.prob_at(k)) for k in support)
            worst = max(worst, tv)
            assert tv < 0.01, f"state {state} dir {direction}: TV {tv:.4f}"
    report(2, "kernel correctness", f"worst TV = {worst:.4f} over 22 rows", t0, 300)


def test_criterion_3_stationary_invariants(w_exp, w_ramp):
    """mean(nu) = -1/2 within 1e-6 and r-law symmetry within 1e-8 on
    [-40, 40], for both default weight families."""
    t0 = time.time()
    details = []
    for w in (w_exp, w_ramp):
        res = srrw.stationary_distribution(srrw.EtaKernel(w), window=(-40, 40))
        assert abs(res.mean + 0.5) < 1e-6, f"{w.family}: mean {res.mean}"
        sym = res.r_law.symmetry_defect()
        assert sym < 1e-8, f"{w.family}: symmetry defect {sym}"
        details.append(f"{w.family}: mean defect {abs(res.mean + 0.5):.2e}, sym {sym:.2e}")
    report(3, "stationary mean and symmetry", "; ".join(details), t0, 60)


def test_criterion_4_ray_knight_equivalence(w_exp, sampler_exp):
    """Law of l+(T+_{0,m}, y) from the profile sampler vs direct simulation:
    m <= 3, |y| <= 3, TV < 0.01 at 1e6 replicas each."""
    t0 = time.time()
    R = 1_000_000
    worst = 0.0
    for m in (1, 2, 3):
        times, prof, unfin = vw.edge_hit_times(
            w_exp, 0, [m], R, substream(SEED, 4, m, 0), t_cap=1_000_000, capture_window=(-3, 3)
        )
        assert len(unfin) == 0
        rk = sampler_exp.batch_profile_window(0, m, R, substream(SEED, 4, m, 1), y_lo=-3, y_hi=3)
        for iy, y in enumerate(range(-3, 4)):
            a, b = prof[:, iy], rk[y]
            hi = int(max(a.max(), b.max())) + 1
            tv = 0.5 * np.abs(np.bincount(a, minlength=hi) / R - np.bincount(b, minlength=hi) / R).sum()
            worst = max(worst, tv)
            assert tv < 0.01, f"m={m} y={y}: TV {tv:.4f}"
    report(4, "Ray-Knight equivalence", f"worst TV = {worst:.4f} over 21 laws", t0, 600)


def test_criterion_5_bivariate_lclt(pmf_ladder):
    """Scaled sup error < 0.05 at N=400 on |u|,|v| <= 3, strictly decreasing
    along N in {50,100,200,400}; the +3uv sign variant fails the decrease."""
    t0 = time.time()
    sups = [srrw.lclt_sup_error(pmf_ladder[N]).sup_scaled_error for N in (50, 100, 200, 400)]
    assert sups[-1] < 0.05, f"sup at N=400: {sups[-1]:.4f}"
    assert all(b < a for a, b in zip(sups, sups[1:])), f"ladder {sups}"
    wrong = [srrw.lclt_sup_error(pmf_ladder[N], plus_cross_sign=True).sup_scaled_error
             for N in (50, 100, 200, 400)]
    assert not all(b < a for a, b in zip(wrong, wrong[1:])) or wrong[-1] > 0.05, \
        f"+3uv variant unexpectedly converges: {wrong}"
    report(5, "bivariate local CLT", f"sup ladder {['%.4f' % s for s in sups]}; +3uv stays at {wrong[-1]:.2f}", t0, 600)


def test_criterion_6_conditional_lclt_and_convolution(pmf_ladder):
    """Conditional scaled sup error < 0.1 at N=400 on |a| <= 2 sqrt(N),
    |b| <= 2 N^{3/2}; the discrete-Gaussian convolution bound holds with
    nonnegative minimum margin at M=4, eps=0.05 on these conditionals."""
    t0 = time.time()
    pmf = pmf_ladder[400]
    sup, arg = srrw.conditional_sup_error(pmf)
    assert sup < 0.1, f"conditional sup {sup:.4f} at {arg}"
    b_vals, probs = pmf.conditional_given_y(0.0)
    i0 = int(np.argmin(np.abs(b_vals)))
    lo = int(b_vals[0] - b_vals[i0])
    sigma_cond = math.sqrt(pmf.sigma2 / 12.0) * 400**1.5
    rep = srrw.convolution_lowerbound_check(
        lo, probs, lo, probs, M=4.0, eps=0.05, sigma1=sigma_cond, sigma2=sigma_cond
    )
    assert rep.hypothesis_ok, rep.hypothesis_detail
    assert rep.min_margin >= 0.0, f"min margin {rep.min_margin:.3e} at z={rep.argmin_z}"
    report(6, "conditional local CLT + convolution bound",
           f"cond sup {sup:.4f}; min margin {rep.min_margin:.2e} over {rep.n_z_checked} shifts", t0, 600)


def test_criterion_7_endpoint_uniform_limit(w_exp):
    """KS(X(n^2)/n, U(-1,1)) < 0.03 at n=100 with 1e5 replicas, and the KS
    distance decreases along n in {50, 100, 200}."""
    t0 = time.time()
    cfg = srrw.EndpointConfig(weight=w_exp.spec(), master_seed=SEED + 7,
                              n_ladder=(50, 100, 200), replicas=100_000, threads=2)
    rep = srrw.endpoint_law(cfg)
    assert rep.passed(), [c for c in rep.checks if not c.passed]
    ks = {r["n"]: r["ks"] for r in rep.tables["endpoint"]}
    assert ks[100] < 0.03
    assert ks[50] > ks[100] > ks[200]
    report(7, "endpoint uniform limit", f"KS {['%d: %.4f' % (n, k) for n, k in ks.items()]}", t0, 900)


def test_criterion_8_pointwise_lower_bound(w_exp):
    """n * P(X(n^2) = x) >= 0.8 for all parity-correct |x| <= 0.8 n at n=60
    with 1e6 replicas (alpha = 0.6 makes the grid reach 0.8 n)."""
    t0 = time.time()
    cfg = srrw.LcltTableConfig(weight=w_exp.spec(), master_seed=SEED + 8, n=60,
                               replicas=1_000_000, alpha=0.6, eps=0.2, threads=2)
    rep = srrw.local_clt_table(cfg)
    rows = [r for r in rep.tables["lclt_table"] if abs(r["x"]) <= 48]
    assert len(rows) == 49
    low = [(r["x"], r["n_phat"]) for r in rows if r["n_phat"] < 0.8]
    assert not low, f"cells below 0.8: {low}"
    assert rep.passed(), [c for c in rep.checks if not c.passed]
    worst = min(r["n_phat"] for r in rows)
    report(8, "pointwise lower bound", f"min n*P over |x|<=48: {worst:.3f}", t0, 1200)


def test_criterion_9_tail_suite(w_exp):
    """Tail event frequencies with g = log^2 decrease along m in
    {1e3, 1e4, 1e5} and are < 1e-2 at the top of the ladder."""
    t0 = time.time()
    cfg = srrw.TailConfig(weight=w_exp.spec(), master_seed=SEED + 9,
                          m_ladder=(1_000, 10_000, 100_000),
                          replicas_per_m=(20_000, 20_000, 4_000),
                          cross_m=50, cross_replicas=4_000, threads=2)
    rep = srrw.tail_bounds_suite(cfg)
    assert rep.passed(), [c for c in rep.checks if not c.passed]
    tops = {r["event"]: r["freq"] for r in rep.tables["tails"] if r["m"] == 100_000}
    assert all(f < 0.01 for f in tops.values())
    report(9, "range/profile tail suite", f"top-of-ladder freqs {tops}", t0, 900)


def test_criterion_10_inverse_time_asymptotics(w_exp):
    """Riemann-sum identity within 0.01 at n=1e4 (pure numerics); scaled
    estimate of P(T = n^2) at n=24, c=0 with 1e7 replicas inside the
    pre-registered band, decreasing in |c|; walk route agrees."""
    t0 = time.time()
    cfg = srrw.InverseTimeConfig(weight=w_exp.spec(), master_seed=SEED + 10, n=24, x=0,
                                 c_targets=(-1.0, -0.5, 0.0, 0.5, 1.0),
                                 replicas=10_000_000, cross_replicas=1_000_000, threads=2)
    rep = srrw.inverse_time_asymptotics(cfg)
    assert rep.passed(), [c for c in rep.checks if not c.passed]
    assert rep.tables["riemann"][0]["abs_error"] < 0.01
    row0 = next(r for r in rep.tables["inverse_time"] if r["c"] == 0.0)
    band = load_expectations()["inverse_time_scaled_band_c0"]
    assert band[0] <= row0["scaled"] <= band[1]
    report(10, "inverse-time asymptotics",
           f"c=0 scaled {row0['scaled']:.3f} in {band}; riemann err {rep.tables['riemann'][0]['abs_error']:.1e}",
           t0, 1800)


def test_criterion_11_determinism(tmp_path):
    """Re-running a campaign from its manifest reproduces byte-identical
    CSV/JSON results under a different thread budget."""
    t0 = time.time()
    out1 = tmp_path / "run1"
    code = cli_main([
        "campaign", "--kind", "endpoint", "--seed", str(SEED + 11), "--replicas", "20000",
        "--param", "n_ladder=[12,16]", "--param", "block_size=4096", "--param", "threads=1",
        "--out", str(out1),
    ])
    assert code == 0
    out2 = tmp_path / "run2"
    assert cli_main(["campaign", "--manifest", str(out1 / "manifest.json"),
                     "--threads", "4", "--out", str(out2)]) == 0
    same = []
    for name in ("endpoint.csv", "endpoint_hist.csv"):
        b1 = (out1 / name).read_bytes()
        b2 = (out2 / name).read_bytes()
        assert b1 == b2, f"{name} differs across thread budgets"
        same.append(name)
    r1 = json.loads((out1 / "results.json").read_text())
    r2 = json.loads((out2 / "results.json").read_text())
    r1["config"].pop("threads")
    r2["config"].pop("threads")
    assert r1 == r2
    report(11, "determinism", f"byte-identical outputs: {same} + results.json", t0, 120)
