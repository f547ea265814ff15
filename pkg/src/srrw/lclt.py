"""Exact lattice local-CLT verification by dynamic programming.

Core object: the exact joint law of (Y, S) = (sum_j xi_j, sum_j j*xi_j) for
iid half-integer steps xi_1..xi_N, computed by sequential convolution in a
rotated frame B~ = S - c*Y with c = (N+1)//2 (kills most of the Y-S
correlation, which keeps the grid small).  Everything downstream (bivariate
and conditional Gaussian comparisons, the discrete-Gaussian convolution
bound) evaluates against this law.

The limiting density of (Y/sqrt(N), S/N^{3/2}) has covariance
sigma^2 * [[1, 1/2], [1/2, 1/3]]; inverting gives the quadratic form
(2/sigma^2)(u^2 + 3v^2 - 3uv), i.e. the cross term is negative.  The +3uv
variant is kept behind a flag purely as a regression guard.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import SupportBudgetError
from .eta import EtaKernel, Lattice1DDistribution, stationary_distribution
from .weights import WeightFunction

DEFAULT_SD_CAP = 8.5
_CLIP_SLACK = 48


def stationary_step_law(
    w: WeightFunction, window=(-40, 40), trim: float = 1e-18
) -> Lattice1DDistribution:
    """The symmetric half-integer step law derived from the stationary
    distribution of the embedded chain (the chain state shifted by +1/2)."""
    res = stationary_distribution(EtaKernel(w), window)
    law = res.r_law.truncated(trim)
    probs = law.probs / law.probs.sum()
    return Lattice1DDistribution(law.lo, probs, 0.5)


@dataclass
class BivariatePMF:
    """Exact joint law of (Y, S) on its shifted integer lattice.

    Array cell (ia, ib) carries P(Y = a_values[ia], S~ = bt_values[ib]) with
    S = S~ + c * Y.  truncated_mass accounts for everything clipped beyond
    the sd_cap box during the DP.
    """

    N: int
    step_law: Lattice1DDistribution
    c: int
    arr: np.ndarray
    center_a: int
    center_b: int
    par_a: int
    par_b: int
    box: tuple
    truncated_mass: float
    sigma2: float = field(init=False)

    def __post_init__(self):
        self.sigma2 = self.step_law.variance()

    def a_values(self) -> np.ndarray:
        alo, ahi = self.box[0], self.box[1]
        return (np.arange(alo, ahi) - self.center_a) + 0.5 * self.par_a

    def bt_values(self) -> np.ndarray:
        blo, bhi = self.box[2], self.box[3]
        return (np.arange(blo, bhi) - self.center_b) + 0.5 * self.par_b

    def occupied(self) -> np.ndarray:
        alo, ahi, blo, bhi = self.box
        return self.arr[alo:ahi, blo:bhi]

    def total_mass(self) -> float:
        return float(self.occupied().sum())

    def prob(self, a: float, b: float) -> float:
        """P(Y = a, S = b); zero off the lattice or the stored support."""
        fa = a - 0.5 * self.par_a
        ia = int(round(fa))
        bt = b - self.c * a
        fb = bt - 0.5 * self.par_b
        ib = int(round(fb))
        if abs(fa - ia) > 0.1 or abs(fb - ib) > 0.1:
            return 0.0
        ia += self.center_a
        ib += self.center_b
        alo, ahi, blo, bhi = self.box
        if alo <= ia < ahi and blo <= ib < bhi:
            return float(self.arr[ia, ib])
        return 0.0

    def marginal_y(self):
        return self.a_values(), self.occupied().sum(axis=1)

    def conditional_given_y(self, a: float):
        """(b_values, conditional probs) of S given Y = a."""
        ia = int(round(a - 0.5 * self.par_a)) + self.center_a
        alo, ahi, blo, bhi = self.box
        if not alo <= ia < ahi:
            raise ZeroMassError(f"Y = {a} has zero mass")
        row = self.arr[ia, blo:bhi]
        mass = row.sum()
        if mass <= 0.0:
            raise ZeroMassError(f"Y = {a} has zero mass")
        return self.bt_values() + self.c * a, row / mass

    def moments(self):
        """(E[Y], E[S], Var[Y], Var[S], Cov[Y,S]) from the exact law."""
        a = self.a_values()
        bt = self.bt_values()
        m = self.occupied()
        tot = m.sum()
        pa = m.sum(axis=1)
        pb = m.sum(axis=0)
        ey = float(a @ pa) / tot
        ebt = float(bt @ pb) / tot
        eyy = float(a**2 @ pa) / tot
        ebtbt = float(bt**2 @ pb) / tot
        eybt = float(a @ m @ bt) / tot
        es = ebt + self.c * ey
        var_y = eyy - ey**2
        cov_ybt = eybt - ey * ebt
        var_s = ebtbt - ebt**2 + 2 * self.c * cov_ybt + self.c**2 * var_y
        cov_ys = cov_ybt + self.c * var_y
        return ey, es, var_y, var_s, cov_ys


class ZeroMassError(ValueError):
    """Conditioning on a zero-probability marginal value."""


def exact_bivariate_pmf(
    step_law: Lattice1DDistribution,
    N: int,
    sd_cap: float = DEFAULT_SD_CAP,
    cell_budget: int = 60_000_000,
) -> BivariatePMF:
    """Exact joint law of (sum xi_j, sum j xi_j), j = 1..N, by convolution DP.

    Mass clipped outside the sd_cap ellipse box (~1e-15 total) is tracked in
    truncated_mass, never renormalized away.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if step_law.offset != 0.5:
        raise ValueError("step law must live on Z + 1/2")
    h = step_law.lo + np.arange(len(step_law.probs))  # integer parts of xi
    p = step_law.probs.astype(np.float64)
    keep = p > 0
    h, p = h[keep], p[keep]
    sigma = math.sqrt(step_law.variance())
    c = (N + 1) // 2
    w2 = np.sqrt(np.cumsum(np.array([(j - c) ** 2 for j in range(1, N + 1)], dtype=np.float64)))

    clip_a_final = int(math.ceil(sd_cap * sigma * math.sqrt(N))) + _CLIP_SLACK
    clip_b_final = int(math.ceil(sd_cap * sigma * w2[-1])) + _CLIP_SLACK
    h_span = int(h[-1] - h[0])
    HA = 2 * (clip_a_final + h_span + 4) + 1
    HB = 2 * (clip_b_final + 8) + 1
    if HA * HB > cell_budget:
        # grid area scales like N^2
        n_sug = int(N * math.sqrt(cell_budget / (HA * HB)))
        raise SupportBudgetError(
            f"DP grid {HA}x{HB} exceeds the cell budget", suggested_n=n_sug
        )
    center_a, center_b = HA // 2, HB // 2
    cur = np.zeros((HA, HB))
    nxt = np.zeros((HA, HB))
    cur[center_a, center_b] = 1.0
    alo = ahi = center_a
    blo = bhi = center_b
    ahi += 1
    bhi += 1
    par_a = par_b = 0
    truncated = 0.0

    for j in range(1, N + 1):
        wj = j - c
        par_a_new = 1 - par_a
        par_b_new = (par_b + wj) % 2
        shift_a = h + par_a
        shift_b = wj * h + (par_b + wj - par_b_new) // 2
        clip_a = min(int(math.ceil(sd_cap * sigma * math.sqrt(j))) + _CLIP_SLACK, clip_a_final + h_span)
        clip_b = min(int(math.ceil(sd_cap * sigma * w2[j - 1])) + _CLIP_SLACK, clip_b_final)
        ta_lo = max(alo + int(shift_a.min()), center_a - clip_a)
        ta_hi = min(ahi + int(shift_a.max()), center_a + clip_a + 1)
        tb_lo = max(blo + int(shift_b.min()), center_b - clip_b)
        tb_hi = min(bhi + int(shift_b.max()), center_b + clip_b + 1)
        nxt[ta_lo:ta_hi, tb_lo:tb_hi] = 0.0
        for hi_, pi, sa, sb in zip(h, p, shift_a, shift_b):
            sa, sb = int(sa), int(sb)
            # source sub-box whose image lands inside the clipped target
            sa_lo = max(alo, ta_lo - sa)
            sa_hi = min(ahi, ta_hi - sa)
            sb_lo = max(blo, tb_lo - sb)
            sb_hi = min(bhi, tb_hi - sb)
            if sa_lo >= sa_hi or sb_lo >= sb_hi:
                truncated += pi * float(cur[alo:ahi, blo:bhi].sum())
                continue
            block = cur[sa_lo:sa_hi, sb_lo:sb_hi]
            nxt[sa_lo + sa:sa_hi + sa, sb_lo + sb:sb_hi + sb] += pi * block
            # clipped-off mass lives in the thin edge strips of the source box
            if (sa_lo, sa_hi, sb_lo, sb_hi) != (alo, ahi, blo, bhi):
                off = (
                    float(cur[alo:sa_lo, blo:bhi].sum())
                    + float(cur[sa_hi:ahi, blo:bhi].sum())
                    + float(cur[sa_lo:sa_hi, blo:sb_lo].sum())
                    + float(cur[sa_lo:sa_hi, sb_hi:bhi].sum())
                )
                truncated += pi * off
        cur, nxt = nxt, cur
        alo, ahi, blo, bhi = ta_lo, ta_hi, tb_lo, tb_hi
        par_a, par_b = par_a_new, par_b_new

    return BivariatePMF(
        N=N,
        step_law=step_law,
        c=c,
        arr=cur,
        center_a=center_a,
        center_b=center_b,
        par_a=par_a,
        par_b=par_b,
        box=(alo, ahi, blo, bhi),
        truncated_mass=truncated,
    )


# -- Gaussian comparison ------------------------------------------------------


def gaussian_bivariate_predicted(sigma2: float, n_x: float, a: float, b: float, plus_cross_sign: bool = False) -> float:
    """Limit density value for P(Y = a, S = b) at scale n_x.

    plus_cross_sign=True evaluates the +3ab variant (wrong sign, kept only
    for the regression test that it fails to converge).
    """
    if n_x <= 0 or sigma2 <= 0:
        raise ValueError("n_x and sigma2 must be positive")
    sgn = 1.0 if plus_cross_sign else -1.0
    q = (a * a / n_x + 3.0 * b * b / n_x**3 + sgn * 3.0 * a * b / n_x**2) * 2.0 / sigma2
    return math.sqrt(12.0) / (2.0 * math.pi * sigma2 * n_x**2) * math.exp(-q)


@dataclass
class GaussianComparison:
    N: int
    sigma2: float
    box: tuple
    sup_scaled_error: float
    argmax: tuple
    n_points: int
    truncated_mass: float

    def __post_init__(self):
        if self.sup_scaled_error < 0:
            raise ValueError("sup error cannot be negative")


def lclt_sup_error(
    pmf: BivariatePMF,
    u_max: float = 3.0,
    v_max: float = 3.0,
    plus_cross_sign: bool = False,
) -> GaussianComparison:
    """sup over lattice points with |u|,|v| <= box of
    |(pi sigma^2/sqrt(3)) N^2 P - exp(-(2/sigma^2)(u^2+3v^2-3uv))|.

    Lattice points outside the stored support count with exact mass 0.
    """
    N = pmf.N
    s2 = pmf.sigma2
    scale = math.pi * s2 / math.sqrt(3.0) * N * N
    sqn = math.sqrt(N)
    n32 = N ** 1.5
    sgn = 1.0 if plus_cross_sign else -1.0
    a_all = pmf.a_values()
    bt_all = pmf.bt_values()
    alo, ahi, blo, bhi = pmf.box
    sup = 0.0
    arg = (0.0, 0.0)
    count = 0
    # b lattice enumerated per admissible a-row (S = S~ + c a shifts per row)
    b_lat_lo = -v_max * n32
    for ia, a in enumerate(a_all):
        u = a / sqn
        if abs(u) > u_max:
            continue
        # all lattice b with |v| <= v_max, aligned to this row's lattice
        row_b0 = bt_all[0] + pmf.c * a
        k0 = math.ceil(b_lat_lo - row_b0)
        b_vals = row_b0 + np.arange(k0, k0 + int(2 * v_max * n32) + 1)
        v = b_vals / n32
        v_ok = np.abs(v) <= v_max
        b_vals, v = b_vals[v_ok], v[v_ok]
        exact = np.zeros(len(b_vals))
        ib = np.round(b_vals - pmf.c * a - 0.5 * pmf.par_b).astype(np.int64) + pmf.center_b
        inside = (ib >= blo) & (ib < bhi)
        exact[inside] = pmf.arr[alo + ia, ib[inside]]
        q = (u * u + 3.0 * v * v + sgn * 3.0 * u * v) * 2.0 / s2
        err = np.abs(scale * exact - np.exp(-q))
        count += len(err)
        i = int(np.argmax(err))
        if err[i] > sup:
            sup = float(err[i])
            arg = (float(a), float(b_vals[i]))
    return GaussianComparison(
        N=N,
        sigma2=s2,
        box=(u_max, v_max),
        sup_scaled_error=sup,
        argmax=arg,
        n_points=count,
        truncated_mass=pmf.truncated_mass,
    )


def conditional_predicted(sigma2: float, n_x: float, a: float, b: float) -> float:
    """Limit value of (sqrt(2 pi)/sqrt(12)) sigma n_x^{3/2} P(S = b | Y = a)."""
    s = math.sqrt(sigma2)
    arg = a / (2.0 * math.sqrt(n_x)) - b / n_x**1.5
    return math.exp(-(6.0 / sigma2) * arg * arg)


def conditional_lclt_check(pmf: BivariatePMF, a: float, b: float):
    """(exact conditional P(S=b | Y=a), predicted conditional probability)."""
    b_vals, probs = pmf.conditional_given_y(a)
    i = int(round(b - b_vals[0]))
    exact = float(probs[i]) if 0 <= i < len(probs) else 0.0
    s = math.sqrt(pmf.sigma2)
    pred = conditional_predicted(pmf.sigma2, pmf.N, a, b) * math.sqrt(12.0) / (
        math.sqrt(2.0 * math.pi) * s * pmf.N**1.5
    )
    return exact, pred


def conditional_sup_error(pmf: BivariatePMF, a_max: float | None = None, b_max: float | None = None):
    """sup over |a| <= a_max, |b| <= b_max of the scaled conditional error
    |(sqrt(2 pi) sigma/sqrt(12)) N^{3/2} P(S=b|Y=a) - exp(-(6/s2)(a/2sqrt(N) - b/N^{3/2})^2)|."""
    N = pmf.N
    if a_max is None:
        a_max = 2.0 * math.sqrt(N)
    if b_max is None:
        b_max = 2.0 * N**1.5
    s = math.sqrt(pmf.sigma2)
    scale = math.sqrt(2.0 * math.pi) * s * N**1.5 / math.sqrt(12.0)
    sup = 0.0
    arg = (0.0, 0.0)
    for a in pmf.a_values():
        if abs(a) > a_max:
            continue
        try:
            b_vals, probs = pmf.conditional_given_y(float(a))
        except ZeroMassError:
            continue
        ok = np.abs(b_vals) <= b_max
        bv = b_vals[ok]
        ex = probs[ok]
        z = a / (2.0 * math.sqrt(N)) - bv / N**1.5
        pred = np.exp(-(6.0 / pmf.sigma2) * z * z)
        err = np.abs(scale * ex - pred)
        i = int(np.argmax(err))
        if err[i] > sup:
            sup = float(err[i])
            arg = (float(a), float(bv[i]))
    return sup, arg


# -- discrete Gaussian convolution bound --------------------------------------


def _normal_density(x):
    return np.exp(-0.5 * np.asarray(x, dtype=np.float64) ** 2) / math.sqrt(2.0 * math.pi)


def _normal_upper_tail(x: float) -> float:
    return 0.5 * math.erfc(x / math.sqrt(2.0))


@dataclass
class ConvolutionBoundReport:
    hypothesis_ok: bool
    hypothesis_detail: str
    min_margin: float | None
    argmin_z: int | None
    n_z_checked: int
    bound_constant: float
    max_margin: float | None = None
    argmax_z: int | None = None


def convolution_lowerbound_check(
    xi_lo: int,
    xi: np.ndarray,
    zeta_lo: int,
    zeta: np.ndarray,
    M: float,
    eps: float,
    sigma1: float,
    sigma2: float,
) -> ConvolutionBoundReport:
    """Check the approximate-discrete-Gaussian convolution lower bound.

    Hypothesis: xi_k >= (1-eps)/sigma2 f(k/sigma2) on |k| <= M sigma2 and
    zeta_k >= (1-eps)/sigma1 f(k/sigma1) on |k| <= M sigma1 (f the standard
    normal density).  Conclusion, checked for all |z| <= M sigma2 / 9:

      sum_k xi_{z+k} zeta_{-k}
        >= (1-eps)^3 (1 - Phi(M/4)) f(z/sqrt(s1^2+s2^2)) / sqrt(s1^2+s2^2)

    with Phi the normalized Gaussian upper tail (the unnormalized variant
    would make the constant negative at moderate M).  Returns the worst
    margin over z; the hypothesis failing short-circuits the conclusion.
    """
    if not (0 < sigma1 <= sigma2):
        raise ValueError("need 0 < sigma1 <= sigma2")
    if M < 1:
        raise ValueError("need M >= 1")

    def _hyp(lo, seq, sig):
        ks = np.arange(math.ceil(-M * sig), math.floor(M * sig) + 1)
        vals = np.zeros(len(ks))
        idx = ks - lo
        ok = (idx >= 0) & (idx < len(seq))
        vals[ok] = seq[idx[ok]]
        bound = (1.0 - eps) / sig * _normal_density(ks / sig)
        bad = vals < bound
        return (not bad.any()), int(bad.sum()), ks[bad][:3] if bad.any() else []

    ok2, n2, where2 = _hyp(xi_lo, xi, sigma2)
    ok1, n1, where1 = _hyp(zeta_lo, zeta, sigma1)
    const = (1.0 - eps) ** 3 * (1.0 - _normal_upper_tail(M / 4.0))
    if not (ok1 and ok2):
        detail = f"xi violations: {n2} (e.g. {list(where2)}); zeta violations: {n1} (e.g. {list(where1)})"
        return ConvolutionBoundReport(False, detail, None, None, 0, const)

    conv = np.convolve(xi, zeta)
    conv_lo = xi_lo + zeta_lo
    s12 = math.hypot(sigma1, sigma2)
    z_max = int(M * sigma2 / 9.0)
    zs = np.arange(-z_max, z_max + 1)
    idx = zs - conv_lo
    vals = np.zeros(len(zs))
    ok = (idx >= 0) & (idx < len(conv))
    vals[ok] = conv[idx[ok]]
    rhs = const * _normal_density(zs / s12) / s12
    margins = vals - rhs
    i = int(np.argmin(margins))
    j = int(np.argmax(margins))
    return ConvolutionBoundReport(True, "ok", float(margins[i]), int(zs[i]), len(zs), const,
                                  max_margin=float(margins[j]), argmax_z=int(zs[j]))


def cond_sum_lclt_bound(params, a: float, a_prime: float, b: float, K: float, eps: float) -> float:
    """Predicted lower bound for the conditional sum local CLT at scale n:

      (2 / (sqrt(pi beta_n) n^{3/2})) [exp(-(4/beta_n)(a/2sqrt(n)
          + a'/2 N_x^{3/2} - b/n^{3/2})^2) - eps]
    """
    n = params.n
    if abs(a) > K * math.sqrt(n):
        raise ValueError("a out of range")
    if abs(a_prime) > K * math.sqrt(max(params.N_x, 0.0)):
        raise ValueError("a' out of range")
    if abs(b) > (K / 9.0) * n**1.5:
        raise ValueError("b out of range")
    z = a / (2.0 * math.sqrt(n)) + a_prime / (2.0 * params.N_x**1.5) - b / n**1.5
    return 2.0 / (math.sqrt(math.pi * params.beta_n) * n**1.5) * (
        math.exp(-(4.0 / params.beta_n) * z * z) - eps
    )
