"""The embedded site chain: exact transition kernel and stationary law.

Between consecutive departures in one direction, a site makes L >= 0
departures the other way.  With p(d) = w(-d)/(w(d)+w(-d)) the walk rule
gives, from chain state h,

    P(h -> h + L - 1) = p(-h-L) * prod_{i=0}^{L-1} (1 - p(-h-i)),  L >= 0,

the same product for both departure directions (since 1 - p(d) = p(-d)).
The stationary law has mean -1/2 for every admissible weight; shifting by
+1/2 gives a symmetric lattice law on Z + 1/2 whose variance sigma^2 feeds
all scaling formulas.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ConvergenceError, DivergingTailError, WindowTooSmallError
from .walk import EtaSequence, _as_generator
from .weights import WeightFunction

DEFAULT_EPS_TAIL = 1e-14
DEFAULT_WINDOW = (-40, 40)


@dataclass
class Lattice1DDistribution:
    """Probability masses on {lo + i + offset : i = 0..len-1}, offset 0 or 1/2."""

    lo: int
    probs: np.ndarray
    offset: float = 0.0

    def values(self) -> np.ndarray:
        return self.lo + np.arange(len(self.probs)) + self.offset

    def mass(self) -> float:
        return float(self.probs.sum())

    def mean(self) -> float:
        return float(np.dot(self.values(), self.probs) / self.probs.sum())

    def variance(self) -> float:
        v = self.values()
        m = self.mean()
        return float(np.dot((v - m) ** 2, self.probs) / self.probs.sum())

    def prob_at(self, value) -> float:
        i = int(round(value - self.offset)) - self.lo
        if 0 <= i < len(self.probs):
            return float(self.probs[i])
        return 0.0

    def symmetry_defect(self) -> float:
        """max |P(v) - P(-v)| over the support (for laws meant to be symmetric)."""
        vals = self.values()
        return max(abs(self.prob_at(v) - self.prob_at(-v)) for v in vals)

    def truncated(self, threshold: float) -> "Lattice1DDistribution":
        keep = np.nonzero(self.probs > threshold)[0]
        if len(keep) == 0:
            raise ValueError("truncation removed all mass")
        i0, i1 = keep[0], keep[-1] + 1
        return Lattice1DDistribution(self.lo + int(i0), self.probs[i0:i1].copy(), self.offset)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        cdf = np.cumsum(self.probs)
        cdf /= cdf[-1]
        idx = np.searchsorted(cdf, rng.random(size), side="right")
        return self.lo + idx


def _row_from_p(p, state: int, eps_tail: float, max_terms: int = 100_000) -> Lattice1DDistribution:
    """Kernel row from an arbitrary step-probability function p(d)."""
    masses = []
    surv = 1.0
    for L in range(max_terms):
        pr = p(-state - L)
        masses.append(surv * pr)
        surv *= 1.0 - pr
        if surv < eps_tail:
            return Lattice1DDistribution(state - 1, np.array(masses))
    raise DivergingTailError(
        f"row at state {state} did not contract below {eps_tail} in {max_terms} terms"
    )


def eta_kernel_row(w: WeightFunction, state: int, eps_tail: float = DEFAULT_EPS_TAIL) -> Lattice1DDistribution:
    """Transition row of the embedded chain from `state`.

    Support is {state-1, state, ...}; the row sums to 1 within eps_tail (the
    surviving tail is dropped, not renormalized).
    """
    if not 0.0 < eps_tail < 1.0:
        raise ValueError("eps_tail must be in (0, 1)")
    return _row_from_p(w.p_right, state, eps_tail)


@dataclass
class EtaKernel:
    """Row cache plus window-truncated matrix builder for one weight."""

    weight: WeightFunction
    eps_tail: float = DEFAULT_EPS_TAIL
    _rows: dict = field(default_factory=dict, repr=False)

    def row(self, state: int) -> Lattice1DDistribution:
        r = self._rows.get(state)
        if r is None:
            r = eta_kernel_row(self.weight, state, self.eps_tail)
            self._rows[state] = r
        return r

    def window_matrix(self, lo: int, hi: int):
        """(P, leak): P[i, j] = P(lo+i -> lo+j) clipped to [lo, hi];
        leak[i] = row mass falling outside the window."""
        n = hi - lo + 1
        P = np.zeros((n, n))
        leak = np.zeros(n)
        for i, state in enumerate(range(lo, hi + 1)):
            row = self.row(state)
            for j, v in enumerate(range(row.lo, row.lo + len(row.probs))):
                if lo <= v <= hi:
                    P[i, v - lo] += row.probs[j]
                else:
                    leak[i] += row.probs[j]
            leak[i] += 1.0 - row.mass()  # dropped tail counts as leakage
        return P, leak


@dataclass
class StationaryResult:
    nu: Lattice1DDistribution
    r_law: Lattice1DDistribution
    mean: float
    sigma2: float
    window: tuple
    residual: float
    boundary_mass: float
    iterations: int


def power_step(v: np.ndarray, P: np.ndarray) -> np.ndarray:
    """One renormalized power-iteration step v -> vP / ||vP||_1."""
    out = v @ P
    return out / out.sum()


def stationary_distribution(
    kernel: EtaKernel,
    window: tuple = DEFAULT_WINDOW,
    residual: float = 1e-12,
    leak_target: float = 1e-9,
    max_iters: int = 200_000,
) -> StationaryResult:
    """Numeric stationary law of the embedded chain on a truncated window.

    Power iteration to L1 residual < `residual`; fails if the window lets
    more than `leak_target` stationary mass leak through its boundary.
    """
    lo, hi = window
    P, leak = kernel.window_matrix(lo, hi)
    n = hi - lo + 1
    # start from a peaked guess at the known bulk around -1/2
    v = np.exp(-0.5 * (np.arange(lo, hi + 1) + 0.5) ** 2)
    v /= v.sum()
    res = np.inf
    for it in range(1, max_iters + 1):
        nxt = power_step(v, P)
        res = float(np.abs(nxt - v).sum())
        v = nxt
        if res < residual:
            break
    else:
        raise ConvergenceError(f"power iteration residual {res} after {max_iters} iters")
    boundary = float(np.dot(v, leak))
    if boundary > leak_target:
        raise WindowTooSmallError(
            f"boundary leakage {boundary:.3e} exceeds target {leak_target:.1e} on window {window}"
        )
    nu = Lattice1DDistribution(lo, v.copy(), 0.0)
    r_law = Lattice1DDistribution(lo, v.copy(), 0.5)
    return StationaryResult(
        nu=nu,
        r_law=r_law,
        mean=nu.mean(),
        sigma2=r_law.variance(),
        window=(lo, hi),
        residual=res,
        boundary_mass=boundary,
        iterations=it,
    )


def sample_eta_chain(kernel: EtaKernel, length: int, seed, start: int = 0) -> EtaSequence:
    """Sample the embedded chain from state `start` by inverse-CDF steps."""
    if length < 1:
        raise ValueError("length must be >= 1")
    rng = _as_generator(seed)
    values = np.empty(length, dtype=np.int64)
    values[0] = start
    cdf_cache: dict = {}
    uniforms = rng.random(length - 1)
    state = start
    for j in range(1, length):
        entry = cdf_cache.get(state)
        if entry is None:
            row = kernel.row(state)
            entry = (row.lo, np.cumsum(row.probs))
            cdf_cache[state] = entry
        lo_row, cdf = entry
        i = int(np.searchsorted(cdf, uniforms[j - 1] * cdf[-1], side="right"))
        if i >= len(cdf):
            i = len(cdf) - 1
        state = lo_row + i
        values[j] = state
    return EtaSequence(site=None, direction="+", values=values, taus=np.arange(length))


@dataclass
class MarginalTable:
    """Laws of the chain state after j steps from 0, up to mixing cutoff.

    Row j (j <= j_star) is the exact j-step marginal on the window; beyond
    j_star every marginal is within tv_at_cutoff (< ~1e-14) of the stationary
    law, so the stationary row stands in for all larger indices.

    Mixed-index draws use one searchsorted over the row-stacked CDFs: row j
    is embedded at offset 2j, so the query 2*idx + u lands in its own row.
    """

    lo: int
    cdfs: np.ndarray  # (j_star + 1, window) cumulative rows, each ending at 1
    nu_cdf: np.ndarray
    j_star: int
    tv_at_cutoff: float
    _flat: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self._flat = (2.0 * np.arange(len(self.cdfs))[:, None] + self.cdfs).ravel()

    def draw(self, idx: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        """One chain value per entry: entry i is distributed as state after
        idx[i] steps from 0 (stationary beyond the cutoff)."""
        u = rng.random(len(idx))
        out = np.empty(len(idx), dtype=np.int64)
        big = idx >= self.j_star
        if big.any():
            out[big] = self.lo + np.searchsorted(self.nu_cdf, u[big], side="right")
        small = ~big
        if small.any():
            sidx = idx[small]
            width = self.cdfs.shape[1]
            pos = np.searchsorted(self._flat, 2.0 * sidx + u[small], side="right")
            out[small] = self.lo + (pos - sidx * width)
        return out


def marginal_law_table(
    kernel: EtaKernel,
    window: tuple = DEFAULT_WINDOW,
    tv_cutoff: float = 1e-15,
    j_cap: int = 5000,
    stationary: Optional[StationaryResult] = None,
) -> MarginalTable:
    lo, hi = window
    P, _ = kernel.window_matrix(lo, hi)
    if stationary is None:
        stationary = stationary_distribution(kernel, window)
    nu = stationary.nu.probs
    j_min = max(abs(lo) + 1, 2)  # guarantees index >= j_star implies state + index > 0
    rows = []
    v = np.zeros(hi - lo + 1)
    v[-lo] = 1.0
    rows.append(v.copy())
    tv = 1.0
    prev_tv = np.inf
    for j in range(1, j_cap + 1):
        v = v @ P
        s = v.sum()
        if s > 0:
            v = v / s
        rows.append(v.copy())
        tv = 0.5 * float(np.abs(v - nu).sum())
        if j >= j_min and (tv < tv_cutoff or tv > 0.5 * prev_tv):
            break  # converged, or hit the numeric floor of nu itself
        prev_tv = tv
    mat = np.vstack(rows)
    cdfs = np.cumsum(mat, axis=1)
    cdfs /= cdfs[:, -1:]
    nu_cdf = np.cumsum(nu)
    nu_cdf /= nu_cdf[-1]
    return MarginalTable(lo=lo, cdfs=cdfs, nu_cdf=nu_cdf, j_star=len(rows) - 1, tv_at_cutoff=tv)
