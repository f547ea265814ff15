"""Batched walk simulation kernels.

The step rule only needs the signed difference d = l+ - l- at the current
site, so a batch of replicas is advanced in lockstep with a dense per-replica
d-array over a site window and a precomputed p_right table over d.  Window
and table sizes are guesses; on overflow the block is re-run deterministically
with doubled capacity (same seed, same draw layout).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .walk import _as_generator
from .weights import WeightFunction


class _NeedWider(Exception):
    pass


class _NeedDeeper(Exception):
    pass


def default_width(steps: int) -> int:
    return 2 * (int(3.5 * math.sqrt(max(steps, 4))) + 48)


def _p_table(w: WeightFunction, dmax: int) -> np.ndarray:
    return w.p_right_table(dmax)


def _retrying(fn, width: int, dmax: int, max_doublings: int = 10):
    for _ in range(max_doublings):
        try:
            return fn(width, dmax)
        except _NeedWider:
            width *= 2
        except _NeedDeeper:
            dmax *= 2
    raise RuntimeError("simulation kept overflowing its site window")


@dataclass
class _Batch:
    pos: np.ndarray
    D: np.ndarray
    off: int
    ptab: np.ndarray
    dmax: int
    rng: np.random.Generator
    LP: np.ndarray | None = None

    def step(self):
        """Advance every replica one step; returns (old_pos, signs)."""
        pos = self.pos
        if len(pos) and int(np.abs(pos).max()) >= self.off - 1:
            raise _NeedWider
        rows = np.arange(len(pos))
        cols = pos + self.off
        d = self.D[rows, cols]
        if len(pos) and int(np.abs(d).max()) >= self.dmax - 1:
            raise _NeedDeeper
        p = self.ptab[d.astype(np.int64) + self.dmax]
        u = self.rng.random(len(pos))
        s = np.where(u < p, 1, -1).astype(np.int16)
        self.D[rows, cols] = d + s
        if self.LP is not None:
            right = s > 0
            self.LP[rows[right], cols[right]] += 1
        old = pos.copy()
        self.pos = pos + s
        return old, s

    def compact(self, keep: np.ndarray):
        self.pos = self.pos[keep]
        self.D = self.D[keep]
        if self.LP is not None:
            self.LP = self.LP[keep]


def _new_batch(w, replicas, width, dmax, seed, want_lplus=False, d_init=None):
    rng = _as_generator(seed)
    ptab = _p_table(w, dmax)
    off = width // 2
    D = np.zeros((replicas, width), dtype=np.int16)
    if d_init:
        for site, val in d_init.items():
            D[:, site + off] = val
    LP = np.zeros((replicas, width), dtype=np.int32) if want_lplus else None
    return _Batch(
        pos=np.zeros(replicas, dtype=np.int64),
        D=D,
        off=off,
        ptab=ptab,
        dmax=dmax,
        rng=rng,
        LP=LP,
    )


def final_positions(w: WeightFunction, steps: int, replicas: int, seed, want_lplus: bool = False,
                    snapshots=()):
    """Run `steps` lockstep steps; returns positions (and l+ rows if asked).

    Returns (pos, lplus, site_lo): lplus is (replicas, width) or None;
    site_lo is the site of the first l+ column.  With `snapshots`, returns
    (pos, lplus, site_lo, {k: positions at time k}).
    """
    snap_at = set(int(s) for s in snapshots)

    def run(width, dmax):
        b = _new_batch(w, replicas, width, dmax, seed, want_lplus=want_lplus)
        snaps = {}
        for t in range(1, steps + 1):
            b.step()
            if t in snap_at:
                snaps[t] = b.pos.copy()
        out = (b.pos.copy(), (None if b.LP is None else b.LP.copy()), -b.off)
        return out + (snaps,) if snap_at else out

    return _retrying(run, default_width(steps), 96)


def edge_hit_times(
    w: WeightFunction,
    edge_site: int,
    levels,
    replicas: int,
    seed,
    t_cap: int,
    capture_window=None,
    width0: int | None = None,
):
    """First times the directed edge edge_site -> edge_site+1 is crossed
    `levels[i]` times, walked in lockstep up to t_cap steps.

    Returns (times, profiles, unfinished):
      times: (replicas, len(levels)) int64, -1 where not attained by t_cap
      profiles: dict y -> l+(T_final, y) per replica (only with
        capture_window=(y_lo, y_hi); recorded when the last level is hit)
      unfinished: replicas that did not hit the last level within t_cap
    """
    levels = [int(m) for m in levels]
    if any(b <= a for a, b in zip(levels, levels[1:])) or levels[0] < 1:
        raise ValueError("levels must be strictly increasing and >= 1")
    L = len(levels)
    lev = np.array(levels, dtype=np.int64)

    def run(width, dmax):
        b = _new_batch(w, replicas, width, dmax, seed, want_lplus=capture_window is not None)
        times = np.full((replicas, L), -1, dtype=np.int64)
        prof = None
        if capture_window is not None:
            y_lo, y_hi = capture_window
            prof = np.zeros((replicas, y_hi - y_lo + 1), dtype=np.int64)
        idx = np.arange(replicas)  # original replica id per active row
        cnt = np.zeros(replicas, dtype=np.int64)
        nxt = np.zeros(replicas, dtype=np.int64)  # index into levels
        retired = np.zeros(replicas, dtype=bool)
        for t in range(1, t_cap + 1):
            old, s = b.step()
            crossed = (old == edge_site) & (s > 0)
            if crossed.any():
                cnt[crossed] += 1
                hit = crossed & (nxt < L)
                hit[hit] = cnt[hit] == lev[np.minimum(nxt[hit], L - 1)]
                if hit.any():
                    times[idx[hit], nxt[hit]] = t
                    nxt[hit] += 1
                    done = hit & (nxt == L)
                    if done.any():
                        if prof is not None:
                            cols = np.arange(y_lo, y_hi + 1) + b.off
                            prof[idx[done]] = b.LP[np.ix_(done.nonzero()[0], cols)]
                        retired |= done
                        # compact lazily: finished replicas keep stepping
                        # harmlessly until a quarter of the batch is done
                        if retired.sum() >= 0.25 * len(idx):
                            keep = ~retired
                            b.compact(keep)
                            idx, cnt, nxt = idx[keep], cnt[keep], nxt[keep]
                            retired = np.zeros(len(idx), dtype=bool)
                            if len(idx) == 0:
                                break
        return times, prof, idx[~retired].copy()

    # profiles concentrate within ~2*levels[-1] sites of the edge; start
    # narrow and let the overflow retry widen on demand
    guess = width0 or 2 * (8 * levels[-1] + abs(edge_site) + 64)
    return _retrying(run, min(guess, default_width(t_cap)), 96, max_doublings=14)


def kernel_transition_samples(
    w: WeightFunction,
    eta_state: int,
    direction: str,
    replicas: int,
    seed,
    step_cap: int = 100_000,
):
    """Observe one embedded-chain transition per replica from walk dynamics.

    The site-0 signed difference is imprinted to match `eta_state` via a
    positive-probability alternating prefix (0,+1,0,...)^k; the walk then
    runs under the step rule until its first departure from 0 in `direction`,
    and the chain value after that departure is recorded.  Only the walk rule
    and the departure bookkeeping are used - not the kernel's closed form.

    Returns (values, censored): values int64 (finished replicas), censored
    count of replicas that exceeded step_cap.
    """
    want = 1 if direction in ("+", "plus") else -1
    d0 = -eta_state if want == 1 else eta_state
    d_init = {0: d0}
    if d0 > 0:
        d_init[1] = -d0
    elif d0 < 0:
        d_init[-1] = -d0

    def run(width, dmax):
        b = _new_batch(w, replicas, width, dmax, seed, d_init=d_init)
        out = np.empty(replicas, dtype=np.int64)
        got = np.zeros(replicas, dtype=bool)
        idx = np.arange(replicas)
        retired = np.zeros(replicas, dtype=bool)
        for _ in range(step_cap):
            old, s = b.step()
            done = (old == 0) & (s == want) & ~retired
            if done.any():
                d_after = b.D[done.nonzero()[0], np.full(int(done.sum()), b.off)]
                out[idx[done]] = -d_after if want == 1 else d_after
                got[idx[done]] = True
                retired |= done
                if retired.sum() >= 0.25 * len(idx):
                    keep = ~retired
                    b.compact(keep)
                    idx = idx[keep]
                    retired = np.zeros(len(idx), dtype=bool)
                    if len(idx) == 0:
                        break
        return out[got], int((~got).sum())

    return _retrying(run, 512, max(96, 4 * abs(eta_state) + 64))
