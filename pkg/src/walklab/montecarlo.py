"""Seeded Monte Carlo estimates for the exact laws.

Randomness is counter-based: the uniform 64-bit word driving step ``k``
(0-based) of trial ``t`` is word ``k % 4`` of

    philox4x64(counter=(k // 4, t, 0, 0), key=(seed, STREAM_TAG))

so every draw is a pure function of (seed, trial, step).  A step is +1
when that word is below floor(p * 2**64), computed exactly from the
rational p.  Trials are processed in fixed-size chunks; ``streams`` only
decides how many chunks run concurrently, never which numbers they see,
and per-trial outcomes are reassembled in trial order before reduction.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator

import numpy as np

from ._philox import philox4x64
from .laws import WalkParams, _walk
from .numerics import HALF
from .paths import Path
from .ruin import RuinSpec

STREAM_TAG = 0x57414C4B4C4142  # "WALKLAB"
CHUNK = 1 << 16
DEFAULT_SEED = 42
FALLBACK_SEEDS = (7, 1234)
STEP_CAP = 10**7
Z95 = 1.96


@dataclass(frozen=True)
class SimConfig:
    seed: int = DEFAULT_SEED
    trials: int = 100_000
    streams: int = 1

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.trials < 1:
            raise ValueError("trials must be positive")
        if self.streams < 1:
            raise ValueError("streams must be positive")


@dataclass(frozen=True)
class Estimate:
    mean: float
    stderr: float
    trials: int

    @property
    def ci95(self) -> tuple[float, float]:
        return self.mean - Z95 * self.stderr, self.mean + Z95 * self.stderr

    def z_score(self, exact: float) -> float:
        diff = self.mean - float(exact)
        if self.stderr == 0:
            return 0.0 if diff == 0 else math.copysign(math.inf, diff)
        return diff / self.stderr

    def within(self, exact: float, sigmas: float = 3.0) -> bool:
        return abs(self.z_score(exact)) <= sigmas

    def to_dict(self) -> dict:
        lo, hi = self.ci95
        return {"mean": self.mean, "stderr": self.stderr, "ci95": [lo, hi], "trials": self.trials}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def csv_row(self) -> list:
        lo, hi = self.ci95
        return [repr(self.mean), repr(self.stderr), repr(lo), repr(hi), self.trials]


ESTIMATE_CSV_HEADER = ["mean", "stderr", "lo", "hi", "trials"]


def estimate_from(values: np.ndarray) -> Estimate:
    values = np.asarray(values, dtype=np.float64)
    n = values.size
    if n == 0:
        raise ValueError("no completed trials to estimate from")
    mean = float(values.sum() / n)  # numpy pairwise summation, fixed order
    if n == 1:
        return Estimate(mean, 0.0, 1)
    var = float(((values - mean) ** 2).sum() / (n - 1))
    return Estimate(mean, math.sqrt(var / n), n)


@dataclass
class EstimateTable:
    label: str
    rows: list[tuple[int, Estimate]] = field(default_factory=list)

    def __getitem__(self, index: int) -> Estimate:
        for i, e in self.rows:
            if i == index:
                return e
        raise KeyError(index)

    def to_dict(self) -> dict:
        return {"label": self.label, "rows": [{"index": i, **e.to_dict()} for i, e in self.rows]}

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["index", *ESTIMATE_CSV_HEADER])
        for i, e in self.rows:
            writer.writerow([i, *e.csv_row()])
        return buf.getvalue()


# -- raw draws ---------------------------------------------------------------

def up_threshold(p: Fraction) -> int:
    """floor(p * 2**64); a word w gives an up-step iff w < threshold."""
    p = Fraction(p)
    return (p.numerator << 64) // p.denominator


def _up(words: np.ndarray, threshold: int) -> np.ndarray:
    if threshold >= 1 << 64:
        return np.ones(words.shape, dtype=bool)
    return words < np.uint64(threshold)


def block_words(seed: int, block: int, trials: np.ndarray) -> np.ndarray:
    """Shape (4, len(trials)) uint64 words for steps 4*block .. 4*block+3."""
    out = philox4x64(np.uint64(block), trials.astype(np.uint64), 0, 0, np.uint64(seed), np.uint64(STREAM_TAG))
    return np.stack(out)


def step_matrix(seed: int, p: Fraction, trials: np.ndarray, steps: int) -> np.ndarray:
    """int8 matrix (len(trials), steps) of +1/-1 steps."""
    thr = up_threshold(p)
    nblocks = -(-steps // 4)
    words = np.empty((len(trials), nblocks * 4), dtype=np.uint64)
    for b in range(nblocks):
        words[:, 4 * b:4 * b + 4] = block_words(seed, b, trials).T
    up = _up(words[:, :steps], thr)
    return np.where(up, 1, -1).astype(np.int8)


def _chunks(trials: int) -> list[np.ndarray]:
    return [np.arange(s, min(s + CHUNK, trials), dtype=np.uint64) for s in range(0, trials, CHUNK)]


def _map_chunks(cfg: SimConfig, fn: Callable[[np.ndarray], object]) -> list:
    chunks = _chunks(cfg.trials)
    if cfg.streams == 1 or len(chunks) == 1:
        return [fn(c) for c in chunks]
    with ThreadPoolExecutor(max_workers=cfg.streams) as pool:
        return list(pool.map(fn, chunks))


def _prefix_sums(cfg: SimConfig, w: WalkParams, steps: int) -> Callable[[np.ndarray], np.ndarray]:
    def run(ids):
        m = step_matrix(cfg.seed, w.p, ids, steps).astype(np.int32)
        sums = np.zeros((len(ids), steps + 1), dtype=np.int32)
        np.cumsum(m, axis=1, out=sums[:, 1:])
        return sums
    return run


def simulate_walk(cfg: SimConfig, w, steps: int) -> Iterator[Path]:
    """Yield ``cfg.trials`` independent paths of length ``steps`` in trial order."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    w = _walk(w)
    for ids in _chunks(cfg.trials):
        for row in step_matrix(cfg.seed, w.p, ids, steps):
            yield Path(tuple(int(s) for s in row))


def _indicator_estimate(cfg: SimConfig, w: WalkParams, steps: int, event: Callable[[np.ndarray], np.ndarray]) -> Estimate:
    sums_of = _prefix_sums(cfg, w, steps)
    parts = _map_chunks(cfg, lambda ids: event(sums_of(ids)))
    return estimate_from(np.concatenate(parts).astype(np.float64))


def estimate_event(cfg: SimConfig, w, steps: int, event: Callable[[np.ndarray], np.ndarray]) -> Estimate:
    """Probability of ``event``, a vectorised predicate over prefix-sum rows."""
    return _indicator_estimate(cfg, _walk(w), steps, event)


# -- targets -----------------------------------------------------------------

@dataclass(frozen=True)
class RuinEstimate:
    prob_win: Estimate
    duration: Estimate
    capped: int

    @property
    def capped_fraction(self) -> float:
        return self.capped / (self.prob_win.trials + self.capped)


def _ruin_chunk(cfg: SimConfig, spec: RuinSpec, step_cap: int):
    thr = up_threshold(spec.p)

    def run(ids):
        n = len(ids)
        pos = np.full(n, spec.start, dtype=np.int64)
        dur = np.zeros(n, dtype=np.int64)
        capped = np.zeros(n, dtype=bool)
        active = np.flatnonzero((pos < spec.A) & (pos > -spec.B))
        words = None
        t = 0
        while active.size:
            if t >= step_cap:
                capped[active] = True
                break
            if t % 4 == 0:
                words = block_words(cfg.seed, t // 4, ids[active])
            step = np.where(_up(words[t % 4], thr), 1, -1)
            pos[active] += step
            t += 1
            p_act = pos[active]
            done = (p_act >= spec.A) | (p_act <= -spec.B)
            dur[active[done]] = t
            keep = ~done
            active = active[keep]
            words = words[:, keep]
        return pos >= spec.A, dur, capped

    return run


def estimate_ruin(cfg: SimConfig, spec: RuinSpec, step_cap: int = STEP_CAP) -> RuinEstimate:
    """Run walks to absorption at +A / -B; capped trials are excluded and counted."""
    parts = _map_chunks(cfg, _ruin_chunk(cfg, spec, step_cap))
    won = np.concatenate([p[0] for p in parts])
    dur = np.concatenate([p[1] for p in parts])
    capped = np.concatenate([p[2] for p in parts])
    ok = ~capped
    n_capped = int(capped.sum())
    if not ok.any():
        nan = Estimate(math.nan, math.nan, 0)
        return RuinEstimate(nan, nan, n_capped)
    return RuinEstimate(
        estimate_from(won[ok].astype(np.float64)),
        estimate_from(dur[ok].astype(np.float64)),
        n_capped,
    )


def positive_side_counts(sums: np.ndarray) -> np.ndarray:
    """Number of sides k with S_{k-1} > 0 or S_k > 0, per row."""
    pos = sums > 0
    return (pos[:, :-1] | pos[:, 1:]).sum(axis=1)


def estimate_lead_time(cfg: SimConfig, n: int) -> EstimateTable:
    """Empirical pmf of the time (2k) spent on the positive side in 2n fair steps."""
    if n < 1:
        raise ValueError("n must be >= 1")
    sums_of = _prefix_sums(cfg, WalkParams(HALF), 2 * n)
    counts = np.concatenate(_map_chunks(cfg, lambda ids: positive_side_counts(sums_of(ids))))
    rows = [(k, estimate_from((counts == 2 * k).astype(np.float64))) for k in range(n + 1)]
    return EstimateTable(f"lead_time_estimate(2n={2 * n})", rows)


def zero_counts(sums: np.ndarray) -> np.ndarray:
    return (sums[:, 1:] == 0).sum(axis=1)


def estimate_return_counts(cfg: SimConfig, n: int, r: int) -> Estimate:
    """Empirical P(exactly r returns to 0 within 2n fair steps)."""
    if n < 1 or r < 0:
        raise ValueError("need n >= 1 and r >= 0")
    return _indicator_estimate(cfg, WalkParams(HALF), 2 * n, lambda s: zero_counts(s) == r)


def estimate_return_count_table(cfg: SimConfig, n: int) -> EstimateTable:
    """Empirical pmf of the number of returns to 0 within 2n fair steps, r = 0..n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    sums_of = _prefix_sums(cfg, WalkParams(HALF), 2 * n)
    counts = np.concatenate(_map_chunks(cfg, lambda ids: zero_counts(sums_of(ids))))
    rows = [(r, estimate_from((counts == r).astype(np.float64))) for r in range(n + 1)]
    return EstimateTable(f"return_count_estimate(2n={2 * n})", rows)


def first_return_event(n: int) -> Callable[[np.ndarray], np.ndarray]:
    def event(sums):
        inner = sums[:, 1:2 * n]
        return (sums[:, 2 * n] == 0) & np.all(inner != 0, axis=1)
    return event


def estimate_first_return(cfg: SimConfig, n: int, w=None) -> Estimate:
    """Empirical P(first return to 0 at time 2n)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return _indicator_estimate(cfg, _walk(w), 2 * n, first_return_event(n))


def estimate_return_at(cfg: SimConfig, n: int, w=None) -> Estimate:
    """Empirical P(S_{2n} = 0)."""
    return _indicator_estimate(cfg, _walk(w), 2 * n, lambda s: s[:, 2 * n] == 0)
