"""Two-barrier absorption ("ruin") for the walk started at ``start``.

The walk is absorbed at +A (win) or -B (ruin).  Closed forms:

* fair walk:   P(win) = (B+k)/(A+B),  E[tau] = (A-k)(B+k)
* biased walk: P(win) = (1 - rho^B)/(1 - rho^(A+B)) with rho = q/p,
               E[tau] = ((A+B) P(win) - B) / (p - q)

rho = 1 is detected by exact equality on Fractions, never by a float
threshold.  ``ruin_biased_float`` is an approximate log-space path for
barriers too wide for exact powers to be practical.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import DegenerateP, NotBiased, NotUnbiased, RhoOne, StartUnsupported
from .numerics import DEFAULT_PRECISION, HALF, as_fraction, as_prob, render_exact, round_half_even, to_decimal


@dataclass(frozen=True)
class RuinSpec:
    A: int
    B: int
    p: Fraction = HALF
    start: int = 0

    def __post_init__(self):
        if self.A <= 0 or self.B <= 0:
            raise ValueError("barriers A and B must be positive")
        if not -self.B <= self.start <= self.A:
            raise ValueError(f"start={self.start} outside [-B, A] = [{-self.B}, {self.A}]")
        object.__setattr__(self, "p", as_prob(self.p))

    @property
    def q(self) -> Fraction:
        return 1 - self.p

    @property
    def rho(self) -> Fraction:
        return self.q / self.p


@dataclass(frozen=True)
class RuinResult:
    prob_win: Fraction
    prob_ruin: Fraction
    expected_duration: Fraction

    def __post_init__(self):
        if self.prob_win + self.prob_ruin != 1:
            raise ArithmeticError("absorption probabilities must sum to 1")

    def to_dict(self, precision: int = DEFAULT_PRECISION) -> dict:
        return {
            "prob_win": render_exact(self.prob_win),
            "prob_ruin": render_exact(self.prob_ruin),
            "expected_duration": render_exact(self.expected_duration),
            "decimal": {
                "prob_win": float(round_half_even(self.prob_win, precision)),
                "prob_ruin": float(round_half_even(self.prob_ruin, precision)),
                "expected_duration": float(round_half_even(self.expected_duration, precision)),
            },
        }

    def to_json(self, precision: int = DEFAULT_PRECISION) -> str:
        return json.dumps(self.to_dict(precision), indent=2)


def ruin_unbiased(spec: RuinSpec) -> RuinResult:
    if spec.p != HALF:
        raise NotUnbiased(f"ruin_unbiased needs p = 1/2, got {spec.p}")
    A, B, k = spec.A, spec.B, spec.start
    return RuinResult(
        prob_win=Fraction(B + k, A + B),
        prob_ruin=Fraction(A - k, A + B),
        expected_duration=Fraction((A - k) * (B + k)),
    )


def ruin_degenerate(spec: RuinSpec) -> RuinResult:
    """Deterministic walks: p = 1 climbs to A, p = 0 falls to -B."""
    k = spec.start
    if spec.p == 1:
        return RuinResult(Fraction(1), Fraction(0), Fraction(spec.A - k))
    if spec.p == 0:
        return RuinResult(Fraction(0), Fraction(1), Fraction(spec.B + k))
    raise ValueError(f"p={spec.p} is not degenerate")


def _win_probability(rho: Fraction, A: int, B: int) -> Fraction:
    return (1 - rho**B) / (1 - rho ** (A + B))


def ruin_biased(spec: RuinSpec) -> RuinResult:
    if spec.p in (0, 1):
        raise DegenerateP(f"p={spec.p}: use ruin_degenerate")
    if spec.p == HALF:
        return ruin_unbiased(spec)
    if spec.start != 0:
        raise StartUnsupported("a start offset is only supported for the unbiased walk")
    A, B, p, q = spec.A, spec.B, spec.p, spec.q
    win = _win_probability(q / p, A, B)
    ruin = (1 - (p / q) ** A) / (1 - (p / q) ** (A + B))
    duration = (B - (A + B) * win) / (q - p)
    return RuinResult(win, ruin, duration)


def solve_ruin(spec: RuinSpec) -> RuinResult:
    """Dispatch to the degenerate, unbiased or biased closed form."""
    if spec.p in (0, 1):
        return ruin_degenerate(spec)
    if spec.p == HALF:
        return ruin_unbiased(spec)
    return ruin_biased(spec)


def symmetric_duration(A: int, rho) -> Fraction:
    """E[tau] for A = B as a function of rho; the rho = 1 value is A**2."""
    rho = as_fraction(rho)
    if rho <= 0:
        raise ValueError("rho must be positive")
    if rho == 1:
        return Fraction(A * A)
    return A * (1 + rho) / (1 - rho) * (1 - rho**A) / (1 + rho**A)


def ruin_symmetric(A: int, rho) -> RuinResult:
    """Symmetric barriers A = B written in terms of rho = q/p."""
    rho = as_fraction(rho)
    if rho <= 0:
        raise ValueError("rho must be positive")
    if rho == 1:
        raise RhoOne("rho = 1 is the unbiased walk; use ruin_unbiased")
    if A <= 0:
        raise ValueError("A must be positive")
    return RuinResult(
        prob_win=1 / (1 + rho**A),
        prob_ruin=1 / (1 + rho ** (-A)),
        expected_duration=symmetric_duration(A, rho),
    )


def p_from_rho(rho) -> Fraction:
    """Inverse of rho = q/p = (1-p)/p."""
    rho = as_fraction(rho)
    return 1 / (1 + rho)


def escape_probability(p, N: int | None = None, *, infinite: bool = False) -> Fraction:
    """P(reach N before 0 | S_0 = 1) for the biased walk.

    With ``infinite=True`` the upper barrier is removed and the limit
    value is returned: 1 - q/p when p > q, else 0.
    """
    p = as_prob(p)
    if not 0 < p < 1:
        raise DegenerateP(f"p={p} must lie strictly in (0, 1)")
    if p == HALF:
        raise NotBiased("p = 1/2: the fair value is 1/N (see escape_probability_fair)")
    q = 1 - p
    if infinite:
        return 1 - q / p if p > q else Fraction(0)
    if N is None or N < 1:
        raise ValueError("N must be >= 1")
    rho = q / p
    return (1 - rho) / (1 - rho**N)


def escape_probability_fair(N: int) -> Fraction:
    if N < 1:
        raise ValueError("N must be >= 1")
    return Fraction(1, N)


def hit_zero_probability(p, start: int) -> Fraction:
    """P(ever reach 0) from S_0 = +1 or -1 with no opposite barrier."""
    p = as_prob(p)
    if not 0 < p < 1:
        raise DegenerateP(f"p={p} must lie strictly in (0, 1)")
    q = 1 - p
    if start == 1:
        return min(Fraction(1), q / p)
    if start == -1:
        return min(Fraction(1), p / q)
    raise ValueError("start must be +1 or -1")


def ruin_biased_float(A: int, B: int, p: float) -> tuple[float, float, float]:
    """Approximate (prob_win, prob_ruin, expected_duration) in log space.

    Stable for barriers in the thousands where rho**(A+B) would overflow.
    """
    if not 0.0 < p < 1.0:
        raise DegenerateP("p must lie strictly in (0, 1)")
    q = 1.0 - p
    if p == q:
        return B / (A + B), A / (A + B), float(A * B)
    log_rho = math.log(q) - math.log(p)
    if log_rho < 0:
        win = math.expm1(B * log_rho) / math.expm1((A + B) * log_rho)
    else:
        win = math.exp(-A * log_rho) * math.expm1(-B * log_rho) / math.expm1(-(A + B) * log_rho)
    duration = ((A + B) * win - B) / (p - q)
    return win, 1.0 - win, duration


def sweep_csv(rows: Iterable[tuple[object, RuinResult]], precision: int = DEFAULT_PRECISION) -> str:
    """CSV for parameter sweeps: ``param,prob_win,prob_ruin,duration``."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["param", "prob_win", "prob_ruin", "duration"])
    for param, res in rows:
        writer.writerow([
            param,
            to_decimal(res.prob_win, precision),
            to_decimal(res.prob_ruin, precision),
            to_decimal(res.expected_duration, precision),
        ])
    return buf.getvalue()
