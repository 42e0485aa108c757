"""Distribution laws of the simple random walk.

All exact quantities are Fractions.  Laws that are only established for
the fair coin (no-return, non-negativity, first passage through -1, the
lead-time and return-count laws) take ``p`` for symmetry with the biased
laws but refuse anything other than 1/2.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from datetime import timedelta
from fractions import Fraction

from .errors import BiasedUnsupported, DomainRange, IndexRange
from .numerics import DEFAULT_PRECISION, HALF, as_prob, binomial, render_exact, round_half_even


@dataclass(frozen=True)
class WalkParams:
    """Up-step probability ``p``; ``q`` is always derived as ``1 - p``."""

    p: Fraction = HALF

    def __post_init__(self):
        object.__setattr__(self, "p", as_prob(self.p))

    @property
    def q(self) -> Fraction:
        return 1 - self.p

    @property
    def fair(self) -> bool:
        return self.p == HALF


FAIR = WalkParams(HALF)


def _walk(w) -> WalkParams:
    if w is None:
        return FAIR
    if isinstance(w, WalkParams):
        return w
    return WalkParams(w)


def _require_fair(w, law: str) -> None:
    w = _walk(w)
    if not w.fair:
        raise BiasedUnsupported(f"{law} is only established for the fair walk (p=1/2), got p={w.p}")


@dataclass
class LawTable:
    """Rows of (index, exact value) with a fixed-point rendering."""

    label: str
    rows: list[tuple[int, Fraction]] = field(default_factory=list)
    precision: int = DEFAULT_PRECISION

    def __post_init__(self):
        idx = [i for i, _ in self.rows]
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValueError("table indices must be strictly increasing")

    def decimal(self, index: int) -> float:
        return float(round_half_even(self[index], self.precision))

    def exact_values(self) -> list[Fraction]:
        return [v for _, v in self.rows]

    def total(self) -> Fraction:
        return sum(self.exact_values(), Fraction(0))

    def __getitem__(self, index: int) -> Fraction:
        for i, v in self.rows:
            if i == index:
                return v
        raise KeyError(index)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "rows": [
                {"index": i, "exact": render_exact(v), "decimal": float(round_half_even(v, self.precision))}
                for i, v in self.rows
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["index", "exact", "decimal"])
        for i, v in self.rows:
            writer.writerow([i, render_exact(v), f"{round_half_even(v, self.precision):.{self.precision}f}"])
        return buf.getvalue()


def u2n(n: int, w=None) -> Fraction:
    """P(S_{2n} = 0) = C(2n, n) p^n q^n."""
    if n < 0:
        raise ValueError("n must be non-negative")
    w = _walk(w)
    return binomial(2 * n, n) * (w.p * w.q) ** n


def fair_u_sequence(n: int) -> list[Fraction]:
    """[u_0, u_2, ..., u_{2n}] for p = 1/2 via u_{2k} = u_{2k-2} (2k-1)/(2k)."""
    out = [Fraction(1)]
    for k in range(1, n + 1):
        out.append(out[-1] * Fraction(2 * k - 1, 2 * k))
    return out


def first_return_prob(n: int, w=None) -> Fraction:
    """Probability that the first return to 0 happens at time 2n (= u_{2n}/(2n-1))."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return u2n(n, w) / (2 * n - 1)


def no_return_prob(n: int, p=HALF) -> Fraction:
    """P(S_1 != 0, ..., S_{2n} != 0) for the fair walk."""
    _require_fair(p, "no_return_prob")
    if n < 1:
        raise ValueError("n must be >= 1")
    return u2n(n, FAIR)


def nonnegative_prob(n: int, p=HALF) -> Fraction:
    """P(S_1 >= 0, ..., S_{2n} >= 0) for the fair walk."""
    _require_fair(p, "nonnegative_prob")
    if n < 1:
        raise ValueError("n must be >= 1")
    return u2n(n, FAIR)


def first_passage_minus1_prob(n: int, p=HALF) -> Fraction:
    """Probability that -1 is first hit at time 2n-1 (fair walk)."""
    _require_fair(p, "first_passage_minus1_prob")
    if n < 1:
        raise ValueError("n must be >= 1")
    return Fraction(binomial(2 * n - 2, n - 1), n * 2 ** (2 * n - 1))


def lead_time_pmf(n: int, p=HALF, precision: int = DEFAULT_PRECISION) -> LawTable:
    """p_{2k,2n} = u_{2k} u_{2n-2k} for k = 0..n.

    Row ``k`` is the probability of spending exactly 2k of the 2n time
    units on the positive side.
    """
    _require_fair(p, "lead_time_pmf")
    if n < 1:
        raise ValueError("n must be >= 1")
    u = fair_u_sequence(n)
    rows = [(k, u[k] * u[n - k]) for k in range(n + 1)]
    return LawTable(f"lead_time_pmf(2n={2 * n})", rows, precision)


def lead_time_cdf_table(n: int, p=HALF, precision: int = DEFAULT_PRECISION) -> LawTable:
    pmf = lead_time_pmf(n, p, precision)
    acc = Fraction(0)
    rows = []
    for k, v in pmf.rows:
        acc += v
        rows.append((k, acc))
    return LawTable(f"lead_time_cdf(2n={2 * n})", rows, precision)


def lead_time_cdf(n: int, alpha: int, p=HALF) -> Fraction:
    """P(2k <= 2 alpha): time on the positive side is at most 2 alpha."""
    _require_fair(p, "lead_time_cdf")
    if not 0 <= alpha <= n:
        raise IndexRange(f"alpha={alpha} outside [0, {n}]")
    u = fair_u_sequence(n)
    return sum((u[k] * u[n - k] for k in range(alpha + 1)), Fraction(0))


def arcsine_cdf(alpha_over_n: float) -> float:
    """(2/pi) arcsin(sqrt(x)), the limiting lead-fraction law."""
    x = float(alpha_over_n)
    if not 0.0 <= x <= 1.0:
        raise DomainRange(f"{x} outside [0, 1]")
    return 2.0 / math.pi * math.asin(math.sqrt(x))


def lead_fraction(prob: float) -> float:
    """Fraction x with (4/pi) arcsin(sqrt(x)) = prob, i.e. sin^2(pi prob / 4)."""
    prob = float(prob)
    if not 0.0 < prob < 1.0:
        raise DomainRange(f"probability {prob} outside (0, 1)")
    return math.sin(math.pi * prob / 4.0) ** 2


def lead_fraction_quantile(prob: float, horizon: timedelta = timedelta(days=365)) -> timedelta:
    """Longest lead the less fortunate player holds, with probability ``prob``."""
    if horizon <= timedelta(0):
        raise DomainRange("horizon must be positive")
    return horizon * lead_fraction(prob)


def format_duration(d: timedelta, places: int = 1) -> str:
    """Days when at least one day, otherwise hours: ``'53.5 d'``, ``'13.5 h'``."""
    days = d / timedelta(days=1)
    if days >= 1:
        return f"{days:.{places}f} d"
    return f"{d / timedelta(hours=1):.{places}f} h"


def return_count_pmf(r: int, n: int, p=HALF) -> Fraction:
    """Probability of exactly r returns to 0 within 2n steps (fair walk)."""
    _require_fair(p, "return_count_pmf")
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0 <= r <= n:
        raise IndexRange(f"r={r} outside [0, {n}]")
    m = 2 * n - r
    return Fraction(binomial(m, n), 2**m)


def return_count_table(n: int, p=HALF, precision: int = DEFAULT_PRECISION) -> LawTable:
    rows = [(r, return_count_pmf(r, n, p)) for r in range(n + 1)]
    return LawTable(f"return_count_pmf(2n={2 * n})", rows, precision)
