"""Return to the origin: series sums, recurrence probability, lattices.

With u = sum_n P(S_{2n} = origin), the probability of ever coming back is
P_0 = (u - 1)/u, and the origin is persistent exactly when u diverges.
When u is finite the returns happen only finitely often almost surely
(first Borel-Cantelli lemma applied to the events {S_{2n} = 0}); that is
the operational meaning of ``classification == TRANSIENT`` below.  No
measure-theoretic objects are modelled.

Dimensions:

* 1D, any p: u = 1/|p - q| (divergent at p = 1/2), P_0 = 1 - |p - q|.
* 2D symmetric: u_{2n} = C(2n, n)^2 / 16^n ~ 1/(pi n); u diverges.
* 3D symmetric: u_{2n} = 6^(-2n) sum_{j+k<=n} (2n)!/(j!j!k!k!l!l!), l = n-j-k,
  bounded above by c n^(-3/2) with c = 3 sqrt(3)/(2 pi sqrt(pi)).  The
  series value is bracketed by an exact partial sum and the integral of
  the bound over the tail.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import TooLarge, UnsupportedDimension
from .laws import FAIR, WalkParams, _walk
from .numerics import binomial, render_exact

U3D_EXACT_CAP = 2000
BOUND_3D = 3 * math.sqrt(3) / (2 * math.pi * math.sqrt(math.pi))
DEFAULT_3D_TERMS = 1000
# 2D growth is labelled consistent when the fitted slope is within this
# relative distance of 1/pi
SLOPE_TOLERANCE_2D = 0.20


class Series(enum.Enum):
    DIVERGENT = "divergent"

    def __str__(self) -> str:
        return self.value


DIVERGENT = Series.DIVERGENT


class Classification(str, enum.Enum):
    TRANSIENT = "transient"
    PERSISTENT = "persistent"


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("bracket lo > hi")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def __contains__(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def strictly_inside(self, other: "Bracket") -> bool:
        return other.lo < self.lo and self.hi < other.hi

    def to_dict(self) -> dict:
        return {"lo": self.lo, "hi": self.hi}


@dataclass
class RecurrenceReport:
    dimension: int
    params: WalkParams | None
    u_sum: Fraction | Series | Bracket
    p_return: Fraction | Bracket
    classification: Classification
    terms: int | None = None
    evidence: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        def render(v):
            if isinstance(v, Fraction):
                return render_exact(v)
            if isinstance(v, Bracket):
                return v.to_dict()
            return str(v)

        out = {
            "dimension": self.dimension,
            "p": render_exact(self.params.p) if self.params is not None else None,
            "u_sum": render(self.u_sum),
            "p_return": render(self.p_return),
            "classification": self.classification.value,
        }
        if self.terms is not None:
            out["terms"] = self.terms
        if self.evidence:
            out["evidence"] = self.evidence
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def series_sum_u(w=None) -> Fraction | Series:
    """sum_n u_{2n} = 1/|p - q|, or DIVERGENT for the fair walk."""
    w = _walk(w)
    if w.fair:
        return DIVERGENT
    return 1 / abs(w.p - w.q)


def partial_sums_u(w, N: int) -> list[Fraction]:
    """[sum_{n=0}^{m} u_{2n} for m = 0..N], exact."""
    w = _walk(w)
    pq = w.p * w.q
    term, acc = Fraction(1), Fraction(1)
    out = [acc]
    for n in range(1, N + 1):
        term = term * 2 * (2 * n - 1) * pq / n
        acc += term
        out.append(acc)
    return out


def prob_return_origin(w=None) -> Fraction:
    """P_0 = 1 - |p - q|."""
    w = _walk(w)
    return 1 - abs(w.p - w.q)


def return_prob_from_sum(u: Fraction) -> Fraction:
    """P_0 = (u - 1)/u, equivalently u = 1/(1 - P_0)."""
    return (u - 1) / u


def u2d(n: int) -> Fraction:
    """Probability that the planar walk is back at the origin after 2n steps."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return Fraction(binomial(2 * n, n) ** 2, 16**n)


def u2d_multinomial(n: int) -> Fraction:
    """Same quantity from the loop count sum_k (2n)!/(k!k!(n-k)!(n-k)!)."""
    f = math.factorial
    loops = sum(f(2 * n) // (f(k) ** 2 * f(n - k) ** 2) for k in range(n + 1))
    return Fraction(loops, 16**n)


def _trinomial_square_sum(n: int) -> int:
    """sum over j + k <= n of (n!/(j! k! (n-j-k)!))^2, as an integer."""
    total = 0
    cj = 1
    for j in range(n + 1):
        m = n - j
        inner, ck = 0, 1
        for k in range(m + 1):
            inner += ck * ck
            ck = ck * (m - k) // (k + 1)
        total += cj * cj * inner
        cj = cj * (n - j) // (j + 1)
    return total


def u3d(n: int, *, exact: bool = True) -> Fraction | float:
    """Probability that the cubic-lattice walk is back at the origin after 2n steps.

    Exact mode sums (2n)!/(j!j!k!k!l!l!) over j + k + l = n with integers
    and divides once; it is capped at ``U3D_EXACT_CAP``.  ``exact=False``
    evaluates the same double sum with log-gamma in floating point.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if exact:
        if n > U3D_EXACT_CAP:
            raise TooLarge(f"exact u3d capped at n={U3D_EXACT_CAP}; pass exact=False")
        return Fraction(math.comb(2 * n, n) * _trinomial_square_sum(n), 36**n)
    return _u3d_float(n)


def _u3d_float(n: int) -> float:
    from math import lgamma

    j = np.arange(n + 1)
    lg = np.array([lgamma(i + 1) for i in range(n + 1)])
    jj, kk = np.meshgrid(j, j, indexing="ij")
    ll = n - jj - kk
    mask = ll >= 0
    log_terms = lgamma(n + 1) - lg[jj[mask]] - lg[kk[mask]] - lg[ll[mask]] - n * math.log(3)
    # sum of squared trinomial probabilities, then the 1D factor u_{2n}(1/2)
    s = np.exp(2 * log_terms).sum()
    log_u1 = lgamma(2 * n + 1) - 2 * lgamma(n + 1) - 2 * n * math.log(2)
    return float(math.exp(log_u1) * s)


def u3d_sequence(N: int) -> list[Fraction]:
    """[u3d(0), ..., u3d(N)] in O(N) exact steps.

    Uses a(n) = sum_{j+k+l=n} (n!/(j!k!l!))^2, which satisfies
    (n+1)^2 a(n+1) = (10n^2 + 10n + 3) a(n) - 9 n^2 a(n-1),
    together with u3d(n) = C(2n, n) a(n) / 36^n.
    """
    a = [1, 3]
    for n in range(1, N):
        nxt, rem = divmod((10 * n * n + 10 * n + 3) * a[n] - 9 * n * n * a[n - 1], (n + 1) ** 2)
        assert rem == 0
        a.append(nxt)
    out = []
    central = 1
    for n in range(N + 1):
        if n:
            central = central * 2 * (2 * n - 1) // n
        out.append(Fraction(central * a[n], 36**n))
    return out


def u3d_bound(n: int) -> float:
    """c n^(-3/2), c = 3 sqrt(3)/(2 pi sqrt(pi)) ~ 0.46658."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return BOUND_3D * n**-1.5


def classify(dimension: int, w=None, *, terms: int = DEFAULT_3D_TERMS) -> RecurrenceReport:
    """Transient/persistent classification of the origin.

    Dimensions 2 and 3 are the symmetric lattice walks; ``w`` must be
    omitted (or fair) there.
    """
    if dimension == 1:
        w = _walk(w)
        u = series_sum_u(w)
        if u is DIVERGENT:
            return RecurrenceReport(1, w, DIVERGENT, Fraction(1), Classification.PERSISTENT)
        return RecurrenceReport(1, w, u, return_prob_from_sum(u), Classification.TRANSIENT)
    if dimension in (2, 3):
        if w is not None and _walk(w) != FAIR:
            raise UnsupportedDimension(f"dimension {dimension} supports the symmetric walk only")
        return recurrence_bracket(dimension, terms)
    raise UnsupportedDimension(f"dimension {dimension} not in {{1, 2, 3}}")


def _fit_log_slope(partial: list[float], lo: int = 10) -> float:
    n = np.arange(lo, len(partial))
    y = np.asarray(partial[lo:])
    slope, _ = np.polyfit(np.log(n), y, 1)
    return float(slope)


def recurrence_bracket(dimension: int, terms: int) -> RecurrenceReport:
    """Finite-terms evidence for the 2D/3D classification.

    3D: u lies in [S_N, S_N + 2c/sqrt(N)], where S_N = sum_{n<=N} u3d(n)
    is exact and the upper tail integrates the c n^(-3/2) bound from N to
    infinity.  The bracket maps monotonically onto P_0 = (u - 1)/u.

    2D: reports the partial sum and the fitted slope of partial sums
    against ln n; the classification itself is the theorem's, not the fit's.
    """
    if terms < 10:
        raise ValueError("terms must be >= 10")
    if dimension == 3:
        seq = u3d_sequence(terms)
        partial = sum(seq, Fraction(0))
        lo = float(partial)
        hi = lo + 2 * BOUND_3D / math.sqrt(terms)
        u = Bracket(lo, hi)
        p0 = Bracket((lo - 1) / lo, (hi - 1) / hi)
        return RecurrenceReport(
            3, None, u, p0, Classification.TRANSIENT, terms=terms,
            evidence={"partial_sum": lo, "tail_bound": hi - lo},
        )
    if dimension == 2:
        term = Fraction(1)
        partial = [1.0]
        acc = Fraction(1)
        for n in range(1, terms + 1):
            ratio = Fraction(2 * n - 1, 2 * n)
            term = term * ratio * ratio
            acc += term
            partial.append(float(acc))
        slope = _fit_log_slope(partial)
        consistent = abs(slope * math.pi - 1) <= SLOPE_TOLERANCE_2D
        return RecurrenceReport(
            2, None, DIVERGENT, Fraction(1), Classification.PERSISTENT, terms=terms,
            evidence={
                "partial_sum": partial[-1],
                "log_slope": slope,
                "expected_slope": 1 / math.pi,
                "growth_consistent": consistent,
            },
        )
    raise UnsupportedDimension(f"bracket defined for dimensions 2 and 3, got {dimension}")
