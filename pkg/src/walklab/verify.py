"""Oracle-equivalence and identity battery behind ``walklab verify``.

Each check compares a closed form against an independent route (path
enumeration, Pascal/Catalan recurrences, first-step linear systems,
lattice-walk enumeration).  ``run_battery(inject_fault=name)`` perturbs
one check's reference value so the harness can be seen to fail.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import laws, oracles, paths, recurrence, ruin
from .montecarlo import (
    SimConfig,
    estimate_first_return,
    estimate_lead_time,
    estimate_return_at,
    estimate_return_counts,
    estimate_ruin,
)
from .numerics import HALF, binomial, generalized_binomial

ORACLE_MAX_N = 7
GROUPS = ("numerics", "ballot", "laws", "ruin", "recurrence", "montecarlo")
DEFAULT_GROUPS = GROUPS[:-1]


@dataclass
class CheckResult:
    name: str
    group: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0

    def to_dict(self) -> dict:
        return {"name": self.name, "group": self.group, "passed": self.passed,
                "detail": self.detail, "seconds": round(self.seconds, 4)}


# each check yields (label, computed, reference) triples
Check = Callable[[], list[tuple[str, object, object]]]
_REGISTRY: list[tuple[str, str, Check]] = []


def check(group: str, name: str):
    def deco(fn: Check) -> Check:
        _REGISTRY.append((group, name, fn))
        return fn
    return deco


def check_names(group: str | None = None) -> list[str]:
    return [name for g, name, _ in _REGISTRY if group is None or g == group]


# -- numerics ----------------------------------------------------------------

@check("numerics", "pascal")
def _pascal():
    return [(f"row {n}", [binomial(n, k) for k in range(n + 1)], oracles.pascal_row(n)) for n in range(65)]


@check("numerics", "generalized-binomial")
def _gen_binomial():
    return [(f"n={n}", Fraction(binomial(2 * n, n)), generalized_binomial(Fraction(-1, 2), n) * (-4) ** n)
            for n in range(31)]


# -- ballot / paths ------------------------------------------------------------

def _reachable(xmax: int):
    for x in range(1, xmax + 1):
        for y in range(-x, x + 1, 2):
            yield x, y


@check("ballot", "path-counts")
def _path_counts():
    n2 = 2 * ORACLE_MAX_N
    return [(f"N({x},{y})", paths.count_paths_to(x, y), paths.count_enumerated(x, oracles.ends_at(y)))
            for x, y in _reachable(n2)]


@check("ballot", "ballot-theorem")
def _ballot():
    n2 = 2 * ORACLE_MAX_N
    return [(f"({x},{y})", paths.count_always_positive(x, y),
             paths.count_enumerated(x, oracles.always_positive_to(y)))
            for x, y in _reachable(n2) if y > 0]


@check("ballot", "reversal-duality")
def _reversal():
    out = []
    for x, y in _reachable(2 * ORACLE_MAX_N):
        if y <= 0:
            continue
        dual = paths.enumerate_paths(x, oracles.below_final(y))
        positive = {str(pth) for pth in paths.enumerate_paths(x, oracles.always_positive_to(y))}
        out.append((f"({x},{y}) bijection", {str(paths.reverse_path(d)) for d in dual}, positive))
    return out


@check("ballot", "reflection")
def _reflection():
    out = []
    for bx in range(1, 13):
        for ax in range(bx):
            for ay in range(1, ax + 2):
                for by in range(1, bx + 2):
                    if (bx - ax - (by - ay)) % 2:
                        continue
                    t, m = paths.count_touching_reflection(paths.LatticePoint(ax, ay), paths.LatticePoint(bx, by))
                    out.append((f"A=({ax},{ay}) B=({bx},{by})", t, m))
    return out


@check("ballot", "loops")
def _loops():
    out = []
    for n in range(1, ORACLE_MAX_N + 1):
        out.append((f"L nonneg n={n}", paths.count_loops(n, "nonnegative"),
                    paths.count_enumerated(2 * n, oracles.nonneg_loop)))
        out.append((f"L positive n={n}", paths.count_loops(n, "strictly-positive"),
                    paths.count_enumerated(2 * n, oracles.positive_loop)))
    for n in range(1, 11):
        out.append((f"Catalan n={n}", paths.count_loops(n), oracles.catalan_recurrence(n)))
    return out


# -- fair and biased laws --------------------------------------------------------

@check("laws", "u2n")
def _u2n():
    out = []
    for p in (HALF, Fraction(1, 3), Fraction(2, 5)):
        for n in range(ORACLE_MAX_N + 1):
            out.append((f"u({2 * n}) p={p}", laws.u2n(n, p), oracles.enumerated_probability(2 * n, oracles.ends_at(0), p)))
    return out


@check("laws", "no-return")
def _no_return():
    return [(f"n={n}", laws.no_return_prob(n), oracles.enumerated_probability(2 * n, oracles.never_zero))
            for n in range(1, ORACLE_MAX_N + 1)]


@check("laws", "nonnegative")
def _nonneg():
    return [(f"n={n}", laws.nonnegative_prob(n), oracles.enumerated_probability(2 * n, oracles.never_negative))
            for n in range(1, ORACLE_MAX_N + 1)]


@check("laws", "first-return")
def _first_return():
    out = []
    for p in (HALF, Fraction(1, 3), Fraction(2, 5)):
        for n in range(1, ORACLE_MAX_N + 1):
            out.append((f"n={n} p={p}", laws.first_return_prob(n, p),
                        oracles.enumerated_probability(2 * n, oracles.first_return_at_end, p)))
    return out


@check("laws", "first-passage-minus1")
def _first_passage():
    return [(f"n={n}", laws.first_passage_minus1_prob(n),
             oracles.enumerated_probability(2 * n - 1, oracles.first_passage_minus1_at_end))
            for n in range(1, ORACLE_MAX_N + 1)]


@check("laws", "lead-time-pmf")
def _lead_time():
    return [(f"2n={2 * n}", laws.lead_time_pmf(n).exact_values(), oracles.lead_time_pmf_enumerated(n))
            for n in range(1, ORACLE_MAX_N + 1)]


@check("laws", "return-count-pmf")
def _return_counts():
    return [(f"2n={2 * n}", [laws.return_count_pmf(r, n) for r in range(n + 1)], oracles.return_count_pmf_enumerated(n))
            for n in range(1, ORACLE_MAX_N + 1)]


@check("laws", "first-return-identities")
def _first_return_identities():
    out = []
    for p in (HALF, Fraction(1, 3), Fraction(2, 5)):
        q = 1 - p
        for n in range(1, 13):
            out.append((f"n={n} p={p}", laws.first_return_prob(n, p),
                        4 * p * q * laws.u2n(n - 1, p) - laws.u2n(n, p)))
    return out


# -- ruin ------------------------------------------------------------------------

@check("ruin", "linear-system")
def _ruin_linear():
    out = []
    for p in (Fraction(1, 3), HALF, Fraction(3, 5)):
        for A in range(1, 12):
            for B in range(1, 13 - A):
                win, dur = oracles.ruin_linear_system(A, B, p)
                starts = range(-B, A + 1) if p == HALF else (0,)
                for k in starts:
                    res = ruin.solve_ruin(ruin.RuinSpec(A, B, p, k))
                    out.append((f"A={A} B={B} p={p} k={k}", (res.prob_win, res.expected_duration), (win[k], dur[k])))
    return out


@check("ruin", "symmetric-form")
def _ruin_symmetric():
    out = []
    for rho in (Fraction(51, 49), Fraction(55, 45), Fraction(3, 2), Fraction(1, 2), Fraction(2)):
        for A in range(1, 11):
            biased = ruin.ruin_biased(ruin.RuinSpec(A, A, ruin.p_from_rho(rho)))
            out.append((f"A={A} rho={rho}", ruin.ruin_symmetric(A, rho), biased))
    return out


# -- recurrence ---------------------------------------------------------------------

@check("recurrence", "series-identity")
def _series_identity():
    return [(f"p={p}", recurrence.series_sum_u(p), 1 / (1 - recurrence.prob_return_origin(p)))
            for p in (Fraction(1, 3), Fraction(2, 5), Fraction(3, 4))]


@check("recurrence", "lattice-loops")
def _lattice():
    out = []
    for n in range(0, 4):
        out.append((f"2D n={n}", recurrence.u2d(n), Fraction(oracles.lattice_loops(2, 2 * n), 4 ** (2 * n))))
    for n in range(0, 3):
        out.append((f"3D n={n}", recurrence.u3d(n), Fraction(oracles.lattice_loops(3, 2 * n), 6 ** (2 * n))))
    return out


@check("recurrence", "string-pair-bijection")
def _string_pairs():
    return [(f"n={n}", recurrence.u2d(n), laws.u2n(n) ** 2) for n in range(51)]


@check("recurrence", "u3d-sequence")
def _u3d_sequence():
    seq = recurrence.u3d_sequence(40)
    return [(f"n={n}", seq[n], recurrence.u3d(n)) for n in range(41)]


# -- Monte Carlo calibration (opt-in group) --------------------------------------------

def calibration_battery(seed: int, trials: int = 100_000) -> list[tuple[str, float, object]]:
    """(label, exact value, Estimate) for at least twelve (law, parameter) pairs."""
    cfg = SimConfig(seed, trials)
    rows = []
    for A, B, p, k in ((5, 3, HALF, 0), (3, 3, Fraction(45, 100), 0), (10, 10, Fraction(49, 100), 0), (5, 3, HALF, 2)):
        spec = ruin.RuinSpec(A, B, p, k)
        exact = ruin.solve_ruin(spec)
        est = estimate_ruin(cfg, spec)
        rows.append((f"ruin win A={A} B={B} p={p} k={k}", float(exact.prob_win), est.prob_win))
        rows.append((f"ruin duration A={A} B={B} p={p} k={k}", float(exact.expected_duration), est.duration))
    lead = estimate_lead_time(cfg, 10)
    pmf = laws.lead_time_pmf(10)
    for k in (0, 2, 5):
        rows.append((f"lead time 2n=20 k={k}", float(pmf[k]), lead[k]))
    for r in (0, 10, 20):
        rows.append((f"returns 2n=100 r={r}", float(laws.return_count_pmf(r, 50)), estimate_return_counts(cfg, 50, r)))
    third = Fraction(1, 3)
    rows.append(("first return 2n=20 p=1/3", float(laws.first_return_prob(10, third)), estimate_first_return(cfg, 10, third)))
    rows.append(("S_20=0 p=1/3", float(laws.u2n(10, third)), estimate_return_at(cfg, 10, third)))
    rows.append(("S_2=0 p=1/2", float(laws.u2n(1)), estimate_return_at(cfg, 1)))
    return rows


MAX_OUTSIDE_3SIGMA = 1


def _mc_check(seed: int) -> Check:
    def run():
        rows = calibration_battery(seed)
        outside = [label for label, exact, est in rows if not est.within(exact)]
        label = f"seed {seed}: {len(outside)} of {len(rows)} outside 3 sigma {outside}"
        return [(label, len(outside) <= MAX_OUTSIDE_3SIGMA, True)]
    return run


# -- runner ----------------------------------------------------------------------------

def _perturb(value):
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return value + 1
    if isinstance(value, list):
        return [*value, None]
    return object()


def run_battery(only: list[str] | None = None, inject_fault: str | None = None,
                seed: int | None = None) -> list[CheckResult]:
    groups = set(only) if only else set(DEFAULT_GROUPS)
    unknown = groups - set(GROUPS)
    if unknown:
        raise ValueError(f"unknown check groups {sorted(unknown)}; choose from {GROUPS}")
    registry = list(_REGISTRY)
    if "montecarlo" in groups:
        from .montecarlo import DEFAULT_SEED
        registry.append(("montecarlo", "calibration", _mc_check(DEFAULT_SEED if seed is None else seed)))
    results = []
    for group, name, fn in registry:
        if group not in groups:
            continue
        t0 = time.perf_counter()
        failures = []
        try:
            cases = fn()
            for label, got, want in cases:
                if name == inject_fault:
                    want = _perturb(want)
                if got != want:
                    failures.append(label)
            detail = f"{len(cases)} cases" if not failures else f"{len(failures)} of {len(cases)} failed: {', '.join(failures[:5])}"
        except Exception as exc:  # a crashing check is a failed check
            failures.append(repr(exc))
            detail = f"error: {exc!r}"
        results.append(CheckResult(name, group, not failures, detail, time.perf_counter() - t0))
    return results
