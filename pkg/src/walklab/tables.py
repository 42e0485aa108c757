"""Recomputed tables and plottable figure series.

Each builder returns a :class:`Sheet`: a header plus rows of already
rendered cells, so CSV output is byte-stable.  Exact cells are rendered
with round-half-even at the requested precision.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from datetime import timedelta
from fractions import Fraction

from .laws import arcsine_cdf, format_duration, lead_fraction, lead_time_cdf_table, lead_time_pmf
from .numerics import DEFAULT_PRECISION, render_exact, to_decimal
from .ruin import RuinSpec, p_from_rho, solve_ruin, symmetric_duration

TABLE1_N = 10
TABLE3_PROBS = (0.99, 0.95, 0.90, 0.80, 0.70, 0.60, 0.50, 0.40, 0.30, 0.20, 0.10, 0.05, 0.02, 0.01)
TABLE3_HORIZON = timedelta(days=365)
TABLE4_RHOS = (Fraction(51, 49), Fraction(55, 45), Fraction(60, 40))
TABLE4_BARRIERS = (3, 10)
FIGURE_RHO_GRID = tuple(Fraction(k, 20) for k in range(1, 101))
FIGURE_IDS = (3, 4, 5, 7, 8, 9)


@dataclass
class Sheet:
    label: str
    header: list[str]
    rows: list[list] = field(default_factory=list)
    payload: dict | None = None

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.header)
        writer.writerows(self.rows)
        return buf.getvalue()

    def to_dict(self) -> dict:
        if self.payload is not None:
            return self.payload
        return {"label": self.label, "rows": [dict(zip(self.header, r)) for r in self.rows]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def column(self, name: str) -> list:
        i = self.header.index(name)
        return [r[i] for r in self.rows]


def _law_sheet(table, precision: int) -> Sheet:
    table.precision = precision
    rows = [[i, render_exact(v), to_decimal(v, precision)] for i, v in table.rows]
    return Sheet(table.label, ["index", "exact", "decimal"], rows, table.to_dict())


def table1(precision: int = DEFAULT_PRECISION) -> Sheet:
    """p_{2k,20} for k = 0..10."""
    return _law_sheet(lead_time_pmf(TABLE1_N), precision)


def table2(precision: int = DEFAULT_PRECISION) -> Sheet:
    """P(2k <= 2 alpha) for 2n = 20, alpha = 0..10."""
    return _law_sheet(lead_time_cdf_table(TABLE1_N), precision)


def table3(precision: int = 1) -> Sheet:
    """Longest lead of the less fortunate player over a year, by probability."""
    rows = []
    for prob in TABLE3_PROBS:
        x = lead_fraction(prob)
        d = TABLE3_HORIZON * x
        days = d / timedelta(days=1)
        rows.append([f"{prob:.2f}", f"{x:.8f}", f"{days:.{precision}f}", format_duration(d, precision)])
    return Sheet("lead_fraction_quantile(horizon=365d)", ["p", "fraction", "days", "display"], rows)


def table4(precision: int = DEFAULT_PRECISION) -> Sheet:
    """Symmetric-barrier win/ruin probabilities: one row per rho, one column pair per A."""
    rows, payload = [], []
    for rho in TABLE4_RHOS:
        row = [render_exact(rho)]
        for A in TABLE4_BARRIERS:
            res = solve_ruin(RuinSpec(A, A, p_from_rho(rho)))
            row += [to_decimal(res.prob_win, precision), to_decimal(res.prob_ruin, precision)]
            payload.append({"rho": render_exact(rho), "A": A, **res.to_dict(precision)})
        rows.append(row)
    header = ["rho"] + [f"{kind}_A{A}" for A in TABLE4_BARRIERS for kind in ("win", "ruin")]
    return Sheet("symmetric ruin probabilities", header, rows, {"label": "symmetric ruin probabilities", "rows": payload})


def build_table(table_id: int, precision: int = DEFAULT_PRECISION) -> Sheet:
    builders = {1: table1, 2: table2, 3: table3, 4: table4}
    if table_id not in builders:
        raise KeyError(f"unknown table id {table_id}; choose from {sorted(builders)}")
    return builders[table_id](precision)


def _ruin_row(param, res, precision) -> list:
    return [param, to_decimal(res.prob_win, precision), to_decimal(res.prob_ruin, precision),
            to_decimal(res.expected_duration, precision)]


SWEEP_HEADER = ["param", "prob_win", "prob_ruin", "duration"]


def figure(fig_id: int, *, n: int = 10, a: int = 3, b: int | None = None, rho=Fraction(55, 45),
           a_max: int = 20, precision: int = DEFAULT_PRECISION) -> Sheet:
    """Series behind figures 3-5 (lead time) and 7-9 (ruin).

    3: pmf p_{2k,2n};  4: cdf;  5: cdf next to the arcsine law;
    7: win/ruin vs rho for A = B = a;  8: win vs A at fixed rho;
    9: expected duration vs rho (A = B = a, or A = a, B = b).
    """
    if fig_id == 3:
        return _law_sheet(lead_time_pmf(n), precision)
    if fig_id == 4:
        return _law_sheet(lead_time_cdf_table(n), precision)
    if fig_id == 5:
        cdf = lead_time_cdf_table(n)
        rows = [[alpha, to_decimal(v, precision), f"{arcsine_cdf(alpha / n):.{precision}f}"] for alpha, v in cdf.rows]
        return Sheet(f"cdf vs arcsine (2n={2 * n})", ["alpha", "exact", "arcsine"], rows)
    if fig_id in (7, 9):
        b = a if b is None else b
        rows = []
        for r in FIGURE_RHO_GRID:
            res = solve_ruin(RuinSpec(a, b, p_from_rho(r)))
            if a == b:
                assert res.expected_duration == symmetric_duration(a, r)
            rows.append(_ruin_row(render_exact(r), res, precision))
        return Sheet(f"ruin vs rho (A={a}, B={b})", SWEEP_HEADER, rows)
    if fig_id == 8:
        p = p_from_rho(rho)
        rows = [_ruin_row(A, solve_ruin(RuinSpec(A, A, p)), precision) for A in range(1, a_max + 1)]
        return Sheet(f"ruin vs A (rho={rho})", SWEEP_HEADER, rows)
    raise KeyError(f"unknown figure id {fig_id}; choose from {list(FIGURE_IDS)}")
