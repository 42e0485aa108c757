from fractions import Fraction

import pytest

from walklab import tables
from walklab.numerics import to_decimal
from walklab.ruin import symmetric_duration


def test_table1_values():
    sheet = tables.table1(3)
    assert sheet.column("decimal") == ["0.176", "0.093", "0.074", "0.065", "0.062", "0.061",
                                       "0.062", "0.065", "0.074", "0.093", "0.176"]


def test_table2_ends():
    col = tables.table2(3).column("decimal")
    assert (col[0], col[3], col[4], col[5], col[-1]) == ("0.176", "0.408", "0.470", "0.530", "1.000")


def test_table3_spot_rows():
    rows = {r[0]: r for r in tables.table3(1).rows}
    assert rows["0.05"][3] == "13.5 h"
    assert rows["0.50"][3] == "53.5 d"
    assert rows["0.01"][3] == "0.5 h"


def test_table4_grid_shape():
    sheet = tables.table4(2)
    assert sheet.header == ["rho", "win_A3", "ruin_A3", "win_A10", "ruin_A10"]
    assert len(sheet.rows) == 3
    assert sheet.rows[2][0] == "3/2" and sheet.rows[2][3] == "0.02"
    assert len(sheet.to_dict()["rows"]) == 6


def test_unknown_ids():
    with pytest.raises(KeyError):
        tables.build_table(5)
    with pytest.raises(KeyError):
        tables.figure(6)


def test_figure5_columns():
    sheet = tables.figure(5, n=10, precision=3)
    assert sheet.header == ["alpha", "exact", "arcsine"]
    assert sheet.rows[3] == [3, "0.408", "0.369"]


def test_figure7_fair_point():
    sheet = tables.figure(7, a=3)
    row = next(r for r in sheet.rows if r[0] == "1/1")
    assert row[1] == row[2] == "0.500000"


def test_figure9_peak_is_a_squared():
    sheet = tables.figure(9, a=2)
    durations = [Fraction(d) for d in sheet.column("duration")]
    peak = sheet.rows[durations.index(max(durations))]
    assert peak[0] == "1/1" and Fraction(peak[3]) == 4


def test_figure9_asymmetric_barriers():
    sheet = tables.figure(9, a=5, b=3)
    row = next(r for r in sheet.rows if r[0] == "1/1")
    assert row[3] == to_decimal(Fraction(15))


def test_figure8_sweep():
    sheet = tables.figure(8, rho=Fraction(55, 45), a_max=10)
    assert sheet.column("param") == list(range(1, 11))
    wins = [float(v) for v in sheet.column("prob_win")]
    assert all(a > b for a, b in zip(wins, wins[1:]))


def test_symmetric_duration_column_consistent():
    sheet = tables.figure(9, a=4)
    for r in sheet.rows:
        assert r[3] == to_decimal(symmetric_duration(4, Fraction(r[0])))
