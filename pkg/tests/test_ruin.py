import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from walklab import oracles, ruin
from walklab.errors import DegenerateP, NotBiased, NotUnbiased, RhoOne, StartUnsupported
from walklab.ruin import RuinResult, RuinSpec

HALF = Fraction(1, 2)


def test_unbiased_five_three():
    res = ruin.ruin_unbiased(RuinSpec(5, 3))
    assert (res.prob_win, res.prob_ruin, res.expected_duration) == (Fraction(3, 8), Fraction(5, 8), 15)


def test_unbiased_examples():
    assert ruin.ruin_unbiased(RuinSpec(1, 1)) == RuinResult(HALF, HALF, Fraction(1))
    assert ruin.ruin_unbiased(RuinSpec(5, 3, HALF, 2)).expected_duration == 15
    with pytest.raises(NotUnbiased):
        ruin.ruin_unbiased(RuinSpec(5, 3, Fraction(2, 5)))


@pytest.mark.parametrize("A,p,win", [(3, Fraction(45, 100), 0.35), (10, Fraction(49, 100), 0.40),
                                     (10, Fraction(40, 100), 0.02)])
def test_biased_table_values(A, p, win):
    res = ruin.ruin_biased(RuinSpec(A, A, p))
    assert round(float(res.prob_win), 2) == win
    assert res.prob_win + res.prob_ruin == 1


def test_biased_restrictions():
    with pytest.raises(DegenerateP):
        ruin.ruin_biased(RuinSpec(3, 3, Fraction(1)))
    with pytest.raises(StartUnsupported):
        ruin.ruin_biased(RuinSpec(3, 3, Fraction(2, 5), 1))
    assert ruin.ruin_biased(RuinSpec(5, 3)) == ruin.ruin_unbiased(RuinSpec(5, 3))


def test_degenerate():
    assert ruin.ruin_degenerate(RuinSpec(7, 3, Fraction(1))) == RuinResult(Fraction(1), Fraction(0), Fraction(7))
    assert ruin.ruin_degenerate(RuinSpec(7, 3, Fraction(0))) == RuinResult(Fraction(0), Fraction(1), Fraction(3))
    assert ruin.ruin_degenerate(RuinSpec(1, 1, Fraction(1))).expected_duration == 1


def test_spec_validation():
    with pytest.raises(ValueError):
        RuinSpec(0, 3)
    with pytest.raises(ValueError):
        RuinSpec(3, 3, HALF, 4)


def test_symmetric_examples():
    assert round(float(ruin.ruin_symmetric(3, Fraction(55, 45)).prob_win), 2) == 0.35
    assert round(float(ruin.ruin_symmetric(10, Fraction(60, 40)).prob_win), 2) == 0.02
    assert ruin.symmetric_duration(2, 1) == 4
    with pytest.raises(RhoOne):
        ruin.ruin_symmetric(3, 1)


def test_symmetric_duration_peaks_at_one():
    A = 5
    grid = [Fraction(1, 2), Fraction(9, 10), Fraction(99, 100), Fraction(101, 100), Fraction(11, 10), Fraction(2)]
    vals = {r: ruin.symmetric_duration(A, r) for r in grid}
    assert all(v < A * A for v in vals.values())
    assert max(vals, key=vals.get) in (Fraction(99, 100), Fraction(101, 100))
    assert abs(float(ruin.symmetric_duration(A, Fraction(10**6))) - A) < 1e-4
    assert abs(float(ruin.symmetric_duration(A, Fraction(1, 10**6))) - A) < 1e-4
    near = ruin.symmetric_duration(A, Fraction(10**6 + 1, 10**6))
    assert abs(float(near) - A * A) < 1e-6


@given(st.integers(1, 30), st.fractions(min_value=Fraction(1, 20), max_value=20, max_denominator=40))
def test_symmetric_duration_invariant_under_inverse_rho(A, rho):
    assert ruin.symmetric_duration(A, rho) == ruin.symmetric_duration(A, 1 / rho)


@given(st.integers(1, 30), st.integers(1, 30), st.fractions(min_value=Fraction(1, 50), max_value=Fraction(49, 50),
                                                            max_denominator=50))
def test_ruin_probabilities_sum_to_one(A, B, p):
    res = ruin.solve_ruin(RuinSpec(A, B, p))
    assert res.prob_win + res.prob_ruin == 1
    assert 0 < res.prob_win < 1
    assert res.expected_duration > 0


@given(st.integers(1, 8), st.integers(1, 8), st.sampled_from([Fraction(1, 3), HALF, Fraction(3, 5), Fraction(7, 10)]))
def test_closed_forms_match_first_step_system(A, B, p):
    win, dur = oracles.ruin_linear_system(A, B, p)
    res = ruin.solve_ruin(RuinSpec(A, B, p))
    assert (res.prob_win, res.expected_duration) == (win[0], dur[0])


@given(st.integers(1, 8), st.integers(1, 8), st.data())
def test_unbiased_offsets_match_first_step_system(A, B, data):
    k = data.draw(st.integers(-B, A))
    win, dur = oracles.ruin_linear_system(A, B, HALF)
    res = ruin.solve_ruin(RuinSpec(A, B, HALF, k))
    assert (res.prob_win, res.expected_duration) == (win[k], dur[k])


@given(st.integers(1, 12), st.fractions(min_value=Fraction(1, 20), max_value=Fraction(19, 20), max_denominator=40))
def test_symmetric_form_matches_general_formula(A, p):
    if p == HALF:
        return
    rho = (1 - p) / p
    assert ruin.ruin_symmetric(A, rho) == ruin.ruin_biased(RuinSpec(A, A, p))


def test_win_probability_tends_to_fair_value():
    # p -> 1/2 recovers B/(A+B)
    A, B = 5, 3
    eps = Fraction(1, 10**9)
    res = ruin.ruin_biased(RuinSpec(A, B, HALF + eps))
    assert abs(float(res.prob_win) - 3 / 8) < 1e-7
    assert abs(float(res.expected_duration) - 15) < 1e-6


def test_escape_probability():
    assert ruin.escape_probability(Fraction(2, 3), infinite=True) == HALF
    assert ruin.escape_probability(Fraction(1, 3), infinite=True) == 0
    assert ruin.escape_probability(Fraction(1, 3), 1) == 1
    assert ruin.escape_probability_fair(1) == 1
    assert ruin.escape_probability_fair(4) == Fraction(1, 4)
    with pytest.raises(NotBiased):
        ruin.escape_probability(HALF, 5)


@given(st.integers(1, 12), st.sampled_from([Fraction(1, 3), Fraction(3, 5), Fraction(3, 4)]))
def test_escape_matches_shifted_ruin(N, p):
    # start 1 in [0, N] is start 0 with A = N - 1, B = 1
    if N == 1:
        assert ruin.escape_probability(p, N) == 1
        return
    assert ruin.escape_probability(p, N) == ruin.solve_ruin(RuinSpec(N - 1, 1, p)).prob_win


def test_hit_zero_probability():
    assert ruin.hit_zero_probability(Fraction(2, 3), 1) == HALF
    assert ruin.hit_zero_probability(Fraction(1, 3), 1) == 1
    assert ruin.hit_zero_probability(HALF, 1) == 1
    assert ruin.hit_zero_probability(HALF, -1) == 1
    assert ruin.hit_zero_probability(Fraction(2, 3), -1) == 1


def test_float_variant_agrees_and_scales():
    for A, B, p in ((10, 10, Fraction(45, 100)), (7, 3, Fraction(3, 5))):
        exact = ruin.solve_ruin(RuinSpec(A, B, p))
        approx = ruin.ruin_biased_float(A, B, float(p))
        assert math.isclose(approx[0], float(exact.prob_win), rel_tol=1e-12)
        assert math.isclose(approx[2], float(exact.expected_duration), rel_tol=1e-12)
    big = ruin.ruin_biased_float(5000, 5000, 0.49)
    assert all(math.isfinite(v) for v in big)
    rho = 0.51 / 0.49
    assert math.isclose(big[0], math.exp(-5000 * math.log(rho)), rel_tol=1e-9)


def test_p_from_rho():
    assert ruin.p_from_rho(Fraction(55, 45)) == Fraction(45, 100)
    assert RuinSpec(3, 3, Fraction(45, 100)).rho == Fraction(11, 9)


def test_sweep_csv_shape():
    rows = [(A, ruin.solve_ruin(RuinSpec(A, A))) for A in (1, 2)]
    text = ruin.sweep_csv(rows, 2)
    assert text.splitlines()[0] == "param,prob_win,prob_ruin,duration"
    assert text.splitlines()[2] == "2,0.50,0.50,4.00"


def test_result_to_dict():
    d = ruin.solve_ruin(RuinSpec(5, 3)).to_dict(3)
    assert d["prob_win"] == "3/8"
    assert d["decimal"]["expected_duration"] == 15.0
