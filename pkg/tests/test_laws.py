import math
from datetime import timedelta
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from walklab import laws, oracles
from walklab.errors import BiasedUnsupported, DomainRange, IndexRange
from walklab.numerics import binomial

THIRD = Fraction(1, 3)
probs = st.fractions(min_value=0, max_value=1, max_denominator=50)


def test_u2n_values():
    assert laws.u2n(10) == Fraction(184756, 2**20)
    assert laws.u2n(0, THIRD) == 1
    assert round(float(laws.u2n(10, THIRD)), 4) == 0.0543


def test_first_return_values():
    assert laws.first_return_prob(1, THIRD) == Fraction(4, 9)
    assert laws.first_return_prob(5) == Fraction(7, 256)
    assert round(float(laws.first_return_prob(10, THIRD)), 4) == 0.0029


@given(probs, st.integers(1, 40))
def test_first_return_two_forms_agree(p, n):
    q = 1 - p
    assert laws.first_return_prob(n, p) == 4 * p * q * laws.u2n(n - 1, p) - laws.u2n(n, p)


@given(st.integers(1, 60))
def test_u_ratio_identity(n):
    # u_{2n-2} = 2n/(2n-1) u_{2n}
    assert laws.u2n(n - 1) == Fraction(2 * n, 2 * n - 1) * laws.u2n(n)


def test_fair_u_sequence_matches_closed_form():
    seq = laws.fair_u_sequence(30)
    assert seq == [laws.u2n(n) for n in range(31)]


def test_fair_only_laws_refuse_bias():
    for fn in (laws.no_return_prob, laws.nonnegative_prob, laws.first_passage_minus1_prob):
        with pytest.raises(BiasedUnsupported):
            fn(3, THIRD)
    with pytest.raises(BiasedUnsupported):
        laws.lead_time_pmf(3, THIRD)
    with pytest.raises(BiasedUnsupported):
        laws.return_count_pmf(0, 3, THIRD)


def test_no_return_and_nonnegative_examples():
    assert laws.no_return_prob(10) == Fraction(184756, 2**20)
    assert laws.no_return_prob(1) == Fraction(1, 2)
    assert laws.nonnegative_prob(10) == Fraction(184756, 2**20)
    assert laws.nonnegative_prob(1) == Fraction(1, 2)


@given(st.integers(1, 7))
def test_fair_events_match_enumeration(n):
    m = 2 * n
    assert laws.no_return_prob(n) == oracles.enumerated_probability(m, oracles.never_zero)
    assert laws.nonnegative_prob(n) == oracles.enumerated_probability(m, oracles.never_negative)
    assert laws.first_return_prob(n) == oracles.enumerated_probability(m, oracles.first_return_at_end)
    assert laws.first_passage_minus1_prob(n) == oracles.enumerated_probability(
        m - 1, oracles.first_passage_minus1_at_end)


@given(st.integers(1, 6), st.sampled_from([THIRD, Fraction(2, 5), Fraction(3, 4)]))
def test_biased_laws_match_weighted_enumeration(n, p):
    assert laws.u2n(n, p) == oracles.enumerated_probability(2 * n, oracles.ends_at(0), p)
    assert laws.first_return_prob(n, p) == oracles.enumerated_probability(2 * n, oracles.first_return_at_end, p)


def test_first_passage_examples():
    assert laws.first_passage_minus1_prob(1) == Fraction(1, 2)
    assert laws.first_passage_minus1_prob(2) == Fraction(1, 8)
    assert laws.first_passage_minus1_prob(10) == laws.first_return_prob(10)


def test_lead_time_pmf_examples():
    t = laws.lead_time_pmf(10)
    assert t.decimal(0) == 0.176197
    assert round(float(t[0]), 3) == 0.176
    assert round(float(t[5]), 3) == 0.061
    assert laws.lead_time_pmf(1).exact_values() == [Fraction(1, 2), Fraction(1, 2)]
    assert laws.lead_time_pmf(2)[1] == Fraction(1, 4)


@given(st.integers(1, 40))
def test_lead_time_pmf_is_symmetric_and_normalised(n):
    t = laws.lead_time_pmf(n)
    vals = t.exact_values()
    assert vals == vals[::-1]
    assert t.total() == 1


@given(st.integers(1, 7))
def test_lead_time_pmf_matches_enumeration(n):
    assert laws.lead_time_pmf(n).exact_values() == oracles.lead_time_pmf_enumerated(n)


def test_lead_time_cdf_examples():
    assert round(float(laws.lead_time_cdf(10, 3)), 3) == 0.408
    assert laws.lead_time_cdf(10, 10) == 1
    assert laws.lead_time_cdf(2, 0) == Fraction(3, 8)
    with pytest.raises(IndexRange):
        laws.lead_time_cdf(10, 11)


@given(st.integers(1, 30))
def test_lead_time_cdf_monotone_and_table_consistent(n):
    table = laws.lead_time_cdf_table(n)
    vals = table.exact_values()
    assert all(a < b for a, b in zip(vals, vals[1:]))
    assert vals == [laws.lead_time_cdf(n, a) for a in range(n + 1)]


def test_arcsine_cdf():
    assert laws.arcsine_cdf(0) == 0
    assert laws.arcsine_cdf(1) == 1
    assert abs(laws.arcsine_cdf(0.3) - 0.36901) < 1e-5
    assert abs(laws.arcsine_cdf(0.5) - 0.5) < 1e-15
    with pytest.raises(DomainRange):
        laws.arcsine_cdf(1.5)


@given(st.floats(0.0, 1.0))
def test_arcsine_symmetry(x):
    # asin(sqrt(x)) near 1 amplifies the rounding of 1 - x to about sqrt(eps)
    assert math.isclose(laws.arcsine_cdf(x) + laws.arcsine_cdf(1 - x), 1.0, abs_tol=1e-7)


def test_lead_fraction_quantile():
    assert laws.format_duration(laws.lead_fraction_quantile(0.05)) == "13.5 h"
    assert laws.format_duration(laws.lead_fraction_quantile(0.50)) == "53.5 d"
    assert laws.format_duration(laws.lead_fraction_quantile(0.01)) == "0.5 h"
    assert abs(laws.lead_fraction(1 - 1e-12) - 0.5) < 1e-9
    with pytest.raises(DomainRange):
        laws.lead_fraction_quantile(0.5, timedelta(0))


@given(st.floats(0.001, 0.999))
def test_quantile_inverts_arcsine(prob):
    # P(fraction <= x) on the less-fortunate side is 2 * arcsine_cdf(x)
    x = laws.lead_fraction(prob)
    assert math.isclose(2 * laws.arcsine_cdf(x), prob, rel_tol=1e-9)


def test_return_count_examples():
    assert round(float(laws.return_count_pmf(0, 50)), 4) == 0.0796
    assert laws.return_count_pmf(0, 50) == laws.return_count_pmf(1, 50)
    assert round(float(laws.return_count_pmf(10, 50)), 4) == 0.0484
    assert laws.return_count_pmf(2, 2) == Fraction(1, 4)
    with pytest.raises(IndexRange):
        laws.return_count_pmf(51, 50)


@given(st.integers(1, 60))
def test_return_count_pmf_normalised_and_decreasing(n):
    t = laws.return_count_table(n)
    vals = t.exact_values()
    assert t.total() == 1
    assert all(a >= b for a, b in zip(vals, vals[1:]))


@given(st.integers(1, 7))
def test_return_count_matches_enumeration(n):
    assert laws.return_count_table(n).exact_values() == oracles.return_count_pmf_enumerated(n)


def test_law_table_serialisation():
    t = laws.lead_time_pmf(1, precision=3)
    assert t.to_csv() == "index,exact,decimal\n0,1/2,0.500\n1,1/2,0.500\n"
    assert t.to_dict()["rows"][0] == {"index": 0, "exact": "1/2", "decimal": 0.5}
    with pytest.raises(ValueError):
        laws.LawTable("bad", [(1, Fraction(1)), (0, Fraction(0))])


def test_walk_params():
    w = laws.WalkParams("1/3")
    assert w.q == Fraction(2, 3)
    assert not w.fair
    assert laws.FAIR.fair
    with pytest.raises(DomainRange):
        laws.WalkParams(Fraction(4, 3))


@given(st.integers(1, 200))
def test_u2n_decreases_and_matches_binomial(n):
    assert laws.u2n(n) < laws.u2n(n - 1)
    assert laws.u2n(n) == Fraction(binomial(2 * n, n), 4**n)
