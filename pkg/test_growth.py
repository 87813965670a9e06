import pytest

from errors import ResourceLimitError, UnsupportedInputError
from growth import (armstrong_polynomial, catalan_product, check_monotone_growth, compare_ogf, double_factorial,
                    family_sequence, family_vector, mobius_bound_probe, parking_bound_probe,
                    series_coefficients, verify_bounds, verify_coefficient_identities, x)

TWO_ONES = {1: 1, 2: 2, 3: 7, 4: 25, 5: 90, 6: 325, 7: 1175}


def by_name(checks, name):
    return [c for c in checks if c['check'] == name]


def test_armstrong_polynomial():
    poly = armstrong_polynomial((1, 1, 1))
    assert poly.dist == {4: 2, 6: 4, 8: 1}
    assert str(poly) == "2*q^4 + 4*q^6 + q^8"
    assert poly.value_at_one() == 7
    assert poly.derivative_at_one() == 40
    assert poly.coefficient(5) == 0


def test_armstrong_polynomial_of_four():
    assert armstrong_polynomial((1,) * 4).dist == {5: 7, 8: 15, 9: 6, 12: 11, 16: 1}


@pytest.mark.parametrize("n", range(1, 7))
def test_coefficient_identities(n):
    report = verify_coefficient_identities(n)
    assert report.passed
    assert by_name(report.checks, 'derivative_at_one')[0]['actual'] == by_name(report.checks,
                                                                              'derivative_at_one')[0]['expected']


def test_coefficient_identities_need_positive_n():
    with pytest.raises(UnsupportedInputError):
        verify_coefficient_identities(0)


def test_double_factorial():
    assert double_factorial(-1) == 1
    assert double_factorial(0) == 1
    assert double_factorial(7) == 105


def test_bounds_at_five():
    report = verify_bounds(5)
    assert report.passed
    assert by_name(report.checks, 'double_factorial_lower')[0]['bound'] == 105
    assert by_name(report.checks, 'refined_upper')[0]['bound'] == 972
    assert by_name(report.checks, 'crude_upper')[0]['value'] == 357


def test_bounds_at_four_keep_failing_links_informational():
    report = verify_bounds(4)
    assert report.passed
    chained = by_name(report.checks, 'factorial_below_double_factorial')[0]
    assert chained['passed'] is False and chained['informational']
    refined = by_name(report.checks, 'refined_below_crude')[0]
    assert refined['passed'] is False and refined['value'] == 81 and refined['bound'] == 64


def test_refined_bound_not_applicable_below_four():
    report = verify_bounds(3)
    assert by_name(report.checks, 'refined_upper')[0]['passed'] is None
    assert report.passed


def test_family_vectors():
    assert family_vector('ones-then-zeros', 4, 2) == (1, 1, 0, 0)
    assert family_vector('ones-then-zeros', 1, 2) == (1,)
    assert family_vector('single-one', 3) == (1, 0, 0)
    assert family_vector('staircase', 3) == (1, 2, 3)
    with pytest.raises(UnsupportedInputError):
        family_vector('zigzag', 3)


def test_two_ones_sequence():
    report = family_sequence('ones-then-zeros', 7, k=2)
    assert report.values == TWO_ONES
    assert report.family == "ones-then-zeros(k=2)"
    assert report.recurrence_valid_from == 3
    assert report.passed
    recurrence = {c['n']: c['holds'] for c in by_name(report.checks, 'recurrence')}
    assert recurrence[2] is False
    assert all(recurrence[n] for n in range(3, 7))
    assert all(c['passed'] for c in by_name(report.checks, 'coefficient_recurrence'))


def test_two_ones_generating_function_mismatch():
    report = family_sequence('ones-then-zeros', 4, k=2)
    assert [row['series'] for row in report.ogf] == [1, 1, -2, -15]
    assert [row['match'] for row in report.ogf] == [True, False, False, False]


def test_single_one_sequence():
    report = family_sequence('single-one', 8)
    assert report.values == {n: 2**(n - 1) for n in range(1, 9)}
    assert all(row['match'] for row in report.ogf)
    assert report.passed


def test_staircase_sequence():
    report = family_sequence('staircase', 5)
    assert report.values == {1: 1, 2: 2, 3: 10, 4: 140, 5: 5880}
    assert report.passed
    assert all(row['verdict'] == 'ok' for row in report.bounds)


def test_family_sequence_uses_census(census):
    family_sequence('ones-then-zeros', 4, k=2, census=census)
    assert census.get((1, 1, 0, 0)) == 25


def test_catalan_product():
    assert [catalan_product(n) for n in range(1, 6)] == [1, 2, 10, 140, 5880]


def test_series_coefficients():
    assert series_coefficients(1, 1 - 2 * x, 5) == [1, 2, 4, 8, 16]
    assert compare_ogf(1, {1: 1, 2: 2, 3: 4})[2] == {'power': 2, 'series': 4, 'value': 4, 'match': True}


def test_parking_bound_probe():
    at_five = parking_bound_probe(2, 5)
    assert at_five.holds
    assert at_five.detail['empirical_threshold'] == 5
    at_four = parking_bound_probe(2, 4)
    assert not at_four.holds
    assert at_four.detail['value'] == 25 and at_four.detail['bound'] == 27
    assert parking_bound_probe(1, 6).detail['empirical_threshold'] == 1


def test_mobius_bound_probe():
    probe = mobius_bound_probe(3)
    assert probe.holds
    assert probe.detail['max_abs_mobius'] == 2
    assert probe.detail['implied_lower_bound'] == 4
    assert probe.detail['meets_implied_bound']
    assert probe.to_dict()['kind'] == 'mobius_bound'
    assert mobius_bound_probe(1).detail['max_abs_mobius'] == 1


def test_mobius_bound_probe_ceiling():
    with pytest.raises(ResourceLimitError):
        mobius_bound_probe(7)


def test_monotone_growth():
    assert all(c['passed'] for c in check_monotone_growth(6))
