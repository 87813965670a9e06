"""Armstrong polynomials, bounds on T(1^n), hook-sum families and Möbius-bound probes."""
import logging
from dataclasses import dataclass, field
from math import comb, factorial

import sympy as sp

from config import DEFAULT_JOBS, DEFAULT_MOBIUS_PROBE_CEILING, DEFAULT_TRANSITION_CEILING
from errors import ResourceLimitError, UnsupportedInputError
from polynomials import Q_RING, format_poly
from poset import build_poset, mobius
from tesler_generator import brute_force_enumerate, count, dpro_distribution
from tesler_matrix import HookSumVector

logger = logging.getLogger(__name__)

ORACLE_LIMIT = 6
FAMILY_KINDS = ('ones-then-zeros', 'staircase', 'single-one')

x = sp.Symbol('x')
# stated generating functions, coefficient of x^(n-1) against t_n
STATED_OGFS = {
    1: (1, 1 - 2 * x),
    2: (1 - 4 * x - 2 * x**2, 1 - 5 * x + 5 * x**2),
}


def _count(alpha, census=None, jobs=DEFAULT_JOBS, ceiling=DEFAULT_TRANSITION_CEILING):
    alpha = HookSumVector(alpha)
    if census is not None:
        cached = census.get(alpha)
        if cached is not None:
            return cached
    value = count(alpha, jobs=jobs, ceiling=ceiling)
    if census is not None:
        census.put(alpha, value)
    return value


def _check(name, passed, **detail):
    return {'check': name, 'passed': passed, **detail}


@dataclass
class ArmstrongPolynomial:
    """Σ q^{dpro(A)} over T(α), kept as dpro -> count."""
    alpha: tuple
    dist: dict

    def coefficient(self, degree):
        return self.dist.get(degree, 0)

    def value_at_one(self):
        return sum(self.dist.values())

    def derivative_at_one(self):
        return sum(d * c for d, c in self.dist.items())

    def as_poly(self):
        return Q_RING.from_dict({(d,): c for d, c in self.dist.items()})

    def __str__(self):
        return format_poly(self.as_poly())


def armstrong_polynomial(alpha, jobs=DEFAULT_JOBS, ceiling=DEFAULT_TRANSITION_CEILING):
    alpha = HookSumVector(alpha)
    return ArmstrongPolynomial(tuple(alpha), dict(sorted(dpro_distribution(alpha, jobs=jobs, ceiling=ceiling).items())))


@dataclass
class IdentityReport:
    subject: str
    n: int
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c['passed'] is not False for c in self.checks if not c.get('informational'))

    def to_dict(self):
        return {'subject': self.subject, 'n': self.n, 'passed': self.passed, 'checks': self.checks}


def verify_coefficient_identities(n, census=None, jobs=DEFAULT_JOBS, ceiling=DEFAULT_TRANSITION_CEILING):
    """Coefficient and derivative identities of A_n(q) = A(1^n, q)."""
    if n < 1:
        raise UnsupportedInputError(f"n must be positive, got {n}")
    poly = armstrong_polynomial((1,) * n, jobs=jobs, ceiling=ceiling)
    report = IdentityReport('armstrong', n)
    report.checks.append(_check('top_coefficient', poly.coefficient(2**n) == 1,
                                degree=2**n, actual=poly.coefficient(2**n), expected=1))
    if n >= 2:
        expected = _count((1,) * (n - 1), census, jobs, ceiling)
        report.checks.append(_check('lowest_coefficient', poly.coefficient(n + 1) == expected,
                                    degree=n + 1, actual=poly.coefficient(n + 1), expected=expected))
        degree = 3 * 2**(n - 2)
        expected = 2**n - n - 1
        report.checks.append(_check('middle_coefficient', poly.coefficient(degree) == expected,
                                    degree=degree, actual=poly.coefficient(degree), expected=expected))
    expected = _count((1,) * n, census, jobs, ceiling)
    report.checks.append(_check('value_at_one', poly.value_at_one() == expected,
                                actual=poly.value_at_one(), expected=expected))
    expected = _count((1,) * (n + 1), census, jobs, ceiling)
    report.checks.append(_check('derivative_at_one', poly.derivative_at_one() == expected,
                                actual=poly.derivative_at_one(), expected=expected))
    return report


def double_factorial(k):
    return 1 if k <= 0 else int(sp.factorial2(k))


def verify_bounds(n, census=None, jobs=DEFAULT_JOBS, ceiling=DEFAULT_TRANSITION_CEILING):
    """Each link of n! <= (2n-3)!! <= T(1^n) <= 2^{C(n-2,2)-1} 3^n <= 2^{C(n,2)}, judged separately.

    Links that only make sense from n = 4 on are reported with ``passed`` None.
    """
    if n < 1:
        raise UnsupportedInputError(f"n must be positive, got {n}")
    value = _count((1,) * n, census, jobs, ceiling)
    lower = double_factorial(2 * n - 3)
    crude_upper = 2**comb(n, 2)
    report = IdentityReport('bounds', n)
    report.checks.append(_check('crude_lower', factorial(n) <= value, bound=factorial(n), value=value))
    report.checks.append(_check('crude_upper', value <= crude_upper, bound=crude_upper, value=value))
    report.checks.append(_check('double_factorial_lower', lower <= value, bound=lower, value=value))
    report.checks.append(_check('factorial_below_double_factorial', factorial(n) <= lower,
                                bound=lower, value=factorial(n), informational=True))
    if n >= 4:
        upper = 2**(comb(n - 2, 2) - 1) * 3**n
        report.checks.append(_check('refined_upper', value <= upper, bound=upper, value=value))
        report.checks.append(_check('refined_below_crude', upper <= crude_upper, bound=crude_upper, value=upper,
                                    informational=True))
    else:
        report.checks.append(_check('refined_upper', None, reason='exponent C(n-2,2)-1 is negative for n < 4'))
        report.checks.append(_check('refined_below_crude', None, reason='not applicable for n < 4'))
    return report


def family_vector(kind, n, k=2):
    if kind == 'ones-then-zeros':
        return HookSumVector((1,) * min(k, n) + (0,) * max(0, n - k))
    if kind == 'single-one':
        return HookSumVector((1,) + (0,) * (n - 1))
    if kind == 'staircase':
        return HookSumVector(range(1, n + 1))
    raise UnsupportedInputError(f"unknown family {kind!r}, expected one of {FAMILY_KINDS}")


def family_id(kind, k=2):
    return f"ones-then-zeros(k={k})" if kind == 'ones-then-zeros' else kind


def catalan_product(n):
    product = 1
    for i in range(1, n + 1):
        product *= int(sp.catalan(i))
    return product


def series_coefficients(numerator, denominator, order):
    expansion = sp.series(numerator / denominator, x, 0, order).removeO()
    return [int(expansion.coeff(x, i)) for i in range(order)]


def compare_ogf(k, values):
    """Term-by-term comparison of the stated generating function with t_1, t_2, ..."""
    numerator, denominator = STATED_OGFS[k]
    ns = sorted(values)
    coefficients = series_coefficients(sp.sympify(numerator), sp.sympify(denominator), len(ns))
    return [{'power': n - 1, 'series': c, 'value': values[n], 'match': c == values[n]}
            for n, c in zip(ns, coefficients)]


@dataclass
class SequenceReport:
    family: str
    values: dict
    checks: list = field(default_factory=list)
    bounds: list = field(default_factory=list)
    ogf: list = field(default_factory=list)
    recurrence_valid_from: int = None

    @property
    def passed(self):
        return all(c['passed'] is not False for c in self.checks if not c.get('informational'))

    def to_dict(self):
        return {
            'family': self.family,
            'values': {str(n): v for n, v in sorted(self.values.items())},
            'checks': self.checks,
            'bounds': self.bounds,
            'ogf': self.ogf,
            'recurrence_valid_from': self.recurrence_valid_from,
            'passed': self.passed,
        }


def _bound_row(n, value, low, high):
    if low is not None and value < low:
        verdict = 'below'
    elif high is not None and value > high:
        verdict = 'above'
    else:
        verdict = 'ok'
    return {'n': n, 'value': value, 'bound_low': low, 'bound_high': high, 'verdict': verdict}


def _two_ones_coefficients(n, jobs, ceiling):
    poly = armstrong_polynomial(family_vector('ones-then-zeros', n, 2), jobs=jobs, ceiling=ceiling)
    return poly.coefficient(3), poly.coefficient(4)


def family_sequence(kind, n_max, k=2, census=None, jobs=DEFAULT_JOBS, ceiling=DEFAULT_TRANSITION_CEILING):
    """T-values of a hook-sum family for n = 1..n_max, checked against the known closed forms."""
    if kind == 'single-one':
        kind, k = 'ones-then-zeros', 1
    if kind not in FAMILY_KINDS:
        raise UnsupportedInputError(f"unknown family {kind!r}, expected one of {FAMILY_KINDS}")
    if kind == 'ones-then-zeros' and k < 1:
        raise UnsupportedInputError(f"k must be positive, got {k}")
    values = {n: _count(family_vector(kind, n, k), census, jobs, ceiling) for n in range(1, n_max + 1)}
    report = SequenceReport(family_id(kind, k), values)

    for n in range(1, min(n_max, ORACLE_LIMIT) + 1):
        oracle = brute_force_enumerate(family_vector(kind, n, k)).count
        report.checks.append(_check('oracle_agreement', oracle == values[n], n=n, oracle=oracle, value=values[n]))

    if kind == 'staircase':
        for n, value in values.items():
            expected = catalan_product(n)
            report.checks.append(_check('catalan_product', value == expected, n=n, value=value, expected=expected))
            report.bounds.append(_bound_row(n, value, expected, expected))
        return report

    for n, value in values.items():
        report.bounds.append(_bound_row(n, value, (k + 1)**(n - 1), None))

    if k == 1:
        for n, value in values.items():
            report.checks.append(_check('power_of_two', value == 2**(n - 1), n=n, value=value))
    if k == 2:
        holds = {}
        for n in range(2, n_max):
            holds[n] = values[n + 1] == 5 * values[n] - 5 * values[n - 1]
            report.checks.append(_check('recurrence', holds[n] if n >= 3 else None, n=n, holds=holds[n],
                                        value=values[n + 1], predicted=5 * values[n] - 5 * values[n - 1]))
        start = n_max
        for n in sorted(holds, reverse=True):
            if not holds[n]:
                break
            start = n
        report.recurrence_valid_from = start if holds else None
        previous = _two_ones_coefficients(2, jobs, ceiling)
        for n in range(3, n_max + 1):
            a, b = _two_ones_coefficients(n, jobs, ceiling)
            expected = (2 * previous[0] + previous[1], previous[0] + 3 * previous[1])
            report.checks.append(_check('coefficient_recurrence', (a, b) == expected, n=n,
                                        actual=[a, b], expected=list(expected)))
            if n + 1 in values:
                report.checks.append(_check('next_from_coefficients', values[n + 1] == 3 * a + 4 * b,
                                            n=n, value=values[n + 1], predicted=3 * a + 4 * b))
            previous = (a, b)
        for n in range(5, n_max + 1):
            report.checks.append(_check('power_of_three_lower', values[n] >= 3**(n - 1), n=n,
                                        value=values[n], bound=3**(n - 1)))
    if k in STATED_OGFS:
        report.ogf = compare_ogf(k, values)
    return report


@dataclass
class ProbeResult:
    name: str
    n: int
    holds: bool
    detail: dict

    def to_dict(self):
        return {'kind': self.name, 'n': self.n, 'holds': self.holds, **self.detail}


def parking_bound_probe(k, n, census=None, jobs=DEFAULT_JOBS, ceiling=DEFAULT_TRANSITION_CEILING):
    """Is T(1^k, 0^{n-k}) >= (k+1)^{n-1}? Also the least N such that it holds on N..n."""
    values = {m: _count(family_vector('ones-then-zeros', m, k), census, jobs, ceiling) for m in range(1, n + 1)}
    holds = {m: values[m] >= (k + 1)**(m - 1) for m in values}
    threshold = None
    for m in range(n, 0, -1):
        if not holds[m]:
            break
        threshold = m
    return ProbeResult('parking_bound', n, holds[n], {
        'k': k, 'value': values[n], 'bound': (k + 1)**(n - 1), 'empirical_threshold': threshold})


def mobius_bound_probe(n, ceiling=DEFAULT_MOBIUS_PROBE_CEILING):
    """max |μ(0̂, A)| over P(1^n) against n!, with the lower bound on T(1^n) it implies."""
    if ceiling is not None and n > ceiling:
        raise ResourceLimitError(f"Möbius probe at n={n}", ceiling)
    poset = build_poset((1,) * n)
    largest = mobius(poset).max_abs()
    implied = -(-2**comb(n, 2) // largest)
    logger.info(f"P(1^{n}): max |mu| = {largest}")
    return ProbeResult('mobius_bound', n, largest <= factorial(n), {
        'max_abs_mobius': largest,
        'factorial': factorial(n),
        'implied_lower_bound': implied,
        'size': len(poset),
        'meets_implied_bound': len(poset) >= implied,
    })


def check_monotone_growth(n_max, census=None, jobs=DEFAULT_JOBS, ceiling=DEFAULT_TRANSITION_CEILING):
    """T(1^{n+1}) >= (n+1) T(1^n): every diagonal product is at least n+1."""
    checks = []
    for n in range(1, n_max):
        current = _count((1,) * n, census, jobs, ceiling)
        following = _count((1,) * (n + 1), census, jobs, ceiling)
        checks.append(_check('monotone_growth', following >= (n + 1) * current, n=n,
                             value=following, bound=(n + 1) * current))
    return checks
