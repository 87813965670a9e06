"""Hilbert series of the diagonal harmonics as a weight sum over T(1^n), and its specializations."""
import logging
from collections import Counter
from dataclasses import dataclass, field

from config import DEFAULT_HILBERT_CEILING, DEFAULT_JOBS, LARGE_HILBERT_CEILING
from errors import ResourceLimitError
from polynomials import (evaluate, first_difference, format_poly, negative_terms, q_factorial, q_integer, specialize,
                         sum_profiles, swap_qt, weight_profiles)
from tesler_generator import fold_family, iter_family

logger = logging.getLogger(__name__)


@dataclass
class HilbertResult:
    n: int
    series: object
    dimension: int
    negative_terms: list = field(default_factory=list)

    @property
    def symmetric(self):
        return swap_qt(self.series) == self.series

    def to_dict(self):
        return {'n': self.n, 'series': format_poly(self.series), 'dimension': self.dimension,
                'symmetric': self.symmetric, 'negative_terms': [list(m) for m in self.negative_terms]}


@dataclass
class IdentityCheck:
    name: str
    n: int
    holds: bool
    lhs: str
    rhs: str
    difference: dict = None

    def __bool__(self):
        return self.holds

    def to_dict(self):
        return {'name': self.name, 'n': self.n, 'holds': self.holds, 'lhs': self.lhs, 'rhs': self.rhs,
                'difference': self.difference}


def ones(n):
    return (1,) * n


def _check_ceiling(n, ceiling, allow_large):
    limit = LARGE_HILBERT_CEILING if allow_large else ceiling
    if limit is not None and n > limit:
        raise ResourceLimitError(f"Hilbert series at n={n}", limit)
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")


def hilbert_series(n, ceiling=DEFAULT_HILBERT_CEILING, allow_large=False, jobs=DEFAULT_JOBS,
                   convention='haglund'):
    """Σ wt_{q,t}(A) over T(1^n)."""
    _check_ceiling(n, ceiling, allow_large)
    profiles = Counter()
    for partial in fold_family(ones(n), weight_profiles, jobs=jobs):
        profiles.update(partial)
    series = sum_profiles(profiles, convention=convention)
    dimension = evaluate(series, 1, 1)
    result = HilbertResult(n, series, dimension, negative_terms(series))
    if result.negative_terms:
        logger.warning(f"Hilbert series at n={n} has negative coefficients at {result.negative_terms}")
    logger.info(f"Hilbert series at n={n}: dimension {dimension}")
    return result


def verify_inverse_specialization(n, series=None):
    """q^{C(n,2)} Hilb(q, 1/q) = [n+1]_q^{n-1}."""
    series = hilbert_series(n).series if series is None else series
    lhs = specialize(series, 't=1/q').shift(n * (n - 1) // 2)
    rhs = q_integer(n + 1)**(n - 1)
    logger.debug(f"q^{n * (n - 1) // 2} Hilb(q, 1/q) spans q^{lhs.valuation}..q^{lhs.degree}")
    if lhs.is_polynomial():
        difference = first_difference(lhs.to_poly(), rhs)
    else:
        difference = {'monomial': (lhs.valuation,), 'lhs': lhs.as_dict()[lhs.valuation], 'rhs': 0}
    return IdentityCheck('inverse_specialization', n, difference is None, str(lhs), format_poly(rhs), difference)


def verify_t_zero_specialization(n, series=None):
    """Hilb(q, 0) = [n]_q!."""
    series = hilbert_series(n).series if series is None else series
    lhs = specialize(series, 't=0')
    rhs = q_factorial(n)
    difference = first_difference(lhs, rhs)
    return IdentityCheck('t_zero_specialization', n, difference is None, format_poly(lhs), format_poly(rhs), difference)


def is_permutation_tesler(matrix):
    return all(sum(1 for v in row if v) == 1 for row in matrix.rows)


def permutation_tesler_sum(n):
    """Σ over permutation Tesler matrices of the product of their positive entries."""
    total = 0
    for matrix in iter_family(ones(n)):
        if is_permutation_tesler(matrix):
            term = 1
            for value in matrix.positive_entries():
                term *= value
            total += term
    return total


def verify_permutation_sum(n):
    """Permutation Tesler matrices alone give (n+1)^{n-1}."""
    lhs = permutation_tesler_sum(n)
    rhs = (n + 1)**(n - 1)
    difference = None if lhs == rhs else {'monomial': (), 'lhs': lhs, 'rhs': rhs}
    return IdentityCheck('permutation_sum', n, lhs == rhs, str(lhs), str(rhs), difference)
