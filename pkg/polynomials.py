"""Exact integer polynomials in q and t, q-analogs and Tesler weights.

Polynomials live in sympy's sparse rings: ``QT_RING`` for (q, t) and
``Q_RING`` for q alone. Laurent polynomials in q, which only show up after
substituting t -> 1/q, are kept as exponent -> coefficient dicts.
"""
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass
from functools import lru_cache, reduce
from operator import mul

from sympy.polys.domains import ZZ
from sympy.polys.rings import ring

from errors import UnsupportedInputError, VerificationError

logger = logging.getLogger(__name__)

QT_RING, q, t = ring("q,t", ZZ)
Q_RING, Q = ring("q", ZZ)

CONVENTIONS = ('haglund', 'literal')


def qt_bracket(b):
    if b < 1:
        raise UnsupportedInputError(f"[b]_(q,t) needs b >= 1, got {b}")
    return QT_RING.from_dict({(b - 1 - i, i): 1 for i in range(b)})


def q_integer(n):
    if n < 0:
        raise UnsupportedInputError(f"[n]_q needs n >= 0, got {n}")
    return Q_RING.from_dict({(i,): 1 for i in range(n)})


def q_factorial(n):
    return reduce(mul, (q_integer(k) for k in range(1, n + 1)), Q_RING.one)


@dataclass(frozen=True)
class QtWeight:
    """Weight of one matrix as ``numer / (q-1)^eposn``.

    ``excess`` is the number of positive entries minus n.
    """
    numer: object
    eposn: int
    excess: int


@lru_cache(maxsize=None)
def _weight_for_profile(positives, n, convention):
    excess = len(positives) - n
    if excess < 0:
        raise UnsupportedInputError(f"{len(positives)} positive entries in a size {n} matrix")
    brackets = reduce(mul, (qt_bracket(b) for b in positives), QT_RING.one)
    if convention == 'haglund':
        # -M = (q-1)(1-t)
        return QtWeight(((q - 1) * (1 - t))**excess * brackets, 0, excess)
    # -M = (1-t)/(q-1)
    return QtWeight((1 - t)**excess * brackets, excess, excess)


def _check_convention(convention):
    if convention not in CONVENTIONS:
        raise UnsupportedInputError(f"unknown weight convention {convention!r}, expected one of {CONVENTIONS}")


def weight(matrix, convention='haglund'):
    """(-M)^{#positive - n} times the product of [a]_{q,t} over positive entries.

    ``haglund`` takes M = (1-q)(1-t), which makes the family sum the Hilbert
    series of the diagonal harmonics. ``literal`` takes M = (t-1)/(q-1).
    """
    _check_convention(convention)
    for i, row in enumerate(matrix.rows, start=1):
        if not any(row):
            raise UnsupportedInputError(f"row {i} of {matrix} is all zero")
    return _weight_for_profile(tuple(sorted(matrix.positive_entries())), matrix.n, convention)


def weight_profiles(matrices):
    """Counter of (sorted positive entries, n); the weight depends on nothing else."""
    profiles = Counter()
    for matrix in matrices:
        for i, row in enumerate(matrix.rows, start=1):
            if not any(row):
                raise UnsupportedInputError(f"row {i} of {matrix} is all zero")
        profiles[(tuple(sorted(matrix.positive_entries())), matrix.n)] += 1
    return profiles


def sum_profiles(profiles, convention='haglund'):
    _check_convention(convention)
    if not profiles:
        return QT_RING.zero

    by_denominator = defaultdict(lambda: QT_RING.zero)
    for (positives, n), multiplicity in sorted(profiles.items()):
        w = _weight_for_profile(positives, n, convention)
        by_denominator[w.eposn] += multiplicity * w.numer
    top = max(by_denominator)
    numerator = QT_RING.zero
    for eposn in sorted(by_denominator):
        numerator += by_denominator[eposn] * (q - 1)**(top - eposn)
    if top == 0:
        return numerator
    quotient, remainder = numerator.div((q - 1)**top)
    if remainder:
        raise VerificationError(
            f"weight sum is not divisible by (q-1)^{top}; remainder {format_poly(remainder)}")
    logger.debug(f"Summed {sum(profiles.values())} weights over {len(profiles)} entry profiles")
    return quotient


def sum_weights(matrices, convention='haglund'):
    """Sum the weights of a family over the common denominator and divide exactly."""
    _check_convention(convention)
    return sum_profiles(weight_profiles(matrices), convention)


@dataclass(frozen=True)
class LaurentPoly:
    """Laurent polynomial in q as sorted ((exponent, coefficient), ...) pairs."""
    terms: tuple

    @classmethod
    def from_dict(cls, coefficients):
        return cls(tuple(sorted((int(e), int(c)) for e, c in coefficients.items() if c)))

    def as_dict(self):
        return dict(self.terms)

    def shift(self, k):
        return LaurentPoly(tuple((e + k, c) for e, c in self.terms))

    @property
    def valuation(self):
        return self.terms[0][0] if self.terms else None

    @property
    def degree(self):
        return self.terms[-1][0] if self.terms else None

    def is_polynomial(self):
        return not self.terms or self.terms[0][0] >= 0

    def to_poly(self):
        if not self.is_polynomial():
            raise UnsupportedInputError(f"{self} has negative powers of q")
        return Q_RING.from_dict({(e,): c for e, c in self.terms})

    def __str__(self):
        return _format_terms([((e,), c) for e, c in self.terms], ('q',))


def specialize(poly, rule):
    """Substitute into a (q, t) polynomial.

    ``"t=0"`` gives a polynomial in q, ``"t=1/q"`` a LaurentPoly, and
    ``"q=a,t=b"`` (or a pair ``(a, b)``) an integer.
    """
    if isinstance(rule, (tuple, list)):
        q0, t0 = rule
        return evaluate(poly, q0, t0)
    key = rule.replace(' ', '').replace('**', '^')
    if key == 't=0':
        return Q_RING.from_dict({(a,): c for (a, b), c in poly.items() if b == 0})
    if key in ('t=1/q', 't=q^-1', 't=q^(-1)'):
        collected = defaultdict(int)
        for (a, b), c in poly.items():
            collected[a - b] += int(c)
        return LaurentPoly.from_dict(collected)
    values = {}
    for part in key.split(','):
        name, _, value = part.partition('=')
        try:
            values[name] = int(value)
        except ValueError:
            raise UnsupportedInputError(f"cannot parse specialization {rule!r}")
    if set(values) != {'q', 't'}:
        raise UnsupportedInputError(f"specialization {rule!r} must set both q and t, or be t=0 or t=1/q")
    return evaluate(poly, values['q'], values['t'])


def evaluate(poly, *values):
    total = 0
    for monom, coeff in poly.items():
        term = int(coeff)
        for exponent, value in zip(monom, values):
            term *= value**exponent
        total += term
    return total


def swap_qt(poly):
    return QT_RING.from_dict({(b, a): c for (a, b), c in poly.items()})


def coefficients(poly):
    return {tuple(monom): int(coeff) for monom, coeff in poly.items()}


def negative_terms(poly):
    return sorted(monom for monom, coeff in coefficients(poly).items() if coeff < 0)


def first_difference(lhs, rhs):
    """Smallest monomial where the two differ, or None when they agree."""
    left = lhs.as_dict() if isinstance(lhs, LaurentPoly) else coefficients(lhs)
    right = rhs.as_dict() if isinstance(rhs, LaurentPoly) else coefficients(rhs)
    for monom in sorted(set(left) | set(right)):
        if left.get(monom, 0) != right.get(monom, 0):
            return {'monomial': monom, 'lhs': left.get(monom, 0), 'rhs': right.get(monom, 0)}
    return None


def _format_monomial(monom, names):
    parts = []
    for name, exponent in zip(names, monom):
        if exponent == 1:
            parts.append(name)
        elif exponent:
            parts.append(f"{name}^{exponent}")
    return '*'.join(parts)


def _format_terms(terms, names):
    pieces = []
    for monom, coeff in terms:
        coeff = int(coeff)
        if not coeff:
            continue
        body = _format_monomial(monom, names)
        magnitude = abs(coeff)
        if not body:
            text = str(magnitude)
        elif magnitude == 1:
            text = body
        else:
            text = f"{magnitude}*{body}"
        if not pieces:
            pieces.append(text if coeff > 0 else f"-{text}")
        else:
            pieces.append(f"+ {text}" if coeff > 0 else f"- {text}")
    return ' '.join(pieces) if pieces else '0'


def format_poly(poly, descending=False):
    """Canonical text: by total degree (ascending unless ``descending``), then by
    falling powers of q within a degree, e.g. ``1 + q + t`` or ``q^2 + q*t + t^2``."""
    if isinstance(poly, LaurentPoly):
        return str(poly)
    names = tuple(str(g) for g in poly.ring.gens)
    items = list(coefficients(poly).items())
    sign = -1 if descending else 1
    items.sort(key=lambda item: (sign * sum(item[0]), tuple(-e for e in item[0])))
    return _format_terms(items, names)
