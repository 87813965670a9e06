"""Quotients of P(α) x B_{r-1} by equal sums, and the (q-1)-factorization they give.

A shift map is a matrix S of T(1,0^{r-1}) placed in the lower right corner of
an n x n matrix. Pairs (A, S) with the same sum A + S are identified; the
quotient is compared with P(α + e_p) for p = n - r + 1, where the sum lands.
"""
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from config import DEFAULT_MATRIX_CEILING
from errors import InvalidHookVectorError, VerificationError
from polynomials import Q, Q_RING, format_poly
from poset import (Poset, build_poset, characteristic_polynomial, expected_rank, is_explicit_isomorphism,
                   mobius, product)
from tesler_generator import enumerate_family
from tesler_matrix import GTMatrix, HookSumVector, cell_index, single_one_vector, subset_map, triangle_size

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ShiftMap:
    r: int
    matrix: GTMatrix
    label: frozenset

    def __str__(self):
        return '{' + ','.join(str(i) for i in sorted(self.label)) + '}'


def shift_map_poset(r):
    """T(1,0^{r-1}) as shift maps, ordered as a Tesler poset (a copy of B_{r-1})."""
    if r < 1:
        raise InvalidHookVectorError(f"block size must be positive, got {r}")
    base = build_poset(single_one_vector(r))
    return base.relabel(lambda m: ShiftMap(r, m, subset_map(m)), name=f"S_{r}")


def shift_embed(shift, n):
    """Place the r x r shift matrix in the lower right corner of an n x n matrix.

    The result is a member of T(e_p) with p = n - r + 1.
    """
    r = shift.r
    if r > n:
        raise InvalidHookVectorError(f"cannot embed a block of size {r} into size {n}")
    offset = n - r
    entries = [0] * triangle_size(n)
    for i in range(1, r + 1):
        for j in range(i, r + 1):
            entries[cell_index(n, i + offset, j + offset)] = shift.matrix.entry(i, j)
    alpha = [0] * n
    alpha[offset] = 1
    return GTMatrix(n, tuple(entries), HookSumVector(alpha))


def unit_vector(n, p):
    alpha = [0] * n
    alpha[p - 1] = 1
    return tuple(alpha)


@dataclass(frozen=True, eq=False)
class QuotientPoset:
    alpha: tuple
    r: int
    product: Poset
    classes: tuple
    class_of: tuple
    witnesses: tuple
    quotient: Poset

    @property
    def position(self):
        return len(self.alpha) - self.r + 1

    @property
    def target_alpha(self):
        return HookSumVector(a + e for a, e in zip(self.alpha, unit_vector(len(self.alpha), self.position)))

    @cached_property
    def product_mobius(self):
        return mobius(self.product)


def _check_precondition(alpha, r):
    n = len(alpha)
    if not 1 <= r <= n:
        raise InvalidHookVectorError(f"block size r={r} must lie in 1..{n}")
    if alpha[n - r] != 0:
        raise InvalidHookVectorError(
            f"alpha_{n - r + 1} must be 0 to add a shift block of size {r}, got {alpha[n - r]}")


def quotient_by_sum(alpha, r, ceiling=DEFAULT_MATRIX_CEILING):
    """Identify (A, S) ~ (A', S') in P(α) x S_r whenever A + S = A' + S'."""
    alpha = HookSumVector(alpha)
    _check_precondition(alpha, r)
    n = len(alpha)
    prod = product(build_poset(alpha, ceiling=ceiling), shift_map_poset(r))

    members = defaultdict(list)
    for x, (matrix, shift) in enumerate(prod.labels):
        members[(matrix + shift_embed(shift, n)).entries].append(x)
    keys = sorted(members)
    class_index = {key: c for c, key in enumerate(keys)}
    classes = tuple(tuple(members[key]) for key in keys)
    class_of = [0] * len(prod)
    for c, xs in enumerate(classes):
        for x in xs:
            class_of[x] = c

    target = HookSumVector(a + e for a, e in zip(alpha, unit_vector(n, n - r + 1)))
    witnesses = tuple(GTMatrix(n, key, target) for key in keys)
    upper = [set() for _ in classes]
    for x, y in prod.edges():
        if class_of[x] != class_of[y]:
            upper[class_of[x]].add(class_of[y])
    ranks = tuple(prod.ranks[xs[0]] for xs in classes)
    bottom = class_of[prod.bottom]
    quotient = Poset(witnesses, tuple(tuple(sorted(u)) for u in upper), ranks, bottom,
                     f"({prod.name})/~")
    logger.debug(f"Quotient of {prod.name}: {len(prod)} elements in {len(classes)} classes")
    return QuotientPoset(alpha, r, prod, classes, tuple(class_of), witnesses, quotient)


@dataclass
class ConditionResult:
    name: str
    passed: bool
    witness: dict = field(default_factory=dict)

    def to_dict(self):
        return {'name': self.name, 'passed': self.passed, 'witness': self.witness}


@dataclass
class ConditionReport:
    alpha: tuple
    r: int
    conditions: list

    @property
    def passed(self):
        return all(c.passed for c in self.conditions)

    def condition(self, name):
        for c in self.conditions:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self):
        return {'alpha': list(self.alpha), 'r': self.r,
                'conditions': [c.to_dict() for c in self.conditions]}


def _describe(qp, x):
    matrix, shift = qp.product.labels[x]
    return f"({matrix}, {shift})"


def _singleton_bottom(qp):
    bottom_class = qp.classes[qp.quotient.bottom]
    if len(bottom_class) == 1:
        return ConditionResult('singleton_bottom', True)
    return ConditionResult('singleton_bottom', False,
                           {'bottom_class': [_describe(qp, x) for x in bottom_class]})


def _homogeneity(qp):
    below = qp.product.below
    quotient_below = qp.quotient.below
    for big, big_members in enumerate(qp.classes):
        for small in np.flatnonzero(quotient_below[big]):
            small_members = list(qp.classes[small])
            reached = below[np.ix_(list(big_members), small_members)].any(axis=1)
            if not reached.all():
                x = big_members[int(np.flatnonzero(~reached)[0])]
                return ConditionResult('homogeneity', False, {
                    'upper_class': str(qp.witnesses[big]),
                    'lower_class': str(qp.witnesses[int(small)]),
                    'element': _describe(qp, x),
                })
    return ConditionResult('homogeneity', True)


def _rank_preserving(qp):
    for c, xs in enumerate(qp.classes):
        ranks = {qp.product.ranks[x] for x in xs}
        if len(ranks) != 1:
            return ConditionResult('rank_preserving', False,
                                   {'class': str(qp.witnesses[c]), 'ranks': sorted(ranks)})
    return ConditionResult('rank_preserving', True)


def _summation(qp):
    mu = np.array(qp.product_mobius.values, dtype=np.int64)
    for c, xs in enumerate(qp.classes):
        if c == qp.quotient.bottom:
            continue
        total = int(mu[qp.product.order_ideal(xs)].sum())
        if total != 0:
            return ConditionResult('summation', False, {'class': str(qp.witnesses[c]), 'sum': total})
    return ConditionResult('summation', True)


def _chi_preserved(qp):
    quotient_chi = characteristic_polynomial(qp.quotient)
    product_chi = characteristic_polynomial(qp.product, qp.product_mobius)
    if quotient_chi == product_chi:
        return ConditionResult('chi_preserved', True)
    return ConditionResult('chi_preserved', False, {
        'quotient': format_poly(quotient_chi, descending=True),
        'product': format_poly(product_chi, descending=True),
    })


def check_hs_conditions(qp):
    """Hallam–Sagan conditions on a built quotient. Failures are reported, never raised.

    The summation condition sums the product's Möbius function over the lower
    ideal of the product generated by each nonzero class.
    """
    return ConditionReport(tuple(qp.alpha), qp.r, [
        _singleton_bottom(qp),
        _homogeneity(qp),
        _rank_preserving(qp),
        _summation(qp),
        _chi_preserved(qp),
    ])


def check_witness_isomorphism(qp, ceiling=DEFAULT_MATRIX_CEILING):
    """The class -> witness map is a cover-preserving bijection onto P(α + e_p)."""
    target = build_poset(qp.target_alpha, ceiling=ceiling)
    mapping = []
    for witness in qp.witnesses:
        if witness not in target.index:
            return ConditionResult('witness_isomorphism', False, {'missing': str(witness)})
        mapping.append(target.index[witness])
    if not is_explicit_isomorphism(qp.quotient, target, mapping):
        return ConditionResult('witness_isomorphism', False, {
            'quotient_covers': len(qp.quotient.edges()),
            'target_covers': len(target.edges()),
            'quotient_size': len(qp.quotient),
            'target_size': len(target),
        })
    return ConditionResult('witness_isomorphism', True)


def check_coverage(alpha, r, ceiling=DEFAULT_MATRIX_CEILING):
    """Every matrix of T(α + e_p) is A + S for some A in T(α) and shift map S."""
    alpha = HookSumVector(alpha)
    _check_precondition(alpha, r)
    n = len(alpha)
    sums = {(a + shift_embed(s, n)).entries
            for a in enumerate_family(alpha, ceiling=ceiling)
            for s in shift_map_poset(r).labels}
    target = HookSumVector(a + e for a, e in zip(alpha, unit_vector(n, n - r + 1)))
    expected = {m.entries for m in enumerate_family(target, ceiling=ceiling)}
    missing = sorted(expected - sums)
    extra = sorted(sums - expected)
    witness = {}
    if missing:
        witness['missing'] = str(GTMatrix(n, missing[0], target))
    if extra:
        witness['extra'] = str(GTMatrix(n, extra[0], target))
    return ConditionResult('coverage', not missing and not extra, witness)


def check_first_sum_lemma(qp):
    """(A_0, S) and (A, S_0) never share a class when A and S are both above the bottoms."""
    matrix_bottom, shift_bottom = qp.product.labels[qp.product.bottom]
    n = len(qp.alpha)
    with_bottom_matrix = {}
    with_bottom_shift = {}
    for matrix, shift in qp.product.labels:
        if matrix == matrix_bottom and shift != shift_bottom:
            with_bottom_matrix[(matrix + shift_embed(shift, n)).entries] = (matrix, shift)
        elif shift == shift_bottom and matrix != matrix_bottom:
            with_bottom_shift[(matrix + shift_embed(shift, n)).entries] = (matrix, shift)
    shared = sorted(set(with_bottom_matrix) & set(with_bottom_shift))
    if shared:
        left = with_bottom_matrix[shared[0]]
        right = with_bottom_shift[shared[0]]
        return ConditionResult('first_sum_lemma', False, {
            'pair': [f"({left[0]}, {left[1]})", f"({right[0]}, {right[1]})"]})
    return ConditionResult('first_sum_lemma', True)


def check_isolation_dichotomy(qp):
    """Within the ideal generated by each class, a non-minimal first coordinate
    that only occurs with S_0 and a non-minimal second coordinate that only
    occurs with A_0 never both appear."""
    matrix_bottom, shift_bottom = qp.product.labels[qp.product.bottom]
    for c, xs in enumerate(qp.classes):
        ideal = [qp.product.labels[x] for x in np.flatnonzero(qp.product.order_ideal(xs))]
        partners_of_matrix = defaultdict(set)
        partners_of_shift = defaultdict(set)
        for matrix, shift in ideal:
            partners_of_matrix[matrix].add(shift)
            partners_of_shift[shift].add(matrix)
        isolated_matrices = [m for m, shifts in partners_of_matrix.items()
                             if m != matrix_bottom and shifts == {shift_bottom}]
        isolated_shifts = [s for s, matrices in partners_of_shift.items()
                           if s != shift_bottom and matrices == {matrix_bottom}]
        if isolated_matrices and isolated_shifts:
            return ConditionResult('isolation_dichotomy', False, {
                'class': str(qp.witnesses[c]),
                'matrix': str(min(isolated_matrices)),
                'shift': str(isolated_shifts[0]),
            })
    return ConditionResult('isolation_dichotomy', True)


def weight_exponent(alpha):
    # the rank of P(alpha); (q-1) to this power is chi for binary alpha
    return expected_rank(alpha)


def factor_out_q_minus_one(chi):
    """Largest k with (q-1)^k dividing χ, and the cofactor."""
    if not chi:
        return 0, chi
    k = 0
    while True:
        quotient, remainder = chi.div(Q - 1)
        if remainder:
            return k, chi
        chi = quotient
        k += 1


def format_factored(chi):
    """``q*(q-1)^3`` style text: the (q-1)-power pulled out of χ."""
    k, cofactor = factor_out_q_minus_one(chi)
    power = '' if k == 0 else '(q-1)' if k == 1 else f"(q-1)^{k}"
    if not power:
        return format_poly(cofactor, descending=True)
    if cofactor == Q_RING.one:
        return power
    body = format_poly(cofactor, descending=True)
    if len(cofactor) > 1:
        body = f"({body.replace(' ', '')})"
    return f"{body}*{power}"


@dataclass
class FactorizationStep:
    before: tuple
    after: tuple
    r: int
    classes: int
    conditions: list

    @property
    def established(self):
        required = {'singleton_bottom', 'rank_preserving', 'witness_isomorphism', 'chi_preserved'}
        return all(c.passed for c in self.conditions if c.name in required)

    def to_dict(self):
        return {
            'from': list(self.before), 'to': list(self.after), 'r': self.r, 'classes': self.classes,
            'established': self.established,
            'conditions': [c.to_dict() for c in self.conditions],
        }


@dataclass
class FactorizationTrace:
    alpha: tuple
    exponent: int
    chi: object
    direct_chi: object
    steps: list

    @property
    def matches_direct(self):
        return self.chi == self.direct_chi

    @property
    def verified(self):
        return self.matches_direct and all(step.established for step in self.steps)

    def to_dict(self):
        return {
            'alpha': list(self.alpha),
            'w': self.exponent,
            'chi': format_poly(self.chi, descending=True),
            'direct_chi': format_poly(self.direct_chi, descending=True),
            'matches_direct': self.matches_direct,
            'verified': self.verified,
            'steps': [step.to_dict() for step in self.steps],
        }


def verify_factorization(alpha, ceiling=DEFAULT_MATRIX_CEILING):
    """Build binary α from the zero vector by adding e_p for p = n, ..., 1, each time
    through the quotient of P(β) x B_{r-1}, and compare (q-1)^{w(α)} with the
    directly computed χ(P(α))."""
    alpha = HookSumVector(alpha)
    if not alpha.is_binary:
        raise InvalidHookVectorError(f"factorization pipeline needs a binary vector, got {alpha}")
    n = len(alpha)
    beta = [0] * n
    chi = Q_RING.one
    steps = []
    for p in range(n, 0, -1):
        if not alpha[p - 1]:
            continue
        r = n - p + 1
        qp = quotient_by_sum(beta, r, ceiling=ceiling)
        conditions = check_hs_conditions(qp).conditions
        conditions.append(check_witness_isomorphism(qp, ceiling=ceiling))
        after = tuple(qp.target_alpha)
        steps.append(FactorizationStep(tuple(beta), after, r, len(qp.classes), conditions))
        chi = chi * (Q - 1)**(r - 1)
        logger.debug(f"{tuple(beta)} -> {after} with r={r}: {len(qp.classes)} classes")
        beta = list(after)
    if tuple(beta) != tuple(alpha):
        raise VerificationError(f"pipeline ended at {tuple(beta)} instead of {tuple(alpha)}")
    direct = characteristic_polynomial(build_poset(alpha, ceiling=ceiling))
    exponent = weight_exponent(alpha)
    if chi != (Q - 1)**exponent:
        raise VerificationError(f"accumulated {format_poly(chi)} is not (q-1)^{exponent}")
    return FactorizationTrace(tuple(alpha), exponent, chi, direct, steps)


def binary_word_weight(beta, length):
    """Σ (length - i) β_i.

    A leading word is weighed against the full vector length n, a trailing
    word against its own length k.
    """
    return sum((length - i) * b for i, b in enumerate(beta, start=1))


@dataclass
class DivisibilityResult:
    alpha: tuple
    beta: tuple
    side: str
    exponent: int
    divides: bool
    chi: object

    def to_dict(self):
        return {'alpha': list(self.alpha), 'beta': list(self.beta), 'side': self.side,
                'exponent': self.exponent, 'divides': self.divides,
                'chi': format_poly(self.chi, descending=True)}


def check_divisibility(alpha, beta, side='leading', ceiling=DEFAULT_MATRIX_CEILING):
    """Does (q-1)^{w(β)} divide χ(P(β,α)) (leading) or χ(P(α,β)) (trailing)?"""
    beta = tuple(int(b) for b in beta)
    if any(b not in (0, 1) for b in beta):
        raise InvalidHookVectorError(f"beta must be a binary word, got {beta}")
    if side not in ('leading', 'trailing'):
        raise InvalidHookVectorError(f"side must be 'leading' or 'trailing', got {side!r}")
    alpha = tuple(int(a) for a in alpha)
    full = beta + alpha if side == 'leading' else alpha + beta
    chi = characteristic_polynomial(build_poset(full, ceiling=ceiling))
    exponent = binary_word_weight(beta, len(full) if side == 'leading' else len(beta))
    divides = factor_out_q_minus_one(chi)[0] >= exponent
    return DivisibilityResult(alpha, beta, side, exponent, divides, chi)
