"""Finite ranked posets with a least element, and the Tesler poset P(α).

Posets are stored by their Hasse diagram: element i is covered by
``upper_covers[i]``. The order relation is materialized lazily as a dense
numpy boolean matrix ``below`` where ``below[x, y]`` means y <= x.
"""
import logging
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

import networkx as nx
import numpy as np

from config import DEFAULT_MATRIX_CEILING, ISOMORPHISM_LIMIT, POSET_DENSE_LIMIT
from errors import InvalidMatrixError, ResourceLimitError, VerificationError
from polynomials import Q_RING
from tesler_generator import count, enumerate_family
from tesler_matrix import GTMatrix, HookSumVector, cell_index

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Poset:
    labels: tuple
    upper_covers: tuple
    ranks: tuple
    bottom: int
    name: str = ''

    def __post_init__(self):
        size = len(self.labels)
        if len(self.upper_covers) != size or len(self.ranks) != size:
            raise VerificationError(f"{self.name or 'poset'}: labels, covers and ranks disagree in length")
        if self.ranks[self.bottom] != 0:
            raise VerificationError(f"{self.name or 'poset'}: bottom element has rank {self.ranks[self.bottom]}")
        for x, ups in enumerate(self.upper_covers):
            for y in ups:
                if self.ranks[y] != self.ranks[x] + 1:
                    raise VerificationError(
                        f"{self.name or 'poset'}: cover {x} -> {y} goes from rank {self.ranks[x]} to {self.ranks[y]}")
        minimal = [x for x, downs in enumerate(self.lower_covers) if not downs]
        if minimal != [self.bottom]:
            raise VerificationError(f"{self.name or 'poset'}: minimal elements {minimal}, expected only {self.bottom}")

    def __len__(self):
        return len(self.labels)

    @property
    def rank(self):
        return max(self.ranks)

    @cached_property
    def lower_covers(self):
        downs = [[] for _ in self.labels]
        for x, ups in enumerate(self.upper_covers):
            for y in ups:
                downs[y].append(x)
        return tuple(tuple(sorted(d)) for d in downs)

    @cached_property
    def index(self):
        return {label: i for i, label in enumerate(self.labels)}

    @cached_property
    def order(self):
        """Indices sorted by rank, so every element comes after everything below it."""
        return tuple(sorted(range(len(self.labels)), key=lambda i: (self.ranks[i], i)))

    @cached_property
    def below(self):
        size = len(self.labels)
        if size > POSET_DENSE_LIMIT:
            raise ResourceLimitError(f"order closure of {self.name or 'poset'}", POSET_DENSE_LIMIT, size)
        below = np.zeros((size, size), dtype=bool)
        for x in self.order:
            below[x, x] = True
            for y in self.lower_covers[x]:
                below[x] |= below[y]
        return below

    def leq(self, x, y):
        return bool(self.below[y, x])

    def order_ideal(self, elements):
        """Boolean mask of the lower order ideal generated by ``elements``."""
        elements = list(elements)
        if not elements:
            return np.zeros(len(self.labels), dtype=bool)
        return self.below[elements].any(axis=0)

    def edges(self):
        return [(x, y) for x, ups in enumerate(self.upper_covers) for y in ups]

    def level_sizes(self):
        sizes = [0] * (self.rank + 1)
        for r in self.ranks:
            sizes[r] += 1
        return tuple(sizes)

    def relabel(self, fn, name=None):
        return Poset(tuple(fn(label) for label in self.labels), self.upper_covers, self.ranks,
                     self.bottom, self.name if name is None else name)

    def hasse_digraph(self):
        graph = nx.DiGraph()
        for x, r in enumerate(self.ranks):
            graph.add_node(x, rank=r)
        graph.add_edges_from(self.edges())
        return graph


@dataclass(frozen=True)
class MobiusVector:
    """μ(0̂, x) for every element, indexed like the poset."""
    values: tuple

    def __getitem__(self, x):
        return self.values[x]

    def __len__(self):
        return len(self.values)

    def max_abs(self):
        return max(abs(v) for v in self.values)

    def by_rank(self, poset):
        levels = defaultdict(list)
        for x in poset.order:
            levels[poset.ranks[x]].append(self.values[x])
        return [sorted(levels[r]) for r in range(poset.rank + 1)]

    def recursion_violations(self, poset):
        """Elements x != 0̂ whose lower interval does not sum to zero."""
        mu = np.array(self.values, dtype=np.int64)
        violations = []
        if mu[poset.bottom] != 1:
            violations.append(poset.bottom)
        for x in range(len(poset)):
            if x != poset.bottom and mu[poset.below[x]].sum() != 0:
                violations.append(x)
        return violations


def covering_matrices(matrix):
    """Every matrix covering ``matrix`` in P(α), by the two unit-transfer moves."""
    n = matrix.n
    entries = matrix.entries
    covers = []

    def moved(source, first, second):
        changed = list(entries)
        changed[source] -= 1
        changed[first] += 1
        changed[second] += 1
        return GTMatrix(n, tuple(changed), matrix.alpha)

    for i in range(1, n + 1):
        for k in range(i, n + 1):
            source = cell_index(n, i, k)
            if not entries[source]:
                continue
            if k == i:
                for j in range(i + 1, n + 1):
                    covers.append(moved(source, cell_index(n, i, j), cell_index(n, j, j)))
            else:
                for j in range(i + 1, k):
                    covers.append(moved(source, cell_index(n, i, j), cell_index(n, j, k)))
    return covers


def is_cover(a, b):
    if a.n != b.n or tuple(a.alpha) != tuple(b.alpha):
        raise InvalidMatrixError(f"cannot compare a matrix of T({a.alpha}) with one of T({b.alpha})")
    n = a.n
    diff = {}
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            delta = a.entry(i, j) - b.entry(i, j)
            if delta:
                diff[(i, j)] = delta
    if len(diff) != 3:
        return False
    for (i, k), delta in diff.items():
        if delta != -1:
            continue
        if i == k:
            for j in range(i + 1, n + 1):
                if diff == {(i, i): -1, (i, j): 1, (j, j): 1}:
                    return True
        else:
            for j in range(i + 1, k):
                if diff == {(i, k): -1, (i, j): 1, (j, k): 1}:
                    return True
    return False


def _assemble(matrices, alpha):
    position = {m.entries: i for i, m in enumerate(matrices)}
    upper = []
    for m in matrices:
        ups = []
        for cover in covering_matrices(m):
            try:
                ups.append(position[cover.entries])
            except KeyError:
                raise VerificationError(f"cover {cover} of {m} is missing from T({alpha})")
        upper.append(tuple(sorted(set(ups))))
    bottom = position[GTMatrix.bottom(alpha).entries]
    poset = Poset(matrices, tuple(upper), tuple(m.rank for m in matrices), bottom, f"P({alpha})")
    if poset.rank != expected_rank(alpha):
        raise VerificationError(f"{poset.name} has rank {poset.rank}, expected {expected_rank(alpha)}")
    logger.debug(f"Built {poset.name}: {len(poset)} elements, {len(poset.edges())} covers, rank {poset.rank}")
    return poset


def build_poset(alpha, ceiling=DEFAULT_MATRIX_CEILING, jobs=1):
    """P(α): T(α) under the Tesler cover relation, ranked by off-diagonal sum."""
    alpha = HookSumVector(alpha)
    family = enumerate_family(alpha, ceiling=ceiling, jobs=jobs)
    return _assemble(family.matrices, alpha)


def poset_from_matrices(matrices, alpha=None):
    """P(α) on matrices read back from elsewhere; they must be exactly T(α)."""
    matrices = tuple(sorted(matrices, key=lambda m: m.entries))
    if not matrices:
        raise InvalidMatrixError("no matrices given")
    alpha = HookSumVector(matrices[0].alpha if alpha is None else alpha)
    for m in matrices:
        if tuple(m.alpha) != tuple(alpha):
            raise InvalidMatrixError(f"{m} has hook sums {tuple(m.alpha)}, not {tuple(alpha)}")
    for previous, current in zip(matrices, matrices[1:]):
        if previous.entries == current.entries:
            raise InvalidMatrixError(f"{current} appears twice")
    expected = count(alpha)
    if len(matrices) != expected:
        raise InvalidMatrixError(f"{len(matrices)} matrices given, T({alpha}) has {expected}")
    return _assemble(matrices, alpha)


def expected_rank(alpha):
    n = len(alpha)
    return sum((n - i) * a for i, a in enumerate(alpha, start=1))


def boolean_lattice(k):
    size = 1 << k
    labels = tuple(frozenset(i + 1 for i in range(k) if mask >> i & 1) for mask in range(size))
    upper = tuple(tuple(mask | 1 << i for i in range(k) if not mask >> i & 1) for mask in range(size))
    ranks = tuple(bin(mask).count('1') for mask in range(size))
    return Poset(labels, upper, ranks, 0, f"B_{k}")


def chain(length):
    upper = tuple((i + 1,) if i < length else () for i in range(length + 1))
    return Poset(tuple(range(length + 1)), upper, tuple(range(length + 1)), 0, f"C_{length}")


def product(first, second):
    """Componentwise order; element (i, j) sits at index i * len(second) + j."""
    width = len(second)
    labels, upper, ranks = [], [], []
    for i, a in enumerate(first.labels):
        for j, b in enumerate(second.labels):
            labels.append((a, b))
            ups = [k * width + j for k in first.upper_covers[i]]
            ups += [i * width + k for k in second.upper_covers[j]]
            upper.append(tuple(sorted(ups)))
            ranks.append(first.ranks[i] + second.ranks[j])
    bottom = first.bottom * width + second.bottom
    return Poset(tuple(labels), tuple(upper), tuple(ranks), bottom, f"{first.name} x {second.name}")


def mobius(poset):
    """μ(0̂, x) by increasing rank: μ(x) = -Σ_{y < x} μ(y)."""
    below = poset.below
    mu = np.zeros(len(poset), dtype=np.int64)
    for x in poset.order:
        if x == poset.bottom:
            mu[x] = 1
            continue
        strictly = below[x].copy()
        strictly[x] = False
        mu[x] = -mu[strictly].sum()
    return MobiusVector(tuple(int(v) for v in mu))


def characteristic_polynomial(poset, mu=None):
    """χ(P; q) = Σ μ(0̂, x) q^{ρ(P) - ρ(x)} as an element of Z[q]."""
    mu = mobius(poset) if mu is None else mu
    top = poset.rank
    coefficients = defaultdict(int)
    for x, value in enumerate(mu.values):
        coefficients[(top - poset.ranks[x],)] += value
    return Q_RING.from_dict(dict(coefficients))


def is_isomorphic_small(first, second, limit=ISOMORPHISM_LIMIT):
    """Order-isomorphism test on Hasse diagrams, matching ranks."""
    for poset in (first, second):
        if len(poset) > limit:
            raise ResourceLimitError(f"isomorphism search on {poset.name or 'poset'}", limit, len(poset))
    if len(first) != len(second) or first.level_sizes() != second.level_sizes():
        return False
    if len(first.edges()) != len(second.edges()):
        return False
    return nx.is_isomorphic(first.hasse_digraph(), second.hasse_digraph(),
                            node_match=lambda a, b: a['rank'] == b['rank'])


def is_explicit_isomorphism(first, second, mapping):
    """Check that ``mapping[x]`` (index in ``second``) is a bijection carrying
    covers of ``first`` exactly onto covers of ``second``."""
    if len(mapping) != len(first) or len(first) != len(second):
        return False
    if sorted(mapping) != list(range(len(second))):
        return False
    image = {(mapping[x], mapping[y]) for x, y in first.edges()}
    return image == set(second.edges())


def find_join_failure(poset):
    """A pair of elements without a unique minimal upper bound, or None for a lattice-like poset.

    Returns ``(a, b, minimal_upper_bounds)`` as indices.
    """
    below = poset.below
    above = below.T
    for a, b in combinations(range(len(poset)), 2):
        bounds = above[a] & above[b]
        candidates = np.flatnonzero(bounds)
        minimal = [int(u) for u in candidates if (below[u] & bounds).sum() == 1]
        if len(minimal) != 1:
            return a, b, tuple(minimal)
    return None
