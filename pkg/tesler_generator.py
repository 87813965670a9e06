"""Generating generalized Tesler matrices and counting them.

A matrix of size n produces dpro(A) children of size n+1: for each diagonal
entry d_i keep d_i' <= d_i on the diagonal, push d_i - d_i' into the new last
column and set the new corner so the last hook sum is right. Children depend
only on the parent's diagonal, which is what the counter exploits.
"""
import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product, repeat

from tqdm import tqdm

from config import DEFAULT_JOBS, DEFAULT_MATRIX_CEILING, DEFAULT_TRANSITION_CEILING, PROGRESS_EVERY
from errors import ResourceLimitError, VerificationError
from tesler_matrix import GTMatrix, HookSumVector, diagonal_product

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FamilyEnumeration:
    alpha: tuple
    matrices: tuple

    @property
    def count(self):
        return len(self.matrices)

    def __iter__(self):
        return iter(self.matrices)

    def __len__(self):
        return len(self.matrices)


def children(matrix, next_alpha):
    """All size n+1 matrices generated from ``matrix`` with last hook sum ``next_alpha``."""
    if next_alpha < 0:
        raise ValueError(f"next hook sum must be non-negative, got {next_alpha}")
    rows = matrix.rows
    diagonal = matrix.diagonal
    total = sum(diagonal)
    alpha = HookSumVector(tuple(matrix.alpha) + (next_alpha,))
    kids = []
    for kept in product(*(range(d + 1) for d in diagonal)):
        entries = []
        for i, row in enumerate(rows):
            entries.append(kept[i])
            entries.extend(row[1:])
            entries.append(diagonal[i] - kept[i])
        entries.append(next_alpha + total - sum(kept))
        kids.append(GTMatrix(matrix.n + 1, tuple(entries), alpha))
    return kids


def seed(alpha):
    alpha = HookSumVector(alpha)
    return GTMatrix(1, (alpha[0],), HookSumVector(alpha[:1]))


def iter_family(alpha):
    """Stream T(α) depth-first; nothing is materialized."""
    alpha = HookSumVector(alpha)

    def descend(matrix, depth):
        if depth == len(alpha):
            yield matrix
            return
        for child in children(matrix, alpha[depth]):
            yield from descend(child, depth + 1)

    yield from descend(seed(alpha), 1)


def visit_family(alpha, visitor, jobs=DEFAULT_JOBS):
    """Call ``visitor(matrix)`` for every member of T(α) and return how many were visited.

    With ``jobs > 1`` subtrees are generated in worker processes, but the
    visitor is still called serially, in canonical order per subtree, from
    this process.
    """
    visited = 0
    if jobs > 1 and len(alpha) > 2:
        source = _parallel_subtrees(HookSumVector(alpha), jobs)
    else:
        source = iter_family(alpha)
    for matrix in source:
        visitor(matrix)
        visited += 1
        if visited % PROGRESS_EVERY == 0:
            logger.info(f"Visited {visited} matrices of T({HookSumVector(alpha)})")
    return visited


def _iter_subtree(root, rest):
    def descend(matrix, depth):
        if depth == len(rest):
            yield matrix
            return
        for child in children(matrix, rest[depth]):
            yield from descend(child, depth + 1)

    yield from descend(root, 0)


def _subtree(root, rest):
    return list(_iter_subtree(root, rest))


def _fold_subtree(root, rest, fold):
    return fold(_iter_subtree(root, rest))


def _split(alpha):
    # split at the second level; every child of the seed is an independent subtree
    return children(seed(alpha), alpha[1]), tuple(alpha[2:])


def _parallel_subtrees(alpha, jobs):
    roots, rest = _split(alpha)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for block in pool.map(_subtree, roots, repeat(rest)):
            yield from block


def fold_family(alpha, fold, jobs=DEFAULT_JOBS):
    """Apply ``fold`` to streams of T(α) and return the partial results.

    Serially there is one stream, the whole family. With ``jobs > 1`` each
    worker folds one subtree and the partials come back in canonical root
    order, so reducing them left to right is deterministic. ``fold`` must
    be picklable.
    """
    alpha = HookSumVector(alpha)
    if jobs <= 1 or len(alpha) <= 2:
        return [fold(iter_family(alpha))]
    roots, rest = _split(alpha)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        partials = list(pool.map(_fold_subtree, roots, repeat(rest), repeat(fold)))
    logger.debug(f"Folded T({alpha}) in {len(partials)} subtrees")
    return partials


def enumerate_family(alpha, ceiling=DEFAULT_MATRIX_CEILING, jobs=DEFAULT_JOBS, progress=False):
    """Materialize T(α) in canonical (row-major lexicographic) order."""
    alpha = HookSumVector(alpha)
    if ceiling is not None:
        expected = count(alpha)
        if expected > ceiling:
            raise ResourceLimitError(f"T({alpha})", ceiling, expected)
    matrices = []
    bar = tqdm(desc=f"T({alpha})", unit='matrix', disable=not progress)
    visit_family(alpha, lambda m: (matrices.append(m), bar.update()), jobs=jobs)
    bar.close()
    matrices.sort(key=lambda m: m.entries)
    if __debug__:
        for previous, current in zip(matrices, matrices[1:]):
            if previous.entries == current.entries:
                raise VerificationError(f"duplicate matrix {current} in T({alpha})")
    logger.debug(f"Enumerated {len(matrices)} matrices of T({alpha})")
    return FamilyEnumeration(alpha, tuple(matrices))


def _weak_compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _weak_compositions(total - first, parts - 1):
            yield (first,) + rest


def _fill_rows(alpha, k, column_sums, prefix):
    n = len(alpha)
    if k == n:
        yield prefix
        return
    for row in _weak_compositions(alpha[k] + column_sums[k], n - k):
        sums = list(column_sums)
        for column, value in enumerate(row[1:], start=k + 1):
            sums[column] += value
        yield from _fill_rows(alpha, k + 1, sums, prefix + row)


def brute_force_enumerate(alpha, ceiling=DEFAULT_MATRIX_CEILING):
    """Independent oracle: fill rows top-down, each row a weak composition of
    α_k plus what column k received from above."""
    alpha = HookSumVector(alpha)
    n = len(alpha)
    matrices = []
    for entries in _fill_rows(alpha, 0, [0] * n, ()):
        matrices.append(GTMatrix(n, entries, alpha))
        if ceiling is not None and len(matrices) > ceiling:
            raise ResourceLimitError(f"T({alpha})", ceiling)
    # row-wise compositions come out in lexicographic order already
    return FamilyEnumeration(alpha, tuple(matrices))


def _advance_chunk(items, next_alpha):
    states = Counter()
    for diagonal, multiplicity in items:
        total = sum(diagonal)
        for kept in product(*(range(d + 1) for d in diagonal)):
            states[kept + (next_alpha + total - sum(kept),)] += multiplicity
    return states


def _chunks(items, pieces):
    size = max(1, -(-len(items) // pieces))
    return [items[i:i + size] for i in range(0, len(items), size)]


def diagonal_census(alpha, jobs=DEFAULT_JOBS, ceiling=DEFAULT_TRANSITION_CEILING, progress=False):
    """Multiplicity of every main diagonal over T(α), as a Counter keyed by diagonal."""
    alpha = HookSumVector(alpha)
    states = Counter({(alpha[0],): 1})
    levels = tqdm(alpha[1:], desc=f"census T({alpha})", unit='level', disable=not progress)
    for level, next_alpha in enumerate(levels, start=2):
        transitions = sum(diagonal_product(d) for d in states)
        if ceiling is not None and transitions > ceiling:
            raise ResourceLimitError(f"diagonal transitions at size {level} of T({alpha})", ceiling, transitions)
        items = sorted(states.items())
        if jobs > 1 and len(items) > jobs:
            merged = Counter()
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                for partial in pool.map(_advance_chunk, _chunks(items, jobs * 4), repeat(next_alpha)):
                    merged.update(partial)
            states = merged
        else:
            states = _advance_chunk(items, next_alpha)
        logger.debug(f"Size {level}: {len(states)} distinct diagonals after {transitions} transitions")
    return states


def count(alpha, jobs=DEFAULT_JOBS, ceiling=DEFAULT_TRANSITION_CEILING, progress=False):
    """|T(α)| as Σ dpro over T(α_1..α_{n-1}); the last hook sum never matters."""
    alpha = HookSumVector(alpha)
    if len(alpha) == 1:
        return 1
    census = diagonal_census(alpha[:-1], jobs=jobs, ceiling=ceiling, progress=progress)
    return sum(multiplicity * diagonal_product(d) for d, multiplicity in census.items())


def dpro_distribution(alpha, jobs=DEFAULT_JOBS, ceiling=DEFAULT_TRANSITION_CEILING):
    """Counter mapping diagonal product -> number of matrices in T(α) with it."""
    distribution = Counter()
    for diagonal, multiplicity in diagonal_census(alpha, jobs=jobs, ceiling=ceiling).items():
        distribution[diagonal_product(diagonal)] += multiplicity
    return distribution
