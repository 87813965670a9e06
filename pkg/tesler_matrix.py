"""Generalized Tesler matrices, hook sums and the integral-flow view.

Matrices are stored as the flattened upper triangle in row-major order, so a
matrix of size n carries n(n+1)/2 entries. Public indices are 1-based to match
the usual a_{i,j} notation.
"""
import json
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from math import prod

from errors import InvalidHookVectorError, InvalidMatrixError, UnsupportedInputError

logger = logging.getLogger(__name__)

MAX_ENTRY = 2**32 - 1


class HookSumVector(tuple):
    """Hook-sum vector α = (α_1, ..., α_n), written left to right.

    Accepts any iterable of integers or a comma-separated string such as
    ``"1,1,1"``.
    """

    def __new__(cls, values):
        if isinstance(values, str):
            parts = [part.strip() for part in values.split(',') if part.strip()]
            try:
                values = [int(part) for part in parts]
            except ValueError:
                raise InvalidHookVectorError(f"not a comma-separated list of integers: {values!r}")
        entries = tuple(int(v) for v in values)
        if not entries:
            raise InvalidHookVectorError("hook-sum vector must have at least one entry")
        if any(v < 0 for v in entries):
            raise InvalidHookVectorError(f"hook sums must be non-negative, got {entries}")
        return super().__new__(cls, entries)

    @property
    def n(self):
        return len(self)

    @property
    def is_binary(self):
        return all(v in (0, 1) for v in self)

    def __str__(self):
        return ','.join(str(v) for v in self)


def triangle_size(n):
    return n * (n + 1) // 2


@lru_cache(maxsize=None)
def row_offsets(n):
    offsets = []
    position = 0
    for i in range(n):
        offsets.append(position)
        position += n - i
    return tuple(offsets)


def cell_index(n, i, j):
    return row_offsets(n)[i - 1] + (j - i)


@dataclass(frozen=True)
class GTMatrix:
    n: int
    entries: tuple
    alpha: tuple

    def __post_init__(self):
        if self.n < 1:
            raise InvalidMatrixError(f"matrix size must be positive, got {self.n}")
        if len(self.entries) != triangle_size(self.n):
            raise InvalidMatrixError(
                f"size {self.n} needs {triangle_size(self.n)} entries, got {len(self.entries)}")
        if len(self.alpha) != self.n:
            raise InvalidMatrixError(f"alpha {tuple(self.alpha)} does not have length {self.n}")

    # construction

    @classmethod
    def from_rows(cls, rows, alpha=None):
        """Build from ``rows[i] = (a_{i+1,i+1}, ..., a_{i+1,n})``.

        Without ``alpha`` the hook sums are taken as declared; with it they
        are checked.
        """
        rows = [tuple(int(v) for v in row) for row in rows]
        n = len(rows)
        for i, row in enumerate(rows):
            if len(row) != n - i:
                raise InvalidMatrixError(f"row {i + 1} should hold {n - i} entries, got {len(row)}")
        entries = tuple(v for row in rows for v in row)
        _check_entries(entries)
        computed = _hook_sums_flat(n, entries)
        if alpha is None:
            if any(h < 0 for h in computed):
                raise InvalidMatrixError(f"negative hook sum in {computed}")
            return cls(n, entries, HookSumVector(computed))
        alpha = HookSumVector(alpha)
        if computed != tuple(alpha):
            raise InvalidMatrixError(f"hook sums {computed} do not match declared alpha {tuple(alpha)}")
        return cls(n, entries, alpha)

    @classmethod
    def from_square(cls, square, alpha=None):
        n = len(square)
        for i, row in enumerate(square):
            if len(row) != n:
                raise InvalidMatrixError("matrix must be square")
            if any(row[j] != 0 for j in range(i)):
                raise InvalidMatrixError(f"nonzero entry below the diagonal in row {i + 1}")
        return cls.from_rows([row[i:] for i, row in enumerate(square)], alpha)

    @classmethod
    def bottom(cls, alpha):
        """The matrix with diagonal α and zeros elsewhere (least element of P(α))."""
        alpha = HookSumVector(alpha)
        n = len(alpha)
        entries = [0] * triangle_size(n)
        for i, a in enumerate(alpha, start=1):
            entries[cell_index(n, i, i)] = a
        return cls(n, tuple(entries), alpha)

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        matrix = cls.from_rows(data['rows'], data.get('alpha'))
        if 'n' in data and data['n'] != matrix.n:
            raise InvalidMatrixError(f"declared n={data['n']} but rows describe size {matrix.n}")
        return matrix

    # views

    def entry(self, i, j):
        if i > j:
            return 0
        return self.entries[cell_index(self.n, i, j)]

    @property
    def rows(self):
        offsets = row_offsets(self.n)
        return tuple(self.entries[offsets[i]:offsets[i] + self.n - i] for i in range(self.n))

    @property
    def diagonal(self):
        return tuple(self.entries[offset] for offset in row_offsets(self.n))

    @property
    def rank(self):
        return sum(self.entries) - sum(self.diagonal)

    def positive_entries(self):
        return tuple(v for v in self.entries if v > 0)

    def hook_sums(self):
        return _hook_sums_flat(self.n, self.entries)

    def to_square(self):
        square = [[0] * self.n for _ in range(self.n)]
        for i, row in enumerate(self.rows):
            for offset, value in enumerate(row):
                square[i][i + offset] = value
        return square

    def to_json(self):
        return {'n': self.n, 'alpha': list(self.alpha), 'rows': [list(row) for row in self.rows]}

    def dumps(self):
        return json.dumps(self.to_json(), separators=(',', ':'))

    def label(self):
        return ' / '.join(' '.join(str(v) for v in row) for row in self.rows)

    def validate(self):
        _check_entries(self.entries)
        computed = self.hook_sums()
        if computed != tuple(self.alpha):
            raise InvalidMatrixError(f"hook sums {computed} do not match declared alpha {tuple(self.alpha)}")
        return self

    def __add__(self, other):
        if not isinstance(other, GTMatrix):
            return NotImplemented
        if other.n != self.n:
            raise InvalidMatrixError(f"cannot add matrices of sizes {self.n} and {other.n}")
        return GTMatrix(
            self.n,
            tuple(a + b for a, b in zip(self.entries, other.entries)),
            HookSumVector(a + b for a, b in zip(self.alpha, other.alpha)),
        )

    def __lt__(self, other):
        return (self.n, self.entries) < (other.n, other.entries)

    def __str__(self):
        return '[' + ','.join('[' + ','.join(str(v) for v in row) + ']' for row in self.rows) + ']'


def _check_entries(entries):
    for value in entries:
        if value < 0:
            raise InvalidMatrixError(f"entries must be non-negative, got {value}")
        if value > MAX_ENTRY:
            raise InvalidMatrixError(f"entry {value} does not fit in 32 bits")


def _hook_sums_flat(n, entries):
    offsets = row_offsets(n)
    sums = []
    for k in range(n):
        row_part = sum(entries[offsets[k]:offsets[k] + n - k])
        column_part = sum(entries[offsets[i] + (k - i)] for i in range(k))
        sums.append(row_part - column_part)
    return tuple(sums)


def hook_sums(matrix):
    """Hook sums (h_1, ..., h_n) of a square upper-triangular matrix or a GTMatrix."""
    if isinstance(matrix, GTMatrix):
        return matrix.hook_sums()
    n = len(matrix)
    for i, row in enumerate(matrix):
        if len(row) != n:
            raise InvalidMatrixError("matrix must be square")
        if any(row[j] != 0 for j in range(i)):
            raise InvalidMatrixError(f"nonzero entry below the diagonal in row {i + 1}")
        if any(v < 0 for v in row):
            raise InvalidMatrixError("entries must be non-negative")
    entries = tuple(int(row[j]) for i, row in enumerate(matrix) for j in range(i, n))
    return _hook_sums_flat(n, entries)


def diagonal_product(matrix):
    diagonal = matrix.diagonal if isinstance(matrix, GTMatrix) else matrix
    return prod(d + 1 for d in diagonal)


@dataclass(frozen=True)
class IntegralFlow:
    """Edge flows on the complete DAG with vertices 1..vertices.

    Only positive flows are kept in ``flow``; missing edges carry 0.
    """
    vertices: int
    flow: dict = field(hash=False)
    netflow: tuple

    def __post_init__(self):
        cleaned = {}
        for (i, j), value in self.flow.items():
            if not 1 <= i < j <= self.vertices:
                raise InvalidMatrixError(f"edge ({i},{j}) is not an edge of the DAG on {self.vertices} vertices")
            if value < 0:
                raise InvalidMatrixError(f"negative flow {value} on edge ({i},{j})")
            if value:
                cleaned[(i, j)] = int(value)
        object.__setattr__(self, 'flow', dict(sorted(cleaned.items())))
        object.__setattr__(self, 'netflow', tuple(self.netflow))

    def value(self, i, j):
        return self.flow.get((i, j), 0)

    def excess(self, k):
        out = sum(v for (i, _), v in self.flow.items() if i == k)
        into = sum(v for (_, j), v in self.flow.items() if j == k)
        return out - into


def to_flow(matrix):
    n = matrix.n
    flow = {}
    for i in range(1, n + 1):
        flow[(i, n + 1)] = matrix.entry(i, i)
        for j in range(i + 1, n + 1):
            flow[(i, j)] = matrix.entry(i, j)
    netflow = tuple(matrix.alpha) + (-sum(matrix.alpha),)
    return IntegralFlow(n + 1, flow, netflow)


def from_flow(flow):
    n = flow.vertices - 1
    if n < 1 or len(flow.netflow) != flow.vertices:
        raise InvalidMatrixError(f"netflow {flow.netflow} does not match {flow.vertices} vertices")
    if flow.netflow[-1] != -sum(flow.netflow[:-1]):
        raise InvalidMatrixError(f"last netflow coordinate must be {-sum(flow.netflow[:-1])}, got {flow.netflow[-1]}")
    for k in range(1, flow.vertices + 1):
        if flow.excess(k) != flow.netflow[k - 1]:
            raise InvalidMatrixError(f"flow is not conserved at vertex {k}")
    entries = [0] * triangle_size(n)
    for i in range(1, n + 1):
        entries[cell_index(n, i, i)] = flow.value(i, n + 1)
        for j in range(i + 1, n + 1):
            entries[cell_index(n, i, j)] = flow.value(i, j)
    return GTMatrix(n, tuple(entries), HookSumVector(flow.netflow[:-1]))


def single_one_vector(n):
    return HookSumVector((1,) + (0,) * (n - 1))


def subset_map(matrix):
    """Subset of [n-1] for a matrix of T(1,0^{n-1}).

    i is in the subset iff column n-i+1 has a nonzero entry.
    """
    n = matrix.n
    if tuple(matrix.alpha) != tuple(single_one_vector(n)):
        raise UnsupportedInputError(f"subset map is defined for alpha=(1,0^{n - 1}), got {tuple(matrix.alpha)}")
    chosen = set()
    for i in range(1, n):
        column = n - i + 1
        if any(matrix.entry(row, column) for row in range(1, column + 1)):
            chosen.add(i)
    return frozenset(chosen)
