import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import List, Optional, Sequence, Tuple, Union

Rational = Fraction
Vector = Tuple[Fraction, ...]


class Error(Exception):
    """Base class for exceptions in this module."""


class DimensionMismatchError(Error):
    """Raised when matrix and vector dimensions do not agree"""


class RationalParseError(Error):
    """Raised when a string is not of the form [sign]integer[/positive integer]"""


rational_pattern = re.compile(r'^[+-]?\d+(/\d+)?$')


def parse_rational(text: Union[str, int, Fraction]) -> Fraction:
    """
    Parses an exact rational such as ``-3/4`` or ``5``. Decimals are rejected.

    :param text: the string to parse, ints and Fractions are passed through
    :return: the rational number in canonical form
    :raise RationalParseError: when the text does not match the grammar or divides by zero
    """
    if isinstance(text, bool):
        raise RationalParseError("'{t}' is not a rational number.".format(t=text))
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    stripped = str(text).strip()
    if not rational_pattern.match(stripped):
        raise RationalParseError("'{t}' is not a rational number, use p or p/q."
                                 .format(t=text))
    if '/' in stripped and int(stripped.split('/')[1]) == 0:
        raise RationalParseError("'{t}' has a zero denominator.".format(t=text))
    return Fraction(stripped)


def format_rational(value: Fraction) -> str:
    """Formats a rational as ``p/q``, or ``p`` when the denominator is 1."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return "{p}/{q}".format(p=value.numerator, q=value.denominator)


@dataclass(frozen=True)
class QMatrix:
    """
    A dense matrix over ℚ, stored row-major.

    :param rows: number of rows
    :param cols: number of columns
    :param entries: tuple of row tuples of Fractions
    """
    rows: int
    cols: int
    entries: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        entries = tuple(tuple(Fraction(x) for x in row) for row in self.entries)
        if len(entries) != self.rows or any(len(row) != self.cols for row in entries):
            raise DimensionMismatchError(
                "Entry grid does not match a {r} x {c} matrix.".format(r=self.rows, c=self.cols))
        object.__setattr__(self, 'entries', entries)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: Optional[int] = None) -> 'QMatrix':
        """Builds a matrix from nested sequences; ``cols`` is needed when there are no rows."""
        rows = [list(row) for row in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, tuple(tuple(row) for row in rows))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> 'QMatrix':
        return cls(rows, cols, tuple((Fraction(0),) * cols for _ in range(rows)))

    def __getitem__(self, position: Tuple[int, int]) -> Fraction:
        row, col = position
        return self.entries[row][col]

    def transpose(self) -> 'QMatrix':
        return QMatrix(self.cols, self.rows,
                       tuple(tuple(self.entries[r][c] for r in range(self.rows))
                             for c in range(self.cols)))

    def apply(self, vector: Sequence) -> Vector:
        """Returns M·v."""
        if len(vector) != self.cols:
            raise DimensionMismatchError("Vector of length {l} does not fit {c} columns."
                                         .format(l=len(vector), c=self.cols))
        return tuple(sum((a * Fraction(b) for a, b in zip(row, vector)), Fraction(0))
                     for row in self.entries)

    def scaled(self, factor) -> 'QMatrix':
        factor = Fraction(factor)
        return QMatrix(self.rows, self.cols,
                       tuple(tuple(factor * x for x in row) for row in self.entries))

    def nonzero_positions(self) -> List[Tuple[int, int]]:
        return [(r, c) for r in range(self.rows) for c in range(self.cols)
                if self.entries[r][c] != 0]

    def to_json(self) -> List[List[str]]:
        return [[format_rational(x) for x in row] for row in self.entries]


def _integer_row(row: Sequence[Fraction]) -> List[int]:
    """Clears denominators of a row; row scaling changes neither rank nor kernel."""
    multiple = reduce(lambda a, b: a * b // gcd(a, b), (x.denominator for x in row), 1)
    return [int(x * multiple) for x in row]


def _echelon(rows: List[List[int]], n_cols: int) -> Tuple[List[List[int]], List[int]]:
    """
    Fraction-free forward elimination (Bareiss) on integer rows.

    The pivot is the first nonzero entry in column order. Every division is exact since
    each entry is a minor of the input.

    :return: the echelon rows and the pivot column of each leading row
    """
    m = [list(row) for row in rows]
    pivots = []
    previous = 1
    r = 0
    for c in range(n_cols):
        if r == len(m):
            break
        pivot_row = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot_row is None:
            continue
        if pivot_row != r:
            m[r], m[pivot_row] = m[pivot_row], m[r]
        pivot = m[r][c]
        for i in range(r + 1, len(m)):
            factor = m[i][c]
            row = m[i]
            for j in range(c + 1, n_cols):
                row[j] = (pivot * row[j] - factor * m[r][j]) // previous
            row[c] = 0
        previous = pivot
        pivots.append(c)
        r += 1
    return m, pivots


def _reduced(matrix: QMatrix, extra: Optional[Sequence[Fraction]] = None):
    """
    Reduced row echelon form of M, or of [M | b] when ``extra`` is given.

    :return: list of reduced pivot rows (Fractions) and their pivot columns
    """
    width = matrix.cols + (1 if extra is not None else 0)
    rows = []
    for r in range(matrix.rows):
        row = list(matrix.entries[r])
        if extra is not None:
            row.append(Fraction(extra[r]))
        rows.append(_integer_row(row))
    echelon, pivots = _echelon(rows, width)
    reduced = [[Fraction(x) for x in echelon[r]] for r in range(len(pivots))]
    for r in range(len(pivots) - 1, -1, -1):
        c = pivots[r]
        pivot = reduced[r][c]
        reduced[r] = [x / pivot for x in reduced[r]]
        for above in range(r):
            factor = reduced[above][c]
            if factor != 0:
                reduced[above] = [a - factor * b for a, b in zip(reduced[above], reduced[r])]
    return reduced, pivots


def _primitive(vector: Sequence[Fraction]) -> Vector:
    """Scales to integer entries with content 1 and first nonzero entry positive."""
    integers = _integer_row(vector)
    content = reduce(gcd, (abs(x) for x in integers), 0)
    if content == 0:
        return tuple(Fraction(0) for _ in integers)
    first = next(x for x in integers if x != 0)
    sign = 1 if first > 0 else -1
    return tuple(Fraction(sign * x // content) for x in integers)


def rank(matrix: QMatrix) -> int:
    """Exact rank of ``matrix`` over ℚ."""
    if matrix.rows == 0 or matrix.cols == 0:
        return 0
    _, pivots = _echelon([_integer_row(row) for row in matrix.entries], matrix.cols)
    return len(pivots)


def kernel_basis(matrix: QMatrix) -> List[Vector]:
    """
    Canonical basis of the right kernel {v : M·v = 0}.

    Free columns are set to 1 one at a time in column order, pivots are read off the reduced
    echelon form, and each vector is made primitive with a positive leading entry.

    :return: ``cols - rank`` linearly independent vectors
    """
    if matrix.rows == 0:
        reduced, pivots = [], []
    else:
        reduced, pivots = _reduced(matrix)
    pivot_set = set(pivots)
    basis = []
    for free in range(matrix.cols):
        if free in pivot_set:
            continue
        vector = [Fraction(0)] * matrix.cols
        vector[free] = Fraction(1)
        for row, c in zip(reduced, pivots):
            vector[c] = -row[free]
        basis.append(_primitive(vector))
    return basis


@dataclass(frozen=True)
class Solution:
    """
    Outcome of :func:`solve_or_witness`.

    Exactly one of ``x`` (a solution of M·x = b) and ``certificate`` (a y with yᵀM = 0 and
    yᵀb ≠ 0) is set.
    """
    x: Optional[Vector] = None
    certificate: Optional[Vector] = None

    @property
    def consistent(self) -> bool:
        return self.x is not None


def solve_or_witness(matrix: QMatrix, b: Sequence) -> Solution:
    """
    Solves M·x = b exactly, or proves that no solution exists.

    The solution puts zero on every free column. The certificate is a left-kernel vector of
    M that does not annihilate b, read from the echelon form of [Mᵀ; bᵀ].

    :param matrix: the system matrix
    :param b: right-hand side with one entry per row
    :raise DimensionMismatchError: when ``len(b) != rows``
    """
    if len(b) != matrix.rows:
        raise DimensionMismatchError("Right-hand side of length {l} does not fit {r} rows."
                                     .format(l=len(b), r=matrix.rows))
    b = [Fraction(value) for value in b]
    if matrix.rows == 0:
        return Solution(x=tuple(Fraction(0) for _ in range(matrix.cols)))
    reduced, pivots = _reduced(matrix, b)
    if matrix.cols not in pivots:
        x = [Fraction(0)] * matrix.cols
        for row, c in zip(reduced, pivots):
            x[c] = row[matrix.cols]
        return Solution(x=tuple(x))
    return Solution(certificate=_left_witness(matrix, b))


def _left_witness(matrix: QMatrix, b: Sequence[Fraction]) -> Vector:
    """A y with yᵀM = 0 and yᵀb = 1, for an inconsistent system."""
    # y solves [Mᵀ; bᵀ]·y = (0, …, 0, 1), which is consistent exactly when b ∉ im M
    stacked = QMatrix.from_rows(list(matrix.transpose().entries) + [tuple(b)], matrix.rows)
    target = [Fraction(0)] * matrix.cols + [Fraction(1)]
    reduced, pivots = _reduced(stacked, target)
    y = [Fraction(0)] * matrix.rows
    for row, c in zip(reduced, pivots):
        y[c] = row[matrix.rows]
    return tuple(y)


def dependent_rows(matrix: QMatrix) -> List[int]:
    """
    Positions of the rows of M that are combinations of the rows before them.

    The unit vectors e_j at these positions complete the column space of M to all of ℚ^rows.
    Rows are reduced in the given order, so the choice follows the row ordering of M.
    """
    echelon: List[Tuple[List[int], int]] = []
    dependent = []
    for r, row in enumerate(matrix.entries):
        current = _integer_row(row)
        for pivot_row, c in echelon:
            factor = current[c]
            if factor == 0:
                continue
            current = [pivot_row[c] * a - factor * b for a, b in zip(current, pivot_row)]
            content = reduce(gcd, current, 0)
            if content > 1:
                current = [x // content for x in current]
        lead = next((c for c, x in enumerate(current) if x != 0), None)
        if lead is None:
            dependent.append(r)
        else:
            echelon.append((current, lead))
    return dependent


def is_zero_vector(vector: Sequence) -> bool:
    return all(value == 0 for value in vector)
