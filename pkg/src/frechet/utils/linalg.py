"""
Exact rational linear algebra.

Matrices hold ``fractions.Fraction`` entries. Rank uses fraction-free
integer elimination; null space and solve use reduced row echelon form so
their output is canonical for a given matrix.
"""

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Optional, Sequence

from frechet.errors import ValidationError

logger = logging.getLogger(__name__)

Rat = Fraction

_RAT_PATTERN = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rat(text: str) -> Fraction:
    """Parse ``"n"`` or ``"n/m"`` (m > 0) into a Fraction."""
    match = _RAT_PATTERN.match(text)
    if not match:
        raise ValidationError(f"malformed rational: {text!r}", constraint="rational")
    num = int(match.group(1))
    den = int(match.group(2)) if match.group(2) is not None else 1
    if den == 0:
        raise ValidationError(f"zero denominator in {text!r}", constraint="rational")
    return Fraction(num, den)


def format_rat(value: Fraction) -> str:
    """Reduced ``num/den`` form; integers print without a denominator."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class RatMatrix:
    """Immutable dense rows x cols matrix of rationals, row-major."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValidationError("matrix shape must be non-negative")
        if len(self.entries) != self.rows * self.cols:
            raise ValidationError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: Optional[int] = None) -> "RatMatrix":
        rows = [list(r) for r in rows]
        width = cols if cols is not None else (len(rows[0]) if rows else 0)
        for r in rows:
            if len(r) != width:
                raise ValidationError("ragged rows")
        flat = tuple(Fraction(x) for r in rows for x in r)
        return cls(len(rows), width, flat)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(n, n, tuple(Fraction(int(i == j)) for i in range(n) for j in range(n)))

    def get(self, i: int, j: int) -> Fraction:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def column(self, j: int) -> tuple:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list:
        return [list(self.row(i)) for i in range(self.rows)]

    def submatrix(
        self, row_idx: Optional[Iterable[int]] = None, col_idx: Optional[Iterable[int]] = None
    ) -> "RatMatrix":
        r = list(range(self.rows)) if row_idx is None else list(row_idx)
        c = list(range(self.cols)) if col_idx is None else list(col_idx)
        return RatMatrix(len(r), len(c), tuple(self.get(i, j) for i in r for j in c))

    def vstack(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.cols:
            raise ValidationError("vstack needs equal column counts")
        return RatMatrix(self.rows + other.rows, self.cols, self.entries + other.entries)

    def mul_vector(self, vector: Sequence) -> tuple:
        if len(vector) != self.cols:
            raise ValidationError(f"vector length {len(vector)} != {self.cols} columns")
        return tuple(
            sum((self.get(i, j) * vector[j] for j in range(self.cols) if vector[j]), Fraction(0))
            for i in range(self.rows)
        )


# ----- Fraction-free elimination -----


def _integer_row(values: Sequence) -> list:
    """Scale a rational row to coprime integers."""
    den = 1
    for v in values:
        den = lcm(den, Fraction(v).denominator)
    ints = [int(Fraction(v) * den) for v in values]
    return _primitive(ints)


def _primitive(ints: list) -> list:
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g > 1:
        return [x // g for x in ints]
    return ints


def integer_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix given as rows."""
    work = [list(r) for r in rows if any(r)]
    if not work:
        return 0
    ncols = len(work[0])
    rank = 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(work)) if work[i][col]), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        prow = work[rank]
        pv = prow[col]
        for i in range(rank + 1, len(work)):
            row = work[i]
            v = row[col]
            if not v:
                continue
            g = gcd(pv, v)
            alpha, beta = pv // g, v // g
            work[i] = _primitive([alpha * x - beta * y for x, y in zip(row, prow)])
        rank += 1
        if rank == len(work):
            break
    return rank


def rank(matrix: RatMatrix) -> int:
    """Exact rank, computed on the integer-scaled rows."""
    return integer_rank([_integer_row(matrix.row(i)) for i in range(matrix.rows)])


def rref(matrix: RatMatrix) -> tuple:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    work = matrix.to_rows()
    pivots = []
    r = 0
    for col in range(matrix.cols):
        pivot = next((i for i in range(r, len(work)) if work[i][col] != 0), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        pv = work[r][col]
        work[r] = [x / pv for x in work[r]]
        for i in range(len(work)):
            if i != r and work[i][col] != 0:
                factor = work[i][col]
                work[i] = [x - factor * y for x, y in zip(work[i], work[r])]
        pivots.append(col)
        r += 1
        if r == len(work):
            break
    return work[:r], pivots


def null_space(matrix: RatMatrix) -> list:
    """Canonical basis of the right kernel, one vector per free column."""
    reduced, pivots = rref(matrix)
    pivot_set = set(pivots)
    basis = []
    for free in range(matrix.cols):
        if free in pivot_set:
            continue
        vec = [Fraction(0)] * matrix.cols
        vec[free] = Fraction(1)
        for row, pc in zip(reduced, pivots):
            vec[pc] = -row[free]
        basis.append(tuple(vec))
    return basis


def solve(matrix: RatMatrix, rhs: Sequence) -> Optional[tuple]:
    """One solution of ``matrix @ x = rhs`` (free variables 0), or None if inconsistent."""
    if len(rhs) != matrix.rows:
        raise ValidationError(f"rhs length {len(rhs)} != {matrix.rows} rows")
    augmented = RatMatrix.from_rows(
        [list(matrix.row(i)) + [Fraction(rhs[i])] for i in range(matrix.rows)],
        cols=matrix.cols + 1,
    )
    reduced, pivots = rref(augmented)
    if pivots and pivots[-1] == matrix.cols:
        return None
    x = [Fraction(0)] * matrix.cols
    for row, pc in zip(reduced, pivots):
        x[pc] = row[-1]
    return tuple(x)


# ----- Incremental basis for column enumeration -----


@dataclass(frozen=True)
class _BasisRow:
    pivot: int
    vector: tuple
    combo: tuple


def _axpy(alpha: int, x: tuple, beta: int, y: tuple) -> list:
    """alpha*x - beta*y with the shorter operand zero-padded."""
    n = max(len(x), len(y))
    out = []
    for i in range(n):
        xi = x[i] if i < len(x) else 0
        yi = y[i] if i < len(y) else 0
        out.append(alpha * xi - beta * yi)
    return out


@dataclass(frozen=True)
class IncrementalBasis:
    """Echelon basis of the integer columns inserted so far.

    Each row remembers the integer combination of inserted columns that
    produced it, so a dependent column yields an explicit kernel relation.
    """

    rows: tuple = ()
    size: int = 0

    def reduce(self, column: Sequence[int]) -> tuple:
        """Return (residual, combo) where combo has length ``size + 1``.

        ``combo[k]`` is the integer weight of the k-th inserted column and
        the last entry is the weight of ``column``; the weighted sum equals
        ``residual``.
        """
        vec = list(column)
        combo = [0] * self.size + [1]
        for row in self.rows:
            v = vec[row.pivot]
            if not v:
                continue
            pv = row.vector[row.pivot]
            g = gcd(pv, v)
            alpha, beta = pv // g, v // g
            vec = _axpy(alpha, tuple(vec), beta, row.vector)
            combo = _axpy(alpha, tuple(combo), beta, row.combo)
            common = 0
            for x in vec:
                common = gcd(common, x)
            for x in combo:
                common = gcd(common, x)
            if common > 1:
                vec = [x // common for x in vec]
                combo = [x // common for x in combo]
        return tuple(vec), tuple(combo)

    def extend(self, residual: tuple, combo: tuple) -> "IncrementalBasis":
        pivot = next(i for i, x in enumerate(residual) if x)
        return IncrementalBasis(self.rows + (_BasisRow(pivot, residual, combo),), self.size + 1)
