"""Dense exact-rational matrices and a sparse rational nullspace solver."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


def frac_str(x: Fraction) -> str:
    """Serialize a rational as ``"num/den"`` (den always present)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_frac(s: str | int) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    num, _, den = str(s).partition("/")
    return Fraction(int(num), int(den) if den else 1)


@dataclass(frozen=True)
class RationalMatrix:
    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if not self.rows or not self.rows[0]:
            raise ValueError("RationalMatrix needs positive dimensions")
        width = len(self.rows[0])
        if any(len(r) != width for r in self.rows):
            raise ValueError("ragged rows")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable]) -> RationalMatrix:
        return cls(tuple(tuple(Fraction(v) for v in r) for r in rows))

    @classmethod
    def identity(cls, n: int) -> RationalMatrix:
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: RationalMatrix) -> RationalMatrix:
        n, m = self.shape
        m2, k = other.shape
        if m != m2:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = list(zip(*other.rows))
        return RationalMatrix(
            tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.rows)
        )

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> list[list[Fraction]]:
        return [[self.rows[i][j] for j in cols] for i in rows]

    def permuted(self, row_order: Sequence[int], col_order: Sequence[int]) -> RationalMatrix:
        return RationalMatrix(tuple(tuple(self.rows[i][j] for j in col_order) for i in row_order))

    def det(self) -> Fraction:
        n, m = self.shape
        if n != m:
            raise ValueError("determinant of a non-square matrix")
        return det([list(r) for r in self.rows])

    def to_json(self) -> list[list[str]]:
        return [[frac_str(v) for v in r] for r in self.rows]

    @classmethod
    def from_json(cls, data) -> RationalMatrix:
        return cls.from_rows([[parse_frac(v) for v in r] for r in data])


def det(a: list[list[Fraction]]) -> Fraction:
    """Determinant by Gaussian elimination; the 0x0 determinant is 1. Mutates ``a``."""
    n = len(a)
    result = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            result = -result
        pc = a[c][c]
        result *= pc
        for r in range(c + 1, n):
            f = a[r][c]
            if f:
                f = f / pc
                row_r, row_c = a[r], a[c]
                for j in range(c + 1, n):
                    if row_c[j]:
                        row_r[j] -= f * row_c[j]
    return result


def kron(x: RationalMatrix, y: RationalMatrix) -> RationalMatrix:
    """Kronecker product, row/column index (i, i') -> i * n' + i'."""
    (n, m), (n2, m2) = x.shape, y.shape
    return RationalMatrix(
        tuple(
            tuple(x.rows[i][j] * y.rows[i2][j2] for j in range(m) for j2 in range(m2))
            for i in range(n)
            for i2 in range(n2)
        )
    )


def sparse_nullspace(equations: Iterable[dict[int, int | Fraction]], nvars: int) -> list[list[Fraction]]:
    """Basis of {v : sum_k eq[k] * v[k] = 0 for every eq} over Q.

    Equations are sparse rows ``{column: coefficient}``. Rows are reduced
    incrementally against stored pivots, so duplicates cost little.
    Returned basis vectors are in reduced form: each has a 1 in its own
    free column and 0 in every other free column.
    """
    pivots: dict[int, dict[int, Fraction]] = {}
    for eq in equations:
        row = {k: Fraction(v) for k, v in eq.items() if v}
        while row:
            col = min(row)
            prow = pivots.get(col)
            if prow is None:
                inv = 1 / row[col]
                pivots[col] = {k: v * inv for k, v in row.items()}
                break
            f = row[col]
            for k, v in prow.items():
                nv = row.get(k, 0) - f * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)

    # back-substitute so every pivot row mentions only free columns
    for col in sorted(pivots, reverse=True):
        prow = pivots[col]
        for k in [k for k in prow if k != col and k in pivots]:
            f = prow.pop(k)
            for k2, v2 in pivots[k].items():
                if k2 == k:
                    continue
                nv = prow.get(k2, 0) - f * v2
                if nv:
                    prow[k2] = nv
                else:
                    prow.pop(k2, None)

    free = [k for k in range(nvars) if k not in pivots]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * nvars
        v[fcol] = Fraction(1)
        for col, prow in pivots.items():
            c = prow.get(fcol)
            if c:
                v[col] = -c
        basis.append(v)
    return basis
