"""Admissibility types and equivariant polynomials on d×d matrices.

A polynomial f has type ((a_1..a_m), (k+, k-)) for a partition s of d and a
Betti split (d+, d-) when

    f(p x g) = prod_i det(p_ii)^{a_i} · f(x) · det(g+)^{k+} det(g-)^{k-}

for p block lower triangular (blocks of sizes s_i) and g = diag(g+, g-).
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import accumulate
from typing import Callable, Optional, Sequence, Union

from .linalg import RationalMatrix, det, frac_str, parse_frac, sparse_nullspace


class InvariantError(ValueError):
    pass


class NoSuchInvariant(InvariantError):
    pass


class NotUnique(InvariantError):
    pass


class DegreeImbalance(InvariantError):
    pass


@dataclass(frozen=True)
class AdmissibilityType:
    block_weights: tuple[int, ...]
    partition: tuple[int, ...]
    right_weights: tuple[int, int]
    split: tuple[int, int]

    def __post_init__(self):
        for name in ("block_weights", "partition", "right_weights", "split"):
            object.__setattr__(self, name, tuple(int(v) for v in getattr(self, name)))
        if len(self.block_weights) != len(self.partition):
            raise InvariantError("one block weight per partition block")
        if any(s <= 0 for s in self.partition) or min(self.split) < 0:
            raise InvariantError("partition parts must be positive and split nonnegative")
        if sum(self.partition) != sum(self.split):
            raise InvariantError("partition and split must have the same total")

    @property
    def d(self) -> int:
        return sum(self.partition)

    @property
    def row_weights(self) -> tuple[int, ...]:
        return tuple(a for a, s in zip(self.block_weights, self.partition) for _ in range(s))

    @property
    def column_weights(self) -> tuple[int, ...]:
        kp, km = self.right_weights
        return (kp,) * self.split[0] + (km,) * self.split[1]

    @property
    def balanced(self) -> bool:
        return sum(self.row_weights) == sum(self.column_weights)

    @property
    def degree(self) -> int:
        return sum(self.row_weights)

    @classmethod
    def zero(cls, partition, split) -> AdmissibilityType:
        return cls((0,) * len(partition), partition, (0, 0), split)

    def to_json(self) -> dict:
        return {
            "block_weights": list(self.block_weights),
            "partition": list(self.partition),
            "right_weights": list(self.right_weights),
            "split": list(self.split),
        }

    @classmethod
    def from_json(cls, data: dict | str) -> AdmissibilityType:
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data["block_weights"], data["partition"], data["right_weights"], data["split"])


def type_of_det(partition: Sequence[int], split: Sequence[int]) -> AdmissibilityType:
    return AdmissibilityType((1,) * len(partition), partition, (1, 1), split)


def type_of_corner(partition: Sequence[int], split: Sequence[int], sign: int) -> AdmissibilityType:
    """Type of the upper-left d+ (sign +1) or upper-right d- (sign -1) minor."""
    size = split[0] if sign > 0 else split[1]
    prefix = [0, *accumulate(partition)]
    if size not in prefix:
        raise InvariantError(f"no prefix of partition {tuple(partition)} sums to {size}")
    nblocks = prefix.index(size)
    weights = (1,) * nblocks + (0,) * (len(partition) - nblocks)
    return AdmissibilityType(weights, partition, (1, 0) if sign > 0 else (0, 1), split)


def multiply_types(t1: AdmissibilityType, t2: AdmissibilityType) -> AdmissibilityType:
    if t1.partition != t2.partition or t1.split != t2.split:
        raise InvariantError("types live on different partitions/splits")
    return AdmissibilityType(
        tuple(a + b for a, b in zip(t1.block_weights, t2.block_weights)),
        t1.partition,
        (t1.right_weights[0] + t2.right_weights[0], t1.right_weights[1] + t2.right_weights[1]),
        t1.split,
    )


def default_split(n: int) -> tuple[int, int]:
    return ((n + 1) // 2, n // 2)


def type_of_cp(n: int, p: int, split: Optional[Sequence[int]] = None) -> AdmissibilityType:
    split = tuple(split) if split is not None else default_split(n)
    if sum(split) != n:
        raise InvariantError(f"split {split} does not add up to {n}")
    if not 1 <= p <= min(split) - 1:
        raise InvariantError(f"c_p needs 1 <= p <= min(d+, d-) - 1, got p={p} for split {split}")
    weights = (2,) * p + (1,) * (n - 2 * p) + (0,) * p
    return AdmissibilityType(weights, (1,) * n, (1, 1), split)


Exponent = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class InvariantPolynomial:
    """Polynomial in the entries x_ij, stored as {exponent matrix: coefficient}."""

    d: int
    type: Optional[AdmissibilityType]
    terms: tuple[tuple[Exponent, Fraction], ...]

    def __post_init__(self):
        sparse = tuple(
            (tuple((i, j, e) for i, row in enumerate(exp) for j, e in enumerate(row) if e), c)
            for exp, c in self.terms
        )
        object.__setattr__(self, "_sparse", sparse)

    def __call__(self, x: RationalMatrix) -> Fraction:
        return evaluate(self, x)

    def __mul__(self, other: InvariantPolynomial) -> InvariantPolynomial:
        if self.d != other.d:
            raise InvariantError("dimension mismatch")
        acc: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(e1, e2))
                acc[e] = acc.get(e, 0) + c1 * c2
        ptype = None
        if self.type is not None and other.type is not None:
            ptype = multiply_types(self.type, other.type)
        return InvariantPolynomial(self.d, ptype, tuple(sorted((e, c) for e, c in acc.items() if c)))

    def coefficient_map(self) -> dict[Exponent, Fraction]:
        return dict(self.terms)

    def to_json(self) -> list[dict]:
        return [{"exponent_matrix": [list(r) for r in e], "coeff": frac_str(c)} for e, c in self.terms]

    @classmethod
    def from_json(cls, data: list | str, ptype: Optional[AdmissibilityType] = None) -> InvariantPolynomial:
        if isinstance(data, str):
            data = json.loads(data)
        terms = tuple(
            sorted((tuple(tuple(r) for r in t["exponent_matrix"]), parse_frac(t["coeff"])) for t in data)
        )
        d = len(terms[0][0]) if terms else 0
        return cls(d, ptype, terms)

    def __str__(self) -> str:
        parts = []
        for exp, c in self.terms:
            mono = "·".join(
                f"x{i + 1}{j + 1}" + (f"^{e}" if e > 1 else "") for i, row in enumerate(exp) for j, e in enumerate(row) if e
            )
            parts.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(parts) or "0"


def evaluate(f: InvariantPolynomial, x: RationalMatrix) -> Fraction:
    if x.shape != (f.d, f.d):
        raise InvariantError(f"expected a {f.d}x{f.d} matrix, got {x.shape}")
    rows = x.rows
    total = Fraction(0)
    for entries, c in f._sparse:
        term = c
        for i, j, e in entries:
            v = rows[i][j]
            term *= v if e == 1 else v**e
            if not term:
                break
        total += term
    return total


def corner_minor(x: RationalMatrix, size: int, side: str = "left") -> Fraction:
    """Determinant of the top ``size`` rows and first (left) or last (right) ``size`` columns."""
    n, m = x.shape
    if size > min(n, m) or size < 0:
        raise InvariantError(f"minor of size {size} does not fit a {n}x{m} matrix")
    if side not in ("left", "right"):
        raise InvariantError(f"side must be left or right, got {side!r}")
    cols = range(size) if side == "left" else range(m - size, m)
    return det(x.submatrix(range(size), cols))


def _exponent_matrices(row_sums: Sequence[int], col_sums: Sequence[int]):
    """All nonnegative integer matrices with the given margins, row-major lexicographic order."""
    d_rows, d_cols = len(row_sums), len(col_sums)

    def fill_row(remaining_row, remaining_cols, j):
        if j == d_cols - 1:
            if remaining_row <= remaining_cols[j]:
                yield (remaining_row,)
            return
        for e in range(min(remaining_row, remaining_cols[j]), -1, -1):
            for rest in fill_row(remaining_row - e, remaining_cols, j + 1):
                yield (e, *rest)

    def rec(i, remaining_cols):
        if i == d_rows:
            if not any(remaining_cols):
                yield ()
            return
        for row in fill_row(row_sums[i], remaining_cols, 0):
            new_cols = tuple(c - e for c, e in zip(remaining_cols, row))
            for rest in rec(i + 1, new_cols):
                yield (row, *rest)

    return sorted(rec(0, tuple(col_sums)))


def _generators(t: AdmissibilityType):
    """(kind, source, target) for unipotent root directions of both groups.

    left (j, i): row i += t·row j, allowed when block(i) >= block(j).
    right (k, l): column l += t·column k, allowed within one Betti block.
    """
    block_of = [b for b, s in enumerate(t.partition) for _ in range(s)]
    d = t.d
    for i in range(d):
        for j in range(d):
            if i != j and block_of[i] >= block_of[j]:
                yield "row", j, i
    side = [0] * t.split[0] + [1] * t.split[1]
    for k in range(d):
        for l in range(d):
            if k != l and side[k] == side[l]:
                yield "col", k, l


def invariant_space(t: AdmissibilityType) -> tuple[list[Exponent], list[list[Fraction]]]:
    """Monomial basis and a nullspace basis of all polynomials of type ``t``.

    Torus weights are built into the monomial basis (each row r has degree
    equal to its block weight, each column its right weight); the unipotent
    directions give linear equations D f = 0 for the derivations
    D = sum_c x_jc d/dx_ic (rows) and D = sum_r x_rk d/dx_rl (columns).
    """
    if not t.balanced:
        raise DegreeImbalance(f"{t}: row weights total {sum(t.row_weights)}, columns {sum(t.column_weights)}")
    if min(t.row_weights, default=0) < 0 or min(t.right_weights) < 0:
        raise NoSuchInvariant(f"{t}: negative weights admit no polynomial")
    monos = _exponent_matrices(t.row_weights, t.column_weights)
    index = {m: k for k, m in enumerate(monos)}
    d = t.d

    def equations():
        for kind, src, dst in _generators(t):
            image: dict[Exponent, dict[int, int]] = {}
            for k, mono in enumerate(monos):
                m = [list(r) for r in mono]
                for c in range(d):
                    # derivative in x_{dst,c} (rows) or x_{c,dst} (columns)
                    i, j = (dst, c) if kind == "row" else (c, dst)
                    e = m[i][j]
                    if not e:
                        continue
                    si, sj = (src, c) if kind == "row" else (c, src)
                    m[i][j] -= 1
                    m[si][sj] += 1
                    key = tuple(tuple(r) for r in m)
                    m[si][sj] -= 1
                    m[i][j] += 1
                    row = image.setdefault(key, {})
                    row[k] = row.get(k, 0) + e
            yield from image.values()

    basis = sparse_nullspace(equations(), len(monos)) if monos else []
    return monos, basis


def _normalized(monos: list[Exponent], vec: list[Fraction]) -> tuple[tuple[Exponent, Fraction], ...]:
    # monos are sorted, so the first nonzero entry belongs to the lex-smallest matrix
    lead = next(c for c in vec if c)
    return tuple((m, c / lead) for m, c in zip(monos, vec) if c)


@lru_cache(maxsize=None)
def construct_invariant(t: AdmissibilityType) -> InvariantPolynomial:
    """The unique (up to scalar) polynomial of type ``t``, leading coefficient 1."""
    monos, basis = invariant_space(t)
    if not basis:
        raise NoSuchInvariant(f"no nonzero polynomial of type {t}")
    if len(basis) > 1:
        raise NotUnique(f"type {t} has a {len(basis)}-dimensional space of invariants")
    return InvariantPolynomial(t.d, t, _normalized(monos, basis[0]))


def character_left(t: AdmissibilityType, p: RationalMatrix) -> Fraction:
    out = Fraction(1)
    start = 0
    for a, s in zip(t.block_weights, t.partition):
        block = range(start, start + s)
        out *= det(p.submatrix(block, block)) ** a
        start += s
    return out


def character_right(t: AdmissibilityType, g: RationalMatrix) -> Fraction:
    dp = t.split[0]
    d = t.d
    plus, minus = range(dp), range(dp, d)
    return det(g.submatrix(plus, plus)) ** t.right_weights[0] * det(g.submatrix(minus, minus)) ** t.right_weights[1]


def _random_invertible_blocks(rng: random.Random, sizes: Sequence[int], bound: int, lower: bool) -> RationalMatrix:
    d = sum(sizes)
    starts = [0, *accumulate(sizes)]
    block_of = [b for b, s in enumerate(sizes) for _ in range(s)]
    while True:
        rows = []
        for i in range(d):
            row = []
            for j in range(d):
                same = block_of[i] == block_of[j]
                allowed = same or (lower and block_of[i] > block_of[j])
                row.append(rng.randint(-bound, bound) if allowed else 0)
            rows.append(row)
        mat = RationalMatrix.from_rows(rows)
        if all(
            det(mat.submatrix(range(a, b), range(a, b))) != 0 for a, b in zip(starts, starts[1:])
        ):
            return mat


@dataclass(frozen=True)
class EquivarianceReport:
    passed: bool
    samples: int
    counterexample: Optional[dict] = None


Evaluator = Union[InvariantPolynomial, Callable[[RationalMatrix], Fraction]]


def check_equivariance(
    f: Evaluator, t: AdmissibilityType, samples: int = 100, seed: int = 0, bound: int = 10
) -> EquivarianceReport:
    """Test f(p x g) == λ1(p) f(x) λ2(g) exactly on random integer samples."""
    rng = random.Random(seed)
    d = t.d
    for s in range(samples):
        p = _random_invertible_blocks(rng, t.partition, bound, lower=True)
        g = _random_invertible_blocks(rng, [b for b in t.split if b], bound, lower=False)
        x = RationalMatrix.from_rows([[rng.randint(-bound, bound) for _ in range(d)] for _ in range(d)])
        lhs = f(p @ x @ g)
        rhs = character_left(t, p) * f(x) * character_right(t, g)
        if lhs != rhs:
            return EquivarianceReport(
                False,
                s + 1,
                {"p": p.to_json(), "x": x.to_json(), "g": g.to_json(), "lhs": frac_str(lhs), "rhs": frac_str(rhs)},
            )
    return EquivarianceReport(True, samples)


def determinant_polynomial(d: int) -> InvariantPolynomial:
    """det as an InvariantPolynomial (Leibniz expansion), for cross-checks."""
    from itertools import permutations

    terms = []
    for perm in permutations(range(d)):
        inversions = sum(1 for a in range(d) for b in range(a + 1, d) if perm[a] > perm[b])
        exp = tuple(tuple(int(perm[i] == j) for j in range(d)) for i in range(d))
        terms.append((exp, Fraction(-1 if inversions % 2 else 1)))
    return InvariantPolynomial(d, None, tuple(sorted(terms)))
