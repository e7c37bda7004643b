"""Exact construction of R*_n, S_n and T_n plus brute-force oracles.

R*_n has a 1 at (i, j) when i ∥ j or j = 1.  S_n keeps only the i ∥ j part
and T_n carries M*(n/i, i) down its first column, so that R*_n = S_n T_n.
"""
from __future__ import annotations

import io
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from .arith import OmegaTable, build_omega_table, mertens_star_coprime
from .config import DENSE_MAX, ORACLE_MAX
from .errors import ContractError, ResourceGuardError

RSTAR, S, T = "RSTAR", "S", "T"
KINDS = (RSTAR, S, T)


@dataclass(frozen=True, eq=False)
class SparseUnitaryMatrix:
    """Row-compressed integer matrix with 1-based column indices.

    Entries of row i are ``cols[indptr[i-1]:indptr[i]]`` in ascending
    column order; explicit zeros are never stored.
    """

    n: int
    kind: str
    indptr: np.ndarray
    cols: np.ndarray
    vals: np.ndarray

    @property
    def entry_count(self) -> int:
        return int(self.vals.size)

    def row(self, i: int) -> list[tuple[int, int]]:
        a, b = self.indptr[i - 1], self.indptr[i]
        return list(zip(self.cols[a:b].tolist(), self.vals[a:b].tolist()))

    @property
    def rows(self) -> list[list[tuple[int, int]]]:
        return [self.row(i) for i in range(1, self.n + 1)]

    def triples(self):
        for i in range(1, self.n + 1):
            for j, v in self.row(i):
                yield i, j, v

    @cached_property
    def csr(self) -> sp.csr_matrix:
        return sp.csr_matrix((self.vals, self.cols - 1, self.indptr), shape=(self.n, self.n))

    @cached_property
    def _csr_float(self) -> sp.csr_matrix:
        return self.csr.astype(np.float64)

    def to_dense(self, guard: int = DENSE_MAX) -> "DenseIntMatrix":
        _dense_guard(self.n, guard)
        grid = [[0] * self.n for _ in range(self.n)]
        for i, j, v in self.triples():
            grid[i - 1][j - 1] = v
        return DenseIntMatrix(self.n, grid)

    def trace(self) -> int:
        return int(self.csr.diagonal().sum())

    def trace_of_square(self) -> int:
        a = self.csr
        return int(a.multiply(a.T).sum())

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("i,j,v\n")
        for i, j, v in self.triples():
            buf.write(f"{i},{j},{v}\n")
        return buf.getvalue()


@dataclass(eq=False)
class DenseIntMatrix:
    """Square matrix of Python ints (exact, arbitrary precision)."""

    n: int
    entries: list[list[int]]

    def __post_init__(self):
        if len(self.entries) != self.n or any(len(r) != self.n for r in self.entries):
            raise ContractError("dense matrix must be square")

    @classmethod
    def identity(cls, n: int) -> "DenseIntMatrix":
        return cls(n, [[int(i == j) for j in range(n)] for i in range(n)])

    def __eq__(self, other) -> bool:
        if isinstance(other, SparseUnitaryMatrix):
            other = other.to_dense()
        if not isinstance(other, DenseIntMatrix):
            return NotImplemented
        return self.n == other.n and self.entries == other.entries

    def render(self) -> str:
        return "\n".join(" ".join(str(v) for v in row) for row in self.entries)


def _dense_guard(n: int, guard: int) -> None:
    if n > guard:
        raise ResourceGuardError(f"n={n} exceeds dense guard {guard}")


def _check_n(n: int) -> None:
    if n < 1:
        raise ContractError(f"n must be >= 1, got {n}")


def _unitary_pairs(n: int) -> tuple[np.ndarray, np.ndarray]:
    """All (i, j) with i ∥ j <= n, sorted by i then j."""
    i = np.arange(1, n + 1, dtype=np.int64)
    reps = n // i
    rows = np.repeat(i, reps)
    # t runs 1..n//i inside each group
    starts = np.cumsum(reps) - reps
    t = np.arange(rows.size, dtype=np.int64) - np.repeat(starts, reps) + 1
    keep = np.gcd(rows, t) == 1
    rows, t = rows[keep], t[keep]
    return rows, rows * t


def _from_coo(n: int, kind: str, rows: np.ndarray, cols: np.ndarray, vals: np.ndarray) -> SparseUnitaryMatrix:
    order = np.lexsort((cols, rows))
    rows, cols, vals = rows[order], cols[order], vals[order]
    nz = vals != 0
    rows, cols, vals = rows[nz], cols[nz], vals[nz]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=n + 1)[1:], out=indptr[1:])
    for a in (indptr, cols, vals):
        a.setflags(write=False)
    return SparseUnitaryMatrix(n, kind, indptr, cols, vals)


def build_s(n: int) -> SparseUnitaryMatrix:
    _check_n(n)
    rows, cols = _unitary_pairs(n)
    return _from_coo(n, S, rows, cols, np.ones(rows.size, dtype=np.int64))


def build_rstar(n: int) -> SparseUnitaryMatrix:
    _check_n(n)
    rows, cols = _unitary_pairs(n)
    # column 1 for rows 2..n (row 1 already has it since 1 ∥ 1)
    extra = np.arange(2, n + 1, dtype=np.int64)
    rows = np.concatenate([rows, extra])
    cols = np.concatenate([cols, np.ones(extra.size, dtype=np.int64)])
    return _from_coo(n, RSTAR, rows, cols, np.ones(rows.size, dtype=np.int64))


def build_t(t: OmegaTable | None, n: int) -> SparseUnitaryMatrix:
    _check_n(n)
    if t is None:
        t = build_omega_table(n)
    if n > t.limit:
        raise ContractError(f"n={n} exceeds table limit {t.limit}")
    col1 = [mertens_star_coprime(t, Fraction(n, i), i) for i in range(1, n + 1)]
    diag = np.arange(2, n + 1, dtype=np.int64)
    rows = np.concatenate([np.arange(1, n + 1, dtype=np.int64), diag])
    cols = np.concatenate([np.ones(n, dtype=np.int64), diag])
    vals = np.concatenate([np.array(col1, dtype=np.int64), np.ones(n - 1, dtype=np.int64)])
    return _from_coo(n, T, rows, cols, vals)


def build(kind: str, n: int, table: OmegaTable | None = None) -> SparseUnitaryMatrix:
    kind = kind.upper()
    if kind == RSTAR:
        return build_rstar(n)
    if kind == S:
        return build_s(n)
    if kind == T:
        return build_t(table, n)
    raise ContractError(f"unknown matrix kind {kind!r}")


def sparse_multiply(a: SparseUnitaryMatrix, b: SparseUnitaryMatrix, guard: int = DENSE_MAX) -> DenseIntMatrix:
    if a.n != b.n:
        raise ContractError(f"dimension mismatch: {a.n} vs {b.n}")
    _dense_guard(a.n, guard)
    n = a.n
    b_rows = b.rows
    out = []
    for i in range(1, n + 1):
        acc = [0] * n
        for k, v in a.row(i):
            for j, w in b_rows[k - 1]:
                acc[j - 1] += v * w
        out.append(acc)
    return DenseIntMatrix(n, out)


def bareiss_det(m: DenseIntMatrix) -> int:
    """Exact determinant by fraction-free elimination."""
    n = m.n
    if n == 0:
        return 1
    a = [list(r) for r in m.entries]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        rk = a[k]
        akk = rk[k]
        for i in range(k + 1, n):
            ri = a[i]
            aik = ri[k]
            if aik == 0:
                if akk != prev:
                    a[i] = ri[: k + 1] + [x * akk // prev for x in ri[k + 1 :]]
            else:
                a[i] = ri[: k + 1] + [
                    (x * akk - aik * y) // prev for x, y in zip(ri[k + 1 :], rk[k + 1 :])
                ]
        prev = akk
    return sign * a[n - 1][n - 1]


def det_by_first_column(m: DenseIntMatrix) -> int:
    """Laplace expansion along column 1, minors by Bareiss."""
    n = m.n
    if n == 1:
        return m.entries[0][0]
    total = 0
    for i in range(n):
        c = m.entries[i][0]
        if c == 0:
            continue
        minor = [row[1:] for r, row in enumerate(m.entries) if r != i]
        if any(not any(row) for row in minor):
            continue
        total += (-1) ** i * c * bareiss_det(DenseIntMatrix(n - 1, minor))
    return total


def _shifted(dense: DenseIntMatrix, x: int) -> DenseIntMatrix:
    """x I - dense."""
    n = dense.n
    return DenseIntMatrix(
        n, [[(x if i == j else 0) - v for j, v in enumerate(row)] for i, row in enumerate(dense.entries)]
    )


def interpolate(xs: list[int], ys: list[int]) -> list[int]:
    """Exact Newton divided-difference interpolation, ascending coefficients.

    Raises if the interpolant has non-integer coefficients or misses a node.
    """
    n = len(xs)
    dd = [Fraction(y) for y in ys]
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - level])
    # Horner-style conversion of the Newton form to the monomial basis
    coeffs = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        # coeffs <- coeffs * (x - xs[i]) + dd[i]
        shifted = [Fraction(0)] + coeffs[:-1]
        coeffs = [s - xs[i] * c for s, c in zip(shifted, coeffs)]
        coeffs[0] += dd[i]
    if any(c.denominator != 1 for c in coeffs):
        raise ArithmeticError("interpolant has non-integer coefficients")
    out = [int(c) for c in coeffs]
    for x, y in zip(xs, ys):
        if poly_eval(out, x) != y:
            raise ArithmeticError(f"interpolant misses node {x}")
    return out


def poly_eval(coeffs: list[int], x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def charpoly_oracle(n: int, guard: int = ORACLE_MAX) -> list[int]:
    """det(λI - R*_n) as ascending monomial coefficients, by brute force.

    Evaluates the determinant at λ = 0..n with Bareiss and interpolates.
    """
    _check_n(n)
    if n > guard:
        raise ResourceGuardError(f"n={n} exceeds oracle guard {guard}")
    dense = build_rstar(n).to_dense()
    xs = list(range(n + 1))
    ys = [bareiss_det(_shifted(dense, x)) for x in xs]
    return interpolate(xs, ys)


def root_multiplicity(coeffs: list[int], root: int = 1) -> int:
    """Exact multiplicity of ``root`` by repeated synthetic division."""
    c = list(coeffs)
    mult = 0
    while len(c) > 1:
        # synthetic division of ascending coefficients by (x - root)
        q = [0] * (len(c) - 1)
        carry = 0
        for k in range(len(c) - 1, 0, -1):
            carry = c[k] + carry * root
            q[k - 1] = carry
        if c[0] + carry * root != 0:
            break
        c = q
        mult += 1
    return mult


def matvec(m: SparseUnitaryMatrix, v) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (m.n,):
        raise ContractError(f"vector of length {m.n} expected, got shape {v.shape}")
    return m._csr_float @ v
