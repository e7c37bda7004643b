"""Characteristic polynomial of R*_n in the shifted variable μ = λ - 1.

In this basis the polynomial has at most k_n + 1 nonzero terms:

    μ^n - (n-1) μ^(n-2) - Σ_{k=2}^{ℓ} S*_k(n) μ^(n-k-1),     ℓ = ⌊log2 n⌋,

with S*_k(n) = Σ_{m<=n} k! {ω(m) brace k}.  Everything here is exact
integer arithmetic except the multiplicity bounds, which are real-valued.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass
from math import comb, factorial

import mpmath
import numpy as np

from .arith import OmegaHistogram, OmegaTable, StirlingTable, omega_histogram, stirling2_table
from .config import ORACLE_MAX
from .errors import ContractError, ResourceGuardError

LOWER_CONST = "1.3841"
MU, MU_ASCII = "μ", "u"


@dataclass(frozen=True)
class ShiftedPoly:
    """Sparse Σ coeff·μ^exp, exponents strictly increasing, no zero coefficients."""

    terms: tuple[tuple[int, int], ...]

    def __post_init__(self):
        exps = [e for e, _ in self.terms]
        if any(b <= a for a, b in zip(exps, exps[1:])) or any(c == 0 for _, c in self.terms):
            raise ContractError("terms must have increasing exponents and nonzero coefficients")
        if exps and exps[0] < 0:
            raise ContractError("negative exponent")

    @classmethod
    def from_dict(cls, d: dict[int, int]) -> "ShiftedPoly":
        return cls(tuple((e, c) for e, c in sorted(d.items()) if c != 0))

    @property
    def degree(self) -> int:
        return self.terms[-1][0] if self.terms else -1

    @property
    def low_exponent(self) -> int:
        return self.terms[0][0] if self.terms else 0

    def coeff(self, e: int) -> int:
        for ee, c in self.terms:
            if ee == e:
                return c
        return 0

    def dense(self) -> list[int]:
        """Ascending coefficient list (only sensible for small degree)."""
        out = [0] * (self.degree + 1)
        for e, c in self.terms:
            out[e] = c
        return out

    def shift_down(self, k: int) -> "ShiftedPoly":
        if k > self.low_exponent:
            raise ArithmeticError(f"μ^{k} does not divide the polynomial")
        return ShiftedPoly(tuple((e - k, c) for e, c in self.terms))

    def render(self, ascii: bool = False) -> str:
        var = MU_ASCII if ascii else MU
        if not self.terms:
            return "0"
        parts = []
        for e, c in reversed(self.terms):
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                body = ("" if mag == 1 else str(mag)) + var + (f"^{e}" if e > 1 else "")
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts)

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class MultiplicityRecord:
    n: int
    k_n: int
    m_n: int
    lower_bound: int | None  # n >= 3
    upper_bound: int | None  # n >= 3, proved for n >= 6
    ostar_gap: float | None  # n >= 3

    def lower_ok(self) -> bool:
        return self.n < 3 or self.lower_bound <= self.m_n

    def upper_ok(self) -> bool:
        return self.n < 6 or self.m_n <= self.upper_bound

    def ostar_ok(self) -> bool:
        return self.n < 3 or self.ostar_gap <= 0

    def csv_row(self) -> str:
        cells = [self.n, self.k_n, self.m_n, self.lower_bound, self.upper_bound,
                 None if self.ostar_gap is None else repr(self.ostar_gap)]
        return ",".join("" if c is None else str(c) for c in cells)


SCAN_HEADER = "n,k_n,m_n,lower,upper,ostar_gap"


def dstar(st: StirlingTable, k: int, omega_m: int) -> int:
    """D*_k(m) = k! {ω(m) brace k}: ordered factorizations into k pairwise coprime parts >= 2."""
    if k < 1:
        raise ContractError(f"k must be >= 1, got {k}")
    if omega_m < k:
        return 0
    return factorial(k) * st(omega_m, k)


def _k_n(h: OmegaHistogram) -> int:
    return 0 if h.limit == 1 else h.max_omega + 1


def sstar_all(h: OmegaHistogram, n: int) -> list[int]:
    """[S*_2(n), S*_3(n), ..., S*_{k_n-1}(n)]; every later value is zero."""
    if h.limit != n:
        raise ContractError(f"histogram limit {h.limit} != n={n}")
    top = h.max_omega
    st = stirling2_table(top, top)
    return [sum(dstar(st, k, j) * h.count(j) for j in range(k, top + 1)) for k in range(2, top + 1)]


def charpoly_shifted(h: OmegaHistogram, n: int) -> ShiftedPoly:
    if h.limit != n:
        raise ContractError(f"histogram limit {h.limit} != n={n}")
    if n == 1:
        # extension of the formula: R*_1 = [1]
        return ShiftedPoly(((1, 1),))
    ell = n.bit_length() - 1
    terms = {n: 1, n - 2: -(n - 1)}
    for k, s in enumerate(sstar_all(h, n), start=2):
        if k > ell:
            raise ArithmeticError(f"S*_{k}({n}) nonzero beyond ℓ={ell}")
        terms[n - k - 1] = terms.get(n - k - 1, 0) - s
    return ShiftedPoly.from_dict(terms)


def reduced_poly(h: OmegaHistogram, n: int) -> ShiftedPoly:
    """The characteristic polynomial with the μ^{m_n} factor removed.

    Degree k_n; a nonzero constant term certifies that m_n is exact.
    """
    full = charpoly_shifted(h, n)
    q = full.shift_down(n - _k_n(h))
    if q.low_exponent != 0:
        raise ArithmeticError(f"reduced polynomial for n={n} still divisible by μ")
    return q


def charpoly_for(n: int, segment_size: int | None = None) -> ShiftedPoly:
    h = omega_histogram(n, segment_size) if segment_size else omega_histogram(n)
    return charpoly_shifted(h, n)


def expand_to_monomial(p: ShiftedPoly, guard: int = ORACLE_MAX) -> list[int]:
    """Ascending coefficients in λ after substituting μ = λ - 1."""
    if p.degree > guard:
        raise ResourceGuardError(f"degree {p.degree} exceeds guard {guard}")
    out = [0] * (p.degree + 1)
    for e, c in p.terms:
        for i in range(e + 1):
            out[i] += c * comb(e, i) * (-1) ** (e - i)
    return out


def power_sums(q: ShiftedPoly, upto: int) -> list[int]:
    """Exact p_1..p_upto of the roots of monic q via Newton's identities."""
    k = q.degree
    if q.coeff(k) != 1:
        raise ContractError("power sums need a monic polynomial")
    # e_i with q = Σ (-1)^i e_i μ^{k-i}
    e = [1] + [(-1) ** i * q.coeff(k - i) for i in range(1, k + 1)]
    p: list[int] = []
    for j in range(1, upto + 1):
        s = (-1) ** (j - 1) * j * (e[j] if j <= k else 0)
        for i in range(1, j):
            s += (-1) ** (i - 1) * (e[i] if i <= k else 0) * p[j - i - 1]
        p.append(s)
    return p


def eigen_traces(q: ShiftedPoly, n: int) -> tuple[int, int]:
    """(Σλ, Σλ²) over all n eigenvalues, from the reduced polynomial alone."""
    p1, p2 = power_sums(q, 2)
    return n + p1, n + 2 * p1 + p2


def _floor_log_ratio(c: str, n: int) -> int:
    """⌊c·log n / log log n⌋, re-evaluated in extended precision near integers."""
    v = float(c) * math.log(n) / math.log(math.log(n))
    r = round(v)
    if abs(v - r) <= 8 * math.ulp(v):
        with mpmath.workdps(50):
            v = mpmath.mpf(c) * mpmath.log(n) / mpmath.log(mpmath.log(n))
            return int(mpmath.floor(v))
    return math.floor(v)


def multiplicity(t: OmegaTable, n: int) -> MultiplicityRecord:
    if n < 1:
        raise ContractError(f"n must be >= 1, got {n}")
    k = int(t.k_values[n]) if n <= t.limit else None
    if k is None:
        raise ContractError(f"n={n} exceeds table limit {t.limit}")
    m = n - k
    if n < 3:
        return MultiplicityRecord(n, k, m, None, None, None)
    ln = math.log(n)
    lln = math.log(ln)
    lower = n - _floor_log_ratio(LOWER_CONST, n) - 1
    upper = n - _floor_log_ratio("1", n)
    gap = abs(m - (n - ln / lln)) - 2 * ln / lln**2
    return MultiplicityRecord(n, k, m, lower, upper, gap)


def scan_multiplicity(t: OmegaTable, start: int, stop: int) -> dict[str, np.ndarray]:
    """Vectorized multiplicity records for start <= n <= stop.

    Bound values in rows with n < 3 are placeholders; ``valid3`` and
    ``valid6`` mark where each bound applies.
    """
    if not 1 <= start <= stop <= t.limit:
        raise ContractError(f"bad scan range {start}..{stop} for limit {t.limit}")
    n = np.arange(start, stop + 1, dtype=np.int64)
    k = t.k_values[start : stop + 1].astype(np.int64)
    m = n - k
    valid3 = n >= 3
    nf = np.where(valid3, n, 3).astype(np.float64)
    ln = np.log(nf)
    lln = np.log(ln)
    ratio = ln / lln
    lo_v = float(LOWER_CONST) * ratio
    lower_floor = np.floor(lo_v).astype(np.int64)
    upper_floor = np.floor(ratio).astype(np.int64)
    # exact re-evaluation where a float lands within a few ulp of an integer
    for arr, v, c in ((lower_floor, lo_v, LOWER_CONST), (upper_floor, ratio, "1")):
        near = np.nonzero(valid3 & (np.abs(v - np.round(v)) <= 8 * np.spacing(v)))[0]
        for idx in near:
            arr[idx] = _floor_log_ratio(c, int(n[idx]))
    gap = np.abs(m - (n - ratio)) - 2 * ln / lln**2
    return {
        "n": n,
        "k_n": k,
        "m_n": m,
        "lower": n - lower_floor - 1,
        "upper": n - upper_floor,
        "ostar_gap": gap,
        "valid3": valid3,
        "valid6": n >= 6,
    }


def scan_failures(scan: dict[str, np.ndarray]) -> dict[str, int]:
    m = scan["m_n"]
    return {
        "lower": int(np.sum(scan["valid3"] & (scan["lower"] > m))),
        "upper": int(np.sum(scan["valid6"] & (m > scan["upper"]))),
        "ostar": int(np.sum(scan["valid3"] & (scan["ostar_gap"] > 0))),
    }


def scan_csv(scan: dict[str, np.ndarray]) -> str:
    buf = io.StringIO()
    buf.write(SCAN_HEADER + "\n")
    for i in range(scan["n"].size):
        if scan["valid3"][i]:
            tail = f"{scan['lower'][i]},{scan['upper'][i]},{float(scan['ostar_gap'][i])!r}"
        else:
            tail = ",,"
        buf.write(f"{scan['n'][i]},{scan['k_n'][i]},{scan['m_n'][i]},{tail}\n")
    return buf.getvalue()
