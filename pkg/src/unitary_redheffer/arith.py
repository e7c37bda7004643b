"""Sieve-based arithmetic kernels for unitary divisor theory.

Two independent routes to the distinct-prime-factor count live here:

* :func:`build_omega_table` peels smallest prime factors off a full
  in-memory table,
* :func:`omega_histogram` marks primes segment by segment and keeps only
  the counts ``C_j(x) = #{m <= x : omega(m) = j}``.

They share no code, so each serves as the other's oracle.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd, isqrt
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .config import DEFAULT_SEGMENT, SIEVE_MAX
from .errors import ContractError, ResourceGuardError


@dataclass(frozen=True, eq=False)
class OmegaTable:
    """omega(m) and the smallest prime factor for every 1 <= m <= limit.

    Arrays are indexed by m directly; slot 0 is padding.
    """

    limit: int
    omega: np.ndarray
    spf: np.ndarray

    def _check(self, m: int) -> None:
        if not 1 <= m <= self.limit:
            raise ContractError(f"m={m} outside 1..{self.limit}")

    @cached_property
    def mu_star(self) -> np.ndarray:
        mu = np.where(self.omega % 2 == 0, 1, -1).astype(np.int64)
        mu[0] = 0
        return mu

    @cached_property
    def mertens(self) -> np.ndarray:
        """Prefix sums of mu*; ``mertens[x] = M*(x)``."""
        return np.cumsum(self.mu_star)

    @cached_property
    def k_values(self) -> np.ndarray:
        """k_m for every m (see :func:`k_sequence`)."""
        k = self.omega.astype(np.int64) + 1
        k[:2] = 0
        return np.maximum.accumulate(k)


@dataclass(frozen=True)
class OmegaHistogram:
    limit: int
    counts: tuple[int, ...]

    def count(self, j: int) -> int:
        return self.counts[j] if 0 <= j < len(self.counts) else 0

    @property
    def max_omega(self) -> int:
        return len(self.counts) - 1


@dataclass(frozen=True)
class StirlingTable:
    max_n: int
    max_k: int
    values: tuple[tuple[int, ...], ...]

    def __call__(self, n: int, k: int) -> int:
        if n < 0 or k < 0:
            raise ContractError("Stirling arguments must be nonnegative")
        if n > self.max_n or k > self.max_k:
            raise ContractError(f"({n}, {k}) outside table {self.max_n}x{self.max_k}")
        return self.values[n][k]


def _check_sieve_size(n: int) -> None:
    if n < 1:
        raise ContractError(f"sieve limit must be >= 1, got {n}")
    if n > SIEVE_MAX:
        raise ResourceGuardError(f"sieve limit {n} exceeds guard {SIEVE_MAX}")


def build_omega_table(n: int) -> OmegaTable:
    _check_sieve_size(n)
    spf = np.zeros(n + 1, dtype=np.int64)
    for p in range(2, isqrt(n) + 1):
        if spf[p] == 0:
            tail = spf[p * p :: p]
            tail[tail == 0] = p
    idx = np.arange(n + 1, dtype=np.int64)
    primes = spf == 0
    primes[:2] = False
    spf[primes] = idx[primes]

    # peel one smallest prime at a time; a new prime bumps omega
    omega = np.zeros(n + 1, dtype=np.int8)
    rem = idx.copy()
    last = np.zeros(n + 1, dtype=np.int64)
    active = np.nonzero(rem > 1)[0]
    while active.size:
        p = spf[rem[active]]
        omega[active] += (p != last[active]).astype(np.int8)
        last[active] = p
        rem[active] //= p
        active = active[rem[active] > 1]
    omega.setflags(write=False)
    spf.setflags(write=False)
    return OmegaTable(limit=n, omega=omega, spf=spf)


def mu_star(t: OmegaTable, m: int) -> int:
    t._check(m)
    return -1 if t.omega[m] % 2 else 1


def is_unitary_divisor(i: int, j: int) -> bool:
    if i < 1 or j < 1:
        raise ContractError("unitary divisibility is defined on positive integers")
    return j % i == 0 and gcd(i, j // i) == 1


def prime_power_parts(m: int) -> list[int]:
    """The prime-power components p**e of m, by trial division."""
    parts = []
    p = 2
    while p * p <= m:
        if m % p == 0:
            q = 1
            while m % p == 0:
                m //= p
                q *= p
            parts.append(q)
        p += 1 if p == 2 else 2
    if m > 1:
        parts.append(m)
    return parts


def unitary_divisors(m: int) -> list[int]:
    if m < 1:
        raise ContractError(f"m must be positive, got {m}")
    divs = [1]
    for q in prime_power_parts(m):
        divs += [d * q for d in divs]
    return sorted(divs)


def unitary_convolve(f, g) -> list:
    """(f ⊙ g)(m) = sum over d ∥ m of f(d) g(m/d).

    Inputs are length-n sequences where position ``i - 1`` holds the value
    at i; the result uses the same layout.
    """
    n = len(f)
    if len(g) != n:
        raise ContractError(f"length mismatch: {n} vs {len(g)}")
    out = [0] * n
    for d in range(1, n + 1):
        fd = f[d - 1]
        for t in range(1, n // d + 1):
            if gcd(d, t) == 1:
                out[d * t - 1] += fd * g[t - 1]
    return out


def mertens_star(t: OmegaTable, x: int) -> int:
    t._check(x)
    return int(t.mertens[x])


def mertens_star_coprime(t: OmegaTable, x, n: int) -> int:
    """M*(x, n): sum of mu*(k) over k <= x with gcd(k, n) = 1.

    ``x`` may be a real or a Fraction such as ``Fraction(n, i)``; it is
    floored exactly.
    """
    if n < 1:
        raise ContractError(f"n must be positive, got {n}")
    top = int(x // 1) if isinstance(x, (Fraction, int)) else int(np.floor(x))
    if top < 0:
        raise ContractError(f"x must be positive, got {x}")
    if top == 0:
        return 0
    t._check(top)
    k = np.arange(1, top + 1, dtype=np.int64)
    keep = np.gcd(k, n) == 1
    return int(t.mu_star[1 : top + 1][keep].sum())


def small_primes(limit: int) -> np.ndarray:
    """Primes <= limit by a plain Eratosthenes sieve."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.nonzero(flags)[0].astype(np.int64)


def _segment_counts(lo: int, hi: int, primes: list[int]) -> np.ndarray:
    rem = np.arange(lo, hi + 1, dtype=np.int64)
    om = np.zeros(hi - lo + 1, dtype=np.int64)
    for p in primes:
        if p * p > hi:
            break
        start = -(-lo // p) * p
        if start > hi:
            continue
        om[start - lo :: p] += 1
        pk = p
        while pk <= hi:
            start = -(-lo // pk) * pk
            if start > hi:
                break
            rem[start - lo :: pk] //= p
            pk *= p
    # anything left over is one prime above sqrt(hi)
    om += rem > 1
    return np.bincount(om)


def omega_histogram(x: int, segment_size: int = DEFAULT_SEGMENT, workers: int = 1) -> OmegaHistogram:
    """Counts C_j(x) via segmented prime marking.

    Peak memory is one segment plus the primes up to sqrt(x).  Segments are
    independent and their integer counts are summed, so the result does not
    depend on ``workers``.
    """
    if x < 1:
        raise ContractError(f"x must be >= 1, got {x}")
    if segment_size < 2:
        raise ContractError(f"segment_size must be >= 2, got {segment_size}")
    primes = small_primes(isqrt(x)).tolist()
    bounds = [(lo, min(lo + segment_size - 1, x)) for lo in range(1, x + 1, segment_size)]

    def run(b):
        return _segment_counts(b[0], b[1], primes)

    total = np.zeros(1, dtype=np.int64)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, bounds))
    else:
        parts = map(run, bounds)
    for part in parts:
        if part.size > total.size:
            total = np.pad(total, (0, part.size - total.size))
        total[: part.size] += part
    return OmegaHistogram(limit=x, counts=tuple(int(c) for c in np.trim_zeros(total, "b")))


def histogram_from_table(t: OmegaTable, x: int) -> OmegaHistogram:
    t._check(x)
    counts = np.bincount(t.omega[1 : x + 1].astype(np.int64))
    return OmegaHistogram(limit=x, counts=tuple(int(c) for c in counts))


def stirling2_table(max_n: int, max_k: int) -> StirlingTable:
    if max_n < 0 or max_k < 0:
        raise ContractError("table bounds must be nonnegative")
    rows = [[1] + [0] * max_k]
    for n in range(1, max_n + 1):
        prev = rows[-1]
        rows.append([0] + [k * prev[k] + prev[k - 1] for k in range(1, max_k + 1)])
    return StirlingTable(max_n, max_k, tuple(tuple(r) for r in rows))


def first_primes(k: int) -> list[int]:
    if k <= 0:
        return []
    bound = 16
    while True:
        ps = small_primes(bound)
        if ps.size >= k:
            return [int(p) for p in ps[:k]]
        bound *= 2


def primorial(k: int) -> int:
    if k < 0:
        raise ContractError(f"k must be nonnegative, got {k}")
    out = 1
    for p in first_primes(k):
        out *= p
    return out


def k_sequence(t: OmegaTable, n: int) -> int:
    """k_n: k_1 = 0 and k_n = max(k_{n-1}, omega(n) + 1).

    For n >= 2 this is one more than the largest omega(m) with m <= n.
    """
    t._check(n)
    return int(t.k_values[n])


def k_from_primorials(n: int) -> int:
    """The unique k with N_{k-1} <= n < N_k (defined for n >= 2)."""
    if n < 2:
        raise ContractError("primorial characterization needs n >= 2")
    k, nk, ps = 1, 2, iter(first_primes(64))
    next(ps)
    while nk <= n:
        k += 1
        nk *= next(ps)
    return k
