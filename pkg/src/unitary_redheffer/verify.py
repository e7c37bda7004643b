"""Brute-force cross-check suites behind ``unitary-redheffer verify``."""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from math import gcd

from . import arith, charpoly, matrixlab
from .config import DENSE_MAX, ORACLE_MAX


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: int = 0
    first_failure: str | None = field(default=None)

    def record(self, ok: bool, label) -> None:
        self.cases += 1
        if not ok:
            self.failures += 1
            if self.first_failure is None:
                self.first_failure = str(label)

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> dict:
        return asdict(self) | {"ok": self.ok}


def _omega_suite(t, max_n):
    r = SuiteResult("omega")
    for m in range(1, max_n + 1):
        w = len(arith.prime_power_parts(m))
        r.record(t.omega[m] == w and len(arith.unitary_divisors(m)) == 2**w, m)
    return r


def _eq1_suite(t, max_n):
    r = SuiteResult("unitary_mobius_identity")
    conv = arith.unitary_convolve(t.mu_star[1 : max_n + 1].tolist(), [1] * max_n)
    for m, v in enumerate(conv, start=1):
        r.record(v == (1 if m == 1 else 0), m)
    return r


def _lemma_i_suite(t, max_n):
    r = SuiteResult("lemma_unitary_inversion")
    top = min(max_n, 100)
    for i in range(1, top + 1):
        for j in range(1, top + 1):
            s = sum(int(t.mu_star[d]) for d in arith.unitary_divisors(j) if arith.is_unitary_divisor(i, j // d))
            r.record(s == int(i == j), (i, j))
    return r


def _lemma_ii_suite(t, max_n):
    r = SuiteResult("lemma_coprime_mertens_sum")
    for n in range(1, max_n + 1):
        # M*(n/k, k) for every k <= n, then the i ∥ k sums per i
        col = [0] + [arith.mertens_star_coprime(t, n // k, k) for k in range(1, n + 1)]
        for i in range(1, n + 1):
            s = sum(col[k] for k in range(i, n + 1, i) if gcd(i, k // i) == 1)
            r.record(s == 1, (i, n))
    return r


def _factorization_suite(t, max_n, dense_max):
    r = SuiteResult("factorization")
    for n in range(1, min(max_n, dense_max) + 1):
        prod = matrixlab.sparse_multiply(matrixlab.build_s(n), matrixlab.build_t(t, n), guard=dense_max)
        r.record(prod == matrixlab.build_rstar(n).to_dense(dense_max), n)
    return r


def _determinant_suite(t, max_n, dense_max):
    r = SuiteResult("determinant")
    for n in range(1, min(max_n, dense_max) + 1):
        r.record(matrixlab.bareiss_det(matrixlab.build_rstar(n).to_dense(dense_max)) == arith.mertens_star(t, n), n)
    return r


def _charpoly_suite(t, max_n, oracle_max, tamper_s2):
    r = SuiteResult("charpoly")
    for n in range(2, min(max_n, oracle_max) + 1):
        p = charpoly.charpoly_shifted(arith.histogram_from_table(t, n), n)
        if tamper_s2 and n >= 3:
            d = dict(p.terms)
            d[n - 3] = d.get(n - 3, 0) - tamper_s2
            p = charpoly.ShiftedPoly.from_dict(d)
        oracle = matrixlab.charpoly_oracle(n, guard=oracle_max)
        mult = matrixlab.root_multiplicity(oracle, 1)
        r.record(charpoly.expand_to_monomial(p, guard=oracle_max) == oracle and mult == n - arith.k_sequence(t, n), n)
    return r


def _histogram_suite(t, max_n):
    r = SuiteResult("histogram")
    for x in sorted({1, 2, 8, 30, max_n}):
        if x > max_n:
            continue
        ref = arith.histogram_from_table(t, x)
        for s in (2, 16, 1024):
            r.record(arith.omega_histogram(x, s) == ref, (x, s))
    return r


def _bounds_suite(t, max_n):
    r = SuiteResult("multiplicity_bounds")
    scan = charpoly.scan_multiplicity(t, 1, max_n)
    bad = charpoly.scan_failures(scan)
    r.cases = max_n
    r.failures = sum(bad.values())
    if r.failures:
        r.first_failure = str(bad)
    for n in range(2, max_n + 1):
        r.record(arith.k_sequence(t, n) == arith.k_from_primorials(n), n)
    return r


def _trace_suite(t, max_n):
    r = SuiteResult("traces")
    for n in range(2, max_n + 1):
        q = charpoly.reduced_poly(arith.histogram_from_table(t, n), n)
        m = matrixlab.build_rstar(n)
        r.record(charpoly.eigen_traces(q, n) == (m.trace(), m.trace_of_square()) == (n, 3 * n - 2), n)
    return r


def run_verify(max_n: int, dense_max: int = DENSE_MAX, oracle_max: int = ORACLE_MAX,
               tamper_s2: int = 0) -> list[SuiteResult]:
    """Run every suite up to ``max_n``; ``tamper_s2`` perturbs S*_2 for fault injection."""
    t = arith.build_omega_table(max(max_n, 2))
    return [
        _omega_suite(t, max_n),
        _eq1_suite(t, max_n),
        _lemma_i_suite(t, max_n),
        _lemma_ii_suite(t, max_n),
        _factorization_suite(t, max_n, dense_max),
        _determinant_suite(t, max_n, dense_max),
        _charpoly_suite(t, max_n, oracle_max, tamper_s2),
        _histogram_suite(t, max_n),
        _bounds_suite(t, max_n),
        _trace_suite(t, max_n),
    ]
