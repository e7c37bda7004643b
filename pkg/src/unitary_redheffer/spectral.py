"""Non-trivial eigenvalues of R*_n and their dominant-term asymptotics.

The eigenvalues other than 1 are μ + 1 for the roots μ of the reduced
polynomial (degree k_n, at most 10 below 6.5e9), so root finding never
touches anything of size n.  Power iteration on the sparse matrix gives an
independent value for the largest eigenvalue.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np
from scipy import integrate

from .arith import OmegaHistogram
from .charpoly import ShiftedPoly, reduced_poly, sstar_all
from .config import POWER_MAX_ITER, POWER_TOL, ROOT_TOL
from .errors import ContractError, NumericFailure
from .matrixlab import RSTAR, SparseUnitaryMatrix, matvec

ROOTS, POWER = "ROOTS", "POWER"

# B_2, B_4, ..., B_12
_BERNOULLI = [Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42), Fraction(-1, 30),
              Fraction(5, 66), Fraction(-691, 2730)]


@dataclass(frozen=True)
class AsymptoticConstants:
    euler_gamma: float
    zeta2: float
    zeta_log_deriv_2: float  # ζ'(2)/ζ(2)
    precision: int
    error_bounds: dict = field(default_factory=dict, compare=False)

    @property
    def zeta_prime_2(self) -> float:
        return self.zeta_log_deriv_2 * self.zeta2

    @property
    def lambda_offset(self) -> float:
        """γ - 1/2 - ζ'/ζ(2), the constant shared by λ+ and λ-."""
        return self.euler_gamma - 0.5 - self.zeta_log_deriv_2

    @property
    def s2_linear_coeff(self) -> float:
        """Coefficient of x in the S*_2 main terms, as the Proposition uses it."""
        return 2 * (self.euler_gamma - 1.5 - self.zeta_log_deriv_2)

    @property
    def s2_linear_coeff_standard(self) -> float:
        """Coefficient of x from the classical Σ 2^ω(m) expansion, minus 2."""
        z = self.zeta2
        return (2 * self.euler_gamma - 1) / z - 2 * self.zeta_prime_2 / z**2 - 2


def _gamma_brent_mcmillan(digits: int) -> tuple[float, float]:
    """γ = Σ a_k H_k / Σ a_k - log N with a_k = (N^k/k!)², error ~ π e^{-4N}."""
    # 5 guard digits so the 12-digit self-test holds at every precision
    big_n = math.ceil((digits + 5) * math.log(10) / 4) + 2
    a, h = 1.0, 0.0
    num, den = 0.0, 1.0
    k = 0
    while True:
        k += 1
        a *= (big_n / k) ** 2
        h += 1.0 / k
        num += a * h
        den += a
        if k > big_n and a < den * 1e-18:
            break
    return num / den - math.log(big_n), math.pi * math.exp(-4 * big_n)


def _gamma_integral() -> tuple[float, float]:
    """γ = -∫_0^∞ e^{-x} log x dx by adaptive quadrature."""
    f = lambda x: -math.exp(-x) * math.log(x)  # noqa: E731
    a, ea = integrate.quad(f, 0, 1, limit=200, epsabs=1e-15)
    b, eb = integrate.quad(f, 1, np.inf, limit=200, epsabs=1e-15)
    return a + b, ea + eb


def _rising(s: int, r: int) -> int:
    out = 1
    for i in range(r):
        out *= s + i
    return out


def _em_tail(big_n: int, with_log: bool, terms: int) -> tuple[float, float]:
    """Σ_{m>=N} f(m) for f = log x / x² (or 1/x²) by Euler-Maclaurin.

    Returns the value and the size of the first omitted correction.
    """
    ln = math.log(big_n)

    def deriv(r: int) -> float:
        # d^r/dx^r x^{-2} log x = (-1)^r (2)_r x^{-2-r} (log x - Σ_{i<r} 1/(2+i))
        base = (-1) ** r * _rising(2, r) * big_n ** (-2 - r)
        if not with_log:
            return base
        return base * (ln - sum(1 / (2 + i) for i in range(r)))

    integral = (ln + 1) / big_n if with_log else 1 / big_n
    total = integral + deriv(0) / 2
    for j in range(1, terms + 1):
        total -= float(_BERNOULLI[j - 1]) / math.factorial(2 * j) * deriv(2 * j - 1)
    nxt = terms + 1
    err = abs(float(_BERNOULLI[nxt - 1]) / math.factorial(2 * nxt) * deriv(2 * nxt - 1))
    return total, err


def _zeta2_series(big_n: int = 30) -> tuple[float, float]:
    head = math.fsum(1 / m**2 for m in range(1, big_n))
    tail, err = _em_tail(big_n, with_log=False, terms=4)
    return head + tail, err


def _zeta_prime_2(digits: int, big_n: int | None = None, terms: int = 4) -> tuple[float, float]:
    """ζ'(2) = -Σ log m / m²."""
    big_n = big_n or 10 + 2 * digits
    head = math.fsum(math.log(m) / m**2 for m in range(2, big_n))
    tail, err = _em_tail(big_n, with_log=True, terms=terms)
    return -(head + tail), err


def compute_constants(digits: int = 15) -> AsymptoticConstants:
    """γ, ζ(2) and ζ'(2)/ζ(2) from series, each checked against a second route."""
    if not 8 <= digits <= 15:
        raise ContractError(f"digits must be in 8..15, got {digits}")
    gamma, g_err = _gamma_brent_mcmillan(digits)
    zeta2 = math.pi**2 / 6
    zp, zp_err = _zeta_prime_2(digits)
    c = AsymptoticConstants(
        euler_gamma=gamma,
        zeta2=zeta2,
        zeta_log_deriv_2=zp / zeta2,
        precision=digits,
        error_bounds={"euler_gamma": g_err, "zeta2": math.ulp(zeta2), "zeta_prime_2": zp_err},
    )
    self_test(c)
    return c


def self_test(c: AsymptoticConstants, digits: int = 12) -> None:
    """Cross-check each constant against an independent evaluation."""
    tol = 10.0**-digits
    g_int, _ = _gamma_integral()
    z_ser, _ = _zeta2_series()
    zp_alt, _ = _zeta_prime_2(15, big_n=2000, terms=2)
    checks = {
        "euler_gamma": (c.euler_gamma, g_int),
        "zeta2": (c.zeta2, z_ser),
        "zeta_prime_2": (c.zeta_prime_2, zp_alt),
    }
    for name, (a, b) in checks.items():
        if abs(a - b) > tol * max(1.0, abs(b)):
            raise NumericFailure(f"{name} self-test failed: {a!r} vs {b!r}", best=a)


@dataclass(frozen=True)
class EigenReport:
    n: int
    eigenvalues: tuple[complex, ...]
    residuals: tuple[float, ...]
    lambda_plus: float
    lambda_minus: float
    method: str

    @property
    def shifted_roots(self) -> list[complex]:
        return [lam - 1 for lam in self.eigenvalues]

    def dominance_ok(self) -> bool:
        half = math.sqrt(self.n) / 2
        above = sum(1 for lam in self.eigenvalues if lam.real > 1 + half)
        below = sum(1 for lam in self.eigenvalues if lam.real < 1 - half)
        return above == 1 and below == 1

    def minor_magnitudes(self) -> list[float]:
        """|λ| for the k_n - 2 eigenvalues other than λ±."""
        mags = sorted(self.eigenvalues, key=lambda z: abs(z - 1), reverse=True)
        return [abs(z) for z in mags[2:]]


def _poly_scale(q: ShiftedPoly, mu) -> float:
    return max(1.0, float(abs(q.coeff(q.degree)) * abs(mu) ** q.degree))


def nontrivial_eigenvalues(
    q: ShiftedPoly, tol: float = ROOT_TOL, n: int | None = None, polish_steps: int = 1
) -> EigenReport:
    """All roots of the reduced polynomial, shifted back to eigenvalues λ = μ + 1.

    Companion-matrix roots are polished by Newton on the exact integer
    coefficients in 50-digit arithmetic.
    """
    k = q.degree
    if k < 2:
        raise ContractError(f"reduced polynomial must have degree >= 2, got {k}")
    if tol <= 0:
        raise ContractError("tol must be positive")
    if n is None:
        # q = μ^k - (n-1) μ^{k-2} - ...
        n = 1 - q.coeff(k - 2)
    coeffs = q.dense()[::-1]
    approx = np.roots([float(c) for c in coeffs])
    roots, residuals = [], []
    with mpmath.workdps(50):
        mp_coeffs = [mpmath.mpf(c) for c in coeffs]
        d_coeffs = [c * (k - i) for i, c in enumerate(mp_coeffs[:-1])]
        for z0 in approx:
            z = mpmath.mpc(complex(z0))
            for _ in range(polish_steps):
                dq = mpmath.polyval(d_coeffs, z)
                if dq == 0:
                    break
                z = z - mpmath.polyval(mp_coeffs, z) / dq
            if abs(z.imag) <= 1e-30 * max(1, abs(z)):
                z = mpmath.mpc(z.real, 0)
            res = float(abs(mpmath.polyval(mp_coeffs, z)))
            roots.append(complex(z))
            residuals.append(res)
            if res > tol * _poly_scale(q, complex(z)):
                raise NumericFailure(f"root {complex(z)} residual {res:.3e} above tolerance", best=roots)
    order = sorted(range(k), key=lambda i: (roots[i].real, roots[i].imag))
    mus = [roots[i] for i in order]
    residuals = [residuals[i] for i in order]
    real = [m.real for m in mus if abs(m.imag) <= 1e-9 * max(1.0, abs(m))]
    return EigenReport(
        n=n,
        eigenvalues=tuple(m + 1 for m in mus),
        residuals=tuple(residuals),
        lambda_plus=max(real) + 1,
        lambda_minus=min(real) + 1,
        method=ROOTS,
    )


def eigen_report(h: OmegaHistogram, n: int, tol: float = ROOT_TOL) -> EigenReport:
    return nontrivial_eigenvalues(reduced_poly(h, n), tol, n=n)


def dominant_power_iteration(
    m: SparseUnitaryMatrix, tol: float = POWER_TOL, max_iter: int = POWER_MAX_ITER
) -> float:
    """Largest eigenvalue of R*_n by power iteration from the all-ones vector.

    Stops when successive Rayleigh quotients differ by less than ``tol``
    relative to the current estimate.
    """
    if m.kind != RSTAR:
        raise ContractError(f"power iteration expects an RSTAR matrix, got {m.kind}")
    if tol <= 0:
        raise ContractError("tol must be positive")
    v = np.ones(m.n) / math.sqrt(m.n)
    est = prev = math.nan
    for _ in range(max_iter):
        w = matvec(m, v)
        est = float(v @ w)
        norm = float(np.linalg.norm(w))
        if norm == 0:
            raise NumericFailure("iterate collapsed to zero", best=est)
        v = w / norm
        if abs(est - prev) < tol * max(1.0, abs(est)):
            return est
        prev = est
    raise NumericFailure(f"power iteration did not converge in {max_iter} steps", best=est)


def asymptotic_lambda(n: int, c: AsymptoticConstants) -> tuple[float, float]:
    """Main terms ±√n + log n / (2ζ(2)) + γ - 1/2 - ζ'/ζ(2)."""
    if n < 3:
        raise ContractError(f"asymptotics need n >= 3, got {n}")
    centre = math.log(n) / (2 * c.zeta2) + c.lambda_offset
    root = math.sqrt(n)
    return centre + root, centre - root


def scaled_error(lam: float, asym: float, n: int) -> float:
    """|λ - main terms| · √n / log² n."""
    return abs(lam - asym) * math.sqrt(n) / math.log(n) ** 2


def s2star(h: OmegaHistogram) -> int:
    """S*_2(x) with the Stirling definition (the m = 1 term contributes 0)."""
    vals = sstar_all(h, h.limit)
    return vals[0] if vals else 0


def s2star_asymptotic_check(x: int, h: OmegaHistogram, c: AsymptoticConstants, standard: bool = False) -> float:
    """(S*_2(x) - x log x / ζ(2) - b·x) / √x.

    ``b`` is 2(γ - 3/2 - ζ'/ζ(2)) by default; ``standard=True`` uses the
    coefficient from the classical Σ 2^ω(m) expansion instead.
    """
    if x < 100:
        raise ContractError(f"x must be >= 100, got {x}")
    if h.limit != x:
        raise ContractError(f"histogram limit {h.limit} != x={x}")
    b = c.s2_linear_coeff_standard if standard else c.s2_linear_coeff
    main = x * math.log(x) / c.zeta2 + b * x
    return (s2star(h) - main) / math.sqrt(x)


EIGEN_HEADER = "n,lambda_plus,lambda_minus,asym_plus,asym_minus,err_plus_scaled,err_minus_scaled"


def eigen_csv_row(r: EigenReport, c: AsymptoticConstants) -> str:
    ap, am = asymptotic_lambda(r.n, c)
    cells = [r.lambda_plus, r.lambda_minus, ap, am,
             scaled_error(r.lambda_plus, ap, r.n), scaled_error(r.lambda_minus, am, r.n)]
    return ",".join([str(r.n)] + [repr(float(v)) for v in cells])


def eigen_csv(reports: list[EigenReport], c: AsymptoticConstants) -> str:
    buf = io.StringIO()
    buf.write(EIGEN_HEADER + "\n")
    for r in reports:
        buf.write(eigen_csv_row(r, c) + "\n")
    return buf.getvalue()
