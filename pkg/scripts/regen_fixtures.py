"""Regenerate the numeric regression fixtures in tests/data/.

Run only when a change to the numerics is intended; the tests compare
against the frozen files.
"""
import json
from pathlib import Path

from unitary_redheffer.arith import omega_histogram
from unitary_redheffer.spectral import (
    asymptotic_lambda, compute_constants, eigen_report, s2star_asymptotic_check, scaled_error,
)

GRID = [10**2, 10**3, 10**4, 10**5, 10**6]
OUT = Path(__file__).resolve().parent.parent / "tests" / "data"


def main():
    c = compute_constants()
    rows = []
    for n in GRID:
        rep = eigen_report(omega_histogram(n), n)
        ap, am = asymptotic_lambda(n, c)
        rows.append({
            "n": n,
            "lambda_plus": rep.lambda_plus,
            "lambda_minus": rep.lambda_minus,
            "err_plus_scaled": scaled_error(rep.lambda_plus, ap, n),
            "err_minus_scaled": scaled_error(rep.lambda_minus, am, n),
        })
    fit = max(max(r["err_plus_scaled"], r["err_minus_scaled"]) for r in rows)
    (OUT / "proposition_fit.json").write_text(json.dumps({"C": fit, "grid": rows}, indent=2) + "\n")

    s2 = {}
    for x in (10**4, 10**5, 10**6):
        h = omega_histogram(x)
        s2[str(x)] = {
            "stated": s2star_asymptotic_check(x, h, c),
            "standard": s2star_asymptotic_check(x, h, c, standard=True),
        }
    (OUT / "s2star_remainder.json").write_text(json.dumps(s2, indent=2) + "\n")


if __name__ == "__main__":
    main()
