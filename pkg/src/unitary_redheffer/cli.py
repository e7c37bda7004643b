"""Command-line entry point: ``unitary-redheffer <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 resource guard, 4 numeric failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor

from . import arith, charpoly, matrixlab, spectral
from .config import POWER_MAX_ITER, RunConfig, load_config
from .errors import ContractError, NumericFailure, ResourceGuardError
from .verify import run_verify

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_GUARD, EXIT_NUMERIC = 0, 1, 2, 3, 4


class _Failed(Exception):
    """A check inside a command failed; maps to exit code 1."""


def _emit(cfg: RunConfig, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if cfg.output == "-":
        sys.stdout.write(text)
    else:
        with open(cfg.output, "w", newline="") as fh:
            fh.write(text)


def cmd_matrix(args, cfg: RunConfig) -> str:
    table = arith.build_omega_table(args.n) if args.kind == "t" else None
    m = matrixlab.build(args.kind, args.n, table)
    if args.format == "csv":
        return m.to_csv()
    return m.to_dense(cfg.guards.dense_max).render()


def cmd_det(args, cfg: RunConfig) -> str:
    if args.method == "bareiss":
        return str(matrixlab.bareiss_det(matrixlab.build_rstar(args.n).to_dense(cfg.guards.dense_max)))
    return str(arith.mertens_star(arith.build_omega_table(args.n), args.n))


def cmd_charpoly(args, cfg: RunConfig) -> str:
    n = args.n
    h = arith.omega_histogram(n, cfg.segment_size, cfg.threads)
    p = charpoly.reduced_poly(h, n) if args.reduced else charpoly.charpoly_shifted(h, n)
    if args.check_oracle:
        full = charpoly.charpoly_shifted(h, n)
        oracle = matrixlab.charpoly_oracle(n, guard=cfg.guards.oracle_max)
        if charpoly.expand_to_monomial(full, cfg.guards.oracle_max) != oracle:
            raise _Failed(f"characteristic polynomial for n={n} disagrees with the oracle")
    if args.basis == "monomial":
        coeffs = charpoly.expand_to_monomial(p, cfg.guards.oracle_max)
        return " ".join(str(c) for c in reversed(coeffs))
    return p.render(ascii=args.ascii)


def cmd_scan_mult(args, cfg: RunConfig) -> str:
    if not 1 <= args.start <= args.stop:
        raise ContractError("need 1 <= --from <= --to")
    t = arith.build_omega_table(args.stop)
    scan = charpoly.scan_multiplicity(t, args.start, args.stop)
    text = charpoly.scan_csv(scan)
    bad = charpoly.scan_failures(scan)
    if any(bad.values()):
        _emit(cfg, text)
        raise _Failed(f"bound violations: {bad}")
    return text


def _eigs_one(n: int, args, cfg: RunConfig, consts):
    if n < 2:
        raise ContractError("eigs needs n >= 2")
    tol = cfg.tolerances
    if args.method == "power":
        lam = spectral.dominant_power_iteration(matrixlab.build_rstar(n), tol.power_tol, args.max_iter)
        if not args.compare:
            return f"{n},{lam!r},POWER"
        ap, am = spectral.asymptotic_lambda(n, consts)
        return f"{n},{lam!r},,{ap!r},{am!r},{spectral.scaled_error(lam, ap, n)!r},"
    h = arith.omega_histogram(n, cfg.segment_size)
    rep = spectral.eigen_report(h, n, tol.root_tol)
    if args.compare:
        return spectral.eigen_csv_row(rep, consts)
    return "\n".join(
        f"{n},{i},{lam.real!r},{lam.imag!r},{res!r}"
        for i, (lam, res) in enumerate(zip(rep.eigenvalues, rep.residuals), start=1)
    )


def cmd_eigs(args, cfg: RunConfig) -> str:
    consts = spectral.compute_constants() if args.compare else None
    if any(n < 3 for n in args.n) and args.compare:
        raise ContractError("--compare needs n >= 3")
    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        rows = list(pool.map(lambda n: _eigs_one(n, args, cfg, consts), args.n))
    if args.compare:
        header = spectral.EIGEN_HEADER
    elif args.method == "power":
        header = "n,lambda_plus,method"
    else:
        header = "n,i,re,im,residual"
    return "\n".join([header] + rows)


def cmd_verify(args, cfg: RunConfig) -> str:
    results = run_verify(args.max_n, cfg.guards.dense_max, cfg.guards.oracle_max, args.tamper_s2)
    ok = all(r.ok for r in results)
    text = json.dumps({"ok": ok, "suites": [r.to_dict() for r in results]}, indent=2)
    if not ok:
        _emit(cfg, text)
        raise _Failed("verification failed")
    return text


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="unitary-redheffer", description=__doc__.splitlines()[0])
    p.add_argument("--config", help="JSON file with RunConfig keys")
    p.add_argument("--threads", type=int)
    p.add_argument("--segment-size", type=int)
    p.add_argument("--root-tol", type=float)
    p.add_argument("--power-tol", type=float)
    p.add_argument("--dense-max", type=int)
    p.add_argument("--oracle-max", type=int)
    p.add_argument("-o", "--output", help="output path, '-' for stdout")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("matrix", help="render R*_n, S_n or T_n")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--kind", choices=["rstar", "s", "t"], default="rstar")
    s.add_argument("--format", choices=["dense", "csv"], default="dense")
    s.set_defaults(func=cmd_matrix)

    s = sub.add_parser("det", help="determinant of R*_n")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--method", choices=["sieve", "bareiss"], default="sieve")
    s.set_defaults(func=cmd_det)

    s = sub.add_parser("charpoly", help="characteristic polynomial of R*_n")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--basis", choices=["shifted", "monomial"], default="shifted")
    s.add_argument("--reduced", action="store_true", help="drop the μ^{m_n} factor")
    s.add_argument("--check-oracle", action="store_true")
    s.add_argument("--ascii", action="store_true", help="write u instead of μ")
    s.set_defaults(func=cmd_charpoly)

    s = sub.add_parser("scan-mult", help="multiplicity of eigenvalue 1 and its bounds, as CSV")
    s.add_argument("--from", dest="start", type=int, default=1)
    s.add_argument("--to", dest="stop", type=int, required=True)
    s.add_argument("--out", dest="out")
    s.set_defaults(func=cmd_scan_mult)

    s = sub.add_parser("eigs", help="non-trivial eigenvalues of R*_n")
    s.add_argument("--n", type=int, action="append", required=True)
    s.add_argument("--method", choices=["roots", "power"], default="roots")
    s.add_argument("--compare", action="store_true", help="add asymptotic columns")
    s.add_argument("--max-iter", type=int, default=POWER_MAX_ITER, help="power iteration cap")
    s.set_defaults(func=cmd_eigs)

    s = sub.add_parser("verify", help="run the brute-force cross-check suites")
    s.add_argument("--max-n", type=int, required=True)
    s.add_argument("--tamper-s2", type=int, default=0, help=argparse.SUPPRESS)
    s.set_defaults(func=cmd_verify)
    return p


def _config_from(args) -> RunConfig:
    overrides = {"threads": args.threads, "segment_size": args.segment_size}
    base = load_config(args.config, **overrides)
    data = base.to_dict()
    for key, val in (("root_tol", args.root_tol), ("power_tol", args.power_tol)):
        if val is not None:
            data["tolerances"][key] = val
    for key, val in (("dense_max", args.dense_max), ("oracle_max", args.oracle_max)):
        if val is not None:
            data["guards"][key] = val
    out = getattr(args, "out", None) or args.output
    if out is not None:
        data["output"] = out
    return RunConfig.from_dict(data)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from(args)
        _emit(cfg, args.func(args, cfg))
    except _Failed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except ResourceGuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except NumericFailure as exc:
        print(f"numeric failure: {exc} (best iterate: {exc.best})", file=sys.stderr)
        return EXIT_NUMERIC
    except (ContractError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
