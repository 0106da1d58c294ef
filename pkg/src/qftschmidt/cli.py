"""Command-line interface.

Exit status: 0 on success, 1 when a verification sweep finds a failure,
2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .engine import DEFAULT_REL_TOL, SchmidtDecomposition, SchmidtTerm, reduced_density, schmidt_decompose
from .errors import QftSchmidtError
from .linalg import BipartiteDims, matrix_from_json, matrix_to_json
from .qft import (
    chi_identity_check,
    closed_form_decomposition,
    qft_bipartite,
    rho_closed_form,
    spectrum_by_cases,
)
from .strength import (
    communication_operator,
    communication_operator_decomposition,
    communication_operator_numeric,
    strength_report,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

RECONSTRUCTION_TOL = 1e-10
RHO_TOL = 1e-12


class UsageError(Exception):
    pass


def _num(x: float) -> str:
    return f"{x:.17g}"


def _write_csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_num(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _dump_json(obj: Any) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _dims(n1: int, n2: int) -> BipartiteDims:
    try:
        return BipartiteDims(n1, n2)
    except QftSchmidtError as exc:
        raise UsageError(str(exc)) from None


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
        return
    try:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out_path}: {exc}") from None


def _decomposition_summary(d: SchmidtDecomposition, fmt: str) -> str:
    if fmt == "json":
        return _dump_json(d.to_json())
    rows = [(k, t.coefficient, t.coefficient**2) for k, t in enumerate(d.terms)]
    if fmt == "csv":
        return _write_csv(["term", "lambda", "lambda_squared"], rows)
    lines = [f"dims: {d.dims.n1} x {d.dims.n2}   Schmidt number: {d.schmidt_number}"]
    lines += [f"{k:>5}  {c:.12f}  {c2:.12f}" for k, c, c2 in rows]
    return "\n".join(lines) + "\n"


# -- spectrum ---------------------------------------------------------------

def cmd_spectrum(args: argparse.Namespace) -> int:
    table = spectrum_by_cases(_dims(args.n1, args.n2))
    if args.format == "json":
        text = _dump_json(table.to_json())
    elif args.format == "csv":
        text = _write_csv(
            ["case", "coefficient", "multiplicity"],
            [(table.case_label, c, m) for c, m in table.entries],
        )
    else:
        lines = [f"case: {table.case_label}", f"{'coefficient':>20}  multiplicity"]
        lines += [f"{c:>20.12f}  {m}" for c, m in table.entries]
        text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    return EXIT_OK


# -- decompose --------------------------------------------------------------

def cmd_decompose(args: argparse.Namespace) -> int:
    dims = _dims(args.n1, args.n2)
    if args.numeric:
        d = schmidt_decompose(qft_bipartite(dims), dims, args.tol)
    else:
        d = closed_form_decomposition(dims)
    fmt = "json" if args.out is not None else args.format
    _emit(_decomposition_summary(d, fmt), args.out)
    return EXIT_OK


def cmd_decompose_file(args: argparse.Namespace) -> int:
    dims = _dims(args.n1, args.n2)
    try:
        with open(args.path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read matrix from {args.path}: {exc}") from None
    f = matrix_from_json(obj)
    if f.shape != (dims.n, dims.n):
        raise UsageError(f"matrix is {f.shape[0]}x{f.shape[1]}, expected {dims.n}x{dims.n}")
    d = schmidt_decompose(f, dims, args.tol)
    fmt = "json" if args.out is not None else args.format
    _emit(_decomposition_summary(d, fmt), args.out)
    return EXIT_OK


# -- verify -----------------------------------------------------------------

@dataclass
class VerifyOutcome:
    dims: BipartiteDims
    max_coeff_deviation: float
    max_reconstruction_error: float
    schmidt_number_match: bool
    case_label: str
    spectrum_deviation: float = 0.0
    rho_deviation: float = 0.0
    chi_identity: bool = True
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict[str, Any]:
        return {
            "n1": self.dims.n1,
            "n2": self.dims.n2,
            "case": self.case_label,
            "max_coeff_deviation": self.max_coeff_deviation,
            "max_reconstruction_error": self.max_reconstruction_error,
            "schmidt_number_match": self.schmidt_number_match,
            "spectrum_deviation": self.spectrum_deviation,
            "rho_deviation": self.rho_deviation,
            "chi_identity": self.chi_identity,
            "passed": self.passed,
            "failures": self.failures,
        }


def _corrupt(d: SchmidtDecomposition) -> SchmidtDecomposition:
    """Rotate the phase of one entry of the first left factor (fault injection)."""
    first = d.terms[0]
    left = first.left.copy()
    left[-1, -1] *= np.exp(0.25j)
    return SchmidtDecomposition(d.dims, (SchmidtTerm(first.coefficient, left, first.right),) + d.terms[1:])


def verify_pair(dims: BipartiteDims, tol: float = DEFAULT_REL_TOL, corrupt: bool = False) -> VerifyOutcome:
    """Cross-check the closed-form decomposition against realignment + SVD for one pair."""
    f = qft_bipartite(dims)
    closed = closed_form_decomposition(dims)
    if corrupt:
        closed = _corrupt(closed)
    numeric = schmidt_decompose(f, dims, tol)
    table = spectrum_by_cases(dims)
    expected_sch = min(dims.n1, dims.n2) ** 2

    cc, nc = closed.coefficients, numeric.coefficients
    sch_match = closed.schmidt_number == numeric.schmidt_number == expected_sch
    dev = float(np.max(np.abs(cc - nc))) if sch_match else math.inf
    predicted = table.expand()
    spec_dev = float(np.max(np.abs(predicted - cc))) if predicted.size == cc.size else math.inf
    recon = max(
        float(np.linalg.norm(closed.reconstruct() - f)),
        float(np.linalg.norm(numeric.reconstruct() - f)),
    )
    rho_dev = float(np.max(np.abs(rho_closed_form(dims) - reduced_density(f, dims))))
    chi_ok = chi_identity_check(dims)

    failures = []
    if not sch_match:
        failures.append(
            f"Schmidt number closed={closed.schmidt_number} numeric={numeric.schmidt_number} "
            f"expected={expected_sch}"
        )
    if dev > tol:
        failures.append(f"coefficient deviation {dev:.3g} > {tol:.3g}")
    if spec_dev > tol:
        failures.append(f"spectrum table deviation {spec_dev:.3g} > {tol:.3g}")
    if recon > RECONSTRUCTION_TOL:
        failures.append(f"reconstruction error {recon:.3g} > {RECONSTRUCTION_TOL:.3g}")
    if rho_dev > RHO_TOL:
        failures.append(f"reduced density deviation {rho_dev:.3g} > {RHO_TOL:.3g}")
    if not chi_ok:
        failures.append("chi identity violated")
    return VerifyOutcome(dims, dev, recon, sch_match, table.case_label, spec_dev, rho_dev, chi_ok, failures)


def run_sweep(
    n1_max: int,
    n2_max: int,
    tol: float = DEFAULT_REL_TOL,
    jobs: int = 1,
    fault: tuple[int, int] | None = None,
) -> list[VerifyOutcome]:
    pairs = [BipartiteDims(a, b) for a in range(2, n1_max + 1) for b in range(2, n2_max + 1)]

    def check(dims: BipartiteDims) -> VerifyOutcome:
        return verify_pair(dims, tol, corrupt=fault == (dims.n1, dims.n2))

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(check, pairs))
    return [check(p) for p in pairs]


def _parse_pair(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N1,N2 but got {text!r}") from None
    return a, b


def cmd_verify(args: argparse.Namespace) -> int:
    n1_max = args.n1_max if args.n1_max is not None else args.max
    n2_max = args.n2_max if args.n2_max is not None else args.max
    if n1_max is None or n2_max is None:
        raise UsageError("give --max or both --n1-max and --n2-max")
    if n1_max < 2 or n2_max < 2:
        raise UsageError("sweep bounds must be >= 2")
    if not args.tol > 0:
        raise UsageError("--tol must be positive")
    outcomes = run_sweep(n1_max, n2_max, args.tol, args.jobs, args.inject_fault)

    if args.format == "json":
        sys.stdout.write(_dump_json([o.to_json() for o in outcomes]))
    elif args.format == "csv":
        sys.stdout.write(
            _write_csv(
                ["n1", "n2", "case", "max_coeff_deviation", "max_reconstruction_error",
                 "schmidt_number_match", "rho_deviation", "chi_identity", "passed"],
                [(o.dims.n1, o.dims.n2, o.case_label, o.max_coeff_deviation,
                  o.max_reconstruction_error, o.schmidt_number_match, o.rho_deviation,
                  o.chi_identity, o.passed) for o in outcomes],
            )
        )
    else:
        for o in outcomes:
            status = "PASS" if o.passed else "FAIL"
            sys.stdout.write(
                f"{status} N1={o.dims.n1:<3} N2={o.dims.n2:<3} {o.case_label:<9} "
                f"coeff_dev={o.max_coeff_deviation:.2e} recon={o.max_reconstruction_error:.2e} "
                f"rho_dev={o.rho_deviation:.2e}\n"
            )
    failed = [o for o in outcomes if not o.passed]
    for o in failed:
        sys.stderr.write(f"verification failed for N1={o.dims.n1}, N2={o.dims.n2}: {'; '.join(o.failures)}\n")
    sys.stderr.write(f"{len(outcomes) - len(failed)}/{len(outcomes)} pairs passed\n")
    return EXIT_FAIL if failed else EXIT_OK


# -- strength ---------------------------------------------------------------

def cmd_strength(args: argparse.Namespace) -> int:
    dims = _dims(args.n1, args.n2)
    if args.numeric:
        d = schmidt_decompose(qft_bipartite(dims), dims)
    else:
        d = closed_form_decomposition(dims)
    report = strength_report(d).to_json()
    if args.format == "json":
        text = _dump_json(report)
    elif args.format == "csv":
        text = _write_csv(list(report), [["" if v is None else v for v in report.values()]])
    else:
        text = "".join(f"{k:<18} {'-' if v is None else v}\n" for k, v in report.items())
    sys.stdout.write(text)
    return EXIT_OK


# -- commop -----------------------------------------------------------------

def cmd_commop(args: argparse.Namespace) -> int:
    n1, n2, n3 = args.n1, args.n2, args.n3
    for name, v in (("n1", n1), ("n2", n2), ("n3", n3)):
        if v < 2:
            raise UsageError(f"{name} must be >= 2, got {v}")
    terms = communication_operator_decomposition(n1, n2, n3)
    numeric = communication_operator_numeric(n1, n2, n3)
    c = communication_operator(n1, n2, n3)
    recon = sum(t.coefficient * np.kron(t.left, t.right) for t in terms)
    closed_coeffs = np.array([t.coefficient for t in terms])
    numeric_coeffs = np.array([t.coefficient for t in numeric])
    numeric_dev = (
        float(np.max(np.abs(closed_coeffs - numeric_coeffs)))
        if closed_coeffs.size == numeric_coeffs.size
        else math.inf
    )
    summary: dict[str, Any] = {
        "n1": n1,
        "n2": n2,
        "n3": n3,
        "terms": len(terms),
        "coefficient": terms[0].coefficient,
        "reconstruction_error": float(np.linalg.norm(recon - c)),
        "numeric_terms": len(numeric),
        "numeric_max_deviation": numeric_dev,
    }
    if args.format == "json":
        if args.full:
            summary["factors"] = [
                {"lambda": t.coefficient, "A": matrix_to_json(t.left), "B": matrix_to_json(t.right)}
                for t in terms
            ]
        text = _dump_json(summary)
    elif args.format == "csv":
        text = _write_csv(list(summary), [list(summary.values())])
    else:
        text = "".join(f"{k:<22} {v}\n" for k, v in summary.items())
        if args.full:
            for k, t in enumerate(terms):
                text += f"\nterm {k}: lambda = {t.coefficient}\nA =\n{t.left.real}\nB =\n{t.right.real}\n"
    sys.stdout.write(text)
    return EXIT_OK


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qftschmidt",
        description="Operator-Schmidt decompositions of the bipartite quantum Fourier transform.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    formats = ("json", "csv", "table")

    def dims_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--n1", type=int, required=True, help="first local dimension")
        p.add_argument("--n2", type=int, required=True, help="second local dimension")

    p = sub.add_parser("spectrum", help="Schmidt coefficients by case table")
    dims_args(p)
    p.add_argument("--format", choices=formats, default="table")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("decompose", help="full decomposition of the QFT")
    dims_args(p)
    p.add_argument("--numeric", action="store_true", help="use realignment + SVD instead of the closed form")
    p.add_argument("--tol", type=float, default=DEFAULT_REL_TOL, help="relative rank tolerance (numeric path)")
    p.add_argument("--out", help="write decomposition JSON to this file")
    p.add_argument("--format", choices=formats, default="table")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("decompose-file", help="numerical decomposition of an operator read from JSON")
    p.add_argument("path", help="matrix JSON file")
    dims_args(p)
    p.add_argument("--tol", type=float, default=DEFAULT_REL_TOL)
    p.add_argument("--out", help="write decomposition JSON to this file")
    p.add_argument("--format", choices=formats, default="table")
    p.set_defaults(func=cmd_decompose_file)

    p = sub.add_parser("verify", help="closed form vs numerics over all 2 <= N1, N2 <= max")
    p.add_argument("--max", type=int, help="square sweep bound")
    p.add_argument("--n1-max", type=int)
    p.add_argument("--n2-max", type=int)
    p.add_argument("--tol", type=float, default=DEFAULT_REL_TOL)
    p.add_argument("--jobs", type=int, default=1, help="pairs checked concurrently")
    p.add_argument("--format", choices=formats, default="table")
    p.add_argument("--inject-fault", type=_parse_pair, default=None, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("strength", help="Hartley/Schmidt strength and communication bounds")
    dims_args(p)
    p.add_argument("--numeric", action="store_true")
    p.add_argument("--format", choices=formats, default="table")
    p.set_defaults(func=cmd_strength)

    p = sub.add_parser("commop", help="decomposition of the communication operator")
    dims_args(p)
    p.add_argument("--n3", type=int, required=True)
    p.add_argument("--full", action="store_true", help="include the factor matrices")
    p.add_argument("--format", choices=formats, default="table")
    p.set_defaults(func=cmd_commop)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, QftSchmidtError) as exc:
        sys.stderr.write(f"qftschmidt {args.command}: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
