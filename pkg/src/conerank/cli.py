"""File-based front end: read instances, run selected bounds, emit reports.

Matrix input is dense CSV without header; tensor input is a JSON object
{"shape": [d1, ..., dn], "data": [...]} with the last index varying fastest;
cp input reuses the CSV matrix format behind a validation pass.  Reports are
JSON (schema 1) on stdout or --out; scans emit CSV rows
"param1,param2,bound,status" in deterministic parameter order.

Exit codes: 0 success, 2 input error, 3 solver failure, 4 size-cap exceeded.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

import numpy as np

from . import __version__
from .build import BuilderOptions, build_tau_cp, build_tau_plus_matrix, build_tau_plus_tensor
from .combinatorial import (boolean_rank, clique_number, cp_graph,
                            edge_clique_cover_number, fractional_edge_clique_cover,
                            fractional_rectangle_cover, rectangle_graph, theta_bar)
from .core import CpInputMatrix, NonnegMatrix, NonnegTensor, support
from .errors import (CapExceededError, ConerankError, InputValidationError,
                     SolveFailedError)
from .oracles import (gen_cp_example, gen_nested_rect_matrix, gen_tensor_example,
                      mutual_information_bound, psd_rank_lemma_value)
from .solve import SolverOptions, extract_bound, solve

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_SOLVER = 3
EXIT_CAP = 4

_NONNEG_BOUNDS = ("tau", "omega", "theta", "theta_bar", "chi_frac", "chi", "mutual_info")
_CP_BOUNDS = ("tau", "rank", "c_frac", "c_exact")


def _sha256(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _read_matrix_csv(path: str, eps_zero: float) -> NonnegMatrix:
    try:
        arr = np.loadtxt(path, delimiter=",", ndmin=2)
    except (OSError, ValueError) as exc:
        raise InputValidationError(f"cannot parse matrix CSV {path}: {exc}")
    return NonnegMatrix(arr, eps_zero=eps_zero)


def _read_tensor_json(path: str, eps_zero: float) -> NonnegTensor:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, ValueError) as exc:
        raise InputValidationError(f"cannot parse tensor JSON {path}: {exc}")
    if not isinstance(obj, dict) or "shape" not in obj or "data" not in obj:
        raise InputValidationError('tensor JSON must have keys "shape" and "data"')
    return NonnegTensor.from_flat(obj["shape"], obj["data"], eps_zero=eps_zero)


def _read_cp_csv(path: str) -> CpInputMatrix:
    try:
        arr = np.loadtxt(path, delimiter=",", ndmin=2)
    except (OSError, ValueError) as exc:
        raise InputValidationError(f"cannot parse matrix CSV {path}: {exc}")
    return CpInputMatrix(arr)


def _solver_options(args) -> SolverOptions:
    return SolverOptions(rel_gap_tol=args.tol, feas_tol=args.tol)


def _builder_options(args) -> BuilderOptions:
    return BuilderOptions(use_reduced=not args.full,
                          add_entrywise_nonneg=args.extra_nonneg,
                          add_two_minus_t=args.extra_2t)


def _requested(bounds_arg: str, allowed) -> list:
    tokens = []
    for tok in bounds_arg.split(","):
        tok = tok.strip()
        if not tok:
            continue
        if tok not in allowed:
            raise InputValidationError(
                f"unknown bound {tok!r}; choose from {', '.join(allowed)}")
        if tok == "theta_bar":
            tok = "theta"
        if tok not in tokens:
            tokens.append(tok)
    if not tokens:
        raise InputValidationError("no bounds requested")
    return tokens


def _tau_entry(name: str, problem, sopts: SolverOptions) -> dict:
    counts = {"equalities": len(problem.equalities),
              "inequalities": len(problem.inequalities),
              "psd_blocks": len(problem.psd_constraints)}
    sol = solve(problem, sopts)
    try:
        cert = extract_bound(sol)
    except SolveFailedError as exc:
        return {"name": name, "status": "solver-failure", "solver_status": exc.status,
                "error": str(exc), "iterations": sol.iterations,
                "wall_ms": sol.wall_time * 1000.0, "constraints": counts}
    return {"name": name, "value": cert.value, "status": cert.status,
            "gap": cert.gap, "iterations": sol.iterations,
            "wall_ms": sol.wall_time * 1000.0, "constraints": counts}


def _timed_entry(name: str, fn, status: str = "exact") -> dict:
    # status: "exact" for combinatorial/closed-form values, "certified" for
    # values that are dual objectives of an internal LP/SDP solve
    start = time.perf_counter()
    try:
        value = fn()
    except CapExceededError as exc:
        return {"name": name, "status": "cap-exceeded", "error": str(exc),
                "wall_ms": (time.perf_counter() - start) * 1000.0}
    except SolveFailedError as exc:
        return {"name": name, "status": "solver-failure", "solver_status": exc.status,
                "error": str(exc),
                "wall_ms": (time.perf_counter() - start) * 1000.0}
    return {"name": name, "value": float(value), "status": status,
            "wall_ms": (time.perf_counter() - start) * 1000.0}


def _report_skeleton(command: str, instance: dict, options: dict) -> dict:
    return {"schema": 1,
            "tool": {"name": "conerank", "version": __version__},
            "command": command,
            "instance": instance,
            "options": options,
            "bounds": []}


def _exit_code_for(report: dict) -> int:
    statuses = [b.get("status") for b in report["bounds"]]
    if any(s == "solver-failure" for s in statuses):
        return EXIT_SOLVER
    if any(s == "cap-exceeded" for s in statuses):
        return EXIT_CAP
    return EXIT_OK


def cmd_nonneg(args) -> tuple:
    A = _read_matrix_csv(args.input, args.eps_zero)
    tokens = _requested(args.bounds, _NONNEG_BOUNDS)
    sopts = _solver_options(args)
    bopts = _builder_options(args)
    report = _report_skeleton("nonneg", {
        "kind": "matrix", "shape": [A.m, A.n], "support_size": len(support(A)),
        "eps_zero": A.eps_zero, "input_sha256": _sha256(args.input),
    }, {
        "bounds": tokens, "tol": args.tol, "full": args.full,
        "extra_nonneg": args.extra_nonneg, "extra_2t": args.extra_2t,
        "eps_zero": args.eps_zero,
    })
    if not support(A):
        for tok in tokens:
            name = "tau_plus_sos" if tok == "tau" else ("theta_bar" if tok == "theta" else tok)
            report["bounds"].append({"name": name, "value": 0.0, "status": "zero-input"})
        return report, EXIT_OK
    for tok in tokens:
        if tok == "tau":
            report["bounds"].append(
                _tau_entry("tau_plus_sos", build_tau_plus_matrix(A, bopts), sopts))
        elif tok == "omega":
            report["bounds"].append(
                _timed_entry("omega", lambda: clique_number(rectangle_graph(A))))
        elif tok == "theta":
            report["bounds"].append(
                _timed_entry("theta_bar", lambda: theta_bar(rectangle_graph(A), sopts),
                             status="certified"))
        elif tok == "chi_frac":
            report["bounds"].append(
                _timed_entry("chi_frac", lambda: fractional_rectangle_cover(
                    A, solver_opts=sopts), status="certified"))
        elif tok == "chi":
            report["bounds"].append(
                _timed_entry("chi", lambda: boolean_rank(A, solver_opts=sopts)))
        elif tok == "mutual_info":
            report["bounds"].append(
                _timed_entry("mutual_info", lambda: mutual_information_bound(A)))
    return report, _exit_code_for(report)


def cmd_tensor(args) -> tuple:
    T = _read_tensor_json(args.input, args.eps_zero)
    if T.order < 3:
        raise InputValidationError(
            f"tensor command needs order >= 3, got {T.order}; use nonneg for matrices")
    tokens = _requested(args.bounds, ("tau",))
    sopts = _solver_options(args)
    bopts = _builder_options(args)
    report = _report_skeleton("tensor", {
        "kind": "tensor", "shape": list(T.shape), "support_size": len(support(T)),
        "eps_zero": T.eps_zero, "input_sha256": _sha256(args.input),
    }, {
        "bounds": tokens, "tol": args.tol, "full": args.full,
        "extra_nonneg": args.extra_nonneg, "extra_2t": args.extra_2t,
        "eps_zero": args.eps_zero,
    })
    if not support(T):
        report["bounds"].append({"name": "tau_plus_sos", "value": 0.0,
                                 "status": "zero-input"})
        return report, EXIT_OK
    report["bounds"].append(
        _tau_entry("tau_plus_sos", build_tau_plus_tensor(T, bopts), sopts))
    return report, _exit_code_for(report)


def cmd_cp(args) -> tuple:
    A = _read_cp_csv(args.input)
    tokens = _requested(args.bounds, _CP_BOUNDS)
    sopts = _solver_options(args)
    G = cp_graph(A)
    isolated = sum(1 for v in range(G.num_vertices)
                   if G.self_support[v] and not any(v in e for e in G.edges))
    report = _report_skeleton("cp", {
        "kind": "cp", "shape": [A.n, A.n],
        "support_size": int(np.count_nonzero(A.entries > 1e-12)),
        "eps_zero": 1e-12, "input_sha256": _sha256(args.input),
        "isolated_diagonal_vertices": isolated,
    }, {
        "bounds": tokens, "tol": args.tol,
    })
    for tok in tokens:
        if tok == "tau":
            report["bounds"].append(_tau_entry("tau_cp_sos", build_tau_cp(A), sopts))
        elif tok == "rank":
            report["bounds"].append(
                _timed_entry("rank", lambda: psd_rank_lemma_value(A)))
        elif tok == "c_frac":
            report["bounds"].append(
                _timed_entry("c_frac", lambda: fractional_edge_clique_cover(
                    G, solver_opts=sopts), status="certified"))
        elif tok == "c_exact":
            report["bounds"].append(
                _timed_entry("c_exact", lambda: edge_clique_cover_number(
                    G, solver_opts=sopts)))
    return report, _exit_code_for(report)


_SCAN_DEFAULTS = {
    "nested-rect": (0.0, 1.0, 0.0, 1.0),
    "tensor-2x2x2": (0.0, 3.0, 0.0, 3.0),
    "cp-example": (0.0, 3.0, 0.0, 3.0),
}


def _parse_range(text: str):
    try:
        part1, part2 = text.split(",")
        a0, a1 = (float(v) for v in part1.split(":"))
        b0, b1 = (float(v) for v in part2.split(":"))
    except ValueError:
        raise InputValidationError(f"range must look like a0:a1,b0:b1, got {text!r}")
    if a1 < a0 or b1 < b0:
        raise InputValidationError("range endpoints must be ordered")
    return a0, a1, b0, b1


def _scan_value(family: str, p1: float, p2: float, bopts, sopts):
    if family == "nested-rect":
        problem = build_tau_plus_matrix(gen_nested_rect_matrix(p1, p2), bopts)
    elif family == "tensor-2x2x2":
        problem = build_tau_plus_tensor(gen_tensor_example(p1, p2), bopts)
    else:
        problem = build_tau_cp(gen_cp_example(p1, p2))
    sol = solve(problem, sopts)
    cert = extract_bound(sol)
    return cert.value, cert.status


def cmd_scan(args) -> tuple:
    if args.grid < 2:
        raise InputValidationError("grid resolution must be >= 2")
    a0, a1, b0, b1 = (_parse_range(args.range) if args.range
                      else _SCAN_DEFAULTS[args.family])
    sopts = _solver_options(args)
    bopts = _builder_options(args)
    rows = ["param1,param2,bound,status"]
    for p1 in np.linspace(a0, a1, args.grid):
        for p2 in np.linspace(b0, b1, args.grid):
            try:
                value, status = _scan_value(args.family, float(p1), float(p2),
                                            bopts, sopts)
                rows.append(f"{p1:.10g},{p2:.10g},{value:.10g},{status}")
            except InputValidationError:
                raise
            except SolveFailedError as exc:
                rows.append(f"{p1:.10g},{p2:.10g},,solver-failure({exc.status})")
            except ConerankError as exc:
                rows.append(f"{p1:.10g},{p2:.10g},,error({type(exc).__name__})")
    return "\n".join(rows) + "\n", EXIT_OK


def _add_common(sub, with_input=True):
    if with_input:
        sub.add_argument("--input", required=True, help="path to the instance file")
    sub.add_argument("--bounds", default="tau",
                     help="comma-separated bound names (default: tau)")
    sub.add_argument("--tol", type=float, default=1e-8,
                     help="solver gap/feasibility tolerance")
    sub.add_argument("--full", action="store_true",
                     help="disable zero-entry reduction")
    sub.add_argument("--extra-nonneg", action="store_true", dest="extra_nonneg",
                     help="add entrywise X >= 0 strengthening rows")
    sub.add_argument("--extra-2t", action="store_true", dest="extra_2t",
                     help="add X_pq >= (2 - t) A_p A_q strengthening rows")
    sub.add_argument("--eps-zero", type=float, default=1e-12, dest="eps_zero",
                     help="support threshold")
    sub.add_argument("--json", action="store_true",
                     help="write the report to stdout (default)")
    sub.add_argument("--out", default=None, help="write the report to a file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conerank",
        description="Semidefinite and combinatorial lower bounds on nonnegative "
                    "rank, tensor rank and cp-rank.")
    subs = parser.add_subparsers(dest="command", required=True)
    p_nonneg = subs.add_parser("nonneg", help="bounds for a nonnegative matrix (CSV)")
    _add_common(p_nonneg)
    p_tensor = subs.add_parser("tensor", help="bound for a nonnegative tensor (JSON)")
    _add_common(p_tensor)
    p_cp = subs.add_parser("cp", help="bounds for a completely positive matrix (CSV)")
    _add_common(p_cp)
    p_scan = subs.add_parser("scan", help="parameter-grid scan of an example family")
    p_scan.add_argument("family", choices=sorted(_SCAN_DEFAULTS))
    p_scan.add_argument("--grid", type=int, default=20, help="points per axis")
    p_scan.add_argument("--range", default=None, help="a0:a1,b0:b1")
    _add_common(p_scan, with_input=False)
    return parser


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "scan":
            text, code = cmd_scan(args)
            _emit(text, args.out)
            return code
        handler = {"nonneg": cmd_nonneg, "tensor": cmd_tensor, "cp": cmd_cp}[args.command]
        report, code = handler(args)
        _emit(json.dumps(report, indent=2) + "\n", args.out)
        return code
    except InputValidationError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CapExceededError as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except SolveFailedError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
