"""Uniform solving contract; the only module that knows how problems are solved.

The backend is cvxopt's primal-dual interior-point cone LP solver.  A
:class:`~conerank.problem.ConicProblem` is translated to the conelp form
min c'x s.t. Gx + s = h, s in (nonneg orthant x PSD blocks), Ax = b, where
inequality rows fill the orthant part and each PSD constraint becomes one
's' block.  Dual multipliers are handed back per constraint name; the dual
objective is the certified lower bound.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
from cvxopt import matrix as cvx_matrix
from cvxopt import solvers, spmatrix

from .errors import InputValidationError, SolveFailedError
from .problem import ConicProblem

STATUS_OPTIMAL = "optimal"
STATUS_NEAR_OPTIMAL = "near-optimal"
STATUS_INFEASIBLE = "infeasible"
STATUS_UNBOUNDED = "unbounded"
STATUS_ITERATION_LIMIT = "iteration-limit"
STATUS_NUMERICAL_FAILURE = "numerical-failure"

_CERTIFIED = (STATUS_OPTIMAL, STATUS_NEAR_OPTIMAL)


@dataclass(frozen=True)
class SolverOptions:
    rel_gap_tol: float = 1e-8
    feas_tol: float = 1e-8
    max_iterations: int = 100
    verbose: bool = False

    def __post_init__(self):
        if not (0.0 < self.rel_gap_tol < 1.0) or not (0.0 < self.feas_tol < 1.0):
            raise InputValidationError("tolerances must lie in (0, 1)")
        if self.max_iterations < 1:
            raise InputValidationError("max_iterations must be positive")


@dataclass(frozen=True)
class ConicSolution:
    status: str
    primal_objective: float | None
    dual_objective: float | None
    scalar_values: dict = field(default_factory=dict)
    block_values: dict = field(default_factory=dict)      # name -> (s, s) ndarray
    equality_duals: dict = field(default_factory=dict)    # name -> float
    inequality_duals: dict = field(default_factory=dict)  # name -> float
    psd_duals: dict = field(default_factory=dict)         # name -> (s, s) ndarray
    iterations: int = 0
    wall_time: float = 0.0

    @property
    def gap(self) -> float | None:
        if self.primal_objective is None or self.dual_objective is None:
            return None
        return abs(self.primal_objective - self.dual_objective)


@dataclass(frozen=True)
class BoundCertificate:
    """Certified bound extracted from a solution: the dual objective."""
    value: float
    gap: float
    status: str


def _to_conelp(p: ConicProblem):
    ncols = p.num_columns
    c = np.zeros(ncols)
    for col, coef in p.objective:
        c[col] += coef

    gi, gj, gv, h = [], [], [], []
    row = 0
    for lin in p.inequalities:
        for col, coef in lin.terms:
            gi.append(row); gj.append(col); gv.append(float(coef))
        h.append(lin.rhs)
        row += 1
    nl = row
    sdims = []
    for psd in p.psd_constraints:
        base, s = row, psd.size
        h.extend(np.asarray(psd.constant).flatten(order="F").tolist())
        for col, i, j, coef in psd.terms:
            # s = h - Gx must equal the affine matrix, both triangles filled
            gi.append(base + j * s + i); gj.append(col); gv.append(-float(coef))
            if i != j:
                gi.append(base + i * s + j); gj.append(col); gv.append(-float(coef))
        row += s * s
        sdims.append(s)
    if row == 0:
        raise InputValidationError("problem has no cone constraints; nothing to solve")
    G = spmatrix(gv, gi, gj, (row, ncols))
    hm = cvx_matrix(np.asarray(h))
    dims = {"l": nl, "q": [], "s": sdims}

    if p.equalities:
        ai, aj, av, b = [], [], [], []
        for r, lin in enumerate(p.equalities):
            for col, coef in lin.terms:
                ai.append(r); aj.append(col); av.append(float(coef))
            b.append(lin.rhs)
        A = spmatrix(av, ai, aj, (len(p.equalities), ncols))
        bm = cvx_matrix(np.asarray(b))
    else:
        A = bm = None
    return cvx_matrix(c), G, hm, dims, A, bm, nl


def _classify(sol, opts: SolverOptions) -> str:
    status = sol["status"]
    if status == "optimal":
        return STATUS_OPTIMAL
    if status == "primal infeasible":
        return STATUS_INFEASIBLE
    if status == "dual infeasible":
        return STATUS_UNBOUNDED
    # cvxopt 'unknown': usable when the returned iterate is feasible enough
    pinf = sol.get("primal infeasibility")
    if sol.get("x") is not None and pinf is not None and np.isfinite(pinf) \
            and pinf <= opts.feas_tol:
        return STATUS_NEAR_OPTIMAL
    if sol.get("iterations", 0) >= opts.max_iterations:
        return STATUS_ITERATION_LIMIT
    return STATUS_NUMERICAL_FAILURE


def solve(p: ConicProblem, opts: SolverOptions = None) -> ConicSolution:
    """Solve a ConicProblem; deterministic, never raises on numerical trouble."""
    opts = opts or SolverOptions()
    c, G, h, dims, A, b, nl = _to_conelp(p)
    start = time.perf_counter()
    try:
        sol = solvers.conelp(c, G, h, dims, A, b, options={
            "show_progress": opts.verbose,
            "maxiters": opts.max_iterations,
            "abstol": opts.rel_gap_tol,
            "reltol": opts.rel_gap_tol,
            "feastol": opts.feas_tol,
        })
    except (ArithmeticError, ValueError):  # singular KKT and friends
        return ConicSolution(status=STATUS_NUMERICAL_FAILURE,
                             primal_objective=None, dual_objective=None,
                             wall_time=time.perf_counter() - start)
    wall = time.perf_counter() - start
    status = _classify(sol, opts)

    scalar_values, block_values = {}, {}
    eq_duals, le_duals, psd_duals = {}, {}, {}
    if sol.get("x") is not None:
        x = np.asarray(sol["x"]).ravel()
        for k, name in enumerate(p.scalars):
            scalar_values[name] = float(x[k])
        off = len(p.scalars)
        for name, size in p.blocks:
            S = np.zeros((size, size))
            k = off
            for i in range(size):
                for j in range(i, size):
                    S[i, j] = S[j, i] = x[k]
                    k += 1
            off = k
            S.flags.writeable = False
            block_values[name] = S
    if sol.get("y") is not None and p.equalities:
        y = np.asarray(sol["y"]).ravel()
        for r, lin in enumerate(p.equalities):
            eq_duals[lin.name] = float(y[r])
    if sol.get("z") is not None:
        z = np.asarray(sol["z"]).ravel()
        for r, lin in enumerate(p.inequalities):
            le_duals[lin.name] = float(z[r])
        base = nl
        for psd in p.psd_constraints:
            Z = z[base:base + psd.size ** 2].reshape((psd.size, psd.size), order="F")
            Z = np.ascontiguousarray(Z)
            Z.flags.writeable = False
            psd_duals[psd.name] = Z
            base += psd.size ** 2

    def _num(v):
        return float(v) if v is not None else None

    return ConicSolution(
        status=status,
        primal_objective=_num(sol.get("primal objective")),
        dual_objective=_num(sol.get("dual objective")),
        scalar_values=scalar_values,
        block_values=block_values,
        equality_duals=eq_duals,
        inequality_duals=le_duals,
        psd_duals=psd_duals,
        iterations=int(sol.get("iterations", 0)),
        wall_time=wall,
    )


def extract_bound(s: ConicSolution) -> BoundCertificate:
    """Certified lower bound from a solution: the dual objective.

    A feasible dual point is a valid bound even when the primal iterate is
    slightly infeasible, so the dual side is the safe one to report.
    """
    if s.status not in _CERTIFIED:
        raise SolveFailedError(s.status)
    if s.dual_objective is None:
        raise SolveFailedError(s.status, "solution carries no dual objective")
    gap = s.gap if s.gap is not None else float("nan")
    return BoundCertificate(value=float(s.dual_objective), gap=float(gap), status=s.status)
