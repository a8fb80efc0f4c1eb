"""Shared shortcuts for the test suite."""
import numpy as np

import conerank as cr


def tau_matrix(A, opts=None, sopts=None, **build_kwargs) -> float:
    """Certified relaxation value for a nonnegative matrix."""
    if not isinstance(A, cr.NonnegMatrix):
        A = cr.NonnegMatrix(np.asarray(A, dtype=float))
    sol = cr.solve(cr.build_tau_plus_matrix(A, opts, **build_kwargs), sopts)
    return cr.extract_bound(sol).value


def full_mode_value(A) -> float:
    """Optimal value of the non-reduced formulation.

    Any zero entry leaves the non-reduced problem without a strictly feasible
    point (the PSD block is pinned to a face), so the interior-point run may
    stop at the iteration cap with diverging iterate residuals while the
    objective has long converged.  The primal objective at the stall is the
    formulation's optimum to ~1e-8 while the dual can lag by ~1e-4..1e-3, so
    the stalled primal is what the equivalence comparison uses; certified
    solves are used directly.  The gap check below only rejects runs that
    diverged outright; callers compare the returned value at 1e-6 anyway.
    """
    if not isinstance(A, cr.NonnegMatrix):
        A = cr.NonnegMatrix(np.asarray(A, dtype=float))
    from conerank.build import BuilderOptions
    sol = cr.solve(cr.build_tau_plus_matrix(A, BuilderOptions(use_reduced=False)))
    if sol.status in ("optimal", "near-optimal"):
        return cr.extract_bound(sol).value
    if sol.status == "iteration-limit" and sol.primal_objective is not None:
        gap = abs(sol.primal_objective - sol.dual_objective)
        if gap <= 1e-3 * (1.0 + abs(sol.primal_objective)):
            return sol.primal_objective
    raise AssertionError(f"full-mode solve unusable: status {sol.status}")


def tau_tensor(T, opts=None, sopts=None, force_tensor_path=False) -> float:
    if not isinstance(T, cr.NonnegTensor):
        T = cr.NonnegTensor(T)
    p = cr.build_tau_plus_tensor(T, opts, force_tensor_path=force_tensor_path)
    return cr.extract_bound(cr.solve(p, sopts)).value


def tau_cp(A, sopts=None) -> float:
    if not isinstance(A, cr.CpInputMatrix):
        A = cr.CpInputMatrix(A)
    return cr.extract_bound(cr.solve(cr.build_tau_cp(A), sopts)).value


def random_sparse_nonneg(rng, m, n, zero_prob=0.4) -> cr.NonnegMatrix:
    """Random matrix with entries 0 with probability zero_prob, else in [0.1, 1];
    resamples until the support is nonempty."""
    while True:
        vals = rng.uniform(0.1, 1.0, size=(m, n))
        mask = rng.uniform(size=(m, n)) < zero_prob
        vals[mask] = 0.0
        if (vals > 0).any():
            return cr.NonnegMatrix(vals)


def eq_row_keys(problem) -> set:
    """Equality rows as order/sign-insensitive keys: (frozen column set, rhs)."""
    keys = set()
    for row in problem.equalities:
        keys.add((frozenset(col for col, _ in row.terms), row.rhs))
    return keys
