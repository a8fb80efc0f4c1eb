"""Builders for the self-scaled rank relaxations and the theta SDP.

Each builder emits a :class:`~conerank.problem.ConicProblem` that minimizes a
scalar t subject to a bordered PSD constraint coupling t, the input data and
a moment-style symmetric block X, plus the linearized rank-one equations.
Builders rescale the input by 1/max-entry before emitting coefficients; the
optimal value is invariant under positive scaling, so the reported bound
needs no unscaling.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .core import CpInputMatrix, NonnegMatrix, NonnegTensor, kronecker, support
from .errors import InputValidationError, ZeroInputError
from .problem import ConicProblem, ProblemBuilder


@dataclass(frozen=True)
class BuilderOptions:
    """Switches for the relaxation builders.

    use_reduced : eliminate zero entries, indexing X by the support only
    add_entrywise_nonneg : strengthening rows X >= 0 entrywise
    add_two_minus_t : strengthening rows X_pq >= (2 - t) * A_p * A_q
    diag_as_equality : emit X_pp = A_p**2 instead of <=
    """

    use_reduced: bool = True
    add_entrywise_nonneg: bool = False
    add_two_minus_t: bool = False
    diag_as_equality: bool = False


def _idx_name(idx) -> str:
    return "(" + ",".join(str(k) for k in idx) + ")"


def _pair_name(u, v) -> str:
    return _idx_name(u) + "," + _idx_name(v)


def _emit_common(builder: ProblemBuilder, a: np.ndarray, indices, opts: BuilderOptions):
    """Diagonal rows, bordered PSD block and optional strengthening rows.

    ``a`` holds the rescaled entry values in the order of ``indices``; the
    X block must already be declared with size len(indices).
    """
    N = len(indices)
    xcol = lambda p, q: builder.column("X", min(p, q), max(p, q))
    tcol = builder.column("t")
    for p, idx in enumerate(indices):
        name = f"diag{_idx_name(idx)}"
        if opts.diag_as_equality:
            builder.add_eq(name, [(xcol(p, p), 1.0)], a[p] ** 2)
        else:
            builder.add_le(name, [(xcol(p, p), 1.0)], a[p] ** 2)
    const = np.zeros((N + 1, N + 1))
    for p in range(N):
        const[0, 1 + p] = const[1 + p, 0] = a[p]
    terms = [(tcol, 0, 0, 1.0)]
    for p in range(N):
        for q in range(p, N):
            terms.append((xcol(p, q), 1 + p, 1 + q, 1.0))
    builder.add_psd("border", N + 1, const, terms)
    if opts.add_entrywise_nonneg:
        for p in range(N):
            for q in range(p, N):
                builder.add_le(f"nonneg{_pair_name(indices[p], indices[q])}",
                               [(xcol(p, q), -1.0)], 0.0)
    if opts.add_two_minus_t:
        # X_pq >= (2 - t) a_p a_q, linear in (t, X)
        for p in range(N):
            for q in range(p, N):
                c = a[p] * a[q]
                builder.add_le(f"twot{_pair_name(indices[p], indices[q])}",
                               [(xcol(p, q), -1.0), (tcol, -c)], -2.0 * c)


def build_tau_plus_matrix(A: NonnegMatrix, opts: BuilderOptions = None, *,
                          support_order=None) -> ConicProblem:
    """Relaxation of the nonnegative rank of a matrix.

    Minimizes t subject to the bordered PSD constraint on [[t, a^T], [a, X]],
    the diagonal rows X_pp <= A_p**2 and the linearized 2x2-minor equations.
    With ``opts.use_reduced`` (the default) X is indexed by the support only
    and the minor equations follow the three-case zero pattern rule; without
    it X ranges over all m*n entries in column-major vec order.

    ``support_order`` (reduced mode only) permutes the internal X index
    order; the optimal value must not depend on it.  Testing hook.
    """
    opts = opts or BuilderOptions()
    supp = support(A)
    if not supp:
        raise ZeroInputError("zero matrix has rank 0")
    sset = set(supp)
    if opts.use_reduced:
        indices = list(supp)
        if support_order is not None:
            if sorted(support_order) != list(range(len(supp))):
                raise InputValidationError("support_order must be a permutation")
            indices = [supp[k] for k in support_order]
    else:
        indices = [(i, j) for j in range(1, A.n + 1) for i in range(1, A.m + 1)]
    pos = {idx: p for p, idx in enumerate(indices)}
    mu = max(A[idx] for idx in supp)
    a = np.array([A[idx] / mu for idx in indices])

    b = ProblemBuilder()
    b.add_scalar("t")
    b.add_block("X", len(indices))
    b.set_objective([(0, 1.0)])
    xcol = lambda p, q: b.column("X", min(p, q), max(p, q))
    for i in range(1, A.m + 1):
        for k in range(i + 1, A.m + 1):
            for j in range(1, A.n + 1):
                for l in range(j + 1, A.n + 1):
                    if opts.use_reduced:
                        p1 = (i, j) in sset and (k, l) in sset
                        p2 = (i, l) in sset and (k, j) in sset
                        if p1 and p2:
                            b.add_eq(f"minor{_pair_name((i, j), (k, l))}",
                                     [(xcol(pos[(i, j)], pos[(k, l)]), 1.0),
                                      (xcol(pos[(i, l)], pos[(k, j)]), -1.0)], 0.0)
                        elif p1:
                            b.add_eq(f"zero{_pair_name((i, j), (k, l))}",
                                     [(xcol(pos[(i, j)], pos[(k, l)]), 1.0)], 0.0)
                        elif p2:
                            b.add_eq(f"zero{_pair_name((i, l), (k, j))}",
                                     [(xcol(pos[(i, l)], pos[(k, j)]), 1.0)], 0.0)
                    else:
                        b.add_eq(f"minor{_pair_name((i, j), (k, l))}",
                                 [(xcol(pos[(i, j)], pos[(k, l)]), 1.0),
                                  (xcol(pos[(i, l)], pos[(k, j)]), -1.0)], 0.0)
    _emit_common(b, a, indices, opts)
    return b.build()


def swap_index(i: tuple, j: tuple, k: int) -> tuple:
    """Multi-index i with its k-th position (1-based) replaced by j_k."""
    out = list(i)
    out[k - 1] = j[k - 1]
    return tuple(out)


def segre_class_key(u: tuple, v: tuple) -> tuple:
    """Canonical key of the pair {u, v}: coordinatewise unordered pairs."""
    return tuple((min(a, b), max(a, b)) for a, b in zip(u, v))


def segre_class_members(key) -> list:
    """All unordered index pairs sharing a key, sorted; the first one (the
    coordinatewise-sorted pair) is the canonical representative."""
    free = [t for t, (lo, hi) in enumerate(key) if lo != hi]
    members = set()
    for bits in itertools.product((0, 1), repeat=len(free)):
        u = [lo for lo, hi in key]
        v = [hi for lo, hi in key]
        for t, bit in zip(free, bits):
            if bit:
                u[t], v[t] = v[t], u[t]
        u, v = tuple(u), tuple(v)
        members.add((u, v) if u <= v else (v, u))
    return sorted(members)


def build_tau_plus_tensor(A: NonnegTensor, opts: BuilderOptions = None, *,
                          force_tensor_path: bool = False) -> ConicProblem:
    """Relaxation of the nonnegative tensor rank.

    Same bordered PSD + diagonal row structure as the matrix case; the
    linearized Segre (rank-one) equations are grouped into equivalence
    classes of index pairs (two pairs are equivalent iff at each coordinate
    the unordered value pair coincides) and emitted as one chain of
    equalities per class, linking every member to the canonical
    coordinatewise-sorted representative.  In reduced mode a class with any
    member outside the support forces all its present members to zero.

    Order-2 tensors are routed to :func:`build_tau_plus_matrix` unless
    ``force_tensor_path`` is set (consistency-testing hook).
    """
    opts = opts or BuilderOptions()
    if A.order == 2 and not force_tensor_path:
        return build_tau_plus_matrix(NonnegMatrix(A.entries, eps_zero=A.eps_zero), opts)
    supp = support(A)
    if not supp:
        raise ZeroInputError("zero tensor has rank 0")
    sset = set(supp)
    if opts.use_reduced:
        indices = list(supp)
    else:
        indices = [tuple(k + 1 for k in idx) for idx in np.ndindex(A.shape)]
    pos = {idx: p for p, idx in enumerate(indices)}
    mu = max(A[idx] for idx in supp)
    a = np.array([A[idx] / mu for idx in indices])

    b = ProblemBuilder()
    b.add_scalar("t")
    b.add_block("X", len(indices))
    b.set_objective([(0, 1.0)])
    xcol = lambda p, q: b.column("X", min(p, q), max(p, q))

    keys = {}
    for p in range(len(indices)):
        for q in range(p + 1, len(indices)):
            keys.setdefault(segre_class_key(indices[p], indices[q]), None)
    for key in keys:
        members = segre_class_members(key)
        if len(members) <= 1:
            continue
        present = [(u, v) for (u, v) in members
                   if (not opts.use_reduced) or (u in sset and v in sset)]
        if len(present) == len(members):
            u0, v0 = members[0]
            c0 = xcol(pos[u0], pos[v0])
            for (u, v) in members[1:]:
                b.add_eq(f"segre{_pair_name(u, v)}",
                         [(xcol(pos[u], pos[v]), 1.0), (c0, -1.0)], 0.0)
        else:
            for (u, v) in present:
                b.add_eq(f"segre0{_pair_name(u, v)}",
                         [(xcol(pos[u], pos[v]), 1.0)], 0.0)
    _emit_common(b, a, indices, opts)
    return b.build()


def build_tau_cp(A: CpInputMatrix) -> ConicProblem:
    """Relaxation of the cp-rank of a completely positive matrix.

    Full n**2 indexing in column-major vec order (no support reduction);
    bordered PSD with vec(A); diagonal rows; deduplicated minor equalities
    over all strictly ordered pairs; and the dominance constraint
    A (x) A - X >= 0 as an extra n**2-sized PSD block.
    """
    n = A.n
    indices = [(i, j) for j in range(1, n + 1) for i in range(1, n + 1)]
    pos = {idx: p for p, idx in enumerate(indices)}
    mu = float(A.entries.max())
    scaled = A.entries / mu if mu > 0.0 else A.entries
    a = np.array([scaled[i - 1, j - 1] for (i, j) in indices])

    b = ProblemBuilder()
    b.add_scalar("t")
    b.add_block("X", n * n)
    b.set_objective([(0, 1.0)])
    xcol = lambda p, q: b.column("X", min(p, q), max(p, q))

    seen = set()
    for i in range(1, n + 1):
        for k in range(i + 1, n + 1):
            for j in range(1, n + 1):
                for l in range(j + 1, n + 1):
                    e1 = tuple(sorted((pos[(i, j)], pos[(k, l)])))
                    e2 = tuple(sorted((pos[(i, l)], pos[(k, j)])))
                    if e1 == e2:
                        continue
                    key = (min(e1, e2), max(e1, e2))
                    if key in seen:
                        continue
                    seen.add(key)
                    b.add_eq(f"minor{_pair_name((i, j), (k, l))}",
                             [(xcol(*e1), 1.0), (xcol(*e2), -1.0)], 0.0)
    _emit_common(b, a, indices, BuilderOptions(use_reduced=False))
    K = kronecker(scaled, scaled)
    terms = [(xcol(p, q), p, q, -1.0) for p in range(n * n) for q in range(p, n * n)]
    b.add_psd("dominance", n * n, K, terms)
    return b.build()


def build_theta_bar(G) -> ConicProblem:
    """Complement Lovasz theta SDP for a graph.

    ``G`` needs ``num_vertices`` and ``edges`` (0-based vertex index pairs).
    Minimizes t s.t. [[t, 1^T], [1, X]] PSD, X_uu = 1, X_uv = 0 on edges.
    """
    N = int(G.num_vertices)
    if N < 1:
        raise InputValidationError("theta needs a nonempty vertex set")
    b = ProblemBuilder()
    b.add_scalar("t")
    b.add_block("X", N)
    b.set_objective([(0, 1.0)])
    xcol = lambda p, q: b.column("X", min(p, q), max(p, q))
    for u in range(N):
        b.add_eq(f"unit({u + 1})", [(xcol(u, u), 1.0)], 1.0)
    for u, v in G.edges:
        b.add_eq(f"edge({min(u, v) + 1},{max(u, v) + 1})", [(xcol(u, v), 1.0)], 0.0)
    const = np.zeros((N + 1, N + 1))
    const[0, 1:] = const[1:, 0] = 1.0
    terms = [(0, 0, 0, 1.0)]
    for p in range(N):
        for q in range(p, N):
            terms.append((xcol(p, q), 1 + p, 1 + q, 1.0))
    b.add_psd("border", N + 1, const, terms)
    return b.build()
