"""Rectangle-graph and clique machinery: the combinatorial bound ladder.

Graph edge sets are stored as 0-based index pairs (u, v), u < v, into the
vertex order; rectangle-graph vertices are 1-based support entries of the
matrix.  Exact searches are capped and raise :class:`CapExceededError`
rather than approximating.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from .build import build_theta_bar
from .core import CpInputMatrix, NonnegMatrix, support
from .errors import CapExceededError, ZeroInputError
from .problem import ProblemBuilder
from .solve import SolverOptions, SolveFailedError, extract_bound, solve

DEFAULT_CLIQUE_CAP = 64
DEFAULT_BICLIQUE_SIDE_CAP = 16
DEFAULT_COVER_CAP = 25


@dataclass(frozen=True)
class RectangleGraph:
    """Vertices are the support entries of A; {(i,j),(k,l)} is an edge iff
    A_il * A_kj = 0 under the support predicate."""
    vertices: tuple   # ((i, j), ...) 1-based, support order
    edges: tuple      # ((u, v), ...) 0-based into vertices, u < v

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class MonochromaticRectangle:
    """Row/column sets I, J (1-based, sorted) with A_ij > 0 on all of I x J."""
    rows: tuple
    cols: tuple


@dataclass(frozen=True)
class CpGraph:
    """Graph of the off-diagonal support of a symmetric matrix, with flags
    marking which diagonal entries are positive."""
    num_vertices: int
    edges: tuple          # ((u, v), ...) 0-based, u < v
    self_support: tuple   # bool per vertex: A_ii > 0


def _adjacency_masks(n: int, edges) -> list:
    adj = [0] * n
    for u, v in edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return adj


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def rectangle_graph(A: NonnegMatrix) -> RectangleGraph:
    """Rectangle graph RG(A) over the support of A."""
    supp = support(A)
    if not supp:
        raise ZeroInputError("zero matrix has rank 0")
    sset = set(supp)
    edges = []
    for p in range(len(supp)):
        i, j = supp[p]
        for q in range(p + 1, len(supp)):
            k, l = supp[q]
            if not ((i, l) in sset and (k, j) in sset):
                edges.append((p, q))
    return RectangleGraph(vertices=tuple(supp), edges=tuple(edges))


def clique_number(G, cap: int = DEFAULT_CLIQUE_CAP) -> int:
    """Exact maximum clique size, branch and bound with a greedy coloring bound."""
    n = G.num_vertices
    if n > cap:
        raise CapExceededError(
            f"instance too large for exact search ({n} vertices > cap {cap})")
    if n == 0:
        return 0
    adj = _adjacency_masks(n, G.edges)
    best = 0

    def expand(rsize: int, cand: int):
        nonlocal best
        # one greedy coloring of cand; color index bounds the clique size
        order, bound = [], []
        rem, color = cand, 0
        while rem:
            color += 1
            avail = rem
            while avail:
                v = (avail & -avail).bit_length() - 1
                avail &= ~adj[v] & ~(1 << v)
                rem &= ~(1 << v)
                order.append(v)
                bound.append(rsize + color)
        for idx in range(len(order) - 1, -1, -1):
            if bound[idx] <= best:
                return
            v = order[idx]
            if rsize + 1 > best:
                best = rsize + 1
            nxt = cand & adj[v]
            if nxt:
                expand(rsize + 1, nxt)
            cand &= ~(1 << v)

    expand(0, (1 << n) - 1)
    return best


def theta_bar(G, solver_opts: SolverOptions = None) -> float:
    """Complement Lovasz theta of a graph, as a certified bound."""
    sol = solve(build_theta_bar(G), solver_opts)
    return extract_bound(sol).value


def maximal_monochromatic_rectangles(A: NonnegMatrix,
                                     side_cap: int = DEFAULT_BICLIQUE_SIDE_CAP) -> list:
    """All inclusion-maximal monochromatic rectangles of A.

    Enumerates subsets of the smaller side of the support bipartite graph
    and closes each subset to a maximal biclique; every maximal rectangle
    arises this way.  Raises CapExceededError when the smaller side has
    more than ``side_cap`` lines carrying support.
    """
    arr, eps = A.entries, A.eps_zero
    m, n = arr.shape
    transposed = False
    if m > n:
        arr, m, n, transposed = arr.T, n, m, True
    rowsupp = [0] * m
    for i in range(m):
        for j in range(n):
            if arr[i, j] > eps:
                rowsupp[i] |= 1 << j
    live = [i for i in range(m) if rowsupp[i]]
    if len(live) > side_cap:
        raise CapExceededError(
            f"instance too large for exact search "
            f"({len(live)} support lines > cap {side_cap})")
    found = {}
    nlive = len(live)
    inter = [0] * (1 << nlive)   # AND of row supports over each subset
    for mask in range(1, 1 << nlive):
        low = (mask & -mask).bit_length() - 1
        rest = mask & (mask - 1)
        J = rowsupp[live[low]] if rest == 0 else inter[rest] & rowsupp[live[low]]
        inter[mask] = J
        if not J:
            continue
        I = 0
        for i in range(m):
            if rowsupp[i] & J == J:
                I |= 1 << i
        found[(I, J)] = None
    rects = []
    for I, J in sorted(found):
        rows = tuple(i + 1 for i in _bits(I))
        cols = tuple(j + 1 for j in _bits(J))
        if transposed:
            rows, cols = cols, rows
        rects.append(MonochromaticRectangle(rows=rows, cols=cols))
    rects.sort(key=lambda r: (r.rows, r.cols))
    return rects


def _fractional_cover_value(masks, universe_mask: int,
                            solver_opts: SolverOptions = None) -> float:
    """Optimal value of the covering LP min sum x, coverage >= 1, x >= 0,
    restricted to the elements of universe_mask."""
    if universe_mask == 0:
        return 0.0
    b = ProblemBuilder()
    for r in range(len(masks)):
        b.add_scalar(f"x{r}")
    b.set_objective([(r, 1.0) for r in range(len(masks))])
    for e in _bits(universe_mask):
        terms = [(r, -1.0) for r, mk in enumerate(masks) if mk >> e & 1]
        b.add_le(f"cover{e}", terms, -1.0)
    for r in range(len(masks)):
        b.add_le(f"nonneg{r}", [(r, -1.0)], 0.0)
    sol = solve(b.build(), solver_opts)
    return extract_bound(sol).value


def _exact_min_cover(masks, full: int, solver_opts: SolverOptions = None) -> int:
    """Exact minimum set cover, best-first search with an LP pruning bound."""
    if full == 0:
        return 0
    covering = {}
    for e in _bits(full):
        covering[e] = [mk for mk in masks if mk >> e & 1]
        if not covering[e]:
            raise ValueError("uncoverable element in set cover")
    # greedy incumbent
    covered, ub = 0, 0
    while covered & full != full:
        bestm = max(masks, key=lambda mk: bin(mk & full & ~covered).count("1"))
        covered |= bestm
        ub += 1
    best = ub
    lp_cache = {}

    def lower(rem: int) -> int:
        if rem == 0:
            return 0
        if rem not in lp_cache:
            try:
                v = _fractional_cover_value(masks, rem, solver_opts)
            except SolveFailedError:
                v = 0.0
            biggest = max(bin(mk & rem).count("1") for mk in masks if mk & rem)
            quick = -(-bin(rem).count("1") // biggest)
            lp_cache[rem] = max(math.ceil(v - 1e-6), quick)
        return lp_cache[rem]

    heap = [(lower(full), 0, full)]
    seen = {full: 0}
    while heap:
        f, used, rem = heapq.heappop(heap)
        if f >= best:
            break
        if seen.get(rem, used) < used:
            continue
        e = (rem & -rem).bit_length() - 1
        for mk in covering[e]:
            nrem = rem & ~mk
            nused = used + 1
            if nrem == 0:
                best = min(best, nused)
                continue
            if nused + 1 >= best:
                continue
            if seen.get(nrem, 10 ** 9) <= nused:
                continue
            seen[nrem] = nused
            fn = nused + lower(nrem)
            if fn < best:
                heapq.heappush(heap, (fn, nused, nrem))
    return best


def _rectangle_masks(A: NonnegMatrix, side_cap: int):
    supp = support(A)
    pos = {ij: p for p, ij in enumerate(supp)}
    rects = maximal_monochromatic_rectangles(A, side_cap=side_cap)
    masks = []
    for r in rects:
        mk = 0
        for i in r.rows:
            for j in r.cols:
                mk |= 1 << pos[(i, j)]
        masks.append(mk)
    return supp, rects, masks


def fractional_rectangle_cover(A: NonnegMatrix,
                               side_cap: int = DEFAULT_BICLIQUE_SIDE_CAP,
                               solver_opts: SolverOptions = None) -> float:
    """LP value of covering supp(A) by maximal monochromatic rectangles."""
    supp, _, masks = _rectangle_masks(A, side_cap)
    return _fractional_cover_value(masks, (1 << len(supp)) - 1, solver_opts)


def boolean_rank(A: NonnegMatrix, cap: int = DEFAULT_COVER_CAP,
                 side_cap: int = DEFAULT_BICLIQUE_SIDE_CAP,
                 solver_opts: SolverOptions = None) -> int:
    """Minimum number of monochromatic rectangles covering supp(A), exact."""
    supp = support(A)
    if len(supp) > cap:
        raise CapExceededError(
            f"instance too large for exact search ({len(supp)} support entries "
            f"> cap {cap})")
    if not supp:
        return 0
    _, _, masks = _rectangle_masks(A, side_cap)
    return _exact_min_cover(masks, (1 << len(supp)) - 1, solver_opts)


def cp_graph(A: CpInputMatrix, eps_zero: float = 1e-12) -> CpGraph:
    """Graph with an edge {i, j} for every positive off-diagonal entry."""
    n = A.n
    arr = A.entries
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if arr[i, j] > eps_zero]
    flags = tuple(bool(arr[i, i] > eps_zero) for i in range(n))
    return CpGraph(num_vertices=n, edges=tuple(edges), self_support=flags)


def maximal_cliques(G, cap: int = DEFAULT_CLIQUE_CAP) -> list:
    """All maximal cliques as sorted 0-based vertex tuples (Bron-Kerbosch)."""
    n = G.num_vertices
    if n > cap:
        raise CapExceededError(
            f"instance too large for exact search ({n} vertices > cap {cap})")
    adj = _adjacency_masks(n, G.edges)
    out = []

    def bk(R: int, P: int, X: int):
        if P == 0 and X == 0:
            out.append(R)
            return
        pivot = max(_bits(P | X), key=lambda u: bin(P & adj[u]).count("1"))
        for v in list(_bits(P & ~adj[pivot])):
            bk(R | (1 << v), P & adj[v], X & adj[v])
            P &= ~(1 << v)
            X |= 1 << v

    if n:
        bk(0, (1 << n) - 1, 0)
    return sorted(tuple(_bits(mask)) for mask in out)


def _clique_edge_masks(G, cap: int):
    edges = list(G.edges)
    epos = {e: k for k, e in enumerate(edges)}
    masks = []
    for clique in maximal_cliques(G, cap=cap):
        mk = 0
        for a in range(len(clique)):
            for bb in range(a + 1, len(clique)):
                mk |= 1 << epos[(clique[a], clique[bb])]
        if mk:
            masks.append(mk)
    return edges, masks


def fractional_edge_clique_cover(G: CpGraph, cap: int = DEFAULT_CLIQUE_CAP,
                                 solver_opts: SolverOptions = None) -> float:
    """LP value of covering the edges of G by maximal cliques."""
    edges, masks = _clique_edge_masks(G, cap)
    if not edges:
        return 0.0
    return _fractional_cover_value(masks, (1 << len(edges)) - 1, solver_opts)


def edge_clique_cover_number(G: CpGraph, cap: int = DEFAULT_COVER_CAP,
                             clique_cap: int = DEFAULT_CLIQUE_CAP,
                             solver_opts: SolverOptions = None) -> int:
    """Exact minimum number of cliques covering all edges of G.

    Covers edges only; isolated vertices with positive diagonal do not
    force a covering element here (callers report them separately).
    """
    edges = list(G.edges)
    if len(edges) > cap:
        raise CapExceededError(
            f"instance too large for exact search ({len(edges)} edges > cap {cap})")
    if not edges:
        return 0
    _, masks = _clique_edge_masks(G, clique_cap)
    return _exact_min_cover(masks, (1 << len(edges)) - 1, solver_opts)
