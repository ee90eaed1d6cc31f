"""First passage percolation with passage times e^{K w}, all in log domain.

Every passage time is carried as its natural logarithm: an edge costs
K*w(e), path sums are log-sum-exp accumulations, and comparisons compare
logs. Realistic K (around 3.5e12 at d=2, R=100) makes the linear-scale
times unrepresentable in any hardware float, so nothing here ever
exponentiates back.

The origin's self-distance is log-time -inf (time 0), the identity of
log-domain addition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

LOG_ZERO = float("-inf")


def logtime_add(a, b):
    """log(e^a + e^b), numerically stable; -inf is the identity."""
    if a == LOG_ZERO:
        return b
    if b == LOG_ZERO:
        return a
    if a >= b:
        return a + math.log1p(math.exp(b - a))
    return b + math.log1p(math.exp(a - b))


@dataclass
class FppResult:
    """Settled vertices (in settle order) of a truncated Dijkstra run.

    Any vertex absent from `times` was not settled before the boundary
    hit; its passage time is only known to be >= boundary_time, never a
    fabricated number. When the run was made with exact_order=True,
    `order_keys` carries each settled vertex's geodesic weight tuple
    (descending) for precision-proof order comparisons.
    """

    settled: list                 # (vertex, log_time) in settle order
    times: dict                   # vertex -> log_time, settled only
    boundary_time: float          # log of T(0, boundary)
    first_boundary_vertex: tuple
    ties: int = 0                 # equal-key relaxations seen (diagnostic)
    K: float = 0.0
    settle_pos: dict = field(default_factory=dict, repr=False)
    order_keys: dict = field(default=None, repr=False)


def dijkstra(cfg, region, K, exact_order=False):
    """Shortest log-times from the origin, halting at the first boundary settle.

    Truncation is exact for everything reported: every lattice path
    leaving the region crosses its boundary and all edge times are >= 1,
    so no geodesic to a pre-boundary vertex exits the region, and any
    unsettled vertex has time >= boundary_time. Heap ties break by
    lexicographic vertex order.

    At theorem-scale K the log-domain doubles cannot resolve the gap
    between a path and the same path extended by a tiny-weight edge
    (the true log difference underflows). With exact_order=True the heap
    instead compares descending tuples of path edge weights, which on the
    small-gap event with e^{K*delta} >= |E| orders path sums exactly:
    the largest differing exponent dominates the whole tail.
    """
    import heapq

    weights = cfg.edge_weights(region)
    log_tau = K * weights
    adjacency = region.adjacency
    vertices = region.vertices
    lex_rank = region.lex_rank
    n = len(vertices)
    origin_idx = region.vertex_index[region.origin]

    INF = float("inf")
    dist = [INF] * n                 # float log-times (reported values)
    keys = [None] * n if exact_order else None
    done = [False] * n
    dist[origin_idx] = LOG_ZERO
    if exact_order:
        keys[origin_idx] = ()
        heap = [((), lex_rank[origin_idx], origin_idx, LOG_ZERO)]
    else:
        heap = [(LOG_ZERO, lex_rank[origin_idx], origin_idx)]
    settled = []
    times = {}
    settle_pos = {}
    order_keys = {} if exact_order else None
    ties = 0
    boundary_time = None
    first_boundary = None

    while heap:
        if exact_order:
            key, _, vi, d = heapq.heappop(heap)
        else:
            d, _, vi = heapq.heappop(heap)
        if done[vi]:
            continue
        done[vi] = True
        v = vertices[vi]
        settle_pos[v] = len(settled)
        settled.append((v, d))
        times[v] = d
        if exact_order:
            order_keys[v] = keys[vi]
        if region.is_boundary(v):
            boundary_time = d
            first_boundary = v
            break
        for ui, ei in adjacency[vi]:
            if done[ui]:
                continue
            lt = log_tau[ei]
            # inline logtime_add(d, lt); d=-inf only at the origin
            if d == LOG_ZERO:
                nd = lt
            elif d >= lt:
                nd = d + math.log1p(math.exp(lt - d))
            else:
                nd = lt + math.log1p(math.exp(d - lt))
            if exact_order:
                nk = merge_weight(keys[vi], weights[ei])
                if keys[ui] is None or nk < keys[ui]:
                    keys[ui] = nk
                    dist[ui] = nd
                    heapq.heappush(heap, (nk, lex_rank[ui], ui, nd))
            else:
                if nd < dist[ui]:
                    dist[ui] = nd
                    heapq.heappush(heap, (nd, lex_rank[ui], ui))
                elif nd == dist[ui]:
                    ties += 1

    if first_boundary is None:
        raise RuntimeError("Dijkstra exhausted the region without reaching the boundary")

    return FppResult(settled=settled, times=times, boundary_time=boundary_time,
                     first_boundary_vertex=first_boundary, ties=ties, K=K,
                     settle_pos=settle_pos, order_keys=order_keys)


def merge_weight(key, w):
    """Insert w into a descending weight tuple (a path's exponent multiset)."""
    for i, x in enumerate(key):
        if w > x:
            return key[:i] + (w,) + key[i:]
    return key + (w,)


def edge_time(res, cfg, K, e):
    """Passage time to an edge: min over settled endpoints, plus the edge's tau.

    Returns None when neither endpoint settled before the boundary hit:
    the true value is only bounded below by boundary_time, which is
    sufficient for ordering against pre-boundary edges.
    """
    best = None
    for v in e:
        t = res.times.get(v)
        if t is not None and (best is None or t < best):
            best = t
    if best is None:
        return None
    return logtime_add(best, K * cfg.weight(e))


def edge_order_key(res, cfg, e):
    """Descending weight tuple of min-settled-endpoint geodesic plus the edge.

    Only valid for results from an exact_order run; None when neither
    endpoint settled.
    """
    best = None
    for v in e:
        k = res.order_keys.get(v)
        if k is not None and (best is None or k < best):
            best = k
    if best is None:
        return None
    return merge_weight(best, cfg.weight(e))


def fpp_edge_order(res, cfg, K, edges):
    """Edges sorted ascending by edge passage time.

    Unsettled lower-bound markers sort after every finite value; ties on
    finite times break by canonical edge order and are counted. Results
    from an exact_order run are sorted by exact weight-tuple keys instead
    of float log times, so theorem-scale K cannot produce spurious ties.
    """
    decorated = []
    if res.order_keys is not None:
        for e in edges:
            k = edge_order_key(res, cfg, e)
            decorated.append(((1, ()) if k is None else (0, k), e))
    else:
        for e in edges:
            t = edge_time(res, cfg, K, e)
            decorated.append(((1, 0.0) if t is None else (0, t), e))
    decorated.sort()
    ties = sum(
        1 for (ka, _), (kb, _) in zip(decorated, decorated[1:])
        if ka == kb and ka[0] == 0
    )
    return [e for _, e in decorated], ties


def beats_boundary(res, x):
    """True iff x settled strictly before the first boundary vertex."""
    return x in res.times and x != res.first_boundary_vertex


def dijkstra_highprec(cfg, region, K, dps=60):
    """Arbitrary-precision cross-check oracle for small regions (<= 50 vertices).

    Works on linear-scale mpmath times, so K must be moderate; returns
    (times dict vertex -> float log_time, boundary log_time, boundary vertex).
    """
    import heapq

    import mpmath as mp

    if len(region.vertices) > 50:
        raise ValueError("high-precision oracle is limited to 50 vertices")
    with mp.workdps(dps):
        taus = [mp.e ** (mp.mpf(K) * mp.mpf(cfg.weight(e))) for e in region.edges]
        dist = {region.origin: mp.mpf(0)}
        done = set()
        heap = [(mp.mpf(0), region.lex_rank[region.vertex_index[region.origin]],
                 region.origin)]
        times = {}
        while heap:
            d, _, v = heapq.heappop(heap)
            if v in done:
                continue
            done.add(v)
            times[v] = float(mp.log(d)) if d > 0 else LOG_ZERO
            if region.is_boundary(v):
                return times, times[v], v
            vi = region.vertex_index[v]
            for ui, ei in region.adjacency[vi]:
                u = region.vertices[ui]
                if u in done:
                    continue
                nd = d + taus[ei]
                if u not in dist or nd < dist[u]:
                    dist[u] = nd
                    heapq.heappush(heap, (nd, region.lex_rank[ui], u))
    raise RuntimeError("high-precision run did not reach the boundary")
