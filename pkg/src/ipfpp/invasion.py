"""Invasion percolation: greedy frontier growth by minimal edge weight.

The process starts at the origin and repeatedly invades the
minimal-weight edge on the frontier (edges with at least one invaded
endpoint), stopping immediately once a boundary vertex of the region is
invaded. Within a step the edge counts as invaded before its new vertex.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass


@dataclass
class InvasionRecord:
    """Invasion order up to (and including) the first boundary vertex."""

    edge_sequence: list      # edges in invasion order
    edge_weights: list       # parallel weights, for dumps and diagnostics
    vertex_sequence: list    # first-invasion order, origin first, no repeats
    first_boundary_vertex: tuple
    halted: bool = True


def invade(cfg, region):
    """Run invasion percolation on (cfg, region) until the boundary is hit.

    Uses a stale-entry min-heap: every exposed edge is pushed once per
    exposure and already-invaded pops are skipped (weights never change,
    so no decrease-key is needed). Ties on weight break by canonical edge
    order, i.e. the edge's index in the region's lex-sorted edge list.
    """
    weights = cfg.edge_weights(region)
    adjacency = region.adjacency
    n = len(region.vertices)
    origin_idx = region.vertex_index[region.origin]

    vertex_invaded = [False] * n
    edge_invaded = [False] * region.edge_count
    heap = []

    def expose(vidx):
        for _, eidx in adjacency[vidx]:
            if not edge_invaded[eidx]:
                heapq.heappush(heap, (weights[eidx], eidx))

    edge_sequence = []
    edge_wts = []
    vertex_sequence = [region.origin]
    vertex_invaded[origin_idx] = True
    expose(origin_idx)

    first_boundary = None
    while heap:
        w, eidx = heapq.heappop(heap)
        if edge_invaded[eidx]:
            continue
        edge_invaded[eidx] = True
        e = region.edges[eidx]
        edge_sequence.append(e)
        edge_wts.append(float(w))
        lo, hi = e
        for v in (lo, hi):
            vidx = region.vertex_index[v]
            if not vertex_invaded[vidx]:
                vertex_invaded[vidx] = True
                vertex_sequence.append(v)
                if region.is_boundary(v):
                    first_boundary = v
                    break
                expose(vidx)
        if first_boundary is not None:
            break

    if first_boundary is None:
        # unreachable in a valid region: the frontier only empties after
        # the whole region is invaded, which includes boundary vertices
        raise RuntimeError("invasion exhausted the region without hitting the boundary")

    return InvasionRecord(
        edge_sequence=edge_sequence,
        edge_weights=edge_wts,
        vertex_sequence=vertex_sequence,
        first_boundary_vertex=first_boundary,
    )


def invaded_before_boundary(rec):
    """Vertices invaded strictly before the first boundary vertex."""
    return set(rec.vertex_sequence[:-1])


def ip_edge_order(rec):
    """The invasion order on edges (all precede the boundary vertex)."""
    return list(rec.edge_sequence)


def late_invasion(rec, inner_r):
    """True iff some vertex with l1 norm <= inner_r was not invaded by the halt.

    Finite proxy for "invaded after the first boundary vertex": a halted
    run cannot observe later invasions, so "missing at the halt" stands in.
    """
    invaded = invaded_before_boundary(rec)
    d = len(rec.first_boundary_vertex)
    return any(v not in invaded for v in _ball_vertices(d, inner_r))


def _ball_vertices(d, r):
    """All lattice vertices with l1 norm <= r."""
    if d == 1:
        return [(x,) for x in range(-r, r + 1)]
    out = []
    for x in range(-r, r + 1):
        for rest in _ball_vertices(d - 1, r - abs(x)):
            out.append((x,) + rest)
    return out


__all__ = [
    "InvasionRecord", "invade", "invaded_before_boundary",
    "ip_edge_order", "late_invasion",
]
