"""Independent brute-force oracles used by the test suite only.

These deliberately avoid the engines they check: passage times come from
exhaustive simple-path enumeration, invasion replay re-derives the
frontier multiset step by step.
"""

from ipfpp.fpp import LOG_ZERO, logtime_add


def enumerate_simple_paths(region):
    """All simple paths from the origin, as lists of edge indices.

    Exponential; intended for regions of at most ~13 vertices.
    """
    paths = []
    origin_idx = region.vertex_index[region.origin]

    def extend(vi, visited, edges_so_far):
        if edges_so_far:
            paths.append((vi, list(edges_so_far)))
        for ui, ei in region.adjacency[vi]:
            if ui in visited:
                continue
            visited.add(ui)
            edges_so_far.append(ei)
            extend(ui, visited, edges_so_far)
            edges_so_far.pop()
            visited.remove(ui)

    extend(origin_idx, {origin_idx}, [])
    return paths


def brute_force_times(region, log_taus, paths=None):
    """Minimal log passage time per vertex, by exhausting simple paths."""
    if paths is None:
        paths = enumerate_simple_paths(region)
    best = {region.vertex_index[region.origin]: LOG_ZERO}
    for vi, edge_idxs in paths:
        t = LOG_ZERO
        for ei in edge_idxs:
            t = logtime_add(t, log_taus[ei])
        if vi not in best or t < best[vi]:
            best[vi] = t
    return best


def replay_invasion(region, weights, rec):
    """Check every invaded edge was minimal over the frontier at its step."""
    invaded_v = {region.vertex_index[region.origin]}
    invaded_e = set()
    for e in rec.edge_sequence:
        frontier = {
            ei
            for vi in invaded_v
            for _, ei in region.adjacency[vi]
            if ei not in invaded_e
        }
        ei = region.edge_index[e]
        assert ei in frontier, f"invaded edge {e} was not on the frontier"
        w_min = min(weights[f] for f in frontier)
        assert weights[ei] <= w_min, f"invaded edge {e} was not frontier-minimal"
        invaded_e.add(ei)
        for v in e:
            invaded_v.add(region.vertex_index[v])
    return True
