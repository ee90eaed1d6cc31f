"""Geometry of Z^d with nearest-neighbor edges: regions, boundaries, edge sets.

Vertices are plain tuples of ints, edges are canonical (lo, hi) vertex
pairs with lo < hi lexicographically. A Region is an immutable, fully
enumerated finite connected vertex set containing the origin, together
with its adjacency boundary and internal edge list.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

Vertex = tuple
Edge = tuple  # (lo, hi) with lo < hi lexicographically


class RegionError(ValueError):
    pass


class AdjacencyError(ValueError):
    pass


def l1_norm(v):
    """l1 distance from the origin (= lattice geodesic distance)."""
    return sum(abs(c) for c in v)


def neighbors(v):
    """The 2d nearest neighbors of v, in fixed (axis, minus-then-plus) order."""
    out = []
    for k in range(len(v)):
        for s in (-1, 1):
            out.append(v[:k] + (v[k] + s,) + v[k + 1:])
    return out


def are_adjacent(u, v):
    return len(u) == len(v) and sum(abs(a - b) for a, b in zip(u, v)) == 1


def canonical_edge(u, v):
    """One canonical representation per undirected nearest-neighbor edge."""
    if not are_adjacent(u, v):
        raise AdjacencyError(f"{u} and {v} are not nearest neighbors")
    return (u, v) if u < v else (v, u)


# -- deterministic 64-bit edge encoding (frozen; archived results depend on it) --

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_CODE_SEED = 0xE220A8397B1DCDAF


def mix64(z):
    """SplitMix64 finalizer (Stafford mix13); a bijection on 64-bit ints."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def _zigzag(c):
    return 2 * c if c >= 0 else -2 * c - 1


def edge_code(e):
    """64-bit code of a canonical edge: fold coordinates of lo then hi.

    The packing order is lo[0..d-1], hi[0..d-1], each zigzag-encoded and
    chained through mix64. This encoding is frozen for reproducibility.
    """
    lo, hi = e
    h = _CODE_SEED
    for c in (*lo, *hi):
        h = mix64(h + _zigzag(c) * _GOLDEN)
    return h


@dataclass(frozen=True)
class Region:
    """A finite connected vertex set around the origin, fully enumerated.

    vertices are listed in BFS-layer order (lexicographic within a layer),
    edges in lexicographic (lo, hi) order; both orders are frozen so every
    downstream run is reproducible. Immutable after build: safe to share
    across concurrent trial workers.
    """

    dimension: int
    kind: str
    vertices: list = field(repr=False)
    boundary: frozenset = field(repr=False)
    edges: list = field(repr=False)

    # derived lookups, built in __post_init__
    vertex_index: dict = field(init=False, repr=False)
    edge_index: dict = field(init=False, repr=False)
    adjacency: list = field(init=False, repr=False)  # vidx -> [(nbr_vidx, eidx)]
    edge_codes: np.ndarray = field(init=False, repr=False)
    lex_rank: list = field(init=False, repr=False)  # vidx -> rank in lex order

    def __post_init__(self):
        vindex = {v: i for i, v in enumerate(self.vertices)}
        eindex = {e: i for i, e in enumerate(self.edges)}
        adjacency = [[] for _ in self.vertices]
        for ei, (lo, hi) in enumerate(self.edges):
            i, j = vindex[lo], vindex[hi]
            adjacency[i].append((j, ei))
            adjacency[j].append((i, ei))
        codes = np.array([edge_code(e) for e in self.edges], dtype=np.uint64)
        lex_rank = [0] * len(self.vertices)
        for rank, v in enumerate(sorted(self.vertices)):
            lex_rank[vindex[v]] = rank
        object.__setattr__(self, "vertex_index", vindex)
        object.__setattr__(self, "edge_index", eindex)
        object.__setattr__(self, "adjacency", adjacency)
        object.__setattr__(self, "edge_codes", codes)
        object.__setattr__(self, "lex_rank", lex_rank)

    @property
    def origin(self):
        return (0,) * self.dimension

    @property
    def edge_count(self):
        return len(self.edges)

    def __contains__(self, v):
        return v in self.vertex_index

    def is_boundary(self, v):
        return v in self.boundary

    def incident_edges(self, v):
        return [ei for _, ei in self.adjacency[self.vertex_index[v]]]


def _l1_membership(R):
    return lambda v: l1_norm(v) <= R


def _lopsided_membership(R):
    # interior of the piecewise-linear boundary -x+|y|=R (x<=0), 2x+|y|=R (x>0)
    def member(v):
        x, y = v
        return (-x + abs(y) <= R) if x <= 0 else (2 * x + abs(y) <= R)

    return member


def build_region(kind, d, R=None, predicate=None, max_vertices=2_000_000):
    """Enumerate a region by BFS from the origin.

    kind is one of 'l1', 'lopsided' (d=2 only) or 'custom' (with a
    membership predicate). Boundary is defined by adjacency to the
    complement, so one definition covers all kinds. BFS from the origin
    inherently restricts a custom predicate to the origin's connected
    component; anything unreachable is dropped.
    """
    if kind == "l1":
        if R is None or R < 0:
            raise RegionError("l1 region requires a radius R >= 0")
        member = _l1_membership(R)
        label = f"l1:{R}"
    elif kind == "lopsided":
        if d != 2:
            raise RegionError("lopsided region is defined for d=2 only")
        if R is None or R < 0:
            raise RegionError("lopsided region requires a radius R >= 0")
        member = _lopsided_membership(R)
        label = f"lopsided:{R}"
    elif kind == "custom":
        if predicate is None:
            raise RegionError("custom region requires a membership predicate")
        member = predicate
        label = "custom"
    else:
        raise RegionError(f"unknown region kind {kind!r}")

    origin = (0,) * d
    if not member(origin):
        raise RegionError("region must contain the origin")

    vertices = []
    seen = {origin}
    layer = [origin]
    while layer:
        vertices.extend(layer)
        if len(vertices) > max_vertices:
            raise RegionError(
                f"region exceeded the {max_vertices}-vertex cap; "
                "unbounded custom predicate?"
            )
        nxt = set()
        for v in layer:
            for u in neighbors(v):
                if u not in seen and member(u):
                    seen.add(u)
                    nxt.add(u)
        layer = sorted(nxt)

    boundary = frozenset(
        v for v in vertices if any(u not in seen for u in neighbors(v))
    )
    edges = sorted(
        (v, u) for v in vertices for u in neighbors(v) if u in seen and v < u
    )
    if kind == "custom" and len(vertices) == max_vertices:
        warnings.warn("custom region hit the vertex cap exactly; check the predicate")
    return Region(dimension=d, kind=label, vertices=vertices,
                  boundary=boundary, edges=edges)


def parse_region_spec(spec, d):
    """Parse a CLI/config region spec: 'l1:R' or 'lopsided:R'."""
    try:
        kind, _, rtext = spec.partition(":")
        R = int(rtext)
    except ValueError:
        raise RegionError(f"bad region spec {spec!r}; expected 'l1:R' or 'lopsided:R'")
    if kind not in ("l1", "lopsided"):
        raise RegionError(f"unknown region kind {kind!r} in spec {spec!r}")
    return build_region(kind, d, R=R)
