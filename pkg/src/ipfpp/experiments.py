"""Monte Carlo driver: proportion grids, level curves, slices, power-law fit.

Each trial runs the truncated FPP process (optionally the full coupled
pair) on its own counter-derived configuration and increments exact
integer per-vertex counters for the beats-boundary event. Trials are
split into static contiguous chunks across workers, so results are
byte-identical for any worker count.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import coupling, fpp
from .lattice import parse_region_spec
from .randomness import Configuration, CouplingParams, delta

_COORD_NAMES = ("x", "y", "z")

EVENT_KEYS = ("t_delta", "ip_contains_fpp", "fpp_contains_ip", "late_invasion")


@dataclass
class ExperimentPlan:
    dimension: int
    region_spec: str
    trials: int
    master_seed: int
    inner_r: int = 1
    epsilon_half: float = 0.01
    # how the headline "0.01" is read: "epsilon_half" (default) means
    # K = ln|E| / delta(|E|, 0.01); "epsilon" means K uses 0.01/2
    epsilon_reading: str = "epsilon_half"
    k_override: float = None
    workers: int = 1
    coupling_stats: bool = False

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0.0 < self.epsilon_half < 0.5:
            raise ValueError("epsilon_half must lie in (0, 0.5)")
        if self.epsilon_reading not in ("epsilon_half", "epsilon"):
            raise ValueError("epsilon_reading must be 'epsilon_half' or 'epsilon'")

    def coupling_params(self, region):
        m = region.edge_count
        if self.epsilon_reading == "epsilon_half":
            eps = 2.0 * self.epsilon_half
        else:
            eps = self.epsilon_half
        params = CouplingParams.theorem(m, eps)
        if self.k_override is not None:
            params = params.with_k(self.k_override)
        return params


@dataclass
class ProportionGrid:
    """Exact per-vertex counts of the beats-boundary event over n trials."""

    dimension: int
    n: int
    counts: dict  # vertex -> int count; vertices outside the region absent

    def proportion(self, v):
        return self.counts.get(v, 0) / self.n


@dataclass
class FitResult:
    alpha: float
    r: float
    points_used: int
    exclusion: str = "0<P<1 and x!=0"


@dataclass
class ExperimentResult:
    plan: ExperimentPlan
    region_kind: str
    edge_count: int
    delta_epsilon_half: float
    K: float
    grid: ProportionGrid
    event_counts: dict = field(default_factory=dict)
    ties: int = 0
    wall_time: float = 0.0

    def summary(self):
        n = self.plan.trials
        freqs = {}
        for k, c in self.event_counts.items():
            p = c / n
            freqs[k] = {"count": c, "frequency": p,
                        "stderr": math.sqrt(max(p * (1 - p), 0.0) / n)}
        return {
            "plan": asdict(self.plan),
            "region": self.region_kind,
            "edge_count": self.edge_count,
            "delta_epsilon_half": self.delta_epsilon_half,
            "K": self.K,
            "theorem_k": self.plan.k_override is None,
            "event_frequencies": freqs,
            "tie_diagnostics": self.ties,
            "wall_time_s": self.wall_time,
            "invasion_proxy": "invaded-before-halt stands in for invaded-before-"
                              "first-boundary-vertex (both runs truncate at their "
                              "boundary hit)",
        }


def _run_chunk(plan, start, stop):
    """Trials [start, stop) of a plan; returns (counts array, event counts, ties)."""
    region = parse_region_spec(plan.region_spec, plan.dimension)
    params = plan.coupling_params(region)
    counts = np.zeros(len(region.vertices), dtype=np.int64)
    events = {k: 0 for k in EVENT_KEYS}
    ties = 0
    vindex = region.vertex_index
    for t in range(start, stop):
        cfg = Configuration(plan.master_seed, t)
        if plan.coupling_stats:
            out = coupling.run_coupled(cfg, region, plan.inner_r, params)
            res = out.fpp_result
            events["t_delta"] += out.t_delta_holds
            events["ip_contains_fpp"] += out.ip_contains_fpp
            events["fpp_contains_ip"] += out.fpp_contains_ip_on_inner
            events["late_invasion"] += out.late_invasion_in_inner
        else:
            res = fpp.dijkstra(cfg, region, params.K)
        ties += res.ties
        for v, _ in res.settled:
            if v != res.first_boundary_vertex:
                counts[vindex[v]] += 1
    return counts, events, ties


def run_experiment(plan):
    """Execute a plan; deterministic for fixed plan fields, any worker count."""
    t0 = time.perf_counter()
    region = parse_region_spec(plan.region_spec, plan.dimension)
    params = plan.coupling_params(region)

    n, w = plan.trials, max(1, plan.workers)
    bounds = [n * i // w for i in range(w + 1)]
    chunks = [(a, b) for a, b in zip(bounds, bounds[1:]) if a < b]

    counts = np.zeros(len(region.vertices), dtype=np.int64)
    events = {k: 0 for k in EVENT_KEYS}
    ties = 0
    if len(chunks) == 1:
        results = [_run_chunk(plan, *chunks[0])]
    else:
        with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
            futures = [pool.submit(_run_chunk, plan, a, b) for a, b in chunks]
            results = [f.result() for f in futures]
    for c, ev, t in results:
        counts += c
        for k in EVENT_KEYS:
            events[k] += ev[k]
        ties += t

    grid = ProportionGrid(
        dimension=plan.dimension,
        n=n,
        counts={v: int(c) for v, c in zip(region.vertices, counts)},
    )
    return ExperimentResult(
        plan=plan,
        region_kind=region.kind,
        edge_count=region.edge_count,
        delta_epsilon_half=delta(region.edge_count, plan.epsilon_half),
        K=params.K,
        grid=grid,
        event_counts=events if plan.coupling_stats else {},
        ties=ties,
        wall_time=time.perf_counter() - t0,
    )


def slice_profile(grid, R):
    """The y=0 slice of a d=2 l1-ball grid, x rescaled to [-1, 1]."""
    if grid.dimension != 2:
        raise ValueError("slice is defined for d=2 grids")
    return [(k / R, grid.proportion((k, 0))) for k in range(-R, R + 1)]


def fit_alpha(pairs):
    """Least squares alpha with alpha*log|x| = log(1-P), through the origin.

    Only points with 0 < P < 1 and x != 0 enter (log of 0 and log of 1-1
    are undefined); the exclusion rule is recorded in the result.
    """
    xs, ys = [], []
    for x, p in pairs:
        if x != 0 and 0.0 < p < 1.0:
            xs.append(math.log(abs(x)))
            ys.append(math.log1p(-p))
    if len(xs) < 2:
        raise ValueError("fit needs at least 2 points with 0 < P < 1 and x != 0")
    xs = np.array(xs)
    ys = np.array(ys)
    alpha = float(np.dot(xs, ys) / np.dot(xs, xs))
    r = float(np.corrcoef(xs, ys)[0, 1])
    return FitResult(alpha=alpha, r=r, points_used=len(xs))


def level_curve(grid, level):
    """Linearly interpolated crossings of P against `level` on a d=2 grid.

    Scans grid rows and columns; a crossing between adjacent lattice
    vertices (both inside the region) contributes one point. Returns
    (points, isotropy_ratio), the ratio being mean level-set distance
    along near-axis directions over near-diagonal directions — reported
    as a diagnostic only, never asserted.
    """
    if grid.dimension != 2:
        raise ValueError("level curves are defined for d=2 grids")
    if not 0.0 < level < 1.0:
        raise ValueError("level must lie in (0,1)")
    pts = {(x, y): c / grid.n for (x, y), c in grid.counts.items()}

    points = []

    def scan(keys, moving_axis):
        for key in keys:
            line = sorted(p for p in pts if p[1 - moving_axis] == key)
            for a, b in zip(line, line[1:]):
                if b[moving_axis] != a[moving_axis] + 1:
                    continue
                pa, pb = pts[a], pts[b]
                if pa == level:
                    points.append((float(a[0]), float(a[1])))
                if (pa - level) * (pb - level) < 0:
                    t = (level - pa) / (pb - pa)
                    q = list(map(float, a))
                    q[moving_axis] += t
                    points.append(tuple(q))

    scan(sorted({p[1] for p in pts}), 0)  # rows: vary x
    scan(sorted({p[0] for p in pts}), 1)  # columns: vary y

    axis_r, diag_r = [], []
    for x, y in points:
        rad = math.hypot(x, y)
        if rad == 0:
            continue
        ang = math.degrees(math.atan2(y, x)) % 90.0
        (axis_r if min(ang, 90.0 - ang) <= 22.5 else diag_r).append(rad)
    ratio = None
    if axis_r and diag_r:
        ratio = (sum(axis_r) / len(axis_r)) / (sum(diag_r) / len(diag_r))
    return points, ratio


def cluster_at_level(cfg, region, p):
    """Connected component of the origin among region edges with w(e) < p."""
    if not 0.0 < p <= 1.0:
        raise ValueError("p must lie in (0, 1]")
    weights = cfg.edge_weights(region)
    seen = {region.origin}
    stack = [region.vertex_index[region.origin]]
    while stack:
        vi = stack.pop()
        for ui, ei in region.adjacency[vi]:
            u = region.vertices[ui]
            if u not in seen and weights[ei] < p:
                seen.add(u)
                stack.append(ui)
    return seen


# ---------------------------------------------------------------- file formats

def write_grid_csv(path, region, grid):
    names = _COORD_NAMES[:grid.dimension]
    with open(path, "w") as fh:
        fh.write(",".join(names) + ",count,n,proportion\n")
        for v in region.vertices:
            c = grid.counts.get(v, 0)
            coords = ",".join(str(x) for x in v)
            fh.write(f"{coords},{c},{grid.n},{c / grid.n:.17g}\n")


def read_grid_csv(path):
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        d = header.index("count")
        counts = {}
        n = None
        for line in fh:
            parts = line.strip().split(",")
            v = tuple(int(x) for x in parts[:d])
            counts[v] = int(parts[d])
            n = int(parts[d + 1])
    if n is None:
        raise ValueError(f"grid file {path} has no data rows")
    return ProportionGrid(dimension=d, n=n, counts=counts)


def write_slice_csv(path, pairs):
    with open(path, "w") as fh:
        fh.write("x_scaled,proportion\n")
        for x, p in pairs:
            fh.write(f"{x:.17g},{p:.17g}\n")


def read_slice_csv(path):
    pairs = []
    with open(path) as fh:
        fh.readline()
        for line in fh:
            x, p = line.strip().split(",")
            pairs.append((float(x), float(p)))
    return pairs


def write_summary_json(path, result):
    with open(path, "w") as fh:
        json.dump(result.summary(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_fit_json(path, fit):
    with open(path, "w") as fh:
        json.dump({"alpha": fit.alpha, "r": fit.r,
                   "points_used": fit.points_used,
                   "exclusion": fit.exclusion}, fh, indent=2, sort_keys=True)
        fh.write("\n")
