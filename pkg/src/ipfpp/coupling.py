"""Run invasion and FPP on one shared configuration and check their agreement.

The checks mirror the coupling guarantees: on the small-gap event (all
pairwise weight gaps >= delta) with the theorem-scale K, the invasion
order and the FPP edge order must agree up to the boundary hit, every
vertex beating the boundary time must be invaded, and invaded vertices
near the origin must beat the boundary unless a late invasion occurred.
Violations at theorem K are engine bugs or genuine counterexamples, so
they abort with a full trial dump rather than being folded into
statistics.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import fpp, invasion
from .lattice import l1_norm
from .randomness import CouplingParams, min_gap


class ConfigMismatchError(ValueError):
    pass


class CouplingInvariantError(RuntimeError):
    """A hard coupling implication failed; carries a replayable trial dump."""

    def __init__(self, message, dump):
        super().__init__(message)
        self.dump = dump


@dataclass
class CoupledOutcome:
    t_delta_holds: bool
    ip_contains_fpp: bool
    fpp_contains_ip_on_inner: bool
    order_agreement: bool
    prefix_diagnostic: bool       # IP edges form an exact prefix of the full FPP order
    late_invasion_in_inner: bool
    min_gap: float
    params: CouplingParams
    inner_r: int
    diagnostics: dict = field(default_factory=dict)
    invasion_record: object = field(default=None, repr=False)
    fpp_result: object = field(default=None, repr=False)


def check_ip_contains_fpp(beats, invaded):
    """Every vertex beating the boundary time was invaded."""
    return beats <= invaded


def check_fpp_contains_ip(invaded, beats, inner_r):
    """Every invaded vertex within l1 distance inner_r beats the boundary."""
    return all(v in beats for v in invaded if l1_norm(v) <= inner_r)


def check_order_agreement(rec, res, cfg, K):
    """Sorting the invaded edge set by FPP edge time reproduces the IP order."""
    order, _ = fpp.fpp_edge_order(res, cfg, K, rec.edge_sequence)
    return order == rec.edge_sequence


def check_prefix(rec, res, cfg, K, region):
    """Stronger diagnostic: IP edges are an exact prefix of the full FPP order."""
    order, _ = fpp.fpp_edge_order(res, cfg, K, region.edges)
    k = len(rec.edge_sequence)
    return order[:k] == rec.edge_sequence


def check_late_invasion(rec, inner_r):
    """Some vertex within l1 distance inner_r was not invaded by the halt."""
    return invasion.late_invasion(rec, inner_r)


def run_coupled(cfg, region, inner_r, params, enforce=True):
    """One coupled trial: shared weights feed both processes, flags computed.

    With enforce and theorem-scale K, the hard implications of the
    coupling are asserted and any violation raises CouplingInvariantError
    with a dump sufficient to replay the trial.
    """
    if params.edge_count != region.edge_count:
        raise ConfigMismatchError(
            f"params built for {params.edge_count} edges, region has "
            f"{region.edge_count}"
        )

    weights = cfg.edge_weights(region)
    gap = min_gap(weights) if region.edge_count >= 2 else float("inf")
    t_delta = gap >= params.delta

    # theorem-scale K pushes log-time gaps below double resolution, so the
    # coupled checks use the exact weight-tuple order; a user-overridden K
    # is compared at face value in floats
    rec = invasion.invade(cfg, region)
    res = fpp.dijkstra(cfg, region, params.K, exact_order=params.theorem_k)

    invaded = invasion.invaded_before_boundary(rec)
    beats = {v for v in res.times if v != res.first_boundary_vertex}

    ip_contains = check_ip_contains_fpp(beats, invaded)
    late = check_late_invasion(rec, inner_r)
    fpp_contains = check_fpp_contains_ip(invaded, beats, inner_r)
    order_ok = check_order_agreement(rec, res, cfg, params.K)
    prefix_ok = check_prefix(rec, res, cfg, params.K, region)

    outcome = CoupledOutcome(
        t_delta_holds=t_delta,
        ip_contains_fpp=ip_contains,
        fpp_contains_ip_on_inner=fpp_contains,
        order_agreement=order_ok,
        prefix_diagnostic=prefix_ok,
        late_invasion_in_inner=late,
        min_gap=gap,
        params=params,
        inner_r=inner_r,
        diagnostics={
            "fpp_ties": res.ties,
            "settled": len(res.settled),
            "invaded": len(rec.vertex_sequence),
            "ip_steps": len(rec.edge_sequence),
        },
        invasion_record=rec,
        fpp_result=res,
    )

    if enforce and params.theorem_k and t_delta:
        failed = []
        if not ip_contains:
            failed.append("ip_contains_fpp")
        if not order_ok:
            failed.append("order_agreement")
        if not prefix_ok:
            failed.append("prefix_diagnostic")
        if not late and not fpp_contains:
            failed.append("fpp_contains_ip_on_inner")
        if failed:
            raise CouplingInvariantError(
                f"hard coupling implication(s) failed: {', '.join(failed)}",
                dump=trial_dump(cfg, region, params, rec, res, outcome),
            )
    return outcome


def trial_dump(cfg, region, params, rec, res, outcome):
    """Everything needed to replay and diagnose a failing trial."""
    return {
        "master_seed": getattr(cfg, "master_seed", None),
        "trial_index": getattr(cfg, "trial_index", None),
        "region": region.kind,
        "dimension": region.dimension,
        "epsilon": params.epsilon,
        "delta": params.delta,
        "K": params.K,
        "min_gap": outcome.min_gap,
        "ip_edge_order": [list(map(list, e)) for e in rec.edge_sequence],
        "ip_edge_weights": rec.edge_weights,
        "fpp_settled": [[list(v), t] for v, t in res.settled],
        "first_boundary_ip": list(rec.first_boundary_vertex),
        "first_boundary_fpp": list(res.first_boundary_vertex),
    }
