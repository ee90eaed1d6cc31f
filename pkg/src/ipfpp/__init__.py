"""Coupled invasion percolation / log-uniform first passage percolation toolkit."""

from .coupling import CoupledOutcome, CouplingInvariantError, run_coupled
from .fpp import FppResult, beats_boundary, dijkstra, edge_time, fpp_edge_order, logtime_add
from .invasion import InvasionRecord, invade, invaded_before_boundary, ip_edge_order
from .lattice import Region, build_region, canonical_edge, l1_norm, neighbors, parse_region_spec
from .randomness import Configuration, CouplingParams, FixedWeights, delta, k_param, min_gap, tau

__all__ = [
    "CoupledOutcome", "CouplingInvariantError", "run_coupled",
    "FppResult", "beats_boundary", "dijkstra", "edge_time", "fpp_edge_order",
    "logtime_add",
    "InvasionRecord", "invade", "invaded_before_boundary", "ip_edge_order",
    "Region", "build_region", "canonical_edge", "l1_norm", "neighbors",
    "parse_region_spec",
    "Configuration", "CouplingParams", "FixedWeights", "delta", "k_param",
    "min_gap", "tau",
]

__version__ = "0.1.0"
