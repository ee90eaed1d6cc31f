"""Edge-weight configurations and the coupling parameter formulas.

Weights are generated counter-style: w(e) is a pure function of
(master_seed, trial_index, canonical edge code), so invasion and FPP can
lazily query the same configuration without a shared mutable store, and
any trial can be replayed bit-identically on any platform or worker
count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lattice import _GOLDEN, _MASK64, edge_code, mix64

_SEED_TWEAK = 0x2545F4914F6CDD1D
_TRIAL_STRIDE = 0xD1B54A32D192ED03


def _mix64_vec(z):
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def _to_unit(u):
    """Map 64-bit variates into the open interval (0,1) using 53 bits."""
    return ((u >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0 ** -53


class Configuration:
    """One full edge-weight assignment, keyed by (master_seed, trial_index).

    Two Configurations with equal fields produce identical weights for
    every edge; weights lie strictly inside (0,1). Stateless after
    construction, safe for arbitrary concurrent use.
    """

    def __init__(self, master_seed, trial_index=0):
        if not 0 <= master_seed < 2 ** 64:
            raise ValueError("master_seed must be a 64-bit unsigned integer")
        if trial_index < 0:
            raise ValueError("trial_index must be nonnegative")
        self.master_seed = master_seed
        self.trial_index = trial_index
        self._trial_key = mix64(
            mix64(master_seed ^ _SEED_TWEAK) + trial_index * _TRIAL_STRIDE
        )
        self._weights_cache = (None, None)

    def weight(self, e):
        """Uniform(0,1) weight of a canonical edge."""
        u = mix64(self._trial_key ^ edge_code(e))
        return ((u >> 11) + 0.5) * 2.0 ** -53

    def weights_for_codes(self, codes):
        """Vectorized weights for an array of 64-bit edge codes."""
        u = _mix64_vec(codes ^ np.uint64(self._trial_key))
        return _to_unit(u)

    def edge_weights(self, region):
        """Weights of all region edges, indexed like region.edges (cached)."""
        cached_id, cached = self._weights_cache
        if cached_id == id(region):
            return cached
        w = self.weights_for_codes(region.edge_codes)
        self._weights_cache = (id(region), w)
        return w


class FixedWeights:
    """A hand-specified configuration for worked examples and tests."""

    def __init__(self, mapping):
        self.mapping = dict(mapping)

    def weight(self, e):
        return self.mapping[e]

    def edge_weights(self, region):
        return np.array([self.mapping[e] for e in region.edges], dtype=np.float64)


def delta(edge_count, epsilon):
    """Gap threshold with P[all pairwise weight gaps >= delta] = 1 - epsilon.

    delta = (1 - (1-eps)^(1/m)) / (m-1) for m edges, evaluated through
    expm1/log1p so tiny epsilon does not cancel.
    """
    if edge_count < 2:
        raise ValueError("delta requires at least 2 edges")
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0,1)")
    return -math.expm1(math.log1p(-epsilon) / edge_count) / (edge_count - 1)


def k_param(edge_count, epsilon_half):
    """Passage-time exponent scale: ln(edge_count) / delta(edge_count, epsilon_half)."""
    return math.log(edge_count) / delta(edge_count, epsilon_half)


def min_gap(weights):
    """Minimum pairwise gap among weights (sort-based, O(m log m))."""
    w = np.asarray(weights, dtype=np.float64)
    if w.size < 2:
        raise ValueError("min_gap requires at least 2 weights")
    return float(np.diff(np.sort(w)).min())


def small_gap_probability(edge_count, dlt):
    """Exact law P[min pairwise gap >= dlt] = (1 - (m-1)*dlt)^m."""
    base = 1.0 - (edge_count - 1) * dlt
    return base ** edge_count if base > 0 else 0.0


def tau(cfg, e, K):
    """Log passage time of edge e: log(e^{K w(e)}) = K * w(e).

    Never materializes e^{Kw} on the linear scale; realistic K (~1e12)
    would overflow any hardware float.
    """
    return K * cfg.weight(e)


@dataclass(frozen=True)
class CouplingParams:
    """epsilon, the gap threshold delta, the exponent scale K, and |E|."""

    epsilon: float
    delta: float
    K: float
    edge_count: int
    theorem_k: bool = True

    @classmethod
    def theorem(cls, edge_count, epsilon):
        """Parameters as the coupling theorem prescribes: K uses epsilon/2."""
        return cls(
            epsilon=epsilon,
            delta=delta(edge_count, epsilon),
            K=k_param(edge_count, epsilon / 2.0),
            edge_count=edge_count,
        )

    def with_k(self, K):
        """Same event threshold, user-overridden (non-theorem) K."""
        return CouplingParams(self.epsilon, self.delta, K, self.edge_count,
                              theorem_k=False)
