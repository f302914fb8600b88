"""Effective-number diversity indices computed from frequency distributions.

The central quantity is the Hill diversity of order ``k``,

    D_k = (sum_n p_n ** k) ** (1 / (1 - k)),

where ``p_n`` is the relative abundance of class ``n``.  Order 0 is the
richness (number of distinct classes), order 1 is the exponential of the
Shannon entropy, and order 2 is the inverse Simpson concentration.  All
indices are "effective numbers": a perfectly even distribution over N
classes scores N at every order.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "FrequencyDistribution",
    "richness",
    "shannon_entropy",
    "hill_diversity",
    "diversity_richness_ratio",
]

# Orders closer to 1 than this are evaluated through the entropy limit
# exp(H) instead of the general formula, whose exponent 1/(1-k) diverges.
ORDER_ONE_EPS = 1e-9


@dataclass(frozen=True)
class FrequencyDistribution:
    """Immutable label -> count multiset with a precomputed total.

    Zero-count classes are never stored, so every stored count is >= 1 and
    ``total`` equals the sum of the stored counts.
    """

    counts: Mapping[str, int] = field(default_factory=dict)
    total: int = 0

    @classmethod
    def from_counts(cls, pairs: Iterable[tuple[str, int]]) -> FrequencyDistribution:
        """Build a distribution from (label, count) pairs.

        Duplicate labels are merged by summation and zero-count entries are
        dropped.  Negative counts raise ``ValueError``.
        """
        merged: dict[str, int] = {}
        for label, count in pairs:
            count = int(count)
            if count < 0:
                raise ValueError(f"negative count {count} for label {label!r}")
            if count == 0:
                continue
            merged[label] = merged.get(label, 0) + count
        return cls(counts=merged, total=sum(merged.values()))

    @classmethod
    def from_events(cls, events: Iterable[str]) -> FrequencyDistribution:
        """Build a distribution by counting an event stream."""
        merged: dict[str, int] = {}
        for label in events:
            merged[label] = merged.get(label, 0) + 1
        return cls(counts=merged, total=sum(merged.values()))

    def __len__(self) -> int:
        return len(self.counts)

    def __bool__(self) -> bool:
        return self.total > 0

    def count_array(self) -> np.ndarray:
        return np.fromiter(self.counts.values(), dtype=float, count=len(self.counts))

    def probabilities(self) -> np.ndarray:
        """Relative abundances p_n = count_n / total."""
        if self.total == 0:
            return np.empty(0, dtype=float)
        return self.count_array() / float(self.total)


def _check_order(order: float) -> float:
    order = float(order)
    if not np.isfinite(order) or order < 0.0:
        raise ValueError(f"diversity order must be finite and >= 0, got {order}")
    return order


def _entropy_from_probabilities(p: np.ndarray) -> float:
    return float(-np.sum(p * np.log(p)))


def hill_from_probabilities(p: np.ndarray, order: float) -> float:
    """Hill diversity of a probability vector (all entries strictly positive)."""
    order = _check_order(order)
    if p.size == 0:
        raise ValueError("diversity of an empty distribution is undefined")
    if abs(order - 1.0) < ORDER_ONE_EPS:
        return float(np.exp(_entropy_from_probabilities(p)))
    return float(np.sum(p**order) ** (1.0 / (1.0 - order)))


def richness(dist: FrequencyDistribution) -> int:
    """Number of distinct classes; the order-0 Hill diversity. Empty -> 0."""
    return len(dist.counts)


def shannon_entropy(dist: FrequencyDistribution) -> float:
    """Shannon entropy H = -sum p_n ln p_n, in nats.

    The natural logarithm is used throughout so that ``exp(H)`` equals the
    order-1 Hill diversity.
    """
    if dist.total == 0:
        raise ValueError("entropy of an empty distribution is undefined")
    return _entropy_from_probabilities(dist.probabilities())


def hill_diversity(dist: FrequencyDistribution, order: float) -> float:
    """Hill diversity of the given order; ``exp(H)`` at the order-1 limit.

    The result always lies in [1, richness]: order 0 counts every class
    equally, and increasing the order discounts rare classes.
    """
    if dist.total == 0:
        raise ValueError("diversity of an empty distribution is undefined")
    return hill_from_probabilities(dist.probabilities(), order)


def diversity_richness_ratio(dist: FrequencyDistribution, order: float = 1.0) -> float:
    """Diversity divided by richness: evenness of usage of the observed classes."""
    if dist.total == 0:
        raise ValueError("diversity/richness of an empty distribution is undefined")
    return hill_diversity(dist, order) / richness(dist)
