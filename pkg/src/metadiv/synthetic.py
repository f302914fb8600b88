"""Synthetic corpora with a known generating distribution.

Zipf-distributed token streams are the standard stress test for lexical
statistics: the true diversity of the generator is computable in closed
form, which turns extrapolation quality into a measurable error.
"""

from __future__ import annotations

import numpy as np

from .diversity import _check_order, hill_from_probabilities

__all__ = ["zipf_probabilities", "zipf_corpus", "zipf_true_diversity"]


def zipf_probabilities(n_types: int, exponent: float = 1.0) -> np.ndarray:
    """Normalized rank-frequency law p_i proportional to i**(-exponent)."""
    if n_types < 1:
        raise ValueError("need at least one type")
    ranks = np.arange(1, n_types + 1, dtype=float)
    weights = ranks**-float(exponent)
    return weights / weights.sum()


def zipf_corpus(
    n_tokens: int, n_types: int, exponent: float = 1.0, seed: int = 0
) -> tuple[str, ...]:
    """Sample a token stream of Zipf-distributed pseudo-words.

    Types are labeled ``w00001`` .. by rank; a fixed seed makes the stream
    reproducible.
    """
    p = zipf_probabilities(n_types, exponent)
    rng = np.random.default_rng(seed)
    draws = rng.choice(n_types, size=n_tokens, p=p)
    labels = [f"w{i + 1:05d}" for i in range(n_types)]
    return tuple(labels[i] for i in draws)


def zipf_true_diversity(n_types: int, exponent: float = 1.0, order: float = 1.0) -> float:
    """Hill diversity of the generating distribution itself.

    This is the infinite-sample value an accumulation curve of the sampled
    stream converges to.
    """
    order = _check_order(order)
    return hill_from_probabilities(zipf_probabilities(n_types, exponent), order)
