"""Tokenization and per-document lexical-diversity reports.

A document is reduced to a stream of surface word forms (no stemming or
lemmatization); the report combines the observed end-of-text diversity with
the power-law fit of the vocabulary growth and the extrapolated asymptote of
the diversity growth, so texts of different lengths can be compared.
"""

from __future__ import annotations

import re
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .accumulation import AccumulationCurve, CheckpointSchedule, diversity_growth, vocabulary_growth
from .diversity import _check_order
from .fitting import FitResult, ModelKind, RankedModel, compare_models, fit_model, fit_power_law

__all__ = ["TokenStream", "LexicalReport", "tokenize", "lexical_report", "pearson_r"]

# A token is a run of word characters, optionally chained by internal
# apostrophes or hyphens; leading/trailing punctuation is never captured.
_TOKEN_RE = re.compile(r"\w+(?:['’-]\w+)*", re.UNICODE)
_LETTER_RE = re.compile(r"[^\W\d_]", re.UNICODE)

DEFAULT_TRAIN_LIMIT = 10_000


@dataclass(frozen=True)
class TokenStream:
    """Ordered normalized word forms extracted from one source."""

    tokens: tuple[str, ...]
    source_id: str = ""

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class LexicalReport:
    """Per-document summary: size, observed diversity, fits, model ranking."""

    source_id: str
    n_tokens: int
    n_types: int
    order: float
    observed_diversity: float
    power_law: FitResult
    saturating: FitResult
    ranking: list[RankedModel] | None
    vocabulary_curve: AccumulationCurve
    diversity_curve: AccumulationCurve

    @property
    def extrapolated_diversity(self) -> float:
        return self.saturating.params["D"]

    def to_dict(self) -> dict:
        return {
            "source": self.source_id,
            "tokens": self.n_tokens,
            "types": self.n_types,
            "order": self.order,
            "observed_D": round(self.observed_diversity, 4),
            "extrapolated_D": round(self.extrapolated_diversity, 4),
            "power_law": {k: round(v, 6) for k, v in self.power_law.params.items()},
            "m4": {k: round(v, 6) for k, v in self.saturating.params.items()},
            "ranking": None
            if self.ranking is None
            else [
                {"model": rm.kind.value, "holdout_rmse": round(rm.holdout_rmse, 6)}
                for rm in self.ranking
            ],
        }


def tokenize(text: str, source_id: str = "") -> TokenStream:
    """Split text into lower-cased word tokens.

    Tokens must contain at least one letter (bare numbers and punctuation
    runs are dropped); internal apostrophes and hyphens are preserved.
    """
    tokens = tuple(
        m.group(0).casefold()
        for m in _TOKEN_RE.finditer(text)
        if _LETTER_RE.search(m.group(0))
    )
    return TokenStream(tokens=tokens, source_id=source_id)


def lexical_report(
    doc: TokenStream,
    order: float = 1.0,
    schedule: CheckpointSchedule | None = None,
    train_limit: int = DEFAULT_TRAIN_LIMIT,
) -> LexicalReport:
    """Build the full lexical-diversity report for one document.

    Fits the power law to the vocabulary-growth curve and the M4 model to
    the diversity-growth curve; when the document extends beyond
    ``train_limit`` the holdout model comparison is included, otherwise the
    ranking is omitted.
    """
    order = _check_order(order)
    if len(doc) == 0:
        raise ValueError(f"document {doc.source_id!r} contains no tokens")
    if schedule is None:
        schedule = CheckpointSchedule.every(100)
    vocab = vocabulary_growth(doc.tokens, schedule)
    div = diversity_growth(doc.tokens, schedule, order)

    power = fit_power_law(vocab)
    m4 = fit_model(div, ModelKind.M4)

    ranking = None
    n_train_points = sum(1 for n, _ in div.points if n <= train_limit)
    has_holdout = any(n > train_limit for n, _ in div.points)
    if has_holdout and n_train_points >= 4:
        ranking = compare_models(div, train_limit)

    return LexicalReport(
        source_id=doc.source_id,
        n_tokens=len(doc),
        n_types=len(set(doc.tokens)),
        order=order,
        observed_diversity=div.points[-1][1],
        power_law=power,
        saturating=m4,
        ranking=ranking,
        vocabulary_curve=vocab,
        diversity_curve=div,
    )


def pearson_r(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Pearson correlation coefficient of two equally long sequences."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("sequences must be one-dimensional and equally long")
    if x.size < 2:
        raise ValueError("correlation needs at least 2 observations")
    xd = x - x.mean()
    yd = y - y.mean()
    sx = float(np.sqrt(np.sum(xd**2)))
    sy = float(np.sqrt(np.sum(yd**2)))
    if sx == 0.0 or sy == 0.0:
        raise ValueError("correlation is undefined for a constant sequence")
    r = float(np.sum(xd * yd) / (sx * sy))
    return max(-1.0, min(1.0, r))
