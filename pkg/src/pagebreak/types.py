"""Result types shared by the predictors."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class Method(Enum):
    """Break-point prediction method, as exposed on the command line."""

    ONE_SENTENCE = "one-sentence"
    TWO_SENTENCES = "two-sentences"
    ONE_PARAGRAPH = "one-paragraph"
    TWENTY_PERCENT = "twenty-percent"
    NOVELTY_ARTICLE = "novelty-article"
    NOVELTY_CORPUS = "novelty-corpus"
    SLM_ARTICLE = "slm-article"
    SLM_CORPUS = "slm-corpus"

    @property
    def is_baseline(self) -> bool:
        return self in BASELINE_METHODS

    @property
    def has_curve(self) -> bool:
        return self in CURVE_METHODS

    @classmethod
    def from_flag(cls, flag: str) -> "Method":
        for member in cls:
            if member.value == flag:
                return member
        raise ValueError(f"unknown method {flag!r}")


BASELINE_METHODS = (
    Method.ONE_SENTENCE,
    Method.TWO_SENTENCES,
    Method.ONE_PARAGRAPH,
    Method.TWENTY_PERCENT,
)

CURVE_METHODS = (
    Method.NOVELTY_ARTICLE,
    Method.NOVELTY_CORPUS,
    Method.SLM_ARTICLE,
    Method.SLM_CORPUS,
)


class Context(Enum):
    """Whether model weights come from the article alone or its whole corpus."""

    ARTICLE = "article"
    CORPUS = "corpus"


@dataclass
class ScoreCurve:
    """Per-sentence-prefix score series for one article.

    ``values[i]`` is the score after the reader has seen sentences
    1 through i+1; the list length equals the article sentence count.
    """

    method: Method
    values: list[float]
    normalized: bool = False

    def __len__(self) -> int:
        return len(self.values)


@dataclass
class BreakPoint:
    """A predicted lower-bound break after ``sentence_index`` (1-based).

    ``fallback`` marks predictions where the method's primary rule was
    degenerate and a documented fallback was used instead. ``diagnostics``
    carries method-specific numbers (fit coefficients, delta statistics,
    dropped-word counts) for auditing.
    """

    article_id: str
    sentence_index: int
    method: Method
    fallback: bool = False
    diagnostics: dict[str, float] = field(default_factory=dict)
