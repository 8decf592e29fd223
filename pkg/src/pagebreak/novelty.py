"""Keyword-novelty curves and their log-fit inflection break point.

The novelty value of a prefix is the cumulative sum of keyword weights,
each word counted once at its first occurrence. The break point comes
from fitting normalized values against ln(sentence index) and mapping the
fitted slope b to sentence round(e^b), clamped into [1, m].
"""

from __future__ import annotations

import math
from typing import Sequence

from .corpus import Corpus
from .errors import DegenerateInputError
from .svd import (
    DEFAULT_COMPONENTS,
    DEFAULT_KEYWORD_CAP,
    KeywordWeights,
    build_matrix,
    keyword_weights,
    truncated_svd,
)
from .textproc import FilterConfig, PreparedArticle, TokenizedSentence, prepare_articles
from .types import BreakPoint, Context, Method, ScoreCurve


def novelty_curve(
    sentences: Sequence[TokenizedSentence],
    weights: KeywordWeights,
    method: Method = Method.NOVELTY_ARTICLE,
) -> ScoreCurve:
    """Cumulative first-occurrence weight sum per sentence prefix."""
    if not sentences:
        raise DegenerateInputError("novelty curve needs at least one sentence")
    values: list[float] = []
    seen: set[str] = set()
    total = 0.0
    for sentence in sentences:
        for token in sentence.tokens:
            if token in seen:
                continue
            seen.add(token)
            weight = weights.weights.get(token)
            if weight is not None:
                total += weight
        values.append(total)
    return ScoreCurve(method=method, values=values)


def round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def inflection_break(curve: ScoreCurve, article_id: str = "") -> BreakPoint:
    """Log-fit inflection of a novelty curve.

    Steps: x_i = ln(i); values min-max normalized to [0, 1]; least-squares
    line y = a + b*x; break index = round(e^b) clamped to [1, m].
    Diagnostics expose a, b, r squared, and the unclamped candidate. A
    constant curve cannot be fitted and falls back to the last sentence.
    """
    values = curve.values
    m = len(values)
    if m < 3:
        raise DegenerateInputError("inflection fit needs at least 3 sentences")
    low = min(values)
    high = max(values)
    if high == low:
        return BreakPoint(
            article_id=article_id,
            sentence_index=m,
            method=curve.method,
            fallback=True,
            diagnostics={"degenerate_fit": 1.0},
        )
    xs = [math.log(i) for i in range(1, m + 1)]
    ys = [(v - low) / (high - low) for v in values]
    x_mean = sum(xs) / m
    y_mean = sum(ys) / m
    sxx = sum((x - x_mean) ** 2 for x in xs)
    sxy = sum((x - x_mean) * (y - y_mean) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = y_mean - slope * x_mean
    ss_res = sum((y - (intercept + slope * x)) ** 2 for x, y in zip(xs, ys))
    ss_tot = sum((y - y_mean) ** 2 for y in ys)
    r_squared = 1.0 - ss_res / ss_tot if ss_tot > 0.0 else 0.0
    candidate = math.exp(slope)
    index = min(max(round_half_up(candidate), 1), m)
    return BreakPoint(
        article_id=article_id,
        sentence_index=index,
        method=curve.method,
        fallback=False,
        diagnostics={
            "intercept": intercept,
            "slope": slope,
            "r_squared": r_squared,
            "candidate": candidate,
        },
    )


def article_keyword_weights(
    article: PreparedArticle,
    svd_k: int = DEFAULT_COMPONENTS,
    keyword_cap: int = DEFAULT_KEYWORD_CAP,
) -> KeywordWeights:
    matrix = build_matrix(article.tokens)
    return keyword_weights(truncated_svd(matrix, svd_k), matrix.words, keyword_cap)


def corpus_keyword_weights(
    corpus: Corpus,
    cfg: FilterConfig | None = None,
    svd_k: int = DEFAULT_COMPONENTS,
    keyword_cap: int = DEFAULT_KEYWORD_CAP,
    prepared: Sequence[PreparedArticle] | None = None,
) -> KeywordWeights:
    """Weights from one matrix over all sentences of all corpus articles.

    Build once per corpus and share across that corpus's articles;
    ``prepared`` skips re-tokenizing when the caller already has it.
    """
    articles = prepared if prepared is not None else prepare_articles(corpus.articles, cfg)
    all_sentences = [ts for article in articles for ts in article.tokens]
    matrix = build_matrix(all_sentences)
    return keyword_weights(truncated_svd(matrix, svd_k), matrix.words, keyword_cap)


def predict_novelty(
    article: PreparedArticle,
    context: Context = Context.ARTICLE,
    corpus: Corpus | None = None,
    *,
    cfg: FilterConfig | None = None,
    svd_k: int = DEFAULT_COMPONENTS,
    keyword_cap: int = DEFAULT_KEYWORD_CAP,
    weights: KeywordWeights | None = None,
) -> BreakPoint:
    """Novelty break for one article in article or corpus weight context.

    Corpus context requires an accepted corpus (or precomputed ``weights``
    from ``corpus_keyword_weights``).
    """
    if context is Context.ARTICLE:
        method = Method.NOVELTY_ARTICLE
        if weights is None:
            weights = article_keyword_weights(article, svd_k, keyword_cap)
    else:
        method = Method.NOVELTY_CORPUS
        if weights is None:
            if corpus is None:
                raise ValueError("corpus context requires a corpus")
            if not corpus.accepted:
                raise ValueError(f"corpus {corpus.id!r} is not accepted")
            weights = corpus_keyword_weights(corpus, cfg, svd_k, keyword_cap)
    curve = novelty_curve(article.tokens, weights, method)
    return inflection_break(curve, article_id=article.article_id)
