"""Smoothed language models, prefix KL-divergence curves, and jump detection.

An "ideal" word-frequency model (the full article, or its whole corpus
pooled) is compared against the prefix the reader has seen so far. Both
sides are Dirichlet-smoothed against a subject background model:

    q(w) = (f(w) + mu * p(w | subject)) / (T + mu)

and the divergence of a prefix N from ideal d is

    sum over distinct words w of d:  ln(q(w|d) / q(w|N)) * q(w|d)

The first prefix-to-prefix divergence delta at least ``jump_sigma``
standard deviations from the mean delta marks the break; the delta between
the first and second sentence is never eligible.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .corpus import Corpus
from .errors import DegenerateInputError, OutOfVocabularyError
from .textproc import FilterConfig, PreparedArticle, TokenizedSentence, prepare_articles
from .types import BreakPoint, Context, Method, ScoreCurve

DEFAULT_FALLBACK_MU = 2500.0
DEFAULT_JUMP_SIGMA = 2.0


@dataclass(frozen=True)
class DocModel:
    """Raw word counts of one document; ``total`` is the token count."""

    freqs: dict[str, int]
    total: int

    def probability(self, word: str) -> float:
        if self.total == 0:
            return 0.0
        return self.freqs.get(word, 0) / self.total


class PrefixModel:
    """Mutable word counts over the sentences seen so far."""

    def __init__(self) -> None:
        self.freqs: Counter[str] = Counter()
        self.total = 0

    def add_sentence(self, sentence: TokenizedSentence) -> None:
        self.freqs.update(sentence.tokens)
        self.total += len(sentence.tokens)


@dataclass(frozen=True)
class SubjectModel:
    """Background word probabilities and smoothing constant for one subject."""

    background: dict[str, float]
    mu: float
    doc_count: int
    vocab_size: int
    mu_fallback: bool = field(default=False, compare=False)


def doc_model(tokens: Iterable[str]) -> DocModel:
    freqs = Counter(tokens)
    return DocModel(freqs=dict(freqs), total=sum(freqs.values()))


def merge_models(models: Sequence[DocModel]) -> DocModel:
    """Pool several documents into one (counts add)."""
    freqs: Counter[str] = Counter()
    total = 0
    for model in models:
        freqs.update(model.freqs)
        total += model.total
    return DocModel(freqs=dict(freqs), total=total)


def subject_background(docs: Sequence[DocModel]) -> dict[str, float]:
    """Pooled word probabilities: sum of counts over sum of totals."""
    grand_total = sum(d.total for d in docs)
    if grand_total == 0:
        raise DegenerateInputError("subject background needs at least one non-empty document")
    pooled: Counter[str] = Counter()
    for d in docs:
        pooled.update(d.freqs)
    return {w: c / grand_total for w, c in sorted(pooled.items())}


def _mu_sums(docs: Sequence[DocModel], background: dict[str, float]) -> tuple[float, float]:
    numerator = 0.0
    denominator = 0.0
    for word in sorted(background):
        m_w = background[word]
        if m_w <= 0.0 or m_w >= 1.0:
            continue
        b_w = 0.0
        for d in docs:
            if d.total == 0:
                continue
            b_w += (d.freqs.get(word, 0) / d.total - m_w) ** 2
        spread = m_w * (1.0 - m_w)
        numerator += b_w / spread
        denominator += b_w * b_w / (spread * spread)
    return numerator, denominator


def estimate_mu(
    docs: Sequence[DocModel],
    background: dict[str, float],
    fallback: float = DEFAULT_FALLBACK_MU,
) -> float:
    """Smoothing constant from per-document probability variance.

    For each word w with background probability m_w strictly inside (0, 1),
    B_w is the sum over documents of (f(w|d)/T(d) - m_w)^2, and

        mu = sum(B_w / (m_w (1-m_w))) / sum(B_w^2 / (m_w^2 (1-m_w)^2)).

    Identical documents make every B_w zero; that undefined case returns
    ``fallback`` (callers flag it via ``SubjectModel.mu_fallback``).
    """
    if len(docs) < 2:
        raise DegenerateInputError("mu estimation needs at least two documents")
    numerator, denominator = _mu_sums(docs, background)
    if denominator == 0.0:
        return fallback
    return numerator / denominator


def build_subject_model(
    docs: Sequence[DocModel],
    fallback_mu: float = DEFAULT_FALLBACK_MU,
) -> SubjectModel:
    background = subject_background(docs)
    if len(docs) < 2:
        mu, fell_back = fallback_mu, True
    else:
        _, denominator = _mu_sums(docs, background)
        fell_back = denominator == 0.0
        mu = fallback_mu if fell_back else estimate_mu(docs, background, fallback_mu)
    return SubjectModel(
        background=background,
        mu=mu,
        doc_count=len(docs),
        vocab_size=len(background),
        mu_fallback=fell_back,
    )


def subject_model_from_articles(
    articles: Sequence[PreparedArticle],
    fallback_mu: float = DEFAULT_FALLBACK_MU,
) -> SubjectModel:
    docs = [doc_model(t for ts in article.tokens for t in ts.tokens) for article in articles]
    return build_subject_model(docs, fallback_mu)


def smoothed_prob(word: str, model: DocModel | PrefixModel, subject: SubjectModel) -> float:
    """Dirichlet-smoothed probability of ``word`` under ``model``."""
    prior = subject.background.get(word)
    if prior is None:
        raise OutOfVocabularyError(f"word {word!r} is not in the subject vocabulary")
    return (model.freqs.get(word, 0) + subject.mu * prior) / (model.total + subject.mu)


def kl_divergence(ideal: DocModel, seen: DocModel | PrefixModel, subject: SubjectModel) -> float:
    """Divergence of the seen prefix from the ideal model.

    Sums over the distinct words of the ideal document. Words missing from
    the subject background cannot be smoothed and are skipped; the
    prediction layer reports how many.
    """
    mu = subject.mu
    background = subject.background
    ideal_denom = ideal.total + mu
    seen_denom = seen.total + mu
    total = 0.0
    for word, count in ideal.freqs.items():
        prior = background.get(word, 0.0)
        if prior <= 0.0:
            continue
        q_ideal = (count + mu * prior) / ideal_denom
        q_seen = (seen.freqs.get(word, 0) + mu * prior) / seen_denom
        total += math.log(q_ideal / q_seen) * q_ideal
    return total


def kl_curve(
    sentences: Sequence[TokenizedSentence],
    ideal: DocModel,
    subject: SubjectModel,
    method: Method = Method.SLM_ARTICLE,
) -> ScoreCurve:
    """Per-prefix divergence from the ideal model, one value per sentence."""
    if len(sentences) < 3:
        raise DegenerateInputError("divergence curve needs at least 3 sentences")
    prefix = PrefixModel()
    values: list[float] = []
    for sentence in sentences:
        prefix.add_sentence(sentence)
        values.append(kl_divergence(ideal, prefix, subject))
    return ScoreCurve(method=method, values=values)


def jump_break(
    curve: ScoreCurve,
    sigma: float = DEFAULT_JUMP_SIGMA,
    article_id: str = "",
) -> BreakPoint:
    """First delta at least ``sigma`` standard deviations from the mean delta.

    Deltas are value[i+1] - value[i]; mean and population standard
    deviation are taken over all of them, but the first delta is never
    eligible as a jump. The threshold comparison allows a tiny relative
    tolerance so deviations that equal the threshold in exact arithmetic
    still count. With no qualifying delta the break falls back to the most
    extreme eligible delta; with zero delta variance it falls back to
    sentence 2.
    """
    values = curve.values
    m = len(values)
    if m < 3:
        raise DegenerateInputError("jump detection needs at least 3 sentences")
    deltas = [values[i + 1] - values[i] for i in range(m - 1)]
    mean = sum(deltas) / len(deltas)
    variance = sum((d - mean) ** 2 for d in deltas) / len(deltas)
    sd = math.sqrt(variance)
    diagnostics = {"delta_mean": mean, "delta_sd": sd}
    if sd == 0.0:
        return BreakPoint(
            article_id=article_id,
            sentence_index=2,
            method=curve.method,
            fallback=True,
            diagnostics={**diagnostics, "zero_variance": 1.0},
        )
    threshold = sigma * sd
    for i in range(2, m):
        deviation = abs(deltas[i - 1] - mean)
        if deviation >= threshold or math.isclose(deviation, threshold, rel_tol=1e-9):
            return BreakPoint(
                article_id=article_id,
                sentence_index=i,
                method=curve.method,
                fallback=False,
                diagnostics={**diagnostics, "jump_delta": deltas[i - 1]},
            )
    best = max(range(2, m), key=lambda i: abs(deltas[i - 1] - mean))
    return BreakPoint(
        article_id=article_id,
        sentence_index=best,
        method=curve.method,
        fallback=True,
        diagnostics={**diagnostics, "jump_delta": deltas[best - 1]},
    )


def article_ideal_model(article: PreparedArticle) -> DocModel:
    return doc_model(t for ts in article.tokens for t in ts.tokens)


def corpus_ideal_model(
    corpus: Corpus,
    cfg: FilterConfig | None = None,
    prepared: Sequence[PreparedArticle] | None = None,
) -> DocModel:
    """All corpus articles pooled into one ideal document."""
    articles = prepared if prepared is not None else prepare_articles(corpus.articles, cfg)
    return merge_models([article_ideal_model(a) for a in articles])


def predict_slm(
    article: PreparedArticle,
    context: Context,
    subject: SubjectModel,
    corpus: Corpus | None = None,
    *,
    cfg: FilterConfig | None = None,
    jump_sigma: float = DEFAULT_JUMP_SIGMA,
    ideal: DocModel | None = None,
) -> BreakPoint:
    """Language-model break for one article in article or corpus context.

    Corpus context pools the whole corpus into the ideal model; pass a
    precomputed ``ideal`` (from ``corpus_ideal_model``) to share it across
    articles.
    """
    if context is Context.ARTICLE:
        method = Method.SLM_ARTICLE
        if ideal is None:
            ideal = article_ideal_model(article)
    else:
        method = Method.SLM_CORPUS
        if ideal is None:
            if corpus is None:
                raise ValueError("corpus context requires a corpus")
            ideal = corpus_ideal_model(corpus, cfg)
    curve = kl_curve(article.tokens, ideal, subject, method)
    point = jump_break(curve, jump_sigma, article_id=article.article_id)
    oov = sum(1 for w in ideal.freqs if w not in subject.background)
    if oov:
        point.diagnostics["oov_ideal_words"] = float(oov)
    return point
