"""Content-agnostic break-point baselines.

One sentence and two sentences mirror preview snippets on news sites; one
paragraph mirrors paywall teasers; twenty percent takes the smallest
paragraph-final sentence whose cumulative character count reaches a fifth
of the article (character counts include intra-sentence whitespace and
exclude the blank separator lines).
"""

from __future__ import annotations

from .errors import DegenerateInputError
from .textproc import PreparedArticle
from .types import BASELINE_METHODS, BreakPoint, Method

DEFAULT_FRACTION = 0.20


def _paragraph_final_indices(article: PreparedArticle) -> list[int]:
    finals: list[int] = []
    for sentence in article.sentences:
        if finals and article.sentences[sentence.index - 2].paragraph_index == sentence.paragraph_index:
            finals[-1] = sentence.index
        else:
            finals.append(sentence.index)
    return finals


def predict_baseline(
    article: PreparedArticle,
    kind: Method,
    *,
    fraction: float = DEFAULT_FRACTION,
) -> BreakPoint:
    if kind not in BASELINE_METHODS:
        raise ValueError(f"{kind.value} is not a baseline method")
    m = article.sentence_count
    if m < 1:
        raise DegenerateInputError("baseline prediction needs at least one sentence")
    if kind is Method.ONE_SENTENCE:
        index = 1
    elif kind is Method.TWO_SENTENCES:
        index = min(2, m)
    elif kind is Method.ONE_PARAGRAPH:
        index = _paragraph_final_indices(article)[0]
    else:
        total = sum(s.char_count for s in article.sentences)
        threshold = fraction * total
        cumulative = 0.0
        index = m
        finals = set(_paragraph_final_indices(article))
        for sentence in article.sentences:
            cumulative += sentence.char_count
            if sentence.index in finals and cumulative >= threshold:
                index = sentence.index
                break
    return BreakPoint(article_id=article.article_id, sentence_index=index, method=kind)
