"""Paragraph and sentence segmentation plus token filtering.

The sentence splitter is rule-based: a sentence ends at ``. ! ?`` (plus
trailing closing quotes/brackets) followed by whitespace and an
upper-case letter, digit, or opening quote, unless the word before the
period is a known abbreviation or a single-letter initial. Paragraph
boundaries always end the current sentence. The token filter lowercases,
strips punctuation, drops stopwords and short tokens, and removes plural
suffixes with a small rule set; an optional per-sentence noun annotation
map restricts tokens further.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .corpus import ArticleRecord

DEFAULT_STOPWORDS = frozenset("""
a about above across after again against all almost along also although am among an and any are arent around as at
be because been before behind being below beneath beside between beyond both but by
can cannot cant could couldnt
despite did didnt do does doesnt doing done dont down during
each either else ever every except
few for from further
had hadnt has hasnt have havent having he her here hers herself him himself his how however
i if in inside into is isnt it its itself
just
like
many may me might more most much must mustnt my myself
near neither never no nor not now
of off on once one only onto or other ought our ours ourselves out outside over own
per
quite
rather
same shall shant she should shouldnt since so some such
than that the their theirs them themselves then there these they this those through throughout till to too toward towards
under until unto up upon us
very via
was wasnt we were werent what when where whether which while who whom whose why will with within without wont would wouldnt
yet you your yours yourself yourselves
""".split())

# Known abbreviations that do not end a sentence, stored with their period.
ABBREVIATIONS = frozenset(
    abbr + "." for abbr in """
mr mrs ms dr prof sr jr st mt ft no nos vol vols fig figs
vs etc al ca cf eg ie
inc ltd co corp dept est
gen sen rep gov capt lt col maj sgt rev hon pres supt det adm cmdr
ave blvd rd hwy
jan feb mar apr jun jul aug sep sept oct nov dec
u.s u.k u.n a.m p.m e.g i.e ph.d d.c b.c a.d
""".split()
)

_SENTENCE_TERMINALS = ".!?"
_TRAILING_CLOSERS = "\"'”’)]»"
_SENTENCE_OPENERS = "\"'“‘([«"

_PARAGRAPH_SPLIT = re.compile(r"\n\s*\n")
_TOKEN_PATTERN = re.compile(r"[a-z0-9]+")


@dataclass(frozen=True)
class Sentence:
    """A sentence in document order; ``index`` is 1-based across the article."""

    index: int
    text: str
    char_count: int
    paragraph_index: int


@dataclass(frozen=True)
class TokenizedSentence:
    """Filtered lowercase tokens for one sentence."""

    sentence_index: int
    tokens: tuple[str, ...]


@dataclass(frozen=True)
class FilterConfig:
    """Token filter settings.

    ``pos_annotations`` maps a sentence index to the nouns an external
    tagger found there; when present for a sentence, only those tokens
    survive. Tokens in the map are normalized through the same
    lowercase-and-singularize rules before matching.
    """

    stopword_list: frozenset[str] = DEFAULT_STOPWORDS
    min_token_length: int = 2
    pos_annotations: dict[int, frozenset[str]] | None = None


def split_paragraphs(body: str) -> list[str]:
    """Split a body on blank lines into non-empty paragraph blocks."""
    return [block.strip() for block in _PARAGRAPH_SPLIT.split(body) if block.strip()]


def _is_sentence_opener(ch: str) -> bool:
    return ch.isupper() or ch.isdigit() or ch in _SENTENCE_OPENERS


def _word_before(text: str, period_index: int) -> str:
    # Walk back over letters and internal periods ("U.S" for "U.S.").
    end = period_index
    start = end
    while start > 0 and (text[start - 1].isalpha() or text[start - 1] == "."):
        start -= 1
    return text[start:end].lstrip(".")


def _abbreviation_before(text: str, period_index: int) -> bool:
    word = _word_before(text, period_index)
    if not word:
        return False
    if len(word) == 1 and word.isalpha():
        return True
    return (word.lower() + ".") in ABBREVIATIONS


def _split_paragraph_sentences(paragraph: str) -> list[str]:
    sentences: list[str] = []
    start = 0
    i = 0
    n = len(paragraph)
    while i < n:
        if paragraph[i] not in _SENTENCE_TERMINALS:
            i += 1
            continue
        terminal = i
        j = i + 1
        while j < n and paragraph[j] in _SENTENCE_TERMINALS:
            j += 1
        while j < n and paragraph[j] in _TRAILING_CLOSERS:
            j += 1
        if j >= n:
            i = j
            continue
        if not paragraph[j].isspace():
            i = j
            continue
        k = j
        while k < n and paragraph[k].isspace():
            k += 1
        if k < n and _is_sentence_opener(paragraph[k]) and not (
            paragraph[terminal] == "." and _abbreviation_before(paragraph, terminal)
        ):
            sentences.append(paragraph[start:j])
            start = k
            i = k
        else:
            i = j
    tail = paragraph[start:]
    if tail.strip():
        sentences.append(tail)
    return [s.strip() for s in sentences if s.strip()]


def split_sentences(body: str) -> list[Sentence]:
    """Segment a body into sentences with global 1-based indices."""
    sentences: list[Sentence] = []
    index = 1
    for paragraph_index, paragraph in enumerate(split_paragraphs(body), start=1):
        for text in _split_paragraph_sentences(paragraph):
            sentences.append(
                Sentence(index=index, text=text, char_count=len(text), paragraph_index=paragraph_index)
            )
            index += 1
    return sentences


def singularize(token: str) -> str:
    """Strip common plural suffixes; idempotent by construction."""
    if len(token) <= 3 or token.endswith(("ss", "us", "is")):
        return token
    if token.endswith("ies") and len(token) > 4:
        return token[:-3] + "y"
    if token.endswith("es") and (token[-3] in "sxz" or token.endswith(("ches", "shes"))):
        return token[:-2]
    if token.endswith("s"):
        return token[:-1]
    return token


def filter_tokens(sentence: Sentence, cfg: FilterConfig | None = None) -> TokenizedSentence:
    """Reduce a sentence to lowercase, singularized, information-carrying tokens."""
    cfg = cfg or FilterConfig()
    text = sentence.text.lower().replace("'", "").replace("’", "")
    out: list[str] = []
    for raw in _TOKEN_PATTERN.findall(text):
        if len(raw) < cfg.min_token_length or raw in cfg.stopword_list:
            continue
        token = singularize(raw)
        if len(token) < cfg.min_token_length or token in cfg.stopword_list:
            continue
        out.append(token)
    if cfg.pos_annotations is not None:
        nouns = cfg.pos_annotations.get(sentence.index)
        if nouns is not None:
            allowed = {singularize(n.lower()) for n in nouns}
            out = [t for t in out if t in allowed]
    return TokenizedSentence(sentence_index=sentence.index, tokens=tuple(out))


def load_noun_annotations(path: str | Path) -> dict[int, frozenset[str]]:
    """Read a noun-annotation sidecar: ``sentence_index<TAB>token token ...``."""
    annotations: dict[int, frozenset[str]] = {}
    with Path(path).open(encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            index_part, _, tokens_part = line.partition("\t")
            try:
                index = int(index_part)
            except ValueError as exc:
                raise ValueError(f"{path}:{line_number}: bad sentence index {index_part!r}") from exc
            annotations[index] = frozenset(tokens_part.split())
    return annotations


@dataclass(frozen=True)
class PreparedArticle:
    """An article after segmentation and token filtering, ready for scoring."""

    article_id: str
    sentences: tuple[Sentence, ...]
    tokens: tuple[TokenizedSentence, ...]

    @property
    def sentence_count(self) -> int:
        return len(self.sentences)


def prepare_article(record: ArticleRecord, cfg: FilterConfig | None = None) -> PreparedArticle:
    cfg = cfg or FilterConfig()
    sentences = tuple(split_sentences(record.body))
    tokens = tuple(filter_tokens(s, cfg) for s in sentences)
    return PreparedArticle(article_id=record.id, sentences=sentences, tokens=tokens)


def prepare_articles(records, cfg: FilterConfig | None = None) -> list[PreparedArticle]:
    cfg = cfg or FilterConfig()
    return [prepare_article(r, cfg) for r in records]
