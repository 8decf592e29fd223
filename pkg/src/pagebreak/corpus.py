"""Loading, validation, and persistence of article corpora.

Storage format is one JSON object per line (UTF-8) with keys exactly
``id``, ``corpus_id``, ``subject``, ``title``, ``body``. Paragraphs inside
``body`` are separated by blank lines. Corpus files are named
``<corpus_id>.jsonl`` and live inside a ``<subject>/`` directory.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import CorpusFormatError, EmptyCorpusError, SubjectMismatchError

DEFAULT_MIN_ARTICLES = 50

_RECORD_KEYS = ("id", "corpus_id", "subject", "title", "body")


@dataclass(frozen=True)
class ArticleRecord:
    """One article as stored on disk."""

    id: str
    corpus_id: str
    subject: str
    title: str
    body: str


@dataclass(frozen=True)
class Corpus:
    """A collection of articles on one topic.

    ``accepted`` records whether the corpus met the unique-article
    threshold at load time. ``duplicates`` counts records dropped because
    an earlier record claimed the same id; it is diagnostic only and does
    not participate in equality.
    """

    id: str
    subject: str
    articles: tuple[ArticleRecord, ...]
    accepted: bool
    duplicates: int = field(default=0, compare=False)

    def article(self, article_id: str) -> ArticleRecord:
        for record in self.articles:
            if record.id == article_id:
                return record
        raise KeyError(article_id)


@dataclass(frozen=True)
class SubjectSet:
    """All corpora loaded for one subject label.

    Unaccepted corpora are retained (their ``accepted`` flag is False) so
    callers can report on them; prediction code works from
    ``accepted_corpuses``.
    """

    subject: str
    corpuses: tuple[Corpus, ...]

    @property
    def accepted_corpuses(self) -> tuple[Corpus, ...]:
        return tuple(c for c in self.corpuses if c.accepted)

    def corpus_count(self) -> int:
        return len(self.corpuses)

    def article_count(self) -> int:
        return sum(len(c.articles) for c in self.corpuses)


def is_accepted(unique_article_count: int, min_articles: int) -> bool:
    """Corpus acceptance rule: at least ``min_articles`` unique articles."""
    return unique_article_count >= min_articles


def _parse_record(path: str, line_number: int, line: str) -> ArticleRecord:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise CorpusFormatError(path, line_number, f"invalid JSON: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise CorpusFormatError(path, line_number, "record is not an object")
    missing = [k for k in _RECORD_KEYS if k not in obj]
    if missing:
        raise CorpusFormatError(path, line_number, f"missing keys: {', '.join(missing)}")
    extra = [k for k in obj if k not in _RECORD_KEYS]
    if extra:
        raise CorpusFormatError(path, line_number, f"unexpected keys: {', '.join(sorted(extra))}")
    for key in _RECORD_KEYS:
        if not isinstance(obj[key], str):
            raise CorpusFormatError(path, line_number, f"field {key!r} must be a string")
    if not obj["id"]:
        raise CorpusFormatError(path, line_number, "empty article id")
    if not obj["body"].strip():
        raise CorpusFormatError(path, line_number, "body has no non-whitespace content")
    return ArticleRecord(
        id=obj["id"],
        corpus_id=obj["corpus_id"],
        subject=obj["subject"],
        title=obj["title"],
        body=obj["body"],
    )


def load_corpus(path: str | Path, min_articles: int = DEFAULT_MIN_ARTICLES) -> Corpus:
    """Load one corpus file, dropping duplicate article ids (first wins).

    Raises ``OSError`` for unreadable files, ``CorpusFormatError`` naming
    the offending line for malformed records, and ``EmptyCorpusError``
    when the file holds no records at all.
    """
    path = Path(path)
    records: list[ArticleRecord] = []
    seen: set[str] = set()
    duplicates = 0
    with path.open(encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            if not line.strip():
                raise CorpusFormatError(str(path), line_number, "blank line")
            record = _parse_record(str(path), line_number, line)
            if records:
                first = records[0]
                if record.corpus_id != first.corpus_id:
                    raise CorpusFormatError(
                        str(path), line_number,
                        f"corpus_id {record.corpus_id!r} differs from {first.corpus_id!r}")
                if record.subject != first.subject:
                    raise CorpusFormatError(
                        str(path), line_number,
                        f"subject {record.subject!r} differs from {first.subject!r}")
            if record.id in seen:
                duplicates += 1
                continue
            seen.add(record.id)
            records.append(record)
    if not records:
        raise EmptyCorpusError(f"{path}: corpus file holds no articles")
    return Corpus(
        id=records[0].corpus_id,
        subject=records[0].subject,
        articles=tuple(records),
        accepted=is_accepted(len(records), min_articles),
        duplicates=duplicates,
    )


def write_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write a corpus back to its line-delimited form (one record per line)."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as handle:
        for record in corpus.articles:
            obj = {
                "id": record.id,
                "corpus_id": record.corpus_id,
                "subject": record.subject,
                "title": record.title,
                "body": record.body,
            }
            handle.write(json.dumps(obj, ensure_ascii=False))
            handle.write("\n")


def load_subject(directory: str | Path, min_articles: int = DEFAULT_MIN_ARTICLES) -> SubjectSet:
    """Load every ``*.jsonl`` corpus in a subject directory.

    All corpora must carry the same subject label; a mismatch raises
    ``SubjectMismatchError`` listing which file claimed which subject.
    """
    directory = Path(directory)
    files = sorted(directory.glob("*.jsonl"))
    if not files:
        raise EmptyCorpusError(f"{directory}: no corpus files (*.jsonl) found")
    corpuses = [load_corpus(f, min_articles) for f in files]
    by_subject: dict[str, list[str]] = {}
    for f, c in zip(files, corpuses):
        by_subject.setdefault(c.subject, []).append(f.name)
    if len(by_subject) > 1:
        detail = "; ".join(f"{subj}: {', '.join(names)}" for subj, names in sorted(by_subject.items()))
        raise SubjectMismatchError(f"{directory}: mixed subject labels ({detail})", by_subject)
    return SubjectSet(subject=corpuses[0].subject, corpuses=tuple(corpuses))
