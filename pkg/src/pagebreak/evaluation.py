"""Analysis machinery: readability, annotator agreement, rating histograms,
and permutation-based significance tests.

Readability uses a rule-based syllable counter (vowel groups, silent
final e, past-tense e), so values approximate rather than match any
particular third-party tool. Significance tests report permutation
p-values under an explicit seed instead of distribution lookups, with the
add-one estimator p = (1 + hits) / (1 + permutations).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DegenerateInputError, UndefinedStatisticError
from .textproc import PreparedArticle

DEFAULT_PERMUTATIONS = 10_000
DEFAULT_TOLERANCES = (0, 1, 2, 3)
DEFAULT_BIN_WIDTH = 0.05

_WORD_PATTERN = re.compile(r"[A-Za-z]+(?:['’][A-Za-z]+)*")
_VOWEL_GROUPS = re.compile(r"[aeiouy]+")


@dataclass(frozen=True)
class ReadabilityStats:
    grade_level: float
    reading_ease: float
    fog_index: float
    sentence_count: int
    word_count: int


def count_syllables(word: str) -> int:
    """Rule-based syllable count: vowel groups, minus silent endings, min 1."""
    w = re.sub(r"[^a-z]", "", word.lower())
    if not w:
        return 0
    count = len(_VOWEL_GROUPS.findall(w))
    if count > 1:
        if w.endswith("e") and not w.endswith(("le", "ee", "ye", "ue")):
            count -= 1
        elif w.endswith("ed") and not w.endswith(("ted", "ded")):
            count -= 1
    return max(count, 1)


def readability(article: PreparedArticle) -> ReadabilityStats:
    """Flesch-Kincaid grade, Flesch reading ease, and Gunning fog index."""
    sentence_count = article.sentence_count
    words = [w for s in article.sentences for w in _WORD_PATTERN.findall(s.text)]
    if sentence_count < 1 or not words:
        raise DegenerateInputError("readability needs at least one sentence and one word")
    word_count = len(words)
    syllables = [count_syllables(w) for w in words]
    syllable_count = sum(syllables)
    complex_count = sum(1 for s in syllables if s >= 3)
    words_per_sentence = word_count / sentence_count
    syllables_per_word = syllable_count / word_count
    return ReadabilityStats(
        grade_level=0.39 * words_per_sentence + 11.8 * syllables_per_word - 15.59,
        reading_ease=206.835 - 1.015 * words_per_sentence - 84.6 * syllables_per_word,
        fog_index=0.4 * (words_per_sentence + 100.0 * complex_count / word_count),
        sentence_count=sentence_count,
        word_count=word_count,
    )


@dataclass(frozen=True)
class AnnotationSet:
    """Break-point picks for one article, one per annotator (1-based)."""

    article_id: str
    picks: tuple[int, ...]


def load_annotations(path: str | Path) -> list[AnnotationSet]:
    """Read ``article_id,pick1,...,pickN`` lines."""
    sets: list[AnnotationSet] = []
    with Path(path).open(encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) < 3:
                raise ValueError(f"{path}:{line_number}: need an article id and at least 2 picks")
            try:
                picks = tuple(int(p) for p in parts[1:])
            except ValueError as exc:
                raise ValueError(f"{path}:{line_number}: non-integer pick") from exc
            sets.append(AnnotationSet(article_id=parts[0], picks=picks))
    return sets


def max_agreement(picks: Sequence[int], tolerance: int) -> int:
    """Size of the largest pick subset whose spread (max - min) <= tolerance."""
    ordered = sorted(picks)
    best = 1
    left = 0
    for right in range(len(ordered)):
        while ordered[right] - ordered[left] > tolerance:
            left += 1
        best = max(best, right - left + 1)
    return best


@dataclass(frozen=True)
class AgreementTable:
    """Article counts per (tolerance, max-agreement level); level 1 means none."""

    tolerances: tuple[int, ...]
    levels: tuple[int, ...]
    counts: tuple[tuple[int, ...], ...]

    def row(self, tolerance: int) -> tuple[int, ...]:
        return self.counts[self.tolerances.index(tolerance)]


def agreement_table(
    annotations: Sequence[AnnotationSet],
    tolerances: Sequence[int] = DEFAULT_TOLERANCES,
) -> AgreementTable:
    if not annotations:
        raise DegenerateInputError("agreement table needs at least one annotation set")
    for annotation in annotations:
        if len(annotation.picks) < 2:
            raise ValueError(f"article {annotation.article_id!r}: need at least 2 picks")
        if any(p < 1 for p in annotation.picks):
            raise ValueError(f"article {annotation.article_id!r}: picks must be 1-based sentence indices")
    max_level = max(len(a.picks) for a in annotations)
    levels = tuple(range(1, max_level + 1))
    counts: list[tuple[int, ...]] = []
    for tolerance in tolerances:
        row = [0] * max_level
        for annotation in annotations:
            row[max_agreement(annotation.picks, tolerance) - 1] += 1
        counts.append(tuple(row))
    return AgreementTable(tolerances=tuple(tolerances), levels=levels, counts=tuple(counts))


class RatingClass(Enum):
    TOO_SHORT = "too-short"
    BALANCED = "balanced"
    TOO_LONG = "too-long"


def rating_class(rating: int) -> RatingClass:
    """7-point scale: 1-3 cut too early, 4 balanced, 5-7 kept too much."""
    if rating <= 3:
        return RatingClass.TOO_SHORT
    if rating == 4:
        return RatingClass.BALANCED
    return RatingClass.TOO_LONG


@dataclass(frozen=True)
class RatingRecord:
    article_id: str
    method: str
    rating: int
    break_position_fraction: float


def load_ratings(path: str | Path) -> list[RatingRecord]:
    """Read ``article_id,method,rating,break_position_fraction`` lines."""
    records: list[RatingRecord] = []
    with Path(path).open(encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 4:
                raise ValueError(f"{path}:{line_number}: expected 4 comma-separated fields")
            try:
                rating = int(parts[2])
                fraction = float(parts[3])
            except ValueError as exc:
                raise ValueError(f"{path}:{line_number}: bad rating or position") from exc
            if not 1 <= rating <= 7:
                raise ValueError(f"{path}:{line_number}: rating {rating} outside 1..7")
            if not 0.0 <= fraction <= 1.0:
                raise ValueError(f"{path}:{line_number}: position {fraction} outside [0, 1]")
            records.append(RatingRecord(parts[0], parts[1], rating, fraction))
    return records


@dataclass(frozen=True)
class RatingHistogram:
    """Per-class break-position histogram over document-fraction bins."""

    bin_width: float
    counts: dict[RatingClass, tuple[int, ...]]
    fractions: dict[RatingClass, tuple[float, ...]]

    @property
    def bin_count(self) -> int:
        return len(next(iter(self.counts.values())))


def rating_bins(
    records: Sequence[RatingRecord],
    bin_width_fraction: float = DEFAULT_BIN_WIDTH,
) -> RatingHistogram:
    """Bin break positions by document fraction, normalized within each class."""
    if not records:
        raise DegenerateInputError("rating histogram needs at least one record")
    if not 0.0 < bin_width_fraction <= 1.0:
        raise ValueError("bin width must be in (0, 1]")
    n_bins = math.ceil(1.0 / bin_width_fraction - 1e-9)
    counts = {cls: [0] * n_bins for cls in RatingClass}
    for record in records:
        index = min(int(record.break_position_fraction / bin_width_fraction), n_bins - 1)
        counts[rating_class(record.rating)][index] += 1
    fractions: dict[RatingClass, tuple[float, ...]] = {}
    for cls, row in counts.items():
        total = sum(row)
        fractions[cls] = tuple(c / total for c in row) if total else tuple(0.0 for _ in row)
    return RatingHistogram(
        bin_width=bin_width_fraction,
        counts={cls: tuple(row) for cls, row in counts.items()},
        fractions=fractions,
    )


class AnovaResult(NamedTuple):
    f: float
    df_between: int
    df_within: int
    p: float


class TTestResult(NamedTuple):
    t: float
    df: int
    p: float


def _f_statistic(groups: list[np.ndarray]) -> tuple[float, int, int]:
    all_values = np.concatenate(groups)
    grand_mean = all_values.mean()
    ss_between = sum(len(g) * (g.mean() - grand_mean) ** 2 for g in groups)
    ss_within = sum(float(((g - g.mean()) ** 2).sum()) for g in groups)
    df_between = len(groups) - 1
    df_within = len(all_values) - len(groups)
    if ss_within == 0.0:
        if ss_between == 0.0:
            raise UndefinedStatisticError("all values identical: F statistic undefined")
        return math.inf, df_between, df_within
    return (ss_between / df_between) / (ss_within / df_within), df_between, df_within


def one_way_anova(
    groups: Sequence[Sequence[float]],
    permutations: int = DEFAULT_PERMUTATIONS,
    seed: int = 0,
) -> AnovaResult:
    """Classical one-way F statistic with a permutation p-value."""
    if len(groups) < 2 or any(len(g) < 2 for g in groups):
        raise ValueError("need at least 2 groups with at least 2 values each")
    arrays = [np.asarray(g, dtype=float) for g in groups]
    f_obs, df_between, df_within = _f_statistic(arrays)
    pooled = np.concatenate(arrays)
    sizes = [len(g) for g in arrays]
    rng = np.random.default_rng(seed)
    hits = 0
    for _ in range(permutations):
        shuffled = rng.permutation(pooled)
        pieces = np.split(shuffled, np.cumsum(sizes)[:-1])
        try:
            f_perm, _, _ = _f_statistic(pieces)
        except UndefinedStatisticError:
            continue
        if f_perm >= f_obs:
            hits += 1
    return AnovaResult(f=f_obs, df_between=df_between, df_within=df_within,
                       p=(1 + hits) / (1 + permutations))


def _t_statistic(a: np.ndarray, b: np.ndarray, strict: bool) -> float:
    n_a, n_b = len(a), len(b)
    mean_diff = float(a.mean() - b.mean())
    pooled_var = (float(((a - a.mean()) ** 2).sum()) + float(((b - b.mean()) ** 2).sum())) / (n_a + n_b - 2)
    if pooled_var == 0.0:
        if mean_diff == 0.0:
            return 0.0
        if strict:
            raise UndefinedStatisticError("zero pooled variance with unequal means")
        return math.copysign(math.inf, mean_diff)
    return mean_diff / math.sqrt(pooled_var * (1.0 / n_a + 1.0 / n_b))


def t_test(
    a: Sequence[float],
    b: Sequence[float],
    permutations: int = DEFAULT_PERMUTATIONS,
    seed: int = 0,
) -> TTestResult:
    """Two-sample pooled-variance t statistic with a two-sided permutation p."""
    if len(a) < 2 or len(b) < 2:
        raise ValueError("need at least 2 values per sample")
    x = np.asarray(a, dtype=float)
    y = np.asarray(b, dtype=float)
    t_obs = _t_statistic(x, y, strict=True)
    pooled = np.concatenate([x, y])
    rng = np.random.default_rng(seed)
    hits = 0
    for _ in range(permutations):
        shuffled = rng.permutation(pooled)
        t_perm = _t_statistic(shuffled[: len(x)], shuffled[len(x):], strict=False)
        if abs(t_perm) >= abs(t_obs):
            hits += 1
    return TTestResult(t=t_obs, df=len(x) + len(y) - 2, p=(1 + hits) / (1 + permutations))


def _average_ranks(values: Sequence[float]) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    order = np.argsort(arr, kind="stable")
    ranks = np.empty(len(arr))
    i = 0
    while i < len(arr):
        j = i
        while j + 1 < len(arr) and arr[order[j + 1]] == arr[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def spearman(x: Sequence[float], y: Sequence[float]) -> float:
    """Rank correlation with average ranks for ties."""
    if len(x) != len(y):
        raise ValueError("inputs must have equal length")
    if len(x) < 3:
        raise ValueError("need at least 3 paired values")
    rx = _average_ranks(x)
    ry = _average_ranks(y)
    dx = rx - rx.mean()
    dy = ry - ry.mean()
    denom = math.sqrt(float((dx * dx).sum()) * float((dy * dy).sum()))
    if denom == 0.0:
        raise UndefinedStatisticError("constant input: rank correlation undefined")
    return float((dx * dy).sum()) / denom
