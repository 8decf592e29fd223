import math
import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pagebreak.errors import DegenerateInputError, OutOfVocabularyError
from pagebreak.slm import (
    DEFAULT_FALLBACK_MU,
    DocModel,
    SubjectModel,
    build_subject_model,
    corpus_ideal_model,
    doc_model,
    estimate_mu,
    jump_break,
    kl_curve,
    kl_divergence,
    merge_models,
    predict_slm,
    smoothed_prob,
    subject_background,
    subject_model_from_articles,
)
from pagebreak.textproc import TokenizedSentence, prepare_articles
from pagebreak.types import Context, Method, ScoreCurve

from conftest import make_record
from pagebreak.corpus import Corpus


def toks(*token_lists):
    return [TokenizedSentence(sentence_index=i + 1, tokens=tuple(tokens))
            for i, tokens in enumerate(token_lists)]


class TestDocModel:
    def test_counts(self):
        model = doc_model(["a", "b", "a"])
        assert model.freqs == {"a": 2, "b": 1}
        assert model.total == 3

    def test_empty(self):
        model = doc_model([])
        assert model.total == 0
        assert model.freqs == {}

    def test_concatenation_equals_merge(self):
        left = ["a", "b", "a"]
        right = ["b", "c"]
        assert merge_models([doc_model(left), doc_model(right)]) == doc_model(left + right)


class TestSubjectBackground:
    def test_pooled_ratio(self):
        background = subject_background([doc_model(["a"]), doc_model(["a", "b", "b", "b"])])
        assert background == pytest.approx({"a": 2 / 5, "b": 3 / 5})

    def test_single_doc_equals_doc_probabilities(self):
        model = doc_model(["x", "x", "y"])
        background = subject_background([model])
        for word in model.freqs:
            assert background[word] == pytest.approx(model.probability(word))

    def test_random_docs_match_pooled_count_oracle(self):
        rng = random.Random(17)
        vocabulary = [f"w{i}" for i in range(12)]
        docs_tokens = [[rng.choice(vocabulary) for _ in range(rng.randint(1, 15))]
                       for _ in range(10)]
        background = subject_background([doc_model(t) for t in docs_tokens])
        pooled = Counter(t for tokens in docs_tokens for t in tokens)
        grand = sum(pooled.values())
        assert set(background) == set(pooled)
        for word, count in pooled.items():
            assert background[word] == pytest.approx(count / grand, abs=1e-15)
        assert sum(background.values()) == pytest.approx(1.0, abs=1e-9)

    def test_all_empty_docs_rejected(self):
        with pytest.raises(DegenerateInputError):
            subject_background([doc_model([]), doc_model([])])


def mu_oracle(docs_tokens):
    """Direct evaluation of the smoothing-constant formula from raw tokens."""
    pooled = Counter(t for tokens in docs_tokens for t in tokens)
    grand = sum(pooled.values())
    numerator = denominator = 0.0
    for word in sorted(pooled):
        m_w = pooled[word] / grand
        if not 0.0 < m_w < 1.0:
            continue
        b_w = sum((tokens.count(word) / len(tokens) - m_w) ** 2
                  for tokens in docs_tokens if tokens)
        spread = m_w * (1.0 - m_w)
        numerator += b_w / spread
        denominator += b_w ** 2 / spread ** 2
    return numerator / denominator if denominator else None


class TestEstimateMu:
    def test_identical_docs_fall_back(self):
        docs = [doc_model(["a", "b"]), doc_model(["a", "b"])]
        background = subject_background(docs)
        assert estimate_mu(docs, background) == DEFAULT_FALLBACK_MU == 2500.0

    def test_two_singleton_docs_hand_value(self):
        docs = [doc_model(["a"]), doc_model(["b"])]
        background = subject_background(docs)
        assert estimate_mu(docs, background) == pytest.approx(0.5, abs=1e-12)

    def test_random_corpora_match_direct_formula(self):
        rng = random.Random(29)
        for _ in range(20):
            vocabulary = [f"w{i}" for i in range(rng.randint(2, 20))]
            docs_tokens = [[rng.choice(vocabulary) for _ in range(rng.randint(1, 12))]
                           for _ in range(rng.randint(2, 10))]
            expected = mu_oracle(docs_tokens)
            docs = [doc_model(t) for t in docs_tokens]
            result = estimate_mu(docs, subject_background(docs))
            if expected is None:
                assert result == DEFAULT_FALLBACK_MU
            else:
                assert result == pytest.approx(expected, rel=1e-9)

    def test_needs_two_docs(self):
        with pytest.raises(DegenerateInputError):
            estimate_mu([doc_model(["a"])], {"a": 1.0})

    def test_build_subject_model_flags_fallback(self):
        docs = [doc_model(["a", "b"]), doc_model(["a", "b"])]
        model = build_subject_model(docs)
        assert model.mu == 2500.0
        assert model.mu_fallback is True
        varied = build_subject_model([doc_model(["a"]), doc_model(["b"])])
        assert varied.mu_fallback is False
        assert varied.vocab_size == 2
        assert varied.doc_count == 2


def subject_of(*docs_tokens, mu=None):
    docs = [doc_model(t) for t in docs_tokens]
    background = subject_background(docs)
    if mu is None:
        mu = estimate_mu(docs, background) if len(docs) > 1 else DEFAULT_FALLBACK_MU
    return SubjectModel(background=background, mu=mu, doc_count=len(docs),
                        vocab_size=len(background))


class TestSmoothedProb:
    def test_pure_prior_when_nothing_seen(self):
        subject = subject_of(["a", "a", "b"], mu=5.0)
        empty = doc_model([])
        assert smoothed_prob("a", empty, subject) == pytest.approx(subject.background["a"], rel=1e-12)

    def test_arithmetic_example(self):
        subject = SubjectModel(background={"w": 0.2, "v": 0.8}, mu=5.0, doc_count=1, vocab_size=2)
        model = DocModel(freqs={"w": 3, "v": 7}, total=10)
        assert smoothed_prob("w", model, subject) == pytest.approx(4 / 15, abs=1e-15)

    def test_distribution_sums_to_one(self):
        rng = random.Random(41)
        for _ in range(20):
            vocabulary = [f"w{i}" for i in range(rng.randint(2, 15))]
            docs_tokens = [[rng.choice(vocabulary) for _ in range(rng.randint(1, 10))]
                           for _ in range(rng.randint(2, 6))]
            subject = subject_of(*docs_tokens)
            model = doc_model(docs_tokens[0])
            total = sum(smoothed_prob(w, model, subject) for w in subject.background)
            assert total == pytest.approx(1.0, abs=1e-9)

    def test_out_of_vocabulary_word_rejected(self):
        subject = subject_of(["a", "b"], mu=1.0)
        with pytest.raises(OutOfVocabularyError):
            smoothed_prob("zebra", doc_model(["a"]), subject)


def kl_oracle(ideal_tokens, seen_tokens, background, mu):
    """Direct summation over the ideal document's distinct words."""
    ideal_freqs = Counter(ideal_tokens)
    seen_freqs = Counter(seen_tokens)
    total_ideal = len(ideal_tokens)
    total_seen = len(seen_tokens)
    value = 0.0
    for word in sorted(ideal_freqs):
        prior = background.get(word, 0.0)
        if prior <= 0.0:
            continue
        q_ideal = (ideal_freqs[word] + mu * prior) / (total_ideal + mu)
        q_seen = (seen_freqs[word] + mu * prior) / (total_seen + mu)
        value += math.log(q_ideal / q_seen) * q_ideal
    return value


class TestKlDivergence:
    def test_identical_models_give_zero(self):
        subject = subject_of(["a", "b", "b"], ["a", "c"], mu=3.0)
        model = doc_model(["a", "b", "b", "c"])
        assert kl_divergence(model, model, subject) == 0.0

    def test_single_word_vocabulary_is_zero(self):
        subject = subject_of(["a", "a"], mu=1.0)
        assert kl_divergence(doc_model(["a"]), doc_model([]), subject) == pytest.approx(0.0, abs=1e-15)

    def test_matches_direct_summation_oracle(self):
        rng = random.Random(59)
        for _ in range(30):
            vocabulary = [f"w{i}" for i in range(rng.randint(2, 12))]
            ideal_tokens = [rng.choice(vocabulary) for _ in range(rng.randint(3, 25))]
            prefix_length = rng.randint(0, len(ideal_tokens))
            seen_tokens = ideal_tokens[:prefix_length]
            subject = subject_of(ideal_tokens, [rng.choice(vocabulary) for _ in range(8)])
            result = kl_divergence(doc_model(ideal_tokens), doc_model(seen_tokens), subject)
            assert result == pytest.approx(
                kl_oracle(ideal_tokens, seen_tokens, subject.background, subject.mu), abs=1e-12)

    def test_prefix_divergence_is_non_negative(self):
        rng = random.Random(61)
        for _ in range(200):
            vocabulary = [f"w{i}" for i in range(rng.randint(2, 10))]
            ideal_tokens = [rng.choice(vocabulary) for _ in range(rng.randint(2, 30))]
            seen_tokens = ideal_tokens[: rng.randint(0, len(ideal_tokens))]
            subject = subject_of(ideal_tokens, [rng.choice(vocabulary) for _ in range(6)])
            assert kl_divergence(doc_model(ideal_tokens), doc_model(seen_tokens), subject) >= -1e-15


class TestKlCurve:
    def make_article_tokens(self, rng, sentence_count):
        vocabulary = [f"w{i}" for i in range(10)]
        return [[rng.choice(vocabulary) for _ in range(rng.randint(1, 6))]
                for _ in range(sentence_count)]

    def test_full_prefix_of_own_article_reaches_zero(self):
        rng = random.Random(67)
        token_lists = self.make_article_tokens(rng, 6)
        flat = [t for tokens in token_lists for t in tokens]
        subject = subject_of(flat, ["w0", "w1", "w2"])
        curve = kl_curve(toks(*token_lists), doc_model(flat), subject)
        assert len(curve) == 6
        assert curve.values[-1] == pytest.approx(0.0, abs=1e-12)

    def test_incremental_prefixes_equal_from_scratch(self):
        rng = random.Random(71)
        token_lists = self.make_article_tokens(rng, 8)
        flat = [t for tokens in token_lists for t in tokens]
        subject = subject_of(flat, ["w0", "w3"])
        ideal = doc_model(flat)
        curve = kl_curve(toks(*token_lists), ideal, subject)
        for i in range(1, len(token_lists) + 1):
            scratch = doc_model([t for tokens in token_lists[:i] for t in tokens])
            assert curve.values[i - 1] == kl_divergence(ideal, scratch, subject)

    def test_needs_three_sentences(self):
        subject = subject_of(["a", "b"], mu=1.0)
        with pytest.raises(DegenerateInputError):
            kl_curve(toks(["a"], ["b"]), doc_model(["a", "b"]), subject)


def curve_from_deltas(deltas, start=0.0, method=Method.SLM_ARTICLE):
    values = [start]
    for delta in deltas:
        values.append(values[-1] + delta)
    return ScoreCurve(method=method, values=values)


class TestJumpBreak:
    def test_hand_example_outlier_at_three(self):
        # deltas [-1,-1,-9,-1,-1]: mean -2.6, population sd 3.2, |d3-mean| = 6.4 = 2 sd
        point = jump_break(curve_from_deltas([-1.0, -1.0, -9.0, -1.0, -1.0]))
        assert point.sentence_index == 3
        assert point.fallback is False
        assert point.diagnostics["delta_mean"] == pytest.approx(-2.6)
        assert point.diagnostics["delta_sd"] == pytest.approx(3.2)

    def test_linear_curve_falls_back(self):
        point = jump_break(ScoreCurve(Method.SLM_ARTICLE, [1.0, 2.0, 3.0, 4.0, 5.0]))
        assert point.fallback is True
        assert point.sentence_index == 2

    def test_first_delta_jump_is_skipped(self):
        # the only outlier sits in the first delta, which is never eligible
        point = jump_break(curve_from_deltas([50.0, 1.0, 1.000001, 1.0, 0.999999, 1.0]))
        assert point.fallback is True
        assert point.sentence_index >= 2

    def test_planted_outliers_are_found(self):
        for position in (2, 3, 4, 5, 6):
            deltas = [1.0] * 7
            deltas[position - 1] = 9.0
            point = jump_break(curve_from_deltas(deltas))
            assert point.sentence_index == position
            assert point.fallback is False

    def test_translation_invariance(self):
        deltas = [0.5, 0.1, 3.0, 0.2, 0.4, 0.3]
        base = jump_break(curve_from_deltas(deltas, start=0.0))
        shifted = jump_break(curve_from_deltas(deltas, start=123.25))
        assert shifted.sentence_index == base.sentence_index
        assert shifted.fallback == base.fallback

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.integers(min_value=-100, max_value=100).map(float), min_size=2, max_size=30),
           st.integers(min_value=-1000, max_value=1000).map(float))
    def test_break_depends_only_on_deltas(self, deltas, offset):
        # integer-valued floats keep the reconstructed delta sequence exact
        base = jump_break(curve_from_deltas(deltas, start=0.0))
        values = [v + offset for v in curve_from_deltas(deltas, start=0.0).values]
        shifted = jump_break(ScoreCurve(Method.SLM_ARTICLE, values))
        assert shifted.sentence_index == base.sentence_index

    def test_sigma_is_configurable(self):
        # outlier at delta 3 sits between 1 and 2 standard deviations out
        deltas = [1.0, 1.5, 2.0, 0.5, 1.3, 0.7]
        strict = jump_break(curve_from_deltas(deltas), sigma=2.0)
        loose = jump_break(curve_from_deltas(deltas), sigma=1.0)
        assert loose.sentence_index == 3
        assert loose.fallback is False
        assert strict.fallback is True

    def test_too_short_curve_rejected(self):
        with pytest.raises(DegenerateInputError):
            jump_break(ScoreCurve(Method.SLM_ARTICLE, [1.0, 2.0]))


def tiny_corpus(*bodies, corpus_id="c1"):
    records = tuple(make_record(body, article_id=f"a{i+1}", corpus_id=corpus_id)
                    for i, body in enumerate(bodies))
    return Corpus(id=corpus_id, subject="sports", articles=records, accepted=True)


class TestPredictSlm:
    BODY = ("The keeper saved a penalty kick. The crowd sang about the keeper. "
            "A defender cleared the corner. The striker chased every ball. "
            "The coach praised the whole midfield.")

    OTHER = ("The referee booked the captain early. The captain argued loudly. "
             "The bench went very quiet. A substitute started to warm up. "
             "The fourth official finally intervened.")

    def test_single_sentence_article_is_an_error(self):
        corpus = tiny_corpus("One short sentence only.", self.OTHER)
        articles = prepare_articles(corpus.articles)
        subject = subject_model_from_articles(articles)
        with pytest.raises(DegenerateInputError):
            predict_slm(articles[0], Context.ARTICLE, subject)

    def test_single_article_corpus_contexts_agree(self):
        corpus = tiny_corpus(self.BODY)
        articles = prepare_articles(corpus.articles)
        subject = subject_model_from_articles(articles)
        by_article = predict_slm(articles[0], Context.ARTICLE, subject)
        by_corpus = predict_slm(articles[0], Context.CORPUS, subject, corpus)
        assert by_article.sentence_index == by_corpus.sentence_index
        assert by_article.method is Method.SLM_ARTICLE
        assert by_corpus.method is Method.SLM_CORPUS

    def test_corpus_context_requires_corpus(self):
        corpus = tiny_corpus(self.BODY)
        articles = prepare_articles(corpus.articles)
        subject = subject_model_from_articles(articles)
        with pytest.raises(ValueError):
            predict_slm(articles[0], Context.CORPUS, subject)

    def test_breaks_within_bounds(self):
        corpus = tiny_corpus(self.BODY, self.OTHER)
        articles = prepare_articles(corpus.articles)
        subject = subject_model_from_articles(articles)
        ideal = corpus_ideal_model(corpus, prepared=articles)
        for article in articles:
            for point in (predict_slm(article, Context.ARTICLE, subject),
                          predict_slm(article, Context.CORPUS, subject, corpus, ideal=ideal)):
                assert 1 <= point.sentence_index <= article.sentence_count
