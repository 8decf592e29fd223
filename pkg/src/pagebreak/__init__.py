"""Semantic lower-bound break point prediction for paginating articles."""

from .baselines import predict_baseline
from .corpus import (
    ArticleRecord,
    Corpus,
    SubjectSet,
    load_corpus,
    load_subject,
    write_corpus,
)
from .errors import (
    ConvergenceError,
    CorpusFormatError,
    DegenerateInputError,
    EmptyCorpusError,
    OutOfVocabularyError,
    PagebreakError,
    SubjectMismatchError,
    UndefinedStatisticError,
)
from .evaluation import (
    AgreementTable,
    AnnotationSet,
    RatingRecord,
    ReadabilityStats,
    agreement_table,
    load_annotations,
    load_ratings,
    one_way_anova,
    rating_bins,
    readability,
    spearman,
    t_test,
)
from .novelty import (
    corpus_keyword_weights,
    inflection_break,
    novelty_curve,
    predict_novelty,
)
from .slm import (
    DocModel,
    PrefixModel,
    SubjectModel,
    build_subject_model,
    doc_model,
    estimate_mu,
    jump_break,
    kl_curve,
    kl_divergence,
    predict_slm,
    smoothed_prob,
    subject_background,
)
from .svd import (
    KeywordWeights,
    SentenceWordMatrix,
    TruncatedSVD,
    build_matrix,
    keyword_weights,
    truncated_svd,
)
from .textproc import (
    FilterConfig,
    PreparedArticle,
    Sentence,
    TokenizedSentence,
    filter_tokens,
    load_noun_annotations,
    prepare_article,
    prepare_articles,
    split_paragraphs,
    split_sentences,
)
from .types import BreakPoint, Context, Method, ScoreCurve

__version__ = "0.1.0"
