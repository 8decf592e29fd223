"""Command-line front end: ingest, predict, curve, stats, eval.

Exit codes: 0 success, 1 usage error, 2 data error. Output is
all-or-nothing: nothing is printed until a command has fully succeeded,
so transcripts are stable and byte-identical for fixed inputs and seed.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from statistics import mean, pstdev

from .baselines import predict_baseline
from .config import RunConfig, config_from_environment
from .corpus import Corpus, load_corpus, load_subject
from .errors import PagebreakError
from .evaluation import (
    load_annotations,
    load_ratings,
    agreement_table,
    one_way_anova,
    readability,
    spearman,
    t_test,
)
from .novelty import (
    article_keyword_weights,
    corpus_keyword_weights,
    novelty_curve,
    predict_novelty,
)
from .slm import (
    article_ideal_model,
    corpus_ideal_model,
    kl_curve,
    predict_slm,
    subject_model_from_articles,
)
from .textproc import FilterConfig, PreparedArticle, prepare_articles
from .types import CURVE_METHODS, Context, Method

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _add_data_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--subject-dir", help="directory of corpus files for one subject")
    parser.add_argument("--corpus", help="path to a single corpus file")
    parser.add_argument("--min-articles", type=int, help="unique articles needed to accept a corpus")


def _add_model_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--svd-k", type=int, help="number of singular components")
    parser.add_argument("--keyword-cap", type=int, help="keyword weights retained")
    parser.add_argument("--twenty-percent-fraction", type=float, help="character fraction for the length baseline")
    parser.add_argument("--jump-sigma", type=float, help="standard deviations defining a divergence jump")


def build_parser() -> _Parser:
    parser = _Parser(prog="pagebreak", description="Semantic lower-bound break points for article pagination")
    sub = parser.add_subparsers(dest="command", required=True)

    ingest = sub.add_parser("ingest", help="load and validate corpus files")
    _add_data_flags(ingest)
    ingest.add_argument("--out", help="write output to a file instead of stdout")

    predict = sub.add_parser("predict", help="predict break points for every article")
    predict.add_argument("--method", required=True, metavar="METHOD",
                         help="one of: " + ", ".join(m.value for m in Method))
    _add_data_flags(predict)
    _add_model_flags(predict)
    predict.add_argument("--out")

    curve = sub.add_parser("curve", help="export the score curve of one article as CSV")
    curve.add_argument("--method", required=True, metavar="METHOD",
                       help="one of: " + ", ".join(m.value for m in CURVE_METHODS))
    curve.add_argument("--article", required=True, help="article id")
    _add_data_flags(curve)
    _add_model_flags(curve)
    curve.add_argument("--out")

    stats = sub.add_parser("stats", help="readability statistics per article")
    _add_data_flags(stats)
    stats.add_argument("--out")

    evaluate = sub.add_parser("eval", help="analyze rating and annotation files")
    evaluate.add_argument("--annotations", help="annotation file: article_id,pick1,...,pickN")
    evaluate.add_argument("--ratings", help="rating file: article_id,method,rating,break_position_fraction")
    _add_data_flags(evaluate)
    evaluate.add_argument("--seed", type=int, help="seed for permutation tests")
    evaluate.add_argument("--out")

    return parser


def _merge_config(args: argparse.Namespace) -> RunConfig:
    config = RunConfig()
    try:
        overrides = config_from_environment()
    except (ValueError, OSError) as exc:
        raise _UsageError(str(exc)) from exc
    if overrides:
        config = replace(config, **overrides)
    for name in ("method", "subject_dir", "corpus", "min_articles", "svd_k", "keyword_cap",
                 "twenty_percent_fraction", "jump_sigma", "seed", "out"):
        value = getattr(args, name, None)
        if value is not None:
            config = replace(config, **{name: value})
    try:
        config.validate()
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc
    return config


def _load_corpora(config: RunConfig) -> list[Corpus]:
    if config.corpus and config.subject_dir:
        raise _UsageError("give either --corpus or --subject-dir, not both")
    if config.corpus:
        return [load_corpus(config.corpus, config.min_articles)]
    if config.subject_dir:
        subject_set = load_subject(config.subject_dir, config.min_articles)
        accepted = list(subject_set.accepted_corpuses)
        if not accepted:
            raise PagebreakError(f"{config.subject_dir}: no corpus meets the {config.min_articles}-article threshold")
        return accepted
    raise _UsageError("one of --corpus or --subject-dir is required")


def _prepare(corpora: list[Corpus], cfg: FilterConfig) -> list[tuple[Corpus, list[PreparedArticle]]]:
    return [(corpus, prepare_articles(corpus.articles, cfg)) for corpus in corpora]


def _parse_method(flag: str, allowed=tuple(Method)) -> Method:
    try:
        method = Method.from_flag(flag)
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc
    if method not in allowed:
        raise _UsageError(f"method {flag!r} is not valid here")
    return method


def cmd_ingest(config: RunConfig) -> str:
    corpora: list[Corpus]
    if config.corpus:
        corpora = [load_corpus(config.corpus, config.min_articles)]
    elif config.subject_dir:
        corpora = list(load_subject(config.subject_dir, config.min_articles).corpuses)
    else:
        raise _UsageError("one of --corpus or --subject-dir is required")
    lines = ["corpus_id\tsubject\tarticles\tduplicates\taccepted"]
    for corpus in sorted(corpora, key=lambda c: c.id):
        lines.append(
            f"{corpus.id}\t{corpus.subject}\t{len(corpus.articles)}"
            f"\t{corpus.duplicates}\t{str(corpus.accepted).lower()}"
        )
    return "\n".join(lines) + "\n"


def _predict_corpus(
    corpus: Corpus,
    articles: list[PreparedArticle],
    method: Method,
    config: RunConfig,
    subject_model,
    cfg: FilterConfig,
):
    if method.is_baseline:
        return [predict_baseline(a, method, fraction=config.twenty_percent_fraction) for a in articles]
    if method is Method.NOVELTY_ARTICLE:
        return [predict_novelty(a, Context.ARTICLE, svd_k=config.svd_k, keyword_cap=config.keyword_cap)
                for a in articles]
    if method is Method.NOVELTY_CORPUS:
        if not corpus.accepted:
            raise PagebreakError(f"corpus {corpus.id!r} is not accepted; corpus-context methods need an accepted corpus")
        weights = corpus_keyword_weights(corpus, cfg, config.svd_k, config.keyword_cap, prepared=articles)
        return [predict_novelty(a, Context.CORPUS, corpus, weights=weights) for a in articles]
    if method is Method.SLM_ARTICLE:
        return [predict_slm(a, Context.ARTICLE, subject_model, jump_sigma=config.jump_sigma) for a in articles]
    ideal = corpus_ideal_model(corpus, cfg, prepared=articles)
    return [predict_slm(a, Context.CORPUS, subject_model, corpus, jump_sigma=config.jump_sigma, ideal=ideal)
            for a in articles]


def cmd_predict(config: RunConfig) -> str:
    method = _parse_method(config.method or "")
    cfg = FilterConfig()
    prepared = _prepare(_load_corpora(config), cfg)
    subject_model = None
    if method in (Method.SLM_ARTICLE, Method.SLM_CORPUS):
        all_articles = [a for _, articles in prepared for a in articles]
        subject_model = subject_model_from_articles(all_articles)
    points = []
    for corpus, articles in prepared:
        points.extend(_predict_corpus(corpus, articles, method, config, subject_model, cfg))
    points.sort(key=lambda p: p.article_id)
    lines = [f"{p.article_id}\t{p.method.value}\t{p.sentence_index}\t{str(p.fallback).lower()}" for p in points]
    return "\n".join(lines) + "\n"


def cmd_curve(config: RunConfig, article_id: str) -> str:
    method = _parse_method(config.method or "", allowed=CURVE_METHODS)
    cfg = FilterConfig()
    prepared = _prepare(_load_corpora(config), cfg)
    target = None
    home = None
    home_articles = None
    for corpus, articles in prepared:
        for article in articles:
            if article.article_id == article_id:
                target, home, home_articles = article, corpus, articles
                break
        if target is not None:
            break
    if target is None:
        raise PagebreakError(f"article {article_id!r} not found")
    if method is Method.NOVELTY_ARTICLE:
        curve = novelty_curve(target.tokens, article_keyword_weights(target, config.svd_k, config.keyword_cap), method)
    elif method is Method.NOVELTY_CORPUS:
        weights = corpus_keyword_weights(home, cfg, config.svd_k, config.keyword_cap, prepared=home_articles)
        curve = novelty_curve(target.tokens, weights, method)
    else:
        all_articles = [a for _, articles in prepared for a in articles]
        subject_model = subject_model_from_articles(all_articles)
        if method is Method.SLM_ARTICLE:
            ideal = article_ideal_model(target)
        else:
            ideal = corpus_ideal_model(home, cfg, prepared=home_articles)
        curve = kl_curve(target.tokens, ideal, subject_model, method)
    lines = ["sentence_index,value"]
    lines.extend(f"{i},{value!r}" for i, value in enumerate(curve.values, start=1))
    return "\n".join(lines) + "\n"


def cmd_stats(config: RunConfig) -> str:
    cfg = FilterConfig()
    prepared = _prepare(_load_corpora(config), cfg)
    rows = []
    for _, articles in prepared:
        for article in articles:
            stats = readability(article)
            rows.append((article.article_id, stats))
    rows.sort(key=lambda r: r[0])
    lines = ["article_id\tgrade_level\treading_ease\tfog_index\tsentences\twords"]
    for article_id, stats in rows:
        lines.append(
            f"{article_id}\t{stats.grade_level:.4f}\t{stats.reading_ease:.4f}"
            f"\t{stats.fog_index:.4f}\t{stats.sentence_count}\t{stats.word_count}"
        )
    return "\n".join(lines) + "\n"


def _format_table(headers: list[str], rows: list[list[str]]) -> list[str]:
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    def fmt(cells: list[str]) -> str:
        first = cells[0].ljust(widths[0])
        rest = [cell.rjust(widths[i + 1]) for i, cell in enumerate(cells[1:])]
        return "  ".join([first, *rest]).rstrip()
    return [fmt(headers)] + [fmt(row) for row in rows]


def cmd_eval(config: RunConfig, annotations_path: str | None, ratings_path: str | None) -> str:
    if not annotations_path and not ratings_path:
        raise _UsageError("eval needs --annotations and/or --ratings")
    sections: list[str] = []

    if annotations_path:
        table = agreement_table(load_annotations(annotations_path))
        headers = ["tolerance"] + [str(level) for level in table.levels]
        rows = [[str(t)] + [str(c) for c in table.row(t)] for t in table.tolerances]
        sections.append("\n".join(["Annotator agreement (articles per max-agreement level)"]
                                  + _format_table(headers, rows)))

    if ratings_path:
        records = load_ratings(ratings_path)
        by_method: dict[str, list[float]] = {}
        for record in records:
            by_method.setdefault(record.method, []).append(float(record.rating))
        methods = sorted(by_method)

        rows = [[m, str(len(by_method[m])), f"{mean(by_method[m]):.4f}", f"{pstdev(by_method[m]):.4f}"]
                for m in methods]
        sections.append("\n".join(["Rating summary"] + _format_table(["method", "n", "mean", "sd"], rows)))

        testable = [m for m in methods if len(by_method[m]) >= 2]
        if len(testable) >= 2:
            result = one_way_anova([by_method[m] for m in testable], seed=config.seed)
            sections.append(
                f"ANOVA across methods: F={result.f:.6f} "
                f"df=({result.df_between}, {result.df_within}) p={result.p:.6f}"
            )
            pair_rows = []
            for i, method_a in enumerate(testable):
                for method_b in testable[i + 1:]:
                    result = t_test(by_method[method_a], by_method[method_b], seed=config.seed)
                    pair_rows.append([method_a, method_b, f"{result.t:.6f}", str(result.df), f"{result.p:.6f}"])
            sections.append("\n".join(["Pairwise t-tests"]
                                      + _format_table(["method_a", "method_b", "t", "df", "p"], pair_rows)))

        if config.corpus or config.subject_dir:
            sections.append(_readability_correlations(config, records, methods))

    return "\n\n".join(sections) + "\n"


def _readability_correlations(config: RunConfig, records, methods: list[str]) -> str:
    cfg = FilterConfig()
    prepared = _prepare(_load_corpora(config), cfg)
    stats_by_article = {}
    for _, articles in prepared:
        for article in articles:
            stats_by_article[article.article_id] = readability(article)
    rows = []
    for method in methods:
        ratings_by_article: dict[str, list[float]] = {}
        for record in records:
            if record.method == method and record.article_id in stats_by_article:
                ratings_by_article.setdefault(record.article_id, []).append(float(record.rating))
        ids = sorted(ratings_by_article)
        if len(ids) < 3:
            continue
        ratings = [mean(ratings_by_article[i]) for i in ids]
        for stat_name in ("grade_level", "reading_ease", "fog_index"):
            values = [getattr(stats_by_article[i], stat_name) for i in ids]
            try:
                rho = spearman(ratings, values)
            except PagebreakError:
                continue
            rows.append([method, stat_name, f"{rho:.6f}"])
    return "\n".join(["Rank correlation of ratings with readability"]
                     + _format_table(["method", "statistic", "rho"], rows))


def _dispatch(args: argparse.Namespace, config: RunConfig) -> str:
    if args.command == "ingest":
        return cmd_ingest(config)
    if args.command == "predict":
        return cmd_predict(config)
    if args.command == "curve":
        return cmd_curve(config, args.article)
    if args.command == "stats":
        return cmd_stats(config)
    return cmd_eval(config, args.annotations, args.ratings)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        config = _merge_config(args)
        output = _dispatch(args, config)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PagebreakError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    if config.out:
        with open(config.out, "w", encoding="utf-8") as handle:
            handle.write(output)
    else:
        sys.stdout.write(output)
    return EXIT_OK


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
