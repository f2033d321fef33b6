"""Command-line pipeline: stats, topics, evaluate, attributes, train, predict."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import evaluate, features, forest, select, topics, wordcloud
from .config import PipelineConfig, apply_setting, config_help, load_config
from .corpus import (
    ColumnMapping,
    Corpus,
    LabelScheme,
    binarize_labels,
    load_csv,
    split_polar,
    stats_dict,
)
from .errors import ConfigError, DataError, PipelineError
from .evaluate import SelectionConfig
from .features import FeatureConfig, FeatureSet
from .forest import ForestParams
from .textproc import (
    content_stems,
    load_pos_lexicon,
    load_wordlist,
    pos_tag,
    tokenize,
)

COMBO_TOKENS = {"U": FeatureSet.UNIGRAMS, "L": FeatureSet.LINGUISTIC,
                "M": FeatureSet.METADATA}
DEFAULT_COMBOS = ("U", "U,L", "L,M", "U,L,M")
_COMBO_LABELS = {"U": "unigrams", "L": "linguistic", "M": "metadata"}


def parse_combo(token: str) -> tuple[str, set[FeatureSet]]:
    """'U,L' -> canonical name + feature-set selection."""
    parts = [p.strip().upper() for p in token.split(",") if p.strip()]
    if not parts:
        raise ConfigError(f"empty feature combination {token!r}")
    sets = set()
    for p in parts:
        if p not in COMBO_TOKENS:
            raise ConfigError(
                f"unknown feature-set token {p!r} (expected U, L or M)")
        sets.add(COMBO_TOKENS[p])
    canonical = "+".join(_COMBO_LABELS[t] for t in "ULM" if COMBO_TOKENS[t] in sets)
    return canonical, sets


def _mapping(cfg: PipelineConfig) -> ColumnMapping:
    return ColumnMapping(
        sentiment=cfg.sentiment_col, text=cfg.text_col, tweet_id=cfg.id_col,
        retweet=cfg.retweet_col, followers=cfg.followers_col,
        followees=cfg.followees_col, non_relevant=cfg.non_relevant,
    )


def _load_corpus(cfg: PipelineConfig) -> Corpus:
    if not cfg.dataset:
        raise ConfigError("no dataset configured (use --dataset or the config file)")
    return load_csv(cfg.dataset, _mapping(cfg))


def _scheme(cfg: PipelineConfig) -> LabelScheme:
    try:
        return LabelScheme(cfg.scheme)
    except ValueError:
        raise ConfigError(f"unknown label scheme {cfg.scheme!r}") from None


def _resources(cfg: PipelineConfig) -> dict:
    return {
        "stopwords": load_wordlist(cfg.stopwords_file) if cfg.stopwords_file else None,
        "emphatics": load_wordlist(cfg.emphatic_file) if cfg.emphatic_file else None,
        "pos_lexicon": load_pos_lexicon(cfg.pos_lexicon_file)
        if cfg.pos_lexicon_file else None,
        "polarity": features.load_polarity_lexicon(
            cfg.polarity_file or None, cfg.hashtag_overrides_file or None),
    }


def _forest_params(cfg: PipelineConfig) -> ForestParams:
    return ForestParams(
        n_trees=cfg.trees,
        m_try=cfg.m_try if cfg.m_try > 0 else None,
        criterion=cfg.criterion,
        min_leaf=cfg.min_leaf,
        max_depth=cfg.max_depth if cfg.max_depth > 0 else None,
        bootstrap=cfg.bootstrap,
        seed=cfg.forest_seed,
        n_jobs=cfg.n_jobs,
    )


def _selection(cfg: PipelineConfig) -> SelectionConfig:
    return SelectionConfig(
        mode=cfg.selection_mode,
        threshold=cfg.selection_threshold,
        k=cfg.selection_k if cfg.selection_k > 0 else None,
        global_fit=cfg.selection_global,
    )


def _outdir(cfg: PipelineConfig) -> Path:
    out = Path(cfg.outdir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_json(path: Path, payload) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


def _tokenize_corpus(corpus: Corpus, res: dict, tag: bool) -> list:
    docs = [tokenize(t.text, t.id) for t in corpus.tweets]
    if tag:
        docs = [replace(doc, tokens=pos_tag(doc.tokens, res["pos_lexicon"]))
                for doc in docs]
    return docs


def _fit_split_models(corpus: Corpus, cfg: PipelineConfig, res: dict):
    """LDA over the positive and negative splits; None for an empty split."""
    positive, negative = split_polar(corpus)
    models = []
    for name, split in (("positive", positive), ("negative", negative)):
        if not split.tweets:
            print(f"warning: {name} split is empty, skipping", file=sys.stderr)
            models.append(None)
            continue
        docs = [tokenize(t.text, t.id) for t in split.tweets]
        stems = [content_stems(d, res["stopwords"]) for d in docs]
        models.append(topics.fit(
            stems, cfg.lda_topics, cfg.effective_alpha, cfg.lda_beta,
            cfg.lda_iters, cfg.lda_seed,
        ))
    return models


def _unigram_terms(corpus, docs, cfg: PipelineConfig, res: dict) -> list[str]:
    stems = [content_stems(d, res["stopwords"]) for d in docs]
    terms = features.top_tfidf_unigrams(stems, cfg.n_unigrams)
    if cfg.per_topic > 0:
        pos_model, neg_model = _fit_split_models(corpus, cfg, res)
        terms = features.augment_with_topic_words(
            terms, pos_model, neg_model, cfg.per_topic)
    return terms


def _feature_config(cfg: PipelineConfig, res: dict, terms) -> FeatureConfig:
    return FeatureConfig(
        unigram_terms=list(terms),
        stopwords=res["stopwords"],
        emphatic_lexicon=res["emphatics"],
        polarity_lexicon=res["polarity"],
        min_tag_freq=cfg.min_tag_freq,
        length_unit=cfg.length_unit,
    )


# ---------------------------------------------------------------------------
# commands


def cmd_stats(cfg: PipelineConfig) -> int:
    corpus = _load_corpus(cfg)
    payload = stats_dict(corpus)
    _write_json(_outdir(cfg) / "corpus_stats.json", payload)
    print(json.dumps(payload, sort_keys=True))
    return 0


def cmd_topics(cfg: PipelineConfig) -> int:
    corpus = _load_corpus(cfg)
    res = _resources(cfg)
    out = _outdir(cfg)
    models = _fit_split_models(corpus, cfg, res)
    for name, model in zip(("positive", "negative"), models):
        if model is None:
            continue
        _write_json(out / f"topics_{name}.json",
                    topics.export_dict(model, cfg.cloud_words))
        words = wordcloud.merge_topic_words(model, cfg.cloud_words)
        svg = wordcloud.render_svg(words, cfg.cloud_width,
                                   cfg.min_font, cfg.max_font)
        (out / f"wordcloud_{name}.svg").write_text(svg, encoding="utf-8")
        print(f"wrote topics_{name}.json and wordcloud_{name}.svg")
    return 0


def _metrics_row(name: str, report: evaluate.EvalReport) -> dict:
    return {
        "combination": name,
        "precision": report.weighted.precision,
        "recall": report.weighted.recall,
        "f1": report.weighted.f1,
        "accuracy_pct": report.accuracy * 100.0,
    }


def _format_table(rows: list[dict]) -> str:
    width = max(len(r["combination"]) for r in rows) + 2
    header = (f"{'combination':<{width}}"
              f"{'Precision':>10}{'Recall':>10}{'F-Measure':>11}{'Accuracy(%)':>13}")
    lines = [header, "-" * len(header)]
    for r in rows:
        lines.append(
            f"{r['combination']:<{width}}"
            f"{r['precision']:>10.3f}{r['recall']:>10.3f}"
            f"{r['f1']:>11.3f}{r['accuracy_pct']:>13.2f}"
        )
    return "\n".join(lines) + "\n"


def cmd_evaluate(cfg: PipelineConfig, combos) -> int:
    parsed = [parse_combo(c) for c in combos]
    corpus = _load_corpus(cfg)
    res = _resources(cfg)
    out = _outdir(cfg)
    scheme = _scheme(cfg)
    docs = _tokenize_corpus(corpus, res, tag=True)
    needs_unigrams = any(FeatureSet.UNIGRAMS in sets for _, sets in parsed)
    terms = _unigram_terms(corpus, docs, cfg, res) if needs_unigrams else []
    fc = _feature_config(cfg, res, terms)
    params = _forest_params(cfg)
    selection = _selection(cfg)

    rows = []
    reports = []
    # flush partial results after every combination
    try:
        for name, sets in parsed:
            matrix = features.assemble(corpus, docs, sets, scheme, fc)
            report = evaluate.cross_validate(matrix, params, cfg.cv_folds,
                                             cfg.cv_seed, selection)
            rows.append(_metrics_row(name, report))
            reports.append({"combination": name, **report.to_dict()})
            _write_json(out / "results.json", reports)
            print(f"{name}: accuracy {report.accuracy:.4f}")
    finally:
        if reports:
            _write_json(out / "results.json", reports)
    baseline = evaluate.majority_baseline_report(binarize_labels(corpus, scheme))
    rows.append(_metrics_row("majority-class", baseline))
    reports.append({"combination": "majority-class", **baseline.to_dict()})
    _write_json(out / "results.json", reports)
    table = _format_table(rows)
    (out / "results.txt").write_text(table, encoding="utf-8")
    print(table, end="")
    return 0


def cmd_attributes(cfg: PipelineConfig, combo: str) -> int:
    name, sets = parse_combo(combo)
    corpus = _load_corpus(cfg)
    res = _resources(cfg)
    out = _outdir(cfg)
    docs = _tokenize_corpus(corpus, res, tag=True)
    terms = (_unigram_terms(corpus, docs, cfg, res)
             if FeatureSet.UNIGRAMS in sets else [])
    matrix = features.assemble(corpus, docs, sets, _scheme(cfg),
                               _feature_config(cfg, res, terms))
    ranked = select.rank_features(matrix)
    payload = {"combination": name,
               "top_attributes": select.ranking_report(ranked, top=10)}
    _write_json(out / "attributes.json", payload)
    print(json.dumps(payload, indent=2, sort_keys=True))
    return 0


def cmd_train(cfg: PipelineConfig, combo: str, model_out: str,
              features_out: str | None) -> int:
    _, sets = parse_combo(combo)
    corpus = _load_corpus(cfg)
    res = _resources(cfg)
    docs = _tokenize_corpus(corpus, res, tag=True)
    terms = (_unigram_terms(corpus, docs, cfg, res)
             if FeatureSet.UNIGRAMS in sets else [])
    matrix = features.assemble(corpus, docs, sets, _scheme(cfg),
                               _feature_config(cfg, res, terms))
    selection = _selection(cfg)
    if selection.mode != "none":
        cols = evaluate.select_columns(matrix, selection)
        matrix = matrix.subset(col_indices=cols)
    model = forest.train(matrix, _forest_params(cfg))
    forest.save_model(model, model_out)
    if features_out:
        matrix.to_csv(features_out)
    print(f"trained {model.params.n_trees} trees on "
          f"{matrix.rows.shape[0]} rows x {matrix.rows.shape[1]} features "
          f"-> {model_out}")
    return 0


def cmd_predict(model_path: str, features_path: str, output: str | None) -> int:
    model = forest.load_model(model_path)
    matrix = features.load_matrix_csv(features_path)
    predicted = forest.predict_batch(model, matrix)
    payload = {"predictions": predicted}
    if output:
        _write_json(Path(output), payload)
    print(json.dumps(payload))
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="carsent",
        description="Topic extraction and sentiment classification for the "
                    "annotated self-driving-car tweet corpus.",
        epilog=config_help(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="flat key=value configuration file")
        p.add_argument("--dataset", help="annotated tweet CSV")
        p.add_argument("--outdir", help="output directory")
        p.add_argument("--seed", type=int,
                       help="override every RNG seed (LDA, forest, CV)")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override any configuration key")

    common(sub.add_parser("stats", help="corpus size, label histogram, majority rate"))
    common(sub.add_parser("topics", help="LDA topics + word clouds for the polar splits"))
    p_eval = sub.add_parser("evaluate", help="cross-validated results table")
    common(p_eval)
    p_eval.add_argument("--combos", nargs="+", default=list(DEFAULT_COMBOS),
                        help="feature combinations, e.g. U U,L L,M U,L,M")
    p_attr = sub.add_parser("attributes", help="top attributes by information gain")
    common(p_attr)
    p_attr.add_argument("--combo", default="U,L,M",
                        help="feature combination to rank")
    p_train = sub.add_parser("train", help="train a forest and serialize it")
    common(p_train)
    p_train.add_argument("--combo", default="U,L,M")
    p_train.add_argument("--model-out", default="model.json")
    p_train.add_argument("--features-out",
                         help="also write the assembled feature matrix CSV")
    p_pred = sub.add_parser("predict", help="classify a serialized feature matrix")
    p_pred.add_argument("--model", required=True)
    p_pred.add_argument("--features", required=True,
                        help="feature matrix CSV (as written by train/--features-out)")
    p_pred.add_argument("--output", help="write predictions JSON here")
    return parser


def _config_from_args(args) -> PipelineConfig:
    cfg = load_config(args.config) if args.config else PipelineConfig()
    if args.dataset:
        cfg.dataset = args.dataset
    if args.outdir:
        cfg.outdir = args.outdir
    for setting in args.set:
        key, sep, value = setting.partition("=")
        if not sep:
            raise ConfigError(f"--set expects KEY=VALUE, got {setting!r}")
        apply_setting(cfg, key.strip(), value)
    if args.seed is not None:
        cfg.lda_seed = cfg.forest_seed = cfg.cv_seed = args.seed
    return cfg


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "predict":
            return cmd_predict(args.model, args.features, args.output)
        cfg = _config_from_args(args)
        if args.command == "stats":
            return cmd_stats(cfg)
        if args.command == "topics":
            return cmd_topics(cfg)
        if args.command == "evaluate":
            return cmd_evaluate(cfg, args.combos)
        if args.command == "attributes":
            return cmd_attributes(cfg, args.combo)
        if args.command == "train":
            return cmd_train(cfg, args.combo, args.model_out, args.features_out)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except PipelineError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
