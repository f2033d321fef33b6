"""Pipeline configuration: flat key=value file with CLI overrides."""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path

from .errors import ConfigError

_DOC = {
    "dataset": "path to the annotated tweet CSV",
    "sentiment_col": "CSV column holding the 1-5 label / non-relevant marker",
    "text_col": "CSV column holding the tweet text",
    "id_col": "optional CSV id column (empty: row numbers)",
    "retweet_col": "optional CSV retweet-flag column (empty: 'RT @' prefix)",
    "followers_col": "optional CSV follower-count column",
    "followees_col": "optional CSV followee-count column",
    "non_relevant": "sentiment-cell marker for rows to drop",
    "scheme": "label scheme: five | three",
    "stopwords_file": "stopword list path (empty: bundled)",
    "pos_lexicon_file": "POS lexicon TSV path (empty: bundled)",
    "emphatic_file": "emphatic wordlist path (empty: bundled)",
    "polarity_file": "polarity wordlist TSV path (empty: bundled)",
    "hashtag_overrides_file": "hashtag polarity override TSV (empty: bundled)",
    "lda_topics": "number of LDA topics per polarity split",
    "lda_alpha": "doc-topic prior (<=0: use 50/K)",
    "lda_beta": "topic-word prior",
    "lda_iters": "Gibbs sweeps",
    "lda_seed": "LDA RNG seed",
    "n_unigrams": "size of the top tf-idf unigram list",
    "per_topic": "topic words appended per topic (0: skip topic models)",
    "min_tag_freq": "corpus frequency for a hashtag to get its own feature",
    "length_unit": "tweet_length unit: tokens | characters",
    "trees": "forest size",
    "m_try": "features drawn per split (0: floor(log2(m)) + 1)",
    "criterion": "split criterion: info_gain | gini",
    "min_leaf": "minimum rows per leaf",
    "max_depth": "depth cap (0: unlimited)",
    "bootstrap": "bagging on/off",
    "forest_seed": "forest RNG seed",
    "n_jobs": "parallel tree-training threads",
    "cv_folds": "cross-validation folds",
    "cv_seed": "fold-assignment RNG seed",
    "selection_mode": "feature selection: threshold | top_k | none",
    "selection_threshold": "keep features with gain above this (threshold mode)",
    "selection_k": "features kept in top_k mode",
    "selection_global": "fit selection once on the full matrix (fidelity mode)",
    "cloud_width": "word-cloud canvas width in px",
    "min_font": "word-cloud minimum font size",
    "max_font": "word-cloud maximum font size",
    "cloud_words": "words per topic shown in clouds / topic exports",
    "outdir": "directory for all command outputs",
}


@dataclass
class PipelineConfig:
    dataset: str = ""
    sentiment_col: str = "sentiment"
    text_col: str = "text"
    id_col: str = ""
    retweet_col: str = ""
    followers_col: str = ""
    followees_col: str = ""
    non_relevant: str = "not_relevant"
    scheme: str = "five"
    stopwords_file: str = ""
    pos_lexicon_file: str = ""
    emphatic_file: str = ""
    polarity_file: str = ""
    hashtag_overrides_file: str = ""
    lda_topics: int = 10
    lda_alpha: float = 0.0
    lda_beta: float = 0.01
    lda_iters: int = 1000
    lda_seed: int = 42
    n_unigrams: int = 100
    per_topic: int = 10
    min_tag_freq: int = 10
    length_unit: str = "tokens"
    trees: int = 100
    m_try: int = 0
    criterion: str = "info_gain"
    min_leaf: int = 1
    max_depth: int = 0
    bootstrap: bool = True
    forest_seed: int = 42
    n_jobs: int = 1
    cv_folds: int = 10
    cv_seed: int = 42
    selection_mode: str = "threshold"
    selection_threshold: float = 0.0
    selection_k: int = 0
    selection_global: bool = False
    cloud_width: int = 800
    min_font: int = 12
    max_font: int = 48
    cloud_words: int = 10
    outdir: str = "out"

    @property
    def effective_alpha(self) -> float:
        return self.lda_alpha if self.lda_alpha > 0 else 50.0 / self.lda_topics


_FIELD_TYPES = {f.name: f.type for f in fields(PipelineConfig)}


def _coerce(key: str, raw: str):
    kind = _FIELD_TYPES[key]
    raw = raw.strip()
    if kind == "bool":
        if raw.lower() in ("1", "true", "yes", "on"):
            return True
        if raw.lower() in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"{key}: expected a boolean, got {raw!r}")
    try:
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
    except ValueError:
        raise ConfigError(f"{key}: expected a {kind}, got {raw!r}") from None
    return raw


def apply_setting(config: PipelineConfig, key: str, raw: str) -> None:
    if key not in _FIELD_TYPES:
        raise ConfigError(f"unknown configuration key {key!r}")
    setattr(config, key, _coerce(key, raw))


def load_config(path) -> PipelineConfig:
    """Parse a flat `key = value` file; '#' lines are comments."""
    config = PipelineConfig()
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        apply_setting(config, key.strip(), value)
    return config


def config_help() -> str:
    lines = ["configuration keys (file or --set key=value):"]
    defaults = PipelineConfig()
    for f in fields(PipelineConfig):
        lines.append(f"  {f.name:<22} {_DOC[f.name]} [default: {getattr(defaults, f.name)!r}]")
    return "\n".join(lines)
