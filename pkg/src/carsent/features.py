"""The three feature sets: top unigrams, linguistic counts, tweet meta-data."""

from __future__ import annotations

import csv
import math
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np

from .corpus import Corpus, LabelScheme, binarize_labels
from .errors import ConfigError, DataError, EmptyCorpusError
from .textproc import (
    PosTag,
    TokenKind,
    TokenizedDoc,
    content_stems,
    count_emphatics,
    default_emphatic_lexicon,
    default_pos_lexicon,
    default_stopwords,
    extract_hashtags,
    _parse_lines,
    _read_data_text,
)
from . import topics


class FeatureSet(Enum):
    UNIGRAMS = "unigrams"
    LINGUISTIC = "linguistic"
    METADATA = "metadata"


class FeatureKind(Enum):
    BINARY = "binary"
    COUNT = "count"


@dataclass(frozen=True)
class FeatureSpec:
    name: str
    set: FeatureSet
    kind: FeatureKind


@dataclass
class FeatureMatrix:
    specs: list[FeatureSpec]
    rows: np.ndarray            # N x len(specs) float64
    labels: np.ndarray          # N class-name strings
    row_ids: list[str]

    @property
    def names(self) -> list[str]:
        return [s.name for s in self.specs]

    def subset(self, row_indices=None, col_indices=None) -> "FeatureMatrix":
        rows = self.rows
        labels = self.labels
        ids = self.row_ids
        if row_indices is not None:
            rows = rows[row_indices]
            labels = labels[row_indices]
            ids = [self.row_ids[i] for i in np.atleast_1d(row_indices)]
        specs = self.specs
        if col_indices is not None:
            rows = rows[:, col_indices]
            specs = [self.specs[i] for i in col_indices]
        return FeatureMatrix(specs, rows, labels, ids)

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(self.names + ["label"])
            for values, label in zip(self.rows, self.labels):
                writer.writerow([_format_value(v) for v in values] + [str(label)])

    def manifest(self) -> list[dict]:
        return [
            {"name": s.name, "set": s.set.value, "kind": s.kind.value}
            for s in self.specs
        ]


def _format_value(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def load_matrix_csv(path) -> FeatureMatrix:
    """Read back a matrix written by FeatureMatrix.to_csv.

    Column metadata is reconstructed from the namespaced feature names.
    """
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[-1] != "label":
            raise DataError(f"{path}: expected a trailing 'label' column")
        names = header[:-1]
        rows, labels = [], []
        for record in reader:
            rows.append([float(v) for v in record[:-1]])
            labels.append(record[-1])
    specs = [_spec_from_name(n) for n in names]
    matrix = np.array(rows, dtype=float) if rows else np.zeros((0, len(names)))
    return FeatureMatrix(specs, matrix, np.array(labels, dtype=object),
                         [str(i) for i in range(len(labels))])


def _spec_from_name(name: str) -> FeatureSpec:
    if name.startswith("uni:"):
        return FeatureSpec(name, FeatureSet.UNIGRAMS, FeatureKind.BINARY)
    if name.startswith("ling:"):
        return FeatureSpec(name, FeatureSet.LINGUISTIC, FeatureKind.COUNT)
    if name.startswith("meta:tag:") or name == "meta:retweet":
        return FeatureSpec(name, FeatureSet.METADATA, FeatureKind.BINARY)
    if name.startswith("meta:"):
        return FeatureSpec(name, FeatureSet.METADATA, FeatureKind.COUNT)
    raise DataError(f"feature name {name!r} has no recognised namespace")


# ---------------------------------------------------------------------------
# polarity lexicon


@dataclass
class PolarityLexicon:
    words: dict[str, int]
    overrides: dict[str, int] = field(default_factory=dict)

    def polarity(self, word: str) -> int:
        return self.words.get(word, 0)


def _parse_polarity_lines(text: str) -> dict[str, int]:
    out = {}
    for line in _parse_lines(text):
        word, _, value = line.partition("\t")
        value = value.strip()
        if value not in ("+1", "1", "0", "-1"):
            raise DataError(f"polarity value {value!r} for {word!r} not in +1/0/-1")
        out[word.strip().lower()] = int(value)
    return out


def load_polarity_lexicon(path=None, overrides_path=None,
                          neutral_words=None) -> PolarityLexicon:
    """Signed wordlist plus optional hashtag overrides.

    neutral_words extend the segmentation vocabulary with polarity 0;
    by default the bundled POS lexicon and stopwords are used.
    """
    if path is None:
        words = _parse_polarity_lines(_read_data_text("polarity.tsv"))
    else:
        with open(path, encoding="utf-8") as fh:
            words = _parse_polarity_lines(fh.read())
    if neutral_words is None:
        neutral_words = set(default_pos_lexicon()) | default_stopwords()
    for w in neutral_words:
        words.setdefault(w, 0)
    if overrides_path is None:
        overrides = _parse_polarity_lines(_read_data_text("hashtag_overrides.tsv"))
    else:
        with open(overrides_path, encoding="utf-8") as fh:
            overrides = _parse_polarity_lines(fh.read())
    return PolarityLexicon(words, overrides)


@lru_cache(maxsize=1)
def default_polarity_lexicon() -> PolarityLexicon:
    return load_polarity_lexicon()


def _segment(tag: str, vocab) -> list[str] | None:
    """Greedy longest-prefix-match split of a hashtag body."""
    parts = []
    i, n = 0, len(tag)
    while i < n:
        for j in range(n, i, -1):
            if tag[i:j] in vocab:
                parts.append(tag[i:j])
                i = j
                break
        else:
            return None
    return parts


def classify_hashtag(tag: str, lexicon: PolarityLexicon) -> int:
    """Polarity of a normalized hashtag: override hit, else the sign of
    the summed polarities of its greedy segmentation; 0 when unknown."""
    if tag in lexicon.overrides:
        return lexicon.overrides[tag]
    parts = _segment(tag, lexicon.words)
    if parts is None:
        return 0
    total = sum(lexicon.polarity(p) for p in parts)
    return (total > 0) - (total < 0)


# ---------------------------------------------------------------------------
# unigram block


def top_tfidf_unigrams(stem_docs: list[list[str]], n: int) -> list[str]:
    """Rank terms by summed tf*idf with idf = ln(N/df); ties by name."""
    if n < 1:
        raise ConfigError(f"n must be >= 1, got {n}")
    if not stem_docs:
        raise EmptyCorpusError("no documents for unigram selection")
    n_docs = len(stem_docs)
    tf = Counter()
    df = Counter()
    for doc in stem_docs:
        counts = Counter(doc)
        tf.update(counts)
        df.update(counts.keys())
    scored = [
        (term, tf[term] * math.log(n_docs / df[term]))
        for term in tf
    ]
    scored.sort(key=lambda item: (-item[1], item[0]))
    return [term for term, _ in scored[:n]]


def augment_with_topic_words(unigrams: list[str], pos_model, neg_model,
                             per_topic: int) -> list[str]:
    """Append each model's top topic words, skipping terms already present."""
    out = list(unigrams)
    seen = set(out)
    if per_topic < 1:
        return out
    for model in (pos_model, neg_model):
        if model is None:
            continue
        for k in range(model.n_topics):
            for term, _ in topics.top_words(model, k, per_topic):
                if term not in seen:
                    seen.add(term)
                    out.append(term)
    return out


def unigram_features(stems, terms: list[str]) -> np.ndarray:
    """Binary presence vector of `terms` over a document's stems."""
    present = set(stems)
    return np.array([1.0 if t in present else 0.0 for t in terms])


# ---------------------------------------------------------------------------
# linguistic block

LINGUISTIC_NAMES = ("noun", "verb", "adjective", "adverb", "emphatics",
                    "tweet_length")

_POS_ORDER = (PosTag.NOUN, PosTag.VERB, PosTag.ADJ, PosTag.ADV)


def linguistic_features(doc: TokenizedDoc, emphatic_lexicon=None,
                        length_unit: str = "tokens") -> np.ndarray:
    """POS counts over word tokens, emphatic count, tweet length."""
    counts = {tag: 0 for tag in _POS_ORDER}
    for t in doc.tokens:
        if t.kind is TokenKind.WORD and t.pos in counts:
            counts[t.pos] += 1
    if length_unit == "characters":
        length = sum(len(t.surface) for t in doc.tokens)
    else:
        length = len(doc.tokens)
    return np.array(
        [float(counts[tag]) for tag in _POS_ORDER]
        + [float(count_emphatics(doc, emphatic_lexicon)), float(length)]
    )


# ---------------------------------------------------------------------------
# meta-data block

META_FIELDS = (
    ("retweet", FeatureKind.BINARY),
    ("url_count", FeatureKind.COUNT),
    ("hashtag_pos", FeatureKind.COUNT),
    ("hashtag_neu", FeatureKind.COUNT),
    ("hashtag_neg", FeatureKind.COUNT),
    ("followers", FeatureKind.COUNT),
    ("followees", FeatureKind.COUNT),
)


def hashtag_vocab(docs, min_freq: int = 10) -> list[str]:
    """Hashtags frequent enough to earn their own presence feature."""
    counts = Counter()
    for doc in docs:
        counts.update(extract_hashtags(doc))
    frequent = [(tag, n) for tag, n in counts.items() if n >= min_freq]
    frequent.sort(key=lambda item: (-item[1], item[0]))
    return [tag for tag, _ in frequent]


def metadata_features(tweet, doc: TokenizedDoc, lexicon: PolarityLexicon,
                      tag_vocab: list[str]) -> np.ndarray:
    tags = extract_hashtags(doc)
    polar = Counter(classify_hashtag(t, lexicon) for t in tags)
    urls = sum(1 for t in doc.tokens if t.kind is TokenKind.URL)
    seen = set(tags)
    return np.array(
        [
            1.0 if tweet.is_retweet else 0.0,
            float(urls),
            float(polar[1]),
            float(polar[0]),
            float(polar[-1]),
            float(tweet.followers or 0),
            float(tweet.followees or 0),
        ]
        + [1.0 if tag in seen else 0.0 for tag in tag_vocab]
    )


# ---------------------------------------------------------------------------
# assembly


@dataclass
class FeatureConfig:
    """Inputs the featurizer needs beyond the corpus itself."""

    unigram_terms: list[str] = field(default_factory=list)
    stopwords: frozenset | None = None
    emphatic_lexicon: frozenset | None = None
    polarity_lexicon: PolarityLexicon | None = None
    min_tag_freq: int = 10
    length_unit: str = "tokens"


def assemble(corpus: Corpus, docs: list[TokenizedDoc], sets,
             scheme: LabelScheme, config: FeatureConfig) -> FeatureMatrix:
    """Build the labeled matrix for the requested feature sets.

    Column blocks are concatenated in the fixed order unigrams,
    linguistic, meta-data; rows follow corpus order.
    """
    sets = set(sets)
    if not sets:
        raise ConfigError("at least one feature set must be requested")
    if not corpus.tweets:
        raise EmptyCorpusError("cannot featurize an empty corpus")
    if len(docs) != len(corpus.tweets):
        raise ConfigError("docs and corpus are out of step")

    specs: list[FeatureSpec] = []
    blocks: list[np.ndarray] = []

    if FeatureSet.UNIGRAMS in sets:
        terms = list(config.unigram_terms)
        specs += [FeatureSpec(f"uni:{t}", FeatureSet.UNIGRAMS, FeatureKind.BINARY)
                  for t in terms]
        stems = [content_stems(doc, config.stopwords) for doc in docs]
        blocks.append(np.array([unigram_features(s, terms) for s in stems])
                      if terms else np.zeros((len(docs), 0)))

    if FeatureSet.LINGUISTIC in sets:
        specs += [FeatureSpec(f"ling:{n}", FeatureSet.LINGUISTIC, FeatureKind.COUNT)
                  for n in LINGUISTIC_NAMES]
        blocks.append(np.array([
            linguistic_features(doc, config.emphatic_lexicon, config.length_unit)
            for doc in docs
        ]))

    if FeatureSet.METADATA in sets:
        lexicon = config.polarity_lexicon or default_polarity_lexicon()
        tag_vocab = hashtag_vocab(docs, config.min_tag_freq)
        specs += [FeatureSpec(f"meta:{n}", FeatureSet.METADATA, kind)
                  for n, kind in META_FIELDS]
        specs += [FeatureSpec(f"meta:tag:{t}", FeatureSet.METADATA,
                              FeatureKind.BINARY) for t in tag_vocab]
        blocks.append(np.array([
            metadata_features(tweet, doc, lexicon, tag_vocab)
            for tweet, doc in zip(corpus.tweets, docs)
        ]))

    rows = np.hstack(blocks)
    labels = np.array(binarize_labels(corpus, scheme), dtype=object)
    return FeatureMatrix(specs, rows, labels, [t.id for t in corpus.tweets])
