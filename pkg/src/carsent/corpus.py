"""Ingest the annotated tweet CSV, filter non-relevant rows, label stats."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from enum import Enum

from .errors import EmptyCorpusError, RowError, SchemaError

LABELS = (1, 2, 3, 4, 5)

_TRUTHY = {"1", "true", "yes", "y", "t"}


class LabelScheme(Enum):
    FIVE = "five"
    THREE = "three"


@dataclass(frozen=True)
class ColumnMapping:
    """Names of the CSV columns to read; optional ones may be empty."""

    sentiment: str = "sentiment"
    text: str = "text"
    tweet_id: str = ""
    retweet: str = ""
    followers: str = ""
    followees: str = ""
    non_relevant: str = "not_relevant"


@dataclass(frozen=True)
class LabeledTweet:
    id: str
    text: str
    label: int
    followers: int | None = None
    followees: int | None = None
    is_retweet: bool = False


@dataclass(frozen=True)
class Corpus:
    tweets: tuple[LabeledTweet, ...]
    histogram: dict[int, int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.tweets)

    @property
    def majority_rate(self) -> float:
        if not self.tweets:
            return 0.0
        return max(self.histogram.values()) / len(self.tweets)


def make_corpus(tweets) -> Corpus:
    tweets = tuple(tweets)
    histogram = {lbl: 0 for lbl in LABELS}
    for t in tweets:
        histogram[t.label] += 1
    return Corpus(tweets, {k: v for k, v in histogram.items() if v})


def _parse_count(cell: str | None, row: int, name: str) -> int | None:
    if cell is None or cell.strip() == "":
        return None
    try:
        value = int(cell.strip())
    except ValueError:
        raise RowError(row, f"{name} value {cell!r} is not an integer") from None
    if value < 0:
        raise RowError(row, f"{name} value {value} is negative")
    return value


def load_csv(path, mapping: ColumnMapping = ColumnMapping()) -> Corpus:
    """Parse the labeled CSV, dropping rows marked non-relevant.

    Raises SchemaError when a required column is absent, RowError for a
    sentiment cell that is neither 1-5 nor the non-relevant marker, and
    EmptyCorpusError when no labeled rows remain.
    """
    # utf-8-sig + replace: public CSV releases carry BOMs and stray
    # windows-1252 bytes; valid UTF-8 text passes through byte-exact
    with open(path, encoding="utf-8-sig", errors="replace", newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames
        if not header:
            raise EmptyCorpusError(f"{path}: file has no header row")
        required = {"sentiment": mapping.sentiment, "text": mapping.text}
        for role, column in required.items():
            if column not in header:
                raise SchemaError(f"{path}: missing {role} column {column!r}")
        optional = (mapping.tweet_id, mapping.retweet, mapping.followers,
                    mapping.followees)
        for column in optional:
            if column and column not in header:
                raise SchemaError(f"{path}: mapped column {column!r} not found")

        tweets = []
        for index, row in enumerate(reader):
            line = reader.line_num
            cell = (row[mapping.sentiment] or "").strip()
            if cell == mapping.non_relevant:
                continue
            try:
                label = int(cell)
            except ValueError:
                raise RowError(line, f"sentiment value {cell!r} is not 1-5") from None
            if label not in LABELS:
                raise RowError(line, f"sentiment value {label} out of range 1-5")
            text = row[mapping.text] or ""
            if not text.strip():
                raise RowError(line, "empty tweet text")
            tweet_id = row[mapping.tweet_id] if mapping.tweet_id else str(index)
            if mapping.retweet:
                retweet = (row[mapping.retweet] or "").strip().lower() in _TRUTHY
            else:
                retweet = text.startswith("RT @")
            tweets.append(LabeledTweet(
                id=tweet_id,
                text=text,
                label=label,
                followers=_parse_count(row.get(mapping.followers), line, "followers")
                if mapping.followers else None,
                followees=_parse_count(row.get(mapping.followees), line, "followees")
                if mapping.followees else None,
                is_retweet=retweet,
            ))
    if not tweets:
        raise EmptyCorpusError(f"{path}: no labeled rows after filtering")
    return make_corpus(tweets)


def save_csv(corpus: Corpus, path, mapping: ColumnMapping = ColumnMapping()) -> None:
    """Write a corpus back out in the same CSV shape load_csv reads."""
    id_col = mapping.tweet_id or "id"
    columns = [id_col, mapping.sentiment, mapping.text]
    if mapping.retweet:
        columns.append(mapping.retweet)
    if mapping.followers:
        columns.append(mapping.followers)
    if mapping.followees:
        columns.append(mapping.followees)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for t in corpus.tweets:
            row = [t.id, str(t.label), t.text]
            if mapping.retweet:
                row.append("1" if t.is_retweet else "0")
            if mapping.followers:
                row.append("" if t.followers is None else str(t.followers))
            if mapping.followees:
                row.append("" if t.followees is None else str(t.followees))
            writer.writerow(row)


def split_polar(corpus: Corpus) -> tuple[Corpus, Corpus]:
    """Positive = labels 4-5, negative = labels 1-2; label 3 in neither."""
    if not corpus.tweets:
        raise EmptyCorpusError("cannot split an empty corpus")
    positive = make_corpus(t for t in corpus.tweets if t.label >= 4)
    negative = make_corpus(t for t in corpus.tweets if t.label <= 2)
    return positive, negative


THREE_CLASS = {1: "NEG", 2: "NEG", 3: "NEU", 4: "POS", 5: "POS"}


def binarize_labels(corpus: Corpus, scheme: LabelScheme) -> list[str]:
    """Map each tweet to its class name under the chosen scheme."""
    if scheme is LabelScheme.THREE:
        return [THREE_CLASS[t.label] for t in corpus.tweets]
    return [str(t.label) for t in corpus.tweets]


def stats_dict(corpus: Corpus) -> dict:
    return {
        "total": len(corpus),
        "histogram": {str(k): v for k, v in sorted(corpus.histogram.items())},
        "majority_rate": corpus.majority_rate,
    }
