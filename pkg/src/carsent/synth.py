"""Deterministic synthetic corpus shaped like the annotated dataset.

The public dataset cannot be redistributed, so tests, demos and CI runs
use a generated stand-in: the same label histogram, a non-relevant row
share, and label-correlated vocabulary so the classifier and topic model
have real signal to find.
"""

from __future__ import annotations

import csv
import random

# label histogram of the published dataset, plus its non-relevant rows
PAPER_HISTOGRAM = {5: 459, 4: 1444, 3: 4245, 2: 685, 1: 110}
PAPER_NON_RELEVANT = 72

POSITIVE_WORDS = [
    "cool", "awesome", "excited", "exciting", "amazing", "love", "perfect",
    "nice", "faster", "future", "great", "fun", "excellent", "happy",
    "safe", "brilliant", "impressive", "wonderful", "smooth", "reshape",
]
NEGATIVE_WORDS = [
    "ridiculous", "difficult", "crash", "dangerous", "scary", "terrible",
    "hate", "awful", "fear", "accident", "worried", "broken", "fail",
    "crazy", "stupid", "useless", "risky", "nightmare", "horrible", "wrong",
]
DOMAIN_WORDS = [
    "car", "cars", "driverless", "driver", "road", "google", "tesla",
    "city", "traffic", "technology", "people", "think", "new", "test",
    "drive", "news", "report", "street", "highway", "vehicle", "wheel",
    "robot", "machine", "autopilot", "launch", "video", "ride", "backseat",
    "night", "vision", "laws", "insurance", "talking", "compete", "bikes",
]
OFFTOPIC_WORDS = [
    "pizza", "weather", "football", "music", "coffee", "movie", "cat",
    "monday", "flight", "shoes", "birthday", "game", "concert", "beach",
]
HASHTAGS = {
    "pos": ["#selfdrivingcars", "#awesome", "#future", "#google"],
    "neg": ["#selfdrivingcars", "#fail", "#scary", "#crash"],
    "neu": ["#selfdrivingcars", "#ai", "#tech", "#news"],
}
INTENSIFIERS = ["really", "so", "totally", "absolutely", "seriously"]


def _words_for_label(label: int, rng: random.Random) -> list[str]:
    words = rng.sample(DOMAIN_WORDS, rng.randint(3, 6))
    if label >= 4:
        polar, bucket = POSITIVE_WORDS, "pos"
        strength = 2 if label == 5 else 1
    elif label <= 2:
        polar, bucket = NEGATIVE_WORDS, "neg"
        strength = 2 if label == 1 else 1
    else:
        polar, bucket = [], "neu"
        strength = 0
    if polar:
        for _ in range(strength + rng.randint(0, 1)):
            words.insert(rng.randrange(len(words) + 1), rng.choice(polar))
    if strength and rng.random() < 0.5:
        words.insert(0, rng.choice(INTENSIFIERS))
    if strength == 2 and rng.random() < 0.3:
        i = rng.randrange(len(words))
        words[i] = words[i].upper()
    if rng.random() < 0.45:
        words.append(rng.choice(HASHTAGS[bucket]))
    return words


def _render_tweet(label: int, rng: random.Random) -> str:
    words = _words_for_label(label, rng)
    text = " ".join(words)
    if label in (1, 5) and rng.random() < 0.4:
        text += "!!" + "!" * rng.randint(0, 2)
    elif rng.random() < 0.3:
        text += "."
    if rng.random() < 0.25:
        text += f" http://t.co/{rng.randrange(16**5):05x}"
    if rng.random() < 0.15:
        text += f" @user{rng.randrange(100)}"
    if rng.random() < 0.08:
        text = f"RT @user{rng.randrange(100)}: {text}"
    return text


def _render_offtopic(rng: random.Random) -> str:
    return " ".join(rng.sample(OFFTOPIC_WORDS, rng.randint(3, 6)))


def make_sample_corpus(path, seed: int = 0,
                       histogram: dict[int, int] | None = None,
                       non_relevant: int | None = None,
                       non_relevant_marker: str = "not_relevant") -> None:
    """Write a synthetic labeled CSV with the requested label counts."""
    if histogram is None:
        histogram = PAPER_HISTOGRAM
    if non_relevant is None:
        non_relevant = PAPER_NON_RELEVANT
    rng = random.Random(seed)
    rows = []
    for label, count in sorted(histogram.items()):
        for _ in range(count):
            rows.append((str(label), _render_tweet(label, rng)))
    for _ in range(non_relevant):
        rows.append((non_relevant_marker, _render_offtopic(rng)))
    rng.shuffle(rows)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["_unit_id", "sentiment", "sentiment:confidence", "text"])
        for i, (sentiment, text) in enumerate(rows, start=1):
            writer.writerow([str(700000000 + i), sentiment,
                             f"{rng.uniform(0.4, 1.0):.4f}", text])
