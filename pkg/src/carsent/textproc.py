"""Tweet tokenization, token classification, stemming, POS tagging.

All operations here are pure functions over immutable inputs; documents
can safely be processed in parallel.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from enum import Enum
from functools import lru_cache
from importlib import resources

from .porter import stem as porter_stem


class TokenKind(Enum):
    WORD = "word"
    HASHTAG = "hashtag"
    MENTION = "mention"
    URL = "url"
    EMOTICON = "emoticon"
    PUNCT = "punct"
    NUMBER = "number"


class PosTag(Enum):
    NOUN = "noun"
    VERB = "verb"
    ADJ = "adj"
    ADV = "adv"
    OTHER = "other"


@dataclass(frozen=True)
class Token:
    surface: str
    normalized: str
    kind: TokenKind
    stem: str
    pos: PosTag = PosTag.OTHER


@dataclass(frozen=True)
class TokenizedDoc:
    tweet_id: str
    tokens: tuple[Token, ...]
    exclamation_runs: int


_APOSTROPHES = ("'", "’")
_EXCLAM_RUN = re.compile(r"!{2,}")
_CHAR_REPEAT = re.compile(r"(.)\1{2,}")


def _is_punct_char(ch: str) -> bool:
    return not ch.isalnum() and ch not in _APOSTROPHES


def _is_url(chunk: str) -> bool:
    low = chunk.lower()
    return low.startswith(("http://", "https://")) or "t.co/" in low


def _tag_body(core: str) -> str | None:
    """Return the '#'/'@'-stripped body when it is a well-formed tag."""
    body = core[1:]
    if body and all(c.isalnum() or c == "_" for c in body):
        return body
    return None


def _make_token(surface: str, kind: TokenKind) -> Token:
    normalized = surface.casefold()
    if kind in (TokenKind.HASHTAG, TokenKind.MENTION):
        normalized = normalized[1:]
    if kind is TokenKind.WORD and normalized.isascii() and normalized.isalpha():
        stemmed = porter_stem(normalized)
    else:
        stemmed = normalized
    return Token(surface, normalized, kind, stemmed)


def _classify_core(core: str) -> Token:
    if core.startswith("#") and _tag_body(core) is not None:
        return _make_token(core, TokenKind.HASHTAG)
    if core.startswith("@") and _tag_body(core) is not None:
        return _make_token(core, TokenKind.MENTION)
    if core.isdigit():
        return _make_token(core, TokenKind.NUMBER)
    if all(_is_punct_char(c) for c in core):
        return _make_token(core, TokenKind.PUNCT)
    return _make_token(core, TokenKind.WORD)


def _split_chunk(chunk: str) -> list[Token]:
    if _is_url(chunk):
        return [_make_token(chunk, TokenKind.URL)]
    if chunk in emoticon_list():
        return [_make_token(chunk, TokenKind.EMOTICON)]
    i, j = 0, len(chunk)
    while i < j and _is_punct_char(chunk[i]) and chunk[i] not in "#@":
        i += 1
    while j > i and _is_punct_char(chunk[j - 1]):
        j -= 1
    tokens = []
    if i > 0:
        tokens.append(_make_token(chunk[:i], TokenKind.PUNCT))
    if j > i:
        tokens.append(_classify_core(chunk[i:j]))
    if j < len(chunk):
        tokens.append(_make_token(chunk[j:], TokenKind.PUNCT))
    return tokens


def tokenize(text: str, tweet_id: str = "") -> TokenizedDoc:
    """Split on whitespace, peel punctuation, classify token kinds."""
    tokens: list[Token] = []
    for chunk in text.split():
        tokens.extend(_split_chunk(chunk))
    runs = len(_EXCLAM_RUN.findall(text))
    return TokenizedDoc(tweet_id, tuple(tokens), runs)


def remove_stopwords(tokens, stopwords: frozenset[str] | None = None):
    """Drop WORD tokens on the stopword list; other kinds pass through."""
    if stopwords is None:
        stopwords = default_stopwords()
    return tuple(
        t for t in tokens
        if t.kind is not TokenKind.WORD or t.normalized not in stopwords
    )


_ADJ_SUFFIXES = ("ous", "ful", "able", "ive")


def _undouble(word: str) -> str:
    if len(word) >= 2 and word[-1] == word[-2]:
        return word[:-1]
    return word


def _inflected_verb(word: str, suffix: str, lexicon) -> bool:
    base = word[: -len(suffix)]
    for cand in (base, base + "e", _undouble(base)):
        if lexicon.get(cand) is PosTag.VERB:
            return True
    return False


def _tag_word(word: str, lexicon) -> PosTag:
    hit = lexicon.get(word)
    if hit is not None:
        return hit
    if word.endswith("ly"):
        return PosTag.ADV
    if word.endswith(_ADJ_SUFFIXES):
        return PosTag.ADJ
    if word.endswith(("ize", "ate")) and len(word) > 4:
        return PosTag.VERB
    if word.endswith("ing"):
        return PosTag.VERB if _inflected_verb(word, "ing", lexicon) else PosTag.ADJ
    if word.endswith("ed"):
        return PosTag.VERB if _inflected_verb(word, "ed", lexicon) else PosTag.ADJ
    return PosTag.NOUN


def pos_tag(tokens, lexicon: dict[str, PosTag] | None = None):
    """Tag WORD tokens by lexicon lookup, then suffix rules, default NOUN."""
    if lexicon is None:
        lexicon = default_pos_lexicon()
    return tuple(
        replace(t, pos=_tag_word(t.normalized, lexicon))
        if t.kind is TokenKind.WORD else t
        for t in tokens
    )


def count_emphatics(doc: TokenizedDoc, lexicon: frozenset[str] | None = None) -> int:
    """Count emphasis markers: intensifiers, all-caps words, elongations
    and `!!`-runs.  A word token counts once however many signals match."""
    if lexicon is None:
        lexicon = default_emphatic_lexicon()
    count = 0
    for t in doc.tokens:
        if t.kind is not TokenKind.WORD:
            continue
        if (
            t.normalized in lexicon
            or (len(t.surface) >= 2 and t.surface.isalpha() and t.surface.isupper())
            or _CHAR_REPEAT.search(t.normalized)
        ):
            count += 1
    return count + doc.exclamation_runs


def extract_hashtags(doc: TokenizedDoc) -> list[str]:
    """Normalized hashtag bodies in order, duplicates retained."""
    return [t.normalized for t in doc.tokens if t.kind is TokenKind.HASHTAG]


def extract_urls(doc: TokenizedDoc) -> list[str]:
    """URL surfaces in order, duplicates retained."""
    return [t.surface for t in doc.tokens if t.kind is TokenKind.URL]


def content_stems(doc: TokenizedDoc, stopwords: frozenset[str] | None = None) -> list[str]:
    """Stems feeding the topic model and the unigram features: stopword-free
    WORD stems plus stemmed hashtag bodies, in token order."""
    if stopwords is None:
        stopwords = default_stopwords()
    stems = []
    for t in doc.tokens:
        if t.kind is TokenKind.WORD and t.normalized not in stopwords:
            stems.append(t.stem)
        elif t.kind is TokenKind.HASHTAG:
            body = t.normalized
            stems.append(porter_stem(body) if body.isascii() and body.isalpha() else body)
    return stems


# ---------------------------------------------------------------------------
# bundled data files


def _read_data_text(name: str) -> str:
    return resources.files("carsent.data").joinpath(name).read_text(encoding="utf-8")


def _parse_lines(text: str):
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            yield line


def load_wordlist(path) -> frozenset[str]:
    """One term per line; blank lines and '#' comments ignored."""
    with open(path, encoding="utf-8") as fh:
        return frozenset(line.lower() for line in _parse_lines(fh.read()))


def load_pos_lexicon(path) -> dict[str, PosTag]:
    """TSV lines of word<TAB>TAG."""
    with open(path, encoding="utf-8") as fh:
        return _parse_pos_lexicon(fh.read())


def _parse_pos_lexicon(text: str) -> dict[str, PosTag]:
    lexicon = {}
    for line in _parse_lines(text):
        word, _, tag = line.partition("\t")
        lexicon[word.lower()] = PosTag[tag.strip().upper()]
    return lexicon


@lru_cache(maxsize=1)
def default_stopwords() -> frozenset[str]:
    return frozenset(_parse_lines(_read_data_text("stopwords.txt")))


@lru_cache(maxsize=1)
def default_emphatic_lexicon() -> frozenset[str]:
    return frozenset(_parse_lines(_read_data_text("emphatic_words.txt")))


@lru_cache(maxsize=1)
def emoticon_list() -> frozenset[str]:
    return frozenset(_parse_lines(_read_data_text("emoticons.txt")))


@lru_cache(maxsize=1)
def default_pos_lexicon() -> dict[str, PosTag]:
    return _parse_pos_lexicon(_read_data_text("pos_lexicon.tsv"))
