import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from carsent import topics
from carsent.corpus import ColumnMapping, LabeledTweet, LabelScheme, load_csv, make_corpus
from carsent.errors import ConfigError, EmptyCorpusError
from carsent.features import (
    FeatureConfig,
    FeatureKind,
    FeatureSet,
    PolarityLexicon,
    assemble,
    augment_with_topic_words,
    classify_hashtag,
    default_polarity_lexicon,
    hashtag_vocab,
    linguistic_features,
    load_matrix_csv,
    metadata_features,
    top_tfidf_unigrams,
    unigram_features,
)
from carsent.textproc import pos_tag, tokenize

word_lists = st.lists(
    st.lists(st.sampled_from("abcdefg"), min_size=1, max_size=6).map("".join),
    min_size=1, max_size=8)


def tagged(text, tweet_id=""):
    doc = tokenize(text, tweet_id)
    return doc.__class__(doc.tweet_id, pos_tag(doc.tokens), doc.exclamation_runs)


# ---------------------------------------------------------------------------
# tf-idf unigrams


def test_tfidf_hand_example():
    docs = [["cool", "car"], ["cool", "ride"], ["bad", "car"]]
    assert top_tfidf_unigrams(docs, 2) == ["bad", "ride"]


def test_tfidf_scores_match_hand_arithmetic():
    docs = [["cool", "car"], ["cool", "ride"], ["bad", "car"]]
    ranked = top_tfidf_unigrams(docs, 4)
    # bad and ride tie at ln(3), cool and car at 2*ln(1.5)
    assert ranked == ["bad", "ride", "car", "cool"]
    assert math.isclose(math.log(3), 1.0986, rel_tol=1e-4)


def test_tfidf_n_larger_than_vocab_returns_all():
    assert top_tfidf_unigrams([["a", "b"]], 10) == ["a", "b"]


def test_tfidf_ubiquitous_term_scores_zero():
    docs = [["everywhere", "x"], ["everywhere", "y"]]
    ranked = top_tfidf_unigrams(docs, 3)
    assert ranked[-1] == "everywhere"


def test_tfidf_empty_corpus_raises():
    with pytest.raises(EmptyCorpusError):
        top_tfidf_unigrams([], 5)


@given(word_lists, st.randoms(use_true_random=False))
def test_tfidf_order_invariant(docs, rng):
    baseline = top_tfidf_unigrams(docs, 50)
    shuffled = list(docs)
    rng.shuffle(shuffled)
    assert top_tfidf_unigrams(shuffled, 50) == baseline


# ---------------------------------------------------------------------------
# topic-word augmentation


def fit_tiny(docs, k=1):
    return topics.fit(docs, k, 0.5, 0.01, 5, seed=0)


def test_augment_dedupes_existing_terms():
    model = fit_tiny([["car", "car", "cool"]])
    assert augment_with_topic_words(["car"], model, None, 2) == ["car", "cool"]


def test_augment_per_topic_zero_is_identity():
    model = fit_tiny([["car"]])
    assert augment_with_topic_words(["x"], model, model, 0) == ["x"]


def test_augment_disjoint_words_appends_all():
    pos = fit_tiny([["p1", "p2"]])
    neg = fit_tiny([["n1", "n2"]])
    out = augment_with_topic_words(["u"], pos, neg, 2)
    assert out == ["u", "p1", "p2", "n1", "n2"]


def test_augment_preserves_unigram_prefix():
    model = fit_tiny([["zz", "aa"]])
    out = augment_with_topic_words(["m1", "m2"], model, None, 2)
    assert out[:2] == ["m1", "m2"]


# ---------------------------------------------------------------------------
# per-document blocks


def test_unigram_features_membership():
    assert unigram_features({"car", "cool"}, ["car", "bad"]).tolist() == [1.0, 0.0]


def test_unigram_features_empty_doc():
    assert unigram_features(set(), ["car", "bad"]).tolist() == [0.0, 0.0]


def test_unigram_features_binary_despite_repeats():
    assert unigram_features(["car", "car"], ["car"]).tolist() == [1.0]


def test_linguistic_features_trace():
    vec = linguistic_features(tagged("The quick car drives quickly"))
    # noun, verb, adjective, adverb, emphatics, tweet_length
    assert vec.tolist() == [1.0, 1.0, 1.0, 1.0, 0.0, 5.0]


def test_linguistic_features_empty_doc():
    assert linguistic_features(tagged("")).tolist() == [0.0] * 6


def test_linguistic_tweet_length_counts_all_tokens():
    vec = linguistic_features(tagged("a b c #d @e !! 7"))
    assert vec[-1] == 7.0


def test_linguistic_length_in_characters():
    vec = linguistic_features(tagged("ab cde"), length_unit="characters")
    assert vec[-1] == 5.0


def test_metadata_features_trace():
    lex = PolarityLexicon({"self": 0, "driving": 0, "cars": 0})
    tweet = LabeledTweet("1", "x", 5)
    doc = tokenize("ride #selfdrivingcars http://t.co/x")
    vec = metadata_features(tweet, doc, lex, ["selfdrivingcars"])
    retweet, urls, pos, neu, neg, followers, followees, tag = vec.tolist()
    assert (retweet, urls, pos, neu, neg) == (0.0, 1.0, 0.0, 1.0, 0.0)
    assert (followers, followees) == (0.0, 0.0)
    assert tag == 1.0


def test_metadata_counts_vs_presence():
    lex = PolarityLexicon({"love": 1})
    tweet = LabeledTweet("1", "x", 5)
    doc = tokenize("#love it #love")
    vec = metadata_features(tweet, doc, lex, ["love"])
    assert vec[2] == 2.0   # two positive occurrences counted
    assert vec[-1] == 1.0  # presence stays binary


def test_metadata_all_zero_without_meta_tokens():
    lex = PolarityLexicon({})
    tweet = LabeledTweet("1", "x", 3, is_retweet=True)
    vec = metadata_features(tweet, tokenize("plain words"), lex, [])
    assert vec.tolist() == [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]


def test_metadata_followers_passed_through():
    lex = PolarityLexicon({})
    tweet = LabeledTweet("1", "x", 3, followers=12, followees=7)
    vec = metadata_features(tweet, tokenize("hi"), lex, [])
    assert vec[5] == 12.0 and vec[6] == 7.0


# ---------------------------------------------------------------------------
# hashtag polarity


def test_classify_hashtag_direct_hit():
    lex = PolarityLexicon({"fail": -1})
    assert classify_hashtag("fail", lex) == -1


def test_classify_hashtag_segmentation():
    lex = PolarityLexicon({"love": 1, "my": 0, "car": 0})
    assert classify_hashtag("lovemycar", lex) == 1


def test_classify_hashtag_unsegmentable():
    lex = PolarityLexicon({"love": 1})
    assert classify_hashtag("xqzv", lex) == 0


def test_classify_hashtag_zero_sum():
    lex = PolarityLexicon({"love": 1, "hate": -1})
    assert classify_hashtag("lovehate", lex) == 0


def test_classify_hashtag_override_wins():
    lex = PolarityLexicon({"fail": -1}, overrides={"fail": 1})
    assert classify_hashtag("fail", lex) == 1


def test_classify_hashtag_greedy_longest_match():
    # "cargo" must match whole, not "car" + unmatchable "go"
    lex = PolarityLexicon({"car": 0, "cargo": 1})
    assert classify_hashtag("cargo", lex) == 1


def test_default_lexicon_segments_domain_tag():
    lex = default_polarity_lexicon()
    assert classify_hashtag("selfdrivingcars", lex) == 0
    assert classify_hashtag("awesome", lex) == 1


def test_hashtag_vocab_threshold():
    docs = [tokenize("#a #b"), tokenize("#a"), tokenize("#a #b")]
    assert hashtag_vocab(docs, min_freq=2) == ["a", "b"]
    assert hashtag_vocab(docs, min_freq=3) == ["a"]


# ---------------------------------------------------------------------------
# assembly


def build_inputs(texts_labels):
    corpus = make_corpus(
        LabeledTweet(str(i), text, label)
        for i, (text, label) in enumerate(texts_labels))
    docs = [tagged(t.text, t.id) for t in corpus.tweets]
    return corpus, docs


def test_assemble_linguistic_only_has_six_columns():
    corpus, docs = build_inputs([("a car", 5), ("bad one", 1)])
    matrix = assemble(corpus, docs, {FeatureSet.LINGUISTIC}, LabelScheme.FIVE,
                      FeatureConfig())
    assert len(matrix.specs) == 6
    assert all(s.name.startswith("ling:") for s in matrix.specs)


def test_assemble_unigram_count_matches_terms():
    corpus, docs = build_inputs([("car cool", 5), ("bad", 1)])
    cfg = FeatureConfig(unigram_terms=["car", "bad", "zz"])
    matrix = assemble(corpus, docs, {FeatureSet.UNIGRAMS}, LabelScheme.FIVE, cfg)
    assert matrix.names == ["uni:car", "uni:bad", "uni:zz"]
    assert matrix.rows.tolist() == [[1, 0, 0], [0, 1, 0]]


def test_assemble_block_order_and_total_columns():
    corpus, docs = build_inputs([("cool #ai car", 5), ("bad #ai", 1)])
    cfg = FeatureConfig(unigram_terms=["cool"], min_tag_freq=2)
    matrix = assemble(corpus, docs,
                      {FeatureSet.METADATA, FeatureSet.UNIGRAMS,
                       FeatureSet.LINGUISTIC},
                      LabelScheme.FIVE, cfg)
    names = matrix.names
    assert names[0] == "uni:cool"
    assert names[1:7] == [f"ling:{n}" for n in
                          ("noun", "verb", "adjective", "adverb",
                           "emphatics", "tweet_length")]
    assert names[7:14] == ["meta:retweet", "meta:url_count", "meta:hashtag_pos",
                           "meta:hashtag_neu", "meta:hashtag_neg",
                           "meta:followers", "meta:followees"]
    assert names[14:] == ["meta:tag:ai"]
    assert len(names) == 1 + 6 + 7 + 1


def test_assemble_subset_columns_identical():
    corpus, docs = build_inputs([("cool car #go", 5), ("bad ride #go", 2),
                                 ("meh", 3)])
    cfg = FeatureConfig(unigram_terms=["cool", "bad"], min_tag_freq=1)
    small = assemble(corpus, docs, {FeatureSet.UNIGRAMS}, LabelScheme.FIVE, cfg)
    big = assemble(corpus, docs, {FeatureSet.UNIGRAMS, FeatureSet.METADATA},
                   LabelScheme.FIVE, cfg)
    for name in small.names:
        i, j = small.names.index(name), big.names.index(name)
        assert np.array_equal(small.rows[:, i], big.rows[:, j])


def test_assemble_labels_respect_scheme():
    corpus, docs = build_inputs([("x", 5), ("y", 1), ("z", 3)])
    matrix = assemble(corpus, docs, {FeatureSet.LINGUISTIC}, LabelScheme.THREE,
                      FeatureConfig())
    assert matrix.labels.tolist() == ["POS", "NEG", "NEU"]


def test_assemble_requires_sets():
    corpus, docs = build_inputs([("x", 5)])
    with pytest.raises(ConfigError):
        assemble(corpus, docs, set(), LabelScheme.FIVE, FeatureConfig())


def test_assemble_empty_corpus():
    with pytest.raises(EmptyCorpusError):
        assemble(make_corpus([]), [], {FeatureSet.LINGUISTIC},
                 LabelScheme.FIVE, FeatureConfig())


def test_binary_columns_contain_only_01(small_csv):
    corpus = load_csv(small_csv, ColumnMapping(tweet_id="_unit_id"))
    docs = [tagged(t.text, t.id) for t in corpus.tweets]
    cfg = FeatureConfig(unigram_terms=["car", "cool", "crash"], min_tag_freq=3)
    matrix = assemble(corpus, docs,
                      {FeatureSet.UNIGRAMS, FeatureSet.LINGUISTIC,
                       FeatureSet.METADATA}, LabelScheme.FIVE, cfg)
    for i, spec in enumerate(matrix.specs):
        column = matrix.rows[:, i]
        assert (column >= 0).all()
        if spec.kind is FeatureKind.BINARY:
            assert set(np.unique(column)) <= {0.0, 1.0}
        else:
            assert np.array_equal(column, np.round(column))


def test_matrix_csv_round_trip(tmp_path):
    corpus, docs = build_inputs([("cool #ai car", 5), ("bad #ai", 1)])
    cfg = FeatureConfig(unigram_terms=["cool"], min_tag_freq=2)
    matrix = assemble(corpus, docs,
                      {FeatureSet.UNIGRAMS, FeatureSet.LINGUISTIC,
                       FeatureSet.METADATA}, LabelScheme.FIVE, cfg)
    path = tmp_path / "m.csv"
    matrix.to_csv(path)
    loaded = load_matrix_csv(path)
    assert loaded.names == matrix.names
    assert np.array_equal(loaded.rows, matrix.rows)
    assert loaded.labels.tolist() == matrix.labels.tolist()
    assert [s.kind for s in loaded.specs] == [s.kind for s in matrix.specs]


def test_manifest_lists_specs():
    corpus, docs = build_inputs([("x", 5)])
    matrix = assemble(corpus, docs, {FeatureSet.LINGUISTIC}, LabelScheme.FIVE,
                      FeatureConfig())
    entry = matrix.manifest()[0]
    assert entry == {"name": "ling:noun", "set": "linguistic", "kind": "count"}
