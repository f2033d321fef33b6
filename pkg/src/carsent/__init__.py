"""Sentiment classification and topic extraction for annotated tweet corpora.

The pipeline ingests a labeled CSV of tweets about self-driving cars,
extracts topics from the positive and negative subsets with LDA, engineers
unigram / linguistic / meta-data feature sets, ranks them by information
gain, and evaluates a random-forest classifier with stratified
cross-validation.
"""

__version__ = "0.1.0"
