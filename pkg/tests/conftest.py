"""Shared fixtures: the two-sentence fixture corpus and the synthetic benchmark."""

import pytest

from lexblend.corpus import load_stopwords, tokenize_sentences
from lexblend.model import TrainConfig, train_model
from lexblend.synth import synthetic_challenge, synthetic_corpus

FIXTURE_TEXT = "The sky is blue. The blue is a color."


@pytest.fixture(scope="session")
def stopwords():
    return load_stopwords()


@pytest.fixture(scope="session")
def fixture_sentences(stopwords):
    return tokenize_sentences(FIXTURE_TEXT, stopwords)


@pytest.fixture(scope="session")
def fixture_model(fixture_sentences):
    config = TrainConfig(max_distance=16, svd_rank=2, min_nonstop=0)
    return train_model(fixture_sentences, config)


@pytest.fixture(scope="session")
def synth_text():
    return synthetic_corpus(50, seed=0)


@pytest.fixture(scope="session")
def synth_model(synth_text, stopwords):
    sentences = tokenize_sentences(synth_text, stopwords)
    config = TrainConfig(max_distance=16, svd_rank=8, min_nonstop=5)
    return train_model(sentences, config)


@pytest.fixture(scope="session")
def synth_items():
    return synthetic_challenge(200, seed=1)
