"""Shared fixtures: generated demo corpora and default extraction resources.

The corpora are deterministic functions of a fixed seed, so they are built
once per session in a temp directory and shared read-only by the tests.
"""

from __future__ import annotations

import pytest

from veritag import ExtractionResources, load_manifest
from veritag.demo import build_demo_corpus, build_drift_corpus, build_topic_fixture
from veritag.linguistics import load_dictionary
from veritag.linguistics.tagger import RuleTagger
from veritag.resources import ad_domains, demo_dictionary_path


@pytest.fixture(scope="session")
def demo_corpus_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("demo-corpus")
    return build_demo_corpus(root, seed=0)


@pytest.fixture(scope="session")
def drift_corpus_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("drift-corpus")
    return build_drift_corpus(root, seed=0)


@pytest.fixture(scope="session")
def topic_fixture_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("topics") / "topics.jsonl"
    return build_topic_fixture(path)


@pytest.fixture(scope="session")
def demo_docs(demo_corpus_dir):
    return list(load_manifest(demo_corpus_dir).iter_documents())


@pytest.fixture(scope="session")
def drift_docs(drift_corpus_dir):
    return list(load_manifest(drift_corpus_dir).iter_documents())


@pytest.fixture(scope="session")
def demo_dictionary():
    return load_dictionary(demo_dictionary_path())


@pytest.fixture(scope="session")
def resources(demo_dictionary):
    return ExtractionResources(
        dictionary=demo_dictionary,
        tagger=RuleTagger(),
        ad_domains=ad_domains(),
    )
