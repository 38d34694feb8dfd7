"""Tokenization and the linguistic feature groups (N, L, R)."""

from .dictionary import CategoryDictionary, dictionary_scores, load_dictionary
from .readability import READABILITY_FEATURES, ReadabilityScores, readability_features
from .tagger import (
    PENN_TABLE_TAGS,
    PerceptronTagger,
    RuleTagger,
    Tagger,
    morphological_features,
    pos_tag,
    resolve_tagger,
)
from .text import TokenizedText, count_syllables, is_url_token, tokenize

__all__ = [
    "CategoryDictionary",
    "PENN_TABLE_TAGS",
    "PerceptronTagger",
    "READABILITY_FEATURES",
    "ReadabilityScores",
    "RuleTagger",
    "Tagger",
    "TokenizedText",
    "count_syllables",
    "dictionary_scores",
    "is_url_token",
    "load_dictionary",
    "morphological_features",
    "pos_tag",
    "readability_features",
    "resolve_tagger",
    "tokenize",
]
