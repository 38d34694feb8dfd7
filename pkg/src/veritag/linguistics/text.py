"""Tokenization, sentence splitting, and syllable counting.

These are the word/sentence/character primitives every linguistic feature
group is built on, so their behavior is pinned exactly:

- a token is a maximal run of letters/digits, with internal apostrophes kept
  ("don't" is one token); URLs are recognized first and kept whole;
- sentences split on runs of ``. ! ?`` (optionally followed by closing
  quotes/brackets) when followed by whitespace plus a capital letter or end
  of text, except after a listed abbreviation or a single-letter initial;
- syllables are vowel-group counts (runs of ``aeiouy``) minus a silent
  trailing "e", unless the word ends in consonant+"le"; minimum 1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .. import resources

URL_RE = re.compile(r"(?:https?://|www\.)[^\s<>\"']+")
WORD_RE = re.compile(r"[^\W_]+(?:'[^\W_]+)*")
VOWEL_GROUP_RE = re.compile(r"[aeiouy]+")
_BOUNDARY_RE = re.compile(r"[.!?]+[\"'”’)\]]*(?=\s+[A-Z]|\s*$)")


@dataclass
class TokenizedText:
    """Tokens plus sentence index ranges partitioning [0, len(tokens))."""

    tokens: list[str]
    sentences: list[tuple[int, int]]
    char_count: int


def is_url_token(token: str) -> bool:
    return token.startswith(("http://", "https://", "www."))


def tokenize(text: str, abbreviations: frozenset[str] | None = None) -> TokenizedText:
    """Deterministic tokenization and sentence splitting per the module rules."""
    if abbreviations is None:
        abbreviations = resources.abbreviations()

    spans: list[tuple[int, int, str]] = []
    url_ranges: list[tuple[int, int]] = []
    cursor = 0
    for m in URL_RE.finditer(text):
        url = m.group().rstrip(".,;:!?)\"'")
        if not url:
            continue
        end = m.start() + len(url)
        for w in WORD_RE.finditer(text, cursor, m.start()):
            spans.append((w.start(), w.end(), w.group()))
        spans.append((m.start(), end, url))
        url_ranges.append((m.start(), end))
        cursor = m.end()
    for w in WORD_RE.finditer(text, cursor):
        spans.append((w.start(), w.end(), w.group()))

    tokens = [s[2] for s in spans]
    boundaries = []
    for m in _BOUNDARY_RE.finditer(text):
        if any(a <= m.start() < b for a, b in url_ranges):
            continue
        punct = m.group().rstrip("\"'”’)]")
        if punct == ".":
            prev = _token_ending_at(spans, m.start())
            if prev is not None and (prev.lower() in abbreviations or _is_initial(prev)):
                continue
        boundaries.append(m.end())

    sentences: list[tuple[int, int]] = []
    start = 0
    for boundary in boundaries:
        end = _count_tokens_before(spans, boundary)
        if end > start:
            sentences.append((start, end))
            start = end
    if start < len(tokens):
        sentences.append((start, len(tokens)))

    char_count = sum(1 for c in text if not c.isspace())
    return TokenizedText(tokens=tokens, sentences=sentences, char_count=char_count)


def _token_ending_at(spans: list[tuple[int, int, str]], pos: int) -> str | None:
    for s, e, tok in reversed(spans):
        if e == pos:
            return tok
        if e < pos:
            return None
    return None


def _count_tokens_before(spans: list[tuple[int, int, str]], pos: int) -> int:
    n = 0
    for s, _, _ in spans:
        if s < pos:
            n += 1
        else:
            break
    return n


def _is_initial(token: str) -> bool:
    return len(token) == 1 and token.isalpha()


def count_syllables(word: str) -> int:
    """Vowel-group syllable estimate, always at least 1."""
    w = word.lower()
    groups = len(VOWEL_GROUP_RE.findall(w))
    if w.endswith("e") and not (
        len(w) > 2 and w.endswith("le") and w[-3] not in "aeiouy"
    ):
        groups -= 1
    return max(groups, 1)
