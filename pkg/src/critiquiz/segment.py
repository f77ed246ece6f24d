"""Sentence segmentation and tokenization for comment bodies.

Both keep exact character offsets into the source text so that masked
spans can be substituted back verbatim.
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass

# Underscore excluded so the "____" mask stays one token.
_PUNCT = (set(string.punctuation) - {"_"}) | set("“”‘’…—–")

_TERMINATORS = ".?!"

# Words whose trailing period never ends a sentence.
ABBREVIATIONS = {"e.g.", "i.e.", "etc.", "vs.", "mr.", "ms.", "u.s."}


@dataclass(frozen=True)
class Sentence:
    """One sentence of a comment; text is the exact source slice."""

    text: str
    char_span: tuple[int, int]


@dataclass(frozen=True)
class Token:
    text: str
    start: int
    end: int


def _word_ending_at(text: str, idx: int) -> str:
    """Whitespace-delimited chunk ending at text[idx] (inclusive)."""
    k = idx
    while k > 0 and not text[k - 1].isspace():
        k -= 1
    return text[k : idx + 1]


def segment_sentences(body: str) -> list[Sentence]:
    """Split on '.', '?' or '!' followed by whitespace or end of text.

    The terminator run stays with its sentence; abbreviation periods
    (ABBREVIATIONS) never split. Empty input yields an empty list.
    """
    sentences: list[Sentence] = []
    n = len(body)
    start = 0
    i = 0

    def emit(lo: int, hi: int) -> None:
        # Trim whitespace but keep char_span exact for the trimmed text.
        while lo < hi and body[lo].isspace():
            lo += 1
        while hi > lo and body[hi - 1].isspace():
            hi -= 1
        if lo < hi:
            sentences.append(Sentence(text=body[lo:hi], char_span=(lo, hi)))

    while i < n:
        if body[i] in _TERMINATORS:
            j = i
            while j + 1 < n and body[j + 1] in _TERMINATORS:
                j += 1
            at_boundary = j + 1 >= n or body[j + 1].isspace()
            if at_boundary:
                if body[i] == "." and j == i:
                    word = _word_ending_at(body, i).lower()
                    if word in ABBREVIATIONS:
                        i += 1
                        continue
                emit(start, j + 1)
                start = j + 1
                i = j + 1
                continue
            i = j + 1
            continue
        i += 1
    emit(start, n)
    return sentences


def tokenize(text: str) -> list[Token]:
    """Whitespace split; leading/trailing punctuation becomes separate
    single-character tokens; hyphenated/apostrophized words stay whole."""
    tokens: list[Token] = []
    for m in re.finditer(r"\S+", text):
        chunk, base = m.group(), m.start()
        a, b = 0, len(chunk)
        lead: list[tuple[str, int]] = []
        trail: list[tuple[str, int]] = []
        while a < b and chunk[a] in _PUNCT:
            lead.append((chunk[a], base + a))
            a += 1
        while b > a and chunk[b - 1] in _PUNCT:
            trail.append((chunk[b - 1], base + b - 1))
            b -= 1
        for ch, pos in lead:
            tokens.append(Token(ch, pos, pos + 1))
        if a < b:
            tokens.append(Token(chunk[a:b], base + a, base + b))
        for ch, pos in reversed(trail):
            tokens.append(Token(ch, pos, pos + 1))
    return tokens


def token_texts(text: str) -> list[str]:
    return [t.text for t in tokenize(text)]
