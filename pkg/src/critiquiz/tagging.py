"""Gazetteer keyword tagging: BIO spans for UI components and visual
elements over the pipeline tokenization."""

from __future__ import annotations

from dataclasses import dataclass

from .lexicon import STOPWORDS, ConceptLexicon, normalize_token
from .segment import Sentence, tokenize

UI = "ui_component"
VISUAL = "visual_element"

_BIO = {UI: ("B-ui", "I-ui"), VISUAL: ("B-visual", "I-visual")}


@dataclass(frozen=True)
class KeywordSpan:
    """A tagged keyword. token_span is half-open [start, end) over the
    sentence tokens; char_span is the matching slice of the sentence text."""

    text: str
    kind: str
    token_span: tuple[int, int]
    bio_tags: tuple[str, ...]
    char_span: tuple[int, int]


def tag_keywords(sentence: Sentence | str, lex: ConceptLexicon) -> list[KeywordSpan]:
    """Longest-match gazetteer lookup, leftmost-first, case-insensitive and
    lemma-light. Stopwords never begin a span; when a UI and a visual entry
    match the same longest span, the visual reading wins.
    """
    text = sentence.text if isinstance(sentence, Sentence) else sentence
    tokens = tokenize(text)
    norm = [normalize_token(t.text) for t in tokens]
    n = len(tokens)
    max_len = max(lex.max_entry_len(VISUAL), lex.max_entry_len(UI))

    spans: list[KeywordSpan] = []
    i = 0
    while i < n:
        if tokens[i].text.lower() in STOPWORDS:
            i += 1
            continue
        hit = None
        for length in range(min(max_len, n - i), 0, -1):
            window = tuple(norm[i : i + length])
            for kind in (VISUAL, UI):
                if lex.lookup(window, kind) is not None:
                    hit = (kind, length)
                    break
            if hit:
                break
        if hit is None:
            i += 1
            continue
        kind, length = hit
        lo, hi = tokens[i].start, tokens[i + length - 1].end
        b_tag, i_tag = _BIO[kind]
        spans.append(
            KeywordSpan(
                text=text[lo:hi],
                kind=kind,
                token_span=(i, i + length),
                bio_tags=(b_tag,) + (i_tag,) * (length - 1),
                char_span=(lo, hi),
            )
        )
        i += length
    return spans


def bio_sequence(sentence: Sentence | str, lex: ConceptLexicon) -> list[str]:
    """Per-token BIO tags for a sentence ("O" where no span covers)."""
    text = sentence.text if isinstance(sentence, Sentence) else sentence
    tags = ["O"] * len(tokenize(text))
    for span in tag_keywords(sentence, lex):
        start, _end = span.token_span
        for offset, tag in enumerate(span.bio_tags):
            tags[start + offset] = tag
    return tags
