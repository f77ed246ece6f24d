"""Structured comment summaries: segment, classify and tag each sentence,
keep the meaningful ones in source order, and fuzzy-match candidates back
to source sentences."""

from __future__ import annotations

from dataclasses import dataclass, field

from .classify import FeedbackLabel, RuleClassifier
from .corpus import Comment
from .lexicon import ConceptLexicon
from .segment import Sentence, segment_sentences
from .tagging import KeywordSpan, tag_keywords

FUZZY_MATCH_THRESHOLD = 0.8


@dataclass(frozen=True)
class FeedbackSentence:
    sentence: Sentence
    label: FeedbackLabel
    keywords: tuple[KeywordSpan, ...]
    classifier_confidence: float

    def spans_of(self, kind: str) -> tuple[KeywordSpan, ...]:
        return tuple(k for k in self.keywords if k.kind == kind)


@dataclass(frozen=True)
class StructuredSummary:
    """Meaningful sentences of one comment, in source order."""

    items: tuple[FeedbackSentence, ...]
    source_comment_id: str

    def with_label(self, label: FeedbackLabel) -> tuple[FeedbackSentence, ...]:
        return tuple(item for item in self.items if item.label is label)

    @property
    def has_advice(self) -> bool:
        return any(
            item.label in (FeedbackLabel.SUGGESTION, FeedbackLabel.RATIONALE)
            for item in self.items
        )


@dataclass
class AnalyzedComment:
    """All sentences of a comment with labels and spans (summary keeps the
    labeled subset; neighbors are needed for hints)."""

    comment: Comment
    sentences: list[FeedbackSentence] = field(default_factory=list)

    @property
    def summary(self) -> StructuredSummary:
        return StructuredSummary(
            items=tuple(fs for fs in self.sentences if fs.label is not FeedbackLabel.NONE),
            source_comment_id=self.comment.id,
        )


def analyze_comment(comment: Comment, backend, lex: ConceptLexicon) -> AnalyzedComment:
    analyzed = AnalyzedComment(comment=comment)
    for sentence in segment_sentences(comment.body):
        keywords = tuple(tag_keywords(sentence, lex))
        label, confidence = backend.classify(sentence, list(keywords))
        analyzed.sentences.append(
            FeedbackSentence(
                sentence=sentence,
                label=label,
                keywords=keywords,
                classifier_confidence=confidence,
            )
        )
    return analyzed


def extract_feedback_summary(
    comment: Comment, backend=None, lex: ConceptLexicon | None = None
) -> StructuredSummary:
    """Summary = sentences labeled critique/suggestion/rationale, source
    order preserved. A comment with no meaningful sentence yields empty items."""
    lex = lex or ConceptLexicon.default()
    backend = backend or RuleClassifier(lex)
    return analyze_comment(comment, backend, lex).summary


def _normalize_for_match(text: str) -> str:
    return " ".join(text.lower().split())


def _levenshtein(a: str, b: str) -> int:
    if not a:
        return len(b)
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            current.append(
                min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + (ca != cb))
            )
        previous = current
    return previous[len(b)]


def similarity(a: str, b: str) -> float:
    """1 - normalized edit distance over lowercased, space-collapsed text."""
    na, nb = _normalize_for_match(a), _normalize_for_match(b)
    longest = max(len(na), len(nb))
    if longest == 0:
        return 1.0
    return 1.0 - _levenshtein(na, nb) / longest


def fuzzy_match_sentence(
    candidate: str, source_sentences: list[Sentence]
) -> tuple[int, float]:
    """Best-matching source sentence for a candidate; ties break to the
    lowest index. source_sentences must be non-empty."""
    if not source_sentences:
        raise ValueError("source_sentences must be non-empty")
    best_index, best_score = 0, -1.0
    for index, sentence in enumerate(source_sentences):
        score = similarity(candidate, sentence.text)
        if score > best_score:
            best_index, best_score = index, score
    return best_index, best_score
