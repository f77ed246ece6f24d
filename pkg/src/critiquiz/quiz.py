"""Cloze quiz compilation: mask the first visual-element keyword of each
critique, draw same-cluster/same-POS distractors, attach hints and the
structured summary, and serialize the pool deterministically."""

from __future__ import annotations

import hashlib
import json
import logging
import random
from dataclasses import dataclass, replace

from .classify import FeedbackLabel, RuleClassifier
from .corpus import Post, pipeline_comments
from .lexicon import ConceptLexicon, assign_cluster, normalize_keyword
from .segment import Sentence
from .summarize import AnalyzedComment, FeedbackSentence, StructuredSummary, analyze_comment
from .tagging import UI, VISUAL, KeywordSpan

logger = logging.getLogger(__name__)

MASK = "____"

SCHEMA_VERSION = 1


class PoolError(ValueError):
    """Pool or overrides file violates its schema or digest."""


class InsufficientClusterError(ValueError):
    """The answer's cluster is too small to supply two distractors."""


@dataclass(frozen=True)
class Quiz:
    id: str
    post_id: str
    post_title: str
    image_ref: str | None
    question_text: str
    answer: str
    distractors: tuple[str, str]
    answer_cluster: str
    ui_clusters_mentioned: frozenset[str]
    hint: str
    explanation: StructuredSummary
    source_comment_id: str
    needs_review: bool = False

    def options(self) -> tuple[str, str, str]:
        return (self.answer,) + self.distractors

    def reconstructed_critique(self) -> str:
        return self.question_text.replace(MASK, self.answer, 1)


@dataclass(frozen=True)
class QuizPool:
    schema_version: int
    quizzes: tuple[Quiz, ...]
    lexicon_digest: str
    build_seed: int

    def by_id(self, quiz_id: str) -> Quiz:
        for quiz in self.quizzes:
            if quiz.id == quiz_id:
                return quiz
        raise KeyError(quiz_id)

    def cluster_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for quiz in self.quizzes:
            counts[quiz.answer_cluster] = counts.get(quiz.answer_cluster, 0) + 1
        return counts


def quiz_id(post_id: str, comment_id: str, char_span: tuple[int, int]) -> str:
    """Stable id; survives recompilation of the same critique."""
    raw = f"{post_id}\x1f{comment_id}\x1f{char_span[0]}:{char_span[1]}"
    return hashlib.sha256(raw.encode("utf-8")).hexdigest()[:16]


def generate_question(fs: FeedbackSentence) -> tuple[str, str] | None:
    """Mask the critique's first visual-element keyword with "____".

    Returns (question_text, answer), or None when the critique mentions no
    visual element. Multi-word keywords become a single mask token.
    """
    if fs.label is not FeedbackLabel.CRITIQUE:
        return None
    visual = fs.spans_of(VISUAL)
    if not visual:
        return None
    first = min(visual, key=lambda span: span.token_span[0])
    lo, hi = first.char_span
    text = fs.sentence.text
    return text[:lo] + MASK + text[hi:], text[lo:hi]


def select_distractors(
    answer: str, lex: ConceptLexicon, rng: random.Random
) -> tuple[tuple[str, str], bool]:
    """Two distinct distractors from the answer's visual cluster.

    Prefers keywords sharing the answer's POS tag; if fewer than two exist
    the POS constraint is relaxed and the quiz is flagged needs_review.
    A cluster with under three members cannot host a quiz at all.
    """
    cluster = assign_cluster(answer, VISUAL, lex)
    pos = lex.pos_of(answer)
    answer_norm = normalize_keyword(answer)
    members = [
        kw for kw in lex.visual_clusters[cluster] if normalize_keyword(kw) != answer_norm
    ]
    if len(members) < 2:
        raise InsufficientClusterError(
            f"cluster {cluster!r} has fewer than 3 members; cannot build distractors for {answer!r}"
        )
    same_pos = [kw for kw in members if lex.pos_of(kw) == pos]
    needs_review = len(same_pos) < 2
    candidates = members if needs_review else same_pos
    picked = rng.sample(sorted(candidates), 2)
    return (picked[0], picked[1]), needs_review


def build_hint(fs: FeedbackSentence, analyzed: AnalyzedComment) -> str:
    """The sentences immediately before and after the critique in its
    source comment; empty when the critique stands alone."""
    sentences = [item.sentence for item in analyzed.sentences]
    position = next(
        (i for i, s in enumerate(sentences) if s.char_span == fs.sentence.char_span), None
    )
    if position is None:
        raise ValueError("feedback sentence does not originate from this comment")
    parts = []
    if position > 0:
        parts.append(sentences[position - 1].text)
    if position + 1 < len(sentences):
        parts.append(sentences[position + 1].text)
    return " ".join(parts)


def _quiz_rng(build_seed: int, qid: str) -> random.Random:
    # Child RNG per quiz: per-post parallel compilation cannot reorder draws.
    return random.Random(f"{build_seed}:{qid}")


def compile_pool(
    posts: list[Post],
    lex: ConceptLexicon,
    backend=None,
    rng_seed: int = 0,
    overrides: dict | None = None,
) -> QuizPool:
    """Run the text pipeline over every comment and compile the quiz pool.

    Critiques without a visual-element keyword are skipped; quizzes whose
    source comment offers neither a suggestion nor a rationale are dropped;
    distractor overrides are applied last. Deterministic for fixed
    (posts, lexicon, seed, overrides).
    """
    backend = backend or RuleClassifier(lex)
    entries: list[tuple[tuple, Quiz]] = []
    for post in posts:
        for comment in pipeline_comments(post):
            analyzed = analyze_comment(comment, backend, lex)
            summary = analyzed.summary
            for fs in analyzed.sentences:
                generated = generate_question(fs)
                if generated is None:
                    continue
                question_text, answer = generated
                qid = quiz_id(post.id, comment.id, fs.sentence.char_span)
                if not summary.has_advice:
                    logger.info(
                        "dropping quiz %s (%s/%s): no suggestion or rationale in source comment",
                        qid, post.id, comment.id,
                    )
                    continue
                try:
                    distractors, needs_review = select_distractors(
                        answer, lex, _quiz_rng(rng_seed, qid)
                    )
                except InsufficientClusterError as exc:
                    logger.info("dropping quiz %s (%s/%s): %s", qid, post.id, comment.id, exc)
                    continue
                quiz = Quiz(
                    id=qid,
                    post_id=post.id,
                    post_title=post.title,
                    image_ref=post.image_ref,
                    question_text=question_text,
                    answer=answer,
                    distractors=distractors,
                    answer_cluster=assign_cluster(answer, VISUAL, lex),
                    ui_clusters_mentioned=frozenset(
                        assign_cluster(span.text, UI, lex) for span in fs.spans_of(UI)
                    ),
                    hint=build_hint(fs, analyzed),
                    explanation=summary,
                    source_comment_id=comment.id,
                    needs_review=needs_review,
                )
                sort_key = (post.id, comment.id, fs.sentence.char_span[0])
                entries.append((sort_key, quiz))

    entries.sort(key=lambda pair: pair[0])
    quizzes = tuple(quiz for _key, quiz in entries)
    pool = QuizPool(
        schema_version=SCHEMA_VERSION,
        quizzes=quizzes,
        lexicon_digest=lex.digest(),
        build_seed=rng_seed,
    )
    if overrides is not None:
        pool = apply_overrides(pool, overrides)
    return pool


def apply_overrides(pool: QuizPool, overrides: dict) -> QuizPool:
    """Apply reviewed distractor replacements. The overrides file records
    the human review pass, so overridden quizzes drop their needs_review flag."""
    digest = overrides.get("lexicon_digest")
    if digest is not None and digest != pool.lexicon_digest:
        raise PoolError(
            f"overrides were authored for lexicon {digest[:12]}..., "
            f"pool was built with {pool.lexicon_digest[:12]}..."
        )
    by_id = {quiz.id: quiz for quiz in pool.quizzes}
    for entry in overrides.get("overrides", []):
        qid = entry.get("quiz_id")
        if qid not in by_id:
            raise PoolError(f"override references unknown quiz id {qid!r}")
        distractors = entry.get("distractors", [])
        quiz = by_id[qid]
        if (
            len(distractors) != 2
            or len(set(distractors)) != 2
            or quiz.answer in distractors
        ):
            raise PoolError(f"override for {qid!r} must list 2 distinct non-answer distractors")
        by_id[qid] = replace(
            quiz, distractors=(distractors[0], distractors[1]), needs_review=False
        )
    return replace(pool, quizzes=tuple(by_id[quiz.id] for quiz in pool.quizzes))


def load_overrides(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if isinstance(data, list):
        data = {"overrides": data}
    if not isinstance(data, dict) or not isinstance(data.get("overrides", []), list):
        raise PoolError("overrides file must be a JSON object with an 'overrides' list")
    return data


# --- serialization ---------------------------------------------------------


def _sentence_to_dict(fs: FeedbackSentence) -> dict:
    return {
        "text": fs.sentence.text,
        "char_span": list(fs.sentence.char_span),
        "label": fs.label.value,
        "confidence": fs.classifier_confidence,
        "keywords": [
            {
                "text": k.text,
                "kind": k.kind,
                "token_span": list(k.token_span),
                "bio_tags": list(k.bio_tags),
                "char_span": list(k.char_span),
            }
            for k in fs.keywords
        ],
    }


def _sentence_from_dict(raw: dict) -> FeedbackSentence:
    return FeedbackSentence(
        sentence=Sentence(text=raw["text"], char_span=tuple(raw["char_span"])),
        label=FeedbackLabel(raw["label"]),
        keywords=tuple(
            KeywordSpan(
                text=k["text"],
                kind=k["kind"],
                token_span=tuple(k["token_span"]),
                bio_tags=tuple(k["bio_tags"]),
                char_span=tuple(k["char_span"]),
            )
            for k in raw["keywords"]
        ),
        classifier_confidence=raw["confidence"],
    )


def quiz_to_dict(quiz: Quiz) -> dict:
    return {
        "id": quiz.id,
        "post_id": quiz.post_id,
        "post_title": quiz.post_title,
        "image_ref": quiz.image_ref,
        "question_text": quiz.question_text,
        "answer": quiz.answer,
        "distractors": list(quiz.distractors),
        "answer_cluster": quiz.answer_cluster,
        "ui_clusters_mentioned": sorted(quiz.ui_clusters_mentioned),
        "hint": quiz.hint,
        "explanation": {
            "source_comment_id": quiz.explanation.source_comment_id,
            "items": [_sentence_to_dict(fs) for fs in quiz.explanation.items],
        },
        "source_comment_id": quiz.source_comment_id,
        "needs_review": quiz.needs_review,
    }


def quiz_from_dict(raw: dict) -> Quiz:
    return Quiz(
        id=raw["id"],
        post_id=raw["post_id"],
        post_title=raw["post_title"],
        image_ref=raw.get("image_ref"),
        question_text=raw["question_text"],
        answer=raw["answer"],
        distractors=(raw["distractors"][0], raw["distractors"][1]),
        answer_cluster=raw["answer_cluster"],
        ui_clusters_mentioned=frozenset(raw["ui_clusters_mentioned"]),
        hint=raw["hint"],
        explanation=StructuredSummary(
            items=tuple(_sentence_from_dict(s) for s in raw["explanation"]["items"]),
            source_comment_id=raw["explanation"]["source_comment_id"],
        ),
        source_comment_id=raw["source_comment_id"],
        needs_review=raw["needs_review"],
    )


def pool_to_json(pool: QuizPool) -> str:
    payload = {
        "schema_version": pool.schema_version,
        "build_seed": pool.build_seed,
        "lexicon_digest": pool.lexicon_digest,
        "quizzes": [quiz_to_dict(q) for q in pool.quizzes],
    }
    return json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=2) + "\n"


def save_pool(pool: QuizPool, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(pool_to_json(pool))


def load_pool(path: str) -> QuizPool:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("schema_version") != SCHEMA_VERSION:
        raise PoolError(
            f"unsupported pool schema_version {payload.get('schema_version')!r} "
            f"(expected {SCHEMA_VERSION})"
        )
    try:
        quizzes = tuple(quiz_from_dict(raw) for raw in payload["quizzes"])
        pool = QuizPool(
            schema_version=payload["schema_version"],
            quizzes=quizzes,
            lexicon_digest=payload["lexicon_digest"],
            build_seed=payload["build_seed"],
        )
    except (KeyError, IndexError, TypeError) as exc:
        raise PoolError(f"malformed pool file: {exc}") from exc
    ids = [q.id for q in pool.quizzes]
    if len(ids) != len(set(ids)):
        raise PoolError("pool contains duplicate quiz ids")
    return pool
