"""In-process inverted index over the quiz pool and the three-condition
selection strategy: focus-random next question, visual-element queries with
the 50/50 exact/same-cluster rule, and UI-component keyword queries."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .classify import FeedbackLabel
from .lexicon import VISUAL_CLUSTERS, ConceptLexicon, assign_cluster, normalize_keyword
from .quiz import Quiz, QuizPool
from .tagging import UI

MODE_EXACT = "exact"
MODE_SAME_CLUSTER = "same_cluster"
MODE_MATCH = "match"
MODE_FALLBACK = "fallback"


class FocusUnsatisfiableError(ValueError):
    """No quiz in the pool matches the session's target clusters."""


@dataclass
class SessionFocus:
    """Per-session learning focus plus the ordered set of asked quiz ids."""

    target_clusters: tuple[str, ...]
    asked: dict[str, None] = field(default_factory=dict)

    def __post_init__(self):
        unknown = [c for c in self.target_clusters if c not in VISUAL_CLUSTERS]
        if unknown:
            raise ValueError(f"unknown visual clusters: {unknown}")
        if not self.target_clusters:
            raise ValueError("focus needs at least one target cluster")
        # Canonical order regardless of caller's ordering.
        self.target_clusters = tuple(
            c for c in VISUAL_CLUSTERS if c in set(self.target_clusters)
        )

    def mark_asked(self, quiz_id: str) -> None:
        self.asked[quiz_id] = None

    def forget(self, quiz_ids) -> None:
        for qid in quiz_ids:
            self.asked.pop(qid, None)


def _keyword_key(keyword: str) -> str:
    return " ".join(normalize_keyword(keyword))


class QuizIndex:
    """Posting lists over answers, answer clusters, and the UI keywords
    mentioned by each source critique. Immutable after build."""

    def __init__(self, pool: QuizPool, lex: ConceptLexicon):
        self.pool = pool
        self.lex = lex
        self.by_answer_keyword: dict[str, list[str]] = {}
        self.by_visual_cluster: dict[str, list[str]] = {}
        self.by_ui_keyword: dict[str, list[str]] = {}
        self.by_ui_cluster: dict[str, list[str]] = {}
        self.all: list[str] = []
        self._quizzes: dict[str, Quiz] = {}

        for quiz in pool.quizzes:
            self.all.append(quiz.id)
            self._quizzes[quiz.id] = quiz
            self.by_answer_keyword.setdefault(_keyword_key(quiz.answer), []).append(quiz.id)
            self.by_visual_cluster.setdefault(quiz.answer_cluster, []).append(quiz.id)
            for cluster in sorted(quiz.ui_clusters_mentioned):
                self.by_ui_cluster.setdefault(cluster, []).append(quiz.id)
            for keyword in self._critique_ui_keywords(quiz):
                postings = self.by_ui_keyword.setdefault(keyword, [])
                if quiz.id not in postings:
                    postings.append(quiz.id)

    @staticmethod
    def _critique_ui_keywords(quiz: Quiz):
        reconstructed = quiz.reconstructed_critique()
        for item in quiz.explanation.items:
            if item.label is FeedbackLabel.CRITIQUE and item.sentence.text == reconstructed:
                for span in item.keywords:
                    if span.kind == UI:
                        yield _keyword_key(span.text)
                return

    def quiz(self, quiz_id: str) -> Quiz:
        return self._quizzes[quiz_id]

    def focus_ids(self, focus: SessionFocus) -> list[str]:
        targets = set(focus.target_clusters)
        return [qid for qid in self.all if self._quizzes[qid].answer_cluster in targets]


def _draw(ids: list[str], rng: random.Random) -> str:
    return ids[rng.randrange(len(ids))]


def next_question(idx: QuizIndex, focus: SessionFocus, rng: random.Random) -> Quiz:
    """Uniform draw over unasked quizzes in the focus strata; when the
    stratum is exhausted its asked marks are cleared (wraparound)."""
    stratum = idx.focus_ids(focus)
    if not stratum:
        raise FocusUnsatisfiableError(
            f"focus unsatisfiable: no quiz in clusters {list(focus.target_clusters)}"
        )
    candidates = [qid for qid in stratum if qid not in focus.asked]
    if not candidates:
        focus.forget(stratum)
        candidates = stratum
    picked = _draw(candidates, rng)
    focus.mark_asked(picked)
    return idx.quiz(picked)


def query_visual_element(
    idx: QuizIndex, focus: SessionFocus, keyword: str, rng: random.Random
) -> tuple[Quiz, str]:
    """50/50 rule: a fair coin picks between quizzes whose answer is the
    queried keyword and quizzes from its cluster; an empty branch defers to
    the other, and two empty branches fall back to next_question (apology)."""
    key = _keyword_key(keyword)
    exact_ids = idx.by_answer_keyword.get(key, [])
    cluster = assign_cluster(keyword, "visual_element", idx.lex)
    cluster_ids = idx.by_visual_cluster.get(cluster, [])

    branches = [(MODE_EXACT, exact_ids), (MODE_SAME_CLUSTER, cluster_ids)]
    if rng.random() >= 0.5:
        branches.reverse()
    for mode, ids in branches:
        if ids:
            picked = _draw(ids, rng)
            focus.mark_asked(picked)
            return idx.quiz(picked), mode
    return next_question(idx, focus, rng), MODE_FALLBACK


def _prefix_token_match(query: tuple[str, ...], keyword: tuple[str, ...]) -> bool:
    if not query:
        return False
    return all(
        any(k.startswith(q) or q.startswith(k) for k in keyword) for q in query
    )


def query_ui_component(
    idx: QuizIndex, focus: SessionFocus, keyword: str, rng: random.Random
) -> tuple[Quiz, str]:
    """Quizzes whose source critique mentions the queried UI keyword
    (prefix-token match, so "icon" finds "icons"); falls back with apology."""
    query = tuple(_keyword_key(keyword).split())
    matched: list[str] = []
    seen = set()
    for indexed, ids in idx.by_ui_keyword.items():
        if _prefix_token_match(query, tuple(indexed.split())):
            for qid in ids:
                if qid not in seen:
                    seen.add(qid)
                    matched.append(qid)
    if matched:
        picked = _draw(matched, rng)
        focus.mark_asked(picked)
        return idx.quiz(picked), MODE_MATCH
    return next_question(idx, focus, rng), MODE_FALLBACK


def suggest_keywords(
    idx: QuizIndex, focus: SessionFocus, rng: random.Random, count: int = 2
) -> list[str]:
    """Distinct candidate keywords (answers or mentioned UI components)
    whose quizzes match the focus; fewer are returned if fewer exist."""
    in_focus = set(idx.focus_ids(focus))
    candidates = sorted(
        {
            keyword
            for mapping in (idx.by_answer_keyword, idx.by_ui_keyword)
            for keyword, ids in mapping.items()
            if any(qid in in_focus for qid in ids)
        }
    )
    if len(candidates) <= count:
        return candidates
    return sorted(rng.sample(candidates, count))
