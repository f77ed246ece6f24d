"""critiquiz: turns design-community feedback threads into cloze quizzes
about visual design and serves a quiz-driven tutoring chat."""

__version__ = "0.1.0"

from .classify import FeedbackLabel, RuleClassifier
from .corpus import Comment, Post, SatisfactionFilter, filter_feedback_posts, filter_satisfied_pairs, load_dump
from .lexicon import ConceptLexicon, assign_cluster
from .quiz import Quiz, QuizPool, compile_pool, load_pool, save_pool
from .segment import Sentence, segment_sentences, tokenize
from .summarize import StructuredSummary, extract_feedback_summary, fuzzy_match_sentence
from .tagging import KeywordSpan, tag_keywords

__all__ = [
    "Comment",
    "ConceptLexicon",
    "FeedbackLabel",
    "KeywordSpan",
    "Post",
    "Quiz",
    "QuizPool",
    "RuleClassifier",
    "SatisfactionFilter",
    "Sentence",
    "StructuredSummary",
    "assign_cluster",
    "compile_pool",
    "extract_feedback_summary",
    "filter_feedback_posts",
    "filter_satisfied_pairs",
    "fuzzy_match_sentence",
    "load_dump",
    "load_pool",
    "save_pool",
    "segment_sentences",
    "tag_keywords",
    "tokenize",
]
