import dataclasses
import json
import random

import pytest

from critiquiz.classify import FeedbackLabel, RuleClassifier
from critiquiz.corpus import Comment
from critiquiz.lexicon import UI_CLUSTERS, VISUAL_CLUSTERS, ConceptLexicon
from critiquiz.quiz import (
    MASK,
    InsufficientClusterError,
    PoolError,
    apply_overrides,
    build_hint,
    compile_pool,
    generate_question,
    load_pool,
    pool_to_json,
    quiz_id,
    save_pool,
    select_distractors,
)
from critiquiz.segment import segment_sentences
from critiquiz.summarize import FeedbackSentence, analyze_comment
from critiquiz.tagging import tag_keywords

from .conftest import GOLDEN_CLUSTER_COUNTS, GOLDEN_QUIZ_COUNT, GOLDEN_SEED


def critique_sentence(text, lex):
    sentence = segment_sentences(text)[0]
    return FeedbackSentence(
        sentence=sentence,
        label=FeedbackLabel.CRITIQUE,
        keywords=tuple(tag_keywords(sentence, lex)),
        classifier_confidence=1.0,
    )


def mini_lexicon(color_members):
    """Full-shape lexicon whose color cluster is custom (others minimal)."""
    ui = {name: [] for name in UI_CLUSTERS}
    ui["button-related"] = ["button"]
    visual = {name: [] for name in VISUAL_CLUSTERS}
    visual["space-shape"] = ["padding"]
    visual["layout"] = ["layout"]
    visual["typography"] = ["contrast"]
    visual["color"] = [kw for kw, _pos in color_members]
    pos = {"button": "noun", "padding": "noun", "layout": "noun", "contrast": "noun"}
    pos.update({kw: p for kw, p in color_members})
    return ConceptLexicon(ui, visual, pos)


class TestGenerateQuestion:
    def test_masks_first_visual_keyword(self, lex):
        fs = critique_sentence(
            "the meaning for grey and red for the pins is not clear", lex
        )
        question, answer = generate_question(fs)
        assert question == "the meaning for ____ and red for the pins is not clear"
        assert answer == "grey"

    def test_no_visual_span_gives_none(self, lex):
        fs = critique_sentence("The heading seems too small.", lex)
        assert generate_question(fs) is None

    def test_non_critique_gives_none(self, lex):
        fs = dataclasses.replace(
            critique_sentence("The grey looks nice.", lex), label=FeedbackLabel.SUGGESTION
        )
        assert generate_question(fs) is None

    def test_sentence_initial_mask_preserves_case(self, lex):
        fs = critique_sentence("Padding looks inconsistent around the buy button.", lex)
        question, answer = generate_question(fs)
        assert question == "____ looks inconsistent around the buy button."
        assert answer == "Padding"
        assert question.replace(MASK, answer, 1) == fs.sentence.text

    def test_multi_word_answer_single_mask(self, lex):
        fs = critique_sentence("The line height seems too tight here.", lex)
        question, answer = generate_question(fs)
        assert answer == "line height"
        assert question.count(MASK) == 1


class TestSelectDistractors:
    def test_same_cluster_same_pos(self, lex):
        distractors, needs_review = select_distractors("grey", lex, random.Random(1))
        assert needs_review is False
        assert len(set(distractors)) == 2 and "grey" not in distractors
        for d in distractors:
            assert d in lex.visual_clusters["color"]
            assert lex.pos_of(d) == "adjective"

    def test_deterministic_per_seed(self, lex):
        a, _ = select_distractors("grey", lex, random.Random(42))
        b, _ = select_distractors("grey", lex, random.Random(42))
        assert a == b

    def test_forced_choice_when_exactly_two_mates(self):
        lex = mini_lexicon([("grey", "adjective"), ("black", "adjective"), ("pink", "adjective")])
        for seed in range(5):
            distractors, needs_review = select_distractors("grey", lex, random.Random(seed))
            assert sorted(distractors) == ["black", "pink"]
            assert needs_review is False

    def test_pos_relaxation_sets_needs_review(self):
        lex = mini_lexicon([
            ("grey", "adjective"), ("black", "adjective"), ("color usage", "noun"),
        ])
        distractors, needs_review = select_distractors("grey", lex, random.Random(0))
        assert needs_review is True
        assert sorted(distractors) == ["black", "color usage"]

    def test_tiny_cluster_rejected(self):
        lex = mini_lexicon([("grey", "adjective"), ("black", "adjective")])
        with pytest.raises(InsufficientClusterError):
            select_distractors("grey", lex, random.Random(0))


class TestBuildHint:
    def analyzed(self, body, lex):
        comment = Comment(id="c", parent_id="p", author="u", body=body, created_at=0)
        return analyze_comment(comment, RuleClassifier(lex), lex)

    def find(self, analyzed, label):
        return next(fs for fs in analyzed.sentences if fs.label is label)

    def test_middle_critique_gets_both_neighbors(self, lex):
        analyzed = self.analyzed(
            "I tested it on my phone. The layout seems too cramped on mobile. "
            "Try adding more whitespace between the cards.",
            lex,
        )
        fs = self.find(analyzed, FeedbackLabel.CRITIQUE)
        assert build_hint(fs, analyzed) == (
            "I tested it on my phone. Try adding more whitespace between the cards."
        )

    def test_single_sentence_comment_empty_hint(self, lex):
        analyzed = self.analyzed("The contrast looks weak on the header.", lex)
        fs = self.find(analyzed, FeedbackLabel.CRITIQUE)
        assert build_hint(fs, analyzed) == ""

    def test_first_of_two_gets_following(self, lex):
        analyzed = self.analyzed(
            "Padding looks inconsistent around the buy button. "
            "You could tighten the margins so that the card feels balanced.",
            lex,
        )
        fs = self.find(analyzed, FeedbackLabel.CRITIQUE)
        assert build_hint(fs, analyzed) == (
            "You could tighten the margins so that the card feels balanced."
        )

    def test_foreign_sentence_rejected(self, lex):
        analyzed = self.analyzed("The contrast looks weak on the header.", lex)
        other = critique_sentence("The grey seems unclear here.", lex)
        with pytest.raises(ValueError):
            build_hint(other, analyzed)


class TestCompilePool:
    def test_golden_fixture_pool(self, fixture_pool):
        assert len(fixture_pool.quizzes) == GOLDEN_QUIZ_COUNT
        assert fixture_pool.cluster_counts() == GOLDEN_CLUSTER_COUNTS

    def test_quiz_invariants(self, fixture_pool, lex):
        for quiz in fixture_pool.quizzes:
            options = quiz.options()
            assert len(set(options)) == 3
            assert quiz.answer not in quiz.distractors
            assert quiz.reconstructed_critique() in [
                item.sentence.text for item in quiz.explanation.items
            ]
            assert quiz.explanation.has_advice
            assert quiz.answer_cluster in VISUAL_CLUSTERS
            for d in quiz.distractors:
                assert d in lex.visual_clusters[quiz.answer_cluster]
                if not quiz.needs_review:
                    assert lex.pos_of(d) == lex.pos_of(quiz.answer)

    def test_advice_free_comment_contributes_nothing(self, fixture_pool):
        # the lone critique without any suggestion/rationale sibling
        assert all(q.source_comment_id != "c404" for q in fixture_pool.quizzes)

    def test_empty_input_gives_empty_pool(self, lex):
        pool = compile_pool([], lex, rng_seed=1)
        assert pool.quizzes == ()

    def test_pool_sorted_deterministically(self, fixture_pool):
        keys = [(q.post_id, q.source_comment_id) for q in fixture_pool.quizzes]
        assert keys == sorted(keys)

    def test_byte_identical_recompiles(self, fixture_posts, lex):
        a = compile_pool(fixture_posts, lex, rng_seed=GOLDEN_SEED)
        b = compile_pool(fixture_posts, lex, rng_seed=GOLDEN_SEED)
        assert pool_to_json(a) == pool_to_json(b)

    def test_quiz_ids_stable_across_seeds(self, fixture_posts, lex):
        a = compile_pool(fixture_posts, lex, rng_seed=1)
        b = compile_pool(fixture_posts, lex, rng_seed=2)
        assert [q.id for q in a.quizzes] == [q.id for q in b.quizzes]

    def test_quiz_id_depends_on_coordinates(self):
        assert quiz_id("p", "c", (0, 10)) != quiz_id("p", "c", (1, 10))
        assert quiz_id("p", "c", (0, 10)) == quiz_id("p", "c", (0, 10))

    def test_save_load_round_trip(self, fixture_pool, tmp_path):
        path = tmp_path / "pool.json"
        save_pool(fixture_pool, str(path))
        loaded = load_pool(str(path))
        assert pool_to_json(loaded) == pool_to_json(fixture_pool)

    def test_load_rejects_wrong_schema_version(self, fixture_pool, tmp_path):
        path = tmp_path / "pool.json"
        payload = json.loads(pool_to_json(fixture_pool))
        payload["schema_version"] = 99
        path.write_text(json.dumps(payload), encoding="utf-8")
        with pytest.raises(PoolError, match="schema_version"):
            load_pool(str(path))


class TestOverrides:
    def test_override_replaces_distractors_and_clears_review(self, fixture_pool, lex):
        target = fixture_pool.quizzes[0]
        new = [kw for kw in lex.visual_clusters[target.answer_cluster]
               if kw != target.answer][:2]
        overrides = {
            "lexicon_digest": fixture_pool.lexicon_digest,
            "overrides": [{"quiz_id": target.id, "distractors": new}],
        }
        patched = apply_overrides(fixture_pool, overrides)
        quiz = patched.by_id(target.id)
        assert list(quiz.distractors) == new
        assert quiz.needs_review is False
        others = [q for q in patched.quizzes if q.id != target.id]
        assert others == [q for q in fixture_pool.quizzes if q.id != target.id]

    def test_digest_mismatch_rejected(self, fixture_pool):
        overrides = {"lexicon_digest": "deadbeef" * 8, "overrides": []}
        with pytest.raises(PoolError, match="lexicon"):
            apply_overrides(fixture_pool, overrides)

    def test_unknown_quiz_rejected(self, fixture_pool):
        overrides = {"overrides": [{"quiz_id": "nope", "distractors": ["a", "b"]}]}
        with pytest.raises(PoolError, match="unknown quiz"):
            apply_overrides(fixture_pool, overrides)

    def test_bad_distractors_rejected(self, fixture_pool):
        target = fixture_pool.quizzes[0]
        for bad in ([], ["only-one"], ["dup", "dup"], [target.answer, "other"]):
            overrides = {"overrides": [{"quiz_id": target.id, "distractors": bad}]}
            with pytest.raises(PoolError, match="distinct non-answer"):
                apply_overrides(fixture_pool, overrides)
