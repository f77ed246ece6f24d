import dataclasses
import random

import pytest

from critiquiz.index import (
    MODE_EXACT,
    MODE_FALLBACK,
    MODE_MATCH,
    MODE_SAME_CLUSTER,
    FocusUnsatisfiableError,
    QuizIndex,
    SessionFocus,
    next_question,
    query_ui_component,
    query_visual_element,
    suggest_keywords,
)


def sub_pool(pool, keep):
    return dataclasses.replace(
        pool, quizzes=tuple(q for q in pool.quizzes if q.answer_cluster in keep)
    )


@pytest.fixture()
def index(fixture_pool, lex):
    return QuizIndex(fixture_pool, lex)


def focus(*clusters):
    return SessionFocus(tuple(clusters))


class TestIndexStructure:
    def test_visual_cluster_partition(self, index, fixture_pool):
        seen = []
        for ids in index.by_visual_cluster.values():
            seen.extend(ids)
        assert sorted(seen) == sorted(q.id for q in fixture_pool.quizzes)
        assert len(seen) == len(set(seen))

    def test_completeness_union_reproduces_pool(self, index, fixture_pool):
        union = set()
        for mapping in (
            index.by_answer_keyword,
            index.by_visual_cluster,
            index.by_ui_keyword,
            index.by_ui_cluster,
        ):
            for ids in mapping.values():
                union.update(ids)
        assert union == set(q.id for q in fixture_pool.quizzes)

    def test_no_empty_posting_lists(self, index):
        for mapping in (
            index.by_answer_keyword,
            index.by_visual_cluster,
            index.by_ui_keyword,
            index.by_ui_cluster,
        ):
            assert all(ids for ids in mapping.values())

    def test_ui_keywords_come_from_critiques(self, index):
        # c408's critique mentions the tab bar icons
        assert any("icon" in kw for kw in index.by_ui_keyword)


class TestNextQuestion:
    def test_forced_set(self, index):
        f = focus("typography")
        quiz = next_question(index, f, random.Random(3))
        assert quiz.answer_cluster == "typography"

    def test_unsatisfiable_focus(self, fixture_pool, lex):
        empty = sub_pool(fixture_pool, {"color"})
        idx = QuizIndex(empty, lex)
        with pytest.raises(FocusUnsatisfiableError, match="focus unsatisfiable"):
            next_question(idx, focus("layout"), random.Random(0))

    def test_no_repeat_until_exhausted_then_wraparound(self, index, fixture_pool):
        f = focus(*{q.answer_cluster for q in fixture_pool.quizzes})
        rng = random.Random(11)
        first_cycle = [next_question(index, f, rng).id for _ in range(len(fixture_pool.quizzes))]
        assert sorted(first_cycle) == sorted(q.id for q in fixture_pool.quizzes)
        again = next_question(index, f, rng).id
        assert again in first_cycle

    def test_draw_proportions_match_pool(self, index):
        f = focus("color", "typography")
        rng = random.Random(99)
        counts = {"color": 0, "typography": 0}
        n = 9999
        for _ in range(n):
            counts[next_question(index, f, rng).answer_cluster] += 1
        # pool has 2 color and 1 typography quizzes
        assert abs(counts["color"] / n - 2 / 3) < 0.03
        assert abs(counts["typography"] / n - 1 / 3) < 0.03

    def test_deterministic_per_seed(self, index):
        a = [next_question(index, focus("color"), random.Random(5)).id for _ in range(4)]
        b = [next_question(index, focus("color"), random.Random(5)).id for _ in range(4)]
        assert a == b


class TestQueryVisualElement:
    def test_modes_are_sound(self, index, lex):
        rng = random.Random(1)
        for _ in range(200):
            quiz, mode = query_visual_element(index, focus("color"), "grey", rng)
            if mode == MODE_EXACT:
                assert quiz.answer.lower() == "grey"
            elif mode == MODE_SAME_CLUSTER:
                assert quiz.answer_cluster == "color"
            else:
                raise AssertionError("both branches are non-empty; fallback impossible")

    def test_coin_is_roughly_fair(self, index):
        rng = random.Random(2024)
        exact = 0
        n = 1500
        for _ in range(n):
            _quiz, mode = query_visual_element(index, focus("color"), "grey", rng)
            exact += mode == MODE_EXACT
        assert 0.45 <= exact / n <= 0.55

    def test_never_answer_keyword_degenerates_to_cluster(self, index):
        for seed in range(30):
            _quiz, mode = query_visual_element(
                index, focus("color"), "pink", random.Random(seed)
            )
            assert mode == MODE_SAME_CLUSTER

    def test_both_branches_empty_falls_back(self, fixture_pool, lex):
        idx = QuizIndex(sub_pool(fixture_pool, {"color"}), lex)
        quiz, mode = query_visual_element(idx, focus("color"), "padding", random.Random(0))
        assert mode == MODE_FALLBACK
        assert quiz.answer_cluster == "color"

    def test_deterministic(self, index):
        a = query_visual_element(index, focus("color"), "grey", random.Random(7))
        b = query_visual_element(index, focus("color"), "grey", random.Random(7))
        assert (a[0].id, a[1]) == (b[0].id, b[1])


class TestQueryUiComponent:
    def test_prefix_token_match_on_icons(self, index):
        quiz, mode = query_ui_component(index, focus("layout"), "icons", random.Random(0))
        assert mode == MODE_MATCH
        assert "icon-related" in quiz.ui_clusters_mentioned

    def test_unknown_keyword_falls_back_with_apology(self, index):
        quiz, mode = query_ui_component(index, focus("color"), "zeppelin", random.Random(0))
        assert mode == MODE_FALLBACK
        assert quiz.answer_cluster == "color"

    def test_deterministic(self, index):
        a = query_ui_component(index, focus("color"), "button", random.Random(9))
        b = query_ui_component(index, focus("color"), "button", random.Random(9))
        assert (a[0].id, a[1]) == (b[0].id, b[1])

    def test_match_soundness(self, index):
        quiz, mode = query_ui_component(index, focus("color"), "buy button", random.Random(4))
        assert mode == MODE_MATCH
        critique = quiz.reconstructed_critique().lower()
        assert "buy button" in critique


class TestSuggestKeywords:
    def test_forced_small_pool(self, fixture_pool, lex):
        only = dataclasses.replace(
            fixture_pool,
            quizzes=tuple(q for q in fixture_pool.quizzes if q.answer == "grey"),
        )
        idx = QuizIndex(only, lex)
        got = suggest_keywords(idx, focus("color"), random.Random(0))
        assert got == sorted(["grey", "pin"])

    def test_deterministic(self, index):
        f = focus("color", "layout")
        a = suggest_keywords(index, f, random.Random(31))
        b = suggest_keywords(index, f, random.Random(31))
        assert a == b and len(a) == 2

    def test_suggestions_always_index_to_a_quiz(self, fixture_pool, lex):
        # 1000 random sub-pools: every suggestion reaches >= 1 focus quiz
        rng = random.Random(123)
        clusters = ("space-shape", "layout", "typography", "color")
        for _ in range(1000):
            keep = rng.sample(list(fixture_pool.quizzes), rng.randint(1, len(fixture_pool.quizzes)))
            pool = dataclasses.replace(fixture_pool, quizzes=tuple(keep))
            idx = QuizIndex(pool, lex)
            present = {q.answer_cluster for q in keep}
            f = focus(*rng.sample(sorted(present), rng.randint(1, len(present))))
            in_focus = set(idx.focus_ids(f))
            for keyword in suggest_keywords(idx, f, random.Random(rng.randrange(10**6))):
                ids = set(idx.by_answer_keyword.get(keyword, [])) | set(
                    idx.by_ui_keyword.get(keyword, [])
                )
                assert ids & in_focus
