import pathlib

import pytest


def pytest_runtest_logreport(report):
    # One visible pass/fail line per acceptance criterion.
    if report.when == "call" and "test_acceptance" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        outcome = "PASS" if report.passed else "FAIL"
        print(f"\n[ACCEPTANCE] {name}: {outcome}", flush=True)

from critiquiz.corpus import filter_feedback_posts, load_dump
from critiquiz.lexicon import ConceptLexicon
from critiquiz.quiz import compile_pool

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"

GOLDEN_SEED = 7
GOLDEN_QUIZ_COUNT = 6
GOLDEN_CLUSTER_COUNTS = {"color": 2, "space-shape": 1, "layout": 2, "typography": 1}


@pytest.fixture(scope="session")
def lex():
    return ConceptLexicon.default()


@pytest.fixture(scope="session")
def fixture_posts():
    result = load_dump(str(FIXTURES / "dump.jsonl"))
    return filter_feedback_posts(result.posts)


@pytest.fixture(scope="session")
def fixture_pool(fixture_posts, lex):
    return compile_pool(fixture_posts, lex, rng_seed=GOLDEN_SEED)
