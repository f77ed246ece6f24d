import sys
import textwrap

import pytest

from critiquiz.classify import (
    BackendError,
    ExternalClassifier,
    FeedbackLabel,
    RuleClassifier,
)


@pytest.fixture(scope="module")
def rule(lex):
    return RuleClassifier(lex)


class TestRuleBackend:
    def test_suggestion_example(self, rule):
        label, conf = rule.classify(
            "My one suggestion would be to divide the card number, expiry and cvc "
            "into visually separate input boxes."
        )
        assert label is FeedbackLabel.SUGGESTION and conf == 1.0

    def test_rationale_example(self, rule):
        label, conf = rule.classify("The space can be used more effectively.")
        assert label is FeedbackLabel.RATIONALE and conf == 1.0

    def test_critique_example(self, rule):
        label, conf = rule.classify(
            "The illustration in the last mock seems a little out of place "
            "considering the other mocks."
        )
        assert label is FeedbackLabel.CRITIQUE and conf == 1.0

    def test_empty_is_none(self, rule):
        assert rule.classify("") == (FeedbackLabel.NONE, 0.0)

    def test_considering_does_not_fire_consider(self, rule):
        label, _ = rule.classify("Considering everything, fine work.")
        assert label is FeedbackLabel.NONE

    def test_suggestion_precedes_rationale(self, rule):
        label, _ = rule.classify("I'd reduce the padding because it feels cramped.")
        assert label is FeedbackLabel.SUGGESTION

    def test_imperative_leading_verb(self, rule):
        label, _ = rule.classify("Add a dividing line under the header.")
        assert label is FeedbackLabel.SUGGESTION

    def test_non_leading_imperative_does_not_fire(self, rule):
        label, _ = rule.classify("Or even just add a dividing line.")
        assert label is FeedbackLabel.NONE

    def test_critique_requires_keyword_span(self, rule):
        assert rule.classify("It looks great.")[0] is FeedbackLabel.NONE
        assert rule.classify("The heading looks great.")[0] is FeedbackLabel.CRITIQUE

    def test_precomputed_keywords_respected(self, rule):
        # caller says there are no spans: evaluative cue alone is not a critique
        label, _ = rule.classify("The heading looks great.", keywords=[])
        assert label is FeedbackLabel.NONE

    def test_deterministic(self, rule):
        text = "Maybe take the highlight of the background down, make it darker."
        assert rule.classify(text) == rule.classify(text)


def write_backend(tmp_path, body, name="backend.py"):
    path = tmp_path / name
    path.write_text(textwrap.dedent(body), encoding="utf-8")
    return [sys.executable, str(path)]


ECHO_BACKEND = """
    import json, sys
    for line in sys.stdin:
        req = json.loads(line)
        label = "suggestion" if "maybe" in req["text"].lower() else "none"
        print(json.dumps({"id": req["id"], "label": label, "confidence": 0.75}), flush=True)
"""

SLOW_BACKEND = """
    import json, sys, time
    for line in sys.stdin:
        req = json.loads(line)
        time.sleep(5)
        print(json.dumps({"id": req["id"], "label": "none", "confidence": 0.0}), flush=True)
"""

BAD_PROTOCOL_BACKEND = """
    import sys
    for line in sys.stdin:
        print("not json at all", flush=True)
"""


class TestExternalBackend:
    def test_round_trip(self, tmp_path):
        with ExternalClassifier(write_backend(tmp_path, ECHO_BACKEND)) as backend:
            label, conf = backend.classify("Maybe lighten the shadow")
            assert label is FeedbackLabel.SUGGESTION and conf == 0.75
            label, _ = backend.classify("Unrelated words")
            assert label is FeedbackLabel.NONE

    def test_timeout_raises_backend_error(self, tmp_path):
        backend = ExternalClassifier(write_backend(tmp_path, SLOW_BACKEND), timeout=0.3)
        with backend:
            with pytest.raises(BackendError, match="timed out"):
                backend.classify("anything")

    def test_protocol_error(self, tmp_path):
        with ExternalClassifier(write_backend(tmp_path, BAD_PROTOCOL_BACKEND)) as backend:
            with pytest.raises(BackendError, match="protocol"):
                backend.classify("anything")

    def test_error_carries_sentence_id(self, tmp_path):
        backend = ExternalClassifier(write_backend(tmp_path, SLOW_BACKEND), timeout=0.2)
        with backend:
            try:
                backend.classify("anything")
                raise AssertionError("expected BackendError")
            except BackendError as exc:
                assert exc.sentence_id == "s1"

    def test_caller_can_degrade_to_rule_backend(self, tmp_path, lex):
        flaky = ExternalClassifier(write_backend(tmp_path, SLOW_BACKEND), timeout=0.2)
        rule = RuleClassifier(lex)
        with flaky:
            try:
                label, _ = flaky.classify("Maybe lighten the shadow")
            except BackendError:
                label, _ = rule.classify("Maybe lighten the shadow")
        assert label is FeedbackLabel.SUGGESTION
