"""Feedback sentence classification: critique / suggestion / rationale / none.

The built-in rule backend is deterministic and auditable; learned models can
be plugged in over a line-delimited JSON stdio protocol.
"""

from __future__ import annotations

import json
import queue
import subprocess
import threading
from enum import Enum

from .lexicon import ConceptLexicon, normalize_token
from .segment import Sentence, tokenize
from .tagging import KeywordSpan, tag_keywords


class FeedbackLabel(str, Enum):
    CRITIQUE = "critique"
    SUGGESTION = "suggestion"
    RATIONALE = "rationale"
    NONE = "none"


class BackendError(RuntimeError):
    """External classifier failed; carries the offending sentence id."""

    def __init__(self, message: str, sentence_id: str | None = None):
        super().__init__(message)
        self.sentence_id = sentence_id


def _norm_phrase(phrase: str) -> tuple[str, ...]:
    return tuple(normalize_token(t.text) for t in tokenize(phrase))


# Cue order is the label precedence: suggestion, then rationale, then critique.
SUGGESTION_CUES = ("suggest", "suggestion", "should", "maybe", "consider", "try", "I'd", "could", "you may")
RATIONALE_CUES = ("because", "so that", "this would", "users can", "can be used", "the most important")
CRITIQUE_CUES = ("looks", "seems", "too", "not enough", "unclear", "weird", "out of place", "great", "nice")

# Leading verbs that read as imperative advice ("Add a divider ...").
IMPERATIVE_VERBS = {
    "add", "align", "avoid", "bump", "center", "change", "consider", "darken",
    "divide", "drop", "give", "increase", "keep", "lighten", "make", "move",
    "put", "reduce", "remove", "shorten", "swap", "take", "tighten", "try", "use",
}

_SUGGESTION_NORM = tuple(_norm_phrase(c) for c in SUGGESTION_CUES)
_RATIONALE_NORM = tuple(_norm_phrase(c) for c in RATIONALE_CUES)
_CRITIQUE_NORM = tuple(_norm_phrase(c) for c in CRITIQUE_CUES)
_IMPERATIVE_NORM = {normalize_token(v) for v in IMPERATIVE_VERBS}


def _contains(norm_tokens: tuple[str, ...], cue: tuple[str, ...]) -> bool:
    k = len(cue)
    if k == 0 or k > len(norm_tokens):
        return False
    return any(norm_tokens[i : i + k] == cue for i in range(len(norm_tokens) - k + 1))


class RuleClassifier:
    """Ordered cue rules. Exact-token matching (lemma-light) keeps near-miss
    words like "considering" from firing the "consider" cue."""

    name = "rule"

    def __init__(self, lex: ConceptLexicon):
        self.lex = lex

    def classify(
        self, sentence: Sentence | str, keywords: list[KeywordSpan] | None = None
    ) -> tuple[FeedbackLabel, float]:
        text = sentence.text if isinstance(sentence, Sentence) else sentence
        tokens = tokenize(text)
        if not tokens:
            return FeedbackLabel.NONE, 0.0
        norm = tuple(normalize_token(t.text) for t in tokens)

        words = [t.text for t in tokens if any(c.isalnum() for c in t.text)]
        leading = normalize_token(words[0]) if words else ""
        if leading in _IMPERATIVE_NORM or any(_contains(norm, cue) for cue in _SUGGESTION_NORM):
            return FeedbackLabel.SUGGESTION, 1.0
        if any(_contains(norm, cue) for cue in _RATIONALE_NORM):
            return FeedbackLabel.RATIONALE, 1.0
        if any(_contains(norm, cue) for cue in _CRITIQUE_NORM):
            if keywords is None:
                keywords = tag_keywords(text, self.lex)
            if keywords:
                return FeedbackLabel.CRITIQUE, 1.0
        return FeedbackLabel.NONE, 0.0


class ExternalClassifier:
    """Classifier subprocess speaking line-delimited JSON on stdio.

    Request: {"id": ..., "text": ...}; response: {"id", "label", "confidence"}.
    A response that takes longer than `timeout` seconds raises BackendError.
    Calls are serialized per connection.
    """

    name = "external"

    def __init__(self, command: list[str], timeout: float = 5.0):
        self.command = command
        self.timeout = timeout
        self._proc: subprocess.Popen | None = None
        self._responses: queue.Queue = queue.Queue()
        self._lock = threading.Lock()
        self._counter = 0

    def _ensure_started(self) -> None:
        if self._proc is not None and self._proc.poll() is None:
            return
        self._proc = subprocess.Popen(
            self.command,
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            text=True,
            bufsize=1,
        )
        thread = threading.Thread(target=self._pump, args=(self._proc,), daemon=True)
        thread.start()

    def _pump(self, proc: subprocess.Popen) -> None:
        assert proc.stdout is not None
        for line in proc.stdout:
            self._responses.put(line)
        self._responses.put(None)

    def classify(
        self, sentence: Sentence | str, keywords: list[KeywordSpan] | None = None
    ) -> tuple[FeedbackLabel, float]:
        text = sentence.text if isinstance(sentence, Sentence) else sentence
        with self._lock:
            self._ensure_started()
            assert self._proc is not None and self._proc.stdin is not None
            self._counter += 1
            request_id = f"s{self._counter}"
            try:
                self._proc.stdin.write(json.dumps({"id": request_id, "text": text}) + "\n")
                self._proc.stdin.flush()
            except (BrokenPipeError, OSError) as exc:
                raise BackendError(f"backend pipe closed: {exc}", request_id) from exc
            try:
                line = self._responses.get(timeout=self.timeout)
            except queue.Empty:
                raise BackendError(f"backend timed out after {self.timeout}s", request_id)
            if line is None:
                raise BackendError("backend exited before responding", request_id)
            try:
                payload = json.loads(line)
                label = FeedbackLabel(payload["label"])
                confidence = float(payload["confidence"])
            except (json.JSONDecodeError, KeyError, ValueError) as exc:
                raise BackendError(f"backend protocol error: {exc}", request_id) from exc
            if payload.get("id") != request_id:
                raise BackendError(
                    f"backend answered {payload.get('id')!r} for request {request_id!r}",
                    request_id,
                )
            if not 0.0 <= confidence <= 1.0:
                raise BackendError(f"confidence {confidence} out of range", request_id)
            return label, confidence

    def close(self) -> None:
        if self._proc is not None and self._proc.poll() is None:
            self._proc.terminate()
            try:
                self._proc.wait(timeout=2)
            except subprocess.TimeoutExpired:
                self._proc.kill()
        self._proc = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
