"""Deterministic dialogue state machine for one tutoring session: quiz
presentation, hints, give-up confirmation, answer reveals, structured-summary
explanations, keyword exploration, and progress tracking."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .index import (
    MODE_FALLBACK,
    QuizIndex,
    SessionFocus,
    next_question,
    query_ui_component,
    query_visual_element,
    suggest_keywords,
)
from .quiz import Quiz

# States
ASKING = "asking"
HINT_SHOWN = "hint_shown"
CONFIRM_GIVE_UP = "confirm_give_up"
ANSWER_REVEALED = "answer_revealed"
EXPLANATION_SHOWN = "explanation_shown"
AWAIT_QUERY_KEYWORD = "await_query_keyword"

STATES = (ASKING, HINT_SHOWN, CONFIRM_GIVE_UP, ANSWER_REVEALED, EXPLANATION_SHOWN, AWAIT_QUERY_KEYWORD)

# Action legality per state; anything else is rejected without a state change.
LEGAL_ACTIONS: dict[str, tuple[str, ...]] = {
    ASKING: ("choose_option", "hint", "dont_know"),
    HINT_SHOWN: ("choose_option", "dont_know"),
    CONFIRM_GIVE_UP: ("confirm_give_up",),
    ANSWER_REVEALED: ("why", "next", "explore", "report_answer"),
    EXPLANATION_SHOWN: ("next", "explore", "report_answer"),
    AWAIT_QUERY_KEYWORD: ("submit_keyword",),
}

ACTION_TYPES = (
    "choose_option",
    "hint",
    "dont_know",
    "confirm_give_up",
    "why",
    "next",
    "explore",
    "submit_keyword",
    "report_answer",
)

# Rendering contract shared with the UI.
ROLE_COLORS = {
    "critique": "#000000",
    "suggestion": "#2F3756",
    "rationale": "#CC0000",
}
KEYWORD_COLORS = {
    "ui_component": "#660000",
    "visual_element": "#660099",
}


class IllegalActionError(ValueError):
    def __init__(self, state: str, action_type: str):
        self.state = state
        self.legal_actions = list(LEGAL_ACTIONS[state])
        super().__init__(f"illegal action {action_type!r} in state {state!r}")


class ActionFormatError(ValueError):
    """Malformed action payload (unknown type or bad fields)."""


@dataclass(frozen=True)
class UserAction:
    type: str
    index: int | None = None
    yes: bool | None = None
    kind: str | None = None
    text: str | None = None

    def to_dict(self) -> dict:
        out: dict = {"type": self.type}
        if self.type == "choose_option":
            out["index"] = self.index
        elif self.type == "confirm_give_up":
            out["yes"] = self.yes
        elif self.type == "explore":
            out["kind"] = self.kind
        elif self.type == "submit_keyword":
            out["text"] = self.text
        return out


def parse_action(raw: dict) -> UserAction:
    if not isinstance(raw, dict):
        raise ActionFormatError("action must be a JSON object")
    action_type = raw.get("type")
    if action_type not in ACTION_TYPES:
        raise ActionFormatError(f"unknown action type {action_type!r}")
    if action_type == "choose_option":
        index = raw.get("index")
        if not isinstance(index, int) or isinstance(index, bool) or not 0 <= index <= 2:
            raise ActionFormatError("choose_option needs an integer index in 0..2")
        return UserAction(type=action_type, index=index)
    if action_type == "confirm_give_up":
        yes = raw.get("yes")
        if not isinstance(yes, bool):
            raise ActionFormatError("confirm_give_up needs a boolean 'yes'")
        return UserAction(type=action_type, yes=yes)
    if action_type == "explore":
        kind = raw.get("kind")
        if kind not in ("ui", "visual"):
            raise ActionFormatError("explore kind must be 'ui' or 'visual'")
        return UserAction(type=action_type, kind=kind)
    if action_type == "submit_keyword":
        text = raw.get("text")
        if not isinstance(text, str) or not text.strip():
            raise ActionFormatError("submit_keyword needs non-empty text")
        return UserAction(type=action_type, text=text)
    return UserAction(type=action_type)


@dataclass(frozen=True)
class BotMessage:
    kind: str
    payload: dict
    template_id: str

    def to_dict(self) -> dict:
        return {"kind": self.kind, "payload": self.payload, "template_id": self.template_id}


# At least three variants per group keeps responses from feeling canned.
TEMPLATES: dict[str, tuple[str, ...]] = {
    "quiz_intro": (
        "Here is a design critique with one word hidden. Which option fits the blank?",
        "Take a look at this critique and fill in the blank.",
        "Another one for you: which word did this commenter actually use?",
    ),
    "praise": (
        "Nice, that's exactly the word the commenter used!",
        "Correct! You have a good eye for this.",
        "Spot on. Keep it up!",
    ),
    "encourage": (
        "Not quite, but good try. The commenter wrote it this way:",
        "Almost! Here is the word that was actually used:",
        "No worries, this one was tricky. The original word was:",
    ),
    "giveup_reveal": (
        "That's okay, this was a hard one. The hidden word was:",
        "No problem. For the record, the commenter wrote:",
        "Fair enough, let's reveal it:",
    ),
    "confirm_give_up": (
        "Do you want to give up on this question?",
        "Sure you want to skip it? It still counts as a pass.",
        "Give up and see the answer?",
    ),
    "resume": (
        "Great, take your time with the question.",
        "Back to the question, then. You can do it.",
        "Alright, give it another thought.",
    ),
    "hint_lead": (
        "Here is what the commenter said around that sentence:",
        "Some context from the same comment may help:",
        "A hint, straight from the surrounding comment:",
    ),
    "hint_empty": (
        "There is no extra context this time; the critique was the whole comment.",
        "No surrounding sentences to show, the comment is just this critique.",
        "I have no extra context for this one, trust your instincts.",
    ),
    "explain_lead": (
        "Here is the structured summary of the comment, with suggestions and rationales:",
        "This is why: the commenter's full feedback, organized by role:",
        "Let's unpack the comment behind this question:",
    ),
    "apology": (
        "Sorry, I couldn't find a quiz for that keyword. Here is another question instead.",
        "I don't have related quizzes for that one, so let's try a different question.",
        "Nothing in my pool matches that keyword, sorry! Picking another question for you.",
    ),
    "keyword_prompt_ui": (
        "Type a UI component you want to explore (for example: button, icons, tab bar).",
        "Which UI component are you curious about? Type it below.",
        "Send me a UI component keyword and I'll find a related quiz.",
    ),
    "keyword_prompt_visual": (
        "Type a visual element you want to explore (for example: color, padding, contrast).",
        "Which visual element should we focus on? Type it below.",
        "Send me a visual element keyword and I'll find a matching quiz.",
    ),
    "query_found": (
        "Found one about that, here you go:",
        "Good pick. Try this question:",
        "Here is a question related to your keyword:",
    ),
    "report_ack": (
        "Thanks, I logged your report about this answer.",
        "Got it, the answer report is recorded.",
        "Report noted. Thanks for flagging it!",
    ),
}

_TEMPLATE_GROUPS = tuple(sorted(TEMPLATES))


@dataclass
class SessionState:
    session_id: str
    focus: SessionFocus
    index: QuizIndex
    rng: random.Random
    seed: int
    state: str = ASKING
    current_quiz: Quiz | None = None
    option_order: tuple[int, int, int] = (0, 1, 2)
    score_correct: int = 0
    score_answered: int = 0
    give_ups: int = 0
    answered_by_cluster: dict[str, int] = field(default_factory=dict)
    pending_query_kind: str | None = None
    transcript: list[dict] = field(default_factory=list)
    reports: list[dict] = field(default_factory=list)
    template_offsets: dict[str, int] = field(default_factory=dict)
    template_counters: dict[str, int] = field(default_factory=dict)

    @property
    def score(self) -> dict:
        return {
            "correct": self.score_correct,
            "answered": self.score_answered,
            "give_ups": self.give_ups,
        }

    def legal_actions(self) -> list[str]:
        return list(LEGAL_ACTIONS[self.state])

    def options_shown(self) -> list[str]:
        assert self.current_quiz is not None
        opts = self.current_quiz.options()
        return [opts[i] for i in self.option_order]

    # -- template rotation ---------------------------------------------------

    def _template(self, group: str) -> tuple[str, str]:
        variants = TEMPLATES[group]
        slot = self.template_counters.get(group, 0)
        self.template_counters[group] = slot + 1
        pick = (self.template_offsets.get(group, 0) + slot) % len(variants)
        return variants[pick], f"{group}/{pick}"

    def _say(self, kind: str, group: str, payload: dict | None = None) -> BotMessage:
        text, template_id = self._template(group)
        body = {"text": text}
        if payload:
            body.update(payload)
        message = BotMessage(kind=kind, payload=body, template_id=template_id)
        self.transcript.append({"who": "bot", "message": message.to_dict()})
        return message


def _summary_payload(quiz: Quiz) -> dict:
    items = []
    for fs in quiz.explanation.items:
        items.append(
            {
                "text": fs.sentence.text,
                "role": fs.label.value,
                "color": ROLE_COLORS[fs.label.value],
                "keywords": [
                    {
                        "text": span.text,
                        "kind": span.kind,
                        "color": KEYWORD_COLORS[span.kind],
                        "char_span": list(span.char_span),
                    }
                    for span in fs.keywords
                ],
            }
        )
    return {"source_comment_id": quiz.explanation.source_comment_id, "items": items}


def _present_quiz(
    s: SessionState, quiz: Quiz, group: str = "quiz_intro", extra: dict | None = None
) -> BotMessage:
    s.current_quiz = quiz
    order = s.rng.sample(range(3), 3)
    s.option_order = (order[0], order[1], order[2])
    s.state = ASKING
    payload = {
        "quiz_id": quiz.id,
        "question": quiz.question_text,
        "options": s.options_shown(),
        "post_title": quiz.post_title,
        "image_ref": quiz.image_ref,
    }
    if extra:
        payload.update(extra)
    return s._say("quiz", group, payload)


def start_session(
    index: QuizIndex, focus_clusters, seed: int, session_id: str = "local"
) -> tuple[SessionState, list[BotMessage]]:
    """New session: seeded RNG, template rotation offsets, first quiz."""
    focus = SessionFocus(tuple(focus_clusters))
    s = SessionState(
        session_id=session_id,
        focus=focus,
        index=index,
        rng=random.Random(seed),
        seed=seed,
    )
    for group in _TEMPLATE_GROUPS:
        s.template_offsets[group] = s.rng.randrange(len(TEMPLATES[group]))
    quiz = next_question(index, focus, s.rng)
    return s, [_present_quiz(s, quiz)]


def _resolve(s: SessionState, correct: bool | None, chosen: str | None) -> BotMessage:
    """Count one quiz resolution and reveal the answer."""
    assert s.current_quiz is not None
    s.score_answered += 1
    cluster = s.current_quiz.answer_cluster
    s.answered_by_cluster[cluster] = s.answered_by_cluster.get(cluster, 0) + 1
    if correct:
        s.score_correct += 1
        group = "praise"
    elif correct is None:
        s.give_ups += 1
        group = "giveup_reveal"
    else:
        group = "encourage"
    s.state = ANSWER_REVEALED
    return s._say(
        "answer_reveal",
        group,
        {
            "correct": correct,
            "gave_up": correct is None,
            "answer": s.current_quiz.answer,
            "chosen": chosen,
        },
    )


def handle_action(s: SessionState, action: UserAction) -> tuple[SessionState, list[BotMessage]]:
    """Apply one user action; returns the messages it produced.

    Raises IllegalActionError (state unchanged) for actions outside the
    legality table.
    """
    if action.type not in LEGAL_ACTIONS[s.state]:
        raise IllegalActionError(s.state, action.type)
    s.transcript.append({"who": "user", "action": action.to_dict()})
    messages: list[BotMessage] = []

    if action.type == "choose_option":
        assert action.index is not None
        correct = s.option_order[action.index] == 0
        chosen = s.options_shown()[action.index]
        messages.append(_resolve(s, correct, chosen))

    elif action.type == "hint":
        assert s.current_quiz is not None
        group = "hint_lead" if s.current_quiz.hint else "hint_empty"
        messages.append(s._say("hint", group, {"hint": s.current_quiz.hint}))
        s.state = HINT_SHOWN

    elif action.type == "dont_know":
        messages.append(s._say("text", "confirm_give_up"))
        s.state = CONFIRM_GIVE_UP

    elif action.type == "confirm_give_up":
        if action.yes:
            messages.append(_resolve(s, None, None))
        else:
            messages.append(s._say("text", "resume"))
            s.state = ASKING

    elif action.type == "why":
        assert s.current_quiz is not None
        messages.append(
            s._say("structured_summary", "explain_lead", _summary_payload(s.current_quiz))
        )
        s.state = EXPLANATION_SHOWN

    elif action.type == "next":
        quiz = next_question(s.index, s.focus, s.rng)
        messages.append(_present_quiz(s, quiz))

    elif action.type == "explore":
        s.pending_query_kind = action.kind
        group = "keyword_prompt_ui" if action.kind == "ui" else "keyword_prompt_visual"
        messages.append(s._say("keyword_prompt", group, {"kind": action.kind}))
        s.state = AWAIT_QUERY_KEYWORD

    elif action.type == "submit_keyword":
        assert action.text is not None
        kind = s.pending_query_kind or "visual"
        if kind == "ui":
            quiz, mode = query_ui_component(s.index, s.focus, action.text, s.rng)
        else:
            quiz, mode = query_visual_element(s.index, s.focus, action.text, s.rng)
        s.pending_query_kind = None
        if mode == MODE_FALLBACK:
            suggestions = suggest_keywords(s.index, s.focus, s.rng)
            messages.append(s._say("apology", "apology", {"suggestions": suggestions}))
            messages.append(_present_quiz(s, quiz, extra={"query_mode": mode}))
        else:
            messages.append(
                _present_quiz(s, quiz, group="query_found", extra={"query_mode": mode})
            )

    elif action.type == "report_answer":
        assert s.current_quiz is not None
        s.reports.append({"quiz_id": s.current_quiz.id, "state": s.state})
        messages.append(s._say("text", "report_ack"))

    return s, messages


def performance_summary(s: SessionState) -> BotMessage:
    """Progress message: answered/correct/give-up counts and the per-cluster
    tally of resolved quizzes."""
    payload = {
        "answered": s.score_answered,
        "correct": s.score_correct,
        "give_ups": s.give_ups,
        "by_cluster": dict(sorted(s.answered_by_cluster.items())),
    }
    return BotMessage(kind="performance", payload=payload, template_id="performance/0")


def replay_session(
    index: QuizIndex, focus_clusters, seed: int, actions: list[UserAction], session_id: str = "replay"
) -> tuple[SessionState, list[BotMessage]]:
    """Rebuild a session by replaying its action log; deterministic."""
    s, messages = start_session(index, focus_clusters, seed, session_id=session_id)
    for action in actions:
        _s, more = handle_action(s, action)
        messages.extend(more)
    return s, messages
