"""Community dump ingestion: JSONL posts/comments into comment forests,
plus the feedback-post and satisfied-reply filters.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

from .segment import tokenize

AUTOMODERATOR = "AutoModerator"

IMAGE_EXTENSIONS = (".png", ".jpg", ".jpeg", ".webp")

DEFAULT_CUE_WORDS = ("thank", "great", "good", "agree", "advice", "suggest")

FEEDBACK_FLAIR = "feedback request"


class DumpFormatError(ValueError):
    """Malformed dump content; message names the offending line."""


@dataclass(frozen=True)
class Comment:
    id: str
    parent_id: str
    author: str
    body: str
    created_at: int
    deleted: bool = False
    children: tuple["Comment", ...] = ()

    def walk(self):
        yield self
        for child in self.children:
            yield from child.walk()


@dataclass(frozen=True)
class Post:
    id: str
    title: str
    flair: str
    author: str
    created_at: int
    image_ref: str | None = None
    comments: tuple[Comment, ...] = ()

    def all_comments(self):
        for top in self.comments:
            yield from top.walk()


@dataclass(frozen=True)
class SatisfactionFilter:
    """Cue words that mark an original poster's reply as satisfied."""

    cue_words: tuple[str, ...] = DEFAULT_CUE_WORDS

    def matches(self, text: str) -> bool:
        # Prefix-token rule: token "thanks" fires cue "thank".
        tokens = [t.text.lower() for t in tokenize(text)]
        return any(tok.startswith(cue) for tok in tokens for cue in self.cue_words)


@dataclass
class IngestResult:
    posts: list[Post]
    rejects: list[dict] = field(default_factory=list)

    def write_rejects(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for record in self.rejects:
                fh.write(json.dumps(record, ensure_ascii=False) + "\n")


def _require(record: dict, key: str, line_no: int):
    if key not in record:
        raise DumpFormatError(f"line {line_no}: missing field {key!r}")
    return record[key]


def load_dump(path: str) -> IngestResult:
    """Parse a UTF-8 JSONL dump of post/comment records into comment forests.

    Comments whose parent_id resolves to no known post or comment are
    reported in rejects (not silently dropped). Malformed lines and
    duplicate ids raise DumpFormatError naming the line.
    """
    posts_raw: dict[str, dict] = {}
    comments_raw: dict[str, dict] = {}
    seen_lines: dict[str, int] = {}
    order: list[str] = []

    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DumpFormatError(f"line {line_no}: invalid JSON ({exc.msg})") from exc
            if not isinstance(record, dict):
                raise DumpFormatError(f"line {line_no}: record is not an object")
            kind = _require(record, "kind", line_no)
            rid = _require(record, "id", line_no)
            if not isinstance(rid, str) or not rid:
                raise DumpFormatError(f"line {line_no}: id must be a non-empty string")
            if rid in seen_lines:
                raise DumpFormatError(
                    f"line {line_no}: duplicate id {rid!r} (first seen at line {seen_lines[rid]})"
                )
            seen_lines[rid] = line_no
            if kind == "post":
                for key in ("title", "flair", "author", "created_at"):
                    _require(record, key, line_no)
                posts_raw[rid] = record
                order.append(rid)
            elif kind == "comment":
                for key in ("parent_id", "author", "body", "created_at"):
                    _require(record, key, line_no)
                if record["body"] == "" and not record.get("deleted", False):
                    raise DumpFormatError(
                        f"line {line_no}: empty body without deleted flag (id {rid!r})"
                    )
                comments_raw[rid] = record
            else:
                raise DumpFormatError(f"line {line_no}: unknown kind {kind!r}")

    rejects: list[dict] = []
    children: dict[str, list[str]] = {}
    # Resolve ancestry; a comment is attached only if its chain reaches a post.
    resolved: dict[str, str | None] = {}

    def root_post(cid: str, trail: set[str]) -> str | None:
        if cid in resolved:
            return resolved[cid]
        parent = comments_raw[cid]["parent_id"]
        if parent in posts_raw:
            resolved[cid] = parent
        elif parent in comments_raw and parent not in trail:
            resolved[cid] = root_post(parent, trail | {cid})
        else:
            resolved[cid] = None
        return resolved[cid]

    for cid in comments_raw:
        if root_post(cid, {cid}) is None:
            rejects.append({"id": cid, "reason": f"unknown parent {comments_raw[cid]['parent_id']!r}"})
        else:
            children.setdefault(comments_raw[cid]["parent_id"], []).append(cid)

    def build_comment(cid: str) -> Comment:
        raw = comments_raw[cid]
        return Comment(
            id=cid,
            parent_id=raw["parent_id"],
            author=raw["author"],
            body=raw["body"],
            created_at=int(raw["created_at"]),
            deleted=bool(raw.get("deleted", False)),
            children=tuple(build_comment(k) for k in children.get(cid, ())),
        )

    posts = []
    for pid in order:
        raw = posts_raw[pid]
        posts.append(
            Post(
                id=pid,
                title=raw["title"],
                flair=raw["flair"],
                author=raw["author"],
                created_at=int(raw["created_at"]),
                image_ref=raw.get("image_ref"),
                comments=tuple(build_comment(k) for k in children.get(pid, ())),
            )
        )
    return IngestResult(posts=posts, rejects=rejects)


def image_available(image_ref: str | None) -> bool:
    """Desk-scale availability: local file exists or the URI carries an
    allowed image extension. No network check."""
    if not image_ref:
        return False
    if os.path.exists(image_ref):
        return True
    base = image_ref.split("?", 1)[0].split("#", 1)[0]
    return base.lower().endswith(IMAGE_EXTENSIONS)


def filter_feedback_posts(posts: list[Post]) -> list[Post]:
    """Posts flaired "Feedback Request" (case-insensitive) that have a
    resolvable image and at least one comment from neither the bot
    AutoModerator nor the original poster."""
    kept = []
    for post in posts:
        if post.flair.strip().lower() != FEEDBACK_FLAIR:
            continue
        if not image_available(post.image_ref):
            continue
        if not any(
            c.author not in (AUTOMODERATOR, post.author) for c in post.all_comments()
        ):
            continue
        kept.append(post)
    return kept


def filter_satisfied_pairs(
    posts: list[Post], satisfaction: SatisfactionFilter | None = None
) -> list[tuple[Comment, Comment]]:
    """(comment, reply) pairs where the original poster replied directly
    under the comment with at least one satisfaction cue word."""
    satisfaction = satisfaction or SatisfactionFilter()
    pairs = []
    for post in posts:
        for comment in post.all_comments():
            for reply in comment.children:
                if reply.author != post.author:
                    continue
                if reply.deleted or not reply.body:
                    continue
                if satisfaction.matches(reply.body):
                    pairs.append((comment, reply))
    return pairs


def pipeline_comments(post: Post):
    """Comments eligible for the text pipeline: deleted/empty bodies stay in
    the forest but are excluded here."""
    for comment in post.all_comments():
        if comment.deleted or not comment.body.strip():
            continue
        yield comment


__all__ = [
    "AUTOMODERATOR",
    "Comment",
    "DumpFormatError",
    "IngestResult",
    "Post",
    "SatisfactionFilter",
    "filter_feedback_posts",
    "filter_satisfied_pairs",
    "image_available",
    "load_dump",
    "pipeline_comments",
]
