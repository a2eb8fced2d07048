"""Load post/version/comment dumps into per-answer timelines.

Input is three line-delimited JSON files (posts, versions, comments).
Version 1 of every answer is the initial body; later versions are edits.
Only answers that ever contain a code block are kept.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Iterator

QUESTION = "question"
ANSWER = "answer"


class DumpError(ValueError):
    """Malformed or inconsistent dump input."""


def parse_timestamp(raw: str) -> int:
    """ISO-8601 string -> UTC epoch seconds (sub-second part truncated)."""
    text = raw.strip()
    if text.endswith("Z"):
        text = text[:-1] + "+00:00"
    try:
        dt = datetime.fromisoformat(text)
    except ValueError as exc:
        raise DumpError(f"invalid timestamp {raw!r}: {exc}") from exc
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return int(dt.astimezone(timezone.utc).replace(microsecond=0).timestamp())


def format_timestamp(ts: int) -> str:
    return datetime.fromtimestamp(ts, tz=timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass(frozen=True)
class PostRecord:
    post_id: int
    parent_question_id: int | None
    post_kind: str  # QUESTION or ANSWER
    author_id: int
    created_ts: int
    score: int
    tag: str


@dataclass(frozen=True)
class VersionSnapshot:
    post_id: int
    version_index: int  # 1 = initial body
    editor_id: int
    created_ts: int
    code_blocks: tuple[str, ...]


@dataclass(frozen=True)
class CommentRecord:
    comment_id: int
    post_id: int
    author_id: int
    created_ts: int
    text: str


@dataclass(frozen=True)
class AnswerTimeline:
    answer: PostRecord
    versions: tuple[VersionSnapshot, ...]  # ascending version_index
    comments: tuple[CommentRecord, ...]  # ascending created_ts


@dataclass
class Corpus:
    """Collection of answer timelines plus the question-author lookup.

    Iterating a corpus yields its timelines, so it can be passed anywhere
    a plain collection of AnswerTimeline is expected. question_authors
    maps question post id -> author id for answers whose parent question
    was present in the posts file.
    """

    timelines: tuple[AnswerTimeline, ...]
    question_authors: dict[int, int] = field(default_factory=dict)
    rejected_comment_count: int = 0

    def __iter__(self) -> Iterator[AnswerTimeline]:
        return iter(self.timelines)

    def __len__(self) -> int:
        return len(self.timelines)

    def tag_of(self) -> dict[int, str]:
        return {t.answer.post_id: t.answer.tag for t in self.timelines}


def _read_lines(path) -> Iterator[tuple[int, dict]]:
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DumpError(f"{path}:{line_no}: malformed JSON line ({exc})") from exc
            if not isinstance(obj, dict):
                raise DumpError(f"{path}:{line_no}: expected a JSON object")
            yield line_no, obj


def _require(obj: dict, key: str, path, line_no: int):
    if key not in obj or obj[key] is None:
        raise DumpError(f"{path}:{line_no}: missing field {key!r}")
    return obj[key]


def _parse_post(obj: dict, path, line_no: int) -> PostRecord:
    kind = _require(obj, "kind", path, line_no)
    if kind not in (QUESTION, ANSWER):
        raise DumpError(f"{path}:{line_no}: kind must be 'question' or 'answer', got {kind!r}")
    parent = obj.get("parent_id")
    if kind == ANSWER and parent is None:
        raise DumpError(f"{path}:{line_no}: answer post {obj.get('id')} has no parent_id")
    return PostRecord(
        post_id=int(_require(obj, "id", path, line_no)),
        parent_question_id=int(parent) if parent is not None else None,
        post_kind=kind,
        author_id=int(_require(obj, "author_id", path, line_no)),
        created_ts=parse_timestamp(str(_require(obj, "created_at", path, line_no))),
        score=int(_require(obj, "score", path, line_no)),
        tag=str(_require(obj, "tag", path, line_no)),
    )


def _parse_version(obj: dict, path, line_no: int) -> VersionSnapshot:
    blocks = _require(obj, "code_blocks", path, line_no)
    if not isinstance(blocks, list) or not all(isinstance(b, str) for b in blocks):
        raise DumpError(f"{path}:{line_no}: code_blocks must be an array of strings")
    return VersionSnapshot(
        post_id=int(_require(obj, "post_id", path, line_no)),
        version_index=int(_require(obj, "version", path, line_no)),
        editor_id=int(_require(obj, "editor_id", path, line_no)),
        created_ts=parse_timestamp(str(_require(obj, "created_at", path, line_no))),
        code_blocks=tuple(blocks),
    )


def _parse_comment(obj: dict, path, line_no: int) -> CommentRecord:
    text = str(_require(obj, "text", path, line_no))
    if not text:
        raise DumpError(f"{path}:{line_no}: comment {obj.get('id')} has empty text")
    return CommentRecord(
        comment_id=int(_require(obj, "id", path, line_no)),
        post_id=int(_require(obj, "post_id", path, line_no)),
        author_id=int(_require(obj, "author_id", path, line_no)),
        created_ts=parse_timestamp(str(_require(obj, "created_at", path, line_no))),
        text=text,
    )


def load_dump(posts_path, versions_path, comments_path) -> Corpus:
    """Build validated per-answer timelines from the three dump files.

    Answers with no code block in any version are dropped (together with
    their comments, which are tallied in rejected_comment_count). A
    version or comment whose post_id matches no post in the dump is an
    error; so is a version history that is non-contiguous or whose
    timestamps go backwards.
    """
    posts: dict[int, PostRecord] = {}
    for line_no, obj in _read_lines(posts_path):
        post = _parse_post(obj, posts_path, line_no)
        if post.post_id in posts:
            raise DumpError(f"{posts_path}:{line_no}: duplicate post id {post.post_id}")
        posts[post.post_id] = post

    versions_by_post: dict[int, list[VersionSnapshot]] = {}
    for line_no, obj in _read_lines(versions_path):
        snap = _parse_version(obj, versions_path, line_no)
        if snap.post_id not in posts:
            raise DumpError(
                f"{versions_path}:{line_no}: version {snap.version_index} references "
                f"unknown post {snap.post_id}"
            )
        versions_by_post.setdefault(snap.post_id, []).append(snap)

    comments_by_post: dict[int, list[CommentRecord]] = {}
    for line_no, obj in _read_lines(comments_path):
        comment = _parse_comment(obj, comments_path, line_no)
        if comment.post_id not in posts:
            raise DumpError(
                f"{comments_path}:{line_no}: comment {comment.comment_id} references "
                f"unknown post {comment.post_id}"
            )
        comments_by_post.setdefault(comment.post_id, []).append(comment)

    question_authors = {
        p.post_id: p.author_id for p in posts.values() if p.post_kind == QUESTION
    }

    timelines = []
    rejected_comments = 0
    for post_id in sorted(posts):
        post = posts[post_id]
        if post.post_kind != ANSWER:
            continue
        versions = sorted(versions_by_post.get(post_id, []), key=lambda v: v.version_index)
        if not versions:
            raise DumpError(f"answer {post_id} has no versions (initial body required)")
        for i, snap in enumerate(versions, start=1):
            if snap.version_index != i:
                raise DumpError(
                    f"answer {post_id}: version_index values not contiguous from 1 "
                    f"(found {snap.version_index} at position {i})"
                )
            if i > 1 and snap.created_ts < versions[i - 2].created_ts:
                raise DumpError(
                    f"answer {post_id}: version {snap.version_index} created before "
                    f"version {snap.version_index - 1}"
                )
        comments = sorted(
            comments_by_post.get(post_id, []), key=lambda c: (c.created_ts, c.comment_id)
        )
        if not any(v.code_blocks for v in versions):
            rejected_comments += len(comments)
            continue
        timelines.append(
            AnswerTimeline(answer=post, versions=tuple(versions), comments=tuple(comments))
        )

    # comments on question posts are outside answer timelines
    rejected_comments += sum(
        len(cs) for pid, cs in comments_by_post.items() if posts[pid].post_kind == QUESTION
    )
    return Corpus(
        timelines=tuple(timelines),
        question_authors=question_authors,
        rejected_comment_count=rejected_comments,
    )


CACHE_FORMAT_VERSION = 1


def save_corpus(corpus: Corpus, path) -> None:
    """Write the timeline cache (versioned JSON artifact)."""
    payload = {
        "format_version": CACHE_FORMAT_VERSION,
        "question_authors": {str(k): v for k, v in sorted(corpus.question_authors.items())},
        "rejected_comment_count": corpus.rejected_comment_count,
        "timelines": [
            {
                "answer": {
                    "id": t.answer.post_id,
                    "parent_id": t.answer.parent_question_id,
                    "author_id": t.answer.author_id,
                    "created_at": format_timestamp(t.answer.created_ts),
                    "score": t.answer.score,
                    "tag": t.answer.tag,
                },
                "versions": [
                    {
                        "version": v.version_index,
                        "editor_id": v.editor_id,
                        "created_at": format_timestamp(v.created_ts),
                        "code_blocks": list(v.code_blocks),
                    }
                    for v in t.versions
                ],
                "comments": [
                    {
                        "id": c.comment_id,
                        "author_id": c.author_id,
                        "created_at": format_timestamp(c.created_ts),
                        "text": c.text,
                    }
                    for c in t.comments
                ],
            }
            for t in corpus.timelines
        ],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_corpus(path) -> Corpus:
    """Read a timeline cache written by save_corpus."""
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    version = payload.get("format_version")
    if version != CACHE_FORMAT_VERSION:
        raise DumpError(
            f"{path}: cache format version {version!r} not supported "
            f"(expected {CACHE_FORMAT_VERSION})"
        )
    timelines = []
    for entry in payload["timelines"]:
        a = entry["answer"]
        answer = PostRecord(
            post_id=int(a["id"]),
            parent_question_id=int(a["parent_id"]) if a.get("parent_id") is not None else None,
            post_kind=ANSWER,
            author_id=int(a["author_id"]),
            created_ts=parse_timestamp(a["created_at"]),
            score=int(a["score"]),
            tag=str(a["tag"]),
        )
        versions = tuple(
            VersionSnapshot(
                post_id=answer.post_id,
                version_index=int(v["version"]),
                editor_id=int(v["editor_id"]),
                created_ts=parse_timestamp(v["created_at"]),
                code_blocks=tuple(v["code_blocks"]),
            )
            for v in entry["versions"]
        )
        comments = tuple(
            CommentRecord(
                comment_id=int(c["id"]),
                post_id=answer.post_id,
                author_id=int(c["author_id"]),
                created_ts=parse_timestamp(c["created_at"]),
                text=str(c["text"]),
            )
            for c in entry["comments"]
        )
        timelines.append(AnswerTimeline(answer=answer, versions=versions, comments=comments))
    return Corpus(
        timelines=tuple(timelines),
        question_authors={int(k): v for k, v in payload.get("question_authors", {}).items()},
        rejected_comment_count=int(payload.get("rejected_comment_count", 0)),
    )


def validate_timeline(t: AnswerTimeline) -> list[str]:
    """Return human-readable invariant violations (empty list = valid)."""
    violations = []
    if t.answer.post_kind != ANSWER:
        violations.append(f"answer.post_kind: post {t.answer.post_id} is not an answer")
    if t.answer.post_kind == ANSWER and t.answer.parent_question_id is None:
        violations.append(f"answer.parent_question_id: missing for answer {t.answer.post_id}")
    if not t.versions:
        violations.append(f"versions: empty for answer {t.answer.post_id}")
    for i, snap in enumerate(t.versions, start=1):
        if snap.post_id != t.answer.post_id:
            violations.append(
                f"versions.post_id: version {snap.version_index} references "
                f"{snap.post_id}, expected {t.answer.post_id}"
            )
        if snap.version_index != i:
            violations.append(
                f"versions.version_index: expected {i}, found {snap.version_index} "
                f"for answer {t.answer.post_id}"
            )
        if i > 1 and snap.created_ts < t.versions[i - 2].created_ts:
            violations.append(
                f"versions.created_ts: version {snap.version_index} of answer "
                f"{t.answer.post_id} is earlier than its predecessor"
            )
    prev_ts = None
    for c in t.comments:
        if c.post_id != t.answer.post_id:
            violations.append(
                f"comments.post_id: comment {c.comment_id} references {c.post_id}, "
                f"expected {t.answer.post_id}"
            )
        if not c.text:
            violations.append(f"comments.text: comment {c.comment_id} has empty text")
        if prev_ts is not None and c.created_ts < prev_ts:
            violations.append(
                f"comments.created_ts: comment {c.comment_id} out of chronological order"
            )
        prev_ts = c.created_ts
    return violations
