"""Match answer comments to the code edits they caused.

The code-check matcher walks each comment over the answer's versions in
order: a version is a candidate when it was created strictly after the
comment and (by default) by a different user. For a candidate, code terms
in the comment are fuzzy-intersected with the symmetric difference of the
code terms in the candidate and its preceding version; the first
non-empty intersection wins and scanning stops for that comment. The
previous-version pointer advances over every version, including the
skipped ones, so a diff may span a version the commenter authored.

The proximity baseline pairs each comment with the chronologically
nearest later edit regardless of content or authorship.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .codeterm import (
    MAX_NORM,
    SUM_NORM,
    RegexCatalog,
    TermBag,
    TermMatch,
    bag_symmetric_diff,
    extract_terms,
    fuzzy_intersect,
)
from .ingest import AnswerTimeline, VersionSnapshot

CODE_CHECK = "code-check"
PROXIMITY_BASELINE = "proximity-baseline"


@dataclass(frozen=True)
class MatchConfig:
    threshold: float = 90.0
    similarity_norm: str = MAX_NORM
    require_distinct_authors: bool = True

    def __post_init__(self) -> None:
        if not 0 <= self.threshold <= 100:
            raise ValueError(f"threshold must be in [0, 100], got {self.threshold}")
        if self.similarity_norm not in (MAX_NORM, SUM_NORM):
            raise ValueError(f"unknown similarity norm: {self.similarity_norm!r}")


@dataclass(frozen=True)
class CommentEditPair:
    answer_id: int
    comment_id: int
    edit_version: int  # >= 2
    matches: tuple[TermMatch, ...]
    method: str = CODE_CHECK

    def __post_init__(self) -> None:
        if self.method == CODE_CHECK and not self.matches:
            raise ValueError("code-check pairs must carry at least one term match")
        if self.method == PROXIMITY_BASELINE and self.matches:
            raise ValueError("baseline pairs carry no term matches")


def version_terms(version: VersionSnapshot, catalog: RegexCatalog) -> TermBag:
    """Bag of code terms over all code blocks of a version (empty blocks -> empty bag)."""
    bag: TermBag = Counter()
    for block in version.code_blocks:
        bag.update(extract_terms(block, catalog))
    return bag


def match_answer(
    t: AnswerTimeline, catalog: RegexCatalog, cfg: MatchConfig | None = None
) -> list[CommentEditPair]:
    """Run the code-check matching algorithm on a single answer timeline."""
    cfg = cfg or MatchConfig()
    versions = sorted(t.versions, key=lambda v: v.version_index)
    if len(versions) < 2:
        return []
    bags = [version_terms(v, catalog) for v in versions]
    pairs = []
    for comment in sorted(t.comments, key=lambda c: (c.created_ts, c.comment_id)):
        comment_terms = extract_terms(comment.text, catalog)
        if not comment_terms:
            continue
        for k in range(1, len(versions)):
            edit = versions[k]
            if edit.created_ts > comment.created_ts and (
                not cfg.require_distinct_authors or edit.editor_id != comment.author_id
            ):
                diff = bag_symmetric_diff(bags[k], bags[k - 1])
                matches = fuzzy_intersect(
                    comment_terms, diff, cfg.threshold, cfg.similarity_norm
                )
                if matches:
                    pairs.append(
                        CommentEditPair(
                            answer_id=t.answer.post_id,
                            comment_id=comment.comment_id,
                            edit_version=edit.version_index,
                            matches=tuple(matches),
                        )
                    )
                    break
    return pairs


def baseline_match(t: AnswerTimeline) -> list[CommentEditPair]:
    """Pair each comment with the nearest later edit, content-blind."""
    edits = sorted(
        (v for v in t.versions if v.version_index >= 2),
        key=lambda v: (v.created_ts, v.version_index),
    )
    pairs = []
    for comment in sorted(t.comments, key=lambda c: (c.created_ts, c.comment_id)):
        for edit in edits:
            if edit.created_ts > comment.created_ts:
                pairs.append(
                    CommentEditPair(
                        answer_id=t.answer.post_id,
                        comment_id=comment.comment_id,
                        edit_version=edit.version_index,
                        matches=(),
                        method=PROXIMITY_BASELINE,
                    )
                )
                break
    return pairs


def match_corpus(
    timelines,
    catalog: RegexCatalog,
    cfg: MatchConfig | None = None,
    jobs: int = 1,
    baseline: bool = False,
) -> list[CommentEditPair]:
    """Match every timeline; output ordered by (answer_id, comment_id)."""
    cfg = cfg or MatchConfig()
    ts = list(timelines)

    def run(t: AnswerTimeline) -> list[CommentEditPair]:
        return baseline_match(t) if baseline else match_answer(t, catalog, cfg)

    if jobs > 1 and len(ts) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            per_answer = list(pool.map(run, ts))
    else:
        per_answer = [run(t) for t in ts]
    pairs = [p for chunk in per_answer for p in chunk]
    pairs.sort(key=lambda p: (p.answer_id, p.comment_id))
    return pairs


def pair_to_json(pair: CommentEditPair) -> dict:
    return {
        "answer_id": pair.answer_id,
        "comment_id": pair.comment_id,
        "edit_version": pair.edit_version,
        "method": pair.method,
        "matches": [
            {
                "comment_term": m.comment_term,
                "diff_term": m.diff_term,
                "similarity": m.similarity,
            }
            for m in pair.matches
        ],
    }


def pair_from_json(obj: dict) -> CommentEditPair:
    return CommentEditPair(
        answer_id=int(obj["answer_id"]),
        comment_id=int(obj["comment_id"]),
        edit_version=int(obj["edit_version"]),
        method=obj.get("method", CODE_CHECK),
        matches=tuple(
            TermMatch(m["comment_term"], m["diff_term"], float(m["similarity"]))
            for m in obj.get("matches", ())
        ),
    )
