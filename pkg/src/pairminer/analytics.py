"""Aggregate human annotations over matched pairs and run the study statistics.

Annotations record, per matched pair, whether the match was confirmed and
(for confirmed pairs) whether the edit was tangled, whether the pair is
useful for downstream data sets, and which category the comment falls in.
This module computes the per-category relationship/score/response-time
aggregates and the significance tests used to compare them.
"""

from __future__ import annotations

import csv
import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from statistics import NormalDist

from scipy.special import gammaincc

from .ingest import Corpus
from .matcher import CommentEditPair

OVERALL = "overall"


class Category(Enum):
    CORRECTION = "Correction"
    EXTENSION = "Extension"
    FLAW = "Flaw"
    ERROR = "Error"
    OBSOLETE = "Obsolete"
    DISAGREE = "Disagree"
    QUESTION = "Question"
    REQUEST = "Request"
    SOLUTION = "Solution"
    OTHER = "Other"


@dataclass(frozen=True)
class PairAnnotation:
    answer_id: int
    comment_id: int
    confirmed: bool
    tangled: bool | None = None
    useful: bool | None = None
    category: Category | None = None

    def __post_init__(self) -> None:
        if not self.confirmed and (
            self.tangled is not None or self.useful is not None or self.category is not None
        ):
            raise ValueError(
                f"annotation ({self.answer_id}, {self.comment_id}): tangled/useful/"
                "category labels require a confirmed pair"
            )


_TRUE = {"true", "1", "yes"}
_FALSE = {"false", "0", "no"}


def _parse_bool(raw: str, path, row_no: int, column: str) -> bool | None:
    value = raw.strip().lower()
    if not value:
        return None
    if value in _TRUE:
        return True
    if value in _FALSE:
        return False
    raise ValueError(f"{path}:{row_no}: column {column!r} has non-boolean value {raw!r}")


def load_annotations(path) -> list[PairAnnotation]:
    """Read the annotations CSV (see module docs for the column meanings)."""
    annotations = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"answer_id", "comment_id", "confirmed", "tangled", "useful", "category"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ValueError(
                f"{path}: expected CSV header answer_id,comment_id,confirmed,tangled,useful,category"
            )
        for row_no, row in enumerate(reader, start=2):
            confirmed = _parse_bool(row["confirmed"], path, row_no, "confirmed")
            if confirmed is None:
                raise ValueError(f"{path}:{row_no}: confirmed must be true or false")
            raw_category = (row["category"] or "").strip()
            category = None
            if raw_category:
                try:
                    category = Category(raw_category)
                except ValueError:
                    valid = ", ".join(c.value for c in Category)
                    raise ValueError(
                        f"{path}:{row_no}: unknown category {raw_category!r} (expected one of {valid})"
                    ) from None
            try:
                annotations.append(
                    PairAnnotation(
                        answer_id=int(row["answer_id"]),
                        comment_id=int(row["comment_id"]),
                        confirmed=confirmed,
                        tangled=_parse_bool(row["tangled"], path, row_no, "tangled"),
                        useful=_parse_bool(row["useful"], path, row_no, "useful"),
                        category=category,
                    )
                )
            except ValueError as exc:
                raise ValueError(f"{path}:{row_no}: {exc}") from exc
    return annotations


def _pct(num: int, den: int) -> int:
    """Integer percent, rounding halves up, 0 when the denominator is 0."""
    if den == 0:
        return 0
    return int(Fraction(100 * num, den) + Fraction(1, 2))


@dataclass(frozen=True)
class CategoryStatsRow:
    category: Category
    pairs: int
    commenter_editor_same: int
    commenter_editor_diff: int
    answerer_editor_same: int
    answerer_editor_diff: int
    questioner_commenter_same: int
    questioner_commenter_diff: int
    mean_score: float
    mean_response_time_s: float


def aggregate_relationships(
    pairs: list[CommentEditPair],
    annotations: list[PairAnnotation],
    corpus: Corpus,
    response_time_cutoff_s: float | None = None,
) -> list[CategoryStatsRow]:
    """Per-category user-relationship and score/response-time aggregates.

    Covers confirmed annotations that carry a category. The commenter is
    the comment author, the editor is whoever created the matched
    version, the answerer is the answer author, and the questioner is the
    author of the parent question. response_time_cutoff_s, when given,
    drops outlier response times from the mean (counts are unaffected).
    """
    timeline_by_id = {t.answer.post_id: t for t in corpus.timelines}
    pair_by_key = {(p.answer_id, p.comment_id): p for p in pairs}
    groups: dict[Category, list[tuple[bool, bool, bool, int, int]]] = {}

    for ann in annotations:
        if not ann.confirmed or ann.category is None:
            continue
        key = (ann.answer_id, ann.comment_id)
        pair = pair_by_key.get(key)
        if pair is None:
            raise ValueError(f"annotation {key} has no matching detected pair")
        timeline = timeline_by_id.get(ann.answer_id)
        if timeline is None:
            raise ValueError(f"annotation {key} references answer {ann.answer_id} with no timeline")
        if not 1 <= pair.edit_version <= len(timeline.versions):
            raise ValueError(
                f"pair {key} references version {pair.edit_version} of answer "
                f"{ann.answer_id}, which has {len(timeline.versions)} versions"
            )
        version = timeline.versions[pair.edit_version - 1]
        comment = next((c for c in timeline.comments if c.comment_id == ann.comment_id), None)
        if comment is None:
            raise ValueError(f"pair {key} references a comment missing from the timeline")
        questioner = corpus.question_authors.get(timeline.answer.parent_question_id)
        if questioner is None:
            raise ValueError(
                f"pair {key}: question {timeline.answer.parent_question_id} "
                "not present in the corpus, questioner unknown"
            )
        groups.setdefault(ann.category, []).append(
            (
                comment.author_id == version.editor_id,
                timeline.answer.author_id == version.editor_id,
                questioner == comment.author_id,
                timeline.answer.score,
                version.created_ts - comment.created_ts,
            )
        )

    rows = []
    for category in Category:
        entries = groups.get(category)
        if not entries:
            continue
        n = len(entries)
        ce_same = sum(1 for e in entries if e[0])
        ae_same = sum(1 for e in entries if e[1])
        qc_same = sum(1 for e in entries if e[2])
        response_times = [e[4] for e in entries]
        if response_time_cutoff_s is not None:
            response_times = [rt for rt in response_times if rt <= response_time_cutoff_s]
        rows.append(
            CategoryStatsRow(
                category=category,
                pairs=n,
                commenter_editor_same=ce_same,
                commenter_editor_diff=n - ce_same,
                answerer_editor_same=ae_same,
                answerer_editor_diff=n - ae_same,
                questioner_commenter_same=qc_same,
                questioner_commenter_diff=n - qc_same,
                mean_score=sum(e[3] for e in entries) / n,
                mean_response_time_s=(
                    sum(response_times) / len(response_times) if response_times else 0.0
                ),
            )
        )
    return rows


@dataclass(frozen=True)
class CategoryCountRow:
    category: str  # category name, or "overall" for the totals row
    total: int
    useful: int
    useful_pct: int


def category_counts(annotations: list[PairAnnotation]) -> list[CategoryCountRow]:
    """Confirmed and useful pair counts per category, totals row last."""
    totals: Counter = Counter()
    useful: Counter = Counter()
    confirmed_n = 0
    useful_n = 0
    for ann in annotations:
        if not ann.confirmed:
            continue
        confirmed_n += 1
        if ann.useful:
            useful_n += 1
        if ann.category is not None:
            totals[ann.category] += 1
            if ann.useful:
                useful[ann.category] += 1
    rows = [
        CategoryCountRow(
            category=c.value,
            total=totals[c],
            useful=useful[c],
            useful_pct=_pct(useful[c], totals[c]),
        )
        for c in Category
    ]
    rows.append(CategoryCountRow(OVERALL, confirmed_n, useful_n, _pct(useful_n, confirmed_n)))
    return rows


@dataclass(frozen=True)
class TangledRow:
    tag: str
    confirmed: int
    tangled: int
    tangled_pct: int
    useful: int
    useful_pct: int
    tangled_useful: int
    tangled_useful_pct: int  # share of useful pairs that are tangled


def tangled_rate(
    annotations: list[PairAnnotation], tag_of: dict[int, str] | None = None
) -> list[TangledRow]:
    """Tangled/useful counts and rates per tag (when tags are known) and overall."""

    def make_row(tag: str, anns: list[PairAnnotation]) -> TangledRow:
        confirmed = [a for a in anns if a.confirmed]
        tangled = sum(1 for a in confirmed if a.tangled)
        useful = sum(1 for a in confirmed if a.useful)
        tangled_useful = sum(1 for a in confirmed if a.tangled and a.useful)
        return TangledRow(
            tag=tag,
            confirmed=len(confirmed),
            tangled=tangled,
            tangled_pct=_pct(tangled, len(confirmed)),
            useful=useful,
            useful_pct=_pct(useful, len(confirmed)),
            tangled_useful=tangled_useful,
            tangled_useful_pct=_pct(tangled_useful, useful),
        )

    rows = []
    if tag_of is not None:
        by_tag: dict[str, list[PairAnnotation]] = {}
        for ann in annotations:
            tag = tag_of.get(ann.answer_id)
            if tag is None:
                raise ValueError(f"annotation answer {ann.answer_id} has no tag mapping")
            by_tag.setdefault(tag, []).append(ann)
        rows.extend(make_row(tag, by_tag[tag]) for tag in sorted(by_tag))
    rows.append(make_row(OVERALL, list(annotations)))
    return rows


def chi_squared_independence(contingency: list[list[float]]) -> tuple[float, int, float]:
    """Pearson chi-squared test of independence on an r x c count table.

    Expected counts come from the row/column marginals; the p-value is the
    upper tail of the chi-squared distribution (regularized incomplete
    gamma). Rows or columns summing to zero are rejected.
    """
    r = len(contingency)
    if r < 2 or any(len(row) != len(contingency[0]) for row in contingency):
        raise ValueError("contingency table must be rectangular with at least 2 rows")
    c = len(contingency[0])
    if c < 2:
        raise ValueError("contingency table must have at least 2 columns")
    if any(v < 0 for row in contingency for v in row):
        raise ValueError("contingency counts must be non-negative")
    row_sums = [sum(row) for row in contingency]
    col_sums = [sum(row[j] for row in contingency) for j in range(c)]
    total = sum(row_sums)
    if any(s == 0 for s in row_sums) or any(s == 0 for s in col_sums):
        raise ValueError("contingency table has a zero row or column marginal")
    statistic = 0.0
    for i in range(r):
        for j in range(c):
            expected = row_sums[i] * col_sums[j] / total
            statistic += (contingency[i][j] - expected) ** 2 / expected
    dof = (r - 1) * (c - 1)
    p = float(gammaincc(dof / 2.0, statistic / 2.0))
    return statistic, dof, p


def _u_distribution(n1: int, n2: int) -> list[int]:
    """Counts of the Mann-Whitney U distribution via the standard recurrence."""
    # f(a, b, u): number of arrangements; build table iteratively
    prev = {0: [1]}  # b -> counts over u for a = 0
    for b in range(1, n2 + 1):
        prev[b] = [1]
    table = prev
    for a in range(1, n1 + 1):
        new_table: dict[int, list[int]] = {0: [1]}
        for b in range(1, n2 + 1):
            max_u = a * b
            counts = [0] * (max_u + 1)
            left = new_table[b - 1]  # f(a, b-1, u)
            down = table[b]  # f(a-1, b, u - b)
            for u in range(max_u + 1):
                v = 0
                if u < len(left):
                    v += left[u]
                if 0 <= u - b < len(down):
                    v += down[u - b]
                counts[u] = v
            new_table[b] = counts
        table = new_table
    return table[n2]


def rank_sum_test(a: list[float], b: list[float]) -> tuple[float, float]:
    """Two-sided Mann-Whitney rank-sum test; returns (U of sample a, p).

    Tie-free small samples get the exact permutation p-value; otherwise
    the normal approximation with midrank tie correction and continuity
    correction is used. Identical values across both samples leave zero
    variance and are rejected.
    """
    if not a or not b:
        raise ValueError("both samples must be non-empty")
    n1, n2 = len(a), len(b)
    combined = sorted((v, 0 if i < n1 else 1) for i, v in enumerate(list(a) + list(b)))
    # midranks
    ranks = [0.0] * (n1 + n2)
    i = 0
    tie_term = 0.0
    values = [v for v, _ in combined]
    while i < len(values):
        j = i
        while j < len(values) and values[j] == values[i]:
            j += 1
        midrank = (i + j + 1) / 2.0
        for k in range(i, j):
            ranks[k] = midrank
        t = j - i
        tie_term += t**3 - t
        i = j
    r1 = sum(rank for rank, (_, group) in zip(ranks, combined) if group == 0)
    u1 = r1 - n1 * (n1 + 1) / 2.0
    u2 = n1 * n2 - u1

    n = n1 + n2
    has_ties = tie_term > 0
    if not has_ties and n1 * n2 <= 400:
        counts = _u_distribution(n1, n2)
        total = sum(counts)
        u_min = min(u1, u2)
        lower = sum(counts[u] for u in range(int(u_min) + 1))
        p = min(1.0, 2.0 * lower / total)
        return u1, p

    mean = n1 * n2 / 2.0
    variance = n1 * n2 / 12.0 * ((n + 1) - tie_term / (n * (n - 1)))
    if variance <= 0:
        raise ValueError("all values identical: rank-sum test undefined")
    delta = u1 - mean
    if delta > 0:
        delta -= 0.5
    elif delta < 0:
        delta += 0.5
    z = delta / math.sqrt(variance)
    p = 2.0 * NormalDist().cdf(-abs(z))
    return u1, min(1.0, p)


def bh_adjust(pvalues: list[float]) -> list[float]:
    """Benjamini-Hochberg step-up adjustment, returned in input order."""
    for p in pvalues:
        if not 0 <= p <= 1:
            raise ValueError(f"p-value out of [0, 1]: {p}")
    m = len(pvalues)
    if m == 0:
        return []
    order = sorted(range(m), key=lambda i: pvalues[i])
    adjusted = [0.0] * m
    running_min = 1.0
    for rank in range(m, 0, -1):
        idx = order[rank - 1]
        running_min = min(running_min, pvalues[idx] * m / rank)
        # the step-up minimum can round a hair below p; it is never below it exactly
        adjusted[idx] = min(max(running_min, pvalues[idx]), 1.0)
    return adjusted


def questioner_commenter_contingency(rows: list[CategoryStatsRow]) -> list[list[int]]:
    """2 x C same/diff table over categories, dropping all-zero columns."""
    same = []
    diff = []
    for row in rows:
        if row.questioner_commenter_same + row.questioner_commenter_diff > 0:
            same.append(row.questioner_commenter_same)
            diff.append(row.questioner_commenter_diff)
    return [same, diff]
