"""Score detected pairs against labeled ground truth.

Covers precision/recall reporting per tag, Cohen's Kappa for inter-rater
agreement tables, the Cochran sample-size formula with finite-population
correction, and the similarity-threshold sweep.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from statistics import NormalDist

from .codeterm import RegexCatalog
from .matcher import CommentEditPair, MatchConfig, match_corpus

OVERALL = "overall"


@dataclass(frozen=True)
class GroundTruthEntry:
    answer_id: int
    comment_id: int
    edit_version: int | None  # None = the comment caused no edit


def load_ground_truth(path) -> list[GroundTruthEntry]:
    """Read a ground-truth CSV (answer_id, comment_id, edit_version-or-empty)."""
    entries = []
    seen = set()
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"answer_id", "comment_id", "edit_version"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ValueError(f"{path}: expected CSV header answer_id,comment_id,edit_version")
        for row_no, row in enumerate(reader, start=2):
            answer_id = int(row["answer_id"])
            comment_id = int(row["comment_id"])
            key = (answer_id, comment_id)
            if key in seen:
                raise ValueError(f"{path}:{row_no}: duplicate ground-truth entry {key}")
            seen.add(key)
            raw = (row["edit_version"] or "").strip()
            entries.append(
                GroundTruthEntry(answer_id, comment_id, int(raw) if raw else None)
            )
    return entries


@dataclass(frozen=True)
class EvalRow:
    tag: str
    existing: int
    detected: int
    correct: int
    precision: float
    recall: float


@dataclass(frozen=True)
class EvalReport:
    rows: tuple[EvalRow, ...]  # per-tag rows, overall last

    @property
    def overall(self) -> EvalRow:
        return self.rows[-1]


def _make_row(tag: str, existing: int, detected: int, correct: int) -> EvalRow:
    return EvalRow(
        tag=tag,
        existing=existing,
        detected=detected,
        correct=correct,
        precision=correct / detected if detected else 0.0,
        recall=correct / existing if existing else 0.0,
    )


def score(
    detected: list[CommentEditPair],
    gt: list[GroundTruthEntry],
    tag_of: dict[int, str],
) -> EvalReport:
    """Per-tag and overall precision/recall of detected pairs.

    A detected pair is correct iff the ground truth holds the same
    (answer_id, comment_id) pair with the same edit_version.
    """
    if not gt:
        raise ValueError("ground truth must be non-empty")
    keys = set()
    for entry in gt:
        key = (entry.answer_id, entry.comment_id)
        if key in keys:
            raise ValueError(f"duplicate ground-truth entry {key}")
        keys.add(key)

    positives = {
        (e.answer_id, e.comment_id, e.edit_version)
        for e in gt
        if e.edit_version is not None
    }
    tags = sorted(set(tag_of.values()))
    existing = {tag: 0 for tag in tags}
    detected_n = {tag: 0 for tag in tags}
    correct_n = {tag: 0 for tag in tags}

    for e in gt:
        if e.edit_version is None:
            continue
        if e.answer_id not in tag_of:
            raise ValueError(f"ground-truth answer {e.answer_id} has no tag mapping")
        existing[tag_of[e.answer_id]] += 1
    for p in detected:
        if p.answer_id not in tag_of:
            raise ValueError(f"detected pair references answer {p.answer_id} with no tag mapping")
        tag = tag_of[p.answer_id]
        detected_n[tag] += 1
        if (p.answer_id, p.comment_id, p.edit_version) in positives:
            correct_n[tag] += 1

    rows = [_make_row(tag, existing[tag], detected_n[tag], correct_n[tag]) for tag in tags]
    rows.append(
        _make_row(
            OVERALL,
            sum(existing.values()),
            sum(detected_n.values()),
            sum(correct_n.values()),
        )
    )
    return EvalReport(rows=tuple(rows))


@dataclass(frozen=True)
class AgreementTable:
    categories: tuple[str, ...]
    counts: tuple[tuple[int, ...], ...]  # counts[i][j]: rater A said i, rater B said j

    def __post_init__(self) -> None:
        n = len(self.categories)
        if len(self.counts) != n or any(len(row) != n for row in self.counts):
            raise ValueError("agreement table must be square with one row per category")
        if any(c < 0 for row in self.counts for c in row):
            raise ValueError("agreement counts must be non-negative")
        if sum(c for row in self.counts for c in row) == 0:
            raise ValueError("agreement table must have a positive total")


def load_agreement_table(path) -> AgreementTable:
    """CSV matrix with category labels on the header row and first column."""
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if len(rows) < 2:
        raise ValueError(f"{path}: expected a labeled square matrix")
    categories = tuple(label.strip() for label in rows[0][1:])
    counts = []
    for row in rows[1:]:
        counts.append(tuple(int(c) for c in row[1 : len(categories) + 1]))
    row_labels = tuple(row[0].strip() for row in rows[1:])
    if row_labels != categories:
        raise ValueError(f"{path}: row labels {row_labels} do not match columns {categories}")
    return AgreementTable(categories=categories, counts=tuple(counts))


def cohen_kappa(t: AgreementTable) -> float:
    """Chance-corrected agreement (p_o - p_e) / (1 - p_e), exact over the counts."""
    total = sum(c for row in t.counts for c in row)
    n = len(t.categories)
    p_o = Fraction(sum(t.counts[i][i] for i in range(n)), total)
    p_e = Fraction(0)
    for i in range(n):
        row_sum = sum(t.counts[i])
        col_sum = sum(t.counts[j][i] for j in range(n))
        p_e += Fraction(row_sum * col_sum, total * total)
    if p_e == 1:
        raise ValueError("expected agreement is 1: kappa undefined")
    return float((p_o - p_e) / (1 - p_e))


def sample_size(population: int, confidence: float, interval: float) -> int:
    """Cochran sample size (p = 0.5) with finite-population correction, rounded up."""
    if population < 1:
        raise ValueError("population must be >= 1")
    if not 0 < confidence < 1 or not 0 < interval < 1:
        raise ValueError("confidence and interval must be in (0, 1)")
    z = NormalDist().inv_cdf(1 - (1 - confidence) / 2)
    n0 = z * z * 0.25 / (interval * interval)
    return math.ceil(n0 / (1 + (n0 - 1) / population))


@dataclass(frozen=True)
class SweepPoint:
    threshold: float
    existing: int
    detected: int
    correct: int
    precision: float
    recall: float


def threshold_sweep(
    timelines,
    catalog: RegexCatalog,
    gt: list[GroundTruthEntry],
    thresholds: list[float],
    tag_of: dict[int, str] | None = None,
    base_cfg: MatchConfig | None = None,
    jobs: int = 1,
) -> list[SweepPoint]:
    """Overall matching scores across ascending similarity thresholds."""
    if sorted(thresholds) != list(thresholds):
        raise ValueError("thresholds must be sorted ascending")
    ts = list(timelines)
    if tag_of is None:
        tag_of = {t.answer.post_id: t.answer.tag for t in ts}
    base_cfg = base_cfg or MatchConfig()
    points = []
    for threshold in thresholds:
        cfg = MatchConfig(
            threshold=threshold,
            similarity_norm=base_cfg.similarity_norm,
            require_distinct_authors=base_cfg.require_distinct_authors,
        )
        pairs = match_corpus(ts, catalog, cfg, jobs=jobs)
        overall = score(pairs, gt, tag_of).overall
        points.append(
            SweepPoint(
                threshold=threshold,
                existing=overall.existing,
                detected=overall.detected,
                correct=overall.correct,
                precision=overall.precision,
                recall=overall.recall,
            )
        )
    return points
