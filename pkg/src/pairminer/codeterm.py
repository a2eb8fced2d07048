"""Code-term extraction and fuzzy matching primitives.

Code terms are code-like tokens (identifiers, method calls, inline code
spans) pulled out of free text or code blocks by an ordered catalog of
regular expressions. Terms are kept as multisets (bags) so that a term
occurring twice in a snippet counts twice. Matching between bags uses
Levenshtein-based similarity ratios.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass
from importlib import resources

# Similarity normalizations. max-norm divides the edit distance by the
# longer string; sum-norm mirrors the classic ratio() normalization
# (substitutions cost 2, divided by the summed lengths).
MAX_NORM = "max-norm"
SUM_NORM = "sum-norm"

TermBag = Counter  # term -> occurrence count, counts always >= 1


class CatalogError(ValueError):
    """Raised when a regex catalog file is malformed or does not compile."""


@dataclass(frozen=True)
class CatalogPattern:
    name: str
    expression: str

    def compile(self) -> re.Pattern:
        return re.compile(self.expression)


@dataclass(frozen=True)
class RegexCatalog:
    """Ordered list of named patterns, applied independently to input text."""

    patterns: tuple[CatalogPattern, ...]

    def __post_init__(self) -> None:
        names = [p.name for p in self.patterns]
        if len(names) != len(set(names)):
            raise CatalogError("duplicate pattern names in catalog")
        compiled = []
        for p in self.patterns:
            try:
                compiled.append(p.compile())
            except re.error as exc:
                raise CatalogError(
                    f"pattern {p.name!r} does not compile: {p.expression!r} ({exc})"
                ) from exc
        object.__setattr__(self, "_compiled", tuple(compiled))

    @property
    def compiled(self) -> tuple[re.Pattern, ...]:
        return self._compiled  # type: ignore[attr-defined]


def load_catalog(path) -> RegexCatalog:
    """Load a catalog from a JSON array of {"name", "pattern"} objects."""
    with open(path, encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise CatalogError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(raw, list):
        raise CatalogError(f"{path}: expected a JSON array of pattern objects")
    patterns = []
    for i, entry in enumerate(raw):
        if not isinstance(entry, dict) or "name" not in entry or "pattern" not in entry:
            raise CatalogError(f"{path}: entry {i} must have 'name' and 'pattern' keys")
        patterns.append(CatalogPattern(name=str(entry["name"]), expression=str(entry["pattern"])))
    return RegexCatalog(patterns=tuple(patterns))


def default_catalog() -> RegexCatalog:
    """The catalog shipped with the package (data/default_catalog.json)."""
    path = resources.files("pairminer").joinpath("data/default_catalog.json")
    with resources.as_file(path) as p:
        return load_catalog(p)


def _strip_delimiters(text: str, start: int, end: int) -> tuple[int, int]:
    """Shrink [start, end) to drop surrounding backticks, <code> tags, and whitespace."""
    changed = True
    while changed:
        changed = False
        while start < end and text[start] == "`":
            start += 1
            changed = True
        while start < end and text[end - 1] == "`":
            end -= 1
            changed = True
        if text[start:end].startswith("<code>"):
            start += len("<code>")
            changed = True
        if text[start:end].endswith("</code>"):
            end -= len("</code>")
            changed = True
        while start < end and text[start].isspace():
            start += 1
            changed = True
        while start < end and text[end - 1].isspace():
            end -= 1
            changed = True
    return start, end


def extract_terms(text: str, catalog: RegexCatalog) -> TermBag:
    """Extract the bag of code terms from raw text.

    Every pattern is applied independently (non-overlapping matches per
    pattern). An occurrence is identified by the character span left after
    stripping surrounding backticks / <code> delimiters / whitespace, so
    two patterns capturing the same region yield one occurrence while a
    term appearing in two places counts twice. Terms shorter than two
    characters are noise and dropped.
    """
    spans: set[tuple[int, int]] = set()
    for pattern in catalog.compiled:
        for m in pattern.finditer(text):
            start, end = _strip_delimiters(text, m.start(), m.end())
            if end - start >= 2:
                spans.add((start, end))
    bag: TermBag = Counter()
    for start, end in spans:
        bag[text[start:end]] += 1
    return bag


def bag_symmetric_diff(a: TermBag, b: TermBag) -> TermBag:
    """Per-term absolute count difference; terms that cancel out are omitted."""
    result: TermBag = Counter()
    for term in a.keys() | b.keys():
        delta = abs(a.get(term, 0) - b.get(term, 0))
        if delta:
            result[term] = delta
    return result


def levenshtein(a: str, b: str) -> int:
    """Minimum number of single-character insertions, deletions, substitutions."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        append = cur.append
        for j, cb in enumerate(b, start=1):
            append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def _indel_sub2_distance(a: str, b: str) -> int:
    """Edit distance with substitution cost 2 (equals |a|+|b| - 2*LCS)."""
    if a == b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        append = cur.append
        for j, cb in enumerate(b, start=1):
            if ca == cb:
                append(prev[j - 1])
            else:
                append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + 2))
        prev = cur
    return prev[-1]


def similarity(a: str, b: str, norm: str = MAX_NORM) -> float:
    """Similarity ratio in [0, 100]; 100 iff the strings are equal.

    max-norm: 100 * (1 - levenshtein(a, b) / max(|a|, |b|))
    sum-norm: 100 * (|a| + |b| - d) / (|a| + |b|) with substitutions costing 2
    """
    if not a and not b:
        raise ValueError("similarity of two empty strings is undefined")
    if norm == MAX_NORM:
        return 100.0 * (1.0 - levenshtein(a, b) / max(len(a), len(b)))
    if norm == SUM_NORM:
        total = len(a) + len(b)
        return 100.0 * (total - _indel_sub2_distance(a, b)) / total
    raise ValueError(f"unknown similarity norm: {norm!r}")


@dataclass(frozen=True)
class TermMatch:
    comment_term: str
    diff_term: str
    similarity: float


def _best_possible(a: str, b: str, norm: str) -> float:
    # Length difference lower-bounds the edit distance; cheap prefilter.
    la, lb = len(a), len(b)
    gap = abs(la - lb)
    if norm == MAX_NORM:
        return 100.0 * (1.0 - gap / max(la, lb))
    return 100.0 * (la + lb - gap) / (la + lb)


def fuzzy_intersect(
    comment_bag: TermBag,
    diff_bag: TermBag,
    threshold: float,
    norm: str = MAX_NORM,
) -> list[TermMatch]:
    """Match comment terms against diff terms at a similarity threshold.

    For each distinct comment term the best-scoring diff term at or above
    the threshold is reported (ties broken by lexicographically smallest
    diff term); comment terms with no qualifying diff term are dropped.
    Output is sorted by comment term.
    """
    if not 0 <= threshold <= 100:
        raise ValueError(f"threshold must be in [0, 100], got {threshold}")
    diff_terms = sorted(diff_bag)
    matches = []
    for term in sorted(comment_bag):
        best_term = None
        best_sim = -1.0
        for candidate in diff_terms:
            if _best_possible(term, candidate, norm) <= best_sim:
                continue
            sim = similarity(term, candidate, norm)
            if sim > best_sim:
                best_sim = sim
                best_term = candidate
        if best_term is not None and best_sim >= threshold:
            matches.append(TermMatch(term, best_term, best_sim))
    return matches
