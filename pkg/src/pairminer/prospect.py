"""Find external repositories where a pair's pre-edit snippet occurs.

The repository host is abstracted behind a small client interface with
three implementations: a live GitHub REST client, a replay client fed by
a recorded JSON fixture (all tests run offline), and a recorder that
wraps a live client to produce such fixtures. File contents can come
from the host API or from a shallow git clone.
"""

from __future__ import annotations

import json
import os
import subprocess
import tempfile
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import requests

from .ingest import AnswerTimeline, parse_timestamp
from .matcher import CommentEditPair

TOKEN_ENV_VAR = "PAIRMINER_GH_TOKEN"

CONTAINING_BLOCK = "containing-block"
WHOLE_VERSION = "whole-version"


class SearchError(RuntimeError):
    """Repository host query failed."""

    def __init__(self, message: str, retry_after: float | None = None):
        super().__init__(message)
        self.retry_after = retry_after


class RateLimitError(SearchError):
    """Rate limit still exceeded after backoff."""


@dataclass(frozen=True)
class RepoCriteria:
    language: str
    min_stars: int = 5
    max_days_since_push: int = 90
    min_closed_prs: int = 1

    def __post_init__(self) -> None:
        for name in ("min_stars", "max_days_since_push", "min_closed_prs"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")


@dataclass(frozen=True)
class RepoInfo:
    full_name: str  # owner/name
    language: str
    stars: int
    pushed_at: int  # UTC epoch seconds


@dataclass(frozen=True)
class MatchSite:
    repo: str
    file_path: str
    line_start: int  # 1-based
    snippet: str


@dataclass(frozen=True)
class PrCandidate:
    pair: CommentEditPair
    site: MatchSite
    proposed_description: str

    def __post_init__(self) -> None:
        if not self.proposed_description:
            raise ValueError("proposed_description must be non-empty")


class RepoHostClient:
    """Read-only repository host interface used by the prospecting steps."""

    def search_repositories(self, criteria: RepoCriteria) -> list[RepoInfo]:
        raise NotImplementedError

    def closed_pull_request_count(self, full_name: str) -> int:
        raise NotImplementedError

    def list_files(self, full_name: str) -> list[str]:
        raise NotImplementedError

    def file_contents(self, full_name: str, path: str) -> str:
        raise NotImplementedError


def search_repos(
    criteria: RepoCriteria, client: RepoHostClient, as_of: int | None = None
) -> list[str]:
    """Repository identifiers satisfying all criteria, by descending stars.

    The client may over-return; every criterion is re-checked against the
    metadata the client reports. as_of fixes the reference time for the
    recency check (defaults to the current time).
    """
    if as_of is None:
        as_of = int(time.time())
    cutoff_seconds = criteria.max_days_since_push * 86400
    selected: dict[str, RepoInfo] = {}
    for repo in client.search_repositories(criteria):
        if repo.full_name in selected:
            continue
        if repo.language.lower() != criteria.language.lower():
            continue
        if repo.stars < criteria.min_stars:
            continue
        if as_of - repo.pushed_at > cutoff_seconds:
            continue
        if client.closed_pull_request_count(repo.full_name) < criteria.min_closed_prs:
            continue
        selected[repo.full_name] = repo
    ordered = sorted(selected.values(), key=lambda r: (-r.stars, r.full_name))
    return [r.full_name for r in ordered]


def normalize_code(text: str) -> str:
    """LF line endings, trailing whitespace stripped from every line."""
    lines = text.replace("\r\n", "\n").replace("\r", "\n").split("\n")
    return "\n".join(line.rstrip() for line in lines)


def _snippet_lines(snippet: str) -> list[str]:
    lines = normalize_code(snippet).split("\n")
    while lines and not lines[0]:
        lines.pop(0)
    while lines and not lines[-1]:
        lines.pop()
    return lines


def find_code_sites(files, before_snippet: str, repo: str = "") -> list[MatchSite]:
    """Whole-line exact occurrences of the snippet in (path, contents) files.

    Both sides are normalized (LF endings, trailing whitespace dropped)
    before comparison, so CRLF files and snippets with ragged right edges
    still match. line_start is 1-based.
    """
    wanted = _snippet_lines(before_snippet)
    if not wanted:
        raise ValueError("before snippet is empty after normalization")
    sites = []
    for path, contents in files:
        lines = normalize_code(contents).split("\n")
        for i in range(len(lines) - len(wanted) + 1):
            if lines[i : i + len(wanted)] == wanted:
                sites.append(
                    MatchSite(
                        repo=repo,
                        file_path=path,
                        line_start=i + 1,
                        snippet="\n".join(wanted),
                    )
                )
    sites.sort(key=lambda s: (s.repo, s.file_path, s.line_start))
    return sites


def before_snippet_for_pair(
    timeline: AnswerTimeline, pair: CommentEditPair, strategy: str = CONTAINING_BLOCK
) -> str:
    """The pre-edit code to look for in target repositories.

    containing-block picks the pre-version code block containing the
    best-matching diff term; whole-version concatenates all pre-version
    blocks. Falls back to the concatenation when no block contains any
    matched term.
    """
    if pair.edit_version < 2 or pair.edit_version > len(timeline.versions):
        raise ValueError(
            f"pair ({pair.answer_id}, {pair.comment_id}) references version "
            f"{pair.edit_version} outside the timeline"
        )
    pre_version = timeline.versions[pair.edit_version - 2]
    joined = "\n\n".join(pre_version.code_blocks)
    if strategy == WHOLE_VERSION:
        return joined
    if strategy != CONTAINING_BLOCK:
        raise ValueError(f"unknown before-snippet strategy: {strategy!r}")
    for match in sorted(pair.matches, key=lambda m: (-m.similarity, m.comment_term)):
        for block in pre_version.code_blocks:
            if match.diff_term in block:
                return block
    return joined


def emit_candidates(
    pairs: list[CommentEditPair],
    sites_by_pair: dict[tuple[int, int], list[MatchSite]],
    comment_texts: dict[tuple[int, int], str],
) -> list[PrCandidate]:
    """One candidate per (pair, site); the description is the raw comment text."""
    candidates = []
    for pair in pairs:
        key = (pair.answer_id, pair.comment_id)
        description = comment_texts.get(key, "")
        for site in sites_by_pair.get(key, []):
            candidates.append(
                PrCandidate(pair=pair, site=site, proposed_description=description)
            )
    return candidates


class ReplayClient(RepoHostClient):
    """Serves recorded host responses from a JSON fixture file."""

    def __init__(self, fixture_path):
        with open(fixture_path, encoding="utf-8") as fh:
            data = json.load(fh)
        self.as_of = parse_timestamp(data["as_of"]) if "as_of" in data else None
        self._repos = [
            RepoInfo(
                full_name=entry["full_name"],
                language=entry["language"],
                stars=int(entry["stars"]),
                pushed_at=parse_timestamp(entry["pushed_at"]),
            )
            for entry in data.get("repositories", [])
        ]
        self._closed_prs = {
            entry["full_name"]: int(entry["closed_pull_requests"])
            for entry in data.get("repositories", [])
        }
        self._files = data.get("files", {})

    def search_repositories(self, criteria: RepoCriteria) -> list[RepoInfo]:
        return list(self._repos)

    def closed_pull_request_count(self, full_name: str) -> int:
        return self._closed_prs.get(full_name, 0)

    def list_files(self, full_name: str) -> list[str]:
        return sorted(self._files.get(full_name, {}))

    def file_contents(self, full_name: str, path: str) -> str:
        try:
            return self._files[full_name][path]
        except KeyError:
            raise SearchError(f"no recorded contents for {full_name}:{path}") from None


class RecordingClient(RepoHostClient):
    """Wraps a live client and captures its responses into a replay fixture."""

    def __init__(self, inner: RepoHostClient, as_of: int | None = None):
        self._inner = inner
        self._as_of = as_of if as_of is not None else int(time.time())
        self._repos: dict[str, dict] = {}
        self._files: dict[str, dict[str, str]] = {}

    def search_repositories(self, criteria: RepoCriteria) -> list[RepoInfo]:
        repos = self._inner.search_repositories(criteria)
        for r in repos:
            self._repos.setdefault(
                r.full_name,
                {
                    "full_name": r.full_name,
                    "language": r.language,
                    "stars": r.stars,
                    "pushed_at": datetime.fromtimestamp(r.pushed_at, tz=timezone.utc).strftime(
                        "%Y-%m-%dT%H:%M:%SZ"
                    ),
                    "closed_pull_requests": 0,
                },
            )
        return repos

    def closed_pull_request_count(self, full_name: str) -> int:
        count = self._inner.closed_pull_request_count(full_name)
        if full_name in self._repos:
            self._repos[full_name]["closed_pull_requests"] = count
        return count

    def list_files(self, full_name: str) -> list[str]:
        return self._inner.list_files(full_name)

    def file_contents(self, full_name: str, path: str) -> str:
        contents = self._inner.file_contents(full_name, path)
        self._files.setdefault(full_name, {})[path] = contents
        return contents

    def save(self, path) -> None:
        data = {
            "as_of": datetime.fromtimestamp(self._as_of, tz=timezone.utc).strftime(
                "%Y-%m-%dT%H:%M:%SZ"
            ),
            "repositories": [self._repos[k] for k in sorted(self._repos)],
            "files": self._files,
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(data, fh, indent=2, sort_keys=True)
            fh.write("\n")


class GitHubClient(RepoHostClient):
    """GitHub REST v3 client; auth token read from PAIRMINER_GH_TOKEN."""

    def __init__(
        self,
        token: str | None = None,
        base_url: str = "https://api.github.com",
        session: requests.Session | None = None,
        max_retries: int = 4,
        sleeper=time.sleep,
    ):
        self._token = token or os.environ.get(TOKEN_ENV_VAR)
        self._base_url = base_url.rstrip("/")
        self._session = session or requests.Session()
        self._max_retries = max_retries
        self._sleep = sleeper

    def _headers(self) -> dict[str, str]:
        headers = {"Accept": "application/vnd.github.v3+json"}
        if self._token:
            headers["Authorization"] = f"Bearer {self._token}"
        return headers

    def _get(self, path: str, params: dict | None = None, accept: str | None = None):
        headers = self._headers()
        if accept:
            headers["Accept"] = accept
        retry_after: float | None = None
        for attempt in range(self._max_retries + 1):
            try:
                response = self._session.get(
                    f"{self._base_url}{path}", params=params, headers=headers, timeout=30
                )
            except requests.RequestException as exc:
                raise SearchError(f"request to {path} failed: {exc}") from exc
            if response.status_code in (403, 429) and (
                response.headers.get("X-RateLimit-Remaining") == "0"
                or "Retry-After" in response.headers
            ):
                retry_after = float(response.headers.get("Retry-After", 0)) or None
                if attempt < self._max_retries:
                    self._sleep(min(2**attempt, 60))
                    continue
                raise RateLimitError(
                    f"rate limited on {path} after {self._max_retries} retries",
                    retry_after=retry_after,
                )
            if response.status_code >= 400:
                raise SearchError(
                    f"GET {path} returned {response.status_code}: {response.text[:200]}",
                    retry_after=retry_after,
                )
            return response
        raise RateLimitError(f"rate limited on {path}", retry_after=retry_after)

    def search_repositories(self, criteria: RepoCriteria) -> list[RepoInfo]:
        pushed_floor = datetime.now(tz=timezone.utc).timestamp() - (
            criteria.max_days_since_push * 86400
        )
        pushed_date = datetime.fromtimestamp(pushed_floor, tz=timezone.utc).strftime("%Y-%m-%d")
        query = (
            f"language:{criteria.language} "
            f"pushed:>{pushed_date} "
            f"stars:>={criteria.min_stars}"
        )
        repos = []
        for page in range(1, 11):
            response = self._get(
                "/search/repositories",
                params={"q": query, "per_page": 100, "page": page, "sort": "stars"},
            )
            payload = response.json()
            for item in payload.get("items", []):
                repos.append(
                    RepoInfo(
                        full_name=item["full_name"],
                        language=item.get("language") or "",
                        stars=int(item.get("stargazers_count", 0)),
                        pushed_at=parse_timestamp(item["pushed_at"]),
                    )
                )
            if len(payload.get("items", [])) < 100:
                break
        return repos

    def closed_pull_request_count(self, full_name: str) -> int:
        response = self._get(
            "/search/issues",
            params={"q": f"repo:{full_name} is:pr state:closed", "per_page": 1},
        )
        return int(response.json().get("total_count", 0))

    def list_files(self, full_name: str) -> list[str]:
        response = self._get(f"/repos/{full_name}/git/trees/HEAD", params={"recursive": "1"})
        tree = response.json().get("tree", [])
        return sorted(entry["path"] for entry in tree if entry.get("type") == "blob")

    def file_contents(self, full_name: str, path: str) -> str:
        response = self._get(
            f"/repos/{full_name}/contents/{path}", accept="application/vnd.github.v3.raw"
        )
        return response.text


def fetch_files_via_clone(clone_url: str, workdir=None) -> list[tuple[str, str]]:
    """Shallow-clone a repository and return its (path, contents) text files.

    Fallback for hosts where per-file API retrieval is impractical.
    Binary files (undecodable as UTF-8) are skipped.
    """
    with tempfile.TemporaryDirectory(dir=workdir) as tmp:
        dest = Path(tmp) / "repo"
        result = subprocess.run(
            ["git", "clone", "--depth", "1", "--quiet", clone_url, str(dest)],
            capture_output=True,
            text=True,
        )
        if result.returncode != 0:
            raise SearchError(f"git clone of {clone_url} failed: {result.stderr.strip()}")
        files = []
        for path in sorted(dest.rglob("*")):
            if not path.is_file() or ".git" in path.parts:
                continue
            try:
                contents = path.read_text(encoding="utf-8")
            except (UnicodeDecodeError, OSError):
                continue
            files.append((str(path.relative_to(dest)), contents))
        return files
