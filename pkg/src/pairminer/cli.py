"""Command-line pipeline orchestration.

Subcommands: ingest, match, baseline, evaluate, sweep, stats, sample,
prospect. Every command is deterministic for fixed inputs and seed:
reports land in the output directory as aligned-text tables, JSON, and
(for the report-style commands) rendered figures; diagnostics go to
stderr and data to files or stdout.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from pathlib import Path

from . import analytics, evaluation, figures, prospect
from .codeterm import MAX_NORM, SUM_NORM, RegexCatalog, default_catalog, load_catalog
from .ingest import Corpus, DumpError, load_corpus, load_dump, parse_timestamp, save_corpus
from .matcher import (
    CODE_CHECK,
    CommentEditPair,
    MatchConfig,
    match_corpus,
    pair_from_json,
    pair_to_json,
)


class CliError(Exception):
    def __init__(self, message: str, code: int = 1):
        super().__init__(message)
        self.code = code


def _require_file(path: str, what: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise CliError(f"{what} not found: {path}", code=2)
    return p


def _required_path(opts: "Options", key: str, what: str) -> Path:
    value = opts.get(key)
    if not value:
        raise CliError(f"--{key.replace('_', '-')} is required ({what})", code=2)
    return _require_file(value, what)


def format_table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    def fmt(row):
        cells = [row[0].ljust(widths[0])]
        cells += [cell.rjust(widths[i + 1]) for i, cell in enumerate(row[1:])]
        return "  ".join(cells).rstrip()
    lines = [fmt(headers), "  ".join("-" * w for w in widths)]
    lines.extend(fmt(row) for row in rows)
    return "\n".join(lines)


def format_duration(seconds: float) -> str:
    total = int(seconds)
    days, rem = divmod(total, 86400)
    hours, rem = divmod(rem, 3600)
    minutes = rem // 60
    return f"{days}d {hours:02d}:{minutes:02d}h"


class Options:
    """Flag resolution: command line > config file > built-in default."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.config: dict = {}
        config_path = getattr(args, "config", None)
        if config_path:
            with open(_require_file(config_path, "config file"), encoding="utf-8") as fh:
                self.config = json.load(fh)

    def get(self, key: str, default=None):
        value = getattr(self.args, key, None)
        if value is not None:
            return value
        if key in self.config:
            return self.config[key]
        return default

    def out_dir(self) -> Path:
        out = Path(self.get("out", "out"))
        out.mkdir(parents=True, exist_ok=True)
        return out

    def catalog(self) -> RegexCatalog:
        path = self.get("catalog")
        if path:
            return load_catalog(_require_file(path, "regex catalog"))
        return default_catalog()

    def match_config(self) -> MatchConfig:
        return MatchConfig(
            threshold=float(self.get("threshold", 90.0)),
            similarity_norm=self.get("similarity_norm", MAX_NORM),
            require_distinct_authors=not self.get("allow_same_author", False),
        )

    def jobs(self) -> int:
        return int(self.get("jobs", os.cpu_count() or 1))

    def tags(self) -> list[str]:
        return list(self.get("tag") or self.config.get("tags") or [])

    def load_cache(self) -> Corpus:
        path = self.get("cache")
        if not path:
            raise CliError("--cache is required (run 'pairminer ingest' first)", code=2)
        return load_corpus(_require_file(path, "timeline cache"))


def _write_json(path: Path, payload) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_text(path: Path, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
        if not text.endswith("\n"):
            fh.write("\n")


def _load_pairs(path: Path) -> list[CommentEditPair]:
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                pairs.append(pair_from_json(json.loads(line)))
            except (json.JSONDecodeError, KeyError, ValueError) as exc:
                raise CliError(f"{path}:{line_no}: bad pair record ({exc})")
    return pairs


def cmd_ingest(opts: Options) -> int:
    posts = _required_path(opts, "posts", "posts file")
    versions = _required_path(opts, "versions", "versions file")
    comments = _required_path(opts, "comments", "comments file")
    corpus = load_dump(posts, versions, comments)

    tags = opts.tags()
    if tags:
        keep = set(tags)
        corpus = Corpus(
            timelines=tuple(t for t in corpus.timelines if t.answer.tag in keep),
            question_authors=corpus.question_authors,
            rejected_comment_count=corpus.rejected_comment_count,
        )

    out = opts.out_dir()
    cache_path = out / "timelines.json"
    save_corpus(corpus, cache_path)

    per_tag: dict[str, list[int]] = {}
    for t in corpus.timelines:
        counts = per_tag.setdefault(t.answer.tag, [0, 0, 0])
        counts[0] += 1
        counts[1] += max(0, len(t.versions) - 1)
        counts[2] += len(t.comments)
    rows = [
        [tag, f"{c[0]:,}", f"{c[1]:,}", f"{c[2]:,}"] for tag, c in sorted(per_tag.items())
    ]
    totals = [sum(c[i] for c in per_tag.values()) for i in range(3)]
    rows.append(["total", f"{totals[0]:,}", f"{totals[1]:,}", f"{totals[2]:,}"])
    print(format_table(["Tag", "Answers", "Edits", "Comments"], rows))
    print(f"cache written to {cache_path}", file=sys.stderr)
    return 0


def _run_match(opts: Options, baseline: bool) -> int:
    corpus = opts.load_cache()
    cfg = opts.match_config()
    tags = opts.tags()
    timelines = [t for t in corpus.timelines if not tags or t.answer.tag in tags]
    pairs = match_corpus(timelines, opts.catalog(), cfg, jobs=opts.jobs(), baseline=baseline)
    out = opts.out_dir()
    pairs_path = out / ("baseline_pairs.jsonl" if baseline else "pairs.jsonl")
    with open(pairs_path, "w", encoding="utf-8") as fh:
        for pair in pairs:
            fh.write(json.dumps(pair_to_json(pair), sort_keys=True))
            fh.write("\n")
    print(f"{len(pairs)} pairs written to {pairs_path}", file=sys.stderr)
    return 0


def cmd_match(opts: Options) -> int:
    return _run_match(opts, baseline=bool(opts.get("baseline", False)))


def cmd_baseline(opts: Options) -> int:
    return _run_match(opts, baseline=True)


def _eval_report_payload(report: evaluation.EvalReport) -> list[dict]:
    return [
        {
            "tag": r.tag,
            "existing": r.existing,
            "detected": r.detected,
            "correct": r.correct,
            "precision": r.precision,
            "recall": r.recall,
        }
        for r in report.rows
    ]


def _eval_report_text(report: evaluation.EvalReport) -> str:
    rows = [
        [
            r.tag,
            str(r.existing),
            str(r.detected),
            str(r.correct),
            f"{100 * r.recall:.1f}%",
            f"{100 * r.precision:.1f}%",
        ]
        for r in report.rows
    ]
    return format_table(["Tag", "Existing", "Detected", "Correct", "Recall", "Precision"], rows)


def cmd_evaluate(opts: Options) -> int:
    corpus = opts.load_cache()
    pairs = _load_pairs(_required_path(opts, "pairs", "pairs file"))
    gt = evaluation.load_ground_truth(_required_path(opts, "ground_truth", "ground truth CSV"))
    report = evaluation.score(pairs, gt, corpus.tag_of())
    out = opts.out_dir()
    text = _eval_report_text(report)
    print(text)
    _write_text(out / "evaluation.txt", text)
    _write_json(out / "evaluation.json", _eval_report_payload(report))
    figures.save_evaluation_figure(report, out / "evaluation.png")
    return 0


def _parse_thresholds(raw: str) -> list[float]:
    try:
        values = [float(part) for part in raw.split(",") if part.strip()]
    except ValueError:
        raise CliError(f"bad --thresholds value: {raw!r}", code=2)
    if not values:
        raise CliError("--thresholds must name at least one value", code=2)
    return values


def cmd_sweep(opts: Options) -> int:
    corpus = opts.load_cache()
    gt = evaluation.load_ground_truth(_required_path(opts, "ground_truth", "ground truth CSV"))
    thresholds = _parse_thresholds(opts.get("thresholds", "60,70,80,90,100"))
    points = evaluation.threshold_sweep(
        corpus.timelines,
        opts.catalog(),
        gt,
        thresholds,
        tag_of=corpus.tag_of(),
        base_cfg=opts.match_config(),
        jobs=opts.jobs(),
    )
    out = opts.out_dir()
    csv_lines = ["threshold,existing,detected,correct,precision,recall"]
    csv_lines += [
        f"{p.threshold:g},{p.existing},{p.detected},{p.correct},{p.precision:.6f},{p.recall:.6f}"
        for p in points
    ]
    _write_text(out / "sweep.csv", "\n".join(csv_lines))
    _write_json(
        out / "sweep.json",
        [
            {
                "threshold": p.threshold,
                "existing": p.existing,
                "detected": p.detected,
                "correct": p.correct,
                "precision": p.precision,
                "recall": p.recall,
            }
            for p in points
        ],
    )
    figures.save_sweep_figure(points, out / "sweep.png")
    rows = [
        [
            f"{p.threshold:g}",
            str(p.detected),
            str(p.correct),
            f"{100 * p.recall:.1f}%",
            f"{100 * p.precision:.1f}%",
        ]
        for p in points
    ]
    print(format_table(["Threshold", "Detected", "Correct", "Recall", "Precision"], rows))
    return 0


def cmd_stats(opts: Options) -> int:
    annotations = analytics.load_annotations(
        _required_path(opts, "annotations", "annotations file")
    )
    counts = analytics.category_counts(annotations)

    tag_of = None
    corpus = None
    if opts.get("cache"):
        corpus = opts.load_cache()
        known = corpus.tag_of()
        if all(a.answer_id in known for a in annotations):
            tag_of = known
    tangled_rows = analytics.tangled_rate(annotations, tag_of)

    sections = []
    count_table = format_table(
        ["Category", "All", "Useful"],
        [
            [r.category, f"{r.total:,}", f"{r.useful:,} ({r.useful_pct}%)"]
            for r in counts
        ],
    )
    sections.append("Pairs per category\n" + count_table)

    tangled_table = format_table(
        ["Tag", "Confirmed", "Tangled", "Useful"],
        [
            [
                r.tag,
                f"{r.confirmed:,}",
                f"{r.tangled:,} ({r.tangled_pct}%)",
                f"{r.useful:,} ({r.useful_pct}%)",
            ]
            for r in tangled_rows
        ],
    )
    overall = tangled_rows[-1]
    sections.append(
        "Tangled and useful pairs\n"
        + tangled_table
        + f"\ntangled among useful: {overall.tangled_useful} ({overall.tangled_useful_pct}%)"
    )

    payload: dict = {
        "category_counts": [
            {
                "category": r.category,
                "total": r.total,
                "useful": r.useful,
                "useful_pct": r.useful_pct,
            }
            for r in counts
        ],
        "tangled": [
            {
                "tag": r.tag,
                "confirmed": r.confirmed,
                "tangled": r.tangled,
                "tangled_pct": r.tangled_pct,
                "useful": r.useful,
                "useful_pct": r.useful_pct,
                "tangled_useful": r.tangled_useful,
                "tangled_useful_pct": r.tangled_useful_pct,
            }
            for r in tangled_rows
        ],
    }

    if opts.get("pairs") and corpus is not None:
        pairs = _load_pairs(_required_path(opts, "pairs", "pairs file"))
        cutoff_days = opts.get("response_time_cutoff_days")
        cutoff_s = float(cutoff_days) * 86400 if cutoff_days is not None else None
        rel_rows = analytics.aggregate_relationships(
            pairs, annotations, corpus, response_time_cutoff_s=cutoff_s
        )
        rel_table = format_table(
            [
                "Category",
                "Pairs",
                "Cmt/Ed same",
                "Cmt/Ed diff",
                "Ans/Ed same",
                "Ans/Ed diff",
                "Q/Cmt same",
                "Q/Cmt diff",
                "Avg score",
                "Avg response",
            ],
            [
                [
                    r.category.value,
                    str(r.pairs),
                    str(r.commenter_editor_same),
                    str(r.commenter_editor_diff),
                    str(r.answerer_editor_same),
                    str(r.answerer_editor_diff),
                    str(r.questioner_commenter_same),
                    str(r.questioner_commenter_diff),
                    f"{r.mean_score:.1f}",
                    format_duration(r.mean_response_time_s),
                ]
                for r in rel_rows
            ],
        )
        sections.append("Relationships by category\n" + rel_table)
        payload["relationships"] = [
            {
                "category": r.category.value,
                "pairs": r.pairs,
                "commenter_editor_same": r.commenter_editor_same,
                "commenter_editor_diff": r.commenter_editor_diff,
                "answerer_editor_same": r.answerer_editor_same,
                "answerer_editor_diff": r.answerer_editor_diff,
                "questioner_commenter_same": r.questioner_commenter_same,
                "questioner_commenter_diff": r.questioner_commenter_diff,
                "mean_score": r.mean_score,
                "mean_response_time_s": r.mean_response_time_s,
            }
            for r in rel_rows
        ]
        contingency = analytics.questioner_commenter_contingency(rel_rows)
        if len(contingency[0]) >= 2:
            try:
                stat, dof, p = analytics.chi_squared_independence(contingency)
                payload["questioner_commenter_chi_squared"] = {
                    "statistic": stat,
                    "dof": dof,
                    "p": p,
                }
                sections.append(
                    f"Chi-squared (questioner=commenter vs category): "
                    f"stat={stat:.3f} dof={dof} p={p:.4f}"
                )
            except ValueError as exc:
                sections.append(f"Chi-squared skipped: {exc}")

    if opts.get("agreement"):
        table = evaluation.load_agreement_table(
            _require_file(opts.get("agreement"), "agreement table")
        )
        kappa = evaluation.cohen_kappa(table)
        sections.append(f"Cohen's kappa (inter-rater agreement): {kappa:.4f}")
        payload["cohen_kappa"] = kappa

    text = "\n\n".join(sections)
    print(text)
    out = opts.out_dir()
    _write_text(out / "stats.txt", text)
    _write_json(out / "stats.json", payload)
    figures.save_category_figure(counts, out / "categories.png")
    return 0


def cmd_sample(opts: Options) -> int:
    args = opts.args
    size = evaluation.sample_size(args.population, args.confidence, args.interval)
    print(size)
    if opts.get("pairs"):
        corpus = opts.load_cache()
        tag_of = corpus.tag_of()
        pairs = _load_pairs(_required_path(opts, "pairs", "pairs file"))
        by_tag: dict[str, list[CommentEditPair]] = {}
        for pair in pairs:
            tag = tag_of.get(pair.answer_id)
            if tag is None:
                raise CliError(f"pair references answer {pair.answer_id} with no tag mapping")
            by_tag.setdefault(tag, []).append(pair)
        seed = int(opts.get("seed", 0))
        rng = random.Random(seed)
        out = opts.out_dir()
        sample_path = out / "sample.jsonl"
        with open(sample_path, "w", encoding="utf-8") as fh:
            header = {"seed": seed, "confidence": args.confidence, "interval": args.interval}
            fh.write(json.dumps({"header": header}, sort_keys=True))
            fh.write("\n")
            for tag in sorted(by_tag):
                tag_pairs = by_tag[tag]
                n = min(
                    evaluation.sample_size(len(tag_pairs), args.confidence, args.interval),
                    len(tag_pairs),
                )
                chosen = rng.sample(tag_pairs, n)
                chosen.sort(key=lambda p: (p.answer_id, p.comment_id))
                for pair in chosen:
                    record = pair_to_json(pair)
                    record["tag"] = tag
                    fh.write(json.dumps(record, sort_keys=True))
                    fh.write("\n")
        print(f"samples written to {sample_path}", file=sys.stderr)
    return 0


def cmd_prospect(opts: Options) -> int:
    corpus = opts.load_cache()
    pairs = [
        p
        for p in _load_pairs(_required_path(opts, "pairs", "pairs file"))
        if p.method == CODE_CHECK
    ]
    limit = opts.get("limit")
    if limit is not None:
        pairs = pairs[: int(limit)]

    replay_path = opts.get("replay")
    if replay_path:
        client = prospect.ReplayClient(_require_file(replay_path, "replay fixture"))
    else:
        client = prospect.GitHubClient()

    as_of_raw = opts.get("as_of")
    if as_of_raw:
        as_of = parse_timestamp(as_of_raw)
    elif isinstance(client, prospect.ReplayClient) and client.as_of is not None:
        as_of = client.as_of
    else:
        as_of = int(time.time())

    criteria = prospect.RepoCriteria(
        language=opts.get("language", "java"),
        min_stars=int(opts.get("min_stars", 5)),
        max_days_since_push=int(opts.get("max_days", 90)),
        min_closed_prs=int(opts.get("min_closed_prs", 1)),
    )
    repos = prospect.search_repos(criteria, client, as_of=as_of)
    print(f"{len(repos)} repositories matched the criteria", file=sys.stderr)

    timeline_by_id = {t.answer.post_id: t for t in corpus.timelines}
    comment_texts = {}
    sites_by_pair: dict[tuple[int, int], list[prospect.MatchSite]] = {}
    use_clone = opts.get("file_source", "api") == "clone"
    repo_files: dict[str, list[tuple[str, str]]] = {}
    for repo in repos:
        if use_clone:
            repo_files[repo] = prospect.fetch_files_via_clone(
                f"https://github.com/{repo}.git"
            )
        else:
            repo_files[repo] = [
                (path, client.file_contents(repo, path)) for path in client.list_files(repo)
            ]

    kept_pairs = []
    for pair in pairs:
        timeline = timeline_by_id.get(pair.answer_id)
        if timeline is None:
            raise CliError(f"pair references answer {pair.answer_id} absent from the cache")
        comment = next(
            (c for c in timeline.comments if c.comment_id == pair.comment_id), None
        )
        if comment is None:
            raise CliError(
                f"pair ({pair.answer_id}, {pair.comment_id}) references a comment "
                "absent from the cache"
            )
        comment_texts[(pair.answer_id, pair.comment_id)] = comment.text
        snippet = prospect.before_snippet_for_pair(
            timeline, pair, strategy=opts.get("snippet_strategy", prospect.CONTAINING_BLOCK)
        )
        if not prospect.normalize_code(snippet).strip():
            continue
        sites = []
        for repo in repos:
            sites.extend(prospect.find_code_sites(repo_files[repo], snippet, repo=repo))
        if sites:
            sites_by_pair[(pair.answer_id, pair.comment_id)] = sites
            kept_pairs.append(pair)

    candidates = prospect.emit_candidates(kept_pairs, sites_by_pair, comment_texts)
    out = opts.out_dir()
    candidates_path = out / "candidates.jsonl"
    with open(candidates_path, "w", encoding="utf-8") as fh:
        for cand in candidates:
            fh.write(
                json.dumps(
                    {
                        "answer_id": cand.pair.answer_id,
                        "comment_id": cand.pair.comment_id,
                        "edit_version": cand.pair.edit_version,
                        "repo": cand.site.repo,
                        "file_path": cand.site.file_path,
                        "line_start": cand.site.line_start,
                        "snippet": cand.site.snippet,
                        "proposed_description": cand.proposed_description,
                    },
                    sort_keys=True,
                )
            )
            fh.write("\n")
    print(f"{len(candidates)} candidates written to {candidates_path}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file with flag defaults")
    common.add_argument("--tag", action="append", help="restrict to this tag (repeatable)")
    common.add_argument("--out", help="output directory (default: out)")
    common.add_argument("--jobs", type=int, help="worker count (default: available CPUs)")
    common.add_argument("--seed", type=int, help="seed for sampling commands")
    common.add_argument("--threshold", type=float, help="similarity threshold (default 90)")
    common.add_argument(
        "--similarity-norm",
        dest="similarity_norm",
        choices=[MAX_NORM, SUM_NORM],
        help="similarity normalization",
    )
    common.add_argument("--catalog", help="regex catalog JSON (default: bundled catalog)")

    parser = argparse.ArgumentParser(
        prog="pairminer",
        description="Mine, match, and analyze comment-edit pairs from answer edit histories.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", parents=[common], help="parse dump files into a timeline cache")
    p.add_argument("--posts", help="posts .jsonl file")
    p.add_argument("--versions", help="versions .jsonl file")
    p.add_argument("--comments", help="comments .jsonl file")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("match", parents=[common], help="run the code-check matcher")
    p.add_argument("--cache", help="timeline cache from 'ingest'")
    p.add_argument("--baseline", action="store_true", default=None, help="use the proximity baseline")
    p.add_argument(
        "--allow-same-author",
        dest="allow_same_author",
        action="store_true",
        default=None,
        help="also match edits authored by the commenter",
    )
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("baseline", parents=[common], help="run the proximity baseline")
    p.add_argument("--cache", help="timeline cache from 'ingest'")
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("evaluate", parents=[common], help="score pairs against ground truth")
    p.add_argument("--cache", help="timeline cache from 'ingest'")
    p.add_argument("--pairs", help="pairs file from 'match'")
    p.add_argument("--ground-truth", dest="ground_truth", help="ground truth CSV")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("sweep", parents=[common], help="scores across similarity thresholds")
    p.add_argument("--cache", help="timeline cache from 'ingest'")
    p.add_argument("--ground-truth", dest="ground_truth", help="ground truth CSV")
    p.add_argument("--thresholds", help="comma-separated ascending list (default 60,70,80,90,100)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("stats", parents=[common], help="annotation analytics and tests")
    p.add_argument("--annotations", help="annotations CSV")
    p.add_argument("--pairs", help="pairs file (enables relationship stats)")
    p.add_argument("--cache", help="timeline cache (enables relationship stats)")
    p.add_argument("--agreement", help="inter-rater agreement CSV matrix (adds Cohen's kappa)")
    p.add_argument(
        "--response-time-cutoff-days",
        dest="response_time_cutoff_days",
        type=float,
        help="drop response times above this many days from the means",
    )
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("sample", parents=[common], help="representative sample size / sampling")
    p.add_argument("population", type=int)
    p.add_argument("confidence", type=float)
    p.add_argument("interval", type=float)
    p.add_argument("--pairs", help="sample per-tag review sets from this pairs file")
    p.add_argument("--cache", help="timeline cache (for tag lookup)")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("prospect", parents=[common], help="find external code match sites")
    p.add_argument("--cache", help="timeline cache from 'ingest'")
    p.add_argument("--pairs", help="pairs file from 'match'")
    p.add_argument("--replay", help="replay fixture JSON (offline mode)")
    p.add_argument("--language", help="target repository language (default java)")
    p.add_argument("--min-stars", dest="min_stars", type=int)
    p.add_argument("--max-days", dest="max_days", type=int)
    p.add_argument("--min-closed-prs", dest="min_closed_prs", type=int)
    p.add_argument("--as-of", dest="as_of", help="reference date for the recency criterion")
    p.add_argument("--limit", type=int, help="only prospect the first N pairs")
    p.add_argument(
        "--snippet-strategy",
        dest="snippet_strategy",
        choices=[prospect.CONTAINING_BLOCK, prospect.WHOLE_VERSION],
    )
    p.add_argument(
        "--file-source",
        dest="file_source",
        choices=["api", "clone"],
        help="retrieve repository files via the host API or a shallow clone",
    )
    p.set_defaults(func=cmd_prospect)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        opts = Options(args)
        return args.func(opts)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DumpError, ValueError, prospect.SearchError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
