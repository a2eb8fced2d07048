#!/usr/bin/env python3
"""Regenerate the committed test fixtures under tests/fixtures/.

Everything here is deterministic. The mini corpus is engineered so the
matcher at the default threshold detects exactly 88 pairs of which 62
agree with the 194-entry ground truth; the script verifies those counts
before writing.
"""

from __future__ import annotations

import csv
import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from pairminer.codeterm import default_catalog  # noqa: E402
from pairminer.ingest import format_timestamp, load_dump  # noqa: E402
from pairminer.matcher import MatchConfig, match_corpus  # noqa: E402

FIXTURES = ROOT / "tests" / "fixtures"

BASE_TS = 1_546_300_800  # 2019-01-01T00:00:00Z

TAGS = ["java", "javascript", "android", "python", "php"]


def write_jsonl(path: Path, records: list[dict]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, sort_keys=True))
            fh.write("\n")


def iso(ts: int) -> str:
    return format_timestamp(ts)


# ---------------------------------------------------------------------------
# Figure-1 style fixture: answer 8949391, one comment matched to edit e5.
# ---------------------------------------------------------------------------

def gen_fig1() -> None:
    out = FIXTURES / "fig1"
    t0 = BASE_TS
    question_id, answer_id = 8949000, 8949391
    asker, answerer, commenter = 100, 200, 300
    posts = [
        {"id": question_id, "parent_id": None, "kind": "question", "author_id": asker,
         "created_at": iso(t0), "score": 12, "tag": "javascript"},
        {"id": answer_id, "parent_id": question_id, "kind": "answer", "author_id": answerer,
         "created_at": iso(t0 + 1000), "score": 25, "tag": "javascript"},
    ]
    block1 = "var connection = $.hubConnection();\nconnectToHub();"
    block2 = block1 + "\nlogErrors();"
    block3 = block2 + "\nretryDelay = 5;"
    block4 = block3.replace("connectToHub();", "connectHub();")
    block5 = block4 + (
        "\nvar yourClient = $.connection.yourHubName;"
        "\nyourClientObject.start();"
        "\ndoWork(yourClientObject);"
    )
    versions = [
        {"post_id": answer_id, "version": i + 1, "editor_id": answerer,
         "created_at": iso(t0 + 1000 * (i + 1)), "code_blocks": [block]}
        for i, block in enumerate([block1, block2, block3, block4, block5])
    ]
    comments = [
        {"id": 777, "post_id": answer_id, "author_id": commenter,
         "created_at": iso(t0 + 2500),
         "text": "What is yourClient here? I think you mean yourClientObject, "
                 "the proxy created by the hub."},
    ]
    write_jsonl(out / "posts.jsonl", posts)
    write_jsonl(out / "versions.jsonl", versions)
    write_jsonl(out / "comments.jsonl", comments)

    corpus = load_dump(out / "posts.jsonl", out / "versions.jsonl", out / "comments.jsonl")
    pairs = match_corpus(corpus, default_catalog(), MatchConfig())
    assert len(pairs) == 1, pairs
    assert pairs[0].edit_version == 5, pairs
    terms = sorted(m.comment_term for m in pairs[0].matches)
    assert terms == ["yourClient", "yourClientObject"], terms
    print(f"fig1: 1 pair at e5, matched terms {terms}")


# ---------------------------------------------------------------------------
# Mini corpus engineered for 194 existing / 88 detected / 62 correct.
# ---------------------------------------------------------------------------

N_CORRECT = 62      # matcher finds the ground-truth edit
N_WRONG = 26        # matcher matches an earlier edit than the labeled one
N_UNDETECTED = 106  # comment carries no code terms


def gen_minicorpus() -> None:
    out = FIXTURES / "minicorpus"
    posts, versions, comments, gt_rows = [], [], [], []

    def add_answer(idx: int, kind: str) -> None:
        answer_id = 100000 + idx
        question_id = 900000 + idx
        answerer = 5000 + idx
        commenter = 6000 + idx
        asker = 7000 + idx
        tag = TAGS[idx % len(TAGS)]
        t0 = BASE_TS + idx * 86400
        posts.append({"id": question_id, "parent_id": None, "kind": "question",
                      "author_id": asker, "created_at": iso(t0 - 600), "score": 3, "tag": tag})
        posts.append({"id": answer_id, "parent_id": question_id, "kind": "answer",
                      "author_id": answerer, "created_at": iso(t0), "score": 1 + idx % 7,
                      "tag": tag})
        comment_id = 300000 + idx
        if kind == "correct":
            term = f"alphaFix{idx}Call"
            versions.append({"post_id": answer_id, "version": 1, "editor_id": answerer,
                             "created_at": iso(t0), "code_blocks": ["int total = 0;"]})
            comments.append({"id": comment_id, "post_id": answer_id, "author_id": commenter,
                             "created_at": iso(t0 + 500),
                             "text": f"Please use {term} here instead."})
            versions.append({"post_id": answer_id, "version": 2, "editor_id": answerer,
                             "created_at": iso(t0 + 1000),
                             "code_blocks": [f"int total = {term};"]})
            gt_rows.append((answer_id, comment_id, 2))
        elif kind == "wrong":
            term = f"betaSwap{idx}Fn"
            versions.append({"post_id": answer_id, "version": 1, "editor_id": answerer,
                             "created_at": iso(t0), "code_blocks": ["int x = 1;"]})
            comments.append({"id": comment_id, "post_id": answer_id, "author_id": commenter,
                             "created_at": iso(t0 + 500),
                             "text": f"You should call {term} first."})
            versions.append({"post_id": answer_id, "version": 2, "editor_id": answerer,
                             "created_at": iso(t0 + 1000),
                             "code_blocks": [f"int x = {term};"]})
            versions.append({"post_id": answer_id, "version": 3, "editor_id": answerer,
                             "created_at": iso(t0 + 2000),
                             "code_blocks": [f"int x = {term};\nvar gammaPad{idx}X = 0;"]})
            # the labeled edit is the later one; the matcher stops at version 2
            gt_rows.append((answer_id, comment_id, 3))
        else:
            versions.append({"post_id": answer_id, "version": 1, "editor_id": answerer,
                             "created_at": iso(t0), "code_blocks": ["print('hello');"]})
            comments.append({"id": comment_id, "post_id": answer_id, "author_id": commenter,
                             "created_at": iso(t0 + 500),
                             "text": "this breaks on older devices for me."})
            versions.append({"post_id": answer_id, "version": 2, "editor_id": answerer,
                             "created_at": iso(t0 + 1000),
                             "code_blocks": ["print('hello world');"]})
            gt_rows.append((answer_id, comment_id, 2))
            if idx % 20 == 0:
                # extra codeless comment labeled as causing no edit
                comments.append({"id": comment_id + 500000, "post_id": answer_id,
                                 "author_id": commenter, "created_at": iso(t0 + 600),
                                 "text": "thanks, that worked for me after all."})
                gt_rows.append((answer_id, comment_id + 500000, None))

    idx = 0
    for _ in range(N_CORRECT):
        add_answer(idx, "correct")
        idx += 1
    for _ in range(N_WRONG):
        add_answer(idx, "wrong")
        idx += 1
    for _ in range(N_UNDETECTED):
        add_answer(idx, "undetected")
        idx += 1

    write_jsonl(out / "posts.jsonl", posts)
    write_jsonl(out / "versions.jsonl", versions)
    write_jsonl(out / "comments.jsonl", comments)
    with open(out / "ground_truth.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["answer_id", "comment_id", "edit_version"])
        for answer_id, comment_id, edit_version in gt_rows:
            writer.writerow([answer_id, comment_id, edit_version if edit_version else ""])

    corpus = load_dump(out / "posts.jsonl", out / "versions.jsonl", out / "comments.jsonl")
    pairs = match_corpus(corpus, default_catalog(), MatchConfig())
    positives = {(a, c, v) for a, c, v in gt_rows if v is not None}
    correct = sum(1 for p in pairs if (p.answer_id, p.comment_id, p.edit_version) in positives)
    existing = len(positives)
    assert existing == 194, existing
    assert len(pairs) == 88, len(pairs)
    assert correct == 62, correct
    print(f"minicorpus: existing={existing} detected={len(pairs)} correct={correct} "
          f"(precision {correct / len(pairs):.4f}, recall {correct / existing:.4f})")


# ---------------------------------------------------------------------------
# Annotation fixture reproducing the headline per-category totals.
# ---------------------------------------------------------------------------

CATEGORY_COUNTS = [
    # (category, confirmed, useful)
    ("Error", 511, 137),
    ("Request", 236, 3),
    ("Correction", 199, 133),
    ("Disagree", 184, 3),
    ("Question", 143, 16),
    ("Flaw", 79, 47),
    ("Solution", 71, 34),
    ("Extension", 29, 17),
    ("Obsolete", 9, 6),
    ("Other", 21, 0),
]
TANGLED_USEFUL = 39       # all placed in Correction
TANGLED_NOT_USEFUL = 122  # all placed in Error
N_UNCONFIRMED = 428       # analyzed pairs that were not confirmed


def gen_annotations() -> None:
    path = FIXTURES / "table7_annotations.csv"
    path.parent.mkdir(parents=True, exist_ok=True)
    rows = []
    answer_id = 200000
    for category, total, useful_n in CATEGORY_COUNTS:
        for j in range(total):
            useful = j < useful_n
            if category == "Correction" and useful and j < TANGLED_USEFUL:
                tangled = True
            elif category == "Error" and not useful and j - useful_n < TANGLED_NOT_USEFUL:
                tangled = True
            else:
                tangled = False
            rows.append([answer_id, answer_id + 1, "true",
                         "true" if tangled else "false",
                         "true" if useful else "false", category])
            answer_id += 1
    for _ in range(N_UNCONFIRMED):
        rows.append([answer_id, answer_id + 1, "false", "", "", ""])
        answer_id += 1
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["answer_id", "comment_id", "confirmed", "tangled", "useful", "category"])
        writer.writerows(rows)
    confirmed = sum(1 for r in rows if r[2] == "true")
    useful = sum(1 for r in rows if r[4] == "true")
    tangled = sum(1 for r in rows if r[3] == "true")
    both = sum(1 for r in rows if r[3] == "true" and r[4] == "true")
    assert (confirmed, useful, tangled, both) == (1482, 396, 161, 39)
    print(f"annotations: confirmed={confirmed} useful={useful} tangled={tangled} both={both}")


# ---------------------------------------------------------------------------
# Prospect fixtures: answer 52517618 plus a recorded repository search.
# ---------------------------------------------------------------------------

BEFORE_LINE = 'String s = new String(bytes, "UTF-8");'


def gen_prospect() -> None:
    out = FIXTURES / "prospect"
    t0 = BASE_TS + 400 * 86400
    question_id, answer_id = 52517000, 52517618
    asker, answerer, commenter = 401, 402, 403
    posts = [
        {"id": question_id, "parent_id": None, "kind": "question", "author_id": asker,
         "created_at": iso(t0), "score": 8, "tag": "java"},
        {"id": answer_id, "parent_id": question_id, "kind": "answer", "author_id": answerer,
         "created_at": iso(t0 + 100), "score": 15, "tag": "java"},
    ]
    versions = [
        {"post_id": answer_id, "version": 1, "editor_id": answerer,
         "created_at": iso(t0 + 100), "code_blocks": [BEFORE_LINE]},
        {"post_id": answer_id, "version": 2, "editor_id": answerer,
         "created_at": iso(t0 + 5000),
         "code_blocks": ["String s = new String(bytes, StandardCharsets.UTF_8);"]},
    ]
    comments = [
        {"id": 52517999, "post_id": answer_id, "author_id": commenter,
         "created_at": iso(t0 + 2000),
         "text": "On Java 7 you can also use new String(bytes, StandardCharsets.UTF_8); "
                 "which avoids having to catch the UnsupportedEncodingException"},
    ]
    write_jsonl(out / "posts.jsonl", posts)
    write_jsonl(out / "versions.jsonl", versions)
    write_jsonl(out / "comments.jsonl", comments)

    corpus = load_dump(out / "posts.jsonl", out / "versions.jsonl", out / "comments.jsonl")
    pairs = match_corpus(corpus, default_catalog(), MatchConfig())
    assert len(pairs) == 1 and pairs[0].edit_version == 2, pairs
    print(f"prospect: pair matched with terms "
          f"{sorted(m.comment_term for m in pairs[0].matches)}")

    replay = {
        "as_of": "2020-03-01T00:00:00Z",
        "repositories": [
            {"full_name": "acme/alpha", "language": "Java", "stars": 50,
             "pushed_at": "2020-02-20T00:00:00Z", "closed_pull_requests": 12},
            {"full_name": "acme/alpha", "language": "Java", "stars": 50,
             "pushed_at": "2020-02-20T00:00:00Z", "closed_pull_requests": 12},
            {"full_name": "acme/beta", "language": "Java", "stars": 4,
             "pushed_at": "2020-02-20T00:00:00Z", "closed_pull_requests": 3},
            {"full_name": "acme/gamma", "language": "Java", "stars": 9,
             "pushed_at": "2019-12-01T00:00:00Z", "closed_pull_requests": 2},
            {"full_name": "acme/delta", "language": "Python", "stars": 80,
             "pushed_at": "2020-02-25T00:00:00Z", "closed_pull_requests": 5},
            {"full_name": "acme/epsilon", "language": "Java", "stars": 25,
             "pushed_at": "2020-02-28T00:00:00Z", "closed_pull_requests": 0},
            {"full_name": "acme/zeta", "language": "Java", "stars": 7,
             "pushed_at": "2020-02-27T00:00:00Z", "closed_pull_requests": 1},
        ],
        "files": {
            "acme/alpha": {
                "snippets/convert.jsh": (
                    "byte[] bytes = readAll();\n"
                    + BEFORE_LINE + "\n"
                    + "System.out.println(s);\n"
                ),
                "snippets/other.jsh": (
                    "// unrelated\nint n = 3;\n" + BEFORE_LINE + "  \nreturn n;\n"
                ),
                "README.md": "alpha readme\n",
            },
            "acme/zeta": {
                "src/Main.java": "public class Main {}\n",
            },
        },
    }
    with open(out / "github_replay.json", "w", encoding="utf-8") as fh:
        json.dump(replay, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print("prospect: replay fixture written")


def main() -> None:
    gen_fig1()
    gen_minicorpus()
    gen_annotations()
    gen_prospect()
    print("all fixtures written to", FIXTURES)


if __name__ == "__main__":
    main()
