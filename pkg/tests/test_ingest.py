import json

import pytest

from pairminer.ingest import (
    AnswerTimeline,
    DumpError,
    VersionSnapshot,
    load_corpus,
    load_dump,
    parse_timestamp,
    save_corpus,
    validate_timeline,
)

from synth import make_timeline


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record) + "\n")


def make_dump(tmp_path, posts, versions, comments):
    write_jsonl(tmp_path / "posts.jsonl", posts)
    write_jsonl(tmp_path / "versions.jsonl", versions)
    write_jsonl(tmp_path / "comments.jsonl", comments)
    return (
        tmp_path / "posts.jsonl",
        tmp_path / "versions.jsonl",
        tmp_path / "comments.jsonl",
    )


BASE_POSTS = [
    {"id": 1, "parent_id": None, "kind": "question", "author_id": 10,
     "created_at": "2019-01-01T00:00:00Z", "score": 2, "tag": "java"},
    {"id": 2, "parent_id": 1, "kind": "answer", "author_id": 11,
     "created_at": "2019-01-01T01:00:00Z", "score": 5, "tag": "java"},
]


def test_load_dump_sorts_versions_and_comments(tmp_path):
    versions = [
        {"post_id": 2, "version": 2, "editor_id": 11,
         "created_at": "2019-01-01T02:00:00Z", "code_blocks": ["b();"]},
        {"post_id": 2, "version": 1, "editor_id": 11,
         "created_at": "2019-01-01T01:00:00Z", "code_blocks": ["a();"]},
        {"post_id": 2, "version": 3, "editor_id": 11,
         "created_at": "2019-01-01T03:00:00Z", "code_blocks": ["c();"]},
    ]
    comments = [
        {"id": 21, "post_id": 2, "author_id": 12,
         "created_at": "2019-01-01T02:30:00Z", "text": "later"},
        {"id": 20, "post_id": 2, "author_id": 12,
         "created_at": "2019-01-01T01:30:00Z", "text": "earlier"},
    ]
    corpus = load_dump(*make_dump(tmp_path, BASE_POSTS, versions, comments))
    assert len(corpus) == 1
    timeline = corpus.timelines[0]
    assert [v.version_index for v in timeline.versions] == [1, 2, 3]
    assert [c.comment_id for c in timeline.comments] == [20, 21]
    assert corpus.question_authors == {1: 10}


def test_load_dump_drops_codeless_answers(tmp_path):
    versions = [
        {"post_id": 2, "version": 1, "editor_id": 11,
         "created_at": "2019-01-01T01:00:00Z", "code_blocks": []},
        {"post_id": 2, "version": 2, "editor_id": 11,
         "created_at": "2019-01-01T02:00:00Z", "code_blocks": []},
    ]
    comments = [
        {"id": 20, "post_id": 2, "author_id": 12,
         "created_at": "2019-01-01T01:30:00Z", "text": "hello"},
    ]
    corpus = load_dump(*make_dump(tmp_path, BASE_POSTS, versions, comments))
    assert len(corpus) == 0
    assert corpus.rejected_comment_count == 1


def test_load_dump_keeps_partially_codeless_versions(tmp_path):
    versions = [
        {"post_id": 2, "version": 1, "editor_id": 11,
         "created_at": "2019-01-01T01:00:00Z", "code_blocks": []},
        {"post_id": 2, "version": 2, "editor_id": 11,
         "created_at": "2019-01-01T02:00:00Z", "code_blocks": ["x();"]},
    ]
    corpus = load_dump(*make_dump(tmp_path, BASE_POSTS, versions, []))
    assert len(corpus) == 1
    assert corpus.timelines[0].versions[0].code_blocks == ()


def test_load_dump_rejects_dangling_comment(tmp_path):
    versions = [
        {"post_id": 2, "version": 1, "editor_id": 11,
         "created_at": "2019-01-01T01:00:00Z", "code_blocks": ["x();"]},
    ]
    comments = [
        {"id": 99, "post_id": 777, "author_id": 12,
         "created_at": "2019-01-01T01:30:00Z", "text": "orphan"},
    ]
    with pytest.raises(DumpError, match="99"):
        load_dump(*make_dump(tmp_path, BASE_POSTS, versions, comments))


def test_load_dump_rejects_malformed_line(tmp_path):
    paths = make_dump(tmp_path, BASE_POSTS, [], [])
    with open(paths[1], "w") as fh:
        fh.write('{"post_id": 2,\n')
    with pytest.raises(DumpError, match=r"versions\.jsonl:1"):
        load_dump(*paths)


def test_load_dump_rejects_version_gap(tmp_path):
    versions = [
        {"post_id": 2, "version": 1, "editor_id": 11,
         "created_at": "2019-01-01T01:00:00Z", "code_blocks": ["x();"]},
        {"post_id": 2, "version": 3, "editor_id": 11,
         "created_at": "2019-01-01T03:00:00Z", "code_blocks": ["y();"]},
    ]
    with pytest.raises(DumpError, match="contiguous"):
        load_dump(*make_dump(tmp_path, BASE_POSTS, versions, []))


def test_load_dump_rejects_timestamp_regression(tmp_path):
    versions = [
        {"post_id": 2, "version": 1, "editor_id": 11,
         "created_at": "2019-01-01T02:00:00Z", "code_blocks": ["x();"]},
        {"post_id": 2, "version": 2, "editor_id": 11,
         "created_at": "2019-01-01T01:00:00Z", "code_blocks": ["y();"]},
    ]
    with pytest.raises(DumpError, match="before"):
        load_dump(*make_dump(tmp_path, BASE_POSTS, versions, []))


def test_load_dump_rejects_answer_without_parent(tmp_path):
    posts = [dict(BASE_POSTS[1], parent_id=None)]
    with pytest.raises(DumpError, match="parent_id"):
        load_dump(*make_dump(tmp_path, posts, [], []))


def test_load_dump_rejects_empty_comment_text(tmp_path):
    versions = [
        {"post_id": 2, "version": 1, "editor_id": 11,
         "created_at": "2019-01-01T01:00:00Z", "code_blocks": ["x();"]},
    ]
    comments = [
        {"id": 20, "post_id": 2, "author_id": 12,
         "created_at": "2019-01-01T01:30:00Z", "text": ""},
    ]
    with pytest.raises(DumpError, match="empty text"):
        load_dump(*make_dump(tmp_path, BASE_POSTS, versions, comments))


def test_load_dump_deterministic_across_input_order(tmp_path, minicorpus, fixtures_dir):
    src = fixtures_dir / "minicorpus"
    lines = (src / "posts.jsonl").read_text().splitlines()
    shuffled = list(reversed(lines))
    (tmp_path / "posts.jsonl").write_text("\n".join(shuffled) + "\n")
    corpus = load_dump(
        tmp_path / "posts.jsonl", src / "versions.jsonl", src / "comments.jsonl"
    )
    assert corpus.timelines == minicorpus.timelines


def test_count_preservation(minicorpus, fixtures_dir):
    input_lines = sum(
        1
        for line in (fixtures_dir / "minicorpus" / "comments.jsonl").read_text().splitlines()
        if line.strip()
    )
    kept = sum(len(t.comments) for t in minicorpus.timelines)
    assert kept + minicorpus.rejected_comment_count == input_lines


def test_loaded_timelines_validate(minicorpus):
    for timeline in minicorpus.timelines:
        assert validate_timeline(timeline) == []


def test_validate_timeline_reports_gap():
    t = make_timeline(2, [(11, 100, ["a();"]), (11, 200, ["b();"])], [])
    bad = AnswerTimeline(
        answer=t.answer,
        versions=(t.versions[0], VersionSnapshot(2, 3, 11, 200, ("b();",))),
        comments=(),
    )
    violations = validate_timeline(bad)
    assert len(violations) == 1
    assert "version_index" in violations[0]


def test_validate_timeline_reports_timestamp_order():
    t = make_timeline(2, [(11, 200, ["a();"]), (11, 100, ["b();"])], [])
    violations = validate_timeline(t)
    assert len(violations) == 1
    assert "created_ts" in violations[0]


def test_validate_timeline_ok():
    t = make_timeline(
        2,
        [(11, 100, ["a();"]), (11, 200, ["b();"])],
        [(20, 12, 150, "hello")],
    )
    assert validate_timeline(t) == []


def test_parse_timestamp_forms():
    assert parse_timestamp("1970-01-01T00:00:10Z") == 10
    assert parse_timestamp("1970-01-01T01:00:10+01:00") == 10
    assert parse_timestamp("1970-01-01T00:00:10.999Z") == 10  # sub-seconds truncated
    assert parse_timestamp("1970-01-01 00:00:10") == 10  # naive treated as UTC
    with pytest.raises(DumpError):
        parse_timestamp("not-a-date")


def test_cache_round_trip(tmp_path, minicorpus):
    path = tmp_path / "cache.json"
    save_corpus(minicorpus, path)
    loaded = load_corpus(path)
    assert loaded.timelines == minicorpus.timelines
    assert loaded.question_authors == minicorpus.question_authors
    assert loaded.rejected_comment_count == minicorpus.rejected_comment_count


def test_cache_rejects_unknown_format_version(tmp_path):
    path = tmp_path / "cache.json"
    path.write_text(json.dumps({"format_version": 99, "timelines": []}))
    with pytest.raises(DumpError, match="format version"):
        load_corpus(path)


def test_serialized_output_is_byte_identical(tmp_path, minicorpus):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    save_corpus(minicorpus, a)
    save_corpus(minicorpus, b)
    assert a.read_bytes() == b.read_bytes()
