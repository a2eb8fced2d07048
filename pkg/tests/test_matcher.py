import pytest

from pairminer.ingest import AnswerTimeline
from pairminer.matcher import (
    CODE_CHECK,
    PROXIMITY_BASELINE,
    CommentEditPair,
    MatchConfig,
    baseline_match,
    match_answer,
    match_corpus,
)

from synth import make_timeline, synth_corpus


def test_fig1_reconstruction_matches_e5(fig1_corpus, catalog):
    pairs = match_answer(fig1_corpus.timelines[0], catalog)
    assert len(pairs) == 1
    pair = pairs[0]
    assert pair.edit_version == 5
    assert pair.method == CODE_CHECK
    assert sorted(m.comment_term for m in pair.matches) == ["yourClient", "yourClientObject"]
    assert all(m.similarity == 100.0 for m in pair.matches)


def test_comment_without_code_terms_never_matches(catalog):
    t = make_timeline(
        2,
        [(11, 100, ["int x = 0;"]), (11, 300, ["int x = fooBarBaz;"])],
        [(20, 12, 200, "this simply does not work for me, sorry")],
    )
    assert match_answer(t, catalog) == []


def test_author_filter_toggle(catalog):
    # the only later edit is authored by the commenter
    t = make_timeline(
        2,
        [(11, 100, ["int x = 0;"]), (12, 300, ["int x = fooBarBaz;"])],
        [(20, 12, 200, "use fooBarBaz here")],
    )
    assert match_answer(t, catalog, MatchConfig(require_distinct_authors=True)) == []
    pairs = match_answer(t, catalog, MatchConfig(require_distinct_authors=False))
    assert len(pairs) == 1
    assert pairs[0].edit_version == 2


def test_equal_timestamps_do_not_match(catalog):
    t = make_timeline(
        2,
        [(11, 100, ["int x = 0;"]), (11, 200, ["int x = fooBarBaz;"])],
        [(20, 12, 200, "use fooBarBaz here")],
    )
    assert match_answer(t, catalog) == []
    later = make_timeline(
        2,
        [(11, 100, ["int x = 0;"]), (11, 201, ["int x = fooBarBaz;"])],
        [(20, 12, 200, "use fooBarBaz here")],
    )
    assert len(match_answer(later, catalog)) == 1


def test_prev_pointer_advances_over_skipped_versions(catalog):
    # v2 is authored by the commenter (skipped as a candidate) and introduces
    # the term; v3 is identical to v2, so its diff is empty and no pair may
    # be emitted. A stale prev pointer at v1 would wrongly match v3.
    t = make_timeline(
        2,
        [
            (11, 100, ["int x = 0;"]),
            (12, 300, ["int x = fooBarBaz;"]),
            (11, 400, ["int x = fooBarBaz;"]),
        ],
        [(20, 12, 200, "use fooBarBaz here")],
    )
    assert match_answer(t, catalog) == []


def test_first_matching_edit_wins(catalog):
    # both v2 and v3 add the commented term; the scan stops at v2
    t = make_timeline(
        2,
        [
            (11, 100, ["int x = 0;"]),
            (11, 300, ["int x = fooBarBaz;"]),
            (11, 400, ["int x = fooBarBaz;\nint y = fooBarBaz;"]),
        ],
        [(20, 12, 200, "use fooBarBaz here")],
    )
    pairs = match_answer(t, catalog)
    assert [p.edit_version for p in pairs] == [2]


def test_match_answer_invariant_under_comment_permutation(catalog, fig1_corpus):
    t = fig1_corpus.timelines[0]
    shuffled = AnswerTimeline(
        answer=t.answer, versions=t.versions, comments=tuple(reversed(t.comments))
    )
    assert match_answer(shuffled, catalog) == match_answer(t, catalog)


def test_baseline_nearest_after():
    t = make_timeline(
        2,
        [(11, 5, ["a();"]), (11, 20, ["b();"]), (11, 30, ["c();"])],
        [(20, 12, 10, "some comment")],
    )
    pairs = baseline_match(t)
    assert len(pairs) == 1
    assert pairs[0].edit_version == 2  # the t=20 edit
    assert pairs[0].method == PROXIMITY_BASELINE
    assert pairs[0].matches == ()


def test_baseline_comment_after_last_edit():
    t = make_timeline(
        2,
        [(11, 5, ["a();"]), (11, 20, ["b();"])],
        [(20, 12, 25, "too late")],
    )
    assert baseline_match(t) == []


def test_baseline_two_comments_one_edit():
    t = make_timeline(
        2,
        [(11, 5, ["a();"]), (11, 20, ["b();"])],
        [(20, 12, 10, "first"), (21, 13, 12, "second")],
    )
    pairs = baseline_match(t)
    assert [p.edit_version for p in pairs] == [2, 2]
    assert [p.comment_id for p in pairs] == [20, 21]


def test_baseline_ignores_authorship():
    t = make_timeline(
        2,
        [(11, 5, ["a();"]), (12, 20, ["b();"])],
        [(20, 12, 10, "self comment")],
    )
    assert len(baseline_match(t)) == 1


def test_baseline_tie_prefers_lower_version():
    t = make_timeline(
        2,
        [(11, 5, ["a();"]), (11, 20, ["b();"]), (11, 20, ["c();"])],
        [(20, 12, 10, "x")],
    )
    pairs = baseline_match(t)
    assert [p.edit_version for p in pairs] == [2]


def test_match_corpus_empty_and_singleton(catalog, fig1_corpus):
    assert match_corpus([], catalog) == []
    t = fig1_corpus.timelines[0]
    assert match_corpus([t], catalog) == match_answer(t, catalog)


def test_match_corpus_deterministic_and_parallel_safe(catalog):
    corpus = synth_corpus(n_answers=120, seed=3)
    runs = [match_corpus(corpus, catalog, jobs=jobs) for jobs in (1, 1, 4)]
    assert runs[0] == runs[1] == runs[2]
    ids = [(p.answer_id, p.comment_id) for p in runs[0]]
    assert ids == sorted(ids)


def test_match_corpus_threshold_monotone(catalog):
    corpus = synth_corpus(n_answers=150, seed=5)
    low = match_corpus(corpus, catalog, MatchConfig(threshold=60))
    high = match_corpus(corpus, catalog, MatchConfig(threshold=90))
    assert len(high) <= len(low)
    low_by_key = {(p.answer_id, p.comment_id): p.edit_version for p in low}
    for pair in high:
        key = (pair.answer_id, pair.comment_id)
        assert key in low_by_key
        assert low_by_key[key] <= pair.edit_version


def test_every_emitted_pair_respects_config(catalog):
    corpus = synth_corpus(n_answers=80, seed=11)
    cfg = MatchConfig(threshold=85)
    by_id = {t.answer.post_id: t for t in corpus}
    for pair in match_corpus(corpus, catalog, cfg):
        t = by_id[pair.answer_id]
        comment = next(c for c in t.comments if c.comment_id == pair.comment_id)
        version = t.versions[pair.edit_version - 1]
        assert version.created_ts > comment.created_ts
        assert version.editor_id != comment.author_id
        assert all(m.similarity >= cfg.threshold for m in pair.matches)


def test_comment_matched_at_most_once(catalog):
    corpus = synth_corpus(n_answers=100, seed=13)
    pairs = match_corpus(corpus, catalog)
    keys = [(p.answer_id, p.comment_id) for p in pairs]
    assert len(keys) == len(set(keys))


def test_pair_invariants_enforced():
    with pytest.raises(ValueError):
        CommentEditPair(1, 2, 2, (), method=CODE_CHECK)
    from pairminer.codeterm import TermMatch

    with pytest.raises(ValueError):
        CommentEditPair(1, 2, 2, (TermMatch("a", "a", 100.0),), method=PROXIMITY_BASELINE)


def test_match_config_validation():
    with pytest.raises(ValueError):
        MatchConfig(threshold=150)
    with pytest.raises(ValueError):
        MatchConfig(similarity_norm="other")


def test_similarity_norm_wired_through_matcher(catalog):
    # "ab"/"ba" scores 0 under max-norm but 50 under sum-norm
    t = make_timeline(
        2,
        [(11, 100, ["int x = 0;"]), (11, 300, ["int x = `ba`;"])],
        [(20, 12, 200, "why not `ab` here?")],
    )
    max_cfg = MatchConfig(threshold=50, similarity_norm="max-norm")
    sum_cfg = MatchConfig(threshold=50, similarity_norm="sum-norm")
    assert match_answer(t, catalog, max_cfg) == []
    pairs = match_answer(t, catalog, sum_cfg)
    assert len(pairs) == 1
    assert pairs[0].matches[0].similarity == 50.0
