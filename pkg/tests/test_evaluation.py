import pytest

from pairminer.codeterm import TermMatch
from pairminer.evaluation import (
    AgreementTable,
    GroundTruthEntry,
    cohen_kappa,
    load_agreement_table,
    load_ground_truth,
    sample_size,
    score,
    threshold_sweep,
)
from pairminer.matcher import CommentEditPair


def pair(answer_id, comment_id, version):
    return CommentEditPair(
        answer_id, comment_id, version, (TermMatch("t", "t", 100.0),)
    )


TAGS = {1: "java", 2: "java", 3: "python"}


def test_score_perfect_detection():
    gt = [GroundTruthEntry(1, 10, 2), GroundTruthEntry(3, 30, 4)]
    detected = [pair(1, 10, 2), pair(3, 30, 4)]
    report = score(detected, gt, TAGS)
    assert report.overall.precision == 1.0
    assert report.overall.recall == 1.0
    assert report.overall.existing == 2


def test_score_zero_detection_convention():
    gt = [GroundTruthEntry(1, 10, 2)]
    report = score([], gt, TAGS)
    assert report.overall.precision == 0.0
    assert report.overall.recall == 0.0


def test_score_requires_same_edit_version():
    gt = [GroundTruthEntry(1, 10, 3)]
    report = score([pair(1, 10, 2)], gt, TAGS)
    assert report.overall.correct == 0
    assert report.overall.detected == 1


def test_score_ignores_no_edit_entries_for_existing():
    gt = [GroundTruthEntry(1, 10, 2), GroundTruthEntry(2, 20, None)]
    report = score([pair(1, 10, 2)], gt, TAGS)
    assert report.overall.existing == 1
    assert report.overall.correct == 1


def test_score_per_tag_rows():
    gt = [GroundTruthEntry(1, 10, 2), GroundTruthEntry(3, 30, 2)]
    detected = [pair(1, 10, 2)]
    report = score(detected, gt, TAGS)
    by_tag = {r.tag: r for r in report.rows}
    assert by_tag["java"].detected == 1
    assert by_tag["java"].correct == 1
    assert by_tag["python"].detected == 0
    assert by_tag["python"].existing == 1
    assert report.rows[-1].tag == "overall"


def test_score_errors():
    with pytest.raises(ValueError):
        score([], [], TAGS)
    with pytest.raises(ValueError, match="999"):
        score([pair(999, 1, 2)], [GroundTruthEntry(1, 10, 2)], TAGS)
    with pytest.raises(ValueError, match="duplicate"):
        score([], [GroundTruthEntry(1, 10, 2), GroundTruthEntry(1, 10, 3)], TAGS)


def test_load_ground_truth(tmp_path):
    path = tmp_path / "gt.csv"
    path.write_text("answer_id,comment_id,edit_version\n1,10,2\n2,20,\n")
    entries = load_ground_truth(path)
    assert entries == [GroundTruthEntry(1, 10, 2), GroundTruthEntry(2, 20, None)]


def test_load_ground_truth_rejects_duplicates(tmp_path):
    path = tmp_path / "gt.csv"
    path.write_text("answer_id,comment_id,edit_version\n1,10,2\n1,10,3\n")
    with pytest.raises(ValueError, match="duplicate"):
        load_ground_truth(path)


def test_load_ground_truth_requires_header(tmp_path):
    path = tmp_path / "gt.csv"
    path.write_text("a,b\n1,2\n")
    with pytest.raises(ValueError, match="header"):
        load_ground_truth(path)


def test_cohen_kappa_values():
    assert cohen_kappa(AgreementTable(("y", "n"), ((30, 0), (0, 20)))) == 1.0
    assert cohen_kappa(AgreementTable(("y", "n"), ((20, 5), (10, 15)))) == 0.4
    assert cohen_kappa(AgreementTable(("y", "n"), ((25, 25), (25, 25)))) == 0.0


def test_cohen_kappa_degenerate_marginals():
    with pytest.raises(ValueError):
        cohen_kappa(AgreementTable(("y", "n"), ((0, 0), (0, 5))))


def test_cohen_kappa_transpose_of_symmetric_table():
    counts = ((12, 3), (3, 7))
    table = AgreementTable(("y", "n"), counts)
    transposed = AgreementTable(("y", "n"), tuple(zip(*counts)))
    assert cohen_kappa(table) == cohen_kappa(transposed)


def test_cohen_kappa_range():
    import random

    rng = random.Random(7)
    for _ in range(100):
        counts = tuple(
            tuple(rng.randrange(0, 30) for _ in range(3)) for _ in range(3)
        )
        if sum(map(sum, counts)) == 0:
            continue
        try:
            kappa = cohen_kappa(AgreementTable(("a", "b", "c"), counts))
        except ValueError:
            continue
        assert -1.0 <= kappa <= 1.0


def test_load_agreement_table(tmp_path):
    path = tmp_path / "agreement.csv"
    path.write_text(",matched,unmatched\nmatched,20,5\nunmatched,10,15\n")
    table = load_agreement_table(path)
    assert table.categories == ("matched", "unmatched")
    assert cohen_kappa(table) == 0.4


def test_load_agreement_table_label_mismatch(tmp_path):
    path = tmp_path / "agreement.csv"
    path.write_text(",a,b\nb,1,2\na,3,4\n")
    with pytest.raises(ValueError, match="labels"):
        load_agreement_table(path)


def test_sample_size_examples():
    assert sample_size(51358, 0.95, 0.05) == 382
    assert sample_size(10**9, 0.95, 0.05) == 385
    assert sample_size(100, 0.95, 0.05) == 80


def test_sample_size_monotonicity():
    sizes = [sample_size(pop, 0.95, 0.05) for pop in (50, 500, 5000, 50000, 10**8)]
    assert sizes == sorted(sizes)
    by_interval = [sample_size(51358, 0.95, w) for w in (0.01, 0.05, 0.1)]
    assert by_interval == sorted(by_interval, reverse=True)


def test_sample_size_validation():
    with pytest.raises(ValueError):
        sample_size(0, 0.95, 0.05)
    with pytest.raises(ValueError):
        sample_size(100, 1.5, 0.05)


def test_threshold_sweep_singleton_matches_plain_run(minicorpus, catalog, fixtures_dir):
    gt = load_ground_truth(fixtures_dir / "minicorpus" / "ground_truth.csv")
    points = threshold_sweep(minicorpus.timelines, catalog, gt, [90.0])
    from pairminer.matcher import MatchConfig, match_corpus

    pairs = match_corpus(minicorpus.timelines, catalog, MatchConfig())
    overall = score(pairs, gt, minicorpus.tag_of()).overall
    assert points[0].detected == overall.detected
    assert points[0].precision == overall.precision
    assert points[0].recall == overall.recall


def test_threshold_sweep_monotone_detected(minicorpus, catalog, fixtures_dir):
    gt = load_ground_truth(fixtures_dir / "minicorpus" / "ground_truth.csv")
    points = threshold_sweep(minicorpus.timelines, catalog, gt, [60.0, 90.0, 100.0])
    detected = [p.detected for p in points]
    assert detected == sorted(detected, reverse=True)


def test_threshold_sweep_requires_sorted_thresholds(minicorpus, catalog, fixtures_dir):
    gt = load_ground_truth(fixtures_dir / "minicorpus" / "ground_truth.csv")
    with pytest.raises(ValueError):
        threshold_sweep(minicorpus.timelines, catalog, gt, [90.0, 60.0])


def test_eval_report_invariants(minicorpus, catalog, fixtures_dir):
    gt = load_ground_truth(fixtures_dir / "minicorpus" / "ground_truth.csv")
    from pairminer.matcher import match_corpus

    report = score(match_corpus(minicorpus.timelines, catalog), gt, minicorpus.tag_of())
    for row in report.rows:
        assert 0.0 <= row.precision <= 1.0
        assert 0.0 <= row.recall <= 1.0
        assert row.correct <= min(row.detected, row.existing)
