import os
import pathlib
import random

import pytest

import greeneval as ge

FIXTURES = pathlib.Path(os.environ["GREEN_FIXTURES_DIR"])


def test_golden_response_parses_and_scores():
    raw = (FIXTURES / "golden_analysis_response.txt").read_text()
    analysis = ge.parse_green_analysis(raw)
    counts = [f.count for f in analysis.sig]
    assert counts == [0, 0, 1, 0, 0, 0]
    assert all(f.count == 0 for f in analysis.insig)
    assert analysis.matched_count == 3
    assert len(analysis.matched_findings) == 3
    assert ge.green_score(analysis) == 0.75


def test_render_parse_round_trip():
    raw = (FIXTURES / "golden_analysis_response.txt").read_text()
    analysis = ge.parse_green_analysis(raw)
    again = ge.parse_green_analysis(ge.render_green_analysis(analysis))
    assert [f.count for f in again.sig] == [f.count for f in analysis.sig]
    assert again.matched_findings == analysis.matched_findings


def test_score_law_on_random_counts():
    rng = random.Random(7)
    for _ in range(500):
        sig = [rng.randrange(4) for _ in range(6)]
        insig = [rng.randrange(4) for _ in range(6)]
        matched = rng.randrange(5)
        a = ge.analysis_from_counts(sig, insig, matched)
        score = ge.green_score(a)
        assert 0.0 <= score <= 1.0
        assert (score == 0.0) == (matched == 0)
        assert (score == 1.0) == (matched > 0 and sum(sig) == 0)
        # insignificant counts never move the score
        b = ge.analysis_from_counts(sig, [rng.randrange(9) for _ in range(6)],
                                    matched)
        assert ge.green_score(b) == score


def test_aggregate_matches_direct_computation():
    analyses = [
        ge.analysis_from_counts([0] * 6, [0] * 6, 2),
        ge.analysis_from_counts([1, 0, 0, 0, 0, 0], [0] * 6, 1),
        ge.analysis_from_counts([0, 2, 0, 0, 0, 0], [0] * 6, 0),
    ]
    results = [ge.make_result(f"p{i}", a, "fp") for i, a in enumerate(analyses)]
    agg = ge.aggregate(results, parse_failures=1)
    scores = [1.0, 0.5, 0.0]
    assert agg.n == 3
    assert agg.parse_failures == 1
    assert agg.mean == pytest.approx(sum(scores) / 3, abs=1e-12)


def test_parse_failure_raises_module_error():
    with pytest.raises(ge.Error):
        ge.parse_green_analysis("free-form chatter with no sections")
