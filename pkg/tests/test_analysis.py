import datetime as dt
import json

import numpy as np
import pytest

from revnet.analysis import (HIGH_CITED_REJECTED_MIN, LOW_CITED_ACCEPTED_MAX,
                             bucket_fixed_width, bucket_mean,
                             bucket_powers_of_two, bucket_ratio_decile,
                             empirical_cdf, irregular_cases, lqi_contrast,
                             quartile_contrast, run_all, summary_table)
from revnet.corpus import Corpus
from revnet.synth import SynthConfig, generate

from helpers import minimal_paper

D = dt.date


# -- bucketing ---------------------------------------------------------------


def test_powers_of_two_buckets_match_required_mapping():
    cases = {0: 0, 1: 0, 2: 1, 3: 2, 4: 2, 5: 3, 8: 3, 9: 4, 16: 4}
    for cites, bucket in cases.items():
        assert bucket_powers_of_two(cites) == bucket, cites


def test_powers_of_two_buckets_against_enumeration():
    # bucket b is the smallest b with citations <= 2**b
    for c in range(0, 1100):
        expected = next(b for b in range(12) if c <= 2 ** b)
        assert bucket_powers_of_two(c) == expected, c
    with pytest.raises(ValueError):
        bucket_powers_of_two(-1)


def test_fixed_width_buckets_are_half_open():
    assert bucket_fixed_width(0.0, 100) == 0
    assert bucket_fixed_width(99.999, 100) == 0
    assert bucket_fixed_width(100.0, 100) == 1
    assert bucket_fixed_width(199.0, 100) == 1
    assert bucket_fixed_width(200.0, 100) == 2
    assert bucket_fixed_width(74.9, 25) == 2
    assert bucket_fixed_width(75.0, 25) == 3


def test_ratio_deciles():
    assert bucket_ratio_decile(0.0) == 0
    assert bucket_ratio_decile(0.0999) == 0
    assert bucket_ratio_decile(0.1) == 1
    assert bucket_ratio_decile(0.95) == 9
    assert bucket_ratio_decile(1.0) == 9  # closed top bucket


def test_bucket_mean_groups_and_sorts():
    stats = bucket_mean([1.0, 3.0, 10.0], [1, 1, 0])
    assert [(s.bucket, s.count, s.mean) for s in stats] == \
        [(0, 1, 10.0), (1, 2, 2.0)]
    with pytest.raises(ValueError):
        bucket_mean([1.0], [1, 2])


# -- CDFs and quartile contrast ----------------------------------------------


def test_empirical_cdf_handles_ties():
    cdf = empirical_cdf([3, 1, 3, 2])
    assert cdf == [(1, 0.25), (2, 0.5), (3, 1.0)]


def test_quartile_contrast_deterministic_tie_break():
    metric = {"r1": 1.0, "r2": 1.0, "r3": 0.5, "r4": 0.0, "r5": 0.0}
    cites = {r: [i] for i, r in enumerate(sorted(metric))}
    top, bottom = quartile_contrast(metric, cites)
    # q = 1; top is r1 (tie broken by id), bottom is r5
    assert top == [(0, 1.0)]
    assert bottom == [(4, 1.0)]
    with pytest.raises(ValueError):
        quartile_contrast({"a": 1.0}, {})


# -- summary table -----------------------------------------------------------


def test_summary_table_counts_by_hand():
    events = (minimal_paper("p1", D(2010, 1, 1), authors=("a1", "a2"),
                            outcome="accept", citations=8)
              + minimal_paper("p2", D(2010, 2, 1), authors=("a1",),
                              outcome="reject", citations=2)
              + minimal_paper("p3", D(2010, 3, 1), authors=("a3",),
                              outcome="withdraw"))
    table = summary_table(Corpus(events))
    assert table["papers"] == 3
    assert table["papers_accepted"] == 1
    assert table["papers_rejected"] == 1
    assert table["mean_reviews_accepted"] == 1.0
    assert table["mean_citations_accepted"] == 8.0
    assert table["mean_citations_rejected"] == 2.0
    assert table["unique_authors"] == 3
    assert table["mean_submissions_per_author"] == pytest.approx(4 / 3)
    assert table["mean_authors_per_paper"] == pytest.approx(4 / 3)


def test_summary_table_tracks_generator_review_means():
    config = SynthConfig(seed=2, papers_per_year=250, n_years=4)
    table = summary_table(Corpus(generate(config)))
    # generator plants ~1.76 rounds for accepted, ~1.35 for rejected
    assert table["mean_reviews_accepted"] == pytest.approx(1.76, abs=0.08)
    assert table["mean_reviews_rejected"] == pytest.approx(1.35, abs=0.12)
    assert table["mean_citations_accepted"] > table["mean_citations_rejected"]


# -- irregular cases ---------------------------------------------------------


def irregular_corpus():
    events = []
    events += minimal_paper("hot_rejected", D(2009, 1, 1), outcome="reject",
                            citations=HIGH_CITED_REJECTED_MIN)
    events += minimal_paper("cold_accepted", D(2009, 2, 1), outcome="accept",
                            citations=LOW_CITED_ACCEPTED_MAX - 1)
    events += minimal_paper("ordinary_accepted", D(2009, 3, 1), outcome="accept",
                            citations=50)
    events += minimal_paper("ordinary_rejected", D(2009, 4, 1), outcome="reject",
                            citations=HIGH_CITED_REJECTED_MIN - 1)
    # decided after the cutoff: must be ignored even though citations qualify
    events += minimal_paper("late_rejected", D(2012, 1, 1), outcome="reject",
                            citations=100)
    events += minimal_paper("no_citation", D(2009, 5, 1), outcome="accept")
    return Corpus(events)


def test_irregular_cases_exact_flagging():
    high, low = irregular_cases(irregular_corpus(), exposure_cutoff_year=2012)
    assert [c.paper_id for c in high] == ["hot_rejected"]
    assert [c.paper_id for c in low] == ["cold_accepted"]
    assert high[0].citations == 20 and high[0].outcome == "reject"
    assert low[0].decision_year == 2009


def test_irregular_cases_respect_cutoff():
    high, low = irregular_cases(irregular_corpus(), exposure_cutoff_year=2009)
    assert high == [] and low == []


# -- linguistic contrast -----------------------------------------------------


def test_lqi_contrast_needs_enough_papers(lexicon):
    events = minimal_paper("p1", D(2009, 1, 1), outcome="accept", citations=5)
    assert lqi_contrast(Corpus(events), lexicon, 2012) == {}


def test_lqi_contrast_shapes(lexicon):
    config = SynthConfig(seed=4, papers_per_year=150, n_years=3)
    corpus = Corpus(generate(config))
    cutoff = config.start_year + config.n_years + 1
    contrast = lqi_contrast(corpus, lexicon, cutoff)
    assert set(contrast) == {"future_tense", "negation", "insight", "causation",
                             "inclusive", "exclusive", "positive_emotion"}
    for hi, lo in contrast.values():
        assert hi >= 0 and lo >= 0


# -- bundle ------------------------------------------------------------------


def test_run_all_writes_manifest_and_files(tmp_path, lexicon):
    config = SynthConfig(seed=5, papers_per_year=120, n_years=3)
    corpus = Corpus(generate(config))
    manifest = run_all(corpus, lexicon, tmp_path)
    assert (tmp_path / "manifest.json").exists()
    on_disk = json.loads((tmp_path / "manifest.json").read_text())
    assert on_disk == manifest
    for entry in manifest["analyses"].values():
        path = tmp_path / entry["file"]
        assert path.exists()
        header = path.read_text().splitlines()[0]
        assert header.split(",") == entry["columns"]
    # default exposure cutoff = latest citation as-of year minus 3
    years = [r.as_of_year for r in corpus.citation_records.values()]
    assert manifest["exposure_cutoff_year"] == max(years) - 3
    expected = {"summary", "citation_buckets", "reviews_by_citation_bucket",
                "top20_citation_by_rounds", "team_size_citation",
                "report_length_citation", "author_productivity_citation",
                "time_since_assignment_citation", "report_delay_citation",
                "author_acceptance_ratio_buckets",
                "reviewer_accept_ratio_buckets", "sentiment_by_year",
                "centrality_quartile_contrast", "lqi_contrast",
                "irregular_high_cited_rejected", "irregular_low_cited_accepted"}
    assert set(manifest["analyses"]) == expected


def test_run_all_is_deterministic(tmp_path, lexicon):
    config = SynthConfig(seed=5, papers_per_year=80, n_years=2)
    corpus = Corpus(generate(config))
    run_all(corpus, lexicon, tmp_path / "a")
    run_all(corpus, lexicon, tmp_path / "b")
    for path in sorted((tmp_path / "a").iterdir()):
        assert path.read_bytes() == (tmp_path / "b" / path.name).read_bytes()
