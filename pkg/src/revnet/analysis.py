"""Descriptive analyses over a validated corpus.

Bucketed means, quartile CDF contrasts on reviewer centrality, the dataset
summary table, linguistic group contrasts, and irregular-case detection.
Everything is a pure function of the event log; ``run_all`` writes one CSV
per analysis plus a manifest mapping analysis name -> file -> columns.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from . import centrality
from .corpus import Corpus
from .features import supporting_features
from .review_graph import build_graph
from .text_metrics import CATEGORIES, Lexicon, category_percentages, sentiment_score

HIGH_CITED_REJECTED_MIN = 20  # twice the rejected papers' average citation
LOW_CITED_ACCEPTED_MAX = 10  # exclusive upper bound


# -- bucketing --------------------------------------------------------------


def bucket_powers_of_two(citations: int) -> int:
    """Citation buckets <=1, 2, (2,4], (4,8], ... -> 0, 1, 2, 3, ..."""
    if citations < 0:
        raise ValueError("citations must be nonnegative")
    if citations <= 1:
        return 0
    return (citations - 1).bit_length()  # == ceil(log2 c) for c >= 2


def bucket_fixed_width(value: float, width: float) -> int:
    """Half-open buckets [k*width, (k+1)*width)."""
    return int(value // width)


def bucket_ratio_decile(ratio: float) -> int:
    """Deciles [0.0, 0.1), [0.1, 0.2), ...; 1.0 lands in the top bucket."""
    return min(int(ratio * 10), 9)


@dataclass(frozen=True)
class GroupStat:
    bucket: int
    count: int
    mean: float


def bucket_mean(values: Sequence[float], keys: Sequence[int]) -> list[GroupStat]:
    """Mean of ``values`` grouped by precomputed bucket indices."""
    if len(values) != len(keys):
        raise ValueError("values and keys must align")
    groups: dict[int, list[float]] = {}
    for v, k in zip(values, keys):
        groups.setdefault(k, []).append(v)
    return [GroupStat(k, len(vs), float(np.mean(vs))) for k, vs in sorted(groups.items())]


# -- quartile CDF contrast --------------------------------------------------


def empirical_cdf(values: Sequence[float]) -> list[tuple[float, float]]:
    xs = sorted(values)
    n = len(xs)
    out = []
    for i, x in enumerate(xs, start=1):
        if out and out[-1][0] == x:
            out[-1] = (x, i / n)
        else:
            out.append((x, i / n))
    return out


def quartile_contrast(metric_by_reviewer: dict[str, float],
                      citations_by_reviewer: dict[str, list[int]]):
    """Citation CDFs for papers of the top vs bottom 25% reviewers by metric.

    Ties in the metric are broken by reviewer id so the split is
    deterministic.  Quartile size is max(1, n // 4).
    """
    if len(metric_by_reviewer) < 4:
        raise ValueError("need at least 4 scored reviewers")
    ranked = sorted(metric_by_reviewer, key=lambda r: (-metric_by_reviewer[r], r))
    q = max(1, len(ranked) // 4)
    top, bottom = ranked[:q], ranked[-q:]

    def pool(group: Iterable[str]) -> list[int]:
        cites: list[int] = []
        for rid in group:
            cites.extend(citations_by_reviewer.get(rid, []))
        return cites

    return empirical_cdf(pool(top)), empirical_cdf(pool(bottom))


# -- summaries and irregular cases ------------------------------------------


def _review_rounds(corpus: Corpus, paper_id: str) -> int:
    return max((r.round for r in corpus.reports.get(paper_id, [])), default=0)


def summary_table(corpus: Corpus) -> dict[str, float]:
    accepted = [p for p in corpus.submissions if corpus.outcome(p) == "accept"]
    rejected = [p for p in corpus.submissions if corpus.outcome(p) == "reject"]

    def mean(vals):
        return float(np.mean(vals)) if vals else 0.0

    authors = {a for s in corpus.submissions.values() for a in s.author_ids}
    subs_per_author = (len([a for s in corpus.submissions.values()
                            for a in s.author_ids]) / len(authors)) if authors else 0.0
    return {
        "papers": len(corpus.submissions),
        "papers_accepted": len(accepted),
        "papers_rejected": len(rejected),
        "mean_reviews_accepted": mean([_review_rounds(corpus, p) for p in accepted]),
        "mean_reviews_rejected": mean([_review_rounds(corpus, p) for p in rejected]),
        "mean_citations_accepted": mean([corpus.citations(p) or 0 for p in accepted]),
        "mean_citations_rejected": mean([corpus.citations(p) or 0 for p in rejected]),
        "unique_authors": len(authors),
        "mean_submissions_per_author": subs_per_author,
        "mean_authors_per_paper": mean([len(s.author_ids)
                                        for s in corpus.submissions.values()]),
    }


@dataclass(frozen=True)
class IrregularCase:
    paper_id: str
    outcome: str
    citations: int
    decision_year: int
    author_acceptance_ratio: Optional[float]
    reviewer_accept_ratio: Optional[float]
    first_round_report_length: Optional[float]


def irregular_cases(corpus: Corpus, exposure_cutoff_year: int,
                    lexicon: Optional[Lexicon] = None):
    """Highly cited rejected (>= 20) and low cited accepted (< 10) papers.

    Only papers decided strictly before the exposure cutoff year count, so
    every flagged paper had time to accrue citations.  Each case carries the
    as-of-submission author/reviewer history and the first-round report
    length used by the CDF contrasts.
    """
    high_rejected: list[IrregularCase] = []
    low_accepted: list[IrregularCase] = []
    for pid in corpus.paper_ids():
        outcome = corpus.outcome(pid)
        cites = corpus.citations(pid)
        year = corpus.publication_year(pid)
        if outcome not in ("accept", "reject") or cites is None or year is None:
            continue
        if year >= exposure_cutoff_year:
            continue
        flagged = ((outcome == "reject" and cites >= HIGH_CITED_REJECTED_MIN)
                   or (outcome == "accept" and cites < LOW_CITED_ACCEPTED_MAX))
        if not flagged:
            continue
        as_of = corpus.submission_date(pid)
        sub = corpus.submissions[pid]
        author_ratios = [r for r in
                         (corpus.author_profile(a, as_of).acceptance_ratio
                          for a in sub.author_ids) if r is not None]
        reviewer_ratios = [r for r in
                           (corpus.reviewer_profile(rid, as_of).accept_ratio
                            for rid in corpus.assigned_reviewers(pid)) if r is not None]
        first_round = [r for r in corpus.reports.get(pid, []) if r.round == 1]
        case = IrregularCase(
            paper_id=pid,
            outcome=outcome,
            citations=cites,
            decision_year=year,
            author_acceptance_ratio=float(np.mean(author_ratios)) if author_ratios else None,
            reviewer_accept_ratio=float(np.mean(reviewer_ratios)) if reviewer_ratios else None,
            first_round_report_length=(float(np.mean([len(r.text.split())
                                                      for r in first_round]))
                                       if first_round else None),
        )
        (high_rejected if outcome == "reject" else low_accepted).append(case)
    return high_rejected, low_accepted


def lqi_contrast(corpus: Corpus, lexicon: Lexicon,
                 exposure_cutoff_year: int) -> dict[str, tuple[float, float]]:
    """Mean category percentages for top vs bottom 10% cited accepted papers."""
    pool = []
    for pid in corpus.paper_ids():
        cites = corpus.citations(pid)
        year = corpus.publication_year(pid)
        if (corpus.outcome(pid) == "accept" and cites is not None
                and year is not None and year < exposure_cutoff_year):
            pool.append((pid, cites))
    if len(pool) < 10:
        return {}
    pool.sort(key=lambda t: (t[1], t[0]))
    k = max(1, len(pool) // 10)
    low, high = pool[:k], pool[-k:]

    def group_means(group):
        rows = []
        for pid, _ in group:
            for rep in corpus.reports.get(pid, []):
                rows.append(category_percentages(rep.text, lexicon))
        if not rows:
            return {c: 0.0 for c in CATEGORIES}
        return {c: float(np.mean([r[c] for r in rows])) for c in CATEGORIES}

    hi, lo = group_means(high), group_means(low)
    return {c: (hi[c], lo[c]) for c in CATEGORIES}


# -- full bundle ------------------------------------------------------------


def _write_csv(path, header: list[str], rows: list[list]) -> None:
    tmp = str(path) + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join("" if v is None else str(v) for v in row) + "\n")
    os.replace(tmp, path)


def run_all(corpus: Corpus, lexicon: Lexicon, out_dir,
            exposure_cutoff_year: Optional[int] = None) -> dict:
    """Write every analysis CSV under ``out_dir``; returns the manifest."""
    os.makedirs(out_dir, exist_ok=True)
    if exposure_cutoff_year is None:
        years = [rec.as_of_year for rec in corpus.citation_records.values()]
        exposure_cutoff_year = (max(years) - 3) if years else 0
    manifest: dict[str, dict] = {}

    def emit(name, header, rows):
        path = os.path.join(out_dir, f"{name}.csv")
        _write_csv(path, header, rows)
        manifest[name] = {"file": f"{name}.csv", "columns": header}

    accepted = [p for p in corpus.paper_ids() if corpus.outcome(p) == "accept"
                and corpus.citations(p) is not None]
    rejected = [p for p in corpus.paper_ids() if corpus.outcome(p) == "reject"
                and corpus.citations(p) is not None]

    # dataset summary
    emit("summary", ["metric", "value"],
         [[k, v] for k, v in summary_table(corpus).items()])

    # fraction of accepted / rejected papers per power-of-two citation bucket
    rows = []
    acc_buckets = [bucket_powers_of_two(corpus.citations(p)) for p in accepted]
    rej_buckets = [bucket_powers_of_two(corpus.citations(p)) for p in rejected]
    for b in sorted(set(acc_buckets) | set(rej_buckets)):
        rows.append([b,
                     acc_buckets.count(b) / len(acc_buckets) if acc_buckets else 0.0,
                     rej_buckets.count(b) / len(rej_buckets) if rej_buckets else 0.0])
    emit("citation_buckets", ["bucket", "fraction_accepted", "fraction_rejected"], rows)

    # average review rounds per citation bucket, split by outcome
    rows = []
    for label, group, buckets in (("accepted", accepted, acc_buckets),
                                  ("rejected", rejected, rej_buckets)):
        stats = bucket_mean([_review_rounds(corpus, p) for p in group], buckets)
        rows.extend([[label, s.bucket, s.count, s.mean] for s in stats])
    emit("reviews_by_citation_bucket", ["group", "bucket", "count", "mean_reviews"], rows)

    # average citation of the top-20-percentile papers per round count
    rows = []
    by_rounds: dict[int, list[int]] = {}
    for p in accepted:
        by_rounds.setdefault(_review_rounds(corpus, p), []).append(corpus.citations(p))
    for rr, cites in sorted(by_rounds.items()):
        cites.sort(reverse=True)
        k = max(1, round(len(cites) * 0.2))
        rows.append([rr, len(cites), k, float(np.mean(cites[:k]))])
    emit("top20_citation_by_rounds",
         ["rounds", "papers", "top20_count", "mean_citations"], rows)

    # mean citation per team size
    stats = bucket_mean([corpus.citations(p) for p in accepted],
                        [len(corpus.submissions[p].author_ids) for p in accepted])
    emit("team_size_citation", ["team_size", "count", "mean_citations"],
         [[s.bucket, s.count, s.mean] for s in stats])

    # per-paper supporting features drive the remaining bucketed analyses
    feats = {p: supporting_features(p, corpus, lexicon) for p in accepted}

    def bucketed(feature_idx, width, name, label):
        vals, keys = [], []
        for p in accepted:
            v = feats[p][feature_idx]
            if not np.isnan(v):
                vals.append(corpus.citations(p))
                keys.append(bucket_fixed_width(v, width))
        stats = bucket_mean(vals, keys)
        emit(name, [label, "count", "mean_citations"],
             [[s.bucket * width, s.count, s.mean] for s in stats])

    bucketed(2, 100, "report_length_citation", "length_bucket_start")  # RL
    bucketed(5, 100, "author_productivity_citation", "gap_bucket_start")  # AP
    bucketed(7, 100, "time_since_assignment_citation", "days_bucket_start")  # TA
    bucketed(8, 25, "report_delay_citation", "days_bucket_start")  # DR

    # acceptance-ratio / accept-ratio decile panels (citations, reviews, sentiment)
    for idx, name in ((4, "author_acceptance_ratio_buckets"),
                      (6, "reviewer_accept_ratio_buckets")):
        panels: dict[int, list[tuple[int, int, float]]] = {}
        for p in accepted:
            ratio = feats[p][idx]
            snt = feats[p][3]
            if np.isnan(ratio):
                continue
            panels.setdefault(bucket_ratio_decile(ratio), []).append(
                (corpus.citations(p), _review_rounds(corpus, p),
                 0.0 if np.isnan(snt) else float(snt)))
        rows = [[b / 10.0, len(g),
                 float(np.mean([t[0] for t in g])),
                 float(np.mean([t[1] for t in g])),
                 float(np.mean([t[2] for t in g]))]
                for b, g in sorted(panels.items())]
        emit(name, ["ratio_bucket_start", "count", "mean_citations",
                    "mean_reviews", "mean_sentiment"], rows)

    # sentiment vs citations, one point per paper, grouped by decision year
    rows = []
    for p in accepted + rejected:
        snt = feats[p][3] if p in feats else supporting_features(p, corpus, lexicon)[3]
        rows.append([corpus.publication_year(p), p, corpus.outcome(p),
                     "" if np.isnan(snt) else float(snt), corpus.citations(p)])
    rows.sort(key=lambda r: (r[0], r[1]))
    emit("sentiment_by_year", ["year", "paper_id", "outcome", "sentiment", "citations"],
         rows)

    # centrality quartile contrasts on the full-history graph
    graph = build_graph(corpus)
    cites_by_reviewer: dict[str, list[int]] = {}
    for p in accepted:
        for rid in corpus.assigned_reviewers(p):
            cites_by_reviewer.setdefault(rid, []).append(corpus.citations(p))
    rows = []
    if graph.n >= 4:
        table = centrality.compute_table(graph)
        for measure in centrality.MEASURES:
            metric = {node: float(getattr(table, measure)[i])
                      for i, node in enumerate(graph.nodes)}
            top, bottom = quartile_contrast(metric, cites_by_reviewer)
            rows.extend([[measure, "top25", v, f] for v, f in top])
            rows.extend([[measure, "bottom25", v, f] for v, f in bottom])
    emit("centrality_quartile_contrast", ["measure", "group", "citations", "cdf"], rows)

    # linguistic category contrast, high vs low cited
    contrast = lqi_contrast(corpus, lexicon, exposure_cutoff_year)
    emit("lqi_contrast", ["category", "high_cited_mean_pct", "low_cited_mean_pct"],
         [[c, hi, lo] for c, (hi, lo) in contrast.items()])

    # irregular cases
    high_rej, low_acc = irregular_cases(corpus, exposure_cutoff_year)
    case_header = ["paper_id", "outcome", "citations", "decision_year",
                   "author_acceptance_ratio", "reviewer_accept_ratio",
                   "first_round_report_length"]

    def case_rows(cases):
        return [[c.paper_id, c.outcome, c.citations, c.decision_year,
                 c.author_acceptance_ratio, c.reviewer_accept_ratio,
                 c.first_round_report_length] for c in cases]

    emit("irregular_high_cited_rejected", case_header, case_rows(high_rej))
    emit("irregular_low_cited_accepted", case_header, case_rows(low_acc))

    manifest_doc = {"exposure_cutoff_year": exposure_cutoff_year,
                    "analyses": manifest}
    tmp = os.path.join(out_dir, "manifest.json.tmp")
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(manifest_doc, fh, indent=2, sort_keys=True)
    os.replace(tmp, os.path.join(out_dir, "manifest.json"))
    return manifest_doc
