"""Per-paper feature vectors and the per-year citation-rank target.

The 14 regression features, in fixed column order:

    Deg, BC, CC, Clus, PR   mean centralities of the assigned reviewer(s) in
                            the reviewer graph snapshot at the paper's
                            submission date (excluding that date)
    RR                      rounds of review (max round carrying a report)
    TS                      team size (author count)
    RL                      mean word count of first-round referee reports
    SNT                     mean sentiment of first-round referee reports
    AR                      mean author acceptance ratio at submission time
    AP                      first author's mean inter-submission gap (days)
    RAC                     mean reviewer accept ratio at submission time
    TA                      mean days since each reviewer's prior assignment
    DR                      mean first-round assignment-to-report delay (days)

Every history-derived entry uses events strictly before the paper's
submission date; undefined entries stay NaN with a parallel missing mask.
Imputation happens at model time, never here.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass
from statistics import NormalDist
from typing import Optional

import numpy as np

from . import centrality
from .corpus import Corpus
from .review_graph import build_graph
from .text_metrics import Lexicon, sentiment_score

FEATURE_NAMES = ("Deg", "BC", "CC", "Clus", "PR", "RR", "TS", "RL", "SNT",
                 "AR", "AP", "RAC", "TA", "DR")
NETWORK_FEATURES = ("Deg", "BC", "CC", "Clus", "PR")

_NORMAL = NormalDist()


@dataclass(frozen=True)
class FeatureVector:
    paper_id: str
    values: np.ndarray  # length 14, NaN where missing
    missing: np.ndarray  # bool, parallel to FEATURE_NAMES

    def as_dict(self) -> dict[str, float]:
        return dict(zip(FEATURE_NAMES, (float(v) for v in self.values)))


@dataclass(frozen=True)
class TargetValue:
    paper_id: str
    publication_year: int
    citation_rank: float


class SnapshotCache:
    """Per-cutoff-date graph + centrality tables, shared across papers.

    Read-only once built for a date; papers submitted on the same day reuse
    the same snapshot.
    """

    def __init__(self, corpus: Corpus):
        self.corpus = corpus
        self._tables: dict[dt.date, tuple] = {}

    def table(self, cutoff: dt.date):
        hit = self._tables.get(cutoff)
        if hit is None:
            graph = build_graph(self.corpus, cutoff)
            table = centrality.compute_table(graph)
            hit = (graph, table)
            self._tables[cutoff] = hit
        return hit


def network_features(paper_id: str, corpus: Corpus,
                     cache: Optional[SnapshotCache] = None) -> np.ndarray:
    """Mean (Deg, BC, CC, Clus, PR) over the paper's assigned reviewers.

    Reviewers not yet in the snapshot contribute zeros, with PageRank at the
    uniform 1/n value.  An empty snapshot (or no assignments) yields NaNs.
    """
    reviewers = corpus.assigned_reviewers(paper_id)
    if not reviewers:
        return np.full(5, np.nan)
    cache = cache or SnapshotCache(corpus)
    graph, table = cache.table(corpus.submission_date(paper_id))
    if graph.n == 0:
        return np.full(5, np.nan)
    rows = np.zeros((len(reviewers), 5))
    for k, rid in enumerate(reviewers):
        i = graph.index_of(rid)
        if i is None:
            rows[k] = (0.0, 0.0, 0.0, 0.0, 1.0 / graph.n)
        else:
            rows[k] = (table.degree[i], table.betweenness[i], table.closeness[i],
                       table.clustering[i], table.pagerank[i])
    return rows.mean(axis=0)


def _mean_or_nan(values: list[float]) -> float:
    return float(np.mean(values)) if values else float("nan")


def supporting_features(paper_id: str, corpus: Corpus, lexicon: Lexicon) -> np.ndarray:
    """(RR, TS, RL, SNT, AR, AP, RAC, TA, DR) for one paper."""
    sub = corpus.submissions[paper_id]
    as_of = sub.date
    reports = corpus.reports.get(paper_id, [])
    first_round = [r for r in reports if r.round == 1]

    rr = float(max((r.round for r in reports), default=0)) if reports else float("nan")
    ts = float(len(sub.author_ids))
    rl = _mean_or_nan([float(len(r.text.split())) for r in first_round])
    snt = _mean_or_nan([sentiment_score(r.text, lexicon) for r in first_round])

    ratios = []
    for author in sub.author_ids:
        ratio = corpus.author_profile(author, as_of).acceptance_ratio
        if ratio is not None:
            ratios.append(ratio)
    ar = _mean_or_nan(ratios)

    ap_gap = corpus.author_profile(sub.author_ids[0], as_of).mean_inter_submission_gap
    ap = float(ap_gap) if ap_gap is not None else float("nan")

    reviewers = corpus.assigned_reviewers(paper_id)
    rac_vals = []
    ta_vals = []
    for rid in reviewers:
        prof = corpus.reviewer_profile(rid, as_of)
        if prof.accept_ratio is not None:
            rac_vals.append(prof.accept_ratio)
        if prof.last_assignment_date is not None:
            ta_vals.append(float((as_of - prof.last_assignment_date).days))
    rac = _mean_or_nan(rac_vals)
    ta = _mean_or_nan(ta_vals)

    delays = []
    first_assign = {}
    for a in corpus.assignments.get(paper_id, []):
        if a.round == 1 and a.reviewer_id not in first_assign:
            first_assign[a.reviewer_id] = a.date
    for r in first_round:
        start = first_assign.get(r.reviewer_id)
        if start is not None:
            delays.append(float((r.date - start).days))
    dr = _mean_or_nan(delays)

    return np.array([rr, ts, rl, snt, ar, ap, rac, ta, dr])


def feature_vector(paper_id: str, corpus: Corpus, lexicon: Lexicon,
                   cache: Optional[SnapshotCache] = None) -> FeatureVector:
    values = np.concatenate([
        network_features(paper_id, corpus, cache),
        supporting_features(paper_id, corpus, lexicon),
    ])
    return FeatureVector(paper_id, values, np.isnan(values))


def citation_rank_targets(papers: list[tuple[str, int, int]]) -> list[TargetValue]:
    """Rank-based inverse-normal target, computed within publication year.

    ``papers`` holds (paper_id, publication_year, cumulative_citations).
    Within a year, papers get ascending mid-rank percentiles (ties averaged)
    mapped through the standard-normal inverse CDF; a singleton year is 0.
    """
    by_year: dict[int, list[tuple[str, int]]] = {}
    for pid, year, cites in papers:
        by_year.setdefault(year, []).append((pid, cites))

    out = []
    for year, group in sorted(by_year.items()):
        n = len(group)
        order = sorted(range(n), key=lambda k: group[k][1])
        # average 1-based ranks over tie groups
        ranks = [0.0] * n
        i = 0
        while i < n:
            j = i
            while j + 1 < n and group[order[j + 1]][1] == group[order[i]][1]:
                j += 1
            avg = (i + j) / 2.0 + 1.0
            for k in range(i, j + 1):
                ranks[order[k]] = avg
            i = j + 1
        for k, (pid, _) in enumerate(group):
            p = (ranks[k] - 0.5) / n
            z = 0.0 if n == 1 else _NORMAL.inv_cdf(p)
            out.append(TargetValue(pid, year, z))
    return out


@dataclass(frozen=True)
class AssembledMatrix:
    paper_ids: tuple[str, ...]
    X: np.ndarray  # n x 14, NaN where missing
    missing: np.ndarray  # bool, same shape
    y: np.ndarray
    years: tuple[int, ...]


def assemble_matrix(corpus: Corpus, window: tuple[int, int], lexicon: Lexicon,
                    cache: Optional[SnapshotCache] = None) -> AssembledMatrix:
    """Feature matrix over accepted papers published within ``window`` years.

    Rows are ordered by (submission date, paper_id).  Papers without a
    citation record are skipped (they have no target).
    """
    lo, hi = window
    if lo > hi:
        raise ValueError(f"empty window {window}")
    cache = cache or SnapshotCache(corpus)

    selected = []
    for pid in corpus.paper_ids():
        if corpus.outcome(pid) != "accept":
            continue
        year = corpus.publication_year(pid)
        cites = corpus.citations(pid)
        if year is None or cites is None or not lo <= year <= hi:
            continue
        selected.append((pid, year, cites))

    n = len(selected)
    X = np.full((n, len(FEATURE_NAMES)), np.nan)
    for i, (pid, _, _) in enumerate(selected):
        X[i] = feature_vector(pid, corpus, lexicon, cache).values

    targets = {t.paper_id: t.citation_rank
               for t in citation_rank_targets(selected)}
    y = np.array([targets[pid] for pid, _, _ in selected])
    return AssembledMatrix(
        paper_ids=tuple(pid for pid, _, _ in selected),
        X=X,
        missing=np.isnan(X),
        y=y,
        years=tuple(year for _, year, _ in selected),
    )


# -- CSV interchange --------------------------------------------------------

CSV_HEADER = "paper_id," + ",".join(FEATURE_NAMES) + ",target,year"


def write_matrix_csv(matrix: AssembledMatrix, path) -> None:
    """Write the matrix plus a parallel ``<path>.missing`` mask file."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(CSV_HEADER + "\n")
        for i, pid in enumerate(matrix.paper_ids):
            cells = ",".join(repr(float(v)) for v in matrix.X[i])
            fh.write(f"{pid},{cells},{float(matrix.y[i])!r},{matrix.years[i]}\n")
    with open(str(path) + ".missing", "w", encoding="utf-8") as fh:
        fh.write("paper_id," + ",".join(FEATURE_NAMES) + "\n")
        for i, pid in enumerate(matrix.paper_ids):
            cells = ",".join("1" if m else "0" for m in matrix.missing[i])
            fh.write(f"{pid},{cells}\n")


def read_matrix_csv(path) -> AssembledMatrix:
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != CSV_HEADER:
            raise ValueError(f"unexpected feature CSV header: {header!r}")
        ids, rows, ys, years = [], [], [], []
        for line in fh:
            parts = line.strip().split(",")
            ids.append(parts[0])
            rows.append([float(v) for v in parts[1:15]])
            ys.append(float(parts[15]))
            years.append(int(parts[16]))
    X = np.array(rows) if rows else np.zeros((0, len(FEATURE_NAMES)))
    return AssembledMatrix(tuple(ids), X, np.isnan(X), np.array(ys), tuple(years))
