"""Shared test fixtures and independent oracles.

The oracles deliberately use different algorithms than the package (dense
Floyd-Warshall distances, explicit path-count dynamic programming, a direct
linear solve for PageRank) so that agreement is meaningful.
"""

from __future__ import annotations

import datetime as dt
import math
import random

import numpy as np

from revnet.corpus import (Assignment, CitationRecord, Decision, Report,
                           Submission)
from revnet.review_graph import ReviewGraph

FAR_FUTURE = dt.date(2100, 1, 1)


# -- graph construction ------------------------------------------------------


def graph_from_edges(n: int, edges, names=None) -> ReviewGraph:
    names = tuple(names) if names else tuple(f"r{i:03d}" for i in range(n))
    sets = [set() for _ in range(n)]
    for u, v in edges:
        if u != v:
            sets[u].add(v)
            sets[v].add(u)
    adj = tuple(tuple(sorted(s)) for s in sets)
    return ReviewGraph(FAR_FUTURE, names, adj)


def random_graph(rng: random.Random, n: int, p: float) -> ReviewGraph:
    edges = [(u, v) for u in range(n) for v in range(u + 1, n)
             if rng.random() < p]
    return graph_from_edges(n, edges)


def adjacency_matrix(graph: ReviewGraph) -> np.ndarray:
    A = np.zeros((graph.n, graph.n))
    for u in range(graph.n):
        for v in graph.adj[u]:
            A[u, v] = 1.0
    return A


# -- shortest-path oracles ---------------------------------------------------


def floyd_warshall(graph: ReviewGraph) -> np.ndarray:
    n = graph.n
    D = np.full((n, n), math.inf)
    np.fill_diagonal(D, 0.0)
    for u in range(n):
        for v in graph.adj[u]:
            D[u, v] = 1.0
    for k in range(n):
        D = np.minimum(D, D[:, k][:, None] + D[k][None, :])
    return D


def _path_counts(graph: ReviewGraph, D: np.ndarray, s: int) -> np.ndarray:
    """Number of shortest paths from s to every node, by distance DP."""
    n = graph.n
    N = np.zeros(n)
    N[s] = 1.0
    order = sorted((v for v in range(n) if math.isfinite(D[s, v])),
                   key=lambda v: D[s, v])
    for w in order:
        if w == s:
            continue
        N[w] = sum(N[u] for u in graph.adj[w] if D[s, u] == D[s, w] - 1)
    return N


def oracle_betweenness(graph: ReviewGraph) -> np.ndarray:
    n = graph.n
    if n < 3:
        return np.zeros(n)
    D = floyd_warshall(graph)
    counts = [_path_counts(graph, D, s) for s in range(n)]
    bc = np.zeros(n)
    for s in range(n):
        for t in range(s + 1, n):
            if not math.isfinite(D[s, t]) or counts[s][t] == 0:
                continue
            for v in range(n):
                if v in (s, t):
                    continue
                if D[s, v] + D[v, t] == D[s, t]:
                    bc[v] += counts[s][v] * counts[t][v] / counts[s][t]
    return bc / ((n - 1) * (n - 2) / 2.0)


def oracle_closeness(graph: ReviewGraph) -> np.ndarray:
    n = graph.n
    D = floyd_warshall(graph)
    out = np.zeros(n)
    for v in range(n):
        finite = [D[v, u] for u in range(n) if math.isfinite(D[v, u])]
        r = len(finite)
        total = sum(finite)
        if r > 1 and total > 0:
            out[v] = ((r - 1) / (n - 1)) * ((r - 1) / total)
    return out


def oracle_clustering(graph: ReviewGraph) -> np.ndarray:
    A = adjacency_matrix(graph)
    triangles = np.diag(A @ A @ A) / 2.0
    k = A.sum(axis=1)
    out = np.zeros(graph.n)
    mask = k >= 2
    out[mask] = 2.0 * triangles[mask] / (k[mask] * (k[mask] - 1))
    return out


def oracle_pagerank(graph: ReviewGraph, damping: float = 0.85) -> np.ndarray:
    """Exact fixed point by linear solve (dangling mass spread uniformly)."""
    n = graph.n
    if n == 0:
        return np.zeros(0)
    A = adjacency_matrix(graph)
    deg = A.sum(axis=0)
    P = np.zeros((n, n))
    for u in range(n):
        if deg[u] == 0:
            P[:, u] = 1.0 / n
        else:
            P[:, u] = A[:, u] / deg[u]
    return np.linalg.solve(np.eye(n) - damping * P,
                           np.full(n, (1.0 - damping) / n))


# -- corpus builders ---------------------------------------------------------


def minimal_paper(pid: str, sub_date: dt.date, authors=("a1",),
                  editor="e1", reviewer="r1", outcome="accept",
                  citations=None, as_of_year=2015):
    """Submission -> assignment -> report -> decision (-> citation) events."""
    events = [
        Submission(pid, sub_date, tuple(authors), f"paper {pid}"),
        Assignment(pid, sub_date + dt.timedelta(days=5), editor, reviewer, 1),
        Report(pid, sub_date + dt.timedelta(days=40), reviewer, 1,
               "fine work", "accept" if outcome == "accept" else "reject"),
        Decision(pid, sub_date + dt.timedelta(days=45), outcome, 1),
    ]
    if citations is not None:
        events.append(CitationRecord(pid, sub_date + dt.timedelta(days=400),
                                     citations, as_of_year))
    return events


def random_assignment_events(rng: random.Random, n_papers: int,
                             n_editors: int, n_reviewers: int):
    """Valid submission+assignment logs with random dates for projection tests."""
    events = []
    base = dt.date(2010, 1, 1)
    for i in range(n_papers):
        pid = f"p{i:03d}"
        sub = base + dt.timedelta(days=rng.randrange(0, 700))
        events.append(Submission(pid, sub, (f"a{rng.randrange(40):02d}",),
                                 f"paper {pid}"))
        editor = f"e{rng.randrange(n_editors):02d}"
        for _ in range(rng.randrange(1, 3)):
            rid = f"r{rng.randrange(n_reviewers):02d}"
            events.append(Assignment(pid, sub + dt.timedelta(days=rng.randrange(1, 30)),
                                     editor, rid, 1))
    return events


def brute_projection_edges(snap):
    """Edge set from the direct 'shares >= 1 editor' predicate."""
    reviewers = sorted(snap.reviewer_ids)
    edges = set()
    for i, a in enumerate(reviewers):
        for b in reviewers[i + 1:]:
            for e in snap.editor_ids:
                if (e, a) in snap.assignments and (e, b) in snap.assignments:
                    edges.add((a, b))
                    break
    return edges


def spearman(x, y) -> float:
    """Spearman rank correlation with average ranks for ties."""
    def ranks(v):
        v = np.asarray(v, dtype=np.float64)
        order = np.argsort(v, kind="stable")
        r = np.empty(len(v))
        i = 0
        while i < len(v):
            j = i
            while j + 1 < len(v) and v[order[j + 1]] == v[order[i]]:
                j += 1
            r[order[i:j + 1]] = (i + j) / 2.0 + 1.0
            i = j + 1
        return r

    rx, ry = ranks(x), ranks(y)
    rx -= rx.mean()
    ry -= ry.mean()
    denom = math.sqrt(float((rx ** 2).sum() * (ry ** 2).sum()))
    return float((rx * ry).sum() / denom) if denom else 0.0
