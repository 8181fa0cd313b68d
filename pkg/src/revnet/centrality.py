"""Structural node measures on a reviewer-reviewer graph.

Degree, betweenness (Brandes, endpoints excluded, normalized by
(n-1)(n-2)/2), a disconnected-safe closeness variant, the local clustering
coefficient, and PageRank by power iteration.  All measures are exact and
deterministic; node order follows the graph's sorted node tuple.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .review_graph import ReviewGraph

PAGERANK_DAMPING = 0.85
PAGERANK_TOL = 1e-9
PAGERANK_MAX_ITER = 200

MEASURES = ("degree", "betweenness", "closeness", "clustering", "pagerank")


@dataclass(frozen=True)
class CentralityTable:
    nodes: tuple[str, ...]
    degree: np.ndarray
    betweenness: np.ndarray
    closeness: np.ndarray
    clustering: np.ndarray
    pagerank: np.ndarray
    pagerank_converged: bool

    def row(self, i: int) -> dict[str, float]:
        return {
            "degree": float(self.degree[i]),
            "betweenness": float(self.betweenness[i]),
            "closeness": float(self.closeness[i]),
            "clustering": float(self.clustering[i]),
            "pagerank": float(self.pagerank[i]),
        }

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("node_id,degree,betweenness,closeness,clustering,pagerank\n")
            for i, node in enumerate(self.nodes):
                fh.write(f"{node},{int(self.degree[i])},"
                         f"{float(self.betweenness[i])!r},"
                         f"{float(self.closeness[i])!r},"
                         f"{float(self.clustering[i])!r},"
                         f"{float(self.pagerank[i])!r}\n")


def degree(graph: ReviewGraph) -> np.ndarray:
    return np.array([len(a) for a in graph.adj], dtype=np.int64)


def _brandes_pass(graph: ReviewGraph):
    """Single sweep computing betweenness and per-node distance sums.

    Returns (raw betweenness with each pair counted twice, distance sums,
    reachable-component sizes).
    """
    n = graph.n
    adj = graph.adj
    bc = [0.0] * n
    dist_sum = [0] * n
    comp_size = [1] * n

    for s in range(n):
        sigma = [0] * n
        dist = [-1] * n
        preds: list[list[int]] = [[] for _ in range(n)]
        sigma[s] = 1
        dist[s] = 0
        stack: list[int] = []
        queue = deque([s])
        while queue:
            v = queue.popleft()
            stack.append(v)
            dv = dist[v]
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dv + 1
                    queue.append(w)
                if dist[w] == dv + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = [0.0] * n
        total = 0
        reach = 0
        for w in reversed(stack):
            coeff = (1.0 + delta[w]) / sigma[w]
            for v in preds[w]:
                delta[v] += sigma[v] * coeff
            if w != s:
                bc[w] += delta[w]
                total += dist[w]
                reach += 1
        dist_sum[s] = total
        comp_size[s] = reach + 1

    return bc, dist_sum, comp_size


def betweenness(graph: ReviewGraph) -> np.ndarray:
    bc, _, _ = _brandes_pass(graph)
    return _normalize_betweenness(np.array(bc), graph.n)


def _normalize_betweenness(raw: np.ndarray, n: int) -> np.ndarray:
    if n < 3:
        return np.zeros(n)
    # halve for the undirected double count, then scale by (n-1)(n-2)/2
    return raw / ((n - 1) * (n - 2))


def closeness(graph: ReviewGraph) -> np.ndarray:
    _, dist_sum, comp_size = _brandes_pass(graph)
    return _closeness_from_sums(dist_sum, comp_size, graph.n)


def _closeness_from_sums(dist_sum, comp_size, n: int) -> np.ndarray:
    out = np.zeros(n)
    for v in range(n):
        r = comp_size[v]
        if r > 1 and dist_sum[v] > 0:
            out[v] = ((r - 1) / (n - 1)) * ((r - 1) / dist_sum[v])
    return out


def clustering(graph: ReviewGraph) -> np.ndarray:
    out = np.zeros(graph.n)
    neighbor_sets = [set(a) for a in graph.adj]
    for v in range(graph.n):
        neigh = graph.adj[v]
        k = len(neigh)
        if k < 2:
            continue
        links = 0
        for i, u in enumerate(neigh):
            su = neighbor_sets[u]
            for w in neigh[i + 1:]:
                if w in su:
                    links += 1
        out[v] = 2.0 * links / (k * (k - 1))
    return out


def pagerank(graph: ReviewGraph, damping: float = PAGERANK_DAMPING,
             tol: float = PAGERANK_TOL,
             max_iter: int = PAGERANK_MAX_ITER) -> tuple[np.ndarray, bool]:
    """Power iteration on the undirected graph, edges treated as bidirectional.

    Degree-0 nodes are dangling and redistribute their mass uniformly.
    Returns the score vector and a convergence flag (L1 change < tol).
    """
    if not 0.0 < damping < 1.0:
        raise ValueError("damping must lie in (0, 1)")
    n = graph.n
    if n == 0:
        return np.zeros(0), True

    degrees = np.array([len(a) for a in graph.adj], dtype=np.float64)
    src = np.fromiter((u for u in range(n) for _ in graph.adj[u]), dtype=np.int64,
                      count=int(degrees.sum()))
    dst = np.fromiter((v for u in range(n) for v in graph.adj[u]), dtype=np.int64,
                      count=int(degrees.sum()))
    dangling = degrees == 0
    inv_deg = np.where(dangling, 0.0, 1.0 / np.maximum(degrees, 1.0))

    pr = np.full(n, 1.0 / n)
    converged = False
    for _ in range(max_iter):
        contrib = pr * inv_deg
        nxt = np.zeros(n)
        np.add.at(nxt, dst, contrib[src])
        dangling_mass = pr[dangling].sum()
        nxt = (1.0 - damping) / n + damping * (nxt + dangling_mass / n)
        if np.abs(nxt - pr).sum() < tol:
            pr = nxt
            converged = True
            break
        pr = nxt
    return pr, converged


def compute_table(graph: ReviewGraph, damping: float = PAGERANK_DAMPING,
                  tol: float = PAGERANK_TOL,
                  max_iter: int = PAGERANK_MAX_ITER) -> CentralityTable:
    """All five measures in one pass (shortest-path work is shared)."""
    bc_raw, dist_sum, comp_size = _brandes_pass(graph)
    pr, ok = pagerank(graph, damping, tol, max_iter)
    return CentralityTable(
        nodes=graph.nodes,
        degree=degree(graph),
        betweenness=_normalize_betweenness(np.array(bc_raw), graph.n),
        closeness=_closeness_from_sums(dist_sum, comp_size, graph.n),
        clustering=clustering(graph),
        pagerank=pr,
        pagerank_converged=ok,
    )
