"""Edge-conserving small-world rewiring and the uniform G(N, M) baseline."""

from __future__ import annotations

from dataclasses import dataclass

from ._validation import check_probability
from .graph import Graph
from .rng import RandomSource


@dataclass(frozen=True)
class RewireParams:
    p: float
    seed: int = 0

    def __post_init__(self):
        check_probability(self.p)


@dataclass
class RewireResult:
    graph: Graph
    rewired: int  # edges actually moved
    skipped: int  # edges selected but left in place (no legal new endpoint)


def rewire(g: Graph, p: float, rng: RandomSource) -> RewireResult:
    """Rewire each edge of ``g`` independently with probability ``p``.

    Original edges are visited once each in lexicographic ``(min, max)``
    order; edges created during the pass are never revisited. For every
    selected edge ``(u, v)`` one endpoint is kept (each with probability 1/2)
    and the other is replaced by a node drawn uniformly from all nodes that
    are neither endpoint nor already adjacent to the kept one. Rejection
    sampling gives up after ``n`` draws and falls back to enumerating the
    legal candidates; only when none exist is the edge left unchanged and
    counted in ``skipped``. The edge count is always conserved.

    The input graph is not modified.
    """
    check_probability(p)
    n = g.n
    if n < 3:
        raise ValueError("rewiring needs at least 3 nodes")
    out = g.copy()
    if p == 0:
        return RewireResult(out, 0, 0)
    adj = out._adj
    rewired = skipped = 0
    for u, v in g.edges():
        if rng.random() >= p:
            continue
        if rng.random() < 0.5:
            keep, drop = u, v
        else:
            keep, drop = v, u
        nbrs = adj[keep]
        w = -1
        for _ in range(n):
            cand = rng.randbelow(n)
            if cand != keep and cand not in nbrs:
                w = cand
                break
        if w < 0:
            legal = [c for c in range(n) if c != keep and c not in nbrs]
            if not legal:
                skipped += 1
                continue
            w = legal[rng.randbelow(len(legal))]
        out.remove_edge(keep, drop)
        out.add_edge(keep, w)
        rewired += 1
    return RewireResult(out, rewired, skipped)


def random_graph(n: int, m: int, rng: RandomSource) -> Graph:
    """Uniform simple graph with exactly ``m`` edges on ``n`` nodes.

    The edge set is a uniform ``m``-subset of all unordered pairs, drawn with
    Floyd's subset-sampling algorithm.
    """
    total = n * (n - 1) // 2
    if m < 0 or m > total:
        raise ValueError(f"cannot place {m} edges on {n} nodes (max {total})")
    chosen: set[int] = set()
    for j in range(total - m, total):
        t = rng.randbelow(j + 1)
        chosen.add(j if t in chosen else t)
    g = Graph(n)
    for r in sorted(chosen):
        g.add_edge(*_pair_from_rank(r, n))
    return g


def _pair_from_rank(r: int, n: int) -> tuple[int, int]:
    # ranks enumerate (0,1), (0,2), ..., (0,n-1), (1,2), ...
    u = 0
    row = n - 1
    while r >= row:
        r -= row
        u += 1
        row -= 1
    return u, u + 1 + r
