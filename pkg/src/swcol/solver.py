"""Exact k-colourability by DSATUR-ordered backtracking, with search-node counting.

Search rules
------------
* Vertex order (Brelaz / DSATUR): the uncoloured vertex with the most
  distinct neighbour colours; ties go to the most uncoloured neighbours,
  then to the lowest index.
* Value order: ascending colour index, skipping colours already used by a
  neighbour. No other propagation.
* The first vertex is fixed to colour 0 unless ``fix_first_colour=False``.
* Cost: ``nodes_visited`` counts consistent (vertex, colour) assignments
  pushed on the search path. A connected bipartite graph therefore costs
  exactly ``n``.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

import numba
import numpy as np
from sklearn.base import BaseEstimator

from ._validation import check_graph, check_positive_int
from .graph import Graph, is_valid_colouring

DEFAULT_MAX_NODES = 10_000_000
BRUTE_FORCE_LIMIT = 3**16

_COLOURABLE, _UNCOLOURABLE, _EXHAUSTED = 0, 1, 2


class Status(str, enum.Enum):
    COLOURABLE = "colourable"
    UNCOLOURABLE = "uncolourable"
    BUDGET_EXHAUSTED = "exhausted"

    @property
    def exit_code(self) -> int:
        return {Status.COLOURABLE: 0, Status.UNCOLOURABLE: 2, Status.BUDGET_EXHAUSTED: 3}[self]

    def __str__(self) -> str:
        return self.value


_STATUS = {_COLOURABLE: Status.COLOURABLE, _UNCOLOURABLE: Status.UNCOLOURABLE, _EXHAUSTED: Status.BUDGET_EXHAUSTED}


@dataclass(frozen=True)
class SolveBudget:
    max_nodes: int | None = DEFAULT_MAX_NODES

    def __post_init__(self):
        if self.max_nodes is not None:
            check_positive_int(self.max_nodes, "max_nodes")


@dataclass
class SolveOutcome:
    status: Status
    nodes_visited: int
    witness: list[int] | None = None
    metadata: dict = field(default_factory=dict)

    @property
    def decided(self) -> bool:
        return self.status is not Status.BUDGET_EXHAUSTED


@numba.njit(cache=True)
def _select(n, colour, sat, udeg):
    best = -1
    for v in range(n):
        if colour[v] >= 0:
            continue
        if best < 0 or sat[v] > sat[best] or (sat[v] == sat[best] and udeg[v] > udeg[best]):
            best = v
    return best


@numba.njit(cache=True)
def _assign(v, c, colour, cnt, sat, udeg, indptr, indices):
    colour[v] = c
    for j in range(indptr[v], indptr[v + 1]):
        w = indices[j]
        if cnt[w, c] == 0:
            sat[w] += 1
        cnt[w, c] += 1
        udeg[w] -= 1


@numba.njit(cache=True)
def _unassign(v, colour, cnt, sat, udeg, indptr, indices):
    c = colour[v]
    colour[v] = -1
    for j in range(indptr[v], indptr[v + 1]):
        w = indices[j]
        cnt[w, c] -= 1
        if cnt[w, c] == 0:
            sat[w] -= 1
        udeg[w] += 1


@numba.njit(cache=True)
def _dsatur_search(indptr, indices, n, k, max_nodes, fix_first):
    colour = np.full(n, -1, np.int64)
    cnt = np.zeros((n, k), np.int32)
    sat = np.zeros(n, np.int64)
    udeg = np.empty(n, np.int64)
    for v in range(n):
        udeg[v] = indptr[v + 1] - indptr[v]
    order = np.empty(n, np.int64)  # vertex chosen at each depth
    nextc = np.empty(n, np.int64)  # next colour to try at each depth
    nodes = 0
    depth = 0
    order[0] = _select(n, colour, sat, udeg)
    nextc[0] = 0
    while True:
        v = order[depth]
        if colour[v] >= 0:
            _unassign(v, colour, cnt, sat, udeg, indptr, indices)
        limit = 1 if (fix_first and depth == 0) else k
        c = nextc[depth]
        while c < limit and cnt[v, c] > 0:
            c += 1
        if c >= limit:
            if depth == 0:
                return _UNCOLOURABLE, nodes, colour
            depth -= 1
            continue
        if nodes >= max_nodes:
            return _EXHAUSTED, nodes, colour
        nodes += 1
        _assign(v, c, colour, cnt, sat, udeg, indptr, indices)
        nextc[depth] = c + 1
        if depth == n - 1:
            return _COLOURABLE, nodes, colour
        depth += 1
        order[depth] = _select(n, colour, sat, udeg)
        nextc[depth] = 0


def solve(
    g: Graph,
    k: int = 3,
    budget: SolveBudget | None = None,
    fix_first_colour: bool = True,
) -> SolveOutcome:
    """Decide whether ``g`` admits a proper ``k``-colouring.

    Parameters
    ----------
    g : Graph
        Simple graph to colour.
    k : int
        Number of colours, at least 1.
    budget : SolveBudget, optional
        Cap on search nodes. ``SolveBudget(None)`` means unbounded; the
        default is ``DEFAULT_MAX_NODES``.
    fix_first_colour : bool
        Pin the first selected vertex to colour 0.

    Returns
    -------
    SolveOutcome
        ``BUDGET_EXHAUSTED`` is a status, not an exception. A ``COLOURABLE``
        outcome always carries a witness that has been re-validated.
    """
    check_graph(g)
    k = check_positive_int(k, "k")
    budget = budget if budget is not None else SolveBudget()
    cap = budget.max_nodes if budget.max_nodes is not None else np.iinfo(np.int64).max
    indptr, indices = g.to_csr()
    code, nodes, colour = _dsatur_search(indptr, indices, g.n, k, cap, fix_first_colour)
    status = _STATUS[int(code)]
    witness = None
    if status is Status.COLOURABLE:
        witness = colour.tolist()
        if not is_valid_colouring(g, witness, k):
            raise AssertionError("solver produced an invalid colouring")
    meta = {"k": k, "fix_first_colour": bool(fix_first_colour), "max_nodes": budget.max_nodes}
    return SolveOutcome(status, int(nodes), witness, meta)


def brute_force_colourable(g: Graph, k: int) -> bool:
    """Exhaustive check over all ``k**n`` assignments (test oracle)."""
    check_graph(g)
    k = check_positive_int(k, "k")
    if k**g.n > BRUTE_FORCE_LIMIT:
        raise ValueError(f"{k}**{g.n} assignments is too many to enumerate (limit {BRUTE_FORCE_LIMIT})")
    edges = g.edges()
    for assignment in itertools.product(range(k), repeat=g.n):
        if all(assignment[u] != assignment[v] for u, v in edges):
            return True
    return False


class DsaturColourer(BaseEstimator):
    """Estimator-style front end to :func:`solve`.

    ``fit(graph)`` runs the search and stores ``status_``, ``colouring_`` and
    ``nodes_visited_``; ``predict(graphs)`` returns one status per graph.
    """

    def __init__(self, k=3, max_nodes=DEFAULT_MAX_NODES, fix_first_colour=True):
        self.k = k
        self.max_nodes = max_nodes
        self.fix_first_colour = fix_first_colour

    def _solve(self, g):
        return solve(g, self.k, SolveBudget(self.max_nodes), self.fix_first_colour)

    def fit(self, g, y=None):
        out = self._solve(g)
        self.outcome_ = out
        self.status_ = out.status
        self.colouring_ = out.witness
        self.nodes_visited_ = out.nodes_visited
        return self

    def predict(self, graphs):
        return [self._solve(g).status for g in graphs]
