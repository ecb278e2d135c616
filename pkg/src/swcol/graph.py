"""Undirected simple graphs, colouring checks and DIMACS ``col`` I/O."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, TextIO

import numpy as np

UNASSIGNED = -1


class GraphError(ValueError):
    """Raised on an illegal graph operation (self-loop, bad index, ...)."""


class DimacsError(ValueError):
    """Raised when a DIMACS ``col`` document cannot be parsed."""


class Graph:
    """Undirected simple graph on nodes ``0..n-1``.

    Adjacency is stored as one Python ``set`` per node, so membership tests
    are O(1). Graphs are mutated only by their generators; everything
    downstream treats them as read-only.
    """

    __slots__ = ("_adj", "_m")

    def __init__(self, n: int):
        if int(n) != n or n < 1:
            raise GraphError(f"node count must be a positive integer, got {n!r}")
        self._adj: list[set[int]] = [set() for _ in range(int(n))]
        self._m = 0

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        g = cls(n)
        for u, v in edges:
            g.add_edge(u, v)
        return g

    @property
    def n(self) -> int:
        return len(self._adj)

    @property
    def m(self) -> int:
        return self._m

    def _check_node(self, v: int) -> None:
        if not 0 <= v < len(self._adj):
            raise GraphError(f"node {v} out of range for graph with {self.n} nodes")

    def add_edge(self, u: int, v: int) -> bool:
        """Add the edge ``{u, v}``.

        Returns ``True`` if the edge was new and ``False`` if it was already
        present (a duplicate add is a no-op, not an error).
        """
        self._check_node(u)
        self._check_node(v)
        if u == v:
            raise GraphError(f"self-loop on node {u} is not allowed")
        if v in self._adj[u]:
            return False
        self._adj[u].add(v)
        self._adj[v].add(u)
        self._m += 1
        return True

    def remove_edge(self, u: int, v: int) -> None:
        if v not in self._adj[u]:
            raise GraphError(f"edge ({u}, {v}) not present")
        self._adj[u].discard(v)
        self._adj[v].discard(u)
        self._m -= 1

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def neighbours(self, v: int) -> set[int]:
        self._check_node(v)
        return self._adj[v]

    def degree(self, v: int) -> int:
        self._check_node(v)
        return len(self._adj[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self._adj]

    def edges(self) -> list[tuple[int, int]]:
        """All edges as ``(min, max)`` pairs in lexicographic order."""
        return [(u, v) for u in range(self.n) for v in sorted(self._adj[u]) if u < v]

    def mean_degree(self) -> Fraction:
        """Exact mean degree ``2M/n``."""
        return Fraction(2 * self._m, self.n)

    def copy(self) -> "Graph":
        g = Graph.__new__(Graph)
        g._adj = [set(a) for a in self._adj]
        g._m = self._m
        return g

    def is_connected(self) -> bool:
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for w in self._adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def to_csr(self) -> tuple[np.ndarray, np.ndarray]:
        """Compressed adjacency ``(indptr, indices)`` with sorted neighbour lists."""
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([len(a) for a in self._adj])
        indices = np.fromiter(
            (w for a in self._adj for w in sorted(a)), dtype=np.int64, count=int(indptr[-1])
        )
        return indptr, indices

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._adj == other._adj

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def new_graph(n: int) -> Graph:
    return Graph(n)


def is_valid_colouring(g: Graph, colouring: Sequence[int], k: int) -> bool:
    """True iff ``colouring`` is a proper ``k``-colouring of ``g``.

    Raises
    ------
    ValueError
        If the colouring has the wrong length, leaves a node unassigned or
        uses a colour outside ``0..k-1``.
    """
    if len(colouring) != g.n:
        raise ValueError(f"colouring has length {len(colouring)}, graph has {g.n} nodes")
    for v, c in enumerate(colouring):
        if c == UNASSIGNED:
            raise ValueError(f"node {v} is unassigned")
        if not 0 <= c < k:
            raise ValueError(f"node {v} has colour {c} outside 0..{k - 1}")
    return all(colouring[u] != colouring[v] for u, v in g.edges())


def write_dimacs(g: Graph, fh: TextIO, comment: str | None = None) -> None:
    if comment:
        for line in comment.splitlines():
            fh.write(f"c {line}\n")
    fh.write(f"p edge {g.n} {g.m}\n")
    for u, v in g.edges():
        fh.write(f"e {u + 1} {v + 1}\n")


def dumps_dimacs(g: Graph, comment: str | None = None) -> str:
    import io

    buf = io.StringIO()
    write_dimacs(g, buf, comment)
    return buf.getvalue()


def read_dimacs(fh: Iterable[str]) -> Graph:
    """Parse a DIMACS ``col`` document (``p edge N M`` plus ``e u v`` lines)."""
    g: Graph | None = None
    declared_m = 0
    for lineno, raw in enumerate(fh, 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if g is not None:
                raise DimacsError(f"line {lineno}: second problem line")
            if len(parts) != 4 or parts[1] not in ("edge", "col"):
                raise DimacsError(f"line {lineno}: expected 'p edge N M'")
            try:
                n, declared_m = int(parts[2]), int(parts[3])
                g = Graph(n)
            except (ValueError, GraphError) as exc:
                raise DimacsError(f"line {lineno}: {exc}") from None
        elif parts[0] == "e":
            if g is None:
                raise DimacsError(f"line {lineno}: edge before problem line")
            if len(parts) != 3:
                raise DimacsError(f"line {lineno}: expected 'e u v'")
            try:
                g.add_edge(int(parts[1]) - 1, int(parts[2]) - 1)
            except (ValueError, GraphError) as exc:
                raise DimacsError(f"line {lineno}: {exc}") from None
        else:
            raise DimacsError(f"line {lineno}: unknown record type {parts[0]!r}")
    if g is None:
        raise DimacsError("no problem line found")
    if g.m != declared_m:
        raise DimacsError(f"header declares {declared_m} edges, found {g.m} distinct edges")
    return g


def loads_dimacs(text: str) -> Graph:
    return read_dimacs(text.splitlines())
