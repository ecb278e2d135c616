"""Periodic starting lattices: square, triangular and two simple-cubic variants.

Coordinates map to node indices row-major with x fastest::

    index = x + L*y            (2-D families)
    index = x + L*y + L*L*z    (3-D families)
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

from .graph import Graph


class Family(str, enum.Enum):
    SQUARE = "square"
    TRIANGULAR = "triangular"
    CUBIC6 = "cubic6"
    CUBIC5 = "cubic5"

    @property
    def dim(self) -> int:
        return 2 if self in (Family.SQUARE, Family.TRIANGULAR) else 3

    @property
    def gamma(self) -> int:
        return _GAMMA[self]

    def __str__(self) -> str:
        return self.value


_GAMMA = {Family.SQUARE: 4, Family.TRIANGULAR: 6, Family.CUBIC6: 6, Family.CUBIC5: 5}


class LatticeError(ValueError):
    """Invalid lattice specification; ``constraint`` names the violated rule."""

    def __init__(self, message: str, constraint: str):
        super().__init__(message)
        self.constraint = constraint


@dataclass(frozen=True, order=True)
class LatticeSpec:
    family: Family
    L: int

    def __post_init__(self):
        try:
            fam = Family(self.family)
        except ValueError:
            raise LatticeError(
                f"unknown lattice family {self.family!r}; expected one of "
                + ", ".join(f.value for f in Family),
                "family",
            ) from None
        object.__setattr__(self, "family", fam)
        if isinstance(self.L, bool) or int(self.L) != self.L:
            raise LatticeError(f"L must be an integer, got {self.L!r}", "L integer")
        object.__setattr__(self, "L", int(self.L))
        _validate(fam, self.L)

    @classmethod
    def parse(cls, text: str) -> "LatticeSpec":
        """Parse ``"family:L"``, e.g. ``"cubic5:4"``."""
        try:
            fam, size = text.strip().split(":")
            return cls(Family(fam.strip().lower()), int(size))
        except LatticeError:
            raise
        except ValueError:
            raise LatticeError(f"cannot parse lattice spec {text!r}; expected family:L", "syntax") from None

    @property
    def N(self) -> int:
        return self.L**self.family.dim

    @property
    def gamma(self) -> int:
        return self.family.gamma

    @property
    def M(self) -> int:
        return self.gamma * self.N // 2

    def __str__(self) -> str:
        return f"{self.family.value}:{self.L}"


def _validate(fam: Family, L: int) -> None:
    if L < 3:
        raise LatticeError(f"{fam.value} lattice needs L >= 3 (periodic wrap at L={L} creates duplicate edges)", "L >= 3")
    if fam is Family.TRIANGULAR and L % 3:
        raise LatticeError(f"triangular lattice needs L divisible by 3, got L={L}", "L % 3 == 0")
    if fam is Family.CUBIC5:
        if L < 4:
            raise LatticeError(f"cubic5 lattice needs L >= 4, got L={L}", "L >= 4")
        if L % 2:
            raise LatticeError(f"cubic5 lattice needs even L for the chess-board deletion, got L={L}", "L even")


class CoordinateMap:
    """Bijection between lattice coordinates and node indices."""

    def __init__(self, spec: LatticeSpec):
        self.L = spec.L
        self.dim = spec.family.dim

    def index(self, coord: tuple[int, ...]) -> int:
        if len(coord) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {coord!r}")
        idx = 0
        for axis in reversed(coord):
            idx = idx * self.L + (axis % self.L)
        return idx

    def coord(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.L**self.dim:
            raise ValueError(f"index {index} out of range")
        out = []
        for _ in range(self.dim):
            index, r = divmod(index, self.L)
            out.append(r)
        return tuple(out)

    def __len__(self) -> int:
        return self.L**self.dim

    def __iter__(self):
        for idx in range(len(self)):
            yield self.coord(idx)


def coordinate_map(spec: LatticeSpec) -> CoordinateMap:
    return CoordinateMap(spec)


def _offsets(fam: Family) -> list[tuple[int, ...]]:
    # one representative per neighbour pair; the reverse direction comes from wrap
    if fam is Family.SQUARE:
        return [(1, 0), (0, 1)]
    if fam is Family.TRIANGULAR:
        return [(1, 0), (0, 1), (1, 1)]
    return [(1, 0, 0), (0, 1, 0), (0, 0, 1)]


def generate(spec: LatticeSpec) -> Graph:
    """Build the periodic lattice graph for ``spec``.

    Every node has degree exactly ``spec.gamma``. For ``cubic5`` the vertical
    edge ``(x,y,z)-(x,y,z+1)`` is kept only when ``x+y+z`` is odd, so each
    node loses exactly one of its two vertical bonds.
    """
    cmap = CoordinateMap(spec)
    g = Graph(spec.N)
    fam = spec.family
    for coord in itertools.product(range(spec.L), repeat=fam.dim):
        coord = coord[::-1]  # product varies the last slot fastest; keep x fastest
        u = cmap.index(coord)
        for off in _offsets(fam):
            if fam is Family.CUBIC5 and off == (0, 0, 1) and sum(coord) % 2 == 0:
                continue
            v = cmap.index(tuple(c + o for c, o in zip(coord, off)))
            if not g.add_edge(u, v):
                raise AssertionError(f"duplicate edge {u}-{v} while building {spec}")
    degs = g.degrees()
    if min(degs) != spec.gamma or max(degs) != spec.gamma:
        raise AssertionError(f"{spec}: degrees span {min(degs)}..{max(degs)}, expected {spec.gamma}")
    if not g.is_connected():
        raise AssertionError(f"{spec}: generated lattice is disconnected")
    return g


def neel_colouring(spec: LatticeSpec) -> list[int] | None:
    """Closed-form 3-colouring of the unrewired lattice, where one is known.

    Square and cubic lattices with even L (and cubic5, always even) use the
    two-colour checkerboard; triangular uses ``(x + y) mod 3``; cubic6 with
    ``L % 3 == 0`` uses ``(x + y + z) mod 3``. Returns ``None`` otherwise
    (odd L not divisible by 3), where a colouring exists but has no simple
    closed form.
    """
    cmap = CoordinateMap(spec)
    fam, L = spec.family, spec.L
    if fam is Family.TRIANGULAR or (fam is Family.CUBIC6 and L % 3 == 0 and L % 2):
        return [sum(c) % 3 for c in cmap]
    if L % 2 == 0 and fam is not Family.TRIANGULAR:
        return [sum(c) % 2 for c in cmap]
    if L % 3 == 0:
        return [sum(c) % 3 for c in cmap]
    return None
