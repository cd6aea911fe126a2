"""Resolutions of a closed braid diagram and the gradings of generators.

Segments are the vertical arcs ``(position, gap)`` with ``1 <= position <= n``
and ``0 <= gap <= c``; segment ``(j, c)`` is joined to ``(j, 0)`` by the
closure arc of strand position ``j``.  Internally a segment is the integer
``gap * n + position - 1``.  The cut ray crosses each closure arc once, so a
circle is non-trivial exactly when it carries an odd number of closure arcs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import kernels
from .braid import BasepointAddress, BraidWord

MAX_CROSSINGS = 62


def popcount(x: int) -> int:
    return bin(x).count("1")


@dataclass(frozen=True)
class Resolution:
    bits: int

    @property
    def weight(self) -> int:
        return popcount(self.bits)


@dataclass(frozen=True)
class CircleSet:
    circle_count: int
    circle_of_segment: tuple[int, ...]
    nontrivial: tuple[bool, ...]
    n: int

    def circle_at(self, position: int, gap: int) -> int:
        return self.circle_of_segment[gap * self.n + position - 1]

    @property
    def nontrivial_mask(self) -> int:
        return sum(1 << i for i, t in enumerate(self.nontrivial) if t)


@dataclass(frozen=True)
class Generator:
    """A resolution with a labelling of its circles; bit ``i`` of ``labels``
    set means circle ``i`` carries v_+."""

    res: int
    labels: int


class ClosedBraid:
    """Diagram data for the closure of a braid word, with per-resolution
    circle data computed on demand by the circle kernel."""

    def __init__(self, b: BraidWord):
        if b.c > MAX_CROSSINGS:
            raise ValueError(f"at most {MAX_CROSSINGS} crossings supported, got {b.c}")
        self.braid = b
        self.n = b.n
        self.c = b.c
        self.n_plus = b.n_plus
        self.n_minus = b.n_minus
        self.nseg = b.n * (b.c + 1)
        self.letters = np.asarray(b.letters, dtype=np.int64)
        self._cache: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}

    @cached_property
    def oriented(self) -> int:
        return sum(1 << i for i, g in enumerate(self.braid.letters) if g < 0)

    def segment(self, p: BasepointAddress) -> int:
        p.check(self.braid)
        return p.gap * self.n + p.position - 1

    def circle_data(self, masks: np.ndarray):
        """``(circ, ncirc, nontriv)`` rows for each mask, memoised per mask."""
        masks = np.asarray(masks, dtype=np.int64)
        missing = np.array(
            sorted({int(m) for m in masks} - self._cache.keys()), dtype=np.int64
        )
        if missing.size:
            circ, ncirc, nontriv = kernels.circle_labels(self.letters, self.n, missing)
            for row, m in enumerate(missing.tolist()):
                self._cache[m] = (circ[row], int(ncirc[row]), nontriv[row])
        R = masks.shape[0]
        circ = np.empty((R, self.nseg), dtype=np.int32)
        ncirc = np.empty(R, dtype=np.int64)
        nontriv = np.empty((R, self.nseg), dtype=np.uint8)
        for row, m in enumerate(masks.tolist()):
            circ[row], ncirc[row], nontriv[row] = self._cache[m]
        return circ, ncirc, nontriv

    def circles(self, res: int) -> CircleSet:
        circ, ncirc, nontriv = self.circle_data(np.array([res]))
        m = int(ncirc[0])
        return CircleSet(
            circle_count=m,
            circle_of_segment=tuple(int(x) for x in circ[0]),
            nontrivial=tuple(bool(x) for x in nontriv[0, :m]),
            n=self.n,
        )

    def gradings(self, g: Generator) -> tuple[int, int, int]:
        cs = self.circles(g.res)
        if g.labels >> cs.circle_count:
            raise ValueError("labelling has bits beyond the circle count")
        w = popcount(g.res)
        plus = popcount(g.labels)
        h = w - self.n_minus
        q = (2 * plus - cs.circle_count) + w + self.n_plus - 2 * self.n_minus
        nt = cs.nontrivial_mask
        k = 2 * popcount(g.labels & nt) - popcount(nt)
        return h, q, k


def oriented_resolution(b: BraidWord) -> Resolution:
    return Resolution(ClosedBraid(b).oriented)


def circles(b: BraidWord, r: Resolution | int) -> CircleSet:
    bits = r.bits if isinstance(r, Resolution) else int(r)
    if not 0 <= bits < (1 << b.c):
        raise ValueError(f"resolution {bits} out of range for {b.c} crossings")
    return ClosedBraid(b).circles(bits)


def gradings(b: BraidWord, g: Generator) -> tuple[int, int, int]:
    """``(h, q, k)`` of a canonical generator."""
    return ClosedBraid(b).gradings(g)
