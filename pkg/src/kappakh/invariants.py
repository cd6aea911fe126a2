"""The transverse element, kappa and its reduced variants, annular homology
dimensions, spectral sequence pages, and the decision procedures built on
kappa."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .braid import BasepointAddress, BraidWord, mirror
from .complex import GradedSlice, build_slice, check_variant, closed, differential, slice_q_values
from .diagram import Generator, gradings
from .f2linalg import ChainF2, Eliminator, SparseMatrixF2, rank, rank_of_span_union, solve

INFINITY = math.inf


def psi(b: BraidWord, variant: str = "unreduced", basepoint: BasepointAddress | None = None) -> Generator:
    """All-v_- labelling of the oriented resolution; in the quotient flavour the
    basepoint circle carries v_+ instead."""
    check_variant(b, variant, basepoint)
    cb = closed(b)
    if variant != "reduced_quot":
        return Generator(cb.oriented, 0)
    pcirc = cb.circles(cb.oriented).circle_of_segment[cb.segment(basepoint)]
    return Generator(cb.oriented, 1 << pcirc)


def psi_slice(b: BraidWord, variant: str = "unreduced", basepoint: BasepointAddress | None = None,
              k_max: float = math.inf) -> tuple[GradedSlice, ChainF2]:
    """The slice holding psi (h = 0, q = q(psi)) and psi as a chain in it."""
    g = psi(b, variant, basepoint)
    h, q, _ = gradings(b, g)
    s = build_slice(b, variant, h, q, k_max, basepoint)
    return s, s.chain([g])


@dataclass
class KappaResult:
    value: float
    n: int
    variant: str = "unreduced"
    basepoint: BasepointAddress | None = None
    witness: ChainF2 | None = None
    witness_k: int | None = None
    source: GradedSlice | None = field(default=None, repr=False)

    @property
    def finite(self) -> bool:
        return self.value != INFINITY

    def witness_generators(self) -> list[Generator]:
        if self.witness is None:
            return []
        basis = self.source.basis
        return [basis[i] for i in self.witness.support]


def kappa(b: BraidWord, variant: str = "unreduced", basepoint: BasepointAddress | None = None) -> KappaResult:
    """``n + min{i : psi bounds in F_i}``, or infinity.

    The source slice (h = -1, q = q(psi)) is sorted by k and fed to one
    eliminator level by level, so the whole search costs one elimination.
    """
    target, rhs = psi_slice(b, variant, basepoint)
    src = build_slice(b, variant, target.h - 1, target.q, math.inf, basepoint)
    D = differential(b, src, target).matrix
    order = np.argsort(src.k, kind="stable")
    elim = Eliminator(len(target), track=True, capacity=max(len(src), 1))
    n = b.n
    for level in range(-n, n + 1, 2):
        block = order[src.k[order] == level]
        if block.size:
            elim.append(D.select_columns(block))
        x = elim.solve(rhs)
        if x is not None:
            witness = ChainF2(tuple(sorted(int(order[j]) for j in x.support)))
            assert D.apply(witness) == rhs
            wk = src.k_of(witness)
            assert wk == level
            return KappaResult(n + level, n, variant, basepoint, witness, wk, src)
    return KappaResult(INFINITY, n, variant, basepoint, source=src)


def psi_bounds_at(b: BraidWord, level: int, variant: str = "unreduced",
                  basepoint: BasepointAddress | None = None) -> bool:
    """Whether psi is a boundary of something in filtration level ``level``.

    Builds only the truncated slices; no incremental state is shared with
    :func:`kappa`.
    """
    target, rhs = psi_slice(b, variant, basepoint, k_max=level)
    src = build_slice(b, variant, target.h - 1, target.q, level, basepoint)
    D = differential(b, src, target).matrix
    return solve(D, rhs) is not None


def kappa_is_two(b: BraidWord) -> bool:
    return psi_bounds_at(b, -b.n + 2)


def word_problem(b: BraidWord) -> str:
    """``"trivial"`` iff neither the braid nor its mirror has kappa = 2."""
    if kappa_is_two(b) or kappa_is_two(mirror(b)):
        return "nontrivial"
    return "trivial"


def certify_right_veering(b: BraidWord) -> str:
    return "unknown" if kappa_is_two(b) else "right_veering"


def negative_destab_obstruction(b: BraidWord) -> str:
    return "unknown" if kappa_is_two(b) else "obstructed"


def explicit_witness(b: BraidWord, crossing: int) -> Generator:
    """All-v_- labelling of the oriented resolution with negative crossing
    ``crossing`` (0-based) switched to its 0-smoothing."""
    if b.letters[crossing] > 0:
        raise ValueError(f"crossing {crossing} is positive")
    return Generator(closed(b).oriented & ~(1 << crossing), 0)


def boundary(b: BraidWord, g: Generator, variant: str = "unreduced",
             basepoint: BasepointAddress | None = None) -> list[Generator]:
    """d of a single generator, as a list of generators."""
    h, q, _ = gradings(b, g)
    src = build_slice(b, variant, h, q, math.inf, basepoint)
    i = src.index(g)
    if i is None:
        raise KeyError(f"{g} is not a generator of the {variant} complex")
    dm = differential(b, src)
    basis = dm.target.basis
    return [basis[r] for r in dm.matrix.column(i)]


def skh_dims(b: BraidWord, variant: str = "unreduced",
             basepoint: BasepointAddress | None = None) -> dict[tuple[int, int, int], int]:
    """Dimensions of the homology of the associated graded complex (the
    k-preserving part of d), keyed by (h, q, k); zero entries omitted."""
    check_variant(b, variant, basepoint)
    table: dict[tuple[int, int, int], int] = {}
    cb = closed(b)
    for h in range(-cb.n_minus, cb.n_plus + 1):
        for q in slice_q_values(b, h):
            here = build_slice(b, variant, h, q, math.inf, basepoint)
            if not len(here):
                continue
            out = _graded_part(differential(b, here).matrix, here, None)
            below = build_slice(b, variant, h - 1, q, math.inf, basepoint)
            into = _graded_part(differential(b, below, here).matrix, below, here)
            for k in np.unique(here.k).tolist():
                cols = np.flatnonzero(here.k == k)
                rank_out = rank(out.select_columns(cols))
                rank_in = rank(into.select_rows(cols)) if len(below) else 0
                dim = cols.size - rank_out - rank_in
                if dim:
                    table[(h, q, k)] = dim
    return table


def _graded_part(D: SparseMatrixF2, src: GradedSlice, tgt: GradedSlice | None) -> SparseMatrixF2:
    if tgt is None:
        tgt = build_slice(src.braid, src.variant, src.h + 1, src.q, math.inf, src.basepoint)
    r, c = D.coo()
    keep = src.k[c] == tgt.k[r] if r.size else np.zeros(0, dtype=bool)
    return SparseMatrixF2.from_coo(D.n_rows, D.n_cols, r[keep], c[keep])


def _coordinate_span(idx: np.ndarray, n_rows: int) -> SparseMatrixF2:
    return SparseMatrixF2.from_coo(n_rows, idx.size, idx, np.arange(idx.size))


def ss_page_dim(b: BraidWord, r: int, h: int, k: int, q: int | None = None,
                variant: str = "unreduced", basepoint: BasepointAddress | None = None) -> int:
    """dim E^r_{h,k} of the spectral sequence of the k-filtration at fixed q.

    With Z = {x in F_k C_h : dx in F_{k-r}}, the page is
    Z / (Z cap F_{k-1} + d(F_{k+r-1} C_{h-1}) cap F_k); every term is a rank.
    ``q`` defaults to the self-linking number.
    """
    if r < 1:
        raise ValueError(f"page must be at least 1, got {r}")
    here = build_slice(b, variant, h, q, math.inf, basepoint)
    if not len(here):
        return 0
    up = differential(b, here)
    below = build_slice(b, variant, h - 1, here.q, math.inf, basepoint)
    into = differential(b, below, here).matrix
    high_rows = np.flatnonzero(up.target.k > k - r)

    def cycles_mod(level: int) -> int:
        cols = np.flatnonzero(here.k <= level)
        return cols.size - rank(up.matrix.select_columns(cols).select_rows(high_rows))

    A = into.select_columns(np.flatnonzero(below.k <= k + r - 1))
    rank_a = rank(A)

    def image_meet(level: int) -> int:
        coords = np.flatnonzero(here.k <= level)
        return rank_a + coords.size - rank_of_span_union(A, _coordinate_span(coords, len(here)))

    # W + D with W = Z cap F_{k-1}; D holds cycles, so W cap D = D cap F_{k-1}
    dim_w = cycles_mod(k - 1)
    dim_d = image_meet(k)
    return cycles_mod(k) - (dim_w + dim_d - image_meet(k - 1))


def psi_death_page(b: BraidWord) -> float:
    """Smallest r such that psi is in d(F_{-n+r-1}); infinity if never."""
    n = b.n
    for r in range(1, 2 * n + 2):
        if psi_bounds_at(b, -n + r - 1):
            return r
    return INFINITY
