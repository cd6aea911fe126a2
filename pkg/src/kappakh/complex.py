"""Graded slices of the k-filtered Khovanov complex of a braid closure.

A slice is the set of canonical generators with fixed ``(h, q)`` and
``k <= k_max``, ordered by (resolution mask, label mask).  Only resolutions of
weight ``h + n_-`` are ever enumerated.  Three flavours are supported:

``unreduced``
    every generator;
``reduced_sub``
    generators with v_- on the basepoint circle (the kernel of x_p);
``reduced_quot``
    generators with v_+ on the basepoint circle, standing for their classes
    in the cokernel of x_p.  The differential is the unreduced one with the
    v_- at p summands deleted.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .braid import BasepointAddress, BraidWord, self_linking
from .diagram import ClosedBraid, Generator
from .f2linalg import ChainF2, SparseMatrixF2

VARIANTS = ("unreduced", "reduced_sub", "reduced_quot")


@lru_cache(maxsize=128)
def closed(b: BraidWord) -> ClosedBraid:
    return ClosedBraid(b)


@lru_cache(maxsize=None)
def masks_of_weight(c: int, w: int) -> np.ndarray:
    if not 0 <= w <= c:
        return np.zeros(0, dtype=np.int64)
    out = [sum(1 << i for i in combo) for combo in itertools.combinations(range(c), w)]
    arr = np.array(sorted(out), dtype=np.int64)
    arr.flags.writeable = False
    return arr


@lru_cache(maxsize=None)
def labelings(m: int, plus: int) -> np.ndarray:
    """All ``m``-bit label masks with ``plus`` bits set, ascending."""
    return masks_of_weight(m, plus)


def _bitcount(x: np.ndarray) -> np.ndarray:
    return np.bitwise_count(x).astype(np.int64)


def _row_masks(flags: np.ndarray, counts: np.ndarray) -> np.ndarray:
    """Pack a 0/1 matrix (first ``counts[r]`` columns per row) into int64 masks."""
    width = flags.shape[1]
    cols = np.arange(width)
    keep = (cols[None, :] < counts[:, None]) & (flags != 0)
    return (keep.astype(np.int64) << cols[None, :].astype(np.int64)).sum(axis=1)


def check_variant(b: BraidWord, variant: str, basepoint: BasepointAddress | None) -> None:
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    if variant == "unreduced":
        if basepoint is not None:
            raise ValueError("the unreduced complex takes no basepoint")
    else:
        if basepoint is None:
            raise ValueError(f"variant {variant} needs a basepoint")
        basepoint.check(b)


@dataclass
class GradedSlice:
    braid: BraidWord
    variant: str
    basepoint: BasepointAddress | None
    h: int
    q: int
    k_max: float
    res: np.ndarray
    lab: np.ndarray
    k: np.ndarray
    res_unique: np.ndarray = field(repr=False)
    label_bits: int = field(repr=False)

    def __len__(self) -> int:
        return int(self.res.size)

    @property
    def basis(self) -> list[Generator]:
        return [Generator(int(r), int(l)) for r, l in zip(self.res, self.lab)]

    def locate(self, res: np.ndarray, lab: np.ndarray) -> np.ndarray:
        """Basis index of each (res, lab) pair, or -1 if absent."""
        res = np.asarray(res, dtype=np.int64)
        lab = np.asarray(lab, dtype=np.int64)
        out = np.full(res.shape, -1, dtype=np.int64)
        if not len(self) or not res.size:
            return out
        pos = np.searchsorted(self.res_unique, res)
        pos_c = np.minimum(pos, self.res_unique.size - 1)
        ok = (self.res_unique[pos_c] == res) & (lab >> self.label_bits == 0)
        keys = (self._res_pos << self.label_bits) | self.lab
        want = (pos_c << self.label_bits) | lab
        at = np.searchsorted(keys, want)
        at_c = np.minimum(at, keys.size - 1)
        ok &= keys[at_c] == want
        out[ok] = at_c[ok]
        return out

    def index(self, g: Generator) -> int | None:
        i = int(self.locate(np.array([g.res]), np.array([g.labels]))[0])
        return None if i < 0 else i

    @property
    def _res_pos(self) -> np.ndarray:
        return np.searchsorted(self.res_unique, self.res)

    def chain(self, gens) -> ChainF2:
        idx = []
        for g in gens:
            i = self.index(g)
            if i is None:
                raise KeyError(f"{g} is not in this slice")
            idx.append(i)
        return ChainF2.from_indices(idx)

    def k_of(self, x: ChainF2) -> int | None:
        """Filtration level of a chain: the largest k in its support."""
        if not x.support:
            return None
        return int(self.k[list(x.support)].max())


def build_slice(
    b: BraidWord,
    variant: str = "unreduced",
    h: int = 0,
    q: int | None = None,
    k_max: float = math.inf,
    basepoint: BasepointAddress | None = None,
) -> GradedSlice:
    """Generators of the given variant with gradings ``(h, q)`` and ``k <= k_max``.

    ``q`` defaults to the self-linking number.
    """
    check_variant(b, variant, basepoint)
    cb = closed(b)
    if q is None:
        q = self_linking(b)
    w = h + cb.n_minus
    masks = masks_of_weight(cb.c, w) if 0 <= w <= cb.c else np.zeros(0, dtype=np.int64)
    circ, ncirc, nontriv = cb.circle_data(masks)
    t = q - w - cb.n_plus + 2 * cb.n_minus
    ntmask = _row_masks(nontriv, ncirc)
    pseg = cb.segment(basepoint) if basepoint is not None else None
    res_parts, lab_parts, k_parts = [], [], []
    for row in range(masks.size):
        m = int(ncirc[row])
        if (m + t) % 2 or not 0 <= (m + t) // 2 <= m:
            continue
        labs = labelings(m, (m + t) // 2)
        nt = int(ntmask[row])
        k = 2 * _bitcount(labs & nt) - bin(nt).count("1")
        keep = k <= k_max
        if pseg is not None:
            pbit = (labs >> int(circ[row, pseg])) & 1
            keep &= pbit == (1 if variant == "reduced_quot" else 0)
        if not keep.any():
            continue
        res_parts.append(np.full(int(keep.sum()), masks[row], dtype=np.int64))
        lab_parts.append(labs[keep])
        k_parts.append(k[keep])
    cat = lambda parts: np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)
    res = cat(res_parts)
    label_bits = int(ncirc.max()) if ncirc.size else 0
    return GradedSlice(
        braid=b,
        variant=variant,
        basepoint=basepoint,
        h=h,
        q=q,
        k_max=k_max,
        res=res,
        lab=cat(lab_parts),
        k=cat(k_parts),
        res_unique=np.unique(res),
        label_bits=max(label_bits, 1),
    )


def slice_q_values(b: BraidWord, h: int) -> list[int]:
    """Every q carrying generators in homological degree ``h``."""
    cb = closed(b)
    w = h + cb.n_minus
    if not 0 <= w <= cb.c:
        return []
    _, ncirc, _ = cb.circle_data(masks_of_weight(cb.c, w))
    shift = w + cb.n_plus - 2 * cb.n_minus
    qs: set[int] = set()
    for m in np.unique(ncirc).tolist():
        qs.update(range(shift - m, shift + m + 1, 2))
    return sorted(qs)


@dataclass
class DifferentialMatrix:
    source: GradedSlice
    target: GradedSlice
    matrix: SparseMatrixF2


class FiltrationError(AssertionError):
    pass


def _first_segments(circ: np.ndarray, ncirc: np.ndarray) -> np.ndarray:
    """rep[r, t] = smallest segment on circle t of resolution r."""
    cm = np.maximum.accumulate(circ, axis=1)
    first = np.ones(circ.shape, dtype=bool)
    first[:, 1:] = cm[:, 1:] > cm[:, :-1]
    rows, segs = np.nonzero(first)
    rep = np.zeros((circ.shape[0], int(ncirc.max()) if ncirc.size else 0), dtype=np.int64)
    rep[rows, circ[rows, segs]] = segs
    return rep


def differential(b: BraidWord, src: GradedSlice, tgt: GradedSlice | None = None) -> DifferentialMatrix:
    """Matrix of d from ``src`` to ``tgt`` (default: the full slice at h + 1).

    Summands with k above ``tgt.k_max`` are truncated.  Summands with v_- on
    the basepoint circle are deleted in the quotient flavour.  Any other
    summand missing from ``tgt`` raises ``FiltrationError``, as does any entry
    that raises k.
    """
    cb = closed(b)
    if tgt is None:
        tgt = build_slice(b, src.variant, src.h + 1, src.q, math.inf, src.basepoint)
    if (tgt.variant, tgt.basepoint, tgt.h, tgt.q) != (src.variant, src.basepoint, src.h + 1, src.q):
        raise ValueError("target slice must have the same variant and q, and h + 1")
    pseg = cb.segment(src.basepoint) if src.basepoint is not None else None
    n = cb.n
    rows_out, cols_out = [], []
    for i in range(cb.c):
        sel = np.flatnonzero(((src.res >> i) & 1) == 0)
        if not sel.size:
            continue
        ures, gi = np.unique(src.res[sel], return_inverse=True)
        lab = src.lab[sel]
        circ1, ncirc1, _ = cb.circle_data(ures)
        r2 = ures | (1 << i)
        circ2, ncirc2, nontriv2 = cb.circle_data(r2)
        s = abs(int(cb.letters[i])) - 1
        sa, sb, sc = i * n + s, i * n + s + 1, (i + 1) * n + s
        A = circ1[:, sa].astype(np.int64)
        B = np.where(circ1[:, sb] != A, circ1[:, sb], circ1[:, sc]).astype(np.int64)
        X = circ2[:, sa].astype(np.int64)
        Y = np.where(circ2[:, sb] != X, circ2[:, sb], circ2[:, sc]).astype(np.int64)
        split = A == B
        if np.any(split != (X != Y)):
            raise FiltrationError("inconsistent merge/split at a crossing")
        rep = _first_segments(circ1, ncirc1)
        map2 = np.take_along_axis(circ2, rep, axis=1).astype(np.int64)
        map2[np.arange(rep.shape[1])[None, :] >= ncirc1[:, None]] = 0

        Ag, Bg, Xg, Yg, sg = A[gi], B[gi], X[gi], Y[gi], split[gi]
        other = lab & ~((np.int64(1) << Ag) | (np.int64(1) << Bg))
        base = np.zeros_like(lab)
        for t in range(map2.shape[1]):
            base |= ((other >> t) & 1) << map2[gi, t]
        la = (lab >> Ag) & 1
        lb = (lab >> Bg) & 1

        merge_out = ~sg & ((la | lb) == 1)
        split_plus = sg & (la == 1)
        split_minus = sg & (la == 0)
        src_idx = np.concatenate([sel[merge_out], sel[split_plus], sel[split_plus], sel[split_minus]])
        row = np.concatenate([gi[merge_out], gi[split_plus], gi[split_plus], gi[split_minus]])
        lab2 = np.concatenate([
            base[merge_out] | ((la & lb)[merge_out] << Xg[merge_out]),
            base[split_plus] | (np.int64(1) << Xg[split_plus]),
            base[split_plus] | (np.int64(1) << Yg[split_plus]),
            base[split_minus],
        ])
        if not lab2.size:
            continue

        nt2 = _row_masks(nontriv2, ncirc2)[row]
        k2 = 2 * _bitcount(lab2 & nt2) - _bitcount(nt2)
        if np.any(k2 > src.k[src_idx]):
            raise FiltrationError("differential raised the k-grading")
        found = tgt.locate(r2[row], lab2)
        missing = found < 0
        if missing.any():
            allowed = k2 > tgt.k_max
            if src.variant == "reduced_quot":
                pbit = (lab2 >> circ2[row, pseg].astype(np.int64)) & 1
                allowed |= pbit == 0
            if np.any(missing & ~allowed):
                raise FiltrationError("differential left the target slice")
        rows_out.append(found[~missing])
        cols_out.append(src_idx[~missing])
    rows = np.concatenate(rows_out) if rows_out else np.zeros(0, dtype=np.int64)
    cols = np.concatenate(cols_out) if cols_out else np.zeros(0, dtype=np.int64)
    return DifferentialMatrix(src, tgt, SparseMatrixF2.from_coo(len(tgt), len(src), rows, cols))
