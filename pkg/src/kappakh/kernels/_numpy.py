"""Pure-numpy versions of the hot loops."""

from __future__ import annotations

import numpy as np


def _segment_edges(letters: np.ndarray, n: int):
    c = letters.shape[0]
    fixed_u, fixed_v = [], []
    ident_u, ident_v, cup_u, cup_v = [], [], [], []
    for i in range(c):
        s = abs(int(letters[i])) - 1
        lo, hi = i * n, (i + 1) * n
        for j in range(n):
            if j != s and j != s + 1:
                fixed_u.append(lo + j)
                fixed_v.append(hi + j)
        ident_u += [lo + s, lo + s + 1]
        ident_v += [hi + s, hi + s + 1]
        cup_u += [lo + s, hi + s]
        cup_v += [lo + s + 1, hi + s + 1]
    for j in range(n):
        fixed_u.append(c * n + j)
        fixed_v.append(j)
    as_arr = lambda x: np.asarray(x, dtype=np.int64)
    return as_arr(fixed_u), as_arr(fixed_v), as_arr(ident_u), as_arr(ident_v), as_arr(cup_u), as_arr(cup_v)


def circle_labels(letters: np.ndarray, n: int, masks: np.ndarray):
    """Label propagation with pointer jumping, vectorised over resolutions."""
    c = letters.shape[0]
    nseg = n * (c + 1)
    R = masks.shape[0]
    fu, fv, iu, iv, cu, cv = _segment_edges(letters, n)
    bits = (masks[:, None] >> np.arange(c, dtype=np.int64)) & 1
    identity = (bits == 0) == (letters > 0)[None, :]
    ident_on = np.repeat(identity, 2, axis=1)
    U = np.concatenate([fu, iu, cu])
    V = np.concatenate([fv, iv, cv])
    active = np.concatenate(
        [np.ones((R, fu.size), dtype=bool), ident_on, ~ident_on], axis=1
    )
    rows = np.broadcast_to(np.arange(R)[:, None], active.shape)
    lab = np.tile(np.arange(nseg, dtype=np.int64), (R, 1))
    while True:
        lu, lv = lab[:, U], lab[:, V]
        m = np.where(active, np.minimum(lu, lv), lu)
        new = lab.copy()
        np.minimum.at(new, (rows, U), m)
        np.minimum.at(new, (rows, V), np.where(active, m, lv))
        while True:
            jumped = np.take_along_axis(new, new, axis=1)
            if np.array_equal(jumped, new):
                break
            new = jumped
        if np.array_equal(new, lab):
            break
        lab = new
    is_root = lab == np.arange(nseg)[None, :]
    index = np.cumsum(is_root, axis=1) - 1
    circ = np.take_along_axis(index, lab, axis=1).astype(np.int32)
    ncirc = is_root.sum(axis=1).astype(np.int32)
    nontriv = np.zeros((R, nseg), dtype=np.uint8)
    for j in range(n):
        nontriv[np.arange(R), circ[:, j]] ^= 1
    return circ, ncirc, nontriv


def _lowest_set(row: np.ndarray, start: int) -> int:
    nz = np.flatnonzero(row[start:])
    if nz.size == 0:
        return -1
    w = start + int(nz[0])
    x = int(row[w])
    return w * 64 + (x & -x).bit_length() - 1


def reduce_columns(red, combo, piv, low, start, stop, track):
    for j in range(start, stop):
        w = 0
        while True:
            r = _lowest_set(red[j], w)
            if r < 0:
                low[j] = -1
                break
            p = piv[r]
            if p < 0:
                piv[r] = j
                low[j] = r
                break
            w = r >> 6
            red[j, w:] ^= red[p, w:]
            if track:
                combo[j] ^= combo[p]


def reduce_vector(red, combo, piv, vec, acc, track):
    w = 0
    while True:
        r = _lowest_set(vec, w)
        if r < 0:
            return True
        p = piv[r]
        if p < 0:
            return False
        w = r >> 6
        vec[w:] ^= red[p, w:]
        if track:
            acc ^= combo[p]
