"""numba-compiled versions of the hot loops; same contracts as ``_numpy``."""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


@njit(cache=True)
def _union(parent, a, b):
    ra = _find(parent, a)
    rb = _find(parent, b)
    if ra < rb:
        parent[rb] = ra
    elif rb < ra:
        parent[ra] = rb


@njit(cache=True)
def circle_labels(letters, n, masks):
    c = letters.shape[0]
    nseg = n * (c + 1)
    R = masks.shape[0]
    circ = np.empty((R, nseg), dtype=np.int32)
    ncirc = np.empty(R, dtype=np.int32)
    nontriv = np.zeros((R, nseg), dtype=np.uint8)
    parent = np.empty(nseg, dtype=np.int64)
    index = np.empty(nseg, dtype=np.int32)
    for r in range(R):
        for s in range(nseg):
            parent[s] = s
        mask = masks[r]
        for i in range(c):
            g = letters[i]
            s = abs(g) - 1
            lo = i * n
            hi = lo + n
            for j in range(n):
                if j != s and j != s + 1:
                    _union(parent, lo + j, hi + j)
            bit = (mask >> i) & 1
            if (bit == 0) == (g > 0):
                _union(parent, lo + s, hi + s)
                _union(parent, lo + s + 1, hi + s + 1)
            else:
                _union(parent, lo + s, lo + s + 1)
                _union(parent, hi + s, hi + s + 1)
        for j in range(n):
            _union(parent, c * n + j, j)
        count = 0
        for s in range(nseg):
            root = _find(parent, s)
            if root == s:
                index[s] = count
                count += 1
            circ[r, s] = index[root]
        ncirc[r] = count
        for j in range(n):
            nontriv[r, circ[r, j]] ^= 1
    return circ, ncirc, nontriv


@njit(cache=True)
def _lowbit(x):
    b = 0
    if x & np.uint64(0xFFFFFFFF) == 0:
        x >>= np.uint64(32)
        b += 32
    if x & np.uint64(0xFFFF) == 0:
        x >>= np.uint64(16)
        b += 16
    if x & np.uint64(0xFF) == 0:
        x >>= np.uint64(8)
        b += 8
    if x & np.uint64(0xF) == 0:
        x >>= np.uint64(4)
        b += 4
    if x & np.uint64(0x3) == 0:
        x >>= np.uint64(2)
        b += 2
    if x & np.uint64(0x1) == 0:
        b += 1
    return b


@njit(cache=True)
def _lowest_set(row, start):
    W = row.shape[0]
    w = start
    while w < W and row[w] == 0:
        w += 1
    if w == W:
        return -1
    return w * 64 + _lowbit(row[w])


@njit(cache=True)
def reduce_columns(red, combo, piv, low, start, stop, track):
    W = red.shape[1]
    CW = combo.shape[1]
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
            for t in range(w, W):
                red[j, t] ^= red[p, t]
            if track:
                for t in range(CW):
                    combo[j, t] ^= combo[p, t]


@njit(cache=True)
def reduce_vector(red, combo, piv, vec, acc, track):
    W = vec.shape[0]
    CW = acc.shape[0]
    w = 0
    while True:
        r = _lowest_set(vec, w)
        if r < 0:
            return True
        p = piv[r]
        if p < 0:
            return False
        w = r >> 6
        for t in range(w, W):
            vec[t] ^= red[p, t]
        if track:
            for t in range(CW):
                acc[t] ^= combo[p, t]
