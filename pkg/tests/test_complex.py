import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kappakh.braid import BasepointAddress, BraidWord, self_linking
from kappakh.complex import build_slice, differential, slice_q_values
from kappakh.diagram import Generator, circles, gradings, oriented_resolution
from kappakh.f2linalg import ChainF2
from conftest import braids, random_braid
from oracles import FullComplex


def test_identity_slice():
    e2 = BraidWord(2, ())
    # q(psi) = sl = -2 pins the all-v_- labelling; the mixed ones sit at q = 0
    assert build_slice(e2, h=0, q=-2).basis == [Generator(0, 0)]
    assert build_slice(e2, h=0, q=0).basis == [Generator(0, 0b01), Generator(0, 0b10)]


def test_negative_crossing_slice():
    s = build_slice(BraidWord(2, (-1,)), h=-1, q=-3, k_max=0)
    assert s.basis == [Generator(0, 0)]
    assert s.k.tolist() == [0]


@settings(max_examples=40, deadline=None)
@given(braids())
def test_lowest_filtration_level_is_psi(b):
    s = build_slice(b, h=0, q=self_linking(b), k_max=-b.n)
    assert s.basis == [Generator(oriented_resolution(b).bits, 0)]


def test_split_of_minus_is_psi():
    b = BraidWord(2, (-1,))
    src = build_slice(b, h=-1, q=-3)
    d = differential(b, src)
    assert d.target.basis[d.matrix.column(0)[0]] == Generator(1, 0)
    assert d.matrix.column(0).tolist() == [d.target.index(Generator(1, 0))]


def test_merge_of_minus_minus_is_zero():
    b = BraidWord(2, (1,))
    src = build_slice(b, h=0, q=-1)
    d = differential(b, src)
    assert src.basis == [Generator(0, 0)]
    assert d.matrix.nnz == 0


def _all_slices(b, variant="unreduced", p=None):
    for h in range(-b.n_minus, b.n_plus + 1):
        for q in slice_q_values(b, h):
            yield build_slice(b, variant, h, q, math.inf, p)


@pytest.mark.parametrize("seed", range(25))
def test_d_squared_zero(seed):
    rng = random.Random(seed)
    b = random_braid(rng, 5, 8, n_min=2)
    p = BasepointAddress(rng.randint(1, b.n), rng.randint(0, b.c))
    for variant in ("unreduced", "reduced_sub", "reduced_quot"):
        bp = None if variant == "unreduced" else p
        for s in _all_slices(b, variant, bp):
            d0 = differential(b, s)
            d1 = differential(b, d0.target)
            assert d1.matrix.matmul(d0.matrix).nnz == 0


@pytest.mark.parametrize("seed", range(10))
def test_entries_are_filtered_and_graded(seed):
    rng = random.Random(50 + seed)
    b = random_braid(rng, 5, 8, n_min=2)
    for s in _all_slices(b):
        d = differential(b, s)
        r, c = d.matrix.coo()
        assert np.all(d.target.k[r] <= s.k[c])
        for row, col in list(zip(r.tolist(), c.tolist()))[:20]:
            hs, qs, ks = gradings(b, s.basis[col])
            ht, qt, kt = gradings(b, d.target.basis[row])
            assert (ht, qt) == (hs + 1, qs) and kt <= ks


@pytest.mark.parametrize("seed", range(10))
def test_slices_match_oracle_generators(seed):
    rng = random.Random(200 + seed)
    b = random_braid(rng, 4, 6, n_min=2)
    p = BasepointAddress(rng.randint(1, b.n), rng.randint(0, b.c))
    for variant in ("unreduced", "reduced_sub", "reduced_quot"):
        bp = None if variant == "unreduced" else p
        fc = FullComplex(b.n, b.letters, (p.position, p.gap) if bp else None, variant)
        ours = sum(len(s) for s in _all_slices(b, variant, bp))
        assert ours == len(fc.gens)


@pytest.mark.parametrize("seed", range(10))
def test_dimension_identity_and_cutoff(seed):
    rng = random.Random(300 + seed)
    b = random_braid(rng, 5, 7, n_min=2)
    p = BasepointAddress(rng.randint(1, b.n), rng.randint(0, b.c))
    for h in range(-b.n_minus, b.n_plus + 1):
        for q in slice_q_values(b, h):
            full = build_slice(b, h=h, q=q)
            sub = build_slice(b, "reduced_sub", h, q, basepoint=p)
            quot = build_slice(b, "reduced_quot", h, q, basepoint=p)
            assert len(full) == len(sub) + len(quot)
            for i in range(-b.n, b.n + 1, 2):
                cut = build_slice(b, h=h, q=q, k_max=i)
                keep = full.k <= i
                assert cut.res.tolist() == full.res[keep].tolist()
                assert cut.lab.tolist() == full.lab[keep].tolist()


def test_variant_arguments_checked():
    b = BraidWord(3, (1, -2))
    with pytest.raises(ValueError):
        build_slice(b, "reduced_sub", 0, -4)
    with pytest.raises(ValueError):
        build_slice(b, "unreduced", 0, -4, basepoint=BasepointAddress(1, 0))
    with pytest.raises(ValueError):
        build_slice(b, "reduced_quot", 0, -4, basepoint=BasepointAddress(4, 0))
    with pytest.raises(ValueError):
        build_slice(b, "bogus", 0, -4)


def test_empty_slice_is_valid():
    s = build_slice(BraidWord(2, (1,)), h=5, q=0)
    assert len(s) == 0 and s.basis == []
    d = differential(BraidWord(2, (1,)), s)
    assert d.matrix.n_cols == 0
