"""Both code paths of every hot kernel must give identical answers."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from preordgrp import kernels
from preordgrp._accel import numba_enabled
from preordgrp.corpus import builtin_catalog

GROUPS = sorted(builtin_catalog().groups)


def _group(name):
    return builtin_catalog().groups[name]


@st.composite
def group_and_mask(draw):
    g = _group(draw(st.sampled_from(GROUPS)))
    bits = draw(st.lists(st.booleans(), min_size=g.order, max_size=g.order))
    mask = np.array(bits, dtype=bool)
    mask[0] = True
    return g, mask


def both(nb, np_, *args):
    a = nb(*args)
    b = np_(*args)
    return a, b


@given(group_and_mask())
def test_closure_paths_agree(gm):
    g, mask = gm
    t = kernels._i64(g.table)
    a, b = both(kernels._closure_nb, kernels._closure_np, t, mask.copy())
    assert np.array_equal(a, b)
    inv = kernels._i64(g.inverse)
    a, b = both(kernels._conj_closure_nb, kernels._conj_closure_np, t, inv, mask.copy())
    assert np.array_equal(a, b)


@given(group_and_mask(), st.integers(1, 4), st.integers(1, 4))
def test_star_and_shs_paths_agree(gm, ke, kf):
    g, mask = gm
    t, inv = kernels._i64(g.table), kernels._i64(g.inverse)
    eta = np.arange(g.order, dtype=np.int64) % ke
    f = np.arange(g.order, dtype=np.int64) % kf
    a, b = both(kernels._star_nb, kernels._star_np, t, inv, mask, eta, f)
    assert tuple(map(int, a)) == tuple(map(int, b))
    a, b = both(kernels._shs_nb, kernels._shs_np, t, inv, mask, f)
    assert tuple(map(int, a)) == tuple(map(int, b))


@pytest.mark.parametrize("name", GROUPS)
def test_assoc_paths_agree(name):
    t = kernels._i64(_group(name).table)
    assert tuple(map(int, kernels._assoc_nb(t))) == tuple(map(int, kernels._assoc_np(t))) == (-1, -1, -1)


def test_assoc_paths_find_same_violation():
    t = kernels._i64(_group("C5").table).copy()
    t[2, 3], t[2, 4] = t[2, 4], t[2, 3]
    assert tuple(map(int, kernels._assoc_nb(t))) == tuple(map(int, kernels._assoc_np(t)))


@given(st.integers(2, 12), st.integers(0, 5))
def test_grothendieck_paths_agree(m, cut):
    # truncated addition a+b capped at `cap`: not cancellative once the cap is hit
    cap = max(0, m - 1 - cut)
    sums = np.minimum(np.add.outer(np.arange(m), np.arange(m)), cap)
    pairs = np.array([(i, j) for i in range(m) for j in range(m)], dtype=np.int64)
    rep = np.arange(m, dtype=np.int64)
    a, b = both(kernels._groth_nb, kernels._groth_np, pairs, kernels._i64(sums), rep)
    assert np.array_equal(a, b)


def test_flag_selects_path(monkeypatch):
    monkeypatch.setenv("PREORDGRP_NUMBA", "0")
    assert not numba_enabled()
    g = _group("S3")
    numpy_result = kernels.subgroup_closure(g.table, g.mask([1]))
    monkeypatch.setenv("PREORDGRP_NUMBA", "1")
    assert np.array_equal(numpy_result, kernels.subgroup_closure(g.table, g.mask([1])))


def _with_flag(monkeypatch, value, fn):
    monkeypatch.setenv("PREORDGRP_NUMBA", value)
    return fn()


small = st.integers(-3, 3)


@given(
    st.lists(st.tuples(st.integers(0, 3), small), min_size=1, max_size=3),
    st.tuples(st.integers(0, 6), small),
)
def test_coefficient_search_paths_agree(gens, target):
    # pointed generators (a, b) with a >= 1 so the weight functional (1, 0) is positive
    gens = [(a + 1, b) for a, b in gens]
    cols = [[g[0] for g in gens], [g[1] for g in gens]]
    weights = [g[0] for g in gens]
    basis = [[], []]
    args = (cols, weights, basis, [], list(target), target[0])
    with pytest.MonkeyPatch.context() as mp:
        fast = _with_flag(mp, "1", lambda: kernels.coefficient_search(*args))
        slow = _with_flag(mp, "0", lambda: kernels.coefficient_search(*args))
    assert fast == slow
    if fast is not None:
        assert all(c >= 0 for c in fast)
        assert tuple(sum(c * g[i] for c, g in zip(fast, gens)) for i in range(2)) == tuple(target)


@given(st.lists(st.tuples(small, small), min_size=1, max_size=3), st.integers(1, 3))
def test_functional_search_paths_agree(gens, radius):
    cols = [[g[0] for g in gens], [g[1] for g in gens]]
    with pytest.MonkeyPatch.context() as mp:
        fast = _with_flag(mp, "1", lambda: kernels.functional_search([], cols, 2, radius))
        slow = _with_flag(mp, "0", lambda: kernels.functional_search([], cols, 2, radius))
    assert fast == slow
    if fast is not None:
        assert all(fast[0] * a + fast[1] * b >= 1 for a, b in gens)
