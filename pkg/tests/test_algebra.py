import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import Matrix
from sympy.matrices.normalforms import hermite_normal_form, smith_normal_form

from preordgrp.algebra import (
    Lattice,
    center,
    commutator_subgroup,
    hnf,
    lattice_intersect,
    lattice_member,
    quotient_group,
    snf,
)
from preordgrp.algebra.finite import (
    FiniteGroup,
    cyclic,
    dihedral,
    klein,
    quaternion,
    symmetric,
    validate_group_table,
)
from preordgrp.corpus import builtin_catalog
from preordgrp.errors import ModelError

# ---------------------------------------------------------------- oracles


def perm_table(perms):
    """Cayley table of a list of permutations (p*q = p after q), independent of the library."""
    idx = {p: i for i, p in enumerate(perms)}
    return np.array([[idx[tuple(p[q[k]] for k in range(len(q)))] for q in perms] for p in perms])


def s3_perms():
    ident = (0, 1, 2)
    rest = sorted(p for p in itertools.permutations(range(3)) if p != ident)
    return [ident] + rest


def sympy_lattice(cols, dim):
    """Canonical form of the column lattice computed by sympy alone."""
    cols = [c for c in cols if any(c)]
    if not cols:
        return ()
    m = Matrix(dim, len(cols), lambda i, j: cols[j][i])
    h = hermite_normal_form(m)
    return tuple(tuple(int(x) for x in h.col(j)) for j in range(h.shape[1]) if any(h.col(j)))


def brute_closure(t, seed):
    s = set(seed) | {0}
    while True:
        new = {int(t[a, b]) for a in s for b in s} - s
        if not new:
            return s
        s |= new


# ----------------------------------------------------------- group tables


def test_klein_table_holds():
    assert validate_group_table(klein().table).holds


def test_broken_associativity_fails_with_triple():
    t = cyclic(5).table.copy()
    # swap two entries of one row: still a Latin row, no longer a group
    t[2, 3], t[2, 4] = t[2, 4], t[2, 3]
    t[3, 3], t[4, 3] = t[4, 3], t[3, 3]
    v = validate_group_table(t)
    assert v.fails
    assert v.witness is not None


def test_s3_from_permutation_oracle():
    t = perm_table(s3_perms())
    assert validate_group_table(t).holds
    g = FiniteGroup(t)
    assert g.order == 6 and not g.is_abelian


def test_nonsquare_table_is_model_error():
    with pytest.raises(ModelError):
        validate_group_table(np.zeros((2, 3), dtype=int))


# ------------------------------------------------------- derived subgroups


def brute_commutator(g):
    t, inv = g.table, g.inverse
    comms = {int(t[t[t[a, b], inv[a]], inv[b]]) for a in range(g.order) for b in range(g.order)}
    return brute_closure(t, comms)


def brute_center(g):
    t = g.table
    return {z for z in range(g.order) if all(t[z, a] == t[a, z] for a in range(g.order))}


def test_commutator_examples():
    s3 = FiniteGroup(perm_table(s3_perms()))
    assert commutator_subgroup(s3) == brute_commutator(s3)
    assert len(commutator_subgroup(s3)) == 3
    assert commutator_subgroup(cyclic(6)) == {0}
    assert len(commutator_subgroup(quaternion())) == 2


def test_center_examples():
    assert center(symmetric(3)) == {0}
    assert center(cyclic(7)) == set(range(7))
    assert len(center(dihedral(4))) == 2


@pytest.mark.parametrize("name", sorted(builtin_catalog().groups))
def test_catalog_group_invariants(name):
    g = builtin_catalog().groups[name]
    assert validate_group_table(g.table).holds
    assert commutator_subgroup(g) == brute_commutator(g)
    assert center(g) == brute_center(g)
    assert g.is_normal(g.commutator_subgroup)
    q, _ = quotient_group(g, g.commutator_subgroup)
    assert q.is_abelian


def test_quotients():
    s3 = symmetric(3)
    q, labels = quotient_group(s3, s3.commutator_subgroup)
    assert q.order == 2
    # labels are a surjective homomorphism with kernel A3
    for a in range(6):
        for b in range(6):
            assert labels[s3.op(a, b)] == q.op(labels[a], labels[b])
    assert set(np.flatnonzero(labels == 0)) == commutator_subgroup(s3)
    q1, lab1 = quotient_group(s3, [0])
    assert q1.order == 6 and len(set(lab1.tolist())) == 6
    q8 = quaternion()
    qq, _ = quotient_group(q8, q8.commutator_subgroup)
    assert qq.order == 4 and qq.is_abelian
    assert all(qq.power(a, 2) == 0 for a in range(4))  # C2 x C2, not C4


def test_quotient_by_non_subgroup_rejected():
    with pytest.raises(ModelError):
        quotient_group(symmetric(3), [0, 1])


# ------------------------------------------------------------ lattices


def test_hnf_examples():
    assert hnf([[2, 0], [0, 3]]) == [[2, 0], [0, 3]]
    assert Lattice(2, [(1, 3), (2, 4)]).basis == [(1, 1), (0, 2)]
    assert Lattice(2, [(0, 0)]).basis == []


def test_snf_examples():
    assert snf([[2, 4], [6, 8]]) == (2, 4)
    assert snf([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == (1, 1, 1)
    assert snf([[6]]) == (6,)


def test_membership_examples():
    lat = Lattice(2, [(2, 0), (0, 3)])
    assert lattice_member(lat, (4, 3))
    assert lattice_member(lat, (0, 0))
    assert not lattice_member(lat, (1, 0))


def test_intersection_examples():
    a = Lattice(2, [(2, 0), (0, 1)])
    b = Lattice(2, [(1, 0), (0, 3)])
    assert lattice_intersect(a, b).basis == [(2, 0), (0, 3)]
    assert lattice_intersect(a, a) == a
    assert lattice_intersect(Lattice(2, [(1, 1)]), Lattice(2, [(1, -1)])).basis == []


def test_dimension_mismatch():
    with pytest.raises(ModelError):
        lattice_member(Lattice(2, [(1, 0)]), (1, 0, 0))
    with pytest.raises(ModelError):
        lattice_intersect(Lattice(2), Lattice(3))


vec3 = st.tuples(*[st.integers(-6, 6)] * 3)
gens3 = st.lists(vec3, min_size=0, max_size=4)


@given(gens3)
def test_hnf_matches_sympy_lattice(gens):
    lat = Lattice(3, gens)
    assert sympy_lattice(lat.basis, 3) == sympy_lattice(gens, 3)


@given(gens3)
def test_hnf_shape_and_idempotence(gens):
    lat = Lattice(3, gens)
    assert Lattice(3, lat.basis).basis == lat.basis
    # lower triangular, positive pivots, entries right of each pivot reduced
    rows = []
    for j, col in enumerate(lat.basis):
        p = next(i for i, x in enumerate(col) if x)
        rows.append(p)
        assert col[p] > 0
        for later in lat.basis[j + 1 :]:
            assert later[p] == 0
        for earlier in lat.basis[:j]:
            assert 0 <= earlier[p] < col[p]
    assert rows == sorted(rows) and len(set(rows)) == len(rows)


@given(gens3, st.lists(vec3, min_size=1, max_size=10))
def test_membership_stable_under_normalization(gens, probes):
    lat = Lattice(3, gens)
    again = Lattice(3, list(lat.basis) + list(gens))
    for v in probes:
        assert lat.member(v) == again.member(v)
    for g in gens:
        assert lat.member(g)


@given(st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=3, max_size=3))
def test_snf_matches_sympy(rows):
    d = snf(rows)
    m = Matrix(rows)
    s = smith_normal_form(m)
    expected = sorted(abs(int(s[i, i])) for i in range(3) if s[i, i] != 0)
    assert sorted(d) == expected
    for a, b in zip(d, d[1:]):
        assert b % a == 0
    if m.det() != 0:
        assert int(np.prod(d)) == abs(int(m.det()))


@given(gens3, gens3, st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), max_size=6))
def test_intersection_is_contained_and_complete(ga, gb, coeffs):
    a, b = Lattice(3, ga), Lattice(3, gb)
    c = a.intersect(b)
    assert a.contains(c) and b.contains(c)
    # sampled multiples of a-vectors that also lie in b must lie in the intersection
    for u in a.basis:
        for k, _ in coeffs:
            w = tuple(k * x for x in u)
            if b.member(w):
                assert c.member(w)
