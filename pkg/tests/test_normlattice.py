import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from preordgrp.algebra import Lattice
from preordgrp.corpus import builtin_catalog
from preordgrp.errors import PreconditionError
from preordgrp.normlattice import (
    NormalSubobject,
    check_modular,
    enumerate_normal_subobjects,
    is_normal_subobject,
    join,
    meet,
    whole_subobject,
    zero_subobject,
)

CAT = builtin_catalog()


def brute_normal_subgroups(g):
    """Subsets closed under products, inverses and conjugation, by exhaustion."""
    t, inv, n = g.table, g.inverse, g.order
    out = []
    for bits in itertools.product([False, True], repeat=n - 1):
        s = {0} | {i + 1 for i, b in enumerate(bits) if b}
        if all(int(t[a, b]) in s for a in s for b in s) and all(int(t[t[x, a], inv[x]]) in s for a in s for x in range(n)):
            out.append(frozenset(s))
    return out


@pytest.mark.parametrize("name,count", [("S3", 3), ("C2", 2), ("D4", 6), ("Q8", 6), ("V4", 5)])
def test_enumeration_counts(name, count):
    x = CAT[name]
    subs = enumerate_normal_subobjects(x)
    assert len(subs) == count
    found = {frozenset(np.flatnonzero(s.finite_mask).tolist()) for s in subs}
    assert found == set(brute_normal_subgroups(x.group.finite))
    for s in subs:
        assert is_normal_subobject(s).holds


def sub_of_z(k):
    return NormalSubobject(CAT["NinZ"], Lattice(1, [(k,)]))


def test_join_and_meet_in_integers():
    two, three = sub_of_z(2), sub_of_z(3)
    assert join(two, three).lattice.basis == [(1,)]
    assert meet(two, three).lattice.basis == [(6,)]
    # induced cones: 6Z ∩ N is generated by 6
    m = meet(two, three)
    assert m.cone.member(((6,), 0)) and not m.cone.member(((3,), 0))


def test_join_and_meet_in_s3():
    subs = enumerate_normal_subobjects(CAT["S3"])
    zero = next(s for s in subs if s.finite_mask.sum() == 1)
    a3 = next(s for s in subs if s.finite_mask.sum() == 3)
    whole = whole_subobject(CAT["S3"])
    assert join(zero, a3).same_as(a3)
    assert meet(a3, whole).same_as(a3)
    assert join(a3, whole).same_as(whole)


def test_non_normal_subgroup_rejected():
    s3 = CAT["S3"].group.finite
    t = next(a for a in range(1, 6) if s3.op(a, a) == 0)
    v = is_normal_subobject(NormalSubobject(CAT["S3"], None, s3.mask([0, t])))
    assert v.fails and v.witness[0] == "conjugation"


def test_modular_precondition():
    with pytest.raises(PreconditionError):
        check_modular(sub_of_z(2), sub_of_z(3), sub_of_z(3))


def test_zero_and_whole_are_bounds():
    x = CAT["NxZ"]
    for s in enumerate_normal_subobjects(x, 4):
        assert zero_subobject(x) <= s <= whole_subobject(x)


AMBIENTS = ["S3", "D4", "Q8", "C12", "V4", "NinZ", "NinZxC2"]


@st.composite
def triple(draw):
    x = CAT[draw(st.sampled_from(AMBIENTS))]
    subs = enumerate_normal_subobjects(x, 6)
    a, b, c = (draw(st.sampled_from(subs)) for _ in range(3))
    return a, b, c


@settings(max_examples=80)
@given(triple())
def test_lattice_laws(abc):
    a, b, c = abc
    assert join(a, b).same_as(join(b, a))
    assert meet(a, b).same_as(meet(b, a))
    assert join(a, join(b, c)).same_as(join(join(a, b), c))
    assert meet(a, meet(b, c)).same_as(meet(meet(a, b), c))
    assert join(a, meet(a, b)).same_as(a)
    assert meet(a, join(a, b)).same_as(a)
    assert a <= join(a, b) and meet(a, b) <= a
    assert is_normal_subobject(join(a, b)).holds
    assert is_normal_subobject(meet(a, b)).holds


@settings(max_examples=80)
@given(triple())
def test_modular_law(abc):
    a, b, c = abc
    c = meet(a, c)
    assert check_modular(a, b, c).holds
