import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from preordgrp.algebra import Lattice
from preordgrp.carriers import block_pog, classify_morphism, finite_pog
from preordgrp.corpus import builtin_catalog, finite_corpus
from preordgrp.errors import ModelError
from preordgrp.reflectors import (
    check_group_laws,
    completion_agreement,
    factor_through_unit,
    grothendieck_group,
    grothendieck_table,
    group_completion_in,
    is_abelian_object,
    is_commutative_object,
    reflect_A,
    reflect_C,
    reflect_F,
)

CAT = builtin_catalog()


def test_reflect_c_of_s3_with_a3_cone():
    r = reflect_C(CAT["S3[1]"])
    y = r.reflected
    assert y.group.finite.order == 2
    assert y.cone.finite_mask.tolist() == [True, False]
    assert classify_morphism(r.unit)["regular_epi"]


def test_reflect_c_of_heisenberg():
    r = reflect_C(CAT["heis-P0"])
    y = r.reflected
    assert y.group.rank == 2
    assert y.member(((1, 0), 0)).holds
    assert y.member(((0, 1), 0)).fails
    assert y.member(((-1, 0), 0)).fails


def test_reflect_c_of_abelian_is_identity():
    x = CAT["NxZ"]
    assert reflect_C(x).reflected is x


def test_reflect_f_of_naturals():
    r = reflect_F(CAT["NinZ"])
    y = r.reflected
    assert y.member(((-5,), 0)).holds
    f = classify_morphism(r.unit)
    assert f["mono"] and f["epi"] and not f["regular_epi"]
    assert not r.cone_surjective


def test_reflect_f_of_half_plane():
    y = reflect_F(CAT["NxZ"]).reflected
    assert all(y.member((v, 0)).holds for v in itertools.product(range(-3, 4), repeat=2))


def test_reflect_f_of_finite_object():
    # F of (S3, A3) is C2 with trivial cone: eta(A3) = 0
    y = reflect_F(CAT["S3[1]"]).reflected
    assert y.cone.finite_mask.tolist() == [True, False]


def test_group_completion_examples():
    assert group_completion_in(CAT["NinZ"]).lattice.basis == [(1,)]
    assert group_completion_in(CAT["2NinZ"]).lattice.basis == [(2,)]
    assert group_completion_in(CAT["N2inZ2"]).lattice == Lattice.full(2)
    assert group_completion_in(CAT["N0inZ2"]).lattice.basis == [(1, 0)]


def test_grothendieck_of_naturals():
    gg = grothendieck_group(CAT["NinZ"], bound=5)
    assert check_group_laws(gg).holds
    # differences of 0..5 are -5..5
    assert gg.order == 11
    assert completion_agreement(CAT["NinZ"], 5).holds


def test_grothendieck_of_n2():
    gg = grothendieck_group(CAT["N2inZ2"], bound=3)
    assert check_group_laws(gg).holds
    assert completion_agreement(CAT["N2inZ2"], 3).holds


def test_grothendieck_of_abstract_monoids():
    # Z/3 as a monoid is already a group
    t = np.add.outer(range(3), range(3)) % 3
    assert grothendieck_table(t).order == 3
    # {0, 1} with 1 + 1 = 1 collapses to the trivial group
    assert grothendieck_table([[0, 1], [1, 1]]).order == 1
    # truncated addition {0,1,2} with 2 absorbing: trivial group
    assert grothendieck_table(np.minimum(np.add.outer(range(3), range(3)), 2)).order == 1


def test_grothendieck_rejects_non_monoids():
    with pytest.raises(ModelError):
        grothendieck_table([[0, 1], [0, 1]])
    with pytest.raises(ModelError):
        grothendieck_table([[1, 0], [0, 1]])


def test_object_predicates():
    assert is_commutative_object(CAT["NinZ"]).holds
    assert not is_abelian_object(CAT["NinZ"]).holds
    assert is_abelian_object(CAT["ZinZ"]).holds
    assert is_commutative_object(CAT["S3"]).fails
    assert is_commutative_object(CAT["heis-P0"]).fails
    assert is_abelian_object(CAT["Z/2"]).holds


def test_factor_through_unit():
    m = CAT["sum"]
    r = reflect_F(m.domain)
    target = block_pog(1, lattice=[(1,)])
    from preordgrp.carriers import BlockMorphism

    g = BlockMorphism(m.domain, target, [[1, 1]])
    h = factor_through_unit(r, g)
    for v in itertools.product(range(-2, 3), repeat=2):
        assert h.apply(r.unit.apply((v, 0))) == g.apply((v, 0))


OBJECTS = sorted(n for n, x in CAT.objects.items() if x.is_block)


@settings(max_examples=60)
@given(st.sampled_from(OBJECTS), st.sampled_from(["C", "F"]))
def test_reflectors_are_idempotent(name, tag):
    fn = {"C": reflect_C, "F": reflect_F}[tag]
    y = fn(CAT[name]).reflected
    z = fn(y)
    f = classify_morphism(z.unit)
    assert f == {"mono": True, "epi": True, "regular_epi": True}


@settings(max_examples=60)
@given(st.sampled_from(OBJECTS))
def test_reflected_objects_land_in_subcategories(name):
    x = CAT[name]
    assert is_commutative_object(reflect_C(x).reflected).holds
    assert is_abelian_object(reflect_F(x).reflected).holds
    c = reflect_C(x).reflected
    assert is_abelian_object(reflect_A(c).reflected).holds


@settings(max_examples=30)
@given(st.sampled_from(finite_corpus(max_order=6)))
def test_reflect_c_preserves_regular_epis(m):
    from preordgrp.reflectors import reflect_morphism

    assert classify_morphism(reflect_morphism(m, "C"))["regular_epi"]


def test_finite_pog_reflections_agree_with_abelianization():
    for x in [CAT["S4"], CAT["D4"], CAT["Q8"], finite_pog(CAT["S3"].group.finite, [0])]:
        y = reflect_C(x).reflected
        g = x.group.finite
        assert y.group.finite.order * int(g.commutator_subgroup.sum()) == g.order
