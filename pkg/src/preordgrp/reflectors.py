"""Reflections onto preordered abelian groups (C), group completion of the
cone (A) and their composite F = A∘C, plus the commutative / abelian object
predicates.

C quotients the group by its derived subgroup and pushes the cone forward.
A replaces the cone of an abelian object by the subgroup it generates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Optional

import numpy as np

from .algebra.finite import FiniteGroup
from .algebra.lattice import Lattice
from .algebra.monoid import FreeCone, canonical_cone
from .carriers import (
    BlockCone,
    BlockGroup,
    BlockMorphism,
    Morphism,
    PreorderedGroup,
    WordToBlock,
    compose,
    identity_morphism,
)
from .category import product as pog_product
from .errors import ModelError, PreconditionError, UnsupportedError
from .kernels import grothendieck_labels
from .normlattice import NormalSubobject
from .verdict import Fails, Holds, Verdict


@dataclass
class ReflectionResult:
    reflected: PreorderedGroup
    unit: Morphism
    tag: str

    @property
    def cone_surjective(self) -> bool:
        return bool(self.unit.flags["regular_epi"])


def _unit(r, j):
    return tuple(int(i == j) for i in range(r))


def _ident(r):
    return [[int(i == j) for j in range(r)] for i in range(r)]


def _suffix(x, tag):
    return f"{tag}({x.name})" if x.name else None


# ------------------------------------------------------------------------ C


def _abelianize_block(x: PreorderedGroup):
    g = x.group
    fq, labels = g.finite.quotient(g.finite.commutator_subgroup)
    qg = BlockGroup(g.rank, fq, g.relations)
    mask = np.zeros(fq.order, dtype=bool)
    mask[np.unique(labels[x.cone.finite_mask])] = True
    return qg, labels, mask


def reflect_C(x: PreorderedGroup) -> ReflectionResult:
    """(G/[G,G], η(P)) with the quotient map as unit."""
    if x.is_block:
        if x.group.is_abelian:
            return ReflectionResult(x, identity_morphism(x), "C")
        qg, labels, mask = _abelianize_block(x)
        y = PreorderedGroup(qg, BlockCone(x.cone.free, mask), _suffix(x, "C"))
        return ReflectionResult(y, BlockMorphism(x, y, _ident(qg.rank), labels, name="eta"), "C")
    h = x.group
    h.require_certificate()
    k = len(h.gens)
    rel = Lattice.zero(k)
    free = canonical_cone(k, rel, [], [h.ab_coords(c) for c in x.cone.gens])
    y = PreorderedGroup(BlockGroup(k, None, rel), BlockCone(free, np.ones(1, dtype=bool)), _suffix(x, "C"))
    return ReflectionResult(y, WordToBlock(x, y, [_unit(k, j) for j in range(k)], name="eta"), "C")


# ------------------------------------------------------------------------ A


def group_completion_in(x: PreorderedGroup, m: Optional[BlockCone] = None) -> NormalSubobject:
    """{a - b : a, b ∈ M} for a cone M of an abelian block object."""
    if not x.is_block:
        raise UnsupportedError("group completion is computed inside block objects")
    if not x.group.is_abelian:
        raise PreconditionError("group completion inside a non-abelian group")
    m = m if m is not None else x.cone
    g = x.group
    lat = g.relations + Lattice(g.rank, list(m.free.lattice.basis) + list(m.free.pointed))
    fin = g.finite.closure(m.finite_mask)
    return NormalSubobject(x, lat, fin)


def reflect_A(x: PreorderedGroup) -> ReflectionResult:
    """(G, grp(P)) for an abelian object; the unit is the identity on groups."""
    if not x.is_block:
        raise UnsupportedError("A is computed for block objects")
    if x.cone.is_group() and x.group.is_abelian:
        return ReflectionResult(x, identity_morphism(x), "A")
    s = group_completion_in(x)
    g = x.group
    free = FreeCone(g.rank, g.relations, s.lattice, (), tuple([0] * g.rank))
    y = PreorderedGroup(g, BlockCone(free, s.finite_mask), _suffix(x, "A"))
    return ReflectionResult(y, BlockMorphism(x, y, _ident(g.rank), np.arange(g.finite.order), name="j"), "A")


# ------------------------------------------------------------------------ F


def reflect_F(x: PreorderedGroup) -> ReflectionResult:
    """(ab(G), grp(η(P))) with unit j∘η."""
    c = reflect_C(x)
    a = reflect_A(c.reflected)
    if a.reflected is c.reflected:
        return ReflectionResult(c.reflected, c.unit, "F")
    y = a.reflected
    y.name = _suffix(x, "F")
    return ReflectionResult(y, compose(a.unit, c.unit, name="eta_hat"), "F")


REFLECTORS = {"C": reflect_C, "A": reflect_A, "F": reflect_F}


def reflect(x: PreorderedGroup, tag: str) -> ReflectionResult:
    try:
        return REFLECTORS[tag](x)
    except KeyError:
        raise ModelError(f"unknown reflector {tag!r}") from None


def _class_reps(labels, n):
    reps = np.full(n, -1, dtype=np.int64)
    for i, c in enumerate(labels):
        if reps[c] < 0:
            reps[c] = i
    return reps


def factor_through_unit(res: ReflectionResult, m: Morphism) -> Morphism:
    """The morphism m̄ from the reflected object with m̄ ∘ unit = m.

    Raises PreconditionError when m does not factor (its codomain is not in
    the reflective subcategory, or m is not constant on the fibres)."""
    unit, y = res.unit, res.reflected
    if isinstance(unit, BlockMorphism) and isinstance(m, BlockMorphism):
        reps = _class_reps(unit.fmap, y.group.finite.order)
        if unit.matrix != tuple(tuple(r) for r in _ident(y.group.rank)):
            raise UnsupportedError("unit is not the identity on the free part")
        fmap = m.fmap[reps]
        bar = BlockMorphism(y, m.codomain, m.matrix, fmap, name=f"{m.name or 'm'}_bar")
    elif isinstance(unit, WordToBlock) and isinstance(m, WordToBlock):
        bar = BlockMorphism(y, m.codomain, m.matrix, [0], name=f"{m.name or 'm'}_bar")
    else:
        raise UnsupportedError(f"factorization of a {m.kind} morphism through a {unit.kind} unit")
    if not (np.array_equal(bar.fmap[unit.fmap], m.fmap) if isinstance(m, BlockMorphism) else True):
        raise PreconditionError("morphism is not constant on the fibres of the unit")
    v = bar.validate()
    if not v.holds:
        raise PreconditionError(f"induced map is not a morphism: {v.witness}")
    return bar


def reflect_morphism(m: Morphism, tag: str = "C") -> Morphism:
    """R(m) : R(X) → R(Y), the factorization of unit_Y ∘ m through unit_X."""
    rx, ry = reflect(m.domain, tag), reflect(m.codomain, tag)
    return factor_through_unit(rx, compose(ry.unit, m))


# -------------------------------------------------------- Grothendieck group


@dataclass
class GrothendieckGroup:
    """Classes of pairs (m1, m2) of enumerated monoid elements under
    m1 + n2 + k = m2 + n1 + k."""

    elements: list
    pairs: np.ndarray
    labels: np.ndarray
    sum_ids: np.ndarray
    zero: int
    table: Optional[FiniteGroup] = None
    values: list = field(default_factory=list)  # ambient values of the elements, when known

    @property
    def order(self) -> int:
        return int(self.labels.max()) + 1 if len(self.labels) else 0

    def label(self, i: int, j: int) -> int:
        return int(self.labels[i * len(self.elements) + j])

    def insertion(self, i: int) -> int:
        """j(m) = [(m, 0)]."""
        return self.label(i, self.zero)

    def representatives(self) -> list:
        n = len(self.elements)
        reps = _class_reps(self.labels, self.order)
        return [(int(r // n), int(r % n)) for r in reps]

    def difference(self, cls: int, ambient):
        """Φ([(m1, m2)]) = m1 - m2 inside the ambient group."""
        i, j = self.representatives()[cls]
        return ambient.sub(self.values[i], self.values[j])


def _stable_reps(table: np.ndarray) -> np.ndarray:
    """Representative of s under s ~ t iff s + k = t + k for some k."""
    n = len(table)
    rep = np.arange(n)
    for s in range(n):
        for t in range(s):
            if rep[t] == t and np.any(table[s] == table[t]):
                rep[s] = t
                break
    return rep


def grothendieck_table(table, identity: int = 0) -> GrothendieckGroup:
    """Grothendieck group of an abstract finite commutative monoid."""
    t = np.asarray(table, dtype=np.int64)
    n = len(t)
    if t.shape != (n, n) or (t < 0).any() or (t >= n).any():
        raise ModelError("monoid table must be square with entries in range")
    if not np.array_equal(t, t.T):
        i, j = np.argwhere(t != t.T)[0]
        raise ModelError(f"monoid is not commutative: {i}+{j} != {j}+{i}")
    if not (np.array_equal(t[identity], np.arange(n))):
        raise ModelError(f"{identity} is not an identity")
    if not np.array_equal(t[t], t[:, t]):
        a = np.argwhere(t[t] != t[:, t])
        raise ModelError(f"monoid is not associative at {tuple(int(v) for v in a[0])}")
    pairs = np.array(list(product(range(n), repeat=2)), dtype=np.int64)
    labels = grothendieck_labels(pairs, t, _stable_reps(t))
    k = int(labels.max()) + 1
    reps = _class_reps(labels, k)
    gt = np.zeros((k, k), dtype=np.int64)
    for a in range(k):
        i1, j1 = pairs[reps[a]]
        for b in range(k):
            i2, j2 = pairs[reps[b]]
            gt[a, b] = labels[t[i1, i2] * n + t[j1, j2]]
    zero = labels[identity * n + identity]
    if zero != 0:  # pragma: no cover - (0,0) is the first pair
        raise AssertionError("identity class must be first")
    return GrothendieckGroup(list(range(n)), pairs, labels, t, identity, FiniteGroup(gt))


def grothendieck_group(x: PreorderedGroup, bound: int = 6) -> GrothendieckGroup:
    """Bounded Grothendieck construction for the cone of an abelian block object.

    Monoid elements are the sums of at most ``bound`` monoid generators.  Sums
    are compared in the ambient group, so stable equality is plain equality."""
    if not x.is_block:
        raise UnsupportedError("Grothendieck group of a word cone")
    g = x.group
    if not g.is_abelian:
        raise ModelError("Grothendieck group of a non-commutative monoid")
    gens = x.cone_generators()
    elems = {g.identity: 0}
    frontier = [g.identity]
    for _ in range(bound):
        nxt = []
        for e in frontier:
            for s in gens:
                y = g.op(e, s)
                if y not in elems:
                    elems[y] = len(elems)
                    nxt.append(y)
        frontier = nxt
    values = list(elems)
    n = len(values)
    sums_index = dict(elems)
    sums = np.zeros((n, n), dtype=np.int64)
    for i, a in enumerate(values):
        for j, b in enumerate(values):
            sums[i, j] = sums_index.setdefault(g.op(a, b), len(sums_index))
    rep = np.arange(len(sums_index))
    pairs = np.array(list(product(range(n), repeat=2)), dtype=np.int64)
    labels = grothendieck_labels(pairs, sums, rep)
    return GrothendieckGroup(values, pairs, labels, sums, 0, None, values)


def check_group_laws(gg: GrothendieckGroup) -> Verdict:
    """Identity, inverses and well-definedness of addition on enumerated classes."""
    sid = gg.sum_ids
    pairs = gg.pairs
    lab = {}
    for p, (i, j) in enumerate(pairs):
        lab.setdefault((int(sid[i, gg.zero]), int(sid[j, gg.zero])), int(gg.labels[p]))
    zero_cls = gg.label(gg.zero, gg.zero)
    for p, (i, j) in enumerate(pairs):
        if gg.label(i, i) != zero_cls:
            return Fails(("identity", i), "(m, m) is not the zero class")
        s = lab.get((int(sid[i, j]), int(sid[j, i])))
        if s is not None and s != zero_cls:
            return Fails(("inverse", i, j), "(m1,m2) + (m2,m1) is not zero")
    # addition is well defined: equivalent pairs have equivalent sums with a fixed third pair
    reps = gg.representatives()
    by_label = {}
    for p, (i, j) in enumerate(pairs):
        by_label.setdefault(int(gg.labels[p]), []).append((int(i), int(j)))
    for cls, members in by_label.items():
        for (i, j) in members[:4]:
            for (a, b) in reps[:8]:
                s1 = lab.get((int(sid[i, a]), int(sid[j, b])))
                i0, j0 = reps[cls]
                s2 = lab.get((int(sid[i0, a]), int(sid[j0, b])))
                if s1 is not None and s2 is not None and s1 != s2:
                    return Fails(("addition", (i, j), (a, b)), "addition depends on the representative")
    return Holds(("group", gg.order))


def completion_agreement(x: PreorderedGroup, bound: int = 4) -> Verdict:
    """Φ([(m1,m2)]) = m1 - m2 is a bijection from the enumerated classes onto
    the enumerated differences, and lands in the group completion."""
    gg = grothendieck_group(x, bound)
    g = x.group
    s = group_completion_in(x)
    seen = {}
    for cls in range(gg.order):
        d = gg.difference(cls, g)
        if not s.contains_element(d):
            return Fails(("outside", g.format(d)), "difference outside the group completion")
        if d in seen:
            return Fails(("not-injective", cls, seen[d]), "two classes with the same difference")
        seen[d] = cls
    diffs = {g.sub(a, b) for a in gg.values for b in gg.values}
    if len(diffs) != len(seen):
        return Fails(("not-surjective",), "a difference is not hit by any class")
    return Holds(("bijection", gg.order))


# ---------------------------------------------------------- object predicates


def _sum_map(x: PreorderedGroup, sign: int) -> BlockMorphism:
    """φ(x, y) = sign·x + y from X × X to X."""
    p, _, _ = pog_product(x, x)
    g = x.group
    r = g.rank
    matrix = [[sign * int(i == j) for j in range(r)] + [int(i == j) for j in range(r)] for i in range(r)]
    f = g.finite
    n = f.order
    fmap = [f.op(a if sign > 0 else f.inv(a), b) for a in range(n) for b in range(n)]
    return BlockMorphism(p, x, matrix, fmap, name="phi")


def _word_commute_oracle(x: PreorderedGroup, bound: int = 2):
    h = x.group
    ball = list(h.ball(bound))
    for a in ball:
        for b in ball:
            if h.op(a, b) != h.op(b, a):
                return (h.format(a), h.format(b))
    return None


def _check_agree(structural: Verdict, oracle: bool, what: str) -> Verdict:
    if structural.holds != oracle:
        raise AssertionError(f"{what}: structural answer and candidate-map oracle disagree")
    return structural


def is_commutative_object(x: PreorderedGroup) -> Verdict:
    """Holds iff the group is abelian; cross-checked by the sum map X × X → X."""
    if x.is_block:
        f = x.group.finite
        pair = next(((a, b) for a in range(f.order) for b in range(a + 1, f.order) if f.op(a, b) != f.op(b, a)), None)
        structural = Holds(("abelian",)) if pair is None else Fails(("non-commuting", x.format(((0,) * x.group.rank, pair[0])), x.format(((0,) * x.group.rank, pair[1]))), "group is not abelian")
        oracle = _sum_map(x, 1).validate().holds
        return _check_agree(structural, oracle, "commutative object")
    h = x.group
    bad = next(((i, j) for i, j, c in h.generator_commutators if c != h.identity), None)
    structural = Holds(("abelian",)) if bad is None else Fails(("non-commuting", h.names[bad[0]], h.names[bad[1]]), "group is not abelian")
    return _check_agree(structural, _word_commute_oracle(x) is None, "commutative object")


def is_abelian_object(x: PreorderedGroup) -> Verdict:
    """Holds iff the group is abelian and the cone is a subgroup; cross-checked
    by the map (x, y) ↦ -x + y restricted to P × P."""
    com = is_commutative_object(x)
    if not com.holds:
        return com
    if x.is_block:
        c = x.cone.free
        bad = next((p for p in c.pointed if not c.member(tuple(-v for v in p))), None)
        if bad is None:
            structural = Holds(("subgroup-cone",))
        else:
            structural = Fails(("not-invertible", x.format((x.group.relations.reduce(bad), 0))), "cone is not closed under inverses")
        oracle = _sum_map(x, -1).validate().holds
        return _check_agree(structural, oracle, "abelian object")
    h = x.group
    parts = []
    for c in x.cone.gens:
        v = x.cone.member(h.neg(c))
        if v.fails:
            return Fails(("not-invertible", h.format(c)), "cone is not closed under inverses")
        parts.append(v)
    from .verdict import conjoin

    return conjoin(*parts) if parts else Holds(("subgroup-cone",))
