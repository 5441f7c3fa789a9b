"""Normal subobjects of a preordered group: meet, join and the modular law.

A normal subobject of a block object X is a normal subgroup A together with
the induced cone A ∩ P_X.  Only block subgroups (a lattice S ⊇ Λ on the free
side times a normal subgroup M of the finite side) are represented.
"""

from __future__ import annotations

from functools import cached_property
from itertools import product
from typing import Optional

import numpy as np

from .algebra.lattice import Lattice
from .carriers import BlockCone, PreorderedGroup
from .errors import PreconditionError, UnsupportedError
from .verdict import Fails, Holds, Verdict


class NormalSubobject:
    def __init__(self, ambient: PreorderedGroup, lattice: Optional[Lattice] = None, finite_mask=None, cone: Optional[BlockCone] = None):
        if not ambient.is_block:
            raise UnsupportedError("normal subobjects are represented for block objects only")
        g = ambient.group
        self.ambient = ambient
        self.lattice = lattice if lattice is not None else g.relations
        self.finite_mask = np.asarray(finite_mask if finite_mask is not None else g.finite.mask([0]), dtype=bool)
        self._given_cone = cone

    def __repr__(self):
        return f"NormalSubobject(lattice={list(self.lattice.basis)}, finite={list(np.flatnonzero(self.finite_mask))})"

    @cached_property
    def induced_cone(self) -> BlockCone:
        """A ∩ P."""
        free = self.ambient.cone.free.intersect_lattice(self.lattice)
        return BlockCone(free, self.finite_mask & self.ambient.cone.finite_mask)

    @property
    def cone(self) -> BlockCone:
        return self._given_cone if self._given_cone is not None else self.induced_cone

    def subgroup_contains(self, other: "NormalSubobject") -> bool:
        return self.lattice.contains(other.lattice) and bool((~other.finite_mask | self.finite_mask).all())

    def __le__(self, other: "NormalSubobject") -> bool:
        return other.subgroup_contains(self)

    def same_as(self, other: "NormalSubobject") -> bool:
        return self <= other and other <= self and self.cone.same_as(other.cone)

    def contains_element(self, x) -> bool:
        return self.lattice.member(x[0]) and bool(self.finite_mask[x[1]])

    def generators(self):
        g = self.ambient.group
        zero = tuple([0] * g.rank)
        out = [(g.relations.reduce(u), 0) for u in self.lattice.basis]
        out += [(zero, int(a)) for a in np.flatnonzero(self.finite_mask)]
        return out

    def as_object(self, name=None):
        from .category import subobject

        return subobject(self.ambient, self.lattice, self.finite_mask, name)


def zero_subobject(x: PreorderedGroup) -> NormalSubobject:
    return NormalSubobject(x)


def whole_subobject(x: PreorderedGroup) -> NormalSubobject:
    g = x.group
    return NormalSubobject(x, Lattice.full(g.rank), np.ones(g.finite.order, dtype=bool))


def is_normal_subobject(s: NormalSubobject, x: Optional[PreorderedGroup] = None) -> Verdict:
    x = x or s.ambient
    g = x.group
    f = g.finite
    if not s.lattice.contains(g.relations):
        return Fails(("relations",), "lattice part misses the relation lattice")
    if not f.is_subgroup(s.finite_mask):
        return Fails(("subgroup",), "finite part is not a subgroup")
    esc = f.conjugation_escape(s.finite_mask)
    if esc is not None:
        gg, a = esc
        return Fails(("conjugation", gg, a), f"conjugating {a} by {gg} leaves the subgroup")
    c = s.cone
    for y in c.generators(g):
        if not s.contains_element(y):
            return Fails(("cone-outside-subgroup", g.format(y)), "cone element outside the subgroup")
        if not x.cone.member(y):
            return Fails(("cone-outside-ambient", g.format(y)), "cone element outside the ambient cone")
    for y in s.induced_cone.generators(g):
        if not c.member(y):
            return Fails(("cone-too-small", g.format(y)), "cone misses an element of A ∩ P")
    return Holds(("normal", len(s.lattice.basis), int(s.finite_mask.sum())))


def join(a: NormalSubobject, b: NormalSubobject) -> NormalSubobject:
    """(A·B, A·B ∩ P)."""
    f = a.ambient.group.finite
    return NormalSubobject(a.ambient, a.lattice + b.lattice, f.closure(a.finite_mask | b.finite_mask))


def meet(a: NormalSubobject, b: NormalSubobject) -> NormalSubobject:
    """(A ∩ B, A ∩ B ∩ P)."""
    return NormalSubobject(a.ambient, a.lattice.intersect(b.lattice), a.finite_mask & b.finite_mask)


def _difference(a: NormalSubobject, b: NormalSubobject):
    """An element or cone generator of a that b lacks, or None."""
    g = a.ambient.group
    for y in a.generators():
        if not b.contains_element(y):
            return ("subgroup", g.format(y))
    for y in a.cone.generators(g):
        if not b.cone.member(y):
            return ("cone", g.format(y))
    return None


def check_modular(a: NormalSubobject, b: NormalSubobject, c: NormalSubobject) -> Verdict:
    """A ∧ (B ∨ C) = (A ∧ B) ∨ C for C ≤ A."""
    if not c <= a:
        raise PreconditionError("modular law needs C <= A")
    lhs = meet(a, join(b, c))
    rhs = join(meet(a, b), c)
    d = _difference(lhs, rhs) or _difference(rhs, lhs)
    if d is not None:
        return Fails(d, "the two sides of the modular law differ")
    return Holds(("modular",))


def _sublattices(rank: int, bound: int):
    """Full-rank sublattices of Z^rank whose index divides ``bound`` (Hermite bases)."""
    divisors = [d for d in range(1, bound + 1) if bound % d == 0]
    out = []

    def rec(j, diag):
        if j == rank:
            idx = 1
            for d in diag:
                idx *= d
            if bound % idx == 0:
                out.append(list(diag))
            return
        for d in divisors:
            rec(j + 1, diag + [d])

    rec(0, [])
    lats = []
    for diag in out:
        # column j: pivot diag[j] at row j, below it entries a_ij in [0, diag[i])
        slots = [(i, j) for j in range(rank) for i in range(j + 1, rank)]
        for vals in product(*[range(diag[i]) for i, j in slots]):
            cols = [[0] * rank for _ in range(rank)]
            for j in range(rank):
                cols[j][j] = diag[j]
            for (i, j), v in zip(slots, vals):
                cols[j][i] = v
            lats.append(Lattice(rank, [tuple(c) for c in cols]))
    return lats


def enumerate_normal_subobjects(x: PreorderedGroup, index_bound: int = 6) -> list[NormalSubobject]:
    """All block normal subobjects; free parts restricted to the relation lattice
    and full-rank lattices of index dividing ``index_bound``."""
    if not x.is_block:
        raise UnsupportedError("normal subobjects of word objects are not enumerated")
    g = x.group
    lats = [g.relations]
    if g.rank:
        for lat in _sublattices(g.rank, index_bound):
            if lat.contains(g.relations) and lat not in lats:
                lats.append(lat)
    out = []
    for lat in lats:
        for m in g.finite.normal_subgroups:
            out.append(NormalSubobject(x, lat, m))
    return out
