"""Block carriers Z^r / Λ × F and their product cones.

An element is a pair ``(v, g)`` with ``v`` the canonical representative of a
class of Z^r modulo the relation lattice Λ and ``g`` an index of the finite
group F.  With r = 0 and Λ = 0 this is just a finite group, so the finite
backend is the rank-0 case of this class.
"""

from __future__ import annotations

from itertools import product
from typing import Iterable, Optional

import numpy as np

from ..algebra.finite import FiniteGroup, trivial
from ..algebra.lattice import Lattice
from ..algebra.monoid import DEFAULT_RADIUS, FreeCone, canonical_cone
from ..errors import ModelError
from ..verdict import Fails, Holds, Verdict

Element = tuple  # (tuple[int, ...], int)


class BlockGroup:
    def __init__(self, rank: int = 0, finite: Optional[FiniteGroup] = None, relations: Optional[Lattice] = None):
        self.rank = int(rank)
        if self.rank < 0:
            raise ModelError("rank must be non-negative")
        self.finite = finite if finite is not None else trivial()
        self.relations = relations if relations is not None else Lattice.zero(self.rank)
        if self.relations.rank != self.rank:
            raise ModelError("relation lattice has the wrong rank")

    @property
    def backend(self) -> str:
        return "finite" if self.rank == 0 else "block"

    def __repr__(self):
        rel = f", relations={list(self.relations.basis)}" if self.relations.basis else ""
        return f"BlockGroup(rank={self.rank}, finite_order={self.finite.order}{rel})"

    def same_as(self, other) -> bool:
        return (
            isinstance(other, BlockGroup)
            and self.rank == other.rank
            and self.relations == other.relations
            and self.finite == other.finite
        )

    # elements ---------------------------------------------------------------

    @property
    def identity(self) -> Element:
        return (tuple([0] * self.rank), 0)

    def element(self, v=(), g: int = 0) -> Element:
        v = tuple(int(x) for x in v)
        if len(v) != self.rank:
            raise ModelError(f"vector {v} does not fit rank {self.rank}")
        if not (0 <= int(g) < self.finite.order):
            raise ModelError(f"finite index {g} out of range")
        return (self.relations.reduce(v), int(g))

    def op(self, x: Element, y: Element) -> Element:
        v = tuple(a + b for a, b in zip(x[0], y[0]))
        return (self.relations.reduce(v), self.finite.op(x[1], y[1]))

    def neg(self, x: Element) -> Element:
        return (self.relations.reduce(tuple(-a for a in x[0])), self.finite.inv(x[1]))

    def sub(self, x: Element, y: Element) -> Element:
        """x - y."""
        return self.op(x, self.neg(y))

    def is_identity(self, x: Element) -> bool:
        return not any(x[0]) and x[1] == 0

    @property
    def is_abelian(self) -> bool:
        return self.finite.is_abelian

    def is_trivial(self) -> bool:
        return self.finite.order == 1 and self.relations.is_full()

    def invariants(self) -> tuple:
        return self.relations.invariants()

    def box(self, bound: int) -> list[Element]:
        """Elements with free coordinates in [-bound, bound], deduplicated modulo Λ.

        Ordered by l1 norm of the vector, then descending lexicographic order,
        then finite index.
        """
        vecs = sorted(
            {self.relations.reduce(v) for v in product(range(-bound, bound + 1), repeat=self.rank)},
            key=lambda v: (sum(abs(x) for x in v), tuple(-x for x in v)),
        )
        return [(v, g) for v in vecs for g in range(self.finite.order)]

    def format(self, x: Element) -> str:
        v, g = x
        if self.rank == 0:
            return str(g)
        vs = "(" + ",".join(str(a) for a in v) + ")"
        return vs if self.finite.order == 1 else f"{vs}+{g}"


class BlockCone:
    """Product cone: a free monoid part in Z^r / Λ times a normal subgroup N of F."""

    def __init__(self, free: FreeCone, finite_mask):
        self.free = free
        self.finite_mask = np.asarray(finite_mask, dtype=bool).copy()
        self.finite_mask.setflags(write=False)

    def __repr__(self):
        return f"BlockCone({self.free!r}, finite={self.finite_elements})"

    @property
    def finite_elements(self) -> tuple[int, ...]:
        return tuple(int(x) for x in np.flatnonzero(self.finite_mask))

    def member_certificate(self, x: Element):
        v, g = x
        if not self.finite_mask[g]:
            return None
        c = self.free.member_certificate(v)
        return None if c is None else (c, g)

    def member(self, x: Element) -> bool:
        return self.member_certificate(x) is not None

    def generators(self, group: BlockGroup) -> list[Element]:
        """Monoid generators: ±lattice basis, pointed generators, generators of N."""
        cached = self.__dict__.get("_gens")
        if cached is not None and cached[0] is group:
            return list(cached[1])
        zero = tuple([0] * group.rank)
        out = [(v, 0) for v in self.free.monoid_generators()]
        sub, incl = group.finite.subgroup(self.finite_mask)
        out.extend((zero, int(incl[s])) for s in sub.generators)
        out = [(group.relations.reduce(v), g) for v, g in out]
        self._gens = (group, out)
        return list(out)

    def is_group(self) -> bool:
        return self.free.is_group()

    def contains(self, other: "BlockCone") -> bool:
        return bool((~other.finite_mask | self.finite_mask).all()) and self.free.contains(other.free)

    def same_as(self, other: "BlockCone") -> bool:
        return self.contains(other) and other.contains(self)


def make_cone(
    group: BlockGroup,
    lattice=(),
    pointed=(),
    functional=None,
    finite: Iterable[int] = (0,),
    canonical: bool = False,
    radius: int = DEFAULT_RADIUS,
) -> BlockCone:
    """Cone from user data.  Without ``canonical`` the certificate is taken as given and checked."""
    fin = group.finite.mask(list(finite) + [0])
    if canonical:
        free = canonical_cone(group.rank, group.relations, lattice, pointed, functional, radius)
        fin = group.finite.closure(fin)
    else:
        lat = group.relations + Lattice(group.rank, list(lattice))
        pointed = [tuple(int(x) for x in g) for g in pointed]
        if functional is None:
            if pointed:
                free = canonical_cone(group.rank, group.relations, lattice, pointed, None, radius)
                return BlockCone(free, fin)
            functional = tuple([0] * group.rank)
        free = FreeCone(group.rank, group.relations, lat, pointed, functional)
    return BlockCone(free, fin)


def full_cone(group: BlockGroup) -> BlockCone:
    return BlockCone(
        FreeCone(group.rank, group.relations, Lattice.full(group.rank), (), None),
        np.ones(group.finite.order, dtype=bool),
    )


def zero_cone(group: BlockGroup) -> BlockCone:
    return BlockCone(
        FreeCone(group.rank, group.relations, group.relations, (), None),
        group.finite.mask([0]),
    )


def validate_block_cone(cone: BlockCone, group: BlockGroup) -> Verdict:
    """Identity, closure and conjugation closure of the finite part; the free
    part is a monoid by construction and its certificate is re-checked (raising
    :class:`ModelError` when malformed)."""
    if cone.free.rank != group.rank or cone.free.relations != group.relations:
        raise ModelError("cone does not live on this group")
    if len(cone.finite_mask) != group.finite.order:
        raise ModelError("finite cone part has the wrong size")
    cone.free.check()
    f = group.finite
    m = cone.finite_mask
    if not m[0]:
        return Fails(("identity",), "cone misses the identity")
    idx = np.flatnonzero(m)
    prod = f.table[np.ix_(idx, idx)]
    bad = np.argwhere(~m[prod])
    if len(bad):
        a, b = int(idx[bad[0, 0]]), int(idx[bad[0, 1]])
        return Fails(("closure", a, b), f"{a} + {b} leaves the cone")
    esc = f.conjugation_escape(m)
    if esc is not None:
        g, x = esc
        return Fails(("conjugation", g, x), f"conjugating {x} by {g} leaves the cone")
    return Holds(("cone", group.rank, len(cone.free.pointed), int(m.sum())))
