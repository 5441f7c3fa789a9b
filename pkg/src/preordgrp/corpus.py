"""Built-in catalog of preordered groups and morphisms, and generated corpora.

Catalog names are stable identifiers used by the command line.  Finite
objects come in cone variants: ``S3`` carries the full cone and ``S3[k]``
carries the k-th normal subgroup (ordered by size, ``S3[0]`` is the trivial
cone).  A few variants also have readable aliases such as ``S3[A3]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterator, Optional

import numpy as np

from .algebra import finite as fg
from .carriers import (
    BlockMorphism,
    Morphism,
    PreorderedGroup,
    WordToBlock,
    block_pog,
    cone_validate,
    finite_pog,
    heisenberg,
    word_pog,
    zero_object,
)
from .errors import ModelError, UnsupportedError

CATALOG_VERSION = "1"


def _finite_groups() -> dict:
    c = {f"C{n}": fg.cyclic(n) for n in range(1, 13)}
    c.update(
        {
            "V4": fg.klein(),
            "S3": fg.symmetric(3),
            "D4": fg.dihedral(4),
            "Q8": fg.quaternion(),
            "D5": fg.dihedral(5),
            "D6": fg.dihedral(6),
            "A4": fg.alternating(4),
            "C2xC4": fg.direct_product(fg.cyclic(2), fg.cyclic(4)),
            "C2xC2xC2": fg.direct_product(fg.klein(), fg.cyclic(2)),
            "C3xC3": fg.direct_product(fg.cyclic(3), fg.cyclic(3)),
            "C2xC6": fg.direct_product(fg.cyclic(2), fg.cyclic(6)),
            "S4": fg.symmetric(4),
        }
    )
    return c


@dataclass
class Catalog:
    groups: dict = field(default_factory=dict)  # name -> FiniteGroup
    objects: dict = field(default_factory=dict)  # name -> PreorderedGroup
    morphisms: dict = field(default_factory=dict)  # name -> Morphism
    aliases: dict = field(default_factory=dict)
    version: str = CATALOG_VERSION

    def __getitem__(self, name: str):
        name = self.aliases.get(name, name)
        if name in self.objects:
            return self.objects[name]
        if name in self.morphisms:
            return self.morphisms[name]
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        name = self.aliases.get(name, name)
        return name in self.objects or name in self.morphisms

    def lookup(self, name: str):
        try:
            return self[name]
        except KeyError:
            raise ModelError(f"no catalog entry named {name!r}") from None

    def finite_objects(self, max_order: Optional[int] = None) -> list:
        return [
            o for o in self.objects.values()
            if o.is_block and o.group.rank == 0 and (max_order is None or o.group.finite.order <= max_order)
        ]

    def block_objects(self) -> list:
        return [o for o in self.objects.values() if o.is_block and o.group.rank > 0]

    def word_objects(self) -> list:
        return [o for o in self.objects.values() if not o.is_block]

    def object_name(self, x: PreorderedGroup) -> Optional[str]:
        for n, o in self.objects.items():
            if o is x:
                return n
        return None


def _add(cat: Catalog, obj: PreorderedGroup):
    v = cone_validate(obj)
    if not v.holds:
        raise ModelError(f"catalog object {obj.name} failed validation: {v.witness}")
    cat.objects[obj.name] = obj
    return obj


def _add_morphism(cat: Catalog, m: Morphism):
    v = m.validate()
    if not v.holds:
        raise ModelError(f"catalog morphism {m.name} failed validation: {v.witness}")
    cat.morphisms[m.name] = m
    return m


@lru_cache(maxsize=1)
def builtin_catalog() -> Catalog:
    cat = Catalog()
    cat.groups = _finite_groups()
    for gname, g in cat.groups.items():
        normals = g.normal_subgroups
        for k, n in enumerate(normals[:-1]):
            _add(cat, finite_pog(g, np.flatnonzero(n), name=f"{gname}[{k}]"))
        _add(cat, finite_pog(g, range(g.order), name=gname))
    cat.aliases.update({"S3[A3]": "S3[1]", "S3[e]": "S3[0]"})
    _add(cat, zero_object("zero"))
    c2 = cat.groups["C2"]
    for obj in (
        block_pog(1, pointed=[(1,)], name="NinZ"),
        block_pog(1, pointed=[(2,)], name="2NinZ"),
        block_pog(1, lattice=[(1,)], name="ZinZ"),
        block_pog(1, lattice=[(2,)], name="2ZinZ"),
        block_pog(1, name="0inZ"),
        block_pog(2, pointed=[(1, 0), (0, 1)], name="N2inZ2"),
        block_pog(2, lattice=[(0, 1)], pointed=[(1, 0)], name="NxZ"),
        block_pog(2, lattice=[(1, 0), (0, 1)], name="Z2inZ2"),
        block_pog(2, pointed=[(1, 0)], name="N0inZ2"),
        block_pog(2, pointed=[(1, 1), (1, -1)], name="wedge"),
        block_pog(2, lattice=[(1, -1)], pointed=[(1, 0)], name="halfplane"),
        block_pog(1, pointed=[(1,)], finite=c2, finite_cone=[0, 1], name="NinZxC2"),
        block_pog(1, pointed=[(1,)], finite=c2, finite_cone=[0], name="NinZxC2[0]"),
        block_pog(1, lattice=[(1,)], relations=[(2,)], name="Z/2"),
    ):
        _add(cat, obj)
    h = heisenberg()
    z = h.parse_element("z")
    _add(cat, word_pog(h, [h.gens[0], z], exact="heis-P0", name="heis-P0"))
    _add(cat, word_pog(h, list(h.gens) + [h.neg(g) for g in h.gens], exact="all", name="heis-full"))

    o = cat.objects
    for m in (
        BlockMorphism(o["N2inZ2"], o["NinZ"], [[1, 1]], name="sum"),
        BlockMorphism(o["N2inZ2"], o["NinZ"], [[1, 0]], name="proj1"),
        BlockMorphism(o["NxZ"], o["NinZ"], [[1, 0]], name="proj"),
        BlockMorphism(o["NinZ"], o["ZinZ"], [[1]], name="NinZ-incl"),
        BlockMorphism(o["Z2inZ2"], o["ZinZ"], [[1, 1]], name="sumZ"),
        BlockMorphism(o["NinZxC2"], o["NinZ"], [[1]], [0, 0], name="drop-C2"),
        WordToBlock(o["heis-P0"], o["N0inZ2"], [(1, 0), (0, 1)], name="heis-center-quot"),
        WordToBlock(o["heis-full"], o["Z2inZ2"], [(1, 0), (0, 1)], name="heis-full-quot"),
    ):
        _add_morphism(cat, m)
    for gname, target in (("S3", "C2"), ("S3[A3]", "C2[0]"), ("S4", "S3"), ("A4", "C3")):
        x, y = cat.lookup(gname), cat.lookup(target)
        m = next(iter(enumerate_surjections(x, y, limit=1)), None)
        if m is None:  # pragma: no cover - catalog construction invariant
            raise ModelError(f"no surjection {gname} -> {target}")
        m.name = f"{gname}->{target}"
        _add_morphism(cat, m)
    q8 = cat.groups["Q8"]
    qg, labels = q8.quotient(q8.center)
    qobj = _add(cat, finite_pog(qg, range(qg.order), name="Q8/Z"))
    _add_morphism(cat, BlockMorphism(cat.objects["Q8"], qobj, [], labels, name="Q8-center-quot"))
    s3 = cat.groups["S3"]
    cq, cl = s3.quotient(s3.mask([0, 3, 4]))
    sobj = _add(cat, finite_pog(cq, range(cq.order), name="S3/A3"))
    _add_morphism(cat, BlockMorphism(cat.objects["S3"], sobj, [], cl, name="S3-A3-quot"))
    return cat


# ---------------------------------------------------------------- surjections


def _finite_surjections(x: PreorderedGroup, y: PreorderedGroup):
    return fg.all_homs(x.group.finite, y.group.finite, surjective_only=True)


def enumerate_surjections(
    x: PreorderedGroup, y: PreorderedGroup, limit: Optional[int] = None, entry_bound: int = 2
) -> list:
    """Regular epimorphisms x → y by generator-image search, in a fixed order.

    Free parts are searched over integer matrices with entries in
    [-entry_bound, entry_bound]; finite parts over surjective homomorphisms."""
    if not (x.is_block and y.is_block):
        raise UnsupportedError("surjections are enumerated between block objects")
    gx, gy = x.group, y.group
    fmaps = _finite_surjections(x, y)
    if not fmaps:
        return []
    rng = range(-entry_bound, entry_bound + 1)
    if gy.rank == 0:
        mats = [[]]
    elif gx.rank == 0:
        # zero columns; surjective only when the free part of y is all torsion-free relations
        mats = [[[] for _ in range(gy.rank)]]
    else:
        mats = ([list(e[i * gx.rank : (i + 1) * gx.rank]) for i in range(gy.rank)] for e in product(rng, repeat=gx.rank * gy.rank))
    out = []
    for a in mats:
        for f in fmaps:
            try:
                m = BlockMorphism(x, y, a, f)
            except ModelError:
                continue
            if not m.validate().holds:
                continue
            if not m.flags["regular_epi"]:
                continue
            m.name = f"{x.name}->{y.name}#{len(out)}"
            out.append(m)
            if limit is not None and len(out) >= limit:
                return out
    return out


def finite_corpus(max_order: int = 12, limit_per_pair: Optional[int] = None) -> list:
    """Every regular epi between finite catalog objects with domain order ≤ max_order.

    The codomain cone is the image of the domain cone, so each surjection of
    groups and each domain cone variant gives exactly one regular epi."""
    cat = builtin_catalog()
    groups = [(n, g) for n, g in cat.groups.items() if g.order <= max_order]
    out = []
    for gname, g in groups:
        for k, nmask in enumerate(g.normal_subgroups):
            xname = gname if k == len(g.normal_subgroups) - 1 else f"{gname}[{k}]"
            x = cat.objects[xname]
            for hname, h in groups:
                if g.order % h.order:
                    continue
                count = 0
                for f in fg.all_homs(g, h, surjective_only=True):
                    img = h.mask(np.unique(f[nmask]))
                    yname = _variant_name(cat, hname, img)
                    y = cat.objects[yname]
                    m = BlockMorphism(x, y, [], f, name=f"{xname}->{yname}#{count}")
                    out.append(m)
                    count += 1
                    if limit_per_pair is not None and count >= limit_per_pair:
                        break
    return out


def _variant_name(cat: Catalog, gname: str, mask) -> str:
    normals = cat.groups[gname].normal_subgroups
    for k, n in enumerate(normals):
        if np.array_equal(n, mask):
            return gname if k == len(normals) - 1 else f"{gname}[{k}]"
    raise ModelError(f"{gname} has no normal subgroup {np.flatnonzero(mask)}")  # pragma: no cover


def block_corpus(limit_per_pair: Optional[int] = 6) -> list:
    """Regular epis between abelian block catalog objects (ranks ≤ 2) and onto zero."""
    cat = builtin_catalog()
    objs = [o for o in cat.block_objects() if o.group.is_abelian]
    out = []
    for x in objs:
        for y in objs:
            if y.group.rank > x.group.rank:
                continue
            out.extend(enumerate_surjections(x, y, limit=limit_per_pair))
        out.extend(enumerate_surjections(x, cat.objects["zero"], limit=1))
    return out


def regular_epi_corpus(max_order: int = 12, limit_per_pair: Optional[int] = None, block_limit: Optional[int] = 6) -> list:
    return finite_corpus(max_order, limit_per_pair) + block_corpus(block_limit)


# ------------------------------------------------------- admissibility inputs


def admissibility_instances(tag: str = "g", limit: Optional[int] = None, per_base: int = 4) -> Iterator:
    """Pairs (B, φ) with φ a regular epi in the reflective subcategory onto R(B).

    Block bases come first, then finite ones; at most ``per_base`` maps per base."""
    from .category import product as pog_product
    from .reflectors import reflect

    cat = builtin_catalog()
    r = {"gc": "C", "g": "F"}[tag]
    bases = cat.block_objects() + cat.finite_objects(max_order=8)
    count = 0
    for b in bases:
        here = 0
        rb = reflect(b, r).reflected
        sources = [rb]
        sq, _, _ = pog_product(rb, rb, name="RBxRB")
        sources.append(sq)
        for other in (cat.objects["C2"], cat.objects["C2[0]"], cat.objects["ZinZ"], cat.objects["NinZ"]):
            if reflect(other, r).reflected is other:
                p, _, _ = pog_product(rb, other, name=f"RBx{other.name}")
                sources.append(p)
        for src in sources:
            if here >= per_base:
                break
            for phi in enumerate_surjections(src, rb, limit=per_base - here, entry_bound=1):
                yield b, phi
                count += 1
                here += 1
                if limit is not None and count >= limit:
                    return
