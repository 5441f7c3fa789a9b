"""Preordered groups and their morphisms across the three backends."""

from __future__ import annotations

from functools import cached_property
from typing import Optional

import numpy as np

from ..algebra.lattice import Lattice, matvec, preimage
from ..algebra.monoid import canonical_cone
from ..errors import ModelError, UnsupportedError
from ..verdict import Fails, Holds, Verdict, conjoin
from .block import BlockCone, BlockGroup, validate_block_cone
from .word import validate_word_cone


class PreorderedGroup:
    """A group with a positive cone."""

    def __init__(self, group, cone, name: Optional[str] = None):
        if isinstance(group, BlockGroup) != isinstance(cone, BlockCone):
            raise ModelError("cone backend does not match the group backend")
        self.group = group
        self.cone = cone
        self.name = name

    def __repr__(self):
        return f"PreorderedGroup({self.name or '?'}, {self.group!r})"

    @property
    def backend(self) -> str:
        return self.group.backend

    @property
    def is_block(self) -> bool:
        return isinstance(self.group, BlockGroup)

    def member(self, x) -> Verdict:
        return cone_member(self, x)

    def in_cone(self, x) -> bool:
        """Exact membership for block objects."""
        if not self.is_block:
            raise UnsupportedError("exact membership is only available for block cones")
        return self.cone.member(x)

    def cone_generators(self) -> list:
        if self.is_block:
            return self.cone.generators(self.group)
        return list(self.cone.gens)

    def format(self, x) -> str:
        return self.group.format(x)


def cone_validate(p: PreorderedGroup) -> Verdict:
    if p.is_block:
        return validate_block_cone(p.cone, p.group)
    return validate_word_cone(p.cone, p.group)


def cone_member(p: PreorderedGroup, x) -> Verdict:
    if p.is_block:
        cert = p.cone.member_certificate(x)
        if cert is None:
            return Fails(x, "not in the cone")
        return Holds(cert)
    return p.cone.member(x)


# ------------------------------------------------------------------ morphisms


class Morphism:
    domain: PreorderedGroup
    codomain: PreorderedGroup
    name: Optional[str] = None
    kind = "abstract"

    def __call__(self, x):
        return self.apply(x)

    def classify(self) -> dict:
        return self.flags

    @property
    def is_regular_epi(self) -> bool:
        return self.flags["regular_epi"] is True


class BlockMorphism(Morphism):
    """(v, g) ↦ (A v, φ(g)) between block objects."""

    kind = "block"

    def __init__(self, domain: PreorderedGroup, codomain: PreorderedGroup, matrix=None, fmap=None, name=None):
        if not (domain.is_block and codomain.is_block):
            raise ModelError("block morphisms need block domain and codomain")
        self.domain, self.codomain, self.name = domain, codomain, name
        r, r2 = domain.group.rank, codomain.group.rank
        if matrix is None:
            matrix = [[0] * r for _ in range(r2)]
        self.matrix = tuple(tuple(int(x) for x in row) for row in matrix)
        if len(self.matrix) != r2 or any(len(row) != r for row in self.matrix):
            raise ModelError(f"matrix must be {r2}x{r}")
        nf = domain.group.finite.order
        if fmap is None:
            fmap = [0] * nf
        self.fmap = np.array(fmap, dtype=np.int64)
        if self.fmap.shape != (nf,):
            raise ModelError(f"finite map must have length {nf}")
        if (self.fmap < 0).any() or (self.fmap >= codomain.group.finite.order).any():
            raise ModelError("finite map value out of range")
        self.fmap.setflags(write=False)

    def __repr__(self):
        return f"BlockMorphism({self.name or '?'}: {list(self.matrix)}, {list(self.fmap)})"

    def apply_vec(self, v) -> tuple:
        r2 = self.codomain.group.rank
        if r2 == 0:
            return ()
        return self.codomain.group.relations.reduce(matvec(self.matrix, v) if v else (0,) * r2)

    def apply(self, x):
        return (self.apply_vec(x[0]), int(self.fmap[x[1]]))

    def validate(self) -> Verdict:
        dom, cod = self.domain.group, self.codomain.group
        for u in dom.relations.basis:
            if not cod.relations.member(matvec(self.matrix, u)):
                return Fails(("relations", u), f"relation {u} is not sent to a relation")
        bad = dom.finite.hom_violation(cod.finite, self.fmap)
        if bad is not None:
            return Fails(("homomorphism", bad), f"finite map breaks the homomorphism law at {bad}")
        for x in self.domain.cone_generators():
            y = self.apply(x)
            if not self.codomain.cone.member(y):
                return Fails(
                    ("cone", dom.format(x), cod.format(y)),
                    f"cone generator {dom.format(x)} maps to {cod.format(y)} outside the codomain cone",
                )
        return Holds(("morphism", len(self.domain.cone_generators())))

    # classification -----------------------------------------------------------

    @cached_property
    def kernel_lattice(self) -> Lattice:
        """{v : A v ∈ Λ'} (contains Λ)."""
        return preimage(self.matrix, self.domain.group.rank, self.codomain.group.relations)

    @cached_property
    def image_lattice(self) -> Lattice:
        cod = self.codomain.group
        return cod.relations + Lattice(cod.rank, [matvec(self.matrix, e) for e in _unit_vectors(self.domain.group.rank)])

    @cached_property
    def image_cone(self) -> BlockCone:
        """Direct image f(P) as a cone description (a submonoid of the codomain)."""
        free = self.domain.cone.free.image(self.matrix, self.codomain.group.rank, self.codomain.group.relations)
        mask = np.zeros(self.codomain.group.finite.order, dtype=bool)
        mask[np.unique(self.fmap[self.domain.cone.finite_mask])] = True
        return BlockCone(free, mask)

    @cached_property
    def flags(self) -> dict:
        dom, cod = self.domain.group, self.codomain.group
        mono = dom.relations.contains(self.kernel_lattice) and len(np.unique(self.fmap)) == dom.finite.order
        epi = self.image_lattice.is_full() and self.image_lattice.index() == 1 and len(np.unique(self.fmap)) == cod.finite.order
        if cod.rank == 0:
            epi = len(np.unique(self.fmap)) == cod.finite.order
        reg = epi and self.image_cone.contains(self.codomain.cone)
        return {"mono": bool(mono), "epi": bool(epi), "regular_epi": bool(reg)}

    def cone_surjectivity_witness(self):
        """A codomain cone generator outside f(P), or None."""
        img = self.image_cone
        for y in self.codomain.cone_generators():
            if not img.member(y):
                return y
        return None


class WordToBlock(Morphism):
    """Homomorphism from a word group to a block group with trivial finite part.

    Given by generator images; it factors through the abelianization, which is
    known exactly under the unitriangular certificate."""

    kind = "word-block"

    def __init__(self, domain: PreorderedGroup, codomain: PreorderedGroup, images, name=None):
        if domain.is_block or not codomain.is_block:
            raise ModelError("word-to-block morphisms need a word domain and a block codomain")
        if codomain.group.finite.order != 1:
            raise UnsupportedError("word-to-block morphisms need a codomain with trivial finite part")
        domain.group.require_certificate()
        self.domain, self.codomain, self.name = domain, codomain, name
        r2 = codomain.group.rank
        self.images = tuple(tuple(int(x) for x in v) for v in images)
        if len(self.images) != len(domain.group.gens) or any(len(v) != r2 for v in self.images):
            raise ModelError("one image vector of the codomain rank per generator")
        # ab-level matrix: columns are generator images
        self.matrix = tuple(tuple(v[i] for v in self.images) for i in range(r2))

    def __repr__(self):
        return f"WordToBlock({self.name or '?'}: {list(self.images)})"

    def apply_vec(self, coords) -> tuple:
        r2 = self.codomain.group.rank
        v = tuple(sum(c * img[i] for c, img in zip(coords, self.images)) for i in range(r2))
        return self.codomain.group.relations.reduce(v)

    def apply(self, x):
        return (self.apply_vec(self.domain.group.ab_coords(x)), 0)

    def validate(self) -> Verdict:
        # any assignment into an abelian group extends uniquely through ab(G) ≅ Z^k
        dom = self.domain.group
        for c in self.domain.cone.gens:
            y = self.apply(c)
            if not self.codomain.cone.member(y):
                return Fails(("cone", dom.format(c), self.codomain.format(y)), "cone generator leaves the codomain cone")
        return Holds(("morphism", "abelianization-certificate"))

    @cached_property
    def kernel_ab_lattice(self) -> Lattice:
        return preimage(self.matrix, len(self.images), self.codomain.group.relations)

    @cached_property
    def image_cone(self) -> BlockCone:
        cod = self.codomain.group
        free = canonical_cone(cod.rank, cod.relations, [], [self.apply(c)[0] for c in self.domain.cone.gens])
        return BlockCone(free, cod.finite.mask([0]))

    @cached_property
    def flags(self) -> dict:
        dom, cod = self.domain.group, self.codomain.group
        mono = dom.is_abelian and not self.kernel_ab_lattice.basis
        img = cod.relations + Lattice(cod.rank, list(self.images))
        epi = img.index() == 1
        reg = epi and self.image_cone.contains(self.codomain.cone)
        return {"mono": bool(mono), "epi": bool(epi), "regular_epi": bool(reg)}


class BlockToWord(Morphism):
    """Homomorphism from a free block object (trivial finite part) into a word group."""

    kind = "block-word"

    def __init__(self, domain: PreorderedGroup, codomain: PreorderedGroup, images, name=None):
        if not domain.is_block or codomain.is_block:
            raise ModelError("block-to-word morphisms need a block domain and a word codomain")
        if domain.group.finite.order != 1:
            raise UnsupportedError("block-to-word morphisms need a domain with trivial finite part")
        self.domain, self.codomain, self.name = domain, codomain, name
        self.images = tuple(tuple(tuple(int(x) for x in r) for r in m) for m in images)
        if len(self.images) != domain.group.rank:
            raise ModelError("one image element per free coordinate")

    def __repr__(self):
        return f"BlockToWord({self.name or '?'})"

    def apply(self, x):
        g = self.codomain.group
        out = g.identity
        for m, k in zip(self.images, x[0]):
            base = m if k >= 0 else g.neg(m)
            for _ in range(abs(k)):
                out = g.op(out, base)
        return out

    def validate(self) -> Verdict:
        g = self.codomain.group
        for i, a in enumerate(self.images):
            for j, b in enumerate(self.images[i + 1 :], i + 1):
                if g.op(a, b) != g.op(b, a):
                    return Fails(("homomorphism", i, j), "images of free generators do not commute")
        for u in self.domain.group.relations.basis:
            if not g.is_identity(self.apply((u, 0))):
                return Fails(("relations", u), f"relation {u} is not sent to the identity")
        parts = []
        for x in self.domain.cone_generators():
            v = self.codomain.cone.member(self.apply(x))
            if v.fails:
                return Fails(("cone", self.domain.format(x), g.format(self.apply(x))), "cone generator leaves the codomain cone")
            parts.append(v)
        return conjoin(*parts) if parts else Holds(("morphism",))

    @cached_property
    def flags(self) -> dict:
        g = self.codomain.group
        mono = None
        for x in self.domain.group.box(g.bound):
            if not self.domain.group.is_identity(x) and g.is_identity(self.apply(x)):
                mono = False
                break
        epi = None
        if g.has_certificate:
            img = Lattice(len(g.gens), [g.ab_coords(m) for m in self.images])
            if img.index() != 1:
                epi = False
        reg = False if epi is False else None
        return {"mono": mono, "epi": epi, "regular_epi": reg}


def _unit_vectors(r):
    return [tuple(int(i == j) for i in range(r)) for j in range(r)]


def morphism_validate(m: Morphism) -> Verdict:
    return m.validate()


def classify_morphism(m: Morphism) -> dict:
    return dict(m.flags)


def identity_morphism(p: PreorderedGroup, name: Optional[str] = None) -> Morphism:
    if not p.is_block:
        raise UnsupportedError("identity on a word object is not materialised")
    r = p.group.rank
    return BlockMorphism(p, p, [[int(i == j) for j in range(r)] for i in range(r)], np.arange(p.group.finite.order), name=name or "id")


def zero_morphism(dom: PreorderedGroup, cod: PreorderedGroup) -> BlockMorphism:
    return BlockMorphism(dom, cod, None, None, name="0")


def compose(second: Morphism, first: Morphism, name: Optional[str] = None) -> Morphism:
    """second ∘ first."""
    if first.codomain is not second.domain and not (
        first.codomain.group.same_as(second.domain.group)
    ):
        raise ModelError("morphisms are not composable")
    if isinstance(first, BlockMorphism) and isinstance(second, BlockMorphism):
        a1, a2 = first.matrix, second.matrix
        r = first.domain.group.rank
        prod = [[sum(a2[i][k] * a1[k][j] for k in range(len(a1))) for j in range(r)] for i in range(len(a2))]
        return BlockMorphism(first.domain, second.codomain, prod, second.fmap[first.fmap], name=name)
    if isinstance(first, WordToBlock) and isinstance(second, BlockMorphism):
        imgs = [second.apply_vec(v) for v in first.images]
        if second.codomain.group.finite.order != 1:
            raise UnsupportedError("composite would need a nontrivial finite codomain part")
        return WordToBlock(first.domain, second.codomain, imgs, name=name)
    raise UnsupportedError(f"composition of {first.kind} then {second.kind} is not supported")
