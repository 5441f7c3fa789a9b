"""Limits and colimits of preordered groups, and pullback-square verification.

Limits are computed componentwise: the group part is the limit of groups and
the cone is the corresponding limit of the cones (for a pullback, the pairs of
cone elements with equal images).  Cokernels and coequalizers quotient the
group by a normal closure and take the direct image of the cone.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .algebra.finite import direct_product
from .algebra.lattice import Lattice, matvec, preimage, solve_in_span
from .algebra.monoid import FreeCone, canonical_cone
from .carriers import (
    BlockCone,
    BlockGroup,
    BlockMorphism,
    BlockToWord,
    Morphism,
    PreorderedGroup,
    WordToBlock,
)
from .errors import ModelError, UnsupportedError
from .verdict import Fails, Holds, Verdict


def _unit(r, j):
    return tuple(int(i == j) for i in range(r))


def _coords(basis_cols, dim, v):
    c = solve_in_span(basis_cols, dim, v)
    if c is None:
        raise ModelError(f"vector {v} is outside the sublattice")
    return tuple(c)


def _require_block(*objs):
    for o in objs:
        if not o.is_block:
            raise UnsupportedError(f"{o.name or 'object'} is a word object; this construction needs block objects")


# --------------------------------------------------------------------- products


def product(x: PreorderedGroup, y: PreorderedGroup, name: Optional[str] = None):
    """(X × Y, P_X × P_Y) with its two projections."""
    _require_block(x, y)
    gx, gy = x.group, y.group
    rx, ry = gx.rank, gy.rank
    n = rx + ry
    rel = Lattice(n, [tuple(u) + (0,) * ry for u in gx.relations.basis] + [(0,) * rx + tuple(u) for u in gy.relations.basis])
    fin = direct_product(gx.finite, gy.finite)
    g = BlockGroup(n, fin, rel)
    cx, cy = x.cone.free, y.cone.free
    lat = Lattice(n, [tuple(u) + (0,) * ry for u in cx.lattice.basis] + [(0,) * rx + tuple(u) for u in cy.lattice.basis])
    pointed = [tuple(p) + (0,) * ry for p in cx.pointed] + [(0,) * rx + tuple(p) for p in cy.pointed]
    free = FreeCone(n, rel, lat, pointed, tuple(cx.functional) + tuple(cy.functional))
    ny = gy.finite.order
    mask = (x.cone.finite_mask[:, None] & y.cone.finite_mask[None, :]).reshape(-1)
    p = PreorderedGroup(g, BlockCone(free, mask), name or f"{x.name}x{y.name}")
    idx = np.arange(fin.order)
    p1 = BlockMorphism(p, x, [[int(i == j) for j in range(n)] for i in range(rx)], idx // ny, name="pi1")
    p2 = BlockMorphism(p, y, [[int(i + rx == j) for j in range(n)] for i in range(ry)], idx % ny, name="pi2")
    return p, p1, p2


# ------------------------------------------------------------------ subobjects


def subobject(x: PreorderedGroup, lattice: Lattice, finite_mask, name: Optional[str] = None):
    """The subgroup (S, M) of a block object with cone (S, M) ∩ P, and its inclusion."""
    _require_block(x)
    g = x.group
    if not lattice.contains(g.relations):
        raise ModelError("sublattice must contain the relation lattice")
    mask = np.asarray(finite_mask, dtype=bool)
    sub_f, incl = g.finite.subgroup(mask)
    basis = list(lattice.basis)
    k = len(basis)
    rel = Lattice(k, [_coords(basis, g.rank, u) for u in g.relations.basis])
    sg = BlockGroup(k, sub_f, rel)
    free = x.cone.free.intersect_lattice(lattice).change_coordinates(basis, rel)
    cmask = x.cone.finite_mask[incl]
    obj = PreorderedGroup(sg, BlockCone(free, cmask), name)
    matrix = [[basis[j][i] for j in range(k)] for i in range(g.rank)]
    inc = BlockMorphism(obj, x, matrix, incl, name="incl")
    return obj, inc


def equalizer(m1: Morphism, m2: Morphism, name: Optional[str] = None):
    """E = {x : m1(x) = m2(x)} with cone E ∩ P and its inclusion."""
    if not (isinstance(m1, BlockMorphism) and isinstance(m2, BlockMorphism)):
        raise UnsupportedError("equalizers are computed for block morphisms")
    x = m1.domain
    g = x.group
    diff = [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(m1.matrix, m2.matrix)]
    lat = preimage(diff, g.rank, m1.codomain.group.relations) if g.rank else Lattice.zero(0)
    mask = m1.fmap == m2.fmap
    return subobject(x, lat, mask, name or "Eq")


# ------------------------------------------------------------------- pullbacks


@dataclass
class Pullback:
    obj: PreorderedGroup
    p1: Morphism
    p2: Morphism
    basis: list  # K basis in the ambient Z^(rx+ry)
    rx: int
    ry: int
    fin_index: dict  # (a, b) -> index in the pullback finite group
    fin_pairs: np.ndarray

    def coordinates(self, v1, v2) -> tuple:
        return _coords(self.basis, self.rx + self.ry, tuple(v1) + tuple(v2))

    def element(self, x, y):
        """The pullback element with components x and y."""
        return (self.obj.group.relations.reduce(self.coordinates(x[0], y[0])), self.fin_index[(x[1], y[1])])


def pullback(m1: Morphism, m2: Morphism, name: Optional[str] = None) -> Pullback:
    """X ×_Z Y for m1: X → Z and m2: Y → Z."""
    if not (isinstance(m1, BlockMorphism) and isinstance(m2, BlockMorphism)):
        raise UnsupportedError("pullbacks are computed for block morphisms")
    x, y, z = m1.domain, m2.domain, m1.codomain
    if not z.group.same_as(m2.codomain.group):
        raise ModelError("pullback legs need a common codomain")
    gx, gy = x.group, y.group
    rx, ry = gx.rank, gy.rank
    n = rx + ry
    rz = z.group.rank
    joint = [list(m1.matrix[i]) + [-a for a in m2.matrix[i]] for i in range(rz)]
    if n == 0:
        klat = Lattice.zero(0)
    elif rz == 0:
        klat = Lattice.full(n)
    else:
        klat = preimage(joint, n, z.group.relations)
    basis = list(klat.basis)
    k = len(basis)
    amb_rel = Lattice(n, [tuple(u) + (0,) * ry for u in gx.relations.basis] + [(0,) * rx + tuple(u) for u in gy.relations.basis])
    rel = Lattice(k, [_coords(basis, n, u) for u in amb_rel.basis])
    # finite part
    ny = gy.finite.order
    prod_f = direct_product(gx.finite, gy.finite)
    a_idx = np.arange(prod_f.order) // ny
    b_idx = np.arange(prod_f.order) % ny
    fmask = m1.fmap[a_idx] == m2.fmap[b_idx]
    fin, incl = prod_f.subgroup(fmask)
    pairs = np.stack([incl // ny, incl % ny], axis=1)
    fin_index = {(int(a), int(b)): i for i, (a, b) in enumerate(pairs)}
    grp = BlockGroup(k, fin, rel)
    # cone: pairs of cone members, i.e. (P_X × P_Y) ∩ K
    cx, cy = x.cone.free, y.cone.free
    lat = Lattice(n, [tuple(u) + (0,) * ry for u in cx.lattice.basis] + [(0,) * rx + tuple(u) for u in cy.lattice.basis])
    pointed = [tuple(p) + (0,) * ry for p in cx.pointed] + [(0,) * rx + tuple(p) for p in cy.pointed]
    amb = FreeCone(n, amb_rel, lat, pointed, tuple(cx.functional) + tuple(cy.functional))
    free = amb.intersect_lattice(klat).change_coordinates(basis, rel) if n else FreeCone(0, rel, rel, (), ())
    cmask = x.cone.finite_mask[pairs[:, 0]] & y.cone.finite_mask[pairs[:, 1]]
    obj = PreorderedGroup(grp, BlockCone(free, cmask), name or "PB")
    p1m = [[basis[j][i] for j in range(k)] for i in range(rx)]
    p2m = [[basis[j][rx + i] for j in range(k)] for i in range(ry)]
    p1 = BlockMorphism(obj, x, p1m, pairs[:, 0], name="p1")
    p2 = BlockMorphism(obj, y, p2m, pairs[:, 1], name="p2")
    return Pullback(obj, p1, p2, basis, rx, ry, fin_index, pairs)


def kernel_pair(m: Morphism) -> Pullback:
    # morphisms are immutable, so the kernel pair is computed once per morphism
    pb = m.__dict__.get("_kernel_pair")
    if pb is None:
        pb = m.__dict__["_kernel_pair"] = pullback(m, m, name="Eq")
    return pb


def kernel(m: Morphism):
    """The kernel of m as a normal subobject of its domain."""
    from .normlattice import NormalSubobject

    if not isinstance(m, BlockMorphism):
        raise UnsupportedError("kernels are computed for block morphisms")
    return NormalSubobject(m.domain, m.kernel_lattice, m.fmap == 0)


# --------------------------------------------------------------------- colimits


def _quotient(y: PreorderedGroup, extra_rel, finite_gens, name):
    g = y.group
    rel = g.relations + Lattice(g.rank, list(extra_rel))
    ncl = g.finite.normal_closure(g.finite.mask(list(finite_gens) + [0]))
    fq, labels = g.finite.quotient(ncl)
    qg = BlockGroup(g.rank, fq, rel)
    c = y.cone.free
    free = canonical_cone(g.rank, rel, list(c.lattice.basis), list(c.pointed))
    mask = np.zeros(fq.order, dtype=bool)
    mask[np.unique(labels[y.cone.finite_mask])] = True
    q = PreorderedGroup(qg, BlockCone(free, mask), name)
    ident = [[int(i == j) for j in range(g.rank)] for i in range(g.rank)]
    return BlockMorphism(y, q, ident, labels, name="q")


def cokernel(m: Morphism, name: Optional[str] = None) -> Morphism:
    """The quotient of the codomain by the normal closure of the image, with cone q(P)."""
    if isinstance(m, BlockMorphism):
        x = m.domain
        img = [matvec(m.matrix, _unit(x.group.rank, j)) for j in range(x.group.rank)]
        return _quotient(m.codomain, img, np.unique(m.fmap), name or "Coker")
    if isinstance(m, BlockToWord):
        return _word_cokernel(m, name or "Coker")
    raise UnsupportedError(f"cokernel of a {m.kind} morphism")


def coequalizer(m1: Morphism, m2: Morphism, name: Optional[str] = None) -> Morphism:
    if not (isinstance(m1, BlockMorphism) and isinstance(m2, BlockMorphism)):
        raise UnsupportedError("coequalizers are computed for block morphisms")
    x = m1.domain
    r = x.group.rank
    rel = [tuple(a - b for a, b in zip(matvec(m1.matrix, _unit(r, j)), matvec(m2.matrix, _unit(r, j)))) for j in range(r)]
    f2 = m1.codomain.group.finite
    gens = [f2.op(int(a), f2.inv(int(b))) for a, b in zip(m1.fmap, m2.fmap)]
    return _quotient(m1.codomain, rel, gens, name or "Coeq")


def _word_cokernel(m: BlockToWord, name: str) -> Morphism:
    """Quotient of a word group by the normal closure of an image containing the derived subgroup."""
    h = m.codomain.group
    h.require_certificate()
    # every generator commutator must lie in the image subgroup (searched in a box)
    r = m.domain.group.rank
    from itertools import product as iproduct

    reach = {}
    for c in iproduct(range(-h.bound, h.bound + 1), repeat=r):
        reach.setdefault(m.apply((c, 0)), c)
    for i, j, cm in h.generator_commutators:
        if cm not in reach:
            raise UnsupportedError(
                f"commutator of generators {h.names[i]},{h.names[j]} not found in the image; "
                "only abelian quotients of word groups are supported"
            )
    k = len(h.gens)
    rel = Lattice(k, [h.ab_coords(img) for img in m.images])
    qg = BlockGroup(k, None, rel)
    free = canonical_cone(k, rel, [], [h.ab_coords(c) for c in m.codomain.cone.gens])
    q = PreorderedGroup(qg, BlockCone(free, np.ones(1, dtype=bool)), name)
    return WordToBlock(m.codomain, q, [_unit(k, j) for j in range(k)], name="q")


# --------------------------------------------------------------- squares


@dataclass
class PogSquare:
    """A commutative square P --p1--> X --f--> Z, P --p2--> Y --g--> Z."""

    p1: Morphism
    p2: Morphism
    f: Morphism
    g: Morphism

    @property
    def corner(self):
        return self.p1.domain


def _group_generators(p: PreorderedGroup):
    if p.is_block:
        g = p.group
        zero = tuple([0] * g.rank)
        gens = [(g.relations.reduce(_unit(g.rank, j)), 0) for j in range(g.rank)]
        gens += [(zero, int(a)) for a in g.finite.generators]
        return gens
    return list(p.group.gens)


def check_commutes(sq: PogSquare):
    for x in _group_generators(sq.corner) + sq.corner.cone_generators():
        a = sq.f.apply(sq.p1.apply(x))
        b = sq.g.apply(sq.p2.apply(x))
        if a != b:
            raise ModelError(f"square does not commute at generator {sq.corner.format(x)}")


def comparison(sq: PogSquare, pb: Optional[Pullback] = None):
    """The canonical pullback of the cospan and the comparison morphism from the corner."""
    pb = pb or pullback(sq.f, sq.g)
    p = sq.corner
    if isinstance(sq.p1, BlockMorphism) and isinstance(sq.p2, BlockMorphism):
        r = p.group.rank
        cols = [pb.coordinates(sq.p1.apply_vec(_unit(r, j)), sq.p2.apply_vec(_unit(r, j))) for j in range(r)]
        k = pb.obj.group.rank
        matrix = [[cols[j][i] for j in range(r)] for i in range(k)]
        fmap = [pb.fin_index[(int(a), int(b))] for a, b in zip(sq.p1.fmap, sq.p2.fmap)]
        return pb, BlockMorphism(p, pb.obj, matrix, fmap, name="cmp")
    if isinstance(sq.p1, WordToBlock) and isinstance(sq.p2, WordToBlock):
        if pb.obj.group.finite.order != 1:
            raise UnsupportedError("word comparison into a pullback with finite part")
        imgs = [pb.coordinates(a, b) for a, b in zip(sq.p1.images, sq.p2.images)]
        return pb, WordToBlock(p, pb.obj, imgs, name="cmp")
    raise UnsupportedError("pullback test for this combination of backends")


def is_pullback_square(sq: PogSquare, check: bool = True) -> Verdict:
    """Decide whether the corner of a commuting square is (canonically) the pullback."""
    if check:
        check_commutes(sq)
    pb, c = comparison(sq)
    p = sq.corner
    if isinstance(c, BlockMorphism):
        dom = p.group
        ker = c.kernel_lattice
        for u in ker.basis:
            if not dom.relations.member(u):
                return Fails(("not-injective", p.format((dom.relations.reduce(u), 0))), "comparison is not injective")
        if len(np.unique(c.fmap)) != dom.finite.order:
            vals, first = np.unique(c.fmap, return_index=True)
            dup = next(i for i in range(dom.finite.order) if i not in set(first.tolist()))
            other = int(first[list(vals).index(c.fmap[dup])])
            x = p.group.sub((tuple([0] * dom.rank), dup), (tuple([0] * dom.rank), other))
            return Fails(("not-injective", p.format(x)), "comparison is not injective on the finite part")
    else:
        h = p.group
        for i, j, cm in h.generator_commutators:
            if not h.is_identity(cm):
                return Fails(("not-injective", h.format(cm)), "comparison kills a commutator")
        if c.kernel_ab_lattice.basis:
            x = h.from_coords(c.kernel_ab_lattice.basis[0])
            return Fails(("not-injective", h.format(x)), "comparison is not injective")
    if not c.flags["epi"]:
        tgt = pb.obj.group
        img = c.image_lattice if isinstance(c, BlockMorphism) else tgt.relations + Lattice(tgt.rank, list(c.images))
        for j in range(tgt.rank):
            e = _unit(tgt.rank, j)
            if not img.member(e):
                return Fails(("not-surjective", pb.obj.format((tgt.relations.reduce(e), 0))), "comparison is not surjective")
        hit = set(np.unique(c.fmap).tolist()) if isinstance(c, BlockMorphism) else {0}
        miss = next(a for a in range(tgt.finite.order) if a not in hit)
        return Fails(("not-surjective", pb.obj.format((tuple([0] * tgt.rank), miss))), "comparison is not surjective on the finite part")
    img = c.image_cone
    for y in pb.obj.cone_generators():
        if not img.member(y):
            return Fails(("cone-not-surjective", pb.obj.format(y)), "a pullback cone element has no preimage in the corner cone")
    return Holds(("pullback", pb.obj.group.rank, pb.obj.group.finite.order))
