"""Decision procedures for classes of extensions of preordered groups.

Three Galois structures are supported, named by short tags:

``gc``  reflection C onto preordered abelian groups,
``g``   reflection F onto abelian groups with a subgroup as cone,
``grp`` group completion of cones (monoid level, abelian ambients only).

Every procedure returns a :class:`~preordgrp.verdict.Verdict`.  Block and
finite inputs are decided exactly.  Word inputs are explored inside the word
ball; a defect that rests on a non-membership is definite only when the cone
carries a registered exact predicate.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .algebra.lattice import Lattice, solve_in_span
from .carriers import (
    BlockMorphism,
    Morphism,
    PreorderedGroup,
    WordToBlock,
)
from .category import PogSquare, is_pullback_square, kernel_pair, pullback
from .errors import ModelError, PreconditionError, UnsupportedError
from .kernels import shs_violation, star_violation
from .reflectors import group_completion_in, reflect, reflect_morphism
from .verdict import Fails, Holds, Unknown, Verdict, conjoin

TAGS = {"gc": "C", "g": "F", "grp": "grp"}
TAG_ALIASES = {"gamma_c": "gc", "gammac": "gc", "C": "gc", "gamma": "g", "F": "g", "gammagrp": "grp"}


def normalize_tag(tag: str) -> str:
    t = TAG_ALIASES.get(tag, tag)
    if t not in TAGS:
        raise ModelError(f"unknown Galois structure {tag!r}; use one of {sorted(TAGS)}")
    return t


def require_regular_epi(m: Morphism):
    flag = m.flags["regular_epi"]
    if flag is None:
        raise UnsupportedError("regular-epi status of this morphism is not decidable here")
    if not flag:
        raise PreconditionError(f"{m.name or 'morphism'} is not a regular epimorphism")


def _zero(g):
    return tuple([0] * g.rank)


def _word_cone_pairs(m: WordToBlock):
    """Cone ball elements of the word domain grouped by their image."""
    x = m.domain
    out = {}
    for a in x.cone.ball():
        out.setdefault(m.apply(a), []).append(a)
    return out


# ----------------------------------------------------------- Condition (⋆)


def condition_star(m: Morphism) -> Verdict:
    """For cone elements a, b, c with η(a) = η(b) and m(b) = m(c): a - b + c ∈ P."""
    require_regular_epi(m)
    x = m.domain
    if isinstance(m, BlockMorphism):
        f = x.group.finite
        _, eta = f.quotient(f.commutator_subgroup)
        a, b, c = star_violation(f.table, f.inverse, x.cone.finite_mask, eta, m.fmap)
        if a >= 0:
            z = _zero(x.group)
            return Fails(tuple(x.format((z, i)) for i in (a, b, c)), "a - b + c leaves the cone")
        return Holds(("star", "finite-scan", f.order))
    if isinstance(m, WordToBlock):
        h = x.group
        ball = x.cone.ball()
        by_ab, by_f = {}, {}
        for a in ball:
            by_ab.setdefault(h.ab_coords(a), []).append(a)
            by_f.setdefault(m.apply(a), []).append(a)
        unknown = None
        for a in ball:
            for b in by_ab[h.ab_coords(a)]:
                ab = h.sub(a, b)
                for c in by_f[m.apply(b)]:
                    v = x.cone.member(h.op(ab, c))
                    if v.fails:
                        return Fails(tuple(h.format(t) for t in (a, b, c)), "a - b + c leaves the cone", bound=h.bound)
                    if v.unknown and unknown is None:
                        unknown = tuple(h.format(t) for t in (a, b, c))
        if unknown is not None:
            return Unknown(h.bound, "a - b + c not reached in the cone ball", witness=unknown)
        return Unknown(h.bound, "no violating triple inside the word ball")
    raise UnsupportedError(f"condition (*) for a {m.kind} morphism")


# ------------------------------------------------------ special homogeneous


def _difference_lattice(m: BlockMorphism) -> Lattice:
    """gp(C) ∩ A^{-1}(Λ') for the free cone C of the domain."""
    x = m.domain
    gp = group_completion_in(x).lattice if x.group.is_abelian else x.group.relations + Lattice(
        x.group.rank, list(x.cone.free.lattice.basis) + list(x.cone.free.pointed)
    )
    return gp.intersect(m.kernel_lattice)


def _split_difference(x: PreorderedGroup, b):
    """Cone elements p, q with b = p - q."""
    c = x.cone.free
    r = x.group.rank
    cols = list(c.lattice.basis) + list(c.pointed)
    coef = solve_in_span(cols, r, b)
    if coef is None:  # pragma: no cover - b lies in gp(C) by construction
        raise AssertionError("difference vector outside the group completion")
    nl = len(c.lattice.basis)
    p = [0] * r
    q = [0] * r
    for k, (col, t) in enumerate(zip(cols, coef)):
        if k < nl:
            p = [u + t * v for u, v in zip(p, col)]
        elif t > 0:
            p = [u + t * v for u, v in zip(p, col)]
        elif t < 0:
            q = [u - t * v for u, v in zip(q, col)]
    rel = x.group.relations
    return rel.reduce(p), rel.reduce(q)


def is_special_homogeneous(m: Morphism) -> Verdict:
    """For cone elements x, y with m(x) = m(y): y - x ∈ P and -x + y ∈ P."""
    require_regular_epi(m)
    x = m.domain
    if isinstance(m, BlockMorphism):
        g = x.group
        f = g.finite
        i, j = shs_violation(f.table, f.inverse, x.cone.finite_mask, m.fmap)
        if i >= 0:
            z = _zero(g)
            return Fails((x.format((z, i)), x.format((z, j))), "a difference of equal-image cone elements leaves the cone")
        if g.rank:
            d = _difference_lattice(m)
            c = x.cone.free
            for b in d.basis:
                if c.lattice.member(b):
                    continue
                p, q = _split_difference(x, b)
                neg = tuple(-v for v in b)
                pair = (p, q) if not c.member(neg) else (q, p)
                return Fails(tuple(x.format((v, 0)) for v in pair), "a difference of equal-image cone elements leaves the cone")
        return Holds(("shs", "lattice-criterion" if g.rank else "finite-scan"))
    if isinstance(m, WordToBlock):
        h = x.group
        groups = _word_cone_pairs(m)
        unknown = None
        for yy in x.cone.ball():
            for xx in groups[m.apply(yy)]:
                for d in (h.sub(yy, xx), h.op(h.neg(xx), yy)):
                    v = x.cone.member(d)
                    if v.fails:
                        return Fails((h.format(xx), h.format(yy)), "a difference of equal-image cone elements leaves the cone", bound=h.bound)
                    if v.unknown and unknown is None:
                        unknown = (h.format(xx), h.format(yy))
        if unknown is not None:
            return Unknown(h.bound, "difference not reached in the cone ball", witness=unknown)
        return Unknown(h.bound, "no violating pair inside the word ball")
    raise UnsupportedError(f"special homogeneity of a {m.kind} morphism")


# ----------------------------------------------------- homogeneous split epi


def homogeneous_split_epi_check(p: BlockMorphism, s: BlockMorphism, bound: Optional[int] = None) -> Verdict:
    """μ_y(x) = x + s(y) and ν_y(x) = s(y) + x are bijections from Ker p ∩ P
    onto the fibre of y, for every cone element y in the box of radius ``bound``."""
    if not (isinstance(p, BlockMorphism) and isinstance(s, BlockMorphism)):
        raise UnsupportedError("split epi check needs block morphisms")
    x, y = p.domain, p.codomain
    gx, gy = x.group, y.group
    for e in _unit_elements(gy):
        if p.apply(s.apply(e)) != e:
            raise PreconditionError("s is not a section of p")
    exact = gx.rank == 0
    if not exact and bound is None:
        raise PreconditionError("fibres are unbounded; pass a bound")
    b = 0 if exact else int(bound)
    xs = [u for u in gx.box(b) if x.in_cone(u)]
    fibres = {}
    for u in xs:
        fibres.setdefault(p.apply(u), []).append(u)
    kernel_cone = set(fibres.get(gy.identity, []))
    for yy in gy.box(b) if gy.rank else gy.box(0):
        if not y.in_cone(yy):
            continue
        sy = s.apply(yy)
        images_mu, images_nu = set(), set()
        for k in kernel_cone:
            images_mu.add(gx.op(k, sy))
            images_nu.add(gx.op(sy, k))
        for w in fibres.get(yy, []):
            for label, d in (("mu", gx.sub(w, sy)), ("nu", gx.op(gx.neg(sy), w))):
                if not (x.in_cone(d) and p.apply(d) == gy.identity):
                    return Fails((label, y.format(yy), x.format(w)), f"fibre element not reached by {label}")
        if len(images_mu) != len(kernel_cone) or len(images_nu) != len(kernel_cone):  # pragma: no cover
            return Fails(("injective", y.format(yy)), "translation is not injective")
    if exact:
        return Holds(("homogeneous", "exhaustive"))
    return Unknown(b, "no violation inside the box")


def _unit_elements(g):
    z = _zero(g)
    out = [(g.relations.reduce(tuple(int(i == j) for i in range(g.rank))), 0) for j in range(g.rank)]
    return out + [(z, a) for a in range(g.finite.order)]


def kernel_pair_split_epi(m: BlockMorphism):
    """(π1, Δ) for the kernel pair of m."""
    pb = kernel_pair(m)
    x = m.domain
    r = x.group.rank
    cols = [pb.coordinates(u, u) for u in (tuple(int(i == j) for i in range(r)) for j in range(r))]
    k = pb.obj.group.rank
    matrix = [[cols[j][i] for j in range(r)] for i in range(k)]
    fmap = [pb.fin_index[(a, a)] for a in range(x.group.finite.order)]
    delta = BlockMorphism(x, pb.obj, matrix, fmap, name="diag")
    return pb, pb.p1, delta


# ------------------------------------------------------------- Γ_grp trivial


def gammagrp_trivial_check(m: BlockMorphism) -> Verdict:
    """Whether the cone surjection of m is a trivial extension for group completion:
    gp(P_X) ∩ m^{-1}(P_Y) ⊆ P_X."""
    if not isinstance(m, BlockMorphism):
        raise UnsupportedError("group-completion structure is computed for block morphisms")
    x, y = m.domain, m.codomain
    if not (x.group.is_abelian and y.group.is_abelian):
        raise UnsupportedError("group-completion structure needs abelian ambients")
    if not m.image_cone.contains(y.cone):
        raise PreconditionError("cone map is not surjective")
    gx = x.group
    s = group_completion_in(x)
    basis = list(s.lattice.basis)
    # generators of T = {g ∈ gp(P_X) : m(g) ∈ P_Y}: kernel of m on gp, then lifts
    ker = s.lattice.intersect(m.kernel_lattice)
    image = Lattice(y.group.rank, [m.apply_vec(u) for u in basis]) + y.group.relations
    lifted = []
    for q in y.cone.free.intersect_lattice(image).monoid_generators():
        coef = solve_in_span([m.apply_vec(u) for u in basis] + list(y.group.relations.basis), y.group.rank, q)
        v = [0] * gx.rank
        for t, u in zip(coef, basis):
            v = [a + t * c for a, c in zip(v, u)]
        lifted.append(gx.relations.reduce(v))
    free = x.cone.free
    for v in list(ker.basis) + [tuple(-a for a in u) for u in ker.basis] + lifted:
        if not free.member(v):
            return Fails(x.format((gx.relations.reduce(v), 0)), "element of gp(P) over a cone element lies outside the cone")
    return Holds(("grp-trivial", len(ker.basis), len(lifted)))


# ------------------------------------------------------ trivial extensions


def naturality_square(m: Morphism, r: str) -> PogSquare:
    """X --η_X--> R(X) --R(m)--> R(Y) and X --m--> Y --η_Y--> R(Y)."""
    rx, ry = reflect(m.domain, r), reflect(m.codomain, r)
    return PogSquare(rx.unit, m, reflect_morphism(m, r), ry.unit)


def _square_trivial(m: Morphism, r: str) -> Verdict:
    return is_pullback_square(naturality_square(m, r))


def is_trivial_extension(m: Morphism, tag: str = "gc", cross_check: bool = True) -> Verdict:
    tag = normalize_tag(tag)
    if tag == "grp":
        return gammagrp_trivial_check(m)
    require_regular_epi(m)
    v = _square_trivial(m, TAGS[tag])
    if tag == "g" and cross_check:
        c = _square_trivial(m, "C")
        a = _square_trivial(reflect_morphism(m, "C"), "A") if c.holds else None
        parts = c.holds and a.holds
        if parts != v.holds:
            raise AssertionError("F-trivial disagrees with the C-then-A decomposition")
        v = Verdict(v.status, v.certificate, v.witness, v.bound, v.reason, {**v.details, "decomposition": (c.status, a.status if a is not None else None)})
    return v


# ------------------------------------------------------- normal extensions


def _word_kernel_normal_gens(m: WordToBlock):
    h = m.domain.group
    out = [cm for _, _, cm in h.generator_commutators]
    out += [h.from_coords(b) for b in m.kernel_ab_lattice.basis]
    return out


def _noncentral(h, elems):
    for n in elems:
        for gi, g in enumerate(h.gens):
            if h.op(g, n) != h.op(n, g):
                return n, gi
    return None


def _word_normal_gc(m: WordToBlock) -> Verdict:
    """Trivial-extension test for the first kernel-pair projection of a word morphism.

    With central kernel K the kernel pair is {(p, pc) : c ∈ K} and its derived
    subgroup is the diagonal of [H, H].  The comparison with the pullback is
    then injective, and its cone part is surjective iff q - p + h ∈ P whenever
    p, q, h ∈ P, m(p) = m(q) and η(h) = η(p).  A non-central kernel element n
    with [g, n] ≠ e gives (e, [g, n]) in the kernel of the comparison."""
    x = m.domain
    h = x.group
    bad = _noncentral(h, _word_kernel_normal_gens(m))
    if bad is not None:
        n, gi = bad
        w = h.commutator(h.gens[gi], n)
        return Fails(("not-injective", "identity", h.format(w)), "comparison kills a commutator of the kernel pair")
    ball = x.cone.ball()
    by_ab, by_f = {}, {}
    for a in ball:
        by_ab.setdefault(h.ab_coords(a), []).append(a)
        by_f.setdefault(m.apply(a), []).append(a)
    unknown = None
    for p in ball:
        for q in by_f[m.apply(p)]:
            qp = h.sub(q, p)
            for hh in by_ab[h.ab_coords(p)]:
                k = h.op(qp, hh)
                v = x.cone.member(k)
                if v.holds:
                    continue
                wit = ((h.format(p), h.format(q)), h.format(hh), h.format(k))
                if v.fails:
                    return Fails(("cone-not-surjective",) + wit, "pullback cone element without a preimage", bound=h.bound)
                if unknown is None:
                    unknown = wit
    if unknown is not None:
        return Unknown(h.bound, "preimage not reached in the cone ball", witness=unknown)
    return Unknown(h.bound, "no defect inside the word ball")


def is_normal_extension(m: Morphism, tag: str = "gc") -> Verdict:
    """m is a regular epi and its kernel-pair projection is a trivial extension."""
    tag = normalize_tag(tag)
    flag = m.flags["regular_epi"]
    if flag is False:
        return Fails(("not-regular-epi",), "not a regular epimorphism")
    if flag is None:
        raise UnsupportedError("regular-epi status of this morphism is not decidable here")
    if isinstance(m, BlockMorphism):
        pb = kernel_pair(m)
        return is_trivial_extension(pb.p1, tag)
    if isinstance(m, WordToBlock):
        if tag == "grp":
            raise UnsupportedError("group-completion structure needs abelian ambients")
        v = _word_normal_gc(m)
        if tag == "gc" or not v.fails:
            return v if tag == "gc" else Unknown(m.domain.group.bound, "F-triviality of a word kernel pair is not computed", witness=v.witness)
        # F-trivial implies C-trivial, so a C-defect refutes F-triviality
        return Fails(v.witness, "kernel-pair projection is not C-trivial, hence not F-trivial", bound=v.bound)
    raise UnsupportedError(f"normal extension test for a {m.kind} morphism")


def kernel_in_center(m: Morphism) -> Verdict:
    x = m.domain
    if isinstance(m, BlockMorphism):
        f = x.group.finite
        ker = m.fmap == 0
        bad = np.flatnonzero(ker & ~f.center)
        if len(bad):
            return Fails(("kernel-not-central", x.format((_zero(x.group), int(bad[0])))), "a kernel element is not central")
        return Holds(("kernel-central",))
    if isinstance(m, WordToBlock):
        h = x.group
        bad = _noncentral(h, _word_kernel_normal_gens(m))
        if bad is not None:
            return Fails(("kernel-not-central", h.format(bad[0])), "a kernel element is not central")
        return Holds(("kernel-central",))
    raise UnsupportedError(f"kernel of a {m.kind} morphism")


def is_gammac_normal(m: Morphism) -> Verdict:
    """Kernel in the center and Condition (⋆)."""
    require_regular_epi(m)
    return conjoin(kernel_in_center(m), condition_star(m))


def is_central_extension(m: Morphism, cross_check: bool = True) -> Verdict:
    """Kernel in the center and the cone map special homogeneous."""
    require_regular_epi(m)
    v = conjoin(kernel_in_center(m), is_special_homogeneous(m))
    if cross_check:
        o = is_normal_extension(m, "g")
        if v.definite and o.definite and v.holds != o.holds:
            raise AssertionError("central-extension criterion disagrees with the normality oracle")
        v = Verdict(v.status, v.certificate, v.witness, v.bound, v.reason, {**v.details, "oracle": o.status})
    return v


# ---------------------------------------------------------- admissibility


def admissibility_spot_check(b: PreorderedGroup, phi: Morphism, tag: str = "gc") -> Verdict:
    """Reflect the pullback of φ along the unit of B and test the reflected square."""
    tag = normalize_tag(tag)
    if tag == "grp":
        raise UnsupportedError("admissibility is checked for gc and g")
    r = TAGS[tag]
    rb = reflect(b, r)
    if not phi.codomain.group.same_as(rb.reflected.group) or not phi.codomain.cone.same_as(rb.reflected.cone):
        raise ModelError("φ must land in the reflection of B")
    if reflect(phi.domain, r).reflected is not phi.domain:
        raise ModelError("φ must live in the reflective subcategory")
    require_regular_epi(phi)
    pb = pullback(rb.unit, phi)
    sq = PogSquare(
        reflect_morphism(pb.p1, r),
        reflect_morphism(pb.p2, r),
        reflect_morphism(rb.unit, r),
        reflect_morphism(phi, r),
    )
    return is_pullback_square(sq)
