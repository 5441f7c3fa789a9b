"""Construction traces for `explain`: reflections of an object, kernel pair of a morphism."""

from __future__ import annotations

from ..carriers import BlockCone, BlockMorphism, PreorderedGroup, WordToBlock
from ..category import PogSquare, is_pullback_square, kernel, kernel_pair
from ..errors import ModelError, PreconditionError, UnsupportedError
from ..reflectors import reflect
from .report import show


def describe_group(g) -> str:
    if g.backend == "word":
        return f"word group on {', '.join(g.names)} (ball radius {g.bound})"
    parts = []
    if g.rank:
        parts.append(f"Z^{g.rank}")
        if g.relations.basis:
            parts[-1] += f"/<{', '.join(show(u) for u in g.relations.basis)}>"
    if g.finite.order > 1 or not parts:
        parts.append(f"finite of order {g.finite.order}" + ("" if g.finite.is_abelian else ", non-abelian"))
    return " x ".join(parts)


def describe_cone(x: PreorderedGroup) -> list[str]:
    c = x.cone
    if not isinstance(c, BlockCone):
        out = [f"generated by {show([x.format(g) for g in c.gens])} (normal closure)"]
        if c.exact:
            out.append(f"exact membership predicate {c.exact}")
        return out
    fr = c.free
    out = []
    if x.group.rank:
        out.append(f"lattice part {show(fr.lattice.basis)}")
        out.append(f"pointed generators {show(fr.pointed)}")
        out.append(f"positivity functional {show(fr.functional)}")
    out.append(f"finite part {show(c.finite_elements)}")
    return out


def describe_object(x: PreorderedGroup, indent: str = "  ") -> list[str]:
    out = [f"{indent}group: {describe_group(x.group)}"]
    out += [f"{indent}cone: {line}" for line in describe_cone(x)]
    return out


def describe_morphism(m, indent: str = "  ") -> list[str]:
    out = []
    if isinstance(m, (BlockMorphism, WordToBlock)):
        out.append(f"{indent}matrix: {show(m.matrix)}")
    if isinstance(m, BlockMorphism) and m.domain.group.finite.order > 1:
        out.append(f"{indent}finite map: {show(m.fmap.tolist())}")
    flags = m.flags
    out.append(f"{indent}flags: " + ", ".join(f"{k}={v}" for k, v in flags.items()))
    return out


def _reflection(x: PreorderedGroup, tag: str) -> list[str]:
    out = [f"reflection {tag}:"]
    try:
        r = reflect(x, tag)
    except (ModelError, PreconditionError, UnsupportedError) as e:
        return out + [f"  not available: {e}"]
    if r.reflected is x:
        return out + ["  fixed point (the unit is the identity)"]
    out += describe_object(r.reflected)
    out.append("  unit:")
    out += describe_morphism(r.unit, "    ")
    return out


def explain_object(name: str, x: PreorderedGroup) -> list[str]:
    out = [f"object {name}"] + describe_object(x)
    for tag in ("C", "A", "F"):
        out += _reflection(x, tag)
    return out


def explain_morphism(name: str, m) -> list[str]:
    out = [f"morphism {name} : {m.domain.name} -> {m.codomain.name}"]
    out += describe_morphism(m)
    out.append(f"domain {m.domain.name}:")
    out += describe_object(m.domain, "    ")
    out.append(f"codomain {m.codomain.name}:")
    out += describe_object(m.codomain, "    ")
    if not isinstance(m, BlockMorphism):
        return out + ["kernel pair: not computed for word domains"]
    k = kernel(m)
    out.append(f"kernel: lattice {show(k.lattice.basis)}, finite part {show(k.finite_mask.nonzero()[0].tolist())}")
    pb = kernel_pair(m)
    out.append("kernel pair (pullback of the morphism along itself):")
    out += describe_object(pb.obj, "    ")
    out.append(f"    lattice basis in the product: {show(pb.basis)}")
    for leg in (pb.p1, pb.p2):
        out.append(f"    projection {leg.name}:")
        out += describe_morphism(leg, "      ")
    v = is_pullback_square(PogSquare(pb.p1, pb.p2, m, m))
    out.append(f"    universal property: {v.status}")
    return out


def explain(name: str, target) -> str:
    lines = explain_object(name, target) if isinstance(target, PreorderedGroup) else explain_morphism(name, target)
    return "\n".join(lines) + "\n"
