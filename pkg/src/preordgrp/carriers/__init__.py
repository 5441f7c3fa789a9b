"""Object backends (finite, block, word), cones and morphisms."""

from typing import Iterable, Optional

from ..algebra.finite import FiniteGroup
from ..algebra.lattice import Lattice
from .block import BlockCone, BlockGroup, full_cone, make_cone, validate_block_cone, zero_cone
from .morphism import (
    BlockMorphism,
    BlockToWord,
    Morphism,
    PreorderedGroup,
    WordToBlock,
    classify_morphism,
    compose,
    cone_member,
    cone_validate,
    identity_morphism,
    morphism_validate,
    zero_morphism,
)
from .word import EXACT_CONES, WordCone, WordGroup, heisenberg, register_exact_cone

PogMorphism = Morphism


def finite_pog(group: FiniteGroup, cone: Iterable[int] = (0,), name: Optional[str] = None) -> PreorderedGroup:
    """(G, N) for a finite group and a subset N (taken as given, then validated by callers)."""
    g = BlockGroup(0, group)
    mask = group.mask(cone)
    from ..algebra.monoid import FreeCone

    return PreorderedGroup(g, BlockCone(FreeCone(0, g.relations, g.relations, (), ()), mask), name)


def block_pog(
    rank: int,
    lattice=(),
    pointed=(),
    functional=None,
    finite: Optional[FiniteGroup] = None,
    finite_cone: Iterable[int] = (0,),
    relations=(),
    name: Optional[str] = None,
    canonical: bool = False,
) -> PreorderedGroup:
    g = BlockGroup(rank, finite, Lattice(rank, list(relations)))
    cone = make_cone(g, lattice, pointed, functional, finite_cone, canonical=canonical)
    return PreorderedGroup(g, cone, name)


def zero_object(name: str = "zero") -> PreorderedGroup:
    g = BlockGroup(0)
    return PreorderedGroup(g, full_cone(g), name)


def word_pog(group: WordGroup, gens, exact: Optional[str] = None, name: Optional[str] = None) -> PreorderedGroup:
    return PreorderedGroup(group, WordCone(group, gens, exact), name)


__all__ = [
    "BlockCone",
    "BlockGroup",
    "BlockMorphism",
    "BlockToWord",
    "EXACT_CONES",
    "Morphism",
    "PogMorphism",
    "PreorderedGroup",
    "WordCone",
    "WordGroup",
    "WordToBlock",
    "block_pog",
    "classify_morphism",
    "compose",
    "cone_member",
    "cone_validate",
    "finite_pog",
    "full_cone",
    "heisenberg",
    "identity_morphism",
    "make_cone",
    "morphism_validate",
    "register_exact_cone",
    "validate_block_cone",
    "word_pog",
    "zero_cone",
    "zero_morphism",
    "zero_object",
]
