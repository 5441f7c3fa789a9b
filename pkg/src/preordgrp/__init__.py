"""Preordered groups: exact constructions, reflectors and extension-class decisions."""

from .carriers import (
    BlockMorphism,
    PreorderedGroup,
    WordToBlock,
    block_pog,
    finite_pog,
    word_pog,
    zero_object,
)
from .corpus import builtin_catalog
from .errors import ModelError, PreconditionError, UnsupportedError
from .galois import (
    condition_star,
    is_central_extension,
    is_gammac_normal,
    is_normal_extension,
    is_special_homogeneous,
    is_trivial_extension,
)
from .reflectors import reflect_C, reflect_F
from .verdict import Fails, Holds, Unknown, Verdict

__version__ = "0.1.0"

__all__ = [
    "BlockMorphism",
    "Fails",
    "Holds",
    "ModelError",
    "PreconditionError",
    "PreorderedGroup",
    "Unknown",
    "UnsupportedError",
    "Verdict",
    "WordToBlock",
    "block_pog",
    "builtin_catalog",
    "condition_star",
    "finite_pog",
    "is_central_extension",
    "is_gammac_normal",
    "is_normal_extension",
    "is_special_homogeneous",
    "is_trivial_extension",
    "reflect_C",
    "reflect_F",
    "word_pog",
    "zero_object",
]
