"""Predicate dispatch: one check directive in, one Verdict out."""

from __future__ import annotations

from ..carriers import BlockMorphism, PreorderedGroup
from ..errors import ModelError, PreconditionError, UnsupportedError
from ..galois import (
    admissibility_spot_check,
    condition_star,
    homogeneous_split_epi_check,
    is_central_extension,
    is_gammac_normal,
    is_normal_extension,
    is_special_homogeneous,
    is_trivial_extension,
    kernel_pair_split_epi,
)
from ..normlattice import check_modular, enumerate_normal_subobjects
from ..reflectors import is_abelian_object, is_commutative_object
from ..verdict import Holds, Verdict

ERROR = "error"
HSE_BOX = 3

# predicates swept by the census, in report order
CENSUS_PREDICATES = ("star", "shs", "trivial-gc", "trivial-g", "normal-gc", "normal-g", "gammac-normal", "central")


def _hse(m, bound):
    if not isinstance(m, BlockMorphism):
        raise UnsupportedError("the split epi check needs a block morphism")
    _, p1, diag = kernel_pair_split_epi(m)
    return homogeneous_split_epi_check(p1, diag, None if p1.domain.group.rank == 0 else (bound or HSE_BOX))


def _modular(x: PreorderedGroup, bound):
    subs = enumerate_normal_subobjects(x)
    n = 0
    for a in subs:
        for c in subs:
            if not c <= a:
                continue
            for b in subs:
                v = check_modular(a, b, c)
                n += 1
                if v.fails:
                    return v
    return Holds(("modular", len(subs), n))


def _with_word_bound(target, bound, fn):
    """Run fn with the word ball of the target's domain set to ``bound``."""
    obj = target if isinstance(target, PreorderedGroup) else target.domain
    g = obj.group
    if bound is None or obj.is_block:
        return fn()
    old = g.bound
    g.bound = int(bound)
    try:
        return fn()
    finally:
        g.bound = old


DISPATCH = {
    "star": lambda m, b: condition_star(m),
    "shs": lambda m, b: is_special_homogeneous(m),
    "hse": _hse,
    "trivial-gc": lambda m, b: is_trivial_extension(m, "gc"),
    "trivial-g": lambda m, b: is_trivial_extension(m, "g"),
    "trivial-grp": lambda m, b: is_trivial_extension(m, "grp"),
    "normal-gc": lambda m, b: is_normal_extension(m, "gc"),
    "normal-g": lambda m, b: is_normal_extension(m, "g"),
    "normal-grp": lambda m, b: is_normal_extension(m, "grp"),
    "gammac-normal": lambda m, b: is_gammac_normal(m),
    "central": lambda m, b: is_central_extension(m),
    "commutative": lambda x, b: is_commutative_object(x),
    "abelian": lambda x, b: is_abelian_object(x),
    "modular": _modular,
}


def run_check(predicate: str, target, bound=None, base=None, tag=None) -> Verdict:
    """Decide one predicate; input errors come back as a Verdict with status 'error'."""
    try:
        if predicate == "admissible":
            return admissibility_spot_check(base, target, tag or "gc")
        fn = DISPATCH[predicate]
        return _with_word_bound(target, bound, lambda: fn(target, bound))
    except (ModelError, PreconditionError, UnsupportedError) as e:
        return Verdict(ERROR, reason=f"{type(e).__name__}: {e}")
