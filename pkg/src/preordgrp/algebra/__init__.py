"""Exact finite-group and integer-lattice algorithms."""

from .finite import (
    FiniteGroup,
    all_homs,
    alternating,
    cyclic,
    dihedral,
    direct_product,
    from_permutations,
    klein,
    quaternion,
    symmetric,
    trivial,
    validate_group_table,
)
from .lattice import Lattice, hnf, kernel_basis, lattice_intersect, lattice_member, preimage, snf
from .monoid import FreeCone, canonical_cone


def commutator_subgroup(g: FiniteGroup) -> frozenset:
    import numpy as np

    return frozenset(int(x) for x in np.flatnonzero(g.commutator_subgroup))


def center(g: FiniteGroup) -> frozenset:
    import numpy as np

    return frozenset(int(x) for x in np.flatnonzero(g.center))


__all__ = [
    "FiniteGroup",
    "FreeCone",
    "Lattice",
    "all_homs",
    "alternating",
    "canonical_cone",
    "center",
    "commutator_subgroup",
    "cyclic",
    "dihedral",
    "direct_product",
    "from_permutations",
    "hnf",
    "kernel_basis",
    "klein",
    "lattice_intersect",
    "lattice_member",
    "preimage",
    "quaternion",
    "quotient_group",
    "snf",
    "symmetric",
    "trivial",
    "validate_group_table",
]


def quotient_group(g: FiniteGroup, normal):
    """G/N for N given as an iterable of indices or a boolean mask."""
    import numpy as np

    n = np.asarray(normal)
    mask = n if n.dtype == bool and n.shape == (g.order,) else g.mask(normal)
    return g.quotient(mask)
