"""Finite groups given by Cayley tables.

Elements are dense indices 0..n-1 and the identity always sits at index 0.
Documentation writes the operation additively (``a + b``, ``-a``) even when the
group is not abelian; in code it is ``op``.
"""

from __future__ import annotations

from functools import cached_property
from itertools import permutations, product
from typing import Iterable, Optional, Sequence

import numpy as np

from .. import kernels
from ..errors import ModelError
from ..verdict import Fails, Holds, Verdict


def validate_group_table(table, identity: int = 0) -> Verdict:
    """Check the group axioms on a square table; witnesses name the broken axiom."""
    t = np.asarray(table)
    if t.ndim != 2 or t.shape[0] != t.shape[1]:
        raise ModelError(f"group table must be square, got shape {t.shape}")
    n = t.shape[0]
    if n == 0:
        raise ModelError("group table is empty")
    if not (0 <= identity < n):
        raise ModelError(f"identity index {identity} out of range")
    t = t.astype(np.int64)
    bad = np.argwhere((t < 0) | (t >= n))
    if len(bad):
        i, j = map(int, bad[0])
        return Fails(("range", i, j), f"entry ({i},{j}) = {int(t[i, j])} is not an element")
    ref = np.arange(n)
    for i in range(n):
        if not np.array_equal(np.sort(t[i]), ref):
            return Fails(("latin-row", i), f"row {i} is not a permutation")
        if not np.array_equal(np.sort(t[:, i]), ref):
            return Fails(("latin-column", i), f"column {i} is not a permutation")
    for x in range(n):
        if t[identity, x] != x or t[x, identity] != x:
            return Fails(("identity", x), f"{identity} is not neutral for {x}")
    a, b, c = kernels.assoc_violation(t)
    if a >= 0:
        return Fails(("associativity", a, b, c), f"({a}{b}){c} != {a}({b}{c})")
    return Holds(("group", n))


class FiniteGroup:
    """A finite group with identity at index 0."""

    def __init__(self, table, names: Optional[Sequence[str]] = None, check: bool = True):
        t = np.array(table, dtype=np.int64)
        if check:
            v = validate_group_table(t, 0)
            if not v.holds:
                raise ModelError(f"invalid group table: {v.reason}")
        t.setflags(write=False)
        self.table = t
        self.names = tuple(names) if names is not None else None

    # basic structure -----------------------------------------------------

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def op(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    @cached_property
    def inverse(self) -> np.ndarray:
        inv = np.argmax(self.table == 0, axis=1).astype(np.int64)
        inv.setflags(write=False)
        return inv

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def power(self, a: int, k: int) -> int:
        x = 0
        base = a if k >= 0 else self.inv(a)
        for _ in range(abs(k)):
            x = self.op(x, base)
        return x

    def conj(self, g: int, x: int) -> int:
        """g + x - g."""
        return int(self.table[self.table[g, x], self.inverse[g]])

    def commutator(self, g: int, h: int) -> int:
        """g + h - g - h."""
        t, inv = self.table, self.inverse
        return int(t[t[t[g, h], inv[g]], inv[h]])

    @cached_property
    def is_abelian(self) -> bool:
        return bool((self.table == self.table.T).all())

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash(self.table.tobytes())

    def __repr__(self):
        return f"FiniteGroup(order={self.order})"

    def label(self, a: int) -> str:
        return self.names[a] if self.names else str(a)

    # subsets --------------------------------------------------------------

    def mask(self, elements: Iterable[int]) -> np.ndarray:
        m = np.zeros(self.order, dtype=bool)
        for e in elements:
            m[int(e)] = True
        return m

    def closure(self, mask) -> np.ndarray:
        return kernels.subgroup_closure(self.table, mask)

    def normal_closure(self, mask) -> np.ndarray:
        m = np.asarray(mask, dtype=bool)
        while True:
            m2 = self.closure(kernels.conjugation_closure(self.table, self.inverse, m))
            if np.array_equal(m2, m):
                return m
            m = m2

    def is_subgroup(self, mask) -> bool:
        m = np.asarray(mask, dtype=bool)
        if not m[0]:
            return False
        idx = np.flatnonzero(m)
        return bool(m[self.table[np.ix_(idx, idx)]].all())

    def is_normal(self, mask) -> bool:
        m = np.asarray(mask, dtype=bool)
        return self.is_subgroup(m) and bool(
            np.array_equal(kernels.conjugation_closure(self.table, self.inverse, m), m)
        )

    def conjugation_escape(self, mask) -> Optional[tuple[int, int]]:
        """Some (g, x) with x in mask and g + x - g outside, if any."""
        m = np.asarray(mask, dtype=bool)
        conj = self.table[self.table, self.inverse[:, None]]
        bad = np.argwhere(~m[conj] & m[None, :])
        if len(bad):
            return int(bad[0, 0]), int(bad[0, 1])
        return None

    @cached_property
    def commutator_subgroup(self) -> np.ndarray:
        t, inv = self.table, self.inverse
        comms = t[t[t, inv[:, None]], inv[None, :]]  # [g, h] = g h g^-1 h^-1
        m = np.zeros(self.order, dtype=bool)
        m[np.unique(comms)] = True
        out = self.closure(m)
        out.setflags(write=False)
        return out

    @cached_property
    def center(self) -> np.ndarray:
        out = (self.table == self.table.T).all(axis=1)
        out.setflags(write=False)
        return out

    def coset_labels(self, mask) -> np.ndarray:
        """Label of x + N, the cosets numbered by their minimal member."""
        idx = np.flatnonzero(mask)
        members = self.table[:, idx]  # row x = x + N
        mins = members.min(axis=1)
        _, labels = np.unique(mins, return_inverse=True)
        return labels.astype(np.int64)

    # derived groups ---------------------------------------------------------

    def quotient(self, mask) -> tuple["FiniteGroup", np.ndarray]:
        """G/N for a normal subgroup N, with the quotient map as an index array."""
        m = np.asarray(mask, dtype=bool)
        if not self.is_subgroup(m):
            raise ModelError("quotient by a subset that is not a subgroup")
        if not self.is_normal(m):
            raise ModelError("quotient by a subgroup that is not normal")
        labels = self.coset_labels(m)
        k = int(labels.max()) + 1
        reps = np.array([int(np.flatnonzero(labels == c)[0]) for c in range(k)])
        qt = labels[self.table[np.ix_(reps, reps)]]
        return FiniteGroup(qt, check=False), labels

    def subgroup(self, mask) -> tuple["FiniteGroup", np.ndarray]:
        """The subgroup on ``mask`` re-indexed in increasing order, with its inclusion."""
        m = np.asarray(mask, dtype=bool)
        if not self.is_subgroup(m):
            raise ModelError("not a subgroup")
        idx = np.flatnonzero(m)
        pos = np.full(self.order, -1, dtype=np.int64)
        pos[idx] = np.arange(len(idx))
        st = pos[self.table[np.ix_(idx, idx)]]
        names = [self.label(i) for i in idx] if self.names else None
        return FiniteGroup(st, names=names, check=False), idx.astype(np.int64)

    def abelianization(self) -> tuple["FiniteGroup", np.ndarray]:
        return self.quotient(self.commutator_subgroup)

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """A small generating set, chosen greedily by index."""
        gens: list[int] = []
        cur = self.mask([0])
        for x in range(self.order):
            if not cur[x]:
                gens.append(x)
                cur = self.closure(self.mask(gens))
        return tuple(gens)

    @cached_property
    def normal_subgroups(self) -> tuple[np.ndarray, ...]:
        """All normal subgroups, sorted by (order, member list)."""
        found: dict[bytes, np.ndarray] = {}
        base = [self.normal_closure(self.mask([x])) for x in range(self.order)]
        frontier = []
        for m in base:
            key = m.tobytes()
            if key not in found:
                found[key] = m
                frontier.append(m)
        while frontier:
            nxt = []
            for a in frontier:
                for b in base:
                    j = self.closure(a | b)
                    key = j.tobytes()
                    if key not in found:
                        found[key] = j
                        nxt.append(j)
            frontier = nxt
        out = sorted(found.values(), key=lambda m: (int(m.sum()), tuple(np.flatnonzero(m))))
        return tuple(out)

    # homomorphisms -----------------------------------------------------------

    def hom_violation(self, other: "FiniteGroup", f) -> Optional[tuple[int, int]]:
        f = np.asarray(f, dtype=np.int64)
        if f.shape != (self.order,):
            raise ModelError(f"map has length {f.shape}, expected {self.order}")
        if (f < 0).any() or (f >= other.order).any():
            raise ModelError("map value out of range")
        lhs = f[self.table]
        rhs = other.table[f[:, None], f[None, :]]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            return int(bad[0, 0]), int(bad[0, 1])
        return None

    def extend_hom(self, gens: Sequence[int], other: "FiniteGroup", images: Sequence[int]) -> Optional[np.ndarray]:
        """The homomorphism sending gens[i] to images[i], or None when none exists."""
        if not self.closure(self.mask(gens)).all():
            raise ModelError("generator list does not generate the group")
        f = np.full(self.order, -1, dtype=np.int64)
        f[0] = 0
        queue = [0]
        while queue:
            x = queue.pop(0)
            for g, im in zip(gens, images):
                y = int(self.table[x, g])
                val = int(other.table[f[x], im])
                if f[y] < 0:
                    f[y] = val
                    queue.append(y)
                elif f[y] != val:
                    return None
        if self.hom_violation(other, f) is not None:
            return None
        return f


# --------------------------------------------------------------- constructors


def from_permutations(gens: Sequence[Sequence[int]]) -> FiniteGroup:
    """Permutation group generated by ``gens``; product is composition a∘b."""
    deg = len(gens[0]) if gens else 1
    ident = tuple(range(deg))
    seen = {ident}
    frontier = [ident]
    gens = [tuple(g) for g in gens]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(p[g[i]] for i in range(deg))
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    elems = [ident] + sorted(seen - {ident})
    pos = {p: i for i, p in enumerate(elems)}
    n = len(elems)
    t = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            t[i, j] = pos[tuple(a[b[k]] for k in range(deg))]
    return FiniteGroup(t, check=False)


def cyclic(n: int) -> FiniteGroup:
    a = np.arange(n)
    return FiniteGroup((a[:, None] + a[None, :]) % n, check=False)


def trivial() -> FiniteGroup:
    return cyclic(1)


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    """Pairs (a, b) indexed a * |H| + b."""
    n2 = h.order
    t = g.table[:, None, :, None] * n2 + h.table[None, :, None, :]
    n = g.order * n2
    return FiniteGroup(t.reshape(n, n), check=False)


def klein() -> FiniteGroup:
    return direct_product(cyclic(2), cyclic(2))


def symmetric(n: int) -> FiniteGroup:
    return from_permutations([p for p in permutations(range(n))])


def alternating(n: int) -> FiniteGroup:
    def even(p):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
        return inv % 2 == 0

    return from_permutations([p for p in permutations(range(n)) if even(p)] or [tuple(range(n))])


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n."""
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return from_permutations([rot, ref])


def quaternion() -> FiniteGroup:
    """Q8 as a subgroup of SL(2, Z[i]) realised by 2x2 complex integer matrices."""
    one = ((1, 0), (0, 1))
    i_ = ((1j, 0), (0, -1j))
    j_ = ((0, 1), (-1, 0))

    def mul(a, b):
        return tuple(tuple(sum(a[r][k] * b[k][c] for k in range(2)) for c in range(2)) for r in range(2))

    elems = [one]
    frontier = [one]
    while frontier:
        nxt = []
        for p in frontier:
            for g in (i_, j_):
                q = mul(p, g)
                if q not in elems:
                    elems.append(q)
                    nxt.append(q)
        frontier = nxt
    t = np.array([[elems.index(mul(a, b)) for b in elems] for a in elems], dtype=np.int64)
    return FiniteGroup(t, check=False)


def is_hom(g: FiniteGroup, h: FiniteGroup, f) -> bool:
    return g.hom_violation(h, f) is None


def all_homs(g: FiniteGroup, h: FiniteGroup, surjective_only: bool = False) -> list[np.ndarray]:
    """Every homomorphism g -> h, by generator-image search in lexicographic order."""
    gens = g.generators
    out = []
    for images in product(range(h.order), repeat=len(gens)):
        f = g.extend_hom(gens, h, images)
        if f is None:
            continue
        if surjective_only and len(np.unique(f)) != h.order:
            continue
        out.append(f)
    return out
