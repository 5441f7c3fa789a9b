"""Finitely generated submonoids of Z^r / Λ with exact membership.

A :class:`FreeCone` is ``L + N·g_1 + ... + N·g_p`` where ``L ⊇ Λ`` is a lattice
(the units of the monoid) and the pointed generators g_i carry a positivity
certificate: an integer covector λ with λ·u = 0 on L and λ·g_i >= 1.  Given
λ, membership of v reduces to a finite search over coefficient vectors c with
Σ c_i λ·g_i = λ·v followed by a lattice test of the residue.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Optional, Sequence

from .. import kernels
from ..errors import ModelError
from .lattice import Lattice, cols_to_matrix, snf_with_transform, solve_in_span

DEFAULT_RADIUS = 5


def dot(a, b) -> int:
    return sum(int(x) * int(y) for x, y in zip(a, b))


def _cols(vectors, rank):
    return cols_to_matrix(list(vectors), rank)


def solution_generators(gens: Sequence[Sequence[int]], target: Lattice) -> list[tuple]:
    """Hilbert basis of {c in N^p : Σ c_i gens_i ∈ target}.

    The target lattice is turned into congruences through its Smith form; each
    congruence a·c ≡ 0 (mod d) with entries reduced into [0, d) becomes the
    equation a·c - d s = 0 with a fresh non-negative slack s, so the solution
    monoid is isomorphic to the N-solutions of one homogeneous system.
    """
    p = len(gens)
    r = target.rank
    if p == 0:
        return []
    if r == 0:
        return [tuple(int(i == j) for i in range(p)) for j in range(p)]
    w_cols = [tuple(int(x) for x in g) for g in gens]
    k = len(target.basis)
    if k:
        u, d, _ = snf_with_transform(_cols(target.basis, r))
        diag = [d[i][i] for i in range(k)]
    else:
        u = [[int(i == j) for j in range(r)] for i in range(r)]
        diag = []
    w = [[sum(u[i][t] * w_cols[j][t] for t in range(r)) for j in range(p)] for i in range(r)]
    rows = []
    congr = [(i, diag[i]) for i in range(k) if diag[i] > 1]
    nslack = len(congr)
    for i in range(k, r):
        if any(w[i]):
            rows.append(list(w[i]) + [0] * nslack)
    for s, (i, di) in enumerate(congr):
        row = [x % di for x in w[i]]
        if any(row):
            slack = [0] * nslack
            slack[s] = -di
            rows.append(row + slack)
        else:
            rows.append([0] * (p + nslack))
    # drop slack columns that are unused (all-zero congruence rows)
    if not rows:
        return [tuple(int(i == j) for i in range(p)) for j in range(p)]
    keep = [j for j in range(p + nslack) if j < p or any(row[j] for row in rows)]
    mat = [[row[j] for j in keep] for row in rows if any(row[j] for j in keep)]
    if not mat:
        return [tuple(int(i == j) for i in range(p)) for j in range(p)]
    hb = kernels.hilbert_basis_nonneg(mat)
    out = sorted({tuple(h[:p]) for h in hb if any(h[:p])})
    return out


def find_functional(rank: int, lattice: Lattice, pointed: Sequence[Sequence[int]], radius: int = DEFAULT_RADIUS):
    """Small integer λ with λ·L = 0 and λ·g >= 1; box search first, then a linear program."""
    if not pointed:
        return tuple([0] * rank)
    lat_cols = _cols(lattice.basis, rank) if lattice.basis else []
    gen_cols = _cols(pointed, rank)
    got = kernels.functional_search(lat_cols, gen_cols, rank, radius)
    if got is not None:
        return tuple(got)
    return _functional_lp(rank, lattice, pointed)


def _functional_lp(rank, lattice, pointed):
    try:
        from scipy.optimize import linprog
    except ImportError:  # pragma: no cover
        return None
    a_eq = [list(u) for u in lattice.basis] or None
    b_eq = [0] * len(lattice.basis) or None
    a_ub = [[-x for x in g] for g in pointed]
    b_ub = [-1] * len(pointed)
    c = [sum(g[i] for g in pointed) for i in range(rank)]
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq, bounds=[(None, None)] * rank, method="highs")
    if not res.success:
        res = linprog([0] * rank, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq, bounds=[(None, None)] * rank, method="highs")
        if not res.success:
            return None
    fr = [Fraction(float(x)).limit_denominator(10_000) for x in res.x]
    scale = lcm(*[f.denominator for f in fr]) if fr else 1
    for mult in (1, 2, 3, 5, 10, 100):
        lam = tuple(int(f * scale * mult) for f in fr)
        if all(dot(lam, u) == 0 for u in lattice.basis) and all(dot(lam, g) >= 1 for g in pointed):
            return lam
    return None


class FreeCone:
    """Submonoid ``L + N·pointed`` of Z^r / relations, with certificate λ."""

    __slots__ = ("rank", "relations", "lattice", "pointed", "functional", "_weights")

    def __init__(self, rank, relations: Lattice, lattice: Lattice, pointed, functional, check: bool = True):
        self.rank = int(rank)
        self.relations = relations
        self.lattice = lattice
        self.pointed = tuple(tuple(int(x) for x in g) for g in pointed)
        self.functional = tuple(int(x) for x in functional) if functional is not None else tuple([0] * self.rank)
        if check:
            self.check()
        self._weights = tuple(dot(self.functional, g) for g in self.pointed)

    def check(self):
        if self.relations.rank != self.rank or self.lattice.rank != self.rank:
            raise ModelError("cone lattice lives in the wrong rank")
        if len(self.functional) != self.rank:
            raise ModelError(f"functional {self.functional} has the wrong length for rank {self.rank}")
        if not self.lattice.contains(self.relations):
            raise ModelError("cone lattice part must contain the relation lattice")
        for u in self.lattice.basis:
            if dot(self.functional, u) != 0:
                raise ModelError(f"positivity functional {self.functional} does not vanish on lattice vector {u}")
        for g in self.pointed:
            if len(g) != self.rank:
                raise ModelError(f"pointed generator {g} has the wrong length")
            if dot(self.functional, g) < 1:
                raise ModelError(f"positivity functional {self.functional} is not >= 1 on pointed generator {g}")

    def __repr__(self):
        return f"FreeCone(rank={self.rank}, lattice={list(self.lattice.basis)}, pointed={list(self.pointed)}, functional={self.functional})"

    # membership --------------------------------------------------------------

    def member_certificate(self, v) -> Optional[tuple]:
        """(c, lattice coordinates) with v = Σ c_i g_i + Σ a_j u_j, or None."""
        v = tuple(int(x) for x in v)
        if len(v) != self.rank:
            raise ModelError(f"element {v} is not in Z^{self.rank}")
        level = dot(self.functional, v)
        if not self.pointed:
            a = self.lattice.coords(v)
            return None if a is None else ((), a)
        r, p = self.rank, len(self.pointed)
        gens = _cols(self.pointed, r)
        basis = _cols(self.lattice.basis, r) if self.lattice.basis else [[] for _ in range(r)]
        c = kernels.coefficient_search(gens, list(self._weights), basis, list(self.lattice.pivots), list(v), level)
        if c is None:
            return None
        resid = tuple(v[i] - sum(c[j] * self.pointed[j][i] for j in range(p)) for i in range(r))
        return tuple(c), self.lattice.coords(resid)

    def member(self, v) -> bool:
        return self.member_certificate(v) is not None

    def replay(self, cert) -> tuple:
        c, a = cert
        out = [0] * self.rank
        for ci, g in zip(c, self.pointed):
            for i in range(self.rank):
                out[i] += ci * g[i]
        for ai, u in zip(a, self.lattice.basis):
            for i in range(self.rank):
                out[i] += ai * u[i]
        return tuple(out)

    # structure ---------------------------------------------------------------

    def monoid_generators(self) -> list[tuple]:
        out = []
        for u in self.lattice.basis:
            out.append(tuple(u))
            out.append(tuple(-x for x in u))
        out.extend(self.pointed)
        return out

    def group_lattice(self) -> Lattice:
        """gp of the monoid: all differences a - b."""
        return Lattice(self.rank, list(self.lattice.basis) + list(self.pointed))

    def is_group(self) -> bool:
        return not self.pointed

    def contains(self, other: "FreeCone") -> bool:
        return all(self.member(g) for g in other.monoid_generators())

    def same_as(self, other: "FreeCone") -> bool:
        return self.contains(other) and other.contains(self)

    def image(self, a, rank_out: int, relations_out: Lattice, radius: int = DEFAULT_RADIUS) -> "FreeCone":
        """Direct image under the matrix ``a``."""
        img = lambda v: tuple(sum(int(a[i][j]) * int(v[j]) for j in range(self.rank)) for i in range(rank_out))
        return canonical_cone(
            rank_out,
            relations_out,
            [img(u) for u in self.lattice.basis],
            [img(g) for g in self.pointed],
            radius=radius,
        )

    def intersect_lattice(self, t: Lattice) -> "FreeCone":
        """The submonoid of members lying in the sublattice ``t`` (t ⊇ relations)."""
        if t.rank != self.rank:
            raise ModelError("rank mismatch")
        lat = self.lattice.intersect(t)
        s = t + self.lattice
        hb = solution_generators(self.pointed, s)
        span_cols = list(t.basis) + list(self.lattice.basis)
        new = []
        for h in hb:
            x = tuple(sum(h[j] * self.pointed[j][i] for j in range(len(h))) for i in range(self.rank))
            coeff = solve_in_span(span_cols, self.rank, x)
            if coeff is None:  # pragma: no cover - guaranteed by construction
                raise ModelError("internal: lifted generator left t + L")
            tv = tuple(sum(coeff[j] * t.basis[j][i] for j in range(len(t.basis))) for i in range(self.rank))
            new.append(self.relations.reduce(tv))
        return FreeCone(self.rank, self.relations, lat, _prune(self.rank, lat, new, self.functional), self.functional)

    def change_coordinates(self, basis_cols: Sequence[Sequence[int]], relations_new: Lattice) -> "FreeCone":
        """Re-express a cone living inside span(basis_cols) in the coordinates of that basis."""
        k = len(basis_cols)

        def co(v):
            c = solve_in_span(basis_cols, self.rank, v)
            if c is None:
                raise ModelError(f"vector {v} is not in the new coordinate lattice")
            return tuple(c)

        lat = Lattice(k, [co(u) for u in self.lattice.basis] + list(relations_new.basis))
        pointed = [relations_new.reduce(co(g)) for g in self.pointed]
        lam = tuple(dot(self.functional, b) for b in basis_cols)
        return FreeCone(k, relations_new, lat, pointed, lam)


def _prune(rank, lat: Lattice, pointed, functional) -> list[tuple]:
    """Drop generators in L, duplicates modulo L and generators reachable from the others."""
    reps = []
    seen = set()
    for g in pointed:
        rg = lat.reduce(g)
        if lat.member(rg) or rg in seen:
            continue
        seen.add(rg)
        reps.append(rg)
    reps.sort(key=lambda g: (dot(functional, g), g))
    keep = list(reps)
    for g in sorted(reps, key=lambda g: (-dot(functional, g), g)):
        others = [h for h in keep if h != g]
        trial = FreeCone(rank, lat, lat, others, functional, check=False)
        if trial.member(g):
            keep = others
    return keep


def canonical_cone(
    rank: int,
    relations: Lattice,
    lattice_gens: Sequence[Sequence[int]],
    pointed_gens: Sequence[Sequence[int]],
    functional=None,
    radius: int = DEFAULT_RADIUS,
) -> FreeCone:
    """Normalize the monoid generated by a group part and extra generators.

    Pointed generators that turn out to be units are moved into the lattice
    part (decided exactly from the Hilbert basis of the relation monoid), a
    positivity functional is found (or the supplied one verified), and
    redundant generators are dropped.
    """
    lat = relations + Lattice(rank, list(lattice_gens))
    pointed = [lat.reduce(g) for g in pointed_gens]
    pointed = [g for g in pointed if not lat.member(g)]
    if pointed:
        hb = solution_generators(pointed, lat)
        units = sorted({j for h in hb for j, x in enumerate(h) if x})
        if units:
            lat = lat + Lattice(rank, [pointed[j] for j in units])
            pointed = [lat.reduce(g) for j, g in enumerate(pointed) if j not in units]
            pointed = [g for g in pointed if not lat.member(g)]
    if functional is None:
        functional = find_functional(rank, lat, pointed, radius)
        if functional is None:
            raise ModelError(
                "no positivity functional found within the search radius; supply one explicitly "
                f"(pointed generators {pointed})"
            )
    functional = tuple(int(x) for x in functional)
    probe = FreeCone(rank, relations, lat, pointed, functional)  # validates the certificate
    return FreeCone(rank, relations, lat, _prune(rank, lat, probe.pointed, functional), functional)
