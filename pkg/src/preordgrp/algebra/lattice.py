"""Integer lattices: Hermite and Smith normal forms, membership, sums, intersections.

Everything here uses Python integers, so there is no overflow.  Matrices are
lists of rows.  A lattice in Z^r is stored by a basis in column-style Hermite
normal form:

* basis vectors are the columns; column j has its first nonzero entry (the
  pivot) in row ``pivots[j]`` and pivots increase strictly with j, so the basis
  matrix is lower triangular in echelon sense;
* pivots are positive;
* in every pivot row, the entries of the columns to the left of the pivot are
  reduced into ``[0, pivot)``.

With this convention the columns {(1,3), (2,4)} normalize to {(1,1), (0,2)}.
"""

from __future__ import annotations

from functools import reduce
from math import gcd
from typing import Iterable, Optional, Sequence

from ..errors import ModelError

Vector = tuple


def _vec(v) -> tuple:
    return tuple(int(x) for x in v)


def transpose(rows, ncols: Optional[int] = None):
    if not rows:
        return [[] for _ in range(ncols or 0)]
    return [list(c) for c in zip(*rows)]


def matmul(a, b):
    """Product of matrices given as lists of rows."""
    if not a:
        return []
    inner = len(a[0])
    if inner == 0:
        return [[0] * (len(b[0]) if b else 0) for _ in a]
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a, v):
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def cols_to_matrix(cols: Sequence[Sequence[int]], dim: int):
    return [[int(c[i]) for c in cols] for i in range(dim)]


def matrix_to_cols(m, dim: Optional[int] = None):
    if not m:
        return []
    return [tuple(int(m[i][j]) for i in range(len(m))) for j in range(len(m[0]))]


# ------------------------------------------------------------------ Hermite


def hnf_columns(cols: Iterable[Sequence[int]], dim: int, with_transform: bool = False):
    """Column Hermite normal form of the lattice spanned by ``cols``.

    Returns ``(basis, pivots)`` or, with ``with_transform``, also the unimodular
    matrix U (k x k, list of rows) such that [cols] U = [basis | 0 ...].
    """
    work = [list(_vec(c)) for c in cols]
    for c in work:
        if len(c) != dim:
            raise ModelError(f"vector {tuple(c)} has length {len(c)}, expected {dim}")
    k = len(work)
    # transform columns: trans[j] is the combination of input columns giving work[j]
    trans = [[1 if i == j else 0 for i in range(k)] for j in range(k)] if with_transform else None

    def addmul(dst, src, q):
        # column dst -= q * column src
        if q:
            wd, ws = work[dst], work[src]
            for i in range(dim):
                wd[i] -= q * ws[i]
            if trans is not None:
                td, ts = trans[dst], trans[src]
                for i in range(k):
                    td[i] -= q * ts[i]

    def swap(a, b):
        work[a], work[b] = work[b], work[a]
        if trans is not None:
            trans[a], trans[b] = trans[b], trans[a]

    def negate(a):
        work[a] = [-x for x in work[a]]
        if trans is not None:
            trans[a] = [-x for x in trans[a]]

    pivots: list[int] = []
    col = 0  # columns [0, col) are finished pivot columns
    for row in range(dim):
        if col >= k:
            break
        # Euclid on the entries of this row across the unfinished columns
        while True:
            nz = [j for j in range(col, k) if work[j][row] != 0]
            if not nz:
                break
            j0 = min(nz, key=lambda j: abs(work[j][row]))
            swap(col, j0)
            done = True
            for j in range(col + 1, k):
                if work[j][row]:
                    addmul(j, col, work[j][row] // work[col][row])
                    if work[j][row]:
                        done = False
            if done:
                break
        if work[col][row] == 0:
            continue
        if work[col][row] < 0:
            negate(col)
        piv = work[col][row]
        for j in range(col):
            addmul(j, col, work[j][row] // piv)
        pivots.append(row)
        col += 1
    basis = [tuple(work[j]) for j in range(col)]
    if with_transform:
        # U as rows: U[i][j] = coefficient of input column i in output column j
        u = [[trans[j][i] for j in range(k)] for i in range(k)]
        return basis, pivots, u
    return basis, pivots


def hnf(m):
    """Hermite normal form of a matrix (list of rows); the result's columns are the basis."""
    dim = len(m)
    basis, _ = hnf_columns(matrix_to_cols(m), dim)
    return cols_to_matrix(basis, dim)


def kernel_basis(m, ncols: Optional[int] = None) -> list[tuple]:
    """Basis (Hermite form) of {x in Z^n : m x = 0}."""
    n = len(m[0]) if m else (ncols or 0)
    if not m:
        return hnf_columns([tuple(1 if i == j else 0 for i in range(n)) for j in range(n)], n)[0]
    cols = matrix_to_cols(m)
    if len(cols) != n:
        raise ModelError("column count mismatch")
    basis, piv, u = hnf_columns(cols, len(m), with_transform=True)
    r = len(basis)
    kern = [tuple(u[i][j] for i in range(n)) for j in range(r, n)]
    return hnf_columns(kern, n)[0]


# ------------------------------------------------------------------- Smith


def snf_with_transform(m):
    """Return (U, D, V) with U m V = D diagonal, d1 | d2 | ..., all d_i >= 0.

    U and V are unimodular; matrices are lists of rows.
    """
    r = len(m)
    c = len(m[0]) if m else 0
    a = [list(map(int, row)) for row in m]
    u = [[int(i == j) for j in range(r)] for i in range(r)]
    v = [[int(i == j) for j in range(c)] for i in range(c)]

    def row_op(dst, src, q):  # row dst -= q row src
        a[dst] = [x - q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x - q * y for x, y in zip(u[dst], u[src])]

    def col_op(dst, src, q):  # col dst -= q col src
        for row in a:
            row[dst] -= q * row[src]
        for row in v:
            row[dst] -= q * row[src]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    t = 0
    while t < min(r, c):
        nz = [(abs(a[i][j]), i, j) for i in range(t, r) for j in range(t, c) if a[i][j]]
        if not nz:
            break
        _, i0, j0 = min(nz)
        swap_rows(t, i0)
        swap_cols(t, j0)
        while True:
            changed = False
            for i in range(t + 1, r):
                if a[i][t]:
                    row_op(i, t, a[i][t] // a[t][t])
                    if a[i][t]:
                        swap_rows(t, i)
                        changed = True
            for j in range(t + 1, c):
                if a[t][j]:
                    col_op(j, t, a[t][j] // a[t][t])
                    if a[t][j]:
                        swap_cols(t, j)
                        changed = True
            if changed:
                continue
            # divisibility of the remaining block
            bad = [(i, j) for i in range(t + 1, r) for j in range(t + 1, c) if a[i][j] % a[t][t]]
            if bad:
                i, _ = bad[0]
                row_op(t, i, -1)  # row t += row i
                continue
            break
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return u, a, v


def snf(m) -> tuple[int, ...]:
    """Nonzero invariant factors d1 | d2 | ... of an integer matrix."""
    if not m or not m[0]:
        return ()
    _, d, _ = snf_with_transform(m)
    out = []
    for i in range(min(len(d), len(d[0]))):
        if d[i][i]:
            out.append(d[i][i])
    return tuple(out)


# ----------------------------------------------------------------- Lattice


class Lattice:
    """Sublattice of Z^r with a canonical Hermite basis."""

    __slots__ = ("rank", "basis", "pivots", "_key")

    def __init__(self, rank: int, generators: Iterable[Sequence[int]] = ()):
        self.rank = int(rank)
        self.basis, self.pivots = hnf_columns(list(generators), self.rank)
        self._key = (self.rank, tuple(self.basis))

    @classmethod
    def full(cls, rank: int) -> "Lattice":
        return cls(rank, [tuple(int(i == j) for i in range(rank)) for j in range(rank)])

    @classmethod
    def zero(cls, rank: int) -> "Lattice":
        return cls(rank, [])

    def __eq__(self, other):
        return isinstance(other, Lattice) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"Lattice({self.rank}, {list(self.basis)})"

    @property
    def dim(self) -> int:
        return len(self.basis)

    def _check(self, v):
        if len(v) != self.rank:
            raise ModelError(f"vector {tuple(v)} does not live in Z^{self.rank}")

    def coords(self, v) -> Optional[tuple]:
        """Coefficients of v in the basis, or None when v is not a member."""
        self._check(v)
        w = list(_vec(v))
        out = []
        prev = -1
        for col, p in zip(self.basis, self.pivots):
            if any(w[i] for i in range(prev + 1, p)):
                return None
            q, rem = divmod(w[p], col[p])
            if rem:
                return None
            if q:
                for i in range(p, self.rank):
                    w[i] -= q * col[i]
            out.append(q)
            prev = p
        if any(w[i] for i in range(prev + 1, self.rank)):
            return None
        return tuple(out)

    def member(self, v) -> bool:
        return self.coords(v) is not None

    def reduce(self, v) -> tuple:
        """Canonical representative of v modulo the lattice."""
        self._check(v)
        w = list(_vec(v))
        for col, p in zip(self.basis, self.pivots):
            q = w[p] // col[p]
            if q:
                for i in range(p, self.rank):
                    w[i] -= q * col[i]
        return tuple(w)

    def contains(self, other: "Lattice") -> bool:
        return all(self.member(b) for b in other.basis)

    def __le__(self, other: "Lattice") -> bool:
        return other.contains(self)

    def __add__(self, other: "Lattice") -> "Lattice":
        if other.rank != self.rank:
            raise ModelError("rank mismatch in lattice sum")
        return Lattice(self.rank, list(self.basis) + list(other.basis))

    def intersect(self, other: "Lattice") -> "Lattice":
        if other.rank != self.rank:
            raise ModelError("rank mismatch in lattice intersection")
        k1 = len(self.basis)
        if k1 == 0 or not other.basis:
            return Lattice.zero(self.rank)
        stacked = [list(self.basis[j]) for j in range(k1)] + [[-x for x in b] for b in other.basis]
        m = cols_to_matrix(stacked, self.rank)
        kern = kernel_basis(m)
        gens = [tuple(sum(k[j] * self.basis[j][i] for j in range(k1)) for i in range(self.rank)) for k in kern]
        return Lattice(self.rank, gens)

    def is_full(self) -> bool:
        return len(self.basis) == self.rank

    def index(self) -> Optional[int]:
        """Index in Z^r when finite, else None."""
        if not self.is_full():
            return None
        out = 1
        for col, p in zip(self.basis, self.pivots):
            out *= col[p]
        return out

    def image(self, a, rank_out: int) -> "Lattice":
        return Lattice(rank_out, [matvec(a, b) for b in self.basis])

    def invariants(self) -> tuple:
        """Invariant factors of Z^r / L; zeros stand for free summands."""
        if self.rank == 0:
            return ()
        d = list(snf(cols_to_matrix(self.basis, self.rank))) if self.basis else []
        d = [x for x in d if x != 1]
        return tuple(d) + (0,) * (self.rank - len(self.basis))


def lattice_member(lat: Lattice, v) -> bool:
    return lat.member(v)


def lattice_intersect(a: Lattice, b: Lattice) -> Lattice:
    return a.intersect(b)


def preimage(a, n: int, target: Lattice) -> Lattice:
    """{v in Z^n : a v in target} for a matrix ``a`` with target.rank rows."""
    r = target.rank
    if n == 0:
        return Lattice.zero(0)
    if r == 0:
        return Lattice.full(n)
    m = [list(a[i]) + [-b[i] for b in target.basis] for i in range(r)]
    kern = kernel_basis(m)
    return Lattice(n, [k[:n] for k in kern])


def solve_in_span(cols: Sequence[Sequence[int]], dim: int, v) -> Optional[tuple]:
    """Integer coefficients x with sum_j x_j cols[j] = v, or None."""
    if not cols:
        return () if not any(v) else None
    basis, pivots, u = hnf_columns(cols, dim, with_transform=True)
    lat = Lattice.__new__(Lattice)
    lat.rank, lat.basis, lat.pivots, lat._key = dim, basis, pivots, None
    c = lat.coords(v)
    if c is None:
        return None
    k = len(cols)
    return tuple(sum(u[i][j] * c[j] for j in range(len(c))) for i in range(k))


def vgcd(v) -> int:
    return reduce(gcd, (abs(int(x)) for x in v), 0)
