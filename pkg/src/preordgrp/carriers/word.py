"""Bounded-word carriers: groups generated by invertible integer matrices.

Elements are matrices stored as tuples of tuples.  The carrier is explored by
breadth-first search over words in the generators and their inverses up to a
length bound B, so universally quantified statements about a word group are
only ever checked on that ball.

Some questions can still be answered exactly.  When every generator is upper
unitriangular, the superdiagonal map M ↦ (M[i][i+1])_i is a homomorphism to an
abelian group; if the images of the generators are linearly independent it
identifies the abelianization with Z^k (k = number of generators) and its
kernel with the derived subgroup.  We call this the unitriangular certificate.
"""

from __future__ import annotations

import re
from functools import cached_property
from typing import Callable, Optional, Sequence

from ..algebra.lattice import Lattice, solve_in_span
from ..errors import ModelError, UnsupportedError
from ..verdict import Fails, Holds, Unknown, Verdict

Matrix = tuple

MAX_BALL = 200_000


def mat(rows) -> Matrix:
    return tuple(tuple(int(x) for x in r) for r in rows)


def mmul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n))


def ident(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def _det(m) -> int:
    n = len(m)
    if n == 1:
        return m[0][0]
    return sum((-1) ** j * m[0][j] * _det([row[:j] + row[j + 1 :] for row in m[1:]]) for j in range(n))


def minv(a: Matrix) -> Matrix:
    """Inverse of a matrix with determinant ±1 (adjugate formula)."""
    n = len(a)
    rows = [list(r) for r in a]
    d = _det(rows)
    if d not in (1, -1):
        raise ModelError(f"matrix {a} is not invertible over the integers (det {d})")
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [r[:j] + r[j + 1 :] for k, r in enumerate(rows) if k != i]
            adj[j][i] = (-1) ** (i + j) * (_det(minor) if minor else 1)
    return tuple(tuple(x * d for x in r) for r in adj)


class WordGroup:
    """Group generated by integer matrices, explored to word length ``bound``."""

    def __init__(self, gens: Sequence, names: Optional[Sequence[str]] = None, bound: int = 6, aliases=None):
        if not gens:
            raise ModelError("word group needs at least one generator")
        self.gens = tuple(mat(g) for g in gens)
        n = len(self.gens[0])
        for g in self.gens:
            if len(g) != n or any(len(r) != n for r in g):
                raise ModelError("generators must be square matrices of one size")
        self.dim = n
        self.inverses = tuple(minv(g) for g in self.gens)
        self.names = tuple(names) if names else tuple(f"g{i}" for i in range(len(self.gens)))
        if len(self.names) != len(self.gens):
            raise ModelError("one name per generator")
        self.bound = int(bound)
        if self.bound < 1:
            raise ModelError("word bound must be >= 1")
        self.aliases: dict[str, Matrix] = {}
        for name, expr in (aliases or {}).items():
            self.aliases[name] = self.parse_element(expr) if isinstance(expr, str) else mat(expr)

    backend = "word"
    rank = 0

    def __repr__(self):
        return f"WordGroup(gens={list(self.names)}, bound={self.bound})"

    def same_as(self, other) -> bool:
        return isinstance(other, WordGroup) and self.gens == other.gens

    @property
    def identity(self) -> Matrix:
        return ident(self.dim)

    def op(self, x, y):
        return mmul(x, y)

    def neg(self, x):
        return minv(x)

    def sub(self, x, y):
        return mmul(x, minv(y))

    def is_identity(self, x) -> bool:
        return x == self.identity

    def commutator(self, x, y):
        return mmul(mmul(mmul(x, y), minv(x)), minv(y))

    def conj(self, g, x):
        return mmul(mmul(g, x), minv(g))

    # ball ---------------------------------------------------------------

    def ball(self, bound: Optional[int] = None) -> dict:
        """Element -> shortest word (tuple of (generator, ±1)), in BFS order."""
        b = self.bound if bound is None else bound
        cache = self.__dict__.setdefault("_balls", {})
        if b in cache:
            return cache[b]
        words = {self.identity: ()}
        frontier = [self.identity]
        steps = [(i, 1, g) for i, g in enumerate(self.gens)] + [(i, -1, g) for i, g in enumerate(self.inverses)]
        for _ in range(b):
            nxt = []
            for x in frontier:
                w = words[x]
                for i, s, g in steps:
                    y = mmul(x, g)
                    if y not in words:
                        words[y] = w + ((i, s),)
                        nxt.append(y)
            if len(words) > MAX_BALL:
                raise UnsupportedError(f"word ball exceeds {MAX_BALL} elements; lower the bound")
            frontier = nxt
        cache[b] = words
        return words

    # parsing / printing ---------------------------------------------------

    _TOKEN = re.compile(r"\s*(\[[^\]]*\]|[A-Za-z_][A-Za-z0-9_-]*)(\^(-?\d+))?\s*")

    def parse_element(self, text: str) -> Matrix:
        text = text.strip()
        if text in ("identity", "e", "0"):
            return self.identity
        out = self.identity
        for part in text.split("*"):
            m = self._TOKEN.fullmatch(part)
            if not m:
                raise ModelError(f"cannot parse word element {part!r}")
            atom, exp = m.group(1), int(m.group(3) or 1)
            if atom.startswith("["):
                a, b = [s.strip() for s in atom[1:-1].split(",")]
                x = self.commutator(self.parse_element(a), self.parse_element(b))
            elif atom in self.names:
                x = self.gens[self.names.index(atom)]
            elif atom in self.aliases:
                x = self.aliases[atom]
            else:
                raise ModelError(f"unknown generator or alias {atom!r}")
            base = x if exp >= 0 else minv(x)
            for _ in range(abs(exp)):
                out = mmul(out, base)
        return out

    def format(self, x) -> str:
        if x == self.identity:
            return "identity"
        for name, a in self.aliases.items():
            if a == x:
                return name
        for i, g in enumerate(self.gens):
            if g == x:
                return self.names[i]
        w = self.ball().get(x)
        if w is None:
            return "[" + ";".join(",".join(str(v) for v in r) for r in x) + "]"
        parts = []
        for i, s in w:
            nm = self.names[i]
            if parts and parts[-1][0] == nm:
                parts[-1][1] += s
            else:
                parts.append([nm, s])
        return "*".join(nm if e == 1 else f"{nm}^{e}" for nm, e in parts if e)

    # unitriangular certificate -----------------------------------------------

    @cached_property
    def unitriangular(self) -> bool:
        n = self.dim
        for g in self.gens:
            for i in range(n):
                for j in range(n):
                    if (i == j and g[i][j] != 1) or (i > j and g[i][j] != 0):
                        return False
        return True

    def superdiag(self, x) -> tuple:
        return tuple(x[i][i + 1] for i in range(self.dim - 1))

    @cached_property
    def has_certificate(self) -> bool:
        if not self.unitriangular:
            return False
        cols = [self.superdiag(g) for g in self.gens]
        return len(Lattice(self.dim - 1, cols).basis) == len(cols)

    def require_certificate(self):
        if not self.has_certificate:
            raise UnsupportedError(
                "exact abelianization needs upper unitriangular generators with independent superdiagonals"
            )

    def ab_coords(self, x) -> tuple:
        """Coordinates of the class of x in ab(G) ≅ Z^k (basis: generator classes)."""
        self.require_certificate()
        c = solve_in_span([self.superdiag(g) for g in self.gens], self.dim - 1, self.superdiag(x))
        if c is None:  # pragma: no cover - x is in the group, so its image is in the span
            raise ModelError("element is outside the generated group")
        return tuple(c)

    def from_coords(self, c) -> "Matrix":
        """The product g_1^{c_1} ... g_k^{c_k}."""
        out = self.identity
        for g, gi, k in zip(self.gens, self.inverses, c):
            base = g if k >= 0 else gi
            for _ in range(abs(k)):
                out = mmul(out, base)
        return out

    @cached_property
    def generator_commutators(self) -> list:
        k = len(self.gens)
        return [(i, j, self.commutator(self.gens[i], self.gens[j])) for i in range(k) for j in range(i + 1, k)]

    @cached_property
    def is_abelian(self) -> bool:
        return all(c == self.identity for _, _, c in self.generator_commutators)


# --------------------------------------------------------------------- cones

EXACT_CONES: dict[str, Callable[[Matrix], bool]] = {}


def register_exact_cone(name: str, predicate: Callable[[Matrix], bool]) -> None:
    """Extension point: an exact membership test for a word cone."""
    EXACT_CONES[name] = predicate


def _heis_p0(m) -> bool:
    a, b, c = m[0][1], m[1][2], m[0][2]
    return b == 0 and (a >= 1 or (a == 0 and c >= 0))


register_exact_cone("heis-P0", _heis_p0)
register_exact_cone("all", lambda m: True)
register_exact_cone("trivial", lambda m: all(m[i][j] == int(i == j) for i in range(len(m)) for j in range(len(m))))


class WordCone:
    """Conjugation-closed submonoid generated by ``gens``, explored inside the ball."""

    def __init__(self, group: WordGroup, gens: Sequence, exact: Optional[str] = None):
        self.group = group
        self.gens = tuple(mat(g) for g in gens)
        if exact is not None and exact not in EXACT_CONES:
            raise ModelError(f"no exact cone predicate registered under {exact!r}")
        self.exact = exact

    def __repr__(self):
        return f"WordCone(gens={[self.group.format(g) for g in self.gens]}, exact={self.exact})"

    def ball(self, bound: Optional[int] = None) -> list:
        """Cone elements reachable inside the word ball, in BFS order of the ball."""
        b = self.group.bound if bound is None else bound
        cache = self.__dict__.setdefault("_balls", {})
        if b in cache:
            return cache[b]
        words = self.group.ball(b)
        seeds = []
        seen_seed = set()
        for g in words:
            for c in self.gens:
                y = self.group.conj(g, c)
                if y in words and y not in seen_seed:
                    seen_seed.add(y)
                    seeds.append(y)
        reached = {self.group.identity}
        frontier = [self.group.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for s in seeds:
                    y = mmul(x, s)
                    if y in words and y not in reached:
                        reached.add(y)
                        nxt.append(y)
            frontier = nxt
        order = [x for x in words if x in reached]
        cache[b] = order
        return order

    def ball_set(self, bound: Optional[int] = None) -> frozenset:
        b = self.group.bound if bound is None else bound
        cache = self.__dict__.setdefault("_sets", {})
        if b not in cache:
            cache[b] = frozenset(self.ball(b))
        return cache[b]

    def member(self, x, bound: Optional[int] = None) -> Verdict:
        b = self.group.bound if bound is None else bound
        if x in self.ball_set(b):
            return Holds(("word", self.group.format(x)))
        if self.exact is not None:
            if EXACT_CONES[self.exact](x):
                return Holds(("exact", self.exact))
            return Fails(x, f"outside the cone by the exact predicate {self.exact}")
        return Unknown(b, "not reached inside the word ball", witness=x)


def validate_word_cone(cone: WordCone, group: WordGroup, bound: Optional[int] = None) -> Verdict:
    """Word cones are conjugation-closed submonoids by construction; an exact
    predicate, when present, must accept every element reached in the ball."""
    b = group.bound if bound is None else bound
    if cone.exact is not None:
        pred = EXACT_CONES[cone.exact]
        for x in cone.ball(b):
            if not pred(x):
                return Fails(("predicate", group.format(x)), "exact predicate rejects a reached cone element")
    return Holds(("closure", len(cone.ball(b))))


def heisenberg(bound: int = 6) -> WordGroup:
    x = ((1, 1, 0), (0, 1, 0), (0, 0, 1))
    y = ((1, 0, 0), (0, 1, 1), (0, 0, 1))
    return WordGroup([x, y], names=["x", "y"], bound=bound, aliases={"z": "[x,y]"})
