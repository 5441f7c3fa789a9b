"""Hot inner loops.

Each kernel exists twice: a numba ``@njit`` loop version and a numpy (or plain
Python) version.  The public wrappers pick one per call according to
:func:`numba_enabled`, so flipping ``PREORDGRP_NUMBA`` at runtime switches
paths.  Both paths return identical results, including which witness is found
first.  Integer data is int64 on the compiled path; callers with
arbitrary-precision data go through :func:`fits_int64` and fall back to Python
integers when it fails.
"""

from __future__ import annotations

import numpy as np

from ._accel import njit, numba_enabled

INT64_SAFE = 2**40


def fits_int64(*arrays) -> bool:
    for a in arrays:
        for x in np.asarray(a, dtype=object).ravel():
            if abs(int(x)) >= INT64_SAFE:
                return False
    return True


def _i64(a):
    return np.ascontiguousarray(a, dtype=np.int64)


def _b(a):
    return np.ascontiguousarray(a, dtype=np.bool_)


# ---------------------------------------------------------------- group tables


@njit
def _assoc_nb(t):
    n = t.shape[0]
    for a in range(n):
        for b in range(n):
            ab = t[a, b]
            for c in range(n):
                if t[ab, c] != t[a, t[b, c]]:
                    return a, b, c
    return -1, -1, -1


def _assoc_np(t):
    for a in range(t.shape[0]):
        bad = np.argwhere(t[t[a]] != t[a][t])
        if len(bad):
            return a, int(bad[0, 0]), int(bad[0, 1])
    return -1, -1, -1


def assoc_violation(table) -> tuple[int, int, int]:
    """First triple (a, b, c) with (ab)c != a(bc), or (-1, -1, -1)."""
    fn = _assoc_nb if numba_enabled() else _assoc_np
    a, b, c = fn(_i64(table))
    return int(a), int(b), int(c)


@njit
def _closure_nb(t, mask):
    n = t.shape[0]
    out = np.zeros(n, dtype=np.bool_)
    gens = np.nonzero(mask)[0]
    queue = np.empty(n, dtype=np.int64)
    out[0] = True
    queue[0] = 0
    head, tail = 0, 1
    while head < tail:
        x = queue[head]
        head += 1
        for g in gens:
            y = t[x, g]
            if not out[y]:
                out[y] = True
                queue[tail] = y
                tail += 1
    return out


def _closure_np(t, mask):
    gens = np.flatnonzero(mask)
    out = np.zeros(t.shape[0], dtype=bool)
    out[0] = True
    frontier = np.array([0])
    while len(frontier) and len(gens):
        new = np.unique(t[np.ix_(frontier, gens)])
        new = new[~out[new]]
        out[new] = True
        frontier = new
    return out


def subgroup_closure(table, mask) -> np.ndarray:
    """Subgroup generated by ``mask`` (in a finite group the monoid closure suffices)."""
    fn = _closure_nb if numba_enabled() else _closure_np
    return fn(_i64(table), _b(mask))


@njit
def _conj_closure_nb(t, inv, mask):
    n = t.shape[0]
    out = mask.copy()
    changed = True
    while changed:
        changed = False
        for x in range(n):
            if out[x]:
                for g in range(n):
                    y = t[t[g, x], inv[g]]
                    if not out[y]:
                        out[y] = True
                        changed = True
    return out


def _conj_closure_np(t, inv, mask):
    conj = t[t, inv[:, None]]  # conj[g, x] = g x g^-1
    out = mask.copy()
    while True:
        nxt = out.copy()
        nxt[np.unique(conj[:, out])] = True
        if (nxt == out).all():
            return out
        out = nxt


def conjugation_closure(table, inverse, mask) -> np.ndarray:
    """Smallest superset of ``mask`` closed under conjugation."""
    fn = _conj_closure_nb if numba_enabled() else _conj_closure_np
    return fn(_i64(table), _i64(inverse), _b(mask))


# ------------------------------------------------------- extension-class scans


@njit
def _star_nb(t, inv, cone, eta, f):
    n = t.shape[0]
    for a in range(n):
        if not cone[a]:
            continue
        for b in range(n):
            if not cone[b] or eta[a] != eta[b]:
                continue
            ab = t[a, inv[b]]
            for c in range(n):
                if cone[c] and f[b] == f[c] and not cone[t[ab, c]]:
                    return a, b, c
    return -1, -1, -1


def _star_np(t, inv, cone, eta, f):
    idx = np.flatnonzero(cone)
    for a in idx:
        for b in idx[eta[idx] == eta[a]]:
            cs = idx[f[idx] == f[b]]
            bad = ~cone[t[t[a, inv[b]], cs]]
            if bad.any():
                return int(a), int(b), int(cs[np.argmax(bad)])
    return -1, -1, -1


def star_violation(table, inverse, cone, eta_labels, f_labels) -> tuple[int, int, int]:
    """First cone triple (a, b, c) with eta(a)=eta(b), f(b)=f(c) and a-b+c outside the cone."""
    fn = _star_nb if numba_enabled() else _star_np
    a, b, c = fn(_i64(table), _i64(inverse), _b(cone), _i64(eta_labels), _i64(f_labels))
    return int(a), int(b), int(c)


@njit
def _shs_nb(t, inv, cone, f):
    n = t.shape[0]
    for y in range(n):
        if not cone[y]:
            continue
        for x in range(n):
            if cone[x] and f[x] == f[y]:
                if not cone[t[y, inv[x]]] or not cone[t[inv[x], y]]:
                    return x, y
    return -1, -1


def _shs_np(t, inv, cone, f):
    idx = np.flatnonzero(cone)
    for y in idx:
        xs = idx[f[idx] == f[y]]
        bad = ~cone[t[y, inv[xs]]] | ~cone[t[inv[xs], y]]
        if bad.any():
            return int(xs[np.argmax(bad)]), int(y)
    return -1, -1


def shs_violation(table, inverse, cone, f_labels) -> tuple[int, int]:
    """First cone pair (x, y), scanning y outermost, with f(x)=f(y) and y-x or -x+y outside the cone."""
    fn = _shs_nb if numba_enabled() else _shs_np
    x, y = fn(_i64(table), _i64(inverse), _b(cone), _i64(f_labels))
    return int(x), int(y)


# ------------------------------------------------------------ cone membership


@njit
def _residue_in_lattice_nb(v, basis, pivots):
    r = v.shape[0]
    prev = -1
    for j in range(pivots.shape[0]):
        p = pivots[j]
        for i in range(prev + 1, p):
            if v[i] != 0:
                return False
        q = v[p] // basis[p, j]
        if q * basis[p, j] != v[p]:
            return False
        if q != 0:
            for i in range(p, r):
                v[i] -= q * basis[i, j]
        prev = p
    for i in range(prev + 1, r):
        if v[i] != 0:
            return False
    return True


@njit
def _coeff_search_nb(gens, weights, basis, pivots, target, level):
    r = gens.shape[0]
    p = gens.shape[1]
    c = np.zeros(p, dtype=np.int64)
    resid = np.empty(r, dtype=np.int64)
    if p == 0:
        if level != 0:
            return c, False
        for i in range(r):
            resid[i] = target[i]
        return c, _residue_in_lattice_nb(resid, basis, pivots)
    while True:
        s = 0
        for i in range(p - 1):
            s += weights[i] * c[i]
        rem = level - s
        if rem % weights[p - 1] == 0:
            c[p - 1] = rem // weights[p - 1]
            for row in range(r):
                acc = target[row]
                for col in range(p):
                    acc -= c[col] * gens[row, col]
                resid[row] = acc
            if _residue_in_lattice_nb(resid, basis, pivots):
                return c, True
        c[p - 1] = 0
        # odometer over c[0..p-2], last position fastest, partial sum <= level
        j = p - 2
        while j >= 0:
            c[j] += 1
            s = 0
            for i in range(p - 1):
                s += weights[i] * c[i]
            if s <= level:
                break
            c[j] = 0
            j -= 1
        if j < 0:
            return c, False


def _residue_in_lattice_py(v, basis, pivots):
    v = list(v)
    r = len(v)
    prev = -1
    for j, p in enumerate(pivots):
        if any(v[i] for i in range(prev + 1, p)):
            return False
        q, rem = divmod(v[p], basis[p][j])
        if rem:
            return False
        if q:
            for i in range(p, r):
                v[i] -= q * basis[i][j]
        prev = p
    return not any(v[i] for i in range(prev + 1, r))


def _coeff_search_py(gens, weights, basis, pivots, target, level):
    p = len(weights)
    r = len(target)

    def test(c):
        resid = [target[row] - sum(c[col] * gens[row][col] for col in range(p)) for row in range(r)]
        return _residue_in_lattice_py(resid, basis, pivots)

    if p == 0:
        return [] if level == 0 and test([]) else None

    def rec(prefix, remaining):
        if len(prefix) == p - 1:
            if remaining % weights[-1]:
                return None
            c = prefix + [remaining // weights[-1]]
            return c if test(c) else None
        i = len(prefix)
        for ci in range(remaining // weights[i] + 1):
            got = rec(prefix + [ci], remaining - ci * weights[i])
            if got is not None:
                return got
        return None

    return rec([], level)


def coefficient_search(gens, weights, basis, pivots, target, level):
    """Coefficients c >= 0 with sum(c_i * w_i) == level and target - G c in the lattice.

    ``gens`` is r x p (columns are pointed generators, all weights >= 1),
    ``basis`` is r x k in Hermite form with pivot rows ``pivots``.  Returns the
    lexicographically first solution as a list of ints, or ``None``.
    """
    if level < 0:
        return None
    r, p, k = len(target), len(weights), len(pivots)
    if numba_enabled() and fits_int64(gens, basis, target, [level]):
        c, ok = _coeff_search_nb(
            np.array(gens, dtype=np.int64).reshape(r, p),
            _i64(weights),
            np.array(basis, dtype=np.int64).reshape(r, k),
            _i64(pivots),
            _i64(target),
            int(level),
        )
        return [int(x) for x in c] if ok else None
    return _coeff_search_py(gens, weights, basis, pivots, target, level)


# ------------------------------------------------------- positivity functional


@njit
def _functional_nb(lat, gens, radius):
    r = lat.shape[0]
    lam = np.full(r, -radius, dtype=np.int64)
    best = np.zeros(r, dtype=np.int64)
    best_sum = -1
    best_norm = -1
    while True:
        ok = True
        for j in range(lat.shape[1]):
            s = 0
            for i in range(r):
                s += lam[i] * lat[i, j]
            if s != 0:
                ok = False
                break
        total = 0
        if ok:
            for j in range(gens.shape[1]):
                s = 0
                for i in range(r):
                    s += lam[i] * gens[i, j]
                if s < 1:
                    ok = False
                    break
                total += s
        if ok:
            norm = 0
            for i in range(r):
                norm += abs(lam[i])
            if best_sum < 0 or total < best_sum or (total == best_sum and norm < best_norm):
                best_sum = total
                best_norm = norm
                best[:] = lam
        i = r - 1
        while i >= 0:
            lam[i] += 1
            if lam[i] <= radius:
                break
            lam[i] = -radius
            i -= 1
        if i < 0:
            break
    return best, best_sum >= 0


def _functional_np(lat, gens, radius):
    r = lat.shape[0]
    axis = np.arange(-radius, radius + 1)
    grid = np.stack(np.meshgrid(*([axis] * r), indexing="ij"), axis=-1).reshape(-1, r)
    ok = (grid @ lat == 0).all(axis=1)
    vals = grid @ gens
    ok &= (vals >= 1).all(axis=1)
    if not ok.any():
        return None
    cand = np.flatnonzero(ok)
    total = vals[cand].sum(axis=1)
    norm = np.abs(grid[cand]).sum(axis=1)
    order = np.lexsort((cand, norm, total))
    return grid[cand[order[0]]]


def functional_search(lattice_cols, gens_cols, rank: int, radius: int):
    """Integer covector in [-radius, radius]^rank vanishing on ``lattice_cols``
    and >= 1 on every column of ``gens_cols``.

    Among valid covectors the one with the smallest total value on the
    generators wins, then the smallest l1 norm, then the first in odometer order.
    Returns a list of ints or ``None``.
    """
    if rank == 0:
        return [] if not len(gens_cols) else None
    lat = np.array(lattice_cols, dtype=np.int64).reshape(rank, -1) if len(lattice_cols) else np.zeros((rank, 0), np.int64)
    gens = np.array(gens_cols, dtype=np.int64).reshape(rank, -1) if len(gens_cols) else np.zeros((rank, 0), np.int64)
    if numba_enabled():
        best, found = _functional_nb(lat, gens, int(radius))
        return [int(x) for x in best] if found else None
    got = _functional_np(lat, gens, int(radius))
    return None if got is None else [int(x) for x in got]


# --------------------------------------------------- Hilbert basis completion


@njit
def _cd_step_nb(frontier, af, ae, basis):
    m, n = frontier.shape
    k = af.shape[1]
    out = np.empty((m * n, n), dtype=np.int64)
    cnt = 0
    for i in range(m):
        for j in range(n):
            d = 0
            for t in range(k):
                d += af[i, t] * ae[j, t]
            if d >= 0:
                continue
            for t in range(n):
                out[cnt, t] = frontier[i, t]
            out[cnt, j] += 1
            dominated = False
            for b in range(basis.shape[0]):
                le = True
                for t in range(n):
                    if basis[b, t] > out[cnt, t]:
                        le = False
                        break
                if le:
                    dominated = True
                    break
            if not dominated:
                cnt += 1
    return out[:cnt]


def _cd_step_np(frontier, af, ae, basis):
    m, n = frontier.shape
    ii, jj = np.nonzero(af @ ae.T < 0)
    cand = frontier[ii].copy()
    cand[np.arange(len(ii)), jj] += 1
    if len(basis) and len(cand):
        dom = (cand[:, None, :] >= basis[None, :, :]).all(axis=2).any(axis=1)
        cand = cand[~dom]
    return cand


def hilbert_basis_nonneg(a) -> list[tuple[int, ...]]:
    """Minimal generators of {x in N^n : a x = 0} by the Contejean-Devie completion."""
    a = np.array(a, dtype=np.int64)
    if a.ndim != 2:
        raise ValueError("expected a matrix")
    k, n = a.shape
    if n == 0:
        return []
    ae = a.T.copy()  # row j = a e_j
    frontier = np.eye(n, dtype=np.int64)
    basis = np.zeros((0, n), dtype=np.int64)
    step = _cd_step_nb if numba_enabled() else _cd_step_np
    while len(frontier):
        af = frontier @ a.T
        sol = (af == 0).all(axis=1)
        if sol.any():
            basis = np.vstack([basis, frontier[sol]])
        rest = frontier[~sol]
        if not len(rest):
            break
        cand = step(np.ascontiguousarray(rest), np.ascontiguousarray(af[~sol]), np.ascontiguousarray(ae), basis)
        frontier = np.unique(cand, axis=0) if len(cand) else cand
    basis = np.unique(basis, axis=0)
    return sorted(tuple(int(x) for x in row) for row in basis)


# ---------------------------------------------------- Grothendieck classes


@njit
def _groth_nb(pairs, sums, rep):
    n = pairs.shape[0]
    labels = np.full(n, -1, dtype=np.int64)
    nxt = 0
    for p in range(n):
        if labels[p] >= 0:
            continue
        i = pairs[p, 0]
        j = pairs[p, 1]
        for q in range(p, n):
            if labels[q] < 0 and rep[sums[i, pairs[q, 1]]] == rep[sums[j, pairs[q, 0]]]:
                labels[q] = nxt
        nxt += 1
    return labels


def _groth_np(pairs, sums, rep):
    n = len(pairs)
    labels = np.full(n, -1, dtype=np.int64)
    nxt = 0
    for p in range(n):
        if labels[p] >= 0:
            continue
        i, j = pairs[p]
        hit = rep[sums[i, pairs[:, 1]]] == rep[sums[j, pairs[:, 0]]]
        hit &= labels < 0
        hit[:p] = False
        labels[hit] = nxt
        nxt += 1
    return labels


def grothendieck_labels(pairs, sums, rep) -> np.ndarray:
    """Class labels of pairs (m1, m2) under m1 + n2 ~ m2 + n1.

    ``sums[i, j]`` is the id of element_i + element_j and ``rep`` maps a sum id
    to the representative of its stable-equality class (s ~ t iff s + k = t + k
    for some k).  Labels are assigned in order of first appearance.
    """
    fn = _groth_nb if numba_enabled() else _groth_np
    return fn(_i64(pairs), _i64(sums), _i64(rep))
