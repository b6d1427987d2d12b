"""Character degrees by Dixon's modular variant of the class-algebra method:
split the common eigenvectors of the class-multiplication matrices over a
prime field F_r with r = 1 mod exponent(G), normalize each eigenvector at the
identity class, and read the degree from the second orthogonality relation.
Everything is exact integer arithmetic, so this is an independent oracle for
the degree multisets produced by the explicit constructions."""

import math

import numpy as np

from .rings import is_prime


def group_exponent(G):
    """Least common multiple of the element orders, from class representatives."""
    e = 1
    for rep in G.class_reps:
        e = math.lcm(e, G.element_order(rep))
    return e


def dixon_prime(exponent, bound):
    """Smallest prime r = 1 mod exponent with r > bound."""
    r = bound + 1 + (-(bound)) % exponent
    while not is_prime(r):
        r += exponent
    return r


def _class_tensor(G):
    """a[i][j][m] = number of pairs (x, y) in C_i x C_j with x*y = rep_m."""
    k = G.class_count
    elements, index, mul, inv = G.elements, G.index, G.mul, G.inv
    cls_of = G._classes()[2]
    xinv = [inv(x) for x in elements]
    i_arr = cls_of * k
    T = np.empty((k, k, k), dtype=np.int64)
    for m, z in enumerate(G.class_reps):
        j_arr = np.fromiter((cls_of[index[mul(xi, z)]] for xi in xinv),
                            dtype=np.int64, count=len(elements))
        T[m] = np.bincount(i_arr + j_arr, minlength=k * k).reshape(k, k)
    return T.transpose(1, 2, 0)


def _rref(B, r):
    """Row-reduce mod r; returns (reduced rows, pivot columns)."""
    B = B.copy() % r
    pivots = []
    row = 0
    for col in range(B.shape[1]):
        sel = None
        for t in range(row, B.shape[0]):
            if B[t, col] % r:
                sel = t
                break
        if sel is None:
            continue
        B[[row, sel]] = B[[sel, row]]
        B[row] = B[row] * pow(int(B[row, col]), -1, r) % r
        for t in range(B.shape[0]):
            if t != row and B[t, col]:
                B[t] = (B[t] - B[t, col] * B[row]) % r
        pivots.append(col)
        row += 1
    return B[:row], pivots


def _nullspace(A, r):
    """RREF basis of the kernel of A mod r, as rows."""
    n = A.shape[1]
    R, pivots = _rref(A, r)
    free = [c for c in range(n) if c not in pivots]
    rows = []
    for f in free:
        v = np.zeros(n, dtype=np.int64)
        v[f] = 1
        for s, c in enumerate(pivots):
            v[c] = (-R[s, f]) % r
        rows.append(v)
    return _rref(np.array(rows, dtype=np.int64), r)[0] if rows else np.zeros((0, n), dtype=np.int64)


def _charpoly(A, r):
    """Characteristic polynomial mod r (Faddeev-LeVerrier), leading coeff first."""
    n = A.shape[0]
    c = [1]
    M = np.zeros_like(A)
    eye = np.eye(n, dtype=np.int64)
    for m in range(1, n + 1):
        M = (A @ M + c[-1] * eye) % r
        c.append(int((-np.trace(A @ M % r)) * pow(m, -1, r) % r))
    return c


def _roots(coeffs, r):
    """All roots in F_r, by evaluating at every point."""
    xs = np.arange(r, dtype=np.int64)
    acc = np.full(r, coeffs[0], dtype=np.int64)
    for c in coeffs[1:]:
        acc = (acc * xs + c) % r
    return [int(x) for x in xs[acc == 0]]


def character_degrees(G, r_override=None):
    """Sorted degree multiset of the irreducible characters of G."""
    if getattr(G, "is_abelian", False):
        return [1] * G.order
    if r_override is None and getattr(G, "_degree_multiset", None) is not None:
        return list(G._degree_multiset)
    k = G.class_count
    exponent = group_exponent(G)
    r = r_override if r_override is not None else dixon_prime(exponent, G.order)
    assert is_prime(r) and r > G.order and (r - 1) % exponent == 0
    A = _class_tensor(G)
    spaces = [_rref(np.eye(k, dtype=np.int64), r)]
    for i in range(k):
        if i == G.identity_class:
            continue
        if all(B.shape[0] == 1 for B, _ in spaces):
            break
        N = A[i]
        split = []
        for B, piv in spaces:
            if B.shape[0] == 1:
                split.append((B, piv))
                continue
            Bi = B @ N.T % r
            R = Bi[:, piv] % r
            assert np.array_equal(R @ B % r, Bi)
            for lam in _roots(_charpoly(R, r), r):
                Kb = _nullspace((R.T - lam * np.eye(R.shape[0], dtype=np.int64)) % r, r)
                if Kb.shape[0]:
                    split.append(_rref(Kb @ B % r, r))
        assert sum(B.shape[0] for B, _ in split) == sum(B.shape[0] for B, _ in spaces)
        spaces = split
    assert all(B.shape[0] == 1 for B, _ in spaces) and len(spaces) == k
    ic = G.identity_class
    jstar = np.array([G.cls_index(G.inv(rep)) for rep in G.class_reps])
    sizes = G.class_sizes
    degrees = []
    for B, _ in spaces:
        v = B[0]
        assert v[ic] % r
        w = v * pow(int(v[ic]), -1, r) % r
        s = 0
        for j in range(k):
            s = (s + int(w[j]) * int(w[jstar[j]]) * pow(int(sizes[j]), -1, r)) % r
        d2 = G.order * pow(s, -1, r) % r
        d = math.isqrt(d2)
        assert d * d == d2 and 1 <= d * d <= G.order
        degrees.append(d)
    assert sum(d * d for d in degrees) == G.order
    degrees = sorted(degrees)
    if r_override is None:
        try:
            G._degree_multiset = degrees
        except AttributeError:
            pass
    return list(degrees)
