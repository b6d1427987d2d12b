"""Dual characters of congruence kernels, the conjugation action on them,
orbit classification, and submodule geometry."""

from itertools import product

import numpy as np

from modrep2.rings import MTOL, make_ring


class CongruenceDual:
    """Additive coordinates and dual characters of a congruence subgroup at
    depth (i, sigma): coordinates (u, v, w, z) with u, v at level i and w, z at
    level i - sigma, additive under the group law."""

    def __init__(self, G, i, sigma):
        if not (0 <= sigma <= 1 and sigma < i <= G.l2 and i <= G.l1 - 1
                and i - sigma <= G.l2 - 1):
            raise ValueError("depth (%d,%d) gives no proper coordinate window"
                             % (i, sigma))
        self.G, self.i, self.sigma = G, i, sigma
        self.K = G.subgroup("congruence", i=i, sigma=sigma)
        self.Ri = make_ring(G.backend, G.q, i)
        self.Rs = make_ring(G.backend, G.q, i - sigma)
        R1, R2 = G.R1, G.R2
        qi, qs = self.Ri.size, self.Rs.size
        coords = {}
        for g in self.K.elements:
            a, b, c, d = g
            u = R1.pi_div(R1.sub(a, 1), G.l1 - i) % qi
            v = R2.pi_div(b, G.l2 - i) % qi
            w = R2.pi_div(c, G.l2 - i + sigma) % qs
            z = R2.pi_div(R2.sub(d, 1), G.l2 - i + sigma) % qs
            coords[g] = (u, v, w, z)
        assert len(set(coords.values())) == self.K.order == qi * qi * qs * qs
        self.coords = coords
        self.duals = list(product(range(qi), range(qi), range(qs), range(qs)))
        self.dual_index = {t: j for j, t in enumerate(self.duals)}
        self._orbit_data = None

    def pair(self, theta, k):
        """Value of the dual character theta at the kernel element k."""
        u, v, w, z = self.coords[k]
        uh, vh, wh, zh = theta
        Ri, Rs = self.Ri, self.Rs
        x = Ri.add[Ri.mul[uh][u]][Ri.mul[vh][v]]
        y = Rs.add[Rs.mul[wh][w]][Rs.mul[zh][z]]
        return Ri.psi(Ri.add[x][Ri.pi_mul(y, self.sigma)])

    def values(self, theta):
        """Values of theta over K.elements, in order."""
        return np.array([self.pair(theta, k) for k in self.K.elements])

    def value_matrix(self):
        """|duals| x |K| table of character values."""
        return np.array([self.values(t) for t in self.duals])

    def act(self, g, theta):
        """Dual of the conjugation action: (g.theta)(k) = theta(g^-1 k g)."""
        G = self.G
        if G.rect:
            # pairing is psi(tr(theta^T m)), so conjugating the coordinate matrix
            # by gbar turns into similarity of theta by the transpose of gbar
            assert self.sigma == 0
            Ri = self.Ri
            qi = Ri.size
            Mi, Ai, Ii, Ni = Ri.mul, Ri.add, Ri.inv, Ri.neg
            a, b, c, d = (x % qi for x in g)
            u, v, w, z = theta
            di = Ii[Ai[Mi[a][d]][Ni[Mi[b][c]]]]
            p11 = Mi[di][Ai[Mi[d][u]][Ni[Mi[c][w]]]]
            p12 = Mi[di][Ai[Mi[d][v]][Ni[Mi[c][z]]]]
            p21 = Mi[di][Ai[Mi[a][w]][Ni[Mi[b][u]]]]
            p22 = Mi[di][Ai[Mi[a][z]][Ni[Mi[b][v]]]]
            return (Ai[Mi[p11][a]][Mi[p12][b]], Ai[Mi[p11][c]][Mi[p12][d]],
                    Ai[Mi[p21][a]][Mi[p22][b]], Ai[Mi[p21][c]][Mi[p22][d]])
        R = G.R1
        M, A, I, Ng = R.mul, R.add, R.inv, R.neg
        dl = R.pi_pow(G.l1 - G.l2)
        a, b, c, d = g
        ai, di = I[a], I[d]
        u, v, w, z = theta
        ba, cd = M[b][ai], M[c][di]
        ca, bd = M[c][ai], M[b][di]
        da, ad = M[d][ai], M[a][di]
        ei = I[A[1][Ng[M[dl][M[M[ai][di]][M[b][c]]]]]]
        up = M[ei][A[A[u][M[dl][M[ba][v]]]]
                   [Ng[A[M[dl][M[cd][w]]][M[M[dl][dl]][M[M[ba][cd]][z]]]]]]
        vp = M[ei][A[A[M[da][v]][M[ca][u]]]
                   [Ng[A[M[dl][M[ca][z]]][M[dl][M[M[ca][cd]][w]]]]]]
        wp = M[ei][A[A[M[ad][w]][M[dl][M[bd][z]]]]
                   [Ng[A[M[bd][u]][M[dl][M[M[bd][ba]][v]]]]]]
        zp = M[ei][A[A[z][M[cd][w]]][Ng[A[M[ba][v]][M[M[ba][cd]][u]]]]]
        return (up % self.Ri.size, vp % self.Ri.size,
                wp % self.Rs.size, zp % self.Rs.size)

    def orbits(self):
        """Orbit decomposition of the dual under the group action: list of
        (representative, size), plus an index array aligned with self.duals."""
        if self._orbit_data is not None:
            return self._orbit_data
        n = len(self.duals)
        orbit_of = np.full(n, -1, dtype=np.int64)
        reps, sizes = [], []
        dirs = list(dict.fromkeys(
            t for g in self.G.gens for t in (g, self.G.inv(g))))
        for j0 in range(n):
            if orbit_of[j0] >= 0:
                continue
            o = len(reps)
            reps.append(self.duals[j0])
            orbit_of[j0] = o
            stack = [self.duals[j0]]
            size = 1
            while stack:
                t = stack.pop()
                for g in dirs:
                    t2 = self.act(g, t)
                    j = self.dual_index[t2]
                    if orbit_of[j] < 0:
                        orbit_of[j] = o
                        size += 1
                        stack.append(t2)
            sizes.append(size)
        assert sum(sizes) == n
        self._orbit_data = (reps, sizes, orbit_of)
        return self._orbit_data

    def invariants(self, theta):
        """(shifted trace, determinant) of a dual character, constant on orbits:
        trace at level i, determinant at level i - sigma."""
        Ri = self.Ri
        u, v, w, z = theta
        dl = Ri.pi_pow(self.G.l1 - self.G.l2)
        tr = Ri.add[u][Ri.mul[dl][z]]
        det = Ri.add[Ri.mul[u][z]][Ri.neg[Ri.mul[w][v]]] % self.Rs.size
        return (tr, det)

    def classify(self, theta):
        """Orbit label at depth (1, 0): a (kind, parameter) pair."""
        assert self.i == 1 and self.sigma == 0
        r = self.Ri
        q = self.G.q
        u, v, w, z = theta
        if self.G.rect:
            tr = r.add[u][z]
            det = r.add[r.mul[u][z]][r.neg[r.mul[v][w]]]
            roots = [x for x in range(q)
                     if r.add[r.mul[x][x]][r.add[r.neg[r.mul[tr][x]]][det]] == 0]
            if len(roots) == 2:
                return ("split", tuple(sorted(roots)))
            if len(roots) == 1:
                s = roots[0]
                if v == 0 and w == 0 and u == s and z == s:
                    return ("scalar", s)
                return ("jordan", s)
            return ("irreducible", (tr, det))
        if u != 0:
            s = r.add[z][r.neg[r.mul[r.mul[v][w]][r.inv[u]]]]
            return ("generic", (u, s))
        if v == 0 and w == 0:
            return ("central", z)
        if v == 0:
            return ("nilp_lower", None)
        if w == 0:
            return ("nilp_upper", None)
        return ("off_diag", r.mul[v][w])

    def orbit_table(self):
        """Labelled orbit census: {label: (orbit count, orbit size)} at depth (1,0),
        with labels collapsed to their kind."""
        reps, sizes, orbit_of = self.orbits()
        labels = [self.classify(t) for t in reps]
        assert len(set(labels)) == len(labels)
        for rep, lab in zip(reps, labels):
            o = self.dual_index[rep]
            for j, t in enumerate(self.duals):
                if orbit_of[j] == orbit_of[o]:
                    assert self.classify(t) == lab
        table = {}
        for (kind, _), size in zip(labels, sizes):
            cnt, sz = table.get(kind, (0, size))
            assert sz == size
            table[kind] = (cnt + 1, size)
        return table


def eta_dual(u_hat, w_hat):
    """The distinguished dual character with top slot u_hat, unit lower slot."""
    return (u_hat, 1, w_hat, 0)


def cuspidal_parameters(G):
    """All (u_hat, w_hat) with u_hat non-unit at the half level and w_hat a unit
    one step below."""
    l, eps = G.half_levels()
    Rl = make_ring(G.backend, G.q, l)
    Rs = make_ring(G.backend, G.q, l - eps)
    us = [x for x in range(Rl.size) if Rl.val[x] >= 1]
    return [(u, w) for u in us for w in Rs.units]


def orbits_on_kernel(G):
    """Conjugation orbits of the whole group on the depth-(1,0) congruence
    subgroup's elements: list of (representative, size)."""
    K = G.subgroup("congruence", i=1, sigma=0)
    idx = {k: j for j, k in enumerate(K.elements)}
    seen = np.zeros(K.order, dtype=bool)
    dirs = list(dict.fromkeys(t for g in G.gens for t in (g, G.inv(g))))
    out = []
    for j0, k0 in enumerate(K.elements):
        if seen[j0]:
            continue
        seen[j0] = True
        stack = [k0]
        size = 1
        while stack:
            x = stack.pop()
            for t in dirs:
                y = G.conj(x, t)
                j = idx[y]
                if not seen[j]:
                    seen[j] = True
                    size += 1
                    stack.append(y)
        out.append((k0, size))
    assert sum(s for _, s in out) == K.order
    return out


def _cyclic_span(G, m):
    R1, R2 = G.R1, G.R2
    s2 = G.s2
    x1, x2 = m
    return frozenset((R1.mul[r][x1], R2.mul[r % s2][x2]) for r in range(G.s1))


def module_type(G, S):
    """Column type (m1, m2) of a submodule S of the rank-two module."""
    R1, R2 = G.R1, G.R2
    q = G.q
    total = 0
    n = len(S)
    while q ** total < n:
        total += 1
    assert q ** total == n
    cur = S
    m1 = 0
    while len(cur) > 1:
        cur = {(R1.pi_mul(x1, 1), R2.pi_mul(x2, 1)) for x1, x2 in cur}
        m1 += 1
    assert m1 <= G.l1 and total - m1 <= m1
    return (m1, total - m1)


def all_submodules(G):
    """Every submodule of the rank-two module, as frozensets; two generators
    always suffice, so take pairwise sums of the cyclic submodules."""
    R1, R2 = G.R1, G.R2
    M = [(x1, x2) for x1 in range(G.s1) for x2 in range(G.s2)]
    cyclic = list(dict.fromkeys(_cyclic_span(G, m) for m in M))
    seen = set()
    out = []
    for C1 in cyclic:
        for C2 in cyclic:
            S = frozenset((R1.add[x1][y1], R2.add[x2][y2])
                          for x1, x2 in C1 for y1, y2 in C2)
            if S not in seen:
                seen.add(S)
                out.append(S)
    return out


def embeddings(G, mu):
    """All injective module maps from the type-mu module into the rank-two
    module, as generator-image pairs (y1, y2)."""
    m1, m2 = mu
    l1, l2 = G.lam
    if not (m1 >= m2 >= 0 and m1 <= l1 and m2 <= l2):
        raise ValueError("type %r does not embed in type %r" % (mu, G.lam))
    R1, R2 = G.R1, G.R2
    s2 = G.s2
    M = [(x1, x2) for x1 in range(G.s1) for x2 in range(G.s2)]
    Y1 = [y for y in M if R1.pi_mul(y[0], m1) == 0 and R2.pi_mul(y[1], m1) == 0]
    Y2 = [y for y in M if R1.pi_mul(y[0], m2) == 0 and R2.pi_mul(y[1], m2) == 0]
    n = G.q ** (m1 + m2)
    out = []
    for y1 in Y1:
        for y2 in Y2:
            image = {(R1.add[R1.mul[s][y1[0]]][R1.mul[t][y2[0]]],
                      R2.add[R2.mul[s % s2][y1[1]]][R2.mul[t % s2][y2[1]]])
                     for s in range(G.q ** m1) for t in range(G.q ** m2)}
            if len(image) == n:
                out.append((y1, y2))
    assert out
    return out


def grassmannian_orbits(G, mu):
    """Orbit sizes of the group acting on embeddings of the type-mu module."""
    embs = embeddings(G, mu)
    index = {e: j for j, e in enumerate(embs)}
    seen = np.zeros(len(embs), dtype=bool)
    dirs = list(dict.fromkeys(t for g in G.gens for t in (g, G.inv(g))))
    sizes = []
    for j0, e0 in enumerate(embs):
        if seen[j0]:
            continue
        seen[j0] = True
        stack = [e0]
        size = 1
        while stack:
            y1, y2 = stack.pop()
            for g in dirs:
                e2 = (G.module_act(g, y1), G.module_act(g, y2))
                j = index[e2]
                if not seen[j]:
                    seen[j] = True
                    size += 1
                    stack.append(e2)
        sizes.append(size)
    assert sum(sizes) == len(embs)
    return sizes


def grassmannian_transitive(G, mu):
    return len(grassmannian_orbits(G, mu)) == 1


def symmetric_type(lam, mu):
    """Closed-form predicate for single-orbit submodule types."""
    l1, l2 = lam
    if l1 == l2:
        return True
    return mu[0] == l1


def inner_types(lam):
    """The intermediate types (l1, m) strictly between the rank-one boundary
    and lam itself."""
    l1, l2 = lam
    return [(l1, m) for m in range(1, l2)]
