"""Automorphism groups of rank-two modules over truncated local rings.

A module type is a pair lam = (l1, l2) with l1 >= l2 >= 0 of column levels.
The full automorphism group of o_{l1} x o_{l2} is realized on 4-tuples
(a, b, c, d) of ring codes: a is a level-l1 unit, d a level-l2 unit, c is a
level-l2 entry, and b is the level-l2 coefficient of the canonical embedding
pi^(l1-l2) * o_{l1} -> wait-free shorthand for the off-diagonal map; in the
square case l1 == l2 the tuple is an honest invertible 2x2 matrix.  One
multiplication formula covers both shapes.
"""

import random
from functools import lru_cache
from itertools import product

import numpy as np

from modrep2.rings import SimpleAbelianGroup, make_ring


def greedy_generators(G):
    """Small generating list: scan elements in order, keep those outside the
    running closure."""
    gens = []
    closure = {G.identity}
    for e in G.elements:
        if e not in closure:
            gens.append(e)
            frontier = list(closure)
            while frontier:
                x = frontier.pop()
                for t in gens:
                    y = G.mul(x, t)
                    if y not in closure:
                        closure.add(y)
                        frontier.append(y)
    return gens


def generators_of(G):
    g = getattr(G, "gens", None)
    return g if g is not None else greedy_generators(G)


def additive_generators(ring):
    """Generators of (o_level, +) as an abelian p-group: one per digit slot."""
    p = ring.field.p if ring.field else ring.q
    return [ring.pi_mul(p ** i, j) for j in range(ring.level) for i in range(ring.f)]


class GroupBase:
    """Shared machinery: conjugacy classes by orbit sweep, commutators,
    abelianization.  Subclasses fill elements, index, mul, inv, identity, gens."""

    name = ""
    is_abelian = False

    @property
    def order(self):
        return len(self.elements)

    def pow(self, x, k):
        out = self.identity
        base = x if k >= 0 else self.inv(x)
        for _ in range(abs(k)):
            out = self.mul(out, base)
        return out

    def element_order(self, x):
        n, y = 1, x
        while y != self.identity:
            y = self.mul(y, x)
            n += 1
        return n

    def conj(self, x, t):
        return self.mul(self.mul(self.inv(t), x), t)

    def assert_generating(self):
        if getattr(self, "_gen_checked", False):
            return
        closure = {self.identity}
        frontier = [self.identity]
        while frontier:
            x = frontier.pop()
            for t in self.gens:
                y = self.mul(x, t)
                if y not in closure:
                    closure.add(y)
                    frontier.append(y)
        assert len(closure) == self.order, \
            "generators span %d of %d elements" % (len(closure), self.order)
        self._gen_checked = True

    def _compute_classes(self):
        n = self.order
        if self.is_abelian:
            cls_of = np.arange(n, dtype=np.int64)
            return (list(self.elements), np.ones(n, dtype=np.int64), cls_of)
        self.assert_generating()
        mul, inv, idx = self.mul, self.inv, self.index
        dirs = []
        seen = set()
        for g in self.gens:
            for t in (g, inv(g)):
                if t not in seen:
                    seen.add(t)
                    dirs.append((t, inv(t)))
        cls_of = np.full(n, -1, dtype=np.int64)
        reps, sizes = [], []
        for i0 in range(n):
            if cls_of[i0] >= 0:
                continue
            c = len(reps)
            reps.append(self.elements[i0])
            cls_of[i0] = c
            stack = [self.elements[i0]]
            size = 1
            while stack:
                x = stack.pop()
                for t, ti in dirs:
                    y = mul(mul(ti, x), t)
                    j = idx[y]
                    if cls_of[j] < 0:
                        cls_of[j] = c
                        size += 1
                        stack.append(y)
            sizes.append(size)
        assert sum(sizes) == n
        return (reps, np.array(sizes, dtype=np.int64), cls_of)

    def _classes(self):
        data = getattr(self, "_class_data", None)
        if data is None:
            data = self._compute_classes()
            self._class_data = data
        return data

    @property
    def class_reps(self):
        return self._classes()[0]

    @property
    def class_sizes(self):
        return self._classes()[1]

    @property
    def class_count(self):
        return len(self._classes()[0])

    def cls_index(self, e):
        return int(self._classes()[2][self.index[e]])

    @property
    def identity_class(self):
        return self.cls_index(self.identity)

    def class_members(self, c):
        cls_of = self._classes()[2]
        return [self.elements[i] for i in np.nonzero(cls_of == c)[0]]

    def commutator_subgroup(self):
        """Normal closure of the commutators of the generators."""
        self.assert_generating()
        mul, inv = self.mul, self.inv
        seeds = set()
        for g in self.gens:
            for h in self.gens:
                seeds.add(mul(inv(g), mul(inv(h), mul(g, h))))
        seeds.discard(self.identity)
        sgens = sorted(seeds, key=_elem_key)
        while True:
            S = {self.identity}
            frontier = [self.identity]
            while frontier:
                x = frontier.pop()
                for t in sgens:
                    y = mul(x, t)
                    if y not in S:
                        S.add(y)
                        frontier.append(y)
            new = []
            for t in self.gens:
                ti = inv(t)
                for s in S:
                    y = mul(mul(ti, s), t)
                    if y not in S:
                        new.append(y)
            if not new:
                break
            sgens.extend(sorted(set(new), key=_elem_key))
        members = [e for e in self.elements if e in S]
        return Subgroup(self, members, name=self.name + ".derived")

    def abelianization(self):
        return QuotientGroup(self, self.commutator_subgroup())


def _elem_key(e):
    return e if isinstance(e, tuple) else (e,)


class AutGroup(GroupBase):
    """Automorphism group of the rank-two module o_{l1} x o_{l2}, l1 >= l2 >= 1."""

    def __init__(self, backend, q, lam):
        l1, l2 = lam
        if not (l1 >= l2 >= 1):
            raise ValueError("module type must satisfy l1 >= l2 >= 1, got %r" % (lam,))
        self.backend, self.q, self.lam = backend, q, (l1, l2)
        self.l1, self.l2 = l1, l2
        self.rect = l1 == l2
        self.R1 = make_ring(backend, q, l1)
        self.R2 = make_ring(backend, q, l2)
        R1, R2 = self.R1, self.R2
        s1, s2 = R1.size, R2.size
        self.s1, self.s2 = s1, s2
        dd = l1 - l2
        d1c, d2c = R1.pi_pow(dd), R2.pi_pow(dd)
        A1, M1, I1, N1 = R1.add, R1.mul, R1.inv, R1.neg
        A2, M2, I2, N2 = R2.add, R2.mul, R2.inv, R2.neg

        def mul(g, h):
            a, b, c, d = g
            A, B, C, D = h
            return (A1[M1[a][A]][M1[d1c][M2[b][C]]],
                    A2[M2[a % s2][B]][M2[b][D]],
                    A2[M2[c][A % s2]][M2[d][C]],
                    A2[M2[d][D]][M2[d2c][M2[c][B]]])

        def det(g):
            a, b, c, d = g
            return A2[M2[a % s2][d]][N2[M2[d2c][M2[b][c]]]]

        if self.rect:
            def inv(g):
                a, b, c, d = g
                di = I1[det(g)]
                return (M1[di][d], N1[M1[di][b]], N1[M1[di][c]], M1[di][a])
        else:
            def inv(g):
                a, b, c, d = g
                ai, dinv = I1[a], I2[d]
                ai2 = ai % s2
                t = M2[M2[ai2][dinv]][M2[b][c]]
                ei = I1[A1[1][N1[M1[d1c][t]]]]
                ei2 = ei % s2
                u = M2[ei2][ai2]
                return (M1[ei][ai], N2[M2[u][M2[dinv][b]]],
                        N2[M2[u][M2[dinv][c]]], M2[ei2][dinv])

        self.mul, self.inv, self.det = mul, inv, det
        self.identity = (1, 0, 0, 1)
        self._subgroup_cache = {}

        if self.rect:
            self.elements = [g for g in product(range(s1), repeat=4)
                             if R1.val[det(g)] == 0]
            expect = q ** (4 * l1 - 3) * (q - 1) * (q * q - 1)
        else:
            self.elements = [(a, b, c, d) for a in R1.units for b in range(s2)
                             for c in range(s2) for d in R2.units]
            expect = q ** (l1 + 3 * l2 - 2) * (q - 1) ** 2
        assert len(self.elements) == expect
        self.index = {g: i for i, g in enumerate(self.elements)}

        gens = []
        for t in additive_generators(R2):
            gens.append((1, t, 0, 1))
            gens.append((1, 0, t, 1))
        for u in greedy_generators(_unit_sag(R1)):
            gens.append((u, 0, 0, 1))
        for u in greedy_generators(_unit_sag(R2)):
            gens.append((1, 0, 0, u))
        if self.rect:
            gens.append((0, 1, 1, 0))
        self.gens = gens
        self.name = "Aut(%s,q=%d,%s)" % (backend, q, (l1, l2))

    def module_act(self, g, m):
        """Action on module elements (x1, x2) with x1 at level l1, x2 at level l2."""
        a, b, c, d = g
        x1, x2 = m
        R1, R2 = self.R1, self.R2
        y1 = R1.add[R1.mul[a][x1]][R1.mul[self.R1.pi_pow(self.l1 - self.l2)][R1.mul[b][x2]]]
        y2 = R2.add[R2.mul[c][x1 % self.s2]][R2.mul[d][x2]]
        return (y1, y2)

    def floor_map(self, g):
        """Reduction onto the group of the floor type (l1-1, l2-1); needs l2 >= 2."""
        if self.l2 < 2:
            raise ValueError("floor reduction stops at column levels %r" % (self.lam,))
        q = self.q
        a, b, c, d = g
        return (a % q ** (self.l1 - 1), b % q ** (self.l2 - 1),
                c % q ** (self.l2 - 1), d % q ** (self.l2 - 1))

    def embed_map(self, g, m):
        """Coordinates of a depth-m embedded-submodule stabilizer element in the
        group of type (l1, m); g must have val(c) >= l2 - m."""
        q = self.q
        a, b, c, d = g
        assert self.R2.val[c] >= self.l2 - m
        return (a, b % q ** m, c // q ** (self.l2 - m), d % q ** m)

    def quot_map(self, g, m):
        """Coordinates of a depth-m quotient-module stabilizer element in the
        group of type (l1, m); g must have val(b) >= l2 - m."""
        q = self.q
        a, b, c, d = g
        assert self.R2.val[b] >= self.l2 - m
        return (a, b // q ** (self.l2 - m), c % q ** m, d % q ** m)

    def diag_map(self, g):
        """Diagonal part (a, d) of an upper- or lower-triangular element."""
        a, b, c, d = g
        assert b == 0 or c == 0
        return (a, d)

    def subgroup(self, tag, **kw):
        if tag != "custom":
            key = (tag, tuple(sorted(kw.items())))
            if key not in self._subgroup_cache:
                self._subgroup_cache[key] = self._make_subgroup(tag, **kw)
            return self._subgroup_cache[key]
        return self._make_subgroup(tag, **kw)

    def _make_subgroup(self, tag, **kw):
        l1, l2, q = self.l1, self.l2, self.q
        R1, R2 = self.R1, self.R2
        v1, v2 = R1.val, R2.val

        def up1(x, j):
            return v1[R1.sub(x, 1)] >= j

        def up2(x, j):
            return v2[R2.sub(x, 1)] >= j

        if tag == "floor_kernel":
            if l2 < 2:
                raise ValueError("floor kernel needs column levels >= 2")
            pred = lambda g: (up1(g[0], l1 - 1) and v2[g[1]] >= l2 - 1
                              and v2[g[2]] >= l2 - 1 and up2(g[3], l2 - 1))
        elif tag == "congruence":
            i, sigma = kw["i"], kw["sigma"]
            if not (0 <= sigma <= 1 and sigma <= i <= l2):
                raise ValueError("congruence depth (%d,%d) out of range" % (i, sigma))
            pred = lambda g: (up1(g[0], l1 - i) and v2[g[1]] >= l2 - i
                              and v2[g[2]] >= l2 - i + sigma
                              and up2(g[3], l2 - i + sigma))
        elif tag == "parabolic_upper" or tag == "borel":
            pred = lambda g: g[2] == 0
        elif tag == "parabolic_lower":
            pred = lambda g: g[1] == 0
        elif tag == "parabolic_embed":
            m = kw["m"]
            pred = lambda g: v2[g[2]] >= l2 - m
        elif tag == "parabolic_quot":
            m = kw["m"]
            pred = lambda g: v2[g[1]] >= l2 - m
        elif tag == "unipotent_upper":
            pred = lambda g: g[0] == 1 and g[2] == 0 and g[3] == 1
        elif tag == "unipotent_lower":
            pred = lambda g: g[0] == 1 and g[1] == 0 and g[3] == 1
        elif tag == "unipotent_upper_floor":
            pred = lambda g: (g[0] == 1 and g[2] == 0 and g[3] == 1
                              and v2[g[1]] >= l2 - 1)
        elif tag == "unipotent_lower_floor":
            pred = lambda g: (g[0] == 1 and g[1] == 0 and g[3] == 1
                              and v2[g[2]] >= l2 - 1)
        elif tag == "floor_torus_a":
            pred = lambda g: (up1(g[0], l1 - 1) and g[1] == 0 and g[2] == 0
                              and g[3] == 1)
        elif tag == "floor_torus_d":
            pred = lambda g: (g[0] == 1 and g[1] == 0 and g[2] == 0
                              and up2(g[3], l2 - 1))
        elif tag == "scalars":
            pred = lambda g: g[1] == 0 and g[2] == 0 and g[3] == g[0] % self.s2
        elif tag == "torus":
            pred = lambda g: g[1] == 0 and g[2] == 0
        elif tag == "heisenberg":
            if l2 != 1:
                raise ValueError("heisenberg subgroup lives over column levels (l,1)")
            pred = lambda g: up1(g[0], l1 - 1) and g[3] == 1
        elif tag == "cuspidal_abelian":
            return self._cuspidal_abelian(kw["u_hat"], kw["w_hat"])
        elif tag == "cuspidal_normalizer":
            return self._cuspidal_normalizer(kw["u_hat"], kw["w_hat"])
        elif tag == "custom":
            return Subgroup(self, kw["members"], name=kw.get("name", "custom"))
        else:
            raise ValueError("unknown subgroup tag %r" % (tag,))
        members = [g for g in self.elements if pred(g)]
        return Subgroup(self, members, name=tag)

    def half_levels(self):
        """(l, eps) with l2 = 2l - eps: the depth at which cuspidal data lives."""
        eps = self.l2 % 2
        return ((self.l2 + eps) // 2, eps)

    def _cuspidal_abelian(self, u_hat, w_hat):
        R1, R2 = self.R1, self.R2
        l, eps = self.half_levels()
        assert make_ring(self.backend, self.q, l).val[u_hat] >= min(1, l)
        ul = u_hat  # canonical lift to level l2 keeps the code
        wl = w_hat
        members = []
        for a in R1.units:
            abar = a % self.s2
            for c in range(self.s2):
                b = R2.mul[c][wl]
                d = R2.add[abar][R2.neg[R2.mul[c][ul]]]
                assert R2.val[d] == 0
                members.append((a, b, c, d))
        return Subgroup(self, members, name="cuspidal_abelian")

    def _cuspidal_normalizer(self, u_hat, w_hat):
        R2 = self.R2
        l, eps = self.half_levels()
        ul, wl = u_hat, w_hat
        members = []
        for g in self.elements:
            a, b, c, d = g
            if R2.val[R2.sub(b, R2.mul[c][wl])] < l - eps:
                continue
            want_d = R2.add[a % self.s2][R2.neg[R2.mul[c][ul]]]
            if R2.val[R2.sub(d, want_d)] < l:
                continue
            members.append(g)
        return Subgroup(self, members, name="cuspidal_normalizer")


def _unit_sag(ring):
    return SimpleAbelianGroup(ring.units, lambda x, y: ring.mul[x][y],
                              lambda x: ring.inv[x], 1)


class Subgroup(GroupBase):
    """Subgroup given by an explicit member list; generators found greedily."""

    def __init__(self, parent, members, name=""):
        self.parent = parent
        self.elements = list(members)
        self.index = {e: i for i, e in enumerate(self.elements)}
        assert len(self.index) == len(self.elements)
        self.mul, self.inv = parent.mul, parent.inv
        self.identity = parent.identity
        if self.identity not in self.index:
            raise ValueError("subgroup %s misses the identity" % name)
        self.name = (parent.name + "." + name) if name else parent.name + ".sub"
        self._check_closed()
        self.gens = greedy_generators(self)
        self._gen_checked = True  # greedy construction spans the member list
        self.is_abelian = all(self.mul(x, y) == self.mul(y, x)
                              for x in self.gens for y in self.gens)

    def _check_closed(self):
        n = self.order
        mem = self.index
        for e in self.elements:
            if self.inv(e) not in mem:
                raise ValueError("subgroup %s not closed under inverse" % self.name)
        if n <= 600:
            pairs = ((x, y) for x in self.elements for y in self.elements)
        else:
            rng = random.Random(0)
            pairs = ((self.elements[rng.randrange(n)], self.elements[rng.randrange(n)])
                     for _ in range(50000))
        for x, y in pairs:
            if self.mul(x, y) not in mem:
                raise ValueError("subgroup %s not closed under product" % self.name)

    @property
    def parent_index(self):
        assert self.parent.order % self.order == 0
        return self.parent.order // self.order

    def fusion(self):
        """Parent class index of each subgroup class."""
        return np.array([self.parent.cls_index(rep) for rep in self.class_reps],
                        dtype=np.int64)


class QuotientGroup(GroupBase):
    """Quotient by a normal subgroup; elements are first-seen coset representatives."""

    def __init__(self, parent, N):
        self.parent, self.N = parent, N
        pmul, pinv = parent.mul, parent.inv
        for t in parent.gens:
            ti = pinv(t)
            for x in N.gens:
                if pmul(pmul(ti, x), t) not in N.index:
                    raise ValueError("subgroup is not normal")
        rep_of = {}
        reps = []
        for h in parent.elements:
            if h in rep_of:
                continue
            reps.append(h)
            for x in N.elements:
                rep_of[pmul(h, x)] = h
        assert len(rep_of) == parent.order
        self.rep_of = rep_of
        self.elements = reps
        self.index = {e: i for i, e in enumerate(reps)}
        self.mul = lambda x, y: rep_of[pmul(x, y)]
        self.inv = lambda x: rep_of[pinv(x)]
        self.identity = rep_of[parent.identity]
        self.gens = list(dict.fromkeys(rep_of[g] for g in parent.gens
                                       if rep_of[g] != self.identity))
        self.is_abelian = all(self.mul(x, y) == self.mul(y, x)
                              for x in self.gens for y in self.gens)
        self.name = parent.name + "/" + N.name.rsplit(".", 1)[-1]

    def project(self, h):
        return self.rep_of[h]


class ProductGroup(GroupBase):
    """Direct product; elements are pairs."""

    def __init__(self, G1, G2):
        self.G1, self.G2 = G1, G2
        self.elements = [(x, y) for x in G1.elements for y in G2.elements]
        self.index = {e: i for i, e in enumerate(self.elements)}
        m1, m2 = G1.mul, G2.mul
        i1, i2 = G1.inv, G2.inv
        self.mul = lambda x, y: (m1(x[0], y[0]), m2(x[1], y[1]))
        self.inv = lambda x: (i1(x[0]), i2(x[1]))
        self.identity = (G1.identity, G2.identity)
        self.gens = ([(g, G2.identity) for g in generators_of(G1)]
                     + [(G1.identity, h) for h in generators_of(G2)])
        self.is_abelian = (getattr(G1, "is_abelian", False)
                           and getattr(G2, "is_abelian", False))
        self.name = "(%s)x(%s)" % (getattr(G1, "name", "?"), getattr(G2, "name", "?"))


def class_count_formula(q, lam):
    """Closed-form number of conjugacy classes of the type-lam automorphism group."""
    l1, l2 = lam
    if l2 == 0:
        return q ** (l1 - 1) * (q - 1)
    if l1 == l2:
        return q ** (2 * l1) - q ** (l1 - 1)
    return q ** (l1 + l2 - 2) * (q * q - q + 2) - q ** (l1 - 2) * (q + 1)


def order_formula(q, lam):
    l1, l2 = lam
    if l2 == 0:
        return q ** (l1 - 1) * (q - 1)
    if l1 == l2:
        return q ** (4 * l1 - 3) * (q - 1) * (q * q - 1)
    return q ** (l1 + 3 * l2 - 2) * (q - 1) ** 2


@lru_cache(maxsize=None)
def aut_group(backend, q, lam):
    """Automorphism group of the module of type lam; rank-one types (l, 0) give
    the abelian unit group on raw ring codes."""
    l1, l2 = lam
    if l2 == 0:
        R = make_ring(backend, q, l1)
        G = _unit_sag(R)
        G.name = "Aut(%s,q=%d,%s)" % (backend, q, (l1, 0))
        G.backend, G.q, G.lam = backend, q, (l1, 0)
        G.rect = False
        G.det = lambda x: x
        G.gens = greedy_generators(G)
        return G
    return AutGroup(backend, q, lam)
