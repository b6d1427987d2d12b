"""Arithmetic in truncated discrete valuation rings with finite residue field.

Two backends realize rings of size q^level with residue field F_q:

  padic  -- Z/p^level, uniformizer p, q = p prime
  tpoly  -- F_q[t]/(t^level), uniformizer t, q = p^f any prime power

Elements are integer codes in [0, q^level).  padic codes are the canonical
residues; tpoly codes are base-q digit strings of F_q element codes with the
constant coefficient in the lowest digit.  Under this encoding both backends
share the same shift arithmetic: reduction to level m is x % q**m, the
canonical lift between levels of one tower is the identity on codes, and
multiplication by the uniformizer is x * q, truncated.
"""

import math
from functools import lru_cache
from itertools import product

import numpy as np

TOL = 1e-6    # near-integer tolerance for character sums
MTOL = 1e-9   # equality tolerance for unit-circle values

BACKENDS = ("padic", "tpoly")


def is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def prime_power(q):
    """Split q = p^f with p prime, or raise."""
    if q < 2:
        raise ValueError("residue size must be >= 2")
    p = 2
    while q % p:
        p += 1
    f = 0
    m = q
    while m % p == 0:
        m //= p
        f += 1
    if m != 1:
        raise ValueError("residue size %d is not a prime power" % q)
    return p, f


def _digits(x, base, n):
    out = []
    for _ in range(n):
        out.append(x % base)
        x //= base
    return out


def _poly_divmod(a, b, p):
    """Little-endian polynomial division over F_p; b monic."""
    a = list(a)
    db, da = len(b) - 1, len(a) - 1
    quo = [0] * max(da - db + 1, 1)
    for i in range(da - db, -1, -1):
        c = a[i + db] % p
        if c:
            quo[i] = c
            for j, bj in enumerate(b):
                a[i + j] = (a[i + j] - c * bj) % p
    return quo, a[:db] if db else [0]


def _poly_irreducible(m, p):
    """Brute irreducibility over F_p: no monic divisor of degree 1..deg/2."""
    deg = len(m) - 1
    for d in range(1, deg // 2 + 1):
        for code in range(p ** d):
            cand = _digits(code, p, d) + [1]
            _, rem = _poly_divmod(m, cand, p)
            if not any(rem):
                return False
    return True


class FiniteField:
    """F_q table arithmetic; modulus is the first monic irreducible in code order."""

    def __init__(self, q):
        p, f = prime_power(q)
        self.p, self.f, self.q = p, f, q
        if f == 1:
            self.modulus = None
            self.add = [[(x + y) % p for y in range(p)] for x in range(p)]
            self.mul = [[(x * y) % p for y in range(p)] for x in range(p)]
        else:
            for code in range(q):
                m = _digits(code, p, f) + [1]
                if _poly_irreducible(m, p):
                    self.modulus = m
                    break
            add = []
            mul = []
            for x in range(q):
                dx = _digits(x, p, f)
                add.append([self._encode([(a + b) % p for a, b in zip(dx, _digits(y, p, f))])
                            for y in range(q)])
                row = []
                for y in range(q):
                    dy = _digits(y, p, f)
                    prod = [0] * (2 * f - 1)
                    for i, a in enumerate(dx):
                        if a:
                            for j, b in enumerate(dy):
                                prod[i + j] = (prod[i + j] + a * b) % p
                    _, rem = _poly_divmod(prod, self.modulus, p)
                    row.append(self._encode(rem + [0] * (f - len(rem))))
                mul.append(row)
            self.add = add
            self.mul = mul
        self.neg = [self.add[x].index(0) for x in range(q)]
        self.inv = [None] * q
        for x in range(1, q):
            self.inv[x] = self.mul[x].index(1)
        # Tr(x) = x + x^p + ... + x^(p^(f-1)), landing in the prime field
        self.trace = []
        for x in range(q):
            t, y = 0, x
            for _ in range(f):
                t = self.add[t][y]
                y = self._pow(y, p)
            assert t < p
            self.trace.append(t)

    def _encode(self, coeffs):
        return sum(c * self.p ** i for i, c in enumerate(coeffs))

    def _pow(self, x, k):
        out = 1
        for _ in range(k):
            out = self.mul[out][x]
        return out


MAX_RING_SIZE = 4096


class LocalRing:
    """One level of a backend tower; every operation is a table lookup on codes."""

    def __init__(self, backend, q, level):
        if backend not in BACKENDS:
            raise ValueError("unknown backend %r" % (backend,))
        if level < 1:
            raise ValueError("level must be >= 1")
        p, f = prime_power(q)
        if backend == "padic" and f != 1:
            raise ValueError("padic backend requires prime residue size, got %d" % q)
        self.backend, self.q, self.level = backend, q, level
        self.p, self.f = p, f
        self.size = q ** level
        if self.size > MAX_RING_SIZE:
            raise ValueError("ring size %d exceeds the table-arithmetic bound %d"
                             % (self.size, MAX_RING_SIZE))
        s = self.size
        if backend == "padic":
            self.field = None
            self.add = [[(x + y) % s for y in range(s)] for x in range(s)]
            self.mul = [[(x * y) % s for y in range(s)] for x in range(s)]
            self.neg = [(-x) % s for x in range(s)]
            self.inv = [pow(x, -1, s) if x % p else None for x in range(s)]
        else:
            fq = FiniteField(q)
            self.field = fq
            digs = [_digits(x, q, level) for x in range(s)]
            add = []
            mul = []
            for x in range(s):
                dx = digs[x]
                add.append([self._encode([fq.add[a][b] for a, b in zip(dx, digs[y])])
                            for y in range(s)])
                row = []
                for y in range(s):
                    dy = digs[y]
                    out = [0] * level
                    for i in range(level):
                        if dx[i]:
                            fm = fq.mul[dx[i]]
                            for j in range(level - i):
                                out[i + j] = fq.add[out[i + j]][fm[dy[j]]]
                    row.append(self._encode(out))
                mul.append(row)
            self.add = add
            self.mul = mul
            self.neg = [self.add[x].index(0) for x in range(s)]
            self.inv = [None] * s
            for x in range(s):
                if x % q:
                    self.inv[x] = self.mul[x].index(1)
        self.val = [self._valuation(x) for x in range(s)]
        self.units = tuple(x for x in range(s) if self.val[x] == 0)
        assert len(self.units) == q ** (level - 1) * (q - 1)
        self.one, self.zero = 1, 0
        self._psi = None

    def _encode(self, coeffs):
        return sum(c * self.q ** i for i, c in enumerate(coeffs))

    def _valuation(self, x):
        if x == 0:
            return self.level
        v = 0
        while x % self.q == 0:
            x //= self.q
            v += 1
        return v

    def sub(self, x, y):
        return self.add[x][self.neg[y]]

    def unit(self, x):
        return self.val[x] == 0

    def reduce_to(self, x, m):
        """Reduction map onto the level-m ring of the same tower."""
        if not 1 <= m <= self.level:
            raise ValueError("target level %d out of range" % m)
        return x % self.q ** m

    def lift_to(self, x, m):
        """Canonical section into the level-m ring (m >= self.level): identity on codes."""
        if m < self.level:
            raise ValueError("lift target below current level")
        return x

    def pi_pow(self, j):
        return self.q ** j % self.size if j < self.level else 0

    def pi_mul(self, x, j):
        return x * self.q ** j % self.size

    def pi_div(self, x, j):
        """Exact division by the j-th uniformizer power (requires valuation >= j)."""
        assert self.val[x] >= j
        return x // self.q ** j

    def psi(self, x):
        """Fixed primitive additive character at this level."""
        if self._psi is None:
            if self.backend == "padic":
                self._psi = tuple(complex(math.cos(2 * math.pi * y / self.size),
                                          math.sin(2 * math.pi * y / self.size))
                                  for y in range(self.size))
            else:
                fq = self.field
                vals = []
                for y in range(self.size):
                    t = 0
                    for d in _digits(y, self.q, self.level):
                        t = (t + fq.trace[d]) % self.p
                    vals.append(complex(math.cos(2 * math.pi * t / self.p),
                                        math.sin(2 * math.pi * t / self.p)))
                self._psi = tuple(vals)
        return self._psi[x]


@lru_cache(maxsize=None)
def make_ring(backend, q, level):
    return LocalRing(backend, q, level)


class SimpleAbelianGroup:
    """Finite abelian group on hashable elements, with the class-function protocol
    (every element is its own conjugacy class)."""

    is_abelian = True

    def __init__(self, elements, mul, inv, identity, name=""):
        self.elements = list(elements)
        self.index = {e: i for i, e in enumerate(self.elements)}
        assert len(self.index) == len(self.elements)
        self._mul, self._inv = mul, inv
        self.identity = identity
        self.name = name

    @property
    def order(self):
        return len(self.elements)

    def mul(self, x, y):
        return self._mul(x, y)

    def inv(self, x):
        return self._inv(x)

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

    # class-function protocol
    @property
    def class_reps(self):
        return self.elements

    @property
    def class_sizes(self):
        return np.ones(len(self.elements), dtype=np.int64)

    def cls_index(self, e):
        return self.index[e]

    @property
    def class_count(self):
        return len(self.elements)

    @property
    def identity_class(self):
        return self.index[self.identity]


def unit_group(ring):
    return SimpleAbelianGroup(ring.units,
                              lambda x, y: ring.mul[x][y],
                              lambda x: ring.inv[x], 1,
                              name="units(%s,%d,%d)" % (ring.backend, ring.q, ring.level))


def additive_group(ring):
    return SimpleAbelianGroup(range(ring.size),
                              lambda x, y: ring.add[x][y],
                              lambda x: ring.neg[x], 0,
                              name="additive(%s,%d,%d)" % (ring.backend, ring.q, ring.level))


def _assert_abelian(A):
    els = A.elements
    n = len(els)
    if n <= 128:
        pairs = ((x, y) for x in els for y in els)
    else:
        step = max(1, n // 64)
        sample = els[::step]
        pairs = ((x, y) for x in sample for y in els)
    for x, y in pairs:
        if A.mul(x, y) != A.mul(y, x):
            raise ValueError("group is not abelian")


def _abelian_basis(A):
    """Cyclic decomposition [(g, order)] by peeling a maximal-order element."""
    els = list(A.elements)
    if len(els) == 1:
        return []
    orders = {e: A.element_order(e) for e in els}
    m = max(orders.values())
    # deterministic choice: maximal order, then least element
    g = min((e for e in els if orders[e] == m), key=_key)
    powers = [A.identity]
    for _ in range(m - 1):
        powers.append(A.mul(powers[-1], g))
    pindex = {e: i for i, e in enumerate(powers)}
    rep = {}
    reps = []
    for e in els:
        if e not in rep:
            reps.append(e)
            for pw in powers:
                rep[A.mul(e, pw)] = e
    Q = SimpleAbelianGroup(reps,
                           lambda x, y: rep[A.mul(x, y)],
                           lambda x: rep[A.inv(x)],
                           rep[A.identity])
    out = [(g, m)]
    for ebar, k in _abelian_basis(Q):
        t = pindex[A.pow(ebar, k)]
        assert t % k == 0
        e = A.mul(ebar, A.pow(g, (-(t // k)) % m))
        assert A.element_order(e) == k
        out.append((e, k))
    total = 1
    for _, k in out:
        total *= k
    assert total == len(els)
    return out


def _key(e):
    return e if isinstance(e, tuple) else (e,)


class AbelianCharacter:
    """Tabulated homomorphism from a finite abelian group to the unit circle."""

    __slots__ = ("group", "exps", "values")

    def __init__(self, group, exps, values):
        self.group, self.exps, self.values = group, exps, values

    def __call__(self, e):
        return self.values[e]

    def is_trivial_on(self, elems):
        return all(abs(self.values[e] - 1.0) < MTOL for e in elems)


def character_group(A):
    """All |A| complex characters of a finite abelian group, by brute-force
    cyclic decomposition; deterministic order with the trivial character first."""
    _assert_abelian(A)
    basis = _abelian_basis(A)
    dlog = {A.identity: ()}
    for g, m in basis:
        table = {}
        for e, vec in dlog.items():
            acc = e
            for j in range(m):
                table[acc] = vec + (j,)
                acc = A.mul(acc, g)
        dlog = table
    assert len(dlog) == A.order
    roots = [[complex(math.cos(2 * math.pi * j / m), math.sin(2 * math.pi * j / m))
              for j in range(m)] for _, m in basis]
    chars = []
    for exps in product(*[range(m) for _, m in basis]):
        values = {}
        for e, vec in dlog.items():
            z = complex(1.0)
            for i, (j, a) in enumerate(zip(vec, exps)):
                z *= roots[i][(j * a) % basis[i][1]]
            values[e] = z
        chars.append(AbelianCharacter(A, exps, values))
    return chars


def twisting_characters(ring):
    """The q unit-group characters extending the level-1 additive pattern on the
    principal congruence units 1 + pi^(level-1) * (residue field); indexed by the
    level-1 coefficient, with index 0 the trivial character."""
    if ring.level < 2:
        raise ValueError("twisting characters need level >= 2")
    U = unit_group(ring)
    chars = character_group(U)
    r1 = make_ring(ring.backend, ring.q, 1)
    one_plus = [u for u in U.elements if ring.val[ring.sub(u, 1)] >= ring.level - 1]
    assert len(one_plus) == ring.q
    out = []
    for zh in range(ring.q):
        want = {}
        for u in one_plus:
            s = ring.pi_div(ring.sub(u, 1), ring.level - 1)
            want[u] = r1.psi(r1.mul[zh][s])
        for ch in chars:
            if all(abs(ch(u) - want[u]) < MTOL for u in one_plus):
                out.append(ch)
                break
        else:
            raise AssertionError("no unit character extends the level-1 pattern %d" % zh)
    return out
