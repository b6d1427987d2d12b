import random

import pytest

from modrep2.groups import (AutGroup, ProductGroup, QuotientGroup, Subgroup,
                            aut_group, class_count_formula, order_formula)
from modrep2.rings import SimpleAbelianGroup, make_ring

ORDER_CASES = [
    ("padic", 2, (1, 1), 6), ("padic", 3, (1, 1), 48), ("tpoly", 4, (1, 1), 180),
    ("padic", 2, (2, 1), 8), ("padic", 3, (2, 1), 108), ("padic", 2, (3, 1), 16),
    ("padic", 2, (2, 2), 96), ("padic", 3, (2, 2), 3888),
    ("padic", 2, (3, 2), 128), ("padic", 3, (3, 2), 8748),
    ("padic", 2, (4, 2), 256), ("padic", 2, (3, 0), 4),
]


@pytest.mark.parametrize("backend,q,lam,n", ORDER_CASES)
def test_orders(backend, q, lam, n):
    G = aut_group(backend, q, lam)
    assert G.order == n == order_formula(q, lam)


def test_group_axioms_exhaustive_small():
    for backend, q, lam in [("padic", 2, (1, 1)), ("padic", 2, (2, 1))]:
        G = aut_group(backend, q, lam)
        els = G.elements
        for g in els:
            assert G.mul(g, G.identity) == g == G.mul(G.identity, g)
            assert G.mul(g, G.inv(g)) == G.identity
        for g in els:
            for h in els:
                assert G.mul(g, h) in G.index
                for k in els:
                    assert G.mul(G.mul(g, h), k) == G.mul(g, G.mul(h, k))


@pytest.mark.parametrize("backend,q,lam", [
    ("padic", 2, (3, 2)), ("padic", 2, (2, 2)), ("tpoly", 2, (3, 2)),
    ("padic", 3, (2, 2)), ("tpoly", 4, (1, 1)),
])
def test_group_axioms_sampled(backend, q, lam):
    G = aut_group(backend, q, lam)
    rng = random.Random(1)
    els = G.elements
    for g in els:
        assert G.mul(g, G.inv(g)) == G.identity
        assert G.mul(G.inv(g), g) == G.identity
    for _ in range(2000):
        g, h, k = (els[rng.randrange(len(els))] for _ in range(3))
        assert G.mul(g, h) in G.index
        assert G.mul(G.mul(g, h), k) == G.mul(g, G.mul(h, k))


def test_determinant_multiplicative():
    for backend, q, lam in [("padic", 2, (3, 2)), ("padic", 3, (2, 2)),
                            ("padic", 2, (2, 1))]:
        G = aut_group(backend, q, lam)
        R2 = G.R2
        rng = random.Random(2)
        els = G.elements
        for _ in range(3000):
            g, h = els[rng.randrange(len(els))], els[rng.randrange(len(els))]
            assert G.det(G.mul(g, h)) == R2.mul[G.det(g)][G.det(h)]
        assert all(R2.val[G.det(g)] == 0 for g in els)


CLASS_CASES = [
    ("padic", 2, (1, 1), 3), ("padic", 3, (1, 1), 8), ("tpoly", 4, (1, 1), 15),
    ("padic", 2, (2, 1), 5), ("padic", 3, (2, 1), 20), ("padic", 2, (3, 1), 10),
    ("padic", 2, (2, 2), 14), ("padic", 3, (2, 2), 78),
    ("padic", 2, (3, 2), 26), ("padic", 3, (3, 2), 204),
    ("padic", 2, (4, 2), 52), ("padic", 2, (4, 3), 116),
    ("tpoly", 2, (2, 2), 14), ("padic", 2, (3, 0), 4),
]


@pytest.mark.parametrize("backend,q,lam,k", CLASS_CASES)
def test_class_counts(backend, q, lam, k):
    G = aut_group(backend, q, lam)
    assert G.class_count == k == class_count_formula(q, lam)
    assert int(G.class_sizes.sum()) == G.order
    assert all(G.order % int(s) == 0 for s in G.class_sizes)
    assert G.class_reps[G.identity_class] == G.identity
    assert int(G.class_sizes[G.identity_class]) == 1


def test_class_count_large_square_tpoly():
    G = aut_group("tpoly", 4, (2, 2))
    assert G.order == order_formula(4, (2, 2)) == 46080
    assert G.class_count == class_count_formula(4, (2, 2)) == 252


def test_classes_are_conjugation_stable():
    G = aut_group("padic", 2, (3, 2))
    rng = random.Random(3)
    els = G.elements
    for _ in range(2000):
        g, t = els[rng.randrange(len(els))], els[rng.randrange(len(els))]
        assert G.cls_index(G.conj(g, t)) == G.cls_index(g)


SUBGROUP_ORDERS = [
    ("floor_kernel", {}, 16),
    ("congruence", {"i": 1, "sigma": 0}, 16),
    ("congruence", {"i": 1, "sigma": 1}, 4),
    ("congruence", {"i": 2, "sigma": 1}, 64),
    ("parabolic_upper", {}, 32),
    ("parabolic_lower", {}, 32),
    ("parabolic_embed", {"m": 1}, 64),
    ("parabolic_quot", {"m": 1}, 64),
    ("parabolic_embed", {"m": 2}, 128),
    ("unipotent_upper", {}, 4),
    ("unipotent_lower", {}, 4),
    ("unipotent_upper_floor", {}, 2),
    ("unipotent_lower_floor", {}, 2),
    ("floor_torus_a", {}, 2),
    ("floor_torus_d", {}, 2),
    ("scalars", {}, 4),
    ("torus", {}, 8),
    ("cuspidal_abelian", {"u_hat": 0, "w_hat": 1}, 16),
    ("cuspidal_normalizer", {"u_hat": 0, "w_hat": 1}, 64),
]


@pytest.mark.parametrize("tag,kw,n", SUBGROUP_ORDERS)
def test_subgroup_orders_32(tag, kw, n):
    G = aut_group("padic", 2, (3, 2))
    H = G.subgroup(tag, **kw)
    assert H.order == n
    assert G.order % H.order == 0


def test_subgroup_validation():
    G = aut_group("padic", 2, (3, 2))
    with pytest.raises(ValueError):
        G.subgroup("heisenberg")
    with pytest.raises(ValueError):
        G.subgroup("congruence", i=3, sigma=0)
    with pytest.raises(ValueError):
        G.subgroup("no_such_tag")
    with pytest.raises(ValueError):
        G.subgroup("custom", members=[G.identity, (1, 1, 0, 1)])
    H = G.subgroup("custom", members=[g for g in G.elements if g[2] == 0])
    assert H.order == 32


def test_heisenberg_and_floor_center():
    G = aut_group("padic", 2, (3, 1))
    H = G.subgroup("heisenberg")
    assert H.order == 8
    Z = G.subgroup("floor_torus_a")
    assert Z.order == 2
    assert set(Z.elements) <= set(H.elements)
    # Z is central in H
    for z in Z.elements:
        assert all(H.mul(z, h) == H.mul(h, z) for h in H.elements)
    assert not H.is_abelian


def test_cuspidal_subgroups_inside_normalizer():
    for backend, q, lam in [("padic", 2, (3, 2)), ("padic", 3, (3, 2)),
                            ("padic", 2, (4, 2))]:
        G = aut_group(backend, q, lam)
        l, eps = G.half_levels()
        A = G.subgroup("cuspidal_abelian", u_hat=0, w_hat=1)
        N = G.subgroup("cuspidal_normalizer", u_hat=0, w_hat=1)
        assert set(A.elements) <= set(N.elements)
        assert A.is_abelian
        assert A.order == q ** (G.l1 - 1) * (q - 1) * q ** G.l2
        assert N.order == q ** (G.l1 + 2 * G.l2 - 1) * (q - 1)
        K = G.subgroup("congruence", i=l, sigma=eps)
        assert set(K.elements) <= set(N.elements)


def test_subgroup_fusion_and_classes():
    G = aut_group("padic", 2, (3, 2))
    H = G.subgroup("parabolic_upper")
    fus = H.fusion()
    assert len(fus) == H.class_count
    assert int(H.class_sizes.sum()) == H.order
    for j, rep in enumerate(H.class_reps):
        assert G.cls_index(rep) == int(fus[j])


def test_floor_map_hom():
    G = aut_group("padic", 2, (3, 2))
    F = aut_group("padic", 2, (2, 1))
    for g in G.elements:
        assert G.floor_map(g) in F.index
        for h in G.elements[::7]:
            assert G.floor_map(G.mul(g, h)) == F.mul(G.floor_map(g), G.floor_map(h))
    ker = [g for g in G.elements if G.floor_map(g) == F.identity]
    assert len(ker) == 16
    assert sorted(ker) == sorted(G.subgroup("floor_kernel").elements)
    assert len({G.floor_map(g) for g in G.elements}) == F.order
    with pytest.raises(ValueError):
        aut_group("padic", 2, (3, 1)).floor_map((1, 0, 0, 1))


@pytest.mark.parametrize("side", ["embed", "quot"])
def test_embed_quot_maps(side):
    G = aut_group("padic", 2, (3, 2))
    T = aut_group("padic", 2, (3, 1))
    m = 1
    P = G.subgroup("parabolic_embed" if side == "embed" else "parabolic_quot", m=m)
    f = (lambda g: G.embed_map(g, m)) if side == "embed" else (lambda g: G.quot_map(g, m))
    img = set()
    for g in P.elements:
        assert f(g) in T.index
        img.add(f(g))
        for h in P.elements:
            assert f(P.mul(g, h)) == T.mul(f(g), f(h))
    assert img == set(T.elements)
    ker = [g for g in P.elements if f(g) == T.identity]
    assert len(ker) == P.order // T.order == 4


def test_diag_map_on_parabolic():
    G = aut_group("padic", 3, (2, 2))
    P = G.subgroup("parabolic_upper")
    D = ProductGroup(
        SimpleAbelianGroup(G.R1.units, lambda x, y: G.R1.mul[x][y],
                           lambda x: G.R1.inv[x], 1),
        SimpleAbelianGroup(G.R2.units, lambda x, y: G.R2.mul[x][y],
                           lambda x: G.R2.inv[x], 1))
    for g in P.elements[:200]:
        assert G.diag_map(g) in D.index
    for g in P.elements[:60]:
        for h in P.elements[:60]:
            assert G.diag_map(P.mul(g, h)) == D.mul(G.diag_map(g), G.diag_map(h))
    assert {G.diag_map(g) for g in P.elements} == set(D.elements)


def test_module_action():
    G = aut_group("padic", 2, (3, 2))
    M = [(x1, x2) for x1 in range(8) for x2 in range(4)]
    for g in G.elements[::11]:
        imgs = {G.module_act(g, m) for m in M}
        assert len(imgs) == len(M)
        assert G.module_act(G.identity, (3, 2)) == (3, 2)
        for h in G.elements[::13]:
            for m in M[::5]:
                assert G.module_act(G.mul(g, h), m) == G.module_act(g, G.module_act(h, m))


def test_commutator_and_abelianization():
    G = aut_group("padic", 2, (1, 1))  # GL2(F2), symmetric group on 3 letters
    D = G.commutator_subgroup()
    assert D.order == 3
    A = G.abelianization()
    assert A.order == 2 and A.is_abelian
    G = aut_group("padic", 2, (2, 1))
    A = G.abelianization()
    assert A.order == 4
    G = aut_group("padic", 3, (1, 1))
    assert G.abelianization().order == 2
    G = aut_group("padic", 3, (2, 2))
    assert G.abelianization().order == 6


def test_quotient_group_projection():
    G = aut_group("padic", 2, (2, 1))
    N = G.commutator_subgroup()
    Q = QuotientGroup(G, N)
    assert Q.order == 4
    for g in G.elements:
        for h in G.elements:
            assert Q.project(G.mul(g, h)) == Q.mul(Q.project(g), Q.project(h))
    # a guaranteed non-normal example: a single off-diagonal involution in GL2(F3)
    G2 = aut_group("padic", 3, (1, 1))
    H = Subgroup(G2, [(1, 0, 0, 1), (0, 1, 1, 0)], name="w")
    with pytest.raises(ValueError):
        QuotientGroup(G2, H)


def test_product_group():
    r = make_ring("padic", 2, 2)
    U = SimpleAbelianGroup(r.units, lambda x, y: r.mul[x][y], lambda x: r.inv[x], 1)
    G = aut_group("padic", 2, (1, 1))
    P = ProductGroup(G, U)
    assert P.order == 12
    assert P.class_count == 6
    assert not P.is_abelian
    P2 = ProductGroup(U, U)
    assert P2.is_abelian and P2.class_count == 4


def test_rank_one_group():
    G = aut_group("padic", 2, (3, 0))
    assert G.order == 4 and G.is_abelian
    assert G.class_count == 4
    assert G.det(3) == 3
    assert aut_group("padic", 2, (3, 0)) is G
