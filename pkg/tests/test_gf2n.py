"""Field arithmetic tests; brute-force oracles are built in the tests."""

import random

import numpy as np
import pytest

from walshlab.gf2n import (
    DivisionByZero,
    Embedding,
    NotInSubfield,
    NotIrreducible,
    TooLarge,
    clmul,
    create_ctx,
    create_field,
    default_ctx,
    default_field,
    elem_from_hex,
    elem_to_hex,
    is_irreducible,
    polymod,
)


# ---------------------------------------------------------- polynomials ----


def _trial_division_irreducible(poly: int) -> bool:
    # oracle: divide by every polynomial of degree 1 .. n//2
    n = poly.bit_length() - 1
    for d in range(1, n // 2 + 1):
        for q in range(1 << d, 1 << (d + 1)):
            if polymod(poly, q) == 0:
                return False
    return True


def test_default_poly_m2_is_smallest_irreducible():
    # enumerate degree-4 candidates in integer order with the oracle
    smallest = next(c for c in range(0b10000, 0b100000)
                    if _trial_division_irreducible(c))
    assert smallest == 0b10011
    assert create_ctx(2).reduction_poly == 0b10011


def test_rabin_agrees_with_trial_division_through_degree_8():
    for poly in range(2, 1 << 9):
        if poly.bit_length() - 1 >= 1:
            assert is_irreducible(poly) == _trial_division_irreducible(poly), hex(poly)


def test_poly_override_accepted_and_rejected():
    ctx = create_ctx(2, poly_override=0b11001)  # x^4 + x^3 + 1
    assert ctx.reduction_poly == 0b11001
    with pytest.raises(NotIrreducible):
        create_ctx(2, poly_override=0b10101)  # (x^2+x+1)^2
    with pytest.raises(NotIrreducible):
        create_ctx(2, poly_override=0b10110)  # constant term 0


def test_capability_cap():
    with pytest.raises(TooLarge):
        create_ctx(20)  # 2m = 40 > 28
    with pytest.raises(TooLarge):
        create_field(29)
    create_field(11, max_n=11)  # custom cap is honored


# ------------------------------------------------------------- mul/inv -----


def test_mul_examples_f16():
    ctx = default_ctx(2)
    assert ctx.mul(0b10, 0b1000) == 0b0011  # x * x^3 = x + 1
    for a in range(16):
        assert ctx.mul(a, 1) == a
        assert ctx.mul(a, 0) == 0


def test_inv_examples():
    ctx = default_ctx(2)
    assert ctx.inv(1) == 1
    assert ctx.inv(0b10) == 0b1001  # x * (x^3+1) = x^4 + x = 1
    with pytest.raises(DivisionByZero):
        ctx.inv(0)
    for a in range(1, 16):
        assert ctx.mul(a, ctx.inv(a)) == 1


def test_pow_conventions():
    ctx = default_ctx(3)
    g = ctx.generator
    assert ctx.pow(g, ctx.q - 1) == 1
    assert ctx.pow(0, 0) == 1  # empty product
    assert ctx.pow(0, 5) == 0
    for a in range(ctx.q):
        assert ctx.pow(a, 2) == ctx.mul(a, a)


def test_field_axioms_exhaustive_n4():
    ctx = default_ctx(2)
    for a in range(16):
        for b in range(16):
            assert ctx.mul(a, b) == ctx.mul(b, a)
            for c in range(16):
                assert ctx.mul(ctx.mul(a, b), c) == ctx.mul(a, ctx.mul(b, c))
                assert ctx.mul(a, b ^ c) == ctx.mul(a, b) ^ ctx.mul(a, c)


def test_field_axioms_exhaustive_n8_via_mul_table():
    # build the full multiplication table from raw carryless products, then
    # check associativity/distributivity by gathers over all 2^24 triples
    ctx = default_field(8)
    q = ctx.q
    table = np.zeros((q, q), dtype=np.int64)
    for a in range(q):
        row = np.zeros(q, dtype=np.int64)
        for b in range(q):
            row[b] = polymod(clmul(a, b), ctx.reduction_poly)
        table[a] = row
    aa, bb, cc = np.meshgrid(np.arange(q), np.arange(q), np.arange(64),
                             indexing="ij", sparse=True)
    left = table[table[aa, bb], cc]
    right = table[aa, table[bb, cc]]
    assert np.array_equal(left, right)
    dist_left = table[aa, bb ^ cc]
    dist_right = table[aa, bb] ^ table[aa, cc]
    assert np.array_equal(dist_left, dist_right)


def test_field_axioms_random_large():
    rng = random.Random(7)
    for n in (12, 16, 20):
        ctx = default_field(n)
        for _ in range(50):
            a, b, c = (rng.randrange(ctx.q) for _ in range(3))
            assert ctx.mul(ctx.mul(a, b), c) == ctx.mul(a, ctx.mul(b, c))
            assert ctx.mul(a, b ^ c) == ctx.mul(a, b) ^ ctx.mul(a, c)
        for _ in range(20):
            a = rng.randrange(1, ctx.q)
            assert ctx.mul(a, ctx.inv(a)) == 1


# --------------------------------------------------------------- traces ----


def test_tr_abs_basics():
    ctx = default_ctx(3)
    assert ctx.tr_abs(0) == 0
    assert ctx.tr_abs(1) == 0  # n even
    assert sum(ctx.tr_abs(x) for x in range(ctx.q)) == ctx.q // 2
    ctx5 = default_field(5)
    assert ctx5.tr_abs(1) == 1  # n odd


def test_tr_abs_matches_direct_sum():
    ctx = default_ctx(3)
    for x in range(ctx.q):
        acc = 0
        t = x
        for _ in range(ctx.n):
            acc ^= t
            t = ctx.sq(t)
        assert ctx.tr_abs(x) == acc


def test_tr_rel_and_transitivity_exhaustive_m3():
    ctx = default_ctx(3)
    for x in range(ctx.q):
        r = ctx.tr_rel(x)
        assert r == (x ^ ctx.conjugate(x))
        assert ctx.in_subfield(r)
        assert ctx.tr_sub(r) == ctx.tr_abs(x)
    for s in [0] + ctx.subgroup("subfield_units"):
        assert ctx.tr_rel(s) == 0


def test_tr_rel_onto_subfield_2m_to_1():
    ctx = default_ctx(3)
    hits = {}
    for x in range(ctx.q):
        hits[ctx.tr_rel(x)] = hits.get(ctx.tr_rel(x), 0) + 1
    assert set(hits) == set([0] + ctx.subgroup("subfield_units"))
    assert all(c == 1 << ctx.m for c in hits.values())


def test_tr_sub():
    ctx = default_ctx(3)
    assert ctx.tr_sub(1) == 1  # m odd
    assert ctx.tr_sub(0) == 0
    ones = sum(ctx.tr_sub(s) for s in [0] + ctx.subgroup("subfield_units"))
    assert ones == 4  # balanced on the 8 subfield elements
    with pytest.raises(NotInSubfield):
        nonsub = next(x for x in range(ctx.q) if not ctx.in_subfield(x))
        ctx.tr_sub(nonsub)
    ctx4 = default_ctx(2)
    assert ctx4.tr_sub(1) == 0  # m even


def test_trace_balanced_and_linear():
    ctx = default_ctx(2)
    for a in range(16):
        for b in range(16):
            assert ctx.tr_abs(a ^ b) == ctx.tr_abs(a) ^ ctx.tr_abs(b)


# ----------------------------------------------- conjugation and sqrt ------


def test_conjugate_properties_exhaustive_m3():
    ctx = default_ctx(3)
    sub = set([0] + ctx.subgroup("subfield_units"))
    circle = set(ctx.subgroup("unit_circle"))
    for x in range(ctx.q):
        assert ctx.conjugate(ctx.conjugate(x)) == x
        assert (ctx.conjugate(x) == x) == (x in sub)
        if x:
            assert (ctx.conjugate(x) == ctx.inv(x)) == (x in circle)
    assert ctx.conjugate(0) == 0 and ctx.conjugate(1) == 1
    # Frobenius is multiplicative
    for a in range(ctx.q):
        for b in range(ctx.q):
            assert ctx.conjugate(ctx.mul(a, b)) == ctx.mul(ctx.conjugate(a), ctx.conjugate(b))


def test_norm_and_ratio_land_where_they_should():
    for m in (3, 4):
        ctx = default_ctx(m)
        circle = set(ctx.subgroup("unit_circle"))
        for x in range(1, ctx.q):
            xb = ctx.conjugate(x)
            assert ctx.in_subfield(x ^ xb)
            assert ctx.in_subfield(ctx.mul(x, xb))
            assert ctx.mul(x, ctx.inv(xb)) in circle


def test_sqrt():
    ctx = default_ctx(3)
    assert ctx.sqrt(1) == 1
    assert ctx.sqrt(0) == 0
    for a in range(ctx.q):
        assert ctx.sqrt(ctx.sq(a)) == a
        assert ctx.sq(ctx.sqrt(a)) == a


# --------------------------------------------------- polar decomposition ---


def test_polar_examples():
    ctx = default_ctx(3)
    assert ctx.polar_decompose(1) == (1, 1)
    for s in ctx.subgroup("subfield_units"):
        assert ctx.polar_decompose(s) == (s, 1)
    with pytest.raises(DivisionByZero):
        ctx.polar_decompose(0)


@pytest.mark.parametrize("m", [3, 4, 5])
def test_polar_bijection_exhaustive(m):
    ctx = default_ctx(m)
    sub = set(ctx.subgroup("subfield_units"))
    circle = set(ctx.subgroup("unit_circle"))
    seen = set()
    for x in range(1, ctx.q):
        y, z = ctx.polar_decompose(x)
        assert y in sub and z in circle
        assert ctx.mul(y, z) == x
        seen.add((y, z))
    assert len(seen) == ctx.q - 1 == len(sub) * len(circle)


# ------------------------------------------------------------ subgroups ----


def test_subgroup_sizes():
    ctx = default_ctx(4)
    assert len(ctx.subgroup("unit_circle")) == 17
    assert len(ctx.subgroup("subfield_units")) == 15
    assert len(ctx.subgroup("full_units")) == ctx.q - 1
    ctx3 = default_ctx(3)
    e = ctx3.subgroup("affine_E")
    assert len(e) == 8
    assert all(ctx3.tr_rel(lam) == 1 for lam in e)


def test_subfield_closure_m4():
    ctx = default_ctx(4)
    sub = set([0] + ctx.subgroup("subfield_units"))
    for a in sub:
        for b in sub:
            assert (a ^ b) in sub
            assert ctx.mul(a, b) in sub


def test_subgroup_orders_are_exact():
    ctx = default_ctx(3)
    for z in ctx.subgroup("unit_circle"):
        assert ctx.pow(z, (1 << ctx.m) + 1) == 1
    for s in ctx.subgroup("subfield_units"):
        assert ctx.pow(s, (1 << ctx.m) - 1) == 1


# -------------------------------------------------------- Artin-Schreier ---


def test_artin_schreier_examples():
    ctx = default_ctx(3)
    assert ctx.solve_artin_schreier(0) == {0, 1}
    for d in range(ctx.q):
        roots = ctx.solve_artin_schreier(d)
        if ctx.tr_abs(d):
            assert roots == set()
        else:
            assert len(roots) == 2
            for y in roots:
                assert ctx.sq(y) ^ y == d
            a, b = sorted(roots)
            assert a ^ b == 1


# ------------------------------------------------------------ dual basis ---


@pytest.mark.parametrize("m", [2, 3, 4])
def test_dual_basis_property(m):
    ctx = default_ctx(m)
    for i in range(ctx.n):
        xi = ctx.pow(2, i) if i else 1
        for j in range(ctx.n):
            assert ctx.tr_abs(ctx.mul(xi, ctx.dual_basis[j])) == (i == j)


def test_dual_mask_matches_traces():
    ctx = default_ctx(3)
    for a in range(ctx.q):
        mask = ctx.dual_mask(a)
        for j in range(ctx.n):
            xj = ctx.xpow(j)
            assert (mask >> j) & 1 == ctx.tr_abs(ctx.mul(a, xj))


def test_generator_has_full_order():
    for n in (4, 6, 8, 10):
        ctx = default_field(n)
        g = ctx.generator
        seen = set()
        cur = 1
        for _ in range(ctx.q - 1):
            seen.add(cur)
            cur = ctx.mul(cur, g)
        assert len(seen) == ctx.q - 1


# ------------------------------------------------------------ embeddings ---


def test_subfield_embedding_consistency():
    small = default_field(3)
    big = default_ctx(3)
    emb = Embedding(small, big)
    image = {emb(a) for a in range(small.q)}
    assert image == set([0] + big.subgroup("subfield_units"))
    for a in range(small.q):
        for b in range(small.q):
            assert emb(a ^ b) == emb(a) ^ emb(b)
            assert emb(small.mul(a, b)) == big.mul(emb(a), emb(b))
    # trace compatibility: [GF(2^6):GF(2^3)] = 2, so big traces vanish on the image
    for a in range(small.q):
        assert big.tr_abs(emb(a)) == 0
        assert big.tr_sub(emb(a)) == small.tr_abs(a)


def test_subfield_embedding_odd_cofactor_trace():
    small = default_field(2)
    big = default_field(6)
    emb = Embedding(small, big)
    for a in range(small.q):
        # cofactor s = 3 is odd: absolute traces must agree
        assert big.tr_abs(emb(a)) == small.tr_abs(a)


# -------------------------------------------------------------- hex io -----


def test_hex_serialization():
    assert elem_to_hex(0x13) == "0x13"
    assert elem_from_hex("0x1f") == 31
    assert elem_from_hex(elem_to_hex(12345)) == 12345


def test_exp_log_tables_match_scalar_pow():
    ctx = default_field(10)
    exp, log = ctx.tables()
    for k in range(0, ctx.q - 1, 97):
        assert int(exp[k]) == ctx.pow(ctx.generator, k)
    for x in range(1, ctx.q, 131):
        assert ctx.pow(ctx.generator, int(log[x])) == x
    assert int(log[0]) == -1
