"""Truth tables, ANF, weights, degrees."""

import numpy as np
import pytest

from walshlab import boolfun as bf
from walshlab.gf2n import default_ctx, default_field


def test_build_constant_zero():
    ctx = default_ctx(2)
    tt = bf.build(ctx, lambda x: 0)
    assert bf.weight(tt) == 0
    assert not bf.is_balanced(tt)


def test_build_trace_is_balanced():
    ctx = default_ctx(3)
    tt = bf.build(ctx, ctx.tr_abs)
    assert bf.weight(tt) == ctx.q // 2
    assert bf.is_balanced(tt)


def test_build_bent_norm_trace_weight():
    # tr_sub(x * conj(x)) at m=2: exhaustive evaluation gives weight 10
    # (W(0) = -2^m, so weight = 2^(n-1) + 2^(m-1))
    ctx = default_ctx(2)
    tt = bf.build(ctx, lambda x: 0 if x == 0 else ctx.tr_sub(ctx.mul(x, ctx.conjugate(x))))
    brute = sum(
        0 if x == 0 else ctx.tr_sub(ctx.mul(x, ctx.conjugate(x))) for x in range(16))
    assert brute == 10
    assert bf.weight(tt) == 10


def test_distance():
    ctx = default_ctx(2)
    f = bf.build(ctx, ctx.tr_abs)
    g = bf.from_bits(ctx.n, 1 - f.bits)
    assert bf.distance(f, f) == 0
    assert bf.distance(f, g) == ctx.q
    h = bf.build(ctx, lambda x: x & 1)
    assert bf.distance(f, h) == bf.weight(bf.from_bits(ctx.n, f.bits ^ h.bits))
    with pytest.raises(bf.DimensionMismatch):
        bf.distance(f, bf.from_bits(2, np.zeros(4, dtype=np.uint8)))


def test_anf_zero_and_point_mass():
    n = 4
    zero = bf.from_bits(n, np.zeros(1 << n, dtype=np.uint8))
    assert not bf.anf(zero).coeffs.any()
    point = np.zeros(1 << n, dtype=np.uint8)
    point[0] = 1  # f = prod (x_i + 1): every ANF coefficient set
    assert bf.anf(bf.from_bits(n, point)).coeffs.all()


def test_anf_roundtrip_random():
    rng = np.random.default_rng(11)
    for _ in range(100):
        bits = rng.integers(0, 2, size=1 << 10).astype(np.uint8)
        tt = bf.from_bits(10, bits)
        assert np.array_equal(bf.from_anf(bf.anf(tt)).bits, bits)


def test_algebraic_degree_basics():
    ctx = default_ctx(3)
    assert bf.algebraic_degree(bf.build(ctx, ctx.tr_abs)) == 1
    norm = bf.build(ctx, lambda x: 0 if x == 0 else ctx.tr_sub(ctx.mul(x, ctx.conjugate(x))))
    assert bf.algebraic_degree(norm) == 2  # exponent 2^m + 1 has weight 2
    zero = bf.from_bits(ctx.n, np.zeros(ctx.q, dtype=np.uint8))
    assert bf.algebraic_degree(zero) == -1


def test_degree_of_affine_shift_is_stable():
    ctx = default_ctx(3)
    norm = bf.build(ctx, lambda x: 0 if x == 0 else ctx.tr_sub(ctx.mul(x, ctx.conjugate(x))))
    shifted = bf.from_bits(ctx.n, norm.bits ^ bf.build(ctx, ctx.tr_abs).bits)
    assert bf.algebraic_degree(shifted) == bf.algebraic_degree(norm) == 2


def test_trace_monomial_degrees_n6():
    # degree of tr(a x^e) equals popcount(e) once a is chosen so the
    # induced trace coefficient does not vanish
    ctx = default_field(6)
    n = ctx.n
    q1 = ctx.q - 1
    seen = set()
    for e in range(1, q1):
        coset = set()
        cur = e
        while cur not in coset:
            coset.add(cur)
            cur = cur * 2 % q1
        leader = min(coset)
        if leader in seen:
            continue
        seen.add(leader)
        d = len(coset)
        # a must have a nonzero trace into GF(2^d)
        a = next(x for x in range(1, ctx.q)
                 if _tr_to_subfield(ctx, x, d) != 0)
        tt = bf.build(ctx, lambda x, a=a, e=leader: ctx.tr_abs(ctx.mul(a, ctx.pow(x, e))))
        assert bf.algebraic_degree(tt) == bin(leader).count("1"), leader


def _tr_to_subfield(ctx, x, d):
    acc = 0
    t = x
    for _ in range(ctx.n // d):
        acc ^= t
        for _ in range(d):
            t = ctx.sq(t)
    return acc


def test_weight_complement():
    rng = np.random.default_rng(13)
    bits = rng.integers(0, 2, size=256).astype(np.uint8)
    tt = bf.from_bits(8, bits)
    assert bf.weight(tt) + bf.weight(bf.from_bits(8, 1 - bits)) == 256


# ----------------------------------------------------------------- io ------


def test_table_bytes_roundtrip():
    rng = np.random.default_rng(17)
    bits = rng.integers(0, 2, size=1 << 9).astype(np.uint8)
    tt = bf.from_bits(9, bits)
    data = bf.table_to_bytes(tt)
    assert len(data) == (1 << 9) // 8
    back = bf.table_from_bytes(9, data)
    assert np.array_equal(back.bits, bits)
    # hex encodes the same little-endian integer
    assert bf.table_to_hex(tt) == format(int.from_bytes(data, "little"), "#x")


def test_anf_monomials_hex_ascending():
    n = 3
    bits = np.zeros(1 << n, dtype=np.uint8)
    bits[[1, 3, 7]] = 1
    monos = bf.anf_monomials_hex(bf.anf(bf.from_bits(n, bits)))
    assert monos == sorted(monos, key=lambda s: int(s, 16))
    assert all(s.startswith("0x") for s in monos)
