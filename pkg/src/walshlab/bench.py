"""Backend benchmark: numba kernels vs the pure-numpy fallback, plus the
O(n*2^n) fast transform against the O(4^n) naive definition.

Run: python -m walshlab.bench [--m 10] [--naive-n 12] [--repeats 3]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from . import constructions as C
from . import kernels, walsh
from .boolfun import from_bits
from .gf2n import create_ctx, create_field


def _best_of(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _pipeline_seconds(impl: dict, m: int, repeats: int) -> dict:
    n = 2 * m
    ctx = create_ctx(m)  # fresh context: no shared caches between backends

    def build_tables():
        exp = impl["exp_table"](n, ctx.reduction_poly, ctx.generator)
        return exp

    t_tables = _best_of(build_tables, repeats)
    exp = impl["exp_table"](n, ctx.reduction_poly, ctx.generator)
    log = np.full(ctx.q, -1, dtype=np.int64)
    log[exp] = np.arange(ctx.q - 1, dtype=np.int64)
    ctx._tables = (exp, log)

    lam = C.find_lambda(ctx)
    mask_lam = ctx.dual_mask(lam)
    mask_mu = ctx.dual_mask(1)
    p1 = ctx.power_table((1 << m) + 1)
    p2 = ctx.power_table((1 << m) - 1)
    xs = np.arange(ctx.q, dtype=np.int64)

    def build_f_bits():
        t_lam = impl["masked_parity"](p1, mask_lam)
        t_mu = impl["masked_parity"](p2, mask_mu)
        t_x = impl["masked_parity"](xs, ctx.trace_mask)
        return t_lam ^ (t_x & t_mu)

    t_build = _best_of(build_f_bits, repeats)
    bits = build_f_bits()

    def transform():
        v = 1 - 2 * bits.astype(np.int64)
        impl["wht_inplace"](v)
        return v

    t_wht = _best_of(transform, repeats)
    v = transform()
    values, counts = np.unique(v, return_counts=True)
    return {
        "tables": t_tables,
        "build": t_build,
        "wht": t_wht,
        "total": t_tables + t_build + t_wht,
        "distribution": dict(zip(values.tolist(), counts.tolist())),
    }


def _naive_seconds(n: int) -> float:
    ctx = create_field(n)
    rng = np.random.default_rng(1)
    tt = from_bits(n, rng.integers(0, 2, size=ctx.q).astype(np.uint8))
    t0 = time.perf_counter()
    for a in range(ctx.q):
        walsh.walsh_naive_at(ctx, tt, a)
    return time.perf_counter() - t0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=int, default=10, help="pipeline size (n = 2m)")
    ap.add_argument("--naive-n", type=int, default=12,
                    help="size for the naive-vs-fast comparison")
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args(argv)

    impls = kernels.implementations()
    print(f"active backend: {kernels.backend()}  (available: {', '.join(impls)})")
    print(f"\nfull f-spectrum pipeline at m={args.m} (n={2 * args.m}, "
          f"{1 << (2 * args.m)} points), best of {args.repeats}:")
    print(f"{'backend':>8} {'exp-table':>10} {'build':>10} {'wht':>10} {'total':>10}")
    dists = []
    for name, impl in impls.items():
        r = _pipeline_seconds(impl, args.m, args.repeats)
        dists.append(r["distribution"])
        print(f"{name:>8} {r['tables']:>9.3f}s {r['build']:>9.3f}s "
              f"{r['wht']:>9.3f}s {r['total']:>9.3f}s")
    if len(dists) > 1 and any(d != dists[0] for d in dists[1:]):
        print("BACKENDS DISAGREE - this is a bug")
        return 1

    n = args.naive_n
    t_naive = _naive_seconds(n)
    ctx = create_field(n)
    rng = np.random.default_rng(1)
    tt = from_bits(n, rng.integers(0, 2, size=ctx.q).astype(np.uint8))
    t_fast = _best_of(lambda: walsh.wht_fast(tt), args.repeats)
    print(f"\nnaive O(4^n) vs fast O(n 2^n) full spectrum at n={n}:")
    print(f"{'naive':>8} {t_naive:>9.3f}s")
    print(f"{'fast':>8} {t_fast:>9.5f}s   speedup x{t_naive / max(t_fast, 1e-9):,.0f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
