"""Binary Kloosterman sums.

kloosterman_sum evaluates the defining character sum over any constructed
field.  scan computes k_m(lambda) for all lambda at once by transforming the
truth table of x -> tr(1/x) (one length-2^m butterfly instead of 4^m work);
it is cross-checked against the direct sum in the tests.  Lifted sums over
GF(2^(ms)) come both from direct summation in the big field and from the
integer three-term recurrence, which the verification suite plays against
each other.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass

import numpy as np

from . import kernels
from .boolfun import TruthTable
from .gf2n import (
    Embedding,
    FieldCtx,
    NotInSubfield,
    default_embedding,
    default_field,
)
from .walsh import wht_fast


@dataclass(frozen=True)
class KloostermanScan:
    m: int
    values: np.ndarray  # int64, k_m(lambda) indexed by lambda's coordinate int
    value_set: tuple

    def to_json_dict(self) -> dict:
        return {
            "m": self.m,
            "values": [
                {"lambda": format(lam, "#x"), "k": int(k)}
                for lam, k in enumerate(self.values)
            ],
            "value_set": [int(v) for v in self.value_set],
        }


def kloosterman_sum(ctx: FieldCtx, a: int, b: int = 1) -> int:
    """k(a, b) = sum over nonzero x of (-1)^tr(a*x + b/x), over ctx's field.

    a = b = 0 returns 2^k - 1 (every term is +1).
    """
    exp, log = ctx.tables()
    q1 = ctx.q - 1
    logs = log[1:]
    term = np.zeros(q1, dtype=np.int64)
    if a != 0:
        term ^= exp[(logs + int(log[a])) % q1]
    if b != 0:
        term ^= exp[(int(log[b]) - logs) % q1]
    signs = 1 - 2 * kernels.masked_parity(term, ctx.trace_mask).astype(np.int64)
    return int(signs.sum())


def scan(m: int) -> KloostermanScan:
    """k_m(lambda) for every lambda in GF(2^m), plus the sorted value set.

    Uses the spectrum of h(x) = tr(1/x) (h(0) = 0): the spectrum value at
    lambda's dual mask is 1 + k_m(lambda).
    """
    ctx = default_field(m)
    exp, log = ctx.tables()
    inv_table = np.zeros(ctx.q, dtype=np.int64)
    inv_table[1:] = exp[((ctx.q - 1) - log[1:]) % (ctx.q - 1)]
    h = TruthTable(m, kernels.masked_parity(inv_table, ctx.trace_mask))
    spec = wht_fast(h)
    values = np.empty(ctx.q, dtype=np.int64)
    for lam in range(ctx.q):
        values[lam] = spec.values[ctx.dual_mask(lam)] - 1
    value_set = tuple(int(v) for v in sorted(set(values[1:].tolist())))
    return KloostermanScan(m, values, value_set)


def lachaud_wolfmann_set(m: int) -> tuple:
    """All integers s = -1 (mod 4) with s^2 <= 2^(m+2), ascending."""
    out = [s for s in range(-(1 << (m + 2)), (1 << (m + 2)) + 1)
           if s % 4 == 3 and s * s <= (1 << (m + 2))]
    return tuple(sorted(out))


def find_mu(m: int, target: int) -> list[int]:
    """All nonzero lambda in GF(2^m) with k_m(lambda) = target, ascending."""
    sc = scan(m)
    return [lam for lam in range(1, 1 << m) if int(sc.values[lam]) == target]


def unit_circle_sum(ctx: FieldCtx, mu: int) -> int:
    """sum over the unit circle of (-1)^tr_sub(mu * (z + 1/z)).

    Contract: equals -k_m(mu') for the corresponding subfield element mu'.
    """
    if mu == 0:
        raise ValueError("mu must be nonzero")
    if not ctx.in_subfield(mu):
        raise NotInSubfield(f"0x{mu:x} is not in GF(2^{ctx.m})")
    # tr_sub(mu * (z + z^-1)) = tr_abs(mu * z) for z on the circle
    zs = np.array(ctx.subgroup("unit_circle"), dtype=np.int64)
    signs = 1 - 2 * kernels.masked_parity(zs, ctx.dual_mask(mu)).astype(np.int64)
    return int(signs.sum())


_K_MAP_CACHE: "weakref.WeakKeyDictionary[FieldCtx, dict[int, int]]" = weakref.WeakKeyDictionary()


def subfield_k_map(ctx: FieldCtx) -> dict[int, int]:
    """k_m over ctx's subfield: element of the subfield -> Kloosterman value."""
    got = _K_MAP_CACHE.get(ctx)
    if got is not None:
        return got
    emb = default_embedding(ctx.m, ctx.n) if _is_default(ctx) else Embedding(default_field(ctx.m), ctx)
    sc = scan(ctx.m)
    out = {emb(lam): int(sc.values[lam]) for lam in range(1 << ctx.m)}
    _K_MAP_CACHE[ctx] = out
    return out


def _is_default(ctx: FieldCtx) -> bool:
    return ctx is default_field(ctx.n) or ctx.reduction_poly == default_field(ctx.n).reduction_poly


def kloosterman_lifted_direct(m: int, s: int, a: int) -> int:
    """k_m^(s)(a) by direct summation over GF(2^(ms)), a given in GF(2^m)."""
    big = default_field(m * s)
    emb = default_embedding(m, m * s)
    return kloosterman_sum(big, emb(a), 1)


def kloosterman_recursive(m: int, s: int, k1_values) -> np.ndarray:
    """Lifted sums from the base scan by the integer three-term recurrence.

    k^(s) = -k^(s-1) * k^(1) - 2^m * k^(s-2), seeded with k^(0) = -2 and
    k^(1) = the supplied base values.  Pure integer arithmetic.
    """
    if s < 1:
        raise ValueError("s must be >= 1")
    k1 = np.atleast_1d(np.asarray(k1_values, dtype=np.int64))
    prev = np.full_like(k1, -2)  # k^(0)
    cur = k1.copy()
    for _ in range(s - 1):
        prev, cur = cur, -cur * k1 - (1 << m) * prev
    return cur
