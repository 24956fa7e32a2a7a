"""Truth-table representation of Boolean functions on GF(2^n).

Tables are indexed by the coordinate integer of the field element, so bit i
of the table is f(element i).  Weight, distance, ANF (binary Moebius
transform) and algebraic degree all operate on these tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import kernels
from .gf2n import FieldCtx


class DimensionMismatch(Exception):
    pass


@dataclass(frozen=True)
class TruthTable:
    n: int
    bits: np.ndarray  # uint8 0/1, length 2^n

    def __post_init__(self):
        if self.bits.shape != (1 << self.n,) or self.bits.dtype != np.uint8:
            raise ValueError("bits must be a uint8 array of length 2^n")


@dataclass(frozen=True)
class AnfTable:
    n: int
    coeffs: np.ndarray  # uint8 0/1, coefficient of the monomial with mask u at index u

    def __post_init__(self):
        if self.coeffs.shape != (1 << self.n,) or self.coeffs.dtype != np.uint8:
            raise ValueError("coeffs must be a uint8 array of length 2^n")


def from_bits(n: int, values) -> TruthTable:
    return TruthTable(n, np.asarray(values, dtype=np.uint8) & 1)


def build(ctx: FieldCtx, evaluator: Callable[[int], int]) -> TruthTable:
    """Evaluate a 0/1-valued function at every element, in coordinate order."""
    bits = np.fromiter((evaluator(x) & 1 for x in range(ctx.q)), dtype=np.uint8, count=ctx.q)
    return TruthTable(ctx.n, bits)


def weight(f: TruthTable) -> int:
    return int(f.bits.sum())


def is_balanced(f: TruthTable) -> bool:
    return weight(f) == 1 << (f.n - 1)


def distance(f: TruthTable, h: TruthTable) -> int:
    if f.n != h.n:
        raise DimensionMismatch(f"tables on {f.n} and {h.n} variables")
    return int((f.bits ^ h.bits).sum())


def anf(f: TruthTable) -> AnfTable:
    coeffs = f.bits.copy()
    kernels.mobius_inplace(coeffs)
    return AnfTable(f.n, coeffs)


def from_anf(a: AnfTable) -> TruthTable:
    bits = a.coeffs.copy()
    kernels.mobius_inplace(bits)  # the transform is an involution
    return TruthTable(a.n, bits)


def algebraic_degree(f: TruthTable) -> int:
    """Max popcount over set ANF monomial masks; -1 for the zero function."""
    masks = np.nonzero(anf(f).coeffs)[0]
    if masks.size == 0:
        return -1
    return int(np.bitwise_count(masks.astype(np.uint64)).max())


# ----------------------------------------------------------------- io ------


def table_to_bytes(f: TruthTable) -> bytes:
    """Bit-packed little-endian bytes: bit i of the stream is f(i)."""
    return np.packbits(f.bits, bitorder="little").tobytes()


def table_from_bytes(n: int, data: bytes) -> TruthTable:
    if len(data) * 8 < (1 << n):
        raise ValueError("byte string too short for 2^n bits")
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8), bitorder="little")[: 1 << n]
    return TruthTable(n, bits.astype(np.uint8))


def table_to_hex(f: TruthTable) -> str:
    return format(int.from_bytes(table_to_bytes(f), "little"), "#x")


def anf_monomials_hex(a: AnfTable) -> list[str]:
    """Set monomial masks as lowercase hex, ascending."""
    return [format(int(u), "#x") for u in np.nonzero(a.coeffs)[0]]
