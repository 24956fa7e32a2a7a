"""Walsh-Hadamard spectra.

wht_fast produces the full spectrum indexed by the GF(2)-linear functional
mask u (value at u = sum over x of (-1)^(f(x) + parity(u & x))).  The slow
walsh_naive_at sums the defining character sum with honest field arithmetic
and is the oracle the fast path is tested against; walsh_at_field_point
bridges the two index conventions through the dual-basis mask map.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .boolfun import TruthTable
from .gf2n import DEFAULT_MAX_N, FieldCtx, TooLarge


@dataclass(frozen=True)
class WalshSpectrum:
    n: int
    values: np.ndarray  # int64, length 2^n, indexed by functional mask


@dataclass(frozen=True)
class SpectrumDistribution:
    n: int
    pairs: tuple  # ((value, count), ...) sorted ascending by value


@dataclass(frozen=True)
class Classification:
    kind: str  # bent | semibent | plateaued | five_valued | other
    amplitude: int | None
    values: tuple

    def __str__(self) -> str:
        if self.kind == "bent":
            return "bent"
        if self.kind == "semibent":
            return "semi-bent"
        if self.kind == "plateaued":
            return f"plateaued({self.amplitude})"
        body = ",".join(str(v) for v in self.values)
        name = "five-valued" if self.kind == "five_valued" else "other"
        return f"{name}{{{body}}}"


def walsh_naive_at(ctx: FieldCtx, f: TruthTable, a: int) -> int:
    """Direct O(2^n) evaluation of sum_x (-1)^(f(x) + tr(a*x))."""
    bits = f.bits
    total = 0
    for x in range(ctx.q):
        s = int(bits[x]) ^ ctx.tr_abs(ctx.mul(a, x))
        total += 1 - 2 * s
    return total


def wht_fast(f: TruthTable, max_n: int = DEFAULT_MAX_N) -> WalshSpectrum:
    """Full spectrum by the in-place butterfly, O(n * 2^n)."""
    if f.n > max_n:
        raise TooLarge(f"n={f.n} exceeds capability cap {max_n}")
    v = 1 - 2 * f.bits.astype(np.int64)
    kernels.wht_inplace(v)
    return WalshSpectrum(f.n, v)


def walsh_at_field_point(ctx: FieldCtx, spectrum: WalshSpectrum, a: int) -> int:
    """Spectrum value at the field point a, i.e. walsh_naive_at(ctx, f, a)."""
    if spectrum.n != ctx.n:
        raise ValueError("spectrum and context disagree on n")
    return int(spectrum.values[ctx.dual_mask(a)])


def distribution(spectrum: WalshSpectrum) -> SpectrumDistribution:
    vals, counts = np.unique(spectrum.values, return_counts=True)
    return SpectrumDistribution(spectrum.n, tuple((int(v), int(c)) for v, c in zip(vals, counts)))


def nonlinearity(spectrum: WalshSpectrum) -> int:
    mx = int(np.abs(spectrum.values).max())
    return (1 << (spectrum.n - 1)) - mx // 2


def classify(spectrum: WalshSpectrum, m: int) -> Classification:
    """Spectral shape for n = 2m: bent / semi-bent / plateaued / etc.

    Semi-bent on even n is read as values in {0, +-2^(m+1)}.
    """
    values = tuple(int(v) for v in np.unique(spectrum.values))
    vset = set(values)
    bent_val = 1 << m
    if vset <= {bent_val, -bent_val}:
        return Classification("bent", bent_val, values)
    sb = 1 << (m + 1)
    if vset <= {0, sb, -sb}:
        return Classification("semibent", sb, values)
    nonzero = sorted(abs(v) for v in vset if v != 0)
    if nonzero and nonzero[0] == nonzero[-1] and vset <= {0, nonzero[0], -nonzero[0]}:
        return Classification("plateaued", nonzero[0], values)
    if len(values) <= 5:
        return Classification("five_valued", None, values)
    return Classification("other", None, values)


# ----------------------------------------------------------------- io ------


def distribution_rows(dist: SpectrumDistribution) -> list[dict]:
    return [{"value": v, "count": c} for v, c in dist.pairs]


def spectrum_summary(spectrum: WalshSpectrum, m: int) -> dict:
    """The walsh-module report: n, distribution, nonlinearity, classification."""
    dist = distribution(spectrum)
    return {
        "n": spectrum.n,
        "distribution": distribution_rows(dist),
        "nonlinearity": nonlinearity(spectrum),
        "classification": str(classify(spectrum, m)),
    }


def distribution_csv(dist: SpectrumDistribution) -> str:
    lines = ["value,count"]
    lines += [f"{v},{c}" for v, c in dist.pairs]
    return "\n".join(lines) + "\n"
