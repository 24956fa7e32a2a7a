"""Binary field arithmetic for GF(2^n) on plain-int coordinate vectors.

Elements are ints: bit i is the coefficient of x^i in the polynomial basis.
A FieldCtx fixes the representation (reduction polynomial, generator, dual
basis) and provides all arithmetic as methods; contexts are immutable after
construction apart from idempotent lazy caches, so they can be shared freely.

For the constructions on GF(2^{2m}) build contexts with create_ctx(m); the
Kloosterman machinery also needs stand-alone fields of any degree, built with
create_field(k).
"""

from __future__ import annotations

import functools

import numpy as np

from . import kernels

DEFAULT_MAX_N = 28


class FieldError(Exception):
    """Base class for field construction/arithmetic errors."""


class NotIrreducible(FieldError):
    pass


class TooLarge(FieldError):
    pass


class DivisionByZero(FieldError):
    pass


class NotInSubfield(FieldError):
    pass


class InSubfield(FieldError):
    pass


# ----------------------------------------------------- GF(2)[x] on ints ----


def clmul(a: int, b: int) -> int:
    """Carryless product of two GF(2) polynomials."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def polydeg(p: int) -> int:
    return p.bit_length() - 1


def polymod(a: int, m: int) -> int:
    dm = polydeg(m)
    da = polydeg(a)
    while da >= dm and a:
        a ^= m << (da - dm)
        da = polydeg(a)
    return a


def polymulmod(a: int, b: int, m: int) -> int:
    return polymod(clmul(a, b), m)


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, polymod(a, b)
    return a


def _poly_pow_x(e: int, m: int) -> int:
    # x^(2^e) mod m by repeated squaring of x.
    r = 2
    for _ in range(e):
        r = polymulmod(r, r, m)
    return r


def _prime_factors(v: int) -> list[int]:
    out = []
    d = 2
    while d * d <= v:
        if v % d == 0:
            out.append(d)
            while v % d == 0:
                v //= d
        d += 1 if d == 2 else 2
    if v > 1:
        out.append(v)
    return out


def is_irreducible(poly: int) -> bool:
    """Rabin test: x^(2^n) = x mod poly and gcd(x^(2^(n/p)) - x, poly) = 1."""
    n = polydeg(poly)
    if n <= 0:
        return False
    if n == 1:
        return True
    if not poly & 1:  # divisible by x
        return False
    if _poly_pow_x(n, poly) != 2:
        return False
    for p in _prime_factors(n):
        if poly_gcd(_poly_pow_x(n // p, poly) ^ 2, poly) != 1:
            return False
    return True


def smallest_irreducible(n: int) -> int:
    """Monic irreducible of degree n with the smallest integer encoding."""
    for cand in range((1 << n) | 1, 1 << (n + 1), 2):
        if is_irreducible(cand):
            return cand
    raise NotIrreducible(f"no irreducible of degree {n}")  # pragma: no cover


# -------------------------------------------------- GF(2) linear solver ----


def solve_gf2(cols: list[int], rhs: int, n: int):
    """Solve sum_i y_i * cols[i] = rhs over GF(2).

    cols[i] is the image of basis vector i, packed with bit j = row j.
    Returns (particular, kernel_basis) or None when inconsistent.
    """
    # rows carry n coefficient bits plus the rhs at bit n
    rows = []
    for j in range(n):
        r = 0
        for i in range(n):
            r |= ((cols[i] >> j) & 1) << i
        r |= ((rhs >> j) & 1) << n
        rows.append(r)

    pivot_of = {}  # column -> reduced row
    for r in rows:
        for c in sorted(pivot_of):
            if (r >> c) & 1:
                r ^= pivot_of[c]
        lead = -1
        for c in range(n):
            if (r >> c) & 1:
                lead = c
                break
        if lead < 0:
            if (r >> n) & 1:
                return None
            continue
        for c, pr in pivot_of.items():
            if (pr >> lead) & 1:
                pivot_of[c] = pr ^ r
        pivot_of[lead] = r

    particular = 0
    for c, pr in pivot_of.items():
        if (pr >> n) & 1:
            particular |= 1 << c
    kernel = []
    for free in range(n):
        if free in pivot_of:
            continue
        v = 1 << free
        for c, pr in pivot_of.items():
            if (pr >> free) & 1:
                v |= 1 << c
        kernel.append(v)
    return particular, kernel


def xor_minimize(v: int, basis: list[int]) -> int:
    """Smallest element of v + span(basis) as an integer."""
    reduced: list[int] = []
    for b in basis:
        for r in reduced:
            if b.bit_length() == r.bit_length():
                b ^= r
        if b:
            reduced.append(b)
            reduced.sort(key=int.bit_length, reverse=True)
    for b in reduced:
        if v.bit_length() == b.bit_length():
            v ^= b
        elif (v >> (b.bit_length() - 1)) & 1:
            v ^= b
    return v


# -------------------------------------------------------------- context ----


class FieldCtx:
    """Immutable description of one GF(2^n) representation."""

    def __init__(self, n: int, reduction_poly: int, generator: int | None = None,
                 max_n: int = DEFAULT_MAX_N):
        if n > max_n:
            raise TooLarge(f"n={n} exceeds capability cap {max_n}")
        if n < 1:
            raise FieldError("n must be >= 1")
        if polydeg(reduction_poly) != n or not reduction_poly & 1:
            raise NotIrreducible(
                f"override 0x{reduction_poly:x} is not monic of degree {n} with constant term 1")
        if not is_irreducible(reduction_poly):
            raise NotIrreducible(f"0x{reduction_poly:x} is reducible")
        self.n = n
        self.q = 1 << n
        self.reduction_poly = reduction_poly
        self.max_n = max_n
        self.generator = self._find_generator() if generator is None else generator
        if self._order_is_full(self.generator) is False:
            raise FieldError("generator does not have full multiplicative order")

        # traces of x^k for k < 2n-1 drive the trace mask and the Gram rows
        self._basis_traces = [self._trace_direct(self.xpow(k)) for k in range(2 * n - 1)]
        self.trace_mask = 0
        for i in range(n):
            self.trace_mask |= self._basis_traces[i] << i
        self.gram_rows = []
        for i in range(n):
            row = 0
            for j in range(n):
                row |= self._basis_traces[i + j] << j
            self.gram_rows.append(row)
        self.dual_basis = self._compute_dual_basis()
        for i in range(n):
            for j in range(n):
                if self.tr_abs(self.mul(self.xpow(i), self.dual_basis[j])) != (i == j):
                    raise FieldError("dual basis verification failed")  # pragma: no cover

        # lazy caches (idempotent; safe to race)
        self._tables: tuple[np.ndarray, np.ndarray] | None = None
        self._subgroups: dict[str, list[int]] = {}
        self._as_solver = None
        self._pow_tables: dict[int, np.ndarray] = {}
        self._tr_table: np.ndarray | None = None
        self._frob_table: np.ndarray | None = None

    # -- construction helpers

    def xpow(self, k: int) -> int:
        """The basis power x^k as an element (k need not be < n)."""
        r = 1
        for _ in range(k):
            r = polymod(r << 1, self.reduction_poly)
        return r

    def _trace_direct(self, x: int) -> int:
        acc = 0
        t = x
        for _ in range(self.n):
            acc ^= t
            t = polymulmod(t, t, self.reduction_poly)
        if acc not in (0, 1):  # pragma: no cover
            raise FieldError("trace left the prime field")
        return acc

    def _order_is_full(self, g: int) -> bool:
        if g == 0:
            return False
        order = self.q - 1
        if order == 1:
            return g == 1
        for p in _prime_factors(order):
            if self.pow(g, order // p) == 1:
                return False
        return True

    def _find_generator(self) -> int:
        if self.q == 2:
            return 1
        for g in range(2, self.q):
            if self._order_is_full(g):
                return g
        raise FieldError("no generator found")  # pragma: no cover

    def _compute_dual_basis(self) -> list[int]:
        n = self.n
        # gamma_j has coordinates = column j of the inverse Gram matrix
        cols = list(self.gram_rows)  # symmetric, so rows double as columns
        inv_cols = []
        for j in range(n):
            sol = solve_gf2(cols, 1 << j, n)
            if sol is None:  # pragma: no cover
                raise FieldError("trace Gram matrix is singular")
            inv_cols.append(sol[0])
        return inv_cols

    # -- subfield bookkeeping

    @property
    def m(self) -> int:
        if self.n % 2:
            raise FieldError("n is odd: no index-2 subfield structure")
        return self.n // 2

    # -- scalar arithmetic

    def mul(self, a: int, b: int) -> int:
        return polymulmod(a, b, self.reduction_poly)

    def sq(self, a: int) -> int:
        return polymulmod(a, a, self.reduction_poly)

    def pow(self, a: int, e: int) -> int:
        # pow(0, 0) = 1 by the empty-product convention
        if e < 0:
            raise ValueError("exponent must be >= 0")
        r = 1
        base = a
        while e:
            if e & 1:
                r = self.mul(r, base)
            base = self.sq(base)
            e >>= 1
        return r

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("0 has no inverse")
        return self.pow(a, self.q - 2)

    def conjugate(self, x: int) -> int:
        r = x
        for _ in range(self.m):
            r = self.sq(r)
        return r

    def sqrt(self, x: int) -> int:
        r = x
        for _ in range(self.n - 1):
            r = self.sq(r)
        return r

    # -- traces

    def tr_abs(self, x: int) -> int:
        return (x & self.trace_mask).bit_count() & 1

    def tr_rel(self, x: int) -> int:
        return x ^ self.conjugate(x)

    def tr_sub(self, x: int) -> int:
        if self.conjugate(x) != x:
            raise NotInSubfield(f"0x{x:x} is not in GF(2^{self.m})")
        acc = 0
        t = x
        for _ in range(self.m):
            acc ^= t
            t = self.sq(t)
        if acc not in (0, 1):  # pragma: no cover
            raise FieldError("subfield trace left the prime field")
        return acc

    def in_subfield(self, x: int) -> bool:
        return self.conjugate(x) == x

    def on_unit_circle(self, z: int) -> bool:
        return z != 0 and self.pow(z, (1 << self.m) + 1) == 1

    # -- polar decomposition and subgroups

    def polar_decompose(self, x: int) -> tuple[int, int]:
        if x == 0:
            raise DivisionByZero("0 has no polar decomposition")
        m = self.m
        y = self.pow(x, ((1 << m) + 1) << (m - 1))
        z = self.pow(x, ((1 << m) - 1) << (m - 1))
        return y, z

    def subgroup(self, which: str) -> list[int]:
        """Deterministic ascending enumeration of a named subset.

        'subfield_units'  - GF(2^m)^* inside this field (order 2^m - 1)
        'unit_circle'     - {z : z^(2^m+1) = 1} (order 2^m + 1)
        'full_units'      - all nonzero elements
        'affine_E'        - solutions of y + conjugate(y) = 1 (size 2^m)
        """
        got = self._subgroups.get(which)
        if got is not None:
            return got
        if which == "full_units":
            out = list(range(1, self.q))
        elif which == "subfield_units":
            step = (1 << self.m) + 1
            out = sorted(self._cyclic(self.pow(self.generator, step), (1 << self.m) - 1))
        elif which == "unit_circle":
            step = (1 << self.m) - 1
            out = sorted(self._cyclic(self.pow(self.generator, step), (1 << self.m) + 1))
        elif which == "affine_E":
            cols = [self.xpow(i) ^ self.conjugate(self.xpow(i)) for i in range(self.n)]
            sol = solve_gf2(cols, 1, self.n)
            if sol is None:  # pragma: no cover
                raise FieldError("tr_rel is not onto")
            part, kernel = sol
            out = sorted(self._span_offset(part, kernel))
        else:
            raise ValueError(f"unknown subgroup {which!r}")
        self._subgroups[which] = out
        return out

    def _cyclic(self, g: int, order: int) -> list[int]:
        out = [1]
        cur = g
        while cur != 1:
            out.append(cur)
            cur = self.mul(cur, g)
        if len(out) != order:  # pragma: no cover
            raise FieldError("subgroup enumeration has wrong order")
        return out

    def _span_offset(self, offset: int, basis: list[int]) -> list[int]:
        out = [offset]
        for b in basis:
            out.extend(v ^ b for v in list(out))
        return out

    # -- Artin-Schreier

    def solve_artin_schreier(self, d: int) -> set[int]:
        """Roots of y^2 + y = d: a 2-element coset, or empty when tr(d)=1."""
        if self._as_solver is None:
            cols = [self.sq(self.xpow(i)) ^ self.xpow(i) for i in range(self.n)]
            self._as_solver = cols
        sol = solve_gf2(self._as_solver, d, self.n)
        if sol is None:
            return set()
        y = sol[0]
        return {y, y ^ 1}

    # -- dual-basis functional masks

    def dual_mask(self, a: int) -> int:
        """Coordinates of a in the dual basis, packed into an int.

        Bit j equals tr_abs(a * x^j), so parity(dual_mask(a) & x) = tr_abs(a*x)
        for every element x.
        """
        r = 0
        i = 0
        while a >> i:
            if (a >> i) & 1:
                r ^= self.gram_rows[i]
            i += 1
        return r

    # -- bulk tables (O(2^n), built on first use only)

    def tables(self) -> tuple[np.ndarray, np.ndarray]:
        """(exp, log): exp[k] = g^k for k < 2^n - 1; log[exp[k]] = k, log[0] = -1."""
        if self._tables is None:
            exp = kernels.exp_table(self.n, self.reduction_poly, self.generator)
            log = np.full(self.q, -1, dtype=np.int64)
            log[exp] = np.arange(self.q - 1, dtype=np.int64)
            self._tables = (exp, log)
        return self._tables

    def power_table(self, e: int) -> np.ndarray:
        """x^e for every x in coordinate order; x = 0 maps to 0 (e > 0)."""
        got = self._pow_tables.get(e)
        if got is not None:
            return got
        if e <= 0:
            raise ValueError("power_table needs e >= 1")
        exp, log = self.tables()
        out = np.zeros(self.q, dtype=np.int64)
        out[1:] = exp[(log[1:] * e) % (self.q - 1)]
        self._pow_tables[e] = out
        return out

    def trace_table(self) -> np.ndarray:
        """tr_abs(x) for every x in coordinate order, uint8."""
        if self._tr_table is None:
            xs = np.arange(self.q, dtype=np.int64)
            self._tr_table = kernels.masked_parity(xs, self.trace_mask)
        return self._tr_table

    def frobenius_table(self) -> np.ndarray:
        """conjugate(x) = x^(2^m) for every x, via the GF(2)-linear basis map."""
        if self._frob_table is None:
            imgs = [self.conjugate(self.xpow(i)) for i in range(self.n)]
            xs = np.arange(self.q, dtype=np.int64)
            out = np.zeros(self.q, dtype=np.int64)
            for i in range(self.n):
                out ^= ((xs >> np.int64(i)) & 1) * np.int64(imgs[i])
            self._frob_table = out
        return self._frob_table


# --------------------------------------------------------- constructors ----


def create_ctx(m: int, poly_override: int | None = None,
               max_n: int = DEFAULT_MAX_N) -> FieldCtx:
    """GF(2^n) with n = 2m, the home of the f/g constructions."""
    if m < 1:
        raise FieldError("m must be >= 1")
    if 2 * m > max_n:
        raise TooLarge(f"2m={2 * m} exceeds capability cap {max_n}")
    return create_field(2 * m, poly_override, max_n)


def create_field(n: int, poly_override: int | None = None,
                 max_n: int = DEFAULT_MAX_N) -> FieldCtx:
    """Stand-alone GF(2^n) of any degree (subfield structure needs even n)."""
    if n > max_n:
        raise TooLarge(f"n={n} exceeds capability cap {max_n}")
    poly = smallest_irreducible(n) if poly_override is None else poly_override
    if poly_override is not None:
        if polydeg(poly_override) != n or not poly_override & 1:
            raise NotIrreducible(
                f"override 0x{poly_override:x} must be monic of degree {n} with constant term 1")
    return FieldCtx(n, poly, max_n=max_n)


@functools.lru_cache(maxsize=None)
def default_ctx(m: int) -> FieldCtx:
    """Cached default-representation GF(2^{2m})."""
    return create_ctx(m)


@functools.lru_cache(maxsize=None)
def default_field(n: int) -> FieldCtx:
    """Cached default-representation GF(2^n)."""
    return create_field(n)


# ----------------------------------------------------------- embeddings ----


class Embedding:
    """Field embedding GF(2^k) -> GF(2^n) for k | n, as a callable."""

    def __init__(self, small: FieldCtx, big: FieldCtx):
        if big.n % small.n:
            raise FieldError(f"GF(2^{small.n}) does not embed in GF(2^{big.n})")
        self.small = small
        self.big = big
        self.root = self._find_root()
        self._powers = [1]
        for _ in range(1, small.n):
            self._powers.append(big.mul(self._powers[-1], self.root))

    def _find_root(self) -> int:
        # candidates: the order-(2^k - 1) subgroup plus 0
        step = (self.big.q - 1) // (self.small.q - 1)
        g = self.big.pow(self.big.generator, step)
        roots = []
        cur = 1
        for _ in range(self.small.q - 1):
            acc = 0
            p = self.small.reduction_poly
            d = polydeg(p)
            for bit in range(d, -1, -1):
                acc = self.big.mul(acc, cur)
                if (p >> bit) & 1:
                    acc ^= 1
            if acc == 0:
                roots.append(cur)
            cur = self.big.mul(cur, g)
        if not roots:  # pragma: no cover
            raise FieldError("reduction polynomial has no root in the big field")
        return min(roots)

    def __call__(self, a: int) -> int:
        r = 0
        i = 0
        while a >> i:
            if (a >> i) & 1:
                r ^= self._powers[i]
            i += 1
        return r

    @functools.cached_property
    def image_map(self) -> dict[int, int]:
        """big-field element -> small-field preimage, for the whole image."""
        return {self(a): a for a in range(self.small.q)}


@functools.lru_cache(maxsize=None)
def default_embedding(k: int, n: int) -> Embedding:
    return Embedding(default_field(k), default_field(n))


# ----------------------------------------------------------------- hex -----


def elem_to_hex(x: int) -> str:
    return format(x, "#x")


def elem_from_hex(s: str) -> int:
    v = int(s, 16)
    if v < 0:
        raise ValueError("negative element encoding")
    return v
