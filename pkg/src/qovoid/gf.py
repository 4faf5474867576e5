"""
Arithmetic in the tower F_p < F_q < F_{q^2} for odd q = p^k.

Base-field elements are integers in [0, q): the base-p digit string of the
coefficient tuple of a polynomial modulo ``base_poly``.  Extension elements
are integers ``c0 + q*c1`` standing for c0 + c1*theta with
theta^2 = ``ext_nonsquare``.  Every table is computed once by polynomial
arithmetic and frozen; the context is shareable between processes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DivisionByZero, EvenCharacteristic, NotPrime


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# --- polynomials over F_p: coefficient tuples, lowest degree first ----------

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_rem(a, f, p: int) -> list[int]:
    """Remainder of a modulo the monic polynomial f, over F_p."""
    a = _trim(a)
    df = len(f) - 1
    while len(a) - 1 >= df and a:
        c = a[-1]
        shift = len(a) - 1 - df
        for i, fi in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fi) % p
        a = _trim(a)
    return a


def poly_mul(a, b, p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return out


def _monic_polys(p: int, d: int):
    """Monic degree-d polynomials, ordered by (c_{d-1}, ..., c_0) read as an integer."""
    for m in range(p**d):
        yield [(m // p**i) % p for i in range(d)] + [1]


def is_irreducible(f, p: int) -> bool:
    """Brute-force factor search; fine for the small degrees used here."""
    k = len(f) - 1
    if k <= 0:
        return False
    for d in range(1, k // 2 + 1):
        for g in _monic_polys(p, d):
            if not poly_rem(f, g, p):
                return False
    return True


def smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    for f in _monic_polys(p, k):
        if is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


@dataclass(frozen=True, eq=False)
class FieldCtx:
    """Immutable arithmetic context for F_p < F_q < F_{q^2}.

    Scalar methods without a suffix act on F_q; methods ending in ``2`` act
    on F_{q^2}.  The numpy tables are read-only and used by the vectorised
    code in the geometry modules.
    """

    p: int
    k: int
    q: int
    base_poly: tuple[int, ...]
    ext_nonsquare: int
    omega: int
    gamma: int
    add_table: np.ndarray = field(repr=False)
    mul_table: np.ndarray = field(repr=False)
    neg_table: np.ndarray = field(repr=False)
    inv_table: np.ndarray = field(repr=False)
    chi_table: np.ndarray = field(repr=False)
    exp2: np.ndarray = field(repr=False)
    log2: np.ndarray = field(repr=False)

    # --- encodings ---------------------------------------------------------

    def digits(self, a: int) -> tuple[int, ...]:
        return tuple((a // self.p**i) % self.p for i in range(self.k))

    def from_digits(self, ds) -> int:
        return sum(int(d) % self.p * self.p**i for i, d in enumerate(ds))

    def embed(self, n: int) -> int:
        """The image of the integer n in F_p, as an F_q code."""
        return n % self.p

    def split(self, a: int) -> tuple[int, int]:
        return a % self.q, a // self.q

    def join(self, c0: int, c1: int) -> int:
        return c0 + self.q * c1

    @property
    def one(self) -> int:
        return 1

    @property
    def minus_one(self) -> int:
        return self.p - 1

    # --- F_q ---------------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def sub(self, a: int, b: int) -> int:
        return int(self.add_table[a, self.neg_table[b]])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of 0 in F_%d" % self.q)
        return int(self.inv_table[a])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, m: int) -> int:
        if m < 0:
            return self.pow(self.inv(a), -m)
        r = 1
        while m:
            if m & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            m >>= 1
        return r

    def quad_char(self, a: int) -> int:
        """eta(a) in {-1, 0, 1}, from the frozen Euler-criterion table."""
        return int(self.chi_table[a])

    def is_square(self, a: int) -> bool:
        return self.quad_char(a) == 1

    # --- F_{q^2} -----------------------------------------------------------

    def add2(self, a: int, b: int) -> int:
        a0, a1 = self.split(a)
        b0, b1 = self.split(b)
        return self.join(self.add(a0, b0), self.add(a1, b1))

    def neg2(self, a: int) -> int:
        a0, a1 = self.split(a)
        return self.join(self.neg(a0), self.neg(a1))

    def sub2(self, a: int, b: int) -> int:
        return self.add2(a, self.neg2(b))

    def mul2_poly(self, a: int, b: int) -> int:
        """Product by the coordinate formula (reference path)."""
        a0, a1 = self.split(a)
        b0, b1 = self.split(b)
        n = self.ext_nonsquare
        c0 = self.add(self.mul(a0, b0), self.mul(n, self.mul(a1, b1)))
        c1 = self.add(self.mul(a0, b1), self.mul(a1, b0))
        return self.join(c0, c1)

    def mul2(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        n = self.q * self.q - 1
        return int(self.exp2[(int(self.log2[a]) + int(self.log2[b])) % n])

    def frobenius(self, a: int) -> int:
        a0, a1 = self.split(a)
        return self.join(a0, self.neg(a1))

    def norm(self, a: int) -> int:
        a0, a1 = self.split(a)
        return self.sub(self.mul(a0, a0), self.mul(self.ext_nonsquare, self.mul(a1, a1)))

    def trace(self, a: int) -> int:
        a0, _ = self.split(a)
        return self.add(a0, a0)

    def inv2(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of 0 in F_%d" % (self.q * self.q))
        ninv = self.inv(self.norm(a))
        c0, c1 = self.split(self.frobenius(a))
        return self.join(self.mul(c0, ninv), self.mul(c1, ninv))

    def pow2(self, a: int, m: int) -> int:
        if m < 0:
            return self.pow2(self.inv2(a), -m)
        r = 1
        while m:
            if m & 1:
                r = self.mul2_poly(r, a)
            a = self.mul2_poly(a, a)
            m >>= 1
        return r

    def omega_pow(self, e: int) -> int:
        return int(self.exp2[e % (self.q * self.q - 1)])

    def in_base(self, a: int) -> bool:
        return a < self.q

    # --- vectorised helpers ------------------------------------------------

    @cached_property
    def norm_table(self) -> np.ndarray:
        c0 = np.arange(self.q * self.q) % self.q
        c1 = np.arange(self.q * self.q) // self.q
        sq0 = self.mul_table[c0, c0]
        sq1 = self.mul_table[self.ext_nonsquare, self.mul_table[c1, c1]]
        t = self.add_table[sq0, self.neg_table[sq1]]
        t.flags.writeable = False
        return t

    def mul2_vec(self, a, b):
        q = self.q
        a0, a1 = a % q, a // q
        b0, b1 = b % q, b // q
        M, A = self.mul_table, self.add_table
        c0 = A[M[a0, b0], M[self.ext_nonsquare, M[a1, b1]]]
        c1 = A[M[a0, b1], M[a1, b0]]
        return c0 + q * c1

    def frobenius_vec(self, a):
        return a % self.q + self.q * self.neg_table[a // self.q]

    # --- misc --------------------------------------------------------------

    def elements(self) -> range:
        return range(self.q)

    def elements2(self) -> range:
        return range(self.q * self.q)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "k": self.k,
            "base_poly": list(self.base_poly),
            "ext_nonsquare": self.ext_nonsquare,
            "omega": list(self.split(self.omega)),
        }

    def __reduce__(self):
        return field_create, (self.p, self.k)


def _base_tables(p: int, k: int, f) -> tuple[np.ndarray, np.ndarray]:
    q = p**k
    codes = np.arange(q)
    D = np.stack([(codes // p**i) % p for i in range(k)], axis=1)
    weights = p ** np.arange(k)
    add = ((D[:, None, :] + D[None, :, :]) % p) @ weights
    if k == 1:
        mul = np.outer(codes, codes) % p
    else:
        mul = np.zeros((q, q), dtype=np.int64)
        polys = [list(row) for row in D]
        for a in range(q):
            for b in range(a, q):
                r = poly_rem(poly_mul(polys[a], polys[b], p), f, p)
                c = sum(ci * p**i for i, ci in enumerate(r))
                mul[a, b] = mul[b, a] = c
    return add.astype(np.int64), mul


def _freeze(*arrays):
    for a in arrays:
        a.flags.writeable = False


def field_create(p: int, k: int = 1) -> FieldCtx:
    """Build the tower for q = p**k deterministically.

    F_q uses the smallest monic irreducible of degree k; F_{q^2} adjoins a
    square root of the smallest nonsquare of F_q; omega is the primitive
    element of F_{q^2} with the smallest code, and gamma = omega^((q-1)/2).
    """
    if p == 2:
        raise EvenCharacteristic("characteristic 2 is not supported")
    if not is_prime(p):
        raise NotPrime("p=%d is not prime" % p)
    if k < 1:
        raise ValueError("k must be a positive integer")
    q = p**k
    f = smallest_irreducible(p, k)
    add, mul = _base_tables(p, k, f)
    neg = np.array([int(np.where(add[a] == 0)[0][0]) for a in range(q)], dtype=np.int64)
    inv = np.zeros(q, dtype=np.int64)
    for a in range(1, q):
        inv[a] = int(np.where(mul[a] == 1)[0][0])

    # Euler's criterion by repeated squaring in the table arithmetic.
    def fpow(a, m):
        r = 1
        while m:
            if m & 1:
                r = int(mul[r, a])
            a = int(mul[a, a])
            m >>= 1
        return r

    minus_one = int(neg[1])
    chi = np.zeros(q, dtype=np.int64)
    for a in range(1, q):
        e = fpow(a, (q - 1) // 2)
        assert e in (1, minus_one)
        chi[a] = 1 if e == 1 else -1
    nonsquare = int(np.where(chi == -1)[0][0])

    _freeze(add, mul, neg, inv, chi)
    empty = np.zeros(0, dtype=np.int64)
    ctx = FieldCtx(p, k, q, f, nonsquare, 0, 0, add, mul, neg, inv, chi, empty, empty)

    order = q * q - 1
    factors = prime_factors(order)
    omega = next(
        a for a in range(1, q * q)
        if all(ctx.pow2(a, order // r) != 1 for r in factors)
    )
    exp2 = np.zeros(order, dtype=np.int64)
    log2 = np.zeros(q * q, dtype=np.int64)
    x = 1
    for i in range(order):
        exp2[i] = x
        log2[x] = i
        x = ctx.mul2_poly(x, omega)
    assert x == 1
    _freeze(exp2, log2)
    gamma = int(exp2[(q - 1) // 2])
    return FieldCtx(p, k, q, f, nonsquare, omega, gamma, add, mul, neg, inv, chi, exp2, log2)


def multiplicative_order2(ctx: FieldCtx, a: int) -> int:
    """Order of a nonzero element of F_{q^2}, via the prime factorisation of q^2 - 1."""
    n = ctx.q * ctx.q - 1
    for r in prime_factors(n):
        while n % r == 0 and ctx.pow2(a, n // r) == 1:
            n //= r
    return n


def order_of_unit(ctx: FieldCtx, a: int) -> int:
    n = ctx.q - 1
    for r in prime_factors(n):
        while n % r == 0 and ctx.pow(a, n // r) == 1:
            n //= r
    return n


__all__ = [
    "FieldCtx",
    "field_create",
    "is_prime",
    "prime_factors",
    "is_irreducible",
    "smallest_irreducible",
    "poly_mul",
    "poly_rem",
    "multiplicative_order2",
    "order_of_unit",
]
