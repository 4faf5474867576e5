"""Quadratic character sums over F_q and the square-shift counts."""

from __future__ import annotations

from dataclasses import asdict, dataclass

from .errors import CensusMismatch, UnsupportedQ
from .gf import FieldCtx
from .orbits import LONG, SHORT


@dataclass(frozen=True)
class CharCounts:
    n1: int  # eta(x), eta(x+1) = (+1, +1)
    n2: int  # (+1, -1)
    n3: int  # (-1, +1)
    n4: int  # (-1, -1)

    def as_dict(self) -> dict:
        return asdict(self)


def closed_form_quadratic(ctx: FieldCtx, a2: int, a1: int, a0: int) -> int:
    d = ctx.sub(ctx.mul(a1, a1), ctx.mul(ctx.embed(4), ctx.mul(a0, a2)))
    e = ctx.quad_char(a2)
    return -e if d else (ctx.q - 1) * e


def char_sum_quadratic(ctx: FieldCtx, a2: int, a1: int, a0: int) -> int:
    """Sum of eta(a2 c^2 + a1 c + a0) over c in F_q, by brute force.

    The result is checked against the closed form -eta(a2) (nonzero
    discriminant) or (q-1) eta(a2) (zero discriminant).
    """
    if a2 == 0:
        raise ValueError("leading coefficient must be nonzero")
    total = 0
    for c in ctx.elements():
        g = ctx.add(ctx.add(ctx.mul(a2, ctx.mul(c, c)), ctx.mul(a1, c)), a0)
        total += ctx.quad_char(g)
    expected = closed_form_quadratic(ctx, a2, a1, a0)
    if total != expected:
        raise AssertionError("character sum %d != closed form %d" % (total, expected))
    return total


def square_shift_counts(ctx: FieldCtx) -> CharCounts:
    q = ctx.q
    if q % 4 != 1:
        raise UnsupportedQ("square-shift closed forms need q = 1 mod 4 (got q=%d)" % q)
    n = {(1, 1): 0, (1, -1): 0, (-1, 1): 0, (-1, -1): 0}
    for x in ctx.elements():
        x1 = ctx.add(x, 1)
        if x == 0 or x1 == 0:
            continue
        n[ctx.quad_char(x), ctx.quad_char(x1)] += 1
    out = CharCounts(n[1, 1], n[1, -1], n[-1, 1], n[-1, -1])
    want = CharCounts((q - 5) // 4, (q - 1) // 4, (q - 1) // 4, (q - 1) // 4)
    if out != want:
        raise AssertionError("square-shift counts %r != %r" % (out, want))
    return out


def orbit_invariant_y(ctx: FieldCtx, rec) -> int | None:
    """xy/z^2 on an orbit with z != 0 (constant on G-orbits), else None."""
    x, y, _, z = rec.representative
    if z == 0:
        return None
    zi = ctx.inv(z)
    return ctx.mul(ctx.mul(x, y), ctx.mul(zi, zi))


def census_cross_check(ctx: FieldCtx, orbits) -> bool:
    """Tie the orbit census to the square-shift counts.

    Short orbits: two in the plane z = 0 plus two for every y with
    eta(y) = eta(y+1).  Long orbits: two with xy = 0 plus one for every y
    with eta(y) = -eta(y+1).
    """
    c = square_shift_counts(ctx)
    q = ctx.q
    short = [o for o in orbits if o.cls == SHORT]
    long_ = [o for o in orbits if o.cls == LONG]
    if len(short) != 2 * c.n1 + 2 * c.n4 + 2 or len(short) != q - 1:
        raise CensusMismatch("short orbits: %d" % len(short))
    if len(long_) != c.n2 + c.n3 + 2 or len(long_) != (q + 3) // 2:
        raise CensusMismatch("long orbits: %d" % len(long_))

    def tally(recs):
        out: dict = {}
        for o in recs:
            y = orbit_invariant_y(ctx, o)
            out[y] = out.get(y, 0) + 1
        return out

    ts, tl = tally(short), tally(long_)
    for y in ctx.elements():
        if y == 0 or ctx.add(y, 1) == 0:
            continue
        same = ctx.quad_char(y) == ctx.quad_char(ctx.add(y, 1))
        if ts.get(y, 0) != (2 if same else 0) or tl.get(y, 0) != (0 if same else 1):
            raise CensusMismatch("orbit multiplicity wrong at y=%d" % y)
    if ts.get(None) != 2 or tl.get(0) != 2:
        raise CensusMismatch("exceptional short/long orbits miscounted")
    return True
