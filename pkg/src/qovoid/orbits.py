"""
The group G generated by the maps T_{lam,mu} and tau, acting on Q(4,q).

    T_{lam,mu}: (x, y, a, z) -> (x*lam, y/lam, a * lam^((q-1)/2) * mu, z)
    tau:        (x, y, a, z) -> (y, x, a^q, z)

with lam in F_q^* and mu^((q+1)/2) = 1.  An element is stored as the triple
(lam, mu, j) meaning T_{lam,mu} o tau^j; the triple determines the
projective map uniquely, so triples are compared directly.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import NamedTuple

import numpy as np

from .errors import CensusMismatch, PredicateInapplicable, UnexpectedOrbitLength, UnsupportedQ
from .gf import FieldCtx
from .quadric import Quadric, VecV, normalize, normalize_rows

EXC2 = "EXC2"
EXC_CONIC = "EXC_CONIC"
EXC_QP1 = "EXC_QP1"
SHORT = "SHORT"
LONG = "LONG"


class GroupElem(NamedTuple):
    lam: int
    mu: int
    j: int


def identity() -> GroupElem:
    return GroupElem(1, 1, 0)


def tau() -> GroupElem:
    return GroupElem(1, 1, 1)


def _sign(ctx: FieldCtx, lam: int) -> int:
    return ctx.pow(lam, (ctx.q - 1) // 2)


def is_valid(ctx: FieldCtx, g: GroupElem) -> bool:
    return g.lam != 0 and g.j in (0, 1) and ctx.pow2(g.mu, (ctx.q + 1) // 2) == 1


def apply_vec(ctx: FieldCtx, g: GroupElem, v) -> VecV:
    """Image of a vector (not normalized)."""
    x, y, a, z = v
    if g.j:
        x, y, a = y, x, ctx.frobenius(a)
    lam = g.lam
    a = ctx.mul2_poly(a, ctx.mul2_poly(_sign(ctx, lam), g.mu))
    return VecV(ctx.mul(x, lam), ctx.mul(y, ctx.inv(lam)), a, z)


def apply(ctx: FieldCtx, g: GroupElem, P) -> VecV:
    return normalize(ctx, apply_vec(ctx, g, P))


def apply_sigma(ctx: FieldCtx, P) -> VecV:
    x, y, a, z = P
    return normalize(ctx, VecV(y, x, a, z))


def compose(ctx: FieldCtx, g1: GroupElem, g2: GroupElem) -> GroupElem:
    """g1 o g2, using tau o T_{lam,mu} o tau = T_{1/lam, mu^q}."""
    lam2, mu2 = g2.lam, g2.mu
    if g1.j:
        lam2, mu2 = ctx.inv(lam2), ctx.frobenius(mu2)
    return GroupElem(ctx.mul(g1.lam, lam2), ctx.mul2_poly(g1.mu, mu2), g1.j ^ g2.j)


def inverse(ctx: FieldCtx, g: GroupElem) -> GroupElem:
    lam, mu = ctx.inv(g.lam), ctx.inv2(g.mu)
    if g.j:
        # (T_{l,m} tau)^-1 = tau T_{1/l,1/m} = T_{l, m^-q} tau
        lam, mu = ctx.inv(lam), ctx.frobenius(mu)
    return GroupElem(lam, mu, g.j)


def element_order(ctx: FieldCtx, g: GroupElem) -> int:
    e, h, n = identity(), g, 1
    while h != e:
        h = compose(ctx, g, h)
        n += 1
    return n


def lambda0(ctx: FieldCtx) -> int:
    """Generator of F_q^*: the norm of omega."""
    return ctx.norm(ctx.omega)


def mu0(ctx: FieldCtx) -> int:
    """omega^(2(q-1)), of order (q+1)/2."""
    m = ctx.omega_pow(2 * (ctx.q - 1))
    assert ctx.pow2(m, (ctx.q + 1) // 2) == 1
    return m


def generators(ctx: FieldCtx) -> list[GroupElem]:
    return [GroupElem(lambda0(ctx), 1, 0), GroupElem(1, mu0(ctx), 0), tau()]


def all_elements(ctx: FieldCtx) -> list[GroupElem]:
    q = ctx.q
    m0 = mu0(ctx)
    mus = [1]
    for _ in range((q + 1) // 2 - 1):
        mus.append(ctx.mul2_poly(mus[-1], m0))
    return [GroupElem(lam, mu, j) for j in (0, 1) for lam in range(1, q) for mu in mus]


def closure(ctx: FieldCtx, gens) -> set[GroupElem]:
    """All products of the generators, by breadth-first multiplication."""
    seen = {identity()}
    frontier = [identity()]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                c = compose(ctx, g, h)
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
        frontier = nxt
    return seen


def apply_rows(ctx: FieldCtx, g: GroupElem, rows: np.ndarray) -> np.ndarray:
    rows = np.asarray(rows, dtype=np.int64)
    q = ctx.q
    x, y, c0, c1, z = (rows[:, i] for i in range(5))
    if g.j:
        x, y, c1 = y, x, ctx.neg_table[c1]
    lam = g.lam
    factor = ctx.mul2_poly(_sign(ctx, lam), g.mu)
    a = ctx.mul2_vec(c0 + q * c1, np.full_like(c0, factor))
    out = np.stack([ctx.mul_table[x, lam], ctx.mul_table[y, ctx.inv(lam)], a % q, a // q, z], axis=1)
    return normalize_rows(ctx, out)


def sigma_rows(ctx: FieldCtx, rows: np.ndarray) -> np.ndarray:
    rows = np.asarray(rows, dtype=np.int64)
    return normalize_rows(ctx, rows[:, [1, 0, 2, 3, 4]])


def class_of_length(q: int, n: int) -> str:
    table = {2: EXC2, q - 1: EXC_CONIC, q + 1: EXC_QP1, (q * q - 1) // 2: SHORT, q * q - 1: LONG}
    if n not in table:
        raise UnexpectedOrbitLength("orbit of length %d for q=%d" % (n, q))
    return table[n]


def is_short_predicate(ctx: FieldCtx, P) -> bool:
    """Short-orbit criterion for points with every coordinate nonzero.

    With the point scaled to z = 1, the orbit is short exactly when
    xy(1 + xy) is a nonzero square.
    """
    x, y, a, z = P
    if not (x and y and a and z):
        raise PredicateInapplicable("criterion needs x, y, alpha, z all nonzero: %r" % (P,))
    zi = ctx.inv(z)
    xy = ctx.mul(ctx.mul(x, zi), ctx.mul(y, zi))
    return ctx.quad_char(ctx.mul(xy, ctx.add(1, xy))) == 1


@dataclass(frozen=True)
class OrbitRecord:
    representative: VecV
    rep_index: int
    length: int
    cls: str
    members: tuple[int, ...]


class Action:
    """G acting on the point indices of a Quadric."""

    def __init__(self, quad: Quadric):
        self.quad = quad
        self.ctx = quad.ctx
        self.gens = generators(self.ctx)

    @property
    def order(self) -> int:
        return self.ctx.q ** 2 - 1

    def perm(self, g: GroupElem) -> np.ndarray:
        return self.quad.index_rows(apply_rows(self.ctx, g, self.quad.points))

    @cached_property
    def gen_perms(self) -> list[np.ndarray]:
        return [self.perm(g) for g in self.gens]

    @cached_property
    def sigma_perm(self) -> np.ndarray:
        return self.quad.index_rows(sigma_rows(self.ctx, self.quad.points))

    def _bfs(self, seed: int) -> list[int]:
        perms = self._perm_lists
        seen = {seed}
        queue = deque([seed])
        while queue:
            i = queue.popleft()
            for pm in perms:
                j = pm[i]
                if j not in seen:
                    seen.add(j)
                    queue.append(j)
        return sorted(seen)

    @cached_property
    def _perm_lists(self):
        return [p.tolist() for p in self.gen_perms]

    def _record(self, members: list[int]) -> OrbitRecord:
        rep = members[0]
        n = len(members)
        return OrbitRecord(self.quad.point(rep), rep, n, class_of_length(self.ctx.q, n), tuple(members))

    def orbit_of(self, P) -> OrbitRecord:
        i = P if isinstance(P, (int, np.integer)) else self.quad.index(P)
        return self._record(self._bfs(int(i)))

    @cached_property
    def decomposition(self) -> list[OrbitRecord]:
        n = len(self.quad)
        orbit_id = np.full(n, -1, dtype=np.int64)
        out = []
        for seed in range(n):
            if orbit_id[seed] >= 0:
                continue
            members = self._bfs(seed)
            orbit_id[members] = len(out)
            out.append(self._record(members))
        orbit_id.flags.writeable = False
        self._orbit_id = orbit_id
        return out

    @property
    def orbit_id(self) -> np.ndarray:
        self.decomposition
        return self._orbit_id

    def orbit_index_of(self, P) -> int:
        return int(self.orbit_id[self.quad.index(P)])

    def stabilizer_order(self, P) -> int:
        return self.order // self.orbit_of(P).length

    def stabilizer(self, P) -> list[GroupElem]:
        """Direct search over every group element fixing P projectively."""
        ctx = self.ctx
        P = normalize(ctx, P)
        return [g for g in all_elements(ctx) if apply(ctx, g, P) == P]

    def transversal(self, P) -> dict[int, GroupElem]:
        """For each point index in O(P), one element carrying P to it."""
        ctx = self.ctx
        P = normalize(ctx, P)
        out: dict[int, GroupElem] = {}
        for g in all_elements(ctx):
            i = self.quad.index(apply(ctx, g, P))
            out.setdefault(i, g)
        return out


def orbit_decomposition(quad: Quadric) -> list[OrbitRecord]:
    """All G-orbits, sorted by representative, with the census checked."""
    q = quad.q
    if q % 4 != 1:
        raise UnsupportedQ("the group G needs q = 1 mod 4 (got q=%d)" % q)
    orbits = Action(quad).decomposition
    check_census(q, orbits, len(quad))
    return orbits


def census(orbits) -> dict[str, int]:
    out = {c: 0 for c in (EXC2, EXC_CONIC, EXC_QP1, SHORT, LONG)}
    for o in orbits:
        out[o.cls] += 1
    return out


def check_census(q: int, orbits, npoints: int) -> None:
    c = census(orbits)
    want = {EXC2: 1, EXC_CONIC: 1, EXC_QP1: 1, SHORT: q - 1, LONG: (q + 3) // 2}
    if c != want:
        raise CensusMismatch("q=%d: got %r, expected %r" % (q, c, want))
    total = sum(o.length for o in orbits)
    if total != npoints or total != (q + 1) * (q * q + 1):
        raise CensusMismatch("orbit lengths sum to %d, not %d" % (total, npoints))


def coprime_orders(q: int) -> bool:
    return gcd(q - 1, (q + 1) // 2) == 1


def named_points(ctx: FieldCtx) -> dict[str, VecV]:
    """Named orbit representatives used by the construction and the case split."""
    q = ctx.q
    w = ctx.omega_pow
    m1 = ctx.minus_one

    def base(e):  # omega^e when it lies in F_q
        c0, c1 = ctx.split(w(e))
        assert c1 == 0
        return c0

    return {
        "origin": VecV(1, 0, 0, 0),
        "conic": VecV(1, m1, 0, 1),
        "qp1": VecV(0, 0, ctx.gamma, 1),
        "qp1_omega": VecV(0, 0, w((q - 1) // 2), 1),
        "plane_sq": VecV(1, ctx.neg(base(2 * (q + 1))), w(2), 0),
        "plane_nsq": VecV(1, ctx.neg(base(q + 1)), w(1), 0),
        "axis_long": VecV(1, 0, w((q - 1) // 2), 1),
        "axis_long3": VecV(1, 0, w(3 * (q - 1) // 2), 1),
        "gamma_long": VecV(1, 0, ctx.gamma, 1),
        "gamma_long2": VecV(1, 0, ctx.mul2_poly(ctx.gamma, w(q - 1)), 1),
    }


__all__ = [
    "GroupElem", "identity", "tau", "apply", "apply_vec", "apply_sigma", "compose", "inverse",
    "element_order", "generators", "all_elements", "closure", "apply_rows", "sigma_rows",
    "is_short_predicate", "OrbitRecord", "Action", "orbit_decomposition", "census",
    "check_census", "named_points", "class_of_length", "coprime_orders",
    "EXC2", "EXC_CONIC", "EXC_QP1", "SHORT", "LONG",
]
