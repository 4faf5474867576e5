"""Named invariant checks, run by ``qovoid selftest``."""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm
from typing import Callable

import numpy as np

from . import charcount, orbits as orb, ovoid
from .gf import FieldCtx, is_irreducible, multiplicative_order2
from .quadric import Quadric


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


class Context:
    """Lazily built objects shared between checks."""

    def __init__(self, ctx: FieldCtx, workers: int = 1, t: int | None = None):
        self.ctx = ctx
        self.quad = Quadric(ctx, workers=workers)
        self.action = orb.Action(self.quad)
        self.t = t
        self._M = None

    @property
    def M(self) -> ovoid.OvoidSet:
        if self._M is None:
            self._M = ovoid.construct_M(self.quad, ovoid.find_ab(self.ctx, self.t), self.action)
        return self._M


def check_field(c: Context) -> str:
    ctx = c.ctx
    assert is_irreducible(list(ctx.base_poly), ctx.p)
    assert ctx.quad_char(ctx.ext_nonsquare) == -1
    assert multiplicative_order2(ctx, ctx.omega) == ctx.q ** 2 - 1
    assert ctx.norm(ctx.gamma) == ctx.minus_one
    return "q=%d omega=%r" % (ctx.q, ctx.split(ctx.omega))


def check_group(c: Context) -> str:
    ctx, q = c.ctx, c.ctx.q
    gens = orb.generators(ctx)
    orders = [orb.element_order(ctx, g) for g in gens]
    assert orders == [q - 1, (q + 1) // 2, 2], orders
    assert orb.coprime_orders(q)
    assert orb.element_order(ctx, orb.compose(ctx, gens[0], gens[1])) == lcm(q - 1, (q + 1) // 2)
    n = len(orb.closure(ctx, gens))
    assert n == q * q - 1, n
    return "orders %s, |G|=%d" % (orders, n)


def check_census(c: Context) -> str:
    recs = orb.orbit_decomposition(c.quad)
    return repr(orb.census(recs))


def check_short_criterion(c: Context) -> str:
    ctx = c.ctx
    recs = c.action.decomposition
    oid = c.action.orbit_id
    n = 0
    for i in range(len(c.quad)):
        P = c.quad.point(i)
        if not all(P):
            continue
        assert orb.is_short_predicate(ctx, P) == (recs[oid[i]].cls == orb.SHORT)
        n += 1
    return "%d points agree" % n


def check_T(c: Context) -> str:
    q = c.ctx.q
    T = c.M.components["C4"]
    assert int(T.sum()) == ovoid.t_size(q)
    for pm in c.action.gen_perms:
        assert np.array_equal(T[pm], T)
    return "|T|=%d" % T.sum()


def check_char_sums(c: Context) -> str:
    ctx = c.ctx
    rng = np.random.default_rng(20260101)
    n = 0
    for _ in range(100):
        a2 = int(rng.integers(1, ctx.q))
        a1, a0 = (int(v) for v in rng.integers(0, ctx.q, 2))
        charcount.char_sum_quadratic(ctx, a2, a1, a0)
        n += 1
    assert charcount.char_sum_quadratic(ctx, 1, 1, 0) == -1
    return "%d quadratics (seed 20260101)" % n


def check_square_shift(c: Context) -> str:
    counts = charcount.square_shift_counts(c.ctx)
    charcount.census_cross_check(c.ctx, c.action.decomposition)
    return repr(counts.as_dict())


def check_m_ovoid(c: Context) -> str:
    q = c.ctx.q
    rep = ovoid.verify_m_ovoid(c.quad, c.M.union, (q - 1) // 2)
    assert rep.passed, rep.histogram
    return "histogram %r" % rep.histogram


def check_cases(c: Context) -> str:
    lc = ovoid.LineCases(c.quad, c.action)
    bd = ovoid.breakdown_all(c.quad, c.M)
    for i, case in enumerate(lc.tags.tolist()):
        y1 = lc.y1(i) if case in (3, 4) else None
        assert tuple(bd[i]) == ovoid.expected_breakdown(c.ctx, c.M.params, case, y1), i
    return "%d lines" % len(bd)


def check_sigma(c: Context) -> str:
    U = c.M.union
    assert np.array_equal(U[c.action.sigma_perm], U)
    for pm in c.action.gen_perms:
        assert np.array_equal(U[pm], U)
    return "M fixed by sigma and the generators"


CHECKS: list[tuple[str, Callable[[Context], str]]] = [
    ("field tower", check_field),
    ("generator orders, |G|", check_group),
    ("orbit census", check_census),
    ("short-orbit criterion", check_short_criterion),
    ("|T| and G-invariance", check_T),
    ("quadratic character sums", check_char_sums),
    ("square-shift counts", check_square_shift),
    ("(q-1)/2-ovoid property", check_m_ovoid),
    ("per-case line breakdown", check_cases),
    ("sigma invariance", check_sigma),
]


def run_all(ctx: FieldCtx, workers: int = 1, t: int | None = None) -> list[CheckResult]:
    c = Context(ctx, workers, t)
    out = []
    for name, fn in CHECKS:
        try:
            out.append(CheckResult(name, True, fn(c)))
        except Exception as e:  # report every check, do not stop at the first failure
            out.append(CheckResult(name, False, "%s: %s" % (type(e).__name__, e)))
    return out
