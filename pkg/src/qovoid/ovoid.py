"""
The (q-1)/2-ovoid M of Q(4,q), q = 1 mod 4, q > 5, and an exhaustive
m-ovoid checker.

M is the disjoint union of five G-invariant pieces:

    C1  the conic orbit O(1,-1,0,1)
    C2  the short orbit O(1,-w^(2(q+1)),w^2,0) in the plane z = 0
    C3  the long orbit O(1,0,w^((q-1)/2),1)
    C4  T = {(x,y,a,1) : xya != 0, 1 + xy/b^2 a nonzero square}
    C5  the short orbit O(1,-b^2,a,1)

where w is the fixed primitive element of F_{q^2} and 1 + a^2 = b^2.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import CensusMismatch, NoAnchor, NoSolution, UnsupportedQ
from .gf import FieldCtx
from .orbits import Action, apply, inverse, named_points
from .quadric import Quadric, VecV

COMPONENTS = ("C1", "C2", "C3", "C4", "C5")


def check_supported(q: int) -> None:
    if q % 4 != 1:
        raise UnsupportedQ(
            "q=%d is not congruent to 1 mod 4; this construction needs q = 1 (mod 4) "
            "(the q = 3 (mod 4) family is a different construction)" % q)
    if q <= 5:
        raise UnsupportedQ(
            "q=%d is too small; the construction needs q > 5 (for q = 5 the set T is empty)" % q)


@dataclass(frozen=True)
class OvoidParams:
    a: int
    b: int
    t: int

    def as_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "t": self.t}


def ab_from_t(ctx: FieldCtx, t: int) -> OvoidParams:
    if t == 0 or ctx.pow(t, 4) == 1:
        raise NoSolution("t=%d gives a = 0 or b = 0" % t)
    ti = ctx.inv(t)
    half = ctx.inv(ctx.embed(2))
    a = ctx.mul(ctx.sub(ti, t), half)
    b = ctx.mul(ctx.add(ti, t), half)
    assert ctx.add(1, ctx.mul(a, a)) == ctx.mul(b, b)
    return OvoidParams(a, b, t)


def find_ab(ctx: FieldCtx, t: int | None = None) -> OvoidParams:
    """(a, b) = ((1/t - t)/2, (1/t + t)/2) for the smallest t with t^4 != 1."""
    if t is not None:
        return ab_from_t(ctx, t)
    for t in range(1, ctx.q):
        if ctx.pow(t, 4) != 1:
            return ab_from_t(ctx, t)
    raise NoSolution("every t in F_%d* has t^4 = 1" % ctx.q)


def construct_T(quad: Quadric, params: OvoidParams) -> np.ndarray:
    """Boolean mask over point indices of the set T."""
    ctx = quad.ctx
    M = ctx.mul_table
    x, y, c0, c1, z = (quad.points[:, i] for i in range(5))
    zi = ctx.inv_table[z]
    xy = M[M[x, zi], M[y, zi]]
    binv2 = ctx.inv(ctx.mul(params.b, params.b))
    val = ctx.add_table[1, M[binv2, xy]]
    return (z != 0) & (x != 0) & (y != 0) & ((c0 != 0) | (c1 != 0)) & (ctx.chi_table[val] == 1)


def t_size(q: int) -> int:
    return (q * q - 1) * (q - 5) // 2


def m_size(q: int) -> int:
    return (q - 1) * (q * q + 1) // 2


@dataclass
class OvoidSet:
    q: int
    params: OvoidParams
    components: dict[str, np.ndarray]
    union: np.ndarray = field(repr=False)

    def sizes(self) -> list[int]:
        return [int(self.components[c].sum()) for c in COMPONENTS]

    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.union)

    @cached_property
    def label(self) -> np.ndarray:
        """Per point: 0 outside M, else 1..5 for the component it lies in."""
        lab = np.zeros(len(self.union), dtype=np.int64)
        for i, c in enumerate(COMPONENTS, start=1):
            lab[self.components[c]] = i
        return lab


def construct_M(quad: Quadric, params: OvoidParams | None = None, action: Action | None = None) -> OvoidSet:
    ctx, q = quad.ctx, quad.q
    check_supported(q)
    params = params or find_ab(ctx)
    action = action or Action(quad)
    n = len(quad)
    named = named_points(ctx)

    def orbit_mask(P):
        m = np.zeros(n, dtype=bool)
        m[list(action.orbit_of(P).members)] = True
        return m

    comps = {
        "C1": orbit_mask(named["conic"]),
        "C2": orbit_mask(named["plane_sq"]),
        "C3": orbit_mask(named["axis_long"]),
        "C4": construct_T(quad, params),
        "C5": orbit_mask(VecV(1, ctx.neg(ctx.mul(params.b, params.b)), params.a, 1)),
    }
    want = [q - 1, (q * q - 1) // 2, q * q - 1, t_size(q), (q * q - 1) // 2]
    got = [int(comps[c].sum()) for c in COMPONENTS]
    if got != want:
        raise CensusMismatch("component sizes %r, expected %r" % (got, want))
    total = np.sum([comps[c] for c in COMPONENTS], axis=0)
    if total.max() > 1:
        raise CensusMismatch("components overlap")
    union = total == 1
    if int(union.sum()) != m_size(q) or sum(want) != m_size(q):
        raise CensusMismatch("|M| = %d, expected %d" % (union.sum(), m_size(q)))
    for c in comps.values():
        c.flags.writeable = False
    union.flags.writeable = False
    return OvoidSet(q, params, comps, union)


@dataclass
class OvoidReport:
    q: int
    m_target: int
    histogram: dict[int, int]
    passed: bool
    worst_lines: list[list[int]]

    def as_dict(self) -> dict:
        return {
            "q": self.q,
            "m_target": self.m_target,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "pass": self.passed,
            "worst_lines": self.worst_lines,
        }


def _as_mask(S, n: int) -> np.ndarray:
    S = np.asarray(S)
    if S.dtype == bool:
        if len(S) != n:
            raise ValueError("mask length %d != %d points" % (len(S), n))
        return S
    m = np.zeros(n, dtype=bool)
    m[S.astype(np.int64)] = True
    return m


def verify_m_ovoid(quad: Quadric, S, m: int, lines: np.ndarray | None = None,
                   workers: int = 1) -> OvoidReport:
    """Count |line & S| for every line; pass iff every count equals m.

    S is a boolean mask or an iterable of point indices.  Lines are split
    into contiguous blocks, each counted into a private histogram.
    """
    mask = _as_mask(S, len(quad))
    L = quad.lines if lines is None else lines
    blocks = np.array_split(np.arange(len(L)), max(1, workers))

    def count(idx):
        return mask[L[idx]].sum(axis=1)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(count, blocks))
    else:
        parts = [count(b) for b in blocks]
    counts = np.concatenate(parts)
    hist = Counter(counts.tolist())
    bad = np.flatnonzero(counts != m)
    bad = bad[np.argsort(-np.abs(counts[bad] - m), kind="stable")][:10]
    worst = [[int(L[i, 0]), int(L[i, 1])] for i in bad]
    return OvoidReport(quad.q, m, dict(sorted(hist.items())), set(hist) == {m}, worst)


def intersect_breakdown(line: np.ndarray, M: OvoidSet) -> tuple[int, ...]:
    return tuple(int(M.components[c][line].sum()) for c in COMPONENTS)


def breakdown_all(quad: Quadric, M: OvoidSet) -> np.ndarray:
    """(L, 5) array of component intersection counts for every line."""
    lab = M.label[quad.lines]
    return np.stack([(lab == i).sum(axis=1) for i in range(1, 6)], axis=1)


ANCHORS = ("origin", "qp1_omega", "axis_long", "axis_long3")
REDUCED = 5


class LineCases:
    """Case tags and anchor data for every line.

    Every line meets the hyperplane y = 0.  The tag is the first of the
    four anchor orbits (through (1,0,0,0), (0,0,w^((q-1)/2),1),
    (1,0,w^((q-1)/2),1), (1,0,w^(3(q-1)/2),1)) met by a y = 0 point.
    Lines through (0,1,0,0) get ``REDUCED``: their y = 0 point is in the
    second anchor orbit, but tau carries them onto case-1 lines.
    """

    def __init__(self, quad: Quadric, action: Action):
        self.quad = quad
        self.action = action
        self.ctx = quad.ctx
        named = named_points(self.ctx)
        self.anchor_points = [named[a] for a in ANCHORS]
        oid = action.orbit_id
        case_of_point = np.full(len(quad), 99, dtype=np.int64)
        y0 = quad.points[:, 1] == 0
        for c, P in enumerate(self.anchor_points, start=1):
            sel = y0 & (oid == action.orbit_index_of(P)) & (case_of_point == 99)
            case_of_point[sel] = c
        self.case_of_point = case_of_point

    @cached_property
    def tags(self) -> np.ndarray:
        L = self.quad.lines
        t = self.case_of_point[L].min(axis=1)
        if (t == 99).any():
            raise NoAnchor("a line misses every anchor orbit")
        origin = self.action.orbit_id == self.action.orbit_index_of(self.anchor_points[0])
        t[(t != 1) & origin[L].any(axis=1)] = REDUCED
        t.flags.writeable = False
        return t

    def classify(self, line_index: int) -> int:
        return int(self.tags[line_index])

    @cached_property
    def _transversals(self):
        return {c: self.action.transversal(self.anchor_points[c - 1]) for c in (3, 4)}

    def y1(self, line_index: int) -> int:
        """For a case-3/4 line: move it onto the line through the anchor point,
        then read y from its z = 0 point scaled to x = 1."""
        ctx, quad = self.ctx, self.quad
        row = quad.lines[line_index]
        case = self.classify(line_index)
        if case not in (3, 4):
            raise ValueError("y1 is defined for case 3/4 lines only")
        anchor = next(int(i) for i in row if self.case_of_point[i] == case)
        g = self._transversals[case][anchor]
        zpts = [int(i) for i in row if quad.points[i, 4] == 0]
        assert len(zpts) == 1
        x, y, _, _ = apply(ctx, inverse(ctx, g), quad.point(zpts[0]))
        return ctx.div(y, x)


def expected_breakdown(ctx: FieldCtx, params: OvoidParams, case: int, y1: int | None = None) -> tuple[int, ...]:
    """Component counts (C1..C5) a line of the given case must show.

    For case 3/4 with s = [y1 square] and r = (eta(y1(4b^2 - y1)) + 1)/2 the
    tuple is (0, s, 1, (q-3)/2 - r - s, r) when y1 != 4.  When y1 = 4 the
    line's point with parameter t = -2 has alpha = 0: it sits on the conic
    orbit instead of in T, shifting one count from C4 to C1.
    """
    q = ctx.q
    m = (q - 1) // 2
    if case in (1, REDUCED):
        return (0, 0, m, 0, 0)
    if case == 2:
        return (0, 0, 0, m, 0)
    s = 1 if ctx.is_square(y1) else 0
    b2 = ctx.mul(params.b, params.b)
    e = ctx.quad_char(ctx.mul(y1, ctx.sub(ctx.mul(ctx.embed(4), b2), y1)))
    r = (e + 1) // 2
    c = 1 if y1 == ctx.embed(4) else 0
    return (c, s, 1, (q - 3) // 2 - r - s - c, r)
