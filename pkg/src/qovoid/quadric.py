"""
The parabolic quadric Q(4,q) in the coordinates V = F_q x F_q x F_{q^2} x F_q.

A vector is (x, y, alpha, z) with alpha an F_{q^2} code.  For bulk work a
point is a row of five F_q codes in scan order (x, y, c0(alpha),
c1(alpha), z); the canonical representative has its first nonzero entry
equal to 1, and points are ordered lexicographically by that row, which is
the same as ordering by the integer ``encode_rows`` value.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import NamedTuple

import numpy as np

from .errors import NotCollinear, ZeroVector
from .gf import FieldCtx, field_create


class VecV(NamedTuple):
    x: int
    y: int
    alpha: int
    z: int


ProjPoint = VecV


def eval_Q(ctx: FieldCtx, v) -> int:
    x, y, a, z = v
    return ctx.add(ctx.add(ctx.mul(x, y), ctx.norm(a)), ctx.mul(z, z))


def eval_B(ctx: FieldCtx, u, v) -> int:
    x, y, a, z = u
    x2, y2, a2, z2 = v
    s = ctx.add(ctx.mul(x, y2), ctx.mul(x2, y))
    s = ctx.add(s, ctx.trace(ctx.mul2_poly(a, ctx.frobenius(a2))))
    return ctx.add(s, ctx.mul(ctx.embed(2), ctx.mul(z, z2)))


def to_row(ctx: FieldCtx, v) -> tuple[int, int, int, int, int]:
    x, y, a, z = v
    c0, c1 = ctx.split(a)
    return (x, y, c0, c1, z)


def from_row(ctx: FieldCtx, r) -> VecV:
    x, y, c0, c1, z = (int(c) for c in r)
    return VecV(x, y, ctx.join(c0, c1), z)


def scale(ctx: FieldCtx, c: int, v) -> VecV:
    x, y, a, z = v
    return VecV(ctx.mul(c, x), ctx.mul(c, y), ctx.mul2_poly(c, a), ctx.mul(c, z))


def vadd(ctx: FieldCtx, u, v) -> VecV:
    return VecV(ctx.add(u[0], v[0]), ctx.add(u[1], v[1]),
                ctx.add2(u[2], v[2]), ctx.add(u[3], v[3]))


def normalize(ctx: FieldCtx, v) -> VecV:
    """Scale v so that its first nonzero coordinate in scan order is 1."""
    for c in to_row(ctx, v):
        if c:
            return scale(ctx, ctx.inv(c), v)
    raise ZeroVector("the zero vector is not a projective point")


# --- vectorised row arithmetic --------------------------------------------

def encode_rows(q: int, rows: np.ndarray) -> np.ndarray:
    rows = np.asarray(rows, dtype=np.int64)
    code = rows[..., 0]
    for c in range(1, 5):
        code = code * q + rows[..., c]
    return code


def decode_codes(q: int, codes: np.ndarray) -> np.ndarray:
    codes = np.asarray(codes, dtype=np.int64)
    out = np.empty(codes.shape + (5,), dtype=np.int64)
    for c in range(4, -1, -1):
        out[..., c] = codes % q
        codes = codes // q
    return out


def normalize_rows(ctx: FieldCtx, rows: np.ndarray) -> np.ndarray:
    rows = np.asarray(rows, dtype=np.int64)
    nz = rows != 0
    if not nz.any(axis=1).all():
        raise ZeroVector("zero row in normalize_rows")
    lead = nz.argmax(axis=1)
    s = ctx.inv_table[rows[np.arange(len(rows)), lead]]
    return ctx.mul_table[s[:, None], rows]


def eval_Q_rows(ctx: FieldCtx, rows: np.ndarray) -> np.ndarray:
    M, A = ctx.mul_table, ctx.add_table
    x, y, c0, c1, z = (rows[:, i] for i in range(5))
    return A[A[M[x, y], ctx.norm_table[c0 + ctx.q * c1]], M[z, z]]


def _canonical_candidates(q: int) -> np.ndarray:
    """All canonical rows of PG(4,q), in increasing code order."""
    blocks = []
    for lead in range(4, -1, -1):
        free = 4 - lead
        tail = np.indices((q,) * free).reshape(free, -1).T if free else np.zeros((1, 0), int)
        block = np.zeros((len(tail), 5), dtype=np.int64)
        block[:, lead] = 1
        block[:, lead + 1:] = tail
        blocks.append(block)
    return np.concatenate(blocks)


@dataclass(frozen=True)
class TSLine:
    """A totally singular line as its sorted tuple of q+1 canonical points."""

    pts: tuple[VecV, ...]

    @property
    def key(self) -> tuple[VecV, VecV]:
        return self.pts[0], self.pts[1]

    def __contains__(self, P) -> bool:
        return tuple(P) in {tuple(x) for x in self.pts}


def line_through(ctx: FieldCtx, P, Q2) -> TSLine:
    P, Q2 = normalize(ctx, P), normalize(ctx, Q2)
    if P == Q2:
        raise NotCollinear("the two points coincide")
    if eval_Q(ctx, P) or eval_Q(ctx, Q2) or eval_B(ctx, P, Q2):
        raise NotCollinear("points are not singular and orthogonal")
    pts = {P}
    for t in ctx.elements():
        R = normalize(ctx, vadd(ctx, Q2, scale(ctx, t, P)))
        if eval_Q(ctx, R):
            raise NotCollinear("non-singular point on the span")  # pragma: no cover
        pts.add(R)
    order = sorted(pts, key=lambda v: to_row(ctx, v))
    return TSLine(tuple(order))


class Quadric:
    """Points (and, lazily, lines) of Q(4,q) for a fixed field context.

    ``points`` is an (N, 5) array of canonical rows sorted by code; a point
    is referred to by its row index everywhere else in the package.
    """

    def __init__(self, ctx: FieldCtx, workers: int = 1):
        self.ctx = ctx
        self.q = ctx.q
        self.workers = workers
        cand = _canonical_candidates(ctx.q)
        self.points = cand[eval_Q_rows(ctx, cand) == 0]
        self.points.flags.writeable = False
        self.codes = encode_rows(ctx.q, self.points)
        self.codes.flags.writeable = False

    def __len__(self) -> int:
        return len(self.points)

    def point(self, i: int) -> VecV:
        return from_row(self.ctx, self.points[i])

    def index(self, v) -> int:
        code = int(encode_rows(self.q, np.array(to_row(self.ctx, normalize(self.ctx, v)))))
        i = int(np.searchsorted(self.codes, code))
        if i == len(self.codes) or self.codes[i] != code:
            raise KeyError("not a point of the quadric: %r" % (v,))
        return i

    def index_rows(self, rows: np.ndarray) -> np.ndarray:
        """Indices of already-normalized rows; raises if any row is off the quadric."""
        codes = encode_rows(self.q, rows)
        idx = np.searchsorted(self.codes, codes)
        idx = np.minimum(idx, len(self.codes) - 1)
        if not np.array_equal(self.codes[idx], codes):
            raise KeyError("row not on the quadric")
        return idx

    @cached_property
    def lines(self) -> np.ndarray:
        return enumerate_lines_array(self, workers=self.workers)

    @cached_property
    def point_lines(self) -> np.ndarray:
        """(N, q+1) array: the line indices through each point."""
        L = self.lines
        order = np.argsort(L.ravel(), kind="stable")
        return (order // L.shape[1]).reshape(len(self), self.q + 1)

    @cached_property
    def fp_rows(self) -> np.ndarray:
        """Points as vectors over F_p of length 5k (digit-expanded rows)."""
        p, k = self.ctx.p, self.ctx.k
        digs = [(self.points // p**d) % p for d in range(k)]
        return np.stack(digs, axis=2).reshape(len(self), 5 * k)

    @cached_property
    def gram(self) -> np.ndarray:
        """Gram matrices over F_p of the digits of the polar form, shape (k, 5k, 5k)."""
        ctx = self.ctx
        p, k = ctx.p, ctx.k
        basis = []
        for c in range(5):
            for d in range(k):
                row = [0] * 5
                row[c] = p**d
                basis.append(from_row(ctx, row))
        G = np.zeros((k, 5 * k, 5 * k), dtype=np.int64)
        for r, u in enumerate(basis):
            for s, v in enumerate(basis):
                G[:, r, s] = ctx.digits(eval_B(ctx, u, v))
        return G


def enumerate_points(ctx: FieldCtx) -> list[VecV]:
    quad = Quadric(ctx)
    return [quad.point(i) for i in range(len(quad))]


@lru_cache(maxsize=4)
def _cached_quadric(p: int, k: int) -> Quadric:
    return Quadric(field_create(p, k))


def _line_chunk(quad: Quadric, i0: int, i1: int) -> np.ndarray:
    """Lines whose minimum point index lies in [i0, i1)."""
    ctx, q, p = quad.ctx, quad.q, quad.ctx.p
    pts = quad.points
    X = quad.fp_rows.astype(np.float32)
    # entries of Z are exact integers below 5k*p^2, so a lookup replaces the mod
    divisible = (np.arange(5 * quad.ctx.k * p * p) % p == 0)
    mask = None
    for G in quad.gram:
        Y = (quad.fp_rows[i0:i1] @ G) % p
        Z = Y.astype(np.float32) @ X[i0:].T
        m = divisible[Z.astype(np.int32)]
        mask = m if mask is None else mask & m
    rows, cols = np.nonzero(mask)
    rows = rows + i0
    cols = cols + i0
    keep = cols > rows
    rows, cols = rows[keep], cols[keep]
    if len(rows) == 0:
        return np.zeros((0, q + 1), dtype=np.int64)

    # Each line through P gets the id of its unique point with a zero in
    # P's leading coordinate; neighbours sharing that id share the line.
    P = pts[rows]
    Qv = pts[cols]
    lead = (P != 0).argmax(axis=1)
    s = Qv[np.arange(len(rows)), lead]
    R = ctx.add_table[Qv, ctx.neg_table[ctx.mul_table[s[:, None], P]]]
    rid = encode_rows(q, normalize_rows(ctx, R))
    key = rows * (q**5) + rid
    order = np.lexsort((cols, key))
    key, cols = key[order], cols[order]
    starts = np.flatnonzero(np.r_[True, key[1:] != key[:-1]])
    sizes = np.diff(np.r_[starts, len(key)])
    full = starts[sizes == q]
    idx = full[:, None] + np.arange(q)
    first = key[full] // (q**5)
    return np.concatenate([first[:, None], cols[idx]], axis=1)


def _line_chunk_worker(args) -> np.ndarray:
    p, k, i0, i1 = args
    return _line_chunk(_cached_quadric(p, k), i0, i1)


def _chunks(n: int, size: int) -> list[tuple[int, int]]:
    return [(i, min(i + size, n)) for i in range(0, n, size)]


def enumerate_lines_array(quad: Quadric, workers: int = 1) -> np.ndarray:
    """All totally singular lines as an (L, q+1) array of sorted point indices.

    A line is emitted only by its minimum point, and only once every other
    point on it has been found among that point's larger neighbours.  Rows
    are sorted by their first two entries, so the result does not depend on
    how the outer loop was partitioned.
    """
    n = len(quad)
    size = max(1, min(n, 20_000_000 // max(n, 1)))
    chunks = _chunks(n, size)
    if workers > 1 and len(chunks) > 1:
        # smaller chunks keep the pool busy: early rows carry more columns
        chunks = _chunks(n, max(1, size // 4))
        p, k = quad.ctx.p, quad.ctx.k
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_line_chunk_worker, [(p, k, a, b) for a, b in chunks]))
    else:
        parts = [_line_chunk(quad, a, b) for a, b in chunks]
    L = np.concatenate(parts)
    L = L[np.lexsort((L[:, 1], L[:, 0]))]
    L.flags.writeable = False
    return L


def enumerate_lines(ctx: FieldCtx, workers: int = 1) -> list[TSLine]:
    quad = Quadric(ctx, workers=workers)
    return [TSLine(tuple(quad.point(i) for i in row)) for row in quad.lines]


def default_workers() -> int:
    return max(1, (os.cpu_count() or 1))
