from __future__ import annotations

import itertools

import numpy as np
import pytest

from qovoid.errors import NotCollinear, ZeroVector
from qovoid.quadric import (Quadric, VecV, enumerate_lines, enumerate_lines_array,
                            eval_B, eval_Q, line_through, normalize, scale, vadd)

from conftest import field, geometry


def brute_point_count(F):
    """Singular nonzero vectors of F_q^3 x F_q^2 divided by q - 1."""
    n = 0
    for x, y, z in itertools.product(F.elements(), repeat=3):
        s = F.add(F.mul(x, y), F.mul(z, z))
        for a in F.elements2():
            if F.add(s, F.norm(a)) == 0:
                n += 1
    return (n - 1) // (F.q - 1)


@pytest.mark.parametrize("pk", [(3, 2), (13, 1)])
def test_point_count_oracle(pk):
    F = field(*pk)
    q = F.q
    quad = Quadric(F)
    assert len(quad) == brute_point_count(F) == (q + 1) * (q * q + 1)


def test_points_canonical_and_sorted():
    quad, _, _ = geometry(13)
    F = quad.ctx
    assert np.all(np.diff(quad.codes) > 0)
    for i in range(0, len(quad), 37):
        P = quad.point(i)
        assert normalize(F, P) == P
        assert eval_Q(F, P) == 0


def test_normalize():
    F = field(13)
    assert normalize(F, VecV(0, 2, F.join(4, 0), 6)) == VecV(0, 1, F.join(2, 0), 3)
    assert normalize(F, VecV(0, 0, F.join(0, 5), 0)) == VecV(0, 0, F.join(0, 1), 0)
    with pytest.raises(ZeroVector):
        normalize(F, VecV(0, 0, 0, 0))


def test_polar_form_identity(rng):
    F = field(3, 2)
    for _ in range(200):
        u = VecV(*(int(v) for v in rng.integers(0, 9, 2)), int(rng.integers(0, 81)), int(rng.integers(0, 9)))
        v = VecV(*(int(v) for v in rng.integers(0, 9, 2)), int(rng.integers(0, 81)), int(rng.integers(0, 9)))
        lhs = F.sub(F.sub(eval_Q(F, vadd(F, u, v)), eval_Q(F, u)), eval_Q(F, v))
        assert eval_B(F, u, v) == lhs


def test_lines_against_pairwise_oracle():
    """Every orthogonal pair of singular points spans a line; dedupe and compare."""
    quad, _, _ = geometry(3, 2)
    F = quad.ctx
    pts = [quad.point(i) for i in range(len(quad))]
    found = set()
    covered = set()
    for i, P in enumerate(pts):
        for j in range(i + 1, len(pts)):
            if (i, j) in covered or eval_B(F, P, pts[j]):
                continue
            L = tuple(sorted(quad.index(R) for R in line_through(F, P, pts[j]).pts))
            found.add(L)
            covered.update(itertools.combinations(L, 2))
    ours = {tuple(sorted(r)) for r in quad.lines.tolist()}
    assert ours == found
    assert len(found) == 820


@pytest.mark.parametrize("pk", [(3, 2), (13, 1), (17, 1)])
def test_line_counts(pk):
    quad, _, _ = geometry(*pk)
    q = quad.q
    L = quad.lines
    assert L.shape == ((q + 1) * (q * q + 1), q + 1)
    assert np.all(np.diff(L, axis=1) > 0)
    assert np.array_equal(np.bincount(L.ravel()), np.full(len(quad), q + 1))
    assert quad.point_lines.shape == (len(quad), q + 1)


def test_lines_totally_singular(rng):
    quad, _, _ = geometry(13)
    F = quad.ctx
    for li in rng.choice(len(quad.lines), 40, replace=False):
        pts = [quad.point(int(i)) for i in quad.lines[li]]
        for P, Q in itertools.combinations(pts[:5], 2):
            assert eval_B(F, P, Q) == 0


def test_gq_axiom(rng):
    """A point off a line is collinear with exactly one of its points."""
    quad, _, _ = geometry(13)
    F = quad.ctx
    for _ in range(40):
        li = int(rng.integers(len(quad.lines)))
        pi = int(rng.integers(len(quad)))
        line = quad.lines[li]
        if pi in line:
            continue
        P = quad.point(pi)
        assert sum(eval_B(F, P, quad.point(int(j))) == 0 for j in line) == 1


def test_workers_do_not_change_lines():
    quad = Quadric(field(3, 2))
    assert np.array_equal(enumerate_lines_array(quad, workers=1), enumerate_lines_array(quad, workers=2))


def test_enumerate_lines_objects():
    F = field(3, 2)
    lines = enumerate_lines(F)
    assert len(lines) == 820
    first = lines[0]
    assert len(first.pts) == 10
    assert first.pts[0] in first


def test_line_through_errors():
    F = field(13)
    P = VecV(1, 0, 0, 0)
    with pytest.raises(NotCollinear):
        line_through(F, P, scale(F, 5, P))
    with pytest.raises(NotCollinear):
        line_through(F, P, VecV(0, 1, 0, 0))  # B = 1


def test_index_roundtrip():
    quad, _, _ = geometry(13)
    for i in (0, 5, len(quad) - 1):
        assert quad.index(scale(quad.ctx, 3, quad.point(i))) == i
    with pytest.raises(KeyError):
        quad.index(VecV(1, 1, 0, 0))
