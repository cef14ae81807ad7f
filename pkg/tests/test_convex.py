import random
from fractions import Fraction as F
from itertools import combinations, permutations
from math import factorial, prod

import pytest

from kahlercone import convex as cv


def hull(points):
    """Monotone-chain convex hull, used as an oracle for Minkowski sums."""
    pts = sorted(set(points))
    if len(pts) < 3:
        return pts

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and cv._cross(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lo, hi = half(pts), half(reversed(pts))
    return lo[:-1] + hi[:-1]


def sum_by_hull(P, Q):
    return cv.Polygon(hull([(a[0] + b[0], a[1] + b[1]) for a in P.vertices for b in Q.vertices]))


def inclusion_exclusion(*bodies):
    n = len(bodies)
    total = F(0)
    for k in range(1, n + 1):
        for S in combinations(bodies, k):
            acc = S[0]
            for b in S[1:]:
                acc = cv.minkowski_sum(acc, b)
            total += (-1) ** (n - k) * cv.volume(acc)
    return total


def random_polygon(rng, m=6):
    pts = [(F(rng.randint(-20, 20), rng.randint(1, 4)), F(rng.randint(-20, 20), rng.randint(1, 4)))
           for _ in range(m)]
    h = hull(pts)
    if len(h) < 3:
        return cv.unit_square()
    return cv.Polygon(h)


SQ = cv.unit_square()
TRI = cv.standard_triangle()


def test_volume_examples():
    assert cv.volume(SQ) == 1
    assert cv.volume(TRI) == F(1, 2)
    assert cv.volume(cv.box(2, 3)) == 6


def test_square_plus_square():
    s = cv.minkowski_sum(SQ, SQ)
    assert s.vertices == ((0, 0), (2, 0), (2, 2), (0, 2))
    assert cv.homothety_ratio(SQ, s) == 2


def test_square_plus_triangle():
    s = cv.minkowski_sum(TRI, SQ)
    assert len(s.vertices) == 5
    # 1/2 + 1 + mixed coefficient 2; the pentagon has area 7/2
    assert cv.volume(s) == F(7, 2)
    assert cv.mixed_volume(TRI, SQ) == 2


def test_identity_summand():
    P = cv.polygon((0, 0), (3, 1), (1, 2))
    Z = cv.polygon((0, 0), degenerate=True)
    assert cv.minkowski_sum(P, Z).vertices == P.vertices
    assert cv.minkowski_sum(cv.box(1, 2), cv.box(0, 0)) == cv.box(1, 2)


def test_segment_summand():
    seg = cv.polygon((0, 0), (1, 0), (3, 0), degenerate=True)
    assert seg.vertices == ((0, 0), (3, 0))
    s = cv.minkowski_sum(SQ, seg)
    assert cv.volume(s) == 4 and len(s.vertices) == 4


def test_minkowski_matches_hull_oracle():
    rng = random.Random(3)
    for _ in range(25):
        P, Q = random_polygon(rng), random_polygon(rng)
        ours = cv.minkowski_sum(P, Q)
        assert ours.vertices == sum_by_hull(P, Q).vertices
        assert cv.volume(ours) == cv.volume(P) + cv.volume(Q) + cv.mixed_volume(P, Q)


def test_mixed_volume_examples():
    assert cv.mixed_volume(SQ, SQ) == 2 == factorial(2) * cv.volume(SQ)
    assert cv.mixed_volume(cv.box(1, 2), cv.box(3, 5)) == 1 * 5 + 2 * 3
    assert cv.mixed_volume(cv.box(1, 2, 3), cv.box(1, 2, 3), cv.box(1, 2, 3)) == 6 * 6


def test_mixed_volume_matches_inclusion_exclusion():
    rng = random.Random(8)
    for _ in range(10):
        P, Q = random_polygon(rng), random_polygon(rng)
        assert cv.mixed_volume(P, Q) == inclusion_exclusion(P, Q)
    for _ in range(10):
        bs = [cv.box(*[F(rng.randint(0, 6), rng.randint(1, 3)) for _ in range(3)]) for _ in range(3)]
        assert cv.mixed_volume(*bs) == inclusion_exclusion(*bs)


def box_closed_form(boxes):
    """Permanent of the side matrix: coefficient of t_1..t_n in prod_k sum_i t_i a_ik."""
    n = len(boxes)
    return sum((prod(boxes[i].sides[p[i]] for i in range(n)) for p in permutations(range(n))), F(0))


def test_mixed_volume_boxes_closed_form_and_symmetry():
    rng = random.Random(5)
    for n in (2, 3, 4):
        bs = [cv.box(*[F(rng.randint(0, 5), rng.randint(1, 3)) for _ in range(n)]) for _ in range(n)]
        v = cv.mixed_volume(*bs)
        assert v == box_closed_form(bs)
        perm = bs[:]
        rng.shuffle(perm)
        assert cv.mixed_volume(*perm) == v
        c = F(rng.randint(1, 5), rng.randint(1, 5))
        assert cv.mixed_volume(bs[0].scaled(c), *bs[1:]) == c * v


def test_volume_polynomial_square_triangle():
    p = cv.volume_polynomial([TRI, SQ])
    assert p == {(2, 0): F(1, 2), (1, 1): 2, (0, 2): 1}


def test_mixed_volume_errors():
    with pytest.raises(cv.ConvexError):
        cv.mixed_volume(SQ)
    with pytest.raises(cv.ConvexError):
        cv.mixed_volume(SQ, cv.box(1, 1))
    with pytest.raises(cv.ConvexError):
        cv.minkowski_sum(cv.box(1), cv.box(1, 2))


def test_polygon_validation():
    with pytest.raises(cv.ConvexError):
        cv.polygon((0, 0), (2, 0), (1, 1), (2, 2), (0, 2))   # reflex vertex
    with pytest.raises(cv.ConvexError):
        cv.polygon((0, 0), (1, 0), (2, 0))
    with pytest.raises(cv.ConvexError):
        cv.polygon((0, 0), (1, 1), (1, 0), (0, 1))           # bow tie
    with pytest.raises(cv.ConvexError):
        cv.box(1, -1)
    cw = cv.polygon((0, 1), (1, 1), (1, 0), (0, 0))
    assert cw.vertices == SQ.vertices
    assert cv.polygon((0, 0), (1, 0), (2, 0), (2, 2), (0, 2)).vertices == ((0, 0), (2, 0), (2, 2), (0, 2))


def test_bm():
    r = cv.bm_values(SQ, SQ.scaled(3))
    assert r.sign == 0 and r.homothetic
    assert cv.bm_check(SQ, SQ.scaled(3)).passed
    r = cv.bm_values(SQ, TRI)
    assert r.sign == 1 and not r.homothetic
    # 7/2 vs 1 + 1/2 + 2 sqrt(1/2): s = 2, s^2 - 4ab = 4 - 2
    assert r.margin == 2
    b = cv.box(1, 2, 3)
    assert cv.bm_values(b, b.scaled(F(5, 2))).sign == 0
    assert cv.bm_values(b, cv.box(3, 2, 1)).sign == 1
    assert cv.bm_values(cv.box(2), cv.box(5)).sign == 0


def test_bm_random_boxes_4d():
    rng = random.Random(2)
    for _ in range(10):
        a = cv.box(*[rng.randint(1, 9) for _ in range(4)])
        b = cv.box(*[rng.randint(1, 9) for _ in range(4)])
        assert cv.bm_check(a, b).passed


def test_af_examples():
    r = cv.af_values(cv.box(1, 1, 1), cv.box(1, 2, 1), cv.box(2, 1, 1))
    assert (r.v12, r.v11, r.v22, r.margin) == (11, 8, 14, 9)
    assert cv.af_check(cv.box(1, 1, 1), cv.box(1, 2, 1), cv.box(2, 1, 1)).passed


def test_af_random_boxes():
    rng = random.Random(0)
    for _ in range(30):
        bs = [cv.box(*[F(rng.randint(1, 9), rng.randint(1, 3)) for _ in range(3)]) for _ in range(3)]
        assert cv.af_values(*bs).margin >= 0


def test_convex_log_convexity():
    rows = cv.neg_log_volume_second(SQ, SQ.scaled(3), steps=4)
    # |A_s| = (1 + 2s)^2, (-log)'' = 8/(1+2s)^2
    assert [v for _, v in rows] == [F(8) / (1 + 2 * s) ** 2 for s, _ in rows]
    assert cv.log_convexity_check(TRI, SQ, steps=6).passed
    assert cv.log_convexity_check(cv.box(1, 2, 3), cv.box(3, 1, 1), steps=5).passed


def test_read_polygons():
    text = "# square\n0 0\n1 0\n1 1\n0 1\n\n0 0\n1/2 0\n0 1/2\n"
    ps = cv.read_polygons(text)
    assert len(ps) == 2 and cv.volume(ps[1]) == F(1, 8)
    with pytest.raises(cv.ConvexError):
        cv.read_polygons("0 0 0\n")
