"""Acceptance criteria 1-9, one PASS/FAIL line each.

Run with ``pytest -v tests/test_acceptance.py``; the lines print even when
output capture is on.
"""

import random
import time
from fractions import Fraction as F

import numpy as np
import pytest

from kahlercone import convex as cv
from kahlercone import hodge_metric as hm
from kahlercone import inequalities as iq
from kahlercone.algebra import fixture
from kahlercone.higgs import (JetProbe, deriv, h00_curvature, jet_structure, part, real_curvature,
                              second, value, verify_adjoint_identity, verify_flatness,
                              verify_fundamental_identity)
from kahlercone.lefschetz import build
from kahlercone.scalars import EXACT, FLOAT, GaussQ
from kahlercone.suite import random_directions, random_points

FIVE = ("p1", "p2", "p1xp1", "p1xp1xp1", "t2")
SEED = 42


def announce(capsys, n, ok, msg):
    with capsys.disabled():
        print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {msg}")
    assert ok, msg


@pytest.fixture(scope="module")
def points():
    return {name: random_points(fixture(name), 10, SEED) for name in FIVE}


def test_criterion_1_flatness(capsys, points):
    start = time.perf_counter()
    total = bad = 0
    families = set()
    for name in FIVE:
        a = fixture(name)
        for t in points[name]:
            rep = verify_flatness(a, t, EXACT)
            for r in rep.records:
                total += 1
                families.add(r.identity)
                bad += not (r.passed and r.residual == 0)
    elapsed = time.perf_counter() - start
    ok = bad == 0 and len(families) == 3 and elapsed < 60
    announce(capsys, 1, ok, f"flatness, {total} block records over 5 fixtures x 10 points, "
             f"{bad} nonzero, {elapsed:.1f}s (< 60s)")


def test_criterion_2_commutator(capsys, points):
    exact_bad = float_bad = n = 0
    worst = 0.0
    for name in FIVE:
        a = fixture(name)
        for t in points[name]:
            probe = JetProbe(a, t, EXACT)
            for rep in (verify_fundamental_identity(a, t, probe=probe),
                        verify_adjoint_identity(a, t, probe=probe)):
                n += len(rep.records)
                exact_bad += sum(not (r.passed and r.residual == 0) for r in rep.records)
            tf = [float(x) for x in t]
            fprobe = JetProbe(a, tf, FLOAT)
            for rep in (verify_fundamental_identity(a, tf, mode=FLOAT, probe=fprobe),
                        verify_adjoint_identity(a, tf, mode=FLOAT, probe=fprobe)):
                worst = max([worst] + [r.residual for r in rep.records])
                float_bad += sum(not r.passed for r in rep.records)
    ok = exact_bad == 0 and float_bad == 0 and worst < 1e-10
    announce(capsys, 2, ok, f"star commutator and both adjoint forms: {n} exact records, "
             f"{exact_bad} nonzero; worst float relative residual {worst:.2e} (< 1e-10)")


def test_criterion_3_h00_and_effective_bm(capsys, points):
    bad = 0
    for name in FIVE:
        a = fixture(name)
        dirs = random_directions(a.N, len(points[name]), SEED)
        for t, z in zip(points[name], dirs):
            lhs, rhs = h00_curvature(a, t, z)
            l2, r2 = iq.effective_bm(a, t, z)
            bad += not (lhs == rhs and l2 == r2 and GaussQ.coerce(lhs).re >= 0)
    p2 = iq.effective_bm(fixture("p2"), [1], [1])
    ok = bad == 0 and p2 == (2, 2)
    announce(capsys, 3, ok, f"(Theta 1,1) = ||theta||^2 and effective BM exact at 50 points ({bad} failures); "
             f"P2 t=1 zeta=1 gives lhs={p2[0]} rhs={p2[1]}")


def test_criterion_4_surface_suite(capsys):
    a = fixture("p1xp1")
    c = iq.surface_curvature(a, [1, 1], [1, 0], [1, 0])
    hand = (c.a_zeta == F(1, 2) and c.b_zz == F(-1, 4) and c.curvature == -1
            and c.closed_R == 16 * c.a_eta * c.a_zeta * c.b_ze * c.volume == -1)
    bad = 0
    for name in ("p2", "p1xp1"):
        alg = fixture(name)
        pts = random_points(alg, 10, SEED)
        dirs = random_directions(alg.N, 30, SEED)
        for i, t in enumerate(pts):
            z, e, l = dirs[3 * i:3 * i + 3]
            for rep in (iq.verify_n2_derivative_identities(alg, t, z, e, l),
                        iq.verify_n2_curvature(alg, t, z, e)):
                bad += sum(not (r.passed and r.residual == 0) for r in rep.records)
    ok = hand and bad == 0
    announce(capsys, 4, ok, f"P1xP1 t=(1,1): a={c.a_zeta} b_zz={c.b_zz} R={c.curvature} "
             f"16 a a b |X|={c.closed_R}; derivative and curvature identities on P2, P1xP1 x 10 points: {bad} nonzero")


def test_criterion_5_p1(capsys):
    a = fixture("p1")
    g_ok = all(hm.lu_metric(a, [x]).G[0][0] == 1 / (x + x) ** 2
               for x in (F(1), F(1, 2), F(3), F(7, 5), F(2, 9)))
    samples = []
    hm.bound_check(a, [1], count=5, seed=0, flavors=(hm.LU,), samples=samples)
    fsamples = []
    hm.bound_check(a, [1.0], count=5, seed=0, mode=FLOAT, flavors=(hm.LU,), samples=fsamples)
    exact_ok = all(s.hsc == -4 and s.bound == F(-1, 2) and s.margin == F(7, 2) for s in samples)
    float_ok = all(abs(s.hsc + 4) <= 1e-9 for s in fsamples)
    ok = g_ok and exact_ok and float_ok
    announce(capsys, 5, ok, f"P1: G = (z+zbar)^-2 at 5 points: {g_ok}; HSC exact {samples[0].hsc}, "
             f"float {fsamples[0].hsc!r}; bound -1/2, margin {samples[0].margin}")


def test_criterion_6_bound_sweep(capsys):
    start = time.perf_counter()
    worst_gap, worst_bis, n = None, None, 0
    for name in ("p2", "p1xp1", "t2"):
        a = fixture(name)
        bound = hm.hsc_bound(a, hm.LU)
        dirs = hm.sample_directions(a.N, 200, SEED)
        for t in random_points(a, 5, SEED):
            R = hm.curvature_tensor(a, t)
            for v, w in zip(dirs, dirs[1:] + dirs[:1]):
                gap = hm.holomorphic_sectional_curvature(R, v) - bound
                bis = hm.bisectional_curvature(R, v, w)
                worst_gap = gap if worst_gap is None else max(worst_gap, gap)
                worst_bis = bis if worst_bis is None else max(worst_bis, bis)
                n += 1
    elapsed = time.perf_counter() - start
    ok = worst_gap <= 1e-9 and worst_bis <= 1e-9 and elapsed < 120
    announce(capsys, 6, ok, f"{n} exact HSC samples on P2, P1xP1, torus(2): max(HSC - bound) = "
             f"{float(worst_gap):.4g}, max bisectional = {float(worst_bis):.4g}, {elapsed:.1f}s (< 120s)")


def test_criterion_7_kt_and_log_convexity(capsys):
    bad = prop_bad = tuples = 0
    for name in ("p2", "p1xp1", "p1xp1xp1", "t2"):
        a = fixture(name)
        pts = random_points(a, 100 + (a.n - 2), SEED)
        fixed = pts[100:]
        rng = random.Random(SEED)
        for i in range(100):
            w1 = pts[i]
            w2 = pts[rng.randrange(100)]
            tuples += 1
            r = iq.kt_values(a, w1, w2, fixed)
            bad += r.margin < 0 or (r.proportional and r.margin != 0)
            for row in iq.log_convexity_scan(a, w1, w2, fixed, steps=2):
                bad += not row.in_cone or row.neg_log_second < 0 or row.kt_defect < 0
            c = F(rng.randint(1, 9), rng.randint(1, 9))
            w3 = [c * x for x in w1]
            r = iq.kt_values(a, w1, w3, fixed)
            prop_bad += not (r.proportional and r.margin == 0)
            prop_bad += any(row.kt_defect != 0 for row in iq.log_convexity_scan(a, w1, w3, fixed, steps=2))
    ok = bad == 0 and prop_bad == 0
    announce(capsys, 7, ok, f"KT and log-convexity on {tuples} tuples over P2, P1xP1, P1xP1xP1, torus(2): "
             f"{bad} negative margins; proportional pairs with nonzero margin: {prop_bad}")


def test_criterion_8_convex(capsys):
    sq = cv.unit_square()
    mv = cv.mixed_volume(sq, sq)
    homo = all(cv.bm_values(b, b.scaled(c)).sign == 0
               for b in (sq, cv.standard_triangle(), cv.box(1, 2, 3))
               for c in (F(1, 2), 2, 5))
    rng = random.Random(SEED)
    af_bad = 0
    for _ in range(100):
        bs = [cv.box(*[F(rng.randint(1, 12), rng.randint(1, 4)) for _ in range(3)]) for _ in range(3)]
        af_bad += cv.af_values(*bs).margin < 0
    bridge = iq.bridge_check([[1, 0], [0, 1]]).passed
    v12 = iq.mixed_intersection(fixture("p1xp1"), [1, 0], [0, 1])
    ok = mv == 2 and homo and af_bad == 0 and bridge and v12 == F(1, 2) * mv
    announce(capsys, 8, ok, f"mixed_volume(square, square) = {mv}; BM equality on homothets: {homo}; "
             f"AF on 100 box triples: {af_bad} negative; bridge V(e1,e2) = {v12} = 1/2 * {mv}")


def fd_check(jet, f, t, direction, h=1e-4, order=1):
    t = np.asarray(t, dtype=float)
    d = np.asarray(direction, dtype=float)
    if order == 1:
        ref = (f(t + h * d) - f(t - h * d)) / (2 * h)
    else:
        ref = (f(t + h * d) - 2 * f(t) + f(t - h * d)) / (h * h)
    ref = np.asarray(ref, dtype=complex)
    got = np.asarray(jet, dtype=complex)
    scale = max(np.abs(ref).max(), np.abs(got).max())
    return float(np.abs(got - ref).max() / scale)


def test_criterion_9_jet_vs_finite_differences(capsys):
    errs = {}
    tol = 1e-5
    # lefschetz / higgs_cone: d star, d Lambda, d^2 of the Gram matrix
    a = fixture("p1xp1")
    t = [1.3, 0.8]
    z = [1.0, -0.5]
    s = jet_structure(a, t, FLOAT, d1=z)
    errs["d star"] = fd_check(part(s.star, "c1"), lambda x: np.array(build(a, x, FLOAT).star), t, z)
    errs["d Lambda"] = fd_check(part(s.lam, "c1"), lambda x: np.array(build(a, x, FLOAT).lam), t, z)
    errs["d2 Gram"] = fd_check(second(s.gram, 1, 1), lambda x: np.array(build(a, x, FLOAT).gram), t, z,
                               order=2)
    # hodge_metric: dG, d2G on P2 and P1xP1
    f = hm.lu_metric(a, t, mode=FLOAT)
    G = lambda x: 0.5 * np.array(hm.lu_metric(a, list(x), mode=FLOAT).G, dtype=complex)
    errs["dG"] = fd_check(f.dG(0), G, t, [1, 0])
    GG = lambda x: 0.25 * np.array(hm.lu_metric(a, list(x), mode=FLOAT).G, dtype=complex)
    errs["ddG"] = fd_check(f.ddG(1, 1), GG, t, [0, 1], order=2)
    p2 = fixture("p2")
    errs["dG P2"] = fd_check(hm.lu_metric(p2, [0.7], mode=FLOAT).dG(0),
                             lambda x: 0.5 * np.array(hm.lu_metric(p2, list(x), mode=FLOAT).G, dtype=complex),
                             [0.7], [1])
    # inequality_lab: volume derivatives and the derivative of a_eta
    t2 = fixture("t2")
    tt = [float(x) for x in t2.sample_point]
    zt = [1.0] + [0.5] * (t2.N - 1)
    vol = lambda x: GaussQ.coerce(iq.volume(t2, [F(y) for y in x])).re
    V = iq._jet_volume(t2, tt, zt, FLOAT)
    errs["d |X|"] = fd_check(V.c1, lambda x: float(vol(x)), tt, zt)
    errs["d2 |X|"] = fd_check(V.dd(1, 1), lambda x: float(vol(x)), tt, zt, order=2)
    eta = [0.3, 1.1]
    sz = jet_structure(a, t, FLOAT, d1=z)
    az, _, _ = iq.surface_coeffs(a, t, [eta], FLOAT, structure=sz)
    a_eta = lambda x: complex(iq.primitive_coeffs_2d(a, list(x), eta, FLOAT).a)
    errs["d a_eta"] = fd_check(az[0].c1, a_eta, t, z)
    worst = max(errs.values())
    ok = worst < tol
    summary = ", ".join(f"{k} {v:.1e}" for k, v in errs.items())
    announce(capsys, 9, ok, f"jet vs central differences, worst relative error {worst:.1e} (< 1e-5): {summary}")
