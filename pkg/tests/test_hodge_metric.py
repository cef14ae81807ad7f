import dataclasses
from fractions import Fraction as F

import numpy as np
import pytest

from kahlercone import hodge_metric as hm
from kahlercone.algebra import fixture
from kahlercone.lefschetz import NotPolarizedError
from kahlercone.scalars import FLOAT, GaussQ


def test_p1_is_half_plane_metric():
    a = fixture("p1")
    for t in (F(1), F(1, 2), F(3), F(7, 5), F(2, 9)):
        f = hm.lu_metric(a, [t])
        assert f.G[0][0] == 1 / (2 * t) ** 2   # (z + zbar)^{-2} at z = t + i s
        R = hm.curvature_tensor(a, [t], field=f)
        assert R(0, 0, 0, 0) == -2 / (2 * t) ** 4
        assert hm.holomorphic_sectional_curvature(R, [GaussQ(3, -2)]) == -4


def test_p1_curvature_at_half():
    R = hm.curvature_tensor(fixture("p1"), [F(1, 2)])
    assert R(0, 0, 0, 0) == -2


def test_weil_petersson_examples():
    assert hm.weil_petersson_metric(fixture("p1xp1"), [1, 1]).G == [[1, 0], [0, 1]]
    assert hm.weil_petersson_metric(fixture("p2"), [1]).G == [[1]]


def test_not_polarized_raises():
    with pytest.raises(NotPolarizedError):
        hm.lu_metric(fixture("p1xp1"), [1, -1])


def test_unknown_flavor():
    with pytest.raises(ValueError):
        hm.canonical_flavor("bergman")
    assert hm.canonical_flavor("lu_hodge_on_H0") == hm.LU_H0


def _random_points(alg, k, seed):
    from kahlercone.suite import random_points
    return random_points(alg, k, seed)


def _leading_minors_positive(G):
    from kahlercone import linalg
    return all(GaussQ.coerce(m).re > 0 and not GaussQ.coerce(m).im for m in linalg.leading_minors(G))


@pytest.mark.parametrize("name", ["p1xp1", "t2", "p1xp2"])
def test_lu_metric_hermitian_positive_and_kahler(name):
    a = fixture(name)
    for t in _random_points(a, 5 if name == "p1xp1" else 2, 3):
        f = hm.lu_metric(a, t)
        G = f.G
        assert all(G[j][k] == GaussQ.coerce(G[k][j]).conjugate() for j in range(a.N) for k in range(a.N))
        assert _leading_minors_positive(G)
        rep = hm.kahler_check(a, t, field=f)
        assert rep.passed and all(r.residual == 0 for r in rep.records)


def test_kahler_check_vacuous_for_n1():
    rep = hm.kahler_check(fixture("p2"), [1])
    assert rep.passed and "vacuous" in rep.records[0].detail


def test_curvature_symmetries():
    a = fixture("p1xp1")
    R = hm.curvature_tensor(a, [F(2, 3), F(5, 4)])
    rng = range(a.N)
    for j in rng:
        for k in rng:
            for l in rng:
                for m in rng:
                    v = R(j, k, l, m)
                    assert v == R(l, k, j, m) == R(j, m, l, k)
                    assert v == GaussQ.coerce(R(k, j, m, l)).conjugate()


def test_hsc_homogeneous():
    a = fixture("p1xp1")
    R = hm.curvature_tensor(a, [F(3, 2), 1])
    v = [GaussQ(1, 2), GaussQ(-1, F(1, 3))]
    c = GaussQ(F(2, 7), -3)
    assert hm.holomorphic_sectional_curvature(R, v) == hm.holomorphic_sectional_curvature(R, [c * x for x in v])
    with pytest.raises(ValueError):
        hm.holomorphic_sectional_curvature(R, [0, 0])


def test_hsc_invariant_under_basis_rescaling():
    a = fixture("p1xp1")
    b = dataclasses.replace(a, e_basis=[[2 * x for x in e] for e in a.e_basis], _cache={})
    t = [F(3, 2), F(4, 5)]
    v = [GaussQ(1, 1), GaussQ(2, -1)]
    Ra = hm.curvature_tensor(a, t)
    Rb = hm.curvature_tensor(b, [x / 2 for x in t])
    assert hm.holomorphic_sectional_curvature(Ra, v) == hm.holomorphic_sectional_curvature(
        Rb, [x / 2 for x in v])


def test_jet_curvature_matches_finite_differences():
    a = fixture("p1xp1")
    t = [1.3, 0.7]
    step = 1e-3

    def G(tt):
        return np.array(hm.lu_metric(a, tt, mode=FLOAT).G, dtype=complex)

    R = hm.curvature_tensor(a, t, mode=FLOAT)
    scale = max(abs(complex(R(j, k, l, m))) for j in range(2) for k in range(2)
                for l in range(2) for m in range(2))
    G0 = G(t)
    Ginv = np.linalg.inv(G0)
    e = np.eye(2)
    dG = [(G(t + step * e[l]) - G(t - step * e[l])) / (2 * step) / 2 for l in range(2)]
    for l in range(2):
        for m in range(2):
            el, em = step * e[l], step * e[m]
            dd = (G(t + el + em) - G(t + el - em) - G(t - el + em) + G(t - el - em)) / (4 * step * step) / 4
            fd = -dd + dG[l] @ Ginv @ dG[m]
            for j in range(2):
                for k in range(2):
                    ref = fd[j, k]
                    got = complex(R(j, k, l, m))
                    assert abs(got - ref) <= 1e-4 * scale


def test_bounds_p2():
    a = fixture("p2")
    assert hm.hsc_bound(a, hm.LU) == F(-1, 12)
    assert hm.hsc_bound(a, hm.LU_H0) == F(-1, 3)
    rep = hm.bound_check(a, [1], count=20, seed=1)
    assert rep.passed


def test_bound_check_p1xp1_sweep():
    a = fixture("p1xp1")
    samples = []
    rep = hm.bound_check(a, [1, 1], count=40, seed=7, samples=samples)
    assert rep.passed
    assert all(s.hsc <= F(-1, 16) for s in samples if s.flavor == hm.LU)
    assert all(s.hsc < 0 for s in samples)


def test_sample_directions_deterministic_and_unit():
    d1 = hm.sample_directions(3, 10, seed=5)
    d2 = hm.sample_directions(3, 10, seed=5)
    assert d1 == d2
    for v in d1:
        assert sum(abs(complex(x)) ** 2 for x in v) == pytest.approx(1, abs=1e-2)
    assert hm.sample_directions(3, 0, seed=5) == []


def test_scan_csv_columns():
    a = fixture("p1")
    samples = []
    hm.bound_check(a, [2], count=3, seed=0, flavors=(hm.LU,), samples=samples)
    text = hm.scan_csv(samples)
    lines = text.strip().splitlines()
    assert lines[0] == ",".join(hm.CSV_COLUMNS)
    assert all(line.split(",")[4] == "-4" for line in lines[1:])
