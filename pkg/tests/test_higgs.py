from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kahlercone import higgs, linalg
from kahlercone.algebra import fixture
from kahlercone.lefschetz import build
from kahlercone.scalars import FLOAT, GaussQ


def test_p1_hand_values():
    a = fixture("p1")
    for t in (F(1), F(3), F(2, 5)):
        probe = higgs.JetProbe(a, [t])
        A = higgs.connection_matrix(a, 0, [t])
        Th = higgs.curvature(probe, 0, 0)
        adj = higgs.theta_adjoint(a, 0, [t])
        assert A[0][0] == 1 / (2 * t)
        assert Th[0][0] == 1 / (4 * t * t)
        # theta^* sends e to 1/(2 t^2) * 1
        assert adj[0][1] == 1 / (2 * t * t) and adj[1][0] == 0


def test_theta_squared_vanishes():
    a = fixture("t2")
    th = [higgs.higgs_theta(a, j) for j in range(a.N)]
    for x in th:
        for y in th:
            assert linalg.commutator(x, y) == linalg.zeros(a.rank, a.rank)


def test_direction_out_of_range():
    with pytest.raises(IndexError):
        higgs.higgs_theta(fixture("p2"), 1)


@pytest.mark.parametrize("name", ["p1", "p2", "p1xp1", "p1xp1xp1", "p1xp2", "t1", "t2"])
def test_identities_at_sample_point(name):
    a = fixture(name)
    probe = higgs.JetProbe(a, a.sample_point)
    for check in (higgs.verify_fundamental_identity, higgs.verify_adjoint_identity,
                  higgs.verify_chern_connection, higgs.verify_flatness):
        rep = check(a, a.sample_point, probe=probe)
        assert rep.passed and all(r.residual == 0 for r in rep.records), check.__name__


def test_flatness_records_cover_bidegrees():
    a = fixture("p1xp1")
    rep = higgs.verify_flatness(a, a.sample_point)
    fams = {r.identity for r in rep.records}
    assert fams == {"flat_i_curvature", "flat_ii_dbar_theta_star", "flat_iii_dh_theta"}
    assert sum(r.identity == "flat_i_curvature" for r in rep.records) == 4 * len(a.bidegrees)


def test_float_flatness():
    a = fixture("t2")
    t = [float(x) for x in a.sample_point]
    rep = higgs.verify_flatness(a, t, mode=FLOAT)
    assert rep.passed
    assert max(r.residual for r in rep.records) < 1e-10


def test_subbundle_split():
    a = fixture("t2")
    sp = higgs.subbundle_split(a, a.sample_point)
    assert sp.ranks() == {-2: 1, -1: 4, 0: 6, 1: 4, 2: 1}
    assert all(sp.block_diagonal.values())
    assert higgs.subbundle_split(fixture("p2")).ranks() == {0: 3}


@settings(max_examples=15, deadline=None)
@given(st.fractions(min_value=F(1, 4), max_value=4, max_denominator=12),
       st.lists(st.integers(-3, 3), min_size=2, max_size=2).filter(any))
def test_h00_curvature_is_norm(t, zeta):
    a = fixture("p1xp1")
    lhs, rhs = higgs.h00_curvature(a, [t, 2 * t + 1], zeta)
    assert lhs == rhs
    assert GaussQ.coerce(lhs).re > 0


def test_h00_rejects_zero_direction():
    with pytest.raises(ValueError):
        higgs.h00_curvature(fixture("p2"), [1], [0])


def test_chern_form_matches_commutator_form():
    a = fixture("p1xp2")
    probe = higgs.JetProbe(a, a.sample_point)
    for j in range(a.N):
        assert higgs.chern_connection_matrix(probe, j) == higgs.connection_matrix(a, j, a.sample_point)
