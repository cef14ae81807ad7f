import json
from fractions import Fraction as F
from itertools import product
from math import comb

import pytest

from kahlercone import linalg
from kahlercone.algebra import (AlgebraError, algebra_from_dict, algebra_to_dict, conjugate, cup,
                                expected_torus_dims, fixture, integrate, load_algebra,
                                poincare_gram_ranks, validate_algebra)
from kahlercone.scalars import GaussQ, I

DATA = __import__("pathlib").Path(__file__).resolve().parents[1] / "src" / "kahlercone" / "data"


def test_fixture_shapes(algebras):
    p2 = algebras["p2"]
    assert {k: v for k, v in p2.dims().items() if v} == {(0, 0): 1, (1, 1): 1, (2, 2): 1}
    assert (p2.N, p2.rank) == (1, 3)
    assert (algebras["p1xp1"].N, algebras["p1xp1"].rank) == (2, 4)
    t2 = algebras["t2"]
    assert t2.rank == 16
    assert t2.dims()[(1, 0)] == t2.dims()[(0, 1)] == 2 and t2.dims()[(1, 1)] == 4


@pytest.mark.parametrize("n", [1, 2, 3])
def test_torus_dims_are_binomial(n):
    alg = fixture("torus", n)
    for (p, q), d in expected_torus_dims(n).items():
        assert alg.dims().get((p, q), 0) == d == comb(n, p) * comb(n, q)


def test_all_fixtures_validate(algebras):
    for alg in algebras.values():
        validate_algebra(alg)
        ranks = poincare_gram_ranks(alg)
        for k, r in ranks.items():
            assert r == len(alg.indices_of_degree(k))


def test_structure_constants():
    a = fixture("p1xp1")
    e1, e2 = a.e_class(0), a.e_class(1)
    assert integrate(cup(e1, e2)) == 1
    assert cup(e1, e1).is_zero()
    p2 = fixture("p2")
    h = p2.e_class(0)
    assert integrate(h * h) == 1
    assert integrate(p2.unit() * 0) == 0


def test_integrate_rejects_lower_degree():
    p2 = fixture("p2")
    with pytest.raises(ValueError):
        integrate(p2.e_class(0))


def test_conjugation():
    a = fixture("p1xp1")
    e1 = a.e_class(0)
    assert conjugate(e1) == e1
    assert conjugate(I * e1) == -(I * e1)
    t2 = fixture("t2")
    for i in range(t2.rank):
        u = t2.basis_class(i) * GaussQ(F(2, 3), F(-1, 5))
        assert conjugate(conjugate(u)) == u


def test_graded_commutativity_on_torus():
    t2 = fixture("t2")
    for i, j in product(range(t2.rank), repeat=2):
        u, v = t2.basis_class(i), t2.basis_class(j)
        k1 = sum(t2.degree_of[i])
        k2 = sum(t2.degree_of[j])
        assert u * v == (v * u) * ((-1) ** (k1 * k2))


def test_shipped_file_roundtrips():
    loaded = load_algebra(DATA / "p2.json")
    ref = fixture("projective_space", 2)
    assert loaded.rank == ref.rank and loaded.dims() == ref.dims()
    assert loaded.cup_table == ref.cup_table
    assert algebra_to_dict(loaded)["cup"] == algebra_to_dict(ref)["cup"]


def test_dict_roundtrip_all(algebras):
    for alg in algebras.values():
        again = algebra_from_dict(json.loads(json.dumps(algebra_to_dict(alg))))
        assert again.cup_table == alg.cup_table
        assert again.conj_matrix == alg.conj_matrix


def test_non_associative_file_names_triple():
    doc = algebra_to_dict(fixture("p1xp1xp1"))
    # double the constant of e1*e2 (and e2*e1) only
    labels = [lab for group in doc["basis"] for lab in group]
    i, j = labels.index("h1"), labels.index("h2")
    for entry in doc["cup"]:
        if {entry[0], entry[1]} == {i, j}:
            entry[3] = 2
    with pytest.raises(AlgebraError) as exc:
        algebra_from_dict(doc)
    assert exc.value.invariant == "associativity"
    assert "(" in exc.value.detail


def test_two_dimensional_top_rejected():
    doc = algebra_to_dict(fixture("p2"))
    doc["dims"][-1][2] = 2
    doc["basis"][-1] = ["h^2", "x"]
    with pytest.raises(AlgebraError, match="top degree not one-dimensional"):
        algebra_from_dict(doc)


def test_parse_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(AlgebraError, match="parse error"):
        load_algebra(bad)
    doc = algebra_to_dict(fixture("p2"))
    doc["integral"] = [0.5]
    with pytest.raises(AlgebraError, match="non-rational"):
        algebra_from_dict(doc)


def test_degenerate_pairing_rejected():
    doc = algebra_to_dict(fixture("p1xp1"))
    # kill e2*e2 -> f? it is already zero; instead kill e1*e2 so H^2 pairs trivially
    labels = [lab for group in doc["basis"] for lab in group]
    i, j = labels.index("h1"), labels.index("h2")
    doc["cup"] = [e for e in doc["cup"] if {e[0], e[1]} != {i, j}]
    with pytest.raises(AlgebraError):
        algebra_from_dict(doc)


def test_poincare_matrix_full_rank_on_torus():
    t2 = fixture("t2")
    assert linalg.rank(t2.poincare_matrix()) == t2.rank
