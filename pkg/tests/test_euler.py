import json

import pytest
from hypothesis import given, strategies as st

from pfchi import geometry as G
from pfchi.errors import SingularSystem
from pfchi.euler import (EulerValue, Fibration, FormulaSet, Report, chi_hat, crt, vandermonde_decompose,
                         verify_axioms)
from pfchi.torsion import frob_matrix, torsion_basis, trace_det


def test_chi_hat_examples():
    assert chi_hat("x*x = 1", 7, [2, 3, 6], free=["x:K1"]).entries == {2: 0, 3: 2, 6: 2}
    assert chi_hat("x = 0", 5, [2, 3, 4, 9], free=["x:K1"]).entries == {2: 1, 3: 1, 4: 1, 9: 1}
    assert chi_hat("x = x + 1", 5, [2, 3, 4], free=["x:K1"]).entries == {2: 0, 3: 0, 4: 0}


@given(st.dictionaries(st.sampled_from([3, 4, 5, 7, 11]), st.integers(0, 1000), min_size=1))
def test_crt_against_search(residues):
    x, M = crt(residues)
    assert all(x % m == r % m for m, r in residues.items())
    assert x == min(v for v in range(M) if all(v % m == r % m for m, r in residues.items()))


@given(st.integers(-10**6, 10**6))
def test_euler_values_are_coherent(n):
    v = EulerValue.from_integer(n, [2, 4, 8, 3, 9, 6, 12, 36])
    assert v.coherent()
    assert EulerValue.from_json(v.to_json()) == v
    assert not EulerValue({2: 1, 4: 2}).coherent()


def test_empty_family_report_passes():
    assert verify_axioms([], 5, [2, 3]).passed
    rep = Report()
    rep.add(3, "demo", 1, 2)
    assert not rep.passed and json.loads(rep.to_json())[0]["pass"] is False


def test_axioms_on_small_corpus():
    sets = [FormulaSet.of("x*x = 1", ["x:K1"]), FormulaSet.of("exists y:K1. y*y = x", ["x:K1"]),
            FormulaSet.of("x*y = 1", ["x:K1", "y:K1"]), G.gm(7), G.affine_line(7)]
    names = ["x", "y"]
    total = G.ConstructibleSpec("affine", tuple(names), (G.parse_poly("x*y - 1", names),), (), 7, 1)
    rep = verify_axioms(sets, 7, [2, 3, 4, 6, 9], [Fibration(total, ("x",))])
    assert rep.passed, rep.failures()
    checks = {r["check"].split("[")[0] for r in rep.records}
    assert {"additivity", "multiplicativity", "parity-unique", "coherence", "strong-fibration"} <= checks


def test_non_constant_fibers_are_flagged():
    names = ["x", "y"]
    total = G.ConstructibleSpec("affine", tuple(names), (G.parse_poly("y^2 - x", names),), (), 7, 1)
    rep = verify_axioms([], 7, [2], [Fibration(total, ("x",))])
    assert not rep.passed


def test_equal_extensions_get_equal_values():
    a = FormulaSet.of("x*x = 1", ["x:K1"])
    b = FormulaSet.of("(x - 1)*(x + 1) = 0", ["x:K1"])
    spec = G.ConstructibleSpec("affine", ("x",), (G.parse_poly("x^2 - 1", ["x"]),), (), 7, 1)
    values = [chi_hat(X, 7, [2, 3, 4, 9]).entries for X in (a, b, spec)]
    assert values[0] == values[1] == values[2]


def test_vandermonde_matches_histogram():
    names = ["x", "y"]
    for p in (5, 7, 11):
        spec = G.ConstructibleSpec("affine", tuple(names), (G.parse_poly("y^3 - x", names),), (), p, 1)
        hist = G.fiber_histogram(spec, ["x"])
        m = max(hist)
        powers = [G.count_points(G.fiber_power(spec, ["x"], r)) for r in range(1, m + 1)]
        res = vandermonde_decompose(hist, powers)
        assert res.total == sum(v for k, v in hist.items() if k)
    with pytest.raises(SingularSystem):
        vandermonde_decompose(None, [3, 4])


@pytest.mark.parametrize("q", [5, 7])
def test_count_mod_ell_k_matches_frobenius_trace(q):
    for a in range(q):
        E = G.Weierstrass.from_list([a, 1], q)
        if E.is_singular():
            continue
        for ell, k in ((2, 1), (3, 1), (2, 2)):
            n = ell**k
            tr, _ = trace_det(frob_matrix(torsion_basis(E, ell, k)), n)
            spec = E.projective_spec()
            assert chi_hat(spec, q, [n])[n] == (1 - tr + q) % n
