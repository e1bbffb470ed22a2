import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from pfchi.errors import PreconditionViolated
from pfchi.geometry import Weierstrass, count_elliptic
from pfchi.gf import make_tower, prime_power
from pfchi.padic import p_rank
from pfchi.torsion import (Curve, frob_matrix, frobenius_traces, torsion_basis, trace_det, verify_trace_count,
                           verify_trace_count_p)
from pfchi.zeta import fit_curve_lpoly

import oracles


def _all_points(E: Curve):
    """Every affine point by testing all pairs (small fields only)."""
    F = E.F
    pts = [None]
    for x in range(F.order):
        for y in range(F.order):
            if E.on_curve((x, y)):
                pts.append((x, y))
    return pts


def test_two_torsion_over_f5():
    E = Weierstrass.from_list([1, 0], 5)
    basis = torsion_basis(E, 2, 1)
    assert basis.ext_degree == 1
    assert set(basis.points()) == {None, (0, 0), (2, 0), (3, 0)}
    assert frob_matrix(basis) == [[1, 0], [0, 1]]
    rep = verify_trace_count(E, 2, 1)
    assert rep.passed


def test_spec_report_examples():
    assert verify_trace_count(Weierstrass.from_list([0, 1], 5), 3, 1).passed
    with pytest.raises(PreconditionViolated):
        verify_trace_count(Weierstrass.from_list([1, 1], 5), 5, 1)
    with pytest.raises(PreconditionViolated):
        verify_trace_count_p(Weierstrass.from_list([1, 1], 5), 5, 2)


def test_p_torsion_rank():
    ordinary = Weierstrass.from_list([1, 0], 5)  # a = 2
    b = torsion_basis(ordinary, 5, 1)
    assert b.rank == 1 and b.independent() and len(b.points()) == 5
    supersingular = Weierstrass.from_list([0, 1], 5)  # a = 0
    b = torsion_basis(supersingular, 5, 1)
    assert b.rank == 0 and frob_matrix(b) == []
    assert trace_det(frob_matrix(b), 5) == (0, 1)


@pytest.mark.parametrize("q", [5, 7, 9])
def test_rank_at_p_matches_slopes(q):
    p, _ = prime_power(q)
    rng = random.Random(q)
    for _ in range(6):
        E = Weierstrass(q, 0, rng.randrange(q) if p == 3 else 0, 0, rng.randrange(q), rng.randrange(q))
        if E.is_singular():
            continue
        z = fit_curve_lpoly([count_elliptic(E)], 1, q)
        assert torsion_basis(E, p, 1).rank == p_rank(z.B, p)


@pytest.mark.parametrize("q,ell,k", [(5, 2, 1), (5, 3, 1), (7, 2, 1), (5, 2, 2), (3, 2, 1), (4, 3, 1)])
def test_torsion_count_by_enumeration(q, ell, k):
    """At the reported extension degree, the full group has exactly ell^(2k) points killed by ell^k."""
    p, kq = prime_power(q)
    rng = random.Random(7)
    tried = 0
    while tried < 3:
        co = (0, 0, 0, rng.randrange(q), rng.randrange(q)) if p != 2 else (1, 0, 0, 0, 1 + rng.randrange(q - 1))
        E = Weierstrass(q, *co)
        if E.is_singular():
            continue
        basis = torsion_basis(E, ell, k)
        if q ** basis.ext_degree > 700:
            tried += 1
            continue
        G = basis.group
        pts = _all_points(G)
        assert len(pts) == oracles.elliptic_count(co, p, kq, basis.ext_degree)
        killed = [P for P in pts if G.mul(ell**k, P) is None]
        assert len(killed) == ell ** (2 * k)
        assert set(killed) == set(basis.points())
        # brute-force Frobenius matrix: find i, j with phi(P) = iP + jQ by scanning
        n = ell**k
        M = frob_matrix(basis)
        for col, T in enumerate((basis.P, basis.Q)):
            image = G.frobenius(T)
            hits = [(i, j) for i in range(n) for j in range(n)
                    if G.add(G.mul(i, basis.P), G.mul(j, basis.Q)) == image]
            assert hits == [(M[0][col], M[1][col])]
        tried += 1


@settings(max_examples=40)
@given(st.sampled_from([(5, 2), (7, 2), (4, 3), (9, 2), (8, 1), (13, 2)]), st.integers(0, 10**6))
def test_group_law(field, seed):
    q, N = field
    p, k = prime_power(q)
    F = make_tower(p, k, N)
    rng = random.Random(seed)
    while True:
        co = tuple(rng.randrange(q) for _ in range(5))
        E = Weierstrass(q, *co)
        if not E.is_singular():
            break
    G = Curve(F, E.over(F))
    P, Q, R = (G.random_point(rng) for _ in range(3))
    assert all(G.on_curve(T) for T in (P, Q, R, G.add(P, Q), G.add(P, P)))
    assert G.add(G.add(P, Q), R) == G.add(P, G.add(Q, R))
    assert G.add(P, Q) == G.add(Q, P)
    assert G.add(P, G.neg(P)) is None
    order = frobenius_traces(E, N)[N - 1]
    assert G.mul(order, P) is None
    assert G.frobenius(G.add(P, Q)) == G.add(G.frobenius(P), G.frobenius(Q))


def test_frobenius_traces_match_enumeration():
    for q, co in ((5, (0, 0, 0, 1, 1)), (4, (1, 0, 0, 0, 1)), (9, (0, 1, 0, 0, 2))):
        p, k = prime_power(q)
        counts = frobenius_traces(Weierstrass(q, *co), 3)
        assert counts == [oracles.elliptic_count(co, p, k, n) for n in (1, 2, 3)]


def test_trace_count_at_p_example():
    E5 = Weierstrass.from_list([1, 0], 5)
    # base change to F_25: a_25 = a^2 - 2q = -6
    assert frobenius_traces(E5, 2)[1] == 32
    from pfchi.padic import unit_root

    beta = unit_root(-6, 25, 5, 2).value
    assert (32 - (1 - beta)) % 25 == 0
    E = Weierstrass(25, 0, 0, 0, 1, 1)
    rep = verify_trace_count_p(E, 5, 2)
    assert rep.passed and any("torsion-multiplier" in r["check"] for r in rep.records)
    ss = Weierstrass(25, 0, 0, 0, 0, 1)  # y^2 = x^3 + 1 stays supersingular
    rep = verify_trace_count_p(ss, 5, 1)
    assert rep.passed and "supersingular" in rep.records[0]["check"]


def test_supersingular_count_is_not_one_mod_p_squared():
    """Over F_{p^2} a supersingular trace can be +-p, so |E| = 1 mod p only."""
    found = 0
    for p in (3, 5, 7):
        q = p * p
        for co in itertools.product(range(q), repeat=2):
            E = Weierstrass(q, 0, 0, 0, *co)
            if E.is_singular():
                continue
            a = q + 1 - count_elliptic(E)
            if a % p == 0:
                assert count_elliptic(E) % p == 1
                if abs(a) == p:
                    assert count_elliptic(E) % q != 1
                    found += 1
    assert found > 0
