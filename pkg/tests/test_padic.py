from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pfchi import geometry as G
from pfchi.errors import NonUnitRoot, PreconditionViolated, Supersingular, ZeroPolynomial
from pfchi.padic import (dual_chi, loial_check, newton_polygon, p_rank, principal_chi, root_valuations,
                         unit_part_residue, unit_root, valuation)
from pfchi.zeta import ZetaData, curve_zeta, fit_curve_lpoly, poly_mul

import oracles


def test_newton_polygon_examples():
    assert newton_polygon([5, -2, 1], 5).slopes == (0, 1)
    assert newton_polygon([5, 0, 1], 5).slopes == (Fraction(1, 2), Fraction(1, 2))
    assert newton_polygon([5, -2, 1], 3).slopes == (0, 0)
    with pytest.raises(ZeroPolynomial):
        newton_polygon([0, 0], 3)


@settings(max_examples=80)
@given(st.sampled_from([2, 3, 5, 7]), st.lists(st.tuples(st.integers(0, 3), st.integers(1, 40)), min_size=1, max_size=5))
def test_slopes_are_root_valuations(ell, spec):
    """Build prod (x - ell^v u) with u a unit; the slopes must be exactly the v's."""
    roots = []
    for v, u in spec:
        while u % ell == 0:
            u += 1
        roots.append(ell**v * u)
    P = (1,)
    for r in roots:
        P = poly_mul(P, (-r, 1))  # ascending coefficients of x - r
    got = newton_polygon(P, ell).slopes
    assert list(got) == sorted(oracles.valuation_frac(Fraction(r), ell) for r in roots)


def test_unit_part_examples():
    gm = ZetaData(5, (1, -5), (1, -1))
    assert unit_part_residue(gm, 3, 2).value == 4
    assert unit_part_residue(ZetaData(7, (1, -7)), 3, 2).value == 7 % 9
    assert unit_part_residue(ZetaData(5, (1, -5)), 5, 3).value == 0
    E = curve_zeta(5, (1, -2, 5))
    assert unit_part_residue(E, 2, 3).value == 4 % 8


@given(st.sampled_from([3, 5, 7, 11, 13]), st.data())
def test_unit_part_away_from_p_is_the_count(q, data):
    a = data.draw(st.integers(-int(2 * q**0.5), int(2 * q**0.5)))
    z = curve_zeta(q, (1, -a, q))
    for ell in (2, 3, 5, 7):
        if q % ell:
            for k in (1, 2):
                assert unit_part_residue(z, ell, k).value == (q + 1 - a) % ell**k


@given(st.sampled_from([3, 5, 7]), st.data())
def test_unit_part_at_p_matches_the_unit_root(p, data):
    q = p * p
    a = data.draw(st.integers(-2 * p, 2 * p).filter(lambda a: a % p))
    z = curve_zeta(q, (1, -a, q))
    beta = unit_root(a, q, p, 2).value
    # roots of A are 1 and q; only 1 is a unit.  B contributes its unit root beta.
    assert unit_part_residue(z, p, 2).value == (1 - beta) % p**2
    assert (q + 1 - a) % p**2 == (1 - beta) % p**2


def test_principal_chi_examples():
    E = curve_zeta(5, (1, -2, 5))
    assert principal_chi(E, [9]).entries == {9: 4}
    assert principal_chi(ZetaData(5, (1, -5), (1, -1)), [4]).entries == {4: 0}
    assert principal_chi(G.gm(5), [4]).entries == {4: 0}
    empty = G.ConstructibleSpec("affine", ("x",), (G.parse_poly("x^2 - 2", ["x"]),), (), 5, 1)
    assert principal_chi(empty, [2, 3, 4]).entries == {2: 0, 3: 0, 4: 0}
    with pytest.raises(ValueError):
        principal_chi(G.gm(5), [5])


def test_dual_chi_examples():
    assert dual_chi(curve_zeta(5, (1, -2, 5))) == Fraction(4, 5)
    assert dual_chi(curve_zeta(7, (1,))) == Fraction(8, 7)
    assert dual_chi(ZetaData(7, (1, -7), (1, -1))) == Fraction(1, 7) - 1
    with pytest.raises(NonUnitRoot):
        dual_chi(ZetaData(7, (1, -6)))


@pytest.mark.parametrize("q", [5, 7, 9, 11, 16, 25])
def test_dual_chi_is_count_over_q_for_curves(q):
    import itertools

    done = 0
    for co in itertools.product(range(q), repeat=2):
        E = G.Weierstrass.from_list([0, 0, 1 if q == 16 else 0, *co], q)
        if E.is_singular():
            continue
        N = G.count_elliptic(E)
        assert dual_chi(fit_curve_lpoly([N], 1, q)) == Fraction(N, q)
        done += 1
        if done == 6:
            break


def test_unit_root_against_exhaustive_search():
    assert unit_root(2, 5, 5, 2).value == 12
    assert unit_root(1, 2, 2, 1).value == 1
    assert unit_root(-6, 25, 5, 2).value == 19
    with pytest.raises(Supersingular):
        unit_root(0, 7, 7, 2)
    for p in (3, 5, 7):
        for s in (1, 2, 3):
            for a in range(-2 * p, 2 * p + 1):
                if a % p:
                    want = oracles.hensel_brute(a, p * p, p, s)
                    assert want == [unit_root(a, p * p, p, s).value]


def test_p_rank_and_slope_separation():
    for p in (3, 5, 7):
        for a in range(-2 * p, 2 * p + 1):
            B = (1, -a, p * p)
            r = p_rank(B, p)
            slopes = root_valuations(B, p).slopes
            assert r == (1 if a % p else 0)
            assert sorted(slopes)[r:] == [s for s in sorted(slopes) if s >= Fraction(1, 2)]


def _base_change(a, q, r):
    s = [2, a]
    for _ in range(r - 1):
        s.append(a * s[-1] - q * s[-2])
    return s[r], q**r


def test_loial_examples():
    a, q = _base_change(2, 5, 3)
    assert loial_check(curve_zeta(q, (1, -a, q)), 5, 1)
    a, q = _base_change(0, 5, 4)
    assert loial_check(curve_zeta(q, (1, -a, q)), 5, 1)
    with pytest.raises(PreconditionViolated):
        loial_check(curve_zeta(25, (1, 6, 25)), 5, 1)


def test_valuation():
    assert valuation(48, 2) == 4
    assert valuation(Fraction(3, 8), 2) == -3
    assert valuation(0, 3) == float("inf")
