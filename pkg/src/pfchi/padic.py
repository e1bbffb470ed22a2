"""l-adic analysis of characteristic roots.

Newton polygons, the unit-part residues behind the principal Euler
characteristic, the dual characteristic sum(1/alpha) - sum(1/beta), and
divisibility checks at the characteristic.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import inf, lcm
from typing import Iterable, Sequence, Union

from sympy import factorint, isprime

from .errors import (NonUnitRoot, PreconditionViolated, StabilizationFailure, Supersingular,
                     ValidationFailure, ZeroPolynomial)
from .euler import EulerValue, crt, prime_power_parts
from .geometry import ConstructibleSpec, count_points
from .gf import prime_power
from .zeta import ZetaData, power_sums


def valuation(n: int | Fraction, ell: int) -> float | int:
    """v_ell(n); infinity for 0."""
    if n == 0:
        return inf
    if isinstance(n, Fraction):
        return valuation(n.numerator, ell) - valuation(n.denominator, ell)
    n = abs(int(n))
    v = 0
    while n % ell == 0:
        n //= ell
        v += 1
    return v


@dataclass(frozen=True)
class NewtonPolygonResult:
    ell: int
    slopes: tuple  # root valuations, ascending; inf for zero roots
    vertices: tuple[tuple[int, int], ...] = ()

    def count(self, value) -> int:
        return sum(1 for s in self.slopes if s == value)

    @property
    def all_zero(self) -> bool:
        return all(s == 0 for s in self.slopes)


def newton_polygon(P: Sequence[int], ell: int) -> NewtonPolygonResult:
    """Valuations of the roots of sum P[i] x^i from the lower convex hull of (i, v(P[i]))."""
    if not isprime(ell):
        raise ValueError(f"{ell} is not prime")
    coeffs = [int(c) for c in P]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs:
        raise ZeroPolynomial("Newton polygon of the zero polynomial")
    pts = [(i, valuation(c, ell)) for i, c in enumerate(coeffs) if c != 0]
    hull: list[tuple[int, int]] = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] if it lies on or above the segment hull[-2] -> pt
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    slopes: list = [inf] * pts[0][0]  # x^j factor: zero roots
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        s = Fraction(y2 - y1, x2 - x1)
        slopes += [-s] * (x2 - x1)
    slopes.sort()
    return NewtonPolygonResult(ell, tuple(slopes), tuple(hull))


def reversed_poly(P: Sequence[int]) -> list[int]:
    """T^d P(1/T): the polynomial whose roots are the reciprocal roots of P."""
    c = list(P)
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return list(reversed(c))


def root_valuations(P: Sequence[int], ell: int) -> NewtonPolygonResult:
    """Valuations of the reciprocal roots of P (P(0) = 1), e.g. the alpha_i of A."""
    return newton_polygon(reversed_poly(P), ell)


@dataclass(frozen=True)
class Residue:
    modulus: int
    value: int

    def __post_init__(self):
        object.__setattr__(self, "value", int(self.value) % int(self.modulus))

    def __int__(self):
        return self.value


def _power_sum_mod(P: Sequence[int], n: int, M: int) -> int:
    """Power sum s_n of the reciprocal roots of P, reduced mod M, for huge n."""
    c = [int(v) for v in P]
    d = len(c) - 1
    if d == 0:
        return 0
    if n <= d:
        return power_sums(c, n)[-1] % M
    init = [v % M for v in power_sums(c, d)]  # s_1..s_d
    # state (s_j, s_{j-1}, ..., s_{j-d+1}); s_{j+1} = -sum c_i s_{j+1-i}
    mat = [[(-c[i + 1]) % M for i in range(d)]] + [[int(col == r) for col in range(d)] for r in range(d - 1)]

    def mm(X, Y):
        return [[sum(X[i][t] * Y[t][j] for t in range(d)) % M for j in range(d)] for i in range(d)]

    e = n - d
    R = [[int(i == j) for j in range(d)] for i in range(d)]
    B = mat
    while e:
        if e & 1:
            R = mm(R, B)
        e >>= 1
        if e:
            B = mm(B, B)
    state = list(reversed(init))  # s_d, ..., s_1
    return sum(R[0][j] * state[j] for j in range(d)) % M


def stabilization_exponent(ell: int, k: int, D: int) -> int:
    """ell^(kD) * lcm(ell^d - 1 : 1 <= d <= D)."""
    return ell ** (k * D) * lcm(1, *[ell**d - 1 for d in range(1, D + 1)])


def unit_part_values(z: ZetaData, ell: int, k: int, ts: Iterable[int] = (1, 2, 3)) -> list[int]:
    M = ell**k
    E = stabilization_exponent(ell, k, z.degree)
    return [(_power_sum_mod(z.A, 1 + t * E, M) - _power_sum_mod(z.B, 1 + t * E, M)) % M for t in ts]


def unit_part_residue(z: ZetaData, ell: int, k: int) -> Residue:
    """sum of unit alpha_i minus sum of unit beta_j, mod ell^k."""
    if not isprime(ell) or k < 1:
        raise ValueError("need a prime ell and k >= 1")
    vals = unit_part_values(z, ell, k)
    if len(set(vals)) != 1:
        raise StabilizationFailure(f"values at t = 1, 2, 3 disagree: {vals}")
    return Residue(ell**k, vals[0])


def principal_chi(source: Union[ZetaData, ConstructibleSpec], moduli: Iterable[int],
                  zeta: ZetaData | None = None) -> EulerValue:
    """Principal Euler characteristic at each modulus.

    Away from the characteristic this is |V(F_q)| (checked against the
    unit-part residue when zeta data is at hand); at the characteristic it
    is the unit-part residue.  Composite moduli are assembled by CRT.
    """
    if isinstance(source, ZetaData):
        zeta = source
        q = zeta.q
        count = sum(zeta.counts(1))
    else:
        q = source.q
        count = count_points(source, 1)
        if zeta is not None and sum(zeta.counts(1)) != count:
            raise ValidationFailure("zeta data does not match the point count")
    p, _ = prime_power(q)
    entries = {}
    for n in moduli:
        parts = {}
        for m in (prime_power_parts(n) if n > 1 else []):
            ell, k = next(iter(factorint(m).items()))
            if ell != p:
                r = count % m
                if zeta is not None:
                    unit = unit_part_residue(zeta, ell, k).value
                    if unit != r:
                        raise ValidationFailure(f"unit-part residue {unit} != count mod {m} = {r}")
            else:
                if zeta is None:
                    raise ValueError(f"modulus {m} is a power of the characteristic; zeta data needed")
                r = unit_part_residue(zeta, ell, k).value
            parts[m] = r
        entries[n] = crt(parts)[0] if parts else 0
    return EulerValue(entries)


def _check_units(z: ZetaData):
    p, _ = prime_power(z.q)
    for name, P in (("A", z.A), ("B", z.B)):
        lead = P[-1]
        for ell in factorint(abs(lead)):
            if ell == p:
                continue
            if not root_valuations(P, ell).all_zero:
                raise NonUnitRoot(f"{name} has a root of positive {ell}-adic valuation")


def inverse_root_sum(P: Sequence[int]) -> Fraction:
    """sum of 1/r over the reciprocal roots r of P: the sum of the roots of P."""
    d = len(P) - 1
    if d == 0:
        return Fraction(0)
    return Fraction(-P[d - 1], P[d])


def dual_chi(z: ZetaData) -> Fraction:
    """sum(1/alpha_i) - sum(1/beta_j), exact."""
    _check_units(z)
    return inverse_root_sum(z.A) - inverse_root_sum(z.B)


def char_poly(B: Sequence[int]) -> list[int]:
    """Monic polynomial with the reciprocal roots of B as roots (ascending)."""
    return reversed_poly(B)


def p_rank(B: Sequence[int], p: int) -> int:
    return newton_polygon(char_poly(B), p).count(0)


def loial_check(z: ZetaData, p: int, i: int) -> bool:
    """v_p(Q(p^i)) >= i(2g - r) for the characteristic polynomial Q of a genus-g curve."""
    pz, _ = prime_power(z.q)
    if pz != p:
        raise PreconditionViolated(f"q = {z.q} is not a power of {p}")
    g2 = len(z.B) - 1
    if g2 % 2:
        raise PreconditionViolated("B must have even degree 2g")
    if z.q <= p ** (g2 * i):
        raise PreconditionViolated(f"need q > p^(2g i) = {p ** (g2 * i)}, got q = {z.q}")
    Q = char_poly(z.B)
    r = newton_polygon(Q, p).count(0)
    value = sum(c * p ** (i * j) for j, c in enumerate(Q))
    return valuation(value, p) >= i * (g2 - r)


def unit_root(a: int, q: int, p: int, s: int) -> Residue:
    """The unit root of T^2 - aT + q modulo p^s, Hensel-lifted from a mod p."""
    if a % p == 0:
        raise Supersingular(f"p = {p} divides the trace {a}")
    M = p**s
    beta = a % p
    for _ in range(s):
        f = (beta * beta - a * beta + q) % M
        df = (2 * beta - a) % M
        beta = (beta - f * pow(df, -1, M)) % M
    assert (beta * beta - a * beta + q) % M == 0
    return Residue(M, beta)
