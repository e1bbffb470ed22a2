"""Torsion of elliptic curves over extension fields and the Frobenius action on it.

E[l^k] usually lives over a large extension F_{q^m} (m up to 24 for the
small fields we test), far beyond enumeration.  The search below uses
|E(F_{q^m})| from the L-polynomial to pick candidate degrees m, then builds
generators of the l-Sylow subgroup from random points and certifies them:
the subgroup they generate must have the full Sylow order, and the
l^{2k} combinations of the returned basis must be distinct points.
"""
from __future__ import annotations

import random
import dataclasses
from dataclasses import dataclass
from typing import Optional

from sympy import isprime

from .errors import NotRepresentable, PreconditionViolated, TooLarge
from .euler import Report
from .geometry import Weierstrass, count_elliptic
from .gf import FieldPoly, FieldSpec, make_tower, prime_power
from .padic import unit_root, valuation

Point = Optional[tuple[int, int]]  # None is the point at infinity

MAX_FIELD_BITS = 256


class Curve:
    """Group law on a Weierstrass curve over a tower field."""

    def __init__(self, F: FieldSpec, coeffs: tuple[int, int, int, int, int]):
        self.F = F
        self.a1, self.a2, self.a3, self.a4, self.a6 = coeffs
        self.P = FieldPoly(F)

    def on_curve(self, P: Point) -> bool:
        if P is None:
            return True
        F = self.F
        x, y = P
        lhs = F.mul(y, F.add(y, F.add(F.mul(self.a1, x), self.a3)))
        rhs = F.add(F.mul(F.add(F.mul(F.add(x, self.a2), x), self.a4), x), self.a6)
        return lhs == rhs

    def neg(self, P: Point) -> Point:
        if P is None:
            return None
        F = self.F
        x, y = P
        return (x, F.sub(F.neg(y), F.add(F.mul(self.a1, x), self.a3)))

    def add(self, P: Point, Q: Point) -> Point:
        if P is None:
            return Q
        if Q is None:
            return P
        F = self.F
        x1, y1 = P
        x2, y2 = Q
        a1, a2, a3, a4 = self.a1, self.a2, self.a3, self.a4
        if x1 == x2:
            if F.add(F.add(y1, y2), F.add(F.mul(a1, x2), a3)) == 0:
                return None
            # tangent line
            num = F.sub(F.add(F.add(F.mul(F.from_int(3), F.mul(x1, x1)), F.mul(F.from_int(2), F.mul(a2, x1))), a4),
                        F.mul(a1, y1))
            den = F.add(F.add(F.mul(F.from_int(2), y1), F.mul(a1, x1)), a3)
            lam = F.div(num, den)
        else:
            lam = F.div(F.sub(y2, y1), F.sub(x2, x1))
        nu = F.sub(y1, F.mul(lam, x1))
        x3 = F.sub(F.sub(F.sub(F.add(F.mul(lam, lam), F.mul(a1, lam)), a2), x1), x2)
        y3 = F.sub(F.neg(F.mul(F.add(lam, a1), x3)), F.add(nu, a3))
        return (x3, y3)

    def mul(self, n: int, P: Point) -> Point:
        if n < 0:
            return self.mul(-n, self.neg(P))
        R = None
        while n:
            if n & 1:
                R = self.add(R, P)
            n >>= 1
            if n:
                P = self.add(P, P)
        return R

    def frobenius(self, P: Point, j: int = 1) -> Point:
        if P is None:
            return None
        return (self.F.frobenius(P[0], j), self.F.frobenius(P[1], j))

    def random_point(self, rng: random.Random) -> Point:
        F = self.F
        while True:
            x = F.random_element(rng)
            h = F.add(F.mul(self.a1, x), self.a3)
            f = F.add(F.mul(F.add(F.mul(F.add(x, self.a2), x), self.a4), x), self.a6)
            if F.p != 2:
                disc = F.add(F.mul(h, h), F.mul(F.from_int(4), f))
                r = F.sqrt(disc)
                if r is None:
                    continue
                if rng.random() < 0.5:
                    r = F.neg(r)
                y = F.div(F.sub(r, h), F.from_int(2))
                return (x, y)
            if h == 0:
                return (x, F.sqrt(f))
            roots = self.P.roots_in_sort([F.neg(f), h, 1], F.N, rng)
            if roots:
                return (x, rng.choice(roots))

    def order_l(self, P: Point, ell: int, cap: int) -> int:
        """e with ord(P) = ell^e, assuming ell^cap kills P."""
        e = 0
        while P is not None:
            if e >= cap:
                raise AssertionError("point order exceeds the l-Sylow bound")
            P = self.mul(ell, P)
            e += 1
        return e

    def dlog_l(self, U: Point, G: Point, ell: int, b: int) -> Optional[int]:
        """x with U = xG where ord(G) = ell^b, or None if U is not in <G>."""
        if b == 0:
            return 0 if U is None else None
        g0 = self.mul(ell ** (b - 1), G)  # order ell
        small = [None]
        for _ in range(ell - 1):
            small.append(self.add(small[-1], g0))
        x = 0
        for i in range(b):
            W = self.mul(ell ** (b - 1 - i), self.add(U, self.neg(self.mul(x, G))))
            try:
                d = small.index(W)
            except ValueError:
                return None
            x += d * ell**i
        return x if self.mul(x, G) == U else None


def frobenius_traces(curve: Weierstrass, upto: int) -> list[int]:
    """[N_1, ..., N_upto] for the curve from its count over F_q."""
    q = curve.q
    n1 = count_elliptic(curve)
    a = q + 1 - n1
    s = [2, a]
    while len(s) <= upto:
        s.append(a * s[-1] - q * s[-2])
    return [q**m + 1 - s[m] for m in range(1, upto + 1)]


@dataclass
class TorsionBasis:
    curve: Weierstrass
    ell: int
    k: int
    ext_degree: int
    rank: int
    P: Point = None
    Q: Point = None
    field: Optional[FieldSpec] = None
    coeffs: tuple = ()
    _table: dict = dataclasses.field(default_factory=dict, repr=False)

    @property
    def group(self) -> Curve:
        return Curve(self.field, self.coeffs)

    def points(self) -> dict:
        """{point: (i, j)} for i P + j Q, i, j mod l^k (j only when rank 2)."""
        if self._table:
            return self._table
        if self.rank == 0:
            self._table = {None: ()}
            return self._table
        E = self.group
        n = self.ell**self.k
        table = {}
        row = None
        for i in range(n):
            if self.rank == 1:
                table[row] = (i,)
            else:
                col = row
                for j in range(n):
                    table[col] = (i, j)
                    col = E.add(col, self.Q)
            row = E.add(row, self.P)
        self._table = table
        return table

    def independent(self) -> bool:
        n = self.ell**self.k
        E = self.group
        if self.rank == 0:
            return True
        killed = E.mul(n, self.P) is None and (self.rank == 1 or E.mul(n, self.Q) is None)
        return killed and len(self.points()) == n**self.rank


def _sylow_generators(E: Curve, ell: int, order: int, v: int, rng: random.Random, max_samples: int = 400):
    """Generators (P1, b, T, a) of the ell-Sylow group G of a group of the given order.

    |G| = ell^v and G = <P1> + <T> with ord P1 = ell^b >= ord T = ell^a and
    a + b = v, which certifies that they generate G.
    """
    h = order // ell**v
    P1, b = None, 0
    T2, a = None, 0
    pool = []
    for _ in range(max_samples):
        R = E.mul(h, E.random_point(rng))
        e = E.order_l(R, ell, v)
        if e > b:
            P1, b = R, e
            # earlier reductions were relative to the old P1
            pool.append(R)
            T2, a = None, 0
            for S in pool:
                T2, a = _reduce_against(E, S, P1, b, ell, T2, a)
        else:
            pool.append(R)
            T2, a = _reduce_against(E, R, P1, b, ell, T2, a)
        if a + b == v:
            return P1, b, T2, a
        if len(pool) > 64:
            pool = pool[-64:]
    raise TooLarge(f"could not certify the {ell}-Sylow structure after {max_samples} samples")


def _reduce_against(E: Curve, S: Point, P1: Point, b: int, ell: int, best: Point, a: int):
    """Project S off <P1>; keep whichever of best and the projection has larger order."""
    U = S
    j = 0
    while True:
        x = E.dlog_l(U, P1, ell, b)
        if x is not None:
            break
        U = E.mul(ell, U)
        j += 1
    if j <= a:
        return best, a
    # ell^j S = x P1 with ell^j | x
    T = E.add(S, E.neg(E.mul(x // ell**j, P1)))
    return T, j


def torsion_basis(curve: Weierstrass, ell: int, k: int, q: int | None = None, *,
                  max_bits: int = MAX_FIELD_BITS, seed: int = 0) -> TorsionBasis:
    """Basis of E[ell^k] over the first extension F_{q^m} containing it."""
    if q is not None and q != curve.q:
        raise ValueError(f"curve is over F_{curve.q}, not F_{q}")
    q = curve.q
    p, k0 = prime_power(q)
    if not isprime(ell) or k < 1:
        raise ValueError("need a prime ell and k >= 1")
    n = ell**k
    rng = random.Random(seed * 1000003 + ell * 101 + k)
    counts_cache: list[int] = []
    a = q + 1 - count_elliptic(curve)
    if ell == p:
        if a % p == 0:
            return TorsionBasis(curve, ell, k, 1, 0)
        need = n
    else:
        need = n * n
    m = 0
    while True:
        m += 1
        if q**m > 2**max_bits:
            raise TooLarge(f"E[{ell}^{k}] not found in extensions of size <= 2^{max_bits}")
        if len(counts_cache) < m:
            counts_cache = frobenius_traces(curve, 2 * m + 8)
        Nm = counts_cache[m - 1]
        if Nm % need:
            continue
        if ell != p and (q**m - 1) % n:
            continue  # Weil pairing: mu_{l^k} must lie in F_{q^m}
        F = make_tower(p, k0, m, check_size=False)
        coeffs = curve.over(F)
        E = Curve(F, coeffs)
        v = valuation(Nm, ell)
        P1, b, T2, a2 = _sylow_generators(E, ell, Nm, v, rng)
        if ell == p:
            # ordinary: the p-Sylow group is cyclic
            if b < k:
                continue
            P = E.mul(ell ** (b - k), P1)
            basis = TorsionBasis(curve, ell, k, m, 1, P, None, F, coeffs)
        else:
            if a2 < k:
                continue
            P = E.mul(ell ** (b - k), P1)
            Q = E.mul(ell ** (a2 - k), T2)
            basis = TorsionBasis(curve, ell, k, m, 2, P, Q, F, coeffs)
        if not basis.independent():
            raise AssertionError("torsion basis failed the independence check")
        return basis


def frob_matrix(basis: TorsionBasis) -> list[list[int]]:
    """Matrix of the q-power Frobenius on the basis, columns = images of P and Q."""
    if basis.rank == 0:
        return []
    E = basis.group
    table = basis.points()
    images = [E.frobenius(basis.P)]
    if basis.rank == 2:
        images.append(E.frobenius(basis.Q))
    cols = []
    for img in images:
        if img not in table:
            raise NotRepresentable("Frobenius image is not a combination of the basis")
        cols.append(table[img])
    if basis.rank == 1:
        return [[cols[0][0]]]
    return [[cols[0][0], cols[1][0]], [cols[0][1], cols[1][1]]]


def trace_det(M: list[list[int]], modulus: int) -> tuple[int, int]:
    if not M:
        return 0, 1 % modulus
    if len(M) == 1:
        return M[0][0] % modulus, M[0][0] % modulus
    return (M[0][0] + M[1][1]) % modulus, (M[0][0] * M[1][1] - M[0][1] * M[1][0]) % modulus


def verify_trace_count(curve: Weierstrass, ell: int, k: int, q: int | None = None,
                       basis: TorsionBasis | None = None, *, seed: int = 0) -> Report:
    """|E(F_q)| = 1 - Tr(Frobenius | E[ell^k]) + q mod ell^k, plus det and trace checks."""
    q = curve.q if q is None else q
    if q % ell == 0:
        raise PreconditionViolated(f"ell = {ell} divides q = {q}")
    n = ell**k
    basis = basis or torsion_basis(curve, ell, k, seed=seed)
    M = frob_matrix(basis)
    tr, det = trace_det(M, n)
    count = count_elliptic(curve)
    a = q + 1 - count
    rep = Report()
    tag = f"{curve} l^k={n} m={basis.ext_degree}"
    rep.add(n, f"trace-count[{tag}]", count % n, (1 - tr + q) % n)
    rep.add(n, f"trace-equals-a[{tag}]", tr, a % n)
    rep.add(n, f"det-equals-q[{tag}]", det, q % n)
    return rep


def verify_trace_count_p(curve: Weierstrass, p: int, s: int, q: int | None = None, *,
                         use_torsion: bool = True, max_bits: int = 160) -> Report:
    """|E(F_q)| = 1 - (unit root) mod p^s for ordinary curves; = 1 mod p when supersingular.

    The torsion route (multiplier of Frobenius on a p^s-torsion generator) is
    added when that generator lives in a field of at most max_bits bits.
    """
    q = curve.q if q is None else q
    pq, kq = prime_power(q)
    if pq != p:
        raise PreconditionViolated(f"q = {q} is not a power of p = {p}")
    if kq < s:
        raise PreconditionViolated(f"need q = p^k with k >= s; got k = {kq}, s = {s}")
    n = p**s
    count = count_elliptic(curve)
    a = q + 1 - count
    rep = Report()
    tag = f"{curve} p^s={n}"
    if a % p == 0:
        # v_p of the roots is only k/2, so the count is 1 mod p but not mod p^s in general
        rep.add(p, f"supersingular-count[{tag}; rank 0, trace read as 0]", count % p, 1)
        return rep
    beta = unit_root(a, q, p, s).value
    rep.add(n, f"unit-root-count[{tag}]", count % n, (1 - beta) % n)
    if use_torsion:
        try:
            basis = torsion_basis(curve, p, s, max_bits=max_bits)
        except TooLarge:
            return rep
        u = frob_matrix(basis)[0][0]
        rep.add(n, f"torsion-multiplier[{tag} m={basis.ext_degree}]", count % n, (1 - u) % n)
        rep.add(n, f"multiplier-equals-unit-root[{tag}]", u, beta)
    return rep
