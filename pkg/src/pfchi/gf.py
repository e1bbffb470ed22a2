"""Finite field towers F_p <= F_q <= F_{q^N} with the q-power Frobenius.

Elements are plain ints: the base-p digits of an element are its coordinates
in the power basis of the modulus (digit i is the coefficient of x^i).  So
the int order is the lexicographic order on coefficient vectors, read from
the top coefficient down.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np
from sympy import factorint, isprime, primefactors

from .config import enumeration_bound
from .errors import NotPrime, SortNotInTower, TooLarge

# fields up to this order get Python log/exp tables for scalar arithmetic
SCALAR_TABLE_LIMIT = 1 << 16
# fields up to this order may build numpy log/exp/zech tables on demand
ARRAY_TABLE_LIMIT = 1 << 24


# ---------------------------------------------------------------------------
# polynomials over F_p, as ascending coefficient lists without trailing zeros

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_rem(a: list[int], f: list[int], p: int) -> list[int]:
    a = list(a)
    df = len(f) - 1
    inv_lead = pow(f[-1], p - 2, p) if p > 2 else 1
    for i in range(len(a) - 1, df - 1, -1):
        c = a[i] % p
        if c:
            c = c * inv_lead % p
            s = i - df
            for j in range(df + 1):
                a[s + j] = (a[s + j] - c * f[j]) % p
        a[i] = 0
    return _trim([c % p for c in a[:df]] if len(a) > df else [c % p for c in a])


def _fp_mulmod(a: list[int], b: list[int], f: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _fp_rem(out, f, p)


def _fp_powmod(a: list[int], e: int, f: list[int], p: int) -> list[int]:
    result = [1]
    base = _fp_rem(a, f, p)
    while e:
        if e & 1:
            result = _fp_mulmod(result, base, f, p)
        e >>= 1
        if e:
            base = _fp_mulmod(base, base, f, p)
    return result


def _fp_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _fp_rem(a, b, p)
    return a


def _fp_sub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)])


def is_irreducible(f: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic polynomial over F_p (ascending coefficients)."""
    f = _trim([c % p for c in f])
    n = len(f) - 1
    if n <= 0:
        return False
    if n == 1:
        return True
    if f[0] == 0:
        return False
    x = [0, 1]
    # x^(p^j) mod f for the needed j, by repeated p-th powering
    powers = {0: x}
    cur = x
    for j in range(1, n + 1):
        cur = _fp_powmod(cur, p, f, p)
        powers[j] = cur
    if _fp_sub(powers[n], x, p):
        return False
    for r in primefactors(n):
        g = _fp_gcd(f, _fp_sub(powers[n // r], x, p), p)
        if len(g) > 1:
            return False
    return True


def least_irreducible(p: int, d: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree d over F_p.

    Candidates are ordered by (c_{d-1}, ..., c_1, c_0) with the constant term
    varying fastest.
    """
    if d == 1:
        return (0, 1)
    for idx in range(p**d):
        # idx in base p: most significant digit is c_{d-1}, least is c_0
        coeffs = [0] * d
        t = idx
        for i in range(d):
            coeffs[i] = t % p
            t //= p
        f = coeffs + [1]
        if f[0] == 0:
            continue
        if is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")


# ---------------------------------------------------------------------------
# linear algebra mod p

def _nullspace_mod_p(rows: list[list[int]], p: int) -> list[list[int]]:
    """Basis of {v : M v = 0} over F_p, M given by rows."""
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i][c] % p), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], p - 2, p) if p > 2 else 1
        m[r] = [v * inv % p for v in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] % p:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-m[i][fc]) % p
        basis.append(v)
    return basis


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    """The field F_{q^N}, q = p^k, realized as F_p[x]/(modulus)."""

    p: int
    k: int
    N: int
    modulus: tuple[int, ...] = field(repr=False)

    @property
    def q(self) -> int:
        return self.p**self.k

    @property
    def degree(self) -> int:
        return self.k * self.N

    @property
    def order(self) -> int:
        return self.p**self.degree

    def __str__(self):
        return f"GF({self.p}^{self.degree}) [q={self.q}, N={self.N}]"

    # -- encoding ---------------------------------------------------------
    def coeffs(self, x: int) -> list[int]:
        p = self.p
        out = []
        for _ in range(self.degree):
            x, r = divmod(x, p)
            out.append(r)
        return out

    def element(self, coeffs: Sequence[int]) -> int:
        p = self.p
        v = 0
        for c in reversed(list(coeffs)):
            v = v * p + c % p
        return v

    def from_int(self, n: int) -> int:
        """Image of the integer n in the prime field."""
        return n % self.p

    @cached_property
    def _powers_of_p(self) -> list[int]:
        return [self.p**i for i in range(self.degree + 1)]

    @cached_property
    def _reduction(self) -> list[tuple[int, int]]:
        # x^d = sum of (-f_i) x^i, kept sparse
        p, f = self.p, self.modulus
        return [(i, (-c) % p) for i, c in enumerate(f[:-1]) if c % p]

    @cached_property
    def _tables(self):
        if self.order > SCALAR_TABLE_LIMIT or self.degree == 1:
            return None
        exp = self.array_tables()[0].tolist()
        log = [0] * self.order
        for i, v in enumerate(exp[: self.order - 1]):
            log[v] = i
        return exp, log

    # -- arithmetic -------------------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.degree == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        p = self.p
        out = 0
        mult = 1
        while a or b:
            a, ra = divmod(a, p)
            b, rb = divmod(b, p)
            out += ((ra + rb) % p) * mult
            mult *= p
        return out

    def neg(self, a: int) -> int:
        if self.degree == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        p = self.p
        out = 0
        mult = 1
        while a:
            a, r = divmod(a, p)
            out += ((-r) % p) * mult
            mult *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def _mul_poly(self, a: int, b: int) -> int:
        p, d = self.p, self.degree
        if p == 2:
            # carry-less product then reduction
            prod = 0
            while b:
                if b & 1:
                    prod ^= a
                a <<= 1
                b >>= 1
            red = self._reduction
            for i in range(2 * d - 2, d - 1, -1):
                if prod >> i & 1:
                    prod ^= 1 << i
                    for j, _ in red:
                        prod ^= 1 << (i - d + j)
            return prod
        da = self.coeffs(a)
        db = self.coeffs(b)
        # Kronecker substitution: pack digits in wide slots, one big multiply
        w = (d * (p - 1) ** 2).bit_length() + 1
        pa = 0
        for c in reversed(da):
            pa = (pa << w) | c
        pb = 0
        for c in reversed(db):
            pb = (pb << w) | c
        prod = pa * pb
        mask = (1 << w) - 1
        out = [0] * (2 * d - 1)
        for i in range(2 * d - 1):
            out[i] = (prod & mask) % p
            prod >>= w
        red = self._reduction
        for i in range(2 * d - 2, d - 1, -1):
            c = out[i]
            if c:
                s = i - d
                for j, fj in red:
                    out[s + j] = (out[s + j] + c * fj) % p
        v = 0
        for c in reversed(out[:d]):
            v = v * p + c
        return v

    def mul(self, a: int, b: int) -> int:
        if self.degree == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        t = self._tables
        if t is not None:
            exp, log = t
            return exp[(log[a] + log[b]) % (self.order - 1)]
        return self._mul_poly(a, b)

    def square(self, a: int) -> int:
        return self.mul(a, a)

    def pow(self, a: int, e: int) -> int:
        if self.degree == 1:
            return pow(a, e, self.p)
        if e < 0:
            a = self.inv(a)
            e = -e
        if a == 0:
            return 1 if e == 0 else 0
        t = self._tables
        if t is not None:
            exp, log = t
            return exp[log[a] * e % (self.order - 1)]
        result = 1
        base = a
        while e:
            if e & 1:
                result = self._mul_poly(result, base)
            e >>= 1
            if e:
                base = self._mul_poly(base, base)
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self.degree == 1:
            return pow(a, -1, self.p)
        t = self._tables
        if t is not None:
            exp, log = t
            return exp[(-log[a]) % (self.order - 1)]
        # extended Euclid in F_p[x]
        p = self.p
        r0, r1 = list(self.modulus), _trim(self.coeffs(a))
        s0, s1 = [], [1]
        while len(r1) > 1:
            qt, rem = _fp_divmod(r0, r1, p)
            r0, r1 = r1, rem
            s0, s1 = s1, _fp_sub(s0, _fp_mul(qt, s1, p), p)
        c = pow(r1[0], p - 2, p) if p > 2 else 1
        return self.element([v * c % p for v in s1])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    # -- Frobenius --------------------------------------------------------
    @cached_property
    def _pth_power_matrix(self) -> list[list[int]]:
        """Columns: coefficient vectors of (x^j)^p, so x -> x^p is linear."""
        d, p = self.degree, self.p
        xp = self._mul_pow_basis(p)
        cols = [[1] + [0] * (d - 1)]
        cur = self.element(cols[0])
        for _ in range(1, d):
            cur = self._mul_poly(cur, xp) if self.degree > 1 else cur
            cols.append(self.coeffs(cur))
        return cols

    def _mul_pow_basis(self, e: int) -> int:
        # x^e in the field, via square-and-multiply on the poly path
        x = self.element([0, 1]) if self.degree > 1 else 0
        result, base = 1, x
        while e:
            if e & 1:
                result = self._mul_poly(result, base)
            e >>= 1
            if e:
                base = self._mul_poly(base, base)
        return result

    @lru_cache(maxsize=None)
    def _frob_matrix(self, j: int) -> tuple[tuple[int, ...], ...]:
        """Column form of x -> x^(q^j) as an F_p-linear map."""
        d, p = self.degree, self.p
        j %= self.N
        if j == 0:
            return tuple(tuple(int(r == c) for r in range(d)) for c in range(d))
        base = np.array(self._pth_power_matrix, dtype=object).T  # rows = output coords
        mat = np.identity(d, dtype=object)
        e = self.k * j
        b = base
        while e:
            if e & 1:
                mat = (b.dot(mat)) % p
            e >>= 1
            if e:
                b = (b.dot(b)) % p
        return tuple(tuple(int(mat[r, c]) for r in range(d)) for c in range(d))

    def frobenius(self, x: int, j: int = 1) -> int:
        """x^(q^j); j may be negative (sigma^-1 = sigma^(N-1))."""
        j %= self.N
        if j == 0 or self.degree == 1:
            return x
        cols = self._frob_matrix(j)
        p, d = self.p, self.degree
        acc = [0] * d
        for c, coeff in enumerate(self.coeffs(x)):
            if coeff:
                col = cols[c]
                for r in range(d):
                    acc[r] += coeff * col[r]
        return self.element([v % p for v in acc])

    # -- sorts ------------------------------------------------------------
    def _check_sort(self, m: int):
        if m < 1 or self.N % m:
            raise SortNotInTower(f"K{m} is not a sort of a tower of degree {self.N}")

    def sort_member(self, x: int, m: int) -> bool:
        self._check_sort(m)
        return self.frobenius(x, m) == x

    def sort_size(self, m: int) -> int:
        self._check_sort(m)
        return self.q**m

    @lru_cache(maxsize=None)
    def sort_basis(self, m: int) -> tuple[int, ...]:
        """F_p-basis of K_m as elements (kernel of sigma^m - id)."""
        self._check_sort(m)
        d, p = self.degree, self.p
        if m == self.N:
            return tuple(p**i for i in range(d))
        cols = self._frob_matrix(m)
        rows = [[(cols[c][r] - (1 if r == c else 0)) % p for c in range(d)] for r in range(d)]
        basis = _nullspace_mod_p(rows, p)
        return tuple(self.element(v) for v in basis)

    def enumerate_sort(self, m: int, bound: int | None = None) -> list[int]:
        """All q^m elements of K_m in increasing (lexicographic) order."""
        self._check_sort(m)
        size = self.q**m
        limit = enumeration_bound() if bound is None else bound
        if size > limit:
            raise TooLarge(f"sort K{m} has {size} elements, bound is {limit}")
        if m == self.N:
            return list(range(size))
        basis = self.sort_basis(m)
        elems = [0]
        for b in basis:
            multiples = [0]
            acc = 0
            for _ in range(self.p - 1):
                acc = self.add(acc, b)
                multiples.append(acc)
            elems = [self.add(e, c) for c in multiples for e in elems]
        elems.sort()
        return elems

    # -- squares and roots ------------------------------------------------
    def is_square(self, a: int) -> bool:
        if a == 0 or self.p == 2:
            return True
        t = self._tables
        if t is not None:
            return t[1][a] % 2 == 0
        if self.degree == 1:
            return pow(a, (self.p - 1) // 2, self.p) == 1
        return self.pow(a, (self.order - 1) // 2) == 1

    def sqrt(self, a: int) -> int | None:
        """A square root of a, or None when a is not a square."""
        if a == 0:
            return 0
        Q = self.order
        if self.p == 2:
            return self.pow(a, Q // 2)
        if not self.is_square(a):
            return None
        t = self._tables
        if t is not None:
            exp, log = t
            return exp[log[a] // 2]
        # Tonelli-Shanks
        s, odd = 0, Q - 1
        while odd % 2 == 0:
            s += 1
            odd //= 2
        z = self.nonsquare
        c = self.pow(z, odd)
        x = self.pow(a, (odd + 1) // 2)
        t_ = self.pow(a, odd)
        m = s
        while t_ != 1:
            i, tt = 0, t_
            while tt != 1:
                tt = self.mul(tt, tt)
                i += 1
            b = c
            for _ in range(m - i - 1):
                b = self.mul(b, b)
            x = self.mul(x, b)
            c = self.mul(b, b)
            t_ = self.mul(t_, c)
            m = i
        return x

    @cached_property
    def nonsquare(self) -> int:
        for a in range(2, self.order):
            if not self.is_square(a):
                return a
        raise ValueError("every element is a square")

    def trace_to_prime(self, a: int) -> int:
        """Absolute trace Tr_{F_Q/F_p}(a), as an element of F_p."""
        acc, cur = 0, a
        for _ in range(self.degree):
            acc = self.add(acc, cur)
            cur = self.pow(cur, self.p)
        return acc

    def random_element(self, rng: random.Random) -> int:
        return rng.randrange(self.order)

    # -- primitive element and numpy tables --------------------------------
    @cached_property
    def primitive_element(self) -> int:
        Q = self.order
        primes = list(factorint(Q - 1))
        for g in range(1, Q):
            if g == 0:
                continue
            if all(self._pow_slow(g, (Q - 1) // r) != 1 for r in primes):
                return g
        raise AssertionError("no primitive element")

    def _pow_slow(self, a: int, e: int) -> int:
        if self.degree == 1:
            return pow(a, e, self.p)
        result, base = 1, a
        while e:
            if e & 1:
                result = self._mul_poly(result, base)
            e >>= 1
            if e:
                base = self._mul_poly(base, base)
        return result

    @lru_cache(maxsize=None)
    def array_tables(self):
        """(exp, log, zech) numpy tables in logarithmic form.

        Logs live in [0, Q-2]; the sentinel ZERO = Q-1 stands for the zero
        element.  exp[ZERO] = 0.  zech[i] = log(1 + g^i).
        """
        Q = self.order
        if Q > ARRAY_TABLE_LIMIT:
            raise TooLarge(f"field of order {Q} too large for lookup tables")
        p, d = self.p, self.degree
        g = self.primitive_element
        exp = np.zeros(Q, dtype=np.int64)
        if d == 1:
            # block doubling on scalars
            exp[0] = 1
            filled = 1
            gl = g
            while filled < Q - 1:
                take = min(filled, Q - 1 - filled)
                exp[filled:filled + take] = exp[:take] * gl % p
                filled += take
                gl = gl * gl % p
        else:
            # multiplication by g as a d x d matrix on digit vectors
            cols = [self.coeffs(self._mul_poly(g, p**j)) for j in range(d)]
            A = np.array(cols, dtype=np.int64).T
            digits = np.zeros((Q - 1, d), dtype=np.int64)
            digits[0, 0] = 1
            filled = 1
            Al = A
            while filled < Q - 1:
                take = min(filled, Q - 1 - filled)
                digits[filled:filled + take] = digits[:take] @ Al.T % p
                filled += take
                Al = Al @ Al % p
            weights = np.array([p**i for i in range(d)], dtype=np.int64)
            exp[: Q - 1] = digits @ weights
        exp[Q - 1] = 0
        log = np.empty(Q, dtype=np.int64)
        log[exp[: Q - 1]] = np.arange(Q - 1, dtype=np.int64)
        log[0] = Q - 1
        # 1 + e: bump the constant digit
        e = exp[: Q - 1]
        c = e % p
        one_plus = e - c + (c + 1) % p
        zech = np.empty(Q, dtype=np.int64)
        zech[: Q - 1] = log[one_plus]
        zech[Q - 1] = 0  # 1 + 0 = 1 = g^0
        return exp, log, zech


def _fp_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _fp_divmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    a = list(a)
    db = len(b) - 1
    inv = pow(b[-1], p - 2, p) if p > 2 else 1
    if len(a) - 1 < db:
        return [], _trim(a)
    qt = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] % p * inv % p
        qt[i - db] = c
        if c:
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - c * b[j]) % p
    return _trim(qt), _trim([v % p for v in a[:db]])


def prime_power(q: int) -> tuple[int, int]:
    """Split q = p^k, raising NotPrime when q is not a prime power."""
    if q < 2:
        raise NotPrime(f"{q} is not a prime power")
    f = factorint(q)
    if len(f) != 1:
        raise NotPrime(f"{q} is not a prime power")
    (p, k), = f.items()
    return p, k


@lru_cache(maxsize=None)
def _make_tower(p: int, k: int, N: int) -> FieldSpec:
    return FieldSpec(p, k, N, least_irreducible(p, k * N))


def make_tower(p: int, k: int = 1, N: int = 1, *, check_size: bool = True) -> FieldSpec:
    """The tower F_p <= F_{p^k} <= F_{p^(kN)}.

    With check_size, towers larger than the enumeration bound are refused.
    Code that never enumerates the top field passes check_size=False.
    """
    if not isprime(p):
        raise NotPrime(f"{p} is not prime")
    if k < 1 or N < 1:
        raise ValueError("k and N must be positive")
    if check_size and p ** (k * N) > enumeration_bound():
        raise TooLarge(f"field of order {p}^{k * N} exceeds enumeration bound")
    return _make_tower(p, k, N)


def tower_for(q: int, N: int, *, check_size: bool = False) -> FieldSpec:
    p, k = prime_power(q)
    return make_tower(p, k, N, check_size=check_size)


def frobenius(x: int, spec: FieldSpec) -> int:
    return spec.frobenius(x, 1)


def sort_member(x: int, m: int, spec: FieldSpec) -> bool:
    return spec.sort_member(x, m)


def enumerate_sort(m: int, spec: FieldSpec) -> list[int]:
    return spec.enumerate_sort(m)


# ---------------------------------------------------------------------------
# univariate polynomials with coefficients in a FieldSpec (ascending lists)

class FieldPoly:
    """Helpers for polynomials over a fixed FieldSpec."""

    def __init__(self, F: FieldSpec):
        self.F = F

    def trim(self, a):
        a = list(a)
        while a and a[-1] == 0:
            a.pop()
        return a

    def add(self, a, b):
        F = self.F
        n = max(len(a), len(b))
        return self.trim([F.add(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)])

    def sub(self, a, b):
        F = self.F
        n = max(len(a), len(b))
        return self.trim([F.sub(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)])

    def mul(self, a, b):
        F = self.F
        if not a or not b:
            return []
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = F.add(out[i + j], F.mul(x, y))
        return self.trim(out)

    def divmod(self, a, b):
        F = self.F
        b = self.trim(b)
        if not b:
            raise ZeroDivisionError("polynomial division by zero")
        a = list(a)
        db = len(b) - 1
        inv = F.inv(b[-1])
        if len(a) - 1 < db:
            return [], self.trim(a)
        qt = [0] * (len(a) - db)
        for i in range(len(a) - 1, db - 1, -1):
            c = F.mul(a[i], inv)
            qt[i - db] = c
            if c:
                for j in range(db + 1):
                    a[i - db + j] = F.sub(a[i - db + j], F.mul(c, b[j]))
        return self.trim(qt), self.trim(a[:db])

    def rem(self, a, b):
        return self.divmod(a, b)[1]

    def monic(self, a):
        F = self.F
        inv = F.inv(a[-1])
        return [F.mul(c, inv) for c in a]

    def gcd(self, a, b):
        a, b = self.trim(a), self.trim(b)
        while b:
            a, b = b, self.rem(a, b)
        return self.monic(a) if a else a

    def powmod(self, a, e: int, f):
        result = [1]
        base = self.rem(a, f)
        while e:
            if e & 1:
                result = self.rem(self.mul(result, base), f)
            e >>= 1
            if e:
                base = self.rem(self.mul(base, base), f)
        return result

    def frobenius_power_x(self, f, m: int):
        """x^(q^m) mod f, where q is the tower's q."""
        F = self.F
        cur = [0, 1]
        for _ in range(m * F.k):
            cur = self.powmod(cur, F.p, f)
        return cur

    def eval(self, a, x):
        F = self.F
        acc = 0
        for c in reversed(a):
            acc = F.add(F.mul(acc, x), c)
        return acc

    def roots_in_sort(self, f, m: int, rng: random.Random | None = None) -> list[int]:
        """Distinct roots of f lying in K_m, sorted.  f must be nonzero."""
        f = self.trim(f)
        if not f:
            raise ValueError("zero polynomial has every element as a root")
        if len(f) == 1:
            return []
        f = self.monic(f)
        xq = self.frobenius_power_x(f, m)
        g = self.gcd(f, self.sub(xq, [0, 1]))
        if len(g) <= 1:
            return []
        rng = rng or random.Random(0x5EED)
        return sorted(self._split(g, rng))

    def _split(self, g, rng):
        F = self.F
        if len(g) == 2:
            return [F.neg(g[0])]
        Q = F.order
        while True:
            delta = rng.randrange(Q)
            if F.p == 2:
                # additive trace map t -> sum of t^(2^i), i < degree
                if delta == 0:
                    continue
                acc, cur = [], self.rem([0, delta], g)
                for _ in range(F.degree):
                    acc = self.add(acc, cur)
                    cur = self.rem(self.mul(cur, cur), g)
                h = self.gcd(g, acc)
            else:
                h = self.powmod([delta, 1], (Q - 1) // 2, g)
                h = self.gcd(g, self.sub(h, [1]))
            if 1 < len(h) < len(g):
                other = self.divmod(g, h)[0]
                return self._split(h, rng) + self._split(self.monic(other), rng)


def embedding(small: FieldSpec, big: FieldSpec):
    """Field map F_{p^a} -> F_{p^b} sending x to the least root of small's modulus.

    Different root choices differ by a Frobenius twist, which never changes
    point counts; within one computation the choice is fixed.
    """
    if small.p != big.p or big.degree % small.degree:
        raise ValueError(f"{small} does not embed in {big}")
    if small.degree == 1:
        return lambda a: a
    P = FieldPoly(big)
    roots = P.roots_in_sort(list(small.modulus), big.N)
    if not roots:
        raise AssertionError("modulus has no root in the larger field")
    r = roots[0]
    powers = [1]
    for _ in range(small.degree - 1):
        powers.append(big.mul(powers[-1], r))

    def embed(a: int) -> int:
        acc = 0
        for c, pw in zip(small.coeffs(a), powers):
            if c:
                acc = big.add(acc, big.mul(c, pw))
        return acc

    return embed
