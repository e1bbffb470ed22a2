"""Brute-force reference implementations used as test oracles.

Nothing here imports pfchi: fields are rebuilt from scratch (trial-division
irreducibility, a primitive element found by order counting, log tables
and a full addition table) and counts enumerate every tuple.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

import numpy as np


def _digits(n, p, width):
    out = []
    for _ in range(width):
        n, r = divmod(n, p)
        out.append(r)
    return out


def _polymulmod(a, b, mod, p):
    """a, b: coefficient lists (low first) of length n; mod: monic, length n+1."""
    n = len(mod) - 1
    prod = [0] * (2 * n - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for d in range(len(prod) - 1, n - 1, -1):
        c = prod[d]
        if c:
            for i in range(n + 1):
                prod[d - n + i] = (prod[d - n + i] - c * mod[i]) % p
    return prod[:n]


def _divides(f, g, p):
    """Does monic f divide g over F_p (coefficient lists, low first)."""
    g = list(g)
    df = len(f) - 1
    for d in range(len(g) - 1, df - 1, -1):
        c = g[d] % p
        if c:
            for i in range(df + 1):
                g[d - df + i] = (g[d - df + i] - c * f[i]) % p
    return all(v % p == 0 for v in g[:df])


def brute_irreducible(f, p) -> bool:
    n = len(f) - 1
    for d in range(1, n // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if _divides(list(low) + [1], f, p):
                return False
    return True


@lru_cache(maxsize=None)
def least_irreducible(p: int, n: int) -> tuple[int, ...]:
    for code in range(p**n):
        f = _digits(code, p, n) + [1]
        if brute_irreducible(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial")


class OracleField:
    """F_{p^n} with elements encoded as base-p digit strings of power-basis coefficients."""

    def __init__(self, p: int, n: int):
        self.p, self.n, self.Q = p, n, p**n
        self.mod = least_irreducible(p, n)
        Q = self.Q
        digits = np.array([_digits(v, p, n) for v in range(Q)], dtype=np.int64)
        self.digits = digits
        weights = p ** np.arange(n, dtype=np.int64)
        self._weights = weights
        # primitive element by brute order counting
        one = [1] + [0] * (n - 1)
        for g in range(2, Q) if Q > 2 else [1]:
            gd = _digits(g, p, n)
            x, order = gd, 1
            while x != one:
                x = _polymulmod(x, gd, list(self.mod), p)
                order += 1
            if order == Q - 1:
                break
        exp = [0] * (Q - 1)
        x = one
        for i in range(Q - 1):
            exp[i] = int(sum(c * p**t for t, c in enumerate(x)))
            x = _polymulmod(x, gd, list(self.mod), p)
        self.exp = np.array(exp, dtype=np.int64)
        self.log = np.full(Q, -1, dtype=np.int64)
        self.log[self.exp] = np.arange(Q - 1)

    def add(self, a, b):
        a, b = np.asarray(a), np.asarray(b)
        return (((self.digits[a] + self.digits[b]) % self.p) * self._weights).sum(axis=-1)

    @property
    def add_table(self) -> np.ndarray:
        if not hasattr(self, "_add_table"):
            xs = self.elements()
            self._add_table = np.stack([self.add(np.full(self.Q, a), xs) for a in range(self.Q)]).astype(np.int32)
        return self._add_table

    def neg(self, a):
        return (((-self.digits[np.asarray(a)]) % self.p) * self._weights).sum(axis=-1)

    def mul(self, a, b):
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        out = self.exp[(self.log[a] + self.log[b]) % (self.Q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def scalar(self, c: int) -> int:
        return c % self.p

    def pow_int(self, a: int, e: int) -> int:
        if a == 0:
            return 0 if e else 1
        return int(self.exp[(self.log[a] * e) % (self.Q - 1)])

    def elements(self):
        return np.arange(self.Q)

    def embed_from(self, small: "OracleField"):
        """A field map small -> self: send x to a root of small's modulus."""
        if self.n % small.n or self.p != small.p:
            raise ValueError("not a subfield")
        xs = self.elements()
        # evaluate small.mod at every element
        acc = np.zeros(self.Q, dtype=np.int64)
        powx = np.ones(self.Q, dtype=np.int64)
        for i, c in enumerate(small.mod):
            acc = self.add(acc, self.mul(np.full(self.Q, c % self.p), powx))
            powx = self.mul(powx, xs)
        roots = np.nonzero(acc == 0)[0]
        r = int(roots[0])

        def emb(a: int) -> int:
            out = 0
            rp = 1
            for c in _digits(int(a), self.p, small.n):
                out = int(self.add(out, self.mul(c, rp)))
                rp = int(self.mul(rp, r))
            return out

        return emb


@lru_cache(maxsize=8)
def oracle_field(p: int, n: int) -> OracleField:
    return OracleField(p, n)


def elliptic_count(coeffs, p: int, k: int, n: int = 1) -> int:
    """Projective points of y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over F_{p^(kn)}.

    Coefficients are encodings in F_{p^k}.  Every affine pair (x, y) is tested.
    """
    big = oracle_field(p, k * n)
    if k == 1:
        a1, a2, a3, a4, a6 = [c % p for c in coeffs]
    else:
        emb = big.embed_from(oracle_field(p, k))
        a1, a2, a3, a4, a6 = [emb(c) for c in coeffs]
    Q = big.Q
    xs = big.elements()
    x2 = big.mul(xs, xs)
    rhs = big.add(big.add(big.add(big.mul(x2, xs), big.mul(a2, x2)), big.mul(a4, xs)), np.full(Q, a6))
    ys = big.elements()
    total = 1  # point at infinity
    y2 = big.mul(ys, ys)
    a3y = big.mul(a3, ys)
    base = big.add(y2, a3y)
    A = big.add_table
    chunk = max(1, 2_000_000 // Q)
    for start in range(0, Q, chunk):
        xc = xs[start:start + chunk, None]
        lhs = A[big.mul(big.mul(a1, xc), ys[None, :]), base[None, :]]
        total += int((lhs == rhs[start:start + chunk, None]).sum())
    return total


def short_count(a: int, b: int, p: int, n: int = 1) -> int:
    """Projective points of y^2 = x^3 + ax + b over F_{p^n}, p odd.

    Squares of every y are tallied once, then each x looks up its right-hand side.
    """
    F = oracle_field(p, n)
    ys = F.elements()
    hist = np.bincount(F.mul(ys, ys), minlength=F.Q)
    xs = F.elements()
    rhs = F.add(F.add(F.mul(F.mul(xs, xs), xs), F.mul(a % p, xs)), np.full(F.Q, b % p))
    return 1 + int(hist[rhs].sum())


def prime_affine_count(pred, p: int, nvars: int) -> int:
    """Number of tuples in F_p^nvars satisfying pred (integers mod p)."""
    return sum(1 for t in itertools.product(range(p), repeat=nvars) if pred(*t))


def prime_projective_count(pred, p: int, nvars: int) -> int:
    """Points of a homogeneous condition in P^(nvars-1)(F_p), by normalizing the first nonzero coordinate to 1."""
    n = 0
    for t in itertools.product(range(p), repeat=nvars):
        nz = [c for c in t if c]
        if nz and nz[0] == 1 and pred(*t):
            n += 1
    return n


def hensel_brute(a: int, q: int, p: int, s: int) -> list[int]:
    """All beta mod p^s with beta^2 - a beta + q = 0 mod p^s and beta a unit."""
    M = p**s
    return [b for b in range(M) if b % p and (b * b - a * b + q) % M == 0]


def power_sums_from_roots(roots, n_max):
    return [sum(r**n for r in roots) for n in range(1, n_max + 1)]


def valuation_frac(x: Fraction, ell: int):
    if x == 0:
        return None
    v = 0
    num, den = x.numerator, x.denominator
    while num % ell == 0:
        num //= ell
        v += 1
    while den % ell == 0:
        den //= ell
        v -= 1
    return v
