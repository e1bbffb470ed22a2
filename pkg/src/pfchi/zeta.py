"""Characteristic-root data from point counts.

A ZetaData (q, A, B) stands for the counts

    N_n = sum(alpha_i^n) - sum(beta_j^n)

where the alpha_i are the reciprocal roots of A and the beta_j those of B.
Polynomials are tuples of integer coefficients in ascending order with
constant term 1.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
import sympy

from .errors import InconsistentCounts, NoRecurrence, ValidationFailure


def _trim(c: Sequence[int]) -> tuple[int, ...]:
    c = list(c)
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return tuple(int(v) for v in c)


def poly_mul(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def power_sums(P: Sequence[int], n_max: int) -> list[int]:
    """[s_1, ..., s_n_max]: power sums of the reciprocal roots of P (P(0) = 1).

    Newton: s_n = -n c_n - sum_{i=1}^{n-1} c_i s_{n-i}, with c_i = 0 past deg P.
    """
    c = list(P)
    d = len(c) - 1
    s = [0] * (n_max + 1)
    for n in range(1, n_max + 1):
        acc = -n * c[n] if n <= d else 0
        for i in range(1, min(n - 1, d) + 1):
            acc -= c[i] * s[n - i]
        s[n] = acc
    return s[1:]


def power_sum_poly(P: Sequence[int], n: int) -> int:
    return power_sums(P, n)[-1] if n >= 1 else len(P) - 1


@dataclass(frozen=True)
class ZetaData:
    q: int
    A: tuple[int, ...]
    B: tuple[int, ...] = (1,)

    def __post_init__(self):
        A, B = _trim(self.A), _trim(self.B)
        if A[0] != 1 or B[0] != 1:
            raise ValueError("A and B must have constant term 1")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)

    @property
    def degree(self) -> int:
        """deg A + deg B."""
        return len(self.A) - 1 + len(self.B) - 1

    def counts(self, n_max: int) -> list[int]:
        a = power_sums(self.A, n_max)
        b = power_sums(self.B, n_max)
        return [x - y for x, y in zip(a, b)]

    def to_dict(self) -> dict:
        return {"q": self.q, "A": list(self.A), "B": list(self.B)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "ZetaData":
        return cls(int(d["q"]), tuple(int(v) for v in d["A"]), tuple(int(v) for v in d["B"]))

    @classmethod
    def from_json(cls, text: str) -> "ZetaData":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class CountSeries:
    q: int
    counts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        if any(c < 0 for c in self.counts):
            raise ValueError("point counts are nonnegative")

    def __len__(self):
        return len(self.counts)


def _as_counts(counts) -> list[int]:
    if isinstance(counts, CountSeries):
        return list(counts.counts)
    return [int(c) for c in counts]


def power_sum(z: ZetaData, n: int) -> int:
    """N_n for the data z."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return power_sum_poly(z.A, n) - power_sum_poly(z.B, n)


def curve_zeta(q: int, B: Sequence[int]) -> ZetaData:
    return ZetaData(q, (1, -(q + 1), q), tuple(B))


def fit_curve_lpoly(counts, g: int, q: int | None = None) -> ZetaData:
    """L-polynomial of a genus-g curve from N_1..N_g (more counts are checked)."""
    if isinstance(counts, CountSeries):
        q = counts.q if q is None else q
    N = _as_counts(counts)
    if q is None:
        raise ValueError("q is required")
    if g < 0:
        raise ValueError("genus must be nonnegative")
    if len(N) < g:
        raise InconsistentCounts(f"need at least {g} counts for genus {g}, got {len(N)}")
    s = [1 + q**n - N[n - 1] for n in range(1, g + 1)]
    e = [Fraction(1)]
    for n in range(1, g + 1):
        acc = sum((-1) ** (i - 1) * e[n - i] * s[i - 1] for i in range(1, n + 1))
        e.append(acc / n)
    if any(v.denominator != 1 for v in e):
        raise InconsistentCounts("counts do not come from an integral L-polynomial")
    b = [0] * (2 * g + 1)
    for i in range(g + 1):
        b[i] = (-1) ** i * int(e[i])
    for i in range(g):
        b[2 * g - i] = q ** (g - i) * b[i]
    z = curve_zeta(q, b)
    predicted = z.counts(len(N))
    for n, (got, want) in enumerate(zip(predicted, N), 1):
        if got != want:
            raise InconsistentCounts(f"recovered L-polynomial predicts N_{n} = {got}, count is {want}")
    return z


def berlekamp_massey(seq: Sequence[int]) -> list[Fraction]:
    """Shortest connection polynomial [1, c_1, ..., c_L] over Q.

    seq[n] + c_1 seq[n-1] + ... + c_L seq[n-L] = 0 for L <= n < len(seq).
    """
    C = [Fraction(1)]
    Bp = [Fraction(1)]
    L, m, b = 0, 1, Fraction(1)
    for n in range(len(seq)):
        d = Fraction(seq[n])
        for i in range(1, L + 1):
            d += C[i] * seq[n - i]
        if d == 0:
            m += 1
            continue
        coef = d / b
        T = list(C)
        shifted = [Fraction(0)] * m + [coef * v for v in Bp]
        if len(shifted) > len(C):
            C += [Fraction(0)] * (len(shifted) - len(C))
        for i, v in enumerate(shifted):
            C[i] -= v
        if 2 * L <= n:
            L, Bp, b, m = n + 1 - L, T, d, 1
        else:
            m += 1
    C = C[: L + 1] + [Fraction(0)] * max(0, L + 1 - len(C))
    return C


def _split_exponents(conn: Sequence[int], N: Sequence[int]):
    """Write N_n = sum_j m_j * PowerSum(f_j, n) over the irreducible factors f_j."""
    T = sympy.Symbol("T")
    poly = sympy.Poly(list(reversed(conn)), T)
    _, factors = sympy.factor_list(poly)
    fs = []
    for f, mult in factors:
        if mult != 1:
            raise NoRecurrence("recurrence has repeated roots; counts are not a sum of exponentials")
        c = [int(v) for v in reversed(f.all_coeffs())]
        if c[0] == 0:
            raise NoRecurrence("recurrence has a zero root")
        if c[0] < 0:
            c = [-v for v in c]
        if c[0] != 1:
            raise NoRecurrence("recurrence factor has non-unit constant term")
        fs.append(tuple(c))
    if not fs:
        return []
    L = len(conn) - 1
    rows = [power_sums(f, L) for f in fs]
    M = sympy.Matrix([[rows[j][n] for j in range(len(fs))] for n in range(L)])
    rhs = sympy.Matrix(N[:L])
    try:
        sol, params = M.gauss_jordan_solve(rhs)
    except ValueError:
        raise NoRecurrence("counts are not an integer combination of the recurrence's root power sums") from None
    if params.shape[0]:
        raise NoRecurrence("exponent system is underdetermined")
    out = []
    for f, m in zip(fs, sol):
        m = sympy.Rational(m)
        if m.q != 1:
            raise NoRecurrence("root multiplicities are not integers")
        if m != 0:
            out.append((f, int(m)))
    return out


def fit_rational_zeta(counts, degree_bound: int, q: int | None = None) -> ZetaData:
    """Fit A, B to N_1, N_2, ... via the minimal linear recurrence.

    The recurrence is found from the first 2*degree_bound counts; the
    remaining counts are held out and must be reproduced exactly.
    """
    if isinstance(counts, CountSeries):
        q = counts.q if q is None else q
    if q is None:
        raise ValueError("q is required")
    N = _as_counts(counts)
    D = degree_bound
    if D < 0:
        raise ValueError("degree bound must be nonnegative")
    if len(N) < 2 * D + 1:
        raise ValueError(f"need at least {2 * D + 1} counts for degree bound {D}, got {len(N)}")
    conn = berlekamp_massey(N[: 2 * D])
    L = len(conn) - 1
    if L > D:
        raise NoRecurrence(f"no linear recurrence of order <= {D} fits the counts")
    if any(c.denominator != 1 for c in conn):
        raise NoRecurrence("minimal recurrence has non-integer coefficients")
    conn = [int(c) for c in conn]
    A, B = (1,), (1,)
    for f, m in _split_exponents(conn, N):
        for _ in range(abs(m)):
            if m > 0:
                A = poly_mul(A, f)
            else:
                B = poly_mul(B, f)
    z = ZetaData(q, A, B)
    predicted = z.counts(len(N))
    for n, (got, want) in enumerate(zip(predicted, N), 1):
        if got != want:
            raise ValidationFailure(f"fitted data predicts N_{n} = {got}, count is {want}")
    return z


def weil_check(z: ZetaData, g: int, tol: float = 1e-9) -> bool:
    """Functional equation of B plus |root|^2 = 1/q for every root of B."""
    B, q = list(z.B), z.q
    if len(B) - 1 != 2 * g:
        return False
    for i in range(g + 1):
        if B[2 * g - i] != q ** (g - i) * B[i]:
            return False
    if g == 0:
        return True
    roots = np.roots(list(reversed([float(v) for v in B])))
    return bool(np.all(np.abs(np.abs(roots) ** 2 - 1.0 / q) <= tol))
