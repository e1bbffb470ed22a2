"""Constructible sets over F_q and exact point counts over F_{q^n}.

Counting runs over numpy arrays of field elements in logarithmic form
(see FieldSpec.array_tables).  A variable that occurs in a single
equation, at most quadratically and nowhere else, is summed out in closed
form (one root, or 1 + chi(discriminant)); the remaining variables are
enumerated in chunks.
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .config import enumeration_bound
from .errors import SingularCurve, TooLarge
from .gf import FieldSpec, embedding, make_tower, prime_power
from . import logic as L

CHUNK = 1 << 20

# ---------------------------------------------------------------------------
# sparse integer polynomials


class Poly:
    """Sparse polynomial with integer coefficients in a fixed number of variables."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple[int, ...], int] | None = None):
        self.nvars = nvars
        self.terms = {e: c for e, c in (terms or {}).items() if c}

    @classmethod
    def const(cls, nvars: int, c: int) -> "Poly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, i: int) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    def __eq__(self, other):
        return isinstance(other, Poly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self):
        return f"Poly({self.nvars}, {self.terms})"

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Poly(self.nvars, out)

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(self.nvars, out)

    def __pow__(self, n: int) -> "Poly":
        out = Poly.const(self.nvars, 1)
        for _ in range(n):
            out = out * self
        return out

    def reduce(self, p: int) -> "Poly":
        return Poly(self.nvars, {e: c % p for e, c in self.terms.items()})

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def total_degrees(self) -> set[int]:
        return {sum(e) for e in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.total_degrees()) <= 1

    def uses(self, i: int) -> bool:
        return any(e[i] for e in self.terms)

    def coefficients_in(self, i: int) -> dict[int, "Poly"]:
        """Split as sum of c_j * x_i^j; the c_j keep the same arity with x_i absent."""
        out: dict[int, dict] = {}
        for e, c in self.terms.items():
            j = e[i]
            rest = e[:i] + (0,) + e[i + 1:]
            out.setdefault(j, {})[rest] = out.get(j, {}).get(rest, 0) + c
        return {j: Poly(self.nvars, t) for j, t in out.items()}

    def substitute(self, values: Mapping[int, int]) -> "Poly":
        """Set some variables to integer constants (arity unchanged)."""
        out: dict = {}
        for e, c in self.terms.items():
            coeff = c
            e2 = list(e)
            for i, v in values.items():
                if e[i]:
                    coeff *= v ** e[i]
                    e2[i] = 0
            if coeff:
                t = tuple(e2)
                out[t] = out.get(t, 0) + coeff
        return Poly(self.nvars, out)

    def select(self, keep: Sequence[int]) -> "Poly":
        """Re-index onto the variables keep (others must be absent)."""
        out: dict = {}
        for e, c in self.terms.items():
            t = tuple(e[i] for i in keep)
            out[t] = out.get(t, 0) + c
        return Poly(len(keep), out)

    def render(self, names: Sequence[str]) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda e: (-sum(e), [-x for x in e])):
            c = self.terms[e]
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            parts.append(("- " if c < 0 else "+ ") + body)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


def term_to_poly(t: L.Term, names: Sequence[str]) -> Poly:
    n = len(names)
    index = {v: i for i, v in enumerate(names)}
    if isinstance(t, L.Var):
        if t.name not in index:
            raise ValueError(f"unknown variable {t.name!r}; declared: {', '.join(names)}")
        return Poly.var(n, index[t.name])
    if isinstance(t, L.Const):
        return Poly.const(n, t.value)
    if isinstance(t, L.Add):
        return term_to_poly(t.left, names) + term_to_poly(t.right, names)
    if isinstance(t, L.Sub):
        return term_to_poly(t.left, names) - term_to_poly(t.right, names)
    if isinstance(t, L.Mul):
        return term_to_poly(t.left, names) * term_to_poly(t.right, names)
    if isinstance(t, L.Neg):
        return -term_to_poly(t.arg, names)
    if isinstance(t, L.Pow):
        return term_to_poly(t.base, names) ** t.exp
    raise ValueError("sigma is not allowed in polynomial equations")


def parse_poly(text: str, names: Sequence[str]) -> Poly:
    return term_to_poly(L.parse_term(text), names)


# ---------------------------------------------------------------------------
# specs


@dataclass(frozen=True)
class ConstructibleSpec:
    """{equations = 0, inequations != 0} in affine or projective space over F_q."""

    ambient: str  # "affine" or "projective"
    variables: tuple[str, ...]
    equations: tuple[Poly, ...] = ()
    inequations: tuple[Poly, ...] = ()
    p: int = 2
    k: int = 1
    # coefficients in F_q (k > 1) are given via extra "parameter" values; see curves
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.ambient not in ("affine", "projective"):
            raise ValueError(f"ambient must be affine or projective, not {self.ambient!r}")
        m = len(self.variables)
        object.__setattr__(self, "equations", tuple(e.reduce(self.p) for e in self.equations))
        object.__setattr__(self, "inequations", tuple(e.reduce(self.p) for e in self.inequations))
        for poly in self.equations + self.inequations:
            if poly.nvars != m:
                raise ValueError("polynomial arity does not match the variable list")
            if self.ambient == "projective" and not poly.is_homogeneous():
                raise ValueError(f"projective spec needs homogeneous polynomials: {poly.render(self.variables)}")

    @property
    def q(self) -> int:
        return self.p**self.k

    @property
    def dim(self) -> int:
        return len(self.variables)

    def with_equation(self, poly: Poly) -> "ConstructibleSpec":
        return ConstructibleSpec(self.ambient, self.variables, self.equations + (poly,), self.inequations, self.p, self.k)

    def with_inequation(self, poly: Poly) -> "ConstructibleSpec":
        return ConstructibleSpec(self.ambient, self.variables, self.equations, self.inequations + (poly,), self.p, self.k)

    def product(self, other: "ConstructibleSpec") -> "ConstructibleSpec":
        """Affine product V x W (variables of other renamed if they clash)."""
        if self.ambient != "affine" or other.ambient != "affine":
            raise ValueError("products are formed for affine specs")
        if (self.p, self.k) != (other.p, other.k):
            raise ValueError("specs live over different fields")
        names = list(self.variables)
        extra = [v if v not in names else f"{v}_2" for v in other.variables]
        m, n = len(names), len(extra)

        def widen(poly: Poly, offset: int) -> Poly:
            return Poly(m + n, {(0,) * offset + e + (0,) * (m + n - offset - len(e)): c for e, c in poly.terms.items()})

        return ConstructibleSpec(
            "affine", tuple(names + extra),
            tuple(widen(e, 0) for e in self.equations) + tuple(widen(e, m) for e in other.equations),
            tuple(widen(e, 0) for e in self.inequations) + tuple(widen(e, m) for e in other.inequations),
            self.p, self.k)

    def to_text(self) -> str:
        lines = [f"ambient = {self.ambient} {self.dim}", f"vars = {', '.join(self.variables)}",
                 f"base = {self.p}^{self.k}"]
        lines += [f"{e.render(self.variables)} = 0" for e in self.equations]
        lines += [f"{e.render(self.variables)} != 0" for e in self.inequations]
        return "\n".join(lines) + "\n"


_HEADER = re.compile(r"^\s*(ambient|vars|base)\s*=\s*(.*?)\s*$")


def parse_spec(text: str) -> ConstructibleSpec:
    """Read the plain-text variety format (see README)."""
    ambient = dim = names = base = None
    eqs: list[tuple[str, str, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _HEADER.match(line)
        if m and "!=" not in line:
            key, val = m.groups()
            if key == "ambient":
                parts = val.split()
                if len(parts) != 2 or parts[0] not in ("affine", "projective") or not parts[1].isdigit():
                    raise ValueError(f"line {lineno}: expected 'ambient = affine M' or 'ambient = projective M'")
                ambient, dim = parts[0], int(parts[1])
            elif key == "vars":
                names = [v.strip() for v in val.split(",") if v.strip()]
            else:
                bm = re.fullmatch(r"(\d+)\s*(?:\^\s*(\d+))?", val)
                if not bm:
                    raise ValueError(f"line {lineno}: expected 'base = p^k'")
                base = (int(bm.group(1)), int(bm.group(2) or 1))
            continue
        if "!=" in line:
            lhs, rhs = line.split("!=", 1)
            eqs.append((lhs, rhs, 1))
        elif "=" in line:
            lhs, rhs = line.split("=", 1)
            eqs.append((lhs, rhs, 0))
        else:
            raise ValueError(f"line {lineno}: expected '<poly> = 0' or '<poly> != 0'")
    if ambient is None or names is None or base is None:
        raise ValueError("variety file needs ambient, vars and base headers")
    if len(names) != dim:
        raise ValueError(f"ambient dimension {dim} but {len(names)} variables")
    p, k = base
    from sympy import isprime

    if not isprime(p):
        raise ValueError(f"base characteristic {p} is not prime")
    equations, inequations = [], []
    for lhs, rhs, kind in eqs:
        poly = parse_poly(lhs, names) - parse_poly(rhs, names)
        (inequations if kind else equations).append(poly)
    return ConstructibleSpec(ambient, tuple(names), tuple(equations), tuple(inequations), p, k)


def load_spec(path: str | Path) -> ConstructibleSpec:
    return parse_spec(Path(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# vectorized evaluation in log form


class _LogArith:
    def __init__(self, F: FieldSpec):
        self.F = F
        self.exp, self.log, self.zech = F.array_tables()
        self.Z = F.order - 1  # sentinel for zero
        self.M = F.order - 1
        self.odd = F.p != 2
        if F.p == 2:
            # absolute trace is F_2-linear: precompute it on the power basis
            self.trace_basis = np.array([F.trace_to_prime(2**i) for i in range(F.degree)], dtype=np.int64)

    def const(self, c: int, n: int) -> np.ndarray:
        return np.full(n, self.log[c % self.F.p], dtype=np.int64)

    def add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        Z, M = self.Z, self.M
        d = (b - a) % M
        z = self.zech[d]
        s = np.where(z == Z, Z, (a + z) % M)
        s = np.where(a == Z, b, s)
        return np.where(b == Z, a, s)

    def mul(self, a, b):
        Z = self.Z
        return np.where((a == Z) | (b == Z), Z, (a + b) % self.M)

    def neg(self, a):
        if not self.odd:
            return a
        # -1 = g^((Q-1)/2)
        return np.where(a == self.Z, self.Z, (a + self.M // 2) % self.M)

    def eval(self, poly: Poly, xs: Sequence[np.ndarray | None], n: int) -> np.ndarray:
        Z, M, p = self.Z, self.M, self.F.p
        acc = np.full(n, Z, dtype=np.int64)
        for e, c in poly.terms.items():
            c %= p
            if not c:
                continue
            t = np.full(n, self.log[c], dtype=np.int64)
            zero = np.zeros(n, dtype=bool)
            for i, k in enumerate(e):
                if k:
                    x = xs[i]
                    zero |= x == Z
                    t = t + k * x
            t = np.where(zero, Z, t % M)
            acc = self.add(acc, t)
        return acc

    def chi(self, a):
        """Quadratic character: 0, 1, -1 (odd characteristic)."""
        return np.where(a == self.Z, 0, np.where(a % 2 == 0, 1, -1))

    def trace2(self, a):
        """Absolute trace to F_2 of log-form elements (characteristic 2)."""
        vals = self.exp[a]
        out = np.zeros(len(a), dtype=np.int64)
        for i, t in enumerate(self.trace_basis):
            if t:
                out ^= (vals >> i) & 1
        return out


def _eliminable(eqs: Sequence[Poly], ineqs: Sequence[Poly], nvars: int, odd: bool, keep: set[int]):
    """Pick variables that can be summed out in closed form.

    Returns (free_vars, elim) where free_vars occur nowhere and elim maps
    variable -> equation index.  Each chosen equation holds one eliminated
    variable, and the others it mentions are enumerated.
    """
    free = []
    elim: dict[int, int] = {}
    used_eqs: set[int] = set()
    for v in range(nvars):
        if v in keep:
            continue
        in_eqs = [i for i, e in enumerate(eqs) if e.uses(v)]
        in_ineqs = any(e.uses(v) for e in ineqs)
        if not in_eqs and not in_ineqs:
            free.append(v)
            continue
        if in_ineqs or len(in_eqs) != 1 or in_eqs[0] in used_eqs:
            continue
        i = in_eqs[0]
        deg = eqs[i].degree_in(v)
        if deg > 2 or (deg == 2 and not odd):
            continue
        # no other eliminated variable may appear in this equation
        if any(eqs[i].uses(w) for w in elim):
            continue
        if any(eqs[j].uses(v) for j in used_eqs):
            continue
        elim[v] = i
        used_eqs.add(i)
    return free, elim


def _affine_chunks(F: FieldSpec, eqs: Sequence[Poly], ineqs: Sequence[Poly], nvars: int,
                   keep: Sequence[int] = (), bound: int | None = None):
    """Yield (enumerated index arrays by variable, point-count array) per chunk.

    Every variable in keep is enumerated; the counts are the number of
    completions of each enumerated tuple.
    """
    A = _LogArith(F)
    Q = F.order
    eqs = [e.reduce(F.p) for e in eqs]
    ineqs = [e.reduce(F.p) for e in ineqs]
    if any(e.is_zero() for e in ineqs):
        eqs = [Poly.const(nvars, 1)]  # empty set
        ineqs = []
    eqs = [e for e in eqs if not e.is_zero()]
    free, elim = _eliminable(eqs, ineqs, nvars, A.odd, set(keep))
    enum = [v for v in range(nvars) if v not in free and v not in elim]
    bound = enumeration_bound() if bound is None else bound
    total = Q ** len(enum)
    if total > bound:
        raise TooLarge(f"counting needs {total} tuples over a field of {Q} elements; bound is {bound}")
    factor = Q ** len([v for v in free if v not in keep])
    other_eqs = [e for i, e in enumerate(eqs) if i not in elim.values()]
    split = {v: eqs[i].coefficients_in(v) for v, i in elim.items()}
    start = 0
    while start < total:
        stop = min(total, start + CHUNK)
        n = stop - start
        idx = np.arange(start, stop, dtype=np.int64)
        xs: list = [None] * nvars
        raw: dict[int, np.ndarray] = {}
        for v in reversed(enum):
            idx, digit = np.divmod(idx, Q)
            raw[v] = digit
            xs[v] = A.log[digit]
        ok = np.ones(n, dtype=bool)
        for e in other_eqs:
            ok &= A.eval(e, xs, n) == A.Z
        for e in ineqs:
            ok &= A.eval(e, xs, n) != A.Z
        counts = ok.astype(np.int64) * factor
        for v, coeffs in split.items():
            zero = np.full(n, A.Z, dtype=np.int64)
            a = A.eval(coeffs[2], xs, n) if 2 in coeffs else zero
            b = A.eval(coeffs[1], xs, n) if 1 in coeffs else zero
            c = A.eval(coeffs[0], xs, n) if 0 in coeffs else zero
            lin = np.where(b != A.Z, 1, np.where(c == A.Z, Q, 0))
            if 2 in coeffs:
                four = A.const(4, n)
                disc = A.add(A.mul(b, b), A.neg(A.mul(four, A.mul(a, c))))
                quad = 1 + A.chi(disc)
                cnt = np.where(a != A.Z, quad, lin)
            else:
                cnt = lin
            counts = counts * cnt
        yield raw, counts
        start = stop


def _count_affine(F, eqs, ineqs, nvars, bound=None) -> int:
    if nvars == 0:
        A = _LogArith(F)
        ok = all(A.eval(e, [], 1)[0] == A.Z for e in eqs) and all(A.eval(e, [], 1)[0] != A.Z for e in ineqs)
        return int(ok)
    return int(sum(int(c.sum()) for _, c in _affine_chunks(F, eqs, ineqs, nvars, bound=bound)))


def _patches(spec: ConstructibleSpec):
    """Standard affine cover: x_0..x_{i-1} = 0, x_i = 1, the rest free."""
    m = spec.dim
    for i in range(m):
        values = {j: 0 for j in range(i)}
        values[i] = 1
        rest = list(range(i + 1, m))
        eqs = [e.substitute(values).select(rest) for e in spec.equations]
        ineqs = [e.substitute(values).select(rest) for e in spec.inequations]
        yield eqs, ineqs, len(rest)


def count_points(spec: ConstructibleSpec, n: int = 1, *, bound: int | None = None) -> int:
    """|V(F_{q^n})|, exact."""
    if n < 1:
        raise ValueError("extension degree must be positive")
    F = make_tower(spec.p, spec.k, n, check_size=False)
    if spec.ambient == "affine":
        return _count_affine(F, spec.equations, spec.inequations, spec.dim, bound)
    return sum(_count_affine(F, e, i, r, bound) for e, i, r in _patches(spec))


def fiber_histogram(spec: ConstructibleSpec, projection: Sequence[str | int], n: int = 1,
                    *, bound: int | None = None) -> dict[int, int]:
    """{k: number of base points with exactly k preimages} for a coordinate projection."""
    if spec.ambient != "affine":
        raise ValueError("fiber histograms are defined for affine specs")
    keep = [spec.variables.index(v) if isinstance(v, str) else int(v) for v in projection]
    F = make_tower(spec.p, spec.k, n, check_size=False)
    Q = F.order
    base_size = Q ** len(keep)
    bound = enumeration_bound() if bound is None else bound
    if base_size > bound:
        raise TooLarge(f"base has {base_size} points; bound is {bound}")
    fibers = np.zeros(base_size, dtype=np.int64)
    for raw, counts in _affine_chunks(F, spec.equations, spec.inequations, spec.dim, keep, bound):
        if keep:
            flat = np.zeros(len(counts), dtype=np.int64)
            for v in keep:
                flat = flat * Q + raw[v]
        else:
            flat = np.zeros(len(counts), dtype=np.int64)
        np.add.at(fibers, flat, counts)
    hist = Counter(fibers.tolist())
    return dict(sorted(hist.items()))


def fiber_power(spec: ConstructibleSpec, projection: Sequence[str], r: int) -> ConstructibleSpec:
    """The r-fold fiber product of spec over the coordinate projection."""
    if spec.ambient != "affine":
        raise ValueError("fiber products are formed for affine specs")
    base = [v for v in spec.variables if v in projection]
    fiber = [v for v in spec.variables if v not in projection]
    names = base + [f"{v}_{j}" for j in range(1, r + 1) for v in fiber]
    m = len(names)
    eqs, ineqs = [], []
    for j in range(1, r + 1):
        pos = [names.index(v) if v in base else names.index(f"{v}_{j}") for v in spec.variables]

        def move(poly: Poly) -> Poly:
            out = {}
            for e, c in poly.terms.items():
                t = [0] * m
                for i, k in enumerate(e):
                    t[pos[i]] += k
                out[tuple(t)] = out.get(tuple(t), 0) + c
            return Poly(m, out)

        eqs += [move(e) for e in spec.equations]
        ineqs += [move(e) for e in spec.inequations]
    return ConstructibleSpec("affine", tuple(names), tuple(eqs), tuple(ineqs), spec.p, spec.k)


# ---------------------------------------------------------------------------
# elliptic curves


@dataclass(frozen=True)
class Weierstrass:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over F_q.

    Coefficients are elements of F_q encoded as in make_tower(p, k, 1);
    for prime q they are residues.
    """

    q: int
    a1: int = 0
    a2: int = 0
    a3: int = 0
    a4: int = 0
    a6: int = 0

    @classmethod
    def from_list(cls, a_list: Sequence[int], q: int) -> "Weierstrass":
        a = [int(v) for v in a_list]
        if len(a) == 2:
            a = [0, 0, 0] + a
        if len(a) != 5:
            raise ValueError("Weierstrass coefficients: [a4, a6] or [a1, a2, a3, a4, a6]")
        p, k = prime_power(q)
        if k == 1:
            a = [v % q for v in a]
        elif any(not 0 <= v < q for v in a):
            raise ValueError(f"coefficients over F_{q} must be field encodings in [0, {q})")
        return cls(q, *a)

    @property
    def coeffs(self) -> tuple[int, int, int, int, int]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def base_field(self) -> FieldSpec:
        p, k = prime_power(self.q)
        return make_tower(p, k, 1, check_size=False)

    def over(self, F: FieldSpec) -> tuple[int, ...]:
        """Coefficients as elements of a tower that contains F_q."""
        emb = embedding(self.base_field, F)
        return tuple(emb(a) for a in self.coeffs)

    def b_invariants(self):
        F = self.base_field
        a1, a2, a3, a4, a6 = self.coeffs
        m, ad, i = F.mul, F.add, F.from_int
        b2 = ad(m(a1, a1), m(i(4), a2))
        b4 = ad(m(i(2), a4), m(a1, a3))
        b6 = ad(m(a3, a3), m(i(4), a6))
        # b8 = a1^2 a6 + 4 a2 a6 - a1 a3 a4 + a2 a3^2 - a4^2
        b8 = F.sub(ad(ad(m(m(a1, a1), a6), m(m(i(4), a2), a6)), m(a2, m(a3, a3))),
                   ad(m(m(a1, a3), a4), m(a4, a4)))
        return b2, b4, b6, b8

    def discriminant(self) -> int:
        F = self.base_field
        b2, b4, b6, b8 = self.b_invariants()
        m, i = F.mul, F.from_int
        t1 = m(m(b2, b2), b8)
        t2 = m(i(8), m(b4, m(b4, b4)))
        t3 = m(i(27), m(b6, b6))
        t4 = m(i(9), m(b2, m(b4, b6)))
        return F.add(F.neg(F.add(F.add(t1, t2), t3)), t4)

    def is_singular(self) -> bool:
        return self.discriminant() == 0

    def projective_spec(self) -> ConstructibleSpec:
        """Y^2 Z + a1 XYZ + a3 Y Z^2 - X^3 - a2 X^2 Z - a4 X Z^2 - a6 Z^3 (prime q only)."""
        p, k = prime_power(self.q)
        if k != 1:
            raise ValueError("integer-coefficient specs need prime q")
        a1, a2, a3, a4, a6 = self.coeffs
        text = (f"Y^2*Z + {a1}*X*Y*Z + {a3}*Y*Z^2 - X^3 - {a2}*X^2*Z - {a4}*X*Z^2 - {a6}*Z^3")
        poly = parse_poly(text, ["X", "Y", "Z"])
        return ConstructibleSpec("projective", ("X", "Y", "Z"), (poly,), (), p, 1)

    def __str__(self):
        a1, a2, a3, a4, a6 = self.coeffs
        lhs = "y^2" + (f" + {a1}*x*y" if a1 else "") + (f" + {a3}*y" if a3 else "")
        rhs = "x^3" + (f" + {a2}*x^2" if a2 else "") + (f" + {a4}*x" if a4 else "") + (f" + {a6}" if a6 else "")
        return f"{lhs} = {rhs} over F_{self.q}"


def count_elliptic(a_list: Sequence[int] | Weierstrass, q: int | None = None, n: int = 1) -> int:
    """|E(F_{q^n})| including the point at infinity."""
    E = a_list if isinstance(a_list, Weierstrass) else Weierstrass.from_list(a_list, q)
    if E.is_singular():
        raise SingularCurve(f"discriminant vanishes for {E}")
    p, k = prime_power(E.q)
    F = make_tower(p, k, n, check_size=False)
    a1, a2, a3, a4, a6 = E.over(F)
    A = _LogArith(F)
    Q = F.order
    total = 1
    for start in range(0, Q, CHUNK):
        stop = min(Q, start + CHUNK)
        m = stop - start
        x = A.log[np.arange(start, stop, dtype=np.int64)]
        c = lambda v: np.full(m, A.log[v], dtype=np.int64)
        x2 = A.mul(x, x)
        fx = A.add(A.add(A.mul(x2, x), A.mul(c(a2), x2)), A.add(A.mul(c(a4), x), c(a6)))
        h = A.add(A.mul(c(a1), x), c(a3))
        if A.odd:
            four = A.const(4, m)
            disc = A.add(A.mul(h, h), A.mul(four, fx))
            total += int((1 + A.chi(disc)).sum())
        else:
            # y^2 + h y = f: one root if h = 0, else 2 or 0 by the trace of f/h^2
            hz = h == A.Z
            ratio = np.where(hz, 0, (fx - 2 * h) % A.M)
            ratio = np.where(fx == A.Z, A.Z, ratio)
            tr = A.trace2(np.where(hz, A.Z, ratio))
            total += int(np.where(hz, 1, np.where(tr == 0, 2, 0)).sum())
    return total


# ---------------------------------------------------------------------------
# builtin families


def affine_line(q: int) -> ConstructibleSpec:
    p, k = prime_power(q)
    return ConstructibleSpec("affine", ("x",), (), (), p, k, name="affine-line")


def gm(q: int) -> ConstructibleSpec:
    p, k = prime_power(q)
    return ConstructibleSpec("affine", ("x",), (), (Poly.var(1, 0),), p, k, name="gm")


def projective_line(q: int) -> ConstructibleSpec:
    p, k = prime_power(q)
    return ConstructibleSpec("projective", ("x0", "x1"), (), (), p, k, name="projective-line")


def legendre_surface(q: int) -> ConstructibleSpec:
    """{(x, y, l) : y^2 = x(x-1)(x-l), l != 0, l != 1} in affine 3-space."""
    p, k = prime_power(q)
    names = ["x", "y", "l"]
    eq = parse_poly("y^2 - x*(x - 1)*(x - l)", names)
    ineqs = (parse_poly("l", names), parse_poly("l - 1", names))
    return ConstructibleSpec("affine", tuple(names), (eq,), ineqs, p, k, name="legendre-surface")


def parse_curve(text: str, q: int) -> Weierstrass:
    """Read "y^2 + a1*x*y + a3*y = x^3 + a2*x^2 + a4*x + a6" style equations."""
    names = ["x", "y"]
    if "=" not in text:
        raise ValueError("curve equation needs '='")
    lhs, rhs = text.split("=", 1)
    poly = parse_poly(lhs, names) - parse_poly(rhs, names)
    t = poly.terms
    lead_y = t.get((0, 2), 0)
    lead_x = t.get((3, 0), 0)
    if lead_y == 0 or lead_x == 0 or lead_y != -lead_x:
        raise ValueError("expected a Weierstrass equation y^2 + ... = x^3 + ...")
    allowed = {(0, 2), (3, 0), (1, 1), (0, 1), (2, 0), (1, 0), (0, 0)}
    if set(t) - allowed:
        raise ValueError("expected a Weierstrass equation y^2 + ... = x^3 + ...")
    s = lead_y  # normalize to y^2 coefficient 1
    g = lambda e: t.get(e, 0) * s
    a1, a3 = g((1, 1)), g((0, 1))
    a2, a4, a6 = -g((2, 0)), -g((1, 0)), -g((0, 0))
    p, _ = prime_power(q)
    # integer coefficients mean their images in the prime field
    return Weierstrass.from_list([v % p for v in (a1, a2, a3, a4, a6)], q)


def weierstrass_spec(curve: Weierstrass) -> ConstructibleSpec:
    return curve.projective_spec()
