"""Coherent residue families and runtime checks of the Euler-characteristic axioms."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence, Union

from sympy import factorint

from .errors import SingularSystem
from . import logic as L
from .geometry import ConstructibleSpec, Poly, count_points, fiber_histogram


def prime_power_parts(n: int) -> list[int]:
    return [p**e for p, e in sorted(factorint(n).items())]


def crt(residues: Mapping[int, int]) -> tuple[int, int]:
    """Combine {modulus: residue} with pairwise coprime moduli."""
    x, M = 0, 1
    for m, r in residues.items():
        if gcd(M, m) != 1:
            raise ValueError("CRT moduli must be pairwise coprime")
        t = ((r - x) * pow(M, -1, m)) % m
        x += M * t
        M *= m
    return x % M, M


@dataclass(frozen=True)
class EulerValue:
    """Residues of one profinite value at finitely many moduli."""

    entries: Mapping[int, int]

    def __post_init__(self):
        object.__setattr__(self, "entries", {int(n): int(r) % int(n) for n, r in sorted(self.entries.items())})

    @classmethod
    def from_integer(cls, value: int, moduli: Iterable[int]) -> "EulerValue":
        return cls({n: value % n for n in moduli})

    def __getitem__(self, n: int) -> int:
        return self.entries[n]

    def coherent(self) -> bool:
        """entry(n) mod m = entry(m) whenever m | n are both present."""
        e = self.entries
        return all(e[n] % m == e[m] for n in e for m in e if n % m == 0)

    def to_dict(self) -> dict[str, int]:
        return {str(n): r for n, r in self.entries.items()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "EulerValue":
        return cls({int(k): v for k, v in json.loads(text).items()})


# ---------------------------------------------------------------------------
# definable sets given as formulas


@dataclass(frozen=True)
class FormulaSet:
    """The tuples (over the given sorts) satisfying a formula."""

    formula: L.Formula
    free: tuple[tuple[str, int], ...]
    label: str = field(default="", compare=False)

    @classmethod
    def of(cls, text: str | L.Formula, free: Sequence, label: str = "") -> "FormulaSet":
        f = L.parse(text) if isinstance(text, str) else text
        return cls(f, tuple(L.parse_free_vars(free)), label or (text if isinstance(text, str) else L.render(f)))

    def count(self, q: int) -> int:
        return L.count_solutions(self.formula, list(self.free), q)


DefinableSet = Union[FormulaSet, ConstructibleSpec]


def set_size(X: DefinableSet, q: int | None = None) -> int:
    if isinstance(X, ConstructibleSpec):
        if q is not None and q != X.q:
            raise ValueError(f"spec is over F_{X.q}, not F_{q}")
        return count_points(X, 1)
    return X.count(q)


def _label(X: DefinableSet) -> str:
    if isinstance(X, ConstructibleSpec):
        return X.name or "; ".join([e.render(X.variables) + " = 0" for e in X.equations]
                                   + [e.render(X.variables) + " != 0" for e in X.inequations]) or X.ambient
    return X.label


def chi_hat(X: DefinableSet | str, q: int, moduli: Iterable[int], free: Sequence = ()) -> EulerValue:
    """Exact count reduced at each modulus; composite moduli are cross-checked by CRT."""
    if isinstance(X, (str, L.Eq, L.Not, L.And, L.Or, L.Implies, L.Iff, L.Exists, L.Forall, L.Parity)):
        X = FormulaSet.of(X, free)
    count = set_size(X, q)
    entries = {}
    for n in moduli:
        direct = count % n
        parts = prime_power_parts(n) if n > 1 else []
        if len(parts) > 1:
            combined, _ = crt({m: count % m for m in parts})
            if combined != direct:
                raise AssertionError(f"CRT recombination disagrees at modulus {n}")
        entries[n] = direct
    value = EulerValue(entries)
    if not value.coherent():
        raise AssertionError("incoherent Euler value")
    return value


# ---------------------------------------------------------------------------
# axiom checks


@dataclass
class Report:
    records: list[dict] = field(default_factory=list)

    def add(self, modulus, check: str, lhs, rhs, ok: bool | None = None):
        ok = (lhs == rhs) if ok is None else ok
        self.records.append({"modulus": modulus, "check": check, "lhs": lhs, "rhs": rhs, "pass": bool(ok)})

    @property
    def passed(self) -> bool:
        return all(r["pass"] for r in self.records)

    def failures(self) -> list[dict]:
        return [r for r in self.records if not r["pass"]]

    def extend(self, other: "Report"):
        self.records.extend(other.records)

    def to_json(self) -> str:
        return json.dumps(self.records)


def _split(X: DefinableSet):
    """Two disjoint pieces covering X, cut by 'first coordinate = 0'."""
    if isinstance(X, ConstructibleSpec):
        if X.ambient != "affine":
            return None
        cut = Poly.var(X.dim, 0)
        return X.with_equation(cut), X.with_inequation(cut)
    name = X.free[0][0]
    cut = L.Eq(L.Var(name), L.Const(0))
    return (FormulaSet(L.And(X.formula, cut), X.free, X.label + " & cut"),
            FormulaSet(L.And(X.formula, L.Not(cut)), X.free, X.label + " & !cut"))


def _product(X: DefinableSet, Y: DefinableSet):
    if isinstance(X, ConstructibleSpec) and isinstance(Y, ConstructibleSpec):
        if X.ambient == Y.ambient == "affine":
            return X.product(Y)
        return None
    if isinstance(X, FormulaSet) and isinstance(Y, FormulaSet):
        taken = {n for n, _ in X.free} | L.free_vars(X.formula)
        g, free = Y.formula, []
        for name, m in Y.free:
            new = name
            while new in taken or new in {n for n, _ in Y.free if n != name}:
                new = new + "_"
            g = L.rename_free(g, name, new) if new != name else g
            taken.add(new)
            free.append((new, m))
        return FormulaSet(L.And(X.formula, g), X.free + tuple(free), f"({X.label}) x ({Y.label})")
    return None


def _parity_classes(X: FormulaSet, q: int, n: int) -> int:
    """How many k in Z/n make mu[n,k] hold (must be exactly one)."""
    if len(X.free) != 1:
        raise ValueError("parity check needs one free variable")
    var, m = X.free[0]
    hits = 0
    for k in range(n):
        f = L.Parity(n, k, var, m, X.formula)
        hits += L.evaluate(f, q)
    return hits


@dataclass(frozen=True)
class Fibration:
    """A coordinate projection of an affine spec, expected to have constant fibers."""

    total: ConstructibleSpec
    projection: tuple[str, ...]


def verify_axioms(sets: Sequence[DefinableSet], q: int, moduli: Iterable[int],
                  fibrations: Sequence[Fibration] = ()) -> Report:
    """Check additivity, multiplicativity, strong fibration, parity uniqueness and coherence."""
    moduli = list(moduli)
    report = Report()
    sizes = [set_size(X, q) for X in sets]
    for X, size in zip(sets, sizes):
        tag = _label(X)
        value = EulerValue.from_integer(size, moduli)
        for n in moduli:
            # coherence against every divisor present
            for m in moduli:
                if n % m == 0 and m != n:
                    report.add(n, f"coherence[{tag}] mod {m}", value[n] % m, value[m])
        pieces = _split(X)
        if pieces is not None:
            a, b = (set_size(P, q) for P in pieces)
            for n in moduli:
                report.add(n, f"additivity[{tag}]", size % n, (a + b) % n)
        if isinstance(X, FormulaSet) and len(X.free) == 1:
            for n in moduli:
                report.add(n, f"parity-unique[{tag}]", _parity_classes(X, q, n), 1)
    for (X, sx), (Y, sy) in zip(zip(sets, sizes), list(zip(sets, sizes))[1:]):
        XY = _product(X, Y)
        if XY is None:
            continue
        sxy = set_size(XY, q)
        for n in moduli:
            report.add(n, f"multiplicativity[{_label(X)} x {_label(Y)}]", sxy % n, (sx * sy) % n)
    for fib in fibrations:
        hist = fiber_histogram(fib.total, fib.projection, 1)
        sizes_seen = sorted(k for k in hist if k)
        tag = f"{_label(fib.total)} -> {','.join(fib.projection)}"
        if len(sizes_seen) > 1:
            for n in moduli:
                report.add(n, f"fibration-constant[{tag}]", sizes_seen, sizes_seen[:1], ok=False)
            continue
        r = sizes_seen[0] if sizes_seen else 0
        image = sum(v for k, v in hist.items() if k)
        total = count_points(fib.total, 1)
        for n in moduli:
            report.add(n, f"strong-fibration[{tag}]", total % n, (r * image) % n)
    return report


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VandermondeResult:
    classes: dict[int, int]
    total: int

    def at(self, moduli: Iterable[int]) -> dict[int, EulerValue]:
        return {k: EulerValue.from_integer(v, moduli) for k, v in self.classes.items()}


def vandermonde_decompose(hist: Mapping[int, int] | None, n_powers: Sequence[int]) -> VandermondeResult:
    """Solve sum_k x_k k^n = chi(Y_n), n = 1..m, for the fiber-size classes.

    n_powers[n-1] is the size of the n-fold fiber power Y_n.  The m x m
    system over fiber sizes 1..m is solved exactly over Q.  When hist (fiber
    size -> number of base points) is given, the solution must match it.
    """
    m = len(n_powers)
    if m == 0:
        raise SingularSystem("need at least one fiber power")
    rows = [[Fraction(k) ** n for k in range(1, m + 1)] + [Fraction(n_powers[n - 1])] for n in range(1, m + 1)]
    for c in range(m):
        piv = next((r for r in range(c, m) if rows[r][c] != 0), None)
        if piv is None:
            raise SingularSystem("Vandermonde system is singular")
        rows[c], rows[piv] = rows[piv], rows[c]
        lead = rows[c][c]
        rows[c] = [v / lead for v in rows[c]]
        for r in range(m):
            if r != c and rows[r][c] != 0:
                f = rows[r][c]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[c])]
    sol = [rows[k][m] for k in range(m)]
    if any(v.denominator != 1 or v < 0 for v in sol):
        raise SingularSystem(f"fiber-power counts are inconsistent: solution {[str(v) for v in sol]}")
    classes = {k + 1: int(v) for k, v in enumerate(sol) if v}
    if hist is not None:
        direct = {k: v for k, v in hist.items() if k and v}
        if max(direct, default=0) > m:
            raise SingularSystem(f"fiber size {max(direct)} exceeds the {m} powers supplied")
        if direct != classes:
            raise SingularSystem(f"decomposition {classes} disagrees with direct histogram {direct}")
    return VandermondeResult(classes, sum(classes.values()))
