"""Formulas of the periodic-field language with parity quantifiers.

Concrete syntax::

    mu[5,2] x:K1. x = x
    5 != 0 & forall x:K4. (x^5 = 1 -> s(x) = x^2)

Sorts K_m are realized as the fixed field of sigma^m inside one tower
F_{q^N}, where N is the lcm of every sort the formula mentions.  The
evaluator enumerates sorts, except where a quantified variable is
guarded by a polynomial equation in that variable alone; then only the
roots of the guard are visited.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass
from math import lcm
from typing import Iterable, Mapping, Sequence, Union

from .config import enumeration_bound
from .errors import FormulaSyntaxError, SortError, TooLarge, UnboundVariable
from .gf import FieldPoly, FieldSpec, prime_power, make_tower

# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class Add:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Sub:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Mul:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Neg:
    arg: "Term"


@dataclass(frozen=True)
class Pow:
    base: "Term"
    exp: int


@dataclass(frozen=True)
class Sigma:
    """sigma^j applied to a term; j = -1 is sigma inverse."""

    arg: "Term"
    j: int = 1


Term = Union[Var, Const, Add, Sub, Mul, Neg, Pow, Sigma]


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    sort: int
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    sort: int
    body: "Formula"


@dataclass(frozen=True)
class Parity:
    """mu[n,k] x:Km. body -- the number of witnesses is k mod n."""

    n: int
    k: int
    var: str
    sort: int
    body: "Formula"

    def __post_init__(self):
        if self.n < 2 or not 0 <= self.k < self.n:
            raise ValueError(f"parity quantifier needs n >= 2 and 0 <= k < n, got mu[{self.n},{self.k}]")


Formula = Union[Eq, Not, And, Or, Implies, Iff, Exists, Forall, Parity]
Quantifier = (Exists, Forall, Parity)
_BINARY = (And, Or, Implies, Iff)
_TERM_BINARY = (Add, Sub, Mul)

# ---------------------------------------------------------------------------
# structural helpers


def term_vars(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, Const):
        return set()
    if isinstance(t, _TERM_BINARY):
        return term_vars(t.left) | term_vars(t.right)
    if isinstance(t, (Neg, Sigma)):
        return term_vars(t.arg)
    if isinstance(t, Pow):
        return term_vars(t.base)
    raise TypeError(f"not a term: {t!r}")


def free_vars(f: Formula) -> set[str]:
    if isinstance(f, Eq):
        return term_vars(f.left) | term_vars(f.right)
    if isinstance(f, Not):
        return free_vars(f.arg)
    if isinstance(f, _BINARY):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, Quantifier):
        return free_vars(f.body) - {f.var}
    raise TypeError(f"not a formula: {f!r}")


def sorts_used(f: Formula) -> set[int]:
    if isinstance(f, Eq):
        return set()
    if isinstance(f, Not):
        return sorts_used(f.arg)
    if isinstance(f, _BINARY):
        return sorts_used(f.left) | sorts_used(f.right)
    if isinstance(f, Quantifier):
        return {f.sort} | sorts_used(f.body)
    raise TypeError(f"not a formula: {f!r}")


def _map_terms(f: Formula, fn) -> Formula:
    if isinstance(f, Eq):
        return Eq(fn(f.left), fn(f.right))
    if isinstance(f, Not):
        return Not(_map_terms(f.arg, fn))
    if isinstance(f, _BINARY):
        return type(f)(_map_terms(f.left, fn), _map_terms(f.right, fn))
    if isinstance(f, Parity):
        return Parity(f.n, f.k, f.var, f.sort, _map_terms(f.body, fn))
    if isinstance(f, (Exists, Forall)):
        return type(f)(f.var, f.sort, _map_terms(f.body, fn))
    raise TypeError(f"not a formula: {f!r}")


def _invert_sigma(t: Term) -> Term:
    if isinstance(t, Sigma):
        return Sigma(_invert_sigma(t.arg), -t.j)
    if isinstance(t, _TERM_BINARY):
        return type(t)(_invert_sigma(t.left), _invert_sigma(t.right))
    if isinstance(t, Neg):
        return Neg(_invert_sigma(t.arg))
    if isinstance(t, Pow):
        return Pow(_invert_sigma(t.base), t.exp)
    return t


def invert_sigma(f: Formula) -> Formula:
    """Replace sigma by sigma^-1 throughout (s <-> s_inv)."""
    return _map_terms(f, _invert_sigma)


def _rename_term(t: Term, old: str, new: str) -> Term:
    if isinstance(t, Var):
        return Var(new) if t.name == old else t
    if isinstance(t, _TERM_BINARY):
        return type(t)(_rename_term(t.left, old, new), _rename_term(t.right, old, new))
    if isinstance(t, (Neg,)):
        return Neg(_rename_term(t.arg, old, new))
    if isinstance(t, Sigma):
        return Sigma(_rename_term(t.arg, old, new), t.j)
    if isinstance(t, Pow):
        return Pow(_rename_term(t.base, old, new), t.exp)
    return t


def rename_free(f: Formula, old: str, new: str) -> Formula:
    """Substitute variable new for free occurrences of old (new must be fresh)."""
    if isinstance(f, Eq):
        return Eq(_rename_term(f.left, old, new), _rename_term(f.right, old, new))
    if isinstance(f, Not):
        return Not(rename_free(f.arg, old, new))
    if isinstance(f, _BINARY):
        return type(f)(rename_free(f.left, old, new), rename_free(f.right, old, new))
    if isinstance(f, Quantifier):
        if f.var == old:
            return f
        body = rename_free(f.body, old, new)
        if isinstance(f, Parity):
            return Parity(f.n, f.k, f.var, f.sort, body)
        return type(f)(f.var, f.sort, body)
    raise TypeError(f"not a formula: {f!r}")


def rename_bound(f: Formula, old: str, new: str) -> Formula:
    """Alpha-rename every quantifier binding old to new."""
    if isinstance(f, Eq):
        return f
    if isinstance(f, Not):
        return Not(rename_bound(f.arg, old, new))
    if isinstance(f, _BINARY):
        return type(f)(rename_bound(f.left, old, new), rename_bound(f.right, old, new))
    if isinstance(f, Quantifier):
        body = rename_bound(f.body, old, new)
        var = f.var
        if var == old:
            body = rename_free(body, old, new)
            var = new
        if isinstance(f, Parity):
            return Parity(f.n, f.k, var, f.sort, body)
        return type(f)(var, f.sort, body)
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# rendering

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_OPS = {Iff: "<->", Implies: "->", Or: "|", And: "&"}


def render_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const):
        return str(t.value) if t.value >= 0 else f"-{-t.value}"
    if isinstance(t, Add):
        return f"{_term_child(t.left, 1)} + {_term_child(t.right, 2)}"
    if isinstance(t, Sub):
        return f"{_term_child(t.left, 1)} - {_term_child(t.right, 2)}"
    if isinstance(t, Mul):
        return f"{_term_child(t.left, 2)}*{_term_child(t.right, 3)}"
    if isinstance(t, Neg):
        return f"-{_term_child(t.arg, 3)}"
    if isinstance(t, Pow):
        return f"{_term_child(t.base, 4)}^{t.exp}"
    if isinstance(t, Sigma):
        if t.j == -1:
            return f"s_inv({render_term(t.arg)})"
        if t.j >= 1:
            inner = render_term(t.arg)
            for _ in range(t.j):
                inner = f"s({inner})"
            return inner
        raise ValueError(f"cannot render sigma^{t.j}")
    raise TypeError(f"not a term: {t!r}")


def _term_level(t: Term) -> int:
    if isinstance(t, (Add, Sub)):
        return 1
    if isinstance(t, Mul):
        return 2
    if isinstance(t, Neg) or (isinstance(t, Const) and t.value < 0):
        return 3
    if isinstance(t, Pow):
        return 4
    return 5


def _term_child(t: Term, need: int) -> str:
    s = render_term(t)
    return s if _term_level(t) >= need else f"({s})"


def render(f: Formula) -> str:
    """Concrete syntax that parses back to an equal AST."""
    if isinstance(f, Eq):
        return f"{render_term(f.left)} = {render_term(f.right)}"
    if isinstance(f, Not):
        if isinstance(f.arg, Eq):
            return f"{render_term(f.arg.left)} != {render_term(f.arg.right)}"
        return f"!{_formula_child(f.arg, tight=True)}"
    if isinstance(f, _BINARY):
        return f"{_formula_child(f.left)} {_OPS[type(f)]} {_formula_child(f.right)}"
    if isinstance(f, Parity):
        return f"mu[{f.n},{f.k}] {f.var}:K{f.sort}. {render(f.body)}"
    if isinstance(f, Exists):
        return f"exists {f.var}:K{f.sort}. {render(f.body)}"
    if isinstance(f, Forall):
        return f"forall {f.var}:K{f.sort}. {render(f.body)}"
    raise TypeError(f"not a formula: {f!r}")


def _formula_child(f: Formula, tight: bool = False) -> str:
    s = render(f)
    if isinstance(f, Eq) and not tight:
        return s
    if isinstance(f, Not) and isinstance(f.arg, Eq):
        return s if not tight else f"({s})"
    return f"({s})"


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)|(?P<op><->|->|!=|[!&|=()+\-*^:.,\[\]]))"
)
_SORT = re.compile(r"K([1-9]\d*)$")
_KEYWORDS = {"exists", "forall", "mu", "s", "s_inv"}


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append(_Tok(kind, m.group(kind), start))
        pos = m.end()
    toks.append(_Tok("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    # token helpers
    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def peek(self, offset: int = 1) -> _Tok:
        return self.toks[min(self.i + offset, len(self.toks) - 1)]

    def error(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.tok
        raise FormulaSyntaxError(msg, tok.pos, self.text)

    def accept(self, text: str) -> bool:
        if self.tok.kind in ("op", "ident") and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str):
        if not self.accept(text):
            shown = self.tok.text or "end of input"
            self.error(f"expected {text!r}, found {shown!r}")

    def expect_int(self) -> int:
        if self.tok.kind != "int":
            self.error("expected an integer")
        v = int(self.tok.text)
        self.i += 1
        return v

    # formulas
    def parse(self) -> Formula:
        f = self.formula()
        if self.tok.kind != "eof":
            self.error(f"unexpected {self.tok.text!r}")
        return f

    def formula(self) -> Formula:
        if self._at_quantifier():
            return self.quant()
        return self.iff()

    def _at_quantifier(self) -> bool:
        t = self.tok
        if t.kind != "ident":
            return False
        if t.text in ("exists", "forall"):
            return self.peek().kind == "ident"
        return t.text == "mu" and self.peek().text == "["

    def quant(self) -> Formula:
        t = self.tok
        self.i += 1
        n = k = None
        if t.text == "mu":
            self.expect("[")
            n = self.expect_int()
            self.expect(",")
            k = self.expect_int()
            self.expect("]")
            if n < 2 or not 0 <= k < n:
                self.error(f"parity quantifier needs n >= 2 and 0 <= k < n, got mu[{n},{k}]", t)
        var = self.var_name()
        self.expect(":")
        sort = self.sort()
        self.expect(".")
        body = self.formula()
        if t.text == "exists":
            return Exists(var, sort, body)
        if t.text == "forall":
            return Forall(var, sort, body)
        return Parity(n, k, var, sort, body)

    def var_name(self) -> str:
        t = self.tok
        if t.kind != "ident" or t.text in _KEYWORDS:
            self.error("expected a variable name")
        self.i += 1
        return t.text

    def sort(self) -> int:
        t = self.tok
        if t.kind == "ident":
            m = _SORT.match(t.text)
            if m:
                self.i += 1
                return int(m.group(1))
        if t.kind in ("ident", "int"):
            raise SortError(f"malformed sort {t.text!r} at position {t.pos}; expected K<positive int>")
        self.error("expected a sort such as K1")

    def iff(self) -> Formula:
        f = self.impl()
        while self.accept("<->"):
            f = Iff(f, self.impl())
        return f

    def impl(self) -> Formula:
        f = self.disj()
        if self.accept("->"):
            return Implies(f, self.impl())
        return f

    def disj(self) -> Formula:
        f = self.conj()
        while self.accept("|"):
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.neg()
        while self.accept("&"):
            f = And(f, self.neg())
        return f

    def neg(self) -> Formula:
        if self.accept("!"):
            return Not(self.neg())
        if self._at_quantifier():
            return self.quant()
        return self.atom()

    def atom(self) -> Formula:
        if self.tok.text == "(" and self.tok.kind == "op":
            save = self.i
            try:
                left = self.term()
                if self.tok.text in ("=", "!="):
                    return self.relation(left)
            except FormulaSyntaxError:
                pass
            self.i = save
            self.expect("(")
            f = self.formula()
            self.expect(")")
            return f
        left = self.term()
        return self.relation(left)

    def relation(self, left: Term) -> Formula:
        if self.accept("="):
            return Eq(left, self.term())
        if self.accept("!="):
            return Not(Eq(left, self.term()))
        self.error("expected '=' or '!='")

    # terms
    def term(self) -> Term:
        t = self.product()
        while True:
            if self.accept("+"):
                t = Add(t, self.product())
            elif self.accept("-"):
                t = Sub(t, self.product())
            else:
                return t

    def product(self) -> Term:
        t = self.unary()
        while self.accept("*"):
            t = Mul(t, self.unary())
        return t

    def unary(self) -> Term:
        if self.accept("-"):
            return Neg(self.unary())
        return self.power()

    def power(self) -> Term:
        t = self.primary()
        while self.accept("^"):
            e = self.expect_int()
            if e < 1:
                self.error("exponent must be a positive integer")
            t = Pow(t, e)
        return t

    def primary(self) -> Term:
        t = self.tok
        if t.kind == "int":
            self.i += 1
            return Const(int(t.text))
        if t.kind == "ident" and t.text in ("s", "s_inv") and self.peek().text == "(":
            self.i += 2
            arg = self.term()
            self.expect(")")
            return Sigma(arg, 1 if t.text == "s" else -1)
        if t.kind == "ident" and t.text not in _KEYWORDS:
            self.i += 1
            return Var(t.text)
        if self.accept("("):
            inner = self.term()
            self.expect(")")
            return inner
        self.error(f"expected a term, found {t.text or 'end of input'!r}")


def parse(text: str) -> Formula:
    """Parse concrete syntax into a Formula."""
    return _Parser(text).parse()


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    if p.tok.kind != "eof":
        p.error(f"unexpected {p.tok.text!r}")
    return t


def parse_free_vars(items: Iterable[str | tuple[str, int]]) -> list[tuple[str, int]]:
    """Accept "x:K1" strings or (name, sort) pairs."""
    out = []
    for item in items:
        if isinstance(item, tuple):
            name, sort = item
        else:
            name, _, s = item.partition(":")
            name = name.strip()
            m = _SORT.match(s.strip())
            if not m:
                raise SortError(f"malformed free variable {item!r}; expected name:K<m>")
            sort = int(m.group(1))
        if sort < 1:
            raise SortError(f"sort index must be positive: {item!r}")
        out.append((name, int(sort)))
    return out


# ---------------------------------------------------------------------------
# evaluation


class Model:
    """Fr^q truncated to the tower F_{q^N}."""

    def __init__(self, q: int, N: int = 1, bound: int | None = None):
        p, k = prime_power(q)
        self.q = q
        self.F: FieldSpec = make_tower(p, k, N, check_size=False)
        self.P = FieldPoly(self.F)
        self.bound = enumeration_bound() if bound is None else bound
        self._sorts: dict[int, list[int]] = {}
        self.rng = random.Random(0x5EED)

    @classmethod
    def for_formula(cls, f: Formula, q: int, extra_sorts: Iterable[int] = (), bound: int | None = None):
        sorts = sorts_used(f) | set(extra_sorts) | {1}
        return cls(q, lcm(*sorts), bound)

    @property
    def N(self) -> int:
        return self.F.N

    def sort(self, m: int) -> list[int]:
        if m not in self._sorts:
            size = self.q**m
            if size > self.bound:
                raise TooLarge(f"quantifier over K{m} needs {size} candidates, bound is {self.bound}")
            self._sorts[m] = self.F.enumerate_sort(m, bound=self.bound)
        return self._sorts[m]

    # -- terms -----------------------------------------------------------
    def term(self, t: Term, env: Mapping[str, int]) -> int:
        F = self.F
        if isinstance(t, Var):
            try:
                return env[t.name]
            except KeyError:
                raise UnboundVariable(f"variable {t.name!r} is not bound") from None
        if isinstance(t, Const):
            return F.from_int(t.value)
        if isinstance(t, Add):
            return F.add(self.term(t.left, env), self.term(t.right, env))
        if isinstance(t, Sub):
            return F.sub(self.term(t.left, env), self.term(t.right, env))
        if isinstance(t, Mul):
            return F.mul(self.term(t.left, env), self.term(t.right, env))
        if isinstance(t, Neg):
            return F.neg(self.term(t.arg, env))
        if isinstance(t, Pow):
            return F.pow(self.term(t.base, env), t.exp)
        if isinstance(t, Sigma):
            return F.frobenius(self.term(t.arg, env), t.j)
        raise TypeError(f"not a term: {t!r}")

    def _term_poly(self, t: Term, var: str, env: Mapping[str, int]):
        """t as a polynomial in var over the tower, or None if sigma touches var."""
        if var not in term_vars(t):
            return self.P.trim([self.term(t, env)])
        P = self.P
        if isinstance(t, Var):
            return [0, 1]
        if isinstance(t, (Add, Sub, Mul)):
            a = self._term_poly(t.left, var, env)
            b = self._term_poly(t.right, var, env)
            if a is None or b is None:
                return None
            return {Add: P.add, Sub: P.sub, Mul: P.mul}[type(t)](a, b)
        if isinstance(t, Neg):
            a = self._term_poly(t.arg, var, env)
            return None if a is None else P.sub([], a)
        if isinstance(t, Pow):
            a = self._term_poly(t.base, var, env)
            if a is None or (len(a) - 1) * t.exp > 4096:
                return None
            out = [1]
            for _ in range(t.exp):
                out = P.mul(out, a)
            return out
        return None

    # -- formulas ----------------------------------------------------------
    def holds(self, f: Formula, env: Mapping[str, int]) -> bool:
        if isinstance(f, Eq):
            return self.term(f.left, env) == self.term(f.right, env)
        if isinstance(f, Not):
            return not self.holds(f.arg, env)
        if isinstance(f, And):
            return self.holds(f.left, env) and self.holds(f.right, env)
        if isinstance(f, Or):
            return self.holds(f.left, env) or self.holds(f.right, env)
        if isinstance(f, Implies):
            return (not self.holds(f.left, env)) or self.holds(f.right, env)
        if isinstance(f, Iff):
            return self.holds(f.left, env) == self.holds(f.right, env)
        if isinstance(f, Exists):
            return self.exists(f.var, f.sort, f.body, env)
        if isinstance(f, Forall):
            return not self.exists(f.var, f.sort, Not(f.body), env)
        if isinstance(f, Parity):
            return self.count(f.var, f.sort, f.body, env) % f.n == f.k
        raise TypeError(f"not a formula: {f!r}")

    def _guard(self, var: str, m: int, body: Formula, env: Mapping[str, int]):
        """Find an equation in var alone that decides body off its root set.

        Returns (roots, value_off_roots) or None.
        """
        if m > self.N or self.N % m:
            raise SortError(f"K{m} is not a sort of the tower of degree {self.N}")
        for atom in _skeleton_atoms(body):
            if var not in free_vars(atom):
                continue
            poly = self._term_poly(Sub(atom.left, atom.right), var, env)
            if poly is None or not poly:
                continue
            off = self._three_valued(body, atom, var, env)
            if off is None:
                continue
            return self.P.roots_in_sort(poly, m, self.rng), off
        return None

    def _three_valued(self, f: Formula, atom: Eq, var: str, env):
        """Truth value of f when atom is false, or None if it still depends on var."""
        if f == atom:
            return False
        if var not in free_vars(f):
            return self.holds(f, env)
        if isinstance(f, Not):
            v = self._three_valued(f.arg, atom, var, env)
            return None if v is None else not v
        if isinstance(f, (And, Or, Implies, Iff)):
            a = self._three_valued(f.left, atom, var, env)
            if isinstance(f, And) and a is False:
                return False
            if isinstance(f, Or) and a is True:
                return True
            if isinstance(f, Implies) and a is False:
                return True
            b = self._three_valued(f.right, atom, var, env)
            if isinstance(f, And):
                return False if b is False else (True if a is True and b is True else None)
            if isinstance(f, Or):
                return True if b is True else (False if a is False and b is False else None)
            if isinstance(f, Implies):
                return True if b is True else (False if a is True and b is False else None)
            return None if a is None or b is None else a == b
        return None

    def count(self, var: str, m: int, body: Formula, env: Mapping[str, int]) -> int:
        """|{a in K_m : body(a)}|."""
        env = dict(env)
        guard = self._guard(var, m, body, env)
        if guard is not None:
            roots, off = guard
            total = (self.q**m - len(roots)) if off else 0
            for a in roots:
                env[var] = a
                total += self.holds(body, env)
            return total
        total = 0
        for a in self.sort(m):
            env[var] = a
            total += self.holds(body, env)
        return total

    def exists(self, var: str, m: int, body: Formula, env: Mapping[str, int]) -> bool:
        env = dict(env)
        guard = self._guard(var, m, body, env)
        if guard is not None:
            roots, off = guard
            if off and self.q**m > len(roots):
                return True
            candidates = roots
        else:
            candidates = self.sort(m)
        for a in candidates:
            env[var] = a
            if self.holds(body, env):
                return True
        return False

    def count_tuples(self, f: Formula, free: Sequence[tuple[str, int]], env: Mapping[str, int] | None = None) -> int:
        env = dict(env or {})
        if not free:
            return int(self.holds(f, env))
        outer = free[:-1]
        enumerated = 1
        for _, m in outer:
            enumerated *= self.q**m
        if enumerated > self.bound:
            raise TooLarge(f"{enumerated} tuples exceed the enumeration bound {self.bound}")
        var, m = free[-1]
        return self._count_nested(f, list(outer), var, m, env)

    def _count_nested(self, f, outer, var, m, env):
        if not outer:
            return self.count(var, m, f, env)
        (name, sort), rest = outer[0], outer[1:]
        total = 0
        for a in self.sort(sort):
            env[name] = a
            total += self._count_nested(f, rest, var, m, env)
        del env[name]
        return total


def _skeleton_atoms(f: Formula):
    """Equations reachable through connectives only, left to right."""
    if isinstance(f, Eq):
        yield f
    elif isinstance(f, Not):
        yield from _skeleton_atoms(f.arg)
    elif isinstance(f, _BINARY):
        yield from _skeleton_atoms(f.left)
        yield from _skeleton_atoms(f.right)


def _as_formula(f: Formula | str) -> Formula:
    return parse(f) if isinstance(f, str) else f


def _check_free(f: Formula, names: Iterable[str]):
    missing = free_vars(f) - set(names)
    if missing:
        raise UnboundVariable(f"unbound variable(s): {', '.join(sorted(missing))}")


def evaluate(f: Formula | str, q: int, assignment: Mapping[str, int] | None = None,
             *, model: Model | None = None) -> bool:
    """Truth value of f in Fr^q.

    Free variables take values from assignment, as elements of the tower
    (see Model.for_formula for how the tower is chosen).
    """
    f = _as_formula(f)
    assignment = dict(assignment or {})
    _check_free(f, assignment)
    model = model or Model.for_formula(f, q)
    return model.holds(f, assignment)


def count_solutions(f: Formula | str, free_vars_: Sequence, q: int, *, model: Model | None = None) -> int:
    """Exact number of tuples over the given sorts satisfying f in Fr^q."""
    f = _as_formula(f)
    free = parse_free_vars(free_vars_)
    _check_free(f, [n for n, _ in free])
    model = model or Model.for_formula(f, q, [m for _, m in free])
    for _, m in free:
        if model.N % m:
            raise SortError(f"K{m} is not a sort of the tower of degree {model.N}")
    return model.count_tuples(f, free)


def count_mod(f: Formula | str, free_vars_: Sequence, q: int, n: int, *, model: Model | None = None) -> int:
    if n < 1:
        raise ValueError("modulus must be positive")
    return count_solutions(f, free_vars_, q, model=model) % n
