"""Multivariate polynomials with exact rational coefficients.

The symbolic workhorse of the package.  A Polynomial is a sparse map from
exponent tuples to nonzero rational coefficients; variables are positional
(index 0..nvars-1) and print as x1..xn.  Instances are treated as immutable:
no method mutates self, and the terms dict must not be modified after
construction.
"""

from __future__ import annotations

import operator
import re
from dataclasses import dataclass
from itertools import combinations_with_replacement

from .rational import Rat, rat


class Polynomial:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        clean = {}
        if terms:
            for exps, coeff in terms.items():
                if len(exps) != nvars:
                    raise ValueError("exponent tuple %r has wrong length" % (exps,))
                coeff = rat(coeff)
                if coeff != 0:
                    clean[tuple(exps)] = coeff
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(nvars: int) -> "Polynomial":
        return Polynomial(nvars)

    @staticmethod
    def constant(value, nvars: int) -> "Polynomial":
        return Polynomial(nvars, {(0,) * nvars: rat(value)})

    @staticmethod
    def variable(index: int, nvars: int) -> "Polynomial":
        if not 0 <= index < nvars:
            raise ValueError("variable index %d out of range for %d vars" % (index, nvars))
        exps = tuple(1 if i == index else 0 for i in range(nvars))
        return Polynomial(nvars, {exps: Rat(1)})

    @staticmethod
    def monomial(exps, coeff=1) -> "Polynomial":
        exps = tuple(exps)
        return Polynomial(len(exps), {exps: rat(coeff)})

    # -- predicates / views ------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    @property
    def is_constant(self) -> bool:
        return all(all(e == 0 for e in exps) for exps in self.terms)

    def constant_value(self) -> Rat:
        """The value of a constant polynomial (raises if nonconstant)."""
        if not self.is_constant:
            raise ValueError("polynomial %s is not constant" % self)
        return self.terms.get((0,) * self.nvars, Rat(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def coefficient(self, exps) -> Rat:
        return self.terms.get(tuple(exps), Rat(0))

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self.terms == other.terms
        return NotImplemented

    __hash__ = None

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: "Polynomial"):
        if self.nvars != other.nvars:
            raise ValueError("mixing polynomials in %d and %d variables" % (self.nvars, other.nvars))

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other, self.nvars)
        self._check(other)
        out = dict(self.terms)
        for exps, c in other.terms.items():
            acc = out.get(exps)
            if acc is None:
                out[exps] = c
            else:
                acc = acc + c
                if acc == 0:
                    del out[exps]
                else:
                    out[exps] = acc
        p = Polynomial.__new__(Polynomial)
        p.nvars, p.terms = self.nvars, out
        return p

    __radd__ = __add__

    def __neg__(self):
        p = Polynomial.__new__(Polynomial)
        p.nvars = self.nvars
        p.terms = {e: -c for e, c in self.terms.items()}
        return p

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other, self.nvars)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = rat(other)
            if c == 0:
                return Polynomial.zero(self.nvars)
            p = Polynomial.__new__(Polynomial)
            p.nvars = self.nvars
            p.terms = {e: c * v for e, v in self.terms.items()}
            return p
        self._check(other)
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                key = tuple(map(operator.add, ea, eb))
                acc = out.get(key)
                if acc is None:
                    out[key] = ca * cb
                else:
                    acc = acc + ca * cb
                    if acc == 0:
                        del out[key]
                    else:
                        out[key] = acc
        p = Polynomial.__new__(Polynomial)
        p.nvars, p.terms = self.nvars, out
        return p

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Division by a nonzero scalar or a nonzero *constant* polynomial."""
        if isinstance(other, Polynomial):
            other = other.constant_value()
        return self * (1 / rat(other))

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(1, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base_needed = k >> 1
            if base_needed:
                base = base * base
            k = base_needed
        return result

    # -- calculus -----------------------------------------------------------

    def diff(self, index: int) -> "Polynomial":
        """Partial derivative with respect to variable ``index``."""
        out = {}
        for exps, c in self.terms.items():
            e = exps[index]
            if e:
                key = exps[:index] + (e - 1,) + exps[index + 1:]
                out[key] = out.get(key, Rat(0)) + c * e
        p = Polynomial.__new__(Polynomial)
        p.nvars = self.nvars
        p.terms = {e: c for e, c in out.items() if c != 0}
        return p

    def evaluate(self, point) -> Rat:
        """Value at a point of rationals (exact)."""
        point = [rat(x) for x in point]
        if len(point) != self.nvars:
            raise ValueError("point has wrong dimension")
        total = Rat(0)
        for exps, c in self.terms.items():
            v = c
            for x, e in zip(point, exps):
                if e:
                    v = v * x**e
            total += v
        return total

    def subs(self, values) -> "Polynomial":
        """Substitute a Polynomial (or scalar) for every variable.

        All Polynomial values must share one variable count m; the result is a
        polynomial in those m variables.
        """
        values = list(values)
        if len(values) != self.nvars:
            raise ValueError("need one value per variable")
        m = None
        for v in values:
            if isinstance(v, Polynomial):
                if m is not None and v.nvars != m:
                    raise ValueError("substituted polynomials disagree on nvars")
                m = v.nvars
        if m is None:
            raise ValueError("use evaluate() for an all-scalar substitution")
        polys = [v if isinstance(v, Polynomial) else Polynomial.constant(v, m) for v in values]
        cache = {}

        def power(i, e):
            got = cache.get((i, e))
            if got is None:
                got = polys[i] ** e
                cache[(i, e)] = got
            return got

        total = Polynomial.zero(m)
        for exps, c in self.terms.items():
            term = Polynomial.constant(c, m)
            for i, e in enumerate(exps):
                if e:
                    term = term * power(i, e)
            total = total + term
        return total

    # -- variable bookkeeping ------------------------------------------------

    def pad(self, nvars: int) -> "Polynomial":
        """Reinterpret in a larger variable set (new trailing variables)."""
        if nvars < self.nvars:
            raise ValueError("pad cannot shrink")
        extra = (0,) * (nvars - self.nvars)
        p = Polynomial.__new__(Polynomial)
        p.nvars = nvars
        p.terms = {e + extra: c for e, c in self.terms.items()}
        return p

    def truncate(self, nvars: int) -> "Polynomial":
        """Drop trailing variables, which must not occur in any term."""
        out = {}
        for exps, c in self.terms.items():
            if any(exps[nvars:]):
                raise ValueError("variable beyond %d occurs in %s" % (nvars, self))
            out[exps[:nvars]] = c
        p = Polynomial.__new__(Polynomial)
        p.nvars, p.terms = nvars, out
        return p

    def coeff_of(self, index: int, power: int) -> "Polynomial":
        """The coefficient of (variable index)**power, a polynomial with that
        variable absent (exponent slot kept, set to zero)."""
        out = {}
        for exps, c in self.terms.items():
            if exps[index] == power:
                out[exps[:index] + (0,) + exps[index + 1:]] = c
        p = Polynomial.__new__(Polynomial)
        p.nvars, p.terms = self.nvars, out
        return p

    # -- printing / parsing ---------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-e for e in t[0])))
        pieces = []
        for exps, c in items:
            factors = []
            for i, e in enumerate(exps):
                if e == 1:
                    factors.append("x%d" % (i + 1))
                elif e > 1:
                    factors.append("x%d^%d" % (i + 1, e))
            body = "*".join(factors)
            mag = c if c > 0 else -c
            if body and mag == 1:
                text = body
            elif body:
                text = "%s*%s" % (mag, body)
            else:
                text = str(mag)
            sign = "-" if c < 0 else "+"
            pieces.append((sign, text))
        first_sign, first = pieces[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, text in pieces[1:]:
            out += " %s %s" % (sign, text)
        return out

    def __repr__(self) -> str:
        return "Polynomial(%r)" % str(self)

    @staticmethod
    def parse(text: str, nvars: int) -> "Polynomial":
        return _parse_polynomial(text, nvars)


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|(x\d+)|([+\-*^()]))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            rest = text[pos:].strip()
            if not rest:
                break
            raise ValueError("cannot tokenize polynomial at %r" % rest[:20])
        num, name, op = m.groups()
        if num:
            tokens.append(("num", rat(num)))
        elif name:
            tokens.append(("var", int(name[1:]) - 1))
        else:
            tokens.append((op, op))
        pos = m.end()
    return tokens


def _parse_polynomial(text: str, nvars: int) -> Polynomial:
    """Recursive-descent parser for the format __str__ emits.

    Grammar: sums/differences of terms, terms are '*'-joined factors, factors
    are rationals ("3", "1/2"), variables ("x1"), parenthesized expressions,
    optionally raised to a nonnegative integer power with '^'.
    """
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos][0] if pos < len(tokens) else None

    def take(kind=None):
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError("unexpected end of polynomial %r" % text)
        tok = tokens[pos]
        if kind and tok[0] != kind:
            raise ValueError("expected %s at token %d of %r" % (kind, pos, text))
        pos += 1
        return tok

    def parse_expr():
        sign = Rat(1)
        while peek() in ("+", "-"):
            if take()[0] == "-":
                sign = -sign
        total = parse_term() * sign
        while peek() in ("+", "-"):
            op = take()[0]
            term = parse_term()
            total = total + term if op == "+" else total - term
        return total

    def parse_term():
        out = parse_factor()
        while peek() == "*":
            take()
            out = out * parse_factor()
        return out

    def parse_factor():
        base = parse_atom()
        if peek() == "^":
            take()
            kind, value = take("num")
            if value.denominator != 1 or value < 0:
                raise ValueError("exponent must be a nonnegative integer")
            base = base ** int(value)
        return base

    def parse_atom():
        kind = peek()
        if kind == "num":
            return Polynomial.constant(take()[1], nvars)
        if kind == "var":
            index = take()[1]
            if index >= nvars:
                raise ValueError("variable x%d exceeds declared dimension %d" % (index + 1, nvars))
            return Polynomial.variable(index, nvars)
        if kind == "(":
            take()
            inner = parse_expr()
            take(")")
            return inner
        if kind == "-":
            take()
            return -parse_atom()
        raise ValueError("unexpected token in polynomial %r" % text)

    result = parse_expr()
    if pos != len(tokens):
        raise ValueError("trailing tokens in polynomial %r" % text)
    return result


# -- polynomial maps ----------------------------------------------------------


@dataclass(frozen=True, eq=True)
class PolyMap:
    """A polynomial map between coordinate spaces, one Polynomial per target
    coordinate, each in source_dim variables."""

    source_dim: int
    components: tuple

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        for comp in self.components:
            if not isinstance(comp, Polynomial) or comp.nvars != self.source_dim:
                raise ValueError("components must be polynomials in %d variables" % self.source_dim)

    __hash__ = None

    @property
    def target_dim(self) -> int:
        return len(self.components)

    @staticmethod
    def identity(n: int) -> "PolyMap":
        return PolyMap(n, tuple(Polynomial.variable(i, n) for i in range(n)))

    @staticmethod
    def linear(matrix) -> "PolyMap":
        """The map p -> matrix @ p."""
        rows = [list(r) for r in matrix]
        n = len(rows[0]) if rows else 0
        comps = []
        for row in rows:
            comp = Polynomial.zero(n)
            for j, c in enumerate(row):
                comp = comp + Polynomial.variable(j, n) * rat(c)
            comps.append(comp)
        return PolyMap(n, tuple(comps))

    @staticmethod
    def parse(strings, source_dim: int) -> "PolyMap":
        return PolyMap(source_dim, tuple(Polynomial.parse(s, source_dim) for s in strings))

    def __call__(self, point):
        return tuple(comp.evaluate(point) for comp in self.components)

    def compose(self, inner: "PolyMap") -> "PolyMap":
        """self after inner."""
        if inner.target_dim != self.source_dim:
            raise ValueError("composition dimension mismatch")
        comps = tuple(comp.subs(inner.components) for comp in self.components)
        return PolyMap(inner.source_dim, comps)

    def jacobian(self):
        """Matrix of partials d(component_i)/d(x_j), entries Polynomial."""
        return tuple(
            tuple(comp.diff(j) for j in range(self.source_dim)) for comp in self.components
        )


@dataclass(frozen=True, eq=True)
class PolyVectorField:
    """A vector field on coordinate space with polynomial components."""

    components: tuple

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        n = len(self.components)
        for comp in self.components:
            if not isinstance(comp, Polynomial) or comp.nvars != n:
                raise ValueError("field components must be polynomials in %d variables" % n)

    __hash__ = None

    @property
    def nvars(self) -> int:
        return len(self.components)

    def apply(self, u: Polynomial) -> Polynomial:
        """Directional derivative of a scalar: sum_a comp_a * du/dx_a."""
        out = Polynomial.zero(self.nvars)
        for a, comp in enumerate(self.components):
            if comp:
                out = out + comp * u.diff(a)
        return out

    def bracket(self, other: "PolyVectorField") -> "PolyVectorField":
        """Commutator [self, other] of vector fields."""
        n = self.nvars
        comps = []
        for c in range(n):
            acc = Polynomial.zero(n)
            for a in range(n):
                if self.components[a]:
                    acc = acc + self.components[a] * other.components[c].diff(a)
                if other.components[a]:
                    acc = acc - other.components[a] * self.components[c].diff(a)
            comps.append(acc)
        return PolyVectorField(tuple(comps))


# -- matrices with polynomial entries -----------------------------------------


def poly_matrix(rows) -> tuple:
    return tuple(tuple(row) for row in rows)


def const_poly_matrix(matrix, nvars: int) -> tuple:
    return tuple(tuple(Polynomial.constant(c, nvars) for c in row) for row in matrix)


def poly_mat_mul(a, b) -> tuple:
    bt = tuple(zip(*b))
    out = []
    for row in a:
        out_row = []
        for col in bt:
            acc = None
            for x, y in zip(row, col):
                if x and y:
                    acc = x * y if acc is None else acc + x * y
            if acc is None:
                acc = Polynomial.zero(row[0].nvars)
            out_row.append(acc)
        out.append(tuple(out_row))
    return tuple(out)


def poly_mat_vec(a, v) -> tuple:
    out = []
    for row in a:
        acc = Polynomial.zero(row[0].nvars)
        for x, y in zip(row, v):
            term = x * y
            if term:
                acc = acc + term
        out.append(acc)
    return tuple(out)


def poly_mat_eval(a, point) -> tuple:
    return tuple(tuple(entry.evaluate(point) for entry in row) for row in a)


def monomials_up_to(nvars: int, degree: int):
    """All monomial Polynomials of total degree <= degree (including 1)."""
    out = [Polynomial.constant(1, nvars)]
    for d in range(1, degree + 1):
        for combo in combinations_with_replacement(range(nvars), d):
            exps = [0] * nvars
            for i in combo:
                exps[i] += 1
            out.append(Polynomial.monomial(exps))
    return out
