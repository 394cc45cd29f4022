"""Homogeneous polynomials in S = K[x0, x1, x2, x3].

Monomials of a fixed degree are enumerated in graded-lex order with
x0 > x1 > x2 > x3; that order indexes coefficient vectors and the rows and
columns of every multiplication matrix.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

from .exactalg import ExactMatrix, Field, MalformedInputError, QQ

NVARS = 4
VAR_NAMES = ("x0", "x1", "x2", "x3")
VAR_ALIASES = {"x": 0, "y": 1, "z": 2, "w": 3}

Monomial = tuple[int, int, int, int]


def dim_S(d: int) -> int:
    return comb(d + 3, 3) if d >= 0 else 0


@lru_cache(maxsize=None)
def monomial_basis(d: int) -> tuple[Monomial, ...]:
    if d < 0:
        return ()
    out = []
    for a in range(d, -1, -1):
        for b in range(d - a, -1, -1):
            for c in range(d - a - b, -1, -1):
                out.append((a, b, c, d - a - b - c))
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(d: int) -> dict[Monomial, int]:
    return {m: i for i, m in enumerate(monomial_basis(d))}


@lru_cache(maxsize=None)
def _shift_table(d: int, e: Monomial) -> np.ndarray:
    """Row index in S_{d+|e|} of (basis monomial of S_d) * x^e."""
    idx = monomial_index(d + sum(e))
    return np.array([idx[tuple(a + b for a, b in zip(m, e))] for m in monomial_basis(d)],
                    dtype=np.intp)


class PolySyntaxError(ValueError):
    def __init__(self, message: str, text: str, column: int):
        super().__init__(f"{message} at column {column} in {text!r}")
        self.text = text
        self.column = column
        self.reason = message


class DegreeError(ValueError):
    pass


@dataclass(frozen=True)
class HomogeneousPoly:
    field: Field
    degree: int
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != dim_S(self.degree):
            raise MalformedInputError(
                f"degree {self.degree} needs {dim_S(self.degree)} coefficients, got {len(self.coeffs)}")

    @classmethod
    def zero(cls, field: Field, degree: int) -> HomogeneousPoly:
        return cls(field, degree, (field.zero,) * dim_S(degree))

    @classmethod
    def from_terms(cls, field: Field, degree: int, terms: dict) -> HomogeneousPoly:
        idx = monomial_index(degree)
        coeffs = [field.zero] * dim_S(degree)
        for e, c in terms.items():
            if sum(e) != degree:
                raise DegreeError(f"monomial {e} is not of degree {degree}")
            coeffs[idx[tuple(e)]] = field(coeffs[idx[tuple(e)]] + field(c))
        return cls(field, degree, tuple(coeffs))

    @classmethod
    def variable(cls, field: Field, i: int) -> HomogeneousPoly:
        e = [0] * NVARS
        e[i] = 1
        return cls.from_terms(field, 1, {tuple(e): 1})

    @classmethod
    def constant(cls, field: Field, c) -> HomogeneousPoly:
        return cls(field, 0, (field(c),))

    def terms(self):
        for m, c in zip(monomial_basis(self.degree), self.coeffs):
            if c:
                yield m, c

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _check(self, other: HomogeneousPoly):
        if self.field != other.field:
            raise MalformedInputError(f"field mismatch: {self.field!r} vs {other.field!r}")

    def __add__(self, other: HomogeneousPoly) -> HomogeneousPoly:
        self._check(other)
        if self.degree != other.degree:
            if self.is_zero():
                return other
            if other.is_zero():
                return self
            raise DegreeError("cannot add forms of different degrees")
        f = self.field
        return HomogeneousPoly(f, self.degree, tuple(f(a + b) for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> HomogeneousPoly:
        f = self.field
        return HomogeneousPoly(f, self.degree, tuple(f(-a) for a in self.coeffs))

    def __sub__(self, other: HomogeneousPoly) -> HomogeneousPoly:
        return self + (-other)

    def scale(self, c) -> HomogeneousPoly:
        f = self.field
        c = f(c)
        return HomogeneousPoly(f, self.degree, tuple(f(a * c) for a in self.coeffs))

    def __mul__(self, other: HomogeneousPoly) -> HomogeneousPoly:
        return multiply(self, other)

    def __str__(self) -> str:
        return format_poly(self)


def multiply(f: HomogeneousPoly, g: HomogeneousPoly) -> HomogeneousPoly:
    f._check(g)
    field = f.field
    deg = f.degree + g.degree
    if deg < 0 or f.is_zero() or g.is_zero():
        return HomogeneousPoly.zero(field, deg)
    idx = monomial_index(deg)
    acc = [field.zero] * dim_S(deg)
    for m1, c1 in f.terms():
        for m2, c2 in g.terms():
            k = idx[(m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2], m1[3] + m2[3])]
            acc[k] = acc[k] + c1 * c2
    return HomogeneousPoly(field, deg, tuple(field(a) for a in acc))


def multiplication_matrix(f: HomogeneousPoly, source_degree: int) -> ExactMatrix:
    """Matrix of S_d -> S_{d + deg f}, p -> f*p, on the monomial bases."""
    field = f.field
    out = ExactMatrix.zeros(field, dim_S(source_degree + f.degree), dim_S(source_degree)).data.copy()
    if source_degree >= 0 and out.size:
        cols = np.arange(dim_S(source_degree))
        for e, c in f.terms():
            rows = _shift_table(source_degree, e)
            if field.dtype is object:
                out[rows, cols] = out[rows, cols] + c
            else:
                out[rows, cols] = (out[rows, cols] + c) % field.q
    return ExactMatrix(field, out)


def evaluate(f: HomogeneousPoly, point) -> object:
    field = f.field
    pt = [field(x) for x in point]
    total = field.zero
    for e, c in f.terms():
        v = c
        for x, k in zip(pt, e):
            if k:
                v = v * x ** k
        total = total + v
    return field(total)


def _fmt_coeff(field: Field, c) -> str:
    if field.dtype is object:
        return str(c)
    return str(field.signed(c))


def format_monomial(e: Monomial) -> str:
    parts = []
    for name, k in zip(VAR_NAMES, e):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def format_poly(f: HomogeneousPoly) -> str:
    """Canonical text form; monomials in graded-lex order."""
    out = []
    for e, c in f.terms():
        s = _fmt_coeff(f.field, c)
        neg = s.startswith("-")
        if neg:
            s = s[1:]
        mono = format_monomial(e)
        if not mono:
            body = s
        elif s == "1":
            body = mono
        else:
            body = f"{s}*{mono}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out) if out else "0"


_NUM = re.compile(r"\d+(?:/\d+)?")


def _parse_terms(text: str) -> list[tuple[Fraction, Monomial, int]]:
    """Return (coefficient, exponents, start column) for each term."""
    s = text
    n = len(s)
    pos = 0

    def skip_ws(p):
        while p < n and s[p].isspace():
            p += 1
        return p

    terms = []
    pos = skip_ws(pos)
    if pos == n:
        raise PolySyntaxError("empty polynomial", text, pos + 1)
    first = True
    while True:
        pos = skip_ws(pos)
        start = pos
        sign = 1
        if pos < n and s[pos] in "+-":
            sign = -1 if s[pos] == "-" else 1
            pos += 1
        elif not first:
            raise PolySyntaxError("expected '+' or '-'", text, pos + 1)
        first = False
        pos = skip_ws(pos)
        coeff = Fraction(1)
        have_factor = False
        m = _NUM.match(s, pos)
        if m:
            coeff = Fraction(m.group(0))
            pos = m.end()
            have_factor = True
        exps = [0, 0, 0, 0]
        while True:
            pos = skip_ws(pos)
            if pos < n and s[pos] == "*":
                if not have_factor:
                    raise PolySyntaxError("'*' without a left factor", text, pos + 1)
                pos = skip_ws(pos + 1)
                if pos >= n or s[pos] not in "xyzw":
                    raise PolySyntaxError("expected a variable after '*'", text, pos + 1)
            if pos >= n or s[pos] not in "xyzw":
                break
            ch = s[pos]
            pos += 1
            if ch == "x":
                q = skip_ws(pos)
                if q < n and s[q].isdigit():
                    if s[q] not in "0123":
                        raise PolySyntaxError(f"unknown variable x{s[q]}", text, pos)
                    var = int(s[q])
                    pos = q + 1
                else:
                    var = 0
            else:
                var = VAR_ALIASES[ch]
            power = 1
            q = skip_ws(pos)
            if q < n and s[q] == "^":
                q = skip_ws(q + 1)
                m = re.compile(r"\d+").match(s, q)
                if not m:
                    raise PolySyntaxError("expected an exponent after '^'", text, q + 1)
                power = int(m.group(0))
                pos = m.end()
            exps[var] += power
            have_factor = True
        if not have_factor:
            raise PolySyntaxError("expected a coefficient or variable", text, pos + 1)
        terms.append((sign * coeff, tuple(exps), start + 1))
        pos = skip_ws(pos)
        if pos == n:
            return terms


def parse_poly(text: str, field: Field = QQ, degree: int | None = None) -> HomogeneousPoly:
    """Parse the polynomial grammar; ``degree`` fixes the degree of a zero result.

    A nonzero result whose degree differs from ``degree`` raises DegreeError.
    """
    terms = _parse_terms(text)
    degs = {sum(e) for c, e, _ in terms if c != 0}
    if len(degs) > 1:
        col = next(col for c, e, col in terms if c != 0 and sum(e) != min(degs))
        raise PolySyntaxError("polynomial is not homogeneous", text, col)
    acc: dict[Monomial, object] = {}
    for c, e, _ in terms:
        if c == 0:
            continue
        acc[e] = acc.get(e, 0) + c
    acc = {e: c for e, c in acc.items() if field(c) != 0}
    if not acc:
        return HomogeneousPoly.zero(field, 0 if degree is None else degree)
    d = sum(next(iter(acc)))
    if degree is not None and d != degree:
        raise DegreeError(f"{text.strip()!r} has degree {d}, expected {degree}")
    return HomogeneousPoly.from_terms(field, d, acc)
