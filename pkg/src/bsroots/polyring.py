"""Exact homogeneous polynomials over Q.

Polynomials are sparse maps ``exponent tuple -> Fraction``.  Variables are
positional; names only matter for parsing and printing.  Monomials of a
fixed degree are enumerated in graded reverse lexicographic order (largest
first), which fixes every matrix layout built on top of this module.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, lcm
from typing import Iterable, Mapping, Sequence

from .errors import NotHomogeneous, PolySyntaxError, ZeroPolynomial

Exponents = tuple[int, ...]

__all__ = [
    "HomogPoly",
    "FormBasis",
    "parse_poly",
    "parse_expr",
    "parse_terms",
    "partials",
    "monomials_of_degree",
    "grevlex_key",
    "is_extremely_degenerated",
]


def grevlex_key(e: Exponents):
    # Ascending order of this key is grevlex-descending within a fixed degree.
    return (-sum(e), tuple(reversed(e)))


@lru_cache(maxsize=None)
def monomials_of_degree(n_vars: int, k: int) -> tuple[Exponents, ...]:
    """All exponent vectors of total degree ``k`` in ``n_vars`` variables.

    Ordered grevlex-descending: for three variables and ``k = 2`` this is
    ``x^2, xy, y^2, xz, yz, z^2``.
    """
    if k < 0 or n_vars <= 0:
        return ()
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(prefix + (remaining,))
            return
        for a in range(remaining, -1, -1):
            rec(prefix + (a,), remaining - a, slots - 1)

    rec((), k, n_vars)
    out.sort(key=grevlex_key)
    assert len(out) == comb(k + n_vars - 1, n_vars - 1)
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(n_vars: int, k: int) -> dict[Exponents, int]:
    return {m: i for i, m in enumerate(monomials_of_degree(n_vars, k))}


@dataclass(frozen=True)
class HomogPoly:
    """A homogeneous polynomial with rational coefficients.

    ``terms`` is a tuple of ``(exponents, coefficient)`` pairs in
    grevlex-descending order with no zero coefficients.  The zero
    polynomial is allowed (it arises as a partial derivative) and carries
    the degree it was given.
    """

    n_vars: int
    degree: int
    terms: tuple[tuple[Exponents, Fraction], ...]

    def __post_init__(self):
        if self.n_vars < 1:
            raise ValueError("need at least one variable")
        seen = set()
        for e, c in self.terms:
            if len(e) != self.n_vars:
                raise ValueError(f"exponent vector {e} has wrong length")
            if sum(e) != self.degree:
                raise NotHomogeneous(f"monomial {e} is not of degree {self.degree}")
            if c == 0:
                raise ValueError("zero coefficient stored")
            if e in seen:
                raise ValueError(f"duplicate monomial {e}")
            seen.add(e)

    @classmethod
    def from_dict(cls, n_vars: int, mapping: Mapping[Exponents, object],
                  degree: int | None = None) -> "HomogPoly":
        coeffs: dict[Exponents, Fraction] = {}
        for e, c in mapping.items():
            e = tuple(int(a) for a in e)
            c = Fraction(c)
            if c:
                coeffs[e] = coeffs.get(e, Fraction(0)) + c
        coeffs = {e: c for e, c in coeffs.items() if c}
        degs = {sum(e) for e in coeffs}
        if len(degs) > 1:
            raise NotHomogeneous(f"monomials of degrees {sorted(degs)}")
        if degs:
            (deg,) = degs
            if degree is not None and degree != deg:
                raise NotHomogeneous(f"expected degree {degree}, got {deg}")
        elif degree is None:
            raise ZeroPolynomial("the zero polynomial needs an explicit degree")
        else:
            deg = degree
        terms = tuple(sorted(coeffs.items(), key=lambda t: grevlex_key(t[0])))
        return cls(n_vars, deg, terms)

    # -- views ---------------------------------------------------------

    def coeffs(self) -> dict[Exponents, Fraction]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def support(self) -> list[Exponents]:
        return [e for e, _ in self.terms]

    def integer_coeffs(self) -> dict[Exponents, int]:
        """Coefficients scaled by the lcm of their denominators."""
        den = 1
        for _, c in self.terms:
            den = lcm(den, c.denominator)
        return {e: int(c * den) for e, c in self.terms}

    def to_string(self, names: Sequence[str] | None = None) -> str:
        names = list(names) if names is not None else default_names(self.n_vars)
        if not self.terms:
            return "0"
        parts = []
        for i, (e, c) in enumerate(self.terms):
            sign = "-" if c < 0 else "+"
            a = abs(c)
            factors = [
                names[j] if p == 1 else f"{names[j]}^{p}"
                for j, p in enumerate(e) if p
            ]
            if a != 1 or not factors:
                factors.insert(0, str(a))
            body = "*".join(factors)
            if i == 0:
                parts.append(body if sign == "+" else f"-{body}")
            else:
                parts.append(f" {sign} {body}")
        return "".join(parts)

    def __str__(self):
        return self.to_string()

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other: "HomogPoly") -> "HomogPoly":
        if not isinstance(other, HomogPoly):
            return NotImplemented
        _check_compatible(self, other)
        acc = self.coeffs()
        for e, c in other.terms:
            acc[e] = acc.get(e, 0) + c
        return HomogPoly.from_dict(self.n_vars, acc, self._sum_degree(other))

    def __sub__(self, other: "HomogPoly") -> "HomogPoly":
        if not isinstance(other, HomogPoly):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> "HomogPoly":
        return HomogPoly(self.n_vars, self.degree, tuple((e, -c) for e, c in self.terms))

    def __mul__(self, other) -> "HomogPoly":
        if isinstance(other, HomogPoly):
            if other.n_vars != self.n_vars:
                raise ValueError("variable counts differ")
            acc: dict[Exponents, Fraction] = {}
            for e1, c1 in self.terms:
                for e2, c2 in other.terms:
                    e = tuple(a + b for a, b in zip(e1, e2))
                    acc[e] = acc.get(e, 0) + c1 * c2
            return HomogPoly.from_dict(self.n_vars, acc, self.degree + other.degree)
        c = Fraction(other)
        return HomogPoly.from_dict(self.n_vars, {e: c * a for e, a in self.terms}, self.degree)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "HomogPoly":
        if k < 0:
            raise ValueError("negative power")
        out = HomogPoly.from_dict(self.n_vars, {(0,) * self.n_vars: 1})
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def _sum_degree(self, other):
        if self.is_zero():
            return other.degree
        return self.degree

    def partial(self, i: int) -> "HomogPoly":
        acc = {}
        for e, c in self.terms:
            if e[i]:
                ee = list(e)
                ee[i] -= 1
                acc[tuple(ee)] = c * e[i]
        return HomogPoly.from_dict(self.n_vars, acc, max(self.degree - 1, 0))

    def linear_substitute(self, matrix: Sequence[Sequence[object]]) -> "HomogPoly":
        """Return ``f(A x)``, i.e. ``x_i`` replaced by ``sum_j A[i][j] x_j``."""
        n = self.n_vars
        lin = [
            HomogPoly.from_dict(n, {_unit(n, j): matrix[i][j] for j in range(n)}, 1)
            for i in range(n)
        ]
        powers: list[list[HomogPoly]] = []
        for i in range(n):
            row = [HomogPoly.from_dict(n, {(0,) * n: 1})]
            for _ in range(self.degree):
                row.append(row[-1] * lin[i])
            powers.append(row)
        out = HomogPoly.from_dict(n, {}, self.degree)
        for e, c in self.terms:
            term = HomogPoly.from_dict(n, {(0,) * n: c})
            for i, p in enumerate(e):
                if p:
                    term = term * powers[i][p]
            out = out + term
        return out

    def permute(self, perm: Sequence[int]) -> "HomogPoly":
        """Rename variable ``i`` to variable ``perm[i]``."""
        acc = {}
        for e, c in self.terms:
            ee = [0] * self.n_vars
            for i, p in enumerate(e):
                ee[perm[i]] = p
            acc[tuple(ee)] = c
        return HomogPoly.from_dict(self.n_vars, acc, self.degree)


def _unit(n, j):
    e = [0] * n
    e[j] = 1
    return tuple(e)


def _check_compatible(a: HomogPoly, b: HomogPoly):
    if a.n_vars != b.n_vars:
        raise ValueError("variable counts differ")
    if a.degree != b.degree and not (a.is_zero() or b.is_zero()):
        raise NotHomogeneous(f"cannot add degrees {a.degree} and {b.degree}")


def default_names(n: int) -> list[str]:
    if n <= 3:
        return ["x", "y", "z"][:n]
    if n == 4:
        return ["x", "y", "z", "w"]
    if n == 5:
        return ["u", "v", "x", "y", "z"]
    return [f"x{i}" for i in range(1, n + 1)]


def partials(f: HomogPoly) -> list[HomogPoly]:
    return [f.partial(i) for i in range(f.n_vars)]


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text: str):
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # pragma: no cover - regex always matches a char
            break
        num, name, op = m.groups()
        if num is not None:
            toks.append(("num", int(num)))
        elif name is not None:
            toks.append(("var", name))
        elif op in "+-*/^()":
            toks.append(("op", op))
        else:
            raise PolySyntaxError(f"unexpected character {op!r} at offset {m.start(3)}")
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, text, variables, extended):
        variables = list(variables)
        if not variables:
            raise PolySyntaxError("no variables declared")
        if len(set(variables)) != len(variables):
            raise PolySyntaxError("variable names must be distinct")
        self.vars = {v: i for i, v in enumerate(variables)}
        self.n = len(variables)
        self.toks = _tokenize(text)
        self.pos = 0
        self.extended = extended

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None:
            raise PolySyntaxError("unexpected end of input")
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind
            raise PolySyntaxError(f"expected {want!r}, found {tok[1]!r}")
        self.pos += 1
        return tok[1]

    def at_op(self, op):
        return self.peek() == ("op", op)

    def parse(self):
        if not self.toks:
            raise PolySyntaxError("empty polynomial")
        out = self.expr()
        if self.pos != len(self.toks):
            raise PolySyntaxError(f"trailing input at token {self.peek()[1]!r}")
        return out

    def expr(self):
        acc: dict[Exponents, Fraction] = {}
        sign = 1
        if self.at_op("+") or self.at_op("-"):
            sign = -1 if self.take() == "-" else 1
        while True:
            for e, c in self.term().items():
                acc[e] = acc.get(e, 0) + sign * c
            if self.at_op("+") or self.at_op("-"):
                sign = -1 if self.take() == "-" else 1
            else:
                return acc

    def term(self):
        if self.extended:
            out = self.power()
            while self.at_op("*"):
                self.take()
                out = _dict_mul(out, self.power())
            return out
        coeff = Fraction(1)
        factors = []
        if self.peek()[0] == "num":
            coeff = self.coefficient()
            self.take("op", "*")
        factors.append(self.var_factor())
        while self.at_op("*"):
            self.take()
            factors.append(self.var_factor())
        e = [0] * self.n
        for i, p in factors:
            e[i] += p
        return {tuple(e): coeff}

    def coefficient(self):
        num = self.take("num")
        if self.at_op("/"):
            self.take()
            den = self.take("num")
            if den == 0:
                raise PolySyntaxError("zero denominator")
            return Fraction(num, den)
        return Fraction(num)

    def var_factor(self):
        name = self.take("var")
        if name not in self.vars:
            raise PolySyntaxError(f"undeclared variable {name!r}")
        p = 1
        if self.at_op("^"):
            self.take()
            p = self.take("num")
        return self.vars[name], p

    # extended grammar only
    def power(self):
        base = self.atom()
        if self.at_op("^"):
            self.take()
            k = self.take("num")
            out = {(0,) * self.n: Fraction(1)}
            for _ in range(k):
                out = _dict_mul(out, base)
            return out
        return base

    def atom(self):
        kind, val = self.peek()
        if kind == "num":
            return {(0,) * self.n: self.coefficient()}
        if kind == "var":
            i, _ = self.var_factor_no_power()
            e = [0] * self.n
            e[i] = 1
            return {tuple(e): Fraction(1)}
        if self.at_op("("):
            self.take()
            inner = self.expr()
            self.take("op", ")")
            return inner
        if self.at_op("-"):
            self.take()
            return {e: -c for e, c in self.power().items()}
        raise PolySyntaxError(f"unexpected token {val!r}")

    def var_factor_no_power(self):
        name = self.take("var")
        if name not in self.vars:
            raise PolySyntaxError(f"undeclared variable {name!r}")
        return self.vars[name], 1


def _dict_mul(a, b):
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def _to_homog(n, acc):
    acc = {e: c for e, c in acc.items() if c}
    if not acc:
        raise ZeroPolynomial("polynomial is zero")
    return HomogPoly.from_dict(n, acc)


def parse_poly(text: str, variables: Sequence[str]) -> HomogPoly:
    """Parse a sum of monomials such as ``"x^5 + 3/2*y^4*z"``.

    Grammar: ``expr := term (('+'|'-') term)*``, ``term := [coeff '*'] factor
    ('*' factor)*``, ``factor := var ['^' natural]``; a leading sign is
    accepted.
    """
    p = _Parser(text, variables, extended=False)
    return _to_homog(p.n, p.parse())


def parse_expr(text: str, variables: Sequence[str]) -> HomogPoly:
    """Like :func:`parse_poly` but also accepts parentheses and powers of
    parenthesised groups, e.g. ``"u^3 + v^3 - (u+v)^3"``."""
    p = _Parser(text, variables, extended=True)
    return _to_homog(p.n, p.parse())


# ---------------------------------------------------------------------------
# differential forms


@dataclass(frozen=True)
class FormBasis:
    """Monomial basis of the graded piece of p-forms of internal degree k.

    A basis element is ``x^m dx_I`` with ``|I| = p`` and ``|m| = k - p``
    (``deg x_i = deg dx_i = 1``).  Elements are ordered by subset
    (lexicographically) and then by monomial, grevlex-descending.
    """

    n_vars: int
    p: int
    k: int

    @property
    def subsets(self) -> tuple[tuple[int, ...], ...]:
        return tuple(combinations(range(self.n_vars), self.p))

    @property
    def monomials(self) -> tuple[Exponents, ...]:
        return monomials_of_degree(self.n_vars, self.k - self.p)

    def __len__(self):
        if self.k - self.p < 0 or not 0 <= self.p <= self.n_vars:
            return 0
        return comb(self.n_vars, self.p) * len(self.monomials)

    def index(self, subset: tuple[int, ...], mono: Exponents) -> int:
        return _subset_index(self.n_vars, self.p)[subset] * len(self.monomials) + \
            monomial_index(self.n_vars, self.k - self.p)[mono]

    def elements(self) -> Iterable[tuple[tuple[int, ...], Exponents]]:
        if len(self) == 0:
            return
        for s in self.subsets:
            for m in self.monomials:
                yield s, m


@lru_cache(maxsize=None)
def _subset_index(n, p):
    return {s: i for i, s in enumerate(combinations(range(n), p))}


def wedge_sign(i: int, subset: tuple[int, ...]) -> int:
    """Sign of ``dx_i ^ dx_subset`` relative to the sorted product (0 if i in subset)."""
    if i in subset:
        return 0
    return -1 if sum(1 for j in subset if j < i) % 2 else 1


# ---------------------------------------------------------------------------
# extremely degenerated curves


def is_extremely_degenerated(f: HomogPoly) -> bool:
    """True if all monomials x^i y^j z^k of ``f`` satisfy one relation
    ``a i + b j + c k = 0`` with at least two of ``a, b, c`` nonzero.

    Reducedness of ``f`` is not checked.
    """
    if f.n_vars != 3:
        raise ValueError("defined for three variables only")
    pts = f.support()
    basis: list[Exponents] = []
    for p in pts:
        if len(basis) == 0:
            basis.append(p)
        elif len(basis) == 1:
            if _cross(basis[0], p) != (0, 0, 0):
                basis.append(p)
        else:
            if _det3(basis[0], basis[1], p) != 0:
                return False
    if len(basis) <= 1:
        # orthogonal complement is a plane, which always contains a vector
        # with two nonzero entries
        return True
    normal = _cross(basis[0], basis[1])
    return sum(1 for a in normal if a) >= 2


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _det3(a, b, c):
    x = _cross(b, c)
    return a[0] * x[0] + a[1] * x[1] + a[2] * x[2]


def parse_terms(text: str, variables: Sequence[str]) -> dict[Exponents, Fraction]:
    """Parse with the extended grammar into a raw ``exponents -> coefficient``
    map, without requiring homogeneity (used for local defining equations)."""
    p = _Parser(text, variables, extended=True)
    acc = {e: Fraction(c) for e, c in p.parse().items() if c}
    if not acc:
        raise ZeroPolynomial("polynomial is zero")
    return acc
