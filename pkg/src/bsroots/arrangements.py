"""Plane line arrangements: expand a product of linear forms and list its
singular points.

Every intersection point where ``m`` lines meet is an ordinary ``m``-fold
point, locally ``x^m + y^m`` up to analytic change, so it carries the
weights ``(1/m, 1/m)``.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

from .errors import InputError, PolySyntaxError
from .localspec import LocalSingularity, SingularityData, aggregate
from .polyring import HomogPoly, parse_expr

__all__ = ["split_factors", "parse_lines", "expand", "intersection_points", "arrangement"]


def split_factors(text: str) -> list[str]:
    """Split ``a*b*(c+d)`` at top-level ``*`` into factor strings."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise PolySyntaxError("unbalanced parentheses")
        if ch == "*" and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise PolySyntaxError("unbalanced parentheses")
    out.append("".join(cur))
    out = [s.strip() for s in out]
    if any(not s for s in out):
        raise PolySyntaxError(f"empty factor in {text!r}")
    return out


def _normalize(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Primitive integer representative with first nonzero entry positive."""
    den = 1
    for a in v:
        den = den * a.denominator // gcd(den, a.denominator)
    ints = [int(a * den) for a in v]
    g = 0
    for a in ints:
        g = gcd(g, a)
    if g == 0:
        raise InputError("zero vector")
    ints = [a // g for a in ints]
    lead = next(a for a in ints if a)
    return tuple(a if lead > 0 else -a for a in ints)


def parse_lines(text: str, variables: Sequence[str]) -> list[tuple[int, ...]]:
    """Coefficient vectors of the factors; each must be a linear form and no
    line may repeat (the arrangement must be reduced)."""
    if len(variables) != 3:
        raise InputError("line arrangements need exactly three variables")
    lines = []
    for s in split_factors(text):
        p = parse_expr(s, variables)
        if p.degree != 1:
            raise InputError(f"factor {s!r} is not a linear form")
        c = p.coeffs()
        lines.append(_normalize([c.get(tuple(int(i == j) for j in range(3)), Fraction(0))
                                 for i in range(3)]))
    if len(set(lines)) != len(lines):
        raise InputError("repeated line: the arrangement is not reduced")
    return lines


def expand(lines: Sequence[Sequence[int]]) -> HomogPoly:
    f = None
    for l in lines:
        lf = HomogPoly.from_dict(3, {tuple(int(i == j) for j in range(3)): l[i]
                                     for i in range(3) if l[i]})
        f = lf if f is None else f * lf
    return f


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def intersection_points(lines: Sequence[Sequence[int]]) -> dict[tuple[int, ...], int]:
    """Map each intersection point (primitive integer coordinates) to the
    number of lines through it."""
    pts: dict[tuple[int, ...], int] = {}
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            p = _normalize([Fraction(a) for a in _cross(lines[i], lines[j])])
            if p not in pts:
                pts[p] = sum(1 for l in lines if sum(a * b for a, b in zip(l, p)) == 0)
    return pts


def arrangement(text: str, variables: Sequence[str]) -> tuple[HomogPoly, SingularityData]:
    """Defining polynomial and singularity data of a line arrangement."""
    lines = parse_lines(text, variables)
    if len(lines) < 2:
        raise InputError("need at least two lines")
    f = expand(lines)
    counts: dict[int, int] = {}
    for m in intersection_points(lines).values():
        counts[m] = counts.get(m, 0) + 1
    sings = [LocalSingularity((Fraction(1, m), Fraction(1, m)), c) for m, c in counts.items()]
    return f, aggregate(sings, 3)
