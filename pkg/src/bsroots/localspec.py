"""Local data of weighted homogeneous isolated singularities.

For a weighted homogeneous ``h`` in ``n'`` variables with weights ``w_j`` the
spectrum is read off the polynomial

    Sp(h) = prod_j (t^{w_j} - t) / (1 - t^{w_j}),

the Milnor number is ``prod_j (1/w_j - 1)`` and the roots of the reduced
local Bernstein-Sato polynomial are the distinct spectral numbers.  Root
sets are frozensets of :class:`fractions.Fraction`.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from os import PathLike
from typing import Iterable, Sequence

from .errors import (
    InputError,
    InvalidWeights,
    NonIntegerMilnor,
    NotPolynomial,
    NotWeightedHomogeneous,
    UnknownType,
)
from .gradedla import ExactMatrix, rref
from .polyring import parse_terms

__all__ = [
    "LocalSingularity",
    "SpectrumMultiset",
    "SingularityData",
    "spectrum",
    "milnor_number",
    "local_bs_roots",
    "ade_weights",
    "weights_from_local_poly",
    "aggregate",
    "load_singularities",
    "parse_rational",
    "fmt_rational",
]

HALF = Fraction(1, 2)


def parse_rational(s) -> Fraction:
    if isinstance(s, Fraction):
        return s
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str) and re.fullmatch(r"\s*-?\d+\s*(/\s*\d+\s*)?", s):
        try:
            return Fraction(s.replace(" ", ""))
        except ZeroDivisionError:
            raise InputError(f"zero denominator in {s!r}") from None
    raise InputError(f"not an exact rational: {s!r}")


def fmt_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _check_weights(weights: Sequence) -> tuple[Fraction, ...]:
    ws = tuple(parse_rational(w) for w in weights)
    if not ws:
        raise InvalidWeights("empty weight list")
    for w in ws:
        if not 0 < w < 1:
            raise InvalidWeights(f"weight {w} outside (0, 1)")
    return ws


# ---------------------------------------------------------------------------
# spectrum


@dataclass(frozen=True)
class SpectrumMultiset:
    """Spectral numbers (sorted, with repetition) and the common denominator
    ``m`` used to write the spectrum as a polynomial in ``T = t^{1/m}``."""

    entries: tuple[Fraction, ...]
    m: int

    def __len__(self):
        return len(self.entries)

    def values(self) -> frozenset[Fraction]:
        return frozenset(self.entries)

    def exponents(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for a in self.entries:
            e = int(a * self.m)
            out[e] = out.get(e, 0) + 1
        return out

    def poly_string(self, var: str = "T") -> str:
        """``sum_i T^{m alpha_i}``, highest power first, e.g. ``T^3+2T^2``."""
        parts = []
        for e, c in sorted(self.exponents().items(), reverse=True):
            mono = "1" if e == 0 else (var if e == 1 else f"{var}^{e}")
            parts.append(mono if c == 1 else f"{c}{mono}")
        return "+".join(parts) if parts else "0"


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # den has constant term 1, so long division from the bottom stays integral.
    num = list(num)
    q = [0] * max(len(num) - len(den) + 1, 1)
    for i in range(len(q)):
        c = num[i]
        if c:
            q[i] = c
            for j, y in enumerate(den):
                num[i + j] -= c * y
    return q, num


def spectrum(weights: Sequence) -> SpectrumMultiset:
    ws = _check_weights(weights)
    m = lcm(*(w.denominator for w in ws))
    num, den = [1], [1]
    for w in ws:
        a = int(w * m)
        # (T^a - T^m) and (1 - T^a) as coefficient lists, lowest degree first
        num = _poly_mul(num, [0] * a + [1] + [0] * (m - a - 1) + [-1])
        den = _poly_mul(den, [1] + [0] * (a - 1) + [-1])
    q, r = _poly_divmod(num, den)
    if any(r):
        raise NotPolynomial(f"weights {list(map(fmt_rational, ws))} do not give a polynomial spectrum")
    if any(c < 0 for c in q):
        raise NotPolynomial("spectrum has negative multiplicities")
    entries = []
    for e, c in enumerate(q):
        entries.extend([Fraction(e, m)] * c)
    return SpectrumMultiset(tuple(entries), m)


def milnor_number(weights: Sequence) -> int:
    ws = _check_weights(weights)
    mu = Fraction(1)
    for w in ws:
        mu *= 1 / w - 1
    if mu.denominator != 1:
        raise NonIntegerMilnor(f"prod (1/w - 1) = {mu} is not an integer")
    return int(mu)


def local_bs_roots(weights: Sequence) -> tuple[frozenset[Fraction], frozenset[Fraction]]:
    """``(full, reduced)``: negated roots of ``b_h`` and of ``b_h / (s+1)``."""
    reduced = spectrum(weights).values()
    return reduced | {Fraction(1)}, reduced


# ---------------------------------------------------------------------------
# input forms


_ADE = re.compile(r"^([ADE])_?(\d+)$")


def ade_weights(kind: str, ambient: int) -> tuple[Fraction, ...]:
    """Weights of the ADE normal form in ``ambient`` variables.

    The two-variable forms are ``x^2+y^{k+1}``, ``x^2 y + y^{k-1}``,
    ``x^3+y^4``, ``x^3+x y^3``, ``x^3+y^5``; extra variables enter as squares.
    """
    m = _ADE.match(kind.strip().upper())
    if not m:
        raise UnknownType(f"unknown singularity type {kind!r}")
    if ambient < 2:
        raise InputError("ADE presets need at least two variables")
    letter, k = m.group(1), int(m.group(2))
    if letter == "A" and k >= 1:
        pair = (HALF, Fraction(1, k + 1))
    elif letter == "D" and k >= 4:
        pair = (Fraction(1, k - 1), Fraction(k - 2, 2 * (k - 1)))
    elif letter == "E" and k in (6, 7, 8):
        pair = {6: (Fraction(1, 3), Fraction(1, 4)),
                7: (Fraction(1, 3), Fraction(2, 9)),
                8: (Fraction(1, 3), Fraction(1, 5))}[k]
    else:
        raise UnknownType(f"unknown singularity type {kind!r}")
    return pair + (HALF,) * (ambient - 2)


def weights_from_local_poly(text: str, variables: Sequence[str]) -> tuple[Fraction, ...]:
    """Solve ``sum_i w_i a_i = 1`` over the support of a local equation.

    The solution must exist, be unique and lie in ``(0, 1)``.
    """
    terms = parse_terms(text, variables)
    nv = len(variables)
    rows = [list(e) + [1] for e in terms]
    ech, pivots = rref(ExactMatrix.from_rows(rows, nv + 1), engine="native")
    if nv in pivots:
        raise NotWeightedHomogeneous(f"{text!r} is not weighted homogeneous")
    if len(pivots) < nv:
        raise NotWeightedHomogeneous(f"weights of {text!r} are not determined by its support")
    ws = [Fraction(0)] * nv
    for row, p in zip(ech, pivots):
        ws[p] = row[nv]
    if any(not 0 < w < 1 for w in ws):
        raise NotWeightedHomogeneous(f"{text!r} has non-positive or too large weights {ws}")
    return tuple(ws)


# ---------------------------------------------------------------------------
# singularity data


@dataclass(frozen=True)
class LocalSingularity:
    """``count`` singular points of ``Z`` sharing the weights ``weights``."""

    weights: tuple[Fraction, ...]
    count: int = 1

    def __post_init__(self):
        object.__setattr__(self, "weights", _check_weights(self.weights))
        if not isinstance(self.count, int) or self.count < 1:
            raise InputError(f"count must be a positive integer, got {self.count!r}")
        milnor_number(self.weights)

    @property
    def milnor(self) -> int:
        return milnor_number(self.weights)

    @property
    def alpha_tilde(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    def roots(self) -> tuple[frozenset[Fraction], frozenset[Fraction]]:
        return local_bs_roots(self.weights)

    def to_dict(self) -> dict:
        return {"weights": [fmt_rational(w) for w in self.weights], "count": self.count}


@dataclass(frozen=True)
class SingularityData:
    """Aggregated root data of ``Sing Z``.

    With no singular points (``Z`` smooth) the root sets are empty and both
    minima are ``None``.
    """

    n: int
    singularities: tuple[LocalSingularity, ...]
    R_Z: frozenset[Fraction]
    R_tilde: frozenset[Fraction]
    alpha_Z: Fraction | None
    alpha_tilde: Fraction | None
    mu_Z: int

    @property
    def all_odp(self) -> bool:
        """Every singular point is an ordinary double point (true if there are none)."""
        return all(all(w == HALF for w in s.weights) for s in self.singularities)

    @property
    def n_points(self) -> int:
        return sum(s.count for s in self.singularities)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "singularities": [s.to_dict() for s in self.singularities],
            "R_Z": [fmt_rational(q) for q in sorted(self.R_Z)],
            "R_tilde": [fmt_rational(q) for q in sorted(self.R_tilde)],
            "alpha_Z": None if self.alpha_Z is None else fmt_rational(self.alpha_Z),
            "alpha_tilde": None if self.alpha_tilde is None else fmt_rational(self.alpha_tilde),
            "mu_Z": self.mu_Z,
        }


def aggregate(singularities: Iterable[LocalSingularity], n: int | None = None) -> SingularityData:
    """Unions of local root sets, their minima and the total Milnor number.

    ``n`` (number of global variables) is inferred from the weights when
    omitted; it is required for an empty list.
    """
    sings = tuple(singularities)
    dims = {len(s.weights) for s in sings}
    if len(dims) > 1:
        raise InputError(f"singular points given in different dimensions {sorted(dims)}")
    if n is None:
        if not sings:
            raise InputError("cannot infer n from an empty singularity list")
        n = dims.pop() + 1
    elif sings and dims != {n - 1}:
        raise InputError(f"expected {n - 1} weights per point, got {sorted(dims)}")
    # canonical order so that aggregate() is order independent
    merged: dict[tuple[Fraction, ...], int] = {}
    for s in sings:
        merged[s.weights] = merged.get(s.weights, 0) + s.count
    sings = tuple(LocalSingularity(w, c) for w, c in sorted(merged.items()))
    r_tilde: set[Fraction] = set()
    mu = 0
    for s in sings:
        r_tilde |= s.roots()[1]
        mu += s.count * s.milnor
    r_z = r_tilde | {Fraction(1)} if sings else set()
    return SingularityData(
        n=n,
        singularities=sings,
        R_Z=frozenset(r_z),
        R_tilde=frozenset(r_tilde),
        alpha_Z=min(r_z) if r_z else None,
        alpha_tilde=min(r_tilde) if r_tilde else None,
        mu_Z=mu,
    )


def _pad(ws: tuple[Fraction, ...], n: int) -> tuple[Fraction, ...]:
    if len(ws) > n - 1:
        raise InputError(f"{len(ws)} local variables but the hypersurface has dimension {n - 2}")
    return ws + (HALF,) * (n - 1 - len(ws))


def singularity_from_record(rec: dict, n: int) -> LocalSingularity:
    if not isinstance(rec, dict):
        raise InputError(f"singularity record must be an object, got {rec!r}")
    count = rec.get("count", 1)
    keys = [k for k in ("weights", "type", "local_poly") if k in rec]
    if len(keys) != 1:
        raise InputError(f"record needs exactly one of weights/type/local_poly: {rec!r}")
    if "weights" in rec:
        ws = _pad(tuple(parse_rational(w) for w in rec["weights"]), n)
    elif "type" in rec:
        ws = ade_weights(str(rec["type"]), n - 1)
    else:
        variables = rec.get("vars")
        if not variables:
            raise InputError("local_poly records need a 'vars' list")
        ws = _pad(weights_from_local_poly(rec["local_poly"], variables), n)
    return LocalSingularity(ws, count)


def load_singularities(source, n: int) -> SingularityData:
    """Read singularity records from a JSON file path, JSON text or a list."""
    if isinstance(source, (str, PathLike)) and not str(source).lstrip().startswith("["):
        with open(source, encoding="utf-8") as fh:
            data = json.load(fh)
    elif isinstance(source, str):
        data = json.loads(source)
    else:
        data = source
    if not isinstance(data, list):
        raise InputError("singularity file must contain a JSON list")
    return aggregate([singularity_from_record(r, n) for r in data], n)
