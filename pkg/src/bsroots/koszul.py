"""Graded dimension tables of the Milnor algebra and of the Koszul complex.

Layout conventions (``n`` variables, ``d = deg f``, ``deg x_i = deg dx_i = 1``):

* ``M_k = Omega^n_k / df ^ Omega^{n-1}_{k-d}``, so ``mu_k = dim (R/(df))_{k-n}``;
* ``N_{k+d}`` is represented by closed-under-``df^`` forms in ``Omega^{n-1}_k``
  modulo ``df ^ Omega^{n-2}_{k-d}``;
* the exterior derivative ``d`` preserves the internal degree, so the
  differential ``d1: N_{k+d} -> M_k`` of the pole order spectral sequence is
  induced by ``d: Omega^{n-1}_k -> Omega^n_k``.

Why ``mu`` is only computed on ``[0, nd]``: for ``k >= nd`` one has
``mu_k = tau`` (the Hilbert function of ``M`` is constant there).  ``tau`` is
read at ``nd`` and cross-checked at ``nd - n``.  Reading it at ``nd - n`` is
justified because ``mu'`` is symmetric about ``nd/2`` and ``mu'_n = 0`` (as
``mu_n = mu''_n = 1``), hence ``mu'_{nd-n} = 0`` and
``mu_{nd-n} = mu''_{nd-n} = tau - nu_n = tau``.  This needs ``tau > 0``; for
smooth ``Z`` the algebra is finite with ``mu_{nd-n} = 1`` (socle) and
``mu_{nd} = 0``.  Both readings are kept so a failure of either argument
surfaces as :class:`NotStabilized`.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import comb
from typing import Callable, Iterable, Sequence

from . import gradedla
from .errors import NegativeNu, NegativeSplit, NotIsolated, NotStabilized
from .gradedla import ExactMatrix
from .polyring import (
    FormBasis,
    HomogPoly,
    monomial_index,
    monomials_of_degree,
    partials,
    wedge_sign,
)

__all__ = [
    "GradedTable",
    "gamma_table",
    "milnor_table",
    "nu_table",
    "tau_from_mu",
    "split_table",
    "delta_table",
    "e2_tables",
    "koszul_h_dim",
    "arnold_number",
    "df_wedge_matrix",
    "exterior_d_matrix",
    "jacobian_matrix",
    "tables_tsv",
]

LABELS = ("gamma", "mu", "nu", "mu_prime", "mu_dblprime", "delta", "mu2", "nu2")
NONNEG = set(LABELS) - {"delta"}


@dataclass(frozen=True)
class GradedTable:
    """Integer sequence indexed by degree.

    ``values[i]`` is the entry at degree ``offset + i``.  Degrees below the
    stored range read as 0, degrees above it read as ``stable_tail`` (or 0
    when there is no tail).
    """

    label: str
    offset: int
    values: tuple[int, ...]
    n: int
    d: int
    stable_tail: int | None = None

    def __post_init__(self):
        if self.label not in LABELS:
            raise ValueError(f"unknown label {self.label!r}")
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if self.label in NONNEG and any(v < 0 for v in self.values):
            raise ValueError(f"negative entry in {self.label} table")

    def __getitem__(self, k: int) -> int:
        i = k - self.offset
        if i < 0:
            return 0
        if i >= len(self.values):
            return self.stable_tail or 0
        return self.values[i]

    @property
    def top(self) -> int:
        """Highest stored degree."""
        return self.offset + len(self.values) - 1

    def degrees(self) -> range:
        return range(self.offset, self.offset + len(self.values))

    def items(self) -> list[tuple[int, int]]:
        return [(k, self[k]) for k in self.degrees()]

    def support(self) -> list[int]:
        return [k for k, v in self.items() if v]

    def window(self, lo: int, hi: int) -> list[int]:
        """Entries for degrees ``lo..hi`` inclusive."""
        return [self[k] for k in range(lo, hi + 1)]

    def poly_string(self, var: str = "T") -> str:
        """Generating polynomial of the stored entries, highest degree first."""
        parts = []
        for k, v in sorted(self.items(), reverse=True):
            if not v:
                continue
            mono = "1" if k == 0 else (var if k == 1 else f"{var}^{k}")
            if v == 1:
                s = mono
            elif v == -1:
                s = "-" + mono
            else:
                s = f"{v}{mono}" if k else str(v)
            parts.append(s)
        if not parts:
            return "0"
        return "".join(p if i == 0 or p.startswith("-") else "+" + p for i, p in enumerate(parts))

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "offset": self.offset,
            "values": list(self.values),
            "n": self.n,
            "d": self.d,
            "stable_tail": self.stable_tail,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GradedTable":
        return cls(data["label"], data["offset"], tuple(data["values"]), data["n"],
                   data["d"], data.get("stable_tail"))


# ---------------------------------------------------------------------------
# gamma


def gamma_table(n: int, d: int) -> GradedTable:
    """Coefficients of ``(t + ... + t^{d-1})^n``, stored on ``[n, nd-n]``."""
    if n < 1 or d < 2:
        raise ValueError("need n >= 1 and d >= 2")
    coeffs = [1]
    for _ in range(n):
        new = [0] * (len(coeffs) + d - 1)
        for i, c in enumerate(coeffs):
            for j in range(1, d):
                new[i + j] += c
        coeffs = new
    return GradedTable("gamma", n, tuple(coeffs[n:n * d - n + 1]), n, d, 0)


def arnold_number(n: int, d: int) -> int:
    """``gamma_{n, floor((n-1)d/2) + 1}``: bound on the number of nodes."""
    if n < 2 or d < 2:
        raise ValueError("need n >= 2 and d >= 2")
    return gamma_table(n, d)[(n - 1) * d // 2 + 1]


# ---------------------------------------------------------------------------
# matrices


def _int_partials(f: HomogPoly) -> list[dict]:
    # Scaling f does not change any rank; work with integer coefficients.
    g = HomogPoly.from_dict(f.n_vars, f.integer_coeffs(), f.degree)
    return [dict(p.integer_coeffs()) for p in partials(g)]


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def jacobian_matrix(f: HomogPoly, e: int, parts: list[dict] | None = None) -> ExactMatrix:
    """Columns ``m * f_i`` (``deg m = e - d + 1``) in the degree-``e`` monomial basis."""
    n = f.n_vars
    parts = parts if parts is not None else _int_partials(f)
    rows = monomials_of_degree(n, e)
    idx = monomial_index(n, e)
    cols = []
    for m in monomials_of_degree(n, e - f.degree + 1):
        for p in parts:
            cols.append({idx[_add(m, a)]: c for a, c in p.items()})
    return ExactMatrix.from_columns(len(rows), cols)


def df_wedge_matrix(f: HomogPoly, p: int, k: int, parts: list[dict] | None = None) -> ExactMatrix:
    """Matrix of ``df ^ : Omega^p_k -> Omega^{p+1}_{k+d}``."""
    n = f.n_vars
    parts = parts if parts is not None else _int_partials(f)
    src = FormBasis(n, p, k)
    dst = FormBasis(n, p + 1, k + f.degree)
    cols = []
    for subset, mono in src.elements():
        col: dict[int, int] = {}
        for i, part in enumerate(parts):
            s = wedge_sign(i, subset)
            if not s:
                continue
            target = tuple(sorted(subset + (i,)))
            for a, c in part.items():
                r = dst.index(target, _add(mono, a))
                col[r] = col.get(r, 0) + s * c
        cols.append(col)
    return ExactMatrix.from_columns(len(dst), cols)


def exterior_d_matrix(n: int, p: int, k: int) -> ExactMatrix:
    """Matrix of ``d : Omega^p_k -> Omega^{p+1}_k``."""
    src = FormBasis(n, p, k)
    dst = FormBasis(n, p + 1, k)
    cols = []
    for subset, mono in src.elements():
        col = {}
        for i in range(n):
            s = wedge_sign(i, subset)
            if not s or mono[i] == 0:
                continue
            lowered = mono[:i] + (mono[i] - 1,) + mono[i + 1:]
            col[dst.index(tuple(sorted(subset + (i,))), lowered)] = s * mono[i]
        cols.append(col)
    return ExactMatrix.from_columns(len(dst), cols)


# ---------------------------------------------------------------------------
# per-degree sweep


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("BSROOTS_THREADS", "1")))
    except ValueError:
        return 1


def _sweep(fn: Callable, args: Sequence) -> list:
    """Map ``fn`` over ``args``; results come back in input order."""
    workers = min(_threads(), len(args))
    if workers <= 1:
        return [fn(*a) for a in args]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_star, [(fn, a) for a in args]))


def _star(job):
    fn, a = job
    return fn(*a)


def _milnor_dim(f: HomogPoly, k: int, method: str) -> int:
    e = k - f.n_vars
    if e < 0:
        return 0
    if e < f.degree - 1:
        return comb(e + f.n_vars - 1, f.n_vars - 1)
    return gradedla.cokernel_dim(jacobian_matrix(f, e), method)


# ---------------------------------------------------------------------------
# mu, nu, tau


def milnor_table(f: HomogPoly, method: str = "exact") -> GradedTable:
    """``mu_k`` for ``k`` in ``[0, nd]`` with tail ``mu_{nd}``.

    Raises :class:`NotIsolated` when the Hilbert function is visibly not
    constant from ``nd - n`` on (checked once more at ``nd + d``), and
    :class:`NotStabilized` when ``mu_{nd-n} != mu_{nd}`` but ``mu_{nd+d}``
    agrees with ``mu_{nd}``.
    """
    n, d = f.n_vars, f.degree
    top = n * d
    vals = _sweep(_milnor_dim, [(f, k, method) for k in range(top + 1)])
    if vals[top - n] != _expected_at_socle(vals[top]):
        extra = _milnor_dim(f, top + d, method)
        if extra != vals[top]:
            raise NotIsolated(
                f"mu_{top - n} = {vals[top - n]}, mu_{top} = {vals[top]}, "
                f"mu_{top + d} = {extra}: the singular locus is not isolated")
        raise NotStabilized(f"mu_{top - n} = {vals[top - n]} but mu_{top} = {vals[top]}")
    return GradedTable("mu", 0, tuple(vals), n, d, vals[top])


def _expected_at_socle(tau: int) -> int:
    # with Z smooth the Milnor algebra is finite and its socle sits at nd - n
    return tau if tau else 1


def tau_from_mu(mu: GradedTable) -> int:
    n, d = mu.n, mu.d
    a, b = mu[n * d - n], mu[n * d]
    if a != _expected_at_socle(b):
        raise NotStabilized(f"mu_{n * d - n} = {a} but mu_{n * d} = {b}")
    return b


def nu_table(mu: GradedTable, gamma: GradedTable) -> GradedTable:
    """``nu_k = mu_k - gamma_k``, same stored range as ``mu``, tail ``tau``."""
    if (mu.n, mu.d) != (gamma.n, gamma.d):
        raise ValueError("tables belong to different (n, d)")
    vals = [mu[k] - gamma[k] for k in mu.degrees()]
    bad = [k for k, v in zip(mu.degrees(), vals) if v < 0]
    if bad:
        raise NegativeNu(f"nu_k < 0 at k = {bad}")
    return GradedTable("nu", mu.offset, tuple(vals), mu.n, mu.d, mu.stable_tail)


def split_table(mu: GradedTable, nu: GradedTable, tau: int) -> tuple[GradedTable, GradedTable]:
    """``(mu', mu'')`` with ``mu''_k = tau - nu_{nd-k}`` and ``mu' = mu - mu''``."""
    n, d = mu.n, mu.d
    top = n * d
    dbl = [tau - nu[top - k] if top - k >= 0 else tau for k in range(top + 1)]
    prime = [mu[k] - dbl[k] for k in range(top + 1)]
    if any(v < 0 for v in dbl) or any(v < 0 for v in prime):
        raise NegativeSplit("mu' or mu'' has a negative entry")
    return (GradedTable("mu_prime", 0, tuple(prime), n, d, 0),
            GradedTable("mu_dblprime", 0, tuple(dbl), n, d, tau))


def delta_table(mu: GradedTable, nu: GradedTable) -> GradedTable:
    """``delta_k = mu_k - nu_{k+d}`` for ``k`` in ``[0, nd)``; zero outside.

    Negative values are kept: they can only occur at ``k`` in ``d R_Z``.
    """
    n, d = mu.n, mu.d
    vals = [mu[k] - nu[k + d] for k in range(n * d)]
    return GradedTable("delta", 0, tuple(vals), n, d, 0)


# ---------------------------------------------------------------------------
# Koszul cohomology


def _form_dim(n: int, p: int, k: int) -> int:
    return len(FormBasis(n, p, k))


def koszul_h_dim(f: HomogPoly, j: int, k: int, method: str = "exact") -> int:
    """Dimension of ``H^j`` of ``(Omega^., df^)`` in internal degree ``k``."""
    n, d = f.n_vars, f.degree
    if not 0 <= j <= n:
        raise ValueError("need 0 <= j <= n")
    dim = _form_dim(n, j, k)
    if dim == 0:
        return 0
    out = 0 if j == n or _form_dim(n, j + 1, k + d) == 0 else \
        gradedla.rank(df_wedge_matrix(f, j, k), method)
    inc = 0 if j == 0 or _form_dim(n, j - 1, k - d) == 0 else \
        gradedla.rank(df_wedge_matrix(f, j - 1, k - d), method)
    return dim - out - inc


# ---------------------------------------------------------------------------
# E2 page
#
# Each route returns ``(dim M_k, rank d1)`` for one degree ``k``, where
# ``d1: N_{k+d} -> M_k`` is induced by ``d`` on ``Z_k = ker(df ^ on
# Omega^{n-1}_k)``.  Then ``mu2_k = dim M_k - rank d1`` and
# ``nu2_{k+d} = nu_{k+d} - rank d1``.  ``d`` kills ``df ^ Omega^{n-2}`` modulo
# ``df ^ Omega^{n-1}`` (``d(df ^ a) = -df ^ da``), so it is enough to know
# where ``d`` sends ``Z_k``.


def _boundary(f, k, parts):
    """``df ^ Omega^{n-1}_{k-d}`` inside ``Omega^n_k`` (columns)."""
    n, d = f.n_vars, f.degree
    rows = _form_dim(n, n, k)
    if _form_dim(n, n - 1, k - d):
        return df_wedge_matrix(f, n - 1, k - d, parts)
    return ExactMatrix.from_columns(rows, [])


def _d1_kernel(f: HomogPoly, k: int, method: str) -> tuple[int, int]:
    """Explicit route: kernel basis of ``df ^``, pushed through ``d``."""
    n = f.n_vars
    rows = _form_dim(n, n, k)
    if rows == 0:
        return 0, 0
    parts = _int_partials(f)
    b = _boundary(f, k, parts)
    rank_b = gradedla.rank(b, method)
    if _form_dim(n, n - 1, k) == 0:
        return rows - rank_b, 0
    z = gradedla.kernel_basis(df_wedge_matrix(f, n - 1, k, parts))
    dmat = exterior_d_matrix(n, n - 1, k)
    dz = [{i: v for i, v in enumerate(dmat.matvec(vec)) if v} for vec in z]
    both = ExactMatrix.from_columns(rows, b.columns() + dz)
    return rows - rank_b, gradedla.rank(both, method) - rank_b


def _d1_cokernel(f: HomogPoly, k: int, method: str) -> tuple[int, int]:
    """Dual route: project onto ``M_k`` with a left-kernel basis ``P`` of ``B``.

    ``P`` has ``dim M_k`` rows and kernel exactly ``B``, so
    ``rank d1 = rank [[F], [P D]] - rank F`` with ``F = df ^`` and ``D = d``
    on ``Omega^{n-1}_k``.  Only ``P`` needs an echelon form, and it lives in
    the lower degree ``k``, which keeps this route cheap.
    """
    n = f.n_vars
    rows = _form_dim(n, n, k)
    if rows == 0:
        return 0, 0
    parts = _int_partials(f)
    b = _boundary(f, k, parts)
    if b.cols:
        proj = gradedla.kernel_basis(b.transpose())
    else:
        proj = [[int(i == j) for j in range(rows)] for i in range(rows)]
    if not proj or _form_dim(n, n - 1, k) == 0:
        return len(proj), 0
    fm = df_wedge_matrix(f, n - 1, k, parts)
    dmat = exterior_d_matrix(n, n - 1, k)
    shift = fm.rows
    cols = []
    for fcol, dcol in zip(fm.columns(), dmat.columns()):
        col = dict(fcol)
        for r, row in enumerate(proj):
            v = sum(row[i] * a for i, a in dcol.items())
            if v:
                col[shift + r] = v
        cols.append(col)
    stacked = ExactMatrix.from_columns(shift + len(proj), cols)
    return len(proj), gradedla.rank(stacked, method) - gradedla.rank(fm, method)


def _d1_stacked(f: HomogPoly, k: int, method: str) -> tuple[int, int]:
    """Rank-only route: ``rank [B | d(ker F)] = rank [[F, 0], [D, B]] - rank F``."""
    n = f.n_vars
    rows = _form_dim(n, n, k)
    if rows == 0:
        return 0, 0
    parts = _int_partials(f)
    b = _boundary(f, k, parts)
    rank_b = gradedla.rank(b, method)
    if _form_dim(n, n - 1, k) == 0:
        return rows - rank_b, 0
    fm = df_wedge_matrix(f, n - 1, k, parts)
    dm = exterior_d_matrix(n, n - 1, k)
    shift = fm.rows
    left = [dict(a) for a in fm.columns()]
    for col, dcol in zip(left, dm.columns()):
        col.update({shift + i: v for i, v in dcol.items()})
    right = [{shift + i: v for i, v in c.items()} for c in b.columns()]
    big = ExactMatrix.from_columns(shift + rows, left + right)
    r_all = gradedla.rank(big, method) - gradedla.rank(fm, method)
    return rows - rank_b, r_all - rank_b


E2_ROUTES = {"cokernel": _d1_cokernel, "kernel": _d1_kernel, "stacked": _d1_stacked}


def e2_tables(f: HomogPoly, nu: GradedTable, k_range: Iterable[int] | None = None,
              method: str = "exact", route: str = "cokernel") -> tuple[GradedTable, GradedTable]:
    """``mu2_k = dim coker(d1: N_{k+d} -> M_k)`` and ``nu2_{k+d} = dim ker d1``.

    ``k_range`` defaults to ``[0, nd)`` and must be contiguous; ``nu2`` is
    indexed by ``k + d``.  The three routes compute the same numbers by
    different linear algebra.
    """
    n, d = f.n_vars, f.degree
    ks = list(range(n * d) if k_range is None else k_range)
    if not ks:
        raise ValueError("empty degree range")
    if ks != list(range(ks[0], ks[0] + len(ks))):
        raise ValueError("degree range must be contiguous")
    ranker = E2_ROUTES[route]
    res = _sweep(ranker, [(f, k, method) for k in ks])
    mu2 = tuple(m - r for m, r in res)
    nu2 = tuple(nu[k + d] - r for k, (_, r) in zip(ks, res))
    return (GradedTable("mu2", ks[0], mu2, n, d, None),
            GradedTable("nu2", ks[0] + d, nu2, n, d, None))


# ---------------------------------------------------------------------------
# serialization


def tables_tsv(tables: Sequence[GradedTable], lo: int, hi: int) -> str:
    """Rows of the given tables over degrees ``lo..hi``; zero entries left blank."""
    names = {"gamma": "gamma", "mu": "mu", "nu": "nu", "mu2": "mu2", "nu2": "nu2",
             "mu_dblprime": "mu''", "mu_prime": "mu'", "delta": "delta"}
    lines = ["k\t" + "\t".join(str(k) for k in range(lo, hi + 1))]
    for t in tables:
        cells = [str(t[k]) if t[k] else "" for k in range(lo, hi + 1)]
        lines.append(names[t.label] + "\t" + "\t".join(cells))
    return "\n".join(lines) + "\n"
