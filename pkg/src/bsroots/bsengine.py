"""Decision layer: which ``k/d`` are roots of ``b_f(-s)`` supported at the origin.

Candidates are ``k/d`` for ``k`` in ``[1, nd)``.  Each gets one of four
statuses:

``IN_RZ``
    ``k/d`` is a local root at some singular point of ``Z``; the method says
    nothing about ``R_f^0`` there.
``ROOT_R0``
    ``delta_k > 0`` off ``d R_Z``, which certifies a root.
``NON_ROOT``
    below ``alpha_f = min(alpha_Z, n/d)``, or ``delta_k <= 0`` with ``k/d``
    outside ``R_Z + Z_{<0}``.
``UNDETERMINED``
    ``delta_k <= 0`` but ``k/d`` is in ``R_Z + Z_{<0}``, where vanishing of
    ``delta_k`` does not exclude a root.  Never upgraded using outside
    knowledge.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor

from . import koszul
from .errors import (
    ArnoldBoundViolation,
    ChiMismatch,
    E2Mismatch,
    InputError,
    NotApplicable,
    WViolation,
)
from .koszul import GradedTable
from .localspec import SingularityData, fmt_rational, parse_rational
from .polyring import HomogPoly, default_names, is_extremely_degenerated

__all__ = [
    "ROOT_R0",
    "NON_ROOT",
    "IN_RZ",
    "UNDETERMINED",
    "RootStatus",
    "RootReport",
    "Theorem5",
    "critical_set",
    "in_shifted_roots",
    "alpha_f",
    "classify",
    "condition11",
    "connectedness",
    "corollary3_check",
    "beta_f",
    "theorem5_check",
    "euler_char",
    "validate_W",
    "analyze",
    "exit_code",
]

ROOT_R0 = "ROOT_R0"
NON_ROOT = "NON_ROOT"
IN_RZ = "IN_RZ"
UNDETERMINED = "UNDETERMINED"
STATUSES = (ROOT_R0, NON_ROOT, IN_RZ, UNDETERMINED)


def _frac_or_none(s):
    return None if s is None else parse_rational(s)


def _fmt_or_none(q):
    return None if q is None else fmt_rational(q)


# ---------------------------------------------------------------------------
# basic predicates


def in_shifted_roots(q: Fraction, szd: SingularityData) -> bool:
    """``q`` in ``R_Z + Z_{<0}``.  Local roots lie in ``(0, n-1]``, so shifts
    ``1..n-1`` suffice."""
    return any(q + m in szd.R_Z for m in range(1, szd.n))


def alpha_f(szd: SingularityData, n: int, d: int) -> Fraction:
    """``min(alpha_Z, n/d)``; with ``Z`` smooth this is ``n/d``."""
    a = Fraction(n, d)
    return a if szd.alpha_Z is None else min(a, szd.alpha_Z)


def critical_set(szd: SingularityData, n: int, d: int) -> set[int]:
    """``{k : k/d in [alpha_Z, n-2-alpha_Z], k/d in R_Z + Z_{<0}, k/d not in R_Z}``."""
    if szd.alpha_Z is None:
        return set()
    lo, hi = szd.alpha_Z, n - 2 - szd.alpha_Z
    out = set()
    for k in range(ceil(d * lo), floor(d * hi) + 1):
        q = Fraction(k, d)
        if q not in szd.R_Z and in_shifted_roots(q, szd):
            out.add(k)
    return out


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class RootStatus:
    k: int
    value: Fraction
    status: str
    delta: int
    condition2: bool  # k/d not in R_Z + Z_{<0}
    below_alpha_f: bool

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "value": fmt_rational(self.value),
            "status": self.status,
            "delta": self.delta,
            "condition2": self.condition2,
            "below_alpha_f": self.below_alpha_f,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RootStatus":
        return cls(data["k"], parse_rational(data["value"]), data["status"], data["delta"],
                   data["condition2"], data["below_alpha_f"])


def classify(delta: GradedTable, szd: SingularityData, n: int, d: int) -> list[RootStatus]:
    af = alpha_f(szd, n, d)
    out = []
    for k in range(1, n * d):
        q = Fraction(k, d)
        cond2 = not in_shifted_roots(q, szd)
        below = q < af
        dk = delta[k]
        if q in szd.R_Z:
            st = IN_RZ
        elif dk > 0:
            st = ROOT_R0
        elif below or cond2:
            st = NON_ROOT
        else:
            st = UNDETERMINED
        out.append(RootStatus(k, q, st, dk, cond2, below))
    return out


def condition11(mu: GradedTable, nu: GradedTable, cs: set[int]) -> bool:
    """``mu_k > nu_{k+d}`` for every ``k`` in the critical set."""
    return all(mu[k] > nu[k + mu.d] for k in cs)


def connectedness(delta: GradedTable, szd: SingularityData, d: int):
    """``(connected, k_min, k_max)`` for ``S = Supp(delta) \\ d R_Z``.

    ``S`` counts as connected when every gap in ``[k_min, k_max]`` lies in
    ``d R_Z``.  An empty ``S`` is connected with no bounds.
    """
    in_drz = lambda k: Fraction(k, d) in szd.R_Z  # noqa: E731
    supp = [k for k in delta.degrees() if delta[k] != 0 and not in_drz(k)]
    if not supp:
        return True, None, None
    lo, hi = min(supp), max(supp)
    s = set(supp)
    connected = all(k in s or in_drz(k) for k in range(lo, hi + 1))
    return connected, lo, hi


def corollary3_check(k_min, k_max, connected: bool, szd: SingularityData, n: int, d: int,
                     n3_variant: bool = False):
    """``(applicable, d R_f^0)``; the set is ``None`` when not applicable.

    With ``n3_variant`` and ``n == 3`` the bound on ``k_max`` is ``d - 1``
    instead of ``max(d R_Z cap Z) - d``.
    """
    if not connected or k_min is None or k_min != n:
        return False, None
    ints = [int(q * d) for q in szd.R_Z if (q * d).denominator == 1]
    if n3_variant and n == 3:
        bound = d - 1
    else:
        bound = max(ints) - d if ints else None
    if bound is not None and k_max < bound:
        return False, None
    return True, {k for k in range(n, k_max + 1) if Fraction(k, d) not in szd.R_Z}


def beta_f(mu_prime: GradedTable):
    """``min{k : mu'_k != 0} - n``, or ``None`` for infinity."""
    supp = mu_prime.support()
    return min(supp) - mu_prime.n if supp else None


# ---------------------------------------------------------------------------
# threshold checks


@dataclass(frozen=True)
class Theorem5:
    odp_case: bool
    arnold: int
    m0: int | None
    m1: int | None
    holds_18: bool
    m0_alt: int | None
    m1_alt: int | None
    m2_alt: int | None
    holds_4101: tuple[bool, bool, bool]
    hypotheses_hold: bool
    predicted_k_min: int
    predicted_k_max: int

    def to_dict(self) -> dict:
        return {
            "odp_case": self.odp_case,
            "arnold": self.arnold,
            "m0": self.m0,
            "m1": self.m1,
            "holds_18": self.holds_18,
            "m0_alt": self.m0_alt,
            "m1_alt": self.m1_alt,
            "m2_alt": self.m2_alt,
            "holds_4101": list(self.holds_4101),
            "hypotheses_hold": self.hypotheses_hold,
            "predicted_k_min": self.predicted_k_min,
            "predicted_k_max": self.predicted_k_max,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Theorem5":
        data = dict(data)
        data["holds_4101"] = tuple(data["holds_4101"])
        return cls(**data)


def _int_range(lo: Fraction, hi: Fraction, lo_open=False, hi_open=False) -> range:
    a = floor(lo) + 1 if lo_open else ceil(lo)
    b = ceil(hi) - 1 if hi_open else floor(hi)
    return range(a, b + 1)


def theorem5_check(tau: int, gamma: GradedTable, szd: SingularityData, n: int, d: int,
                   beta) -> Theorem5:
    """Hypotheses and predicted ``(k_min, k_max)`` of the node/low-Tjurina criterion.

    ``beta`` is ``beta_f`` (``None`` for infinity).  Index sets that turn out
    empty make the corresponding inequality vacuous.
    """
    if d < n:
        raise NotApplicable(f"needs d >= n (d = {d}, n = {n})")
    ar = koszul.arnold_number(n, d) if n >= 2 else 0
    odp = szd.all_odp
    if odp and tau > ar:
        raise ArnoldBoundViolation(f"{tau} nodes exceed the bound {ar} for degree {d}")
    at = szd.alpha_tilde
    drz = lambda k: Fraction(k, d) in szd.R_Z  # noqa: E731
    if at is None:
        m0 = m1 = m0a = m1a = m2a = None
        holds18, h = True, (True, True, True)
    else:
        m0 = ceil(d * at)
        m1 = min(ceil(Fraction(d * (n - 1), 2)), ceil(d * (at + 1)))
        holds18 = tau < min(2 * gamma[m0], gamma[m1])
        s0 = [k for k in _int_range(d * at, Fraction(d * (n - 1), 2)) if not drz(k)]
        s1 = [k for k in _int_range(Fraction(d * (n - 1), 2), Fraction(d * n, 2), True, True)
              if not drz(k)]
        s2 = [k for k in _int_range(Fraction(d * n, 2), d * (n - 1 - at)) if not drz(k)]
        m0a = min(s0) if s0 else None
        m1a = min(s1) if s1 else None
        m2a = max(s2) if s2 else None
        h = (m0a is None or tau < 2 * gamma[m0a],
             m1a is None or tau < gamma[m1a],
             m2a is None or tau < gamma[m2a])
    kmax = n * (d - 1) - (d if beta is None else min(d, beta))
    return Theorem5(odp, ar, m0, m1, holds18, m0a, m1a, m2a, h,
                    odp or holds18 or all(h), n, kmax)


def euler_char(szd: SingularityData, n: int, d: int, delta: GradedTable | None = None) -> int:
    """``chi(U)`` of the complement of ``Z``, with consistency checks.

    Every ``k`` in ``1..d-1`` must give the same value, for ``n = 3`` it must
    match ``(d-1)(d-2) + 1 - mu_Z``, and with ``delta`` the sums of
    ``delta`` over each residue class mod ``d`` must equal
    ``(-1)^{n-1} chi`` (or ``(-1)^{n-1} (chi - 1)`` on multiples of ``d``).
    """
    gamma = koszul.gamma_table(n, d)
    sign = -1 if (n - 1) % 2 else 1
    values = {sign * (sum(gamma[j * d + k] for j in range(n)) - szd.mu_Z) for k in range(1, d)}
    alt = sign * (sum(gamma[j * d] for j in range(1, n)) - szd.mu_Z - (-1) ** n)
    values.add(alt)
    if len(values) != 1:
        raise ChiMismatch(f"inconsistent Euler characteristics {sorted(values)}")
    (chi,) = values
    if n == 3 and chi != (d - 1) * (d - 2) + 1 - szd.mu_Z:
        raise ChiMismatch(f"chi = {chi} disagrees with (d-1)(d-2)+1-mu_Z")
    if delta is not None:
        for r in range(d):
            s = sum(delta[k] for k in range(r, n * d, d))
            want = sign * (chi - 1) if r == 0 else sign * chi
            if s != want:
                raise ChiMismatch(f"delta sum over k = {r} mod {d} is {s}, expected {want}")
    return chi


def validate_W(tau: int, szd: SingularityData) -> None:
    if tau != szd.mu_Z:
        raise WViolation(tau, szd.mu_Z)


# ---------------------------------------------------------------------------
# report


TABLE_ORDER = ("gamma", "mu", "nu", "mu2", "nu2", "mu_dblprime", "mu_prime", "delta")


@dataclass(frozen=True)
class RootReport:
    poly: str
    n: int
    d: int
    tau: int
    singularities: SingularityData
    chi_U: int
    statuses: tuple[RootStatus, ...]
    cs_f: frozenset[int]
    condition11_holds: bool
    connected_outside: bool
    k_min: int | None
    k_max: int | None
    beta_f: int | None
    theorem5: Theorem5 | None
    corollary3_applicable: bool
    corollary3_dR0: frozenset[int] | None
    n3_kmax_variant: bool
    extremely_degenerated: bool | None
    tables: dict = field(default_factory=dict)

    # -- derived views --------------------------------------------------

    def values_with(self, status: str) -> list[Fraction]:
        return sorted(s.value for s in self.statuses if s.status == status)

    @property
    def R0(self) -> list[Fraction]:
        return self.values_with(ROOT_R0)

    @property
    def undetermined(self) -> list[Fraction]:
        return self.values_with(UNDETERMINED)

    @property
    def R_f(self) -> list[Fraction]:
        """``R_Z`` together with the certified roots (multiplicities not tracked)."""
        return sorted(set(self.singularities.R_Z) | set(self.R0))

    @property
    def corollary3_agrees(self) -> bool | None:
        if not self.corollary3_applicable:
            return None
        return {int(q * self.d) for q in self.R0} == set(self.corollary3_dR0) and \
            not self.undetermined

    @property
    def theorem5_prediction_matches(self) -> bool | None:
        t = self.theorem5
        if t is None or not t.hypotheses_hold:
            return None
        return (self.k_min, self.k_max) == (t.predicted_k_min, t.predicted_k_max)

    # -- serialization --------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "poly": self.poly,
            "n": self.n,
            "d": self.d,
            "tau": self.tau,
            "singularities": self.singularities.to_dict(),
            "chi_U": self.chi_U,
            "statuses": [s.to_dict() for s in self.statuses],
            "cs_f": sorted(self.cs_f),
            "condition11_holds": self.condition11_holds,
            "connected_outside": self.connected_outside,
            "k_min": self.k_min,
            "k_max": self.k_max,
            "beta_f": "inf" if self.beta_f is None else self.beta_f,
            "theorem5": None if self.theorem5 is None else self.theorem5.to_dict(),
            "corollary3_applicable": self.corollary3_applicable,
            "corollary3_dR0": None if self.corollary3_dR0 is None else sorted(self.corollary3_dR0),
            "n3_kmax_variant": self.n3_kmax_variant,
            "extremely_degenerated": self.extremely_degenerated,
            "tables": {k: self.tables[k].to_dict() for k in TABLE_ORDER if k in self.tables},
            "summary": {
                "R0": [fmt_rational(q) for q in self.R0],
                "undetermined": [fmt_rational(q) for q in self.undetermined],
                "R_Z": [fmt_rational(q) for q in sorted(self.singularities.R_Z)],
                "R_f": [fmt_rational(q) for q in self.R_f],
                "corollary3_agrees": self.corollary3_agrees,
                "theorem5_prediction_matches": self.theorem5_prediction_matches,
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "RootReport":
        from .localspec import LocalSingularity, aggregate

        sd = data["singularities"]
        szd = aggregate([LocalSingularity(tuple(parse_rational(w) for w in s["weights"]), s["count"])
                         for s in sd["singularities"]], sd["n"])
        beta = data["beta_f"]
        return cls(
            poly=data["poly"],
            n=data["n"],
            d=data["d"],
            tau=data["tau"],
            singularities=szd,
            chi_U=data["chi_U"],
            statuses=tuple(RootStatus.from_dict(s) for s in data["statuses"]),
            cs_f=frozenset(data["cs_f"]),
            condition11_holds=data["condition11_holds"],
            connected_outside=data["connected_outside"],
            k_min=data["k_min"],
            k_max=data["k_max"],
            beta_f=None if beta == "inf" else beta,
            theorem5=None if data["theorem5"] is None else Theorem5.from_dict(data["theorem5"]),
            corollary3_applicable=data["corollary3_applicable"],
            corollary3_dR0=None if data["corollary3_dR0"] is None
            else frozenset(data["corollary3_dR0"]),
            n3_kmax_variant=data["n3_kmax_variant"],
            extremely_degenerated=data["extremely_degenerated"],
            tables={k: GradedTable.from_dict(v) for k, v in data["tables"].items()},
        )

    @classmethod
    def from_json(cls, text: str) -> "RootReport":
        return cls.from_dict(json.loads(text))


def exit_code(report: RootReport) -> int:
    return 3 if report.undetermined else 0


# ---------------------------------------------------------------------------
# pipeline


def compute_tables(f: HomogPoly, method: str = "exact") -> dict[str, GradedTable]:
    """gamma, mu, nu, mu', mu'', delta for ``f`` (no singularity data needed)."""
    n, d = f.n_vars, f.degree
    gamma = koszul.gamma_table(n, d)
    mu = koszul.milnor_table(f, method)
    nu = koszul.nu_table(mu, gamma)
    tau = koszul.tau_from_mu(mu)
    mu_p, mu_pp = koszul.split_table(mu, nu, tau)
    delta = koszul.delta_table(mu, nu)
    return {"gamma": gamma, "mu": mu, "nu": nu, "mu_prime": mu_p, "mu_dblprime": mu_pp,
            "delta": delta}


def check_sandwich(delta: GradedTable, mu2: GradedTable, szd: SingularityData) -> None:
    """``delta_k <= mu2_k`` everywhere, with equality off ``d R_Z``."""
    d = delta.d
    for k in mu2.degrees():
        if delta[k] > mu2[k]:
            raise E2Mismatch(f"delta_{k} = {delta[k]} exceeds mu2_{k} = {mu2[k]}")
        if Fraction(k, d) not in szd.R_Z and delta[k] != mu2[k]:
            raise E2Mismatch(f"delta_{k} = {delta[k]} but mu2_{k} = {mu2[k]} off d R_Z")


def analyze(f: HomogPoly, szd: SingularityData, method: str = "exact",
            n3_kmax_variant: bool = False, e2: bool = False,
            tables: dict[str, GradedTable] | None = None,
            names=None) -> RootReport:
    """Full pipeline: tables, (W) check, Euler characteristic, classification,
    support diagnostics and threshold checks."""
    n, d = f.n_vars, f.degree
    if szd.n != n:
        raise InputError(f"singularity data is for n = {szd.n}, polynomial has n = {n}")
    tables = dict(tables) if tables else compute_tables(f, method)
    tau = koszul.tau_from_mu(tables["mu"])
    validate_W(tau, szd)
    delta = tables["delta"]
    chi = euler_char(szd, n, d, delta)
    if e2:
        mu2, nu2 = koszul.e2_tables(f, tables["nu"], method=method)
        check_sandwich(delta, mu2, szd)
        tables["mu2"], tables["nu2"] = mu2, nu2
    statuses = classify(delta, szd, n, d)
    cs = critical_set(szd, n, d)
    cond11 = condition11(tables["mu"], tables["nu"], cs)
    connected, kmin, kmax = connectedness(delta, szd, d)
    c3, dr0 = corollary3_check(kmin, kmax, connected, szd, n, d, n3_kmax_variant)
    beta = beta_f(tables["mu_prime"])
    try:
        t5 = theorem5_check(tau, tables["gamma"], szd, n, d, beta)
    except NotApplicable:
        t5 = None
    return RootReport(
        poly=f.to_string(names or default_names(n)),
        n=n,
        d=d,
        tau=tau,
        singularities=szd,
        chi_U=chi,
        statuses=tuple(statuses),
        cs_f=frozenset(cs),
        condition11_holds=cond11,
        connected_outside=connected,
        k_min=kmin,
        k_max=kmax,
        beta_f=beta,
        theorem5=t5,
        corollary3_applicable=c3,
        corollary3_dR0=None if dr0 is None else frozenset(dr0),
        n3_kmax_variant=n3_kmax_variant,
        extremely_degenerated=is_extremely_degenerated(f) if n == 3 else None,
        tables=tables,
    )
