"""Acceptance criteria. Each test prints one PASS/FAIL line and then asserts."""

import io
from fractions import Fraction as F
from itertools import product

import pytest

import goldens as G
import test_properties as P
from bsroots import bsengine, cli, koszul
from bsroots.errors import NotHomogeneous, WViolation
from bsroots.localspec import LocalSingularity, aggregate, milnor_number, spectrum
from bsroots.polyring import parse_expr, parse_poly


def fr(*qs):
    return {F(q) for q in qs}


class Checks:
    def __init__(self):
        self.failures = []

    def eq(self, label, got, want):
        if got != want:
            self.failures.append(f"{label}: got {got!r}, want {want!r}")

    def true(self, label, cond):
        if not cond:
            self.failures.append(label)

    def run(self, label, fn, *args):
        try:
            fn(*args)
        except AssertionError as e:
            self.failures.append(f"{label}: {e}")


@pytest.fixture
def report(capsys):
    def emit(number, title, checks):
        status = "PASS" if not checks.failures else "FAIL"
        with capsys.disabled():
            print(f"\n[criterion {number:2d}] {status}: {title}")
            for msg in checks.failures[:10]:
                print(f"    {msg}")
        assert not checks.failures, checks.failures
    return emit


def test_criterion_01_f1_table(report):
    c = Checks()
    t = G.tables("f1")
    c.eq("gamma", t["gamma"].window(3, 13), [1, 3, 6, 10, 12, 12, 10, 6, 3, 1, 0])
    c.eq("mu", t["mu"].window(3, 13), [1, 3, 6, 10, 12, 13, 13, 12, 12, 12, 12])
    c.eq("nu", t["nu"].window(3, 13), [0, 0, 0, 0, 0, 1, 3, 6, 9, 11, 12])
    c.eq("mu''", t["mu_dblprime"].window(3, 13), [1, 3, 6, 9, 11, 12, 12, 12, 12, 12, 12])
    c.eq("mu'", t["mu_prime"].window(3, 13), [0, 0, 0, 1, 1, 1, 1, 0, 0, 0, 0])
    mu2, _ = G.e2("f1")
    c.eq("mu2", mu2.window(3, 13), [0, 0, 0, 1, 1, 1, 1, 0, 0, 0, 0])
    c.eq("R0", set(G.report("f1").R0), fr("6/5", "7/5", "8/5", "9/5"))
    report(1, "f1 table rows and R0", c)


def test_criterion_02_f2(report):
    c = Checks()
    t = G.tables("f2")
    r = G.report("f2")
    c.eq("delta", t["delta"].poly_string(), "T^7+T^6+T^4+T^3")
    c.eq("mu' support", t["mu_prime"].support(), [])
    c.eq("R0", set(r.R0), fr("3/5", "4/5", "6/5", "7/5"))
    c.true("critical-degree condition holds", r.condition11_holds)
    c.eq("undetermined", r.undetermined, [])
    c.true("support criterion applies", r.corollary3_applicable)
    c.eq("support criterion roots", {F(k, 5) for k in r.corollary3_dR0 or ()}, set(r.R0))
    report(2, "f2 delta polynomial, R0, two routes agree", c)


def test_criterion_03_f4(report):
    c = Checks()
    t = G.tables("f4")
    mu2, nu2 = G.e2("f4")
    c.eq("gamma", t["gamma"].window(3, 19),
         [1, 3, 6, 10, 15, 21, 25, 27, 27, 25, 21, 15, 10, 6, 3, 1, 0])
    c.eq("mu", t["mu"].window(3, 19),
         [1, 3, 6, 10, 15, 21, 25, 28, 30, 31, 31, 30, 30, 30, 30, 30, 30])
    c.eq("nu", t["nu"].window(3, 19), [0] * 7 + [1, 3, 6, 10, 15, 20, 24, 27, 29, 30])
    c.eq("mu2", mu2.window(3, 19), [0, 1, 1, 1, 2, 2, 2, 2, 1, 1, 1, 0, 0, 0, 0, 0, 0])
    c.eq("nu2", nu2.window(3, 19), [0] * 8 + [1, 1, 1, 2, 1, 1, 1, 0, 0])
    c.eq("delta", t["delta"].window(3, 19), [0] * 5 + [1] * 6 + [0] * 6)
    r = G.report("f4")
    c.eq("CS", r.cs_f, {3})
    c.eq("undetermined", set(r.undetermined), fr("3/7"))
    c.eq("R0", set(r.R0), fr("11/7", "12/7", "13/7"))
    c.eq("critical-degree condition", r.condition11_holds, False)
    report(3, "f4 seven rows, CS, UNDETERMINED, critical-degree condition false", c)


def test_criterion_04_f6_f7(report):
    c = Checks()
    t = G.tables("f6")
    c.eq("f6 gamma", t["gamma"].window(4, 20),
         [1, 4, 10, 20, 35, 52, 68, 80, 85, 80, 68, 52, 35, 20, 10, 4, 1])
    c.eq("f6 mu", t["mu"].window(4, 21),
         [1, 4, 10, 20, 35, 52, 68, 80, 85, 80, 68, 56, 53, 52, 52, 52, 52, 52])
    c.eq("f6 nu", t["nu"].window(4, 21), [0] * 11 + [4, 18, 32, 42, 48, 51, 52])
    c.eq("f6 mu''", t["mu_dblprime"].window(4, 21), [1, 4, 10, 20, 34, 48] + [52] * 12)
    c.eq("f6 mu'", t["mu_prime"].window(4, 21),
         [0] * 4 + [1, 4, 16, 28, 33, 28, 16, 4, 1] + [0] * 5)
    c.eq("f6 delta", t["delta"].window(4, 21),
         [1, 4, 10, 20, 35, 48, 50, 48, 43, 32, 17, 4, 1] + [0] * 5)
    dpp = [t["delta"][k] - t["mu_prime"][k] for k in range(4, 22)]
    c.eq("f6 delta''", dpp, [1, 4, 10, 20, 34, 44, 34, 20, 10, 4, 1] + [0] * 7)
    r6 = G.report("f6")
    c.eq("f6 beta", r6.beta_f, 4)
    c.eq("f6 delta support", (min(t["delta"].support()), max(t["delta"].support())), (4, 16))
    c.eq("f6 k_max formula", r6.k_max, 4 * (6 - 1) - min(6, r6.beta_f))
    t = G.tables("f7")
    c.eq("f7 gamma", t["gamma"].window(5, 11), [1, 5, 10, 10, 5, 1, 0])
    c.eq("f7 mu", t["mu"].window(5, 11), [1, 5, 10, 10, 10, 10, 10])
    c.eq("f7 nu", t["nu"].window(5, 11), [0, 0, 0, 0, 5, 9, 10])
    c.eq("f7 mu''", t["mu_dblprime"].window(5, 11), [1, 5, 10, 10, 10, 10, 10])
    c.eq("f7 mu'", t["mu_prime"].support(), [])
    c.eq("f7 delta", t["delta"].window(5, 11), [1, 0, 1, 0, 0, 0, 0])
    r7 = G.report("f7")
    c.eq("f7 beta", r7.beta_f, None)
    c.eq("f7 R0", set(r7.R0), fr("5/3", "7/3"))
    report(4, "f6 and f7 tables, beta_f, k_max", c)


def _fam(kind, i, j):
    ws = [(F(1, i), F(1, j)), (F(j, (i + 1) * j), F(i, (i + 1) * j)),
          (F(j, i * j + i + j), F(i, i * j + i + j))][kind]
    mu = [(i - 1) * (j - 1), (i + 1) * (j - 1) + 1, (i + 1) * (j + 1)][kind]
    return ws, mu


def test_criterion_05_spectrum(report):
    c = Checks()
    out = io.StringIO()
    code = cli.main(["spectrum", "--weights", "2/11,3/11"], out)
    c.eq("exit code", code, 0)
    c.eq("cli output", out.getvalue(), "T^17+T^15+T^14+T^13+T^12+2T^11+T^10+T^9+T^8+T^7+T^5\n")
    for kind, i, j in product(range(3), range(2, 7), range(2, 7)):
        ws, mu = _fam(kind, i, j)
        c.eq(f"milnor family {kind} ({i},{j})", milnor_number(ws), mu)
        c.eq(f"spectrum size family {kind} ({i},{j})", len(spectrum(ws)), mu)
    report(5, "spectrum CLI and Milnor number families", c)


def test_criterion_06_arrangements(report):
    c = Checks()
    from bsroots.arrangements import arrangement
    deltas = {}
    for key, text in (("w1", G.WALTHER_1), ("w2", G.WALTHER_2), ("z", G.ZIEGLER)):
        f, _ = arrangement(text, "xyz")
        deltas[key] = bsengine.compute_tables(f)["delta"]
    c.eq("first arrangement degree", max(deltas["w1"].support()), 16)
    c.eq("second arrangement degree", max(deltas["w2"].support()), 15)
    c.eq("first equals Ziegler", deltas["w1"].values, deltas["z"].values)
    report(6, "Walther degrees 16/15 and Ziegler agreement", c)


def test_criterion_07_disconnected_mu_prime(report):
    c = Checks()
    for poly, vars_, want in G.DISCONNECTED_MU_PRIME:
        f = parse_expr(poly, vars_)
        mu = koszul.milnor_table(f)
        nu = koszul.nu_table(mu, koszul.gamma_table(4, f.degree))
        mp, _ = koszul.split_table(mu, nu, koszul.tau_from_mu(mu))
        c.eq(poly, mp.poly_string(), want)
    report(7, "disconnected mu' supports", c)


PROPERTY_CHECKS = [
    ("condition (W)", P.test_condition_w_holds),
    ("symmetries", P.test_symmetries),
    ("nu oracle", P.test_nu_equals_direct_koszul_rank),
    ("Koszul vanishing", P.test_koszul_vanishing_below_n_minus_1),
    ("delta = E2 off dR_Z", P.test_delta_equals_e2_off_drz),
    ("Euler residue sums", P.test_euler_residue_sums),
    ("nu vanishing bound", P.test_nu_vanishing_bound),
]


def test_criterion_08_properties(report):
    c = Checks()
    c.true(f"at least 20 random inputs (have {len(P.RANDOM)})", len(P.RANDOM) >= 20)
    for case in P.CASES:
        for label, fn in PROPERTY_CHECKS:
            c.run(f"{case.name} {label}", fn, case)
    for n, d in product(range(2, 7), range(2, 13)):
        c.run(f"gamma monotone n={n} d={d}", P.test_gamma_strictly_increasing, n, d)
    report(8, f"property suites on {len(P.RANDOM)} random inputs plus goldens", c)


def test_criterion_09_negative(report):
    c = Checks()
    f3 = parse_poly("x^5+x^3*y^2+y^4*z", "xyz")
    try:
        bsengine.analyze(f3, aggregate([LocalSingularity((F(1, 5), F(1, 4)))]))
        c.true("f3 accepted", False)
    except WViolation as e:
        c.eq("f3 tau vs mu", (e.tau, e.mu), (11, 12))
    f5 = G.poly_of(G.GOLDEN["f5"])
    partial = aggregate([LocalSingularity((F(3, 14), F(1, 7))),
                         LocalSingularity((F(1, 2), F(1, 2)))])
    try:
        bsengine.analyze(f5, partial)
        c.true("f5 without the hidden A1 accepted", False)
    except WViolation as e:
        c.eq("f5 tau vs mu", (e.tau, e.mu), (24, 23))
        c.true("message names 23 and 24", "23" in str(e) and "24" in str(e))
    try:
        parse_poly("x^5+y^4", "xyz")
        c.true("non-homogeneous accepted", False)
    except NotHomogeneous:
        pass
    report(9, "negative inputs rejected", c)


def test_criterion_10_arnold(report):
    c = Checks()
    for d, ar in ((3, 4), (4, 16), (5, 31), (6, 68)):
        c.eq(f"Ar n=4 d={d}", koszul.arnold_number(4, d), ar)
    for d in range(2, 13):
        c.eq(f"Ar n=3 d={d}", koszul.arnold_number(3, d), d * (d - 1) // 2)
    report(10, "Arnold numbers", c)
