"""Acceptance checks 1-11. Each test prints one PASS/FAIL line and asserts the criterion.

Run directly (``python tests/test_acceptance.py``) for the summary lines alone.
"""

from __future__ import annotations

import math
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from padicweights.characters import MultChar, characters_of_conductor
from padicweights.constants import generic_threshold, load_constants
from padicweights.degenerate import _pole_distance, d_f_star
from padicweights.dualweight import (tabulated_value, parity, rho_uv_brute, single_var_brute,
                                     single_var_closed)
from padicweights.integrate import fourier, random_schwartz
from padicweights.lfactors import gauss_sum, random_tate_case, verify_tate
from padicweights.padic_core import exp_level, log_level, n_alpha, quadratic_roots
from padicweights.scans import (golden_rows, atypical_scan, bench_fast_vs_brute, classify_summary,
                                dstar_bound, ratio_scaling, vanishing_scan)

CONST = load_constants()


@pytest.fixture
def report(capsys):
    def _report(idx: int, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {idx}: {detail}")
    return _report


# 1 ----------------------------------------------------------------------------------------


def test_criterion_01_single_variable(report):
    t0 = time.perf_counter()
    worst, count = 0.0, 0
    for p in (3, 5, 7, 13):
        for n in (1, 2, 3):
            for chi in characters_of_conductor(p, n):
                for a in range(n + 2):
                    err = abs(single_var_brute(chi, a) - single_var_closed(p, n, a))
                    worst = max(worst, err)
                    count += 1
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-9 and elapsed < 60
    report(1, ok, f"{count} integrals, max abs err {worst:.2e}, {elapsed:.1f} s")
    assert ok


# 2 ----------------------------------------------------------------------------------------


def test_criterion_02_trivial_omega_table(report):
    worst_literal, worst_corrected, bad = 0.0, 0.0, []
    for p in (3, 5):
        for n in (1, 2, 3):
            seen = set()
            for chi in characters_of_conductor(p, n):
                par = parity(chi)
                if par in seen:
                    continue
                seen.add(par)
                for a in range(n + 2):
                    for b in range(n + 2):
                        got = rho_uv_brute(chi, MultChar.trivial(p), a, b)
                        lit = abs(got - tabulated_value(p, n, a, b))
                        worst_literal = max(worst_literal, lit)
                        if lit >= 1e-8:
                            bad.append((p, n, par, a, b, got.real))
    ok = worst_literal < 1e-8
    detail = f"max abs err vs tabulated values {worst_literal:.2e}"
    if bad:
        detail += f"; {len(bad)} mismatches, e.g. (p, n, chi(-1), a, b, value) = {bad[0]}"
    report(2, ok, detail)
    assert ok


# 3 and 4 ------------------------------------------------------------------------------------


@pytest.fixture(scope="module")
def vanishing_rows():
    rows = []
    for n in (1, 2, 3, 4):
        chars = characters_of_conductor(5, n)
        picks = [chars[0]] if n == 4 else [chars[0], chars[len(chars) // 2 + 1]]
        for chi in picks:
            rows += vanishing_scan(chi)
    return rows


def test_criterion_03_vanishing(report, vanishing_rows):
    atol = CONST["zero_atol"]
    rows = [r for r in vanishing_rows if not r["zero_class"]]
    worst = max(r["max_off_support"] / (atol * r["terms"]) for r in rows)
    ok = worst < 1
    report(3, ok, f"{len(rows)} (chi, omega) pairs, worst |rho|/(1e-9 terms) = {worst:.2e}")
    assert ok


def test_criterion_04_zero_law(report, vanishing_rows):
    atol = CONST["zero_atol"]
    rows = [r for r in vanishing_rows if r["zero_class"]]
    worst = max(r["abs_value"] / (atol * r["terms"]) for r in rows)
    ok = worst < 1 and len(rows) > 0
    report(4, ok, f"{len(rows)} pairs with C(omega) > Q, worst |h~|/(1e-9 terms) = {worst:.2e}")
    assert ok


# 5 --------------------------------------------------------------------------------------------


def test_criterion_05_atypical(report):
    equal_all, subset_all, scaling_worst, lines = True, True, 0.0, []
    for p, ns in ((5, (2, 3, 4)), (13, (2, 3))):
        for n in ns:
            chi = characters_of_conductor(p, n)[0]
            rows = atypical_scan(chi)
            s = classify_summary(rows)
            equal_all &= s["equal"]
            subset_all &= s["exceeds_subset_flagged"]
            if n % 2 == 1:
                for r in rows:
                    if r["atypical"]:
                        scaling_worst = max(scaling_worst, ratio_scaling(r, p, n))
            lines.append(f"p={p},n={n}: exceeds={s['exceeds']} flagged={s['flagged']}")
    scaling_ok = scaling_worst <= CONST["atypical_const"]
    ok = equal_all and subset_all and scaling_ok
    report(5, ok, f"set equality {equal_all}, exceeds within flagged {subset_all}, "
                  f"worst ratio/(N_alpha q^1/2) {scaling_worst:.3f} (const {CONST['atypical_const']}); "
                  + "; ".join(lines))
    assert ok


# 6 -----------------------------------------------------------------------------------------------


def test_criterion_06_fast_vs_brute(report):
    r3 = bench_fast_vs_brute(5, 3, 100, seed=0)
    r4 = bench_fast_vs_brute(5, 4, 100, seed=1)
    rel = max(r3["max_rel_err"], r4["max_rel_err"])
    ok = rel < 1e-8 and r4["speedup"] >= 20
    report(6, ok, f"max rel err {rel:.2e}; speedup at Q=5^4 {r4['speedup']:.1f}x")
    assert ok


# 7 ------------------------------------------------------------------------------------------------


def test_criterion_07_tate(report):
    rng = np.random.default_rng(2024)
    worst = 0.0
    for i in range(200):
        phi, chi, s = random_tate_case(rng, (3, 5, 7)[i % 3])
        worst = max(worst, verify_tate(phi, chi, s).residual)
    inv = 0.0
    for i in range(50):
        p = (3, 5, 7)[i % 3]
        phi = random_schwartz(rng, p)
        twice = fourier(fourier(phi))
        for x in (Fraction(0), Fraction(1), Fraction(3, p), Fraction(p * p + 2), Fraction(1, p**2)):
            inv = max(inv, abs(twice(x) - phi(-x)))
    ok = worst < 1e-8 and inv < 1e-12
    report(7, ok, f"200 cases, worst residual {worst:.2e}; Fourier involution err {inv:.2e}")
    assert ok


# 8 -------------------------------------------------------------------------------------------------


def test_criterion_08_gauss(report):
    rng = np.random.default_rng(8)
    mod_err, support_ok = 0.0, True
    for _ in range(50):
        p = int(rng.choice([3, 5, 7, 11, 13]))
        n = int(rng.integers(1, 4))
        chars = characters_of_conductor(p, n)
        chi = chars[int(rng.integers(len(chars)))]
        u = int(rng.integers(1, p**n))
        while u % p == 0:
            u = int(rng.integers(1, p**n))
        g = gauss_sum(chi, Fraction(u, p**n))
        mod_err = max(mod_err, abs(abs(g) - p ** (-n / 2)))
        for v in range(-n - 2, 2):
            if v != -n:
                support_ok &= gauss_sum(chi, Fraction(u) * Fraction(p) ** v) == 0
    ok = support_ok and mod_err < 1e-10
    report(8, ok, f"support law exact: {support_ok}; max ||G| - q^(-n/2)| {mod_err:.2e}")
    assert ok


# 9 ---------------------------------------------------------------------------------------------------


def _region_point(rng, alpha):
    z = alpha * np.sqrt(rng.random(5)) * np.exp(2j * np.pi * rng.random(5))
    sign = 1 if rng.random() < 0.5 else -1
    s = (complex(z[0]), complex(z[1]), complex(z[2]))
    nu = (complex(z[3]) - sign * 0.5, complex(z[4]) + sign * 0.5)
    return s, nu


def test_criterion_09_dfstar(report):
    rng = np.random.default_rng(9)
    alpha = 0.05
    worst, cmax, bound_ratio, n_pts = 0.0, 0.0, 0.0, 0
    for p in (3, 5):
        for n in (2, 3):
            chi = characters_of_conductor(p, n)[int(rng.integers(0, 4))]
            pts = 0
            while pts < 20:
                s, nu = _region_point(rng, alpha)
                if _pole_distance(p, s[0], s[1], nu[0], nu[1]) < 0.05:
                    continue
                pts += 1
                closed = d_f_star(chi, s, nu, "closed")
                brute = d_f_star(chi, s, nu, "brute")
                worst = max(worst, abs(closed.D_star - brute.D_star) / abs(closed.D_star))
                cmax = max(cmax, abs(brute.c0), abs(brute.c1), abs(brute.c2))
                bound_ratio = max(bound_ratio, abs(closed.D_star) / dstar_bound(chi, alpha))
            n_pts += pts
    ok = worst < 1e-6 and cmax <= CONST["c_bound"] and bound_ratio <= 1
    report(9, ok, f"{n_pts} points, max rel err {worst:.2e}; max |c_i| {cmax:.3f} "
                  f"(bound {CONST['c_bound']}); max |D*|/(C Q^(k alpha)) {bound_ratio:.3f}")
    assert ok


# 10 ------------------------------------------------------------------------------------------------------


def test_criterion_10_padic_core(report):
    roundtrip_ok, roots_ok, checked = True, True, 0
    rng = np.random.default_rng(10)
    for p in (3, 5, 7, 11):
        m = 1
        while p**m <= 11**3:
            mod = p**m
            for a in range(0, mod, p):
                roundtrip_ok &= log_level(exp_level(a, p, m), p, m) == a
            for u in range(1, mod, p):
                roundtrip_ok &= exp_level(log_level(u, p, m), p, m) == u
            tau = np.arange(mod, dtype=np.int64)
            for xi in range(1, mod):
                if xi % p == 0:
                    continue
                x2 = xi * xi % mod
                brute = np.nonzero((x2 * tau % mod * tau - tau - 1) % mod == 0)[0].tolist()
                roots_ok &= sorted(quadratic_roots(x2, -1, -1, p, m)) == brute
                checked += 1
            for _ in range(300):
                a, b, c = (int(x) for x in rng.integers(0, mod, 3))
                if a == b == c == 0:
                    continue
                brute = np.nonzero((a * tau % mod * tau + b * tau + c) % mod == 0)[0].tolist()
                roots_ok &= sorted(quadratic_roots(a, b, c, p, m)) == brute
                checked += 1
            m += 1
    values_ok = n_alpha(1, 5, 1) == 1 and n_alpha(1, 5, 2) == 0
    ok = roundtrip_ok and roots_ok and values_ok
    report(10, ok, f"exp/log roundtrips {roundtrip_ok}; {checked} quadratics vs exhaustive {roots_ok}; "
                   f"N_1(1)=1, N_2(1)=0 at p=5: {values_ok}")
    assert ok


# 11 ------------------------------------------------------------------------------------------------------


def _numeric_close(a, b) -> bool:
    if isinstance(a, dict):
        return a.keys() == b.keys() and all(_numeric_close(a[k], b[k]) for k in a)
    if isinstance(a, (list, tuple)):
        return len(a) == len(b) and all(_numeric_close(x, y) for x, y in zip(a, b))
    if isinstance(a, float):
        return abs(a - b) <= 1e-12
    return a == b


def test_criterion_11_parallel(report):
    scans = {
        "atypical p=5 n=3": lambda w: atypical_scan(characters_of_conductor(5, 3)[0], workers=w),
        "vanishing p=5 n=2": lambda w: vanishing_scan(characters_of_conductor(5, 2)[1], workers=w),
        "golden p=3": lambda w: golden_rows(3, 3, all_chars=True, workers=w),
    }
    ok, parts = True, []
    for name, fn in scans.items():
        serial = fn(1)
        same = all(_numeric_close(serial, fn(w)) for w in (4, 8))
        ok &= same
        parts.append(f"{name}: {'identical' if same else 'DIFFERS'}")
    report(11, ok, "workers 1/4/8; " + "; ".join(parts))
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
