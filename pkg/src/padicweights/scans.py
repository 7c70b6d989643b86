"""Scans over families of characters; rows are plain dicts, ready for JSON or TSV."""

from __future__ import annotations

import math

from .characters import MultChar, characters_of_conductor
from .constants import generic_threshold, load_constants
from .dualweight import (BOUND_ZERO, dual_weight, tabulated_value, predicted_support,
                         rho_uv_brute, single_var_brute, single_var_closed, trivial_omega_table, parity)
from .parallel import pmap


def omegas(p: int, exps) -> list[MultChar]:
    out = []
    for m in exps:
        out.extend(characters_of_conductor(p, m))
    return out


def dual_weight_row(pair: tuple[MultChar, MultChar]) -> dict:
    chi, omega = pair
    rep = dual_weight(chi, omega)
    xc = rep.atypical
    return {"chi": chi.spec(), "omega": omega.spec(), "omega_n": omega.n,
            "value_re": rep.value.real, "value_im": rep.value.imag, "abs_value": abs(rep.value),
            "max_ratio": rep.max_ratio, "bound_class": rep.bound_class, "terms": rep.terms,
            "atypical": bool(xc.atypical) if xc else False,
            "xi": xc.xi if xc else None, "n_alpha": xc.n_alpha if xc else None}


def atypical_scan(chi: MultChar, omega_exps=None, workers: int = 1) -> list[dict]:
    """h~(omega) and the piece ratio |rho_{U,V}| Q/sqrt(UV) for every omega of the given conductors."""
    exps = range(1, chi.n + 1) if omega_exps is None else omega_exps
    rows = pmap(dual_weight_row, [(chi, om) for om in omegas(chi.p, exps)], workers)
    thr = generic_threshold(chi.p)
    for r in rows:
        r["exceeds"] = r["max_ratio"] > thr
        r["threshold"] = thr
    return rows


def classify_summary(rows: list[dict]) -> dict:
    exceeds = {(r["chi"], r["omega"]) for r in rows if r["exceeds"]}
    flagged = {(r["chi"], r["omega"]) for r in rows if r["atypical"]}
    return {"exceeds": len(exceeds), "flagged": len(flagged),
            "exceeds_subset_flagged": exceeds <= flagged, "equal": exceeds == flagged,
            "flagged_not_exceeding": len(flagged - exceeds)}


def _vanishing_row(args) -> dict:
    chi, omega = args
    support = predicted_support(chi, omega)
    rep = dual_weight(chi, omega)
    worst = 0.0
    for (sign, a, b), v in rep.pieces.items():
        om = omega if sign == 1 else omega.inverse()
        if predicted_support(chi, om) != (a, b):
            worst = max(worst, abs(v))
    return {"chi": chi.spec(), "omega": omega.spec(), "support": support, "max_off_support": worst,
            "abs_value": abs(rep.value), "terms": rep.terms, "zero_class": rep.bound_class == BOUND_ZERO}


def vanishing_scan(chi: MultChar, workers: int = 1) -> list[dict]:
    """Largest off-support piece for every ramified omega with C(omega) <= qQ."""
    return pmap(_vanishing_row, [(chi, om) for om in omegas(chi.p, range(1, chi.n + 2))], workers)


def _golden_row(args) -> dict:
    chi, a, b = args
    p, n = chi.p, chi.n
    if b is None:
        expected = single_var_closed(p, n, a)
        computed = single_var_brute(chi, a)
        kind, literal = "single", expected
    else:
        expected = trivial_omega_table(p, n, a, b, parity(chi))
        computed = rho_uv_brute(chi, MultChar.trivial(p), a, b)
        kind, literal = "table", tabulated_value(p, n, a, b)
    return {"kind": kind, "chi": chi.spec(), "U": p**a, "V": None if b is None else p**b,
            "expected": expected, "literal": literal, "computed_re": computed.real,
            "computed_im": computed.imag, "err": abs(computed - expected)}


def golden_rows(p: int, max_n: int, all_chars: bool = False, workers: int = 1) -> list[dict]:
    """Single-variable values and the C(omega) = 1 table against brute force, U, V up to qQ."""
    jobs = []
    for n in range(1, max_n + 1):
        chars = characters_of_conductor(p, n)
        if not all_chars:
            chars = _representatives(chars)
        for chi in chars:
            jobs += [(chi, a, None) for a in range(n + 2)]
            jobs += [(chi, a, b) for a in range(n + 2) for b in range(n + 2)]
    return pmap(_golden_row, jobs, workers)


def _representatives(chars: list[MultChar]) -> list[MultChar]:
    """One even and one odd character (when both exist)."""
    out = {}
    for c in chars:
        out.setdefault(parity(c), c)
    return list(out.values())


def dstar_bound(chi: MultChar, alpha: float, constants: dict | None = None) -> float:
    c = constants or load_constants()
    return c["dstar_const"] * chi.conductor ** (c["dstar_exponent"] * alpha)


def ratio_scaling(row: dict, p: int, n: int) -> float:
    """max_ratio / (max(N_alpha, 1) q^(1/2 if n odd))."""
    return row["max_ratio"] / (max(row["n_alpha"] or 0, 1) * (math.sqrt(p) if n % 2 else 1.0))



def stationary_cases(p: int, n: int, count: int, seed: int = 0) -> list[tuple]:
    """Random (chi, omega, a, b) inside the stationary-phase regime, C(chi) = q^n."""
    import numpy as np

    from .dualweight import in_stationary_regime

    rng = np.random.default_rng(seed)
    chis = characters_of_conductor(p, n)
    out = []
    while len(out) < count:
        chi = chis[int(rng.integers(len(chis)))]
        c = int(rng.integers(1, n + 1))
        oms = characters_of_conductor(p, c)
        om = oms[int(rng.integers(len(oms)))]
        a, b = (int(x) for x in rng.integers(0, n, size=2))
        if in_stationary_regime(chi, om, a, b):
            out.append((chi, om, a, b))
    return out


def bench_fast_vs_brute(p: int, n: int, count: int = 100, seed: int = 0, repeats: int = 3) -> dict:
    """Agreement first, then best-of-``repeats`` wall time for each evaluator."""
    import time

    from .dualweight import rho_uv_brute, rho_uv_fast, term_count

    cases = stationary_cases(p, n, count, seed)
    fast = [rho_uv_fast(*c) for c in cases]
    brute = [rho_uv_brute(*c) for c in cases]
    # values below the zero tolerance of the sum are compared on that scale
    atol = load_constants()["zero_atol"]
    floors = [atol * term_count(c[0], c[1]) for c in cases]
    rel = max(abs(f - b) / max(abs(b), fl) for f, b, fl in zip(fast, brute, floors))

    def best(fn):
        times = []
        for _ in range(repeats):
            t0 = time.perf_counter()
            for c in cases:
                fn(*c)
            times.append(time.perf_counter() - t0)
        return min(times)

    t_fast, t_brute = best(rho_uv_fast), best(rho_uv_brute)
    return {"p": p, "n": n, "cases": count, "seed": seed, "max_rel_err": rel, "rel_floor": min(floors),
            "t_fast": t_fast, "t_brute": t_brute, "speedup": t_brute / t_fast}
