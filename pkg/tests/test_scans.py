import pytest

from padicweights.characters import characters_of_conductor
from padicweights.parallel import pmap
from padicweights.scans import (golden_rows, atypical_scan, bench_fast_vs_brute, classify_summary,
                                stationary_cases, vanishing_scan)


def _sq(x):
    return x * x


def test_pmap_order_and_errors():
    assert pmap(_sq, range(10), workers=3) == [x * x for x in range(10)]
    with pytest.raises(ValueError):
        pmap(_sq, [1], workers=0)


def test_scan_serial_equals_parallel():
    chi = characters_of_conductor(5, 2)[0]
    assert atypical_scan(chi, workers=1) == atypical_scan(chi, workers=2)


def test_classify_summary_p5_n3():
    rows = atypical_scan(characters_of_conductor(5, 3)[0])
    s = classify_summary(rows)
    assert s["exceeds_subset_flagged"] and s["exceeds"] > 0


def test_vanishing_scan_small():
    rows = vanishing_scan(characters_of_conductor(5, 2)[1])
    assert max(r["max_off_support"] for r in rows) < 1e-12
    assert all(r["abs_value"] < 1e-12 for r in rows if r["zero_class"])


def test_golden_rows_exact():
    rows = golden_rows(3, 2, all_chars=True)
    assert max(r["err"] for r in rows) < 1e-12


def test_stationary_cases_and_bench():
    cases = stationary_cases(5, 3, 5, seed=1)
    assert len(cases) == 5
    rec = bench_fast_vs_brute(5, 3, 10, seed=1, repeats=1)
    assert rec["max_rel_err"] < 1e-8
