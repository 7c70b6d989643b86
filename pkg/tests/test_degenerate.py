import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from padicweights.characters import MultChar, characters_of_conductor
from padicweights.degenerate import (constants_from_pieces, d_f_star, d_i_closed, d_uv,
                                     degenerate_grid, geometric_factor, n_alpha_weightnorm, single_var)
from padicweights.errors import NearPole, RegimeMismatch


@pytest.mark.parametrize("p", [3, 5, 7])
def test_d_uv_closed_equals_brute_full_grid(p):
    for n in (1, 2, 3):
        if p**n > 343:
            continue
        chars = characters_of_conductor(p, n)
        for chi in (chars[0], chars[-1]):
            for a in range(n + 2):
                for b in range(n + 2):
                    U, V = p**a, p**b
                    assert abs(d_uv(chi, U, V, "closed") - d_uv(chi, U, V, "brute")) < 1e-12


def test_d_uv_examples():
    p = 5
    chi = characters_of_conductor(p, 2)[0]
    Q = 25
    assert d_uv(chi, Q // p, Q) == pytest.approx((-1 / p) * (1 - 1 / p))
    assert d_uv(chi, Q // p, Q // p) == pytest.approx(1 / p**2)
    even = [c for c in characters_of_conductor(7, 1) if c(-1).real > 0][0]
    assert d_uv(even, 1, 1) == pytest.approx(2 / 49)


def test_single_var_values():
    chi = characters_of_conductor(5, 3)[0]
    assert single_var(chi, 5) == 0
    assert single_var(chi, 25) == pytest.approx(-1 / 5)
    assert single_var(chi, 125) == pytest.approx(1 - 1 / 5)
    for U in (1, 5, 25, 125, 625):
        assert abs(single_var(chi, U, "brute") - single_var(chi, U)) < 1e-10


def test_ramified_required():
    with pytest.raises(RegimeMismatch):
        d_uv(MultChar.trivial(5), 1, 1)


def test_constants_read_from_pieces():
    for p, n in ((3, 1), (3, 2), (5, 3)):
        for chi in characters_of_conductor(p, n)[:2]:
            closed = constants_from_pieces(chi)
            brute = constants_from_pieces(chi, "brute")
            assert np.allclose(closed, brute, atol=1e-12)
            assert all(abs(c) <= 2 for c in closed)


def test_geometric_factor_at_origin():
    q = 5
    assert geometric_factor(q, 0, 0) == pytest.approx(1 / (1 - q**-0.5) ** 2)


def test_d_i_sum_reproduces_series():
    chi = characters_of_conductor(3, 2)[0]
    q, n = 3, 2
    s, nu = 0.02, 0.1
    x, y = q ** (-0.5 + s - nu), q ** (-0.5 - s - nu)
    direct = sum(x**a * y**b * d_uv(chi, q**a, q**b) for a in range(60) for b in range(60))
    got = d_i_closed(chi, 2, 0.0, s, nu)
    assert got == pytest.approx(q ** (-2 * n * s) * direct, rel=1e-12)


@given(st.sampled_from([(3, 2), (3, 3), (5, 2), (5, 3)]), st.integers(0, 2**31))
def test_closed_vs_brute_modes(pn, seed):
    p, n = pn
    chi = characters_of_conductor(p, n)[seed % 4]
    rng = np.random.default_rng(seed)
    s = tuple(complex(*rng.uniform(-0.1, 0.1, 2)) for _ in range(3))
    nu = tuple(complex(*rng.uniform(-0.3, 0.3, 2)) for _ in range(2))
    try:
        b = d_f_star(chi, s, nu, "brute").D_star
    except NearPole:
        return
    a = d_f_star(chi, s, nu, "closed").D_star
    d = d_f_star(chi, s, nu, "dyadic").D_star
    scale = max(abs(a), 1e-9)
    assert abs(a - b) / scale < 1e-6 and abs(a - d) / scale < 1e-6


def test_brute_refuses_poles():
    chi = characters_of_conductor(3, 2)[0]
    with pytest.raises(NearPole):
        d_f_star(chi, (0, 0, 0), (-0.5, 0.5), "brute")
    assert np.isfinite(d_f_star(chi, (0, 0, 0), (-0.5, 0.5)).D_star)


def test_cauchy_riemann_sanity():
    chi = characters_of_conductor(5, 2)[0]
    h = 1e-6
    for pt in degenerate_grid(chi, 0.05, 8, seed=2):
        s, nu = pt
        f = lambda z: d_f_star(chi, (z, s[1], 0), nu).D_star  # noqa: E731
        z0 = s[0]
        dx = (f(z0 + h) - f(z0 - h)) / (2 * h)
        dy = (f(z0 + 1j * h) - f(z0 - 1j * h)) / (2 * h)
        assert abs(dy - 1j * dx) < 1e-4


def test_weightnorm_report_and_monotone():
    chi = characters_of_conductor(5, 3)[0]
    rep = n_alpha_weightnorm(chi, 0.05, 7)
    again = n_alpha_weightnorm(chi, 0.05, 7)
    assert abs(rep.sup_estimate - again.sup_estimate) < 1e-12
    d = json.loads(rep.to_json())
    assert set(d) >= {"chi", "alpha", "grid", "sup_estimate", "c0", "c1", "c2"}
    vals = [n_alpha_weightnorm(chi, a, 5).sup_estimate for a in (0.01, 0.02, 0.05, 0.08, 0.1)]
    assert all(u <= v for u, v in zip(vals, vals[1:]))
    assert all(math.isfinite(v) for v in vals)
