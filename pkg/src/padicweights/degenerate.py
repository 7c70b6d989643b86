"""Local factors of the degenerate terms.

D_{U,V} is the dyadic piece rho_{U,V} with omega trivial. With Q = C(chi),
x_i = q^(-1/2 + s_i - nu_i) and y_i = q^(-1/2 - s_i - nu_i) one has

    D_i = chi(+-1) Q^(-2 s2) sum_{a,b >= 0} x_i^a y_i^b D_{q^a, q^b},

D_3 = Q^(-2 s2) D_{1,1} and D_0 = D_1 + D_2 - D_3. D_1 carries chi(-1) and
(s1, nu1); D_2 carries (s2, nu2). The normalized value divides D_0 by
L(I(s1), 1/2 + nu1) L(I(s2), 1/2 + nu2) with L(I(s), w) = zeta(w + s) zeta(w - s),
i.e. multiplies it by P_i = (1 - x_i)(1 - y_i). The closed form below does that
multiplication symbolically, so it has no poles.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .characters import MultChar, unit_tables
from .dualweight import c_constants, parity, rho_uv_brute, single_var_brute, single_var_closed
from .dualweight import trivial_omega_table
from .errors import LevelTooLow, NearPole, RegimeMismatch
from .padic_core import vp

POLE_GUARD = 0.05
RADIUS_STEP = 0.01


def _exponent(p: int, X: int) -> int:
    """a with X = p^a."""
    if X < 1:
        raise ValueError("U and V must be positive powers of p")
    a = vp(Fraction(X), p)
    if p**a != X:
        raise ValueError(f"{X} is not a power of {p}")
    return int(a)


def _need_ramified(chi: MultChar) -> None:
    if not chi.ramified:
        raise RegimeMismatch("degenerate terms are defined for ramified chi")


def d_uv(chi: MultChar, U: int, V: int, mode: str = "closed", m: int | None = None) -> complex:
    """D_{U,V}; ``closed`` factors through the single-variable values, ``brute`` is the double sum."""
    _need_ramified(chi)
    p = chi.p
    a, b = _exponent(p, U), _exponent(p, V)
    if mode == "brute":
        return rho_uv_brute(chi, MultChar.trivial(p), a, b, m=m)
    if mode != "closed":
        raise ValueError(f"unknown mode {mode!r}")
    if a == 0 and b == 0:
        return complex(trivial_omega_table(p, chi.n, 0, 0, parity(chi)))
    return complex(single_var_closed(p, chi.n, a) * single_var_closed(p, chi.n, b))


def single_var(chi: MultChar, U: int, mode: str = "closed") -> complex:
    """int chi(1 - 1/u) over |u - 1| = |u| = U."""
    _need_ramified(chi)
    a = _exponent(chi.p, U)
    if mode == "brute":
        return single_var_brute(chi, a)
    return complex(single_var_closed(chi.p, chi.n, a))


# --- the closed form ---------------------------------------------------------------------


def _xy(q: int, s, nu):
    x = np.power(complex(q), -0.5 + s - nu)
    y = np.power(complex(q), -0.5 - s - nu)
    return x, y


def _cleared_piece(q, n, c, s, nu):
    """(xy)^n [c0/q^2 (xy)^-1 P + c1/q (x^-1 (1-x) + y^-1 (1-y)) + c2], i.e. D_i P_i without the prefactor."""
    c0, c1, c2 = c
    x, y = _xy(q, s, nu)
    P = (1 - x) * (1 - y)
    xy = x * y
    inner = c0 / q**2 * P / xy + c1 / q * ((1 - x) / x + (1 - y) / y) + c2
    return xy**n * inner, P


def _closed_star(q, n, c, par, d11, s1, s2, nu1, nu2):
    """D_f* from constants; vectorizes over numpy arrays of (s1, s2, nu1, nu2)."""
    pre = np.power(complex(q**n), -2 * s2)
    E1, P1 = _cleared_piece(q, n, c, s1, nu1)
    E2, P2 = _cleared_piece(q, n, c, s2, nu2)
    return pre * (par * E1 * P2 + E2 * P1 - d11 * P1 * P2)


def geometric_factor(q: int, s: complex, nu: complex) -> complex:
    """1/((1 - x)(1 - y)): the c2 factor of D_i."""
    x, y = _xy(q, s, nu)
    return complex(1 / ((1 - x) * (1 - y)))


def d_i_closed(chi: MultChar, i: int, s1: complex, s2: complex, nu: complex,
               constants: tuple | None = None) -> complex:
    """D_1 (i = 1, uses s1 and chi(-1)) or D_2 (i = 2) by geometric series."""
    _need_ramified(chi)
    q, n = chi.p, chi.n
    par = parity(chi)
    c = constants or c_constants(q, n, par)
    s = s1 if i == 1 else s2
    E, P = _cleared_piece(q, n, c, s, nu)
    if abs(P) < 1e-14:
        raise NearPole("geometric series at its pole")
    sign = par if i == 1 else 1
    return complex(sign * complex(q**n) ** (-2 * s2) * E / P)


def d_11(chi: MultChar) -> complex:
    return d_uv(chi, 1, 1)


@dataclass(frozen=True)
class DegenEval:
    chi: MultChar
    s: tuple[complex, complex, complex]
    nu: tuple[complex, complex]
    c0: complex
    c1: complex
    c2: complex
    D_star: complex
    mode: str = "closed"

    def as_dict(self) -> dict:
        cx = lambda z: [float(complex(z).real), float(complex(z).imag)]  # noqa: E731
        return {"chi": self.chi.spec(), "s": [cx(z) for z in self.s], "nu": [cx(z) for z in self.nu],
                "c0": cx(self.c0), "c1": cx(self.c1), "c2": cx(self.c2), "D_star": cx(self.D_star),
                "mode": self.mode}


def constants_from_pieces(chi: MultChar, mode: str = "closed") -> tuple[complex, complex, complex]:
    """Read (c0, c1, c2) off D_{Q/q,Q/q} = c0/q^2, D_{Q/q,Q} = c1/q, D_{Q,Q} = c2."""
    q, n = chi.p, chi.n
    e = q ** (n - 1)
    c0 = d_uv(chi, e, e, mode) * q**2
    c1 = d_uv(chi, e, q**n, mode) * q
    c2 = d_uv(chi, q**n, q**n, mode)
    return c0, c1, c2


def _pole_distance(q: int, s1, s2, nu1, nu2) -> float:
    d = []
    for s, nu in ((s1, nu1), (s2, nu2)):
        x, y = _xy(q, s, nu)
        d += [abs(1 - x), abs(1 - y)]
    return min(d)


def d_f_star(chi: MultChar, s, nu, mode: str = "closed") -> DegenEval:
    """Normalized degenerate factor at deformation s = (s1, s2, s3) and nu = (nu1, nu2).

    ``closed`` is the cleared geometric-series formula and is entire.
    ``dyadic`` sums brute-force D_{U,V} on a finite window and continues the
    constant tails geometrically. ``brute`` integrates h^sharp[s](t) against
    |t|^(-1/2 + nu2 - s2) |1 - t|^(-1/2 + nu1 - s1) shell by shell in t. The
    last two divide by the L-factors implicitly and refuse points within
    POLE_GUARD of a pole.
    """
    from .transforms import DeformParams

    _need_ramified(chi)
    sp = DeformParams(*s)
    s1, s2, s3 = sp.s1, sp.s2, sp.s3
    nu1, nu2 = (complex(z) for z in nu)
    q, n = chi.p, chi.n
    par = parity(chi)
    if mode == "closed":
        c = c_constants(q, n, par)
        d11 = complex(trivial_omega_table(q, n, 0, 0, par))
        val = complex(_closed_star(q, n, c, par, d11, s1, s2, nu1, nu2))
        return DegenEval(chi, (s1, s2, s3), (nu1, nu2), *c, val, mode)
    dist = _pole_distance(q, s1, s2, nu1, nu2)
    if dist < POLE_GUARD:
        raise NearPole(f"pole distance {dist:.3g} below {POLE_GUARD}")
    P1 = 1 / geometric_factor(q, s1, nu1)
    P2 = 1 / geometric_factor(q, s2, nu2)
    if mode == "dyadic":
        c = constants_from_pieces(chi, "brute")
        D0 = _d0_dyadic(chi, s1, s2, nu1, nu2)
    elif mode == "brute":
        c = constants_from_pieces(chi, "brute")
        D0 = d0_via_hsharp(chi, sp, nu1, nu2)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return DegenEval(chi, (s1, s2, s3), (nu1, nu2), *c, complex(D0 * P1 * P2), mode)


def _d0_dyadic(chi: MultChar, s1, s2, nu1, nu2) -> complex:
    """D_1 + D_2 - D_3 from brute-force pieces on a, b <= n plus geometric tails.

    For a >= n (resp. b >= n) the piece no longer depends on a (resp. b), so
    the pieces at a = n or b = n stand for their whole tails.
    """
    q, n = chi.p, chi.n
    par = parity(chi)
    pieces = {(a, b): d_uv(chi, q**a, q**b, "brute") for a in range(n + 1) for b in range(n + 1)}
    pre = complex(q**n) ** (-2 * s2)

    def side(s, nu):
        x, y = _xy(q, s, nu)
        total = 0j
        for (a, b), D in pieces.items():
            wa = x**a / (1 - x) if a == n else x**a
            wb = y**b / (1 - y) if b == n else y**b
            total += wa * wb * D
        return total

    return pre * (par * side(s1, nu1) + side(s2, nu2) - pieces[(0, 0)])


def _tail_sum(u: list[complex], rho: complex, r: complex, K: int) -> complex:
    """sum_{k > K} u_k r^k, given u_k = alpha + beta g_k with g_k = sum_{i<k} rho^i for large k."""
    g = [sum(rho**i for i in range(k)) for k in (K - 2, K - 1, K)]
    beta = (u[-1] - u[-2]) / rho ** (K - 1)
    alpha = u[-1] - beta * g[2]
    pred = alpha + beta * g[0]
    if abs(pred - u[-3]) > 1e-9 * (1 + abs(u[-1])):
        raise LevelTooLow("t-shell integrals have not stabilized; raise shells")
    K1 = K + 1
    gK1 = g[2] + rho**K
    return r**K1 * (alpha / (1 - r) + beta * (gK1 / (1 - r) + rho**K1 * r / ((1 - r) * (1 - rho * r))))


def d0_via_hsharp(chi: MultChar, s, nu1: complex, nu2: complex, shells: int | None = None) -> complex:
    """D_0 = int h^sharp[s](t) |t|^(-1/2 + nu2 - s2) |1 - t|^(-1/2 + nu1 - s1) dt.

    On |t| = q^-k the unit part of the shell is alpha + beta g_k with
    g_k = sum_{i<k} q^(-2 i s2) once k is at least twice the conductor
    exponent (symmetrically near t = 1 with s1); the tail is summed in closed form.
    """
    from .transforms import KernelSpec, h_sharp

    p, n = chi.p, chi.n
    K = KernelSpec(chi)
    units = unit_tables(p, n).units
    scale = float(p) ** (-n)
    K_max = shells if shells is not None else 2 * n + 3

    total = 0j
    for t in units:
        if int(t) % p != 1:
            total += h_sharp(K, Fraction(int(t)), s)
    total *= scale
    for near_one in (False, True):
        si, nui = (s.s1, nu1) if near_one else (s.s2, nu2)
        r = complex(p) ** (-(0.5 + nui - si))
        rho = complex(p) ** (-2 * si)
        u = []
        for k in range(1, K_max + 1):
            acc = 0j
            for w in units:
                t = 1 - Fraction(p**k * int(w)) if near_one else Fraction(p**k * int(w))
                acc += h_sharp(K, t, s)
            u.append(acc * scale)
        total += sum(uk * r**k for k, uk in zip(range(1, K_max + 1), u))
        total += _tail_sum(u, rho, r, K_max)
    return total


# --- the weight norm ------------------------------------------------------------------------


@dataclass(frozen=True)
class WeightNormReport:
    chi: MultChar
    alpha: float
    grid: dict
    sup_estimate: float
    c0: float
    c1: float
    c2: float
    argmax: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        d = {k: v for k, v in asdict(self).items() if k != "chi"}
        d["chi"] = self.chi.spec()
        return d

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)


def radii(alpha: float, step: float = RADIUS_STEP) -> list[float]:
    """Sampling radii k*step <= alpha (and alpha itself when it is not on the lattice)."""
    kmax = int(math.floor(alpha / step + 1e-9))
    return [k * step for k in range(1, kmax + 1)] or [alpha]


def n_alpha_weightnorm(chi: MultChar, alpha: float, grid_density: int = 7,
                       step: float = RADIUS_STEP) -> WeightNormReport:
    """Grid estimate of sup |D_f*| over the polydisk region, both sign choices.

    D_f* is holomorphic in each variable, so for each radius the sup over the
    polydisk is attained on the torus; we sample the torus at every lattice
    radius up to alpha with ``grid_density`` angles per variable. The lattice
    radii make the estimate nondecreasing in alpha. s3 does not enter.
    """
    _need_ramified(chi)
    if not 0 < alpha <= 0.1:
        raise ValueError("alpha must lie in (0, 0.1]")
    q, n = chi.p, chi.n
    par = parity(chi)
    c = c_constants(q, n, par)
    d11 = complex(trivial_omega_table(q, n, 0, 0, par))
    ang = np.exp(2j * np.pi * np.arange(grid_density) / grid_density)
    best, arg = 0.0, {}
    rs = radii(alpha, step)
    for rad in rs:
        pts = rad * ang
        S1, S2, N1, N2 = np.meshgrid(pts, pts, pts, pts, indexing="ij")
        for sign in (1, -1):
            vals = np.abs(_closed_star(q, n, c, par, d11, S1, S2, N1 - sign * 0.5, N2 + sign * 0.5))
            i = int(np.argmax(vals))
            if vals.flat[i] > best:
                best = float(vals.flat[i])
                idx = np.unravel_index(i, vals.shape)
                arg = {"radius": rad, "sign": sign, "angles": [int(j) for j in idx]}
    grid = {"angles_per_variable": grid_density, "radii": rs, "points": 2 * len(rs) * grid_density**4}
    return WeightNormReport(chi, alpha, grid, best, float(c[0]), float(c[1]), float(c[2]), arg)


def degenerate_grid(chi: MultChar, alpha: float, points: int = 20, seed: int = 0):
    """Deterministic pseudo-random (s, nu) in the region, for bound checks."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(points):
        z = alpha * np.sqrt(rng.random(4)) * np.exp(2j * np.pi * rng.random(4))
        sign = 1 if rng.random() < 0.5 else -1
        out.append(((complex(z[0]), complex(z[1]), 0j), (complex(z[2]) - sign * 0.5, complex(z[3]) + sign * 0.5)))
    return out

