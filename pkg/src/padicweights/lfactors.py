"""Local zeta, L, epsilon and gamma factors for GL(1); Gauss sums; Tate's local functional equation.

Conventions, pinned by :func:`verify_tate` rather than by tabulation:

* ``fourier`` is phi^(y) = int phi(x) psi(x y) dx with psi unramified and vol(o) = 1;
* Z(phi, chi, s) = int phi(x) chi(x) |x|^s d^x x;
* Z(phi^, chi^-1, 1 - s) = gamma(psi, chi, s) Z(phi, chi, s);
* for C(chi) = q^n > 1, gamma = q^(n(1-s)) chi(p)^n G(chi^-1, p^-n), where
  G(chi, xi) = int_{o^x} chi(y) psi(xi y) dy.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .characters import AddChar, MultChar, unit_tables
from .errors import NearPole, Pole
from .integrate import POLE_DIST, SchwartzBruhat, fourier, mellin_with_tails
from .padic_core import ValuedUnit, frac_p, reduce_mod, split_unit, vp


def zeta_F(p: int, s: complex) -> complex:
    """(1 - q^-s)^-1."""
    d = 1 - complex(p) ** (-s)
    if abs(d) < 1e-14:
        raise Pole(f"zeta_F has a pole at s={s}")
    return 1 / d


@dataclass(frozen=True)
class LocalLFactor:
    """prod_j (1 - u_j q^-s)^-1."""

    p: int
    roots: tuple[complex, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "roots", tuple(complex(u) for u in self.roots if u != 0))

    @classmethod
    def of_char(cls, chi: MultChar) -> "LocalLFactor":
        return cls(chi.p, () if chi.ramified else (chi.uniformizer_value,))

    @classmethod
    def principal_series(cls, mu1: MultChar, mu2: MultChar,
                         chi: MultChar | None = None) -> "LocalLFactor":
        """L for I(mu1 x mu2) twisted by chi: the product of the two GL(1) factors."""
        if chi is not None:
            mu1, mu2 = mu1 * chi, mu2 * chi
        return cls.of_char(mu1) * cls.of_char(mu2)

    def __mul__(self, other: "LocalLFactor") -> "LocalLFactor":
        if other.p != self.p:
            raise ValueError("mismatched primes")
        return LocalLFactor(self.p, self.roots + other.roots)

    def denominators(self, s: complex) -> list[complex]:
        z = complex(self.p) ** (-s)
        return [1 - u * z for u in self.roots]

    def pole_distance(self, s: complex) -> float:
        d = self.denominators(s)
        return min((abs(x) for x in d), default=math.inf)

    def __call__(self, s: complex, guard: float = 0.0) -> complex:
        out = 1 + 0j
        for d in self.denominators(s):
            if abs(d) < 1e-14:
                raise Pole(f"L-factor pole at s={s}")
            if abs(d) < guard:
                raise NearPole(f"L-factor denominator {abs(d):.3g} below {guard}")
            out /= d
        return out

    def poles(self) -> list[complex]:
        """Principal poles: q^-s = 1/u, imaginary part in (-pi/log q, pi/log q]."""
        lq = math.log(self.p)
        return [cmath.log(u) / lq for u in self.roots]


def L(chi: MultChar, s: complex, guard: float = 0.0) -> complex:
    return LocalLFactor.of_char(chi)(s, guard)


# --- Gauss sums -------------------------------------------------------------------


@lru_cache(maxsize=4096)
def _gauss_cached(chi: MultChar, a: int) -> complex:
    n = chi.n
    q = chi.p
    tab = unit_tables(q, n)
    u = tab.units
    vals = chi.table(n)[u] * np.exp(2j * np.pi * ((a * u) % q**n) / q**n)
    return complex(np.sum(vals)) * float(q) ** (-n)


def _as_fraction(x) -> Fraction:
    return x.to_fraction() if isinstance(x, ValuedUnit) else Fraction(x)


def gauss_sum(chi: MultChar, xi) -> complex:
    """int_{|y| = 1} chi(y) psi(xi y) dy; exactly zero unless |xi| = C(chi)."""
    if not chi.ramified:
        raise ValueError("gauss_sum needs a ramified character")
    xi = _as_fraction(xi)
    if xi == 0 or vp(xi, chi.p) != -chi.n:
        return 0j
    a = reduce_mod(xi * chi.p**chi.n, chi.p**chi.n, chi.p)
    return _gauss_cached(chi.finite_part(), a)


def gauss_sum_brute(chi: MultChar, xi, level: int | None = None) -> complex:
    """Direct residue sum at a chosen level; an oracle for :func:`gauss_sum`."""
    p = chi.p
    xi = _as_fraction(xi)
    need = max(1, chi.n, -int(vp(xi, p)) if xi else 0)
    level = need if level is None else max(level, need)
    total = 0j
    for y in range(1, p**level):
        if y % p:
            total += chi.unit_value(y) * cmath.exp(2j * math.pi * float(frac_p(xi * y, p)))
    return total * float(p) ** (-level)


# --- epsilon and gamma -------------------------------------------------------------


def _shift_factor(psi: AddChar, chi: MultChar, s: complex) -> complex:
    """chi(b)|b|^(s - 1/2): the change of gamma and epsilon under psi -> psi^b."""
    if psi.b == 1:
        return 1 + 0j
    v, _ = split_unit(psi.b, chi.p)
    return chi(psi.b) * complex(chi.p) ** (-v * (s - 0.5))


def epsilon(psi: AddChar, chi: MultChar, s: complex) -> complex:
    base = 1 + 0j
    if chi.ramified:
        n, q = chi.n, chi.p
        eps_half = q ** (n / 2) * chi.uniformizer_value**n * gauss_sum(chi.inverse(), Fraction(1, q**n))
        base = complex(q) ** (n * (0.5 - s)) * eps_half
    return base * _shift_factor(psi, chi, s)


def gamma_gl1(psi: AddChar, chi: MultChar, s: complex, guard: float = POLE_DIST) -> complex:
    """gamma = epsilon * L(chi^-1, 1 - s) / L(chi, s)."""
    num = L(chi.inverse(), 1 - s, guard)
    den_factor = LocalLFactor.of_char(chi)
    for d in den_factor.denominators(s):
        if abs(d) < guard:
            raise NearPole(f"L(chi, s) denominator {abs(d):.3g} below {guard}")
    return epsilon(psi, chi, s) * num * np.prod(den_factor.denominators(s))


# --- Tate ------------------------------------------------------------------------------


def tate_zeta(phi: SchwartzBruhat, chi: MultChar, s: complex) -> complex:
    return mellin_with_tails(phi, chi, s)


@dataclass(frozen=True)
class TateCheck:
    lhs: complex
    rhs: complex
    gamma: complex
    residual: float


def tate_scale(phi: SchwartzBruhat) -> float:
    """Absolute size of phi's terms; floors the relative residual when both sides vanish."""
    q = phi.p
    return sum(abs(t.coeff) * (1 + float(q) ** (-t.level)) for t in phi.terms)


def verify_tate(phi: SchwartzBruhat, chi: MultChar, s: complex) -> TateCheck:
    """Compare Z(phi^, chi^-1, 1-s) with gamma(psi, chi, s) Z(phi, chi, s)."""
    psi = AddChar(phi.p)
    g = gamma_gl1(psi, chi, s)
    lhs = tate_zeta(fourier(phi), chi.inverse(), 1 - s)
    rhs = g * tate_zeta(phi, chi, s)
    floor = 1e-30 + 1e-6 * tate_scale(phi)
    res = abs(lhs - rhs) / (abs(lhs) + abs(rhs) + floor)
    return TateCheck(lhs, rhs, g, float(res))


def random_tate_case(rng: np.random.Generator, p: int, max_n: int = 2):
    """A random (phi, chi, s) with both sides at least POLE_DIST from poles."""
    from .characters import characters_of_conductor
    from .integrate import random_schwartz

    while True:
        n = int(rng.integers(0, max_n + 1))
        chis = characters_of_conductor(p, n)
        base = chis[int(rng.integers(0, len(chis)))]
        chi = base.twist(theta=float(rng.random()), sigma=float(rng.uniform(-0.2, 0.2)))
        s = complex(rng.uniform(0.15, 0.85), rng.uniform(-3, 3))
        if not chi.ramified:
            z1 = chi.uniformizer_value * p ** (-s)
            z2 = chi.inverse().uniformizer_value * p ** (-(1 - s))
            if min(abs(1 - z1), abs(1 - z2)) < 10 * POLE_DIST:
                continue
        phi = random_schwartz(rng, p, terms=int(rng.integers(1, 4)))
        return phi, chi, s
