"""Finite-level integration on F and F^x, Schwartz-Bruhat functions, Fourier and Mellin.

Normalizations: additive dx gives vol(o) = 1; multiplicative d^x x = dx/|x|
gives vol(o^x) = 1 - 1/q. On the shell |x| = q^-v every unit class
u mod p^m has d^x-measure q^-m.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .characters import MultChar, e, unit_tables
from .errors import LevelTooLow, NearPole
from .padic_core import ValuedUnit, check_odd_prime, frac_p, reduce_mod, vp

ZERO_ATOL = 1e-9
POLE_DIST = 1e-3

UnitFn = Callable[[np.ndarray], np.ndarray]


def zero_tol(terms: int) -> float:
    return ZERO_ATOL * max(1, terms)


# --- annuli -----------------------------------------------------------------


@dataclass(frozen=True)
class AnnulusDomain:
    """The shell {x = p^valuation u : u unit}, sampled at unit level m.

    ``avoid_one`` removes x = 1 mod p (the constraint |x - 1| = |x|); it is
    only meaningful on the unit shell, and empties positive-valuation shells.
    """

    p: int
    valuation: int
    m: int
    avoid_one: bool = False

    def __post_init__(self):
        check_odd_prime(self.p)
        if self.m < 1:
            raise ValueError("sampling level must be >= 1")

    @property
    def empty(self) -> bool:
        return self.avoid_one and self.valuation > 0

    def residues(self) -> np.ndarray:
        if self.empty:
            return np.empty(0, dtype=np.int64)
        u = unit_tables(self.p, self.m).units
        if self.avoid_one and self.valuation == 0:
            u = u[u % self.p != 1]
        return u

    def measure(self) -> float:
        return len(self.residues()) * float(self.p) ** (-self.m)


def integrate_mult(f: UnitFn, dom: AnnulusDomain, level: int = 0, chunks: int = 1) -> complex:
    """Integral of f over dom against d^x x.

    ``f`` receives the unit residues u mod p^m (x = p^v u) as an int64 array and
    returns values. ``level`` is the caller's declared level of constancy in u.
    With ``chunks > 1`` the residues are split and partial sums added in order.
    """
    if level > dom.m:
        raise LevelTooLow(f"integrand level {level} exceeds sampling level {dom.m}")
    u = dom.residues()
    if len(u) == 0:
        return 0j
    scale = float(dom.p) ** (-dom.m)
    parts = np.array_split(u, max(1, chunks))
    total = 0j
    for part in parts:
        if len(part):
            total += complex(np.sum(np.asarray(f(part), dtype=complex)))
    return total * scale


def integrate_mult_partials(f: UnitFn, dom: AnnulusDomain, pieces: int) -> list[complex]:
    """Unscaled partial sums over a fixed partition, for reduction elsewhere."""
    u = dom.residues()
    return [complex(np.sum(np.asarray(f(part), dtype=complex))) if len(part) else 0j
            for part in np.array_split(u, max(1, pieces))]


# --- Schwartz-Bruhat ----------------------------------------------------------


@dataclass(frozen=True)
class SBTerm:
    """coeff * 1_{center + p^level o}(x) * psi(freq * x)."""

    coeff: complex
    center: Fraction
    level: int
    freq: Fraction


@dataclass(frozen=True)
class SchwartzBruhat:
    p: int
    terms: tuple[SBTerm, ...] = field(default_factory=tuple)

    def __post_init__(self):
        check_odd_prime(self.p)
        clean = tuple(SBTerm(complex(t.coeff), Fraction(t.center), int(t.level), Fraction(t.freq))
                      for t in self.terms)
        object.__setattr__(self, "terms", clean)

    @classmethod
    def indicator(cls, p: int, center=0, level: int = 0, coeff: complex = 1.0,
                  freq=0) -> "SchwartzBruhat":
        return cls(p, (SBTerm(coeff, Fraction(center), level, Fraction(freq)),))

    def __add__(self, other: "SchwartzBruhat") -> "SchwartzBruhat":
        if other.p != self.p:
            raise ValueError("mismatched primes")
        return SchwartzBruhat(self.p, self.terms + other.terms)

    def scale(self, c: complex) -> "SchwartzBruhat":
        return SchwartzBruhat(self.p, tuple(SBTerm(c * t.coeff, t.center, t.level, t.freq)
                                            for t in self.terms))

    def translate(self, a) -> "SchwartzBruhat":
        """x -> phi(x - a)."""
        a = Fraction(a)
        return SchwartzBruhat(self.p, tuple(
            SBTerm(t.coeff * e(-frac_p(t.freq * a, self.p)), t.center + a, t.level, t.freq)
            for t in self.terms))

    def dilate(self, b) -> "SchwartzBruhat":
        """x -> phi(b x) for b in Z[1/p]^x (b = p^k u)."""
        b = Fraction(b)
        k = vp(b, self.p)
        return SchwartzBruhat(self.p, tuple(
            SBTerm(t.coeff, t.center / b, t.level - k, t.freq * b) for t in self.terms))

    # -- evaluation ---------------------------------------------------------------

    def __call__(self, x) -> complex:
        if isinstance(x, ValuedUnit):
            x = x.to_fraction()
        x = Fraction(x)
        p = self.p
        total = 0j
        for t in self.terms:
            if vp(x - t.center, p) >= t.level:
                total += t.coeff * e(frac_p(t.freq * x, p))
        return total

    def at_zero(self) -> complex:
        return self(0)

    def mass(self) -> float:
        """L^2 norm squared, exactly, by sampling at a common level."""
        lo, hi = self.support_levels()
        vals = self.values_on_ball(lo, hi)
        return float(np.sum(np.abs(vals) ** 2)) * float(self.p) ** (-hi)

    def support_levels(self) -> tuple[int, int]:
        """(lo, hi): support inside p^lo o, constant on p^hi o cosets."""
        p = self.p
        lo = min(min(t.level, vp(t.center, p) if t.center else t.level) for t in self.terms)
        hi = max(max(t.level, -vp(t.freq, p) if t.freq else t.level) for t in self.terms)
        return int(lo), int(max(hi, lo))

    def values_on_ball(self, lo: int, hi: int) -> np.ndarray:
        """phi at x = p^lo * r for r = 0..p^(hi-lo)-1."""
        p = self.p
        n = hi - lo
        r = np.arange(p**n, dtype=np.int64)
        out = np.zeros(len(r), dtype=complex)
        for t in self.terms:
            out += t.coeff * _term_on_shifts(t, p, lo, n, r)
        return out

    # -- transforms -------------------------------------------------------------

    def fourier(self) -> "SchwartzBruhat":
        return fourier(self)


def _term_on_shifts(t: SBTerm, p: int, v: int, n: int, r: np.ndarray) -> np.ndarray:
    """Values of t at x = p^v r, r integers mod p^n (so x determined mod p^(v+n))."""
    # indicator: p^v r - c in p^m o  <=>  r - c p^-v in p^(m-v) o
    y = t.center / Fraction(p) ** v
    k = t.level - v
    if k <= 0:
        ind = np.full(len(r), 1.0 if vp(y, p) >= k else 0.0)
    elif Fraction(y).denominator % p == 0:
        ind = np.zeros(len(r))
    else:
        if k > n:
            raise LevelTooLow("sampling too coarse for indicator")
        ind = ((r - reduce_mod(y, p**k, p)) % p**k == 0).astype(float)
    w = t.freq * Fraction(p) ** v
    if w == 0 or vp(w, p) >= 0:
        return ind.astype(complex)
    rr = -int(vp(w, p))
    if rr > n:
        raise LevelTooLow("sampling too coarse for additive twist")
    a = reduce_mod(w * p**rr, p**rr, p)
    return ind * np.exp(2j * np.pi * ((a * r) % p**rr) / p**rr)


def fourier(phi: SchwartzBruhat) -> SchwartzBruhat:
    """phi^(y) = int phi(x) psi(x y) dx, term by term in closed form."""
    p = phi.p
    out = []
    for t in phi.terms:
        coeff = t.coeff * float(p) ** (-t.level) * e(frac_p(t.center * t.freq, p))
        out.append(SBTerm(coeff, -t.freq, -t.level, t.center))
    return SchwartzBruhat(p, tuple(out))


# --- Mellin transform -------------------------------------------------------------


def _shell_level(phi: SchwartzBruhat, v: int, chi: MultChar) -> int:
    p = phi.p
    L = max(1, chi.n)
    for t in phi.terms:
        L = max(L, t.level - v)
        if t.freq:
            L = max(L, -int(vp(t.freq, p)) - v)
    return L


def shell_integral(phi: SchwartzBruhat, chi: MultChar, v: int) -> complex:
    """int_{o^x} phi(p^v u) chi(u) du  (unit part only, d^x measure)."""
    p = phi.p
    L = _shell_level(phi, v, chi)
    tab = unit_tables(p, L)
    u = tab.units
    vals = np.zeros(len(u), dtype=complex)
    for t in phi.terms:
        vals += t.coeff * _term_on_shifts(t, p, v, L, u)
    if chi.n:
        vals *= chi.table(L)[u]
    return complex(np.sum(vals)) * float(p) ** (-L)


def mellin_range(phi: SchwartzBruhat) -> tuple[int, int]:
    """(v_min, K): phi vanishes on |x| > q^-v_min and is phi(0) on p^K o."""
    lo, hi = phi.support_levels()
    return lo, max(lo, hi)


def _pole_check(z: complex) -> None:
    if abs(1 - z) < POLE_DIST:
        raise NearPole(f"|1 - chi(p) q^-s| = {abs(1 - z):.3g} below {POLE_DIST}")


def mellin_with_tails(phi: SchwartzBruhat, chi: MultChar, s: complex) -> complex:
    """int phi(x) chi(x) |x|^s d^x x, meromorphically continued through the tail at 0."""
    p = phi.p
    z = chi.uniformizer_value * float(p) ** (-s)
    v_min, K = mellin_range(phi)
    total = 0j
    for v in range(v_min, K):
        total += z**v * shell_integral(phi, chi, v)
    if not chi.ramified:
        _pole_check(z)
        total += phi.at_zero() * (1 - 1 / p) * z**K / (1 - z)
    return total


def mellin_terms(phi: SchwartzBruhat) -> int:
    v_min, K = mellin_range(phi)
    return max(1, K - v_min)


def random_schwartz(rng: np.random.Generator, p: int, terms: int = 3, spread: int = 2) -> SchwartzBruhat:
    """A random finite combination with small centers, levels and frequencies."""
    out = []
    for _ in range(terms):
        level = int(rng.integers(-spread, spread + 1))
        cv = int(rng.integers(-spread, spread + 1))
        center = Fraction(int(rng.integers(0, p**2)), 1) * Fraction(p) ** cv
        fv = int(rng.integers(-spread, spread + 1))
        freq = Fraction(int(rng.integers(0, p)), 1) * Fraction(p) ** fv
        coeff = complex(rng.normal(), rng.normal())
        out.append(SBTerm(coeff, center, level, freq))
    return SchwartzBruhat(p, tuple(out))
