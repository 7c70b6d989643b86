"""Multiplicative and additive characters of Q_p at finite level.

A multiplicative character chi of F^x = p^Z x o^x is stored as

* its conductor exponent ``n`` and the rotation ``k`` of the generator:
  chi(g) = e(k / phi(p^n)) where g is the least primitive root mod p^n;
* the uniformizer value chi(p) = e(theta) * p^(-sigma).

Evaluation goes through cached discrete-log tables, so every value on units
is an exact rational angle; the complex tables are derived from those.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import ConductorMismatch, InsufficientPrecision
from .padic_core import (
    Number,
    ValuedUnit,
    check_odd_prime,
    exp_level,
    frac_p,
    n_alpha,
    reduce_mod,
    split_unit,
)

TWO_PI = 2.0 * math.pi
MAX_TABLE = 2**24


def e(x: float) -> complex:
    return cmath.exp(1j * TWO_PI * x)


def totient(p: int, n: int) -> int:
    return 1 if n == 0 else (p - 1) * p ** (n - 1)


@lru_cache(maxsize=None)
def primitive_root(p: int, n: int) -> int:
    """Least primitive root modulo p^n (n >= 1)."""
    check_odd_prime(p)
    order = p - 1
    factors = [q for q in range(2, order + 1) if order % q == 0
               and all(q % r for r in range(2, int(q**0.5) + 1))]
    for g in range(2, p**n):
        if g % p == 0:
            continue
        if any(pow(g, order // q, p) == 1 for q in factors):
            continue
        if n >= 2 and pow(g, p - 1, p * p) == 1:
            continue
        return g
    return 1  # p = 3, n = 1 falls through only if 2 fails, which it does not


@dataclass(frozen=True)
class UnitTables:
    """Power and discrete-log tables for the cyclic group (Z/p^N)^x."""

    p: int
    level: int
    gen: int
    powers: np.ndarray = field(repr=False)  # powers[d] = gen^d
    dlog: np.ndarray = field(repr=False)  # dlog[u], -1 on non-units

    @property
    def modulus(self) -> int:
        return self.p**self.level

    @property
    def order(self) -> int:
        return totient(self.p, self.level)

    @property
    def units(self) -> np.ndarray:
        return np.sort(self.powers)

    def inverse(self, u: np.ndarray) -> np.ndarray:
        return self.powers[(-self.dlog[u]) % self.order]


@lru_cache(maxsize=64)
def unit_tables(p: int, level: int) -> UnitTables:
    if level < 1:
        raise ValueError("level must be >= 1")
    mod = p**level
    if mod > MAX_TABLE:
        raise InsufficientPrecision(f"table for {p}^{level} too large")
    g = primitive_root(p, level)
    order = totient(p, level)
    powers = np.empty(order, dtype=np.int64)
    x = 1
    for d in range(order):
        powers[d] = x
        x = x * g % mod
    dlog = np.full(mod, -1, dtype=np.int64)
    dlog[powers] = np.arange(order, dtype=np.int64)
    powers.setflags(write=False)
    dlog.setflags(write=False)
    return UnitTables(p, level, g, powers, dlog)


def dlog(u: int, p: int, level: int) -> int:
    d = int(unit_tables(p, level).dlog[u % p**level])
    if d < 0:
        raise InsufficientPrecision(f"{u} is not a unit mod {p}")
    return d


def _exponent_conductor(p: int, level: int, K: int) -> int:
    """Conductor exponent of u -> e(K dlog(u) / phi(p^level))."""
    order = totient(p, level)
    K %= order
    if K == 0:
        return 0
    v = 0
    while K % p == 0 and v < level - 1:
        K //= p
        v += 1
    return max(1, level - v)


@dataclass(frozen=True)
class MultChar:
    """A character of Q_p^x: conductor p^n, generator rotation k, chi(p) = e(theta) p^-sigma."""

    p: int
    n: int
    k: int = 0
    theta: float = 0.0
    sigma: float = 0.0

    def __post_init__(self):
        check_odd_prime(self.p)
        if self.n < 0:
            raise ValueError("conductor exponent must be >= 0")
        order = totient(self.p, self.n)
        object.__setattr__(self, "k", self.k % order)
        object.__setattr__(self, "theta", float(self.theta) % 1.0)
        if self.n >= 1 and _exponent_conductor(self.p, self.n, self.k) != self.n:
            raise ValueError(
                f"k={self.k} does not give a character of exact conductor {self.p}^{self.n}")

    # --- construction -------------------------------------------------------

    @classmethod
    def trivial(cls, p: int) -> "MultChar":
        return cls(p, 0)

    @classmethod
    def unramified(cls, p: int, theta: float = 0.0, sigma: float = 0.0) -> "MultChar":
        return cls(p, 0, 0, theta, sigma)

    @classmethod
    def from_exponent(cls, p: int, level: int, K: int, theta: float = 0.0,
                      sigma: float = 0.0) -> "MultChar":
        """Character u -> e(K dlog_level(u) / phi(p^level)), reduced to its conductor."""
        n = _exponent_conductor(p, level, K)
        if n == 0:
            return cls(p, 0, 0, theta, sigma)
        g_n = primitive_root(p, n)
        d = dlog(g_n, p, level)
        # chi(g_n) = e(K d / phi_level) = e(k / phi_n)
        k, rem = divmod(K * d * totient(p, n), totient(p, level))
        assert rem == 0
        return cls(p, n, k, theta, sigma)

    @classmethod
    def legendre(cls, p: int) -> "MultChar":
        return cls(p, 1, (p - 1) // 2)

    @classmethod
    def parse(cls, spec: str) -> "MultChar":
        """Parse ``p=<prime>,n=<cond_exp>,k=<num>,theta=<float>,sigma=<float>``."""
        fields = {}
        for part in spec.split(","):
            part = part.strip()
            if not part:
                continue
            if "=" not in part:
                raise ValueError(f"malformed character field {part!r}")
            key, val = (s.strip() for s in part.split("=", 1))
            if key not in ("p", "n", "k", "theta", "sigma"):
                raise ValueError(f"unknown character field {key!r}")
            if key in fields:
                raise ValueError(f"duplicate character field {key!r}")
            fields[key] = val
        if "p" not in fields or "n" not in fields:
            raise ValueError("character spec needs p= and n=")
        return cls(int(fields["p"]), int(fields["n"]), int(fields.get("k", 0)),
                   float(fields.get("theta", 0.0)), float(fields.get("sigma", 0.0)))

    def spec(self) -> str:
        return (f"p={self.p},n={self.n},k={self.k},"
                f"theta={self.theta!r},sigma={self.sigma!r}")

    # --- structure ------------------------------------------------------------

    @property
    def conductor(self) -> int:
        return self.p**self.n

    @property
    def ramified(self) -> bool:
        return self.n > 0

    @property
    def unitary(self) -> bool:
        return self.sigma == 0.0

    @property
    def uniformizer_value(self) -> complex:
        return e(self.theta) * float(self.p) ** (-self.sigma)

    def exponent_at(self, level: int) -> int:
        """K with chi(u) = e(K dlog_level(u) / phi(p^level)) on units."""
        if self.n == 0:
            return 0
        if level < self.n:
            raise InsufficientPrecision(f"level {level} below conductor exponent {self.n}")
        g_level = primitive_root(self.p, level)
        j = dlog(g_level, self.p, self.n)
        return self.k * j * self.p ** (level - self.n) % totient(self.p, level)

    def phases(self, level: int) -> np.ndarray:
        """Integer table: chi(u) = e(phases[u] / phi(p^level)); -1 marks non-units."""
        level = max(level, 1)
        tab = unit_tables(self.p, level)
        K = self.exponent_at(level)
        out = np.where(tab.dlog >= 0, (K * tab.dlog) % tab.order, -1)
        return out

    def table(self, level: int) -> np.ndarray:
        """Complex values on Z/p^level; zero on non-units."""
        return _char_table(self, max(level, 1))

    def __mul__(self, other: "MultChar") -> "MultChar":
        if other.p != self.p:
            raise ValueError("mismatched primes")
        level = max(self.n, other.n, 1)
        K = self.exponent_at(level) + other.exponent_at(level)
        sigma = self.sigma + other.sigma
        return MultChar.from_exponent(self.p, level, K, self.theta + other.theta, sigma)

    def inverse(self) -> "MultChar":
        return MultChar(self.p, self.n, -self.k, -self.theta, -self.sigma)

    def __pow__(self, r: int) -> "MultChar":
        level = max(self.n, 1)
        return MultChar.from_exponent(self.p, level, r * self.exponent_at(level),
                                      r * self.theta, r * self.sigma)

    def twist(self, theta: float = 0.0, sigma: float = 0.0) -> "MultChar":
        """Multiply by the unramified character |.|^sigma-ish with chi(p) = e(theta) p^-sigma."""
        return MultChar(self.p, self.n, self.k, self.theta + theta, self.sigma + sigma)

    def finite_part(self) -> "MultChar":
        return MultChar(self.p, self.n, self.k)

    def is_quadratic(self) -> bool:
        sq = self * self
        return sq.n == 0 and sq.theta in (0.0, 1.0) and sq.sigma == 0.0

    # --- evaluation -----------------------------------------------------------

    def unit_value(self, u: int) -> complex:
        if self.n == 0:
            if u % self.p == 0:
                raise InsufficientPrecision("not a unit")
            return 1.0 + 0j
        d = dlog(u, self.p, self.n)
        return e(Fraction(self.k * d, totient(self.p, self.n)))

    def __call__(self, x) -> complex:
        """chi(x) for a ValuedUnit or a nonzero rational."""
        if isinstance(x, ValuedUnit):
            if x.p != self.p:
                raise ValueError("mismatched primes")
            if x.precision < self.n:
                raise InsufficientPrecision(
                    f"precision {x.precision} below conductor exponent {self.n}")
            v, u = x.valuation, x.unit
        else:
            v, uf = split_unit(x, self.p)
            u = reduce_mod(uf, self.p ** max(self.n, 1), self.p)
        return self.uniformizer_value**v * self.unit_value(u)


@lru_cache(maxsize=256)
def _char_table(chi: MultChar, level: int) -> np.ndarray:
    ph = chi.phases(level)
    order = totient(chi.p, level)
    vals = np.exp(1j * TWO_PI * (ph % order) / order)
    vals[ph < 0] = 0.0
    vals.setflags(write=False)
    return vals


def characters_of_conductor(p: int, n: int) -> list[MultChar]:
    """All finite-order characters of o^x with conductor exactly p^n (chi(p) = 1)."""
    if n == 0:
        return [MultChar(p, 0)]
    order = totient(p, n)
    return [MultChar(p, n, k) for k in range(order)
            if _exponent_conductor(p, n, k) == n]


def characters_up_to(p: int, n: int) -> list[MultChar]:
    out = []
    for c in range(n + 1):
        out.extend(characters_of_conductor(p, c))
    return out


@dataclass(frozen=True)
class AddChar:
    """psi^b(x) = psi(b x) with psi the unramified character e({x}_p)."""

    p: int
    b: Fraction = Fraction(1)

    def __post_init__(self):
        check_odd_prime(self.p)
        object.__setattr__(self, "b", Fraction(self.b))
        if self.b == 0:
            raise ValueError("b must be nonzero")

    def __call__(self, x: Number) -> complex:
        return e(frac_p(self.b * Fraction(x), self.p))

    @property
    def conjugate(self) -> "AddChar":
        return AddChar(self.p, -self.b)


def psi(x: Number, p: int) -> complex:
    return e(frac_p(x, p))


# --- xi-class and atypicality -------------------------------------------------

def exp_coefficient(chi: MultChar, alpha: int) -> int:
    """c mod p^(n-alpha) with chi(exp(a)) = e(c a / p^n) for a in p^alpha o."""
    p, n = chi.p, chi.n
    if not 1 <= alpha < n:
        raise ValueError("need 1 <= alpha < conductor exponent")
    a_gen = exp_level(p**alpha, p, n)
    d = dlog(a_gen, p, n)
    step = totient(p, n) // p ** (n - alpha)
    c, rem = divmod(chi.k * d, step)
    assert rem == 0
    # chi(exp(p^alpha)) = e(c / p^(n - alpha))
    return c % p ** (n - alpha)


@dataclass(frozen=True)
class XiClass:
    xi: int
    alpha: int
    alpha_prime: int
    atypical: bool
    n_alpha: int
    small_p_caveat: bool = False

    def as_dict(self) -> dict:
        return {"xi": self.xi, "alpha": self.alpha, "alpha_prime": self.alpha_prime,
                "atypical": self.atypical, "n_alpha": self.n_alpha,
                "small_p_caveat": self.small_p_caveat}


def split_exponent(n: int) -> tuple[int, int]:
    alpha = n // 2
    return alpha, n - alpha


def _require_class_domain(chi: MultChar, omega: MultChar) -> tuple[int, int]:
    if chi.p != omega.p:
        raise ValueError("mismatched primes")
    if chi.n != omega.n:
        raise ConductorMismatch(f"C(chi)={chi.conductor} != C(omega)={omega.conductor}")
    alpha, alpha_p = split_exponent(chi.n)
    if alpha < 1:
        raise ConductorMismatch("xi-class needs conductor at least p^2")
    return alpha, alpha_p


def xi_class(chi: MultChar, omega: MultChar) -> XiClass:
    """The class xi mod p^alpha' with omega(exp a) = chi(exp(xi a)) on p^alpha."""
    alpha, alpha_p = _require_class_domain(chi, omega)
    p = chi.p
    mod = p**alpha_p
    c_chi = exp_coefficient(chi, alpha)
    c_om = exp_coefficient(omega, alpha)
    xi = c_om * pow(c_chi, -1, mod) % mod
    cond = chi.n >= 3 and (p - 1) % 4 == 0 and (1 + 4 * xi * xi) % p == 0
    # p >= 5 stands in for "q large"; p = 3 never passes (-1 is not a square)
    caveat = cond and p < 5
    return XiClass(xi, alpha, alpha_p, cond and not caveat, n_alpha(xi, p, alpha), caveat)


def xi_consistency(chi: MultChar, omega: MultChar, xc: XiClass, samples: int = 64,
                   rng: np.random.Generator | None = None) -> float:
    """max |omega(exp a) - chi(exp(xi a))| over sampled a in p^alpha o."""
    rng = rng or np.random.default_rng(0)
    p, n = chi.p, chi.n
    worst = 0.0
    for _ in range(samples):
        a = p**xc.alpha * int(rng.integers(0, p**n))
        lhs = omega.unit_value(exp_level(a, p, n))
        rhs = chi.unit_value(exp_level(xc.xi * a, p, n))
        worst = max(worst, abs(lhs - rhs))
    return worst


def is_atypical(chi: MultChar, omega: MultChar) -> tuple[bool, XiClass | None]:
    """Atypicality of the pair (chi, omega), with the xi-class when conductors agree."""
    if omega.p != chi.p or omega.n != chi.n or chi.n < 2:
        return False, None
    xc = xi_class(chi, omega)
    return xc.atypical, xc
