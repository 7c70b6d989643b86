"""Residue rings Z/p^m, valuations, truncated exp/log and quadratic congruences.

Elements of F = Q_p are modelled at finite precision. Points with a known
valuation are :class:`ValuedUnit`; arbitrary elements of Z[1/p] (used as
centers and frequencies of Schwartz-Bruhat functions) are plain
``fractions.Fraction`` objects.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from .errors import Divergent, InsufficientPrecision, NotAUnit

MAX_MODULUS = 2**40

Number = Union[int, Fraction]


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def check_odd_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p == 2:
        raise ValueError("dyadic fields are not supported (p must be odd)")


def vp(x: Number, p: int) -> float | int:
    """p-adic valuation of an integer or rational; ``inf`` for zero."""
    x = Fraction(x)
    if x == 0:
        return float("inf")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def split_unit(x: Number, p: int) -> tuple[int, Fraction]:
    """Write nonzero ``x = p^v * u`` with ``u`` a p-adic unit."""
    v = vp(x, p)
    if v == float("inf"):
        raise NotAUnit("zero has no unit part")
    return int(v), Fraction(x) / Fraction(p) ** int(v)


def reduce_mod(x: Number, modulus: int, p: int) -> int:
    """Image of a p-integral rational in Z/modulus (modulus a power of p)."""
    x = Fraction(x)
    if x.denominator % p == 0:
        raise InsufficientPrecision(f"{x} is not p-integral")
    return x.numerator * pow(x.denominator, -1, modulus) % modulus


def frac_p(x: Number, p: int) -> Fraction:
    """p-adic fractional part {x}_p in [0, 1); psi(x) = e({x}_p)."""
    x = Fraction(x)
    den = x.denominator
    k = 0
    while den % p == 0:
        den //= p
        k += 1
    if k == 0:
        return Fraction(0)
    pk = p**k
    # x = a / (p^k * den) with gcd(den, p) = 1
    a = x.numerator * pow(den, -1, pk) % pk
    return Fraction(a, pk)


@dataclass(frozen=True)
class ResidueRing:
    """The ring Z/p^m for an odd prime p."""

    p: int
    m: int

    def __post_init__(self):
        check_odd_prime(self.p)
        if self.m < 1:
            raise ValueError("precision exponent must be >= 1")
        if self.p**self.m > MAX_MODULUS:
            raise ValueError(f"p^m exceeds the 2^40 cap: {self.p}^{self.m}")

    @property
    def modulus(self) -> int:
        return self.p**self.m

    def reduce(self, a: Number) -> int:
        return reduce_mod(a, self.modulus, self.p)

    def is_unit(self, a: int) -> bool:
        return a % self.p != 0

    def units(self) -> list[int]:
        return [a for a in range(self.modulus) if a % self.p]

    def __len__(self):
        return self.modulus


def residue_inv(a: int, ring: ResidueRing) -> int:
    """Inverse of a unit of ``ring``."""
    if a % ring.p == 0:
        raise NotAUnit(f"{a} is not a unit mod {ring.p}")
    return pow(a % ring.modulus, -1, ring.modulus)


@dataclass(frozen=True)
class ValuedUnit:
    """x = p^valuation * unit, with the unit known modulo p^precision."""

    p: int
    valuation: int
    unit: int
    precision: int

    def __post_init__(self):
        check_odd_prime(self.p)
        if self.precision < 1:
            raise ValueError("precision must be >= 1")
        if self.unit % self.p == 0:
            raise NotAUnit(f"unit part {self.unit} divisible by {self.p}")
        object.__setattr__(self, "unit", self.unit % self.p**self.precision)

    @classmethod
    def from_number(cls, x: Number, p: int, precision: int) -> "ValuedUnit":
        v, u = split_unit(x, p)
        return cls(p, v, reduce_mod(u, p**precision, p), precision)

    @property
    def abs(self) -> float:
        return float(self.p) ** (-self.valuation)

    def to_fraction(self) -> Fraction:
        return Fraction(self.unit) * Fraction(self.p) ** self.valuation

    def __mul__(self, other: "ValuedUnit") -> "ValuedUnit":
        if other.p != self.p:
            raise ValueError("mismatched primes")
        prec = min(self.precision, other.precision)
        return ValuedUnit(self.p, self.valuation + other.valuation,
                          self.unit * other.unit, prec)

    def inverse(self) -> "ValuedUnit":
        mod = self.p**self.precision
        return ValuedUnit(self.p, -self.valuation, pow(self.unit, -1, mod), self.precision)

    def at_precision(self, m: int) -> "ValuedUnit":
        if m > self.precision:
            raise InsufficientPrecision(f"requested {m} > available {self.precision}")
        return ValuedUnit(self.p, self.valuation, self.unit, m)

    def same_as(self, other: "ValuedUnit", m: int) -> bool:
        return (self.valuation == other.valuation
                and (self.unit - other.unit) % self.p**m == 0)


def _as_integer_mod(a: Union[int, ValuedUnit], p: int, m: int) -> int:
    if isinstance(a, ValuedUnit):
        if a.valuation < 0:
            raise Divergent("negative valuation")
        return a.unit * p**a.valuation % p**m
    return a % p**m


def exp_level(a: Union[int, ValuedUnit], p: int, m: int) -> int:
    """exp(a) mod p^m for v(a) >= 1, as the truncated power series."""
    check_odd_prime(p)
    mod = p**m
    a = _as_integer_mod(a, p, m)
    if a == 0:
        return 1 % mod
    va = vp(a, p)
    if va < 1:
        raise Divergent("exp needs v(a) >= 1")
    total = Fraction(0)
    term = Fraction(1)
    k = 0
    # v(a^k / k!) >= k (v(a) - 1/(p-1)), which is increasing in k
    while True:
        if k * (va - 1 / (p - 1)) >= m:
            break
        total += term
        k += 1
        term = term * a / k
    return reduce_mod(total, mod, p)


def log_level(u: Union[int, ValuedUnit], p: int, m: int) -> int:
    """log(u) mod p^m for u = 1 mod p."""
    check_odd_prime(p)
    mod = p**m
    u = _as_integer_mod(u, p, m)
    if (u - 1) % p:
        raise Divergent("log needs u = 1 mod p")
    x = (u - 1) % mod
    if x == 0:
        return 0
    vx = vp(x, p)
    total = Fraction(0)
    k = 1
    power = Fraction(x)
    while True:
        # remaining terms have valuation >= j v(x) - log_p(j) for j >= k
        if all(j * vx - vp(j, p) >= m for j in range(k, k + p * m + 2)):
            break
        total += (-1) ** (k + 1) * power / k
        k += 1
        power *= x
    return reduce_mod(total, mod, p)


def quadratic_roots(a: int, b: int, c: int, p: int, alpha: int) -> list[int]:
    """All tau mod p^alpha with a tau^2 + b tau + c = 0 mod p^alpha.

    Simple roots (f' a unit) lift uniquely by a Newton step; multiple roots
    are lifted digit by digit, which is exact because every root mod p^(j+1)
    reduces to a root mod p^j.
    """
    check_odd_prime(p)
    if alpha < 1:
        raise ValueError("alpha must be >= 1")
    if all(x % p**alpha == 0 for x in (a, b, c)):
        raise ValueError("zero polynomial")

    def f(t):
        return a * t * t + b * t + c

    def fprime(t):
        return 2 * a * t + b

    roots = [t for t in range(p) if f(t) % p == 0]
    for j in range(1, alpha):
        pj, pj1 = p**j, p ** (j + 1)
        lifted = []
        for r in roots:
            if fprime(r) % p:
                # simple root: Newton step gives the unique lift
                t = (r - f(r) * pow(fprime(r), -1, pj1)) % pj1
                lifted.append(t)
            else:
                lifted.extend(t for t in (r + pj * d for d in range(p)) if f(t) % pj1 == 0)
        roots = lifted
    return sorted(set(roots))


def count_quadratic_roots(a: int, b: int, c: int, p: int, alpha: int) -> int:
    return len(quadratic_roots(a, b, c, p, alpha))


def n_alpha(xi: int, p: int, alpha: int) -> int:
    """Number of tau mod p^alpha with xi^2 tau^2 - tau - 1 = 0."""
    return count_quadratic_roots(xi * xi, -1, -1, p, alpha)


