"""Conductors of principal series and twisted Steinberg representations, and the family criteria.

For PGL_2 the principal series I(omega) has Satake pair (omega, omega^-1) and
conductor C(omega) C(omega^-1) = C(omega)^2. The twist eta.St of the Steinberg
representation has conductor q for unramified eta and C(eta)^2 otherwise.
Twisting by chi acts on the pair, so conductors of twists are exact here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .characters import MultChar

PRINCIPAL = "principal-series"
STEINBERG = "steinberg-twist"
UNRAMIFIED = "unramified-marker"


@dataclass(frozen=True)
class ReprDescriptor:
    """A GL_2 representation of the kinds that occur: I(mu1, mu2) or mu.St.

    ``mu1``/``mu2`` are the inducing characters; for Steinberg twists only
    ``mu1`` is used. PGL_2 members have mu2 = mu1^-1 (resp. mu1 quadratic).
    """

    kind: str
    mu1: MultChar
    mu2: MultChar | None = None

    @classmethod
    def principal_series(cls, omega: MultChar) -> "ReprDescriptor":
        return cls(PRINCIPAL, omega, omega.inverse())

    @classmethod
    def steinberg(cls, eta: MultChar) -> "ReprDescriptor":
        if not eta.is_quadratic():
            raise ValueError("Steinberg twists in the family use a quadratic character")
        return cls(STEINBERG, eta)

    @classmethod
    def unramified(cls, p: int, theta: float = 0.0) -> "ReprDescriptor":
        u = MultChar.unramified(p, theta)
        return cls(UNRAMIFIED, u, u.inverse())

    @property
    def p(self) -> int:
        return self.mu1.p

    @property
    def conductor(self) -> int:
        if self.kind == STEINBERG:
            return self.p if not self.mu1.ramified else self.mu1.conductor**2
        return self.mu1.conductor * self.mu2.conductor

    def twist(self, chi: MultChar) -> "ReprDescriptor":
        """sigma (x) chi."""
        if self.kind == STEINBERG:
            return ReprDescriptor(STEINBERG, self.mu1 * chi)
        kind = PRINCIPAL if self.kind == UNRAMIFIED and (chi.ramified) else self.kind
        return ReprDescriptor(kind, self.mu1 * chi, self.mu2 * chi)


def twist_conductor_bound(C_sigma: int, C_omega: int) -> int:
    """max(C(sigma) C(omega), C(omega)^2): an upper bound for C(sigma (x) omega)."""
    return max(C_sigma * C_omega, C_omega**2)


def twist_conductor(sigma: ReprDescriptor, omega: MultChar) -> int:
    return sigma.twist(omega).conductor


@dataclass(frozen=True)
class FamilyVerdict:
    member: bool
    twist_conductor: int
    criterion: bool  # C(sigma (x) chi^-1) <= C(chi): the weight is nonzero only then

    def __bool__(self) -> bool:
        return self.member


def _ratio_unramified(omega: MultChar, chi: MultChar) -> bool:
    return not (omega * chi.inverse()).ramified


def in_sigma_family(sigma: ReprDescriptor, chi: MultChar) -> FamilyVerdict:
    """Membership of sigma in the family attached to chi, with the conductor criterion."""
    if not chi.ramified:
        raise ValueError("the family criterion is stated for ramified chi")
    if sigma.p != chi.p:
        raise ValueError("mismatched primes")
    if sigma.kind == STEINBERG:
        member = _ratio_unramified(sigma.mu1, chi)
    elif sigma.kind == PRINCIPAL:
        member = (_ratio_unramified(sigma.mu1, chi) or _ratio_unramified(sigma.mu2, chi))
    else:
        member = False
    Ct = twist_conductor(sigma, chi.inverse())
    return FamilyVerdict(member, Ct, Ct <= chi.conductor)


def vol_J(p: int, Q: int) -> Fraction:
    """zeta_F(1)/Q = (1 - 1/q)^-1 / Q."""
    if Q < p or Q % p:
        raise ValueError("Q must be a positive power of p")
    return Fraction(p, p - 1) / Q


def weight_vanishes(sigma: ReprDescriptor, chi: MultChar) -> bool:
    """h(sigma) = 0 whenever the twist criterion fails."""
    return not in_sigma_family(sigma, chi).criterion
