from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from padicweights.characters import MultChar, characters_of_conductor, characters_up_to
from padicweights.families import (ReprDescriptor, in_sigma_family, twist_conductor,
                                   twist_conductor_bound, vol_J, weight_vanishes)


def test_twist_bound_examples():
    q = 5
    assert twist_conductor_bound(q**2, q) == q**3
    assert twist_conductor_bound(1, q**2) == q**4


def test_twist_bound_scan():
    for w0 in characters_up_to(5, 3):
        s = ReprDescriptor.principal_series(w0)
        assert s.conductor == w0.conductor**2
        for w in characters_up_to(5, 3):
            assert twist_conductor(s, w) <= twist_conductor_bound(s.conductor, w.conductor)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_chi_minus_two_conductor(p):
    for chi in characters_up_to(p, 4):
        if chi.ramified:
            assert (chi**-2).conductor <= chi.conductor


def test_membership_examples():
    chi = characters_of_conductor(5, 2)[0]
    v = in_sigma_family(ReprDescriptor.principal_series(chi.twist(0.3)), chi)
    assert v.member and v.criterion
    u = in_sigma_family(ReprDescriptor.unramified(5), chi)
    assert not u.member and not u.criterion and u.twist_conductor == chi.conductor**2
    assert weight_vanishes(ReprDescriptor.unramified(5), chi)
    other = characters_of_conductor(5, 2)[5]
    assert not in_sigma_family(ReprDescriptor.principal_series(other), chi).member


def test_steinberg():
    leg = MultChar.legendre(5)
    st_ = ReprDescriptor.steinberg(MultChar.unramified(5, 0.5))
    assert st_.conductor == 5
    v = in_sigma_family(ReprDescriptor.steinberg(leg), leg)
    assert v.member and v.twist_conductor == 5 and v.criterion
    with pytest.raises(ValueError):
        ReprDescriptor.steinberg(characters_of_conductor(5, 2)[0])


@given(st.sampled_from([3, 5, 7]), st.integers(1, 3), st.integers(0, 10**6), st.floats(0, 1))
def test_membership_invariant_under_unramified_twist(p, n, k, theta):
    chars = characters_of_conductor(p, n)
    chi = chars[k % len(chars)]
    for w in characters_up_to(p, n)[:12]:
        s = ReprDescriptor.principal_series(w)
        assert in_sigma_family(s, chi).member == in_sigma_family(s, chi.twist(theta)).member


def test_vol_J():
    assert vol_J(5, 25) == Fraction(1, 20)
    assert vol_J(3, 3) == Fraction(1, 2)
    for p in (3, 5, 7):
        for n in range(1, 5):
            assert vol_J(p, p**n) * p**n == Fraction(p, p - 1)
