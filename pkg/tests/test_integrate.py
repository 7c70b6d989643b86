from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from padicweights.characters import MultChar, characters_of_conductor
from padicweights.errors import LevelTooLow, NearPole
from padicweights.integrate import (AnnulusDomain, SchwartzBruhat, fourier, integrate_mult,
                                    mellin_with_tails, random_schwartz)


def test_annulus_measure():
    assert AnnulusDomain(5, 0, 2).measure() == pytest.approx(1 - 1 / 5)
    assert AnnulusDomain(5, 0, 2, avoid_one=True).measure() == pytest.approx(1 - 2 / 5)
    assert AnnulusDomain(5, 1, 2, avoid_one=True).measure() == 0


def test_integrate_mult_level_guard_and_chunks():
    dom = AnnulusDomain(7, 0, 2)
    f = lambda u: np.exp(2j * np.pi * u / 49)  # noqa: E731
    whole = integrate_mult(f, dom, level=2)
    assert integrate_mult(f, dom, level=2, chunks=5) == pytest.approx(whole, abs=1e-15)
    with pytest.raises(LevelTooLow):
        integrate_mult(f, dom, level=3)


def test_mellin_of_unit_ball():
    # int_o |x|^s d^x x = (1 - 1/q)/(1 - q^-s)
    phi = SchwartzBruhat.indicator(5)
    val = mellin_with_tails(phi, MultChar.trivial(5), 1.0)
    assert val == pytest.approx((1 - 1 / 5) / (1 - 1 / 5))
    assert mellin_with_tails(phi, MultChar.trivial(5), 2.0) == pytest.approx((4 / 5) / (1 - 1 / 25))


def test_mellin_near_pole():
    with pytest.raises(NearPole):
        mellin_with_tails(SchwartzBruhat.indicator(5), MultChar.trivial(5), 1e-6)


def test_ramified_mellin_of_unit_ball_vanishes():
    chi = characters_of_conductor(5, 2)[0]
    assert abs(mellin_with_tails(SchwartzBruhat.indicator(5), chi, 0.5)) < 1e-14


@given(st.sampled_from([3, 5, 7]), st.integers(0, 2**32 - 1))
def test_fourier_involution(p, seed):
    phi = random_schwartz(np.random.default_rng(seed), p)
    twice = fourier(fourier(phi))
    for x in (Fraction(0), Fraction(1), Fraction(2, p), Fraction(p + 3), Fraction(7, p**2)):
        assert twice(x) == pytest.approx(phi(-x), abs=1e-12)


@given(st.sampled_from([3, 5]), st.integers(0, 2**32 - 1))
def test_plancherel(p, seed):
    phi = random_schwartz(np.random.default_rng(seed), p, terms=2)
    assert fourier(phi).mass() == pytest.approx(phi.mass(), rel=1e-10)


def test_translate_and_dilate():
    phi = SchwartzBruhat.indicator(5, center=0, level=1)
    assert phi.translate(3)(3) == 1 and phi.translate(3)(0) == 0
    # x -> phi(5x) is the indicator of o
    assert phi.dilate(5)(1) == 1 and phi.dilate(5)(Fraction(1, 5)) == 0
    assert phi.dilate(Fraction(1, 5))(25) == 1 and phi.dilate(Fraction(1, 5))(5) == 0
