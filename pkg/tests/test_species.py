import math

import pytest
from hypothesis import given, settings, strategies as st

from dkc.constants import BOHR_RADIUS, K_B
from dkc.errors import InvalidInputError, UnsupportedUnitError
from dkc.species import (
    SpeciesPair,
    binding_energy,
    convert_units,
    derived_frequencies,
    magic_polarizability_ratio,
    oscillator_length,
    thin_lens_duration,
)

W = 2 * math.pi * 100


@pytest.fixture
def krb():
    return SpeciesPair.krb()


def test_frequency_ratios_frozen(krb):
    f = derived_frequencies(krb, W)
    assert f.omega_r / W == pytest.approx(1.1212580016851073, rel=1e-12)
    assert f.omega_c_sq / W**2 == pytest.approx(0.7158391770567882, rel=1e-12)


def test_magic_ratio_and_scales(krb):
    assert magic_polarizability_ratio(krb) == pytest.approx(2.1217, abs=1e-4)
    assert oscillator_length(krb.total_mass, W) == pytest.approx(8.89e-7, rel=1e-3)
    e_b = binding_energy(krb.reduced_mass, 1000 * BOHR_RADIUS)
    assert e_b / K_B == pytest.approx(3.11e-6, rel=1e-2)
    assert thin_lens_duration(W, 14.9e-3) == pytest.approx(67.8e-6, rel=1e-3)


def test_atomic_frequencies_reproduce_molecular_ones(krb):
    # M w^2 = m_l w_l^2 + m_h w_h^2 and the relative/coupling forms built from the atoms
    f = derived_frequencies(krb, W)
    m_l, m_h, M, mu = krb.m_light, krb.m_heavy, krb.total_mass, krb.reduced_mass
    assert m_l * f.omega_light**2 + m_h * f.omega_heavy**2 == pytest.approx(M * W**2, rel=1e-12)
    assert mu * f.omega_r**2 == pytest.approx(mu**2 * (f.omega_light**2 / m_l + f.omega_heavy**2 / m_h), rel=1e-12)
    assert mu * f.omega_c_sq == pytest.approx(mu * (f.omega_light**2 - f.omega_heavy**2), rel=1e-12)
    assert krb.p == pytest.approx(m_h * f.omega_heavy**2 / (m_l * f.omega_light**2), rel=1e-12)


def test_coupling_vanishes_exactly_at_magic_ratio(krb):
    magic = krb.with_p(magic_polarizability_ratio(krb))
    assert derived_frequencies(magic, W).omega_c_sq == 0.0
    below = derived_frequencies(krb.with_p(2.0), W).omega_c_sq
    above = derived_frequencies(krb.with_p(2.3), W).omega_c_sq
    assert below > 0 > above


@settings(max_examples=50, deadline=None)
@given(st.floats(1, 250), st.floats(1, 250), st.floats(0.05, 20))
def test_frequency_identities_hold_for_any_pair(m1, m2, p):
    pair = SpeciesPair.from_atomic_mass_units(m1, m2, p)
    f = derived_frequencies(pair, W)
    gamma = pair.mass_ratio
    assert f.omega_r**2 / W**2 == pytest.approx((pair.m_heavy**2 + p * pair.m_light**2)
                                                / ((p + 1) * pair.m_light * pair.m_heavy), rel=1e-12)
    assert f.omega_c_sq == pytest.approx(W**2 * pair.m_light * (gamma - p) / ((p + 1) * pair.reduced_mass),
                                         rel=1e-12, abs=1e-12 * W**2)


def test_unit_conversions():
    assert convert_units(1000, "au", "m") == pytest.approx(5.29177210903e-8, rel=1e-15)
    assert convert_units(1.0, "u", "kg") == pytest.approx(1.66053906660e-27, rel=1e-15)
    assert convert_units(K_B, "J", "K") == pytest.approx(1.0, rel=1e-15)
    assert convert_units(100, "Hz", "rad/s") == pytest.approx(W, rel=1e-15)
    assert convert_units(convert_units(3.2, "m", "bohr"), "bohr", "m") == pytest.approx(3.2, rel=1e-15)


@pytest.mark.parametrize("pair", [("m", "kg"), ("furlong", "m"), ("K", "Hz")])
def test_unsupported_units(pair):
    with pytest.raises(UnsupportedUnitError):
        convert_units(1.0, *pair)


@pytest.mark.parametrize("args", [(0, 1e-25, 1.1), (1e-25, -1, 1.1), (1e-25, 1e-25, 0), (math.nan, 1e-25, 1)])
def test_species_validation(args):
    with pytest.raises(InvalidInputError):
        SpeciesPair(*args)
