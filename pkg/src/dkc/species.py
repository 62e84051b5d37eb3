"""Species data and trap-frequency algebra for a heteronuclear dimer.

All quantities are SI. The "light" atom is the one whose polarizability sets
the reference scale (K in KRb), ``p`` is ``alpha_heavy / alpha_light``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import (
    ATOMIC_MASS_UNIT,
    BOHR_RADIUS,
    HBAR,
    K_B,
    MASS_K41_U,
    MASS_RB87_U,
    P_2000NM,
)
from .errors import InvalidInputError, UnsupportedUnitError

__all__ = [
    "SpeciesPair",
    "TrapFrequencies",
    "derived_frequencies",
    "magic_polarizability_ratio",
    "oscillator_length",
    "binding_energy",
    "thin_lens_duration",
    "convert_units",
]


def _require_positive(**values):
    for name, value in values.items():
        if not (math.isfinite(value) and value > 0):
            raise InvalidInputError(f"{name} must be positive and finite, got {value!r}")


@dataclass(frozen=True)
class SpeciesPair:
    """Two atoms bound into a Feshbach dimer.

    Parameters
    ----------
    m_light, m_heavy : float
        Atomic masses in kg.
    p : float
        Polarizability ratio ``alpha_heavy / alpha_light`` at the trap wavelength.
    """

    m_light: float
    m_heavy: float
    p: float

    def __post_init__(self):
        _require_positive(m_light=self.m_light, m_heavy=self.m_heavy, p=self.p)

    @classmethod
    def from_atomic_mass_units(cls, m_light_u, m_heavy_u, p):
        return cls(m_light_u * ATOMIC_MASS_UNIT, m_heavy_u * ATOMIC_MASS_UNIT, p)

    @classmethod
    def krb(cls, p=P_2000NM):
        """41K-87Rb with the default isotope masses."""
        return cls.from_atomic_mass_units(MASS_K41_U, MASS_RB87_U, p)

    @property
    def total_mass(self) -> float:
        return self.m_light + self.m_heavy

    @property
    def reduced_mass(self) -> float:
        return self.m_light * self.m_heavy / self.total_mass

    @property
    def mass_ratio(self) -> float:
        """gamma = m_heavy / m_light."""
        return self.m_heavy / self.m_light

    def with_p(self, p) -> "SpeciesPair":
        return SpeciesPair(self.m_light, self.m_heavy, p)


@dataclass(frozen=True)
class TrapFrequencies:
    """Center-of-mass, relative, coupling and atomic trap frequencies.

    ``omega_c_sq`` is kept as a signed square: it turns negative when the
    polarizability ratio exceeds the magic value.
    """

    omega_mol: float
    omega_r: float
    omega_c_sq: float
    omega_light: float
    omega_heavy: float


def derived_frequencies(pair: SpeciesPair, omega_mol: float) -> TrapFrequencies:
    """Frequencies seen by the relative coordinate and the coupling term.

    Both follow from requiring each atom to feel the same intensity curvature,
    ``m_i omega_i**2 / alpha_i`` equal for the two atoms and for the dimer.
    """
    _require_positive(omega_mol=omega_mol)
    m1, m2, p = pair.m_light, pair.m_heavy, pair.p
    w2 = omega_mol * omega_mol
    omega_r_sq = w2 * (m2 * m2 + p * m1 * m1) / ((p + 1.0) * m1 * m2)
    # m1 * (gamma - p) rather than m2 - p * m1 so the magic ratio gives exactly 0
    omega_c_sq = w2 * m1 * (pair.mass_ratio - p) / ((p + 1.0) * pair.reduced_mass)
    scale = pair.total_mass * w2 / (1.0 + p)
    return TrapFrequencies(
        omega_mol=omega_mol,
        omega_r=math.sqrt(omega_r_sq),
        omega_c_sq=omega_c_sq,
        omega_light=math.sqrt(scale / m1),
        omega_heavy=math.sqrt(p * scale / m2),
    )


def magic_polarizability_ratio(pair: SpeciesPair) -> float:
    """Polarizability ratio at which center-of-mass and vibration decouple."""
    return pair.mass_ratio


def oscillator_length(total_mass, omega_mol):
    """Harmonic-oscillator length sqrt(hbar / (M omega)) of the dimer trap."""
    _require_positive(total_mass=total_mass, omega_mol=omega_mol)
    return math.sqrt(HBAR / (total_mass * omega_mol))


def binding_energy(reduced_mass, scattering_length):
    """Universal Feshbach binding energy hbar^2 / (2 mu a^2) in J."""
    _require_positive(reduced_mass=reduced_mass, scattering_length=scattering_length)
    return HBAR**2 / (2.0 * reduced_mass * scattering_length**2)


def thin_lens_duration(omega_mol, t_pre_tof):
    """Impulse-approximation estimate of the kick duration, in s."""
    _require_positive(omega_mol=omega_mol, t_pre_tof=t_pre_tof)
    return 1.0 / (math.sqrt(2.0 * math.pi) * omega_mol**2 * t_pre_tof)


# factor that converts one unit of the key into the SI unit of its family
_UNIT_FAMILIES = {
    "length": {"m": 1.0, "au": BOHR_RADIUS, "a.u.": BOHR_RADIUS, "bohr": BOHR_RADIUS},
    "mass": {"kg": 1.0, "u": ATOMIC_MASS_UNIT, "amu": ATOMIC_MASS_UNIT},
    "energy": {"J": 1.0, "K": K_B},
    "frequency": {"rad/s": 1.0, "Hz": 2.0 * math.pi},
}


def _unit_family(unit):
    for family, table in _UNIT_FAMILIES.items():
        if unit in table:
            return family, table[unit]
    raise UnsupportedUnitError(f"unknown unit {unit!r}")


def convert_units(value, from_unit, to_unit):
    """Convert ``value`` between two units of the same physical dimension.

    Supported: ``m``/``au`` (Bohr radii), ``kg``/``u``, ``J``/``K`` (via k_B)
    and ``rad/s``/``Hz``.

    >>> convert_units(1000, "au", "m")
    5.29177210903e-08
    """
    fam_from, f_from = _unit_family(from_unit)
    fam_to, f_to = _unit_family(to_unit)
    if fam_from != fam_to:
        raise UnsupportedUnitError(f"cannot convert {from_unit!r} to {to_unit!r}")
    if from_unit == to_unit:
        return value
    return value * f_from / f_to
