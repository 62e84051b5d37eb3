"""Physical constants (CODATA 2018, SI) and default species data."""

HBAR = 1.054571817e-34  # J s
K_B = 1.380649e-23  # J / K
ATOMIC_MASS_UNIT = 1.66053906660e-27  # kg
BOHR_RADIUS = 5.29177210903e-11  # m

MASS_K41_U = 40.96182526
MASS_RB87_U = 86.909180531

# polarizability ratio alpha_Rb / alpha_K for a 2000 nm trap
P_2000NM = 1.10
