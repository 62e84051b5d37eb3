"""Delta-kick collimation of heteronuclear Feshbach molecules."""

__version__ = "0.1.0"

from .coupled import (  # noqa: E402
    CoupledState,
    KickSchedule,
    propagate_analytic,
    propagate_numeric,
    propagate_uncoupled,
)
from .scaling import (  # noqa: E402
    Hydrodynamic,
    SequenceConfig,
    Thermal,
    ThomasFermi,
    Variational,
    gain_scan,
    optimize_kick,
    run_sequence,
)
from .species import SpeciesPair, derived_frequencies  # noqa: E402

__all__ = [
    "__version__",
    "CoupledState",
    "KickSchedule",
    "propagate_analytic",
    "propagate_numeric",
    "propagate_uncoupled",
    "Hydrodynamic",
    "SequenceConfig",
    "Thermal",
    "ThomasFermi",
    "Variational",
    "gain_scan",
    "optimize_kick",
    "run_sequence",
    "SpeciesPair",
    "derived_frequencies",
]
