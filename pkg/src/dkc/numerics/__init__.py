"""Self-contained numerical kernel used by the physics modules."""

from .airy import AiryValues, airy
from .ode import OdeSolution, OdeStats, integrate_ode
from .optimize import find_root, minimize_scalar
from .quadrature import quad

__all__ = [
    "AiryValues",
    "airy",
    "OdeSolution",
    "OdeStats",
    "integrate_ode",
    "minimize_scalar",
    "find_root",
    "quad",
]
