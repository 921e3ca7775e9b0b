"""Polynomial solutions of Heun-type equations (extended NU method)."""

from ._core import (
    SCHEMA_VERSION,
    NoSolution,
    Unsupported,
    VerificationError,
    bethe_residual,
    branches,
    che_solve,
    coulomb3s_energy,
    doublewell_spectrum,
    electrons_sphere_state,
    heun_class_ab,
    heun_solve,
)

__all__ = [
    "SCHEMA_VERSION",
    "NoSolution",
    "Unsupported",
    "VerificationError",
    "bethe_residual",
    "branches",
    "che_solve",
    "coulomb3s_energy",
    "doublewell_spectrum",
    "electrons_sphere_state",
    "heun_class_ab",
    "heun_solve",
]
