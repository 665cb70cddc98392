"""Quadratic-drag vertical fall: two inequivalent Lagrangian/Hamiltonian
descriptions, their quantum bouncer spectra and canonical thermodynamics."""

from .dynamics import (
    DomainError,
    Formulation,
    IntegrationError,
    MediumParams,
    PhaseState,
    Trajectory,
    analytic_drop,
    characteristic,
    constant_of_motion,
    integrate,
    rhs,
)
from .mechanics import (
    CanonicalState,
    hamilton_equations,
    hamilton_flow,
    hamiltonian,
    hamiltonian_first_order,
    lagrangian,
    momentum,
    velocity_from_momentum,
)
from .quantum import BouncerBasis, SpectrumLine, e0, eigenstate, matrix_element, spectrum, w_correction
from .statmech import (
    EnsembleParams,
    ThermoPoint,
    heat_capacity,
    internal_energy,
    log_partition_closed,
    log_partition_oracle,
    sweep_beta,
)

__version__ = "0.1.0"

__all__ = [
    "DomainError", "Formulation", "IntegrationError", "MediumParams", "PhaseState", "Trajectory",
    "analytic_drop", "characteristic", "constant_of_motion", "integrate", "rhs",
    "CanonicalState", "hamilton_equations", "hamilton_flow", "hamiltonian",
    "hamiltonian_first_order", "lagrangian", "momentum", "velocity_from_momentum",
    "BouncerBasis", "SpectrumLine", "e0", "eigenstate", "matrix_element", "spectrum", "w_correction",
    "EnsembleParams", "ThermoPoint", "heat_capacity", "internal_energy", "log_partition_closed",
    "log_partition_oracle", "sweep_beta",
]
