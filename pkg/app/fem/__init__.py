"""P1 finite elements: assembly, generalized eigensolves and boundary integrals."""

from app.fem.assembly import assemble, boundary_mass, stiffness_and_mass
from app.fem.models import OperatorSet, Spectrum, cluster_ids
from app.fem.solver import solve_eigs
from app.fem.traces import (
    boundary_trace_gram,
    boundary_trace_integral,
    eigenvector_defect,
    normal_derivative_gram,
    normal_derivative_integral,
    normal_fluxes,
    write_eigenvectors_csv,
    write_spectrum_csv,
)

__all__ = [
    "OperatorSet",
    "Spectrum",
    "assemble",
    "boundary_mass",
    "boundary_trace_gram",
    "boundary_trace_integral",
    "cluster_ids",
    "eigenvector_defect",
    "normal_derivative_gram",
    "normal_derivative_integral",
    "normal_fluxes",
    "solve_eigs",
    "stiffness_and_mass",
    "write_eigenvectors_csv",
    "write_spectrum_csv",
]
