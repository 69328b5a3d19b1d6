"""Limiting problems, unit-disk oracles and weighted cluster orthogonalization."""

from app.homogenized.limits import orthogonalize_clusters, solve_limit, weighted_orthogonalize
from app.homogenized.models import DiskOracle, LimitKind, LimitProblem, OracleMode
from app.homogenized.oracle import (
    disk_mode_boundary_mass,
    disk_mode_flux,
    disk_oracle,
    disk_roots,
    write_oracle_csv,
)

__all__ = [
    "DiskOracle",
    "LimitKind",
    "LimitProblem",
    "OracleMode",
    "disk_mode_boundary_mass",
    "disk_mode_flux",
    "disk_oracle",
    "disk_roots",
    "orthogonalize_clusters",
    "solve_limit",
    "weighted_orthogonalize",
    "write_oracle_csv",
]
