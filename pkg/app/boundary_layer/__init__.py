"""Explicit half-plane boundary-layer functions and their cell identities."""

from app.boundary_layer.cells import (
    eval_X,
    eval_X_eta,
    eval_X_eta_gradient,
    eval_X_gradient,
    eval_Y,
    eval_Y_gradient,
)
from app.boundary_layer.integrals import cell_integrals, tabulate_cell_integrals, write_cell_table
from app.boundary_layer.models import ArcShape, CellIntegrals

__all__ = [
    "ArcShape",
    "CellIntegrals",
    "cell_integrals",
    "eval_X",
    "eval_X_eta",
    "eval_X_eta_gradient",
    "eval_X_gradient",
    "eval_Y",
    "eval_Y_gradient",
    "tabulate_cell_integrals",
    "write_cell_table",
]
