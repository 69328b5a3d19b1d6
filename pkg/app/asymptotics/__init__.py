"""Predicted eigenvalues from the explicit correction formulas and two-sided bound checks."""

from app.asymptotics.bounds import fit_envelope, two_sided_check
from app.asymptotics.models import (
    BoundFamily,
    BoundReport,
    BoundSample,
    EnvelopeFit,
    Prediction,
    PredictionKind,
)
from app.asymptotics.predictions import (
    dirichlet_correction,
    dirichlet_prediction,
    first_order_prediction,
    lambda1_two_term,
    robin_first_order,
    two_term_prediction,
)

__all__ = [
    "BoundFamily",
    "BoundReport",
    "BoundSample",
    "EnvelopeFit",
    "Prediction",
    "PredictionKind",
    "dirichlet_correction",
    "dirichlet_prediction",
    "first_order_prediction",
    "fit_envelope",
    "lambda1_two_term",
    "robin_first_order",
    "two_sided_check",
    "two_term_prediction",
]
