"""Explicit harmonic cell functions X, X_eta, Y and Y_1 with their gradients.

Each function is the real part of a holomorphic F minus a linear term, so the
gradient follows from F': d/dxi1 = Re F', d/dxi2 = -Im F'.
"""

import math

import numpy as np

from app.errors import ConfigurationError

from .models import ArcShape

LATTICE_GUARD = 1e-12
ENDPOINT_GUARD = 1e-12


def _z(xi1, xi2) -> np.ndarray:
    return np.asarray(xi1, dtype=float) + 1j * np.asarray(xi2, dtype=float)


def _out(value: np.ndarray):
    return float(value) if np.ndim(value) == 0 else value


def _check_lattice(z: np.ndarray) -> None:
    offset = z.real - math.pi * np.round(z.real / math.pi)
    distance = np.hypot(offset, z.imag)
    if np.any(distance < LATTICE_GUARD):
        raise ConfigurationError(
            f"Point lies within {LATTICE_GUARD:g} of the singular lattice (pi j, 0)"
        )


def eval_X(xi1, xi2):
    """X = ln|sin z| + ln 2 - xi2, pi-periodic and even in xi1.

    Raises:
        ConfigurationError: Within 1e-12 of a lattice point (pi j, 0)
    """
    z = _z(xi1, xi2)
    _check_lattice(z)
    return _out(np.log(np.abs(np.sin(z))) + math.log(2.0) - z.imag)


def eval_X_gradient(xi1, xi2) -> tuple:
    """Gradient of X from F' = cot z."""
    z = _z(xi1, xi2)
    _check_lattice(z)
    cot = np.cos(z) / np.sin(z)
    return _out(cot.real), _out(-cot.imag - 1.0)


def _check_eta(eta: float) -> None:
    if not 0.0 < eta <= math.pi / 2:
        raise ConfigurationError(f"eta must lie in (0, pi/2], got {eta}")


def _aligned_root(w: np.ndarray, eta: float) -> np.ndarray:
    """sqrt(w^2 - sin^2 eta) on the branch that behaves like w for large |w|."""
    root = np.sqrt(w * w - math.sin(eta) ** 2)
    flip = (np.conj(w) * root).real < 0
    return np.where(flip, -root, root)


def eval_X_eta(xi1, xi2, eta: float):
    """X_eta = ln|sin z + sqrt(sin^2 z - sin^2 eta)| - xi2.

    Equals ln sin eta on the arcs |xi1 - pi j| < eta and decays as xi2 grows.
    """
    _check_eta(eta)
    z = _z(xi1, xi2)
    w = np.sin(z)
    return _out(np.log(np.abs(w + _aligned_root(w, eta))) - z.imag)


def eval_X_eta_gradient(xi1, xi2, eta: float) -> tuple:
    """Gradient of X_eta from F' = cos z / sqrt(sin^2 z - sin^2 eta).

    Raises:
        ConfigurationError: Within 1e-12 of an arc endpoint (pi j +- eta, 0)
    """
    _check_eta(eta)
    z = _z(xi1, xi2)
    w = np.sin(z)
    root = _aligned_root(w, eta)
    if np.any(np.abs(root) < ENDPOINT_GUARD):
        raise ConfigurationError("Gradient of X_eta is singular at the arc endpoints")
    derivative = np.cos(z) / root
    return _out(derivative.real), _out(-derivative.imag - 1.0)


def _y_root(y: np.ndarray) -> np.ndarray:
    """sqrt(y^2 - 1) with the cut on [-1, 1], behaving like y at infinity."""
    return np.sqrt(y - 1.0) * np.sqrt(y + 1.0)


def eval_Y(s1, s2, shape: ArcShape) -> tuple:
    """Y = Re ln(y + sqrt(y^2 - 1)) and Y_1 = (alpha + beta) Re sqrt(y^2 - 1).

    Y vanishes on the segment (-2 alpha, 2 beta) and has zero normal derivative
    on the rest of the axis; far away Y ~ ln|s| + ln 2 - ln(alpha + beta) and
    Y_1 ~ s1 + alpha - beta.

    Both functions are continuous up to the arc endpoints (Y = 0 there), so
    values are returned even at an endpoint. Only `eval_Y_gradient`, which is
    singular there, rejects points within the endpoint guard.

    Returns:
        (Y, Y_1)
    """
    y = shape.y(s1, s2)
    root = _y_root(y)
    return _out(np.log(np.abs(y + root))), _out(shape.width * root.real)


def eval_Y_gradient(s1, s2, shape: ArcShape) -> tuple:
    """Gradients of Y and Y_1 as ((dY/ds1, dY/ds2), (dY1/ds1, dY1/ds2)).

    Raises:
        ConfigurationError: Within 1e-12 of an arc endpoint
    """
    y = shape.y(s1, s2)
    root = _y_root(y)
    if np.any(shape.width * np.abs(root) < ENDPOINT_GUARD):
        raise ConfigurationError(
            f"Point lies within {ENDPOINT_GUARD:g} of an arc endpoint {shape.endpoints}"
        )
    dY = 1.0 / (shape.width * root)
    dY1 = y / root
    return (_out(dY.real), _out(-dY.imag)), (_out(dY1.real), _out(-dY1.imag))
