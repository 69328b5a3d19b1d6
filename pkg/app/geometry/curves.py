"""Arclength parametrizations of smooth closed boundary curves."""

import logging
import math

import numpy as np
from scipy.special import ellipe, ellipeinc

from app.errors import GeometryError

from .models import BoundaryCurve, CurveKind

logger = logging.getLogger(__name__)


def _stack(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.stack([x, y], axis=-1)


def circle(radius: float = 1.0) -> BoundaryCurve:
    """Circle of the given radius centred at the origin.

    Args:
        radius: Circle radius

    Returns:
        Arclength-parametrized circle with S = 2 pi R

    Raises:
        GeometryError: If the radius is not positive
    """
    if not radius > 0:
        raise GeometryError(f"Circle radius must be positive, got {radius}")

    def position(s):
        phi = np.asarray(s, dtype=float) / radius
        return _stack(radius * np.cos(phi), radius * np.sin(phi))

    def tangent(s):
        phi = np.asarray(s, dtype=float) / radius
        return _stack(-np.sin(phi), np.cos(phi))

    def normal(s):
        phi = np.asarray(s, dtype=float) / radius
        return _stack(np.cos(phi), np.sin(phi))

    def curvature(s):
        return np.full(np.shape(s), 1.0 / radius)

    return BoundaryCurve(
        kind=CurveKind.CIRCLE,
        total_length=2.0 * math.pi * radius,
        area=math.pi * radius**2,
        position=position,
        tangent=tangent,
        outward_normal=normal,
        curvature=curvature,
    )


class _EllipseArclength:
    """Arclength s(t) of x = a cos t, y = b sin t and its inverse."""

    def __init__(self, a: float, b: float):
        self.a = a
        self.b = b
        self.major = max(a, b)
        self.m = 1.0 - (min(a, b) / self.major) ** 2
        self.total = 4.0 * self.major * float(ellipe(self.m))

    def speed(self, t: np.ndarray) -> np.ndarray:
        return np.hypot(self.a * np.sin(t), self.b * np.cos(t))

    def arclength(self, t: np.ndarray) -> np.ndarray:
        if self.a >= self.b:
            # speed = a sqrt(1 - m cos^2 t) = a sqrt(1 - m sin^2(t + pi/2))
            shift = float(ellipeinc(math.pi / 2, self.m))
            return self.major * (ellipeinc(t + math.pi / 2, self.m) - shift)
        return self.major * ellipeinc(t, self.m)

    def parameter(self, s: np.ndarray) -> np.ndarray:
        """Invert s(t) with vectorized Newton iterations."""
        s = np.asarray(s, dtype=float)
        t = 2.0 * math.pi * s / self.total
        for _ in range(50):
            step = (self.arclength(t) - s) / self.speed(t)
            t = t - step
            if np.max(np.abs(step), initial=0.0) < 1e-15:
                break
        return t


def ellipse(semi_x: float, semi_y: float) -> BoundaryCurve:
    """Ellipse with semi-axes along x and y, parametrized by arclength from (semi_x, 0).

    Args:
        semi_x: Semi-axis along x
        semi_y: Semi-axis along y

    Returns:
        Arclength-parametrized ellipse

    Raises:
        GeometryError: If a semi-axis is not positive
    """
    if not (semi_x > 0 and semi_y > 0):
        raise GeometryError(f"Ellipse semi-axes must be positive, got ({semi_x}, {semi_y})")

    arc = _EllipseArclength(semi_x, semi_y)
    logger.debug(f"Ellipse ({semi_x}, {semi_y}) has perimeter {arc.total:.12f}")

    def _t(s):
        return arc.parameter(np.mod(np.asarray(s, dtype=float), arc.total))

    def position(s):
        t = _t(s)
        return _stack(semi_x * np.cos(t), semi_y * np.sin(t))

    def tangent(s):
        t = _t(s)
        v = arc.speed(t)
        return _stack(-semi_x * np.sin(t) / v, semi_y * np.cos(t) / v)

    def normal(s):
        t = _t(s)
        v = arc.speed(t)
        return _stack(semi_y * np.cos(t) / v, semi_x * np.sin(t) / v)

    def curvature(s):
        return semi_x * semi_y / arc.speed(_t(s)) ** 3

    return BoundaryCurve(
        kind=CurveKind.ELLIPSE,
        total_length=arc.total,
        area=math.pi * semi_x * semi_y,
        position=position,
        tangent=tangent,
        outward_normal=normal,
        curvature=curvature,
    )


def make_curve(kind: CurveKind | str, **params: float) -> BoundaryCurve:
    """Create a boundary curve from its kind and parameters.

    Args:
        kind: Curve kind name
        **params: `radius` for circles, `semi_x` and `semi_y` for ellipses

    Returns:
        Boundary curve instance

    Raises:
        GeometryError: If the kind is unknown
    """
    kind = CurveKind(kind)
    if kind == CurveKind.CIRCLE:
        return circle(params.get("radius", 1.0))
    elif kind == CurveKind.ELLIPSE:
        return ellipse(params.get("semi_x", 1.0), params.get("semi_y", 1.0))
    else:
        raise GeometryError(f"Unknown curve kind: {kind}")
