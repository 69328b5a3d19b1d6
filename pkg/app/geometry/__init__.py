"""Boundary geometry, theta maps and alternating arc configurations."""

from app.geometry.alternation import (
    ArcRule,
    ArcRuleFactory,
    CustomRule,
    DriftingRule,
    ImageUniformRule,
    ModulatedRule,
    ScaledRule,
    UniformRule,
    check_disjoint,
    compute_anchors,
    contains,
    generate_alternation,
)
from app.geometry.curves import circle, ellipse, make_curve
from app.geometry.models import (
    AlternationConfig,
    ArcQuantities,
    BoundaryCurve,
    CurveKind,
    SmallParams,
    ThetaKind,
    ThetaMap,
)
from app.geometry.quantities import (
    arc_image_ratio,
    arc_quantities,
    check_profile_bounds,
    cutoff_chi,
    eta0,
    eta_from_mu,
    profile_f,
    small_params,
    write_arc_table,
)
from app.geometry.theta import build_theta_map

__all__ = [
    "AlternationConfig",
    "ArcQuantities",
    "ArcRule",
    "ArcRuleFactory",
    "BoundaryCurve",
    "CurveKind",
    "CustomRule",
    "DriftingRule",
    "ImageUniformRule",
    "ModulatedRule",
    "ScaledRule",
    "SmallParams",
    "ThetaKind",
    "ThetaMap",
    "UniformRule",
    "arc_image_ratio",
    "arc_quantities",
    "build_theta_map",
    "check_disjoint",
    "check_profile_bounds",
    "circle",
    "compute_anchors",
    "contains",
    "cutoff_chi",
    "ellipse",
    "eta0",
    "eta_from_mu",
    "generate_alternation",
    "make_curve",
    "profile_f",
    "small_params",
    "write_arc_table",
]
