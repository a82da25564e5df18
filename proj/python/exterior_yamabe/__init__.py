"""Radial exterior Yamabe solver."""

from ._core import (
    Grid,
    Metric,
    Region,
    build_grid,
    bump_profile,
    classify_sign,
    conformal_curvatures,
    energy,
    flat_metric,
    full_region,
    lambda_delta,
    metric_with_curvature,
    mms_case,
    prescribe,
    region,
    run_command,
    solve_linear_robin,
    unit_root,
    weighted_norm,
    well_metric,
    yamabe_infimum,
)

__all__ = [
    "Grid",
    "Metric",
    "Region",
    "build_grid",
    "bump_profile",
    "classify_sign",
    "conformal_curvatures",
    "energy",
    "flat_metric",
    "full_region",
    "lambda_delta",
    "metric_with_curvature",
    "mms_case",
    "prescribe",
    "region",
    "run_command",
    "solve_linear_robin",
    "unit_root",
    "weighted_norm",
    "well_metric",
    "yamabe_infimum",
]
