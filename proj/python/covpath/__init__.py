"""Constraint-driven coverage path generation for constant-speed vehicles."""

__version__ = "0.1.0"

from ._core import (
    ConfigError,
    DegeneratePoint,
    DegenerateShape,
    Direction,
    NonPdShape,
    Pose,
    RegionTooSmall,
    circle_arc_angle,
    circle_center,
    circle_path_score,
    default_config_json,
    ellipse_arc_angle,
    ellipse_center,
    ellipse_curvature,
    ellipse_path_score,
    pool_barrier,
    run_scenario,
    sampson_distance,
    sensing_performance,
    shape_barriers,
    solve_qp,
    step_dubins,
    validate_config,
    wrap_angle,
)

__all__ = [
    "ConfigError",
    "DegeneratePoint",
    "DegenerateShape",
    "Direction",
    "NonPdShape",
    "Pose",
    "RegionTooSmall",
    "circle_arc_angle",
    "circle_center",
    "circle_path_score",
    "default_config_json",
    "ellipse_arc_angle",
    "ellipse_center",
    "ellipse_curvature",
    "ellipse_path_score",
    "pool_barrier",
    "run_scenario",
    "sampson_distance",
    "sensing_performance",
    "shape_barriers",
    "solve_qp",
    "step_dubins",
    "validate_config",
    "wrap_angle",
]
