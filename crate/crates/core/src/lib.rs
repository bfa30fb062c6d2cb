//! Unit-distance graphs on closed convex bodies.
//!
//! The crate decides whether the graph joining points of a convex body at
//! Euclidean distance exactly one is connected, builds explicit unit-step
//! paths between points, evaluates diameter bounds for boxes, classifies the
//! components of small squares and simulates the fixed-step random walk.
//! A brute-force grid oracle cross-checks all of it.

// `!(x > 0.0)` is used on purpose so NaN fails the guard
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod components;
pub mod convex;
pub mod error;
pub mod geom;
pub mod linalg;
pub mod oracle;
pub mod pathfinder;
mod planar;
pub mod walker;

pub use components::{
    classify_point, critical_lengths, emit_region_svg, ComponentId, ComponentLabel, CriticalLength,
    Regime,
};

pub use convex::{
    affine_dimension, is_meb_by_seidel, is_well_centered, meb, radius, scale_body, BodyDescriptor,
    ConvexBody, Hyperrectangle, MebResult, RayHull, RigidMotion, Shape, Simplex, VPolytope,
};
pub use error::{Error, Result};
pub use geom::{
    distance, halfspace_contains, unit_point_on_arc, unit_point_on_polyline, unit_point_on_segment,
    Arc, Ball, Curve, Frame2, HalfSpace, Point, Segment, Sphere, Tolerances, UnitHit,
};
pub use oracle::{
    bfs_distance, build_grid_graph, oracle_report, validate_path, GridGraph, OracleReport,
    ValidationReport, Violation,
};
pub use pathfinder::{
    best_split, convex_path, find_path, hypercube_bound, hypercube_path, hyperrectangle_bound,
    hyperrectangle_path, hyperrectangle_path_with_split, is_connected, obtuse_triangle_path,
    radius_graph, rectangle2d_path, rectangle_bound, rectangle_wiggle_bound, rectangle_wiggle_path,
    scale_lift, simplex_path, triangle_reach, triangle_wiggle_path, BoundValue, ConnectivityVerdict,
    DiameterBound, RadiusGraph, StepLabel, StepPath, VerdictReason, Witness,
};
pub use walker::{
    feasible_directions, histogram2d, radial_ks_distance, run_ensemble, step_sample, DirectionKind,
    FeasibleDirections, Histogram2d, RunStatus, WalkConfig, WalkEnsemble,
};
