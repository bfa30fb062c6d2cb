//! Constructive unit-step paths.
//!
//! Every path here is built from a hub point: `reach(z)` returns a path from
//! the hub to `z`, and a `u → v` path is `reach(u)` reversed followed by
//! `reach(v)`, with immediate back-and-forth pairs removed. Each public
//! operation validates its own output before returning it.

mod boxes;
mod connector;
mod simplex;
mod triangle;
mod verdict;
mod wiggle;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use boxes::{
    best_split, hypercube_bound, hypercube_path, hyperrectangle_bound, hyperrectangle_path,
    hyperrectangle_path_with_split, rectangle2d_path, rectangle_bound,
};
pub use connector::{convex_path, find_path, scale_lift};
pub use simplex::{radius_graph, simplex_path, RadiusGraph};
pub use triangle::{obtuse_triangle_path, triangle_reach, triangle_wiggle_path};
pub use verdict::{is_connected, ConnectivityVerdict, VerdictReason, Witness};
pub use wiggle::{rectangle_wiggle_bound, rectangle_wiggle_path};

use crate::convex::ConvexBody;
use crate::error::{Error, Result};
use crate::geom::{Point, Tolerances};

/// What a single step of a path does.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepLabel {
    /// One of the four moves of a wiggle cycle along a rectangle base.
    Wiggle,
    /// Up to or down from the apex used when the rectangle is tall.
    Apex,
    /// Hub to a corner of the working triangle or box.
    CornerHop,
    /// Onto or off a unit-circle arc.
    ArcHop,
    /// Unit translation along a base segment.
    Translate,
    /// Final step from a point on a radius segment (or base, or diagonal)
    /// to the query point.
    RadiusSegment,
    /// Steps through the edge construction of a box.
    FaceHop,
    /// Bridging step from a scaled-down copy of the body.
    Lift,
}

/// A finite sequence of points with unit Euclidean distance between
/// consecutive points.
#[derive(Debug, Clone, PartialEq)]
pub struct StepPath {
    points: Vec<Point>,
    labels: Vec<StepLabel>,
}

#[derive(Serialize, Deserialize)]
struct StepPathJson {
    points: Vec<Point>,
    labels: Vec<StepLabel>,
    steps: usize,
}

impl Serialize for StepPath {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StepPathJson {
            points: self.points.clone(),
            labels: self.labels.clone(),
            steps: self.steps(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for StepPath {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = StepPathJson::deserialize(d)?;
        if j.steps != j.labels.len() {
            return Err(serde::de::Error::custom("steps must equal the number of labels"));
        }
        StepPath::from_parts(j.points, j.labels).map_err(serde::de::Error::custom)
    }
}

impl StepPath {
    /// The zero-step path at `p`.
    pub fn single(p: Point) -> Self {
        StepPath {
            points: vec![p],
            labels: vec![],
        }
    }

    pub fn from_parts(points: Vec<Point>, labels: Vec<StepLabel>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyInput);
        }
        if labels.len() + 1 != points.len() {
            return Err(Error::InvalidParameter(format!(
                "{} points need {} labels, got {}",
                points.len(),
                points.len() - 1,
                labels.len()
            )));
        }
        let d = points[0].dim();
        for p in &points {
            p.check_dim(d)?;
        }
        Ok(StepPath { points, labels })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn labels(&self) -> &[StepLabel] {
        &self.labels
    }

    pub fn steps(&self) -> usize {
        self.labels.len()
    }

    pub fn start(&self) -> &Point {
        &self.points[0]
    }

    pub fn end(&self) -> &Point {
        self.points.last().expect("paths are nonempty")
    }

    pub fn push(&mut self, p: Point, label: StepLabel) {
        self.points.push(p);
        self.labels.push(label);
    }

    /// Appends `tail`, whose first point must coincide with our last one.
    pub fn append(&mut self, tail: StepPath) {
        let mut pts = tail.points.into_iter();
        pts.next();
        self.points.extend(pts);
        self.labels.extend(tail.labels);
    }

    pub fn reversed(&self) -> StepPath {
        let mut points = self.points.clone();
        points.reverse();
        let mut labels = self.labels.clone();
        labels.reverse();
        StepPath { points, labels }
    }

    pub fn map_points(&self, f: impl Fn(&Point) -> Point) -> StepPath {
        StepPath {
            points: self.points.iter().map(f).collect(),
            labels: self.labels.clone(),
        }
    }

    /// Drops `a → b → a` detours.
    pub fn simplified(&self) -> StepPath {
        let mut points: Vec<Point> = Vec::with_capacity(self.points.len());
        let mut labels: Vec<StepLabel> = Vec::with_capacity(self.labels.len());
        for (i, p) in self.points.iter().enumerate() {
            let n = points.len();
            if n >= 2 && points[n - 2].dist(p) <= 1e-12 {
                points.pop();
                labels.pop();
                continue;
            }
            if i > 0 {
                labels.push(self.labels[i - 1]);
            }
            points.push(p.clone());
        }
        StepPath { points, labels }
    }

    /// Largest `|d(p_i, p_{i+1}) - 1|`.
    pub fn max_step_error(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| (w[0].dist(&w[1]) - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Replaces the end points, which the constructions reproduce only up to
    /// rounding.
    pub(crate) fn snap_ends(mut self, u: &Point, v: &Point) -> StepPath {
        self.points[0] = u.clone();
        let n = self.points.len();
        self.points[n - 1] = v.clone();
        self
    }
}

/// Planar working coordinates.
pub(crate) type P2 = [f64; 2];

pub(crate) fn dist2(a: P2, b: P2) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// A path in planar working coordinates, mapped into ℝᵈ at the end.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct LocalPath {
    pub pts: Vec<P2>,
    pub labels: Vec<StepLabel>,
}

impl LocalPath {
    pub fn single(p: P2) -> Self {
        LocalPath {
            pts: vec![p],
            labels: vec![],
        }
    }

    pub fn push(&mut self, p: P2, label: StepLabel) {
        self.pts.push(p);
        self.labels.push(label);
    }

    pub fn append(&mut self, tail: LocalPath) {
        self.pts.extend(tail.pts.into_iter().skip(1));
        self.labels.extend(tail.labels);
    }

    pub fn map(&self, f: impl Fn(P2) -> Point) -> StepPath {
        StepPath {
            points: self.pts.iter().map(|p| f(*p)).collect(),
            labels: self.labels.clone(),
        }
    }
}

/// `reach(u)` reversed, then `reach(v)`.
pub(crate) fn join_at_hub(to_u: StepPath, to_v: StepPath) -> StepPath {
    let mut p = to_u.reversed();
    p.append(to_v);
    p.simplified()
}

/// Upper bound on a graph diameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundValue {
    Finite(u64),
    Unbounded,
}

impl Serialize for BoundValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            BoundValue::Finite(n) => s.serialize_u64(*n),
            BoundValue::Unbounded => s.serialize_str("unbounded"),
        }
    }
}

/// A diameter bound together with the formula and inputs behind it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiameterBound {
    pub bound: BoundValue,
    pub formula_id: &'static str,
    pub parameters: BTreeMap<&'static str, f64>,
}

impl DiameterBound {
    pub fn finite(&self) -> Option<u64> {
        match self.bound {
            BoundValue::Finite(n) => Some(n),
            BoundValue::Unbounded => None,
        }
    }
}

/// Rejects a constructed path that fails the strict validator.
pub(crate) fn checked(body: &ConvexBody, path: StepPath, tol: &Tolerances) -> Result<StepPath> {
    let report = crate::oracle::validate_path(body, &path, tol.geom_eps);
    if report.valid {
        Ok(path)
    } else {
        Err(Error::Numerical(format!(
            "constructed path failed validation: {}",
            report.violations[0]
        )))
    }
}

pub(crate) fn require_inside(body: &ConvexBody, p: &Point, tol: &Tolerances) -> Result<()> {
    p.check_dim(body.dim())?;
    if !body.contains(p, tol.geom_eps) {
        return Err(Error::OutsideBody);
    }
    Ok(())
}
