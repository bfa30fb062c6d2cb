//! Primitive geometry in ℝᵈ and the bisection solver that locates points at
//! unit distance along segments, polylines and circular arcs.
//!
//! Every constructive step in [`crate::pathfinder`] ends in one of the
//! `unit_point_*` functions here: given a query point `x` and a continuous
//! curve whose endpoints straddle the unit sphere around `x`, bisect the
//! curve parameter until the distance is one.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point (or vector) in ℝᵈ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<f64>);

impl Point {
    /// Builds a point, rejecting empty or non-finite coordinate lists.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyPoint);
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Point(coords))
    }

    /// Unchecked constructor for internal arithmetic results.
    pub(crate) fn raw(coords: Vec<f64>) -> Self {
        Point(coords)
    }

    pub fn origin(dim: usize) -> Self {
        Point(vec![0.0; dim])
    }

    pub fn xy(x: f64, y: f64) -> Self {
        Point(vec![x, y])
    }

    /// The `i`-th standard basis vector scaled by `len`.
    pub fn axis(dim: usize, i: usize, len: f64) -> Self {
        let mut c = vec![0.0; dim];
        c[i] = len;
        Point(c)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &Point) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Unit vector in the same direction, or `None` for (near) zero vectors.
    pub fn normalized(&self) -> Option<Point> {
        let n = self.norm();
        (n > 1e-300).then(|| self * (1.0 / n))
    }

    pub fn dist(&self, other: &Point) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// `a + t (b - a)`.
    pub fn lerp(a: &Point, b: &Point, t: f64) -> Point {
        Point(a.0.iter().zip(&b.0).map(|(x, y)| x + t * (y - x)).collect())
    }

    pub fn approx_eq(&self, other: &Point, tol: f64) -> bool {
        self.dim() == other.dim() && self.dist(other) <= tol
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: self.dim(),
            });
        }
        Ok(())
    }
}

impl std::fmt::Display for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Add for &Point {
    type Output = Point;
    fn add(self, rhs: &Point) -> Point {
        Point(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Point {
    type Output = Point;
    fn sub(self, rhs: &Point) -> Point {
        Point(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Mul<f64> for &Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point(self.0.iter().map(|a| a * s).collect())
    }
}

impl Neg for &Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point(self.0.iter().map(|a| -a).collect())
    }
}

/// Euclidean distance with a dimension check.
pub fn distance(p: &Point, q: &Point) -> Result<f64> {
    q.check_dim(p.dim())?;
    Ok(p.dist(q))
}

/// Numerical slack used across the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Membership and unit-length slack.
    pub geom_eps: f64,
    /// Parameter resolution of the bisection solver.
    pub bisect_eps: f64,
    /// Distance slack for deciding that a point lies on an enclosing sphere.
    pub support_eps: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            geom_eps: 1e-9,
            bisect_eps: 1e-12,
            support_eps: 1e-7,
        }
    }
}

impl Tolerances {
    pub fn new(geom_eps: f64, bisect_eps: f64) -> Result<Self> {
        let t = Tolerances {
            geom_eps,
            bisect_eps,
            ..Default::default()
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0 < self.bisect_eps && self.bisect_eps < self.geom_eps && self.geom_eps < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "tolerances must satisfy 0 < bisect_eps < geom_eps < 1 (got {} / {})",
                self.bisect_eps, self.geom_eps
            )));
        }
        if !(self.support_eps > 0.0 && self.support_eps < 1.0) {
            return Err(Error::InvalidParameter("support_eps must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

/// Closed ball `{x : d(x, center) <= radius}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        if !(radius >= 0.0) {
            return Err(Error::InvalidParameter("ball radius must be nonnegative".into()));
        }
        Ok(Ball { center, radius })
    }

    pub fn contains(&self, x: &Point, tol: f64) -> bool {
        self.center.dist(x) <= self.radius + tol
    }

    pub fn boundary(&self) -> Sphere {
        Sphere {
            center: self.center.clone(),
            radius: self.radius,
        }
    }
}

/// Sphere `{x : d(x, center) = radius}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sphere {
    pub center: Point,
    pub radius: f64,
}

impl Sphere {
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        if !(radius >= 0.0) {
            return Err(Error::InvalidParameter("sphere radius must be nonnegative".into()));
        }
        Ok(Sphere { center, radius })
    }

    pub fn contains(&self, x: &Point, tol: f64) -> bool {
        (self.center.dist(x) - self.radius).abs() <= tol
    }
}

/// Closed half-space `H(P, Q) = {x : (Q - P)·(x - P) <= 0}`; it contains the
/// base `P` and excludes the witness `Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfSpace {
    base: Point,
    witness: Point,
    normal: Point,
}

impl HalfSpace {
    pub fn new(base: Point, witness: Point) -> Result<Self> {
        witness.check_dim(base.dim())?;
        let normal = &witness - &base;
        if normal.norm() == 0.0 {
            return Err(Error::DegenerateHalfSpace);
        }
        Ok(HalfSpace {
            base,
            witness,
            normal,
        })
    }

    pub fn base(&self) -> &Point {
        &self.base
    }

    pub fn witness(&self) -> &Point {
        &self.witness
    }

    /// Signed inner product `(Q - P)·(x - P)`.
    pub fn signed(&self, x: &Point) -> f64 {
        self.normal.dot(&(x - &self.base))
    }
}

/// Membership in `H(P, Q)` with `tol` slack on the signed inner product.
pub fn halfspace_contains(h: &HalfSpace, x: &Point, tol: f64) -> Result<bool> {
    x.check_dim(h.base.dim())?;
    Ok(h.signed(x) <= tol)
}

/// A parametrised continuous curve on `[0, 1]`.
pub trait Curve {
    fn point_at(&self, t: f64) -> Point;

    fn start(&self) -> Point {
        self.point_at(0.0)
    }

    fn end(&self) -> Point {
        self.point_at(1.0)
    }
}

/// Line segment `ab`.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Result<Self> {
        b.check_dim(a.dim())?;
        Ok(Segment { a, b })
    }

    pub fn length(&self) -> f64 {
        self.a.dist(&self.b)
    }
}

impl Curve for Segment {
    fn point_at(&self, t: f64) -> Point {
        Point::lerp(&self.a, &self.b, t)
    }
}

/// Circular arc `center + radius (cos θ e1 + sin θ e2)` for θ running from
/// `theta_from` to `theta_to` (in either direction). `e1`, `e2` must be
/// orthonormal; they span the 2D affine plane holding the arc.
#[derive(Debug, Clone, PartialEq)]
pub struct Arc {
    pub center: Point,
    pub radius: f64,
    pub e1: Point,
    pub e2: Point,
    pub theta_from: f64,
    pub theta_to: f64,
}

impl Arc {
    pub fn new(
        center: Point,
        radius: f64,
        e1: Point,
        e2: Point,
        theta_from: f64,
        theta_to: f64,
    ) -> Result<Self> {
        e1.check_dim(center.dim())?;
        e2.check_dim(center.dim())?;
        let ortho = e1.dot(&e2).abs();
        if (e1.norm() - 1.0).abs() > 1e-12 || (e2.norm() - 1.0).abs() > 1e-12 || ortho > 1e-12 {
            return Err(Error::InvalidParameter("arc frame must be orthonormal".into()));
        }
        if !(radius >= 0.0) {
            return Err(Error::InvalidParameter("arc radius must be nonnegative".into()));
        }
        Ok(Arc {
            center,
            radius,
            e1,
            e2,
            theta_from,
            theta_to,
        })
    }

    /// Arc of a circle lying in the standard xy-plane of ℝ².
    pub fn planar(center: Point, radius: f64, theta_from: f64, theta_to: f64) -> Result<Self> {
        center.check_dim(2)?;
        Arc::new(
            center,
            radius,
            Point::xy(1.0, 0.0),
            Point::xy(0.0, 1.0),
            theta_from,
            theta_to,
        )
    }

    pub fn angle_at(&self, t: f64) -> f64 {
        self.theta_from + t * (self.theta_to - self.theta_from)
    }
}

impl Curve for Arc {
    fn point_at(&self, t: f64) -> Point {
        let th = self.angle_at(t);
        let (s, c) = th.sin_cos();
        let coords = self
            .center
            .coords()
            .iter()
            .zip(self.e1.coords().iter().zip(self.e2.coords()))
            .map(|(o, (a, b))| o + self.radius * (c * a + s * b))
            .collect();
        Point::raw(coords)
    }
}

/// A point at unit distance together with where it was found.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitHit {
    pub point: Point,
    /// Index of the curve piece (segment of a polyline) holding the point.
    pub piece: usize,
    /// Curve parameter in `[0, 1]` on that piece.
    pub t: f64,
}

/// Bisects `f(t) = d(x, curve(t)) - 1` on `[0, 1]`.
///
/// Accepts an endpoint when `|f| <= geom_eps` there; otherwise requires a
/// strict sign change and shrinks the bracket to `bisect_eps`.
fn bisect_curve<C: Curve + ?Sized>(x: &Point, curve: &C, tol: &Tolerances) -> Result<(Point, f64)> {
    let f = |p: &Point| x.dist(p) - 1.0;
    let pa = curve.point_at(0.0);
    let pb = curve.point_at(1.0);
    let (fa, fb) = (f(&pa), f(&pb));
    if fa == 0.0 {
        return Ok((pa, 0.0));
    }
    if fb == 0.0 {
        return Ok((pb, 1.0));
    }
    if fa.signum() == fb.signum() {
        // no strict crossing; an endpoint within slack still counts
        let (best, bt, bf) = if fa.abs() <= fb.abs() {
            (pa, 0.0, fa)
        } else {
            (pb, 1.0, fb)
        };
        if bf.abs() <= tol.geom_eps {
            return Ok((best, bt));
        }
        return Err(Error::NoCrossing);
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let mut flo = fa;
    let mut best = if fa.abs() <= fb.abs() { (pa, 0.0, fa) } else { (pb, 1.0, fb) };
    // 200 halvings exhaust f64 resolution long before the cap
    for _ in 0..200 {
        if hi - lo <= tol.bisect_eps {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let pm = curve.point_at(mid);
        let fm = f(&pm);
        if fm.abs() < best.2.abs() {
            best = (pm.clone(), mid, fm);
        }
        if fm == 0.0 {
            break;
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    // the bracket ends are evaluated too, the closer one wins
    for t in [lo, hi] {
        let p = curve.point_at(t);
        let fv = f(&p);
        if fv.abs() < best.2.abs() {
            best = (p, t, fv);
        }
    }
    Ok((best.0, best.1))
}

/// Point `y` on segment `s` with `d(x, y) = 1`, found by bisection on the
/// segment parameter.
pub fn unit_point_on_segment(x: &Point, s: &Segment, tol: &Tolerances) -> Result<Point> {
    unit_hit_on_segment(x, s, tol).map(|h| h.point)
}

pub fn unit_hit_on_segment(x: &Point, s: &Segment, tol: &Tolerances) -> Result<UnitHit> {
    x.check_dim(s.a.dim())?;
    let (point, t) = bisect_curve(x, s, tol)?;
    Ok(UnitHit { point, piece: 0, t })
}

/// Point at unit distance from `x` on the polyline through `pts`; the first
/// segment (in traversal order) whose ends straddle the unit sphere wins.
pub fn unit_point_on_polyline(x: &Point, pts: &[Point], tol: &Tolerances) -> Result<Point> {
    unit_hit_on_polyline(x, pts, tol).map(|h| h.point)
}

pub fn unit_hit_on_polyline(x: &Point, pts: &[Point], tol: &Tolerances) -> Result<UnitHit> {
    if pts.is_empty() {
        return Err(Error::EmptyInput);
    }
    for p in pts {
        p.check_dim(x.dim())?;
    }
    if pts.len() == 1 {
        if (x.dist(&pts[0]) - 1.0).abs() <= tol.geom_eps {
            return Ok(UnitHit {
                point: pts[0].clone(),
                piece: 0,
                t: 0.0,
            });
        }
        return Err(Error::NoCrossing);
    }
    let segs: Vec<Segment> = pts
        .windows(2)
        .map(|w| Segment {
            a: w[0].clone(),
            b: w[1].clone(),
        })
        .collect();
    unit_hit_on_chain(x, &segs, tol)
}

/// Point at unit distance on the circular arc.
pub fn unit_point_on_arc(x: &Point, arc: &Arc, tol: &Tolerances) -> Result<Point> {
    x.check_dim(arc.center.dim())?;
    bisect_curve(x, arc, tol).map(|(p, _)| p)
}

/// IVT search along a chain of curve pieces joined end to end. Scans pieces
/// in order and bisects the first one whose endpoint values change sign (or
/// touch zero within `geom_eps`).
pub fn unit_hit_on_chain<C: Curve>(x: &Point, pieces: &[C], tol: &Tolerances) -> Result<UnitHit> {
    for (i, piece) in pieces.iter().enumerate() {
        let fa = x.dist(&piece.start()) - 1.0;
        let fb = x.dist(&piece.end()) - 1.0;
        let touches = fa.abs() <= tol.geom_eps || fb.abs() <= tol.geom_eps;
        if touches || fa.signum() != fb.signum() {
            let (point, t) = bisect_curve(x, piece, tol)?;
            return Ok(UnitHit { point, piece: i, t });
        }
    }
    Err(Error::NoCrossing)
}

/// Orthonormal 2D frame embedded in ℝᵈ: `(a, b) -> origin + a e1 + b e2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame2 {
    pub origin: Point,
    pub e1: Point,
    pub e2: Point,
}

impl Frame2 {
    /// Frame with `e1` along `toward - origin` and `e2` in the plane of
    /// `origin`, `toward`, `side`, pointing at `side`.
    pub fn from_points(origin: &Point, toward: &Point, side: &Point) -> Result<Self> {
        let e1 = (toward - origin)
            .normalized()
            .ok_or_else(|| Error::Numerical("frame axis has zero length".into()))?;
        let w = side - origin;
        let perp = &w - &(&e1 * w.dot(&e1));
        let e2 = perp
            .normalized()
            .ok_or_else(|| Error::Numerical("frame points are collinear".into()))?;
        Ok(Frame2 {
            origin: origin.clone(),
            e1,
            e2,
        })
    }

    pub fn to_world(&self, p: [f64; 2]) -> Point {
        let coords = self
            .origin
            .coords()
            .iter()
            .zip(self.e1.coords().iter().zip(self.e2.coords()))
            .map(|(o, (a, b))| o + p[0] * a + p[1] * b)
            .collect();
        Point::raw(coords)
    }

    pub fn to_local(&self, x: &Point) -> [f64; 2] {
        let w = x - &self.origin;
        [w.dot(&self.e1), w.dot(&self.e2)]
    }

    /// Distance from `x` to the plane of the frame.
    pub fn off_plane(&self, x: &Point) -> f64 {
        let l = self.to_local(x);
        self.to_world(l).dist(x)
    }
}
