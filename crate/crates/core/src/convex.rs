//! Convex bodies (hyperrectangles, simplices, finite vertex hulls and
//! vertex-plus-ray hulls), minimum enclosing balls and the queries built on
//! them: radius, Seidel's criterion, well-centredness, affine dimension and
//! scaling.
//!
//! A [`ConvexBody`] is a canonical [`Shape`] plus an optional rigid motion.
//! Every query is answered in the canonical frame; the placement only maps
//! points in and out.

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Ball, Point, Tolerances};
use crate::linalg;

/// Largest dimension for which hyperrectangle corners are enumerated.
const MAX_CORNER_DIM: usize = 20;

/// Seed of the fixed shuffle applied before the move-to-front miniball.
const MEB_SHUFFLE_SEED: u64 = 0x5eed_ba11;

/// Axis-aligned box `[0, l_1] × … × [0, l_d]` anchored at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperrectangle {
    l: Vec<f64>,
}

impl Hyperrectangle {
    pub fn new(l: Vec<f64>) -> Result<Self> {
        if l.is_empty() {
            return Err(Error::EmptyInput);
        }
        if l.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidParameter(
                "side lengths must be finite and nonnegative".into(),
            ));
        }
        Ok(Hyperrectangle { l })
    }

    /// The hypercube `C^d(side)`.
    pub fn cube(dim: usize, side: f64) -> Result<Self> {
        Hyperrectangle::new(vec![side; dim])
    }

    pub fn sides(&self) -> &[f64] {
        &self.l
    }

    pub fn dim(&self) -> usize {
        self.l.len()
    }

    /// `|l|`, the length of the main diagonal.
    pub fn diagonal(&self) -> f64 {
        self.l.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn center(&self) -> Point {
        Point::raw(self.l.iter().map(|v| v / 2.0).collect())
    }

    pub fn contains(&self, x: &Point, tol: f64) -> bool {
        x.dim() == self.dim()
            && x
                .coords()
                .iter()
                .zip(&self.l)
                .all(|(c, l)| *c >= -tol && *c <= l + tol)
    }

    pub fn corners(&self) -> Result<Vec<Point>> {
        let d = self.dim();
        if d > MAX_CORNER_DIM {
            return Err(Error::Unsupported(format!(
                "corner enumeration limited to d <= {MAX_CORNER_DIM}"
            )));
        }
        Ok((0..(1usize << d))
            .map(|mask| {
                Point::raw(
                    (0..d)
                        .map(|i| if mask >> i & 1 == 1 { self.l[i] } else { 0.0 })
                        .collect(),
                )
            })
            .collect())
    }

    /// Corner farthest from `x`.
    pub fn farthest_corner(&self, x: &Point) -> Point {
        Point::raw(
            x.coords()
                .iter()
                .zip(&self.l)
                .map(|(c, l)| if *c < l / 2.0 { *l } else { 0.0 })
                .collect(),
        )
    }
}

/// Convex hull of `n + 1` affinely independent points.
#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    vertices: Vec<Point>,
    /// Columns `v_i - v_0`, i >= 1.
    edges: DMatrix<f64>,
    /// Left pseudo-inverse of `edges`.
    pinv: DMatrix<f64>,
}

impl Simplex {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let first = vertices.first().ok_or(Error::EmptyInput)?;
        let d = first.dim();
        for v in &vertices {
            v.check_dim(d)?;
        }
        let n = vertices.len() - 1;
        if n > d || linalg::affine_rank(&vertices, 1e-10) != n {
            return Err(Error::DegenerateSimplex);
        }
        let mut edges = DMatrix::<f64>::zeros(d, n);
        for (j, v) in vertices[1..].iter().enumerate() {
            for i in 0..d {
                edges[(i, j)] = v.coords()[i] - first.coords()[i];
            }
        }
        let pinv = if n == 0 {
            DMatrix::zeros(0, d)
        } else {
            edges
                .clone()
                .pseudo_inverse(1e-14)
                .map_err(|e| Error::Numerical(e.to_string()))?
        };
        Ok(Simplex {
            vertices,
            edges,
            pinv,
        })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].dim()
    }

    /// Number of edges from the first vertex, i.e. the simplex dimension.
    pub fn order(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Barycentric coordinates of the projection of `x` onto the affine hull,
    /// and the distance from `x` to that hull.
    pub fn barycentric(&self, x: &Point) -> (Vec<f64>, f64) {
        let d = self.dim();
        let w = nalgebra::DVector::from_iterator(
            d,
            x.coords()
                .iter()
                .zip(self.vertices[0].coords())
                .map(|(a, b)| a - b),
        );
        if self.order() == 0 {
            return (vec![1.0], w.norm());
        }
        let mu = &self.pinv * &w;
        let off = (&self.edges * &mu - &w).norm();
        let mut bary = Vec::with_capacity(mu.len() + 1);
        bary.push(1.0 - mu.sum());
        bary.extend(mu.iter());
        (bary, off)
    }

    pub fn contains(&self, x: &Point, tol: f64) -> bool {
        if x.dim() != self.dim() {
            return false;
        }
        let (bary, off) = self.barycentric(x);
        off <= tol && bary.iter().all(|b| *b >= -tol)
    }

    pub fn centroid(&self) -> Point {
        let n = self.vertices.len() as f64;
        let mut c = vec![0.0; self.dim()];
        for v in &self.vertices {
            for (a, b) in c.iter_mut().zip(v.coords()) {
                *a += b / n;
            }
        }
        Point::raw(c)
    }
}

/// Convex hull of a finite point set.
#[derive(Debug, Clone, PartialEq)]
pub struct VPolytope {
    vertices: Vec<Point>,
}

impl VPolytope {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let first = vertices.first().ok_or(Error::EmptyInput)?;
        for v in &vertices {
            v.check_dim(first.dim())?;
        }
        Ok(VPolytope { vertices })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn contains(&self, x: &Point, tol: f64) -> bool {
        if x.dim() != self.vertices[0].dim() {
            return false;
        }
        linalg::convex_weights(&self.vertices, x).1 <= tol
    }
}

/// Unbounded hull `Conv(vertices) + Cone(rays)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RayHull {
    vertices: Vec<Point>,
    rays: Vec<Point>,
}

impl RayHull {
    pub fn new(vertices: Vec<Point>, rays: Vec<Point>) -> Result<Self> {
        let first = vertices.first().ok_or(Error::EmptyInput)?;
        for v in vertices.iter().chain(&rays) {
            v.check_dim(first.dim())?;
        }
        Ok(RayHull { vertices, rays })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn rays(&self) -> &[Point] {
        &self.rays
    }

    /// True when at least one ray is nonzero.
    pub fn is_unbounded(&self) -> bool {
        self.rays.iter().any(|r| r.norm() > 0.0)
    }

    pub fn contains(&self, x: &Point, tol: f64) -> bool {
        if x.dim() != self.vertices[0].dim() {
            return false;
        }
        linalg::conic_weights(&self.vertices, &self.rays, x).2 <= tol
    }

    /// Ray coefficients `μ` with `x = Σλv + Σμr`.
    pub fn ray_weights(&self, x: &Point) -> Vec<f64> {
        linalg::conic_weights(&self.vertices, &self.rays, x).1
    }
}

/// Canonical body shapes.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Hyperrectangle(Hyperrectangle),
    Simplex(Simplex),
    VPolytope(VPolytope),
    RayHull(RayHull),
}

/// Rotation followed by translation: `x -> R x + t`.
#[derive(Debug, Clone, PartialEq)]
pub struct RigidMotion {
    rotation: DMatrix<f64>,
    translation: Point,
}

impl RigidMotion {
    pub fn new(rotation: Vec<Vec<f64>>, translation: Point) -> Result<Self> {
        let d = translation.dim();
        if rotation.len() != d || rotation.iter().any(|r| r.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: rotation.len(),
            });
        }
        let m = DMatrix::from_fn(d, d, |i, j| rotation[i][j]);
        let err = (&m.transpose() * &m - DMatrix::<f64>::identity(d, d)).amax();
        if err > 1e-9 {
            return Err(Error::InvalidParameter("rotation must be orthogonal".into()));
        }
        Ok(RigidMotion {
            rotation: m,
            translation,
        })
    }

    pub fn translation_only(translation: Point) -> Self {
        let d = translation.dim();
        RigidMotion {
            rotation: DMatrix::identity(d, d),
            translation,
        }
    }

    pub fn dim(&self) -> usize {
        self.translation.dim()
    }

    pub fn apply(&self, x: &Point) -> Point {
        let v = nalgebra::DVector::from_column_slice(x.coords());
        let r = &self.rotation * v;
        Point::raw(
            r.iter()
                .zip(self.translation.coords())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn apply_inverse(&self, y: &Point) -> Point {
        let v = nalgebra::DVector::from_iterator(
            y.dim(),
            y.coords()
                .iter()
                .zip(self.translation.coords())
                .map(|(a, b)| a - b),
        );
        let r = self.rotation.transpose() * v;
        Point::raw(r.iter().copied().collect())
    }

    fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.rotation[(i, j)]).collect())
            .collect()
    }
}

/// A closed convex body: a canonical shape with an optional placement.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexBody {
    shape: Shape,
    placement: Option<RigidMotion>,
}

impl From<Hyperrectangle> for ConvexBody {
    fn from(s: Hyperrectangle) -> Self {
        ConvexBody::new(Shape::Hyperrectangle(s))
    }
}

impl From<Simplex> for ConvexBody {
    fn from(s: Simplex) -> Self {
        ConvexBody::new(Shape::Simplex(s))
    }
}

impl From<VPolytope> for ConvexBody {
    fn from(s: VPolytope) -> Self {
        ConvexBody::new(Shape::VPolytope(s))
    }
}

impl From<RayHull> for ConvexBody {
    fn from(s: RayHull) -> Self {
        ConvexBody::new(Shape::RayHull(s))
    }
}

impl ConvexBody {
    pub fn new(shape: Shape) -> Self {
        ConvexBody {
            shape,
            placement: None,
        }
    }

    pub fn with_placement(shape: Shape, placement: RigidMotion) -> Result<Self> {
        let body = ConvexBody::new(shape);
        placement.translation.check_dim(body.dim())?;
        Ok(ConvexBody {
            placement: Some(placement),
            ..body
        })
    }

    pub fn hyperrectangle(l: Vec<f64>) -> Result<Self> {
        Ok(Hyperrectangle::new(l)?.into())
    }

    pub fn cube(dim: usize, side: f64) -> Result<Self> {
        Ok(Hyperrectangle::cube(dim, side)?.into())
    }

    pub fn simplex(vertices: Vec<Point>) -> Result<Self> {
        Ok(Simplex::new(vertices)?.into())
    }

    pub fn vpolytope(vertices: Vec<Point>) -> Result<Self> {
        Ok(VPolytope::new(vertices)?.into())
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn placement(&self) -> Option<&RigidMotion> {
        self.placement.as_ref()
    }

    pub fn dim(&self) -> usize {
        match &self.shape {
            Shape::Hyperrectangle(h) => h.dim(),
            Shape::Simplex(s) => s.dim(),
            Shape::VPolytope(v) => v.vertices[0].dim(),
            Shape::RayHull(r) => r.vertices[0].dim(),
        }
    }

    pub fn is_bounded(&self) -> bool {
        !matches!(&self.shape, Shape::RayHull(r) if r.is_unbounded())
    }

    /// World point to canonical frame.
    pub fn to_local(&self, x: &Point) -> Point {
        match &self.placement {
            Some(m) => m.apply_inverse(x),
            None => x.clone(),
        }
    }

    /// Canonical frame point to world.
    pub fn to_world(&self, x: &Point) -> Point {
        match &self.placement {
            Some(m) => m.apply(x),
            None => x.clone(),
        }
    }

    /// Membership in the canonical frame.
    pub fn contains_local(&self, x: &Point, tol: f64) -> bool {
        match &self.shape {
            Shape::Hyperrectangle(h) => h.contains(x, tol),
            Shape::Simplex(s) => s.contains(x, tol),
            Shape::VPolytope(v) => v.contains(x, tol),
            Shape::RayHull(r) => r.contains(x, tol),
        }
    }

    /// Closed-set membership with `tol` slack.
    pub fn contains(&self, x: &Point, tol: f64) -> bool {
        x.dim() == self.dim() && self.contains_local(&self.to_local(x), tol)
    }

    /// Generating points in the canonical frame (corners for boxes).
    pub fn vertices_local(&self) -> Result<Vec<Point>> {
        match &self.shape {
            Shape::Hyperrectangle(h) => h.corners(),
            Shape::Simplex(s) => Ok(s.vertices.clone()),
            Shape::VPolytope(v) => Ok(v.vertices.clone()),
            Shape::RayHull(r) => Ok(r.vertices.clone()),
        }
    }

    pub fn vertices(&self) -> Result<Vec<Point>> {
        Ok(self
            .vertices_local()?
            .iter()
            .map(|v| self.to_world(v))
            .collect())
    }

    /// Rank of the difference set of the generators.
    pub fn affine_dimension(&self) -> usize {
        let tol = Tolerances::default().geom_eps;
        match &self.shape {
            Shape::Hyperrectangle(h) => h.l.iter().filter(|v| **v > tol).count(),
            Shape::Simplex(s) => s.order(),
            Shape::VPolytope(v) => linalg::affine_rank(&v.vertices, tol),
            Shape::RayHull(r) => {
                let mut pts = r.vertices.clone();
                for ray in &r.rays {
                    pts.push(&r.vertices[0] + ray);
                }
                linalg::affine_rank(&pts, tol)
            }
        }
    }

    /// Minimum enclosing ball in the canonical frame.
    pub fn meb_local(&self) -> Result<MebResult> {
        match &self.shape {
            Shape::Hyperrectangle(h) => Ok(hyperrectangle_meb(h)),
            Shape::RayHull(r) if r.is_unbounded() => Err(Error::Unsupported(
                "unbounded body has no enclosing ball".into(),
            )),
            _ => meb(&self.vertices_local()?),
        }
    }

    /// Minimum enclosing ball in world coordinates.
    pub fn meb(&self) -> Result<MebResult> {
        let m = self.meb_local()?;
        Ok(MebResult {
            center: self.to_world(&m.center),
            radius: m.radius,
            support: m.support.iter().map(|p| self.to_world(p)).collect(),
            basis: m.basis.iter().map(|p| self.to_world(p)).collect(),
        })
    }

    /// World-frame axis-aligned bounding box `(min, max)`.
    pub fn bounding_box(&self) -> Result<(Point, Point)> {
        if !self.is_bounded() {
            return Err(Error::Unsupported("unbounded body".into()));
        }
        let verts = self.vertices()?;
        let d = self.dim();
        let mut lo = vec![f64::INFINITY; d];
        let mut hi = vec![f64::NEG_INFINITY; d];
        for v in &verts {
            for i in 0..d {
                lo[i] = lo[i].min(v.coords()[i]);
                hi[i] = hi[i].max(v.coords()[i]);
            }
        }
        Ok((Point::raw(lo), Point::raw(hi)))
    }

    /// Canonical-frame generator farthest from `x` (also canonical).
    pub(crate) fn farthest_vertex_local(&self, x: &Point) -> Result<Point> {
        if let Shape::Hyperrectangle(h) = &self.shape {
            return Ok(h.farthest_corner(x));
        }
        let verts = self.vertices_local()?;
        verts
            .into_iter()
            .max_by(|a, b| x.dist(a).total_cmp(&x.dist(b)))
            .ok_or(Error::EmptyInput)
    }

    pub fn to_descriptor(&self) -> BodyDescriptor {
        let placement = self.placement.as_ref().map(|m| PlacementDescriptor {
            rotation: m.rows(),
            translation: m.translation.coords().to_vec(),
        });
        let pts = |v: &[Point]| v.iter().map(|p| p.coords().to_vec()).collect::<Vec<_>>();
        match &self.shape {
            Shape::Hyperrectangle(h) => BodyDescriptor::Hyperrectangle {
                l: h.l.clone(),
                placement,
            },
            Shape::Simplex(s) => BodyDescriptor::Simplex {
                vertices: pts(&s.vertices),
                placement,
            },
            Shape::VPolytope(v) => BodyDescriptor::Vpolytope {
                vertices: pts(&v.vertices),
                placement,
            },
            Shape::RayHull(r) => BodyDescriptor::Rayhull {
                vertices: pts(&r.vertices),
                rays: pts(&r.rays),
                placement,
            },
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let desc: BodyDescriptor = serde_json::from_str(s)
            .map_err(|e| Error::InvalidParameter(format!("body descriptor: {e}")))?;
        desc.try_into()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_descriptor()).expect("descriptor serializes")
    }
}

/// JSON body descriptor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum BodyDescriptor {
    Hyperrectangle {
        l: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        placement: Option<PlacementDescriptor>,
    },
    Simplex {
        vertices: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        placement: Option<PlacementDescriptor>,
    },
    Vpolytope {
        vertices: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        placement: Option<PlacementDescriptor>,
    },
    Rayhull {
        vertices: Vec<Vec<f64>>,
        rays: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        placement: Option<PlacementDescriptor>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlacementDescriptor {
    pub rotation: Vec<Vec<f64>>,
    pub translation: Vec<f64>,
}

fn to_points(v: Vec<Vec<f64>>) -> Result<Vec<Point>> {
    v.into_iter().map(Point::new).collect()
}

impl TryFrom<BodyDescriptor> for ConvexBody {
    type Error = Error;

    fn try_from(d: BodyDescriptor) -> Result<Self> {
        let (shape, placement) = match d {
            BodyDescriptor::Hyperrectangle { l, placement } => {
                (Shape::Hyperrectangle(Hyperrectangle::new(l)?), placement)
            }
            BodyDescriptor::Simplex {
                vertices,
                placement,
            } => (Shape::Simplex(Simplex::new(to_points(vertices)?)?), placement),
            BodyDescriptor::Vpolytope {
                vertices,
                placement,
            } => (
                Shape::VPolytope(VPolytope::new(to_points(vertices)?)?),
                placement,
            ),
            BodyDescriptor::Rayhull {
                vertices,
                rays,
                placement,
            } => (
                Shape::RayHull(RayHull::new(to_points(vertices)?, to_points(rays)?)?),
                placement,
            ),
        };
        match placement {
            None => Ok(ConvexBody::new(shape)),
            Some(p) => {
                let m = RigidMotion::new(p.rotation, Point::new(p.translation)?)?;
                ConvexBody::with_placement(shape, m)
            }
        }
    }
}

/// Minimum enclosing ball with its support.
#[derive(Debug, Clone, PartialEq)]
pub struct MebResult {
    pub center: Point,
    pub radius: f64,
    /// Input points within `support_eps` of the boundary sphere.
    pub support: Vec<Point>,
    /// Affinely independent boundary points that define the ball; the centre
    /// is their circumcentre and lies in their convex hull.
    pub basis: Vec<Point>,
}

impl MebResult {
    pub fn ball(&self) -> Ball {
        Ball {
            center: self.center.clone(),
            radius: self.radius,
        }
    }
}

fn hyperrectangle_meb(h: &Hyperrectangle) -> MebResult {
    let d = h.dim();
    let center = h.center();
    let radius = h.diagonal() / 2.0;
    let far = Point::raw(h.l.clone());
    let basis = if radius == 0.0 {
        vec![Point::origin(d)]
    } else {
        vec![Point::origin(d), far]
    };
    let support = h.corners().unwrap_or_else(|_| basis.clone());
    MebResult {
        center,
        radius,
        support,
        basis,
    }
}

#[derive(Debug, Clone)]
struct MiniBall {
    center: Vec<f64>,
    radius: f64,
    basis: Vec<usize>,
}

impl MiniBall {
    fn empty() -> Self {
        MiniBall {
            center: vec![],
            radius: -1.0,
            basis: vec![],
        }
    }

    fn covers(&self, p: &Point) -> bool {
        if self.radius < 0.0 {
            return false;
        }
        let d2: f64 = p
            .coords()
            .iter()
            .zip(&self.center)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        d2.sqrt() <= self.radius + 1e-12 * self.radius.max(1.0)
    }
}

/// Circumscribed ball of the boundary points, centre in their affine hull.
fn circumball(points: &[Point], idx: &[usize]) -> Option<MiniBall> {
    let q0 = &points[*idx.first()?];
    let k = idx.len() - 1;
    if k == 0 {
        return Some(MiniBall {
            center: q0.coords().to_vec(),
            radius: 0.0,
            basis: idx.to_vec(),
        });
    }
    let vs: Vec<Point> = idx[1..].iter().map(|&i| &points[i] - q0).collect();
    let a = DMatrix::from_fn(k, k, |i, j| 2.0 * vs[i].dot(&vs[j]));
    let b = nalgebra::DVector::from_iterator(k, vs.iter().map(|v| v.norm_sq()));
    let scale = vs.iter().map(|v| v.norm_sq()).fold(0.0_f64, f64::max);
    let lu = a.clone().lu();
    // reject near-singular systems: the boundary set is affinely dependent
    let det = lu.determinant().abs();
    if !(det > 1e-18 * (2.0 * scale).powi(k as i32)) {
        return None;
    }
    let alpha = lu.solve(&b)?;
    let mut c = q0.coords().to_vec();
    for (ai, v) in alpha.iter().zip(&vs) {
        for (cc, vv) in c.iter_mut().zip(v.coords()) {
            *cc += ai * vv;
        }
    }
    let r = c
        .iter()
        .zip(q0.coords())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    Some(MiniBall {
        center: c,
        radius: r,
        basis: idx.to_vec(),
    })
}

/// Move-to-front miniball recursion over `order[..end]` with the boundary
/// set `boundary`.
fn mtf(points: &[Point], order: &mut [usize], end: usize, boundary: &mut Vec<usize>, dim: usize) -> MiniBall {
    let mut ball = if boundary.is_empty() {
        MiniBall::empty()
    } else {
        circumball(points, boundary).unwrap_or_else(MiniBall::empty)
    };
    if boundary.len() == dim + 1 {
        return ball;
    }
    for i in 0..end {
        let p = order[i];
        if ball.covers(&points[p]) {
            continue;
        }
        boundary.push(p);
        if circumball(points, boundary).is_none() {
            // affinely dependent with the current boundary; already on it
            boundary.pop();
            continue;
        }
        ball = mtf(points, order, i, boundary, dim);
        boundary.pop();
        order[..=i].rotate_right(1);
    }
    ball
}

/// Minimum enclosing ball of a finite point set.
pub fn meb(points: &[Point]) -> Result<MebResult> {
    meb_with(points, &Tolerances::default())
}

pub fn meb_with(points: &[Point], tol: &Tolerances) -> Result<MebResult> {
    let first = points.first().ok_or(Error::EmptyInput)?;
    let dim = first.dim();
    for p in points {
        p.check_dim(dim)?;
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(MEB_SHUFFLE_SEED));
    let mut boundary = Vec::with_capacity(dim + 1);
    let ball = mtf(points, &mut order, points.len(), &mut boundary, dim);
    if ball.radius < 0.0 {
        return Err(Error::Numerical("miniball recursion produced no ball".into()));
    }
    let center = Point::raw(ball.center);
    let radius = ball.radius;
    // basis points strictly inside the hull of the others are dropped
    let mut basis: Vec<Point> = ball.basis.iter().map(|&i| points[i].clone()).collect();
    if basis.len() > 1 {
        let (w, _) = linalg::convex_weights(&basis, &center);
        let keep: Vec<Point> = basis
            .iter()
            .zip(&w)
            .filter(|(_, wi)| **wi > 1e-10)
            .map(|(p, _)| p.clone())
            .collect();
        if !keep.is_empty() {
            basis = keep;
        }
    }
    let support = points
        .iter()
        .filter(|p| (p.dist(&center) - radius).abs() <= tol.support_eps)
        .cloned()
        .collect();
    Ok(MebResult {
        center,
        radius,
        support,
        basis,
    })
}

/// Radius of the minimum enclosing ball; infinite for unbounded bodies.
pub fn radius(body: &ConvexBody) -> Result<f64> {
    if !body.is_bounded() {
        return Ok(f64::INFINITY);
    }
    Ok(body.meb_local()?.radius)
}

/// Seidel's criterion: a ball through `points` is their minimum enclosing
/// ball iff its centre lies in their convex hull.
pub fn is_meb_by_seidel(points: &[Point], candidate: &Ball, tol: &Tolerances) -> Result<bool> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    for p in points {
        p.check_dim(candidate.center.dim())?;
        if (p.dist(&candidate.center) - candidate.radius).abs() > tol.support_eps {
            return Err(Error::Precondition(format!(
                "point {p} is not on the candidate sphere"
            )));
        }
    }
    let (_, residual) = linalg::convex_weights(points, &candidate.center);
    Ok(residual <= tol.geom_eps * candidate.radius.max(1.0))
}

/// True iff the centre of the simplex's minimum enclosing ball lies in its
/// relative interior.
pub fn is_well_centered(s: &Simplex) -> Result<bool> {
    let tol = Tolerances::default();
    let m = meb(s.vertices())?;
    let (bary, _) = s.barycentric(&m.center);
    Ok(bary.iter().all(|b| *b > tol.geom_eps))
}

pub fn affine_dimension(body: &ConvexBody) -> usize {
    body.affine_dimension()
}

/// `λX`, scaling about the origin of the body frame.
pub fn scale_body(body: &ConvexBody, lambda: f64) -> Result<ConvexBody> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidParameter("scale factor must be finite and >= 0".into()));
    }
    let sc = |v: &[Point]| v.iter().map(|p| p * lambda).collect::<Vec<_>>();
    let shape = match &body.shape {
        Shape::Hyperrectangle(h) => {
            Shape::Hyperrectangle(Hyperrectangle::new(h.l.iter().map(|v| v * lambda).collect())?)
        }
        Shape::Simplex(s) => {
            if lambda == 0.0 {
                Shape::Simplex(Simplex::new(vec![Point::origin(s.dim())])?)
            } else {
                Shape::Simplex(Simplex::new(sc(&s.vertices))?)
            }
        }
        Shape::VPolytope(v) => Shape::VPolytope(VPolytope::new(sc(&v.vertices))?),
        Shape::RayHull(r) => Shape::RayHull(RayHull::new(sc(&r.vertices), r.rays.clone())?),
    };
    Ok(ConvexBody {
        shape,
        placement: body.placement.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn p(c: &[f64]) -> Point {
        Point::new(c.to_vec()).unwrap()
    }

    fn regular_tetrahedron() -> Vec<Point> {
        let s = 1.0 / 3f64.sqrt();
        vec![
            p(&[s, s, s]),
            p(&[s, -s, -s]),
            p(&[-s, s, -s]),
            p(&[-s, -s, s]),
        ]
    }

    #[test]
    fn meb_examples() {
        let m = meb(&[p(&[0.0, 0.0]), p(&[2.0, 0.0]), p(&[1.0, 1.0])]).unwrap();
        assert!(m.center.approx_eq(&p(&[1.0, 0.0]), 1e-12));
        assert_abs_diff_eq!(m.radius, 1.0, epsilon = 1e-12);

        let h = 3f64.sqrt() / 2.0;
        let m = meb(&[p(&[1.0, 0.0]), p(&[-0.5, h]), p(&[-0.5, -h])]).unwrap();
        assert!(m.center.approx_eq(&p(&[0.0, 0.0]), 1e-12));
        assert_abs_diff_eq!(m.radius, 1.0, epsilon = 1e-12);
        assert_eq!(m.support.len(), 3);

        let rect = ConvexBody::hyperrectangle(vec![1.6, 1.2]).unwrap();
        let m = meb(&rect.vertices().unwrap()).unwrap();
        assert!(m.center.approx_eq(&p(&[0.8, 0.6]), 1e-12));
        assert_abs_diff_eq!(m.radius, 1.0, epsilon = 1e-12);
        assert_eq!(m.support.len(), 4);
    }

    #[test]
    fn meb_rejects_empty() {
        assert_eq!(meb(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn radius_examples() {
        let sq = ConvexBody::cube(2, 1.0).unwrap();
        assert_abs_diff_eq!(radius(&sq).unwrap(), std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
        for d in 2..=8 {
            let c = ConvexBody::cube(d, 2.0 / (d as f64).sqrt()).unwrap();
            assert_abs_diff_eq!(radius(&c).unwrap(), 1.0, epsilon = 1e-14);
            // the same through the miniball on the corners
            let m = meb(&c.vertices().unwrap()).unwrap();
            assert_abs_diff_eq!(m.radius, 1.0, epsilon = 1e-9);
        }
        let r = ConvexBody::hyperrectangle(vec![1.6, 1.2]).unwrap();
        assert_abs_diff_eq!(radius(&r).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn seidel_examples() {
        let t = Tolerances::default();
        let unit = Ball::new(p(&[0.0, 0.0]), 1.0).unwrap();
        assert!(is_meb_by_seidel(&[p(&[1.0, 0.0]), p(&[-1.0, 0.0])], &unit, &t).unwrap());
        assert!(!is_meb_by_seidel(&[p(&[1.0, 0.0]), p(&[0.0, 1.0])], &unit, &t).unwrap());
        let m = meb(&[p(&[1.0, 0.0]), p(&[0.0, 1.0])]).unwrap();
        assert!(m.center.approx_eq(&p(&[0.5, 0.5]), 1e-12));
        let unit3 = Ball::new(Point::origin(3), 1.0).unwrap();
        assert!(is_meb_by_seidel(&regular_tetrahedron(), &unit3, &t).unwrap());
        assert!(matches!(
            is_meb_by_seidel(&[p(&[0.5, 0.0])], &unit, &t),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn well_centered_examples() {
        let h = 3f64.sqrt() / 2.0;
        let eq = Simplex::new(vec![p(&[1.0, 0.0]), p(&[-0.5, h]), p(&[-0.5, -h])]).unwrap();
        assert!(is_well_centered(&eq).unwrap());
        let right = Simplex::new(vec![p(&[0.0, 0.0]), p(&[2.0, 0.0]), p(&[1.0, 1.0])]).unwrap();
        assert!(!is_well_centered(&right).unwrap());
        let obtuse = Simplex::new(vec![p(&[0.0, 0.0]), p(&[2.0, 0.0]), p(&[0.5, 0.3])]).unwrap();
        assert!(!is_well_centered(&obtuse).unwrap());
        assert_eq!(
            Simplex::new(vec![p(&[0.0, 0.0]), p(&[1.0, 0.0]), p(&[2.0, 0.0])]),
            Err(Error::DegenerateSimplex)
        );
    }

    #[test]
    fn affine_dimension_examples() {
        assert_eq!(ConvexBody::vpolytope(vec![p(&[1.0, 2.0])]).unwrap().affine_dimension(), 0);
        assert_eq!(
            ConvexBody::vpolytope(vec![p(&[0.0, 0.0]), p(&[3.0, 0.0])])
                .unwrap()
                .affine_dimension(),
            1
        );
        assert_eq!(ConvexBody::cube(3, 1.0).unwrap().affine_dimension(), 3);
        assert_eq!(
            ConvexBody::hyperrectangle(vec![1.0, 0.0, 2.0]).unwrap().affine_dimension(),
            2
        );
    }

    #[test]
    fn scale_examples() {
        let sq = ConvexBody::cube(2, 1.0).unwrap();
        let s2 = scale_body(&sq, 2f64.sqrt()).unwrap();
        assert_eq!(s2, ConvexBody::cube(2, 2f64.sqrt()).unwrap());
        let tri = ConvexBody::simplex(vec![p(&[0.0, 0.0]), p(&[1.0, 0.3]), p(&[0.2, 0.9])]).unwrap();
        assert_eq!(scale_body(&tri, 1.0).unwrap(), tri);
        let r = ConvexBody::hyperrectangle(vec![1.6, 1.2]).unwrap();
        let r2 = scale_body(&r, 2.0).unwrap();
        assert_eq!(r2, ConvexBody::hyperrectangle(vec![3.2, 2.4]).unwrap());
        assert_abs_diff_eq!(radius(&r2).unwrap(), 2.0, epsilon = 1e-14);
        assert!(scale_body(&r, -1.0).is_err());
    }

    #[test]
    fn membership_and_placement() {
        let tri = Simplex::new(vec![p(&[0.0, 0.0]), p(&[1.0, 0.0]), p(&[0.0, 1.0])]).unwrap();
        let rot = vec![vec![0.0, -1.0], vec![1.0, 0.0]];
        let body = ConvexBody::with_placement(
            Shape::Simplex(tri),
            RigidMotion::new(rot, p(&[5.0, 5.0])).unwrap(),
        )
        .unwrap();
        // (0.5, 0.2) local -> rotate 90° -> (-0.2, 0.5) -> +(5,5)
        assert!(body.contains(&p(&[4.8, 5.5]), 1e-12));
        assert!(!body.contains(&p(&[5.2, 5.5]), 1e-12));
        let m = body.meb().unwrap();
        assert!(m.center.approx_eq(&p(&[4.5, 5.5]), 1e-12));
    }

    #[test]
    fn vpolytope_and_rayhull_membership() {
        let poly = VPolytope::new(vec![
            p(&[0.0, 0.0]),
            p(&[2.0, 0.0]),
            p(&[2.0, 1.0]),
            p(&[0.0, 1.0]),
            p(&[1.0, 0.5]),
        ])
        .unwrap();
        assert!(poly.contains(&p(&[1.9, 0.9]), 1e-9));
        assert!(poly.contains(&p(&[2.0, 1.0]), 1e-9));
        assert!(!poly.contains(&p(&[2.0 + 1e-6, 1.0]), 1e-9));
        let ray = RayHull::new(vec![p(&[0.0, 0.0]), p(&[0.0, 1.0])], vec![p(&[1.0, 0.0])]).unwrap();
        assert!(ray.contains(&p(&[100.0, 0.5]), 1e-9));
        assert!(!ray.contains(&p(&[-0.5, 0.5]), 1e-9));
        let body: ConvexBody = ray.into();
        assert!(!body.is_bounded());
        assert_eq!(radius(&body).unwrap(), f64::INFINITY);
        assert_eq!(body.affine_dimension(), 2);
    }

    #[test]
    fn json_descriptor_round_trip() {
        let b = ConvexBody::from_json(r#"{"type":"hyperrectangle","l":[1.6,1.2]}"#).unwrap();
        assert_eq!(b, ConvexBody::hyperrectangle(vec![1.6, 1.2]).unwrap());
        let s = ConvexBody::from_json(r#"{"type":"simplex","vertices":[[0,0],[2,0],[0.5,0.3]]}"#).unwrap();
        assert_eq!(ConvexBody::from_json(&s.to_json()).unwrap(), s);
        assert!(ConvexBody::from_json(r#"{"type":"vpolytope","vertices":[]}"#).is_err());
        assert!(ConvexBody::from_json(r#"{"type":"sphere"}"#).is_err());
        let placed = r#"{"type":"vpolytope","vertices":[[0,0],[1,0],[0,1]],
            "placement":{"rotation":[[1,0],[0,1]],"translation":[2,3]}}"#;
        let b = ConvexBody::from_json(placed).unwrap();
        assert!(b.contains(&p(&[2.2, 3.2]), 1e-12));
    }

    fn cloud() -> impl Strategy<Value = Vec<Point>> {
        (1usize..=5).prop_flat_map(|d| {
            prop::collection::vec(prop::collection::vec(-2.0..2.0f64, d), 1..14)
                .prop_map(|v| v.into_iter().map(Point::raw).collect())
        })
    }

    proptest! {
        #[test]
        fn meb_encloses_and_satisfies_seidel(pts in cloud()) {
            let t = Tolerances::default();
            let m = meb(&pts).unwrap();
            for q in &pts {
                prop_assert!(q.dist(&m.center) <= m.radius + t.geom_eps);
            }
            if m.radius > 1e-9 {
                prop_assert!(is_meb_by_seidel(&m.support, &m.ball(), &t).unwrap());
                prop_assert!(is_meb_by_seidel(&m.basis, &m.ball(), &t).unwrap());
            }
        }

        #[test]
        fn meb_center_is_locally_minimal(pts in cloud(), seed in any::<u64>()) {
            use rand::Rng;
            let m = meb(&pts).unwrap();
            let cover = |c: &Point| pts.iter().map(|q| q.dist(c)).fold(0.0, f64::max);
            let base = cover(&m.center);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let d = m.center.dim();
            for _ in 0..32 {
                let dir = Point::raw((0..d).map(|_| rng.random_range(-1.0..1.0)).collect());
                let Some(dir) = dir.normalized() else { continue };
                let moved = &m.center + &(&dir * 1e-4);
                prop_assert!(cover(&moved) >= base - 1e-9);
            }
        }

        #[test]
        fn radius_scales_linearly(pts in cloud(), lambda in 0.0..10.0f64) {
            let body = ConvexBody::vpolytope(pts).unwrap();
            let r = radius(&body).unwrap();
            let rs = radius(&scale_body(&body, lambda).unwrap()).unwrap();
            prop_assert!((rs - lambda * r).abs() <= 1e-9 * (1.0 + lambda * r));
        }

        #[test]
        fn simplex_meb_center_is_inside(
            d in 2usize..=4, seed in any::<u64>()
        ) {
            use rand::Rng;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let verts: Vec<Point> = (0..=d)
                .map(|_| Point::raw((0..d).map(|_| rng.random_range(-1.0..1.0)).collect()))
                .collect();
            if let Ok(s) = Simplex::new(verts) {
                let m = meb(s.vertices()).unwrap();
                let (bary, off) = s.barycentric(&m.center);
                prop_assert!(off <= 1e-9);
                prop_assert!(bary.iter().all(|b| *b >= -1e-9));
            }
        }
    }
}
