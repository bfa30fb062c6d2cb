//! Paths in a general convex body of radius at least one.
//!
//! The body is shrunk about the centre `C` of its enclosing ball to radius
//! one. In that core every point `z` lies within unit distance of `C`, and
//! the radius segment `[C, s]` toward a support point `s` with
//! `(s - C)·(z - C) <= 0` meets the unit sphere about `z`; the hit point is
//! reached from `C` inside one of the fan triangles spanned by the
//! supports. Points outside the core are lifted back in unit-radius stages:
//! from stage `k - 1` a point of stage `k` is one step away along the
//! segment from its shrunk image to the farthest vertex.

use super::triangle::BaseTriangle;
use super::{checked, join_at_hub, require_inside, LocalPath, StepLabel, StepPath};
use crate::convex::{ConvexBody, Shape, Simplex, VPolytope};
use crate::error::{Error, Result};
use crate::geom::{unit_hit_on_segment, unit_point_on_arc, unit_point_on_segment, Arc, Frame2, Point, Segment, Tolerances};

/// Enclosing radii this close to one skip the rescaling.
const UNIT_RADIUS_TOL: f64 = 1e-10;

/// How far toward the boundary the fan apex is pushed.
const APEX_SHRINK: f64 = 0.999_999;

#[derive(Debug, Clone)]
struct Fan {
    frame: Frame2,
    tri: BaseTriangle,
    support: Point,
}

impl Fan {
    fn new(q: &Point, p: &Point, r: &Point, center: &Point) -> Result<Self> {
        let frame = Frame2::from_points(q, p, r)?;
        let l = q.dist(p);
        let tri = BaseTriangle::new(l, frame.to_local(r), frame.to_local(center))?;
        Ok(Fan {
            frame,
            tri,
            support: p.clone(),
        })
    }

    /// Path from the hub to `x` on the radius segment toward the fan's
    /// support point. The hub is at unit distance from both base corners,
    /// so the radius segment is the tail of the chain `(0,0) → (L-1,0)`
    /// followed by the unit arc about `(L,0)` back up to the hub.
    fn reach_radius(&self, x: &Point) -> Result<StepPath> {
        let tol = Tolerances::default();
        let hub = self.tri.hub();
        let l = self.tri.base_length();
        let xl = self.frame.to_local(x);
        let xp = Point::xy(xl[0], xl[1]);
        if super::dist2(xl, hub) <= 1e-15 {
            return Ok(StepPath::single(x.clone()));
        }
        let base = Segment::new(Point::xy(0.0, 0.0), Point::xy(l - 1.0, 0.0))?;
        let mut path = match unit_hit_on_segment(&xp, &base, &tol) {
            Ok(hit) => self.tri.reach(hit.point.coords()[0])?,
            Err(Error::NoCrossing) => {
                let mut phi = hub[1].atan2(hub[0] - l);
                if phi < 0.0 {
                    phi += 2.0 * std::f64::consts::PI;
                }
                let arc = Arc::planar(Point::xy(l, 0.0), 1.0, std::f64::consts::PI, phi)?;
                let y = unit_point_on_arc(&xp, &arc, &tol)?;
                let mut p = LocalPath::single(hub);
                p.push([l, 0.0], StepLabel::CornerHop);
                p.push([y.coords()[0], y.coords()[1]], StepLabel::ArcHop);
                p
            }
            Err(e) => return Err(e),
        };
        path.push(xl, StepLabel::RadiusSegment);
        let mut world = path.map(|p| self.frame.to_world(p));
        let n = world.points().len();
        world.points[n - 1] = x.clone();
        Ok(world)
    }
}

/// The unit-radius core: hub at the centre, one fan per support point.
#[derive(Debug, Clone)]
struct HubCore {
    center: Point,
    fans: Vec<Fan>,
}

impl HubCore {
    /// `supports` are affinely independent points on the unit sphere about
    /// `center` whose hull holds it; `far_from_line` returns a core point
    /// far from the line through two supports.
    fn new(
        center: Point,
        supports: &[Point],
        far_from_line: impl Fn(&Point, &Point) -> Result<Point>,
    ) -> Result<Self> {
        let fans = if supports.len() == 2 {
            let (a, b) = (&supports[0], &supports[1]);
            let r = far_from_line(a, b)?;
            vec![Fan::new(a, b, &r, &center)?, Fan::new(b, a, &r, &center)?]
        } else {
            let simplex = Simplex::new(supports.to_vec())?;
            let (w, _) = simplex.barycentric(&center);
            (0..supports.len())
                .map(|i| {
                    let p = &supports[i];
                    let pc = p - &center;
                    let j = (0..supports.len())
                        .filter(|&j| j != i)
                        .min_by(|&a, &b| {
                            (&supports[a] - &center)
                                .dot(&pc)
                                .total_cmp(&(&supports[b] - &center).dot(&pc))
                        })
                        .expect("at least three supports");
                    let q = &supports[j];
                    let mid = Point::lerp(p, q, 0.5);
                    let r = if mid.dist(&center) <= 1e-9 {
                        far_from_line(q, p)?
                    } else {
                        // push from the midpoint through the centre to the hull boundary
                        let mut t_max = f64::INFINITY;
                        for (k, wk) in w.iter().enumerate() {
                            let mk = if k == i || k == j { 0.5 } else { 0.0 };
                            if mk > *wk {
                                t_max = t_max.min(wk / (mk - wk));
                            }
                        }
                        &center + &(&(&center - &mid) * (APEX_SHRINK * t_max))
                    };
                    Fan::new(q, p, &r, &center)
                })
                .collect::<Result<Vec<_>>>()?
        };
        Ok(HubCore { center, fans })
    }

    /// Path from the centre to `z`, which must lie within unit distance of it.
    fn reach(&self, z: &Point) -> Result<StepPath> {
        let c = &self.center;
        if z.dist(c) <= 1e-15 {
            return Ok(StepPath::single(c.clone()));
        }
        let zc = z - c;
        let fan = self
            .fans
            .iter()
            .min_by(|a, b| {
                (&a.support - c)
                    .dot(&zc)
                    .total_cmp(&(&b.support - c).dot(&zc))
            })
            .expect("core has fans");
        let seg = Segment::new(c.clone(), fan.support.clone())?;
        let hit = unit_hit_on_segment(z, &seg, &Tolerances::default())?;
        let mut path = fan.reach_radius(&hit.point)?;
        path.push(z.clone(), StepLabel::RadiusSegment);
        Ok(path)
    }
}

/// Hub paths for a bounded body, all in its canonical frame.
pub(crate) struct Connector<'a> {
    body: &'a ConvexBody,
    center: Point,
    rho: f64,
    /// Stage radii `1, 2, ..., ρ`; a single entry when no rescaling is needed.
    radii: Vec<f64>,
    core: HubCore,
}

impl<'a> Connector<'a> {
    pub(crate) fn new(body: &'a ConvexBody) -> Result<Self> {
        let meb = body.meb_local()?;
        let rho = meb.radius;
        if rho < 1.0 - Tolerances::default().support_eps {
            return Err(Error::Precondition(format!("radius {rho} is below one")));
        }
        if body.affine_dimension() < 2 {
            return Err(Error::Precondition("affine dimension must be at least 2".into()));
        }
        if meb.basis.len() < 2 {
            return Err(Error::Numerical("enclosing ball has fewer than two supports".into()));
        }
        let center = meb.center.clone();
        let scaled = rho > 1.0 + UNIT_RADIUS_TOL;
        let s = if scaled { 1.0 / rho } else { 1.0 };
        let shrink = |p: &Point| &center + &(&(p - &center) * s);
        let grow = |p: &Point| &center + &(&(p - &center) * (1.0 / s));
        let supports: Vec<Point> = meb.basis.iter().map(shrink).collect();
        let core = HubCore::new(center.clone(), &supports, |a, b| {
            Ok(shrink(&far_from_line(body, &grow(a), &grow(b))?))
        })?;
        let mut radii = vec![1.0];
        if scaled {
            while *radii.last().expect("nonempty") < rho {
                let next = (radii.last().expect("nonempty") + 1.0).min(rho);
                radii.push(next);
            }
        } else {
            radii[0] = rho;
        }
        Ok(Connector {
            body,
            center,
            rho,
            radii,
            core,
        })
    }

    /// Maps a point of stage `k` back to the body.
    fn preimage(&self, x: &Point, k: usize) -> Point {
        &self.center + &(&(x - &self.center) * (self.rho / self.radii[k]))
    }

    fn stage_point(&self, y: &Point, k: usize) -> Point {
        &self.center + &(&(y - &self.center) * (self.radii[k] / self.rho))
    }

    /// Path from the centre to the canonical-frame point `x`.
    pub(crate) fn reach(&self, x: &Point) -> Result<StepPath> {
        let tol = Tolerances::default();
        let top = self.radii.len() - 1;
        let mut chain = vec![x.clone()];
        let mut cur = x.clone();
        for k in (1..=top).rev() {
            let pre = self.preimage(&cur, k - 1);
            if self.body.contains_local(&pre, 1e-12) {
                continue;
            }
            let p = &self.center + &(&(&cur - &self.center) * (self.radii[k - 1] / self.radii[k]));
            let far_vertex = self.body.farthest_vertex_local(&pre)?;
            let far = self.stage_point(&far_vertex, k - 1);
            let r = unit_point_on_segment(&cur, &Segment::new(p, far)?, &tol)?;
            chain.push(r.clone());
            cur = r;
        }
        let mut path = self.core.reach(&cur)?;
        for p in chain.iter().rev().skip(1) {
            path.push(p.clone(), StepLabel::Lift);
        }
        Ok(path)
    }
}

/// Vertex of `body` farthest from the line through `a` and `b`.
fn far_from_line(body: &ConvexBody, a: &Point, b: &Point) -> Result<Point> {
    let dir = (b - a)
        .normalized()
        .ok_or_else(|| Error::Numerical("coincident supports".into()))?;
    let off = |p: &Point| {
        let w = p - a;
        (&w - &(&dir * w.dot(&dir))).norm()
    };
    if let Shape::Hyperrectangle(h) = body.shape() {
        if h.dim() > 12 {
            // a single long edge is far enough from the diagonal
            let (i, li) = h
                .sides()
                .iter()
                .enumerate()
                .max_by(|x, y| x.1.total_cmp(y.1))
                .expect("nonempty");
            return Ok(Point::axis(h.dim(), i, *li));
        }
    }
    body.vertices_local()?
        .into_iter()
        .max_by(|p, q| off(p).total_cmp(&off(q)))
        .ok_or(Error::EmptyInput)
}

/// Unit-step path between `u` and `v` in a body of radius at least one and
/// affine dimension at least two.
pub fn convex_path(body: &ConvexBody, u: &Point, v: &Point) -> Result<StepPath> {
    let tol = Tolerances::default();
    require_inside(body, u, &tol)?;
    require_inside(body, v, &tol)?;
    if !body.is_bounded() {
        return unbounded_path(body, u, v);
    }
    if u.dist(v) == 0.0 {
        return Ok(StepPath::single(u.clone()));
    }
    let conn = Connector::new(body)?;
    let to_u = conn.reach(&body.to_local(u))?;
    let to_v = conn.reach(&body.to_local(v))?;
    let path = join_at_hub(to_u, to_v)
        .map_points(|p| body.to_world(p))
        .snap_ends(u, v);
    checked(body, path, &tol)
}

/// Routes through the bounded truncation `conv(V ∪ {v + T r})`, doubling
/// `T` until it holds both points and has radius at least one.
fn unbounded_path(body: &ConvexBody, u: &Point, v: &Point) -> Result<StepPath> {
    let Shape::RayHull(h) = body.shape() else {
        return Err(Error::Unsupported("unbounded body without rays".into()));
    };
    if body.affine_dimension() < 2 {
        return Err(Error::Precondition("affine dimension must be at least 2".into()));
    }
    let tol = Tolerances::default();
    let (ul, vl) = (body.to_local(u), body.to_local(v));
    let mut t = 1.0;
    for _ in 0..64 {
        let mut pts = h.vertices().to_vec();
        for vert in h.vertices() {
            for r in h.rays() {
                pts.push(vert + &(r * t));
            }
        }
        let trunc = VPolytope::new(pts)?;
        let big_enough = crate::convex::meb(trunc.vertices())?.radius >= 1.0;
        if big_enough && trunc.contains(&ul, tol.geom_eps) && trunc.contains(&vl, tol.geom_eps) {
            let k = match body.placement() {
                Some(m) => ConvexBody::with_placement(Shape::VPolytope(trunc), m.clone())?,
                None => ConvexBody::from(trunc),
            };
            let path = convex_path(&k, u, v)?;
            return checked(body, path, &tol);
        }
        t *= 2.0;
    }
    Err(Error::Numerical("no truncation of the unbounded body holds both points".into()))
}

/// Dispatches to the box constructions where they apply and to
/// [`convex_path`] otherwise.
pub fn find_path(body: &ConvexBody, u: &Point, v: &Point) -> Result<StepPath> {
    if let Shape::Hyperrectangle(h) = body.shape() {
        let l = h.sides();
        let critical = (h.diagonal() - 2.0).abs() <= 1e-10;
        if critical && body.affine_dimension() >= 2 && body.placement().is_none() {
            if l.iter().all(|s| (s - l[0]).abs() <= 1e-12) {
                return super::hypercube_path(l.len(), u, v);
            }
            return super::hyperrectangle_path(l, u, v);
        }
    }
    convex_path(body, u, v)
}

/// One-step bridge from the body `core` to a point `x` of `λ·core`: the
/// point at unit distance from `x` on the segment from `x/λ` to the vertex
/// of `core` farthest from `x`. Returns the single point when `x` is
/// already in `core`.
pub fn scale_lift(core: &ConvexBody, lambda: f64, x: &Point) -> Result<StepPath> {
    let tol = Tolerances::default();
    if !(lambda >= 1.0) || !lambda.is_finite() {
        return Err(Error::InvalidParameter("scale factor must be finite and >= 1".into()));
    }
    x.check_dim(core.dim())?;
    if core.contains(x, tol.geom_eps) {
        return Ok(StepPath::single(x.clone()));
    }
    let xl = core.to_local(x);
    let pl = &xl * (1.0 / lambda);
    if !core.contains_local(&pl, tol.geom_eps) {
        return Err(Error::OutsideBody);
    }
    if xl.dist(&pl) > 1.0 + tol.geom_eps {
        return Err(Error::Precondition(format!(
            "{x} is farther than one from its shrunk image"
        )));
    }
    let far = core.farthest_vertex_local(&xl)?;
    if xl.dist(&far) < 1.0 {
        return Err(Error::Numerical("every vertex is within unit distance".into()));
    }
    let r = unit_point_on_segment(&xl, &Segment::new(pl, far)?, &tol)?;
    let path = StepPath::from_parts(vec![core.to_world(&r), x.clone()], vec![StepLabel::Lift])?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::{scale_body, RayHull};
    use proptest::prelude::*;

    fn p(x: f64, y: f64) -> Point {
        Point::xy(x, y)
    }

    fn assert_valid(body: &ConvexBody, path: &StepPath, u: &Point, v: &Point) {
        assert!(path.max_step_error() <= 1e-9, "step error {}", path.max_step_error());
        for q in path.points() {
            assert!(body.contains(q, 1e-9), "{q} outside");
        }
        assert_eq!(path.start(), u);
        assert_eq!(path.end(), v);
    }

    #[test]
    fn unit_disk_like_polygon() {
        let n = 7;
        let verts: Vec<Point> = (0..n)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                p(t.cos(), t.sin())
            })
            .collect();
        let body = ConvexBody::vpolytope(verts.clone()).unwrap();
        for (u, v) in [(&verts[0], &verts[3]), (&verts[1], &p(0.1, 0.2))] {
            let path = convex_path(&body, u, v).unwrap();
            assert_valid(&body, &path, u, v);
        }
    }

    #[test]
    fn large_triangle_lifts() {
        let body = ConvexBody::simplex(vec![p(0.0, 0.0), p(6.0, 0.0), p(1.0, 5.0)]).unwrap();
        let (u, v) = (p(0.0, 0.0), p(1.0, 4.9));
        let path = convex_path(&body, &u, &v).unwrap();
        assert_valid(&body, &path, &u, &v);
        assert!(path.labels().contains(&StepLabel::Lift));
    }

    #[test]
    fn identity_and_outside() {
        let body = ConvexBody::simplex(vec![p(0.0, 0.0), p(2.0, 0.0), p(1.0, 1.5)]).unwrap();
        let u = p(1.0, 0.5);
        assert_eq!(convex_path(&body, &u, &u).unwrap().steps(), 0);
        assert!(matches!(
            convex_path(&body, &u, &p(5.0, 5.0)),
            Err(Error::OutsideBody)
        ));
    }

    #[test]
    fn small_body_rejected() {
        let body = ConvexBody::simplex(vec![p(0.0, 0.0), p(1.0, 0.0), p(0.5, 0.5)]).unwrap();
        assert!(matches!(
            convex_path(&body, &p(0.0, 0.0), &p(1.0, 0.0)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn flat_body_rejected() {
        let body = ConvexBody::hyperrectangle(vec![3.0, 0.0]).unwrap();
        assert!(matches!(
            convex_path(&body, &p(0.0, 0.0), &p(3.0, 0.0)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn unbounded_wedge() {
        let body: ConvexBody = RayHull::new(vec![p(0.0, 0.0)], vec![p(1.0, 0.0), p(1.0, 0.3)])
            .unwrap()
            .into();
        let (u, v) = (p(0.0, 0.0), p(7.0, 1.0));
        let path = convex_path(&body, &u, &v).unwrap();
        assert_valid(&body, &path, &u, &v);
    }

    #[test]
    fn placed_body() {
        let (c, s) = (0.6, 0.8);
        let m = crate::convex::RigidMotion::new(vec![vec![c, -s], vec![s, c]], p(3.0, -1.0)).unwrap();
        let tri = Simplex::new(vec![p(0.0, 0.0), p(2.5, 0.0), p(0.7, 1.4)]).unwrap();
        let body = ConvexBody::with_placement(Shape::Simplex(tri), m.clone()).unwrap();
        let u = m.apply(&p(0.0, 0.0));
        let v = m.apply(&p(0.7, 1.4));
        let path = convex_path(&body, &u, &v).unwrap();
        assert_valid(&body, &path, &u, &v);
    }

    #[test]
    fn scale_lift_steps_once() {
        let core = ConvexBody::simplex(vec![p(0.0, 0.0), p(2.0, 0.0), p(0.0, 2.0)]).unwrap();
        let x = p(2.8, 0.1);
        let path = scale_lift(&core, 1.5, &x).unwrap();
        assert_eq!(path.steps(), 1);
        assert!(core.contains(path.start(), 1e-9));
        assert!(path.max_step_error() < 1e-9);
        let inside = p(0.5, 0.5);
        assert_eq!(scale_lift(&core, 1.5, &inside).unwrap().steps(), 0);
    }

    fn random_polygon() -> impl Strategy<Value = Vec<Point>> {
        prop::collection::vec((0.0..6.0f64, 0.0..6.0f64), 4..9)
            .prop_map(|v| v.into_iter().map(|(x, y)| p(x, y)).collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn polygon_paths_valid(verts in random_polygon(), a in prop::collection::vec(0.01..1.0f64, 8), b in prop::collection::vec(0.01..1.0f64, 8)) {
            let body = match ConvexBody::vpolytope(verts.clone()) {
                Ok(b) => b,
                Err(_) => return Ok(()),
            };
            let m = body.meb().unwrap();
            prop_assume!(m.radius >= 1.0 && body.affine_dimension() == 2);
            let mix = |w: &[f64]| {
                let s: f64 = w.iter().take(verts.len()).sum();
                let mut c = [0.0; 2];
                for (wi, v) in w.iter().zip(&verts) {
                    c[0] += wi / s * v.coords()[0];
                    c[1] += wi / s * v.coords()[1];
                }
                p(c[0], c[1])
            };
            let (u, v) = (mix(&a), mix(&b));
            let path = convex_path(&body, &u, &v).unwrap();
            prop_assert!(path.max_step_error() <= 1e-9);
            for q in path.points() {
                prop_assert!(body.contains(q, 1e-9));
            }
        }

        #[test]
        fn scaling_keeps_connectivity(lambda in prop::sample::select(vec![1.1, 1.5, 2.0]), a in 0.0..1.0f64, b in 0.0..1.0f64) {
            let core = ConvexBody::simplex(vec![p(0.0, 0.0), p(2.0, 0.0), p(0.4, 0.6)]).unwrap();
            let big = scale_body(&core, lambda).unwrap();
            let u = &p(2.0 * a, 0.0) * lambda;
            let v = &p(0.4 * b, 0.6 * b) * lambda;
            let path = convex_path(&big, &u, &v).unwrap();
            prop_assert!(path.max_step_error() <= 1e-9);
        }
    }
}
