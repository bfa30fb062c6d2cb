//! Reaching the base of a triangle from a hub.
//!
//! Working coordinates put the base corners at `P0 = (0, 0)` and
//! `P1 = (L, 0)` with `1 < L <= 2`, the apex above the base and the hub `A`
//! at unit distance from both corners. Small arcs of the unit circles about
//! `P1` and `P0` that start at `A` stay inside the triangle; one step to a
//! corner and one onto such an arc reaches every base point near the
//! opposite corner. Unit translations and a wiggle along an inscribed
//! rectangle cover the rest of `[0, L - 1] ∪ [1, L]`.

use super::{checked, dist2, join_at_hub, LocalPath, StepLabel, StepPath, P2};
use crate::convex::{ConvexBody, Simplex};
use crate::error::{Error, Result};
use crate::geom::{unit_point_on_arc, Arc, Frame2, Point, Tolerances};

/// Arc points sampled when certifying that an arc lies in the triangle.
const ARC_SAMPLES: usize = 64;

/// Longest wiggle attempted before reporting the triangle as too thin.
const MAX_WIGGLE_CYCLES: usize = 200_000;

/// Wiggle heights stay below this so every step keeps a horizontal part.
const MAX_WIGGLE_HEIGHT: f64 = 0.9;

fn c(s: f64) -> f64 {
    (1.0 - s * s).max(0.0).sqrt()
}

fn cycle_advance(t: f64, y: f64) -> f64 {
    1.0 - c(t) + c(y - t) - c(y)
}

/// Interior waypoints of the cycle starting at `(p, 0)`.
fn cycle_points(p: f64, t: f64, y: f64) -> [P2; 3] {
    let l2 = p + 1.0 - c(t);
    [[p + 1.0, 0.0], [l2, t], [l2 + c(y - t), y]]
}

/// Left height in `[0, t_max]` whose cycle advances exactly `a`.
fn solve_left_height(y: f64, t_max: f64, a: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, t_max);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if cycle_advance(mid, y) < a {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Relative shrink applied to each wiggle height.
const HEIGHT_MARGIN: f64 = 1e-6;

fn pt(p: P2) -> Point {
    Point::xy(p[0], p[1])
}

fn on_unit_circle(center: P2, theta: f64) -> P2 {
    [center[0] + theta.cos(), center[1] + theta.sin()]
}

/// Edge `n·p <= c` with unit outward normal `n`.
#[derive(Debug, Clone, Copy)]
struct Edge {
    n: P2,
    c: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct BaseTriangle {
    l: f64,
    hub: P2,
    edges: [Edge; 3],
    /// Arc about `P1`: angles from `phi1` down to `phi1 - delta1`.
    phi1: f64,
    delta1: f64,
    /// Arc about `P0`: angles from `phi2` up to `phi2 + delta2`.
    phi2: f64,
    delta2: f64,
    /// Base points within `r1` of `P0` (or `r2` of `P1`) are one arc hop away.
    r1: f64,
    r2: f64,
}

impl BaseTriangle {
    pub(crate) fn new(l: f64, apex: P2, hub: P2) -> Result<Self> {
        if !(l > 1.0 && l <= 2.0 + 1e-9) {
            return Err(Error::Precondition(format!("base length {l} must lie in (1, 2]")));
        }
        if !(apex[1] > 0.0) {
            return Err(Error::Precondition("apex must lie above the base".into()));
        }
        let verts = [[0.0, 0.0], [l, 0.0], apex];
        let edges = std::array::from_fn(|i| {
            let (a, b) = (verts[i], verts[(i + 1) % 3]);
            let len = dist2(a, b);
            let n = [(b[1] - a[1]) / len, -(b[0] - a[0]) / len];
            Edge {
                n,
                c: n[0] * a[0] + n[1] * a[1],
            }
        });
        let mut tri = BaseTriangle {
            l,
            hub,
            edges,
            phi1: (hub[1]).atan2(hub[0] - l),
            delta1: 0.0,
            phi2: hub[1].atan2(hub[0]),
            delta2: 0.0,
            r1: 0.0,
            r2: 0.0,
        };
        if tri.margin(hub) < -1e-12 {
            return Err(Error::Precondition("hub lies outside the triangle".into()));
        }
        let p1 = [l, 0.0];
        let p0 = [0.0, 0.0];
        tri.delta1 = tri.arc_span(p1, tri.phi1, -1.0)?;
        tri.delta2 = tri.arc_span(p0, tri.phi2, 1.0)?;
        tri.r1 = dist2(on_unit_circle(p1, tri.phi1 - tri.delta1), p0) - 1.0;
        tri.r2 = dist2(on_unit_circle(p0, tri.phi2 + tri.delta2), p1) - 1.0;
        Ok(tri)
    }

    /// Signed distance to the boundary, positive inside.
    fn margin(&self, p: P2) -> f64 {
        self.edges
            .iter()
            .map(|e| e.c - e.n[0] * p[0] - e.n[1] * p[1])
            .fold(f64::INFINITY, f64::min)
    }

    /// Highest `y` with `(x, y)` in the triangle.
    fn top(&self, x: f64) -> f64 {
        self.edges
            .iter()
            .filter(|e| e.n[1] > 1e-15)
            .map(|e| (e.c - e.n[0] * x) / e.n[1])
            .fold(f64::INFINITY, f64::min)
    }

    /// Angular length of the arc about `center` starting at `phi`, found by
    /// halving the chord from 0.25 until sampled arc points sit inside with
    /// room for the sagitta between samples.
    fn arc_span(&self, center: P2, phi: f64, dir: f64) -> Result<f64> {
        let mut chord: f64 = 0.25;
        for _ in 0..60 {
            let delta = 2.0 * (chord / 2.0).asin();
            let sagitta = 1.0 - (delta / (2.0 * ARC_SAMPLES as f64)).cos();
            let fits = (1..=ARC_SAMPLES).all(|j| {
                let th = phi + dir * delta * j as f64 / ARC_SAMPLES as f64;
                self.margin(on_unit_circle(center, th)) >= sagitta
            });
            if fits {
                return Ok(delta);
            }
            chord /= 2.0;
        }
        Err(Error::Numerical("no arc about a base corner fits in the triangle".into()))
    }

    pub(crate) fn hub(&self) -> P2 {
        self.hub
    }

    pub(crate) fn base_length(&self) -> f64 {
        self.l
    }

    /// Hub → `P1` → arc point → `(q, 0)`, for `q <= r1`.
    fn via_arc1(&self, q: f64) -> Result<LocalPath> {
        let p1 = [self.l, 0.0];
        let arc = Arc::planar(pt(p1), 1.0, self.phi1, self.phi1 - self.delta1)?;
        let y = unit_point_on_arc(&Point::xy(q, 0.0), &arc, &Tolerances::default())?;
        let mut path = LocalPath::single(self.hub);
        path.push(p1, StepLabel::CornerHop);
        path.push([y.coords()[0], y.coords()[1]], StepLabel::ArcHop);
        path.push([q, 0.0], StepLabel::ArcHop);
        Ok(path)
    }

    /// Hub → `P0` → arc point → `(q, 0)`, for `q >= L - r2`.
    fn via_arc2(&self, q: f64) -> Result<LocalPath> {
        let p0 = [0.0, 0.0];
        let arc = Arc::planar(pt(p0), 1.0, self.phi2, self.phi2 + self.delta2)?;
        let y = unit_point_on_arc(&Point::xy(q, 0.0), &arc, &Tolerances::default())?;
        let mut path = LocalPath::single(self.hub);
        path.push(p0, StepLabel::CornerHop);
        path.push([y.coords()[0], y.coords()[1]], StepLabel::ArcHop);
        path.push([q, 0.0], StepLabel::ArcHop);
        Ok(path)
    }

    /// Moves the base pair `(p, 0), (p + 1, 0)` from `p = from` to `p = to`.
    ///
    /// Each cycle `(p,0) → (p+1,0) → (p+1-c(t), t) → (· + c(Y-t), Y) → (p+a,0)`
    /// with `c(s) = √(1-s²)` lifts the left point to `t` and the right one
    /// to `Y`, advancing by `a = 1 - c(t) + c(Y-t) - c(Y) ≈ tY`. Taking each
    /// height as large as the triangle allows above its own end keeps the
    /// advance reasonable when only one end is thin.
    fn wiggle(&self, from: f64, to: f64) -> Result<LocalPath> {
        let dir = if to >= from { 1.0 } else { -1.0 };
        let mut path = LocalPath::single([from, 0.0]);
        let mut p = from;
        let mut cycles = 0;
        while (to - p) * dir > 0.0 {
            cycles += 1;
            if cycles > MAX_WIGGLE_CYCLES {
                return Err(Error::Numerical(format!(
                    "wiggle near base point {p} needs more than {MAX_WIGGLE_CYCLES} cycles"
                )));
            }
            let remaining = (to - p) * dir;
            let shrink = 1.0 - HEIGHT_MARGIN;
            let mut t = (self.top(p) * shrink).clamp(0.0, MAX_WIGGLE_HEIGHT);
            let mut y = (self.top(p + 1.0) * shrink).clamp(0.0, MAX_WIGGLE_HEIGHT);
            let mut pts = None;
            for _ in 0..200 {
                let mut tc = t;
                let mut adv = cycle_advance(tc, y);
                let last = adv >= remaining;
                if last {
                    tc = solve_left_height(y, t, remaining);
                    adv = remaining;
                }
                let base = if dir > 0.0 { p } else { p - adv };
                let cyc = cycle_points(base, tc, y);
                if cyc.iter().all(|q| q[1] <= self.top(q[0]) * shrink || q[1] == 0.0) && adv > 0.0 {
                    pts = Some((cyc, base, adv, last));
                    break;
                }
                t /= 2.0;
                y /= 2.0;
            }
            let Some((cyc, base, adv, last)) = pts else {
                return Err(Error::Numerical(format!("no room to wiggle at base point {p}")));
            };
            let next = if last { to } else { p + dir * adv };
            if dir > 0.0 {
                path.push(cyc[0], StepLabel::Wiggle);
                path.push(cyc[1], StepLabel::Wiggle);
                path.push(cyc[2], StepLabel::Wiggle);
                path.push([next, 0.0], StepLabel::Wiggle);
            } else {
                path.push(cyc[2], StepLabel::Wiggle);
                path.push(cyc[1], StepLabel::Wiggle);
                path.push(cyc[0], StepLabel::Wiggle);
                path.push([if last { to } else { base }, 0.0], StepLabel::Wiggle);
            }
            p = next;
        }
        Ok(path)
    }

    /// Path from the hub to the base point `(q, 0)`.
    pub(crate) fn reach(&self, q: f64) -> Result<LocalPath> {
        let l = self.l;
        let q = q.clamp(0.0, l);
        let target = [q, 0.0];
        if dist2(self.hub, target) <= 1e-15 {
            return Ok(LocalPath::single(self.hub));
        }
        if q <= self.r1 {
            return self.via_arc1(q);
        }
        if q >= l - self.r2 {
            return self.via_arc2(q);
        }
        if q <= l - 1.0 + 1e-12 {
            let q = q.min(l - 1.0);
            if q + 1.0 >= l - self.r2 {
                let mut path = self.via_arc2(q + 1.0)?;
                path.push(target, StepLabel::Translate);
                return Ok(path);
            }
            let from_left = self.via_arc1(self.r1).and_then(|mut path| {
                path.append(self.wiggle(self.r1, q)?);
                Ok(path)
            });
            let start = l - 1.0 - self.r2;
            let from_right = self.via_arc2(l - self.r2).and_then(|mut path| {
                path.push([start, 0.0], StepLabel::Translate);
                path.append(self.wiggle(start, q)?);
                Ok(path)
            });
            let mut path = match (from_left, from_right) {
                (Ok(a), Ok(b)) => {
                    if a.pts.len() <= b.pts.len() {
                        a
                    } else {
                        b
                    }
                }
                (Ok(a), Err(_)) => a,
                (Err(_), Ok(b)) => b,
                (Err(e), Err(_)) => return Err(e),
            };
            let n = path.pts.len();
            path.pts[n - 1] = target;
            return Ok(path);
        }
        if q >= 1.0 - 1e-12 {
            let mut path = self.reach((q - 1.0).max(0.0))?;
            path.push(target, StepLabel::Translate);
            return Ok(path);
        }
        Err(Error::Unsupported(format!(
            "base point {q} lies strictly between L - 1 and 1"
        )))
    }
}

struct TriangleSetup {
    frame: Frame2,
    engine: BaseTriangle,
    body: ConvexBody,
}

fn setup_with_hub(t: &Simplex, a: &Point) -> Result<TriangleSetup> {
    let tol = Tolerances::default();
    if t.order() != 2 {
        return Err(Error::InvalidParameter("expected a triangle".into()));
    }
    a.check_dim(t.dim())?;
    let v = t.vertices();
    let l = v[0].dist(&v[1]);
    if l <= 1.0 {
        return Err(Error::Precondition("base P0P1 must be longer than one".into()));
    }
    if (a.dist(&v[0]) - 1.0).abs() > tol.geom_eps || (a.dist(&v[1]) - 1.0).abs() > tol.geom_eps {
        return Err(Error::Precondition(
            "hub must be at unit distance from both base corners".into(),
        ));
    }
    let (bary, off) = t.barycentric(a);
    if off > tol.geom_eps || bary.iter().any(|b| *b <= tol.geom_eps) {
        return Err(Error::Precondition("hub must lie in the relative interior".into()));
    }
    let frame = Frame2::from_points(&v[0], &v[1], &v[2])?;
    let apex = frame.to_local(&v[2]);
    let engine = BaseTriangle::new(l, apex, frame.to_local(a))?;
    Ok(TriangleSetup {
        frame,
        engine,
        body: ConvexBody::from(t.clone()),
    })
}

impl TriangleSetup {
    fn base_coordinate(&self, p: &Point) -> Result<f64> {
        let tol = Tolerances::default().geom_eps;
        let [x, y] = self.frame.to_local(p);
        if y.abs() > tol || self.frame.off_plane(p) > tol {
            return Err(Error::Precondition(format!("{p} is not on the base")));
        }
        Ok(x)
    }

    fn reach_world(&self, q: f64) -> Result<StepPath> {
        Ok(self.engine.reach(q)?.map(|p| self.frame.to_world(p)))
    }
}

/// Path inside the triangle `t = (P0, P1, P2)` between base points `u` and
/// `v` within distance `|P0P1| - 1` of `P0`, through the hub `a`.
pub fn triangle_wiggle_path(t: &Simplex, a: &Point, u: &Point, v: &Point) -> Result<StepPath> {
    let setup = setup_with_hub(t, a)?;
    let x = setup.engine.base_length() - 1.0;
    let tol = Tolerances::default();
    let mut q = [0.0; 2];
    for (i, p) in [u, v].into_iter().enumerate() {
        p.check_dim(t.dim())?;
        q[i] = setup.base_coordinate(p)?;
        if q[i] < -tol.geom_eps || q[i] > x + tol.geom_eps {
            return Err(Error::Precondition(format!(
                "{p} is not within distance {x} of P0 on the base"
            )));
        }
    }
    if u.dist(v) == 0.0 {
        return Ok(StepPath::single(u.clone()));
    }
    let path = join_at_hub(setup.reach_world(q[0])?, setup.reach_world(q[1])?).snap_ends(u, v);
    checked(&setup.body, path, &tol)
}

/// Path from the hub `a` to a base point `v` of the triangle.
pub fn triangle_reach(t: &Simplex, a: &Point, v: &Point) -> Result<StepPath> {
    let setup = setup_with_hub(t, a)?;
    let q = setup.base_coordinate(v)?;
    let path = setup.reach_world(q)?.snap_ends(a, v);
    checked(&setup.body, path, &Tolerances::default())
}

/// Path between two points of an obtuse (or right) triangle of radius one.
pub fn obtuse_triangle_path(t: &Simplex, u: &Point, v: &Point) -> Result<StepPath> {
    let tol = Tolerances::default();
    if t.order() != 2 {
        return Err(Error::InvalidParameter("expected a triangle".into()));
    }
    let v3 = t.vertices();
    let (i, j, k) = [(0, 1, 2), (1, 2, 0), (2, 0, 1)]
        .into_iter()
        .max_by(|a, b| v3[a.0].dist(&v3[a.1]).total_cmp(&v3[b.0].dist(&v3[b.1])))
        .expect("three sides");
    let apex_dot = (&v3[i] - &v3[k]).dot(&(&v3[j] - &v3[k]));
    if apex_dot > tol.geom_eps {
        return Err(Error::Precondition("triangle is not obtuse".into()));
    }
    let r = crate::convex::meb(v3)?.radius;
    if (r - 1.0).abs() > tol.support_eps {
        return Err(Error::Precondition(format!("triangle radius {r} is not one")));
    }
    super::convex_path(&ConvexBody::from(t.clone()), u, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(x: f64, y: f64) -> Point {
        Point::xy(x, y)
    }

    fn fig2_triangle() -> (Simplex, Point) {
        let t = Simplex::new(vec![p(0.0, 0.0), p(1.8, 0.0), p(0.9, 1.2)]).unwrap();
        (t, p(0.9, 0.19f64.sqrt()))
    }

    fn assert_valid(t: &Simplex, path: &StepPath) {
        assert!(path.max_step_error() <= 1e-9, "step error {}", path.max_step_error());
        for q in path.points() {
            assert!(t.contains(q, 1e-9), "{q} outside");
        }
    }

    #[test]
    fn engine_covers_the_base() {
        let (t, a) = fig2_triangle();
        let s = setup_with_hub(&t, &a).unwrap();
        for i in 0..=80 {
            let q = 0.8 * i as f64 / 80.0;
            let path = s.reach_world(q).unwrap();
            assert_valid(&t, &path);
            assert!(path.end().dist(&p(q, 0.0)) < 1e-12);
            let path = s.reach_world(q + 1.0).unwrap();
            assert_valid(&t, &path);
        }
    }

    #[test]
    fn identity_is_zero_steps() {
        let (t, a) = fig2_triangle();
        let u = p(0.3, 0.0);
        assert_eq!(triangle_wiggle_path(&t, &a, &u, &u).unwrap().steps(), 0);
    }

    #[test]
    fn wiggle_triangle_example() {
        let (t, a) = fig2_triangle();
        let path = triangle_wiggle_path(&t, &a, &p(0.0, 0.0), &p(0.8, 0.0)).unwrap();
        assert_valid(&t, &path);
        assert_eq!(path.start(), &p(0.0, 0.0));
        assert_eq!(path.end(), &p(0.8, 0.0));
    }

    #[test]
    fn near_corner_is_three_steps_from_hub() {
        let (t, a) = fig2_triangle();
        let s = setup_with_hub(&t, &a).unwrap();
        let q = s.engine.r1 / 2.0;
        let path = triangle_reach(&t, &a, &p(q, 0.0)).unwrap();
        assert_eq!(path.steps(), 3);
        assert_eq!(path.points()[1], p(1.8, 0.0));
        assert_eq!(
            path.labels(),
            &[StepLabel::CornerHop, StepLabel::ArcHop, StepLabel::ArcHop]
        );
        // from P0 itself the hub detour costs one more step
        let path = triangle_wiggle_path(&t, &a, &p(0.0, 0.0), &p(q, 0.0)).unwrap();
        assert!(path.steps() <= 4);
    }

    #[test]
    fn rejects_bad_hub_and_endpoints() {
        let (t, _) = fig2_triangle();
        let bad = p(0.9, 0.43589);
        assert!(matches!(
            triangle_wiggle_path(&t, &bad, &p(0.0, 0.0), &p(0.5, 0.0)),
            Err(Error::Precondition(_))
        ));
        let (t, a) = fig2_triangle();
        assert!(triangle_wiggle_path(&t, &a, &p(0.0, 0.0), &p(0.9, 0.0)).is_err());
        assert!(triangle_wiggle_path(&t, &a, &p(0.0, 0.1), &p(0.5, 0.0)).is_err());
    }

    fn obtuse() -> Simplex {
        Simplex::new(vec![p(0.0, 0.0), p(2.0, 0.0), p(0.5, 0.3)]).unwrap()
    }

    #[test]
    fn obtuse_corner_to_corner() {
        let t = obtuse();
        let path = obtuse_triangle_path(&t, &p(0.0, 0.0), &p(2.0, 0.0)).unwrap();
        assert_valid(&t, &path);
    }

    #[test]
    fn obtuse_center_to_corner_is_one_step() {
        let t = obtuse();
        let path = obtuse_triangle_path(&t, &p(1.0, 0.0), &p(0.0, 0.0)).unwrap();
        assert_valid(&t, &path);
        assert_eq!(path.steps(), 1);
        let w = p(0.5, 0.1);
        assert_eq!(obtuse_triangle_path(&t, &w, &w).unwrap().steps(), 0);
    }

    #[test]
    fn obtuse_preconditions() {
        let acute = Simplex::new(vec![p(1.0, 0.0), p(-0.5, 0.75f64.sqrt()), p(-0.5, -(0.75f64.sqrt()))])
            .unwrap();
        assert!(matches!(
            obtuse_triangle_path(&acute, &p(1.0, 0.0), &p(0.0, 0.0)),
            Err(Error::Precondition(_))
        ));
        let small = Simplex::new(vec![p(0.0, 0.0), p(1.5, 0.0), p(0.5, 0.3)]).unwrap();
        assert!(matches!(
            obtuse_triangle_path(&small, &p(0.0, 0.0), &p(1.5, 0.0)),
            Err(Error::Precondition(_))
        ));
    }

    fn in_obtuse(apex: (f64, f64)) -> impl Strategy<Value = (Point, Point)> {
        let pt = move || {
            (0.0..1.0f64, 0.0..1.0f64).prop_map(move |(a, b)| {
                let (a, b) = if a + b > 1.0 { (1.0 - a, 1.0 - b) } else { (a, b) };
                p(2.0 * a + apex.0 * b, apex.1 * b)
            })
        };
        (pt(), pt())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn obtuse_paths_valid((u, v) in in_obtuse((0.5, 0.3))) {
            let t = obtuse();
            let path = obtuse_triangle_path(&t, &u, &v).unwrap();
            prop_assert!(path.max_step_error() <= 1e-9);
            for q in path.points() {
                prop_assert!(t.contains(q, 1e-9));
            }
        }

        #[test]
        fn wiggle_triangle_paths_valid(a in 0.0..=1.0f64, b in 0.0..=1.0f64, len in 1.05..1.99f64, apex_t in 0.2..0.8f64) {
            let hub = [len / 2.0, (1.0 - len * len / 4.0).sqrt()];
            let apex = [len * apex_t, hub[1] + 0.6];
            let t = Simplex::new(vec![p(0.0, 0.0), p(len, 0.0), p(apex[0], apex[1])]).unwrap();
            let x = len - 1.0;
            let path = triangle_wiggle_path(&t, &p(hub[0], hub[1]), &p(a * x, 0.0), &p(b * x, 0.0)).unwrap();
            prop_assert!(path.max_step_error() <= 1e-9);
        }
    }
}
