//! Boxes with half-diagonal exactly one.
//!
//! Two constructions:
//!
//! * Hub at the centre `M` (sides at most √3). Every corner is one step from
//!   `M`. A point `p` not at unit distance from `M` sees a unit crossing on
//!   the edge path from its nearest corner to the opposite one; a crossing
//!   at offset `τ` along an edge leaving corner `V` is reached from `V`
//!   through `L = (τ/2, α l, ..., α l)` in coordinates reflected so that
//!   `V` is the origin. Any two points are at most `4 + 4` steps apart.
//! * Wiggle along the long side of a thin rectangle (short side below one),
//!   reaching the radius segment through the chain made of the bottom edge
//!   and the unit arc about a bottom corner back to `M`.
//!
//! Higher-dimensional boxes route both endpoints onto the main diagonal and
//! travel inside the diagonal rectangle spanned by a split of the axes.

use std::collections::BTreeMap;

use super::wiggle::{max_advance, wiggle_local};
use super::{
    checked, convex_path, dist2, join_at_hub, require_inside, BoundValue, DiameterBound,
    LocalPath, StepLabel, StepPath, P2,
};
use crate::convex::ConvexBody;
use crate::error::{Error, Result};
use crate::geom::{unit_hit_on_polyline, unit_hit_on_segment, unit_point_on_arc, Arc, Frame2, Point, Segment, Tolerances};

/// Allowed deviation of `|l|` from 2 in the preconditions.
const NORM_TOL: f64 = 1e-7;

/// Excess of `|l|` over 2 below which the box is treated as critical.
const CRITICAL_TOL: f64 = 1e-12;

fn norm(l: &[f64]) -> f64 {
    l.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Path from the centre to `p` in the box `[0, l]`, at most four steps.
fn hub_reach(l: &[f64], p: &Point) -> Result<StepPath> {
    let tol = Tolerances::default();
    let d = l.len();
    let m = Point::new(l.iter().map(|v| v / 2.0).collect())?;
    let dm = p.dist(&m);
    if dm <= 1e-15 {
        return Ok(StepPath::single(m));
    }
    if (dm - 1.0).abs() <= 1e-12 {
        return StepPath::from_parts(vec![m, p.clone()], vec![StepLabel::RadiusSegment]);
    }
    let pc = p.coords();
    let corner: Vec<f64> = (0..d).map(|i| if pc[i] < l[i] / 2.0 { 0.0 } else { l[i] }).collect();
    let axes: Vec<usize> = (0..d).filter(|&i| l[i] > 0.0).collect();
    let mut walk = vec![Point::new(corner.clone())?];
    let mut cur = corner;
    for &i in &axes {
        cur[i] = l[i] - cur[i];
        walk.push(Point::new(cur.clone())?);
    }
    let hit = unit_hit_on_polyline(p, &walk, &tol)?;
    let k = axes[hit.piece];
    let v0 = walk[hit.piece].coords().to_vec();
    let tau = hit.t * l[k];
    let rest: f64 = (0..d).filter(|&i| i != k).map(|i| l[i] * l[i]).sum();
    let alpha = ((1.0 - tau * tau / 4.0) / rest).sqrt();
    if !(alpha <= 1.0) {
        return Err(Error::Precondition("box side exceeds √3".into()));
    }
    let reflect = |x: Vec<f64>| -> Vec<f64> {
        (0..d)
            .map(|i| if v0[i] == 0.0 { x[i] } else { l[i] - x[i] })
            .collect()
    };
    let lift: Vec<f64> = (0..d)
        .map(|i| if i == k { tau / 2.0 } else { alpha * l[i] })
        .collect();
    let mut path = StepPath::single(m);
    path.push(Point::new(v0.clone())?, StepLabel::CornerHop);
    path.push(Point::new(reflect(lift))?, StepLabel::FaceHop);
    path.push(hit.point, StepLabel::FaceHop);
    path.push(p.clone(), StepLabel::RadiusSegment);
    Ok(path)
}

fn hub_path(body: &ConvexBody, l: &[f64], u: &Point, v: &Point) -> Result<StepPath> {
    let tol = Tolerances::default();
    require_inside(body, u, &tol)?;
    require_inside(body, v, &tol)?;
    if u.dist(v) == 0.0 {
        return Ok(StepPath::single(u.clone()));
    }
    let path = join_at_hub(hub_reach(l, u)?, hub_reach(l, v)?).snap_ends(u, v);
    checked(body, path, &tol)
}

/// Path of at most 8 steps in the cube of side `2/√d`.
pub fn hypercube_path(d: usize, u: &Point, v: &Point) -> Result<StepPath> {
    if d < 2 {
        return Err(Error::InvalidParameter("dimension must be at least 2".into()));
    }
    let side = 2.0 / (d as f64).sqrt();
    let body = ConvexBody::cube(d, side)?;
    hub_path(&body, &vec![side; d], u, v)
}

pub fn hypercube_bound(d: usize) -> Result<DiameterBound> {
    if d < 2 {
        return Err(Error::InvalidParameter("dimension must be at least 2".into()));
    }
    Ok(DiameterBound {
        bound: BoundValue::Finite(8),
        formula_id: "hypercube",
        parameters: BTreeMap::from([("d", d as f64), ("side", 2.0 / (d as f64).sqrt())]),
    })
}

/// Path from the centre of `[0, l1] × [0, l2]` (with `l2 < 1 <= l1`) to a
/// point `p >= M` in local coordinates.
fn thin_reach(l1: f64, l2: f64, p: P2) -> Result<LocalPath> {
    let tol = Tolerances::default();
    let m = [l1 / 2.0, l2 / 2.0];
    if dist2(p, m) <= 1e-15 {
        return Ok(LocalPath::single(m));
    }
    let pp = Point::xy(p[0], p[1]);
    let base = Segment::new(Point::xy(0.0, 0.0), Point::xy(l1 - 1.0, 0.0))?;
    let mut path = match unit_hit_on_segment(&pp, &base, &tol) {
        Ok(hit) => {
            let q = hit.point.coords()[0];
            let mut path = LocalPath::single(m);
            path.push([0.0, 0.0], StepLabel::CornerHop);
            path.append(wiggle_local(l2, 0.0, q));
            path
        }
        Err(Error::NoCrossing) => {
            let arc = Arc::planar(
                Point::xy(l1, 0.0),
                1.0,
                std::f64::consts::PI,
                (l2 / 2.0).atan2(-l1 / 2.0),
            )?;
            let y = unit_point_on_arc(&pp, &arc, &tol)?;
            let mut path = LocalPath::single(m);
            path.push([l1, 0.0], StepLabel::CornerHop);
            path.push([y.coords()[0], y.coords()[1]], StepLabel::ArcHop);
            path
        }
        Err(e) => return Err(e),
    };
    path.push(p, StepLabel::RadiusSegment);
    Ok(path)
}

/// Path from the centre to `p` in the rectangle `[0, l1] × [0, l2]` with
/// `|l| = 2`, in local coordinates.
fn rect_reach(l1: f64, l2: f64, p: P2) -> Result<LocalPath> {
    if l1 < l2 {
        let swapped = rect_reach(l2, l1, [p[1], p[0]])?;
        return Ok(LocalPath {
            pts: swapped.pts.iter().map(|q| [q[1], q[0]]).collect(),
            labels: swapped.labels,
        });
    }
    if l2 >= 1.0 {
        let path = hub_reach(&[l1, l2], &Point::xy(p[0], p[1]))?;
        return Ok(LocalPath {
            pts: path.points().iter().map(|q| [q.coords()[0], q.coords()[1]]).collect(),
            labels: path.labels().to_vec(),
        });
    }
    // reflect into the quadrant above and right of the centre
    let fx = p[0] < l1 / 2.0;
    let fy = p[1] < l2 / 2.0;
    let flip = |q: P2| {
        [
            if fx { l1 - q[0] } else { q[0] },
            if fy { l2 - q[1] } else { q[1] },
        ]
    };
    let path = thin_reach(l1, l2, flip(p))?;
    let mut pts: Vec<P2> = path.pts.iter().map(|q| flip(*q)).collect();
    let n = pts.len();
    pts[n - 1] = p;
    Ok(LocalPath {
        pts,
        labels: path.labels,
    })
}

fn rect_local_path(l1: f64, l2: f64, u: P2, v: P2) -> Result<LocalPath> {
    let to_u = rect_reach(l1, l2, u)?;
    let to_v = rect_reach(l1, l2, v)?;
    let mut pts = to_u.pts;
    pts.reverse();
    let mut labels = to_u.labels;
    labels.reverse();
    let mut path = LocalPath { pts, labels };
    path.append(to_v);
    Ok(path)
}

fn check_rectangle(l1: f64, l2: f64) -> Result<()> {
    if !(l1 > 0.0 && l2 > 0.0) {
        return Err(Error::Precondition("both sides must be positive".into()));
    }
    if (norm(&[l1, l2]) - 2.0).abs() > NORM_TOL {
        return Err(Error::Precondition("rectangle diagonal must be 2".into()));
    }
    Ok(())
}

/// Path in `[0, l1] × [0, l2]` with diagonal 2, within [`rectangle_bound`].
pub fn rectangle2d_path(l1: f64, l2: f64, u: &Point, v: &Point) -> Result<StepPath> {
    check_rectangle(l1, l2)?;
    let body = ConvexBody::hyperrectangle(vec![l1, l2])?;
    let tol = Tolerances::default();
    require_inside(&body, u, &tol)?;
    require_inside(&body, v, &tol)?;
    if u.dist(v) == 0.0 {
        return Ok(StepPath::single(u.clone()));
    }
    let c = |p: &Point| [p.coords()[0], p.coords()[1]];
    let path = rect_local_path(l1, l2, c(u), c(v))?
        .map(|p| Point::xy(p[0], p[1]))
        .simplified()
        .snap_ends(u, v);
    checked(&body, path, &tol)
}

/// `8` if the short side is at least one, else
/// `4 + 8⌈(l1 - 1) / (2(1 - √(1 - l2²)))⌉`; unbounded below diagonal 2.
pub fn rectangle_bound(l1: f64, l2: f64) -> Result<DiameterBound> {
    let (a, b) = if l1 >= l2 { (l1, l2) } else { (l2, l1) };
    let parameters = BTreeMap::from([("l1", a), ("l2", b)]);
    let n = norm(&[a, b]);
    if n < 2.0 - NORM_TOL || b <= 0.0 {
        return Ok(DiameterBound {
            bound: BoundValue::Unbounded,
            formula_id: "rectangle",
            parameters,
        });
    }
    if n > 2.0 + NORM_TOL {
        return Err(Error::Precondition("bound formula needs diagonal 2".into()));
    }
    Ok(DiameterBound {
        bound: BoundValue::Finite(rect_bound_value(a, b)),
        formula_id: "rectangle",
        parameters,
    })
}

fn rect_bound_value(l1: f64, l2: f64) -> u64 {
    let (a, b) = if l1 >= l2 { (l1, l2) } else { (l2, l1) };
    if b >= 1.0 {
        8
    } else {
        4 + 8 * (((a - 1.0).max(0.0) / max_advance(b)) * (1.0 - 1e-12)).ceil() as u64
    }
}

/// Sides of the diagonal rectangle for the axis split `split`.
fn split_sides(l: &[f64], split: &[usize]) -> (f64, f64) {
    let a: f64 = split.iter().map(|&i| l[i] * l[i]).sum::<f64>().sqrt();
    let b = (l.iter().map(|v| v * v).sum::<f64>() - a * a).max(0.0).sqrt();
    (a, b)
}

/// Axis split whose diagonal rectangle has the smallest step bound; ties go
/// to the most balanced split. Exhaustive up to 20 nonzero sides, greedy
/// beyond.
pub fn best_split(l: &[f64]) -> Vec<usize> {
    let nz: Vec<usize> = (0..l.len()).filter(|&i| l[i] > 0.0).collect();
    if nz.len() < 2 {
        return nz;
    }
    if nz.len() > 20 {
        let mut order = nz.clone();
        order.sort_by(|&a, &b| l[b].total_cmp(&l[a]));
        let (mut left, mut sa, mut sb) = (vec![], 0.0, 0.0);
        for i in order {
            if sa <= sb {
                left.push(i);
                sa += l[i] * l[i];
            } else {
                sb += l[i] * l[i];
            }
        }
        left.sort_unstable();
        return left;
    }
    let n = nz.len();
    let mut best: Option<(u64, f64, Vec<usize>)> = None;
    // the last index always sits on the complementary side
    for mask in 1u32..(1 << (n - 1)) {
        let split: Vec<usize> = (0..n - 1).filter(|b| mask >> b & 1 == 1).map(|b| nz[b]).collect();
        let (a, b) = split_sides(l, &split);
        let key = (rect_bound_value(a, b), (a - b).abs());
        let better = match &best {
            None => true,
            Some((bb, bal, _)) => key.0 < *bb || (key.0 == *bb && key.1 < *bal - 1e-12),
        };
        if better {
            best = Some((key.0, key.1, split));
        }
    }
    best.map(|b| b.2).expect("at least one split")
}

/// Bound for the box `[0, l]` through the diagonal rectangle of `split`:
/// the rectangle bound plus two.
pub fn hyperrectangle_bound(l: &[f64], split: &[usize]) -> Result<DiameterBound> {
    let n = norm(l);
    let mut parameters = BTreeMap::from([("norm", n)]);
    if n < 2.0 - NORM_TOL {
        return Ok(DiameterBound {
            bound: BoundValue::Unbounded,
            formula_id: "hyperrectangle",
            parameters,
        });
    }
    if n > 2.0 + NORM_TOL {
        return Err(Error::Precondition("bound formula needs |l| = 2".into()));
    }
    check_split(l, split)?;
    let (a, b) = split_sides(l, split);
    parameters.insert("l1", a);
    parameters.insert("l2", b);
    let bound = if b <= 0.0 || a <= 0.0 {
        BoundValue::Unbounded
    } else {
        BoundValue::Finite(rect_bound_value(a, b) + 2)
    };
    Ok(DiameterBound {
        bound,
        formula_id: "hyperrectangle",
        parameters,
    })
}

fn check_split(l: &[f64], split: &[usize]) -> Result<()> {
    let mut seen = vec![false; l.len()];
    for &i in split {
        if i >= l.len() || seen[i] {
            return Err(Error::InvalidParameter(format!("bad split index {i}")));
        }
        seen[i] = true;
    }
    Ok(())
}

/// Path in the box `[0, l]` with `|l| >= 2`, using [`best_split`].
pub fn hyperrectangle_path(l: &[f64], u: &Point, v: &Point) -> Result<StepPath> {
    hyperrectangle_path_with_split(l, &best_split(l), u, v)
}

pub fn hyperrectangle_path_with_split(
    l: &[f64],
    split: &[usize],
    u: &Point,
    v: &Point,
) -> Result<StepPath> {
    let tol = Tolerances::default();
    let body = ConvexBody::hyperrectangle(l.to_vec())?;
    require_inside(&body, u, &tol)?;
    require_inside(&body, v, &tol)?;
    let n = norm(l);
    if n < 2.0 - NORM_TOL {
        return Err(Error::Precondition(format!("|l| = {n} is below 2")));
    }
    if body.affine_dimension() < 2 {
        return Err(Error::Precondition("affine dimension must be at least 2".into()));
    }
    if n > 2.0 + CRITICAL_TOL {
        return convex_path(&body, u, v);
    }
    if u.dist(v) == 0.0 {
        return Ok(StepPath::single(u.clone()));
    }
    if l.len() == 2 {
        return rectangle2d_path(l[0], l[1], u, v);
    }
    check_split(l, split)?;
    let (a, b) = split_sides(l, split);
    if a <= 0.0 || b <= 0.0 {
        return Err(Error::InvalidParameter("split leaves an empty side".into()));
    }
    let d = l.len();
    let e1 = Point::new((0..d).map(|i| if split.contains(&i) { l[i] / a } else { 0.0 }).collect())?;
    let e2 = Point::new((0..d).map(|i| if split.contains(&i) { 0.0 } else { l[i] / b }).collect())?;
    let frame = Frame2 {
        origin: Point::origin(d),
        e1,
        e2,
    };
    let far = Point::new(l.to_vec())?;
    let center = &far * 0.5;
    // endpoint → point on the half-diagonal facing away from it
    let onto_diagonal = |p: &Point| -> Result<(Point, f64)> {
        let end = if (p - &center).dot(&(&far - &center)) <= 0.0 {
            far.clone()
        } else {
            Point::origin(d)
        };
        let hit = unit_hit_on_segment(p, &Segment::new(center.clone(), end.clone())?, &tol)?;
        let lambda = if end == far { 0.5 + hit.t / 2.0 } else { 0.5 - hit.t / 2.0 };
        Ok((hit.point, lambda))
    };
    let (yu, lu) = onto_diagonal(u)?;
    let (yv, lv) = onto_diagonal(v)?;
    let inner = rect_local_path(a, b, [lu * a, lu * b], [lv * a, lv * b])?;
    let mut path = StepPath::single(u.clone());
    let mut mid = inner.map(|p| frame.to_world(p));
    mid.points[0] = yu;
    let k = mid.points.len() - 1;
    mid.points[k] = yv;
    path.push(mid.points[0].clone(), StepLabel::RadiusSegment);
    path.append(mid);
    path.push(v.clone(), StepLabel::RadiusSegment);
    let path = path.simplified().snap_ends(u, v);
    checked(&body, path, &tol)
}
