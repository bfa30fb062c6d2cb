//! Planar convex hulls as half-plane lists, for fast membership in 2D.

use crate::convex::ConvexBody;

/// `n·x <= c` with unit outward normal `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct HalfPlane {
    pub n: [f64; 2],
    pub c: f64,
}

impl HalfPlane {
    /// Signed distance to the line, positive inside.
    pub fn slack(&self, p: [f64; 2]) -> f64 {
        self.c - self.n[0] * p[0] - self.n[1] * p[1]
    }
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Counter-clockwise hull without collinear points (monotone chain).
pub(crate) fn convex_hull(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<[f64; 2]> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &[f64; 2]>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Half-planes of a 2D polygon with nonempty interior, or `None`.
pub(crate) fn halfplanes(points: &[[f64; 2]]) -> Option<Vec<HalfPlane>> {
    let hull = convex_hull(points);
    if hull.len() < 3 {
        return None;
    }
    let area: f64 = (1..hull.len() - 1)
        .map(|i| cross(hull[0], hull[i], hull[i + 1]))
        .sum::<f64>()
        / 2.0;
    if area <= 1e-14 {
        return None;
    }
    Some(
        (0..hull.len())
            .map(|i| {
                let (a, b) = (hull[i], hull[(i + 1) % hull.len()]);
                let len = (b[0] - a[0]).hypot(b[1] - a[1]);
                let n = [(b[1] - a[1]) / len, -(b[0] - a[0]) / len];
                HalfPlane {
                    n,
                    c: n[0] * a[0] + n[1] * a[1],
                }
            })
            .collect(),
    )
}

/// World-frame half-planes of a bounded body in the plane.
pub(crate) fn body_halfplanes(body: &ConvexBody) -> Option<Vec<HalfPlane>> {
    if body.dim() != 2 || !body.is_bounded() {
        return None;
    }
    let verts = body.vertices().ok()?;
    let pts: Vec<[f64; 2]> = verts.iter().map(|p| [p.coords()[0], p.coords()[1]]).collect();
    halfplanes(&pts)
}

pub(crate) fn inside(planes: &[HalfPlane], p: [f64; 2], tol: f64) -> bool {
    planes.iter().all(|h| h.slack(p) >= -tol)
}
