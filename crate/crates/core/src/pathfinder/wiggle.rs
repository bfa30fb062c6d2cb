//! Moving along the base of a thin rectangle `[0, 1 + x] × [0, h]`.
//!
//! A tall rectangle (`h >= 1`) needs two steps through an apex. Otherwise
//! each four-step cycle `(p,0) → (p+1,0) → (p+q/2, y) → (p+q/2+1, y) →
//! (p+q,0)` advances by `q <= 2(1 - √(1 - h²))`, where `y = √(1-(1-q/2)²)`
//! is the height reached.

use std::collections::BTreeMap;

use super::{BoundValue, DiameterBound, LocalPath, StepLabel, StepPath, P2};
use crate::error::{Error, Result};
use crate::geom::Point;

/// Largest advance per wiggle cycle at height `h < 1`.
pub(crate) fn max_advance(h: f64) -> f64 {
    2.0 * (1.0 - (1.0 - h * h).sqrt())
}

/// Path along the base from `(u, 0)` to `(v, 0)` in local coordinates.
pub(crate) fn wiggle_local(h: f64, u: f64, v: f64) -> LocalPath {
    if u == v {
        return LocalPath::single([u, 0.0]);
    }
    if u > v {
        let fwd = wiggle_local(h, v, u);
        let mut pts = fwd.pts;
        pts.reverse();
        let mut labels = fwd.labels;
        labels.reverse();
        return LocalPath { pts, labels };
    }
    let gap = v - u;
    let mut path = LocalPath::single([u, 0.0]);
    if h >= 1.0 {
        let half = gap / 2.0;
        let apex: P2 = [u + half, (1.0 - half * half).max(0.0).sqrt()];
        path.push(apex, StepLabel::Apex);
        path.push([v, 0.0], StepLabel::Apex);
        return path;
    }
    // the shrink factor keeps exact multiples of the advance from rounding up
    let cycles = (gap / max_advance(h) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    let q = gap / cycles as f64;
    let y = (1.0 - (1.0 - q / 2.0).powi(2)).max(0.0).sqrt();
    for c in 0..cycles {
        let p = u + q * c as f64;
        path.push([p + 1.0, 0.0], StepLabel::Wiggle);
        path.push([p + q / 2.0, y], StepLabel::Wiggle);
        path.push([p + q / 2.0 + 1.0, y], StepLabel::Wiggle);
        let next = if c + 1 == cycles { v } else { p + q };
        path.push([next, 0.0], StepLabel::Wiggle);
    }
    path
}

fn check_args(x_extent: f64, h: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x_extent) {
        return Err(Error::InvalidParameter("x extent must lie in [0, 1]".into()));
    }
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidParameter("height must be positive".into()));
    }
    Ok(())
}

/// Unit-step path from `(u, 0)` to `(v, 0)` inside `[0, 1 + x_extent] × [0, h]`.
pub fn rectangle_wiggle_path(x_extent: f64, h: f64, u: f64, v: f64) -> Result<StepPath> {
    check_args(x_extent, h)?;
    let tol = crate::geom::Tolerances::default().geom_eps;
    for w in [u, v] {
        if !(w >= -tol && w <= x_extent + tol) {
            return Err(Error::InvalidParameter(format!(
                "base coordinate {w} outside [0, {x_extent}]"
            )));
        }
    }
    let u = u.clamp(0.0, x_extent);
    let v = v.clamp(0.0, x_extent);
    Ok(wiggle_local(h, u, v).map(|p| Point::xy(p[0], p[1])))
}

/// Step bound for moving anywhere along the base: 2 when `h >= 1`, otherwise
/// `4⌈x / (2(1 - √(1-h²)))⌉`.
pub fn rectangle_wiggle_bound(x_extent: f64, h: f64) -> Result<DiameterBound> {
    check_args(x_extent, h)?;
    let bound = if h >= 1.0 {
        2
    } else {
        4 * (x_extent / max_advance(h)).ceil() as u64
    };
    Ok(DiameterBound {
        bound: BoundValue::Finite(bound),
        formula_id: "rectangle-wiggle",
        parameters: BTreeMap::from([("x", x_extent), ("h", h)]),
    })
}
