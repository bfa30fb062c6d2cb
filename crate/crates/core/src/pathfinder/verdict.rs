//! The connectivity decision.

use serde::Serialize;

use super::StepPath;
use crate::convex::ConvexBody;
use crate::error::Result;
use crate::geom::{Point, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictReason {
    RadiusZero,
    #[serde(rename = "affdim-lt-2")]
    AffdimLt2,
    UnboundedRay,
    #[serde(rename = "radius-ge-one-affdim-ge-2")]
    RadiusGeOneAffdimGe2,
    RadiusLtOne,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum Witness {
    Path(StepPath),
    /// A point with no other body point at unit distance.
    Point(Point),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConnectivityVerdict {
    pub connected: bool,
    pub reason: VerdictReason,
    pub witness: Option<Witness>,
    pub radius: f64,
    pub affine_dimension: usize,
}

/// Connected iff the body is a point, or has radius at least one and
/// affine dimension at least two (unbounded bodies included). Segments
/// longer than zero never are, and neither is anything smaller than a unit
/// ball: its enclosing-ball centre has no neighbour.
pub fn is_connected(body: &ConvexBody) -> Result<ConnectivityVerdict> {
    let tol = Tolerances::default();
    let affine_dimension = body.affine_dimension();
    let radius = crate::convex::radius(body)?;
    let verdict = |connected, reason, witness| ConnectivityVerdict {
        connected,
        reason,
        witness,
        radius,
        affine_dimension,
    };
    if radius <= tol.geom_eps {
        return Ok(verdict(true, VerdictReason::RadiusZero, None));
    }
    if affine_dimension < 2 {
        return Ok(verdict(false, VerdictReason::AffdimLt2, None));
    }
    if radius.is_infinite() {
        return Ok(verdict(true, VerdictReason::UnboundedRay, None));
    }
    if radius >= 1.0 - tol.geom_eps {
        return Ok(verdict(true, VerdictReason::RadiusGeOneAffdimGe2, None));
    }
    let center = body.meb()?.center;
    Ok(verdict(
        false,
        VerdictReason::RadiusLtOne,
        Some(Witness::Point(center)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::RayHull;
    use proptest::prelude::*;

    fn p(x: f64, y: f64) -> Point {
        Point::xy(x, y)
    }

    #[test]
    fn cases() {
        let single = ConvexBody::vpolytope(vec![p(0.3, 0.3)]).unwrap();
        let v = is_connected(&single).unwrap();
        assert!(v.connected);
        assert_eq!(v.reason, VerdictReason::RadiusZero);

        let seg = ConvexBody::hyperrectangle(vec![5.0, 0.0]).unwrap();
        let v = is_connected(&seg).unwrap();
        assert!(!v.connected);
        assert_eq!(v.reason, VerdictReason::AffdimLt2);

        let cube = ConvexBody::cube(2, 2f64.sqrt()).unwrap();
        assert!(is_connected(&cube).unwrap().connected);

        let small = ConvexBody::cube(2, 1.4).unwrap();
        let v = is_connected(&small).unwrap();
        assert!(!v.connected);
        assert_eq!(v.witness, Some(Witness::Point(p(0.7, 0.7))));

        let wedge: ConvexBody = RayHull::new(vec![p(0.0, 0.0)], vec![p(1.0, 0.0), p(0.0, 1.0)])
            .unwrap()
            .into();
        assert_eq!(is_connected(&wedge).unwrap().reason, VerdictReason::UnboundedRay);
    }

    #[test]
    fn json_reason_is_kebab() {
        let v = is_connected(&ConvexBody::cube(3, 2.0).unwrap()).unwrap();
        let j = serde_json::to_value(v).unwrap();
        assert_eq!(j["reason"], "radius-ge-one-affdim-ge-2");
    }

    proptest! {
        #[test]
        fn predicate_matches_radius(a in 0.01..3.0f64, b in 0.01..3.0f64) {
            let body = ConvexBody::hyperrectangle(vec![a, b]).unwrap();
            let r = (a * a + b * b).sqrt() / 2.0;
            let v = is_connected(&body).unwrap();
            prop_assert_eq!(v.connected, r >= 1.0 - 1e-9);
        }
    }
}
