//! Simplices: the graph on enclosing-sphere vertices and the path entry point.

use std::collections::VecDeque;

use serde::Serialize;

use super::{convex_path, StepPath};
use crate::convex::{meb, ConvexBody, Simplex};
use crate::error::{Error, Result};
use crate::geom::{Point, Tolerances};

/// Vertices on the enclosing sphere, joined when they subtend an angle of
/// at least 90° at the centre.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusGraph {
    pub center: Point,
    pub radius: f64,
    pub nodes: Vec<Point>,
    pub edges: Vec<(usize, usize)>,
}

impl RadiusGraph {
    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![vec![]; self.nodes.len()];
        for &(i, j) in &self.edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        adj
    }

    /// Hop counts from node `from`; `None` for unreachable nodes.
    pub fn distances(&self, from: usize) -> Vec<Option<usize>> {
        let adj = self.adjacency();
        let mut dist = vec![None; self.nodes.len()];
        if from >= dist.len() {
            return dist;
        }
        dist[from] = Some(0);
        let mut queue = VecDeque::from([from]);
        while let Some(i) = queue.pop_front() {
            let di = dist[i].expect("queued nodes are labelled");
            for &j in &adj[i] {
                if dist[j].is_none() {
                    dist[j] = Some(di + 1);
                    queue.push_back(j);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.nodes.is_empty() || self.distances(0).iter().all(Option::is_some)
    }

    /// Largest hop count from `node`, or `None` when the graph is disconnected.
    pub fn eccentricity(&self, node: usize) -> Option<usize> {
        self.distances(node)
            .into_iter()
            .try_fold(0, |m, d| d.map(|d| m.max(d)))
    }
}

pub fn radius_graph(s: &Simplex) -> Result<RadiusGraph> {
    let tol = Tolerances::default();
    let m = meb(s.vertices())?;
    let nodes: Vec<Point> = s
        .vertices()
        .iter()
        .filter(|v| (v.dist(&m.center) - m.radius).abs() <= tol.support_eps)
        .cloned()
        .collect();
    let r2 = m.radius * m.radius;
    let mut edges = vec![];
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            let dot = (&nodes[i] - &m.center).dot(&(&nodes[j] - &m.center));
            if dot <= tol.geom_eps * r2.max(1.0) {
                edges.push((i, j));
            }
        }
    }
    Ok(RadiusGraph {
        center: m.center,
        radius: m.radius,
        nodes,
        edges,
    })
}

/// Unit-step path in a simplex of radius one.
pub fn simplex_path(s: &Simplex, u: &Point, v: &Point) -> Result<StepPath> {
    let tol = Tolerances::default();
    if s.order() < 2 {
        return Err(Error::Precondition("affine dimension must be at least 2".into()));
    }
    let r = meb(s.vertices())?.radius;
    if (r - 1.0).abs() > tol.support_eps {
        return Err(Error::Precondition(format!("simplex radius {r} is not one")));
    }
    convex_path(&ConvexBody::from(s.clone()), u, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn regular(d: usize) -> Simplex {
        // standard simplex in the hyperplane sum = 1, shifted and scaled to radius one
        let n = d + 1;
        let c = 1.0 / n as f64;
        let r = ((1.0 - c) * (1.0 - c) + (n - 1) as f64 * c * c).sqrt();
        let verts = (0..n)
            .map(|i| {
                Point::new(
                    (0..n)
                        .map(|k| ((if k == i { 1.0 } else { 0.0 }) - c) / r)
                        .collect(),
                )
                .unwrap()
            })
            .collect();
        // embedded in dimension d + 1, which is fine for an order-d simplex
        Simplex::new(verts).unwrap()
    }

    #[test]
    fn regular_triangle_graph_is_complete() {
        let g = radius_graph(&regular(2)).unwrap();
        assert_eq!(g.nodes.len(), 3);
        assert_eq!(g.edges.len(), 3);
        assert!(g.is_connected());
        assert_eq!(g.eccentricity(0), Some(1));
    }

    #[test]
    fn right_triangle_graph() {
        let s = Simplex::new(vec![
            Point::xy(-1.0, 0.0),
            Point::xy(1.0, 0.0),
            Point::xy(0.0, 1.0),
        ])
        .unwrap();
        let g = radius_graph(&s).unwrap();
        assert_eq!(g.nodes.len(), 3);
        assert_eq!(g.edges, vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn simplex_path_regular_tetrahedron() {
        let s = regular(3);
        let v = s.vertices();
        let path = simplex_path(&s, &v[0], &v[1]).unwrap();
        assert!(path.max_step_error() <= 1e-9);
        let c = s.centroid();
        let path = simplex_path(&s, &c, &v[2]).unwrap();
        assert!(path.max_step_error() <= 1e-9);
    }

    #[test]
    fn simplex_path_preconditions() {
        let s = Simplex::new(vec![Point::xy(0.0, 0.0), Point::xy(3.0, 0.0), Point::xy(1.0, 1.0)])
            .unwrap();
        assert!(matches!(
            simplex_path(&s, &Point::xy(0.0, 0.0), &Point::xy(3.0, 0.0)),
            Err(Error::Precondition(_))
        ));
        let seg = Simplex::new(vec![Point::xy(-1.0, 0.0), Point::xy(1.0, 0.0)]).unwrap();
        assert!(simplex_path(&seg, &Point::xy(-1.0, 0.0), &Point::xy(1.0, 0.0)).is_err());
    }

    fn well_centered(d: usize) -> impl Strategy<Value = Simplex> {
        prop::collection::vec(prop::collection::vec(-1.0..1.0f64, d), d + 1).prop_filter_map(
            "needs a well-centered simplex",
            move |raw| {
                let verts: Vec<Point> = raw
                    .into_iter()
                    .map(|v| Point::new(v).unwrap().normalized())
                    .collect::<Option<_>>()?;
                let s = Simplex::new(verts).ok()?;
                let (b, _) = s.barycentric(&Point::origin(d));
                if b.iter().all(|w| *w >= 0.05) {
                    Some(s)
                } else {
                    None
                }
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn well_centered_graph_connected(s in (2usize..=5).prop_flat_map(well_centered)) {
            let g = radius_graph(&s).unwrap();
            prop_assert_eq!(g.nodes.len(), s.vertices().len());
            prop_assert!(g.is_connected());
        }

        #[test]
        fn well_centered_paths_valid(s in (2usize..=4).prop_flat_map(well_centered), a in 0.0..1.0f64) {
            let v = s.vertices();
            let u = Point::lerp(&v[0], &s.centroid(), a);
            let path = simplex_path(&s, &u, &v[1]).unwrap();
            prop_assert!(path.max_step_error() <= 1e-9);
            for q in path.points() {
                prop_assert!(s.contains(q, 1e-9));
            }
        }
    }
}
