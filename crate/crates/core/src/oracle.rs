//! Brute-force check: a grid over the body with edges between nodes whose
//! distance is within `δ` of one.
//!
//! Nodes are grid points inside the body. Edges are never stored; the
//! neighbours of a node are found through a fixed stencil of integer
//! offsets `o` with `| |o| h - 1 | <= δ`. Grid connectivity is evidence for
//! connection claims only: a coarse grid both invents and misses edges.

use std::collections::VecDeque;
use std::fmt;

use serde::Serialize;

use crate::convex::ConvexBody;
use crate::error::{Error, Result};
use crate::geom::{Point, Tolerances};
use crate::pathfinder::StepPath;
use crate::planar::{body_halfplanes, inside};

pub const DEFAULT_NODE_CAP: usize = 2_000_000;

const NO_NODE: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub struct GridGraph {
    h: f64,
    delta: f64,
    origin: Vec<f64>,
    counts: Vec<usize>,
    /// Grid index to node id.
    node_of: Vec<u32>,
    /// Node id to grid index.
    nodes: Vec<usize>,
    stencil: Vec<Vec<i64>>,
    representable: bool,
}

/// Grid on `body` (dimension at most 3) with spacing `h` and edge slack `delta`.
pub fn build_grid_graph(body: &ConvexBody, h: f64, delta: f64) -> Result<GridGraph> {
    build_grid_graph_capped(body, h, delta, DEFAULT_NODE_CAP)
}

pub fn build_grid_graph_capped(body: &ConvexBody, h: f64, delta: f64, cap: usize) -> Result<GridGraph> {
    if !(h > 0.0 && h.is_finite()) || !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::InvalidParameter("spacing must be positive and slack nonnegative".into()));
    }
    let d = body.dim();
    if d > 3 {
        return Err(Error::Unsupported("grid oracle is limited to dimension 3".into()));
    }
    let (lo, hi) = body.bounding_box()?;
    let counts: Vec<usize> = (0..d)
        .map(|i| ((hi.coords()[i] - lo.coords()[i]) / h + 1e-9).floor() as usize + 1)
        .collect();
    let total = counts.iter().try_fold(1usize, |a, &c| a.checked_mul(c)).unwrap_or(usize::MAX);
    if total > cap {
        return Err(Error::GridTooLarge { nodes: total, cap });
    }
    let origin = lo.coords().to_vec();
    let tol = Tolerances::default().geom_eps;
    let planes = body_halfplanes(body);
    let mut node_of = vec![NO_NODE; total];
    let mut nodes = vec![];
    let mut idx = vec![0usize; d];
    for (g, slot) in node_of.iter_mut().enumerate() {
        unflatten(g, &counts, &mut idx);
        let coords: Vec<f64> = (0..d).map(|i| origin[i] + idx[i] as f64 * h).collect();
        let is_in = match &planes {
            Some(pl) => inside(pl, [coords[0], coords[1]], tol),
            None => body.contains(&Point::raw(coords), tol),
        };
        if is_in {
            *slot = nodes.len() as u32;
            nodes.push(g);
        }
    }
    if nodes.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(GridGraph {
        h,
        delta,
        origin,
        stencil: stencil(d, h, delta),
        counts,
        node_of,
        nodes,
        representable: delta >= h * (d as f64).sqrt(),
    })
}

fn unflatten(mut g: usize, counts: &[usize], out: &mut [usize]) {
    for (o, &c) in out.iter_mut().zip(counts) {
        *o = g % c;
        g /= c;
    }
}

fn stencil(d: usize, h: f64, delta: f64) -> Vec<Vec<i64>> {
    let r = ((1.0 + delta) / h).ceil() as i64;
    let mut out = vec![];
    let mut cur = vec![-r; d];
    if d == 0 {
        return out;
    }
    loop {
        let len = cur.iter().map(|&o| (o * o) as f64).sum::<f64>().sqrt() * h;
        if (len - 1.0).abs() <= delta {
            out.push(cur.clone());
        }
        let mut i = 0;
        loop {
            if i == d {
                return out;
            }
            cur[i] += 1;
            if cur[i] <= r {
                break;
            }
            cur[i] = -r;
            i += 1;
        }
    }
}

impl GridGraph {
    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn dim(&self) -> usize {
        self.counts.len()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Whether `δ >= h√d`, so every unit step between cells has an edge.
    pub fn representable(&self) -> bool {
        self.representable
    }

    fn grid_index(&self, g: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim()];
        unflatten(g, &self.counts, &mut idx);
        idx
    }

    pub fn node_point(&self, node: usize) -> Point {
        let idx = self.grid_index(self.nodes[node]);
        Point::raw(
            idx.iter()
                .zip(&self.origin)
                .map(|(&i, o)| o + i as f64 * self.h)
                .collect(),
        )
    }

    fn for_each_neighbor(&self, node: usize, mut f: impl FnMut(usize)) {
        let idx = self.grid_index(self.nodes[node]);
        'offsets: for off in &self.stencil {
            let mut g = 0usize;
            let mut stride = 1usize;
            for i in 0..idx.len() {
                let c = idx[i] as i64 + off[i];
                if c < 0 || c >= self.counts[i] as i64 {
                    continue 'offsets;
                }
                g += c as usize * stride;
                stride *= self.counts[i];
            }
            let n = self.node_of[g];
            if n != NO_NODE {
                f(n as usize);
            }
        }
    }

    pub fn neighbors(&self, node: usize) -> Vec<usize> {
        let mut out = vec![];
        self.for_each_neighbor(node, |n| out.push(n));
        out
    }

    pub fn degree(&self, node: usize) -> usize {
        let mut k = 0;
        self.for_each_neighbor(node, |_| k += 1);
        k
    }

    /// Nearest node to `p`, ties to the lexicographically smallest grid
    /// index.
    pub fn snap(&self, body: &ConvexBody, p: &Point) -> Result<usize> {
        p.check_dim(self.dim())?;
        if !body.contains(p, Tolerances::default().geom_eps) {
            return Err(Error::OutsideBody);
        }
        let d = self.dim();
        let base: Vec<i64> = (0..d)
            .map(|i| ((p.coords()[i] - self.origin[i]) / self.h).round() as i64)
            .collect();
        let max_r = self.counts.iter().copied().max().unwrap_or(1) as i64;
        for r in 1..=max_r {
            let mut best: Option<(f64, Vec<i64>, usize)> = None;
            let mut cur = vec![-r; d];
            loop {
                let cand: Vec<i64> = (0..d).map(|i| base[i] + cur[i]).collect();
                if let Some(g) = self.flat(&cand) {
                    let n = self.node_of[g];
                    if n != NO_NODE {
                        let q = self.node_point(n as usize);
                        let dist = q.dist(p);
                        let better = match &best {
                            None => true,
                            Some((bd, bi, _)) => dist < *bd || (dist == *bd && cand < *bi),
                        };
                        if better {
                            best = Some((dist, cand, n as usize));
                        }
                    }
                }
                let mut i = 0;
                loop {
                    if i == d {
                        break;
                    }
                    cur[i] += 1;
                    if cur[i] <= r {
                        break;
                    }
                    cur[i] = -r;
                    i += 1;
                }
                if i == d {
                    break;
                }
            }
            if let Some((_, _, n)) = best {
                return Ok(n);
            }
        }
        Err(Error::OutsideBody)
    }

    fn flat(&self, idx: &[i64]) -> Option<usize> {
        let mut g = 0usize;
        let mut stride = 1usize;
        for (i, &c) in idx.iter().enumerate() {
            if c < 0 || c >= self.counts[i] as i64 {
                return None;
            }
            g += c as usize * stride;
            stride *= self.counts[i];
        }
        Some(g)
    }

    /// Component id of every node and the number of components.
    pub fn components(&self) -> (Vec<u32>, usize) {
        let mut label = vec![u32::MAX; self.nodes.len()];
        let mut count = 0u32;
        let mut queue = VecDeque::new();
        for s in 0..self.nodes.len() {
            if label[s] != u32::MAX {
                continue;
            }
            label[s] = count;
            queue.push_back(s);
            while let Some(i) = queue.pop_front() {
                self.for_each_neighbor(i, |j| {
                    if label[j] == u32::MAX {
                        label[j] = count;
                        queue.push_back(j);
                    }
                });
            }
            count += 1;
        }
        (label, count as usize)
    }

    /// BFS parents from `from` until `to` is labelled.
    fn bfs(&self, from: usize, to: usize) -> Option<Vec<u32>> {
        let mut parent = vec![u32::MAX; self.nodes.len()];
        parent[from] = from as u32;
        let mut queue = VecDeque::from([from]);
        while let Some(i) = queue.pop_front() {
            if i == to {
                return Some(parent);
            }
            self.for_each_neighbor(i, |j| {
                if parent[j] == u32::MAX {
                    parent[j] = i as u32;
                    queue.push_back(j);
                }
            });
        }
        None
    }

    /// Node path between two nodes, or `None` when unreachable.
    pub fn node_path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let parent = self.bfs(from, to)?;
        let mut path = vec![to];
        let mut cur = to;
        while cur != from {
            cur = parent[cur] as usize;
            path.push(cur);
        }
        path.reverse();
        Some(path)
    }
}

/// Hop count between the nodes nearest `u` and `v`; `None` if unreachable.
pub fn bfs_distance(g: &GridGraph, body: &ConvexBody, u: &Point, v: &Point) -> Result<Option<usize>> {
    let (a, b) = (g.snap(body, u)?, g.snap(body, v)?);
    Ok(g.node_path(a, b).map(|p| p.len() - 1))
}

/// Grid points of a shortest grid path between `u` and `v`.
pub fn witness_path(g: &GridGraph, body: &ConvexBody, u: &Point, v: &Point) -> Result<Option<Vec<Point>>> {
    let (a, b) = (g.snap(body, u)?, g.snap(body, v)?);
    Ok(g.node_path(a, b)
        .map(|p| p.into_iter().map(|n| g.node_point(n)).collect()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairDistance {
    pub u: Point,
    pub v: Point,
    pub distance: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub connected_components: usize,
    pub node_count: usize,
    pub representable: bool,
    pub pair_distances: Vec<PairDistance>,
    pub witness_paths: Vec<Option<Vec<Point>>>,
}

impl OracleReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("kind,index,u,v,value\n");
        out.push_str(&format!("components,,,,{}\n", self.connected_components));
        out.push_str(&format!("nodes,,,,{}\n", self.node_count));
        let coords = |p: &Point| {
            p.coords()
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        for (i, pd) in self.pair_distances.iter().enumerate() {
            let value = pd.distance.map_or("unreachable".to_string(), |d| d.to_string());
            out.push_str(&format!("distance,{i},{},{},{value}\n", coords(&pd.u), coords(&pd.v)));
        }
        out
    }
}

/// Component count plus BFS distances (and optionally grid paths) for `pairs`.
pub fn oracle_report(
    g: &GridGraph,
    body: &ConvexBody,
    pairs: &[(Point, Point)],
    with_paths: bool,
) -> Result<OracleReport> {
    let (_, count) = g.components();
    let mut pair_distances = vec![];
    let mut witness_paths = vec![];
    for (u, v) in pairs {
        let (a, b) = (g.snap(body, u)?, g.snap(body, v)?);
        let path = g.node_path(a, b);
        pair_distances.push(PairDistance {
            u: u.clone(),
            v: v.clone(),
            distance: path.as_ref().map(|p| p.len() - 1),
        });
        if with_paths {
            witness_paths.push(path.map(|p| p.into_iter().map(|n| g.node_point(n)).collect()));
        }
    }
    Ok(OracleReport {
        connected_components: count,
        node_count: g.node_count(),
        representable: g.representable(),
        pair_distances,
        witness_paths,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Violation {
    StepLength { index: usize, length: f64 },
    Outside { index: usize, point: Point },
    Dimension { index: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::StepLength { index, length } => {
                write!(f, "step {index} has length {length}")
            }
            Violation::Outside { index, point } => write!(f, "point {index} = {point} is outside"),
            Violation::Dimension { index } => write!(f, "point {index} has the wrong dimension"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

/// Checks every step length against one and every point against the body,
/// both within `tol`.
pub fn validate_path(body: &ConvexBody, path: &StepPath, tol: f64) -> ValidationReport {
    let mut violations = vec![];
    for (i, p) in path.points().iter().enumerate() {
        if p.dim() != body.dim() {
            violations.push(Violation::Dimension { index: i });
        } else if !body.contains(p, tol) {
            violations.push(Violation::Outside {
                index: i,
                point: p.clone(),
            });
        }
    }
    for (i, w) in path.points().windows(2).enumerate() {
        if w[0].dim() != w[1].dim() {
            continue;
        }
        let length = w[0].dist(&w[1]);
        if !((length - 1.0).abs() <= tol) {
            violations.push(Violation::StepLength { index: i, length });
        }
    }
    ValidationReport {
        valid: violations.is_empty(),
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pathfinder::{rectangle_wiggle_path, StepLabel};

    fn square(l: f64) -> ConvexBody {
        ConvexBody::cube(2, l).unwrap()
    }

    #[test]
    fn critical_square_center_has_corner_edges() {
        let body = square(2f64.sqrt());
        let g = build_grid_graph(&body, 0.05, 0.08).unwrap();
        let c = g.snap(&body, &Point::xy(0.5f64.sqrt(), 0.5f64.sqrt())).unwrap();
        assert!(g.degree(c) >= 1);
        assert!(g.representable());
    }

    #[test]
    fn small_square_center_isolated() {
        let body = square(1.2);
        let g = build_grid_graph(&body, 0.05, 0.05).unwrap();
        let c = g.snap(&body, &Point::xy(0.6, 0.6)).unwrap();
        assert_eq!(g.degree(c), 0);
        assert!(!g.representable());
    }

    #[test]
    fn cap_and_dimension_errors() {
        let body = square(2.0);
        assert!(matches!(
            build_grid_graph_capped(&body, 0.01, 0.02, 1000),
            Err(Error::GridTooLarge { .. })
        ));
        let cube4 = ConvexBody::cube(4, 1.0).unwrap();
        assert!(build_grid_graph(&cube4, 0.5, 1.0).is_err());
        assert!(build_grid_graph(&body, 0.0, 0.1).is_err());
    }

    #[test]
    fn distances() {
        let body = square(2f64.sqrt());
        let g = build_grid_graph(&body, 0.05, 0.08).unwrap();
        let u = Point::xy(0.0, 0.0);
        assert_eq!(bfs_distance(&g, &body, &u, &u).unwrap(), Some(0));
        let s = 2f64.sqrt();
        let d = bfs_distance(&g, &body, &u, &Point::xy(s, s)).unwrap().unwrap();
        assert!(d >= 2);
        let big = square(2.0);
        let g = build_grid_graph(&big, 0.05, 0.1).unwrap();
        let d = bfs_distance(&g, &big, &Point::xy(0.1, 0.1), &Point::xy(1.9, 1.9)).unwrap();
        assert!(d.is_some());
        assert!(matches!(
            bfs_distance(&g, &big, &Point::xy(3.0, 0.0), &u),
            Err(Error::OutsideBody)
        ));
    }

    #[test]
    fn validator_examples() {
        let body = square(2f64.sqrt());
        let ok = StepPath::from_parts(
            vec![Point::xy(0.0, 0.0), Point::xy(1.0, 0.0)],
            vec![StepLabel::Translate],
        )
        .unwrap();
        assert!(validate_path(&body, &ok, 1e-9).valid);
        let short = StepPath::from_parts(
            vec![Point::xy(0.0, 0.0), Point::xy(0.5, 0.0)],
            vec![StepLabel::Translate],
        )
        .unwrap();
        let r = validate_path(&body, &short, 1e-9);
        assert!(!r.valid);
        assert!(matches!(r.violations[0], Violation::StepLength { index: 0, .. }));
        let wiggle = rectangle_wiggle_path(1.0, 0.6, 0.0, 0.4).unwrap();
        let rect = ConvexBody::hyperrectangle(vec![2.0, 0.6]).unwrap();
        assert!(validate_path(&rect, &wiggle, 1e-9).valid);
    }

    #[test]
    fn grid_is_deterministic() {
        let body = ConvexBody::simplex(vec![Point::xy(0.0, 0.0), Point::xy(2.0, 0.0), Point::xy(0.5, 1.5)])
            .unwrap();
        let a = build_grid_graph(&body, 0.05, 0.1).unwrap();
        let b = build_grid_graph(&body, 0.05, 0.1).unwrap();
        assert_eq!(a.nodes, b.nodes);
        assert_eq!(a.components(), b.components());
    }
}
