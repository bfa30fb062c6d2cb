//! Seeded fixtures shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unitdist::{ConvexBody, Point};

pub fn point(c: &[f64]) -> Point {
    Point::new(c.to_vec()).expect("finite coordinates")
}

/// Convex polygon whose vertices sit on a circle of the given radius at
/// random angles.
pub fn random_polygon(seed: u64, vertices: usize, radius: f64) -> ConvexBody {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut angles: Vec<f64> = (0..vertices)
        .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
        .collect();
    angles.sort_by(f64::total_cmp);
    let pts = angles
        .iter()
        .map(|a| point(&[radius * a.cos(), radius * a.sin()]))
        .collect();
    ConvexBody::vpolytope(pts).expect("nondegenerate polygon")
}

/// Pairs of points drawn uniformly from the box `[0, side]^d`.
pub fn box_pairs(seed: u64, d: usize, side: f64, n: usize) -> Vec<(Point, Point)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || point(&(0..d).map(|_| rng.random_range(0.0..=side)).collect::<Vec<_>>());
    (0..n).map(|_| (draw(), draw())).collect()
}

/// Pairs drawn as convex combinations of the body's vertices.
pub fn hull_pairs(seed: u64, body: &ConvexBody, n: usize) -> Vec<(Point, Point)> {
    let verts = body.vertices().expect("polytope");
    let d = body.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || {
        let w: Vec<f64> = verts.iter().map(|_| rng.random_range(0.01..1.0)).collect();
        let total: f64 = w.iter().sum();
        let mut c = vec![0.0; d];
        for (v, wi) in verts.iter().zip(&w) {
            for (ci, vi) in c.iter_mut().zip(v.coords()) {
                *ci += wi / total * vi;
            }
        }
        point(&c)
    };
    (0..n).map(|_| (draw(), draw())).collect()
}
