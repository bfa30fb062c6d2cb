//! The bounded fixed-step random walk: from the current point, step to a
//! uniformly chosen point of the body at distance one.
//!
//! In the plane the feasible directions form a union of angle intervals,
//! one constraint per edge of the body; intervals narrower than 1e-9 are
//! isolated directions and get sampled as atoms. In 3D directions are drawn
//! by rejection from the sphere.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, UnitSphere};
use rayon::prelude::*;
use serde::Serialize;

use crate::convex::ConvexBody;
use crate::error::{Error, Result};
use crate::geom::{Point, Tolerances};
use crate::planar::{body_halfplanes, HalfPlane};

/// Intervals narrower than this collapse to a single direction.
pub const ATOM_WIDTH: f64 = 1e-9;

/// Slack added on both sides of every allowed interval.
const ANGLE_SLACK: f64 = 1e-12;

/// Consecutive rejections before a 3D walk gives up.
pub const MAX_REJECTIONS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DirectionKind {
    ContinuousArcs,
    FiniteSet,
    Empty,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibleDirections {
    pub kind: DirectionKind,
    /// Angle intervals `[a, b]` with `b - a >= ATOM_WIDTH`; `a` may be negative
    /// for an interval wrapping through angle zero.
    pub arcs: Vec<(f64, f64)>,
    /// Unit offsets of the isolated feasible directions.
    pub atoms: Vec<Point>,
}

impl FeasibleDirections {
    pub fn total_measure(&self) -> f64 {
        self.arcs.iter().map(|(a, b)| b - a).sum()
    }
}

fn intersect(cur: &[(f64, f64)], allowed: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out = vec![];
    for &(a, b) in cur {
        for &(c, d) in allowed {
            let (lo, hi) = (a.max(c), b.min(d));
            if lo <= hi {
                out.push((lo, hi));
            }
        }
    }
    out.sort_by(|x, y| x.0.total_cmp(&y.0));
    out
}

/// Allowed angles `θ` with `n·(cos θ, sin θ) <= s`, as intervals in `[0, 2π]`.
fn allowed(h: &HalfPlane, s: f64) -> Vec<(f64, f64)> {
    if s >= 1.0 {
        return vec![(0.0, TAU)];
    }
    let tn = h.n[1].atan2(h.n[0]);
    let a = s.max(-1.0).acos() - ANGLE_SLACK;
    let lo = (tn + a).rem_euclid(TAU);
    let len = TAU - 2.0 * a;
    if len <= 0.0 {
        return vec![];
    }
    let hi = lo + len;
    if hi <= TAU {
        vec![(lo, hi)]
    } else {
        vec![(0.0, hi - TAU), (lo, TAU)]
    }
}

fn directions_from_planes(planes: &[HalfPlane], p: [f64; 2]) -> FeasibleDirections {
    let mut cur = vec![(0.0, TAU)];
    for h in planes {
        cur = intersect(&cur, &allowed(h, h.slack(p)));
        if cur.is_empty() {
            break;
        }
    }
    // join pieces meeting at angle zero
    if cur.len() >= 2 && cur[0].0 <= 0.0 && cur[cur.len() - 1].1 >= TAU {
        let last = cur.pop().expect("len >= 2");
        cur[0].0 = last.0 - TAU;
    }
    let (arcs, thin): (Vec<_>, Vec<_>) = cur.into_iter().partition(|(a, b)| b - a >= ATOM_WIDTH);
    if !arcs.is_empty() {
        return FeasibleDirections {
            kind: DirectionKind::ContinuousArcs,
            arcs,
            atoms: vec![],
        };
    }
    let atoms: Vec<Point> = thin
        .iter()
        .map(|(a, b)| {
            let t = 0.5 * (a + b);
            Point::xy(t.cos(), t.sin())
        })
        .collect();
    FeasibleDirections {
        kind: if atoms.is_empty() {
            DirectionKind::Empty
        } else {
            DirectionKind::FiniteSet
        },
        arcs: vec![],
        atoms,
    }
}

/// Directions of the unit steps from `p` that stay in a bounded planar body.
pub fn feasible_directions(body: &ConvexBody, p: &Point) -> Result<FeasibleDirections> {
    if body.dim() != 2 {
        return Err(Error::Unsupported("feasible directions are planar".into()));
    }
    let tol = Tolerances::default().geom_eps;
    if !body.contains(p, tol) {
        return Err(Error::OutsideBody);
    }
    let pc = [p.coords()[0], p.coords()[1]];
    if let Some(planes) = body_halfplanes(body) {
        return Ok(directions_from_planes(&planes, pc));
    }
    // flat bodies: only the two directions along the segment can work
    let verts = body.vertices()?;
    let far = verts
        .iter()
        .max_by(|a, b| verts[0].dist(a).total_cmp(&verts[0].dist(b)))
        .expect("bodies have vertices");
    let atoms = match (far - &verts[0]).normalized() {
        Some(dir) => [dir.clone(), -&dir]
            .into_iter()
            .filter(|u| body.contains(&(p + u), tol))
            .collect(),
        None => vec![],
    };
    Ok(FeasibleDirections {
        kind: if atoms.is_empty() {
            DirectionKind::Empty
        } else {
            DirectionKind::FiniteSet
        },
        arcs: vec![],
        atoms,
    })
}

/// A uniform feasible unit offset, or `None` when there is none.
pub fn step_sample<R: Rng + ?Sized>(fd: &FeasibleDirections, rng: &mut R) -> Option<Point> {
    match fd.kind {
        DirectionKind::Empty => None,
        DirectionKind::FiniteSet => Some(fd.atoms[rng.random_range(0..fd.atoms.len())].clone()),
        DirectionKind::ContinuousArcs => {
            let mut t = rng.random::<f64>() * fd.total_measure();
            let mut theta = fd.arcs.last().expect("nonempty").1;
            for (a, b) in &fd.arcs {
                if t <= b - a {
                    theta = a + t;
                    break;
                }
                t -= b - a;
            }
            Some(Point::xy(theta.cos(), theta.sin()))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkConfig {
    pub body: ConvexBody,
    pub start: Point,
    pub steps: usize,
    pub runs: usize,
    pub seed: u64,
    pub record_trajectories: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum RunStatus {
    Completed,
    /// No feasible direction before step `step` (1-based).
    Stuck { step: usize },
    /// Rejection sampling gave up before step `step`.
    StuckNumeric { step: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WalkEnsemble {
    pub start: Point,
    pub steps: usize,
    pub runs: usize,
    pub seed: u64,
    pub final_positions: Vec<Point>,
    /// Steps actually taken per run.
    pub steps_taken: Vec<usize>,
    pub statuses: Vec<RunStatus>,
    pub trajectories: Option<Vec<Vec<Point>>>,
}

struct RunOutcome {
    last: Point,
    taken: usize,
    status: RunStatus,
    trajectory: Option<Vec<Point>>,
}

enum Stepper {
    Planar(Option<Vec<HalfPlane>>),
    Spatial,
}

fn run_one(cfg: &WalkConfig, stepper: &Stepper, run: usize) -> Result<RunOutcome> {
    let tol = Tolerances::default().geom_eps;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(run as u64);
    let mut p = cfg.start.clone();
    let mut traj = cfg.record_trajectories.then(|| vec![p.clone()]);
    let mut status = RunStatus::Completed;
    let mut taken = 0;
    for step in 1..=cfg.steps {
        let offset = match stepper {
            Stepper::Planar(Some(planes)) => {
                let fd = directions_from_planes(planes, [p.coords()[0], p.coords()[1]]);
                step_sample(&fd, &mut rng)
            }
            Stepper::Planar(None) => step_sample(&feasible_directions(&cfg.body, &p)?, &mut rng),
            Stepper::Spatial => {
                let mut found = None;
                for _ in 0..MAX_REJECTIONS {
                    let u: [f64; 3] = UnitSphere.sample(&mut rng);
                    let u = Point::raw(u.to_vec());
                    if cfg.body.contains(&(&p + &u), tol) {
                        found = Some(u);
                        break;
                    }
                }
                if found.is_none() {
                    status = RunStatus::StuckNumeric { step };
                    break;
                }
                found
            }
        };
        let Some(u) = offset else {
            status = RunStatus::Stuck { step };
            break;
        };
        let next = &p + &u;
        if !cfg.body.contains(&next, tol) || (next.dist(&p) - 1.0).abs() > tol {
            return Err(Error::Numerical(format!(
                "run {run} step {step} left the body or broke the unit length"
            )));
        }
        p = next;
        taken = step;
        if let Some(t) = traj.as_mut() {
            t.push(p.clone());
        }
    }
    Ok(RunOutcome {
        last: p,
        taken,
        status,
        trajectory: traj,
    })
}

/// Runs `cfg.runs` independent walks; run `i` draws from its own stream of
/// the seeded generator, so results do not depend on scheduling.
pub fn run_ensemble(cfg: &WalkConfig) -> Result<WalkEnsemble> {
    let d = cfg.body.dim();
    cfg.start.check_dim(d)?;
    if cfg.runs == 0 {
        return Err(Error::InvalidParameter("runs must be at least 1".into()));
    }
    if !cfg.body.contains(&cfg.start, Tolerances::default().geom_eps) {
        return Err(Error::OutsideBody);
    }
    let stepper = match d {
        2 => Stepper::Planar(body_halfplanes(&cfg.body)),
        3 => Stepper::Spatial,
        _ => return Err(Error::Unsupported("walks run in 2 or 3 dimensions".into())),
    };
    let outcomes: Vec<RunOutcome> = (0..cfg.runs)
        .into_par_iter()
        .map(|r| run_one(cfg, &stepper, r))
        .collect::<Result<_>>()?;
    let mut ens = WalkEnsemble {
        start: cfg.start.clone(),
        steps: cfg.steps,
        runs: cfg.runs,
        seed: cfg.seed,
        final_positions: Vec::with_capacity(cfg.runs),
        steps_taken: Vec::with_capacity(cfg.runs),
        statuses: Vec::with_capacity(cfg.runs),
        trajectories: cfg.record_trajectories.then(Vec::new),
    };
    for o in outcomes {
        ens.final_positions.push(o.last);
        ens.steps_taken.push(o.taken);
        ens.statuses.push(o.status);
        if let (Some(all), Some(t)) = (ens.trajectories.as_mut(), o.trajectory) {
            all.push(t);
        }
    }
    Ok(ens)
}

impl WalkEnsemble {
    /// `run_index,step,x,y[,z]` for the final positions.
    pub fn final_csv(&self) -> String {
        let d = self.start.dim();
        let mut out = String::from("run_index,step,x,y");
        if d == 3 {
            out.push_str(",z");
        }
        out.push('\n');
        for (i, (p, s)) in self.final_positions.iter().zip(&self.steps_taken).enumerate() {
            row(&mut out, i, *s, p);
        }
        out
    }

    /// Same columns, one row per recorded trajectory point.
    pub fn trajectory_csv(&self) -> Option<String> {
        let trajs = self.trajectories.as_ref()?;
        let mut out = String::from("run_index,step,x,y");
        if self.start.dim() == 3 {
            out.push_str(",z");
        }
        out.push('\n');
        for (i, t) in trajs.iter().enumerate() {
            for (s, p) in t.iter().enumerate() {
                row(&mut out, i, s, p);
            }
        }
        Some(out)
    }
}

fn row(out: &mut String, run: usize, step: usize, p: &Point) {
    out.push_str(&format!("{run},{step}"));
    for c in p.coords() {
        out.push_str(&format!(",{c}"));
    }
    out.push('\n');
}

/// Frequencies of final positions over a `bins × bins` grid on the
/// bounding box; row `j` holds the `j`-th band in `y`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram2d {
    pub bins: usize,
    pub lo: [f64; 2],
    pub hi: [f64; 2],
    pub freq: Vec<Vec<f64>>,
}

impl Histogram2d {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in self.freq.iter().rev() {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn histogram2d(ens: &WalkEnsemble, body: &ConvexBody, bins: usize) -> Result<Histogram2d> {
    if body.dim() != 2 {
        return Err(Error::Unsupported("histogram needs a planar body".into()));
    }
    if bins == 0 {
        return Err(Error::InvalidParameter("bins must be positive".into()));
    }
    let (lo, hi) = body.bounding_box()?;
    let lo = [lo.coords()[0], lo.coords()[1]];
    let hi = [hi.coords()[0], hi.coords()[1]];
    let mut counts = vec![vec![0.0; bins]; bins];
    let cell = |v: f64, a: f64, b: f64| {
        if b <= a {
            return 0;
        }
        (((v - a) / (b - a) * bins as f64).floor().max(0.0) as usize).min(bins - 1)
    };
    for p in &ens.final_positions {
        let (x, y) = (p.coords()[0], p.coords()[1]);
        counts[cell(y, lo[1], hi[1])][cell(x, lo[0], hi[0])] += 1.0;
    }
    let n = ens.final_positions.len().max(1) as f64;
    for row in &mut counts {
        for v in row.iter_mut() {
            *v /= n;
        }
    }
    Ok(Histogram2d {
        bins,
        lo,
        hi,
        freq: counts,
    })
}

/// Two-sample Kolmogorov–Smirnov statistic of the distances to `center`.
pub fn radial_ks_distance(a: &[Point], b: &[Point], center: &Point) -> f64 {
    let dists = |s: &[Point]| {
        let mut v: Vec<f64> = s.iter().map(|p| p.dist(center)).collect();
        v.sort_by(f64::total_cmp);
        v
    };
    let (da, db) = (dists(a), dists(b));
    if da.is_empty() || db.is_empty() {
        return if da.len() == db.len() { 0.0 } else { 1.0 };
    }
    let (na, nb) = (da.len() as f64, db.len() as f64);
    let (mut i, mut j, mut sup) = (0, 0, 0.0_f64);
    while i < da.len() && j < db.len() {
        let x = da[i].min(db[j]);
        while i < da.len() && da[i] <= x {
            i += 1;
        }
        while j < db.len() && db[j] <= x {
            j += 1;
        }
        sup = sup.max((i as f64 / na - j as f64 / nb).abs());
    }
    sup
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn square(l: f64) -> ConvexBody {
        ConvexBody::cube(2, l).unwrap()
    }

    #[test]
    fn critical_square_midpoint_has_four_corners() {
        let s = 2f64.sqrt();
        let fd = feasible_directions(&square(s), &Point::xy(s / 2.0, s / 2.0)).unwrap();
        assert_eq!(fd.kind, DirectionKind::FiniteSet);
        assert_eq!(fd.atoms.len(), 4);
        for a in &fd.atoms {
            let q = &Point::xy(s / 2.0, s / 2.0) + a;
            assert!(square(s).contains(&q, 1e-9));
        }
    }

    #[test]
    fn small_square_center_is_empty() {
        let fd = feasible_directions(&square(1.2), &Point::xy(0.6, 0.6)).unwrap();
        assert_eq!(fd.kind, DirectionKind::Empty);
    }

    #[test]
    fn corner_region_has_arcs() {
        let fd = feasible_directions(&square(2.0), &Point::xy(0.1, 0.1)).unwrap();
        assert_eq!(fd.kind, DirectionKind::ContinuousArcs);
        assert!(fd.total_measure() > 0.0);
        assert!(feasible_directions(&square(2.0), &Point::xy(3.0, 0.1)).is_err());
    }

    #[test]
    fn atom_draws_are_uniform() {
        let s = 2f64.sqrt();
        let fd = feasible_directions(&square(s), &Point::xy(s / 2.0, s / 2.0)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut counts = [0usize; 4];
        let n = 100_000;
        for _ in 0..n {
            let u = step_sample(&fd, &mut rng).unwrap();
            let k = fd.atoms.iter().position(|a| a == &u).unwrap();
            counts[k] += 1;
        }
        let e = n as f64 / 4.0;
        let chi2: f64 = counts.iter().map(|&c| (c as f64 - e).powi(2) / e).sum();
        // 3 degrees of freedom, p = 0.001
        assert!(chi2 < 16.27, "chi2 {chi2}");
    }

    #[test]
    fn half_circle_mean_angle() {
        let fd = FeasibleDirections {
            kind: DirectionKind::ContinuousArcs,
            arcs: vec![(0.0, std::f64::consts::PI)],
            atoms: vec![],
        };
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let n = 100_000;
        let mean: f64 = (0..n)
            .map(|_| {
                let u = step_sample(&fd, &mut rng).unwrap();
                u.coords()[1].atan2(u.coords()[0])
            })
            .sum::<f64>()
            / n as f64;
        let sigma = std::f64::consts::PI / 12f64.sqrt();
        assert!((mean - std::f64::consts::FRAC_PI_2).abs() < 3.0 * sigma / (n as f64).sqrt());
    }

    #[test]
    fn full_circle_is_balanced() {
        let fd = FeasibleDirections {
            kind: DirectionKind::ContinuousArcs,
            arcs: vec![(0.0, TAU)],
            atoms: vec![],
        };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 100_000;
        let mut m = [0.0; 2];
        for _ in 0..n {
            let u = step_sample(&fd, &mut rng).unwrap();
            m[0] += u.coords()[0] / n as f64;
            m[1] += u.coords()[1] / n as f64;
        }
        assert!(m[0].hypot(m[1]) < 0.01);
    }

    fn cfg(l: f64, start: Point, steps: usize, runs: usize, seed: u64) -> WalkConfig {
        WalkConfig {
            body: square(l),
            start,
            steps,
            runs,
            seed,
            record_trajectories: true,
        }
    }

    #[test]
    fn zero_steps_stay_put() {
        let c = cfg(2.0, Point::xy(0.1, 0.1), 0, 10, 5);
        let ens = run_ensemble(&c).unwrap();
        assert!(ens.final_positions.iter().all(|p| p == &c.start));
        let h = histogram2d(&ens, &c.body, 10).unwrap();
        let nonzero = h.freq.iter().flatten().filter(|v| **v > 0.0).count();
        assert_eq!(nonzero, 1);
        assert_abs_diff_eq!(h.freq[0][0], 1.0);
    }

    #[test]
    fn midpoint_walk_reaches_a_corner() {
        let s = 2f64.sqrt();
        let ens = run_ensemble(&cfg(s, Point::xy(s / 2.0, s / 2.0), 1, 50, 9)).unwrap();
        for p in &ens.final_positions {
            let c = p.coords();
            let at_corner = [0.0, s].iter().any(|x| (c[0] - x).abs() < 1e-9)
                && [0.0, s].iter().any(|y| (c[1] - y).abs() < 1e-9);
            assert!(at_corner, "{p}");
        }
    }

    #[test]
    fn disconnected_center_gets_stuck() {
        let ens = run_ensemble(&cfg(1.2, Point::xy(0.6, 0.6), 3, 4, 1)).unwrap();
        assert!(ens.statuses.iter().all(|s| *s == RunStatus::Stuck { step: 1 }));
    }

    #[test]
    fn seed_determinism_and_stream_independence() {
        let c = cfg(2.0, Point::xy(0.1, 0.1), 5, 200, 42);
        let a = run_ensemble(&c).unwrap();
        let b = run_ensemble(&c).unwrap();
        assert_eq!(a, b);
        let fewer = run_ensemble(&WalkConfig { runs: 50, ..c.clone() }).unwrap();
        assert_eq!(fewer.final_positions[..], a.final_positions[..50]);
    }

    #[test]
    fn cube_walk_in_3d() {
        let c = WalkConfig {
            body: ConvexBody::cube(3, 1.5).unwrap(),
            start: Point::new(vec![0.1, 0.1, 0.1]).unwrap(),
            steps: 5,
            runs: 20,
            seed: 4,
            record_trajectories: false,
        };
        let ens = run_ensemble(&c).unwrap();
        assert!(ens.statuses.iter().all(|s| *s == RunStatus::Completed));
        assert!(ens.final_csv().starts_with("run_index,step,x,y,z\n"));
    }

    #[test]
    fn ks_distance_basics() {
        let a: Vec<Point> = (0..10).map(|i| Point::xy(i as f64, 0.0)).collect();
        assert_eq!(radial_ks_distance(&a, &a, &Point::xy(0.0, 0.0)), 0.0);
        let b: Vec<Point> = (0..10).map(|i| Point::xy(i as f64 + 100.0, 0.0)).collect();
        assert_eq!(radial_ks_distance(&a, &b, &Point::xy(0.0, 0.0)), 1.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn walks_stay_inside(l in 1.0..3.0f64, x in 0.0..1.0f64, y in 0.0..1.0f64, seed in any::<u64>()) {
            let start = Point::xy(x * l, y * l);
            let ens = run_ensemble(&cfg(l, start, 10, 8, seed)).unwrap();
            for t in ens.trajectories.as_ref().unwrap() {
                for w in t.windows(2) {
                    prop_assert!((w[0].dist(&w[1]) - 1.0).abs() <= 1e-9);
                }
                for p in t {
                    prop_assert!(square(l).contains(p, 1e-9));
                }
            }
        }

        #[test]
        fn sampled_directions_are_feasible(x in 0.0..2.0f64, y in 0.0..2.0f64, seed in any::<u64>()) {
            let body = square(2.0);
            let p = Point::xy(x, y);
            let fd = feasible_directions(&body, &p).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            if let Some(u) = step_sample(&fd, &mut rng) {
                prop_assert!(body.contains(&(&p + &u), 1e-9));
            }
        }
    }
}
