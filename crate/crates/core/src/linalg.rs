//! Small dense linear-algebra helpers on top of nalgebra: nonnegative least
//! squares, convex-combination feasibility, affine rank and Carathéodory
//! reduction.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::geom::Point;

/// Lawson–Hanson active-set NNLS: `argmin ||A x - b||` subject to `x >= 0`.
pub fn nnls(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let n = a.ncols();
    let mut x = DVector::<f64>::zeros(n);
    let mut passive = vec![false; n];
    let scale = a.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    let tol = 1e-16 * scale * scale * (n.max(1) as f64);

    for _outer in 0..(3 * n + 10) {
        let w = a.transpose() * (b - a * &x);
        let candidate = (0..n)
            .filter(|&j| !passive[j])
            .max_by(|&i, &j| w[i].total_cmp(&w[j]));
        let Some(j) = candidate else { break };
        if w[j] <= tol {
            break;
        }
        passive[j] = true;

        for _inner in 0..(3 * n + 10) {
            let idx: Vec<usize> = (0..n).filter(|&i| passive[i]).collect();
            let sub = a.select_columns(&idx);
            let s_sub = lstsq(&sub, b);
            let mut s = DVector::<f64>::zeros(n);
            for (k, &i) in idx.iter().enumerate() {
                s[i] = s_sub[k];
            }
            if idx.iter().all(|&i| s[i] > 0.0) {
                x = s;
                break;
            }
            let mut alpha = f64::INFINITY;
            for &i in &idx {
                if s[i] <= 0.0 {
                    let denom = x[i] - s[i];
                    if denom > 0.0 {
                        alpha = alpha.min(x[i] / denom);
                    }
                }
            }
            if !alpha.is_finite() {
                alpha = 0.0;
            }
            x = &x + (&s - &x) * alpha;
            for &i in &idx {
                if x[i] <= 1e-15 {
                    x[i] = 0.0;
                    passive[i] = false;
                }
            }
        }
    }
    x
}

fn lstsq(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    // QR is markedly more accurate than nalgebra's SVD solve on the skewed
    // columns produced by the weighted affine row; SVD covers rank deficiency
    if a.ncols() <= a.nrows() {
        let qr = a.clone().qr();
        let r = qr.r();
        let diag = r.diagonal();
        let rmax = diag.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if diag.iter().all(|v| v.abs() > 1e-12 * rmax) {
            if let Some(x) = r.solve_upper_triangular(&(qr.q().transpose() * b)) {
                return x;
            }
        }
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().fold(0.0_f64, |m, v| m.max(*v));
    svd.solve(b, 1e-13 * smax.max(1e-300))
        .unwrap_or_else(|_| DVector::zeros(a.ncols()))
}

/// Best convex-combination weights for `target` over `points`, with the
/// residual `||sum λ_i p_i - target||` plus the affine-sum violation.
pub fn convex_weights(points: &[Point], target: &Point) -> (Vec<f64>, f64) {
    let d = target.dim();
    let n = points.len();
    if n == 0 {
        return (vec![], f64::INFINITY);
    }
    // the affine row is weighted heavily so the fit is a projection onto the hull
    let w = affine_row_weight(points, target);
    let mut a = DMatrix::<f64>::zeros(d + 1, n);
    for (j, p) in points.iter().enumerate() {
        for i in 0..d {
            a[(i, j)] = p.coords()[i] - target.coords()[i];
        }
        a[(d, j)] = w;
    }
    let mut b = DVector::<f64>::zeros(d + 1);
    b[d] = w;
    let x = nnls(&a, &b);
    let sum: f64 = x.iter().sum();
    let mut lambda: Vec<f64> = x.iter().copied().collect();
    if sum > 0.0 {
        for l in &mut lambda {
            *l /= sum;
        }
    }
    let residual = residual_of(points, target, &lambda) + (sum - 1.0).abs();
    (lambda, residual)
}

fn affine_row_weight(points: &[Point], target: &Point) -> f64 {
    let spread = points.iter().map(|p| p.dist(target)).fold(1.0_f64, f64::max);
    1e3 * spread
}

fn residual_of(points: &[Point], target: &Point, lambda: &[f64]) -> f64 {
    let d = target.dim();
    let mut acc = vec![0.0; d];
    for (p, l) in points.iter().zip(lambda) {
        for (a, c) in acc.iter_mut().zip(p.coords()) {
            *a += l * c;
        }
    }
    acc.iter()
        .zip(target.coords())
        .map(|(a, t)| (a - t) * (a - t))
        .sum::<f64>()
        .sqrt()
}

/// Nonnegative combination `target = sum λ_i p_i + sum μ_j r_j` with
/// `sum λ_i = 1`, `λ, μ >= 0`; returns `(λ, μ, residual)`.
pub fn conic_weights(points: &[Point], rays: &[Point], target: &Point) -> (Vec<f64>, Vec<f64>, f64) {
    let d = target.dim();
    let (n, m) = (points.len(), rays.len());
    if n == 0 {
        return (vec![], vec![0.0; m], f64::INFINITY);
    }
    let w = affine_row_weight(points, target);
    let mut a = DMatrix::<f64>::zeros(d + 1, n + m);
    for (j, p) in points.iter().enumerate() {
        for i in 0..d {
            a[(i, j)] = p.coords()[i] - target.coords()[i];
        }
        a[(d, j)] = w;
    }
    for (j, r) in rays.iter().enumerate() {
        for i in 0..d {
            a[(i, n + j)] = r.coords()[i];
        }
    }
    let mut b = DVector::<f64>::zeros(d + 1);
    b[d] = w;
    let x = nnls(&a, &b);
    let r = (&a * &x - &b).norm();
    (
        x.iter().take(n).copied().collect(),
        x.iter().skip(n).copied().collect(),
        r,
    )
}

/// Rank of the difference set `{p_i - p_0}`.
pub fn affine_rank(points: &[Point], tol: f64) -> usize {
    if points.len() < 2 {
        return 0;
    }
    let d = points[0].dim();
    let mut m = DMatrix::<f64>::zeros(d, points.len() - 1);
    for (j, p) in points[1..].iter().enumerate() {
        for i in 0..d {
            m[(i, j)] = p.coords()[i] - points[0].coords()[i];
        }
    }
    let sv = m.singular_values();
    let smax = sv.iter().fold(0.0_f64, |a, v| a.max(*v));
    let thresh = tol * smax.max(1.0);
    sv.iter().filter(|&&s| s > thresh).count()
}

/// Carathéodory reduction: given positive weights expressing a point as a
/// convex combination, repeatedly cancel along an affine dependency until the
/// remaining points are affinely independent. Returns retained indices and
/// their weights (all above `drop_below`).
pub fn caratheodory(points: &[Point], weights: &[f64], drop_below: f64) -> (Vec<usize>, Vec<f64>) {
    let mut idx: Vec<usize> = (0..points.len()).filter(|&i| weights[i] > drop_below).collect();
    let mut w: Vec<f64> = idx.iter().map(|&i| weights[i]).collect();
    normalize(&mut w);
    let d = points.first().map_or(0, |p| p.dim());
    for _ in 0..points.len() + 1 {
        let k = idx.len();
        if k <= 1 {
            break;
        }
        let sub: Vec<Point> = idx.iter().map(|&i| points[i].clone()).collect();
        if affine_rank(&sub, 1e-10) + 1 == k {
            break;
        }
        // null vector of [p_i; 1]
        let mut m = DMatrix::<f64>::zeros(d + 1, k);
        for (j, p) in sub.iter().enumerate() {
            for i in 0..d {
                m[(i, j)] = p.coords()[i];
            }
            m[(d, j)] = 1.0;
        }
        let gram = m.transpose() * &m;
        let eig = SymmetricEigen::new(gram);
        let (imin, _) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("nonempty");
        let mut mu: Vec<f64> = eig.eigenvectors.column(imin).iter().copied().collect();
        if !mu.iter().any(|&v| v > 1e-14) {
            for v in &mut mu {
                *v = -*v;
            }
        }
        let mut t = f64::INFINITY;
        for (wi, mi) in w.iter().zip(&mu) {
            if *mi > 1e-14 {
                t = t.min(wi / mi);
            }
        }
        if !t.is_finite() {
            break;
        }
        for (wi, mi) in w.iter_mut().zip(&mu) {
            *wi -= t * mi;
        }
        let keep: Vec<usize> = (0..k).filter(|&j| w[j] > drop_below).collect();
        idx = keep.iter().map(|&j| idx[j]).collect();
        w = keep.iter().map(|&j| w[j]).collect();
        normalize(&mut w);
    }
    (idx, w)
}

fn normalize(w: &mut [f64]) {
    let s: f64 = w.iter().sum();
    if s > 0.0 {
        for v in w.iter_mut() {
            *v /= s;
        }
    }
}
