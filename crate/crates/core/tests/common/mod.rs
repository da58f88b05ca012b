//! Reference implementations used as test oracles. None of them share code
//! with the library's solvers.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

pub fn combine(w: &[Vec<f64>], lambda: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; w[0].len()];
    for (p, &l) in w.iter().zip(lambda) {
        for (o, x) in out.iter_mut().zip(p) {
            *o += l * x;
        }
    }
    out
}

fn dist_at(w: &[Vec<f64>], lambda: &[f64], y: &[f64]) -> f64 {
    let mut d2 = 0.0;
    for (r, yr) in y.iter().enumerate() {
        let x: f64 = w.iter().zip(lambda).map(|(p, l)| l * p[r]).sum();
        d2 += (x - yr) * (x - yr);
    }
    d2.sqrt()
}

pub fn diameter(w: &[Vec<f64>]) -> f64 {
    let mut d: f64 = 0.0;
    for a in w {
        for b in w {
            d = d.max(dist(a, b));
        }
    }
    d
}

/// Visits every barycentric point with coordinates `lo[i] + k * step` for
/// free coordinates `1..n`, the first coordinate taking up the rest, inside
/// the box `[lo, hi]` and the simplex.
fn scan(w: &[Vec<f64>], y: &[f64], lo: &[f64], hi: &[f64], step: f64, best: &mut (f64, Vec<f64>)) {
    let n = w.len();
    let mut lambda = vec![0.0; n];
    #[allow(clippy::too_many_arguments)]
    fn rec(
        i: usize,
        w: &[Vec<f64>],
        y: &[f64],
        lo: &[f64],
        hi: &[f64],
        step: f64,
        lambda: &mut Vec<f64>,
        used: f64,
        best: &mut (f64, Vec<f64>),
    ) {
        let n = w.len();
        if i == n {
            lambda[0] = 1.0 - used;
            if lambda[0] < -1e-12 {
                return;
            }
            lambda[0] = lambda[0].max(0.0);
            let d = dist_at(w, lambda, y);
            if d < best.0 {
                *best = (d, lambda.clone());
            }
            return;
        }
        let mut k = 0usize;
        loop {
            let v = lo[i] + k as f64 * step;
            if v > hi[i] + 1e-12 || used + v > 1.0 + 1e-12 {
                break;
            }
            lambda[i] = v.min(1.0);
            rec(i + 1, w, y, lo, hi, step, lambda, used + lambda[i], best);
            k += 1;
        }
    }
    rec(1, w, y, lo, hi, step, &mut lambda, 0.0, best);
}

/// Grid search over barycentric coordinates with final step `1e-3`.
///
/// Simplices of dimension at most 2 are scanned on the full grid. Larger
/// ones use a coarse full grid followed by finer grids on shrinking boxes
/// around the incumbent; the squared distance is convex in the
/// coordinates, so the boxes keep the minimizer's neighborhood.
pub fn grid_oracle(w: &[Vec<f64>], y: &[f64]) -> (f64, Vec<f64>) {
    let n = w.len();
    let mut best = (f64::INFINITY, vec![0.0; n]);
    if n == 1 {
        return (dist(&w[0], y), vec![1.0]);
    }
    let fine = 1e-3;
    if n <= 3 {
        scan(w, y, &vec![0.0; n], &vec![1.0; n], fine, &mut best);
        return best;
    }
    let mut step = 1.0 / 16.0;
    scan(w, y, &vec![0.0; n], &vec![1.0; n], step, &mut best);
    while step > fine {
        let next = (step / 4.0).max(fine);
        let lo: Vec<f64> = best.1.iter().map(|l| (l - 2.0 * step).max(0.0)).collect();
        let hi: Vec<f64> = best.1.iter().map(|l| (l + 2.0 * step).min(1.0)).collect();
        step = next;
        scan(w, y, &lo, &hi, step, &mut best);
    }
    best
}

/// Exact nearest point by brute force over all faces: solve the normal
/// equations on each face's affine hull and keep feasible solutions.
pub fn face_enumeration_oracle(w: &[Vec<f64>], y: &[f64]) -> f64 {
    let n = w.len();
    let m = y.len();
    let mut best = f64::INFINITY;
    for mask in 1u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let base = &w[idx[0]];
        let k = idx.len() - 1;
        let lambda_rest = if k == 0 {
            Some(Vec::new())
        } else {
            let a = DMatrix::from_fn(m, k, |r, c| w[idx[c + 1]][r] - base[r]);
            let b = DVector::from_fn(m, |r, _| y[r] - base[r]);
            let ata = a.transpose() * &a;
            let atb = a.transpose() * b;
            ata.lu().solve(&atb).map(|x| x.iter().copied().collect())
        };
        let Some(rest) = lambda_rest else { continue };
        let first = 1.0 - rest.iter().sum::<f64>();
        if first < -1e-9 || rest.iter().any(|&l| l < -1e-9) {
            continue;
        }
        let mut lambda = vec![0.0; n];
        lambda[idx[0]] = first;
        for (c, &i) in idx[1..].iter().enumerate() {
            lambda[i] = rest[c];
        }
        best = best.min(dist(&combine(w, &lambda), y));
    }
    best
}

/// Plain Lloyd iteration: nearest center by squared distance, first index on
/// ties; each center moves to the mean of its points and stays if it has
/// none. Returns the centers after every iteration, starting with the input.
pub fn lloyd(centers: &[Vec<f64>], points: &[Vec<f64>], iterations: usize) -> Vec<Vec<Vec<f64>>> {
    let mut history = vec![centers.to_vec()];
    let mut c = centers.to_vec();
    for _ in 0..iterations {
        let mut sums = vec![vec![0.0; c[0].len()]; c.len()];
        let mut counts = vec![0usize; c.len()];
        for p in points {
            let mut bi = 0;
            let mut bd = f64::INFINITY;
            for (i, ci) in c.iter().enumerate() {
                let d = dist(p, ci);
                if d < bd {
                    bd = d;
                    bi = i;
                }
            }
            for (s, x) in sums[bi].iter_mut().zip(p) {
                *s += x;
            }
            counts[bi] += 1;
        }
        for (i, ci) in c.iter_mut().enumerate() {
            if counts[i] > 0 {
                *ci = sums[i].iter().map(|s| s / counts[i] as f64).collect();
            }
        }
        history.push(c.clone());
    }
    history
}

fn exact(x: f64) -> i128 {
    let scaled = x * (1u64 << 20) as f64;
    assert!(scaled.fract() == 0.0 && scaled.abs() < 2f64.powi(60), "{x} is not a short dyadic");
    scaled as i128
}

fn orient(a: [i128; 2], b: [i128; 2], c: [i128; 2]) -> i128 {
    ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])).signum()
}

fn on_segment(a: [i128; 2], b: [i128; 2], p: [i128; 2]) -> bool {
    p[0] >= a[0].min(b[0]) && p[0] <= a[0].max(b[0]) && p[1] >= a[1].min(b[1]) && p[1] <= a[1].max(b[1])
}

/// Closed-segment intersection in exact integer arithmetic. Coordinates must
/// be multiples of 2^-20.
pub fn segments_intersect(p1: &[f64], p2: &[f64], q1: &[f64], q2: &[f64]) -> bool {
    let e = |p: &[f64]| [exact(p[0]), exact(p[1])];
    let (a, b, c, d) = (e(p1), e(p2), e(q1), e(q2));
    let (o1, o2, o3, o4) = (orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b));
    if o1 != o2 && o3 != o4 && o1 * o2 <= 0 && o3 * o4 <= 0 {
        return true;
    }
    (o1 == 0 && on_segment(a, b, c))
        || (o2 == 0 && on_segment(a, b, d))
        || (o3 == 0 && on_segment(c, d, a))
        || (o4 == 0 && on_segment(c, d, b))
}
