//! Damped Newton multistart on `ρ_{k+1} − ρ_1 = 0` in log coordinates.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curvature::NumericSpace;

/// Start grid for [`super::solve_numeric`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridOptions {
    pub points_per_axis: usize,
    pub lo: f64,
    pub hi: f64,
    /// Above this many grid points a Halton subset of this size is used.
    pub max_starts: usize,
}

impl Default for GridOptions {
    fn default() -> Self {
        GridOptions {
            points_per_axis: 7,
            lo: 0.1,
            hi: 5.0,
            max_starts: 4096,
        }
    }
}

pub const FD_STEP: f64 = 1e-7;
pub const NEWTON_TOL: f64 = 1e-12;
pub const DEDUP_TOL: f64 = 1e-6;
const MAX_ITER: usize = 200;
const MAX_STEP: f64 = 2.0;
const MAX_LOG: f64 = 30.0;

fn halton(index: usize, base: usize) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    let mut i = index;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

const PRIMES: [usize; 24] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
];

/// Starting points in `u = ln x` coordinates (dimension `dim`), in a fixed order.
pub fn start_points(dim: usize, opts: &GridOptions) -> Vec<Vec<f64>> {
    let (a, b) = (opts.lo.ln(), opts.hi.ln());
    let p = opts.points_per_axis.max(1);
    let axis: Vec<f64> = if p == 1 {
        vec![0.5 * (a + b)]
    } else {
        (0..p).map(|i| a + (b - a) * i as f64 / (p - 1) as f64).collect()
    };
    let total = (p as f64).powi(dim as i32);
    if total <= opts.max_starts as f64 {
        let total = total as usize;
        (0..total)
            .map(|mut idx| {
                let mut u = vec![0.0; dim];
                for slot in u.iter_mut().rev() {
                    *slot = axis[idx % p];
                    idx /= p;
                }
                u
            })
            .collect()
    } else {
        (1..=opts.max_starts)
            .map(|i| {
                (0..dim)
                    .map(|d| a + (b - a) * halton(i, PRIMES[d % PRIMES.len()]))
                    .collect()
            })
            .collect()
    }
}

fn metric_of(u: &[f64]) -> Vec<f64> {
    std::iter::once(1.0).chain(u.iter().map(|v| v.exp())).collect()
}

fn residual_map(space: &NumericSpace, u: &[f64]) -> Vec<f64> {
    let rho = space.ricci(&metric_of(u));
    rho[1..].iter().map(|r| r - rho[0]).collect()
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, x| a.max(x.abs()))
}

fn jacobian(space: &NumericSpace, u: &[f64]) -> DMatrix<f64> {
    let n = u.len();
    let mut j = DMatrix::zeros(n, n);
    let mut w = u.to_vec();
    for c in 0..n {
        w[c] = u[c] + FD_STEP;
        let fp = residual_map(space, &w);
        w[c] = u[c] - FD_STEP;
        let fm = residual_map(space, &w);
        w[c] = u[c];
        for r in 0..n {
            j[(r, c)] = (fp[r] - fm[r]) / (2.0 * FD_STEP);
        }
    }
    j
}

/// One Newton run; `Some(u)` when `‖F‖∞ < NEWTON_TOL`.
pub fn newton(space: &NumericSpace, start: &[f64]) -> Option<Vec<f64>> {
    let mut u = start.to_vec();
    let mut f = residual_map(space, &u);
    let mut norm = inf_norm(&f);
    for _ in 0..MAX_ITER {
        if !norm.is_finite() {
            return None;
        }
        if norm < NEWTON_TOL {
            return Some(u);
        }
        let j = jacobian(space, &u);
        let rhs = -DVector::from_vec(f.clone());
        let mut step = j.lu().solve(&rhs)?;
        let sn = step.norm();
        if !sn.is_finite() {
            return None;
        }
        if sn > MAX_STEP {
            step *= MAX_STEP / sn;
        }
        let mut alpha = 1.0;
        loop {
            let trial: Vec<f64> = u.iter().zip(step.iter()).map(|(a, s)| a + alpha * s).collect();
            if trial.iter().any(|v| v.abs() > MAX_LOG) {
                return None;
            }
            let ft = residual_map(space, &trial);
            let nt = inf_norm(&ft);
            if nt.is_finite() && nt < (1.0 - 1e-4 * alpha) * norm {
                u = trial;
                f = ft;
                norm = nt;
                break;
            }
            alpha *= 0.5;
            if alpha < 1e-10 {
                return if norm < NEWTON_TOL { Some(u) } else { None };
            }
        }
    }
    (norm < NEWTON_TOL).then_some(u)
}

/// Distinct roots found from every start, deduplicated in `u`-space and
/// sorted lexicographically by `u`.
pub fn multistart(space: &NumericSpace, opts: &GridOptions) -> Vec<Vec<f64>> {
    let dim = space.r() - 1;
    let starts = start_points(dim, opts);
    let found: Vec<Option<Vec<f64>>> = starts.par_iter().map(|s| newton(space, s)).collect();
    let mut roots: Vec<Vec<f64>> = Vec::new();
    for u in found.into_iter().flatten() {
        let dup = roots.iter().any(|v| {
            v.iter().zip(&u).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt() < DEDUP_TOL
        });
        if !dup {
            roots.push(u);
        }
    }
    roots.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    roots.into_iter().map(|u| metric_of(&u)).collect()
}
