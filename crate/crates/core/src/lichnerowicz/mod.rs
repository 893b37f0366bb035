//! The Lichnerowicz Laplacian on diagonal invariant tensors, its spectra and
//! the stability type of Einstein metrics.
//!
//! In the orthonormal basis `{I_k/√d_k}` the matrix is `L = D^{-1/2} S D^{-1/2}`
//! with `D = diag(d_k)` and `S` built from the structural constants only.
//! `S` stays rational on rational input even when `√(d_k d_m)` does not.

mod certificate;
mod eigen;

pub use certificate::{
    bareiss_determinant, charpoly_certificate, determinant, multiplicity, pencil_multiplicity, rank, rational_entries,
};
pub use eigen::{spectrum, symmetric_eigen, MAX_DIM};

use serde::{Deserialize, Serialize};

use crate::curvature::{einstein_residual, mean_rho};
use crate::error::{EswError, Result};
use crate::scalar::{Rational, Scalar};
use crate::space_model::{DiagonalMetric, SpaceDescriptor};

/// Default classification tolerance, applied as `max(tol, tol·|2ρ|)`.
pub const DEFAULT_TOL: f64 = 1e-7;

/// Largest Einstein residual accepted by [`classify`].
pub const EINSTEIN_TOL: f64 = 1e-8;

pub type Matrix<T> = Vec<Vec<T>>;

fn sq(v: &Scalar) -> Scalar {
    v.clone() * v.clone()
}

/// The symmetric matrix `S` with `L = D^{-1/2} S D^{-1/2}`:
/// `S_kk = Σ_{i,j≠k} x_k/(x_i x_j)[ijk] + Σ_{i≠k} x_i/x_k² [ikk]` and
/// `S_km = Σ_i (x_i² − x_k² − x_m²)/(x_i x_k x_m) [ikm]` over every `i`.
pub fn build_pencil(space: &SpaceDescriptor, g: &DiagonalMetric) -> Matrix<Scalar> {
    let r = space.r();
    let x = g.x();
    let c = space.constants();
    let zero = Scalar::int(0);
    let mut s = vec![vec![zero.clone(); r]; r];
    for t in c.ordered_terms() {
        if t.i != t.k && t.j != t.k {
            let k = t.k;
            s[k][k] = s[k][k].clone() + x[k].clone() / (x[t.i].clone() * x[t.j].clone()) * t.value;
        }
    }
    for k in 0..r {
        for i in 0..r {
            if i == k {
                continue;
            }
            let v = c.get(i + 1, k + 1, k + 1);
            if !v.is_zero() {
                s[k][k] = s[k][k].clone() + x[i].clone() / sq(&x[k]) * v;
            }
        }
    }
    for k in 0..r {
        for m in k + 1..r {
            let mut acc = zero.clone();
            for i in 0..r {
                let v = c.get(i + 1, k + 1, m + 1);
                if v.is_zero() {
                    continue;
                }
                let num = sq(&x[i]) - sq(&x[k]) - sq(&x[m]);
                acc = acc + num / (x[i].clone() * x[k].clone() * x[m].clone()) * v;
            }
            s[k][m] = acc.clone();
            s[m][k] = acc;
        }
    }
    s
}

/// Matrix of the Lichnerowicz Laplacian in the basis `{I_k/√d_k}`.
pub fn build_matrix(space: &SpaceDescriptor, g: &DiagonalMetric) -> Matrix<Scalar> {
    let s = build_pencil(space, g);
    let d = space.dims();
    let r = space.r();
    let mut l = s.clone();
    for k in 0..r {
        for m in 0..r {
            let den = if k == m {
                Scalar::int(d[k] as i64)
            } else {
                Scalar::int((d[k] * d[m]) as i64).sqrt()
            };
            l[k][m] = s[k][m].clone() / den;
        }
    }
    l
}

pub fn to_f64(m: &[Vec<Scalar>]) -> Matrix<f64> {
    m.iter().map(|row| row.iter().map(Scalar::to_f64).collect()).collect()
}

/// Householder reflection `H` with `H u = e_1` for `u = √d/|√d|`; its columns
/// `2..r` form an orthonormal basis of the hyperplane `Σ √d_k a_k = 0`.
fn householder(dims: &[f64]) -> Matrix<f64> {
    let r = dims.len();
    let norm: f64 = dims.iter().sum::<f64>().sqrt();
    let u: Vec<f64> = dims.iter().map(|d| d.sqrt() / norm).collect();
    let mut w = u.clone();
    w[0] -= 1.0;
    let ww: f64 = w.iter().map(|v| v * v).sum();
    let mut h = vec![vec![0.0; r]; r];
    for i in 0..r {
        for j in 0..r {
            let id = if i == j { 1.0 } else { 0.0 };
            h[i][j] = if ww > 1e-300 { id - 2.0 * w[i] * w[j] / ww } else { id };
        }
    }
    h
}

/// Eigenvalues (ascending) of `L` restricted to the traceless hyperplane, with
/// eigenvectors expressed in the full basis.
pub fn tt_eigen_f64(matrix: &[Vec<f64>], dims: &[f64]) -> Result<(Vec<f64>, Matrix<f64>)> {
    eigen::check_symmetric(matrix)?;
    let r = matrix.len();
    if dims.len() != r {
        return Err(EswError::Domain("dims length does not match matrix".into()));
    }
    if r <= 1 {
        return Ok((Vec::new(), Vec::new()));
    }
    let h = householder(dims);
    let mut hl = vec![vec![0.0; r]; r];
    for i in 0..r {
        for j in 0..r {
            hl[i][j] = (0..r).map(|k| h[i][k] * matrix[k][j]).sum();
        }
    }
    let mut block = vec![vec![0.0; r - 1]; r - 1];
    for i in 1..r {
        for j in 1..r {
            block[i - 1][j - 1] = (0..r).map(|k| hl[i][k] * h[k][j]).sum();
        }
    }
    for i in 0..r - 1 {
        for j in 0..i {
            let avg = 0.5 * (block[i][j] + block[j][i]);
            block[i][j] = avg;
            block[j][i] = avg;
        }
    }
    let (vals, vecs) = symmetric_eigen(&block)?;
    let full = vecs
        .iter()
        .map(|y| (0..r).map(|i| (1..r).map(|j| h[i][j] * y[j - 1]).sum()).collect())
        .collect();
    Ok((vals, full))
}

/// TT spectrum of a matrix returned by [`build_matrix`] for `space`.
pub fn tt_spectrum(space: &SpaceDescriptor, matrix: &[Vec<Scalar>]) -> Result<Vec<f64>> {
    let dims: Vec<f64> = space.dims().iter().map(|&d| d as f64).collect();
    tt_eigen_f64(&to_f64(matrix), &dims).map(|(v, _)| v)
}

/// Spectral data of the Lichnerowicz matrix at one metric.
#[derive(Clone, Debug, Serialize)]
pub struct LichnerowiczReport {
    pub matrix: Matrix<Scalar>,
    pub full_spectrum: Vec<f64>,
    pub tt_spectrum: Vec<f64>,
    pub lambda_min: Option<f64>,
    pub lambda_max: Option<f64>,
    pub kernel_dim_tt: usize,
}

fn kernel_dim(tt: &[f64], full: &[f64], tol: f64) -> usize {
    let scale = full.iter().fold(1.0f64, |a, v| a.max(v.abs()));
    tt.iter().filter(|v| v.abs() <= tol * scale).count()
}

pub fn lichnerowicz_report(space: &SpaceDescriptor, g: &DiagonalMetric, tol: f64) -> Result<LichnerowiczReport> {
    g.check_len(space)?;
    let matrix = build_matrix(space, g);
    let mf = to_f64(&matrix);
    let full_spectrum = spectrum(&mf)?;
    let tt = tt_spectrum(space, &matrix)?;
    Ok(LichnerowiczReport {
        kernel_dim_tt: kernel_dim(&tt, &full_spectrum, tol),
        lambda_min: tt.first().copied(),
        lambda_max: tt.last().copied(),
        tt_spectrum: tt,
        full_spectrum,
        matrix,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StabilityKind {
    GStable,
    LocalMinimum,
    Saddle,
    Degenerate,
}

impl std::fmt::Display for StabilityKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StabilityKind::GStable => "G-stable",
            StabilityKind::LocalMinimum => "local minimum",
            StabilityKind::Saddle => "saddle",
            StabilityKind::Degenerate => "degenerate",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityVerdict {
    pub kind: StabilityKind,
    pub coindex: usize,
    pub two_rho: f64,
    /// Distance from `2ρ` to the TT spectrum (infinite when it is empty).
    pub margin: f64,
    /// Effective tolerance `max(tol, tol·|2ρ|)`.
    pub tolerance: f64,
    pub kernel_dim_tt: usize,
    pub ricci_locally_invertible: bool,
}

/// Verdict from a TT spectrum; `trivial_dim` eigenvalues closest to `2ρ`
/// (and within tolerance of it) are discounted first.
pub fn verdict_from_spectrum(tt: &[f64], two_rho: f64, trivial_dim: usize, tol: f64, kernel_dim_tt: usize) -> StabilityVerdict {
    let tol_eff = tol.max(tol * two_rho.abs());
    let margin = tt.iter().map(|l| (l - two_rho).abs()).fold(f64::INFINITY, f64::min);
    let mut by_distance: Vec<f64> = tt.to_vec();
    by_distance.sort_by(|a, b| (a - two_rho).abs().total_cmp(&(b - two_rho).abs()));
    let mut discounted = 0;
    let remaining: Vec<f64> = by_distance
        .into_iter()
        .filter(|l| {
            if discounted < trivial_dim && (l - two_rho).abs() <= tol_eff {
                discounted += 1;
                false
            } else {
                true
            }
        })
        .collect();
    let below = remaining.iter().filter(|&&l| l < two_rho - tol_eff).count();
    let above = remaining.iter().filter(|&&l| l > two_rho + tol_eff).count();
    let near = remaining.len() - below - above;
    let kind = if near > 0 {
        StabilityKind::Degenerate
    } else if below == 0 {
        StabilityKind::GStable
    } else if above == 0 {
        StabilityKind::LocalMinimum
    } else {
        StabilityKind::Saddle
    };
    StabilityVerdict {
        kind,
        coindex: below,
        two_rho,
        margin,
        tolerance: tol_eff,
        kernel_dim_tt,
        ricci_locally_invertible: kernel_dim_tt == 0,
    }
}

/// Stability type of an Einstein metric.
pub fn classify(space: &SpaceDescriptor, g: &DiagonalMetric, tol: f64) -> Result<StabilityVerdict> {
    analyze(space, g, tol).map(|a| a.verdict)
}

/// Everything the classifier computes for one Einstein metric.
#[derive(Clone, Debug, Serialize)]
pub struct Analysis {
    pub two_rho: Scalar,
    pub residual: f64,
    pub report: LichnerowiczReport,
    pub verdict: StabilityVerdict,
}

pub fn analyze(space: &SpaceDescriptor, g: &DiagonalMetric, tol: f64) -> Result<Analysis> {
    g.check_len(space)?;
    let residual = einstein_residual(space, g);
    if !(residual <= EINSTEIN_TOL) {
        return Err(EswError::NotEinstein { residual });
    }
    let two_rho = Scalar::int(2) * mean_rho(space, g);
    let report = lichnerowicz_report(space, g, tol)?;
    let verdict = verdict_from_spectrum(
        &report.tt_spectrum,
        two_rho.to_f64(),
        space.trivial_dim(),
        tol,
        report.kernel_dim_tt,
    );
    Ok(Analysis {
        two_rho,
        residual,
        report,
        verdict,
    })
}

/// Classification of an explicitly given matrix, skipping curvature.
pub fn classify_from_matrix(
    matrix: &[Vec<f64>],
    dims: &[u64],
    two_rho: f64,
    trivial_dim: usize,
    tol: f64,
) -> Result<StabilityVerdict> {
    let d: Vec<f64> = dims.iter().map(|&v| v as f64).collect();
    let (tt, _) = tt_eigen_f64(matrix, &d)?;
    let full = spectrum(matrix)?;
    let kd = kernel_dim(&tt, &full, tol);
    Ok(verdict_from_spectrum(&tt, two_rho, trivial_dim, tol, kd))
}

/// `½(2ρ|a|² − aᵀ L a)` for the log-direction `v` (`a_k = v_k √d_k`).
pub fn second_variation(space: &SpaceDescriptor, g: &DiagonalMetric, v: &[f64]) -> Result<f64> {
    g.check_len(space)?;
    if v.len() != space.r() {
        return Err(EswError::validation("direction", "length does not match r"));
    }
    let dims = space.dims();
    let trace: f64 = v.iter().zip(dims).map(|(vk, &d)| vk * d as f64).sum();
    let scale = v.iter().zip(dims).map(|(vk, &d)| (vk * d as f64).abs()).sum::<f64>().max(1.0);
    if trace.abs() > 1e-10 * scale {
        return Err(EswError::NotTraceless(trace));
    }
    let residual = einstein_residual(space, g);
    if !(residual <= EINSTEIN_TOL) {
        return Err(EswError::NotEinstein { residual });
    }
    let two_rho = 2.0 * mean_rho(space, g).to_f64();
    let l = to_f64(&build_matrix(space, g));
    let a: Vec<f64> = v.iter().zip(dims).map(|(vk, &d)| vk * (d as f64).sqrt()).collect();
    let aa: f64 = a.iter().map(|x| x * x).sum();
    let mut ala = 0.0;
    for i in 0..a.len() {
        for j in 0..a.len() {
            ala += a[i] * l[i][j] * a[j];
        }
    }
    Ok(0.5 * (two_rho * aa - ala))
}

/// Exact check that `λ` is an eigenvalue of `L`, through `det(S − λD) = 0`.
/// Available whenever the metric and constants are exact, including when the
/// entries of `L` themselves involve irrational square roots.
pub fn pencil_certificate(space: &SpaceDescriptor, g: &DiagonalMetric, lambda: &Rational) -> Result<bool> {
    let s = rational_entries(&build_pencil(space, g))?;
    Ok(certificate::pencil_determinant_is_zero(&s, space.dims(), lambda))
}

/// Eigenvalue range of `L` restricted to vectors supported on `subset`
/// (0-based) and traceless there; `None` for a singleton.
pub fn submatrix_bounds(space: &SpaceDescriptor, g: &DiagonalMetric, subset: &[usize]) -> Result<Option<(f64, f64)>> {
    let r = space.r();
    let mut idx = subset.to_vec();
    idx.sort_unstable();
    idx.dedup();
    if idx.is_empty() || idx.iter().any(|&i| i >= r) {
        return Err(EswError::Domain("subset must be nonempty with indices < r".into()));
    }
    if idx.len() == 1 {
        return Ok(None);
    }
    let l = to_f64(&build_matrix(space, g));
    let sub: Matrix<f64> = idx.iter().map(|&i| idx.iter().map(|&j| l[i][j]).collect()).collect();
    let dims: Vec<f64> = idx.iter().map(|&i| space.dims()[i] as f64).collect();
    let (vals, _) = tt_eigen_f64(&sub, &dims)?;
    Ok(Some((vals[0], vals[vals.len() - 1])))
}
