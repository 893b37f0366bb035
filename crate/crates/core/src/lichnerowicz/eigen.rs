//! Cyclic Jacobi eigensolver for small dense symmetric matrices.

use crate::error::{EswError, Result};

/// Largest supported dimension.
pub const MAX_DIM: usize = 64;

const SYMMETRY_TOL: f64 = 1e-12;
const OFF_TOL: f64 = 1e-13;
const MAX_SWEEPS: usize = 100;

fn frobenius(a: &[Vec<f64>]) -> f64 {
    a.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
}

fn off_norm(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i][j] * a[i][j];
            }
        }
    }
    s.sqrt()
}

pub fn check_symmetric(a: &[Vec<f64>]) -> Result<()> {
    let n = a.len();
    if a.iter().any(|row| row.len() != n) {
        return Err(EswError::Domain("matrix is not square".into()));
    }
    if n > MAX_DIM {
        return Err(EswError::Domain(format!("dimension {n} exceeds {MAX_DIM}")));
    }
    let scale = frobenius(a).max(1.0);
    let mut defect: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            defect = defect.max((a[i][j] - a[j][i]).abs());
        }
    }
    if defect > SYMMETRY_TOL * scale {
        return Err(EswError::NotSymmetric(defect));
    }
    Ok(())
}

/// Eigenvalues (ascending) and matching unit eigenvectors (`vecs[k]` belongs
/// to `vals[k]`).
pub fn symmetric_eigen(a: &[Vec<f64>]) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    check_symmetric(a)?;
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let norm = frobenius(&m);
    if norm > 0.0 {
        let mut sweeps = 0;
        while off_norm(&m) >= OFF_TOL * norm {
            if sweeps == MAX_SWEEPS {
                return Err(EswError::Internal("Jacobi iteration did not converge".into()));
            }
            sweeps += 1;
            for p in 0..n {
                for q in p + 1..n {
                    if m[p][q] != 0.0 {
                        rotate(&mut m, &mut v, p, q);
                    }
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i][i].total_cmp(&m[j][j]));
    let vals = order.iter().map(|&i| m[i][i]).collect();
    let vecs = order
        .iter()
        .map(|&i| (0..n).map(|r| v[r][i]).collect())
        .collect();
    Ok((vals, vecs))
}

/// Annihilates `m[p][q]` with one plane rotation and accumulates it into `v`.
fn rotate(m: &mut [Vec<f64>], v: &mut [Vec<f64>], p: usize, q: usize) {
    let n = m.len();
    let apq = m[p][q];
    let theta = (m[q][q] - m[p][p]) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    for k in 0..n {
        let mkp = m[k][p];
        let mkq = m[k][q];
        m[k][p] = c * mkp - s * mkq;
        m[k][q] = s * mkp + c * mkq;
    }
    for k in 0..n {
        let mpk = m[p][k];
        let mqk = m[q][k];
        m[p][k] = c * mpk - s * mqk;
        m[q][k] = s * mpk + c * mqk;
    }
    m[p][q] = 0.0;
    m[q][p] = 0.0;
    for row in v.iter_mut() {
        let vp = row[p];
        let vq = row[q];
        row[p] = c * vp - s * vq;
        row[q] = s * vp + c * vq;
    }
}

/// Sorted eigenvalues of a symmetric matrix.
pub fn spectrum(a: &[Vec<f64>]) -> Result<Vec<f64>> {
    symmetric_eigen(a).map(|(vals, _)| vals)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_and_zero() {
        assert_eq!(spectrum(&[vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap(), vec![0.0, 0.0]);
        assert_eq!(spectrum(&[vec![3.0, 0.0], vec![0.0, -1.0]]).unwrap(), vec![-1.0, 3.0]);
    }

    #[test]
    fn two_by_two() {
        let s = spectrum(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        assert!((s[0] - 1.0).abs() < 1e-14 && (s[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn eigenvectors_satisfy_equation() {
        let a = vec![
            vec![4.0, 1.0, -2.0, 2.0],
            vec![1.0, 2.0, 0.0, 1.0],
            vec![-2.0, 0.0, 3.0, -2.0],
            vec![2.0, 1.0, -2.0, -1.0],
        ];
        let (vals, vecs) = symmetric_eigen(&a).unwrap();
        for (l, v) in vals.iter().zip(&vecs) {
            for i in 0..4 {
                let av: f64 = (0..4).map(|j| a[i][j] * v[j]).sum();
                assert!((av - l * v[i]).abs() < 1e-12);
            }
            let norm: f64 = v.iter().map(|x| x * x).sum();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_symmetric() {
        assert!(matches!(
            spectrum(&[vec![1.0, 2.0], vec![0.0, 1.0]]),
            Err(EswError::NotSymmetric(_))
        ));
    }
}
