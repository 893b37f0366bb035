//! Moment-map eigenvalues, Ricci eigenvalues, scalar curvature and Einstein
//! residuals of diagonal metrics.
//!
//! Every sum over `[ijk]` runs over ordered index triples; the symmetric
//! storage is expanded once by [`Prepared::new`].

use serde::Serialize;

use crate::error::Result;
use crate::scalar::{Field, Scalar};
use crate::space_model::{DiagonalMetric, SpaceDescriptor};

/// Guard for the residual denominator.
pub const RESIDUAL_EPS: f64 = 1e-300;

/// Descriptor data converted into a working field.
#[derive(Clone, Debug)]
pub struct Prepared<T> {
    pub dims: Vec<T>,
    pub killing: Vec<T>,
    /// Ordered `(i, j, k, [ijk])`, 0-based.
    pub terms: Vec<(usize, usize, usize, T)>,
    pub n: T,
}

/// Fast `f64` view used by solvers and the flow.
pub type NumericSpace = Prepared<f64>;

impl<T: Field> Prepared<T> {
    pub fn new(space: &SpaceDescriptor) -> Self {
        Prepared {
            dims: space.dims().iter().map(|&d| T::from_i64(d as i64)).collect(),
            killing: space.killing().iter().map(T::from_scalar).collect(),
            terms: space
                .constants()
                .ordered_terms()
                .into_iter()
                .map(|t| (t.i, t.j, t.k, T::from_scalar(&t.value)))
                .collect(),
            n: T::from_i64(space.n() as i64),
        }
    }

    pub fn r(&self) -> usize {
        self.dims.len()
    }

    /// `|μ|² = Σ x_k/(x_i x_j) [ijk]`.
    pub fn mu_norm_sq(&self, x: &[T]) -> T {
        let mut s = T::zero();
        for (i, j, k, v) in &self.terms {
            s = s + x[*k].clone() / (x[*i].clone() * x[*j].clone()) * v.clone();
        }
        s
    }

    pub fn moment(&self, x: &[T]) -> Vec<T> {
        let r = self.r();
        let mut a = vec![T::zero(); r];
        let mut b = vec![T::zero(); r];
        for (i, j, k, v) in &self.terms {
            a[*k] = a[*k].clone() + x[*j].clone() / (x[*i].clone() * x[*k].clone()) * v.clone();
            b[*k] = b[*k].clone() + x[*k].clone() / (x[*i].clone() * x[*j].clone()) * v.clone();
        }
        (0..r)
            .map(|k| {
                let d = self.dims[k].clone();
                -(a[k].clone() / (T::from_i64(2) * d.clone())) + b[k].clone() / (T::from_i64(4) * d)
            })
            .collect()
    }

    /// `ρ_k = b_k/(2x_k) − (1/(4d_k)) Σ (x_i²+x_j²−x_k²)/(x_i x_j x_k) [ijk]`.
    pub fn ricci(&self, x: &[T]) -> Vec<T> {
        let r = self.r();
        let mut s = vec![T::zero(); r];
        for (i, j, k, v) in &self.terms {
            let (xi, xj, xk) = (x[*i].clone(), x[*j].clone(), x[*k].clone());
            let num = xi.clone() * xi.clone() + xj.clone() * xj.clone() - xk.clone() * xk.clone();
            s[*k] = s[*k].clone() + num / (xi * xj * xk) * v.clone();
        }
        (0..r)
            .map(|k| {
                self.killing[k].clone() / (T::from_i64(2) * x[k].clone())
                    - s[k].clone() / (T::from_i64(4) * self.dims[k].clone())
            })
            .collect()
    }

    /// Middle form: `b_k/(2x_k) − (1/(4d_k)) Σ (x_i/(x_j x_k) + x_j/(x_i x_k) − x_k/(x_i x_j)) [ijk]`.
    pub fn ricci_expanded(&self, x: &[T]) -> Vec<T> {
        let r = self.r();
        let mut s = vec![T::zero(); r];
        for (i, j, k, v) in &self.terms {
            let (xi, xj, xk) = (x[*i].clone(), x[*j].clone(), x[*k].clone());
            let t = xi.clone() / (xj.clone() * xk.clone()) + xj.clone() / (xi.clone() * xk.clone())
                - xk / (xi * xj);
            s[*k] = s[*k].clone() + t * v.clone();
        }
        (0..r)
            .map(|k| {
                self.killing[k].clone() / (T::from_i64(2) * x[k].clone())
                    - s[k].clone() / (T::from_i64(4) * self.dims[k].clone())
            })
            .collect()
    }

    /// `ρ_k = b_k/(2x_k) + m_k`.
    pub fn ricci_from_moment(&self, x: &[T]) -> Vec<T> {
        self.moment(x)
            .into_iter()
            .enumerate()
            .map(|(k, m)| self.killing[k].clone() / (T::from_i64(2) * x[k].clone()) + m)
            .collect()
    }

    /// `Sc = ½ Σ b_k d_k/x_k − ¼ Σ x_k/(x_i x_j) [ijk]`.
    pub fn scalar(&self, x: &[T]) -> T {
        let mut s = T::zero();
        for k in 0..self.r() {
            s = s + self.killing[k].clone() * self.dims[k].clone() / x[k].clone();
        }
        s / T::from_i64(2) - self.mu_norm_sq(x) / T::from_i64(4)
    }

    /// Analytic partial derivatives of [`Prepared::scalar`].
    pub fn gradient(&self, x: &[T]) -> Vec<T> {
        let r = self.r();
        let mut acc = vec![T::zero(); r];
        for (i, j, l, v) in &self.terms {
            let t = x[*l].clone() / (x[*i].clone() * x[*j].clone()) * v.clone();
            acc[*l] = acc[*l].clone() + t.clone();
            acc[*i] = acc[*i].clone() - t.clone();
            acc[*j] = acc[*j].clone() - t;
        }
        (0..r)
            .map(|k| {
                let xk = x[k].clone();
                -(self.killing[k].clone() * self.dims[k].clone()) / (T::from_i64(2) * xk.clone() * xk.clone())
                    - acc[k].clone() / (T::from_i64(4) * xk)
            })
            .collect()
    }
}

impl Prepared<f64> {
    /// Relative deviation of the `ρ_k` from their `d`-weighted mean.
    pub fn residual(&self, x: &[f64]) -> f64 {
        residual_of(&self.ricci(x), &self.dims, self.n)
    }

    pub fn scalar_normalized(&self, x: &[f64]) -> f64 {
        volume_factor(&self.dims, self.n, x) * self.scalar(x)
    }

    /// `Σ d_k ln x_k`.
    pub fn log_volume(&self, x: &[f64]) -> f64 {
        self.dims.iter().zip(x).map(|(d, v)| d * v.ln()).sum()
    }
}

fn volume_factor(dims: &[f64], n: f64, x: &[f64]) -> f64 {
    let s: f64 = dims.iter().zip(x).map(|(d, v)| d * v.ln()).sum();
    (s / n).exp()
}

fn residual_of(rho: &[f64], dims: &[f64], n: f64) -> f64 {
    let mean: f64 = rho.iter().zip(dims).map(|(r, d)| r * d).sum::<f64>() / n;
    let dev = rho.iter().map(|r| (r - mean).abs()).fold(0.0, f64::max);
    dev / mean.abs().max(RESIDUAL_EPS)
}

fn exact(space: &SpaceDescriptor) -> Prepared<Scalar> {
    Prepared::new(space)
}

pub fn mu_norm_sq(space: &SpaceDescriptor, g: &DiagonalMetric) -> Scalar {
    exact(space).mu_norm_sq(g.x())
}

pub fn moment_eigenvalues(space: &SpaceDescriptor, g: &DiagonalMetric) -> Vec<Scalar> {
    exact(space).moment(g.x())
}

pub fn ricci_eigenvalues(space: &SpaceDescriptor, g: &DiagonalMetric) -> Vec<Scalar> {
    exact(space).ricci(g.x())
}

/// Which of the equivalent Ricci formulas to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RicciForm {
    Symmetric,
    Expanded,
    Moment,
}

pub fn ricci_eigenvalues_with(space: &SpaceDescriptor, g: &DiagonalMetric, form: RicciForm) -> Vec<Scalar> {
    let p = exact(space);
    match form {
        RicciForm::Symmetric => p.ricci(g.x()),
        RicciForm::Expanded => p.ricci_expanded(g.x()),
        RicciForm::Moment => p.ricci_from_moment(g.x()),
    }
}

pub fn scalar_curvature(space: &SpaceDescriptor, g: &DiagonalMetric) -> Scalar {
    exact(space).scalar(g.x())
}

/// `(Π x_k^{d_k})^{1/n} · Sc`, always a float because of the root.
pub fn scalar_curvature_normalized(space: &SpaceDescriptor, g: &DiagonalMetric) -> f64 {
    let p = exact(space);
    let dims: Vec<f64> = p.dims.iter().map(Scalar::to_f64).collect();
    volume_factor(&dims, space.n() as f64, &g.to_f64()) * p.scalar(g.x()).to_f64()
}

pub fn scalar_gradient(space: &SpaceDescriptor, g: &DiagonalMetric) -> Vec<Scalar> {
    exact(space).gradient(g.x())
}

/// `max_k |ρ_k − ρ̄| / max(|ρ̄|, ε)` with `ρ̄ = Σ d_k ρ_k / n`; computed exactly
/// on exact inputs before the final conversion.
pub fn einstein_residual(space: &SpaceDescriptor, g: &DiagonalMetric) -> f64 {
    let rho = ricci_eigenvalues(space, g);
    residual_exactish(space, &rho)
}

fn residual_exactish(space: &SpaceDescriptor, rho: &[Scalar]) -> f64 {
    let n = Scalar::int(space.n() as i64);
    let mut mean = Scalar::int(0);
    for (r, &d) in rho.iter().zip(space.dims()) {
        mean = mean + r.clone() * Scalar::int(d as i64);
    }
    let mean = mean / n;
    let dev = rho
        .iter()
        .map(|r| {
            let diff = r.clone() - mean.clone();
            if diff.is_zero() {
                0.0
            } else {
                diff.to_f64().abs()
            }
        })
        .fold(0.0, f64::max);
    if dev == 0.0 {
        return 0.0;
    }
    dev / mean.to_f64().abs().max(RESIDUAL_EPS)
}

/// Curvature data of one metric.
#[derive(Clone, Debug, Serialize)]
pub struct CurvatureReport {
    pub rho: Vec<Scalar>,
    pub m: Vec<Scalar>,
    pub scalar: Scalar,
    pub scalar_normalized: Scalar,
    pub mu_norm_sq: Scalar,
    pub einstein_residual: f64,
}

pub fn curvature_report(space: &SpaceDescriptor, g: &DiagonalMetric) -> Result<CurvatureReport> {
    g.check_len(space)?;
    let p = exact(space);
    let rho = p.ricci(g.x());
    let einstein_residual = residual_exactish(space, &rho);
    Ok(CurvatureReport {
        m: p.moment(g.x()),
        scalar: p.scalar(g.x()),
        scalar_normalized: Scalar::Approx(scalar_curvature_normalized(space, g)),
        mu_norm_sq: p.mu_norm_sq(g.x()),
        rho,
        einstein_residual,
    })
}

/// Einstein constant `ρ̄ = Σ d_k ρ_k / n` (equal to every `ρ_k` at an Einstein metric).
pub fn mean_rho(space: &SpaceDescriptor, g: &DiagonalMetric) -> Scalar {
    let rho = ricci_eigenvalues(space, g);
    let mut s = Scalar::int(0);
    for (r, &d) in rho.iter().zip(space.dims()) {
        s = s + r.clone() * Scalar::int(d as i64);
    }
    s / Scalar::int(space.n() as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space_model::{exceptional_wallach_descriptor, flag_r2_descriptor, wallach_descriptor, Exceptional, StructureConstants, WallachFamily};

    fn w2() -> SpaceDescriptor {
        wallach_descriptor(WallachFamily::W2, &[1, 1, 1]).unwrap()
    }

    fn g(v: &[i64]) -> DiagonalMetric {
        DiagonalMetric::from_ints(v).unwrap()
    }

    #[test]
    fn mu_norm_examples() {
        assert_eq!(mu_norm_sq(&w2(), &g(&[1, 1, 1])), Scalar::int(2));
        assert_eq!(mu_norm_sq(&w2(), &g(&[2, 1, 1])), Scalar::int(2));
        let empty = SpaceDescriptor::with_unit_killing("e", vec![2, 2], StructureConstants::new(2)).unwrap();
        assert_eq!(mu_norm_sq(&empty, &g(&[3, 5])), Scalar::int(0));
    }

    #[test]
    fn moment_examples() {
        let m = moment_eigenvalues(&w2(), &g(&[1, 1, 1]));
        assert!(m.iter().all(|v| *v == Scalar::exact(-1, 12)));
        let rho = ricci_eigenvalues(&w2(), &g(&[1, 1, 1]));
        assert!(rho.iter().all(|v| *v == Scalar::exact(5, 12)));
        let rho = ricci_eigenvalues(&w2(), &g(&[2, 1, 1]));
        assert!(rho.iter().all(|v| *v == Scalar::exact(1, 3)));
    }

    #[test]
    fn three_forms_agree_exactly() {
        let s = exceptional_wallach_descriptor(Exceptional::W8);
        let x = DiagonalMetric::from_rationals(vec![
            crate::Rational::new(3, 2),
            crate::Rational::new(5, 7),
            crate::Rational::new(2, 1),
        ])
        .unwrap();
        let a = ricci_eigenvalues_with(&s, &x, RicciForm::Symmetric);
        assert_eq!(a, ricci_eigenvalues_with(&s, &x, RicciForm::Expanded));
        assert_eq!(a, ricci_eigenvalues_with(&s, &x, RicciForm::Moment));
    }

    #[test]
    fn w11_standard_is_einstein() {
        let s = exceptional_wallach_descriptor(Exceptional::W11);
        let rho = ricci_eigenvalues(&s, &DiagonalMetric::standard(3));
        assert!(rho.iter().all(|v| *v == Scalar::exact(13, 36)));
        assert_eq!(einstein_residual(&s, &DiagonalMetric::standard(3)), 0.0);
    }

    #[test]
    fn flag_r2_kahler_einstein() {
        for (a, b) in [(4, 1), (2, 3), (10, 7)] {
            let s = flag_r2_descriptor(a, b).unwrap();
            let rho = ricci_eigenvalues(&s, &g(&[1, 2]));
            assert_eq!(rho[0], rho[1]);
        }
    }

    #[test]
    fn round_metric_without_constants() {
        let s = SpaceDescriptor::with_unit_killing("e", vec![3, 5], StructureConstants::new(2)).unwrap();
        let rho = ricci_eigenvalues(&s, &g(&[4, 4]));
        assert_eq!(rho, vec![Scalar::exact(1, 8), Scalar::exact(1, 8)]);
        assert_eq!(scalar_curvature(&s, &g(&[4, 4])), Scalar::exact(8, 8));
    }

    #[test]
    fn scalar_examples() {
        assert_eq!(scalar_curvature(&w2(), &g(&[1, 1, 1])), Scalar::exact(5, 2));
        assert!((scalar_curvature_normalized(&w2(), &g(&[1, 1, 1])) - 2.5).abs() < 1e-14);
        assert_eq!(scalar_curvature(&w2(), &g(&[2, 1, 1])), Scalar::int(2));
        let want = 2f64.powf(4.0 / 3.0);
        assert!((scalar_curvature_normalized(&w2(), &g(&[2, 1, 1])) - want).abs() < 1e-13);
    }

    #[test]
    fn residual_examples() {
        let w5 = wallach_descriptor(WallachFamily::W5, &[5]).unwrap();
        assert_eq!(einstein_residual(&w5, &g(&[1, 1, 2])), 0.0);
        assert!(einstein_residual(&w2(), &g(&[1, 1, 3])) > 0.1);
        let empty = SpaceDescriptor::new(
            "flat",
            vec![1, 1],
            vec![Scalar::int(0), Scalar::int(0)],
            StructureConstants::new(2),
            0,
            "",
        )
        .unwrap();
        assert_eq!(einstein_residual(&empty, &g(&[1, 2])), 0.0);
    }

    #[test]
    fn gradient_examples() {
        let grad = scalar_gradient(&w2(), &g(&[1, 1, 1]));
        assert!(grad.iter().all(|v| *v == Scalar::exact(-5, 6)));
    }

    #[test]
    fn gradient_matches_finite_difference_on_w6() {
        let s = NumericSpace::new(&exceptional_wallach_descriptor(Exceptional::W6));
        let x = [1.3, 0.8, 2.1];
        let grad = s.gradient(&x);
        let h = 1e-5;
        for k in 0..3 {
            let mut p = x;
            let mut m = x;
            p[k] += h;
            m[k] -= h;
            let fd = (s.scalar(&p) - s.scalar(&m)) / (2.0 * h);
            assert!((fd - grad[k]).abs() <= 1e-7 * grad[k].abs().max(1.0), "k={k}: {fd} vs {}", grad[k]);
        }
    }

    #[test]
    fn numeric_and_exact_agree() {
        let s = exceptional_wallach_descriptor(Exceptional::W10);
        let x = [1.1, 0.7, 1.9];
        let n = NumericSpace::new(&s);
        let e = ricci_eigenvalues(&s, &DiagonalMetric::from_f64(&x).unwrap());
        for (a, b) in n.ricci(&x).iter().zip(&e) {
            assert!((a - b.to_f64()).abs() < 1e-14);
        }
    }
}
