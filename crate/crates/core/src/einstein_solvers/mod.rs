//! Einstein metrics: closed-form families on generalized Wallach spaces and
//! two-summand flags, a quartic root solver for `SU(2l)/U(l)`, and a general
//! multistart Newton solver. Every returned metric has been re-checked
//! through the curvature formulas.

mod numeric;
pub mod poly;

pub use numeric::{multistart, newton, start_points, GridOptions, DEDUP_TOL, FD_STEP, NEWTON_TOL};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::curvature::{einstein_residual, mean_rho, NumericSpace};
use crate::error::{EswError, Result};
use crate::scalar::{Rational, Scalar};
use crate::space_model::{flag_r2_descriptor, wallach_descriptor, wallach_from_a, DiagonalMetric, SpaceDescriptor, WallachFamily};

use poly::{real_roots, Poly};

/// Largest residual of a returned solution.
pub const SOLUTION_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SolutionSource {
    ClosedFormEqualDims,
    ClosedFormTwoEqual,
    ClosedFormW2General,
    ClosedFormW4Quartic,
    ClosedFormFlagR2,
    Numeric,
}

#[derive(Clone, Debug, Serialize)]
pub struct EinsteinSolution {
    pub label: String,
    pub metric: DiagonalMetric,
    pub two_rho: Scalar,
    pub residual: f64,
    pub source: SolutionSource,
    /// Closed-form TT spectrum (ascending) when the family provides one.
    pub tt_spectrum: Option<Vec<Scalar>>,
}

/// A member of a family that does not exist for the given parameters.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Absent {
    pub label: String,
    pub reason: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SolutionSet {
    pub solutions: Vec<EinsteinSolution>,
    pub absent: Vec<Absent>,
}

impl SolutionSet {
    pub fn get(&self, label: &str) -> Option<&EinsteinSolution> {
        self.solutions.iter().find(|s| s.label == label)
    }

    fn absent(&mut self, label: &str, reason: impl Into<String>) {
        self.absent.push(Absent {
            label: label.into(),
            reason: reason.into(),
        });
    }
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn ex(r: &Rational) -> Scalar {
    Scalar::Exact(r.clone())
}

fn sorted(mut v: Vec<Scalar>) -> Vec<Scalar> {
    v.sort_by(|a, b| a.to_f64().total_cmp(&b.to_f64()));
    v
}

/// Builds the record after checking the metric against the curvature module:
/// residual at most [`SOLUTION_TOL`] and `2ρ` equal to the closed form.
fn verified(
    space: &SpaceDescriptor,
    label: &str,
    metric: DiagonalMetric,
    two_rho: Option<Scalar>,
    source: SolutionSource,
    tt_spectrum: Option<Vec<Scalar>>,
) -> Result<EinsteinSolution> {
    let residual = einstein_residual(space, &metric);
    if !(residual <= SOLUTION_TOL) {
        return Err(EswError::Internal(format!(
            "{}: {label} has Einstein residual {residual:e}",
            space.name()
        )));
    }
    let computed = Scalar::int(2) * mean_rho(space, &metric);
    let two_rho = match two_rho {
        Some(t) => {
            let ok = match (&t, &computed) {
                (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
                _ => (t.to_f64() - computed.to_f64()).abs() <= 1e-9 * computed.to_f64().abs().max(1.0),
            };
            if !ok {
                return Err(EswError::Internal(format!(
                    "{}: {label} closed-form 2rho {t} differs from {computed}",
                    space.name()
                )));
            }
            t
        }
        None => computed,
    };
    Ok(EinsteinSolution {
        label: label.into(),
        metric,
        two_rho,
        residual,
        source,
        tt_spectrum,
    })
}

/// Wallach data `a_k = [123]/d_k`, when the descriptor is a generalized
/// Wallach space with exact data and unit Killing coefficients.
pub fn wallach_a(space: &SpaceDescriptor) -> Option<[Rational; 3]> {
    if space.r() != 3 || !space.is_exact() {
        return None;
    }
    if space.killing().iter().any(|b| *b != Scalar::int(1)) {
        return None;
    }
    let c = space.constants();
    if c.len() != 1 {
        return None;
    }
    let v = c.get(1, 2, 3);
    let v = v.as_rational()?;
    if v.is_zero() {
        return None;
    }
    let d = space.dims();
    Some([0, 1, 2].map(|k| v / &Rational::from_integer(d[k] as i64)))
}

/// A Wallach descriptor realizing the given `a`, with the smallest `[123]`
/// that makes every dimension integral.
fn synthetic_wallach(a: [Rational; 3]) -> Result<SpaceDescriptor> {
    let l = a.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.numer()));
    let name = format!("Wallach(a={},{},{})", a[0], a[1], a[2]);
    wallach_from_a(&name, a, Rational::from_big(l, BigInt::one()))
}

fn metric_at(slots: [usize; 3], vals: [Scalar; 3]) -> Result<DiagonalMetric> {
    let mut x = vec![Scalar::int(0); 3];
    for (s, v) in slots.into_iter().zip(vals) {
        x[s] = v;
    }
    DiagonalMetric::new(x)
}

fn equal_dims_on(space: &SpaceDescriptor, b: &Rational) -> Result<SolutionSet> {
    let half = q(1, 2);
    if !b.is_positive() || *b > half {
        return Err(EswError::Domain(format!("equal-dims case needs 0 < b <= 1/2, got {b}")));
    }
    let one = Rational::one();
    let mut set = SolutionSet::default();
    let three_b = ex(&(&q(3, 1) * b));
    set.solutions.push(verified(
        space,
        "g_kil",
        DiagonalMetric::standard(3),
        Some(ex(&(&one - b))),
        SolutionSource::ClosedFormEqualDims,
        Some(vec![three_b.clone(), three_b]),
    )?);
    if *b == half {
        for i in 1..=3 {
            set.absent(&format!("g_{i}"), "b = 1/2: (1-2b)/(2b) = 0 is not a metric");
        }
        return Ok(set);
    }
    if *b == q(1, 4) {
        for i in 1..=3 {
            set.absent(&format!("g_{i}"), "b = 1/4: coincides with g_kil");
        }
        return Ok(set);
    }
    let two_b = &q(2, 1) * b;
    let one_m = &one - &two_b;
    let xi = &one_m / &two_b;
    let two_rho = &(&one + &two_b) / &q(2, 1);
    let b2 = b * b;
    let l1 = &(&(&(&q(12, 1) * &b2) + &(&q(4, 1) * b)) - &one) / &(&q(2, 1) * &one_m);
    let l2 = &(&q(3, 1) * &one_m) / &q(2, 1);
    let spec = sorted(vec![ex(&l1), ex(&l2)]);
    for i in 0..3 {
        let mut x = vec![Scalar::int(1); 3];
        x[i] = ex(&xi);
        set.solutions.push(verified(
            space,
            &format!("g_{}", i + 1),
            DiagonalMetric::new(x)?,
            Some(ex(&two_rho)),
            SolutionSource::ClosedFormEqualDims,
            Some(spec.clone()),
        )?);
    }
    Ok(set)
}

/// The four Einstein metrics when `a_1 = a_2 = a_3 = b`, `0 < b < 1/2`:
/// `g_kil` and the three placements of `((1-2b)/(2b), 1, 1)`.
pub fn solve_equal_dims(b: &Rational) -> Result<SolutionSet> {
    if *b >= q(1, 2) || !b.is_positive() {
        return Err(EswError::Domain(format!("equal-dims case needs 0 < b < 1/2, got {b}")));
    }
    let space = synthetic_wallach([b.clone(), b.clone(), b.clone()])?;
    equal_dims_on(&space, b)
}

fn two_equal_on(space: &SpaceDescriptor, b: &Rational, c: &Rational, slots: [usize; 3]) -> Result<SolutionSet> {
    let one = Rational::one();
    let two = q(2, 1);
    let four = q(4, 1);
    let bc = b + c;
    let mut set = SolutionSet::default();

    let rad = &one - &(&(&four * &bc) * &(&one - &(&two * c)));
    if rad.is_negative() {
        for l in ["g_q+", "g_q-"] {
            set.absent(l, format!("radicand 1-4(b+c)(1-2c) = {rad} < 0"));
        }
    } else {
        let s = ex(&rad).sqrt();
        let den = ex(&(&two * &bc));
        let mut roots = vec![("g_q+", (ex(&one) + s.clone()) / den.clone())];
        if rad.is_zero() {
            set.absent("g_q-", "radicand 1-4(b+c)(1-2c) = 0: coincides with g_q+");
        } else {
            roots.push(("g_q-", (ex(&one) - s) / den));
        }
        for (label, qv) in roots {
            if !qv.is_positive() {
                set.absent(label, format!("q = {qv} is not positive"));
                continue;
            }
            let two_rho = ex(&one) - ex(b) * qv.clone();
            let l1 = ex(b) * (Scalar::int(4) - qv.clone() * qv.clone()) / qv.clone();
            let l2 = qv.clone() * ex(&(b + &(&two * c)));
            let metric = metric_at(slots, [Scalar::int(1), Scalar::int(1), qv]);
            let metric = metric.map_err(|e| EswError::Internal(format!("{label}: {e}")))?;
            set.solutions.push(verified(
                space,
                label,
                metric,
                Some(two_rho),
                SolutionSource::ClosedFormTwoEqual,
                Some(sorted(vec![l1, l2])),
            )?);
        }
    }

    let t = &(&(&one - &(&two * &(&(&two * b) + c))) + &(&(&q(16, 1) * &(b * b)) * &bc));
    if !t.is_positive() {
        for l in ["g_p+", "g_p-"] {
            set.absent(l, format!("T = 1-2(2b+c)+16b^2(b+c) = {t} <= 0"));
        }
        return Ok(set);
    }
    let b2 = b * b;
    let one_m4b2 = &one - &(&four * &b2);
    let big_b = &(&(&one - &(&two * b)) + &(&(&q(8, 1) * &b2) * &bc));
    let k = &(&two * &bc) * &one_m4b2;
    let rad = &(big_b * big_b) - &(&k * &k);
    let s = ex(&rad).sqrt();
    let c4 = &bc * &(&(&(&(&q(8, 1) * &(&b2 * b)) * c) + &one_m4b2) + &(&q(8, 1) * &(&b2 * &b2)));
    let c3 = &(&(&q(8, 1) * &b2) * &bc) * &(&(&(&(&four * b) * c) + &(&four * &b2)) - &one);
    let b3 = &b2 * b;
    let c2 = {
        let t1 = &(&q(96, 1) * c) * &(&b2 * &b2);
        let t2 = &q(8, 1) * &b3;
        let t3 = &(&q(48, 1) * &(c * c)) * &b3;
        let t4 = &q(48, 1) * &(&b3 * &b2);
        let t5 = &two * c;
        let t6 = &(&q(8, 1) * c) * &b2;
        &(&(&(&(&t1 - &t2) + &t3) + &t4) - &t5) - &t6
    };
    for (label, sign) in [("g_p+", 1), ("g_p-", -1)] {
        let p = (ex(big_b) + Scalar::int(sign) * s.clone()) / ex(&k);
        if !p.is_positive() {
            set.absent(label, format!("p = {p} is not positive"));
            continue;
        }
        let p1 = p.clone() + Scalar::int(1);
        let two_rho = p1.clone() * ex(&one_m4b2) / (Scalar::int(2) * p.clone());
        let p2 = p.clone() * p.clone();
        let d = ex(&c4) * p2.clone() * p2.clone()
            + ex(&c3) * p2.clone() * p.clone()
            + ex(&c2) * p2.clone()
            + ex(&c3) * p.clone()
            + ex(&c4);
        let root = (Scalar::int(2) * ex(b) * d).sqrt();
        let base = Scalar::int(4) * ex(c) * ex(&b2) * p1.clone() * p1.clone() + ex(b) * (p2 + Scalar::int(1));
        let den = Scalar::int(2) * ex(b) * p.clone() * p1.clone();
        let spec = sorted(vec![
            (base.clone() - root.clone()) / den.clone(),
            (base + root) / den,
        ]);
        let metric = metric_at(slots, [p, Scalar::int(1), Scalar::int(2) * ex(b) * p1]);
        let metric = metric.map_err(|e| EswError::Internal(format!("{label}: {e}")))?;
        set.solutions.push(verified(
            space,
            label,
            metric,
            Some(two_rho),
            SolutionSource::ClosedFormTwoEqual,
            Some(spec),
        )?);
    }
    Ok(set)
}

/// Einstein metrics when `a_1 = a_2 = b` and `a_3 = c`: `g_{q±} = (1,1,q±)`
/// and `g_{p±} = (p±, 1, 2b(p±+1))`, with non-existence recorded in `absent`.
pub fn solve_two_equal(b: &Rational, c: &Rational) -> Result<SolutionSet> {
    if !b.is_positive() || !c.is_positive() {
        return Err(EswError::Domain(format!("two-equal case needs b, c > 0, got b = {b}, c = {c}")));
    }
    let space = synthetic_wallach([b.clone(), b.clone(), c.clone()])?;
    two_equal_on(&space, b, c, [0, 1, 2])
}

/// The condition `T > 0` for the existence of `g_{p±}`.
pub fn two_equal_t(b: &Rational, c: &Rational) -> Rational {
    let two = q(2, 1);
    &(&Rational::one() - &(&two * &(&(&two * b) + c))) + &(&(&q(16, 1) * &(b * b)) * &(b + c))
}

fn w2_general_on(space: &SpaceDescriptor, kk: [Rational; 3]) -> Result<SolutionSet> {
    let [k, l, m] = kk.clone();
    let s = &(&k + &l) + &m;
    let a = &(&(&k + &l) * &(&k + &m)) * &(&l + &m);
    let klm = &(&k * &l) * &m;
    let mut set = SolutionSet::default();
    let two_rho0 = &(&a + &(&q(2, 1) * &klm)) / &(&s * &a);
    let p = &a * &(&a - &(&q(8, 1) * &klm));
    let root = ex(&p).sqrt();
    let base = ex(&(&a + &(&q(4, 1) * &klm)));
    let den = ex(&(&(&q(2, 1) * &s) * &a));
    let spec0 = sorted(vec![
        (base.clone() - root.clone()) / den.clone(),
        (base + root) / den,
    ]);
    let g0 = DiagonalMetric::from_rationals(vec![&l + &m, &k + &m, &k + &l])?;
    set.solutions.push(verified(
        space,
        "g_0",
        g0,
        Some(ex(&two_rho0)),
        SolutionSource::ClosedFormW2General,
        Some(spec0),
    )?);
    let base = [&l + &m, &k + &m, &k + &l];
    for (i, label) in ["g_k", "g_l", "g_m"].into_iter().enumerate() {
        let mut x = base.to_vec();
        x[i] = &x[i] + &(&q(2, 1) * &kk[i]);
        let lam = &(&s + &(&q(3, 1) * &kk[i])) / &(&s * &(&s + &kk[i]));
        set.solutions.push(verified(
            space,
            label,
            DiagonalMetric::from_rationals(x)?,
            Some(ex(&s.recip())),
            SolutionSource::ClosedFormW2General,
            Some(vec![Scalar::int(0), ex(&lam)]),
        )?);
    }
    Ok(set)
}

/// The four Einstein metrics `g_0, g_k, g_l, g_m` on `SU(k+l+m)/S(U(k)×U(l)×U(m))`
/// with pairwise distinct `k, l, m`.
pub fn solve_w2_general(k: i64, l: i64, m: i64) -> Result<SolutionSet> {
    if k == l || k == m || l == m {
        return Err(EswError::Domain(format!(
            "({k},{l},{m}) are not pairwise distinct; use the equal-dims or two-equal solver"
        )));
    }
    let space = wallach_descriptor(WallachFamily::W2, &[k, l, m])?;
    w2_general_on(&space, [k, l, m].map(Rational::from_integer))
}

/// The quartic whose two positive roots are the `x_3` of the Einstein metrics on `W4(l)`.
pub fn w4_quartic(l: i64) -> Poly {
    let l2 = l * l;
    let l3 = l2 * l;
    let l4 = l3 * l;
    Poly::from_i64(&[
        12 * l4 - 20 * l3 + 7 * l2 + 2 * l - 1,
        -(48 * l3 - 48 * l2 + 4 * l + 4) * l,
        (72 * l2 - 36 * l - 4) * l2,
        -(48 * l - 8) * l3,
        12 * l4,
    ])
}

fn w4_on(space: &SpaceDescriptor, l: i64, slots: [usize; 3]) -> Result<SolutionSet> {
    let p = w4_quartic(l);
    let bound = p.root_bound();
    let roots = real_roots(&p, &Rational::zero(), &bound, 1e-15);
    if roots.len() != 2 || roots[0] <= 0.0 {
        return Err(EswError::Internal(format!(
            "W4 quartic for l = {l} has {} positive roots, expected 2",
            roots.len()
        )));
    }
    let lf = l as f64;
    let mut set = SolutionSet::default();
    for (idx, x3) in roots.into_iter().enumerate() {
        let x2 = (2.0 * lf * lf * x3 * x3 + 2.0 * lf * x3 + 1.0 - lf - 2.0 * lf * lf)
            / (2.0 * lf * (2.0 * lf * x3 - 2.0 * lf + 1.0));
        let label = format!("g_{}", idx + 1);
        if !(x2 > 0.0) {
            return Err(EswError::Internal(format!("W4(l={l}) {label}: x2 = {x2} is not positive")));
        }
        let two_rho = (1.0 + 4.0 * x2 * x3 - x2 * x2 - x3 * x3) / (4.0 * x2 * x3);
        let qv = (2.0 * lf + 4.0 * lf * lf) * x3.powi(4)
            + (2.0 - 4.0 * lf * lf - 4.0 * lf * lf * x2 * x2 + 2.0 * lf) * x3 * x3
            - 1.0
            + 2.0 * x2 * x2
            - 2.0 * lf * x2 * x2
            - 4.0 * lf * lf * x2 * x2
            + 4.0 * lf * lf * x2.powi(4)
            - 2.0 * lf * x2.powi(4)
            + 4.0 * lf * lf;
        let base = (lf - 1.0) * x2 * x2 + (lf + 1.0) * x3 * x3 + lf;
        let den = 4.0 * lf * x2 * x3;
        let sq = qv.max(0.0).sqrt();
        let spec = vec![Scalar::Approx((base - sq) / den), Scalar::Approx((base + sq) / den)];
        let metric = metric_at(slots, [Scalar::int(1), Scalar::Approx(x2), Scalar::Approx(x3)])?;
        set.solutions.push(verified(
            space,
            &label,
            metric,
            Some(Scalar::Approx(two_rho)),
            SolutionSource::ClosedFormW4Quartic,
            Some(spec),
        )?);
    }
    Ok(set)
}

/// The two Einstein metrics `(1, x_2, x_3)` on `SU(2l)/U(l)`, ordered by `x_3`.
pub fn solve_w4_quartic(l: i64) -> Result<SolutionSet> {
    let space = wallach_descriptor(WallachFamily::W4, &[l])?;
    w4_on(&space, l, [0, 1, 2])
}

fn flag_r2_on(space: &SpaceDescriptor, d1: u64, d2: u64) -> Result<SolutionSet> {
    let mut set = SolutionSet::default();
    let (d1, d2) = (d1 as i64, d2 as i64);
    let lam = |x2: &Rational| ex(&(&q(d1 + d2, d1 + 4 * d2) * x2));
    let g0 = Rational::from_integer(2);
    let g1 = q(4 * d2, d1 + 2 * d2);
    for (label, x2) in [("g_0", g0), ("g_1", g1)] {
        let metric = DiagonalMetric::from_rationals(vec![Rational::one(), x2.clone()])?;
        set.solutions.push(verified(
            space,
            label,
            metric,
            None,
            SolutionSource::ClosedFormFlagR2,
            Some(vec![lam(&x2)]),
        )?);
    }
    Ok(set)
}

/// The Kähler–Einstein metric `(1, 2)` and the metric `(1, 4d_2/(d_1+2d_2))`
/// on a flag manifold with two isotropy summands.
pub fn solve_flag_r2(d1: u64, d2: u64) -> Result<SolutionSet> {
    let space = flag_r2_descriptor(d1, d2)?;
    flag_r2_on(&space, d1, d2)
}

/// Every distinct Einstein metric reached from the start grid, gauge `x_1 = 1`,
/// sorted by `(ln x_2, …, ln x_r)`.
pub fn solve_numeric(space: &SpaceDescriptor, opts: &GridOptions) -> Result<Vec<EinsteinSolution>> {
    if space.r() < 2 {
        return Err(EswError::Domain("the numeric solver needs r >= 2".into()));
    }
    let ns = NumericSpace::new(space);
    let mut out = Vec::new();
    for x in multistart(&ns, opts) {
        let metric = DiagonalMetric::from_f64(&x)?;
        if einstein_residual(space, &metric) > SOLUTION_TOL {
            continue;
        }
        let label = format!("n{}", out.len() + 1);
        out.push(verified(space, &label, metric, None, SolutionSource::Numeric, None)?);
    }
    Ok(out)
}

/// `g_t = (t, (−t+√(t²+8/t))/2, (t+√(t²+8/t))/2)`; all members share the
/// Ricci tensor and volume of `(1, 1, 2)` on `W2(1,1,1)`.
pub fn kahler_ricci_curve(t: f64) -> Result<DiagonalMetric> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(EswError::Domain(format!("curve parameter must be positive, got {t}")));
    }
    let s = (t * t + 8.0 / t).sqrt();
    DiagonalMetric::from_f64(&[t, 0.5 * (s - t), 0.5 * (t + s)])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Method {
    /// Closed form when the descriptor matches a known family, else numeric.
    #[default]
    Auto,
    Numeric,
}

fn lowest_integers(a: &[Rational; 3]) -> [Rational; 3] {
    let l = a.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let ints: Vec<BigInt> = a.iter().map(|v| v.numer() * (&l / v.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    [0, 1, 2].map(|i| Rational::from_big(ints[i].clone() / &g, BigInt::one()))
}

fn w4_parameter(a: &[Rational; 3]) -> Option<(i64, [usize; 3])> {
    for perm in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
        let [i, j, k] = perm;
        if a[i] != q(1, 4) {
            continue;
        }
        let gap = &a[k] - &a[j];
        if !gap.is_positive() {
            continue;
        }
        let l = &Rational::one() / &(&q(2, 1) * &gap);
        let Some(l) = l.is_integer().then(|| l.to_i64()).flatten() else {
            continue;
        };
        if l >= 2 && a[j] == q(l - 1, 4 * l) {
            return Some((l, perm));
        }
    }
    None
}

fn closed_form(space: &SpaceDescriptor) -> Result<Option<SolutionSet>> {
    if space.r() == 2 && space.is_exact() && space.killing().iter().all(|b| *b == Scalar::int(1)) {
        let c = space.constants();
        let (d1, d2) = (space.dims()[0], space.dims()[1]);
        let want = q((d1 * d2) as i64, (d1 + 4 * d2) as i64);
        if c.len() == 1 && c.get(1, 1, 2).as_rational() == Some(&want) {
            return flag_r2_on(space, d1, d2).map(Some);
        }
        return Ok(None);
    }
    let Some(a) = wallach_a(space) else {
        return Ok(None);
    };
    if a[0] == a[1] && a[1] == a[2] {
        return equal_dims_on(space, &a[0]).map(Some);
    }
    for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
        if a[i] == a[j] {
            return two_equal_on(space, &a[i], &a[k], [i, j, k]).map(Some);
        }
    }
    if &(&a[0] + &a[1]) + &a[2] == q(1, 2) {
        return w2_general_on(space, lowest_integers(&a)).map(Some);
    }
    if let Some((l, slots)) = w4_parameter(&a) {
        return w4_on(space, l, slots).map(Some);
    }
    Ok(None)
}

/// Einstein metrics of `space`: a closed-form family when one applies
/// (under [`Method::Auto`]), otherwise the numeric multistart.
pub fn solve(space: &SpaceDescriptor, method: Method, opts: &GridOptions) -> Result<SolutionSet> {
    if method == Method::Auto {
        if let Some(set) = closed_form(space)? {
            return Ok(set);
        }
    }
    Ok(SolutionSet {
        solutions: solve_numeric(space, opts)?,
        absent: Vec::new(),
    })
}
