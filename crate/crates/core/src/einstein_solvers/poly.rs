//! Univariate rational polynomials and real-root isolation by Sturm sequences.

use crate::scalar::Rational;

/// Coefficients in ascending degree, without trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly(Vec<Rational>);

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| Rational::from_integer(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn lead(&self) -> &Rational {
        self.0.last().expect("nonzero polynomial")
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64())
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &Rational::from_integer(i as i64))
                .collect(),
        )
    }

    /// Remainder of division by a nonzero `d`.
    pub fn rem(&self, d: &Poly) -> Poly {
        let dd = d.degree().expect("division by zero polynomial");
        let mut r = self.0.clone();
        while r.len() > dd {
            let shift = r.len() - 1 - dd;
            let f = &r[r.len() - 1] / d.lead();
            for (i, c) in d.0.iter().enumerate() {
                r[shift + i] = &r[shift + i] - &(&f * c);
            }
            r.pop();
            while r.last().is_some_and(Rational::is_zero) {
                r.pop();
            }
        }
        Poly::new(r)
    }

    fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c.clone()).collect())
    }

    fn monic(&self) -> Poly {
        let l = self.lead().clone();
        Poly(self.0.iter().map(|c| c / &l).collect())
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// Exact quotient by a divisor known to divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Poly {
        let dd = d.degree().expect("division by zero polynomial");
        let mut r = self.0.clone();
        let n = self.0.len();
        if n <= dd {
            return Poly::new(Vec::new());
        }
        let mut q = vec![Rational::zero(); n - dd];
        for s in (0..n - dd).rev() {
            let f = &r[s + dd] / d.lead();
            for (i, c) in d.0.iter().enumerate() {
                r[s + i] = &r[s + i] - &(&f * c);
            }
            q[s] = f;
        }
        Poly::new(q)
    }

    /// Square-free part `p / gcd(p, p')`.
    pub fn square_free(&self) -> Poly {
        let g = self.gcd(&self.derivative());
        match g.degree() {
            None | Some(0) => self.clone(),
            _ => self.div_exact(&g),
        }
    }

    /// Cauchy bound: every real root lies in `(-B, B)`.
    pub fn root_bound(&self) -> Rational {
        let lead = self.lead().abs();
        let m = self.0[..self.0.len() - 1]
            .iter()
            .map(|c| &c.abs() / &lead)
            .max()
            .unwrap_or_else(Rational::zero);
        &m + &Rational::one()
    }
}

/// Sturm sequence of a square-free polynomial.
pub struct Sturm(Vec<Poly>);

impl Sturm {
    pub fn new(p: &Poly) -> Self {
        let mut seq = vec![p.clone(), p.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].rem(&seq[n - 1]).neg();
            if r.is_zero() {
                break;
            }
            seq.push(r);
        }
        Sturm(seq)
    }

    fn variations(&self, x: &Rational) -> usize {
        let mut prev: Option<bool> = None;
        let mut count = 0;
        for p in &self.0 {
            let v = p.eval(x);
            if v.is_zero() {
                continue;
            }
            let s = v.is_positive();
            if prev.is_some_and(|q| q != s) {
                count += 1;
            }
            prev = Some(s);
        }
        count
    }

    /// Number of distinct real roots in `(a, b]`.
    pub fn count(&self, a: &Rational, b: &Rational) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }
}

/// Disjoint intervals `(a, b]`, each holding exactly one root of `p` in `(lo, hi]`.
pub fn isolate_roots(p: &Poly, lo: &Rational, hi: &Rational) -> Vec<(Rational, Rational)> {
    let sf = p.square_free();
    let sturm = Sturm::new(&sf);
    let mut out = Vec::new();
    let mut stack = vec![(lo.clone(), hi.clone())];
    while let Some((a, b)) = stack.pop() {
        match sturm.count(&a, &b) {
            0 => {}
            1 => out.push((a, b)),
            _ => {
                let mid = &(&a + &b) / &Rational::from_integer(2);
                stack.push((mid.clone(), b));
                stack.push((a, mid));
            }
        }
    }
    out.sort();
    out
}

/// The root inside an isolating interval `(a, b]` to about `tol`: exact
/// bisection down to `1e-6`, then safeguarded Newton steps in `f64`.
pub fn refine_root(p: &Poly, a: &Rational, b: &Rational, tol: f64) -> f64 {
    let sf = p.square_free();
    let (mut a, mut b) = (a.clone(), b.clone());
    if sf.eval(&b).is_zero() {
        return b.to_f64();
    }
    let two = Rational::from_integer(2);
    let sb = sf.eval(&b).is_positive();
    while (&b - &a).to_f64() > 1e-6 {
        let mid = &(&a + &b) / &two;
        let v = sf.eval(&mid);
        if v.is_zero() {
            return mid.to_f64();
        }
        if v.is_positive() == sb {
            b = mid;
        } else {
            a = mid;
        }
    }
    let (mut lo, mut hi) = (a.to_f64(), b.to_f64());
    let dp = sf.derivative();
    let mut x = 0.5 * (lo + hi);
    for _ in 0..100 {
        let fx = sf.eval_f64(x);
        if fx == 0.0 {
            return x;
        }
        if (fx > 0.0) == sb {
            hi = x;
        } else {
            lo = x;
        }
        let step = fx / dp.eval_f64(x);
        let mut next = x - step;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= tol * x.abs().max(1.0) || hi - lo <= tol {
            return next;
        }
        x = next;
    }
    x
}

/// All real roots in `(lo, hi]`, ascending.
pub fn real_roots(p: &Poly, lo: &Rational, hi: &Rational, tol: f64) -> Vec<f64> {
    isolate_roots(p, lo, hi)
        .iter()
        .map(|(a, b)| refine_root(p, a, b, tol))
        .collect()
}
