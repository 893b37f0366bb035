//! Exact determinants by fraction-free (Bareiss) elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{EswError, Result};
use crate::scalar::{Rational, Scalar};

/// Determinant of an integer matrix; consumes its argument.
pub fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = !sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// Exact determinant of a rational matrix: each row is scaled to integers,
/// eliminated fraction-free, then the scaling is divided out.
pub fn determinant(m: &[Vec<Rational>]) -> Rational {
    let mut scale = BigInt::one();
    let rows: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| {
            let l = row
                .iter()
                .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            scale *= &l;
            row.iter()
                .map(|v| v.numer() * (&l / v.denom()))
                .collect()
        })
        .collect();
    Rational::from_big(bareiss_determinant(rows), scale)
}

/// Rational view of a matrix, or the position of the first float entry.
pub fn rational_entries(m: &[Vec<Scalar>]) -> Result<Vec<Vec<Rational>>> {
    m.iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, v)| v.as_rational().cloned().ok_or(EswError::NotRational(i, j)))
                .collect()
        })
        .collect()
}

/// True iff `det(M − λI) = 0` exactly.
pub fn charpoly_certificate(matrix: &[Vec<Scalar>], lambda: &Rational) -> Result<bool> {
    let mut m = rational_entries(matrix)?;
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = &row[i] - lambda;
    }
    Ok(determinant(&m).is_zero())
}

/// True iff `det(S − λ diag(d)) = 0` exactly.
pub fn pencil_determinant_is_zero(s: &[Vec<Rational>], dims: &[u64], lambda: &Rational) -> bool {
    let mut m = s.to_vec();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = &row[i] - &(lambda * &Rational::from_integer(dims[i] as i64));
    }
    determinant(&m).is_zero()
}

/// Exact rank by Gaussian elimination over the rationals.
pub fn rank(m: &[Vec<Rational>]) -> usize {
    let mut a = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..rows {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &a[rank][c];
            for j in c..cols {
                let t = &f * &a[rank][j];
                a[i][j] = &a[i][j] - &t;
            }
        }
        rank += 1;
    }
    rank
}

/// Multiplicity of `λ` as an eigenvalue of `M` (symmetric, so geometric
/// and algebraic multiplicities agree).
pub fn multiplicity(matrix: &[Vec<Rational>], lambda: &Rational) -> usize {
    let mut m = matrix.to_vec();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = &row[i] - lambda;
    }
    m.len() - rank(&m)
}

/// Multiplicity of `λ` in the pencil `S − λ diag(d)`.
pub fn pencil_multiplicity(s: &[Vec<Rational>], dims: &[u64], lambda: &Rational) -> usize {
    let mut m = s.to_vec();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = &row[i] - &(lambda * &Rational::from_integer(dims[i] as i64));
    }
    m.len() - rank(&m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_and_multiplicities() {
        let m = vec![
            vec![q(2, 1), q(-1, 1), q(-1, 1)],
            vec![q(-1, 1), q(2, 1), q(-1, 1)],
            vec![q(-1, 1), q(-1, 1), q(2, 1)],
        ];
        assert_eq!(rank(&m), 2);
        assert_eq!(multiplicity(&m, &q(3, 1)), 2);
        assert_eq!(multiplicity(&m, &q(0, 1)), 1);
        assert_eq!(multiplicity(&m, &q(1, 1)), 0);
        assert_eq!(pencil_multiplicity(&m, &[2, 2, 2], &q(3, 2)), 2);
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn small_determinants() {
        assert_eq!(determinant(&[vec![q(2, 1)]]), q(2, 1));
        assert_eq!(determinant(&[vec![q(1, 2), q(1, 3)], vec![q(1, 4), q(1, 5)]]), q(1, 10) - q(1, 12));
        let m = vec![
            vec![q(0, 1), q(1, 1), q(2, 1)],
            vec![q(1, 1), q(0, 1), q(3, 1)],
            vec![q(4, 1), q(-3, 1), q(8, 1)],
        ];
        assert_eq!(determinant(&m), q(-2, 1));
    }

    #[test]
    fn singular_detected() {
        let m = vec![vec![q(1, 3), q(2, 3)], vec![q(1, 6), q(1, 3)]];
        assert!(determinant(&m).is_zero());
    }

    #[test]
    fn float_entry_rejected() {
        let m = vec![vec![Scalar::int(1), Scalar::Approx(0.5)], vec![Scalar::Approx(0.5), Scalar::int(1)]];
        assert!(matches!(charpoly_certificate(&m, &q(1, 2)), Err(EswError::NotRational(0, 1))));
    }
}
