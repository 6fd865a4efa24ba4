//! Small exact linear algebra over the rationals, enough for 2×2 and 3×3
//! projective work.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::series::Rational;

pub(crate) type Matrix = Vec<Vec<Rational>>;

/// Scales a nonzero vector to coprime integers with positive first nonzero entry.
/// Returns `None` for the zero vector.
pub(crate) fn normalize_projective(v: &[Rational]) -> Option<Vec<BigInt>> {
    let first = v.iter().position(|x| !x.is_zero())?;
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let sign = if ints[first].is_negative() {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    Some(ints.into_iter().map(|x| x / &gcd * &sign).collect())
}

pub(crate) fn to_rational(v: &[BigInt]) -> Vec<Rational> {
    v.iter().cloned().map(Rational::from_integer).collect()
}

pub(crate) fn cross(a: &[BigInt], b: &[BigInt]) -> [BigInt; 3] {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

pub(crate) fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                .collect()
        })
        .collect()
}

pub(crate) fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let m = b[0].len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    (0..b.len()).fold(Rational::zero(), |acc, k| acc + &a[i][k] * &b[k][j])
                })
                .collect()
        })
        .collect()
}

pub(crate) fn mat_vec(a: &Matrix, v: &[Rational]) -> Vec<Rational> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
        })
        .collect()
}

/// Gauss–Jordan inverse; `None` when singular.
pub(crate) fn inverse(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let mut aug: Matrix = a
        .iter()
        .zip(identity(n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(col, pivot);
        let inv = aug[col][col].recip();
        for x in aug[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !aug[r][col].is_zero() {
                let factor = aug[r][col].clone();
                let pivot_row = aug[col].clone();
                for (x, p) in aug[r].iter_mut().zip(pivot_row) {
                    *x -= &factor * p;
                }
            }
        }
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub(crate) fn determinant(a: &Matrix) -> Rational {
    let n = a.len();
    let mut m = a.clone();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            m.swap(col, pivot);
            det = -det;
        }
        det *= &m[col][col];
        for r in col + 1..n {
            if !m[r][col].is_zero() {
                let factor = &m[r][col] / &m[col][col];
                let pivot_row = m[col].clone();
                for (x, p) in m[r].iter_mut().zip(pivot_row) {
                    *x -= &factor * p;
                }
            }
        }
    }
    det
}

/// Columns are the given vectors.
pub(crate) fn from_columns(cols: &[Vec<Rational>]) -> Matrix {
    let n = cols[0].len();
    (0..n)
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect()
}

/// The matrix sending the standard frame `e_0, ..., e_{n-1}, e_0 + ... + e_{n-1}`
/// to the projective frame `pts` (n+1 points of P^{n-1}). `None` if `pts` is not a frame.
pub(crate) fn frame_matrix(pts: &[Vec<Rational>]) -> Option<Matrix> {
    let n = pts[0].len();
    debug_assert_eq!(pts.len(), n + 1);
    let base = from_columns(&pts[..n]);
    let inv = inverse(&base)?;
    let lambda = mat_vec(&inv, &pts[n]);
    if lambda.iter().any(Zero::is_zero) {
        return None;
    }
    let scaled: Vec<Vec<Rational>> = pts[..n]
        .iter()
        .zip(&lambda)
        .map(|(p, l)| p.iter().map(|x| x * l).collect())
        .collect();
    Some(from_columns(&scaled))
}

/// The unique projectivity sending frame `src` to frame `dst`.
pub(crate) fn projectivity_between_frames(
    src: &[Vec<Rational>],
    dst: &[Vec<Rational>],
) -> Option<Matrix> {
    let a = frame_matrix(src)?;
    let b = frame_matrix(dst)?;
    Some(mat_mul(&b, &inverse(&a)?))
}
