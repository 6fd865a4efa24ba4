//! Transversal arrangements of multiple hyperplanes in `P^n`.
//!
//! An `r`-fold hyperplane contributes the factor `sum_{k<=n} r^k t^k / k!`, and
//! a transversal arrangement multiplies these factors, truncating at
//! `t^(n^2 + 2n)` (the dimension of `PGL(n+1)`).

use num_bigint::BigInt;
use num_traits::{One, Pow};
use thiserror::Error;

use crate::series::{factorial, Rational, TruncatedSeries};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArrangementError {
    #[error("ambient dimension must be at least 1")]
    BadDimension,
    #[error("hyperplane {0} has multiplicity 0")]
    InvalidMultiplicity(usize),
    #[error("arrangement has no hyperplanes")]
    Empty,
    #[error("only arrangements in general position are supported")]
    NotTransversal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperplaneArrangement {
    dim: usize,
    mults: Vec<u64>,
}

impl HyperplaneArrangement {
    /// A transversal arrangement in `P^dim`.
    pub fn new(dim: usize, mults: Vec<u64>) -> Result<Self, ArrangementError> {
        Self::with_transversality(dim, mults, true)
    }

    pub fn with_transversality(
        dim: usize,
        mults: Vec<u64>,
        transversal: bool,
    ) -> Result<Self, ArrangementError> {
        if dim < 1 {
            return Err(ArrangementError::BadDimension);
        }
        if mults.is_empty() {
            return Err(ArrangementError::Empty);
        }
        if let Some(i) = mults.iter().position(|&r| r == 0) {
            return Err(ArrangementError::InvalidMultiplicity(i));
        }
        if !transversal {
            return Err(ArrangementError::NotTransversal);
        }
        Ok(Self { dim, mults })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mults(&self) -> &[u64] {
        &self.mults
    }

    /// `n^2 + 2n`.
    pub fn cap(&self) -> usize {
        self.dim * self.dim + 2 * self.dim
    }

    /// Appends another hyperplane meeting the arrangement transversally.
    pub fn with_hyperplane(&self, r: u64) -> Result<Self, ArrangementError> {
        let mut mults = self.mults.clone();
        mults.push(r);
        Self::new(self.dim, mults)
    }
}

/// `sum_{k=0}^{n} r^k t^k / k!` for an `r`-fold hyperplane in `P^n`.
pub fn hyperplane_factor(dim: usize, r: u64, cap: usize) -> TruncatedSeries {
    let r = BigInt::from(r);
    TruncatedSeries::from_coeffs(
        cap,
        (0..=dim).map(|k| Rational::new(Pow::pow(&r, k as u32), factorial(k))),
    )
}

pub fn hyperplane_predegree(arr: &HyperplaneArrangement) -> TruncatedSeries {
    hyperplane_predegree_capped(arr, arr.cap())
}

/// Same product with an explicit cap instead of `n^2 + 2n`.
pub fn hyperplane_predegree_capped(arr: &HyperplaneArrangement, cap: usize) -> TruncatedSeries {
    arr.mults.iter().fold(TruncatedSeries::one(cap), |acc, &r| {
        acc.mul(&hyperplane_factor(arr.dim, r, cap)).expect("same cap")
    })
}

/// `(n^2 + 2n)!` times the top coefficient: the predegree of the orbit closure.
pub fn top_predegree(arr: &HyperplaneArrangement) -> BigInt {
    let p = hyperplane_predegree(arr).predegree_at(arr.cap());
    debug_assert!(p.is_integer());
    p.to_integer()
}

/// Closed-form degree of the orbit closure of `d` reduced planes in general
/// position in `P^3`; zero for `d <= 4`.
pub fn p3_simple_degree_formula(d: u64) -> BigInt {
    let x = BigInt::from(d);
    let prefix = (0..5).fold(BigInt::one(), |acc, k| acc * (&x - k));
    // d^10 + 10 d^9 + ... + 3503500, highest degree first
    const COEFFS: [i64; 11] = [
        1, 10, 65, -1015, 63, -10885, 190560, -658885, 1358936, -3034850, 3503500,
    ];
    let poly = COEFFS
        .iter()
        .fold(BigInt::from(0), |acc, &c| acc * &x + c);
    prefix * poly
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configuration::LineConfiguration;
    use crate::predegree::{closed_form_predegree, transversal_simple_predegree};

    fn binom(n: u64, k: u64) -> BigInt {
        (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn five_planes_in_p3() {
        let arr = HyperplaneArrangement::new(3, vec![1; 5]).unwrap();
        assert_eq!(top_predegree(&arr), BigInt::from(168_168_000u64));
        let combinatorial = binom(15, 3) * binom(12, 3) * binom(9, 3) * binom(6, 3) * binom(3, 3);
        assert_eq!(combinatorial, BigInt::from(168_168_000u64));
    }

    #[test]
    fn plane_case_matches_line_configurations() {
        for mults in [vec![1, 1, 1, 1], vec![2, 1, 3], vec![1, 2, 3, 4, 5]] {
            let arr = HyperplaneArrangement::new(2, mults.clone()).unwrap();
            let cfg = LineConfiguration::from_abstract(mults.clone(), &[]).unwrap();
            assert_eq!(hyperplane_predegree(&arr), closed_form_predegree(&cfg));
            assert_eq!(top_predegree(&arr), transversal_simple_predegree(&mults));
        }
    }

    #[test]
    fn points_on_p1() {
        for d in 1..=12u64 {
            let arr = HyperplaneArrangement::new(1, vec![1; d as usize]).unwrap();
            let expected = BigInt::from(d) * (d as i64 - 1) * (d as i64 - 2);
            assert_eq!(top_predegree(&arr), expected);
        }
    }

    #[test]
    fn formula_values() {
        assert_eq!(p3_simple_degree_formula(5), BigInt::from(168_168_000u64));
        for d in 0..=4 {
            assert_eq!(p3_simple_degree_formula(d), BigInt::from(0));
        }
        let six = HyperplaneArrangement::new(3, vec![1; 6]).unwrap();
        assert_eq!(p3_simple_degree_formula(6), top_predegree(&six));
    }

    #[test]
    fn errors() {
        assert_eq!(HyperplaneArrangement::new(0, vec![1]), Err(ArrangementError::BadDimension));
        assert_eq!(
            HyperplaneArrangement::new(2, vec![1, 0]),
            Err(ArrangementError::InvalidMultiplicity(1))
        );
        assert_eq!(
            HyperplaneArrangement::with_transversality(3, vec![1, 1], false),
            Err(ArrangementError::NotTransversal)
        );
    }

    #[test]
    fn appending_multiplies() {
        let arr = HyperplaneArrangement::new(3, vec![2, 1, 1]).unwrap();
        let more = arr.with_hyperplane(3).unwrap();
        let expected = hyperplane_predegree(&arr)
            .mul(&hyperplane_factor(3, 3, arr.cap()))
            .unwrap();
        assert_eq!(hyperplane_predegree(&more), expected);
    }
}
