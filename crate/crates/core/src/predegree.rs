//! Closed-form adjusted predegree polynomials.
//!
//! For a configuration with multiplicities `r_i` and degree `d`, the polynomial is
//! the truncation to `t^8` of
//!
//! ```text
//!   prod_i (1 + r_i t + r_i^2 t^2 / 2)
//!     + sum_i (1 + (d - r_i) t + (d - r_i)^2 t^2 / 2) (S6_i t^6/6! + S7_i t^7/7! + S8_i t^8/8!)
//! ```
//!
//! where the `S` functions are built from the `rho` data of each line and vanish
//! on lines that meet the rest transversally. Stars and fans have shortcut forms
//! and transversal unions multiply.

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

use crate::configuration::{ConfigError, LineConfiguration};
use crate::series::{factorial, Rational, SeriesError, TruncatedSeries, PLANE_CAP};

/// Degree-6, 7 and 8 correction coefficients of one line.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SFunctions {
    pub s6: BigInt,
    pub s7: BigInt,
    pub s8: BigInt,
}

impl SFunctions {
    pub fn is_zero(&self) -> bool {
        self.s6.is_zero() && self.s7.is_zero() && self.s8.is_zero()
    }
}

/// Elementary symmetric functions `e_0, e_1, ...` of a multiplicity vector.
/// Not to be confused with the exceptional classes of the blow-up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricFunctions {
    e: Vec<BigInt>,
}

impl SymmetricFunctions {
    pub fn new(mults: &[u64]) -> Self {
        let mut e = vec![BigInt::zero(); mults.len() + 1];
        e[0] = BigInt::one();
        for (k, &r) in mults.iter().enumerate() {
            let r = BigInt::from(r);
            for j in (1..=k + 1).rev() {
                let prev = e[j - 1].clone();
                e[j] += prev * &r;
            }
        }
        Self { e }
    }

    /// `e_j`, zero for `j` past the number of variables.
    pub fn e(&self, j: usize) -> BigInt {
        self.e.get(j).cloned().unwrap_or_else(BigInt::zero)
    }
}

/// `1 + r t + r^2 t^2 / 2`, the polynomial of a single `r`-fold line.
pub fn line_factor(r: &BigInt, cap: usize) -> TruncatedSeries {
    let r = Rational::from_integer(r.clone());
    TruncatedSeries::from_coeffs(
        cap,
        [Rational::one(), r.clone(), &r * &r / Rational::from_integer(2.into())],
    )
}

fn product_of_line_factors(mults: &[u64], cap: usize) -> TruncatedSeries {
    mults.iter().fold(TruncatedSeries::one(cap), |acc, &r| {
        acc.mul(&line_factor(&r.into(), cap)).expect("same cap")
    })
}

pub fn s_functions(cfg: &LineConfiguration, line: usize) -> Result<SFunctions, ConfigError> {
    let rho: Vec<BigInt> = (0..=7)
        .map(|a| if a < 2 { Ok(BigInt::zero()) } else { cfg.rho_line(line, a) })
        .collect::<Result<_, _>>()?;
    let r = BigInt::from(cfg.mult(line));
    let rp = |k: u32| -> BigInt { Pow::pow(&r, k) };
    let s6 = -&rho[5] * rp(1) - 5 * &rho[4] * rp(2) + 10 * &rho[3] * rp(3) + 5 * &rho[2] * rp(4);
    let s7 = 6 * &rho[6] * rp(1) + 29 * &rho[5] * rp(2) - 50 * &rho[4] * rp(3) - 20 * &rho[3] * rp(4)
        - &rho[2] * rp(5);
    let s8 = -21 * &rho[7] * rp(1) - 99 * &rho[6] * rp(2) + 155 * &rho[5] * rp(3)
        + 55 * &rho[4] * rp(4)
        + &rho[3] * rp(5)
        - &rho[2] * rp(6);
    Ok(SFunctions { s6, s7, s8 })
}

/// The closed-form polynomial, capped at `t^8`.
pub fn closed_form_predegree(cfg: &LineConfiguration) -> TruncatedSeries {
    closed_form_predegree_capped(cfg, PLANE_CAP)
}

/// The closed form truncated at `t^cap` (for `cap < 8`) or carried past `t^8`
/// without truncation (for experiments with `cap > 8`).
pub fn closed_form_predegree_capped(cfg: &LineConfiguration, cap: usize) -> TruncatedSeries {
    let d = BigInt::from(cfg.degree());
    let mut total = product_of_line_factors(cfg.mults(), cap);
    for i in 0..cfg.n() {
        let s = s_functions(cfg, i).expect("line index in range");
        if s.is_zero() {
            continue;
        }
        let corr = TruncatedSeries::from_coeffs(
            cap,
            (0..=8).map(|k| match k {
                6 => Rational::new(s.s6.clone(), factorial(6)),
                7 => Rational::new(s.s7.clone(), factorial(7)),
                8 => Rational::new(s.s8.clone(), factorial(8)),
                _ => Rational::zero(),
            }),
        );
        let rest = line_factor(&(&d - cfg.mult(i)), cap);
        total = total
            .add(&rest.mul(&corr).expect("same cap"))
            .expect("same cap");
    }
    total
}

/// A shortcut polynomial together with its top predegree, when the closed form
/// for it applies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortcutPredegree {
    pub poly: TruncatedSeries,
    pub predegree: Option<BigInt>,
}

/// Star of concurrent lines: `{prod (1 + r_i t + r_i^2 t^2/2)}_5`, with scalar
/// predegree `30 (e2 e3 - e1 e4 - e5)` for three or more lines.
pub fn star_predegree_poly(mults: &[u64]) -> ShortcutPredegree {
    let poly = product_of_line_factors(mults, PLANE_CAP)
        .truncate(5)
        .expect("5 <= cap");
    let predegree = (mults.len() >= 3).then(|| {
        let e = SymmetricFunctions::new(mults);
        30 * (e.e(2) * e.e(3) - e.e(1) * e.e(4) - e.e(5))
    });
    ShortcutPredegree { poly, predegree }
}

/// Fan: a star with multiplicities `star_mults` plus one transversal `r`-fold
/// line. Scalar predegree `630 r^2 (e2 e3 - e1 e4 - e5)` when the star has three or more lines.
pub fn fan_predegree_poly(star_mults: &[u64], r: u64) -> ShortcutPredegree {
    let star = star_predegree_poly(star_mults);
    let poly = line_factor(&r.into(), PLANE_CAP)
        .mul(&star.poly)
        .expect("same cap");
    let predegree = (star_mults.len() >= 3).then(|| {
        let e = SymmetricFunctions::new(star_mults);
        let r = BigInt::from(r);
        630 * &r * &r * (e.e(2) * e.e(3) - e.e(1) * e.e(4) - e.e(5))
    });
    ShortcutPredegree { poly, predegree }
}

/// Polynomial of a union of two configurations meeting transversally.
pub fn multiply_transversal(
    p1: &TruncatedSeries,
    p2: &TruncatedSeries,
) -> Result<TruncatedSeries, SeriesError> {
    p1.mul(p2)
}

/// Top predegree `2520 (e4^2 - 2 e2 e6 + 2 e8)` of a transversal configuration.
pub fn transversal_simple_predegree(mults: &[u64]) -> BigInt {
    let e = SymmetricFunctions::new(mults);
    2520 * (e.e(4) * e.e(4) - 2 * e.e(2) * e.e(6) + 2 * e.e(8))
}
