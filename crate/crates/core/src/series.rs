//! Exact rationals and truncated power series in one variable `t`.
//!
//! Every engine in the crate produces a [`TruncatedSeries`]: the coefficient
//! of `t^j` is `(f_j * d_j) / j!`, so the series is stored with exact
//! rational coefficients and a fixed maximal exponent (the cap).

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Exact rational number, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Default cap for plane configurations: `dim PGL(3) = 8`.
pub const PLANE_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series caps differ ({0} vs {1})")]
    CapMismatch(usize, usize),
    #[error("series has zero constant term and is not invertible")]
    NotInvertible,
    #[error("truncation order {order} exceeds cap {cap}")]
    TruncationAboveCap { order: usize, cap: usize },
    #[error("cannot parse rational {0:?}")]
    BadRational(String),
}

/// Parses `"p/q"`, `"p"` or `"-p/q"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational, SeriesError> {
    let bad = || SeriesError::BadRational(s.to_string());
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Always `p/q`, even when `q = 1`.
pub fn rational_to_fraction_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Integer when the denominator is 1, `p/q` otherwise.
pub fn rational_to_string(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        rational_to_fraction_string(r)
    }
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// A power series `c_0 + c_1 t + ... + c_cap t^cap`; terms above `cap` are discarded.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    cap: usize,
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    pub fn zero(cap: usize) -> Self {
        Self {
            cap,
            coeffs: vec![Rational::zero(); cap + 1],
        }
    }

    pub fn one(cap: usize) -> Self {
        Self::constant(cap, Rational::one())
    }

    pub fn constant(cap: usize, c: Rational) -> Self {
        Self::monomial(cap, 0, c)
    }

    /// `c * t^k`, which is zero when `k > cap`.
    pub fn monomial(cap: usize, k: usize, c: Rational) -> Self {
        let mut s = Self::zero(cap);
        if k <= cap {
            s.coeffs[k] = c;
        }
        s
    }

    /// The variable `t` itself.
    pub fn t(cap: usize) -> Self {
        Self::monomial(cap, 1, Rational::one())
    }

    /// Builds a series from leading coefficients; missing ones are zero and
    /// coefficients beyond `cap` are dropped.
    pub fn from_coeffs(cap: usize, coeffs: impl IntoIterator<Item = Rational>) -> Self {
        let mut s = Self::zero(cap);
        for (k, c) in coeffs.into_iter().take(cap + 1).enumerate() {
            s.coeffs[k] = c;
        }
        s
    }

    /// `sum_k a_k t^k / k!` for integer data `a_k` (the predegree-table form).
    pub fn from_predegrees(cap: usize, table: &[BigInt]) -> Self {
        Self::from_coeffs(
            cap,
            table
                .iter()
                .enumerate()
                .map(|(k, a)| Rational::new(a.clone(), factorial(k))),
        )
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `t^k`; zero above the cap.
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Largest exponent with a nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    fn check_cap(&self, other: &Self) -> Result<(), SeriesError> {
        if self.cap != other.cap {
            return Err(SeriesError::CapMismatch(self.cap, other.cap));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_cap(other)?;
        Ok(Self {
            cap: self.cap,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            cap: self.cap,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            cap: self.cap,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Cauchy product, dropping every term above the cap.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_cap(other)?;
        let mut out = Self::zero(self.cap);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(self.cap + 1 - i).enumerate() {
                if !b.is_zero() {
                    out.coeffs[i + j] += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.cap);
        for _ in 0..e {
            acc = acc.mul(self).expect("same cap");
        }
        acc
    }

    /// Multiplicative inverse up to the cap.
    pub fn reciprocal(&self) -> Result<Self, SeriesError> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(SeriesError::NotInvertible);
        }
        let inv0 = c0.recip();
        let mut out = Self::zero(self.cap);
        out.coeffs[0] = inv0.clone();
        for n in 1..=self.cap {
            let mut acc = Rational::zero();
            for k in 1..=n {
                acc += &self.coeffs[k] * &out.coeffs[n - k];
            }
            out.coeffs[n] = -(acc * &inv0);
        }
        Ok(out)
    }

    /// Zeroes every coefficient above `order`; the cap is unchanged.
    pub fn truncate(&self, order: usize) -> Result<Self, SeriesError> {
        if order > self.cap {
            return Err(SeriesError::TruncationAboveCap {
                order,
                cap: self.cap,
            });
        }
        let mut out = self.clone();
        for c in out.coeffs.iter_mut().skip(order + 1) {
            *c = Rational::zero();
        }
        Ok(out)
    }

    /// Same coefficients under a different cap (dropping or zero-padding).
    pub fn with_cap(&self, cap: usize) -> Self {
        Self::from_coeffs(cap, self.coeffs.iter().cloned())
    }

    /// Entry `j` is `coeff(j) * j!`, i.e. the predegree `f_j * d_j`.
    pub fn predegree_table(&self) -> Vec<Rational> {
        let mut fact = BigInt::one();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| {
                if j > 0 {
                    fact *= BigInt::from(j);
                }
                c * Rational::from_integer(fact.clone())
            })
            .collect()
    }

    /// The predegree table as integers, or `None` if some entry is fractional.
    pub fn integer_predegree_table(&self) -> Option<Vec<BigInt>> {
        self.predegree_table()
            .into_iter()
            .map(|r| r.is_integer().then(|| r.to_integer()))
            .collect()
    }

    /// Predegree at `t^j`, `(coefficient) * j!`.
    pub fn predegree_at(&self, j: usize) -> Rational {
        self.coeff(j) * Rational::from_integer(factorial(j))
    }

    /// Coefficient strings `"p/q"` indexed by exponent.
    pub fn to_fraction_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(rational_to_fraction_string).collect()
    }

    pub fn from_fraction_strings<S: AsRef<str>>(items: &[S]) -> Result<Self, SeriesError> {
        let coeffs = items
            .iter()
            .map(|s| parse_rational(s.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        let cap = coeffs.len().saturating_sub(1);
        Ok(Self::from_coeffs(cap, coeffs))
    }

    pub fn has_nonnegative_integer_predegrees(&self) -> bool {
        self.predegree_table()
            .iter()
            .all(|p| p.is_integer() && !p.is_negative())
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, abs) = if c.is_negative() {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let abs_s = rational_to_string(&abs);
            match k {
                0 => write!(f, "{abs_s}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{abs_s}*")?;
                    }
                    if k == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{k}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Serialize for TruncatedSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_fraction_strings().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TruncatedSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let items = Vec::<String>::deserialize(deserializer)?;
        if items.is_empty() {
            return Err(serde::de::Error::custom("series needs at least one coefficient"));
        }
        Self::from_fraction_strings(&items).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn series(cap: usize, c: &[(i64, i64)]) -> TruncatedSeries {
        TruncatedSeries::from_coeffs(cap, c.iter().map(|&(n, d)| q(n, d)))
    }

    fn simple_line(cap: usize) -> TruncatedSeries {
        series(cap, &[(1, 1), (1, 1), (1, 2)])
    }

    #[test]
    fn add_examples() {
        let a = series(2, &[(1, 1), (1, 1)]);
        let b = series(2, &[(1, 1), (-1, 1)]);
        assert_eq!(a.add(&b).unwrap(), TruncatedSeries::constant(2, q(2, 1)));

        let p = simple_line(8);
        assert_eq!(TruncatedSeries::zero(8).add(&p).unwrap(), p);

        let t5 = TruncatedSeries::monomial(5, 5, q(1, 1));
        assert_eq!(
            t5.add(&t5).unwrap(),
            TruncatedSeries::monomial(5, 5, q(2, 1))
        );
    }

    #[test]
    fn mismatched_caps_error() {
        let a = TruncatedSeries::one(2);
        let b = TruncatedSeries::one(3);
        assert_eq!(a.add(&b), Err(SeriesError::CapMismatch(2, 3)));
        assert_eq!(a.mul(&b), Err(SeriesError::CapMismatch(2, 3)));
    }

    #[test]
    fn mul_examples() {
        let a = series(2, &[(1, 1), (1, 1)]);
        assert_eq!(a.mul(&a).unwrap(), series(2, &[(1, 1), (2, 1), (1, 1)]));

        let cube = simple_line(6).pow(3);
        let expected = series(
            6,
            &[(1, 1), (3, 1), (9, 2), (4, 1), (9, 4), (3, 4), (1, 8)],
        );
        assert_eq!(cube, expected);

        let t8 = TruncatedSeries::monomial(8, 8, q(1, 1));
        assert!(t8.mul(&TruncatedSeries::t(8)).unwrap().is_zero());
    }

    #[test]
    fn reciprocal_examples() {
        let a = series(2, &[(1, 1), (1, 1)]);
        assert_eq!(
            a.reciprocal().unwrap(),
            series(2, &[(1, 1), (-1, 1), (1, 1)])
        );

        // 1/(1+t)^3 = sum (-1)^k C(k+2,2) t^k, checked by multiplying back too.
        let cube = series(5, &[(1, 1), (1, 1)]).pow(3);
        let inv = cube.reciprocal().unwrap();
        let binom: Vec<_> = (0..=5i64)
            .map(|k| q(if k % 2 == 0 { 1 } else { -1 } * (k + 2) * (k + 1) / 2, 1))
            .collect();
        assert_eq!(inv, TruncatedSeries::from_coeffs(5, binom));
        assert_eq!(inv.mul(&cube).unwrap(), TruncatedSeries::one(5));

        let no_unit = series(4, &[(0, 1), (1, 1), (1, 1)]);
        assert_eq!(no_unit.reciprocal(), Err(SeriesError::NotInvertible));
    }

    #[test]
    fn truncate_examples() {
        let cube = simple_line(8).pow(3);
        let t5 = cube.truncate(5).unwrap();
        assert_eq!(t5.coeff(6), q(0, 1));
        assert_eq!(t5.coeff(5), q(3, 4));
        assert_eq!(t5.cap(), 8);
        assert_eq!(cube.truncate(8).unwrap(), cube);

        let a = series(3, &[(1, 1), (1, 1)]);
        assert_eq!(a.truncate(0).unwrap(), TruncatedSeries::one(3));
        assert!(matches!(
            a.truncate(4),
            Err(SeriesError::TruncationAboveCap { order: 4, cap: 3 })
        ));
    }

    #[test]
    fn predegree_table_examples() {
        let triangle = simple_line(8).pow(3);
        let table: Vec<_> = triangle
            .integer_predegree_table()
            .unwrap()
            .into_iter()
            .map(|b| i64::try_from(b).unwrap())
            .collect();
        assert_eq!(table, vec![1, 3, 9, 24, 54, 90, 90, 0, 0]);

        let r = 7i64;
        let line = series(8, &[(1, 1), (r, 1), (r * r, 2)]);
        let table = line.integer_predegree_table().unwrap();
        assert_eq!(table[..3], [1.into(), r.into(), (r * r).into()]);
        assert!(table[3..].iter().all(Zero::is_zero));

        assert!(TruncatedSeries::zero(8)
            .predegree_table()
            .iter()
            .all(Zero::is_zero));
    }

    #[test]
    fn json_uses_fraction_strings() {
        let s = series(3, &[(1, 1), (-9, 2), (0, 1), (3, 4)]);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"["1/1","-9/2","0/1","3/4"]"#);
        let back: TruncatedSeries = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        let reduced: TruncatedSeries = serde_json::from_str(r#"["2/4","3"]"#).unwrap();
        assert_eq!(reduced, series(1, &[(1, 2), (3, 1)]));
        assert!(serde_json::from_str::<TruncatedSeries>(r#"["1/0"]"#).is_err());
    }

    #[test]
    fn display() {
        let s = series(3, &[(1, 1), (-9, 2), (0, 1), (1, 1)]);
        assert_eq!(s.to_string(), "1 - 9/2*t + t^3");
        assert_eq!(TruncatedSeries::zero(2).to_string(), "0");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        const CAP: usize = 6;

        fn arb_series() -> impl Strategy<Value = TruncatedSeries> {
            prop::collection::vec((-20i64..20, 1i64..7), CAP + 1)
                .prop_map(|v| TruncatedSeries::from_coeffs(CAP, v.into_iter().map(|(n, d)| q(n, d))))
        }

        proptest! {
            #[test]
            fn ring_laws(a in arb_series(), b in arb_series(), c in arb_series()) {
                prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
                prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
                prop_assert_eq!(
                    a.mul(&b).unwrap().mul(&c).unwrap(),
                    a.mul(&b.mul(&c).unwrap()).unwrap()
                );
                prop_assert_eq!(
                    a.add(&b).unwrap().add(&c).unwrap(),
                    a.add(&b.add(&c).unwrap()).unwrap()
                );
                prop_assert_eq!(
                    a.mul(&b.add(&c).unwrap()).unwrap(),
                    a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
                );
            }

            #[test]
            fn reciprocal_is_inverse(a in arb_series()) {
                prop_assume!(!a.coeff(0).is_zero());
                let inv = a.reciprocal().unwrap();
                prop_assert_eq!(a.mul(&inv).unwrap(), TruncatedSeries::one(CAP));
            }

            #[test]
            fn json_round_trip(a in arb_series()) {
                let json = serde_json::to_string(&a).unwrap();
                let back: TruncatedSeries = serde_json::from_str(&json).unwrap();
                prop_assert_eq!(back, a);
            }
        }
    }
}
