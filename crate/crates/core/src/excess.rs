//! Excess-intersection engines for the adjusted predegree polynomial.
//!
//! The polynomial is the Bézout baseline `sum_j d^j t^j / j!` minus one
//! correction per blow-up center: a `P^2` for every intersection point and the
//! proper transform of a `P^5` for every line. Each correction is available in
//! two independent forms:
//!
//! * [`Engine::Explicit`]: the expanded contribution polynomials in `m`, `r`, `d`;
//! * [`Engine::Chow`]: direct evaluation of the blow-up correction integrals, on
//!   `P^2` with a formal hyperplane class and on the blown-up `P^5` with
//!   [`BlownP5Element`] arithmetic.

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::configuration::LineConfiguration;
use crate::series::{factorial, Rational, TruncatedSeries, PLANE_CAP};

/// Top degree of the blown-up `P^5`.
const P5_DIM: usize = 5;

/// Images of `e^b` (b = 0..=5) under push-forward to `P^5`, as multiples of
/// `l^b`. The blown-up center is a `P^2` with normal bundle `O(1)^3`, so
/// `e^b` pushes to `(-1)^(b-1) s_(b-3)(N)` with `s(N) = (1+h)^-3 = 1 - 3h + 6h^2`,
/// giving `e^3 -> l^3`, `e^4 -> 3 l^4`, `e^5 -> 6 l^5`.
const EXCEPTIONAL_PUSHFORWARD: [i64; 6] = [1, 0, 0, 1, 3, 6];

/// Which of the two correction routes to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Engine {
    Explicit,
    Chow,
}

/// An intersection point as a blow-up center.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointCenter {
    /// Multiplicity of the point on the curve.
    pub m: u64,
    /// Degree of the curve.
    pub d: u64,
}

/// A line as a blow-up center: its multiplicity and the multiplicities of the
/// points where it meets the rest of the configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineCenter {
    pub r: u64,
    pub d: u64,
    pub point_mults: Vec<u64>,
}

impl LineCenter {
    pub fn of_line(cfg: &LineConfiguration, line: usize) -> Self {
        Self {
            r: cfg.mult(line),
            d: cfg.degree(),
            point_mults: cfg
                .points_on_line(line)
                .map(|j| cfg.points()[j].mult)
                .collect(),
        }
    }
}

fn int(x: u64) -> BigInt {
    BigInt::from(x)
}

fn series_from_numerators(terms: &[(usize, BigInt)]) -> TruncatedSeries {
    let mut s = TruncatedSeries::zero(PLANE_CAP);
    for (k, num) in terms {
        s = s
            .add(&TruncatedSeries::monomial(
                PLANE_CAP,
                *k,
                Rational::new(num.clone(), factorial(*k)),
            ))
            .expect("same cap");
    }
    s
}

/// Contribution of one point center in expanded form.
pub fn point_contribution_explicit(c: &PointCenter) -> TruncatedSeries {
    let (m, d) = (int(c.m), int(c.d));
    let mp = |k: u32| -> BigInt { Pow::pow(&m, k) };
    series_from_numerators(&[
        (6, mp(6)),
        (7, 7 * &d * mp(6) - 6 * mp(7)),
        (8, 28 * &d * &d * mp(6) - 48 * &d * mp(7) + 21 * mp(8)),
    ])
}

/// Contribution of one point center from
/// `int_{P^2} k^(8-a) (m + d k)^a / (1 + k)^6`, weighted by `t^a / a!`.
pub fn point_contribution_chow(c: &PointCenter) -> TruncatedSeries {
    // Chow ring of P^2 as series in k truncated above k^2.
    const DIM: usize = 2;
    let k = TruncatedSeries::t(DIM);
    let m = Rational::from_integer(int(c.m));
    let d = Rational::from_integer(int(c.d));
    let restricted_w = TruncatedSeries::constant(DIM, m)
        .add(&k.scale(&d))
        .expect("same cap");
    let normal_chern = TruncatedSeries::one(DIM)
        .add(&k)
        .expect("same cap")
        .pow(6);
    let inv_chern = normal_chern.reciprocal().expect("unit constant term");

    let mut out = TruncatedSeries::zero(PLANE_CAP);
    for alpha in 0..=PLANE_CAP {
        let integrand = k
            .pow((PLANE_CAP - alpha) as u32)
            .mul(&restricted_w.pow(alpha as u32))
            .and_then(|x| x.mul(&inv_chern))
            .expect("same cap");
        let degree = integrand.coeff(DIM);
        if !degree.is_zero() {
            out = out
                .add(&TruncatedSeries::monomial(
                    PLANE_CAP,
                    alpha,
                    degree / Rational::from_integer(factorial(alpha)),
                ))
                .expect("same cap");
        }
    }
    out
}

/// Contribution of one line center in expanded form: the per-line block minus
/// one block per point on the line.
pub fn line_contribution_explicit(c: &LineCenter) -> TruncatedSeries {
    let (r, d) = (int(c.r), int(c.d));
    let rp = |k: u32| -> BigInt { Pow::pow(&r, k) };
    let dp = |k: u32| -> BigInt { Pow::pow(&d, k) };
    let r3 = rp(3);

    let mut t6 = 20 * dp(3) - 45 * dp(2) * &r + 36 * &d * rp(2) - 10 * rp(3);
    let mut t7 = 35 * dp(4) - 105 * dp(3) * &r + 126 * dp(2) * rp(2) - 70 * &d * rp(3) + 15 * rp(4);
    let mut t8 = 56 * dp(5) - 210 * dp(4) * &r + 336 * dp(3) * rp(2) - 280 * dp(2) * rp(3)
        + 120 * &d * rp(4)
        - 21 * rp(5);

    for &m in &c.point_mults {
        let m = int(m);
        let mp = |k: u32| -> BigInt { Pow::pow(&m, k) };
        t6 -= 20 * mp(3) - 45 * mp(2) * &r + 36 * &m * rp(2) - 10 * rp(3);
        t7 -= 140 * &d * mp(3) - 105 * mp(4) - 315 * &d * mp(2) * &r + 210 * mp(3) * &r
            + 252 * &d * &m * rp(2)
            - 126 * mp(2) * rp(2)
            - 70 * &d * rp(3)
            + 15 * rp(4);
        t8 -= 560 * dp(2) * mp(3) - 840 * &d * mp(4) + 336 * mp(5) - 1260 * dp(2) * mp(2) * &r
            + 1680 * &d * mp(3) * &r
            - 630 * mp(4) * &r
            + 1008 * dp(2) * &m * rp(2)
            - 1008 * &d * mp(2) * rp(2)
            + 336 * mp(3) * rp(2)
            - 280 * dp(2) * rp(3)
            + 120 * &d * rp(4)
            - 21 * rp(5);
    }

    series_from_numerators(&[
        (3, r3.clone()),
        (4, &r3 * (4 * &d - 3 * &r)),
        (5, &r3 * (10 * dp(2) - 15 * &d * &r + 6 * rp(2))),
        (6, &r3 * t6),
        (7, &r3 * t7),
        (8, &r3 * t8),
    ])
}

/// A class on the proper transform of a `P^5` blown up along `s` disjoint
/// planes: polynomials in the hyperplane class `l` and exceptional classes
/// `e_1, ..., e_s`, with `e_u e_v = 0` for `u != v` and everything above degree 5 dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlownP5Element {
    /// `pure[a]` is the coefficient of `l^a`.
    pure: Vec<Rational>,
    /// `mixed[u][a][b]` is the coefficient of `l^a e_u^b`, used for `b >= 1`, `a + b <= 5`.
    mixed: Vec<Vec<Vec<Rational>>>,
}

impl BlownP5Element {
    pub fn zero(num_exceptional: usize) -> Self {
        Self {
            pure: vec![Rational::zero(); P5_DIM + 1],
            mixed: vec![vec![vec![Rational::zero(); P5_DIM + 1]; P5_DIM + 1]; num_exceptional],
        }
    }

    pub fn constant(num_exceptional: usize, c: Rational) -> Self {
        let mut x = Self::zero(num_exceptional);
        x.pure[0] = c;
        x
    }

    pub fn one(num_exceptional: usize) -> Self {
        Self::constant(num_exceptional, Rational::one())
    }

    /// `c * l^a`.
    pub fn hyperplane_power(num_exceptional: usize, a: usize, c: Rational) -> Self {
        let mut x = Self::zero(num_exceptional);
        if a <= P5_DIM {
            x.pure[a] = c;
        }
        x
    }

    /// `c * l^a * e_u^b`.
    pub fn monomial(num_exceptional: usize, u: usize, a: usize, b: usize, c: Rational) -> Self {
        if b == 0 {
            return Self::hyperplane_power(num_exceptional, a, c);
        }
        let mut x = Self::zero(num_exceptional);
        if a + b <= P5_DIM {
            x.mixed[u][a][b] = c;
        }
        x
    }

    pub fn num_exceptional(&self) -> usize {
        self.mixed.len()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (x, y) in out.pure.iter_mut().zip(&other.pure) {
            *x += y;
        }
        for (xu, yu) in out.mixed.iter_mut().zip(&other.mixed) {
            for (xa, ya) in xu.iter_mut().zip(yu) {
                for (x, y) in xa.iter_mut().zip(ya) {
                    *x += y;
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            pure: self.pure.iter().map(|x| x * c).collect(),
            mixed: self
                .mixed
                .iter()
                .map(|u| u.iter().map(|a| a.iter().map(|x| x * c).collect()).collect())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let s = self.num_exceptional();
        let mut out = Self::zero(s);
        for (a1, x) in self.pure.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (a2, y) in other.pure.iter().enumerate().take(P5_DIM + 1 - a1) {
                out.pure[a1 + a2] += x * y;
            }
        }
        for u in 0..s {
            for a1 in 0..=P5_DIM {
                for a2 in 0..=P5_DIM - a1 {
                    let a = a1 + a2;
                    for b in 1..=P5_DIM - a {
                        // pure * mixed and mixed * pure
                        let term = &self.pure[a1] * &other.mixed[u][a2][b]
                            + &self.mixed[u][a1][b] * &other.pure[a2];
                        out.mixed[u][a][b] += term;
                    }
                    for b1 in 1..=P5_DIM - a {
                        let x = &self.mixed[u][a1][b1];
                        if x.is_zero() {
                            continue;
                        }
                        for b2 in 1..=P5_DIM - a - b1 {
                            out.mixed[u][a][b1 + b2] += x * &other.mixed[u][a2][b2];
                        }
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.num_exceptional()), |acc, _| acc.mul(self))
    }

    /// Inverse of an element with nonzero constant term (the positive-degree
    /// part is nilpotent). `None` when the constant term vanishes.
    pub fn reciprocal(&self) -> Option<Self> {
        let c = self.pure[0].clone();
        if c.is_zero() {
            return None;
        }
        let s = self.num_exceptional();
        let inv_c = c.recip();
        let nilpotent = self
            .sub(&Self::constant(s, c))
            .scale(&-inv_c.clone());
        let mut term = Self::one(s);
        let mut sum = Self::one(s);
        for _ in 0..P5_DIM {
            term = term.mul(&nilpotent);
            sum = sum.add(&term);
        }
        Some(sum.scale(&inv_c))
    }
}

/// Degree of the top-degree part of `cls` on the blown-up `P^5`.
pub fn chow_integral_blown_p5(cls: &BlownP5Element) -> Rational {
    integral_times_hyperplane_power(cls, 0)
}

/// Degree of `l^a * cls`, read off from the degree `5 - a` part of `cls`.
fn integral_times_hyperplane_power(cls: &BlownP5Element, a: usize) -> Rational {
    let top = P5_DIM - a;
    let mut total = cls.pure[top].clone();
    for u in &cls.mixed {
        for b in 1..=top {
            let c = EXCEPTIONAL_PUSHFORWARD[b];
            if c != 0 {
                total += &u[top - b][b] * Rational::from_integer(c.into());
            }
        }
    }
    total
}

/// Contribution of one line center from
/// `int l^(8-j) (r + d l - sum m_u e_u)^j / (1 + l - sum e_u)^3`, weighted by `t^j / j!`.
pub fn line_contribution_chow(c: &LineCenter) -> TruncatedSeries {
    let s = c.point_mults.len();
    let q = |x: u64| Rational::from_integer(int(x));
    let sum_e = (0..s).fold(BlownP5Element::zero(s), |acc, u| {
        acc.add(&BlownP5Element::monomial(s, u, 0, 1, Rational::one()))
    });
    let normal_chern = BlownP5Element::one(s)
        .add(&BlownP5Element::hyperplane_power(s, 1, Rational::one()))
        .sub(&sum_e)
        .pow(3);
    let inv_chern = normal_chern.reciprocal().expect("unit constant term");
    let restricted_w = c.point_mults.iter().enumerate().fold(
        BlownP5Element::constant(s, q(c.r)).add(&BlownP5Element::hyperplane_power(s, 1, q(c.d))),
        |acc, (u, &m)| acc.sub(&BlownP5Element::monomial(s, u, 0, 1, q(m))),
    );

    // running product w^j / c(N)
    let mut partial = inv_chern;
    let coeffs = (0..=PLANE_CAP).map(|j| {
        if j > 0 {
            partial = partial.mul(&restricted_w);
        }
        let h_power = PLANE_CAP - j;
        if h_power > P5_DIM {
            return Rational::zero();
        }
        integral_times_hyperplane_power(&partial, h_power) / Rational::from_integer(factorial(j))
    });
    TruncatedSeries::from_coeffs(PLANE_CAP, coeffs.collect::<Vec<_>>())
}

/// `sum_j d^j t^j / j!`: the intersection numbers in `P^8` before correction.
pub fn bezout_baseline(d: u64) -> TruncatedSeries {
    let d = int(d);
    TruncatedSeries::from_coeffs(
        PLANE_CAP,
        (0..=PLANE_CAP).map(|j| Rational::new(Pow::pow(&d, j as u32), factorial(j))),
    )
}

/// Bézout baseline minus all point and line contributions, using `engine`.
pub fn assemble_bezout(cfg: &LineConfiguration, engine: Engine) -> TruncatedSeries {
    let d = cfg.degree();
    let points = cfg.points().iter().map(|p| {
        let c = PointCenter { m: p.mult, d };
        match engine {
            Engine::Explicit => point_contribution_explicit(&c),
            Engine::Chow => point_contribution_chow(&c),
        }
    });
    let lines = (0..cfg.n()).map(|i| {
        let c = LineCenter::of_line(cfg, i);
        match engine {
            Engine::Explicit => line_contribution_explicit(&c),
            Engine::Chow => line_contribution_chow(&c),
        }
    });
    points
        .chain(lines)
        .fold(bezout_baseline(d), |acc, x| acc.sub(&x).expect("same cap"))
}
