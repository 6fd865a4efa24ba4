//! Line configurations in the projective plane.
//!
//! A configuration is a list of distinct lines `L_i` with multiplicities `r_i`
//! together with its incidence structure: every pair of lines meets in exactly
//! one [`IncidencePoint`], and a point records all lines through it. The
//! incidence can come from exact rational coordinates or be given abstractly
//! (by the bundles of three or more concurrent lines); abstract inputs are
//! never checked for realizability and are reported as "formal".

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Pow, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{cross, normalize_projective};
use crate::series::{parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("configuration has no lines")]
    Empty,
    #[error("line {0} has all coefficients zero")]
    InvalidLine(usize),
    #[error("lines {0} and {1} are proportional; express repeated lines through the multiplicity")]
    DuplicateLine(usize, usize),
    #[error("line {0} has multiplicity {1}; multiplicities must be at least 1")]
    InvalidMultiplicity(usize, u64),
    #[error("{lines} lines but {mults} multiplicities")]
    LengthMismatch { lines: usize, mults: usize },
    #[error("line index {index} out of range for {n} lines")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("bundle {0} must contain at least two distinct lines")]
    BundleTooSmall(usize),
    #[error("bundles {0} and {1} share two or more lines (two distinct lines would meet twice)")]
    InconsistentIncidence(usize, usize),
    #[error("point {point} does not lie on line {line}")]
    PointNotOnLine { line: usize, point: usize },
    #[error("{0}")]
    Parse(String),
}

/// The line `a x + b y + c z = 0`, stored as coprime integers with the first
/// nonzero entry positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalLine {
    coeffs: [BigInt; 3],
}

impl RationalLine {
    /// `None` when all three coefficients vanish.
    pub fn new(a: Rational, b: Rational, c: Rational) -> Option<Self> {
        let v = normalize_projective(&[a, b, c])?;
        let [a, b, c]: [BigInt; 3] = v.try_into().ok()?;
        Some(Self { coeffs: [a, b, c] })
    }

    pub fn from_ints(a: i64, b: i64, c: i64) -> Option<Self> {
        let q = |x: i64| Rational::from_integer(x.into());
        Self::new(q(a), q(b), q(c))
    }

    pub fn coeffs(&self) -> &[BigInt; 3] {
        &self.coeffs
    }

    pub fn rational_coeffs(&self) -> Vec<Rational> {
        self.coeffs
            .iter()
            .cloned()
            .map(Rational::from_integer)
            .collect()
    }

    /// Normalized homogeneous coordinates of the intersection point, or `None`
    /// if the lines coincide.
    pub fn meet(&self, other: &Self) -> Option<Vec<BigInt>> {
        let p = cross(&self.coeffs, &other.coeffs);
        normalize_projective(&p.map(Rational::from_integer))
    }
}

impl fmt::Display for RationalLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = &self.coeffs;
        write!(f, "{a}x + {b}y + {c}z")
    }
}

/// A point where two or more lines of the configuration meet.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IncidencePoint {
    /// Sorted indices of the lines through the point.
    pub lines: Vec<usize>,
    /// Multiplicity `m` of the point on the curve: the sum of the multiplicities of its lines.
    pub mult: u64,
}

impl IncidencePoint {
    pub fn contains(&self, line: usize) -> bool {
        self.lines.binary_search(&line).is_ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineConfiguration {
    mults: Vec<u64>,
    points: Vec<IncidencePoint>,
    coords: Option<Vec<RationalLine>>,
}

impl LineConfiguration {
    /// Computes all pairwise intersections exactly and groups coincident ones.
    pub fn from_coordinates(lines: Vec<RationalLine>, mults: Vec<u64>) -> Result<Self, ConfigError> {
        check_mults(&mults)?;
        if lines.len() != mults.len() {
            return Err(ConfigError::LengthMismatch {
                lines: lines.len(),
                mults: mults.len(),
            });
        }
        let mut by_point: BTreeMap<Vec<BigInt>, BTreeSet<usize>> = BTreeMap::new();
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                let p = lines[i]
                    .meet(&lines[j])
                    .ok_or(ConfigError::DuplicateLine(i, j))?;
                let entry = by_point.entry(p).or_default();
                entry.insert(i);
                entry.insert(j);
            }
        }
        let points = build_points(by_point.into_values(), &mults);
        Ok(Self {
            mults,
            points,
            coords: Some(lines),
        })
    }

    /// Builds a configuration from line coefficient triples; a zero triple is
    /// reported as `InvalidLine`.
    pub fn from_coefficients(
        coeffs: Vec<[Rational; 3]>,
        mults: Vec<u64>,
    ) -> Result<Self, ConfigError> {
        let lines = coeffs
            .into_iter()
            .enumerate()
            .map(|(i, [a, b, c])| RationalLine::new(a, b, c).ok_or(ConfigError::InvalidLine(i)))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_coordinates(lines, mults)
    }

    /// Abstract incidence: `bundles` lists sets of concurrent lines; every pair
    /// not covered by a bundle becomes an ordinary double point.
    pub fn from_abstract(mults: Vec<u64>, bundles: &[Vec<usize>]) -> Result<Self, ConfigError> {
        check_mults(&mults)?;
        let n = mults.len();
        let mut sets: Vec<BTreeSet<usize>> = Vec::with_capacity(bundles.len());
        for (b, bundle) in bundles.iter().enumerate() {
            let set: BTreeSet<usize> = bundle.iter().copied().collect();
            if let Some(&index) = set.iter().find(|&&i| i >= n) {
                return Err(ConfigError::IndexOutOfRange { index, n });
            }
            if set.len() < 2 {
                return Err(ConfigError::BundleTooSmall(b));
            }
            if let Some(prev) = sets.iter().position(|s| s.intersection(&set).count() >= 2) {
                return Err(ConfigError::InconsistentIncidence(prev, b));
            }
            sets.push(set);
        }
        let mut covered = vec![vec![false; n]; n];
        for set in &sets {
            for &i in set {
                for &j in set {
                    covered[i][j] = true;
                }
            }
        }
        for (i, row) in covered.iter().enumerate() {
            for (j, &seen) in row.iter().enumerate().skip(i + 1) {
                if !seen {
                    sets.push([i, j].into_iter().collect());
                }
            }
        }
        Ok(Self {
            points: build_points(sets, &mults),
            mults,
            coords: None,
        })
    }

    pub fn from_input(input: &ConfigInput) -> Result<Self, ConfigError> {
        match (&input.lines, &input.abstract_config) {
            (Some(lines), None) => {
                let mut coeffs = Vec::with_capacity(lines.len());
                for (i, line) in lines.iter().enumerate() {
                    let mut triple = Vec::with_capacity(3);
                    for (k, c) in line.coeffs.iter().enumerate() {
                        let r = c.to_rational().map_err(|e| {
                            ConfigError::Parse(format!("lines[{i}].coeffs[{k}]: {e}"))
                        })?;
                        triple.push(r);
                    }
                    let [a, b, c]: [Rational; 3] = triple.try_into().expect("three coefficients");
                    coeffs.push([a, b, c]);
                }
                let mults = lines.iter().map(|l| l.mult).collect();
                Self::from_coefficients(coeffs, mults)
            }
            (None, Some(abs)) => Self::from_abstract(abs.mults.clone(), &abs.bundles),
            (Some(_), Some(_)) => Err(ConfigError::Parse(
                "give either \"lines\" or \"abstract\", not both".into(),
            )),
            (None, None) => Err(ConfigError::Parse(
                "expected a \"lines\" or an \"abstract\" field".into(),
            )),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let input: ConfigInput =
            serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        Self::from_input(&input)
    }

    /// Union of two configurations declared to meet transversally: every line of
    /// one meets the other in distinct double points. The result is abstract.
    pub fn transversal_union(&self, other: &Self) -> Self {
        let offset = self.n();
        let mults: Vec<u64> = self.mults.iter().chain(&other.mults).copied().collect();
        let bundles: Vec<Vec<usize>> = self
            .points
            .iter()
            .map(|p| p.lines.clone())
            .chain(
                other
                    .points
                    .iter()
                    .map(|p| p.lines.iter().map(|i| i + offset).collect()),
            )
            .filter(|b| b.len() >= 3)
            .collect();
        Self::from_abstract(mults, &bundles).expect("transversal union of valid configurations")
    }

    /// Relabels lines: new line `k` is old line `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut inverse = vec![0; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            inverse[old] = new;
        }
        let mults: Vec<u64> = perm.iter().map(|&old| self.mults[old]).collect();
        let coords = self
            .coords
            .as_ref()
            .map(|c| perm.iter().map(|&old| c[old].clone()).collect());
        let sets = self
            .points
            .iter()
            .map(|p| p.lines.iter().map(|&old| inverse[old]).collect::<BTreeSet<_>>());
        Self {
            points: build_points(sets, &mults),
            mults,
            coords,
        }
    }

    /// Number of distinct lines.
    pub fn n(&self) -> usize {
        self.mults.len()
    }

    pub fn mults(&self) -> &[u64] {
        &self.mults
    }

    pub fn mult(&self, line: usize) -> u64 {
        self.mults[line]
    }

    /// Degree `d = sum r_i`.
    pub fn degree(&self) -> u64 {
        self.mults.iter().sum()
    }

    /// Dimension `N = d(d+3)/2` of the projective space of degree-`d` curves.
    pub fn ambient_dim(&self) -> BigInt {
        let d = BigInt::from(self.degree());
        &d * (&d + 3) / 2
    }

    /// All intersection points, ordered lexicographically by their line sets.
    pub fn points(&self) -> &[IncidencePoint] {
        &self.points
    }

    pub fn coords(&self) -> Option<&[RationalLine]> {
        self.coords.as_deref()
    }

    /// True for abstract input: results are formal (realizability unchecked).
    pub fn is_formal(&self) -> bool {
        self.coords.is_none()
    }

    /// Indices of the points lying on `line`.
    pub fn points_on_line(&self, line: usize) -> impl Iterator<Item = usize> + '_ {
        self.points
            .iter()
            .enumerate()
            .filter(move |(_, p)| p.contains(line))
            .map(|(j, _)| j)
    }

    fn check_line(&self, line: usize) -> Result<(), ConfigError> {
        if line >= self.n() {
            return Err(ConfigError::IndexOutOfRange {
                index: line,
                n: self.n(),
            });
        }
        Ok(())
    }

    /// `rho_{alpha,ij} = (sum r_k)^alpha - sum r_k^alpha` over the other lines
    /// `k != i` through point `j`.
    pub fn rho(&self, line: usize, point: usize, alpha: u32) -> Result<BigInt, ConfigError> {
        self.check_line(line)?;
        let p = self.points.get(point).ok_or(ConfigError::PointNotOnLine { line, point })?;
        if !p.contains(line) {
            return Err(ConfigError::PointNotOnLine { line, point });
        }
        let others = p.lines.iter().filter(|&&k| k != line).map(|&k| BigInt::from(self.mults[k]));
        let (sum, power_sum) = others.fold((BigInt::zero(), BigInt::zero()), |(s, ps), r| {
            let rp = Pow::pow(&r, alpha);
            (s + r, ps + rp)
        });
        Ok(Pow::pow(&sum, alpha) - power_sum)
    }

    /// `rho_{alpha,i}`: the sum of `rho_{alpha,ij}` over the points on line `i`.
    pub fn rho_line(&self, line: usize, alpha: u32) -> Result<BigInt, ConfigError> {
        self.check_line(line)?;
        self.points_on_line(line)
            .map(|j| self.rho(line, j, alpha))
            .sum()
    }

    /// Whether every point on `line` is an ordinary double point.
    pub fn is_transversal_line(&self, line: usize) -> bool {
        self.points_on_line(line).all(|j| self.points[j].lines.len() == 2)
    }

    pub fn classify(&self) -> ConfigClass {
        let n = self.n();
        let largest = self.points.iter().max_by_key(|p| p.lines.len());
        match n {
            1 => ConfigClass::new(ConfigTag::SingleLine, None),
            2 => ConfigClass::new(ConfigTag::TwoLines, None),
            _ if largest.is_some_and(|p| p.lines.len() == n) => ConfigClass::new(ConfigTag::Star, None),
            3 => ConfigClass::new(ConfigTag::Triangle, None),
            _ => match largest.filter(|p| p.lines.len() == n - 1) {
                Some(p) => {
                    let odd_line = (0..n).find(|i| !p.contains(*i)).expect("one line off the star");
                    ConfigClass::new(
                        ConfigTag::Fan,
                        Some(FanData {
                            star_lines: p.lines.clone(),
                            odd_line,
                            odd_mult: self.mults[odd_line],
                        }),
                    )
                }
                None => ConfigClass::new(ConfigTag::General, None),
            },
        }
    }
}

fn check_mults(mults: &[u64]) -> Result<(), ConfigError> {
    if mults.is_empty() {
        return Err(ConfigError::Empty);
    }
    if let Some((i, &m)) = mults.iter().enumerate().find(|(_, &m)| m == 0) {
        return Err(ConfigError::InvalidMultiplicity(i, m));
    }
    Ok(())
}

fn build_points(
    sets: impl IntoIterator<Item = BTreeSet<usize>>,
    mults: &[u64],
) -> Vec<IncidencePoint> {
    let mut points: Vec<IncidencePoint> = sets
        .into_iter()
        .map(|s| {
            let lines: Vec<usize> = s.into_iter().collect();
            let mult = lines.iter().map(|&i| mults[i]).sum();
            IncidencePoint { lines, mult }
        })
        .collect();
    points.sort_by(|a, b| a.lines.cmp(&b.lines));
    points
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConfigTag {
    SingleLine,
    TwoLines,
    Star,
    Triangle,
    Fan,
    General,
}

impl ConfigTag {
    /// Orbit dimension of the type; `General` configurations have an 8-dimensional orbit.
    pub fn orbit_dim(self) -> u32 {
        match self {
            ConfigTag::SingleLine => 2,
            ConfigTag::TwoLines => 4,
            ConfigTag::Star => 5,
            ConfigTag::Triangle => 6,
            ConfigTag::Fan => 7,
            ConfigTag::General => 8,
        }
    }
}

impl fmt::Display for ConfigTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// The concurrent part of a fan and its one remaining line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanData {
    pub star_lines: Vec<usize>,
    pub odd_line: usize,
    pub odd_mult: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigClass {
    pub tag: ConfigTag,
    pub orbit_dim: u32,
    pub fan: Option<FanData>,
}

impl ConfigClass {
    fn new(tag: ConfigTag, fan: Option<FanData>) -> Self {
        Self {
            tag,
            orbit_dim: tag.orbit_dim(),
            fan,
        }
    }

    pub fn is_small_orbit(&self) -> bool {
        self.orbit_dim < 8
    }
}

/// JSON input: `{"lines":[{"coeffs":["1","0","0"],"mult":2}, ...]}` or
/// `{"abstract":{"mults":[1,1,1,1],"bundles":[[0,1,2]]}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigInput {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lines: Option<Vec<LineInput>>,
    #[serde(default, rename = "abstract", skip_serializing_if = "Option::is_none")]
    pub abstract_config: Option<AbstractInput>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineInput {
    pub coeffs: [Coefficient; 3],
    pub mult: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbstractInput {
    pub mults: Vec<u64>,
    #[serde(default)]
    pub bundles: Vec<Vec<usize>>,
}

/// A coefficient written as an exact string (`"3/4"`) or a JSON integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Int(i64),
    Text(String),
}

impl Coefficient {
    pub fn to_rational(&self) -> Result<Rational, String> {
        match self {
            Coefficient::Int(i) => Ok(Rational::from_integer((*i).into())),
            Coefficient::Text(s) => parse_rational(s).map_err(|e| e.to_string()),
        }
    }
}
