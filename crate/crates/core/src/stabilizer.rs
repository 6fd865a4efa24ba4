//! Stabilizers, component counts and orbit-closure degrees.
//!
//! The orbit-closure degree is the predegree at `j = orbit dimension` divided by
//! the number of connected components of the stabilizer. For multiplicity-only
//! types (one line, two lines, triangle) the count is a symmetry count of the
//! multiplicities. Stars and fans reduce to the finite stabilizer in `PGL(2)` of
//! the weighted pencil of concurrent lines, and general configurations to the
//! finite stabilizer in `PGL(3)` of the weighted dual points. Both finite groups
//! are enumerated exactly by mapping a fixed projective frame onto every
//! candidate frame with matching weights.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::configuration::{ConfigTag, LineConfiguration};
use crate::linalg::{
    determinant, inverse, mat_mul, mat_vec, normalize_projective, projectivity_between_frames,
    to_rational, Matrix,
};
use crate::series::TruncatedSeries;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StabilizerError {
    #[error("fewer than three distinct points on the line: the stabilizer is infinite")]
    InfiniteStabilizer,
    #[error("no four points in general position; use the classified configuration types")]
    NotApplicable,
    #[error("{0} configurations need line coordinates for a component count (abstract input only determines multiplicity symmetries); supply a \"lines\" input")]
    NeedsCoordinates(ConfigTag),
    #[error("point {0} appears twice in the weighted set")]
    DuplicatePoint(usize),
    #[error("invalid point {0}: zero vector or wrong dimension")]
    InvalidPoint(usize),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

/// An invertible `N x N` matrix up to scale, stored as coprime integers with the
/// first nonzero entry positive (row-major).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectiveMatrix<const N: usize> {
    entries: Vec<BigInt>,
}

pub type Pgl2Element = ProjectiveMatrix<2>;
pub type Pgl3Element = ProjectiveMatrix<3>;

impl<const N: usize> ProjectiveMatrix<N> {
    /// `None` for singular or wrongly sized input.
    pub fn from_rational(m: &Matrix) -> Option<Self> {
        if m.len() != N || m.iter().any(|r| r.len() != N) || determinant(m).is_zero() {
            return None;
        }
        let flat: Vec<_> = m.iter().flatten().cloned().collect();
        normalize_projective(&flat).map(|entries| Self { entries })
    }

    pub fn from_ints(rows: [[i64; N]; N]) -> Option<Self> {
        let m: Matrix = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x).into()).collect())
            .collect();
        Self::from_rational(&m)
    }

    pub fn identity() -> Self {
        Self::from_rational(&crate::linalg::identity(N)).expect("identity is invertible")
    }

    pub fn to_rational(&self) -> Matrix {
        self.entries
            .chunks(N)
            .map(to_rational)
            .collect()
    }

    pub fn entry(&self, row: usize, col: usize) -> &BigInt {
        &self.entries[row * N + col]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self::from_rational(&mat_mul(&self.to_rational(), &other.to_rational()))
            .expect("product of invertible matrices")
    }

    pub fn inverse(&self) -> Self {
        Self::from_rational(&inverse(&self.to_rational()).expect("invertible"))
            .expect("inverse is invertible")
    }

    /// Image of a projective point, normalized.
    pub fn apply(&self, point: &[BigInt]) -> Vec<BigInt> {
        normalize_projective(&mat_vec(&self.to_rational(), &to_rational(point)))
            .expect("invertible map sends nonzero vectors to nonzero vectors")
    }
}

impl<const N: usize> fmt::Display for ProjectiveMatrix<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .entries
            .chunks(N)
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

impl<const N: usize> Serialize for ProjectiveMatrix<N> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self
            .entries
            .chunks(N)
            .map(|r| r.iter().map(|x| x.to_string()).collect())
            .collect();
        rows.serialize(serializer)
    }
}

/// Distinct points of `P^(N-1)` with positive integer weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedPointSet<const N: usize> {
    points: Vec<Vec<BigInt>>,
    weights: Vec<u64>,
}

impl<const N: usize> WeightedPointSet<N> {
    pub fn new(points: Vec<Vec<BigInt>>, weights: Vec<u64>) -> Result<Self, StabilizerError> {
        assert_eq!(points.len(), weights.len(), "one weight per point");
        let mut normalized = Vec::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if p.len() != N {
                return Err(StabilizerError::InvalidPoint(i));
            }
            let q = normalize_projective(&to_rational(p)).ok_or(StabilizerError::InvalidPoint(i))?;
            if normalized.contains(&q) {
                return Err(StabilizerError::DuplicatePoint(i));
            }
            normalized.push(q);
        }
        Ok(Self {
            points: normalized,
            weights,
        })
    }

    pub fn from_ints(points: &[[i64; N]], weights: Vec<u64>) -> Result<Self, StabilizerError> {
        Self::new(
            points
                .iter()
                .map(|p| p.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
            weights,
        )
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<BigInt>] {
        &self.points
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    /// Whether `g` maps the weighted set onto itself.
    pub fn is_preserved_by(&self, g: &ProjectiveMatrix<N>) -> bool {
        let lookup: HashMap<&[BigInt], u64> = self
            .points
            .iter()
            .map(Vec::as_slice)
            .zip(self.weights.iter().copied())
            .collect();
        self.points
            .iter()
            .zip(&self.weights)
            .all(|(p, w)| lookup.get(g.apply(p).as_slice()) == Some(w))
    }

    /// The point set after applying `g` (weights travel with their points).
    pub fn transformed(&self, g: &ProjectiveMatrix<N>) -> Self {
        Self {
            points: self.points.iter().map(|p| g.apply(p)).collect(),
            weights: self.weights.clone(),
        }
    }

    /// Indices forming a projective frame: `N + 1` points, any `N` of them independent.
    fn is_frame(&self, idx: &[usize]) -> bool {
        let pts: Vec<_> = idx.iter().map(|&i| to_rational(&self.points[i])).collect();
        crate::linalg::frame_matrix(&pts).is_some()
    }

    fn first_frame(&self) -> Option<Vec<usize>> {
        combinations(self.len(), N + 1).find(|c| self.is_frame(c))
    }

    /// The finite group of projectivities preserving the weighted set, or `None`
    /// when the set contains no projective frame.
    fn enumerate_stabilizer(&self) -> Option<Vec<ProjectiveMatrix<N>>> {
        let base = self.first_frame()?;
        let src: Vec<_> = base.iter().map(|&i| to_rational(&self.points[i])).collect();
        let candidates: Vec<Vec<usize>> = arrangements(self.len(), N + 1)
            .filter(|t| t.iter().zip(&base).all(|(&a, &b)| self.weights[a] == self.weights[b]))
            .collect();
        let group: BTreeSet<ProjectiveMatrix<N>> = candidates
            .par_iter()
            .filter_map(|t| {
                let dst: Vec<_> = t.iter().map(|&i| to_rational(&self.points[i])).collect();
                let m = projectivity_between_frames(&src, &dst)?;
                let g = ProjectiveMatrix::<N>::from_rational(&m)?;
                self.is_preserved_by(&g).then_some(g)
            })
            .collect();
        Some(group.into_iter().collect())
    }
}

/// k-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Option<Vec<usize>> = (k <= n).then(|| (0..k).collect());
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                current = None;
                break;
            }
            i -= 1;
            if next[i] < n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                current = Some(next);
                break;
            }
        }
        Some(out)
    })
}

/// Ordered k-tuples of distinct elements of `0..n`.
fn arrangements(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    combinations(n, k).flat_map(|c| permutations(&c))
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Finite stabilizer in `PGL(2)` of a weighted set of at least three points of `P^1`.
pub fn pgl2_stabilizer(ps: &WeightedPointSet<2>) -> Result<Vec<Pgl2Element>, StabilizerError> {
    if ps.len() < 3 {
        return Err(StabilizerError::InfiniteStabilizer);
    }
    ps.enumerate_stabilizer()
        .ok_or_else(|| StabilizerError::InternalInconsistency("three distinct points always form a frame".into()))
}

/// Finite stabilizer in `PGL(3)` of a weighted planar point set containing four
/// points in general position.
pub fn pgl3_stabilizer(duals: &WeightedPointSet<3>) -> Result<Vec<Pgl3Element>, StabilizerError> {
    duals
        .enumerate_stabilizer()
        .ok_or(StabilizerError::NotApplicable)
}

/// Enumerated stabilizer elements, when the component count came from an enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "group", content = "elements")]
pub enum StabilizerElements {
    /// Acting on the pencil of concurrent lines.
    Pgl2(Vec<Pgl2Element>),
    /// Acting on the dual plane (line coordinates).
    Pgl3(Vec<Pgl3Element>),
}

impl StabilizerElements {
    pub fn len(&self) -> usize {
        match self {
            StabilizerElements::Pgl2(g) => g.len(),
            StabilizerElements::Pgl3(g) => g.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilizerReport {
    pub tag: ConfigTag,
    pub orbit_dim: u32,
    /// Number of connected components of the stabilizer.
    pub components: u64,
    #[serde(serialize_with = "ser_bigint")]
    pub predegree: BigInt,
    #[serde(serialize_with = "ser_bigint")]
    pub orbit_degree: BigInt,
    pub elements: Option<StabilizerElements>,
    /// Linear equations of the identity component in a normal form of the type.
    pub identity_component: &'static str,
}

fn ser_bigint<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn orbit_dimension(cfg: &LineConfiguration) -> u32 {
    cfg.classify().orbit_dim
}

fn identity_component(tag: ConfigTag) -> &'static str {
    match tag {
        ConfigTag::SingleLine => "x^d: p1 = p2 = 0 (dimension 6)",
        ConfigTag::TwoLines => "x^k y^(d-k): p1 = p2 = p3 = p5 = 0 (dimension 4)",
        ConfigTag::Star => "f(x,y): p0 = p4, p1 = p2 = p3 = p5 = 0 (dimension 3)",
        ConfigTag::Triangle => "x^a y^b z^c: p1 = p2 = p3 = p5 = p6 = p7 = 0 (dimension 2)",
        ConfigTag::Fan => "f(x,y) z^k: p0 = p4, p1 = p2 = p3 = p5 = p6 = p7 = 0 (dimension 1)",
        ConfigTag::General => "trivial (finite stabilizer)",
    }
}

/// Order of the permutation group of a multiset of values (the symmetries of
/// the multiplicity vector).
fn multiplicity_symmetries(values: &[u64]) -> u64 {
    let mut counts: HashMap<u64, u64> = HashMap::new();
    for &v in values {
        *counts.entry(v).or_default() += 1;
    }
    counts.values().map(|&c| (1..=c).product::<u64>()).product()
}

/// The pencil of lines through a common point, as weighted points of `P^1`.
fn pencil_points(cfg: &LineConfiguration, lines: &[usize]) -> Result<WeightedPointSet<2>, StabilizerError> {
    let coords = cfg
        .coords()
        .ok_or(StabilizerError::NeedsCoordinates(cfg.classify().tag))?;
    let u = to_rational(coords[lines[0]].coeffs());
    let v = to_rational(coords[lines[1]].coeffs());
    // A pair of coordinates on which the basis (u, v) is independent.
    let (i, j) = [(0, 1), (0, 2), (1, 2)]
        .into_iter()
        .find(|&(i, j)| !(&u[i] * &v[j] - &u[j] * &v[i]).is_zero())
        .ok_or_else(|| StabilizerError::InternalInconsistency("star lines coincide".into()))?;
    let basis: Matrix = vec![vec![u[i].clone(), v[i].clone()], vec![u[j].clone(), v[j].clone()]];
    let inv = inverse(&basis).expect("independent by choice of coordinates");
    let mut points = Vec::with_capacity(lines.len());
    for &k in lines {
        let l = to_rational(coords[k].coeffs());
        let st = mat_vec(&inv, &[l[i].clone(), l[j].clone()]);
        points.push(normalize_projective(&st).expect("nonzero line"));
    }
    WeightedPointSet::new(points, lines.iter().map(|&k| cfg.mult(k)).collect())
}

fn dual_points(cfg: &LineConfiguration) -> Result<WeightedPointSet<3>, StabilizerError> {
    let coords = cfg
        .coords()
        .ok_or(StabilizerError::NeedsCoordinates(ConfigTag::General))?;
    WeightedPointSet::new(
        coords.iter().map(|l| l.coeffs().to_vec()).collect(),
        cfg.mults().to_vec(),
    )
}

/// Component count of the stabilizer and the orbit-closure degree
/// `predegree(orbit_dim) / components` for a configuration with polynomial `poly`.
pub fn component_count(
    cfg: &LineConfiguration,
    poly: &TruncatedSeries,
) -> Result<StabilizerReport, StabilizerError> {
    let class = cfg.classify();
    let (components, elements) = match class.tag {
        ConfigTag::SingleLine => (1, None),
        ConfigTag::TwoLines | ConfigTag::Triangle => (multiplicity_symmetries(cfg.mults()), None),
        ConfigTag::Star => {
            let all: Vec<usize> = (0..cfg.n()).collect();
            let g = pgl2_stabilizer(&pencil_points(cfg, &all)?)?;
            (g.len() as u64, Some(StabilizerElements::Pgl2(g)))
        }
        ConfigTag::Fan => {
            let fan = class.fan.as_ref().expect("fan data for a fan");
            let g = pgl2_stabilizer(&pencil_points(cfg, &fan.star_lines)?)?;
            (g.len() as u64, Some(StabilizerElements::Pgl2(g)))
        }
        ConfigTag::General => {
            let g = pgl3_stabilizer(&dual_points(cfg)?)?;
            (g.len() as u64, Some(StabilizerElements::Pgl3(g)))
        }
    };

    let predegree = poly.predegree_at(class.orbit_dim as usize);
    if !predegree.is_integer() || !predegree.is_positive() {
        return Err(StabilizerError::InternalInconsistency(format!(
            "predegree at j = {} is {predegree}, expected a positive integer",
            class.orbit_dim
        )));
    }
    let predegree = predegree.to_integer();
    let comps = BigInt::from(components);
    if !(&predegree % &comps).is_zero() {
        return Err(StabilizerError::InternalInconsistency(format!(
            "predegree {predegree} is not divisible by {components} components"
        )));
    }
    Ok(StabilizerReport {
        tag: class.tag,
        orbit_dim: class.orbit_dim,
        components,
        orbit_degree: &predegree / comps,
        predegree,
        elements,
        identity_component: identity_component(class.tag),
    })
}
