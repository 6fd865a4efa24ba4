//! Random configurations and independent oracles shared by the integration tests.
#![allow(dead_code)]

use lineorbit::configuration::{LineConfiguration, RationalLine};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `e_0..=e_k` of the multiset by the direct recurrence `E(x) = prod (1 + r x)`.
pub fn elementary(values: &[u64], k: usize) -> Vec<BigInt> {
    let mut e = vec![BigInt::from(0); k + 1];
    e[0] = BigInt::from(1);
    for &r in values {
        for j in (1..=k).rev() {
            let prev = e[j - 1].clone();
            e[j] += prev * r;
        }
    }
    e
}

/// Random bundles of three or more lines, pairwise sharing at most one line.
pub fn random_bundles(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<usize>> {
    let mut covered = vec![vec![false; n]; n];
    let mut bundles = Vec::new();
    if n < 3 {
        return bundles;
    }
    for _ in 0..rng.gen_range(0..=3) {
        let size = rng.gen_range(3..=n.min(5));
        let mut lines: Vec<usize> = (0..n).collect();
        lines.shuffle(rng);
        lines.truncate(size);
        lines.sort();
        let clash = lines
            .iter()
            .any(|&i| lines.iter().any(|&j| i != j && covered[i][j]));
        if clash {
            continue;
        }
        for &i in &lines {
            for &j in &lines {
                covered[i][j] = true;
            }
        }
        bundles.push(lines);
    }
    bundles
}

/// An abstract configuration with `1..=max_lines` lines and multiplicities `1..=max_mult`.
pub fn random_abstract(rng: &mut ChaCha8Rng, max_lines: usize, max_mult: u64) -> LineConfiguration {
    let n = rng.gen_range(1..=max_lines);
    let mults: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=max_mult)).collect();
    let bundles = random_bundles(rng, n);
    LineConfiguration::from_abstract(mults, &bundles).expect("consistent bundles")
}

fn cross(a: [i64; 3], b: [i64; 3]) -> [i64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn random_vec(rng: &mut ChaCha8Rng, bound: i64) -> [i64; 3] {
    loop {
        let v = [
            rng.gen_range(-bound..=bound),
            rng.gen_range(-bound..=bound),
            rng.gen_range(-bound..=bound),
        ];
        if v != [0, 0, 0] {
            return v;
        }
    }
}

/// Integer line coefficients, some forced through a common point so that
/// higher-order points actually occur.
pub fn random_coordinate_lines(rng: &mut ChaCha8Rng, n: usize) -> Vec<[i64; 3]> {
    let centre = random_vec(rng, 3);
    let through = rng.gen_range(0..=n);
    (0..n)
        .map(|k| {
            if k < through {
                loop {
                    let l = cross(centre, random_vec(rng, 3));
                    if l != [0, 0, 0] {
                        return l;
                    }
                }
            } else {
                random_vec(rng, 4)
            }
        })
        .collect()
}

pub fn from_int_lines(lines: &[[i64; 3]], mults: Vec<u64>) -> Option<LineConfiguration> {
    let lines: Option<Vec<RationalLine>> = lines
        .iter()
        .map(|l| RationalLine::from_ints(l[0], l[1], l[2]))
        .collect();
    LineConfiguration::from_coordinates(lines?, mults).ok()
}

/// A configuration given by coordinates, retrying until the lines are distinct.
pub fn random_coordinate(
    rng: &mut ChaCha8Rng,
    max_lines: usize,
    max_mult: u64,
) -> (Vec<[i64; 3]>, LineConfiguration) {
    loop {
        let n = rng.gen_range(1..=max_lines);
        let lines = random_coordinate_lines(rng, n);
        let mults: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=max_mult)).collect();
        if let Some(cfg) = from_int_lines(&lines, mults) {
            return (lines, cfg);
        }
    }
}

fn det3(m: &[[i64; 3]; 3]) -> i64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// A random invertible integer matrix.
pub fn random_projectivity(rng: &mut ChaCha8Rng) -> [[i64; 3]; 3] {
    loop {
        let mut m = [[0i64; 3]; 3];
        for row in m.iter_mut() {
            for x in row.iter_mut() {
                *x = rng.gen_range(-3..=3);
            }
        }
        if det3(&m) != 0 {
            return m;
        }
    }
}

/// Line coefficients transform contragrediently; any invertible matrix acting
/// on the coefficient vectors is a change of coordinates.
pub fn transform_lines(lines: &[[i64; 3]], m: &[[i64; 3]; 3]) -> Vec<[i64; 3]> {
    lines
        .iter()
        .map(|l| {
            let mut out = [0i64; 3];
            for (i, o) in out.iter_mut().enumerate() {
                *o = (0..3).map(|k| m[k][i] * l[k]).sum();
            }
            out
        })
        .collect()
}

pub fn random_permutation(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Sorted multiset of (point multiplicity, number of lines) over all points.
pub fn point_signature(cfg: &LineConfiguration) -> Vec<(u64, usize)> {
    let mut s: Vec<(u64, usize)> = cfg.points().iter().map(|p| (p.mult, p.lines.len())).collect();
    s.sort();
    s
}

fn bracket(p: (i64, i64), q: (i64, i64)) -> i64 {
    p.0 * q.1 - p.1 * q.0
}

/// Order of the group of projectivities of `P^1` permuting four distinct points,
/// by brute force over ordered image triples: a projectivity is fixed by the
/// images of three points and must carry the fourth to the point completing the
/// same cross ratio.
pub fn four_point_symmetries(points: [(i64, i64); 4]) -> usize {
    let cr = |a: (i64, i64), b: (i64, i64), c: (i64, i64), d: (i64, i64)| {
        (bracket(a, c) * bracket(b, d), bracket(a, d) * bracket(b, c))
    };
    let (n0, d0) = cr(points[0], points[1], points[2], points[3]);
    let mut count = 0;
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                if i == j || j == k || i == k {
                    continue;
                }
                let l = 6 - i - j - k;
                let (n1, d1) = cr(points[i], points[j], points[k], points[l]);
                if n0 * d1 == n1 * d0 {
                    count += 1;
                }
            }
        }
    }
    count
}
