//! Point sets in the affine chart `x_0 = 1`, seeded sampling, and the plain
//! text exchange format.
//!
//! Text format: a header line `n s p`, then `s` lines of `n` decimal affine
//! coordinates separated by spaces.

use std::collections::HashSet;
use std::fmt::Write as _;

use super::field::PrimeModulus;
use crate::error::{Error, Result};

/// splitmix64: one 64-bit state, one output per step.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform element of `[0, p)`, rejecting draws at or above the largest
    /// multiple of `p` below `2^64`.
    pub fn next_below(&mut self, p: u64) -> u64 {
        let zone = (1u128 << 64) / p as u128 * p as u128;
        loop {
            let x = self.next_u64();
            if (x as u128) < zone {
                return x % p;
            }
        }
    }
}

/// A point `[1 : c_1 : ... : c_n]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectivePoint {
    coords: Vec<u64>,
}

impl ProjectivePoint {
    /// Builds `[1 : affine...]`, reducing every coordinate mod `p`.
    pub fn from_affine(affine: &[u64], modulus: PrimeModulus) -> Self {
        let mut coords = Vec::with_capacity(affine.len() + 1);
        coords.push(1);
        coords.extend(affine.iter().map(|&c| modulus.reduce(c)));
        Self { coords }
    }

    /// All `n + 1` homogeneous coordinates, `coords[0] == 1`.
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn affine(&self) -> &[u64] {
        &self.coords[1..]
    }

    pub fn dim(&self) -> u32 {
        (self.coords.len() - 1) as u32
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    n: u32,
    modulus: PrimeModulus,
    points: Vec<ProjectivePoint>,
}

impl PointSet {
    /// Rejects duplicate points and points of the wrong dimension.
    pub fn new(n: u32, modulus: PrimeModulus, points: Vec<ProjectivePoint>) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidInput("n must be >= 1".into()));
        }
        let mut seen = HashSet::with_capacity(points.len());
        for (i, pt) in points.iter().enumerate() {
            if pt.dim() != n {
                return Err(Error::InvalidInput(format!(
                    "point {i} has {} affine coordinates, expected {n}",
                    pt.dim()
                )));
            }
            if pt.coords.iter().any(|&c| c >= modulus.get()) {
                return Err(Error::InvalidInput(format!("point {i} is not reduced mod {modulus}")));
            }
            if !seen.insert(pt) {
                return Err(Error::DuplicatePoint(i));
            }
        }
        Ok(Self { n, modulus, points })
    }

    pub fn from_affine(n: u32, modulus: PrimeModulus, affine: &[Vec<u64>]) -> Result<Self> {
        let points = affine
            .iter()
            .map(|c| ProjectivePoint::from_affine(c, modulus))
            .collect();
        Self::new(n, modulus, points)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn points(&self) -> &[ProjectivePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {} {}", self.n, self.points.len(), self.modulus);
        for pt in &self.points {
            let line: Vec<String> = pt.affine().iter().map(u64::to_string).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header `n s p`".into(),
        })?;
        let fields = parse_u64s(hline, header)?;
        let [n, s, p] = fields[..] else {
            return Err(Error::Parse {
                line: hline,
                msg: format!("header needs 3 fields, got {}", fields.len()),
            });
        };
        let n = u32::try_from(n).map_err(|_| Error::Parse {
            line: hline,
            msg: "n out of range".into(),
        })?;
        let modulus = PrimeModulus::new(p)?;
        let mut affine = Vec::new();
        for (line, body) in lines {
            let coords = parse_u64s(line, body)?;
            if coords.len() != n as usize {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected {n} coordinates, got {}", coords.len()),
                });
            }
            if let Some(c) = coords.iter().find(|&&c| c >= p) {
                return Err(Error::Parse {
                    line,
                    msg: format!("coordinate {c} not in [0, {p})"),
                });
            }
            affine.push(coords);
        }
        if affine.len() as u64 != s {
            return Err(Error::Parse {
                line: hline,
                msg: format!("header declares {s} points, found {}", affine.len()),
            });
        }
        Self::from_affine(n, modulus, &affine)
    }
}

fn parse_u64s(line: usize, body: &str) -> Result<Vec<u64>> {
    body.split_whitespace()
        .map(|tok| {
            tok.parse::<u64>().map_err(|e| Error::Parse {
                line,
                msg: format!("`{tok}`: {e}"),
            })
        })
        .collect()
}

/// `s` distinct points with affine coordinates drawn from a splitmix64 stream.
///
/// Coordinates are consumed point by point; a point that repeats an earlier
/// one is discarded whole and redrawn.
pub fn sample_points(n: u32, s: usize, modulus: PrimeModulus, seed: u64) -> Result<PointSet> {
    if n < 1 {
        return Err(Error::InvalidInput("n must be >= 1".into()));
    }
    let capacity = (modulus.get() as u128).checked_pow(n).unwrap_or(u128::MAX);
    if s as u128 > capacity {
        return Err(Error::InvalidInput(format!(
            "cannot place {s} distinct points in an affine space with {capacity} points"
        )));
    }
    let mut rng = SplitMix64::new(seed);
    let mut seen = HashSet::with_capacity(s);
    let mut points = Vec::with_capacity(s);
    while points.len() < s {
        let affine: Vec<u64> = (0..n).map(|_| rng.next_below(modulus.get())).collect();
        if seen.insert(affine.clone()) {
            points.push(ProjectivePoint::from_affine(&affine, modulus));
        }
    }
    PointSet::new(n, modulus, points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_values() {
        // published splitmix64 outputs for seed 1234567
        let mut r = SplitMix64::new(1234567);
        let got: Vec<u64> = (0..3).map(|_| r.next_u64()).collect();
        assert_eq!(
            got,
            vec![6457827717110365317, 3203168211198807973, 9817491932198370423]
        );
    }

    #[test]
    fn sampling_shapes_and_determinism() {
        let f = PrimeModulus::default();
        let one = sample_points(2, 1, f, 7).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one.points()[0].coords()[0], 1);
        let a = sample_points(2, 5, f, 1).unwrap();
        let b = sample_points(2, 5, f, 1).unwrap();
        assert_eq!(a, b);
        let c = sample_points(2, 5, f, 2).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn sampling_resamples_collisions() {
        // GF(3)^1 has exactly three points; all must appear
        let f = PrimeModulus::new(3).unwrap();
        let set = sample_points(1, 3, f, 0).unwrap();
        let mut xs: Vec<u64> = set.points().iter().map(|p| p.affine()[0]).collect();
        xs.sort();
        assert_eq!(xs, vec![0, 1, 2]);
        assert!(sample_points(1, 4, f, 0).is_err());
    }

    #[test]
    fn duplicates_rejected() {
        let f = PrimeModulus::new(7).unwrap();
        let err = PointSet::from_affine(2, f, &[vec![1, 2], vec![3, 4], vec![1, 2]]).unwrap_err();
        assert_eq!(err, Error::DuplicatePoint(2));
    }

    #[test]
    fn text_roundtrip() {
        let set = sample_points(3, 4, PrimeModulus::default(), 9).unwrap();
        let text = set.to_text();
        assert!(text.starts_with("3 4 2147483647\n"));
        assert_eq!(PointSet::parse_text(&text).unwrap(), set);
    }

    #[test]
    fn text_errors() {
        assert!(matches!(PointSet::parse_text(""), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(PointSet::parse_text("2 1 7\n1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(PointSet::parse_text("2 1 7\n1 9\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(PointSet::parse_text("2 2 7\n1 2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(PointSet::parse_text("2 1 8\n1 2\n"), Err(Error::NotPrime(8))));
        assert!(matches!(
            PointSet::parse_text("1 2 7\n3\n3\n"),
            Err(Error::DuplicatePoint(1))
        ));
    }
}
