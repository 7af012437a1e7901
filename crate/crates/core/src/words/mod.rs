//! Words in the generators, representations of free and reflection groups,
//! and scans over word balls: length ratios, Cartan drift, word-length
//! bounds and critical exponents.

mod ball;
mod bounds;
mod drift;
mod ratio;
mod report;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

pub use ball::{enumerate_ball, enumerate_ball_with, BallElement, BallOptions, DEFAULT_FREE_CAP, DEFAULT_REFLECTION_CAP};
pub use bounds::{critical_exponent_estimate, wordlength_distance_bounds, WordLengthBounds};
pub use drift::{drift_scan, drift_scan_with, DriftScan, LinearFit, LengthStats, Verdict, Violations, DRIFT_CAVEAT};
pub use ratio::{ratio_sup, ratio_sup_with, RatioSup};
pub use report::{to_csv, to_json_lines, WordReport, CSV_HEADER};

use crate::error::{Error, Result};
use crate::moebius::{Field, Isometry};

/// A generator or its inverse. Ordered `a < A < b < B < …`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: u8,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: u8, inverse: bool) -> Self {
        Letter { gen, inverse }
    }

    pub fn inv(self) -> Self {
        Letter { gen: self.gen, inverse: !self.inverse }
    }

    /// Position in the alphabet `a, A, b, B, …`.
    pub fn index(self) -> usize {
        2 * self.gen as usize + self.inverse as usize
    }

    pub fn from_index(i: usize) -> Self {
        Letter { gen: (i / 2) as u8, inverse: i % 2 == 1 }
    }

    pub fn to_char(self) -> char {
        let c = (b'a' + self.gen) as char;
        if self.inverse {
            c.to_ascii_uppercase()
        } else {
            c
        }
    }
}

/// A word in the generators; `A` stands for `a⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1].inv())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_reduced() && (self.0.len() < 2 || self.0[0] != self.0[self.0.len() - 1].inv())
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    /// Cyclic rotation moving the first `k` letters to the end.
    pub fn rotate(&self, k: usize) -> Word {
        let mut v = self.0.clone();
        if !v.is_empty() {
            let k = k % v.len();
            v.rotate_left(k);
        }
        Word(v)
    }

    /// Free reduction.
    pub fn reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// Lexicographically least rotation.
    pub fn min_rotation(&self) -> Word {
        min_rotation(&self.0)
    }

    /// Order used for reports: shorter first, then lexicographic.
    pub fn shortlex_cmp(&self, other: &Word) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

pub(crate) fn min_rotation(w: &[Letter]) -> Word {
    let n = w.len();
    let mut best = w.to_vec();
    for k in 1..n {
        let mut cand = w.to_vec();
        cand.rotate_left(k);
        if cand < best {
            best = cand;
        }
    }
    Word(best)
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        for l in &self.0 {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "e" || s.is_empty() {
            return Ok(Word::identity());
        }
        s.chars()
            .map(|c| {
                if c.is_ascii_lowercase() {
                    Ok(Letter::new(c as u8 - b'a', false))
                } else if c.is_ascii_uppercase() {
                    Ok(Letter::new(c.to_ascii_lowercase() as u8 - b'a', true))
                } else {
                    Err(Error::Parse(format!("invalid letter {c:?} in word {s:?}")))
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelationMode {
    /// Free group on the generators.
    Free,
    /// Group generated by reflections; relations are detected by comparing
    /// matrices.
    Reflection,
}

/// Images of the generators of Γ₀ under a representation.
#[derive(Debug, Clone, PartialEq)]
pub struct Representation {
    gens: Vec<Isometry>,
    inverses: Vec<Isometry>,
    mode: RelationMode,
}

impl Representation {
    pub fn free(gens: Vec<Isometry>) -> Result<Self> {
        Representation::new(gens, RelationMode::Free)
    }

    /// Each generator must be an involution.
    pub fn reflection(gens: Vec<Isometry>) -> Result<Self> {
        Representation::new(gens, RelationMode::Reflection)
    }

    pub fn new(gens: Vec<Isometry>, mode: RelationMode) -> Result<Self> {
        if gens.is_empty() || gens.len() > 26 {
            return Err(Error::InvalidArgument(format!("{} generators (1 to 26 supported)", gens.len())));
        }
        if mode == RelationMode::Reflection {
            if let Some(k) = gens.iter().position(|g| !g.mul(g).is_identity()) {
                return Err(Error::InvalidArgument(format!("generator {k} does not square to the identity")));
            }
        }
        let fields: Vec<Field> = gens.iter().map(|g| g.field()).collect();
        if fields.contains(&Field::Complex) && gens.iter().any(|g| g.is_orientation_reversing()) {
            return Err(Error::Unsupported("mixing complex and orientation-reversing generators".into()));
        }
        let inverses = gens.iter().map(|g| g.inverse()).collect();
        Ok(Representation { gens, inverses, mode })
    }

    /// The trivial representation with `rank` generators.
    pub fn trivial(rank: usize, mode: RelationMode) -> Result<Self> {
        Representation::new(vec![Isometry::identity(Field::Real); rank], mode)
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn mode(&self) -> RelationMode {
        self.mode
    }

    pub fn generators(&self) -> &[Isometry] {
        &self.gens
    }

    /// Letters available in this group, in alphabet order.
    pub fn alphabet(&self) -> Vec<Letter> {
        (0..self.rank() as u8)
            .flat_map(|g| match self.mode {
                RelationMode::Free => vec![Letter::new(g, false), Letter::new(g, true)],
                RelationMode::Reflection => vec![Letter::new(g, false)],
            })
            .collect()
    }

    pub fn letter(&self, l: Letter) -> &Isometry {
        if l.inverse {
            &self.inverses[l.gen as usize]
        } else {
            &self.gens[l.gen as usize]
        }
    }

    pub fn eval(&self, w: &Word) -> Result<Isometry> {
        if let Some(l) = w.0.iter().find(|l| l.gen as usize >= self.rank()) {
            return Err(Error::InvalidArgument(format!("letter {} outside the generating set", l.to_char())));
        }
        let field = self.gens[0].field();
        Ok(w.0.iter().fold(Isometry::identity(field), |acc, l| acc.mul(self.letter(*l))))
    }

    /// Whether `next` may follow `prev` in a reduced word.
    pub(crate) fn can_follow(&self, prev: Option<Letter>, next: Letter) -> bool {
        match (prev, self.mode) {
            (None, _) => true,
            (Some(p), RelationMode::Free) => p != next.inv(),
            (Some(p), RelationMode::Reflection) => p.gen != next.gen,
        }
    }
}

/// Checks that `j` and `rho` can be evaluated on the same words.
pub(crate) fn check_pair(j: &Representation, rho: &Representation) -> Result<()> {
    if j.rank() != rho.rank() {
        return Err(Error::InvalidArgument(format!("ranks differ: {} vs {}", j.rank(), rho.rank())));
    }
    if j.mode() != rho.mode() {
        return Err(Error::InvalidArgument("representations use different relation modes".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_round_trip() {
        let w: Word = "aBAb".parse().unwrap();
        assert_eq!(w.to_string(), "aBAb");
        assert_eq!(w.inverse().to_string(), "BabA");
        assert!(w.is_reduced() && w.is_cyclically_reduced());
        let w: Word = "aBA".parse().unwrap();
        assert!(w.is_reduced() && !w.is_cyclically_reduced());
        assert_eq!("".parse::<Word>().unwrap(), Word::identity());
        assert!("a1".parse::<Word>().is_err());
    }

    #[test]
    fn alphabet_order() {
        let a = Letter::new(0, false);
        let big_a = Letter::new(0, true);
        let b = Letter::new(1, false);
        assert!(a < big_a && big_a < b);
        assert_eq!(Letter::from_index(3), Letter::new(1, true));
    }

    #[test]
    fn reduction_and_rotation() {
        let w: Word = "abBAab".parse().unwrap();
        assert_eq!(w.reduce().to_string(), "ab");
        let w: Word = "bab".parse().unwrap();
        assert_eq!(w.min_rotation().to_string(), "abb");
        assert_eq!(w.rotate(1).to_string(), "abb");
    }

    #[test]
    fn reflection_generators_checked() {
        let r = Isometry::real(-1.0, 0.0, 0.0, 1.0).unwrap();
        assert!(Representation::reflection(vec![r]).is_ok());
        let t = Isometry::translation(1.0);
        assert!(Representation::reflection(vec![t]).is_err());
    }

    #[test]
    fn evaluation() {
        let a = Isometry::real(1.0, 3.0, 0.0, 1.0).unwrap();
        let b = Isometry::real(1.0, 0.0, -3.0, 1.0).unwrap();
        let rep = Representation::free(vec![a, b]).unwrap();
        let g = rep.eval(&"aA".parse().unwrap()).unwrap();
        assert!(g.is_identity());
        let g = rep.eval(&"ab".parse().unwrap()).unwrap();
        assert!((g.trace().re.abs() - 7.0).abs() < 1e-12);
        assert!(rep.eval(&"c".parse().unwrap()).is_err());
    }
}
