use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::ball::{enumerate_ball, visit_reduced, DEFAULT_FREE_CAP};
use super::report::WordReport;
use super::{check_pair, Letter, RelationMode, Representation, Word};
use crate::error::{Error, Result};
use crate::moebius::Isometry;

pub const DRIFT_CAVEAT: &str = "heuristic: the drift criterion quantifies over the whole infinite group; \
this scan only inspects a finite ball and cannot certify properness";

const WORST: usize = 10;
const MONOTONE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Per-length minima of `μ_j − μ_ρ` positive and nondecreasing.
    Left,
    /// Per-length maxima negative and nonincreasing.
    Right,
    NotProper,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Left => "admissibility-consistent (left)",
            Verdict::Right => "admissibility-consistent (right)",
            Verdict::NotProper => "not consistent with properness",
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LengthStats {
    pub len: usize,
    pub count: usize,
    pub min_drift: f64,
    pub max_drift: f64,
    pub argmin: String,
}

/// Words whose drift has the wrong sign for left admissibility.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violations {
    pub count: usize,
    pub worst: Option<f64>,
}

/// Least-squares fit of `μ_ρ ≈ C μ_j + D` over the ball, with `D` raised to
/// the largest residual so that the bound holds on every scanned word.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearFit {
    pub c: f64,
    pub d: f64,
    pub c_below_one: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DriftScan {
    pub length: usize,
    pub min_drift: Option<f64>,
    pub per_length: Vec<LengthStats>,
    pub violations: Violations,
    pub verdict: Verdict,
    pub fit: Option<LinearFit>,
    /// Lowest drifts, lowest first.
    pub worst: Vec<WordReport>,
    pub caveat: &'static str,
}

pub fn drift_scan(j: &Representation, rho: &Representation, length: usize) -> Result<DriftScan> {
    drift_scan_with(j, rho, length, true)
}

/// Scans every nontrivial element of the ball of radius `length`.
pub fn drift_scan_with(j: &Representation, rho: &Representation, length: usize, parallel: bool) -> Result<DriftScan> {
    check_pair(j, rho)?;
    let first = scan(j, rho, length, parallel, Pass1::new(length), |acc, w, gj, gr| acc.add(w, gj, gr))?;
    let fit = first.fit();
    let per_length: Vec<LengthStats> = first.per_length.into_iter().filter(|s| s.count > 0).collect();
    let fit = match fit {
        Some((c, d0)) => {
            let d = scan(j, rho, length, parallel, MaxResidual(d0, c), |acc, _, gj, gr| {
                acc.0 = acc.0.max(gr.cartan_mu() - acc.1 * gj.cartan_mu());
            })?
            .0;
            Some(LinearFit { c, d, c_below_one: c < 1.0 })
        }
        None => None,
    };
    let min_drift = per_length.iter().map(|s| s.min_drift).reduce(f64::min);
    let verdict = verdict(&per_length, length);
    Ok(DriftScan {
        length,
        min_drift,
        per_length,
        violations: first.violations,
        verdict,
        fit,
        worst: first.worst,
        caveat: DRIFT_CAVEAT,
    })
}

fn verdict(stats: &[LengthStats], length: usize) -> Verdict {
    let from = length.div_ceil(2).max(1);
    let tail: Vec<&LengthStats> = stats.iter().filter(|s| s.len >= from).collect();
    if tail.is_empty() {
        return Verdict::NotProper;
    }
    let left = tail.iter().all(|s| s.min_drift > 0.0)
        && tail.windows(2).all(|w| w[1].min_drift >= w[0].min_drift - MONOTONE_SLACK);
    let right = tail.iter().all(|s| s.max_drift < 0.0)
        && tail.windows(2).all(|w| w[1].max_drift <= w[0].max_drift + MONOTONE_SLACK);
    if left {
        Verdict::Left
    } else if right {
        Verdict::Right
    } else {
        Verdict::NotProper
    }
}

trait Merge: Send {
    fn merge(self, other: Self) -> Self;
}

/// Runs `visit` on every nontrivial ball element, partitioned by first
/// letter; partial results are merged in alphabet order so the outcome does
/// not depend on scheduling.
fn scan<A, F>(j: &Representation, rho: &Representation, length: usize, parallel: bool, init: A, visit: F) -> Result<A>
where
    A: Merge + Clone + Sync,
    F: Fn(&mut A, &[Letter], &Isometry, &Isometry) + Sync,
{
    match j.mode() {
        RelationMode::Free => {
            if length > DEFAULT_FREE_CAP {
                return Err(Error::CapExceeded { requested: length, cap: DEFAULT_FREE_CAP });
            }
            let part = |l: Letter| {
                let mut acc = init.clone();
                visit_reduced(j, rho, l, length, |w, gj, gr| visit(&mut acc, w, gj, gr));
                acc
            };
            let alphabet = j.alphabet();
            let parts: Vec<A> = if parallel {
                alphabet.par_iter().map(|&l| part(l)).collect()
            } else {
                alphabet.iter().map(|&l| part(l)).collect()
            };
            Ok(parts.into_iter().fold(init.clone(), A::merge))
        }
        RelationMode::Reflection => {
            let ball = enumerate_ball(j, length)?;
            let part = |l: Letter| {
                let mut acc = init.clone();
                for e in ball.iter().filter(|e| e.word.0.first() == Some(&l)) {
                    let gr = rho.eval(&e.word).expect("ranks checked");
                    visit(&mut acc, &e.word.0, &e.element, &gr);
                }
                acc
            };
            let alphabet = j.alphabet();
            let parts: Vec<A> = if parallel {
                alphabet.par_iter().map(|&l| part(l)).collect()
            } else {
                alphabet.iter().map(|&l| part(l)).collect()
            };
            Ok(parts.into_iter().fold(init.clone(), A::merge))
        }
    }
}

#[derive(Clone)]
struct Pass1 {
    per_length: Vec<LengthStats>,
    violations: Violations,
    worst: Vec<WordReport>,
    // sums for the least-squares fit: n, Σx, Σy, Σxx, Σxy
    sums: [f64; 5],
}

impl Pass1 {
    fn new(length: usize) -> Self {
        let per_length = (1..=length)
            .map(|len| LengthStats {
                len,
                count: 0,
                min_drift: f64::INFINITY,
                max_drift: f64::NEG_INFINITY,
                argmin: String::new(),
            })
            .collect();
        Pass1 { per_length, violations: Violations { count: 0, worst: None }, worst: Vec::new(), sums: [0.0; 5] }
    }

    fn add(&mut self, w: &[Letter], gj: &Isometry, gr: &Isometry) {
        let (x, y) = (gj.cartan_mu(), gr.cartan_mu());
        let drift = x - y;
        let s = &mut self.per_length[w.len() - 1];
        s.count += 1;
        if drift < s.min_drift {
            s.min_drift = drift;
            s.argmin = Word(w.to_vec()).to_string();
        }
        s.max_drift = s.max_drift.max(drift);
        if drift < 0.0 {
            self.violations.count += 1;
            self.violations.worst = Some(self.violations.worst.map_or(drift, |v| v.min(drift)));
        }
        for (acc, v) in self.sums.iter_mut().zip([1.0, x, y, x * x, x * y]) {
            *acc += v;
        }
        if self.worst.len() < WORST || drift < self.worst.last().unwrap().drift {
            let r = WordReport::from_elements(Word(w.to_vec()), gj, gr);
            let pos = self.worst.partition_point(|q| worse_first(q, &r));
            self.worst.insert(pos, r);
            self.worst.truncate(WORST);
        }
    }

    fn fit(&self) -> Option<(f64, f64)> {
        let [n, sx, sy, sxx, sxy] = self.sums;
        let den = n * sxx - sx * sx;
        if n < 2.0 || den <= 1e-12 * n * sxx {
            return None;
        }
        let c = (n * sxy - sx * sy) / den;
        Some((c, (sy - c * sx) / n))
    }
}

fn worse_first(q: &WordReport, r: &WordReport) -> bool {
    q.drift < r.drift || (q.drift == r.drift && q.word.shortlex_cmp(&r.word).is_lt())
}

impl Merge for Pass1 {
    fn merge(mut self, other: Pass1) -> Pass1 {
        for (s, o) in self.per_length.iter_mut().zip(other.per_length) {
            s.count += o.count;
            // partitions arrive in alphabet order, so ties keep the earlier word
            if o.min_drift < s.min_drift {
                s.min_drift = o.min_drift;
                s.argmin = o.argmin;
            }
            s.max_drift = s.max_drift.max(o.max_drift);
        }
        self.violations.count += other.violations.count;
        self.violations.worst = match (self.violations.worst, other.violations.worst) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        for (a, b) in self.sums.iter_mut().zip(other.sums) {
            *a += b;
        }
        self.worst.extend(other.worst);
        self.worst.sort_by(|q, r| {
            if worse_first(q, r) {
                std::cmp::Ordering::Less
            } else if worse_first(r, q) {
                std::cmp::Ordering::Greater
            } else {
                std::cmp::Ordering::Equal
            }
        });
        self.worst.truncate(WORST);
        self
    }
}

#[derive(Clone)]
struct MaxResidual(f64, f64);

impl Merge for MaxResidual {
    fn merge(self, other: MaxResidual) -> MaxResidual {
        MaxResidual(self.0.max(other.0), self.1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schottky() -> Representation {
        let a = Isometry::real(1.0, 3.0, 0.0, 1.0).unwrap();
        let b = Isometry::real(1.0, 0.0, -3.0, 1.0).unwrap();
        Representation::free(vec![a, b]).unwrap()
    }

    #[test]
    fn identical_pair_has_zero_drift() {
        let j = schottky();
        let s = drift_scan(&j, &j, 4).unwrap();
        assert_eq!(s.min_drift, Some(0.0));
        assert!(s.per_length.iter().all(|l| l.min_drift == 0.0 && l.max_drift == 0.0));
        assert_eq!(s.verdict, Verdict::NotProper);
        assert_eq!(s.violations.count, 0);
        let fit = s.fit.unwrap();
        assert!((fit.c - 1.0).abs() < 1e-9 && !fit.c_below_one);
    }

    #[test]
    fn trivial_target_drifts_upwards() {
        let j = schottky();
        let rho = Representation::trivial(2, RelationMode::Free).unwrap();
        let s = drift_scan(&j, &rho, 5).unwrap();
        assert_eq!(s.verdict, Verdict::Left);
        assert_eq!(s.per_length.len(), 5);
        assert_eq!(s.per_length[1].count, 12);
        for w in s.per_length.windows(2) {
            assert!(w[1].min_drift > w[0].min_drift);
        }
        let fit = s.fit.unwrap();
        assert!(fit.c.abs() < 1e-12 && fit.c_below_one);
        assert_eq!(s.caveat, DRIFT_CAVEAT);
    }

    #[test]
    fn swapped_pair_is_right_admissible() {
        let j = schottky();
        let rho = Representation::trivial(2, RelationMode::Free).unwrap();
        let s = drift_scan(&rho, &j, 4).unwrap();
        assert_eq!(s.verdict, Verdict::Right);
        assert_eq!(s.violations.count, 4 + 12 + 36 + 108);
        assert_eq!(s.worst.len(), WORST);
        assert!(s.worst.windows(2).all(|w| w[0].drift <= w[1].drift));
    }

    #[test]
    fn parallel_matches_sequential() {
        let j = schottky();
        let rho = Representation::free(vec![
            Isometry::real(2.0, 1.0, 1.0, 1.0).unwrap(),
            Isometry::real(1.0, -1.0, -1.0, 2.0).unwrap(),
        ])
        .unwrap();
        let a = serde_json::to_string(&drift_scan_with(&j, &rho, 5, true).unwrap()).unwrap();
        let b = serde_json::to_string(&drift_scan_with(&j, &rho, 5, false).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn verdict_labels() {
        assert_eq!(serde_json::to_string(&Verdict::Left).unwrap(), "\"admissibility-consistent (left)\"");
        assert_eq!(Verdict::NotProper.label(), "not consistent with properness");
    }
}
