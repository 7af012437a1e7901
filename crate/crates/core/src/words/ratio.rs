use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use super::ball::{enumerate_ball, DEFAULT_FREE_CAP};
use super::report::WordReport;
use super::{check_pair, min_rotation, Letter, RelationMode, Representation, Word};
use crate::error::{Error, Result};
use crate::moebius::Isometry;

const TOP: usize = 10;

/// Supremum of `λ(ρ(γ)) / λ(j(γ))` over the ball of radius `length`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioSup {
    pub length: usize,
    /// `None` when no element of the ball is hyperbolic under `j`.
    pub value: Option<f64>,
    pub empty: bool,
    /// Largest ratios, best first.
    pub top: Vec<WordReport>,
    /// Number of words with `λ_j > 0` that were evaluated.
    pub classes_scanned: usize,
}

pub fn ratio_sup(j: &Representation, rho: &Representation, length: usize) -> Result<RatioSup> {
    ratio_sup_with(j, rho, length, true)
}

/// In free mode only cyclically reduced words that are least among their
/// rotations and the rotations of their inverse are visited. In reflection
/// mode every element of the deduplicated ball is visited.
pub fn ratio_sup_with(j: &Representation, rho: &Representation, length: usize, parallel: bool) -> Result<RatioSup> {
    check_pair(j, rho)?;
    let top = match j.mode() {
        RelationMode::Free => {
            if length > DEFAULT_FREE_CAP {
                return Err(Error::CapExceeded { requested: length, cap: DEFAULT_FREE_CAP });
            }
            let scan = |first: Letter| {
                let mut acc = Best::default();
                visit_classes(j, rho, first, length, |w, gj, gr| acc.offer(w, gj, gr));
                acc
            };
            let alphabet = j.alphabet();
            let parts: Vec<Best> = if parallel {
                alphabet.par_iter().map(|&l| scan(l)).collect()
            } else {
                alphabet.iter().map(|&l| scan(l)).collect()
            };
            parts.into_iter().fold(Best::default(), Best::merge)
        }
        RelationMode::Reflection => {
            let ball = enumerate_ball(j, length)?;
            let scan = |chunk: &[super::BallElement]| {
                let mut acc = Best::default();
                for e in chunk {
                    if e.element.translation_length() > 0.0 {
                        let gr = rho.eval(&e.word).expect("ranks checked");
                        acc.offer(&e.word.0, &e.element, &gr);
                    }
                }
                acc
            };
            let parts: Vec<Best> = if parallel {
                ball.par_chunks(1024).map(scan).collect()
            } else {
                ball.chunks(1024).map(scan).collect()
            };
            parts.into_iter().fold(Best::default(), Best::merge)
        }
    };
    let value = top.reports.first().and_then(|r| r.ratio);
    Ok(RatioSup { length, value, empty: value.is_none(), top: top.reports, classes_scanned: top.count })
}

#[derive(Default)]
struct Best {
    reports: Vec<WordReport>,
    count: usize,
}

impl Best {
    fn offer(&mut self, w: &[Letter], gj: &Isometry, gr: &Isometry) {
        if gj.translation_length() <= 0.0 {
            return;
        }
        self.count += 1;
        let r = WordReport::from_elements(Word(w.to_vec()), gj, gr);
        if self.reports.len() == TOP && rank(&r, self.reports.last().unwrap()) != Ordering::Less {
            return;
        }
        let pos = self.reports.partition_point(|x| rank(x, &r) == Ordering::Less);
        self.reports.insert(pos, r);
        self.reports.truncate(TOP);
    }

    fn merge(mut self, other: Best) -> Best {
        self.count += other.count;
        self.reports.extend(other.reports);
        self.reports.sort_by(rank);
        self.reports.truncate(TOP);
        self
    }
}

/// Larger ratio first, then shorter word, then lexicographic.
fn rank(x: &WordReport, y: &WordReport) -> Ordering {
    let (rx, ry) = (x.ratio.unwrap_or(f64::NEG_INFINITY), y.ratio.unwrap_or(f64::NEG_INFINITY));
    ry.total_cmp(&rx).then_with(|| x.word.shortlex_cmp(&y.word))
}

/// Depth-first walk over reduced words starting with `first` whose letters
/// are all at least `first`, calling `f` on those that represent their
/// class under rotation and inversion.
fn visit_classes<F>(j: &Representation, rho: &Representation, first: Letter, len: usize, mut f: F)
where
    F: FnMut(&[Letter], &Isometry, &Isometry),
{
    if len == 0 {
        return;
    }
    let alphabet: Vec<Letter> = j.alphabet().into_iter().filter(|&l| l >= first).collect();
    let mut word = vec![first];
    let mut stack = vec![(*j.letter(first), *rho.letter(first), 0usize)];
    let mut emit = |w: &[Letter], gj: &Isometry, gr: &Isometry| {
        if is_class_representative(w) {
            f(w, gj, gr);
        }
    };
    emit(&word, &stack[0].0, &stack[0].1);
    while let Some(top) = stack.last_mut() {
        let (gj, gr, next) = (top.0, top.1, top.2);
        if word.len() == len || next == alphabet.len() {
            stack.pop();
            word.pop();
            continue;
        }
        top.2 += 1;
        let l = alphabet[next];
        if !j.can_follow(word.last().copied(), l) {
            continue;
        }
        word.push(l);
        let (nj, nr) = (gj.mul(j.letter(l)), gr.mul(rho.letter(l)));
        emit(&word, &nj, &nr);
        stack.push((nj, nr, 0));
    }
}

fn is_class_representative(w: &[Letter]) -> bool {
    let n = w.len();
    if n > 1 && w[0] == w[n - 1].inv() {
        return false;
    }
    let word = Word(w.to_vec());
    if min_rotation(w) != word {
        return false;
    }
    word.0 <= word.inverse().min_rotation().0
}
