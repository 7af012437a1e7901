use std::collections::HashMap;

use super::{Letter, RelationMode, Representation, Word};
use crate::error::{Error, Result};
use crate::moebius::Isometry;

pub const DEFAULT_FREE_CAP: usize = 14;
pub const DEFAULT_REFLECTION_CAP: usize = 16;
const DEDUP_GRID: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct BallElement {
    pub word: Word,
    pub element: Isometry,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallOptions {
    /// Largest admissible radius; defaults to 14 (free) or 16 (reflection).
    pub length_cap: Option<usize>,
    pub max_elements: usize,
    /// Merge words giving the same matrix even in free mode (used when the
    /// representation is not known to be faithful on the ball).
    pub dedup: bool,
}

impl Default for BallOptions {
    fn default() -> Self {
        BallOptions { length_cap: None, max_elements: 10_000_000, dedup: false }
    }
}

/// All elements of word length at most `len`, ordered by length and then
/// lexicographically, each with its least witness word.
///
/// In free mode the reduced words are the group elements. In reflection
/// mode words are merged when their matrices agree.
pub fn enumerate_ball(rep: &Representation, len: usize) -> Result<Vec<BallElement>> {
    enumerate_ball_with(rep, len, BallOptions::default())
}

pub fn enumerate_ball_with(rep: &Representation, len: usize, opts: BallOptions) -> Result<Vec<BallElement>> {
    let cap = opts.length_cap.unwrap_or(match rep.mode() {
        RelationMode::Free => DEFAULT_FREE_CAP,
        RelationMode::Reflection => DEFAULT_REFLECTION_CAP,
    });
    if len > cap {
        return Err(Error::CapExceeded { requested: len, cap });
    }
    let dedup = opts.dedup || rep.mode() == RelationMode::Reflection;
    let identity = Isometry::identity(rep.generators()[0].field());
    let mut out = vec![BallElement { word: Word::identity(), element: identity }];
    let mut index = DedupIndex::default();
    if dedup {
        index.insert(&identity, 0);
    }
    let alphabet = rep.alphabet();
    let mut level = 0..1;
    for _ in 0..len {
        let start = out.len();
        for parent in level.clone() {
            let last = out[parent].word.0.last().copied();
            for &l in &alphabet {
                if !rep.can_follow(last, l) {
                    continue;
                }
                let element = out[parent].element.mul(rep.letter(l));
                if dedup {
                    if index.find(&element, &out).is_some() {
                        continue;
                    }
                    index.insert(&element, out.len());
                }
                let mut w = out[parent].word.0.clone();
                w.push(l);
                out.push(BallElement { word: Word(w), element });
                if out.len() > opts.max_elements {
                    return Err(Error::TooManyElements(opts.max_elements));
                }
            }
        }
        level = start..out.len();
        if level.is_empty() {
            break;
        }
    }
    Ok(out)
}

/// Hash index of matrices on a grid of spacing 1e-9, probing the cells a
/// rounding error away and the key of −g, with a final entrywise check.
#[derive(Default)]
pub(crate) struct DedupIndex {
    cells: HashMap<(bool, [i64; 8]), Vec<usize>>,
}

impl DedupIndex {
    pub(crate) fn insert(&mut self, g: &Isometry, idx: usize) {
        let key = (g.is_orientation_reversing(), g.grid_key(DEDUP_GRID, false));
        self.cells.entry(key).or_default().push(idx);
    }

    pub(crate) fn find(&self, g: &Isometry, elems: &[BallElement]) -> Option<usize> {
        let tol = 1e-12 * g.frobenius_sq().max(1.0);
        for negate in [false, true] {
            for key in neighbour_keys(g, negate) {
                if let Some(v) = self.cells.get(&(g.is_orientation_reversing(), key)) {
                    if let Some(&i) = v.iter().find(|&&i| elems[i].element.approx_eq(g, tol)) {
                        return Some(i);
                    }
                }
            }
        }
        None
    }
}

fn neighbour_keys(g: &Isometry, negate: bool) -> Vec<[i64; 8]> {
    let s = if negate { -1.0 } else { 1.0 };
    let mut raw = [0.0; 8];
    for (i, z) in g.entries().iter().enumerate() {
        raw[2 * i] = s * z.re / DEDUP_GRID;
        raw[2 * i + 1] = s * z.im / DEDUP_GRID;
    }
    let mut keys = vec![g.grid_key(DEDUP_GRID, negate)];
    for (i, x) in raw.iter().enumerate() {
        let frac = x - x.floor();
        if (frac - 0.5).abs() < 0.05 {
            let alt = if x.round() == x.floor() { x.floor() as i64 + 1 } else { x.floor() as i64 };
            let extra: Vec<[i64; 8]> = keys
                .iter()
                .map(|k| {
                    let mut k = *k;
                    k[i] = alt;
                    k
                })
                .collect();
            keys.extend(extra);
        }
    }
    keys
}

/// Calls `f` on every reduced word of length 1..=`len` starting with
/// `first`, in lexicographic depth-first order, with its images under `j`
/// and `rho`.
pub(crate) fn visit_reduced<F>(j: &Representation, rho: &Representation, first: Letter, len: usize, mut f: F)
where
    F: FnMut(&[Letter], &Isometry, &Isometry),
{
    if len == 0 {
        return;
    }
    let alphabet = j.alphabet();
    let mut word = vec![first];
    let mut stack = vec![(*j.letter(first), *rho.letter(first), 0usize)];
    f(&word, &stack[0].0, &stack[0].1);
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
        f(&word, &nj, &nr);
        stack.push((nj, nr, 0));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn free2() -> Representation {
        let a = Isometry::real(1.0, 3.0, 0.0, 1.0).unwrap();
        let b = Isometry::real(1.0, 0.0, -3.0, 1.0).unwrap();
        Representation::free(vec![a, b]).unwrap()
    }

    /// Reflections in the sides of a triangle with angles π/p, π/q, π/r.
    fn triangle_reflections(p: f64, q: f64, r: f64) -> Representation {
        use crate::hgeom::{FermiFrame, GeodesicLine};
        let alpha = PI / p;
        let gamma = PI / r;
        assert!((q - 2.0).abs() < 1e-12);
        let t = crate::hgeom::right_triangle_solve(alpha, gamma).unwrap();
        let f = FermiFrame::canonical();
        let a = f.to_point(0.0, 0.0);
        let b = f.to_point(t.c, 0.0);
        let c = f.to_point(t.c, t.a);
        let refl = |x, y| Isometry::reflection_in(&GeodesicLine::through(x, y).unwrap()).unwrap();
        Representation::reflection(vec![refl(&a, &b), refl(&b, &c), refl(&c, &a)]).unwrap()
    }

    #[test]
    fn free_ball_sizes() {
        let rep = free2();
        assert_eq!(enumerate_ball(&rep, 1).unwrap().len(), 5);
        assert_eq!(enumerate_ball(&rep, 2).unwrap().len(), 17);
        let ball = enumerate_ball(&rep, 3).unwrap();
        assert_eq!(ball.len(), 53);
        let words: Vec<String> = ball[1..5].iter().map(|e| e.word.to_string()).collect();
        assert_eq!(words, ["a", "A", "b", "B"]);
    }

    #[test]
    fn free_ball_dedup_agrees_for_faithful_rep() {
        let opts = BallOptions { dedup: true, ..Default::default() };
        assert_eq!(enumerate_ball_with(&free2(), 4, opts).unwrap().len(), 161);
    }

    #[test]
    fn reflection_ball_of_radius_two() {
        let rep = triangle_reflections(3.0, 2.0, 14.0);
        let ball = enumerate_ball(&rep, 2).unwrap();
        // the right angle makes the two rotations about B coincide: ab = ba
        assert_eq!(ball.len(), 9);
        // exhaustive pairwise comparison of all words of length ≤ 2
        let mut words = vec![Word::identity()];
        for x in ["a", "b", "c"] {
            words.push(x.parse().unwrap());
            for y in ["a", "b", "c"] {
                if x != y {
                    words.push(format!("{x}{y}").parse().unwrap());
                }
            }
        }
        let mats: Vec<Isometry> = words.iter().map(|w| rep.eval(w).unwrap()).collect();
        let distinct = (0..mats.len()).filter(|&i| (0..i).all(|k| !mats[k].approx_eq(&mats[i], 1e-8))).count();
        assert_eq!(distinct, ball.len());
    }

    #[test]
    fn reflection_ball_respects_relations() {
        let rep = triangle_reflections(3.0, 2.0, 7.0);
        let ball = enumerate_ball(&rep, 4).unwrap();
        let words: Vec<String> = ball.iter().map(|e| e.word.to_string()).collect();
        // right angle at B: ab = ba; angle π/3 at A: aca = cac
        assert!(words.contains(&"ab".to_string()) && !words.contains(&"ba".to_string()));
        assert!(words.contains(&"aca".to_string()) && !words.contains(&"cac".to_string()));
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(enumerate_ball(&free2(), 15), Err(Error::CapExceeded { requested: 15, cap: 14 }));
        let opts = BallOptions { max_elements: 10, ..Default::default() };
        assert_eq!(enumerate_ball_with(&free2(), 3, opts), Err(Error::TooManyElements(10)));
    }

    #[test]
    fn visitor_covers_reduced_words() {
        let rep = free2();
        let mut seen = Vec::new();
        for l in rep.alphabet() {
            visit_reduced(&rep, &rep, l, 3, |w, _, _| seen.push(Word(w.to_vec())));
        }
        assert_eq!(seen.len(), 52);
        assert!(seen.iter().all(|w| w.is_reduced()));
        assert_eq!(seen[0].to_string(), "a");
        assert_eq!(seen[1].to_string(), "aa");
        assert_eq!(seen[2].to_string(), "aaa");
    }
}
