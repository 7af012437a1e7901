use rayon::prelude::*;
use serde::Serialize;

use super::ball::{enumerate_ball_with, visit_reduced, BallOptions};
use super::{RelationMode, Representation};
use crate::error::{Error, Result};
use crate::hgeom::{dist_unchecked, BoundaryPoint, HPoint};
use crate::moebius::IsometryClass;

/// Empirical constants in `2 log(1 + wl) − R′ ≤ d(p, γp) ≤ 2 log(1 + wl) + R`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WordLengthBounds {
    pub length: usize,
    pub elements: usize,
    pub fixed_point: Option<String>,
    /// `max d(p, γp) − 2 log(1 + wl(γ))`.
    pub r_upper: f64,
    /// `max 2 log(1 + wl(γ)) − d(p, γp)`.
    pub r_lower: f64,
    pub argmax_upper: String,
    pub argmax_lower: String,
}

/// Compares displacement with word length on the ball of radius `length`
/// of a subgroup fixing a common ideal point.
///
/// Word lengths come from a breadth-first search with matrix dedup, so
/// relations among the generators (for example commuting parabolics) are
/// taken into account.
pub fn wordlength_distance_bounds(rep: &Representation, p: &HPoint, length: usize) -> Result<WordLengthBounds> {
    let gens = rep.generators();
    for (k, g) in gens.iter().enumerate() {
        let class = g.classify();
        if matches!(class, IsometryClass::Hyperbolic | IsometryClass::GlideReflection) {
            return Err(Error::Precondition(format!("generator {k} is {class:?}; expected parabolic or elliptic")));
        }
    }
    let fixed = common_fixed_point(rep)?;
    let opts = BallOptions { length_cap: Some(length), dedup: true, ..Default::default() };
    let ball = enumerate_ball_with(rep, length, opts)?;
    let mut out = WordLengthBounds {
        length,
        elements: ball.len(),
        fixed_point: fixed.map(|xi| match xi {
            BoundaryPoint::Infinity => "inf".to_string(),
            BoundaryPoint::Finite(z) => format!("{z}"),
        }),
        r_upper: 0.0,
        r_lower: 0.0,
        argmax_upper: "e".into(),
        argmax_lower: "e".into(),
    };
    for e in &ball {
        let d = dist_unchecked(p, &e.element.apply(p));
        let w = 2.0 * (e.word.len() as f64).ln_1p();
        if d - w > out.r_upper {
            out.r_upper = d - w;
            out.argmax_upper = e.word.to_string();
        }
        if w - d > out.r_lower {
            out.r_lower = w - d;
            out.argmax_lower = e.word.to_string();
        }
    }
    Ok(out)
}

/// An ideal point fixed by every nontrivial generator, if any generator is
/// nontrivial.
fn common_fixed_point(rep: &Representation) -> Result<Option<BoundaryPoint>> {
    let nontrivial: Vec<_> = rep.generators().iter().filter(|g| !g.is_identity()).collect();
    let Some(first) = nontrivial.first() else {
        return Ok(None);
    };
    let candidates = first.fixed_boundary_points();
    candidates
        .into_iter()
        .find(|xi| nontrivial.iter().all(|g| g.apply_boundary(xi).approx_eq(xi, 1e-9)))
        .map(Some)
        .ok_or_else(|| Error::Precondition("generators do not fix a common ideal point".into()))
}

/// `(1/R) log N` where `N` counts the distinct orbit points `γp`, `|γ| ≤ length`,
/// within distance `radius` of `p`.
///
/// This undercounts the orbit in the ball whenever some orbit point within
/// `radius` needs a longer word, so it is biased low.
pub fn critical_exponent_estimate(j: &Representation, p: &HPoint, radius: f64, length: usize) -> Result<f64> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
    }
    let mut near: Vec<(f64, HPoint)> = match j.mode() {
        RelationMode::Free => {
            if length > super::ball::DEFAULT_FREE_CAP {
                return Err(Error::CapExceeded { requested: length, cap: super::ball::DEFAULT_FREE_CAP });
            }
            let parts: Vec<Vec<(f64, HPoint)>> = j
                .alphabet()
                .par_iter()
                .map(|&l| {
                    let mut v = Vec::new();
                    visit_reduced(j, j, l, length, |_, g, _| {
                        let q = g.apply(p);
                        let d = dist_unchecked(p, &q);
                        if d <= radius {
                            v.push((d, q));
                        }
                    });
                    v
                })
                .collect();
            let mut all = vec![(0.0, *p)];
            all.extend(parts.into_iter().flatten());
            all
        }
        RelationMode::Reflection => enumerate_ball_with(j, length, BallOptions::default())?
            .iter()
            .map(|e| {
                let q = e.element.apply(p);
                (dist_unchecked(p, &q), q)
            })
            .filter(|(d, _)| *d <= radius)
            .collect(),
    };
    near.sort_by(|x, y| x.0.total_cmp(&y.0));
    let count = distinct_points(&near);
    Ok((count as f64).ln() / radius)
}

/// Counts points of a list sorted by distance to a centre, treating points
/// within 1e-9 of each other as equal.
fn distinct_points(sorted: &[(f64, HPoint)]) -> usize {
    const TOL: f64 = 1e-9;
    let mut kept: Vec<usize> = Vec::new();
    for (i, (d, q)) in sorted.iter().enumerate() {
        let dup = kept
            .iter()
            .rev()
            .take_while(|&&k| d - sorted[k].0 <= TOL)
            .any(|&k| dist_unchecked(q, &sorted[k].1) <= TOL);
        if !dup {
            kept.push(i);
        }
    }
    kept.len()
}
