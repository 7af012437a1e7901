use serde::Serialize;

use super::distance::dist_unchecked;
use super::HPoint;
use crate::error::{Error, Result};
use crate::moebius::Isometry;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosingReport {
    pub translation_length: f64,
    /// Sum of the segment lengths `d(pᵢ, pᵢ₊₁)` over one period.
    pub period_length: f64,
    /// `|λ(g) − period_length|`.
    pub discrepancy: f64,
    /// `m · δ`.
    pub bound: f64,
    pub violated: bool,
}

/// Compares the translation length of `g` with the length of one period of
/// a `g`-invariant broken line.
///
/// `points` holds `p₀, …, p_m` (possibly more); consecutive periods must be
/// related by `g·pᵢ = pᵢ₊ₘ` wherever both points are given, and `p_m` is
/// taken to be `g·p₀` when absent.
pub fn closing_lemma_check(points: &[HPoint], g: &Isometry, m: usize, delta: f64) -> Result<ClosingReport> {
    if m == 0 || points.is_empty() {
        return Err(Error::InvalidArgument("period and point list must be nonempty".into()));
    }
    if !g.classify().has_axis() {
        return Err(Error::NotHyperbolic(g.classify()));
    }
    if points.len() < m {
        return Err(Error::InvalidArgument(format!("{} points for period {m}", points.len())));
    }
    for i in 0..points.len().saturating_sub(m) {
        let image = g.apply(&points[i]);
        let err = dist_unchecked(&image, &points[i + m]);
        if err > 1e-8 {
            return Err(Error::Precondition(format!("g·p{i} differs from p{} by {err:e}", i + m)));
        }
    }
    let closing = g.apply(&points[0]);
    let at = |i: usize| if i < points.len() { points[i] } else { closing };
    let period_length = (0..m).map(|i| dist_unchecked(&at(i), &at(i + 1))).sum::<f64>();
    let translation_length = g.translation_length();
    let discrepancy = (translation_length - period_length).abs();
    let bound = m as f64 * delta;
    Ok(ClosingReport { translation_length, period_length, discrepancy, bound, violated: discrepancy > bound })
}
