use num_complex::Complex64;
use serde::Serialize;

use super::{BoundaryPoint, GeodesicLine};
use crate::error::{Error, Result};
use crate::moebius::Isometry;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LineRelation {
    Disjoint,
    Intersecting,
    /// The lines share an ideal endpoint.
    Asymptotic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineDistance {
    pub distance: f64,
    pub relation: LineRelation,
}

/// `[ξ₁:ξ₂:ξ₃:ξ₄] = (ξ₄ − ξ₂)(ξ₃ − ξ₁) / ((ξ₄ − ξ₁)(ξ₃ − ξ₂))`, normalized so
/// that `[∞:0:1:ξ] = ξ`. Factors involving ∞ cancel in pairs.
pub fn cross_ratio_complex(xi: [BoundaryPoint; 4]) -> Result<Complex64> {
    for i in 0..4 {
        for j in i + 1..4 {
            if xi[i].approx_eq(&xi[j], 1e-15) {
                return Err(Error::InvalidArgument("cross-ratio of coincident points".into()));
            }
        }
    }
    let diff = |i: usize, j: usize| -> Option<Complex64> {
        match (xi[i], xi[j]) {
            (BoundaryPoint::Finite(a), BoundaryPoint::Finite(b)) => Some(a - b),
            _ => None,
        }
    };
    let num = [diff(3, 1), diff(2, 0)];
    let den = [diff(3, 0), diff(2, 1)];
    let prod = |v: [Option<Complex64>; 2]| v.iter().flatten().product::<Complex64>();
    Ok(prod(num) / prod(den))
}

/// Real cross-ratio of four points of ∂H² = ℝ ∪ {∞}.
pub fn cross_ratio(xi: [BoundaryPoint; 4]) -> Result<f64> {
    if xi.iter().any(|x| !x.is_real()) {
        return Err(Error::InvalidArgument("real cross-ratio needs points of ℝ ∪ {∞}".into()));
    }
    Ok(cross_ratio_complex(xi)?.re)
}

/// Distance between two geodesic lines.
///
/// `l1` is first moved onto (0, ∞). If `g = (a b; c d)` with unit
/// determinant takes (0, ∞) onto the image of `l2`, then
/// `cosh Δ = |ad + bc| / |ad − bc| = |1 + 2bc|`, so `sinh²(Δ/2) = bc` when the
/// orientations agree and `−ad` when they are opposite; the lines meet when
/// neither is positive.
pub fn line_distance(l1: &GeodesicLine, l2: &GeodesicLine) -> Result<LineDistance> {
    let g = Isometry::mapping_axis_to(l1)?;
    let moved = g.inverse().apply_line(l2)?;
    let touches = |xi: BoundaryPoint, other: BoundaryPoint| match xi {
        BoundaryPoint::Infinity => true,
        BoundaryPoint::Finite(z) => {
            let scale = other.finite().map_or(1.0, |w| w.norm()).max(z.norm());
            z.norm() <= 1e-13 * scale
        }
    };
    if touches(moved.start(), moved.end()) || touches(moved.end(), moved.start()) {
        return Ok(LineDistance { distance: 0.0, relation: LineRelation::Asymptotic });
    }
    let [a, b, c, d] = Isometry::mapping_axis_to(&moved)?.entries();
    if l1.is_real() && l2.is_real() {
        let (ad, bc) = ((a * d).re, (b * c).re);
        let s2 = if bc > 0.0 {
            bc
        } else if ad < 0.0 {
            -ad
        } else {
            return Ok(LineDistance { distance: 0.0, relation: LineRelation::Intersecting });
        };
        return Ok(LineDistance { distance: 2.0 * s2.sqrt().asinh(), relation: LineRelation::Disjoint });
    }
    // In H³ the same expression is the cosine of the complex distance.
    let delta = (a * d + b * c).acosh().re.abs();
    if delta <= 1e-12 {
        Ok(LineDistance { distance: 0.0, relation: LineRelation::Intersecting })
    } else {
        Ok(LineDistance { distance: delta, relation: LineRelation::Disjoint })
    }
}
