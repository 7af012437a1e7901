use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dimension of the hyperbolic space a point lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dim {
    Two,
    Three,
}

impl Dim {
    pub fn n(self) -> usize {
        match self {
            Dim::Two => 2,
            Dim::Three => 3,
        }
    }

    pub fn max(self, other: Dim) -> Dim {
        if self == Dim::Three || other == Dim::Three {
            Dim::Three
        } else {
            Dim::Two
        }
    }
}

/// A point of the upper half-plane (`u + iv`, `v > 0`) or of the upper
/// half-space (`(a, b)` with `a` complex, `b > 0`).
///
/// Both are stored as `(a, b)`; an H² point has `a` real, which is the
/// standard totally geodesic embedding H² ⊂ H³ over the real line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HPoint {
    a: Complex64,
    b: f64,
    dim: Dim,
}

impl HPoint {
    pub fn h2(u: f64, v: f64) -> Result<Self> {
        if !(u.is_finite() && v.is_finite()) || v <= 0.0 {
            return Err(Error::InvalidPoint(format!("({u}, {v}) is not in the upper half-plane")));
        }
        Ok(HPoint { a: Complex64::new(u, 0.0), b: v, dim: Dim::Two })
    }

    pub fn h3(a: Complex64, b: f64) -> Result<Self> {
        if !(a.re.is_finite() && a.im.is_finite() && b.is_finite()) || b <= 0.0 {
            return Err(Error::InvalidPoint(format!("({a}, {b}) is not in the upper half-space")));
        }
        Ok(HPoint { a, b, dim: Dim::Three })
    }

    /// The basepoint `p₀`: `i` in H², `(0, 1)` in H³.
    pub fn basepoint(dim: Dim) -> Self {
        HPoint { a: Complex64::new(0.0, 0.0), b: 1.0, dim }
    }

    /// Builds a point from raw half-space coordinates, dropping the imaginary
    /// part of `a` when `dim` is two. Callers guarantee `b > 0`.
    pub(crate) fn from_raw(a: Complex64, b: f64, dim: Dim) -> Self {
        match dim {
            Dim::Two => HPoint { a: Complex64::new(a.re, 0.0), b, dim },
            Dim::Three => HPoint { a, b, dim },
        }
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    /// Horizontal coordinate (`u` in H², `a` in H³).
    pub fn a(&self) -> Complex64 {
        self.a
    }

    /// Height above the boundary (`v` in H², `b` in H³).
    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn u(&self) -> f64 {
        self.a.re
    }

    pub fn v(&self) -> f64 {
        self.b
    }

    /// The H² point as the complex number `u + iv`.
    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.a.re, self.b)
    }

    pub fn to_dim(self, dim: Dim) -> Result<Self> {
        match (self.dim, dim) {
            (a, b) if a == b => Ok(self),
            (Dim::Two, Dim::Three) => Ok(HPoint { dim: Dim::Three, ..self }),
            _ if self.a.im.abs() <= 1e-12 * self.b.max(1.0) => {
                Ok(HPoint { a: Complex64::new(self.a.re, 0.0), dim: Dim::Two, ..self })
            }
            _ => Err(Error::DimensionMismatch("point is not on the vertical plane over ℝ".into())),
        }
    }
}

/// Serialized as `[u, v]` in H² and `[re a, im a, b]` in H³.
impl Serialize for HPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.dim {
            Dim::Two => [self.a.re, self.b].serialize(s),
            Dim::Three => [self.a.re, self.a.im, self.b].serialize(s),
        }
    }
}

/// An ideal point: a finite boundary coordinate or ∞.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryPoint {
    Finite(Complex64),
    Infinity,
}

impl BoundaryPoint {
    pub fn real(x: f64) -> Self {
        BoundaryPoint::Finite(Complex64::new(x, 0.0))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, BoundaryPoint::Infinity)
    }

    pub fn finite(&self) -> Option<Complex64> {
        match self {
            BoundaryPoint::Finite(z) => Some(*z),
            BoundaryPoint::Infinity => None,
        }
    }

    /// Real coordinate for points of ∂H² = ℝ ∪ {∞}; `None` for ∞.
    pub fn real_value(&self) -> Option<f64> {
        self.finite().map(|z| z.re)
    }

    pub fn is_real(&self) -> bool {
        match self {
            BoundaryPoint::Finite(z) => z.im.abs() <= 1e-12 * z.re.abs().max(1.0),
            BoundaryPoint::Infinity => true,
        }
    }

    pub fn approx_eq(&self, other: &BoundaryPoint, tol: f64) -> bool {
        match (self, other) {
            (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => true,
            (BoundaryPoint::Finite(a), BoundaryPoint::Finite(b)) => {
                (a - b).norm() <= tol * a.norm().max(b.norm()).max(1.0)
            }
            _ => false,
        }
    }
}

/// An oriented geodesic line, given by its two distinct endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicLine {
    start: BoundaryPoint,
    end: BoundaryPoint,
}

impl GeodesicLine {
    pub fn new(start: BoundaryPoint, end: BoundaryPoint) -> Result<Self> {
        if start.approx_eq(&end, 1e-14) {
            return Err(Error::InvalidLine("endpoints coincide".into()));
        }
        if let BoundaryPoint::Finite(z) = start {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::InvalidLine("non-finite endpoint".into()));
            }
        }
        if let BoundaryPoint::Finite(z) = end {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::InvalidLine("non-finite endpoint".into()));
            }
        }
        Ok(GeodesicLine { start, end })
    }

    /// Line of ∂H² = ℝ ∪ {∞} between two real endpoints (`None` = ∞).
    pub fn real(start: Option<f64>, end: Option<f64>) -> Result<Self> {
        let to_bp = |x: Option<f64>| x.map_or(BoundaryPoint::Infinity, BoundaryPoint::real);
        GeodesicLine::new(to_bp(start), to_bp(end))
    }

    /// The line from 0 to ∞.
    pub fn vertical_axis() -> Self {
        GeodesicLine { start: BoundaryPoint::real(0.0), end: BoundaryPoint::Infinity }
    }

    pub fn start(&self) -> BoundaryPoint {
        self.start
    }

    pub fn end(&self) -> BoundaryPoint {
        self.end
    }

    pub fn reversed(&self) -> Self {
        GeodesicLine { start: self.end, end: self.start }
    }

    pub fn is_real(&self) -> bool {
        self.start.is_real() && self.end.is_real()
    }

    /// Unit half-circle (or vertical line) geodesic through two H² points,
    /// oriented from `p` to `q`.
    pub fn through(p: &HPoint, q: &HPoint) -> Result<Self> {
        if p.dim() != Dim::Two || q.dim() != Dim::Two {
            return Err(Error::Unsupported("geodesic through points is implemented in H² only".into()));
        }
        let (x1, y1, x2, y2) = (p.u(), p.v(), q.u(), q.v());
        let scale = x1.abs().max(x2.abs()).max(y1).max(y2);
        if (x2 - x1).abs() <= 1e-15 * scale {
            if (y2 - y1).abs() <= 1e-15 * scale {
                return Err(Error::InvalidLine("points coincide".into()));
            }
            let x = 0.5 * (x1 + x2);
            return if y2 > y1 {
                GeodesicLine::real(Some(x), None)
            } else {
                GeodesicLine::real(None, Some(x))
            };
        }
        let center = ((x2 * x2 + y2 * y2) - (x1 * x1 + y1 * y1)) / (2.0 * (x2 - x1));
        let radius = ((x1 - center).powi(2) + y1 * y1).sqrt();
        if x2 > x1 {
            GeodesicLine::real(Some(center - radius), Some(center + radius))
        } else {
            GeodesicLine::real(Some(center + radius), Some(center - radius))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_points_off_the_half_plane() {
        assert!(HPoint::h2(0.0, 0.0).is_err());
        assert!(HPoint::h2(f64::NAN, 1.0).is_err());
        assert!(HPoint::h3(Complex64::new(1.0, 1.0), -1.0).is_err());
    }

    #[test]
    fn line_through_points_on_unit_circle() {
        let p = HPoint::h2(-0.6, 0.8).unwrap();
        let q = HPoint::h2(0.6, 0.8).unwrap();
        let l = GeodesicLine::through(&p, &q).unwrap();
        assert!((l.start().real_value().unwrap() + 1.0).abs() < 1e-15);
        assert!((l.end().real_value().unwrap() - 1.0).abs() < 1e-15);
        let l = GeodesicLine::through(&q, &p).unwrap();
        assert!((l.start().real_value().unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn vertical_line_through_points() {
        let p = HPoint::h2(2.0, 1.0).unwrap();
        let q = HPoint::h2(2.0, 3.0).unwrap();
        let l = GeodesicLine::through(&p, &q).unwrap();
        assert_eq!(l.end(), BoundaryPoint::Infinity);
        assert_eq!(l.start(), BoundaryPoint::real(2.0));
    }

    #[test]
    fn coincident_endpoints_rejected() {
        assert!(GeodesicLine::real(Some(1.0), Some(1.0)).is_err());
        assert!(GeodesicLine::real(None, None).is_err());
    }
}
