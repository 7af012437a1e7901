use serde::Serialize;

use super::{Dim, GeodesicLine, HPoint};
use crate::error::{Error, Result};
use crate::moebius::Isometry;

/// Fermi coordinates `(h, v)` along an oriented line of H²: `h` is the
/// signed arclength of the foot of the perpendicular from the origin,
/// `v` the signed distance to the line, positive on its left.
///
/// In the canonical frame (line (0, ∞), origin i) the point with
/// coordinates `(h, v)` is `e^h (−tanh v + i sech v)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FermiFrame {
    line: GeodesicLine,
    origin: HPoint,
    /// Takes the canonical frame to this one.
    chart: Isometry,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FermiCoords {
    pub h: f64,
    pub v: f64,
}

impl FermiFrame {
    pub fn canonical() -> Self {
        FermiFrame {
            line: GeodesicLine::vertical_axis(),
            origin: HPoint::basepoint(Dim::Two),
            chart: Isometry::identity(crate::moebius::Field::Real),
        }
    }

    pub fn new(line: GeodesicLine, origin: HPoint) -> Result<Self> {
        if origin.dim() != Dim::Two || !line.is_real() {
            return Err(Error::Unsupported("Fermi frames are defined in H²".into()));
        }
        let g0 = Isometry::mapping_axis_to(&line)?;
        let q = g0.inverse().apply(&origin);
        let r = q.as_complex().norm();
        if q.u().abs() > 1e-10 * r {
            return Err(Error::InvalidArgument("frame origin is not on the base line".into()));
        }
        let chart = g0.mul(&Isometry::translation(r.ln()));
        Ok(FermiFrame { line, origin, chart })
    }

    /// Frame at `a` along the line through `a` and `b`, oriented towards `b`.
    pub fn from_points(a: &HPoint, b: &HPoint) -> Result<Self> {
        let line = GeodesicLine::through(a, b)?;
        FermiFrame::new(line, *a)
    }

    pub fn line(&self) -> &GeodesicLine {
        &self.line
    }

    pub fn origin(&self) -> &HPoint {
        &self.origin
    }

    /// Isometry taking the canonical frame to this one.
    pub fn chart(&self) -> &Isometry {
        &self.chart
    }

    pub fn to_point(&self, h: f64, v: f64) -> HPoint {
        let e = h.exp();
        let p = HPoint::from_raw(
            num_complex::Complex64::new(-e * v.tanh(), 0.0),
            e / v.cosh(),
            Dim::Two,
        );
        self.chart.apply(&p)
    }

    pub fn from_point(&self, p: &HPoint) -> Result<FermiCoords> {
        if p.dim() != Dim::Two {
            return Err(Error::DimensionMismatch("Fermi coordinates of an H³ point".into()));
        }
        let q = self.chart.inverse().apply(p);
        let r = q.as_complex().norm();
        Ok(FermiCoords { h: r.ln(), v: (-q.u() / r).atanh() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hgeom::{dist, equidistant_separation};

    #[test]
    fn canonical_frame_axes() {
        let f = FermiFrame::canonical();
        let p = f.to_point(0.8, 0.0);
        assert!(p.u().abs() < 1e-15 && (p.v() - 0.8f64.exp()).abs() < 1e-14);
        let q = f.to_point(0.0, 0.6);
        let i = HPoint::basepoint(Dim::Two);
        assert!((dist(&i, &q).unwrap() - 0.6).abs() < 1e-14);
        assert!(q.u() < 0.0);
        assert!(((q.u().powi(2) + q.v().powi(2)) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn round_trip_in_general_frame() {
        let a = HPoint::h2(1.5, 0.4).unwrap();
        let b = HPoint::h2(-2.0, 3.0).unwrap();
        let f = FermiFrame::from_points(&a, &b).unwrap();
        let o = f.to_point(0.0, 0.0);
        assert!(dist(&o, &a).unwrap() < 1e-12);
        let hb = f.from_point(&b).unwrap();
        assert!(hb.v.abs() < 1e-10);
        assert!((hb.h - dist(&a, &b).unwrap()).abs() < 1e-10);
        for &(h, v) in &[(0.3, -1.2), (-2.0, 0.7), (1.1, 2.5)] {
            let c = f.from_point(&f.to_point(h, v)).unwrap();
            assert!((c.h - h).abs() < 1e-10 && (c.v - v).abs() < 1e-10);
        }
    }

    #[test]
    fn equidistant_points() {
        let f = FermiFrame::canonical();
        let (h, v) = (0.9, -0.4);
        let d = dist(&f.to_point(0.0, v), &f.to_point(h, v)).unwrap();
        assert!((d - equidistant_separation(v, h)).abs() < 1e-12);
    }

    #[test]
    fn origin_off_line_rejected() {
        let l = GeodesicLine::vertical_axis();
        assert!(FermiFrame::new(l, HPoint::h2(0.5, 1.0).unwrap()).is_err());
    }
}
