use serde::Serialize;

use super::HPoint;
use crate::error::{Error, Result};

/// Hyperbolic distance between two points of the same model.
///
/// `q` is first moved by the isometry taking `p` to the basepoint,
/// `(a, b) ↦ ((a − a_p)/b_p, b/b_p)`. The distance from the basepoint to
/// `(a', b')` is `arccosh((|a'|² + b'² + 1)/(2b'))`, evaluated here as
/// `2 arcsinh(√(|a'|² + (b' − 1)²) / (2√b'))` to keep relative precision
/// for nearby points.
pub fn dist(p: &HPoint, q: &HPoint) -> Result<f64> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch(format!(
            "dist between H{} and H{} points",
            p.dim().n(),
            q.dim().n()
        )));
    }
    Ok(dist_unchecked(p, q))
}

pub(crate) fn dist_unchecked(p: &HPoint, q: &HPoint) -> f64 {
    let a = (q.a() - p.a()) / p.b();
    let b = q.b() / p.b();
    let num = a.norm_sqr() + (b - 1.0) * (b - 1.0);
    2.0 * (0.5 * (num / b).sqrt()).asinh()
}

/// Hyperbolic distance between two points of a common horosphere whose
/// horocyclic distance is `l`.
pub fn horo_to_hyperbolic(l: f64) -> Result<f64> {
    if !(l >= 0.0 && l.is_finite()) {
        return Err(Error::InvalidArgument(format!("horocyclic length {l} must be a nonnegative number")));
    }
    Ok(2.0 * (0.5 * l).asinh())
}

/// Inverse of [`horo_to_hyperbolic`].
pub fn hyperbolic_to_horo(d: f64) -> Result<f64> {
    if !(d >= 0.0 && d.is_finite()) {
        return Err(Error::InvalidArgument(format!("distance {d} must be a nonnegative number")));
    }
    Ok(2.0 * (0.5 * d).sinh())
}

/// Horocyclic and hyperbolic distances after pushing two points a depth
/// `t` towards the centre of their horosphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HoroDecay {
    /// `e^{-t} L₀`.
    pub horocyclic: f64,
    /// Hyperbolic distance at depth `t`.
    pub distance: f64,
    /// Hyperbolic distance at depth 0.
    pub initial_distance: f64,
    /// `e^{-t} d₀`.
    pub lower: f64,
    /// `D e^{-t} d₀`.
    pub upper: f64,
    /// `D = (L₀/2) / arcsinh(L₀/2)`, the sharp constant for this `L₀`.
    pub constant: f64,
}

/// Decay of horocyclic distance with depth, with the sandwich bound
/// `e^{-t} d₀ ≤ d_t ≤ D e^{-t} d₀`.
///
/// Since `d = 2 arcsinh(L/2)` is concave in `L` with slope at most 1,
/// `d_t ≤ e^{-t} L₀ = D e^{-t} d₀`, and concavity through the origin gives
/// the lower bound.
pub fn horo_decay(l0: f64, t: f64) -> Result<HoroDecay> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("depth {t} must be a nonnegative number")));
    }
    let d0 = horo_to_hyperbolic(l0)?;
    let horocyclic = (-t).exp() * l0;
    let distance = horo_to_hyperbolic(horocyclic)?;
    let constant = if l0 == 0.0 { 1.0 } else { 0.5 * l0 / (0.5 * l0).asinh() };
    let lower = (-t).exp() * d0;
    Ok(HoroDecay { horocyclic, distance, initial_distance: d0, lower, upper: constant * lower, constant })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hgeom::Dim;
    use num_complex::Complex64;

    fn h2(u: f64, v: f64) -> HPoint {
        HPoint::h2(u, v).unwrap()
    }

    #[test]
    fn distance_examples() {
        let i = HPoint::basepoint(Dim::Two);
        assert_eq!(dist(&i, &i).unwrap(), 0.0);
        assert!((dist(&i, &h2(0.0, 2.0)).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert!((dist(&i, &h2(1.0, 1.0)).unwrap() - 0.962_423_650_119_206_9).abs() < 1e-14);
    }

    #[test]
    fn distance_symmetric() {
        let p = h2(-0.3, 0.2);
        let q = h2(4.0, 7.5);
        assert!((dist(&p, &q).unwrap() - dist(&q, &p).unwrap()).abs() < 1e-13);
    }

    #[test]
    fn distance_h3_matches_closed_form() {
        let p = HPoint::basepoint(Dim::Three);
        let q = HPoint::h3(Complex64::new(1.0, 2.0), 3.0).unwrap();
        let expected = ((1.0 + 4.0 + 9.0 + 1.0) / 6.0f64).acosh();
        assert!((dist(&p, &q).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn dimension_mismatch() {
        let p = HPoint::basepoint(Dim::Two);
        let q = HPoint::basepoint(Dim::Three);
        assert!(matches!(dist(&p, &q), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn horo_examples() {
        assert_eq!(horo_to_hyperbolic(0.0).unwrap(), 0.0);
        assert!((horo_to_hyperbolic(2.0).unwrap() - 1.762_747_174_039_086).abs() < 1e-14);
        assert!(horo_to_hyperbolic(-1.0).is_err());
        for k in 0..100 {
            let d = 0.13 * k as f64;
            let back = horo_to_hyperbolic(hyperbolic_to_horo(d).unwrap()).unwrap();
            assert!((back - d).abs() <= 1e-12 * d.max(1.0));
        }
    }

    #[test]
    fn horo_decay_examples() {
        assert!((horo_decay(1.0, 0.0).unwrap().horocyclic - 1.0).abs() < 1e-15);
        assert!((horo_decay(1.0, 2f64.ln()).unwrap().horocyclic - 0.5).abs() < 1e-15);
        let r = horo_decay(4.0, 1.5).unwrap();
        assert!(r.lower <= r.distance && r.distance <= r.upper);
        assert!(r.constant > 1.0);
    }
}
