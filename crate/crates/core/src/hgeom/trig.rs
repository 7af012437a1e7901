use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::moebius::Isometry;

/// Distance between points on two lines perpendicular to a segment of
/// length ℓ at its endpoints, the lines making an angle θ, at signed
/// distances `s`, `t` from the segment:
/// `cosh d = cosh ℓ cosh s cosh t − cos θ sinh s sinh t`.
///
/// Rewritten with half-angle identities as
/// `sinh²(d/2) = sinh²((s − t)/2) + sinh²(ℓ/2) cosh s cosh t + sin²(θ/2) sinh s sinh t`.
pub fn prism_distance(l: f64, theta: f64, s: f64, t: f64) -> f64 {
    let h = ((s - t) * 0.5).sinh().powi(2)
        + (0.5 * l).sinh().powi(2) * s.cosh() * t.cosh()
        + (0.5 * theta).sin().powi(2) * s.sinh() * t.sinh();
    2.0 * h.max(0.0).sqrt().asinh()
}

/// Chord between two points of a circle of radius `r` at central angle θ:
/// `sinh(d/2) = sinh r · sin(θ/2)`.
pub fn circle_chord(r: f64, theta: f64) -> Result<f64> {
    check_radius(r)?;
    Ok(2.0 * (r.sinh() * (0.5 * theta).sin().abs()).asinh())
}

/// Length of a circular arc of radius `r` and central angle θ.
pub fn circle_arc(r: f64, theta: f64) -> Result<f64> {
    check_radius(r)?;
    Ok(theta.abs() * r.sinh())
}

fn check_radius(r: f64) -> Result<()> {
    if r >= 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("radius {r} must be nonnegative")))
    }
}

/// Distance between two points at the same signed distance `s` from a line
/// whose feet are ℓ apart; this is [`prism_distance`] with θ = 0, `s = t`,
/// i.e. `sinh(d/2) = sinh(ℓ/2) cosh s`, and `d ~ ℓ cosh s` for small ℓ.
pub fn equidistant_separation(s: f64, l: f64) -> f64 {
    2.0 * ((0.5 * l).sinh().abs() * s.cosh()).asinh()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoSpikes {
    pub distance: f64,
    /// `L + ξ² + η²`.
    pub asymptotic: f64,
    /// `distance − asymptotic`.
    pub residual: f64,
}

/// Distance between `x`, `y` in two ideal spikes: `x'`, `y'` at distance `L`
/// on the middle line, and `x`, `y` at horocyclic distances ξ, η from them.
///
/// `cosh d = ½ ‖(1 0; ξ 1) T_L (1 −η; 0 1)‖²`, evaluated through the Cartan
/// projection of that product.
pub fn two_spikes_distance(l: f64, xi: f64, eta: f64) -> Result<TwoSpikes> {
    if !(l.is_finite() && xi >= 0.0 && eta >= 0.0) {
        return Err(Error::InvalidArgument("spike data must be finite with ξ, η ≥ 0".into()));
    }
    let e = (0.5 * l).exp();
    let m = Isometry::real(e, -eta * e, xi * e, -xi * eta * e + 1.0 / e)?;
    let distance = m.cartan_mu();
    let asymptotic = l + xi * xi + eta * eta;
    Ok(TwoSpikes { distance, asymptotic, residual: distance - asymptotic })
}

/// Sides of a right triangle (right angle at B) from its other two angles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RightTriangle {
    pub angle_a: f64,
    pub angle_c: f64,
    /// BC, opposite A.
    pub a: f64,
    /// AC, the hypotenuse.
    pub b: f64,
    /// AB, opposite C.
    pub c: f64,
}

impl RightTriangle {
    /// Residuals of `tan Â = tanh a / sinh c`, `cos Â = tanh c / tanh b`,
    /// `sin Â = sinh a / sinh b` and `cosh b = cosh a cosh c` (the last one
    /// relative to `cosh b`).
    pub fn residuals(&self) -> [f64; 4] {
        let (a, b, c, alpha) = (self.a, self.b, self.c, self.angle_a);
        [
            alpha.tan() - a.tanh() / c.sinh(),
            alpha.cos() - c.tanh() / b.tanh(),
            alpha.sin() - a.sinh() / b.sinh(),
            (b.cosh() - a.cosh() * c.cosh()) / b.cosh(),
        ]
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals().iter().fold(0.0, |m, r| m.max(r.abs()))
    }
}

/// Solves a right triangle from the angles Â, Ĉ (Â + Ĉ < π/2):
/// `cosh c = cos Ĉ / sin Â`, `cosh a = cos Â / sin Ĉ`, `cosh b = cot Â cot Ĉ`.
pub fn right_triangle_solve(angle_a: f64, angle_c: f64) -> Result<RightTriangle> {
    if !(angle_a > 0.0 && angle_c > 0.0) {
        return Err(Error::InvalidArgument("triangle angles must be positive".into()));
    }
    let defect = FRAC_PI_2 - angle_a - angle_c;
    if !(defect > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "angles {angle_a} + {angle_c} + π/2 do not form a hyperbolic triangle"
        )));
    }
    // cosh x − 1 written as a product so that it stays accurate as the
    // defect goes to zero.
    let side = |opposite: f64, adjacent: f64| {
        let num = 2.0 * (0.5 * (FRAC_PI_2 - adjacent + opposite)).sin() * (0.5 * defect).sin();
        let ch_minus_1 = num / adjacent.sin();
        2.0 * (0.5 * ch_minus_1).sqrt().asinh()
    };
    let c = side(angle_c, angle_a);
    let a = side(angle_a, angle_c);
    let ch_b_minus_1 = defect.sin() / (angle_a.sin() * angle_c.sin());
    let b = 2.0 * (0.5 * ch_b_minus_1).sqrt().asinh();
    Ok(RightTriangle { angle_a, angle_c, a, b, c })
}

/// Necessary condition for two disjoint lines at distance η and angle θ to
/// stay disjoint under a `C`-Lipschitz map:
/// `((cosh η + cos θ)/2)^C + ((cosh η − cos θ)/2)^C ≥ 1`.
pub fn leaf_pair_predicate(eta: f64, theta: f64, c: f64) -> Result<bool> {
    if !(c > 1.0) || !(eta >= 0.0) || !(0.0..=PI).contains(&theta) {
        return Err(Error::InvalidArgument("need C > 1, η ≥ 0 and θ ∈ [0, π]".into()));
    }
    let (ch, cs) = (eta.cosh(), theta.cos());
    let lhs = (0.5 * (ch + cs)).powf(c) + (0.5 * (ch - cs)).max(0.0).powf(c);
    Ok(lhs >= 1.0 - 1e-12)
}
