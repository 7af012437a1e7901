use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hgeom::{FermiFrame, HPoint};

/// How the distance to the base line is rescaled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Profile {
    /// `Ψ(v) = C₀ v`.
    Linear,
    /// `Ψ(v) = σ⁻¹(C₀ σ(v))` with `σ(v) = asinh(tanh v / tan Â)`, which takes
    /// the ray at angle `Â` from the source origin onto the ray at angle `Â`
    /// from the target origin.
    ExactBisect { angle: f64 },
}

/// `(h, v) ↦ (C₀ h, Ψ(v))` in Fermi coordinates of a source and a target
/// frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FermiStretchMap {
    source: FermiFrame,
    target: FermiFrame,
    c0: f64,
    profile: Profile,
}

/// Points this far below the base line are still accepted.
const DOMAIN_SLACK: f64 = 1e-12;

impl FermiStretchMap {
    pub fn new(source: FermiFrame, target: FermiFrame, c0: f64, profile: Profile) -> Result<Self> {
        if !(c0 > 0.0 && c0 < 1.0) {
            return Err(Error::InvalidArgument(format!("stretch factor {c0} not in (0, 1)")));
        }
        if let Profile::ExactBisect { angle } = profile {
            if !(angle > 0.0 && angle < FRAC_PI_2) {
                return Err(Error::InvalidArgument(format!("bisect angle {angle} not in (0, π/2)")));
            }
        }
        Ok(FermiStretchMap { source, target, c0, profile })
    }

    pub fn source(&self) -> &FermiFrame {
        &self.source
    }

    pub fn target(&self) -> &FermiFrame {
        &self.target
    }

    pub fn factor(&self) -> f64 {
        self.c0
    }

    pub fn profile(&self) -> Profile {
        self.profile
    }

    pub fn psi(&self, v: f64) -> f64 {
        match self.profile {
            Profile::Linear => self.c0 * v,
            Profile::ExactBisect { angle } => {
                let t = angle.tan();
                let sigma = (v.tanh() / t).asinh();
                (t * (self.c0 * sigma).sinh()).atanh()
            }
        }
    }

    /// Image of `p`, which must lie in the closed half-plane to the left of
    /// the source line.
    pub fn apply(&self, p: &HPoint) -> Result<HPoint> {
        let c = self.source.from_point(p)?;
        if !(c.v >= -DOMAIN_SLACK) || !c.h.is_finite() {
            return Err(Error::InvalidPoint(format!("Fermi height {} is below the base line", c.v)));
        }
        Ok(self.target.to_point(self.c0 * c.h, self.psi(c.v)))
    }
}

pub fn fermi_stretch(map: &FermiStretchMap, p: &HPoint) -> Result<HPoint> {
    map.apply(p)
}
