use num_complex::Complex64;

use super::{Dim, HPoint};
use crate::error::{Error, Result};

/// Tangent vector in ambient coordinates `[x₁, x₂, x₃, t]`.
pub type Tangent = [f64; 4];

/// Lorentz form `x₁y₁ + x₂y₂ + x₃y₃ − t·t'`.
pub fn lorentz_dot(x: &[f64; 4], y: &[f64; 4]) -> f64 {
    x[0] * y[0] + x[1] * y[1] + x[2] * y[2] - x[3] * y[3]
}

/// A point of the upper sheet of the hyperboloid `|x|² − t² = −1`.
///
/// Stored as `[x₁, x₂, x₃, t]`; H² points have `x₃ = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperboloidPoint {
    x: [f64; 4],
    dim: Dim,
}

impl HyperboloidPoint {
    /// From coordinates `(x₁, …, x_n, x_{n+1})`, the last one timelike.
    pub fn new(coords: &[f64]) -> Result<Self> {
        let (x, dim) = match coords {
            [a, b, t] => ([*a, *b, 0.0, *t], Dim::Two),
            [a, b, c, t] => ([*a, *b, *c, *t], Dim::Three),
            _ => return Err(Error::DimensionMismatch(format!("{} hyperboloid coordinates", coords.len()))),
        };
        let p = HyperboloidPoint { x, dim };
        if !(x[3] > 0.0) || !x.iter().all(|c| c.is_finite()) || p.form_residual() > 1e-10 {
            return Err(Error::InvalidPoint("not on the upper hyperboloid sheet".into()));
        }
        Ok(p)
    }

    /// Projects spatial coordinates onto the sheet by recomputing `t`.
    pub(crate) fn from_spatial(s: [f64; 3], dim: Dim) -> Self {
        let s = if dim == Dim::Two { [s[0], s[1], 0.0] } else { s };
        let t = (1.0 + s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt();
        HyperboloidPoint { x: [s[0], s[1], s[2], t], dim }
    }

    pub fn from_point(p: &HPoint) -> Self {
        let a = p.a();
        let b = p.b();
        let r = a.norm_sqr() + b * b;
        let inv = 0.5 / b;
        let s = [2.0 * a.re * inv, (r - 1.0) * inv, 2.0 * a.im * inv];
        HyperboloidPoint { x: [s[0], s[1], s[2], (r + 1.0) * inv], dim: p.dim() }
    }

    pub fn to_point(&self) -> HPoint {
        let [x1, x2, x3, t] = self.x;
        let b = 1.0 / (t - x2);
        HPoint::from_raw(Complex64::new(x1 * b, x3 * b), b, self.dim)
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    /// Coordinates `(x₁, …, x_n, x_{n+1})`.
    pub fn coords(&self) -> Vec<f64> {
        match self.dim {
            Dim::Two => vec![self.x[0], self.x[1], self.x[3]],
            Dim::Three => self.x.to_vec(),
        }
    }

    pub fn raw(&self) -> &[f64; 4] {
        &self.x
    }

    /// `|⟨x, x⟩ + 1|`, relative to `t²` once `t > 1`.
    pub fn form_residual(&self) -> f64 {
        (lorentz_dot(&self.x, &self.x) + 1.0).abs() / self.x[3].powi(2).max(1.0)
    }

    /// `arccosh(−⟨P, Q⟩)`, computed as `2 arcsinh(√⟨P − Q, P − Q⟩ / 2)`.
    pub fn distance(&self, other: &HyperboloidPoint) -> f64 {
        let d = sub(&self.x, &other.x);
        2.0 * (0.5 * lorentz_dot(&d, &d).max(0.0).sqrt()).asinh()
    }

    /// Riemannian exponential `cosh|w| x + sinh|w| w/|w|`.
    pub fn exp(&self, w: &Tangent) -> HyperboloidPoint {
        let n = lorentz_dot(w, w).max(0.0).sqrt();
        if n == 0.0 {
            return *self;
        }
        let (s, c) = (n.sinh() / n, n.cosh());
        let y = [0, 1, 2].map(|k| c * self.x[k] + s * w[k]);
        HyperboloidPoint::from_spatial(y, self.dim)
    }

    /// Riemannian logarithm: the tangent vector at `self` of length
    /// `d(self, y)` pointing towards `y`.
    pub fn log(&self, y: &HyperboloidPoint) -> Tangent {
        let ip = lorentz_dot(&self.x, &y.x);
        let u = [0, 1, 2, 3].map(|k| y.x[k] + ip * self.x[k]);
        let n = lorentz_dot(&u, &u).max(0.0).sqrt();
        if n == 0.0 {
            return [0.0; 4];
        }
        let d = self.distance(y);
        u.map(|c| c * d / n)
    }

    /// Removes the component of `w` normal to the sheet at `self`.
    pub fn project_tangent(&self, w: &Tangent) -> Tangent {
        let ip = lorentz_dot(&self.x, w);
        [0, 1, 2, 3].map(|k| w[k] + ip * self.x[k])
    }
}

/// Riemannian logarithm at `x` in the orthonormal frame obtained by pushing
/// the standard frame at the basepoint forward through `z ↦ a_x + b_x z`.
///
/// Working in that chart avoids the cancellation of the ambient formula for
/// points far from the basepoint. Components beyond `x.dim().n()` are zero.
pub fn log_at(x: &HPoint, p: &HPoint) -> [f64; 3] {
    let a = (p.a() - x.a()) / x.b();
    let b = p.b() / x.b();
    let inv = 0.5 / b;
    let s = [2.0 * a.re * inv, (a.norm_sqr() + (b - 1.0) * (b + 1.0)) * inv, 2.0 * a.im * inv];
    let sinh_d = (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt();
    if sinh_d == 0.0 {
        return [0.0; 3];
    }
    let d = 2.0 * (0.5 * ((a.norm_sqr() + (b - 1.0).powi(2)) / b).sqrt()).asinh();
    s.map(|c| c * d / sinh_d)
}

/// Riemannian exponential at `x`, in the frame of [`log_at`].
pub fn exp_at(x: &HPoint, w: &[f64; 3]) -> HPoint {
    let w = if x.dim() == Dim::Two { [w[0], w[1], 0.0] } else { *w };
    let n = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
    if n == 0.0 {
        return *x;
    }
    let k = n.sinh() / n;
    let s = w.map(|c| c * k);
    // t − s₁ = cosh n − sinh(n) ŵ₁, kept positive and accurate
    let t_minus = if s[1] <= 0.0 {
        n.cosh() - s[1]
    } else {
        (1.0 + s[0] * s[0] + s[2] * s[2]) / (n.cosh() + s[1])
    };
    let b = 1.0 / t_minus;
    let a = Complex64::new(s[0] * b, s[2] * b);
    HPoint::from_raw(x.a() + a * x.b(), b * x.b(), x.dim())
}

pub(crate) fn sub(a: &[f64; 4], b: &[f64; 4]) -> [f64; 4] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

impl From<&HPoint> for HyperboloidPoint {
    fn from(p: &HPoint) -> Self {
        HyperboloidPoint::from_point(p)
    }
}
