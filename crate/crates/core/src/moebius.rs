//! Isometries of H² and H³ as 2×2 matrices up to scalar.
//!
//! A real matrix with positive determinant acts on the upper half-plane by
//! `z ↦ (az + b)/(cz + d)`. A real matrix with negative determinant is an
//! orientation-reversing isometry acting by `z ↦ (a z̄ + b)/(c z̄ + d)`, so
//! composition is still the matrix product. Complex matrices are elements of
//! PSL(2, ℂ) acting on the upper half-space.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hgeom::{BoundaryPoint, Dim, GeodesicLine, HPoint};

/// Half-width of the parabolic trace band, relative to `max(1, ‖g‖_F)`.
pub const CLASSIFY_EPS: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Real,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IsometryClass {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
    Reflection,
    GlideReflection,
}

impl IsometryClass {
    /// Elliptic in the wide sense (the identity counts as elliptic).
    pub fn is_elliptic_or_identity(self) -> bool {
        matches!(self, IsometryClass::Identity | IsometryClass::Elliptic)
    }

    /// Positive translation length.
    pub fn has_axis(self) -> bool {
        matches!(self, IsometryClass::Hyperbolic | IsometryClass::GlideReflection)
    }
}

/// An isometry of H² (`Field::Real`) or H³ (`Field::Complex`), stored as a
/// normalized matrix with `|det| = 1` in canonical sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry {
    m: [Complex64; 4],
    field: Field,
    reversing: bool,
}

impl Isometry {
    pub fn real(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        Self::from_entries([a, b, c, d].map(|x| Complex64::new(x, 0.0)), Field::Real)
    }

    pub fn complex(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        Self::from_entries([a, b, c, d], Field::Complex)
    }

    /// Normalizes `[a, b, c, d]` to `|det| = 1` and canonical sign.
    ///
    /// A real matrix keeps the sign of its determinant (orientation); a
    /// complex matrix is scaled by a square root of its determinant.
    pub fn from_entries(m: [Complex64; 4], field: Field) -> Result<Self> {
        if m.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
        }
        let scale = m.iter().map(|z| z.norm_sqr()).sum::<f64>();
        let det = m[0] * m[3] - m[1] * m[2];
        if det.norm() <= 1e-14 * scale.max(f64::MIN_POSITIVE) || scale == 0.0 {
            return Err(Error::DegenerateMatrix(det.norm()));
        }
        match field {
            Field::Real => {
                if m.iter().any(|z| z.im != 0.0) {
                    return Err(Error::InvalidArgument("real isometry with complex entries".into()));
                }
                let s = det.re.abs().sqrt();
                let reversing = det.re < 0.0;
                Ok(Isometry { m: m.map(|z| z / s), field, reversing }.canonical())
            }
            Field::Complex => {
                let s = det.sqrt();
                Ok(Isometry { m: m.map(|z| z / s), field, reversing: false }.canonical())
            }
        }
    }

    pub fn identity(field: Field) -> Self {
        Isometry { m: [ONE, ZERO, ZERO, ONE], field, reversing: false }
    }

    /// `T_ℓ = diag(e^{ℓ/2}, e^{-ℓ/2})`, translation of length ℓ along (0, ∞).
    pub fn translation(length: f64) -> Self {
        let h = 0.5 * length;
        Isometry {
            m: [Complex64::new(h.exp(), 0.0), ZERO, ZERO, Complex64::new((-h).exp(), 0.0)],
            field: Field::Real,
            reversing: false,
        }
        .canonical()
    }

    /// `T_λ` for a complex length `λ = ℓ + iθ`: translation by ℓ along (0, ∞)
    /// composed with a rotation of angle θ about that line.
    pub fn complex_translation(length: Complex64) -> Self {
        let h = 0.5 * length;
        Isometry { m: [h.exp(), ZERO, ZERO, (-h).exp()], field: Field::Complex, reversing: false }
            .canonical()
    }

    /// `R_θ`, rotation of angle θ about `i` (about the line (−i, i) in H³).
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = (0.5 * theta).sin_cos();
        Isometry {
            m: [Complex64::new(c, 0.0), Complex64::new(s, 0.0), Complex64::new(-s, 0.0), Complex64::new(c, 0.0)],
            field: Field::Real,
            reversing: false,
        }
        .canonical()
    }

    pub fn entries(&self) -> [Complex64; 4] {
        self.m
    }

    /// Real entries `[a, b, c, d]`; only meaningful for `Field::Real`.
    pub fn real_entries(&self) -> [f64; 4] {
        self.m.map(|z| z.re)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> Dim {
        match self.field {
            Field::Real => Dim::Two,
            Field::Complex => Dim::Three,
        }
    }

    pub fn is_orientation_reversing(&self) -> bool {
        self.reversing
    }

    /// Sign of the determinant of the normalized matrix.
    pub fn det_sign(&self) -> i8 {
        if self.reversing {
            -1
        } else {
            1
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0] + self.m[3]
    }

    /// `|a|² + |b|² + |c|² + |d|²`.
    pub fn frobenius_sq(&self) -> f64 {
        self.m.iter().map(|z| z.norm_sqr()).sum()
    }

    fn eps(&self) -> f64 {
        CLASSIFY_EPS * self.frobenius_sq().sqrt().max(1.0)
    }

    fn canonical(mut self) -> Self {
        let tol = 1e-9 * self.frobenius_sq().sqrt().max(1.0);
        if let Some(z) = self.m.iter().find(|z| z.norm() > tol) {
            let negative = if z.re.abs() > tol { z.re < 0.0 } else { z.im < 0.0 };
            if negative {
                self.m = self.m.map(|z| -z);
            }
        }
        self
    }

    /// Composition `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Isometry) -> Result<Isometry> {
        if (self.reversing && other.field == Field::Complex) || (other.reversing && self.field == Field::Complex) {
            return Err(Error::Unsupported(
                "orientation-reversing real isometries do not compose with complex ones".into(),
            ));
        }
        Ok(self.mul(other))
    }

    /// Matrix product without the field compatibility check.
    pub(crate) fn mul(&self, other: &Isometry) -> Isometry {
        let [a, b, c, d] = self.m;
        let [e, f, g, h] = other.m;
        let field = if self.field == Field::Complex || other.field == Field::Complex {
            Field::Complex
        } else {
            Field::Real
        };
        Isometry {
            m: [a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h],
            field,
            reversing: self.reversing != other.reversing,
        }
        .canonical()
    }

    pub fn inverse(&self) -> Isometry {
        let [a, b, c, d] = self.m;
        Isometry { m: [d, -b, -c, a], field: self.field, reversing: self.reversing }.canonical()
    }

    /// `self^k` by repeated squaring; negative `k` uses the inverse.
    pub fn pow(&self, k: i64) -> Isometry {
        let mut base = if k < 0 { self.inverse() } else { *self };
        let mut e = k.unsigned_abs();
        let mut acc = Isometry::identity(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// `h ∘ self ∘ h⁻¹`.
    pub fn conjugate_by(&self, h: &Isometry) -> Result<Isometry> {
        h.compose(self)?.compose(&h.inverse())
    }

    /// Projective equality: `self = ±other` entrywise within `tol · max(1, ‖self‖)`.
    pub fn approx_eq(&self, other: &Isometry, tol: f64) -> bool {
        if self.reversing != other.reversing {
            return false;
        }
        let t = tol * self.frobenius_sq().sqrt().max(1.0);
        let close = |s: f64| self.m.iter().zip(other.m.iter()).all(|(x, y)| (x - s * y).norm() <= t);
        close(1.0) || close(-1.0)
    }

    pub fn is_identity(&self) -> bool {
        if self.reversing {
            return false;
        }
        let eps = self.eps();
        let [a, b, c, d] = self.m;
        let s = if a.re >= 0.0 { 1.0 } else { -1.0 };
        (a * s - ONE).norm() <= eps && (d * s - ONE).norm() <= eps && b.norm() <= eps && c.norm() <= eps
    }

    pub fn classify(&self) -> IsometryClass {
        if self.reversing {
            return if self.mul(self).is_identity() {
                IsometryClass::Reflection
            } else {
                IsometryClass::GlideReflection
            };
        }
        if self.is_identity() {
            return IsometryClass::Identity;
        }
        let eps = self.eps();
        let tr = self.trace();
        match self.field {
            Field::Real => {
                let t = tr.re.abs();
                if (t - 2.0).abs() <= eps {
                    IsometryClass::Parabolic
                } else if t < 2.0 {
                    IsometryClass::Elliptic
                } else {
                    IsometryClass::Hyperbolic
                }
            }
            Field::Complex => {
                if (tr - 2.0).norm() <= eps || (tr + 2.0).norm() <= eps {
                    IsometryClass::Parabolic
                } else if (tr * 0.5).acosh().re.abs() > eps {
                    IsometryClass::Hyperbolic
                } else {
                    IsometryClass::Elliptic
                }
            }
        }
    }

    /// Translation length λ(g) = inf d(x, g·x).
    ///
    /// For a unit-determinant hyperbolic element, `g` is conjugate to `T_ℓ`
    /// whose trace is `2 cosh(ℓ/2)`; the trace is a conjugation invariant, so
    /// `λ = 2 arccosh(|tr|/2)`. In the complex case `tr = 2 cosh(λ/2)` with
    /// complex λ and the translation part is `2 |Re arccosh(tr/2)|`.
    /// Glide reflections use `λ(g²)/2`.
    pub fn translation_length(&self) -> f64 {
        match self.classify() {
            IsometryClass::Hyperbolic => match self.field {
                Field::Real => 2.0 * (0.5 * self.trace().re.abs()).acosh(),
                Field::Complex => 2.0 * (self.trace() * 0.5).acosh().re.abs(),
            },
            IsometryClass::GlideReflection => 0.5 * self.mul(self).translation_length(),
            _ => 0.0,
        }
    }

    /// Cartan projection μ(g) = d(p₀, g·p₀), from `2 cosh μ = ‖g‖²`.
    ///
    /// Evaluated as `2 arcsinh(√(‖g‖² − 2)/2)` with `‖g‖² − 2` expanded as a
    /// sum of squares, which keeps precision for small μ.
    pub fn cartan_mu(&self) -> f64 {
        let [a, b, c, d] = self.m;
        let excess = if self.reversing {
            (a + d).norm_sqr() + (b - c).norm_sqr()
        } else {
            (a - d.conj()).norm_sqr() + (b + c.conj()).norm_sqr()
        };
        2.0 * (0.5 * excess.max(0.0).sqrt()).asinh()
    }

    /// Möbius action on the upper half-plane / half-space.
    pub fn apply(&self, p: &HPoint) -> HPoint {
        let (m, z) = if self.reversing {
            (self.m.map(|x| x * I), p.a().conj())
        } else {
            (self.m, p.a())
        };
        let [al, be, ga, de] = m;
        let t = p.b();
        let w = ga * z + de;
        let den = w.norm_sqr() + ga.norm_sqr() * t * t;
        let a = ((al * z + be) * w.conj() + al * ga.conj() * (t * t)) / den;
        HPoint::from_raw(a, t / den, p.dim().max(self.dim()))
    }

    pub fn apply_boundary(&self, xi: &BoundaryPoint) -> BoundaryPoint {
        let [a, b, c, d] = self.m;
        let scale = self.frobenius_sq().sqrt();
        match xi {
            BoundaryPoint::Infinity => {
                if c.norm() <= 1e-15 * scale {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite(a / c)
                }
            }
            BoundaryPoint::Finite(z) => {
                let z = if self.reversing { z.conj() } else { *z };
                let den = c * z + d;
                if den.norm() <= 1e-15 * scale * z.norm().max(1.0) {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite((a * z + b) / den)
                }
            }
        }
    }

    pub fn apply_line(&self, line: &GeodesicLine) -> Result<GeodesicLine> {
        GeodesicLine::new(self.apply_boundary(&line.start()), self.apply_boundary(&line.end()))
    }

    /// Fixed points on the ideal boundary: solutions of `cz² + (d − a)z − b = 0`
    /// (∞ when `c = 0`). Returns an empty list for the identity and for
    /// elliptic elements of H².
    pub fn fixed_boundary_points(&self) -> Vec<BoundaryPoint> {
        let class = self.classify();
        if class == IsometryClass::Identity {
            return Vec::new();
        }
        let [a, b, c, d] = self.m;
        let eps = self.eps();
        let mut out = Vec::new();
        if c.norm() <= eps * 1e-3 {
            out.push(BoundaryPoint::Infinity);
            let dm = d - a;
            if dm.norm() > eps {
                out.push(BoundaryPoint::Finite(b / dm));
            }
            return out;
        }
        let bq = d - a;
        if class == IsometryClass::Parabolic {
            out.push(BoundaryPoint::Finite((a - d) / (2.0 * c)));
            return out;
        }
        let disc = bq * bq + 4.0 * c * b;
        let sq = disc.sqrt();
        let roots = if self.field == Field::Real {
            if disc.re < 0.0 {
                return out;
            }
            let sq = disc.re.sqrt();
            let sgn = if bq.re >= 0.0 { 1.0 } else { -1.0 };
            let q = -0.5 * (bq.re + sgn * sq);
            [Complex64::new(q / c.re, 0.0), Complex64::new(-b.re / q, 0.0)]
        } else {
            let s = if (bq.conj() * sq).re >= 0.0 { sq } else { -sq };
            let q = -0.5 * (bq + s);
            if q.norm() == 0.0 {
                [(a - d) / (2.0 * c), (a - d) / (2.0 * c)]
            } else {
                [q / c, -b / q]
            }
        };
        out.push(BoundaryPoint::Finite(roots[0]));
        if !BoundaryPoint::Finite(roots[0]).approx_eq(&BoundaryPoint::Finite(roots[1]), 1e-12) {
            out.push(BoundaryPoint::Finite(roots[1]));
        }
        out
    }

    /// Translation axis, oriented from the repelling to the attracting
    /// fixed point. Defined for hyperbolic elements and glide reflections.
    pub fn axis(&self) -> Result<GeodesicLine> {
        let class = self.classify();
        if !class.has_axis() {
            return Err(Error::NotHyperbolic(class));
        }
        let g = if self.reversing { self.mul(self) } else { *self };
        let fixed = g.fixed_boundary_points();
        if fixed.len() != 2 {
            return Err(Error::NotHyperbolic(class));
        }
        let [a, _, c, d] = g.m;
        let attracting = |xi: &BoundaryPoint| match xi {
            BoundaryPoint::Infinity => a.norm() > d.norm(),
            BoundaryPoint::Finite(z) => (c * z + d).norm() > 1.0,
        };
        if attracting(&fixed[0]) {
            GeodesicLine::new(fixed[1], fixed[0])
        } else {
            GeodesicLine::new(fixed[0], fixed[1])
        }
    }

    /// Orientation-preserving isometry taking `i` (resp. `(0, 1)`) to `p`.
    pub fn to_point(p: &HPoint) -> Isometry {
        let s = p.b().sqrt();
        let field = if p.dim() == Dim::Two { Field::Real } else { Field::Complex };
        Isometry { m: [Complex64::new(s, 0.0), p.a() / s, ZERO, Complex64::new(1.0 / s, 0.0)], field, reversing: false }
            .canonical()
    }

    /// Orientation-preserving isometry taking the oriented line (0, ∞) onto
    /// `line`, endpoint to endpoint.
    pub fn mapping_axis_to(line: &GeodesicLine) -> Result<Isometry> {
        let field = if line.is_real() { Field::Real } else { Field::Complex };
        let c = |z: Complex64| if field == Field::Real { Complex64::new(z.re, 0.0) } else { z };
        let m = match (line.start(), line.end()) {
            (BoundaryPoint::Finite(xi), BoundaryPoint::Finite(eta)) => {
                let (xi, eta) = (c(xi), c(eta));
                if field == Field::Real && eta.re < xi.re {
                    [eta, -xi, ONE, -ONE]
                } else {
                    [eta, xi, ONE, ONE]
                }
            }
            (BoundaryPoint::Infinity, BoundaryPoint::Finite(eta)) => [c(eta), -ONE, ONE, ZERO],
            (BoundaryPoint::Finite(xi), BoundaryPoint::Infinity) => [ONE, c(xi), ZERO, ONE],
            (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => {
                return Err(Error::InvalidLine("endpoints coincide".into()))
            }
        };
        Isometry::from_entries(m, field)
    }

    /// Rotation of angle θ about an H² point.
    pub fn rotation_about(p: &HPoint, theta: f64) -> Result<Isometry> {
        if p.dim() != Dim::Two {
            return Err(Error::Unsupported("rotation about a point is an H² operation".into()));
        }
        let g = Isometry::to_point(p);
        Ok(g.mul(&Isometry::rotation(theta)).mul(&g.inverse()))
    }

    /// Reflection in a geodesic line of H².
    pub fn reflection_in(line: &GeodesicLine) -> Result<Isometry> {
        if !line.is_real() {
            return Err(Error::Unsupported("reflection in a line is an H² operation".into()));
        }
        let g = Isometry::mapping_axis_to(line)?;
        let r = Isometry::real(-1.0, 0.0, 0.0, 1.0)?;
        Ok(g.mul(&r).mul(&g.inverse()))
    }

    /// Translation of length ℓ along an oriented line, towards its end point.
    pub fn translation_along(line: &GeodesicLine, length: f64) -> Result<Isometry> {
        let g = Isometry::mapping_axis_to(line)?;
        Ok(g.mul(&Isometry::translation(length)).mul(&g.inverse()))
    }

    /// The translation along the common perpendicular of two disjoint lines
    /// of H² that maps `from` onto `to`.
    pub fn shortest_translation_between(from: &GeodesicLine, to: &GeodesicLine) -> Result<Isometry> {
        if !from.is_real() || !to.is_real() {
            return Err(Error::Unsupported("common perpendicular is implemented in H²".into()));
        }
        let g = Isometry::mapping_axis_to(from)?;
        let moved = g.inverse().apply_line(to)?;
        let (p, q) = match (moved.start().real_value(), moved.end().real_value()) {
            (Some(p), Some(q)) => (p, q),
            _ => return Err(Error::LinesNotDisjoint),
        };
        let scale = p.abs().max(q.abs());
        if p.abs() <= 1e-14 * scale || q.abs() <= 1e-14 * scale || p * q < 0.0 {
            return Err(Error::LinesNotDisjoint);
        }
        let dist = crate::hgeom::line_distance(&GeodesicLine::vertical_axis(), &moved)?;
        let r = (p * q).sqrt();
        let perp = if p > 0.0 {
            GeodesicLine::real(Some(-r), Some(r))?
        } else {
            GeodesicLine::real(Some(r), Some(-r))?
        };
        let t = Isometry::translation_along(&perp, dist.distance)?;
        Ok(g.mul(&t).mul(&g.inverse()))
    }

    /// Key for hashing on a grid of spacing `grid`, after fixing the sign
    /// ambiguity. Entries are `(re, im)` pairs in order a, b, c, d.
    pub(crate) fn grid_key(&self, grid: f64, negate: bool) -> [i64; 8] {
        let s = if negate { -1.0 } else { 1.0 };
        let mut key = [0i64; 8];
        for (i, z) in self.m.iter().enumerate() {
            key[2 * i] = (s * z.re / grid).round() as i64;
            key[2 * i + 1] = (s * z.im / grid).round() as i64;
        }
        key
    }
}

impl fmt::Display for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.m;
        match self.field {
            Field::Real => write!(f, "[[{}, {}], [{}, {}]]", a.re, b.re, c.re, d.re),
            Field::Complex => write!(f, "[[{a}, {b}], [{c}, {d}]]"),
        }
    }
}

/// Exact integer 2×2 matrices, for trace identities of integral generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    pub a: i128,
    pub b: i128,
    pub c: i128,
    pub d: i128,
}

impl IntMatrix {
    pub const IDENTITY: IntMatrix = IntMatrix { a: 1, b: 0, c: 0, d: 1 };

    pub fn new(a: i128, b: i128, c: i128, d: i128) -> Self {
        IntMatrix { a, b, c, d }
    }

    pub fn checked_mul(&self, o: &IntMatrix) -> Result<IntMatrix> {
        let dot = |x: i128, y: i128, z: i128, w: i128| -> Result<i128> {
            x.checked_mul(y)
                .and_then(|p| z.checked_mul(w).and_then(|q| p.checked_add(q)))
                .ok_or(Error::Overflow)
        };
        Ok(IntMatrix {
            a: dot(self.a, o.a, self.b, o.c)?,
            b: dot(self.a, o.b, self.b, o.d)?,
            c: dot(self.c, o.a, self.d, o.c)?,
            d: dot(self.c, o.b, self.d, o.d)?,
        })
    }

    pub fn checked_pow(&self, mut k: u64) -> Result<IntMatrix> {
        let mut base = *self;
        let mut acc = IntMatrix::IDENTITY;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.checked_mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn trace(&self) -> i128 {
        self.a + self.d
    }

    pub fn det(&self) -> i128 {
        self.a * self.d - self.b * self.c
    }

    pub fn to_isometry(&self) -> Result<Isometry> {
        Isometry::real(self.a as f64, self.b as f64, self.c as f64, self.d as f64)
    }
}
