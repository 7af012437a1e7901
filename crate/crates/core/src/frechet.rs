//! Weighted Fréchet barycenters in Hⁿ and barycentric averages of maps.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hgeom::{dist, dist_unchecked, exp_at, log_at, HPoint};

/// Points with nonnegative weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedPointSet {
    points: Vec<HPoint>,
    weights: Vec<f64>,
}

impl WeightedPointSet {
    pub fn new(points: Vec<HPoint>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidWeights("empty point set".into()));
        }
        if points.len() != weights.len() {
            return Err(Error::InvalidWeights(format!("{} points but {} weights", points.len(), weights.len())));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidWeights("weights must be nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidWeights(format!("weights sum to {total}, not 1")));
        }
        let dim = points[0].dim();
        if points.iter().any(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch("weighted points of mixed dimension".into()));
        }
        Ok(WeightedPointSet { points, weights })
    }

    pub fn uniform(points: Vec<HPoint>) -> Result<Self> {
        let w = 1.0 / points.len().max(1) as f64;
        let n = points.len();
        let mut weights = vec![w; n];
        if n > 0 {
            // absorb the rounding so that the sum is exactly representable as 1
            let rest: f64 = weights[1..].iter().sum();
            weights[0] = 1.0 - rest;
        }
        WeightedPointSet::new(points, weights)
    }

    pub fn points(&self) -> &[HPoint] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `Φ(x) = Σ αᵢ d(x, pᵢ)²`.
    pub fn objective(&self, x: &HPoint) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(p, w)| w * dist(x, p).map_or(f64::INFINITY, |d| d * d))
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BarycenterStats {
    pub iterations: usize,
    /// Norm of the Riemannian gradient of Φ at the returned point.
    pub gradient_norm: f64,
}

/// The minimizer of `Σ αᵢ d(·, pᵢ)²`.
pub fn barycenter(w: &WeightedPointSet) -> Result<HPoint> {
    barycenter_with_stats(w).map(|(p, _)| p)
}

/// Damped Riemannian Newton iteration.
///
/// The Hessian of `½ d(·, p)²` has eigenvalue 1 along `log_x p` and
/// `d coth d` orthogonally to it, so Newton steps are available in closed
/// form; an Armijo backtracking line search keeps every step a descent
/// step and a gradient step is used if Newton's fails. Logarithms and
/// exponentials are taken in the chart recentred at the current iterate.
pub fn barycenter_with_stats(w: &WeightedPointSet) -> Result<(HPoint, BarycenterStats)> {
    let n = w.points[0].dim().n();
    let (points, weights) = (&w.points, &w.weights);
    let phi = |x: &HPoint| -> f64 {
        points.iter().zip(weights).map(|(p, a)| a * dist_unchecked(x, p).powi(2)).sum()
    };

    let mut x = *points.iter().min_by(|a, b| phi(a).total_cmp(&phi(b))).expect("nonempty point set");
    let mut iterations = 0;
    for it in 0..200 {
        iterations = it + 1;
        // g = Σ αᵢ log_x pᵢ is minus half the gradient of Φ.
        let mut g = [0.0; 3];
        let mut h = [[0.0; 3]; 3];
        for (p, a) in points.iter().zip(weights) {
            if *a == 0.0 {
                continue;
            }
            let v = log_at(&x, p);
            let d = norm(&v, n);
            let perp = if d < 1e-8 { 1.0 + d * d / 3.0 } else { d / d.tanh() };
            for r in 0..n {
                g[r] += a * v[r];
                for c in 0..n {
                    let delta = if r == c { 1.0 } else { 0.0 };
                    let radial = if d > 0.0 { v[r] * v[c] / (d * d) } else { 0.0 };
                    h[r][c] += a * (perp * delta + (1.0 - perp) * radial);
                }
            }
        }
        if norm(&g, n) == 0.0 {
            break;
        }
        let newton = solve_spd(&h, &g, n);
        // Close to the minimum Φ changes below its rounding error, so the
        // line search is skipped for short Newton steps.
        if let Some(dir) = newton.filter(|d| norm(d, n) < 1e-4) {
            x = exp_at(&x, &dir);
            if norm(&dir, n) < 1e-12 {
                break;
            }
            continue;
        }
        let f0 = phi(&x);
        let mut accepted = None;
        for dir in [newton, Some(g)].into_iter().flatten() {
            let slope = -2.0 * (0..n).map(|k| g[k] * dir[k]).sum::<f64>();
            if slope >= 0.0 {
                continue;
            }
            let mut t = 1.0;
            while t > 1e-12 {
                let y = exp_at(&x, &dir.map(|c| c * t));
                if phi(&y) <= f0 + 1e-4 * t * slope {
                    accepted = Some((y, t * norm(&dir, n)));
                    break;
                }
                t *= 0.5;
            }
            if accepted.is_some() {
                break;
            }
        }
        match accepted {
            Some((y, len)) => {
                x = y;
                if len < 1e-12 {
                    break;
                }
            }
            None => break,
        }
    }
    let gradient_norm = 2.0 * norm(&riemannian_mean_direction(&x, points, weights), n);
    Ok((x, BarycenterStats { iterations, gradient_norm }))
}

/// `Σ αᵢ log_x pᵢ`, in the chart of [`log_at`].
fn riemannian_mean_direction(x: &HPoint, points: &[HPoint], weights: &[f64]) -> [f64; 3] {
    let mut g = [0.0; 3];
    for (p, a) in points.iter().zip(weights) {
        let v = log_at(x, p);
        for k in 0..3 {
            g[k] += a * v[k];
        }
    }
    g
}

fn norm(v: &[f64; 3], n: usize) -> f64 {
    v[..n].iter().map(|c| c * c).sum::<f64>().sqrt()
}

/// Cholesky solve of `H x = b` for a symmetric positive definite `n × n`
/// block, `n ≤ 3`. `None` if `H` is not positive definite.
fn solve_spd(h: &[[f64; 3]; 3], b: &[f64; 3], n: usize) -> Option<[f64; 3]> {
    let mut l = [[0.0; 3]; 3];
    for i in 0..n {
        for j in 0..=i {
            let s = h[i][j] - (0..j).map(|k| l[i][k] * l[j][k]).sum::<f64>();
            if i == j {
                if s <= 0.0 {
                    return None;
                }
                l[i][i] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    let mut y = [0.0; 3];
    for i in 0..n {
        y[i] = (b[i] - (0..i).map(|k| l[i][k] * y[k]).sum::<f64>()) / l[i][i];
    }
    let mut x = [0.0; 3];
    for i in (0..n).rev() {
        x[i] = (y[i] - (i + 1..n).map(|k| l[k][i] * x[k]).sum::<f64>()) / l[i][i];
    }
    Some(x)
}

pub type PointMap<'a> = &'a dyn Fn(&HPoint) -> HPoint;

/// `x ↦ Σ αᵢ fᵢ(x)`, the barycenter of the images with fixed weights.
pub fn average_maps(maps: &[PointMap<'_>], weights: &[f64], x: &HPoint) -> Result<HPoint> {
    if maps.len() != weights.len() {
        return Err(Error::InvalidWeights(format!("{} maps but {} weights", maps.len(), weights.len())));
    }
    let images = maps.iter().map(|f| f(x)).collect();
    barycenter(&WeightedPointSet::new(images, weights.to_vec())?)
}

/// `x ↦ Σ ψᵢ(x) fᵢ(x)` for a partition of unity `(ψᵢ)`.
pub fn blend_with_partition(
    maps: &[PointMap<'_>],
    bumps: &[&dyn Fn(&HPoint) -> f64],
    x: &HPoint,
) -> Result<HPoint> {
    if maps.len() != bumps.len() {
        return Err(Error::InvalidWeights(format!("{} maps but {} bump functions", maps.len(), bumps.len())));
    }
    let psi: Vec<f64> = bumps.iter().map(|b| b(x)).collect();
    let total: f64 = psi.iter().sum();
    if psi.iter().any(|v| !(*v >= 0.0)) || (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidWeights(format!("partition of unity sums to {total} at this point")));
    }
    let weights = psi.iter().map(|v| v / total).collect();
    let images = maps.iter().map(|f| f(x)).collect();
    barycenter(&WeightedPointSet::new(images, weights)?)
}

/// Right-hand side of the Leibniz rule for a blended map at `x`:
/// `Σ (Lip(ψᵢ) R_x + ψᵢ(x) Lip(fᵢ))`, with `R_x` the diameter of `{fᵢ(x)}`.
pub fn blend_lipschitz_bound(
    maps: &[PointMap<'_>],
    bumps: &[&dyn Fn(&HPoint) -> f64],
    lip_maps: &[f64],
    lip_bumps: &[f64],
    x: &HPoint,
) -> Result<f64> {
    let images: Vec<HPoint> = maps.iter().map(|f| f(x)).collect();
    let mut diameter: f64 = 0.0;
    for (i, p) in images.iter().enumerate() {
        for q in &images[i + 1..] {
            diameter = diameter.max(dist(p, q)?);
        }
    }
    Ok(bumps
        .iter()
        .zip(lip_maps.iter().zip(lip_bumps))
        .map(|(b, (lf, lb))| lb * diameter + b(x) * lf)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hgeom::Dim;
    use crate::moebius::Isometry;
    use std::f64::consts::PI;

    fn h2(u: f64, v: f64) -> HPoint {
        HPoint::h2(u, v).unwrap()
    }

    #[test]
    fn equal_points() {
        let p = h2(0.3, 1.7);
        let w = WeightedPointSet::new(vec![p, p, p], vec![0.2, 0.5, 0.3]).unwrap();
        assert!(dist(&barycenter(&w).unwrap(), &p).unwrap() < 1e-12);
    }

    #[test]
    fn midpoint_on_the_imaginary_axis() {
        let w = WeightedPointSet::uniform(vec![h2(0.0, 1.0), h2(0.0, 4.0)]).unwrap();
        let (m, stats) = barycenter_with_stats(&w).unwrap();
        assert!(dist(&m, &h2(0.0, 2.0)).unwrap() < 1e-12);
        assert!(stats.gradient_norm <= 1e-10);
    }

    #[test]
    fn symmetric_triangle_about_basepoint() {
        let o = HPoint::basepoint(Dim::Two);
        let p = Isometry::translation(1.3).apply(&o);
        let pts = (0..3).map(|k| Isometry::rotation(2.0 * PI * k as f64 / 3.0).apply(&p)).collect();
        let w = WeightedPointSet::uniform(pts).unwrap();
        assert!(dist(&barycenter(&w).unwrap(), &o).unwrap() < 1e-11);
    }

    #[test]
    fn spread_out_points_converge() {
        let pts = vec![h2(-50.0, 0.01), h2(40.0, 300.0), h2(0.0, 1e-4)];
        let w = WeightedPointSet::new(pts, vec![0.5, 0.25, 0.25]).unwrap();
        let (_, stats) = barycenter_with_stats(&w).unwrap();
        assert!(stats.gradient_norm <= 1e-10, "{stats:?}");
    }

    #[test]
    fn h3_barycenter() {
        let a = HPoint::h3(num_complex::Complex64::new(1.0, 0.0), 1.0).unwrap();
        let b = HPoint::h3(num_complex::Complex64::new(-1.0, 0.0), 1.0).unwrap();
        let m = barycenter(&WeightedPointSet::uniform(vec![a, b]).unwrap()).unwrap();
        assert!(m.a().norm() < 1e-12 && (m.b() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn invalid_weights() {
        let p = h2(0.0, 1.0);
        assert!(WeightedPointSet::new(vec![p, p], vec![0.5, 0.6]).is_err());
        assert!(WeightedPointSet::new(vec![p, p], vec![1.5, -0.5]).is_err());
        assert!(WeightedPointSet::new(vec![], vec![]).is_err());
    }

    #[test]
    fn averaging_identity_and_translation() {
        let t = Isometry::translation(1.4);
        let id = |p: &HPoint| *p;
        let tr = |p: &HPoint| t.apply(p);
        let x = h2(0.0, 3.0);
        let y = average_maps(&[&id, &tr], &[0.5, 0.5], &x).unwrap();
        assert!(dist(&y, &Isometry::translation(0.7).apply(&x)).unwrap() < 1e-12);
        let single = average_maps(&[&tr], &[1.0], &x).unwrap();
        assert!(dist(&single, &t.apply(&x)).unwrap() < 1e-12);
    }

    #[test]
    fn blending_identical_maps() {
        let g = Isometry::rotation(0.4);
        let f = |p: &HPoint| g.apply(p);
        let b1 = |p: &HPoint| 1.0 / (1.0 + p.v());
        let b2 = |p: &HPoint| p.v() / (1.0 + p.v());
        let x = h2(0.2, 0.9);
        let y = blend_with_partition(&[&f, &f], &[&b1, &b2], &x).unwrap();
        assert!(dist(&y, &g.apply(&x)).unwrap() < 1e-12);
        let bad = |_: &HPoint| 0.7;
        assert!(blend_with_partition(&[&f, &f], &[&bad, &bad], &x).is_err());
    }
}
