use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hgeom::{dist_unchecked, exp_at, Dim, HPoint};

/// A map that may be undefined at some points (outside its domain).
pub type PartialMap<'a> = &'a (dyn Fn(&HPoint) -> Option<HPoint> + Sync);

pub const DEFAULT_RADII: [f64; 2] = [1e-2, 1e-3];

const H2_DIRECTIONS: usize = 32;
const H3_DIRECTIONS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadiusEstimate {
    pub radius: f64,
    pub value: f64,
    pub pairs: usize,
}

/// Largest sampled distance ratio near a point. Sampling only ever sees
/// some pairs, so this is a lower bound for the local Lipschitz constant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalLipEstimate {
    pub per_radius: Vec<RadiusEstimate>,
    /// The estimate at the smallest radius.
    pub value: f64,
    pub lower_bound: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GlobalLipEstimate {
    pub value: f64,
    pub pairs: usize,
    pub seed: u64,
    pub lower_bound: bool,
}

/// For each radius, compares images of the pairs `exp_p(±r u)` over a fixed
/// set of unit directions `u`. Where one end of a pair is outside the
/// domain of `f`, the pair `(p, exp_p(±r u))` is used instead.
pub fn local_lip_estimate(f: PartialMap<'_>, p: &HPoint, radii: &[f64]) -> Result<LocalLipEstimate> {
    if radii.is_empty() || radii.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
        return Err(Error::InvalidArgument("radii must be positive".into()));
    }
    let fp = f(p).ok_or_else(|| Error::InvalidPoint("map undefined at the sample point".into()))?;
    let dirs = directions(p.dim());
    let mut per_radius = Vec::with_capacity(radii.len());
    for &r in radii {
        let mut value: f64 = 0.0;
        let mut pairs = 0;
        for u in &dirs {
            let x = exp_at(p, &u.map(|c| c * r));
            let y = exp_at(p, &u.map(|c| -c * r));
            let (fx, fy) = (f(&x), f(&y));
            let mut consider = |a: &HPoint, fa: &HPoint, b: &HPoint, fb: &HPoint| {
                let d = dist_unchecked(a, b);
                if d > 0.0 {
                    value = value.max(dist_unchecked(fa, fb) / d);
                    pairs += 1;
                }
            };
            match (fx, fy) {
                (Some(fx), Some(fy)) => consider(&x, &fx, &y, &fy),
                (Some(fx), None) => consider(p, &fp, &x, &fx),
                (None, Some(fy)) => consider(p, &fp, &y, &fy),
                (None, None) => {}
            }
        }
        per_radius.push(RadiusEstimate { radius: r, value, pairs });
    }
    let value = per_radius
        .iter()
        .min_by(|a, b| a.radius.total_cmp(&b.radius))
        .map(|e| e.value)
        .unwrap_or(0.0);
    Ok(LocalLipEstimate { per_radius, value, lower_bound: true })
}

/// Largest ratio over `pairs` pairs of points drawn from `sampler`, seeded
/// with `seed`. Pairs with an end outside the domain are skipped.
pub fn global_lip_estimate(
    f: PartialMap<'_>,
    sampler: &mut dyn FnMut(&mut ChaCha8Rng) -> HPoint,
    pairs: usize,
    seed: u64,
) -> Result<GlobalLipEstimate> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut value: f64 = 0.0;
    let mut used = 0;
    for _ in 0..pairs {
        let (x, y) = (sampler(&mut rng), sampler(&mut rng));
        let d = dist_unchecked(&x, &y);
        if d < 1e-12 {
            continue;
        }
        if let (Some(fx), Some(fy)) = (f(&x), f(&y)) {
            value = value.max(dist_unchecked(&fx, &fy) / d);
            used += 1;
        }
    }
    Ok(GlobalLipEstimate { value, pairs: used, seed, lower_bound: true })
}

/// Unit vectors: half-circle directions in H², a Fibonacci sphere in H³.
fn directions(dim: Dim) -> Vec<[f64; 3]> {
    match dim {
        Dim::Two => (0..H2_DIRECTIONS)
            .map(|k| {
                let t = std::f64::consts::PI * k as f64 / H2_DIRECTIONS as f64;
                [t.cos(), t.sin(), 0.0]
            })
            .collect(),
        Dim::Three => {
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            (0..H3_DIRECTIONS)
                .map(|k| {
                    let z = 1.0 - (2 * k + 1) as f64 / H3_DIRECTIONS as f64;
                    let r = (1.0 - z * z).sqrt();
                    let t = golden * k as f64;
                    [r * t.cos(), z, r * t.sin()]
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hgeom::FermiFrame;
    use crate::moebius::Isometry;
    use crate::stretch::{FermiStretchMap, Profile};
    use num_complex::Complex64;
    use rand::Rng;

    #[test]
    fn isometries_have_constant_one() {
        let g = Isometry::real(3.0, 1.0, 2.0, 1.0).unwrap();
        let f = move |p: &HPoint| Some(g.apply(p));
        let p = HPoint::h2(0.3, 0.7).unwrap();
        let est = local_lip_estimate(&f, &p, &DEFAULT_RADII).unwrap();
        assert!((est.value - 1.0).abs() < 1e-9);
        assert_eq!(est.per_radius.len(), 2);
        assert!(est.lower_bound);
        let mut sampler = |rng: &mut ChaCha8Rng| HPoint::h2(rng.gen_range(-2.0..2.0), rng.gen_range(0.2..3.0)).unwrap();
        let glob = global_lip_estimate(&f, &mut sampler, 200, 7).unwrap();
        assert!((glob.value - 1.0).abs() < 1e-9);
        assert_eq!(glob.pairs, 200);
    }

    #[test]
    fn isometry_of_h3() {
        let one = Complex64::new(1.0, 0.0);
        let g = Isometry::complex(one, Complex64::new(0.5, 2.0), Complex64::new(0.0, 1.0), Complex64::new(2.0, 0.0))
            .unwrap();
        let f = move |p: &HPoint| Some(g.apply(p));
        let p = HPoint::h3(Complex64::new(0.1, -0.2), 1.3).unwrap();
        let est = local_lip_estimate(&f, &p, &DEFAULT_RADII).unwrap();
        assert!((est.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn linear_stretch_on_its_axis() {
        let frame = FermiFrame::canonical();
        let c0 = 0.6;
        let map = FermiStretchMap::new(frame, frame, c0, Profile::Linear).unwrap();
        let f = move |p: &HPoint| map.apply(p).ok();
        let est = local_lip_estimate(&f, &frame.to_point(0.5, 0.0), &DEFAULT_RADII).unwrap();
        assert!((est.value - c0).abs() < 1e-6);
    }

    #[test]
    fn undefined_centre_is_an_error() {
        let f = |_: &HPoint| None;
        assert!(local_lip_estimate(&f, &HPoint::h2(0.0, 1.0).unwrap(), &DEFAULT_RADII).is_err());
        let g = |p: &HPoint| Some(*p);
        assert!(local_lip_estimate(&g, &HPoint::h2(0.0, 1.0).unwrap(), &[]).is_err());
    }
}
