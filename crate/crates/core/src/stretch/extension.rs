use serde::Serialize;

use crate::error::{Error, Result};
use crate::hgeom::{dist_unchecked, exp_at, log_at, Dim, HPoint, HyperboloidPoint};
use crate::moebius::Isometry;

/// A map defined on finitely many points, with a Lipschitz constant at least
/// its largest pairwise distance ratio.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMapData {
    pairs: Vec<(HPoint, HPoint)>,
    lipschitz: f64,
}

impl FiniteMapData {
    /// Uses the exact Lipschitz constant of the finite map.
    pub fn new(pairs: Vec<(HPoint, HPoint)>) -> Result<Self> {
        let lip = pairwise_lipschitz(&pairs)?;
        Ok(FiniteMapData { pairs, lipschitz: lip })
    }

    pub fn with_declared(pairs: Vec<(HPoint, HPoint)>, lipschitz: f64) -> Result<Self> {
        let lip = pairwise_lipschitz(&pairs)?;
        if !(lipschitz >= lip - 1e-9) {
            return Err(Error::InvalidArgument(format!(
                "declared Lipschitz constant {lipschitz} is below the pairwise ratio {lip}"
            )));
        }
        Ok(FiniteMapData { pairs, lipschitz })
    }

    pub fn pairs(&self) -> &[(HPoint, HPoint)] {
        &self.pairs
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }
}

fn pairwise_lipschitz(pairs: &[(HPoint, HPoint)]) -> Result<f64> {
    let Some(first) = pairs.first() else {
        return Err(Error::InvalidArgument("empty finite map".into()));
    };
    let dim = first.0.dim();
    if pairs.iter().any(|(k, y)| k.dim() != dim || y.dim() != dim) {
        return Err(Error::DimensionMismatch("finite map mixes H² and H³ points".into()));
    }
    let mut lip: f64 = 0.0;
    for (i, (k1, y1)) in pairs.iter().enumerate() {
        for (k2, y2) in &pairs[i + 1..] {
            let d = dist_unchecked(k1, k2);
            if d < 1e-12 {
                return Err(Error::InvalidArgument("repeated point in the domain".into()));
            }
            lip = lip.max(dist_unchecked(y1, y2) / d);
        }
    }
    Ok(lip)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extension {
    pub point: HPoint,
    /// `max_k d(q, φ(k)) / d(p, k)` at the returned point.
    pub constant: f64,
    pub iterations: usize,
}

const SUBGRADIENT_ITERS: usize = 500;
const ELLIPSOID_MAX_ITERS: usize = 5000;

/// The image `q` of a new point `p` minimizing `max_k d(q, φ(k)) / d(p, k)`.
///
/// A subgradient phase finds a starting point; the minimum is then located
/// by the ellipsoid method in Klein coordinates centred there, where the
/// objective is convex because geodesics are straight.
pub fn one_point_extension(data: &FiniteMapData, p: &HPoint) -> Result<Extension> {
    let dim = data.pairs[0].0.dim();
    if p.dim() != dim {
        return Err(Error::DimensionMismatch("extension point and finite map differ in dimension".into()));
    }
    let radii: Vec<f64> = data.pairs.iter().map(|(k, _)| dist_unchecked(p, k)).collect();
    if radii.iter().any(|&r| r < 1e-12) {
        return Err(Error::InvalidPoint("the new point coincides with a point of the domain".into()));
    }
    let images: Vec<HPoint> = data.pairs.iter().map(|(_, y)| *y).collect();
    if images.len() == 1 {
        return Ok(Extension { point: images[0], constant: 0.0, iterations: 0 });
    }
    let objective = Objective { images: &images, radii: &radii };

    let (mut best, mut best_val) = images
        .iter()
        .map(|y| (*y, objective.value(y)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty");
    let mut q = best;
    let scale = best_val * radii.iter().cloned().fold(f64::INFINITY, f64::min);
    for k in 0..SUBGRADIENT_ITERS {
        let (val, active) = objective.eval(&q);
        if val < best_val {
            best_val = val;
            best = q;
        }
        let w = log_at(&q, &images[active]);
        let n = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
        if n == 0.0 {
            break;
        }
        let step = (0.5 * scale / ((k + 1) as f64).sqrt()).min(n);
        q = exp_at(&q, &w.map(|c| c * step / n));
    }

    let (q, val, iters) = ellipsoid(&objective, &best, best_val, dim);
    if val < best_val {
        best = q;
        best_val = val;
    }
    Ok(Extension { point: best, constant: best_val, iterations: SUBGRADIENT_ITERS + iters })
}

struct Objective<'a> {
    images: &'a [HPoint],
    radii: &'a [f64],
}

impl Objective<'_> {
    fn eval(&self, q: &HPoint) -> (f64, usize) {
        self.images
            .iter()
            .zip(self.radii)
            .map(|(y, r)| dist_unchecked(q, y) / r)
            .enumerate()
            .fold((f64::NEG_INFINITY, 0), |acc, (i, v)| if v > acc.0 { (v, i) } else { acc })
    }

    fn value(&self, q: &HPoint) -> f64 {
        self.eval(q).0
    }
}

/// Central-cut ellipsoid method in Klein coordinates around `start`.
fn ellipsoid(obj: &Objective<'_>, start: &HPoint, start_val: f64, dim: Dim) -> (HPoint, f64, usize) {
    let n = dim.n();
    let chart = Isometry::to_point(start);
    let back = chart.inverse();
    // images in hyperboloid coordinates of the chart: spatial part and time
    let ys: Vec<([f64; 3], f64)> = obj
        .images
        .iter()
        .map(|y| {
            let h = HyperboloidPoint::from_point(&back.apply(y));
            let x = h.raw();
            ([x[0], x[1], x[2]], x[3])
        })
        .collect();
    let to_point = |c: &[f64; 3]| {
        let w = 1.0 / (1.0 - dot(c, c, n)).sqrt();
        chart.apply(&HyperboloidPoint::from_spatial(c.map(|x| x * w), dim).to_point())
    };
    // every minimizer is within this distance of the start
    let reach = obj
        .images
        .iter()
        .zip(obj.radii)
        .map(|(y, r)| dist_unchecked(start, y) + start_val * r)
        .fold(f64::INFINITY, f64::min);
    let r0 = reach.tanh().max(1e-300);
    let mut centre = [0.0; 3];
    let mut shape = [[0.0; 3]; 3];
    for (i, row) in shape.iter_mut().enumerate().take(n) {
        row[i] = r0 * r0;
    }
    let (mut best, mut best_val) = (*start, start_val);
    let nf = n as f64;
    let mut iters = 0;
    while iters < ELLIPSOID_MAX_ITERS {
        iters += 1;
        let norm2 = dot(&centre, &centre, n);
        let g = if norm2 >= 1.0 {
            centre
        } else {
            let q = to_point(&centre);
            let (val, active) = obj.eval(&q);
            if val < best_val {
                best_val = val;
                best = q;
            }
            if val == 0.0 {
                break;
            }
            // ∇u for u(x) = (t − x·s)/√(1 − |x|²), up to a positive factor
            let (s, t) = ys[active];
            let wgt = 1.0 / (1.0 - norm2).sqrt();
            let u = (t - dot(&centre, &s, n)) * wgt;
            [0, 1, 2].map(|i| u * wgt * centre[i] - s[i])
        };
        let pg = mat_vec(&shape, &g, n);
        let gpg = dot(&g, &pg, n);
        if !(gpg > 0.0) {
            break;
        }
        let b = pg.map(|x| x / gpg.sqrt());
        for i in 0..n {
            centre[i] -= b[i] / (nf + 1.0);
        }
        let f = nf * nf / (nf * nf - 1.0);
        for i in 0..n {
            for j in i..n {
                let v = f * (shape[i][j] - 2.0 / (nf + 1.0) * (b[i] * b[j]));
                shape[i][j] = v;
                shape[j][i] = v;
            }
        }
        let trace: f64 = (0..n).map(|i| shape[i][i]).sum();
        if trace.sqrt() < 1e-14 {
            break;
        }
    }
    (best, best_val, iters)
}

fn dot(a: &[f64; 3], b: &[f64; 3], n: usize) -> f64 {
    (0..n).map(|i| a[i] * b[i]).sum()
}

fn mat_vec(m: &[[f64; 3]; 3], v: &[f64; 3], n: usize) -> [f64; 3] {
    let mut out = [0.0; 3];
    for i in 0..n {
        out[i] = (0..n).map(|j| m[i][j] * v[j]).sum();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hgeom::FermiFrame;
    use num_complex::Complex64;

    fn polar(center: &HPoint, r: f64, theta: f64) -> HPoint {
        exp_at(center, &[r * theta.cos(), r * theta.sin(), 0.0])
    }

    #[test]
    fn single_point_maps_to_its_image() {
        let k = HPoint::h2(0.0, 1.0).unwrap();
        let y = HPoint::h2(3.0, 0.5).unwrap();
        let data = FiniteMapData::new(vec![(k, y)]).unwrap();
        let e = one_point_extension(&data, &HPoint::h2(1.0, 2.0).unwrap()).unwrap();
        assert_eq!(e.constant, 0.0);
        assert_eq!(e.point, y);
    }

    #[test]
    fn midpoint_of_an_isometric_pair() {
        let f = FermiFrame::canonical();
        let g = Isometry::real(2.0, 1.0, 1.0, 1.0).unwrap();
        let (k1, k2) = (f.to_point(-1.0, 0.0), f.to_point(1.0, 0.0));
        let data = FiniteMapData::new(vec![(k1, g.apply(&k1)), (k2, g.apply(&k2))]).unwrap();
        assert!((data.lipschitz() - 1.0).abs() < 1e-12);
        let e = one_point_extension(&data, &f.to_point(0.0, 0.0)).unwrap();
        assert!((e.constant - 1.0).abs() < 1e-9);
        assert!(dist_unchecked(&e.point, &g.apply(&f.to_point(0.0, 0.0))) < 1e-6);
    }

    #[test]
    fn three_point_contraction_at_the_centre() {
        let o = HPoint::h2(0.0, 1.0).unwrap();
        let (t, big_t) = (2.0, 1.0);
        let thirds = [0.0, 2.0, 4.0].map(|k| k * std::f64::consts::PI / 3.0);
        let pairs = thirds.iter().map(|&a| (polar(&o, t, a), polar(&o, big_t, a))).collect();
        let e = one_point_extension(&FiniteMapData::new(pairs).unwrap(), &o).unwrap();
        assert!((e.constant - big_t / t).abs() < 1e-9);
        assert!(dist_unchecked(&e.point, &o) < 1e-6);
    }

    #[test]
    fn works_in_three_dimensions() {
        let o = HPoint::h3(Complex64::new(0.0, 0.0), 1.0).unwrap();
        let dirs: [[f64; 3]; 4] = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [-1.0, -1.0, -1.0]];
        let pairs: Vec<_> = dirs
            .iter()
            .map(|d| {
                let n = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
                let u = d.map(|c| c / n);
                (exp_at(&o, &u.map(|c| 1.5 * c)), exp_at(&o, &u.map(|c| 0.5 * c)))
            })
            .collect();
        let e = one_point_extension(&FiniteMapData::new(pairs).unwrap(), &o).unwrap();
        assert!(e.constant <= 0.5 / 1.5 + 1e-9);
    }

    #[test]
    fn input_validation() {
        let k = HPoint::h2(0.0, 1.0).unwrap();
        let data = FiniteMapData::new(vec![(k, k)]).unwrap();
        assert!(matches!(one_point_extension(&data, &k), Err(Error::InvalidPoint(_))));
        assert!(FiniteMapData::new(vec![(k, k), (k, k)]).is_err());
        let k2 = HPoint::h2(1.0, 1.0).unwrap();
        let far = HPoint::h2(50.0, 1.0).unwrap();
        assert!(FiniteMapData::with_declared(vec![(k, k), (k2, far)], 1.0).is_err());
    }
}
