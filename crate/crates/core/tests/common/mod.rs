#![allow(dead_code)]

use hyperstretch::hgeom::{dist, exp_at, HPoint};
use hyperstretch::moebius::Isometry;
use hyperstretch::num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn random_real_matrix(rng: &mut ChaCha8Rng) -> Isometry {
    loop {
        let e: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
        if (e[0] * e[3] - e[1] * e[2]).abs() > 0.1 {
            return Isometry::real(e[0], e[1], e[2], e[3]).unwrap();
        }
    }
}

pub fn random_complex_matrix(rng: &mut ChaCha8Rng) -> Isometry {
    loop {
        let e: [Complex64; 4] = std::array::from_fn(|_| Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)));
        if (e[0] * e[3] - e[1] * e[2]).norm() > 0.1 {
            return Isometry::complex(e[0], e[1], e[2], e[3]).unwrap();
        }
    }
}

/// Orientation-preserving isometry of H² with det 1.
pub fn random_psl2r(rng: &mut ChaCha8Rng) -> Isometry {
    loop {
        let g = random_real_matrix(rng);
        if !g.is_orientation_reversing() {
            return g;
        }
    }
}

/// A point at distance at most `radius` from `centre`, uniform in angle.
pub fn random_point_near(rng: &mut ChaCha8Rng, centre: &HPoint, radius: f64) -> HPoint {
    let r = radius * rng.gen::<f64>().sqrt();
    let t = rng.gen_range(0.0..std::f64::consts::TAU);
    exp_at(centre, &[r * t.cos(), r * t.sin(), 0.0])
}

pub fn random_h2(rng: &mut ChaCha8Rng) -> HPoint {
    HPoint::h2(rng.gen_range(-2.0..2.0), rng.gen_range(0.3..3.0)).unwrap()
}

/// Hyperboloid lift `(x₁, x₂, t)` of a point of H².
pub fn lift(p: &HPoint) -> [f64; 3] {
    let (u, v) = (p.u(), p.v());
    let r = u * u + v * v;
    [u / v, (r - 1.0) / (2.0 * v), (r + 1.0) / (2.0 * v)]
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// All triples whose lifted plane has every other lift strictly on the side
/// away from the origin, as sorted index triples.
pub fn brute_force_delaunay(points: &[HPoint]) -> Vec<[usize; 3]> {
    let lifts: Vec<[f64; 3]> = points.iter().map(lift).collect();
    let n = lifts.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let mut normal = cross(sub(lifts[j], lifts[i]), sub(lifts[k], lifts[i]));
                let mut offset = dot(normal, lifts[i]);
                if offset > 0.0 {
                    normal = normal.map(|x| -x);
                    offset = -offset;
                }
                // origin side is normal·x > offset
                let empty = (0..n).filter(|&l| l != i && l != j && l != k).all(|l| dot(normal, lifts[l]) < offset);
                if empty {
                    out.push([i, j, k]);
                }
            }
        }
    }
    out
}

fn lorentz(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] - a[2] * b[2]
}

/// Points of H² at distances `ri`, `rj` from `yi`, `yj` (hyperboloid lifts).
fn circle_intersections(yi: [f64; 3], ri: f64, yj: [f64; 3], rj: f64) -> Vec<[f64; 3]> {
    let (ci, cj) = (ri.cosh(), rj.cosh());
    let g = lorentz(yi, yj);
    // X₀ = a yᵢ + b yⱼ with −a + g b = −cᵢ and g a − b = −cⱼ
    if (1.0 - g * g).abs() < 1e-300 {
        return Vec::new();
    }
    let b = (cj + g * ci) / (1.0 - g * g);
    let a = ci + g * b;
    let x0 = [a * yi[0] + b * yj[0], a * yi[1] + b * yj[1], a * yi[2] + b * yj[2]];
    let ji = [yi[0], yi[1], -yi[2]];
    let jj = [yj[0], yj[1], -yj[2]];
    let n = cross(ji, jj);
    let nn = lorentz(n, n);
    let s2 = (-1.0 - lorentz(x0, x0)) / nn;
    if !(s2 >= 0.0) || nn <= 0.0 {
        return Vec::new();
    }
    let s = s2.sqrt();
    [s, -s]
        .into_iter()
        .map(|s| [x0[0] + s * n[0], x0[1] + s * n[1], x0[2] + s * n[2]])
        .filter(|x| x[2] > 0.0)
        .collect()
}

fn lorentz_dist(a: [f64; 3], b: [f64; 3]) -> f64 {
    (-lorentz(a, b)).max(1.0).acosh()
}

/// Least `C` for which the disks `B(yₖ, C rₖ)` meet, by bisection on `C`
/// with an exact feasibility test: an intersection of disks, when
/// nonempty, contains a centre or a point where two boundary circles
/// cross.
pub fn minimax_oracle(images: &[HPoint], radii: &[f64]) -> f64 {
    let ys: Vec<[f64; 3]> = images.iter().map(lift).collect();
    let feasible = |c: f64| {
        let inside = |x: [f64; 3]| ys.iter().zip(radii).all(|(y, r)| lorentz_dist(x, *y) <= c * r * (1.0 + 1e-12) + 1e-12);
        if ys.iter().any(|y| inside(*y)) {
            return true;
        }
        for i in 0..ys.len() {
            for j in i + 1..ys.len() {
                for x in circle_intersections(ys[i], c * radii[i], ys[j], c * radii[j]) {
                    if inside(x) {
                        return true;
                    }
                }
            }
        }
        false
    };
    let mut lo = 0.0;
    let mut hi = ys
        .iter()
        .map(|x| ys.iter().zip(radii).map(|(y, r)| lorentz_dist(*x, *y) / r).fold(0.0, f64::max))
        .fold(f64::INFINITY, f64::min);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-13 * hi.max(1.0) {
            break;
        }
    }
    hi
}

/// Coarse grid minimum of `max_k d(q, yₖ)/rₖ` over polar coordinates
/// around the first image.
pub fn minimax_grid(images: &[HPoint], radii: &[f64], reach: f64, steps: usize) -> f64 {
    let f = |q: &HPoint| images.iter().zip(radii).map(|(y, r)| dist(q, y).unwrap() / r).fold(0.0, f64::max);
    let mut best = f(&images[0]);
    for i in 1..=steps {
        let r = reach * i as f64 / steps as f64;
        for k in 0..4 * steps {
            let t = std::f64::consts::TAU * k as f64 / (4 * steps) as f64;
            best = best.min(f(&exp_at(&images[0], &[r * t.cos(), r * t.sin(), 0.0])));
        }
    }
    best
}

/// Nelder–Mead in the chart `(u, log v)` of the upper half-plane.
pub fn nelder_mead_h2(f: impl Fn(&HPoint) -> f64, start: &HPoint, scale: f64, tol: f64) -> HPoint {
    let to_point = |x: [f64; 2]| HPoint::h2(x[0], x[1].exp()).unwrap();
    let g = |x: [f64; 2]| f(&to_point(x));
    let x0 = [start.u(), start.v().ln()];
    let mut s = [x0, [x0[0] + scale, x0[1]], [x0[0], x0[1] + scale]];
    let mut v = s.map(g);
    for _ in 0..20_000 {
        let mut idx = [0, 1, 2];
        idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        s = idx.map(|i| s[i]);
        v = idx.map(|i| v[i]);
        let size = ((s[2][0] - s[0][0]).abs()).max((s[2][1] - s[0][1]).abs()).max((s[1][0] - s[0][0]).abs()).max((s[1][1] - s[0][1]).abs());
        if size < tol {
            break;
        }
        let c = [(s[0][0] + s[1][0]) / 2.0, (s[0][1] + s[1][1]) / 2.0];
        let at = |t: f64| [c[0] + t * (s[2][0] - c[0]), c[1] + t * (s[2][1] - c[1])];
        let xr = at(-1.0);
        let fr = g(xr);
        if fr < v[0] {
            let xe = at(-2.0);
            let fe = g(xe);
            if fe < fr {
                s[2] = xe;
                v[2] = fe;
            } else {
                s[2] = xr;
                v[2] = fr;
            }
        } else if fr < v[1] {
            s[2] = xr;
            v[2] = fr;
        } else {
            let xc = if fr < v[2] { at(-0.5) } else { at(0.5) };
            let fc = g(xc);
            if fc < v[2].min(fr) {
                s[2] = xc;
                v[2] = fc;
            } else {
                for i in 1..3 {
                    s[i] = [(s[i][0] + s[0][0]) / 2.0, (s[i][1] + s[0][1]) / 2.0];
                    v[i] = g(s[i]);
                }
            }
        }
    }
    let best = (0..3).min_by(|&a, &b| v[a].total_cmp(&v[b])).unwrap();
    to_point(s[best])
}
