//! Delaunay triangulations of finite point sets in H².
//!
//! Points are lifted to the hyperboloid in ℝ³ and the Euclidean convex hull
//! of the lifts is built incrementally. The facets whose supporting plane
//! separates the points from the origin are the Delaunay triangles; each
//! such plane cuts the hyperboloid in a circle, a horocycle or a hypercycle
//! bounding a region empty of the points.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hgeom::{dist_unchecked, Dim, HPoint, HyperboloidPoint};

/// Relative size of an orientation determinant below which four lifted
/// points are treated as coplanar.
pub const DEGENERACY_TOL: f64 = 1e-10;

/// At least three pairwise distinct points of H².
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet2 {
    points: Vec<HPoint>,
}

impl PointSet2 {
    pub fn new(points: Vec<HPoint>) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::InvalidArgument(format!("{} points; at least 3 are needed", points.len())));
        }
        if points.iter().any(|p| p.dim() != Dim::Two) {
            return Err(Error::DimensionMismatch("Delaunay triangulation is implemented in H² only".into()));
        }
        for (i, p) in points.iter().enumerate() {
            for (j, q) in points.iter().enumerate().skip(i + 1) {
                if dist_unchecked(p, q) < 1e-8 {
                    return Err(Error::InvalidArgument(format!("points {i} and {j} are closer than 1e-8")));
                }
            }
        }
        Ok(PointSet2 { points })
    }

    pub fn points(&self) -> &[HPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn lifted(&self) -> Vec<[f64; 3]> {
        self.points.iter().map(lift).collect()
    }
}

fn lift(p: &HPoint) -> [f64; 3] {
    let x = HyperboloidPoint::from_point(p);
    let r = x.raw();
    [r[0], r[1], r[3]]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Triangulation {
    pub vertices: Vec<HPoint>,
    /// Counterclockwise index triples.
    pub triangles: Vec<[usize; 3]>,
    /// Edges belonging to a single triangle, as sorted index pairs.
    pub boundary: Vec<[usize; 2]>,
}

impl Triangulation {
    pub fn edge_count(&self) -> usize {
        let mut edges: Vec<[usize; 2]> = self
            .triangles
            .iter()
            .flat_map(|t| [0, 1, 2].map(|k| sorted_pair(t[k], t[(k + 1) % 3])))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        edges.len()
    }

    /// `V − E + F`, which is 1 for a triangulated disk.
    pub fn euler_characteristic(&self) -> i64 {
        let mut used: Vec<usize> = self.triangles.iter().flatten().copied().collect();
        used.sort_unstable();
        used.dedup();
        used.len() as i64 - self.edge_count() as i64 + self.triangles.len() as i64
    }

    /// Triangles as sets, each rotated to start at its least index, sorted.
    pub fn canonical_triangles(&self) -> Vec<[usize; 3]> {
        let mut out: Vec<[usize; 3]> = self.triangles.iter().map(|t| canonical_triple(*t)).collect();
        out.sort_unstable();
        out
    }

    /// Plain-text mesh in OFF format, vertices given by their hyperboloid
    /// coordinates `(x₁, x₂, t)`.
    pub fn to_off(&self) -> String {
        let mut s = String::from("OFF\n");
        let _ = writeln!(s, "{} {} {}", self.vertices.len(), self.triangles.len(), self.edge_count());
        for p in &self.vertices {
            let [x, y, t] = lift(p);
            let _ = writeln!(s, "{x} {y} {t}");
        }
        for [a, b, c] in &self.triangles {
            let _ = writeln!(s, "3 {a} {b} {c}");
        }
        s
    }
}

fn sorted_pair(a: usize, b: usize) -> [usize; 2] {
    if a < b {
        [a, b]
    } else {
        [b, a]
    }
}

fn canonical_triple(t: [usize; 3]) -> [usize; 3] {
    let k = (0..3).min_by_key(|&k| t[k]).unwrap();
    [t[k], t[(k + 1) % 3], t[(k + 2) % 3]]
}

/// Shape of the curve where a supporting plane meets the hyperboloid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EmptyRegion {
    Ball,
    Horoball,
    Hyperball,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TriangleCertificate {
    pub triangle: [usize; 3],
    pub region: EmptyRegion,
    /// `⟨N, N⟩ / |N|²` for the Lorentz normal `N` of the lifted plane.
    pub normalized_lorentz_norm: f64,
    /// Smallest distance of another lifted point from the plane, measured
    /// away from the origin; negative when some point lies inside the
    /// region.
    pub margin: f64,
    pub empty: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateReport {
    pub certificates: Vec<TriangleCertificate>,
    pub all_empty: bool,
    pub tolerance: f64,
}

pub const MARGIN_TOL: f64 = 1e-10;

/// Checks each triangle's circumscribed region against every point of `x`.
pub fn empty_ball_certificate(t: &Triangulation, x: &[HPoint]) -> Result<CertificateReport> {
    let lifted: Vec<[f64; 3]> = x.iter().map(lift).collect();
    let tri_lifted: Vec<[f64; 3]> = t.vertices.iter().map(lift).collect();
    let mut certificates = Vec::with_capacity(t.triangles.len());
    for tri in &t.triangles {
        let [a, b, c] = tri.map(|i| tri_lifted[i]);
        let (n, d) = plane_away_from_origin(&a, &b, &c)
            .ok_or_else(|| Error::Degenerate([tri[0], tri[1], tri[2], tri[2]]))?;
        let norm = dot(&n, &n).sqrt();
        let mut margin = f64::INFINITY;
        for p in &lifted {
            if [a, b, c].iter().any(|v| sub(v, p).iter().all(|e| e.abs() <= 1e-12 * v[2])) {
                continue;
            }
            margin = margin.min((d - dot(&n, p)) / norm);
        }
        let lorentz = (n[0] * n[0] + n[1] * n[1] - n[2] * n[2]) / (norm * norm);
        let region = if lorentz.abs() <= 1e-12 {
            EmptyRegion::Horoball
        } else if lorentz < 0.0 {
            EmptyRegion::Ball
        } else {
            EmptyRegion::Hyperball
        };
        certificates.push(TriangleCertificate {
            triangle: *tri,
            region,
            normalized_lorentz_norm: lorentz,
            margin,
            empty: margin >= -MARGIN_TOL,
        });
    }
    let all_empty = certificates.iter().all(|c| c.empty);
    Ok(CertificateReport { certificates, all_empty, tolerance: MARGIN_TOL })
}

/// Plane `n·x = d` through three lifted points with the origin on the side
/// `n·x > d`, or `None` when the plane passes through the origin.
fn plane_away_from_origin(a: &[f64; 3], b: &[f64; 3], c: &[f64; 3]) -> Option<([f64; 3], f64)> {
    let n = cross(&sub(b, a), &sub(c, a));
    let d = dot(&n, a);
    let scale = dot(&n, &n).sqrt() * a[2].max(b[2]).max(c[2]);
    if d.abs() <= DEGENERACY_TOL * scale {
        return None;
    }
    if d < 0.0 {
        Some((n, d))
    } else {
        Some((n.map(|x| -x), -d))
    }
}

/// Delaunay triangulation via the convex hull of the lifted points.
pub fn delaunay(x: &PointSet2) -> Result<Triangulation> {
    let pts = x.lifted();
    let faces = if pts.len() == 3 {
        vec![[0, 1, 2]]
    } else {
        let hull = Hull::build(&pts)?;
        hull.check_adjacent_coplanarity(&pts)?;
        hull.faces
            .into_iter()
            .filter(|f| f.alive)
            .filter(|f| f.offset < 0.0)
            .map(|f| f.v)
            .collect()
    };
    let mut triangles = Vec::with_capacity(faces.len());
    for f in faces {
        let [a, b, c] = f.map(|i| pts[i]);
        if plane_away_from_origin(&a, &b, &c).is_none() {
            return Err(Error::Degenerate([f[0], f[1], f[2], f[2]]));
        }
        let klein = |p: [f64; 3]| [p[0] / p[2], p[1] / p[2]];
        let (ka, kb, kc) = (klein(a), klein(b), klein(c));
        let area = (kb[0] - ka[0]) * (kc[1] - ka[1]) - (kb[1] - ka[1]) * (kc[0] - ka[0]);
        triangles.push(if area > 0.0 { f } else { [f[0], f[2], f[1]] });
    }
    triangles.sort_unstable_by_key(|t| canonical_triple(*t));
    let triangles: Vec<[usize; 3]> = triangles.into_iter().map(canonical_triple).collect();
    let mut edge_use: HashMap<[usize; 2], usize> = HashMap::new();
    for t in &triangles {
        for k in 0..3 {
            *edge_use.entry(sorted_pair(t[k], t[(k + 1) % 3])).or_default() += 1;
        }
    }
    let mut boundary: Vec<[usize; 2]> = edge_use.into_iter().filter(|(_, n)| *n == 1).map(|(e, _)| e).collect();
    boundary.sort_unstable();
    Ok(Triangulation { vertices: x.points().to_vec(), triangles, boundary })
}

#[derive(Debug, Clone)]
struct Face {
    v: [usize; 3],
    normal: [f64; 3],
    offset: f64,
    alive: bool,
}

struct Hull {
    faces: Vec<Face>,
}

impl Hull {
    fn build(pts: &[[f64; 3]]) -> Result<Hull> {
        let n = pts.len();
        let orient = |a: usize, b: usize, c: usize, d: usize| -> Result<f64> {
            let (u, v, w) = (sub(&pts[b], &pts[a]), sub(&pts[c], &pts[a]), sub(&pts[d], &pts[a]));
            let det = dot(&cross(&u, &v), &w);
            let scale = norm(&u) * norm(&v) * norm(&w);
            if det.abs() <= DEGENERACY_TOL * scale {
                Err(Error::Degenerate([a, b, c, d]))
            } else {
                Ok(det)
            }
        };
        // the lifts lie on a strictly convex surface, so any four of them
        // span a tetrahedron unless they are coplanar (cocircular)
        let (a, b, c, d) = (0, 1, 2, 3);
        let o = orient(a, b, c, d)?;
        let mut hull = Hull { faces: Vec::new() };
        let initial = if o > 0.0 {
            [[a, c, b], [a, b, d], [b, c, d], [c, a, d]]
        } else {
            [[a, b, c], [a, d, b], [b, d, c], [c, d, a]]
        };
        for f in initial {
            hull.push(pts, f);
        }
        for p in 4..n {
            let mut visible = Vec::new();
            for (fi, f) in hull.faces.iter().enumerate().filter(|(_, f)| f.alive) {
                let s = orient(f.v[0], f.v[1], f.v[2], p)?;
                // faces are stored with outward normals, so orient > 0 is outside
                if s > 0.0 {
                    visible.push(fi);
                }
            }
            if visible.is_empty() {
                return Err(Error::Precondition(format!("lifted point {p} is not extreme")));
            }
            let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
            for &fi in &visible {
                let v = hull.faces[fi].v;
                for k in 0..3 {
                    directed.insert((v[k], v[(k + 1) % 3]), fi);
                }
            }
            let mut horizon: Vec<(usize, usize)> =
                directed.keys().filter(|(x, y)| !directed.contains_key(&(*y, *x))).copied().collect();
            horizon.sort_unstable();
            for &fi in &visible {
                hull.faces[fi].alive = false;
            }
            for (x, y) in horizon {
                hull.push(pts, [x, y, p]);
            }
        }
        hull.faces.retain(|f| f.alive);
        Ok(hull)
    }

    fn push(&mut self, pts: &[[f64; 3]], v: [usize; 3]) {
        let normal = cross(&sub(&pts[v[1]], &pts[v[0]]), &sub(&pts[v[2]], &pts[v[0]]));
        let offset = dot(&normal, &pts[v[0]]);
        self.faces.push(Face { v, normal, offset, alive: true });
    }

    /// Rejects configurations where two adjacent hull faces are coplanar.
    fn check_adjacent_coplanarity(&self, pts: &[[f64; 3]]) -> Result<()> {
        let mut owner: HashMap<(usize, usize), usize> = HashMap::new();
        for (fi, f) in self.faces.iter().enumerate() {
            for k in 0..3 {
                owner.insert((f.v[k], f.v[(k + 1) % 3]), fi);
            }
        }
        for f in &self.faces {
            for k in 0..3 {
                let (x, y) = (f.v[k], f.v[(k + 1) % 3]);
                let Some(&gi) = owner.get(&(y, x)) else { continue };
                let g = &self.faces[gi];
                let opp = *g.v.iter().find(|&&w| w != x && w != y).unwrap();
                let a = pts[f.v[0]];
                let det = dot(&f.normal, &sub(&pts[opp], &a));
                let scale = norm(&f.normal) * norm(&sub(&pts[opp], &a));
                if det.abs() <= DEGENERACY_TOL * scale {
                    return Err(Error::Degenerate([f.v[0], f.v[1], f.v[2], opp]));
                }
            }
        }
        Ok(())
    }
}

fn sub(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: &[f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hgeom::FermiFrame;
    use crate::moebius::Isometry;

    fn h2(u: f64, v: f64) -> HPoint {
        HPoint::h2(u, v).unwrap()
    }

    #[test]
    fn three_points_give_one_triangle() {
        let x = PointSet2::new(vec![h2(0.0, 1.0), h2(1.0, 2.0), h2(-0.5, 0.7)]).unwrap();
        let t = delaunay(&x).unwrap();
        assert_eq!(t.triangles.len(), 1);
        assert_eq!(t.boundary.len(), 3);
        assert_eq!(t.euler_characteristic(), 1);
    }

    #[test]
    fn interior_point_is_shared_by_three_triangles() {
        let f = FermiFrame::canonical();
        let outer: Vec<HPoint> = (0..3)
            .map(|k| {
                let a = 2.0 * std::f64::consts::PI * k as f64 / 3.0 + 0.1;
                crate::hgeom::exp_at(&h2(0.0, 1.0), &[a.cos(), a.sin(), 0.0])
            })
            .collect();
        let mut pts = outer;
        pts.push(f.to_point(0.05, 0.02));
        let t = delaunay(&PointSet2::new(pts).unwrap()).unwrap();
        assert_eq!(t.triangles.len(), 3);
        assert!(t.triangles.iter().all(|tri| tri.contains(&3)));
        assert_eq!(t.euler_characteristic(), 1);
        assert!(empty_ball_certificate(&t, &t.vertices).unwrap().all_empty);
    }

    #[test]
    fn equilateral_triangle_has_a_circumscribed_circle() {
        let o = h2(0.0, 1.0);
        let pts: Vec<HPoint> = (0..3)
            .map(|k| {
                let a = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
                crate::hgeom::exp_at(&o, &[0.8 * a.cos(), 0.8 * a.sin(), 0.0])
            })
            .collect();
        let t = delaunay(&PointSet2::new(pts.clone()).unwrap()).unwrap();
        let cert = empty_ball_certificate(&t, &pts).unwrap();
        assert_eq!(cert.certificates[0].region, EmptyRegion::Ball);
        assert!(cert.all_empty);
    }

    #[test]
    fn spread_out_near_collinear_points_give_a_hyperball() {
        let f = FermiFrame::canonical();
        let pts = vec![f.to_point(-5.0, 0.01), f.to_point(0.0, 0.0), f.to_point(5.0, 0.01)];
        let t = delaunay(&PointSet2::new(pts.clone()).unwrap()).unwrap();
        let cert = empty_ball_certificate(&t, &pts).unwrap();
        assert_eq!(cert.certificates[0].region, EmptyRegion::Hyperball);
    }

    #[test]
    fn injected_point_breaks_the_certificate() {
        let pts = vec![h2(-1.0, 1.0), h2(1.0, 1.0), h2(0.0, 3.0)];
        let t = delaunay(&PointSet2::new(pts.clone()).unwrap()).unwrap();
        let mut with_intruder = pts;
        with_intruder.push(h2(0.0, 1.5));
        let cert = empty_ball_certificate(&t, &with_intruder).unwrap();
        assert!(!cert.all_empty);
        assert!(cert.certificates[0].margin < 0.0);
    }

    #[test]
    fn cocircular_points_are_rejected() {
        let o = h2(0.3, 1.2);
        let pts: Vec<HPoint> = (0..4)
            .map(|k| {
                let a = std::f64::consts::FRAC_PI_2 * k as f64 + 0.3;
                crate::hgeom::exp_at(&o, &[a.cos(), a.sin(), 0.0])
            })
            .collect();
        assert!(matches!(delaunay(&PointSet2::new(pts).unwrap()), Err(Error::Degenerate(_))));
    }

    #[test]
    fn equivariance_under_an_isometry() {
        let pts = vec![h2(0.0, 1.0), h2(1.0, 2.0), h2(-0.5, 0.7), h2(0.4, 0.4), h2(-1.2, 1.9), h2(2.0, 0.9)];
        let g = Isometry::real(2.0, -1.0, 1.5, 0.25).unwrap();
        let moved: Vec<HPoint> = pts.iter().map(|p| g.apply(p)).collect();
        let t1 = delaunay(&PointSet2::new(pts).unwrap()).unwrap();
        let t2 = delaunay(&PointSet2::new(moved).unwrap()).unwrap();
        assert_eq!(t1.canonical_triangles(), t2.canonical_triangles());
        assert_eq!(t1.euler_characteristic(), 1);
    }

    #[test]
    fn off_dump_lists_vertices_and_faces() {
        let x = PointSet2::new(vec![h2(0.0, 1.0), h2(1.0, 2.0), h2(-0.5, 0.7)]).unwrap();
        let off = delaunay(&x).unwrap().to_off();
        let lines: Vec<&str> = off.lines().collect();
        assert_eq!(lines[0], "OFF");
        assert_eq!(lines[1], "3 1 3");
        assert!(lines[5].starts_with("3 "));
    }

    #[test]
    fn validation() {
        assert!(PointSet2::new(vec![h2(0.0, 1.0), h2(1.0, 1.0)]).is_err());
        assert!(PointSet2::new(vec![h2(0.0, 1.0), h2(0.0, 1.0), h2(1.0, 1.0)]).is_err());
    }
}
