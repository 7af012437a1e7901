use std::f64::consts::PI;

use serde_json::json;

use super::{cap, identity_residual, Check, ScenarioId, ScenarioReport, GRID_CAP, LENGTH_CAP};
use crate::error::Result;
use crate::hgeom::{dist, right_triangle_solve, FermiFrame, GeodesicLine, HPoint, RightTriangle};
use crate::moebius::Isometry;
use crate::stretch::{local_lip_estimate, FermiStretchMap, Profile};
use crate::words::{ratio_sup, Representation};

const ANGLE_A: f64 = PI / 3.0;
const SAMPLE_RADII: [f64; 3] = [1e-3, 1e-4, 1e-5];

/// Right triangle with A at the frame origin, B on the base line and C on
/// the positive side, so that ABC is positively oriented.
struct Triangle {
    sides: RightTriangle,
    vertices: [HPoint; 3],
    reflections: Representation,
}

fn triangle(frame: &FermiFrame, angle_c: f64) -> Result<Triangle> {
    let sides = right_triangle_solve(ANGLE_A, angle_c)?;
    let a = frame.to_point(0.0, 0.0);
    let b = frame.to_point(sides.c, 0.0);
    let c = frame.to_point(sides.c, sides.a);
    let refl = |x: &HPoint, y: &HPoint| Isometry::reflection_in(&GeodesicLine::through(x, y)?);
    let reflections = Representation::reflection(vec![refl(&a, &b)?, refl(&b, &c)?, refl(&c, &a)?])?;
    Ok(Triangle { sides, vertices: [a, b, c], reflections })
}

/// Reflections in AB, BC, CA of the (π/3, π/2, π/14) triangle and of the
/// (π/3, π/2, π/7) triangle, their length ratios, and the Fermi stretch map
/// between the two triangles.
pub fn run_ex94(length: usize, grid: usize) -> Result<ScenarioReport> {
    cap("L", length, 1, LENGTH_CAP)?;
    cap("grid", grid, 10, GRID_CAP)?;
    let frame = FermiFrame::canonical();
    let src = triangle(&frame, PI / 14.0)?;
    let dst = triangle(&frame, PI / 7.0)?;
    let c0 = dst.sides.c / src.sides.c;
    let mut checks = vec![
        Check::close("source triangle trig residuals", src.sides.max_residual(), 0.0, 1e-10),
        Check::close("target triangle trig residuals", dst.sides.max_residual(), 0.0, 1e-10),
        Check::below("C0 < 1", c0, 1.0),
    ];

    // (r_i r_{i+1}) has order 2 at B, 14 at C and 3 at A in the source group
    let orders = [(0usize, 1usize, 2i64), (1, 2, 14), (2, 0, 3)];
    for (name, rep) in [("source", &src.reflections), ("target", &dst.reflections)] {
        let g = rep.generators();
        let squares = g.iter().map(|r| identity_residual(&r.compose(r).unwrap())).fold(0.0, f64::max);
        checks.push(Check::close(format!("{name}: generator squares = id"), squares, 0.0, 1e-9));
        for &(i, j, n) in &orders {
            let p = g[i].compose(&g[j])?.pow(n);
            checks.push(Check::close(format!("{name}: (r{}r{})^{n} = id", i + 1, j + 1), identity_residual(&p), 0.0, 1e-9));
        }
    }
    let g = dst.reflections.generators();
    let p7 = g[1].compose(&g[2])?.pow(7);
    checks.push(Check::close("target: (r2r3)^7 = id", identity_residual(&p7), 0.0, 1e-9));

    let sup = ratio_sup(&src.reflections, &dst.reflections, length)?;
    let c_prime = sup.value.unwrap_or(f64::NAN);
    checks.push(Check::below(format!("C'_{length} < C0"), c_prime, c0));

    let map = FermiStretchMap::new(frame, frame, c0, Profile::ExactBisect { angle: ANGLE_A })?;
    for (name, k) in [("A", 0), ("B", 1), ("C", 2)] {
        let err = dist(&map.apply(&src.vertices[k])?, &dst.vertices[k])?;
        checks.push(Check::close(format!("stretch map takes {name} to {name}'"), err, 0.0, 1e-9));
    }
    let f = move |p: &HPoint| map.apply(p).ok();
    let on_count = (grid / 10).max(1);
    let mut on_min = f64::INFINITY;
    for i in 0..on_count {
        let h = src.sides.c * (i as f64 + 0.5) / on_count as f64;
        let est = local_lip_estimate(&f, &frame.to_point(h, 0.0), &SAMPLE_RADII)?;
        on_min = on_min.min(est.value);
    }
    let mut off_max: f64 = 0.0;
    for i in 1..=grid - on_count {
        let (x, y) = (halton(i, 2), halton(i, 3));
        let h = src.sides.c * x;
        let v = y * (ANGLE_A.tan() * h.sinh()).atanh();
        let est = local_lip_estimate(&f, &frame.to_point(h, v), &SAMPLE_RADII)?;
        off_max = off_max.max(est.per_radius.iter().map(|r| r.value).fold(0.0, f64::max));
    }
    checks.push(Check::at_most("local Lip off [A,B] <= C0", off_max, c0, 1e-6));
    checks.push(Check::at_least("local Lip on [A,B] >= C0", on_min, c0, 1e-4));

    Ok(ScenarioReport::new(
        ScenarioId::Ex94,
        json!({ "L": length, "grid": grid, "radii": SAMPLE_RADII }),
        checks,
        json!({
            "source_triangle": src.sides,
            "target_triangle": dst.sides,
            "c0": c0,
            "ratio_sup": sup,
            "margin": c0 - c_prime,
            "stretch_sampling": {
                "on_segment_points": on_count,
                "interior_points": grid - on_count,
                "min_on_segment": on_min,
                "max_off_segment": off_max,
                "lower_bound": true,
            },
        }),
    ))
}

/// Radical-inverse sequence in base `b`, in (0, 1) for `i ≥ 1`.
fn halton(mut i: usize, b: usize) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= b as f64;
        r += f * (i % b) as f64;
        i /= b;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halton_points() {
        assert_eq!(halton(1, 2), 0.5);
        assert_eq!(halton(3, 2), 0.75);
        assert!((halton(2, 3) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn short_scan() {
        let r = run_ex94(4, 40).unwrap();
        assert!(r.passed, "{:#?}", r.failed_checks().collect::<Vec<_>>());
        assert!((r.data["c0"].as_f64().unwrap() - 0.5703796764).abs() < 1e-9);
    }
}
