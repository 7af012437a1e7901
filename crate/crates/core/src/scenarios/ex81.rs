use std::f64::consts::PI;

use serde_json::json;

use super::{Check, ScenarioId, ScenarioReport};
use crate::error::{Error, Result};
use crate::hgeom::{dist, exp_at, HPoint};
use crate::stretch::{one_point_extension, FiniteMapData};

/// `g(s) = d(a_s, b_s)` for two unit-speed rays at angle 2π/3.
pub fn g(s: f64) -> f64 {
    2.0 * ((0.75f64).sqrt() * s.sinh()).asinh()
}

fn rays(o: &HPoint, s: f64) -> Vec<HPoint> {
    (0..3)
        .map(|k| {
            let a = 2.0 * PI * k as f64 / 3.0;
            exp_at(o, &[s * a.cos(), s * a.sin(), 0.0])
        })
        .collect()
}

/// Three points at distance `t` from `o` sent to the points at distance `T`
/// on the same rays, extended to `o`.
pub fn run_ex81(t: f64, big_t: f64) -> Result<ScenarioReport> {
    for (name, x) in [("t", t), ("T", big_t)] {
        if !(x > 0.0 && x <= 20.0) {
            return Err(Error::InvalidArgument(format!("{name} = {x} outside (0, 20]")));
        }
    }
    let mut checks = vec![
        Check::close("g(0.01)/0.01 -> sqrt 3", g(0.01) / 0.01, 3f64.sqrt(), 1e-3),
        Check::close("g(10)/10 -> 2", g(10.0) / 10.0, 2.0, 0.02),
        Check::close("g(10) - 20 -> log(3/4)", g(10.0) - 20.0, 0.75f64.ln(), 1e-6),
    ];
    let o = HPoint::h2(0.0, 1.0)?;
    let k = rays(&o, t);
    let img = rays(&o, big_t);
    let closed = g(big_t) / g(t);
    let via_dist = dist(&img[0], &img[1])? / dist(&k[0], &k[1])?;
    checks.push(Check::close("Lip(phi): closed form vs distances", closed, via_dist, 1e-9));
    let data = FiniteMapData::new(k.into_iter().zip(img).collect())?;
    checks.push(Check::close("Lip(phi) of the data", data.lipschitz(), closed, 1e-9));
    let ext = one_point_extension(&data, &o)?;
    let ratio = big_t / t;
    if t > big_t {
        checks.push(Check::close("t > T: extension constant = T/t", ext.constant, ratio, 1e-6));
    } else {
        checks.push(Check::at_most("t <= T: extension constant <= Lip(phi)", ext.constant, closed, 1e-6));
    }
    Ok(ScenarioReport::new(
        ScenarioId::Ex81,
        json!({ "t": t, "T": big_t }),
        checks,
        json!({
            "g_t": g(t),
            "g_T": g(big_t),
            "lip_phi": closed,
            "T_over_t": ratio,
            "extension": {
                "point": ext.point,
                "constant": ext.constant,
                "iterations": ext.iterations,
                "distance_to_o": dist(&ext.point, &o)?,
            },
        }),
    ))
}
