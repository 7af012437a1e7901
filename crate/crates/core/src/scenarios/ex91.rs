use serde_json::json;

use super::{cap, Check, ScenarioId, ScenarioReport, LENGTH_CAP, M_CAP, N_CAP};
use crate::error::Result;
use crate::hgeom::{line_distance, GeodesicLine};
use crate::moebius::Isometry;
use crate::words::{drift_scan, Representation};

/// Half-circles of radius `r` centred at `k²` (clockwise) and `k² + k`
/// (counterclockwise), and the shortest translation pairing them.
fn pairing(k: f64, r: f64) -> Result<(Isometry, f64)> {
    let left = GeodesicLine::real(Some(k * k - r), Some(k * k + r))?;
    let right = GeodesicLine::real(Some(k * k + k + r), Some(k * k + k - r))?;
    let g = Isometry::shortest_translation_between(&left, &right)?;
    let d = line_distance(&left, &right)?.distance;
    Ok((g, d))
}

fn alpha(k: u32) -> Result<(Isometry, f64)> {
    pairing(k as f64, 1.0)
}

fn beta(k: u32) -> Result<(Isometry, f64)> {
    pairing(k as f64, (k as f64).ln())
}

/// Free groups on `γ_N, …, γ_{N+m}` with `j(γ_k) = α_k`, `ρ(γ_k) = β_k`.
pub fn run_ex91(n: u32, m: u32, length: usize) -> Result<ScenarioReport> {
    cap("N", n, 3, N_CAP)?;
    cap("m", m, 0, M_CAP)?;
    cap("L", length, 1, LENGTH_CAP)?;
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    let (mut js, mut rhos) = (Vec::new(), Vec::new());
    let (mut prev_a, mut prev_b) = (f64::INFINITY, f64::INFINITY);
    let mut trend_a = true;
    let mut trend_b = true;
    for k in n..=n + m {
        let (a, da) = alpha(k)?;
        let (b, db) = beta(k)?;
        let (la, lb) = (a.translation_length(), b.translation_length());
        let lk = (k as f64).ln();
        let res_a = la - 2.0 * lk;
        let res_b = lb - (2.0 * lk - 2.0 * lk.ln());
        checks.push(Check::close(format!("k={k}: lambda(alpha_k) = line distance"), la, da, 1e-9));
        checks.push(Check::close(format!("k={k}: lambda(beta_k) = line distance"), lb, db, 1e-9));
        trend_a &= res_a.abs() <= prev_a;
        trend_b &= res_b.abs() <= prev_b;
        prev_a = res_a.abs();
        prev_b = res_b.abs();
        rows.push(json!({
            "k": k,
            "lambda_alpha": la,
            "lambda_alpha_residual": res_a,
            "lambda_beta": lb,
            "lambda_beta_residual": res_b,
        }));
        js.push(a);
        rhos.push(b);
    }
    checks.push(Check::exact("|lambda(alpha_k) - 2 log k| nonincreasing in k", trend_a, true));
    checks.push(Check::exact("|lambda(beta_k) - 2 log k + 2 log log k| nonincreasing in k", trend_b, true));
    let (_, d100) = alpha(100)?;
    let lambda100 = alpha(100)?.0.translation_length();
    checks.push(Check::close("k=100: lambda(alpha_k) = 2 log k", lambda100, 2.0 * 100f64.ln(), 0.1));
    checks.push(Check::close("k=100: lambda(alpha_k) = line distance", lambda100, d100, 1e-9));

    let j = Representation::free(js)?;
    let rho = Representation::free(rhos)?;
    let scan = drift_scan(&j, &rho, length)?;
    let short_min = scan.per_length.iter().filter(|s| s.len <= 3).map(|s| s.min_drift).fold(f64::INFINITY, f64::min);
    checks.push(Check::at_least("min drift over |gamma| <= 3", short_min, 1.0, 0.0));
    let monotone = scan.per_length.windows(2).all(|w| w[1].min_drift >= w[0].min_drift);
    checks.push(Check::exact(format!("per-length drift minima nondecreasing for lengths 1..{length}"), monotone, true));
    Ok(ScenarioReport::new(
        ScenarioId::Ex91,
        json!({ "N": n, "m": m, "L": length }),
        checks,
        json!({ "generators": rows, "drift": scan }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn desk_scale_run() {
        let r = run_ex91(40, 2, 4).unwrap();
        assert!(r.passed, "{:#?}", r.failed_checks().collect::<Vec<_>>());
        assert_eq!(r.data["drift"]["caveat"], crate::words::DRIFT_CAVEAT);
    }

    #[test]
    fn line_distances_match_closed_forms() {
        // cosh d = 1 + (gap² − (r₁ − r₂)²)/(2 r₁ r₂) for disjoint half-circles,
        // here with gap k − 2r between equal radii
        for k in [10u32, 40, 100] {
            let kf = k as f64;
            for r in [1.0, kf.ln()] {
                let (_, d) = pairing(kf, r).unwrap();
                let closed = (1.0 + ((kf - 2.0 * r) * (kf + 2.0 * r)) / (2.0 * r * r)).acosh();
                assert!((d - closed).abs() < 1e-9, "k = {k}, r = {r}: {d} vs {closed}");
            }
        }
    }
}
