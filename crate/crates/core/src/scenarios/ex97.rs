use std::f64::consts::{LN_2, PI};

use serde_json::json;

use super::{cap, identity_residual, Check, ScenarioId, ScenarioReport, K_MAX_CAP};
use crate::error::Result;
use crate::hgeom::HPoint;
use crate::moebius::{IntMatrix, Isometry};

/// `n = 2^{k−1} k`, the exponent in `ω_k = αⁿ βⁿ`.
fn exponent(k: u32) -> u64 {
    (1u64 << (k - 1)) * k as u64
}

/// `ρ_k(ω_k)` built from the two rotations of angle `2π/(2^k k)` about
/// `2^k i` and `2^{−k} i`, together with the `n`-th powers of both.
fn rotation_word(k: u32) -> Result<(Isometry, Isometry, Isometry)> {
    let n = exponent(k);
    let angle = 2.0 * PI / (2.0 * n as f64);
    let scale = 2f64.powi(k as i32);
    let ra = Isometry::rotation_about(&HPoint::h2(0.0, scale)?, angle)?;
    let rb = Isometry::rotation_about(&HPoint::h2(0.0, 1.0 / scale)?, angle)?;
    let (pa, pb) = (ra.pow(n as i64), rb.pow(n as i64));
    Ok((pa.compose(&pb)?, pa, pb))
}

/// Exact traces of `j(ω_k)` for the parabolic pair `(1 3; 0 1)`,
/// `(1 0; −3 1)`, and translation lengths of `ρ_k(ω_k)`.
pub fn run_ex97(k_max: u32) -> Result<ScenarioReport> {
    cap("k_max", k_max, 1, K_MAX_CAP)?;
    let ja = IntMatrix::new(1, 3, 0, 1);
    let jb = IntMatrix::new(1, 0, -3, 1);
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    for k in 1..=k_max {
        let n = exponent(k);
        let w = ja.checked_pow(n)?.checked_mul(&jb.checked_pow(n)?)?;
        let trace = w.trace().abs();
        let closed = (3 * n as i128).pow(2) - 2;
        checks.push(Check::exact(format!("k={k}: |Tr j(omega_k)| = (3*2^(k-1)*k)^2 - 2"), trace as i64, closed as i64));

        let lambda_j = w.to_isometry()?.translation_length();
        let asymptotic = 4.0 * (k as f64 * LN_2 + (k as f64).ln());
        let residual = lambda_j - asymptotic;
        // λ_j < 2 log|Tr| < 4 log(3n) = asymptotic + 4 log(3/2)
        let bound = 4.0 * 1.5f64.ln();
        checks.push(Check::at_least(format!("k={k}: lambda_j - 4(k log 2 + log k) >= 0"), residual, 0.0, 1e-9));
        checks.push(Check::at_most(format!("k={k}: lambda_j - 4(k log 2 + log k) <= 4 log(3/2)"), residual, bound, 1e-9));

        let (rho_w, _, _) = rotation_word(k)?;
        let lambda_rho = rho_w.translation_length();
        checks.push(Check::close(format!("k={k}: lambda_rho = 4k log 2"), lambda_rho, 4.0 * k as f64 * LN_2, 1e-6));

        let ratio = lambda_rho / lambda_j;
        let kf = k as f64;
        let ratio_floor = kf * LN_2 / (kf * LN_2 + kf.ln() + 1.5f64.ln());
        checks.push(Check::below(format!("k={k}: ratio < 1"), ratio, 1.0));
        checks.push(Check::at_least(format!("k={k}: ratio >= k log 2 / log(3n)"), ratio, ratio_floor, 1e-9));
        rows.push(json!({
            "k": k,
            "n": n,
            "trace_abs": trace as i64,
            "trace_closed_form": closed as i64,
            "lambda_j": lambda_j,
            "lambda_j_asymptotic": asymptotic,
            "lambda_j_residual": residual,
            "lambda_rho": lambda_rho,
            "ratio": ratio,
            "ratio_leading_bound": 1.0 - kf.ln() / (kf * LN_2),
        }));
    }
    Ok(ScenarioReport::new(ScenarioId::Ex97, json!({ "k_max": k_max }), checks, json!({ "rows": rows })))
}

/// Composition of two half-turns about `2^k i` and `2^{−k} i`, each built as
/// a power of a small rotation, is a translation of length `4k log 2`.
pub fn run_ex98(k_max: u32) -> Result<ScenarioReport> {
    cap("k_max", k_max, 1, K_MAX_CAP)?;
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    for k in 1..=k_max {
        let (w, pa, pb) = rotation_word(k)?;
        let half_turn = identity_residual(&pa.compose(&pa)?).max(identity_residual(&pb.compose(&pb)?));
        checks.push(Check::close(format!("k={k}: powers are half-turns"), half_turn, 0.0, 1e-9));
        let lambda = w.translation_length();
        let expected = 4.0 * k as f64 * LN_2;
        checks.push(Check::close(format!("k={k}: lambda = 4k log 2"), lambda, expected, 1e-6));
        rows.push(json!({
            "k": k,
            "class": w.classify(),
            "lambda": lambda,
            "expected": expected,
            "half_turn_residual": half_turn,
        }));
    }
    Ok(ScenarioReport::new(ScenarioId::Ex98, json!({ "k_max": k_max }), checks, json!({ "rows": rows })))
}
