use std::fmt::Write as _;

use serde::{Serialize, Serializer};

use super::{Representation, Word};
use crate::error::Result;

pub const CSV_HEADER: &str = "word,lambda_j,lambda_rho,ratio,mu_j,mu_rho,drift,len";

/// Per-word lengths under a pair of representations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WordReport {
    #[serde(serialize_with = "word_as_string")]
    pub word: Word,
    pub lambda_j: f64,
    pub lambda_rho: f64,
    /// `λ_ρ / λ_j`, absent when `λ_j = 0`.
    pub ratio: Option<f64>,
    pub mu_j: f64,
    pub mu_rho: f64,
    /// `μ_j − μ_ρ`.
    pub drift: f64,
    pub len: usize,
}

fn word_as_string<S: Serializer>(w: &Word, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(w)
}

impl WordReport {
    pub fn new(word: Word, j: &Representation, rho: &Representation) -> Result<Self> {
        let gj = j.eval(&word)?;
        let gr = rho.eval(&word)?;
        Ok(WordReport::from_elements(word, &gj, &gr))
    }

    pub(crate) fn from_elements(word: Word, gj: &crate::moebius::Isometry, gr: &crate::moebius::Isometry) -> Self {
        let lambda_j = gj.translation_length();
        let lambda_rho = gr.translation_length();
        let mu_j = gj.cartan_mu();
        let mu_rho = gr.cartan_mu();
        let len = word.len();
        WordReport {
            word,
            lambda_j,
            lambda_rho,
            ratio: (lambda_j > 0.0).then(|| lambda_rho / lambda_j),
            mu_j,
            mu_rho,
            drift: mu_j - mu_rho,
            len,
        }
    }

    pub fn csv_row(&self) -> String {
        let ratio = self.ratio.map(|r| r.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{}",
            self.word, self.lambda_j, self.lambda_rho, ratio, self.mu_j, self.mu_rho, self.drift, self.len
        )
    }
}

pub fn to_csv(rows: &[WordReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{}", r.csv_row());
    }
    out
}

pub fn to_json_lines(rows: &[WordReport]) -> String {
    let mut out = String::new();
    for r in rows {
        out.push_str(&serde_json::to_string(r).expect("reports serialize"));
        out.push('\n');
    }
    out
}
