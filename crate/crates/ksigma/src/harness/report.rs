//! Experiment reports: rows, verdicts, slope fits, CSV and JSON summaries.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::multiplier::EquivalenceScan;

/// One measured comparison. `t` doubles as Lambda or lattice size where the
/// experiment sweeps those instead of a dilation.
#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub experiment: String,
    pub theorem: String,
    pub multiplier: String,
    pub dim: usize,
    pub p: f64,
    pub q: Option<f64>,
    pub sigma: f64,
    pub alpha: Option<f64>,
    pub seed: u64,
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub verdict: bool,
}

/// Full outcome of a runner: rows plus fitted slopes and the scan whose
/// constants produced the verdicts. The verdict is recomputable from the
/// rows and the config thresholds alone.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub rows: Vec<ReportRow>,
    pub fitted_slopes: Vec<(String, f64)>,
    pub verdict: bool,
    pub constants_used: Option<EquivalenceScan>,
    pub notes: Vec<String>,
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x}")).unwrap_or_default()
}

impl ExperimentReport {
    /// Fixed-schema CSV; row order is deterministic, so identical configs
    /// produce byte-identical output.
    pub fn to_csv(&self) -> String {
        let mut s =
            String::from("experiment,theorem,multiplier,dim,p,q,sigma,alpha,seed,t,lhs,rhs,ratio,verdict\n");
        for r in &self.rows {
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                r.experiment,
                r.theorem,
                r.multiplier,
                r.dim,
                r.p,
                fmt_opt(r.q),
                r.sigma,
                fmt_opt(r.alpha),
                r.seed,
                r.t,
                r.lhs,
                r.rhs,
                r.ratio,
                if r.verdict { "pass" } else { "fail" }
            ));
        }
        s
    }

    pub fn worst_ratio(&self) -> f64 {
        self.rows.iter().map(|r| r.ratio).fold(0.0, f64::max)
    }

    /// {experiment, config echo, n_rows, worst_ratio, fitted slopes, verdict}
    pub fn summary(&self, config_echo: serde_json::Value) -> serde_json::Value {
        serde_json::json!({
            "experiment": self.experiment,
            "config": config_echo,
            "n_rows": self.rows.len(),
            "worst_ratio": self.worst_ratio(),
            "fitted_slopes": self.fitted_slopes,
            "verdict": if self.verdict { "pass" } else { "fail" },
            "notes": self.notes,
        })
    }
}

/// Least-squares line through (ln x, ln y): returns (slope, r_squared).
pub fn slope_fit(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    if points.len() < 3 {
        return Err(Error::Domain("slope fit needs >= 3 points".into()));
    }
    if points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return Err(Error::Domain("slope fit needs positive points".into()));
    }
    let n = points.len() as f64;
    let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx < 1e-24 {
        return Err(Error::Domain("slope fit degenerate: all x equal".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let syy: f64 = ly.iter().map(|y| (y - my) * (y - my)).sum();
    let ss_res: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| {
            let fit = my + slope * (x - mx);
            (y - fit) * (y - fit)
        })
        .sum();
    let r2 = if syy < 1e-24 { 1.0 } else { 1.0 - ss_res / syy };
    Ok((slope, r2))
}

/// The integrability range (np/(np + alpha p - n), p'] with the
/// a.e.-inversion flag beta_min < 1 (equivalent to alpha > n/p).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BetaRange {
    pub beta_min: f64,
    pub beta_max: f64,
    pub ae_inversion: bool,
}

pub fn beta_range(n: usize, p: f64, alpha: f64) -> Result<BetaRange> {
    if !(1.0..=2.0).contains(&p) {
        return Err(Error::Domain("beta_range needs p in [1,2]".into()));
    }
    if !(alpha > 0.0) {
        return Err(Error::Domain("beta_range needs alpha > 0".into()));
    }
    let nf = n as f64;
    let den = nf * p + alpha * p - nf;
    if den <= 0.0 {
        return Err(Error::Domain(format!(
            "beta_range denominator np + alpha p - n = {den} must be positive"
        )));
    }
    let beta_min = nf * p / den;
    let beta_max = if p == 1.0 { f64::INFINITY } else { p / (p - 1.0) };
    Ok(BetaRange {
        beta_min,
        beta_max,
        ae_inversion: beta_min < 1.0,
    })
}
