//! Command-line driver for the K_sigma verification experiments.
//!
//! Every subcommand reads one JSON config document (`--config`), applies
//! one-to-one field overrides from flags, runs its experiment, prints the
//! JSON summary to stdout, and optionally writes row CSV (`--out`) and the
//! summary (`--summary`). Exit code: 0 when all verdicts pass, 2 on a
//! verdict failure, 1 on a config error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use ksigma::harness::{run_experiment, TheoremCheckConfig, TheoremKind};
use ksigma::multiplier::{ksigma_scan, ksigma_scan_rows};
use ksigma::Error;

#[derive(Parser)]
#[command(name = "ksigma", version, about = "Numerical checks for K_sigma multiplier estimates")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scan |1 - mu^(lambda theta)| / min{1, lambda^(2 sigma)} over a log grid
    Scan(Common),
    /// Run the theorem check named in the config (`theorem` field)
    Theorem(Common),
    /// Lipschitz modulus vs spectral tail slopes at p = 2
    LipTail(Common),
    /// Titchmarsh sharpness example: modulus, transform and integrability
    Sharpness(Common),
    /// Wave-operator vs spherical-mean modulus equivalence at p = 2
    Wave(Common),
    /// Print the integrability range (np/(np + alpha p - n), p']
    BetaRange(Common),
    /// Absolute convergence of Fourier series over the beta range
    AbsConvergence(Common),
}

/// Shared flags; the value flags override config fields one-to-one.
#[derive(Args, Clone)]
struct Common {
    /// JSON config document
    #[arg(long)]
    config: Option<PathBuf>,
    /// Row CSV output path
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON summary output path
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Worker thread count (default: all cores)
    #[arg(long)]
    jobs: Option<usize>,
    /// Multiplier kind (sphere, ball, cube, gauss, wave, polytope)
    #[arg(long)]
    multiplier: Option<String>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Power-spectrum exponent (lip-tail, abs-convergence)
    #[arg(long)]
    s: Option<f64>,
    /// Titchmarsh exponent (sharpness)
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    bandlimit: Option<usize>,
    #[arg(long)]
    n_functions: Option<usize>,
    #[arg(long)]
    t_min: Option<f64>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    t_points: Option<usize>,
    #[arg(long)]
    lattice_max: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::Json(_) | Error::Domain(_) | Error::Io(_) => {
                    ExitCode::from(1)
                }
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(cli: Cli) -> Result<bool, Error> {
    let (common, forced) = match &cli.cmd {
        Command::Scan(c) => (c, None),
        Command::Theorem(c) => (c, None),
        Command::LipTail(c) => (c, Some(TheoremKind::LipTail)),
        Command::Sharpness(c) => (c, Some(TheoremKind::Sharpness)),
        Command::Wave(c) => (c, Some(TheoremKind::WaveEquiv)),
        Command::BetaRange(c) => (c, None),
        Command::AbsConvergence(c) => (c, Some(TheoremKind::TorusAbsConvergence)),
    };
    if let Some(j) = common.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .map_err(|e| Error::Config(format!("--jobs: {e}")))?;
    }
    let doc = merged_config(common, forced)?;
    match &cli.cmd {
        Command::Scan(c) => run_scan(c, doc),
        Command::BetaRange(c) => run_beta_range(c, doc),
        _ => run_theorem(common, doc),
    }
}

/// Config file (or `{}`), then flag overrides, then subcommand defaults.
fn merged_config(c: &Common, forced: Option<TheoremKind>) -> Result<Value, Error> {
    let mut doc: Value = match &c.config {
        Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)?,
        None => json!({}),
    };
    let obj = doc
        .as_object_mut()
        .ok_or_else(|| Error::Config("config must be a JSON object".into()))?;
    if let Some(kind) = forced {
        obj.insert("theorem".into(), serde_json::to_value(kind)?);
    }
    if let Some(m) = &c.multiplier {
        obj.insert("multiplier".into(), json!({ "kind": m }));
    }
    macro_rules! set {
        ($field:literal, $val:expr) => {
            if let Some(v) = $val {
                obj.insert($field.into(), json!(v));
            }
        };
    }
    set!("dim", c.dim);
    set!("p", c.p);
    set!("q", c.q);
    set!("sigma", c.sigma);
    set!("alpha", c.alpha);
    set!("s", c.s);
    set!("gamma", c.gamma);
    set!("seed", c.seed);
    set!("bandlimit", c.bandlimit);
    set!("n_functions", c.n_functions);
    set!("lattice_max", c.lattice_max);
    if c.t_min.is_some() || c.t_max.is_some() || c.t_points.is_some() {
        let tg = obj
            .entry("t_grid")
            .or_insert_with(|| json!({"t_min": 1e-2, "t_max": 10.0, "points": 20}));
        let tg = tg
            .as_object_mut()
            .ok_or_else(|| Error::Config("t_grid must be an object".into()))?;
        if let Some(v) = c.t_min {
            tg.insert("t_min".into(), json!(v));
        }
        if let Some(v) = c.t_max {
            tg.insert("t_max".into(), json!(v));
        }
        if let Some(v) = c.t_points {
            tg.insert("points".into(), json!(v));
        }
    }
    obj.entry("multiplier").or_insert_with(|| json!({"kind": "sphere"}));
    obj.entry("dim").or_insert(json!(2));
    match forced {
        Some(TheoremKind::LipTail) | Some(TheoremKind::TorusAbsConvergence) => {
            obj.entry("p").or_insert(json!(2.0));
            obj.entry("s").or_insert(json!(2.0));
        }
        Some(TheoremKind::Sharpness) => {
            obj.entry("p").or_insert(json!(2.0));
            obj.entry("gamma").or_insert(json!(0.7));
        }
        Some(TheoremKind::WaveEquiv) => {
            obj.entry("p").or_insert(json!(2.0));
        }
        _ => {}
    }
    Ok(doc)
}

fn write_outputs(c: &Common, csv: &str, summary: &Value) -> Result<(), Error> {
    if let Some(path) = &c.out {
        std::fs::write(path, csv)?;
    }
    if let Some(path) = &c.summary {
        std::fs::write(path, format!("{summary:#}\n"))?;
    }
    println!("{summary:#}");
    Ok(())
}

fn run_theorem(c: &Common, doc: Value) -> Result<bool, Error> {
    let cfg: TheoremCheckConfig = serde_json::from_value(doc.clone())?;
    let report = run_experiment(&cfg)?;
    write_outputs(c, &report.to_csv(), &report.summary(doc))?;
    Ok(report.verdict)
}

fn run_scan(c: &Common, doc: Value) -> Result<bool, Error> {
    // reuse the theorem config schema for {multiplier, dim, sigma, scan}
    let mut doc = doc;
    doc.as_object_mut()
        .unwrap()
        .entry("theorem")
        .or_insert(json!("gen_estimates"));
    let cfg: TheoremCheckConfig = serde_json::from_value(doc.clone())?;
    cfg.validate()?;
    let mu = cfg.multiplier.build(cfg.dim)?;
    let sc = &cfg.scan;
    let scan = ksigma_scan(&mu, cfg.sigma, sc.lambda_min, sc.lambda_max, sc.n_points, sc.n_directions)?;
    let rows = ksigma_scan_rows(&mu, cfg.sigma, sc.lambda_min, sc.lambda_max, sc.n_points, sc.n_directions)?;
    let mut csv = String::from("name,sigma,lambda,direction_index,ratio\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            r.name, r.sigma, r.lambda, r.direction_index, r.ratio
        ));
    }
    let verdict = scan.passes(sc.floor);
    let summary = json!({
        "experiment": "scan",
        "config": doc,
        "n_rows": rows.len(),
        "c_lower": scan.c_lower,
        "c_upper": scan.c_upper,
        "arg_lower": scan.arg_lower,
        "arg_upper": scan.arg_upper,
        "grid": scan.grid_spec,
        "verdict": if verdict { "pass" } else { "fail" },
    });
    write_outputs(c, &csv, &summary)?;
    Ok(verdict)
}

fn run_beta_range(c: &Common, doc: Value) -> Result<bool, Error> {
    let n = doc.get("dim").and_then(Value::as_u64).unwrap_or(2) as usize;
    let p = doc.get("p").and_then(Value::as_f64).unwrap_or(2.0);
    let alpha = doc
        .get("alpha")
        .and_then(Value::as_f64)
        .ok_or_else(|| Error::Config("beta-range needs alpha (flag --alpha or config)".into()))?;
    let br = ksigma::harness::beta_range(n, p, alpha)
        .map_err(|e| Error::Config(e.to_string()))?;
    let csv = format!(
        "n,p,alpha,beta_min,beta_max,ae_inversion\n{n},{p},{alpha},{},{},{}\n",
        br.beta_min, br.beta_max, br.ae_inversion
    );
    let summary = json!({
        "experiment": "beta_range",
        "config": doc,
        "beta_min": br.beta_min,
        "beta_max": br.beta_max,
        "ae_inversion": br.ae_inversion,
        "verdict": "pass",
    });
    write_outputs(c, &csv, &summary)?;
    Ok(true)
}
