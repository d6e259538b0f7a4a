//! The experiment runners. Each builds its multiplier, measures the scan
//! constants backing its verdict, fail-fasts on a single-mode probe whose
//! ratio has a closed form, then sweeps seeded random or synthetic spectra
//! over the t-grid in parallel with deterministic row order.
//!
//! Inequality constants: with the scan bounds
//! c_lower min{1,|xi|^(2 sigma)} <= |1 - mu^| <= c_upper min{...}, the
//! coefficient comparison gives lhs <= (1/c_lower) ||Mf - f||_p (the
//! Hausdorff-Young step is a contraction on the torus, constant 1) and, at
//! p = 2, the two-sided ||Mf - f||_2 <= c_upper lhs. Verdicts use these
//! directions with a 1e-9 slack.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::harness::config::{TheoremCheckConfig, TheoremKind};
use crate::harness::report::{beta_range, slope_fit, ExperimentReport, ReportRow};
use crate::multiplier::{ksigma_scan, make_multiplier, EquivalenceScan, Multiplier, MultiplierKind};
use crate::radial::{
    integrability_partial, make_titchmarsh_profile, modulus_sphere_mean, radial_fourier,
    RadialGrid,
};
use crate::torus::{
    apply_torus_deficit, lp_norm_torus, pick_lhs, power_spectrum, random_spectrum, single_mode,
    spectral_min_lhs, tail_sum, Spectrum,
};

const SLACK: f64 = 1.0 + 1e-9;
/// Scan constants are minima/maxima over a finite grid and direction set;
/// probe containment allows this much grid slack.
const GRID_SLACK: f64 = 1.01;

pub fn run_experiment(cfg: &TheoremCheckConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    match cfg.theorem {
        TheoremKind::GenEstimates => run_gen_estimates(cfg),
        TheoremKind::PicksUpper | TheoremKind::PicksLower => run_picks(cfg),
        TheoremKind::RiemannLebesgue => run_riemann_lebesgue(cfg),
        TheoremKind::WaveEquiv => run_wave_equiv(cfg),
        TheoremKind::ApproxIdentity => run_approx_identity(cfg),
        TheoremKind::LipTail => run_lip_tail(cfg),
        TheoremKind::TorusAbsConvergence => run_torus_abs_convergence(cfg),
        TheoremKind::Sharpness => run_sharpness(cfg),
    }
}

fn theorem_name(kind: TheoremKind) -> &'static str {
    match kind {
        TheoremKind::GenEstimates => "gen_estimates",
        TheoremKind::PicksUpper => "picks_upper",
        TheoremKind::PicksLower => "picks_lower",
        TheoremKind::RiemannLebesgue => "riemann_lebesgue",
        TheoremKind::WaveEquiv => "wave_equiv",
        TheoremKind::ApproxIdentity => "approx_identity",
        TheoremKind::LipTail => "lip_tail",
        TheoremKind::TorusAbsConvergence => "torus_abs_convergence",
        TheoremKind::Sharpness => "sharpness",
    }
}

fn row_template(cfg: &TheoremCheckConfig, mu_name: &str) -> ReportRow {
    ReportRow {
        experiment: theorem_name(cfg.theorem).into(),
        theorem: theorem_name(cfg.theorem).into(),
        multiplier: mu_name.into(),
        dim: cfg.dim,
        p: cfg.p,
        q: cfg.q,
        sigma: cfg.sigma,
        alpha: cfg.alpha,
        seed: cfg.seed,
        t: 0.0,
        lhs: 0.0,
        rhs: 0.0,
        ratio: 0.0,
        verdict: true,
    }
}

fn sort_rows(rows: &mut [ReportRow]) {
    rows.sort_by(|a, b| {
        a.seed
            .cmp(&b.seed)
            .then(a.q.unwrap_or(0.0).total_cmp(&b.q.unwrap_or(0.0)))
            .then(a.t.total_cmp(&b.t))
    });
}

fn run_scan(cfg: &TheoremCheckConfig, mu: &Multiplier) -> Result<EquivalenceScan> {
    let sc = &cfg.scan;
    ksigma_scan(mu, cfg.sigma, sc.lambda_min, sc.lambda_max, sc.n_points, sc.n_directions)
}

fn probe_mode(dim: usize) -> Vec<i64> {
    let mut k0 = vec![0i64; dim];
    k0[0] = 2;
    if dim > 1 {
        k0[1] = 1;
    }
    k0
}

fn safe_ratio(lhs: f64, rhs: f64) -> f64 {
    if rhs > 0.0 {
        lhs / rhs
    } else if lhs == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

fn seeded_spectra(cfg: &TheoremCheckConfig) -> Result<Vec<Spectrum>> {
    (0..cfg.n_functions)
        .map(|i| random_spectrum(cfg.seed + i as u64, cfg.dim, cfg.bandlimit, cfg.decay))
        .collect()
}

// ---------------------------------------------------------------------------
// gen_estimates

fn run_gen_estimates(cfg: &TheoremCheckConfig) -> Result<ExperimentReport> {
    if !(1.0..=2.0).contains(&cfg.p) {
        return Err(Error::Config("gen_estimates needs p in [1,2]".into()));
    }
    let mu = cfg.multiplier.build(cfg.dim)?;
    let scan = run_scan(cfg, &mu)?;
    let ts = cfg.t_grid.values();

    // fail-fast single-mode probe: the theorem ratio collapses to
    // min{1,(t|k0|)^{2 sigma}} / |1 - mu^(t k0)|
    let k0 = probe_mode(cfg.dim);
    let nk0 = (k0.iter().map(|x| (x * x) as f64).sum::<f64>()).sqrt();
    let e = single_mode(cfg.dim, &k0, Complex64::new(1.0, 0.0), false)?;
    for &t in &ts {
        let lhs = spectral_min_lhs(&e, t, cfg.sigma, cfg.p)?;
        let rhs = lp_norm_torus(&apply_torus_deficit(&e, &mu, t)?, cfg.p, cfg.oversample)?;
        let ratio = safe_ratio(lhs, rhs);
        let xi: Vec<f64> = k0.iter().map(|&x| t * x as f64).collect();
        let expect = 1f64.min((t * nk0).powf(2.0 * cfg.sigma)) / mu.deficit(&xi).abs();
        // lhs/rhs = min/deficit, the reciprocal of the scan ratio
        if (ratio - expect).abs() > 1e-10 * expect.max(1.0)
            || ratio < 1.0 / (scan.c_upper * GRID_SLACK)
            || ratio > GRID_SLACK / scan.c_lower
        {
            return Err(Error::Accuracy(format!(
                "single-mode probe failed at t={t}: ratio {ratio}, expected {expect}, \
                 scan [{}, {}]",
                scan.c_lower, scan.c_upper
            )));
        }
    }

    let spectra = seeded_spectra(cfg)?;
    let template = row_template(cfg, &mu.name);
    let jobs: Vec<(usize, f64)> = (0..cfg.n_functions)
        .flat_map(|i| ts.iter().map(move |&t| (i, t)))
        .collect();
    let mut rows: Vec<ReportRow> = jobs
        .par_iter()
        .map(|&(i, t)| -> Result<ReportRow> {
            let f = &spectra[i];
            let lhs = spectral_min_lhs(f, t, cfg.sigma, cfg.p)?;
            let rhs = lp_norm_torus(&apply_torus_deficit(f, &mu, t)?, cfg.p, cfg.oversample)?;
            let mut ok = lhs <= SLACK / scan.c_lower * rhs;
            if cfg.p == 2.0 {
                ok &= rhs <= SLACK * scan.c_upper * lhs;
            }
            let mut row = template.clone();
            row.seed = cfg.seed + i as u64;
            row.t = t;
            row.lhs = lhs;
            row.rhs = rhs;
            row.ratio = safe_ratio(lhs, rhs);
            row.verdict = ok;
            Ok(row)
        })
        .collect::<Result<_>>()?;
    sort_rows(&mut rows);
    let verdict = rows.iter().all(|r| r.verdict);
    Ok(ExperimentReport {
        experiment: theorem_name(cfg.theorem).into(),
        rows,
        fitted_slopes: vec![],
        verdict,
        constants_used: Some(scan),
        notes: vec![],
    })
}

// ---------------------------------------------------------------------------
// picks

fn run_picks(cfg: &TheoremCheckConfig) -> Result<ExperimentReport> {
    let q = cfg.q.ok_or_else(|| Error::Config("picks needs q".into()))?;
    let pp = cfg.p / (cfg.p - 1.0);
    let qp = if q == 1.0 { f64::INFINITY } else { q / (q - 1.0) };
    let upper = cfg.theorem == TheoremKind::PicksUpper;
    if upper && !(cfg.p > 1.0 && cfg.p <= 2.0 && cfg.p <= q && q <= pp) {
        return Err(Error::Config(format!(
            "picks_upper needs 1 < p <= 2 and p <= q <= p', got p={}, q={q}",
            cfg.p
        )));
    }
    if !upper && !(cfg.p >= 2.0 && q.max(qp) <= cfg.p) {
        return Err(Error::Config(format!(
            "picks_lower needs p >= 2 and max(q,q') <= p, got p={}, q={q}",
            cfg.p
        )));
    }
    let mu = cfg.multiplier.build(cfg.dim)?;
    let scan = run_scan(cfg, &mu)?;
    let ts = cfg.t_grid.values();
    // bound used only as an empirical flag ceiling
    let ceiling = if upper {
        cfg.pick_ceiling / scan.c_lower
    } else {
        cfg.pick_ceiling * scan.c_upper
    };

    // single-mode probe: both sides have closed forms
    let k0 = probe_mode(cfg.dim);
    let nk0 = (k0.iter().map(|x| (x * x) as f64).sum::<f64>()).sqrt();
    let e = single_mode(cfg.dim, &k0, Complex64::new(1.0, 0.0), false)?;
    for &t in &ts {
        let pick = pick_lhs(&e, t, cfg.sigma, cfg.p, q)?;
        let diff = lp_norm_torus(&apply_torus_deficit(&e, &mu, t)?, cfg.p, cfg.oversample)?;
        let xi: Vec<f64> = k0.iter().map(|&x| t * x as f64).collect();
        let w = cfg.dim as f64 * (1.0 - 1.0 / cfg.p - 1.0 / q);
        let expect_pick = 1f64.min((t * nk0).powf(2.0 * cfg.sigma)) * nk0.powf(w);
        let expect_diff = mu.deficit(&xi).abs();
        if (pick - expect_pick).abs() > 1e-10 * expect_pick.max(1.0)
            || (diff - expect_diff).abs() > 1e-10 * expect_diff.max(1.0)
        {
            return Err(Error::Accuracy(format!(
                "picks single-mode probe failed at t={t}"
            )));
        }
    }

    let spectra = seeded_spectra(cfg)?;
    let template = row_template(cfg, &mu.name);
    let jobs: Vec<(usize, f64)> = (0..cfg.n_functions)
        .flat_map(|i| ts.iter().map(move |&t| (i, t)))
        .collect();
    let mut rows: Vec<ReportRow> = jobs
        .par_iter()
        .map(|&(i, t)| -> Result<ReportRow> {
            let f = &spectra[i];
            let pick = pick_lhs(f, t, cfg.sigma, cfg.p, q)?;
            let diff = lp_norm_torus(&apply_torus_deficit(f, &mu, t)?, cfg.p, cfg.oversample)?;
            let (lhs, rhs) = if upper { (pick, diff) } else { (diff, pick) };
            let ratio = safe_ratio(lhs, rhs);
            let mut row = template.clone();
            row.seed = cfg.seed + i as u64;
            row.t = t;
            row.lhs = lhs;
            row.rhs = rhs;
            row.ratio = ratio;
            // informational: within the configured ceiling
            row.verdict = ratio <= ceiling * SLACK;
            Ok(row)
        })
        .collect::<Result<_>>()?;
    sort_rows(&mut rows);
    let worst = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let flagged = rows.iter().filter(|r| !r.verdict).count();
    let mut notes = vec![format!(
        "empirical max ratio {worst:.6} against ceiling {ceiling:.6} (flag only, \
         no explicit torus Pick constant is asserted)"
    )];
    if flagged > 0 {
        notes.push(format!("flag: {flagged} rows exceeded the configured ceiling"));
    }
    if !upper {
        notes.push("direction 2 on the torus: transferred, unproved in paper".into());
    }
    // verdict: all rows finite; ceiling exceedance flags but does not fail
    let verdict = rows.iter().all(|r| r.ratio.is_finite());
    Ok(ExperimentReport {
        experiment: theorem_name(cfg.theorem).into(),
        rows,
        fitted_slopes: vec![],
        verdict,
        constants_used: Some(scan),
        notes,
    })
}

// ---------------------------------------------------------------------------
// riemann_lebesgue

fn run_riemann_lebesgue(cfg: &TheoremCheckConfig) -> Result<ExperimentReport> {
    if !(1.0..=2.0).contains(&cfg.p) {
        return Err(Error::Config("riemann_lebesgue needs p in [1,2]".into()));
    }
    let mu = cfg.multiplier.build(cfg.dim)?;
    // the tail only sees t|k| > 1, where min{1,.} = 1: restrict the scan
    let sc = &cfg.scan;
    let scan_tail = ksigma_scan(&mu, cfg.sigma, 1.0, sc.lambda_max, sc.n_points, sc.n_directions)?;
    let pp = cfg.p_prime();
    let bound = if pp.is_infinite() {
        SLACK / scan_tail.c_lower
    } else {
        (SLACK / scan_tail.c_lower).powf(pp)
    };
    let ts = cfg.t_grid.values();

    // probe: single mode. Below the cutoff the tail is empty; above it the
    // inequality collapses to the scan bound.
    let k0 = probe_mode(cfg.dim);
    let nk0 = (k0.iter().map(|x| (x * x) as f64).sum::<f64>()).sqrt();
    let e = single_mode(cfg.dim, &k0, Complex64::new(1.0, 0.0), false)?;
    for &t in &ts {
        let tail = tail_sum(&e, t, cfg.p)?;
        if t * nk0 <= 1.0 {
            if tail != 0.0 {
                return Err(Error::Accuracy("probe: tail not empty below cutoff".into()));
            }
            continue;
        }
        let norm = lp_norm_torus(&apply_torus_deficit(&e, &mu, t)?, cfg.p, cfg.oversample)?;
        let rhs = if pp.is_infinite() { norm } else { norm.powf(pp) };
        if tail > bound * GRID_SLACK.powf(if pp.is_infinite() { 1.0 } else { pp }) * rhs {
            return Err(Error::Accuracy(format!(
                "riemann_lebesgue probe failed at t={t}"
            )));
        }
    }

    let spectra = seeded_spectra(cfg)?;
    let template = row_template(cfg, &mu.name);
    let jobs: Vec<(usize, f64)> = (0..cfg.n_functions)
        .flat_map(|i| ts.iter().map(move |&t| (i, t)))
        .collect();
    let mut rows: Vec<ReportRow> = jobs
        .par_iter()
        .map(|&(i, t)| -> Result<ReportRow> {
            let f = &spectra[i];
            let lhs = tail_sum(f, t, cfg.p)?;
            let norm = lp_norm_torus(&apply_torus_deficit(f, &mu, t)?, cfg.p, cfg.oversample)?;
            let rhs = if pp.is_infinite() { norm } else { norm.powf(pp) };
            let mut row = template.clone();
            row.seed = cfg.seed + i as u64;
            row.t = t;
            row.lhs = lhs;
            row.rhs = rhs;
            row.ratio = safe_ratio(lhs, rhs);
            row.verdict = lhs <= bound * rhs;
            Ok(row)
        })
        .collect::<Result<_>>()?;
    sort_rows(&mut rows);
    let verdict = rows.iter().all(|r| r.verdict);
    Ok(ExperimentReport {
        experiment: theorem_name(cfg.theorem).into(),
        rows,
        fitted_slopes: vec![],
        verdict,
        constants_used: Some(scan_tail),
        notes: vec!["scan restricted to lambda >= 1 (tail regime)".into()],
    })
}

// ---------------------------------------------------------------------------
// wave_equiv

fn run_wave_equiv(cfg: &TheoremCheckConfig) -> Result<ExperimentReport> {
    if cfg.p != 2.0 {
        return Err(Error::Config(
            "wave_equiv implements only p = 2; the range 2n/(n+1) < p <= 2 is out of scope"
                .into(),
        ));
    }
    let wave = make_multiplier(MultiplierKind::Wave, cfg.dim, None)?;
    let sphere = make_multiplier(MultiplierKind::Sphere, cfg.dim, None)?;
    let sc = &cfg.scan;
    let scan_w = ksigma_scan(&wave, 1.0, sc.lambda_min, sc.lambda_max, sc.n_points, 1)?;
    let scan_s = ksigma_scan(&sphere, 1.0, sc.lambda_min, sc.lambda_max, sc.n_points, 1)?;
    let lo = scan_w.c_lower / scan_s.c_upper;
    let hi = scan_w.c_upper / scan_s.c_lower;
    let ts = cfg.t_grid.values();

    // probe: ratio of the two single-mode deficits
    let k0 = probe_mode(cfg.dim);
    let nk0 = (k0.iter().map(|x| (x * x) as f64).sum::<f64>()).sqrt();
    let e = single_mode(cfg.dim, &k0, Complex64::new(1.0, 0.0), false)?;
    for &t in &ts {
        let a = lp_norm_torus(&apply_torus_deficit(&e, &wave, t)?, 2.0, cfg.oversample)?;
        let b = lp_norm_torus(&apply_torus_deficit(&e, &sphere, t)?, 2.0, cfg.oversample)?;
        let ratio = safe_ratio(a, b);
        let expect = wave.deficit_radial(t * nk0).abs() / sphere.deficit_radial(t * nk0).abs();
        if (ratio - expect).abs() > 1e-10 * expect.max(1.0)
            || ratio < lo / GRID_SLACK
            || ratio > hi * GRID_SLACK
        {
            return Err(Error::Accuracy(format!("wave probe failed at t={t}")));
        }
    }

    let spectra = seeded_spectra(cfg)?;
    let template = row_template(cfg, &wave.name);
    let jobs: Vec<(usize, f64)> = (0..cfg.n_functions)
        .flat_map(|i| ts.iter().map(move |&t| (i, t)))
        .collect();
    let mut rows: Vec<ReportRow> = jobs
        .par_iter()
        .map(|&(i, t)| -> Result<ReportRow> {
            let f = &spectra[i];
            let lhs = lp_norm_torus(&apply_torus_deficit(f, &wave, t)?, 2.0, cfg.oversample)?;
            let rhs = lp_norm_torus(&apply_torus_deficit(f, &sphere, t)?, 2.0, cfg.oversample)?;
            let ratio = safe_ratio(lhs, rhs);
            let mut ok = ratio >= lo / GRID_SLACK && ratio <= hi * GRID_SLACK;
            if cfg.dim == 3 {
                // j_{1/2} on both sides: the operators coincide
                ok &= (ratio - 1.0).abs() <= 1e-12;
            }
            let mut row = template.clone();
            row.multiplier = format!("{}/{}", wave.name, sphere.name);
            row.seed = cfg.seed + i as u64;
            row.t = t;
            row.lhs = lhs;
            row.rhs = rhs;
            row.ratio = ratio;
            row.verdict = ok;
            Ok(row)
        })
        .collect::<Result<_>>()?;
    sort_rows(&mut rows);
    // small-t slope of both sides for the first seed, if the grid allows
    let mut fitted = vec![];
    let first: Vec<&ReportRow> = rows.iter().filter(|r| r.seed == cfg.seed).collect();
    if first.len() >= 5 {
        let inner = &first[1..first.len() - 1];
        let wave_pts: Vec<(f64, f64)> = inner.iter().map(|r| (r.t, r.lhs)).collect();
        let sph_pts: Vec<(f64, f64)> = inner.iter().map(|r| (r.t, r.rhs)).collect();
        if let (Ok((sw, _)), Ok((ss, _))) = (slope_fit(&wave_pts), slope_fit(&sph_pts)) {
            fitted.push(("wave_modulus_slope".to_string(), sw));
            fitted.push(("sphere_modulus_slope".to_string(), ss));
        }
    }
    let verdict = rows.iter().all(|r| r.verdict);
    Ok(ExperimentReport {
        experiment: theorem_name(cfg.theorem).into(),
        rows,
        fitted_slopes: fitted,
        verdict,
        constants_used: Some(scan_w),
        notes: vec![format!("ratio bounds [{lo:.6}, {hi:.6}] from the two scans")],
    })
}

// ---------------------------------------------------------------------------
// approx_identity

fn run_approx_identity(cfg: &TheoremCheckConfig) -> Result<ExperimentReport> {
    if !cfg.p.is_finite() {
        return Err(Error::Config("approx_identity needs finite p >= 1".into()));
    }
    if cfg.decay < 3.0 {
        return Err(Error::Config("approx_identity needs smooth spectra: decay >= 3".into()));
    }
    if cfg.t_grid.t_max * cfg.bandlimit as f64 > 4.0 {
        return Err(Error::Config(
            "approx_identity t-grid must stay in the small-t regime (t_max * N <= 4)".into(),
        ));
    }
    let mu = cfg.multiplier.build(cfg.dim)?;
    let scan = run_scan(cfg, &mu)?;
    let target = 2.0 * mu.sigma;
    let ts = cfg.t_grid.values();
    let spectra = seeded_spectra(cfg)?;
    let template = row_template(cfg, &mu.name);

    let per_seed: Vec<(Vec<ReportRow>, f64)> = (0..cfg.n_functions)
        .into_par_iter()
        .map(|i| -> Result<(Vec<ReportRow>, f64)> {
            let f = &spectra[i];
            let mut vals = Vec::with_capacity(ts.len());
            for &t in &ts {
                let v = lp_norm_torus(&apply_torus_deficit(f, &mu, t)?, cfg.p, cfg.oversample)?;
                vals.push(v);
            }
            let pts: Vec<(f64, f64)> = ts[1..ts.len() - 1]
                .iter()
                .zip(&vals[1..ts.len() - 1])
                .map(|(&t, &v)| (t, v))
                .collect();
            let (slope, _) = slope_fit(&pts)?;
            let rows = ts
                .iter()
                .zip(&vals)
                .enumerate()
                .map(|(j, (&t, &v))| {
                    let monotone = j + 1 >= vals.len() || v <= vals[j + 1] * SLACK;
                    let mut row = template.clone();
                    row.seed = cfg.seed + i as u64;
                    row.t = t;
                    row.lhs = v;
                    row.rhs = t.powf(target);
                    row.ratio = safe_ratio(v, t.powf(target));
                    row.verdict = monotone && (slope - target).abs() <= 0.1;
                    row
                })
                .collect();
            Ok((rows, slope))
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    let mut fitted = Vec::new();
    for (i, (seed_rows, slope)) in per_seed.into_iter().enumerate() {
        rows.extend(seed_rows);
        fitted.push((format!("modulus_slope_seed{}", cfg.seed + i as u64), slope));
    }
    sort_rows(&mut rows);
    let verdict = rows.iter().all(|r| r.verdict);
    Ok(ExperimentReport {
        experiment: theorem_name(cfg.theorem).into(),
        rows,
        fitted_slopes: fitted,
        verdict,
        constants_used: Some(scan),
        notes: vec![format!("slope target 2 sigma = {target}")],
    })
}

// ---------------------------------------------------------------------------
// lip_tail

fn run_lip_tail(cfg: &TheoremCheckConfig) -> Result<ExperimentReport> {
    if cfg.p != 2.0 {
        return Err(Error::Config("lip_tail needs p = 2".into()));
    }
    let s = cfg.s.ok_or_else(|| Error::Config("lip_tail needs the spectrum exponent s".into()))?;
    let n = cfg.dim as f64;
    let alpha = s - n / 2.0;
    if !(alpha > 0.0) {
        return Err(Error::Config(format!("alpha = s - n/2 = {alpha} must be positive")));
    }
    if alpha >= 2.0 * cfg.sigma {
        return Err(Error::Config(format!(
            "alpha = {alpha} >= 2 sigma = {}: modulus slope would saturate at the \
             multiplier order",
            2.0 * cfg.sigma
        )));
    }
    if 1.0 / cfg.t_grid.t_min > cfg.bandlimit as f64 / 4.0 {
        return Err(Error::Config(format!(
            "resolution guard: need 1/t_min <= N/4, got 1/t_min = {}, N = {}",
            1.0 / cfg.t_grid.t_min,
            cfg.bandlimit
        )));
    }
    let mu = cfg.multiplier.build(cfg.dim)?;
    let scan = run_scan(cfg, &mu)?;
    let ts = cfg.t_grid.values();
    let f = power_spectrum(cfg.dim, cfg.bandlimit, s)?;
    let template = row_template(cfg, &mu.name);
    let mut rows: Vec<ReportRow> = ts
        .par_iter()
        .map(|&t| -> Result<ReportRow> {
            let modulus = lp_norm_torus(&apply_torus_deficit(&f, &mu, t)?, 2.0, cfg.oversample)?;
            let tail = tail_sum(&f, t, 2.0)?;
            let mut row = template.clone();
            row.alpha = Some(alpha);
            row.t = t;
            row.lhs = modulus;
            row.rhs = tail;
            row.ratio = safe_ratio(modulus * modulus, tail);
            Ok(row)
        })
        .collect::<Result<_>>()?;
    sort_rows(&mut rows);
    let inner = &rows[1..rows.len() - 1];
    let (sm, _) = slope_fit(&inner.iter().map(|r| (r.t, r.lhs)).collect::<Vec<_>>())?;
    let (st, _) = slope_fit(&inner.iter().map(|r| (r.t, r.rhs)).collect::<Vec<_>>())?;
    let verdict = (sm - alpha).abs() <= 0.1 && (st - 2.0 * alpha).abs() <= 0.1;
    for r in rows.iter_mut() {
        r.verdict = verdict;
    }
    Ok(ExperimentReport {
        experiment: theorem_name(cfg.theorem).into(),
        rows,
        fitted_slopes: vec![
            ("modulus_slope".into(), sm),
            ("tail_slope".into(), st),
        ],
        verdict,
        constants_used: Some(scan),
        notes: vec![format!("predicted slopes: modulus {alpha}, tail {}", 2.0 * alpha)],
    })
}

// ---------------------------------------------------------------------------
// torus_abs_convergence

fn run_torus_abs_convergence(cfg: &TheoremCheckConfig) -> Result<ExperimentReport> {
    if cfg.p != 2.0 {
        return Err(Error::Config("torus_abs_convergence needs p = 2".into()));
    }
    let s = cfg
        .s
        .ok_or_else(|| Error::Config("torus_abs_convergence needs the spectrum exponent s".into()))?;
    let n = cfg.dim as f64;
    let alpha = s - n / 2.0;
    if !(alpha > 0.0) {
        return Err(Error::Config("alpha = s - n/2 must be positive".into()));
    }
    let br = beta_range(cfg.dim, 2.0, alpha)?;
    let n_max = cfg.lattice_max;
    if n_max < 100 {
        return Err(Error::Config("lattice_max must be >= 100".into()));
    }
    if (2 * n_max + 1).pow(cfg.dim as u32) > 300_000_000 {
        return Err(Error::Config("lattice too large for abs-convergence enumeration".into()));
    }
    let betas = cfg.betas.clone().unwrap_or_else(|| {
        vec![
            br.beta_min - 0.1,
            (br.beta_min + br.beta_max) / 2.0,
            br.beta_max,
        ]
    });
    // partial sums S_beta(N) = sum_{0 < ||k||_inf <= N} |k|^{-s beta}
    let checkpoints: Vec<usize> = [10usize, 32, 100, 316, 1000, 3162, 10_000]
        .into_iter()
        .filter(|&c| c <= n_max)
        .collect();
    let shells: Vec<Vec<f64>> = (1..=n_max)
        .into_par_iter()
        .map(|m| {
            // sum over the max-norm shell ||k||_inf = m, per beta exponent
            let mut acc = vec![0.0; betas.len()];
            shell_visit(cfg.dim, m as i64, &mut |k2: f64| {
                for (j, &b) in betas.iter().enumerate() {
                    acc[j] += k2.powf(-s * b / 2.0);
                }
            });
            acc
        })
        .collect();
    let template = row_template(cfg, "power_spectrum");
    let mut rows = Vec::new();
    let mut notes = vec![format!(
        "beta range ({:.6}, {:.6}]; alpha = {alpha}",
        br.beta_min, br.beta_max
    )];
    let mut verdict = true;
    for (j, &beta) in betas.iter().enumerate() {
        let mut cum = Vec::with_capacity(checkpoints.len());
        let mut run = 0.0;
        let mut ci = 0;
        for (m, shell) in shells.iter().enumerate() {
            run += shell[j];
            if ci < checkpoints.len() && m + 1 == checkpoints[ci] {
                cum.push(run);
                ci += 1;
            }
        }
        let last = *cum.last().unwrap();
        let prev_decade = cum[cum.len().saturating_sub(3)]; // two half-decades back
        let increment = (last - prev_decade) / last;
        // three-way classification: clear divergence below the range, clear
        // Cauchy behavior well inside it, borderline near beta_min is
        // informational only (desk-scale N cannot resolve slowly divergent
        // tails there)
        let (expect_ok, label) = if beta < br.beta_min - 0.05 {
            (increment > 0.05, "divergent")
        } else if beta >= br.beta_min + 0.3 {
            (increment < 0.01, "convergent")
        } else {
            (true, "borderline")
        };
        verdict &= expect_ok;
        notes.push(format!(
            "beta={beta:.4}: last-decade increment {:.4} ({label})",
            increment
        ));
        for (c, v) in checkpoints.iter().zip(&cum) {
            let mut row = template.clone();
            row.q = Some(beta);
            row.alpha = Some(alpha);
            row.t = *c as f64;
            row.lhs = *v;
            row.rhs = increment;
            row.ratio = increment;
            row.verdict = expect_ok;
            rows.push(row);
        }
    }
    sort_rows(&mut rows);
    Ok(ExperimentReport {
        experiment: theorem_name(cfg.theorem).into(),
        rows,
        fitted_slopes: vec![],
        verdict,
        constants_used: None,
        notes,
    })
}

/// Visits |k|^2 for every lattice point with ||k||_inf = m.
fn shell_visit(dim: usize, m: i64, visit: &mut impl FnMut(f64)) {
    let mut k = vec![0i64; dim];
    shell_rec(dim, m, 0, false, &mut k, visit);
}

fn shell_rec(
    dim: usize,
    m: i64,
    d: usize,
    pinned: bool,
    k: &mut Vec<i64>,
    visit: &mut impl FnMut(f64),
) {
    if d == dim {
        if pinned {
            let k2: i64 = k.iter().map(|x| x * x).sum();
            visit(k2 as f64);
        }
        return;
    }
    let remaining_can_pin = d + 1 < dim;
    for v in -m..=m {
        k[d] = v;
        let now_pinned = pinned || v.abs() == m;
        if now_pinned || remaining_can_pin {
            shell_rec(dim, m, d + 1, now_pinned, k, visit);
        }
    }
}

// ---------------------------------------------------------------------------
// sharpness

fn run_sharpness(cfg: &TheoremCheckConfig) -> Result<ExperimentReport> {
    let gamma = cfg
        .gamma
        .ok_or_else(|| Error::Config("sharpness needs gamma".into()))?;
    let n = cfg.dim as f64;
    let p = cfg.p;
    if !(n / p - 1.0 < gamma && gamma < n / p) {
        return Err(Error::Config(format!(
            "sharpness needs n/p - 1 < gamma < n/p, got gamma={gamma} for n={n}, p={p}"
        )));
    }
    let f = make_titchmarsh_profile(cfg.dim, gamma)?;
    let template = row_template(cfg, "titchmarsh");
    let mut rows = Vec::new();
    let mut notes = Vec::new();

    // (a) modulus slope n/p - gamma
    let ts = crate::multiplier::log_grid(1e-3, 1e-1, 7);
    let moduli: Vec<f64> = ts
        .par_iter()
        .map(|&t| modulus_sphere_mean(&f, p, t, 50.0))
        .collect::<Result<_>>()?;
    let pts: Vec<(f64, f64)> = ts[1..ts.len() - 1]
        .iter()
        .zip(&moduli[1..ts.len() - 1])
        .map(|(&t, &m)| (t, m))
        .collect();
    let (slope_a, _) = slope_fit(&pts)?;
    let target_a = n / p - gamma;
    let ok_a = (slope_a - target_a).abs() <= 0.05;

    // (b) transform slope gamma - n on lambda in [10, 1e3]
    let lam_b = crate::multiplier::log_grid(10.0, 1e3, 9);
    let ft_b = radial_fourier(&f, &lam_b, 1e3, &RadialGrid::default())?;
    let pts_b: Vec<(f64, f64)> = ft_b
        .lambdas
        .iter()
        .zip(&ft_b.values)
        .map(|(&l, &v)| (l, v.abs()))
        .collect();
    let (slope_b, _) = slope_fit(&pts_b)?;
    let target_b = gamma - n;
    let ok_b = (slope_b - target_b).abs() <= 0.05;

    // (c) integrability boundary: log divergence at beta* = n/(n-gamma),
    // convergence just above
    let beta_star = n / (n - gamma);
    let beta_above = beta_star + 0.15;
    let grid_c = crate::multiplier::log_grid(1.0, 1e3, 151);
    let ft_c = radial_fourier(&f, &grid_c, 1e3, &RadialGrid::default())?;
    // Lambda nodes every 0.2 decades from 10 to 1e3 (grid indices 50..150)
    let lam_idx: Vec<usize> = (50..=150).step_by(10).collect();
    let partial_star: Vec<f64> = lam_idx
        .iter()
        .map(|&i| integrability_partial(&ft_c, beta_star, grid_c[i]))
        .collect::<Result<_>>()?;
    let partial_above: Vec<f64> = lam_idx
        .iter()
        .map(|&i| integrability_partial(&ft_c, beta_above, grid_c[i]))
        .collect::<Result<_>>()?;
    // linear fit of I(Lambda) against ln Lambda
    let r2_log = {
        let xs: Vec<f64> = lam_idx.iter().map(|&i| grid_c[i].ln()).collect();
        let ys = &partial_star;
        let m = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / m;
        let my = ys.iter().sum::<f64>() / m;
        let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let slope = sxy / sxx;
        let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
        let ss_res: f64 = xs
            .iter()
            .zip(ys)
            .map(|(x, y)| {
                let fit = my + slope * (x - mx);
                (y - fit) * (y - fit)
            })
            .sum();
        1.0 - ss_res / syy
    };
    let ok_c1 = r2_log >= 0.99;
    let last = *partial_above.last().unwrap();
    let decade_back = partial_above[partial_above.len() - 6]; // 1.2... no: 5 steps of 0.2 decades
    let increment = (last - decade_back) / last;
    let ok_c2 = increment < 0.01;
    if !ok_c2 {
        // the partial integral converges like Lambda^{-delta} with
        // delta = (n - gamma) beta - n; at beta* + 0.15 that is tiny, so the
        // < 1% target needs astronomically large Lambda
        let delta = (n - gamma) * beta_above - n;
        notes.push(format!(
            "convergence check above beta*: last-decade increment {increment:.4} >= 0.01; \
             tail decays like Lambda^(-{delta:.3}), so the 1% target needs \
             Lambda ~ 10^{:.0}, far beyond the quadrature horizon 1e3",
            2.0 / delta
        ));
    }
    notes.push(format!(
        "beta* = {beta_star:.6}, log-divergence R^2 = {r2_log:.6}"
    ));

    for (&t, &m) in ts.iter().zip(&moduli) {
        let mut row = template.clone();
        row.alpha = Some(gamma);
        row.t = t;
        row.lhs = m;
        row.rhs = t.powf(target_a);
        row.ratio = safe_ratio(m, t.powf(target_a));
        row.verdict = ok_a;
        rows.push(row);
    }
    for (&l, &v) in ft_b.lambdas.iter().zip(&ft_b.values) {
        let mut row = template.clone();
        row.alpha = Some(gamma);
        row.seed = cfg.seed + 1; // distinguish the series in the sort order
        row.t = l;
        row.lhs = v.abs();
        row.rhs = l.powf(target_b);
        row.ratio = safe_ratio(v.abs(), l.powf(target_b));
        row.verdict = ok_b;
        rows.push(row);
    }
    for ((&i, &a), &b) in lam_idx.iter().zip(&partial_star).zip(&partial_above) {
        let mut row = template.clone();
        row.alpha = Some(gamma);
        row.seed = cfg.seed + 2;
        row.q = Some(beta_star);
        row.t = grid_c[i];
        row.lhs = a;
        row.rhs = b;
        row.ratio = safe_ratio(a, b);
        row.verdict = ok_c1 && ok_c2;
        rows.push(row);
    }
    sort_rows(&mut rows);
    let verdict = ok_a && ok_b && ok_c1 && ok_c2;
    Ok(ExperimentReport {
        experiment: theorem_name(cfg.theorem).into(),
        rows,
        fitted_slopes: vec![
            ("modulus_slope".into(), slope_a),
            ("transform_slope".into(), slope_b),
            ("log_divergence_r2".into(), r2_log),
            ("tail_decade_increment".into(), increment),
        ],
        verdict,
        constants_used: None,
        notes,
    })
}
