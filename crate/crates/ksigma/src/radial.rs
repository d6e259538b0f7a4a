//! Radial functions on R^n: the spherical mean operator by quadrature,
//! radial L^p norms, the radial Fourier transform through the j_nu kernel,
//! and the Titchmarsh-style sharpness profile 1/(r^gamma + r^n).
//!
//! All radial integrals run on log-spaced composite Gauss panels (default 48
//! panels per decade, order 16); oscillatory transforms cap the panel width
//! at 3/lambda so the kernel stays resolved (> 30 nodes per period).

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::special::{self, rule16};

/// A radial function f(x) = f~(|x|) on R^n.
#[derive(Clone)]
pub struct RadialProfile {
    pub dim: usize,
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    /// Power-law hint near 0: |f~(r)| <= C r^{-gamma} with gamma < dim.
    pub singular_exponent: Option<f64>,
}

impl std::fmt::Debug for RadialProfile {
    fn fmt(&self, w: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        w.debug_struct("RadialProfile")
            .field("dim", &self.dim)
            .field("singular_exponent", &self.singular_exponent)
            .finish()
    }
}

impl RadialProfile {
    pub fn new(dim: usize, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Domain("radial profile needs dim >= 1".into()));
        }
        Ok(Self {
            dim,
            f: Arc::new(f),
            singular_exponent: None,
        })
    }

    pub fn with_singularity(mut self, gamma: f64) -> Self {
        self.singular_exponent = Some(gamma);
        self
    }

    pub fn eval(&self, r: f64) -> f64 {
        (self.f)(r)
    }
}

/// The profile r -> 1/(r^gamma + r^n): decays like r^{-n}, blows up like
/// r^{-gamma} at the origin.
pub fn make_titchmarsh_profile(n: usize, gamma: f64) -> Result<RadialProfile> {
    if !(gamma > 0.0 && gamma < n as f64) {
        return Err(Error::Domain(format!(
            "titchmarsh profile needs 0 < gamma < n, got gamma={gamma}, n={n}"
        )));
    }
    let nf = n as f64;
    Ok(RadialProfile::new(n, move |r: f64| 1.0 / (r.powf(gamma) + r.powf(nf)))?
        .with_singularity(gamma))
}

/// Sampled radial Fourier transform F(lambda) = f^(lambda).
#[derive(Debug, Clone, Serialize)]
pub struct ShellTransform {
    pub dim: usize,
    pub lambdas: Vec<f64>,
    pub values: Vec<f64>,
}

impl ShellTransform {
    pub fn new(dim: usize, lambdas: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if lambdas.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: lambdas.len(),
                got: values.len(),
            });
        }
        if lambdas.windows(2).any(|w| w[0] >= w[1]) || lambdas.iter().any(|&l| l < 0.0) {
            return Err(Error::Domain(
                "shell transform grid must be nonnegative and strictly increasing".into(),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("shell transform values must be finite".into()));
        }
        Ok(Self { dim, lambdas, values })
    }

    /// CSV rows "lambda,value" with a header, for plotting.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("lambda,value\n");
        for (l, v) in self.lambdas.iter().zip(&self.values) {
            s.push_str(&format!("{l},{v}\n"));
        }
        s
    }
}

/// Quadrature layout for the radial integrals.
#[derive(Debug, Clone, Copy)]
pub struct RadialGrid {
    pub r_min: f64,
    pub panels_per_decade: usize,
}

impl Default for RadialGrid {
    fn default() -> Self {
        Self {
            r_min: 1e-12,
            panels_per_decade: 48,
        }
    }
}

/// Geometric panel edges from a to b.
fn log_edges(a: f64, b: f64, per_decade: usize) -> Vec<f64> {
    let growth = 10f64.powf(1.0 / per_decade as f64);
    let mut edges = vec![a];
    let mut r = a;
    while r < b {
        r = (r * growth).min(b);
        edges.push(r);
    }
    edges
}

/// Geometric edges capped at linear width 3/lambda once panels outgrow the
/// kernel period, so oscillations of j_nu(lambda r) stay resolved.
fn oscillatory_edges(a: f64, b: f64, per_decade: usize, lambda: f64) -> Result<Vec<f64>> {
    let growth = 10f64.powf(1.0 / per_decade as f64);
    let cap = if lambda > 0.0 { 3.0 / lambda } else { f64::INFINITY };
    let estimate = (b - a) / cap;
    if estimate > 3e6 {
        return Err(Error::Accuracy(format!(
            "oscillatory quadrature needs ~{estimate:.0} panels at lambda={lambda}; \
             reduce lambda or r_max"
        )));
    }
    let mut edges = vec![a];
    let mut r = a;
    while r < b {
        r = (r * growth).min(r + cap).min(b);
        edges.push(r);
    }
    Ok(edges)
}

/// Composite order-16 Gauss integral over the given panel edges,
/// parallelized over panels with a deterministic ordered reduction.
fn integrate_edges(edges: &[f64], f: impl Fn(f64) -> f64 + Sync) -> f64 {
    let rule = rule16();
    let partial: Vec<f64> = edges
        .par_windows(2)
        .map(|w| rule.integrate(w[0], w[1], &f))
        .collect();
    partial.iter().sum()
}

/// theta-panel edges for the spherical mean: geometric grading toward
/// theta = 0, where the integrand argument approaches |r - t| and a
/// singular profile concentrates.
fn theta_edges() -> Vec<f64> {
    let mut edges = vec![0.0];
    edges.extend(log_edges(1e-10 * std::f64::consts::PI, std::f64::consts::PI, 8));
    edges
}

/// M^t f at radius r: the average of f over the sphere of radius t centered
/// at a point with |x| = r. For n >= 2 this is the theta-integral against
/// sin^{n-2}; for n = 1 the two-point symmetric average. The weight
/// normalization is computed with the same panels, so constants average
/// exactly to themselves.
pub fn spherical_mean_radial(f: &RadialProfile, t: f64, r: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain("spherical mean needs t > 0".into()));
    }
    if r < 0.0 {
        return Err(Error::Domain("spherical mean needs r >= 0".into()));
    }
    if f.dim == 1 {
        return Ok(0.5 * (f.eval((r + t).abs()) + f.eval((r - t).abs())));
    }
    let pw = (f.dim - 2) as f64; // sin^{n-2} weight
    let edges = theta_edges();
    let rule = rule16();
    let mut num = 0.0;
    let mut den = 0.0;
    for w in edges.windows(2) {
        num += rule.integrate(w[0], w[1], |th| {
            let arg = (r * r + t * t - 2.0 * r * t * th.cos()).max(1e-24).sqrt();
            f.eval(arg) * th.sin().powf(pw)
        });
        den += rule.integrate(w[0], w[1], |th| th.sin().powf(pw));
    }
    Ok(num / den)
}

/// [omega_{n-1} int_{r_min}^{r_max} |f~(r)|^p r^{n-1} dr]^{1/p}, truncated
/// at both ends of the log-panel grid. Both truncation errors are power-law
/// small: below r_min the integrand is ~ r^{n-1-gamma p} (integrable by the
/// divergence guard), beyond r_max the caller chooses the support.
pub fn lp_norm_radial(f: &RadialProfile, p: f64, r_max: f64, grid: &RadialGrid) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::Domain("L^p norm needs p >= 1".into()));
    }
    if !(grid.r_min > 0.0 && grid.r_min < r_max) {
        return Err(Error::Domain("need 0 < r_min < r_max".into()));
    }
    let n = f.dim as f64;
    if let Some(gamma) = f.singular_exponent {
        if gamma * p >= n {
            return Err(Error::Divergence(format!(
                "|f|^p r^(n-1) ~ r^(n-1-{:.3}) at 0 is not integrable",
                gamma * p
            )));
        }
    }
    let edges = log_edges(grid.r_min, r_max, grid.panels_per_decade);
    let integral = integrate_edges(&edges, |r| f.eval(r).abs().powf(p) * r.powf(n - 1.0));
    let (omega, _) = special::unit_sphere_measures(f.dim)?;
    Ok((omega * integral).powf(1.0 / p))
}

/// F(lambda) = omega_{n-1} int_0^{r_max} f~(r) j_nu(lambda r) r^{n-1} dr,
/// nu = (n-2)/2, on the given lambda grid. Truncation at r_max: for
/// profiles decaying like r^{-n} the omitted oscillatory tail is
/// O(lambda^{-(n-1)/2} r_max^{-(n-1)/2}), negligible against the head at
/// the large lambda the sharpness experiments probe.
pub fn radial_fourier(
    f: &RadialProfile,
    lambdas: &[f64],
    r_max: f64,
    grid: &RadialGrid,
) -> Result<ShellTransform> {
    if lambdas.is_empty() {
        return Err(Error::Domain("radial_fourier needs a nonempty grid".into()));
    }
    let n = f.dim as f64;
    let nu = (n - 2.0) / 2.0;
    let (omega, _) = special::unit_sphere_measures(f.dim)?;
    // fail fast on the largest lambda's panel budget
    let max_lambda = lambdas.iter().cloned().fold(0.0, f64::max);
    oscillatory_edges(grid.r_min, r_max, grid.panels_per_decade, max_lambda)?;
    let values: Vec<f64> = lambdas
        .par_iter()
        .map(|&lam| {
            let edges = oscillatory_edges(grid.r_min, r_max, grid.panels_per_decade, lam)?;
            let rule = rule16();
            let mut acc = 0.0;
            for w in edges.windows(2) {
                acc += rule.integrate(w[0], w[1], |r| {
                    f.eval(r) * special::j_alpha_fast(nu, lam * r) * r.powf(n - 1.0)
                });
            }
            Ok(omega * acc)
        })
        .collect::<Result<_>>()?;
    ShellTransform::new(f.dim, lambdas.to_vec(), values)
}

/// || M^t f - f ||_p over the truncated ball r <= r_max, by nesting the
/// spherical mean inside the radial norm panels. The log grading puts most
/// panels below ~t, where the difference transitions.
pub fn modulus_sphere_mean(f: &RadialProfile, p: f64, t: f64, r_max: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain("modulus needs t > 0".into()));
    }
    let g = {
        let inner = f.clone();
        RadialProfile {
            dim: f.dim,
            singular_exponent: f.singular_exponent,
            f: Arc::new(move |r: f64| {
                spherical_mean_radial(&inner, t, r).unwrap_or(f64::NAN) - inner.eval(r)
            }),
        }
    };
    let grid = RadialGrid {
        r_min: 1e-8 * t,
        panels_per_decade: 48,
    };
    lp_norm_radial(&g, p, r_max, &grid)
}

/// int_1^Lambda |F(lambda)|^beta lambda^{n-1} d lambda on the sampled
/// transform, by Simpson in log-lambda (exact when the integrand is a pure
/// power matching the measure). Requires a log-uniform grid with nodes at
/// 1 and Lambda.
pub fn integrability_partial(ft: &ShellTransform, beta: f64, lambda_max: f64) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(Error::Domain("integrability needs beta > 0".into()));
    }
    if lambda_max < 1.0 {
        return Err(Error::Domain("Lambda must be >= 1".into()));
    }
    let near = |a: f64, b: f64| (a - b).abs() <= 1e-9 * b.max(1.0);
    let i0 = ft
        .lambdas
        .iter()
        .position(|&l| near(l, 1.0))
        .ok_or_else(|| Error::Domain("grid must contain lambda = 1".into()))?;
    let i1 = ft
        .lambdas
        .iter()
        .position(|&l| near(l, lambda_max))
        .ok_or_else(|| Error::Domain(format!("grid must contain Lambda = {lambda_max}")))?;
    if i1 < i0 {
        return Err(Error::Domain("Lambda must lie above 1 on the grid".into()));
    }
    let u: Vec<f64> = ft.lambdas[i0..=i1].iter().map(|l| l.ln()).collect();
    let m = u.len() - 1;
    if m == 0 {
        return Ok(0.0);
    }
    let h = (u[m] - u[0]) / m as f64;
    if u.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h.max(1e-12)) {
        return Err(Error::Config(
            "integrability_partial needs a log-uniform lambda grid".into(),
        ));
    }
    // integrand in u = ln lambda, including the lambda from d lambda
    let g: Vec<f64> = (i0..=i1)
        .map(|i| ft.values[i].abs().powf(beta) * ft.lambdas[i].powf(ft.dim as f64))
        .collect();
    Ok(simpson_uniform(&g, h))
}

/// Composite Simpson on uniformly spaced samples; odd interval counts close
/// with a 3/8 panel.
fn simpson_uniform(g: &[f64], h: f64) -> f64 {
    let m = g.len() - 1;
    match m {
        0 => 0.0,
        1 => 0.5 * h * (g[0] + g[1]),
        _ => {
            let (even_part, rest38) = if m % 2 == 0 { (m, false) } else { (m - 3, true) };
            let mut acc = 0.0;
            let mut i = 0;
            while i + 2 <= even_part {
                acc += h / 3.0 * (g[i] + 4.0 * g[i + 1] + g[i + 2]);
                i += 2;
            }
            if rest38 {
                let j = m - 3;
                acc += 3.0 * h / 8.0 * (g[j] + 3.0 * g[j + 1] + 3.0 * g[j + 2] + g[j + 3]);
            }
            acc
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::spherical_bessel_j;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn grid() -> RadialGrid {
        RadialGrid::default()
    }

    fn log_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| (a.ln() + (b.ln() - a.ln()) * i as f64 / (n - 1) as f64).exp())
            .collect()
    }

    fn slope(xs: &[f64], ys: &[f64]) -> f64 {
        // least-squares slope of ln y against ln x
        let n = xs.len() as f64;
        let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
        let ly: Vec<f64> = ys.iter().map(|y| y.abs().ln()).collect();
        let mx = lx.iter().sum::<f64>() / n;
        let my = ly.iter().sum::<f64>() / n;
        let num: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
        let den: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
        num / den
    }

    #[test]
    fn titchmarsh_profile_examples() {
        // near 0 the ratio is 1/(1 + r^{n-gamma}); at r = 1e-8 the 1e-6
        // agreement needs n - gamma > 3/4
        for (n, gamma) in [(1usize, 0.2f64), (2, 0.7), (3, 1.4)] {
            let f = make_titchmarsh_profile(n, gamma).unwrap();
            assert_abs_diff_eq!(f.eval(1.0), 0.5, epsilon = 1e-15);
            assert_abs_diff_eq!(f.eval(1e-8) * 1e-8f64.powf(gamma), 1.0, epsilon = 1e-6);
        }
        assert!(make_titchmarsh_profile(2, 0.0).is_err());
        assert!(make_titchmarsh_profile(2, 2.0).is_err());
        // n=2, gamma=0.7 is square integrable
        let f = make_titchmarsh_profile(2, 0.7).unwrap();
        let l2 = lp_norm_radial(&f, 2.0, 1e6, &grid()).unwrap();
        assert!(l2.is_finite() && l2 > 0.0);
        // gamma p >= n diverges
        assert!(matches!(
            lp_norm_radial(&f, 3.0, 1e3, &grid()),
            Err(Error::Divergence(_))
        ));
    }

    #[test]
    fn spherical_mean_closed_forms() {
        for n in [1usize, 2, 3, 4] {
            let one = RadialProfile::new(n, |_| 1.0).unwrap();
            let sq = RadialProfile::new(n, |r| r * r).unwrap();
            for (r, t) in [(0.0, 0.5), (0.3, 0.2), (1.0, 1.0), (2.0, 0.1)] {
                assert_abs_diff_eq!(
                    spherical_mean_radial(&one, t, r).unwrap(),
                    1.0,
                    epsilon = 1e-12
                );
                assert_abs_diff_eq!(
                    spherical_mean_radial(&sq, t, r).unwrap(),
                    r * r + t * t,
                    epsilon = 1e-10
                );
            }
        }
        assert!(spherical_mean_radial(&RadialProfile::new(2, |_| 1.0).unwrap(), 0.0, 1.0).is_err());
    }

    #[test]
    fn spherical_mean_matches_dim3_oracle() {
        // n = 3: M^t f(r) = (1/(2rt)) int_{|r-t|}^{r+t} s f(s) ds
        let f = make_titchmarsh_profile(3, 1.2).unwrap();
        for (r, t) in [(0.7, 0.3), (1.5, 0.4), (0.9, 0.85)] {
            let mean = spherical_mean_radial(&f, t, r).unwrap();
            let (a, b) = ((r - t as f64).abs(), r + t);
            // dense composite Simpson oracle
            let m = 40_000;
            let h = (b - a) / m as f64;
            let mut acc = 0.0;
            for i in 0..=m {
                let s = a + i as f64 * h;
                let w = if i == 0 || i == m {
                    1.0
                } else if i % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                acc += w * s * f.eval(s);
            }
            let oracle = acc * h / 3.0 / (2.0 * r * t);
            assert!((mean - oracle).abs() < 1e-8, "r={r} t={t}: {mean} vs {oracle}");
        }
    }

    #[test]
    fn spherical_mean_averaging_bounds() {
        // decreasing profiles: f(r+t) <= mean <= f(|r-t|); positivity
        let profiles: Vec<RadialProfile> = vec![
            RadialProfile::new(2, |r| (-r).exp()).unwrap(),
            RadialProfile::new(2, |r| 1.0 / (1.0 + r * r)).unwrap(),
            RadialProfile::new(3, |r| (-r * r).exp()).unwrap(),
            RadialProfile::new(3, |r| 1.0 / (1.0 + r)).unwrap(),
            make_titchmarsh_profile(2, 0.5).unwrap(),
            make_titchmarsh_profile(3, 1.0).unwrap(),
            RadialProfile::new(4, |r| (1.0 + r).powf(-2.0)).unwrap(),
            RadialProfile::new(2, |r| (-r).exp() * 2.0).unwrap(),
            RadialProfile::new(3, |r| (1.0 + r * r).powf(-1.5)).unwrap(),
            RadialProfile::new(2, |r| (2.0 + r).recip()).unwrap(),
        ];
        let pairs = [
            (0.2, 0.1),
            (0.5, 0.3),
            (1.0, 0.2),
            (1.3, 0.9),
            (2.0, 0.5),
            (0.1, 0.05),
            (3.0, 1.0),
            (0.8, 0.7),
            (1.7, 0.05),
            (2.5, 2.0),
        ];
        for f in &profiles {
            for &(r, t) in &pairs {
                let mean = spherical_mean_radial(f, t, r).unwrap();
                assert!(mean >= 0.0);
                let lo = f.eval(r + t);
                let hi = f.eval((r - t as f64).abs().max(1e-12));
                assert!(
                    mean >= lo - 1e-9 && mean <= hi + 1e-9,
                    "r={r} t={t}: {lo} <= {mean} <= {hi}"
                );
            }
        }
    }

    #[test]
    fn lp_norm_examples() {
        // indicator of the unit ball: norm = Omega_n^{1/p}
        for n in [1usize, 2, 3] {
            let ind = RadialProfile::new(n, |r| if r < 1.0 { 1.0 } else { 0.0 }).unwrap();
            let (omega, ball) = special::unit_sphere_measures(n).unwrap();
            assert!(omega > 0.0);
            for p in [1.0, 2.0, 3.5] {
                let norm = lp_norm_radial(&ind, p, 1.0, &grid()).unwrap();
                assert_abs_diff_eq!(norm, ball.powf(1.0 / p), epsilon = 1e-10);
            }
        }
        // scaling: r -> r/a multiplies the norm by a^{n/p}
        let f = RadialProfile::new(3, |r| (-r * r).exp()).unwrap();
        let a = 2.5f64;
        let fa = RadialProfile::new(3, move |r| (-(r / a) * (r / a)).exp()).unwrap();
        for p in [1.0, 2.0] {
            let base = lp_norm_radial(&f, p, 30.0, &grid()).unwrap();
            let scaled = lp_norm_radial(&fa, p, 30.0 * a, &grid()).unwrap();
            assert!((scaled - a.powf(3.0 / p) * base).abs() < 1e-8 * scaled);
        }
        // Gaussian moment oracle: ||e^{-r^2/4}||_2 in R^3
        let g = RadialProfile::new(3, |r| (-r * r / 4.0).exp()).unwrap();
        let l2 = lp_norm_radial(&g, 2.0, 40.0, &grid()).unwrap();
        let oracle = (4.0 * PI * PI.sqrt() / (4.0 * 0.5f64.powf(1.5))).sqrt();
        assert_abs_diff_eq!(l2, oracle, epsilon = 1e-8);
    }

    #[test]
    fn radial_fourier_gaussian() {
        // H~(r) = (2^n pi^{n/2})^{-1} e^{-r^2/4} has transform e^{-lambda^2}
        for n in [1usize, 2, 3] {
            let c = 1.0 / (2f64.powi(n as i32) * PI.powf(n as f64 / 2.0));
            let h = RadialProfile::new(n, move |r| c * (-r * r / 4.0).exp()).unwrap();
            let lambdas = [0.0, 0.3, 1.0, 2.0, 4.0];
            let ft = radial_fourier(&h, &lambdas, 50.0, &grid()).unwrap();
            for (l, v) in ft.lambdas.iter().zip(&ft.values) {
                assert!((v - (-l * l).exp()).abs() < 1e-8, "n={n} lambda={l}");
            }
        }
    }

    #[test]
    fn radial_fourier_ball_indicator() {
        // normalized ball indicator transforms to j_{nu+1}
        for n in [2usize, 3] {
            let (_, ball) = special::unit_sphere_measures(n).unwrap();
            let f = RadialProfile::new(n, move |r| if r < 1.0 { 1.0 / ball } else { 0.0 }).unwrap();
            let lambdas = [0.5, 1.0, 3.0, 10.0, 30.0];
            let ft = radial_fourier(&f, &lambdas, 1.0, &grid()).unwrap();
            let nu = (n as f64 - 2.0) / 2.0;
            for (l, v) in ft.lambdas.iter().zip(&ft.values) {
                let expect = spherical_bessel_j(nu + 1.0, *l).unwrap();
                assert!((v - expect).abs() < 1e-8, "n={n} lambda={l}: {v} vs {expect}");
            }
        }
    }

    #[test]
    fn radial_fourier_zero_frequency_is_total_mass() {
        let f = RadialProfile::new(2, |r| (-r).exp()).unwrap();
        let ft = radial_fourier(&f, &[0.0], 60.0, &grid()).unwrap();
        // omega_1 int_0^inf e^{-r} r dr = 2 pi
        assert_abs_diff_eq!(ft.values[0], 2.0 * PI, epsilon = 1e-9);
    }

    #[test]
    fn multiplier_identity_end_to_end() {
        // F(M^t f) = j_nu(t lambda) F(f), two independent quadratures
        let n = 3usize;
        let f = RadialProfile::new(n, |r| (-r * r / 4.0).exp()).unwrap();
        let t = 0.8;
        let mf = {
            let inner = f.clone();
            RadialProfile::new(n, move |r| spherical_mean_radial(&inner, t, r).unwrap()).unwrap()
        };
        let lambdas = [0.1, 0.5, 2.0, 7.0, 20.0];
        let base = radial_fourier(&f, &lambdas, 30.0, &grid()).unwrap();
        let moved = radial_fourier(&mf, &lambdas, 30.0, &grid()).unwrap();
        let nu = (n as f64 - 2.0) / 2.0;
        for i in 0..lambdas.len() {
            let expect = spherical_bessel_j(nu, t * lambdas[i]).unwrap() * base.values[i];
            assert!(
                (moved.values[i] - expect).abs() < 1e-6,
                "lambda={}: {} vs {expect}",
                lambdas[i],
                moved.values[i]
            );
        }
    }

    #[test]
    fn titchmarsh_transform_asymptotics() {
        // F(lambda) ~ lambda^{gamma-n} for large lambda
        let (n, gamma) = (2usize, 0.7);
        let f = make_titchmarsh_profile(n, gamma).unwrap();
        let lambdas = log_grid(10.0, 1e3, 9);
        let ft = radial_fourier(&f, &lambdas, 1e3, &grid()).unwrap();
        let s = slope(&ft.lambdas, &ft.values);
        assert!((s - (gamma - n as f64)).abs() < 0.05, "slope {s}");
    }

    #[test]
    fn modulus_examples() {
        let one = RadialProfile::new(2, |_| 1.0).unwrap();
        assert!(modulus_sphere_mean(&one, 2.0, 0.1, 10.0).unwrap() < 1e-10);
        // f = r^2: M^t f - f = t^2 everywhere
        for n in [2usize, 3] {
            let sq = RadialProfile::new(n, |r| r * r).unwrap();
            let (_, ball) = special::unit_sphere_measures(n).unwrap();
            for p in [1.0, 2.0] {
                let t = 0.05;
                let m = modulus_sphere_mean(&sq, p, t, 1.0).unwrap();
                assert!((m - t * t * ball.powf(1.0 / p)).abs() < 1e-8 * m);
            }
        }
    }

    #[test]
    fn modulus_titchmarsh_slope() {
        // || M^t f - f ||_2 = O(t^{n/p - gamma}): slope n/p - gamma = 0.30
        let (n, gamma, p) = (2usize, 0.7, 2.0);
        let f = make_titchmarsh_profile(n, gamma).unwrap();
        let ts = log_grid(1e-3, 1e-1, 7);
        let ms: Vec<f64> = ts
            .iter()
            .map(|&t| modulus_sphere_mean(&f, p, t, 50.0).unwrap())
            .collect();
        let s = slope(&ts, &ms);
        let expect = n as f64 / p - gamma;
        assert!((s - expect).abs() < 0.05, "slope {s} vs {expect}");
    }

    #[test]
    fn integrability_partial_powers() {
        for n in [1usize, 2, 3] {
            let lambdas = log_grid(1.0, 1e3, 161);
            let values: Vec<f64> = lambdas.iter().map(|l| l.powf(-(n as f64))).collect();
            let ft = ShellTransform::new(n, lambdas, values).unwrap();
            // beta = 1: integrand is exactly 1 in log space -> ln Lambda
            let i1 = integrability_partial(&ft, 1.0, 1e3).unwrap();
            assert!((i1 - 1e3f64.ln()).abs() < 1e-6);
            // beta = 2: (1 - Lambda^{-n})/n
            let i2 = integrability_partial(&ft, 2.0, 1e3).unwrap();
            let expect = (1.0 - 1e-3f64.powi(n as i32)) / n as f64;
            assert!((i2 - expect).abs() < 1e-6, "n={n}: {i2} vs {expect}");
            // empty interval
            assert_abs_diff_eq!(integrability_partial(&ft, 1.0, 1.0).unwrap(), 0.0);
            // grid must cover Lambda
            assert!(integrability_partial(&ft, 1.0, 1e4).is_err());
        }
    }

    #[test]
    fn shell_transform_validation_and_csv() {
        assert!(ShellTransform::new(2, vec![1.0, 1.0], vec![0.0, 0.0]).is_err());
        assert!(ShellTransform::new(2, vec![1.0, 2.0], vec![f64::NAN, 0.0]).is_err());
        let ft = ShellTransform::new(2, vec![1.0, 2.0], vec![0.5, 0.25]).unwrap();
        let csv = ft.to_csv();
        assert!(csv.starts_with("lambda,value\n"));
        assert_eq!(csv.lines().count(), 3);
    }
}
