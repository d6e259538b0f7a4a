//! The measure catalog as closed-form multiplier symbols, their
//! compositions (powers, binomial iterates, dilation combinations), and the
//! scan that measures the two-sided constants of
//! `|1 - mu^(xi)| ~ min{1, |xi|^(2 sigma)}`.
//!
//! Every multiplier carries two evaluators: the symbol itself and a
//! dedicated deficit `1 - mu^(xi)`. The deficit route matters: combined
//! symbols cancel to `|xi|^(2l)` at the origin, far below what a naive
//! difference of near-unit terms can resolve in f64.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::special::{self, binomial, one_minus_j_dd, one_minus_j_series, SERIES_SWITCHOVER};

pub(crate) fn euclid_norm(xi: &[f64]) -> f64 {
    xi.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Which catalog measure a symbol came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MultiplierKind {
    Sphere,
    Ball,
    Cube,
    Gauss,
    Wave,
    Polytope,
}

impl std::str::FromStr for MultiplierKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "sphere" => Self::Sphere,
            "ball" => Self::Ball,
            "cube" => Self::Cube,
            "gauss" => Self::Gauss,
            "wave" => Self::Wave,
            "polytope" => Self::Polytope,
            other => return Err(Error::Config(format!("unknown multiplier kind '{other}'"))),
        })
    }
}

/// One flat (n-1)-face of a polytope surface: `x(u) = origin + sum u_i axes_i`
/// with `u` in the reference box `[-1/2, 1/2]^(n-1)`.
#[derive(Debug, Clone)]
pub struct Face {
    pub origin: Vec<f64>,
    pub axes: Vec<Vec<f64>>,
}

impl Face {
    /// Area = sqrt(det(A^T A)), the Gram determinant of the spanning axes.
    pub fn area(&self) -> f64 {
        let m = self.axes.len();
        let mut g = vec![vec![0.0; m]; m];
        for i in 0..m {
            for j in 0..m {
                g[i][j] = self.axes[i].iter().zip(&self.axes[j]).map(|(a, b)| a * b).sum();
            }
        }
        det(&mut g).abs().sqrt()
    }
}

/// LU determinant with partial pivoting; matrices here are tiny.
fn det(a: &mut [Vec<f64>]) -> f64 {
    let n = a.len();
    let mut d = 1.0;
    for c in 0..n {
        let piv = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        if a[piv][c].abs() < 1e-300 {
            return 0.0;
        }
        if piv != c {
            a.swap(piv, c);
            d = -d;
        }
        d *= a[c][c];
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                a[r][k] -= f * a[c][k];
            }
        }
    }
    d
}

/// A centrally symmetric piecewise-flat surface given by its faces.
#[derive(Debug, Clone)]
pub struct PolytopeSurface {
    pub faces: Vec<Face>,
    pub total_area: f64,
}

impl PolytopeSurface {
    /// Builds the surface, checking central symmetry (the face set must be
    /// closed under x -> -x, so the symbol is real).
    pub fn new(faces: Vec<Face>) -> Result<Self> {
        if faces.is_empty() {
            return Err(Error::Config("polytope surface needs at least one face".into()));
        }
        for f in &faces {
            let found = faces.iter().any(|g| {
                let centers_opposite = f
                    .origin
                    .iter()
                    .zip(&g.origin)
                    .all(|(a, b)| (a + b).abs() < 1e-9);
                centers_opposite
                    && (f.area() - g.area()).abs() < 1e-9
                    && f.axes.iter().all(|ax| in_span(ax, &g.axes))
            });
            if !found {
                return Err(Error::Config(
                    "polytope surface is not centrally symmetric".into(),
                ));
            }
        }
        let total_area = faces.iter().map(Face::area).sum();
        Ok(Self { faces, total_area })
    }

    /// Normalized surface integral of cos(xi . x) by composite
    /// tensor-product Gauss-Legendre quadrature. Panel count per axis grows
    /// with |xi . axis| so oscillations stay resolved.
    pub fn symbol(&self, xi: &[f64]) -> f64 {
        let rule = special::rule16();
        let mut acc = 0.0;
        for face in &self.faces {
            let a0: f64 = xi.iter().zip(&face.origin).map(|(x, o)| x * o).sum();
            let freqs: Vec<f64> = face
                .axes
                .iter()
                .map(|ax| xi.iter().zip(ax).map(|(x, a)| x * a).sum())
                .collect();
            acc += face.area() * tensor_cos(rule, a0, &freqs);
        }
        acc / self.total_area
    }
}

/// Residual of projecting `v` onto span(basis) must vanish.
fn in_span(v: &[f64], basis: &[Vec<f64>]) -> bool {
    // Gram-Schmidt the basis, then subtract projections.
    let mut ortho: Vec<Vec<f64>> = Vec::new();
    for b in basis {
        let mut u = b.clone();
        for o in &ortho {
            let c: f64 = u.iter().zip(o).map(|(a, b)| a * b).sum();
            for (ui, oi) in u.iter_mut().zip(o) {
                *ui -= c * oi;
            }
        }
        let n = euclid_norm(&u);
        if n > 1e-12 {
            u.iter_mut().for_each(|x| *x /= n);
            ortho.push(u);
        }
    }
    let mut r = v.to_vec();
    for o in &ortho {
        let c: f64 = r.iter().zip(o).map(|(a, b)| a * b).sum();
        for (ri, oi) in r.iter_mut().zip(o) {
            *ri -= c * oi;
        }
    }
    euclid_norm(&r) < 1e-9 * (1.0 + euclid_norm(v))
}

/// Recursive tensor quadrature of cos(a0 + sum u_i f_i) over the reference box.
fn tensor_cos(rule: &special::QuadratureRule, a0: f64, freqs: &[f64]) -> f64 {
    match freqs.split_first() {
        None => a0.cos(),
        Some((&f0, rest)) => {
            let panels = 1 + (f0.abs() / 25.0).ceil() as usize;
            let h = 1.0 / panels as f64;
            let mut acc = 0.0;
            for p in 0..panels {
                let a = -0.5 + p as f64 * h;
                acc += rule.integrate(a, a + h, |u| tensor_cos(rule, a0 + u * f0, rest));
            }
            acc
        }
    }
}

/// Internal symbol representation; compositions stay symbolic so the
/// deficit can be evaluated stably.
#[derive(Debug, Clone)]
enum Symbol {
    /// j_alpha(|xi|): sphere (alpha = (n-2)/2), ball (alpha = n/2), wave (1/2).
    JAlpha(f64),
    /// e^{-|xi|^2}
    Gauss,
    /// Closed-form side-1 cube surface symbol.
    Cube,
    Polytope(Arc<PolytopeSurface>),
    Power { base: Box<Symbol>, l: u32 },
    Binomial { base: Box<Symbol>, l: u32 },
    DaiDitzian { base: Box<Symbol>, l: u32 },
}

impl Symbol {
    fn eval(&self, xi: &[f64]) -> f64 {
        match self {
            Symbol::JAlpha(alpha) => special::j_alpha_fast(*alpha, euclid_norm(xi)),
            Symbol::Gauss => {
                let l2: f64 = xi.iter().map(|x| x * x).sum();
                (-l2).exp()
            }
            Symbol::Cube => cube_symbol(xi),
            Symbol::Polytope(s) => s.symbol(xi),
            Symbol::Power { base, l } => base.eval(xi).powi(*l as i32),
            Symbol::Binomial { base, l } => 1.0 - (1.0 - base.eval(xi)).powi(*l as i32),
            Symbol::DaiDitzian { base, l } => {
                let c = 2.0 / binomial(2 * l, *l);
                let mut acc = 0.0;
                let mut kxi = vec![0.0; xi.len()];
                for k in 1..=*l {
                    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                    for (o, x) in kxi.iter_mut().zip(xi) {
                        *o = k as f64 * x;
                    }
                    acc += sign * binomial(2 * l, l - k) * base.eval(&kxi);
                }
                c * acc
            }
        }
    }

    /// Stable `1 - eval(xi)`.
    fn deficit(&self, xi: &[f64]) -> f64 {
        match self {
            Symbol::JAlpha(alpha) => {
                let lam = euclid_norm(xi);
                if lam <= SERIES_SWITCHOVER {
                    one_minus_j_series(*alpha, lam)
                } else {
                    1.0 - special::j_alpha_fast(*alpha, lam)
                }
            }
            Symbol::Gauss => {
                let l2: f64 = xi.iter().map(|x| x * x).sum();
                -(-l2).exp_m1()
            }
            // deficit ~ |xi|^2 here, so the naive difference loses at most
            // ~1e-16/|xi|^2 relative accuracy; acceptable for sigma = 1.
            Symbol::Cube | Symbol::Polytope(_) => 1.0 - self.eval(xi),
            Symbol::Power { base, l } => {
                // 1 - (1-d)^l expanded in d
                let d = base.deficit(xi);
                let mut acc = 0.0;
                for j in 1..=*l {
                    let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
                    acc += sign * binomial(*l, j) * d.powi(j as i32);
                }
                acc
            }
            Symbol::Binomial { base, l } => base.deficit(xi).powi(*l as i32),
            Symbol::DaiDitzian { base, l } => match base.as_ref() {
                // spherical family: exact sin^{2l} Mehler integral
                Symbol::JAlpha(alpha) => one_minus_j_dd(*alpha, *l, euclid_norm(xi))
                    .expect("valid alpha by construction"),
                // fallback: combination of base deficits; precision floor
                // ~1e-16 * l^2 |xi|^2 absolute at small |xi|
                _ => {
                    let c = 2.0 / binomial(2 * l, *l);
                    let mut acc = 0.0;
                    let mut kxi = vec![0.0; xi.len()];
                    for k in 1..=*l {
                        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                        for (o, x) in kxi.iter_mut().zip(xi) {
                            *o = k as f64 * x;
                        }
                        acc += sign * binomial(2 * l, l - k) * base.deficit(&kxi);
                    }
                    c * acc
                }
            },
        }
    }
}

/// sinc(u) = sin(u)/u, continuous at 0.
fn sinc(u: f64) -> f64 {
    if u.abs() < 1e-8 {
        1.0 - u * u / 6.0
    } else {
        u.sin() / u
    }
}

/// Normalized symbol of surface measure on the side-1 cube centered at the
/// origin: (1/n) sum_k cos(xi_k/2) prod_{l != k} sinc(xi_l/2).
fn cube_symbol(xi: &[f64]) -> f64 {
    let n = xi.len();
    let mut acc = 0.0;
    for k in 0..n {
        let mut term = (0.5 * xi[k]).cos();
        for (l, &x) in xi.iter().enumerate() {
            if l != k {
                term *= sinc(0.5 * x);
            }
        }
        acc += term;
    }
    acc / n as f64
}

/// A multiplier symbol `mu^` with its claimed smoothness order sigma.
#[derive(Debug, Clone)]
pub struct Multiplier {
    pub name: String,
    pub dim: usize,
    pub sigma: f64,
    pub is_radial: bool,
    symbol: Symbol,
}

impl Multiplier {
    /// Symbol value at a point of R^n.
    pub fn symbol(&self, xi: &[f64]) -> f64 {
        debug_assert_eq!(xi.len(), self.dim);
        self.symbol.eval(xi)
    }

    /// Stable deficit `1 - mu^(xi)`.
    pub fn deficit(&self, xi: &[f64]) -> f64 {
        debug_assert_eq!(xi.len(), self.dim);
        self.symbol.deficit(xi)
    }

    /// Radial shortcut: value at any point with |xi| = lam.
    /// Only valid when `is_radial`.
    pub fn symbol_radial(&self, lam: f64) -> f64 {
        debug_assert!(self.is_radial);
        let mut xi = vec![0.0; self.dim];
        xi[0] = lam;
        self.symbol.eval(&xi)
    }

    pub fn deficit_radial(&self, lam: f64) -> f64 {
        debug_assert!(self.is_radial);
        let mut xi = vec![0.0; self.dim];
        xi[0] = lam;
        self.symbol.deficit(&xi)
    }
}

/// Construct a catalog multiplier. All have sigma = 1.
pub fn make_multiplier(
    kind: MultiplierKind,
    dim: usize,
    params: Option<PolytopeSurface>,
) -> Result<Multiplier> {
    use MultiplierKind::*;
    let min_dim = match kind {
        Gauss | Wave => 1,
        _ => 2,
    };
    if dim < min_dim {
        return Err(Error::Domain(format!(
            "{kind:?} multiplier requires dim >= {min_dim}, got {dim}"
        )));
    }
    let nu = (dim as f64 - 2.0) / 2.0;
    let (name, symbol, is_radial) = match kind {
        Sphere => (format!("sphere{dim}"), Symbol::JAlpha(nu), true),
        Ball => (format!("ball{dim}"), Symbol::JAlpha(nu + 1.0), true),
        Gauss => (format!("gauss{dim}"), Symbol::Gauss, true),
        Wave => (format!("wave{dim}"), Symbol::JAlpha(0.5), true),
        Cube => (format!("cube{dim}"), Symbol::Cube, false),
        Polytope => {
            let surface =
                params.ok_or_else(|| Error::Config("polytope kind requires a surface".into()))?;
            if surface.faces.iter().any(|f| f.origin.len() != dim) {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: surface.faces[0].origin.len(),
                });
            }
            (
                format!("polytope{dim}"),
                Symbol::Polytope(Arc::new(surface)),
                false,
            )
        }
    };
    Ok(Multiplier {
        name,
        dim,
        sigma: 1.0,
        is_radial,
        symbol,
    })
}

/// l-fold convolution power: symbol' = symbol^l, sigma unchanged.
pub fn compose_power(mu: &Multiplier, l: u32) -> Result<Multiplier> {
    if l < 1 {
        return Err(Error::Domain("power l must be >= 1".into()));
    }
    Ok(Multiplier {
        name: format!("{}^{l}", mu.name),
        dim: mu.dim,
        sigma: mu.sigma,
        is_radial: mu.is_radial,
        symbol: Symbol::Power {
            base: Box::new(mu.symbol.clone()),
            l,
        },
    })
}

/// Binomial iterate of (I - M): 1 - symbol' = (1 - symbol)^l, sigma' = l.
pub fn compose_binomial(mu: &Multiplier, l: u32) -> Result<Multiplier> {
    if l < 1 {
        return Err(Error::Domain("binomial l must be >= 1".into()));
    }
    Ok(Multiplier {
        name: format!("binom{l}({})", mu.name),
        dim: mu.dim,
        sigma: l as f64,
        is_radial: mu.is_radial,
        symbol: Symbol::Binomial {
            base: Box::new(mu.symbol.clone()),
            l,
        },
    })
}

/// Dilation combination 2 binom(2l,l)^-1 sum (-1)^{k+1} binom(2l,l-k) symbol(k xi),
/// sigma' = l. For the sphere this is the multiplier of the V_l operator.
pub fn compose_dai_ditzian(mu: &Multiplier, l: u32) -> Result<Multiplier> {
    if l < 1 {
        return Err(Error::Domain("dai-ditzian l must be >= 1".into()));
    }
    Ok(Multiplier {
        name: format!("dd{l}({})", mu.name),
        dim: mu.dim,
        sigma: l as f64,
        is_radial: mu.is_radial,
        symbol: Symbol::DaiDitzian {
            base: Box::new(mu.symbol.clone()),
            l,
        },
    })
}

/// Measured two-sided constants for |1 - mu^| / min{1, |xi|^(2 sigma)}.
#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceScan {
    pub name: String,
    pub sigma: f64,
    pub c_lower: f64,
    pub c_upper: f64,
    pub arg_lower: Vec<f64>,
    pub arg_upper: Vec<f64>,
    pub grid_spec: String,
}

impl EquivalenceScan {
    /// A scan passes when the symbol never returns to 1 away from the origin.
    pub fn passes(&self, floor: f64) -> bool {
        self.c_lower > floor
    }
}

/// One sampled ratio, for CSV export.
#[derive(Debug, Clone, Serialize)]
pub struct ScanRow {
    pub name: String,
    pub sigma: f64,
    pub lambda: f64,
    pub direction_index: usize,
    pub ratio: f64,
}

/// Deterministic low-discrepancy unit directions in R^n.
///
/// dim 1: {e1}; dim 2: equispaced half-circle; dim 3: Fibonacci sphere;
/// higher dims: seeded normalized Gaussian vectors (fixed seed, so scans
/// are reproducible).
pub fn scan_directions(dim: usize, m: usize) -> Vec<Vec<f64>> {
    use rand::Rng;
    use rand::SeedableRng;
    match dim {
        0 => vec![],
        1 => vec![vec![1.0]],
        2 => (0..m)
            .map(|i| {
                let th = std::f64::consts::PI * (i as f64 + 0.5) / m as f64;
                vec![th.cos(), th.sin()]
            })
            .collect(),
        3 => {
            let phi = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            (0..m)
                .map(|i| {
                    let z = 1.0 - 2.0 * (i as f64 + 0.5) / m as f64;
                    let r = (1.0 - z * z).sqrt();
                    let th = phi * i as f64;
                    vec![r * th.cos(), r * th.sin(), z]
                })
                .collect()
        }
        _ => {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed_d17e);
            (0..m)
                .map(|_| {
                    loop {
                        let v: Vec<f64> = (0..dim)
                            .map(|_| {
                                let u1: f64 = rng.gen::<f64>().max(1e-12);
                                let u2: f64 = rng.gen();
                                (-2.0 * u1.ln()).sqrt()
                                    * (2.0 * std::f64::consts::PI * u2).cos()
                            })
                            .collect();
                        let n = euclid_norm(&v);
                        if n > 1e-6 {
                            return v.iter().map(|x| x / n).collect();
                        }
                    }
                })
                .collect()
        }
    }
}

/// Scan r(xi) = |1 - mu^(xi)| / min{1, |xi|^(2 sigma)} over a log radial
/// grid times a deterministic direction set; radial symbols use a single
/// direction. Returns min/max with locations.
pub fn ksigma_scan(
    mu: &Multiplier,
    sigma: f64,
    lambda_min: f64,
    lambda_max: f64,
    n_points: usize,
    n_directions: usize,
) -> Result<EquivalenceScan> {
    validate_scan_grid(sigma, lambda_min, lambda_max, n_points, n_directions)?;
    let dirs = if mu.is_radial {
        scan_directions(mu.dim, 1)
    } else {
        scan_directions(mu.dim, n_directions)
    };
    let lambdas = log_grid(lambda_min, lambda_max, n_points);
    let per_dir: Vec<(f64, Vec<f64>, f64, Vec<f64>)> = dirs
        .par_iter()
        .map(|dir| {
            let mut lo = (f64::INFINITY, Vec::new());
            let mut hi = (f64::NEG_INFINITY, Vec::new());
            let mut xi = vec![0.0; mu.dim];
            for &lam in &lambdas {
                for (x, d) in xi.iter_mut().zip(dir) {
                    *x = lam * d;
                }
                let r = mu.deficit(&xi).abs() / 1f64.min(lam.powf(2.0 * sigma));
                if r < lo.0 {
                    lo = (r, xi.clone());
                }
                if r > hi.0 {
                    hi = (r, xi.clone());
                }
            }
            (lo.0, lo.1, hi.0, hi.1)
        })
        .collect();
    let mut c_lower = (f64::INFINITY, Vec::new());
    let mut c_upper = (f64::NEG_INFINITY, Vec::new());
    for (lo, lo_at, hi, hi_at) in per_dir {
        if lo < c_lower.0 {
            c_lower = (lo, lo_at);
        }
        if hi > c_upper.0 {
            c_upper = (hi, hi_at);
        }
    }
    Ok(EquivalenceScan {
        name: mu.name.clone(),
        sigma,
        c_lower: c_lower.0,
        c_upper: c_upper.0,
        arg_lower: c_lower.1,
        arg_upper: c_upper.1,
        grid_spec: format!(
            "log lambda in [{lambda_min}, {lambda_max}] x {n_points} points x {} directions",
            dirs.len()
        ),
    })
}

/// Full per-sample rows of the same scan, for CSV export.
pub fn ksigma_scan_rows(
    mu: &Multiplier,
    sigma: f64,
    lambda_min: f64,
    lambda_max: f64,
    n_points: usize,
    n_directions: usize,
) -> Result<Vec<ScanRow>> {
    validate_scan_grid(sigma, lambda_min, lambda_max, n_points, n_directions)?;
    let dirs = if mu.is_radial {
        scan_directions(mu.dim, 1)
    } else {
        scan_directions(mu.dim, n_directions)
    };
    let lambdas = log_grid(lambda_min, lambda_max, n_points);
    let mut rows = Vec::with_capacity(dirs.len() * lambdas.len());
    for (di, dir) in dirs.iter().enumerate() {
        let mut xi = vec![0.0; mu.dim];
        for &lam in &lambdas {
            for (x, d) in xi.iter_mut().zip(dir) {
                *x = lam * d;
            }
            rows.push(ScanRow {
                name: mu.name.clone(),
                sigma,
                lambda: lam,
                direction_index: di,
                ratio: mu.deficit(&xi).abs() / 1f64.min(lam.powf(2.0 * sigma)),
            });
        }
    }
    Ok(rows)
}

fn validate_scan_grid(
    sigma: f64,
    lambda_min: f64,
    lambda_max: f64,
    n_points: usize,
    n_directions: usize,
) -> Result<()> {
    if !(sigma > 0.0) {
        return Err(Error::Domain("sigma must be positive".into()));
    }
    if !(0.0 < lambda_min && lambda_min < lambda_max) {
        return Err(Error::Domain(
            "scan grid requires 0 < lambda_min < lambda_max".into(),
        ));
    }
    if n_points < 2 || n_directions < 1 {
        return Err(Error::Domain(
            "scan grid requires n_points >= 2 and n_directions >= 1".into(),
        ));
    }
    Ok(())
}

pub(crate) fn log_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    let (la, lb) = (a.ln(), b.ln());
    (0..n)
        .map(|i| (la + (lb - la) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// The four axis-aligned edges of the side-1 square, as a polytope surface.
/// Generalizes to the (2n)-face cube surface in dimension n.
pub fn cube_surface(dim: usize) -> Result<PolytopeSurface> {
    if dim < 2 {
        return Err(Error::Domain("cube surface requires dim >= 2".into()));
    }
    let mut faces = Vec::new();
    for k in 0..dim {
        for sign in [-0.5f64, 0.5] {
            let mut origin = vec![0.0; dim];
            origin[k] = sign;
            let axes: Vec<Vec<f64>> = (0..dim)
                .filter(|&j| j != k)
                .map(|j| {
                    let mut a = vec![0.0; dim];
                    a[j] = 1.0;
                    a
                })
                .collect();
            faces.push(Face { origin, axes });
        }
    }
    PolytopeSurface::new(faces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::spherical_bessel_j;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::PI;

    fn rng() -> rand_chacha::ChaCha8Rng {
        rand_chacha::ChaCha8Rng::seed_from_u64(42)
    }

    fn random_xi(rng: &mut impl Rng, dim: usize, scale: f64) -> Vec<f64> {
        (0..dim).map(|_| (rng.gen::<f64>() - 0.5) * 2.0 * scale).collect()
    }

    #[test]
    fn catalog_examples() {
        let g = make_multiplier(MultiplierKind::Gauss, 3, None).unwrap();
        assert_abs_diff_eq!(g.symbol(&[1.0, 0.0, 0.0]), (-1f64).exp(), epsilon = 1e-12);
        let s = make_multiplier(MultiplierKind::Sphere, 3, None).unwrap();
        assert!(s.symbol(&[PI, 0.0, 0.0]).abs() < 1e-12);
        for kind in [
            MultiplierKind::Sphere,
            MultiplierKind::Ball,
            MultiplierKind::Cube,
            MultiplierKind::Gauss,
            MultiplierKind::Wave,
        ] {
            let mu = make_multiplier(kind, 2, None).unwrap();
            assert_abs_diff_eq!(mu.symbol(&[0.0, 0.0]), 1.0, epsilon = 1e-12);
        }
        assert!(make_multiplier(MultiplierKind::Sphere, 1, None).is_err());
        assert!(make_multiplier(MultiplierKind::Polytope, 2, None).is_err());
    }

    /// Independent per-edge quadrature of the dim-2 cube symbol: plain
    /// composite Simpson along each of the four edges.
    fn cube2_oracle(xi: &[f64]) -> f64 {
        let n_seg = 4096;
        let mut total = 0.0;
        // edges: x = +-1/2 (y from -1/2 to 1/2), y = +-1/2
        let edges: [(usize, f64); 4] = [(0, 0.5), (0, -0.5), (1, 0.5), (1, -0.5)];
        for (fixed, val) in edges {
            let mut acc = 0.0;
            for i in 0..=n_seg {
                let u = -0.5 + i as f64 / n_seg as f64;
                let p = if fixed == 0 { [val, u] } else { [u, val] };
                let w = if i == 0 || i == n_seg {
                    1.0
                } else if i % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                acc += w * (xi[0] * p[0] + xi[1] * p[1]).cos();
            }
            total += acc / (3.0 * n_seg as f64);
        }
        total / 4.0
    }

    #[test]
    fn cube_closed_form_matches_edge_quadrature() {
        let mu = make_multiplier(MultiplierKind::Cube, 2, None).unwrap();
        let mut rng = rng();
        for _ in 0..100 {
            let xi = random_xi(&mut rng, 2, 20.0);
            let a = mu.symbol(&xi);
            let b = cube2_oracle(&xi);
            assert!((a - b).abs() < 1e-10, "xi={xi:?}: {a} vs {b}");
        }
    }

    #[test]
    fn cube_closed_form_matches_polytope_quadrature() {
        for dim in [2usize, 3] {
            let mu = make_multiplier(MultiplierKind::Cube, dim, None).unwrap();
            let poly =
                make_multiplier(MultiplierKind::Polytope, dim, Some(cube_surface(dim).unwrap()))
                    .unwrap();
            let mut rng = rng();
            for scale in [1.0, 30.0, 1000.0] {
                for _ in 0..20 {
                    let xi = random_xi(&mut rng, dim, scale);
                    let a = mu.symbol(&xi);
                    let b = poly.symbol(&xi);
                    assert!((a - b).abs() < 1e-10, "dim={dim} xi={xi:?}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn asymmetric_polytope_rejected() {
        let faces = vec![Face {
            origin: vec![0.5, 0.0],
            axes: vec![vec![0.0, 1.0]],
        }];
        assert!(PolytopeSurface::new(faces).is_err());
    }

    #[test]
    fn composition_examples() {
        let g = make_multiplier(MultiplierKind::Gauss, 2, None).unwrap();
        let xi = [std::f64::consts::LN_2.sqrt(), 0.0]; // where e^{-|xi|^2} = 0.5
        assert_abs_diff_eq!(g.symbol(&xi), 0.5, epsilon = 1e-12);
        let p3 = compose_power(&g, 3).unwrap();
        assert_abs_diff_eq!(p3.symbol(&xi), 0.125, epsilon = 1e-12);
        let p1 = compose_power(&g, 1).unwrap();
        assert_abs_diff_eq!(p1.symbol(&xi), g.symbol(&xi), epsilon = 1e-15);
        let b2 = compose_binomial(&g, 2).unwrap();
        assert_abs_diff_eq!(b2.symbol(&xi), 0.75, epsilon = 1e-12);
        assert_eq!(b2.sigma, 2.0);
        let b1 = compose_binomial(&g, 1).unwrap();
        assert_abs_diff_eq!(b1.symbol(&xi), 0.5, epsilon = 1e-15);
        let d1 = compose_dai_ditzian(&g, 1).unwrap();
        assert_abs_diff_eq!(d1.symbol(&xi), g.symbol(&xi), epsilon = 1e-14);
        for mu in [&p3, &b2, &d1] {
            assert_abs_diff_eq!(mu.symbol(&[0.0, 0.0]), 1.0, epsilon = 1e-12);
        }
        assert!(compose_power(&g, 0).is_err());
        assert!(compose_binomial(&g, 0).is_err());
        assert!(compose_dai_ditzian(&g, 0).is_err());
    }

    #[test]
    fn dai_ditzian_matches_bessel_combination() {
        // sphere dim 3, l=2, |xi|=2: 2/6 * (4 j_{1/2}(2) - j_{1/2}(4))
        let s = make_multiplier(MultiplierKind::Sphere, 3, None).unwrap();
        let dd = compose_dai_ditzian(&s, 2).unwrap();
        let expect = (4.0 * spherical_bessel_j(0.5, 2.0).unwrap()
            - spherical_bessel_j(0.5, 4.0).unwrap())
            / 3.0;
        assert_abs_diff_eq!(dd.symbol(&[2.0, 0.0, 0.0]), expect, epsilon = 1e-12);
        // cross-check against the Mehler integral of v_l (deficit route)
        assert_abs_diff_eq!(dd.deficit(&[2.0, 0.0, 0.0]), 1.0 - expect, epsilon = 1e-10);
        // dd at xi=0 is exactly 1 (binomial coefficient sum)
        assert_abs_diff_eq!(dd.symbol(&[0.0; 3]), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn normalization_and_symmetry_random_points() {
        let mut rng = rng();
        let mut mus = Vec::new();
        for kind in [
            MultiplierKind::Sphere,
            MultiplierKind::Ball,
            MultiplierKind::Cube,
            MultiplierKind::Gauss,
            MultiplierKind::Wave,
        ] {
            let mu = make_multiplier(kind, 2, None).unwrap();
            mus.push(compose_binomial(&mu, 2).unwrap());
            mus.push(compose_dai_ditzian(&mu, 2).unwrap());
            mus.push(mu);
        }
        for mu in &mus {
            assert_abs_diff_eq!(mu.symbol(&[0.0, 0.0]), 1.0, epsilon = 1e-12);
            for _ in 0..1000 {
                let xi = random_xi(&mut rng, 2, 30.0);
                let neg: Vec<f64> = xi.iter().map(|x| -x).collect();
                let v = mu.symbol(&xi);
                assert!((v - mu.symbol(&neg)).abs() < 1e-12, "{}", mu.name);
                assert!(v.is_finite());
            }
        }
        // base catalog (positive measures): |symbol| <= 1
        for kind in [
            MultiplierKind::Sphere,
            MultiplierKind::Ball,
            MultiplierKind::Cube,
            MultiplierKind::Gauss,
            MultiplierKind::Wave,
        ] {
            let mu = make_multiplier(kind, 3, None).unwrap();
            for _ in 0..1000 {
                let xi = random_xi(&mut rng, 3, 50.0);
                assert!(mu.symbol(&xi).abs() <= 1.0 + 1e-12, "{}", mu.name);
            }
        }
    }

    #[test]
    fn binomial_identity_exact() {
        let mut rng = rng();
        for kind in [
            MultiplierKind::Sphere,
            MultiplierKind::Ball,
            MultiplierKind::Cube,
            MultiplierKind::Gauss,
            MultiplierKind::Wave,
        ] {
            let mu = make_multiplier(kind, 2, None).unwrap();
            for l in 1..=4 {
                let mul = compose_binomial(&mu, l).unwrap();
                for _ in 0..200 {
                    let xi = random_xi(&mut rng, 2, 20.0);
                    let lhs = 1.0 - mul.symbol(&xi);
                    let rhs = (1.0 - mu.symbol(&xi)).powi(l as i32);
                    assert!((lhs - rhs).abs() < 1e-12, "{} l={l}", mu.name);
                }
            }
        }
    }

    #[test]
    fn dai_ditzian_range_bound() {
        // positive base measures: symbol' in [1 - 4^l/binom(2l,l), 1]
        let mut rng = rng();
        for kind in [MultiplierKind::Sphere, MultiplierKind::Gauss, MultiplierKind::Ball] {
            let mu = make_multiplier(kind, 3, None).unwrap();
            for l in 1..=3u32 {
                let dd = compose_dai_ditzian(&mu, l).unwrap();
                let floor = 1.0 - 4f64.powi(l as i32) / binomial(2 * l, l);
                for _ in 0..500 {
                    let xi = random_xi(&mut rng, 3, 30.0);
                    let v = dd.symbol(&xi);
                    assert!(v >= floor - 1e-10 && v <= 1.0 + 1e-12, "{} l={l} v={v}", mu.name);
                }
            }
        }
    }

    #[test]
    fn scan_gauss_constants() {
        let g = make_multiplier(MultiplierKind::Gauss, 2, None).unwrap();
        let scan = ksigma_scan(&g, 1.0, 1e-3, 1e3, 10_000, 64).unwrap();
        // dense 1-D oracle values: min (1-e^{-l^2})/min{1,l^2} = 1-1/e at l=1
        assert!((scan.c_lower - (1.0 - (-1f64).exp())).abs() < 0.01 * scan.c_lower);
        assert!((scan.c_upper - 1.0).abs() < 0.01);
        assert!((euclid_norm(&scan.arg_lower) - 1.0).abs() < 0.01);
        assert!(scan.passes(1e-4));
    }

    #[test]
    fn scan_sphere3_constants() {
        let s = make_multiplier(MultiplierKind::Sphere, 3, None).unwrap();
        let scan = ksigma_scan(&s, 1.0, 1e-3, 1e3, 10_000, 64).unwrap();
        assert!((scan.c_lower - 0.158529).abs() < 0.01 * 0.158529, "{}", scan.c_lower);
        assert!((scan.c_upper - 1.217234).abs() < 0.01 * 1.217234, "{}", scan.c_upper);
        assert!((euclid_norm(&scan.arg_upper) - 4.4934).abs() < 0.05);
    }

    #[test]
    fn scan_binomial_gauss() {
        let g = make_multiplier(MultiplierKind::Gauss, 2, None).unwrap();
        let b = compose_binomial(&g, 2).unwrap();
        let scan = ksigma_scan(&b, 2.0, 1e-3, 1e3, 10_000, 64).unwrap();
        let expect = (1.0 - (-1f64).exp()).powi(2);
        assert!((scan.c_lower - expect).abs() < 0.01 * expect);
        assert!((scan.c_upper - 1.0).abs() < 0.01);
    }

    #[test]
    fn scan_rejects_bad_grid() {
        let g = make_multiplier(MultiplierKind::Gauss, 2, None).unwrap();
        assert!(ksigma_scan(&g, 1.0, 1.0, 0.5, 100, 4).is_err());
        assert!(ksigma_scan(&g, 1.0, 0.0, 1.0, 100, 4).is_err());
        assert!(ksigma_scan(&g, 1.0, 0.1, 1.0, 1, 4).is_err());
    }
}
