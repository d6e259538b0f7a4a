//! Band-limited functions on the n-torus T^n = R^n/(2 pi Z)^n (normalized
//! Haar measure, characters e^{ik.x}) stored as finite Fourier coefficient
//! boxes, with exact frequency-domain multiplier application and the L^p
//! norms, moduli of smoothness and weighted spectral sums the growth
//! estimates compare.

use std::collections::HashMap;

use num_complex::Complex64;
use rustfft::{num_complex::Complex, FftDirection, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multiplier::Multiplier;

/// Fourier coefficients f^(k) on the lattice box ||k||_inf <= N,
/// stored row-major over the (2N+1)^n box.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub dim: usize,
    pub bandlimit: usize,
    pub real_valued: bool,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn zeros(dim: usize, bandlimit: usize, real_valued: bool) -> Result<Self> {
        if dim == 0 || bandlimit == 0 {
            return Err(Error::Domain("spectrum needs dim >= 1 and N >= 1".into()));
        }
        let side = 2 * bandlimit + 1;
        let len = side.checked_pow(dim as u32).ok_or_else(|| {
            Error::Domain(format!("lattice box (2*{bandlimit}+1)^{dim} overflows"))
        })?;
        Ok(Self {
            dim,
            bandlimit,
            real_valued,
            coeffs: vec![Complex64::new(0.0, 0.0); len],
        })
    }

    fn side(&self) -> usize {
        2 * self.bandlimit + 1
    }

    fn index(&self, k: &[i64]) -> Option<usize> {
        if k.len() != self.dim {
            return None;
        }
        let n = self.bandlimit as i64;
        let mut idx = 0usize;
        for &ki in k {
            if ki.abs() > n {
                return None;
            }
            idx = idx * self.side() + (ki + n) as usize;
        }
        Some(idx)
    }

    /// Lattice point for a flat index, components in [-N, N].
    fn decode(&self, mut idx: usize) -> Vec<i64> {
        let n = self.bandlimit as i64;
        let mut k = vec![0i64; self.dim];
        for d in (0..self.dim).rev() {
            k[d] = (idx % self.side()) as i64 - n;
            idx /= self.side();
        }
        k
    }

    pub fn coeff(&self, k: &[i64]) -> Complex64 {
        self.index(k)
            .map(|i| self.coeffs[i])
            .unwrap_or_else(|| Complex64::new(0.0, 0.0))
    }

    pub fn set_coeff(&mut self, k: &[i64], v: Complex64) -> Result<()> {
        let i = self.index(k).ok_or_else(|| {
            Error::Domain(format!("lattice point {k:?} outside box N={}", self.bandlimit))
        })?;
        self.coeffs[i] = v;
        Ok(())
    }

    /// Iterate (k, f^(k)) over the whole box.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<i64>, Complex64)> + '_ {
        (0..self.coeffs.len()).map(|i| (self.decode(i), self.coeffs[i]))
    }

    /// Parseval sum of |f^(k)|^2.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn add(&self, other: &Spectrum) -> Result<Spectrum> {
        if self.dim != other.dim || self.bandlimit != other.bandlimit {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let mut out = self.clone();
        for (c, o) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *c += o;
        }
        out.real_valued = self.real_valued && other.real_valued;
        Ok(out)
    }

    pub fn sub(&self, other: &Spectrum) -> Result<Spectrum> {
        let mut neg = other.clone();
        for c in neg.coeffs.iter_mut() {
            *c = -*c;
        }
        self.add(&neg)
    }

    /// Values on the uniform synthesis grid of `oversample * (2N+1)` points
    /// per axis, via zero-padded inverse DFT along each axis.
    pub fn synthesize(&self, oversample: usize) -> Result<Vec<Complex64>> {
        if oversample < 2 {
            return Err(Error::Domain("oversample must be >= 2".into()));
        }
        let m = oversample * self.side();
        let total = m
            .checked_pow(self.dim as u32)
            .ok_or_else(|| Error::Domain(format!("synthesis grid {m}^{} overflows", self.dim)))?;
        let mut data = vec![Complex::new(0.0, 0.0); total];
        for (i, &c) in self.coeffs.iter().enumerate() {
            let k = self.decode(i);
            let mut j = 0usize;
            for &ki in &k {
                j = j * m + ki.rem_euclid(m as i64) as usize;
            }
            data[j] = c;
        }
        let fft = FftPlanner::new().plan_fft(m, FftDirection::Inverse);
        let mut line = vec![Complex::new(0.0, 0.0); m];
        // transform along each axis; axis d has stride side^(dim-1-d) pattern
        for d in 0..self.dim {
            let stride = m.pow((self.dim - 1 - d) as u32);
            let block = stride * m;
            for base in (0..total).step_by(block) {
                for off in 0..stride {
                    for (i, slot) in line.iter_mut().enumerate() {
                        *slot = data[base + off + i * stride];
                    }
                    fft.process(&mut line);
                    for (i, &v) in line.iter().enumerate() {
                        data[base + off + i * stride] = v;
                    }
                }
            }
        }
        Ok(data)
    }

    /// JSON document {dim, bandlimit, real_valued, coefficients: [[k..], re, im]..}
    /// listing nonzero coefficients.
    pub fn to_json(&self) -> Result<String> {
        let coefficients = self
            .iter()
            .filter(|(_, c)| c.norm_sqr() > 0.0)
            .map(|(k, c)| (k, c.re, c.im))
            .collect();
        let doc = SpectrumDoc {
            dim: self.dim,
            bandlimit: self.bandlimit,
            real_valued: self.real_valued,
            coefficients,
        };
        Ok(serde_json::to_string(&doc)?)
    }

    pub fn from_json(s: &str) -> Result<Spectrum> {
        let doc: SpectrumDoc = serde_json::from_str(s)?;
        let mut f = Spectrum::zeros(doc.dim, doc.bandlimit, doc.real_valued)?;
        for (k, re, im) in &doc.coefficients {
            f.set_coeff(k, Complex64::new(*re, *im))?;
        }
        Ok(f)
    }
}

#[derive(Serialize, Deserialize)]
struct SpectrumDoc {
    dim: usize,
    bandlimit: usize,
    real_valued: bool,
    coefficients: Vec<(Vec<i64>, f64, f64)>,
}

/// A single Fourier mode. With `real_output`, amplitude a at k0 != 0 is
/// split as a/2, conj(a)/2 over +-k0 so the synthesis is a * cos-type mode.
pub fn single_mode(
    dim: usize,
    k0: &[i64],
    amplitude: Complex64,
    real_output: bool,
) -> Result<Spectrum> {
    if k0.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: k0.len(),
        });
    }
    let n = k0.iter().map(|k| k.unsigned_abs() as usize).max().unwrap_or(0);
    let mut f = Spectrum::zeros(dim, n.max(1), real_output)?;
    if real_output && k0.iter().any(|&k| k != 0) {
        f.set_coeff(k0, amplitude / 2.0)?;
        let neg: Vec<i64> = k0.iter().map(|k| -k).collect();
        f.set_coeff(&neg, amplitude.conj() / 2.0)?;
    } else {
        f.set_coeff(k0, amplitude)?;
    }
    Ok(f)
}

/// Synthetic Lipschitz-class spectrum f^(k) = |k|^{-s}, f^(0) = 0.
pub fn power_spectrum(dim: usize, bandlimit: usize, s: f64) -> Result<Spectrum> {
    if !(s > 0.0) {
        return Err(Error::Domain("power spectrum needs s > 0".into()));
    }
    let mut f = Spectrum::zeros(dim, bandlimit, true)?;
    for i in 0..f.coeffs.len() {
        let k = f.decode(i);
        let n2: i64 = k.iter().map(|x| x * x).sum();
        if n2 > 0 {
            f.coeffs[i] = Complex64::new((n2 as f64).powf(-s / 2.0), 0.0);
        }
    }
    Ok(f)
}

/// Seeded complex Gaussian-ish coefficients damped by (1+|k|)^{-decay},
/// Hermitian-symmetrized so synthesis is real. Bit-identical per seed.
pub fn random_spectrum(seed: u64, dim: usize, bandlimit: usize, decay: f64) -> Result<Spectrum> {
    use rand::{Rng, SeedableRng};
    if decay < 0.0 {
        return Err(Error::Domain("decay must be >= 0".into()));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut f = Spectrum::zeros(dim, bandlimit, true)?;
    let raw: Vec<Complex64> = (0..f.coeffs.len())
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5) * 2.0)
        .collect();
    for i in 0..f.coeffs.len() {
        let k = f.decode(i);
        let neg: Vec<i64> = k.iter().map(|x| -x).collect();
        let j = f.index(&neg).unwrap();
        let norm: f64 = (k.iter().map(|x| (x * x) as f64).sum::<f64>()).sqrt();
        let damp = (1.0 + norm).powf(-decay);
        f.coeffs[i] = (raw[i] + raw[j].conj()) * (0.5 * damp);
    }
    Ok(f)
}

/// Radial symbol values at t|k| cached by the integer |k|^2.
fn radial_cache(
    mu: &Multiplier,
    t: f64,
    use_deficit: bool,
) -> impl FnMut(&[i64]) -> f64 + '_ {
    let mut cache: HashMap<i64, f64> = HashMap::new();
    move |k: &[i64]| {
        let n2: i64 = k.iter().map(|x| x * x).sum();
        *cache.entry(n2).or_insert_with(|| {
            let lam = t * (n2 as f64).sqrt();
            if use_deficit {
                mu.deficit_radial(lam)
            } else {
                mu.symbol_radial(lam)
            }
        })
    }
}

fn check_apply(f: &Spectrum, mu: &Multiplier, t: f64) -> Result<()> {
    if mu.dim != f.dim {
        return Err(Error::DimensionMismatch {
            expected: f.dim,
            got: mu.dim,
        });
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Domain("t must be finite and >= 0".into()));
    }
    Ok(())
}

/// M_mu^t f: output coefficient at k is symbol(t k) f^(k). Exact — f is
/// band-limited, so no truncation is involved.
pub fn apply_torus_multiplier(f: &Spectrum, mu: &Multiplier, t: f64) -> Result<Spectrum> {
    check_apply(f, mu, t)?;
    let mut out = f.clone();
    if mu.is_radial {
        let mut sym = radial_cache(mu, t, false);
        for i in 0..out.coeffs.len() {
            let k = out.decode(i);
            out.coeffs[i] *= sym(&k);
        }
    } else {
        let mut xi = vec![0.0; f.dim];
        for i in 0..out.coeffs.len() {
            let k = out.decode(i);
            for (x, &ki) in xi.iter_mut().zip(&k) {
                *x = t * ki as f64;
            }
            out.coeffs[i] *= mu.symbol(&xi);
        }
    }
    Ok(out)
}

/// M_mu^t f - f, built from the stable deficit so small-t differences do not
/// cancel: coefficient at k is -(1 - symbol(t k)) f^(k).
pub fn apply_torus_deficit(f: &Spectrum, mu: &Multiplier, t: f64) -> Result<Spectrum> {
    check_apply(f, mu, t)?;
    let mut out = f.clone();
    if mu.is_radial {
        let mut def = radial_cache(mu, t, true);
        for i in 0..out.coeffs.len() {
            let k = out.decode(i);
            out.coeffs[i] *= -def(&k);
        }
    } else {
        let mut xi = vec![0.0; f.dim];
        for i in 0..out.coeffs.len() {
            let k = out.decode(i);
            for (x, &ki) in xi.iter_mut().zip(&k) {
                *x = t * ki as f64;
            }
            out.coeffs[i] *= -mu.deficit(&xi);
        }
    }
    Ok(out)
}

/// L^p norm under normalized Haar measure, by rectangle rule on the
/// oversampled synthesis grid (exact for matching-degree trigonometric
/// integrands at even integer p); p = infinity is the grid max.
pub fn lp_norm_torus(f: &Spectrum, p: f64, oversample: usize) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::Domain("L^p norm needs p >= 1".into()));
    }
    let vals = f.synthesize(oversample)?;
    let n = vals.len() as f64;
    if p.is_infinite() {
        return Ok(vals.iter().map(|v| v.norm()).fold(0.0, f64::max));
    }
    let mean = vals.iter().map(|v| v.norm().powf(p)).sum::<f64>() / n;
    Ok(mean.powf(1.0 / p))
}

/// omega_p[f](t) = sup_{0<h<=t} || f(.+h) + f(.-h) - 2 f ||_p, the sup taken
/// over a uniform h-grid; the difference is formed spectrally with
/// coefficients (2 cos(kh) - 2) f^(k).
pub fn omega_modulus(f: &Spectrum, p: f64, t: f64, h_steps: usize) -> Result<f64> {
    if f.dim != 1 {
        return Err(Error::Domain("omega_modulus is defined for dim = 1".into()));
    }
    if !(t > 0.0) {
        return Err(Error::Domain("omega_modulus needs t > 0".into()));
    }
    if h_steps < 8 {
        return Err(Error::Domain("omega_modulus needs h_steps >= 8".into()));
    }
    // the sup of the band-limited grid expression needs steps >> N t / pi
    if (h_steps as f64) < 2.0 * f.bandlimit as f64 * t / std::f64::consts::PI {
        return Err(Error::Accuracy(format!(
            "h grid too coarse: {h_steps} steps for N={} t={t}",
            f.bandlimit
        )));
    }
    let mut best = 0.0f64;
    for j in 1..=h_steps {
        let h = t * j as f64 / h_steps as f64;
        let mut diff = f.clone();
        for i in 0..diff.coeffs.len() {
            let k = diff.decode(i)[0] as f64;
            diff.coeffs[i] *= 2.0 * (k * h).cos() - 2.0;
        }
        best = best.max(lp_norm_torus(&diff, p, 4)?);
    }
    Ok(best)
}

fn conjugate_exponent(p: f64) -> Result<f64> {
    if !(1.0..=2.0).contains(&p) {
        return Err(Error::Domain(format!("p must lie in [1,2], got {p}")));
    }
    Ok(if p == 1.0 { f64::INFINITY } else { p / (p - 1.0) })
}

/// [sum_k min{1,(t|k|)^{2 sigma p'}} |f^(k)|^{p'}]^{1/p'} (Euclidean |k|);
/// at p = 1 the sup sup_k min{1,(t|k|)^{2 sigma}} |f^(k)|. k = 0 contributes
/// nothing: its weight vanishes.
pub fn spectral_min_lhs(f: &Spectrum, t: f64, sigma: f64, p: f64) -> Result<f64> {
    if !(t > 0.0 && sigma > 0.0) {
        return Err(Error::Domain("spectral_min_lhs needs t > 0, sigma > 0".into()));
    }
    let pp = conjugate_exponent(p)?;
    let mut acc = 0.0f64;
    for (k, c) in f.iter() {
        let n2: i64 = k.iter().map(|x| x * x).sum();
        if n2 == 0 {
            continue;
        }
        let tk = t * (n2 as f64).sqrt();
        if pp.is_infinite() {
            acc = acc.max(1f64.min(tk.powf(2.0 * sigma)) * c.norm());
        } else {
            acc += 1f64.min(tk.powf(2.0 * sigma * pp)) * c.norm().powf(pp);
        }
    }
    Ok(if pp.is_infinite() { acc } else { acc.powf(1.0 / pp) })
}

/// [sum_k min{1,(t|k|)^{2 sigma q}} |k|^{q n (1 - 1/p - 1/q)} |f^(k)|^q]^{1/q};
/// valid in the ranges 1 < p <= 2, p <= q <= p' or p >= 2, max{q, q'} <= p.
pub fn pick_lhs(f: &Spectrum, t: f64, sigma: f64, p: f64, q: f64) -> Result<f64> {
    if !(t > 0.0 && sigma > 0.0) {
        return Err(Error::Domain("pick_lhs needs t > 0, sigma > 0".into()));
    }
    if !(p > 1.0 && q >= 1.0) {
        return Err(Error::Domain("pick_lhs needs p > 1, q >= 1".into()));
    }
    let pp = p / (p - 1.0);
    let qp = if q == 1.0 { f64::INFINITY } else { q / (q - 1.0) };
    let dir1 = p <= 2.0 && p <= q && q <= pp;
    let dir2 = p >= 2.0 && q.max(qp) <= p;
    if !dir1 && !dir2 {
        return Err(Error::Domain(format!(
            "(p,q)=({p},{q}) satisfies neither Pick direction"
        )));
    }
    let w = q * f.dim as f64 * (1.0 - 1.0 / p - 1.0 / q);
    let mut acc = 0.0f64;
    for (k, c) in f.iter() {
        let n2: i64 = k.iter().map(|x| x * x).sum();
        if n2 == 0 {
            continue;
        }
        let nk = (n2 as f64).sqrt();
        acc += 1f64.min((t * nk).powf(2.0 * sigma * q)) * nk.powf(w) * c.norm().powf(q);
    }
    Ok(acc.powf(1.0 / q))
}

/// sum_{|k| > 1/t} |f^(k)|^{p'} (no outer root); at p = 1 the sup of |f^(k)|
/// over the tail.
pub fn tail_sum(f: &Spectrum, t: f64, p: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain("tail_sum needs t > 0".into()));
    }
    let pp = conjugate_exponent(p)?;
    let cut = 1.0 / t;
    let mut acc = 0.0f64;
    for (k, c) in f.iter() {
        let n2: i64 = k.iter().map(|x| x * x).sum();
        if (n2 as f64).sqrt() <= cut {
            continue;
        }
        if pp.is_infinite() {
            acc = acc.max(c.norm());
        } else {
            acc += c.norm().powf(pp);
        }
    }
    Ok(acc)
}
