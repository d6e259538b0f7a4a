//! Experiment configuration: one JSON document per run.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multiplier::{
    compose_binomial, compose_dai_ditzian, compose_power, cube_surface, make_multiplier,
    Multiplier, MultiplierKind,
};

/// Which verification experiment to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremKind {
    GenEstimates,
    PicksUpper,
    PicksLower,
    RiemannLebesgue,
    WaveEquiv,
    ApproxIdentity,
    LipTail,
    TorusAbsConvergence,
    Sharpness,
}

/// Catalog multiplier plus an optional composition layer.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MultiplierSpec {
    pub kind: String,
    #[serde(default)]
    pub composition: Option<CompositionSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompositionSpec {
    pub op: String,
    pub l: u32,
}

impl MultiplierSpec {
    pub fn plain(kind: &str) -> Self {
        Self {
            kind: kind.into(),
            composition: None,
        }
    }

    pub fn composed(kind: &str, op: &str, l: u32) -> Self {
        Self {
            kind: kind.into(),
            composition: Some(CompositionSpec { op: op.into(), l }),
        }
    }

    /// Builds the multiplier; the polytope kind gets the unit cube surface,
    /// giving a quadrature route independent of the cube closed form.
    pub fn build(&self, dim: usize) -> Result<Multiplier> {
        let kind: MultiplierKind = self.kind.parse()?;
        let params = match kind {
            MultiplierKind::Polytope => Some(cube_surface(dim)?),
            _ => None,
        };
        let base = make_multiplier(kind, dim, params)?;
        match &self.composition {
            None => Ok(base),
            Some(c) => match c.op.as_str() {
                "power" => compose_power(&base, c.l),
                "binomial" => compose_binomial(&base, c.l),
                "dai_ditzian" => compose_dai_ditzian(&base, c.l),
                other => Err(Error::Config(format!("unknown composition '{other}'"))),
            },
        }
    }
}

/// Log-spaced dilation grid.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
}

impl Default for TGrid {
    fn default() -> Self {
        Self {
            t_min: 1e-2,
            t_max: 10.0,
            points: 20,
        }
    }
}

impl TGrid {
    pub fn values(&self) -> Vec<f64> {
        crate::multiplier::log_grid(self.t_min, self.t_max, self.points)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0 < self.t_min && self.t_min < self.t_max) || self.points < 2 {
            return Err(Error::Config("t_grid needs 0 < t_min < t_max, points >= 2".into()));
        }
        Ok(())
    }
}

/// Grid for the K_sigma equivalence scan backing each verdict.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default)]
pub struct ScanConfig {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub n_points: usize,
    pub n_directions: usize,
    /// Reported (not fatal) floor for c_lower.
    pub floor: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            lambda_min: 1e-3,
            lambda_max: 1e3,
            n_points: 10_000,
            n_directions: 64,
            floor: 1e-4,
        }
    }
}

fn d_p() -> f64 {
    2.0
}
fn d_sigma() -> f64 {
    1.0
}
fn d_bandlimit() -> usize {
    16
}
fn d_n_functions() -> usize {
    10
}
fn d_decay() -> f64 {
    1.0
}
fn d_pick_ceiling() -> f64 {
    10.0
}
fn d_oversample() -> usize {
    4
}
fn d_lattice_max() -> usize {
    3162
}

/// The single JSON config document every runner consumes. Fields unused by
/// a given theorem are ignored by it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TheoremCheckConfig {
    pub theorem: TheoremKind,
    pub multiplier: MultiplierSpec,
    pub dim: usize,
    #[serde(default = "d_p")]
    pub p: f64,
    #[serde(default)]
    pub q: Option<f64>,
    #[serde(default = "d_sigma")]
    pub sigma: f64,
    /// Lipschitz order for lip_tail / abs-convergence (derived from `s` when
    /// absent) and the beta-range queries.
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default = "d_bandlimit")]
    pub bandlimit: usize,
    #[serde(default = "d_n_functions")]
    pub n_functions: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub t_grid: TGrid,
    /// Damping exponent for random spectra.
    #[serde(default = "d_decay")]
    pub decay: f64,
    /// Power-spectrum exponent for lip_tail / abs-convergence.
    #[serde(default)]
    pub s: Option<f64>,
    /// Titchmarsh exponent for sharpness.
    #[serde(default)]
    pub gamma: Option<f64>,
    /// Explicit beta values for abs-convergence (auto-chosen when absent).
    #[serde(default)]
    pub betas: Option<Vec<f64>>,
    /// Empirical ceiling for the Pick-constant flag.
    #[serde(default = "d_pick_ceiling")]
    pub pick_ceiling: f64,
    #[serde(default)]
    pub scan: ScanConfig,
    #[serde(default = "d_oversample")]
    pub oversample: usize,
    /// Max lattice box edge for abs-convergence partial sums.
    #[serde(default = "d_lattice_max")]
    pub lattice_max: usize,
}

impl TheoremCheckConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(s)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::Config("dim must be >= 1".into()));
        }
        if !(self.p >= 1.0) {
            return Err(Error::Config("p must be >= 1".into()));
        }
        if !(self.sigma > 0.0) {
            return Err(Error::Config("sigma must be > 0".into()));
        }
        if self.bandlimit == 0 || self.n_functions == 0 {
            return Err(Error::Config("bandlimit and n_functions must be >= 1".into()));
        }
        self.t_grid.validate()?;
        Ok(())
    }

    /// Conjugate exponent p' (infinite at p = 1).
    pub fn p_prime(&self) -> f64 {
        if self.p == 1.0 {
            f64::INFINITY
        } else {
            self.p / (self.p - 1.0)
        }
    }
}
