//! Scenario files (TOML). See `configs/` for complete examples.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::constitutive::{CapacitySource, HtcParams, PermeabilityModel, RelativeLaw};
use crate::error::{Error, Result};
use crate::geometry::Side;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeKind {
    Voronoi,
    Skewed,
}

/// Selection of full-model Dirichlet nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum BoundarySelection {
    /// Nodes that lost a contact crossing the plane.
    #[default]
    Cut,
    /// Nodes within a distance (m) of the plane.
    Within(f64),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub kind: LatticeKind,
    /// RVE period per axis (m); the length sets the dimension.
    pub rve_size: Vec<f64>,
    #[serde(default = "default_l_min")]
    pub l_min: f64,
    #[serde(default)]
    pub skew_deg: f64,
    #[serde(default)]
    pub divisions: Vec<usize>,
    /// Specimen extent (m); must be a whole number of RVEs for the full model.
    #[serde(default)]
    pub domain: Vec<f64>,
    #[serde(default)]
    pub boundary: BoundarySelection,
    /// Read the RVE from a lattice file instead of generating it.
    #[serde(default)]
    pub lattice_file: Option<PathBuf>,
}

fn default_l_min() -> f64 {
    0.01
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaterialKind {
    Linear,
    VanGenuchten,
    Htc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialConfig {
    pub kind: MaterialKind,
    #[serde(default = "d_m")]
    pub m: f64,
    /// van Genuchten α (Pa).
    #[serde(default = "d_alpha")]
    pub alpha: f64,
    /// Dynamic viscosity (Pa s).
    #[serde(default = "d_mu")]
    pub mu: f64,
    /// Intrinsic permeability (m²).
    #[serde(default = "d_kappa0")]
    pub kappa0: f64,
    #[serde(default = "d_rho_w")]
    pub rho_w: f64,
    /// c (s²/m²).
    #[serde(default = "d_capacity")]
    pub capacity: f64,
    #[serde(default)]
    pub source: f64,
    #[serde(default)]
    pub htc: HtcParams,
}

fn d_m() -> f64 {
    0.5
}
fn d_alpha() -> f64 {
    1e6
}
fn d_mu() -> f64 {
    8.9e-4
}
fn d_kappa0() -> f64 {
    5e-18
}
fn d_rho_w() -> f64 {
    1000.0
}
fn d_capacity() -> f64 {
    1.64e-5
}

impl MaterialConfig {
    /// λ₀ = ρ_w κ₀/μ for pressure problems; HTC networks use a unit λ₀.
    pub fn lambda0(&self) -> f64 {
        match self.kind {
            MaterialKind::Htc => 1.0,
            _ => self.rho_w * self.kappa0 / self.mu,
        }
    }

    pub fn permeability(&self) -> Result<PermeabilityModel> {
        let mut model = PermeabilityModel::van_genuchten(self.m, self.alpha, self.mu, self.kappa0, self.rho_w)?;
        if self.kind != MaterialKind::VanGenuchten {
            model.law = RelativeLaw::Linear;
        }
        Ok(model)
    }

    pub fn storage(&self) -> CapacitySource {
        CapacitySource {
            capacity: self.capacity,
            source: self.source,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomConfig {
    #[serde(default = "d_seed")]
    pub seed: u64,
    /// Coefficient of variation of the lognormal λ₀ (0 keeps λ₀ uniform).
    #[serde(default)]
    pub cov: f64,
}

fn d_seed() -> u64 {
    1
}

impl Default for RandomConfig {
    fn default() -> Self {
        RandomConfig { seed: 1, cov: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ResponsePath {
    #[default]
    Fast,
    Slow,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MacroMeshConfig {
    pub x_widths: Vec<f64>,
    pub y_widths: Vec<f64>,
    #[serde(default = "d_thickness")]
    pub thickness: f64,
    #[serde(default)]
    pub response: ResponsePath,
}

fn d_thickness() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundarySide {
    XMin,
    XMax,
    YMin,
    YMax,
}

impl BoundarySide {
    pub fn side(self) -> Side {
        match self {
            BoundarySide::XMin => Side::XMin,
            BoundarySide::XMax => Side::XMax,
            BoundarySide::YMin => Side::YMin,
            BoundarySide::YMax => Side::YMax,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldId {
    P,
    H,
    T,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CosineConfig {
    pub min: f64,
    pub max: f64,
    pub period: f64,
    #[serde(default)]
    pub phase: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BcConfig {
    pub name: String,
    /// Sides sharing the condition; later conditions win at shared nodes.
    pub sides: Vec<BoundarySide>,
    pub field: FieldId,
    /// Breakpoints `[time s, value]`.
    #[serde(default)]
    pub values: Vec<[f64; 2]>,
    #[serde(default)]
    pub cosine: Option<CosineConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeMode {
    Steady,
    Transient,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    pub mode: TimeMode,
    /// `[dt, count]` segments.
    pub segments: Vec<(f64, usize)>,
    #[serde(default)]
    pub start: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialConfig {
    #[serde(default)]
    pub p: f64,
    #[serde(default = "d_h")]
    pub h: f64,
    #[serde(default = "d_t")]
    pub t: f64,
}

fn d_h() -> f64 {
    1.0
}
fn d_t() -> f64 {
    293.15
}

impl Default for InitialConfig {
    fn default() -> Self {
        InitialConfig { p: 0.0, h: 1.0, t: 293.15 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileConfig {
    pub name: String,
    pub from: [f64; 2],
    pub to: [f64; 2],
    #[serde(default = "d_samples")]
    pub samples: usize,
    /// Steps at which the profile is recorded (empty: last step).
    #[serde(default)]
    pub steps: Vec<usize>,
}

fn d_samples() -> usize {
    61
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointConfig {
    pub label: String,
    pub at: [f64; 2],
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub profiles: Vec<ProfileConfig>,
    #[serde(default)]
    pub points: Vec<PointConfig>,
    /// Steps written as VTK (0 is the initial state).
    #[serde(default)]
    pub vtk_steps: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    #[serde(default = "d_tol")]
    pub newton_tol: f64,
    #[serde(default = "d_max_iter")]
    pub max_iter: usize,
    #[serde(default = "d_halvings")]
    pub max_halvings: usize,
    /// Fixed-order reductions (bit-identical reruns).
    #[serde(default = "d_true")]
    pub deterministic: bool,
}

fn d_tol() -> f64 {
    1e-8
}
fn d_max_iter() -> usize {
    25
}
fn d_halvings() -> usize {
    10
}
fn d_true() -> bool {
    true
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            newton_tol: 1e-8,
            max_iter: 25,
            max_halvings: 10,
            deterministic: true,
        }
    }
}

/// RVE ensemble: sizes × internal structures × λ₀ variants.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyConfig {
    /// RVE edge lengths (m).
    pub sizes: Vec<f64>,
    #[serde(default = "d_ten")]
    pub structures: usize,
    #[serde(default = "d_ten")]
    pub variants: usize,
}

fn d_ten() -> usize {
    10
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub geometry: GeometryConfig,
    pub material: MaterialConfig,
    #[serde(default)]
    pub random: RandomConfig,
    #[serde(default)]
    pub macro_mesh: Option<MacroMeshConfig>,
    #[serde(default)]
    pub bcs: Vec<BcConfig>,
    pub time: TimeConfig,
    #[serde(default)]
    pub initial: InitialConfig,
    #[serde(default)]
    pub outputs: OutputConfig,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub study: Option<StudyConfig>,
    /// SHA-256 of the source text; filled by the loaders.
    #[serde(skip)]
    pub config_hash: String,
}

impl Scenario {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let mut s: Scenario = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        s.config_hash = hex::encode(Sha256::digest(text.as_bytes()));
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut s = Self::from_toml_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        if let Some(f) = &s.geometry.lattice_file {
            if f.is_relative() {
                if let Some(dir) = path.parent() {
                    s.geometry.lattice_file = Some(dir.join(f));
                }
            }
        }
        Ok(s)
    }

    pub fn n_dim(&self) -> usize {
        self.geometry.rve_size.len()
    }

    /// Tiling counts of the full model.
    pub fn repetitions(&self) -> Result<Vec<usize>> {
        let g = &self.geometry;
        if g.domain.len() != g.rve_size.len() {
            return Err(Error::Config("geometry.domain must match geometry.rve_size".into()));
        }
        g.domain
            .iter()
            .zip(&g.rve_size)
            .map(|(d, l)| {
                let n = (d / l).round();
                if n < 1.0 || (n * l - d).abs() > 1e-9 * d {
                    Err(Error::Config(format!("domain {d} is not a multiple of the RVE size {l}")))
                } else {
                    Ok(n as usize)
                }
            })
            .collect()
    }

    pub fn is_htc(&self) -> bool {
        self.material.kind == MaterialKind::Htc
    }

    fn validate(&self) -> Result<()> {
        let g = &self.geometry;
        if !(2..=3).contains(&g.rve_size.len()) || g.rve_size.iter().any(|&l| !(l > 0.0)) {
            return Err(Error::Config("geometry.rve_size needs 2 or 3 positive lengths".into()));
        }
        if g.kind == LatticeKind::Skewed && g.divisions.len() != g.rve_size.len() {
            return Err(Error::Config("skewed lattice needs geometry.divisions per axis".into()));
        }
        if self.time.segments.iter().any(|&(dt, _)| !(dt > 0.0)) {
            return Err(Error::Config("time segments need dt > 0".into()));
        }
        for bc in &self.bcs {
            let field_ok = match self.material.kind {
                MaterialKind::Htc => bc.field != FieldId::P,
                _ => bc.field == FieldId::P,
            };
            if !field_ok {
                return Err(Error::Config(format!("bc '{}' uses a field the material does not have", bc.name)));
            }
            if bc.values.is_empty() == bc.cosine.is_none() {
                return Err(Error::Config(format!("bc '{}' needs exactly one of values or cosine", bc.name)));
            }
        }
        Ok(())
    }
}
