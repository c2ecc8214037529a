//! Scenario documents (TOML) and their validation.
//!
//! Every table and field is optional; an empty document describes the
//! reference outdoor/indoor scene with a 4×4 BS array, an 8×8 surface,
//! 128 pilot slots and DFT profiles.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use starloc_core::channel::{CarrierConfig, PathLossModel, UpaConfig};
use starloc_core::fim::SystemModel;
use starloc_core::geometry::{jacobian, SceneGeometry};
use starloc_core::starris::{make_design, EnergySplit, PowerAllocation};
use starloc_core::{DesignKind, Model, Position};

use crate::error::{ExperimentError, Result};

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scene: SceneConfig,
    pub bs_array: ArrayConfig,
    pub ris_array: ArrayConfig,
    pub system: SystemConfig,
    pub snr_sweep: SnrSweepConfig,
    pub heatmap: HeatmapConfig,
    pub design_compare: DesignCompareConfig,
    /// Used when the command line gives no output path.
    pub output: Option<PathBuf>,
}

/// Positions in meters.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SceneConfig {
    pub bs: [f64; 3],
    pub ris: [f64; 3],
    pub ms_outdoor: [f64; 3],
    pub ms_indoor: [f64; 3],
}

/// Element counts per axis and spacing in wavelengths.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrayConfig {
    pub nx: usize,
    pub nz: usize,
    #[serde(default = "half")]
    pub spacing_x: f64,
    #[serde(default = "half")]
    pub spacing_z: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PathLoss {
    SquaredDistance,
    FreeSpace,
    Umi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Design {
    Dft,
    Hadamard,
    Random,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemConfig {
    pub carrier_hz: f64,
    pub path_loss: PathLoss,
    pub slots: usize,
    pub total_power: f64,
    /// Profile design for the SNR sweep and the heatmap.
    pub design: Design,
    /// Seed for a random design.
    pub seed: u64,
}

/// A grid given either as an explicit list or as an inclusive range.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    List(Vec<f64>),
    Range { start: f64, stop: f64, step: f64 },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SnrSweepConfig {
    pub snr_db: Grid,
    /// `(ε1, η1)` amplitude pairs.
    pub pairs: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HeatmapConfig {
    pub snr_db: f64,
    pub eps1: Grid,
    pub eta1: Grid,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DesignCompareConfig {
    pub snr_db: Grid,
    pub eps1: f64,
    pub eta1: f64,
    pub designs: Vec<Design>,
    /// One random design per seed; structured designs ignore seeds.
    pub seeds: Vec<u64>,
}

fn half() -> f64 {
    0.5
}

fn default_snr_grid() -> Grid {
    Grid::List(vec![0.0, 5.0, 10.0, 15.0, 20.0])
}

fn heatmap_axis() -> Grid {
    Grid::List((1..20).map(|i| i as f64 / 20.0).collect())
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            scene: SceneConfig::default(),
            bs_array: ArrayConfig {
                nx: 4,
                nz: 4,
                spacing_x: 0.5,
                spacing_z: 0.5,
            },
            ris_array: ArrayConfig {
                nx: 8,
                nz: 8,
                spacing_x: 0.5,
                spacing_z: 0.5,
            },
            system: SystemConfig::default(),
            snr_sweep: SnrSweepConfig::default(),
            heatmap: HeatmapConfig::default(),
            design_compare: DesignCompareConfig::default(),
            output: None,
        }
    }
}

impl Default for SceneConfig {
    fn default() -> Self {
        Self {
            bs: [0.0, 0.0, 8.0],
            ris: [2.0, 2.0, 5.0],
            ms_outdoor: [5.0, 1.0, 2.0],
            ms_indoor: [1.0, 5.0, 2.0],
        }
    }
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self {
            carrier_hz: 28e9,
            path_loss: PathLoss::SquaredDistance,
            slots: 128,
            total_power: 1.0,
            design: Design::Dft,
            seed: 0,
        }
    }
}

impl Default for SnrSweepConfig {
    fn default() -> Self {
        let (a, b) = (0.5f64.sqrt(), 0.9f64.sqrt());
        Self {
            snr_db: default_snr_grid(),
            pairs: vec![[a, a], [b, a], [a, b]],
        }
    }
}

impl Default for HeatmapConfig {
    fn default() -> Self {
        Self {
            snr_db: 15.0,
            eps1: heatmap_axis(),
            eta1: heatmap_axis(),
        }
    }
}

impl Default for DesignCompareConfig {
    fn default() -> Self {
        let a = 0.5f64.sqrt();
        Self {
            snr_db: default_snr_grid(),
            eps1: a,
            eta1: a,
            designs: vec![Design::Dft, Design::Hadamard, Design::Random],
            seeds: (0..10).collect(),
        }
    }
}

impl From<Design> for DesignKind {
    fn from(d: Design) -> Self {
        match d {
            Design::Dft => Self::Dft,
            Design::Hadamard => Self::Hadamard,
            Design::Random => Self::Random,
        }
    }
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        match *self {
            Self::List(ref v) => v.clone(),
            Self::Range { start, stop, step } => {
                if !(step > 0.0) || stop < start {
                    return Vec::new();
                }
                // tolerate the stop value landing an ulp past the last step
                let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
                (0..count).map(|i| start + i as f64 * step).collect()
            }
        }
    }
}

impl From<PathLoss> for PathLossModel {
    fn from(p: PathLoss) -> Self {
        match p {
            PathLoss::SquaredDistance => Self::SquaredDistance,
            PathLoss::FreeSpace => Self::FreeSpace,
            PathLoss::Umi => Self::Umi3gpp,
        }
    }
}

fn invalid(msg: impl Into<String>) -> ExperimentError {
    ExperimentError::Validation(msg.into())
}

fn check_grid(name: &str, values: &[f64], open_unit: bool) -> Result<()> {
    if values.is_empty() {
        return Err(invalid(format!("{name}: grid is empty")));
    }
    for &v in values {
        if !v.is_finite() {
            return Err(invalid(format!("{name}: {v} is not finite")));
        }
        if open_unit && !(v > 0.0 && v < 1.0) {
            return Err(invalid(format!("{name}: {v} is outside (0, 1)")));
        }
    }
    Ok(())
}

impl ScenarioConfig {
    pub fn from_toml_str(text: &str, origin: &Path) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| ExperimentError::Parse {
            path: origin.to_path_buf(),
            message: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn scene(&self) -> SceneGeometry<f64> {
        let p = |a: [f64; 3]| Position::new(a[0], a[1], a[2]);
        let s = &self.scene;
        SceneGeometry {
            bs: p(s.bs),
            ris: p(s.ris),
            ms_outdoor: p(s.ms_outdoor),
            ms_indoor: p(s.ms_indoor),
        }
    }

    fn upa(a: &ArrayConfig) -> UpaConfig<f64> {
        UpaConfig {
            nx: a.nx,
            nz: a.nz,
            spacing_x: a.spacing_x,
            spacing_z: a.spacing_z,
        }
    }

    /// System model for one grid point.
    pub fn model(
        &self,
        eps1: f64,
        eta1: f64,
        snr_db: f64,
        design: DesignKind,
        seed: u64,
    ) -> Result<Model> {
        let ris = Self::upa(&self.ris_array);
        let mut model = SystemModel {
            scene: self.scene(),
            bs_upa: Self::upa(&self.bs_array),
            ris_upa: ris,
            carrier: CarrierConfig::from_frequency(self.system.carrier_hz)?,
            loss: self.system.path_loss.into(),
            profiles: make_design(design, ris.len(), self.system.slots, seed)?,
            split: EnergySplit::from_refraction(eps1)?,
            alloc: PowerAllocation::from_outdoor(eta1, self.system.total_power)?,
            noise_variance: 1.0,
            k_slots: self.system.slots,
        };
        model.set_snr_db(snr_db);
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        let scene = self.scene();
        scene.validate()?;
        jacobian(&scene)?;
        Self::upa(&self.bs_array).validate()?;
        let ris = Self::upa(&self.ris_array);
        ris.validate()?;
        let sys = &self.system;
        if !(sys.carrier_hz > 0.0 && sys.carrier_hz.is_finite()) {
            return Err(invalid(format!(
                "system.carrier_hz: {} must be positive",
                sys.carrier_hz
            )));
        }
        if !(sys.total_power > 0.0 && sys.total_power.is_finite()) {
            return Err(invalid(format!(
                "system.total_power: {} must be positive",
                sys.total_power
            )));
        }
        let n = ris.len();
        DesignKind::from(sys.design).check_dimensions(n, sys.slots)?;

        check_grid("snr_sweep.snr_db", &self.snr_sweep.snr_db.values(), false)?;
        if self.snr_sweep.pairs.is_empty() {
            return Err(invalid("snr_sweep.pairs: grid is empty"));
        }
        for [eps1, eta1] in &self.snr_sweep.pairs {
            check_grid("snr_sweep.pairs eps1", &[*eps1], true)?;
            check_grid("snr_sweep.pairs eta1", &[*eta1], true)?;
        }

        check_grid("heatmap.snr_db", &[self.heatmap.snr_db], false)?;
        check_grid("heatmap.eps1", &self.heatmap.eps1.values(), true)?;
        check_grid("heatmap.eta1", &self.heatmap.eta1.values(), true)?;

        let dc = &self.design_compare;
        check_grid("design_compare.snr_db", &dc.snr_db.values(), false)?;
        check_grid("design_compare.eps1", &[dc.eps1], true)?;
        check_grid("design_compare.eta1", &[dc.eta1], true)?;
        if dc.designs.is_empty() {
            return Err(invalid("design_compare.designs: list is empty"));
        }
        for &kind in &dc.designs {
            DesignKind::from(kind).check_dimensions(n, sys.slots)?;
        }
        if dc.designs.contains(&Design::Random) && dc.seeds.is_empty() {
            return Err(invalid(
                "design_compare.seeds: random design needs at least one seed",
            ));
        }
        Ok(())
    }
}

/// Reads and validates a scenario document.
pub fn load_config(path: impl AsRef<Path>) -> Result<ScenarioConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| ExperimentError::io(path, e))?;
    ScenarioConfig::from_toml_str(&text, path)
}
