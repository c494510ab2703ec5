//! Run configuration: a single JSON file with typed keys, unknown keys
//! rejected. Lengths tied to the incident field (`delta`, `h`, and their
//! sweep lists) are given in wavelength units, matching the usual way these
//! studies are parametrized; everything else is in absolute units.

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use gnfi_core::inverse::{MeasurementSide, ReconParams};
use gnfi_core::physics::{Component, GratingConfig, Side};
use gnfi_core::spectral::{profile_example1, profile_example2, PeriodicGrid, SurfaceProfile};
use gnfi_core::SynthesisSpec;

use crate::dump::FieldDump;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SideArg {
    Reflection,
    Transmission,
}

impl SideArg {
    pub fn measurement(self) -> MeasurementSide {
        match self {
            SideArg::Reflection => MeasurementSide::Reflection,
            SideArg::Transmission => MeasurementSide::Transmission,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProfileArg {
    Named(String),
    File { file: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub kappa_plus: f64,
    pub kappa_minus: f64,
    pub period: [f64; 2],
    pub grid: [usize; 2],
    /// Deformation scale in wavelength units.
    pub delta: f64,
    /// Measurement distance in wavelength units; planes sit at `+-h*lambda`.
    pub h: f64,
    pub polarization: [f64; 2],
    pub side: SideArg,
    pub component: u8,
    pub order: u8,
    pub noise_level: f64,
    pub seed: u64,
    /// Data synthesis runs on a grid this many times finer, then restricts.
    pub fine_factor: usize,
    pub profile: ProfileArg,
    pub snr_override: Option<f64>,
    pub cutoff_override: Option<f64>,
    /// Sweep lists for experiment mode (wavelength units where applicable);
    /// empty lists fall back to the base value, except noise which defaults
    /// to the noise-free point.
    pub sweep_delta: Vec<f64>,
    pub sweep_h: Vec<f64>,
    pub sweep_noise: Vec<f64>,
    pub sweep_seeds: Vec<u64>,
    pub verify_mode_cap: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            kappa_plus: PI,
            kappa_minus: 1.6 * PI,
            period: [1.0, 1.0],
            grid: [64, 64],
            delta: 0.0125,
            h: 0.1,
            polarization: [1.0, 0.0],
            side: SideArg::Reflection,
            component: 1,
            order: 1,
            noise_level: 0.0,
            seed: 0,
            fine_factor: 4,
            profile: ProfileArg::Named("example1".into()),
            snr_override: None,
            cutoff_override: None,
            sweep_delta: Vec::new(),
            sweep_h: Vec::new(),
            sweep_noise: Vec::new(),
            sweep_seeds: Vec::new(),
            verify_mode_cap: gnfi_core::verify::DEFAULT_MODE_CAP,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let cfg: RunConfig =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        Ok(cfg)
    }

    pub fn wavelength(&self) -> f64 {
        2.0 * PI / self.kappa_plus
    }

    /// Print the fully-resolved configuration so a run is reproducible from
    /// its log alone.
    pub fn echo(&self) -> anyhow::Result<()> {
        println!("effective-config: {}", serde_json::to_string(self)?);
        Ok(())
    }
}

/// Everything a command needs, resolved into library types.
pub struct Resolved {
    pub run: RunConfig,
    pub cfg: GratingConfig,
    pub synthesis: SynthesisSpec,
    pub recon: ReconParams,
    pub profile: SurfaceProfile,
}

impl Resolved {
    pub fn component(&self) -> Component {
        self.recon.component
    }

    pub fn measurement_side(&self) -> MeasurementSide {
        self.recon.side
    }

    pub fn plane(&self) -> f64 {
        self.cfg.plane(self.recon.side.side())
    }

    /// Surface `delta * psi` on the configuration grid.
    pub fn truth(&self) -> gnfi_core::spectral::ComplexGrid {
        gnfi_core::spectral::ComplexGrid::from_values(
            self.cfg.grid.clone(),
            self.profile
                .values()
                .values()
                .iter()
                .map(|v| self.cfg.deformation * v)
                .collect(),
        )
        .expect("scaled profile stays finite")
    }
}

pub fn resolve(mut run: RunConfig, seed_override: Option<u64>) -> anyhow::Result<Resolved> {
    if let Some(seed) = seed_override {
        run.seed = seed;
    }
    if run.fine_factor == 0 {
        bail!("fine_factor must be >= 1");
    }
    let lambda = run.wavelength();
    let grid = PeriodicGrid::new(run.period[0], run.period[1], run.grid[0], run.grid[1])?;
    let cfg = GratingConfig::new(
        run.kappa_plus,
        run.kappa_minus,
        run.delta * lambda,
        run.h * lambda,
        -run.h * lambda,
        run.polarization,
        grid.clone(),
    )?;

    let side: Side = run.side.measurement().side();
    let synthesis = SynthesisSpec {
        order: run.order,
        noise_level: run.noise_level,
        seed: run.seed,
        side,
    };
    synthesis.validate()?;

    let component = Component::from_number(run.component)?;
    let mut recon = ReconParams::new(run.side.measurement(), component)?;
    recon.delta_wavelengths = run.delta;
    recon.noise_level = run.noise_level;
    recon.snr_override = run.snr_override;
    recon.cutoff_override = run.cutoff_override;

    let profile = load_profile(&run.profile, &grid)?;

    Ok(Resolved {
        run,
        cfg,
        synthesis,
        recon,
        profile,
    })
}

fn load_profile(arg: &ProfileArg, grid: &PeriodicGrid) -> anyhow::Result<SurfaceProfile> {
    match arg {
        ProfileArg::Named(name) => match name.as_str() {
            "example1" => Ok(profile_example1(grid.clone())),
            "example2" => Ok(profile_example2(grid.clone())),
            other => bail!("unknown profile '{other}' (expected example1, example2, or a file)"),
        },
        ProfileArg::File { file } => {
            let dump = FieldDump::read_file(file)?;
            let field = dump.to_field()?;
            // dumps carry complex samples; a profile is its real part
            let profile = SurfaceProfile::from_real_samples(
                field.grid().clone(),
                field.values().iter().map(|v| v.re).collect(),
            )?;
            if profile.grid() == grid {
                Ok(profile)
            } else {
                Ok(profile.resample(grid)?)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_resolve() {
        let r = resolve(RunConfig::default(), None).unwrap();
        assert_eq!(r.cfg.grid.n1(), 64);
        assert!((r.cfg.z_plus - 0.2).abs() < 1e-15);
        assert!((r.cfg.deformation - 0.025).abs() < 1e-15);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = serde_json::from_str::<RunConfig>(r#"{"kappa_plus": 3.0, "bogus": 1}"#);
        assert!(err.is_err());
    }

    #[test]
    fn partial_config_fills_defaults() {
        let cfg: RunConfig = serde_json::from_str(r#"{"h": 0.05, "profile": "example2"}"#).unwrap();
        assert_eq!(cfg.h, 0.05);
        assert_eq!(cfg.grid, [64, 64]);
        assert_eq!(cfg.profile, ProfileArg::Named("example2".into()));
    }

    #[test]
    fn seed_override_wins() {
        let r = resolve(RunConfig::default(), Some(99)).unwrap();
        assert_eq!(r.run.seed, 99);
        assert_eq!(r.synthesis.seed, 99);
    }

    #[test]
    fn config_echo_round_trips() {
        let cfg = RunConfig::default();
        let text = serde_json::to_string(&cfg).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cfg);
    }
}
