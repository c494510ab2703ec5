//! Analytic forward model through first order in the deformation scale, plus
//! synthetic near-field data generation with multiplicative uniform noise.
//!
//! Per lateral mode the first-order field on either side solves a two-point
//! boundary value problem whose outgoing homogeneous solution carries a single
//! transfer coefficient per component; the inhomogeneous part is a closed-form
//! particular solution that vanishes on the measurement planes. The map from
//! profile coefficients to first-order field coefficients is therefore
//! diagonal over modes.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::physics::{
    fresnel, mode_basis, Component, FresnelPair, GratingConfig, ModeBasis, ModeEntry, Side,
};
use crate::spectral::{analysis, synthesis, ComplexGrid, Mode, SpectralGrid, SurfaceProfile};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Relative small-divisor guard; each denominator is compared at its own
/// power of `kappa_plus`.
pub const DIVISOR_GUARD: f64 = 1e-9;

fn guarded_denominators(entry: &ModeEntry, cfg: &GratingConfig) -> Result<(Complex64, Complex64)> {
    let beta_sum = entry.beta_plus + entry.beta_minus;
    if beta_sum.norm() < DIVISOR_GUARD * cfg.kappa_plus {
        return Err(Error::SmallDivisor {
            mode: entry.mode,
            denominator: "beta_plus + beta_minus",
        });
    }
    let mixed = Complex64::new(entry.alpha_sq, 0.0) + entry.beta_plus * entry.beta_minus;
    if mixed.norm() < DIVISOR_GUARD * cfg.kappa_plus * cfg.kappa_plus {
        return Err(Error::SmallDivisor {
            mode: entry.mode,
            denominator: "|alpha|^2 + beta_plus*beta_minus",
        });
    }
    Ok((beta_sum, mixed))
}

/// Tangential transfer coefficient `C_jn` (first-order outgoing amplitude per
/// unit profile coefficient), `j` in `{1, 2}`.
pub fn c_coeff(entry: &ModeEntry, j: Component, cfg: &GratingConfig) -> Result<Complex64> {
    if !j.is_tangential() {
        return Err(Error::Parameter(
            "transfer coefficient C is defined for tangential components only".into(),
        ));
    }
    let (beta_sum, mixed) = guarded_denominators(entry, cfg)?;
    let [p1, p2] = cfg.polarization;
    let pa = p1 * entry.alpha[0] + p2 * entry.alpha[1];
    let (aj, pj) = (entry.alpha[j.index()], cfg.polarization[j.index()]);
    let front = 2.0 * I * cfg.kappa_plus * (cfg.kappa_plus - cfg.kappa_minus) / beta_sum;
    Ok(front * (aj * pa / mixed - pj))
}

/// Third-component outgoing amplitudes per unit profile coefficient:
/// `(above, below)`.
pub fn third_coeffs(entry: &ModeEntry, cfg: &GratingConfig) -> Result<(Complex64, Complex64)> {
    let (beta_sum, mixed) = guarded_denominators(entry, cfg)?;
    let [p1, p2] = cfg.polarization;
    let pa = p1 * entry.alpha[0] + p2 * entry.alpha[1];
    let common =
        2.0 * I * cfg.kappa_plus * (cfg.kappa_plus - cfg.kappa_minus) * pa / (beta_sum * mixed);
    Ok((entry.beta_minus * common, -entry.beta_plus * common))
}

/// Per-mode outgoing amplitudes, all per unit profile coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeCoefficients {
    /// `C_1n`, `C_2n`: shared by the upward and downward solutions.
    pub tangential: [Complex64; 2],
    /// Third-component amplitude of the upward solution.
    pub third_above: Complex64,
    /// Third-component amplitude of the downward solution.
    pub third_below: Complex64,
}

impl ModeCoefficients {
    pub fn compute(entry: &ModeEntry, cfg: &GratingConfig) -> Result<Self> {
        let c1 = c_coeff(entry, Component::E1, cfg)?;
        let c2 = c_coeff(entry, Component::E2, cfg)?;
        let (a3, b3) = third_coeffs(entry, cfg)?;
        Ok(Self {
            tangential: [c1, c2],
            third_above: a3,
            third_below: b3,
        })
    }

    /// Outgoing amplitude for component `j` on `side`.
    pub fn outgoing(&self, j: Component, side: Side) -> Complex64 {
        match (j, side) {
            (Component::E3, Side::Above) => self.third_above,
            (Component::E3, Side::Below) => self.third_below,
            (j, _) => self.tangential[j.index()],
        }
    }
}

/// First-order solution: per-mode transfer coefficients plus everything needed
/// to evaluate the per-mode field at any height between the surface and the
/// measurement planes.
#[derive(Debug, Clone)]
pub struct FirstOrderSolution {
    cfg: GratingConfig,
    basis: ModeBasis,
    fresnel: FresnelPair,
    coeffs: Vec<Option<ModeCoefficients>>,
    excluded: Vec<Mode>,
}

impl FirstOrderSolution {
    /// Solve every resolvable mode; modes tripping a small-divisor guard are
    /// recorded and later treated as zero.
    pub fn assemble(cfg: &GratingConfig) -> Result<Self> {
        let basis = mode_basis(cfg)?;
        let mut coeffs = Vec::with_capacity(basis.len());
        let mut excluded = Vec::new();
        for entry in basis.entries() {
            match ModeCoefficients::compute(entry, cfg) {
                Ok(c) => coeffs.push(Some(c)),
                Err(Error::SmallDivisor { mode, .. }) => {
                    excluded.push(mode);
                    coeffs.push(None);
                }
                Err(e) => return Err(e),
            }
        }
        Ok(Self {
            cfg: cfg.clone(),
            basis,
            fresnel: fresnel(cfg),
            coeffs,
            excluded,
        })
    }

    pub fn config(&self) -> &GratingConfig {
        &self.cfg
    }

    pub fn basis(&self) -> &ModeBasis {
        &self.basis
    }

    /// Modes excluded by the small-divisor guards.
    pub fn excluded(&self) -> &[Mode] {
        &self.excluded
    }

    pub fn coefficients(&self, mode: Mode) -> Option<&ModeCoefficients> {
        let (k1, k2) = self.basis.grid().bin_of_mode(mode);
        self.coeffs[self.basis.grid().index(k1, k2)].as_ref()
    }

    /// Per-mode field value `E_jn(z)` per unit profile coefficient; zero for
    /// guarded modes.
    pub fn transfer(&self, mode: Mode, j: Component, z: f64, side: Side) -> Complex64 {
        match self.coefficients(mode) {
            Some(c) => {
                let entry = self.basis.entry(mode);
                mode_field(&self.cfg, self.fresnel, entry, c, j, z, side).0
            }
            None => Complex64::ZERO,
        }
    }
}

/// Particular solution of the per-mode two-point problem and its z-derivative,
/// per unit profile coefficient. It vanishes at the measurement plane of its
/// side by the `(z_side - z)` factor.
pub(crate) fn particular(
    cfg: &GratingConfig,
    fr: FresnelPair,
    j: Component,
    z: f64,
    side: Side,
) -> (Complex64, Complex64) {
    let pj = cfg.polarization3()[j.index()];
    if pj == 0.0 {
        return (Complex64::ZERO, Complex64::ZERO);
    }
    match side {
        Side::Above => {
            let k = cfg.kappa_plus;
            let q = Complex64::new(0.0, -k * z).exp() - fr.r * Complex64::new(0.0, k * z).exp();
            let dq = -I
                * k
                * (Complex64::new(0.0, -k * z).exp() + fr.r * Complex64::new(0.0, k * z).exp());
            let front = -I * k * pj / cfg.z_plus;
            let w = cfg.z_plus - z;
            (front * w * q, front * (w * dq - q))
        }
        Side::Below => {
            let k = cfg.kappa_minus;
            let q = fr.t * Complex64::new(0.0, -k * z).exp();
            let dq = -I * k * q;
            let front = -I * k * pj / cfg.z_minus;
            let w = cfg.z_minus - z;
            (front * w * q, front * (w * dq - q))
        }
    }
}

/// Per-mode field value and z-derivative per unit profile coefficient.
pub(crate) fn mode_field(
    cfg: &GratingConfig,
    fr: FresnelPair,
    entry: &ModeEntry,
    coeffs: &ModeCoefficients,
    j: Component,
    z: f64,
    side: Side,
) -> (Complex64, Complex64) {
    let amp = coeffs.outgoing(j, side);
    let (hom, dhom) = match side {
        Side::Above => {
            let e = (I * entry.beta_plus * z).exp();
            (amp * e, I * entry.beta_plus * amp * e)
        }
        Side::Below => {
            let e = (-I * entry.beta_minus * z).exp();
            (amp * e, -I * entry.beta_minus * amp * e)
        }
    };
    let (part, dpart) = particular(cfg, fr, j, z, side);
    (hom + part, dhom + dpart)
}

/// Mode-wise first-order field at height `z`: the diagonal map applied to the
/// profile spectrum. Guarded modes come out zero; the exclusion list lives on
/// the solution.
pub fn first_order_field(
    sol: &FirstOrderSolution,
    psi_spec: &SpectralGrid,
    z: f64,
    side: Side,
    j: Component,
) -> Result<SpectralGrid> {
    if psi_spec.grid() != sol.basis.grid() {
        return Err(Error::GridMismatch(
            "profile spectrum and solution use different grids".into(),
        ));
    }
    let grid = psi_spec.grid().clone();
    let mut coeffs = Vec::with_capacity(grid.len());
    for (idx, (entry, psi_n)) in sol
        .basis
        .entries()
        .iter()
        .zip(psi_spec.coeffs().iter())
        .enumerate()
    {
        let c = match &sol.coeffs[idx] {
            Some(c) => mode_field(&sol.cfg, sol.fresnel, entry, c, j, z, side).0 * psi_n,
            None => Complex64::ZERO,
        };
        coeffs.push(c);
    }
    SpectralGrid::from_coeffs(grid, coeffs)
}

/// What to synthesize: expansion order, noise level, RNG seed, measurement side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthesisSpec {
    /// 0 keeps the flat-interface field only; 1 adds the first-order term.
    pub order: u8,
    /// Multiplicative noise level `gamma`, in `[0, 1)`.
    pub noise_level: f64,
    pub seed: u64,
    pub side: Side,
}

impl SynthesisSpec {
    pub fn validate(&self) -> Result<()> {
        if self.order > 1 {
            return Err(Error::Parameter(format!(
                "expansion order must be 0 or 1, got {}",
                self.order
            )));
        }
        if !(0.0..1.0).contains(&self.noise_level) {
            return Err(Error::Parameter(format!(
                "noise level must be in [0, 1), got {}",
                self.noise_level
            )));
        }
        Ok(())
    }
}

/// Multiply every sample by `(1 + gamma * r)` with `r` drawn i.i.d. uniform on
/// `[-1, 1)`, one real draw per sample in storage order. The generator is
/// ChaCha8 seeded from the 64-bit seed, so the stream is identical across
/// platforms and runs.
pub fn apply_noise(field: &ComplexGrid, gamma: f64, seed: u64) -> ComplexGrid {
    if gamma == 0.0 {
        return field.clone();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = field
        .values()
        .iter()
        .map(|&v| {
            let u: f64 = rng.random();
            v * (1.0 + gamma * (2.0 * u - 1.0))
        })
        .collect();
    ComplexGrid::from_values(field.grid().clone(), values)
        .expect("noise multiplier keeps fields finite")
}

/// Synthetic measurement of component `j` on the plane of `spec.side`.
pub fn synthesize_data(
    cfg: &GratingConfig,
    psi: &SurfaceProfile,
    spec: &SynthesisSpec,
    j: Component,
) -> Result<ComplexGrid> {
    spec.validate()?;
    if psi.grid() != &cfg.grid {
        return Err(Error::GridMismatch(
            "profile and configuration use different grids".into(),
        ));
    }
    let z = cfg.plane(spec.side);
    let background = crate::physics::zeroth_order(cfg, z, spec.side)[j.index()];
    let mut field = ComplexGrid::constant(cfg.grid.clone(), background);

    if spec.order >= 1 {
        let sol = FirstOrderSolution::assemble(cfg)?;
        let psi_spec = analysis(psi.values())?;
        let first = synthesis(&first_order_field(&sol, &psi_spec, z, spec.side, j)?);
        let values = field
            .values()
            .iter()
            .zip(first.values())
            .map(|(&bg, &f)| bg + cfg.deformation * f)
            .collect();
        field = ComplexGrid::from_values(cfg.grid.clone(), values)?;
    }

    Ok(apply_noise(&field, spec.noise_level, spec.seed))
}

/// Synthesize on a `factor`-times finer grid, restrict to the target grid,
/// then apply noise on the target grid. Restriction aliases profile content
/// beyond the target Nyquist range into the resolvable band, so the inverse
/// model no longer sees data generated by its own exact discrete forward map.
pub fn synthesize_data_refined(
    cfg: &GratingConfig,
    psi: &SurfaceProfile,
    spec: &SynthesisSpec,
    j: Component,
    factor: usize,
) -> Result<ComplexGrid> {
    spec.validate()?;
    if factor <= 1 {
        return synthesize_data(cfg, psi, spec, j);
    }
    let fine_grid = cfg.grid.refined(factor)?;
    let mut fine_cfg = cfg.clone();
    fine_cfg.grid = fine_grid.clone();
    let fine_psi = psi.resample(&fine_grid)?;
    let clean = SynthesisSpec {
        noise_level: 0.0,
        ..*spec
    };
    let fine = synthesize_data(&fine_cfg, &fine_psi, &clean, j)?;
    let coarse = fine.downsample(factor)?;
    Ok(apply_noise(&coarse, spec.noise_level, spec.seed))
}
