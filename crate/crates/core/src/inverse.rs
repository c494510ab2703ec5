//! Surface reconstruction from single-illumination near-field data.
//!
//! The linearized data model is diagonal over lateral modes, so inversion is
//! coefficient-wise: subtract the flat-interface background, divide by the
//! transfer coefficient, undo the propagation to the measurement plane, and
//! keep only modes below the noise-driven spectral cutoff.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::forward::FirstOrderSolution;
use crate::physics::{zeroth_order, Component, GratingConfig, ModeBasis, Side};
use crate::spectral::{analysis, synthesis, ComplexGrid, Mode, SpectralGrid};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Default small-coefficient guard, relative to `kappa_plus`.
pub const COEFF_GUARD: f64 = 1e-8;

/// Which measurement plane the data comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasurementSide {
    Reflection,
    Transmission,
}

impl MeasurementSide {
    pub fn side(self) -> Side {
        match self {
            MeasurementSide::Reflection => Side::Above,
            MeasurementSide::Transmission => Side::Below,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            MeasurementSide::Reflection => "reflection",
            MeasurementSide::Transmission => "transmission",
        }
    }
}

/// Reconstruction parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReconParams {
    pub side: MeasurementSide,
    /// Measured component, `E1` or `E2`.
    pub component: Component,
    /// Assumed deformation scale in wavelength units (enters the SNR).
    pub delta_wavelengths: f64,
    /// Assumed noise level `gamma`.
    pub noise_level: f64,
    /// Replaces `min(delta^-2, gamma^-1)` when set.
    pub snr_override: Option<f64>,
    /// Replaces the cutoff formula when set (value in 1/length).
    pub cutoff_override: Option<f64>,
    /// Absolute small-coefficient guard; defaults to `1e-8 * kappa_plus`.
    pub coeff_guard: Option<f64>,
}

impl ReconParams {
    pub fn new(side: MeasurementSide, component: Component) -> Result<Self> {
        if !component.is_tangential() {
            return Err(Error::Parameter(
                "only tangential components are measured".into(),
            ));
        }
        Ok(Self {
            side,
            component,
            delta_wavelengths: 0.0125,
            noise_level: 0.0,
            snr_override: None,
            cutoff_override: None,
            coeff_guard: None,
        })
    }

    fn validate(&self) -> Result<()> {
        if !self.component.is_tangential() {
            return Err(Error::Parameter(
                "only tangential components are measured".into(),
            ));
        }
        if self.snr_override.is_none() && self.delta_wavelengths <= 0.0 {
            return Err(Error::Parameter(
                "need delta > 0 or an explicit SNR override".into(),
            ));
        }
        if self.noise_level < 0.0 {
            return Err(Error::Parameter("noise level must be >= 0".into()));
        }
        if let Some(s) = self.snr_override {
            if !(s.is_finite() && s > 0.0) {
                return Err(Error::Parameter(format!(
                    "SNR override must be > 0, got {s}"
                )));
            }
        }
        if let Some(w) = self.cutoff_override {
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::Parameter(format!(
                    "cutoff override must be >= 0, got {w}"
                )));
            }
        }
        Ok(())
    }
}

/// Why a mode was left out of the reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExclusionReason {
    AboveCutoff,
    SmallCoefficient,
    ResonanceGuard,
}

impl ExclusionReason {
    pub fn label(self) -> &'static str {
        match self {
            ExclusionReason::AboveCutoff => "above-cutoff",
            ExclusionReason::SmallCoefficient => "small-C",
            ExclusionReason::ResonanceGuard => "resonance-guard",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReconResult {
    /// Reconstructed surface; the real part is the estimate, the imaginary
    /// part is kept as a diagnostic.
    pub surface: ComplexGrid,
    pub retained: Vec<Mode>,
    pub excluded: Vec<(Mode, ExclusionReason)>,
    /// Cutoff actually applied (1/length).
    pub omega: f64,
}

/// Signal-to-noise ratio `min(delta^-2, gamma^-1)` with `delta` in wavelength
/// units; a zero noise level leaves the deformation branch alone.
pub fn snr(delta_wavelengths: f64, noise_level: f64) -> Result<f64> {
    if !delta_wavelengths.is_finite() || delta_wavelengths <= 0.0 {
        return Err(Error::Parameter(format!(
            "delta must be positive, got {delta_wavelengths}"
        )));
    }
    if !noise_level.is_finite() || noise_level < 0.0 {
        return Err(Error::Parameter(format!(
            "noise level must be >= 0, got {noise_level}"
        )));
    }
    let from_delta = delta_wavelengths.powi(-2);
    Ok(if noise_level == 0.0 {
        from_delta
    } else {
        from_delta.min(noise_level.recip())
    })
}

/// Cutoff frequency solving `exp(|z| sqrt(omega^2 - kappa^2)) = SNR`
/// (natural logarithm): `omega = kappa sqrt(1 + (ln SNR / (kappa |z|))^2)`.
/// Always `>= kappa`, so the propagating band is never cut.
pub fn cutoff(plane_distance: f64, kappa: f64, snr: f64) -> Result<f64> {
    if !plane_distance.is_finite() || plane_distance <= 0.0 {
        return Err(Error::Parameter(format!(
            "plane distance must be positive, got {plane_distance}"
        )));
    }
    if !snr.is_finite() || snr < 1.0 {
        return Err(Error::Parameter(format!("SNR must be >= 1, got {snr}")));
    }
    let ratio = snr.ln() / (kappa * plane_distance);
    Ok(kappa * (1.0 + ratio * ratio).sqrt())
}

/// Hard spectral indicator: true where `|alpha_n| <= omega`.
pub fn filter(basis: &ModeBasis, omega: f64) -> Vec<bool> {
    basis
        .entries()
        .iter()
        .map(|e| e.alpha_norm() <= omega)
        .collect()
}

/// Reconstruct the surface from measured data on one plane.
pub fn reconstruct(
    data: &ComplexGrid,
    cfg: &GratingConfig,
    params: &ReconParams,
) -> Result<ReconResult> {
    params.validate()?;
    if data.grid() != &cfg.grid {
        return Err(Error::GridMismatch(
            "data grid does not match the configuration grid".into(),
        ));
    }

    let side = params.side.side();
    let j = params.component;
    let z = cfg.plane(side);
    let sol = FirstOrderSolution::assemble(cfg)?;
    let basis = sol.basis();

    let snr_value = match params.snr_override {
        Some(s) => s,
        None => snr(params.delta_wavelengths, params.noise_level)?,
    };
    let omega = match params.cutoff_override {
        Some(w) => w,
        None => cutoff(z.abs(), cfg.kappa(side), snr_value)?,
    };
    let coeff_guard = params.coeff_guard.unwrap_or(COEFF_GUARD * cfg.kappa_plus);

    // Subtracting the flat-interface background before the transform only
    // touches the zero mode algebraically, but keeps the large constant out
    // of the FFT so the evanescent back-propagation amplifies less rounding.
    let background = zeroth_order(cfg, z, side)[j.index()];
    let shifted = ComplexGrid::from_values(
        cfg.grid.clone(),
        data.values().iter().map(|v| v - background).collect(),
    )?;
    let data_spec = analysis(&shifted)?;
    let chi = filter(basis, omega);

    let mut coeffs = vec![Complex64::ZERO; cfg.grid.len()];
    let mut retained = Vec::new();
    let mut excluded = Vec::new();
    let mut any_usable = false;

    for (idx, entry) in basis.entries().iter().enumerate() {
        let mode = entry.mode;
        let c = match sol.coefficients(mode) {
            Some(c) => c.tangential[j.index()],
            None => {
                excluded.push((mode, ExclusionReason::ResonanceGuard));
                continue;
            }
        };
        if c.norm() < coeff_guard {
            excluded.push((mode, ExclusionReason::SmallCoefficient));
            continue;
        }
        any_usable = true;
        if !chi[idx] {
            excluded.push((mode, ExclusionReason::AboveCutoff));
            continue;
        }
        let back = match side {
            Side::Above => (-I * entry.beta_plus * cfg.z_plus).exp(),
            Side::Below => (I * entry.beta_minus * cfg.z_minus).exp(),
        };
        coeffs[idx] = data_spec.coeffs()[idx] / c * back;
        retained.push(mode);
    }

    if !any_usable {
        return Err(Error::UnrecoverableComponent {
            component: j.number(),
        });
    }

    let surface = synthesis(&SpectralGrid::from_coeffs(cfg.grid.clone(), coeffs)?);
    Ok(ReconResult {
        surface,
        retained,
        excluded,
        omega,
    })
}

/// Relative discrete `L^2` error over the period cell, cell-area weighted.
pub fn relative_l2_error(estimate: &ComplexGrid, truth: &ComplexGrid) -> Result<f64> {
    if estimate.grid() != truth.grid() {
        return Err(Error::GridMismatch(
            "estimate and reference use different grids".into(),
        ));
    }
    let area = truth.grid().cell_area();
    let mut num = 0.0;
    let mut den = 0.0;
    for (e, t) in estimate.values().iter().zip(truth.values()) {
        num += (e - t).norm_sqr();
        den += t.norm_sqr();
    }
    if den == 0.0 {
        return Err(Error::ZeroNormReference);
    }
    Ok((area * num).sqrt() / (area * den).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::physics::mode_basis;
    use crate::spectral::PeriodicGrid;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn test_config(n: usize) -> GratingConfig {
        GratingConfig::new(
            PI,
            1.6 * PI,
            0.025,
            0.2,
            -0.2,
            [1.0, 0.0],
            PeriodicGrid::new(1.0, 1.0, n, n).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn snr_examples() {
        assert!((snr(0.025, 0.01).unwrap() - 100.0).abs() < 1e-10);
        assert!((snr(0.025, 0.0).unwrap() - 1600.0).abs() < 1e-9);
        assert_eq!(snr(1.0, 1.0).unwrap(), 1.0);
        assert!(snr(0.0, 0.1).is_err());
        assert!(snr(-1.0, 0.1).is_err());
    }

    #[test]
    fn cutoff_examples() {
        // ln 100 / (0.2 pi) = 7.3294, omega/kappa = sqrt(1 + ratio^2)
        let w = cutoff(0.2, PI, 100.0).unwrap();
        assert!((w / PI - 7.39726).abs() < 1e-3);
        assert_eq!(cutoff(0.2, PI, 1.0).unwrap(), PI);
        // shrinking the distance raises the cutoff
        assert!(cutoff(0.1, PI, 100.0).unwrap() > w);
        assert!(cutoff(0.2, PI, 0.5).is_err());
        assert!(cutoff(0.0, PI, 10.0).is_err());
    }

    #[test]
    fn filter_retains_expected_circle() {
        let cfg = test_config(16);
        let basis = mode_basis(&cfg).unwrap();

        // below the smallest nonzero |alpha| only the zero mode survives
        let chi = filter(&basis, 0.9 * 2.0 * PI);
        let kept: Vec<_> = basis
            .entries()
            .iter()
            .zip(&chi)
            .filter(|(_, &k)| k)
            .map(|(e, _)| e.mode)
            .collect();
        assert_eq!(kept, vec![Mode::ZERO]);

        // omega = 7.397 pi retains exactly the radius-3 lattice circle
        let chi = filter(&basis, 7.39726 * PI);
        for (e, k) in basis.entries().iter().zip(&chi) {
            let r = ((e.mode.n1 * e.mode.n1 + e.mode.n2 * e.mode.n2) as f64).sqrt();
            assert_eq!(*k, r <= 3.70, "mode {} radius {r}", e.mode);
        }

        // huge omega keeps everything
        assert!(filter(&basis, 1e9).iter().all(|&k| k));
    }

    #[test]
    fn flat_interface_data_reconstructs_zero_surface() {
        let cfg = test_config(16);
        let bg = zeroth_order(&cfg, cfg.z_plus, Side::Above)[0];
        let data = ComplexGrid::constant(cfg.grid.clone(), bg);
        let params = ReconParams::new(MeasurementSide::Reflection, Component::E1).unwrap();
        let out = reconstruct(&data, &cfg, &params).unwrap();
        assert!(out.surface.max_abs() < 1e-12);
    }

    #[test]
    fn evanescent_backpropagation_magnitude() {
        let cfg = test_config(8);
        let basis = mode_basis(&cfg).unwrap();
        let e = basis.entry(Mode::new(1, 0));
        let amp = (-I * e.beta_plus * cfg.z_plus).exp().norm();
        assert!((amp - 2.969).abs() < 1e-3, "got {amp}");
    }

    #[test]
    fn relative_error_basics() {
        let g = PeriodicGrid::new(1.0, 1.0, 8, 8).unwrap();
        let truth = ComplexGrid::from_fn(g.clone(), |x, y| Complex64::new(x + y, 0.0)).unwrap();
        assert_eq!(relative_l2_error(&truth, &truth).unwrap(), 0.0);
        let zero = ComplexGrid::zeros(g.clone());
        assert!((relative_l2_error(&zero, &truth).unwrap() - 1.0).abs() < 1e-14);
        let scaled =
            ComplexGrid::from_values(g.clone(), truth.values().iter().map(|v| v * 1.1).collect())
                .unwrap();
        assert!((relative_l2_error(&scaled, &truth).unwrap() - 0.1).abs() < 1e-12);
        assert!(matches!(
            relative_l2_error(&zero, &zero),
            Err(Error::ZeroNormReference)
        ));
    }

    #[test]
    fn mode_accounting_covers_every_mode() {
        let cfg = test_config(8);
        let data = ComplexGrid::constant(
            cfg.grid.clone(),
            zeroth_order(&cfg, cfg.z_plus, Side::Above)[0],
        );
        let mut params = ReconParams::new(MeasurementSide::Reflection, Component::E1).unwrap();
        params.noise_level = 0.01;
        let out = reconstruct(&data, &cfg, &params).unwrap();
        assert_eq!(out.retained.len() + out.excluded.len(), cfg.grid.len());
        assert!(out
            .excluded
            .iter()
            .all(|(_, r)| *r == ExclusionReason::AboveCutoff));
    }

    #[test]
    fn matched_media_are_unrecoverable() {
        let mut cfg = test_config(8);
        cfg.kappa_minus = cfg.kappa_plus;
        let data = ComplexGrid::constant(cfg.grid.clone(), Complex64::ONE);
        let params = ReconParams::new(MeasurementSide::Reflection, Component::E1).unwrap();
        assert!(matches!(
            reconstruct(&data, &cfg, &params),
            Err(Error::UnrecoverableComponent { component: 1 })
        ));
    }

    #[test]
    fn grid_mismatch_is_rejected() {
        let cfg = test_config(8);
        let other = PeriodicGrid::new(1.0, 1.0, 16, 16).unwrap();
        let data = ComplexGrid::zeros(other);
        let params = ReconParams::new(MeasurementSide::Reflection, Component::E1).unwrap();
        assert!(matches!(
            reconstruct(&data, &cfg, &params),
            Err(Error::GridMismatch(_))
        ));
    }
}
