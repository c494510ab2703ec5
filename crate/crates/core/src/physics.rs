//! Physical configuration of the diffraction problem: wavenumbers, incidence,
//! per-mode lateral/longitudinal wavenumbers with the branch taken so every
//! outgoing mode either propagates away from the surface or decays, and the
//! planar (zeroth-order) reflection/transmission solution.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::spectral::{Mode, PeriodicGrid};

/// Relative tolerance of the Wood-anomaly guard.
pub const RESONANCE_GUARD: f64 = 1e-9;

/// Which half-space a field evaluation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Above,
    Below,
}

impl Side {
    pub fn label(self) -> &'static str {
        match self {
            Side::Above => "above",
            Side::Below => "below",
        }
    }
}

/// Electric field component index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    E1,
    E2,
    E3,
}

impl Component {
    pub fn index(self) -> usize {
        match self {
            Component::E1 => 0,
            Component::E2 => 1,
            Component::E3 => 2,
        }
    }

    pub fn number(self) -> u8 {
        self.index() as u8 + 1
    }

    pub fn from_number(j: u8) -> Result<Self> {
        match j {
            1 => Ok(Component::E1),
            2 => Ok(Component::E2),
            3 => Ok(Component::E3),
            _ => Err(Error::Parameter(format!(
                "component must be 1..=3, got {j}"
            ))),
        }
    }

    pub fn is_tangential(self) -> bool {
        !matches!(self, Component::E3)
    }
}

/// One problem instance: media, measurement planes, deformation scale,
/// normal-incidence polarization, and the sampling grid.
///
/// Everything downstream depends only on the two wavenumbers, so the media are
/// parametrized by `kappa_plus`/`kappa_minus` directly (lossless, both real).
#[derive(Debug, Clone, PartialEq)]
pub struct GratingConfig {
    pub kappa_plus: f64,
    pub kappa_minus: f64,
    /// Surface deformation scale `delta` (absolute length; surface is `delta * psi`).
    pub deformation: f64,
    /// Reflection measurement plane height, `> 0`.
    pub z_plus: f64,
    /// Transmission measurement plane, `< 0`.
    pub z_minus: f64,
    /// Unit tangential polarization `(p1, p2)`; the longitudinal component is
    /// zero at normal incidence.
    pub polarization: [f64; 2],
    pub grid: PeriodicGrid,
}

impl GratingConfig {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        kappa_plus: f64,
        kappa_minus: f64,
        deformation: f64,
        z_plus: f64,
        z_minus: f64,
        polarization: [f64; 2],
        grid: PeriodicGrid,
    ) -> Result<Self> {
        let cfg = Self {
            kappa_plus,
            kappa_minus,
            deformation,
            z_plus,
            z_minus,
            polarization,
            grid,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, k) in [
            ("kappa_plus", self.kappa_plus),
            ("kappa_minus", self.kappa_minus),
        ] {
            if !k.is_finite() || k <= 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be a positive real wavenumber, got {k}"
                )));
            }
        }
        if !(self.z_plus > 0.0 && self.z_minus < 0.0) {
            return Err(Error::InvalidConfig(format!(
                "need z_plus > 0 > z_minus, got ({}, {})",
                self.z_plus, self.z_minus
            )));
        }
        if !(self.deformation >= 0.0 && self.deformation.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "deformation must be >= 0, got {}",
                self.deformation
            )));
        }
        let [p1, p2] = self.polarization;
        if (p1 * p1 + p2 * p2 - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidConfig(format!(
                "polarization must be a unit vector, |p|^2 = {}",
                p1 * p1 + p2 * p2
            )));
        }
        Ok(())
    }

    /// Incident wavelength `2 pi / kappa_plus`.
    pub fn wavelength(&self) -> f64 {
        TAU / self.kappa_plus
    }

    pub fn kappa(&self, side: Side) -> f64 {
        match side {
            Side::Above => self.kappa_plus,
            Side::Below => self.kappa_minus,
        }
    }

    pub fn plane(&self, side: Side) -> f64 {
        match side {
            Side::Above => self.z_plus,
            Side::Below => self.z_minus,
        }
    }

    pub fn polarization3(&self) -> [f64; 3] {
        [self.polarization[0], self.polarization[1], 0.0]
    }
}

/// Longitudinal wavenumber `beta` with `beta^2 = kappa^2 - |alpha|^2`:
/// real positive for propagating modes, positive imaginary for evanescent.
pub fn longitudinal_wavenumber(kappa: f64, alpha_sq: f64) -> Complex64 {
    let d = kappa * kappa - alpha_sq;
    if d >= 0.0 {
        Complex64::new(d.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-d).sqrt())
    }
}

/// One lateral mode with its transverse and longitudinal wavenumbers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeEntry {
    pub mode: Mode,
    pub alpha: [f64; 2],
    pub alpha_sq: f64,
    pub beta_plus: Complex64,
    pub beta_minus: Complex64,
}

impl ModeEntry {
    pub fn alpha_norm(&self) -> f64 {
        self.alpha_sq.sqrt()
    }

    pub fn beta(&self, side: Side) -> Complex64 {
        match side {
            Side::Above => self.beta_plus,
            Side::Below => self.beta_minus,
        }
    }
}

/// All resolvable modes of a grid, in spectral storage order.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeBasis {
    grid: PeriodicGrid,
    entries: Vec<ModeEntry>,
}

impl ModeBasis {
    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn entries(&self) -> &[ModeEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, mode: Mode) -> &ModeEntry {
        let (k1, k2) = self.grid.bin_of_mode(mode);
        &self.entries[self.grid.index(k1, k2)]
    }
}

/// Build a [`ModeEntry`] for one mode without the grid enumeration.
pub fn mode_entry(cfg: &GratingConfig, mode: Mode) -> ModeEntry {
    let a1 = TAU * mode.n1 as f64 / cfg.grid.period1();
    let a2 = TAU * mode.n2 as f64 / cfg.grid.period2();
    let alpha_sq = a1 * a1 + a2 * a2;
    ModeEntry {
        mode,
        alpha: [a1, a2],
        alpha_sq,
        beta_plus: longitudinal_wavenumber(cfg.kappa_plus, alpha_sq),
        beta_minus: longitudinal_wavenumber(cfg.kappa_minus, alpha_sq),
    }
}

fn resonance_check(
    entry: &ModeEntry,
    kappa: f64,
    beta: Complex64,
    side: &'static str,
) -> Result<()> {
    let guard = RESONANCE_GUARD * kappa;
    if beta.norm() < guard || (entry.alpha_norm() - kappa).abs() < guard {
        return Err(Error::Resonance {
            mode: entry.mode,
            side,
        });
    }
    Ok(())
}

/// Enumerate all resolvable modes, rejecting configurations where any mode
/// sits on a Wood anomaly of either medium.
pub fn mode_basis(cfg: &GratingConfig) -> Result<ModeBasis> {
    let grid = cfg.grid.clone();
    let mut entries = Vec::with_capacity(grid.len());
    for k1 in 0..grid.n1() {
        for k2 in 0..grid.n2() {
            let entry = mode_entry(cfg, grid.mode_at_bin(k1, k2));
            resonance_check(&entry, cfg.kappa_plus, entry.beta_plus, "above")?;
            resonance_check(&entry, cfg.kappa_minus, entry.beta_minus, "below")?;
            entries.push(entry);
        }
    }
    Ok(ModeBasis { grid, entries })
}

/// Planar-interface reflection/transmission amplitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FresnelPair {
    pub r: f64,
    pub t: f64,
}

pub fn fresnel(cfg: &GratingConfig) -> FresnelPair {
    let (kp, km) = (cfg.kappa_plus, cfg.kappa_minus);
    FresnelPair {
        r: (kp - km) / (kp + km),
        t: 2.0 * kp / (kp + km),
    }
}

/// Incident plane wave trace `p_j e^{-i kappa_plus z}` (independent of the
/// lateral coordinate at normal incidence).
pub fn incident_trace(cfg: &GratingConfig, z: f64) -> [Complex64; 3] {
    let phase = Complex64::new(0.0, -cfg.kappa_plus * z).exp();
    cfg.polarization3().map(|p| p * phase)
}

/// Flat-interface field: incident + reflected above, transmitted below.
pub fn zeroth_order(cfg: &GratingConfig, z: f64, side: Side) -> [Complex64; 3] {
    let FresnelPair { r, t } = fresnel(cfg);
    let factor = match side {
        Side::Above => {
            Complex64::new(0.0, -cfg.kappa_plus * z).exp()
                + r * Complex64::new(0.0, cfg.kappa_plus * z).exp()
        }
        Side::Below => t * Complex64::new(0.0, -cfg.kappa_minus * z).exp(),
    };
    cfg.polarization3().map(|p| p * factor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    pub(crate) fn test_config(n: usize) -> GratingConfig {
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
    fn beta_branch() {
        let cfg = test_config(8);
        let basis = mode_basis(&cfg).unwrap();
        let e = basis.entry(Mode::ZERO);
        assert!((e.beta_plus - Complex64::new(PI, 0.0)).norm() < 1e-14);
        assert!((e.beta_minus - Complex64::new(1.6 * PI, 0.0)).norm() < 1e-14);

        // (1,0): evanescent above (beta = i pi sqrt(3)) and below (i 1.2 pi)
        let e = basis.entry(Mode::new(1, 0));
        assert!((e.beta_plus - Complex64::new(0.0, PI * 3.0f64.sqrt())).norm() < 1e-12);
        assert!((e.beta_minus - Complex64::new(0.0, 1.2 * PI)).norm() < 1e-12);

        for e in basis.entries() {
            for (k, b) in [
                (cfg.kappa_plus, e.beta_plus),
                (cfg.kappa_minus, e.beta_minus),
            ] {
                assert!(b.im >= 0.0);
                let resid = (b * b - Complex64::new(k * k - e.alpha_sq, 0.0)).norm();
                assert!(resid < 1e-12 * k * k);
                if e.alpha_norm() < k {
                    assert!(b.im == 0.0 && b.re > 0.0);
                } else {
                    assert!(b.re == 0.0 && b.im > 0.0);
                }
            }
        }
    }

    #[test]
    fn wood_anomaly_is_rejected() {
        // period 2 puts |alpha| of (1,0) exactly on the upper circle
        let cfg = GratingConfig::new(
            PI,
            1.6 * PI,
            0.025,
            0.2,
            -0.2,
            [1.0, 0.0],
            PeriodicGrid::new(2.0, 2.0, 8, 8).unwrap(),
        )
        .unwrap();
        match mode_basis(&cfg) {
            Err(Error::Resonance { mode, side }) => {
                assert_eq!(mode.n1.abs() + mode.n2.abs(), 1);
                assert_eq!(side, "above");
            }
            other => panic!("expected resonance, got {other:?}"),
        }
    }

    #[test]
    fn fresnel_values_and_identities() {
        let cfg = test_config(8);
        let FresnelPair { r, t } = fresnel(&cfg);
        assert!((r + 3.0 / 13.0).abs() < 1e-14);
        assert!((t - 10.0 / 13.0).abs() < 1e-14);
        assert!((1.0 + r - t).abs() < 1e-14);
        assert!((cfg.kappa_plus * (1.0 - r) - cfg.kappa_minus * t).abs() < 1e-13);

        let matched = GratingConfig::new(
            2.0,
            2.0,
            0.0,
            0.1,
            -0.1,
            [0.0, 1.0],
            PeriodicGrid::new(1.0, 1.0, 4, 4).unwrap(),
        )
        .unwrap();
        let f = fresnel(&matched);
        assert_eq!(f.r, 0.0);
        assert_eq!(f.t, 1.0);
    }

    #[test]
    fn incident_trace_is_unimodular() {
        let cfg = test_config(8);
        let at0 = incident_trace(&cfg, 0.0);
        assert_eq!(at0[0], Complex64::ONE);
        assert_eq!(at0[1], Complex64::ZERO);
        assert_eq!(at0[2], Complex64::ZERO);
        for z in [-0.3, 0.0, 0.17, 2.0] {
            let e = incident_trace(&cfg, z);
            let norm: f64 = e.iter().map(|c| c.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-14);
        }
        let ez = incident_trace(&cfg, cfg.z_plus);
        assert!((ez[0] - Complex64::new(0.0, -cfg.kappa_plus * cfg.z_plus).exp()).norm() < 1e-15);
    }

    #[test]
    fn zeroth_order_is_continuous_at_interface() {
        let cfg = test_config(8);
        let above = zeroth_order(&cfg, 0.0, Side::Above);
        let below = zeroth_order(&cfg, 0.0, Side::Below);
        for j in 0..3 {
            assert!((above[j] - below[j]).norm() < 1e-14);
        }
        assert!((above[0] - Complex64::new(10.0 / 13.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn zeroth_order_reduces_to_incident_without_contrast() {
        let cfg = GratingConfig::new(
            2.0,
            2.0,
            0.0,
            0.1,
            -0.1,
            [1.0, 0.0],
            PeriodicGrid::new(1.0, 1.0, 4, 4).unwrap(),
        )
        .unwrap();
        for z in [0.05, 0.1] {
            let e = zeroth_order(&cfg, z, Side::Above);
            let inc = incident_trace(&cfg, z);
            for j in 0..3 {
                assert!((e[j] - inc[j]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn zeroth_order_satisfies_helmholtz_ode() {
        // second central difference in z reproduces -kappa^2 E
        let cfg = test_config(8);
        let h = 1e-4 * cfg.wavelength();
        for (side, kappa, z0) in [
            (Side::Above, cfg.kappa_plus, 0.1),
            (Side::Below, cfg.kappa_minus, -0.1),
        ] {
            let e = |z: f64| zeroth_order(&cfg, z, side)[0];
            let d2 = (e(z0 - h) - 2.0 * e(z0) + e(z0 + h)) / (h * h);
            let rel = (d2 + kappa * kappa * e(z0)).norm() / (kappa * kappa * e(z0).norm());
            assert!(rel < 1e-6, "relative ODE residual {rel}");
        }
    }

    #[test]
    fn config_validation() {
        let grid = PeriodicGrid::new(1.0, 1.0, 8, 8).unwrap();
        assert!(
            GratingConfig::new(PI, 1.6 * PI, 0.025, 0.2, 0.2, [1.0, 0.0], grid.clone()).is_err()
        );
        assert!(
            GratingConfig::new(-PI, 1.6 * PI, 0.025, 0.2, -0.2, [1.0, 0.0], grid.clone()).is_err()
        );
        assert!(GratingConfig::new(PI, 1.6 * PI, 0.025, 0.2, -0.2, [0.6, 0.7], grid).is_err());
    }
}
