//! Grating shape functions sampled on the period cell.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::spectral::grid::{ComplexGrid, PeriodicGrid};
use crate::spectral::transform::{analysis, synthesis, SpectralGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    /// `0.5 sin(3 pi x) (cos(2 pi y) - cos(4 pi y))` - smooth, a few modes in y.
    Example1,
    /// `|cos(2 pi x) cos(2 pi y)| - |sin(pi x) sin(2 pi y)|` - non-smooth,
    /// spectral content at every mode.
    Example2,
    /// User-supplied samples.
    Tabulated,
}

/// Real shape function `psi` sampled on a grid; the physical surface is
/// `z = delta * psi`.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceProfile {
    kind: ProfileKind,
    values: ComplexGrid,
}

impl SurfaceProfile {
    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn values(&self) -> &ComplexGrid {
        &self.values
    }

    pub fn grid(&self) -> &PeriodicGrid {
        self.values.grid()
    }

    /// Wrap tabulated samples; imaginary parts must be identically zero.
    pub fn tabulated(values: ComplexGrid) -> Result<Self> {
        if values.values().iter().any(|v| v.im != 0.0) {
            return Err(Error::Parameter(
                "surface profile must be real-valued".into(),
            ));
        }
        Ok(Self {
            kind: ProfileKind::Tabulated,
            values,
        })
    }

    pub fn from_real_samples(grid: PeriodicGrid, samples: Vec<f64>) -> Result<Self> {
        let values = ComplexGrid::from_values(
            grid,
            samples
                .into_iter()
                .map(|v| Complex64::new(v, 0.0))
                .collect(),
        )?;
        Self::tabulated(values)
    }

    /// The same profile on another grid over the same periods. Built-in kinds
    /// re-sample their defining formula; tabulated profiles are extended by
    /// trigonometric interpolation of their resolvable modes.
    pub fn resample(&self, grid: &PeriodicGrid) -> Result<Self> {
        let src = self.grid();
        if (grid.period1() - src.period1()).abs() > 0.0
            || (grid.period2() - src.period2()).abs() > 0.0
        {
            return Err(Error::GridMismatch(
                "resample target must keep the periods".into(),
            ));
        }
        match self.kind {
            ProfileKind::Example1 => Ok(profile_example1(grid.clone())),
            ProfileKind::Example2 => Ok(profile_example2(grid.clone())),
            ProfileKind::Tabulated => {
                let spec = analysis(&self.values)?;
                let mut coeffs = vec![Complex64::ZERO; grid.len()];
                for (mode, c) in spec.iter() {
                    if grid.contains_mode(mode) {
                        let (k1, k2) = grid.bin_of_mode(mode);
                        coeffs[grid.index(k1, k2)] = c;
                    }
                }
                let field = synthesis(&SpectralGrid::from_coeffs(grid.clone(), coeffs)?);
                // interpolation of a real field stays real to rounding
                let real = field
                    .values()
                    .iter()
                    .map(|v| Complex64::new(v.re, 0.0))
                    .collect();
                Ok(Self {
                    kind: ProfileKind::Tabulated,
                    values: ComplexGrid::from_values(grid.clone(), real)?,
                })
            }
        }
    }
}

fn sample(grid: PeriodicGrid, kind: ProfileKind, f: impl Fn(f64, f64) -> f64) -> SurfaceProfile {
    let values = ComplexGrid::from_fn(grid, |x, y| Complex64::new(f(x, y), 0.0))
        .expect("profile formulas are finite");
    SurfaceProfile { kind, values }
}

pub fn profile_example1(grid: PeriodicGrid) -> SurfaceProfile {
    sample(grid, ProfileKind::Example1, |x, y| {
        0.5 * (3.0 * PI * x).sin() * ((2.0 * PI * y).cos() - (4.0 * PI * y).cos())
    })
}

pub fn profile_example2(grid: PeriodicGrid) -> SurfaceProfile {
    sample(grid, ProfileKind::Example2, |x, y| {
        ((2.0 * PI * x).cos() * (2.0 * PI * y).cos()).abs()
            - ((PI * x).sin() * (2.0 * PI * y).sin()).abs()
    })
}
