//! Discrete Fourier analysis/synthesis on the period cell.
//!
//! The normalization is fixed so that discrete coefficients coincide with
//! analytic Fourier series coefficients of band-limited fields:
//!
//! ```text
//! analysis:  u_n = (1/(N1*N2)) * sum_{i,j} u(x_i, y_j) e^{-i alpha_n.(x_i, y_j)}
//! synthesis: u(x, y) = sum_n u_n e^{+i alpha_n.(x, y)}
//! ```
//!
//! with `alpha_n = (2 pi n1 / L1, 2 pi n2 / L2)`. On the sample points the
//! phases reduce to the plain DFT kernel `e^{-2 pi i (n1 i / N1 + n2 j / N2)}`,
//! so both directions are served by an unnormalized FFT plus the single
//! `1/(N1*N2)` factor on analysis.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::spectral::grid::{ComplexGrid, Mode, PeriodicGrid};

/// Fourier coefficients on a [`PeriodicGrid`], stored in FFT bin order
/// (row-major over bins `(k1, k2)`; signed index `n = k` or `k - N`).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralGrid {
    grid: PeriodicGrid,
    coeffs: Vec<Complex64>,
}

impl SpectralGrid {
    pub fn zeros(grid: PeriodicGrid) -> Self {
        let n = grid.len();
        Self {
            grid,
            coeffs: vec![Complex64::ZERO; n],
        }
    }

    pub fn from_coeffs(grid: PeriodicGrid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "coefficient count {} does not match grid size {}",
                coeffs.len(),
                grid.len()
            )));
        }
        if !coeffs.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFiniteField);
        }
        Ok(Self { grid, coeffs })
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, mode: Mode) -> Complex64 {
        let (k1, k2) = self.grid.bin_of_mode(mode);
        self.coeffs[self.grid.index(k1, k2)]
    }

    /// Iterate `(mode, coefficient)` in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (Mode, Complex64)> + '_ {
        let n2 = self.grid.n2();
        self.coeffs.iter().enumerate().map(move |(idx, &c)| {
            let (k1, k2) = (idx / n2, idx % n2);
            (self.grid.mode_at_bin(k1, k2), c)
        })
    }
}

/// One 2-D unnormalized FFT pass over row-major data, `sign = -1` forward.
fn fft2_in_place(values: &mut [Complex64], n1: usize, n2: usize, forward: bool) {
    let mut planner = FftPlanner::new();
    let row_fft = if forward {
        planner.plan_fft_forward(n2)
    } else {
        planner.plan_fft_inverse(n2)
    };
    let col_fft = if forward {
        planner.plan_fft_forward(n1)
    } else {
        planner.plan_fft_inverse(n1)
    };

    for row in values.chunks_exact_mut(n2) {
        row_fft.process(row);
    }

    // Columns via transpose so the second pass also runs on contiguous rows.
    let mut scratch = vec![Complex64::ZERO; values.len()];
    for i in 0..n1 {
        for j in 0..n2 {
            scratch[j * n1 + i] = values[i * n2 + j];
        }
    }
    for col in scratch.chunks_exact_mut(n1) {
        col_fft.process(col);
    }
    for j in 0..n2 {
        for i in 0..n1 {
            values[i * n2 + j] = scratch[j * n1 + i];
        }
    }
}

/// Forward transform: field samples to Fourier coefficients.
pub fn analysis(field: &ComplexGrid) -> Result<SpectralGrid> {
    if !field
        .values()
        .iter()
        .all(|v| v.re.is_finite() && v.im.is_finite())
    {
        return Err(Error::NonFiniteField);
    }
    let grid = field.grid().clone();
    let mut coeffs = field.values().to_vec();
    fft2_in_place(&mut coeffs, grid.n1(), grid.n2(), true);
    let scale = 1.0 / grid.len() as f64;
    for c in &mut coeffs {
        *c *= scale;
    }
    Ok(SpectralGrid { grid, coeffs })
}

/// Inverse transform: Fourier coefficients to field samples. Exact inverse of
/// [`analysis`] up to rounding.
pub fn synthesis(spec: &SpectralGrid) -> ComplexGrid {
    let grid = spec.grid().clone();
    let mut values = spec.coeffs().to_vec();
    fft2_in_place(&mut values, grid.n1(), grid.n2(), false);
    ComplexGrid::from_values(grid, values).expect("synthesis of finite coefficients is finite")
}
