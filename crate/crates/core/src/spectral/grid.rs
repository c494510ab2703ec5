//! Periodic-cell sampling grids and the complex fields living on them.

use num_complex::Complex64;
use std::fmt;

use crate::error::{Error, Result};

/// Uniform sampling of one period cell `[0, L1) x [0, L2)`.
///
/// Sample points are `x_i = i*L1/N1`, `y_j = j*L2/N2` with the right/top
/// endpoint excluded, so the grid covers exactly one period.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicGrid {
    period: [f64; 2],
    samples: [usize; 2],
}

impl PeriodicGrid {
    /// Sample counts must be even and at least 4 so every mode index range
    /// `[-N/2, N/2)` is well formed.
    pub fn new(period1: f64, period2: f64, n1: usize, n2: usize) -> Result<Self> {
        if !(period1.is_finite() && period2.is_finite()) || period1 <= 0.0 || period2 <= 0.0 {
            return Err(Error::InvalidGrid(format!(
                "periods must be positive, got ({period1}, {period2})"
            )));
        }
        for n in [n1, n2] {
            if n < 4 || n % 2 != 0 {
                return Err(Error::InvalidGrid(format!(
                    "sample counts must be even and >= 4, got ({n1}, {n2})"
                )));
            }
        }
        Ok(Self {
            period: [period1, period2],
            samples: [n1, n2],
        })
    }

    pub fn period1(&self) -> f64 {
        self.period[0]
    }

    pub fn period2(&self) -> f64 {
        self.period[1]
    }

    pub fn n1(&self) -> usize {
        self.samples[0]
    }

    pub fn n2(&self) -> usize {
        self.samples[1]
    }

    pub fn len(&self) -> usize {
        self.samples[0] * self.samples[1]
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.period[0] / self.samples[0] as f64
    }

    pub fn y(&self, j: usize) -> f64 {
        j as f64 * self.period[1] / self.samples[1] as f64
    }

    /// Row-major storage index of sample `(i, j)`.
    pub fn index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.samples[0] && j < self.samples[1]);
        i * self.samples[1] + j
    }

    pub fn cell_area(&self) -> f64 {
        (self.period[0] / self.samples[0] as f64) * (self.period[1] / self.samples[1] as f64)
    }

    /// Same periods, `factor` times the sample density in each direction.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        if factor == 0 {
            return Err(Error::Parameter("refinement factor must be >= 1".into()));
        }
        Self::new(
            self.period[0],
            self.period[1],
            self.samples[0] * factor,
            self.samples[1] * factor,
        )
    }

    /// Signed mode index of FFT bin `k` along an axis of length `n`:
    /// `k` for `k < n/2`, `k - n` otherwise (Nyquist lands on the negative side).
    fn signed(k: usize, n: usize) -> i32 {
        if k < n / 2 {
            k as i32
        } else {
            k as i32 - n as i32
        }
    }

    pub fn mode_at_bin(&self, k1: usize, k2: usize) -> Mode {
        Mode {
            n1: Self::signed(k1, self.samples[0]),
            n2: Self::signed(k2, self.samples[1]),
        }
    }

    /// FFT bin of a signed mode index (inverse of [`mode_at_bin`](Self::mode_at_bin)).
    pub fn bin_of_mode(&self, mode: Mode) -> (usize, usize) {
        let k1 = (mode.n1.rem_euclid(self.samples[0] as i32)) as usize;
        let k2 = (mode.n2.rem_euclid(self.samples[1] as i32)) as usize;
        (k1, k2)
    }

    /// True when the signed index lies in `[-N/2, N/2)` on both axes.
    pub fn contains_mode(&self, mode: Mode) -> bool {
        let h1 = self.samples[0] as i32 / 2;
        let h2 = self.samples[1] as i32 / 2;
        (-h1..h1).contains(&mode.n1) && (-h2..h2).contains(&mode.n2)
    }
}

/// Fourier mode index `n = (n1, n2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mode {
    pub n1: i32,
    pub n2: i32,
}

impl Mode {
    pub const ZERO: Mode = Mode { n1: 0, n2: 0 };

    pub fn new(n1: i32, n2: i32) -> Self {
        Self { n1, n2 }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.n1, self.n2)
    }
}

/// Complex samples on a [`PeriodicGrid`], row-major over `(i, j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexGrid {
    grid: PeriodicGrid,
    values: Vec<Complex64>,
}

impl ComplexGrid {
    pub fn zeros(grid: PeriodicGrid) -> Self {
        let n = grid.len();
        Self {
            grid,
            values: vec![Complex64::ZERO; n],
        }
    }

    pub fn constant(grid: PeriodicGrid, value: Complex64) -> Self {
        let n = grid.len();
        Self {
            grid,
            values: vec![value; n],
        }
    }

    pub fn from_values(grid: PeriodicGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "value count {} does not match grid size {}",
                values.len(),
                grid.len()
            )));
        }
        if !values.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFiniteField);
        }
        Ok(Self { grid, values })
    }

    #[cfg(test)]
    pub(crate) fn from_values_unchecked(grid: PeriodicGrid, values: Vec<Complex64>) -> Self {
        Self { grid, values }
    }

    /// Pointwise construction from sample coordinates.
    pub fn from_fn(grid: PeriodicGrid, mut f: impl FnMut(f64, f64) -> Complex64) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.len());
        for i in 0..grid.n1() {
            for j in 0..grid.n2() {
                values.push(f(grid.x(i), grid.y(j)));
            }
        }
        Self::from_values(grid, values)
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value(&self, i: usize, j: usize) -> Complex64 {
        self.values[self.grid.index(i, j)]
    }

    /// Keep every `factor`-th sample in both directions. Sample points of the
    /// coarse grid coincide with retained fine-grid points, so this is exact
    /// restriction, not interpolation.
    pub fn downsample(&self, factor: usize) -> Result<ComplexGrid> {
        if factor == 0 {
            return Err(Error::Parameter("downsample factor must be >= 1".into()));
        }
        if factor == 1 {
            return Ok(self.clone());
        }
        let (n1, n2) = (self.grid.n1(), self.grid.n2());
        if n1 % factor != 0 || n2 % factor != 0 {
            return Err(Error::Parameter(format!(
                "downsample factor {factor} does not divide grid ({n1}, {n2})"
            )));
        }
        let coarse = PeriodicGrid::new(
            self.grid.period1(),
            self.grid.period2(),
            n1 / factor,
            n2 / factor,
        )?;
        let mut values = Vec::with_capacity(coarse.len());
        for i in (0..n1).step_by(factor) {
            for j in (0..n2).step_by(factor) {
                values.push(self.values[self.grid.index(i, j)]);
            }
        }
        ComplexGrid::from_values(coarse, values)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_imag(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }
}
