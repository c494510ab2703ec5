//! Periodic-cell sampling, discrete Fourier analysis/synthesis with a fixed
//! normalization, and the built-in example surface profiles.

mod grid;
mod profile;
mod transform;

pub use grid::{ComplexGrid, Mode, PeriodicGrid};
pub use profile::{profile_example1, profile_example2, ProfileKind, SurfaceProfile};
pub use transform::{analysis, synthesis, SpectralGrid};
