//! Near-field imaging of biperiodic dielectric gratings.
//!
//! A plane wave at normal incidence hits an interface `z = delta * psi(x, y)`
//! between two lossless dielectrics. This crate provides the analytic forward
//! model of the diffracted field through first order in the deformation scale
//! `delta`, synthetic measurement generation with multiplicative noise, and an
//! explicit FFT-based reconstruction of the surface from single-illumination
//! data on either the reflection or the transmission side, regularized by a
//! signal-to-noise driven spectral cutoff.
//!
//! Modules:
//! - [`spectral`]: period-cell grids, analysis/synthesis transforms, profiles
//! - [`physics`]: configuration, per-mode wavenumbers, flat-interface solution
//! - [`forward`]: first-order solution and data synthesis
//! - [`inverse`]: spectral-cutoff reconstruction and error metrics
//! - [`verify`]: independent residual oracles for every governing equation

pub mod error;
pub mod forward;
pub mod inverse;
pub mod physics;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use forward::{
    apply_noise, synthesize_data, synthesize_data_refined, FirstOrderSolution, ModeCoefficients,
    SynthesisSpec,
};
pub use inverse::{reconstruct, relative_l2_error, MeasurementSide, ReconParams, ReconResult};
pub use physics::{
    fresnel, mode_basis, Component, FresnelPair, GratingConfig, ModeBasis, ModeEntry, Side,
};
pub use spectral::{
    analysis, profile_example1, profile_example2, synthesis, ComplexGrid, Mode, PeriodicGrid,
    ProfileKind, SpectralGrid, SurfaceProfile,
};
pub use verify::{full_report, ResidualReport};
