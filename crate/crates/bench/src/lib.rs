//! Shared fixtures for the pipeline benchmarks.

use std::f64::consts::PI;

use gnfi_core::physics::GratingConfig;
use gnfi_core::spectral::PeriodicGrid;

pub fn bench_config(n: usize, h_wavelengths: f64) -> GratingConfig {
    let lambda = 2.0;
    GratingConfig::new(
        PI,
        1.6 * PI,
        0.0125 * lambda,
        h_wavelengths * lambda,
        -h_wavelengths * lambda,
        [1.0, 0.0],
        PeriodicGrid::new(1.0, 1.0, n, n).unwrap(),
    )
    .unwrap()
}
