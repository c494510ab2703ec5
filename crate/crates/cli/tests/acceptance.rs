//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! per case before asserting. Run with `--nocapture` to see every line.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use gnfi_cli::dump::FieldDump;
use gnfi_core::forward::{synthesize_data, synthesize_data_refined, SynthesisSpec};
use gnfi_core::inverse::{
    cutoff, reconstruct, relative_l2_error, snr, MeasurementSide, ReconParams,
};
use gnfi_core::physics::{fresnel, mode_basis, Component, GratingConfig, Side};
use gnfi_core::spectral::{
    analysis, profile_example1, profile_example2, ComplexGrid, PeriodicGrid, SurfaceProfile,
};
use gnfi_core::verify::{coefficient_system_deviation, full_report};
use gnfi_core::Mode;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn config(n: usize, h_wavelengths: f64, delta_wavelengths: f64) -> GratingConfig {
    let lambda = 2.0; // kappa_plus = pi
    GratingConfig::new(
        PI,
        1.6 * PI,
        delta_wavelengths * lambda,
        h_wavelengths * lambda,
        -h_wavelengths * lambda,
        [1.0, 0.0],
        PeriodicGrid::new(1.0, 1.0, n, n).unwrap(),
    )
    .unwrap()
}

fn profile(kind: &str, grid: &PeriodicGrid) -> SurfaceProfile {
    match kind {
        "example1" => profile_example1(grid.clone()),
        _ => profile_example2(grid.clone()),
    }
}

fn truth(cfg: &GratingConfig, psi: &SurfaceProfile) -> ComplexGrid {
    ComplexGrid::from_values(
        cfg.grid.clone(),
        psi.values()
            .values()
            .iter()
            .map(|v| cfg.deformation * v)
            .collect(),
    )
    .unwrap()
}

fn real_part(grid: &ComplexGrid) -> ComplexGrid {
    ComplexGrid::from_values(
        grid.grid().clone(),
        grid.values()
            .iter()
            .map(|v| Complex64::new(v.re, 0.0))
            .collect(),
    )
    .unwrap()
}

fn max_alpha(cfg: &GratingConfig) -> f64 {
    mode_basis(cfg)
        .unwrap()
        .entries()
        .iter()
        .map(|e| e.alpha_norm())
        .fold(0.0, f64::max)
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Mean reconstruction error of the full noisy pipeline over 16 seeds.
fn mean_error_over_seeds(kind: &str, h: f64, gamma: f64, side: MeasurementSide) -> f64 {
    let cfg = config(64, h, 0.0125);
    let psi = profile(kind, &cfg.grid);
    let reference = truth(&cfg, &psi);
    let mut params = ReconParams::new(side, Component::E1).unwrap();
    params.delta_wavelengths = 0.0125;
    params.noise_level = gamma;
    let mut total = 0.0;
    for seed in 0..16u64 {
        let spec = SynthesisSpec {
            order: 1,
            noise_level: gamma,
            seed,
            side: side.side(),
        };
        let data = synthesize_data_refined(&cfg, &psi, &spec, Component::E1, 4).unwrap();
        let out = reconstruct(&data, &cfg, &params).unwrap();
        total += relative_l2_error(&real_part(&out.surface), &reference).unwrap();
    }
    total / 16.0
}

// --- criterion 1: exact linear recovery -----------------------------------

fn criterion1_case(kind: &str, h: f64, side: MeasurementSide) -> (f64, f64) {
    let cfg = config(64, h, 0.0125);
    let psi = profile(kind, &cfg.grid);
    let reference = truth(&cfg, &psi);
    let start = Instant::now();
    let data = synthesize_data(
        &cfg,
        &psi,
        &SynthesisSpec {
            order: 1,
            noise_level: 0.0,
            seed: 0,
            side: side.side(),
        },
        Component::E1,
    )
    .unwrap();
    let mut params = ReconParams::new(side, Component::E1).unwrap();
    params.cutoff_override = Some(max_alpha(&cfg) * 1.001);
    let out = reconstruct(&data, &cfg, &params).unwrap();
    let seconds = start.elapsed().as_secs_f64();
    let err = relative_l2_error(&real_part(&out.surface), &reference).unwrap();
    (err, seconds)
}

fn run_criterion1(h: f64) -> bool {
    let mut all = true;
    for kind in ["example1", "example2"] {
        for side in [MeasurementSide::Reflection, MeasurementSide::Transmission] {
            let (err, seconds) = criterion1_case(kind, h, side);
            let pass = err < 1e-10 && seconds < 1.0;
            all &= pass;
            println!(
                "criterion 1 [{kind}, {}, h={h}lambda]: error {err:.3e} ({seconds:.2}s) {}",
                side.label(),
                verdict(pass)
            );
        }
    }
    all
}

#[test]
fn criterion_1_exact_linear_recovery_h_0_025() {
    assert!(
        run_criterion1(0.025),
        "exact recovery at h = 0.025 lambda missed the 1e-10 budget"
    );
}

#[test]
fn criterion_1_exact_linear_recovery_h_0_1() {
    assert!(
        run_criterion1(0.1),
        "exact recovery at h = 0.1 lambda missed the 1e-10 budget"
    );
}

// --- criterion 2: independent coefficient oracle ---------------------------

#[test]
fn criterion_2_coefficient_oracle() {
    let cfg = config(64, 0.1, 0.0125);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for _ in 0..250 {
        let mode = Mode::new(rng.random_range(-32..32), rng.random_range(-32..32));
        let dev = coefficient_system_deviation(mode, &cfg).unwrap();
        worst = worst.max(dev);
    }
    let pass = worst < 1e-10;
    println!(
        "criterion 2 [250 random modes]: worst relative deviation {worst:.3e} {}",
        verdict(pass)
    );
    assert!(pass);
}

// --- criterion 3: residual suite -------------------------------------------

#[test]
fn criterion_3_residual_suite() {
    let start = Instant::now();
    let mut all = true;
    for kind in ["example1", "example2"] {
        let cfg = config(64, 0.1, 0.0125);
        let psi = profile(kind, &cfg.grid);
        let report = full_report(&cfg, &psi, gnfi_core::verify::DEFAULT_MODE_CAP).unwrap();
        let pass = report.all_pass();
        all &= pass;
        println!("criterion 3 [{kind}]: {}", verdict(pass));
        if !pass {
            println!("{}", report.to_text());
        }
    }

    // the verify subcommand must agree and exit 0
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("cfg.json"), "{}").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_gnfi"))
        .args(["verify", "--config", "cfg.json"])
        .current_dir(dir.path())
        .output()
        .unwrap();
    let exit_ok = out.status.success();
    all &= exit_ok;
    let seconds = start.elapsed().as_secs_f64();
    let runtime_ok = seconds < 10.0;
    println!(
        "criterion 3 [verify exit 0, runtime {seconds:.2}s < 10s]: {}",
        verdict(exit_ok && runtime_ok)
    );
    assert!(all && runtime_ok);
}

// --- criterion 4: Fresnel identities ---------------------------------------

#[test]
fn criterion_4_fresnel_identities() {
    let grid = PeriodicGrid::new(1.0, 1.0, 4, 4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let kp: f64 = rng.random_range(0.5..6.0);
        let km: f64 = rng.random_range(0.5..6.0);
        let cfg = GratingConfig::new(kp, km, 0.0, 0.1, -0.1, [1.0, 0.0], grid.clone()).unwrap();
        let f = fresnel(&cfg);
        worst = worst.max((1.0 + f.r - f.t).abs());
        worst = worst.max((kp * (1.0 - f.r) - km * f.t).abs());
    }
    let pass = worst < 1e-14;
    println!(
        "criterion 4 [1000 random pairs]: worst identity residual {worst:.3e} {}",
        verdict(pass)
    );
    assert!(pass);
}

// --- criterion 5: cutoff arithmetic and amplification bound -----------------

#[test]
fn criterion_5_cutoff_arithmetic() {
    let s = snr(0.025, 0.01).unwrap();
    let snr_ok = (s - 100.0).abs() < 1e-10;
    println!("criterion 5 [snr(0.025, 0.01) = {s}]: {}", verdict(snr_ok));

    let w = cutoff(0.2, PI, 100.0).unwrap() / PI;
    let cutoff_ok = (w - 7.397).abs() < 1e-3;
    println!(
        "criterion 5 [cutoff(0.2, pi, 100)/pi = {w:.5}]: {}",
        verdict(cutoff_ok)
    );

    // amplification bound across randomized configurations
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let mut worst_ratio = 0.0f64;
    let mut checked = 0usize;
    for _ in 0..25 {
        let kp = rng.random_range(0.6..3.0) * PI;
        let km = kp * rng.random_range(1.05..2.5);
        let h = rng.random_range(0.02..0.25);
        let cfg = match GratingConfig::new(
            kp,
            km,
            0.02,
            h,
            -h,
            [1.0, 0.0],
            PeriodicGrid::new(1.0, 1.0, 32, 32).unwrap(),
        ) {
            Ok(c) => c,
            Err(_) => continue,
        };
        let basis = match mode_basis(&cfg) {
            Ok(b) => b,
            Err(_) => continue,
        };
        let s = snr(rng.random_range(0.005..0.1), rng.random_range(0.001..0.2)).unwrap();
        for (side, sign) in [(Side::Above, -1.0), (Side::Below, 1.0)] {
            let z = cfg.plane(side);
            let omega = cutoff(z.abs(), cfg.kappa(side), s).unwrap();
            for e in basis.entries() {
                if e.alpha_norm() <= omega {
                    let amp = (sign * I * e.beta(side) * z).exp().norm();
                    worst_ratio = worst_ratio.max(amp / s);
                    checked += 1;
                }
            }
        }
    }
    let amp_ok = worst_ratio <= 1.0 + 1e-9;
    println!(
        "criterion 5 [amplification/SNR <= 1 over {checked} retained modes, worst {worst_ratio:.6}]: {}",
        verdict(amp_ok)
    );
    assert!(snr_ok && cutoff_ok && amp_ok);
}

// --- criterion 6: trend reproduction ----------------------------------------

#[test]
fn criterion_6_noise_and_distance_trends() {
    let start = Instant::now();
    let mut all = true;
    for kind in ["example1", "example2"] {
        // (a) more noise, larger error at fixed h = 0.1 lambda
        let e1 = mean_error_over_seeds(kind, 0.1, 0.01, MeasurementSide::Reflection);
        let e5 = mean_error_over_seeds(kind, 0.1, 0.05, MeasurementSide::Reflection);
        let a_ok = e5 > e1;
        all &= a_ok;
        println!(
            "criterion 6a [{kind}]: error(gamma=5%) {e5:.4} > error(gamma=1%) {e1:.4} {}",
            verdict(a_ok)
        );

        // (b) shrinking h decreases the error at gamma = 1%
        let hs = [0.1, 0.075, 0.05, 0.025];
        let errs: Vec<f64> = hs
            .iter()
            .map(|&h| mean_error_over_seeds(kind, h, 0.01, MeasurementSide::Reflection))
            .collect();
        let mut inversions = 0;
        let mut worst_inversion = 0.0f64;
        for w in errs.windows(2) {
            if w[1] > w[0] {
                inversions += 1;
                worst_inversion = worst_inversion.max((w[1] - w[0]) / w[0]);
            }
        }
        let b_ok = inversions == 0 || (inversions == 1 && worst_inversion <= 0.05);
        all &= b_ok;
        println!(
            "criterion 6b [{kind}]: errors over h=(0.1,0.075,0.05,0.025)lambda = {:?}, {} inversion(s), worst +{:.1}% {}",
            errs.iter().map(|e| (e * 1e4).round() / 1e4).collect::<Vec<_>>(),
            inversions,
            worst_inversion * 100.0,
            verdict(b_ok)
        );
    }
    let seconds = start.elapsed().as_secs_f64();
    let runtime_ok = seconds < 120.0;
    println!(
        "criterion 6 [runtime {seconds:.1}s < 120s]: {}",
        verdict(runtime_ok)
    );
    assert!(all && runtime_ok);
}

// --- criterion 7: super-resolution evidence ---------------------------------

#[test]
fn criterion_7_super_resolution() {
    let cfg = config(64, 0.025, 0.0125);
    let psi = profile("example2", &cfg.grid);
    let reference = truth(&cfg, &psi);

    let mut params = ReconParams::new(MeasurementSide::Reflection, Component::E1).unwrap();
    params.delta_wavelengths = 0.0125;
    params.noise_level = 0.01;

    // the same reconstruction restricted to the propagating band; mode-wise
    // independence makes this identical to zeroing the evanescent modes
    let mut propagating_only = params;
    propagating_only.cutoff_override = Some(cfg.kappa_plus);

    let mut evanescent_retained = false;
    let (mut err_full, mut err_prop) = (0.0, 0.0);
    for seed in 0..16u64 {
        let data = synthesize_data_refined(
            &cfg,
            &psi,
            &SynthesisSpec {
                order: 1,
                noise_level: 0.01,
                seed,
                side: Side::Above,
            },
            Component::E1,
            4,
        )
        .unwrap();
        let full = reconstruct(&data, &cfg, &params).unwrap();
        let basis = mode_basis(&cfg).unwrap();
        evanescent_retained |= full
            .retained
            .iter()
            .any(|m| basis.entry(*m).alpha_norm() > cfg.kappa_plus);
        let prop = reconstruct(&data, &cfg, &propagating_only).unwrap();
        err_full += relative_l2_error(&real_part(&full.surface), &reference).unwrap() / 16.0;
        err_prop += relative_l2_error(&real_part(&prop.surface), &reference).unwrap() / 16.0;
    }

    println!(
        "criterion 7 [evanescent modes retained]: {}",
        verdict(evanescent_retained)
    );
    let zeroing_hurts = err_prop > err_full;
    println!(
        "criterion 7 [zeroing evanescent modes increases error: {err_prop:.4} vs {err_full:.4}]: {}",
        verdict(zeroing_hurts)
    );
    assert!(evanescent_retained && zeroing_hurts);
}

// --- criterion 8: determinism and I/O ---------------------------------------

fn brute_force_analysis(field: &ComplexGrid) -> Vec<Complex64> {
    let g = field.grid();
    let (n1, n2) = (g.n1(), g.n2());
    let tw = |n: usize| -> Vec<Complex64> {
        (0..n)
            .map(|k| Complex64::from_polar(1.0, -2.0 * PI * k as f64 / n as f64))
            .collect()
    };
    let (w1, w2) = (tw(n1), tw(n2));
    let mut out = vec![Complex64::ZERO; n1 * n2];
    for k1 in 0..n1 {
        for k2 in 0..n2 {
            let mut acc = Complex64::ZERO;
            for i in 0..n1 {
                for j in 0..n2 {
                    acc += field.value(i, j) * w1[(i * k1) % n1] * w2[(j * k2) % n2];
                }
            }
            out[k1 * n2 + k2] = acc / (n1 * n2) as f64;
        }
    }
    out
}

#[test]
fn criterion_8_determinism_and_io() {
    // identical seeds give byte-identical dumps through the binary
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("cfg.json"),
        r#"{"grid": [32, 32], "noise_level": 0.02, "seed": 11}"#,
    )
    .unwrap();
    let simulate = |out: &str| {
        let status = Command::new(env!("CARGO_BIN_EXE_gnfi"))
            .args(["simulate", "--config", "cfg.json", "--out", out])
            .current_dir(dir.path())
            .status()
            .unwrap();
        assert!(status.success());
    };
    simulate("a.dump");
    simulate("b.dump");
    let a = std::fs::read(dir.path().join("a.dump")).unwrap();
    let b = std::fs::read(dir.path().join("b.dump")).unwrap();
    let deterministic = a == b;
    println!(
        "criterion 8 [byte-identical dumps for equal seeds]: {}",
        verdict(deterministic)
    );

    // dump round-trip is lossless
    let dump = FieldDump::read_file(&dir.path().join("a.dump")).unwrap();
    let copy_path = dir.path().join("copy.dump");
    dump.write_file(&copy_path).unwrap();
    let lossless = std::fs::read(&copy_path).unwrap() == a;
    println!(
        "criterion 8 [dump round-trip lossless]: {}",
        verdict(lossless)
    );

    // analysis matches the direct DFT summation on a 16^2 grid
    let g = PeriodicGrid::new(1.0, 1.0, 16, 16).unwrap();
    let field = ComplexGrid::from_fn(g, |x, y| {
        Complex64::new((3.1 * x - y).sin() + 0.2, (x * y * 7.0).cos())
    })
    .unwrap();
    let fft = analysis(&field).unwrap();
    let brute = brute_force_analysis(&field);
    let worst = fft
        .coeffs()
        .iter()
        .zip(&brute)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    let dft_ok = worst < 1e-12;
    println!(
        "criterion 8 [FFT vs direct DFT on 16^2, worst {worst:.3e}]: {}",
        verdict(dft_ok)
    );
    assert!(deterministic && lossless && dft_ok);
}
