//! The four subcommands.

use anyhow::{bail, Context};
use rayon::prelude::*;
use serde::Serialize;
use std::path::Path;
use std::time::Instant;

use gnfi_core::forward::{synthesize_data_refined, FirstOrderSolution};
use gnfi_core::inverse::{reconstruct, relative_l2_error};
use gnfi_core::spectral::ComplexGrid;
use gnfi_core::verify::full_report;
use gnfi_core::Error;

use crate::config::{resolve, Resolved, RunConfig};
use crate::dump::FieldDump;

fn real_part(grid: &ComplexGrid) -> ComplexGrid {
    ComplexGrid::from_values(
        grid.grid().clone(),
        grid.values()
            .iter()
            .map(|v| num_complex::Complex64::new(v.re, 0.0))
            .collect(),
    )
    .expect("real part stays finite")
}

fn warn_exclusions(resolved: &Resolved) -> anyhow::Result<()> {
    let sol = FirstOrderSolution::assemble(&resolved.cfg)?;
    for mode in sol.excluded() {
        eprintln!("warning: mode {mode} excluded by a small-divisor guard");
    }
    Ok(())
}

pub fn simulate(config: &Path, out: &Path, seed: Option<u64>) -> anyhow::Result<()> {
    let resolved = resolve(RunConfig::load(config)?, seed)?;
    resolved.run.echo()?;
    warn_exclusions(&resolved)?;

    let data = synthesize_data_refined(
        &resolved.cfg,
        &resolved.profile,
        &resolved.synthesis,
        resolved.component(),
        resolved.run.fine_factor,
    )?;
    let dump = FieldDump::from_field(
        &data,
        resolved.measurement_side(),
        resolved.component().number(),
        resolved.plane(),
    );
    dump.write_file(out)?;
    println!(
        "wrote {} ({}x{} samples, side {}, component {})",
        out.display(),
        dump.n1,
        dump.n2,
        resolved.measurement_side().label(),
        dump.component
    );
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct ReconReport {
    pub omega_used: f64,
    pub retained: usize,
    pub excluded: usize,
    pub error: Option<f64>,
    pub wall_ms: f64,
}

fn check_header(dump: &FieldDump, resolved: &Resolved) -> anyhow::Result<()> {
    let g = &resolved.cfg.grid;
    if (dump.n1 as usize, dump.n2 as usize) != (g.n1(), g.n2()) {
        bail!(
            "dump grid {}x{} does not match configured grid {}x{}",
            dump.n1,
            dump.n2,
            g.n1(),
            g.n2()
        );
    }
    if dump.period != [g.period1(), g.period2()] {
        bail!(
            "dump periods {:?} do not match configured periods {:?}",
            dump.period,
            [g.period1(), g.period2()]
        );
    }
    if dump.side != resolved.measurement_side() {
        bail!(
            "dump was measured on the {} side but the config asks for {}",
            dump.side.label(),
            resolved.measurement_side().label()
        );
    }
    if dump.component != resolved.component().number() {
        bail!(
            "dump holds component {} but the config asks for component {}",
            dump.component,
            resolved.component().number()
        );
    }
    let z = resolved.plane();
    if (dump.z_plane - z).abs() > 1e-12 * resolved.cfg.wavelength() {
        bail!(
            "dump plane z = {} does not match configured z = {z}",
            dump.z_plane
        );
    }
    Ok(())
}

pub fn reconstruct_cmd(config: &Path, data: &Path, out: &Path) -> anyhow::Result<()> {
    let resolved = resolve(RunConfig::load(config)?, None)?;
    resolved.run.echo()?;

    let dump = FieldDump::read_file(data)?;
    check_header(&dump, &resolved)?;
    let field = dump.to_field()?;

    let start = Instant::now();
    let result = reconstruct(&field, &resolved.cfg, &resolved.recon)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;

    // surface samples as x,y,phi rows
    let mut w =
        csv::Writer::from_path(out).with_context(|| format!("creating {}", out.display()))?;
    w.write_record(["x", "y", "phi"])?;
    let g = result.surface.grid().clone();
    for i in 0..g.n1() {
        for j in 0..g.n2() {
            w.serialize((g.x(i), g.y(j), result.surface.value(i, j).re))?;
        }
    }
    w.flush()?;

    // surface dump so reconstructions can feed back in as profiles
    let surface_dump_path = out.with_extension("surface.dump");
    FieldDump::from_field(
        &result.surface,
        resolved.measurement_side(),
        resolved.component().number(),
        0.0,
    )
    .write_file(&surface_dump_path)?;

    let truth = resolved.truth();
    let error = match relative_l2_error(&real_part(&result.surface), &truth) {
        Ok(e) => Some(e),
        Err(Error::ZeroNormReference) => None,
        Err(e) => return Err(e.into()),
    };
    let report = ReconReport {
        omega_used: result.omega,
        retained: result.retained.len(),
        excluded: result.excluded.len(),
        error,
        wall_ms,
    };
    let report_path = out.with_extension("report.json");
    std::fs::write(&report_path, serde_json::to_string_pretty(&report)?)?;
    println!("{}", serde_json::to_string(&report)?);
    println!("wrote {} and {}", out.display(), report_path.display());
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
struct SweepRow {
    delta: f64,
    h: f64,
    gamma: f64,
    seed: u64,
    error: Option<f64>,
    omega: Option<f64>,
    retained: Option<usize>,
    excluded: Option<usize>,
    wall_ms: f64,
    status: String,
}

fn run_cell(base: &RunConfig, delta: f64, h: f64, gamma: f64, seed: u64) -> SweepRow {
    let start = Instant::now();
    let mut run = base.clone();
    run.delta = delta;
    run.h = h;
    run.noise_level = gamma;
    run.seed = seed;
    run.sweep_delta.clear();
    run.sweep_h.clear();
    run.sweep_noise.clear();
    run.sweep_seeds.clear();

    let outcome = (|| -> anyhow::Result<(f64, f64, usize, usize)> {
        let resolved = resolve(run, None)?;
        let data = synthesize_data_refined(
            &resolved.cfg,
            &resolved.profile,
            &resolved.synthesis,
            resolved.component(),
            resolved.run.fine_factor,
        )?;
        let result = reconstruct(&data, &resolved.cfg, &resolved.recon)?;
        let error = relative_l2_error(&real_part(&result.surface), &resolved.truth())?;
        Ok((
            error,
            result.omega,
            result.retained.len(),
            result.excluded.len(),
        ))
    })();

    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    match outcome {
        Ok((error, omega, retained, excluded)) => SweepRow {
            delta,
            h,
            gamma,
            seed,
            error: Some(error),
            omega: Some(omega),
            retained: Some(retained),
            excluded: Some(excluded),
            wall_ms,
            status: "ok".into(),
        },
        Err(e) => SweepRow {
            delta,
            h,
            gamma,
            seed,
            error: None,
            omega: None,
            retained: None,
            excluded: None,
            wall_ms,
            status: format!("error: {e}"),
        },
    }
}

pub fn experiment(
    config: &Path,
    out: &Path,
    jobs: Option<usize>,
    seed: Option<u64>,
) -> anyhow::Result<()> {
    let run = {
        let mut r = RunConfig::load(config)?;
        if let Some(s) = seed {
            r.seed = s;
        }
        r
    };
    run.echo()?;

    let deltas = if run.sweep_delta.is_empty() {
        vec![run.delta]
    } else {
        run.sweep_delta.clone()
    };
    let hs = if run.sweep_h.is_empty() {
        vec![run.h]
    } else {
        run.sweep_h.clone()
    };
    let noises = if run.sweep_noise.is_empty() {
        vec![0.0]
    } else {
        run.sweep_noise.clone()
    };
    let seeds = if run.sweep_seeds.is_empty() {
        vec![run.seed]
    } else {
        run.sweep_seeds.clone()
    };

    let mut cells = Vec::new();
    for &d in &deltas {
        for &h in &hs {
            for &g in &noises {
                for &s in &seeds {
                    cells.push((d, h, g, s));
                }
            }
        }
    }

    let compute = || -> Vec<SweepRow> {
        cells
            .par_iter()
            .map(|&(d, h, g, s)| run_cell(&run, d, h, g, s))
            .collect()
    };
    let rows = match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .context("building worker pool")?
            .install(compute),
        None => compute(),
    };

    let mut w =
        csv::Writer::from_path(out).with_context(|| format!("creating {}", out.display()))?;
    for row in &rows {
        w.serialize(row)?;
    }
    w.flush()?;
    let failures = rows.iter().filter(|r| r.status != "ok").count();
    println!(
        "wrote {} ({} cells, {} failed)",
        out.display(),
        rows.len(),
        failures
    );
    Ok(())
}

/// Returns false when any check fails, so the caller can set the exit status.
pub fn verify(config: &Path) -> anyhow::Result<bool> {
    let resolved = resolve(RunConfig::load(config)?, None)?;
    resolved.run.echo()?;
    let report = full_report(
        &resolved.cfg,
        &resolved.profile,
        resolved.run.verify_mode_cap,
    )?;
    print!("{}", report.to_text());
    Ok(report.all_pass())
}

/// Entrypoint used by `main` and by integration tests.
pub fn dispatch(cmd: crate::Cmd) -> anyhow::Result<i32> {
    match cmd {
        crate::Cmd::Simulate { config, out, seed } => {
            simulate(&config, &out, seed)?;
            Ok(0)
        }
        crate::Cmd::Reconstruct { config, data, out } => {
            reconstruct_cmd(&config, &data, &out)?;
            Ok(0)
        }
        crate::Cmd::Experiment {
            config,
            out,
            jobs,
            seed,
        } => {
            experiment(&config, &out, jobs, seed)?;
            Ok(0)
        }
        crate::Cmd::Verify { config } => Ok(if verify(&config)? { 0 } else { 1 }),
    }
}
