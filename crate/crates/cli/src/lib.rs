//! Command-line driver: simulate synthetic near-field data, reconstruct
//! surfaces, sweep parameters, and verify the analytic solution.

use clap::{Parser, Subcommand};
use std::path::PathBuf;

pub mod commands;
pub mod config;
pub mod dump;

#[derive(Debug, Parser)]
#[command(name = "gnfi", version, about = "Grating near-field imaging toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Synthesize measurement data and write a binary field dump.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overrides the seed from the config file.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Reconstruct the surface from a field dump; writes CSV plus a report.
    Reconstruct {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Cartesian sweep over delta/h/noise/seed lists; writes long-format CSV.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads for the sweep (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
        /// Overrides the seed from the config file.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the residual oracle suite; exits nonzero if any check fails.
    Verify {
        #[arg(long)]
        config: PathBuf,
    },
}
