//! Command-line driver: runs the verification suites from a TOML
//! configuration and writes a deterministic CSV report (plus optional SVG
//! sweep plots).
//!
//! Exit codes: 0 when every check passes, 1 when any check fails, 2 for
//! configuration or I/O errors.

mod config;
mod csv;
mod suites;
mod svg;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use config::{ExperimentConfig, SUITE_ORDER};
use suites::SuiteContext;

#[derive(Parser)]
#[command(
    name = "anisohardy",
    version,
    about = "Verification suites for anisotropic Hardy-type inequalities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites from a config file and write a CSV report.
    Run {
        /// Path to a TOML configuration file.
        config: PathBuf,
        /// Run a single suite instead of the configured selection.
        #[arg(long)]
        suite: Option<String>,
        /// Also write one SVG plot per sharpness sweep.
        #[arg(long)]
        plots: bool,
        /// Output directory (overrides the config).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Seed override for randomized components.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// List the available suites with their parameters.
    List {
        /// One tab-separated line per suite: name, parameters, description.
        #[arg(long)]
        porcelain: bool,
    },
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    // Pin the thread pool before any parallel work runs.
    if let Ok(v) = std::env::var("ANISOHARDY_THREADS") {
        match v.trim().parse::<usize>() {
            Ok(k) if k >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(k)
                    .build_global();
            }
            _ => {
                eprintln!("error: ANISOHARDY_THREADS must be a positive integer, got {v:?}");
                return 2;
            }
        }
    }
    match Cli::parse().command {
        Command::List { porcelain } => {
            list(porcelain);
            0
        }
        Command::Run {
            config,
            suite,
            plots,
            out,
            seed,
        } => run_experiment(&config, suite.as_deref(), plots, out, seed),
    }
}

fn list(porcelain: bool) {
    if porcelain {
        for (name, params, description) in suites::catalog() {
            println!("{name}\t{params}\t{description}");
        }
        println!("all\t-\tevery suite above, in order");
        return;
    }
    println!("available suites (run order):\n");
    for (name, params, description) in suites::catalog() {
        println!("  {name:<12} uses: {params}");
        for line in wrap(description, 64) {
            println!("      {line}");
        }
        println!();
    }
    println!("  {:<12} every suite above, in order", "all");
}

/// Greedy word wrap for the catalog descriptions.
fn wrap(text: &str, width: usize) -> Vec<String> {
    let mut lines = Vec::new();
    let mut line = String::new();
    for word in text.split_whitespace() {
        if !line.is_empty() && line.len() + 1 + word.len() > width {
            lines.push(std::mem::take(&mut line));
        }
        if !line.is_empty() {
            line.push(' ');
        }
        line.push_str(word);
    }
    if !line.is_empty() {
        lines.push(line);
    }
    lines
}

fn run_experiment(
    config_path: &std::path::Path,
    suite: Option<&str>,
    plots: bool,
    out: Option<PathBuf>,
    seed: Option<u64>,
) -> i32 {
    let mut cfg = match ExperimentConfig::load(config_path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            return 2;
        }
    };
    if let Err(e) = cfg.apply_overrides(suite, out.as_deref(), seed) {
        eprintln!("error: {e:#}");
        return 2;
    }
    let ctx = match SuiteContext::new(cfg) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            return 2;
        }
    };
    let report = match suites::run_selected(&ctx) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return 2;
        }
    };

    if let Err(e) = std::fs::create_dir_all(&ctx.cfg.out_dir) {
        eprintln!(
            "error: cannot create output directory {}: {e}",
            ctx.cfg.out_dir.display()
        );
        return 2;
    }
    let csv_path = ctx.cfg.out_dir.join("report.csv");
    if let Err(e) = std::fs::write(&csv_path, csv::render(&report)) {
        eprintln!("error: cannot write {}: {e}", csv_path.display());
        return 2;
    }
    if plots {
        let sweeps = match suites::sharpness_sweeps(&ctx) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: {e:#}");
                return 2;
            }
        };
        match svg::write_plots(&sweeps, &ctx.cfg.out_dir) {
            Ok(paths) => {
                for p in paths {
                    println!("plot: {}", p.display());
                }
            }
            Err(e) => {
                eprintln!("error: {e:#}");
                return 2;
            }
        }
    }

    for name in SUITE_ORDER {
        let total = report.rows.iter().filter(|r| r.suite == name).count();
        if total == 0 {
            continue;
        }
        let passed = report
            .rows
            .iter()
            .filter(|r| r.suite == name && r.pass)
            .count();
        println!("{name:<12} {passed}/{total} checks passed");
    }
    println!(
        "total        {}/{} checks passed (config {}, seed {})",
        report.rows.len() - report.failures(),
        report.rows.len(),
        report.config_hash,
        report.seed
    );
    println!("report: {}", csv_path.display());

    if report.all_pass() {
        0
    } else {
        for row in report.rows.iter().filter(|r| !r.pass) {
            eprintln!(
                "failed: {}/{} value {:.6e} reference {:.6e} tolerance {:.1e}",
                row.suite, row.check_id, row.value, row.reference, row.tolerance
            );
        }
        1
    }
}
