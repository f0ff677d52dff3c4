//! Command-line front end.
//!
//! Exit codes: 0 success, 1 failed verification, 2 bad configuration or
//! arguments, 3 numerical failure (including a non-converged eigensolve).

pub mod config;
pub mod csv;
pub mod svg;
pub mod verify;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::catmap::{analyze, escape_check, guard_radius, RationalPoint};
use crate::experiments::{nontrapping_sweep, trapped_sweep, NontrapRow, OpenMap};
use crate::hn::h_of;
use crate::quantizer::BumpKind;
use config::RunConfig;
use svg::{Plot, Series};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "opencat", version, about = "Spectra of open quantum cat maps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Leading eigenvalues for a cutoff equal to one near the fixed point.
    Trapped {
        #[arg(long)]
        config: PathBuf,
    },
    /// Spectral radius for a cutoff vanishing near the fixed point.
    Nontrapping {
        #[arg(long)]
        config: PathBuf,
        /// Replace each spectral radius by h^2 to test the slope pipeline.
        #[arg(long)]
        synthetic: bool,
    },
    /// Brute-force search for periodic orbits trapped near the origin.
    Classical {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 60)]
        q_max: i64,
        /// Ball radius; defaults to 1 / (4 lambda |Q|^2).
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Run the built-in consistency checks.
    Verify {
        /// Only `seed` is read from the config.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Use the opposite sign in the Fourier kernel; the Egorov checks must then fail.
        #[arg(long)]
        debug_flip_dft: bool,
    },
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

fn config_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_CONFIG,
        message: message.into(),
    }
}

fn numeric_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_NUMERIC,
        message: message.into(),
    }
}

type CmdResult = std::result::Result<i32, Failure>;

pub fn run() -> i32 {
    run_from(std::env::args_os())
}

pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Trapped { config } => cmd_trapped(&config),
        Command::Nontrapping { config, synthetic } => cmd_nontrapping(&config, synthetic),
        Command::Classical {
            config,
            q_max,
            radius,
        } => cmd_classical(&config, q_max, radius),
        Command::Verify {
            config,
            debug_flip_dft,
        } => cmd_verify(config.as_deref(), debug_flip_dft),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

/// Loads and validates the config, requiring `out_csv`.
fn load(path: &Path) -> std::result::Result<(RunConfig, PathBuf), Failure> {
    let cfg = RunConfig::load(path).map_err(|e| config_error(e.to_string()))?;
    let out = cfg
        .out_csv
        .clone()
        .ok_or_else(|| config_error("config has no out_csv"))?;
    Ok((cfg, out))
}

fn write_file(path: &Path, contents: &str) -> std::result::Result<(), Failure> {
    std::fs::write(path, contents)
        .map_err(|e| config_error(format!("cannot write {}: {e}", path.display())))
}

fn cmd_trapped(path: &Path) -> CmdResult {
    let (cfg, out_csv) = load(path)?;
    if cfg.cutoff.kind != BumpKind::ProductBump {
        return Err(config_error("trapped needs cutoff kind product_bump"));
    }
    let open = OpenMap::new(
        &cfg.cat_map(),
        cfg.cutoff.into(),
        cfg.quantization,
        cfg.resolution(),
    )
    .map_err(|e| config_error(e.to_string()))?;
    let sweep = trapped_sweep(&open, &cfg.n_list, cfg.phase.into(), cfg.k_count)
        .map_err(|e| numeric_error(e.to_string()))?;
    write_file(&out_csv, &csv::trapped_csv(&sweep.rows))?;
    if let Some(svg_path) = &cfg.out_svg {
        let series = (0..cfg.k_count)
            .map(|k| Series {
                label: format!("k={k}"),
                points: sweep
                    .rows
                    .iter()
                    .filter(|r| r.k == k)
                    .map(|r| (r.n as f64, r.re))
                    .collect(),
                target: sweep.reports.first().map(|r| r.targets[k]),
            })
            .collect();
        let plot = Plot {
            title: "Leading eigenvalues (dotted: limits)".into(),
            x_label: "N".into(),
            y_label: "Re mu_k".into(),
            log_x: false,
            log_y: false,
            series,
        };
        write_file(svg_path, &plot.render())?;
    }
    if let Some(r) = sweep.reports.iter().find(|r| !r.converged) {
        return Err(numeric_error(format!(
            "eigensolver did not converge at N={}",
            r.n
        )));
    }
    Ok(EXIT_OK)
}

fn cmd_nontrapping(path: &Path, synthetic: bool) -> CmdResult {
    let (cfg, out_csv) = load(path)?;
    if cfg.cutoff.kind != BumpKind::AnnulusProduct {
        return Err(config_error(
            "nontrapping needs cutoff kind annulus_product",
        ));
    }
    let rows = if synthetic {
        let h: Vec<f64> = cfg.n_list.iter().map(|&n| h_of(n)).collect();
        let r: Vec<f64> = h.iter().map(|x| x * x).collect();
        let slopes = crate::experiments::decay_slopes(&h, &r);
        cfg.n_list
            .iter()
            .enumerate()
            .map(|(i, &n)| NontrapRow {
                n,
                h: h[i],
                top_modulus: r[i],
                slope_vs_prev: slopes[i],
                converged: true,
            })
            .collect()
    } else {
        let open = OpenMap::new(
            &cfg.cat_map(),
            cfg.cutoff.into(),
            cfg.quantization,
            cfg.resolution(),
        )
        .map_err(|e| config_error(e.to_string()))?;
        nontrapping_sweep(&open, &cfg.n_list).map_err(|e| numeric_error(e.to_string()))?
    };
    write_file(&out_csv, &csv::nontrapping_csv(&rows))?;
    if let Some(svg_path) = &cfg.out_svg {
        let plot = Plot {
            title: "Spectral radius".into(),
            x_label: "h".into(),
            y_label: "max |mu|".into(),
            log_x: true,
            log_y: true,
            series: vec![Series {
                label: "max |mu|".into(),
                points: rows.iter().map(|r| (r.h, r.top_modulus)).collect(),
                target: None,
            }],
        };
        write_file(svg_path, &plot.render())?;
    }
    if let Some(r) = rows.iter().find(|r| !r.converged) {
        return Err(numeric_error(format!(
            "eigensolver did not converge at N={}",
            r.n
        )));
    }
    Ok(EXIT_OK)
}

fn format_point(p: &RationalPoint) -> String {
    format!("({}/{}, {}/{})", p.x_num, p.q, p.y_num, p.q)
}

fn cmd_classical(path: &Path, q_max: i64, radius: Option<f64>) -> CmdResult {
    let (cfg, out_csv) = load(path)?;
    if q_max < 1 {
        return Err(config_error(format!(
            "q_max must be at least 1, got {q_max}"
        )));
    }
    let m = cfg.cat_map();
    let radius = match radius {
        Some(r) => r,
        None => guard_radius(&analyze(&m).map_err(|e| config_error(e.to_string()))?),
    };
    let report = escape_check(&m, radius, q_max).map_err(|e| config_error(e.to_string()))?;
    write_file(&out_csv, &csv::classical_csv(&report.per_q))?;
    match &report.witness {
        Some(orbit) => {
            let pts: Vec<String> = orbit.iter().map(format_point).collect();
            println!("witness orbit inside radius {radius}: {}", pts.join(" -> "));
        }
        None => println!("all nonzero periodic orbits with q <= {q_max} leave radius {radius}"),
    }
    Ok(EXIT_OK)
}

fn cmd_verify(path: Option<&Path>, flip_dft: bool) -> CmdResult {
    let seed = match path {
        Some(p) => {
            RunConfig::load(p)
                .map_err(|e| config_error(e.to_string()))?
                .seed
        }
        None => 0,
    };
    let checks = verify::run(verify::VerifyOptions { seed, flip_dft });
    for c in &checks {
        println!("{}", c.line());
    }
    Ok(if checks.iter().all(|c| c.pass) {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}
