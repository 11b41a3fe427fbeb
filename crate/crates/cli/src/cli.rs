use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use kronecker_core::hypothesis::DEFAULT_BUDGET;
use kronecker_core::precision::{DEFAULT_BITS, DEFAULT_MAX_BITS};
use kronecker_core::scalar::parse_exact;
use num_traits::ToPrimitive;

use crate::certificate::{Certificate, Params};
use crate::commands::{self, Outcome, DEFAULT_SEED, DEFAULT_TAU_RANGE, DEFAULT_TRIALS};
use crate::error::{invalid, CliResult};
use crate::instance::InstanceFile;
use crate::presets::{generate, PresetOptions};

/// Accepts plain integers as well as `1e9` style counts.
fn parse_count(s: &str) -> Result<u64, String> {
    let r = parse_exact(s).map_err(|e| e.to_string())?;
    if !r.is_integer() {
        return Err(format!("{s} is not an integer"));
    }
    r.to_integer().to_u64().ok_or_else(|| format!("{s} is out of range"))
}

#[derive(Debug, Parser)]
#[command(name = "kronecker", version, about = "Quantitative Kronecker approximation: bounds, hypothesis checks, witnesses and transference")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Commands,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Worker threads for enumeration and trials; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Maximum number of points an enumeration may visit.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET, value_parser = parse_count)]
    pub budget: u64,
    /// Precision cap for automatic escalation.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_BITS)]
    pub max_bits: u32,
    /// Report a midpoint verdict, flagged float_only, when the cap is hit.
    #[arg(long, global = true)]
    pub float_fallback: bool,
    /// Write the JSON certificate or report here.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Commands {
    /// Print gamma, gamma1, the boxes and windows for dimension N.
    Bounds {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        n: u32,
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        eps: Vec<String>,
        #[arg(long)]
        delta: Option<String>,
        #[arg(long, default_value_t = DEFAULT_BITS)]
        bits: u32,
    },
    /// Hypothesis check, then find_t on randomly placed windows of length T*.
    #[command(name = "verify-theorem1")]
    VerifyTheorem1 {
        instance: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: u32,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// tau is drawn uniformly from [0, RANGE * T*].
        #[arg(long, default_value = DEFAULT_TAU_RANGE)]
        tau_range: String,
        #[arg(long)]
        strategy: Option<String>,
    },
    /// Minimum of |sum m_j lambda_j| over the theorem box (or --box).
    Hypothesis {
        instance: PathBuf,
        #[arg(long = "box", value_delimiter = ',')]
        int_box: Option<Vec<u64>>,
        #[arg(long)]
        strategy: Option<String>,
    },
    /// A witness t in [tau, tau + T*] (or --window), or an integer point for linear systems.
    Witness {
        instance: PathBuf,
        #[arg(long)]
        window: Option<String>,
        /// Route through the one-variable integer reduction.
        #[arg(long)]
        reduce: bool,
        #[arg(long)]
        strategy: Option<String>,
    },
    /// Dual pair, cutoff box and the transposed-form condition for a linear system.
    Transference {
        instance: PathBuf,
        /// `a`, `b` or an exact positive value.
        #[arg(long)]
        gamma1: Option<String>,
        /// Also run the necessity and sufficiency probes.
        #[arg(long)]
        probes: bool,
    },
    /// Theorem box against the Gonek-Montgomery box over a grid of eps.
    #[command(name = "compare-gm")]
    CompareGm {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        n: u32,
        /// `lo:hi:geometric:k` or `lo:hi:linear:k`.
        #[arg(long)]
        eps_grid: String,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_BITS)]
        bits: u32,
    },
    /// Write a generated instance file.
    #[command(name = "gen-preset")]
    GenPreset {
        /// sqrt-primes, one-sqrt2, golden, pi-e, random-rational or random-system.
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value = "0.05")]
        eps: String,
        #[arg(long, default_value = "0")]
        tau: String,
        #[arg(long)]
        delta: Option<String>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BITS)]
        precision_bits: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the fast searches against the brute-force oracles on one instance.
    #[command(name = "cross-check")]
    CrossCheck {
        instance: PathBuf,
        #[arg(long = "box", value_delimiter = ',')]
        int_box: Option<Vec<u64>>,
        #[arg(long)]
        window: Option<String>,
        #[arg(long)]
        step: Option<String>,
        #[arg(long)]
        strategy: Option<String>,
    },
    /// Re-run a certificate and check every verdict is reproduced.
    Verify { certificate: PathBuf },
}

fn base_params(g: &GlobalArgs) -> Params {
    Params {
        budget: g.budget,
        max_bits: g.max_bits,
        float_fallback: g.float_fallback,
        ..Params::default()
    }
}

fn instance_run(command: &str, path: &Path, params: Params, threads: Option<usize>) -> CliResult<Outcome> {
    let file = InstanceFile::load(path)?;
    Ok(commands::execute(command, &file, &params, threads)?.into())
}

pub fn dispatch(cli: &Cli) -> CliResult<Outcome> {
    let g = &cli.global;
    let threads = g.threads;
    if threads == Some(0) {
        return Err(invalid("--threads must be positive"));
    }
    let params = base_params(g);
    match &cli.command {
        Commands::Bounds { n, eps, delta, bits } => commands::bounds(*n, eps, delta.as_deref(), *bits, g.max_bits),
        Commands::VerifyTheorem1 {
            instance,
            trials,
            seed,
            tau_range,
            strategy,
        } => {
            let params = Params {
                trials: Some(*trials),
                seed: Some(*seed),
                tau_range: Some(tau_range.clone()),
                strategy: strategy.clone(),
                ..params
            };
            instance_run("verify-theorem1", instance, params, threads)
        }
        Commands::Hypothesis {
            instance,
            int_box,
            strategy,
        } => {
            let params = Params {
                int_box: int_box.clone(),
                strategy: strategy.clone(),
                ..params
            };
            instance_run("hypothesis", instance, params, threads)
        }
        Commands::Witness {
            instance,
            window,
            reduce,
            strategy,
        } => {
            let params = Params {
                window: window.clone(),
                reduce: *reduce,
                strategy: strategy.clone(),
                ..params
            };
            instance_run("witness", instance, params, threads)
        }
        Commands::Transference {
            instance,
            gamma1,
            probes,
        } => {
            let params = Params {
                gamma1: gamma1.clone(),
                probes: *probes,
                ..params
            };
            instance_run("transference", instance, params, threads)
        }
        Commands::CompareGm { n, eps_grid, bits, .. } => commands::compare_gm(*n, eps_grid, *bits, g.max_bits),
        Commands::GenPreset {
            kind,
            n,
            m,
            eps,
            tau,
            delta,
            seed,
            precision_bits,
            ..
        } => {
            let file = generate(&PresetOptions {
                kind: kind.clone(),
                n: *n,
                m: *m,
                eps: eps.clone(),
                tau: tau.clone(),
                delta: delta.clone(),
                seed: *seed,
                precision_bits: *precision_bits,
            })?;
            Ok(Outcome {
                code: 0,
                text: format!("{}\n", file.to_json()),
                json: None,
                csv: None,
            })
        }
        Commands::CrossCheck {
            instance,
            int_box,
            window,
            step,
            strategy,
        } => {
            let params = Params {
                int_box: int_box.clone(),
                window: window.clone(),
                step: step.clone(),
                strategy: strategy.clone(),
                ..params
            };
            instance_run("cross-check", instance, params, threads)
        }
        Commands::Verify { certificate } => commands::verify_certificate(&Certificate::load(certificate)?, threads),
    }
}

fn write_outputs(cli: &Cli, out: &Outcome) -> CliResult<()> {
    if let (Some(path), Some(json)) = (&cli.global.json, &out.json) {
        std::fs::write(path, json)?;
    }
    if let Commands::CompareGm { csv: Some(path), .. } = &cli.command {
        if let Some(csv) = &out.csv {
            std::fs::write(path, csv)?;
        }
    }
    if let Commands::GenPreset { out: Some(path), .. } = &cli.command {
        std::fs::write(path, &out.text)?;
    }
    Ok(())
}

/// Runs the parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> u8 {
    let result = dispatch(&cli).and_then(|out| {
        write_outputs(&cli, &out)?;
        Ok(out)
    });
    match result {
        Ok(out) => {
            let quiet = matches!(&cli.command, Commands::GenPreset { out: Some(_), .. });
            if !quiet {
                print!("{}", out.text);
            }
            out.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
