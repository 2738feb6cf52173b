//! Command-line front end: one subcommand per sweep, CSV on stdout or to
//! `--out`.
//!
//! Settings are resolved in three layers: built-in defaults for the
//! subcommand, then a `--config` file, then flags.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use psqkd::sweep::{emit_csv, parse_settings, run_experiment, ExperimentConfig, ExperimentKind};
use psqkd::{build_state, Scheme, SchemeConfig};

#[derive(Parser, Debug)]
#[command(name = "psqkd", version, about = "Key-rate bounds for photon-subtracted CV-QKD")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Key rate against fixed channel transmissivity t_e.
    TransmissivitySweep(SweepArgs),
    /// Key rate against distance (fixed dB/km attenuation).
    DistanceSweep(SweepArgs),
    /// Distance sweep for each channel-noise level β² in --grid.
    NoiseGrid(SweepArgs),
    /// Distance sweep for each source photon number α² in --grid.
    PhotonGrid(SweepArgs),
    /// Fading-averaged rate against beam-wander deviation σ_b.
    SatelliteSweep(SweepArgs),
    /// Small-σ_b close-up for each β² in --grid.
    SatelliteCloseup(SweepArgs),
    /// Prints the sparse four-mode state, one ket per line.
    DumpState(DumpArgs),
}

#[derive(Args, Debug)]
struct PhysicsArgs {
    /// Scheme to evaluate; repeat for several (default: all three).
    #[arg(long = "scheme", value_name = "nops|tps|rps")]
    schemes: Vec<Scheme>,
    /// Source mean photon number α².
    #[arg(long)]
    alpha_sq: Option<f64>,
    /// Eve's mean photon number β² (channel noise).
    #[arg(long)]
    beta_sq: Option<f64>,
    /// Subtraction beam-splitter transmissivity.
    #[arg(long)]
    t_s: Option<f64>,
    /// Reconciliation efficiency f.
    #[arg(long)]
    recon_eff: Option<f64>,
    /// Photon-number truncation per mode.
    #[arg(long)]
    trunc: Option<usize>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    physics: PhysicsArgs,
    /// Gauss–Legendre nodes for the fading average.
    #[arg(long)]
    nodes: Option<usize>,
    /// Clamp negative per-instance rates to zero before averaging.
    #[arg(long, value_name = "BOOL", num_args = 0..=1, default_missing_value = "true")]
    clamp_negative: Option<bool>,
    /// First axis value (t_e, km or σ_b depending on the subcommand).
    #[arg(long)]
    start: Option<f64>,
    /// Last axis value.
    #[arg(long)]
    stop: Option<f64>,
    /// Number of axis points.
    #[arg(long)]
    points: Option<usize>,
    /// Axis spacing: linear or log.
    #[arg(long)]
    spacing: Option<String>,
    /// Comma-separated second-axis values (β² or α²).
    #[arg(long)]
    grid: Option<String>,
    /// Fiber attenuation in dB/km.
    #[arg(long)]
    atten: Option<f64>,
    /// Aperture radius.
    #[arg(long)]
    beta_r: Option<f64>,
    /// Beam-spot radius.
    #[arg(long)]
    w: Option<f64>,
    /// Output CSV path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Settings file with one `key = value` per line.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads (does not change the output).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args, Debug)]
struct DumpArgs {
    #[command(flatten)]
    physics: PhysicsArgs,
    /// Channel transmissivity.
    #[arg(long, default_value_t = 1.0)]
    t_e: f64,
}

impl SweepArgs {
    /// Flag values as settings, in the same vocabulary as config files.
    fn settings(&self) -> Vec<(&'static str, String)> {
        let mut out = physics_settings(&self.physics);
        let mut put = |k: &'static str, v: Option<String>| {
            if let Some(v) = v {
                out.push((k, v));
            }
        };
        put("nodes", self.nodes.map(|v| v.to_string()));
        put("clamp_negative", self.clamp_negative.map(|v| v.to_string()));
        put("start", self.start.map(|v| v.to_string()));
        put("stop", self.stop.map(|v| v.to_string()));
        put("points", self.points.map(|v| v.to_string()));
        put("spacing", self.spacing.clone());
        put("grid", self.grid.clone());
        put("atten_db_per_km", self.atten.map(|v| v.to_string()));
        put("beta_r", self.beta_r.map(|v| v.to_string()));
        put("w", self.w.map(|v| v.to_string()));
        put("threads", self.threads.map(|v| v.to_string()));
        put("out", self.out.as_ref().map(|p| p.display().to_string()));
        out
    }
}

fn physics_settings(p: &PhysicsArgs) -> Vec<(&'static str, String)> {
    let mut out = Vec::new();
    if !p.schemes.is_empty() {
        let names: Vec<&str> = p.schemes.iter().map(|s| s.as_str()).collect();
        out.push(("schemes", names.join(",")));
    }
    for (k, v) in [
        ("alpha_sq", p.alpha_sq),
        ("beta_sq", p.beta_sq),
        ("t_s", p.t_s),
        ("recon_eff", p.recon_eff),
    ] {
        if let Some(v) = v {
            out.push((k, v.to_string()));
        }
    }
    if let Some(n) = p.trunc {
        out.push(("trunc_n", n.to_string()));
    }
    out
}

fn resolve(kind: ExperimentKind, args: &SweepArgs) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::new(kind);
    if let Some(path) = &args.config {
        let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        for (k, v) in parse_settings(&text).with_context(|| format!("parsing config {}", path.display()))? {
            cfg.apply_setting(&k, &v)
                .with_context(|| format!("in config {}", path.display()))?;
        }
    }
    for (k, v) in args.settings() {
        cfg.apply_setting(k, &v)
            .with_context(|| format!("flag --{}", k.replace('_', "-")))?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run_sweep(kind: ExperimentKind, args: &SweepArgs) -> Result<()> {
    let cfg = resolve(kind, args)?;
    log::info!("running {kind} for {} scheme(s)", cfg.schemes.len());
    let result = run_experiment(&cfg)?;
    match &cfg.out {
        Some(path) => {
            emit_csv(&result, path)?;
            log::info!("wrote {} rows to {}", result.rows.len(), path.display());
        }
        None => std::io::stdout().lock().write_all(result.to_csv_string().as_bytes())?,
    }
    Ok(())
}

fn run_dump(args: &DumpArgs) -> Result<()> {
    let mut cfg = SchemeConfig::default();
    if let [scheme] = args.physics.schemes[..] {
        cfg.scheme = scheme;
    } else if !args.physics.schemes.is_empty() {
        anyhow::bail!("dump-state takes a single --scheme");
    }
    let p = &args.physics;
    cfg.alpha_sq = p.alpha_sq.unwrap_or(cfg.alpha_sq);
    cfg.beta_sq = p.beta_sq.unwrap_or(cfg.beta_sq);
    cfg.t_s = p.t_s.unwrap_or(cfg.t_s);
    cfg.recon_eff = p.recon_eff.unwrap_or(cfg.recon_eff);
    cfg.trunc_n = p.trunc.unwrap_or(cfg.trunc_n);
    let state = build_state(&cfg, args.t_e)?;
    std::io::stdout().lock().write_all(state.dump().as_bytes())?;
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::TransmissivitySweep(a) => run_sweep(ExperimentKind::TransmissivitySweep, a),
        Command::DistanceSweep(a) => run_sweep(ExperimentKind::DistanceSweep, a),
        Command::NoiseGrid(a) => run_sweep(ExperimentKind::NoiseGrid, a),
        Command::PhotonGrid(a) => run_sweep(ExperimentKind::PhotonGrid, a),
        Command::SatelliteSweep(a) => run_sweep(ExperimentKind::SatelliteSweep, a),
        Command::SatelliteCloseup(a) => run_sweep(ExperimentKind::SatelliteCloseup, a),
        Command::DumpState(a) => run_dump(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
