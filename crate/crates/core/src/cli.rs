//! `actinwire` command-line front end.
//!
//! Every command reads one config (defaults when `--config` is omitted),
//! applies overrides and writes CSV files into the `--out` directory. Each CSV
//! starts with a `# actinwire <version> config-hash=<hex>` line.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::charge_transport::throughput_curve;
use crate::config::{Config, ConfigError, PhaseSelection};
use crate::error::ModelError;
use crate::frequency_response::sweep;
use crate::monomer_circuit::{
    build_filament, monomer_rlc, CircuitMode, PAPER_C_PER_UM, PAPER_L_PER_UM, PAPER_R_PER_UM,
};
use crate::wannet::{campaign_seeds, run_campaign, summarize};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Caps the worker threads of a seed campaign.
pub const THREADS_ENV: &str = "ACTINWIRE_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "actinwire",
    version,
    about = "Actin nanowire channel model and nanonetwork simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// TOML configuration file; built-in defaults when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Output directory (created if missing).
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,

    /// `key=value` overrides, bare (`rho_ohm_m=1.6`) or qualified (`sweep.n_points=11`).
    #[arg(long, global = true, num_args = 1.., value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,

    /// Number of seeds for `simulate`.
    #[arg(long, global = true)]
    pub seeds: Option<u64>,

    /// Filament circuit source.
    #[arg(long, global = true)]
    pub mode: Option<ModeArg>,

    /// Phase definition for `sweep`.
    #[arg(long = "phase-mode", global = true)]
    pub phase_mode: Option<PhaseArg>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Per-monomer and per-µm circuit components with deviations from the quoted values.
    DeriveComponents,
    /// Attenuation, phase and group delay over frequency, one CSV per filament length.
    Sweep,
    /// Charge velocity and maximum throughput over time.
    Throughput,
    /// Throughput against the 5.5 kbit/s wireless molecular baseline.
    CompareFret,
    /// Seeded network spreading campaign.
    Simulate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Paper,
    Derived,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PhaseArg {
    Literal,
    Standard,
    Both,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) | Self::Usage(_) | Self::Io { .. } => 2,
            Self::Model(ModelError::ParameterDomain { .. } | ModelError::Scenario(_)) => 2,
            Self::Model(_) => 3,
        }
    }

    /// Machine-parsable category used in the error prefix.
    pub fn kind(&self) -> &'static str {
        if self.exit_code() == 2 {
            "config"
        } else {
            "model"
        }
    }
}

/// Loads the config named on the command line and folds the dedicated flags
/// into it as overrides.
pub fn effective_config(cli: &Cli) -> Result<Config, CliError> {
    let mut overrides = cli.overrides.clone();
    if let Some(n) = cli.seeds {
        overrides.push(format!("scenario.seeds={n}"));
    }
    if let Some(m) = cli.mode {
        let m = match m {
            ModeArg::Paper => "paper",
            ModeArg::Derived => "derived",
        };
        overrides.push(format!("circuit_mode=\"{m}\""));
    }
    if let Some(p) = cli.phase_mode {
        let p = match p {
            PhaseArg::Literal => "literal",
            PhaseArg::Standard => "standard",
            PhaseArg::Both => "both",
        };
        overrides.push(format!("phase_mode=\"{p}\""));
    }
    Ok(Config::load(cli.config.as_deref(), &overrides)?)
}

/// Runs one command; returns the short summary printed on success.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let cfg = effective_config(cli)?;
    fs::create_dir_all(&cli.out).map_err(|source| CliError::Io {
        path: cli.out.display().to_string(),
        source,
    })?;
    let out = Output {
        dir: &cli.out,
        header: format!("# actinwire {VERSION} config-hash={}\n", cfg.hash_hex()),
    };
    match cli.command {
        Command::DeriveComponents => cmd_derive_components(&cfg, &out),
        Command::Sweep => cmd_sweep(&cfg, &out),
        Command::Throughput => cmd_throughput(&cfg, &out),
        Command::CompareFret => cmd_compare_fret(&cfg, &out),
        Command::Simulate => cmd_simulate(&cfg, &out),
    }
}

struct Output<'a> {
    dir: &'a Path,
    header: String,
}

impl Output<'_> {
    fn write(&self, name: &str, body: &str) -> Result<PathBuf, CliError> {
        let path = self.dir.join(name);
        let mut text = self.header.clone();
        text.push_str(body);
        fs::write(&path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Ok(path)
    }

    fn write_plain(&self, name: &str, body: &str) -> Result<PathBuf, CliError> {
        let path = self.dir.join(name);
        fs::write(&path, body).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Ok(path)
    }
}

fn deviation_pct(value: f64, reference: f64) -> f64 {
    100.0 * (value - reference) / reference
}

fn cmd_derive_components(cfg: &Config, out: &Output) -> Result<String, CliError> {
    let m = monomer_rlc(&cfg.physical)?;
    let mut body = String::from("quantity,mode,value,quoted_value,deviation_pct\n");
    let mut row = |q: &str, mode: &str, v: f64, quoted: f64| {
        let _ = writeln!(body, "{q},{mode},{v},{quoted},{}", deviation_pct(v, quoted));
    };
    row("C0_F", "monomer", m.c0, 96e-18);
    row("L0_H", "monomer", m.l0, 1.7e-12);
    row("R0_ohm", "monomer", m.r0, 6.11e6);
    for mode in [CircuitMode::Paper, CircuitMode::Derived] {
        let c = build_filament(&cfg.physical, 1.0, mode, cfg.circuit.n_eff_per_um)?;
        let name = mode.to_string();
        row("R_eq_ohm_per_um", &name, c.r_eq, PAPER_R_PER_UM);
        row("L_eq_H_per_um", &name, c.l_eq, PAPER_L_PER_UM);
        row("C_eq_F_per_um", &name, c.c_eq, PAPER_C_PER_UM);
    }
    let report = out.write("components.csv", &body)?;
    let echoed = out.write_plain("effective_config.toml", &cfg.to_toml())?;
    Ok(format!(
        "derive-components: C0={:e} F L0={:e} H R0={:e} ohm -> {} ({})",
        m.c0,
        m.l0,
        m.r0,
        report.display(),
        echoed.display()
    ))
}

fn distance_label(d: f64) -> String {
    format!("{d}").replace('.', "p")
}

fn cmd_sweep(cfg: &Config, out: &Output) -> Result<String, CliError> {
    let s = &cfg.sweep;
    if s.distances_um.is_empty() {
        return Err(CliError::Usage("sweep.distances_um is empty".into()));
    }
    let modes = s.phase_mode.modes();
    let mut files = 0;
    for &d in &s.distances_um {
        let circuit = build_filament(
            &cfg.physical,
            d,
            cfg.circuit.circuit_mode,
            cfg.circuit.n_eff_per_um,
        )?;
        for &mode in modes {
            let points = sweep(&circuit, s.f_start_hz, s.f_stop_hz, s.n_points, mode)?;
            let mut body = String::from("freq_hz,omega_rad_s,atten_db,phase_deg,delay_s\n");
            for p in &points {
                let _ = writeln!(
                    body,
                    "{},{},{},{},{}",
                    p.freq_hz, p.omega, p.atten_db, p.phase_deg, p.delay_s
                );
            }
            let name = if s.phase_mode == PhaseSelection::Both {
                format!("sweep_d{}um_{}.csv", distance_label(d), mode)
            } else {
                format!("sweep_d{}um.csv", distance_label(d))
            };
            out.write(&name, &body)?;
            files += 1;
        }
    }
    Ok(format!(
        "sweep: wrote {files} files to {}",
        out.dir.display()
    ))
}

fn cmd_throughput(cfg: &Config, out: &Output) -> Result<String, CliError> {
    let t = &cfg.throughput;
    let curve = throughput_curve(t.t_start_s, t.t_end_s, t.n_points, &cfg.transport)?;
    let mut body = String::from("t_s,v_m_s,throughput_bps\n");
    for p in &curve {
        let _ = writeln!(body, "{},{},{}", p.t_s, p.v_m_s, p.throughput_bps);
    }
    let path = out.write("throughput.csv", &body)?;
    Ok(format!(
        "throughput: {} points, {} bps at t={} s -> {}",
        curve.len(),
        curve[0].throughput_bps,
        curve[0].t_s,
        path.display()
    ))
}

fn cmd_compare_fret(cfg: &Config, out: &Output) -> Result<String, CliError> {
    let t = &cfg.throughput;
    let fret = t.fret_ceiling_bps;
    if !(fret > 0.0 && fret.is_finite()) {
        return Err(CliError::Usage(format!(
            "fret_ceiling_bps must be > 0, got {fret}"
        )));
    }
    let curve = throughput_curve(t.t_start_s, t.t_end_s, t.n_points, &cfg.transport)?;
    let mut body = String::from("t_s,network,throughput_bps,log10_throughput_bps,ratio_to_fret\n");
    for p in &curve {
        let w = p.throughput_bps;
        let _ = writeln!(body, "{},wannet,{},{},{}", p.t_s, w, w.log10(), w / fret);
        let _ = writeln!(
            body,
            "{},fret_mamnet,{},{},{}",
            p.t_s,
            fret,
            fret.log10(),
            1.0
        );
    }
    let path = out.write("compare_fret.csv", &body)?;
    Ok(format!(
        "compare-fret: ratio at t={} s is {} -> {}",
        curve[0].t_s,
        curve[0].throughput_bps / fret,
        path.display()
    ))
}

fn campaign_threads() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|n| *n > 0)
            .map(Some)
            .ok_or_else(|| {
                CliError::Usage(format!(
                    "{THREADS_ENV} must be a positive integer, got `{v}`"
                ))
            }),
        Err(_) => Ok(None),
    }
}

fn cmd_simulate(cfg: &Config, out: &Output) -> Result<String, CliError> {
    if cfg.nodes.is_empty() {
        return Err(CliError::Usage(
            "simulate needs [[nodes]] in the config".into(),
        ));
    }
    let scenario = cfg.scenario_config();
    scenario.validate()?;
    let seeds = campaign_seeds(cfg.scenario.rng_seed, cfg.scenario.seeds);
    let results = match campaign_threads()? {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(e.to_string()))?
            .install(|| run_campaign(&scenario, &seeds))?,
        None => run_campaign(&scenario, &seeds)?,
    };

    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    let mut metrics =
        String::from("seed,delivered,delivery_time_s,hops,wires_attempted,wires_established\n");
    let mut timeline = String::from("seed,t_s,informed_fraction\n");
    for m in &results {
        let _ = writeln!(
            metrics,
            "{},{},{},{},{},{}",
            m.seed,
            m.delivered,
            opt(m.delivery_time_s),
            m.hops_to_gateway.map(|h| h.to_string()).unwrap_or_default(),
            m.wires_attempted,
            m.wires_established
        );
        for (t, f) in &m.informed_fraction_timeline {
            let _ = writeln!(timeline, "{},{},{}", m.seed, t, f);
        }
    }
    let s = summarize(&results);
    let summary = format!(
        "runs,delivered,delivery_rate,mean_delivery_time_s,std_delivery_time_s,mean_hops,std_hops\n{},{},{},{},{},{},{}\n",
        s.runs,
        s.delivered,
        s.delivery_rate,
        s.mean_delivery_time_s,
        s.std_delivery_time_s,
        s.mean_hops,
        s.std_hops
    );
    out.write("metrics.csv", &metrics)?;
    out.write("timeline.csv", &timeline)?;
    out.write("summary.csv", &summary)?;
    Ok(format!(
        "simulate: {} runs, {} delivered (rate {}), mean delivery time {} s",
        s.runs, s.delivered, s.delivery_rate, s.mean_delivery_time_s
    ))
}
