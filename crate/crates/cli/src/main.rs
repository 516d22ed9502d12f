// `!(x > 0.0)` is used deliberately so NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod config;
mod inputs;
mod output;

use config::RunConfig;
use output::Format;

#[derive(Debug, Parser)]
#[command(name = "ses", version, about = "Stable-equilibrium thermodynamics of discrete spectra")]
struct Cli {
    /// TOML run configuration; flags override its fields.
    #[arg(long, global = true, env = "SES_CONFIG")]
    config: Option<PathBuf>,
    /// Seed recorded in the header and used by `verify`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true, value_enum)]
    units: Option<Units>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Units {
    Reduced,
    Si,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build spectrum files.
    #[command(subcommand)]
    Spectrum(SpectrumCmd),
    /// Inspect states.
    #[command(subcommand)]
    State(StateCmd),
    /// Canonical tables and inversion.
    #[command(subcommand)]
    Eq(EqCmd),
    /// Grand-canonical point of an open-system model.
    Grand(GrandArgs),
    /// Adiabatic availability, ergotropy and available energy of a state.
    Avail(AvailArgs),
    /// Entropy-transfer bounds and cycle checks.
    #[command(subcommand)]
    Interact(InteractCmd),
    /// Work of partitioning into identical compartments.
    Partition(PartitionArgs),
    /// Energy-entropy diagram data.
    Diagram(DiagramArgs),
    /// Run the seeded invariant suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Subcommand)]
enum SpectrumCmd {
    Build(BuildArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SpectrumKind {
    Finite,
    Oscillator,
    Box,
}

#[derive(Debug, Args)]
struct BuildArgs {
    #[arg(long, value_enum)]
    kind: SpectrumKind,
    /// Finite levels as `energy:degeneracy` pairs, comma separated.
    #[arg(long)]
    levels: Option<String>,
    #[arg(long)]
    hnu: Option<f64>,
    /// Oscillator level count; chosen from the tail tolerance when omitted.
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    mass: Option<f64>,
    /// Box side lengths `l1,l2,l3` (one value for a cube).
    #[arg(long)]
    sides: Option<String>,
    /// Per-direction quantum-number cutoff of a box.
    #[arg(long)]
    cutoff: Option<usize>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long, default_value_t = 1e-12)]
    tail_tol: f64,
    #[arg(long)]
    label: Option<String>,
}

#[derive(Debug, Subcommand)]
enum StateCmd {
    Info { state: PathBuf },
}

#[derive(Debug, Subcommand)]
enum EqCmd {
    Table {
        #[arg(long)]
        spectrum: PathBuf,
        /// `lo:hi:n` grid of `b` values.
        #[arg(long, allow_hyphen_values = true)]
        b_grid: String,
        #[arg(long)]
        log: bool,
    },
    Invert {
        #[arg(long)]
        spectrum: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        energy: f64,
    },
}

#[derive(Debug, Args)]
struct GrandArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    b: f64,
    #[arg(long, allow_hyphen_values = true)]
    mu: f64,
}

#[derive(Debug, Args)]
struct AvailArgs {
    #[arg(long)]
    state: PathBuf,
    /// `T_R[,p_R][,mu_R]`.
    #[arg(long, allow_hyphen_values = true)]
    reservoir: Option<String>,
    #[arg(long, default_value = "fixed_Vn", requires = "reservoir")]
    kind: String,
    #[arg(long, default_value_t = 1.0)]
    volume: f64,
    #[arg(long, default_value_t = 1.0)]
    amount: f64,
}

#[derive(Debug, Subcommand)]
enum InteractCmd {
    Bounds(BoundsArgs),
    Cycle {
        #[arg(long)]
        records: PathBuf,
    },
}

#[derive(Debug, Args)]
struct BoundsArgs {
    #[arg(long, allow_hyphen_values = true)]
    ta: f64,
    #[arg(long, allow_hyphen_values = true)]
    tb: f64,
    #[arg(long)]
    pa: Option<f64>,
    #[arg(long)]
    pb: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    mua: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    mub: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    de: f64,
    #[arg(long, allow_hyphen_values = true)]
    ds: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    dv: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    dn: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PartitionModelArg {
    Closed,
    Numeric,
}

#[derive(Debug, Args)]
struct PartitionArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    lambda: usize,
    #[arg(long)]
    t: f64,
    #[arg(long, value_enum, default_value = "closed")]
    model: PartitionModelArg,
    #[arg(long, default_value_t = 1.0)]
    volume: f64,
    #[arg(long, default_value_t = 1.0)]
    mass: f64,
}

#[derive(Debug, Args)]
struct DiagramArgs {
    #[arg(long)]
    spectrum: PathBuf,
    #[arg(long, default_value_t = 64)]
    points: usize,
    #[arg(long)]
    negative: bool,
    #[arg(long)]
    annotate: Option<PathBuf>,
    #[arg(long, requires = "annotate")]
    tr: Option<f64>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    suite: Option<String>,
}

/// Settings shared by every subcommand.
pub struct Ctx {
    pub cfg: RunConfig,
}

impl Ctx {
    fn format(&self) -> Format {
        self.cfg.output
    }
}

fn settings(cli: &Cli) -> ses_core::Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(f) = cli.format {
        cfg.output = f;
    }
    if let Some(u) = cli.units {
        cfg.units = match u {
            Units::Reduced => ses_core::units::UnitMode::Reduced,
            Units::Si => ses_core::units::UnitMode::Si,
        };
    }
    Ok(cfg)
}

/// Report body and whether it describes a failure (nonzero exit).
pub struct Report {
    pub body: String,
    pub failed: bool,
}

fn dispatch(cli: &Cli, ctx: &Ctx) -> ses_core::Result<Report> {
    use commands as c;
    let body = match &cli.command {
        Command::Spectrum(SpectrumCmd::Build(a)) => c::spectrum_build(ctx, a)?,
        Command::State(StateCmd::Info { state }) => c::state_info(ctx, state)?,
        Command::Eq(EqCmd::Table { spectrum, b_grid, log }) => c::eq_table(ctx, spectrum, b_grid, *log)?,
        Command::Eq(EqCmd::Invert { spectrum, energy }) => c::eq_invert(ctx, spectrum, *energy)?,
        Command::Grand(a) => c::grand(ctx, a)?,
        Command::Avail(a) => c::avail(ctx, a)?,
        Command::Interact(InteractCmd::Bounds(a)) => c::interact_bounds(ctx, a)?,
        Command::Interact(InteractCmd::Cycle { records }) => c::interact_cycle(ctx, records)?,
        Command::Partition(a) => c::partition(ctx, a)?,
        Command::Diagram(a) => c::diagram(ctx, a)?,
        Command::Verify(a) => return c::verify(ctx, a),
    };
    Ok(Report { body, failed: false })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = settings(&cli).and_then(|cfg| {
        let ctx = Ctx { cfg };
        let report = dispatch(&cli, &ctx)?;
        let text = output::header(ctx.cfg.seed) + &report.body;
        match &cli.out {
            Some(path) => std::fs::write(path, &text)
                .map_err(|e| ses_core::Error::InvalidInput(format!("{}: {e}", path.display())))?,
            None => {
                let mut stdout = std::io::stdout().lock();
                let _ = stdout.write_all(text.as_bytes());
            }
        }
        Ok(report.failed)
    });
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(1)
        }
    }
}
