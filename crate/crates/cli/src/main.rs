//! `qaoa-decode`: catalog inspection, Hamiltonian dumps, angle optimization,
//! decoding curves, coset distribution reports and a MaxCut demo.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qaoa_decode::ConstructionKind;

use config::{DecoderName, RunConfig, StrategyName};

#[derive(Debug, Parser)]
#[command(name = "qaoa-decode", version, about = "QAOA syndrome decoding of classical and stabilizer codes")]
struct Cli {
    /// Master seed; every random stream is derived from it.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Validate the configuration and exit without computing.
    #[arg(long, global = true)]
    dry_run: bool,
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Built-in code catalog.
    #[command(subcommand)]
    Codes(CodesCmd),
    /// Build a cost Hamiltonian and print its Pauli-Z dump.
    Ham(HamArgs),
    /// Angle optimization.
    #[command(subcommand)]
    Angles(AnglesCmd),
    /// Decoding simulations.
    #[command(subcommand)]
    Decode(DecodeCmd),
    /// Posterior vs QAOA output distributions over a coset.
    #[command(subcommand)]
    Dist(DistCmd),
    /// MaxCut through the decoding reduction.
    #[command(subcommand)]
    Maxcut(MaxcutCmd),
}

#[derive(Debug, Subcommand)]
enum CodesCmd {
    /// List catalog ids.
    List,
    /// Print a code's check and generator matrices.
    Show {
        /// Catalog id or path to a JSON definition.
        code: String,
        /// Print the JSON definition instead.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Subcommand)]
enum AnglesCmd {
    /// Optimize angles and merge them into a JSON-lines archive.
    Optimize(OptimizeArgs),
}

#[derive(Debug, Subcommand)]
enum DecodeCmd {
    /// Block error rate against the channel parameter, as CSV.
    Curve(CurveArgs),
}

#[derive(Debug, Subcommand)]
enum DistCmd {
    /// P and Q over the coset of an error, their JS divergence and a top-k table.
    Report(DistArgs),
}

#[derive(Debug, Subcommand)]
enum MaxcutCmd {
    /// Solve MaxCut on an edge-list file (1-indexed `u v` per line).
    Solve(MaxcutArgs),
}

#[derive(Debug, Args)]
struct ProblemArgs {
    /// Catalog id or path to a JSON definition.
    #[arg(long)]
    code: Option<String>,
    /// gen or check.
    #[arg(long)]
    construction: Option<ConstructionKind>,
    /// Weight on the error-weight term (check construction).
    #[arg(long)]
    alpha: Option<u32>,
    /// Weight on the syndrome-match term (check construction).
    #[arg(long)]
    eta: Option<u32>,
}

impl ProblemArgs {
    fn apply(&self, c: &mut RunConfig) {
        c.code = self.code.clone();
        c.construction = self.construction;
        c.alpha = self.alpha;
        c.eta = self.eta;
    }
}

#[derive(Debug, Args)]
struct SearchArgs {
    /// Circuit depth.
    #[arg(long)]
    p: Option<usize>,
    #[arg(long, value_enum)]
    strategy: Option<StrategyName>,
    /// Multistart evaluation budget (grid of budget^(1/2p) per axis).
    #[arg(long)]
    budget: Option<usize>,
    /// Basin-hopping hops per start.
    #[arg(long)]
    hops: Option<usize>,
    /// Basin-hopping perturbation half-width.
    #[arg(long)]
    step: Option<f64>,
}

impl SearchArgs {
    fn apply(&self, c: &mut RunConfig) {
        c.p = self.p;
        c.strategy = self.strategy;
        c.budget = self.budget;
        c.hops = self.hops;
        c.step = self.step;
    }
}

#[derive(Debug, Args)]
struct HamArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Syndrome bits.
    #[arg(long)]
    syndrome: Option<String>,
    /// Explicit coset offset: bits, a Pauli string, or e.g. `X1`.
    #[arg(long)]
    offset: Option<String>,
    /// Write the dump here (with a config header) instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct OptimizeArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[command(flatten)]
    search: SearchArgs,
    #[arg(long, conflicts_with = "all_syndromes")]
    syndrome: Option<String>,
    /// Optimize every reachable syndrome.
    #[arg(long)]
    all_syndromes: bool,
    /// JSON-lines archive to merge into (created if missing).
    #[arg(long)]
    archive: Option<PathBuf>,
    /// Also write the JSON summary here.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CurveArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Circuit depth of the archived angles.
    #[arg(long)]
    p: Option<usize>,
    /// Samples per decoding call.
    #[arg(long = "shots", short = 'T')]
    shots: Option<usize>,
    /// Channel parameters, comma separated.
    #[arg(long, value_delimiter = ',')]
    epsilons: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    decoder: Option<DecoderName>,
    #[arg(long)]
    archive: Option<PathBuf>,
    /// Stop a point after this many failures.
    #[arg(long)]
    max_failures: Option<usize>,
    /// ... or after this many trials.
    #[arg(long)]
    max_trials: Option<usize>,
    /// CSV destination (stdout if absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DistArgs {
    /// Stabilizer code (catalog id or file).
    #[arg(long)]
    code: Option<String>,
    #[command(flatten)]
    search: SearchArgs,
    /// The error whose coset is examined: bits, Pauli string, or e.g. `Z2`.
    #[arg(long = "error")]
    error: Option<String>,
    /// Depolarizing rate for the posterior.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Explicit angles (comma separated); otherwise the archive, otherwise optimized.
    #[arg(long, value_delimiter = ',', requires = "betas")]
    gammas: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', requires = "gammas")]
    betas: Option<Vec<f64>>,
    #[arg(long)]
    archive: Option<PathBuf>,
    /// Rows in the top table.
    #[arg(long)]
    top: Option<usize>,
    /// CSV of P and Q over the coset.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the JSON summary here.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MaxcutArgs {
    /// Edge-list file.
    graph: Option<PathBuf>,
    #[command(flatten)]
    search: SearchArgs,
    #[arg(long = "shots", short = 'T')]
    shots: Option<usize>,
}

fn flags(cmd: &Command, seed: Option<u64>) -> RunConfig {
    let mut c = RunConfig {
        seed,
        ..RunConfig::default()
    };
    match cmd {
        Command::Codes(_) => {}
        Command::Ham(a) => {
            a.problem.apply(&mut c);
            c.syndrome = a.syndrome.clone();
            c.offset = a.offset.clone();
            c.out = a.out.clone();
        }
        Command::Angles(AnglesCmd::Optimize(a)) => {
            a.problem.apply(&mut c);
            a.search.apply(&mut c);
            c.syndrome = a.syndrome.clone();
            c.all_syndromes = a.all_syndromes.then_some(true);
            c.archive = a.archive.clone();
            c.summary = a.summary.clone();
        }
        Command::Decode(DecodeCmd::Curve(a)) => {
            a.problem.apply(&mut c);
            c.p = a.p;
            c.shots = a.shots;
            c.epsilons = a.epsilons.clone();
            c.decoder = a.decoder;
            c.archive = a.archive.clone();
            c.max_failures = a.max_failures;
            c.max_trials = a.max_trials;
            c.out = a.out.clone();
        }
        Command::Dist(DistCmd::Report(a)) => {
            c.code = a.code.clone();
            a.search.apply(&mut c);
            c.offset = a.error.clone();
            c.epsilons = a.epsilon.map(|e| vec![e]);
            c.gammas = a.gammas.clone();
            c.betas = a.betas.clone();
            c.archive = a.archive.clone();
            c.top = a.top;
            c.out = a.out.clone();
            c.summary = a.summary.clone();
        }
        Command::Maxcut(MaxcutCmd::Solve(a)) => {
            a.search.apply(&mut c);
            c.graph = a.graph.clone();
            c.shots = a.shots;
        }
    }
    c
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let base = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let mut cfg = base.overlay(flags(&cli.command, cli.seed));
    cfg.seed = Some(cfg.seed());
    let dry = cli.dry_run;
    match &cli.command {
        Command::Codes(CodesCmd::List) => commands::codes_list(),
        Command::Codes(CodesCmd::Show { code, json }) => commands::codes_show(code, *json),
        Command::Ham(_) => commands::ham(&cfg, dry),
        Command::Angles(AnglesCmd::Optimize(_)) => commands::angles_optimize(&cfg, dry),
        Command::Decode(DecodeCmd::Curve(_)) => commands::decode_curve(&cfg, dry),
        Command::Dist(DistCmd::Report(_)) => commands::dist_report(&cfg, dry),
        Command::Maxcut(MaxcutCmd::Solve(_)) => commands::maxcut_solve(&cfg, dry),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
