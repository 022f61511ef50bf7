//! `pkinv`: inverse folding, folding, decomposition and batch statistics.

use std::fs::{self, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use pkinv::intervals::decompose_intervals;
use pkinv::loops::decompose_loops;
use pkinv::oracle::{
    for_each_structure, EnergyModel, ExhaustiveOracle, FoldConstraints, FoldingOracle,
    NussinovOracle, OracleError, DEFAULT_CAP,
};
use pkinv::report::{
    parse_corpus, run_trial, CorpusEntry, StatsReport, SummaryRecord, TargetStats,
};
use pkinv::search::{parse_target, LocalSearchSeed, SearchError, SearchParams};
use pkinv::{InvOutcome, Sequence, Structure};

/// Default base seed; trial `t` uses `seed + t`.
const DEFAULT_SEED: u64 = 1;

const EXIT_INVALID_TARGET: u8 = 2;
const EXIT_CAP_EXCEEDED: u8 = 3;
const EXIT_NO_SUCCESS: u8 = 4;

#[derive(Parser)]
#[command(
    name = "pkinv",
    version,
    about = "Inverse folding of RNA pseudoknot structures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Design sequences folding into the target.
    Inv(RunArgs),
    /// Fold a sequence and print the ranking.
    Fold(FoldArgs),
    /// Print the loop decomposition and interval plan of a target.
    Decompose(DecomposeArgs),
    /// List every admissible structure on n positions.
    Enumerate(EnumerateArgs),
    /// Run trials over a batch of targets and print per-target statistics.
    Stats(RunArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleKind {
    Exhaustive,
    Nussinov,
}

#[derive(Clone, Copy, ValueEnum)]
enum LocalFrom {
    Middle,
    Min,
}

#[derive(Args, Clone)]
struct ModelArgs {
    #[arg(long, value_enum, default_value = "exhaustive")]
    oracle: OracleKind,
    /// Key-value energy model file.
    #[arg(long)]
    energy_file: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    sigma: usize,
    #[arg(long, default_value_t = 4)]
    lambda: usize,
    /// Largest sequence the exhaustive oracle accepts.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
}

#[derive(Args)]
struct RunArgs {
    /// Target in `:()[]{}` notation, or a file holding one.
    #[arg(long, conflicts_with = "targets_file")]
    target: Option<String>,
    /// Corpus of `id structure` lines.
    #[arg(long)]
    targets_file: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    /// Suboptimal structures requested per adjust round.
    #[arg(long = "N", default_value_t = 50)]
    n_suboptimal: usize,
    #[arg(long, default_value_t = 0.1)]
    uphill_prob: f64,
    #[arg(long, default_value_t = 10)]
    budget_mult: usize,
    /// Overrides ceil(sqrt(n)/2).
    #[arg(long)]
    adjust_rounds: Option<usize>,
    #[arg(long, value_enum, default_value = "middle")]
    local_from: LocalFrom,
    #[command(flatten)]
    model: ModelArgs,
    /// Write results here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Append one record per trial to this file.
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Write `-` instead of wall-clock times, for reproducible summaries.
    #[arg(long)]
    no_timing: bool,
    /// Print search traces.
    #[arg(long)]
    verbose: bool,
}

#[derive(Args)]
struct FoldArgs {
    #[arg(long)]
    sequence: String,
    #[arg(long = "N", default_value_t = 1)]
    n_best: usize,
    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long)]
    target: String,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 3)]
    sigma: usize,
    #[arg(long, default_value_t = 4)]
    lambda: usize,
    /// Print only the number of structures.
    #[arg(long)]
    count: bool,
}

/// Failure carrying the process exit status.
struct Exit(u8, String);

impl From<anyhow::Error> for Exit {
    fn from(e: anyhow::Error) -> Self {
        Exit(1, format!("{e:#}"))
    }
}

impl From<SearchError> for Exit {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::InvalidTarget(_) => Exit(EXIT_INVALID_TARGET, e.to_string()),
            SearchError::Oracle(OracleError::CapExceeded { .. }) => {
                Exit(EXIT_CAP_EXCEEDED, e.to_string())
            }
            _ => Exit(1, e.to_string()),
        }
    }
}

impl From<OracleError> for Exit {
    fn from(e: OracleError) -> Self {
        SearchError::Oracle(e).into()
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Inv(args) => run(args, false),
        Command::Stats(args) => run(args, true),
        Command::Fold(args) => fold(args),
        Command::Decompose(args) => decompose(args),
        Command::Enumerate(args) => enumerate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Exit(code, msg)) => {
            eprintln!("pkinv: {msg}");
            ExitCode::from(code)
        }
    }
}

fn build_oracle(m: &ModelArgs) -> Result<Box<dyn FoldingOracle>, Exit> {
    let model = match &m.energy_file {
        Some(path) => EnergyModel::from_file(path)
            .with_context(|| format!("energy file {}", path.display()))?,
        None => EnergyModel::default(),
    };
    Ok(match m.oracle {
        OracleKind::Exhaustive => {
            let c = FoldConstraints {
                k: 3,
                sigma: m.sigma,
                lambda: m.lambda,
            };
            Box::new(ExhaustiveOracle::new(model, c)?.with_cap(m.cap))
        }
        OracleKind::Nussinov => Box::new(NussinovOracle::new(model, m.sigma, m.lambda)),
    })
}

/// A literal target, or the first structure in the named file.
fn read_target(arg: &str) -> Result<CorpusEntry, Exit> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = fs::read_to_string(path).with_context(|| format!("reading {arg}"))?;
        let entries = parse_corpus(&text).map_err(|e| Exit(EXIT_INVALID_TARGET, e.to_string()))?;
        return entries
            .into_iter()
            .next()
            .ok_or_else(|| Exit(EXIT_INVALID_TARGET, format!("{arg} holds no target")));
    }
    Ok(CorpusEntry {
        id: "target".into(),
        text: arg.to_string(),
    })
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Exit> {
    Ok(match path {
        Some(p) => {
            Box::new(fs::File::create(p).with_context(|| format!("creating {}", p.display()))?)
        }
        None => Box::new(io::stdout().lock()),
    })
}

fn io_err(e: io::Error) -> Exit {
    Exit(1, e.to_string())
}

fn run(args: RunArgs, stats: bool) -> Result<(), Exit> {
    let oracle = build_oracle(&args.model)?;
    let entries = match (&args.target, &args.targets_file) {
        (Some(t), _) => vec![read_target(t)?],
        (None, Some(f)) => {
            let text = fs::read_to_string(f).with_context(|| format!("reading {}", f.display()))?;
            parse_corpus(&text).map_err(|e| Exit(EXIT_INVALID_TARGET, e.to_string()))?
        }
        (None, None) => {
            return Err(Exit(
                1,
                "one of --target or --targets-file is required".into(),
            ))
        }
    };
    let constraints = oracle.constraints();
    let targets: Vec<(String, Structure)> = entries
        .into_iter()
        .map(|e| {
            parse_target(&e.text, constraints)
                .map(|s| (e.id.clone(), s))
                .map_err(|err| Exit(EXIT_INVALID_TARGET, format!("{}: {err}", e.id)))
        })
        .collect::<Result<_, _>>()?;
    let base = SearchParams {
        n_suboptimal: args.n_suboptimal,
        adjust_rounds: args.adjust_rounds,
        uphill_probability: args.uphill_prob,
        budget_multiplier: args.budget_mult,
        local_search_seed: match args.local_from {
            LocalFrom::Middle => LocalSearchSeed::Middle,
            LocalFrom::Min => LocalSearchSeed::Min,
        },
        ..SearchParams::default()
    };
    base.validate().map_err(|e| Exit(1, e.to_string()))?;

    let mut out = open_output(&args.output)?;
    let mut summary = match &args.summary {
        Some(p) => Some(
            OpenOptions::new()
                .create(true)
                .append(true)
                .open(p)
                .with_context(|| format!("opening {}", p.display()))?,
        ),
        None => None,
    };
    let mut report = StatsReport::default();
    let mut any_success = false;
    for (id, target) in &targets {
        let results: Vec<Result<(SummaryRecord, InvOutcome), SearchError>> = (0..args.trials)
            .into_par_iter()
            .map(|t| {
                let params = SearchParams {
                    seed: args.seed.wrapping_add(t),
                    ..base.clone()
                };
                run_trial(id, target, oracle.as_ref(), &params, !args.no_timing)
            })
            .collect();
        let mut records = Vec::with_capacity(results.len());
        for r in results {
            let (record, outcome) = r?;
            if args.verbose {
                eprintln!("# {} seed {}", id, record.seed);
                eprint!("{}", outcome.trace());
            }
            if let InvOutcome::Success { sequence, .. } = &outcome {
                any_success = true;
                if !stats {
                    writeln!(out, "{sequence}").map_err(io_err)?;
                    writeln!(out, "{}", display_target(target)).map_err(io_err)?;
                }
            }
            if let Some(f) = summary.as_mut() {
                writeln!(f, "{record}").map_err(io_err)?;
            }
            records.push(record);
        }
        let row = TargetStats::from_records(id, target.len(), &records);
        if !stats {
            writeln!(out, "# {}: {}/{} successes", id, row.successes, row.trials)
                .map_err(io_err)?;
        }
        report.rows.push(row);
    }
    if stats {
        write!(out, "{report}").map_err(io_err)?;
        return Ok(());
    }
    if any_success {
        Ok(())
    } else {
        Err(Exit(
            EXIT_NO_SUCCESS,
            "no trial produced a sequence folding into the target".into(),
        ))
    }
}

fn display_target(s: &Structure) -> String {
    s.to_brackets().unwrap_or_else(|_| s.to_string())
}

fn fold(args: FoldArgs) -> Result<(), Exit> {
    let oracle = build_oracle(&args.model)?;
    let seq: Sequence = args
        .sequence
        .parse()
        .map_err(|e: pkinv::sequence::SequenceError| Exit(1, e.to_string()))?;
    let ranking = oracle.fold(&seq, args.n_best)?;
    let mut out = io::stdout().lock();
    for e in &ranking.entries {
        writeln!(out, "{}\t{}", display_target(&e.structure), e.energy).map_err(io_err)?;
    }
    Ok(())
}

fn decompose(args: DecomposeArgs) -> Result<(), Exit> {
    let entry = read_target(&args.target)?;
    let s = pkinv::parse_structure(&entry.text)
        .map_err(|e| Exit(EXIT_INVALID_TARGET, e.to_string()))?;
    let loops = decompose_loops(&s).map_err(|e| Exit(EXIT_INVALID_TARGET, e.to_string()))?;
    let plan = decompose_intervals(&s).map_err(|e| Exit(EXIT_INVALID_TARGET, e.to_string()))?;
    let mut out = io::stdout().lock();
    write!(out, "{}", loops.dump()).map_err(io_err)?;
    writeln!(out, "# intervals").map_err(io_err)?;
    write!(out, "{plan}").map_err(io_err)?;
    Ok(())
}

fn enumerate(args: EnumerateArgs) -> Result<(), Exit> {
    let c = FoldConstraints {
        k: args.k,
        sigma: args.sigma,
        lambda: args.lambda,
    };
    let mut out = io::stdout().lock();
    let mut count = 0u64;
    let mut failed = None;
    for_each_structure(args.n, c, DEFAULT_CAP, |s| {
        count += 1;
        if !args.count && failed.is_none() {
            if let Err(e) = writeln!(out, "{}", display_target(s)) {
                failed = Some(e);
            }
        }
    })?;
    if let Some(e) = failed {
        return Err(io_err(e));
    }
    if args.count {
        writeln!(out, "{count}").map_err(io_err)?;
    }
    Ok(())
}
