//! Command-line surface of the `carpool` binary.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::adversary::{self, UpdateStream};
use crate::engine::{Engine, Fault};
use crate::error::Error;
use crate::graph::GirthThreshold;
use crate::oracle::check_all_invariants;
use crate::stream::{parse_stream, serialize_stream, TraceLine, TraceReplayer};

/// Exit status when an invariant or prefix replay fails.
pub const EXIT_VIOLATION: u8 = 1;
/// Exit status for bad input, bad parameters and I/O errors.
pub const EXIT_USAGE: u8 = 2;

/// Prefix replay interval outside check mode.
pub const REPLAY_EVERY: u64 = 1000;

#[derive(Parser, Debug)]
#[command(
    name = "carpool",
    version,
    about = "Dynamic low-discrepancy edge orientation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Replay a stream file and emit a trace.
    Run(RunArgs),
    /// Write a generated stream file.
    Gen(GenArgs),
    /// Replay a stream with a full invariant check after every update.
    Verify { stream: PathBuf },
    /// Tabulate discrepancy and recourse across instance sizes.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
pub struct RunArgs {
    pub stream: PathBuf,
    /// Trace output path (one JSON object per update).
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Run the full invariant check after every update.
    #[arg(long)]
    pub check: bool,
    /// Corrupt the engine after the given update, as `KIND:STEP`.
    #[arg(long, hide = true, value_parser = parse_fault_spec)]
    pub inject_fault: Option<(Fault, u64)>,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    /// One of: random, high-girth, forest, cycle-churn, adaptive.
    pub name: String,
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub steps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Deletion probability for the random generator.
    #[arg(long, default_value_t = 0.3)]
    pub p_delete: f64,
    /// Output path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Stream file to measure instead of generated streams.
    pub stream: Option<PathBuf>,
    /// Comma-separated instance sizes.
    #[arg(long, value_delimiter = ',', default_values_t = [8u32, 16, 32, 64, 128, 256])]
    pub n_list: Vec<u32>,
    #[arg(long, default_value_t = 10_000)]
    pub steps: usize,
    /// Number of seeds per size, starting at 0.
    #[arg(long, default_value_t = 1)]
    pub seeds: u64,
    #[arg(long, default_value = "random")]
    pub generator: String,
    #[arg(long, default_value_t = 0.3)]
    pub p_delete: f64,
    /// Also write the CSV table here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Write one JSON object per row here.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

fn parse_fault_spec(s: &str) -> Result<(Fault, u64), String> {
    let (kind, step) = s
        .split_once(':')
        .ok_or_else(|| format!("expected KIND:STEP, got `{s}`"))?;
    let fault = Fault::parse(kind).ok_or_else(|| {
        let names: Vec<_> = Fault::ALL.iter().map(|f| f.as_str()).collect();
        format!(
            "unknown fault `{kind}`, expected one of {}",
            names.join(", ")
        )
    })?;
    let step = step.parse().map_err(|_| format!("bad step `{step}`"))?;
    Ok((fault, step))
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path}: {source}")]
    Parse {
        path: String,
        source: crate::stream::ParseError,
    },
    #[error("{0}")]
    Engine(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Violation(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Violation(_) => EXIT_VIOLATION,
            CliError::Engine(Error::InvariantViolation(_) | Error::Poisoned) => EXIT_VIOLATION,
            _ => EXIT_USAGE,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

pub fn read_stream(path: &Path) -> Result<UpdateStream, CliError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_stream(&text).map_err(|source| CliError::Parse {
        path: path.display().to_string(),
        source,
    })
}

/// Runs a parsed command, writing normal output to `out`.
pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => cmd_run(&args).map(|_| ()),
        Command::Verify { stream } => {
            let args = RunArgs {
                stream,
                trace: None,
                check: true,
                inject_fault: None,
            };
            let summary = cmd_run(&args)?;
            writeln!(out, "ok: {} updates, all invariants held", summary.updates)
                .map_err(io_err(Path::new("<stdout>")))
        }
        Command::Gen(args) => cmd_gen(&args, out),
        Command::Bench(args) => cmd_bench(&args, out),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunSummary {
    pub updates: u64,
    pub max_discrepancy: u32,
    pub max_recourse: usize,
}

pub fn cmd_run(args: &RunArgs) -> Result<RunSummary, CliError> {
    let stream = read_stream(&args.stream)?;
    let mut engine = Engine::new(stream.n)?;
    let mut trace = match &args.trace {
        Some(p) => Some(BufWriter::new(fs::File::create(p).map_err(io_err(p))?)),
        None => None,
    };
    let trace_path = args.trace.clone().unwrap_or_default();
    let mut replayer = TraceReplayer::new();

    for (i, event) in stream.events.iter().enumerate() {
        let seq = i as u64 + 1;
        let result = engine.apply(*event)?;
        let line = TraceLine::new(seq, event, &result);
        if let Some(w) = trace.as_mut() {
            writeln!(w, "{}", line.to_json()).map_err(io_err(&trace_path))?;
        }
        if !replayer.apply(&line) {
            return Err(CliError::Violation(format!(
                "update {seq}: trace references an edge missing from the replayed orientation"
            )));
        }
        if let Some((fault, step)) = args.inject_fault {
            if step == seq && engine.inject_fault(fault).is_none() {
                return Err(CliError::Usage(format!(
                    "fault {} has no target after update {seq}",
                    fault.as_str()
                )));
            }
        }
        if args.check {
            let v = check_all_invariants(&engine);
            if !v.is_empty() {
                return Err(CliError::Violation(format!("update {seq}: {v}")));
            }
        }
        if (args.check || seq.is_multiple_of(REPLAY_EVERY))
            && replayer.orientation() != engine.orientation()
        {
            return Err(CliError::Violation(format!(
                "update {seq}: trace replay diverges from the engine orientation"
            )));
        }
    }
    if let Some(mut w) = trace {
        w.flush().map_err(io_err(&trace_path))?;
    }
    let v = check_all_invariants(&engine);
    if !v.is_empty() {
        return Err(CliError::Violation(format!("after last update: {v}")));
    }
    if replayer.orientation() != engine.orientation() {
        return Err(CliError::Violation(
            "final trace replay diverges from the engine orientation".into(),
        ));
    }
    let m = engine.metrics();
    Ok(RunSummary {
        updates: m.updates_applied,
        max_discrepancy: m.max_discrepancy_ever,
        max_recourse: m.max_recourse_single_update,
    })
}

/// Accepts `high_girth` and `cycle_churn` spellings as well.
pub fn generate(
    name: &str,
    n: u32,
    steps: usize,
    seed: u64,
    p_delete: f64,
) -> Result<UpdateStream, CliError> {
    let name = name.replace('_', "-");
    let stream = match name.as_str() {
        "random" => adversary::gen_random(n, steps, p_delete, seed)?,
        "high-girth" => adversary::gen_high_girth(n, steps, seed)?,
        "forest" => adversary::gen_forest(n, steps, seed)?,
        "cycle-churn" => adversary::gen_cycle_churn(n, steps, seed)?,
        "adaptive" => {
            let mut engine = Engine::new(n)?;
            adversary::gen_adaptive_greedy(&mut engine, steps, seed)?.stream
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown generator `{other}`, expected one of {}",
                adversary::GENERATORS.join(", ")
            )))
        }
    };
    Ok(stream)
}

pub fn cmd_gen(args: &GenArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let stream = generate(&args.name, args.n, args.steps, args.seed, args.p_delete)?;
    let text = serialize_stream(&stream);
    match &args.out {
        Some(p) => fs::write(p, text).map_err(io_err(p)),
        None => out
            .write_all(text.as_bytes())
            .map_err(io_err(Path::new("<stdout>"))),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub n: u32,
    pub log: u32,
    pub runs: u64,
    pub updates: u64,
    pub max_disc: u32,
    pub max_recourse: usize,
    pub recourse_per_log2: f64,
    pub amortized: f64,
    pub ceiling: usize,
    pub elapsed_ms: u128,
}

pub const BENCH_HEADER: &str =
    "n,log,runs,updates,max_disc,max_recourse,recourse_per_log2,amortized,ceiling,elapsed_ms";

impl BenchRow {
    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{:.4},{:.4},{},{}",
            self.n,
            self.log,
            self.runs,
            self.updates,
            self.max_disc,
            self.max_recourse,
            self.recourse_per_log2,
            self.amortized,
            self.ceiling,
            self.elapsed_ms
        )
    }
}

/// Aggregates runs of several streams on one instance size.
pub fn bench_row(n: u32, streams: &[UpdateStream]) -> Result<Option<BenchRow>, CliError> {
    let t = GirthThreshold::new(n)?;
    let started = Instant::now();
    let (mut updates, mut max_disc, mut max_recourse, mut total) = (0u64, 0u32, 0usize, 0u64);
    for s in streams {
        let mut engine = Engine::new(n)?;
        for e in &s.events {
            engine.apply(*e)?;
        }
        let m = engine.metrics();
        updates += m.updates_applied;
        max_disc = max_disc.max(m.max_discrepancy_ever);
        max_recourse = max_recourse.max(m.max_recourse_single_update);
        total += m.total_recourse;
    }
    if updates == 0 {
        return Ok(None);
    }
    let log2 = (t.log * t.log) as f64;
    Ok(Some(BenchRow {
        n,
        log: t.log,
        runs: streams.len() as u64,
        updates,
        max_disc,
        max_recourse,
        recourse_per_log2: max_recourse as f64 / log2,
        amortized: total as f64 / updates as f64,
        ceiling: t.recourse_ceiling(),
        elapsed_ms: started.elapsed().as_millis(),
    }))
}

pub fn cmd_bench(args: &BenchArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let mut rows = Vec::new();
    if let Some(path) = &args.stream {
        let s = read_stream(path)?;
        rows.extend(bench_row(s.n, std::slice::from_ref(&s))?);
    } else {
        if args.seeds == 0 {
            return Err(CliError::Usage("--seeds must be at least 1".into()));
        }
        for &n in &args.n_list {
            let streams = (0..args.seeds)
                .map(|seed| generate(&args.generator, n, args.steps, seed, args.p_delete))
                .collect::<Result<Vec<_>, _>>()?;
            rows.extend(bench_row(n, &streams)?);
        }
    }

    let mut csv = String::from(BENCH_HEADER);
    csv.push('\n');
    for r in &rows {
        csv.push_str(&r.csv());
        csv.push('\n');
    }
    let stdout = Path::new("<stdout>");
    out.write_all(csv.as_bytes()).map_err(io_err(stdout))?;
    if let Some(p) = &args.csv {
        fs::write(p, &csv).map_err(io_err(p))?;
    }
    if let Some(p) = &args.json {
        let mut text = String::new();
        for r in &rows {
            text.push_str(&serde_json::to_string(r).expect("rows serialize"));
            text.push('\n');
        }
        fs::write(p, text).map_err(io_err(p))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fault_spec_parsing() {
        assert_eq!(
            parse_fault_spec("star-violation:12"),
            Ok((Fault::StarViolation, 12))
        );
        assert!(parse_fault_spec("star-violation").is_err());
        assert!(parse_fault_spec("nope:1").is_err());
        assert!(parse_fault_spec("star-violation:x").is_err());
    }

    #[test]
    fn generator_aliases() {
        let a = generate("high_girth", 16, 50, 1, 0.3).unwrap();
        let b = generate("high-girth", 16, 50, 1, 0.3).unwrap();
        assert_eq!(a, b);
        assert!(matches!(
            generate("nope", 16, 5, 1, 0.3),
            Err(CliError::Usage(_))
        ));
        assert_eq!(generate("adaptive", 8, 40, 2, 0.3).unwrap().len(), 40);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Violation("x".into()).exit_code(), EXIT_VIOLATION);
        assert_eq!(
            CliError::Engine(Error::Poisoned).exit_code(),
            EXIT_VIOLATION
        );
        assert_eq!(CliError::Usage("x".into()).exit_code(), EXIT_USAGE);
        assert_eq!(CliError::Engine(Error::InvalidSize).exit_code(), EXIT_USAGE);
    }

    #[test]
    fn bench_row_of_nothing_is_none() {
        assert!(bench_row(8, &[]).unwrap().is_none());
        let s = generate("random", 8, 200, 0, 0.3).unwrap();
        let r = bench_row(8, &[s]).unwrap().unwrap();
        assert_eq!(r.updates, 200);
        assert!(r.max_disc <= 3);
        assert!(r.max_recourse <= r.ceiling);
    }
}
