mod config;
mod matrix_file;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use compcorr::bases::{qubit_pauli_mubs, MubSet};
use compcorr::criteria::{analyze, Analysis};
use compcorr::experiments::montecarlo::{Detector, MontecarloSpec};
use compcorr::experiments::sweep::SweepTable;
use compcorr::experiments::{
    parse_grid, run_basis_optimization, run_lur_comparison, run_montecarlo, run_sweep, write_results, Exportable,
    Format, Measure, Meta, OptimizationMode, OptimizationSpec, SweepSpec,
};
use compcorr::qmat::BipartiteState;
use compcorr::states::{NamedState, StateEnsemble, StateFamily};
use compcorr::Error;

const SUBCOMMANDS: [&str; 5] = ["analyze", "sweep", "montecarlo", "lur-compare", "optimize"];

/// Entanglement detection from correlations in complementary measurements.
///
/// Any subcommand also accepts `--config FILE` with `key = value` lines
/// mirroring its flags; flags given on the command line take precedence.
#[derive(Parser, Debug)]
#[command(name = "compcorr", version, args_override_self = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Correlation report and every detector verdict for one state.
    Analyze(AnalyzeArgs),
    /// Correlation sums along a one-parameter state family.
    Sweep(SweepArgs),
    /// Detector comparison on random two-qubit states.
    Montecarlo(MontecarloArgs),
    /// Pearson over two and three bases against the local uncertainty relation.
    LurCompare(RunArgs),
    /// Pearson sum maximized over measurement directions.
    Optimize(OptimizeArgs),
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    /// Catalog state name.
    #[arg(long, conflicts_with = "matrix_file", required_unless_present = "matrix_file")]
    state: Option<NamedState>,
    /// Text file: local dimension d, then d²×d² "re im" pairs row-major.
    #[arg(long)]
    matrix_file: Option<PathBuf>,
    /// Number of complementary bases (at least 2).
    #[arg(long, default_value_t = 3)]
    mubs: usize,
    /// Print JSON instead of tables.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, default_value = "csv")]
    format: Format,
    /// Output file; standard output when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long)]
    family: StateFamily,
    /// start:stop:step, inclusive.
    #[arg(long, default_value = "0:1:0.01")]
    grid: String,
    /// Measures to report (mutual_info, pearson, cond_prob); all when absent.
    #[arg(long, value_delimiter = ',')]
    measure: Vec<Measure>,
    #[arg(long, default_value_t = 3)]
    mubs: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Sample count; accepts forms like 1000000 or 1e6.
    #[arg(long, default_value = "1e6", value_parser = parse_count)]
    n: usize,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    threads: Option<usize>,
    /// uniform-spectrum or hilbert-schmidt.
    #[arg(long, default_value = "uniform-spectrum")]
    ensemble: StateEnsemble,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct MontecarloArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Detectors to tally.
    #[arg(long, value_delimiter = ',', default_value = "witness,pearson3,cond_prob,mutual_info3")]
    detectors: Vec<Detector>,
}

#[derive(Args, Debug)]
struct OptimizeArgs {
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, value_delimiter = ',', default_value = "fixed,optimize_second,optimize_both")]
    modes: Vec<OptimizationMode>,
    /// Equatorial second directions.
    #[arg(long, default_value_t = 80)]
    second_directions: usize,
    /// Frames for optimize_both, identity included.
    #[arg(long, default_value_t = 40)]
    frames: usize,
    /// Second directions per rotated frame.
    #[arg(long, default_value_t = 40)]
    frame_directions: usize,
    /// Random frame pairs for optimize_3mub.
    #[arg(long, default_value_t = 1000)]
    directions: usize,
}

fn parse_count(s: &str) -> Result<usize, String> {
    let clean = s.trim().replace('_', "");
    if let Ok(n) = clean.parse::<usize>() {
        return Ok(n);
    }
    match clean.parse::<f64>() {
        Ok(x) if x >= 0.0 && x.fract() == 0.0 && x <= 1e15 => Ok(x as usize),
        _ => Err(format!("'{s}' is not a non-negative integer count")),
    }
}

enum Failure {
    Usage(String),
    InvalidData(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotHermitian { .. }
            | Error::TraceNotOne { .. }
            | Error::NotPositive { .. }
            | Error::NonFinite
            | Error::InvalidDimension(_) => Failure::InvalidData(e.to_string()),
            Error::Io(_) | Error::Csv(_) | Error::Json(_) => Failure::Io(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn main() -> ExitCode {
    let args = match config::expand(std::env::args_os().collect(), &SUBCOMMANDS) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {}", e.0);
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::InvalidData(m)) => {
            eprintln!("error: invalid density matrix: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analyze(a) => cmd_analyze(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Montecarlo(a) => cmd_montecarlo(a),
        Command::LurCompare(a) => cmd_lur(a),
        Command::Optimize(a) => cmd_optimize(a),
    }
}

fn emit<T: Exportable>(item: &T, meta: &Meta, out: &OutputArgs) -> Result<(), Failure> {
    match &out.output {
        Some(path) => compcorr::experiments::export_results(item, meta, out.format, path)?,
        None => write_results(item, meta, out.format, io::stdout().lock())?,
    }
    Ok(())
}

fn mubs_for(d: usize, n: usize) -> Result<MubSet, Failure> {
    if n < 2 {
        return Err(Failure::Usage(format!("--mubs {n}: need at least 2 bases")));
    }
    let set = if d == 2 { qubit_pauli_mubs() } else { MubSet::best_available(d)? };
    if n > set.len() {
        return Err(Failure::Usage(format!("--mubs {n}: only {} complementary bases available for d = {d}", set.len())));
    }
    Ok(set.truncated(n))
}

fn cmd_analyze(a: AnalyzeArgs) -> Result<(), Failure> {
    let (label, state): (String, BipartiteState) = match (&a.state, &a.matrix_file) {
        (Some(s), _) => (s.to_string(), s.build()),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            (path.display().to_string(), matrix_file::read_state(&text)?)
        }
        (None, None) => unreachable!("clap requires one source"),
    };
    let mubs = mubs_for(state.d(), a.mubs)?;
    let analysis = analyze(&state, &mubs)?;
    let mut out = io::stdout().lock();
    if a.json {
        serde_json::to_writer_pretty(&mut out, &analysis).map_err(Error::from)?;
        writeln!(out)?;
    } else {
        print_analysis(&mut out, &label, state.d(), &analysis)?;
    }
    Ok(())
}

fn print_analysis(out: &mut impl Write, label: &str, d: usize, a: &Analysis) -> io::Result<()> {
    let r = &a.report;
    let bases: Vec<_> = r.pairs.iter().map(|p| p.basis.as_str()).collect();
    writeln!(out, "state: {label} (d = {d}, bases {})", bases.join(", "))?;
    writeln!(out, "{:<12} {:>10} {:>10} {:>10}", "basis", "I", "|C|", "S")?;
    let cell = |x: Option<f64>| x.map_or_else(|| "undefined".to_string(), |v| format!("{v:.6}"));
    for p in &r.pairs {
        writeln!(
            out,
            "{:<12} {:>10} {:>10} {:>10}",
            p.basis,
            format!("{:.6}", p.mutual_information),
            cell(p.pearson_abs()),
            cell(p.conditional_sum)
        )?;
    }
    writeln!(out)?;
    writeln!(out, "I_sum={:.6}", r.mi_sum(2))?;
    writeln!(out, "C_sum={}", cell(r.pearson_sum(r.pairs.len())))?;
    writeln!(out, "S_sum={}", cell(r.conditional_sum_total(2)))?;
    writeln!(out)?;
    writeln!(out, "{:<16} {:>12} {:>12} {:>12}  verdict", "detector", "value", "threshold", "margin")?;
    for v in a.verdicts.iter().chain(&a.witnesses) {
        writeln!(
            out,
            "{:<16} {:>12.6} {:>12.6} {:>12.6}  {}",
            v.detector.name(),
            v.value,
            v.threshold,
            v.margin,
            if v.detected_entangled { "entangled" } else { "not detected" }
        )?;
    }
    for (c, why) in &a.undefined {
        writeln!(out, "{:<16} undefined: {why}", c.name())?;
    }
    Ok(())
}

fn cmd_sweep(a: SweepArgs) -> Result<(), Failure> {
    let grid = parse_grid(&a.grid)?;
    let measures = if a.measure.is_empty() { Measure::ALL.to_vec() } else { a.measure.clone() };
    let spec = SweepSpec::new(a.family, grid, measures, a.mubs)?;
    let rows = run_sweep(&spec)?;
    let crossing = |f: fn(&compcorr::experiments::SweepRow) -> Option<f64>, t: f64| {
        rows.iter().find(|r| f(r).is_some_and(|v| v > t + 1e-9)).map(|r| r.p)
    };
    let show = |p: Option<f64>| p.map_or_else(|| "none".to_string(), |p| p.to_string());
    eprintln!(
        "{}: {} points; first p above threshold: I {}, C {}, S {}",
        a.family,
        rows.len(),
        show(crossing(|r| r.i_sum, 1.0)),
        show(crossing(|r| r.c_sum, 1.0)),
        show(crossing(|r| r.s_sum, 3.0)),
    );
    let n = rows.len() as u64;
    emit(&SweepTable(rows), &Meta::new(None, n), &a.out)
}

fn cmd_montecarlo(a: MontecarloArgs) -> Result<(), Failure> {
    let r = &a.run;
    let spec = MontecarloSpec {
        n: r.n,
        detectors: a.detectors.clone(),
        seed: r.seed,
        ensemble: r.ensemble,
        threads: r.threads,
    };
    let t = run_montecarlo(&spec)?;
    let per: Vec<_> = t
        .detectors
        .iter()
        .zip(&t.detected)
        .map(|(d, &c)| format!("{d} {:.4}%", 100.0 * c as f64 / t.n_entangled.max(1) as f64))
        .collect();
    eprintln!(
        "entangled {:.4}% of {}; detected of entangled: {}; combined {:.4}%",
        100.0 * t.entangled_fraction(),
        t.n_samples,
        per.join(", "),
        100.0 * t.combined_fraction()
    );
    emit(&t, &Meta::new(Some(r.seed), t.n_samples), &r.out)
}

fn cmd_lur(r: RunArgs) -> Result<(), Failure> {
    let t = run_lur_comparison(r.n, r.seed, r.ensemble, r.threads)?;
    let lur_only_vs = |p: Detector| -> Result<f64, Failure> {
        Ok(100.0 * t.project(&[p, Detector::Lur])?.cell_fraction(&[Detector::Lur])?)
    };
    eprintln!(
        "identified {} of {} entangled; lur only vs pearson3 {:.4}%, lur only vs pearson2 {:.4}%",
        t.union_detected(),
        t.n_entangled,
        lur_only_vs(Detector::Pearson3)?,
        lur_only_vs(Detector::Pearson2)?,
    );
    emit(&t, &Meta::new(Some(r.seed), t.n_samples), &r.out)
}

fn cmd_optimize(a: OptimizeArgs) -> Result<(), Failure> {
    let r = &a.run;
    let mut spec = OptimizationSpec::new(r.n, a.modes.clone(), r.seed);
    spec.second_directions = a.second_directions;
    spec.frames = a.frames;
    spec.frame_directions = a.frame_directions;
    spec.n_directions = a.directions;
    spec.ensemble = r.ensemble;
    spec.threads = r.threads;
    let summary = run_basis_optimization(&spec)?;
    let parts: Vec<_> =
        summary.modes.iter().map(|m| format!("{} {:.4}%", m.mode, 100.0 * m.detected_fraction())).collect();
    eprintln!("detected of entangled: {}", parts.join(", "));
    emit(&summary, &Meta::new(Some(r.seed), summary.n_states), &r.out)
}
