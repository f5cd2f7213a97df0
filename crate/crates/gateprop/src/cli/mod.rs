//! Command-line front end: reproducible batch workflows over netlist files.
//!
//! Exit codes: 0 success, 1 usage error, 2 input error, 3 safety violation
//! (a definitional oracle found a flow that the constructive labels missed).

pub mod report;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::instrument::{instrument_with_mode, EmitFormat, ShadowMode};
use crate::netlist::{parse_bench_with, validate, Circuit, Diagnostic, GateKind, ParseOptions};
use crate::oracle::{false_positive_report_with, FlowVariant, OracleBudget};
use crate::rules::Technique;
use crate::simulate::{LabelProtocol, Metric, Selection};
use crate::stats::{compare_on, ExperimentConfig};

use report::{digest_file, experiment_csv, oracle_rows_csv, ExperimentRow, RunManifest};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SAFETY: i32 = 3;

#[derive(Parser)]
#[command(
    name = "gateprop",
    version,
    about = "Gate-level propagation analysis: parse netlists, generate shadow logic, \
             simulate label propagation, and compare techniques statistically"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and validate a .bench netlist
    Parse(ParseArgs),
    /// Generate synthesizable propagation logic for a netlist
    Instrument(InstrumentArgs),
    /// Compare two techniques over random trials, with t-test and bootstrap CI
    Experiment(ExperimentArgs),
    /// Check constructive labels against the definitional oracle
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TechArg {
    ImpreciseIft,
    PreciseIft,
    Xprop,
    ImpreciseFpa,
    PreciseFpa,
}

impl From<TechArg> for Technique {
    fn from(t: TechArg) -> Technique {
        match t {
            TechArg::ImpreciseIft => Technique::ImpreciseIft,
            TechArg::PreciseIft => Technique::PreciseIft,
            TechArg::Xprop => Technique::XProp,
            TechArg::ImpreciseFpa => Technique::ImpreciseFpa,
            TechArg::PreciseFpa => Technique::PreciseFpa,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Bench,
    Verilog,
}

#[derive(Clone, Copy, ValueEnum)]
enum SelectionArg {
    /// Label exactly round(fraction * |inputs|) inputs per trial
    ExactCount,
    /// Label each input independently with probability `fraction`
    IndependentBernoulli,
}

impl From<SelectionArg> for Selection {
    fn from(s: SelectionArg) -> Selection {
        match s {
            SelectionArg::ExactCount => Selection::ExactCount,
            SelectionArg::IndependentBernoulli => Selection::IndependentBernoulli,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    /// Per-trial indicator: any output labeled
    AnyOutputLabeled,
    /// Per-trial fraction of labeled outputs
    LabeledOutputFraction,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Metric {
        match m {
            MetricArg::AnyOutputLabeled => Metric::AnyOutputLabeled,
            MetricArg::LabeledOutputFraction => Metric::LabeledOutputFraction,
        }
    }
}

#[derive(Args)]
struct ParseArgs {
    /// Netlist file (.bench)
    path: PathBuf,
    /// Print gate/net/IO counts on success
    #[arg(long)]
    stats: bool,
    /// Emit diagnostics (and stats) as JSON on stdout
    #[arg(long)]
    json: bool,
    /// Cut DFFs into pseudo input/output pairs instead of rejecting them
    #[arg(long)]
    cut_dff: bool,
}

#[derive(Args)]
struct InstrumentArgs {
    /// Netlist file (.bench)
    path: PathBuf,
    /// Analysis technique selecting the propagation rules
    #[arg(long, value_enum)]
    tech: TechArg,
    /// Output netlist format
    #[arg(long, value_enum, default_value = "bench")]
    format: FormatArg,
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Emit only the shadow logic, tapping original nets as extra inputs
    #[arg(long)]
    shadow_only: bool,
    /// Cut DFFs into pseudo input/output pairs
    #[arg(long)]
    cut_dff: bool,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Benchmark netlists (.bench); each yields one row per fraction
    #[arg(required = true)]
    paths: Vec<PathBuf>,
    /// Technique pair `a:b`, e.g. `imprecise-ift:precise-ift`
    #[arg(long)]
    pair: String,
    /// Random trials per benchmark and fraction
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Comma-separated label fractions
    #[arg(long, default_value = "0.1,0.25,0.5")]
    fractions: String,
    /// How labeled inputs are chosen per trial
    #[arg(long, value_enum, default_value = "exact-count")]
    selection: SelectionArg,
    /// Per-trial metric
    #[arg(long, value_enum, default_value = "any-output-labeled")]
    metric: MetricArg,
    /// Root seed for values, labels, and bootstrap
    #[arg(long, env = "GATEPROP_SEED", default_value_t = 0)]
    seed: u64,
    /// Significance level for the t-test
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Bootstrap confidence level
    #[arg(long, default_value_t = 0.95)]
    ci_level: f64,
    /// Bootstrap resamples
    #[arg(long, default_value_t = 10_000)]
    resamples: usize,
    /// CSV output file (stdout when omitted); a manifest is written alongside
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also emit the rows as JSON (next to --out, or on stdout)
    #[arg(long)]
    json: bool,
    /// Cut DFFs into pseudo input/output pairs
    #[arg(long)]
    cut_dff: bool,
}

#[derive(Args)]
struct OracleArgs {
    /// Netlist file (.bench)
    path: PathBuf,
    /// Analysis technique to check
    #[arg(long, value_enum)]
    tech: TechArg,
    /// Random trials
    #[arg(long, default_value_t = 1000)]
    trials: u32,
    /// Maximum labeled inputs to enumerate over (2^budget evaluations)
    #[arg(long, default_value_t = 20)]
    budget: u32,
    /// Label fraction per trial
    #[arg(long, default_value_t = 0.25)]
    fraction: f64,
    /// How labeled inputs are chosen per trial
    #[arg(long, value_enum, default_value = "exact-count")]
    selection: SelectionArg,
    /// Root seed
    #[arg(long, env = "GATEPROP_SEED", default_value_t = 0)]
    seed: u64,
    /// Compare against the weaker single-toggle X reading instead of the
    /// joint-assignment enumeration; disagreements between the two are
    /// counted in the report
    #[arg(long)]
    single_toggle: bool,
    /// Write per-(trial, output) comparison rows as CSV; manifest alongside
    #[arg(long)]
    out: Option<PathBuf>,
    /// Emit the full report as JSON on stdout
    #[arg(long)]
    json: bool,
    /// Cut DFFs into pseudo input/output pairs
    #[arg(long)]
    cut_dff: bool,
}

/// Parses arguments and runs the selected command, returning the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Cmd::Parse(args) => cmd_parse(args),
        Cmd::Instrument(args) => cmd_instrument(args),
        Cmd::Experiment(args) => cmd_experiment(args),
        Cmd::Oracle(args) => cmd_oracle(args),
    }
}

fn load_circuit(path: &Path, cut_dffs: bool) -> Result<(Circuit, Vec<Diagnostic>), String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "top".to_string());
    let opts = ParseOptions { name, cut_dffs };
    let result = parse_bench_with(&text, &opts);
    match result.circuit {
        Some(c) => Ok((c, result.diagnostics)),
        None => {
            let rendered: Vec<String> = result
                .diagnostics
                .iter()
                .map(|d| format!("{}:{d}", path.display()))
                .collect();
            Err(rendered.join("\n"))
        }
    }
}

fn cmd_parse(args: ParseArgs) -> i32 {
    let text = match std::fs::read_to_string(&args.path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", args.path.display());
            return EXIT_INPUT;
        }
    };
    let name = args
        .path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "top".to_string());
    let opts = ParseOptions {
        name,
        cut_dffs: args.cut_dff,
    };
    let result = parse_bench_with(&text, &opts);
    let mut diagnostics = result.diagnostics;
    if let Some(c) = &result.circuit {
        diagnostics.extend(validate(c));
    }
    let ok = result.circuit.is_some() && diagnostics.iter().all(|d| !d.is_error());

    if args.json {
        let stats = result.circuit.as_ref().map(circuit_stats_json);
        let payload = serde_json::json!({
            "path": args.path.display().to_string(),
            "ok": ok,
            "diagnostics": diagnostics,
            "stats": stats,
        });
        println!("{}", serde_json::to_string_pretty(&payload).expect("json"));
    } else {
        for d in &diagnostics {
            eprintln!("{}:{d}", args.path.display());
        }
        if let (true, Some(c)) = (args.stats, &result.circuit) {
            print_circuit_stats(c);
        }
    }
    if ok {
        EXIT_OK
    } else {
        EXIT_INPUT
    }
}

fn circuit_stats_json(c: &Circuit) -> serde_json::Value {
    let mut by_kind = serde_json::Map::new();
    for kind in GateKind::ALL {
        let n = c.gates().iter().filter(|g| g.kind == kind).count();
        if n > 0 {
            by_kind.insert(kind.name().to_string(), serde_json::json!(n));
        }
    }
    serde_json::json!({
        "name": c.name(),
        "inputs": c.inputs().len(),
        "outputs": c.outputs().len(),
        "gates": c.num_gates(),
        "nets": c.num_nets(),
        "depth": logic_depth(c),
        "gates_by_kind": by_kind,
    })
}

fn print_circuit_stats(c: &Circuit) {
    println!("name:    {}", c.name());
    println!("inputs:  {}", c.inputs().len());
    println!("outputs: {}", c.outputs().len());
    println!("gates:   {}", c.num_gates());
    println!("nets:    {}", c.num_nets());
    println!("depth:   {}", logic_depth(c));
    for kind in GateKind::ALL {
        let n = c.gates().iter().filter(|g| g.kind == kind).count();
        if n > 0 {
            println!("{:<8}{n}", format!("{kind}:"));
        }
    }
}

fn logic_depth(c: &Circuit) -> usize {
    let mut level = vec![0usize; c.num_nets()];
    let mut depth = 0;
    for &gi in c.topo() {
        let gate = &c.gates()[gi as usize];
        let l = 1 + gate
            .fanin
            .iter()
            .map(|f| level[f.index()])
            .max()
            .unwrap_or(0);
        level[gate.fanout.index()] = l;
        depth = depth.max(l);
    }
    depth
}

fn cmd_instrument(args: InstrumentArgs) -> i32 {
    let (circuit, _warnings) = match load_circuit(&args.path, args.cut_dff) {
        Ok(v) => v,
        Err(msg) => {
            eprintln!("{msg}");
            return EXIT_INPUT;
        }
    };
    let tech: Technique = args.tech.into();
    let mode = if args.shadow_only {
        ShadowMode::ShadowOnly
    } else {
        ShadowMode::Combined
    };
    let ic = instrument_with_mode(&circuit, tech, mode);
    let format = match args.format {
        FormatArg::Bench => EmitFormat::Bench,
        FormatArg::Verilog => EmitFormat::Verilog,
    };
    let text = ic.emit(format);
    let base_gates = ic.base().num_gates().max(1);
    eprintln!(
        "{}: {} original gates, {} shadow gates ({:.2} per gate), {} label inputs, {} label outputs",
        ic.circuit().name(),
        ic.base().num_gates(),
        ic.shadow_gate_count(),
        ic.shadow_gate_count() as f64 / base_gates as f64,
        ic.label_inputs().len(),
        ic.label_outputs().len(),
    );
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: {}: {e}", path.display());
                return EXIT_INPUT;
            }
        }
        None => print!("{text}"),
    }
    EXIT_OK
}

fn parse_pair(pair: &str) -> Result<(Technique, Technique), String> {
    let (a, b) = pair
        .split_once(':')
        .ok_or_else(|| format!("--pair expects `a:b`, got `{pair}`"))?;
    let parse = |s: &str| {
        Technique::from_slug(s.trim()).ok_or_else(|| {
            let all: Vec<&str> = Technique::ALL.iter().map(|t| t.slug()).collect();
            format!("unknown technique `{s}` (expected one of {})", all.join(", "))
        })
    };
    Ok((parse(a)?, parse(b)?))
}

fn parse_fractions(s: &str) -> Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for piece in s.split(',') {
        let f: f64 = piece
            .trim()
            .parse()
            .map_err(|_| format!("bad fraction `{piece}`"))?;
        if !(0.0..=1.0).contains(&f) {
            return Err(format!("fraction {f} is outside [0, 1]"));
        }
        out.push(f);
    }
    if out.is_empty() {
        return Err("need at least one fraction".to_string());
    }
    Ok(out)
}

fn cmd_experiment(args: ExperimentArgs) -> i32 {
    let (tech_a, tech_b) = match parse_pair(&args.pair) {
        Ok(p) => p,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
    };
    if args.trials < 2 {
        eprintln!("error: --trials must be at least 2 for a t-test");
        return EXIT_USAGE;
    }
    let fractions = match parse_fractions(&args.fractions) {
        Ok(f) => f,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
    };
    if !(args.alpha > 0.0 && args.alpha < 1.0) || !(args.ci_level > 0.0 && args.ci_level < 1.0) {
        eprintln!("error: --alpha and --ci-level must lie strictly between 0 and 1");
        return EXIT_USAGE;
    }

    // Parse all benchmarks first; a failing benchmark loses its rows only.
    let mut benches: Vec<(String, Circuit)> = Vec::new();
    let mut any_failed = false;
    for path in &args.paths {
        match load_circuit(path, args.cut_dff) {
            Ok((c, _)) => benches.push((c.name().to_string(), c)),
            Err(msg) => {
                eprintln!("{msg}");
                eprintln!("warning: skipping `{}`", path.display());
                any_failed = true;
            }
        }
    }
    if benches.is_empty() {
        eprintln!("error: no benchmark parsed successfully");
        return EXIT_INPUT;
    }

    let jobs: Vec<(usize, usize)> = (0..benches.len())
        .flat_map(|b| (0..fractions.len()).map(move |f| (b, f)))
        .collect();
    let rows: Vec<ExperimentRow> = jobs
        .par_iter()
        .map(|&(b, f)| {
            let (name, circuit) = &benches[b];
            let cfg = ExperimentConfig {
                circuit_path: PathBuf::new(),
                technique_a: tech_a,
                technique_b: tech_b,
                trials: args.trials,
                protocol: LabelProtocol {
                    fraction: fractions[f],
                    selection: args.selection.into(),
                    metric: args.metric.into(),
                },
                seed: args.seed,
                alpha: args.alpha,
                ci_level: args.ci_level,
                bootstrap_resamples: args.resamples,
            };
            let r = compare_on(circuit, &cfg).expect("validated config cannot fail");
            ExperimentRow {
                benchmark: name.clone(),
                technique_a: tech_a.slug().to_string(),
                technique_b: tech_b.slug().to_string(),
                fraction: fractions[f],
                trials: args.trials,
                mean_a: r.mean_a,
                mean_b: r.mean_b,
                diff: r.diff,
                t: r.t_stat,
                df: r.df,
                p: r.p_value,
                ci_lo: r.ci_lo,
                ci_hi: r.ci_hi,
                significant: r.significant,
            }
        })
        .collect();

    let csv = experiment_csv(&rows);
    let config = serde_json::json!({
        "pair": format!("{}:{}", tech_a.slug(), tech_b.slug()),
        "trials": args.trials,
        "fractions": fractions,
        "selection": Selection::from(args.selection),
        "metric": Metric::from(args.metric),
        "seed": args.seed,
        "alpha": args.alpha,
        "ci_level": args.ci_level,
        "resamples": args.resamples,
        "cut_dff": args.cut_dff,
    });
    let inputs: Vec<_> = args
        .paths
        .iter()
        .filter_map(|p| digest_file(p).ok())
        .collect();
    let manifest = RunManifest::new("experiment", config, inputs);

    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &csv) {
                eprintln!("error: {}: {e}", path.display());
                return EXIT_INPUT;
            }
            let manifest_path = manifest_path_for(path);
            if let Err(e) = std::fs::write(&manifest_path, manifest.to_json()) {
                eprintln!("error: {}: {e}", manifest_path.display());
                return EXIT_INPUT;
            }
            if args.json {
                let json_path = path.with_extension("json");
                let body = serde_json::to_string_pretty(&rows).expect("rows serialize");
                if let Err(e) = std::fs::write(&json_path, body) {
                    eprintln!("error: {}: {e}", json_path.display());
                    return EXIT_INPUT;
                }
            }
        }
        None => {
            if args.json {
                println!("{}", serde_json::to_string_pretty(&rows).expect("rows serialize"));
            } else {
                print!("{csv}");
            }
            eprintln!("{}", manifest.to_json());
        }
    }
    if any_failed {
        eprintln!("note: some benchmarks were skipped; report covers the rest");
    }
    EXIT_OK
}

fn manifest_path_for(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(OsString::from).unwrap_or_default();
    name.push(".manifest.json");
    out.with_file_name(name)
}

fn cmd_oracle(args: OracleArgs) -> i32 {
    let (circuit, _) = match load_circuit(&args.path, args.cut_dff) {
        Ok(v) => v,
        Err(msg) => {
            eprintln!("{msg}");
            return EXIT_INPUT;
        }
    };
    if !(0.0..=1.0).contains(&args.fraction) {
        eprintln!("error: --fraction must lie in [0, 1]");
        return EXIT_USAGE;
    }
    let tech: Technique = args.tech.into();
    let protocol = LabelProtocol {
        fraction: args.fraction,
        selection: args.selection.into(),
        metric: Metric::AnyOutputLabeled,
    };
    let budget = OracleBudget::with_bits(args.budget);
    let variant = if args.single_toggle {
        FlowVariant::SingleToggle
    } else {
        FlowVariant::Joint
    };
    let report = match false_positive_report_with(
        &circuit,
        tech,
        &protocol,
        args.trials,
        args.seed,
        &budget,
        variant,
    ) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };

    if args.json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        eprintln!(
            "{} under {}: {} trials evaluated, {} skipped (budget {} bits)",
            report.circuit, tech, report.evaluated_trials, report.skipped_trials, args.budget
        );
        eprintln!(
            "false positives: {} / {} comparisons ({:.4})",
            report.false_positives, report.comparisons, report.false_positive_rate
        );
        eprintln!(
            "false negatives: {} ({:.4})",
            report.false_negatives, report.false_negative_rate
        );
        if let Some(d) = report.variant_disagreements {
            eprintln!("single-toggle vs joint oracle disagreements: {d}");
        }
    }
    if let Some(path) = &args.out {
        if let Err(e) = std::fs::write(path, oracle_rows_csv(&report)) {
            eprintln!("error: {}: {e}", path.display());
            return EXIT_INPUT;
        }
        let config = serde_json::json!({
            "tech": tech.slug(),
            "trials": args.trials,
            "budget": args.budget,
            "fraction": args.fraction,
            "selection": Selection::from(args.selection),
            "seed": args.seed,
            "single_toggle": args.single_toggle,
            "cut_dff": args.cut_dff,
        });
        let inputs = digest_file(&args.path).map(|d| vec![d]).unwrap_or_default();
        let manifest = RunManifest::new("oracle", config, inputs);
        let manifest_path = manifest_path_for(path);
        if let Err(e) = std::fs::write(&manifest_path, manifest.to_json()) {
            eprintln!("error: {}: {e}", manifest_path.display());
            return EXIT_INPUT;
        }
    }
    if report.false_negatives > 0 {
        eprintln!("error: safety violation: constructive labels missed a real flow");
        return EXIT_SAFETY;
    }
    EXIT_OK
}
