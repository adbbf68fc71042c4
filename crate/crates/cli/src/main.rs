//! Command-line simulator: every experiment is a subcommand with
//! reproducible seeds, flat-file config, and JSON/CSV artifact emission.
//!
//! Exit codes: 0 success (or defined verdict), 1 undefined verdict,
//! 2 usage/config error, 3 runtime infeasibility (no compatible setting).

mod artifacts;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use raqm_core::bitstring::{make_qubit, DiscretisationLevel, HiddenPermutation};
use raqm_core::error::Error as CoreError;
use raqm_core::exact::{Rational, RationalAngle};
use raqm_core::geometry::{complementarity_census, third_side_cosine, TriangleSpec};
use raqm_core::harness::{
    mi_diagnostic, run_bell_experiment, BellReport, BellSettings, NominalSetting,
};
use raqm_core::padic::{encode_2adic, shift_collapse, PadicWord};
use raqm_core::quaternion::{build_j, compose, SignedPermutationOp};

use artifacts::{
    print_wrote, render_json, write_collapse_csv, write_correlation_table, write_json,
    write_run_logs_csv, write_run_logs_jsonl,
};
use config::ConfigFile;

#[derive(Parser)]
#[command(
    name = "raqm",
    about = "Exact-arithmetic bit-string quantum experiments",
    version
)]
struct Cli {
    /// Flat key = value config file; command-line flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the three-ensemble Bell experiment and report correlations
    Bell(BellArgs),
    /// Census of grid phases around a nominal interferometer phase
    Mz(MzArgs),
    /// Decide whether a spherical triangle's third side has rational cosine
    Triangle(TriangleArgs),
    /// Shift-map collapse trace of a bit-string state
    Collapse(CollapseArgs),
    /// Measurement-independence diagnostics
    MiDiagnostic(MiArgs),
    /// Verify the quaternionic operator identities
    QuaternionCheck(QuaternionArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Discretisation level (bits per qubit string)
    #[arg(long = "L")]
    level: Option<usize>,
    /// Master seed; falls back to config, then RAQM_SEED, then 0
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for artifacts
    #[arg(long)]
    out: Option<PathBuf>,
    /// Artifact format for run logs: json or csv
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args)]
struct BellArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Runs per sub-ensemble
    #[arg(long)]
    runs: Option<usize>,
    /// Nominal tolerance in turns, e.g. 1/360
    #[arg(long)]
    tolerance: Option<String>,
    /// Nominal directions in turns
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b: Option<String>,
    #[arg(long)]
    c: Option<String>,
}

#[derive(Args)]
struct MzArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Nominal phase in turns
    #[arg(long)]
    nominal: Option<String>,
    /// Census half-width in turns
    #[arg(long)]
    window: Option<String>,
}

#[derive(Args)]
struct TriangleArgs {
    /// cos(theta_AB), as p/q
    cos_ab: String,
    /// cos(theta_BC), as p/q
    cos_bc: String,
    /// Internal angle phi_B in turns, as p/q
    phi_b: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CollapseArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Explicit digit word, e.g. 10011010
    #[arg(long)]
    word: Option<String>,
    /// Count of +1 bits when collapsing a constructed state
    #[arg(long)]
    m: Option<usize>,
    /// Phase rotation when collapsing a constructed state
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args)]
struct MiArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    tolerance: Option<String>,
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b: Option<String>,
    #[arg(long)]
    c: Option<String>,
}

#[derive(Args)]
struct QuaternionArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Largest level checked; levels double from 4
    #[arg(long)]
    max_level: Option<usize>,
}

type CmdResult = Result<u8, (String, u8)>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let cfg = match ConfigFile::load(cli.config.as_deref()) {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let result = match cli.command {
        Command::Bell(args) => cmd_bell(args, &cfg),
        Command::Mz(args) => cmd_mz(args, &cfg),
        Command::Triangle(args) => cmd_triangle(args),
        Command::Collapse(args) => cmd_collapse(args, &cfg),
        Command::MiDiagnostic(args) => cmd_mi(args, &cfg),
        Command::QuaternionCheck(args) => cmd_quaternion(args, &cfg),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err((msg, code)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn usage(msg: impl Into<String>) -> (String, u8) {
    (msg.into(), 2)
}

fn core_error(e: CoreError) -> (String, u8) {
    fn code(e: &CoreError) -> u8 {
        match e {
            CoreError::NoCompatibleSetting => 3,
            CoreError::RunFailed { source, .. } => code(source),
            _ => 2,
        }
    }
    let c = code(&e);
    (e.to_string(), c)
}

fn resolve_rational(
    cfg: &ConfigFile,
    flag: Option<String>,
    key: &str,
    default: &str,
) -> Result<Rational, (String, u8)> {
    let text = flag
        .or_else(|| cfg.get(key).map(str::to_string))
        .unwrap_or_else(|| default.to_string());
    text.parse::<Rational>()
        .map_err(|_| usage(format!("{key}: cannot parse {text:?} as a rational p/q")))
}

fn resolve_common(
    common: &CommonArgs,
    cfg: &ConfigFile,
) -> Result<(usize, u64, PathBuf, String), (String, u8)> {
    let level = cfg
        .resolve(common.level, "L", 3600usize)
        .map_err(usage)?;
    let seed = cfg.resolve_seed(common.seed).map_err(usage)?;
    let out = match &common.out {
        Some(p) => p.clone(),
        None => PathBuf::from(cfg.get("out").unwrap_or("raqm-out")),
    };
    let format = common
        .format
        .clone()
        .or_else(|| cfg.get("format").map(str::to_string))
        .unwrap_or_else(|| "json".to_string());
    if format != "json" && format != "csv" {
        return Err(usage(format!("format must be json or csv, got {format:?}")));
    }
    Ok((level, seed, out, format))
}

fn bell_settings(
    cfg: &ConfigFile,
    tolerance: Option<String>,
    a: Option<String>,
    b: Option<String>,
    c: Option<String>,
) -> Result<BellSettings, (String, u8)> {
    let tolerance = resolve_rational(cfg, tolerance, "tolerance", "1/360")?;
    let a = RationalAngle::new(resolve_rational(cfg, a, "a", "0")?);
    let b = RationalAngle::new(resolve_rational(cfg, b, "b", "1/6")?);
    let c = RationalAngle::new(resolve_rational(cfg, c, "c", "1/3")?);
    let make = |direction| NominalSetting::new(direction, tolerance.clone()).map_err(core_error);
    Ok(BellSettings {
        a: make(a)?,
        b: make(b)?,
        c: make(c)?,
    })
}

#[derive(Serialize, Clone)]
struct BellDoc {
    settings: BellSettings,
    #[serde(flatten)]
    report: BellReport,
}

fn cmd_bell(args: BellArgs, cfg: &ConfigFile) -> CmdResult {
    let (level, seed, out, format) = resolve_common(&args.common, cfg)?;
    let runs = cfg
        .resolve(args.runs, "runs", 10_000usize)
        .map_err(usage)?;
    if runs == 0 {
        return Err(usage("--runs must be at least 1"));
    }
    let settings = bell_settings(cfg, args.tolerance, args.a, args.b, args.c)?;
    let (report, logs) = run_bell_experiment(&settings, level, runs, seed).map_err(core_error)?;

    println!(
        "exact correlations: Co(A,B) = {}, Co(A,C) = {}, Co(B,C) = {}",
        report.co_ab_exact, report.co_ac_exact, report.co_bc_exact
    );
    println!("bell statistic (exact): {}", report.statistic);
    println!(
        "bell statistic (empirical over {} runs/ensemble): {} ({:.4})",
        runs,
        report.statistic_empirical,
        report.statistic_empirical.to_f64()
    );

    let doc = BellDoc {
        settings: settings.clone(),
        report,
    };
    let mut written = vec![write_json(&out, "bell-report.json", "raqm.bell-report/1", doc)
        .map_err(usage)?];
    written.push(if format == "csv" {
        write_run_logs_csv(&out, "runs.csv", &logs).map_err(usage)?
    } else {
        write_run_logs_jsonl(&out, "runs.jsonl", &logs).map_err(usage)?
    });
    written.push(write_correlation_table(&out, "correlations.csv", &logs).map_err(usage)?);
    print_wrote(&written);
    Ok(0)
}

#[derive(Serialize, Clone)]
struct CensusDoc {
    #[serde(rename = "L")]
    level: usize,
    nominal: RationalAngle,
    window: Rational,
    total: usize,
    doubly_rational: usize,
    doubly_rational_phases: Vec<RationalAngle>,
}

fn cmd_mz(args: MzArgs, cfg: &ConfigFile) -> CmdResult {
    let (level, _seed, out, _format) = resolve_common(&args.common, cfg)?;
    let nominal = RationalAngle::new(resolve_rational(cfg, args.nominal, "nominal", "0")?);
    let window = resolve_rational(cfg, args.window, "window", "1/100")?;
    let report = complementarity_census(level, &nominal, &window).map_err(core_error)?;
    println!(
        "grid phases in window: {}, doubly rational: {}",
        report.total, report.doubly_rational
    );
    let doc = CensusDoc {
        level,
        nominal,
        window,
        total: report.total,
        doubly_rational: report.doubly_rational,
        doubly_rational_phases: report.doubly_rational_phases,
    };
    let written = vec![write_json(&out, "census.json", "raqm.census/1", doc).map_err(usage)?];
    print_wrote(&written);
    Ok(0)
}

fn cmd_triangle(args: TriangleArgs) -> CmdResult {
    let parse = |what: &str, text: &str| -> Result<Rational, (String, u8)> {
        text.parse()
            .map_err(|_| usage(format!("{what}: cannot parse {text:?} as a rational p/q")))
    };
    let spec = TriangleSpec {
        cos_ab: parse("cos_ab", &args.cos_ab)?,
        cos_bc: parse("cos_bc", &args.cos_bc)?,
        phi_b: RationalAngle::new(parse("phi_b", &args.phi_b)?),
    };
    let verdict = third_side_cosine(&spec).map_err(core_error)?;
    println!(
        "{}",
        render_json("raqm.triangle-verdict/1", verdict.clone())
    );
    if let Some(dir) = &args.out {
        let written = vec![
            write_json(dir, "triangle-verdict.json", "raqm.triangle-verdict/1", verdict.clone())
                .map_err(usage)?,
        ];
        print_wrote(&written);
    }
    Ok(u8::from(!verdict.third_side_rational))
}

#[derive(Serialize, Clone)]
struct CollapseDoc {
    base: u8,
    initial: String,
    step_count: usize,
    steps: Vec<String>,
}

fn cmd_collapse(args: CollapseArgs, cfg: &ConfigFile) -> CmdResult {
    let (level, seed, out, format) = resolve_common(&args.common, cfg)?;
    let word_text = args.word.or_else(|| cfg.get("word").map(str::to_string));
    let word: PadicWord = match word_text {
        Some(text) => text
            .parse()
            .map_err(|e: CoreError| usage(format!("--word: {e}")))?,
        None => {
            let m = cfg
                .resolve(args.m, "m", usize::MAX)
                .map_err(usage)?;
            if m == usize::MAX {
                return Err(usage("either --word or --m must be given"));
            }
            let n = cfg.resolve(args.n, "n", 0usize).map_err(usage)?;
            let xi = HiddenPermutation::from_seed(seed, level).map_err(core_error)?;
            let state = make_qubit(
                DiscretisationLevel::new(level).map_err(core_error)?,
                m,
                n,
                xi,
            )
            .map_err(core_error)?;
            encode_2adic(&state.permuted_bits())
        }
    };
    let trace = shift_collapse(&word).map_err(core_error)?;
    println!("{} steps", trace.step_count);
    let steps: Vec<String> = trace.steps.iter().map(|w| w.to_string()).collect();
    let doc = CollapseDoc {
        base: word.base(),
        initial: steps[0].clone(),
        step_count: trace.step_count,
        steps: steps.clone(),
    };
    let mut written = vec![
        write_json(&out, "collapse-trace.json", "raqm.collapse-trace/1", doc)
            .map_err(usage)?,
    ];
    if format == "csv" {
        written.push(write_collapse_csv(&out, "collapse-trace.csv", &steps).map_err(usage)?);
    }
    print_wrote(&written);
    Ok(0)
}

#[derive(Serialize, Clone)]
struct MiDoc {
    #[serde(rename = "L")]
    level: usize,
    master_seed: u64,
    settings: BellSettings,
    #[serde(flatten)]
    report: raqm_core::harness::MiReport,
}

fn cmd_mi(args: MiArgs, cfg: &ConfigFile) -> CmdResult {
    let (level, seed, out, _format) = resolve_common(&args.common, cfg)?;
    let runs = cfg
        .resolve(args.runs, "runs", 1_000usize)
        .map_err(usage)?;
    let settings = bell_settings(cfg, args.tolerance, args.a, args.b, args.c)?;
    let report = mi_diagnostic(&settings, level, runs, seed).map_err(core_error)?;
    println!(
        "chi-square = {:.3} (df {}), p = {:.4}",
        report.chi_square, report.degrees_of_freedom, report.p_value
    );
    println!(
        "counterfactual triples defined: {} of {} ({})",
        report.defined_runs, report.sampled_triples, report.defined_fraction
    );
    let doc = MiDoc {
        level,
        master_seed: seed,
        settings,
        report,
    };
    let written =
        vec![write_json(&out, "mi-report.json", "raqm.mi-report/1", doc).map_err(usage)?];
    print_wrote(&written);
    Ok(0)
}

#[derive(Serialize, Clone)]
struct QuaternionDoc {
    levels: Vec<usize>,
    relations_hold: bool,
}

fn cmd_quaternion(args: QuaternionArgs, cfg: &ConfigFile) -> CmdResult {
    let (_, _, out, _) = resolve_common(&args.common, cfg)?;
    let max_level = cfg
        .resolve(args.max_level, "max_level", 1024usize)
        .map_err(usage)?;
    if max_level < 4 {
        return Err(usage("--max-level must be at least 4"));
    }
    let mut levels = Vec::new();
    let mut all_hold = true;
    let mut level = 4usize;
    while level <= max_level {
        let j1 = build_j(1, level).map_err(core_error)?;
        let j2 = build_j(2, level).map_err(core_error)?;
        let j3 = build_j(3, level).map_err(core_error)?;
        let minus_one = SignedPermutationOp::negation(level);
        let holds = compose(&j1, &j1).map_err(core_error)? == minus_one
            && compose(&j2, &j2).map_err(core_error)? == minus_one
            && compose(&j3, &j3).map_err(core_error)? == minus_one
            && compose(&j1, &j2).map_err(core_error)? == j3
            && compose(&j2, &j3).map_err(core_error)? == j1
            && compose(&j3, &j1).map_err(core_error)? == j2;
        println!(
            "L = {level}: {}",
            if holds { "relations hold" } else { "FAILED" }
        );
        all_hold &= holds;
        levels.push(level);
        level *= 2;
    }
    let doc = QuaternionDoc {
        levels,
        relations_hold: all_hold,
    };
    let written = vec![
        write_json(&out, "quaternion-check.json", "raqm.quaternion-check/1", doc)
            .map_err(usage)?,
    ];
    print_wrote(&written);
    Ok(if all_hold { 0 } else { 1 })
}
