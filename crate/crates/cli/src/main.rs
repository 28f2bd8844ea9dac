mod render;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use polarscheme::formulas::OrthoCase;
use polarscheme::orthograph::analyze_ortho;
use polarscheme::regression::{Scope, Status, Suite, SuiteOptions};
use polarscheme::scheme::{analyze_seeded, BuildOptions, Mode, SchemeFamily, SchemeParams, DEFAULT_MAX_POINTS};

/// Association schemes and orthogonality graphs on anisotropic points of
/// finite polar spaces, certified in exact arithmetic.
#[derive(Parser)]
#[command(name = "polar", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a scheme, verify the axioms and certify its closed forms.
    Scheme(SchemeArgs),
    /// Certify the spectrum of an orthogonality graph.
    Ortho(OrthoArgs),
    /// Run the regression matrix.
    CheckPaper(CheckArgs),
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Refuse (or, for check-paper, skip) instances with more points.
    #[arg(long, env = "POLAR_MAX_POINTS")]
    max_points: Option<usize>,
}

#[derive(Args)]
struct SchemeArgs {
    /// oddq5, oddq3, even-odd, even-even, wilbrink, herm-nu or herm-fission.
    #[arg(long)]
    family: SchemeFamily,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    q: u64,
    /// Quadric type; the point class for wilbrink; ignored for Hermitian.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    eps: i8,
    #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
    mode: ModeArg,
    /// Seed for the sampled pairs of representative mode.
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct OrthoArgs {
    #[arg(long, value_enum)]
    case: CaseArg,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    q: u64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    eps: i8,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct CheckArgs {
    /// Restrict to some groups: schemes, planes, even, wilbrink, hermitian,
    /// ortho, extremal, controls.
    #[arg(long, value_delimiter = ',')]
    only: Vec<Scope>,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Representative,
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    Herm,
    Ellhyp,
    Parabolic,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Exhaustive => Mode::Exhaustive,
            ModeArg::Representative => Mode::Representative,
            ModeArg::Auto => Mode::Auto,
        }
    }
}

impl From<CaseArg> for OrthoCase {
    fn from(c: CaseArg) -> OrthoCase {
        match c {
            CaseArg::Herm => OrthoCase::Hermitian,
            CaseArg::Ellhyp => OrthoCase::EllHyp,
            CaseArg::Parabolic => OrthoCase::Parabolic,
        }
    }
}

const FAILED: u8 = 1;
const USAGE: u8 = 2;

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(USAGE)
}

fn setup_threads(threads: Option<usize>) -> Result<(), String> {
    if let Some(t) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| e.to_string())
        }
    }
}

fn finish(out: &Option<PathBuf>, text: &str, passed: bool) -> ExitCode {
    if let Err(e) = emit(out, text) {
        return usage(e);
    }
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(FAILED)
    }
}

fn cmd_scheme(a: SchemeArgs) -> ExitCode {
    if let Err(e) = setup_threads(a.output.threads) {
        return usage(e);
    }
    let params = match SchemeParams::new(a.family, a.n, a.q, a.eps) {
        Ok(p) => p,
        Err(e) => return usage(e),
    };
    let opts = BuildOptions {
        max_points: Some(a.output.max_points.unwrap_or(DEFAULT_MAX_POINTS)),
    };
    let seed = a.seed.unwrap_or_else(|| params.seed());
    let report = match analyze_seeded(params, &opts, a.mode.into(), seed) {
        Ok(r) => r,
        Err(e) => return usage(e),
    };
    let text = match a.output.format {
        Format::Text => render::scheme_text(&report),
        Format::Json => render::json(&report),
        Format::Csv => render::scheme_csv(&report),
    };
    finish(&a.output.out, &text, report.passed())
}

fn cmd_ortho(a: OrthoArgs) -> ExitCode {
    if let Err(e) = setup_threads(a.output.threads) {
        return usage(e);
    }
    let max = a.output.max_points.unwrap_or(DEFAULT_MAX_POINTS);
    let report = match analyze_ortho(a.case.into(), a.n, a.q, a.eps, Some(max)) {
        Ok(r) => r,
        Err(e) => return usage(e),
    };
    let text = match a.output.format {
        Format::Text => render::ortho_text(&report),
        Format::Json => render::json(&report),
        Format::Csv => render::ortho_csv(&report),
    };
    finish(&a.output.out, &text, report.passed())
}

fn cmd_check(a: CheckArgs) -> ExitCode {
    if let Err(e) = setup_threads(a.output.threads) {
        return usage(e);
    }
    if a.output.format == Format::Csv {
        return usage("check-paper writes text or json");
    }
    let opts = SuiteOptions {
        max_points: a.output.max_points.unwrap_or(DEFAULT_MAX_POINTS),
        only: a.only,
    };
    let start = Instant::now();
    let suite = Suite::new(opts.clone());
    let stream = a.output.out.is_none() && a.output.format == Format::Text;
    let mut results = Vec::new();
    let mut text = String::new();
    for k in opts.criteria() {
        let c = suite.criterion(k);
        if a.output.format == Format::Text {
            let block = render::criterion_text(&c);
            if stream {
                print!("{block}");
                let _ = std::io::stdout().flush();
            } else {
                text.push_str(&block);
            }
        }
        results.push(c);
    }
    let passed = results.iter().all(|c| c.status != Status::Fail);
    match a.output.format {
        Format::Json => {
            text = render::json(&polarscheme::regression::SuiteReport {
                criteria: results,
                elapsed: start.elapsed(),
            })
        }
        _ => text.push_str(&render::summary_text(&results, start.elapsed())),
    }
    finish(&a.output.out, &text, passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Scheme(a) => cmd_scheme(a),
        Command::Ortho(a) => cmd_ortho(a),
        Command::CheckPaper(a) => cmd_check(a),
    }
}
