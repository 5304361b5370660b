//! `jetbracket` command line.
//!
//! Exit codes: 0 success, 1 identity-suite failure, 2 input error, 3 jet
//! order overflow.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use jetbracket::brackets::poisson_leibniz;
use jetbracket::frontend::{parse_form, render_alternating, render_pde, Format, ProblemConfig};
use jetbracket::suites::{self, Suite, SuiteReport};
use jetbracket::{Error, HamiltonianProblem};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SUITE_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_OVERFLOW: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "jetbracket", version, about = "Graded calculus on jet bundles and covariant Hamiltonian field equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Text,
    Latex,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Latex => Format::Latex,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    Differentials,
    Brackets,
    Poisson,
    Closure,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Differentials => Suite::Differentials,
            SuiteArg::Brackets => Suite::Brackets,
            SuiteArg::Poisson => Suite::Poisson,
            SuiteArg::Closure => Suite::Closure,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PresetArg {
    Maxwell,
    Oscillator,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Derive the field equations of a configured problem.
    Derive {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the Poisson–Leibniz bracket {lhs, rhs}_P of two forms.
    Bracket {
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Run seeded identity suites.
    Check {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        cases: usize,
    },
    /// Run a built-in example, or print its configuration.
    Preset {
        #[arg(value_enum)]
        name: PresetArg,
        #[arg(long)]
        emit_config: bool,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
}

/// Failure of a command, already mapped to its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::OrderOverflow { .. } => EXIT_OVERFLOW,
            _ => EXIT_INPUT,
        };
        Self { code, message: e.to_string() }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure { code: EXIT_INPUT, message: format!("{}: {e}", path.display()) }
}

fn load_config(path: &Path) -> Result<ProblemConfig, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    Ok(ProblemConfig::from_json(&text)?)
}

fn choose_format(flag: Option<FormatArg>, config: Option<&ProblemConfig>) -> Result<Format, Failure> {
    if let Some(f) = flag {
        return Ok(f.into());
    }
    Ok(config.map(ProblemConfig::output_format).transpose()?.flatten().unwrap_or_default())
}

fn emit(text: &str, out_path: Option<&Path>, out: &mut dyn Write) -> Result<(), Failure> {
    match out_path {
        Some(p) => std::fs::write(p, format!("{text}\n")).map_err(|e| io_failure(p, e)),
        None => match writeln!(out, "{text}") {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure { code: EXIT_INPUT, message: e.to_string() }),
            _ => Ok(()),
        },
    }
}

/// Exit code for a `check` run.
pub fn suite_exit_code(reports: &[SuiteReport]) -> i32 {
    if reports.iter().all(SuiteReport::passed) {
        EXIT_OK
    } else {
        EXIT_SUITE_FAILURE
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    match cli.command {
        Command::Derive { config, format, out: out_path } => {
            let cfg = load_config(&config)?;
            let format = choose_format(format, Some(&cfg))?;
            let system = cfg.to_problem()?.derive_field_equations()?;
            emit(&render_pde(&system, format), out_path.as_deref(), out)?;
            Ok(EXIT_OK)
        }
        Command::Bracket { lhs, rhs, config, format } => {
            let cfg = load_config(&config)?;
            let format = choose_format(format, Some(&cfg))?;
            let problem = cfg.to_problem()?;
            let a = parse_form(&lhs, problem.ctx())?;
            let b = parse_form(&rhs, problem.ctx())?;
            let value = poisson_leibniz(&a, &b, problem.poisson(), problem.metric());
            emit(&render_alternating(&value, format), None, out)?;
            Ok(EXIT_OK)
        }
        Command::Check { suite, seed, cases } => {
            let reports = suites::run(suite.into(), seed, cases);
            let mut text = String::new();
            for r in &reports {
                text.push_str(&r.to_string());
            }
            emit(text.trim_end(), None, out)?;
            Ok(suite_exit_code(&reports))
        }
        Command::Preset { name, emit_config, format } => {
            let (cfg, problem) = match name {
                PresetArg::Maxwell => (ProblemConfig::maxwell(), HamiltonianProblem::maxwell()),
                PresetArg::Oscillator => (ProblemConfig::oscillator(), HamiltonianProblem::oscillator()),
            };
            if emit_config {
                emit(&cfg.to_json(), None, out)?;
                return Ok(EXIT_OK);
            }
            let format = choose_format(format, None)?;
            emit(&render_pde(&problem.derive_field_equations()?, format), None, out)?;
            Ok(EXIT_OK)
        }
    }
}

/// Run with an explicit argument vector (the first item is the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
