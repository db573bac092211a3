//! `wittcheck`: exact structure checks for Jacobson-Witt Lie algebras over
//! finite fields.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use witt_cli::format::{parse_element, parse_map, print_element};
use witt_cli::runner::{
    self, exit_code_for, render_report, CheckName, OutputFormat, EXIT_FAIL, EXIT_INFEASIBLE,
    EXIT_PASS, EXIT_USAGE,
};
use witt_core::gf::{default_regular, Field};
use witt_core::report::{CheckReport, WitnessItem};
use witt_core::structure::{centralizer, recover_inner, Recovered};
use witt_core::twolocal::{is_derivation_map, is_two_local};
use witt_core::witt::WittAlgebra;

#[derive(Parser)]
#[command(
    name = "wittcheck",
    version,
    about = "Exact verification of structural identities in the Jacobson-Witt Lie algebras W_n over finite fields"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct ConfigArgs {
    /// Rank n of the algebra W_n.
    #[arg(long)]
    n: usize,
    /// Prime characteristic.
    #[arg(long)]
    p: u32,
    /// Extension degree of the base field F_{p^deg}.
    #[arg(long)]
    deg: usize,
    /// Field modulus as ascending comma-separated coefficients (monic,
    /// irreducible); defaults to the canonical modulus.
    #[arg(long, value_delimiter = ',')]
    modulus: Option<Vec<u32>>,
    /// Cap on n*p^n for materialized matrices.
    #[arg(long, default_value_t = 128)]
    dim_cap: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Machine,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> OutputFormat {
        match f {
            FormatArg::Text => OutputFormat::Text,
            FormatArg::Machine => OutputFormat::Machine,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckArg {
    DerInn,
    ScriptD,
    Centralizers,
    TorusCartan,
    GradedVanishing,
    DeterminingPair,
    Counterexample,
    Roots,
    All,
}

impl CheckArg {
    fn selection(self) -> Option<CheckName> {
        match self {
            CheckArg::DerInn => Some(CheckName::DerInn),
            CheckArg::ScriptD => Some(CheckName::ScriptD),
            CheckArg::Centralizers => Some(CheckName::Centralizers),
            CheckArg::TorusCartan => Some(CheckName::TorusCartan),
            CheckArg::GradedVanishing => Some(CheckName::GradedVanishing),
            CheckArg::DeterminingPair => Some(CheckName::DeterminingPair),
            CheckArg::Counterexample => Some(CheckName::Counterexample),
            CheckArg::Roots => Some(CheckName::Roots),
            CheckArg::All => None,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the bracket [X, Y] of two element files in canonical format.
    Bracket {
        #[command(flatten)]
        config: ConfigArgs,
        /// Element file for X.
        x: PathBuf,
        /// Element file for Y.
        y: PathBuf,
    },
    /// Run named verification checks and print one certificate per check.
    Verify {
        #[command(flatten)]
        config: ConfigArgs,
        /// Seed for the randomized certificates.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        /// Which check to run.
        #[arg(value_enum)]
        check: CheckArg,
    },
    /// Compute the centralizer of an element file.
    Centralizer {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        x: PathBuf,
    },
    /// Compute the derivation and inner-derivation spaces and compare them.
    Derivations {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
    /// Recover the unique element with prescribed brackets against the
    /// determining pair.
    Recover {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        v1: PathBuf,
        v2: PathBuf,
    },
    /// Check a pointwise-map fixture for 2-locality and the derivation laws.
    TwolocalCheck {
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        map: PathBuf,
    },
}

fn build_algebra(config: &ConfigArgs) -> Result<WittAlgebra, u8> {
    let field = match &config.modulus {
        Some(m) => Field::with_modulus(config.p, config.deg, m.clone()),
        None => Field::new(config.p, config.deg),
    }
    .map_err(|e| {
        eprintln!("bad field configuration: {e}");
        EXIT_USAGE
    })?;
    WittAlgebra::new(field, config.n)
        .map(|alg| alg.with_dim_cap(config.dim_cap))
        .map_err(|e| {
            eprintln!("bad configuration: {e}");
            EXIT_USAGE
        })
}

fn read_element(path: &Path, alg: &WittAlgebra) -> Result<witt_core::WittElement, u8> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("cannot read {}: {e}", path.display());
        EXIT_USAGE
    })?;
    parse_element(&text, alg).map_err(|e| {
        eprintln!("{}: {e}", path.display());
        EXIT_USAGE
    })
}

fn cmd_bracket(config: &ConfigArgs, x: &Path, y: &Path) -> u8 {
    let alg = match build_algebra(config) {
        Ok(a) => a,
        Err(code) => return code,
    };
    let ex = match read_element(x, &alg) {
        Ok(e) => e,
        Err(code) => return code,
    };
    let ey = match read_element(y, &alg) {
        Ok(e) => e,
        Err(code) => return code,
    };
    match ex.bracket(&ey) {
        Ok(b) => {
            println!("{}", print_element(&alg, &b));
            EXIT_PASS
        }
        Err(e) => {
            eprintln!("bracket: {e}");
            exit_code_for(&e)
        }
    }
}

fn emit(alg: &WittAlgebra, report: &CheckReport, format: OutputFormat) {
    println!("{}", render_report(alg, report, format));
}

fn cmd_centralizer(config: &ConfigArgs, format: OutputFormat, x: &Path) -> u8 {
    let alg = match build_algebra(config) {
        Ok(a) => a,
        Err(code) => return code,
    };
    let ex = match read_element(x, &alg) {
        Ok(e) => e,
        Err(code) => return code,
    };
    let start = Instant::now();
    match centralizer(&alg, &ex) {
        Ok(z) => {
            let mut report = CheckReport::new("centralizer", &alg);
            report.dim("dim", z.dim() as i64);
            for i in 0..z.dim() {
                report.witness.push(WitnessItem {
                    label: format!("basis[{i}]"),
                    element: Some(alg.from_coords_raw(z.row_raw(i))),
                });
            }
            report.elapsed_ms = start.elapsed().as_millis() as u64;
            emit(&alg, &report, format);
            EXIT_PASS
        }
        Err(e) => {
            eprintln!("centralizer: {e}");
            exit_code_for(&e)
        }
    }
}

fn cmd_derivations(config: &ConfigArgs, format: OutputFormat) -> u8 {
    let alg = match build_algebra(config) {
        Ok(a) => a,
        Err(code) => return code,
    };
    if let Some(reason) = runner::refusal(&alg, CheckName::DerInn) {
        eprintln!("derivations: refused: {reason}");
        return EXIT_INFEASIBLE;
    }
    let start = Instant::now();
    match witt_core::structure::der_equals_inn(&alg) {
        Ok(mut report) => {
            report.elapsed_ms = start.elapsed().as_millis() as u64;
            let code = if report.passed() { EXIT_PASS } else { EXIT_FAIL };
            emit(&alg, &report, format);
            code
        }
        Err(e) => {
            eprintln!("derivations: {e}");
            exit_code_for(&e)
        }
    }
}

fn cmd_recover(config: &ConfigArgs, format: OutputFormat, v1: &Path, v2: &Path) -> u8 {
    let alg = match build_algebra(config) {
        Ok(a) => a,
        Err(code) => return code,
    };
    if let Some(reason) = runner::refusal(&alg, CheckName::DeterminingPair) {
        eprintln!("recover: refused: {reason}");
        return EXIT_INFEASIBLE;
    }
    let e1 = match read_element(v1, &alg) {
        Ok(e) => e,
        Err(code) => return code,
    };
    let e2 = match read_element(v2, &alg) {
        Ok(e) => e,
        Err(code) => return code,
    };
    let lambda = match default_regular(alg.field(), alg.n()) {
        Ok(l) => l,
        Err(e) => {
            eprintln!("recover: {e}");
            return exit_code_for(&e);
        }
    };
    let start = Instant::now();
    match recover_inner(&alg, &e1, &e2, &lambda) {
        Ok(outcome) => {
            let mut report = CheckReport::new("recover", &alg);
            report.dim(
                if alg.p() > 2 { "pair_squares" } else { "pair_script_d" },
                1,
            );
            match outcome {
                Recovered::Unique(a) => {
                    report.dim("solvable", 1);
                    report.witness.push(WitnessItem {
                        label: "a".into(),
                        element: Some(a),
                    });
                }
                Recovered::Unsolvable => {
                    report.dim("solvable", 0);
                }
            }
            report.elapsed_ms = start.elapsed().as_millis() as u64;
            emit(&alg, &report, format);
            EXIT_PASS
        }
        Err(e) => {
            eprintln!("recover: {e}");
            exit_code_for(&e)
        }
    }
}

fn cmd_twolocal_check(format: OutputFormat, map_path: &Path) -> u8 {
    let text = match std::fs::read_to_string(map_path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {}: {e}", map_path.display());
            return EXIT_USAGE;
        }
    };
    let (alg, map) = match parse_map(&text) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("{}: {e}", map_path.display());
            return EXIT_USAGE;
        }
    };
    let start = Instant::now();
    let mut any_fail = false;
    match is_two_local(&alg, &map) {
        Ok(mut report) => {
            report.elapsed_ms = start.elapsed().as_millis() as u64;
            if !report.passed() {
                any_fail = true;
            }
            emit(&alg, &report, format);
        }
        Err(e) => {
            eprintln!("two-local: {e}");
            return exit_code_for(&e);
        }
    }
    let start = Instant::now();
    match is_derivation_map(&alg, &map) {
        Ok(mut report) => {
            report.elapsed_ms = start.elapsed().as_millis() as u64;
            if !report.passed() {
                any_fail = true;
            }
            emit(&alg, &report, format);
        }
        Err(witt_core::Error::DomainNotFull) => {
            eprintln!("derivation-map: skipped (map is not defined on the whole algebra)");
        }
        Err(e) => {
            eprintln!("derivation-map: {e}");
            return exit_code_for(&e);
        }
    }
    if any_fail {
        EXIT_FAIL
    } else {
        EXIT_PASS
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match &cli.cmd {
        Cmd::Bracket { config, x, y } => cmd_bracket(config, x, y),
        Cmd::Verify {
            config,
            seed,
            format,
            check,
        } => match build_algebra(config) {
            Ok(alg) => runner::run_verify(&alg, check.selection(), *seed, (*format).into()),
            Err(code) => code,
        },
        Cmd::Centralizer { config, format, x } => cmd_centralizer(config, (*format).into(), x),
        Cmd::Derivations { config, format } => cmd_derivations(config, (*format).into()),
        Cmd::Recover {
            config,
            format,
            v1,
            v2,
        } => cmd_recover(config, (*format).into(), v1, v2),
        Cmd::TwolocalCheck { format, map } => cmd_twolocal_check((*format).into(), map),
    };
    ExitCode::from(code)
}
