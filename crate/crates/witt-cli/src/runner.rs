//! Check dispatch, report rendering, and the exit-code contract:
//! 0 all pass, 1 a check failed, 2 usage or parse error, 3 infeasible
//! configuration for the requested work.

use std::time::Instant;

use witt_core::error::Error;
use witt_core::report::CheckReport;
use witt_core::structure::{
    centralizer_identities_check, der_equals_inn, determining_pair_check, graded_vanishing_check,
    roots_check, script_d_check, torus_cartan_check,
};
use witt_core::twolocal::counterexample_check;
use witt_core::witt::WittAlgebra;

use crate::format::report_doc;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INFEASIBLE: u8 = 3;

/// Number of random regular vectors in the centralizer certificate.
pub const CENTRALIZER_SAMPLES: usize = 20;
/// Number of recovery roundtrips in the determining-pair certificate.
pub const DETERMINING_PAIR_SAMPLES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Machine,
}

/// The named checks in their canonical run order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckName {
    DerInn,
    ScriptD,
    Centralizers,
    TorusCartan,
    GradedVanishing,
    DeterminingPair,
    Counterexample,
    Roots,
}

pub const CANONICAL_ORDER: [CheckName; 8] = [
    CheckName::DerInn,
    CheckName::ScriptD,
    CheckName::Centralizers,
    CheckName::TorusCartan,
    CheckName::GradedVanishing,
    CheckName::DeterminingPair,
    CheckName::Counterexample,
    CheckName::Roots,
];

impl CheckName {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckName::DerInn => "der-inn",
            CheckName::ScriptD => "script-d",
            CheckName::Centralizers => "centralizers",
            CheckName::TorusCartan => "torus-cartan",
            CheckName::GradedVanishing => "graded-vanishing",
            CheckName::DeterminingPair => "determining-pair",
            CheckName::Counterexample => "counterexample",
            CheckName::Roots => "roots",
        }
    }
}

fn is_excluded_rank_one_char_two(alg: &WittAlgebra) -> bool {
    alg.n() == 1 && alg.p() == 2
}

/// Why a check cannot run on a configuration (all map to exit 3 when the
/// check was requested explicitly; under `all` they are simply skipped).
pub fn refusal(alg: &WittAlgebra, check: CheckName) -> Option<String> {
    let dim = alg.dim();
    if dim > alg.dim_cap() {
        return Some(format!(
            "dimension {dim} exceeds the cap {} (raise --dim-cap)",
            alg.dim_cap()
        ));
    }
    let needs_simple = matches!(
        check,
        CheckName::ScriptD
            | CheckName::Centralizers
            | CheckName::TorusCartan
            | CheckName::GradedVanishing
            | CheckName::DeterminingPair
            | CheckName::Roots
    );
    if needs_simple && is_excluded_rank_one_char_two(alg) {
        return Some("the rank-one characteristic-2 algebra is excluded (not simple)".into());
    }
    let needs_regular = matches!(
        check,
        CheckName::Centralizers | CheckName::DeterminingPair | CheckName::Roots
    );
    if needs_regular && alg.field().degree() < alg.n() {
        return Some(format!(
            "regular vectors need extension degree >= n = {} (got {})",
            alg.n(),
            alg.field().degree()
        ));
    }
    if check == CheckName::GradedVanishing && alg.p() == 2 {
        return Some("graded vanishing needs characteristic > 2".into());
    }
    if check == CheckName::Counterexample
        && !(alg.n() == 1 && alg.p() == 2 && alg.field().degree() == 1)
    {
        return Some("the counterexample lives on n=1, p=2, deg=1 exactly".into());
    }
    None
}

fn run_one(alg: &WittAlgebra, check: CheckName, seed: u64) -> Result<CheckReport, Error> {
    let start = Instant::now();
    let mut report = match check {
        CheckName::DerInn => der_equals_inn(alg)?,
        CheckName::ScriptD => script_d_check(alg)?,
        CheckName::Centralizers => centralizer_identities_check(alg, seed, CENTRALIZER_SAMPLES)?,
        CheckName::TorusCartan => torus_cartan_check(alg)?,
        CheckName::GradedVanishing => graded_vanishing_check(alg)?,
        CheckName::DeterminingPair => determining_pair_check(alg, seed, DETERMINING_PAIR_SAMPLES)?,
        CheckName::Counterexample => counterexample_check(alg)?,
        CheckName::Roots => roots_check(alg)?,
    };
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

pub fn render_report(alg: &WittAlgebra, report: &CheckReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Machine => {
            serde_json::to_string(&report_doc(alg, report)).expect("report serializes")
        }
        OutputFormat::Text => {
            let mut line = format!(
                "{} (n={} p={} deg={}): {}",
                report.check,
                report.params.n,
                report.params.p,
                report.params.deg,
                if report.passed() { "PASS" } else { "FAIL" }
            );
            if !report.dims.is_empty() {
                let dims: Vec<String> = report
                    .dims
                    .iter()
                    .map(|(k, v)| format!("{k}={v}"))
                    .collect();
                line.push_str(&format!(" [{}]", dims.join(" ")));
            }
            line.push_str(&format!(" ({} ms)", report.elapsed_ms));
            if !report.passed() {
                for w in &report.witness {
                    line.push_str(&format!("\n  witness: {}", w.label));
                    if let Some(e) = &w.element {
                        line.push_str(&format!(" = {e}"));
                    }
                }
            }
            line
        }
    }
}

/// Run one named check or `all` applicable ones in canonical order, printing
/// one report per check. Returns the process exit code.
pub fn run_verify(
    alg: &WittAlgebra,
    selection: Option<CheckName>,
    seed: u64,
    format: OutputFormat,
) -> u8 {
    let mut any_fail = false;
    match selection {
        Some(check) => {
            if let Some(reason) = refusal(alg, check) {
                eprintln!("{}: refused: {reason}", check.as_str());
                return EXIT_INFEASIBLE;
            }
            match run_one(alg, check, seed) {
                Ok(report) => {
                    println!("{}", render_report(alg, &report, format));
                    if !report.passed() {
                        any_fail = true;
                    }
                }
                Err(e) => {
                    eprintln!("{}: {e}", check.as_str());
                    return exit_code_for(&e);
                }
            }
        }
        None => {
            for check in CANONICAL_ORDER {
                if refusal(alg, check).is_some() {
                    continue;
                }
                match run_one(alg, check, seed) {
                    Ok(report) => {
                        println!("{}", render_report(alg, &report, format));
                        if !report.passed() {
                            any_fail = true;
                        }
                    }
                    Err(e) => {
                        eprintln!("{}: {e}", check.as_str());
                        return exit_code_for(&e);
                    }
                }
            }
        }
    }
    if any_fail {
        EXIT_FAIL
    } else {
        EXIT_PASS
    }
}

/// Map library errors onto the exit-code contract.
pub fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Infeasible { .. } | Error::CharTwoUnsupported | Error::FieldTooSmall { .. } => {
            EXIT_INFEASIBLE
        }
        _ => EXIT_USAGE,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use witt_core::gf::Field;

    #[test]
    fn refusals_respect_the_excluded_configuration() {
        let alg = WittAlgebra::new(Field::new(2, 1).unwrap(), 1).unwrap();
        assert!(refusal(&alg, CheckName::TorusCartan).is_some());
        assert!(refusal(&alg, CheckName::Centralizers).is_some());
        assert!(refusal(&alg, CheckName::DerInn).is_none());
        assert!(refusal(&alg, CheckName::Counterexample).is_none());
        let simple = WittAlgebra::new(Field::new(3, 2).unwrap(), 2).unwrap();
        assert!(refusal(&simple, CheckName::Counterexample).is_some());
        assert!(refusal(&simple, CheckName::Centralizers).is_none());
        // regular vectors need deg >= n
        let thin = WittAlgebra::new(Field::new(3, 1).unwrap(), 2).unwrap();
        assert!(refusal(&thin, CheckName::Roots).is_some());
        assert!(refusal(&thin, CheckName::ScriptD).is_none());
    }

    #[test]
    fn dimension_cap_refuses_early() {
        let alg = WittAlgebra::new(Field::new(7, 1).unwrap(), 2).unwrap().with_dim_cap(10);
        assert!(refusal(&alg, CheckName::DerInn).is_some());
    }
}
