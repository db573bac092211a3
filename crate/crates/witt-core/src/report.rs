//! Machine-readable verification certificates.

use alloc::string::String;
use alloc::vec::Vec;

use crate::witt::{WittAlgebra, WittElement};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
}

/// The configuration a check ran against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckParams {
    pub n: usize,
    pub p: u32,
    pub deg: usize,
    pub modulus: Vec<u32>,
}

impl CheckParams {
    pub fn of(alg: &WittAlgebra) -> CheckParams {
        CheckParams {
            n: alg.n(),
            p: alg.p(),
            deg: alg.field().degree(),
            modulus: alg.field().modulus().to_vec(),
        }
    }
}

/// A named witness attached to a failing (or informative) check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessItem {
    pub label: String,
    pub element: Option<WittElement>,
}

/// One verification certificate: `status` is `Pass` iff every identity the
/// check asserts held exactly. `elapsed_ms` is left at zero here; callers
/// with a clock fill it in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub check: String,
    pub params: CheckParams,
    pub status: CheckStatus,
    /// Ordered numeric payload (dimensions, counts).
    pub dims: Vec<(String, i64)>,
    pub witness: Vec<WitnessItem>,
    pub elapsed_ms: u64,
}

impl CheckReport {
    pub fn new(check: &str, alg: &WittAlgebra) -> CheckReport {
        CheckReport {
            check: String::from(check),
            params: CheckParams::of(alg),
            status: CheckStatus::Pass,
            dims: Vec::new(),
            witness: Vec::new(),
            elapsed_ms: 0,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }

    pub fn dim(&mut self, name: &str, value: i64) {
        self.dims.push((String::from(name), value));
    }

    pub fn fail(&mut self, label: String, element: Option<WittElement>) {
        self.status = CheckStatus::Fail;
        self.witness.push(WitnessItem { label, element });
    }

    /// Record a named boolean assertion: failures flip the status and keep a
    /// witness label.
    pub fn assert_that(&mut self, ok: bool, label: &str) {
        if !ok {
            self.fail(String::from(label), None);
        }
    }
}
