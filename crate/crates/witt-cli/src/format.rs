//! The wire formats: elements, pointwise-map fixtures, and check reports.
//!
//! One JSON document per file, UTF-8. Element terms are sorted by
//! `(alpha lexicographic, d)` and coefficients are ascending lists in the
//! generator `t`, so printing is canonical and `parse(print(x)) = x` holds
//! byte for byte. Parsing is strict: out-of-range entries, stored zeros,
//! unsorted or duplicate terms are rejected rather than normalized.

use serde::{Deserialize, Serialize};

use witt_core::gf::Field;
use witt_core::report::{CheckReport, CheckStatus};
use witt_core::trunc::Monomial;
use witt_core::twolocal::PointwiseMap;
use witt_core::witt::{WittAlgebra, WittElement};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDoc {
    pub p: u32,
    pub deg: usize,
    pub modulus: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDoc {
    pub alpha: Vec<u8>,
    pub d: usize,
    pub c: Vec<u32>,
}

/// One term of a standalone polynomial in `A_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyTermDoc {
    pub alpha: Vec<u8>,
    pub c: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementDoc {
    pub field: FieldDoc,
    pub n: usize,
    pub terms: Vec<TermDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigDoc {
    pub n: usize,
    pub p: u32,
    pub deg: usize,
    pub modulus: Vec<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairDoc {
    pub x: ElementDoc,
    pub fx: ElementDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MapDoc {
    pub config: ConfigDoc,
    pub pairs: Vec<PairDoc>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessDoc {
    pub label: String,
    pub element: Option<ElementDoc>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportDoc {
    pub check: String,
    pub params: ConfigDoc,
    pub status: String,
    pub dims: serde_json::Map<String, serde_json::Value>,
    pub witness: Vec<WitnessDoc>,
    pub elapsed_ms: u64,
}

/// Parse/validation failure with a human-readable reason; maps to exit
/// code 2.
#[derive(Debug)]
pub struct FormatError(pub String);

impl std::fmt::Display for FormatError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for FormatError {}

fn err<T>(msg: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError(msg.into()))
}

pub fn field_doc(field: &Field) -> FieldDoc {
    FieldDoc {
        p: field.p(),
        deg: field.degree(),
        modulus: field.modulus().to_vec(),
    }
}

pub fn config_doc(alg: &WittAlgebra) -> ConfigDoc {
    ConfigDoc {
        n: alg.n(),
        p: alg.p(),
        deg: alg.field().degree(),
        modulus: alg.field().modulus().to_vec(),
    }
}

/// Build the algebra a config document describes.
pub fn algebra_from_config(doc: &ConfigDoc) -> Result<WittAlgebra, FormatError> {
    let field = Field::with_modulus(doc.p, doc.deg, doc.modulus.clone())
        .map_err(|e| FormatError(format!("bad field in config: {e}")))?;
    WittAlgebra::new(field, doc.n).map_err(|e| FormatError(format!("bad config: {e}")))
}

pub fn element_doc(alg: &WittAlgebra, x: &WittElement) -> ElementDoc {
    ElementDoc {
        field: field_doc(alg.field()),
        n: alg.n(),
        terms: x
            .terms()
            .map(|((mono, dir), c)| TermDoc {
                alpha: mono.exps().to_vec(),
                d: *dir,
                c: c.coeffs().to_vec(),
            })
            .collect(),
    }
}

/// Canonical one-line JSON for an element.
pub fn print_element(alg: &WittAlgebra, x: &WittElement) -> String {
    serde_json::to_string(&element_doc(alg, x)).expect("element serializes")
}

/// Strict parse of an element document against an expected algebra.
pub fn element_from_doc(doc: &ElementDoc, alg: &WittAlgebra) -> Result<WittElement, FormatError> {
    let expected = field_doc(alg.field());
    if doc.field != expected {
        return err(format!(
            "element field {{p={}, deg={}}} does not match the configuration",
            doc.field.p, doc.field.deg
        ));
    }
    if doc.n != alg.n() {
        return err(format!("element has n={}, configuration has n={}", doc.n, alg.n()));
    }
    let mut out = alg.zero();
    let mut prev: Option<(Vec<u8>, usize)> = None;
    for (idx, term) in doc.terms.iter().enumerate() {
        if term.alpha.len() != alg.n() {
            return err(format!("term {idx}: alpha has length {}", term.alpha.len()));
        }
        if term.alpha.iter().any(|&e| e as u32 >= alg.p()) {
            return err(format!("term {idx}: exponent out of range"));
        }
        if term.d == 0 || term.d > alg.n() {
            return err(format!("term {idx}: direction {} out of range", term.d));
        }
        if term.c.len() != alg.field().degree() {
            return err(format!("term {idx}: coefficient has length {}", term.c.len()));
        }
        if term.c.iter().any(|&c| c >= alg.p()) {
            return err(format!("term {idx}: coefficient entry out of range"));
        }
        if term.c.iter().all(|&c| c == 0) {
            return err(format!("term {idx}: stored zero coefficient"));
        }
        let key = (term.alpha.clone(), term.d);
        if let Some(p) = &prev {
            if *p >= key {
                return err(format!("term {idx}: terms not in canonical order"));
            }
        }
        prev = Some(key);
        let mono = Monomial::new(term.alpha.clone(), alg.p())
            .map_err(|e| FormatError(format!("term {idx}: {e}")))?;
        let coeff = alg
            .field()
            .element(&term.c)
            .map_err(|e| FormatError(format!("term {idx}: {e}")))?;
        let t = alg
            .term(mono, term.d, coeff)
            .map_err(|e| FormatError(format!("term {idx}: {e}")))?;
        out = out.add(&t).map_err(|e| FormatError(format!("term {idx}: {e}")))?;
    }
    Ok(out)
}

pub fn parse_element(json: &str, alg: &WittAlgebra) -> Result<WittElement, FormatError> {
    let doc: ElementDoc =
        serde_json::from_str(json).map_err(|e| FormatError(format!("invalid JSON: {e}")))?;
    element_from_doc(&doc, alg)
}

/// Standalone polynomial serialization: a list of `{alpha, c}` terms sorted
/// lexicographically by `alpha`.
pub fn poly_doc(f: &witt_core::TruncPoly) -> Vec<PolyTermDoc> {
    f.terms()
        .map(|(mono, c)| PolyTermDoc {
            alpha: mono.exps().to_vec(),
            c: c.coeffs().to_vec(),
        })
        .collect()
}

/// Strict parse of a standalone polynomial list against an algebra context.
pub fn poly_from_doc(
    terms: &[PolyTermDoc],
    alg: &WittAlgebra,
) -> Result<witt_core::TruncPoly, FormatError> {
    let mut out = witt_core::TruncPoly::zero(alg.field(), alg.n());
    let mut prev: Option<Vec<u8>> = None;
    for (idx, term) in terms.iter().enumerate() {
        if term.alpha.len() != alg.n() || term.alpha.iter().any(|&e| e as u32 >= alg.p()) {
            return err(format!("poly term {idx}: bad exponent vector"));
        }
        if term.c.len() != alg.field().degree()
            || term.c.iter().any(|&c| c >= alg.p())
            || term.c.iter().all(|&c| c == 0)
        {
            return err(format!("poly term {idx}: bad coefficient"));
        }
        if let Some(p) = &prev {
            if *p >= term.alpha {
                return err(format!("poly term {idx}: terms not in canonical order"));
            }
        }
        prev = Some(term.alpha.clone());
        let mono = Monomial::new(term.alpha.clone(), alg.p())
            .map_err(|e| FormatError(format!("poly term {idx}: {e}")))?;
        let coeff = alg
            .field()
            .element(&term.c)
            .map_err(|e| FormatError(format!("poly term {idx}: {e}")))?;
        let t = witt_core::TruncPoly::monomial(alg.field(), mono, coeff)
            .map_err(|e| FormatError(format!("poly term {idx}: {e}")))?;
        out = out.add(&t).map_err(|e| FormatError(format!("poly term {idx}: {e}")))?;
    }
    Ok(out)
}

pub fn map_doc(alg: &WittAlgebra, map: &PointwiseMap) -> MapDoc {
    MapDoc {
        config: config_doc(alg),
        pairs: map
            .domain()
            .iter()
            .zip(map.images())
            .map(|(x, fx)| PairDoc {
                x: element_doc(alg, x),
                fx: element_doc(alg, fx),
            })
            .collect(),
    }
}

/// Parse a pointwise-map fixture; the algebra comes from the embedded config.
pub fn parse_map(json: &str) -> Result<(WittAlgebra, PointwiseMap), FormatError> {
    let doc: MapDoc =
        serde_json::from_str(json).map_err(|e| FormatError(format!("invalid JSON: {e}")))?;
    let alg = algebra_from_config(&doc.config)?;
    let mut domain = Vec::with_capacity(doc.pairs.len());
    let mut images = Vec::with_capacity(doc.pairs.len());
    for (idx, pair) in doc.pairs.iter().enumerate() {
        domain.push(
            element_from_doc(&pair.x, &alg)
                .map_err(|e| FormatError(format!("pair {idx}, x: {e}")))?,
        );
        images.push(
            element_from_doc(&pair.fx, &alg)
                .map_err(|e| FormatError(format!("pair {idx}, fx: {e}")))?,
        );
    }
    let map = PointwiseMap::new(domain, images, None)
        .map_err(|e| FormatError(format!("bad map: {e}")))?;
    Ok((alg, map))
}

pub fn report_doc(alg: &WittAlgebra, report: &CheckReport) -> ReportDoc {
    let mut dims = serde_json::Map::new();
    for (name, v) in &report.dims {
        dims.insert(name.clone(), serde_json::Value::from(*v));
    }
    ReportDoc {
        check: report.check.clone(),
        params: ConfigDoc {
            n: report.params.n,
            p: report.params.p,
            deg: report.params.deg,
            modulus: report.params.modulus.clone(),
        },
        status: match report.status {
            CheckStatus::Pass => "pass".to_string(),
            CheckStatus::Fail => "fail".to_string(),
        },
        dims,
        witness: report
            .witness
            .iter()
            .map(|w| WitnessDoc {
                label: w.label.clone(),
                element: w.element.as_ref().map(|e| element_doc(alg, e)),
            })
            .collect(),
        elapsed_ms: report.elapsed_ms,
    }
}
