//! Pointwise (possibly nonlinear) self-maps of `W_n` and 2-local derivation
//! checks.
//!
//! A map `Delta` is a 2-local derivation when every pair `(x, y)` admits one
//! inner element `a` with `[a, x] = Delta(x)` and `[a, y] = Delta(y)`
//! (derivations of `W_n` are all inner, so inner witnesses lose no
//! generality). Maps are extensional tables: the honest representation for
//! objects with no linearity assumptions. The rank-one algebra over `F_2` is
//! small enough to scan every one of its `4^4` self-maps, which separates the
//! 2-local derivations from the derivations.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::Error;
use crate::gf::default_regular;
use crate::linalg::PreparedSolver;
use crate::report::CheckReport;
use crate::rng::SplitMix64;
use crate::structure::determining_pair;
use crate::witt::{WittAlgebra, WittElement};

/// A finite table `x_i -> image_i` with distinct domain entries; the optional
/// rule tag is cosmetic (reports only).
#[derive(Debug, Clone)]
pub struct PointwiseMap {
    domain: Vec<WittElement>,
    images: Vec<WittElement>,
    rule: Option<String>,
}

impl PointwiseMap {
    pub fn new(
        domain: Vec<WittElement>,
        images: Vec<WittElement>,
        rule: Option<String>,
    ) -> Result<PointwiseMap, Error> {
        if domain.is_empty() || domain.len() != images.len() {
            return Err(Error::BadParam);
        }
        for i in 0..domain.len() {
            for j in (i + 1)..domain.len() {
                if domain[i] == domain[j] {
                    return Err(Error::BadParam);
                }
            }
        }
        Ok(PointwiseMap {
            domain,
            images,
            rule,
        })
    }

    /// The restriction of `ad b` to a domain.
    pub fn from_ad_restriction(
        b: &WittElement,
        domain: Vec<WittElement>,
    ) -> Result<PointwiseMap, Error> {
        let images = domain
            .iter()
            .map(|x| b.bracket(x))
            .collect::<Result<Vec<_>, _>>()?;
        PointwiseMap::new(domain, images, Some("ad-restriction".to_string()))
    }

    pub fn domain(&self) -> &[WittElement] {
        &self.domain
    }

    pub fn images(&self) -> &[WittElement] {
        &self.images
    }

    pub fn rule(&self) -> Option<&str> {
        self.rule.as_deref()
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }

    pub fn index_of(&self, x: &WittElement) -> Option<usize> {
        self.domain.iter().position(|d| d == x)
    }

    pub fn image_of(&self, x: &WittElement) -> Result<&WittElement, Error> {
        self.index_of(x)
            .map(|i| &self.images[i])
            .ok_or(Error::OutOfDomain)
    }
}

/// Outcome of a witness solve; an inconsistent system is a value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessOutcome {
    Witness(WittElement),
    Unsolvable,
}

/// Solve `[a, x] = Delta(x)` and `[a, y] = Delta(y)` for one `a`, returning
/// the solver's canonical particular solution.
pub fn witness_for_pair(
    alg: &WittAlgebra,
    map: &PointwiseMap,
    x: &WittElement,
    y: &WittElement,
) -> Result<WitnessOutcome, Error> {
    let fx = map.image_of(x)?;
    let fy = map.image_of(y)?;
    let minus_one = alg.field().from_int(-1);
    let mx = alg.ad_matrix(x)?.scale(&minus_one)?;
    let my = alg.ad_matrix(y)?.scale(&minus_one)?;
    let stacked = mx.vstack(&my)?;
    let mut rhs = alg.coords_raw(fx);
    rhs.extend_from_slice(&alg.coords_raw(fy));
    match stacked.solve_raw(&rhs)? {
        crate::linalg::SolveOutcome::Unsolvable => Ok(WitnessOutcome::Unsolvable),
        crate::linalg::SolveOutcome::Solution { particular, .. } => {
            let a = alg.from_coords_raw(&particular);
            debug_assert_eq!(&a.bracket(x)?, fx);
            debug_assert_eq!(&a.bracket(y)?, fy);
            Ok(WitnessOutcome::Witness(a))
        }
    }
}

/// Run the witness solver on every ordered pair of the domain; pass iff all
/// are solvable. On pass the report carries the witnesses, on failure the
/// offending pair.
pub fn is_two_local(alg: &WittAlgebra, map: &PointwiseMap) -> Result<CheckReport, Error> {
    let mut report = CheckReport::new("two-local", alg);
    let len = map.len();
    report.dim("domain", len as i64);
    report.dim("pairs", (len * len) as i64);
    for i in 0..len {
        for j in 0..len {
            let x = &map.domain()[i];
            let y = &map.domain()[j];
            match witness_for_pair(alg, map, x, y)? {
                WitnessOutcome::Witness(a) => {
                    // independent re-check of the witness equations
                    let ok = &a.bracket(x)? == map.image_of(x)?
                        && &a.bracket(y)? == map.image_of(y)?;
                    if !ok {
                        report.fail(format!("witness equations fail at pair ({i},{j})"), Some(a));
                    } else if report.passed() {
                        report.witness.push(crate::report::WitnessItem {
                            label: format!("witness[{i},{j}]"),
                            element: Some(a),
                        });
                    }
                }
                WitnessOutcome::Unsolvable => {
                    report.fail(format!("no witness for pair ({i},{j})"), Some(x.clone()));
                }
            }
        }
    }
    if !report.passed() {
        report.witness.retain(|w| !w.label.starts_with("witness["));
    }
    Ok(report)
}

fn require_full_domain(alg: &WittAlgebra, map: &PointwiseMap) -> Result<Vec<WittElement>, Error> {
    let all = alg
        .enumerate_elements(256)
        .map_err(|_| Error::DomainNotFull)?;
    if map.len() != all.len() {
        return Err(Error::DomainNotFull);
    }
    for e in &all {
        if map.index_of(e).is_none() {
            return Err(Error::DomainNotFull);
        }
    }
    Ok(all)
}

/// Exhaustively check additivity, `F`-homogeneity, and the Leibniz law for a
/// map defined on the whole (small) algebra.
pub fn is_derivation_map(alg: &WittAlgebra, map: &PointwiseMap) -> Result<CheckReport, Error> {
    let mut report = CheckReport::new("derivation-map", alg);
    let _ = require_full_domain(alg, map)?;
    let len = map.len();
    report.dim("domain", len as i64);
    'additivity: for i in 0..len {
        for j in (i + 1)..len {
            let x = &map.domain()[i];
            let y = &map.domain()[j];
            let sum = x.add(y)?;
            let delta_sum = map.image_of(&sum)?.clone();
            let sum_deltas = map.image_of(x)?.add(map.image_of(y)?)?;
            if delta_sum != sum_deltas {
                report.status = crate::report::CheckStatus::Fail;
                report.witness.push(crate::report::WitnessItem {
                    label: "additivity_x".to_string(),
                    element: Some(x.clone()),
                });
                report.witness.push(crate::report::WitnessItem {
                    label: "additivity_y".to_string(),
                    element: Some(y.clone()),
                });
                report.witness.push(crate::report::WitnessItem {
                    label: "delta_of_sum".to_string(),
                    element: Some(delta_sum),
                });
                report.witness.push(crate::report::WitnessItem {
                    label: "sum_of_deltas".to_string(),
                    element: Some(sum_deltas),
                });
                break 'additivity;
            }
        }
    }
    let order = alg.field().order();
    'homogeneity: for x in map.domain() {
        for k in 0..order {
            // field elements indexed with ascending-coefficient digits
            let mut coeffs = Vec::new();
            let mut d = k;
            for _ in 0..alg.field().degree() {
                coeffs.push((d % alg.p() as u64) as u32);
                d /= alg.p() as u64;
            }
            let scalar = alg.field().element(&coeffs)?;
            let kx = x.scale(&scalar)?;
            let lhs = map.image_of(&kx)?.clone();
            let rhs = map.image_of(x)?.scale(&scalar)?;
            if lhs != rhs {
                report.fail("homogeneity fails".to_string(), Some(x.clone()));
                break 'homogeneity;
            }
        }
    }
    'leibniz: for x in map.domain() {
        for y in map.domain() {
            let br = x.bracket(y)?;
            let lhs = map.image_of(&br)?.clone();
            let rhs = map
                .image_of(x)?
                .bracket(y)?
                .add(&x.bracket(map.image_of(y)?)?)?;
            if lhs != rhs {
                report.fail("Leibniz fails".to_string(), Some(br));
                break 'leibniz;
            }
        }
    }
    Ok(report)
}

/// The rank-one characteristic-2 algebra: `W_1` over `F_2`, spanned by
/// `e_{-1} = D_1` and `e_0 = x_1 D_1` with `[e_{-1}, e_0] = e_{-1}`.
pub fn counterexample_algebra() -> WittAlgebra {
    let field = crate::gf::Field::new(2, 1).expect("F_2 exists");
    WittAlgebra::new(field, 1).expect("rank 1")
}

fn is_counterexample_config(alg: &WittAlgebra) -> bool {
    alg.n() == 1 && alg.p() == 2 && alg.field().degree() == 1
}

/// The 2-local derivation that is not a derivation:
/// `k_{-1} e_{-1} + k_0 e_0  ->  k_0 e_{-1}` when `k_{-1} != 0`, else `0`.
pub fn counterexample_map(alg: &WittAlgebra) -> Result<PointwiseMap, Error> {
    if !is_counterexample_config(alg) {
        return Err(Error::BadParam);
    }
    let e_minus = alg.basis_element(0); // D_1
    let domain = alg.enumerate_elements(4)?;
    let images = domain
        .iter()
        .map(|x| {
            let k_minus = x.coeff(&crate::trunc::Monomial::unit(1), 1);
            let k_zero = x.coeff(&crate::trunc::Monomial::new(alloc::vec![1], 2).unwrap(), 1);
            if !k_minus.is_zero() {
                e_minus.scale(&k_zero)
            } else {
                Ok(alg.zero())
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    PointwiseMap::new(domain, images, Some("counterexample".to_string()))
}

/// Scan all `4^4 = 256` self-maps of `W_1(F_2)`: count the derivations and
/// the 2-local derivations, and certify that the inclusion is strict, that
/// the shipped counterexample sits in the gap, and that every 2-local map
/// fixes zero and is homogeneous.
pub fn exhaustive_scan_w1_p2(alg: &WittAlgebra) -> Result<CheckReport, Error> {
    if !is_counterexample_config(alg) {
        return Err(Error::Infeasible {
            dim: alg.dim(),
            cap: 2,
        });
    }
    let mut report = CheckReport::new("exhaustive-scan", alg);
    let elements = alg.enumerate_elements(4)?;
    let len = elements.len();
    // One prepared solver per ordered pair; 256 maps reuse them.
    let minus_one = alg.field().from_int(-1);
    let mut solvers = Vec::with_capacity(len * len);
    for x in &elements {
        let mx = alg.ad_matrix(x)?.scale(&minus_one)?;
        for y in &elements {
            let my = alg.ad_matrix(y)?.scale(&minus_one)?;
            solvers.push(PreparedSolver::new(&mx.vstack(&my)?));
        }
    }
    let counterexample = counterexample_map(alg)?;
    let ce_images: Vec<usize> = counterexample
        .images()
        .iter()
        .map(|im| elements.iter().position(|e| e == im).expect("in algebra"))
        .collect();

    let total_maps = len.pow(len as u32);
    let mut derivations = 0i64;
    let mut two_local = 0i64;
    let mut ce_is_two_local_non_derivation = false;
    for code in 0..total_maps {
        let mut images = Vec::with_capacity(len);
        let mut c = code;
        for _ in 0..len {
            images.push(c % len);
            c /= len;
        }
        // 2-local: all ordered pairs solvable
        let mut ok = true;
        'pairs: for i in 0..len {
            for j in 0..len {
                let mut rhs = alg.coords_raw(&elements[images[i]]);
                rhs.extend_from_slice(&alg.coords_raw(&elements[images[j]]));
                if solvers[i * len + j].solve_raw(&rhs).is_none() {
                    ok = false;
                    break 'pairs;
                }
            }
        }
        let map = PointwiseMap::new(
            elements.clone(),
            images.iter().map(|&i| elements[i].clone()).collect(),
            None,
        )?;
        let is_derivation = is_derivation_map(alg, &map)?.passed();
        if is_derivation {
            derivations += 1;
            if !ok {
                report.fail(format!("derivation {code} is not 2-local"), None);
            }
        }
        if ok {
            two_local += 1;
            // Homogeneity is forced: over F_2 the scalars are 0 and 1, so it
            // reduces to the zero check.
            let zero_idx = map.index_of(&alg.zero()).expect("zero in domain");
            if !map.images()[zero_idx].is_zero() {
                report.fail(format!("2-local map {code} moves zero"), None);
            }
            if images == ce_images && !is_derivation {
                ce_is_two_local_non_derivation = true;
            }
        }
    }
    report.dim("maps", total_maps as i64);
    report.dim("derivations", derivations);
    report.dim("two_local", two_local);
    report.dim("two_local_non_derivations", two_local - derivations);
    report.assert_that(derivations == 4, "derivation-count-is-four");
    report.assert_that(two_local > derivations, "strict-inclusion");
    report.assert_that(
        ce_is_two_local_non_derivation,
        "counterexample-in-the-gap",
    );
    Ok(report)
}

/// Aggregated counterexample certificate: the map is 2-local on all 16
/// pairs, fails additivity at the pair `(e_{-1}, e_0)` with the displayed
/// values, and the exhaustive scan confirms the strict inclusion.
pub fn counterexample_check(alg: &WittAlgebra) -> Result<CheckReport, Error> {
    if !is_counterexample_config(alg) {
        return Err(Error::Infeasible {
            dim: alg.dim(),
            cap: 2,
        });
    }
    let mut report = CheckReport::new("counterexample", alg);
    let map = counterexample_map(alg)?;
    let two_local = is_two_local(alg, &map)?;
    report.dim("pairs", (map.len() * map.len()) as i64);
    report.assert_that(two_local.passed(), "map-is-two-local");

    let derivation = is_derivation_map(alg, &map)?;
    report.assert_that(!derivation.passed(), "map-is-not-a-derivation");
    // the additivity failure must be at (e_{-1}, e_0) with the known values
    let e_minus = alg.basis_element(0);
    let e_zero = alg.basis_element(1);
    let find = |label: &str| {
        derivation
            .witness
            .iter()
            .find(|w| w.label == label)
            .and_then(|w| w.element.clone())
    };
    report.assert_that(
        find("additivity_x").as_ref() == Some(&e_minus),
        "failure-pair-x-is-e-minus",
    );
    report.assert_that(
        find("additivity_y").as_ref() == Some(&e_zero),
        "failure-pair-y-is-e-zero",
    );
    report.assert_that(
        find("delta_of_sum").as_ref() == Some(&e_minus),
        "delta-of-sum-is-e-minus",
    );
    report.assert_that(
        find("sum_of_deltas").map(|e| e.is_zero()) == Some(true),
        "sum-of-deltas-is-zero",
    );

    let scan = exhaustive_scan_w1_p2(alg)?;
    report.assert_that(scan.passed(), "exhaustive-scan");
    for (name, v) in &scan.dims {
        report.dim(name, *v);
    }
    Ok(report)
}

/// Desk-scale shadow of the support-confinement lemma: a map vanishing on
/// `d_lambda^(1)` that admits pair witnesses can only move `X` inside the
/// span of its own monomial lines `{x^alpha D_i : (alpha, i) in supp(X)}`.
pub fn support_shadow_check(
    alg: &WittAlgebra,
    seed: u64,
    samples: usize,
) -> Result<CheckReport, Error> {
    let mut report = CheckReport::new("support-shadow", alg);
    let mut rng = SplitMix64::new(seed);
    let lambda = default_regular(alg.field(), alg.n())?;
    let (d1, d2) = determining_pair(alg, &lambda)?;
    let torus = alg.torus_basis();
    report.dim("samples", samples as i64);
    let mut d2_solvable = 0i64;
    for s in 0..samples {
        let x = loop {
            let x = alg.random_nonzero_element(&mut rng, 4);
            if x != d1 && x != d2 {
                break x;
            }
        };
        // a random torus element a; Delta agrees with ad a at X and kills
        // the determining pair
        let mut a = alg.zero();
        for h in &torus {
            a = a.add(&h.scale(&alg.field().random_element(&mut rng))?)?;
        }
        let image = a.bracket(&x)?;
        let map = PointwiseMap::new(
            alloc::vec![d1.clone(), d2.clone(), x.clone()],
            alloc::vec![alg.zero(), alg.zero(), image.clone()],
            None,
        )?;
        match witness_for_pair(alg, &map, &d1, &x)? {
            WitnessOutcome::Witness(_) => {}
            WitnessOutcome::Unsolvable => {
                report.fail(format!("sample {s}: pair (d1, X) has no witness"), Some(x.clone()));
                continue;
            }
        }
        if let WitnessOutcome::Witness(_) = witness_for_pair(alg, &map, &d2, &x)? {
            d2_solvable += 1;
        }
        // support confinement
        let supp_x = x.support();
        let confined = image
            .support()
            .iter()
            .all(|key| supp_x.contains(key));
        if !confined {
            report.fail(format!("sample {s}: image escapes the support lines"), Some(image));
        }
    }
    report.dim("d2_solvable", d2_solvable);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;
    use crate::trunc::Monomial;

    fn w1_f2() -> WittAlgebra {
        counterexample_algebra()
    }

    fn e_minus(alg: &WittAlgebra) -> WittElement {
        alg.basis_element(0)
    }

    fn e_zero(alg: &WittAlgebra) -> WittElement {
        alg.basis_element(1)
    }

    #[test]
    fn bracket_relation_of_the_small_algebra() {
        let alg = w1_f2();
        assert_eq!(
            e_minus(&alg).bracket(&e_zero(&alg)).unwrap(),
            e_minus(&alg)
        );
    }

    #[test]
    fn counterexample_images() {
        let alg = w1_f2();
        let map = counterexample_map(&alg).unwrap();
        assert!(map.image_of(&alg.zero()).unwrap().is_zero());
        assert!(map.image_of(&e_minus(&alg)).unwrap().is_zero());
        assert!(map.image_of(&e_zero(&alg)).unwrap().is_zero());
        let top = e_minus(&alg).add(&e_zero(&alg)).unwrap();
        assert_eq!(map.image_of(&top).unwrap(), &e_minus(&alg));
        // only defined on the fixed configuration
        let other = WittAlgebra::new(Field::new(3, 1).unwrap(), 1).unwrap();
        assert!(matches!(counterexample_map(&other), Err(Error::BadParam)));
    }

    #[test]
    fn witness_for_the_distinguishing_pair() {
        let alg = w1_f2();
        let map = counterexample_map(&alg).unwrap();
        let x = e_minus(&alg);
        let y = e_minus(&alg).add(&e_zero(&alg)).unwrap();
        // Delta(e_{-1}) = 0 forces the e_0 coordinate of the witness to 0;
        // Delta(e_{-1} + e_0) = e_{-1} then forces the witness e_{-1}.
        match witness_for_pair(&alg, &map, &x, &y).unwrap() {
            WitnessOutcome::Witness(a) => assert_eq!(a, e_minus(&alg)),
            WitnessOutcome::Unsolvable => panic!("pair must be solvable"),
        }
        // out-of-domain query
        let alg3 = WittAlgebra::new(Field::new(3, 1).unwrap(), 1).unwrap();
        let foreign = alg3.zero();
        assert!(matches!(
            map.image_of(&foreign),
            Err(Error::OutOfDomain)
        ));
    }

    #[test]
    fn zero_map_and_ad_restrictions_are_two_local() {
        let alg = w1_f2();
        let domain = alg.enumerate_elements(4).unwrap();
        let zero_map = PointwiseMap::new(
            domain.clone(),
            domain.iter().map(|_| alg.zero()).collect(),
            None,
        )
        .unwrap();
        let rep = is_two_local(&alg, &zero_map).unwrap();
        assert!(rep.passed());
        // a zero image has witness a = 0 (canonical particular solution)
        match witness_for_pair(&alg, &zero_map, &domain[1], &domain[2]).unwrap() {
            WitnessOutcome::Witness(a) => assert!(a.is_zero()),
            _ => panic!("zero map has witnesses"),
        }
        // ad restrictions: b satisfies both equations
        for b in &domain {
            let map = PointwiseMap::from_ad_restriction(b, domain.clone()).unwrap();
            assert!(is_two_local(&alg, &map).unwrap().passed());
            let x = &domain[1];
            let y = &domain[3];
            match witness_for_pair(&alg, &map, x, y).unwrap() {
                WitnessOutcome::Witness(_) => {
                    assert_eq!(&b.bracket(x).unwrap(), map.image_of(x).unwrap());
                    assert_eq!(&b.bracket(y).unwrap(), map.image_of(y).unwrap());
                }
                _ => panic!("ad restriction is 2-local by construction"),
            }
        }
    }

    #[test]
    fn counterexample_is_two_local_but_not_a_derivation() {
        let alg = w1_f2();
        let map = counterexample_map(&alg).unwrap();
        let rep = is_two_local(&alg, &map).unwrap();
        assert!(rep.passed());
        assert_eq!(
            rep.dims.iter().find(|d| d.0 == "pairs").unwrap().1,
            16
        );
        let der = is_derivation_map(&alg, &map).unwrap();
        assert!(!der.passed());
        // witness pair (e_{-1}, e_0) with the displayed values
        let get = |label: &str| {
            der.witness
                .iter()
                .find(|w| w.label == label)
                .unwrap()
                .element
                .clone()
                .unwrap()
        };
        assert_eq!(get("additivity_x"), e_minus(&alg));
        assert_eq!(get("additivity_y"), e_zero(&alg));
        assert_eq!(get("delta_of_sum"), e_minus(&alg));
        assert!(get("sum_of_deltas").is_zero());
    }

    #[test]
    fn fixing_a_direction_blocks_two_locality() {
        // e_{-1} -> e_0 cannot be matched: [a, e_{-1}] stays in F e_{-1}.
        let alg = w1_f2();
        let domain = alg.enumerate_elements(4).unwrap();
        let images: Vec<WittElement> = domain
            .iter()
            .map(|x| {
                if x == &e_minus(&alg) {
                    e_zero(&alg)
                } else {
                    alg.zero()
                }
            })
            .collect();
        let map = PointwiseMap::new(domain, images, None).unwrap();
        let rep = is_two_local(&alg, &map).unwrap();
        assert!(!rep.passed());
    }

    #[test]
    fn derivation_map_checks() {
        let alg = w1_f2();
        let domain = alg.enumerate_elements(4).unwrap();
        // zero map passes
        let zero_map = PointwiseMap::new(
            domain.clone(),
            domain.iter().map(|_| alg.zero()).collect(),
            None,
        )
        .unwrap();
        assert!(is_derivation_map(&alg, &zero_map).unwrap().passed());
        // ad e_0 passes
        let ad_map = PointwiseMap::from_ad_restriction(&e_zero(&alg), domain.clone()).unwrap();
        assert!(is_derivation_map(&alg, &ad_map).unwrap().passed());
        // partial domains are rejected
        let partial = PointwiseMap::new(
            alloc::vec![alg.zero(), e_minus(&alg)],
            alloc::vec![alg.zero(), alg.zero()],
            None,
        )
        .unwrap();
        assert!(matches!(
            is_derivation_map(&alg, &partial),
            Err(Error::DomainNotFull)
        ));
    }

    #[test]
    fn scan_certifies_the_strict_inclusion() {
        let alg = w1_f2();
        let rep = exhaustive_scan_w1_p2(&alg).unwrap();
        assert!(rep.passed());
        let get = |name: &str| rep.dims.iter().find(|d| d.0 == name).unwrap().1;
        assert_eq!(get("maps"), 256);
        assert_eq!(get("derivations"), 4);
        assert!(get("two_local") > get("derivations"));
        // larger configurations refuse
        let alg3 = WittAlgebra::new(Field::new(3, 1).unwrap(), 1).unwrap();
        assert!(matches!(
            exhaustive_scan_w1_p2(&alg3),
            Err(Error::Infeasible { .. })
        ));
    }

    #[test]
    fn derivations_are_two_local_via_inner_witnesses() {
        // any ad restriction passes both checks on a sampling domain
        let alg = WittAlgebra::new(Field::new(3, 1).unwrap(), 1).unwrap();
        let mut rng = SplitMix64::new(3);
        for _ in 0..10 {
            let b = alg.random_element(&mut rng, 3);
            let mut domain = alloc::vec![alg.zero()];
            while domain.len() < 6 {
                let x = alg.random_element(&mut rng, 3);
                if domain.iter().all(|d| d != &x) {
                    domain.push(x);
                }
            }
            let map = PointwiseMap::from_ad_restriction(&b, domain).unwrap();
            assert!(is_two_local(&alg, &map).unwrap().passed());
            // homogeneity is forced on scalar-closed subsets
            for x in map.domain() {
                for k in 0..3 {
                    let scalar = alg.field().from_int(k);
                    let kx = x.scale(&scalar).unwrap();
                    if let Ok(img) = map.image_of(&kx) {
                        assert_eq!(img, &map.image_of(x).unwrap().scale(&scalar).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn support_shadow_on_small_simple_algebras() {
        for (p, deg, n) in [(3u32, 1usize, 1usize), (2, 2, 2), (3, 2, 2)] {
            let alg = WittAlgebra::new(Field::new(p, deg).unwrap(), n).unwrap();
            let rep = support_shadow_check(&alg, 0xbead, 50).unwrap();
            assert!(rep.passed(), "support shadow fails at p={p}, n={n}");
        }
    }

    #[test]
    fn monomial_unit_key_reads_coefficients() {
        let alg = w1_f2();
        let top = e_minus(&alg).add(&e_zero(&alg)).unwrap();
        assert!(!top.coeff(&Monomial::unit(1), 1).is_zero());
    }
}
