//! Freeness verdicts from `(d, d1, tau)`, log canonical thresholds and the
//! deformation check.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::poly::{fmt_rat, ratio, Rat};
use crate::singular::{Inventory, LocusSurvey, SingularType};

/// `d1^2 - d1 (d-1) + (d-1)^2`.
pub fn eta(d: u32, d1: u32) -> i64 {
    let (d, d1) = (d as i64, d1 as i64);
    d1 * d1 - d1 * (d - 1) + (d - 1) * (d - 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum D1 {
    Exact(u32),
    AtLeast(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Free,
    NearlyFree,
    Neither(i64),
    Indeterminate(String),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Free => write!(f, "Free"),
            Verdict::NearlyFree => write!(f, "NearlyFree"),
            Verdict::Neither(nu) => write!(f, "Neither(nu={nu})"),
            Verdict::Indeterminate(why) => write!(f, "Indeterminate({why})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreenessReport {
    pub d: u32,
    pub d1: D1,
    pub tau: u32,
    pub eta: Option<i64>,
    pub nu: Option<i64>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

pub fn build_report(d: u32, d1: D1, tau: u32) -> FreenessReport {
    let D1::Exact(r) = d1 else {
        return FreenessReport {
            d,
            d1,
            tau,
            eta: None,
            nu: None,
            verdict: Verdict::Indeterminate("mdr not determined".into()),
            notes: vec![],
        };
    };
    let e = eta(d, r);
    let nu = e - tau as i64;
    let mut notes = Vec::new();
    let verdict = match nu {
        0 if 2 * r < d => Verdict::Free,
        0 => {
            notes.push(format!("nu = 0 but 2*d1 = {} exceeds d-1 = {}, so the free criterion does not apply", 2 * r, d - 1));
            Verdict::Neither(0)
        }
        1 => {
            if 2 * r > d {
                notes.push(format!("nearly free with d1 = {r} > d/2; the criterion is applied without a range restriction"));
            }
            Verdict::NearlyFree
        }
        nu => Verdict::Neither(nu),
    };
    FreenessReport { d, d1, tau, eta: Some(e), nu: Some(nu), verdict, notes }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LctType {
    A(u32),
    D(u32),
    Ordinary(u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LctEntry {
    pub ty: LctType,
    pub weights: (Rat, Rat),
    pub lct: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FreenessError {
    #[error("no log canonical threshold for {0}")]
    UnsupportedType(String),
    #[error("hypotheses failed: {}", .0.join(", "))]
    HypothesisFailed(Vec<String>),
}

pub fn lct_entry(ty: LctType) -> Result<LctEntry, FreenessError> {
    let (w1, w2) = match ty {
        LctType::A(k) if k >= 1 => (ratio(1, 2), ratio(1, k as i64 + 1)),
        LctType::D(k) if k >= 4 => {
            let k = k as i64;
            (ratio(1, k - 1), ratio(k - 2, 2 * (k - 1)))
        }
        LctType::Ordinary(r) if r >= 2 => (ratio(1, r as i64), ratio(1, r as i64)),
        other => return Err(FreenessError::UnsupportedType(format!("{other:?}"))),
    };
    let lct = &w1 + &w2;
    Ok(LctEntry { ty, weights: (w1, w2), lct })
}

/// Threshold for a classified point. Ordinary points of multiplicity at least
/// 5 need the quasi-homogeneity assumption.
pub fn lct(ty: &SingularType, assume_qh: bool) -> Result<LctEntry, FreenessError> {
    let t = match ty {
        SingularType::A1 => LctType::A(1),
        SingularType::A3 => LctType::A(3),
        SingularType::A5 => LctType::A(5),
        SingularType::A7 => LctType::A(7),
        SingularType::D4 => LctType::D(4),
        SingularType::OrdinaryMultiple(r) if *r <= 4 || assume_qh => LctType::Ordinary(*r),
        other => return Err(FreenessError::UnsupportedType(other.to_string())),
    };
    lct_entry(t)
}

/// The lower bound `alpha * d - 2` on mdr.
pub fn mdr_lower_bound(alpha: &Rat, d: u32) -> Rat {
    alpha * Rat::from_integer(d.into()) - Rat::from_integer(2.into())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundCheck {
    pub alpha: Option<Rat>,
    pub bound: Option<Rat>,
    /// `None` when the check was skipped.
    pub holds: Option<bool>,
    pub note: String,
}

/// Arnold exponent of the arrangement, when the located data determines it.
///
/// Points the survey could not locate are bounded from below: if no three
/// components share unlocated intersection multiplicity, each unlocated
/// point has two smooth branches meeting with multiplicity `m <= residual`,
/// i.e. type `A_{2m-1}` with threshold at least that of `A_{2 residual - 1}`.
pub fn arnold_exponent(survey: &LocusSurvey, k: usize, assume_qh: bool) -> Result<Rat, String> {
    let mut alpha: Option<Rat> = None;
    for r in &survey.records {
        let e = lct(&r.sing_type, assume_qh).map_err(|e| e.to_string())?;
        alpha = Some(match alpha {
            Some(a) if a <= e.lct => a,
            _ => e.lct,
        });
    }
    if !survey.complete {
        if survey.unlocated_triangle(k) {
            return Err("three components share unlocated intersections".into());
        }
        let worst = survey.residual_per_pair.values().copied().max().unwrap_or(0);
        let floor = lct_entry(LctType::A(2 * worst - 1)).expect("valid A_k").lct;
        match &alpha {
            Some(a) if *a <= floor => {}
            _ => return Err(format!("unlocated points only bounded: lct >= {}", fmt_rat(&floor))),
        }
    }
    alpha.ok_or_else(|| "no singular points".into())
}

pub fn check_bound_consistency(report: &FreenessReport, survey: &LocusSurvey, k: usize, assume_qh: bool) -> BoundCheck {
    let alpha = match arnold_exponent(survey, k, assume_qh) {
        Ok(a) => a,
        Err(note) => return BoundCheck { alpha: None, bound: None, holds: None, note },
    };
    let bound = mdr_lower_bound(&alpha, report.d);
    let holds = match report.d1 {
        D1::Exact(r) => Some(Rat::from_integer(r.into()) >= bound),
        D1::AtLeast(_) => None,
    };
    let note = match holds {
        Some(true) => "d1 >= alpha*d - 2".to_string(),
        Some(false) => "d1 violates alpha*d - 2".to_string(),
        None => "d1 unknown".to_string(),
    };
    BoundCheck { alpha: Some(alpha), bound: Some(bound), holds, note }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Clause {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeformationVerdict {
    pub clauses: Vec<Clause>,
    pub after_verdict: Verdict,
}

impl DeformationVerdict {
    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|c| c.passed)
    }

    pub fn into_result(self) -> Result<Self, FreenessError> {
        let failed: Vec<String> = self.clauses.iter().filter(|c| !c.passed).map(|c| c.name.to_string()).collect();
        if failed.is_empty() {
            Ok(self)
        } else {
            Err(FreenessError::HypothesisFailed(failed))
        }
    }
}

fn fmt_counts(c: &BTreeMap<SingularType, usize>) -> String {
    let parts: Vec<String> = c.iter().map(|(t, n)| format!("{n}x{t}")).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Checks the tacnode-to-two-nodes deformation statement clause by clause.
pub fn check_deformation(before: (&FreenessReport, &Inventory), after: (&FreenessReport, &Inventory)) -> DeformationVerdict {
    let (rb, ib) = before;
    let (ra, ia) = after;
    let mut clauses = Vec::new();
    clauses.push(Clause {
        name: "free",
        passed: rb.verdict == Verdict::Free,
        detail: format!("before: {}", rb.verdict),
    });
    let ade = |t: &SingularType| {
        matches!(t, SingularType::A1 | SingularType::A3 | SingularType::A5 | SingularType::A7 | SingularType::D4)
    };
    clauses.push(Clause {
        name: "ade",
        passed: ib.complete && ib.counts.keys().all(ade),
        detail: format!("before: {}", fmt_counts(&ib.counts)),
    });
    let inventory_ok = ib.complete && ia.complete && {
        let mut want = ib.counts.clone();
        match want.get_mut(&SingularType::A3) {
            Some(n) if *n > 0 => {
                *n -= 1;
                if *n == 0 {
                    want.remove(&SingularType::A3);
                }
                *want.entry(SingularType::A1).or_insert(0) += 2;
                want == ia.counts
            }
            _ => false,
        }
    };
    clauses.push(Clause {
        name: "inventory",
        passed: inventory_ok,
        detail: format!("{} -> {}", fmt_counts(&ib.counts), fmt_counts(&ia.counts)),
    });
    clauses.push(Clause {
        name: "tau",
        passed: ra.tau + 1 == rb.tau,
        detail: format!("{} -> {}", rb.tau, ra.tau),
    });
    clauses.push(Clause {
        name: "eta",
        passed: rb.eta.is_some() && rb.eta == ra.eta,
        detail: format!("{:?} vs {:?}", rb.eta, ra.eta),
    });
    clauses.push(Clause {
        name: "nearly_free",
        passed: ra.verdict == Verdict::NearlyFree,
        detail: format!("after: {}", ra.verdict),
    });
    DeformationVerdict { clauses, after_verdict: ra.verdict.clone() }
}

/// Weights `(w1, w2)` solving `e . w = 1` for two monomial exponents, by
/// Cramer's rule; `None` when the exponents are dependent.
pub fn weights_from_monomials(a: [u32; 2], b: [u32; 2]) -> Option<(Rat, Rat)> {
    let [a0, a1] = a.map(|v| Rat::from_integer(v.into()));
    let [b0, b1] = b.map(|v| Rat::from_integer(v.into()));
    let det = &a0 * &b1 - &a1 * &b0;
    if det.is_zero() {
        return None;
    }
    let one = Rat::one();
    Some(((&one * &b1 - &a1 * &one) / &det, (&a0 * &one - &one * &b0) / &det))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;
    use proptest::prelude::*;

    #[test]
    fn report_examples() {
        let r = build_report(6, D1::Exact(2), 19);
        assert_eq!((r.eta, r.nu, r.verdict), (Some(19), Some(0), Verdict::Free));
        let r = build_report(8, D1::Exact(3), 36);
        assert_eq!((r.eta, r.nu, r.verdict), (Some(37), Some(1), Verdict::NearlyFree));
        let r = build_report(10, D1::Exact(2), 64);
        assert_eq!((r.nu, r.verdict), (Some(3), Verdict::Neither(3)));
        let r = build_report(6, D1::AtLeast(5), 0);
        assert!(matches!(r.verdict, Verdict::Indeterminate(_)));
    }

    #[test]
    fn free_needs_small_d1() {
        // eta(6, 3) = 19 as well, but 2*3 > 5
        let r = build_report(6, D1::Exact(3), 19);
        assert_eq!(r.verdict, Verdict::Neither(0));
        assert_eq!(r.notes.len(), 1);
    }

    #[test]
    fn lct_table() {
        assert_eq!(lct(&SingularType::A7, false).unwrap().lct, ratio(5, 8));
        assert_eq!(lct(&SingularType::A1, false).unwrap().weights, (ratio(1, 2), ratio(1, 2)));
        assert_eq!(lct(&SingularType::A3, false).unwrap().lct, ratio(3, 4));
        assert_eq!(lct(&SingularType::D4, false).unwrap().lct, ratio(2, 3));
        assert_eq!(lct(&SingularType::OrdinaryMultiple(4), false).unwrap().lct, ratio(1, 2));
        assert!(lct(&SingularType::OrdinaryMultiple(5), false).is_err());
        assert_eq!(lct(&SingularType::OrdinaryMultiple(5), true).unwrap().lct, ratio(2, 5));
        let d = SingularType::Descriptor { branches: 3, multiplicities: vec![4, 4, 4] };
        assert!(matches!(lct(&d, true), Err(FreenessError::UnsupportedType(_))));
    }

    #[test]
    fn bounds() {
        assert_eq!(mdr_lower_bound(&ratio(5, 8), 12), ratio(11, 2));
        assert_eq!(mdr_lower_bound(&ratio(5, 8), 10), ratio(17, 4));
        assert_eq!(mdr_lower_bound(&rat(1), 3), rat(1));
    }

    #[test]
    fn weights_match_normal_forms() {
        for k in 1..=10u32 {
            let (w1, w2) = weights_from_monomials([2, 0], [0, k + 1]).unwrap();
            let e = lct_entry(LctType::A(k)).unwrap();
            assert_eq!(e.weights, (w1, w2));
        }
        for k in 4..=10u32 {
            // y^2 x + x^(k-1), weights of (x, y)
            let (w1, w2) = weights_from_monomials([1, 2], [k - 1, 0]).unwrap();
            let e = lct_entry(LctType::D(k)).unwrap();
            assert_eq!(e.weights, (w1, w2));
        }
    }

    proptest! {
        #[test]
        fn eta_symmetry(d in 2u32..400, t in 0u32..400) {
            let d1 = t % d;
            prop_assert_eq!(eta(d, d1), eta(d, d - 1 - d1));
        }

        #[test]
        fn nu_symmetric(d in 2u32..60, t in 0u32..60, tau in 0u32..3000) {
            let d1 = t % d;
            let a = build_report(d, D1::Exact(d1), tau);
            let b = build_report(d, D1::Exact(d - 1 - d1), tau);
            prop_assert_eq!(a.nu, b.nu);
        }

        #[test]
        fn verdict_matches_equations(d in 2u32..40, t in 0u32..40, tau in 0u32..1600) {
            let d1 = t % d;
            let r = build_report(d, D1::Exact(d1), tau);
            let (d, d1, tau) = (d as i64, d1 as i64, tau as i64);
            let free_eq = (d - 1).pow(2) - d1 * (d - d1 - 1) == tau;
            let nf_eq = (d - 1).pow(2) - d1 * (d - d1 - 1) == tau + 1;
            prop_assert_eq!(r.verdict == Verdict::Free, free_eq && 2 * d1 < d);
            prop_assert_eq!(r.verdict == Verdict::NearlyFree, nf_eq);
        }
    }
}
