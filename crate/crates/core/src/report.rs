//! Machine-readable and plain-text views of an [`Analysis`].
//!
//! Rationals are written as `"p/q"` strings, points as `"(x:y:z)"`,
//! component indices start at 1. Maps are ordered, so the output for a
//! given input is byte-for-byte stable.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::analysis::{Analysis, WitnessSource};
use crate::freeness::{Verdict, D1};
use crate::jacobian::Stabilization;
use crate::poly::{fmt_point, fmt_rat};

pub const SCHEMA: &str = "conicfree.report/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema: String,
    pub input: InputBlock,
    pub hilbert: HilbertBlock,
    pub mdr: MdrBlock,
    pub freeness: FreenessBlock,
    pub survey: Option<SurveyBlock>,
    pub checks: ChecksBlock,
    pub points: Vec<PointBlock>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputBlock {
    pub source: String,
    pub polynomial: String,
    pub degree: u32,
    pub factors: Vec<String>,
    /// Why the input was not treated as a conic arrangement.
    pub arrangement_note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertBlock {
    pub window: Vec<(u32, usize)>,
    pub stabilization: String,
    pub tau: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MdrBlock {
    pub d1: u32,
    pub exact: bool,
    pub source: String,
    pub witness: [String; 3],
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreenessBlock {
    pub d: u32,
    pub d1: u32,
    pub tau: Option<u32>,
    pub eta: Option<i64>,
    pub nu: Option<i64>,
    pub verdict: String,
    pub defect: Option<i64>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordBlock {
    pub point: String,
    pub members: Vec<usize>,
    pub pair_mults: Vec<Vec<u32>>,
    #[serde(rename = "type")]
    pub sing_type: String,
    pub mu: u32,
    pub tau: Option<u32>,
    pub local_mu: Option<u32>,
    pub local_tau: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyBlock {
    pub components: Vec<String>,
    pub records: Vec<RecordBlock>,
    /// `"i,j" -> unlocated intersection multiplicity`, nonzero entries only.
    pub residuals: BTreeMap<String, u32>,
    pub complete: bool,
    pub rejected_points: Vec<String>,
    pub inventory: BTreeMap<String, usize>,
    pub inventory_complete: bool,
    pub inferred_nodes: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChecksBlock {
    pub local_tau_sum: Option<u32>,
    pub local_matches_global: Option<bool>,
    /// `[k, n2, n3, t3, t5, t7]`.
    pub weak_type: Option<[u64; 6]>,
    pub count_check: Option<bool>,
    pub arnold_exponent: Option<String>,
    pub mdr_bound: Option<String>,
    pub bound_holds: Option<bool>,
    pub bound_note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointBlock {
    pub point: String,
    pub mu: u32,
    pub tau: u32,
}

fn verdict_name(v: &Verdict) -> (String, Option<i64>) {
    match v {
        Verdict::Free => ("free".into(), None),
        Verdict::NearlyFree => ("nearly_free".into(), None),
        Verdict::Neither(nu) => ("neither".into(), Some(*nu)),
        Verdict::Indeterminate(_) => ("indeterminate".into(), None),
    }
}

impl AnalysisReport {
    pub fn from_analysis(a: &Analysis, source: &str) -> Self {
        let (verdict, defect) = verdict_name(&a.report.verdict);
        let mut notes = a.report.notes.clone();
        if let Verdict::Indeterminate(why) = &a.report.verdict {
            notes.insert(0, why.clone());
        }
        let stabilization = match a.hilbert.stabilization {
            Stabilization::Stable { .. } => "stable",
            Stabilization::Smooth => "smooth",
            Stabilization::Unstable => "unstable",
        };
        let survey = a.survey.as_ref().map(|s| {
            let inv = a.inventory.as_ref().expect("inventory accompanies survey");
            SurveyBlock {
                components: a
                    .arrangement
                    .as_ref()
                    .map(|arr| arr.components().iter().map(|c| c.poly().to_string()).collect())
                    .unwrap_or_default(),
                records: s
                    .records
                    .iter()
                    .map(|r| RecordBlock {
                        point: fmt_point(&r.point),
                        members: r.members.iter().map(|m| m + 1).collect(),
                        pair_mults: r.pair_mults.clone(),
                        sing_type: r.sing_type.to_string(),
                        mu: r.mu,
                        tau: r.tau,
                        local_mu: r.local.map(|l| l.mu),
                        local_tau: r.local.map(|l| l.tau),
                    })
                    .collect(),
                residuals: s
                    .residual_per_pair
                    .iter()
                    .filter(|(_, &v)| v > 0)
                    .map(|((i, j), v)| (format!("{},{}", i + 1, j + 1), *v))
                    .collect(),
                complete: s.complete,
                rejected_points: s.rejected_extra.iter().map(fmt_point).collect(),
                inventory: inv.counts.iter().map(|(t, n)| (t.to_string(), *n)).collect(),
                inventory_complete: inv.complete,
                inferred_nodes: inv.inferred_nodes,
            }
        });
        let checks = ChecksBlock {
            local_tau_sum: a.survey.as_ref().and_then(|s| s.local_tau_sum()),
            local_matches_global: a.local_vs_global().map(|(l, g)| l == g),
            weak_type: a.weak_type.as_ref().map(|w| [w.k, w.n2, w.n3, w.t3, w.t5, w.t7]),
            count_check: a.count_ok(),
            arnold_exponent: a.bound.as_ref().and_then(|b| b.alpha.as_ref()).map(fmt_rat),
            mdr_bound: a.bound.as_ref().and_then(|b| b.bound.as_ref()).map(fmt_rat),
            bound_holds: a.bound.as_ref().and_then(|b| b.holds),
            bound_note: a.bound.as_ref().map(|b| b.note.clone()).filter(|n| !n.is_empty()),
        };
        AnalysisReport {
            schema: SCHEMA.to_string(),
            input: InputBlock {
                source: source.to_string(),
                polynomial: a.f.to_string(),
                degree: a.f.degree(),
                factors: a.factors.iter().map(|g| g.to_string()).collect(),
                arrangement_note: a.arrangement_note.clone(),
            },
            hilbert: HilbertBlock {
                window: a.hilbert.window.clone(),
                stabilization: stabilization.into(),
                tau: a.tau(),
            },
            mdr: MdrBlock {
                d1: a.d1(),
                exact: matches!(a.report.d1, D1::Exact(_)),
                source: match a.witness_source {
                    WitnessSource::Search => "search",
                    WitnessSource::Koszul => "koszul",
                }
                .into(),
                witness: [a.witness.a.to_string(), a.witness.b.to_string(), a.witness.c.to_string()],
                verified: a.witness_verified,
            },
            freeness: FreenessBlock {
                d: a.report.d,
                d1: a.d1(),
                tau: a.tau(),
                eta: a.report.eta,
                nu: a.report.nu,
                verdict,
                defect,
                notes,
            },
            survey,
            checks,
            points: a
                .point_invariants
                .iter()
                .map(|(p, l)| PointBlock { point: fmt_point(p), mu: l.mu, tau: l.tau })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
        let _ = writeln!(s, "curve      {}", self.input.polynomial);
        let _ = writeln!(s, "degree     {}", self.input.degree);
        let win: Vec<String> = self.hilbert.window.iter().map(|(t, v)| format!("{t}:{v}")).collect();
        let _ = writeln!(s, "window     {} ({})", win.join(" "), self.hilbert.stabilization);
        let _ = writeln!(s, "tau        {}", opt(self.freeness.tau.map(|t| t.to_string())));
        let _ = writeln!(
            s,
            "mdr        {}{} [{}]",
            if self.mdr.exact { "" } else { ">= " },
            self.mdr.d1,
            self.mdr.source
        );
        let _ = writeln!(s, "relation   ({}, {}, {})", self.mdr.witness[0], self.mdr.witness[1], self.mdr.witness[2]);
        let _ = writeln!(s, "eta, nu    {}, {}", opt(self.freeness.eta.map(|v| v.to_string())), opt(self.freeness.nu.map(|v| v.to_string())));
        let verdict = match self.freeness.defect {
            Some(nu) => format!("{} (nu = {nu})", self.freeness.verdict),
            None => self.freeness.verdict.clone(),
        };
        let _ = writeln!(s, "verdict    {verdict}");
        for n in &self.freeness.notes {
            let _ = writeln!(s, "  note: {n}");
        }
        if let Some(note) = &self.input.arrangement_note {
            let _ = writeln!(s, "  not surveyed: {note}");
        }
        if let Some(sv) = &self.survey {
            let _ = writeln!(s, "\nsingular points ({} located{})", sv.records.len(), if sv.complete { ", complete" } else { "" });
            for r in &sv.records {
                let _ = writeln!(
                    s,
                    "  {:<16} {:<28} mu {:<4} tau {:<4} on C{}",
                    r.point,
                    r.sing_type,
                    r.mu,
                    opt(r.tau.or(r.local_tau).map(|t| t.to_string())),
                    r.members.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(",C")
                );
            }
            for (pair, v) in &sv.residuals {
                let _ = writeln!(s, "  unlocated: {v} intersection(s) of pair {pair}");
            }
            let inv: Vec<String> = sv.inventory.iter().map(|(t, n)| format!("{n} x {t}")).collect();
            let _ = writeln!(
                s,
                "inventory  {}{}",
                if inv.is_empty() { "none".to_string() } else { inv.join(", ") },
                if sv.inventory_complete { "" } else { " (incomplete)" }
            );
            if sv.inferred_nodes > 0 {
                let _ = writeln!(s, "  {} node(s) inferred from the global Tjurina number", sv.inferred_nodes);
            }
            let c = &self.checks;
            if let Some(ok) = c.local_matches_global {
                let _ = writeln!(s, "local sum  {} ({})", opt(c.local_tau_sum.map(|v| v.to_string())), if ok { "matches" } else { "MISMATCH" });
            }
            if let Some(ok) = c.count_check {
                let _ = writeln!(s, "count      {}", if ok { "consistent" } else { "INCONSISTENT" });
            }
            match (&c.arnold_exponent, &c.mdr_bound, c.bound_holds) {
                (Some(a), Some(b), Some(h)) => {
                    let _ = writeln!(s, "alpha      {a}, d1 >= {b}: {}", if h { "holds" } else { "VIOLATED" });
                }
                _ => {
                    if let Some(n) = &c.bound_note {
                        let _ = writeln!(s, "alpha      skipped: {n}");
                    }
                }
            }
        }
        for p in &self.points {
            let _ = writeln!(s, "point      {} mu {} tau {}", p.point, p.mu, p.tau);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{analyze, AnalyzeOptions};
    use crate::poly::parse_factors;

    fn report(s: &str) -> AnalysisReport {
        let a = analyze(parse_factors(s).unwrap(), &AnalyzeOptions::default()).unwrap();
        AnalysisReport::from_analysis(&a, s)
    }

    #[test]
    fn json_round_trip() {
        let r = report("(x^2+y^2-z^2)*(2*x^2+y^2+2*x*z)*(2*x^2+y^2-2*x*z)");
        let back: AnalysisReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(r.freeness.verdict, "free");
        assert_eq!(r.survey.as_ref().unwrap().inventory["A7"], 2);
    }

    #[test]
    fn deterministic() {
        let s = "(-3*x^2+x*y+y*z+z*x)*(-3*y^2+x*y+y*z+z*x)*(-3*z^2+x*y+y*z+z*x)";
        assert_eq!(report(s).to_json(), report(s).to_json());
        let t = report(s).render_text();
        assert!(t.contains("verdict    free"));
        assert!(t.contains("alpha      2/3"));
    }

    #[test]
    fn non_arrangement() {
        let r = report("x*y*z");
        assert!(r.survey.is_none());
        assert_eq!(r.freeness.verdict, "free");
        assert!(r.input.arrangement_note.is_some());
    }
}
