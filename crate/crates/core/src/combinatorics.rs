//! Weak combinatorial types, exhaustive checks of the non-existence results
//! and combinatorial supersolvability.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::poly::{ratio, Rat};
use crate::singular::{Inventory, LocusSurvey, SingularType};

/// `(k; n2, n3, t3, t5, t7)`: conics, nodes, ordinary triple points,
/// tacnodes, `A5` and `A7` points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct WeakCombinatorialType {
    pub k: u64,
    pub n2: u64,
    pub n3: u64,
    pub t3: u64,
    pub t5: u64,
    pub t7: u64,
}

impl WeakCombinatorialType {
    /// Reads a complete inventory; `None` if it has types outside the list.
    pub fn from_inventory(k: usize, inv: &Inventory) -> Option<Self> {
        if !inv.complete {
            return None;
        }
        let mut w = Self { k: k as u64, n2: 0, n3: 0, t3: 0, t5: 0, t7: 0 };
        for (ty, &n) in &inv.counts {
            let slot = match ty {
                SingularType::A1 => &mut w.n2,
                SingularType::D4 => &mut w.n3,
                SingularType::A3 => &mut w.t3,
                SingularType::A5 => &mut w.t5,
                SingularType::A7 => &mut w.t7,
                _ => return None,
            };
            *slot += n as u64;
        }
        Some(w)
    }

    pub fn tau(&self) -> u64 {
        self.n2 + 4 * self.n3 + 3 * self.t3 + 5 * self.t5 + 7 * self.t7
    }
}

/// Every pair of conics meets in 4 points counted with multiplicity.
pub fn bezout_count_check(w: &WeakCombinatorialType) -> bool {
    2 * w.k * (w.k.saturating_sub(1)) == w.n2 + 3 * w.n3 + 2 * w.t3 + 3 * w.t5 + 4 * w.t7
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Counterexample {
    Near { k: u64, n2: u64, n3: u64, d1: u64 },
    Interval { k: u64, lo: i64, hi: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KInterval {
    pub k: u64,
    pub lo: i64,
    pub hi: i64,
}

impl KInterval {
    pub fn admissible(&self) -> bool {
        self.lo <= self.hi
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnumerationCertificate {
    pub theorem: String,
    pub k_range: (u64, u64),
    pub counterexamples: Vec<Counterexample>,
    pub candidates: u64,
    /// Per-`k` intervals for the interval-type theorems.
    pub intervals: Vec<KInterval>,
    pub admissible: Vec<u64>,
}

impl EnumerationCertificate {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Counts the `(n3, d1)` pairs of one `k` and returns those solving
/// `d1^2 - d1(2k-1) + (2k-1)^2 = n2 + w n3 + 1` with `n2 = 2k(k-1) - 3 n3`.
fn near_for_k(k: u64, d4_weight: u64) -> (u64, Vec<Counterexample>) {
    let (ki, w) = (k as i128, d4_weight as i128);
    let pairs = 2 * ki * (ki - 1);
    let n3_max = pairs / 3;
    let candidates = ((n3_max + 1) * (2 * ki - 2)) as u64;
    let mut found = Vec::new();
    for d1 in 1..=2 * ki - 2 {
        // q + (3 - w) n3 = 0 once n2 is eliminated
        let q = d1 * d1 - d1 * (2 * ki - 1) + (2 * ki - 1) * (2 * ki - 1) - 1 - pairs;
        let slope = 3 - w;
        let n3s: Vec<i128> = if slope == 0 {
            if q == 0 {
                (0..=n3_max).collect()
            } else {
                vec![]
            }
        } else if q % slope == 0 {
            vec![-q / slope]
        } else {
            vec![]
        };
        for n3 in n3s.into_iter().filter(|n| (0..=n3_max).contains(n)) {
            found.push(Counterexample::Near { k, n2: (pairs - 3 * n3) as u64, n3: n3 as u64, d1: d1 as u64 });
        }
    }
    (candidates, found)
}

/// Nodes and ordinary triple points never give a nearly free arrangement.
/// `d4_weight` is the Tjurina number used for a triple point (4 in truth;
/// other values serve as mutation controls).
pub fn enumerate_theorem_near_weighted(kmax: u64, d4_weight: u64) -> EnumerationCertificate {
    let per_k: Vec<(u64, Vec<Counterexample>)> =
        (2..=kmax.max(2)).into_par_iter().map(|k| near_for_k(k, d4_weight)).collect();
    let candidates = per_k.iter().map(|(c, _)| c).sum();
    let counterexamples = per_k.into_iter().flat_map(|(_, f)| f).collect();
    EnumerationCertificate {
        theorem: "near".into(),
        k_range: (2, kmax),
        counterexamples,
        candidates,
        intervals: vec![],
        admissible: vec![],
    }
}

pub fn enumerate_theorem_near(kmax: u64) -> EnumerationCertificate {
    enumerate_theorem_near_weighted(kmax, 4)
}

fn ceil(q: &Rat) -> i64 {
    let c = q.ceil().to_integer();
    i64::try_from(c).expect("small bound")
}

/// Intervals `[ceil(5k/4 - 2), upper(k)]` for the mdr of a `k`-conic
/// arrangement with an `A7` point as its worst singularity.
fn interval_scan(theorem: &str, kmax: u64, upper: fn(u64) -> i64, expected_max: u64) -> EnumerationCertificate {
    let alpha = ratio(5, 8);
    let intervals: Vec<KInterval> = (2..=kmax)
        .into_par_iter()
        .map(|k| {
            let lo = ceil(&crate::freeness::mdr_lower_bound(&alpha, 2 * k as u32));
            KInterval { k, lo, hi: upper(k) }
        })
        .collect();
    let admissible: Vec<u64> = intervals.iter().filter(|i| i.admissible()).map(|i| i.k).collect();
    let counterexamples = intervals
        .iter()
        .filter(|i| i.admissible() && i.k > expected_max)
        .map(|i| Counterexample::Interval { k: i.k, lo: i.lo, hi: i.hi })
        .collect();
    EnumerationCertificate {
        theorem: theorem.into(),
        k_range: (2, kmax),
        counterexamples,
        candidates: intervals.len() as u64,
        intervals,
        admissible,
    }
}

/// Free arrangements: `d1 <= (d-1)/2`, so only `k <= 4` survive.
pub fn enumerate_theorem_char(kmax: u64) -> EnumerationCertificate {
    interval_scan("char", kmax, |k| (2 * k as i64 - 1) / 2, 4)
}

/// Nearly free arrangements: `d1 <= d/2`, so only `k <= 8` survive.
pub fn enumerate_nearly_free_bound(kmax: u64) -> EnumerationCertificate {
    interval_scan("nfbound", kmax, |k| k as i64, 8)
}

/// `k` curves of degree `d` meeting only in ordinary points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DArrangementType {
    pub d: u64,
    pub k: u64,
    pub n2: u64,
    pub n3: u64,
    pub n4: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DCount {
    /// `d * C(k,2) = n2 + 3 n3 + 6 n4`.
    pub printed: bool,
    /// `d^2 * C(k,2) = n2 + 3 n3 + 6 n4`.
    pub bezout: bool,
}

pub fn d_arrangement_count(t: &DArrangementType) -> DCount {
    let pairs = t.k * t.k.saturating_sub(1) / 2;
    let rhs = t.n2 + 3 * t.n3 + 6 * t.n4;
    DCount { printed: t.d * pairs == rhs, bezout: t.d * t.d * pairs == rhs }
}

/// Which components pass through each singular point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IncidenceStructure {
    pub through: BTreeMap<u64, BTreeSet<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IncidenceError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("point {0} is listed twice")]
    Duplicate(u64),
    #[error("point {0} lies on fewer than two components")]
    TooFewComponents(u64),
}

impl IncidenceStructure {
    pub fn new(through: BTreeMap<u64, BTreeSet<usize>>) -> Result<Self, IncidenceError> {
        if let Some((id, _)) = through.iter().find(|(_, s)| s.len() < 2) {
            return Err(IncidenceError::TooFewComponents(*id));
        }
        Ok(Self { through })
    }

    /// Parses lines `point <id>: components <i,j,...>`; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, IncidenceError> {
        let mut through = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| IncidenceError::Parse { line: n + 1, msg: msg.to_string() };
            let rest = line.strip_prefix("point").ok_or_else(|| err("expected `point`"))?;
            let (id, comps) = rest.split_once(':').ok_or_else(|| err("expected `:`"))?;
            let id: u64 = id.trim().parse().map_err(|_| err("bad point id"))?;
            let comps = comps.trim().strip_prefix("components").ok_or_else(|| err("expected `components`"))?;
            let set = comps
                .split(',')
                .map(|c| c.trim().parse::<usize>().map_err(|_| err("bad component index")))
                .collect::<Result<BTreeSet<_>, _>>()?;
            if through.insert(id, set).is_some() {
                return Err(IncidenceError::Duplicate(id));
            }
        }
        Self::new(through)
    }

    /// Points numbered from 1 in survey order, components from 1.
    pub fn from_survey(s: &LocusSurvey) -> Self {
        let through = s
            .records
            .iter()
            .enumerate()
            .map(|(n, r)| (n as u64 + 1, r.members.iter().map(|m| m + 1).collect()))
            .collect();
        Self { through }
    }

    pub fn to_text(&self) -> String {
        self.through
            .iter()
            .map(|(id, s)| {
                let cs: Vec<String> = s.iter().map(usize::to_string).collect();
                format!("point {id}: components {}\n", cs.join(","))
            })
            .collect()
    }
}

/// All combinatorially modular points, increasing.
pub fn modular_points(inc: &IncidenceStructure) -> Vec<u64> {
    inc.through
        .iter()
        .filter(|(p, sp)| inc.through.iter().all(|(q, sq)| q == *p || !sp.is_disjoint(sq)))
        .map(|(p, _)| *p)
        .collect()
}

/// The smallest modular point, if any.
pub fn is_combinatorially_supersolvable(inc: &IncidenceStructure) -> Option<u64> {
    modular_points(inc).into_iter().next()
}
