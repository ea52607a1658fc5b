//! Rational singular points of conic arrangements.
//!
//! Every singular point of a union of smooth conics is an intersection point
//! of two of them, so the survey runs pairwise intersection, merges by point
//! and classifies each point from its branch data. Irrational intersection
//! points are not chased; their multiplicity shows up as a per-pair residual.

mod intersect;
mod jet;
mod local;

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

pub use intersect::{rational_pair_intersections, PairIntersection};
pub use jet::{branch_jet, local_intersection_multiplicity, BranchJet};
pub use local::{local_invariants, LocalInvariants, MAX_TRUNCATION};

use crate::poly::{fmt_point, normalize_point, ConicForm, HomogeneousPolynomial, Point, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LocusError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("an arrangement needs at least 2 conics, got {0}")]
    TooFewComponents(usize),
    #[error("component {index} has degree {degree}, expected a conic")]
    NotConic { index: usize, degree: u32 },
    #[error("component {0} is a singular conic")]
    SingularComponent(usize),
    #[error("components {0} and {1} are proportional")]
    DuplicateComponents(usize, usize),
    #[error("components are proportional")]
    ProportionalComponents,
    #[error("point {} does not lie on the conic", fmt_point(.0))]
    NotOnConic(Box<Point>),
    #[error("conic is singular at {}", fmt_point(.0))]
    SingularComponentPoint(Box<Point>),
    #[error("point {} lies on {count} component(s), so it is not singular", fmt_point(.point))]
    NotSingular { point: Box<Point>, count: usize },
    #[error("no admissible projection center found")]
    NoGenericProjection,
    #[error("singularity at {} is not isolated", fmt_point(.0))]
    NonIsolated(Box<Point>),
}

/// A reduced union of `k >= 2` smooth conics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConicArrangement {
    components: Vec<ConicForm>,
}

impl ConicArrangement {
    pub fn new(components: Vec<ConicForm>) -> Result<Self, LocusError> {
        if components.len() < 2 {
            return Err(LocusError::TooFewComponents(components.len()));
        }
        for (i, c) in components.iter().enumerate() {
            if !c.is_smooth() {
                return Err(LocusError::SingularComponent(i));
            }
            for (j, d) in components.iter().enumerate().take(i) {
                if c.poly().is_proportional(d.poly()) {
                    return Err(LocusError::DuplicateComponents(j, i));
                }
            }
        }
        Ok(Self { components })
    }

    /// Builds an arrangement from factor polynomials, checking each is a conic.
    pub fn from_factors(factors: &[HomogeneousPolynomial]) -> Result<Self, LocusError> {
        let comps = factors
            .iter()
            .enumerate()
            .map(|(index, f)| {
                if f.degree() != 2 {
                    return Err(LocusError::NotConic { index, degree: f.degree() });
                }
                Ok(ConicForm::new(f.clone())?)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(comps)
    }

    pub fn components(&self) -> &[ConicForm] {
        &self.components
    }

    pub fn k(&self) -> usize {
        self.components.len()
    }

    pub fn polynomial(&self) -> HomogeneousPolynomial {
        HomogeneousPolynomial::product(self.components.iter().map(|c| c.poly()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum SingularType {
    A1,
    A3,
    A5,
    A7,
    D4,
    OrdinaryMultiple(u32),
    /// Not in the recognised list; the record's branch data is the description.
    Descriptor { branches: u32, multiplicities: Vec<u32> },
}

impl fmt::Display for SingularType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingularType::A1 => write!(f, "A1"),
            SingularType::A3 => write!(f, "A3"),
            SingularType::A5 => write!(f, "A5"),
            SingularType::A7 => write!(f, "A7"),
            SingularType::D4 => write!(f, "D4"),
            SingularType::OrdinaryMultiple(r) => write!(f, "ordinary {r}-fold"),
            SingularType::Descriptor { branches, multiplicities } => {
                let ms: Vec<String> = multiplicities.iter().map(u32::to_string).collect();
                write!(f, "descriptor(r={branches}; m={})", ms.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularPointRecord {
    pub point: Point,
    /// Indices of the components through the point, increasing.
    pub members: Vec<usize>,
    /// `pair_mults[a][b]` for members `a != b`; the diagonal is zero.
    pub pair_mults: Vec<Vec<u32>>,
    pub sing_type: SingularType,
    pub mu: u32,
    /// Known from the type; `None` when the type does not determine it.
    pub tau: Option<u32>,
    /// Computed from the local algebra when `tau` is unknown.
    pub local: Option<LocalInvariants>,
}

impl SingularPointRecord {
    pub fn branch_count(&self) -> usize {
        self.members.len()
    }

    /// Best available local Tjurina number.
    pub fn tau_value(&self) -> Option<u32> {
        self.tau.or(self.local.map(|l| l.tau))
    }
}

fn assign_type(r: usize, mults: &[u32], assume_qh: bool) -> (SingularType, u32, Option<u32>) {
    let sum: u32 = mults.iter().sum();
    let mu = 2 * sum + 1 - r as u32;
    let all_transverse = mults.iter().all(|&m| m == 1);
    let ty = match (r, mults) {
        (2, [1]) => SingularType::A1,
        (2, [2]) => SingularType::A3,
        (2, [3]) => SingularType::A5,
        (2, [4]) => SingularType::A7,
        (3, _) if all_transverse => SingularType::D4,
        (r, _) if r >= 4 && all_transverse => SingularType::OrdinaryMultiple(r as u32),
        _ => {
            let mut ms = mults.to_vec();
            ms.sort_unstable();
            SingularType::Descriptor { branches: r as u32, multiplicities: ms }
        }
    };
    let tau = match &ty {
        SingularType::Descriptor { .. } => None,
        SingularType::OrdinaryMultiple(r) if *r >= 5 && !assume_qh => None,
        _ => Some(mu),
    };
    (ty, mu, tau)
}

/// Classifies a rational point lying on at least two components.
pub fn classify_point(arr: &ConicArrangement, p: &Point, assume_qh: bool) -> Result<SingularPointRecord, LocusError> {
    let p = normalize_point(p)?;
    let members: Vec<usize> = (0..arr.k()).filter(|&i| arr.components[i].contains(&p)).collect();
    if members.len() < 2 {
        return Err(LocusError::NotSingular { point: Box::new(p), count: members.len() });
    }
    let r = members.len();
    let mut pair_mults = vec![vec![0; r]; r];
    let mut flat = Vec::new();
    for a in 0..r {
        for b in a + 1..r {
            let m = local_intersection_multiplicity(&arr.components[members[a]], &arr.components[members[b]], &p)?;
            pair_mults[a][b] = m;
            pair_mults[b][a] = m;
            flat.push(m);
        }
    }
    let (sing_type, mu, tau) = assign_type(r, &flat, assume_qh);
    Ok(SingularPointRecord { point: p, members, pair_mults, sing_type, mu, tau, local: None })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocusSurvey {
    pub records: Vec<SingularPointRecord>,
    /// Unlocated intersection multiplicity for each pair `i < j`.
    pub residual_per_pair: BTreeMap<(usize, usize), u32>,
    pub complete: bool,
    /// User-supplied points that lie on fewer than two components.
    pub rejected_extra: Vec<Point>,
}

impl LocusSurvey {
    /// Sum of the best available local Tjurina numbers, if all are known.
    pub fn local_tau_sum(&self) -> Option<u32> {
        self.records.iter().map(SingularPointRecord::tau_value).sum()
    }

    pub fn count(&self, ty: &SingularType) -> usize {
        self.records.iter().filter(|r| &r.sing_type == ty).count()
    }

    /// Whether some three components pairwise share unlocated multiplicity,
    /// so that an unlocated point might carry three or more branches.
    pub fn unlocated_triangle(&self, k: usize) -> bool {
        let open = |i: usize, j: usize| self.residual_per_pair.get(&(i.min(j), i.max(j))).is_some_and(|&r| r > 0);
        (0..k).any(|a| (a + 1..k).any(|b| open(a, b) && (b + 1..k).any(|c| open(a, c) && open(b, c))))
    }

    /// Singularity counts by type. Unlocated points are filled in only when
    /// the global Tjurina number pins them down: with two branches each, an
    /// unlocated point of contact order `m` has `tau = 2m - 1 >= m`, so the
    /// unlocated `tau` equals the unlocated multiplicity exactly when every
    /// such point is a node.
    pub fn inventory(&self, k: usize, global_tau: Option<u32>) -> Inventory {
        let mut counts: BTreeMap<SingularType, usize> = BTreeMap::new();
        for r in &self.records {
            *counts.entry(r.sing_type.clone()).or_insert(0) += 1;
        }
        if self.complete {
            return Inventory { counts, complete: true, inferred_nodes: 0 };
        }
        let residual: u32 = self.residual_per_pair.values().sum();
        let located = self.local_tau_sum();
        let nodes = match (global_tau, located) {
            (Some(t), Some(l)) if !self.unlocated_triangle(k) && t >= l && t - l == residual => Some(residual),
            _ => None,
        };
        match nodes {
            Some(n) => {
                *counts.entry(SingularType::A1).or_insert(0) += n as usize;
                Inventory { counts, complete: true, inferred_nodes: n as usize }
            }
            None => Inventory { counts, complete: false, inferred_nodes: 0 },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inventory {
    pub counts: BTreeMap<SingularType, usize>,
    /// Every singular point is accounted for.
    pub complete: bool,
    /// Nodes deduced from the global Tjurina number rather than located.
    pub inferred_nodes: usize,
}

impl Inventory {
    pub fn get(&self, ty: &SingularType) -> usize {
        self.counts.get(ty).copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone, Default)]
pub struct SurveyOptions {
    pub assume_qh: bool,
    pub extra_points: Vec<Point>,
    /// Compute local Milnor/Tjurina numbers where the type leaves them open.
    pub local_algebra: bool,
}

pub fn survey(arr: &ConicArrangement, opts: &SurveyOptions) -> Result<LocusSurvey, LocusError> {
    let k = arr.k();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
    let results = pairs
        .par_iter()
        .map(|&(i, j)| rational_pair_intersections(&arr.components[i], &arr.components[j]).map(|r| ((i, j), r)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut points: Vec<Point> = Vec::new();
    let mut residual_per_pair = BTreeMap::new();
    for ((i, j), r) in results {
        residual_per_pair.insert((i, j), r.residual);
        points.extend(r.points.into_iter().map(|(p, _)| p));
    }
    let mut rejected_extra = Vec::new();
    for p in &opts.extra_points {
        let p = normalize_point(p)?;
        let on = arr.components.iter().filter(|c| c.contains(&p)).count();
        if on >= 2 {
            points.push(p);
        } else {
            rejected_extra.push(p);
        }
    }
    points.sort();
    points.dedup();
    let mut records = points
        .par_iter()
        .map(|p| classify_point(arr, p, opts.assume_qh))
        .collect::<Result<Vec<_>, _>>()?;
    if opts.local_algebra {
        records.par_iter_mut().filter(|r| r.tau.is_none()).try_for_each(|r| {
            let germ = HomogeneousPolynomial::product(r.members.iter().map(|&i| arr.components[i].poly()));
            r.local = Some(local_invariants(&germ, &r.point)?);
            Ok::<_, LocusError>(())
        })?;
    }
    let complete = residual_per_pair.values().all(|&v| v == 0);
    Ok(LocusSurvey { records, residual_per_pair, complete, rejected_extra })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_factors, rat};

    fn arr(s: &str) -> ConicArrangement {
        ConicArrangement::from_factors(&parse_factors(s).unwrap()).unwrap()
    }

    fn types(s: &LocusSurvey) -> Vec<String> {
        s.records.iter().map(|r| format!("{} {}", fmt_point(&r.point), r.sing_type)).collect()
    }

    #[test]
    fn validation() {
        let f = parse_factors("(x^2+y^2-z^2)").unwrap();
        assert_eq!(ConicArrangement::from_factors(&f), Err(LocusError::TooFewComponents(1)));
        let f = parse_factors("(x^2+y^2-z^2)*(x*y)").unwrap();
        assert_eq!(ConicArrangement::from_factors(&f), Err(LocusError::SingularComponent(1)));
        let f = parse_factors("(x^2+y^2-z^2)*(2*x^2+2*y^2-2*z^2)").unwrap();
        assert_eq!(ConicArrangement::from_factors(&f), Err(LocusError::DuplicateComponents(0, 1)));
        let f = parse_factors("(x^2+y^2-z^2)*(x^3+y^3+z^3)").unwrap();
        assert_eq!(ConicArrangement::from_factors(&f), Err(LocusError::NotConic { index: 1, degree: 3 }));
    }

    #[test]
    fn type_table() {
        assert_eq!(assign_type(2, &[2], false), (SingularType::A3, 3, Some(3)));
        assert_eq!(assign_type(3, &[1, 1, 1], false), (SingularType::D4, 4, Some(4)));
        assert_eq!(assign_type(2, &[4], false), (SingularType::A7, 7, Some(7)));
        assert_eq!(assign_type(4, &[1; 6], false), (SingularType::OrdinaryMultiple(4), 9, Some(9)));
        assert_eq!(assign_type(5, &[1; 10], false), (SingularType::OrdinaryMultiple(5), 16, None));
        assert_eq!(assign_type(5, &[1; 10], true), (SingularType::OrdinaryMultiple(5), 16, Some(16)));
        let (ty, mu, tau) = assign_type(3, &[4, 4, 4], false);
        assert_eq!(mu, 22);
        assert_eq!(tau, None);
        assert!(matches!(ty, SingularType::Descriptor { branches: 3, .. }));
    }

    #[test]
    fn classify_needs_two_branches() {
        let a = arr("(x^2+y^2-z^2)*(x^2+3*y^2-z^2)");
        let r = classify_point(&a, &[rat(0), rat(1), rat(1)], false);
        assert!(matches!(r, Err(LocusError::NotSingular { count: 1, .. })));
    }

    #[test]
    fn pencil_of_four_members() {
        let a = arr("(3*x^2+y^2-4*z^2)*(x^2+3*y^2-4*z^2)*(5*x^2+7*y^2-12*z^2)*(7*x^2+5*y^2-12*z^2)");
        let s = survey(&a, &SurveyOptions::default()).unwrap();
        assert!(s.complete);
        assert_eq!(s.records.len(), 4);
        assert!(s.records.iter().all(|r| r.sing_type == SingularType::OrdinaryMultiple(4) && r.tau == Some(9)));
    }

    #[test]
    fn disjoint_over_q() {
        let a = arr("(x^2+y^2-z^2)*(x^2+y^2-3*z^2)");
        let s = survey(&a, &SurveyOptions::default()).unwrap();
        assert!(s.records.is_empty());
        assert!(!s.complete);
        assert_eq!(s.residual_per_pair[&(0, 1)], 4);
    }

    #[test]
    fn extra_points_are_merged() {
        let a = arr("(2*x^2+y^2+2*x*z)*(x^2+y^2+2*x*z)");
        let opts = SurveyOptions {
            extra_points: vec![[rat(0), rat(0), rat(5)], [rat(1), rat(1), rat(1)]],
            ..Default::default()
        };
        let s = survey(&a, &opts).unwrap();
        assert_eq!(types(&s), vec!["(0:0:1) A7"]);
        assert_eq!(s.rejected_extra.len(), 1);
    }

    #[test]
    fn local_algebra_fills_descriptor() {
        let a = arr("(x*z+x^2+y^2)*(x*z+2*x^2+y^2)*(x*z+3*x^2+y^2)");
        let opts = SurveyOptions { local_algebra: true, ..Default::default() };
        let s = survey(&a, &opts).unwrap();
        assert_eq!(s.records.len(), 1);
        let r = &s.records[0];
        assert_eq!(r.mu, 22);
        assert_eq!(r.local, Some(LocalInvariants { mu: 22, tau: 21 }));
    }

    #[test]
    fn nodes_inferred_from_global_tau() {
        // the two outer conics of this triple meet in two irrational nodes
        let a = arr("(x^2+y^2-z^2)*(2*x^2+y^2+2*x*z)*(2*x^2+y^2-2*x*z)");
        let s = survey(&a, &SurveyOptions::default()).unwrap();
        assert!(!s.complete);
        let inv = s.inventory(3, Some(19));
        assert!(inv.complete);
        assert_eq!(inv.inferred_nodes, 2);
        assert_eq!((inv.get(&SingularType::A1), inv.get(&SingularType::A3), inv.get(&SingularType::A7)), (2, 1, 2));
        // a global value that does not match leaves the inventory open
        assert!(!s.inventory(3, Some(20)).complete);
        assert!(!s.inventory(3, None).complete);
    }
}
