//! Named example curves with expected invariants.
//!
//! Each expectation records where its value comes from: `Published` for
//! values stated in the literature, `Computed` for values worked out from
//! stated ones or from the explicit construction.

use std::fmt;

use serde::Serialize;

use crate::analysis::{analyze, Analysis, AnalyzeOptions};
use crate::combinatorics::IncidenceStructure;
use crate::freeness::Verdict;
use crate::jacobian::{witness_from_text, JacobianContext, LinalgMode, SyzygyWitness};
use crate::poly::{fmt_point, parse_factors, parse_polynomial, rat, HomogeneousPolynomial, Point};
use crate::singular::{local_invariants, SingularType};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Published,
    Computed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VerdictKind {
    Free,
    NearlyFree,
    Neither,
}

impl VerdictKind {
    fn matches(self, v: &Verdict) -> bool {
        matches!(
            (self, v),
            (VerdictKind::Free, Verdict::Free)
                | (VerdictKind::NearlyFree, Verdict::NearlyFree)
                | (VerdictKind::Neither, Verdict::Neither(_))
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Check {
    Degree(u32),
    D1(u32),
    Tau(u32),
    Nu(i64),
    Verdict(VerdictKind),
    /// The given triple is a relation of degree `d1`.
    Witness(SyzygyWitness),
    /// Number of singular points of a type, nodes inferred where needed.
    Count(SingularType, usize),
    TypeAt(Point, SingularType),
    RecordCount(usize),
    /// Milnor number of the survey record at a point.
    MuAt(Point, u32),
    /// Tjurina number of the germ of the whole curve at a point.
    LocalTauAt(Point, u32),
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Check::Degree(d) => write!(f, "d = {d}"),
            Check::D1(d) => write!(f, "d1 = {d}"),
            Check::Tau(t) => write!(f, "tau = {t}"),
            Check::Nu(n) => write!(f, "nu = {n}"),
            Check::Verdict(v) => write!(f, "verdict {v:?}"),
            Check::Witness(w) => write!(f, "witness ({}, {}, {})", w.a, w.b, w.c),
            Check::Count(t, n) => write!(f, "{n} x {t}"),
            Check::TypeAt(p, t) => write!(f, "{t} at {}", fmt_point(p)),
            Check::RecordCount(n) => write!(f, "{n} located point(s)"),
            Check::MuAt(p, m) => write!(f, "mu = {m} at {}", fmt_point(p)),
            Check::LocalTauAt(p, t) => write!(f, "local tau = {t} at {}", fmt_point(p)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expectation {
    pub check: Check,
    pub origin: Origin,
}

fn published(check: Check) -> Expectation {
    Expectation { check, origin: Origin::Published }
}

fn computed(check: Check) -> Expectation {
    Expectation { check, origin: Origin::Computed }
}

/// A concrete curve from the corpus.
#[derive(Debug, Clone)]
pub struct Instance {
    /// `name` or `name:param`.
    pub id: String,
    pub factors: Vec<String>,
    pub expected: Vec<Expectation>,
    /// Points handed to the survey or local analysis.
    pub extra_points: Vec<Point>,
    /// Incidence to use when the survey cannot provide one.
    pub incidence: Option<IncidenceStructure>,
    /// The entry relies on quasi-homogeneity of its ordinary points.
    pub assume_qh: bool,
    pub notes: Vec<&'static str>,
}

impl Instance {
    pub fn factor_polys(&self) -> Vec<HomogeneousPolynomial> {
        self.factors
            .iter()
            .flat_map(|s| parse_factors(s).expect("corpus text parses"))
            .collect()
    }

    pub fn polynomial(&self) -> HomogeneousPolynomial {
        HomogeneousPolynomial::product(&self.factor_polys())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ParamRange {
    pub name: &'static str,
    pub lo: i64,
    pub hi: i64,
}

pub struct CorpusEntry {
    pub name: &'static str,
    pub summary: &'static str,
    pub params: Option<ParamRange>,
    build: fn(i64) -> Instance,
}

impl CorpusEntry {
    pub fn instance(&self, param: Option<i64>) -> Result<Instance, CorpusError> {
        match (self.params, param) {
            (None, None) => Ok((self.build)(0)),
            (None, Some(_)) => Err(CorpusError::UnexpectedParam(self.name.to_string())),
            (Some(r), p) => {
                let v = p.unwrap_or(r.lo);
                if v < r.lo || v > r.hi {
                    return Err(CorpusError::ParamOutOfRange { name: self.name.to_string(), value: v, lo: r.lo, hi: r.hi });
                }
                Ok((self.build)(v))
            }
        }
    }

    /// Every instance over the parameter range.
    pub fn instances(&self) -> Vec<Instance> {
        match self.params {
            None => vec![(self.build)(0)],
            Some(r) => (r.lo..=r.hi).map(self.build).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CorpusError {
    #[error("no corpus entry named `{0}`")]
    NotFound(String),
    #[error("`{name}` takes a parameter in {lo}..={hi}, got {value}")]
    ParamOutOfRange { name: String, value: i64, lo: i64, hi: i64 },
    #[error("`{0}` takes no parameter")]
    UnexpectedParam(String),
    #[error("bad parameter `{0}`")]
    BadParam(String),
}

fn pt(x: i64, y: i64, z: i64) -> Point {
    [rat(x), rat(y), rat(z)]
}

fn fixed(id: &str, factors: &[&str], expected: Vec<Expectation>) -> Instance {
    Instance {
        id: id.to_string(),
        factors: factors.iter().map(|s| s.to_string()).collect(),
        expected,
        extra_points: vec![],
        incidence: None,
        assume_qh: false,
        notes: vec![],
    }
}

fn persson_triconical(_: i64) -> Instance {
    fixed(
        "persson_triconical",
        &["x^2+y^2-z^2", "2*x^2+y^2+2*x*z", "2*x^2+y^2-2*x*z"],
        vec![
            published(Check::Degree(6)),
            published(Check::Count(SingularType::A1, 2)),
            published(Check::Count(SingularType::A3, 1)),
            published(Check::Count(SingularType::A7, 2)),
            computed(Check::Tau(19)),
            computed(Check::D1(2)),
            published(Check::Verdict(VerdictKind::Free)),
        ],
    )
}

fn persson_deformed(_: i64) -> Instance {
    fixed(
        "persson_deformed",
        &["2*x^2+2*y^2+3*x*z+z^2", "2*x^2+2*y^2-3*x*z+z^2", "x^2+4*y^2-z^2"],
        vec![
            published(Check::Degree(6)),
            published(Check::Count(SingularType::A1, 4)),
            published(Check::Count(SingularType::A7, 2)),
            computed(Check::Tau(18)),
            published(Check::D1(3)),
            published(Check::Verdict(VerdictKind::NearlyFree)),
        ],
    )
}

fn celal_three_conics(_: i64) -> Instance {
    fixed(
        "celal_three_conics",
        &["-3*x^2+x*y+y*z+z*x", "-3*y^2+x*y+y*z+z*x", "-3*z^2+x*y+y*z+z*x"],
        vec![
            published(Check::Degree(6)),
            published(Check::Count(SingularType::A5, 3)),
            published(Check::Count(SingularType::D4, 1)),
            published(Check::Tau(19)),
            published(Check::D1(2)),
            computed(Check::Nu(0)),
            published(Check::Verdict(VerdictKind::Free)),
        ],
    )
}

fn p4_four_conics(_: i64) -> Instance {
    let mut expected = vec![
        published(Check::Degree(8)),
        published(Check::Count(SingularType::A7, 4)),
        published(Check::Count(SingularType::A1, 8)),
        published(Check::Tau(36)),
        published(Check::D1(3)),
        computed(Check::Nu(1)),
        published(Check::Verdict(VerdictKind::NearlyFree)),
    ];
    for p in [pt(-1, 0, 1), pt(0, 0, 1), pt(-2, 0, 1), pt(1, 0, 1)] {
        expected.push(published(Check::TypeAt(p, SingularType::A7)));
    }
    let mut inst = fixed(
        "p4_four_conics",
        &["x^2+y^2-z^2", "2*x^2+y^2+2*x*z", "x^2+y^2+2*x*z", "4*x^2+6*y^2+4*x*z-8*z^2"],
        expected,
    );
    inst.notes.push(
        "the fourth conic uses -8z^2; with -9z^2 it passes through none of the four A7 points and tau = 30",
    );
    inst
}

fn ploski(m: i64) -> Instance {
    let factors: Vec<String> = (1..=m).map(|i| format!("x*z+{i}*x^2+y^2")).collect();
    let refs: Vec<&str> = factors.iter().map(String::as_str).collect();
    let big = (2 * m - 1) * (2 * m - 1);
    let origin = pt(0, 0, 1);
    let mut expected = vec![
        published(Check::Degree(2 * m as u32)),
        published(Check::D1(1)),
        published(Check::Tau((big - (2 * m - 2)) as u32)),
        published(Check::Verdict(VerdictKind::Free)),
        published(Check::RecordCount(1)),
        published(Check::MuAt(origin.clone(), (big - m) as u32)),
        published(Check::LocalTauAt(origin.clone(), (big - (2 * m - 2)) as u32)),
    ];
    let ty = if m == 2 {
        SingularType::A7
    } else {
        let pairs = (m * (m - 1) / 2) as usize;
        SingularType::Descriptor { branches: m as u32, multiplicities: vec![4; pairs] }
    };
    expected.push(computed(Check::TypeAt(origin, ty)));
    let mut inst = fixed(&format!("ploski:{m}"), &refs, expected);
    inst.notes.push("every pair of members meets only at (0:0:1), with contact of order 4");
    inst
}

/// Members `f`, `g` and `f + l g` for `l = 2, ..., m-1`.
fn pencil_four_points(m: i64) -> Instance {
    let mut factors = vec!["3*x^2+y^2-4*z^2".to_string(), "x^2+3*y^2-4*z^2".to_string()];
    for l in 2..m {
        factors.push(format!("{}*x^2+{}*y^2-{}*z^2", 3 + l, 1 + 3 * l, 4 + 4 * l));
    }
    let refs: Vec<&str> = factors.iter().map(String::as_str).collect();
    let witness = witness_from_text(2, "y*z", "x*z", "x*y").expect("fixed text");
    let ty = if m == 3 { SingularType::D4 } else { SingularType::OrdinaryMultiple(m as u32) };
    let mut expected = vec![
        published(Check::Degree(2 * m as u32)),
        published(Check::D1(2)),
        published(Check::Witness(witness)),
        published(Check::Tau((4 * (m - 1) * (m - 1)) as u32)),
        published(Check::Nu(3)),
        published(Check::Verdict(VerdictKind::Neither)),
        computed(Check::RecordCount(4)),
        computed(Check::Count(ty.clone(), 4)),
    ];
    for p in [pt(1, 1, 1), pt(-1, 1, 1), pt(1, -1, 1), pt(-1, -1, 1)] {
        expected.push(computed(Check::TypeAt(p, ty.clone())));
    }
    let mut inst = fixed(&format!("pencil_four_points:{m}"), &refs, expected);
    inst.assume_qh = true;
    inst.notes.push("members f, g and f + l*g for l = 2..m-1");
    inst
}

fn pencil_two_points(k: i64) -> Instance {
    let text = format!("x^{k}*y^{k}+z^{}", 2 * k);
    let local = ((2 * k - 1) * (k - 1)) as u32;
    let (p1, p2) = (pt(1, 0, 0), pt(0, 1, 0));
    let witness = witness_from_text(1, "x", "-y", "0").expect("fixed text");
    let expected = vec![
        published(Check::Degree(2 * k as u32)),
        published(Check::D1(1)),
        published(Check::Witness(witness)),
        computed(Check::Tau(2 * local)),
        published(Check::Nu(1)),
        published(Check::Verdict(VerdictKind::NearlyFree)),
        published(Check::LocalTauAt(p1.clone(), local)),
        published(Check::LocalTauAt(p2.clone(), local)),
    ];
    let comps: std::collections::BTreeSet<usize> = (1..=k as usize).collect();
    let incidence = IncidenceStructure::new([(1, comps.clone()), (2, comps)].into_iter().collect()).ok();
    let mut inst = fixed(&format!("pencil_two_points:{k}"), &[&text], expected);
    inst.extra_points = vec![p1, p2];
    inst.incidence = incidence;
    inst.notes.push("the conic components are not defined over Q; incidence is supplied by the entry");
    inst
}

fn two_conics_a7(eps: i64) -> Instance {
    let second = format!("x^2-y*z+{eps}*y^2");
    let expected = vec![
        computed(Check::Degree(4)),
        published(Check::Tau(7)),
        published(Check::D1(1)),
        published(Check::Verdict(VerdictKind::Free)),
        computed(Check::RecordCount(1)),
        computed(Check::TypeAt(pt(0, 0, 1), SingularType::A7)),
    ];
    let mut inst = fixed(&format!("two_conics_a7:{eps}"), &["x^2-y*z", &second], expected);
    inst.notes.push("explicit member of a family of conic pairs meeting in a single point");
    inst
}

pub fn corpus_entries() -> Vec<CorpusEntry> {
    vec![
        CorpusEntry {
            name: "persson_triconical",
            summary: "three conics with two A7 points, a tacnode and two nodes",
            params: None,
            build: persson_triconical,
        },
        CorpusEntry {
            name: "persson_deformed",
            summary: "the tacnode of persson_triconical split into two nodes",
            params: None,
            build: persson_deformed,
        },
        CorpusEntry {
            name: "celal_three_conics",
            summary: "three conics with three A5 points and an ordinary triple point",
            params: None,
            build: celal_three_conics,
        },
        CorpusEntry {
            name: "p4_four_conics",
            summary: "four conics with four collinear A7 points and eight nodes",
            params: None,
            build: p4_four_conics,
        },
        CorpusEntry {
            name: "ploski",
            summary: "m conics xz + i x^2 + y^2 through one point",
            params: Some(ParamRange { name: "m", lo: 2, hi: 5 }),
            build: ploski,
        },
        CorpusEntry {
            name: "pencil_four_points",
            summary: "m members of the pencil through (±1:±1:1)",
            params: Some(ParamRange { name: "m", lo: 3, hi: 6 }),
            build: pencil_four_points,
        },
        CorpusEntry {
            name: "pencil_two_points",
            summary: "x^k y^k + z^2k, k conics through (1:0:0) and (0:1:0)",
            params: Some(ParamRange { name: "k", lo: 2, hi: 6 }),
            build: pencil_two_points,
        },
        CorpusEntry {
            name: "two_conics_a7",
            summary: "x^2 - yz and x^2 - yz + eps y^2, one A7 point",
            params: Some(ParamRange { name: "eps", lo: 1, hi: 3 }),
            build: two_conics_a7,
        },
    ]
}

/// Resolves `name` or `name:param`.
pub fn lookup(key: &str) -> Result<Instance, CorpusError> {
    let (name, param) = match key.split_once(':') {
        Some((n, p)) => (n, Some(p.trim().parse::<i64>().map_err(|_| CorpusError::BadParam(p.to_string()))?)),
        None => (key, None),
    };
    corpus_entries()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| CorpusError::NotFound(name.to_string()))?
        .instance(param)
}

fn count_of(a: &Analysis, ty: &SingularType) -> Option<usize> {
    a.inventory.as_ref().filter(|i| i.complete).map(|i| i.get(ty))
}

/// `Ok` or a description of the mismatch.
pub fn evaluate(check: &Check, a: &Analysis) -> Result<(), String> {
    let want_got = |w: String, g: String| if w == g { Ok(()) } else { Err(format!("expected {w}, got {g}")) };
    match check {
        Check::Degree(d) => want_got(d.to_string(), a.report.d.to_string()),
        Check::D1(d) => want_got(d.to_string(), a.d1().to_string()),
        Check::Tau(t) => want_got(t.to_string(), format!("{:?}", a.tau()).replace("Some(", "").replace(')', "")),
        Check::Nu(n) => want_got(n.to_string(), a.report.nu.map_or("unknown".into(), |v| v.to_string())),
        Check::Verdict(v) => {
            if v.matches(&a.report.verdict) {
                Ok(())
            } else {
                Err(format!("expected {v:?}, got {}", a.report.verdict))
            }
        }
        Check::Witness(w) => {
            let ctx = JacobianContext::new(a.f.clone()).map_err(|e| e.to_string())?;
            if !ctx.verify_witness(w) {
                Err("stated relation does not vanish".into())
            } else if w.r != a.d1() {
                Err(format!("stated relation has degree {}, mdr is {}", w.r, a.d1()))
            } else {
                Ok(())
            }
        }
        Check::Count(ty, n) => match count_of(a, ty) {
            Some(c) => want_got(n.to_string(), c.to_string()),
            None => Err(format!("inventory incomplete, cannot count {ty}")),
        },
        Check::TypeAt(p, ty) => {
            let s = a.survey.as_ref().ok_or("no survey")?;
            match s.records.iter().find(|r| &r.point == p) {
                Some(r) => want_got(ty.to_string(), r.sing_type.to_string()),
                None => Err(format!("no singular point located at {}", fmt_point(p))),
            }
        }
        Check::RecordCount(n) => {
            let s = a.survey.as_ref().ok_or("no survey")?;
            want_got(n.to_string(), s.records.len().to_string())
        }
        Check::MuAt(p, m) => {
            let s = a.survey.as_ref().ok_or("no survey")?;
            match s.records.iter().find(|r| &r.point == p) {
                Some(r) => want_got(m.to_string(), r.mu.to_string()),
                None => Err(format!("no singular point located at {}", fmt_point(p))),
            }
        }
        Check::LocalTauAt(p, t) => {
            let l = local_invariants(&a.f, p).map_err(|e| e.to_string())?;
            want_got(t.to_string(), l.tau.to_string())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldResult {
    pub check: String,
    pub origin: Origin,
    pub passed: bool,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegressionRow {
    pub id: String,
    pub passed: bool,
    pub fields: Vec<FieldResult>,
    pub error: Option<String>,
}

pub fn analyze_instance(inst: &Instance, mode: LinalgMode) -> Result<Analysis, String> {
    let opts = AnalyzeOptions {
        mode,
        assume_qh: inst.assume_qh,
        extra_points: inst.extra_points.clone(),
        window_extend: 0,
    };
    analyze(inst.factor_polys(), &opts).map_err(|e| e.to_string())
}

pub fn check_instance(inst: &Instance, a: &Analysis) -> RegressionRow {
    let fields: Vec<FieldResult> = inst
        .expected
        .iter()
        .map(|e| {
            let r = evaluate(&e.check, a);
            FieldResult { check: e.check.to_string(), origin: e.origin, passed: r.is_ok(), detail: r.err() }
        })
        .collect();
    RegressionRow { id: inst.id.clone(), passed: fields.iter().all(|f| f.passed), fields, error: None }
}

/// Runs every instance; failures are collected, never fatal.
pub fn run_instances(instances: &[Instance], mode: LinalgMode) -> Vec<RegressionRow> {
    use rayon::prelude::*;
    instances
        .par_iter()
        .map(|inst| match analyze_instance(inst, mode) {
            Ok(a) => check_instance(inst, &a),
            Err(e) => RegressionRow { id: inst.id.clone(), passed: false, fields: vec![], error: Some(e) },
        })
        .collect()
}

/// Regression over the named entries (all when `names` is `None`).
pub fn run_regression(names: Option<&[String]>, mode: LinalgMode) -> Result<Vec<RegressionRow>, CorpusError> {
    let instances: Vec<Instance> = match names {
        None => corpus_entries().iter().flat_map(CorpusEntry::instances).collect(),
        Some(ns) => {
            let mut out = Vec::new();
            for n in ns {
                if n.contains(':') {
                    out.push(lookup(n)?);
                } else {
                    let e = corpus_entries()
                        .into_iter()
                        .find(|e| e.name == n.as_str())
                        .ok_or_else(|| CorpusError::NotFound(n.clone()))?;
                    out.extend(e.instances());
                }
            }
            out
        }
    };
    Ok(run_instances(&instances, mode))
}

/// Parses each corpus polynomial once more from its own printed form.
pub fn round_trip_ok(inst: &Instance) -> bool {
    let f = inst.polynomial();
    parse_polynomial(&f.to_string()).map(|g| g == f).unwrap_or(false)
}
