//! The full pipeline for one curve: Hilbert function, mdr, verdict, and for
//! conic arrangements the singular-point survey with its cross-checks.

use crate::combinatorics::{bezout_count_check, WeakCombinatorialType};
use crate::freeness::{build_report, check_bound_consistency, BoundCheck, FreenessReport, Verdict, D1};
use crate::jacobian::{HilbertProfile, JacobianContext, JacobianError, LinalgMode, Mdr, SyzygyWitness};
use crate::poly::{HomogeneousPolynomial, Point};
use crate::singular::{
    local_invariants, survey, ConicArrangement, Inventory, LocalInvariants, LocusError, LocusSurvey, SurveyOptions,
};

#[derive(Debug, Clone, Default)]
pub struct AnalyzeOptions {
    pub mode: LinalgMode,
    pub assume_qh: bool,
    pub extra_points: Vec<Point>,
    pub window_extend: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessSource {
    /// Found by the kernel search in degrees `< d - 1`.
    Search,
    /// Searched degrees are all empty; the Koszul relation sits in `d - 1`.
    Koszul,
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub f: HomogeneousPolynomial,
    pub factors: Vec<HomogeneousPolynomial>,
    pub arrangement: Option<ConicArrangement>,
    /// Why the factors were not treated as a conic arrangement.
    pub arrangement_note: Option<String>,
    pub hilbert: HilbertProfile,
    pub mdr: Mdr,
    pub witness: SyzygyWitness,
    pub witness_source: WitnessSource,
    pub witness_verified: bool,
    pub report: FreenessReport,
    pub survey: Option<LocusSurvey>,
    pub inventory: Option<Inventory>,
    pub weak_type: Option<WeakCombinatorialType>,
    pub bound: Option<BoundCheck>,
    /// Local invariants at user-supplied points on the curve.
    pub point_invariants: Vec<(Point, LocalInvariants)>,
}

impl Analysis {
    pub fn tau(&self) -> Option<u32> {
        self.hilbert.tau().map(|t| t as u32)
    }

    pub fn d1(&self) -> u32 {
        self.witness.r
    }

    /// `(located sum, global)` when the survey accounts for every point.
    pub fn local_vs_global(&self) -> Option<(u32, u32)> {
        let s = self.survey.as_ref().filter(|s| s.complete)?;
        Some((s.local_tau_sum()?, self.tau()?))
    }

    pub fn count_ok(&self) -> Option<bool> {
        self.weak_type.as_ref().map(bezout_count_check)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Jacobian(#[from] JacobianError),
    #[error(transparent)]
    Locus(#[from] LocusError),
}

pub fn analyze(factors: Vec<HomogeneousPolynomial>, opts: &AnalyzeOptions) -> Result<Analysis, AnalysisError> {
    let f = HomogeneousPolynomial::product(&factors);
    let ctx = JacobianContext::new(f.clone())?;
    let d = ctx.degree();
    let hilbert = ctx.hilbert_profile(opts.mode, opts.window_extend);
    let mdr = ctx.mdr();
    let (witness, witness_source) = match &mdr {
        Mdr::Exact(w) => (w.clone(), WitnessSource::Search),
        Mdr::AtLeast(_) => (ctx.koszul_witness(), WitnessSource::Koszul),
    };
    let witness_verified = ctx.verify_witness(&witness);
    let d1 = if witness_verified { D1::Exact(witness.r) } else { D1::AtLeast(witness.r) };
    let mut report = match hilbert.tau() {
        Some(tau) => build_report(d, d1, tau as u32),
        None => FreenessReport {
            d,
            d1,
            tau: 0,
            eta: None,
            nu: None,
            verdict: Verdict::Indeterminate("Hilbert function not stable on the window (non-reduced input?)".into()),
            notes: vec![],
        },
    };
    if witness_source == WitnessSource::Koszul {
        report.notes.push(format!("no relation below degree {}; d1 = d-1 via the Koszul relation", d - 1));
    }
    if hilbert.stabilization == crate::jacobian::Stabilization::Smooth {
        report.notes.push("smooth curve: the Milnor algebra vanishes from degree 3d-5 on, tau = 0".into());
    }

    let (arrangement, arrangement_note) = if factors.len() >= 2 && factors.iter().all(|g| g.degree() == 2) {
        match ConicArrangement::from_factors(&factors) {
            Ok(a) => (Some(a), None),
            Err(e) => (None, Some(e.to_string())),
        }
    } else {
        (None, Some("input is not a product of at least two conics".to_string()))
    };

    let (mut survey_out, mut inventory, mut weak_type, mut bound) = (None, None, None, None);
    if let Some(arr) = &arrangement {
        let sopts = SurveyOptions {
            assume_qh: opts.assume_qh,
            extra_points: opts.extra_points.clone(),
            local_algebra: true,
        };
        let s = survey(arr, &sopts)?;
        let inv = s.inventory(arr.k(), hilbert.tau().map(|t| t as u32));
        weak_type = WeakCombinatorialType::from_inventory(arr.k(), &inv);
        bound = Some(check_bound_consistency(&report, &s, arr.k(), opts.assume_qh));
        inventory = Some(inv);
        survey_out = Some(s);
    }
    let mut point_invariants = Vec::new();
    if arrangement.is_none() {
        for p in &opts.extra_points {
            let p = crate::poly::normalize_point(p).map_err(LocusError::from)?;
            if f.eval(&p) == num_traits::Zero::zero() {
                point_invariants.push((p.clone(), local_invariants(&f, &p)?));
            }
        }
    }
    Ok(Analysis {
        f,
        factors,
        arrangement,
        arrangement_note,
        hilbert,
        mdr,
        witness,
        witness_source,
        witness_verified,
        report,
        survey: survey_out,
        inventory,
        weak_type,
        bound,
        point_invariants,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_factors, rat};

    fn run(s: &str) -> Analysis {
        analyze(parse_factors(s).unwrap(), &AnalyzeOptions::default()).unwrap()
    }

    #[test]
    fn smooth_conic_uses_koszul() {
        let a = run("x^2+y^2-z^2");
        assert_eq!(a.witness_source, WitnessSource::Koszul);
        assert_eq!(a.d1(), 1);
        assert_eq!(a.tau(), Some(0));
        assert_eq!(a.report.nu, Some(1));
        assert!(a.arrangement.is_none());
    }

    #[test]
    fn non_reduced_is_indeterminate() {
        let a = run("(x^2+y^2-z^2)^2*(x^2+y^2-2*z^2)");
        assert!(matches!(a.report.verdict, Verdict::Indeterminate(_)));
    }

    #[test]
    fn a5_triple_point_cross_checks() {
        let a = run("(-3*x^2+x*y+y*z+z*x)*(-3*y^2+x*y+y*z+z*x)*(-3*z^2+x*y+y*z+z*x)");
        assert_eq!(a.report.verdict, Verdict::Free);
        assert_eq!(a.local_vs_global(), Some((19, 19)));
        assert_eq!(a.count_ok(), Some(true));
        let b = a.bound.unwrap();
        assert_eq!(b.alpha, Some(crate::poly::ratio(2, 3)));
        assert_eq!(b.holds, Some(true));
    }

    #[test]
    fn extra_points_off_arrangements() {
        let opts = AnalyzeOptions {
            extra_points: vec![[rat(1), rat(0), rat(0)], [rat(1), rat(1), rat(1)]],
            ..Default::default()
        };
        let a = analyze(parse_factors("x^2*y^2+z^4").unwrap(), &opts).unwrap();
        assert_eq!(a.point_invariants.len(), 1);
        assert_eq!(a.point_invariants[0].1, LocalInvariants { mu: 3, tau: 3 });
    }
}
