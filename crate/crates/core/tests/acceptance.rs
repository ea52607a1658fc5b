//! One line per acceptance criterion. Values are compared exactly; each
//! criterion also has a wall-clock budget.

use std::collections::{BTreeMap, BTreeSet};
use std::process::Command;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use serde_json::Value;

use conicfree::analysis::Analysis;
use conicfree::combinatorics::{is_combinatorially_supersolvable, modular_points, IncidenceStructure};
use conicfree::corpus::{analyze_instance, corpus_entries, lookup};
use conicfree::freeness::{eta, lct, lct_entry, LctType, Verdict};
use conicfree::jacobian::{JacobianContext, LinalgMode, SyzygyWitness};
use conicfree::poly::{parse_polynomial, HomogeneousPolynomial, Var};
use conicfree::singular::{local_invariants, SingularType};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn cli(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_conicfree")).arg("--json").args(args).output().expect("binary runs");
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap_or(-1), v)
}

fn analysis(id: &str) -> Analysis {
    analyze_instance(&lookup(id).unwrap(), LinalgMode::Exact).unwrap()
}

fn expect_core(v: &Value, d: u64, d1: u64, tau: u64, nu: i64, verdict: &str) -> Result<(), String> {
    let f = &v["freeness"];
    let got = (f["d"].as_u64(), f["d1"].as_u64(), f["tau"].as_u64(), f["nu"].as_i64(), f["verdict"].as_str());
    let want = (Some(d), Some(d1), Some(tau), Some(nu), Some(verdict));
    ensure(got == want, format!("got {got:?}, want {want:?}"))
}

/// `a f_x + b f_y + c f_z`, computed here rather than by the library.
fn relation_value(f: &HomogeneousPolynomial, w: &SyzygyWitness) -> HomogeneousPolynomial {
    let fx = f.derivative(Var::X);
    let fy = f.derivative(Var::Y);
    let fz = f.derivative(Var::Z);
    &(&(&w.a * &fx) + &(&w.b * &fy)) + &(&w.c * &fz)
}

fn criterion_1() -> Check {
    let (code, v) = cli(&["analyze", "corpus:celal_three_conics"]);
    ensure(code == 0, format!("exit {code}"))?;
    expect_core(&v, 6, 2, 19, 0, "free")?;
    Ok("d=6 d1=2 tau=19 nu=0 free".into())
}

fn criterion_2() -> Check {
    let (code, v) = cli(&["analyze", "corpus:p4_four_conics"]);
    ensure(code == 0, format!("exit {code}"))?;
    expect_core(&v, 8, 3, 36, 1, "nearly_free")?;
    let (code, c) = cli(&["classify", "corpus:p4_four_conics"]);
    ensure(code == 0, format!("classify exit {code}"))?;
    let a7: BTreeSet<&str> = c["records"]
        .as_array()
        .ok_or("no records")?
        .iter()
        .filter(|r| r["type"] == "A7")
        .filter_map(|r| r["point"].as_str())
        .collect();
    let want: BTreeSet<&str> = ["(-1:0:1)", "(0:0:1)", "(-2:0:1)", "(1:0:1)"].into();
    ensure(a7 == want, format!("A7 at {a7:?}"))?;
    Ok("d=8 d1=3 tau=36 nu=1 nearly free; A7 at the four stated points".into())
}

fn criterion_3() -> Check {
    let (code, v) = cli(&["analyze", "corpus:persson_triconical"]);
    ensure(code == 0, format!("exit {code}"))?;
    expect_core(&v, 6, 2, 19, 0, "free")?;
    let (code, dv) = cli(&["deform-check", "corpus:persson_triconical", "corpus:persson_deformed"]);
    ensure(code == 0 && dv["passed"] == true, format!("deform-check exit {code}: {dv}"))?;
    let names: Vec<&str> = dv["clauses"].as_array().unwrap().iter().filter_map(|c| c["name"].as_str()).collect();
    ensure(names.len() == 6, format!("clauses {names:?}"))?;
    let (_, after) = cli(&["analyze", "corpus:persson_deformed"]);
    ensure(
        after["freeness"]["verdict"] == "nearly_free" && after["freeness"]["d1"] == 3,
        format!("after: {}", after["freeness"]),
    )?;
    Ok("free, tau=19, d1=2; all six deformation clauses hold; after: nearly free, d1=3".into())
}

fn criterion_4() -> Check {
    let mut failures = Vec::new();
    for m in 2..=5u32 {
        let a = analysis(&format!("ploski:{m}"));
        let big = (2 * m - 1) * (2 * m - 1);
        let tau = big - (2 * m - 2);
        let mu = 2 * 4 * (m * (m - 1) / 2) - m + 1;
        assert_eq!(mu, big - m);
        let mut bad = Vec::new();
        if a.d1() != 1 {
            bad.push(format!("d1={}", a.d1()));
        }
        if a.tau() != Some(tau) {
            bad.push(format!("tau={:?}, want {tau}", a.tau()));
        }
        if a.report.verdict != Verdict::Free {
            bad.push(format!("verdict {}", a.report.verdict));
        }
        let recs = &a.survey.as_ref().unwrap().records;
        if recs.len() != 1 {
            bad.push(format!("{} records", recs.len()));
        } else {
            let r = &recs[0];
            if !matches!(r.sing_type, SingularType::Descriptor { .. }) {
                bad.push(format!("record type {} is not a descriptor", r.sing_type));
            }
            if r.mu != mu {
                bad.push(format!("mu={}, want {mu}", r.mu));
            }
        }
        if !bad.is_empty() {
            failures.push(format!("m={m}: {}", bad.join(", ")));
        }
    }
    if failures.is_empty() {
        Ok("m=2..5: d1=1, tau and mu as stated, descriptor records".into())
    } else {
        Err(failures.join("; "))
    }
}

fn criterion_5() -> Check {
    for m in 3..=6u32 {
        let a = analysis(&format!("pencil_four_points:{m}"));
        let w = SyzygyWitness::new(
            2,
            parse_polynomial("y*z").unwrap(),
            parse_polynomial("x*z").unwrap(),
            parse_polynomial("x*y").unwrap(),
        );
        ensure(relation_value(&a.f, &w).is_zero(), format!("m={m}: (yz,xz,xy) is not a relation"))?;
        ensure(a.d1() == 2, format!("m={m}: d1={}", a.d1()))?;
        ensure(a.tau() == Some(4 * (m - 1) * (m - 1)), format!("m={m}: tau={:?}", a.tau()))?;
        ensure(a.report.nu == Some(3), format!("m={m}: nu={:?}", a.report.nu))?;
        ensure(a.report.verdict == Verdict::Neither(3), format!("m={m}: {}", a.report.verdict))?;
    }
    for k in 2..=6u32 {
        let inst = lookup(&format!("pencil_two_points:{k}")).unwrap();
        let a = analyze_instance(&inst, LinalgMode::Exact).unwrap();
        ensure(a.d1() == 1 && a.report.nu == Some(1), format!("k={k}: d1={} nu={:?}", a.d1(), a.report.nu))?;
        ensure(a.report.verdict == Verdict::NearlyFree, format!("k={k}: {}", a.report.verdict))?;
        for p in &inst.extra_points {
            let l = local_invariants(&a.f, p).map_err(|e| e.to_string())?;
            ensure(l.tau == (2 * k - 1) * (k - 1), format!("k={k}: local tau {}", l.tau))?;
        }
    }
    Ok("pencil m=3..6: witness, tau=4(m-1)^2, nu=3; two-point pencils k=2..6 nearly free".into())
}

fn criterion_6() -> Check {
    for eps in 1..=3 {
        let a = analysis(&format!("two_conics_a7:{eps}"));
        ensure(a.tau() == Some(7) && a.d1() == 1, format!("eps={eps}: tau={:?} d1={}", a.tau(), a.d1()))?;
        ensure(a.report.verdict == Verdict::Free, format!("eps={eps}: {}", a.report.verdict))?;
        let recs = &a.survey.as_ref().unwrap().records;
        ensure(
            recs.len() == 1 && recs[0].sing_type == SingularType::A7,
            format!("eps={eps}: records {:?}", recs.iter().map(|r| r.sing_type.to_string()).collect::<Vec<_>>()),
        )?;
    }
    Ok("eps=1..3: tau=7, d1=1, free, single A7".into())
}

/// Each enumeration has its own 5 s budget.
fn timed_cli(args: &[&str]) -> Result<(i32, Value), String> {
    let t = Instant::now();
    let r = cli(args);
    ensure(t.elapsed() < Duration::from_secs(5), format!("{args:?} took {:.2}s", t.elapsed().as_secs_f64()))?;
    Ok(r)
}

fn criterion_7() -> Check {
    let (code, near) = timed_cli(&["theorems", "near", "--kmax", "30"])?;
    ensure(code == 0 && near["counterexamples"].as_array().is_some_and(Vec::is_empty), format!("near: {code}"))?;
    let (code, ch) = timed_cli(&["theorems", "char", "--kmax", "20"])?;
    ensure(code == 0 && ch["admissible"] == serde_json::json!([2, 3, 4]), format!("char: {}", ch["admissible"]))?;
    let iv = ch["intervals"].as_array().unwrap();
    for (k, lo, hi) in [(5, 5, 4), (6, 6, 5)] {
        let i = iv.iter().find(|i| i["k"] == k).ok_or("missing interval")?;
        ensure(i["lo"] == lo && i["hi"] == hi, format!("k={k}: {i}"))?;
    }
    let (code, nf) = timed_cli(&["theorems", "nfbound", "--kmax", "20"])?;
    let want: Vec<u64> = (2..=8).collect();
    ensure(code == 0 && nf["admissible"] == serde_json::json!(want), format!("nfbound: {}", nf["admissible"]))?;
    Ok(format!("near: 0 of {} candidates; char {{2,3,4}}; nfbound {{2..8}}", near["candidates"]))
}

fn relabel(inc: &IncidenceStructure, perm: &[usize], ids: &[u64]) -> IncidenceStructure {
    let through: BTreeMap<u64, BTreeSet<usize>> = inc
        .through
        .values()
        .zip(ids)
        .map(|(s, id)| (*id, s.iter().map(|c| perm[c - 1] + 1).collect()))
        .collect();
    IncidenceStructure::new(through).unwrap()
}

fn criterion_8() -> Check {
    let mut incidences = Vec::new();
    let mut complete = 0;
    for e in corpus_entries() {
        for inst in e.instances() {
            let a = analyze_instance(&inst, LinalgMode::Exact).map_err(|e| format!("{}: {e}", inst.id))?;
            // (a)
            if let Some(s) = a.survey.as_ref().filter(|s| s.complete) {
                complete += 1;
                let local: u32 = s
                    .records
                    .iter()
                    .map(|r| r.tau.or(r.local.map(|l| l.tau)))
                    .sum::<Option<u32>>()
                    .ok_or(format!("{}: unknown local tau", inst.id))?;
                ensure(Some(local) == a.tau(), format!("{}: local {local} vs global {:?}", inst.id, a.tau()))?;
                incidences.push(IncidenceStructure::from_survey(s));
            }
            // (b)
            ensure(relation_value(&a.f, &a.witness).is_zero(), format!("{}: witness", inst.id))?;
            // (c)
            let ctx = JacobianContext::new(a.f.clone()).unwrap();
            let d = a.f.degree();
            let vals: Vec<usize> = (3 * d - 6..=3 * d - 4).map(|t| ctx.milnor_dim(t, LinalgMode::Exact)).collect();
            ensure(vals.windows(2).all(|w| w[0] == w[1]), format!("{}: window {vals:?}", inst.id))?;
            if let Some(i) = inst.incidence.clone() {
                incidences.push(i);
            }
        }
    }
    // (d)
    let mut runner = TestRunner::new(Config { cases: 1000, failure_persistence: None, ..Config::default() });
    runner
        .run(&(1u32..2000).prop_flat_map(|d| (Just(d), 0..d)), |(d, d1)| {
            prop_assert_eq!(eta(d, d1), eta(d, d - 1 - d1));
            Ok(())
        })
        .map_err(|e| format!("eta symmetry: {e}"))?;
    // (e)
    let chain = "point 1: components 1,2\npoint 2: components 2,3\npoint 3: components 3,4\npoint 4: components 4,5\n";
    incidences.push(IncidenceStructure::parse(chain).unwrap());
    let mut runner = TestRunner::new(Config { cases: 100, failure_persistence: None, ..Config::default() });
    for inc in &incidences {
        let k = inc.through.values().flat_map(|s| s.iter().copied()).max().unwrap();
        let n = inc.through.len();
        let base = is_combinatorially_supersolvable(inc).is_some();
        let base_count = modular_points(inc).len();
        let strat = (
            Just((0..k).collect::<Vec<_>>()).prop_shuffle(),
            Just((1..=n as u64).map(|i| i * 7 + 3).collect::<Vec<_>>()).prop_shuffle(),
        );
        runner
            .run(&strat, |(perm, ids)| {
                let r = relabel(inc, &perm, &ids);
                prop_assert_eq!(is_combinatorially_supersolvable(&r).is_some(), base);
                prop_assert_eq!(modular_points(&r).len(), base_count);
                Ok(())
            })
            .map_err(|e| format!("relabeling: {e}"))?;
    }
    Ok(format!(
        "{complete} complete surveys match; witnesses and windows hold; 1000 eta cases; 100 relabelings x {} incidences",
        incidences.len()
    ))
}

type Q = BigRational;

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

/// Weights with `e1 . w = 1` and `e2 . w = 1`, by Gaussian elimination.
fn solve_weights(e1: [i64; 2], e2: [i64; 2]) -> Option<(Q, Q)> {
    let mut m = [
        [q(e1[0], 1), q(e1[1], 1), Q::one()],
        [q(e2[0], 1), q(e2[1], 1), Q::one()],
    ];
    if m[0][0].is_zero() {
        m.swap(0, 1);
    }
    if m[0][0].is_zero() {
        return None;
    }
    let f = &m[1][0] / &m[0][0];
    let (top, bottom) = m.split_at_mut(1);
    for (b, t) in bottom[0].iter_mut().zip(&top[0]) {
        *b -= &f * t;
    }
    if m[1][1].is_zero() {
        return None;
    }
    let w2 = &m[1][2] / &m[1][1];
    let w1 = (&m[0][2] - &m[0][1] * &w2) / &m[0][0];
    Some((w1, w2))
}

fn criterion_9() -> Check {
    let a7 = lct(&SingularType::A7, false).map_err(|e| e.to_string())?;
    ensure(a7.lct == q(5, 8), format!("A7: {}", a7.lct))?;
    for k in 1..=10i64 {
        // x^2 + y^(k+1)
        let (w1, w2) = solve_weights([2, 0], [0, k + 1]).unwrap();
        let e = lct_entry(LctType::A(k as u32)).map_err(|e| e.to_string())?;
        ensure(e.lct == &w1 + &w2 && e.lct == q(k + 3, 2 * k + 2), format!("A{k}: {}", e.lct))?;
        ensure(e.weights == (w1, w2), format!("A{k}: weights"))?;
    }
    for k in 4..=10i64 {
        // y^2 x + x^(k-1)
        let (w1, w2) = solve_weights([1, 2], [k - 1, 0]).unwrap();
        let e = lct_entry(LctType::D(k as u32)).map_err(|e| e.to_string())?;
        ensure(e.lct == &w1 + &w2 && e.lct == q(k, 2 * k - 2), format!("D{k}: {}", e.lct))?;
        ensure(e.weights == (w1, w2), format!("D{k}: weights"))?;
    }
    Ok("A7 = 5/8; A1..A10 and D4..D10 agree with the normal-form weights".into())
}

/// Number, check, budget in seconds.
type Criterion = (u32, fn() -> Check, u64);

fn main() {
    let criteria: [Criterion; 9] = [
        (1, criterion_1, 5),
        (2, criterion_2, 30),
        (3, criterion_3, 10),
        (4, criterion_4, 60),
        (5, criterion_5, 90),
        (6, criterion_6, 5),
        (7, criterion_7, 15),
        (8, criterion_8, 120),
        (9, criterion_9, 1),
    ];
    let mut failed = 0;
    for (n, f, budget) in criteria {
        let t = Instant::now();
        let r = f();
        let el = t.elapsed();
        let over = el > Duration::from_secs(budget);
        let (ok, msg) = match r {
            Ok(m) if !over => (true, m),
            Ok(m) => (false, format!("{m}; over the {budget}s budget")),
            Err(m) => (false, m),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {n}: {} [{:.2}s / {budget}s] {msg}",
            if ok { "PASS" } else { "FAIL" },
            el.as_secs_f64()
        );
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
