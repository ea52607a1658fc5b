use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use conicfree::analysis::{analyze, Analysis, AnalyzeOptions};
use conicfree::combinatorics::{
    enumerate_nearly_free_bound, enumerate_theorem_char, enumerate_theorem_near, modular_points, IncidenceStructure,
};
use conicfree::corpus::{self, corpus_entries};
use conicfree::freeness::{check_deformation, Verdict};
use conicfree::jacobian::{JacobianContext, LinalgMode};
use conicfree::poly::{fmt_point, parse_factors, parse_rat, HomogeneousPolynomial, Point, PolyError};
use conicfree::report::AnalysisReport;
use conicfree::singular::{survey, ConicArrangement, SurveyOptions};

const KMAX_LIMIT: u64 = 10_000;

#[derive(Parser)]
#[command(name = "conicfree", version, about = "Freeness and singularities of conic arrangements")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Treat ordinary r-fold points (r >= 5) as quasi-homogeneous.
    #[arg(long, global = true)]
    assume_qh: bool,
    /// Extra points to examine, one `x:y:z` per line.
    #[arg(long, global = true, value_name = "FILE")]
    points: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "off")]
    modular_linalg: Toggle,
    /// Extra degrees read past the stabilization window.
    #[arg(long, global = true, default_value_t = 0, value_name = "N")]
    window_extend: u32,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Toggle {
    On,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum Theorem {
    Near,
    Char,
    Nfbound,
}

#[derive(Subcommand)]
enum Cmd {
    /// Tjurina number, mdr, freeness verdict and singular points.
    Analyze { input: String },
    /// Locate and classify the singular points of a conic arrangement.
    Classify { input: String },
    /// Exhaustive check of the combinatorial statements up to `kmax` conics.
    Theorems {
        #[arg(value_enum)]
        which: Theorem,
        #[arg(long, default_value_t = 100)]
        kmax: u64,
    },
    /// Check the tacnode-splitting deformation between two arrangements.
    DeformCheck { before: String, after: String },
    /// Modular points of an incidence file or a conic arrangement.
    Supersolvable { input: String },
    /// Run the corpus and compare against expected values.
    Regression { names: Vec<String> },
    /// List corpus entries.
    Corpus,
}

enum Failure {
    Input(String),
    Inconclusive,
}

impl From<PolyError> for Failure {
    fn from(e: PolyError) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

struct Loaded {
    source: String,
    factors: Vec<HomogeneousPolynomial>,
    extra_points: Vec<Point>,
    incidence: Option<IncidenceStructure>,
    assume_qh: bool,
}

fn syntax_context(text: &str, e: &PolyError) -> String {
    match e {
        PolyError::Syntax { pos, .. } => format!("{e}\n  {text}\n  {}^", " ".repeat(*pos)),
        _ => e.to_string(),
    }
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

fn load(input: &str) -> Result<Loaded, Failure> {
    if let Some(key) = input.strip_prefix("corpus:") {
        let inst = corpus::lookup(key).map_err(|e| Failure::Input(e.to_string()))?;
        return Ok(Loaded {
            source: input.to_string(),
            factors: inst.factor_polys(),
            extra_points: inst.extra_points.clone(),
            incidence: inst.incidence.clone(),
            assume_qh: inst.assume_qh,
        });
    }
    let mut factors = Vec::new();
    if Path::new(input).is_file() {
        let text = std::fs::read_to_string(input).map_err(|e| Failure::Input(format!("{input}: {e}")))?;
        for (n, raw) in text.lines().enumerate() {
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let fs = parse_factors(line)
                .map_err(|e| Failure::Input(format!("{input}:{}: {}", n + 1, syntax_context(line, &e))))?;
            factors.extend(fs);
        }
        if factors.is_empty() {
            return Err(Failure::Input(format!("{input}: no polynomial found")));
        }
    } else {
        factors = parse_factors(input).map_err(|e| Failure::Input(syntax_context(input, &e)))?;
    }
    Ok(Loaded { source: input.to_string(), factors, extra_points: vec![], incidence: None, assume_qh: false })
}

fn parse_point(line: &str) -> Option<Point> {
    let inner = line.trim_start_matches('(').trim_end_matches(')');
    let parts: Vec<&str> = inner.split([':', ',', ' ']).filter(|s| !s.is_empty()).collect();
    if parts.len() != 3 {
        return None;
    }
    Some([parse_rat(parts[0])?, parse_rat(parts[1])?, parse_rat(parts[2])?])
}

fn load_points(path: &Path) -> Result<Vec<Point>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let p = parse_point(line)
            .ok_or_else(|| Failure::Input(format!("{}:{}: expected a point x:y:z", path.display(), n + 1)))?;
        if p.iter().all(num_traits::Zero::is_zero) {
            return Err(Failure::Input(format!("{}:{}: {}", path.display(), n + 1, PolyError::ZeroPoint)));
        }
        out.push(p);
    }
    Ok(out)
}

struct Ctx {
    json: bool,
    assume_qh: bool,
    points: Vec<Point>,
    mode: LinalgMode,
    window_extend: u32,
}

impl Ctx {
    fn options(&self, l: &Loaded) -> AnalyzeOptions {
        let mut extra = l.extra_points.clone();
        extra.extend(self.points.iter().cloned());
        AnalyzeOptions {
            mode: self.mode,
            assume_qh: self.assume_qh || l.assume_qh,
            extra_points: extra,
            window_extend: self.window_extend,
        }
    }

    fn run_analysis(&self, l: &Loaded) -> Result<Analysis, Failure> {
        analyze(l.factors.clone(), &self.options(l)).map_err(|e| Failure::Input(e.to_string()))
    }

    fn emit(&self, value: serde_json::Value, text: String) {
        if self.json {
            println!("{}", serde_json::to_string_pretty(&value).expect("json"));
        } else {
            print!("{text}");
        }
    }
}

fn cmd_analyze(ctx: &Ctx, input: &str) -> Outcome {
    let l = load(input)?;
    let a = ctx.run_analysis(&l)?;
    let r = AnalysisReport::from_analysis(&a, &l.source);
    if ctx.json {
        println!("{}", r.to_json());
    } else {
        print!("{}", r.render_text());
    }
    if matches!(a.report.verdict, Verdict::Indeterminate(_)) {
        return Err(Failure::Inconclusive);
    }
    Ok(())
}

fn cmd_classify(ctx: &Ctx, input: &str) -> Outcome {
    let l = load(input)?;
    let arr = ConicArrangement::from_factors(&l.factors).map_err(|e| Failure::Input(e.to_string()))?;
    let opts = ctx.options(&l);
    let s = survey(&arr, &SurveyOptions { assume_qh: opts.assume_qh, extra_points: opts.extra_points, local_algebra: true })
        .map_err(|e| Failure::Input(e.to_string()))?;
    let tau = JacobianContext::new(arr.polynomial())
        .ok()
        .and_then(|c| c.hilbert_profile(ctx.mode, ctx.window_extend).tau())
        .map(|t| t as u32);
    let inv = s.inventory(arr.k(), tau);
    let records: Vec<serde_json::Value> = s
        .records
        .iter()
        .map(|r| {
            json!({
                "point": fmt_point(&r.point),
                "members": r.members.iter().map(|m| m + 1).collect::<Vec<_>>(),
                "type": r.sing_type.to_string(),
                "mu": r.mu,
                "tau": r.tau_value(),
            })
        })
        .collect();
    let residuals: Vec<serde_json::Value> = s
        .residual_per_pair
        .iter()
        .filter(|(_, &v)| v > 0)
        .map(|((i, j), v)| json!({"pair": [i + 1, j + 1], "residual": v}))
        .collect();
    let inventory: std::collections::BTreeMap<String, usize> =
        inv.counts.iter().map(|(t, n)| (t.to_string(), *n)).collect();
    let mut text = String::new();
    for r in &s.records {
        let tau = r.tau_value().map_or("-".to_string(), |t| t.to_string());
        text += &format!("{:<16} {:<28} mu {:<4} tau {tau}\n", fmt_point(&r.point), r.sing_type.to_string(), r.mu);
    }
    for ((i, j), v) in s.residual_per_pair.iter().filter(|(_, &v)| v > 0) {
        text += &format!("unlocated: {v} intersection(s) of C{} and C{}\n", i + 1, j + 1);
    }
    for p in &s.rejected_extra {
        text += &format!("ignored {}: not on two components\n", fmt_point(p));
    }
    let inv_text: Vec<String> = inventory.iter().map(|(t, n)| format!("{n} x {t}")).collect();
    let inv_text = if inv_text.is_empty() { "none".to_string() } else { inv_text.join(", ") };
    text += &format!("inventory: {inv_text}{}\n", if inv.complete { "" } else { " (incomplete)" });
    if inv.inferred_nodes > 0 {
        text += &format!("{} node(s) inferred from the global Tjurina number\n", inv.inferred_nodes);
    }
    ctx.emit(
        json!({
            "records": records,
            "residuals": residuals,
            "survey_complete": s.complete,
            "inventory": inventory,
            "inventory_complete": inv.complete,
            "inferred_nodes": inv.inferred_nodes,
        }),
        text,
    );
    if inv.complete {
        Ok(())
    } else {
        Err(Failure::Inconclusive)
    }
}

fn cmd_theorems(ctx: &Ctx, which: Theorem, kmax: u64) -> Outcome {
    if !(2..=KMAX_LIMIT).contains(&kmax) {
        return Err(Failure::Input(format!("--kmax must lie in 2..={KMAX_LIMIT}")));
    }
    let cert = match which {
        Theorem::Near => enumerate_theorem_near(kmax),
        Theorem::Char => enumerate_theorem_char(kmax),
        Theorem::Nfbound => enumerate_nearly_free_bound(kmax),
    };
    let mut text = format!(
        "{}: k in {}..={}, {} candidate(s), {} counterexample(s)\n",
        cert.theorem,
        cert.k_range.0,
        cert.k_range.1,
        cert.candidates,
        cert.counterexamples.len()
    );
    if !cert.intervals.is_empty() {
        text += &format!("admissible k: {:?}\n", cert.admissible);
    }
    for c in cert.counterexamples.iter().take(20) {
        text += &format!("  {c:?}\n");
    }
    ctx.emit(serde_json::to_value(&cert).expect("json"), text);
    if cert.passed() {
        Ok(())
    } else {
        Err(Failure::Inconclusive)
    }
}

fn cmd_deform(ctx: &Ctx, before: &str, after: &str) -> Outcome {
    let (lb, la) = (load(before)?, load(after)?);
    let (ab, aa) = (ctx.run_analysis(&lb)?, ctx.run_analysis(&la)?);
    let (Some(ib), Some(ia)) = (&ab.inventory, &aa.inventory) else {
        return Err(Failure::Input("both inputs must be conic arrangements".into()));
    };
    let v = check_deformation((&ab.report, ib), (&aa.report, ia));
    let mut text = String::new();
    for c in &v.clauses {
        text += &format!("{:<12} {:<5} {}\n", c.name, if c.passed { "ok" } else { "FAIL" }, c.detail);
    }
    text += &format!("after: {}\n", v.after_verdict);
    ctx.emit(
        json!({"passed": v.passed(), "clauses": v.clauses, "after_verdict": v.after_verdict.to_string()}),
        text,
    );
    v.into_result().map(|_| ()).map_err(|_| Failure::Inconclusive)
}

fn looks_like_incidence(input: &str) -> Option<String> {
    let text = std::fs::read_to_string(input).ok()?;
    let first = text.lines().map(strip_comment).find(|l| !l.is_empty())?;
    first.starts_with("point").then_some(text)
}

fn cmd_supersolvable(ctx: &Ctx, input: &str) -> Outcome {
    let (inc, mode) = if let Some(text) = looks_like_incidence(input) {
        (IncidenceStructure::parse(&text).map_err(|e| Failure::Input(format!("{input}: {e}")))?, "incidence")
    } else {
        let l = load(input)?;
        let geometric = match ConicArrangement::from_factors(&l.factors) {
            Ok(arr) => {
                let opts = ctx.options(&l);
                let s = survey(&arr, &SurveyOptions { assume_qh: opts.assume_qh, extra_points: opts.extra_points, local_algebra: false })
                    .map_err(|e| Failure::Input(e.to_string()))?;
                s.complete.then(|| IncidenceStructure::from_survey(&s))
            }
            Err(_) => None,
        };
        match (geometric, l.incidence) {
            (Some(g), _) => (g, "geometric"),
            (None, Some(given)) => (given, "supplied"),
            (None, None) => {
                eprintln!("singular points not all rational; supply an incidence file");
                return Err(Failure::Inconclusive);
            }
        }
    };
    let modular = modular_points(&inc);
    let text = format!(
        "{} point(s) [{mode}]\nmodular: {:?}\nsupersolvable: {}\n",
        inc.through.len(),
        modular,
        if modular.is_empty() { "no" } else { "yes" }
    );
    ctx.emit(
        json!({"mode": mode, "incidence": inc, "modular_points": modular, "supersolvable": !modular.is_empty()}),
        text,
    );
    Ok(())
}

fn cmd_regression(ctx: &Ctx, names: &[String]) -> Outcome {
    let rows = if names.is_empty() {
        corpus::run_regression(None, ctx.mode)
    } else {
        corpus::run_regression(Some(names), ctx.mode)
    }
    .map_err(|e| Failure::Input(e.to_string()))?;
    let mut text = String::new();
    for r in &rows {
        text += &format!("{:<24} {}\n", r.id, if r.passed { "ok" } else { "FAIL" });
        if let Some(e) = &r.error {
            text += &format!("    error: {e}\n");
        }
        for f in r.fields.iter().filter(|f| !f.passed) {
            text += &format!("    {} [{:?}]: {}\n", f.check, f.origin, f.detail.as_deref().unwrap_or(""));
        }
    }
    let failed = rows.iter().filter(|r| !r.passed).count();
    text += &format!("{} instance(s), {failed} failed\n", rows.len());
    ctx.emit(json!({"rows": rows, "failed": failed}), text);
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Inconclusive)
    }
}

fn cmd_corpus(ctx: &Ctx) -> Outcome {
    let entries = corpus_entries();
    let mut text = String::new();
    for e in &entries {
        let p = e.params.map_or(String::new(), |r| format!(":{}={}..{}", r.name, r.lo, r.hi));
        text += &format!("{:<32} {}\n", format!("{}{p}", e.name), e.summary);
    }
    let list: Vec<serde_json::Value> =
        entries.iter().map(|e| json!({"name": e.name, "summary": e.summary, "params": e.params})).collect();
    ctx.emit(json!(list), text);
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    let ctx = Ctx {
        json: cli.json,
        assume_qh: cli.assume_qh,
        points: match &cli.points {
            Some(p) => load_points(p)?,
            None => vec![],
        },
        mode: match cli.modular_linalg {
            Toggle::On => LinalgMode::Modular,
            Toggle::Off => LinalgMode::Exact,
        },
        window_extend: cli.window_extend,
    };
    match &cli.cmd {
        Cmd::Analyze { input } => cmd_analyze(&ctx, input),
        Cmd::Classify { input } => cmd_classify(&ctx, input),
        Cmd::Theorems { which, kmax } => cmd_theorems(&ctx, *which, *kmax),
        Cmd::DeformCheck { before, after } => cmd_deform(&ctx, before, after),
        Cmd::Supersolvable { input } => cmd_supersolvable(&ctx, input),
        Cmd::Regression { names } => cmd_regression(&ctx, names),
        Cmd::Corpus => cmd_corpus(&ctx),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match std::panic::catch_unwind(move || run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Failure::Input(msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Ok(Err(Failure::Inconclusive)) => ExitCode::from(2),
        Err(_) => ExitCode::from(3),
    }
}
