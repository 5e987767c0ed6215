//! Lockstep differential testing of the source and target semantics.

pub mod gen;
pub mod props;
pub mod relate;

use serde::Serialize;

use crate::elab::elaborate_program;
use crate::machine::{Outcome, Run};
use crate::par::{self, Strategy};
use crate::source_interp::run_source;
use crate::syntax::{Prim, Program, SrcExpr};
use crate::target::TgtExpr;
use crate::target_interp::run_target;

pub use gen::{gen_program, gen_program_with, GenConfig};
pub use props::{soundness_trial, Soundness};
pub use relate::related;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum DiffVerdict {
    Agree,
    Counterexample { kind: String, step: usize },
    Inconclusive { reason: String },
}

impl DiffVerdict {
    pub fn is_counterexample(&self) -> bool {
        matches!(self, DiffVerdict::Counterexample { .. })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DiffReport {
    pub program: String,
    pub source_outcome: String,
    pub target_outcome: String,
    pub source_steps: usize,
    pub target_steps: usize,
    /// Target terms that contain a DEAD-cast somewhere in the run.
    pub saw_dead: bool,
    pub target_stuck_at_dead: bool,
    pub verdict: DiffVerdict,
    /// Full traces, recorded only when the verdict is not `Agree`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source_trace: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target_trace: Option<Vec<String>>,
}

fn trace<E: std::fmt::Display + Clone>(run: &Run<E>) -> Vec<String> {
    (0..run.len()).map(|i| run.term(i).to_string()).collect()
}

/// Every state of `a` is matched, in order, by some state of `b`.
fn first_unmatched<A, B>(a: &Run<A>, b: &Run<B>, rel: impl Fn(&A, &B) -> bool) -> Option<usize> {
    let mut j = 0;
    for i in 0..a.len() {
        match (j..b.len()).find(|&k| rel(a.term(i), b.term(k))) {
            Some(k) => j = k,
            None => return Some(i),
        }
    }
    None
}

fn compare(src: &Run<SrcExpr>, tgt: &Run<TgtExpr>) -> DiffVerdict {
    let cx = |kind: &str, step: usize| DiffVerdict::Counterexample { kind: kind.into(), step };
    if !related(src.term(0), tgt.term(0)) {
        return cx("initial", 0);
    }
    if let Some(i) = first_unmatched(src, tgt, related) {
        if matches!(src.outcome, Outcome::FuelExhausted(_)) || matches!(tgt.outcome, Outcome::FuelExhausted(_)) {
            return DiffVerdict::Inconclusive { reason: "fuel exhausted".into() };
        }
        return cx("reverse-consistency", i);
    }
    if let Some(j) = first_unmatched(tgt, src, |w, e| related(e, w)) {
        if !matches!(src.outcome, Outcome::FuelExhausted(_)) && !matches!(tgt.outcome, Outcome::FuelExhausted(_)) {
            return cx("consistency", j);
        }
    }
    match (&src.outcome, &tgt.outcome) {
        (Outcome::FuelExhausted(_), _) | (_, Outcome::FuelExhausted(_)) => {
            DiffVerdict::Inconclusive { reason: "fuel exhausted".into() }
        }
        (Outcome::Value(e), Outcome::Value(w)) => {
            if related(e, w) {
                DiffVerdict::Agree
            } else {
                cx("value-mismatch", tgt.taken)
            }
        }
        (Outcome::StuckAt { .. }, Outcome::StuckAt { focus, .. }) => {
            if focus.contains_dead() {
                DiffVerdict::Agree
            } else {
                cx("stuck-without-dead", tgt.taken)
            }
        }
        (Outcome::StuckAt { .. }, Outcome::Value(_)) => cx("source-stuck-only", src.taken),
        (Outcome::Value(_), Outcome::StuckAt { .. }) => cx("target-stuck-only", tgt.taken),
    }
}

struct Lockstep {
    elab: crate::elab::Elab,
    src: Run<SrcExpr>,
    tgt: Run<TgtExpr>,
    report: DiffReport,
}

fn lockstep(p: &Program, fuel: usize) -> Result<Lockstep, crate::elab::ElabError> {
    let elab = elaborate_program(p)?;
    let src = run_source(&p.main, fuel);
    let tgt = run_target(&elab.target, fuel);
    let verdict = compare(&src, &tgt);
    let saw_dead = (0..tgt.len()).any(|i| tgt.term(i).contains_dead());
    let target_stuck_at_dead = matches!(&tgt.outcome, Outcome::StuckAt { focus, .. } if focus.contains_dead());
    let keep = verdict != DiffVerdict::Agree;
    let report = DiffReport {
        program: p.to_string(),
        source_outcome: src.outcome.to_string(),
        target_outcome: tgt.outcome.to_string(),
        source_steps: src.taken,
        target_steps: tgt.taken,
        saw_dead,
        target_stuck_at_dead,
        verdict,
        source_trace: keep.then(|| trace(&src)),
        target_trace: keep.then(|| trace(&tgt)),
    };
    Ok(Lockstep { elab, src, tgt, report })
}

/// Run both semantics on `p` and its elaboration and compare them step by step.
pub fn lockstep_check(p: &Program, fuel: usize) -> Result<DiffReport, crate::elab::ElabError> {
    lockstep(p, fuel).map(|l| l.report)
}

/// Elaboration type soundness, canonical forms of the final target value,
/// primitive application on every δ-redex met by the source, and substitution
/// on the top-level let spine.
fn property_violations(p: &Program, l: &Lockstep) -> Vec<String> {
    let mut out = Vec::new();
    if let Err(e) = props::type_soundness(&l.elab) {
        out.push(format!("type-soundness: {e}"));
    }
    if let Outcome::Value(w) = &l.tgt.outcome {
        if let Err(e) = props::check_canonical(w) {
            out.push(format!("canonical-form: {e}"));
        }
    }
    let mut redexes = std::collections::BTreeSet::new();
    for i in 0..l.src.len() {
        redexes.extend(props::delta_redexes(l.src.term(i)));
    }
    for (c, v) in redexes {
        if let Err(e) = props::assumption1(c, v) {
            out.push(format!("assumption-1: {e}"));
        }
    }
    out.extend(props::substitution_spot_check(&p.main, &l.elab.target).into_iter().map(|e| format!("substitution: {e}")));
    out
}

/// One-step reductions of a program: drop unused lets, take branches, shrink literals.
fn reductions(e: &SrcExpr) -> Vec<SrcExpr> {
    let mut out = Vec::new();
    match e {
        SrcExpr::Const(Prim::Int(k)) if *k != 0 => {
            out.push(SrcExpr::int(0));
            if k.abs() > 1 {
                out.push(SrcExpr::int(k / 2));
            }
        }
        SrcExpr::Let(x, a, b) => {
            if !b.free_vars().contains(x) {
                out.push((**b).clone());
            }
            out.extend(reductions(a).into_iter().map(|a| SrcExpr::Let(x.clone(), Box::new(a), b.clone())));
            out.extend(reductions(b).into_iter().map(|b| SrcExpr::Let(x.clone(), a.clone(), Box::new(b))));
        }
        SrcExpr::If(c, t, f) => {
            out.push((**t).clone());
            out.push((**f).clone());
            out.extend(reductions(c).into_iter().map(|c| SrcExpr::If(Box::new(c), t.clone(), f.clone())));
            out.extend(reductions(t).into_iter().map(|t| SrcExpr::If(c.clone(), Box::new(t), f.clone())));
            out.extend(reductions(f).into_iter().map(|f| SrcExpr::If(c.clone(), t.clone(), Box::new(f))));
        }
        SrcExpr::App(f, a) => {
            out.extend(reductions(f).into_iter().map(|f| SrcExpr::App(Box::new(f), a.clone())));
            out.extend(reductions(a).into_iter().map(|a| SrcExpr::App(f.clone(), Box::new(a))));
        }
        SrcExpr::Lam(x, b) => {
            out.extend(reductions(b).into_iter().map(|b| SrcExpr::Lam(x.clone(), Box::new(b))));
        }
        SrcExpr::Ascribe(b, t) => {
            out.extend(reductions(b).into_iter().map(|b| SrcExpr::Ascribe(Box::new(b), t.clone())));
        }
        SrcExpr::Const(_) | SrcExpr::Var(_) => {}
    }
    out
}

/// Greedy shrinking: keep taking the first reduction on which `still_fails` holds.
pub fn shrink(p: &Program, still_fails: impl Fn(&Program) -> bool) -> Program {
    let mut cur = p.clone();
    let mut budget = 500;
    'outer: while budget > 0 {
        for e in reductions(&cur.main) {
            budget -= 1;
            let cand = Program { main: e, ..cur.clone() };
            if still_fails(&cand) {
                cur = cand;
                continue 'outer;
            }
            if budget == 0 {
                break 'outer;
            }
        }
        break;
    }
    cur
}

#[derive(Clone, Debug, Serialize)]
pub struct FuzzConfig {
    pub trials: usize,
    pub seed: u64,
    pub fuel: usize,
    pub size: usize,
    pub strategy: Strategy,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig { trials: 500, seed: 0, fuel: 10_000, size: 24, strategy: Strategy::default() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TrialReport {
    pub seed: u64,
    pub diff: DiffReport,
    pub soundness: Soundness,
    pub property_violations: Vec<String>,
    /// The shrunk program when the trial found a counterexample.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shrunk: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct FuzzSummary {
    pub trials: usize,
    pub agree: usize,
    pub inconclusive: usize,
    pub with_dead: usize,
    pub stuck_at_dead: usize,
    /// Programs accepted by both phases.
    pub accepted: usize,
    pub counterexamples: Vec<TrialReport>,
    pub soundness_violations: Vec<TrialReport>,
    pub property_violations: Vec<TrialReport>,
}

impl FuzzSummary {
    pub fn from_reports(reports: &[TrialReport]) -> FuzzSummary {
        let mut sum = FuzzSummary { trials: reports.len(), ..Default::default() };
        for r in reports {
            match r.diff.verdict {
                DiffVerdict::Agree => sum.agree += 1,
                DiffVerdict::Inconclusive { .. } => sum.inconclusive += 1,
                DiffVerdict::Counterexample { .. } => sum.counterexamples.push(r.clone()),
            }
            sum.with_dead += r.diff.saw_dead as usize;
            sum.stuck_at_dead += r.diff.target_stuck_at_dead as usize;
            sum.accepted += matches!(r.soundness, Soundness::Pass { .. }) as usize;
            if r.soundness.is_violation() {
                sum.soundness_violations.push(r.clone());
            }
            if !r.property_violations.is_empty() {
                sum.property_violations.push(r.clone());
            }
        }
        sum
    }

    pub fn clean(&self) -> bool {
        self.counterexamples.is_empty() && self.soundness_violations.is_empty() && self.property_violations.is_empty()
    }
}

pub fn run_trial(seed: u64, config: &FuzzConfig) -> Option<TrialReport> {
    let p = gen_program(seed, config.size);
    let l = lockstep(&p, config.fuel).ok()?;
    let property_violations = property_violations(&p, &l);
    let soundness = soundness_trial(&p, config.fuel);
    let diff = l.report;
    let shrunk = diff.verdict.is_counterexample().then(|| {
        let kind = diff.verdict.clone();
        let same = |r: DiffReport| std::mem::discriminant(&r.verdict) == std::mem::discriminant(&kind);
        shrink(&p, |q| lockstep_check(q, config.fuel).map(same).unwrap_or(false)).to_string()
    });
    Some(TrialReport { seed, diff, soundness, property_violations, shrunk })
}

/// All trial reports in seed order; seeds whose program fails to elaborate are skipped.
pub fn fuzz_trials(config: &FuzzConfig) -> Vec<TrialReport> {
    let seeds: Vec<u64> = (0..config.trials as u64).map(|i| config.seed.wrapping_add(i)).collect();
    par::map(config.strategy, &seeds, |&s| run_trial(s, config)).into_iter().flatten().collect()
}

pub fn fuzz(config: &FuzzConfig) -> FuzzSummary {
    FuzzSummary::from_reports(&fuzz_trials(config))
}
