//! Executable versions of the metatheory's assumptions and lemmas.

use serde::Serialize;

use crate::elab::{elaborate_program, Elab};
use crate::harness::relate::related;
use crate::logic::Budget;
use crate::machine::{Outcome, StepResult};
use crate::par::Strategy;
use crate::refine::{check_refined_with, RefEnv, RefineConfig};
use crate::source_interp::{eval_source, step_source, subst_source};
use crate::syntax::{Base, Prim, Program, SrcExpr};
use crate::target::{erase_src, simple_typecheck, ErasedType, TgtExpr};
use crate::target_interp::{run_target, step_target};

fn prim_base(c: Prim) -> Option<Base> {
    match c {
        Prim::Int(_) => Some(Base::Number),
        Prim::Bool(_) => Some(Base::Boolean),
        _ => None,
    }
}

/// Canonical forms: the shape a closed target value must have at its type.
pub fn canonical_form(w: &TgtExpr, t: &ErasedType) -> Result<(), String> {
    if w.is_dead_value() {
        return Ok(());
    }
    let ok = match (t, w) {
        (ErasedType::Prim(b), TgtExpr::Const(c)) => prim_base(*c) == Some(*b),
        (ErasedType::Fun(..), TgtExpr::Lam { .. }) => true,
        (ErasedType::Fun(..), TgtExpr::Const(c)) => c.is_function(),
        (ErasedType::Prod(..), TgtExpr::Pair(..)) => true,
        (ErasedType::Sum(..), TgtExpr::Inj { payload, .. }) => payload.is_value(),
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(format!("value {w} is not canonical at {t}"))
    }
}

pub fn check_canonical(w: &TgtExpr) -> Result<(), String> {
    let t = simple_typecheck(&Default::default(), w).map_err(|e| e.to_string())?;
    canonical_form(w, &t)
}

/// `c v` redexes with a constant argument in the primitive's domain.
pub fn delta_redexes(e: &SrcExpr) -> Vec<(Prim, Prim)> {
    fn go(e: &SrcExpr, out: &mut Vec<(Prim, Prim)>) {
        match e {
            SrcExpr::App(f, a) => {
                if let (SrcExpr::Const(c), SrcExpr::Const(v)) = (f.peel(), a.peel()) {
                    if c.is_function() && c.domain() == prim_base(*v) {
                        out.push((*c, *v));
                    }
                }
                go(f, out);
                go(a, out);
            }
            SrcExpr::Const(_) | SrcExpr::Var(_) => {}
            SrcExpr::Lam(_, b) | SrcExpr::Ascribe(b, _) => go(b, out),
            SrcExpr::Let(_, a, b) => {
                go(a, out);
                go(b, out);
            }
            SrcExpr::If(a, b, c) => {
                go(a, out);
                go(b, out);
                go(c, out);
            }
        }
    }
    let mut out = Vec::new();
    go(e, &mut out);
    out
}

/// Primitive application: both calculi step `c v` and the results correspond.
pub fn assumption1(c: Prim, v: Prim) -> Result<(), String> {
    let s = step_source(&SrcExpr::app(SrcExpr::Const(c), SrcExpr::Const(v)));
    let t = step_target(&TgtExpr::app(TgtExpr::Const(c), TgtExpr::Const(v)));
    match (s, t) {
        (StepResult::Stepped { next: e, .. }, StepResult::Stepped { next: w, .. }) if related(&e, &w) => Ok(()),
        (s, t) => Err(format!("{c} {v}: source {s:?}, target {t:?}")),
    }
}

/// For each `let x = v in e` on the main spine: `[v/x]e` relates to `[W_v/x]W_e`.
pub fn substitution_spot_check(e: &SrcExpr, w: &TgtExpr) -> Vec<String> {
    let mut out = Vec::new();
    let (mut e, mut w) = (e.peel(), w);
    while let (SrcExpr::Let(x, a, b), TgtExpr::Let(y, wa, wb)) = (e, w) {
        if x != y {
            break;
        }
        if a.is_value() && wa.is_value() && !related(&subst_source(b, x, a), &wb.subst(y, wa)) {
            out.push(format!("substituting {a} for {x}"));
        }
        e = b.peel();
        w = wb;
    }
    out
}

/// The elaborator's output is simply typed at the erasure of its type.
pub fn type_soundness(elab: &Elab) -> Result<(), String> {
    let got = simple_typecheck(&Default::default(), &elab.target).map_err(|e| e.to_string())?;
    let want = erase_src(&elab.ty);
    if got == want {
        Ok(())
    } else {
        Err(format!("target has type {got}, expected {want}"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Soundness {
    /// The program is not well two-typed.
    Vacuous { reason: String },
    Pass { steps: usize, rechecks: usize },
    Violation { kind: String, detail: String },
}

impl Soundness {
    pub fn is_violation(&self) -> bool {
        matches!(self, Soundness::Violation { .. })
    }
}

pub fn soundness_trial(p: &Program, fuel: usize) -> Soundness {
    soundness_trial_with(p, fuel, 5)
}

/// Well two-typed programs do not get stuck; every `every`-th target state is
/// re-checked by both simple typing and Phase 2.
pub fn soundness_trial_with(p: &Program, fuel: usize, every: usize) -> Soundness {
    let config = RefineConfig { budget: Budget::default(), strategy: Strategy::Sequential };
    let elab = match elaborate_program(p) {
        Ok(e) => e,
        Err(e) => return Soundness::Vacuous { reason: e.to_string() },
    };
    match check_refined_with(&RefEnv::new(), &elab.target, None, config) {
        Ok(r) if r.accepted() => {}
        Ok(_) => return Soundness::Vacuous { reason: "rejected by refinement checking".into() },
        Err(e) => return Soundness::Vacuous { reason: e.to_string() },
    }
    if let Outcome::StuckAt { term, reason, .. } = eval_source(&p.main, fuel) {
        return Soundness::Violation { kind: "stuck".into(), detail: format!("{reason} at {term}") };
    }
    let run = run_target(&elab.target, fuel);
    let mut rechecks = 0;
    for i in (0..run.len()).step_by(every.max(1)) {
        let w = run.term(i);
        rechecks += 1;
        if let Err(e) = simple_typecheck(&Default::default(), w) {
            return Soundness::Violation { kind: "preservation".into(), detail: format!("step {i}: {e}") };
        }
        match check_refined_with(&RefEnv::new(), w, None, config) {
            Ok(r) if r.accepted() => {}
            Ok(r) => {
                let failed: Vec<String> = r.failures().iter().map(|(vc, _)| vc.to_string()).collect();
                return Soundness::Violation {
                    kind: "preservation".into(),
                    detail: format!("step {i}: {}", failed.join("; ")),
                };
            }
            Err(e) => {
                return Soundness::Violation { kind: "preservation".into(), detail: format!("step {i}: {e}") }
            }
        }
    }
    if run.outcome.is_stuck() {
        return Soundness::Violation { kind: "stuck".into(), detail: run.outcome.to_string() };
    }
    Soundness::Pass { steps: run.taken, rechecks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_source, Op};

    #[test]
    fn primitive_applications_correspond() {
        for op in Op::ALL {
            let arg = if op == Op::Not { Prim::Bool(true) } else { Prim::Int(3) };
            assert!(assumption1(Prim::Op(op), arg).is_ok());
        }
        assert!(assumption1(Prim::Partial(Op::Sub, 4), Prim::Int(9)).is_ok());
    }

    #[test]
    fn canonical_forms_by_type() {
        let n = ErasedType::Prim(Base::Number);
        assert!(canonical_form(&TgtExpr::int(1), &n).is_ok());
        assert!(canonical_form(&TgtExpr::bool(true), &n).is_err());
        let d = TgtExpr::dead(crate::syntax::SrcType::boolean(), crate::syntax::SrcType::number(), TgtExpr::bool(true));
        assert!(canonical_form(&d, &n).is_ok());
    }

    #[test]
    fn accepted_program_passes_the_trial() {
        let p = parse_source("let f = (\\x => add x 1 : number -> number) in f 2").unwrap();
        assert!(matches!(soundness_trial(&p, 1000), Soundness::Pass { .. }));
        let q = parse_source("(\\x => x 1 : (number -> number) -> number) 0").unwrap();
        assert!(matches!(soundness_trial(&q, 1000), Soundness::Vacuous { .. }));
    }
}
