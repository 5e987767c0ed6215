//! Small-step semantics of the target calculus.

use crate::machine::{drive, Outcome, Run, StepResult, StuckReason};
use crate::syntax::Prim;
use crate::target::TgtExpr;

fn stuck(reason: StuckReason, focus: &TgtExpr) -> StepResult<TgtExpr> {
    StepResult::Stuck { reason, focus: focus.clone() }
}

/// One step. Pairs are lazy; `DEAD(τ,σ,w)` is a value that blocks δ.
pub fn step_target(w: &TgtExpr) -> StepResult<TgtExpr> {
    if w.is_value() {
        return StepResult::AlreadyValue;
    }
    match w {
        TgtExpr::Let(x, a, b) => {
            if !a.is_value() {
                return step_target(a).map(|n| TgtExpr::let_(x.clone(), n, (**b).clone()));
            }
            StepResult::Stepped { next: b.subst(x, a), rule: "E-Let" }
        }
        TgtExpr::If(c, t, e) => {
            if !c.is_value() {
                return step_target(c).map(|n| TgtExpr::if_(n, (**t).clone(), (**e).clone()));
            }
            match **c {
                TgtExpr::Const(Prim::Bool(true)) => StepResult::Stepped { next: (**t).clone(), rule: "E-If-True" },
                TgtExpr::Const(Prim::Bool(false)) => StepResult::Stepped { next: (**e).clone(), rule: "E-If-False" },
                _ => stuck(StuckReason::IfNonBoolean, w),
            }
        }
        TgtExpr::App(f, a) => {
            if !f.is_value() {
                return step_target(f).map(|n| TgtExpr::app(n, (**a).clone()));
            }
            if !a.is_value() {
                return step_target(a).map(|n| TgtExpr::app((**f).clone(), n));
            }
            match &**f {
                TgtExpr::Lam { param, body, .. } => StepResult::Stepped { next: body.subst(param, a), rule: "E-Beta" },
                TgtExpr::Const(c) if c.is_function() => match &**a {
                    TgtExpr::Dead { .. } => stuck(StuckReason::DeadArgument, w),
                    TgtExpr::Const(arg) => match c.delta(*arg) {
                        Some(r) => StepResult::Stepped { next: TgtExpr::Const(r), rule: "E-App-C" },
                        None => stuck(StuckReason::DeltaUndefined, w),
                    },
                    _ => stuck(StuckReason::DeltaUndefined, w),
                },
                _ => stuck(StuckReason::ApplyNonFunction, w),
            }
        }
        TgtExpr::Proj(k, a) => {
            if !a.is_value() {
                return step_target(a).map(|n| TgtExpr::proj(*k, n));
            }
            match &**a {
                TgtExpr::Pair(l, r) => {
                    StepResult::Stepped { next: if *k == 1 { (**l).clone() } else { (**r).clone() }, rule: "E-Proj" }
                }
                _ => stuck(StuckReason::ProjNonPair, w),
            }
        }
        TgtExpr::Inj { k, ann, payload } => step_target(payload).map(|n| TgtExpr::inj(*k, ann.clone(), n)),
        TgtExpr::Dead { from, to, inner } => step_target(inner).map(|n| TgtExpr::dead(from.clone(), to.clone(), n)),
        TgtExpr::Case { scrut, x1, b1, x2, b2 } => {
            if !scrut.is_value() {
                return step_target(scrut)
                    .map(|n| TgtExpr::case(n, x1.clone(), (**b1).clone(), x2.clone(), (**b2).clone()));
            }
            match &**scrut {
                TgtExpr::Inj { k: 1, payload, .. } => StepResult::Stepped { next: b1.subst(x1, payload), rule: "E-Case" },
                TgtExpr::Inj { payload, .. } => StepResult::Stepped { next: b2.subst(x2, payload), rule: "E-Case" },
                _ => stuck(StuckReason::CaseNonInjection, w),
            }
        }
        TgtExpr::Const(_) | TgtExpr::Var(_) | TgtExpr::Lam { .. } | TgtExpr::Pair(..) => StepResult::AlreadyValue,
    }
}

pub fn eval_target(w: &TgtExpr, fuel: usize) -> Outcome<TgtExpr> {
    drive(w.clone(), fuel, step_target, false).outcome
}

pub fn run_target(w: &TgtExpr, fuel: usize) -> Run<TgtExpr> {
    drive(w.clone(), fuel, step_target, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{Op, SrcType};

    fn union() -> SrcType {
        SrcType::or(SrcType::number(), SrcType::boolean())
    }

    #[test]
    fn case_binds_payload() {
        let w = TgtExpr::case(TgtExpr::inj(1, union(), TgtExpr::int(5)), "x1", TgtExpr::var("x1"), "x2", TgtExpr::int(0));
        assert_eq!(step_target(&w), StepResult::Stepped { next: TgtExpr::int(5), rule: "E-Case" });
    }

    #[test]
    fn delta_on_dead_is_stuck() {
        let d = TgtExpr::dead(SrcType::number(), SrcType::boolean(), TgtExpr::int(3));
        let w = TgtExpr::app(TgtExpr::Const(Prim::Op(Op::Not)), d);
        assert!(matches!(step_target(&w), StepResult::Stuck { reason: StuckReason::DeadArgument, .. }));
    }

    #[test]
    fn projection() {
        let w = TgtExpr::proj(2, TgtExpr::pair(TgtExpr::int(1), TgtExpr::bool(true)));
        assert_eq!(step_target(&w), StepResult::Stepped { next: TgtExpr::bool(true), rule: "E-Proj" });
    }

    #[test]
    fn dead_value_is_terminal() {
        let d = TgtExpr::dead(SrcType::number(), SrcType::boolean(), TgtExpr::int(1));
        assert_eq!(eval_target(&d, 1), Outcome::Value(d));
    }

    #[test]
    fn dead_head_gets_stuck_after_beta() {
        let nn = SrcType::fun(SrcType::number(), SrcType::number());
        let ann = SrcType::fun(nn.clone(), SrcType::number());
        let f = TgtExpr::lam("x", ann, TgtExpr::app(TgtExpr::var("x"), TgtExpr::int(1)));
        let w = TgtExpr::app(f, TgtExpr::dead(SrcType::number(), nn, TgtExpr::int(0)));
        let run = run_target(&w, 10);
        assert_eq!(run.taken, 1);
        match run.outcome {
            Outcome::StuckAt { reason, focus, .. } => {
                assert_eq!(reason, StuckReason::ApplyNonFunction);
                assert!(focus.contains_dead());
            }
            other => panic!("{other:?}"),
        }
    }
}
