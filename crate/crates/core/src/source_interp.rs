//! Small-step semantics of the source calculus.

use crate::machine::{drive, Outcome, Run, StepResult, StuckReason};
use crate::name::Name;
use crate::syntax::{Prim, SrcExpr};

pub const DEFAULT_FUEL: usize = 100_000;

/// `[v/x]e`. Binders are unique after parsing, so only shadowing matters.
pub fn subst_source(e: &SrcExpr, x: &Name, v: &SrcExpr) -> SrcExpr {
    let s = |e: &SrcExpr| subst_source(e, x, v);
    match e {
        SrcExpr::Const(_) => e.clone(),
        SrcExpr::Var(y) => {
            if y == x {
                v.clone()
            } else {
                e.clone()
            }
        }
        SrcExpr::Lam(y, b) => {
            if y == x {
                e.clone()
            } else {
                SrcExpr::lam(y.clone(), s(b))
            }
        }
        SrcExpr::Ascribe(b, t) => SrcExpr::ascribe(s(b), t.clone()),
        SrcExpr::Let(y, a, b) => {
            let b = if y == x { (**b).clone() } else { s(b) };
            SrcExpr::let_(y.clone(), s(a), b)
        }
        SrcExpr::If(c, t, el) => SrcExpr::if_(s(c), s(t), s(el)),
        SrcExpr::App(f, a) => SrcExpr::app(s(f), s(a)),
    }
}

fn stuck(reason: StuckReason, focus: &SrcExpr) -> StepResult<SrcExpr> {
    StepResult::Stuck { reason, focus: focus.clone() }
}

/// One leftmost-innermost step. Ascribed values count as values and are
/// looked through by application, δ and conditionals.
pub fn step_source(e: &SrcExpr) -> StepResult<SrcExpr> {
    if e.is_value() {
        return StepResult::AlreadyValue;
    }
    match e {
        SrcExpr::Ascribe(inner, t) => step_source(inner).map(|n| SrcExpr::ascribe(n, t.clone())),
        SrcExpr::Let(x, a, b) => {
            if !a.is_value() {
                return step_source(a).map(|n| SrcExpr::let_(x.clone(), n, (**b).clone()));
            }
            StepResult::Stepped { next: subst_source(b, x, a), rule: "E-Let" }
        }
        SrcExpr::If(c, t, el) => {
            if !c.is_value() {
                return step_source(c).map(|n| SrcExpr::if_(n, (**t).clone(), (**el).clone()));
            }
            match c.peel() {
                SrcExpr::Const(Prim::Bool(true)) => StepResult::Stepped { next: (**t).clone(), rule: "E-If-True" },
                SrcExpr::Const(Prim::Bool(false)) => StepResult::Stepped { next: (**el).clone(), rule: "E-If-False" },
                _ => stuck(StuckReason::IfNonBoolean, e),
            }
        }
        SrcExpr::App(f, a) => {
            if !f.is_value() {
                return step_source(f).map(|n| SrcExpr::app(n, (**a).clone()));
            }
            if !a.is_value() {
                return step_source(a).map(|n| SrcExpr::app((**f).clone(), n));
            }
            match f.peel() {
                SrcExpr::Lam(x, body) => StepResult::Stepped { next: subst_source(body, x, a), rule: "E-App-B" },
                SrcExpr::Const(c) if c.is_function() => match a.peel() {
                    SrcExpr::Const(arg) => match c.delta(*arg) {
                        Some(r) => StepResult::Stepped { next: SrcExpr::Const(r), rule: "E-App-A" },
                        None => stuck(StuckReason::DeltaUndefined, e),
                    },
                    _ => stuck(StuckReason::DeltaUndefined, e),
                },
                _ => stuck(StuckReason::ApplyNonFunction, e),
            }
        }
        SrcExpr::Const(_) | SrcExpr::Var(_) | SrcExpr::Lam(..) => StepResult::AlreadyValue,
    }
}

pub fn eval_source(e: &SrcExpr, fuel: usize) -> Outcome<SrcExpr> {
    drive(e.clone(), fuel, step_source, false).outcome
}

/// Evaluate, keeping every intermediate term.
pub fn run_source(e: &SrcExpr, fuel: usize) -> Run<SrcExpr> {
    drive(e.clone(), fuel, step_source, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{Op, SrcType};

    #[test]
    fn if_true_steps_to_then_branch() {
        let e = SrcExpr::if_(SrcExpr::bool(true), SrcExpr::int(1), SrcExpr::int(2));
        assert_eq!(step_source(&e), StepResult::Stepped { next: SrcExpr::int(1), rule: "E-If-True" });
    }

    #[test]
    fn applying_a_number_is_stuck() {
        let f = SrcExpr::lam("x", SrcExpr::app(SrcExpr::var("x"), SrcExpr::int(1)));
        let e = SrcExpr::app(f, SrcExpr::int(0));
        let inner = SrcExpr::app(SrcExpr::int(0), SrcExpr::int(1));
        assert_eq!(step_source(&e), StepResult::Stepped { next: inner.clone(), rule: "E-App-B" });
        assert!(matches!(step_source(&inner), StepResult::Stuck { reason: StuckReason::ApplyNonFunction, .. }));
        assert!(eval_source(&e, 10).is_stuck());
    }

    #[test]
    fn delta_outside_domain_is_stuck() {
        let e = SrcExpr::app(SrcExpr::op(Op::Not), SrcExpr::int(3));
        assert!(matches!(step_source(&e), StepResult::Stuck { reason: StuckReason::DeltaUndefined, .. }));
    }

    #[test]
    fn substitution_cases() {
        let x = Name::new("x");
        assert_eq!(subst_source(&SrcExpr::var("x"), &x, &SrcExpr::int(5)), SrcExpr::int(5));
        let id = SrcExpr::lam("x", SrcExpr::var("x"));
        assert_eq!(subst_source(&id, &x, &SrcExpr::int(5)), id);
        let e = SrcExpr::let_("y", SrcExpr::var("x"), SrcExpr::app(SrcExpr::var("y"), SrcExpr::var("x")));
        let r = SrcExpr::let_("y", SrcExpr::bool(true), SrcExpr::app(SrcExpr::var("y"), SrcExpr::bool(true)));
        assert_eq!(subst_source(&e, &x, &SrcExpr::bool(true)), r);
    }

    #[test]
    fn fuel_bounds_evaluation() {
        let sum = SrcExpr::apps(SrcExpr::op(Op::Add), [SrcExpr::int(1), SrcExpr::int(2)]);
        assert_eq!(eval_source(&sum, 10), Outcome::Value(SrcExpr::int(3)));
        let f = SrcExpr::lam("x", SrcExpr::var("x"));
        let e = SrcExpr::let_("f", f, SrcExpr::app(SrcExpr::var("f"), SrcExpr::app(SrcExpr::var("f"), SrcExpr::bool(true))));
        assert!(matches!(eval_source(&e, 1), Outcome::FuelExhausted(_)));
    }

    #[test]
    fn ascribed_lambdas_apply() {
        let t = SrcType::fun(SrcType::number(), SrcType::number());
        let f = SrcExpr::ascribe(SrcExpr::lam("x", SrcExpr::var("x")), t);
        assert_eq!(eval_source(&SrcExpr::app(f, SrcExpr::int(4)), 5), Outcome::Value(SrcExpr::int(4)));
    }
}
