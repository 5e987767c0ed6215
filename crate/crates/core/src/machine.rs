//! Shared small-step driver for the source and target interpreters.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StuckReason {
    ApplyNonFunction,
    DeltaUndefined,
    DeadArgument,
    IfNonBoolean,
    ProjNonPair,
    CaseNonInjection,
}

impl fmt::Display for StuckReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StuckReason::ApplyNonFunction => "apply-non-function",
            StuckReason::DeltaUndefined => "delta-undefined",
            StuckReason::DeadArgument => "dead-argument",
            StuckReason::IfNonBoolean => "if-non-boolean",
            StuckReason::ProjNonPair => "proj-non-pair",
            StuckReason::CaseNonInjection => "case-non-injection",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepResult<E> {
    Stepped { next: E, rule: &'static str },
    AlreadyValue,
    Stuck { reason: StuckReason, focus: E },
}

impl<E> StepResult<E> {
    /// Lift a step of a subterm through an evaluation context.
    pub fn map(self, wrap: impl FnOnce(E) -> E) -> StepResult<E> {
        match self {
            StepResult::Stepped { next, rule } => StepResult::Stepped { next: wrap(next), rule },
            other => other,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome<E> {
    Value(E),
    StuckAt { term: E, reason: StuckReason, focus: E },
    FuelExhausted(E),
}

impl<E> Outcome<E> {
    pub fn term(&self) -> &E {
        match self {
            Outcome::Value(e) | Outcome::StuckAt { term: e, .. } | Outcome::FuelExhausted(e) => e,
        }
    }

    pub fn is_value(&self) -> bool {
        matches!(self, Outcome::Value(_))
    }

    pub fn is_stuck(&self) -> bool {
        matches!(self, Outcome::StuckAt { .. })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Outcome::Value(_) => "value",
            Outcome::StuckAt { .. } => "stuck",
            Outcome::FuelExhausted(_) => "fuel-exhausted",
        }
    }
}

impl<E: fmt::Display> fmt::Display for Outcome<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Value(v) => write!(f, "value {v}"),
            Outcome::StuckAt { term, reason, focus } => write!(f, "stuck ({reason}) at {focus} in {term}"),
            Outcome::FuelExhausted(e) => write!(f, "fuel exhausted at {e}"),
        }
    }
}

/// A full run: every intermediate term with the rule that produced it.
#[derive(Clone, Debug)]
pub struct Run<E> {
    pub start: E,
    pub steps: Vec<(&'static str, E)>,
    pub taken: usize,
    pub outcome: Outcome<E>,
}

impl<E> Run<E> {
    /// Term after `i` steps.
    pub fn term(&self, i: usize) -> &E {
        if i == 0 {
            &self.start
        } else {
            &self.steps[i - 1].1
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Step at most `fuel` times, stopping at the first terminal verdict.
pub fn drive<E: Clone>(start: E, fuel: usize, step: impl Fn(&E) -> StepResult<E>, keep: bool) -> Run<E> {
    let mut steps = Vec::new();
    let mut cur = start.clone();
    let mut taken = 0;
    let outcome = loop {
        match step(&cur) {
            StepResult::AlreadyValue => break Outcome::Value(cur),
            StepResult::Stuck { reason, focus } => break Outcome::StuckAt { term: cur, reason, focus },
            StepResult::Stepped { next, rule } => {
                if taken == fuel {
                    break Outcome::FuelExhausted(cur);
                }
                taken += 1;
                if keep {
                    steps.push((rule, next.clone()));
                }
                cur = next;
            }
        }
    };
    Run { start, steps, taken, outcome }
}
