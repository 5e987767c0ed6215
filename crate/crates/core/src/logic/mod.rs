//! Refinement predicates, validity checking, guard embedding, and SMT-LIB2 output.

mod embed;
mod fm;
mod pred;
mod smtlib;
mod valid;

pub use embed::{embed_bool, embed_guard, embed_int, embed_term, Sorts};
pub use fm::{fm_unsat, refute, Literal, Refutation};
pub use pred::{value_var, Atom, CmpOp, KappaApp, LinTerm, Pred, Term, VALUE_VAR};
pub use smtlib::to_smtlib;
pub use valid::{valid, valid_pred, valid_with, Budget, Origin, OriginKind, Verdict, Vc};


#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LogicError {
    #[error("DNF expansion exceeded the budget of {clauses} clauses")]
    ResourceLimit { clauses: usize },
    #[error("refinement variable k{0} has no solution")]
    UnsolvedKappa(u32),
}
