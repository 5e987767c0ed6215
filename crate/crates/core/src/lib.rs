//! Two-phase typing for value-based overloading.
//!
//! Phase 1 elaborates a source calculus with intersection and union types into
//! a target calculus with products, tagged sums and DEAD-casts. Phase 2 checks
//! refinements on the target and discharges every DEAD-cast through
//! verification conditions.

pub mod elab;
pub mod harness;
pub mod infer;
pub mod logic;
pub mod machine;
pub mod name;
pub mod par;
pub mod refine;
pub mod source_interp;
pub mod syntax;
pub mod target;
pub mod target_interp;

pub use name::Name;
