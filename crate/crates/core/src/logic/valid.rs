use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::logic::fm::{refute, Literal, Refutation};
use crate::logic::pred::{display_name, Atom, Pred};
use crate::logic::LogicError;
use crate::name::Name;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OriginKind {
    /// Argument of a DEAD-cast, i.e. the cast must be unreachable.
    DeadCast,
    /// Actual argument against the callee's domain.
    Argument,
    /// Term against an expected type (lambda bodies, branches, annotations).
    Expected,
}

impl OriginKind {
    pub fn as_str(self) -> &'static str {
        match self {
            OriginKind::DeadCast => "dead-cast",
            OriginKind::Argument => "argument",
            OriginKind::Expected => "expected",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Origin {
    pub kind: OriginKind,
    /// Printed target subterm that produced the obligation.
    pub site: String,
    /// Innermost enclosing source binder, if any.
    pub within: Option<String>,
}

/// `⟦Γ⟧ ⇒ (antecedent ⇒ consequent)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vc {
    pub hypotheses: Vec<Pred>,
    pub antecedent: Pred,
    pub consequent: Pred,
    pub origin: Origin,
}

impl Vc {
    pub fn formula(&self) -> Pred {
        Pred::implies(
            Pred::And(self.hypotheses.clone()),
            Pred::implies(self.antecedent.clone(), self.consequent.clone()),
        )
    }

    /// True for VCs that hold for purely syntactic reasons: a `true`
    /// consequent or a literal `false` among the premises.
    pub fn is_trivial(&self) -> bool {
        self.consequent.is_true() || self.antecedent.is_false() || self.hypotheses.iter().any(Pred::is_false)
    }

    pub fn has_kappa(&self) -> bool {
        self.hypotheses.iter().any(Pred::has_kappa) || self.antecedent.has_kappa() || self.consequent.has_kappa()
    }

    pub fn hypotheses_text(&self) -> String {
        if self.hypotheses.is_empty() {
            return "true".into();
        }
        let parts: Vec<String> = self.hypotheses.iter().map(|h| wrap(h, false)).collect();
        parts.join(" && ")
    }

    /// Canonical text for comparison up to conjunct order: conjuncts are split,
    /// `true` conjuncts dropped, and the remainder sorted.
    pub fn canonical(&self) -> String {
        let mut hs: Vec<String> = self
            .hypotheses
            .iter()
            .flat_map(|h| h.conjuncts().into_iter().cloned().collect::<Vec<_>>())
            .filter(|h| !h.is_true())
            .map(|h| wrap(&h, false))
            .collect();
        hs.sort();
        let h = if hs.is_empty() { "true".to_string() } else { hs.join(" && ") };
        format!("({h}) => ({} => {})", wrap(&self.antecedent, true), wrap(&self.consequent, true))
    }
}

fn wrap(p: &Pred, in_implication: bool) -> String {
    let s = p.to_string();
    let needs = match p {
        Pred::Implies(..) => true,
        Pred::Or(_) | Pred::And(_) => !in_implication,
        _ => false,
    };
    if needs {
        format!("({s})")
    } else {
        s
    }
}

impl fmt::Display for Vc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}) => ({} => {})",
            self.hypotheses_text(),
            wrap(&self.antecedent, true),
            wrap(&self.consequent, true)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    Valid,
    Invalid {
        /// Literals of a satisfiable conjunct of the negated VC.
        witness: Vec<String>,
        /// A concrete counter-assignment when a small search finds one.
        model: Option<BTreeMap<String, String>>,
    },
    Unknown {
        reason: String,
    },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Valid => f.write_str("valid"),
            Verdict::Invalid { model: Some(m), .. } => {
                let parts: Vec<String> = m.iter().map(|(k, v)| format!("{k} = {v}")).collect();
                write!(f, "invalid (counterexample: {})", parts.join(", "))
            }
            Verdict::Invalid { witness, .. } => write!(f, "invalid (satisfiable: {})", witness.join(" && ")),
            Verdict::Unknown { reason } => write!(f, "unknown ({reason})"),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Budget {
    /// Maximum number of DNF conjuncts explored per VC.
    pub clauses: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { clauses: 4096 }
    }
}

/// Negation normal form over literals.
#[derive(Clone, Debug)]
enum Nnf {
    Lit(Literal),
    True,
    False,
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
}

fn nnf(p: &Pred, positive: bool) -> Result<Nnf, LogicError> {
    Ok(match p {
        Pred::Atom(Atom::BoolLit(b)) => {
            if *b == positive {
                Nnf::True
            } else {
                Nnf::False
            }
        }
        Pred::Atom(Atom::BoolVar(x)) => Nnf::Lit(Literal::Bool(x.clone(), positive)),
        Pred::Atom(Atom::LinearCmp { lhs, op, rhs }) => {
            let op = if positive { *op } else { op.negate() };
            Nnf::Lit(Literal::Cmp(lhs.clone(), op, rhs.clone()))
        }
        Pred::Kappa(k) => return Err(LogicError::UnsolvedKappa(k.id)),
        Pred::Not(q) => nnf(q, !positive)?,
        Pred::And(ps) => {
            let parts = ps.iter().map(|q| nnf(q, positive)).collect::<Result<Vec<_>, _>>()?;
            if positive {
                Nnf::And(parts)
            } else {
                Nnf::Or(parts)
            }
        }
        Pred::Or(ps) => {
            let parts = ps.iter().map(|q| nnf(q, positive)).collect::<Result<Vec<_>, _>>()?;
            if positive {
                Nnf::Or(parts)
            } else {
                Nnf::And(parts)
            }
        }
        Pred::Implies(a, b) => {
            if positive {
                Nnf::Or(vec![nnf(a, false)?, nnf(b, true)?])
            } else {
                Nnf::And(vec![nnf(a, true)?, nnf(b, false)?])
            }
        }
        Pred::Iff(a, b) => {
            let (pa, na, pb, nb) = (nnf(a, true)?, nnf(a, false)?, nnf(b, true)?, nnf(b, false)?);
            if positive {
                Nnf::Or(vec![Nnf::And(vec![pa, pb]), Nnf::And(vec![na, nb])])
            } else {
                Nnf::Or(vec![Nnf::And(vec![pa, nb]), Nnf::And(vec![na, pb])])
            }
        }
    })
}

enum Search {
    AllUnsat,
    Sat(Vec<Literal>),
    GaveUp,
}

struct Dnf {
    budget: usize,
    explored: usize,
    gave_up: bool,
}

impl Dnf {
    fn search(&mut self, mut pending: Vec<&Nnf>, lits: &mut Vec<Literal>) -> Result<Search, LogicError> {
        while let Some(f) = pending.pop() {
            match f {
                Nnf::True => {}
                Nnf::False => return Ok(Search::AllUnsat),
                Nnf::Lit(l) => lits.push(l.clone()),
                Nnf::And(ps) => pending.extend(ps.iter()),
                Nnf::Or(ps) => {
                    for q in ps {
                        let mut branch = pending.clone();
                        branch.push(q);
                        let mark = lits.len();
                        let r = self.search(branch, lits)?;
                        lits.truncate(mark);
                        match r {
                            Search::AllUnsat => {}
                            other => return Ok(other),
                        }
                    }
                    return Ok(if self.gave_up { Search::GaveUp } else { Search::AllUnsat });
                }
            }
        }
        self.explored += 1;
        if self.explored > self.budget {
            return Err(LogicError::ResourceLimit { clauses: self.budget });
        }
        Ok(match refute(lits) {
            Refutation::Unsat => Search::AllUnsat,
            Refutation::NotRefuted => Search::Sat(lits.clone()),
            Refutation::GaveUp => {
                self.gave_up = true;
                Search::AllUnsat
            }
        })
    }
}

/// Check validity of an arbitrary κ-free predicate.
pub fn valid_pred(p: &Pred, budget: Budget) -> Result<Verdict, LogicError> {
    let negated = nnf(p, false)?;
    let mut dnf = Dnf { budget: budget.clauses, explored: 0, gave_up: false };
    let mut lits = Vec::new();
    let outcome = dnf.search(vec![&negated], &mut lits)?;
    Ok(match outcome {
        Search::AllUnsat if dnf.gave_up => Verdict::Unknown { reason: "arithmetic limit reached".into() },
        Search::AllUnsat => Verdict::Valid,
        Search::GaveUp => Verdict::Unknown { reason: "arithmetic limit reached".into() },
        Search::Sat(lits) => Verdict::Invalid {
            witness: lits.iter().map(ToString::to_string).collect(),
            model: small_model(&lits),
        },
    })
}

/// Negate the VC, enumerate DNF conjuncts, and refute each one.
pub fn valid(vc: &Vc) -> Result<Verdict, LogicError> {
    valid_with(vc, Budget::default())
}

pub fn valid_with(vc: &Vc, budget: Budget) -> Result<Verdict, LogicError> {
    valid_pred(&vc.formula(), budget)
}

/// Bounded search for a concrete assignment satisfying the literals.
fn small_model(lits: &[Literal]) -> Option<BTreeMap<String, String>> {
    const BOUND: i64 = 16;
    let mut ints: Vec<Name> = Vec::new();
    let mut bools: BTreeMap<Name, bool> = BTreeMap::new();
    for l in lits {
        match l {
            Literal::Cmp(a, _, b) => {
                for x in a.coeffs.keys().chain(b.coeffs.keys()) {
                    if !ints.contains(x) {
                        ints.push(x.clone());
                    }
                }
            }
            Literal::Bool(x, v) => {
                bools.insert(x.clone(), *v);
            }
        }
    }
    if ints.len() > 3 {
        return None;
    }
    let mut values = vec![-BOUND; ints.len()];
    loop {
        let lookup = |x: &Name| ints.iter().position(|y| y == x).map(|i| values[i]);
        let holds = lits.iter().all(|l| match l {
            Literal::Cmp(a, op, b) => match (a.eval(&lookup), b.eval(&lookup)) {
                (Some(a), Some(b)) => op.holds(a, b),
                _ => false,
            },
            Literal::Bool(..) => true,
        });
        if holds {
            let mut m = BTreeMap::new();
            for (x, v) in ints.iter().zip(&values) {
                m.insert(display_name(x).to_string(), v.to_string());
            }
            for (x, v) in &bools {
                m.insert(display_name(x).to_string(), v.to_string());
            }
            return Some(m);
        }
        let mut i = 0;
        loop {
            if i == values.len() {
                return None;
            }
            if values[i] < BOUND {
                values[i] += 1;
                break;
            }
            values[i] = -BOUND;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::pred::{value_var, CmpOp, LinTerm};

    fn var(s: &str) -> LinTerm {
        LinTerm::var(Name::new(s))
    }

    fn nu() -> LinTerm {
        LinTerm::var(value_var())
    }

    fn origin() -> Origin {
        Origin { kind: OriginKind::Argument, site: String::new(), within: None }
    }

    fn vc(h: Vec<Pred>, p: Pred, q: Pred) -> Vc {
        Vc { hypotheses: h, antecedent: p, consequent: q, origin: origin() }
    }

    #[test]
    fn inconsistent_hypotheses_are_valid() {
        let flag = var("flag");
        let v = vc(
            vec![
                Pred::cmp(flag.clone(), CmpOp::Ne, LinTerm::constant(0)),
                Pred::tt(),
                Pred::cmp(flag, CmpOp::Eq, LinTerm::constant(0)),
            ],
            Pred::cmp(nu(), CmpOp::Eq, var("x")),
            Pred::ff(),
        );
        assert_eq!(valid(&v).unwrap(), Verdict::Valid);
        assert_eq!(v.to_string(), "(flag != 0 && true && flag = 0) => (v = x => false)");
    }

    #[test]
    fn call_site_vcs() {
        let ok = vc(
            vec![],
            Pred::cmp(nu(), CmpOp::Eq, LinTerm::constant(1)),
            Pred::cmp(nu(), CmpOp::Ne, LinTerm::constant(0)),
        );
        assert!(valid(&ok).unwrap().is_valid());
        let bad = vc(
            vec![],
            Pred::cmp(nu(), CmpOp::Eq, LinTerm::constant(0)),
            Pred::cmp(nu(), CmpOp::Ne, LinTerm::constant(0)),
        );
        match valid(&bad).unwrap() {
            Verdict::Invalid { model: Some(m), .. } => assert_eq!(m["v"], "0"),
            other => panic!("expected invalid, got {other:?}"),
        }
    }

    #[test]
    fn kappa_is_rejected() {
        let v = vc(vec![], Pred::tt(), Pred::kappa(1));
        assert!(matches!(valid(&v), Err(LogicError::UnsolvedKappa(1))));
    }

    #[test]
    fn budget_is_enforced() {
        // Every conjunct of the negation is refuted, so all 2^14 get explored.
        let mut hs = vec![Pred::bool_var(Name::new("c"))];
        for i in 0..14 {
            hs.push(Pred::or([Pred::bool_var(Name::new(format!("a{i}"))), Pred::bool_var(Name::new(format!("b{i}")))]));
        }
        let v = vc(hs, Pred::tt(), Pred::bool_var(Name::new("c")));
        assert!(matches!(valid_with(&v, Budget { clauses: 100 }), Err(LogicError::ResourceLimit { .. })));
    }
}
