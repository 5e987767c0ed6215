//! Refinement inference: κ templates, Horn clauses from Phase 2, and a
//! Houdini fixpoint over a finite candidate set.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::elab::{elaborate_program_with, ElabConfig, ElabError};
use crate::logic::{valid_with, value_var, Budget, CmpOp, KappaApp, LinTerm, LogicError, Origin, Pred, Vc};
use crate::name::Name;
use crate::par::{self, Strategy};
use crate::refine::{gen_vcs, RefEnv, RefineError};
use crate::syntax::{Base, Prim, Program, SrcExpr, SrcType};
use crate::target::{erase_src, simple_typecheck, ErasedType, TgtExpr};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InferError {
    #[error(transparent)]
    Elab(#[from] ElabError),
    #[error(transparent)]
    Refine(#[from] RefineError),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error("solution does not cover refinement variable k{0}")]
    Uncovered(u32),
}

/// A refinement variable and the program binders it may mention.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KappaVar {
    pub id: u32,
    pub sort: Base,
    pub scope: Vec<Name>,
}

impl fmt::Display for KappaVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sort = match self.sort {
            Base::Number => "number",
            Base::Boolean => "boolean",
        };
        write!(f, "k{} : {sort}", self.id)?;
        if !self.scope.is_empty() {
            let names: Vec<&str> = self.scope.iter().map(|n| n.as_str()).collect();
            write!(f, " over {}", names.join(", "))?;
        }
        Ok(())
    }
}

/// A VC whose refinements may contain κ applications.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HornClause {
    pub vc: Vc,
}

impl HornClause {
    /// Hypotheses followed by the antecedent.
    pub fn body(&self) -> Vec<&Pred> {
        self.vc.hypotheses.iter().chain(std::iter::once(&self.vc.antecedent)).collect()
    }

    pub fn head(&self) -> &Pred {
        &self.vc.consequent
    }

    pub fn instantiate(&self, sol: &Solution) -> Vc {
        let solve = |id: u32| sol.get(id);
        Vc {
            hypotheses: self.vc.hypotheses.iter().map(|h| h.instantiate(&solve)).collect(),
            antecedent: self.vc.antecedent.instantiate(&solve),
            consequent: self.vc.consequent.instantiate(&solve),
            origin: self.vc.origin.clone(),
        }
    }
}

impl fmt::Display for HornClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.vc.fmt(f)
    }
}

/// κ ↦ conjunction of candidates. Missing κs read as `true`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Solution {
    pub assignment: BTreeMap<u32, Vec<Pred>>,
}

impl Solution {
    pub fn get(&self, id: u32) -> Pred {
        self.assignment.get(&id).map(|ps| Pred::and(ps.iter().cloned())).unwrap_or_else(Pred::tt)
    }

    pub fn covers(&self, id: u32) -> bool {
        self.assignment.contains_key(&id)
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, id) in self.assignment.keys().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "k{id} := {}", self.get(*id))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solved {
    Solution(Solution),
    /// The greatest candidate assignment still violates `clause`.
    Unsat { clause: Box<HornClause>, best: Solution },
}

impl Solved {
    pub fn solution(&self) -> Option<&Solution> {
        match self {
            Solved::Solution(s) => Some(s),
            Solved::Unsat { .. } => None,
        }
    }
}

/// Replace every refinement of `t` by a fresh κ, numbering from `kappas.len() + 1`.
pub fn template_type(t: &SrcType, scope: &[Name], kappas: &mut Vec<KappaVar>) -> SrcType {
    t.map_refinements(&mut |b, _| {
        let id = kappas.len() as u32 + 1;
        kappas.push(KappaVar { id, sort: b, scope: scope.to_vec() });
        Pred::kappa(id)
    })
}

/// Template a closed type with κ1, κ2, ... in pre-order.
pub fn make_templates(t: &SrcType) -> SrcType {
    template_type(t, &[], &mut Vec::new())
}

/// Template every annotation, scoping each κ over the enclosing binders.
pub fn template_program(p: &Program) -> (Program, Vec<KappaVar>) {
    fn go(e: &SrcExpr, scope: &mut Vec<Name>, kappas: &mut Vec<KappaVar>) -> SrcExpr {
        match e {
            SrcExpr::Const(_) | SrcExpr::Var(_) => e.clone(),
            SrcExpr::Lam(x, b) => {
                scope.push(x.clone());
                let b = go(b, scope, kappas);
                scope.pop();
                SrcExpr::lam(x.clone(), b)
            }
            SrcExpr::Ascribe(a, t) => {
                let t = template_type(t, scope, kappas);
                SrcExpr::ascribe(go(a, scope, kappas), t)
            }
            SrcExpr::Let(x, a, b) => {
                let a = go(a, scope, kappas);
                scope.push(x.clone());
                let b = go(b, scope, kappas);
                scope.pop();
                SrcExpr::let_(x.clone(), a, b)
            }
            SrcExpr::If(c, t, el) => {
                SrcExpr::if_(go(c, scope, kappas), go(t, scope, kappas), go(el, scope, kappas))
            }
            SrcExpr::App(f, a) => SrcExpr::app(go(f, scope, kappas), go(a, scope, kappas)),
        }
    }
    let mut kappas = Vec::new();
    let main = go(&p.main, &mut Vec::new(), &mut kappas);
    (Program { aliases: Vec::new(), main, binder_spans: p.binder_spans.clone() }, kappas)
}

/// Elaborate and run Phase 2 with κs left opaque. Trivial VCs are dropped.
pub fn gen_horn(p: &Program) -> Result<(TgtExpr, Vec<HornClause>), InferError> {
    gen_horn_with(p, ElabConfig::default())
}

pub fn gen_horn_with(p: &Program, config: ElabConfig) -> Result<(TgtExpr, Vec<HornClause>), InferError> {
    let elab = elaborate_program_with(p, config)?;
    let (_, vcs) = gen_vcs(&RefEnv::new(), &elab.target, None)?;
    let clauses = vcs.into_iter().filter(|vc| !vc.is_trivial()).map(|vc| HornClause { vc }).collect();
    Ok((elab.target, clauses))
}

/// Base types of the binders introduced in a well-typed target term.
pub fn binder_bases(w: &TgtExpr) -> BTreeMap<Name, Base> {
    fn go(w: &TgtExpr, env: &mut BTreeMap<Name, ErasedType>) {
        match w {
            TgtExpr::Const(_) | TgtExpr::Var(_) => {}
            TgtExpr::Lam { param, ann, body } => {
                if let ErasedType::Fun(d, _) = erase_src(ann) {
                    env.insert(param.clone(), *d);
                }
                go(body, env);
            }
            TgtExpr::Let(x, a, b) => {
                go(a, env);
                if let Ok(t) = simple_typecheck(env, a) {
                    env.insert(x.clone(), t);
                }
                go(b, env);
            }
            TgtExpr::Case { scrut, x1, b1, x2, b2 } => {
                go(scrut, env);
                if let Ok(ErasedType::Sum(l, r)) = simple_typecheck(env, scrut) {
                    env.insert(x1.clone(), *l);
                    env.insert(x2.clone(), *r);
                }
                go(b1, env);
                go(b2, env);
            }
            TgtExpr::If(a, b, c) => {
                go(a, env);
                go(b, env);
                go(c, env);
            }
            TgtExpr::App(a, b) | TgtExpr::Pair(a, b) => {
                go(a, env);
                go(b, env);
            }
            TgtExpr::Proj(_, a) => go(a, env),
            TgtExpr::Inj { payload, .. } => go(payload, env),
            TgtExpr::Dead { inner, .. } => go(inner, env),
        }
    }
    let mut env = BTreeMap::new();
    go(w, &mut env);
    env.into_iter()
        .filter_map(|(x, t)| match t {
            ErasedType::Prim(b) => Some((x, b)),
            _ => None,
        })
        .collect()
}

/// Integer literals occurring in a source term.
pub fn int_literals(e: &SrcExpr) -> BTreeSet<i64> {
    fn go(e: &SrcExpr, out: &mut BTreeSet<i64>) {
        match e {
            SrcExpr::Const(Prim::Int(k)) | SrcExpr::Const(Prim::Partial(_, k)) => {
                out.insert(*k);
            }
            SrcExpr::Const(_) | SrcExpr::Var(_) => {}
            SrcExpr::Lam(_, b) | SrcExpr::Ascribe(b, _) => go(b, out),
            SrcExpr::Let(_, a, b) | SrcExpr::App(a, b) => {
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
    let mut out = BTreeSet::new();
    go(e, &mut out);
    out
}

fn comparisons(lhs: &LinTerm, rhs: &LinTerm) -> [Pred; 4] {
    [CmpOp::Eq, CmpOp::Ne, CmpOp::Le, CmpOp::Ge].map(|op| Pred::cmp(lhs.clone(), op, rhs.clone()))
}

/// `{ν = k, ν ≠ k, ν ≤ k, ν ≥ k}` per literal and per in-scope integer binder;
/// `{ν, ¬ν}` for boolean κs.
pub fn default_candidates(kv: &KappaVar, literals: &BTreeSet<i64>, bases: &BTreeMap<Name, Base>) -> Vec<Pred> {
    let nu = value_var();
    match kv.sort {
        Base::Boolean => vec![Pred::bool_var(nu.clone()), Pred::bool_var(nu).negate()],
        Base::Number => {
            let lhs = LinTerm::var(nu);
            let mut out: Vec<Pred> =
                literals.iter().flat_map(|k| comparisons(&lhs, &LinTerm::constant(*k))).collect();
            for x in &kv.scope {
                if bases.get(x) == Some(&Base::Number) {
                    out.extend(comparisons(&lhs, &LinTerm::var(x.clone())));
                }
            }
            out
        }
    }
}

/// Keep the candidates that are well-sorted and well-scoped for `kv`.
pub fn filter_candidates(kv: &KappaVar, preds: &[Pred], bases: &BTreeMap<Name, Base>) -> Vec<Pred> {
    let nu = value_var();
    let ok = |x: &Name, want: Base| {
        if *x == nu {
            kv.sort == want
        } else {
            kv.scope.contains(x) && bases.get(x) == Some(&want)
        }
    };
    preds
        .iter()
        .filter(|p| {
            if p.has_kappa() {
                return false;
            }
            let (mut ints, mut bools) = (Vec::new(), Vec::new());
            p.vars(&mut ints, &mut bools);
            ints.iter().all(|x| ok(x, Base::Number)) && bools.iter().all(|x| ok(x, Base::Boolean))
        })
        .cloned()
        .collect()
}

#[derive(Clone, Copy, Debug)]
pub struct InferConfig {
    pub budget: Budget,
    pub strategy: Strategy,
}

impl Default for InferConfig {
    fn default() -> Self {
        InferConfig { budget: Budget::default(), strategy: Strategy::Parallel }
    }
}

/// One clause with a conjunct-free head: either a single κ or κ-free.
#[derive(Clone, Debug)]
struct Part {
    clause: usize,
    hypotheses: Vec<Pred>,
    antecedent: Pred,
    head: Pred,
    origin: Origin,
}

fn split_head(clause: usize, vc: &Vc) -> Vec<Part> {
    fn go(vc: &Vc, clause: usize, hyps: Vec<Pred>, head: &Pred, out: &mut Vec<Part>) {
        match head {
            Pred::And(ps) => ps.iter().for_each(|p| go(vc, clause, hyps.clone(), p, out)),
            Pred::Implies(g, h) => {
                let mut hyps = hyps;
                hyps.push((**g).clone());
                go(vc, clause, hyps, h, out)
            }
            p if p.is_true() => {}
            p => out.push(Part {
                clause,
                hypotheses: hyps,
                antecedent: vc.antecedent.clone(),
                head: p.clone(),
                origin: vc.origin.clone(),
            }),
        }
    }
    let mut out = Vec::new();
    go(vc, clause, vc.hypotheses.clone(), &vc.consequent, &mut out);
    out
}

fn holds(part: &Part, head: Pred, sol: &Solution, budget: Budget) -> Result<bool, LogicError> {
    let solve = |id: u32| sol.get(id);
    let vc = Vc {
        hypotheses: part.hypotheses.iter().map(|h| h.instantiate(&solve)).collect(),
        antecedent: part.antecedent.instantiate(&solve),
        consequent: head,
        origin: part.origin.clone(),
    };
    // Unknown counts as a failure: Houdini only keeps what it can prove.
    Ok(vc.is_trivial() || valid_with(&vc, budget)?.is_valid())
}

fn head_kappa(p: &Pred) -> Option<&KappaApp> {
    match p {
        Pred::Kappa(k) => Some(k),
        _ => None,
    }
}

/// Greatest conjunctive solution drawn from `candidates`, or the clause that
/// fails even under it.
pub fn houdini_solve(
    clauses: &[HornClause],
    candidates: &BTreeMap<u32, Vec<Pred>>,
    config: InferConfig,
) -> Result<Solved, InferError> {
    let mut sol = Solution { assignment: candidates.clone() };
    for c in clauses {
        let mut ks = Vec::new();
        c.vc.formula().kappas(&mut ks);
        for k in ks {
            sol.assignment.entry(k).or_default();
        }
    }
    let parts: Vec<Part> = clauses.iter().enumerate().flat_map(|(i, c)| split_head(i, &c.vc)).collect();
    let (definite, concrete): (Vec<&Part>, Vec<&Part>) = parts.iter().partition(|p| head_kappa(&p.head).is_some());
    loop {
        let drops = par::map(config.strategy, &definite, |part| -> Result<Vec<(u32, Pred)>, LogicError> {
            let k = head_kappa(&part.head).expect("definite clause");
            let current = part.head.instantiate(&|id| sol.get(id));
            if holds(part, current, &sol, config.budget)? {
                return Ok(Vec::new());
            }
            let mut out = Vec::new();
            for c in &sol.assignment[&k.id] {
                let inst = part.head.instantiate(&|_| c.clone());
                if !holds(part, inst, &sol, config.budget)? {
                    out.push((k.id, c.clone()));
                }
            }
            Ok(out)
        });
        let mut changed = false;
        for d in drops {
            for (id, c) in d? {
                let set = sol.assignment.get_mut(&id).expect("κ in assignment");
                if let Some(i) = set.iter().position(|q| *q == c) {
                    set.remove(i);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let checks = par::map(config.strategy, &concrete, |part| {
        let head = part.head.instantiate(&|id| sol.get(id));
        holds(part, head, &sol, config.budget)
    });
    for (part, ok) in concrete.iter().zip(checks) {
        if !ok? {
            return Ok(Solved::Unsat { clause: Box::new(clauses[part.clause].clone()), best: sol });
        }
    }
    Ok(Solved::Solution(sol))
}

/// Plug a solution into every κ of the program's annotations.
pub fn apply_solution(p: &Program, sol: &Solution) -> Result<Program, InferError> {
    for t in p.main.annotations() {
        let mut rs = Vec::new();
        t.refinements(&mut rs);
        let mut ks = Vec::new();
        rs.iter().for_each(|r| r.kappas(&mut ks));
        if let Some(k) = ks.into_iter().find(|k| !sol.covers(*k)) {
            return Err(InferError::Uncovered(k));
        }
    }
    let main = p.main.map_types(&mut |t| t.map_refinements(&mut |_, r| r.instantiate(&|id| sol.get(id))));
    Ok(Program { aliases: p.aliases.clone(), main, binder_spans: p.binder_spans.clone() })
}

#[derive(Clone, Debug)]
pub struct Inference {
    pub templated: Program,
    pub kappas: Vec<KappaVar>,
    pub target: TgtExpr,
    pub clauses: Vec<HornClause>,
    pub candidates: BTreeMap<u32, Vec<Pred>>,
    pub outcome: Solved,
    /// The source program with the solution plugged in, when solvable.
    pub annotated: Option<Program>,
}

/// Template, generate clauses and solve. `preds` overrides the default candidates.
pub fn infer_program(p: &Program, preds: Option<&[Pred]>, config: InferConfig) -> Result<Inference, InferError> {
    let (templated, kappas) = template_program(p);
    let (target, clauses) = gen_horn(&templated)?;
    let bases = binder_bases(&target);
    let literals = int_literals(&p.main);
    let candidates: BTreeMap<u32, Vec<Pred>> = kappas
        .iter()
        .map(|kv| {
            let cs = match preds {
                Some(ps) => filter_candidates(kv, ps, &bases),
                None => default_candidates(kv, &literals, &bases),
            };
            (kv.id, cs)
        })
        .collect();
    let outcome = houdini_solve(&clauses, &candidates, config)?;
    let annotated = match outcome.solution() {
        Some(sol) => Some(apply_solution(&templated, sol)?),
        None => None,
    };
    Ok(Inference { templated, kappas, target, clauses, candidates, outcome, annotated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::OriginKind;
    use crate::syntax::parse_type;

    fn clause(hyps: Vec<Pred>, ante: Pred, head: Pred) -> HornClause {
        HornClause {
            vc: Vc {
                hypotheses: hyps,
                antecedent: ante,
                consequent: head,
                origin: Origin { kind: OriginKind::Expected, site: String::new(), within: None },
            },
        }
    }

    fn nu_cmp(op: CmpOp, k: i64) -> Pred {
        Pred::cmp(LinTerm::var(value_var()), op, LinTerm::constant(k))
    }

    #[test]
    fn templates_follow_preorder() {
        let t = parse_type("(number -> number -> number) /\\ (number -> boolean -> boolean)", &[]).unwrap();
        assert_eq!(
            make_templates(&t).to_string(),
            "({v:number | k1} -> {v:number | k2} -> {v:number | k3}) /\\ ({v:number | k4} -> {v:boolean | k5} -> {v:boolean | k6})"
        );
        assert_eq!(make_templates(&SrcType::number()).to_string(), "{v:number | k1}");
    }

    #[test]
    fn retemplating_is_positional() {
        let t = parse_type("number -> boolean", &[]).unwrap();
        let mut ks = Vec::new();
        let once = template_type(&t, &[], &mut ks);
        let twice = template_type(&once, &[], &mut ks);
        assert_eq!(twice.to_string(), "{v:number | k3} -> {v:boolean | k4}");
        assert!(twice.shape_eq(&once));
    }

    #[test]
    fn contradictory_clause_is_unsat() {
        let c = clause(vec![], Pred::tt(), Pred::ff());
        let r = houdini_solve(&[c], &BTreeMap::new(), InferConfig::default()).unwrap();
        assert!(matches!(r, Solved::Unsat { .. }));
    }

    #[test]
    fn empty_candidates_give_true() {
        let c = clause(vec![], nu_cmp(CmpOp::Eq, 1), Pred::kappa(1));
        let r = houdini_solve(&[c], &BTreeMap::from([(1, vec![])]), InferConfig::default()).unwrap();
        assert_eq!(r.solution().unwrap().get(1), Pred::tt());
    }

    #[test]
    fn weakening_drops_only_refuted_candidates() {
        let cands = vec![nu_cmp(CmpOp::Eq, 0), nu_cmp(CmpOp::Ne, 0), nu_cmp(CmpOp::Eq, 1)];
        let cs = [
            clause(vec![], nu_cmp(CmpOp::Eq, 1), Pred::kappa(1)),
            clause(vec![], nu_cmp(CmpOp::Eq, 2), Pred::kappa(1)),
        ];
        let r = houdini_solve(&cs, &BTreeMap::from([(1, cands)]), InferConfig::default()).unwrap();
        assert_eq!(r.solution().unwrap().get(1).to_string(), "v != 0");
    }
}
