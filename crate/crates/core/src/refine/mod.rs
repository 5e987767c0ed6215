//! Phase 2: refinement checking of target terms and VC generation.

use std::collections::BTreeMap;

use crate::logic::{
    embed_bool, embed_term, valid_with, value_var, Budget, CmpOp, LinTerm, LogicError, Origin, OriginKind, Pred,
    Term, Verdict, Vc,
};
use crate::name::{Fresh, Name};
use crate::par::{self, Strategy};
use crate::syntax::{Base, SrcType};
use crate::target::{elab_type_with, fbot, ftx, simple_typecheck, strip, ErasedType, RefType, TgtExpr, TypeError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RefineError {
    #[error("refinement checking requires a simply-typed skeleton: {0}")]
    PhaseOrder(#[from] TypeError),
    #[error("subtyping between different shapes: {left} and {right}")]
    ShapeMismatch { left: String, right: String },
    #[error("unbound variable `{0}` in refinement checking")]
    Unbound(Name),
    #[error(transparent)]
    Logic(#[from] LogicError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Entry {
    Bind(Name, RefType),
    Guard(Pred),
}

/// Ordered environment of binders and branch guards.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RefEnv {
    pub entries: Vec<Entry>,
}

impl RefEnv {
    pub fn new() -> RefEnv {
        RefEnv::default()
    }

    pub fn bind(mut self, x: impl Into<Name>, t: RefType) -> RefEnv {
        self.entries.push(Entry::Bind(x.into(), t));
        self
    }

    pub fn guard(mut self, p: Pred) -> RefEnv {
        self.entries.push(Entry::Guard(p));
        self
    }

    pub fn lookup(&self, x: &Name) -> Option<&RefType> {
        self.entries.iter().rev().find_map(|e| match e {
            Entry::Bind(y, t) if y == x => Some(t),
            _ => None,
        })
    }

    fn sort(&self, x: &Name) -> Option<Base> {
        match self.lookup(x)? {
            RefType::Base(b, _) => Some(*b),
            _ => None,
        }
    }

    /// `⟦Γ⟧`: guards, and base binder refinements with ν replaced by the binder.
    pub fn flatten(&self) -> Vec<Pred> {
        self.entries
            .iter()
            .filter_map(|e| match e {
                Entry::Guard(p) => Some(p.clone()),
                Entry::Bind(x, RefType::Base(b, p)) => Some(p.subst(&value_var(), &var_term(x, *b))),
                Entry::Bind(..) => None,
            })
            .collect()
    }

    pub fn erased(&self) -> BTreeMap<Name, ErasedType> {
        self.entries
            .iter()
            .filter_map(|e| match e {
                Entry::Bind(x, t) => Some((x.clone(), strip(t))),
                Entry::Guard(_) => None,
            })
            .collect()
    }
}

fn var_term(x: &Name, b: Base) -> Term {
    match b {
        Base::Number => Term::Int(LinTerm::var(x.clone())),
        Base::Boolean => Term::Bool(Pred::bool_var(x.clone())),
    }
}

/// `self(T, x)`: `{b | ν = x}` at base types, `T` otherwise.
pub fn selfify(t: &RefType, x: &Name) -> RefType {
    match t {
        RefType::Base(Base::Number, _) => {
            RefType::Base(Base::Number, Pred::cmp(LinTerm::var(value_var()), CmpOp::Eq, LinTerm::var(x.clone())))
        }
        RefType::Base(Base::Boolean, _) => {
            RefType::Base(Base::Boolean, Pred::iff(Pred::bool_var(value_var()), Pred::bool_var(x.clone())))
        }
        other => other.clone(),
    }
}

/// `DEAD(τ,σ) :: fbot|τ| -> fbot|σ|`.
pub fn dead_type(from: &SrcType, to: &SrcType, fresh: &mut Fresh) -> RefType {
    let x = fresh.name("d");
    RefType::fun(x, fbot(&elab_type_with(from, fresh)), fbot(&elab_type_with(to, fresh)))
}

fn is_uninhabited(t: &RefType) -> bool {
    matches!(t, RefType::Base(_, p) if p.is_false())
}

/// Drop what a refinement says about `x`, keeping the result sound for the
/// given polarity (true = covariant position).
fn forget_pred(p: &Pred, x: &Name, positive: bool) -> Pred {
    if !p.mentions(x) {
        return p.clone();
    }
    match p {
        Pred::And(ps) if positive => Pred::and(ps.iter().filter(|q| !q.mentions(x)).cloned()),
        Pred::Or(ps) if !positive => Pred::or(ps.iter().filter(|q| !q.mentions(x)).cloned()),
        _ => Pred::lit(positive),
    }
}

fn forget(t: &RefType, x: &Name, positive: bool) -> RefType {
    match t {
        RefType::Base(b, p) => RefType::Base(*b, forget_pred(p, x, positive)),
        RefType::Fun { binder, dom, cod } => {
            RefType::fun(binder.clone(), forget(dom, x, !positive), forget(cod, x, positive))
        }
        RefType::Sum(a, b) => RefType::sum(forget(a, x, positive), forget(b, x, positive)),
        RefType::Prod(a, b) => RefType::prod(forget(a, x, positive), forget(b, x, positive)),
    }
}

/// Rename the arrow binder of `t2` to that of `t1`.
fn align_binder(binder1: &Name, binder2: &Name, dom: &RefType, cod2: &RefType) -> RefType {
    match dom {
        RefType::Base(b, _) if binder1 != binder2 => cod2.subst(binder2, &var_term(binder1, *b)),
        _ => cod2.clone(),
    }
}

/// Least upper bound under the branch guards `g1` (first) and `g2` (second).
fn join(t1: &RefType, t2: &RefType, g1: &Pred, g2: &Pred) -> RefType {
    match (t1, t2) {
        (RefType::Base(b, p1), RefType::Base(_, p2)) => {
            if p1 == p2 {
                return t1.clone();
            }
            let p = Pred::or([Pred::and([g1.clone(), p1.clone()]), Pred::and([g2.clone(), p2.clone()])]);
            RefType::Base(*b, p)
        }
        (RefType::Fun { binder, dom: d1, cod: c1 }, RefType::Fun { binder: b2, dom: d2, cod: c2 }) => {
            let c2 = align_binder(binder, b2, d2, c2);
            RefType::fun(binder.clone(), meet(d1, d2, g1, g2), join(c1, &c2, g1, g2))
        }
        (RefType::Sum(a1, b1), RefType::Sum(a2, b2)) => RefType::sum(join(a1, a2, g1, g2), join(b1, b2, g1, g2)),
        (RefType::Prod(a1, b1), RefType::Prod(a2, b2)) => RefType::prod(join(a1, a2, g1, g2), join(b1, b2, g1, g2)),
        _ => ftx(t1, &Pred::tt()),
    }
}

fn meet(t1: &RefType, t2: &RefType, g1: &Pred, g2: &Pred) -> RefType {
    match (t1, t2) {
        (RefType::Base(b, p1), RefType::Base(_, p2)) => {
            if p1 == p2 {
                return t1.clone();
            }
            let p = Pred::and([Pred::implies(g1.clone(), p1.clone()), Pred::implies(g2.clone(), p2.clone())]);
            RefType::Base(*b, p)
        }
        (RefType::Fun { binder, dom: d1, cod: c1 }, RefType::Fun { binder: b2, dom: d2, cod: c2 }) => {
            let c2 = align_binder(binder, b2, d2, c2);
            RefType::fun(binder.clone(), join(d1, d2, g1, g2), meet(c1, &c2, g1, g2))
        }
        (RefType::Sum(a1, b1), RefType::Sum(a2, b2)) => RefType::sum(meet(a1, a2, g1, g2), meet(b1, b2, g1, g2)),
        (RefType::Prod(a1, b1), RefType::Prod(a2, b2)) => RefType::prod(meet(a1, a2, g1, g2), meet(b1, b2, g1, g2)),
        _ => ftx(t1, &Pred::ff()),
    }
}

fn site_text(w: &TgtExpr) -> String {
    let s = w.to_string();
    if s.chars().count() > 100 {
        s.chars().take(97).collect::<String>() + "..."
    } else {
        s
    }
}

/// The refinement checker. Collects VCs; discharging them is separate.
pub struct Checker {
    env: RefEnv,
    fresh: Fresh,
    within: Vec<String>,
    pub vcs: Vec<Vc>,
}

type R<T> = Result<T, RefineError>;

impl Checker {
    pub fn new(env: RefEnv) -> Checker {
        Checker { env, fresh: Fresh::new(), within: Vec::new(), vcs: Vec::new() }
    }

    fn origin(&self, kind: OriginKind, site: &TgtExpr) -> Origin {
        Origin { kind, site: site_text(site), within: self.within.last().cloned() }
    }

    fn scoped<T>(&mut self, entries: Vec<Entry>, f: impl FnOnce(&mut Self) -> R<T>) -> R<T> {
        let mark = self.env.entries.len();
        self.env.entries.extend(entries);
        let r = f(self);
        self.env.entries.truncate(mark);
        r
    }

    /// `Γ ⊢ T1 <: T2`, emitting one VC per base-type pair.
    pub fn subtype(&mut self, t1: &RefType, t2: &RefType, origin: &Origin) -> R<()> {
        match (t1, t2) {
            (RefType::Base(b1, p), RefType::Base(b2, q)) if b1 == b2 => {
                self.vcs.push(Vc {
                    hypotheses: self.env.flatten(),
                    antecedent: p.clone(),
                    consequent: q.clone(),
                    origin: origin.clone(),
                });
                Ok(())
            }
            (RefType::Fun { binder: x1, dom: d1, cod: c1 }, RefType::Fun { binder: x2, dom: d2, cod: c2 }) => {
                self.subtype(d2, d1, origin)?;
                let c1 = align_binder(x2, x1, d1, c1);
                self.scoped(vec![Entry::Bind(x2.clone(), (**d2).clone())], |ck| ck.subtype(&c1, c2, origin))
            }
            (RefType::Sum(a1, b1), RefType::Sum(a2, b2)) | (RefType::Prod(a1, b1), RefType::Prod(a2, b2)) => {
                self.subtype(a1, a2, origin)?;
                self.subtype(b1, b2, origin)
            }
            _ => Err(RefineError::ShapeMismatch { left: t1.to_string(), right: t2.to_string() }),
        }
    }

    fn embed(&self, w: &TgtExpr) -> Option<Term> {
        embed_term(w, &|x| self.env.sort(x))
    }

    /// Guards for the two branches of a conditional on `c : tc`.
    fn guards(&self, c: &TgtExpr, tc: &RefType) -> (Pred, Pred) {
        if let Some(p) = embed_bool(c, &|x| self.env.sort(x)) {
            let q = p.negate();
            return (p, q);
        }
        match tc {
            RefType::Base(Base::Boolean, r) => (
                r.subst(&value_var(), &Term::Bool(Pred::tt())),
                r.subst(&value_var(), &Term::Bool(Pred::ff())),
            ),
            _ => (Pred::tt(), Pred::tt()),
        }
    }

    /// Type of a bound term once its binder goes out of scope.
    fn escape(&self, t: &RefType, x: &Name, bound: Option<Term>) -> RefType {
        if !t.mentions(x) {
            return t.clone();
        }
        match bound {
            Some(term) => t.subst(x, &term),
            None => forget(t, x, true),
        }
    }

    pub fn synth(&mut self, w: &TgtExpr) -> R<RefType> {
        match w {
            TgtExpr::Const(c) => Ok(c.ref_type(&mut self.fresh)),
            TgtExpr::Var(x) => {
                let t = self.env.lookup(x).ok_or_else(|| RefineError::Unbound(x.clone()))?;
                Ok(selfify(t, x))
            }
            TgtExpr::Lam { param, ann, body } => {
                let t = elab_type_with(ann, &mut self.fresh);
                let RefType::Fun { binder, dom, cod } = &t else {
                    return Err(RefineError::PhaseOrder(TypeError::IllTyped {
                        node: site_text(w),
                        expected: "an arrow annotation".into(),
                        actual: ann.to_string(),
                    }));
                };
                let cod = align_binder(param, binder, dom, cod);
                self.scoped(vec![Entry::Bind(param.clone(), (**dom).clone())], |ck| ck.check(body, &cod))?;
                Ok(RefType::fun(param.clone(), (**dom).clone(), cod))
            }
            TgtExpr::App(f, a) => {
                let tf = self.synth(f)?;
                let RefType::Fun { binder, dom, cod } = tf else {
                    return Err(RefineError::ShapeMismatch { left: tf.to_string(), right: "a function".into() });
                };
                let ta = self.synth(a)?;
                self.subtype(&ta, &dom, &self.origin(OriginKind::Argument, w))?;
                Ok(self.apply(&binder, &cod, a, &ta))
            }
            TgtExpr::Dead { from, to, inner } => {
                let RefType::Fun { binder, dom, cod } = dead_type(from, to, &mut self.fresh) else { unreachable!() };
                let ta = self.synth(inner)?;
                self.subtype(&ta, &dom, &self.origin(OriginKind::DeadCast, w))?;
                Ok(self.apply(&binder, &cod, inner, &ta))
            }
            TgtExpr::If(c, t, e) => {
                let tc = self.synth(c)?;
                let (g1, g2) = self.guards(c, &tc);
                let t1 = self.scoped(vec![Entry::Guard(g1.clone())], |ck| ck.synth(t))?;
                let t2 = self.scoped(vec![Entry::Guard(g2.clone())], |ck| ck.synth(e))?;
                Ok(join(&t1, &t2, &g1, &g2))
            }
            TgtExpr::Let(x, a, b) => {
                let ta = self.synth(a)?;
                let bound = self.embed(a);
                self.within.push(x.to_string());
                let tb = self.scoped(vec![Entry::Bind(x.clone(), ta)], |ck| {
                    ck.within.pop();
                    ck.synth(b)
                });
                Ok(self.escape(&tb?, x, bound))
            }
            TgtExpr::Pair(a, b) => Ok(RefType::prod(self.synth(a)?, self.synth(b)?)),
            TgtExpr::Proj(k, a) => match self.synth(a)? {
                RefType::Prod(l, r) => Ok(if *k == 1 { *l } else { *r }),
                t => Err(RefineError::ShapeMismatch { left: t.to_string(), right: "a product".into() }),
            },
            TgtExpr::Inj { k, ann, payload } => {
                let tp = self.synth(payload)?;
                let SrcType::Or(l, r) = ann else {
                    return Err(RefineError::ShapeMismatch { left: ann.to_string(), right: "a union".into() });
                };
                Ok(if *k == 1 {
                    RefType::sum(tp, fbot(&elab_type_with(r, &mut self.fresh)))
                } else {
                    RefType::sum(fbot(&elab_type_with(l, &mut self.fresh)), tp)
                })
            }
            TgtExpr::Case { scrut, x1, b1, x2, b2 } => {
                let RefType::Sum(l, r) = self.synth(scrut)? else {
                    return Err(RefineError::ShapeMismatch { left: site_text(scrut), right: "a sum".into() });
                };
                let t1 = self.scoped(vec![Entry::Bind(x1.clone(), *l)], |ck| ck.synth(b1))?;
                let t2 = self.scoped(vec![Entry::Bind(x2.clone(), *r)], |ck| ck.synth(b2))?;
                let t1 = self.escape(&t1, x1, None);
                let t2 = self.escape(&t2, x2, None);
                Ok(join(&t1, &t2, &Pred::tt(), &Pred::tt()))
            }
        }
    }

    /// R-App result type: `[a/x]cod` inside the logic, weakened outside it.
    fn apply(&mut self, binder: &Name, cod: &RefType, a: &TgtExpr, ta: &RefType) -> RefType {
        if is_uninhabited(ta) {
            return fbot(cod);
        }
        if !cod.mentions(binder) {
            return cod.clone();
        }
        match self.embed(a) {
            Some(t) => cod.subst(binder, &t),
            None => forget(cod, binder, true),
        }
    }

    pub fn check(&mut self, w: &TgtExpr, expected: &RefType) -> R<()> {
        match (w, expected) {
            (TgtExpr::If(c, t, e), _) => {
                let tc = self.synth(c)?;
                let (g1, g2) = self.guards(c, &tc);
                self.scoped(vec![Entry::Guard(g1)], |ck| ck.check(t, expected))?;
                self.scoped(vec![Entry::Guard(g2)], |ck| ck.check(e, expected))
            }
            (TgtExpr::Let(x, a, b), _) => {
                let ta = self.synth(a)?;
                self.scoped(vec![Entry::Bind(x.clone(), ta)], |ck| ck.check(b, expected))
            }
            (TgtExpr::Case { scrut, x1, b1, x2, b2 }, _) => {
                let RefType::Sum(l, r) = self.synth(scrut)? else {
                    return Err(RefineError::ShapeMismatch { left: site_text(scrut), right: "a sum".into() });
                };
                self.scoped(vec![Entry::Bind(x1.clone(), *l)], |ck| ck.check(b1, expected))?;
                self.scoped(vec![Entry::Bind(x2.clone(), *r)], |ck| ck.check(b2, expected))
            }
            (TgtExpr::Lam { param, ann, body }, RefType::Fun { binder, dom, cod }) => {
                // An annotation equal to the expected arrow needs no subtyping.
                if let RefType::Fun { binder: b2, dom: d2, cod: c2 } = elab_type_with(ann, &mut self.fresh) {
                    let cod = align_binder(param, binder, dom, cod);
                    if *d2 == **dom && align_binder(param, &b2, &d2, &c2) == cod {
                        let entry = Entry::Bind(param.clone(), (**dom).clone());
                        return self.scoped(vec![entry], |ck| ck.check(body, &cod));
                    }
                }
                let t = self.synth(w)?;
                self.subtype(&t, expected, &self.origin(OriginKind::Expected, w))
            }
            (TgtExpr::Pair(a, b), RefType::Prod(ta, tb)) => {
                self.check(a, ta)?;
                self.check(b, tb)
            }
            _ => {
                let t = self.synth(w)?;
                self.subtype(&t, expected, &self.origin(OriginKind::Expected, w))
            }
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RefineConfig {
    pub budget: Budget,
    pub strategy: Strategy,
}

impl Default for RefineConfig {
    fn default() -> Self {
        RefineConfig { budget: Budget::default(), strategy: Strategy::Parallel }
    }
}

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub ty: RefType,
    pub vcs: Vec<Vc>,
    pub verdicts: Vec<Verdict>,
}

impl CheckReport {
    pub fn accepted(&self) -> bool {
        self.verdicts.iter().all(Verdict::is_valid)
    }

    /// Non-trivial VCs with their verdicts.
    pub fn obligations(&self) -> Vec<(&Vc, &Verdict)> {
        self.vcs.iter().zip(&self.verdicts).filter(|(vc, _)| !vc.is_trivial()).collect()
    }

    pub fn failures(&self) -> Vec<(&Vc, &Verdict)> {
        self.vcs.iter().zip(&self.verdicts).filter(|(_, v)| !v.is_valid()).collect()
    }
}

/// Generate VCs without discharging them.
pub fn gen_vcs(env: &RefEnv, w: &TgtExpr, expected: Option<&RefType>) -> Result<(RefType, Vec<Vc>), RefineError> {
    simple_typecheck(&env.erased(), w)?;
    let mut ck = Checker::new(env.clone());
    let ty = match expected {
        Some(t) => {
            ck.check(w, t)?;
            t.clone()
        }
        None => ck.synth(w)?,
    };
    Ok((ty, ck.vcs))
}

pub fn discharge(vcs: &[Vc], config: RefineConfig) -> Result<Vec<Verdict>, RefineError> {
    let verdicts = par::map(config.strategy, vcs, |vc| {
        if vc.is_trivial() {
            Ok(Verdict::Valid)
        } else {
            valid_with(vc, config.budget)
        }
    });
    Ok(verdicts.into_iter().collect::<Result<Vec<_>, _>>()?)
}

pub fn check_refined(env: &RefEnv, w: &TgtExpr, expected: Option<&RefType>) -> Result<CheckReport, RefineError> {
    check_refined_with(env, w, expected, RefineConfig::default())
}

pub fn check_refined_with(
    env: &RefEnv,
    w: &TgtExpr,
    expected: Option<&RefType>,
    config: RefineConfig,
) -> Result<CheckReport, RefineError> {
    let (ty, vcs) = gen_vcs(env, w, expected)?;
    let verdicts = discharge(&vcs, config)?;
    Ok(CheckReport { ty, vcs, verdicts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::valid;
    use crate::syntax::Prim;

    fn num(p: Pred) -> RefType {
        RefType::Base(Base::Number, p)
    }

    fn nu_eq(k: i64) -> Pred {
        Pred::cmp(LinTerm::var(value_var()), CmpOp::Eq, LinTerm::constant(k))
    }

    #[test]
    fn constants_synthesize_exact_types() {
        let r = check_refined(&RefEnv::new(), &TgtExpr::int(5), None).unwrap();
        assert_eq!(r.ty.to_string(), "{number | v = 5}");
        assert!(r.vcs.is_empty());
    }

    #[test]
    fn selfify_is_idempotent() {
        let x = Name::new("flag");
        let t = num(Pred::cmp(LinTerm::var(value_var()), CmpOp::Ne, LinTerm::constant(0)));
        let s = selfify(&t, &x);
        assert_eq!(s.to_string(), "{number | v = flag}");
        assert_eq!(selfify(&s, &x), s);
        let f = RefType::fun(Name::new("$d0"), RefType::top(Base::Number), RefType::top(Base::Number));
        assert_eq!(selfify(&f, &x), f);
    }

    #[test]
    fn dead_types_use_fbot() {
        let mut fresh = Fresh::new();
        let t = dead_type(&SrcType::number(), &SrcType::boolean(), &mut fresh);
        assert_eq!(t.to_string(), "{number | false} -> {boolean | false}");
        let nn = SrcType::fun(SrcType::number(), SrcType::number());
        let t = dead_type(&SrcType::number(), &nn, &mut fresh);
        assert_eq!(t.to_string(), "{number | false} -> number -> {number | false}");
    }

    #[test]
    fn dead_under_inconsistent_guards_is_valid() {
        let flag = Name::new("flag");
        let ne0 = Pred::cmp(LinTerm::var(value_var()), CmpOp::Ne, LinTerm::constant(0));
        let env = RefEnv::new()
            .bind(flag.clone(), num(ne0))
            .bind("x", RefType::top(Base::Number))
            .guard(Pred::cmp(LinTerm::var(flag), CmpOp::Eq, LinTerm::constant(0)));
        let w = TgtExpr::dead(SrcType::number(), SrcType::boolean(), TgtExpr::var("x"));
        let r = check_refined(&env, &w, None).unwrap();
        assert_eq!(r.vcs.len(), 1);
        assert_eq!(r.vcs[0].to_string(), "(flag != 0 && true && flag = 0) => (v = x => false)");
        assert!(r.accepted());
    }

    #[test]
    fn function_subtyping_is_contravariant() {
        let x = Name::new("x");
        let t1 = RefType::fun(x.clone(), RefType::top(Base::Number), num(Pred::cmp(LinTerm::var(value_var()), CmpOp::Eq, LinTerm::var(x.clone()))));
        let t2 = RefType::fun(x.clone(), num(nu_eq(0)), num(Pred::cmp(LinTerm::var(value_var()), CmpOp::Ge, LinTerm::constant(0))));
        let mut ck = Checker::new(RefEnv::new());
        let origin = Origin { kind: OriginKind::Expected, site: String::new(), within: None };
        ck.subtype(&t1, &t2, &origin).unwrap();
        let shown: Vec<String> = ck.vcs.iter().map(|v| v.to_string()).collect();
        assert_eq!(shown, ["(true) => (v = 0 => true)", "(x = 0) => (v = x => v >= 0)"]);
        assert!(ck.vcs.iter().all(|v| valid(v).unwrap().is_valid()));
    }

    #[test]
    fn reflexive_subtyping_is_valid() {
        let t = RefType::prod(num(nu_eq(3)), RefType::sum(num(nu_eq(1)), RefType::top(Base::Boolean)));
        let mut ck = Checker::new(RefEnv::new());
        let origin = Origin { kind: OriginKind::Expected, site: String::new(), within: None };
        ck.subtype(&t, &t, &origin).unwrap();
        assert_eq!(ck.vcs.len(), 3);
        assert!(ck.vcs.iter().all(|v| valid(v).unwrap().is_valid()));
    }

    #[test]
    fn ill_typed_skeleton_is_a_phase_order_error() {
        let w = TgtExpr::app(TgtExpr::int(1), TgtExpr::int(2));
        assert!(matches!(check_refined(&RefEnv::new(), &w, None), Err(RefineError::PhaseOrder(_))));
        let _ = Prim::Int(0);
    }
}
