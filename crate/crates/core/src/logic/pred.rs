use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::name::Name;

/// Reserved name of the refinement value variable ν.
pub const VALUE_VAR: &str = "$v";

pub fn value_var() -> Name {
    Name::new(VALUE_VAR)
}

/// `Σ coeff·var + constant` with integer coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LinTerm {
    pub coeffs: BTreeMap<Name, i64>,
    pub constant: i64,
}

impl LinTerm {
    pub fn constant(k: i64) -> Self {
        LinTerm { coeffs: BTreeMap::new(), constant: k }
    }

    pub fn var(x: Name) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(x, 1);
        LinTerm { coeffs, constant: 0 }
    }

    pub fn as_constant(&self) -> Option<i64> {
        self.coeffs.is_empty().then_some(self.constant)
    }

    pub fn add(&self, other: &LinTerm) -> LinTerm {
        let mut out = self.clone();
        for (x, c) in &other.coeffs {
            let e = out.coeffs.entry(x.clone()).or_insert(0);
            *e = e.wrapping_add(*c);
        }
        out.coeffs.retain(|_, c| *c != 0);
        out.constant = out.constant.wrapping_add(other.constant);
        out
    }

    pub fn scale(&self, k: i64) -> LinTerm {
        if k == 0 {
            return LinTerm::constant(0);
        }
        LinTerm {
            coeffs: self.coeffs.iter().map(|(x, c)| (x.clone(), c.wrapping_mul(k))).collect(),
            constant: self.constant.wrapping_mul(k),
        }
    }

    pub fn sub(&self, other: &LinTerm) -> LinTerm {
        self.add(&other.scale(-1))
    }

    /// Product of two terms, defined only when one side is a constant.
    pub fn mul(&self, other: &LinTerm) -> Option<LinTerm> {
        match (self.as_constant(), other.as_constant()) {
            (Some(k), _) => Some(other.scale(k)),
            (_, Some(k)) => Some(self.scale(k)),
            _ => None,
        }
    }

    pub fn mentions(&self, x: &Name) -> bool {
        self.coeffs.contains_key(x)
    }

    pub fn subst(&self, x: &Name, t: &LinTerm) -> LinTerm {
        match self.coeffs.get(x) {
            None => self.clone(),
            Some(&c) => {
                let mut rest = self.clone();
                rest.coeffs.remove(x);
                rest.add(&t.scale(c))
            }
        }
    }

    pub fn rename(&self, from: &Name, to: &Name) -> LinTerm {
        self.subst(from, &LinTerm::var(to.clone()))
    }

    pub fn eval(&self, ints: &dyn Fn(&Name) -> Option<i64>) -> Option<i64> {
        let mut acc = self.constant as i128;
        for (x, c) in &self.coeffs {
            acc += (*c as i128) * (ints(x)? as i128);
        }
        i64::try_from(acc).ok()
    }
}

impl fmt::Display for LinTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (x, &c) in &self.coeffs {
            let shown = display_name(x);
            let (neg, mag) = (c < 0, c.unsigned_abs());
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if mag == 1 {
                write!(f, "{shown}")?;
            } else {
                write!(f, "{mag}*{shown}")?;
            }
            first = false;
        }
        if first {
            write!(f, "{}", self.constant)
        } else if self.constant > 0 {
            write!(f, " + {}", self.constant)
        } else if self.constant < 0 {
            write!(f, " - {}", self.constant.unsigned_abs())
        } else {
            Ok(())
        }
    }
}

impl fmt::Debug for LinTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub(crate) fn display_name(x: &Name) -> &str {
    if x.as_str() == VALUE_VAR {
        "v"
    } else {
        x.as_str()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CmpOp {
    Lt,
    Le,
    Eq,
    Ne,
    Ge,
    Gt,
}

impl CmpOp {
    pub fn negate(self) -> CmpOp {
        match self {
            CmpOp::Lt => CmpOp::Ge,
            CmpOp::Le => CmpOp::Gt,
            CmpOp::Eq => CmpOp::Ne,
            CmpOp::Ne => CmpOp::Eq,
            CmpOp::Ge => CmpOp::Lt,
            CmpOp::Gt => CmpOp::Le,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Ge => ">=",
            CmpOp::Gt => ">",
        }
    }

    pub fn holds(self, a: i64, b: i64) -> bool {
        match self {
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Eq => a == b,
            CmpOp::Ne => a != b,
            CmpOp::Ge => a >= b,
            CmpOp::Gt => a > b,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Atom {
    LinearCmp { lhs: LinTerm, op: CmpOp, rhs: LinTerm },
    BoolVar(Name),
    BoolLit(bool),
}

/// A term of either logical sort, used as the right-hand side of substitutions.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Term {
    Int(LinTerm),
    Bool(Pred),
}

impl Term {
    pub fn var_int(x: Name) -> Term {
        Term::Int(LinTerm::var(x))
    }
}

/// Application of a refinement variable κ under a pending substitution.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct KappaApp {
    pub id: u32,
    pub subst: Vec<(Name, Term)>,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Pred {
    Atom(Atom),
    Kappa(KappaApp),
    Not(Box<Pred>),
    And(Vec<Pred>),
    Or(Vec<Pred>),
    Implies(Box<Pred>, Box<Pred>),
    Iff(Box<Pred>, Box<Pred>),
}

impl Default for Pred {
    fn default() -> Self {
        Pred::tt()
    }
}

impl Pred {
    pub fn tt() -> Pred {
        Pred::Atom(Atom::BoolLit(true))
    }

    pub fn ff() -> Pred {
        Pred::Atom(Atom::BoolLit(false))
    }

    pub fn lit(b: bool) -> Pred {
        Pred::Atom(Atom::BoolLit(b))
    }

    pub fn bool_var(x: Name) -> Pred {
        Pred::Atom(Atom::BoolVar(x))
    }

    pub fn cmp(lhs: LinTerm, op: CmpOp, rhs: LinTerm) -> Pred {
        Pred::Atom(Atom::LinearCmp { lhs, op, rhs })
    }

    pub fn kappa(id: u32) -> Pred {
        Pred::Kappa(KappaApp { id, subst: Vec::new() })
    }

    pub fn is_true(&self) -> bool {
        matches!(self, Pred::Atom(Atom::BoolLit(true)))
    }

    pub fn is_false(&self) -> bool {
        matches!(self, Pred::Atom(Atom::BoolLit(false)))
    }

    /// Conjunction that flattens nested conjunctions, drops `true`, and
    /// collapses to `false` when any conjunct is `false`.
    pub fn and(ps: impl IntoIterator<Item = Pred>) -> Pred {
        let mut out = Vec::new();
        for p in ps {
            match p {
                Pred::And(qs) => out.extend(qs),
                p if p.is_true() => {}
                p if p.is_false() => return Pred::ff(),
                p => out.push(p),
            }
        }
        match out.len() {
            0 => Pred::tt(),
            1 => out.pop().unwrap(),
            _ => Pred::And(out),
        }
    }

    pub fn or(ps: impl IntoIterator<Item = Pred>) -> Pred {
        let mut out = Vec::new();
        for p in ps {
            match p {
                Pred::Or(qs) => out.extend(qs),
                p if p.is_false() => {}
                p if p.is_true() => return Pred::tt(),
                p => out.push(p),
            }
        }
        match out.len() {
            0 => Pred::ff(),
            1 => out.pop().unwrap(),
            _ => Pred::Or(out),
        }
    }

    pub fn implies(p: Pred, q: Pred) -> Pred {
        Pred::Implies(Box::new(p), Box::new(q))
    }

    pub fn iff(p: Pred, q: Pred) -> Pred {
        Pred::Iff(Box::new(p), Box::new(q))
    }

    /// Negation that flips comparison atoms and literals in place, so
    /// `¬(x ≠ 0)` reads back as `x = 0`.
    pub fn negate(&self) -> Pred {
        match self {
            Pred::Atom(Atom::BoolLit(b)) => Pred::lit(!b),
            Pred::Atom(Atom::LinearCmp { lhs, op, rhs }) => Pred::cmp(lhs.clone(), op.negate(), rhs.clone()),
            Pred::Not(p) => (**p).clone(),
            p => Pred::Not(Box::new(p.clone())),
        }
    }

    pub fn has_kappa(&self) -> bool {
        match self {
            Pred::Atom(_) => false,
            Pred::Kappa(_) => true,
            Pred::Not(p) => p.has_kappa(),
            Pred::And(ps) | Pred::Or(ps) => ps.iter().any(Pred::has_kappa),
            Pred::Implies(p, q) | Pred::Iff(p, q) => p.has_kappa() || q.has_kappa(),
        }
    }

    pub fn mentions(&self, x: &Name) -> bool {
        match self {
            Pred::Atom(Atom::LinearCmp { lhs, rhs, .. }) => lhs.mentions(x) || rhs.mentions(x),
            Pred::Atom(Atom::BoolVar(y)) => y == x,
            Pred::Atom(Atom::BoolLit(_)) => false,
            Pred::Kappa(k) => {
                // An unsubstituted ν is an implicit occurrence of the value variable.
                let implicit_nu = x.as_str() == VALUE_VAR && !k.subst.iter().any(|(y, _)| y == x);
                implicit_nu || k.subst.iter().any(|(_, t)| term_mentions(t, x))
            }
            Pred::Not(p) => p.mentions(x),
            Pred::And(ps) | Pred::Or(ps) => ps.iter().any(|p| p.mentions(x)),
            Pred::Implies(p, q) | Pred::Iff(p, q) => p.mentions(x) || q.mentions(x),
        }
    }

    /// Capture-free substitution (predicates have no binders).
    pub fn subst(&self, x: &Name, t: &Term) -> Pred {
        match self {
            Pred::Atom(Atom::LinearCmp { lhs, op, rhs }) => match t {
                Term::Int(t) => Pred::cmp(lhs.subst(x, t), *op, rhs.subst(x, t)),
                Term::Bool(_) => self.clone(),
            },
            Pred::Atom(Atom::BoolVar(y)) if y == x => match t {
                Term::Bool(p) => p.clone(),
                Term::Int(_) => self.clone(),
            },
            Pred::Atom(_) => self.clone(),
            Pred::Kappa(k) => {
                let mut subst: Vec<(Name, Term)> =
                    k.subst.iter().map(|(y, s)| (y.clone(), term_subst(s, x, t))).collect();
                // ν inside κ is a formal parameter; record a substitution for it
                // only when none is pending yet.
                if x.as_str() == VALUE_VAR && !subst.iter().any(|(y, _)| y == x) {
                    subst.push((x.clone(), t.clone()));
                }
                Pred::Kappa(KappaApp { id: k.id, subst })
            }
            Pred::Not(p) => Pred::Not(Box::new(p.subst(x, t))),
            Pred::And(ps) => Pred::And(ps.iter().map(|p| p.subst(x, t)).collect()),
            Pred::Or(ps) => Pred::Or(ps.iter().map(|p| p.subst(x, t)).collect()),
            Pred::Implies(p, q) => Pred::implies(p.subst(x, t), q.subst(x, t)),
            Pred::Iff(p, q) => Pred::iff(p.subst(x, t), q.subst(x, t)),
        }
    }

    pub fn rename(&self, from: &Name, to: &Name, bool_sort: bool) -> Pred {
        let t = if bool_sort { Term::Bool(Pred::bool_var(to.clone())) } else { Term::var_int(to.clone()) };
        let p = self.subst(from, &t);
        // A name can occur at either sort inside a kappa substitution; rename both.
        if bool_sort {
            p.subst(from, &Term::var_int(to.clone()))
        } else {
            p.subst(from, &Term::Bool(Pred::bool_var(to.clone())))
        }
    }

    /// Replace every κ application by its solution, applying the pending
    /// substitution.
    pub fn instantiate(&self, solve: &dyn Fn(u32) -> Pred) -> Pred {
        match self {
            Pred::Atom(_) => self.clone(),
            Pred::Kappa(k) => {
                let mut p = solve(k.id);
                for (x, t) in &k.subst {
                    p = p.subst(x, t);
                }
                p
            }
            Pred::Not(p) => Pred::Not(Box::new(p.instantiate(solve))),
            Pred::And(ps) => Pred::And(ps.iter().map(|p| p.instantiate(solve)).collect()),
            Pred::Or(ps) => Pred::Or(ps.iter().map(|p| p.instantiate(solve)).collect()),
            Pred::Implies(p, q) => Pred::implies(p.instantiate(solve), q.instantiate(solve)),
            Pred::Iff(p, q) => Pred::iff(p.instantiate(solve), q.instantiate(solve)),
        }
    }

    pub fn kappas(&self, out: &mut Vec<u32>) {
        match self {
            Pred::Atom(_) => {}
            Pred::Kappa(k) => out.push(k.id),
            Pred::Not(p) => p.kappas(out),
            Pred::And(ps) | Pred::Or(ps) => ps.iter().for_each(|p| p.kappas(out)),
            Pred::Implies(p, q) | Pred::Iff(p, q) => {
                p.kappas(out);
                q.kappas(out)
            }
        }
    }

    /// Integer and boolean variables in order of first occurrence.
    pub fn vars(&self, ints: &mut Vec<Name>, bools: &mut Vec<Name>) {
        fn push(v: &mut Vec<Name>, x: &Name) {
            if !v.contains(x) {
                v.push(x.clone());
            }
        }
        match self {
            Pred::Atom(Atom::LinearCmp { lhs, rhs, .. }) => {
                lhs.coeffs.keys().chain(rhs.coeffs.keys()).for_each(|x| push(ints, x));
            }
            Pred::Atom(Atom::BoolVar(x)) => push(bools, x),
            Pred::Atom(Atom::BoolLit(_)) => {}
            Pred::Kappa(k) => {
                for (_, t) in &k.subst {
                    match t {
                        Term::Int(l) => l.coeffs.keys().for_each(|x| push(ints, x)),
                        Term::Bool(p) => p.vars(ints, bools),
                    }
                }
            }
            Pred::Not(p) => p.vars(ints, bools),
            Pred::And(ps) | Pred::Or(ps) => ps.iter().for_each(|p| p.vars(ints, bools)),
            Pred::Implies(p, q) | Pred::Iff(p, q) => {
                p.vars(ints, bools);
                q.vars(ints, bools)
            }
        }
    }

    /// Evaluate under a total store; `None` when a variable is unassigned or a
    /// κ is present.
    pub fn eval(&self, ints: &dyn Fn(&Name) -> Option<i64>, bools: &dyn Fn(&Name) -> Option<bool>) -> Option<bool> {
        Some(match self {
            Pred::Atom(Atom::LinearCmp { lhs, op, rhs }) => op.holds(lhs.eval(ints)?, rhs.eval(ints)?),
            Pred::Atom(Atom::BoolVar(x)) => bools(x)?,
            Pred::Atom(Atom::BoolLit(b)) => *b,
            Pred::Kappa(_) => return None,
            Pred::Not(p) => !p.eval(ints, bools)?,
            Pred::And(ps) => {
                let mut all = true;
                for p in ps {
                    all &= p.eval(ints, bools)?;
                }
                all
            }
            Pred::Or(ps) => {
                let mut any = false;
                for p in ps {
                    any |= p.eval(ints, bools)?;
                }
                any
            }
            Pred::Implies(p, q) => !p.eval(ints, bools)? || q.eval(ints, bools)?,
            Pred::Iff(p, q) => p.eval(ints, bools)? == q.eval(ints, bools)?,
        })
    }

    /// Conjuncts of a (possibly nested) conjunction.
    pub fn conjuncts(&self) -> Vec<&Pred> {
        match self {
            Pred::And(ps) => ps.iter().flat_map(|p| p.conjuncts()).collect(),
            p => vec![p],
        }
    }
}

fn term_mentions(t: &Term, x: &Name) -> bool {
    match t {
        Term::Int(l) => l.mentions(x),
        Term::Bool(p) => p.mentions(x),
    }
}

fn term_subst(s: &Term, x: &Name, t: &Term) -> Term {
    match (s, t) {
        (Term::Int(l), Term::Int(t)) => Term::Int(l.subst(x, t)),
        (Term::Int(l), Term::Bool(_)) => Term::Int(l.clone()),
        (Term::Bool(p), _) => Term::Bool(p.subst(x, t)),
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Int(l) => write!(f, "{l}"),
            Term::Bool(p) => write!(f, "{p}"),
        }
    }
}

// Precedence levels: 0 implication, 1 disjunction, 2 conjunction, 3 negation/atoms.
fn fmt_pred(p: &Pred, prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let paren = |f: &mut fmt::Formatter<'_>, level: u8, body: &dyn Fn(&mut fmt::Formatter<'_>) -> fmt::Result| {
        if level < prec {
            f.write_str("(")?;
            body(f)?;
            f.write_str(")")
        } else {
            body(f)
        }
    };
    match p {
        Pred::Atom(Atom::BoolLit(b)) => write!(f, "{b}"),
        Pred::Atom(Atom::BoolVar(x)) => write!(f, "{}", display_name(x)),
        Pred::Atom(Atom::LinearCmp { lhs, op, rhs }) => {
            paren(f, 3, &|f| write!(f, "{lhs} {} {rhs}", op.symbol()))
        }
        Pred::Kappa(k) => {
            write!(f, "k{}", k.id)?;
            if !k.subst.is_empty() {
                f.write_str("[")?;
                for (i, (x, t)) in k.subst.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{t}/{}", display_name(x))?;
                }
                f.write_str("]")?;
            }
            Ok(())
        }
        Pred::Not(q) => {
            f.write_str("!")?;
            fmt_pred(q, 4, f)
        }
        Pred::And(ps) => paren(f, 2, &|f| {
            for (i, q) in ps.iter().enumerate() {
                if i > 0 {
                    f.write_str(" && ")?;
                }
                fmt_pred(q, 3, f)?;
            }
            Ok(())
        }),
        Pred::Or(ps) => paren(f, 1, &|f| {
            for (i, q) in ps.iter().enumerate() {
                if i > 0 {
                    f.write_str(" || ")?;
                }
                fmt_pred(q, 2, f)?;
            }
            Ok(())
        }),
        Pred::Implies(a, b) => paren(f, 0, &|f| {
            fmt_pred(a, 1, f)?;
            f.write_str(" => ")?;
            fmt_pred(b, 0, f)
        }),
        Pred::Iff(a, b) => {
            let atomic = |p: &Pred| matches!(p, Pred::Atom(Atom::BoolVar(_) | Atom::BoolLit(_)));
            if atomic(a) && atomic(b) {
                paren(f, 3, &|f| {
                    fmt_pred(a, 4, f)?;
                    f.write_str(" = ")?;
                    fmt_pred(b, 4, f)
                })
            } else {
                paren(f, 0, &|f| {
                    fmt_pred(a, 1, f)?;
                    f.write_str(" <=> ")?;
                    fmt_pred(b, 1, f)
                })
            }
        }
    }
}

impl fmt::Display for Pred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_pred(self, 0, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Name {
        Name::new("x")
    }

    #[test]
    fn negation_flips_atoms() {
        let p = Pred::cmp(LinTerm::var(Name::new("flag")), CmpOp::Ne, LinTerm::constant(0));
        assert_eq!(p.negate().to_string(), "flag = 0");
        assert_eq!(p.negate().negate(), p);
    }

    #[test]
    fn display_uses_v_for_value_var() {
        let p = Pred::implies(
            Pred::cmp(LinTerm::var(value_var()), CmpOp::Eq, LinTerm::constant(1)),
            Pred::cmp(LinTerm::var(value_var()), CmpOp::Ne, LinTerm::constant(0)),
        );
        assert_eq!(p.to_string(), "v = 1 => v != 0");
    }

    #[test]
    fn linear_display_and_arith() {
        let t = LinTerm::constant(0).sub(&LinTerm::var(x()));
        assert_eq!(t.to_string(), "-x");
        let u = t.add(&LinTerm::var(Name::new("y")).scale(3)).add(&LinTerm::constant(-2));
        assert_eq!(u.to_string(), "-x + 3*y - 2");
        assert!(LinTerm::var(x()).mul(&LinTerm::var(x())).is_none());
    }

    #[test]
    fn subst_into_kappa_records_nu() {
        let k = Pred::kappa(1).subst(&value_var(), &Term::var_int(Name::new("flag")));
        assert_eq!(k.to_string(), "k1[flag/v]");
        let inst = k.instantiate(&|_| Pred::cmp(LinTerm::var(value_var()), CmpOp::Ne, LinTerm::constant(0)));
        assert_eq!(inst.to_string(), "flag != 0");
    }

    #[test]
    fn and_flattens_and_absorbs() {
        let a = Pred::bool_var(x());
        assert_eq!(Pred::and([Pred::tt(), a.clone()]), a);
        assert!(Pred::and([a.clone(), Pred::ff()]).is_false());
        assert!(Pred::and([]).is_true());
    }
}
