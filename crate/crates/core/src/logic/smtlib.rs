use std::fmt::Write;

use crate::logic::pred::{Atom, LinTerm, Pred, Term};
use crate::logic::valid::Vc;
use crate::name::Name;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Sort {
    Int,
    Bool,
}

fn collect(p: &Pred, out: &mut Vec<(Name, Sort)>) {
    fn push(out: &mut Vec<(Name, Sort)>, x: &Name, s: Sort) {
        if !out.iter().any(|(y, _)| y == x) {
            out.push((x.clone(), s));
        }
    }
    fn lin(out: &mut Vec<(Name, Sort)>, t: &LinTerm) {
        t.coeffs.keys().for_each(|x| push(out, x, Sort::Int));
    }
    match p {
        Pred::Atom(Atom::LinearCmp { lhs, rhs, .. }) => {
            lin(out, lhs);
            lin(out, rhs);
        }
        Pred::Atom(Atom::BoolVar(x)) => push(out, x, Sort::Bool),
        Pred::Atom(Atom::BoolLit(_)) => {}
        Pred::Kappa(k) => {
            for (_, t) in &k.subst {
                match t {
                    Term::Int(t) => lin(out, t),
                    Term::Bool(q) => collect(q, out),
                }
            }
        }
        Pred::Not(q) => collect(q, out),
        Pred::And(ps) | Pred::Or(ps) => ps.iter().for_each(|q| collect(q, out)),
        Pred::Implies(a, b) | Pred::Iff(a, b) => {
            collect(a, out);
            collect(b, out);
        }
    }
}

fn symbol(x: &Name) -> String {
    let simple = x.chars().all(|c| c.is_ascii_alphanumeric() || "~!@$%^&*_-+=<>.?/".contains(c))
        && !x.starts_with(|c: char| c.is_ascii_digit());
    if simple {
        x.to_string()
    } else {
        format!("|{}|", x.replace('|', "_"))
    }
}

fn int(k: i64) -> String {
    if k < 0 {
        format!("(- {})", k.unsigned_abs())
    } else {
        k.to_string()
    }
}

fn term(t: &LinTerm) -> String {
    let mut parts: Vec<String> = t
        .coeffs
        .iter()
        .map(|(x, c)| if *c == 1 { symbol(x) } else { format!("(* {} {})", int(*c), symbol(x)) })
        .collect();
    if t.constant != 0 || parts.is_empty() {
        parts.push(int(t.constant));
    }
    if parts.len() == 1 {
        parts.pop().unwrap()
    } else {
        format!("(+ {})", parts.join(" "))
    }
}

fn pred(p: &Pred) -> String {
    use crate::logic::pred::CmpOp::*;
    match p {
        Pred::Atom(Atom::BoolLit(b)) => b.to_string(),
        Pred::Atom(Atom::BoolVar(x)) => symbol(x),
        Pred::Atom(Atom::LinearCmp { lhs, op, rhs }) => {
            let (a, b) = (term(lhs), term(rhs));
            match op {
                Lt => format!("(< {a} {b})"),
                Le => format!("(<= {a} {b})"),
                Eq => format!("(= {a} {b})"),
                Ne => format!("(not (= {a} {b}))"),
                Ge => format!("(>= {a} {b})"),
                Gt => format!("(> {a} {b})"),
            }
        }
        // κ applications have no SMT meaning; they are emitted as uninterpreted
        // boolean constants so the file still parses.
        Pred::Kappa(k) => format!("k{}", k.id),
        Pred::Not(q) => format!("(not {})", pred(q)),
        Pred::And(ps) if ps.is_empty() => "true".into(),
        Pred::And(ps) if ps.len() == 1 => pred(&ps[0]),
        Pred::And(ps) => format!("(and {})", ps.iter().map(pred).collect::<Vec<_>>().join(" ")),
        Pred::Or(ps) if ps.is_empty() => "false".into(),
        Pred::Or(ps) if ps.len() == 1 => pred(&ps[0]),
        Pred::Or(ps) => format!("(or {})", ps.iter().map(pred).collect::<Vec<_>>().join(" ")),
        Pred::Implies(a, b) => format!("(=> {} {})", pred(a), pred(b)),
        Pred::Iff(a, b) => format!("(= {} {})", pred(a), pred(b)),
    }
}

/// SMT-LIB2 (QF_LIA) script whose `check-sat` is `unsat` iff the VC is valid.
pub fn to_smtlib(vc: &Vc) -> String {
    let mut vars = Vec::new();
    vc.hypotheses.iter().for_each(|h| collect(h, &mut vars));
    collect(&vc.antecedent, &mut vars);
    collect(&vc.consequent, &mut vars);
    let mut kappas = Vec::new();
    vc.hypotheses.iter().for_each(|h| h.kappas(&mut kappas));
    vc.antecedent.kappas(&mut kappas);
    vc.consequent.kappas(&mut kappas);
    kappas.dedup();

    let mut out = String::new();
    writeln!(out, "; {} at {}", vc.origin.kind.as_str(), vc.origin.site).unwrap();
    out.push_str("(set-logic QF_LIA)\n");
    for (x, s) in &vars {
        let sort = if *s == Sort::Int { "Int" } else { "Bool" };
        writeln!(out, "(declare-const {} {sort})", symbol(x)).unwrap();
    }
    for k in kappas {
        writeln!(out, "(declare-const k{k} Bool)").unwrap();
    }
    let h = pred(&Pred::And(vc.hypotheses.clone()));
    writeln!(out, "(assert (not (=> {h} (=> {} {}))))", pred(&vc.antecedent), pred(&vc.consequent)).unwrap();
    out.push_str("(check-sat)\n");
    out
}
