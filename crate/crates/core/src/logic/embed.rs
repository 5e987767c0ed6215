use crate::logic::{Pred, Term};
use crate::logic::LinTerm;
use crate::name::Name;
use crate::syntax::{Base, Op, Prim};
use crate::target::TgtExpr;

/// Sort lookup for variables in scope.
pub type Sorts<'a> = &'a dyn Fn(&Name) -> Option<Base>;

/// Head constant and arguments of a primitive application spine.
fn prim_spine(w: &TgtExpr) -> Option<(Prim, Vec<&TgtExpr>)> {
    let mut args = Vec::new();
    let mut cur = w;
    while let TgtExpr::App(f, a) = cur {
        args.push(&**a);
        cur = f;
    }
    args.reverse();
    match cur {
        TgtExpr::Const(c) => Some((*c, args)),
        _ => None,
    }
}

fn binary(op: Op, a: LinTerm, b: LinTerm) -> Option<Term> {
    Some(match op {
        Op::Add => Term::Int(a.add(&b)),
        Op::Sub => Term::Int(a.sub(&b)),
        Op::Mul => Term::Int(a.mul(&b)?),
        Op::Not => return None,
        cmp => Term::Bool(Pred::cmp(a, cmp.cmp()?, b)),
    })
}

/// Exact embedding of a target expression into the logic, when it lies in the
/// linear fragment.
pub fn embed_term(w: &TgtExpr, sorts: Sorts<'_>) -> Option<Term> {
    match w {
        TgtExpr::Const(Prim::Int(k)) => Some(Term::Int(LinTerm::constant(*k))),
        TgtExpr::Const(Prim::Bool(b)) => Some(Term::Bool(Pred::lit(*b))),
        TgtExpr::Var(x) => match sorts(x)? {
            Base::Number => Some(Term::Int(LinTerm::var(x.clone()))),
            Base::Boolean => Some(Term::Bool(Pred::bool_var(x.clone()))),
        },
        TgtExpr::App(..) => {
            let (head, args) = prim_spine(w)?;
            match (head, args.as_slice()) {
                (Prim::Op(Op::Not), [a]) => Some(Term::Bool(embed_bool(a, sorts)?.negate())),
                (Prim::Op(op), [a, b]) if op.is_binary() => binary(op, embed_int(a, sorts)?, embed_int(b, sorts)?),
                (Prim::Partial(op, k), [b]) => binary(op, LinTerm::constant(k), embed_int(b, sorts)?),
                _ => None,
            }
        }
        _ => None,
    }
}

pub fn embed_int(w: &TgtExpr, sorts: Sorts<'_>) -> Option<LinTerm> {
    match embed_term(w, sorts)? {
        Term::Int(t) => Some(t),
        Term::Bool(_) => None,
    }
}

pub fn embed_bool(w: &TgtExpr, sorts: Sorts<'_>) -> Option<Pred> {
    match embed_term(w, sorts)? {
        Term::Bool(p) => Some(p),
        Term::Int(_) => None,
    }
}

/// Guard embedding: exact inside the fragment, `true` outside it.
pub fn embed_guard(w: &TgtExpr, sorts: Sorts<'_>) -> Pred {
    embed_bool(w, sorts).unwrap_or_else(Pred::tt)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorts(x: &Name) -> Option<Base> {
        match x.as_str() {
            "b" => Some(Base::Boolean),
            _ => Some(Base::Number),
        }
    }

    #[test]
    fn comparisons_embed_exactly() {
        let w = TgtExpr::apps(TgtExpr::Const(Prim::Op(Op::Ne)), [TgtExpr::var("flag"), TgtExpr::int(0)]);
        assert_eq!(embed_guard(&w, &sorts).to_string(), "flag != 0");
        assert_eq!(embed_guard(&TgtExpr::var("b"), &sorts).to_string(), "b");
    }

    #[test]
    fn redexes_weaken_to_true() {
        let id = TgtExpr::lam("y", crate::syntax::SrcType::boolean(), TgtExpr::var("y"));
        let w = TgtExpr::app(id, TgtExpr::bool(true));
        assert!(embed_guard(&w, &sorts).is_true());
    }

    #[test]
    fn nonlinear_products_do_not_embed() {
        let w = TgtExpr::apps(TgtExpr::Const(Prim::Op(Op::Mul)), [TgtExpr::var("x"), TgtExpr::var("y")]);
        assert!(embed_int(&w, &sorts).is_none());
        let w = TgtExpr::apps(TgtExpr::Const(Prim::Op(Op::Mul)), [TgtExpr::int(3), TgtExpr::var("y")]);
        assert_eq!(embed_int(&w, &sorts).unwrap().to_string(), "3*y");
    }
}
