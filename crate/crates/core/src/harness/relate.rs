//! A decision procedure for "source term e elaborates to target term W",
//! guided by the shape of W.

use crate::elab::{eval_positions, replace, subterm};
use crate::syntax::SrcExpr;
use crate::target::TgtExpr;

/// Contract `proj_k ⟨W1, W2⟩` to `W_k` everywhere.
pub fn normalize(w: &TgtExpr) -> TgtExpr {
    let n = |w: &TgtExpr| Box::new(normalize(w));
    match w {
        TgtExpr::Const(_) | TgtExpr::Var(_) => w.clone(),
        TgtExpr::Lam { param, ann, body } => TgtExpr::Lam { param: param.clone(), ann: ann.clone(), body: n(body) },
        TgtExpr::If(a, b, c) => TgtExpr::If(n(a), n(b), n(c)),
        TgtExpr::App(a, b) => TgtExpr::App(n(a), n(b)),
        TgtExpr::Let(x, a, b) => TgtExpr::Let(x.clone(), n(a), n(b)),
        TgtExpr::Pair(a, b) => TgtExpr::Pair(n(a), n(b)),
        TgtExpr::Proj(k, a) => match normalize(a) {
            TgtExpr::Pair(l, r) => {
                if *k == 1 {
                    *l
                } else {
                    *r
                }
            }
            a => TgtExpr::Proj(*k, Box::new(a)),
        },
        TgtExpr::Inj { k, ann, payload } => TgtExpr::Inj { k: *k, ann: ann.clone(), payload: n(payload) },
        TgtExpr::Case { scrut, x1, b1, x2, b2 } => TgtExpr::Case {
            scrut: n(scrut),
            x1: x1.clone(),
            b1: n(b1),
            x2: x2.clone(),
            b2: n(b2),
        },
        TgtExpr::Dead { from, to, inner } => TgtExpr::Dead { from: from.clone(), to: to.clone(), inner: n(inner) },
    }
}

/// Whether some elaboration derivation relates `e` to `w`, up to
/// administrative projections. Types are not re-derived: the target is
/// separately required to be simply typed, which fixes the source skeleton.
pub fn related(e: &SrcExpr, w: &TgtExpr) -> bool {
    rel(e, &normalize(w))
}

fn rel(e: &SrcExpr, w: &TgtExpr) -> bool {
    if let SrcExpr::Ascribe(inner, _) = e {
        return rel(inner, w);
    }
    match w {
        TgtExpr::Dead { from, to, inner } => from.tags().disjoint(to.tags()) && rel(e, inner),
        TgtExpr::Inj { payload, .. } => rel(e, payload),
        TgtExpr::Pair(a, b) => e.is_value() && rel(e, a) && rel(e, b),
        TgtExpr::Proj(_, a) => rel(e, a),
        TgtExpr::Case { scrut, x1, b1, x2, b2 } => eval_positions(e).into_iter().any(|path| {
            rel(subterm(e, &path), scrut)
                && rel(&replace(e, &path, SrcExpr::Var(x1.clone())), b1)
                && rel(&replace(e, &path, SrcExpr::Var(x2.clone())), b2)
        }),
        TgtExpr::Const(c) => matches!(e, SrcExpr::Const(d) if c == d),
        TgtExpr::Var(x) => matches!(e, SrcExpr::Var(y) if x == y),
        TgtExpr::Lam { param, body, .. } => matches!(e, SrcExpr::Lam(x, b) if x == param && rel(b, body)),
        TgtExpr::App(f, a) => matches!(e, SrcExpr::App(g, b) if rel(g, f) && rel(b, a)),
        TgtExpr::If(c, t, el) => matches!(e, SrcExpr::If(d, u, v) if rel(d, c) && rel(u, t) && rel(v, el)),
        TgtExpr::Let(x, a, b) => matches!(e, SrcExpr::Let(y, c, d) if x == y && rel(c, a) && rel(d, b)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elab::elaborate_program;
    use crate::syntax::{parse_source, SrcType};

    #[test]
    fn elaborations_are_related() {
        let p = parse_source("let f = (\\x => x : number -> number) in f true").unwrap();
        let w = elaborate_program(&p).unwrap().target;
        assert!(related(&p.main, &w));
        assert!(!related(&SrcExpr::int(1), &w));
    }

    #[test]
    fn projections_of_pairs_are_administrative() {
        let lam = TgtExpr::lam("x", SrcType::fun(SrcType::number(), SrcType::number()), TgtExpr::var("x"));
        let w = TgtExpr::proj(1, TgtExpr::pair(lam.clone(), lam.clone()));
        assert_eq!(normalize(&w), lam);
        assert!(related(&SrcExpr::lam("x", SrcExpr::var("x")), &w));
    }

    #[test]
    fn dead_requires_disjoint_tags() {
        let ok = TgtExpr::dead(SrcType::number(), SrcType::boolean(), TgtExpr::int(1));
        let bad = TgtExpr::dead(SrcType::number(), SrcType::number(), TgtExpr::int(1));
        assert!(related(&SrcExpr::int(1), &ok));
        assert!(!related(&SrcExpr::int(1), &bad));
    }
}
