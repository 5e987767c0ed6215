use std::collections::BTreeSet;

use crate::name::Name;
use crate::syntax::SrcExpr;

/// Rename binders so that every binder is distinct and none shadows a free
/// variable. Binders that are already unique keep their names.
pub fn rename_apart(e: &SrcExpr) -> SrcExpr {
    let mut used: BTreeSet<Name> = e.free_vars();
    go(e, &mut Vec::new(), &mut used)
}

fn fresh_for(x: &Name, used: &BTreeSet<Name>) -> Name {
    if !used.contains(x) {
        return x.clone();
    }
    (1..).map(|i| Name::new(format!("{x}_{i}"))).find(|n| !used.contains(n)).unwrap()
}

fn go(e: &SrcExpr, env: &mut Vec<(Name, Name)>, used: &mut BTreeSet<Name>) -> SrcExpr {
    let look = |x: &Name, env: &Vec<(Name, Name)>| {
        env.iter().rev().find(|(a, _)| a == x).map(|(_, b)| b.clone()).unwrap_or_else(|| x.clone())
    };
    let binder = |x: &Name, body: &SrcExpr, env: &mut Vec<(Name, Name)>, used: &mut BTreeSet<Name>| {
        let y = fresh_for(x, used);
        used.insert(y.clone());
        env.push((x.clone(), y.clone()));
        let b = go(body, env, used);
        env.pop();
        (y, b)
    };
    match e {
        SrcExpr::Const(_) => e.clone(),
        SrcExpr::Var(x) => SrcExpr::Var(look(x, env)),
        SrcExpr::Lam(x, b) => {
            let (y, b) = binder(x, b, env, used);
            SrcExpr::Lam(y, Box::new(b))
        }
        SrcExpr::Ascribe(b, t) => SrcExpr::Ascribe(Box::new(go(b, env, used)), t.clone()),
        SrcExpr::Let(x, a, b) => {
            let a = go(a, env, used);
            let (y, b) = binder(x, b, env, used);
            SrcExpr::Let(y, Box::new(a), Box::new(b))
        }
        SrcExpr::If(c, t, el) => SrcExpr::if_(go(c, env, used), go(t, env, used), go(el, env, used)),
        SrcExpr::App(g, a) => SrcExpr::app(go(g, env, used), go(a, env, used)),
    }
}

/// Equality up to consistent renaming of bound variables.
pub fn alpha_eq(a: &SrcExpr, b: &SrcExpr) -> bool {
    fn eq(a: &SrcExpr, b: &SrcExpr, env: &mut Vec<(Name, Name)>) -> bool {
        match (a, b) {
            (SrcExpr::Const(x), SrcExpr::Const(y)) => x == y,
            (SrcExpr::Var(x), SrcExpr::Var(y)) => {
                match env.iter().rev().find(|(l, r)| l == x || r == y) {
                    Some((l, r)) => l == x && r == y,
                    None => x == y,
                }
            }
            (SrcExpr::Lam(x, b1), SrcExpr::Lam(y, b2)) => {
                env.push((x.clone(), y.clone()));
                let r = eq(b1, b2, env);
                env.pop();
                r
            }
            (SrcExpr::Ascribe(e1, t1), SrcExpr::Ascribe(e2, t2)) => t1 == t2 && eq(e1, e2, env),
            (SrcExpr::Let(x, a1, b1), SrcExpr::Let(y, a2, b2)) => {
                if !eq(a1, a2, env) {
                    return false;
                }
                env.push((x.clone(), y.clone()));
                let r = eq(b1, b2, env);
                env.pop();
                r
            }
            (SrcExpr::If(c1, t1, e1), SrcExpr::If(c2, t2, e2)) => eq(c1, c2, env) && eq(t1, t2, env) && eq(e1, e2, env),
            (SrcExpr::App(f1, a1), SrcExpr::App(f2, a2)) => eq(f1, f2, env) && eq(a1, a2, env),
            _ => false,
        }
    }
    eq(a, b, &mut Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shadowed_binders_get_new_names() {
        let e = SrcExpr::lam("x", SrcExpr::lam("x", SrcExpr::var("x")));
        let r = rename_apart(&e);
        assert_eq!(r, SrcExpr::lam("x", SrcExpr::lam("x_1", SrcExpr::var("x_1"))));
        assert!(alpha_eq(&e, &r));
    }

    #[test]
    fn free_variables_are_not_captured() {
        let e = SrcExpr::app(SrcExpr::lam("y", SrcExpr::var("y")), SrcExpr::var("y"));
        let r = rename_apart(&e);
        assert_eq!(r, SrcExpr::app(SrcExpr::lam("y_1", SrcExpr::var("y_1")), SrcExpr::var("y")));
    }

    #[test]
    fn alpha_equality_respects_binding() {
        let a = SrcExpr::lam("x", SrcExpr::lam("y", SrcExpr::var("x")));
        let b = SrcExpr::lam("p", SrcExpr::lam("q", SrcExpr::var("p")));
        let c = SrcExpr::lam("p", SrcExpr::lam("q", SrcExpr::var("q")));
        assert!(alpha_eq(&a, &b));
        assert!(!alpha_eq(&a, &c));
    }
}
