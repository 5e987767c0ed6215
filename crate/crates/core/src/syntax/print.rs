use std::fmt;

use crate::syntax::{Prim, Program, SrcExpr, SrcType};

// Type precedence: 0 arrow, 1 union, 2 intersection, 3 atom.
fn fmt_type(t: &SrcType, prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let (level, open) = match t {
        SrcType::Fun(..) => (0, prec > 0),
        SrcType::Or(..) => (1, prec > 1),
        SrcType::And(..) => (2, prec > 2),
        SrcType::Prim(..) => (3, false),
    };
    if open {
        f.write_str("(")?;
    }
    match t {
        SrcType::Prim(b, p) if p.is_true() => write!(f, "{b}")?,
        SrcType::Prim(b, p) => write!(f, "{{v:{b} | {p}}}")?,
        SrcType::Fun(a, b) => {
            fmt_type(a, 1, f)?;
            f.write_str(" -> ")?;
            fmt_type(b, 0, f)?;
        }
        SrcType::Or(a, b) | SrcType::And(a, b) => {
            fmt_type(a, level, f)?;
            f.write_str(if level == 1 { " \\/ " } else { " /\\ " })?;
            fmt_type(b, level + 1, f)?;
        }
    }
    if open {
        f.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for SrcType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_type(self, 0, f)
    }
}

pub(crate) fn fmt_prim(c: Prim, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match c {
        Prim::Int(k) if k < 0 => write!(f, "({k})"),
        c => write!(f, "{c}"),
    }
}

// Context: 0 anywhere, 1 application head, 2 application argument.
fn fmt_expr(e: &SrcExpr, ctx: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let binder = matches!(e, SrcExpr::Lam(..) | SrcExpr::Let(..) | SrcExpr::If(..));
    let open = (binder && ctx > 0) || (matches!(e, SrcExpr::App(..)) && ctx == 2);
    if open {
        f.write_str("(")?;
    }
    match e {
        SrcExpr::Const(c) => fmt_prim(*c, f)?,
        SrcExpr::Var(x) => write!(f, "{x}")?,
        SrcExpr::Lam(x, b) => {
            write!(f, "\\{x} => ")?;
            fmt_expr(b, 0, f)?;
        }
        SrcExpr::Ascribe(inner, t) => {
            f.write_str("(")?;
            fmt_expr(inner, 0, f)?;
            write!(f, " : {t})")?;
        }
        SrcExpr::Let(x, a, b) => {
            write!(f, "let {x} = ")?;
            fmt_expr(a, 0, f)?;
            f.write_str(" in ")?;
            fmt_expr(b, 0, f)?;
        }
        SrcExpr::If(c, t, el) => {
            f.write_str("if ")?;
            fmt_expr(c, 0, f)?;
            f.write_str(" then ")?;
            fmt_expr(t, 0, f)?;
            f.write_str(" else ")?;
            fmt_expr(el, 0, f)?;
        }
        SrcExpr::App(g, a) => {
            fmt_expr(g, 1, f)?;
            f.write_str(" ")?;
            fmt_expr(a, 2, f)?;
        }
    }
    if open {
        f.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for SrcExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_expr(self, 0, f)
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, t) in &self.aliases {
            writeln!(f, "type {n} = {t};")?;
        }
        write!(f, "{}", self.main)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{alpha_eq, parse_source, parse_type, Op};

    #[test]
    fn types_round_trip() {
        for text in [
            "number",
            "{v:number | v != 0}",
            "(number -> number) -> boolean",
            "number \\/ boolean -> number /\\ number",
            "(number -> number) /\\ (boolean -> boolean)",
            "{v:boolean | !v}",
        ] {
            let t = parse_type(text, &[]).unwrap();
            assert_eq!(parse_type(&t.to_string(), &[]).unwrap(), t, "{text}");
        }
    }

    #[test]
    fn expressions_round_trip() {
        for text in [
            "let f = \\x => x in f (-3)",
            "(\\x => if x then 1 else 2 : boolean -> number) true",
            "add@-1 4",
            "let g = (\\y => sub 0 y) in g (g 1)",
        ] {
            let e = parse_source(text).unwrap().main;
            let again = parse_source(&e.to_string()).unwrap().main;
            assert!(alpha_eq(&e, &again), "{text} -> {e}");
        }
    }

    #[test]
    fn prefix_applications() {
        let e = SrcExpr::apps(SrcExpr::op(Op::Add), [SrcExpr::int(1), SrcExpr::int(-2)]);
        assert_eq!(e.to_string(), "add 1 (-2)");
    }
}
