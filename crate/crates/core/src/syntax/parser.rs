use std::collections::{BTreeMap, BTreeSet};

use crate::logic::{value_var, CmpOp, LinTerm, Pred};
use crate::name::Name;
use crate::syntax::lexer::{lex, Lexed, Tok};
use crate::syntax::prim::is_reserved;
use crate::syntax::{Base, Op, Prim, Program, Span, SrcExpr, SrcType};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at {span}: {message}")]
    Syntax { span: Span, message: String },
    #[error("unknown type name `{name}` at {span}")]
    UnboundAlias { span: Span, name: String },
    #[error("unbound variable `{name}` at {span}")]
    UnboundVariable { span: Span, name: String },
}

impl ParseError {
    pub fn span(&self) -> Span {
        match self {
            ParseError::Syntax { span, .. }
            | ParseError::UnboundAlias { span, .. }
            | ParseError::UnboundVariable { span, .. } => *span,
        }
    }
}

/// Untyped predicate syntax, sorted afterwards.
#[derive(Clone, Debug)]
enum PExpr {
    Int(i64),
    Bool(bool),
    Name(String),
    Neg(Box<PExpr>),
    Arith(char, Box<PExpr>, Box<PExpr>),
    Cmp(CmpOp, Box<PExpr>, Box<PExpr>),
    Not(Box<PExpr>),
    And(Box<PExpr>, Box<PExpr>),
    Or(Box<PExpr>, Box<PExpr>),
    Implies(Box<PExpr>, Box<PExpr>),
    Iff(Box<PExpr>, Box<PExpr>),
}

struct Parser<'a> {
    toks: Vec<Lexed>,
    pos: usize,
    aliases: &'a mut Vec<(Name, SrcType)>,
    scope: Vec<(String, Name)>,
    taken: BTreeSet<String>,
    spans: BTreeMap<Name, Span>,
    open_parens: Vec<Span>,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn new(toks: Vec<Lexed>, aliases: &'a mut Vec<(Name, SrcType)>) -> Self {
        let taken = toks
            .iter()
            .filter_map(|l| match &l.tok {
                Tok::Ident(s) => Some(s.clone()),
                _ => None,
            })
            .collect();
        Parser { toks, pos: 0, aliases, scope: Vec::new(), taken, spans: BTreeMap::new(), open_parens: Vec::new() }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        &self.toks[(self.pos + n).min(self.toks.len() - 1)].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> PResult<T> {
        let mut message = message.into();
        let mut span = self.span();
        if *self.peek() == Tok::Eof {
            if let Some(open) = self.open_parens.last() {
                message = format!("{message}; unclosed `(` opened here");
                span = *open;
            }
        }
        Err(ParseError::Syntax { span, message })
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(t) if *t == s)
    }

    fn is_kw(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Kw(t) if *t == s)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> PResult<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.error(format!("expected `{s}`, found {}", self.peek()))
        }
    }

    fn expect_kw(&mut self, s: &str) -> PResult<()> {
        if self.is_kw(s) {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected `{s}`, found {}", self.peek()))
        }
    }

    fn ident(&mut self) -> PResult<(String, Span)> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok((s, span))
            }
            t => self.error(format!("expected an identifier, found {t}")),
        }
    }

    fn open(&mut self) -> PResult<()> {
        let span = self.span();
        self.expect_sym("(")?;
        self.open_parens.push(span);
        Ok(())
    }

    fn close(&mut self) -> PResult<()> {
        self.expect_sym(")")?;
        self.open_parens.pop();
        Ok(())
    }

    // ---- binders -------------------------------------------------------

    fn bind(&mut self, raw: &str, span: Span) -> PResult<Name> {
        if is_reserved(raw) {
            return Err(ParseError::Syntax { span, message: format!("`{raw}` is reserved and cannot be bound") });
        }
        let name = if self.spans.contains_key(&Name::new(raw)) {
            let mut i = 1;
            loop {
                let cand = format!("{raw}_{i}");
                if !self.taken.contains(&cand) {
                    break cand;
                }
                i += 1;
            }
        } else {
            raw.to_string()
        };
        self.taken.insert(name.clone());
        let name = Name::new(name);
        self.spans.insert(name.clone(), span);
        Ok(name)
    }

    fn lookup(&self, raw: &str) -> Option<Name> {
        self.scope.iter().rev().find(|(r, _)| r == raw).map(|(_, n)| n.clone())
    }

    // ---- types ---------------------------------------------------------

    fn ty(&mut self) -> PResult<SrcType> {
        let dom = self.or_ty()?;
        if self.eat_sym("->") {
            Ok(SrcType::fun(dom, self.ty()?))
        } else {
            Ok(dom)
        }
    }

    fn or_ty(&mut self) -> PResult<SrcType> {
        let mut t = self.and_ty()?;
        while self.eat_sym("\\/") {
            t = SrcType::or(t, self.and_ty()?);
        }
        Ok(t)
    }

    fn and_ty(&mut self) -> PResult<SrcType> {
        let mut t = self.atom_ty()?;
        while self.eat_sym("/\\") {
            t = SrcType::and(t, self.atom_ty()?);
        }
        Ok(t)
    }

    fn base(&mut self) -> PResult<Base> {
        if self.is_kw("number") {
            self.bump();
            Ok(Base::Number)
        } else if self.is_kw("boolean") {
            self.bump();
            Ok(Base::Boolean)
        } else {
            self.error(format!("expected `number` or `boolean`, found {}", self.peek()))
        }
    }

    fn atom_ty(&mut self) -> PResult<SrcType> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Kw("number") | Tok::Kw("boolean") => Ok(SrcType::base(self.base()?)),
            Tok::Ident(name) => {
                self.bump();
                match self.aliases.iter().rev().find(|(n, _)| n.as_str() == name) {
                    Some((_, t)) => Ok(t.clone()),
                    None => Err(ParseError::UnboundAlias { span, name }),
                }
            }
            Tok::Sym("{") => {
                self.bump();
                let (binder, _) = self.ident()?;
                self.expect_sym(":")?;
                let base = self.base()?;
                self.expect_sym("|")?;
                let p = self.pred()?;
                self.expect_sym("}")?;
                let pred = sort_bool(&p, &|n| (n == binder).then_some(base), span)?;
                Ok(SrcType::Prim(base, pred))
            }
            Tok::Sym("(") => {
                self.open()?;
                let t = self.ty()?;
                self.close()?;
                Ok(t)
            }
            t => self.error(format!("expected a type, found {t}")),
        }
    }

    // ---- predicates ----------------------------------------------------

    fn pred(&mut self) -> PResult<PExpr> {
        let lhs = self.p_iff()?;
        if self.eat_sym("=>") {
            Ok(PExpr::Implies(Box::new(lhs), Box::new(self.pred()?)))
        } else {
            Ok(lhs)
        }
    }

    fn p_iff(&mut self) -> PResult<PExpr> {
        let lhs = self.p_or()?;
        if self.eat_sym("<=>") {
            Ok(PExpr::Iff(Box::new(lhs), Box::new(self.p_or()?)))
        } else {
            Ok(lhs)
        }
    }

    fn p_or(&mut self) -> PResult<PExpr> {
        let mut e = self.p_and()?;
        while self.eat_sym("||") {
            e = PExpr::Or(Box::new(e), Box::new(self.p_and()?));
        }
        Ok(e)
    }

    fn p_and(&mut self) -> PResult<PExpr> {
        let mut e = self.p_not()?;
        while self.eat_sym("&&") {
            e = PExpr::And(Box::new(e), Box::new(self.p_not()?));
        }
        Ok(e)
    }

    fn p_not(&mut self) -> PResult<PExpr> {
        if self.eat_sym("!") {
            Ok(PExpr::Not(Box::new(self.p_not()?)))
        } else {
            self.p_cmp()
        }
    }

    fn cmp_op(&self) -> Option<CmpOp> {
        Some(match self.peek() {
            Tok::Sym("<") => CmpOp::Lt,
            Tok::Sym("<=") => CmpOp::Le,
            Tok::Sym("=") => CmpOp::Eq,
            Tok::Sym("!=") => CmpOp::Ne,
            Tok::Sym(">=") => CmpOp::Ge,
            Tok::Sym(">") => CmpOp::Gt,
            _ => return None,
        })
    }

    fn p_cmp(&mut self) -> PResult<PExpr> {
        let lhs = self.p_arith()?;
        match self.cmp_op() {
            Some(op) => {
                self.bump();
                Ok(PExpr::Cmp(op, Box::new(lhs), Box::new(self.p_arith()?)))
            }
            None => Ok(lhs),
        }
    }

    fn p_arith(&mut self) -> PResult<PExpr> {
        let mut e = self.p_mul()?;
        loop {
            if self.eat_sym("+") {
                e = PExpr::Arith('+', Box::new(e), Box::new(self.p_mul()?));
            } else if self.eat_sym("-") {
                e = PExpr::Arith('-', Box::new(e), Box::new(self.p_mul()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn p_mul(&mut self) -> PResult<PExpr> {
        let mut e = self.p_unary()?;
        while self.eat_sym("*") {
            e = PExpr::Arith('*', Box::new(e), Box::new(self.p_unary()?));
        }
        Ok(e)
    }

    fn p_unary(&mut self) -> PResult<PExpr> {
        if self.eat_sym("-") {
            return Ok(match self.p_unary()? {
                PExpr::Int(k) => PExpr::Int(k.wrapping_neg()),
                e => PExpr::Neg(Box::new(e)),
            });
        }
        match self.peek().clone() {
            Tok::Int(k) => {
                self.bump();
                // 2^63 only survives as the operand of a negation.
                Ok(PExpr::Int(k as i64))
            }
            Tok::Kw("true") => {
                self.bump();
                Ok(PExpr::Bool(true))
            }
            Tok::Kw("false") => {
                self.bump();
                Ok(PExpr::Bool(false))
            }
            Tok::Ident(s) => {
                self.bump();
                Ok(PExpr::Name(s))
            }
            Tok::Sym("(") => {
                self.open()?;
                let p = self.pred()?;
                self.close()?;
                Ok(p)
            }
            t => self.error(format!("expected a predicate, found {t}")),
        }
    }

    // ---- expressions ---------------------------------------------------

    fn expr(&mut self) -> PResult<SrcExpr> {
        if self.is_kw("let") {
            self.bump();
            let (raw, span) = self.ident()?;
            self.expect_sym("=")?;
            let bound = self.expr()?;
            self.expect_kw("in")?;
            let x = self.bind(&raw, span)?;
            self.scope.push((raw, x.clone()));
            let body = self.expr();
            self.scope.pop();
            return Ok(SrcExpr::let_(x, bound, body?));
        }
        if self.is_kw("if") {
            self.bump();
            let c = self.expr()?;
            self.expect_kw("then")?;
            let t = self.expr()?;
            self.expect_kw("else")?;
            let e = self.expr()?;
            return Ok(SrcExpr::if_(c, t, e));
        }
        if self.eat_sym("\\") {
            let (raw, span) = self.ident()?;
            self.expect_sym("=>")?;
            let x = self.bind(&raw, span)?;
            self.scope.push((raw, x.clone()));
            let body = self.expr();
            self.scope.pop();
            return Ok(SrcExpr::lam(x, body?));
        }
        self.or_expr()
    }

    fn or_expr(&mut self) -> PResult<SrcExpr> {
        let mut e = self.and_expr()?;
        while self.eat_sym("||") {
            let rhs = self.and_expr()?;
            e = SrcExpr::if_(e, SrcExpr::bool(true), rhs);
        }
        Ok(e)
    }

    fn and_expr(&mut self) -> PResult<SrcExpr> {
        let mut e = self.cmp_expr()?;
        while self.eat_sym("&&") {
            let rhs = self.cmp_expr()?;
            e = SrcExpr::if_(e, rhs, SrcExpr::bool(false));
        }
        Ok(e)
    }

    fn cmp_expr(&mut self) -> PResult<SrcExpr> {
        let lhs = self.arith_expr()?;
        let Some(op) = self.cmp_op() else { return Ok(lhs) };
        self.bump();
        let rhs = self.arith_expr()?;
        let call = |op: Op, a: SrcExpr, b: SrcExpr| SrcExpr::apps(SrcExpr::op(op), [a, b]);
        Ok(match op {
            CmpOp::Lt => call(Op::Lt, lhs, rhs),
            CmpOp::Le => call(Op::Le, lhs, rhs),
            CmpOp::Eq => call(Op::Eq, lhs, rhs),
            CmpOp::Ne => call(Op::Ne, lhs, rhs),
            CmpOp::Gt => call(Op::Lt, rhs, lhs),
            CmpOp::Ge => call(Op::Le, rhs, lhs),
        })
    }

    fn arith_expr(&mut self) -> PResult<SrcExpr> {
        let mut e = self.mul_expr()?;
        loop {
            let op = if self.eat_sym("+") {
                Op::Add
            } else if self.eat_sym("-") {
                Op::Sub
            } else {
                return Ok(e);
            };
            let rhs = self.mul_expr()?;
            e = SrcExpr::apps(SrcExpr::op(op), [e, rhs]);
        }
    }

    fn mul_expr(&mut self) -> PResult<SrcExpr> {
        let mut e = self.unary_expr()?;
        while self.eat_sym("*") {
            let rhs = self.unary_expr()?;
            e = SrcExpr::apps(SrcExpr::op(Op::Mul), [e, rhs]);
        }
        Ok(e)
    }

    fn unary_expr(&mut self) -> PResult<SrcExpr> {
        let span = self.span();
        if self.eat_sym("-") {
            if let Tok::Int(k) = *self.peek() {
                self.bump();
                let v = i64::try_from(-(k as i128))
                    .map_err(|_| ParseError::Syntax { span, message: "integer literal out of range".into() })?;
                return Ok(SrcExpr::int(v));
            }
            let e = self.unary_expr()?;
            return Ok(SrcExpr::apps(SrcExpr::op(Op::Sub), [SrcExpr::int(0), e]));
        }
        if self.eat_sym("!") {
            let e = self.unary_expr()?;
            return Ok(SrcExpr::app(SrcExpr::op(Op::Not), e));
        }
        self.app_expr()
    }

    fn starts_atom_at(&self, n: usize) -> bool {
        matches!(
            self.peek_at(n),
            Tok::Int(_) | Tok::Ident(_) | Tok::Partial(..) | Tok::Kw("true") | Tok::Kw("false") | Tok::Sym("(")
        )
    }

    fn app_expr(&mut self) -> PResult<SrcExpr> {
        let mut e = self.atom_expr()?;
        while self.starts_atom_at(0) {
            let a = self.atom_expr()?;
            e = SrcExpr::app(e, a);
        }
        Ok(e)
    }

    fn atom_expr(&mut self) -> PResult<SrcExpr> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Int(k) => {
                self.bump();
                let k = i64::try_from(k)
                    .map_err(|_| ParseError::Syntax { span, message: "integer literal out of range".into() })?;
                Ok(SrcExpr::int(k))
            }
            Tok::Kw("true") => {
                self.bump();
                Ok(SrcExpr::bool(true))
            }
            Tok::Kw("false") => {
                self.bump();
                Ok(SrcExpr::bool(false))
            }
            Tok::Partial(op, k) => {
                self.bump();
                match Op::from_name(&op) {
                    Some(o) if o.is_binary() => Ok(SrcExpr::Const(Prim::Partial(o, k))),
                    _ => Err(ParseError::Syntax { span, message: format!("`{op}` has no partial application form") }),
                }
            }
            Tok::Ident(s) => {
                self.bump();
                if let Some(op) = Op::from_name(&s) {
                    if self.lookup(&s).is_none() {
                        return Ok(SrcExpr::op(op));
                    }
                }
                match self.lookup(&s) {
                    Some(n) => Ok(SrcExpr::Var(n)),
                    None => Err(ParseError::UnboundVariable { span, name: s }),
                }
            }
            Tok::Sym("(") => {
                self.open()?;
                let e = self.expr()?;
                let e = if self.eat_sym(":") { SrcExpr::ascribe(e, self.ty()?) } else { e };
                self.close()?;
                Ok(e)
            }
            t => self.error(format!("expected an expression, found {t}")),
        }
    }

    fn program(&mut self) -> PResult<SrcExpr> {
        while self.is_kw("type") {
            self.bump();
            let (name, _) = self.ident()?;
            self.expect_sym("=")?;
            let t = self.ty()?;
            self.eat_sym(";");
            self.aliases.push((Name::new(name), t));
        }
        let e = self.expr()?;
        if *self.peek() != Tok::Eof {
            return self.error(format!("unexpected {} after the program", self.peek()));
        }
        Ok(e)
    }
}

fn bool_shaped(p: &PExpr, nu: &dyn Fn(&str) -> Option<Base>) -> bool {
    match p {
        PExpr::Bool(_) | PExpr::Cmp(..) | PExpr::Not(_) | PExpr::And(..) | PExpr::Or(..) | PExpr::Implies(..) => true,
        PExpr::Iff(..) => true,
        PExpr::Name(n) => nu(n) == Some(Base::Boolean),
        _ => false,
    }
}

fn resolve(n: &str, nu: &dyn Fn(&str) -> Option<Base>) -> Name {
    if nu(n).is_some() {
        value_var()
    } else {
        Name::new(n)
    }
}

fn sort_int(p: &PExpr, nu: &dyn Fn(&str) -> Option<Base>, span: Span) -> PResult<LinTerm> {
    let err = |m: &str| ParseError::Syntax { span, message: m.to_string() };
    Ok(match p {
        PExpr::Int(k) => LinTerm::constant(*k),
        PExpr::Name(n) => {
            if nu(n) == Some(Base::Boolean) {
                return Err(err(&format!("`{n}` is boolean but used as a number")));
            }
            LinTerm::var(resolve(n, nu))
        }
        PExpr::Neg(e) => sort_int(e, nu, span)?.scale(-1),
        PExpr::Arith(op, a, b) => {
            let (a, b) = (sort_int(a, nu, span)?, sort_int(b, nu, span)?);
            match op {
                '+' => a.add(&b),
                '-' => a.sub(&b),
                _ => a.mul(&b).ok_or_else(|| err("nonlinear multiplication in a refinement"))?,
            }
        }
        _ => return Err(err("expected an arithmetic term")),
    })
}

fn sort_bool(p: &PExpr, nu: &dyn Fn(&str) -> Option<Base>, span: Span) -> PResult<Pred> {
    Ok(match p {
        PExpr::Bool(b) => Pred::lit(*b),
        PExpr::Name(n) => {
            if nu(n) == Some(Base::Number) {
                return Err(ParseError::Syntax { span, message: format!("`{n}` is a number but used as a boolean") });
            }
            Pred::bool_var(resolve(n, nu))
        }
        PExpr::Not(q) => sort_bool(q, nu, span)?.negate(),
        PExpr::And(a, b) => Pred::And(vec![sort_bool(a, nu, span)?, sort_bool(b, nu, span)?]),
        PExpr::Or(a, b) => Pred::Or(vec![sort_bool(a, nu, span)?, sort_bool(b, nu, span)?]),
        PExpr::Implies(a, b) => Pred::implies(sort_bool(a, nu, span)?, sort_bool(b, nu, span)?),
        PExpr::Iff(a, b) => Pred::iff(sort_bool(a, nu, span)?, sort_bool(b, nu, span)?),
        PExpr::Cmp(op @ (CmpOp::Eq | CmpOp::Ne), a, b) if bool_shaped(a, nu) || bool_shaped(b, nu) => {
            let (a, b) = (sort_bool(a, nu, span)?, sort_bool(b, nu, span)?);
            // `v = true` is just `v`; `v = false` is `!v`.
            let eq = match (&a, &b) {
                (p, q) if q.is_true() => p.clone(),
                (p, q) if q.is_false() => p.negate(),
                _ => Pred::iff(a, b),
            };
            if *op == CmpOp::Eq {
                eq
            } else {
                eq.negate()
            }
        }
        PExpr::Cmp(op, a, b) => Pred::cmp(sort_int(a, nu, span)?, *op, sort_int(b, nu, span)?),
        _ => return Err(ParseError::Syntax { span, message: "expected a boolean predicate".into() }),
    })
}

pub fn parse_source(text: &str) -> Result<Program, ParseError> {
    let toks = lex(text).map_err(|(span, message)| ParseError::Syntax { span, message })?;
    let mut aliases = Vec::new();
    let mut p = Parser::new(toks, &mut aliases);
    let main = p.program()?;
    let binder_spans = std::mem::take(&mut p.spans);
    Ok(Program { aliases, main, binder_spans })
}

/// Parse a standalone type, with aliases already in scope.
pub fn parse_type(text: &str, aliases: &[(Name, SrcType)]) -> Result<SrcType, ParseError> {
    let toks = lex(text).map_err(|(span, message)| ParseError::Syntax { span, message })?;
    let mut aliases = aliases.to_vec();
    let mut p = Parser::new(toks, &mut aliases);
    let t = p.ty()?;
    if *p.peek() != Tok::Eof {
        return p.error(format!("unexpected {} after the type", p.peek()));
    }
    Ok(t)
}

/// Parse a refinement predicate in which `v` denotes the value variable.
/// The sort of `v` is inferred from use unless given.
pub fn parse_pred(text: &str, nu_sort: Option<Base>) -> Result<Pred, ParseError> {
    let toks = lex(text).map_err(|(span, message)| ParseError::Syntax { span, message })?;
    let mut aliases = Vec::new();
    let mut p = Parser::new(toks, &mut aliases);
    let span = p.span();
    let e = p.pred()?;
    if *p.peek() != Tok::Eof {
        return p.error(format!("unexpected {} after the predicate", p.peek()));
    }
    let sort = nu_sort.unwrap_or_else(|| if uses_as_int(&e, "v") { Base::Number } else { Base::Boolean });
    sort_bool(&e, &|n| (n == "v").then_some(sort), span)
}

fn uses_as_int(p: &PExpr, x: &str) -> bool {
    fn in_int(p: &PExpr, x: &str) -> bool {
        match p {
            PExpr::Name(n) => n == x,
            PExpr::Neg(a) => in_int(a, x),
            PExpr::Arith(_, a, b) => in_int(a, x) || in_int(b, x),
            _ => false,
        }
    }
    match p {
        PExpr::Cmp(_, a, b) => in_int(a, x) || in_int(b, x) || uses_as_int(a, x) || uses_as_int(b, x),
        PExpr::Not(a) => uses_as_int(a, x),
        PExpr::And(a, b) | PExpr::Or(a, b) | PExpr::Implies(a, b) | PExpr::Iff(a, b) => {
            uses_as_int(a, x) || uses_as_int(b, x)
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn let_binding() {
        let p = parse_source("let x = 1 in x").unwrap();
        assert_eq!(p.main, SrcExpr::let_("x", SrcExpr::int(1), SrcExpr::var("x")));
    }

    #[test]
    fn unclosed_paren_column() {
        match parse_source("((") {
            Err(ParseError::Syntax { span, .. }) => assert_eq!(span, Span { line: 1, col: 2 }),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn aliases_and_refinements() {
        let p = parse_source("type tt = {v:number | v != 0}\n(1 : tt)").unwrap();
        match &p.main {
            SrcExpr::Ascribe(_, SrcType::Prim(Base::Number, pred)) => assert_eq!(pred.to_string(), "v != 0"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_source("(1 : nope)"), Err(ParseError::UnboundAlias { .. })));
    }

    #[test]
    fn infix_desugars_to_primitives() {
        let p = parse_source("1 + 2 > 3").unwrap();
        let sum = SrcExpr::apps(SrcExpr::op(Op::Add), [SrcExpr::int(1), SrcExpr::int(2)]);
        assert_eq!(p.main, SrcExpr::apps(SrcExpr::op(Op::Lt), [SrcExpr::int(3), sum]));
        let n = parse_source("f (-1)");
        assert!(matches!(n, Err(ParseError::UnboundVariable { .. })));
        assert_eq!(parse_source("(-9223372036854775808)").unwrap().main, SrcExpr::int(i64::MIN));
    }

    #[test]
    fn binders_are_renamed_apart() {
        let p = parse_source("let x = 1 in let x = x in \\x => x").unwrap();
        let expected = SrcExpr::let_(
            "x",
            SrcExpr::int(1),
            SrcExpr::let_("x_1", SrcExpr::var("x"), SrcExpr::lam("x_2", SrcExpr::var("x_2"))),
        );
        assert_eq!(p.main, expected);
    }

    #[test]
    fn type_precedence() {
        let t = parse_type("number -> number /\\ boolean \\/ boolean -> number", &[]).unwrap();
        let expected = SrcType::fun(
            SrcType::number(),
            SrcType::fun(
                SrcType::or(SrcType::and(SrcType::number(), SrcType::boolean()), SrcType::boolean()),
                SrcType::number(),
            ),
        );
        assert_eq!(t, expected);
    }

    #[test]
    fn boolean_refinements() {
        let t = parse_type("{v:boolean | v = false}", &[]).unwrap();
        assert_eq!(t, SrcType::Prim(Base::Boolean, Pred::bool_var(value_var()).negate()));
        assert_eq!(parse_pred("v >= 0", None).unwrap().to_string(), "v >= 0");
    }
}
