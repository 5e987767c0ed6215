//! Source calculus: types, terms, primitive constants, concrete syntax.

mod alpha;
mod lexer;
mod parser;
mod prim;
mod print;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::logic::Pred;
use crate::name::Name;

pub use alpha::{alpha_eq, rename_apart};
pub use parser::{parse_pred, parse_source, parse_type, ParseError};
pub use prim::{is_reserved, Op, Prim};
pub(crate) use print::fmt_prim;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Base {
    Number,
    Boolean,
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Base::Number => "number",
            Base::Boolean => "boolean",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    Number,
    Boolean,
    Function,
}

impl Tag {
    fn bit(self) -> u8 {
        match self {
            Tag::Number => 1,
            Tag::Boolean => 2,
            Tag::Function => 4,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Number => "number",
            Tag::Boolean => "boolean",
            Tag::Function => "function",
        }
    }
}

/// Set of runtime tags.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct TagSet(u8);

impl TagSet {
    pub fn single(t: Tag) -> Self {
        TagSet(t.bit())
    }

    pub fn union(self, other: TagSet) -> TagSet {
        TagSet(self.0 | other.0)
    }

    pub fn disjoint(self, other: TagSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn contains(self, t: Tag) -> bool {
        self.0 & t.bit() != 0
    }

    pub fn iter(self) -> impl Iterator<Item = Tag> {
        [Tag::Number, Tag::Boolean, Tag::Function].into_iter().filter(move |t| self.contains(*t))
    }
}

impl fmt::Display for TagSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|t| format!("\"{}\"", t.as_str())).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Source types. Refinements on `Prim` ride along untouched through Phase 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SrcType {
    Prim(Base, Pred),
    Fun(Box<SrcType>, Box<SrcType>),
    And(Box<SrcType>, Box<SrcType>),
    Or(Box<SrcType>, Box<SrcType>),
}

impl SrcType {
    pub fn base(b: Base) -> SrcType {
        SrcType::Prim(b, Pred::tt())
    }

    pub fn number() -> SrcType {
        SrcType::base(Base::Number)
    }

    pub fn boolean() -> SrcType {
        SrcType::base(Base::Boolean)
    }

    pub fn fun(a: SrcType, b: SrcType) -> SrcType {
        SrcType::Fun(Box::new(a), Box::new(b))
    }

    pub fn and(a: SrcType, b: SrcType) -> SrcType {
        SrcType::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: SrcType, b: SrcType) -> SrcType {
        SrcType::Or(Box::new(a), Box::new(b))
    }

    pub fn tags(&self) -> TagSet {
        match self {
            SrcType::Prim(Base::Number, _) => TagSet::single(Tag::Number),
            SrcType::Prim(Base::Boolean, _) => TagSet::single(Tag::Boolean),
            SrcType::Fun(..) => TagSet::single(Tag::Function),
            SrcType::And(l, _) => l.tags(),
            SrcType::Or(l, r) => l.tags().union(r.tags()),
        }
    }

    /// Equality of the ∧/∨/→ skeleton, ignoring refinements. This is the
    /// type equality Phase 1 works with.
    pub fn shape_eq(&self, other: &SrcType) -> bool {
        match (self, other) {
            (SrcType::Prim(a, _), SrcType::Prim(b, _)) => a == b,
            (SrcType::Fun(a1, b1), SrcType::Fun(a2, b2))
            | (SrcType::And(a1, b1), SrcType::And(a2, b2))
            | (SrcType::Or(a1, b1), SrcType::Or(a2, b2)) => a1.shape_eq(a2) && b1.shape_eq(b2),
            _ => false,
        }
    }

    pub fn map_refinements(&self, f: &mut dyn FnMut(Base, &Pred) -> Pred) -> SrcType {
        match self {
            SrcType::Prim(b, p) => SrcType::Prim(*b, f(*b, p)),
            SrcType::Fun(a, b) => SrcType::fun(a.map_refinements(f), b.map_refinements(f)),
            SrcType::And(a, b) => SrcType::and(a.map_refinements(f), b.map_refinements(f)),
            SrcType::Or(a, b) => SrcType::or(a.map_refinements(f), b.map_refinements(f)),
        }
    }

    pub fn erase_refinements(&self) -> SrcType {
        self.map_refinements(&mut |_, _| Pred::tt())
    }

    pub fn refinements(&self, out: &mut Vec<Pred>) {
        match self {
            SrcType::Prim(_, p) => out.push(p.clone()),
            SrcType::Fun(a, b) | SrcType::And(a, b) | SrcType::Or(a, b) => {
                a.refinements(out);
                b.refinements(out)
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            SrcType::Prim(..) => 1,
            SrcType::Fun(a, b) | SrcType::And(a, b) | SrcType::Or(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Well-formedness: unions need disjoint tags, intersections equal tags.
    pub fn wf(&self) -> WfReport {
        fn go(t: &SrcType, path: &mut Vec<&'static str>) -> Option<WfViolation> {
            let here = |reason: String, path: &Vec<&'static str>| WfViolation {
                path: if path.is_empty() { "(root)".into() } else { path.join(".") },
                node: t.to_string(),
                reason,
            };
            match t {
                SrcType::Prim(..) => None,
                SrcType::Or(l, r) if !l.tags().disjoint(r.tags()) => {
                    Some(here(format!("union parts share tags: {} and {}", l.tags(), r.tags()), path))
                }
                SrcType::And(l, r) if l.tags() != r.tags() => {
                    Some(here(format!("intersection parts have different tags: {} and {}", l.tags(), r.tags()), path))
                }
                SrcType::Fun(l, r) | SrcType::And(l, r) | SrcType::Or(l, r) => {
                    let (ln, rn) = match t {
                        SrcType::Fun(..) => ("domain", "codomain"),
                        _ => ("left", "right"),
                    };
                    path.push(ln);
                    if let Some(v) = go(l, path) {
                        return Some(v);
                    }
                    path.pop();
                    path.push(rn);
                    let v = go(r, path);
                    path.pop();
                    v
                }
            }
        }
        let violation = go(self, &mut Vec::new());
        WfReport { well_formed: violation.is_none(), violation }
    }
}

pub fn type_tag(t: &SrcType) -> TagSet {
    t.tags()
}

pub fn wf_type(t: &SrcType) -> WfReport {
    t.wf()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WfViolation {
    pub path: String,
    pub node: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WfReport {
    pub well_formed: bool,
    pub violation: Option<WfViolation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SrcExpr {
    Const(Prim),
    Var(Name),
    Lam(Name, Box<SrcExpr>),
    Ascribe(Box<SrcExpr>, SrcType),
    Let(Name, Box<SrcExpr>, Box<SrcExpr>),
    If(Box<SrcExpr>, Box<SrcExpr>, Box<SrcExpr>),
    App(Box<SrcExpr>, Box<SrcExpr>),
}

impl SrcExpr {
    pub fn int(k: i64) -> SrcExpr {
        SrcExpr::Const(Prim::Int(k))
    }

    pub fn bool(b: bool) -> SrcExpr {
        SrcExpr::Const(Prim::Bool(b))
    }

    pub fn op(op: Op) -> SrcExpr {
        SrcExpr::Const(Prim::Op(op))
    }

    pub fn var(x: impl Into<Name>) -> SrcExpr {
        SrcExpr::Var(x.into())
    }

    pub fn lam(x: impl Into<Name>, body: SrcExpr) -> SrcExpr {
        SrcExpr::Lam(x.into(), Box::new(body))
    }

    pub fn ascribe(e: SrcExpr, t: SrcType) -> SrcExpr {
        SrcExpr::Ascribe(Box::new(e), t)
    }

    pub fn let_(x: impl Into<Name>, e1: SrcExpr, e2: SrcExpr) -> SrcExpr {
        SrcExpr::Let(x.into(), Box::new(e1), Box::new(e2))
    }

    pub fn if_(c: SrcExpr, t: SrcExpr, e: SrcExpr) -> SrcExpr {
        SrcExpr::If(Box::new(c), Box::new(t), Box::new(e))
    }

    pub fn app(f: SrcExpr, a: SrcExpr) -> SrcExpr {
        SrcExpr::App(Box::new(f), Box::new(a))
    }

    pub fn apps(f: SrcExpr, args: impl IntoIterator<Item = SrcExpr>) -> SrcExpr {
        args.into_iter().fold(f, SrcExpr::app)
    }

    /// Value grammar `c | x | λx.e`, extended with ascribed values.
    pub fn is_value(&self) -> bool {
        match self {
            SrcExpr::Const(_) | SrcExpr::Var(_) | SrcExpr::Lam(..) => true,
            SrcExpr::Ascribe(e, _) => e.is_value(),
            _ => false,
        }
    }

    /// Strip ascriptions from the root.
    pub fn peel(&self) -> &SrcExpr {
        match self {
            SrcExpr::Ascribe(e, _) => e.peel(),
            e => e,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            SrcExpr::Const(_) | SrcExpr::Var(_) => 1,
            SrcExpr::Lam(_, b) | SrcExpr::Ascribe(b, _) => 1 + b.size(),
            SrcExpr::Let(_, a, b) | SrcExpr::App(a, b) => 1 + a.size() + b.size(),
            SrcExpr::If(a, b, c) => 1 + a.size() + b.size() + c.size(),
        }
    }

    pub fn free_vars(&self) -> std::collections::BTreeSet<Name> {
        fn go(e: &SrcExpr, bound: &mut Vec<Name>, out: &mut std::collections::BTreeSet<Name>) {
            match e {
                SrcExpr::Const(_) => {}
                SrcExpr::Var(x) => {
                    if !bound.contains(x) {
                        out.insert(x.clone());
                    }
                }
                SrcExpr::Lam(x, b) => {
                    bound.push(x.clone());
                    go(b, bound, out);
                    bound.pop();
                }
                SrcExpr::Ascribe(b, _) => go(b, bound, out),
                SrcExpr::Let(x, a, b) => {
                    go(a, bound, out);
                    bound.push(x.clone());
                    go(b, bound, out);
                    bound.pop();
                }
                SrcExpr::If(a, b, c) => {
                    go(a, bound, out);
                    go(b, bound, out);
                    go(c, bound, out);
                }
                SrcExpr::App(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
            }
        }
        let mut out = std::collections::BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// All annotation types occurring in the term, outermost first.
    pub fn annotations(&self) -> Vec<&SrcType> {
        let mut out = Vec::new();
        fn go<'a>(e: &'a SrcExpr, out: &mut Vec<&'a SrcType>) {
            match e {
                SrcExpr::Const(_) | SrcExpr::Var(_) => {}
                SrcExpr::Lam(_, b) => go(b, out),
                SrcExpr::Ascribe(b, t) => {
                    out.push(t);
                    go(b, out)
                }
                SrcExpr::Let(_, a, b) | SrcExpr::App(a, b) => {
                    go(a, out);
                    go(b, out)
                }
                SrcExpr::If(a, b, c) => {
                    go(a, out);
                    go(b, out);
                    go(c, out)
                }
            }
        }
        go(self, &mut out);
        out
    }

    pub fn map_types(&self, f: &mut dyn FnMut(&SrcType) -> SrcType) -> SrcExpr {
        match self {
            SrcExpr::Const(_) | SrcExpr::Var(_) => self.clone(),
            SrcExpr::Lam(x, b) => SrcExpr::lam(x.clone(), b.map_types(f)),
            SrcExpr::Ascribe(b, t) => SrcExpr::ascribe(b.map_types(f), f(t)),
            SrcExpr::Let(x, a, b) => SrcExpr::let_(x.clone(), a.map_types(f), b.map_types(f)),
            SrcExpr::If(a, b, c) => SrcExpr::if_(a.map_types(f), b.map_types(f), c.map_types(f)),
            SrcExpr::App(a, b) => SrcExpr::app(a.map_types(f), b.map_types(f)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    pub aliases: Vec<(Name, SrcType)>,
    pub main: SrcExpr,
    /// Source position of each binder (after alpha-renaming).
    pub binder_spans: BTreeMap<Name, Span>,
}

impl Program {
    pub fn new(main: SrcExpr) -> Program {
        Program { aliases: Vec::new(), main, binder_spans: BTreeMap::new() }
    }
}
