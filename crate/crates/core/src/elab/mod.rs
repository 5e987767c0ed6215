//! Phase 1: elaboration with strict/flexible modes and DEAD-cast insertion.

use std::fmt;
use std::rc::Rc;

use serde::Serialize;

use crate::name::{Fresh, Name};
use crate::syntax::{Program, SrcExpr, SrcType};
use crate::target::TgtExpr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Strict,
    Flexible,
}

/// Whether intersection elimination concluded the derivation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Flag {
    /// ∘
    #[serde(rename = "none")]
    NoInter,
    /// ∧
    #[serde(rename = "inter")]
    Inter,
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flag::NoInter => "∘",
            Flag::Inter => "∧",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Elab {
    pub ty: SrcType,
    pub target: TgtExpr,
    pub flag: Flag,
    /// Rule names in pre-order.
    pub trace: Vec<&'static str>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checked {
    pub target: TgtExpr,
    pub flag: Flag,
    pub trace: Vec<&'static str>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ElabError {
    #[error("no elaboration for `{location}`{}; {tried} candidate derivations tried", expected.as_ref().map(|t| format!(" against {t}")).unwrap_or_default())]
    NoDerivation { location: String, expected: Option<String>, tried: usize },
    #[error("ill-formed type annotation {ty}: {reason}")]
    IllFormed { ty: String, reason: String },
    #[error("elaboration search budget of {0} rule applications exhausted")]
    Budget(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ElabConfig {
    /// Total rule applications allowed for one program.
    pub budget: usize,
    /// Alternatives kept per synthesized node.
    pub max_alternatives: usize,
}

impl Default for ElabConfig {
    fn default() -> Self {
        ElabConfig { budget: 2_000_000, max_alternatives: 32 }
    }
}

/// Persistent typing environment.
#[derive(Clone, Default, Debug)]
pub struct Env(Option<Rc<(Name, SrcType, Env)>>);

impl Env {
    pub fn new() -> Env {
        Env(None)
    }

    pub fn extend(&self, x: Name, t: SrcType) -> Env {
        Env(Some(Rc::new((x, t, self.clone()))))
    }

    pub fn lookup(&self, x: &Name) -> Option<&SrcType> {
        let mut cur = &self.0;
        while let Some(node) = cur {
            if node.0 == *x {
                return Some(&node.1);
            }
            cur = &node.2 .0;
        }
        None
    }

    pub fn from_bindings(bs: impl IntoIterator<Item = (Name, SrcType)>) -> Env {
        bs.into_iter().fold(Env::new(), |env, (x, t)| env.extend(x, t))
    }
}

struct Failure {
    size: usize,
    location: String,
    expected: Option<String>,
}

pub struct Elaborator {
    config: ElabConfig,
    steps: usize,
    tried: usize,
    fresh: Fresh,
    failure: Option<Failure>,
}

type R<T> = Result<T, ElabError>;

fn describe(e: &SrcExpr) -> String {
    let mut s = e.to_string();
    if s.chars().count() > 80 {
        s = s.chars().take(77).collect::<String>() + "...";
    }
    s
}

fn join(flags: [Flag; 2]) -> Flag {
    if flags.iter().all(|f| *f == Flag::Inter) {
        Flag::Inter
    } else {
        Flag::NoInter
    }
}

fn with_rule(rule: &'static str, parts: &[&[&'static str]]) -> Vec<&'static str> {
    let mut t = vec![rule];
    for p in parts {
        t.extend_from_slice(p);
    }
    t
}

impl Elaborator {
    pub fn new(config: ElabConfig) -> Self {
        Elaborator { config, steps: 0, tried: 0, fresh: Fresh::new(), failure: None }
    }

    fn tick(&mut self) -> R<()> {
        self.steps += 1;
        if self.steps > self.config.budget {
            Err(ElabError::Budget(self.config.budget))
        } else {
            Ok(())
        }
    }

    fn note_failure(&mut self, e: &SrcExpr, expected: Option<&SrcType>) {
        self.tried += 1;
        let size = e.size();
        if self.failure.as_ref().is_none_or(|f| size <= f.size) {
            self.failure =
                Some(Failure { size, location: describe(e), expected: expected.map(|t| t.to_string()) });
        }
    }

    pub fn error(&self) -> ElabError {
        match &self.failure {
            Some(f) => ElabError::NoDerivation { location: f.location.clone(), expected: f.expected.clone(), tried: self.tried },
            None => ElabError::NoDerivation { location: String::new(), expected: None, tried: self.tried },
        }
    }

    /// Add And-Elim projections after each alternative, depth first.
    fn and_elim(&self, alts: Vec<Elab>) -> Vec<Elab> {
        fn go(e: Elab, out: &mut Vec<Elab>) {
            let parts = match &e.ty {
                SrcType::And(a, b) => Some(((**a).clone(), (**b).clone())),
                _ => None,
            };
            let (target, trace) = (e.target.clone(), e.trace.clone());
            out.push(e);
            if let Some((a, b)) = parts {
                for (k, t) in [(1, a), (2, b)] {
                    let trace = with_rule("T-And-Elim", &[&trace]);
                    go(Elab { ty: t, target: TgtExpr::proj(k, target.clone()), flag: Flag::Inter, trace }, out);
                }
            }
        }
        let mut out = Vec::new();
        for a in alts {
            go(a, &mut out);
        }
        out
    }

    fn cap(&self, mut alts: Vec<Elab>) -> Vec<Elab> {
        let mut seen: Vec<(SrcType, TgtExpr, Flag)> = Vec::new();
        alts.retain(|a| {
            let key = (a.ty.clone(), a.target.clone(), a.flag);
            if seen.contains(&key) {
                false
            } else {
                seen.push(key);
                true
            }
        });
        alts.truncate(self.config.max_alternatives);
        alts
    }

    /// Type synthesis: every derivation the strategy can find, in preference order.
    pub fn synth(&mut self, env: &Env, e: &SrcExpr, mode: Mode) -> R<Vec<Elab>> {
        self.tick()?;
        let base = match e {
            SrcExpr::Const(c) => {
                vec![Elab { ty: c.src_type(), target: TgtExpr::Const(*c), flag: Flag::NoInter, trace: vec!["T-Const"] }]
            }
            SrcExpr::Var(x) => match env.lookup(x) {
                Some(t) => vec![Elab { ty: t.clone(), target: TgtExpr::Var(x.clone()), flag: Flag::NoInter, trace: vec!["T-Var"] }],
                None => vec![],
            },
            SrcExpr::Lam(..) => vec![],
            SrcExpr::Ascribe(inner, t) => match self.check(env, inner, t, mode)? {
                Some(c) => vec![Elab { ty: t.clone(), target: c.target, flag: c.flag, trace: c.trace }],
                None => vec![],
            },
            SrcExpr::Let(x, a, b) => {
                let mut out = Vec::new();
                for bound in self.synth(env, a, mode)? {
                    let env2 = env.extend(x.clone(), bound.ty.clone());
                    for body in self.synth(&env2, b, mode)? {
                        out.push(Elab {
                            ty: body.ty,
                            target: TgtExpr::let_(x.clone(), bound.target.clone(), body.target),
                            flag: body.flag,
                            trace: with_rule("T-Let", &[&bound.trace, &body.trace]),
                        });
                    }
                    if out.len() >= self.config.max_alternatives {
                        break;
                    }
                }
                out
            }
            SrcExpr::If(c, t, el) => {
                let mut out = Vec::new();
                if let Some(cond) = self.check_cond(env, c)? {
                    let ts = self.synth(env, t, mode)?;
                    let es = self.synth(env, el, mode)?;
                    for a in &ts {
                        for b in &es {
                            if a.flag == b.flag && a.ty.shape_eq(&b.ty) {
                                out.push(Elab {
                                    ty: a.ty.clone(),
                                    target: TgtExpr::if_(cond.target.clone(), a.target.clone(), b.target.clone()),
                                    flag: a.flag,
                                    trace: with_rule("T-Ite", &[&cond.trace, &a.trace, &b.trace]),
                                });
                            }
                        }
                    }
                }
                out
            }
            SrcExpr::App(..) => self.synth_app(env, e, mode)?,
        };
        let alts = self.cap(self.and_elim(base));
        if alts.is_empty() {
            self.note_failure(e, None);
        }
        Ok(alts)
    }

    fn check_cond(&mut self, env: &Env, c: &SrcExpr) -> R<Option<Checked>> {
        let r = self.check(env, c, &SrcType::boolean(), Mode::Flexible)?;
        Ok(r.filter(|c| c.flag == Flag::NoInter))
    }

    fn synth_app(&mut self, env: &Env, e: &SrcExpr, mode: Mode) -> R<Vec<Elab>> {
        let SrcExpr::App(f, a) = e else { unreachable!() };
        let mut out = Vec::new();

        // Overload resolution over the whole spine: every argument strict.
        let mut head = e;
        let mut args = Vec::new();
        while let SrcExpr::App(g, x) = head {
            args.push(&**x);
            head = g;
        }
        args.reverse();
        if args.len() > 1 {
            for h in self.synth(env, head, mode)? {
                if h.flag != Flag::Inter {
                    continue;
                }
                let mut ty = h.ty.clone();
                let mut target = h.target.clone();
                let mut trace = h.trace.clone();
                let mut ok = true;
                for arg in &args {
                    let SrcType::Fun(d, c) = ty.clone() else {
                        ok = false;
                        break;
                    };
                    match self.check(env, arg, &d, Mode::Strict)? {
                        Some(w) => {
                            target = TgtExpr::app(target, w.target);
                            trace = with_rule("T-App", &[&trace, &w.trace]);
                            ty = *c;
                        }
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    out.push(Elab { ty, target, flag: Flag::NoInter, trace });
                }
            }
        }

        for h in self.synth(env, f, mode)? {
            let SrcType::Fun(d, c) = &h.ty else { continue };
            let arg_mode = if h.flag == Flag::Inter { Mode::Strict } else { Mode::Flexible };
            if let Some(w) = self.check(env, a, d, arg_mode)? {
                out.push(Elab {
                    ty: (**c).clone(),
                    target: TgtExpr::app(h.target.clone(), w.target),
                    flag: Flag::NoInter,
                    trace: with_rule("T-App", &[&h.trace, &w.trace]),
                });
            }
            if out.len() >= self.config.max_alternatives {
                break;
            }
        }
        Ok(out)
    }

    /// Checking against an expected type; the first derivation found wins.
    /// Flexible checking tries a strict derivation first, so anything
    /// accepted strictly elaborates identically in flexible mode.
    pub fn check(&mut self, env: &Env, e: &SrcExpr, expected: &SrcType, mode: Mode) -> R<Option<Checked>> {
        if mode == Mode::Flexible {
            if let Some(c) = self.check_in(env, e, expected, Mode::Strict)? {
                return Ok(Some(c));
            }
        }
        let r = self.check_in(env, e, expected, mode)?;
        if r.is_none() {
            self.note_failure(e, Some(expected));
        }
        Ok(r)
    }

    fn check_in(&mut self, env: &Env, e: &SrcExpr, expected: &SrcType, mode: Mode) -> R<Option<Checked>> {
        self.tick()?;
        if let Some(c) = self.check_syntax(env, e, expected, mode)? {
            return Ok(Some(c));
        }
        if let SrcType::And(t1, t2) = expected {
            if e.is_value() {
                if let Some(c1) = self.check(env, e, t1, mode)? {
                    if let Some(c2) = self.check(env, e, t2, mode)? {
                        return Ok(Some(Checked {
                            target: TgtExpr::pair(c1.target, c2.target),
                            flag: join([c1.flag, c2.flag]),
                            trace: with_rule("T-And-Intro", &[&c1.trace, &c2.trace]),
                        }));
                    }
                }
            }
        }
        if mode == Mode::Flexible {
            if let SrcType::Or(t1, t2) = expected {
                // An arm elaborating without DEAD-casts beats one that needs them.
                let mut first = None;
                for (k, t) in [(1u8, t1), (2, t2)] {
                    if let Some(c) = self.check(env, e, t, mode)? {
                        let clean = !c.target.contains_dead();
                        if first.is_none() || clean {
                            first = Some((k, c));
                        }
                        if clean {
                            break;
                        }
                    }
                }
                if let Some((k, c)) = first {
                    return Ok(Some(Checked {
                        target: TgtExpr::inj(k, expected.clone(), c.target),
                        flag: c.flag,
                        trace: with_rule("T-Up", &[&c.trace]),
                    }));
                }
            }
        }
        if let Some(c) = self.check_down(env, e, expected, mode)? {
            return Ok(Some(c));
        }
        if mode == Mode::Flexible && !matches!(expected, SrcType::And(..) | SrcType::Or(..)) {
            for alt in self.synth(env, e, mode)? {
                if alt.ty.tags().disjoint(expected.tags()) {
                    return Ok(Some(Checked {
                        target: TgtExpr::dead(alt.ty.erase_refinements(), expected.erase_refinements(), alt.target),
                        flag: alt.flag,
                        trace: with_rule("T-Dead", &[&alt.trace]),
                    }));
                }
            }
        }
        Ok(None)
    }

    fn check_syntax(&mut self, env: &Env, e: &SrcExpr, expected: &SrcType, mode: Mode) -> R<Option<Checked>> {
        match e {
            SrcExpr::Lam(x, body) => {
                let SrcType::Fun(d, c) = expected else { return Ok(None) };
                let env2 = env.extend(x.clone(), (**d).clone());
                Ok(self.check(&env2, body, c, mode)?.map(|b| Checked {
                    target: TgtExpr::lam(x.clone(), expected.clone(), b.target),
                    flag: Flag::NoInter,
                    trace: with_rule("T-Lam", &[&b.trace]),
                }))
            }
            SrcExpr::Let(x, a, b) => {
                for bound in self.synth(env, a, mode)? {
                    let env2 = env.extend(x.clone(), bound.ty.clone());
                    if let Some(body) = self.check(&env2, b, expected, mode)? {
                        return Ok(Some(Checked {
                            target: TgtExpr::let_(x.clone(), bound.target, body.target),
                            flag: body.flag,
                            trace: with_rule("T-Let", &[&bound.trace, &body.trace]),
                        }));
                    }
                }
                Ok(None)
            }
            SrcExpr::If(c, t, el) => {
                let Some(cond) = self.check_cond(env, c)? else { return Ok(None) };
                let Some(tc) = self.check(env, t, expected, mode)? else { return Ok(None) };
                let Some(ec) = self.check(env, el, expected, mode)? else { return Ok(None) };
                Ok(Some(Checked {
                    target: TgtExpr::if_(cond.target, tc.target, ec.target),
                    flag: join([tc.flag, ec.flag]),
                    trace: with_rule("T-Ite", &[&cond.trace, &tc.trace, &ec.trace]),
                }))
            }
            _ => {
                for alt in self.synth(env, e, mode)? {
                    if alt.ty.shape_eq(expected) {
                        return Ok(Some(Checked { target: alt.target, flag: alt.flag, trace: alt.trace }));
                    }
                }
                Ok(None)
            }
        }
    }

    /// T-Down: split on the leftmost union-typed subterm in evaluation position.
    fn check_down(&mut self, env: &Env, e: &SrcExpr, expected: &SrcType, mode: Mode) -> R<Option<Checked>> {
        for path in eval_positions(e) {
            if let Some(c) = self.split_at(env, e, &path, expected, mode)? {
                return Ok(Some(c));
            }
        }
        Ok(None)
    }

    /// T-Down with the hole fixed at `path`.
    fn split_at(&mut self, env: &Env, e: &SrcExpr, path: &[u8], expected: &SrcType, mode: Mode) -> R<Option<Checked>> {
        let e0 = subterm(e, path);
        if matches!(e0, SrcExpr::Lam(..)) {
            return Ok(None);
        }
        for alt in self.synth(env, e0, mode)? {
            let SrcType::Or(t1, t2) = &alt.ty else { continue };
            let x1 = self.fresh.name("u");
            let x2 = self.fresh.name("u");
            let e1 = replace(e, path, SrcExpr::Var(x1.clone()));
            let e2 = replace(e, path, SrcExpr::Var(x2.clone()));
            let Some(b1) = self.check(&env.extend(x1.clone(), (**t1).clone()), &e1, expected, mode)? else {
                continue;
            };
            let Some(b2) = self.check(&env.extend(x2.clone(), (**t2).clone()), &e2, expected, mode)? else {
                continue;
            };
            return Ok(Some(Checked {
                target: TgtExpr::case(alt.target, x1, b1.target, x2, b2.target),
                flag: join([b1.flag, b2.flag]),
                trace: with_rule("T-Down", &[&alt.trace, &b1.trace, &b2.trace]),
            }));
        }
        Ok(None)
    }
}

/// Paths (child indices) of subterms in evaluation position, outermost first.
pub(crate) fn eval_positions(e: &SrcExpr) -> Vec<Vec<u8>> {
    fn go(e: &SrcExpr, path: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        out.push(path.clone());
        let child = |i: u8, c: &SrcExpr, path: &mut Vec<u8>, out: &mut Vec<Vec<u8>>| {
            path.push(i);
            go(c, path, out);
            path.pop();
        };
        match e {
            SrcExpr::Let(_, a, _) => child(0, a, path, out),
            SrcExpr::If(c, _, _) => child(0, c, path, out),
            SrcExpr::Ascribe(a, _) => child(0, a, path, out),
            SrcExpr::App(f, a) => {
                child(0, f, path, out);
                if f.is_value() {
                    child(1, a, path, out);
                }
            }
            _ => {}
        }
    }
    let mut out = Vec::new();
    go(e, &mut Vec::new(), &mut out);
    out
}

pub(crate) fn subterm<'a>(e: &'a SrcExpr, path: &[u8]) -> &'a SrcExpr {
    match (path.first(), e) {
        (None, _) => e,
        (Some(0), SrcExpr::Let(_, a, _) | SrcExpr::If(a, _, _) | SrcExpr::Ascribe(a, _) | SrcExpr::App(a, _)) => {
            subterm(a, &path[1..])
        }
        (Some(1), SrcExpr::App(_, a)) => subterm(a, &path[1..]),
        _ => unreachable!("invalid evaluation path"),
    }
}

pub(crate) fn replace(e: &SrcExpr, path: &[u8], with: SrcExpr) -> SrcExpr {
    let Some(&i) = path.first() else { return with };
    let rest = &path[1..];
    match (i, e) {
        (0, SrcExpr::Let(x, a, b)) => SrcExpr::let_(x.clone(), replace(a, rest, with), (**b).clone()),
        (0, SrcExpr::If(c, t, el)) => SrcExpr::if_(replace(c, rest, with), (**t).clone(), (**el).clone()),
        (0, SrcExpr::Ascribe(a, t)) => SrcExpr::ascribe(replace(a, rest, with), t.clone()),
        (0, SrcExpr::App(f, a)) => SrcExpr::app(replace(f, rest, with), (**a).clone()),
        (1, SrcExpr::App(f, a)) => SrcExpr::app((**f).clone(), replace(a, rest, with)),
        _ => unreachable!("invalid evaluation path"),
    }
}

fn check_annotations(e: &SrcExpr) -> R<()> {
    for t in e.annotations() {
        if let Some(v) = t.wf().violation {
            return Err(ElabError::IllFormed { ty: t.to_string(), reason: format!("{} at {}", v.reason, v.path) });
        }
    }
    Ok(())
}

/// Synthesize with a given environment and mode, returning the first derivation.
pub fn synth_expr(env: &Env, e: &SrcExpr, mode: Mode) -> Result<Elab, ElabError> {
    synth_expr_with(env, e, mode, ElabConfig::default())
}

pub fn synth_expr_with(env: &Env, e: &SrcExpr, mode: Mode, config: ElabConfig) -> Result<Elab, ElabError> {
    check_annotations(e)?;
    let mut el = Elaborator::new(config);
    let alts = el.synth(env, e, mode)?;
    // The top level is entered outside intersection elimination.
    alts.into_iter().find(|a| a.flag == Flag::NoInter).ok_or_else(|| el.error())
}

pub fn check_expr(env: &Env, e: &SrcExpr, expected: &SrcType, mode: Mode) -> Result<Checked, ElabError> {
    check_expr_with(env, e, expected, mode, ElabConfig::default())
}

pub fn check_expr_with(
    env: &Env,
    e: &SrcExpr,
    expected: &SrcType,
    mode: Mode,
    config: ElabConfig,
) -> Result<Checked, ElabError> {
    check_annotations(e)?;
    if let Some(v) = expected.wf().violation {
        return Err(ElabError::IllFormed { ty: expected.to_string(), reason: v.reason });
    }
    let mut el = Elaborator::new(config);
    el.check(env, e, expected, mode)?.ok_or_else(|| el.error())
}

/// Apply T-Down with the hole of the evaluation context at `hole`, a path of
/// child indices into `e` (0 for the let-bound term, condition, function or
/// ascribed term; 1 for an argument).
pub fn resolve_union_elim(
    env: &Env,
    e: &SrcExpr,
    hole: &[u8],
    expected: &SrcType,
    mode: Mode,
) -> Result<Checked, ElabError> {
    if !eval_positions(e).iter().any(|p| p == hole) {
        return Err(ElabError::NoDerivation { location: describe(e), expected: None, tried: 0 });
    }
    let mut el = Elaborator::new(ElabConfig::default());
    el.split_at(env, e, hole, expected, mode)?.ok_or_else(|| el.error())
}

/// T-TopLevel: flexible mode in the empty environment.
pub fn elaborate_program(p: &Program) -> Result<Elab, ElabError> {
    elaborate_program_with(p, ElabConfig::default())
}

pub fn elaborate_program_with(p: &Program, config: ElabConfig) -> Result<Elab, ElabError> {
    synth_expr_with(&Env::new(), &p.main, Mode::Flexible, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_source;

    fn nn() -> SrcType {
        SrcType::fun(SrcType::number(), SrcType::number())
    }

    fn bb() -> SrcType {
        SrcType::fun(SrcType::boolean(), SrcType::boolean())
    }

    #[test]
    fn flexible_check_inserts_dead() {
        let env = Env::new().extend(Name::new("x"), SrcType::boolean());
        let c = check_expr(&env, &SrcExpr::var("x"), &SrcType::number(), Mode::Flexible).unwrap();
        assert_eq!(c.target.to_string(), "DEAD[boolean => number](x)");
        assert_eq!(c.flag, Flag::NoInter);
        assert!(check_expr(&env, &SrcExpr::var("x"), &SrcType::number(), Mode::Strict).is_err());
    }

    #[test]
    fn overloaded_call_selects_second_conjunct() {
        let env = Env::from_bindings([(Name::new("f"), SrcType::and(nn(), bb())), (Name::new("x"), SrcType::boolean())]);
        let e = SrcExpr::app(SrcExpr::var("f"), SrcExpr::var("x"));
        let c = check_expr(&env, &e, &SrcType::boolean(), Mode::Flexible).unwrap();
        assert_eq!(c.target.to_string(), "proj2(f) x");
    }

    #[test]
    fn higher_order_mismatch_is_rejected() {
        let t = SrcType::and(nn(), bb());
        let f = SrcExpr::ascribe(SrcExpr::lam("f", SrcExpr::var("f")), SrcType::fun(t.clone(), t));
        let env = Env::new().extend(Name::new("g"), SrcType::and(nn(), bb()));
        let e = SrcExpr::app(f, SrcExpr::var("g"));
        let nb = SrcType::fun(SrcType::number(), SrcType::boolean());
        assert!(check_expr(&env, &e, &nb, Mode::Flexible).is_err());
    }

    #[test]
    fn dead_argument_example() {
        let p = parse_source("(\\x => x 1 : (number -> number) -> number) 0").unwrap();
        let r = elaborate_program(&p).unwrap();
        assert_eq!(r.target.to_string(), "(\\x => x 1) DEAD[number => number -> number](0)");
    }

    #[test]
    fn union_elimination_splits_on_scrutinee() {
        let env = Env::new().extend(Name::new("u"), SrcType::or(SrcType::number(), SrcType::boolean()));
        let body = SrcExpr::let_("y", SrcExpr::var("u"), SrcExpr::app(SrcExpr::op(crate::syntax::Op::Not), SrcExpr::var("y")));
        let c = resolve_union_elim(&env, &body, &[0], &SrcType::boolean(), Mode::Flexible).unwrap();
        assert_eq!(
            c.target.to_string(),
            "(case u of inj1 $u0 => let y = $u0 in not DEAD[number => boolean](y) | inj2 $u1 => let y = $u1 in not y)"
        );
        assert_eq!(c.trace[0], "T-Down");
        // The checker itself splits at the innermost use instead.
        let c = check_expr(&env, &body, &SrcType::boolean(), Mode::Flexible).unwrap();
        assert!(c.trace.contains(&"T-Down"));
    }

    #[test]
    fn ill_formed_annotations_are_reported() {
        let bad = SrcType::or(SrcType::number(), SrcType::number());
        let e = SrcExpr::ascribe(SrcExpr::int(1), bad);
        assert!(matches!(synth_expr(&Env::new(), &e, Mode::Flexible), Err(ElabError::IllFormed { .. })));
    }
}
