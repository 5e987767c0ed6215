//! Deterministic random generation of programs that Phase 1 accepts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::elab::elaborate_program;
use crate::logic::{value_var, CmpOp, LinTerm, Pred};
use crate::name::Name;
use crate::syntax::{Base, Op, Program, SrcExpr, SrcType};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenConfig {
    /// Rough node budget for the whole program.
    pub size: usize,
    /// Probability of generating a tag-incompatible subterm in a flexible position.
    pub dead_density: f64,
    /// Probability that a top-level binding is an overloaded function in the style of `negate`.
    pub overload_rate: f64,
    /// Probability that a top-level binding returns an untagged union.
    pub union_rate: f64,
    /// Probability that a call to an overloaded function mismatches its guard.
    pub mismatch_rate: f64,
}

impl GenConfig {
    pub fn new(size: usize) -> GenConfig {
        GenConfig { size, dead_density: 0.1, overload_rate: 0.35, union_rate: 0.2, mismatch_rate: 0.2 }
    }
}

type Scope = Vec<(Name, SrcType)>;

struct Gen {
    rng: ChaCha8Rng,
    cfg: GenConfig,
    next: usize,
}

fn other(b: Base) -> Base {
    match b {
        Base::Number => Base::Boolean,
        Base::Boolean => Base::Number,
    }
}

fn refined(p: Pred) -> SrcType {
    SrcType::Prim(Base::Number, p)
}

fn nu_cmp(op: CmpOp, k: i64) -> Pred {
    Pred::cmp(LinTerm::var(value_var()), op, LinTerm::constant(k))
}

impl Gen {
    fn name(&mut self, prefix: &str) -> Name {
        self.next += 1;
        Name::new(format!("{prefix}{}", self.next))
    }

    fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p.clamp(0.0, 1.0))
    }

    fn literal(&mut self, b: Base) -> SrcExpr {
        match b {
            Base::Number => SrcExpr::int(self.rng.gen_range(-3..=5)),
            Base::Boolean => SrcExpr::bool(self.rng.gen_bool(0.5)),
        }
    }

    fn vars_of(scope: &Scope, t: &SrcType) -> Vec<Name> {
        scope.iter().filter(|(_, s)| s.shape_eq(t)).map(|(x, _)| x.clone()).collect()
    }

    fn leaf(&mut self, scope: &Scope, b: Base) -> SrcExpr {
        let vars = Self::vars_of(scope, &SrcType::base(b));
        if !vars.is_empty() && self.chance(0.6) {
            let i = self.rng.gen_range(0..vars.len());
            SrcExpr::Var(vars[i].clone())
        } else {
            self.literal(b)
        }
    }

    /// A term checking against base `b`; flexible positions may hold DEAD-cast material.
    fn base_expr(&mut self, scope: &Scope, b: Base, size: usize, strict: bool) -> SrcExpr {
        if size <= 1 {
            return self.leaf(scope, b);
        }
        if !strict && self.chance(self.cfg.dead_density) {
            return self.base_expr(scope, other(b), size, strict);
        }
        let half = (size - 1) / 2;
        let unions: Vec<Name> = scope
            .iter()
            .filter(|(_, t)| matches!(t, SrcType::Or(..)))
            .map(|(x, _)| x.clone())
            .collect();
        let funs: Vec<(Name, SrcType)> = scope
            .iter()
            .filter(|(_, t)| matches!(t, SrcType::Fun(_, c) if c.shape_eq(&SrcType::base(b))))
            .cloned()
            .collect();
        match self.rng.gen_range(0..10) {
            0..=3 => match b {
                Base::Number => {
                    let op = [Op::Add, Op::Sub, Op::Mul][self.rng.gen_range(0..3)];
                    let l = self.base_expr(scope, Base::Number, half, strict);
                    let r = self.base_expr(scope, Base::Number, half, strict);
                    SrcExpr::apps(SrcExpr::op(op), [l, r])
                }
                Base::Boolean => {
                    if self.chance(0.25) {
                        let a = self.base_expr(scope, Base::Boolean, size - 1, strict);
                        SrcExpr::app(SrcExpr::op(Op::Not), a)
                    } else {
                        let op = [Op::Lt, Op::Le, Op::Eq, Op::Ne][self.rng.gen_range(0..4)];
                        let l = self.base_expr(scope, Base::Number, half, strict);
                        let r = self.base_expr(scope, Base::Number, half, strict);
                        SrcExpr::apps(SrcExpr::op(op), [l, r])
                    }
                }
            },
            4..=5 => {
                let c = self.guard(scope, size / 3, strict);
                let t = self.base_expr(scope, b, size / 3, strict);
                let e = self.base_expr(scope, b, size / 3, strict);
                SrcExpr::if_(c, t, e)
            }
            6..=7 => {
                let x = self.name("x");
                let bb = if self.chance(0.5) { Base::Number } else { Base::Boolean };
                let bound = self.base_expr(scope, bb, size / 3, strict);
                let mut inner = scope.clone();
                inner.push((x.clone(), SrcType::base(bb)));
                let body = self.base_expr(&inner, b, size - size / 3 - 1, strict);
                SrcExpr::let_(x, bound, body)
            }
            8 if !funs.is_empty() => {
                let (f, t) = funs[self.rng.gen_range(0..funs.len())].clone();
                let SrcType::Fun(d, _) = t else { unreachable!() };
                let db = match *d {
                    SrcType::Prim(db, _) => db,
                    _ => Base::Number,
                };
                let arg = self.base_expr(scope, db, size - 1, strict);
                SrcExpr::app(SrcExpr::Var(f), arg)
            }
            9 if !unions.is_empty() && !strict => {
                // Union elimination through an evaluation context.
                let u = SrcExpr::Var(unions[self.rng.gen_range(0..unions.len())].clone());
                match b {
                    Base::Number => SrcExpr::apps(SrcExpr::op(Op::Add), [u, self.leaf(scope, Base::Number)]),
                    Base::Boolean => SrcExpr::app(SrcExpr::op(Op::Not), u),
                }
            }
            _ => self.leaf(scope, b),
        }
    }

    /// A guard in the style of `flag != 0`.
    fn guard(&mut self, scope: &Scope, size: usize, strict: bool) -> SrcExpr {
        let nums = Self::vars_of(scope, &SrcType::number());
        if !nums.is_empty() && self.chance(0.7) {
            let x = nums[self.rng.gen_range(0..nums.len())].clone();
            let op = [Op::Ne, Op::Eq, Op::Lt, Op::Le][self.rng.gen_range(0..4)];
            let k = self.rng.gen_range(-1..=2);
            return SrcExpr::apps(SrcExpr::op(op), [SrcExpr::Var(x), SrcExpr::int(k)]);
        }
        self.base_expr(scope, Base::Boolean, size, strict)
    }

    fn body_using(&mut self, scope: &Scope, x: &Name, b: Base, size: usize) -> SrcExpr {
        let xv = SrcExpr::Var(x.clone());
        match (b, self.rng.gen_range(0..4)) {
            (Base::Number, 0) => SrcExpr::apps(SrcExpr::op(Op::Sub), [SrcExpr::int(0), xv]),
            (Base::Number, 1) => {
                let k = self.literal(Base::Number);
                SrcExpr::apps(SrcExpr::op(Op::Add), [xv, k])
            }
            (Base::Boolean, 0) => SrcExpr::app(SrcExpr::op(Op::Not), xv),
            (Base::Boolean, 1) => SrcExpr::if_(xv, SrcExpr::bool(false), SrcExpr::bool(true)),
            _ => self.base_expr(scope, b, size, false),
        }
    }

    /// `let f = (\flag => \x => if flag != 0 then N else B : (nz -> number -> number) /\ (z -> boolean -> boolean))`
    /// followed by calls.
    fn overload(&mut self, scope: &mut Scope, size: usize) -> Vec<(Name, SrcExpr)> {
        let f = self.name("f");
        let flag = self.name("flag");
        let x = self.name("x");
        let t1 = SrcType::fun(refined(nu_cmp(CmpOp::Ne, 0)), SrcType::fun(SrcType::number(), SrcType::number()));
        let t2 = SrcType::fun(refined(nu_cmp(CmpOp::Eq, 0)), SrcType::fun(SrcType::boolean(), SrcType::boolean()));
        let ty = SrcType::and(t1, t2);
        let s_num = vec![(flag.clone(), SrcType::number()), (x.clone(), SrcType::number())];
        let s_bool = vec![(flag.clone(), SrcType::number()), (x.clone(), SrcType::boolean())];
        let n = self.body_using(&s_num, &x, Base::Number, size / 3);
        let b = self.body_using(&s_bool, &x, Base::Boolean, size / 3);
        let guard = SrcExpr::apps(SrcExpr::op(Op::Ne), [SrcExpr::Var(flag.clone()), SrcExpr::int(0)]);
        let lam = SrcExpr::lam(flag, SrcExpr::lam(x, SrcExpr::if_(guard, n, b)));
        let mut out = vec![(f.clone(), SrcExpr::ascribe(lam, ty))];
        let calls = self.rng.gen_range(1..=2);
        for _ in 0..calls {
            let mut number_call = self.chance(0.5);
            let mut flag_val = if number_call { [1, 2, -1][self.rng.gen_range(0..3)] } else { 0 };
            if self.chance(self.cfg.mismatch_rate) {
                if self.chance(0.5) {
                    flag_val = if flag_val == 0 { 1 } else { 0 };
                } else {
                    number_call = !number_call;
                }
            }
            let arg_base = if number_call { Base::Number } else { Base::Boolean };
            let arg = self.leaf(scope, arg_base);
            let r = self.name("r");
            out.push((r.clone(), SrcExpr::apps(SrcExpr::Var(f.clone()), [SrcExpr::int(flag_val), arg])));
            scope.push((r, SrcType::base(arg_base)));
        }
        out
    }

    /// `let p = (\flag => if flag != 0 then N else B : number -> number \/ boolean) in let u = p k`.
    fn union(&mut self, scope: &mut Scope, size: usize) -> Vec<(Name, SrcExpr)> {
        let p = self.name("p");
        let flag = self.name("flag");
        let inner = vec![(flag.clone(), SrcType::number())];
        let n = self.base_expr(&inner, Base::Number, size / 4, false);
        let b = self.base_expr(&inner, Base::Boolean, size / 4, false);
        let guard = SrcExpr::apps(SrcExpr::op(Op::Ne), [SrcExpr::Var(flag.clone()), SrcExpr::int(0)]);
        let ty = SrcType::fun(SrcType::number(), SrcType::or(SrcType::number(), SrcType::boolean()));
        let lam = SrcExpr::ascribe(SrcExpr::lam(flag, SrcExpr::if_(guard, n, b)), ty.clone());
        let u = self.name("u");
        let k = self.rng.gen_range(0..=1);
        let call = SrcExpr::app(SrcExpr::Var(p.clone()), SrcExpr::int(k));
        scope.push((u.clone(), SrcType::or(SrcType::number(), SrcType::boolean())));
        vec![(p, lam), (u, call)]
    }

    /// `let g = (\y => body : b1 -> b2)`.
    fn function(&mut self, scope: &mut Scope, size: usize) -> Vec<(Name, SrcExpr)> {
        let g = self.name("g");
        let y = self.name("y");
        let d = if self.chance(0.6) { Base::Number } else { Base::Boolean };
        let c = if self.chance(0.6) { Base::Number } else { Base::Boolean };
        let mut inner: Scope = scope.iter().filter(|(_, t)| matches!(t, SrcType::Prim(..))).cloned().collect();
        inner.push((y.clone(), SrcType::base(d)));
        let body = self.base_expr(&inner, c, size, false);
        let ty = SrcType::fun(SrcType::base(d), SrcType::base(c));
        scope.push((g.clone(), ty.clone()));
        vec![(g, SrcExpr::ascribe(SrcExpr::lam(y, body), ty))]
    }

    fn program(&mut self) -> SrcExpr {
        let size = self.cfg.size.max(1);
        if size <= 3 {
            return self.base_expr(&Vec::new(), Base::Number, size, false);
        }
        let mut scope: Scope = Vec::new();
        let mut bindings = Vec::new();
        let mut left = size;
        while left > 6 {
            let chunk = self.rng.gen_range(4..=left.min(12));
            left -= chunk;
            let roll: f64 = self.rng.gen();
            let new = if roll < self.cfg.overload_rate {
                self.overload(&mut scope, chunk)
            } else if roll < self.cfg.overload_rate + self.cfg.union_rate {
                self.union(&mut scope, chunk)
            } else if self.chance(0.4) {
                self.function(&mut scope, chunk)
            } else {
                let x = self.name("x");
                let b = if self.chance(0.6) { Base::Number } else { Base::Boolean };
                let e = self.base_expr(&scope, b, chunk, false);
                scope.push((x.clone(), SrcType::base(b)));
                vec![(x, e)]
            };
            bindings.extend(new);
        }
        let b = if self.chance(0.6) { Base::Number } else { Base::Boolean };
        let body = self.base_expr(&scope, b, left.max(1), false);
        bindings.into_iter().rev().fold(body, |acc, (x, e)| SrcExpr::let_(x, e, acc))
    }
}

pub fn gen_program(seed: u64, size: usize) -> Program {
    gen_program_with(seed, GenConfig::new(size))
}

/// Deterministic per seed. Candidates that Phase 1 rejects are discarded and
/// regenerated from the same stream; after 64 misses the result is `0`.
pub fn gen_program_with(seed: u64, cfg: GenConfig) -> Program {
    let mut g = Gen { rng: ChaCha8Rng::seed_from_u64(seed), cfg, next: 0 };
    for _ in 0..64 {
        g.next = 0;
        let p = Program::new(g.program());
        if p.main.annotations().iter().all(|t| t.wf().well_formed) && elaborate_program(&p).is_ok() {
            return p;
        }
    }
    Program::new(SrcExpr::int(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic() {
        assert_eq!(gen_program(1, 30).to_string(), gen_program(1, 30).to_string());
        assert_ne!(gen_program(1, 30).to_string(), gen_program(2, 30).to_string());
    }

    #[test]
    fn unit_budget_gives_a_constant() {
        for seed in 0..20 {
            assert!(matches!(gen_program(seed, 1).main, SrcExpr::Const(_)));
        }
    }

    #[test]
    fn generated_programs_elaborate() {
        for seed in 0..40 {
            let p = gen_program(seed, 30);
            assert!(elaborate_program(&p).is_ok(), "{p}");
        }
    }
}
