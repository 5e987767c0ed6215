use std::fmt;

use crate::logic::{value_var, CmpOp, LinTerm, Pred};
use crate::name::Fresh;
use crate::syntax::{Base, SrcType};
use crate::target::RefType;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Lt,
    Le,
    Eq,
    Ne,
    Not,
}

impl Op {
    pub const ALL: [Op; 8] = [Op::Add, Op::Sub, Op::Mul, Op::Lt, Op::Le, Op::Eq, Op::Ne, Op::Not];

    pub fn name(self) -> &'static str {
        match self {
            Op::Add => "add",
            Op::Sub => "sub",
            Op::Mul => "mul",
            Op::Lt => "lt",
            Op::Le => "le",
            Op::Eq => "eq",
            Op::Ne => "ne",
            Op::Not => "not",
        }
    }

    pub fn from_name(s: &str) -> Option<Op> {
        Op::ALL.into_iter().find(|op| op.name() == s)
    }

    pub fn is_binary(self) -> bool {
        self != Op::Not
    }

    pub(crate) fn cmp(self) -> Option<CmpOp> {
        Some(match self {
            Op::Lt => CmpOp::Lt,
            Op::Le => CmpOp::Le,
            Op::Eq => CmpOp::Eq,
            Op::Ne => CmpOp::Ne,
            _ => return None,
        })
    }

    /// Result base of the fully applied operator.
    pub fn result_base(self) -> Base {
        match self {
            Op::Add | Op::Sub | Op::Mul => Base::Number,
            _ => Base::Boolean,
        }
    }
}

/// Primitive constants. `Partial(op, k)` is the curried result `δ(op, k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Prim {
    Int(i64),
    Bool(bool),
    Op(Op),
    Partial(Op, i64),
}

fn arith(op: Op, a: i64, b: i64) -> Prim {
    match op {
        Op::Add => Prim::Int(a.wrapping_add(b)),
        Op::Sub => Prim::Int(a.wrapping_sub(b)),
        Op::Mul => Prim::Int(a.wrapping_mul(b)),
        Op::Lt => Prim::Bool(a < b),
        Op::Le => Prim::Bool(a <= b),
        Op::Eq => Prim::Bool(a == b),
        Op::Ne => Prim::Bool(a != b),
        Op::Not => unreachable!("not is unary"),
    }
}

impl Prim {
    pub fn is_function(self) -> bool {
        matches!(self, Prim::Op(_) | Prim::Partial(..))
    }

    /// `δ(c, v)`; `None` outside the constant's domain.
    pub fn delta(self, arg: Prim) -> Option<Prim> {
        match (self, arg) {
            (Prim::Op(Op::Not), Prim::Bool(b)) => Some(Prim::Bool(!b)),
            (Prim::Op(op), Prim::Int(k)) if op.is_binary() => Some(Prim::Partial(op, k)),
            (Prim::Partial(op, k), Prim::Int(m)) => Some(arith(op, k, m)),
            _ => None,
        }
    }

    /// Domain base of a function constant.
    pub fn domain(self) -> Option<Base> {
        match self {
            Prim::Op(Op::Not) => Some(Base::Boolean),
            Prim::Op(_) | Prim::Partial(..) => Some(Base::Number),
            _ => None,
        }
    }

    /// Source type: the refined type with binder-dependent refinements dropped.
    pub fn src_type(self) -> SrcType {
        match self {
            Prim::Int(_) | Prim::Bool(_) => match self.ref_type(&mut Fresh::new()) {
                RefType::Base(b, p) => SrcType::Prim(b, p),
                _ => unreachable!(),
            },
            Prim::Op(Op::Not) => SrcType::fun(SrcType::boolean(), SrcType::boolean()),
            Prim::Op(op) => SrcType::fun(
                SrcType::number(),
                SrcType::fun(SrcType::number(), SrcType::base(op.result_base())),
            ),
            Prim::Partial(op, _) => SrcType::fun(SrcType::number(), SrcType::base(op.result_base())),
        }
    }

    /// `ty(c)`: a refined type encoding the exact semantics where the logic allows.
    pub fn ref_type(self, fresh: &mut Fresh) -> RefType {
        let nu = || LinTerm::var(value_var());
        match self {
            Prim::Int(k) => RefType::Base(Base::Number, Pred::cmp(nu(), CmpOp::Eq, LinTerm::constant(k))),
            Prim::Bool(true) => RefType::Base(Base::Boolean, Pred::bool_var(value_var())),
            Prim::Bool(false) => RefType::Base(Base::Boolean, Pred::bool_var(value_var()).negate()),
            Prim::Op(Op::Not) => {
                let x = fresh.name("d");
                let cod = Pred::iff(Pred::bool_var(value_var()), Pred::Not(Box::new(Pred::bool_var(x.clone()))));
                RefType::fun(x, RefType::top(Base::Boolean), RefType::Base(Base::Boolean, cod))
            }
            Prim::Op(op) => {
                let x = fresh.name("d");
                let y = fresh.name("d");
                let cod = result_pred(op, LinTerm::var(x.clone()), LinTerm::var(y.clone()));
                RefType::fun(
                    x,
                    RefType::top(Base::Number),
                    RefType::fun(y, RefType::top(Base::Number), RefType::Base(op.result_base(), cod)),
                )
            }
            Prim::Partial(op, k) => {
                let y = fresh.name("d");
                let cod = result_pred(op, LinTerm::constant(k), LinTerm::var(y.clone()));
                RefType::fun(y, RefType::top(Base::Number), RefType::Base(op.result_base(), cod))
            }
        }
    }

    fn fmt_name(self) -> String {
        match self {
            Prim::Int(k) => k.to_string(),
            Prim::Bool(b) => b.to_string(),
            Prim::Op(op) => op.name().to_string(),
            Prim::Partial(op, k) => format!("{}@{k}", op.name()),
        }
    }
}

fn result_pred(op: Op, a: LinTerm, b: LinTerm) -> Pred {
    let nu = LinTerm::var(value_var());
    match op {
        Op::Add => Pred::cmp(nu, CmpOp::Eq, a.add(&b)),
        Op::Sub => Pred::cmp(nu, CmpOp::Eq, a.sub(&b)),
        Op::Mul => match a.mul(&b) {
            Some(t) => Pred::cmp(nu, CmpOp::Eq, t),
            None => Pred::tt(),
        },
        Op::Not => unreachable!("not is unary"),
        cmp => Pred::iff(Pred::bool_var(value_var()), Pred::cmp(a, cmp.cmp().unwrap(), b)),
    }
}

impl fmt::Display for Prim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_name())
    }
}

/// Names that cannot be bound by programs.
pub fn is_reserved(s: &str) -> bool {
    Op::from_name(s).is_some()
        || matches!(s, "let" | "in" | "if" | "then" | "else" | "type" | "true" | "false" | "number" | "boolean")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curried_delta() {
        let add1 = Prim::Op(Op::Add).delta(Prim::Int(1)).unwrap();
        assert_eq!(add1, Prim::Partial(Op::Add, 1));
        assert_eq!(add1.delta(Prim::Int(2)), Some(Prim::Int(3)));
        assert_eq!(Prim::Op(Op::Not).delta(Prim::Int(3)), None);
        assert_eq!(Prim::Op(Op::Lt).delta(Prim::Bool(true)), None);
        assert_eq!(Prim::Partial(Op::Ne, 0).delta(Prim::Int(0)), Some(Prim::Bool(false)));
    }

    #[test]
    fn refined_types_print() {
        let mut fresh = Fresh::new();
        assert_eq!(Prim::Int(3).ref_type(&mut fresh).to_string(), "{number | v = 3}");
        assert_eq!(Prim::Partial(Op::Sub, 0).ref_type(&mut fresh).to_string(), "$d0:number -> {number | v = -$d0}");
    }
}
