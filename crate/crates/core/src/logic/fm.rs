//! Integer-tightened Fourier–Motzkin refutation for conjunctions of literals.

use std::collections::{BTreeMap, HashSet};

use crate::logic::pred::{CmpOp, LinTerm};
use crate::name::Name;

/// A literal of a DNF conjunct.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Literal {
    Cmp(LinTerm, CmpOp, LinTerm),
    Bool(Name, bool),
}

impl std::fmt::Display for Literal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Literal::Cmp(a, op, b) => write!(f, "{a} {} {b}", op.symbol()),
            Literal::Bool(x, true) => write!(f, "{}", crate::logic::pred::display_name(x)),
            Literal::Bool(x, false) => write!(f, "!{}", crate::logic::pred::display_name(x)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Refutation {
    /// A contradiction was derived.
    Unsat,
    /// Elimination finished without contradiction.
    NotRefuted,
    /// Coefficient overflow or row blow-up; nothing can be concluded.
    GaveUp,
}

const MAX_ROWS: usize = 4000;
const MAX_DISEQ_SPLITS: usize = 12;

/// Row `a·x + c ≤ 0` (or `= 0` for equalities).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Row {
    a: Vec<i128>,
    c: i128,
}

enum Norm {
    Trivial,
    Contradiction,
    Row(Row),
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn normalize(mut r: Row, eq: bool) -> Norm {
    let g = r.a.iter().fold(0, |g, &x| gcd(g, x));
    if g == 0 {
        let ok = if eq { r.c == 0 } else { r.c <= 0 };
        return if ok { Norm::Trivial } else { Norm::Contradiction };
    }
    if eq {
        if r.c % g != 0 {
            return Norm::Contradiction;
        }
        r.a.iter_mut().for_each(|x| *x /= g);
        r.c /= g;
    } else {
        // a·x ≤ -c  ⇔  (a/g)·x ≤ floor(-c/g)  ⇔  (a/g)·x + ceil(c/g) ≤ 0
        r.a.iter_mut().for_each(|x| *x /= g);
        r.c = r.c.div_euclid(g) + i128::from(r.c.rem_euclid(g) != 0);
    }
    Norm::Row(r)
}

/// `k1·r1 + k2·r2`, or `None` on overflow.
fn combine(k1: i128, r1: &Row, k2: i128, r2: &Row) -> Option<Row> {
    let mut a = Vec::with_capacity(r1.a.len());
    for (x, y) in r1.a.iter().zip(&r2.a) {
        a.push(k1.checked_mul(*x)?.checked_add(k2.checked_mul(*y)?)?);
    }
    let c = k1.checked_mul(r1.c)?.checked_add(k2.checked_mul(r2.c)?)?;
    Some(Row { a, c })
}

struct System {
    vars: BTreeMap<Name, usize>,
}

impl System {
    fn row(&self, t: &LinTerm) -> Row {
        let mut a = vec![0i128; self.vars.len()];
        for (x, c) in &t.coeffs {
            a[self.vars[x]] += *c as i128;
        }
        Row { a, c: t.constant as i128 }
    }
}

/// Decide whether a conjunction of literals is unsatisfiable over the integers.
/// Returns `true` only when a contradiction is actually derived.
pub fn fm_unsat(lits: &[Literal]) -> bool {
    refute(lits) == Refutation::Unsat
}

pub fn refute(lits: &[Literal]) -> Refutation {
    let mut polarity: BTreeMap<&Name, bool> = BTreeMap::new();
    for l in lits {
        if let Literal::Bool(x, b) = l {
            if let Some(prev) = polarity.insert(x, *b) {
                if prev != *b {
                    return Refutation::Unsat;
                }
            }
        }
    }
    let mut vars = BTreeMap::new();
    for l in lits {
        if let Literal::Cmp(a, _, b) = l {
            for x in a.coeffs.keys().chain(b.coeffs.keys()) {
                let n = vars.len();
                vars.entry(x.clone()).or_insert(n);
            }
        }
    }
    let sys = System { vars };
    let mut ineqs = Vec::new();
    let mut eqs = Vec::new();
    let mut diseqs = Vec::new();
    for l in lits {
        let Literal::Cmp(lhs, op, rhs) = l else { continue };
        let d = sys.row(&lhs.sub(rhs));
        let neg = Row { a: d.a.iter().map(|x| -x).collect(), c: -d.c };
        match op {
            CmpOp::Le => ineqs.push(d),
            CmpOp::Lt => ineqs.push(Row { c: d.c + 1, ..d }),
            CmpOp::Ge => ineqs.push(neg),
            CmpOp::Gt => ineqs.push(Row { c: neg.c + 1, ..neg }),
            CmpOp::Eq => eqs.push(d),
            CmpOp::Ne => diseqs.push(d),
        }
    }
    let base = eliminate(ineqs.clone(), eqs.clone());
    if base != Refutation::NotRefuted || diseqs.is_empty() {
        return base;
    }
    if diseqs.len() > MAX_DISEQ_SPLITS {
        return Refutation::GaveUp;
    }
    // Each d ≠ 0 splits into d ≤ -1 or -d ≤ -1; unsat iff every branch is.
    let n = diseqs.len();
    let mut gave_up = false;
    for mask in 0u32..(1 << n) {
        let mut branch = ineqs.clone();
        for (i, d) in diseqs.iter().enumerate() {
            if mask & (1 << i) == 0 {
                branch.push(Row { a: d.a.clone(), c: d.c + 1 });
            } else {
                branch.push(Row { a: d.a.iter().map(|x| -x).collect(), c: -d.c + 1 });
            }
        }
        match eliminate(branch, eqs.clone()) {
            Refutation::Unsat => {}
            Refutation::NotRefuted => return Refutation::NotRefuted,
            Refutation::GaveUp => gave_up = true,
        }
    }
    if gave_up {
        Refutation::GaveUp
    } else {
        Refutation::Unsat
    }
}

fn eliminate(ineqs: Vec<Row>, eqs: Vec<Row>) -> Refutation {
    let mut rows = Vec::new();
    for r in ineqs {
        match normalize(r, false) {
            Norm::Trivial => {}
            Norm::Contradiction => return Refutation::Unsat,
            Norm::Row(r) => rows.push(r),
        }
    }
    let mut pending = Vec::new();
    for r in eqs {
        match normalize(r, true) {
            Norm::Trivial => {}
            Norm::Contradiction => return Refutation::Unsat,
            Norm::Row(r) => pending.push(r),
        }
    }

    // Equalities: eliminate one variable per equality by exact combination.
    while let Some(e) = pending.pop() {
        let Some(j) = (0..e.a.len()).filter(|&j| e.a[j] != 0).min_by_key(|&j| e.a[j].abs()) else {
            continue;
        };
        let (aj, sign) = (e.a[j].abs(), e.a[j].signum());
        let mut next_pending = Vec::new();
        for r in pending.drain(..) {
            let r = if r.a[j] == 0 {
                r
            } else {
                match combine(aj, &r, -sign * r.a[j], &e) {
                    Some(r) => r,
                    None => return Refutation::GaveUp,
                }
            };
            match normalize(r, true) {
                Norm::Trivial => {}
                Norm::Contradiction => return Refutation::Unsat,
                Norm::Row(r) => next_pending.push(r),
            }
        }
        pending = next_pending;
        let mut next_rows = Vec::new();
        for r in rows.drain(..) {
            let r = if r.a[j] == 0 {
                r
            } else {
                match combine(aj, &r, -sign * r.a[j], &e) {
                    Some(r) => r,
                    None => return Refutation::GaveUp,
                }
            };
            match normalize(r, false) {
                Norm::Trivial => {}
                Norm::Contradiction => return Refutation::Unsat,
                Norm::Row(r) => next_rows.push(r),
            }
        }
        rows = next_rows;
    }

    // Inequalities: classic Fourier–Motzkin.
    loop {
        let nvars = rows.first().map_or(0, |r| r.a.len());
        let mut best: Option<(usize, usize)> = None;
        for j in 0..nvars {
            let pos = rows.iter().filter(|r| r.a[j] > 0).count();
            let neg = rows.iter().filter(|r| r.a[j] < 0).count();
            if pos + neg == 0 {
                continue;
            }
            let cost = pos * neg;
            if best.is_none_or(|(_, c)| cost < c) {
                best = Some((j, cost));
            }
        }
        let Some((j, _)) = best else {
            return Refutation::NotRefuted;
        };
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for r in rows {
            match r.a[j].signum() {
                1 => pos.push(r),
                -1 => neg.push(r),
                _ => rest.push(r),
            }
        }
        let mut seen: HashSet<Row> = rest.iter().cloned().collect();
        for p in &pos {
            for n in &neg {
                let Some(r) = combine(-n.a[j], p, p.a[j], n) else {
                    return Refutation::GaveUp;
                };
                match normalize(r, false) {
                    Norm::Trivial => {}
                    Norm::Contradiction => return Refutation::Unsat,
                    Norm::Row(r) => {
                        if seen.insert(r.clone()) {
                            rest.push(r);
                        }
                    }
                }
            }
        }
        if rest.len() > MAX_ROWS {
            return Refutation::GaveUp;
        }
        rows = rest;
    }
}
