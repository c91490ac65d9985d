//! The sixteen commutation equations between the four substitutions.
//!
//! Each equation performs a first substitution (binding `x` or `β`) and then
//! a second one (binding `y` or `α`), and compares with the order swapped.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::fuzz::gen::gen_untyped;
use crate::ident::{fresh, Ident};
use crate::subst::{rename_name, subst_insert, subst_struct, subst_term};
use crate::syntax::{alpha_eq, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    /// `M[N/x]`
    Term,
    /// `M[N·γ/α]`
    Struct,
    /// `M[N/α]`
    Insert,
    /// `M[β/α]`
    Rename,
}

pub const KINDS: [Kind; 4] = [Kind::Term, Kind::Struct, Kind::Insert, Kind::Rename];

#[derive(Clone, Debug)]
pub enum Sub {
    Term(Term, Ident),
    Struct(Term, Ident, Ident),
    Insert(Term, Ident),
    /// New name, then the name it replaces.
    Rename(Ident, Ident),
}

impl Sub {
    pub fn apply(&self, m: &Term) -> Term {
        match self {
            Sub::Term(n, x) => subst_term(m, n, *x),
            Sub::Struct(n, a, g) => subst_struct(m, n, *a, *g),
            Sub::Insert(n, a) => subst_insert(m, n, *a),
            Sub::Rename(b, a) => rename_name(m, *b, *a),
        }
    }

    /// The same substitution with `outer` applied to its payload.
    fn under(&self, outer: &Sub) -> Sub {
        match self {
            Sub::Term(n, x) => Sub::Term(outer.apply(n), *x),
            Sub::Struct(n, a, g) => Sub::Struct(outer.apply(n), *a, *g),
            Sub::Insert(n, a) => Sub::Insert(outer.apply(n), *a),
            Sub::Rename(..) => self.clone(),
        }
    }
}

impl fmt::Display for Sub {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sub::Term(n, x) => write!(f, "[{n}/{x}]"),
            Sub::Struct(n, a, g) => write!(f, "[{n}·'{g}/'{a}]"),
            Sub::Insert(n, a) => write!(f, "[{n}/'{a}]"),
            Sub::Rename(b, a) => write!(f, "['{b}/'{a}]"),
        }
    }
}

/// Both sides of equation `(first, second)` on `m`.
pub fn sides(m: &Term, first: &Sub, second: &Sub) -> (Term, Term) {
    let lhs = second.apply(&first.apply(m));
    let rhs = match first {
        Sub::Rename(..) => {
            let r = first.apply(&second.apply(m));
            if matches!(second, Sub::Term(..)) {
                r
            } else {
                second.apply(&r)
            }
        }
        _ => first.under(second).apply(&second.apply(m)),
    };
    (lhs, rhs)
}

/// One random instance of equation `(f, g)`: the term and both substitutions,
/// respecting the side conditions (the first binder does not occur in the
/// second payload, fresh continuation names).
pub fn instance<R: Rng>(rng: &mut R, f: Kind, g: Kind, size: usize) -> (Term, Sub, Sub) {
    let [x, y, z, w] = ["x", "y", "z", "w"].map(Ident::new);
    let [a, b, c, d] = ["a", "b", "c", "d"].map(Ident::new);
    let all_vars = [x, y, z, w];
    let all_names = [a, b, c, d];
    let m = gen_untyped(rng, size, &all_vars, &all_names);
    let n_size = rng.gen_range(1..=size / 2 + 1);
    let n = gen_untyped(rng, n_size, &all_vars, &all_names);
    // the second payload must not mention what the first binds; when the
    // second substitution is applied twice it must not mention its own name
    let (p_vars, p_names): (Vec<Ident>, Vec<Ident>) = match f {
        Kind::Term => (vec![y, z, w], all_names.to_vec()),
        Kind::Rename => (all_vars.to_vec(), vec![c, d]),
        _ => (all_vars.to_vec(), vec![a, c, d]),
    };
    let p_size = rng.gen_range(1..=size / 2 + 1);
    let p = gen_untyped(rng, p_size, &p_vars, &p_names);
    let second = match g {
        Kind::Term => Sub::Term(p, y),
        Kind::Struct => Sub::Struct(p, a, fresh(Ident::new("d"))),
        Kind::Insert => Sub::Insert(p, a),
        Kind::Rename => {
            let target = if f == Kind::Term { *all_names.choose(rng).unwrap() } else { *[c, d].choose(rng).unwrap() };
            Sub::Rename(if rng.gen_bool(0.5) { target } else { fresh(d) }, a)
        }
    };
    let first = match f {
        Kind::Term => Sub::Term(n, x),
        Kind::Struct => Sub::Struct(n, b, fresh(Ident::new("g"))),
        Kind::Insert => Sub::Insert(n, b),
        Kind::Rename => {
            let target = if rng.gen_bool(0.5) && g != Kind::Term { a } else { fresh(Ident::new("g")) };
            Sub::Rename(target, b)
        }
    };
    (m, first, second)
}

/// Checks all sixteen equations once; returns the ones that failed.
pub fn check_all<R: Rng>(rng: &mut R, size: usize) -> Vec<String> {
    let mut failures = Vec::new();
    for (i, f) in KINDS.iter().enumerate() {
        for (j, g) in KINDS.iter().enumerate() {
            let (m, first, second) = instance(rng, *f, *g, size);
            let (lhs, rhs) = sides(&m, &first, &second);
            if !alpha_eq(&lhs, &rhs) {
                failures.push(format!(
                    "equation {}{}: M = {m}, first {first}, then {second}: {lhs} vs {rhs}",
                    i + 1,
                    (b'a' + j as u8) as char
                ));
            }
        }
    }
    failures
}
