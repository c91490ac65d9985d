//! The λμ fragment: its own syntax, typing by embedding, and an independent
//! one-step reducer used to check that embedding preserves reduction.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::ident::{fresh, Ident};
use crate::infer::{check, pt, TypeError};
use crate::parse::{parse_raw, Dialect, ParseError, Raw};
use crate::syntax::{rename_apart, Term};
use crate::types::{Conclusion, Type, TypingContext};

/// A λμ term. μ and naming only occur together, as `μα.[β]M`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum LmuTerm {
    Var(Ident),
    Lam(Ident, Box<LmuTerm>),
    App(Box<LmuTerm>, Box<LmuTerm>),
    /// `μα.[β]M`
    ContextSwitch(Ident, Ident, Box<LmuTerm>),
}

impl LmuTerm {
    pub fn var(x: impl Into<Ident>) -> LmuTerm {
        LmuTerm::Var(x.into())
    }

    pub fn lam(x: impl Into<Ident>, b: LmuTerm) -> LmuTerm {
        LmuTerm::Lam(x.into(), Box::new(b))
    }

    pub fn app(m: LmuTerm, n: LmuTerm) -> LmuTerm {
        LmuTerm::App(Box::new(m), Box::new(n))
    }

    pub fn switch(a: impl Into<Ident>, b: impl Into<Ident>, m: LmuTerm) -> LmuTerm {
        LmuTerm::ContextSwitch(a.into(), b.into(), Box::new(m))
    }

    pub fn size(&self) -> usize {
        match self {
            LmuTerm::Var(_) => 1,
            LmuTerm::Lam(_, b) => 1 + b.size(),
            LmuTerm::App(m, n) => 1 + m.size() + n.size(),
            LmuTerm::ContextSwitch(_, _, b) => 2 + b.size(),
        }
    }
}

impl fmt::Display for LmuTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", embed_lmu(self))
    }
}

impl fmt::Debug for LmuTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The λμ term as a term of the full calculus: `μα.[β]M` becomes
/// `Mu(α, Naming(β, M))`, everything else is unchanged.
pub fn embed_lmu(t: &LmuTerm) -> Term {
    match t {
        LmuTerm::Var(x) => Term::Var(*x),
        LmuTerm::Lam(x, b) => Term::lam(*x, embed_lmu(b)),
        LmuTerm::App(m, n) => Term::app(embed_lmu(m), embed_lmu(n)),
        LmuTerm::ContextSwitch(a, b, m) => Term::mu(*a, Term::naming(*b, embed_lmu(m))),
    }
}

/// The inverse of [`embed_lmu`] on the λμ fragment.
pub fn project_lmu(t: &Term) -> Option<LmuTerm> {
    Some(match t {
        Term::Var(x) => LmuTerm::Var(*x),
        Term::Lam(x, b) => LmuTerm::lam(*x, project_lmu(b)?),
        Term::App(m, n) => LmuTerm::app(project_lmu(m)?, project_lmu(n)?),
        Term::Mu(a, body) => match &**body {
            Term::Naming(b, m) => LmuTerm::switch(*a, *b, project_lmu(m)?),
            _ => return None,
        },
        Term::Nu(..) | Term::NegApp(..) | Term::Naming(..) => return None,
    })
}

/// Parses a λμ term; `mu` must be followed directly by a naming, and `nu`
/// and negated application are rejected.
pub fn parse_lmu(text: &str) -> Result<LmuTerm, ParseError> {
    let raw = parse_raw(text, Dialect::Lmu)?;
    check_raw(&raw)?;
    let t = rename_apart(&raw_to_term(&raw));
    Ok(project_lmu(&t).expect("checked fragment projects"))
}

fn raw_to_term(r: &Raw) -> Term {
    match r {
        Raw::Var(x) => Term::var(x.as_str()),
        Raw::Lam(x, b) => Term::lam(x.as_str(), raw_to_term(b)),
        Raw::MuName(a, b) => Term::mu(a.as_str(), raw_to_term(b)),
        Raw::App(m, n) => Term::app(raw_to_term(m), raw_to_term(n)),
        Raw::Naming(a, b) => Term::naming(a.as_str(), raw_to_term(b)),
        Raw::Nu(..) | Raw::NegApp(..) | Raw::MuVar(..) => unreachable!("rejected by check_raw"),
    }
}

fn check_raw(r: &Raw) -> Result<(), ParseError> {
    let bad = |m: &str| Err(ParseError { offset: 0, message: m.to_string() });
    match r {
        Raw::Var(_) => Ok(()),
        Raw::Lam(_, b) => check_raw(b),
        Raw::App(m, n) => check_raw(m).and(check_raw(n)),
        Raw::MuName(_, b) => match &**b {
            Raw::Naming(_, m) => check_raw(m),
            _ => bad("in the lmu dialect mu must be followed by a naming, as in mu 'a.['b]M"),
        },
        Raw::Naming(..) => bad("in the lmu dialect a naming may only follow mu"),
        Raw::Nu(..) => bad("the lmu dialect has no nu"),
        Raw::NegApp(..) => bad("the lmu dialect has no negated application"),
        Raw::MuVar(..) => bad("the lmu dialect has no variable-binding mu"),
    }
}

/// A λμ judgement `Γ ⊢ M : A | Δ`, with `Δ` mapping names to (non-negated)
/// types.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LmuJudgement {
    pub gamma: BTreeMap<Ident, Type>,
    pub term: LmuTerm,
    pub ty: Type,
    pub delta: BTreeMap<Ident, Type>,
}

impl LmuJudgement {
    /// `Γ, ¬Δ` as a context of the full calculus.
    pub fn l_context(&self) -> TypingContext {
        TypingContext {
            vars: self.gamma.clone(),
            names: self.delta.iter().map(|(a, t)| (*a, Type::neg(t.clone()))).collect(),
        }
    }
}

impl fmt::Display for LmuJudgement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |m: &BTreeMap<Ident, Type>, quote: &str| {
            m.iter().map(|(x, t)| format!("{quote}{x}:{t}")).collect::<Vec<_>>().join(", ")
        };
        let j = crate::types::judgement(&join(&self.gamma, ""), &self.term, &self.ty);
        if self.delta.is_empty() {
            f.write_str(&j)
        } else {
            write!(f, "{j} | {}", join(&self.delta, "'"))
        }
    }
}

/// Principal λμ typing: embed, type in the full calculus, and read the name
/// assumptions back as the alternative conclusions `Δ`.
pub fn type_lmu(t: &LmuTerm) -> Result<LmuJudgement, TypeError> {
    let typing = pt(&embed_lmu(t))?;
    let ty = match typing.conclusion {
        Conclusion::Ty(a) => a,
        Conclusion::Bottom => unreachable!("λμ terms never conclude ⊥"),
    };
    let delta = typing
        .context
        .names
        .iter()
        .map(|(a, t)| (*a, t.un_neg().expect("names carry negated types").clone()))
        .collect();
    Ok(LmuJudgement { gamma: typing.context.vars, term: t.clone(), ty, delta })
}

/// Conservativity of typing: a λμ judgement holds in the full calculus with
/// the names negated into the context.
pub fn check_lmu_in_l(j: &LmuJudgement) -> bool {
    check(&j.l_context(), &embed_lmu(&j.term), &Conclusion::Ty(j.ty.clone()))
}

// ---------------------------------------------------------------------------
// Independent λμ reduction

fn free(t: &LmuTerm) -> (BTreeSet<Ident>, BTreeSet<Ident>) {
    fn go(t: &LmuTerm, bv: &mut Vec<Ident>, bn: &mut Vec<Ident>, v: &mut BTreeSet<Ident>, n: &mut BTreeSet<Ident>) {
        match t {
            LmuTerm::Var(x) => {
                if !bv.contains(x) {
                    v.insert(*x);
                }
            }
            LmuTerm::Lam(x, b) => {
                bv.push(*x);
                go(b, bv, bn, v, n);
                bv.pop();
            }
            LmuTerm::App(a, b) => {
                go(a, bv, bn, v, n);
                go(b, bv, bn, v, n);
            }
            LmuTerm::ContextSwitch(a, b, m) => {
                bn.push(*a);
                if !bn.contains(b) {
                    n.insert(*b);
                }
                go(m, bv, bn, v, n);
                bn.pop();
            }
        }
    }
    let mut v = BTreeSet::new();
    let mut n = BTreeSet::new();
    go(t, &mut vec![], &mut vec![], &mut v, &mut n);
    (v, n)
}

/// Renames every binder of `t` to a new identifier, so that substituting into
/// the result can capture nothing.
fn freshen(t: &LmuTerm) -> LmuTerm {
    fn go(t: &LmuTerm, vs: &mut Vec<(Ident, Ident)>, ns: &mut Vec<(Ident, Ident)>) -> LmuTerm {
        let look = |s: &Vec<(Ident, Ident)>, x: Ident| s.iter().rev().find(|p| p.0 == x).map_or(x, |p| p.1);
        match t {
            LmuTerm::Var(x) => LmuTerm::Var(look(vs, *x)),
            LmuTerm::Lam(x, b) => {
                let y = fresh(*x);
                vs.push((*x, y));
                let b = go(b, vs, ns);
                vs.pop();
                LmuTerm::lam(y, b)
            }
            LmuTerm::App(m, n) => LmuTerm::app(go(m, vs, ns), go(n, vs, ns)),
            LmuTerm::ContextSwitch(a, b, m) => {
                let c = fresh(*a);
                ns.push((*a, c));
                let target = look(ns, *b);
                let m = go(m, vs, ns);
                ns.pop();
                LmuTerm::switch(c, target, m)
            }
        }
    }
    go(t, &mut vec![], &mut vec![])
}

/// `M[N/x]` on a freshened `M`.
fn subst_var(m: &LmuTerm, n: &LmuTerm, x: Ident) -> LmuTerm {
    match m {
        LmuTerm::Var(y) if *y == x => n.clone(),
        LmuTerm::Var(_) => m.clone(),
        LmuTerm::Lam(y, b) => LmuTerm::lam(*y, subst_var(b, n, x)),
        LmuTerm::App(p, q) => LmuTerm::app(subst_var(p, n, x), subst_var(q, n, x)),
        LmuTerm::ContextSwitch(a, b, p) => LmuTerm::switch(*a, *b, subst_var(p, n, x)),
    }
}

/// `M[N·γ/α]` on a freshened `M`: `μδ.[α]P` becomes `μδ.[γ](P N)`.
fn subst_struct(m: &LmuTerm, n: &LmuTerm, a: Ident, g: Ident) -> LmuTerm {
    match m {
        LmuTerm::Var(_) => m.clone(),
        LmuTerm::Lam(y, b) => LmuTerm::lam(*y, subst_struct(b, n, a, g)),
        LmuTerm::App(p, q) => LmuTerm::app(subst_struct(p, n, a, g), subst_struct(q, n, a, g)),
        LmuTerm::ContextSwitch(d, b, p) => {
            let p = subst_struct(p, n, a, g);
            if *b == a {
                LmuTerm::switch(*d, g, LmuTerm::app(p, n.clone()))
            } else {
                LmuTerm::switch(*d, *b, p)
            }
        }
    }
}

/// `M[β/γ]` on a freshened `M`.
fn rename(m: &LmuTerm, b: Ident, g: Ident) -> LmuTerm {
    match m {
        LmuTerm::Var(_) => m.clone(),
        LmuTerm::Lam(y, p) => LmuTerm::lam(*y, rename(p, b, g)),
        LmuTerm::App(p, q) => LmuTerm::app(rename(p, b, g), rename(q, b, g)),
        LmuTerm::ContextSwitch(d, e, p) => LmuTerm::switch(*d, if *e == g { b } else { *e }, rename(p, b, g)),
    }
}

fn root_steps(t: &LmuTerm) -> Vec<LmuTerm> {
    let mut out = Vec::new();
    match t {
        LmuTerm::App(m, n) => match &**m {
            LmuTerm::Lam(..) => {
                let LmuTerm::Lam(x, body) = freshen(m) else { unreachable!() };
                out.push(subst_var(&body, n, x));
            }
            LmuTerm::ContextSwitch(..) => {
                let LmuTerm::ContextSwitch(a, b, body) = freshen(m) else { unreachable!() };
                let g = fresh(a);
                // (μα.[β]M)N → μγ.([β]M)[N·γ/α]
                let inner = LmuTerm::switch(g, b, (*body).clone());
                let LmuTerm::ContextSwitch(_, b2, p) = subst_struct(&inner, n, a, g) else { unreachable!() };
                out.push(LmuTerm::ContextSwitch(g, b2, p));
            }
            _ => {}
        },
        LmuTerm::ContextSwitch(a, b, m) => {
            if a == b && !free(m).1.contains(a) {
                out.push((**m).clone());
            }
            if let LmuTerm::ContextSwitch(..) = &**m {
                let LmuTerm::ContextSwitch(g, d, body) = freshen(m) else { unreachable!() };
                let renamed = rename(&body, *b, g);
                let head = if d == g { *b } else { d };
                out.push(LmuTerm::switch(*a, head, renamed));
            }
        }
        _ => {}
    }
    out
}

/// All one-step λμ reducts (rules β, μ, θ, ρ under any context).
pub fn lmu_steps(t: &LmuTerm) -> Vec<LmuTerm> {
    let mut out = root_steps(t);
    match t {
        LmuTerm::Var(_) => {}
        LmuTerm::Lam(x, b) => out.extend(lmu_steps(b).into_iter().map(|b2| LmuTerm::lam(*x, b2))),
        LmuTerm::App(m, n) => {
            out.extend(lmu_steps(m).into_iter().map(|m2| LmuTerm::app(m2, (**n).clone())));
            out.extend(lmu_steps(n).into_iter().map(|n2| LmuTerm::app((**m).clone(), n2)));
        }
        LmuTerm::ContextSwitch(a, b, m) => {
            out.extend(lmu_steps(m).into_iter().map(|m2| LmuTerm::switch(*a, *b, m2)));
        }
    }
    out
}
