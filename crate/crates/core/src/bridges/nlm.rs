//! νλμ: syntax, principal typing (⊥ is a type here) and the translation
//! into the full calculus.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use indexmap::IndexMap;

use crate::ident::{fresh, Ident};
use crate::parse::{parse_raw, tyvar_of, Dialect, ParseError, Raw, RawType};
use crate::syntax::Term;
use crate::types::{Conclusion, TyVar, Type, TypingContext};

/// A νλμ term: one identifier class, and μ binds a variable.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum NlmTerm {
    Var(Ident),
    Lam(Ident, Box<NlmTerm>),
    App(Box<NlmTerm>, Box<NlmTerm>),
    Nu(Ident, Box<NlmTerm>),
    NegApp(Box<NlmTerm>, Box<NlmTerm>),
    Mu(Ident, Box<NlmTerm>),
}

impl NlmTerm {
    pub fn var(x: impl Into<Ident>) -> NlmTerm {
        NlmTerm::Var(x.into())
    }

    pub fn lam(x: impl Into<Ident>, b: NlmTerm) -> NlmTerm {
        NlmTerm::Lam(x.into(), Box::new(b))
    }

    pub fn app(m: NlmTerm, n: NlmTerm) -> NlmTerm {
        NlmTerm::App(Box::new(m), Box::new(n))
    }

    pub fn nu(x: impl Into<Ident>, b: NlmTerm) -> NlmTerm {
        NlmTerm::Nu(x.into(), Box::new(b))
    }

    pub fn neg_app(m: NlmTerm, n: NlmTerm) -> NlmTerm {
        NlmTerm::NegApp(Box::new(m), Box::new(n))
    }

    pub fn mu(x: impl Into<Ident>, b: NlmTerm) -> NlmTerm {
        NlmTerm::Mu(x.into(), Box::new(b))
    }

    pub fn size(&self) -> usize {
        match self {
            NlmTerm::Var(_) => 1,
            NlmTerm::Lam(_, b) | NlmTerm::Nu(_, b) | NlmTerm::Mu(_, b) => 1 + b.size(),
            NlmTerm::App(m, n) | NlmTerm::NegApp(m, n) => 1 + m.size() + n.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Ident> {
        fn go(t: &NlmTerm, bound: &mut Vec<Ident>, out: &mut BTreeSet<Ident>) {
            match t {
                NlmTerm::Var(x) => {
                    if !bound.contains(x) {
                        out.insert(*x);
                    }
                }
                NlmTerm::Lam(x, b) | NlmTerm::Nu(x, b) | NlmTerm::Mu(x, b) => {
                    bound.push(*x);
                    go(b, bound, out);
                    bound.pop();
                }
                NlmTerm::App(m, n) | NlmTerm::NegApp(m, n) => {
                    go(m, bound, out);
                    go(n, bound, out);
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for NlmTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NlmTerm::Lam(x, b) => write!(f, "\\{x}.{b}"),
            NlmTerm::Nu(x, b) => write!(f, "nu {x}.{b}"),
            NlmTerm::Mu(x, b) => write!(f, "mu {x}.{b}"),
            NlmTerm::App(..) => write_app(self, f),
            _ => write_atom(self, f),
        }
    }
}

fn write_app(t: &NlmTerm, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        NlmTerm::App(m, n) => {
            write_app(m, f)?;
            f.write_str(" ")?;
            write_atom(n, f)
        }
        _ => write_atom(t, f),
    }
}

fn write_atom(t: &NlmTerm, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        NlmTerm::Var(x) => write!(f, "{x}"),
        NlmTerm::NegApp(m, n) => {
            write!(f, "[{m}]")?;
            write_atom(n, f)
        }
        _ => write!(f, "({t})"),
    }
}

impl fmt::Debug for NlmTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn raw_to_nlm(r: &Raw) -> NlmTerm {
    match r {
        Raw::Var(x) => NlmTerm::var(x.as_str()),
        Raw::Lam(x, b) => NlmTerm::lam(x.as_str(), raw_to_nlm(b)),
        Raw::Nu(x, b) => NlmTerm::nu(x.as_str(), raw_to_nlm(b)),
        Raw::MuVar(x, b) => NlmTerm::mu(x.as_str(), raw_to_nlm(b)),
        Raw::App(m, n) => NlmTerm::app(raw_to_nlm(m), raw_to_nlm(n)),
        Raw::NegApp(m, n) => NlmTerm::neg_app(raw_to_nlm(m), raw_to_nlm(n)),
        Raw::MuName(..) | Raw::Naming(..) => unreachable!("the nlm parser produces no names"),
    }
}

/// Renames binders that clash with another binder or a free variable.
pub fn rename_apart_nlm(t: &NlmTerm) -> NlmTerm {
    fn go(t: &NlmTerm, map: &mut Vec<(Ident, Ident)>, used: &mut BTreeSet<Ident>) -> NlmTerm {
        match t {
            NlmTerm::Var(x) => NlmTerm::Var(map.iter().rev().find(|p| p.0 == *x).map_or(*x, |p| p.1)),
            NlmTerm::Lam(x, b) | NlmTerm::Nu(x, b) | NlmTerm::Mu(x, b) => {
                let y = if used.contains(x) { fresh(*x) } else { *x };
                used.insert(y);
                map.push((*x, y));
                let b = Box::new(go(b, map, used));
                map.pop();
                match t {
                    NlmTerm::Lam(..) => NlmTerm::Lam(y, b),
                    NlmTerm::Nu(..) => NlmTerm::Nu(y, b),
                    _ => NlmTerm::Mu(y, b),
                }
            }
            NlmTerm::App(m, n) => NlmTerm::app(go(m, map, used), go(n, map, used)),
            NlmTerm::NegApp(m, n) => NlmTerm::neg_app(go(m, map, used), go(n, map, used)),
        }
    }
    go(t, &mut Vec::new(), &mut t.free_vars())
}

pub fn parse_nlm(text: &str) -> Result<NlmTerm, ParseError> {
    Ok(rename_apart_nlm(&raw_to_nlm(&parse_raw(text, Dialect::Nlm)?)))
}

// ---------------------------------------------------------------------------
// Types

/// νλμ types: ⊥ is a type.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NlmType {
    Bottom,
    Var(TyVar),
    Arrow(Box<NlmType>, Box<NlmType>),
    Neg(Box<NlmType>),
}

impl NlmType {
    pub fn var(n: u32) -> NlmType {
        NlmType::Var(TyVar::Gen(n))
    }

    pub fn arrow(a: NlmType, b: NlmType) -> NlmType {
        NlmType::Arrow(Box::new(a), Box::new(b))
    }

    pub fn neg(a: NlmType) -> NlmType {
        NlmType::Neg(Box::new(a))
    }

    fn occurs(&self, v: TyVar) -> bool {
        match self {
            NlmType::Bottom => false,
            NlmType::Var(w) => *w == v,
            NlmType::Arrow(a, b) => a.occurs(v) || b.occurs(v),
            NlmType::Neg(a) => a.occurs(v),
        }
    }

    fn vars_in_order(&self, out: &mut Vec<TyVar>) {
        match self {
            NlmType::Bottom => {}
            NlmType::Var(v) => {
                if !out.contains(v) {
                    out.push(*v);
                }
            }
            NlmType::Arrow(a, b) => {
                a.vars_in_order(out);
                b.vars_in_order(out);
            }
            NlmType::Neg(a) => a.vars_in_order(out),
        }
    }

    /// The same type in the full calculus, if it does not mention ⊥.
    pub fn to_type(&self) -> Option<Type> {
        Some(match self {
            NlmType::Bottom => return None,
            NlmType::Var(v) => Type::Var(*v),
            NlmType::Arrow(a, b) => Type::arrow(a.to_type()?, b.to_type()?),
            NlmType::Neg(a) => Type::neg(a.to_type()?),
        })
    }

    /// As a conclusion of the full calculus: ⊥ may only stand at the top.
    pub fn to_conclusion(&self) -> Option<Conclusion> {
        match self {
            NlmType::Bottom => Some(Conclusion::Bottom),
            t => t.to_type().map(Conclusion::Ty),
        }
    }

    pub fn from_type(t: &Type) -> NlmType {
        match t {
            Type::Var(v) => NlmType::Var(*v),
            Type::Arrow(a, b) => NlmType::arrow(NlmType::from_type(a), NlmType::from_type(b)),
            Type::Neg(a) => NlmType::neg(NlmType::from_type(a)),
        }
    }

    pub fn from_conclusion(c: &Conclusion) -> NlmType {
        match c {
            Conclusion::Bottom => NlmType::Bottom,
            Conclusion::Ty(t) => NlmType::from_type(t),
        }
    }
}

impl fmt::Display for NlmType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn neg_level(t: &NlmType, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match t {
                NlmType::Bottom => f.write_str("#"),
                NlmType::Var(v) => write!(f, "{v}"),
                NlmType::Neg(a) => {
                    f.write_str("~")?;
                    neg_level(a, f)
                }
                NlmType::Arrow(..) => write!(f, "({t})"),
            }
        }
        match self {
            NlmType::Arrow(a, b) => {
                neg_level(a, f)?;
                write!(f, " -> {b}")
            }
            _ => neg_level(self, f),
        }
    }
}

impl fmt::Debug for NlmType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn raw_to_nlm_type(r: &RawType) -> NlmType {
    match r {
        RawType::Var(v) => NlmType::Var(tyvar_of(v)),
        RawType::Bottom => NlmType::Bottom,
        RawType::Arrow(a, b) => NlmType::arrow(raw_to_nlm_type(a), raw_to_nlm_type(b)),
        RawType::Neg(a) => NlmType::neg(raw_to_nlm_type(a)),
    }
}

/// Parses a νλμ type; `#` may occur anywhere.
pub fn parse_nlm_type(text: &str) -> Result<NlmType, ParseError> {
    Ok(raw_to_nlm_type(&crate::parse::parse_raw_type(text)?))
}

#[derive(Clone, Default, PartialEq, Eq, Debug)]
struct NlmSubst(BTreeMap<TyVar, NlmType>);

impl NlmSubst {
    fn apply(&self, t: &NlmType) -> NlmType {
        match t {
            NlmType::Bottom => NlmType::Bottom,
            NlmType::Var(v) => self.0.get(v).cloned().unwrap_or_else(|| t.clone()),
            NlmType::Arrow(a, b) => NlmType::arrow(self.apply(a), self.apply(b)),
            NlmType::Neg(a) => NlmType::neg(self.apply(a)),
        }
    }

    fn compose(&self, other: &NlmSubst) -> NlmSubst {
        let mut m: BTreeMap<TyVar, NlmType> = other.0.iter().map(|(v, t)| (*v, self.apply(t))).collect();
        for (v, t) in &self.0 {
            m.entry(*v).or_insert_with(|| t.clone());
        }
        m.retain(|v, t| *t != NlmType::Var(*v));
        NlmSubst(m)
    }

    fn apply_ctx(&self, g: &BTreeMap<Ident, NlmType>) -> BTreeMap<Ident, NlmType> {
        g.iter().map(|(x, t)| (*x, self.apply(t))).collect()
    }
}

fn unify(a: &NlmType, b: &NlmType) -> Option<NlmSubst> {
    match (a, b) {
        (NlmType::Var(v), NlmType::Var(w)) if v == w => Some(NlmSubst::default()),
        (NlmType::Var(v), _) => {
            (!b.occurs(*v)).then(|| NlmSubst(BTreeMap::from([(*v, b.clone())])))
        }
        (_, NlmType::Var(_)) => unify(b, a),
        (NlmType::Bottom, NlmType::Bottom) => Some(NlmSubst::default()),
        (NlmType::Arrow(a1, b1), NlmType::Arrow(a2, b2)) => {
            let s1 = unify(a1, a2)?;
            let s2 = unify(&s1.apply(b1), &s1.apply(b2))?;
            Some(s2.compose(&s1))
        }
        (NlmType::Neg(a1), NlmType::Neg(a2)) => unify(a1, a2),
        _ => None,
    }
}

fn unify_ctx(g1: &BTreeMap<Ident, NlmType>, g2: &BTreeMap<Ident, NlmType>) -> Option<NlmSubst> {
    let mut s = NlmSubst::default();
    for (x, a) in g1 {
        if let Some(b) = g2.get(x) {
            s = unify(&s.apply(a), &s.apply(b))?.compose(&s);
        }
    }
    Some(s)
}

/// A νλμ typing: assumptions for the free variables and the type.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NlmTyping {
    pub context: BTreeMap<Ident, NlmType>,
    pub ty: NlmType,
}

impl NlmTyping {
    fn canonical(&self) -> NlmTyping {
        let mut order = Vec::new();
        for t in self.context.values() {
            t.vars_in_order(&mut order);
        }
        self.ty.vars_in_order(&mut order);
        let s = NlmSubst(order.into_iter().enumerate().map(|(i, v)| (v, NlmType::var(i as u32 + 1))).collect());
        NlmTyping { context: s.apply_ctx(&self.context), ty: s.apply(&self.ty) }
    }

    /// Whether ⊥ occurs inside a type (anywhere other than as the whole
    /// conclusion).
    pub fn bottom_inside(&self) -> bool {
        self.context.values().any(|t| t.to_type().is_none()) || self.ty.to_conclusion().is_none()
    }
}

impl fmt::Display for NlmTyping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ctx: Vec<String> = self.context.iter().map(|(x, t)| format!("{x}:{t}")).collect();
        if ctx.is_empty() {
            write!(f, "⊢ {}", self.ty)
        } else {
            write!(f, "{} ⊢ {}", ctx.join(", "), self.ty)
        }
    }
}

struct Infer {
    next: u32,
}

impl Infer {
    fn fresh(&mut self) -> NlmType {
        self.next += 1;
        NlmType::var(self.next)
    }

    fn merge(s: &NlmSubst, g1: &BTreeMap<Ident, NlmType>, g2: &BTreeMap<Ident, NlmType>) -> BTreeMap<Ident, NlmType> {
        let mut g = s.apply_ctx(g1);
        g.extend(s.apply_ctx(g2));
        g
    }

    fn run(&mut self, t: &NlmTerm) -> Option<NlmTyping> {
        match t {
            NlmTerm::Var(x) => {
                let v = self.fresh();
                Some(NlmTyping { context: BTreeMap::from([(*x, v.clone())]), ty: v })
            }
            NlmTerm::Lam(x, m) => {
                let NlmTyping { mut context, ty } = self.run(m)?;
                let a = context.remove(x).unwrap_or_else(|| self.fresh());
                Some(NlmTyping { context, ty: NlmType::arrow(a, ty) })
            }
            NlmTerm::App(m, n) => {
                let t1 = self.run(m)?;
                let t2 = self.run(n)?;
                let v = self.fresh();
                let s1 = unify(&t1.ty, &NlmType::arrow(t2.ty.clone(), v.clone()))?;
                let s2 = unify_ctx(&s1.apply_ctx(&t1.context), &s1.apply_ctx(&t2.context))?;
                let s = s2.compose(&s1);
                Some(NlmTyping { context: Infer::merge(&s, &t1.context, &t2.context), ty: s.apply(&v) })
            }
            NlmTerm::Nu(x, m) => {
                let t1 = self.run(m)?;
                let s = unify(&t1.ty, &NlmType::Bottom)?;
                let mut context = s.apply_ctx(&t1.context);
                let a = context.remove(x).unwrap_or_else(|| self.fresh());
                Some(NlmTyping { context, ty: NlmType::neg(a) })
            }
            NlmTerm::NegApp(m, n) => {
                let t1 = self.run(m)?;
                let t2 = self.run(n)?;
                let s1 = unify(&t1.ty, &NlmType::neg(t2.ty.clone()))?;
                let s2 = unify_ctx(&s1.apply_ctx(&t1.context), &s1.apply_ctx(&t2.context))?;
                let s = s2.compose(&s1);
                Some(NlmTyping { context: Infer::merge(&s, &t1.context, &t2.context), ty: NlmType::Bottom })
            }
            NlmTerm::Mu(x, m) => {
                let t1 = self.run(m)?;
                let s = unify(&t1.ty, &NlmType::Bottom)?;
                let mut context = s.apply_ctx(&t1.context);
                match context.remove(x) {
                    None => Some(NlmTyping { context, ty: self.fresh() }),
                    Some(b) => {
                        let v = self.fresh();
                        let s2 = unify(&b, &NlmType::neg(v.clone()))?;
                        Some(NlmTyping { context: s2.apply_ctx(&context), ty: s2.apply(&v) })
                    }
                }
            }
        }
    }
}

/// Principal νλμ typing, variables renumbered left to right.
pub fn typecheck_nlm(t: &NlmTerm) -> Option<NlmTyping> {
    Some(Infer { next: 0 }.run(t)?.canonical())
}

// ---------------------------------------------------------------------------
// Translation

/// Names chosen for the μ-bound variables, in order of appearance.
pub type VMap = IndexMap<Ident, Ident>;

fn name_for(i: usize) -> Ident {
    let letter = (b'a' + (i % 26) as u8) as char;
    if i < 26 {
        Ident::new(&letter.to_string())
    } else {
        Ident::new(&format!("{letter}{}", i / 26))
    }
}

/// Collects the μ-bound variables of `t`, pre-order, each with a distinct
/// name `'a`, `'b`, ...
pub fn ul(t: &NlmTerm) -> VMap {
    fn go(t: &NlmTerm, out: &mut VMap) {
        match t {
            NlmTerm::Var(_) => {}
            NlmTerm::Lam(_, b) | NlmTerm::Nu(_, b) => go(b, out),
            NlmTerm::Mu(x, b) => {
                let a = name_for(out.len());
                out.insert(*x, a);
                go(b, out);
            }
            NlmTerm::App(m, n) | NlmTerm::NegApp(m, n) => {
                go(m, out);
                go(n, out);
            }
        }
    }
    let mut out = VMap::new();
    go(t, &mut out);
    out
}

/// The translation into the full calculus: a variable `x` with `α/x` in `v`
/// becomes `νx.[α]x`, `μx.M` becomes `μα.⟦M⟧`, and every other constructor is
/// kept.
pub fn translate(t: &NlmTerm, v: &VMap) -> Term {
    match t {
        NlmTerm::Var(x) => match v.get(x) {
            Some(a) => Term::nu(*x, Term::naming(*a, Term::Var(*x))),
            None => Term::Var(*x),
        },
        NlmTerm::Lam(x, b) => Term::lam(*x, translate(b, v)),
        NlmTerm::Nu(x, b) => Term::nu(*x, translate(b, v)),
        NlmTerm::App(m, n) => Term::app(translate(m, v), translate(n, v)),
        NlmTerm::NegApp(m, n) => Term::neg_app(translate(m, v), translate(n, v)),
        NlmTerm::Mu(x, b) => {
            let a = *v.get(x).unwrap_or_else(|| panic!("no name for mu-bound {x}; the map must cover ul(t)"));
            Term::mu(a, translate(b, v))
        }
    }
}

/// Translates a context: `x:A` becomes `α:A` when `α/x` is in `v`. Returns
/// `None` if some type mentions ⊥.
pub fn translate_context(g: &BTreeMap<Ident, NlmType>, v: &VMap) -> Option<TypingContext> {
    let mut out = TypingContext::new();
    for (x, t) in g {
        let t = t.to_type()?;
        match v.get(x) {
            Some(a) => {
                out.names.insert(*a, t);
            }
            None => {
                out.vars.insert(*x, t);
            }
        }
    }
    Some(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TranslateError {
    Untypeable,
    /// The principal typing mentions ⊥ inside a type, which the full calculus
    /// cannot express.
    BottomInType(String),
}

impl fmt::Display for TranslateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TranslateError::Untypeable => f.write_str("the term is not typeable in nlm"),
            TranslateError::BottomInType(t) => {
                write!(f, "the principal typing {t} uses # inside a type, which has no counterpart")
            }
        }
    }
}

impl std::error::Error for TranslateError {}

/// The translated term, context and conclusion, for a term whose principal
/// typing has ⊥ at most as the whole conclusion.
pub fn translate_checked(t: &NlmTerm) -> Result<(TypingContext, Term, Conclusion), TranslateError> {
    let typing = typecheck_nlm(t).ok_or(TranslateError::Untypeable)?;
    if typing.bottom_inside() {
        return Err(TranslateError::BottomInType(typing.to_string()));
    }
    let v = ul(t);
    let g = translate_context(&typing.context, &v).expect("checked above");
    let c = typing.ty.to_conclusion().expect("checked above");
    Ok((g, translate(t, &v), c))
}

/// Reads a term of the full calculus as a νλμ term, treating names as
/// variables. Names are mapped to fresh variables so the two classes cannot
/// collide; the map is returned.
pub fn l_as_nlm(t: &Term) -> (NlmTerm, BTreeMap<Ident, Ident>) {
    fn go(t: &Term, names: &mut BTreeMap<Ident, Ident>) -> NlmTerm {
        match t {
            Term::Var(x) => NlmTerm::Var(*x),
            Term::Lam(x, b) => NlmTerm::lam(*x, go(b, names)),
            Term::Nu(x, b) => NlmTerm::nu(*x, go(b, names)),
            Term::App(m, n) => NlmTerm::app(go(m, names), go(n, names)),
            Term::NegApp(m, n) => NlmTerm::neg_app(go(m, names), go(n, names)),
            Term::Mu(a, b) => {
                let x = *names.entry(*a).or_insert_with(|| fresh(*a));
                NlmTerm::mu(x, go(b, names))
            }
            Term::Naming(a, b) => {
                let x = *names.entry(*a).or_insert_with(|| fresh(*a));
                NlmTerm::neg_app(NlmTerm::Var(x), go(b, names))
            }
        }
    }
    let mut names = BTreeMap::new();
    let n = go(t, &mut names);
    (n, names)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::infer::check;
    use crate::parse::parse_term;
    use crate::syntax::alpha_eq;

    fn ty(s: &str) -> NlmType {
        parse_nlm_type(s).unwrap()
    }

    #[test]
    fn dne_in_nlm() {
        let t = typecheck_nlm(&parse_nlm("\\y.mu x.[y]x").unwrap()).unwrap();
        assert!(t.context.is_empty());
        assert_eq!(t.ty, ty("~~p1 -> p1"));
    }

    #[test]
    fn contraposition_in_nlm() {
        let t = typecheck_nlm(&parse_nlm("\\x.\\y.nu z.[y](x z)").unwrap()).unwrap();
        assert_eq!(t.ty, ty("(p1 -> p2) -> ~p2 -> ~p1"));
    }

    #[test]
    fn bottom_is_a_type_in_nlm() {
        let t = typecheck_nlm(&parse_nlm("nu y.mu x.[x]y").unwrap()).unwrap();
        assert_eq!(t.ty, ty("~#"));
        assert!(t.bottom_inside());
        assert!(matches!(
            translate_checked(&parse_nlm("nu y.mu x.[x]y").unwrap()),
            Err(TranslateError::BottomInType(_))
        ));
    }

    #[test]
    fn ul_examples() {
        assert!(ul(&parse_nlm("x").unwrap()).is_empty());
        let v = ul(&parse_nlm("mu x.[x]y").unwrap());
        assert_eq!(v.len(), 1);
        let v = ul(&parse_nlm("\\z.mu x.mu w.[x]w").unwrap());
        assert_eq!(v.len(), 2);
        let names: BTreeSet<_> = v.values().collect();
        assert_eq!(names.len(), 2);
    }

    #[test]
    fn translate_examples() {
        let x = parse_nlm("x").unwrap();
        let v = VMap::from([(Ident::new("x"), Ident::new("a"))]);
        assert_eq!(translate(&x, &v), parse_term("nu x.['a]x").unwrap());

        let a3 = parse_nlm("\\x.\\y.mu z.[x z](y z)").unwrap();
        let out = translate(&a3, &ul(&a3));
        let expected = parse_term("\\x.\\y.mu 'a.[x(nu z.['a]z)](y(nu z.['a]z))").unwrap();
        assert!(alpha_eq(&out, &expected), "{out}");

        let t = parse_nlm("mu y.[y]m").unwrap();
        let out = translate(&t, &ul(&t));
        assert!(alpha_eq(&out, &parse_term("mu 'a.[nu y.['a]y]m").unwrap()), "{out}");
    }

    #[test]
    fn translation_keeps_the_type() {
        for s in ["\\y.mu x.[y]x", "\\x.\\y.mu z.[x z](y z)", "\\x.\\y.nu z.[y](x z)", "\\x.\\y.mu z.[x(nu w.[z]w)]y"] {
            let t = parse_nlm(s).unwrap();
            let (g, m, c) = translate_checked(&t).unwrap();
            assert!(check(&g, &m, &c), "{s} -> {m}");
        }
    }

    #[test]
    fn l_terms_read_as_nlm_terms() {
        let t = parse_term("\\y.mu 'a.[y](nu x.['a]x)").unwrap();
        let (n, _) = l_as_nlm(&t);
        let typing = typecheck_nlm(&n).unwrap();
        assert_eq!(typing.ty, ty("~~p1 -> p1"));
    }
}
