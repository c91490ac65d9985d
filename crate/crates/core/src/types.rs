//! Types, conclusions, contexts and type substitutions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::ident::Ident;

/// A type variable. `Gen(n)` prints as `pn`; anything else a user writes is
/// kept by name.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TyVar {
    Gen(u32),
    Named(Ident),
}

impl fmt::Display for TyVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TyVar::Gen(n) => write!(f, "p{n}"),
            TyVar::Named(x) => write!(f, "{x}"),
        }
    }
}

impl fmt::Debug for TyVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    Var(TyVar),
    Arrow(Box<Type>, Box<Type>),
    Neg(Box<Type>),
}

impl Type {
    pub fn var(n: u32) -> Type {
        Type::Var(TyVar::Gen(n))
    }

    pub fn named(x: &str) -> Type {
        Type::Var(TyVar::Named(Ident::new(x)))
    }

    pub fn arrow(a: Type, b: Type) -> Type {
        Type::Arrow(Box::new(a), Box::new(b))
    }

    pub fn neg(a: Type) -> Type {
        Type::Neg(Box::new(a))
    }

    pub fn vars(&self) -> BTreeSet<TyVar> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<TyVar>) {
        match self {
            Type::Var(v) => {
                out.insert(*v);
            }
            Type::Arrow(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Type::Neg(a) => a.collect_vars(out),
        }
    }

    /// Variables in order of first occurrence, left to right.
    pub fn vars_in_order(&self, out: &mut Vec<TyVar>) {
        match self {
            Type::Var(v) => {
                if !out.contains(v) {
                    out.push(*v);
                }
            }
            Type::Arrow(a, b) => {
                a.vars_in_order(out);
                b.vars_in_order(out);
            }
            Type::Neg(a) => a.vars_in_order(out),
        }
    }

    pub fn occurs(&self, v: TyVar) -> bool {
        match self {
            Type::Var(w) => *w == v,
            Type::Arrow(a, b) => a.occurs(v) || b.occurs(v),
            Type::Neg(a) => a.occurs(v),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Type::Var(_) => 1,
            Type::Arrow(a, b) => 1 + a.size() + b.size(),
            Type::Neg(a) => 1 + a.size(),
        }
    }

    /// The body of a negated type.
    pub fn un_neg(&self) -> Option<&Type> {
        match self {
            Type::Neg(a) => Some(a),
            _ => None,
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Arrow(a, b) => {
                write_neg_level(a, f)?;
                f.write_str(" -> ")?;
                write!(f, "{b}")
            }
            _ => write_neg_level(self, f),
        }
    }
}

fn write_neg_level(t: &Type, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        Type::Var(v) => write!(f, "{v}"),
        Type::Neg(a) => {
            f.write_str("~")?;
            write_neg_level(a, f)
        }
        Type::Arrow(..) => write!(f, "({t})"),
    }
}

impl fmt::Debug for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// What a judgement concludes: a type, or ⊥ (which is not a type).
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Conclusion {
    Ty(Type),
    Bottom,
}

impl Conclusion {
    pub fn as_type(&self) -> Option<&Type> {
        match self {
            Conclusion::Ty(t) => Some(t),
            Conclusion::Bottom => None,
        }
    }
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conclusion::Ty(t) => write!(f, "{t}"),
            Conclusion::Bottom => f.write_str("#"),
        }
    }
}

impl fmt::Debug for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<Type> for Conclusion {
    fn from(t: Type) -> Conclusion {
        Conclusion::Ty(t)
    }
}

/// Assumptions for term variables and for names. A name is stored with its
/// full (negated) type, so `'a:~p1` is `names['a] = ~p1`.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct TypingContext {
    pub vars: BTreeMap<Ident, Type>,
    pub names: BTreeMap<Ident, Type>,
}

impl TypingContext {
    pub fn new() -> TypingContext {
        TypingContext::default()
    }

    pub fn with_var(mut self, x: impl Into<Ident>, t: Type) -> TypingContext {
        self.vars.insert(x.into(), t);
        self
    }

    pub fn with_name(mut self, a: impl Into<Ident>, t: Type) -> TypingContext {
        self.names.insert(a.into(), t);
        self
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty() && self.names.is_empty()
    }

    /// Every name carries a negated type.
    pub fn names_negated(&self) -> bool {
        self.names.values().all(|t| matches!(t, Type::Neg(_)))
    }

    /// `self ⊆ other`: every statement of `self` also occurs in `other`.
    pub fn is_subset_of(&self, other: &TypingContext) -> bool {
        self.vars.iter().all(|(x, t)| other.vars.get(x) == Some(t))
            && self.names.iter().all(|(a, t)| other.names.get(a) == Some(t))
    }

    pub fn types(&self) -> impl Iterator<Item = &Type> {
        self.vars.values().chain(self.names.values())
    }

    pub fn type_vars(&self) -> BTreeSet<TyVar> {
        let mut out = BTreeSet::new();
        for t in self.types() {
            t.collect_vars(&mut out);
        }
        out
    }
}

impl fmt::Display for TypingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (x, t) in &self.vars {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "{x}:{t}")?;
        }
        for (a, t) in &self.names {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "'{a}:{t}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for TypingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

/// A principal typing: context and conclusion.
#[derive(Clone, PartialEq, Eq)]
pub struct Typing {
    pub context: TypingContext,
    pub conclusion: Conclusion,
}

impl Typing {
    /// Renumbers type variables to `p1, p2, ...` in order of first occurrence:
    /// variables of the context (sorted by subject), then names, then the
    /// conclusion.
    pub fn canonical(&self) -> Typing {
        let mut order = Vec::new();
        for t in self.context.types() {
            t.vars_in_order(&mut order);
        }
        if let Conclusion::Ty(t) = &self.conclusion {
            t.vars_in_order(&mut order);
        }
        let s = TypeSubstitution::from_iter(
            order.into_iter().enumerate().map(|(i, v)| (v, Type::var(i as u32 + 1))),
        );
        s.apply_typing(self)
    }

    pub fn type_vars(&self) -> BTreeSet<TyVar> {
        let mut out = self.context.type_vars();
        if let Conclusion::Ty(t) = &self.conclusion {
            t.collect_vars(&mut out);
        }
        out
    }

    /// `Γ ⊢ M : C`, or `⊢ M : C` when the context is empty.
    pub fn judgement(&self, t: &impl fmt::Display) -> String {
        judgement(&self.context, t, &self.conclusion)
    }
}

pub fn judgement(g: &impl fmt::Display, t: &impl fmt::Display, c: &impl fmt::Display) -> String {
    let g = g.to_string();
    if g.is_empty() {
        format!("⊢ {t} : {c}")
    } else {
        format!("{g} ⊢ {t} : {c}")
    }
}

impl fmt::Debug for Typing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}; {}>", self.context, self.conclusion)
    }
}

/// Finite map from type variables to types.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct TypeSubstitution {
    map: BTreeMap<TyVar, Type>,
}

impl TypeSubstitution {
    pub fn identity() -> TypeSubstitution {
        TypeSubstitution::default()
    }

    pub fn single(v: TyVar, t: Type) -> TypeSubstitution {
        TypeSubstitution::from_iter([(v, t)])
    }

    pub fn is_identity(&self) -> bool {
        self.map.is_empty()
    }

    pub fn get(&self, v: TyVar) -> Option<&Type> {
        self.map.get(&v)
    }

    pub fn bindings(&self) -> impl Iterator<Item = (&TyVar, &Type)> {
        self.map.iter()
    }

    pub fn domain(&self) -> BTreeSet<TyVar> {
        self.map.keys().copied().collect()
    }

    pub fn apply(&self, t: &Type) -> Type {
        match t {
            Type::Var(v) => self.map.get(v).cloned().unwrap_or_else(|| t.clone()),
            Type::Arrow(a, b) => Type::arrow(self.apply(a), self.apply(b)),
            Type::Neg(a) => Type::neg(self.apply(a)),
        }
    }

    pub fn apply_conclusion(&self, c: &Conclusion) -> Conclusion {
        match c {
            Conclusion::Ty(t) => Conclusion::Ty(self.apply(t)),
            Conclusion::Bottom => Conclusion::Bottom,
        }
    }

    pub fn apply_context(&self, g: &TypingContext) -> TypingContext {
        TypingContext {
            vars: g.vars.iter().map(|(x, t)| (*x, self.apply(t))).collect(),
            names: g.names.iter().map(|(a, t)| (*a, self.apply(t))).collect(),
        }
    }

    pub fn apply_typing(&self, t: &Typing) -> Typing {
        Typing {
            context: self.apply_context(&t.context),
            conclusion: self.apply_conclusion(&t.conclusion),
        }
    }

    /// `self ∘ other`, the substitution that applies `other` first.
    pub fn compose(&self, other: &TypeSubstitution) -> TypeSubstitution {
        let mut map: BTreeMap<TyVar, Type> =
            other.map.iter().map(|(v, t)| (*v, self.apply(t))).collect();
        for (v, t) in &self.map {
            map.entry(*v).or_insert_with(|| t.clone());
        }
        map.retain(|v, t| *t != Type::Var(*v));
        TypeSubstitution { map }
    }
}

impl FromIterator<(TyVar, Type)> for TypeSubstitution {
    fn from_iter<I: IntoIterator<Item = (TyVar, Type)>>(iter: I) -> TypeSubstitution {
        let mut map: BTreeMap<TyVar, Type> = iter.into_iter().collect();
        map.retain(|v, t| *t != Type::Var(*v));
        TypeSubstitution { map }
    }
}

impl fmt::Display for TypeSubstitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.map.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v} := {t}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for TypeSubstitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// One-way matching: extends `s` so that `s(pattern) = target`, binding only
/// variables of `pattern`. Variables of `target` are treated as constants.
pub fn match_type(pattern: &Type, target: &Type, s: &mut BTreeMap<TyVar, Type>) -> bool {
    match (pattern, target) {
        (Type::Var(v), _) => match s.get(v) {
            Some(bound) => bound == target,
            None => {
                s.insert(*v, target.clone());
                true
            }
        },
        (Type::Arrow(a, b), Type::Arrow(c, d)) => match_type(a, c, s) && match_type(b, d, s),
        (Type::Neg(a), Type::Neg(c)) => match_type(a, c, s),
        _ => false,
    }
}
