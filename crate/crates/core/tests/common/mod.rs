//! Oracles that share no code with the library's inference or substitution.
#![allow(dead_code)]

use std::collections::HashMap;

use lcalc::{Conclusion, Ident, Term, TyVar, Type, TypingContext};

/// Types for the constraint checker: the judgement's own variables are rigid
/// constants, binder types are metavariables.
#[derive(Clone, Debug, PartialEq, Eq)]
enum T {
    Rigid(TyVar),
    Meta(usize),
    Arr(Box<T>, Box<T>),
    Neg(Box<T>),
}

#[derive(Default)]
struct Solver {
    metas: Vec<Option<T>>,
}

impl Solver {
    fn meta(&mut self) -> T {
        self.metas.push(None);
        T::Meta(self.metas.len() - 1)
    }

    fn resolve(&self, t: &T) -> T {
        match t {
            T::Meta(m) => match &self.metas[*m] {
                Some(u) => self.resolve(u),
                None => t.clone(),
            },
            _ => t.clone(),
        }
    }

    fn occurs(&self, m: usize, t: &T) -> bool {
        match self.resolve(t) {
            T::Meta(n) => n == m,
            T::Rigid(_) => false,
            T::Arr(a, b) => self.occurs(m, &a) || self.occurs(m, &b),
            T::Neg(a) => self.occurs(m, &a),
        }
    }

    fn eq(&mut self, a: &T, b: &T) -> bool {
        let (a, b) = (self.resolve(a), self.resolve(b));
        match (&a, &b) {
            (T::Meta(m), T::Meta(n)) if m == n => true,
            (T::Meta(m), _) => {
                if self.occurs(*m, &b) {
                    return false;
                }
                self.metas[*m] = Some(b);
                true
            }
            (_, T::Meta(_)) => self.eq(&b, &a),
            (T::Rigid(v), T::Rigid(w)) => v == w,
            (T::Arr(a1, b1), T::Arr(a2, b2)) => self.eq(a1, a2) && self.eq(b1, b2),
            (T::Neg(a1), T::Neg(a2)) => self.eq(a1, a2),
            _ => false,
        }
    }
}

fn lift(t: &Type) -> T {
    match t {
        Type::Var(v) => T::Rigid(*v),
        Type::Arrow(a, b) => T::Arr(Box::new(lift(a)), Box::new(lift(b))),
        Type::Neg(a) => T::Neg(Box::new(lift(a))),
    }
}

/// `None` stands for ⊥.
fn infer(
    s: &mut Solver,
    vars: &mut HashMap<Ident, Vec<T>>,
    names: &mut HashMap<Ident, Vec<T>>,
    t: &Term,
) -> Result<Option<T>, ()> {
    let ty = |r: Result<Option<T>, ()>| r.and_then(|o| o.ok_or(()));
    match t {
        Term::Var(x) => vars.get(x).and_then(|v| v.last()).cloned().map(Some).ok_or(()),
        Term::Lam(x, b) => {
            let a = s.meta();
            vars.entry(*x).or_default().push(a.clone());
            let r = ty(infer(s, vars, names, b));
            vars.get_mut(x).unwrap().pop();
            Ok(Some(T::Arr(Box::new(a), Box::new(r?))))
        }
        Term::Nu(x, b) => {
            let a = s.meta();
            vars.entry(*x).or_default().push(a.clone());
            let r = infer(s, vars, names, b);
            vars.get_mut(x).unwrap().pop();
            match r? {
                None => Ok(Some(T::Neg(Box::new(a)))),
                Some(_) => Err(()),
            }
        }
        Term::Mu(al, b) => {
            let a = s.meta();
            names.entry(*al).or_default().push(T::Neg(Box::new(a.clone())));
            let r = infer(s, vars, names, b);
            names.get_mut(al).unwrap().pop();
            match r? {
                None => Ok(Some(a)),
                Some(_) => Err(()),
            }
        }
        Term::App(m, n) => {
            let f = ty(infer(s, vars, names, m))?;
            let a = ty(infer(s, vars, names, n))?;
            let r = s.meta();
            if s.eq(&f, &T::Arr(Box::new(a), Box::new(r.clone()))) {
                Ok(Some(r))
            } else {
                Err(())
            }
        }
        Term::NegApp(m, n) => {
            let f = ty(infer(s, vars, names, m))?;
            let a = ty(infer(s, vars, names, n))?;
            if s.eq(&f, &T::Neg(Box::new(a))) {
                Ok(None)
            } else {
                Err(())
            }
        }
        Term::Naming(al, b) => {
            let n = names.get(al).and_then(|v| v.last()).cloned().ok_or(())?;
            let a = ty(infer(s, vars, names, b))?;
            if s.eq(&n, &T::Neg(Box::new(a))) {
                Ok(None)
            } else {
                Err(())
            }
        }
    }
}

/// `Γ ⊢ M : C` by constraint solving. Names in `Γ` must carry negated types.
pub fn derivable(g: &TypingContext, t: &Term, c: &Conclusion) -> bool {
    if g.names.values().any(|t| !matches!(t, Type::Neg(_))) {
        return false;
    }
    let mut s = Solver::default();
    let mut vars: HashMap<Ident, Vec<T>> = g.vars.iter().map(|(x, t)| (*x, vec![lift(t)])).collect();
    let mut names: HashMap<Ident, Vec<T>> = g.names.iter().map(|(a, t)| (*a, vec![lift(t)])).collect();
    match (infer(&mut s, &mut vars, &mut names, t), c) {
        (Ok(None), Conclusion::Bottom) => true,
        (Ok(Some(r)), Conclusion::Ty(a)) => s.eq(&r, &lift(a)),
        _ => false,
    }
}

/// Nameless form: variables and names are indexed separately, counting
/// only binders of their own class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Db {
    FreeVar(Ident),
    BoundVar(usize),
    Lam(Box<Db>),
    Nu(Box<Db>),
    App(Box<Db>, Box<Db>),
    NegApp(Box<Db>, Box<Db>),
    Mu(Box<Db>),
    FreeNaming(Ident, Box<Db>),
    BoundNaming(usize, Box<Db>),
}

pub fn nameless(t: &Term) -> Db {
    fn go(t: &Term, vs: &mut Vec<Ident>, ns: &mut Vec<Ident>) -> Db {
        match t {
            Term::Var(x) => match vs.iter().rev().position(|y| y == x) {
                Some(i) => Db::BoundVar(i),
                None => Db::FreeVar(*x),
            },
            Term::Lam(x, b) | Term::Nu(x, b) => {
                vs.push(*x);
                let b = Box::new(go(b, vs, ns));
                vs.pop();
                if matches!(t, Term::Lam(..)) {
                    Db::Lam(b)
                } else {
                    Db::Nu(b)
                }
            }
            Term::Mu(a, b) => {
                ns.push(*a);
                let b = Box::new(go(b, vs, ns));
                ns.pop();
                Db::Mu(b)
            }
            Term::Naming(a, b) => {
                let body = Box::new(go(b, vs, ns));
                match ns.iter().rev().position(|y| y == a) {
                    Some(i) => Db::BoundNaming(i, body),
                    None => Db::FreeNaming(*a, body),
                }
            }
            Term::App(m, n) => Db::App(Box::new(go(m, vs, ns)), Box::new(go(n, vs, ns))),
            Term::NegApp(m, n) => Db::NegApp(Box::new(go(m, vs, ns)), Box::new(go(n, vs, ns))),
        }
    }
    go(t, &mut Vec::new(), &mut Vec::new())
}

/// Shifts bound indices of `t` at or above the cutoffs.
fn shift(t: &Db, dv: usize, dn: usize, cv: usize, cn: usize) -> Db {
    match t {
        Db::FreeVar(_) => t.clone(),
        Db::BoundVar(i) => Db::BoundVar(if *i >= cv { i + dv } else { *i }),
        Db::Lam(b) => Db::Lam(Box::new(shift(b, dv, dn, cv + 1, cn))),
        Db::Nu(b) => Db::Nu(Box::new(shift(b, dv, dn, cv + 1, cn))),
        Db::Mu(b) => Db::Mu(Box::new(shift(b, dv, dn, cv, cn + 1))),
        Db::App(m, n) => Db::App(Box::new(shift(m, dv, dn, cv, cn)), Box::new(shift(n, dv, dn, cv, cn))),
        Db::NegApp(m, n) => Db::NegApp(Box::new(shift(m, dv, dn, cv, cn)), Box::new(shift(n, dv, dn, cv, cn))),
        Db::FreeNaming(a, b) => Db::FreeNaming(*a, Box::new(shift(b, dv, dn, cv, cn))),
        Db::BoundNaming(i, b) => {
            Db::BoundNaming(if *i >= cn { i + dn } else { *i }, Box::new(shift(b, dv, dn, cv, cn)))
        }
    }
}

/// Reference `M[N/x]` for a free variable `x`, on nameless terms.
pub fn db_subst_var(t: &Db, n: &Db, x: Ident, dv: usize, dn: usize) -> Db {
    let rec = |b: &Db, dv, dn| Box::new(db_subst_var(b, n, x, dv, dn));
    match t {
        Db::FreeVar(y) if *y == x => shift(n, dv, dn, 0, 0),
        Db::FreeVar(_) | Db::BoundVar(_) => t.clone(),
        Db::Lam(b) => Db::Lam(rec(b, dv + 1, dn)),
        Db::Nu(b) => Db::Nu(rec(b, dv + 1, dn)),
        Db::Mu(b) => Db::Mu(rec(b, dv, dn + 1)),
        Db::App(m, k) => Db::App(rec(m, dv, dn), rec(k, dv, dn)),
        Db::NegApp(m, k) => Db::NegApp(rec(m, dv, dn), rec(k, dv, dn)),
        Db::FreeNaming(a, b) => Db::FreeNaming(*a, rec(b, dv, dn)),
        Db::BoundNaming(i, b) => Db::BoundNaming(*i, rec(b, dv, dn)),
    }
}

/// Reference `M[N·γ/α]` for a free name `α` and a name `γ` free everywhere.
pub fn db_subst_struct(t: &Db, n: &Db, a: Ident, g: Ident, dv: usize, dn: usize) -> Db {
    let rec = |b: &Db, dv, dn| Box::new(db_subst_struct(b, n, a, g, dv, dn));
    match t {
        Db::FreeVar(_) | Db::BoundVar(_) => t.clone(),
        Db::Lam(b) => Db::Lam(rec(b, dv + 1, dn)),
        Db::Nu(b) => Db::Nu(rec(b, dv + 1, dn)),
        Db::Mu(b) => Db::Mu(rec(b, dv, dn + 1)),
        Db::App(m, k) => Db::App(rec(m, dv, dn), rec(k, dv, dn)),
        Db::NegApp(m, k) => Db::NegApp(rec(m, dv, dn), rec(k, dv, dn)),
        Db::FreeNaming(b, body) if *b == a => {
            Db::FreeNaming(g, Box::new(Db::App(rec(body, dv, dn), Box::new(shift(n, dv, dn, 0, 0)))))
        }
        Db::FreeNaming(b, body) => Db::FreeNaming(*b, rec(body, dv, dn)),
        Db::BoundNaming(i, body) => Db::BoundNaming(*i, rec(body, dv, dn)),
    }
}

/// Reference `M[N/α]`: each `[α]P` becomes `[P']N`.
pub fn db_subst_insert(t: &Db, n: &Db, a: Ident, dv: usize, dn: usize) -> Db {
    let rec = |b: &Db, dv, dn| Box::new(db_subst_insert(b, n, a, dv, dn));
    match t {
        Db::FreeVar(_) | Db::BoundVar(_) => t.clone(),
        Db::Lam(b) => Db::Lam(rec(b, dv + 1, dn)),
        Db::Nu(b) => Db::Nu(rec(b, dv + 1, dn)),
        Db::Mu(b) => Db::Mu(rec(b, dv, dn + 1)),
        Db::App(m, k) => Db::App(rec(m, dv, dn), rec(k, dv, dn)),
        Db::NegApp(m, k) => Db::NegApp(rec(m, dv, dn), rec(k, dv, dn)),
        Db::FreeNaming(b, body) if *b == a => Db::NegApp(rec(body, dv, dn), Box::new(shift(n, dv, dn, 0, 0))),
        Db::FreeNaming(b, body) => Db::FreeNaming(*b, rec(body, dv, dn)),
        Db::BoundNaming(i, body) => Db::BoundNaming(*i, rec(body, dv, dn)),
    }
}

pub fn ident(s: &str) -> Ident {
    Ident::new(s)
}
