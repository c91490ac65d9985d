//! The four implicit substitutions: term substitution `M[N/x]`, structural
//! substitution `M[N·γ/α]`, insertion `M[N/α]` and renaming `M[β/α]`.
//!
//! All four share one capture-avoiding traversal. They differ only in what
//! they replace (a variable or a name) and in what a matching naming `[α]P`
//! turns into.

use std::collections::{BTreeSet, HashMap};

use crate::ident::{fresh, Ident};
use crate::syntax::{free_idents, Term};

#[derive(Clone, Copy)]
enum Op<'a> {
    /// `M[N/x]`
    Term { x: Ident, n: &'a Term },
    /// `M[N·γ/α]`: `[α]P` becomes `[γ](P N)`
    Struct { a: Ident, n: &'a Term, g: Ident },
    /// `M[N/α]`: `[α]P` becomes `[P]N`
    Insert { a: Ident, n: &'a Term },
    /// `M[β/α]`: `[α]P` becomes `[β]P`
    Rename { a: Ident, b: Ident },
}

impl Op<'_> {
    fn target_var(&self) -> Option<Ident> {
        match self {
            Op::Term { x, .. } => Some(*x),
            _ => None,
        }
    }

    fn target_name(&self) -> Option<Ident> {
        match self {
            Op::Term { .. } => None,
            Op::Struct { a, .. } | Op::Insert { a, .. } | Op::Rename { a, .. } => Some(*a),
        }
    }
}

struct Walker<'a> {
    op: Op<'a>,
    payload_vars: BTreeSet<Ident>,
    payload_names: BTreeSet<Ident>,
}

impl Walker<'_> {
    fn new(op: Op<'_>) -> Walker<'_> {
        let (payload_vars, payload_names) = match op {
            Op::Term { n, .. } | Op::Insert { n, .. } => free_idents(n),
            Op::Struct { n, g, .. } => {
                let (v, mut ns) = free_idents(n);
                ns.insert(g);
                (v, ns)
            }
            Op::Rename { b, .. } => (BTreeSet::new(), BTreeSet::from([b])),
        };
        Walker { op, payload_vars, payload_names }
    }

    /// `active` is false below a binder that shadows the target; the renaming
    /// maps still have to be applied there.
    fn go(
        &self,
        t: &Term,
        active: bool,
        vren: &mut HashMap<Ident, Ident>,
        nren: &mut HashMap<Ident, Ident>,
    ) -> Term {
        match t {
            Term::Var(y) => {
                if let Some(z) = vren.get(y) {
                    return Term::Var(*z);
                }
                match self.op {
                    Op::Term { x, n } if active && *y == x => n.clone(),
                    _ => t.clone(),
                }
            }
            Term::Lam(y, b) | Term::Nu(y, b) => {
                let shadows = self.op.target_var() == Some(*y);
                let still = active && !shadows;
                let capture = still && self.payload_vars.contains(y) && self.target_free_in(b, vren, nren);
                let y2 = if capture { fresh(*y) } else { *y };
                let saved = if capture { vren.insert(*y, y2) } else { vren.remove(y) };
                let body = self.go(b, still, vren, nren);
                restore(vren, *y, saved);
                match t {
                    Term::Lam(..) => Term::Lam(y2, Box::new(body)),
                    _ => Term::Nu(y2, Box::new(body)),
                }
            }
            Term::Mu(c, b) => {
                let shadows = self.op.target_name() == Some(*c);
                let still = active && !shadows;
                let capture = still && self.payload_names.contains(c) && self.target_free_in(b, vren, nren);
                let c2 = if capture { fresh(*c) } else { *c };
                let saved = if capture { nren.insert(*c, c2) } else { nren.remove(c) };
                let body = self.go(b, still, vren, nren);
                restore(nren, *c, saved);
                Term::Mu(c2, Box::new(body))
            }
            Term::Naming(c, b) => {
                let body = self.go(b, active, vren, nren);
                if let Some(c2) = nren.get(c) {
                    return Term::Naming(*c2, Box::new(body));
                }
                if !active || self.op.target_name() != Some(*c) {
                    return Term::Naming(*c, Box::new(body));
                }
                match self.op {
                    Op::Struct { n, g, .. } => Term::naming(g, Term::app(body, n.clone())),
                    Op::Insert { n, .. } => Term::neg_app(body, n.clone()),
                    Op::Rename { b: beta, .. } => Term::Naming(beta, Box::new(body)),
                    Op::Term { .. } => unreachable!(),
                }
            }
            Term::App(m, n) => Term::App(
                Box::new(self.go(m, active, vren, nren)),
                Box::new(self.go(n, active, vren, nren)),
            ),
            Term::NegApp(m, n) => Term::NegApp(
                Box::new(self.go(m, active, vren, nren)),
                Box::new(self.go(n, active, vren, nren)),
            ),
        }
    }

    /// Whether the substitution target occurs free in `body`, seen from the
    /// current position. Renaming a binder is only needed when it does.
    fn target_free_in(&self, body: &Term, vren: &HashMap<Ident, Ident>, nren: &HashMap<Ident, Ident>) -> bool {
        let (vars, names) = free_idents(body);
        match (self.op.target_var(), self.op.target_name()) {
            (Some(x), _) => vars.contains(&x) && !vren.contains_key(&x),
            (_, Some(a)) => names.contains(&a) && !nren.contains_key(&a),
            _ => false,
        }
    }
}

fn restore(map: &mut HashMap<Ident, Ident>, key: Ident, saved: Option<Ident>) {
    match saved {
        Some(v) => {
            map.insert(key, v);
        }
        None => {
            map.remove(&key);
        }
    }
}

fn run(m: &Term, op: Op<'_>) -> Term {
    Walker::new(op).go(m, true, &mut HashMap::new(), &mut HashMap::new())
}

/// `M[N/x]`
pub fn subst_term(m: &Term, n: &Term, x: Ident) -> Term {
    run(m, Op::Term { x, n })
}

/// `M[N·γ/α]`. `γ` should be fresh for `M` and `N`.
pub fn subst_struct(m: &Term, n: &Term, a: Ident, g: Ident) -> Term {
    run(m, Op::Struct { a, n, g })
}

/// `M[N/α]`
pub fn subst_insert(m: &Term, n: &Term, a: Ident) -> Term {
    run(m, Op::Insert { a, n })
}

/// `M[β/α]`: free occurrences of the name `α` become `β`.
pub fn rename_name(m: &Term, b: Ident, a: Ident) -> Term {
    run(m, Op::Rename { a, b })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{alpha_eq, free_vars};

    fn v(x: &str) -> Term {
        Term::var(x)
    }

    fn id(s: &str) -> Ident {
        Ident::new(s)
    }

    #[test]
    fn term_substitution_basics() {
        assert_eq!(subst_term(&v("x"), &v("n"), id("x")), v("n"));
        let t = Term::lam("y", v("x"));
        assert_eq!(subst_term(&t, &v("z"), id("x")), Term::lam("y", v("z")));
    }

    #[test]
    fn term_substitution_avoids_capture() {
        let t = Term::lam("y", v("x"));
        let r = subst_term(&t, &v("y"), id("x"));
        match &r {
            Term::Lam(y2, body) => {
                assert_ne!(*y2, id("y"));
                assert_eq!(**body, v("y"));
            }
            _ => panic!("expected abstraction, got {r}"),
        }
        assert!(free_vars(&r).contains(&id("y")));
    }

    #[test]
    fn shadowing_binder_stops_substitution() {
        let t = Term::app(v("x"), Term::lam("x", v("x")));
        assert_eq!(subst_term(&t, &v("z"), id("x")), Term::app(v("z"), Term::lam("x", v("x"))));
        let t = Term::mu("a", Term::naming("a", v("x")));
        assert_eq!(rename_name(&t, id("b"), id("a")), t);
    }

    #[test]
    fn structural_substitution_cases() {
        let n = v("n");
        let r = subst_struct(&Term::naming("a", v("x")), &n, id("a"), id("g"));
        assert_eq!(r, Term::naming("g", Term::app(v("x"), n.clone())));
        let r = subst_struct(&Term::naming("b", v("x")), &n, id("a"), id("g"));
        assert_eq!(r, Term::naming("b", v("x")));
        let t = Term::naming("a", Term::mu("b", Term::naming("a", v("x"))));
        let r = subst_struct(&t, &n, id("a"), id("g"));
        let expected = Term::naming(
            "g",
            Term::app(Term::mu("b", Term::naming("g", Term::app(v("x"), n.clone()))), n.clone()),
        );
        assert!(alpha_eq(&r, &expected), "{r}");
    }

    #[test]
    fn insertion_cases() {
        let n = v("n");
        assert_eq!(subst_insert(&Term::naming("a", v("x")), &n, id("a")), Term::neg_app(v("x"), n.clone()));
        assert_eq!(subst_insert(&Term::naming("b", v("x")), &n, id("a")), Term::naming("b", v("x")));
        let t = Term::naming("a", Term::mu("b", Term::naming("a", v("y"))));
        let r = subst_insert(&t, &n, id("a"));
        let expected = Term::neg_app(Term::mu("b", Term::neg_app(v("y"), n.clone())), n.clone());
        assert!(alpha_eq(&r, &expected), "{r}");
    }

    #[test]
    fn renaming_cases() {
        assert_eq!(rename_name(&Term::naming("a", v("x")), id("b"), id("a")), Term::naming("b", v("x")));
        let t = Term::naming("g", Term::mu("d", Term::naming("g", v("x"))));
        let r = rename_name(&t, id("b"), id("g"));
        assert_eq!(r, Term::naming("b", Term::mu("d", Term::naming("b", v("x")))));
    }

    #[test]
    fn renaming_avoids_name_capture() {
        // (mu 'b.['a]x)['b/'a] must not let 'b be captured
        let t = Term::mu("b", Term::naming("a", v("x")));
        let r = rename_name(&t, id("b"), id("a"));
        match &r {
            Term::Mu(c, body) => {
                assert_ne!(*c, id("b"));
                assert_eq!(**body, Term::naming("b", v("x")));
            }
            _ => panic!("{r}"),
        }
    }

    #[test]
    fn renamed_binder_is_used_in_body() {
        // (\y.y x)[y/x] = \y'.y' y
        let t = Term::lam("y", Term::app(v("y"), v("x")));
        let r = subst_term(&t, &v("y"), id("x"));
        let expected = Term::lam("w", Term::app(v("w"), v("y")));
        assert!(alpha_eq(&r, &expected), "{r}");
    }

    #[test]
    fn inner_binder_with_same_spelling_rebinds() {
        // (\y.(\y.y) x)[y/x]: the inner y must not see the outer rename
        let t = Term::lam("y", Term::app(Term::lam("y", v("y")), v("x")));
        let r = subst_term(&t, &v("y"), id("x"));
        let expected = Term::lam("w", Term::app(Term::lam("u", v("u")), v("y")));
        assert!(alpha_eq(&r, &expected), "{r}");
    }
}
