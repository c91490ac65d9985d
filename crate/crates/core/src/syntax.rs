//! Abstract syntax of terms, free identifiers and α-equivalence.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::ident::{fresh, Ident};

/// A term of the calculus.
///
/// `Lam` and `Nu` bind term variables, `Mu` binds a name. `NegApp(m, n)` is
/// the negated application `[m]n`; `Naming(a, m)` is `[a]m`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Ident),
    Lam(Ident, Box<Term>),
    App(Box<Term>, Box<Term>),
    Nu(Ident, Box<Term>),
    NegApp(Box<Term>, Box<Term>),
    Mu(Ident, Box<Term>),
    Naming(Ident, Box<Term>),
}

/// Path from the root to a subterm: `0` is the body of a binder or naming and
/// the left side of either application form, `1` is the right side.
pub type Position = Vec<usize>;

impl Term {
    pub fn var(x: impl Into<Ident>) -> Term {
        Term::Var(x.into())
    }

    pub fn lam(x: impl Into<Ident>, body: Term) -> Term {
        Term::Lam(x.into(), Box::new(body))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn nu(x: impl Into<Ident>, body: Term) -> Term {
        Term::Nu(x.into(), Box::new(body))
    }

    pub fn neg_app(m: Term, n: Term) -> Term {
        Term::NegApp(Box::new(m), Box::new(n))
    }

    pub fn mu(a: impl Into<Ident>, body: Term) -> Term {
        Term::Mu(a.into(), Box::new(body))
    }

    pub fn naming(a: impl Into<Ident>, body: Term) -> Term {
        Term::Naming(a.into(), Box::new(body))
    }

    /// Number of constructors.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Lam(_, b) | Term::Nu(_, b) | Term::Mu(_, b) | Term::Naming(_, b) => 1 + b.size(),
            Term::App(m, n) | Term::NegApp(m, n) => 1 + m.size() + n.size(),
        }
    }

    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Var(_) => vec![],
            Term::Lam(_, b) | Term::Nu(_, b) | Term::Mu(_, b) | Term::Naming(_, b) => vec![b],
            Term::App(m, n) | Term::NegApp(m, n) => vec![m, n],
        }
    }

    pub fn subterm(&self, pos: &[usize]) -> Option<&Term> {
        let mut t = self;
        for &i in pos {
            t = *t.children().get(i)?;
        }
        Some(t)
    }

    /// Replaces the subterm at `pos` by `f(old)`. Returns `None` for a bad path.
    pub fn replace_at(&self, pos: &[usize], f: impl FnOnce(&Term) -> Term) -> Option<Term> {
        fn go(t: &Term, pos: &[usize], f: impl FnOnce(&Term) -> Term) -> Option<Term> {
            let Some((&i, rest)) = pos.split_first() else {
                return Some(f(t));
            };
            Some(match (t, i) {
                (Term::Lam(x, b), 0) => Term::Lam(*x, Box::new(go(b, rest, f)?)),
                (Term::Nu(x, b), 0) => Term::Nu(*x, Box::new(go(b, rest, f)?)),
                (Term::Mu(a, b), 0) => Term::Mu(*a, Box::new(go(b, rest, f)?)),
                (Term::Naming(a, b), 0) => Term::Naming(*a, Box::new(go(b, rest, f)?)),
                (Term::App(m, n), 0) => Term::App(Box::new(go(m, rest, f)?), n.clone()),
                (Term::App(m, n), 1) => Term::App(m.clone(), Box::new(go(n, rest, f)?)),
                (Term::NegApp(m, n), 0) => Term::NegApp(Box::new(go(m, rest, f)?), n.clone()),
                (Term::NegApp(m, n), 1) => Term::NegApp(m.clone(), Box::new(go(n, rest, f)?)),
                _ => return None,
            })
        }
        go(self, pos, f)
    }

    /// All positions in pre-order.
    pub fn positions(&self) -> Vec<Position> {
        fn go(t: &Term, here: &mut Position, out: &mut Vec<Position>) {
            out.push(here.clone());
            for (i, c) in t.children().into_iter().enumerate() {
                here.push(i);
                go(c, here, out);
                here.pop();
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// True when the term uses only the λμ constructors: no `ν`, no `[M]N`,
    /// and every `μ` is immediately followed by a naming.
    pub fn is_lmu_fragment(&self) -> bool {
        match self {
            Term::Var(_) => true,
            Term::Lam(_, b) => b.is_lmu_fragment(),
            Term::App(m, n) => m.is_lmu_fragment() && n.is_lmu_fragment(),
            Term::Mu(_, b) => match &**b {
                Term::Naming(_, inner) => inner.is_lmu_fragment(),
                _ => false,
            },
            Term::Nu(..) | Term::NegApp(..) | Term::Naming(..) => false,
        }
    }

    pub fn is_closed(&self) -> bool {
        free_vars(self).is_empty() && free_names(self).is_empty()
    }
}

/// Free term variables.
pub fn free_vars(t: &Term) -> BTreeSet<Ident> {
    let mut out = BTreeSet::new();
    collect_free(t, &mut Vec::new(), &mut Vec::new(), &mut out, &mut BTreeSet::new());
    out
}

/// Free names.
pub fn free_names(t: &Term) -> BTreeSet<Ident> {
    let mut out = BTreeSet::new();
    collect_free(t, &mut Vec::new(), &mut Vec::new(), &mut BTreeSet::new(), &mut out);
    out
}

/// Both free-identifier sets in one pass.
pub fn free_idents(t: &Term) -> (BTreeSet<Ident>, BTreeSet<Ident>) {
    let mut vars = BTreeSet::new();
    let mut names = BTreeSet::new();
    collect_free(t, &mut Vec::new(), &mut Vec::new(), &mut vars, &mut names);
    (vars, names)
}

fn collect_free(
    t: &Term,
    bound_vars: &mut Vec<Ident>,
    bound_names: &mut Vec<Ident>,
    vars: &mut BTreeSet<Ident>,
    names: &mut BTreeSet<Ident>,
) {
    match t {
        Term::Var(x) => {
            if !bound_vars.contains(x) {
                vars.insert(*x);
            }
        }
        Term::Lam(x, b) | Term::Nu(x, b) => {
            bound_vars.push(*x);
            collect_free(b, bound_vars, bound_names, vars, names);
            bound_vars.pop();
        }
        Term::Mu(a, b) => {
            bound_names.push(*a);
            collect_free(b, bound_vars, bound_names, vars, names);
            bound_names.pop();
        }
        Term::Naming(a, b) => {
            if !bound_names.contains(a) {
                names.insert(*a);
            }
            collect_free(b, bound_vars, bound_names, vars, names);
        }
        Term::App(m, n) | Term::NegApp(m, n) => {
            collect_free(m, bound_vars, bound_names, vars, names);
            collect_free(n, bound_vars, bound_names, vars, names);
        }
    }
}

/// Every variable and every name occurring in the term, free or bound.
pub fn all_idents(t: &Term) -> (BTreeSet<Ident>, BTreeSet<Ident>) {
    fn go(t: &Term, vars: &mut BTreeSet<Ident>, names: &mut BTreeSet<Ident>) {
        match t {
            Term::Var(x) => {
                vars.insert(*x);
            }
            Term::Lam(x, b) | Term::Nu(x, b) => {
                vars.insert(*x);
                go(b, vars, names);
            }
            Term::Mu(a, b) | Term::Naming(a, b) => {
                names.insert(*a);
                go(b, vars, names);
            }
            Term::App(m, n) | Term::NegApp(m, n) => {
                go(m, vars, names);
                go(n, vars, names);
            }
        }
    }
    let mut vars = BTreeSet::new();
    let mut names = BTreeSet::new();
    go(t, &mut vars, &mut names);
    (vars, names)
}

/// α-equivalence: equal up to a consistent renaming of bound variables and
/// bound names. Free identifiers must match exactly.
pub fn alpha_eq(t1: &Term, t2: &Term) -> bool {
    // Each scope stack holds binder pairs; lookups scan from the innermost.
    fn lookup(scope: &[(Ident, Ident)], left: Ident, right: Ident) -> bool {
        for &(l, r) in scope.iter().rev() {
            if l == left || r == right {
                return l == left && r == right;
            }
        }
        left == right
    }
    fn go(
        t1: &Term,
        t2: &Term,
        vars: &mut Vec<(Ident, Ident)>,
        names: &mut Vec<(Ident, Ident)>,
    ) -> bool {
        match (t1, t2) {
            (Term::Var(x), Term::Var(y)) => lookup(vars, *x, *y),
            (Term::Lam(x, b1), Term::Lam(y, b2)) | (Term::Nu(x, b1), Term::Nu(y, b2)) => {
                vars.push((*x, *y));
                let r = go(b1, b2, vars, names);
                vars.pop();
                r
            }
            (Term::Mu(a, b1), Term::Mu(b, b2)) => {
                names.push((*a, *b));
                let r = go(b1, b2, vars, names);
                names.pop();
                r
            }
            (Term::Naming(a, b1), Term::Naming(b, b2)) => {
                lookup(names, *a, *b) && go(b1, b2, vars, names)
            }
            (Term::App(m1, n1), Term::App(m2, n2))
            | (Term::NegApp(m1, n1), Term::NegApp(m2, n2)) => {
                go(m1, m2, vars, names) && go(n1, n2, vars, names)
            }
            _ => false,
        }
    }
    go(t1, t2, &mut Vec::new(), &mut Vec::new())
}

/// Nameless form of a term: bound occurrences become binder depths, free
/// identifiers are kept. Two terms are α-equivalent exactly when their
/// canonical keys are equal, which makes the key usable for hashing.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum CanonKey {
    Free(Ident),
    Bound(u32),
    Lam(Box<CanonKey>),
    App(Box<CanonKey>, Box<CanonKey>),
    Nu(Box<CanonKey>),
    NegApp(Box<CanonKey>, Box<CanonKey>),
    Mu(Box<CanonKey>),
    NamingFree(Ident, Box<CanonKey>),
    NamingBound(u32, Box<CanonKey>),
}

pub fn canonical_key(t: &Term) -> CanonKey {
    fn index(scope: &[Ident], x: Ident) -> Option<u32> {
        scope.iter().rev().position(|&y| y == x).map(|i| i as u32)
    }
    fn go(t: &Term, vars: &mut Vec<Ident>, names: &mut Vec<Ident>) -> CanonKey {
        match t {
            Term::Var(x) => match index(vars, *x) {
                Some(i) => CanonKey::Bound(i),
                None => CanonKey::Free(*x),
            },
            Term::Lam(x, b) => {
                vars.push(*x);
                let k = go(b, vars, names);
                vars.pop();
                CanonKey::Lam(Box::new(k))
            }
            Term::Nu(x, b) => {
                vars.push(*x);
                let k = go(b, vars, names);
                vars.pop();
                CanonKey::Nu(Box::new(k))
            }
            Term::Mu(a, b) => {
                names.push(*a);
                let k = go(b, vars, names);
                names.pop();
                CanonKey::Mu(Box::new(k))
            }
            Term::Naming(a, b) => {
                let k = Box::new(go(b, vars, names));
                match index(names, *a) {
                    Some(i) => CanonKey::NamingBound(i, k),
                    None => CanonKey::NamingFree(*a, k),
                }
            }
            Term::App(m, n) => CanonKey::App(Box::new(go(m, vars, names)), Box::new(go(n, vars, names))),
            Term::NegApp(m, n) => {
                CanonKey::NegApp(Box::new(go(m, vars, names)), Box::new(go(n, vars, names)))
            }
        }
    }
    go(t, &mut Vec::new(), &mut Vec::new())
}

/// Renames bound identifiers so that every binder is distinct from every
/// other binder and from every free identifier. Binders that already satisfy
/// this keep their spelling.
pub fn rename_apart(t: &Term) -> Term {
    let (mut used_vars, mut used_names) = free_idents(t);
    fn go(
        t: &Term,
        vars: &mut HashMap<Ident, Ident>,
        names: &mut HashMap<Ident, Ident>,
        used_vars: &mut BTreeSet<Ident>,
        used_names: &mut BTreeSet<Ident>,
    ) -> Term {
        match t {
            Term::Var(x) => Term::Var(*vars.get(x).unwrap_or(x)),
            Term::Lam(x, b) | Term::Nu(x, b) => {
                let y = if used_vars.contains(x) { fresh(*x) } else { *x };
                used_vars.insert(y);
                let saved = vars.insert(*x, y);
                let body = go(b, vars, names, used_vars, used_names);
                restore(vars, *x, saved);
                match t {
                    Term::Lam(..) => Term::Lam(y, Box::new(body)),
                    _ => Term::Nu(y, Box::new(body)),
                }
            }
            Term::Mu(a, b) => {
                let c = if used_names.contains(a) { fresh(*a) } else { *a };
                used_names.insert(c);
                let saved = names.insert(*a, c);
                let body = go(b, vars, names, used_vars, used_names);
                restore(names, *a, saved);
                Term::Mu(c, Box::new(body))
            }
            Term::Naming(a, b) => Term::Naming(
                *names.get(a).unwrap_or(a),
                Box::new(go(b, vars, names, used_vars, used_names)),
            ),
            Term::App(m, n) => Term::App(
                Box::new(go(m, vars, names, used_vars, used_names)),
                Box::new(go(n, vars, names, used_vars, used_names)),
            ),
            Term::NegApp(m, n) => Term::NegApp(
                Box::new(go(m, vars, names, used_vars, used_names)),
                Box::new(go(n, vars, names, used_vars, used_names)),
            ),
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
    go(t, &mut HashMap::new(), &mut HashMap::new(), &mut used_vars, &mut used_names)
}

/// Renames every binder to a deterministic spelling (`v1`, `v2`, ... for
/// variables, `'k1`, `'k2`, ... for names, numbered in pre-order), avoiding
/// free identifiers. Used to make printed reports independent of the global
/// stamp counter.
pub fn canonical_names(t: &Term) -> Term {
    let (free_v, free_n) = free_idents(t);
    fn pick(prefix: &str, next: &mut usize, avoid: &BTreeSet<Ident>) -> Ident {
        loop {
            *next += 1;
            let id = Ident::new(&format!("{prefix}{next}"));
            if !avoid.contains(&id) {
                return id;
            }
        }
    }
    fn go(
        t: &Term,
        vars: &mut Vec<(Ident, Ident)>,
        names: &mut Vec<(Ident, Ident)>,
        st: &mut (usize, usize, &BTreeSet<Ident>, &BTreeSet<Ident>),
    ) -> Term {
        let find = |scope: &Vec<(Ident, Ident)>, x: Ident| {
            scope.iter().rev().find(|(k, _)| *k == x).map(|(_, v)| *v).unwrap_or(x)
        };
        match t {
            Term::Var(x) => Term::Var(find(vars, *x)),
            Term::Lam(x, b) | Term::Nu(x, b) => {
                let y = pick("v", &mut st.0, st.2);
                vars.push((*x, y));
                let body = go(b, vars, names, st);
                vars.pop();
                if matches!(t, Term::Lam(..)) {
                    Term::Lam(y, Box::new(body))
                } else {
                    Term::Nu(y, Box::new(body))
                }
            }
            Term::Mu(a, b) => {
                let c = pick("k", &mut st.1, st.3);
                names.push((*a, c));
                let body = go(b, vars, names, st);
                names.pop();
                Term::Mu(c, Box::new(body))
            }
            Term::Naming(a, b) => Term::Naming(find(names, *a), Box::new(go(b, vars, names, st))),
            Term::App(m, n) => Term::App(Box::new(go(m, vars, names, st)), Box::new(go(n, vars, names, st))),
            Term::NegApp(m, n) => {
                Term::NegApp(Box::new(go(m, vars, names, st)), Box::new(go(n, vars, names, st)))
            }
        }
    }
    let mut st = (0, 0, &free_v, &free_n);
    go(t, &mut Vec::new(), &mut Vec::new(), &mut st)
}

// ---------------------------------------------------------------------------
// Printing

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(self, f)
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(self, f)
    }
}

/// Concrete syntax with minimal parentheses.
pub fn print_term(t: &Term) -> String {
    t.to_string()
}

fn write_term(t: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        Term::Lam(x, b) => {
            write!(f, "\\{x}.")?;
            write_term(b, f)
        }
        Term::Nu(x, b) => {
            write!(f, "nu {x}.")?;
            write_term(b, f)
        }
        Term::Mu(a, b) => {
            write!(f, "mu '{a}.")?;
            write_term(b, f)
        }
        Term::App(..) => write_app(t, f),
        _ => write_atom(t, f),
    }
}

fn write_app(t: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        Term::App(m, n) => {
            write_app(m, f)?;
            f.write_str(" ")?;
            write_atom(n, f)
        }
        _ => write_atom(t, f),
    }
}

fn write_atom(t: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        Term::Var(x) => write!(f, "{x}"),
        Term::Naming(a, b) => {
            write!(f, "['{a}]")?;
            write_atom(b, f)
        }
        Term::NegApp(m, n) => {
            f.write_str("[")?;
            write_term(m, f)?;
            f.write_str("]")?;
            write_atom(n, f)
        }
        _ => {
            f.write_str("(")?;
            write_term(t, f)?;
            f.write_str(")")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dne() -> Term {
        Term::lam(
            "y",
            Term::mu("a", Term::neg_app(Term::var("y"), Term::nu("x", Term::naming("a", Term::var("x"))))),
        )
    }

    #[test]
    fn prints_identity() {
        assert_eq!(print_term(&Term::lam("x", Term::var("x"))), "\\x.x");
    }

    #[test]
    fn prints_dne_witness() {
        assert_eq!(print_term(&dne()), "\\y.mu 'a.[y](nu x.['a]x)");
    }

    #[test]
    fn prints_neg_app_with_mu_on_the_left() {
        let t = Term::neg_app(Term::mu("a", Term::naming("a", Term::var("m"))), Term::var("n"));
        assert_eq!(print_term(&t), "[mu 'a.['a]m]n");
    }

    #[test]
    fn application_parenthesisation() {
        let t = Term::app(Term::app(Term::var("f"), Term::var("x")), Term::app(Term::var("g"), Term::var("y")));
        assert_eq!(print_term(&t), "f x (g y)");
        let t = Term::app(Term::lam("x", Term::var("x")), Term::var("y"));
        assert_eq!(print_term(&t), "(\\x.x) y");
        let t = Term::naming("a", Term::app(Term::var("x"), Term::var("y")));
        assert_eq!(print_term(&t), "['a](x y)");
    }

    #[test]
    fn free_identifiers() {
        let t = Term::naming("a", Term::var("x"));
        assert_eq!(free_names(&t), BTreeSet::from([Ident::new("a")]));
        assert_eq!(free_vars(&t), BTreeSet::from([Ident::new("x")]));
        let t = Term::mu("a", Term::naming("a", Term::var("x")));
        assert!(free_names(&t).is_empty());
        assert!(dne().is_closed());
    }

    #[test]
    fn alpha_equivalence_examples() {
        assert!(alpha_eq(&Term::lam("x", Term::var("x")), &Term::lam("y", Term::var("y"))));
        assert!(alpha_eq(
            &Term::mu("a", Term::naming("a", Term::var("x"))),
            &Term::mu("b", Term::naming("b", Term::var("x")))
        ));
        assert!(!alpha_eq(&Term::naming("a", Term::var("x")), &Term::naming("b", Term::var("x"))));
        // a bound variable never matches a free one of the same spelling
        assert!(!alpha_eq(
            &Term::lam("x", Term::var("y")),
            &Term::lam("y", Term::var("y"))
        ));
        assert!(!alpha_eq(
            &Term::lam("x", Term::lam("y", Term::var("x"))),
            &Term::lam("x", Term::lam("y", Term::var("y")))
        ));
    }

    #[test]
    fn canonical_key_matches_alpha_eq_on_examples() {
        let pairs = [
            (Term::lam("x", Term::var("x")), Term::lam("y", Term::var("y")), true),
            (Term::lam("x", Term::var("y")), Term::lam("y", Term::var("y")), false),
            (
                Term::mu("a", Term::naming("b", Term::var("x"))),
                Term::mu("c", Term::naming("b", Term::var("x"))),
                true,
            ),
        ];
        for (l, r, expected) in pairs {
            assert_eq!(canonical_key(&l) == canonical_key(&r), expected);
            assert_eq!(alpha_eq(&l, &r), expected);
        }
    }

    #[test]
    fn rename_apart_keeps_good_binders_and_fixes_clashes() {
        let t = Term::lam("x", Term::var("x"));
        assert_eq!(rename_apart(&t), t);
        // \x.\x.x y x with x also free elsewhere
        let t = Term::app(Term::lam("x", Term::lam("x", Term::var("x"))), Term::var("x"));
        let r = rename_apart(&t);
        assert!(alpha_eq(&t, &r));
        let (vars, _) = all_idents(&r);
        assert_eq!(vars.len(), 3);
    }

    #[test]
    fn replace_at_and_subterm_agree() {
        let t = dne();
        for pos in t.positions() {
            let sub = t.subterm(&pos).unwrap().clone();
            assert_eq!(t.replace_at(&pos, |_| sub.clone()).unwrap(), t);
        }
        assert!(t.replace_at(&[1], |s| s.clone()).is_none());
    }
}
