//! Greedy shrinking: replace some subterm by one of its own children while
//! the property keeps failing.

use crate::bridges::lmu::LmuTerm;
use crate::bridges::nlm::NlmTerm;
use crate::syntax::Term;

pub trait Shrink: Sized + Clone {
    /// Every term obtained by replacing one subterm with one of its children.
    fn candidates(&self) -> Vec<Self>;
}

/// Shrinks `t` while `fails` holds. The result still fails.
pub fn shrink<T: Shrink>(t: &T, fails: impl Fn(&T) -> bool) -> T {
    let mut cur = t.clone();
    'outer: loop {
        for c in cur.candidates() {
            if fails(&c) {
                cur = c;
                continue 'outer;
            }
        }
        return cur;
    }
}

impl Shrink for Term {
    fn candidates(&self) -> Vec<Term> {
        let mut out: Vec<Term> = self.children().into_iter().cloned().collect();
        match self {
            Term::Var(_) => {}
            Term::Lam(x, b) => out.extend(b.candidates().into_iter().map(|c| Term::lam(*x, c))),
            Term::Nu(x, b) => out.extend(b.candidates().into_iter().map(|c| Term::nu(*x, c))),
            Term::Mu(a, b) => out.extend(b.candidates().into_iter().map(|c| Term::mu(*a, c))),
            Term::Naming(a, b) => out.extend(b.candidates().into_iter().map(|c| Term::naming(*a, c))),
            Term::App(m, n) => {
                out.extend(m.candidates().into_iter().map(|c| Term::app(c, (**n).clone())));
                out.extend(n.candidates().into_iter().map(|c| Term::app((**m).clone(), c)));
            }
            Term::NegApp(m, n) => {
                out.extend(m.candidates().into_iter().map(|c| Term::neg_app(c, (**n).clone())));
                out.extend(n.candidates().into_iter().map(|c| Term::neg_app((**m).clone(), c)));
            }
        }
        out
    }
}

impl Shrink for NlmTerm {
    fn candidates(&self) -> Vec<NlmTerm> {
        let mut out = Vec::new();
        match self {
            NlmTerm::Var(_) => {}
            NlmTerm::Lam(x, b) | NlmTerm::Nu(x, b) | NlmTerm::Mu(x, b) => {
                out.push((**b).clone());
                for c in b.candidates() {
                    out.push(match self {
                        NlmTerm::Lam(..) => NlmTerm::lam(*x, c),
                        NlmTerm::Nu(..) => NlmTerm::nu(*x, c),
                        _ => NlmTerm::mu(*x, c),
                    });
                }
            }
            NlmTerm::App(m, n) | NlmTerm::NegApp(m, n) => {
                let rebuild = |a: NlmTerm, b: NlmTerm| match self {
                    NlmTerm::App(..) => NlmTerm::app(a, b),
                    _ => NlmTerm::neg_app(a, b),
                };
                out.push((**m).clone());
                out.push((**n).clone());
                out.extend(m.candidates().into_iter().map(|c| rebuild(c, (**n).clone())));
                out.extend(n.candidates().into_iter().map(|c| rebuild((**m).clone(), c)));
            }
        }
        out
    }
}

impl Shrink for LmuTerm {
    fn candidates(&self) -> Vec<LmuTerm> {
        let mut out = Vec::new();
        match self {
            LmuTerm::Var(_) => {}
            LmuTerm::Lam(x, b) => {
                out.push((**b).clone());
                out.extend(b.candidates().into_iter().map(|c| LmuTerm::lam(*x, c)));
            }
            LmuTerm::ContextSwitch(a, be, b) => {
                out.push((**b).clone());
                out.extend(b.candidates().into_iter().map(|c| LmuTerm::switch(*a, *be, c)));
            }
            LmuTerm::App(m, n) => {
                out.push((**m).clone());
                out.push((**n).clone());
                out.extend(m.candidates().into_iter().map(|c| LmuTerm::app(c, (**n).clone())));
                out.extend(n.candidates().into_iter().map(|c| LmuTerm::app((**m).clone(), c)));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_term;
    use crate::syntax::free_names;

    #[test]
    fn shrinks_to_a_minimal_failing_subterm() {
        // "mentions a free name" shrinks down to a single naming.
        let t = parse_term("\\x.(\\y.y) ([x](['b]z))").unwrap();
        let s = shrink(&t, |u| !free_names(u).is_empty());
        assert_eq!(s.size(), 2);
        assert!(!free_names(&s).is_empty());
    }

    #[test]
    fn passing_input_is_kept() {
        let t = parse_term("\\x.x").unwrap();
        assert_eq!(shrink(&t, |_| false), t);
    }
}
