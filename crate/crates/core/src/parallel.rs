//! Generalised parallel reduction `⇒` and the confluence oracle built on it.
//!
//! Rules, numbered as in the usual presentation:
//!
//! ```text
//! (1) x ⇒ x                       (7) [α]M ⇒ [α]M'
//! (2) λx.M ⇒ λx.M'                (8) [β]M ⇒ M'[β/α]          if M ⇒ μα.M'
//! (3) μα.M ⇒ μα.M'                (9) M N ⇒ M'[N'/x]          if M ⇒ λx.M'
//! (4) νx.M ⇒ νx.M'               (10) M N ⇒ μγ.M'[N'·γ/α]     if M ⇒ μα.M'
//! (5) M N ⇒ M' N'                (11) [M]N ⇒ M'[N'/x]         if M ⇒ νx.M'
//! (6) [M]N ⇒ [M']N'              (12) [M]N ⇒ M'[N'/α]         if M ⇒ μα.M'
//! ```
//!
//! θ is not part of `⇒`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::rc::Rc;

use indexmap::IndexMap;
use serde::Serialize;

use crate::ident::fresh;
use crate::reduction::{enumerate_steps, RuleSet};
use crate::subst::{rename_name, subst_insert, subst_struct, subst_term};
use crate::syntax::{alpha_eq, canonical_key, CanonKey, Term};

pub const DEFAULT_CAP: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundExceeded {
    pub cap: usize,
    pub term: String,
}

impl fmt::Display for BoundExceeded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parallel reduct enumeration exceeded the cap of {} for {}", self.cap, self.term)
    }
}

impl std::error::Error for BoundExceeded {}

/// A derivation of `M ⇒ N`: the rule used at the root and the derivations of
/// its premises, left to right.
#[derive(Clone, PartialEq, Eq)]
pub struct Derivation {
    pub rule: u8,
    pub premises: Vec<Rc<Derivation>>,
}

impl fmt::Debug for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.rule)?;
        for p in &self.premises {
            write!(f, " {p:?}")?;
        }
        f.write_str(")")
    }
}

impl Derivation {
    fn leaf(rule: u8) -> Rc<Derivation> {
        Rc::new(Derivation { rule, premises: vec![] })
    }

    fn node(rule: u8, premises: Vec<Rc<Derivation>>) -> Rc<Derivation> {
        Rc::new(Derivation { rule, premises })
    }
}

/// Rebuilds the target of a derivation from its source. Returns `None` if
/// the derivation does not fit the source term.
pub fn replay(source: &Term, d: &Derivation) -> Option<Term> {
    let prem = |i: usize, t: &Term| replay(t, d.premises.get(i)?);
    match (d.rule, source) {
        (1, Term::Var(_)) if d.premises.is_empty() => Some(source.clone()),
        (2, Term::Lam(x, m)) => Some(Term::Lam(*x, Box::new(prem(0, m)?))),
        (3, Term::Mu(a, m)) => Some(Term::Mu(*a, Box::new(prem(0, m)?))),
        (4, Term::Nu(x, m)) => Some(Term::Nu(*x, Box::new(prem(0, m)?))),
        (5, Term::App(m, n)) => Some(Term::app(prem(0, m)?, prem(1, n)?)),
        (6, Term::NegApp(m, n)) => Some(Term::neg_app(prem(0, m)?, prem(1, n)?)),
        (7, Term::Naming(a, m)) => Some(Term::Naming(*a, Box::new(prem(0, m)?))),
        (8, Term::Naming(b, m)) => match prem(0, m)? {
            Term::Mu(a, body) => Some(rename_name(&body, *b, a)),
            _ => None,
        },
        (9, Term::App(m, n)) => match prem(0, m)? {
            Term::Lam(x, body) => Some(subst_term(&body, &prem(1, n)?, x)),
            _ => None,
        },
        (10, Term::App(m, n)) => match prem(0, m)? {
            Term::Mu(a, body) => {
                let g = fresh(a);
                Some(Term::mu(g, subst_struct(&body, &prem(1, n)?, a, g)))
            }
            _ => None,
        },
        (11, Term::NegApp(m, n)) => match prem(0, m)? {
            Term::Nu(x, body) => Some(subst_term(&body, &prem(1, n)?, x)),
            _ => None,
        },
        (12, Term::NegApp(m, n)) => match prem(0, m)? {
            Term::Mu(a, body) => Some(subst_insert(&body, &prem(1, n)?, a)),
            _ => None,
        },
        _ => None,
    }
}

#[derive(Clone, Debug)]
pub struct ParallelReduct {
    pub source: Term,
    pub target: Term,
    pub derivation: Rc<Derivation>,
}

type ReductSet = IndexMap<CanonKey, (Term, Rc<Derivation>)>;

/// Memoizing enumerator of `⇒`-reduct sets, keyed by α-canonical form.
pub struct Enumerator {
    cap: usize,
    memo: HashMap<CanonKey, Rc<ReductSet>>,
}

impl Enumerator {
    pub fn new(cap: usize) -> Enumerator {
        Enumerator { cap, memo: HashMap::new() }
    }

    pub fn reducts(&mut self, t: &Term) -> Result<Rc<ReductSet>, BoundExceeded> {
        let key = canonical_key(t);
        if let Some(r) = self.memo.get(&key) {
            return Ok(r.clone());
        }
        let r = Rc::new(self.compute(t)?);
        self.memo.insert(key, r.clone());
        Ok(r)
    }

    fn exceeded(&self, t: &Term) -> BoundExceeded {
        BoundExceeded { cap: self.cap, term: t.to_string() }
    }

    fn compute(&mut self, t: &Term) -> Result<ReductSet, BoundExceeded> {
        let mut out = ReductSet::new();
        let add = |out: &mut ReductSet, target: Term, d: Rc<Derivation>| {
            out.entry(canonical_key(&target)).or_insert((target, d));
        };
        match t {
            Term::Var(_) => add(&mut out, t.clone(), Derivation::leaf(1)),
            Term::Lam(x, m) | Term::Nu(x, m) => {
                let rule = if matches!(t, Term::Lam(..)) { 2 } else { 4 };
                for (m2, dm) in self.reducts(m)?.values() {
                    let target = if rule == 2 { Term::lam(*x, m2.clone()) } else { Term::nu(*x, m2.clone()) };
                    add(&mut out, target, Derivation::node(rule, vec![dm.clone()]));
                }
            }
            Term::Mu(a, m) => {
                for (m2, dm) in self.reducts(m)?.values() {
                    add(&mut out, Term::mu(*a, m2.clone()), Derivation::node(3, vec![dm.clone()]));
                }
            }
            Term::Naming(b, m) => {
                for (m2, dm) in self.reducts(m)?.values() {
                    add(&mut out, Term::naming(*b, m2.clone()), Derivation::node(7, vec![dm.clone()]));
                    if let Term::Mu(a, body) = m2 {
                        add(&mut out, rename_name(body, *b, *a), Derivation::node(8, vec![dm.clone()]));
                    }
                }
            }
            Term::App(m, n) | Term::NegApp(m, n) => {
                let app = matches!(t, Term::App(..));
                let rm = self.reducts(m)?;
                let rn = self.reducts(n)?;
                if rm.len().saturating_mul(rn.len()) > self.cap {
                    return Err(self.exceeded(t));
                }
                for (m2, dm) in rm.values() {
                    for (n2, dn) in rn.values() {
                        let prem = vec![dm.clone(), dn.clone()];
                        if app {
                            add(&mut out, Term::app(m2.clone(), n2.clone()), Derivation::node(5, prem.clone()));
                        } else {
                            add(&mut out, Term::neg_app(m2.clone(), n2.clone()), Derivation::node(6, prem.clone()));
                        }
                        match (app, m2) {
                            (true, Term::Lam(x, body)) => {
                                add(&mut out, subst_term(body, n2, *x), Derivation::node(9, prem))
                            }
                            (true, Term::Mu(a, body)) => {
                                let g = fresh(*a);
                                add(&mut out, Term::mu(g, subst_struct(body, n2, *a, g)), Derivation::node(10, prem))
                            }
                            (false, Term::Nu(x, body)) => {
                                add(&mut out, subst_term(body, n2, *x), Derivation::node(11, prem))
                            }
                            (false, Term::Mu(a, body)) => {
                                add(&mut out, subst_insert(body, n2, *a), Derivation::node(12, prem))
                            }
                            _ => {}
                        }
                    }
                }
            }
        }
        if out.len() > self.cap {
            return Err(self.exceeded(t));
        }
        Ok(out)
    }
}

/// All `N` with `t ⇒ N`, up to α, each with one derivation.
pub fn parallel_reducts_with_derivations(t: &Term, cap: usize) -> Result<Vec<ParallelReduct>, BoundExceeded> {
    let set = Enumerator::new(cap).reducts(t)?;
    Ok(set
        .values()
        .map(|(target, d)| ParallelReduct { source: t.clone(), target: target.clone(), derivation: d.clone() })
        .collect())
}

/// All `N` with `t ⇒ N`, up to α.
pub fn parallel_reducts(t: &Term, cap: usize) -> Result<Vec<Term>, BoundExceeded> {
    let set = Enumerator::new(cap).reducts(t)?;
    Ok(set.values().map(|(target, _)| target.clone()).collect())
}

/// Whether `t ⇒ u`.
pub fn parallel_reduces_to(t: &Term, u: &Term, cap: usize) -> Result<bool, BoundExceeded> {
    let set = Enumerator::new(cap).reducts(t)?;
    Ok(set.contains_key(&canonical_key(u)))
}

/// Looks for a common `⇒`-reduct of `t1` and `t2` within `depth` steps on
/// each side, breadth first.
pub fn join(t1: &Term, t2: &Term, depth: usize, cap: usize) -> Result<Option<Term>, BoundExceeded> {
    let mut en = Enumerator::new(cap);
    join_with(&mut en, t1, t2, depth)
}

fn join_with(en: &mut Enumerator, t1: &Term, t2: &Term, depth: usize) -> Result<Option<Term>, BoundExceeded> {
    let mut left: IndexMap<CanonKey, Term> = IndexMap::from([(canonical_key(t1), t1.clone())]);
    let mut right: IndexMap<CanonKey, Term> = IndexMap::from([(canonical_key(t2), t2.clone())]);
    let common = |l: &IndexMap<CanonKey, Term>, r: &IndexMap<CanonKey, Term>| {
        l.iter().find(|(k, _)| r.contains_key(*k)).map(|(_, t)| t.clone())
    };
    if let Some(t) = common(&left, &right) {
        return Ok(Some(t));
    }
    for _ in 0..depth {
        left = expand(en, &left)?;
        right = expand(en, &right)?;
        if let Some(t) = common(&left, &right) {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

fn expand(en: &mut Enumerator, set: &IndexMap<CanonKey, Term>) -> Result<IndexMap<CanonKey, Term>, BoundExceeded> {
    let mut out = IndexMap::new();
    for t in set.values() {
        for (k, (u, _)) in en.reducts(t)?.iter() {
            out.entry(k.clone()).or_insert_with(|| u.clone());
        }
        if out.len() > en.cap {
            return Err(en.exceeded(t));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct DiamondViolation {
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiamondReport {
    pub term: String,
    pub reducts: usize,
    pub pairs_checked: usize,
    pub violations: Vec<DiamondViolation>,
}

impl DiamondReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that every two `⇒`-reducts of `t` have a common `⇒`-reduct reached
/// in one step from each.
pub fn check_diamond(t: &Term, cap: usize) -> Result<DiamondReport, BoundExceeded> {
    let mut en = Enumerator::new(cap);
    let top = en.reducts(t)?;
    let mut next: Vec<Rc<ReductSet>> = Vec::with_capacity(top.len());
    for (u, _) in top.values() {
        next.push(en.reducts(u)?);
    }
    let terms: Vec<&Term> = top.values().map(|(u, _)| u).collect();
    let mut pairs = 0;
    let mut violations = Vec::new();
    for i in 0..terms.len() {
        for j in i + 1..terms.len() {
            pairs += 1;
            let (small, big) = if next[i].len() <= next[j].len() { (&next[i], &next[j]) } else { (&next[j], &next[i]) };
            if !small.keys().any(|k| big.contains_key(k)) {
                violations.push(DiamondViolation { left: terms[i].to_string(), right: terms[j].to_string() });
            }
        }
    }
    Ok(DiamondReport { term: t.to_string(), reducts: terms.len(), pairs_checked: pairs, violations })
}

/// Terms reachable from `t` by `→` (θ excluded), breadth first, at most
/// `limit` of them. The flag is true when the whole reachable set was seen.
pub fn reachable(t: &Term, limit: usize) -> (HashSet<CanonKey>, bool) {
    let mut seen = HashSet::from([canonical_key(t)]);
    let mut queue = VecDeque::from([t.clone()]);
    while let Some(u) = queue.pop_front() {
        for s in enumerate_steps(&u, RuleSet::NO_THETA) {
            if seen.insert(canonical_key(&s.after)) {
                if seen.len() >= limit {
                    return (seen, false);
                }
                queue.push_back(s.after);
            }
        }
    }
    (seen, true)
}

/// Checks both inclusions behind `⇒* = →*` for one term: every single non-θ
/// step is a `⇒` step, and every `⇒`-reduct is `→*`-reachable. Returns a
/// description of the first failure.
pub fn check_steps_match(t: &Term, cap: usize, reach_limit: usize) -> Result<Option<String>, BoundExceeded> {
    let set = Enumerator::new(cap).reducts(t)?;
    for s in enumerate_steps(t, RuleSet::NO_THETA) {
        if !set.contains_key(&canonical_key(&s.after)) {
            return Ok(Some(format!("{} step at {:?} to {} is not a parallel step", s.rule, s.position, s.after)));
        }
    }
    let (seen, complete) = reachable(t, reach_limit);
    for (k, (u, _)) in set.iter() {
        if !seen.contains(k) {
            if !complete {
                // the bounded search may simply not have got there
                continue;
            }
            return Ok(Some(format!("parallel reduct {u} is not reachable by reduction")));
        }
    }
    Ok(None)
}

/// `alpha_eq` lifted to optional results, for callers comparing joins.
pub fn same_term(a: Option<&Term>, b: &Term) -> bool {
    a.is_some_and(|a| alpha_eq(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_term;

    fn p(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn variable_only_reduces_to_itself() {
        assert_eq!(parallel_reducts(&p("x"), DEFAULT_CAP).unwrap(), vec![p("x")]);
    }

    #[test]
    fn identity_application() {
        let r = parallel_reducts(&p("(\\x.x) y"), DEFAULT_CAP).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.iter().any(|t| alpha_eq(t, &p("(\\x.x) y"))));
        assert!(r.iter().any(|t| alpha_eq(t, &p("y"))));
    }

    #[test]
    fn derivations_replay() {
        let t = p("(mu 'a.['a]mu 'b.['a]x) y");
        for r in parallel_reducts_with_derivations(&t, DEFAULT_CAP).unwrap() {
            let back = replay(&r.source, &r.derivation).unwrap();
            assert!(alpha_eq(&back, &r.target), "{:?}: {back} vs {}", r.derivation, r.target);
        }
    }

    #[test]
    fn diamond_on_small_examples() {
        for s in ["x", "(\\x.x)((\\y.y)z)", "(mu 'a.['a]mu 'b.['a]x)y"] {
            let rep = check_diamond(&p(s), DEFAULT_CAP).unwrap();
            assert!(rep.holds(), "{s}: {:?}", rep.violations);
        }
        // (\x.x)z and (\y.y)z coincide up to α, so four derivable targets
        // make three reducts
        let rep = check_diamond(&p("(\\x.x)((\\y.y)z)"), DEFAULT_CAP).unwrap();
        assert_eq!(rep.reducts, 3);
        assert_eq!(rep.pairs_checked, 3);
    }

    #[test]
    fn critical_pair_joins() {
        let t = p("(mu 'a.['a]mu 'b.['a]x) y");
        let r = parallel_reducts(&t, DEFAULT_CAP).unwrap();
        for a in &r {
            for b in &r {
                assert!(join(a, b, 1, DEFAULT_CAP).unwrap().is_some(), "{a} / {b}");
            }
        }
    }

    #[test]
    fn join_basics() {
        assert_eq!(join(&p("y"), &p("y"), 1, DEFAULT_CAP).unwrap(), Some(p("y")));
        let j = join(&p("(\\x.x) y"), &p("y"), 1, DEFAULT_CAP).unwrap();
        assert!(same_term(j.as_ref(), &p("y")));
        assert_eq!(join(&p("x"), &p("y"), 3, DEFAULT_CAP).unwrap(), None);
    }

    #[test]
    fn cap_is_reported() {
        let t = p("(\\x.x)((\\x.x)((\\x.x)((\\x.x) y)))");
        let e = parallel_reducts(&t, 3).unwrap_err();
        assert_eq!(e.cap, 3);
    }

    #[test]
    fn theta_is_not_parallel() {
        let t = p("mu 'a.['a]x");
        assert_eq!(parallel_reducts(&t, DEFAULT_CAP).unwrap().len(), 1);
    }

    #[test]
    fn steps_match_on_examples() {
        for s in ["(\\x.x)((\\y.y)z)", "(mu 'a.['a]mu 'b.['a]x)y", "[mu 'a.['a](nu x.['b]x)] z"] {
            assert_eq!(check_steps_match(&p(s), DEFAULT_CAP, 10_000).unwrap(), None, "{s}");
        }
    }
}
