//! One-step reduction, redex enumeration, strategies and traces.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::ident::fresh;
use crate::subst::{rename_name, subst_insert, subst_struct, subst_term};
use crate::syntax::{free_names, Position, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleTag {
    /// `(λx.M)N → M[N/x]`
    Beta,
    /// `[νx.M]N → M[N/x]`
    Nu,
    /// `(μα.M)N → μγ.M[N·γ/α]`
    Mu,
    /// `[μα.M]N → M[N/α]`
    Delta,
    /// `μα.[α]M → M` when `α` is not free in `M`
    Theta,
    /// `[β]μγ.M → M[β/γ]`
    Rho,
}

impl RuleTag {
    pub const ALL: [RuleTag; 6] =
        [RuleTag::Beta, RuleTag::Nu, RuleTag::Mu, RuleTag::Delta, RuleTag::Theta, RuleTag::Rho];

    pub fn name(self) -> &'static str {
        match self {
            RuleTag::Beta => "beta",
            RuleTag::Nu => "nu",
            RuleTag::Mu => "mu",
            RuleTag::Delta => "delta",
            RuleTag::Theta => "theta",
            RuleTag::Rho => "rho",
        }
    }
}

impl fmt::Display for RuleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Contracts `t` at its root with `rule`, if the rule's left-hand side matches.
pub fn root_step(t: &Term, rule: RuleTag) -> Option<Term> {
    match (rule, t) {
        (RuleTag::Beta, Term::App(m, n)) => match &**m {
            Term::Lam(x, body) => Some(subst_term(body, n, *x)),
            _ => None,
        },
        (RuleTag::Nu, Term::NegApp(m, n)) => match &**m {
            Term::Nu(x, body) => Some(subst_term(body, n, *x)),
            _ => None,
        },
        (RuleTag::Mu, Term::App(m, n)) => match &**m {
            Term::Mu(a, body) => {
                let g = fresh(*a);
                Some(Term::mu(g, subst_struct(body, n, *a, g)))
            }
            _ => None,
        },
        (RuleTag::Delta, Term::NegApp(m, n)) => match &**m {
            Term::Mu(a, body) => Some(subst_insert(body, n, *a)),
            _ => None,
        },
        (RuleTag::Theta, Term::Mu(a, body)) => match &**body {
            Term::Naming(b, inner) if a == b && !free_names(inner).contains(a) => Some((**inner).clone()),
            _ => None,
        },
        (RuleTag::Rho, Term::Naming(b, m)) => match &**m {
            Term::Mu(g, body) => Some(rename_name(body, *b, *g)),
            _ => None,
        },
        _ => None,
    }
}

/// The rule that matches `t` at its root, if any. At most one rule can match
/// at a given position.
pub fn root_rule(t: &Term) -> Option<RuleTag> {
    match t {
        Term::App(m, _) => match &**m {
            Term::Lam(..) => Some(RuleTag::Beta),
            Term::Mu(..) => Some(RuleTag::Mu),
            _ => None,
        },
        Term::NegApp(m, _) => match &**m {
            Term::Nu(..) => Some(RuleTag::Nu),
            Term::Mu(..) => Some(RuleTag::Delta),
            _ => None,
        },
        Term::Mu(a, body) => match &**body {
            Term::Naming(b, inner) if a == b && !free_names(inner).contains(a) => Some(RuleTag::Theta),
            _ => None,
        },
        Term::Naming(_, m) => match &**m {
            Term::Mu(..) => Some(RuleTag::Rho),
            _ => None,
        },
        _ => None,
    }
}

/// A redex: where and which rule.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Redex {
    pub rule: RuleTag,
    pub position: Position,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStep {
    pub rule: RuleTag,
    pub position: Position,
    pub before: Term,
    pub after: Term,
}

/// Which rules take part in reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RuleSet {
    pub theta: bool,
}

impl RuleSet {
    pub const ALL: RuleSet = RuleSet { theta: true };
    pub const NO_THETA: RuleSet = RuleSet { theta: false };

    fn allows(self, r: RuleTag) -> bool {
        self.theta || r != RuleTag::Theta
    }
}

impl Default for RuleSet {
    fn default() -> RuleSet {
        RuleSet::ALL
    }
}

/// All redexes in pre-order (a node before its children, left before right).
pub fn redexes(t: &Term, rules: RuleSet) -> Vec<Redex> {
    fn go(t: &Term, here: &mut Position, rules: RuleSet, out: &mut Vec<Redex>) {
        if let Some(rule) = root_rule(t) {
            if rules.allows(rule) {
                out.push(Redex { rule, position: here.clone() });
            }
        }
        for (i, c) in t.children().into_iter().enumerate() {
            here.push(i);
            go(c, here, rules, out);
            here.pop();
        }
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), rules, &mut out);
    out
}

/// Applies `rule` at `position`.
pub fn contract(t: &Term, redex: &Redex) -> Option<Term> {
    let sub = t.subterm(&redex.position)?;
    let reduct = root_step(sub, redex.rule)?;
    t.replace_at(&redex.position, |_| reduct)
}

/// Every single step from `t`, one per redex, in pre-order.
pub fn enumerate_redexes(t: &Term) -> Vec<ReductionStep> {
    enumerate_steps(t, RuleSet::ALL)
}

pub fn enumerate_steps(t: &Term, rules: RuleSet) -> Vec<ReductionStep> {
    redexes(t, rules)
        .into_iter()
        .map(|r| {
            let after = contract(t, &r).expect("enumerated redex contracts");
            ReductionStep { rule: r.rule, position: r.position, before: t.clone(), after }
        })
        .collect()
}

pub fn is_normal(t: &Term, rules: RuleSet) -> bool {
    redexes(t, rules).is_empty()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// The first redex in pre-order.
    LeftmostOutermost,
    /// The first redex when children are visited right to left and a node
    /// after its children.
    RightmostInnermost,
    /// A uniformly chosen redex, from a seeded generator.
    Random(u64),
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::LeftmostOutermost => f.write_str("lo"),
            Strategy::RightmostInnermost => f.write_str("ri"),
            Strategy::Random(seed) => write!(f, "random({seed})"),
        }
    }
}

fn rightmost_innermost(t: &Term, rules: RuleSet) -> Option<Redex> {
    fn go(t: &Term, here: &mut Position, rules: RuleSet) -> Option<Redex> {
        let children = t.children();
        for i in (0..children.len()).rev() {
            here.push(i);
            let found = go(children[i], here, rules);
            here.pop();
            if found.is_some() {
                return found;
            }
        }
        match root_rule(t) {
            Some(rule) if rules.allows(rule) => Some(Redex { rule, position: here.clone() }),
            _ => None,
        }
    }
    go(t, &mut Vec::new(), rules)
}

fn leftmost_outermost(t: &Term, rules: RuleSet) -> Option<Redex> {
    fn go(t: &Term, here: &mut Position, rules: RuleSet) -> Option<Redex> {
        if let Some(rule) = root_rule(t) {
            if rules.allows(rule) {
                return Some(Redex { rule, position: here.clone() });
            }
        }
        for (i, c) in t.children().into_iter().enumerate() {
            here.push(i);
            let found = go(c, here, rules);
            here.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }
    go(t, &mut Vec::new(), rules)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: RuleTag,
    pub position: Position,
    pub after: Term,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub initial: Term,
    pub steps: Vec<TraceStep>,
    pub final_term: Term,
    pub fuel_exhausted: bool,
}

#[derive(Serialize)]
struct TraceJson<'a> {
    initial: String,
    steps: Vec<StepJson<'a>>,
    #[serde(rename = "final")]
    final_term: String,
    fuel_exhausted: bool,
}

#[derive(Serialize)]
struct StepJson<'a> {
    rule: RuleTag,
    position: &'a [usize],
    after: String,
}

impl Trace {
    pub fn to_json(&self) -> serde_json::Value {
        let j = TraceJson {
            initial: self.initial.to_string(),
            steps: self
                .steps
                .iter()
                .map(|s| StepJson { rule: s.rule, position: &s.position, after: s.after.to_string() })
                .collect(),
            final_term: self.final_term.to_string(),
            fuel_exhausted: self.fuel_exhausted,
        };
        serde_json::to_value(j).expect("trace serializes")
    }

    /// Replays the trace from `initial`, checking every step. Fresh names
    /// chosen by the μ rule may differ, so terms are compared up to α.
    pub fn replay(&self) -> bool {
        let mut t = self.initial.clone();
        for s in &self.steps {
            let redex = Redex { rule: s.rule, position: s.position.clone() };
            match contract(&t, &redex) {
                Some(next) if crate::syntax::alpha_eq(&next, &s.after) => t = s.after.clone(),
                _ => return false,
            }
        }
        crate::syntax::alpha_eq(&t, &self.final_term)
    }
}

pub const DEFAULT_FUEL: usize = 10_000;

/// Reduces with `strategy` until a normal form or until `fuel` steps were taken.
pub fn normalize(t: &Term, strategy: Strategy, fuel: usize) -> Trace {
    normalize_with(t, strategy, fuel, RuleSet::ALL)
}

pub fn normalize_with(t: &Term, strategy: Strategy, fuel: usize, rules: RuleSet) -> Trace {
    let mut rng = match strategy {
        Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut cur = t.clone();
    let mut steps = Vec::new();
    loop {
        let next = match strategy {
            Strategy::LeftmostOutermost => leftmost_outermost(&cur, rules),
            Strategy::RightmostInnermost => rightmost_innermost(&cur, rules),
            Strategy::Random(_) => {
                let mut all = redexes(&cur, rules);
                if all.is_empty() {
                    None
                } else {
                    let i = rng.as_mut().unwrap().gen_range(0..all.len());
                    Some(all.swap_remove(i))
                }
            }
        };
        let Some(redex) = next else {
            return Trace { initial: t.clone(), steps, final_term: cur, fuel_exhausted: false };
        };
        if steps.len() >= fuel {
            return Trace { initial: t.clone(), steps, final_term: cur, fuel_exhausted: true };
        }
        cur = contract(&cur, &redex).expect("selected redex contracts");
        steps.push(TraceStep { rule: redex.rule, position: redex.position, after: cur.clone() });
    }
}

/// Like [`normalize_with`] but without recording intermediate terms. Returns
/// the last term and whether fuel ran out.
pub fn normal_form(t: &Term, strategy: Strategy, fuel: usize, rules: RuleSet) -> (Term, usize, bool) {
    let mut rng = match strategy {
        Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut cur = t.clone();
    for used in 0..=fuel {
        let next = match strategy {
            Strategy::LeftmostOutermost => leftmost_outermost(&cur, rules),
            Strategy::RightmostInnermost => rightmost_innermost(&cur, rules),
            Strategy::Random(_) => {
                let mut all = redexes(&cur, rules);
                if all.is_empty() {
                    None
                } else {
                    let i = rng.as_mut().unwrap().gen_range(0..all.len());
                    Some(all.swap_remove(i))
                }
            }
        };
        let Some(redex) = next else {
            return (cur, used, false);
        };
        if used == fuel {
            break;
        }
        cur = contract(&cur, &redex).expect("selected redex contracts");
    }
    (cur, fuel, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_term;
    use crate::syntax::alpha_eq;

    fn p(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn beta_at_root() {
        assert_eq!(root_step(&p("(\\x.x) y"), RuleTag::Beta), Some(p("y")));
        assert_eq!(root_step(&p("(\\x.x) y"), RuleTag::Mu), None);
    }

    #[test]
    fn delta_then_nu() {
        let t = p("[mu 'a.['a](nu x.['b]x)] z");
        let t1 = root_step(&t, RuleTag::Delta).unwrap();
        assert!(alpha_eq(&t1, &p("[nu x.['b]x] z")), "{t1}");
        let t2 = root_step(&t1, RuleTag::Nu).unwrap();
        assert_eq!(t2, p("['b]z"));
    }

    #[test]
    fn mu_then_theta() {
        let t = p("(mu 'a.['a]x) y");
        let t1 = root_step(&t, RuleTag::Mu).unwrap();
        assert!(alpha_eq(&t1, &p("mu 'g.['g](x y)")), "{t1}");
        let t2 = root_step(&t1, RuleTag::Theta).unwrap();
        assert_eq!(t2, p("x y"));
    }

    #[test]
    fn theta_needs_the_name_absent() {
        assert_eq!(root_step(&p("mu 'a.['a]['a]x"), RuleTag::Theta), None);
        assert!(root_step(&p("mu 'a.['a]x"), RuleTag::Theta).is_some());
    }

    #[test]
    fn rho_renames() {
        let t = p("['b]mu 'g.['g]x");
        assert_eq!(root_step(&t, RuleTag::Rho), Some(p("['b]x")));
        let steps = enumerate_steps(&t, RuleSet::NO_THETA);
        assert_eq!(steps.len(), 1);
        assert_eq!(steps[0].rule, RuleTag::Rho);
        assert!(steps[0].position.is_empty());
        // the body mu 'g.['g]x is also a theta redex
        let steps = enumerate_redexes(&t);
        assert_eq!(steps.len(), 2);
        assert_eq!((steps[1].rule, steps[1].position.clone()), (RuleTag::Theta, vec![0]));
    }

    #[test]
    fn enumeration_finds_nested_redexes() {
        assert!(enumerate_redexes(&p("x")).is_empty());
        let steps = enumerate_redexes(&p("(\\x.x)((\\y.y)z)"));
        assert_eq!(steps.len(), 2);
        assert!(steps.iter().all(|s| s.rule == RuleTag::Beta));
        assert_eq!(steps[0].position, Vec::<usize>::new());
        assert_eq!(steps[1].position, vec![1]);
    }

    #[test]
    fn strategies_pick_different_redexes() {
        let t = p("(\\x.x)((\\y.y)z)");
        let lo = normalize(&t, Strategy::LeftmostOutermost, 1);
        assert_eq!(lo.steps[0].position, Vec::<usize>::new());
        let ri = normalize(&t, Strategy::RightmostInnermost, 1);
        assert_eq!(ri.steps[0].position, vec![1]);
        assert!(lo.fuel_exhausted && ri.fuel_exhausted);
    }

    #[test]
    fn normalize_reports_fuel_and_replays() {
        let t = p("(\\x.x) y");
        let tr = normalize(&t, Strategy::Random(3), 10);
        assert_eq!(tr.final_term, p("y"));
        assert_eq!(tr.steps.len(), 1);
        assert!(!tr.fuel_exhausted);
        assert!(tr.replay());
        let omega = p("(\\x.x x)(\\x.x x)");
        let tr = normalize(&omega, Strategy::LeftmostOutermost, 5);
        assert!(tr.fuel_exhausted);
        assert_eq!(tr.steps.len(), 5);
        assert!(tr.replay());
        let (_, used, out) = normal_form(&omega, Strategy::LeftmostOutermost, 5, RuleSet::ALL);
        assert!(out);
        assert_eq!(used, 5);
    }

    #[test]
    fn trace_json_shape() {
        let tr = normalize(&p("['b]mu 'g.['g]x"), Strategy::LeftmostOutermost, 10);
        let j = tr.to_json();
        assert_eq!(j["final"], "['b]x");
        assert_eq!(j["steps"][0]["rule"], "rho");
        assert_eq!(j["steps"][0]["position"], serde_json::json!([]));
        assert_eq!(j["fuel_exhausted"], false);
    }

    #[test]
    fn zero_fuel_on_a_normal_form_is_not_exhaustion() {
        let tr = normalize(&p("x"), Strategy::LeftmostOutermost, 0);
        assert!(!tr.fuel_exhausted);
        let tr = normalize(&p("(\\x.x) y"), Strategy::LeftmostOutermost, 0);
        assert!(tr.fuel_exhausted);
    }
}
