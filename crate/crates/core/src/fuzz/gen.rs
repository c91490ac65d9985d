//! Random typed terms, built by growing a typing derivation from the goal
//! upwards. Every emitted term checks by construction.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bridges::lmu::{project_lmu, LmuJudgement};
use crate::bridges::nlm::NlmTerm;
use crate::ident::Ident;
use crate::syntax::{free_names, free_vars, Term};
use crate::types::{Conclusion, Type, TypingContext};

/// Relative weights of the seven typing rules, plus redex shapes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleWeights {
    pub ax: u32,
    pub lam: u32,
    pub app: u32,
    pub nu: u32,
    pub neg_app: u32,
    pub mu: u32,
    pub naming: u32,
    /// Build a redex (two rules at once) instead of a single rule.
    pub redex: u32,
}

impl Default for RuleWeights {
    fn default() -> Self {
        RuleWeights { ax: 3, lam: 3, app: 3, nu: 2, neg_app: 2, mu: 2, naming: 2, redex: 3 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenConfig {
    pub seed: u64,
    pub max_size: usize,
    pub weights: RuleWeights,
    /// How many terms to generate (one per trial).
    pub count: usize,
    /// Atoms are drawn from `p1..=pN`.
    pub atoms: u32,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig { seed: 0, max_size: 30, weights: RuleWeights::default(), count: 100, atoms: 3 }
    }
}

impl GenConfig {
    pub fn new(seed: u64, count: usize, max_size: usize) -> GenConfig {
        GenConfig { seed, count, max_size, ..GenConfig::default() }
    }

    /// The generator for trial `index`: independent of every other trial.
    pub fn rng(&self, index: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        rng
    }
}

/// Which fragment to generate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    L,
    Lmu,
    Nlm,
}

/// A generated judgement `Γ ⊢ M : C`.
#[derive(Clone, Debug)]
pub struct Sample {
    pub context: TypingContext,
    pub term: Term,
    pub conclusion: Conclusion,
}

/// A generated νλμ judgement. The derivation never puts ⊥ inside a type.
#[derive(Clone, Debug)]
pub struct NlmSample {
    pub context: BTreeMap<Ident, Type>,
    pub term: NlmTerm,
    pub conclusion: Conclusion,
}

#[derive(Clone, Debug)]
enum Node {
    Var(Ident),
    Lam(Ident, Box<Node>),
    App(Box<Node>, Box<Node>),
    Nu(Ident, Box<Node>),
    NegApp(Box<Node>, Box<Node>),
    /// In νλμ mode the binder is a variable.
    Mu(Ident, Box<Node>),
    Naming(Ident, Box<Node>),
}

impl Node {
    fn size(&self) -> usize {
        match self {
            Node::Var(_) => 1,
            Node::Lam(_, b) | Node::Nu(_, b) | Node::Mu(_, b) | Node::Naming(_, b) => 1 + b.size(),
            Node::App(m, n) | Node::NegApp(m, n) => 1 + m.size() + n.size(),
        }
    }

    fn to_term(&self) -> Term {
        match self {
            Node::Var(x) => Term::Var(*x),
            Node::Lam(x, b) => Term::lam(*x, b.to_term()),
            Node::App(m, n) => Term::app(m.to_term(), n.to_term()),
            Node::Nu(x, b) => Term::nu(*x, b.to_term()),
            Node::NegApp(m, n) => Term::neg_app(m.to_term(), n.to_term()),
            Node::Mu(a, b) => Term::mu(*a, b.to_term()),
            Node::Naming(a, b) => Term::naming(*a, b.to_term()),
        }
    }

    fn to_nlm(&self) -> NlmTerm {
        match self {
            Node::Var(x) => NlmTerm::Var(*x),
            Node::Lam(x, b) => NlmTerm::lam(*x, b.to_nlm()),
            Node::App(m, n) => NlmTerm::app(m.to_nlm(), n.to_nlm()),
            Node::Nu(x, b) => NlmTerm::nu(*x, b.to_nlm()),
            Node::NegApp(m, n) => NlmTerm::neg_app(m.to_nlm(), n.to_nlm()),
            Node::Mu(x, b) => NlmTerm::mu(*x, b.to_nlm()),
            Node::Naming(..) => unreachable!("no namings in nlm mode"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Rule {
    Ax,
    Lam,
    App,
    Nu,
    NegApp,
    Mu,
    Naming,
    Redex,
}

struct Gen<'a, R: Rng> {
    rng: &'a mut R,
    cfg: &'a GenConfig,
    mode: Mode,
    /// Variables in scope, innermost last. Free assumptions live here too.
    vars: Vec<(Ident, Type)>,
    /// Names in scope with their negated types.
    names: Vec<(Ident, Type)>,
    free_vars: BTreeMap<Ident, Type>,
    free_names: BTreeMap<Ident, Type>,
    next: u32,
}

impl<R: Rng> Gen<'_, R> {
    fn ident(&mut self, prefix: &str) -> Ident {
        self.next += 1;
        Ident::new(&format!("{prefix}{}", self.next))
    }

    fn atom(&mut self) -> Type {
        Type::var(self.rng.gen_range(1..=self.cfg.atoms))
    }

    fn random_type(&mut self, depth: u32) -> Type {
        if depth == 0 || self.rng.gen_bool(0.4) {
            return self.atom();
        }
        let neg = self.mode != Mode::Lmu && self.rng.gen_bool(0.35);
        if neg {
            Type::neg(self.random_type(depth - 1))
        } else {
            Type::arrow(self.random_type(depth - 1), self.random_type(depth - 1))
        }
    }

    /// A cut formula: usually something already around, so that assumptions
    /// get used.
    fn cut(&mut self, goal: Option<&Type>) -> Type {
        let mut pool: Vec<Type> = Vec::new();
        for t in self.vars.iter().map(|(_, t)| t).chain(self.free_vars.values()) {
            subformulas(t, &mut pool);
        }
        for (_, t) in &self.names {
            if let Some(a) = t.un_neg() {
                subformulas(a, &mut pool);
            }
        }
        if let Some(g) = goal {
            subformulas(g, &mut pool);
        }
        pool.retain(|t| t.size() <= 7 && (self.mode != Mode::Lmu || !has_neg(t)));
        if !pool.is_empty() && self.rng.gen_bool(0.7) {
            pool.choose(self.rng).cloned().unwrap()
        } else {
            self.random_type(2)
        }
    }

    fn lookup(&self, t: &Type) -> Vec<Ident> {
        let scoped = self.vars.iter().filter(|(_, u)| u == t).map(|(x, _)| *x);
        scoped.chain(self.free_vars.iter().filter(|(_, u)| *u == t).map(|(x, _)| *x)).collect()
    }

    fn free_var(&mut self, t: Type) -> Node {
        let existing: Vec<Ident> = self.free_vars.iter().filter(|(_, u)| **u == t).map(|(x, _)| *x).collect();
        if let Some(x) = existing.choose(self.rng) {
            return Node::Var(*x);
        }
        let x = self.ident("y");
        self.free_vars.insert(x, t);
        Node::Var(x)
    }

    fn pick(&mut self, options: &[(Rule, u32)]) -> Option<Rule> {
        options.choose_weighted(self.rng, |o| o.1).ok().map(|o| o.0)
    }

    fn split(&mut self, budget: usize) -> (usize, usize) {
        let rest = budget.saturating_sub(1).max(2);
        let left = self.rng.gen_range(1..rest);
        (left, rest - left)
    }

    fn leaf(&mut self, goal: &Conclusion) -> Node {
        match goal {
            Conclusion::Ty(a) => {
                let found = self.lookup(a);
                match found.choose(self.rng) {
                    Some(x) => Node::Var(*x),
                    None => self.free_var(a.clone()),
                }
            }
            Conclusion::Bottom => {
                if self.mode == Mode::L && !self.names.is_empty() {
                    let (a, t) = self.names.choose(self.rng).cloned().unwrap();
                    let body = self.leaf(&Conclusion::Ty(t.un_neg().unwrap().clone()));
                    return Node::Naming(a, Box::new(body));
                }
                let negs: Vec<(Ident, Type)> =
                    self.vars.iter().filter_map(|(x, t)| t.un_neg().map(|a| (*x, a.clone()))).collect();
                if let Some((x, a)) = negs.choose(self.rng).cloned() {
                    let n = self.leaf(&Conclusion::Ty(a));
                    return Node::NegApp(Box::new(Node::Var(x)), Box::new(n));
                }
                let a = self.atom();
                let m = self.free_var(Type::neg(a.clone()));
                let n = self.leaf(&Conclusion::Ty(a));
                Node::NegApp(Box::new(m), Box::new(n))
            }
        }
    }

    fn node(&mut self, goal: &Conclusion, budget: usize) -> Node {
        if budget <= 1 {
            return self.leaf(goal);
        }
        let w = self.cfg.weights;
        let mut options: Vec<(Rule, u32)> = Vec::new();
        match goal {
            Conclusion::Ty(a) => {
                if !self.lookup(a).is_empty() {
                    options.push((Rule::Ax, w.ax));
                }
                if matches!(a, Type::Arrow(..)) {
                    options.push((Rule::Lam, w.lam));
                }
                if budget >= 3 {
                    options.push((Rule::App, w.app));
                }
                if matches!(a, Type::Neg(_)) && self.mode != Mode::Lmu && budget >= 3 {
                    options.push((Rule::Nu, w.nu));
                }
                if budget >= 3 {
                    options.push((Rule::Mu, w.mu));
                }
            }
            Conclusion::Bottom => {
                options.push((Rule::NegApp, w.neg_app));
                if self.mode == Mode::L && !self.names.is_empty() {
                    options.push((Rule::Naming, w.naming));
                }
            }
        }
        if budget >= 4 {
            options.push((Rule::Redex, w.redex));
        }
        let Some(rule) = self.pick(&options) else { return self.leaf(goal) };
        self.apply(rule, goal, budget)
    }

    /// A redex of some rule whose contractum has type `goal`.
    fn redex(&mut self, goal: &Conclusion, budget: usize) -> Node {
        let (l, r) = self.split(budget);
        match goal {
            Conclusion::Ty(a) => {
                let b = self.cut(Some(a));
                match self.rng.gen_range(0..3) {
                    0 | 1 => {
                        // β or μ: a λ or μ in function position
                        let head = if self.rng.gen_bool(0.6) { Rule::Lam } else { Rule::Mu };
                        let m = self.apply(head, &Conclusion::Ty(Type::arrow(b.clone(), a.clone())), l.max(3));
                        let n = self.node(&Conclusion::Ty(b), r);
                        Node::App(Box::new(m), Box::new(n))
                    }
                    _ => {
                        // θ, when the body does not name the new name again
                        let al = self.ident("a");
                        let neg_a = Type::neg(a.clone());
                        match self.mode {
                            Mode::Nlm => {
                                self.vars.push((al, neg_a));
                                let body = self.node(goal, budget - 2);
                                self.vars.pop();
                                Node::Mu(al, Box::new(Node::NegApp(Box::new(Node::Var(al)), Box::new(body))))
                            }
                            _ => {
                                self.names.push((al, neg_a));
                                let body = self.node(goal, budget - 2);
                                self.names.pop();
                                Node::Mu(al, Box::new(Node::Naming(al, Box::new(body))))
                            }
                        }
                    }
                }
            }
            Conclusion::Bottom => {
                let b = self.cut(None);
                let rho = self.mode == Mode::L && !self.names.is_empty() && self.rng.gen_bool(0.3);
                if rho {
                    let (be, t) = self.names.choose(self.rng).cloned().unwrap();
                    let m = self.apply(Rule::Mu, &Conclusion::Ty(t.un_neg().unwrap().clone()), budget - 1);
                    return Node::Naming(be, Box::new(m));
                }
                // ν or δ: a ν or μ in the negated position
                let head = if self.rng.gen_bool(0.5) { Rule::Nu } else { Rule::Mu };
                let m = self.apply(head, &Conclusion::Ty(Type::neg(b.clone())), l.max(3));
                let n = self.node(&Conclusion::Ty(b), r);
                Node::NegApp(Box::new(m), Box::new(n))
            }
        }
    }

    fn apply(&mut self, rule: Rule, goal: &Conclusion, budget: usize) -> Node {
        match rule {
            Rule::Redex => self.redex(goal, budget),
            Rule::Ax => self.leaf(goal),
            Rule::Lam => {
                let Conclusion::Ty(Type::Arrow(a, b)) = goal else { unreachable!() };
                let x = self.ident("x");
                self.vars.push((x, (**a).clone()));
                let body = self.node(&Conclusion::Ty((**b).clone()), budget - 1);
                self.vars.pop();
                Node::Lam(x, Box::new(body))
            }
            Rule::Nu => {
                let Conclusion::Ty(Type::Neg(a)) = goal else { unreachable!() };
                let x = self.ident("x");
                self.vars.push((x, (**a).clone()));
                let body = self.node(&Conclusion::Bottom, budget - 1);
                self.vars.pop();
                Node::Nu(x, Box::new(body))
            }
            Rule::App => {
                let Conclusion::Ty(a) = goal else { unreachable!() };
                let b = self.cut(Some(a));
                let (l, r) = self.split(budget);
                let m = self.node(&Conclusion::Ty(Type::arrow(b.clone(), a.clone())), l);
                let n = self.node(&Conclusion::Ty(b), r);
                Node::App(Box::new(m), Box::new(n))
            }
            Rule::NegApp => {
                let b = self.cut(None);
                let (l, r) = self.split(budget);
                let m = self.node(&Conclusion::Ty(Type::neg(b.clone())), l);
                let n = self.node(&Conclusion::Ty(b), r);
                Node::NegApp(Box::new(m), Box::new(n))
            }
            Rule::Naming => {
                let (a, t) = self.names.choose(self.rng).cloned().unwrap();
                let body = self.node(&Conclusion::Ty(t.un_neg().unwrap().clone()), budget - 1);
                Node::Naming(a, Box::new(body))
            }
            Rule::Mu => {
                let Conclusion::Ty(a) = goal else { unreachable!() };
                let neg_a = Type::neg(a.clone());
                match self.mode {
                    Mode::L => {
                        let al = self.ident("a");
                        self.names.push((al, neg_a));
                        let body = self.node(&Conclusion::Bottom, budget - 1);
                        self.names.pop();
                        Node::Mu(al, Box::new(body))
                    }
                    Mode::Nlm => {
                        let x = self.ident("k");
                        self.vars.push((x, neg_a));
                        let body = self.node(&Conclusion::Bottom, budget - 1);
                        self.vars.pop();
                        Node::Mu(x, Box::new(body))
                    }
                    Mode::Lmu => {
                        // μα.[β]M: β is α itself, another name in scope, or a
                        // new free name.
                        let al = self.ident("a");
                        self.names.push((al, neg_a));
                        let (be, bt) = if self.rng.gen_bool(0.2) {
                            let be = self.ident("d");
                            let bt = Type::neg(self.cut(None));
                            self.free_names.insert(be, bt.clone());
                            (be, bt)
                        } else {
                            self.names.choose(self.rng).cloned().unwrap()
                        };
                        let body = self.node(&Conclusion::Ty(bt.un_neg().unwrap().clone()), budget - 2);
                        self.names.pop();
                        Node::Mu(al, Box::new(Node::Naming(be, Box::new(body))))
                    }
                }
            }
        }
    }
}

fn has_neg(t: &Type) -> bool {
    match t {
        Type::Var(_) => false,
        Type::Arrow(a, b) => has_neg(a) || has_neg(b),
        Type::Neg(_) => true,
    }
}

fn subformulas(t: &Type, out: &mut Vec<Type>) {
    out.push(t.clone());
    match t {
        Type::Var(_) => {}
        Type::Arrow(a, b) => {
            subformulas(a, out);
            subformulas(b, out);
        }
        Type::Neg(a) => subformulas(a, out),
    }
}

struct Raw {
    node: Node,
    goal: Conclusion,
    free_vars: BTreeMap<Ident, Type>,
    free_names: BTreeMap<Ident, Type>,
}

fn generate<R: Rng>(rng: &mut R, cfg: &GenConfig, mode: Mode) -> Raw {
    loop {
        let mut g = Gen {
            rng: &mut *rng,
            cfg,
            mode,
            vars: Vec::new(),
            names: Vec::new(),
            free_vars: BTreeMap::new(),
            free_names: BTreeMap::new(),
            next: 0,
        };
        for _ in 0..g.rng.gen_range(0..=2) {
            let x = g.ident("y");
            let t = g.random_type(2);
            g.free_vars.insert(x, t);
        }
        let goal = if mode == Mode::L && g.rng.gen_bool(0.1) {
            Conclusion::Bottom
        } else {
            Conclusion::Ty(g.random_type(3))
        };
        let budget = g.rng.gen_range((cfg.max_size / 2).max(1)..=cfg.max_size.max(1));
        let node = g.node(&goal, budget);
        if node.size() <= cfg.max_size {
            return Raw { node, goal, free_vars: g.free_vars, free_names: g.free_names };
        }
    }
}

/// One typed 𝓛 term for trial `index`.
pub fn gen_sample(cfg: &GenConfig, index: usize) -> Sample {
    let raw = generate(&mut cfg.rng(index), cfg, Mode::L);
    let term = raw.node.to_term();
    let fv = free_vars(&term);
    let vars = raw.free_vars.into_iter().filter(|(x, _)| fv.contains(x)).collect();
    debug_assert!(free_names(&term).is_empty());
    Sample { context: TypingContext { vars, names: BTreeMap::new() }, term, conclusion: raw.goal }
}

/// `cfg.count` typed 𝓛 terms.
pub fn gen_typed_term(cfg: &GenConfig) -> Vec<Sample> {
    (0..cfg.count).map(|i| gen_sample(cfg, i)).collect()
}

/// One typed λμ term for trial `index`, with `Δ` holding the free names.
pub fn gen_lmu_sample(cfg: &GenConfig, index: usize) -> LmuJudgement {
    let raw = generate(&mut cfg.rng(index), cfg, Mode::Lmu);
    let term = raw.node.to_term();
    let fv = free_vars(&term);
    let fnames = free_names(&term);
    let Conclusion::Ty(ty) = raw.goal else { unreachable!("λμ goals are types") };
    LmuJudgement {
        gamma: raw.free_vars.into_iter().filter(|(x, _)| fv.contains(x)).collect(),
        term: project_lmu(&term).expect("generated in the λμ fragment"),
        ty,
        delta: raw
            .free_names
            .into_iter()
            .filter(|(a, _)| fnames.contains(a))
            .map(|(a, t)| (a, t.un_neg().unwrap().clone()))
            .collect(),
    }
}

/// One typed νλμ term for trial `index`.
pub fn gen_nlm_sample(cfg: &GenConfig, index: usize) -> NlmSample {
    let raw = generate(&mut cfg.rng(index), cfg, Mode::Nlm);
    let term = raw.node.to_nlm();
    let fv = term.free_vars();
    NlmSample {
        context: raw.free_vars.into_iter().filter(|(x, _)| fv.contains(x)).collect(),
        term,
        conclusion: raw.goal,
    }
}

/// An untyped term over small identifier pools, for properties that do not
/// need typing. Binders reuse the pools so shadowing is common.
pub fn gen_untyped<R: Rng>(rng: &mut R, size: usize, vars: &[Ident], names: &[Ident]) -> Term {
    if size <= 1 {
        return Term::Var(*vars.choose(rng).unwrap());
    }
    let kinds = if size < 3 { 5 } else { 7 };
    match rng.gen_range(0..kinds) {
        0 => Term::lam(*vars.choose(rng).unwrap(), gen_untyped(rng, size - 1, vars, names)),
        1 => Term::nu(*vars.choose(rng).unwrap(), gen_untyped(rng, size - 1, vars, names)),
        2 => Term::mu(*names.choose(rng).unwrap(), gen_untyped(rng, size - 1, vars, names)),
        3 | 4 => Term::naming(*names.choose(rng).unwrap(), gen_untyped(rng, size - 1, vars, names)),
        k => {
            let l = rng.gen_range(1..=size - 2);
            let m = gen_untyped(rng, l, vars, names);
            let n = gen_untyped(rng, size - 1 - l, vars, names);
            if k == 5 {
                Term::app(m, n)
            } else {
                Term::neg_app(m, n)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bridges::lmu::check_lmu_in_l;
    use crate::infer::check;

    #[test]
    fn samples_check() {
        let cfg = GenConfig::new(7, 200, 30);
        for (i, s) in gen_typed_term(&cfg).iter().enumerate() {
            assert!(s.term.size() <= 30);
            assert!(check(&s.context, &s.term, &s.conclusion), "trial {i}: {} ⊢ {} : {}", s.context, s.term, s.conclusion);
        }
    }

    #[test]
    fn deterministic() {
        let cfg = GenConfig::new(3, 20, 20);
        let a: Vec<String> = gen_typed_term(&cfg).iter().map(|s| s.term.to_string()).collect();
        let b: Vec<String> = gen_typed_term(&cfg).iter().map(|s| s.term.to_string()).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn lmu_samples_check() {
        let cfg = GenConfig::new(11, 100, 25);
        for i in 0..cfg.count {
            let j = gen_lmu_sample(&cfg, i);
            assert!(check_lmu_in_l(&j), "{j}");
        }
    }

    #[test]
    fn size_one_goal_is_a_variable() {
        let cfg = GenConfig::new(1, 1, 1);
        let s = gen_sample(&cfg, 0);
        assert!(matches!(s.term, Term::Var(_)) || s.conclusion == Conclusion::Bottom);
    }
}
