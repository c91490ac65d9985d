//! Property suites over generated terms.
//!
//! Trials are independent and run in parallel; each owns its random stream
//! (seed plus trial index), so a report is reproducible from the suite name
//! and seed alone.

pub mod commute;
pub mod gen;
pub mod shrink;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bridges::lmu::{check_lmu_in_l, embed_lmu, type_lmu, LmuJudgement};
use crate::bridges::nlm::{l_as_nlm, translate, translate_checked, translate_context, typecheck_nlm, ul, NlmType};
use crate::infer::{check, check_detailed, instance_of, pt, subject_reduction_check, unify};
use crate::parallel::check_diamond;
use crate::reduction::{normal_form, RuleSet, Strategy};
use crate::syntax::{alpha_eq, Term};
use crate::types::{judgement, match_type, Conclusion, TyVar, Type, TypeSubstitution};

pub use gen::{gen_lmu_sample, gen_nlm_sample, gen_sample, gen_typed_term, GenConfig, NlmSample, RuleWeights, Sample};
pub use shrink::{shrink, Shrink};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    SubjectReduction,
    Confluence,
    Sn,
    SubstCommute,
    PtRoundtrip,
    Translation,
    Embedding,
    Mgu,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::SubjectReduction,
        Suite::Confluence,
        Suite::Sn,
        Suite::SubstCommute,
        Suite::PtRoundtrip,
        Suite::Translation,
        Suite::Embedding,
        Suite::Mgu,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::SubjectReduction => "subject-reduction",
            Suite::Confluence => "confluence",
            Suite::Sn => "sn",
            Suite::SubstCommute => "subst-commute",
            Suite::PtRoundtrip => "pt-roundtrip",
            Suite::Translation => "translation",
            Suite::Embedding => "embedding",
            Suite::Mgu => "mgu",
        }
    }

    /// The property the suite exercises.
    pub fn property(self) -> &'static str {
        match self {
            Suite::SubjectReduction => "soundness: typing is preserved by every reduction step",
            Suite::Confluence => "confluence without θ: parallel reduction has the diamond property, strategies agree",
            Suite::Sn => "strong normalisation of typeable terms",
            Suite::SubstCommute => "the four substitutions commute",
            Suite::PtRoundtrip => "pt is sound and complete",
            Suite::Translation => "νλμ typings translate to 𝓛 typings",
            Suite::Embedding => "𝓛 is conservative over λμ typing",
            Suite::Mgu => "unify returns a most general unifier",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown suite `{0}`")]
pub struct UnknownSuite(pub String);

impl FromStr for Suite {
    type Err = UnknownSuite;

    fn from_str(s: &str) -> Result<Suite, UnknownSuite> {
        Suite::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| UnknownSuite(s.to_string()))
    }
}

/// Knobs that are specific to some suites.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteOptions {
    pub fuel: usize,
    /// Bound on parallel-reduct sets.
    pub cap: usize,
    /// Run the diamond check on terms up to this size.
    pub diamond_max_size: usize,
    /// Random strategies compared against leftmost-outermost.
    pub random_strategies: u64,
    /// Reduction steps explored per subject-reduction trial.
    pub sr_steps: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            fuel: crate::reduction::DEFAULT_FUEL,
            cap: crate::parallel::DEFAULT_CAP,
            diamond_max_size: 12,
            random_strategies: 5,
            sr_steps: 64,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub trial: usize,
    pub input: String,
    pub reason: String,
    /// A smaller input that still fails, when shrinking applies.
    pub shrunk: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub property: String,
    pub seed: u64,
    pub trials: usize,
    /// Individual checks performed (steps, pairs, equations, ...).
    pub checks: usize,
    /// Trials that could not be checked (a bound was hit).
    pub skipped: usize,
    pub failures: Vec<Failure>,
    pub elapsed_ms: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("reports serialise")
    }

    /// A human-readable table.
    pub fn table(&self) -> String {
        let mut out = format!(
            "{:<18} {:>7} {:>9} {:>8} {:>9} {:>10}\n",
            "suite", "trials", "checks", "skipped", "failures", "time"
        );
        out += &format!(
            "{:<18} {:>7} {:>9} {:>8} {:>9} {:>8.0}ms\n",
            self.suite,
            self.trials,
            self.checks,
            self.skipped,
            self.failures.len(),
            self.elapsed_ms
        );
        out += &format!("property: {}\n", self.property);
        for f in &self.failures {
            out += &format!("trial {}: {}\n  input: {}\n", f.trial, f.reason, f.input);
            if let Some(s) = &f.shrunk {
                out += &format!("  shrunk: {s}\n");
            }
        }
        out
    }
}

#[derive(Default)]
struct Outcome {
    checks: usize,
    skipped: bool,
    failure: Option<(String, String, Option<String>)>,
}

impl Outcome {
    fn ok(checks: usize) -> Outcome {
        Outcome { checks, ..Outcome::default() }
    }

    fn fail(checks: usize, input: impl fmt::Display, reason: impl Into<String>, shrunk: Option<String>) -> Outcome {
        Outcome { checks, skipped: false, failure: Some((input.to_string(), reason.into(), shrunk)) }
    }
}

pub fn run_suite(suite: Suite, cfg: &GenConfig) -> SuiteReport {
    run_suite_with(suite, cfg, &SuiteOptions::default())
}

pub fn run_suite_with(suite: Suite, cfg: &GenConfig, opts: &SuiteOptions) -> SuiteReport {
    let start = Instant::now();
    let outcomes: Vec<Outcome> = (0..cfg.count).into_par_iter().map(|i| trial(suite, cfg, opts, i)).collect();
    let mut report = SuiteReport {
        suite: suite.name().to_string(),
        property: suite.property().to_string(),
        seed: cfg.seed,
        trials: cfg.count,
        checks: 0,
        skipped: 0,
        failures: Vec::new(),
        elapsed_ms: 0.0,
    };
    for (i, o) in outcomes.into_iter().enumerate() {
        report.checks += o.checks;
        report.skipped += o.skipped as usize;
        if let Some((input, reason, shrunk)) = o.failure {
            report.failures.push(Failure { trial: i, input, reason, shrunk });
        }
    }
    report.elapsed_ms = start.elapsed().as_secs_f64() * 1000.0;
    report
}


fn trial(suite: Suite, cfg: &GenConfig, opts: &SuiteOptions, i: usize) -> Outcome {
    match suite {
        Suite::SubjectReduction => subject_reduction_trial(cfg, opts, i),
        Suite::Confluence => confluence_trial(cfg, opts, i),
        Suite::Sn => sn_trial(cfg, opts, i),
        Suite::SubstCommute => {
            let mut rng = cfg.rng(i);
            let failures = commute::check_all(&mut rng, cfg.max_size.clamp(2, 16));
            match failures.first() {
                None => Outcome::ok(16),
                Some(f) => Outcome::fail(16, f, format!("{} of 16 equations failed", failures.len()), None),
            }
        }
        Suite::PtRoundtrip => pt_trial(cfg, i),
        Suite::Translation => translation_trial(cfg, i),
        Suite::Embedding => embedding_trial(cfg, i),
        Suite::Mgu => mgu_trial(cfg, i),
    }
}

fn sr_fails(t: &Term, steps: usize) -> bool {
    match pt(t) {
        Ok(ty) => !subject_reduction_check(&ty.context, t, &ty.conclusion, steps).holds(),
        Err(_) => false,
    }
}

fn subject_reduction_trial(cfg: &GenConfig, opts: &SuiteOptions, i: usize) -> Outcome {
    let s = gen_sample(cfg, i);
    let r = subject_reduction_check(&s.context, &s.term, &s.conclusion, opts.sr_steps);
    match r.violation {
        None => Outcome::ok(r.steps_checked),
        Some(v) => {
            let steps: Vec<String> = v.trace.iter().map(|s| format!("{} at {:?}", s.rule, s.position)).collect();
            let shrunk = sr_fails(&s.term, opts.sr_steps).then(|| shrink(&s.term, |t| sr_fails(t, opts.sr_steps)).to_string());
            Outcome::fail(
                r.steps_checked,
                judgement(&s.context, &s.term, &s.conclusion),
                format!("after {}: {}", steps.join(", "), v.reason),
                shrunk,
            )
        }
    }
}

fn strategies_disagree(t: &Term, opts: &SuiteOptions, seed: u64) -> Option<String> {
    let (lo, _, exhausted) = normal_form(t, Strategy::LeftmostOutermost, opts.fuel, RuleSet::NO_THETA);
    if exhausted {
        return Some("fuel exhausted under leftmost-outermost".into());
    }
    for k in 0..opts.random_strategies {
        let strategy = Strategy::Random(seed.wrapping_mul(31).wrapping_add(k));
        let (nf, _, exhausted) = normal_form(t, strategy, opts.fuel, RuleSet::NO_THETA);
        if exhausted {
            return Some(format!("fuel exhausted under {strategy}"));
        }
        if !alpha_eq(&nf, &lo) {
            return Some(format!("{strategy} reaches {nf}, leftmost-outermost reaches {lo}"));
        }
    }
    None
}

fn confluence_trial(cfg: &GenConfig, opts: &SuiteOptions, i: usize) -> Outcome {
    let s = gen_sample(cfg, i);
    let t = &s.term;
    let mut checks = 0;
    let mut skipped = false;
    if t.size() <= opts.diamond_max_size {
        match check_diamond(t, opts.cap) {
            Ok(r) => {
                checks += r.pairs_checked;
                if let Some(v) = r.violations.first() {
                    return Outcome::fail(checks, t, format!("diamond fails: {v:?}"), None);
                }
            }
            Err(_) => skipped = true,
        }
    }
    let seed = cfg.seed ^ (i as u64);
    checks += 1;
    if let Some(reason) = strategies_disagree(t, opts, seed) {
        let shrunk = shrink(t, |u| pt(u).is_ok() && strategies_disagree(u, opts, seed).is_some());
        return Outcome::fail(checks, t, reason, Some(shrunk.to_string()));
    }
    Outcome { checks, skipped, failure: None }
}

fn sn_trial(cfg: &GenConfig, opts: &SuiteOptions, i: usize) -> Outcome {
    let s = gen_sample(cfg, i);
    let exhausts = |t: &Term| {
        [Strategy::LeftmostOutermost, Strategy::RightmostInnermost]
            .into_iter()
            .find(|st| normal_form(t, *st, opts.fuel, RuleSet::ALL).2)
    };
    match exhausts(&s.term) {
        None => Outcome::ok(2),
        Some(st) => {
            let shrunk = shrink(&s.term, |u| pt(u).is_ok() && exhausts(u).is_some());
            Outcome::fail(2, &s.term, format!("fuel {} exhausted under {st}", opts.fuel), Some(shrunk.to_string()))
        }
    }
}

fn random_substitution<R: Rng>(rng: &mut R, vars: impl IntoIterator<Item = TyVar>) -> TypeSubstitution {
    vars.into_iter()
        .filter_map(|v| {
            if !rng.gen_bool(0.6) {
                return None;
            }
            let t = random_type(rng, 2, 4);
            Some((v, t))
        })
        .collect()
}

fn random_type<R: Rng>(rng: &mut R, depth: u32, atoms: u32) -> Type {
    if depth == 0 || rng.gen_bool(0.35) {
        return Type::var(rng.gen_range(1..=atoms));
    }
    match rng.gen_range(0..3) {
        0 => Type::neg(random_type(rng, depth - 1, atoms)),
        _ => Type::arrow(random_type(rng, depth - 1, atoms), random_type(rng, depth - 1, atoms)),
    }
}

fn pt_trial(cfg: &GenConfig, i: usize) -> Outcome {
    let s = gen_sample(cfg, i);
    let input = judgement(&s.context, &s.term, &s.conclusion);
    let typing = match pt(&s.term) {
        Ok(t) => t,
        Err(e) => return Outcome::fail(1, input, format!("pt rejects a typeable term: {e}"), None),
    };
    if let Err(e) = check_detailed(&typing.context, &s.term, &typing.conclusion) {
        return Outcome::fail(1, input, format!("pt output does not re-check: {e}"), None);
    }
    if let Err(e) = instance_of(&typing, &s.context, &s.conclusion) {
        return Outcome::fail(2, input, format!("generated judgement is not an instance of pt: {e}"), None);
    }
    // completeness: any instance of the judgement is recognised
    let mut rng = cfg.rng(i);
    let mut vars = s.context.type_vars();
    if let Conclusion::Ty(t) = &s.conclusion {
        vars.extend(t.vars());
    }
    let sub = random_substitution(&mut rng, vars);
    let (g2, c2) = (sub.apply_context(&s.context), sub.apply_conclusion(&s.conclusion));
    if !check(&g2, &s.term, &c2) {
        return Outcome::fail(3, judgement(&g2, &s.term, &c2), "substituted instance is not recognised", None);
    }
    Outcome::ok(3)
}

fn translation_trial(cfg: &GenConfig, i: usize) -> Outcome {
    let NlmSample { context, term, conclusion } = gen_nlm_sample(cfg, i);
    let input = format!("{term}");
    let v = ul(&term);
    let nlm_context = context.iter().map(|(x, t)| (*x, NlmType::from_type(t))).collect();
    let g = translate_context(&nlm_context, &v).expect("generated types are ⊥-free");
    let m = translate(&term, &v);
    if let Err(e) = check_detailed(&g, &m, &conclusion) {
        return Outcome::fail(1, input, format!("translation {m} fails {g} ⊢ _ : {conclusion}: {e}"), None);
    }
    match translate_checked(&term) {
        Ok((g, m, c)) => {
            if !check(&g, &m, &c) {
                return Outcome::fail(2, input, format!("principal translation fails: {g} ⊢ {m} : {c}"), None);
            }
        }
        Err(e) => return Outcome::fail(2, input, e.to_string(), None),
    }
    // and 𝓛-typeable terms are νλμ-typeable as they stand
    let s = gen_sample(cfg, i);
    let (n, _) = l_as_nlm(&s.term);
    if typecheck_nlm(&n).is_none() {
        return Outcome::fail(3, &s.term, "typeable term is not typeable in nlm", None);
    }
    Outcome::ok(3)
}

fn embedding_trial(cfg: &GenConfig, i: usize) -> Outcome {
    let j = gen_lmu_sample(cfg, i);
    if !check_lmu_in_l(&j) {
        let fails = |t: &crate::bridges::lmu::LmuTerm| match type_lmu(t) {
            Ok(p) => !check_lmu_in_l(&LmuJudgement { term: t.clone(), ..p }),
            Err(_) => false,
        };
        let shrunk = fails(&j.term).then(|| shrink(&j.term, fails).to_string());
        return Outcome::fail(1, &j, format!("{} does not check", embed_lmu(&j.term)), shrunk);
    }
    Outcome::ok(1)
}

/// Replaces random subterms of `t` by fresh variables, recording what they
/// stood for in `theta`.
fn abstract_type<R: Rng>(rng: &mut R, t: &Type, next: &mut u32, theta: &mut BTreeMap<TyVar, Type>) -> Type {
    if rng.gen_bool(0.25) {
        *next += 1;
        let v = TyVar::Gen(*next);
        theta.insert(v, t.clone());
        return Type::Var(v);
    }
    match t {
        Type::Var(_) => t.clone(),
        Type::Arrow(a, b) => Type::arrow(abstract_type(rng, a, next, theta), abstract_type(rng, b, next, theta)),
        Type::Neg(a) => Type::neg(abstract_type(rng, a, next, theta)),
    }
}

/// A unifiable pair and an independently chosen unifier of it.
pub fn unifiable_pair<R: Rng>(rng: &mut R) -> (Type, Type, TypeSubstitution) {
    let u = random_type(rng, 4, 4);
    let mut next = 100;
    let mut theta = BTreeMap::new();
    let a = abstract_type(rng, &u, &mut next, &mut theta);
    let b = abstract_type(rng, &u, &mut next, &mut theta);
    let theta: TypeSubstitution = theta.into_iter().collect();
    let rho = random_substitution(rng, (1..=4).map(TyVar::Gen));
    (a, b, rho.compose(&theta))
}

/// Whether `other` factors as `tau ∘ mgu` on the variables of `a` and `b`.
pub fn factors_through(mgu: &TypeSubstitution, other: &TypeSubstitution, a: &Type, b: &Type) -> bool {
    let mut tau = BTreeMap::new();
    a.vars().union(&b.vars()).all(|v| {
        let v = Type::Var(*v);
        match_type(&mgu.apply(&v), &other.apply(&v), &mut tau)
    })
}

fn mgu_trial(cfg: &GenConfig, i: usize) -> Outcome {
    let mut rng = cfg.rng(i);
    let (a, b, theta) = unifiable_pair(&mut rng);
    let input = format!("{a}  =?  {b}");
    if theta.apply(&a) != theta.apply(&b) {
        return Outcome::fail(0, input, "sampled substitution is not a unifier", None);
    }
    let s = match unify(&a, &b) {
        Ok(s) => s,
        Err(e) => return Outcome::fail(1, input, format!("unify fails on a unifiable pair: {e}"), None),
    };
    if s.apply(&a) != s.apply(&b) {
        return Outcome::fail(1, input, format!("{s} is not a unifier"), None);
    }
    if !factors_through(&s, &theta, &a, &b) {
        return Outcome::fail(2, input, format!("{theta} does not factor through {s}"), None);
    }
    Outcome::ok(2)
}
