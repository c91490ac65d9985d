//! Acceptance gate: one line per criterion, with its time against a fixed
//! budget. Exits non-zero if any criterion is red.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use lcalc::bridges::lmu::{embed_lmu, parse_lmu, type_lmu};
use lcalc::bridges::nlm::{translate, translate_context, ul, NlmType};
use lcalc::fuzz::commute::{instance, sides, KINDS};
use lcalc::fuzz::{
    gen_lmu_sample, gen_nlm_sample, gen_sample, run_suite, run_suite_with, GenConfig, Suite, SuiteOptions,
    SuiteReport,
};
use lcalc::infer::{instance_of, pt};
use lcalc::parallel::{check_diamond, DEFAULT_CAP};
use lcalc::reduction::enumerate_redexes;
use lcalc::{alpha_eq, parse_conclusion, parse_term, Conclusion, Term, TypeSubstitution, Typing, TypingContext};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{derivable, nameless};

const SEED: u64 = 20_240_611;

struct Gate {
    red: usize,
}

impl Gate {
    fn run(&mut self, id: &str, title: &str, budget: Duration, f: impl FnOnce() -> Result<String, String>) {
        let start = Instant::now();
        let result = f();
        let took = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if took <= budget => (true, d),
            Ok(d) => (false, format!("{d}; over the time budget")),
            Err(e) => (false, e),
        };
        if !ok {
            self.red += 1;
        }
        println!(
            "[{}] {id:<3} {title}: {detail} ({:.2}s, budget {}s)",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            budget.as_secs()
        );
    }
}

fn suite_ok(r: &SuiteReport) -> Result<(), String> {
    if r.passed() {
        Ok(())
    } else {
        let f = &r.failures[0];
        Err(format!("{} failures in {}; first at trial {}: {} on {}", r.failures.len(), r.suite, f.trial, f.reason, f.input))
    }
}

fn closed_typing(term: &str, expected: &str) -> Result<String, String> {
    let t = parse_term(term).map_err(|e| e.to_string())?;
    let typing = pt(&t).map_err(|e| format!("{term}: {e}"))?;
    let want = Typing { context: TypingContext::new(), conclusion: parse_conclusion(expected).unwrap() }.canonical();
    if typing.canonical() != want {
        return Err(format!("{term}: got {typing:?}, want {want:?}"));
    }
    if !derivable(&typing.context, &t, &typing.conclusion) {
        return Err(format!("{term}: oracle rejects {typing:?}"));
    }
    Ok(format!("{} : {}", t, typing.conclusion))
}

fn golden() -> Result<String, String> {
    let dne = parse_term("\\y.mu 'a.[y](nu x.['a]x)").unwrap();
    if !dne.is_closed() {
        return Err("the double negation witness is not closed".into());
    }
    let mut lines = vec![
        closed_typing("\\y.mu 'a.[y](nu x.['a]x)", "~~p1 -> p1")?,
        closed_typing("\\x.\\y.mu 'a.[x(nu z.['a]z)](y(nu z.['a]z))", "(~p2 -> ~p1) -> (~p2 -> p1) -> p2")?,
        closed_typing("\\x.\\y.nu z.[y](x z)", "(p1 -> p2) -> ~p2 -> ~p1")?,
        closed_typing("\\x.\\y.mu 'a.[x(nu z.['a]z)]y", "(~p1 -> ~p2) -> p2 -> p1")?,
    ];
    let peirce = parse_lmu("\\x.mu 'a.['a](x (\\y.mu 'b.['a]y))").map_err(|e| e.to_string())?;
    let j = type_lmu(&peirce).map_err(|e| e.to_string())?;
    let want = parse_conclusion("((p1 -> p2) -> p1) -> p1").unwrap();
    if Conclusion::Ty(j.ty.clone()) != want || !j.delta.is_empty() || !j.gamma.is_empty() {
        return Err(format!("Peirce: got {j}"));
    }
    lines.push(format!("{} : {}", embed_lmu(&peirce), j.ty));
    Ok(format!("{} witnesses typed", lines.len()))
}

fn negative() -> Result<String, String> {
    let terms = ["[\\x.x] y", "mu 'a.\\x.x", "nu y.\\x.x", "mu 'a.(f z)", "mu 'a.nu x.['a]x"];
    for s in terms {
        let t = parse_term(s).unwrap();
        if let Ok(ty) = pt(&t) {
            return Err(format!("{s} typed as {ty:?}"));
        }
        // the oracle agrees that no typing at all exists
        let mut g = TypingContext::new();
        for x in lcalc::free_vars(&t) {
            g.vars.insert(x, lcalc::Type::var(1));
        }
        if derivable(&g, &t, &Conclusion::Bottom) {
            return Err(format!("oracle types {s}"));
        }
    }
    Ok(format!("{} terms rejected", terms.len()))
}

fn subject_reduction() -> Result<String, String> {
    let cfg = GenConfig::new(SEED, 1000, 30);
    let r = run_suite(Suite::SubjectReduction, &cfg);
    suite_ok(&r)?;
    // independently: every one-step reduct at the generated judgement
    let mut steps = 0;
    for i in 0..cfg.count {
        let s = gen_sample(&cfg, i);
        if !derivable(&s.context, &s.term, &s.conclusion) {
            return Err(format!("generated judgement not derivable: {} : {}", s.term, s.conclusion));
        }
        for step in enumerate_redexes(&s.term) {
            steps += 1;
            if !derivable(&s.context, &step.after, &s.conclusion) {
                return Err(format!("{} step on {} gives {}, which does not check", step.rule, s.term, step.after));
            }
        }
    }
    Ok(format!("{} terms, {} steps checked by the suite, {} one-step reducts by the oracle, 0 failures", cfg.count, r.checks, steps))
}

fn confluence() -> Result<String, String> {
    // (a) exhaustive diamond on small terms
    let small = GenConfig::new(SEED + 1, 400, 12);
    let mut pairs = 0;
    for i in 0..small.count {
        let t = gen_sample(&small, i).term;
        let r = check_diamond(&t, DEFAULT_CAP).map_err(|e| format!("diamond not exhaustive on {t}: {e}"))?;
        if !r.holds() {
            return Err(format!("diamond fails on {t}: {:?}", r.violations[0]));
        }
        pairs += r.pairs_checked;
    }
    // (b) strategies agree on larger terms
    let cfg = GenConfig::new(SEED + 2, 500, 30);
    let opts = SuiteOptions { diamond_max_size: 0, random_strategies: 5, ..SuiteOptions::default() };
    let r = run_suite_with(Suite::Confluence, &cfg, &opts);
    suite_ok(&r)?;
    Ok(format!(
        "(a) {} terms of size <= 12, {pairs} reduct pairs joined; (b) {} terms of size <= 30, 6 strategies agree",
        small.count, cfg.count
    ))
}

fn strong_normalisation() -> Result<String, String> {
    let cfg = GenConfig::new(SEED + 3, 1000, 30);
    let r = run_suite(Suite::Sn, &cfg);
    suite_ok(&r)?;
    Ok(format!("{} terms normalise within fuel 10000 under lo and ri; 0 exhaustions", cfg.count))
}

fn substitution_commutation() -> Result<String, String> {
    let cfg = GenConfig::new(SEED + 4, 200, 12);
    let r = run_suite(Suite::SubstCommute, &cfg);
    suite_ok(&r)?;
    // and compared namelessly, without the library's α-equivalence
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    let mut checked = 0;
    for _ in 0..200 {
        for f in KINDS {
            for g in KINDS {
                let size = rng.gen_range(2..=12);
                let (m, first, second) = instance(&mut rng, f, g, size);
                let (lhs, rhs) = sides(&m, &first, &second);
                if nameless(&lhs) != nameless(&rhs) || !alpha_eq(&lhs, &rhs) {
                    return Err(format!("{f:?}/{g:?} on {m}: {lhs} vs {rhs}"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("16 equations x 200 triples by the suite, {checked} more compared namelessly, 0 failures"))
}

fn pt_round_trip() -> Result<String, String> {
    let cfg = GenConfig::new(SEED + 5, 500, 30);
    let r = run_suite(Suite::PtRoundtrip, &cfg);
    suite_ok(&r)?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    for i in 0..cfg.count {
        let s = gen_sample(&cfg, i);
        let typing = pt(&s.term).map_err(|e| format!("{}: {e}", s.term))?;
        if !derivable(&typing.context, &s.term, &typing.conclusion) {
            return Err(format!("oracle rejects pt({}) = {typing:?}", s.term));
        }
        let vars: Vec<_> = s.context.type_vars().into_iter().chain(s.conclusion.as_type().map(|t| t.vars()).unwrap_or_default()).collect();
        let sub: TypeSubstitution = vars
            .into_iter()
            .map(|v| (v, lcalc::Type::arrow(lcalc::Type::var(rng.gen_range(1..=3)), lcalc::Type::neg(lcalc::Type::var(7)))))
            .collect();
        let (g, c) = (sub.apply_context(&s.context), sub.apply_conclusion(&s.conclusion));
        if !derivable(&g, &s.term, &c) {
            return Err(format!("oracle rejects substituted judgement for {}", s.term));
        }
        instance_of(&typing, &g, &c).map_err(|e| format!("{}: instance not reproduced: {e}", s.term))?;
    }
    Ok(format!("{} judgements: pt re-checks under the oracle and covers substituted instances", cfg.count))
}

fn bridges() -> Result<String, String> {
    let cfg = GenConfig::new(SEED + 6, 200, 30);
    let ra = run_suite(Suite::Embedding, &cfg);
    suite_ok(&ra)?;
    let rb = run_suite(Suite::Translation, &cfg);
    suite_ok(&rb)?;
    for i in 0..cfg.count {
        let j = gen_lmu_sample(&cfg, i);
        if !derivable(&j.l_context(), &embed_lmu(&j.term), &Conclusion::Ty(j.ty.clone())) {
            return Err(format!("oracle rejects embedding of {j}"));
        }
        let n = gen_nlm_sample(&cfg, i);
        let v = ul(&n.term);
        let ctx = n.context.iter().map(|(x, t)| (*x, NlmType::from_type(t))).collect();
        let g = translate_context(&ctx, &v).unwrap();
        let m: Term = translate(&n.term, &v);
        if !derivable(&g, &m, &n.conclusion) {
            return Err(format!("oracle rejects translation {m} of {}", n.term));
        }
    }
    Ok(format!("(a) {0} λμ judgements hold after embedding; (b) {0} νλμ judgements hold after translation", cfg.count))
}

fn mgu() -> Result<String, String> {
    let cfg = GenConfig::new(SEED + 7, 500, 30);
    let r = run_suite(Suite::Mgu, &cfg);
    suite_ok(&r)?;
    Ok(format!("{} unifiable pairs; each sampled unifier factors through unify", cfg.count))
}

fn main() -> ExitCode {
    let s = Duration::from_secs;
    let mut gate = Gate { red: 0 };
    gate.run("1", "golden derivations", s(1), golden);
    gate.run("2", "negative typing", s(1), negative);
    gate.run("3", "subject reduction", s(60), subject_reduction);
    gate.run("4", "confluence without θ", s(120), confluence);
    gate.run("5", "strong normalisation", s(60), strong_normalisation);
    gate.run("6", "substitution commutation", s(30), substitution_commutation);
    gate.run("7", "pt round trip", s(60), pt_round_trip);
    gate.run("8", "bridges", s(60), bridges);
    gate.run("9", "mgu", s(10), mgu);
    if gate.red == 0 {
        println!("acceptance: 9/9 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} of 9 criteria red", gate.red);
        ExitCode::FAILURE
    }
}
