//! Invariants checked against the reference implementations in `common`.

mod common;

use proptest::prelude::*;

use lcalc::bridges::lmu::{embed_lmu, lmu_steps, LmuTerm};
use lcalc::bridges::nlm::{l_as_nlm, typecheck_nlm};
use lcalc::fuzz::{gen_sample, GenConfig};
use lcalc::infer::pt;
use lcalc::parallel::{parallel_reducts, parallel_reducts_with_derivations, replay, DEFAULT_CAP};
use lcalc::reduction::{enumerate_redexes, enumerate_steps, normalize_with, RuleSet, Strategy as Order};
use lcalc::{alpha_eq, parse_term, rename_name, subst_insert, subst_struct, subst_term, Term};

use common::{db_subst_insert, db_subst_struct, db_subst_var, derivable, ident, nameless};

const VARS: [&str; 3] = ["x", "y", "z"];
const NAMES: [&str; 3] = ["a", "b", "c"];

fn term() -> impl Strategy<Value = Term> {
    let leaf = prop::sample::select(&VARS[..]).prop_map(Term::var);
    leaf.prop_recursive(5, 24, 2, |inner| {
        let var = prop::sample::select(&VARS[..]);
        let name = prop::sample::select(&NAMES[..]);
        prop_oneof![
            (var.clone(), inner.clone()).prop_map(|(x, b)| Term::lam(x, b)),
            (var, inner.clone()).prop_map(|(x, b)| Term::nu(x, b)),
            (name.clone(), inner.clone()).prop_map(|(a, b)| Term::mu(a, b)),
            (name, inner.clone()).prop_map(|(a, b)| Term::naming(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(m, n)| Term::app(m, n)),
            (inner.clone(), inner).prop_map(|(m, n)| Term::neg_app(m, n)),
        ]
    })
}

fn lmu_term() -> impl Strategy<Value = LmuTerm> {
    let leaf = prop::sample::select(&VARS[..]).prop_map(LmuTerm::var);
    leaf.prop_recursive(5, 20, 2, |inner| {
        let var = prop::sample::select(&VARS[..]);
        let name = prop::sample::select(&NAMES[..]);
        prop_oneof![
            (var, inner.clone()).prop_map(|(x, b)| LmuTerm::lam(x, b)),
            (name.clone(), name, inner.clone()).prop_map(|(a, b, m)| LmuTerm::switch(a, b, m)),
            (inner.clone(), inner).prop_map(|(m, n)| LmuTerm::app(m, n)),
        ]
    })
}

/// A typeable term from the derivation-directed generator.
fn typed_term(max_size: usize) -> impl Strategy<Value = Term> {
    (any::<u64>(), 0..64usize).prop_map(move |(seed, i)| gen_sample(&GenConfig::new(seed, 64, max_size), i).term)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn print_then_parse_is_identity_up_to_alpha(t in term()) {
        let back = parse_term(&t.to_string()).unwrap();
        prop_assert_eq!(nameless(&back), nameless(&t));
        prop_assert_eq!(back.to_string(), parse_term(&back.to_string()).unwrap().to_string());
    }

    #[test]
    fn alpha_eq_agrees_with_nameless_equality(s in term(), t in term()) {
        prop_assert_eq!(alpha_eq(&s, &t), nameless(&s) == nameless(&t));
        let fresh = lcalc::syntax::rename_apart(&s);
        prop_assert!(alpha_eq(&s, &fresh));
    }

    #[test]
    fn term_substitution_matches_reference(m in term(), n in term(), x in prop::sample::select(&VARS[..])) {
        let got = subst_term(&m, &n, ident(x));
        let want = db_subst_var(&nameless(&m), &nameless(&n), ident(x), 0, 0);
        prop_assert_eq!(nameless(&got), want);
    }

    #[test]
    fn structural_substitution_matches_reference(m in term(), n in term(), a in prop::sample::select(&NAMES[..])) {
        let g = ident("g");
        let got = subst_struct(&m, &n, ident(a), g);
        let want = db_subst_struct(&nameless(&m), &nameless(&n), ident(a), g, 0, 0);
        prop_assert_eq!(nameless(&got), want);
    }

    #[test]
    fn insertion_matches_reference(m in term(), n in term(), a in prop::sample::select(&NAMES[..])) {
        let got = subst_insert(&m, &n, ident(a));
        let want = db_subst_insert(&nameless(&m), &nameless(&n), ident(a), 0, 0);
        prop_assert_eq!(nameless(&got), want);
    }

    #[test]
    fn renaming_to_a_fresh_name_round_trips(m in term(), a in prop::sample::select(&NAMES[..])) {
        let b = ident("g");
        let renamed = rename_name(&m, b, ident(a));
        prop_assert_eq!(lcalc::free_names(&renamed).contains(&ident(a)), false);
        let back = rename_name(&renamed, ident(a), b);
        prop_assert!(alpha_eq(&back, &m));
    }

    #[test]
    fn pt_is_derivable(t in term()) {
        if let Ok(typing) = pt(&t) {
            prop_assert!(derivable(&typing.context, &t, &typing.conclusion), "{} : {:?}", t, typing);
        }
    }

    #[test]
    fn pt_types_generated_terms(t in typed_term(24)) {
        let typing = pt(&t).unwrap();
        prop_assert!(derivable(&typing.context, &t, &typing.conclusion));
    }

    #[test]
    fn one_step_without_theta_is_parallel(t in term()) {
        if let Ok(par) = parallel_reducts(&t, DEFAULT_CAP) {
            for s in enumerate_steps(&t, RuleSet::NO_THETA) {
                prop_assert!(par.iter().any(|u| alpha_eq(u, &s.after)), "{} -> {} not parallel", t, s.after);
            }
        }
    }

    #[test]
    fn parallel_derivations_replay(t in term()) {
        if let Ok(par) = parallel_reducts_with_derivations(&t, DEFAULT_CAP) {
            for r in par {
                let back = replay(&t, &r.derivation);
                prop_assert!(back.as_ref().is_some_and(|u| alpha_eq(u, &r.target)), "{:?} on {}", r.derivation, t);
            }
        }
    }

    #[test]
    fn traces_replay(t in typed_term(20), seed in any::<u64>()) {
        for strategy in [Order::LeftmostOutermost, Order::RightmostInnermost, Order::Random(seed)] {
            let tr = normalize_with(&t, strategy, 10_000, RuleSet::ALL);
            prop_assert!(!tr.fuel_exhausted);
            prop_assert!(tr.replay());
            let mut cur = t.clone();
            for s in &tr.steps {
                prop_assert!(enumerate_redexes(&cur).iter().any(|u| alpha_eq(&u.after, &s.after)));
                cur = s.after.clone();
            }
            prop_assert!(enumerate_redexes(&tr.final_term).is_empty());
        }
    }

    #[test]
    fn lmu_steps_are_l_steps(t in lmu_term()) {
        let l_steps: Vec<Term> = enumerate_redexes(&embed_lmu(&t)).into_iter().map(|s| s.after).collect();
        let mine = lmu_steps(&t);
        prop_assert_eq!(mine.len(), l_steps.len());
        for u in mine {
            let e = embed_lmu(&u);
            prop_assert!(l_steps.iter().any(|v| alpha_eq(v, &e)), "{} -> {}", t, u);
        }
    }

    #[test]
    fn typed_terms_read_as_nlm_are_typeable(t in typed_term(24)) {
        let (n, _) = l_as_nlm(&t);
        prop_assert!(typecheck_nlm(&n).is_some(), "{} as {}", t, n);
    }
}
