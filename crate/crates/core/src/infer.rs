//! Unification, context unification, principal typing and checking.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::ident::Ident;
use crate::reduction::{enumerate_redexes, ReductionStep};
use crate::syntax::{canonical_key, Term};
use crate::types::{match_type, Conclusion, TyVar, Type, TypeSubstitution, Typing, TypingContext};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnifyError {
    /// The variable occurs in the type it should be bound to.
    Occurs(TyVar, Type),
    /// Different type constructors.
    Clash(Type, Type),
}

impl fmt::Display for UnifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnifyError::Occurs(v, t) => write!(f, "{v} occurs in {t}"),
            UnifyError::Clash(a, b) => write!(f, "cannot unify {a} with {b}"),
        }
    }
}

impl std::error::Error for UnifyError {}

/// Robinson unification, cases tried top to bottom:
/// `φ/φ`, `φ/B` (occurs check), `A/φ`, arrow against arrow, negation against
/// negation.
pub fn unify(a: &Type, b: &Type) -> Result<TypeSubstitution, UnifyError> {
    match (a, b) {
        (Type::Var(v), Type::Var(w)) if v == w => Ok(TypeSubstitution::identity()),
        (Type::Var(v), _) => {
            if b.occurs(*v) {
                Err(UnifyError::Occurs(*v, b.clone()))
            } else {
                Ok(TypeSubstitution::single(*v, b.clone()))
            }
        }
        (_, Type::Var(_)) => unify(b, a),
        (Type::Arrow(a1, b1), Type::Arrow(a2, b2)) => {
            let s1 = unify(a1, a2)?;
            let s2 = unify(&s1.apply(b1), &s1.apply(b2))?;
            Ok(s2.compose(&s1))
        }
        (Type::Neg(a1), Type::Neg(a2)) => unify(a1, a2),
        _ => Err(UnifyError::Clash(a.clone(), b.clone())),
    }
}

/// Unifies the types of the subjects (variables and names) the two contexts
/// share, threading the substitution through.
pub fn unify_contexts(g1: &TypingContext, g2: &TypingContext) -> Result<TypeSubstitution, UnifyError> {
    let mut s = TypeSubstitution::identity();
    let shared = g1
        .vars
        .iter()
        .filter_map(|(x, a)| g2.vars.get(x).map(|b| (a, b)))
        .chain(g1.names.iter().filter_map(|(n, a)| g2.names.get(n).map(|b| (a, b))));
    for (a, b) in shared {
        let s1 = unify(&s.apply(a), &s.apply(b))?;
        s = s1.compose(&s);
    }
    Ok(s)
}

/// The sub-case of the typing algorithm at which a term was rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeError {
    /// `λx.M` where `M` concludes ⊥.
    AbstractionBody { term: String },
    /// `M N` where `M` or `N` concludes ⊥.
    ApplicationOperand { term: String },
    /// `M N` where the type of `M` is not an arrow from the type of `N`.
    Application { term: String, cause: UnifyError },
    /// `νx.M` where `M` does not conclude ⊥.
    NuBody { term: String },
    /// `[M]N` where `M` or `N` concludes ⊥.
    NegAppOperand { term: String },
    /// `[M]N` where `M` is not a negation of the type of `N`.
    NegApp { term: String, cause: UnifyError },
    /// `μα.M` where `M` does not conclude ⊥.
    MuBody { term: String },
    /// `[α]N` where `N` concludes ⊥.
    NamingBody { term: String },
    /// `[α]N` where the type of `N` disagrees with the type recorded for `α`.
    Naming { term: String, cause: UnifyError },
    /// The two sides of an application disagree on a shared assumption.
    Contexts { term: String, cause: UnifyError },
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeError::AbstractionBody { term } => write!(f, "the body of {term} concludes # and has no type"),
            TypeError::ApplicationOperand { term } => {
                write!(f, "in {term} an operand concludes # and has no type")
            }
            TypeError::Application { term, cause } => write!(f, "in application {term}: {cause}"),
            TypeError::NuBody { term } => write!(f, "the body of {term} must conclude #"),
            TypeError::NegAppOperand { term } => {
                write!(f, "in negated application {term} an operand concludes # and has no type")
            }
            TypeError::NegApp { term, cause } => write!(f, "in negated application {term}: {cause}"),
            TypeError::MuBody { term } => write!(f, "the body of {term} must conclude #"),
            TypeError::NamingBody { term } => write!(f, "the named term in {term} concludes # and has no type"),
            TypeError::Naming { term, cause } => write!(f, "in naming {term}: {cause}"),
            TypeError::Contexts { term, cause } => {
                write!(f, "in {term} the two sides disagree on a shared assumption: {cause}")
            }
        }
    }
}

impl std::error::Error for TypeError {}

struct Pt {
    next: u32,
}

impl Pt {
    fn fresh(&mut self) -> Type {
        self.next += 1;
        Type::var(self.next)
    }

    fn union(s: &TypeSubstitution, g1: &TypingContext, g2: &TypingContext) -> TypingContext {
        let mut g = s.apply_context(g1);
        let g2 = s.apply_context(g2);
        for (x, t) in g2.vars {
            let prev = g.vars.insert(x, t.clone());
            debug_assert!(prev.is_none_or(|p| p == t), "contexts disagree on {x}");
        }
        for (a, t) in g2.names {
            let prev = g.names.insert(a, t.clone());
            debug_assert!(prev.is_none_or(|p| p == t), "contexts disagree on '{a}");
        }
        g
    }

    fn run(&mut self, t: &Term) -> Result<Typing, TypeError> {
        let term = || t.to_string();
        match t {
            Term::Var(x) => {
                let v = self.fresh();
                Ok(Typing { context: TypingContext::new().with_var(*x, v.clone()), conclusion: Conclusion::Ty(v) })
            }
            Term::Lam(x, m) => {
                let Typing { mut context, conclusion } = self.run(m)?;
                let Conclusion::Ty(p) = conclusion else {
                    return Err(TypeError::AbstractionBody { term: term() });
                };
                let a = context.vars.remove(x).unwrap_or_else(|| self.fresh());
                Ok(Typing { context, conclusion: Conclusion::Ty(Type::arrow(a, p)) })
            }
            Term::App(m, n) => {
                let t1 = self.run(m)?;
                let t2 = self.run(n)?;
                let (Conclusion::Ty(p1), Conclusion::Ty(p2)) = (&t1.conclusion, &t2.conclusion) else {
                    return Err(TypeError::ApplicationOperand { term: term() });
                };
                let v = self.fresh();
                let s1 = unify(p1, &Type::arrow(p2.clone(), v.clone()))
                    .map_err(|cause| TypeError::Application { term: term(), cause })?;
                let s2 = unify_contexts(&s1.apply_context(&t1.context), &s1.apply_context(&t2.context))
                    .map_err(|cause| TypeError::Contexts { term: term(), cause })?;
                let s = s2.compose(&s1);
                Ok(Typing { context: Pt::union(&s, &t1.context, &t2.context), conclusion: Conclusion::Ty(s.apply(&v)) })
            }
            Term::Nu(x, m) => {
                let Typing { mut context, conclusion } = self.run(m)?;
                if conclusion != Conclusion::Bottom {
                    return Err(TypeError::NuBody { term: term() });
                }
                let a = context.vars.remove(x).unwrap_or_else(|| self.fresh());
                Ok(Typing { context, conclusion: Conclusion::Ty(Type::neg(a)) })
            }
            Term::NegApp(m, n) => {
                let t1 = self.run(m)?;
                let t2 = self.run(n)?;
                let (Conclusion::Ty(p1), Conclusion::Ty(p2)) = (&t1.conclusion, &t2.conclusion) else {
                    return Err(TypeError::NegAppOperand { term: term() });
                };
                let s1 = unify(p1, &Type::neg(p2.clone())).map_err(|cause| TypeError::NegApp { term: term(), cause })?;
                let s2 = unify_contexts(&s1.apply_context(&t1.context), &s1.apply_context(&t2.context))
                    .map_err(|cause| TypeError::Contexts { term: term(), cause })?;
                let s = s2.compose(&s1);
                Ok(Typing { context: Pt::union(&s, &t1.context, &t2.context), conclusion: Conclusion::Bottom })
            }
            Term::Mu(a, m) => {
                let Typing { mut context, conclusion } = self.run(m)?;
                if conclusion != Conclusion::Bottom {
                    return Err(TypeError::MuBody { term: term() });
                }
                let p = match context.names.remove(a) {
                    Some(Type::Neg(inner)) => *inner,
                    Some(other) => unreachable!("name '{a} recorded with non-negated type {other}"),
                    None => self.fresh(),
                };
                Ok(Typing { context, conclusion: Conclusion::Ty(p) })
            }
            Term::Naming(a, n) => {
                let Typing { context, conclusion } = self.run(n)?;
                let Conclusion::Ty(p) = conclusion else {
                    return Err(TypeError::NamingBody { term: term() });
                };
                let context = match context.names.get(a) {
                    Some(Type::Neg(recorded)) => {
                        let s = unify(recorded, &p).map_err(|cause| TypeError::Naming { term: term(), cause })?;
                        s.apply_context(&context)
                    }
                    Some(other) => unreachable!("name '{a} recorded with non-negated type {other}"),
                    None => context.with_name(*a, Type::neg(p)),
                };
                Ok(Typing { context, conclusion: Conclusion::Bottom })
            }
        }
    }
}

/// The principal typing of `t`, with type variables renumbered `p1, p2, ...`
/// left to right.
pub fn pt(t: &Term) -> Result<Typing, TypeError> {
    Ok(Pt { next: 0 }.run(t)?.canonical())
}

/// Why a term does not check against a judgement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckError {
    Untypeable(TypeError),
    /// A free variable or name of the term has no assumption.
    MissingAssumption(String),
    /// The principal typing is not general enough to reach the judgement.
    NotAnInstance { principal: String },
    /// The context gives a name a type that is not a negation.
    NameNotNegated(Ident),
}

impl fmt::Display for CheckError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckError::Untypeable(e) => write!(f, "untypeable: {e}"),
            CheckError::MissingAssumption(s) => write!(f, "no assumption for {s}"),
            CheckError::NotAnInstance { principal } => {
                write!(f, "the judgement is not an instance of the principal typing {principal}")
            }
            CheckError::NameNotNegated(a) => write!(f, "name '{a} must have a negated type"),
        }
    }
}

impl std::error::Error for CheckError {}

/// Finds `S` with `S Π ⊆ g` and `S P = expected`, where `⟨Π; P⟩` is a
/// typing. Only variables of the typing are instantiated.
pub fn instance_of(typing: &Typing, g: &TypingContext, expected: &Conclusion) -> Result<TypeSubstitution, CheckError> {
    let mut s = BTreeMap::new();
    let not_instance = || CheckError::NotAnInstance {
        principal: format!("{} ⊢ {}", typing.context, typing.conclusion),
    };
    for (x, a) in &typing.context.vars {
        let target = g.vars.get(x).ok_or_else(|| CheckError::MissingAssumption(x.to_string()))?;
        if !match_type(a, target, &mut s) {
            return Err(not_instance());
        }
    }
    for (n, a) in &typing.context.names {
        let target = g.names.get(n).ok_or_else(|| CheckError::MissingAssumption(format!("'{n}")))?;
        if !match_type(a, target, &mut s) {
            return Err(not_instance());
        }
    }
    match (&typing.conclusion, expected) {
        (Conclusion::Bottom, Conclusion::Bottom) => {}
        (Conclusion::Ty(p), Conclusion::Ty(a)) if match_type(p, a, &mut s) => {}
        _ => return Err(not_instance()),
    }
    Ok(s.into_iter().collect())
}

/// Decides `g ⊢ t : expected`: the principal typing of `t` must reach the
/// judgement by substitution and weakening.
pub fn check_detailed(g: &TypingContext, t: &Term, expected: &Conclusion) -> Result<(), CheckError> {
    if let Some((a, _)) = g.names.iter().find(|(_, ty)| !matches!(ty, Type::Neg(_))) {
        return Err(CheckError::NameNotNegated(*a));
    }
    let typing = pt(t).map_err(CheckError::Untypeable)?;
    instance_of(&typing, g, expected).map(|_| ())
}

pub fn check(g: &TypingContext, t: &Term, expected: &Conclusion) -> bool {
    check_detailed(g, t, expected).is_ok()
}

#[derive(Clone, Debug, Serialize)]
pub struct SrStep {
    pub rule: String,
    pub position: Vec<usize>,
    pub after: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SrViolation {
    /// Steps from the initial term to the term that failed to check.
    pub trace: Vec<SrStep>,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SrReport {
    pub term: String,
    pub judgement: String,
    pub steps_checked: usize,
    pub violation: Option<SrViolation>,
}

impl SrReport {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

fn sr_step(s: &ReductionStep) -> SrStep {
    SrStep { rule: s.rule.to_string(), position: s.position.clone(), after: s.after.to_string() }
}

/// Explores the reduction graph of `t` breadth first, following every redex,
/// and checks each contractum against `g ⊢ _ : expected`. Stops after
/// `max_steps` checked steps or at the first violation.
pub fn subject_reduction_check(g: &TypingContext, t: &Term, expected: &Conclusion, max_steps: usize) -> SrReport {
    let mut report = SrReport {
        term: t.to_string(),
        judgement: format!("{g} ⊢ {t} : {expected}"),
        steps_checked: 0,
        violation: None,
    };
    let mut seen = HashSet::from([canonical_key(t)]);
    let mut queue: VecDeque<(Term, Vec<SrStep>)> = VecDeque::from([(t.clone(), Vec::new())]);
    while let Some((u, path)) = queue.pop_front() {
        for step in enumerate_redexes(&u) {
            if report.steps_checked >= max_steps {
                return report;
            }
            report.steps_checked += 1;
            let mut trace = path.clone();
            trace.push(sr_step(&step));
            if let Err(e) = check_detailed(g, &step.after, expected) {
                report.violation = Some(SrViolation { trace, reason: e.to_string() });
                return report;
            }
            if seen.insert(canonical_key(&step.after)) {
                queue.push_back((step.after, trace));
            }
        }
    }
    report
}
