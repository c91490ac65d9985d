//! Python bindings: terms, types, reduction, principal typing, the bridges
//! and the property suites.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use lcalc::bridges::lmu::{embed_lmu, parse_lmu, type_lmu};
use lcalc::bridges::nlm::{parse_nlm, translate_checked};
use lcalc::fuzz::{run_suite, GenConfig, Suite};
use lcalc::infer::{check_detailed, unify as unify_types};
use lcalc::parallel::{check_diamond, DEFAULT_CAP};
use lcalc::reduction::{enumerate_steps, normalize_with, RuleSet, Strategy, DEFAULT_FUEL};
use lcalc::{parse_conclusion, parse_context, Ident};

create_exception!(lcalc, ParseError, PyValueError);
create_exception!(lcalc, TypeError, PyException);

fn parse_err(e: lcalc::ParseError) -> PyErr {
    ParseError::new_err(e.to_string())
}

fn dialect(name: &str) -> PyResult<lcalc::Dialect> {
    name.parse().map_err(|e: String| PyValueError::new_err(e))
}

/// A term of the calculus. Equality is α-equivalence.
#[pyclass(frozen, module = "lcalc")]
struct Term {
    inner: lcalc::Term,
}

#[pymethods]
impl Term {
    /// Parses `text`; λμ terms (`dialect="lmu"`) are embedded.
    #[new]
    #[pyo3(signature = (text, dialect = "l"))]
    fn new(text: &str, dialect: &str) -> PyResult<Term> {
        let inner = match self::dialect(dialect)? {
            lcalc::Dialect::L => lcalc::parse_term(text).map_err(parse_err)?,
            lcalc::Dialect::Lmu => embed_lmu(&parse_lmu(text).map_err(parse_err)?),
            lcalc::Dialect::Nlm => return Err(PyValueError::new_err("use translate() for nlm terms")),
        };
        Ok(Term { inner })
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Term({:?})", self.inner.to_string())
    }

    fn __eq__(&self, other: &Term) -> bool {
        lcalc::alpha_eq(&self.inner, &other.inner)
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        lcalc::canonical_key(&self.inner).hash(&mut h);
        h.finish()
    }

    #[getter]
    fn size(&self) -> usize {
        self.inner.size()
    }

    fn free_vars(&self) -> Vec<String> {
        lcalc::free_vars(&self.inner).iter().map(Ident::to_string).collect()
    }

    fn free_names(&self) -> Vec<String> {
        lcalc::free_names(&self.inner).iter().map(Ident::to_string).collect()
    }

    fn is_closed(&self) -> bool {
        self.inner.is_closed()
    }

    /// One-step reducts as `(rule, position, term)`.
    #[pyo3(signature = (theta = true))]
    fn steps(&self, theta: bool) -> Vec<(String, Vec<usize>, Term)> {
        let rules = if theta { RuleSet::ALL } else { RuleSet::NO_THETA };
        enumerate_steps(&self.inner, rules)
            .into_iter()
            .map(|s| (s.rule.to_string(), s.position, Term { inner: s.after }))
            .collect()
    }

    /// `M[N/x]`
    fn subst(&self, n: &Term, x: &str) -> Term {
        Term { inner: lcalc::subst_term(&self.inner, &n.inner, Ident::new(x)) }
    }

    /// `M[N·γ/α]`
    fn subst_struct(&self, n: &Term, alpha: &str, gamma: &str) -> Term {
        Term { inner: lcalc::subst_struct(&self.inner, &n.inner, Ident::new(alpha), Ident::new(gamma)) }
    }

    /// `M[N/α]`
    fn insert(&self, n: &Term, alpha: &str) -> Term {
        Term { inner: lcalc::subst_insert(&self.inner, &n.inner, Ident::new(alpha)) }
    }

    /// `M[β/α]`
    fn rename(&self, beta: &str, alpha: &str) -> Term {
        Term { inner: lcalc::rename_name(&self.inner, Ident::new(beta), Ident::new(alpha)) }
    }
}

/// A principal typing.
#[pyclass(frozen, module = "lcalc")]
struct Typing {
    inner: lcalc::Typing,
    term: lcalc::Term,
}

#[pymethods]
impl Typing {
    #[getter]
    fn context(&self) -> Vec<(String, String)> {
        let vars = self.inner.context.vars.iter().map(|(x, t)| (x.to_string(), t.to_string()));
        let names = self.inner.context.names.iter().map(|(a, t)| (format!("'{a}"), t.to_string()));
        vars.chain(names).collect()
    }

    #[getter]
    fn conclusion(&self) -> String {
        self.inner.conclusion.to_string()
    }

    fn __str__(&self) -> String {
        self.inner.judgement(&self.term)
    }

    fn __repr__(&self) -> String {
        format!("Typing({:?})", self.__str__())
    }
}

/// The principal typing of `term`; raises `TypeError` if there is none.
#[pyfunction]
fn pt(term: &Term) -> PyResult<Typing> {
    lcalc::infer::pt(&term.inner)
        .map(|inner| Typing { inner, term: term.inner.clone() })
        .map_err(|e| TypeError::new_err(e.to_string()))
}

/// Whether `context ⊢ term : ty` holds. `ty` may be `#`.
#[pyfunction]
#[pyo3(signature = (term, ty, context = ""))]
fn check(term: &Term, ty: &str, context: &str) -> PyResult<bool> {
    let g = parse_context(context).map_err(parse_err)?;
    let c = parse_conclusion(ty).map_err(parse_err)?;
    Ok(check_detailed(&g, &term.inner, &c).is_ok())
}

fn strategy(name: &str, seed: u64) -> PyResult<Strategy> {
    match name {
        "lo" => Ok(Strategy::LeftmostOutermost),
        "ri" => Ok(Strategy::RightmostInnermost),
        "random" => Ok(Strategy::Random(seed)),
        _ => Err(PyValueError::new_err(format!("unknown strategy `{name}`"))),
    }
}

/// Normal form of `term`. Raises `RuntimeError` when the fuel runs out.
#[pyfunction]
#[pyo3(signature = (term, strategy = "lo", seed = 0, fuel = DEFAULT_FUEL, theta = true))]
fn reduce(term: &Term, strategy: &str, seed: u64, fuel: usize, theta: bool) -> PyResult<Term> {
    let rules = if theta { RuleSet::ALL } else { RuleSet::NO_THETA };
    let tr = normalize_with(&term.inner, self::strategy(strategy, seed)?, fuel, rules);
    if tr.fuel_exhausted {
        return Err(pyo3::exceptions::PyRuntimeError::new_err(format!("fuel {fuel} exhausted")));
    }
    Ok(Term { inner: tr.final_term })
}

/// The reduction trace as JSON text.
#[pyfunction]
#[pyo3(signature = (term, strategy = "lo", seed = 0, fuel = DEFAULT_FUEL, theta = true))]
fn trace(term: &Term, strategy: &str, seed: u64, fuel: usize, theta: bool) -> PyResult<String> {
    let rules = if theta { RuleSet::ALL } else { RuleSet::NO_THETA };
    Ok(normalize_with(&term.inner, self::strategy(strategy, seed)?, fuel, rules).to_json().to_string())
}

/// Whether every pair of parallel reducts of `term` joins in one more step.
#[pyfunction]
fn diamond(term: &Term) -> PyResult<bool> {
    check_diamond(&term.inner, DEFAULT_CAP)
        .map(|r| r.holds())
        .map_err(|e| pyo3::exceptions::PyRuntimeError::new_err(e.to_string()))
}

/// Most general unifier of two types, as `{variable: type}`; `None` if the
/// types do not unify.
#[pyfunction]
fn unify(a: &str, b: &str) -> PyResult<Option<Vec<(String, String)>>> {
    let a = lcalc::parse_type(a).map_err(parse_err)?;
    let b = lcalc::parse_type(b).map_err(parse_err)?;
    Ok(unify_types(&a, &b).ok().map(|s| s.bindings().map(|(v, t)| (v.to_string(), t.to_string())).collect()))
}

/// The principal λμ judgement `Γ ⊢ M : A | Δ`.
#[pyfunction]
fn infer_lmu(text: &str) -> PyResult<String> {
    let t = parse_lmu(text).map_err(parse_err)?;
    type_lmu(&t).map(|j| j.to_string()).map_err(|e| TypeError::new_err(e.to_string()))
}

/// Translates a νλμ term; returns `(context, term, conclusion)`.
#[pyfunction]
fn translate(text: &str) -> PyResult<(String, Term, String)> {
    let t = parse_nlm(text).map_err(parse_err)?;
    let (g, m, c) = translate_checked(&t).map_err(|e| TypeError::new_err(e.to_string()))?;
    Ok((g.to_string(), Term { inner: m }, c.to_string()))
}

/// Runs a property suite and returns its report as JSON text.
#[pyfunction]
#[pyo3(signature = (suite, seed = 0, n = 100, max_size = 30))]
fn run(py: Python<'_>, suite: &str, seed: u64, n: usize, max_size: usize) -> PyResult<String> {
    let suite: Suite = suite.parse().map_err(|e: lcalc::fuzz::UnknownSuite| PyValueError::new_err(e.to_string()))?;
    let cfg = GenConfig::new(seed, n, max_size);
    let report = py.detach(|| run_suite(suite, &cfg));
    Ok(report.to_json().to_string())
}

#[pymodule]
#[pyo3(name = "lcalc")]
fn lcalc_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Term>()?;
    m.add_class::<Typing>()?;
    m.add("ParseError", m.py().get_type::<ParseError>())?;
    m.add("TypeError", m.py().get_type::<TypeError>())?;
    m.add_function(wrap_pyfunction!(pt, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(reduce, m)?)?;
    m.add_function(wrap_pyfunction!(trace, m)?)?;
    m.add_function(wrap_pyfunction!(diamond, m)?)?;
    m.add_function(wrap_pyfunction!(unify, m)?)?;
    m.add_function(wrap_pyfunction!(infer_lmu, m)?)?;
    m.add_function(wrap_pyfunction!(translate, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}
