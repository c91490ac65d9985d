//! The 𝓛-calculus: λμ with first-class negation.
//!
//! Terms, the four substitutions, reduction and parallel reduction, principal
//! typing, the λμ and νλμ bridges, and a property-testing harness.

pub mod bridges;
pub mod fuzz;
pub mod ident;
pub mod infer;
pub mod parallel;
pub mod parse;
pub mod reduction;
pub mod subst;
pub mod syntax;
pub mod types;

pub use ident::{fresh, Ident};
pub use parse::{parse_conclusion, parse_context, parse_judgement, parse_term, parse_type, Dialect, ParseError};
pub use subst::{rename_name, subst_insert, subst_struct, subst_term};
pub use syntax::{alpha_eq, canonical_key, free_names, free_vars, print_term, Term};
pub use types::{Conclusion, TyVar, Type, TypeSubstitution, Typing, TypingContext};
