//! Simply typed lambda calculus over one base type, finite standard models,
//! and the per-term finite models that decide beta-eta equality.
//!
//! ```
//! use fincomp::{parse_term, statman::build_finite_model, EnumerationBudget, Term, Type};
//!
//! let two = Term::church(2);
//! let bundle = build_finite_model(&two, &Type::numeral(), &EnumerationBudget::with_length(8)).unwrap();
//! assert_eq!(bundle.model().base_size(), 4);
//! assert!(bundle.decide_eq(&parse_term("\\x:i. \\f:i->i. f ((\\y:i. f y) x)").unwrap()).unwrap());
//! assert!(!bundle.decide_eq(&Term::church(3)).unwrap());
//! ```

pub mod definability;
pub mod enumerator;
pub mod error;
pub mod kernel;
pub mod matching;
pub mod random;
pub mod rewrite;
pub mod semantics;
pub mod statman;
pub mod syntax;

pub use enumerator::{
    enumerate_normal_terms, enumerate_same_length, iota_subterms, EnumerationBudget,
};
pub use error::{Error, Result};
pub use kernel::{check_type, infer_type, Context, Name, Term, Type};
pub use rewrite::{
    beta_eta_eq, eta_long, normal_eta_long, normalize, term_length, EtaLongForm, NormalForm,
};
pub use semantics::{interpret, models_eq, Assignment, Element, Model};
pub use syntax::{parse_context, parse_term, parse_type, print_term};
