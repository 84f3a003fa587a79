//! Bounded search for closed terms denoting a given model element.
//!
//! The search is a semi-decision: a miss within the budget is reported as
//! `Unknown`, never as non-definability.

use serde::Serialize;

use crate::enumerator::{enumerate_normal_terms, EnumerationBudget};
use crate::error::{Error, Result};
use crate::kernel::{Context, Term, Type};
use crate::rewrite::length_of;
use crate::semantics::{interpret_closed, settle, Element, Evaluator, Model};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SearchOutcome {
    Definable {
        witness: Term,
    },
    /// Every closed term up to this length was tried.
    Unknown {
        exhausted_length: usize,
    },
}

impl SearchOutcome {
    pub fn witness(&self) -> Option<&Term> {
        match self {
            SearchOutcome::Definable { witness } => Some(witness),
            SearchOutcome::Unknown { .. } => None,
        }
    }
}

/// Closed eta-long normal terms of `ty` in enumeration order, up to the
/// longest length that fits the count budget, together with that length.
pub(crate) fn closed_terms_within(ty: &Type, budget: &EnumerationBudget) -> (Vec<Term>, usize) {
    let ctx = Context::new();
    let mut best = Vec::new();
    let mut reached = 0;
    for len in 1..=budget.max_length() {
        let Ok(b) = EnumerationBudget::new(len, budget.max_count()) else {
            break;
        };
        match enumerate_normal_terms(&ctx, ty, &b) {
            Ok(terms) => {
                best = terms;
                reached = len;
            }
            Err(_) => break,
        }
    }
    (best.into_iter().map(|t| t.into_term()).collect(), reached)
}

/// First closed term of `ty`, by length and then canonical order, whose
/// value equals `f`.
pub fn is_definable(
    model: &Model,
    ty: &Type,
    f: &Element,
    budget: &EnumerationBudget,
) -> Result<SearchOutcome> {
    if f.ty() != ty {
        return Err(Error::TypeMismatch {
            expected: ty.clone(),
            found: f.ty().clone(),
        });
    }
    let ev = Evaluator::new(model);
    let target = ev.decode_big(f.code(), ty)?;
    let (candidates, reached) = closed_terms_within(ty, budget);
    for t in candidates {
        let v = settle(ev.eval(&t))?;
        if settle(ev.equal(&v, &target, ty))? {
            let check = interpret_closed(model, &t)?;
            assert_eq!(&check, f, "witness {t} does not denote the queried element");
            return Ok(SearchOutcome::Definable { witness: t });
        }
    }
    Ok(SearchOutcome::Unknown {
        exhausted_length: reached,
    })
}

/// Every element denoted by a closed term within the budget, each with its
/// first witness, in enumeration order of the witnesses.
pub fn definable_elements(
    model: &Model,
    ty: &Type,
    budget: &EnumerationBudget,
) -> Result<Vec<(Element, Term)>> {
    let terms = enumerate_normal_terms(&Context::new(), ty, budget)?;
    let mut out: Vec<(Element, Term)> = Vec::new();
    for t in terms {
        let e = interpret_closed(model, t.term())?;
        if !out.iter().any(|(seen, _)| *seen == e) {
            out.push((e, t.into_term()));
        }
    }
    debug_assert!(out
        .windows(2)
        .all(|w| length_of(&w[0].1) <= length_of(&w[1].1)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;
    use num_bigint::BigUint;

    fn unary(model: &Model, entries: [u32; 2]) -> Element {
        let es: Vec<Element> = entries
            .iter()
            .map(|&v| Element::base(model, v).unwrap())
            .collect();
        Element::from_table(model, &Type::first_order(1), &es).unwrap()
    }

    #[test]
    fn identity_is_the_only_definable_unary_function() {
        let m = Model::new(2).unwrap();
        let b = EnumerationBudget::with_length(6);
        let ty = Type::first_order(1);
        let id = is_definable(&m, &ty, &unary(&m, [0, 1]), &b).unwrap();
        assert_eq!(id.witness(), Some(&parse_term("\\x:i. x").unwrap()));
        for entries in [[0, 0], [1, 1], [1, 0]] {
            let out = is_definable(&m, &ty, &unary(&m, entries), &b).unwrap();
            assert_eq!(
                out,
                SearchOutcome::Unknown {
                    exhausted_length: 6
                }
            );
        }
    }

    #[test]
    fn singleton_model() {
        let m = Model::new(1).unwrap();
        let ty = Type::numeral();
        let e = Element::new(&m, ty.clone(), BigUint::from(0u32)).unwrap();
        let out = is_definable(&m, &ty, &e, &EnumerationBudget::with_length(3)).unwrap();
        assert_eq!(out.witness(), Some(&Term::church(0)));
    }

    #[test]
    fn element_census() {
        let m = Model::new(2).unwrap();
        let b = EnumerationBudget::with_length(5);
        let got = definable_elements(&m, &Type::first_order(1), &b).unwrap();
        assert_eq!(got.len(), 1);
        assert!(definable_elements(&m, &Type::Base, &b).unwrap().is_empty());
        let got = definable_elements(&m, &Type::numeral(), &b).unwrap();
        let witnesses: Vec<Term> = got.into_iter().map(|(_, t)| t).collect();
        assert_eq!(
            witnesses,
            vec![Term::church(0), Term::church(1), Term::church(2)]
        );
    }

    #[test]
    fn type_mismatch() {
        let m = Model::new(2).unwrap();
        let e = Element::base(&m, 0).unwrap();
        assert!(is_definable(
            &m,
            &Type::first_order(1),
            &e,
            &EnumerationBudget::with_length(2)
        )
        .is_err());
    }
}
