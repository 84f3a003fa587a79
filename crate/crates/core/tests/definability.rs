mod common;

use std::collections::HashSet;

use fincomp::definability::{definable_elements, is_definable, SearchOutcome};
use fincomp::semantics::interpret_closed;
use fincomp::{beta_eta_eq, parse_type, Context, Element, EnumerationBudget, Model, Type};
use num_bigint::BigUint;
use proptest::prelude::*;

fn budget(len: usize) -> EnumerationBudget {
    EnumerationBudget::with_length(len)
}

#[test]
fn only_the_identity_is_definable_on_two_points() {
    let m = Model::new(2).unwrap();
    let ty = Type::first_order(1);
    let mut found = Vec::new();
    for code in 0..4u32 {
        let e = Element::new(&m, ty.clone(), BigUint::from(code)).unwrap();
        if let SearchOutcome::Definable { witness } = is_definable(&m, &ty, &e, &budget(6)).unwrap()
        {
            assert_eq!(interpret_closed(&m, &witness).unwrap(), e);
            found.push(e);
        }
    }
    assert_eq!(found.len(), 1);
    let table: Vec<u64> = found[0]
        .table(&m)
        .unwrap()
        .iter()
        .map(|e| e.small_code().unwrap())
        .collect();
    assert_eq!(table, vec![0, 1]);
}

// the n-th iterate of every base function at every point, as a signature of n
fn iterate_signature(n: usize) -> Vec<u32> {
    let mut sig = Vec::new();
    for x in 0..2u32 {
        for f in [[0, 0], [1, 0], [0, 1], [1, 1]] {
            let mut v = x;
            for _ in 0..n {
                v = f[v as usize];
            }
            sig.push(v);
        }
    }
    sig
}

#[test]
fn numerals_on_two_points() {
    let m = Model::new(2).unwrap();
    let got = definable_elements(&m, &Type::numeral(), &budget(5)).unwrap();
    let distinct: HashSet<Vec<u32>> = (0..5).map(iterate_signature).collect();
    assert_eq!(got.len(), distinct.len());
    assert!(got.len() < 5);
    for (e, w) in &got {
        assert_eq!(&interpret_closed(&m, w).unwrap(), e);
    }
}

#[test]
fn witnesses_are_distinct_terms_for_distinct_elements() {
    for (m, ty) in [
        (2, "i -> i -> i"),
        (2, "(i -> i) -> i -> i"),
        (3, "i -> (i -> i) -> i"),
    ] {
        let m = Model::new(m).unwrap();
        let ty = parse_type(ty).unwrap();
        let got = definable_elements(&m, &ty, &budget(4)).unwrap();
        let elements: HashSet<&Element> = got.iter().map(|(e, _)| e).collect();
        assert_eq!(elements.len(), got.len());
        for (i, (_, a)) in got.iter().enumerate() {
            for (_, b) in &got[i + 1..] {
                assert!(!beta_eta_eq(&Context::new(), a, b).unwrap());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn larger_budgets_keep_witnesses(
        ty in prop::sample::select(vec!["i -> i", "i -> i -> i", "i -> (i -> i) -> i", "(i -> i) -> i -> i"]),
        m in 1u32..=2,
        code in 0u64..4096,
        short in 1usize..=3,
        extra in 0usize..=2,
    ) {
        let m = Model::new(m).unwrap();
        let ty = parse_type(ty).unwrap();
        let size = m.space_size(&ty).unwrap();
        let e = Element::new(&m, ty.clone(), BigUint::from(code % size)).unwrap();
        let small = is_definable(&m, &ty, &e, &budget(short)).unwrap();
        let large = is_definable(&m, &ty, &e, &budget(short + extra)).unwrap();
        if let Some(w) = small.witness() {
            prop_assert_eq!(large.witness(), Some(w));
        }
    }
}
