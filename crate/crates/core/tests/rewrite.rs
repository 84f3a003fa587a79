mod common;

use common::term;
use fincomp::random::Sampler;
use fincomp::rewrite::{
    beta_step, eta_contract, is_beta_normal, is_eta_long, normalize_by, Strategy,
};
use fincomp::{
    beta_eta_eq, eta_long, infer_type, normal_eta_long, normalize, term_length, Context, Term, Type,
};

const STEPS: usize = 1_000_000;

// length straight from the definition: one more than the longest argument
fn length_oracle(t: &Term) -> usize {
    let (_, body) = t.strip_lams();
    let (_, args) = body.spine();
    1 + args.iter().map(|a| length_oracle(a)).max().unwrap_or(0)
}

#[test]
fn reduction_preserves_types() {
    let mut s = Sampler::new(10);
    for _ in 0..1000 {
        let (ctx, t, ty) = s.sample_typed();
        let nf = normalize(&ctx, &t).unwrap();
        assert_eq!(infer_type(&ctx, nf.term()).unwrap(), ty, "{t}");
        if let Some(next) = beta_step(&t, Strategy::LeftmostOutermost) {
            assert_eq!(infer_type(&ctx, &next).unwrap(), ty, "{t}");
        }
    }
}

#[test]
fn normalization_is_idempotent() {
    let mut s = Sampler::new(11);
    for _ in 0..1000 {
        let (ctx, t, ty) = s.sample_typed();
        let nf = normalize(&ctx, &t).unwrap();
        assert!(is_beta_normal(nf.term()));
        assert_eq!(normalize(&ctx, nf.term()).unwrap(), nf);
        let long = eta_long(&ctx, nf.term(), &ty).unwrap();
        assert!(is_eta_long(&ctx, long.term(), &ty));
        assert_eq!(eta_long(&ctx, long.term(), &ty).unwrap(), long);
        assert!(beta_eta_eq(&ctx, &t, long.term()).unwrap());
        assert_eq!(eta_contract(long.term()), *nf.term());
    }
}

#[test]
fn strategies_agree() {
    let mut s = Sampler::new(12);
    for _ in 0..1000 {
        let (ctx, t, _) = s.sample_typed();
        let lo = normalize_by(&t, Strategy::LeftmostOutermost, STEPS).unwrap();
        let ri = normalize_by(&t, Strategy::RightmostInnermost, STEPS).unwrap();
        assert!(is_beta_normal(&lo));
        assert_eq!(lo, ri, "{t}");
        assert_eq!(eta_contract(&lo), *normalize(&ctx, &t).unwrap().term());
    }
}

#[test]
fn lengths() {
    for n in 0..12 {
        let long = normal_eta_long(&Context::new(), &Term::church(n)).unwrap();
        assert_eq!(term_length(&long), n + 1);
    }
    let mut s = Sampler::new(13);
    for _ in 0..500 {
        let (ctx, t, _) = s.sample_typed();
        let long = normal_eta_long(&ctx, &t).unwrap();
        assert_eq!(term_length(&long), length_oracle(long.term()), "{long:?}");
    }
    let k = term("\\x:i. \\y:i. x");
    assert_eq!(
        term_length(&eta_long(&Context::new(), &k, &Type::first_order(2)).unwrap()),
        1
    );
}

#[test]
fn eta_long_requires_normal_input() {
    let redex = term("(\\x:i -> i. x) (\\y:i. y)");
    assert!(eta_long(&Context::new(), &redex, &Type::first_order(1)).is_err());
}
