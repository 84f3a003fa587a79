//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits nonzero if any fails.

mod common;

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use common::{
    check_problem_closure, check_solution_closure, completeness_fixtures, match_fixtures, term,
    verifies,
};
use fincomp::definability::{is_definable, SearchOutcome};
use fincomp::matching::{match_bruteforce, match_semantic, MatchVerdict};
use fincomp::random::Sampler;
use fincomp::rewrite::normalize_by;
use fincomp::semantics::interpret_closed;
use fincomp::statman::{
    build_finite_model, build_model_order3, length_separator, pair_separator, reserved_context,
};
use fincomp::{
    beta_eta_eq, enumerate_normal_terms, infer_type, models_eq, normal_eta_long, normalize,
    parse_term, parse_type, print_term, term_length, Context, Element, EnumerationBudget, Error,
    Model, Term, Type,
};
use num_bigint::BigUint;
use rand::Rng;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn budget(len: usize) -> EnumerationBudget {
    EnumerationBudget::with_length(len)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

/// Every comparison of criterion 1: the subject, its type, and each short
/// closed term of that type.
fn comparisons() -> Result<Vec<(Term, Type, Vec<Term>)>, String> {
    let mut out = Vec::new();
    for (t, ty) in completeness_fixtures() {
        let len = term_length(&normal_eta_long(&Context::new(), &t).map_err(err)?);
        let us = enumerate_normal_terms(&Context::new(), &ty, &budget(len + 3)).map_err(err)?;
        out.push((t, ty, us.into_iter().map(|u| u.into_term()).collect()));
    }
    Ok(out)
}

fn finite_completeness() -> Outcome {
    let mut total = 0;
    for (t, ty, us) in comparisons()? {
        let fm = build_finite_model(&t, &ty, &budget(8)).map_err(err)?;
        for u in &us {
            let truth = beta_eta_eq(&Context::new(), &t, u).map_err(err)?;
            let decided = fm.decide_eq(u).map_err(err)?;
            ensure(decided == truth, || {
                format!("{t} vs {u}: decided {decided}, truth {truth}")
            })?;
            total += 1;
        }
    }
    ensure(total > 0, || "no comparisons".into())
}

// distinct base subterms of t applied to fresh variables
fn base_subterm_count(t: &Term, ty: &Type) -> usize {
    fn walk(t: &Term, ctx: &Context, out: &mut HashSet<Term>) {
        if let Term::App(f, a) = t {
            walk(f, ctx, out);
            walk(a, ctx, out);
        }
        if t.is_locally_closed() && infer_type(ctx, t).ok() == Some(Type::Base) {
            out.insert(t.clone());
        }
    }
    let names: Vec<String> = (0..ty.arity()).map(|k| format!("v{k}")).collect();
    let ctx = Context::from_pairs(names.iter().map(String::as_str).zip(ty.decompose())).unwrap();
    let nf = normalize(
        &ctx,
        &Term::apps(t.clone(), names.iter().map(|n| Term::var(n))),
    )
    .unwrap();
    let mut out = HashSet::new();
    walk(nf.term(), &ctx, &mut out);
    out.len()
}

fn model_cardinality() -> Outcome {
    for (t, ty, want) in [
        (term("\\x:i. x"), Type::first_order(1), 2),
        (Term::church(2), Type::numeral(), 4),
    ] {
        let k = base_subterm_count(&t, &ty);
        ensure(1 + k == want, || format!("{t}: walk finds {k} subterms"))?;
        let fm = build_finite_model(&t, &ty, &budget(8)).map_err(err)?;
        let om = build_model_order3(&t, &ty, &budget(8)).map_err(err)?;
        for size in [fm.model().base_size(), om.model().base_size()] {
            ensure(size as usize == want, || {
                format!("{t}: base size {size}, expected {want}")
            })?;
        }
    }
    Ok(())
}

fn finite_incompleteness() -> Outcome {
    let m2 = Model::new(2).map_err(err)?;
    let (one, three) = (Term::church(1), Term::church(3));
    let empty = Context::new();
    ensure(models_eq(&m2, &empty, &one, &three).map_err(err)?, || {
        "1 and 3 differ in M2".into()
    })?;
    ensure(!beta_eta_eq(&empty, &one, &three).map_err(err)?, || {
        "1 and 3 are beta-eta equal".into()
    })?;
    let fm = build_finite_model(&one, &Type::numeral(), &budget(8)).map_err(err)?;
    ensure(!fm.decide_eq(&three).map_err(err)?, || {
        "the model of 1 identifies 3".into()
    })
}

fn soundness_sampling() -> Outcome {
    let mut s = Sampler::new(4);
    let mut checked = 0;
    while checked < 500 {
        let (ctx, t, _) = s.sample_typed();
        let u = match s.rng().random_range(0..3) {
            0 => normalize(&ctx, &t).map_err(err)?.into_term(),
            1 => normal_eta_long(&ctx, &t).map_err(err)?.into_term(),
            _ => normalize_by(
                &t,
                fincomp::rewrite::Strategy::RightmostInnermost,
                1_000_000,
            )
            .map_err(err)?,
        };
        let m = s.rng().random_range(1..=3);
        let model = Model::with_cap(m, 4096).map_err(err)?;
        match models_eq(&model, &ctx, &t, &u) {
            Ok(true) => checked += 1,
            Ok(false) => return Err(format!("{t} and {u} differ at m = {m}")),
            Err(Error::ModelTooLarge { .. }) => {}
            Err(e) => return Err(err(e)),
        }
    }
    Ok(())
}

fn separator_correctness() -> Outcome {
    for (ty, len) in [("i -> i -> i", 2), ("i -> (i -> i) -> i", 5)] {
        let ty = parse_type(ty).map_err(err)?;
        let terms = enumerate_normal_terms(&Context::new(), &ty, &budget(len)).map_err(err)?;
        ensure(terms.len() >= 2, || format!("too few terms at {ty}"))?;
        for t in &terms {
            for u in &terms {
                if t == u {
                    continue;
                }
                let w = pair_separator(t, u).map_err(err)?;
                let ctx = reserved_context([&w]).map_err(err)?;
                let wt = Term::app(w.clone(), t.term().clone());
                let wu = Term::app(w.clone(), u.term().clone());
                ensure(!beta_eta_eq(&ctx, &wt, &wu).map_err(err)?, || {
                    format!("{w} does not separate {t:?} and {u:?}")
                })?;
            }
            let w = length_separator(&ty);
            let ctx = reserved_context([&w]).map_err(err)?;
            let out = normal_eta_long(&ctx, &Term::app(w, t.term().clone())).map_err(err)?;
            ensure(term_length(&out) == term_length(t), || {
                format!("length of {t:?} changes")
            })?;
        }
    }
    Ok(())
}

fn order3_agreement() -> Outcome {
    for (t, ty, us) in comparisons()? {
        if ty.order() > 3 {
            continue;
        }
        let fm = build_finite_model(&t, &ty, &budget(8)).map_err(err)?;
        let om = build_model_order3(&t, &ty, &budget(8)).map_err(err)?;
        for u in &us {
            let (a, b) = (fm.decide_eq(u).map_err(err)?, om.decide_eq(u).map_err(err)?);
            ensure(a == b, || {
                format!("{t} vs {u}: general {a}, order three {b}")
            })?;
        }
    }
    Ok(())
}

fn definability_census() -> Outcome {
    let m = Model::new(2).map_err(err)?;
    let ty = Type::first_order(1);
    let mut definable = Vec::new();
    for code in 0..4u32 {
        let e = Element::new(&m, ty.clone(), BigUint::from(code)).map_err(err)?;
        if let SearchOutcome::Definable { witness } =
            is_definable(&m, &ty, &e, &budget(6)).map_err(err)?
        {
            ensure(interpret_closed(&m, &witness).map_err(err)? == e, || {
                format!("{witness} misses {e}")
            })?;
            definable.push(witness);
        }
    }
    ensure(definable == vec![term("\\x:i. x")], || {
        format!("definable: {definable:?}")
    })
}

fn matching_vs_oracle() -> Outcome {
    let fixtures = match_fixtures();
    ensure(fixtures.len() >= 10, || "too few fixtures".into())?;
    ensure(fixtures.iter().filter(|f| !f.solvable).count() >= 2, || {
        "too few unsolvable".into()
    })?;
    for fx in &fixtures {
        let brute = match_bruteforce(&fx.problem, &budget(6)).map_err(err)?;
        let sem = match_semantic(&fx.problem, &budget(6)).map_err(err)?;
        ensure(brute.is_solved() == sem.is_solved(), || {
            format!("{}: oracle {brute:?}, pipeline {sem:?}", fx.name)
        })?;
        ensure(sem.is_solved() == fx.solvable, || {
            format!("{}: {sem:?}", fx.name)
        })?;
        for v in [&brute, &sem] {
            if let Some(ts) = v.solution() {
                ensure(verifies(&fx.problem, ts), || {
                    format!("{}: {ts:?} fails", fx.name)
                })?;
            }
        }
        if fx.name == "successor" {
            ensure(sem.solution() == Some(&[Term::church(2)][..]), || {
                format!("successor: {sem:?}")
            })?;
        }
        if fx.name == "constant zero" {
            ensure(
                sem == MatchVerdict::NoSolutionWithin {
                    bound: 6,
                    exhaustive: true,
                },
                || format!("constant zero: {sem:?}"),
            )?;
        }
    }
    Ok(())
}

fn reduction_round_trips() -> Outcome {
    for fx in match_fixtures() {
        check_problem_closure(&fx.problem, &budget(6)).map_err(|e| format!("{}: {e}", fx.name))?;
        if fx.problem.is_closed() {
            check_solution_closure(&fx.problem, &budget(6))
                .map_err(|e| format!("{}: {e}", fx.name))?;
        }
    }
    Ok(())
}

fn hygiene() -> Outcome {
    let mut s = Sampler::new(10);
    for _ in 0..1000 {
        let (ctx, t, ty) = s.sample_typed();
        let nf = normalize(&ctx, &t).map_err(err)?;
        let nty = infer_type(&ctx, nf.term()).map_err(err)?;
        ensure(nty == ty, || format!("{t}: {ty} becomes {nty}"))?;
        ensure(normalize(&ctx, nf.term()).map_err(err)? == nf, || {
            format!("{t}: normal form moves")
        })?;
        let printed = print_term(&t);
        ensure(parse_term(&printed).map_err(err)? == t, || {
            format!("{printed} does not read back")
        })?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("finite completeness", finite_completeness),
        ("model cardinality", model_cardinality),
        ("finite-model incompleteness", finite_incompleteness),
        ("soundness sampling", soundness_sampling),
        ("separator correctness", separator_correctness),
        ("order-3 agreement", order3_agreement),
        ("definability census", definability_census),
        ("matching pipeline vs oracle", matching_vs_oracle),
        ("reduction round-trips", reduction_round_trips),
        ("kernel/rewrite hygiene", hygiene),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("[PASS] {}. {name} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {}. {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
