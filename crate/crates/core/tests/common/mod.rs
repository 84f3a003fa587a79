#![allow(dead_code)]

use fincomp::matching::{close_problem, close_solutions, match_bruteforce, MatchingProblem};
use fincomp::{beta_eta_eq, parse_context, parse_term, Context, EnumerationBudget, Term, Type};

pub fn term(s: &str) -> Term {
    parse_term(s).unwrap()
}

pub fn ctx(s: &str) -> Context {
    parse_context(s).unwrap()
}

pub const NUM: &str = "i -> (i -> i) -> i";

/// Closed terms whose finite models are checked against every short term of
/// their type.
pub fn completeness_fixtures() -> Vec<(Term, Type)> {
    let mut out = vec![
        (term("\\x:i. x"), Type::first_order(1)),
        (term("\\x:i. \\y:i. x"), Type::first_order(2)),
        (term("\\x:i. \\y:i. y"), Type::first_order(2)),
    ];
    for n in 0..=4 {
        out.push((Term::church(n), Type::numeral()));
    }
    out.push((
        term("\\f:i -> i. \\x:i. f x"),
        Type::arrow(Type::first_order(1), Type::first_order(1)),
    ));
    out
}

pub struct MatchFixture {
    pub name: &'static str,
    pub problem: MatchingProblem,
    pub solvable: bool,
}

fn fixture(name: &'static str, a: &str, b: &str, context: &str, solvable: bool) -> MatchFixture {
    MatchFixture {
        name,
        problem: MatchingProblem::new(term(a), term(b), ctx(context)).unwrap(),
        solvable,
    }
}

/// Matching problems with known solvability, worked out by hand.
pub fn match_fixtures() -> Vec<MatchFixture> {
    let succ = format!("\\m:{NUM}. \\x:i. \\f:i -> i. f (m x f)");
    let zero = format!("\\m:{NUM}. \\x:i. \\f:i -> i. x");
    let plus = format!("\\m:{NUM}. \\n:{NUM}. \\x:i. \\f:i -> i. m (n x f) f");
    let double = format!("\\m:{NUM}. \\x:i. \\f:i -> i. m (m x f) f");
    vec![
        fixture("successor", &succ, "#3", "", true),
        // m is ignored, so only #0 is reachable
        fixture("constant zero", &zero, "#1", "", false),
        fixture("identity", "\\y:i -> i. y", "\\x:i. x", "", true),
        fixture(
            "no unknowns, equal",
            "#2",
            "\\x:i. \\f:i -> i. f ((\\y:i. f y) x)",
            "",
            true,
        ),
        fixture("no unknowns, distinct", "#2", "#3", "", false),
        fixture("addition", &plus, "#2", "", true),
        // doubling only reaches even numerals
        fixture("double to three", &double, "#3", "", false),
        fixture("double to four", &double, "#4", "", true),
        fixture(
            "diagonal",
            "\\y:i -> i -> i. \\x:i. y x x",
            "\\x:i. x",
            "",
            true,
        ),
        fixture(
            "swap",
            "\\y:i -> i -> i. \\x:i. \\w:i. y w x",
            "\\x:i. \\w:i. x",
            "",
            true,
        ),
        fixture(
            "twice identity",
            "\\y:i -> i. \\x:i. y (y x)",
            "\\x:i. x",
            "",
            true,
        ),
        fixture(
            "open successor",
            "\\y:i. f y",
            "f (f c)",
            "f:i -> i, c:i",
            true,
        ),
        fixture(
            "open application",
            "\\y:i -> i. y c",
            "f c",
            "f:i -> i, c:i",
            true,
        ),
        // f y is never c
        fixture(
            "open unreachable",
            "\\y:i. f y",
            "c",
            "f:i -> i, c:i",
            false,
        ),
    ]
}

fn applied(p: &MatchingProblem, ts: &[Term]) -> Term {
    Term::apps(p.a().clone(), ts.iter().cloned())
}

/// `(a t_1 .. t_n) = b` by normal forms, independently of `MatchingProblem::check`.
pub fn verifies(p: &MatchingProblem, ts: &[Term]) -> bool {
    ts.len() == p.arity() && beta_eta_eq(p.context(), &applied(p, ts), p.b()).unwrap_or(false)
}

/// Oracle verdicts agree across the context-closing reduction and solutions
/// translate both ways.
pub fn check_problem_closure(
    p: &MatchingProblem,
    budget: &EnumerationBudget,
) -> Result<(), String> {
    let closure = close_problem(p).map_err(|e| e.to_string())?;
    let q = closure.problem();
    if !q.is_closed() {
        return Err(format!(
            "closed problem still mentions {:?}",
            q.a().free_vars()
        ));
    }
    let before = match_bruteforce(p, budget).map_err(|e| e.to_string())?;
    let after = match_bruteforce(q, budget).map_err(|e| e.to_string())?;
    if before.is_solved() != after.is_solved() {
        return Err(format!("verdicts differ: {before:?} / {after:?}"));
    }
    if let Some(ts) = before.solution() {
        let lifted = closure.lift(ts).map_err(|e| e.to_string())?;
        if !verifies(q, &lifted) {
            return Err(format!("lifted solution {lifted:?} fails"));
        }
    }
    if let Some(ts) = after.solution() {
        let lowered = closure.lower(ts).map_err(|e| e.to_string())?;
        if !verifies(p, &lowered) {
            return Err(format!("lowered solution {lowered:?} fails"));
        }
    }
    Ok(())
}

/// For a closed problem: solvability over `x:i` agrees with closed
/// solvability of the solution-closing reduction, with translations.
pub fn check_solution_closure(
    p: &MatchingProblem,
    budget: &EnumerationBudget,
) -> Result<(), String> {
    let over_x = p.with_context(ctx("x:i")).map_err(|e| e.to_string())?;
    let closure = close_solutions(p).map_err(|e| e.to_string())?;
    let q = closure.problem();
    let before = match_bruteforce(&over_x, budget).map_err(|e| e.to_string())?;
    let after = match_bruteforce(q, budget).map_err(|e| e.to_string())?;
    if before.is_solved() != after.is_solved() {
        return Err(format!("verdicts differ: {before:?} / {after:?}"));
    }
    if let Some(ts) = before.solution() {
        let lifted = closure
            .lift(ts, over_x.context())
            .map_err(|e| e.to_string())?;
        if !verifies(q, &lifted) {
            return Err(format!("lifted solution {lifted:?} fails"));
        }
    }
    if let Some(ts) = after.solution() {
        let (lowered, c) = closure.lower(ts).map_err(|e| e.to_string())?;
        let open = p.with_context(c).map_err(|e| e.to_string())?;
        if !verifies(&open, &lowered) {
            return Err(format!("lowered solution {lowered:?} fails"));
        }
    }
    Ok(())
}
