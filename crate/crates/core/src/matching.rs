//! Higher-order matching: find `t_1 .. t_n` with `a t_1 .. t_n = b`.
//!
//! [`match_bruteforce`] tries tuples of terms directly. [`match_semantic`]
//! works in the finite model of `b`: it explores the values the unknowns must
//! take at the points the separators actually probe, and then looks for
//! closed terms with those values.

use std::collections::HashMap;

use serde::Serialize;

use crate::definability::closed_terms_within;
use crate::enumerator::{enumerate_normal_terms, EnumerationBudget};
use crate::error::{Error, Result};
use crate::kernel::{infer_type, Context, Name, Term, Type};
use crate::rewrite::{length_of, normal_eta_long, normalize, substitute};
use crate::semantics::{settle, Evaluator, Halt, Query, Value};
use crate::statman::{build_finite_model, FiniteModel};

#[derive(Clone, Debug, PartialEq)]
pub struct MatchingProblem {
    a: Term,
    b: Term,
    context: Context,
    unknowns: Vec<Type>,
    target: Type,
}

impl MatchingProblem {
    /// The number of unknowns is the arity of `a` minus the arity of `b`.
    pub fn new(a: Term, b: Term, context: Context) -> Result<Self> {
        let a_ty = infer_type(&context, &a)?;
        let target = infer_type(&context, &b)?;
        let args = a_ty.decompose();
        let n = args
            .len()
            .checked_sub(target.arity())
            .ok_or_else(|| Error::TypeMismatch {
                expected: Type::arrow(Type::Base, target.clone()),
                found: a_ty.clone(),
            })?;
        if Type::arrows(args[n..].iter().cloned(), Type::Base) != target {
            return Err(Error::TypeMismatch {
                expected: Type::arrows(args[..n].iter().cloned(), target),
                found: a_ty,
            });
        }
        Ok(MatchingProblem {
            a,
            b,
            context,
            unknowns: args[..n].to_vec(),
            target,
        })
    }

    pub fn a(&self) -> &Term {
        &self.a
    }

    pub fn b(&self) -> &Term {
        &self.b
    }

    pub fn context(&self) -> &Context {
        &self.context
    }

    pub fn arity(&self) -> usize {
        self.unknowns.len()
    }

    pub fn unknown_types(&self) -> &[Type] {
        &self.unknowns
    }

    pub fn target_type(&self) -> &Type {
        &self.target
    }

    /// No context and no free variables in `a` or `b`.
    pub fn is_closed(&self) -> bool {
        self.context.is_empty() && self.a.is_closed() && self.b.is_closed()
    }

    /// The same equation with solutions drawn from another context.
    pub fn with_context(&self, context: Context) -> Result<Self> {
        MatchingProblem::new(self.a.clone(), self.b.clone(), context)
    }

    /// Whether `ts` solves the problem.
    pub fn check(&self, ts: &[Term]) -> Result<bool> {
        if ts.len() != self.arity() {
            return Ok(false);
        }
        for (t, ty) in ts.iter().zip(&self.unknowns) {
            if infer_type(&self.context, t)? != *ty {
                return Ok(false);
            }
        }
        let lhs = normalize(
            &self.context,
            &Term::apps(self.a.clone(), ts.iter().cloned()),
        )?;
        Ok(lhs == normalize(&self.context, &self.b)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum MatchVerdict {
    Solved {
        solution: Vec<Term>,
    },
    /// `exhaustive` means the problem is provably unsolvable, not merely
    /// unsolved within `bound`.
    NoSolutionWithin {
        bound: usize,
        exhaustive: bool,
    },
}

impl MatchVerdict {
    pub fn is_solved(&self) -> bool {
        matches!(self, MatchVerdict::Solved { .. })
    }

    pub fn solution(&self) -> Option<&[Term]> {
        match self {
            MatchVerdict::Solved { solution } => Some(solution),
            _ => None,
        }
    }
}

fn fresh_name(base: &str, avoid: impl Fn(&Name) -> bool) -> Name {
    let mut name = Name::new(base);
    let mut k = 1;
    while avoid(&name) {
        name = Name::new(&format!("{base}{k}"));
        k += 1;
    }
    name
}

fn closed_nf(t: &Term) -> Result<Term> {
    Ok(normal_eta_long(&Context::new(), t)?.into_term())
}

/// A closed problem equivalent to an open one, with the translations
/// between their solutions.
#[derive(Clone, Debug)]
pub struct ProblemClosure {
    problem: MatchingProblem,
    original: MatchingProblem,
}

/// Abstracts the context into every unknown: with context `x_1 .. x_p`,
/// `a' = \y_1 .. y_n. \x_1 .. x_p. a (y_1 x_1 .. x_p) .. (y_n x_1 .. x_p)` and
/// `b' = \x_1 .. x_p. b`.
pub fn close_problem(p: &MatchingProblem) -> Result<ProblemClosure> {
    let vars: Vec<(Name, Type)> = p
        .context
        .iter()
        .map(|(n, t)| (n.clone(), t.clone()))
        .collect();
    let xs: Vec<Term> = vars.iter().map(|(n, _)| Term::Free(n.clone())).collect();
    let mut ys = Vec::new();
    for i in 0..p.arity() {
        let y = fresh_name(&format!("y{}", i + 1), |n| {
            p.context.contains(n) || ys.iter().any(|(m, _): &(Name, Type)| m == n)
        });
        let ty = Type::arrows(vars.iter().map(|(_, t)| t.clone()), p.unknowns[i].clone());
        ys.push((y, ty));
    }
    let abstract_context = |body: Term| {
        vars.iter()
            .rev()
            .fold(body, |acc, (n, t)| Term::lam(n.as_str(), t.clone(), acc))
    };
    let body = Term::apps(
        p.a.clone(),
        ys.iter()
            .map(|(y, _)| Term::apps(Term::Free(y.clone()), xs.iter().cloned())),
    );
    let a = ys.iter().rev().fold(abstract_context(body), |acc, (n, t)| {
        Term::lam(n.as_str(), t.clone(), acc)
    });
    let b = abstract_context(p.b.clone());
    let problem = MatchingProblem::new(closed_nf(&a)?, closed_nf(&b)?, Context::new())?;
    Ok(ProblemClosure {
        problem,
        original: p.clone(),
    })
}

impl ProblemClosure {
    pub fn problem(&self) -> &MatchingProblem {
        &self.problem
    }

    /// Solution of the closed problem from one of the original: `\x_1 .. x_p. t_i`.
    pub fn lift(&self, ts: &[Term]) -> Result<Vec<Term>> {
        ts.iter()
            .map(|t| {
                let closed = self
                    .original
                    .context
                    .iter()
                    .collect::<Vec<_>>()
                    .into_iter()
                    .rev()
                    .fold(t.clone(), |acc, (n, ty)| {
                        Term::lam(n.as_str(), ty.clone(), acc)
                    });
                closed_nf(&closed)
            })
            .collect()
    }

    /// Solution of the original problem from one of the closed: `t'_i x_1 .. x_p`.
    pub fn lower(&self, ts: &[Term]) -> Result<Vec<Term>> {
        let xs: Vec<Term> = self
            .original
            .context
            .iter()
            .map(|(n, _)| Term::Free(n.clone()))
            .collect();
        ts.iter()
            .map(|t| {
                let applied = Term::apps(t.clone(), xs.iter().cloned());
                Ok(normal_eta_long(&self.original.context, &applied)?.into_term())
            })
            .collect()
    }
}

/// A problem whose closed solutions correspond to the open solutions of a
/// closed problem.
#[derive(Clone, Debug)]
pub struct SolutionClosure {
    problem: MatchingProblem,
}

/// `a' = \y_1:i->a_1 .. y_n:i->a_n. \x:i. a (y_1 x) .. (y_n x)` and `b' = \x:i. b`.
pub fn close_solutions(p: &MatchingProblem) -> Result<SolutionClosure> {
    for t in [&p.a, &p.b] {
        if let Some(n) = t.free_vars().into_iter().next() {
            return Err(Error::NotClosed(n));
        }
    }
    let x = Name::new("x");
    let ys: Vec<(Name, Type)> = (0..p.arity())
        .map(|i| {
            (
                Name::new(&format!("y{}", i + 1)),
                Type::arrow(Type::Base, p.unknowns[i].clone()),
            )
        })
        .collect();
    let body = Term::apps(
        p.a.clone(),
        ys.iter()
            .map(|(y, _)| Term::app(Term::Free(y.clone()), Term::Free(x.clone()))),
    );
    let a = ys
        .iter()
        .rev()
        .fold(Term::lam(x.as_str(), Type::Base, body), |acc, (n, t)| {
            Term::lam(n.as_str(), t.clone(), acc)
        });
    let b = Term::lam(x.as_str(), Type::Base, p.b.clone());
    let problem = MatchingProblem::new(closed_nf(&a)?, closed_nf(&b)?, Context::new())?;
    Ok(SolutionClosure { problem })
}

/// `\z1 .. zk. z`, collapsing every argument list to the base variable `z`.
fn collapse(ty: &Type, z: &Name) -> Term {
    let args = ty.decompose();
    let body = Term::Free(z.clone());
    args.iter().enumerate().rev().fold(body, |acc, (k, t)| {
        Term::lam(&format!("v{}", k + 1), t.clone(), acc)
    })
}

impl SolutionClosure {
    pub fn problem(&self) -> &MatchingProblem {
        &self.problem
    }

    /// Closed solution from a solution over `ctx`: every free variable is
    /// replaced by a function returning a new base variable, which is then
    /// abstracted.
    pub fn lift(&self, ts: &[Term], ctx: &Context) -> Result<Vec<Term>> {
        let z = fresh_name("u", |n| ctx.contains(n) || ts.iter().any(|t| t.mentions(n)));
        ts.iter()
            .map(|t| {
                let mut body = t.clone();
                for n in t.free_vars() {
                    let ty = ctx.get(&n).ok_or_else(|| {
                        Error::ill_typed(t, format!("`{n}` is not in the solution context"))
                    })?;
                    body = substitute(&body, &n, &collapse(ty, &z));
                }
                closed_nf(&Term::lam(z.as_str(), Type::Base, body))
            })
            .collect()
    }

    /// Open solution `t_i = y_i x` over the context `x:i`.
    pub fn lower(&self, ts: &[Term]) -> Result<(Vec<Term>, Context)> {
        let ctx = Context::from_pairs([("x", Type::Base)])?;
        let terms = ts
            .iter()
            .map(|t| Ok(normal_eta_long(&ctx, &Term::app(t.clone(), Term::var("x")))?.into_term()))
            .collect::<Result<Vec<_>>>()?;
        Ok((terms, ctx))
    }
}

enum TupleSearch {
    Found(Vec<Term>),
    Exhausted,
    Overflow,
}

/// Tries tuples in order of total length, each coordinate drawn from its
/// list (sorted by length).
fn tuple_search(
    lists: &[Vec<Term>],
    max_count: usize,
    check: &mut dyn FnMut(&[Term]) -> Result<bool>,
) -> Result<TupleSearch> {
    let by_length: Vec<Vec<Vec<&Term>>> = lists
        .iter()
        .map(|list| {
            let mut groups: Vec<Vec<&Term>> = Vec::new();
            for t in list {
                let l = length_of(t);
                if groups.len() <= l {
                    groups.resize(l + 1, Vec::new());
                }
                groups[l].push(t);
            }
            groups
        })
        .collect();
    if by_length.iter().any(|g| g.is_empty()) {
        return Ok(TupleSearch::Exhausted);
    }
    let max_total: usize = by_length.iter().map(|g| g.len() - 1).sum();
    let mut tried = 0usize;

    struct Walk<'a, 'b> {
        groups: &'a [Vec<Vec<&'a Term>>],
        tried: &'b mut usize,
        max_count: usize,
        check: &'b mut dyn FnMut(&[Term]) -> Result<bool>,
        current: Vec<Term>,
    }

    impl Walk<'_, '_> {
        fn go(&mut self, coord: usize, remaining: usize) -> Result<Option<TupleSearch>> {
            if coord == self.groups.len() {
                if remaining != 0 {
                    return Ok(None);
                }
                *self.tried += 1;
                if *self.tried > self.max_count {
                    return Ok(Some(TupleSearch::Overflow));
                }
                return Ok(
                    (self.check)(&self.current)?.then(|| TupleSearch::Found(self.current.clone()))
                );
            }
            let groups = &self.groups[coord];
            for (l, group) in groups.iter().enumerate().take(remaining + 1).skip(1) {
                for &t in group {
                    self.current.push(t.clone());
                    let r = self.go(coord + 1, remaining - l);
                    self.current.pop();
                    if let Some(done) = r? {
                        return Ok(Some(done));
                    }
                }
            }
            Ok(None)
        }
    }

    let mut walk = Walk {
        groups: &by_length,
        tried: &mut tried,
        max_count,
        check,
        current: Vec::new(),
    };
    for total in lists.len()..=max_total {
        if let Some(done) = walk.go(0, total)? {
            return Ok(done);
        }
    }
    Ok(TupleSearch::Exhausted)
}

fn candidates(p: &MatchingProblem, budget: &EnumerationBudget) -> Result<Option<Vec<Vec<Term>>>> {
    let mut lists = Vec::with_capacity(p.arity());
    for ty in &p.unknowns {
        match enumerate_normal_terms(&p.context, ty, budget) {
            Ok(terms) => lists.push(terms.into_iter().map(|t| t.into_term()).collect()),
            Err(Error::ResourceExceeded { .. }) => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    Ok(Some(lists))
}

fn not_within(budget: &EnumerationBudget) -> MatchVerdict {
    MatchVerdict::NoSolutionWithin {
        bound: budget.max_length(),
        exhaustive: false,
    }
}

fn verified(p: &MatchingProblem, solution: Vec<Term>) -> Result<MatchVerdict> {
    assert!(
        p.check(&solution)?,
        "reported solution does not solve the problem"
    );
    Ok(MatchVerdict::Solved { solution })
}

/// Tries every tuple of eta-long normal terms over the problem's context,
/// each of length at most the budget, by increasing total length.
pub fn match_bruteforce(p: &MatchingProblem, budget: &EnumerationBudget) -> Result<MatchVerdict> {
    if p.arity() == 0 {
        return if p.check(&[])? {
            verified(p, Vec::new())
        } else {
            Ok(MatchVerdict::NoSolutionWithin {
                bound: budget.max_length(),
                exhaustive: true,
            })
        };
    }
    let Some(lists) = candidates(p, budget)? else {
        return Ok(not_within(budget));
    };
    match tuple_search(&lists, budget.max_count(), &mut |ts| p.check(ts))? {
        TupleSearch::Found(ts) => verified(p, ts),
        TupleSearch::Exhausted | TupleSearch::Overflow => Ok(not_within(budget)),
    }
}

/// Decides matching through the finite model of `b`. Open problems are
/// closed first and their solutions translated back.
pub fn match_semantic(p: &MatchingProblem, budget: &EnumerationBudget) -> Result<MatchVerdict> {
    if p.is_closed() {
        return semantic_closed(p, budget);
    }
    let closure = close_problem(p)?;
    match semantic_closed(closure.problem(), budget)? {
        MatchVerdict::Solved { solution } => verified(p, closure.lower(&solution)?),
        other => Ok(other),
    }
}

enum Stop {
    Overflow,
    Failed(Error),
}

impl From<Error> for Stop {
    fn from(e: Error) -> Self {
        Stop::Failed(e)
    }
}

struct Pipeline<'m> {
    fm: &'m FiniteModel,
    problem: &'m MatchingProblem,
    probes: Vec<Term>,
    targets: Vec<u32>,
    budget: EnumerationBudget,
    candidates: HashMap<usize, Vec<Term>>,
    nodes: usize,
    leaves: usize,
}

impl Pipeline<'_> {
    /// Depth-first over answers to the unknowns' queries, pruning as soon as
    /// a separator value disagrees with the target.
    fn explore(&mut self, ev: &mut Evaluator<'_>) -> std::result::Result<Option<Vec<Term>>, Stop> {
        self.nodes += 1;
        if self.nodes > self.budget.max_count() {
            return Err(Stop::Overflow);
        }
        let mut pending = None;
        for (probe, &target) in self.probes.iter().zip(&self.targets) {
            match ev.eval(probe).and_then(|v| ev.base_value(&v)) {
                Ok(v) if v == target => {}
                Ok(_) => return Ok(None),
                Err(Halt::Ask(q)) => {
                    pending = Some(q);
                    break;
                }
                Err(Halt::Fail(e)) => return Err(Stop::Failed(e)),
            }
        }
        let Some(q) = pending else {
            self.leaves += 1;
            return Ok(self.realize(ev.answers())?);
        };
        for v in 0..ev.model().base_size() {
            ev.answers_mut().insert(q.clone(), v);
            let found = self.explore(ev);
            ev.answers_mut().remove(&q);
            if let Some(ts) = found? {
                return Ok(Some(ts));
            }
        }
        Ok(None)
    }

    /// Looks for closed terms taking the recorded values at the queried points.
    fn realize(&mut self, answers: &HashMap<Query, u32>) -> Result<Option<Vec<Term>>> {
        let ev = self.fm.evaluator()?;
        let mut tuple = Vec::with_capacity(self.problem.arity());
        for (slot, ty) in self.problem.unknowns.iter().enumerate() {
            let constraints: Vec<(&Query, u32)> = answers
                .iter()
                .filter(|(q, _)| q.slot == slot)
                .map(|(q, v)| (q, *v))
                .collect();
            let budget = self.budget;
            let list = self
                .candidates
                .entry(slot)
                .or_insert_with(|| closed_terms_within(ty, &budget).0);
            let mut found = None;
            for t in list.iter() {
                if satisfies(&ev, t, ty, &constraints)? {
                    found = Some(t.clone());
                    break;
                }
            }
            match found {
                Some(t) => tuple.push(t),
                None => return Ok(None),
            }
        }
        Ok(Some(tuple))
    }
}

fn satisfies(
    ev: &Evaluator<'_>,
    t: &Term,
    ty: &Type,
    constraints: &[(&Query, u32)],
) -> Result<bool> {
    let value = settle(ev.eval(t))?;
    for (q, expected) in constraints {
        let mut v: Value = value.clone();
        let mut cur = ty;
        for &code in &q.args {
            let (dom, cod) = cur.split().expect("query longer than the unknown's arity");
            v = settle(ev.apply(&v, ev.decode_small(code, dom)?))?;
            cur = cod;
        }
        if settle(ev.base_value(&v))? != *expected {
            return Ok(false);
        }
    }
    Ok(true)
}

fn semantic_closed(p: &MatchingProblem, budget: &EnumerationBudget) -> Result<MatchVerdict> {
    let fm = build_finite_model(&p.b, &p.target, budget)?;
    if p.arity() == 0 {
        return if fm.decide_eq(&p.a)? {
            verified(p, Vec::new())
        } else {
            Ok(MatchVerdict::NoSolutionWithin {
                bound: budget.max_length(),
                exhaustive: true,
            })
        };
    }
    let targets = fm.profile(fm.subject())?;
    let slots: Vec<Name> = (0..p.arity())
        .map(|i| Name::new(&format!("zy{}", i + 1)))
        .collect();
    let applied = Term::apps(p.a.clone(), slots.iter().map(|n| Term::Free(n.clone())));
    let probes = fm
        .separators()
        .separators()
        .iter()
        .map(|w| Term::app(w.clone(), applied.clone()))
        .collect();

    let mut ev = fm.evaluator()?;
    for (i, (n, ty)) in slots.iter().zip(&p.unknowns).enumerate() {
        ev.bind(n.clone(), Evaluator::unknown(i, ty.clone()));
    }
    let mut pipeline = Pipeline {
        fm: &fm,
        problem: p,
        probes,
        targets,
        budget: *budget,
        candidates: HashMap::new(),
        nodes: 0,
        leaves: 0,
    };
    match pipeline.explore(&mut ev) {
        Ok(Some(ts)) => verified(p, ts),
        Ok(None) => Ok(MatchVerdict::NoSolutionWithin {
            bound: budget.max_length(),
            exhaustive: pipeline.leaves == 0,
        }),
        Err(Stop::Failed(Error::ModelTooLarge { .. })) | Err(Stop::Overflow) => {
            tuples_in_model(p, &fm, budget)
        }
        Err(Stop::Failed(e)) => Err(e),
    }
}

/// Fallback when the query tree is too large: try closed tuples, filtering
/// them by their separator values in the model.
fn tuples_in_model(
    p: &MatchingProblem,
    fm: &FiniteModel,
    budget: &EnumerationBudget,
) -> Result<MatchVerdict> {
    let targets = fm.profile(fm.subject())?;
    let lists: Vec<Vec<Term>> = p
        .unknowns
        .iter()
        .map(|ty| closed_terms_within(ty, budget).0)
        .collect();
    let mut check = |ts: &[Term]| -> Result<bool> {
        Ok(fm.profile(&Term::apps(p.a.clone(), ts.iter().cloned()))? == targets)
    };
    match tuple_search(&lists, budget.max_count(), &mut check)? {
        TupleSearch::Found(ts) => verified(p, ts),
        TupleSearch::Exhausted | TupleSearch::Overflow => Ok(not_within(budget)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_context, parse_term};

    fn problem(a: &str, b: &str, ctx: &str) -> MatchingProblem {
        MatchingProblem::new(
            parse_term(a).unwrap(),
            parse_term(b).unwrap(),
            parse_context(ctx).unwrap(),
        )
        .unwrap()
    }

    fn budget() -> EnumerationBudget {
        EnumerationBudget::with_length(6)
    }

    const SUCC: &str = "\\m:i -> (i -> i) -> i. \\x:i. \\f:i -> i. f (m x f)";

    #[test]
    fn arity_is_inferred() {
        let p = problem(SUCC, "#3", "");
        assert_eq!(p.arity(), 1);
        assert_eq!(p.unknown_types(), &[Type::numeral()]);
        assert!(MatchingProblem::new(
            Term::church(1),
            parse_term("\\x:i. x").unwrap(),
            Context::new()
        )
        .is_err());
    }

    #[test]
    fn successor_of_two() {
        let p = problem(SUCC, "#3", "");
        let brute = match_bruteforce(&p, &budget()).unwrap();
        assert_eq!(brute.solution(), Some(&[Term::church(2)][..]));
        let sem = match_semantic(&p, &budget()).unwrap();
        assert_eq!(sem.solution(), Some(&[Term::church(2)][..]));
    }

    #[test]
    fn constant_zero_is_refuted() {
        let p = problem("\\m:i -> (i -> i) -> i. \\x:i. \\f:i -> i. x", "#1", "");
        let brute = match_bruteforce(&p, &budget()).unwrap();
        assert_eq!(
            brute,
            MatchVerdict::NoSolutionWithin {
                bound: 6,
                exhaustive: false
            }
        );
        let sem = match_semantic(&p, &budget()).unwrap();
        assert_eq!(
            sem,
            MatchVerdict::NoSolutionWithin {
                bound: 6,
                exhaustive: true
            }
        );
    }

    #[test]
    fn identity_problem() {
        let p = problem("\\y:i -> i. y", "\\x:i. x", "");
        let id = parse_term("\\x:i. x").unwrap();
        assert_eq!(
            match_bruteforce(&p, &budget()).unwrap().solution(),
            Some(&[id.clone()][..])
        );
        assert_eq!(
            match_semantic(&p, &budget()).unwrap().solution(),
            Some(&[id][..])
        );
    }

    #[test]
    fn closing_an_open_problem() {
        let p = problem("\\y:i. f y", "f (f c)", "f:i -> i, c:i");
        let closure = close_problem(&p).unwrap();
        let q = closure.problem();
        assert_eq!(
            q.a(),
            &parse_term("\\y:(i -> i) -> i -> i. \\f:i -> i. \\c:i. f (y (\\x:i. f x) c)").unwrap()
        );
        assert_eq!(q.b(), &parse_term("\\f:i -> i. \\c:i. f (f c)").unwrap());
        let closed_solution = vec![parse_term("\\f:i -> i. \\c:i. f c").unwrap()];
        assert!(q.check(&closed_solution).unwrap());
        let open = closure.lower(&closed_solution).unwrap();
        assert_eq!(open, vec![parse_term("f c").unwrap()]);
        assert!(p.check(&open).unwrap());
        assert_eq!(closure.lift(&open).unwrap(), closed_solution);

        let sem = match_semantic(&p, &budget()).unwrap();
        assert_eq!(sem.solution(), Some(&open[..]));
    }

    #[test]
    fn closing_solutions() {
        let p = problem("\\y:i -> i. \\w:i. y w", "\\w:i. w", "");
        let closure = close_solutions(&p).unwrap();
        let q = closure.problem();
        assert_eq!(
            q.a(),
            &parse_term("\\y:i -> i -> i. \\x:i. \\w:i. y x w").unwrap()
        );
        assert_eq!(q.b(), &parse_term("\\x:i. \\w:i. w").unwrap());
        let closed = vec![parse_term("\\x:i. \\v:i. v").unwrap()];
        assert!(q.check(&closed).unwrap());
        let (open, ctx) = closure.lower(&closed).unwrap();
        assert_eq!(open, vec![parse_term("\\v:i. v").unwrap()]);
        assert!(p.with_context(ctx).unwrap().check(&open).unwrap());

        let open_problem = problem("\\y:i. y", "x", "x:i");
        assert!(matches!(
            close_solutions(&open_problem),
            Err(Error::NotClosed(_))
        ));
    }

    #[test]
    fn lifting_open_solutions() {
        let p = problem("\\y:i -> i. \\w:i. y w", "\\w:i. w", "");
        let closure = close_solutions(&p).unwrap();
        let ctx = parse_context("g:i -> i, c:i").unwrap();
        let lifted = closure
            .lift(&[parse_term("\\v:i. g c").unwrap()], &ctx)
            .unwrap();
        assert_eq!(lifted, vec![parse_term("\\u:i. \\v:i. u").unwrap()]);
    }

    #[test]
    fn no_unknowns() {
        let p = problem("#2", "\\x:i. \\f:i -> i. f ((\\y:i. f y) x)", "");
        assert_eq!(p.arity(), 0);
        assert!(match_bruteforce(&p, &budget()).unwrap().is_solved());
        assert!(match_semantic(&p, &budget()).unwrap().is_solved());
        let p = problem("#2", "#3", "");
        let v = match_semantic(&p, &budget()).unwrap();
        assert_eq!(
            v,
            MatchVerdict::NoSolutionWithin {
                bound: 6,
                exhaustive: true
            }
        );
    }
}
