//! Substitution, beta-eta normalization, eta-long forms and term length.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kernel::{check_type, infer_in, infer_type, Context, Hint, Name, Term, Type};

/// Default cap on the number of beta steps a single normalization may take.
pub const DEFAULT_STEP_BUDGET: usize = 1_000_000;

/// A beta-eta normal term.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct NormalForm(Term);

impl NormalForm {
    pub fn term(&self) -> &Term {
        &self.0
    }

    pub fn into_term(self) -> Term {
        self.0
    }

    /// The unique `\x1..xn. (x c1 .. cp)` decomposition: binder types, head, arguments.
    pub fn decompose(&self) -> (Vec<&Type>, &Term, Vec<&Term>) {
        let (binders, body) = self.0.strip_lams();
        let (head, args) = body.spine();
        (binders.into_iter().map(|(_, t)| t).collect(), head, args)
    }
}

/// A normal term in eta-long form at a given type.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct EtaLongForm {
    term: Term,
    ty: Type,
}

impl EtaLongForm {
    /// Validates that `term` is normal eta-long at `ty` in `ctx`.
    pub fn check(ctx: &Context, term: Term, ty: Type) -> Result<Self> {
        if is_eta_long(ctx, &term, &ty) {
            Ok(EtaLongForm { term, ty })
        } else {
            Err(Error::NotEtaLong { term, ty })
        }
    }

    pub(crate) fn trusted(term: Term, ty: Type) -> Self {
        EtaLongForm { term, ty }
    }

    pub fn term(&self) -> &Term {
        &self.term
    }

    pub fn ty(&self) -> &Type {
        &self.ty
    }

    pub fn into_term(self) -> Term {
        self.term
    }
}

/// Adds `d` to every index `>= cutoff`.
pub(crate) fn shift(t: &Term, d: isize, cutoff: usize) -> Term {
    match t {
        Term::Free(_) => t.clone(),
        Term::Bound(i) => {
            if *i >= cutoff {
                Term::Bound((*i as isize + d) as usize)
            } else {
                t.clone()
            }
        }
        Term::App(f, a) => Term::app(shift(f, d, cutoff), shift(a, d, cutoff)),
        Term::Lam(h, ty, b) => Term::Lam(h.clone(), ty.clone(), Arc::new(shift(b, d, cutoff + 1))),
    }
}

/// Replaces index `j` by `s`, where `s` lives at the depth of the outermost call.
fn subst_index(t: &Term, j: usize, s: &Term, depth: usize) -> Term {
    match t {
        Term::Free(_) => t.clone(),
        Term::Bound(i) => {
            if *i == j + depth {
                shift(s, depth as isize, 0)
            } else {
                t.clone()
            }
        }
        Term::App(f, a) => Term::app(subst_index(f, j, s, depth), subst_index(a, j, s, depth)),
        Term::Lam(h, ty, b) => Term::Lam(
            h.clone(),
            ty.clone(),
            Arc::new(subst_index(b, j, s, depth + 1)),
        ),
    }
}

/// Contracts `(\. body) arg`.
pub(crate) fn beta(body: &Term, arg: &Term) -> Term {
    shift(&subst_index(body, 0, &shift(arg, 1, 0), 0), -1, 0)
}

/// Capture-avoiding `t[x <- u]` on free occurrences of `x`.
pub fn substitute(t: &Term, x: &Name, u: &Term) -> Term {
    fn go(t: &Term, x: &Name, u: &Term, depth: usize) -> Term {
        match t {
            Term::Free(n) if n == x => shift(u, depth as isize, 0),
            Term::Free(_) | Term::Bound(_) => t.clone(),
            Term::App(f, a) => Term::app(go(f, x, u, depth), go(a, x, u, depth)),
            Term::Lam(h, ty, b) => {
                Term::Lam(h.clone(), ty.clone(), Arc::new(go(b, x, u, depth + 1)))
            }
        }
    }
    go(t, x, u, 0)
}

struct Steps {
    used: usize,
    limit: usize,
}

impl Steps {
    fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            Err(Error::ResourceExceeded {
                what: "beta reduction steps",
                limit: self.limit,
            })
        } else {
            Ok(())
        }
    }
}

/// Normal-order beta normalization: head redexes first, then arguments left to right.
fn beta_normal(t: &Term, steps: &mut Steps) -> Result<Term> {
    let mut cur = t.clone();
    loop {
        if let Term::Lam(h, ty, b) = &cur {
            return Ok(Term::Lam(
                h.clone(),
                ty.clone(),
                Arc::new(beta_normal(b, steps)?),
            ));
        }
        let (head, args) = cur.spine();
        match head {
            Term::Lam(_, _, body) if !args.is_empty() => {
                steps.tick()?;
                let reduced = beta(body, args[0]);
                let rest: Vec<Term> = args[1..].iter().map(|a| (*a).clone()).collect();
                cur = Term::apps(reduced, rest);
            }
            _ => {
                let head = head.clone();
                let args = args
                    .into_iter()
                    .map(|a| beta_normal(a, steps))
                    .collect::<Result<Vec<_>>>()?;
                return Ok(Term::apps(head, args));
            }
        }
    }
}

/// Bottom-up eta contraction of `\x. (f x)` with `x` not free in `f`.
pub fn eta_contract(t: &Term) -> Term {
    match t {
        Term::Lam(h, ty, b) => {
            let b = eta_contract(b);
            if let Term::App(f, a) = &b {
                if **a == Term::Bound(0) && !f.has_index(0) {
                    return shift(f, -1, 0);
                }
            }
            Term::Lam(h.clone(), ty.clone(), Arc::new(b))
        }
        Term::App(f, a) => Term::app(eta_contract(f), eta_contract(a)),
        _ => t.clone(),
    }
}

/// Beta-eta normal form of a term assumed to be well typed.
pub fn normal_form_unchecked(t: &Term, step_budget: usize) -> Result<Term> {
    let mut steps = Steps {
        used: 0,
        limit: step_budget,
    };
    Ok(eta_contract(&beta_normal(t, &mut steps)?))
}

pub fn normalize(ctx: &Context, t: &Term) -> Result<NormalForm> {
    normalize_with_budget(ctx, t, DEFAULT_STEP_BUDGET)
}

pub fn normalize_with_budget(ctx: &Context, t: &Term, step_budget: usize) -> Result<NormalForm> {
    infer_type(ctx, t)?;
    Ok(NormalForm(normal_form_unchecked(t, step_budget)?))
}

pub fn is_beta_normal(t: &Term) -> bool {
    match t {
        Term::Free(_) | Term::Bound(_) => true,
        Term::Lam(_, _, b) => is_beta_normal(b),
        Term::App(f, a) => !matches!(**f, Term::Lam(..)) && is_beta_normal(f) && is_beta_normal(a),
    }
}

pub fn beta_eta_eq(ctx: &Context, t: &Term, u: &Term) -> Result<bool> {
    let tt = infer_type(ctx, t)?;
    let ut = infer_type(ctx, u)?;
    if tt != ut {
        return Err(Error::TypeMismatch {
            expected: tt,
            found: ut,
        });
    }
    Ok(normal_form_unchecked(t, DEFAULT_STEP_BUDGET)?
        == normal_form_unchecked(u, DEFAULT_STEP_BUDGET)?)
}

/// Printing hint for a binder introduced by expansion or enumeration.
pub(crate) fn binder_hint(ty: &Type) -> Hint {
    match ty.arity() {
        0 => Hint::new("x"),
        1 if ty.order() == 2 => Hint::new("f"),
        _ => Hint::new("g"),
    }
}

/// Eta-long form of a beta-normal term `t` at `ty`.
pub fn eta_long(ctx: &Context, t: &Term, ty: &Type) -> Result<EtaLongForm> {
    check_type(ctx, t, ty)?;
    if !is_beta_normal(t) {
        return Err(Error::NotNormal(t.clone()));
    }
    let term = long(ctx, &mut Vec::new(), t, ty)?;
    Ok(EtaLongForm {
        term,
        ty: ty.clone(),
    })
}

/// Normalizes and then eta-expands, at the inferred type.
pub fn normal_eta_long(ctx: &Context, t: &Term) -> Result<EtaLongForm> {
    let ty = infer_type(ctx, t)?;
    let nf = normalize(ctx, t)?;
    eta_long(ctx, nf.term(), &ty)
}

fn long(ctx: &Context, env: &mut Vec<Type>, t: &Term, ty: &Type) -> Result<Term> {
    let targets = ty.decompose();
    let (binders, body) = t.strip_lams();
    let present = binders.len();
    if present > targets.len() {
        return Err(Error::ill_typed(
            t,
            format!("too many binders for type `{ty}`"),
        ));
    }
    let hints: Vec<Hint> = binders
        .iter()
        .map(|(h, _)| (*h).clone())
        .chain(targets[present..].iter().map(binder_hint))
        .collect();
    let extra = targets.len() - present;
    let base_len = env.len();
    env.extend(targets.iter().cloned());

    let body = shift(body, extra as isize, 0);
    let (head, args) = body.spine();
    let head_ty = match head {
        Term::Free(n) => ctx.get(n).cloned(),
        Term::Bound(i) => env.len().checked_sub(i + 1).map(|k| env[k].clone()),
        _ => None,
    };
    let head_ty = match head_ty {
        Some(h) => h,
        None => {
            env.truncate(base_len);
            return Err(Error::NotNormal(t.clone()));
        }
    };
    let arg_tys = head_ty.decompose();
    if arg_tys.len() != args.len() + extra {
        env.truncate(base_len);
        return Err(Error::ill_typed(t, "head arity does not match the type"));
    }
    let mut new_args = Vec::with_capacity(arg_tys.len());
    for (a, aty) in args.iter().zip(&arg_tys) {
        match long(ctx, env, a, aty) {
            Ok(x) => new_args.push(x),
            Err(e) => {
                env.truncate(base_len);
                return Err(e);
            }
        }
    }
    for j in 0..extra {
        let var = Term::Bound(extra - 1 - j);
        match long(ctx, env, &var, &arg_tys[args.len() + j]) {
            Ok(x) => new_args.push(x),
            Err(e) => {
                env.truncate(base_len);
                return Err(e);
            }
        }
    }
    env.truncate(base_len);
    let mut out = Term::apps(head.clone(), new_args);
    for (hint, bty) in hints.into_iter().zip(targets).rev() {
        out = Term::Lam(hint, bty, Arc::new(out));
    }
    Ok(out)
}

/// Whether `t` is a normal eta-long term of type `ty` in `ctx`.
pub fn is_eta_long(ctx: &Context, t: &Term, ty: &Type) -> bool {
    fn go(ctx: &Context, env: &mut Vec<Type>, t: &Term, ty: &Type) -> bool {
        let targets = ty.decompose();
        let (binders, body) = t.strip_lams();
        if binders.len() != targets.len() || binders.iter().zip(&targets).any(|((_, b), t)| *b != t)
        {
            return false;
        }
        let base_len = env.len();
        env.extend(targets);
        let (head, args) = body.spine();
        let head_ty = match head {
            Term::Free(n) => ctx.get(n).cloned(),
            Term::Bound(i) => env.len().checked_sub(i + 1).map(|k| env[k].clone()),
            Term::Lam(..) | Term::App(..) => None,
        };
        let ok = match head_ty {
            Some(hty) => {
                let arg_tys = hty.decompose();
                arg_tys.len() == args.len()
                    && args
                        .iter()
                        .zip(&arg_tys)
                        .all(|(a, aty)| go(ctx, env, a, aty))
            }
            None => false,
        };
        env.truncate(base_len);
        ok
    }
    go(ctx, &mut Vec::new(), t, ty)
}

/// `|t| = 1 + max |\x1..xn. d_i|` over the head's arguments, with `max {} = 0`.
pub fn term_length(t: &EtaLongForm) -> usize {
    length_of(&t.term)
}

pub(crate) fn length_of(t: &Term) -> usize {
    let (_, body) = t.strip_lams();
    let (_, args) = body.spine();
    1 + args.iter().map(|a| length_of(a)).max().unwrap_or(0)
}

/// Length of an arbitrary term, checking that it is normal eta-long at `ty`.
pub fn checked_length(ctx: &Context, t: &Term, ty: &Type) -> Result<usize> {
    let e = EtaLongForm::check(ctx, t.clone(), ty.clone())?;
    Ok(term_length(&e))
}

/// Redex selection order for single-step reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    LeftmostOutermost,
    RightmostInnermost,
}

/// Contracts one beta redex chosen by `strategy`, or `None` for a beta-normal term.
pub fn beta_step(t: &Term, strategy: Strategy) -> Option<Term> {
    match strategy {
        Strategy::LeftmostOutermost => step_lo(t),
        Strategy::RightmostInnermost => step_ri(t),
    }
}

fn step_lo(t: &Term) -> Option<Term> {
    match t {
        Term::App(f, a) => {
            if let Term::Lam(_, _, b) = &**f {
                return Some(beta(b, a));
            }
            if let Some(f2) = step_lo(f) {
                return Some(Term::App(Arc::new(f2), a.clone()));
            }
            step_lo(a).map(|a2| Term::App(f.clone(), Arc::new(a2)))
        }
        Term::Lam(h, ty, b) => step_lo(b).map(|b2| Term::Lam(h.clone(), ty.clone(), Arc::new(b2))),
        _ => None,
    }
}

fn step_ri(t: &Term) -> Option<Term> {
    match t {
        Term::App(f, a) => {
            if let Some(a2) = step_ri(a) {
                return Some(Term::App(f.clone(), Arc::new(a2)));
            }
            if let Some(f2) = step_ri(f) {
                return Some(Term::App(Arc::new(f2), a.clone()));
            }
            match &**f {
                Term::Lam(_, _, b) => Some(beta(b, a)),
                _ => None,
            }
        }
        Term::Lam(h, ty, b) => step_ri(b).map(|b2| Term::Lam(h.clone(), ty.clone(), Arc::new(b2))),
        _ => None,
    }
}

/// Small-step normalization: repeated `beta_step` under `strategy`, then eta contraction.
pub fn normalize_by(t: &Term, strategy: Strategy, step_budget: usize) -> Result<Term> {
    let mut cur = t.clone();
    let mut steps = Steps {
        used: 0,
        limit: step_budget,
    };
    while let Some(next) = beta_step(&cur, strategy) {
        steps.tick()?;
        cur = next;
    }
    Ok(eta_contract(&cur))
}

/// Types every subterm that is well typed in `ctx` alone (no loose indices).
pub(crate) fn infer_closed_subterm(ctx: &Context, t: &Term) -> Option<Type> {
    if !t.is_locally_closed() {
        return None;
    }
    infer_in(ctx, &mut Vec::new(), t).ok()
}
