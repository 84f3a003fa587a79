//! Separator terms and the per-term finite models that decide beta-eta
//! equality with a fixed closed term.
//!
//! Generated constants live in the reserved `z` namespace and their types are
//! fixed by their names:
//!
//! | name        | type                 | role                                   |
//! |-------------|----------------------|----------------------------------------|
//! | `z0`        | `i`                  | base probe                             |
//! | `zp<p>`     | `i -> .. -> i` (p)   | probe head of arity `p`                |
//! | `z<n>`      | `i`                  | fresh constant, `n >= 1`               |
//! | `zz<n>`     | `i -> i -> i`        | fresh pairing variable                 |

use std::sync::Arc;

use num_bigint::BigUint;
use serde::Serialize;

use crate::enumerator::{
    enumerate_normal_terms, enumerate_same_length, iota_subterms, EnumerationBudget,
};
use crate::error::{Error, Result};
use crate::kernel::{check_type, infer_type, Context, Hint, Name, Term, Type};
use crate::rewrite::{binder_hint, eta_long, length_of, normalize, EtaLongForm};
use crate::semantics::{settle, Assignment, Element, Evaluator, Model, DEFAULT_CAP};

/// The type a reserved name stands for, if it is one of the generated kinds.
pub fn reserved_type(name: &Name) -> Option<Type> {
    let s = name.as_str();
    let digits = |r: &str| -> Option<usize> {
        (!r.is_empty() && r.bytes().all(|b| b.is_ascii_digit())).then(|| r.parse().ok())?
    };
    if let Some(r) = s.strip_prefix("zp") {
        return digits(r).filter(|p| *p >= 1).map(Type::first_order);
    }
    if let Some(r) = s.strip_prefix("zz") {
        return digits(r).map(|_| Type::first_order(2));
    }
    s.strip_prefix('z').and_then(digits).map(|_| Type::Base)
}

/// Context typing every free variable of `terms` by the naming convention.
pub fn reserved_context<'a, I: IntoIterator<Item = &'a Term>>(terms: I) -> Result<Context> {
    let mut ctx = Context::new();
    for t in terms {
        for n in t.free_vars() {
            let ty = reserved_type(&n)
                .ok_or_else(|| Error::ill_typed(t, format!("`{n}` is not a generated constant")))?;
            ctx.merge_var(n, ty)?;
        }
    }
    Ok(ctx)
}

fn lams(binders: &[Type], body: Term) -> Term {
    binders.iter().rev().fold(body, |acc, b| {
        Term::Lam(binder_hint(b), b.clone(), Arc::new(acc))
    })
}

/// The variables bound by `n` enclosing binders, outermost first.
fn bound_vars(n: usize) -> impl Iterator<Item = Term> {
    (0..n).map(move |j| Term::Bound(n - 1 - j))
}

/// The probe `c_ty`: every argument is fed probes of its own argument types
/// and the results are collected under a reserved head of matching arity.
pub fn build_c(ty: &Type) -> Term {
    let args = ty.decompose();
    if args.is_empty() {
        return Term::var("z0");
    }
    let p = args.len();
    let head = Term::var(&format!("zp{p}"));
    let body = Term::apps(
        head,
        args.iter()
            .zip(bound_vars(p))
            .map(|(b, x)| Term::apps(x, b.decompose().iter().map(build_c))),
    );
    lams(&args, body)
}

/// `\x:ty. x c_1 .. c_n`, which separates terms of different lengths.
pub fn length_separator(ty: &Type) -> Term {
    let body = Term::apps(Term::Bound(0), ty.decompose().iter().map(build_c));
    Term::Lam(Hint::new("x"), ty.clone(), Arc::new(body))
}

/// Draws generated constants.
#[derive(Default, Debug)]
pub struct Fresh {
    constants: usize,
    pairings: usize,
}

impl Fresh {
    pub fn new() -> Self {
        Fresh::default()
    }

    pub fn constant(&mut self) -> Term {
        self.constants += 1;
        Term::var(&format!("z{}", self.constants))
    }

    pub fn pairing(&mut self) -> Term {
        self.pairings += 1;
        Term::var(&format!("zz{}", self.pairings))
    }
}

fn check_pair(t: &EtaLongForm, u: &EtaLongForm) -> Result<()> {
    if t.ty() != u.ty() {
        return Err(Error::TypeMismatch {
            expected: t.ty().clone(),
            found: u.ty().clone(),
        });
    }
    for term in [t.term(), u.term()] {
        if let Some(n) = term.free_vars().into_iter().next() {
            return Err(Error::NotClosed(n));
        }
    }
    if t.term() == u.term() {
        return Err(Error::SameTerm(t.term().clone()));
    }
    Ok(())
}

/// Arguments `c_1 .. c_n` on which the distinct closed terms `t` and `u`
/// yield beta-eta distinct results.
pub fn pair_separator_args(t: &EtaLongForm, u: &EtaLongForm) -> Result<Vec<Term>> {
    check_pair(t, u)?;
    pair_args(&mut Fresh::new(), t.term(), u.term(), t.ty())
}

/// `\x. x c_1 .. c_n` for the arguments of [`pair_separator_args`].
pub fn pair_separator(t: &EtaLongForm, u: &EtaLongForm) -> Result<Term> {
    check_pair(t, u)?;
    pair_separator_with(&mut Fresh::new(), t, u)
}

fn pair_separator_with(fresh: &mut Fresh, t: &EtaLongForm, u: &EtaLongForm) -> Result<Term> {
    let cs = pair_args(fresh, t.term(), u.term(), t.ty())?;
    let body = Term::apps(Term::Bound(0), cs);
    Ok(Term::Lam(Hint::new("x"), t.ty().clone(), Arc::new(body)))
}

/// Eta-long normal form of a term over generated constants.
fn canonical(t: &Term, ty: &Type) -> Result<Term> {
    let ctx = reserved_context([t])?;
    let nf = normalize(&ctx, t)?;
    Ok(eta_long(&ctx, nf.term(), ty)?.into_term())
}

fn head_index(head: &Term, n: usize, whole: &Term) -> Result<usize> {
    match head {
        Term::Bound(j) if *j < n => Ok(n - 1 - j),
        _ => Err(Error::NotEtaLong {
            term: whole.clone(),
            ty: Type::Base,
        }),
    }
}

fn pair_args(fresh: &mut Fresh, t: &Term, u: &Term, ty: &Type) -> Result<Vec<Term>> {
    if t == u {
        return Err(Error::SameTerm(t.clone()));
    }
    let arg_tys = ty.decompose();
    let n = arg_tys.len();
    let (t_binders, t_body) = t.strip_lams();
    let (u_binders, u_body) = u.strip_lams();
    if t_binders.len() != n || u_binders.len() != n {
        return Err(Error::NotEtaLong {
            term: if t_binders.len() != n { t } else { u }.clone(),
            ty: ty.clone(),
        });
    }
    let (t_head, t_args) = t_body.spine();
    let (u_head, u_args) = u_body.spine();
    let i = head_index(t_head, n, t)?;
    let i2 = head_index(u_head, n, u)?;

    let cs = if i != i2 {
        let mut cs: Vec<Term> = arg_tys.iter().map(build_c).collect();
        cs[i] = lams(&arg_tys[i].decompose(), fresh.constant());
        cs[i2] = lams(&arg_tys[i2].decompose(), fresh.constant());
        cs
    } else {
        let k = (0..t_args.len())
            .find(|&k| t_args[k] != u_args[k])
            .ok_or_else(|| Error::SameTerm(t.clone()))?;
        let head_args = arg_tys[i].decompose();
        let p = head_args.len();
        let rewrap = |binders: &[(&Hint, &Type)], d: &Term| {
            binders.iter().rev().fold(d.clone(), |acc, (h, b)| {
                Term::Lam((*h).clone(), (*b).clone(), Arc::new(acc))
            })
        };
        let e = rewrap(&t_binders, t_args[k]);
        let e2 = rewrap(&u_binders, u_args[k]);
        let e_ty = Type::arrows(arg_tys.iter().cloned(), head_args[k].clone());
        let mut rec = pair_args(fresh, &e, &e2, &e_ty)?;
        let bs = rec.split_off(n);
        let mut cs = rec;
        let pairing = fresh.pairing();
        let ys: Vec<Term> = bound_vars(p).collect();
        let body = Term::apps(
            pairing,
            [
                Term::apps(ys[k].clone(), bs),
                Term::apps(cs[i].clone(), ys.iter().cloned()),
            ],
        );
        cs[i] = lams(&head_args, body);
        cs
    };
    cs.iter()
        .zip(&arg_tys)
        .map(|(c, a)| canonical(c, a))
        .collect()
}

/// Separators `w_1 .. w_p : ty -> i` for a closed term, together with the
/// context of their generated free variables.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparatorSet {
    separators: Vec<Term>,
    context: Context,
    subject: Term,
    subject_type: Type,
}

impl SeparatorSet {
    pub fn separators(&self) -> &[Term] {
        &self.separators
    }

    pub fn context(&self) -> &Context {
        &self.context
    }

    /// The eta-long normal form of the term the set was built for.
    pub fn subject(&self) -> &Term {
        &self.subject
    }

    pub fn subject_type(&self) -> &Type {
        &self.subject_type
    }

    pub fn len(&self) -> usize {
        self.separators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.separators.is_empty()
    }
}

fn closed_eta_long(t: &Term, ty: &Type) -> Result<EtaLongForm> {
    if let Some(n) = t.free_vars().into_iter().next() {
        return Err(Error::NotClosed(n));
    }
    let ctx = Context::new();
    check_type(&ctx, t, ty)?;
    let nf = normalize(&ctx, t)?;
    eta_long(&ctx, nf.term(), ty)
}

fn check_low_order(ctx: &Context) -> Result<()> {
    for (_, ty) in ctx.iter() {
        if ty.order() > 2 {
            return Err(Error::OrderTooHigh {
                ty: ty.clone(),
                order: ty.order(),
                max: 2,
            });
        }
    }
    Ok(())
}

/// The length separator plus a pair separator against every other closed
/// term of the same length.
pub fn separator_set(t: &Term, ty: &Type, budget: &EnumerationBudget) -> Result<SeparatorSet> {
    let subject = closed_eta_long(t, ty)?;
    let len = length_of(subject.term());
    let mut fresh = Fresh::new();
    let mut separators = vec![length_separator(ty)];
    for u in enumerate_same_length(ty, len, budget)? {
        if u.term() != subject.term() {
            separators.push(pair_separator_with(&mut fresh, &subject, &u)?);
        }
    }
    let context = reserved_context(&separators)?;
    check_low_order(&context)?;
    Ok(SeparatorSet {
        separators,
        context,
        subject: subject.into_term(),
        subject_type: ty.clone(),
    })
}

/// Base set of a finite model: one class per allowed base-type term, plus a
/// bottom class holding everything else.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuotientBase {
    allowed: Vec<Term>,
    bottom: Option<Term>,
    context: Context,
}

impl QuotientBase {
    /// Builds the base for an allowed set that is closed under base-type subterms.
    pub fn new(allowed: Vec<Term>, context: Context, budget: &EnumerationBudget) -> Result<Self> {
        let bottom = bottom_representative(&allowed, &context, budget);
        Ok(QuotientBase {
            allowed,
            bottom,
            context,
        })
    }

    pub fn allowed(&self) -> &[Term] {
        &self.allowed
    }

    pub fn bottom(&self) -> Option<&Term> {
        self.bottom.as_ref()
    }

    pub fn context(&self) -> &Context {
        &self.context
    }

    /// `1 + |allowed|`.
    pub fn cardinality(&self) -> u32 {
        self.allowed.len() as u32 + 1
    }

    pub fn bottom_index(&self) -> u32 {
        self.allowed.len() as u32
    }

    /// Index of the class of a base-type term over the context.
    pub fn class_index(&self, s: &Term) -> Result<u32> {
        let ty = infer_type(&self.context, s)?;
        if !ty.is_base() {
            return Err(Error::TypeMismatch {
                expected: Type::Base,
                found: ty,
            });
        }
        let nf = normalize(&self.context, s)?;
        Ok(self
            .allowed
            .iter()
            .position(|a| a == nf.term())
            .map_or(self.bottom_index(), |i| i as u32))
    }

    /// A representative of class `idx`, when the class is inhabited.
    pub fn representative(&self, idx: u32) -> Option<&Term> {
        self.allowed
            .get(idx as usize)
            .or(if idx == self.bottom_index() {
                self.bottom.as_ref()
            } else {
                None
            })
    }

    pub fn model(&self, cap: u64) -> Result<Model> {
        Model::with_cap(self.cardinality(), cap)
    }
}

fn bottom_representative(
    allowed: &[Term],
    ctx: &Context,
    budget: &EnumerationBudget,
) -> Option<Term> {
    let horizon = allowed.iter().map(length_of).max().unwrap_or(0) + 1;
    for len in 1..=horizon {
        let b = EnumerationBudget::new(len, budget.max_count()).ok()?;
        let terms = enumerate_normal_terms(ctx, &Type::Base, &b).ok()?;
        if let Some(t) = terms.into_iter().find(|t| !allowed.contains(t.term())) {
            return Some(t.into_term());
        }
    }
    None
}

/// The allowed set `iota_subterms(nf(w_i t))` over all separators.
pub fn quotient_base(
    t: &Term,
    ws: &SeparatorSet,
    budget: &EnumerationBudget,
) -> Result<QuotientBase> {
    let mut allowed: Vec<Term> = Vec::new();
    for w in ws.separators() {
        let nf = normalize(ws.context(), &Term::app(w.clone(), t.clone()))?;
        for s in iota_subterms(&nf, ws.context()) {
            if !allowed.contains(&s) {
                allowed.push(s);
            }
        }
    }
    QuotientBase::new(allowed, ws.context().clone(), budget)
}

/// The class of a base-type term, as an element of the base set.
pub fn class_of(base: &QuotientBase, s: &Term) -> Result<Element> {
    Ok(Element::from_parts(
        Type::Base,
        BigUint::from(base.class_index(s)?),
    ))
}

/// Sends base variables to their own class and a first-order variable `x` to
/// the function mapping classes with representatives `u_1 .. u_n` to the
/// class of `x u_1 .. u_n`.
pub fn statman_assignment(base: &QuotientBase, model: &Model) -> Result<Assignment> {
    if model.base_size() != base.cardinality() {
        return Err(Error::InvalidModel(format!(
            "base set has {} classes but the model has {} elements",
            base.cardinality(),
            model.base_size()
        )));
    }
    check_low_order(base.context())?;
    let mut nu = Assignment::new();
    for (x, ty) in base.context().iter() {
        let mut args = Vec::with_capacity(ty.arity());
        let e = tabulate(base, model, &Term::Free(x.clone()), ty, &mut args)?;
        nu.insert(x.clone(), e);
    }
    Ok(nu)
}

fn tabulate(
    base: &QuotientBase,
    model: &Model,
    head: &Term,
    ty: &Type,
    args: &mut Vec<Option<Term>>,
) -> Result<Element> {
    let Some((_, cod)) = ty.split() else {
        let class = match args.iter().cloned().collect::<Option<Vec<Term>>>() {
            Some(reps) => base.class_index(&Term::apps(head.clone(), reps))?,
            None => base.bottom_index(),
        };
        return Element::base(model, class);
    };
    let mut entries = Vec::with_capacity(model.base_size() as usize);
    for d in 0..model.base_size() {
        args.push(base.representative(d).cloned());
        let e = tabulate(base, model, head, cod, args);
        args.pop();
        entries.push(e?);
    }
    Element::from_table(model, ty, &entries)
}

/// The finite model of a closed term with everything needed to decide
/// equality with it.
#[derive(Clone, Debug)]
pub struct FiniteModel {
    model: Model,
    base: QuotientBase,
    separators: SeparatorSet,
    assignment: Assignment,
}

/// Builds the finite model for `t`: separators, quotient base, model and
/// assignment.
pub fn build_finite_model(t: &Term, ty: &Type, budget: &EnumerationBudget) -> Result<FiniteModel> {
    build_finite_model_with_cap(t, ty, budget, DEFAULT_CAP)
}

pub fn build_finite_model_with_cap(
    t: &Term,
    ty: &Type,
    budget: &EnumerationBudget,
    cap: u64,
) -> Result<FiniteModel> {
    let separators = separator_set(t, ty, budget)?;
    let base = quotient_base(separators.subject(), &separators, budget)?;
    let model = base.model(cap)?;
    let assignment = statman_assignment(&base, &model)?;
    Ok(FiniteModel {
        model,
        base,
        separators,
        assignment,
    })
}

impl FiniteModel {
    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn base(&self) -> &QuotientBase {
        &self.base
    }

    pub fn separators(&self) -> &SeparatorSet {
        &self.separators
    }

    pub fn assignment(&self) -> &Assignment {
        &self.assignment
    }

    pub fn subject(&self) -> &Term {
        self.separators.subject()
    }

    pub fn subject_type(&self) -> &Type {
        self.separators.subject_type()
    }

    pub(crate) fn evaluator(&self) -> Result<Evaluator<'_>> {
        Evaluator::with_assignment(&self.model, &self.assignment)
    }

    /// Values of `(w_i s)` under the assignment, one per separator.
    pub fn profile(&self, s: &Term) -> Result<Vec<u32>> {
        let ty = infer_type(&Context::new(), s)?;
        if ty != *self.subject_type() {
            return Err(Error::TypeMismatch {
                expected: self.subject_type().clone(),
                found: ty,
            });
        }
        let ev = self.evaluator()?;
        self.separators
            .separators()
            .iter()
            .map(|w| {
                let v = settle(ev.eval(&Term::app(w.clone(), s.clone())))?;
                settle(ev.base_value(&v))
            })
            .collect()
    }

    /// Whether the closed term `u` is beta-eta equal to the subject.
    pub fn decide_eq(&self, u: &Term) -> Result<bool> {
        if let Some(n) = u.free_vars().into_iter().next() {
            return Err(Error::NotClosed(n));
        }
        Ok(self.profile(self.subject())? == self.profile(u)?)
    }
}

/// The simpler model for terms of order at most three: apply the term to
/// variables instead of separators.
#[derive(Clone, Debug)]
pub struct Order3Model {
    model: Model,
    base: QuotientBase,
    variables: Vec<Term>,
    subject: Term,
    subject_type: Type,
    assignment: Assignment,
}

pub fn build_model_order3(t: &Term, ty: &Type, budget: &EnumerationBudget) -> Result<Order3Model> {
    if ty.order() > 3 {
        return Err(Error::OrderTooHigh {
            ty: ty.clone(),
            order: ty.order(),
            max: 3,
        });
    }
    let subject = closed_eta_long(t, ty)?;
    let (binders, _) = subject.term().strip_lams();
    let mut context = Context::new();
    let mut variables = Vec::new();
    for (k, (hint, bty)) in binders.iter().enumerate() {
        let mut name = hint.0.clone();
        if name.is_reserved() || name.as_str().is_empty() || context.contains(&name) {
            name = Name::new(&format!("{}{}", binder_hint(bty).0, k + 1));
        }
        while context.contains(&name) {
            name = Name::new(&format!("{name}_"));
        }
        context.push(name.clone(), (*bty).clone())?;
        variables.push(Term::Free(name));
    }
    let applied = Term::apps(subject.term().clone(), variables.iter().cloned());
    let nf = normalize(&context, &applied)?;
    let allowed = iota_subterms(&nf, &context);
    let base = QuotientBase::new(allowed, context, budget)?;
    let model = base.model(DEFAULT_CAP)?;
    let assignment = statman_assignment(&base, &model)?;
    Ok(Order3Model {
        model,
        base,
        variables,
        subject: subject.into_term(),
        subject_type: ty.clone(),
        assignment,
    })
}

impl Order3Model {
    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn base(&self) -> &QuotientBase {
        &self.base
    }

    pub fn assignment(&self) -> &Assignment {
        &self.assignment
    }

    /// The variables the subject is applied to.
    pub fn variables(&self) -> &[Term] {
        &self.variables
    }

    fn value(&self, ev: &Evaluator<'_>, s: &Term) -> Result<u32> {
        let applied = Term::apps(s.clone(), self.variables.iter().cloned());
        let v = settle(ev.eval(&applied))?;
        settle(ev.base_value(&v))
    }

    pub fn decide_eq(&self, u: &Term) -> Result<bool> {
        if let Some(n) = u.free_vars().into_iter().next() {
            return Err(Error::NotClosed(n));
        }
        let ty = infer_type(&Context::new(), u)?;
        if ty != self.subject_type {
            return Err(Error::TypeMismatch {
                expected: self.subject_type.clone(),
                found: ty,
            });
        }
        let ev = Evaluator::with_assignment(&self.model, &self.assignment)?;
        Ok(self.value(&ev, &self.subject)? == self.value(&ev, u)?)
    }
}
