//! Types, terms, contexts and the typing judgment.
//!
//! Terms are locally nameless: free variables carry names, bound variables
//! are de Bruijn indices. Binder names survive only as printing hints that
//! are ignored by equality, ordering and hashing, so two alpha-equivalent
//! terms are structurally identical.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};

/// A simple type: the base type `i` or an arrow.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    Base,
    Arrow(Arc<Type>, Arc<Type>),
}

impl Type {
    pub fn arrow(domain: Type, codomain: Type) -> Type {
        Type::Arrow(Arc::new(domain), Arc::new(codomain))
    }

    /// Builds `a1 -> ... -> an -> result`.
    pub fn arrows<I>(args: I, result: Type) -> Type
    where
        I: IntoIterator<Item = Type>,
        I::IntoIter: DoubleEndedIterator,
    {
        args.into_iter()
            .rev()
            .fold(result, |acc, arg| Type::arrow(arg, acc))
    }

    /// `i -> ... -> i -> i` with `arity` arguments.
    pub fn first_order(arity: usize) -> Type {
        Type::arrows(std::iter::repeat_n(Type::Base, arity), Type::Base)
    }

    /// The type of Church numerals, `i -> (i -> i) -> i`.
    pub fn numeral() -> Type {
        Type::arrows([Type::Base, Type::first_order(1)], Type::Base)
    }

    pub fn is_base(&self) -> bool {
        matches!(self, Type::Base)
    }

    pub fn split(&self) -> Option<(&Type, &Type)> {
        match self {
            Type::Base => None,
            Type::Arrow(d, c) => Some((d, c)),
        }
    }

    /// `o(i) = 1`, `o(a -> b) = max(1 + o(a), o(b))`.
    pub fn order(&self) -> usize {
        match self {
            Type::Base => 1,
            Type::Arrow(d, c) => (1 + d.order()).max(c.order()),
        }
    }

    /// The unique argument list `b1..bn` with `self = b1 -> ... -> bn -> i`.
    pub fn decompose(&self) -> Vec<Type> {
        let mut args = Vec::new();
        let mut cur = self;
        while let Type::Arrow(d, c) = cur {
            args.push((**d).clone());
            cur = c;
        }
        args
    }

    pub fn arity(&self) -> usize {
        let mut n = 0;
        let mut cur = self;
        while let Type::Arrow(_, c) = cur {
            n += 1;
            cur = c;
        }
        n
    }
}

/// A variable name. Names beginning with `z` are reserved for generated
/// constants.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name(Arc<str>);

impl Name {
    pub fn new(s: &str) -> Self {
        Name(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_reserved(&self) -> bool {
        self.0.starts_with('z')
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name::new(s)
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Printing hint for a binder. Every hint compares equal to every other.
#[derive(Clone)]
pub struct Hint(pub Name);

impl Hint {
    pub fn new(s: &str) -> Self {
        Hint(Name::new(s))
    }
}

impl PartialEq for Hint {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Hint {}

impl PartialOrd for Hint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Hint {
    fn cmp(&self, _: &Self) -> Ordering {
        Ordering::Equal
    }
}

impl Hash for Hint {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

impl fmt::Debug for Hint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Free(Name),
    /// de Bruijn index, 0 is the innermost binder.
    Bound(usize),
    App(Arc<Term>, Arc<Term>),
    Lam(Hint, Type, Arc<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Free(Name::new(name))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Arc::new(f), Arc::new(a))
    }

    pub fn apps<I: IntoIterator<Item = Term>>(head: Term, args: I) -> Term {
        args.into_iter().fold(head, Term::app)
    }

    /// Wraps an already de Bruijn-indexed body in a binder.
    pub fn lam_raw(hint: &str, ty: Type, body: Term) -> Term {
        Term::Lam(Hint::new(hint), ty, Arc::new(body))
    }

    /// `\name:ty. body`, binding the free occurrences of `name` in `body`.
    pub fn lam(name: &str, ty: Type, body: Term) -> Term {
        let name = Name::new(name);
        let body = body.close(&name, 0);
        Term::Lam(Hint(name), ty, Arc::new(body))
    }

    /// Church numeral `\x:i. \f:i->i. f (... (f x))`.
    pub fn church(n: usize) -> Term {
        let mut body = Term::Bound(1);
        for _ in 0..n {
            body = Term::app(Term::Bound(0), body);
        }
        Term::lam_raw(
            "x",
            Type::Base,
            Term::lam_raw("f", Type::first_order(1), body),
        )
    }

    /// Replaces free `name` by the bound variable of a binder sitting `depth`
    /// levels above the current position.
    fn close(&self, name: &Name, depth: usize) -> Term {
        match self {
            Term::Free(n) if n == name => Term::Bound(depth),
            Term::Free(_) | Term::Bound(_) => self.clone(),
            Term::App(f, a) => Term::app(f.close(name, depth), a.close(name, depth)),
            Term::Lam(h, ty, b) => {
                Term::Lam(h.clone(), ty.clone(), Arc::new(b.close(name, depth + 1)))
            }
        }
    }

    /// Turns free `name` into a new outermost binder of type `ty`.
    pub fn abstract_free(&self, name: &Name, ty: Type) -> Term {
        Term::Lam(Hint(name.clone()), ty, Arc::new(self.close(name, 0)))
    }

    /// Splits an application spine into its head and arguments.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Term::App(f, a) = cur {
            args.push(&**a);
            cur = f;
        }
        args.reverse();
        (cur, args)
    }

    /// Strips leading binders, returning their types (outermost first) and the body.
    pub fn strip_lams(&self) -> (Vec<(&Hint, &Type)>, &Term) {
        let mut binders = Vec::new();
        let mut cur = self;
        while let Term::Lam(h, ty, b) = cur {
            binders.push((h, ty));
            cur = b;
        }
        (binders, cur)
    }

    /// Free variable names in order of first occurrence.
    pub fn free_vars(&self) -> Vec<Name> {
        fn go(t: &Term, seen: &mut BTreeSet<Name>, out: &mut Vec<Name>) {
            match t {
                Term::Free(n) => {
                    if seen.insert(n.clone()) {
                        out.push(n.clone());
                    }
                }
                Term::Bound(_) => {}
                Term::App(f, a) => {
                    go(f, seen, out);
                    go(a, seen, out);
                }
                Term::Lam(_, _, b) => go(b, seen, out),
            }
        }
        let mut out = Vec::new();
        go(self, &mut BTreeSet::new(), &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty() && self.is_locally_closed()
    }

    pub fn mentions(&self, name: &Name) -> bool {
        match self {
            Term::Free(n) => n == name,
            Term::Bound(_) => false,
            Term::App(f, a) => f.mentions(name) || a.mentions(name),
            Term::Lam(_, _, b) => b.mentions(name),
        }
    }

    /// True when no de Bruijn index escapes the term.
    pub fn is_locally_closed(&self) -> bool {
        !self.has_loose_at_or_above(0)
    }

    /// True when some index refers to a binder at depth `>= cutoff` outside the term.
    pub(crate) fn has_loose_at_or_above(&self, cutoff: usize) -> bool {
        match self {
            Term::Free(_) => false,
            Term::Bound(i) => *i >= cutoff,
            Term::App(f, a) => f.has_loose_at_or_above(cutoff) || a.has_loose_at_or_above(cutoff),
            Term::Lam(_, _, b) => b.has_loose_at_or_above(cutoff + 1),
        }
    }

    /// True when index `target` (relative to this term) occurs.
    pub(crate) fn has_index(&self, target: usize) -> bool {
        match self {
            Term::Free(_) => false,
            Term::Bound(i) => *i == target,
            Term::App(f, a) => f.has_index(target) || a.has_index(target),
            Term::Lam(_, _, b) => b.has_index(target + 1),
        }
    }

    /// Number of variable occurrences.
    pub fn occurrences(&self) -> usize {
        match self {
            Term::Free(_) | Term::Bound(_) => 1,
            Term::App(f, a) => f.occurrences() + a.occurrences(),
            Term::Lam(_, _, b) => b.occurrences(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Free(_) | Term::Bound(_) => 1,
            Term::App(f, a) => 1 + f.size() + a.size(),
            Term::Lam(_, _, b) => 1 + b.size(),
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Debug for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An ordered typing context with pairwise distinct variables.
#[derive(Clone, Default, PartialEq, Eq, Hash, Debug)]
pub struct Context {
    vars: Vec<(Name, Type)>,
}

impl Context {
    pub fn new() -> Self {
        Context::default()
    }

    pub fn from_pairs<I, S>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Type)>,
        S: AsRef<str>,
    {
        let mut ctx = Context::new();
        for (n, ty) in pairs {
            ctx.push(Name::new(n.as_ref()), ty)?;
        }
        Ok(ctx)
    }

    pub fn push(&mut self, name: Name, ty: Type) -> Result<()> {
        if self.get(&name).is_some() {
            return Err(Error::DuplicateVariable(name));
        }
        self.vars.push((name, ty));
        Ok(())
    }

    /// Adds the binding unless an identical one is already present.
    pub fn merge_var(&mut self, name: Name, ty: Type) -> Result<()> {
        match self.get(&name) {
            Some(existing) if *existing == ty => Ok(()),
            Some(_) => Err(Error::DuplicateVariable(name)),
            None => {
                self.vars.push((name, ty));
                Ok(())
            }
        }
    }

    pub fn get(&self, name: &Name) -> Option<&Type> {
        self.vars.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    pub fn contains(&self, name: &Name) -> bool {
        self.get(name).is_some()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &Type)> {
        self.vars.iter().map(|(n, t)| (n, t))
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    /// The sub-context of variables that occur free in some of `terms`, in context order.
    pub fn restrict_to(&self, terms: &[&Term]) -> Context {
        let vars = self
            .vars
            .iter()
            .filter(|(n, _)| terms.iter().any(|t| t.mentions(n)))
            .cloned()
            .collect();
        Context { vars }
    }
}

/// The unique `a` with `ctx |- t : a`.
pub fn infer_type(ctx: &Context, t: &Term) -> Result<Type> {
    infer_in(ctx, &mut Vec::new(), t)
}

/// Typing with an explicit stack of enclosing binder types (innermost last).
pub(crate) fn infer_in(ctx: &Context, env: &mut Vec<Type>, t: &Term) -> Result<Type> {
    match t {
        Term::Free(n) => ctx
            .get(n)
            .cloned()
            .ok_or_else(|| Error::ill_typed(t, format!("unbound variable `{n}`"))),
        Term::Bound(i) => env
            .len()
            .checked_sub(i + 1)
            .map(|k| env[k].clone())
            .ok_or_else(|| Error::ill_typed(t, "dangling de Bruijn index")),
        Term::App(f, a) => {
            let fty = infer_in(ctx, env, f)?;
            let aty = infer_in(ctx, env, a)?;
            match fty {
                Type::Base => Err(Error::ill_typed(t, "applying a term of base type")),
                Type::Arrow(d, c) => {
                    if *d == aty {
                        Ok((*c).clone())
                    } else {
                        Err(Error::ill_typed(
                            t,
                            format!("argument has type `{aty}` but the function expects `{d}`"),
                        ))
                    }
                }
            }
        }
        Term::Lam(_, ty, b) => {
            env.push(ty.clone());
            let body = infer_in(ctx, env, b);
            env.pop();
            Ok(Type::arrow(ty.clone(), body?))
        }
    }
}

/// Checks `ctx |- t : expected`.
pub fn check_type(ctx: &Context, t: &Term, expected: &Type) -> Result<()> {
    let found = infer_type(ctx, t)?;
    if found == *expected {
        Ok(())
    } else {
        Err(Error::TypeMismatch {
            expected: expected.clone(),
            found,
        })
    }
}
