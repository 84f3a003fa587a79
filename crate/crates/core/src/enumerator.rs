//! Exhaustive generation of normal eta-long terms by type and length.

use std::collections::{HashMap, HashSet};
use std::rc::Rc;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kernel::{Context, Term, Type};
use crate::rewrite::{binder_hint, infer_closed_subterm, length_of, EtaLongForm, NormalForm};

pub const DEFAULT_MAX_COUNT: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationBudget {
    max_length: usize,
    max_count: usize,
}

impl EnumerationBudget {
    pub fn new(max_length: usize, max_count: usize) -> Result<Self> {
        if max_length == 0 {
            return Err(Error::InvalidBudget("max_length must be positive"));
        }
        if max_count == 0 {
            return Err(Error::InvalidBudget("max_count must be positive"));
        }
        Ok(EnumerationBudget {
            max_length,
            max_count,
        })
    }

    /// A budget with the default count limit.
    pub fn with_length(max_length: usize) -> Self {
        EnumerationBudget {
            max_length: max_length.max(1),
            max_count: DEFAULT_MAX_COUNT,
        }
    }

    pub fn max_length(&self) -> usize {
        self.max_length
    }

    pub fn max_count(&self) -> usize {
        self.max_count
    }
}

type Key = (Vec<Type>, Type, usize);

struct Generator<'a> {
    ctx: &'a Context,
    max_count: usize,
    memo: HashMap<Key, Rc<Vec<Term>>>,
}

impl Generator<'_> {
    fn overflow(&self) -> Error {
        Error::ResourceExceeded {
            what: "enumerated terms",
            limit: self.max_count,
        }
    }

    /// All eta-long normal terms of `ty` over `ctx` and the binders in `env`
    /// (innermost last) with length at most `len`.
    fn terms(&mut self, env: &[Type], ty: &Type, len: usize) -> Result<Rc<Vec<Term>>> {
        if len == 0 {
            return Ok(Rc::new(Vec::new()));
        }
        let key = (env.to_vec(), ty.clone(), len);
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.clone());
        }
        let binders = ty.decompose();
        let mut inner_env = env.to_vec();
        inner_env.extend(binders.iter().cloned());

        let mut heads: Vec<(Term, Type)> = self
            .ctx
            .iter()
            .map(|(n, t)| (Term::Free(n.clone()), t.clone()))
            .collect();
        let depth = inner_env.len();
        for (k, t) in inner_env.iter().enumerate() {
            heads.push((Term::Bound(depth - 1 - k), t.clone()));
        }

        let mut bodies = Vec::new();
        for (head, hty) in heads {
            let arg_tys = hty.decompose();
            if arg_tys.is_empty() {
                bodies.push(head);
                continue;
            }
            if len < 2 {
                continue;
            }
            let mut choices = Vec::with_capacity(arg_tys.len());
            let mut product: usize = 1;
            for aty in &arg_tys {
                let c = self.terms(&inner_env, aty, len - 1)?;
                product = product.saturating_mul(c.len());
                choices.push(c);
            }
            if product == 0 {
                continue;
            }
            if product > self.max_count || bodies.len() + product > self.max_count {
                return Err(self.overflow());
            }
            let mut idx = vec![0usize; choices.len()];
            'outer: loop {
                let args = idx.iter().zip(&choices).map(|(&i, c)| c[i].clone());
                bodies.push(Term::apps(head.clone(), args));
                // odometer, last coordinate fastest
                for pos in (0..idx.len()).rev() {
                    idx[pos] += 1;
                    if idx[pos] < choices[pos].len() {
                        continue 'outer;
                    }
                    idx[pos] = 0;
                }
                break;
            }
        }

        let out: Vec<Term> = bodies
            .into_iter()
            .map(|body| {
                binders.iter().rev().fold(body, |acc, b| {
                    Term::Lam(binder_hint(b), b.clone(), Arc::new(acc))
                })
            })
            .collect();
        let out = Rc::new(out);
        self.memo.insert(key, out.clone());
        Ok(out)
    }
}

/// Every normal eta-long term of type `ty` over `ctx` with length at most the
/// budget, each once, ordered by length and then by the canonical term order.
pub fn enumerate_normal_terms(
    ctx: &Context,
    ty: &Type,
    budget: &EnumerationBudget,
) -> Result<Vec<EtaLongForm>> {
    let mut gen = Generator {
        ctx,
        max_count: budget.max_count,
        memo: HashMap::new(),
    };
    let terms = gen.terms(&[], ty, budget.max_length)?;
    let mut keyed: Vec<(usize, Term)> = terms.iter().map(|t| (length_of(t), t.clone())).collect();
    keyed.sort();
    Ok(keyed
        .into_iter()
        .map(|(_, t)| EtaLongForm::trusted(t, ty.clone()))
        .collect())
}

/// Closed normal eta-long terms of `ty` whose length is exactly `len`.
pub fn enumerate_same_length(
    ty: &Type,
    len: usize,
    budget: &EnumerationBudget,
) -> Result<Vec<EtaLongForm>> {
    if len == 0 {
        return Ok(Vec::new());
    }
    let b = EnumerationBudget::new(len, budget.max_count)?;
    Ok(enumerate_normal_terms(&Context::new(), ty, &b)?
        .into_iter()
        .filter(|t| length_of(t.term()) == len)
        .collect())
}

/// Distinct base-type subterms of `t` that are well typed in `ctx` alone,
/// innermost first.
pub fn iota_subterms(t: &NormalForm, ctx: &Context) -> Vec<Term> {
    fn walk(t: &Term, ctx: &Context, seen: &mut HashSet<Term>, out: &mut Vec<Term>) {
        match t {
            Term::App(f, a) => {
                walk(f, ctx, seen, out);
                walk(a, ctx, seen, out);
            }
            Term::Lam(_, _, b) => walk(b, ctx, seen, out),
            _ => {}
        }
        if let Some(Type::Base) = infer_closed_subterm(ctx, t) {
            if seen.insert(t.clone()) {
                out.push(t.clone());
            }
        }
    }
    let mut out = Vec::new();
    walk(t.term(), ctx, &mut HashSet::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::normalize;
    use crate::syntax::{parse_term, parse_term_with};

    fn terms(v: &[EtaLongForm]) -> Vec<Term> {
        v.iter().map(|e| e.term().clone()).collect()
    }

    #[test]
    fn identity_is_the_only_closed_unary_function() {
        let b = EnumerationBudget::with_length(3);
        let got = enumerate_normal_terms(&Context::new(), &Type::first_order(1), &b).unwrap();
        assert_eq!(terms(&got), vec![parse_term("\\x:i. x").unwrap()]);
    }

    #[test]
    fn numerals_up_to_length_four() {
        let b = EnumerationBudget::with_length(4);
        let got = enumerate_normal_terms(&Context::new(), &Type::numeral(), &b).unwrap();
        assert_eq!(terms(&got), (0..4).map(Term::church).collect::<Vec<_>>());
    }

    #[test]
    fn no_closed_base_terms() {
        let b = EnumerationBudget::with_length(10);
        assert!(enumerate_normal_terms(&Context::new(), &Type::Base, &b)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn same_length_examples() {
        let b = EnumerationBudget::with_length(1);
        let got = enumerate_same_length(&Type::first_order(1), 1, &b).unwrap();
        assert_eq!(terms(&got), vec![parse_term("\\x:i. x").unwrap()]);
        let got = enumerate_same_length(&Type::numeral(), 3, &b).unwrap();
        assert_eq!(terms(&got), vec![Term::church(2)]);
        let got = enumerate_same_length(&Type::first_order(2), 1, &b).unwrap();
        let mut expected = vec![
            parse_term("\\x:i. \\y:i. x").unwrap(),
            parse_term("\\x:i. \\y:i. y").unwrap(),
        ];
        expected.sort();
        assert_eq!(terms(&got), expected);
    }

    #[test]
    fn budget_overflow_is_an_error() {
        let b = EnumerationBudget::new(6, 3).unwrap();
        assert!(matches!(
            enumerate_normal_terms(&Context::new(), &Type::numeral(), &b),
            Err(Error::ResourceExceeded { .. })
        ));
        assert!(EnumerationBudget::new(0, 3).is_err());
        assert!(EnumerationBudget::new(3, 0).is_err());
    }

    #[test]
    fn subterm_walks() {
        let ctx = Context::from_pairs([("z0", Type::Base), ("z1", Type::first_order(1))]).unwrap();
        let t = parse_term_with("z1 (z1 z0)", true).unwrap();
        let nf = normalize(&ctx, &t).unwrap();
        let expected: Vec<Term> = ["z0", "z1 z0", "z1 (z1 z0)"]
            .iter()
            .map(|s| parse_term_with(s, true).unwrap())
            .collect();
        assert_eq!(iota_subterms(&nf, &ctx), expected);

        let nf = normalize(&ctx, &Term::var("z0")).unwrap();
        assert_eq!(iota_subterms(&nf, &ctx), vec![Term::var("z0")]);

        let id = normalize(&Context::new(), &parse_term("\\x:i. x").unwrap()).unwrap();
        assert!(iota_subterms(&id, &Context::new()).is_empty());
    }
}
