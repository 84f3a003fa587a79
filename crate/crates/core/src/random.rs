//! Seeded sampling of types and well-typed terms for tests and the CLI.
//!
//! Terms are built top-down with randomly inserted beta and eta redexes.
//! Generation can fail (a type may have no inhabitant over the context);
//! callers retry. No distribution is promised.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::kernel::{Context, Hint, Name, Term, Type};
use crate::rewrite::binder_hint;

pub struct Sampler {
    rng: ChaCha8Rng,
    /// Maximum nesting of generated term constructors.
    pub max_depth: usize,
    /// Maximum nesting of generated arrow types.
    pub max_type_depth: usize,
}

const NAMES: [&str; 6] = ["a", "b", "c", "d", "e", "g"];

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            max_depth: 5,
            max_type_depth: 2,
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn sample_type(&mut self) -> Type {
        let d = self.max_type_depth;
        self.type_at(d)
    }

    fn type_at(&mut self, depth: usize) -> Type {
        if depth == 0 || self.rng.random_bool(0.45) {
            Type::Base
        } else {
            let dom = self.type_at(depth - 1);
            let cod = self.type_at(depth - 1);
            Type::arrow(dom, cod)
        }
    }

    /// Up to four variables with distinct names.
    pub fn sample_context(&mut self) -> Context {
        let n = self.rng.random_range(0..=4);
        let mut ctx = Context::new();
        for name in &NAMES[..n] {
            let ty = self.sample_type();
            ctx.push(Name::new(name), ty).expect("names are distinct");
        }
        ctx
    }

    /// A term of type `ty` over `ctx`, if one was found.
    pub fn sample_term(&mut self, ctx: &Context, ty: &Type) -> Option<Term> {
        let depth = self.max_depth;
        self.term(ctx, &mut Vec::new(), ty, depth)
    }

    /// A random context, type and term, retrying until generation succeeds.
    pub fn sample_typed(&mut self) -> (Context, Term, Type) {
        loop {
            let ctx = self.sample_context();
            let ty = self.sample_type();
            if let Some(t) = self.sample_term(&ctx, &ty) {
                return (ctx, t, ty);
            }
        }
    }

    fn term(
        &mut self,
        ctx: &Context,
        env: &mut Vec<Type>,
        ty: &Type,
        depth: usize,
    ) -> Option<Term> {
        // heads whose type ends in `ty`, with the number of arguments they need
        let mut heads: Vec<(Term, Vec<Type>)> = Vec::new();
        let vars = ctx
            .iter()
            .map(|(n, t)| (Term::Free(n.clone()), t.clone()))
            .chain(
                env.iter()
                    .enumerate()
                    .map(|(k, t)| (Term::Bound(env.len() - 1 - k), t.clone())),
            );
        for (head, hty) in vars {
            let args = hty.decompose();
            let k = match args.len().checked_sub(ty.arity()) {
                Some(k) => k,
                None => continue,
            };
            if Type::arrows(args[k..].iter().cloned(), Type::Base) == *ty && (k == 0 || depth > 0) {
                heads.push((head, args[..k].to_vec()));
            }
        }

        let mut moves: Vec<u8> = Vec::new();
        if !heads.is_empty() {
            moves.extend([0, 0]);
        }
        if !ty.is_base() && depth > 0 {
            moves.push(1);
        }
        if depth > 1 {
            moves.push(2);
        }
        while !moves.is_empty() {
            let mv = moves.swap_remove(self.rng.random_range(0..moves.len()));
            let got = match mv {
                0 => {
                    let (head, args) = heads[self.rng.random_range(0..heads.len())].clone();
                    self.applied(ctx, env, head, &args, depth)
                }
                1 => {
                    let (dom, cod) = ty.split().expect("arrow");
                    env.push(dom.clone());
                    let body = self.term(ctx, env, cod, depth - 1);
                    env.pop();
                    body.map(|b| Term::Lam(binder_hint(dom), dom.clone(), Arc::new(b)))
                }
                _ => {
                    let sigma = self.type_at(1);
                    env.push(sigma.clone());
                    let body = self.term(ctx, env, ty, depth - 1);
                    env.pop();
                    match body {
                        Some(b) => self.term(ctx, env, &sigma, depth - 1).map(|arg| {
                            Term::app(Term::Lam(Hint::new("r"), sigma, Arc::new(b)), arg)
                        }),
                        None => None,
                    }
                }
            };
            if got.is_some() {
                return got;
            }
        }
        None
    }

    fn applied(
        &mut self,
        ctx: &Context,
        env: &mut Vec<Type>,
        head: Term,
        args: &[Type],
        depth: usize,
    ) -> Option<Term> {
        let mut out = head;
        for a in args {
            let arg = self.term(ctx, env, a, depth - 1)?;
            out = Term::app(out, arg);
        }
        Some(out)
    }
}
