//! Finite standard models.
//!
//! `M_i = {0, .., m-1}` and `M_{a->b}` is the full function space. An element
//! of a function space is identified by the mixed-radix code of its value
//! table: entry `d` (the value at the argument with code `d`) is the digit of
//! weight `|M_b|^d`.
//!
//! Interpretation is lazy: abstractions evaluate to closures and are only
//! tabulated when an element has to be produced, compared or used as a table
//! index, so intermediate values in huge spaces cost nothing unless inspected.

use std::cell::{OnceCell, RefCell};
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::kernel::{infer_type, Context, Name, Term, Type};

/// Default cap on space sizes and table lengths.
pub const DEFAULT_CAP: u64 = 1 << 20;

/// Codes wider than this many bits are refused outright.
const MAX_CODE_BITS: u64 = 1 << 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Model {
    base_size: u32,
    cap: u64,
}

impl Model {
    pub fn new(base_size: u32) -> Result<Self> {
        Model::with_cap(base_size, DEFAULT_CAP)
    }

    pub fn with_cap(base_size: u32, cap: u64) -> Result<Self> {
        if base_size == 0 {
            return Err(Error::InvalidModel("the base set must be non-empty".into()));
        }
        if cap == 0 {
            return Err(Error::InvalidModel("the cap must be positive".into()));
        }
        Ok(Model { base_size, cap })
    }

    pub fn base_size(&self) -> u32 {
        self.base_size
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    fn too_large(&self, ty: &Type) -> Error {
        Error::ModelTooLarge {
            what: format!("the space of type `{ty}`"),
            cap: self.cap,
        }
    }

    /// `|M_ty|`, failing when it exceeds the cap.
    pub fn space_size(&self, ty: &Type) -> Result<u64> {
        let size = match ty {
            Type::Base => u64::from(self.base_size),
            Type::Arrow(d, c) => {
                let d = self.space_size(d)?;
                let c = self.space_size(c)?;
                u32::try_from(d)
                    .ok()
                    .and_then(|d| c.checked_pow(d))
                    .ok_or_else(|| self.too_large(ty))?
            }
        };
        if size > self.cap {
            Err(self.too_large(ty))
        } else {
            Ok(size)
        }
    }

    /// Exact `|M_ty|`. Only the domains of arrows need to be within the cap.
    pub fn space_size_big(&self, ty: &Type) -> Result<BigUint> {
        match ty {
            Type::Base => Ok(BigUint::from(self.base_size)),
            Type::Arrow(d, c) => {
                let d = self.space_size(d)?;
                let c = self.space_size_big(c)?;
                if c.bits().saturating_mul(d) > MAX_CODE_BITS {
                    return Err(self.too_large(ty));
                }
                Ok(c.pow(d as u32))
            }
        }
    }
}

/// An element of `M_ty`, by code.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Element {
    ty: Type,
    code: BigUint,
}

impl Element {
    pub fn new(model: &Model, ty: Type, code: BigUint) -> Result<Self> {
        let size = model.space_size_big(&ty)?;
        if code >= size {
            return Err(Error::InvalidElement(format!(
                "code {code} is out of range for `{ty}` (space size {size})"
            )));
        }
        Ok(Element { ty, code })
    }

    pub(crate) fn from_parts(ty: Type, code: BigUint) -> Self {
        Element { ty, code }
    }

    pub fn base(model: &Model, value: u32) -> Result<Self> {
        Element::new(model, Type::Base, BigUint::from(value))
    }

    /// The function element of type `ty` whose value at argument code `d` is `entries[d]`.
    pub fn from_table(model: &Model, ty: &Type, entries: &[Element]) -> Result<Self> {
        let (dom, cod) = ty
            .split()
            .ok_or_else(|| Error::InvalidElement(format!("`{ty}` is not a function type")))?;
        let n = model.space_size(dom)?;
        if entries.len() as u64 != n {
            return Err(Error::InvalidElement(format!(
                "a table for `{ty}` needs {n} entries, got {}",
                entries.len()
            )));
        }
        let radix = model.space_size_big(cod)?;
        let mut code = BigUint::zero();
        for e in entries.iter().rev() {
            if e.ty != *cod {
                return Err(Error::TypeMismatch {
                    expected: cod.clone(),
                    found: e.ty.clone(),
                });
            }
            code = code * &radix + &e.code;
        }
        Ok(Element {
            ty: ty.clone(),
            code,
        })
    }

    /// The value table of a function element.
    pub fn table(&self, model: &Model) -> Result<Vec<Element>> {
        let (dom, cod) = self
            .ty
            .split()
            .ok_or_else(|| Error::InvalidElement("a base element has no table".into()))?;
        let n = model.space_size(dom)?;
        let radix = model.space_size_big(cod)?;
        Ok(split_digits(&self.code, &radix, n as usize)
            .into_iter()
            .map(|code| Element {
                ty: cod.clone(),
                code,
            })
            .collect())
    }

    pub fn ty(&self) -> &Type {
        &self.ty
    }

    pub fn code(&self) -> &BigUint {
        &self.code
    }

    pub fn small_code(&self) -> Option<u64> {
        self.code.to_u64()
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : {}", self.code, self.ty)
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Element", 2)?;
        st.serialize_field("type", &self.ty.to_string())?;
        match self.code.to_u64() {
            Some(c) => st.serialize_field("code", &c)?,
            None => st.serialize_field("code", &self.code.to_string())?,
        }
        st.end()
    }
}

fn split_digits(code: &BigUint, radix: &BigUint, n: usize) -> Vec<BigUint> {
    if let Some(r) = radix.to_u32().filter(|r| (2..=256).contains(r)) {
        let mut digits: Vec<BigUint> = code.to_radix_le(r).into_iter().map(BigUint::from).collect();
        if code.is_zero() {
            digits.clear();
        }
        digits.resize(n, BigUint::zero());
        return digits;
    }
    if radix.is_one() {
        return vec![BigUint::zero(); n];
    }
    let mut rest = code.clone();
    let mut digits = Vec::with_capacity(n);
    for _ in 0..n {
        digits.push(&rest % radix);
        rest /= radix;
    }
    digits
}

/// Table application: the entry of `f` at the code of `a`.
pub fn apply(model: &Model, f: &Element, a: &Element) -> Result<Element> {
    let (dom, cod) = f.ty.split().ok_or_else(|| Error::TypeMismatch {
        expected: Type::arrow(a.ty.clone(), Type::Base),
        found: f.ty.clone(),
    })?;
    if *dom != a.ty {
        return Err(Error::TypeMismatch {
            expected: dom.clone(),
            found: a.ty.clone(),
        });
    }
    let radix = model.space_size_big(cod)?;
    let index = a
        .code
        .to_u32()
        .ok_or_else(|| Error::InvalidElement("argument code out of range".into()))?;
    let code = (&f.code / radix.pow(index)) % &radix;
    Ok(Element {
        ty: cod.clone(),
        code,
    })
}

/// A map from context variables to elements of their types.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct Assignment {
    values: Vec<(Name, Element)>,
}

impl Assignment {
    pub fn new() -> Self {
        Assignment::default()
    }

    pub fn insert(&mut self, name: Name, value: Element) {
        match self.values.iter_mut().find(|(n, _)| *n == name) {
            Some(slot) => slot.1 = value,
            None => self.values.push((name, value)),
        }
    }

    pub fn get(&self, name: &Name) -> Option<&Element> {
        self.values.iter().find(|(n, _)| n == name).map(|(_, e)| e)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &Element)> {
        self.values.iter().map(|(n, e)| (n, e))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Every variable of `ctx` is mapped to an element of its declared type.
    pub fn covers(&self, ctx: &Context) -> Result<()> {
        for (n, ty) in ctx.iter() {
            match self.get(n) {
                None => {
                    return Err(Error::InvalidElement(format!(
                        "assignment does not cover `{n}`"
                    )))
                }
                Some(e) if e.ty != *ty => {
                    return Err(Error::TypeMismatch {
                        expected: ty.clone(),
                        found: e.ty.clone(),
                    })
                }
                Some(_) => {}
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Lazy evaluator

type Env = Option<Rc<EnvNode>>;

pub(crate) struct EnvNode {
    value: Value,
    next: Env,
}

fn push(env: &Env, value: Value) -> Env {
    Some(Rc::new(EnvNode {
        value,
        next: env.clone(),
    }))
}

#[derive(Clone)]
pub(crate) enum Value {
    Base(u32),
    Table(Rc<Table>),
    Closure(Rc<Closure>),
    Unknown(Rc<Unknown>),
    Thunk(Rc<Thunk>),
}

pub(crate) struct Table {
    dom: Type,
    entries: Vec<Value>,
}

pub(crate) struct Closure {
    env: Env,
    body: Arc<Term>,
}

/// An element nobody has chosen yet; its values are looked up in the
/// evaluator's answer table and requested when missing.
pub(crate) struct Unknown {
    slot: usize,
    ty: Type,
    args: Vec<usize>,
}

pub(crate) struct Thunk {
    env: Env,
    term: Arc<Term>,
    cell: OnceCell<Value>,
}

/// A request for the value of unknown `slot` at the given argument codes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Query {
    pub slot: usize,
    pub args: Vec<usize>,
}

pub(crate) enum Halt {
    Fail(Error),
    Ask(Query),
}

impl From<Error> for Halt {
    fn from(e: Error) -> Self {
        Halt::Fail(e)
    }
}

/// For evaluations without unknowns.
pub(crate) fn settle<T>(r: std::result::Result<T, Halt>) -> Result<T> {
    match r {
        Ok(v) => Ok(v),
        Err(Halt::Fail(e)) => Err(e),
        Err(Halt::Ask(q)) => panic!("evaluation without unknowns asked for {q:?}"),
    }
}

type Eval<T> = std::result::Result<T, Halt>;

pub(crate) struct Evaluator<'a> {
    model: &'a Model,
    free: HashMap<Name, Value>,
    answers: HashMap<Query, u32>,
    decoded: RefCell<HashMap<(Type, usize), Value>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(model: &'a Model) -> Self {
        Evaluator {
            model,
            free: HashMap::new(),
            answers: HashMap::new(),
            decoded: RefCell::new(HashMap::new()),
        }
    }

    pub fn with_assignment(model: &'a Model, nu: &Assignment) -> Result<Self> {
        let mut ev = Evaluator::new(model);
        for (n, e) in nu.iter() {
            let v = ev.decode_big(&e.code, &e.ty)?;
            ev.free.insert(n.clone(), v);
        }
        Ok(ev)
    }

    pub fn model(&self) -> &Model {
        self.model
    }

    pub fn bind(&mut self, name: Name, value: Value) {
        self.free.insert(name, value);
    }

    pub fn unknown(slot: usize, ty: Type) -> Value {
        Value::Unknown(Rc::new(Unknown {
            slot,
            ty,
            args: Vec::new(),
        }))
    }

    pub fn answers(&self) -> &HashMap<Query, u32> {
        &self.answers
    }

    pub fn answers_mut(&mut self) -> &mut HashMap<Query, u32> {
        &mut self.answers
    }

    pub fn eval(&self, t: &Term) -> Eval<Value> {
        self.eval_in(t, &None)
    }

    fn eval_in(&self, t: &Term, env: &Env) -> Eval<Value> {
        match t {
            Term::Free(n) => self
                .free
                .get(n)
                .cloned()
                .ok_or_else(|| Error::ill_typed(t, format!("no value for `{n}`")).into()),
            Term::Bound(i) => {
                let mut cur = env;
                for _ in 0..*i {
                    cur = match cur {
                        Some(node) => &node.next,
                        None => break,
                    };
                }
                match cur {
                    Some(node) => Ok(node.value.clone()),
                    None => Err(Error::ill_typed(t, "dangling de Bruijn index").into()),
                }
            }
            Term::Lam(_, _, b) => Ok(Value::Closure(Rc::new(Closure {
                env: env.clone(),
                body: b.clone(),
            }))),
            Term::App(f, a) => {
                let fv = self.eval_in(f, env)?;
                let av = match &**a {
                    Term::App(..) => Value::Thunk(Rc::new(Thunk {
                        env: env.clone(),
                        term: a.clone(),
                        cell: OnceCell::new(),
                    })),
                    _ => self.eval_in(a, env)?,
                };
                self.apply(&fv, av)
            }
        }
    }

    fn force(&self, v: &Value) -> Eval<Value> {
        match v {
            Value::Thunk(th) => {
                if let Some(done) = th.cell.get() {
                    return Ok(done.clone());
                }
                let inner = self.eval_in(&th.term, &th.env)?;
                let done = self.force(&inner)?;
                let _ = th.cell.set(done.clone());
                Ok(done)
            }
            Value::Unknown(u) if u.ty.is_base() => {
                let q = Query {
                    slot: u.slot,
                    args: u.args.clone(),
                };
                match self.answers.get(&q) {
                    Some(b) => Ok(Value::Base(*b)),
                    None => Err(Halt::Ask(q)),
                }
            }
            _ => Ok(v.clone()),
        }
    }

    pub fn apply(&self, f: &Value, a: Value) -> Eval<Value> {
        match self.force(f)? {
            Value::Closure(c) => self.eval_in(&c.body, &push(&c.env, a)),
            Value::Table(tb) => {
                let idx = self.small_code(&a, &tb.dom)?;
                Ok(tb.entries[idx].clone())
            }
            Value::Unknown(u) => {
                let (dom, cod) = u.ty.split().ok_or_else(|| {
                    Halt::Fail(Error::InvalidElement(
                        "applying an unknown of base type".into(),
                    ))
                })?;
                let code = self.small_code(&a, dom)?;
                let mut args = u.args.clone();
                args.push(code);
                self.force(&Value::Unknown(Rc::new(Unknown {
                    slot: u.slot,
                    ty: cod.clone(),
                    args,
                })))
            }
            Value::Base(_) => Err(Error::InvalidElement("applying a base element".into()).into()),
            Value::Thunk(_) => unreachable!("force returns a non-thunk"),
        }
    }

    /// Code of `v` at `ty`; the whole space must be within the cap.
    pub fn small_code(&self, v: &Value, ty: &Type) -> Eval<usize> {
        let v = self.force(v)?;
        match (&v, ty) {
            (Value::Base(b), Type::Base) => Ok(*b as usize),
            (_, Type::Arrow(dom, cod)) => {
                self.model.space_size(ty)?;
                let n = self.model.space_size(dom)? as usize;
                let radix = self.model.space_size(cod)? as usize;
                let mut code = 0usize;
                for d in (0..n).rev() {
                    let r = match &v {
                        Value::Table(tb) => tb.entries[d].clone(),
                        _ => self.apply(&v, self.decode_small(d, dom)?)?,
                    };
                    code = code * radix + self.small_code(&r, cod)?;
                }
                Ok(code)
            }
            _ => Err(Error::InvalidElement(format!("value does not inhabit `{ty}`")).into()),
        }
    }

    pub fn decode_small(&self, code: usize, ty: &Type) -> Result<Value> {
        match ty {
            Type::Base => Ok(Value::Base(code as u32)),
            Type::Arrow(dom, cod) => {
                let key = (ty.clone(), code);
                if let Some(v) = self.decoded.borrow().get(&key) {
                    return Ok(v.clone());
                }
                let n = self.model.space_size(dom)? as usize;
                let radix = self.model.space_size(cod)? as usize;
                let mut rest = code;
                let mut entries = Vec::with_capacity(n);
                for _ in 0..n {
                    entries.push(self.decode_small(rest % radix, cod)?);
                    rest /= radix;
                }
                let v = Value::Table(Rc::new(Table {
                    dom: (**dom).clone(),
                    entries,
                }));
                self.decoded.borrow_mut().insert(key, v.clone());
                Ok(v)
            }
        }
    }

    pub fn big_code(&self, v: &Value, ty: &Type) -> Eval<BigUint> {
        let v = self.force(v)?;
        match (&v, ty) {
            (Value::Base(b), Type::Base) => Ok(BigUint::from(*b)),
            (_, Type::Arrow(dom, cod)) => {
                let n = self.model.space_size(dom)? as usize;
                let radix = self.model.space_size_big(cod)?;
                let mut code = BigUint::zero();
                for d in (0..n).rev() {
                    let r = match &v {
                        Value::Table(tb) => tb.entries[d].clone(),
                        _ => self.apply(&v, self.decode_small(d, dom)?)?,
                    };
                    code = code * &radix + self.big_code(&r, cod)?;
                }
                Ok(code)
            }
            _ => Err(Error::InvalidElement(format!("value does not inhabit `{ty}`")).into()),
        }
    }

    pub fn decode_big(&self, code: &BigUint, ty: &Type) -> Result<Value> {
        match ty {
            Type::Base => code
                .to_u32()
                .filter(|c| *c < self.model.base_size)
                .map(Value::Base)
                .ok_or_else(|| Error::InvalidElement(format!("{code} is not a base element"))),
            Type::Arrow(dom, cod) => {
                let n = self.model.space_size(dom)? as usize;
                let radix = self.model.space_size_big(cod)?;
                let entries = split_digits(code, &radix, n)
                    .iter()
                    .map(|d| self.decode_big(d, cod))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Value::Table(Rc::new(Table {
                    dom: (**dom).clone(),
                    entries,
                })))
            }
        }
    }

    /// Extensional equality at `ty`.
    pub fn equal(&self, a: &Value, b: &Value, ty: &Type) -> Eval<bool> {
        match ty {
            Type::Base => match (self.force(a)?, self.force(b)?) {
                (Value::Base(x), Value::Base(y)) => Ok(x == y),
                _ => Err(Error::InvalidElement("non-base value at base type".into()).into()),
            },
            Type::Arrow(dom, cod) => {
                let n = self.model.space_size(dom)? as usize;
                for d in 0..n {
                    let arg = self.decode_small(d, dom)?;
                    let ra = self.apply(a, arg.clone())?;
                    let rb = self.apply(b, arg)?;
                    if !self.equal(&ra, &rb, cod)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    pub fn base_value(&self, v: &Value) -> Eval<u32> {
        match self.force(v)? {
            Value::Base(b) => Ok(b),
            _ => Err(Error::InvalidElement("expected a base element".into()).into()),
        }
    }
}

/// The interpretation of `t` under `nu`.
pub fn interpret(model: &Model, ctx: &Context, nu: &Assignment, t: &Term) -> Result<Element> {
    let ty = infer_type(ctx, t)?;
    nu.covers(ctx)?;
    let ev = Evaluator::with_assignment(model, nu)?;
    let v = settle(ev.eval(t))?;
    let code = settle(ev.big_code(&v, &ty))?;
    Ok(Element { ty, code })
}

/// Interpretation of a closed term under the empty assignment.
pub fn interpret_closed(model: &Model, t: &Term) -> Result<Element> {
    interpret(model, &Context::new(), &Assignment::new(), t)
}

/// `M |= t = u`: equal interpretations under every assignment over `ctx`.
pub fn models_eq(model: &Model, ctx: &Context, t: &Term, u: &Term) -> Result<bool> {
    let ty = infer_type(ctx, t)?;
    let uty = infer_type(ctx, u)?;
    if ty != uty {
        return Err(Error::TypeMismatch {
            expected: ty,
            found: uty,
        });
    }
    let vars: Vec<(Name, Type)> = ctx.iter().map(|(n, t)| (n.clone(), t.clone())).collect();
    let mut sizes = Vec::with_capacity(vars.len());
    let mut total: u64 = 1;
    for (_, vty) in &vars {
        let s = model.space_size(vty)?;
        total = total.saturating_mul(s);
        if total > model.cap() {
            return Err(Error::ModelTooLarge {
                what: "the assignment space".into(),
                cap: model.cap(),
            });
        }
        sizes.push(s as usize);
    }
    let mut ev = Evaluator::new(model);
    let mut codes = vec![0usize; vars.len()];
    loop {
        for ((n, vty), &c) in vars.iter().zip(&codes) {
            let v = ev.decode_small(c, vty)?;
            ev.bind(n.clone(), v);
        }
        let a = settle(ev.eval(t))?;
        let b = settle(ev.eval(u))?;
        if !settle(ev.equal(&a, &b, &ty))? {
            return Ok(false);
        }
        // first variable fastest
        let mut pos = 0;
        loop {
            if pos == codes.len() {
                return Ok(true);
            }
            codes[pos] += 1;
            if codes[pos] < sizes[pos] {
                break;
            }
            codes[pos] = 0;
            pos += 1;
        }
    }
}
