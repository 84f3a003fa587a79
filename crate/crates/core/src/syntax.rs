//! Surface syntax for types, terms and contexts.
//!
//! ```text
//! type ::= "i" | type "->" type | "(" type ")"
//! term ::= ident | "\" ident ":" type "." term | term term | "(" term ")" | "#" nat
//! ident ::= [a-y][a-zA-Z0-9_]*
//! ```
//!
//! Arrows associate to the right, application to the left, and a lambda body
//! extends as far right as possible. `#n` is the Church numeral `n`.
//! Identifiers starting with `z` are reserved for generated constants.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::kernel::{Context, Name, Term, Type};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Lambda,
    Colon,
    Dot,
    Comma,
    LParen,
    RParen,
    Arrow,
    Hash,
    Ident(String),
    Nat(usize),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let mut toks = Vec::new();
    let mut it = src.char_indices().peekable();
    while let Some(&(pos, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
            continue;
        }
        let single = match c {
            '\\' | 'λ' => Some(Tok::Lambda),
            ':' => Some(Tok::Colon),
            '.' => Some(Tok::Dot),
            ',' => Some(Tok::Comma),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '#' => Some(Tok::Hash),
            _ => None,
        };
        if let Some(tok) = single {
            it.next();
            toks.push((pos, tok));
        } else if c == '-' {
            it.next();
            match it.next() {
                Some((_, '>')) => toks.push((pos, Tok::Arrow)),
                _ => return Err(parse_err(pos, "expected `->`")),
            }
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&(_, d)) = it.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                s.push(d);
                it.next();
            }
            let n = s
                .parse()
                .map_err(|_| parse_err(pos, "numeral out of range"))?;
            toks.push((pos, Tok::Nat(n)));
        } else if c.is_ascii_alphabetic() {
            let mut s = String::new();
            while let Some(&(_, d)) = it.peek() {
                if !(d.is_ascii_alphanumeric() || d == '_') {
                    break;
                }
                s.push(d);
                it.next();
            }
            toks.push((pos, Tok::Ident(s)));
        } else {
            return Err(parse_err(pos, format!("unexpected character `{c}`")));
        }
    }
    Ok(toks)
}

fn parse_err(pos: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        pos,
        message: message.into(),
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    allow_reserved: bool,
    scope: Vec<String>,
}

impl Parser {
    fn new(src: &str, allow_reserved: bool) -> Result<Self> {
        Ok(Parser {
            toks: tokenize(src)?,
            pos: 0,
            end: src.len(),
            allow_reserved,
            scope: Vec::new(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        let at = self.offset();
        match self.bump() {
            Some(t) if t == tok => Ok(()),
            _ => Err(parse_err(at, format!("expected {what}"))),
        }
    }

    fn finish(&self) -> Result<()> {
        if self.pos < self.toks.len() {
            Err(parse_err(self.offset(), "unexpected trailing input"))
        } else {
            Ok(())
        }
    }

    fn ident(&mut self) -> Result<String> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Ident(s)) => {
                let first = s.chars().next().unwrap_or('_');
                if first == 'z' && !self.allow_reserved {
                    Err(Error::ReservedName(s))
                } else if !first.is_ascii_lowercase() {
                    Err(parse_err(
                        at,
                        format!("identifier `{s}` must start with a-y"),
                    ))
                } else {
                    Ok(s)
                }
            }
            _ => Err(parse_err(at, "expected an identifier")),
        }
    }

    fn ty(&mut self) -> Result<Type> {
        let dom = self.atomic_ty()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.bump();
            let cod = self.ty()?;
            Ok(Type::arrow(dom, cod))
        } else {
            Ok(dom)
        }
    }

    fn atomic_ty(&mut self) -> Result<Type> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Ident(s)) if s == "i" => Ok(Type::Base),
            Some(Tok::LParen) => {
                let t = self.ty()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            _ => Err(parse_err(at, "expected a type")),
        }
    }

    fn term(&mut self) -> Result<Term> {
        if self.peek() == Some(&Tok::Lambda) {
            return self.lambda();
        }
        let mut head = self.atom()?;
        loop {
            match self.peek() {
                Some(Tok::Lambda) => {
                    let arg = self.lambda()?;
                    return Ok(Term::app(head, arg));
                }
                Some(Tok::Ident(_)) | Some(Tok::LParen) | Some(Tok::Hash) => {
                    let arg = self.atom()?;
                    head = Term::app(head, arg);
                }
                _ => return Ok(head),
            }
        }
    }

    fn lambda(&mut self) -> Result<Term> {
        self.expect(Tok::Lambda, "`\\`")?;
        let name = self.ident()?;
        self.expect(Tok::Colon, "`:`")?;
        let ty = self.ty()?;
        self.expect(Tok::Dot, "`.`")?;
        self.scope.push(name.clone());
        let body = self.term();
        self.scope.pop();
        Ok(Term::lam_raw(&name, ty, body?))
    }

    fn atom(&mut self) -> Result<Term> {
        let at = self.offset();
        match self.peek() {
            Some(Tok::Ident(_)) => {
                let name = self.ident()?;
                match self.scope.iter().rev().position(|s| *s == name) {
                    Some(i) => Ok(Term::Bound(i)),
                    None => Ok(Term::var(&name)),
                }
            }
            Some(Tok::LParen) => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Some(Tok::Hash) => {
                self.bump();
                match self.bump() {
                    Some(Tok::Nat(n)) => Ok(Term::church(n)),
                    _ => Err(parse_err(at, "expected a numeral after `#`")),
                }
            }
            _ => Err(parse_err(at, "expected a term")),
        }
    }
}

pub fn parse_type(src: &str) -> Result<Type> {
    let mut p = Parser::new(src, false)?;
    let t = p.ty()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_term(src: &str) -> Result<Term> {
    parse_term_with(src, false)
}

/// Like [`parse_term`], optionally accepting reserved `z` identifiers so that
/// generated terms can be read back.
pub fn parse_term_with(src: &str, allow_reserved: bool) -> Result<Term> {
    let mut p = Parser::new(src, allow_reserved)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

/// Parses `x:i, f:i->i`. The empty string is the empty context.
pub fn parse_context(src: &str) -> Result<Context> {
    let mut p = Parser::new(src, false)?;
    let mut ctx = Context::new();
    if p.peek().is_none() {
        return Ok(ctx);
    }
    loop {
        let name = p.ident()?;
        p.expect(Tok::Colon, "`:`")?;
        let ty = p.ty()?;
        ctx.push(Name::new(&name), ty)?;
        match p.peek() {
            Some(Tok::Comma) => {
                p.bump();
            }
            None => return Ok(ctx),
            _ => return Err(parse_err(p.offset(), "expected `,`")),
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Base => f.write_str("i"),
            Type::Arrow(d, c) => {
                if d.is_base() {
                    write!(f, "i -> {c}")
                } else {
                    write!(f, "({d}) -> {c}")
                }
            }
        }
    }
}

struct Printer {
    taken: BTreeSet<String>,
    scope: Vec<String>,
}

impl Printer {
    fn binder_name(&mut self, hint: &Name) -> String {
        let base = if hint.is_reserved() || hint.as_str().is_empty() {
            "v"
        } else {
            hint.as_str()
        };
        let mut candidate = base.to_string();
        let mut k = 1;
        while self.taken.contains(&candidate) || self.scope.contains(&candidate) {
            candidate = format!("{base}{k}");
            k += 1;
        }
        candidate
    }

    fn term(&mut self, t: &Term, out: &mut String) {
        match t {
            Term::Lam(h, ty, b) => {
                let name = self.binder_name(&h.0);
                out.push('\\');
                out.push_str(&name);
                out.push(':');
                out.push_str(&ty.to_string());
                out.push_str(". ");
                self.scope.push(name);
                self.term(b, out);
                self.scope.pop();
            }
            Term::App(..) => {
                let (head, args) = t.spine();
                self.atom(head, out);
                for a in args {
                    out.push(' ');
                    self.atom(a, out);
                }
            }
            _ => self.atom(t, out),
        }
    }

    fn atom(&mut self, t: &Term, out: &mut String) {
        match t {
            Term::Free(n) => out.push_str(n.as_str()),
            Term::Bound(i) => match self.scope.len().checked_sub(i + 1) {
                Some(k) => out.push_str(&self.scope[k]),
                None => out.push_str(&format!("^{i}")),
            },
            _ => {
                out.push('(');
                self.term(t, out);
                out.push(')');
            }
        }
    }
}

/// Renders a term; bound names are chosen to avoid capture and shadowing, so
/// that parsing the output yields the same term.
pub fn print_term(t: &Term) -> String {
    let mut p = Printer {
        taken: t
            .free_vars()
            .iter()
            .map(|n| n.as_str().to_string())
            .collect(),
        scope: Vec::new(),
    };
    let mut out = String::new();
    p.term(t, &mut out);
    out
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self))
    }
}

pub fn print_context(ctx: &Context) -> String {
    ctx.iter()
        .map(|(n, t)| format!("{n}:{t}"))
        .collect::<Vec<_>>()
        .join(", ")
}

impl serde::Serialize for Type {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl serde::Serialize for Term {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl serde::Serialize for Context {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(self.len()))?;
        for (n, t) in self.iter() {
            m.serialize_entry(n.as_str(), &t.to_string())?;
        }
        m.end()
    }
}
