//! Raw named λ-terms and their elaboration into canonical terms.
//!
//! Elaboration resolves names, converts bound variables to binder
//! distances, type-checks, and normalizes (the canonical constructors
//! β-reduce and η-contract on the way up). It is the bridge from parsed
//! input to kernel terms.

use std::collections::HashMap;
use std::fmt;

use super::term::{Term, TermBank, VarId};
use super::ty::Type;

/// A raw λ-term over named variables, before scope and type resolution.
#[derive(Clone, Debug, PartialEq)]
pub enum RawTerm {
    /// A name: bound variable, declared free variable, or symbol, resolved
    /// in that order.
    Name(String),
    /// A symbol with explicit type arguments.
    SymTy(String, Vec<Type>),
    App(Box<RawTerm>, Vec<RawTerm>),
    Lam(String, Type, Box<RawTerm>),
}

impl RawTerm {
    pub fn name(n: &str) -> RawTerm {
        RawTerm::Name(n.to_string())
    }

    pub fn apply(f: RawTerm, args: Vec<RawTerm>) -> RawTerm {
        if args.is_empty() {
            f
        } else {
            RawTerm::App(Box::new(f), args)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ElabError {
    UnknownName(String),
    Type(String),
    Parse(String),
}

impl fmt::Display for ElabError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElabError::UnknownName(n) => write!(f, "unknown name `{}`", n),
            ElabError::Type(m) => write!(f, "type error: {}", m),
            ElabError::Parse(m) => write!(f, "parse error: {}", m),
        }
    }
}

impl std::error::Error for ElabError {}

/// Free-variable environment for elaboration: maps names to variables.
#[derive(Default, Clone)]
pub struct VarEnv {
    vars: HashMap<String, (VarId, Type)>,
}

impl VarEnv {
    pub fn new() -> VarEnv {
        VarEnv::default()
    }

    pub fn declare(&mut self, bank: &TermBank, name: &str, ty: Type) -> VarId {
        if let Some((v, _)) = self.vars.get(name) {
            return *v;
        }
        let (v, _) = bank.fresh_var(name, ty.clone());
        self.vars.insert(name.to_string(), (v, ty));
        v
    }

    pub fn lookup(&self, name: &str) -> Option<&(VarId, Type)> {
        self.vars.get(name)
    }

    pub fn var_term(&self, bank: &TermBank, name: &str) -> Option<Term> {
        self.vars.get(name).map(|(v, ty)| bank.var(*v, ty.clone()))
    }
}

/// Elaborates and normalizes a raw term. This is the `normalize` entry
/// point: the result is the η-short β-normal canonical representative, and
/// ill-typed input is rejected.
pub fn elaborate(bank: &TermBank, env: &VarEnv, raw: &RawTerm) -> Result<Term, ElabError> {
    let mut scope: Vec<(String, Type)> = Vec::new();
    elab(bank, env, raw, &mut scope)
}

fn elab(
    bank: &TermBank,
    env: &VarEnv,
    raw: &RawTerm,
    scope: &mut Vec<(String, Type)>,
) -> Result<Term, ElabError> {
    match raw {
        RawTerm::Name(n) => {
            // innermost binder first
            for (dist, (bn, bty)) in scope.iter().rev().enumerate() {
                if bn == n {
                    return Ok(bank.bound(dist as u32, bty.clone()));
                }
            }
            if let Some((v, ty)) = env.lookup(n) {
                return Ok(bank.var(*v, ty.clone()));
            }
            let sym = bank.sig().find_symbol(n);
            match sym {
                Some(f) => {
                    let bound = bank.sig().symbol(f).decl.bound;
                    if bound != 0 {
                        return Err(ElabError::Type(format!(
                            "symbol `{}` needs {} type arguments",
                            n, bound
                        )));
                    }
                    Ok(bank.sym(f, vec![], vec![]))
                }
                None => Err(ElabError::UnknownName(n.clone())),
            }
        }
        RawTerm::SymTy(n, tyargs) => {
            let sym = bank.sig().find_symbol(n).ok_or_else(|| ElabError::UnknownName(n.clone()))?;
            bank.try_sym(sym, tyargs.clone(), vec![]).map_err(|e| ElabError::Type(e.to_string()))
        }
        RawTerm::App(f, args) => {
            let fun = elab(bank, env, f, scope)?;
            let mut eargs = Vec::with_capacity(args.len());
            for a in args {
                eargs.push(elab(bank, env, a, scope)?);
            }
            bank.try_app(fun, eargs).map_err(|e| ElabError::Type(e.to_string()))
        }
        RawTerm::Lam(x, ty, body) => {
            scope.push((x.clone(), ty.clone()));
            let b = elab(bank, env, body, scope);
            scope.pop();
            Ok(bank.lam(ty.clone(), b?))
        }
    }
}

/// Parses the compact term notation used in tests and diagnostics:
///
/// ```text
/// term  := '\' ident ':' type '.' term | atom+
/// atom  := ident | '(' term ')'
/// type  := tyatom ('>' type)?          (right-associative arrows)
/// tyatom:= ident | '(' type ')'
/// ```
///
/// Names are resolved against the scope, then the environment, then the
/// signature; `i` abbreviates the individual type `$i`.
pub fn parse_term(bank: &TermBank, env: &VarEnv, src: &str) -> Result<Term, ElabError> {
    let raw = parse_raw(bank, src)?;
    elaborate(bank, env, &raw)
}

pub fn parse_raw(bank: &TermBank, src: &str) -> Result<RawTerm, ElabError> {
    let mut p = Parser { toks: tokenize(src)?, pos: 0, bank };
    let t = p.term()?;
    if p.pos != p.toks.len() {
        return Err(ElabError::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(t)
}

pub fn parse_type(bank: &TermBank, src: &str) -> Result<Type, ElabError> {
    let mut p = Parser { toks: tokenize(src)?, pos: 0, bank };
    let t = p.ty()?;
    if p.pos != p.toks.len() {
        return Err(ElabError::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(t)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    LPar,
    RPar,
    Lambda,
    Colon,
    Dot,
    Arrow,
    Comma,
}

fn tokenize(src: &str) -> Result<Vec<Tok>, ElabError> {
    let mut toks = Vec::new();
    let mut it = src.chars().peekable();
    while let Some(&c) = it.peek() {
        match c {
            ' ' | '\t' | '\n' => {
                it.next();
            }
            '(' => {
                it.next();
                toks.push(Tok::LPar);
            }
            ')' => {
                it.next();
                toks.push(Tok::RPar);
            }
            '\\' | '^' => {
                it.next();
                toks.push(Tok::Lambda);
            }
            ':' => {
                it.next();
                toks.push(Tok::Colon);
            }
            '.' => {
                it.next();
                toks.push(Tok::Dot);
            }
            '>' => {
                it.next();
                toks.push(Tok::Arrow);
            }
            ',' => {
                it.next();
                toks.push(Tok::Comma);
            }
            c if c.is_alphanumeric() || c == '_' || c == '$' || c == '\'' => {
                let mut s = String::new();
                while let Some(&c) = it.peek() {
                    if c.is_alphanumeric() || c == '_' || c == '$' || c == '\'' {
                        s.push(c);
                        it.next();
                    } else {
                        break;
                    }
                }
                toks.push(Tok::Ident(s));
            }
            other => return Err(ElabError::Parse(format!("unexpected character `{}`", other))),
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    bank: &'a TermBank,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok) -> Result<(), ElabError> {
        match self.next() {
            Some(got) if got == t => Ok(()),
            got => Err(ElabError::Parse(format!("expected {:?}, got {:?}", t, got))),
        }
    }

    fn term(&mut self) -> Result<RawTerm, ElabError> {
        if self.peek() == Some(&Tok::Lambda) {
            self.next();
            let name = match self.next() {
                Some(Tok::Ident(n)) => n,
                got => return Err(ElabError::Parse(format!("expected binder name, got {:?}", got))),
            };
            self.expect(Tok::Colon)?;
            let ty = self.ty()?;
            self.expect(Tok::Dot)?;
            let body = self.term()?;
            return Ok(RawTerm::Lam(name, ty, Box::new(body)));
        }
        let head = self.atom()?;
        let mut args = Vec::new();
        loop {
            match self.peek() {
                Some(Tok::Ident(_)) | Some(Tok::LPar) | Some(Tok::Lambda) => {
                    if self.peek() == Some(&Tok::Lambda) {
                        // a trailing λ is the final argument
                        args.push(self.term()?);
                        break;
                    }
                    args.push(self.atom()?);
                }
                _ => break,
            }
        }
        Ok(RawTerm::apply(head, args))
    }

    fn atom(&mut self) -> Result<RawTerm, ElabError> {
        match self.next() {
            Some(Tok::Ident(n)) => Ok(RawTerm::Name(n)),
            Some(Tok::LPar) => {
                let t = self.term()?;
                self.expect(Tok::RPar)?;
                Ok(t)
            }
            got => Err(ElabError::Parse(format!("expected term, got {:?}", got))),
        }
    }

    fn ty(&mut self) -> Result<Type, ElabError> {
        let lhs = self.ty_atom()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.next();
            let rhs = self.ty()?;
            Ok(Type::arrow(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn ty_atom(&mut self) -> Result<Type, ElabError> {
        match self.next() {
            Some(Tok::Ident(n)) => {
                let name = if n == "i" { "$i".to_string() } else { n };
                let con = self
                    .bank
                    .sig()
                    .find_tycon(&name)
                    .ok_or_else(|| ElabError::UnknownName(name.clone()))?;
                Ok(Type::con(con))
            }
            Some(Tok::LPar) => {
                let t = self.ty()?;
                self.expect(Tok::RPar)?;
                Ok(t)
            }
            got => Err(ElabError::Parse(format!("expected type, got {:?}", got))),
        }
    }
}
