//! Signatures: type constructors and symbols with rank-1 polymorphic
//! type declarations.

use std::collections::HashMap;
use std::fmt;

use super::ty::{Type, TyConId, TyVarId, ARROW};

/// Identifier of a function symbol.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SymId(pub u32);

/// A type declaration `∀ᾱₘ. τ`: `m` bound type variables and a body whose
/// type variables are exactly `TyVarId(0) … TyVarId(m-1)` in binder order.
///
/// Declaration-local type variable ids live in their own namespace starting
/// at 0; they are instantiated away whenever the symbol is used.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TypeDecl {
    pub bound: u32,
    pub body: Type,
}

impl TypeDecl {
    pub fn mono(body: Type) -> TypeDecl {
        TypeDecl { bound: 0, body }
    }

    /// Instantiates the declaration at the given type arguments.
    pub fn instantiate(&self, args: &[Type]) -> Type {
        assert_eq!(args.len(), self.bound as usize, "type argument count mismatch");
        if args.is_empty() {
            return self.body.clone();
        }
        let map: HashMap<TyVarId, Type> = args
            .iter()
            .enumerate()
            .map(|(i, t)| (TyVarId(i as u32), t.clone()))
            .collect();
        self.body.subst(&map)
    }
}

#[derive(Clone, Debug)]
pub struct SymbolInfo {
    pub name: String,
    pub decl: TypeDecl,
}

#[derive(Clone, Debug)]
pub struct TyConInfo {
    pub name: String,
    pub arity: u32,
}

/// Error raised when signature invariants would be violated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SigError {
    DuplicateSymbol(String),
    DuplicateTyCon(String),
}

impl fmt::Display for SigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SigError::DuplicateSymbol(n) => write!(f, "symbol `{}` already declared", n),
            SigError::DuplicateTyCon(n) => write!(f, "type constructor `{}` already declared", n),
        }
    }
}

impl std::error::Error for SigError {}

/// A signature holds the type constructors and symbols of a problem.
///
/// Every signature contains the binary function constructor `→`, a nullary
/// constructor `$i`, the witness symbol `$$arb : ∀α. α`, and the
/// extensionality witness `$$diff : ∀α,β. (α→β) → (α→β) → α`.
#[derive(Clone, Debug)]
pub struct Signature {
    tycons: Vec<TyConInfo>,
    tycon_names: HashMap<String, TyConId>,
    syms: Vec<SymbolInfo>,
    sym_names: HashMap<String, SymId>,
    skolem_counter: u32,
}

/// The distinguished nullary type constructor `$i` (individuals).
pub const IOTA: TyConId = TyConId(1);
/// `$$arb : ∀α. α`, the arbitrary-element witness required by the logic.
pub const ARB: SymId = SymId(0);
/// `$$diff : ∀α,β. (α→β) → (α→β) → α`, used by the extensionality axiom.
pub const DIFF: SymId = SymId(1);

impl Signature {
    pub fn new() -> Signature {
        let mut sig = Signature {
            tycons: Vec::new(),
            tycon_names: HashMap::new(),
            syms: Vec::new(),
            sym_names: HashMap::new(),
            skolem_counter: 0,
        };
        let arrow = sig.add_tycon(">", 2).unwrap();
        assert_eq!(arrow, ARROW);
        let iota = sig.add_tycon("$i", 0).unwrap();
        assert_eq!(iota, IOTA);
        let alpha = Type::Var(TyVarId(0));
        let beta = Type::Var(TyVarId(1));
        let arb = sig
            .add_symbol("$$arb", TypeDecl { bound: 1, body: alpha.clone() })
            .unwrap();
        assert_eq!(arb, ARB);
        let fun = Type::arrow(alpha.clone(), beta.clone());
        let diff_ty = Type::arrow(fun.clone(), Type::arrow(fun, alpha.clone()));
        let diff = sig.add_symbol("$$diff", TypeDecl { bound: 2, body: diff_ty }).unwrap();
        assert_eq!(diff, DIFF);
        sig
    }

    pub fn add_tycon(&mut self, name: &str, arity: u32) -> Result<TyConId, SigError> {
        if self.tycon_names.contains_key(name) {
            return Err(SigError::DuplicateTyCon(name.to_string()));
        }
        let id = TyConId(self.tycons.len() as u32);
        self.tycons.push(TyConInfo { name: name.to_string(), arity });
        self.tycon_names.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn add_symbol(&mut self, name: &str, decl: TypeDecl) -> Result<SymId, SigError> {
        if self.sym_names.contains_key(name) {
            return Err(SigError::DuplicateSymbol(name.to_string()));
        }
        let id = SymId(self.syms.len() as u32);
        self.syms.push(SymbolInfo { name: name.to_string(), decl });
        self.sym_names.insert(name.to_string(), id);
        Ok(id)
    }

    /// Allocates a Skolem symbol with a name that cannot collide with
    /// declared symbols or earlier Skolems.
    pub fn fresh_skolem(&mut self, decl: TypeDecl) -> SymId {
        loop {
            let name = format!("sk{}", self.skolem_counter);
            self.skolem_counter += 1;
            if !self.sym_names.contains_key(name.as_str()) {
                return self.add_symbol(&name, decl).unwrap();
            }
        }
    }

    pub fn tycon(&self, id: TyConId) -> &TyConInfo {
        &self.tycons[id.0 as usize]
    }

    pub fn symbol(&self, id: SymId) -> &SymbolInfo {
        &self.syms[id.0 as usize]
    }

    pub fn find_tycon(&self, name: &str) -> Option<TyConId> {
        self.tycon_names.get(name).copied()
    }

    pub fn find_symbol(&self, name: &str) -> Option<SymId> {
        self.sym_names.get(name).copied()
    }

    pub fn num_symbols(&self) -> usize {
        self.syms.len()
    }

    pub fn num_tycons(&self) -> usize {
        self.tycons.len()
    }

    pub fn iota(&self) -> Type {
        Type::con(IOTA)
    }
}

impl Default for Signature {
    fn default() -> Self {
        Signature::new()
    }
}
