//! λ-terms as βη-equivalence classes with canonical η-short β-normal
//! representatives.
//!
//! Bound variables are nameless binder distances, free variables are named
//! ids, so α-equivalence is structural equality. All terms are hash-consed
//! in a [`TermBank`]; equality and hashing are by interned id. Canonical
//! form is maintained eagerly: the constructors β-reduce and η-contract,
//! so a [`Term`] is always η-short β-normal.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU32, AtomicU64, Ordering as AtomicOrd};
use std::sync::{Arc, Mutex, RwLock, RwLockReadGuard, RwLockWriteGuard};

use super::sig::{Signature, SymId};
use super::ty::{Type, TyVarId};

/// Identifier of a free term variable. Ids are bank-unique and never reused,
/// also across distinct types, so the id alone identifies the variable.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct VarId(pub u32);

/// Head of a spine: free variable, bound variable (binder distance), or
/// symbol with its type arguments.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Head {
    Var(VarId, Type),
    Bound(u32, Type),
    Sym(SymId, Vec<Type>),
}

impl Head {
    pub fn is_var(&self) -> bool {
        matches!(self, Head::Var(..))
    }
}

/// Structural shape of a term: a head applied to a spine of arguments, or a
/// λ-abstraction. In canonical form a λ never occurs applied.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum TermKind {
    App(Head, Vec<Term>),
    Lam(Type, Term),
}

pub struct TermData {
    pub kind: TermKind,
    pub ty: Type,
    /// Interning id; unique per bank, used for equality, hashing, and
    /// deterministic tie-breaking.
    pub id: u64,
    /// Number of head occurrences (symbols, variables, λs).
    pub weight: u32,
    /// Upper bound on loose bound-variable indices: all loose indices are
    /// `< loose`; 0 means no loose bound variables.
    pub loose: u32,
    /// Free term variables with their types, sorted by id.
    pub vars: Vec<(VarId, Type)>,
    /// Type variables occurring anywhere in the term, sorted.
    pub tyvars: Vec<TyVarId>,
}

/// A hash-consed canonical term. Cheap to clone; equality is id equality.
#[derive(Clone)]
pub struct Term(Arc<TermData>);

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        self.0.id == other.0.id
    }
}
impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state);
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Term {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.id.cmp(&other.0.id)
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Term#{}({:?})", self.0.id, self.0.kind)
    }
}

impl std::ops::Deref for Term {
    type Target = TermData;
    fn deref(&self) -> &TermData {
        &self.0
    }
}

impl Term {
    pub fn ty(&self) -> &Type {
        &self.0.ty
    }

    pub fn kind(&self) -> &TermKind {
        &self.0.kind
    }

    pub fn id(&self) -> u64 {
        self.0.id
    }

    pub fn is_ground(&self) -> bool {
        self.0.vars.is_empty() && self.0.tyvars.is_empty()
    }

    pub fn is_lam(&self) -> bool {
        matches!(self.0.kind, TermKind::Lam(..))
    }

    pub fn is_bare_var(&self) -> bool {
        matches!(&self.0.kind, TermKind::App(Head::Var(..), args) if args.is_empty())
    }

    pub fn as_var(&self) -> Option<(VarId, &Type)> {
        match &self.0.kind {
            TermKind::App(Head::Var(v, ty), args) if args.is_empty() => Some((*v, ty)),
            _ => None,
        }
    }

    pub fn head(&self) -> Option<&Head> {
        match &self.0.kind {
            TermKind::App(h, _) => Some(h),
            TermKind::Lam(..) => None,
        }
    }

    pub fn args(&self) -> &[Term] {
        match &self.0.kind {
            TermKind::App(_, args) => args,
            TermKind::Lam(..) => &[],
        }
    }

    /// Fluidity test, the overapproximation used by the calculus: a
    /// non-ground λ-expression, or a free-variable head with at least one
    /// argument.
    pub fn is_fluid(&self) -> bool {
        match &self.0.kind {
            TermKind::Lam(..) => !self.is_ground(),
            TermKind::App(Head::Var(..), args) => !args.is_empty(),
            _ => false,
        }
    }

    pub fn contains_var(&self, v: VarId) -> bool {
        self.0.vars.binary_search_by_key(&v, |(x, _)| *x).is_ok()
    }

    /// True if the loose bound index `idx` occurs in the term.
    pub fn has_loose(&self, idx: u32) -> bool {
        if self.0.loose <= idx {
            return false;
        }
        match &self.0.kind {
            TermKind::App(head, args) => {
                matches!(head, Head::Bound(i, _) if *i == idx)
                    || args.iter().any(|a| a.has_loose(idx))
            }
            TermKind::Lam(_, body) => body.has_loose(idx + 1),
        }
    }
}

/// Merges two sorted var lists.
fn merge_vars(into: &mut Vec<(VarId, Type)>, from: &[(VarId, Type)]) {
    for (v, ty) in from {
        if into.binary_search_by_key(v, |(x, _)| *x).is_err() {
            let pos = into.partition_point(|(x, _)| x < v);
            into.insert(pos, (*v, ty.clone()));
        }
    }
}

fn merge_tyvars(into: &mut Vec<TyVarId>, from: &[TyVarId]) {
    for a in from {
        if into.binary_search(a).is_err() {
            let pos = into.partition_point(|x| x < a);
            into.insert(pos, *a);
        }
    }
}

struct BankInner {
    sig: RwLock<Signature>,
    interned: Mutex<HashMap<TermKind, Term>>,
    next_term_id: AtomicU64,
    next_var: AtomicU32,
    next_tyvar: AtomicU32,
    var_names: Mutex<HashMap<VarId, String>>,
}

/// Shared factory and interning table for terms. Clones share the table.
#[derive(Clone)]
pub struct TermBank(Arc<BankInner>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermError {
    TypeMismatch { expected: String, found: String, context: String },
    NotAFunction(String),
    InvalidPosition,
}

impl fmt::Display for TermError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermError::TypeMismatch { expected, found, context } => {
                write!(f, "type mismatch in {}: expected {}, found {}", context, expected, found)
            }
            TermError::NotAFunction(t) => write!(f, "term of non-functional type applied: {}", t),
            TermError::InvalidPosition => write!(f, "invalid position"),
        }
    }
}

impl std::error::Error for TermError {}

impl TermBank {
    pub fn new(sig: Signature) -> TermBank {
        TermBank(Arc::new(BankInner {
            sig: RwLock::new(sig),
            interned: Mutex::new(HashMap::new()),
            next_term_id: AtomicU64::new(0),
            next_var: AtomicU32::new(0),
            next_tyvar: AtomicU32::new(0),
            var_names: Mutex::new(HashMap::new()),
        }))
    }

    pub fn sig(&self) -> RwLockReadGuard<'_, Signature> {
        self.0.sig.read().unwrap()
    }

    pub fn sig_mut(&self) -> RwLockWriteGuard<'_, Signature> {
        self.0.sig.write().unwrap()
    }

    pub fn fresh_var(&self, name_hint: &str, ty: Type) -> (VarId, Term) {
        let id = VarId(self.0.next_var.fetch_add(1, AtomicOrd::Relaxed));
        let name = if name_hint.is_empty() { format!("X{}", id.0) } else { name_hint.to_string() };
        self.0.var_names.lock().unwrap().insert(id, name);
        (id, self.var(id, ty))
    }

    pub fn fresh_tyvar(&self) -> TyVarId {
        // The parser and declaration instantiation use small local ids;
        // bank-allocated type variables start high to stay disjoint.
        TyVarId(1_000_000 + self.0.next_tyvar.fetch_add(1, AtomicOrd::Relaxed))
    }

    pub fn var_name(&self, v: VarId) -> String {
        self.0
            .var_names
            .lock()
            .unwrap()
            .get(&v)
            .cloned()
            .unwrap_or_else(|| format!("X{}", v.0))
    }

    fn intern(&self, kind: TermKind, ty: Type) -> Term {
        let mut table = self.0.interned.lock().unwrap();
        if let Some(t) = table.get(&kind) {
            return t.clone();
        }
        let (weight, loose, vars, tyvars) = match &kind {
            TermKind::App(head, args) => {
                let mut weight = 1u32;
                let mut loose = 0u32;
                let mut vars = Vec::new();
                let mut tyvars = Vec::new();
                match head {
                    Head::Var(v, vty) => {
                        vars.push((*v, vty.clone()));
                        merge_tyvars(&mut tyvars, &vty.type_vars());
                    }
                    Head::Bound(i, bty) => {
                        loose = i + 1;
                        merge_tyvars(&mut tyvars, &bty.type_vars());
                    }
                    Head::Sym(_, tyargs) => {
                        for t in tyargs {
                            merge_tyvars(&mut tyvars, &t.type_vars());
                        }
                    }
                }
                for a in args {
                    weight += a.weight;
                    loose = loose.max(a.loose);
                    merge_vars(&mut vars, &a.vars);
                    merge_tyvars(&mut tyvars, &a.tyvars);
                }
                (weight, loose, vars, tyvars)
            }
            TermKind::Lam(bty, body) => {
                let mut tyvars = bty.type_vars();
                merge_tyvars(&mut tyvars, &body.tyvars);
                (body.weight + 1, body.loose.saturating_sub(1), body.vars.clone(), tyvars)
            }
        };
        let id = self.0.next_term_id.fetch_add(1, AtomicOrd::Relaxed);
        let term = Term(Arc::new(TermData { kind: kind.clone(), ty, id, weight, loose, vars, tyvars }));
        table.insert(kind, term.clone());
        term
    }

    pub fn var(&self, v: VarId, ty: Type) -> Term {
        self.intern(TermKind::App(Head::Var(v, ty.clone()), Vec::new()), ty)
    }

    pub fn bound(&self, idx: u32, ty: Type) -> Term {
        self.intern(TermKind::App(Head::Bound(idx, ty.clone()), Vec::new()), ty)
    }

    /// Symbol head applied to type arguments and a spine of term arguments.
    /// Panics on arity or type errors; use [`TermBank::try_sym`] for checked
    /// construction.
    pub fn sym(&self, f: SymId, tyargs: Vec<Type>, args: Vec<Term>) -> Term {
        self.try_sym(f, tyargs, args).unwrap()
    }

    pub fn try_sym(&self, f: SymId, tyargs: Vec<Type>, args: Vec<Term>) -> Result<Term, TermError> {
        let head_ty = {
            let sig = self.sig();
            let decl = &sig.symbol(f).decl;
            if decl.bound as usize != tyargs.len() {
                return Err(TermError::TypeMismatch {
                    expected: format!("{} type arguments", decl.bound),
                    found: format!("{}", tyargs.len()),
                    context: sig.symbol(f).name.clone(),
                });
            }
            decl.instantiate(&tyargs)
        };
        let head = self.intern(TermKind::App(Head::Sym(f, tyargs), Vec::new()), head_ty);
        self.try_app(head, args)
    }

    /// Application with β-normalization. The function term and arguments
    /// must already be canonical.
    pub fn app(&self, fun: Term, args: Vec<Term>) -> Term {
        self.try_app(fun, args).unwrap()
    }

    pub fn try_app(&self, fun: Term, args: Vec<Term>) -> Result<Term, TermError> {
        if args.is_empty() {
            return Ok(fun);
        }
        let mut ty = fun.ty().clone();
        for a in args.iter() {
            match ty.clone() {
                Type::Con(super::ty::ARROW, ab) => {
                    if &ab[0] != a.ty() {
                        return Err(TermError::TypeMismatch {
                            expected: format!("{}", ab[0]),
                            found: format!("{}", a.ty()),
                            context: "application".into(),
                        });
                    }
                    ty = ab[1].clone();
                }
                other => return Err(TermError::NotAFunction(format!("{}", other))),
            }
        }
        Ok(self.app_unchecked(fun, args))
    }

    fn app_unchecked(&self, fun: Term, mut args: Vec<Term>) -> Term {
        if args.is_empty() {
            return fun;
        }
        match fun.kind() {
            TermKind::Lam(_, body) => {
                let first = args.remove(0);
                let reduced = self.bsubst(body, 0, &first);
                self.app_unchecked(reduced, args)
            }
            TermKind::App(head, existing) => {
                let mut all = existing.clone();
                let mut ty = fun.ty().clone();
                for _ in &args {
                    ty = ty.result().expect("application of non-function").clone();
                }
                all.append(&mut args);
                self.intern(TermKind::App(head.clone(), all), ty)
            }
        }
    }

    /// λ-abstraction with η-contraction: `λ. t #0` collapses to `t` when
    /// `#0` does not occur loose in `t`.
    pub fn lam(&self, arg_ty: Type, body: Term) -> Term {
        if let TermKind::App(head, args) = body.kind() {
            if let Some((last, init)) = args.split_last() {
                if matches!(last.kind(), TermKind::App(Head::Bound(0, _), a) if a.is_empty()) {
                    let head_loose = matches!(head, Head::Bound(0, _));
                    if !head_loose && !init.iter().any(|a| a.has_loose(0)) {
                        let shead = match head {
                            Head::Bound(i, t) => Head::Bound(i - 1, t.clone()),
                            h => h.clone(),
                        };
                        let sargs: Vec<Term> = init.iter().map(|a| self.shift(a, 0, -1)).collect();
                        let ty = Type::arrow(arg_ty, body.ty().clone());
                        return self.intern(TermKind::App(shead, sargs), ty);
                    }
                }
            }
        }
        let ty = Type::arrow(arg_ty.clone(), body.ty().clone());
        self.intern(TermKind::Lam(arg_ty, body), ty)
    }

    /// Builds `λ … λ. body` over the given binder types (outermost first).
    pub fn lam_many(&self, binders: &[Type], body: Term) -> Term {
        binders.iter().rev().fold(body, |b, ty| self.lam(ty.clone(), b))
    }

    /// Interns an application node with a caller-supplied type, skipping
    /// argument-type validation. Used to assemble rule skeletons, which are
    /// momentarily ill-typed until their unifier is applied.
    pub(crate) fn app_raw(&self, head: Head, args: Vec<Term>, ty: Type) -> Term {
        self.intern(TermKind::App(head, args), ty)
    }

    /// Shifts loose bound indices ≥ `cutoff` by `delta`.
    pub fn shift(&self, t: &Term, cutoff: u32, delta: i64) -> Term {
        if t.loose <= cutoff || delta == 0 {
            return t.clone();
        }
        match t.kind() {
            TermKind::App(head, args) => {
                let nhead = match head {
                    Head::Bound(i, ty) if *i >= cutoff => {
                        Head::Bound((*i as i64 + delta) as u32, ty.clone())
                    }
                    h => h.clone(),
                };
                let nargs = args.iter().map(|a| self.shift(a, cutoff, delta)).collect();
                self.intern(TermKind::App(nhead, nargs), t.ty().clone())
            }
            TermKind::Lam(bty, body) => {
                let nbody = self.shift(body, cutoff + 1, delta);
                self.intern(TermKind::Lam(bty.clone(), nbody), t.ty().clone())
            }
        }
    }

    /// β-substitution: replaces loose index `j` by `arg` (shifted into
    /// place) and decrements loose indices above `j`. Renormalizes.
    fn bsubst(&self, t: &Term, j: u32, arg: &Term) -> Term {
        if t.loose <= j {
            return t.clone();
        }
        match t.kind() {
            TermKind::App(head, args) => {
                let nargs: Vec<Term> = args.iter().map(|a| self.bsubst(a, j, arg)).collect();
                match head {
                    Head::Bound(i, _) if *i == j => {
                        let placed = self.shift(arg, 0, j as i64);
                        self.app_unchecked(placed, nargs)
                    }
                    Head::Bound(i, ty) if *i > j => {
                        let ty2 = ty.clone();
                        self.intern(TermKind::App(Head::Bound(i - 1, ty2), nargs), t.ty().clone())
                    }
                    h => self.intern(TermKind::App(h.clone(), nargs), t.ty().clone()),
                }
            }
            TermKind::Lam(bty, body) => {
                let nbody = self.bsubst(body, j + 1, arg);
                self.lam(bty.clone(), nbody)
            }
        }
    }

    /// Opens a λ body: replaces loose index 0 by the free variable `x` and
    /// shifts the remaining loose indices down.
    pub fn open_with(&self, body: &Term, x: VarId, xty: Type) -> Term {
        let var = self.var(x, xty);
        self.bsubst(body, 0, &var)
    }

    /// Inverse of [`TermBank::open_with`]: abstracts free occurrences of `x`
    /// as the loose index `depth` and shifts loose indices ≥ `depth` up.
    pub fn close_var(&self, t: &Term, x: VarId, depth: u32) -> Term {
        if !t.contains_var(x) && t.loose <= depth {
            return t.clone();
        }
        match t.kind() {
            TermKind::App(head, args) => {
                let nargs: Vec<Term> = args.iter().map(|a| self.close_var(a, x, depth)).collect();
                match head {
                    Head::Var(v, ty) if *v == x => {
                        let b = self.bound(depth, ty.clone());
                        self.app_unchecked(b, nargs)
                    }
                    Head::Bound(i, ty) if *i >= depth => {
                        self.intern(TermKind::App(Head::Bound(i + 1, ty.clone()), nargs), t.ty().clone())
                    }
                    h => self.intern(TermKind::App(h.clone(), nargs), t.ty().clone()),
                }
            }
            TermKind::Lam(bty, body) => {
                let nbody = self.close_var(body, x, depth + 1);
                self.intern(TermKind::Lam(bty.clone(), nbody), t.ty().clone())
            }
        }
    }

    /// η-expands a term of functional type into a λ whose body applies it
    /// to the new bound variable. Used by unification; ordinary terms stay
    /// η-short.
    pub fn eta_expand_once(&self, t: &Term) -> (Type, Term) {
        let arg_ty = t.ty().arg().expect("eta expansion of non-function").clone();
        let shifted = self.shift(t, 0, 1);
        let b0 = self.bound(0, arg_ty.clone());
        (arg_ty, self.app_unchecked(shifted, vec![b0]))
    }
}

impl fmt::Debug for TermBank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TermBank")
    }
}
