//! Type-correct substitutions over type and term variables.

use std::collections::HashMap;
use std::fmt;

use super::term::{Head, Term, TermBank, TermKind, VarId};
use super::ty::{Type, TyVarId};

/// A finite, type-correct map from type variables to types and term
/// variables to terms. Application is capture-avoiding (bound variables are
/// nameless) and renormalizes through the canonical constructors.
///
/// Term images may contain loose bound indices; they are interpreted
/// relative to the root of the term the substitution is applied to and are
/// shifted when crossing binders. Ordinary (closed) images are unaffected.
#[derive(Clone, Default, PartialEq)]
pub struct Subst {
    pub ty: HashMap<TyVarId, Type>,
    pub tm: HashMap<VarId, Term>,
}

impl Subst {
    pub fn new() -> Subst {
        Subst::default()
    }

    pub fn is_identity(&self) -> bool {
        self.ty.is_empty() && self.tm.is_empty()
    }

    pub fn singleton(v: VarId, t: Term) -> Subst {
        let mut s = Subst::new();
        s.tm.insert(v, t);
        s
    }

    pub fn from_ty_map(ty: HashMap<TyVarId, Type>) -> Subst {
        Subst { ty, tm: HashMap::new() }
    }

    pub fn get(&self, v: VarId) -> Option<&Term> {
        self.tm.get(&v)
    }

    pub fn apply_ty(&self, ty: &Type) -> Type {
        ty.subst(&self.ty)
    }

    pub fn apply(&self, bank: &TermBank, t: &Term) -> Term {
        if self.is_identity() {
            return t.clone();
        }
        self.apply_at(bank, t, 0)
    }

    fn apply_at(&self, bank: &TermBank, t: &Term, depth: u32) -> Term {
        if self.tm.is_empty() && t.tyvars.iter().all(|a| !self.ty.contains_key(a)) {
            return t.clone();
        }
        match t.kind() {
            TermKind::App(head, args) => {
                let nargs: Vec<Term> = args.iter().map(|a| self.apply_at(bank, a, depth)).collect();
                match head {
                    Head::Var(v, vty) => match self.tm.get(v) {
                        Some(image) => {
                            let placed = bank.shift(image, 0, depth as i64);
                            bank.app(placed, nargs)
                        }
                        None => {
                            let nty = self.apply_ty(vty);
                            bank.app(bank.var(*v, nty), nargs)
                        }
                    },
                    Head::Sym(f, tyargs) => {
                        let ntyargs: Vec<Type> = tyargs.iter().map(|a| self.apply_ty(a)).collect();
                        bank.sym(*f, ntyargs, nargs)
                    }
                    Head::Bound(i, bty) => {
                        let b = bank.bound(*i, self.apply_ty(bty));
                        bank.app(b, nargs)
                    }
                }
            }
            TermKind::Lam(bty, body) => {
                let nbody = self.apply_at(bank, body, depth + 1);
                bank.lam(self.apply_ty(bty), nbody)
            }
        }
    }

    /// Composition: `t · (self.compose(other)) = (t · self) · other`.
    pub fn compose(&self, bank: &TermBank, other: &Subst) -> Subst {
        let mut ty = HashMap::new();
        for (a, img) in &self.ty {
            ty.insert(*a, other.apply_ty(img));
        }
        for (a, img) in &other.ty {
            ty.entry(*a).or_insert_with(|| img.clone());
        }
        let mut tm = HashMap::new();
        for (v, img) in &self.tm {
            tm.insert(*v, other.apply(bank, img));
        }
        for (v, img) in &other.tm {
            tm.entry(*v).or_insert_with(|| img.clone());
        }
        Subst { ty, tm }
    }

    /// Binds a variable and folds the binding through the existing images,
    /// keeping the substitution idempotent.
    pub fn bind(&mut self, bank: &TermBank, v: VarId, t: Term) {
        let single = Subst::singleton(v, t);
        for img in self.tm.values_mut() {
            *img = single.apply(bank, img);
        }
        self.tm.insert(v, single.tm.into_iter().next().unwrap().1);
    }

    /// Adds a type binding, folding it through images.
    pub fn bind_ty(&mut self, bank: &TermBank, a: TyVarId, ty: Type) {
        let mut single = Subst::new();
        single.ty.insert(a, ty.clone());
        for img in self.ty.values_mut() {
            *img = single.apply_ty(img);
        }
        for img in self.tm.values_mut() {
            *img = single.apply(bank, img);
        }
        self.ty.insert(a, ty);
    }

    pub fn merge_ty_map(&mut self, bank: &TermBank, map: &HashMap<TyVarId, Type>) {
        for (a, t) in map {
            self.bind_ty(bank, *a, t.clone());
        }
    }

    /// Restricts to the given variables, fully resolving images so the
    /// result is idempotent on that set.
    pub fn restricted_idempotent(
        &self,
        bank: &TermBank,
        vars: impl IntoIterator<Item = VarId>,
    ) -> Subst {
        let mut out = Subst { ty: self.ty.clone(), tm: HashMap::new() };
        for v in vars {
            if let Some(img) = self.tm.get(&v) {
                let mut cur = img.clone();
                // images introduced by unification bindings are acyclic
                for _ in 0..64 {
                    let next = self.apply(bank, &cur);
                    if next == cur {
                        break;
                    }
                    cur = next;
                }
                out.tm.insert(v, cur);
            }
        }
        out
    }
}

impl fmt::Debug for Subst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut tv: Vec<_> = self.ty.iter().collect();
        tv.sort_by_key(|(a, _)| **a);
        for (a, t) in tv {
            write!(f, "A{} -> {}, ", a.0, t)?;
        }
        let mut tm: Vec<_> = self.tm.iter().collect();
        tm.sort_by_key(|(v, _)| **v);
        for (v, t) in tm {
            write!(f, "X{} -> {:?}, ", v.0, t)?;
        }
        write!(f, "}}")
    }
}

/// Renames the free variables of the given terms apart from everything
/// else by mapping each to a fresh variable. Returns the renaming.
pub fn renaming_apart(bank: &TermBank, vars: &[(VarId, Type)], tyvars: &[TyVarId]) -> Subst {
    let mut s = Subst::new();
    for a in tyvars {
        s.ty.insert(*a, Type::Var(bank.fresh_tyvar()));
    }
    for (v, ty) in vars {
        let nty = s.apply_ty(ty);
        let (_, fresh) = bank.fresh_var(&bank.var_name(*v), nty);
        s.tm.insert(*v, fresh);
    }
    s
}
