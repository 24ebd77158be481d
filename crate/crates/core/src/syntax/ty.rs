//! Rank-1 polymorphic types: type variables and constructor applications.

use std::collections::HashMap;
use std::fmt;

/// Identifier of a type variable. Ids are allocated by the term bank and
/// never reused, so an id alone identifies a variable.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct TyVarId(pub u32);

/// Identifier of a type constructor in the signature.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct TyConId(pub u32);

/// The function type constructor `→` is always the first constructor
/// registered in a signature.
pub const ARROW: TyConId = TyConId(0);

/// A type is a type variable or a constructor applied to argument types.
/// `τ → υ` is the binary constructor [`ARROW`] applied to `[τ, υ]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Type {
    Var(TyVarId),
    Con(TyConId, Vec<Type>),
}

impl Type {
    pub fn con(id: TyConId) -> Type {
        Type::Con(id, Vec::new())
    }

    pub fn arrow(from: Type, to: Type) -> Type {
        Type::Con(ARROW, vec![from, to])
    }

    /// Builds `τ₁ → ⋯ → τₙ → ρ` (right-associative).
    pub fn arrow_many(args: &[Type], result: Type) -> Type {
        args.iter()
            .rev()
            .fold(result, |acc, a| Type::arrow(a.clone(), acc))
    }

    pub fn is_arrow(&self) -> bool {
        matches!(self, Type::Con(ARROW, _))
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Type::Var(_))
    }

    /// Splits `τ₁ → ⋯ → τₙ → ρ` into `([τ₁ … τₙ], ρ)` with ρ not an arrow.
    pub fn flatten_arrows(&self) -> (Vec<Type>, Type) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Type::Con(ARROW, ab) = cur {
            args.push(ab[0].clone());
            cur = &ab[1];
        }
        (args, cur.clone())
    }

    /// Number of leading arrows, i.e. the maximum number of arguments a term
    /// of this type accepts before hitting a non-arrow (or type variable).
    pub fn arity(&self) -> usize {
        let mut n = 0;
        let mut cur = self;
        while let Type::Con(ARROW, ab) = cur {
            n += 1;
            cur = &ab[1];
        }
        n
    }

    /// Argument type of a function type.
    pub fn arg(&self) -> Option<&Type> {
        match self {
            Type::Con(ARROW, ab) => Some(&ab[0]),
            _ => None,
        }
    }

    /// Result type after applying one argument.
    pub fn result(&self) -> Option<&Type> {
        match self {
            Type::Con(ARROW, ab) => Some(&ab[1]),
            _ => None,
        }
    }

    pub fn type_vars(&self) -> Vec<TyVarId> {
        let mut acc = Vec::new();
        self.collect_type_vars(&mut acc);
        acc.sort_unstable();
        acc.dedup();
        acc
    }

    fn collect_type_vars(&self, acc: &mut Vec<TyVarId>) {
        match self {
            Type::Var(a) => acc.push(*a),
            Type::Con(_, args) => {
                for a in args {
                    a.collect_type_vars(acc);
                }
            }
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Type::Var(_) => false,
            Type::Con(_, args) => args.iter().all(Type::is_ground),
        }
    }

    /// Applies a type substitution.
    pub fn subst(&self, map: &HashMap<TyVarId, Type>) -> Type {
        if map.is_empty() {
            return self.clone();
        }
        match self {
            Type::Var(a) => map.get(a).cloned().unwrap_or_else(|| self.clone()),
            Type::Con(c, args) => Type::Con(*c, args.iter().map(|t| t.subst(map)).collect()),
        }
    }

    fn occurs(&self, v: TyVarId) -> bool {
        match self {
            Type::Var(a) => *a == v,
            Type::Con(_, args) => args.iter().any(|t| t.occurs(v)),
        }
    }
}

/// Most general unifier of two types, extending `map`. Standard first-order
/// unification with occurs check; rank-1 polymorphism has no type binders.
pub fn unify_types_into(a: &Type, b: &Type, map: &mut HashMap<TyVarId, Type>) -> bool {
    let a = a.subst(map);
    let b = b.subst(map);
    match (&a, &b) {
        (Type::Var(x), Type::Var(y)) if x == y => true,
        (Type::Var(x), t) | (t, Type::Var(x)) => {
            if t.occurs(*x) {
                return false;
            }
            // keep the map idempotent
            for img in map.values_mut() {
                let mut single = HashMap::new();
                single.insert(*x, t.clone());
                *img = img.subst(&single);
            }
            map.insert(*x, t.clone());
            true
        }
        (Type::Con(c, xs), Type::Con(d, ys)) => {
            if c != d || xs.len() != ys.len() {
                return false;
            }
            xs.iter().zip(ys).all(|(x, y)| unify_types_into(x, y, map))
        }
    }
}

/// Most general unifier of two types, or `None` if they clash.
pub fn unify_types(a: &Type, b: &Type) -> Option<HashMap<TyVarId, Type>> {
    let mut map = HashMap::new();
    unify_types_into(a, b, &mut map).then_some(map)
}

/// One-sided type matching: extends `map` so that `pattern·map = target`.
pub fn match_types_into(pattern: &Type, target: &Type, map: &mut HashMap<TyVarId, Type>) -> bool {
    match (pattern, target) {
        (Type::Var(x), t) => match map.get(x) {
            Some(bound) => bound == t,
            None => {
                map.insert(*x, t.clone());
                true
            }
        },
        (Type::Con(c, xs), Type::Con(d, ys)) => {
            c == d && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| match_types_into(x, y, map))
        }
        (Type::Con(..), Type::Var(_)) => false,
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Var(a) => write!(f, "A{}", a.0),
            Type::Con(ARROW, args) if args.len() == 2 => {
                if args[0].is_arrow() {
                    write!(f, "({}) > {}", args[0], args[1])
                } else {
                    write!(f, "{} > {}", args[0], args[1])
                }
            }
            Type::Con(c, args) => {
                write!(f, "k{}", c.0)?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{}", a)?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}
