//! First-order encodings of higher-order terms.
//!
//! Two encodings serve different purposes:
//!
//! * `encode_f` maps ground higher-order terms bijectively to ground
//!   first-order terms. Symbols are indexed by type arguments and argument
//!   count, and λ-expressions are concealed under opaque tags. Green
//!   subterms correspond exactly to first-order subterms, which makes this
//!   the redundancy and entailment oracle.
//! * `encode_o` maps arbitrary terms to untyped first-order terms for the
//!   term order: fluid terms and variables freeze into dedicated variables,
//!   λs become a `lam` symbol with an encoded binder type, bound variables
//!   become indexed De Bruijn symbols, and type arguments turn into term
//!   arguments.

use std::fmt;

use crate::syntax::{Head, SymId, Term, TermBank, TermKind, TyConId, Type, TyVarId};

/// Variables of the untyped first-order target language.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum FoVar {
    /// `z_t`: the dedicated variable of a fluid-or-variable term, keyed by
    /// its canonical form so equal subterms share one variable.
    Frozen(Term),
    /// Higher-order type variables reused as first-order term variables.
    TyVar(TyVarId),
}

/// Symbols of the first-order target languages.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum FoSym {
    /// `f^ῡ_j`: a symbol indexed by its type arguments and argument count.
    Indexed { sym: SymId, ty_tags: Vec<Type>, argc: usize },
    /// `lam_{λx.t}`: conceals the ground λ-expression `t` (F encoding).
    LamTag(Term),
    /// The `lam` symbol of the O encoding.
    Lam,
    /// `db^i_k`: a bound variable at binder distance `i` with `k` arguments.
    Db { index: u32, argc: usize },
    /// Type constructors applied as term symbols (O encoding of types).
    TyCon(TyConId),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum FoTerm {
    Var(FoVar),
    App(FoSym, Vec<FoTerm>),
}

impl FoTerm {
    pub fn constant(s: FoSym) -> FoTerm {
        FoTerm::App(s, Vec::new())
    }

    pub fn is_var(&self) -> bool {
        matches!(self, FoTerm::Var(_))
    }

    pub fn size(&self) -> usize {
        match self {
            FoTerm::Var(_) => 1,
            FoTerm::App(_, args) => 1 + args.iter().map(FoTerm::size).sum::<usize>(),
        }
    }

    /// All positions (1-based paths), root first, leftmost-outermost.
    pub fn positions(&self) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        fn go(t: &FoTerm, here: Vec<u32>, out: &mut Vec<Vec<u32>>) {
            out.push(here.clone());
            if let FoTerm::App(_, args) = t {
                for (i, a) in args.iter().enumerate() {
                    let mut p = here.clone();
                    p.push(i as u32 + 1);
                    go(a, p, out);
                }
            }
        }
        go(self, Vec::new(), &mut out);
        out
    }

    pub fn at(&self, pos: &[u32]) -> Option<&FoTerm> {
        let mut cur = self;
        for &i in pos {
            match cur {
                FoTerm::App(_, args) if i >= 1 && (i as usize) <= args.len() => {
                    cur = &args[i as usize - 1];
                }
                _ => return None,
            }
        }
        Some(cur)
    }

    pub fn vars(&self) -> Vec<&FoVar> {
        let mut out = Vec::new();
        fn go<'a>(t: &'a FoTerm, out: &mut Vec<&'a FoVar>) {
            match t {
                FoTerm::Var(v) => out.push(v),
                FoTerm::App(_, args) => args.iter().for_each(|a| go(a, out)),
            }
        }
        go(self, &mut out);
        out
    }
}

impl fmt::Display for FoTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FoTerm::Var(FoVar::Frozen(t)) => write!(f, "z[{}]", t.id()),
            FoTerm::Var(FoVar::TyVar(a)) => write!(f, "A{}", a.0),
            FoTerm::App(s, args) => {
                match s {
                    FoSym::Indexed { sym, ty_tags, argc } => {
                        write!(f, "f{}", sym.0)?;
                        if !ty_tags.is_empty() {
                            write!(f, "^{}", ty_tags.len())?;
                        }
                        write!(f, "_{}", argc)?;
                    }
                    FoSym::LamTag(t) => write!(f, "lam[{}]", t.id())?,
                    FoSym::Lam => write!(f, "lam")?,
                    FoSym::Db { index, argc } => write!(f, "db{}_{}", index, argc)?,
                    FoSym::TyCon(c) => write!(f, "k{}", c.0)?,
                }
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

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EncodeError {
    NonGround,
    NotInImage,
}

impl fmt::Display for EncodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EncodeError::NonGround => write!(f, "F encoding requires a ground term"),
            EncodeError::NotInImage => write!(f, "term is not in the image of the F encoding"),
        }
    }
}

impl std::error::Error for EncodeError {}

/// The bijective ground encoding: λs are concealed, symbols are indexed by
/// type arguments and argument count.
pub fn encode_f(t: &Term) -> Result<FoTerm, EncodeError> {
    if !t.is_ground() {
        return Err(EncodeError::NonGround);
    }
    encode_f_rec(t)
}

fn encode_f_rec(t: &Term) -> Result<FoTerm, EncodeError> {
    match t.kind() {
        TermKind::Lam(..) => Ok(FoTerm::constant(FoSym::LamTag(t.clone()))),
        TermKind::App(Head::Sym(f, tyargs), args) => {
            let inner: Result<Vec<FoTerm>, _> = args.iter().map(encode_f_rec).collect();
            Ok(FoTerm::App(
                FoSym::Indexed { sym: *f, ty_tags: tyargs.clone(), argc: args.len() },
                inner?,
            ))
        }
        // ground terms reached without entering λs have no variable heads
        TermKind::App(..) => Err(EncodeError::NonGround),
    }
}

/// Inverse of [`encode_f`].
pub fn decode_f(bank: &TermBank, t: &FoTerm) -> Result<Term, EncodeError> {
    match t {
        FoTerm::App(FoSym::LamTag(l), args) if args.is_empty() => Ok(l.clone()),
        FoTerm::App(FoSym::Indexed { sym, ty_tags, argc }, args) if args.len() == *argc => {
            let inner: Result<Vec<Term>, _> = args.iter().map(|a| decode_f(bank, a)).collect();
            bank.try_sym(*sym, ty_tags.clone(), inner?).map_err(|_| EncodeError::NotInImage)
        }
        _ => Err(EncodeError::NotInImage),
    }
}

/// O encoding of a type as an untyped first-order term.
pub fn encode_o_type(ty: &Type) -> FoTerm {
    match ty {
        Type::Var(a) => FoTerm::Var(FoVar::TyVar(*a)),
        Type::Con(c, args) => FoTerm::App(FoSym::TyCon(*c), args.iter().map(encode_o_type).collect()),
    }
}

/// Fluidity as the order encoding needs it. For λ-expressions this is
/// finer than [`Term::is_fluid`]: a λ whose binder variable does not occur
/// in the body can never η-collapse under substitution, so it is encoded
/// structurally. Still an overapproximation of exact fluidity.
fn fluid_for_order(t: &Term) -> bool {
    match t.kind() {
        TermKind::Lam(_, body) => !t.is_ground() && body.has_loose(0),
        TermKind::App(Head::Var(..), args) => !args.is_empty(),
        _ => false,
    }
}

/// O encoding of a term. Stable under α-renaming (De Bruijn symbols) and
/// under grounding substitutions (fluid subterms freeze monolithically).
pub fn encode_o(t: &Term) -> FoTerm {
    if t.is_bare_var() || fluid_for_order(t) {
        return FoTerm::Var(FoVar::Frozen(t.clone()));
    }
    match t.kind() {
        TermKind::Lam(bty, body) => {
            FoTerm::App(FoSym::Lam, vec![encode_o_type(bty), encode_o(body)])
        }
        TermKind::App(head, args) => {
            let mut inner: Vec<FoTerm> = Vec::new();
            let sym = match head {
                Head::Sym(f, tyargs) => {
                    inner.extend(tyargs.iter().map(encode_o_type));
                    FoSym::Indexed { sym: *f, ty_tags: Vec::new(), argc: args.len() }
                }
                Head::Bound(i, _) => FoSym::Db { index: *i, argc: args.len() },
                Head::Var(..) => unreachable!("variable-headed applications are fluid"),
            };
            inner.extend(args.iter().map(encode_o));
            FoTerm::App(sym, inner)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::sig::{Signature, TypeDecl};
    use crate::syntax::{parse_term, VarEnv};

    fn setup() -> (TermBank, VarEnv) {
        let mut sig = Signature::new();
        let iota = sig.iota();
        sig.add_symbol("a", TypeDecl::mono(iota.clone())).unwrap();
        sig.add_symbol("b", TypeDecl::mono(iota.clone())).unwrap();
        sig.add_symbol(
            "f",
            TypeDecl::mono(Type::arrow(iota.clone(), Type::arrow(iota.clone(), iota.clone()))),
        )
        .unwrap();
        sig.add_symbol("fu", TypeDecl::mono(Type::arrow(iota.clone(), iota.clone()))).unwrap();
        // polymorphic constant g : ∀α. α
        sig.add_symbol("g", TypeDecl { bound: 1, body: Type::Var(TyVarId(0)) }).unwrap();
        let bank = TermBank::new(sig);
        let mut env = VarEnv::new();
        let i = bank.sig().iota();
        env.declare(&bank, "Y", Type::arrow(i.clone(), i.clone()));
        (bank, env)
    }

    #[test]
    fn f_encoding_simple_application() {
        // ⌊fu a⌋ = fu₁(a₀)
        let (bank, env) = setup();
        let t = parse_term(&bank, &env, "fu a").unwrap();
        let enc = encode_f(&t).unwrap();
        match &enc {
            FoTerm::App(FoSym::Indexed { argc: 1, .. }, args) => match &args[0] {
                FoTerm::App(FoSym::Indexed { argc: 0, .. }, inner) => assert!(inner.is_empty()),
                other => panic!("unexpected encoding {:?}", other),
            },
            other => panic!("unexpected encoding {:?}", other),
        }
        assert_eq!(decode_f(&bank, &enc).unwrap(), t);
    }

    #[test]
    fn f_encoding_type_tags() {
        // ⌊g⟨κ⟩⌋ carries the type argument as a tag
        let (bank, _) = setup();
        let g = bank.sig().find_symbol("g").unwrap();
        let iota = bank.sig().iota();
        let t = bank.sym(g, vec![iota.clone()], vec![]);
        let enc = encode_f(&t).unwrap();
        match &enc {
            FoTerm::App(FoSym::Indexed { ty_tags, argc: 0, .. }, _) => {
                assert_eq!(ty_tags, &vec![iota]);
            }
            other => panic!("unexpected encoding {:?}", other),
        }
        assert_eq!(decode_f(&bank, &enc).unwrap(), t);
    }

    #[test]
    fn f_encoding_conceals_lambdas() {
        // ⌊λx. f x x⌋ = lam tag; distinct λs get distinct tags
        let (bank, env) = setup();
        let l1 = parse_term(&bank, &env, "\\x:i. f x x").unwrap();
        let l2 = parse_term(&bank, &env, "\\x:i. f x a").unwrap();
        let e1 = encode_f(&l1).unwrap();
        let e2 = encode_f(&l2).unwrap();
        assert_ne!(e1, e2);
        assert!(matches!(e1, FoTerm::App(FoSym::LamTag(_), _)));
        assert_eq!(decode_f(&bank, &e1).unwrap(), l1);
    }

    #[test]
    fn f_rejects_nonground() {
        let (bank, env) = setup();
        let t = parse_term(&bank, &env, "Y a").unwrap();
        assert_eq!(encode_f(&t), Err(EncodeError::NonGround));
    }

    #[test]
    fn paper_clause_encoding_shape() {
        // f b b ≈ f a a ∨ (λx. f x x) ≉ fu a encodes with f₂, lam tag, fu₁
        let (bank, env) = setup();
        let lhs = parse_term(&bank, &env, "f b b").unwrap();
        let e = encode_f(&lhs).unwrap();
        assert!(matches!(e, FoTerm::App(FoSym::Indexed { argc: 2, .. }, _)));
        let lam = parse_term(&bank, &env, "\\x:i. f x x").unwrap();
        assert!(matches!(encode_f(&lam).unwrap(), FoTerm::App(FoSym::LamTag(_), _)));
    }

    #[test]
    fn o_encoding_paper_example() {
        // ⌊λx:κ. fu (fu a) (sic: unary chain) with a fluid tail y b⌋
        // following the shape lam(κ, f₂(f₁(...), z_{Y b}))
        let (bank, env) = setup();
        let t = parse_term(&bank, &env, "\\x:i. f (fu a) (Y b)").unwrap();
        let enc = encode_o(&t);
        match &enc {
            FoTerm::App(FoSym::Lam, parts) => {
                assert_eq!(parts.len(), 2);
                assert!(matches!(parts[0], FoTerm::App(FoSym::TyCon(_), _)));
                match &parts[1] {
                    FoTerm::App(FoSym::Indexed { argc: 2, .. }, inner) => {
                        assert!(matches!(inner[1], FoTerm::Var(FoVar::Frozen(_))));
                    }
                    other => panic!("unexpected {:?}", other),
                }
            }
            other => panic!("unexpected {:?}", other),
        }
    }

    #[test]
    fn o_encoding_de_bruijn_symbols() {
        // λy. f2 y (λw. fu (y w)) → lam(i>i, f2₂(db⁰₀, lam(i, fu₁(db¹₁(db⁰₀)))))
        let (bank, _env) = setup();
        let mut sig_access = bank.sig_mut();
        let iota = sig_access.iota();
        let fun = Type::arrow(iota.clone(), iota.clone());
        let f2 = sig_access
            .add_symbol(
                "f2",
                TypeDecl::mono(Type::arrow(fun.clone(), Type::arrow(fun.clone(), iota.clone()))),
            )
            .unwrap();
        drop(sig_access);
        let fu = bank.sig().find_symbol("fu").unwrap();
        let b0 = bank.bound(0, fun.clone());
        let b1 = bank.bound(1, fun.clone());
        let inner_body = bank.sym(fu, vec![], vec![bank.app(b1, vec![bank.bound(0, iota.clone())])]);
        let inner = bank.lam(iota.clone(), inner_body);
        let body = bank.sym(f2, vec![], vec![b0, inner]);
        let t = bank.lam(fun.clone(), body);
        let enc = encode_o(&t);
        let shown = format!("{}", enc);
        assert!(shown.contains("db0_0"), "expected db0_0 in {}", shown);
        assert!(shown.contains("db1_1"), "expected db1_1 in {}", shown);
    }

    #[test]
    fn o_encoding_alpha_stable_and_shares_frozen_vars() {
        let (bank, env) = setup();
        let t1 = parse_term(&bank, &env, "f (Y b) (Y b)").unwrap();
        let enc = encode_o(&t1);
        let vars = enc.vars();
        assert_eq!(vars.len(), 2);
        assert_eq!(vars[0], vars[1], "equal fluid subterms share one variable");
    }

    #[test]
    fn o_type_encoding() {
        let (bank, _) = setup();
        let iota = bank.sig().iota();
        let arr = Type::arrow(iota.clone(), iota.clone());
        match encode_o_type(&arr) {
            FoTerm::App(FoSym::TyCon(c), args) => {
                assert_eq!(c, crate::syntax::ARROW);
                assert_eq!(args.len(), 2);
            }
            other => panic!("unexpected {:?}", other),
        }
        let a = TyVarId(7);
        assert_eq!(encode_o_type(&Type::Var(a)), FoTerm::Var(FoVar::TyVar(a)));
    }

    #[test]
    fn ground_first_order_term_types_erased() {
        let (bank, env) = setup();
        let t = parse_term(&bank, &env, "fu a").unwrap();
        match encode_o(&t) {
            FoTerm::App(FoSym::Indexed { argc: 1, ty_tags, .. }, args) => {
                assert!(ty_tags.is_empty());
                assert_eq!(args.len(), 1);
            }
            other => panic!("unexpected {:?}", other),
        }
    }
}
