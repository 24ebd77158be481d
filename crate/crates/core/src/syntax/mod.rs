//! The term kernel: types, signatures, canonical λ-terms, substitutions,
//! literals, and clauses.

pub mod clause;
pub mod position;
pub mod print;
pub mod raw;
pub mod sig;
pub mod subst;
pub mod term;
pub mod ty;

pub use clause::{occurs_deeply, Clause, ClauseId, Derivation, Literal};
pub use position::{
    green_positions, green_subterm_at, green_subterms, orange_subterm_at, orange_subterms,
    replace_green, GreenPos, OrangeOcc, OrangePos, OrangeStep,
};
pub use raw::{elaborate, parse_raw, parse_term, parse_type, ElabError, RawTerm, VarEnv};
pub use sig::{SigError, Signature, SymId, TypeDecl, ARB, DIFF, IOTA};
pub use subst::{renaming_apart, Subst};
pub use term::{Head, Term, TermBank, TermError, TermKind, VarId};
pub use ty::{match_types_into, unify_types, unify_types_into, Type, TyConId, TyVarId, ARROW};
