//! A saturation-based superposition prover for Boolean-free clausal
//! higher-order logic (extensional, rank-1 polymorphic).
//!
//! The calculus works on βη-equivalence classes of λ-terms, restricts
//! rewriting to green subterms, and relies on complete-set higher-order
//! unification streams interleaved by a DISCOUNT-style given-clause loop.

pub mod calculus;
pub mod encoding;
pub mod extensions;
pub mod gen;
pub mod order;
pub mod unify;
pub mod syntax;

/// Entry point of the `lambdasup` binary; returns the process exit code.
pub fn cli_main() -> i32 {
    // filled in by the frontend module as it comes online
    eprintln!("lambdasup: frontend not yet wired");
    3
}
