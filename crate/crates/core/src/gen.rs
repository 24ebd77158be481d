//! Deterministic random generation of well-typed terms, for stress and
//! property testing.

use crate::syntax::sig::TypeDecl;
use crate::syntax::{Signature, Subst, SymId, Term, TermBank, Type, VarId};

/// SplitMix64: small deterministic PRNG, good enough for test-data
/// generation and reproducible across platforms.
#[derive(Clone, Debug)]
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng(seed.wrapping_add(0x9e3779b97f4a7c15))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `0..n` (n > 0).
    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    pub fn chance(&mut self, num: u32, den: u32) -> bool {
        (self.next_u64() % den as u64) < num as u64
    }
}

/// A small fixed higher-order test signature:
/// `a b : ι`, `f : ι→ι`, `g : ι→ι→ι`, `p : (ι→ι)→ι`, `q : (ι→ι)→ι→ι`.
pub struct TestSig {
    pub bank: TermBank,
    pub iota: Type,
    pub a: SymId,
    pub b: SymId,
    pub f: SymId,
    pub g: SymId,
    pub p: SymId,
    pub q: SymId,
}

impl TestSig {
    pub fn new() -> TestSig {
        let mut sig = Signature::new();
        let iota = sig.iota();
        let fun = Type::arrow(iota.clone(), iota.clone());
        let a = sig.add_symbol("a", TypeDecl::mono(iota.clone())).unwrap();
        let b = sig.add_symbol("b", TypeDecl::mono(iota.clone())).unwrap();
        let f = sig.add_symbol("f", TypeDecl::mono(fun.clone())).unwrap();
        let g = sig
            .add_symbol("g", TypeDecl::mono(Type::arrow(iota.clone(), fun.clone())))
            .unwrap();
        let p = sig.add_symbol("p", TypeDecl::mono(Type::arrow(fun.clone(), iota.clone()))).unwrap();
        let q = sig
            .add_symbol("q", TypeDecl::mono(Type::arrow(fun.clone(), fun.clone())))
            .unwrap();
        TestSig { bank: TermBank::new(sig), iota, a, b, f, g, p, q }
    }

    /// A random ground term of the given type, with λs where the type (or a
    /// subterm position) demands a function.
    pub fn ground_term(&self, rng: &mut Rng, ty: &Type, depth: u32) -> Term {
        self.term_with_binders(rng, ty, depth, &mut Vec::new(), &[])
    }

    /// A random term that may also use the given free variables.
    pub fn open_term(&self, rng: &mut Rng, ty: &Type, depth: u32, vars: &[(VarId, Type)]) -> Term {
        self.term_with_binders(rng, ty, depth, &mut Vec::new(), vars)
    }

    fn term_with_binders(
        &self,
        rng: &mut Rng,
        ty: &Type,
        depth: u32,
        binders: &mut Vec<Type>,
        vars: &[(VarId, Type)],
    ) -> Term {
        let bank = &self.bank;
        let fun = Type::arrow(self.iota.clone(), self.iota.clone());
        if *ty == fun {
            // function-typed: an unapplied symbol, a partial application, or a λ
            let pick = if depth == 0 { rng.below(2) } else { rng.below(3) };
            match pick {
                0 => return bank.sym(self.f, vec![], vec![]),
                1 => {
                    let arg =
                        self.term_with_binders(rng, &self.iota.clone(), depth.saturating_sub(1), binders, vars);
                    return bank.sym(self.g, vec![], vec![arg]);
                }
                _ => {
                    binders.push(self.iota.clone());
                    let body =
                        self.term_with_binders(rng, &self.iota.clone(), depth - 1, binders, vars);
                    binders.pop();
                    return bank.lam(self.iota.clone(), body);
                }
            }
        }
        debug_assert_eq!(*ty, self.iota);
        // candidates returning ι
        let mut choices: Vec<u32> = vec![0, 1]; // a, b
        if depth > 0 {
            choices.extend([2, 3, 4, 5]); // f _, g _ _, p λ, q λ _
        }
        for (i, bty) in binders.iter().enumerate() {
            if *bty == self.iota {
                choices.push(100 + i as u32);
            } else if *bty == fun && depth > 0 {
                choices.push(200 + i as u32);
            }
        }
        for (i, (_, vty)) in vars.iter().enumerate() {
            if *vty == self.iota {
                choices.push(300 + i as u32);
            } else if *vty == fun && depth > 0 {
                choices.push(400 + i as u32);
            }
        }
        let c = choices[rng.below(choices.len())];
        let d = depth.saturating_sub(1);
        match c {
            0 => self.bank.sym(self.a, vec![], vec![]),
            1 => self.bank.sym(self.b, vec![], vec![]),
            2 => {
                let t = self.term_with_binders(rng, &self.iota.clone(), d, binders, vars);
                bank.sym(self.f, vec![], vec![t])
            }
            3 => {
                let t = self.term_with_binders(rng, &self.iota.clone(), d, binders, vars);
                let u = self.term_with_binders(rng, &self.iota.clone(), d, binders, vars);
                bank.sym(self.g, vec![], vec![t, u])
            }
            4 => {
                let l = self.term_with_binders(rng, &fun, d, binders, vars);
                bank.sym(self.p, vec![], vec![l])
            }
            5 => {
                let l = self.term_with_binders(rng, &fun, d, binders, vars);
                let u = self.term_with_binders(rng, &self.iota.clone(), d, binders, vars);
                bank.sym(self.q, vec![], vec![l, u])
            }
            c if (100..200).contains(&c) => {
                let i = (c - 100) as usize;
                let dist = binders.len() - 1 - i;
                bank.bound(dist as u32, self.iota.clone())
            }
            c if (200..300).contains(&c) => {
                let i = (c - 200) as usize;
                let dist = binders.len() - 1 - i;
                let head = bank.bound(dist as u32, fun.clone());
                let arg = self.term_with_binders(rng, &self.iota.clone(), d, binders, vars);
                bank.app(head, vec![arg])
            }
            c if (300..400).contains(&c) => {
                let i = (c - 300) as usize;
                bank.var(vars[i].0, vars[i].1.clone())
            }
            c => {
                let i = (c - 400) as usize;
                let head = bank.var(vars[i].0, vars[i].1.clone());
                let arg = self.term_with_binders(rng, &self.iota.clone(), d, binders, vars);
                bank.app(head, vec![arg])
            }
        }
    }

    /// A grounding substitution for the given variables.
    pub fn grounding(&self, rng: &mut Rng, vars: &[(VarId, Type)], depth: u32) -> Subst {
        let mut s = Subst::new();
        for (v, ty) in vars {
            let img = self.ground_term(rng, ty, depth);
            s.tm.insert(*v, img);
        }
        s
    }
}

impl Default for TestSig {
    fn default() -> Self {
        TestSig::new()
    }
}
