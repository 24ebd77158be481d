//! Desk-scale completeness probe for the unifier: enumerate all ground
//! unifiers of small problems by brute force and check each is an instance
//! of some emitted unifier.

use lambdasup::gen::Rng;
use lambdasup::syntax::sig::TypeDecl;
use lambdasup::syntax::{Signature, Subst, Term, TermBank, Type, VarId};
use lambdasup::unify::{csu, UnifConfig};

struct DeskSig {
    bank: TermBank,
    iota: Type,
    a: lambdasup::syntax::SymId,
    b: lambdasup::syntax::SymId,
    f: lambdasup::syntax::SymId,
    g: lambdasup::syntax::SymId,
}

fn desk_sig() -> DeskSig {
    let mut sig = Signature::new();
    let iota = sig.iota();
    let a = sig.add_symbol("a", TypeDecl::mono(iota.clone())).unwrap();
    let b = sig.add_symbol("b", TypeDecl::mono(iota.clone())).unwrap();
    let f = sig
        .add_symbol("f", TypeDecl::mono(Type::arrow(iota.clone(), iota.clone())))
        .unwrap();
    let g = sig
        .add_symbol(
            "g",
            TypeDecl::mono(Type::arrow(iota.clone(), Type::arrow(iota.clone(), iota.clone()))),
        )
        .unwrap();
    DeskSig { bank: TermBank::new(sig), iota, a, b, f, g }
}

/// All ground terms of the given type up to `height`, in a context of
/// λ-bound variables (innermost last).
fn enumerate(ds: &DeskSig, ty: &Type, height: u32, binders: &[Type]) -> Vec<Term> {
    let bank = &ds.bank;
    let mut out = Vec::new();
    if *ty == ds.iota {
        out.push(bank.sym(ds.a, vec![], vec![]));
        out.push(bank.sym(ds.b, vec![], vec![]));
        for (i, bty) in binders.iter().rev().enumerate() {
            if *bty == ds.iota {
                out.push(bank.bound(i as u32, ds.iota.clone()));
            }
        }
        if height > 1 {
            let smaller = enumerate(ds, &ds.iota.clone(), height - 1, binders);
            for t in &smaller {
                out.push(bank.sym(ds.f, vec![], vec![t.clone()]));
            }
            for t in &smaller {
                for u in &smaller {
                    out.push(bank.sym(ds.g, vec![], vec![t.clone(), u.clone()]));
                }
            }
        }
    } else if let (Some(arg), Some(res)) = (ty.arg(), ty.result()) {
        // partial applications of f and g that fit
        let fun1 = Type::arrow(ds.iota.clone(), ds.iota.clone());
        if *ty == fun1 {
            out.push(bank.sym(ds.f, vec![], vec![]));
            if height > 1 {
                for t in enumerate(ds, &ds.iota.clone(), height - 1, binders) {
                    out.push(bank.sym(ds.g, vec![], vec![t]));
                }
            }
        }
        let mut ext = binders.to_vec();
        ext.push(arg.clone());
        for body in enumerate(ds, &res.clone(), height, &ext) {
            out.push(bank.lam(arg.clone(), body));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Random problem term over the desk signature with the given variables.
fn random_term(ds: &DeskSig, rng: &mut Rng, depth: u32, vars: &[(VarId, Type)]) -> Term {
    let bank = &ds.bank;
    let fun1 = Type::arrow(ds.iota.clone(), ds.iota.clone());
    let mut choices: Vec<u32> = vec![0, 1];
    if depth > 0 {
        choices.extend([2, 3]);
    }
    for (i, (_, ty)) in vars.iter().enumerate() {
        if *ty == ds.iota {
            choices.push(10 + i as u32);
        } else if depth > 0 {
            choices.push(20 + i as u32);
        }
    }
    match choices[rng.below(choices.len())] {
        0 => bank.sym(ds.a, vec![], vec![]),
        1 => bank.sym(ds.b, vec![], vec![]),
        2 => bank.sym(ds.f, vec![], vec![random_term(ds, rng, depth - 1, vars)]),
        3 => bank.sym(
            ds.g,
            vec![],
            vec![random_term(ds, rng, depth - 1, vars), random_term(ds, rng, depth - 1, vars)],
        ),
        c if c >= 20 => {
            let (v, ty) = &vars[(c - 20) as usize];
            bank.app(bank.var(*v, ty.clone()), vec![random_term(ds, rng, depth - 1, vars)])
        }
        c => {
            let (v, ty) = &vars[(c - 10) as usize];
            bank.var(*v, ty.clone())
        }
    }
    .clone()
}

/// Is `theta` (ground, on `xvars`) an instance of `sigma`? Checked by
/// unifying each `xσ` against the ground `xθ`; targets are ground, so a
/// unifier is a match witness.
fn is_instance(ds: &DeskSig, sigma: &Subst, theta: &Subst, xvars: &[(VarId, Type)]) -> bool {
    let bank = &ds.bank;
    let cfg = UnifConfig { fuel: 10, max_unifiers: 64, ..UnifConfig::default() };
    let pairs: Vec<(Term, Term)> = xvars
        .iter()
        .map(|(v, ty)| {
            let x = bank.var(*v, ty.clone());
            (sigma.apply(bank, &x), theta.apply(bank, &x))
        })
        .collect();
    fn solve(ds: &DeskSig, cfg: &UnifConfig, pairs: &[(Term, Term)], pre: &Subst) -> bool {
        match pairs.split_first() {
            None => true,
            Some(((p, t), rest)) => {
                let p = pre.apply(&ds.bank, p);
                let vars: Vec<VarId> = p.vars.iter().map(|(v, _)| *v).collect();
                let mut stream = csu(&ds.bank, cfg, &p, t, &vars);
                for u in stream.collect_unifiers(16) {
                    let merged = pre.compose(&ds.bank, &u);
                    if solve(ds, cfg, rest, &merged) {
                        return true;
                    }
                }
                false
            }
        }
    }
    solve(ds, &cfg, &pairs, &Subst::new())
}

#[test]
fn desk_scale_completeness() {
    let ds = desk_sig();
    let bank = ds.bank.clone();
    let mut rng = Rng::new(0xC0FFEE);
    let fun1 = Type::arrow(ds.iota.clone(), ds.iota.clone());
    let cfg = UnifConfig { fuel: 6, max_unifiers: 128, ..UnifConfig::default() };

    let mut problems_with_unifiers = 0;
    let mut total_ground_unifiers = 0;
    let rounds = 120;
    for round in 0..rounds {
        let (xv, _) = bank.fresh_var("X", ds.iota.clone());
        let (yv, _) = bank.fresh_var("Y", fun1.clone());
        let vars = vec![(xv, ds.iota.clone()), (yv, fun1.clone())];
        let s = random_term(&ds, &mut rng, 2, &vars);
        let t = random_term(&ds, &mut rng, 2, &vars);

        // brute-force ground unifiers
        let xs = enumerate(&ds, &ds.iota.clone(), 2, &[]);
        let ys = enumerate(&ds, &fun1.clone(), 2, &[]);
        let mut ground_unifiers = Vec::new();
        for xi in &xs {
            for yi in &ys {
                let mut theta = Subst::new();
                theta.tm.insert(xv, xi.clone());
                theta.tm.insert(yv, yi.clone());
                if theta.apply(&bank, &s) == theta.apply(&bank, &t) {
                    ground_unifiers.push(theta);
                }
            }
        }
        if ground_unifiers.is_empty() {
            continue;
        }
        problems_with_unifiers += 1;
        total_ground_unifiers += ground_unifiers.len();

        let xvars = [xv, yv];
        let mut stream = csu(&bank, &cfg, &s, &t, &xvars);
        let emitted = stream.collect_unifiers(128);
        for theta in &ground_unifiers {
            let covered = emitted.iter().any(|sig| is_instance(&ds, sig, theta, &vars));
            assert!(
                covered,
                "round {}: missed ground unifier\n  s = {}\n  t = {}\n  X -> {}\n  Y -> {}\n  ({} emitted)",
                round,
                lambdasup::syntax::print::term_string(&bank, &s),
                lambdasup::syntax::print::term_string(&bank, &t),
                lambdasup::syntax::print::term_string(&bank, theta.get(xv).unwrap()),
                lambdasup::syntax::print::term_string(&bank, theta.get(yv).unwrap()),
                emitted.len()
            );
        }
    }
    println!(
        "desk completeness: {} problems with unifiers, {} ground unifiers covered",
        problems_with_unifiers, total_ground_unifiers
    );
    assert!(problems_with_unifiers >= 20, "generator too weak: {}", problems_with_unifiers);
}
