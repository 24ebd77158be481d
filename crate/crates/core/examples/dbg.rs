use lambdasup::calculus::*;
use lambdasup::order::TermOrd;
use lambdasup::syntax::sig::{Signature, TypeDecl};
use lambdasup::syntax::*;
use lambdasup::unify::UnifConfig;
use std::sync::Arc;

fn main() {
    let mut sig = Signature::new();
    let bank_tmp = TermBank::new(Signature::new());
    for (name, ty) in [("a","i"),("b","i"),("c","i"),("d","i"),("g","i>i")] {
        let t = parse_type(&bank_tmp, ty).unwrap();
        sig.add_symbol(name, TypeDecl::mono(t)).unwrap();
    }
    let bank = TermBank::new(sig);
    let ord = Arc::new(TermOrd::kbo(bank.clone()));
    let ctx = CalcCtx::new(bank.clone(), ord, UnifConfig::default());
    let mut env = VarEnv::new();
    let iota = bank.sig().iota();
    let yv = env.declare(&bank, "Y", Type::arrow(iota.clone(), iota.clone()));
    let l1 = Literal::neq(parse_term(&bank, &env, "g c").unwrap(), parse_term(&bank, &env, "Y a").unwrap());
    let l2 = Literal::neq(parse_term(&bank, &env, "g d").unwrap(), parse_term(&bank, &env, "Y b").unwrap());
    let c = Clause { literals: vec![l1, l2], id: ClauseId(1), age: 0, derivation: Derivation::Axiom { rule: "t" } };
    let mut stream = infer_eres(&ctx, &c);
    let mut n = 0;
    for _ in 0..3000 {
        match stream.next() {
            None => break,
            Some(InfStep::Pending) => continue,
            Some(InfStep::Conclusion(i)) => {
                n += 1;
                let y = i.subst.get(yv).map(|t| print::term_string(&bank, t));
                println!("concl {:?}  Y={:?}", i.literals.iter().map(|l| print::literal_string(&bank, l)).collect::<Vec<_>>(), y);
                if n > 10 { break; }
            }
        }
    }
    println!("total {}", n);
}
