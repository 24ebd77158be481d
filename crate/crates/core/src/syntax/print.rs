//! Human-readable printing of terms, literals, and clauses.

use super::clause::{Clause, Literal};
use super::sig::Signature;
use super::term::{Head, Term, TermBank, TermKind};
use super::ty::Type;

fn ty_str(sig: &Signature, ty: &Type) -> String {
    match ty {
        Type::Var(a) => format!("A{}", a.0),
        Type::Con(c, args) if ty.is_arrow() => {
            let _ = c;
            let lhs = ty_str(sig, &args[0]);
            let rhs = ty_str(sig, &args[1]);
            if args[0].is_arrow() {
                format!("({}) > {}", lhs, rhs)
            } else {
                format!("{} > {}", lhs, rhs)
            }
        }
        Type::Con(c, args) => {
            let name = sig.tycon(*c).name.clone();
            if args.is_empty() {
                name
            } else {
                let inner: Vec<String> = args.iter().map(|a| ty_str(sig, a)).collect();
                format!("{}({})", name, inner.join(","))
            }
        }
    }
}

pub fn type_string(bank: &TermBank, ty: &Type) -> String {
    ty_str(&bank.sig(), ty)
}

fn term_str(bank: &TermBank, t: &Term, depth: u32, parens: bool) -> String {
    let sig = bank.sig();
    match t.kind() {
        TermKind::App(head, args) => {
            let h = match head {
                Head::Var(v, _) => bank.var_name(*v),
                Head::Bound(i, _) => {
                    if *i < depth {
                        format!("x{}", depth - 1 - i)
                    } else {
                        format!("#{}", i)
                    }
                }
                Head::Sym(f, tyargs) => {
                    let name = sig.symbol(*f).name.clone();
                    if tyargs.is_empty() {
                        name
                    } else {
                        let ts: Vec<String> = tyargs.iter().map(|a| ty_str(&sig, a)).collect();
                        format!("{}<{}>", name, ts.join(","))
                    }
                }
            };
            if args.is_empty() {
                h
            } else {
                drop(sig);
                let parts: Vec<String> = std::iter::once(h)
                    .chain(args.iter().map(|a| term_str(bank, a, depth, true)))
                    .collect();
                let s = parts.join(" ");
                if parens {
                    format!("({})", s)
                } else {
                    s
                }
            }
        }
        TermKind::Lam(bty, body) => {
            let b = ty_str(&sig, bty);
            drop(sig);
            let inner = term_str(bank, body, depth + 1, false);
            let s = format!("^x{}:{}. {}", depth, b, inner);
            if parens {
                format!("({})", s)
            } else {
                s
            }
        }
    }
}

pub fn term_string(bank: &TermBank, t: &Term) -> String {
    term_str(bank, t, 0, false)
}

pub fn literal_string(bank: &TermBank, l: &Literal) -> String {
    let op = if l.positive { "=" } else { "!=" };
    format!(
        "{} {} {}",
        term_str(bank, &l.lhs, 0, true),
        op,
        term_str(bank, &l.rhs, 0, true)
    )
}

pub fn clause_string(bank: &TermBank, c: &Clause) -> String {
    literals_string(bank, &c.literals)
}

pub fn literals_string(bank: &TermBank, lits: &[Literal]) -> String {
    if lits.is_empty() {
        return "$false".to_string();
    }
    let parts: Vec<String> = lits.iter().map(|l| literal_string(bank, l)).collect();
    parts.join(" | ")
}
