//! Equational literals and clauses (multisets of literals).

use std::collections::HashMap;

use super::subst::Subst;
use super::term::{Head, Term, TermBank, TermKind, VarId};
use super::ty::{Type, TyVarId};

/// An equation `s ≈ t` or disequation `s ≉ t`. The pair is unordered; the
/// stored orientation is not significant.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Literal {
    pub lhs: Term,
    pub rhs: Term,
    pub positive: bool,
}

impl Literal {
    pub fn new(lhs: Term, rhs: Term, positive: bool) -> Literal {
        debug_assert_eq!(lhs.ty(), rhs.ty(), "literal sides must share a type");
        Literal { lhs, rhs, positive }
    }

    pub fn eq(lhs: Term, rhs: Term) -> Literal {
        Literal::new(lhs, rhs, true)
    }

    pub fn neq(lhs: Term, rhs: Term) -> Literal {
        Literal::new(lhs, rhs, false)
    }

    /// Equality as unordered pairs of sides.
    pub fn same(&self, other: &Literal) -> bool {
        self.positive == other.positive
            && ((self.lhs == other.lhs && self.rhs == other.rhs)
                || (self.lhs == other.rhs && self.rhs == other.lhs))
    }

    pub fn is_trivial(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn flipped(&self) -> Literal {
        Literal { lhs: self.rhs.clone(), rhs: self.lhs.clone(), positive: self.positive }
    }

    /// Both orientations of the literal.
    pub fn orientations(&self) -> [(Term, Term); 2] {
        [(self.lhs.clone(), self.rhs.clone()), (self.rhs.clone(), self.lhs.clone())]
    }

    pub fn apply(&self, bank: &TermBank, s: &Subst) -> Literal {
        Literal {
            lhs: s.apply(bank, &self.lhs),
            rhs: s.apply(bank, &self.rhs),
            positive: self.positive,
        }
    }

    pub fn weight(&self) -> u32 {
        self.lhs.weight + self.rhs.weight
    }

    pub fn vars(&self) -> Vec<(VarId, Type)> {
        let mut out = self.lhs.vars.clone();
        for v in &self.rhs.vars {
            if !out.iter().any(|(x, _)| x == &v.0) {
                out.push(v.clone());
            }
        }
        out.sort_by_key(|(v, _)| *v);
        out
    }

    pub fn tyvars(&self) -> Vec<TyVarId> {
        let mut out = self.lhs.tyvars.clone();
        for a in &self.rhs.tyvars {
            if !out.contains(a) {
                out.push(*a);
            }
        }
        out.sort_unstable();
        out
    }
}

/// How a clause came to exist; enough to replay the derivation.
#[derive(Clone, Debug)]
pub enum Derivation {
    /// Input clause with its source name and role.
    Input { name: String, role: String },
    /// A premise-free axiom introduced by the prover (extensionality,
    /// Boolean proxy axioms).
    Axiom { rule: &'static str },
    /// Produced by an inference rule. `skeleton` is the conclusion before
    /// the recorded substitution was applied; replaying `subst` on it must
    /// reproduce the clause.
    Inference {
        rule: &'static str,
        premises: Vec<ClauseId>,
        subst: Subst,
        skeleton: Vec<Literal>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ClauseId(pub u32);

impl std::fmt::Display for ClauseId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A clause: a finite multiset of literals with identity and provenance.
/// The empty clause is ⊥.
#[derive(Clone, Debug)]
pub struct Clause {
    pub literals: Vec<Literal>,
    pub id: ClauseId,
    pub age: u32,
    pub derivation: Derivation,
}

impl Clause {
    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.literals.iter().map(Literal::weight).sum()
    }

    /// Syntactic size: count of symbol and variable occurrences.
    pub fn size(&self) -> u32 {
        self.weight()
    }

    pub fn distinct_vars(&self) -> usize {
        self.vars().len()
    }

    pub fn vars(&self) -> Vec<(VarId, Type)> {
        let mut out: Vec<(VarId, Type)> = Vec::new();
        for l in &self.literals {
            for v in l.vars() {
                if !out.iter().any(|(x, _)| x == &v.0) {
                    out.push(v);
                }
            }
        }
        out.sort_by_key(|(v, _)| *v);
        out
    }

    pub fn tyvars(&self) -> Vec<TyVarId> {
        let mut out = Vec::new();
        for l in &self.literals {
            for a in l.tyvars() {
                if !out.contains(&a) {
                    out.push(a);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn apply(&self, bank: &TermBank, s: &Subst) -> Vec<Literal> {
        self.literals.iter().map(|l| l.apply(bank, s)).collect()
    }

    /// The literals without the one at `idx` (multiset difference of one
    /// occurrence).
    pub fn without(&self, idx: usize) -> Vec<Literal> {
        let mut rest = self.literals.clone();
        rest.remove(idx);
        rest
    }

    /// Multiset equality of literal lists, respecting multiplicity and
    /// unordered literal sides.
    pub fn same_literals(a: &[Literal], b: &[Literal]) -> bool {
        if a.len() != b.len() {
            return false;
        }
        let mut used = vec![false; b.len()];
        'outer: for la in a {
            for (i, lb) in b.iter().enumerate() {
                if !used[i] && la.same(lb) {
                    used[i] = true;
                    continue 'outer;
                }
            }
            return false;
        }
        true
    }

    /// A deterministic key invariant under α-renaming, used to recognize
    /// exact variants of already-seen clauses. Literals are sorted by a
    /// variable-blind key first, then variables are numbered in order of
    /// first occurrence.
    pub fn alpha_key(&self) -> String {
        let mut lits: Vec<&Literal> = self.literals.iter().collect();
        let blind = |l: &Literal| {
            let mut a = term_key(&l.lhs, &mut None);
            let mut b = term_key(&l.rhs, &mut None);
            if a > b {
                std::mem::swap(&mut a, &mut b);
            }
            (l.positive, a, b)
        };
        lits.sort_by_key(|l| blind(l));
        let mut map: Option<HashMap<VarId, usize>> = Some(HashMap::new());
        let mut parts = Vec::new();
        for l in lits {
            let mut a = term_key(&l.lhs, &mut None);
            let mut b = term_key(&l.rhs, &mut None);
            let (x, y) = if a <= b { (&l.lhs, &l.rhs) } else { (&l.rhs, &l.lhs) };
            a = term_key(x, &mut map);
            b = term_key(y, &mut map);
            parts.push(format!("{}{}={}", if l.positive { "+" } else { "-" }, a, b));
        }
        parts.join("|")
    }
}

/// Serializes a term shape; with `map` present, variables are numbered in
/// first-occurrence order, otherwise they print as `*`.
fn term_key(t: &Term, map: &mut Option<HashMap<VarId, usize>>) -> String {
    match t.kind() {
        TermKind::App(head, args) => {
            let h = match head {
                Head::Var(v, _) => match map {
                    Some(m) => {
                        let n = m.len();
                        let k = *m.entry(*v).or_insert(n);
                        format!("v{}", k)
                    }
                    None => "*".to_string(),
                },
                Head::Bound(i, _) => format!("b{}", i),
                Head::Sym(f, tyargs) => {
                    if tyargs.is_empty() {
                        format!("s{}", f.0)
                    } else {
                        let ts: Vec<String> = tyargs.iter().map(|t| format!("{}", t)).collect();
                        format!("s{}<{}>", f.0, ts.join(","))
                    }
                }
            };
            if args.is_empty() {
                h
            } else {
                let a: Vec<String> = args.iter().map(|x| term_key(x, map)).collect();
                format!("{}({})", h, a.join(","))
            }
        }
        TermKind::Lam(_, body) => format!("L.{}", term_key(body, map)),
    }
}

/// Occurrence test for deep variables: `x` occurs deeply in `C` if it occurs
/// inside a λ-expression or inside an argument of an applied variable.
pub fn occurs_deeply(x: VarId, clause_literals: &[Literal]) -> bool {
    clause_literals
        .iter()
        .any(|l| occurs_deeply_in(x, &l.lhs, false) || occurs_deeply_in(x, &l.rhs, false))
}

fn occurs_deeply_in(x: VarId, t: &Term, inside_deep: bool) -> bool {
    if !t.contains_var(x) {
        return false;
    }
    if inside_deep {
        return true;
    }
    match t.kind() {
        TermKind::App(head, args) => {
            let arg_is_deep = head.is_var() && !args.is_empty();
            args.iter().any(|a| occurs_deeply_in(x, a, arg_is_deep))
        }
        // the term itself is a λ-expression containing x
        TermKind::Lam(..) => true,
    }
}
