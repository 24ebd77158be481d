//! Term orders: first-order KBO and LPO over O-encoded terms, the derived
//! strict order on βη-equivalence classes, multiset extensions to literals
//! and clauses, maximality, selection, and eligibility.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::encoding::{encode_o, FoSym, FoTerm, FoVar};
use crate::syntax::{Clause, Head, Literal, Subst, Term, TermBank, TermKind};

/// Comparison result of a partial order.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Comparison {
    Greater,
    Less,
    Equal,
    Incomparable,
}

impl Comparison {
    pub fn flip(self) -> Comparison {
        match self {
            Comparison::Greater => Comparison::Less,
            Comparison::Less => Comparison::Greater,
            other => other,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OrderKind {
    Kbo,
    Lpo,
}

/// Selection strategies for negative literals.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SelectionFn {
    /// Select nothing (the default).
    None,
    /// Select the first selectable negative literal.
    MaxNeg,
}

/// Order parameters: symbol weights are all 1, the variable weight is 1,
/// and the precedence is total on the encoded alphabet (arity first, then
/// name; De Bruijn and λ symbols included).
pub struct TermOrd {
    bank: TermBank,
    pub kind: OrderKind,
    pub selection: SelectionFn,
    memo: Mutex<HashMap<u64, Arc<FoTerm>>>,
    cmp_memo: Mutex<HashMap<(u64, u64), Comparison>>,
}

impl TermOrd {
    pub fn new(bank: TermBank, kind: OrderKind, selection: SelectionFn) -> TermOrd {
        TermOrd { bank, kind, selection, memo: Mutex::new(HashMap::new()), cmp_memo: Mutex::new(HashMap::new()) }
    }

    pub fn kbo(bank: TermBank) -> TermOrd {
        TermOrd::new(bank, OrderKind::Kbo, SelectionFn::None)
    }

    fn encoded(&self, t: &Term) -> Arc<FoTerm> {
        let mut memo = self.memo.lock().unwrap();
        if let Some(e) = memo.get(&t.id()) {
            return e.clone();
        }
        let e = Arc::new(encode_o(t));
        memo.insert(t.id(), e.clone());
        e
    }

    /// Precedence on encoded symbols: arity, then name, with a deterministic
    /// tie-break on ids. Total on the alphabet.
    fn prec(&self, a: &FoSym, b: &FoSym) -> std::cmp::Ordering {
        self.prec_key(a).cmp(&self.prec_key(b))
    }

    fn prec_key(&self, s: &FoSym) -> (usize, String, u64) {
        let sig = self.bank.sig();
        match s {
            FoSym::Indexed { sym, ty_tags, argc } => {
                let mut name = sig.symbol(*sym).name.clone();
                for t in ty_tags {
                    name.push_str(&format!("<{}>", t));
                }
                (*argc, name, sym.0 as u64)
            }
            FoSym::LamTag(t) => (0, format!("lam`{}", t.id()), t.id()),
            FoSym::Lam => (2, "lam".to_string(), u64::MAX),
            FoSym::Db { index, argc } => (*argc, format!("db{}", index), *index as u64),
            FoSym::TyCon(c) => (sig.tycon(*c).arity as usize, sig.tycon(*c).name.clone(), c.0 as u64),
        }
    }

    /// First-order comparison of encoded terms.
    pub fn cmp_fo(&self, s: &FoTerm, t: &FoTerm) -> Comparison {
        match self.kind {
            OrderKind::Kbo => self.kbo_cmp(s, t),
            OrderKind::Lpo => self.lpo_cmp(s, t),
        }
    }

    // ---- KBO ----

    fn kbo_cmp(&self, s: &FoTerm, t: &FoTerm) -> Comparison {
        if s == t {
            return Comparison::Equal;
        }
        let mut vs = HashMap::new();
        var_counts(s, &mut vs);
        let mut vt = HashMap::new();
        var_counts(t, &mut vt);
        let dom_st = dominates(&vs, &vt);
        let dom_ts = dominates(&vt, &vs);
        let ws = s.size(); // all weights 1, so weight = size
        let wt = t.size();
        if ws > wt {
            return if dom_st { Comparison::Greater } else { Comparison::Incomparable };
        }
        if wt > ws {
            return if dom_ts { Comparison::Less } else { Comparison::Incomparable };
        }
        match (s, t) {
            (FoTerm::Var(_), _) | (_, FoTerm::Var(_)) => Comparison::Incomparable,
            (FoTerm::App(f, sargs), FoTerm::App(g, targs)) => match self.prec(f, g) {
                std::cmp::Ordering::Greater => {
                    if dom_st {
                        Comparison::Greater
                    } else {
                        Comparison::Incomparable
                    }
                }
                std::cmp::Ordering::Less => {
                    if dom_ts {
                        Comparison::Less
                    } else {
                        Comparison::Incomparable
                    }
                }
                std::cmp::Ordering::Equal => {
                    // same symbol, same arity: lexicographic
                    debug_assert_eq!(sargs.len(), targs.len());
                    for (a, b) in sargs.iter().zip(targs) {
                        match self.kbo_cmp(a, b) {
                            Comparison::Equal => continue,
                            Comparison::Greater => {
                                return if dom_st { Comparison::Greater } else { Comparison::Incomparable }
                            }
                            Comparison::Less => {
                                return if dom_ts { Comparison::Less } else { Comparison::Incomparable }
                            }
                            Comparison::Incomparable => return Comparison::Incomparable,
                        }
                    }
                    Comparison::Equal
                }
            },
        }
    }

    // ---- LPO ----

    fn lpo_cmp(&self, s: &FoTerm, t: &FoTerm) -> Comparison {
        if s == t {
            return Comparison::Equal;
        }
        let gt = self.lpo_gt(s, t);
        let lt = self.lpo_gt(t, s);
        match (gt, lt) {
            (true, false) => Comparison::Greater,
            (false, true) => Comparison::Less,
            (false, false) => Comparison::Incomparable,
            (true, true) => unreachable!("LPO cannot be symmetric on distinct terms"),
        }
    }

    fn lpo_gt(&self, s: &FoTerm, t: &FoTerm) -> bool {
        match (s, t) {
            (_, FoTerm::Var(x)) => s != t && s.vars().contains(&x),
            (FoTerm::Var(_), _) => false,
            (FoTerm::App(f, sargs), FoTerm::App(g, targs)) => {
                if sargs.iter().any(|si| si == t || self.lpo_gt(si, t)) {
                    return true;
                }
                match self.prec(f, g) {
                    std::cmp::Ordering::Greater => targs.iter().all(|tj| self.lpo_gt(s, tj)),
                    std::cmp::Ordering::Less => false,
                    std::cmp::Ordering::Equal => {
                        // lexicographic on the argument tuples
                        for (i, (a, b)) in sargs.iter().zip(targs.iter()).enumerate() {
                            if a == b {
                                continue;
                            }
                            return self.lpo_gt(a, b)
                                && targs[i + 1..].iter().all(|tj| self.lpo_gt(s, tj));
                        }
                        sargs.len() > targs.len()
                    }
                }
            }
        }
    }

    // ---- Derived order on βη-equivalence classes ----

    /// `t ≻λ s` if the O encodings compare; EQUAL iff the encodings are
    /// equal, which by injectivity means the terms are equal.
    pub fn cmp_terms(&self, s: &Term, t: &Term) -> Comparison {
        if s == t {
            return Comparison::Equal;
        }
        let key = (s.id(), t.id());
        if let Some(c) = self.cmp_memo.lock().unwrap().get(&key) {
            return *c;
        }
        let c = self.cmp_fo(&self.encoded(s), &self.encoded(t));
        let mut memo = self.cmp_memo.lock().unwrap();
        memo.insert(key, c);
        memo.insert((t.id(), s.id()), c.flip());
        c
    }

    /// Nonstrict order `⪰`: the reflexive closure of the strict order.
    pub fn geq(&self, s: &Term, t: &Term) -> bool {
        s == t || self.cmp_terms(s, t) == Comparison::Greater
    }

    /// `s ̸≾ t`: the negative order guard used in rule side conditions.
    pub fn not_leq(&self, s: &Term, t: &Term) -> bool {
        !(s == t || self.cmp_terms(s, t) == Comparison::Less)
    }

    // ---- Literal and clause extensions ----

    /// The multiset encoding of a literal: `{s, t}` for `s ≈ t` and
    /// `{s, s, t, t}` for `s ≉ t`.
    fn literal_multiset(&self, l: &Literal) -> Vec<Term> {
        if l.positive {
            vec![l.lhs.clone(), l.rhs.clone()]
        } else {
            vec![l.lhs.clone(), l.lhs.clone(), l.rhs.clone(), l.rhs.clone()]
        }
    }

    pub fn cmp_literals(&self, a: &Literal, b: &Literal) -> Comparison {
        multiset_cmp(&self.literal_multiset(a), &self.literal_multiset(b), &mut |x, y| {
            self.cmp_terms(x, y)
        })
    }

    pub fn cmp_literal_lists(&self, a: &[Literal], b: &[Literal]) -> Comparison {
        let av: Vec<Literal> = a.to_vec();
        let bv: Vec<Literal> = b.to_vec();
        multiset_cmp(&av, &bv, &mut |x, y| self.cmp_literals(x, y))
    }

    pub fn cmp_clauses(&self, a: &Clause, b: &Clause) -> Comparison {
        self.cmp_literal_lists(&a.literals, &b.literals)
    }

    // ---- Maximality, selection, eligibility ----

    /// Indices of the (strictly) ⪰-maximal literals of a literal list.
    pub fn maximal_literals(&self, lits: &[Literal], strict: bool) -> Vec<usize> {
        let mut out = Vec::new();
        'outer: for (i, l) in lits.iter().enumerate() {
            let mut multiplicity = 0;
            for (j, m) in lits.iter().enumerate() {
                if l.same(m) {
                    multiplicity += 1;
                }
                if i != j && self.cmp_literals(m, l) == Comparison::Greater {
                    continue 'outer;
                }
            }
            if strict && multiplicity > 1 {
                continue;
            }
            out.push(i);
        }
        out
    }

    /// Selected literal indices of a clause. Selected literals are negative,
    /// and a literal containing a variable `y` is not selectable when some
    /// applied occurrence `y ūₙ` (n > 0) is a ⪰-maximal term of the clause.
    pub fn select(&self, lits: &[Literal]) -> Vec<usize> {
        match self.selection {
            SelectionFn::None => Vec::new(),
            SelectionFn::MaxNeg => {
                for (i, l) in lits.iter().enumerate() {
                    if !l.positive && self.selectable(i, lits) {
                        return vec![i];
                    }
                }
                Vec::new()
            }
        }
    }

    fn selectable(&self, idx: usize, lits: &[Literal]) -> bool {
        let sides: Vec<&Term> = lits.iter().flat_map(|l| [&l.lhs, &l.rhs]).collect();
        let lit = &lits[idx];
        for (v, _) in lit.vars() {
            for u in &sides {
                let applied_v = matches!(u.kind(),
                    TermKind::App(Head::Var(w, _), args) if *w == v && !args.is_empty());
                if applied_v {
                    let maximal = sides
                        .iter()
                        .all(|s| self.cmp_terms(s, u) != Comparison::Greater);
                    if maximal {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Eligibility of the literal at `idx` in `lits` w.r.t. a substitution:
    /// selected, or nothing is selected and the σ-instance is (strictly)
    /// ⪰-maximal in the σ-instance of the clause.
    pub fn eligible(
        &self,
        bank: &TermBank,
        idx: usize,
        lits: &[Literal],
        subst: &Subst,
        strict: bool,
    ) -> bool {
        let selected = self.select(lits);
        if !selected.is_empty() {
            return selected.contains(&idx);
        }
        let inst: Vec<Literal> = if subst.is_identity() {
            lits.to_vec()
        } else {
            lits.iter().map(|l| l.apply(bank, subst)).collect()
        };
        self.maximal_literals(&inst, strict).contains(&idx)
    }
}

fn var_counts(t: &FoTerm, acc: &mut HashMap<FoVar, usize>) {
    match t {
        FoTerm::Var(v) => *acc.entry(v.clone()).or_insert(0) += 1,
        FoTerm::App(_, args) => args.iter().for_each(|a| var_counts(a, acc)),
    }
}

fn dominates(a: &HashMap<FoVar, usize>, b: &HashMap<FoVar, usize>) -> bool {
    b.iter().all(|(v, n)| a.get(v).copied().unwrap_or(0) >= *n)
}

/// Dershowitz–Manna multiset extension of a partial order: after removing a
/// maximal common part, `M ≻ N` iff every leftover of `N` is dominated by
/// some leftover of `M`.
pub fn multiset_cmp<T: Clone>(
    xs: &[T],
    ys: &[T],
    cmp: &mut dyn FnMut(&T, &T) -> Comparison,
) -> Comparison {
    let mut xs: Vec<T> = xs.to_vec();
    let mut ys: Vec<T> = ys.to_vec();
    // cancel equal elements pairwise
    let mut i = 0;
    'outer: while i < xs.len() {
        for j in 0..ys.len() {
            if cmp(&xs[i], &ys[j]) == Comparison::Equal {
                xs.remove(i);
                ys.remove(j);
                continue 'outer;
            }
        }
        i += 1;
    }
    match (xs.is_empty(), ys.is_empty()) {
        (true, true) => Comparison::Equal,
        (false, true) => Comparison::Greater,
        (true, false) => Comparison::Less,
        (false, false) => {
            let gt = ys.iter().all(|y| xs.iter().any(|x| cmp(x, y) == Comparison::Greater));
            if gt {
                return Comparison::Greater;
            }
            let lt = xs.iter().all(|x| ys.iter().any(|y| cmp(y, x) == Comparison::Greater));
            if lt {
                return Comparison::Less;
            }
            Comparison::Incomparable
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{Rng, TestSig};
    use crate::syntax::{parse_term, Type, VarEnv};

    fn fixture() -> (TestSig, TermOrd, VarEnv) {
        let ts = TestSig::new();
        let ord = TermOrd::kbo(ts.bank.clone());
        let mut env = VarEnv::new();
        let fun = Type::arrow(ts.iota.clone(), ts.iota.clone());
        env.declare(&ts.bank, "Y", fun);
        (ts, ord, env)
    }

    #[test]
    fn green_subterm_dominates() {
        let (ts, ord, env) = fixture();
        let t = parse_term(&ts.bank, &env, "g a b").unwrap();
        let s = parse_term(&ts.bank, &env, "a").unwrap();
        assert_eq!(ord.cmp_terms(&t, &s), Comparison::Greater);
        assert!(ord.geq(&t, &s));
    }

    #[test]
    fn distinct_variables_incomparable() {
        let (ts, ord, _) = fixture();
        let (_, x) = ts.bank.fresh_var("x", ts.iota.clone());
        let (_, y) = ts.bank.fresh_var("y", ts.iota.clone());
        assert_eq!(ord.cmp_terms(&x, &y), Comparison::Incomparable);
    }

    #[test]
    fn applied_variable_args_frozen() {
        // y b vs y a: distinct frozen variables, hence incomparable
        let (ts, ord, env) = fixture();
        let yb = parse_term(&ts.bank, &env, "Y b").unwrap();
        let ya = parse_term(&ts.bank, &env, "Y a").unwrap();
        assert_eq!(ord.cmp_terms(&yb, &ya), Comparison::Incomparable);
        assert!(!ord.geq(&yb, &ya));
    }

    #[test]
    fn lambda_comparisons_strict_but_not_arg_compatible() {
        let (ts, ord, env) = fixture();
        // λx. b vs λx. x: some strict result must hold (ground totality)
        let lb = parse_term(&ts.bank, &env, "\\x:i. b").unwrap();
        let lx = parse_term(&ts.bank, &env, "\\x:i. x").unwrap();
        let c = ord.cmp_terms(&lb, &lx);
        assert!(c == Comparison::Greater || c == Comparison::Less);
    }

    #[test]
    fn ground_totality_and_transitivity_fuzzed() {
        let (ts, ord, _) = fixture();
        let mut rng = Rng::new(2024);
        let mut terms = Vec::new();
        for _ in 0..60 {
            terms.push(ts.ground_term(&mut rng, &ts.iota.clone(), 3));
        }
        for s in &terms {
            assert_eq!(ord.cmp_terms(s, s), Comparison::Equal);
            for t in &terms {
                let c = ord.cmp_terms(s, t);
                assert_ne!(c, Comparison::Incomparable, "ground terms must compare");
                assert_eq!(ord.cmp_terms(t, s), c.flip());
                for u in &terms {
                    if c == Comparison::Greater && ord.cmp_terms(t, u) == Comparison::Greater {
                        assert_eq!(ord.cmp_terms(s, u), Comparison::Greater, "transitivity");
                    }
                }
            }
        }
    }

    /// Reference KBO written by unfolding the textbook definition, used as
    /// an independent oracle.
    fn oracle_kbo_gt(ord: &TermOrd, s: &FoTerm, t: &FoTerm) -> bool {
        fn weight(t: &FoTerm) -> usize {
            t.size()
        }
        let mut vs = HashMap::new();
        var_counts(s, &mut vs);
        let mut vt = HashMap::new();
        var_counts(t, &mut vt);
        if !dominates(&vs, &vt) || s == t {
            return false;
        }
        if weight(s) > weight(t) {
            return true;
        }
        if weight(s) < weight(t) {
            return false;
        }
        match (s, t) {
            (FoTerm::App(f, sargs), FoTerm::App(g, targs)) => match ord.prec(f, g) {
                std::cmp::Ordering::Greater => true,
                std::cmp::Ordering::Less => false,
                std::cmp::Ordering::Equal => {
                    for (a, b) in sargs.iter().zip(targs) {
                        if a == b {
                            continue;
                        }
                        return oracle_kbo_gt(ord, a, b);
                    }
                    false
                }
            },
            _ => false,
        }
    }

    #[test]
    fn kbo_agrees_with_definition_oracle() {
        let (ts, ord, _) = fixture();
        let mut rng = Rng::new(99);
        let fun = Type::arrow(ts.iota.clone(), ts.iota.clone());
        let (xv, _) = ts.bank.fresh_var("x", ts.iota.clone());
        let (yv, _) = ts.bank.fresh_var("y", fun.clone());
        let vars = vec![(xv, ts.iota.clone()), (yv, fun)];
        for _ in 0..400 {
            let s = ts.open_term(&mut rng, &ts.iota.clone(), 3, &vars);
            let t = ts.open_term(&mut rng, &ts.iota.clone(), 3, &vars);
            let es = encode_o(&s);
            let et = encode_o(&t);
            let impl_gt = ord.kbo_cmp(&es, &et) == Comparison::Greater;
            let oracle_gt = oracle_kbo_gt(&ord, &es, &et);
            assert_eq!(impl_gt, oracle_gt, "{:?} vs {:?}", es, et);
        }
    }

    #[test]
    fn stability_under_grounding_sampled() {
        let (ts, ord, _) = fixture();
        let mut rng = Rng::new(5);
        let fun = Type::arrow(ts.iota.clone(), ts.iota.clone());
        let (xv, _) = ts.bank.fresh_var("x", ts.iota.clone());
        let (yv, _) = ts.bank.fresh_var("y", fun.clone());
        let vars = vec![(xv, ts.iota.clone()), (yv, fun)];
        let mut checked = 0;
        for _ in 0..600 {
            let s = ts.open_term(&mut rng, &ts.iota.clone(), 3, &vars);
            let t = ts.open_term(&mut rng, &ts.iota.clone(), 3, &vars);
            if ord.cmp_terms(&t, &s) != Comparison::Greater {
                continue;
            }
            checked += 1;
            for _ in 0..3 {
                let theta = ts.grounding(&mut rng, &vars, 2);
                let st = theta.apply(&ts.bank, &s);
                let tt = theta.apply(&ts.bank, &t);
                assert_eq!(
                    ord.cmp_terms(&tt, &st),
                    Comparison::Greater,
                    "stability violated"
                );
            }
        }
        assert!(checked > 20, "too few comparable pairs sampled: {}", checked);
    }

    #[test]
    fn multiset_extension_against_brute_force() {
        // brute-force Dershowitz–Manna: M > N iff M ≠ N and for all n in
        // N - M there is m in M - N with m > n
        let (ts, ord, _) = fixture();
        let mut rng = Rng::new(17);
        let mut pool = Vec::new();
        for _ in 0..8 {
            pool.push(ts.ground_term(&mut rng, &ts.iota.clone(), 2));
        }
        let brute_gt = |xs: &[Term], ys: &[Term]| -> bool {
            let mut xs = xs.to_vec();
            let mut ys = ys.to_vec();
            let mut i = 0;
            'outer: while i < xs.len() {
                for j in 0..ys.len() {
                    if xs[i] == ys[j] {
                        xs.remove(i);
                        ys.remove(j);
                        continue 'outer;
                    }
                }
                i += 1;
            }
            if xs.is_empty() && ys.is_empty() {
                return false;
            }
            ys.iter().all(|n| {
                xs.iter().any(|m| ord.cmp_terms(m, n) == Comparison::Greater)
            }) && !xs.is_empty() || (ys.is_empty() && !xs.is_empty())
        };
        for _ in 0..300 {
            let pick = |rng: &mut Rng| -> Vec<Term> {
                let n = rng.below(4);
                (0..n).map(|_| pool[rng.below(pool.len())].clone()).collect()
            };
            let m = pick(&mut rng);
            let n = pick(&mut rng);
            let c = multiset_cmp(&m, &n, &mut |a, b| ord.cmp_terms(a, b));
            assert_eq!(c == Comparison::Greater, brute_gt(&m, &n), "m={:?} n={:?}", m, n);
            assert_eq!(c == Comparison::Less, brute_gt(&n, &m));
        }
    }

    #[test]
    fn empty_clause_smallest() {
        let (ts, ord, env) = fixture();
        let a = parse_term(&ts.bank, &env, "a").unwrap();
        let b = parse_term(&ts.bank, &env, "b").unwrap();
        let lits = vec![Literal::eq(a, b)];
        assert_eq!(ord.cmp_literal_lists(&[], &lits), Comparison::Less);
        assert_eq!(ord.cmp_literal_lists(&lits, &[]), Comparison::Greater);
        assert_eq!(ord.cmp_literal_lists(&[], &[]), Comparison::Equal);
    }

    #[test]
    fn maximality_single_and_duplicate() {
        let (ts, ord, env) = fixture();
        let a = parse_term(&ts.bank, &env, "a").unwrap();
        let b = parse_term(&ts.bank, &env, "b").unwrap();
        let l = Literal::eq(a.clone(), b.clone());
        // single literal: strictly maximal
        assert_eq!(ord.maximal_literals(&[l.clone()], true), vec![0]);
        // duplicated literal: maximal but not strictly
        let lits = vec![l.clone(), l.clone()];
        assert_eq!(ord.maximal_literals(&lits, false), vec![0, 1]);
        assert!(ord.maximal_literals(&lits, true).is_empty());
    }

    #[test]
    fn selection_restriction_on_applied_variables() {
        let (ts, _, env) = fixture();
        let ord = TermOrd::new(ts.bank.clone(), OrderKind::Kbo, SelectionFn::MaxNeg);
        // clause: Y a ≉ a — the only negative literal contains Y and Y a is
        // ⪰-maximal, so nothing may be selected
        let ya = parse_term(&ts.bank, &env, "Y a").unwrap();
        let a = parse_term(&ts.bank, &env, "a").unwrap();
        let lits = vec![Literal::neq(ya, a.clone())];
        assert!(ord.select(&lits).is_empty());
        // all-positive clause: nothing selected
        let pos = vec![Literal::eq(a.clone(), a.clone())];
        assert!(ord.select(&pos).is_empty());
        // ground negative literal may be selected
        let b = parse_term(&ts.bank, &env, "b").unwrap();
        let neg = vec![Literal::neq(a.clone(), b)];
        assert_eq!(ord.select(&neg), vec![0]);
    }

    #[test]
    fn eligibility_cases() {
        let (ts, _, env) = fixture();
        let bank = ts.bank.clone();
        let ord = TermOrd::new(bank.clone(), OrderKind::Kbo, SelectionFn::MaxNeg);
        let a = parse_term(&bank, &env, "a").unwrap();
        let b = parse_term(&bank, &env, "b").unwrap();
        let fa = parse_term(&bank, &env, "f a").unwrap();
        // selected negative literal is eligible regardless of order
        let lits = vec![Literal::neq(a.clone(), b.clone()), Literal::eq(fa.clone(), b.clone())];
        assert!(ord.eligible(&bank, 0, &lits, &Subst::new(), false));
        // sole literal with empty σ: strictly eligible
        let ord2 = TermOrd::kbo(bank.clone());
        let single = vec![Literal::eq(fa, b)];
        assert!(ord2.eligible(&bank, 0, &single, &Subst::new(), true));
    }
}
