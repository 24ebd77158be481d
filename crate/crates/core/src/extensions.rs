//! Optional rules: NegExt, PruneArg and its detection algorithm,
//! λDemod/λDemodExt, λSup, Abs variants, and ExtInst. DupSup and FlexSup
//! live with the Sup machinery in [`crate::calculus`].

use std::collections::HashMap;

use crate::calculus::{raw_literal, CalcCtx, InfStream, Inference, VecStream};
use crate::order::Comparison;
use crate::syntax::sig::TypeDecl;
use crate::syntax::{
    green_subterms, unify_types, Clause, Head, Literal, OrangeStep, Subst, SymId, Term, TermBank,
    TermKind, Type, TyVarId, VarId, DIFF,
};
use crate::unify::{csu, match_into, UnifStep};

// ---- NegExt ----

/// Negative extensionality: applies both sides of an eligible negative
/// functional literal to a fresh Skolem term over the literal's free
/// variables.
pub fn infer_negext(ctx: &CalcCtx, c: &Clause) -> Box<dyn InfStream> {
    let bank = &ctx.bank;
    let mut out = Vec::new();
    for (i, l) in c.literals.iter().enumerate() {
        if l.positive || !l.lhs.ty().is_arrow() {
            continue;
        }
        if !ctx.ord.eligible(bank, i, &c.literals, &Subst::new(), false) {
            continue;
        }
        let tyvars = l.tyvars();
        let vars = l.vars();
        let arg_ty = l.lhs.ty().arg().unwrap().clone();
        let sk = skolem_for(bank, &tyvars, &vars, &arg_ty);
        let skt = bank.sym(
            sk,
            tyvars.iter().map(|a| Type::Var(*a)).collect(),
            vars.iter().map(|(v, ty)| bank.var(*v, ty.clone())).collect(),
        );
        let mut skeleton = c.literals.clone();
        skeleton.remove(i);
        skeleton.push(raw_literal(
            bank.app(l.lhs.clone(), vec![skt.clone()]),
            bank.app(l.rhs.clone(), vec![skt]),
            false,
        ));
        out.push(Inference {
            rule: "neg_ext",
            premises: vec![c.id],
            literals: skeleton.clone(),
            subst: Subst::new(),
            skeleton,
        });
    }
    Box::new(VecStream::new(out))
}

/// Declares a Skolem symbol abstracting the given type and term variables,
/// with the stated result type.
pub fn skolem_for(
    bank: &TermBank,
    tyvars: &[TyVarId],
    vars: &[(VarId, Type)],
    result: &Type,
) -> SymId {
    // declaration-local type variables are numbered 0..m
    let mut local = HashMap::new();
    for (k, a) in tyvars.iter().enumerate() {
        local.insert(*a, Type::Var(TyVarId(k as u32)));
    }
    let arg_tys: Vec<Type> = vars.iter().map(|(_, ty)| ty.subst(&local)).collect();
    let body = Type::arrow_many(&arg_tys, result.subst(&local));
    bank.sig_mut().fresh_skolem(TypeDecl { bound: tyvars.len() as u32, body })
}

// ---- PruneArg ----

/// Result of one successful argument pruning.
#[derive(Clone, Debug)]
pub struct Pruning {
    pub literals: Vec<Literal>,
    pub subst: Subst,
    /// The variable whose argument was pruned and the 1-based index.
    pub var: VarId,
    pub index: usize,
    /// The witness ρ with (Cσ)ρ = C, constructed from the candidate term
    /// and verified on every pruning.
    pub witness: Subst,
}

/// Candidate cap per (variable, argument index) slot.
const PRUNE_CANDIDATE_CAP: usize = 16;

/// One pruning step: finds a functional variable argument expressible as a
/// function of the remaining arguments and drops it. The caller applies
/// this to a fixpoint. The detection algorithm intersects, per argument
/// slot, the sets of placeholder-generalized candidates over all
/// occurrences; it is deliberately incomplete.
pub fn prune_arg(ctx: &CalcCtx, c: &Clause) -> Option<Pruning> {
    let bank = &ctx.bank;
    // gather all head occurrences of each variable, with argument lists
    let mut occs: HashMap<VarId, (Type, Vec<Vec<Term>>)> = HashMap::new();
    for l in &c.literals {
        for side in [&l.lhs, &l.rhs] {
            collect_var_occurrences(side, &mut occs);
        }
    }
    let mut vars: Vec<&VarId> = occs.keys().collect();
    vars.sort();
    for y in vars {
        let (yty, lists) = &occs[y];
        let k = lists.iter().map(|l| l.len()).min().unwrap_or(0);
        if k == 0 {
            continue;
        }
        let (arg_tys, _) = yty.flatten_arrows();
        // placeholder variables x₁ … x_k, one per slot
        let placeholders: Vec<(VarId, Term)> = arg_tys[..k]
            .iter()
            .map(|ty| bank.fresh_var("prn", ty.clone()))
            .collect();
        // per-slot candidate sets, highest index preferred
        let mut prunable: Option<(usize, Term)> = None;
        for j in (1..=k).rev() {
            let mut inter: Option<Vec<Term>> = None;
            for args in lists {
                let cands = slot_candidates(bank, args, j, k, &placeholders, *y);
                inter = Some(match inter {
                    None => cands,
                    Some(prev) => prev.into_iter().filter(|t| cands.contains(t)).collect(),
                });
                if inter.as_ref().unwrap().is_empty() {
                    break;
                }
            }
            if let Some(mut inter) = inter.filter(|i| !i.is_empty()) {
                inter.sort();
                prunable = Some((j, inter[0].clone()));
                break;
            }
        }
        let (j, candidate) = match prunable {
            Some(p) => p,
            None => continue,
        };
        // σ = {y ↦ λx̄ⱼ. y′ x̄ⱼ₋₁}
        let kept: Vec<Type> = arg_tys
            .iter()
            .take(k)
            .enumerate()
            .filter(|(i, _)| *i != j - 1)
            .map(|(_, t)| t.clone())
            .collect();
        let mut rest_ty = yty.clone();
        for _ in 0..k {
            rest_ty = rest_ty.result().unwrap().clone();
        }
        let y2_ty = Type::arrow_many(&kept, rest_ty);
        let (y2v, y2) = bank.fresh_var(&format!("{}'", bank.var_name(*y)), y2_ty);
        let binders: Vec<Type> = arg_tys[..j].to_vec();
        let body_args: Vec<Term> = (0..j - 1)
            .map(|i| bank.bound(j as u32 - 1 - i as u32, arg_tys[i].clone()))
            .collect();
        let image = bank.lam_many(&binders, bank.app(bank.shift(&y2, 0, j as i64), body_args));
        let sigma = Subst::singleton(*y, image);
        let literals: Vec<Literal> = c.literals.iter().map(|l| l.apply(bank, &sigma)).collect();
        // the pruning must strictly decrease the deletion measure
        let new_size: u32 = literals.iter().map(Literal::weight).sum();
        if new_size >= c.size() {
            continue;
        }
        // witness ρ = {y′ ↦ λx̄ⱼ₋₁ xⱼ₊₁…x_k. y x̄ⱼ₋₁ (u{placeholders↦binders}) xⱼ₊₁…x_k}
        let kept_slots: Vec<usize> = (1..=k).filter(|i| *i != j).collect();
        let mut repl = Subst::new();
        for (m, slot) in kept_slots.iter().enumerate() {
            let dist = (k - 2 - m) as u32;
            repl.tm
                .insert(placeholders[slot - 1].0, bank.bound(dist, arg_tys[slot - 1].clone()));
        }
        let t_inst = repl.apply(bank, &candidate);
        let mut y_args: Vec<Term> = Vec::new();
        for slot in 1..=k {
            if slot == j {
                y_args.push(t_inst.clone());
            } else {
                let m = kept_slots.iter().position(|s| *s == slot).unwrap();
                y_args.push(bank.bound((k - 2 - m) as u32, arg_tys[slot - 1].clone()));
            }
        }
        let yterm = bank.var(*y, yty.clone());
        let witness_body = bank.app(bank.shift(&yterm, 0, (k - 1) as i64), y_args);
        let witness_img = bank.lam_many(&kept, witness_body);
        let witness = Subst::singleton(y2v, witness_img);
        // verify (Cσ)ρ = C
        let replayed: Vec<Literal> = literals.iter().map(|l| l.apply(bank, &witness)).collect();
        if !Clause::same_literals(&replayed, &c.literals) {
            continue;
        }
        return Some(Pruning { literals, subst: sigma, var: *y, index: j, witness });
    }
    None
}

fn collect_var_occurrences(t: &Term, occs: &mut HashMap<VarId, (Type, Vec<Vec<Term>>)>) {
    match t.kind() {
        TermKind::App(head, args) => {
            if let Head::Var(v, ty) = head {
                occs.entry(*v)
                    .or_insert_with(|| (ty.clone(), Vec::new()))
                    .1
                    .push(args.to_vec());
            }
            for a in args {
                collect_var_occurrences(a, occs);
            }
        }
        TermKind::Lam(_, body) => collect_var_occurrences(body, occs),
    }
}

/// All ways (capped) of expressing argument `s_j` over the placeholders of
/// the other slots. Candidates with clause-bound variables or the pruned
/// variable itself are discarded.
fn slot_candidates(
    bank: &TermBank,
    args: &[Term],
    j: usize,
    k: usize,
    placeholders: &[(VarId, Term)],
    y: VarId,
) -> Vec<Term> {
    let sj = &args[j - 1];
    let mut out = Vec::new();
    generalize(bank, sj, args, j, k, placeholders, &mut out);
    out.retain(|t| t.loose == 0 && !t.contains_var(y));
    out.sort();
    out.dedup();
    out.truncate(PRUNE_CANDIDATE_CAP);
    out
}

fn generalize(
    bank: &TermBank,
    t: &Term,
    args: &[Term],
    j: usize,
    k: usize,
    placeholders: &[(VarId, Term)],
    out: &mut Vec<Term>,
) {
    if out.len() >= PRUNE_CANDIDATE_CAP * 4 {
        return;
    }
    let mut variants = vec![t.clone()];
    // replace the whole subterm by a placeholder where it matches another arg
    for i in 1..=k {
        if i != j && &args[i - 1] == t {
            variants.push(placeholders[i - 1].1.clone());
        }
    }
    // and recurse into the argument structure
    match t.kind() {
        TermKind::App(head, targs) if !targs.is_empty() => {
            let mut arg_variants: Vec<Vec<Term>> = vec![Vec::new()];
            for a in targs {
                let mut sub = Vec::new();
                generalize(bank, a, args, j, k, placeholders, &mut sub);
                let mut next = Vec::new();
                for prefix in &arg_variants {
                    for s in &sub {
                        let mut p = prefix.clone();
                        p.push(s.clone());
                        next.push(p);
                        if next.len() > PRUNE_CANDIDATE_CAP * 4 {
                            break;
                        }
                    }
                }
                arg_variants = next;
            }
            for combo in arg_variants {
                match head {
                    Head::Sym(f, tys) => {
                        if let Ok(t2) = bank.try_sym(*f, tys.clone(), combo) {
                            variants.push(t2);
                        }
                    }
                    Head::Var(v, ty) => {
                        variants.push(bank.app(bank.var(*v, ty.clone()), combo));
                    }
                    Head::Bound(..) => {}
                }
            }
        }
        _ => {}
    }
    out.extend(variants);
    out.dedup();
}

/// Checks a pruning's recorded witness against the original clause.
pub fn pruning_witness(ctx: &CalcCtx, original: &Clause, pruning: &Pruning) -> Option<Subst> {
    let bank = &ctx.bank;
    let replayed: Vec<Literal> =
        pruning.literals.iter().map(|l| l.apply(bank, &pruning.witness)).collect();
    if Clause::same_literals(&replayed, &original.literals) {
        Some(pruning.witness.clone())
    } else {
        None
    }
}

// ---- λDemod ----

/// Result of an orange-context demodulation.
#[derive(Clone, Debug)]
pub struct LambdaDemod {
    /// The rewritten clause literals.
    pub rewritten: Vec<Literal>,
    /// The extensionality bridge clause `s⟨x̄⟩⟨tσ⟩ ≈ s⟨x̄⟩⟨t′σ⟩`, present in
    /// the λDemodExt variant.
    pub bridge: Option<Vec<Literal>>,
}

/// Rewrites with a unit equation `t ≈ t′` at an orange position inside a
/// green subterm of `c`. The green subterm must be a λ-expression or an
/// applied variable (so its encoding conceals the position), the rewrite
/// must shrink it, and the unit instance must be smaller than `c`.
///
/// With `ext`, the extensionality bridge clause is returned alongside and
/// both conclusions collectively replace the premise. Without it (plain
/// λDemod) completeness may be lost.
pub fn lambda_demod(ctx: &CalcCtx, eq: &Clause, c: &Clause, ext: bool) -> Option<LambdaDemod> {
    if eq.literals.len() != 1 || !eq.literals[0].positive {
        return None;
    }
    let bank = &ctx.bank;
    let eq_lits = crate::calculus::fresh_variant(bank, eq);
    let l = &eq_lits[0];
    for (t, t2) in l.orientations() {
        if ctx.ord.cmp_terms(&t, &t2) == Comparison::Less {
            continue;
        }
        for (li, lit) in c.literals.iter().enumerate() {
            for lhs in [true, false] {
                let side = if lhs { &lit.lhs } else { &lit.rhs };
                for (_, g) in green_subterms(side) {
                    // condition 1: the rewritten green subterm is a λ or an
                    // applied variable
                    let concealed = g.is_lam()
                        || matches!(g.kind(), TermKind::App(Head::Var(..), a) if !a.is_empty());
                    if !concealed {
                        continue;
                    }
                    for occ in crate::syntax::orange_subterms(&g) {
                        if occ.pos.0.is_empty() {
                            continue;
                        }
                        let mut sigma = Subst::new();
                        if !match_into(bank, &t, &occ.term, &mut sigma, 0) {
                            continue;
                        }
                        let t2s = sigma.apply(bank, &t2);
                        let g2 = rebuild_orange(bank, &g, &occ.pos.0, &t2s);
                        // condition 2: the green subterm shrinks
                        if ctx.ord.cmp_terms(&g, &g2) != Comparison::Greater {
                            continue;
                        }
                        // condition 3: the premise exceeds the bridge
                        let bridge_lit = Literal::eq(g.clone(), g2.clone());
                        if ctx
                            .ord
                            .cmp_literal_lists(&c.literals, std::slice::from_ref(&bridge_lit))
                            != Comparison::Greater
                        {
                            continue;
                        }
                        let mut rewritten = c.literals.clone();
                        let new_side = replace_term_once(bank, side, &g, &g2);
                        rewritten[li] = if lhs {
                            Literal::new(new_side, lit.rhs.clone(), lit.positive)
                        } else {
                            Literal::new(lit.lhs.clone(), new_side, lit.positive)
                        };
                        return Some(LambdaDemod {
                            rewritten,
                            bridge: ext.then(|| vec![bridge_lit]),
                        });
                    }
                }
            }
        }
    }
    None
}

/// Replaces an orange subterm along a path, renormalizing on the way up
/// (an η-contraction may fire when a λ body changes).
fn rebuild_orange(bank: &TermBank, t: &Term, path: &[OrangeStep], repl: &Term) -> Term {
    match path.split_first() {
        None => repl.clone(),
        Some((OrangeStep::Arg(i), rest)) => match t.kind() {
            TermKind::App(head, args) => {
                let mut nargs = args.clone();
                nargs[*i as usize - 1] =
                    rebuild_orange(bank, &args[*i as usize - 1], rest, repl);
                match head {
                    Head::Sym(f, tys) => bank.sym(*f, tys.clone(), nargs),
                    Head::Var(v, ty) => bank.app(bank.var(*v, ty.clone()), nargs),
                    Head::Bound(i2, ty) => bank.app(bank.bound(*i2, ty.clone()), nargs),
                }
            }
            TermKind::Lam(..) => unreachable!(),
        },
        Some((OrangeStep::Body, rest)) => match t.kind() {
            TermKind::Lam(bty, body) => {
                bank.lam(bty.clone(), rebuild_orange(bank, body, rest, repl))
            }
            _ => unreachable!(),
        },
    }
}

/// Replaces the first green occurrence of `from` in `t` by `to`.
fn replace_term_once(bank: &TermBank, t: &Term, from: &Term, to: &Term) -> Term {
    for (pos, sub) in green_subterms(t) {
        if &sub == from {
            return crate::syntax::replace_green(bank, t, &pos, to).expect("same type");
        }
    }
    t.clone()
}

// ---- λSup ----

struct LambdaSupSite {
    d_lit: usize,
    t: Term,
    t2: Term,
    c_lit: usize,
    lhs: bool,
    path: Vec<OrangeStep>,
    /// binder stand-ins, outermost first
    xvars: Vec<(VarId, Type)>,
    u_open: Term,
    stream: crate::unify::UnifierStream,
}

pub struct LambdaSupStream {
    ctx: CalcCtx,
    d_id: crate::syntax::ClauseId,
    c_id: crate::syntax::ClauseId,
    d_lits: Vec<Literal>,
    c_lits: Vec<Literal>,
    skolem_budget: std::sync::Arc<std::sync::atomic::AtomicI64>,
    sites: std::collections::VecDeque<LambdaSupSite>,
}

/// Superposition at orange subterms under at least one binder. Escaping
/// bound variables in the conclusion are represented by Skolem terms over
/// the variables their binders depend on.
pub fn infer_lambda_sup(
    ctx: &CalcCtx,
    d: &Clause,
    c: &Clause,
    skolem_budget: std::sync::Arc<std::sync::atomic::AtomicI64>,
) -> Box<dyn InfStream> {
    let bank = &ctx.bank;
    let d_lits = crate::calculus::fresh_variant(bank, d);
    let c_lits = c.literals.clone();
    let mut base_vars: Vec<VarId> = Vec::new();
    for l in d_lits.iter().chain(c_lits.iter()) {
        for (v, _) in l.vars() {
            if !base_vars.contains(&v) {
                base_vars.push(v);
            }
        }
    }
    let mut sites = std::collections::VecDeque::new();
    for (d_lit, dl) in d_lits.iter().enumerate() {
        if !dl.positive {
            continue;
        }
        for (t, t2) in dl.orientations() {
            if ctx.ord.cmp_terms(&t, &t2) == Comparison::Less {
                continue;
            }
            for (c_lit, cl) in c_lits.iter().enumerate() {
                for lhs in [true, false] {
                    let side = if lhs { &cl.lhs } else { &cl.rhs };
                    let other = if lhs { &cl.rhs } else { &cl.lhs };
                    if ctx.ord.cmp_terms(side, other) == Comparison::Less {
                        continue;
                    }
                    for occ in crate::syntax::orange_subterms(side) {
                        // condition 10: at least one binder is crossed
                        if occ.binders.is_empty() {
                            continue;
                        }
                        // open the binders as fresh free variables
                        let (xvars, u_open) =
                            open_occurrence(bank, side, &occ.pos.0);
                        if u_open.is_fluid() || u_open.is_bare_var() {
                            continue;
                        }
                        if let (Some(Head::Sym(f, _)), Some(Head::Sym(g, _))) =
                            (t.head(), u_open.head())
                        {
                            if f != g && !t.is_lam() && !u_open.is_lam() {
                                continue;
                            }
                        }
                        let mut xv = base_vars.clone();
                        xv.extend(xvars.iter().map(|(v, _)| *v));
                        let stream = csu(bank, &ctx.ucfg, &t, &u_open, &xv);
                        sites.push_back(LambdaSupSite {
                            d_lit,
                            t: t.clone(),
                            t2: t2.clone(),
                            c_lit,
                            lhs,
                            path: occ.pos.0.clone(),
                            xvars,
                            u_open,
                            stream,
                        });
                    }
                }
            }
        }
    }
    Box::new(LambdaSupStream {
        ctx: ctx.clone(),
        d_id: d.id,
        c_id: c.id,
        d_lits,
        c_lits,
        skolem_budget,
        sites,
    })
}

/// Opens the λ binders along an orange path, replacing each by a fresh
/// free variable; returns the stand-ins and the fully opened subterm.
fn open_occurrence(bank: &TermBank, t: &Term, path: &[OrangeStep]) -> (Vec<(VarId, Type)>, Term) {
    let mut xvars = Vec::new();
    let mut cur = t.clone();
    for step in path {
        match (step, cur.kind().clone()) {
            (OrangeStep::Arg(i), TermKind::App(_, args)) => {
                cur = args[*i as usize - 1].clone();
            }
            (OrangeStep::Body, TermKind::Lam(bty, body)) => {
                let (xv, _) = bank.fresh_var("lsx", bty.clone());
                cur = bank.open_with(&body, xv, bty.clone());
                xvars.push((xv, bty.clone()));
            }
            _ => unreachable!("path mismatch"),
        }
    }
    (xvars, cur)
}

impl LambdaSupStream {
    fn finish(&self, site: &LambdaSupSite, sigma: Subst) -> Option<Inference> {
        let ctx = &self.ctx;
        let bank = &ctx.bank;
        let ord = &ctx.ord;
        // condition 11: x̄σ = x̄
        for (xv, xty) in &site.xvars {
            if let Some(img) = sigma.get(*xv) {
                if img.as_var().map(|(v, _)| v) != Some(*xv) {
                    return None;
                }
            }
            let _ = xty;
        }
        // condition 12: x̄ do not occur in yσ for variables y of u
        for (uv, _) in site.u_open.vars.iter() {
            if site.xvars.iter().any(|(xv, _)| xv == uv) {
                continue;
            }
            if let Some(img) = sigma.get(*uv) {
                if site.xvars.iter().any(|(xv, _)| img.contains_var(*xv)) {
                    return None;
                }
            }
        }
        let ts = sigma.apply(bank, &site.t);
        let t2s = sigma.apply(bank, &site.t2);
        // condition 5
        if !ord.not_leq(&ts, &t2s) {
            return None;
        }
        let cl = &self.c_lits[site.c_lit];
        let (side, other) = if site.lhs { (&cl.lhs, &cl.rhs) } else { (&cl.rhs, &cl.lhs) };
        let side_s = sigma.apply(bank, side);
        let other_s = sigma.apply(bank, other);
        // condition 6
        if !ord.not_leq(&side_s, &other_s) {
            return None;
        }
        // conditions 8 and 9
        if !ord.eligible(bank, site.d_lit, &self.d_lits, &sigma, true) {
            return None;
        }
        if !ord.eligible(bank, site.c_lit, &self.c_lits, &sigma, cl.positive) {
            return None;
        }
        // build both folded versions (u and t′) with σ applied, collecting
        // the λ-expression at each binder layer for the dependency sets
        let repl = sigma.apply(bank, &site.t2);
        let kept = sigma.apply(bank, &site.u_open);
        let (new_side, lam_new) = fold_with(bank, side, &site.path, &sigma, &site.xvars, &repl);
        let (_, lam_old) = fold_with(bank, side, &site.path, &sigma, &site.xvars, &kept);
        // dependency sets P, innermost binder last
        let n = site.xvars.len();
        let mut term_deps: Vec<Vec<(VarId, Type)>> = vec![Vec::new(); n];
        let mut ty_deps: Vec<Vec<TyVarId>> = vec![Vec::new(); n];
        for i in 0..n {
            let mut tvars: Vec<(VarId, Type)> = Vec::new();
            let mut tys: Vec<TyVarId> = Vec::new();
            for lam in [&lam_old[i], &lam_new[i]] {
                for (v, ty) in lam.vars.iter() {
                    if let Some(j) = site.xvars.iter().position(|(xv, _)| xv == v) {
                        // an outer stand-in: include its own dependencies
                        for d in &term_deps[j] {
                            if !tvars.iter().any(|(w, _)| *w == d.0) {
                                tvars.push(d.clone());
                            }
                        }
                        for a in &ty_deps[j] {
                            if !tys.contains(a) {
                                tys.push(*a);
                            }
                        }
                    } else if !tvars.iter().any(|(w, _)| w == v) {
                        tvars.push((*v, ty.clone()));
                    }
                }
                for a in lam.tyvars.iter() {
                    if !tys.contains(a) {
                        tys.push(*a);
                    }
                }
            }
            // type variables of the binder's own type
            let bty = sigma.apply_ty(&site.xvars[i].1);
            for a in bty.type_vars() {
                if !tys.contains(&a) {
                    tys.push(a);
                }
            }
            tvars.sort_by_key(|(v, _)| *v);
            tys.sort_unstable();
            term_deps[i] = tvars;
            ty_deps[i] = tys;
        }
        // Skolem budget
        let budget = &self.skolem_budget;
        if budget.fetch_sub(n as i64, std::sync::atomic::Ordering::Relaxed) < n as i64 {
            budget.fetch_add(n as i64, std::sync::atomic::Ordering::Relaxed);
            return None;
        }
        // ρ: each stand-in becomes a Skolem over its dependencies
        let mut rho = Subst::new();
        for i in 0..n {
            let bty = sigma.apply_ty(&site.xvars[i].1);
            let sk = skolem_for(bank, &ty_deps[i], &term_deps[i], &bty);
            let skt = bank.sym(
                sk,
                ty_deps[i].iter().map(|a| Type::Var(*a)).collect(),
                term_deps[i].iter().map(|(v, ty)| bank.var(*v, ty.clone())).collect(),
            );
            rho.tm.insert(site.xvars[i].0, skt);
        }
        let mut literals: Vec<Literal> = Vec::new();
        for (i, l) in self.d_lits.iter().enumerate() {
            if i != site.d_lit {
                literals.push(l.apply(bank, &sigma).apply(bank, &rho));
            }
        }
        for (i, l) in self.c_lits.iter().enumerate() {
            if i != site.c_lit {
                literals.push(l.apply(bank, &sigma).apply(bank, &rho));
            }
        }
        let new_side = rho.apply(bank, &new_side);
        let other_final = rho.apply(bank, &other_s);
        literals.push(if site.lhs {
            Literal::new(new_side, other_final, cl.positive)
        } else {
            Literal::new(other_final, new_side, cl.positive)
        });
        // escaped binders must all be gone
        debug_assert!(literals
            .iter()
            .all(|l| site.xvars.iter().all(|(x, _)| !l.lhs.contains_var(*x) && !l.rhs.contains_var(*x))));
        let subst = sigma.compose(bank, &rho);
        Some(Inference {
            rule: "lambda_sup",
            premises: vec![self.d_id, self.c_id],
            literals: literals.clone(),
            subst,
            skeleton: literals,
        })
    }
}

/// Folds a σ-applied replacement back along an orange path, reclosing the
/// opened binders (capturing σ-introduced stand-in occurrences) and
/// collecting the λ-expression formed at each binder layer (outermost
/// first).
fn fold_with(
    bank: &TermBank,
    side: &Term,
    path: &[OrangeStep],
    sigma: &Subst,
    xvars: &[(VarId, Type)],
    inner: &Term,
) -> (Term, Vec<Term>) {
    fn go(
        bank: &TermBank,
        t: &Term,
        path: &[OrangeStep],
        sigma: &Subst,
        xvars: &[(VarId, Type)],
        binder_idx: usize,
        inner: &Term,
        lams: &mut Vec<Term>,
    ) -> Term {
        match path.split_first() {
            None => inner.clone(),
            Some((OrangeStep::Arg(i), rest)) => match t.kind() {
                TermKind::App(head, args) => {
                    // the enclosing Body steps opened this node wholesale,
                    // so siblings already use the stand-in variables
                    let mut nargs: Vec<Term> = Vec::with_capacity(args.len());
                    for (k, a) in args.iter().enumerate() {
                        if k == *i as usize - 1 {
                            nargs.push(go(bank, a, rest, sigma, xvars, binder_idx, inner, lams));
                        } else {
                            nargs.push(sigma.apply(bank, a));
                        }
                    }
                    let head_term = match head {
                        Head::Sym(f, tys) => bank.sym(
                            *f,
                            tys.iter().map(|ty| sigma.apply_ty(ty)).collect(),
                            nargs,
                        ),
                        Head::Var(v, ty) => {
                            let h = sigma
                                .get(*v)
                                .cloned()
                                .unwrap_or_else(|| bank.var(*v, sigma.apply_ty(ty)));
                            bank.app(h, nargs)
                        }
                        Head::Bound(b, ty) => bank.app(bank.bound(*b, sigma.apply_ty(ty)), nargs),
                    };
                    head_term
                }
                TermKind::Lam(..) => unreachable!(),
            },
            Some((OrangeStep::Body, rest)) => match t.kind() {
                TermKind::Lam(bty, body) => {
                    let (xv, xty) = &xvars[binder_idx];
                    let opened = bank.open_with(body, *xv, xty.clone());
                    let nbody =
                        go(bank, &opened, rest, sigma, xvars, binder_idx + 1, inner, lams);
                    let closed = bank.close_var(&nbody, *xv, 0);
                    let lam = bank.lam(sigma.apply_ty(bty), closed);
                    lams.push(lam.clone());
                    lam
                }
                _ => unreachable!(),
            },
        }
    }
    let mut lams = Vec::new();
    let out = go(bank, side, path, sigma, xvars, 0, inner, &mut lams);
    // λs were collected innermost-first; flip to outermost-first
    lams.reverse();
    (out, lams)
}

impl InfStream for LambdaSupStream {
    fn next(&mut self) -> Option<crate::calculus::InfStep> {
        use crate::calculus::InfStep;
        while let Some(mut site) = self.sites.pop_front() {
            match site.stream.next() {
                None => continue,
                Some(UnifStep::Pending) => {
                    self.sites.push_back(site);
                    return Some(InfStep::Pending);
                }
                Some(UnifStep::Unifier(sigma)) => {
                    let inf = self.finish(&site, sigma);
                    self.sites.push_back(site);
                    match inf {
                        Some(i) => return Some(InfStep::Conclusion(i)),
                        None => return Some(InfStep::Pending),
                    }
                }
            }
        }
        None
    }
}

// ---- Abs ----

/// Largest-common-green-context decomposition: the disagreement pairs of
/// two same-type terms.
fn green_disagreements(s: &Term, t: &Term) -> Vec<(Term, Term)> {
    if s == t {
        return Vec::new();
    }
    match (s.kind(), t.kind()) {
        (TermKind::App(Head::Sym(f, ftys), sargs), TermKind::App(Head::Sym(g, gtys), targs))
            if f == g && ftys == gtys && sargs.len() == targs.len() =>
        {
            sargs
                .iter()
                .zip(targs.iter())
                .flat_map(|(a, b)| green_disagreements(a, b))
                .collect()
        }
        _ => vec![(s.clone(), t.clone())],
    }
}

/// The abstracting variants AbsSup, AbsERes, AbsEFact: like the core rules
/// but with only the most general type unifier; the term disagreements
/// under the largest common green context become negative literals. Fires
/// only when some disagreement side has functional type.
pub fn infer_abs_eres(ctx: &CalcCtx, c: &Clause) -> Box<dyn InfStream> {
    let bank = &ctx.bank;
    let mut out = Vec::new();
    for (i, l) in c.literals.iter().enumerate() {
        if l.positive {
            continue;
        }
        let sigma = match unify_types(l.lhs.ty(), l.rhs.ty()) {
            Some(m) => Subst::from_ty_map(m),
            None => continue,
        };
        if !ctx.ord.eligible(bank, i, &c.literals, &sigma, false) {
            continue;
        }
        let u = sigma.apply(bank, &l.lhs);
        let u2 = sigma.apply(bank, &l.rhs);
        let pairs = green_disagreements(&u, &u2);
        if pairs.is_empty() || !pairs.iter().any(|(a, _)| a.ty().is_arrow()) {
            continue;
        }
        let mut literals: Vec<Literal> = c
            .literals
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != i)
            .map(|(_, x)| x.apply(bank, &sigma))
            .collect();
        for (a, b) in pairs {
            literals.push(Literal::neq(a, b));
        }
        out.push(Inference {
            rule: "abs_eres",
            premises: vec![c.id],
            literals: literals.clone(),
            subst: sigma,
            skeleton: literals,
        });
    }
    Box::new(VecStream::new(out))
}

pub fn infer_abs_sup(ctx: &CalcCtx, d: &Clause, c: &Clause) -> Box<dyn InfStream> {
    let bank = &ctx.bank;
    let d_lits = crate::calculus::fresh_variant(bank, d);
    let mut out = Vec::new();
    for (di, dl) in d_lits.iter().enumerate() {
        if !dl.positive {
            continue;
        }
        for (t, t2) in dl.orientations() {
            if ctx.ord.cmp_terms(&t, &t2) == Comparison::Less {
                continue;
            }
            for (ci, cl) in c.literals.iter().enumerate() {
                for lhs in [true, false] {
                    let side = if lhs { &cl.lhs } else { &cl.rhs };
                    let other = if lhs { &cl.rhs } else { &cl.lhs };
                    for (pos, u) in green_subterms(side) {
                        if u.is_fluid() || u.is_bare_var() {
                            continue;
                        }
                        let sigma = match unify_types(t.ty(), u.ty()) {
                            Some(m) => Subst::from_ty_map(m),
                            None => continue,
                        };
                        let ts = sigma.apply(bank, &t);
                        let us = sigma.apply(bank, &u);
                        let pairs = green_disagreements(&ts, &us);
                        if pairs.is_empty() || !pairs.iter().any(|(a, _)| a.ty().is_arrow()) {
                            continue;
                        }
                        // core side conditions under the type unifier
                        if !ctx.ord.not_leq(&ts, &sigma.apply(bank, &t2)) {
                            continue;
                        }
                        let side_s = sigma.apply(bank, side);
                        let other_s = sigma.apply(bank, other);
                        if !ctx.ord.not_leq(&side_s, &other_s) {
                            continue;
                        }
                        if !ctx.ord.eligible(bank, di, &d_lits, &sigma, true)
                            || !ctx.ord.eligible(bank, ci, &c.literals, &sigma, cl.positive)
                        {
                            continue;
                        }
                        let new_side = crate::calculus::replace_green_unchecked(
                            bank, side, &pos.0, &t2,
                        );
                        let mut literals: Vec<Literal> = Vec::new();
                        for (k, x) in d_lits.iter().enumerate() {
                            if k != di {
                                literals.push(x.apply(bank, &sigma));
                            }
                        }
                        for (k, x) in c.literals.iter().enumerate() {
                            if k != ci {
                                literals.push(x.apply(bank, &sigma));
                            }
                        }
                        let lit = if lhs {
                            raw_literal(new_side, other.clone(), cl.positive)
                        } else {
                            raw_literal(other.clone(), new_side, cl.positive)
                        };
                        literals.push(lit.apply(bank, &sigma));
                        for (a, b) in pairs {
                            literals.push(Literal::neq(a, b));
                        }
                        out.push(Inference {
                            rule: "abs_sup",
                            premises: vec![d.id, c.id],
                            literals: literals.clone(),
                            subst: sigma,
                            skeleton: literals,
                        });
                    }
                }
            }
        }
    }
    Box::new(VecStream::new(out))
}

pub fn infer_abs_efact(ctx: &CalcCtx, c: &Clause) -> Box<dyn InfStream> {
    let bank = &ctx.bank;
    let mut out = Vec::new();
    for (i, li) in c.literals.iter().enumerate() {
        if !li.positive {
            continue;
        }
        for (j, lj) in c.literals.iter().enumerate() {
            if i == j || !lj.positive {
                continue;
            }
            for (u, v) in li.orientations() {
                if ctx.ord.cmp_terms(&u, &v) == Comparison::Less {
                    continue;
                }
                for (u2, v2) in lj.orientations() {
                    let sigma = match unify_types(u.ty(), u2.ty()) {
                        Some(m) => Subst::from_ty_map(m),
                        None => continue,
                    };
                    let us = sigma.apply(bank, &u);
                    let u2s = sigma.apply(bank, &u2);
                    let pairs = green_disagreements(&us, &u2s);
                    if pairs.is_empty() || !pairs.iter().any(|(a, _)| a.ty().is_arrow()) {
                        continue;
                    }
                    if !ctx.ord.not_leq(&us, &sigma.apply(bank, &v)) {
                        continue;
                    }
                    if !ctx.ord.eligible(bank, i, &c.literals, &sigma, false) {
                        continue;
                    }
                    let mut literals: Vec<Literal> = Vec::new();
                    for (k, x) in c.literals.iter().enumerate() {
                        if k != i && k != j {
                            literals.push(x.apply(bank, &sigma));
                        }
                    }
                    literals.push(Literal::neq(
                        sigma.apply(bank, &v),
                        sigma.apply(bank, &v2),
                    ));
                    literals.push(Literal::eq(us.clone(), sigma.apply(bank, &v2)));
                    for (a, b) in pairs {
                        literals.push(Literal::neq(a, b));
                    }
                    out.push(Inference {
                        rule: "abs_efact",
                        premises: vec![c.id],
                        literals: literals.clone(),
                        subst: sigma,
                        skeleton: literals,
                    });
                }
            }
        }
    }
    Box::new(VecStream::new(out))
}

// ---- ExtInst ----

/// Instantiates the extensionality axiom at two same-type functional
/// terms: `s (diff s s′) ≉ s′ (diff s s′) ∨ s ≈ s′`.
pub fn ext_inst(bank: &TermBank, s: &Term, s2: &Term) -> Result<Vec<Literal>, crate::syntax::TermError> {
    if s.ty() != s2.ty() || !s.ty().is_arrow() {
        return Err(crate::syntax::TermError::TypeMismatch {
            expected: format!("{}", s.ty()),
            found: format!("{}", s2.ty()),
            context: "ext_inst".into(),
        });
    }
    let (arg, res) = (s.ty().arg().unwrap().clone(), s.ty().result().unwrap().clone());
    let diff = bank.sym(DIFF, vec![arg, res], vec![s.clone(), s2.clone()]);
    let lhs = bank.app(s.clone(), vec![diff.clone()]);
    let rhs = bank.app(s2.clone(), vec![diff]);
    Ok(vec![Literal::neq(lhs, rhs), Literal::eq(s.clone(), s2.clone())])
}
