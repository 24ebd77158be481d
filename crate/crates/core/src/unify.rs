//! Higher-order unification: lazy, fuel-bounded enumeration of complete
//! sets of unifiers, a Miller-pattern fast path, and one-sided matching
//! for simplification.
//!
//! The enumeration is a transition system: delete and decompose for
//! rigid-rigid pairs, imitation and projection bindings for flex-rigid
//! pairs, identification (distinct heads) and elimination (equal heads)
//! plus iteration bindings for flex-flex pairs. Fuel counts binding
//! applications per branch; branches are explored breadth-first by cost.
//! Streams interleave progress markers so the saturation loop can dovetail
//! nonterminating problems.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::syntax::{
    unify_types_into, Head, Subst, Term, TermBank, TermKind, Type, VarId,
};

#[derive(Clone, Debug)]
pub struct UnifConfig {
    /// Maximum number of binding-rule applications per branch.
    pub fuel: u32,
    /// Maximum number of unifiers emitted per problem.
    pub max_unifiers: usize,
    /// Solve Miller-pattern problems exactly, emitting at most one unifier.
    pub pattern_fast_path: bool,
    /// Enable the flex-flex bindings; disabling sacrifices completeness.
    pub flex_flex: bool,
    /// Transitions processed per `next` call before a progress marker.
    pub progress_interval: u32,
}

impl Default for UnifConfig {
    fn default() -> UnifConfig {
        UnifConfig {
            fuel: 7,
            max_unifiers: 16,
            pattern_fast_path: true,
            flex_flex: true,
            progress_interval: 64,
        }
    }
}

/// One pull from a unifier stream: a unifier, or a progress marker meaning
/// "still searching, no unifier yet".
#[derive(Clone, Debug)]
pub enum UnifStep {
    Pending,
    Unifier(Subst),
}

#[derive(Clone)]
struct Node {
    constraints: Vec<(Term, Term)>,
    subst: Subst,
    fuel_used: u32,
}

/// A lazy stream of unifiers forming a complete set up to the fuel bound.
/// Single-consumer.
pub struct UnifierStream {
    bank: TermBank,
    cfg: UnifConfig,
    queue: VecDeque<Node>,
    xvars: Vec<VarId>,
    emitted: usize,
    seen: HashSet<String>,
    exhausted: bool,
    problem: Option<(Term, Term)>,
    ready: VecDeque<Subst>,
}

/// Builds the complete-set-of-unifiers stream for `s ≟ t` on the variable
/// set `xvars`. Type unification is attempted first; a type clash yields an
/// empty stream.
pub fn csu(bank: &TermBank, cfg: &UnifConfig, s: &Term, t: &Term, xvars: &[VarId]) -> UnifierStream {
    let mut stream = UnifierStream {
        bank: bank.clone(),
        cfg: cfg.clone(),
        queue: VecDeque::new(),
        xvars: xvars.to_vec(),
        emitted: 0,
        seen: HashSet::new(),
        exhausted: false,
        problem: Some((s.clone(), t.clone())),
        ready: VecDeque::new(),
    };
    let mut tymap = HashMap::new();
    if !unify_types_into(s.ty(), t.ty(), &mut tymap) {
        stream.exhausted = true;
        return stream;
    }
    let subst = Subst::from_ty_map(tymap);
    if cfg.pattern_fast_path && is_pattern(s) && is_pattern(t) {
        match pattern_unify(bank, s, t, subst.clone()) {
            PatternOutcome::Solved(sigma) => {
                stream.ready.push_back(sigma);
                return stream;
            }
            PatternOutcome::NoUnifier => {
                stream.exhausted = true;
                return stream;
            }
            PatternOutcome::Bail => {}
        }
    }
    stream.queue.push_back(Node {
        constraints: vec![(s.clone(), t.clone())],
        subst,
        fuel_used: 0,
    });
    stream
}

enum Outcome {
    Solved(Subst),
    Split(Vec<Node>),
    Failed,
}

/// True if every free-variable occurrence is applied only to distinct
/// bound variables (a Miller pattern).
pub fn is_pattern(t: &Term) -> bool {
    match t.kind() {
        TermKind::App(Head::Var(..), args) => {
            let mut seen = Vec::new();
            args.iter().all(|a| match a.kind() {
                TermKind::App(Head::Bound(i, _), inner) if inner.is_empty() => {
                    if seen.contains(i) {
                        false
                    } else {
                        seen.push(*i);
                        true
                    }
                }
                _ => false,
            })
        }
        TermKind::App(_, args) => args.iter().all(is_pattern),
        TermKind::Lam(_, body) => is_pattern(body),
    }
}

enum PatternOutcome {
    Solved(Subst),
    /// The problem left the decidable fragment; fall back to enumeration.
    Bail,
    NoUnifier,
}

/// Unification restricted to Miller patterns: at most one, most general
/// unifier. Bails out on anything outside the fragment.
fn pattern_unify(bank: &TermBank, s: &Term, t: &Term, init: Subst) -> PatternOutcome {
    let mut subst = init;
    let mut work = vec![(s.clone(), t.clone())];
    let mut guard = 0;
    while let Some((s, t)) = work.pop() {
        guard += 1;
        if guard > 5_000 {
            return PatternOutcome::Bail;
        }
        let s = subst.apply(bank, &s);
        let t = subst.apply(bank, &t);
        if s == t {
            continue;
        }
        if s.ty().is_arrow() {
            let sb = match s.kind() {
                TermKind::Lam(_, b) => b.clone(),
                _ => bank.eta_expand_once(&s).1,
            };
            let tb = match t.kind() {
                TermKind::Lam(_, b) => b.clone(),
                _ => bank.eta_expand_once(&t).1,
            };
            work.push((sb, tb));
            continue;
        }
        let s_flex = matches!(s.head(), Some(Head::Var(..)));
        let t_flex = matches!(t.head(), Some(Head::Var(..)));
        match (s_flex, t_flex) {
            (false, false) => match (s.head().unwrap(), t.head().unwrap()) {
                (Head::Sym(f, ftys), Head::Sym(g, gtys)) => {
                    if f != g {
                        return PatternOutcome::NoUnifier;
                    }
                    for (a, b) in ftys.iter().zip(gtys.iter()) {
                        if !unify_types_into(a, b, &mut subst.ty) {
                            return PatternOutcome::NoUnifier;
                        }
                    }
                    for pair in s.args().iter().cloned().zip(t.args().iter().cloned()) {
                        work.push(pair);
                    }
                }
                (Head::Bound(i, _), Head::Bound(j, _)) => {
                    if i != j {
                        return PatternOutcome::NoUnifier;
                    }
                    for pair in s.args().iter().cloned().zip(t.args().iter().cloned()) {
                        work.push(pair);
                    }
                }
                _ => return PatternOutcome::NoUnifier,
            },
            (true, false) | (false, true) => {
                let (flex, rigid) = if s_flex { (&s, &t) } else { (&t, &s) };
                let (yv, _) = flex_head(flex);
                if rigid.contains_var(yv) {
                    return PatternOutcome::Bail;
                }
                match pattern_bind(bank, flex, rigid) {
                    Some(image) => subst.bind(bank, yv, image),
                    None => return PatternOutcome::Bail,
                }
            }
            (true, true) => {
                let (yv, yty) = flex_head(&s);
                let (zv, zty) = flex_head(&t);
                let sidx = bound_args(&s);
                let tidx = bound_args(&t);
                let (sidx, tidx) = match (sidx, tidx) {
                    (Some(a), Some(b)) => (a, b),
                    _ => return PatternOutcome::Bail,
                };
                let n = sidx.len();
                let m = tidx.len();
                let (s_args, res) = arg_and_result(&yty, n);
                let (t_args, _) = arg_and_result(&zty, m);
                if yv == zv {
                    // keep positions where both sides pass the same binder
                    let kept: Vec<usize> = (0..n).filter(|&i| sidx[i] == tidx[i]).collect();
                    let kept_tys: Vec<Type> = kept.iter().map(|&i| s_args[i].clone()).collect();
                    let (_, h) = bank.fresh_var("h", Type::arrow_many(&kept_tys, res.clone()));
                    let body_args: Vec<Term> = kept
                        .iter()
                        .map(|&i| bank.bound(n as u32 - 1 - i as u32, s_args[i].clone()))
                        .collect();
                    let binding =
                        bank.lam_many(&s_args, bank.app(bank.shift(&h, 0, n as i64), body_args));
                    subst.bind(bank, yv, binding);
                } else {
                    // h over the bound variables visible to both sides
                    let mut common: Vec<(usize, usize)> = Vec::new();
                    for (i, b) in sidx.iter().enumerate() {
                        if let Some(j) = tidx.iter().position(|c| c == b) {
                            common.push((i, j));
                        }
                    }
                    let h_tys: Vec<Type> =
                        common.iter().map(|&(i, _)| s_args[i].clone()).collect();
                    let (_, h) = bank.fresh_var("h", Type::arrow_many(&h_tys, res.clone()));
                    let y_body: Vec<Term> = common
                        .iter()
                        .map(|&(i, _)| bank.bound(n as u32 - 1 - i as u32, s_args[i].clone()))
                        .collect();
                    let y_bind =
                        bank.lam_many(&s_args, bank.app(bank.shift(&h, 0, n as i64), y_body));
                    let z_body: Vec<Term> = common
                        .iter()
                        .map(|&(_, j)| bank.bound(m as u32 - 1 - j as u32, t_args[j].clone()))
                        .collect();
                    let z_bind =
                        bank.lam_many(&t_args, bank.app(bank.shift(&h, 0, m as i64), z_body));
                    subst.bind(bank, yv, y_bind);
                    subst.bind(bank, zv, z_bind);
                }
            }
        }
    }
    PatternOutcome::Solved(subst)
}

/// The distinct bound-variable argument indices of a pattern occurrence.
fn bound_args(t: &Term) -> Option<Vec<u32>> {
    let mut out = Vec::new();
    for a in t.args() {
        match a.kind() {
            TermKind::App(Head::Bound(i, _), inner) if inner.is_empty() && !out.contains(i) => {
                out.push(*i)
            }
            _ => return None,
        }
    }
    Some(out)
}

/// Inverts a rigid pattern term against a flex pattern occurrence.
fn pattern_bind(bank: &TermBank, flex: &Term, rigid: &Term) -> Option<Term> {
    let idxs = bound_args(flex)?;
    let tys: Vec<Type> = flex.args().iter().map(|a| a.ty().clone()).collect();
    // entry depth: high enough that all loose indices count as internal
    let d0 = rigid.loose.max(flex.loose);
    invert(bank, rigid, &idxs, &tys, d0)
}

impl UnifierStream {
    /// Pulls the next item. `None` means the stream is exhausted.
    pub fn next(&mut self) -> Option<UnifStep> {
        if self.exhausted || self.emitted >= self.cfg.max_unifiers {
            return None;
        }
        while let Some(s) = self.ready.pop_front() {
            if let Some(step) = self.finish(s) {
                return Some(step);
            }
        }
        let mut steps = 0;
        while let Some(node) = self.queue.pop_front() {
            steps += 1;
            match self.process(node) {
                Outcome::Solved(s) => {
                    if let Some(step) = self.finish(s) {
                        return Some(step);
                    }
                }
                Outcome::Split(children) => {
                    for c in children {
                        self.queue.push_back(c);
                    }
                }
                Outcome::Failed => {}
            }
            if steps >= self.cfg.progress_interval {
                return Some(UnifStep::Pending);
            }
        }
        self.exhausted = true;
        None
    }

    /// Restriction, soundness check, and deduplication of a solved branch.
    fn finish(&mut self, s: Subst) -> Option<UnifStep> {
        let out = s.restricted_idempotent(&self.bank, self.xvars.iter().copied());
        if cfg!(debug_assertions) {
            if let Some((a, b)) = &self.problem {
                let sa = s.apply(&self.bank, a);
                let sb = s.apply(&self.bank, b);
                debug_assert_eq!(sa, sb, "emitted substitution must unify");
            }
        }
        let key = self.subst_key(&out);
        if self.seen.insert(key) {
            self.emitted += 1;
            Some(UnifStep::Unifier(out))
        } else {
            None
        }
    }

    /// Collects up to `limit` unifiers, ignoring progress markers. For tests
    /// and non-interleaved callers.
    pub fn collect_unifiers(&mut self, limit: usize) -> Vec<Subst> {
        let mut out = Vec::new();
        while out.len() < limit {
            match self.next() {
                None => break,
                Some(UnifStep::Pending) => continue,
                Some(UnifStep::Unifier(s)) => out.push(s),
            }
        }
        out
    }

    fn subst_key(&self, s: &Subst) -> String {
        let mut parts: Vec<String> = Vec::new();
        let mut vars = self.xvars.clone();
        vars.sort_unstable();
        vars.dedup();
        for v in vars {
            if let Some(t) = s.get(v) {
                parts.push(format!("{}:{}", v.0, crate::syntax::print::term_string(&self.bank, t)));
            }
        }
        parts.join(";")
    }

    /// Runs free transitions to a fixpoint, then applies one layer of
    /// binding rules.
    fn process(&self, mut node: Node) -> Outcome {
        let bank = &self.bank;
        let mut guard = 0;
        loop {
            guard += 1;
            if guard > 10_000 {
                return Outcome::Failed;
            }
            let (s, t) = match node.constraints.pop() {
                None => return Outcome::Solved(node.subst),
                Some((s, t)) => (s, t),
            };
            let s = node.subst.apply(bank, &s);
            let t = node.subst.apply(bank, &t);
            if s == t {
                continue;
            }
            // descend under λs, η-expanding as needed, down to base type
            if s.ty().is_arrow() {
                match (s.kind(), t.kind()) {
                    (TermKind::Lam(_, b1), TermKind::Lam(_, b2)) => {
                        node.constraints.push((b1.clone(), b2.clone()));
                        continue;
                    }
                    (TermKind::Lam(_, b1), _) => {
                        let (_, tb) = bank.eta_expand_once(&t);
                        node.constraints.push((b1.clone(), tb));
                        continue;
                    }
                    (_, TermKind::Lam(_, b2)) => {
                        let (_, sb) = bank.eta_expand_once(&s);
                        node.constraints.push((sb, b2.clone()));
                        continue;
                    }
                    _ => {
                        let (_, sb) = bank.eta_expand_once(&s);
                        let (_, tb) = bank.eta_expand_once(&t);
                        node.constraints.push((sb, tb));
                        continue;
                    }
                }
            }
            // both sides now have the same non-arrow type, so neither is a λ
            debug_assert_eq!(s.ty(), t.ty(), "constraint sides must share a type");
            debug_assert!(!s.is_lam() && !t.is_lam());
            let s_flex = matches!(s.head(), Some(Head::Var(..)));
            let t_flex = matches!(t.head(), Some(Head::Var(..)));
            match (s_flex, t_flex) {
                (false, false) => {
                    // rigid-rigid: decompose or fail
                    match (s.head().unwrap(), t.head().unwrap()) {
                        (Head::Sym(f, ftys), Head::Sym(g, gtys)) => {
                            if f != g {
                                return Outcome::Failed;
                            }
                            let mut ok = true;
                            for (a, b) in ftys.iter().zip(gtys.iter()) {
                                if !unify_types_into(a, b, &mut node.subst.ty) {
                                    ok = false;
                                    break;
                                }
                            }
                            if !ok {
                                return Outcome::Failed;
                            }
                        }
                        (Head::Bound(i, _), Head::Bound(j, _)) => {
                            if i != j {
                                return Outcome::Failed;
                            }
                        }
                        _ => return Outcome::Failed,
                    }
                    let sargs = s.args();
                    let targs = t.args();
                    if sargs.len() != targs.len() {
                        return Outcome::Failed;
                    }
                    for (a, b) in sargs.iter().zip(targs.iter()).rev() {
                        node.constraints.push((a.clone(), b.clone()));
                    }
                    continue;
                }
                _ => {
                    // at least one flex side: try the cheap most-general
                    // binding for a bare variable first
                    if let Some((v, _)) = s.as_var() {
                        if !t.contains_var(v) && t.loose == 0 {
                            node.subst.bind(bank, v, t.clone());
                            continue;
                        }
                    }
                    if let Some((v, _)) = t.as_var() {
                        if !s.contains_var(v) && s.loose == 0 {
                            node.subst.bind(bank, v, s.clone());
                            continue;
                        }
                    }
                    // push the pair back and branch on bindings
                    node.constraints.push((s.clone(), t.clone()));
                    return self.branch(node, &s, &t, s_flex, t_flex);
                }
            }
        }
    }

    /// Binding rules. The constraint `(s, t)` is the last element of
    /// `node.constraints`, with σ already applied.
    fn branch(&self, node: Node, s: &Term, t: &Term, s_flex: bool, t_flex: bool) -> Outcome {
        if node.fuel_used >= self.cfg.fuel {
            return Outcome::Failed;
        }
        let mut children = Vec::new();
        match (s_flex, t_flex) {
            (true, false) => self.flex_rigid_bindings(&node, s, t, &mut children),
            (false, true) => self.flex_rigid_bindings(&node, t, s, &mut children),
            (true, true) => {
                if !self.cfg.flex_flex {
                    return Outcome::Failed;
                }
                let (yv, _) = flex_head(s);
                let (zv, _) = flex_head(t);
                if yv == zv {
                    // pointwise agreement of the argument lists is one sound
                    // branch; eliminations cover the rest
                    let mut dec = node.clone();
                    dec.fuel_used += 1;
                    for (a, b) in s.args().iter().zip(t.args().iter()) {
                        dec.constraints.push((a.clone(), b.clone()));
                    }
                    // drop the re-pushed flex-flex pair itself
                    let pair_pos = dec.constraints.len() - 1 - s.args().len();
                    dec.constraints.remove(pair_pos);
                    children.push(dec);
                    self.elimination_bindings(&node, s, &mut children);
                } else {
                    self.identification_binding(&node, s, t, &mut children);
                }
                self.projection_bindings(&node, s, &mut children);
                self.iteration_bindings(&node, s, &mut children);
                if yv != zv {
                    self.projection_bindings(&node, t, &mut children);
                    self.iteration_bindings(&node, t, &mut children);
                }
            }
            (false, false) => unreachable!(),
        }
        if children.is_empty() {
            Outcome::Failed
        } else {
            Outcome::Split(children)
        }
    }

    /// Imitation and projection bindings for a flex-rigid pair.
    fn flex_rigid_bindings(&self, node: &Node, flex: &Term, rigid: &Term, out: &mut Vec<Node>) {
        let bank = &self.bank;
        let (yv, yty) = flex_head(flex);
        let n = flex.args().len();
        let (arg_tys, res_ty) = arg_and_result(&yty, n);
        // imitation: only symbol heads can be imitated
        if let Some(Head::Sym(f, ftys)) = rigid.head() {
            let rigid_arg_tys: Vec<Type> = rigid.args().iter().map(|a| a.ty().clone()).collect();
            let mut body_args = Vec::new();
            for aty in &rigid_arg_tys {
                body_args.push(self.fresh_abs(&arg_tys, aty));
            }
            let head = bank.sym(*f, ftys.clone(), body_args);
            let binding = bank.lam_many(&arg_tys, head);
            let mut child = node.clone();
            child.fuel_used += 1;
            child.subst.bind(bank, yv, binding);
            out.push(child);
        }
        self.projection_bindings_for(node, yv, &arg_tys, &res_ty, out);
    }

    /// Projection bindings for a flex occurrence: one per argument whose
    /// result type can meet the target type. Applied to flex-rigid and
    /// flex-flex pairs alike.
    fn projection_bindings(&self, node: &Node, flex: &Term, out: &mut Vec<Node>) {
        let (yv, yty) = flex_head(flex);
        let n = flex.args().len();
        let (arg_tys, res_ty) = arg_and_result(&yty, n);
        self.projection_bindings_for(node, yv, &arg_tys, &res_ty, out);
    }

    fn projection_bindings_for(
        &self,
        node: &Node,
        yv: VarId,
        arg_tys: &[Type],
        res_ty: &Type,
        out: &mut Vec<Node>,
    ) {
        let bank = &self.bank;
        let n = arg_tys.len();
        for (i, aty) in arg_tys.iter().enumerate() {
            let (p_args, p_res) = aty.flatten_arrows();
            let mut tymap = node.subst.ty.clone();
            if !unify_types_into(&p_res, res_ty, &mut tymap) {
                continue;
            }
            let mut proj_args = Vec::new();
            for paty in &p_args {
                proj_args.push(self.fresh_abs(arg_tys, paty));
            }
            let head = bank.bound(n as u32 - 1 - i as u32, aty.clone());
            let body = bank.app(head, proj_args);
            let binding = bank.lam_many(arg_tys, body);
            let mut child = node.clone();
            child.fuel_used += 1;
            child.subst.ty = tymap;
            child.subst.bind(bank, yv, binding);
            out.push(child);
        }
    }

    /// Identification for a flex-flex pair with distinct heads `y ūₙ ≟ z v̄ₘ`:
    /// both collapse onto a fresh head applied to both argument lists.
    fn identification_binding(&self, node: &Node, s: &Term, t: &Term, out: &mut Vec<Node>) {
        let bank = &self.bank;
        let (yv, yty) = flex_head(s);
        let (zv, zty) = flex_head(t);
        let n = s.args().len();
        let m = t.args().len();
        let (y_args, y_res) = arg_and_result(&yty, n);
        let (z_args, _) = arg_and_result(&zty, m);
        // h : ȳ_n → z̄_m → β
        let h_ty = Type::arrow_many(&y_args, Type::arrow_many(&z_args, y_res.clone()));
        let (_, h) = bank.fresh_var("h", h_ty);
        // y ↦ λx̄ₙ. h x̄ₙ (W̄ₘ x̄ₙ)
        let mut y_body_args: Vec<Term> = (0..n)
            .map(|i| bank.bound(n as u32 - 1 - i as u32, y_args[i].clone()))
            .collect();
        for zt in &z_args {
            y_body_args.push(self.fresh_abs(&y_args, zt));
        }
        let y_binding = bank.lam_many(&y_args, bank.app(bank.shift(&h, 0, n as i64), y_body_args));
        // z ↦ λx̄ₘ. h (Q̄ₙ x̄ₘ) x̄ₘ
        let mut z_body_args: Vec<Term> = Vec::new();
        for yt in &y_args {
            z_body_args.push(self.fresh_abs(&z_args, yt));
        }
        for (i, zt) in z_args.iter().enumerate() {
            z_body_args.push(bank.bound(m as u32 - 1 - i as u32, zt.clone()));
        }
        let z_binding = bank.lam_many(&z_args, bank.app(bank.shift(&h, 0, m as i64), z_body_args));
        let mut child = node.clone();
        child.fuel_used += 1;
        child.subst.bind(bank, yv, y_binding);
        child.subst.bind(bank, zv, z_binding);
        out.push(child);
    }

    /// Elimination bindings for a flex-flex pair with an identical head
    /// `y ūₙ ≟ y v̄ₙ`: drop one argument position.
    fn elimination_bindings(&self, node: &Node, s: &Term, out: &mut Vec<Node>) {
        let bank = &self.bank;
        let (yv, yty) = flex_head(s);
        let n = s.args().len();
        let (arg_tys, res_ty) = arg_and_result(&yty, n);
        for drop_i in 0..n {
            let kept: Vec<Type> = arg_tys
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != drop_i)
                .map(|(_, t)| t.clone())
                .collect();
            let y2_ty = Type::arrow_many(&kept, res_ty.clone());
            let (_, y2) = bank.fresh_var("e", y2_ty);
            let body_args: Vec<Term> = (0..n)
                .filter(|i| *i != drop_i)
                .map(|i| bank.bound(n as u32 - 1 - i as u32, arg_tys[i].clone()))
                .collect();
            let binding = bank.lam_many(&arg_tys, bank.app(bank.shift(&y2, 0, n as i64), body_args));
            let mut child = node.clone();
            child.fuel_used += 1;
            child.subst.bind(bank, yv, binding);
            out.push(child);
        }
    }

    /// Iteration binding: applies one functional argument of the flex head
    /// to fresh terms and passes the result as an extra argument.
    fn iteration_bindings(&self, node: &Node, s: &Term, out: &mut Vec<Node>) {
        let bank = &self.bank;
        let (yv, yty) = flex_head(s);
        let n = s.args().len();
        let (arg_tys, res_ty) = arg_and_result(&yty, n);
        for (i, aty) in arg_tys.iter().enumerate() {
            if !aty.is_arrow() {
                continue;
            }
            let (p_args, p_res) = aty.flatten_arrows();
            // y' : τ̄ₙ → γ → β
            let y2_ty = Type::arrow_many(&arg_tys, Type::arrow(p_res.clone(), res_ty.clone()));
            let (_, y2) = bank.fresh_var("it", y2_ty);
            let mut body_args: Vec<Term> = (0..n)
                .map(|j| bank.bound(n as u32 - 1 - j as u32, arg_tys[j].clone()))
                .collect();
            let xi = bank.bound(n as u32 - 1 - i as u32, aty.clone());
            let mut xi_args = Vec::new();
            for paty in &p_args {
                xi_args.push(self.fresh_abs(&arg_tys, paty));
            }
            body_args.push(bank.app(xi, xi_args));
            let binding =
                bank.lam_many(&arg_tys, bank.app(bank.shift(&y2, 0, n as i64), body_args));
            let mut child = node.clone();
            child.fuel_used += 1;
            child.subst.bind(bank, yv, binding);
            out.push(child);
        }
    }

    /// A fresh variable of type `ēnv → target`, applied to the bound
    /// variables of the enclosing binding λs.
    fn fresh_abs(&self, env: &[Type], target: &Type) -> Term {
        let bank = &self.bank;
        let ty = Type::arrow_many(env, target.clone());
        let (_, h) = bank.fresh_var("u", ty);
        let n = env.len();
        let args: Vec<Term> =
            (0..n).map(|i| bank.bound(n as u32 - 1 - i as u32, env[i].clone())).collect();
        bank.app(bank.shift(&h, 0, n as i64), args)
    }
}

fn flex_head(t: &Term) -> (VarId, Type) {
    match t.head() {
        Some(Head::Var(v, ty)) => (*v, ty.clone()),
        _ => panic!("flex_head on rigid term"),
    }
}

/// Splits a function type into exactly `n` argument types and the rest.
fn arg_and_result(ty: &Type, n: usize) -> (Vec<Type>, Type) {
    let mut args = Vec::with_capacity(n);
    let mut cur = ty.clone();
    for _ in 0..n {
        match cur {
            Type::Con(crate::syntax::ARROW, ab) => {
                args.push(ab[0].clone());
                cur = ab[1].clone();
            }
            other => panic!("expected function type, got {}", other),
        }
    }
    (args, cur)
}

// ---- one-sided matching ----

/// One-sided matching: finds σ with `pattern·σ = target` within a decidable
/// fragment (first-order-like plus Miller patterns). Absence of a result
/// does not imply that no match exists.
///
/// Bindings may contain loose bound indices of the target's enclosing
/// context (entry-relative); indices bound during the parallel descent are
/// only admitted through Miller-pattern inversion.
pub fn match_terms(bank: &TermBank, pattern: &Term, target: &Term) -> Option<Subst> {
    let mut s = Subst::new();
    match_into(bank, pattern, target, &mut s, 0).then_some(s)
}

pub fn match_into(
    bank: &TermBank,
    pattern: &Term,
    target: &Term,
    subst: &mut Subst,
    depth: u32,
) -> bool {
    let p = subst.apply(bank, pattern);
    if p == *target {
        return true;
    }
    match (p.kind(), target.kind()) {
        (TermKind::Lam(ty1, b1), TermKind::Lam(ty2, b2)) => {
            if ty1 != ty2 {
                // binder types must agree after the pattern's type bindings
                let mut map = subst.ty.clone();
                if !crate::syntax::match_types_into(ty1, ty2, &mut map) {
                    return false;
                }
                subst.ty = map;
            }
            match_into(bank, b1, b2, subst, depth + 1)
        }
        (TermKind::App(Head::Var(v, _), pargs), _) => {
            // flex pattern head: bare variable or Miller pattern
            if pargs.is_empty() {
                bind_matched(bank, subst, *v, target, depth)
            } else {
                let mut idxs = Vec::new();
                for a in pargs {
                    match a.kind() {
                        TermKind::App(Head::Bound(i, _), inner)
                            if inner.is_empty() && *i < depth && !idxs.contains(i) =>
                        {
                            idxs.push(*i)
                        }
                        _ => return false,
                    }
                }
                // abstract target over those bound variables
                let tys: Vec<Type> = pargs.iter().map(|a| a.ty().clone()).collect();
                match invert(bank, target, &idxs, &tys, depth) {
                    Some(image) => bind_matched(bank, subst, *v, &image, 0),
                    None => false,
                }
            }
        }
        (TermKind::App(ph, pargs), TermKind::App(th, targs)) => {
            let heads_ok = match (ph, th) {
                (Head::Sym(f, ftys), Head::Sym(g, gtys)) => {
                    if f != g || ftys.len() != gtys.len() {
                        false
                    } else {
                        let mut map = subst.ty.clone();
                        let ok = ftys
                            .iter()
                            .zip(gtys)
                            .all(|(a, b)| crate::syntax::match_types_into(a, b, &mut map));
                        if ok {
                            subst.ty = map;
                        }
                        ok
                    }
                }
                (Head::Bound(i, _), Head::Bound(j, _)) => i == j,
                _ => false,
            };
            heads_ok
                && pargs.len() == targs.len()
                && pargs
                    .iter()
                    .zip(targs)
                    .all(|(a, b)| match_into(bank, a, b, subst, depth))
        }
        _ => false,
    }
}

/// Binds a pattern variable to a target subterm seen at `depth` internal
/// binders; internal references are rejected, external ones are shifted to
/// entry level.
fn bind_matched(bank: &TermBank, subst: &mut Subst, v: VarId, target: &Term, depth: u32) -> bool {
    for i in 0..depth {
        if target.has_loose(i) {
            return false;
        }
    }
    let image = bank.shift(target, 0, -(depth as i64));
    match subst.get(v) {
        Some(prev) => *prev == image,
        None => {
            subst.tm.insert(v, image);
            true
        }
    }
}

/// Miller inversion: abstracts `target` (seen at `d0` internal binders)
/// over the pattern's bound-variable arguments `idxs`, yielding an
/// entry-relative λ; fails when the target mentions internal binders
/// outside `idxs`.
fn invert(bank: &TermBank, target: &Term, idxs: &[u32], tys: &[Type], d0: u32) -> Option<Term> {
    let q = idxs.len() as u32;
    let body = invert_rec(bank, target, idxs, d0, 0, q)?;
    let mut out = body;
    for ty in tys.iter().rev() {
        out = bank.lam(ty.clone(), out);
    }
    Some(out)
}

/// `d0`: internal binders above the match point; `k`: λs crossed inside the
/// target so far; `q`: number of new λs wrapped around the image.
fn invert_rec(
    bank: &TermBank,
    t: &Term,
    idxs: &[u32],
    d0: u32,
    k: u32,
    q: u32,
) -> Option<Term> {
    match t.kind() {
        TermKind::App(head, args) => {
            let mut nargs = Vec::with_capacity(args.len());
            for a in args {
                nargs.push(invert_rec(bank, a, idxs, d0, k, q)?);
            }
            let nhead = match head {
                Head::Bound(i, ty) => {
                    if *i < k {
                        bank.bound(*i, ty.clone())
                    } else if *i < k + d0 {
                        let rel = i - k;
                        match idxs.iter().position(|j| *j == rel) {
                            Some(pos) => bank.bound(k + q - 1 - pos as u32, ty.clone()),
                            None => return None,
                        }
                    } else {
                        // entry-external reference, re-aimed past the new λs
                        bank.bound(i - d0 + q, ty.clone())
                    }
                }
                Head::Var(v, ty) => bank.var(*v, ty.clone()),
                Head::Sym(f, tys) => bank.sym(*f, tys.clone(), Vec::new()),
            };
            Some(bank.app(nhead, nargs))
        }
        TermKind::Lam(bty, body) => {
            let nbody = invert_rec(bank, body, idxs, d0, k + 1, q)?;
            Some(bank.lam(bty.clone(), nbody))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{Rng, TestSig};
    use crate::syntax::{parse_term, VarEnv};

    fn fixture() -> (TestSig, VarEnv) {
        let ts = TestSig::new();
        let env = VarEnv::new();
        (ts, env)
    }

    fn all_unifiers(
        ts: &TestSig,
        cfg: &UnifConfig,
        s: &Term,
        t: &Term,
        xvars: &[VarId],
        limit: usize,
    ) -> Vec<Subst> {
        let mut stream = csu(&ts.bank, cfg, s, t, xvars);
        stream.collect_unifiers(limit)
    }

    #[test]
    fn identical_terms_identity_first() {
        let (ts, env) = fixture();
        let t = parse_term(&ts.bank, &env, "g a b").unwrap();
        let us = all_unifiers(&ts, &UnifConfig::default(), &t, &t, &[], 4);
        assert!(!us.is_empty());
        assert!(us[0].tm.is_empty(), "identity substitution first");
    }

    #[test]
    fn first_order_mgu() {
        let (ts, mut env) = fixture();
        let xv = env.declare(&ts.bank, "X", ts.iota.clone());
        let s = parse_term(&ts.bank, &env, "g X b").unwrap();
        let t = parse_term(&ts.bank, &env, "g (f a) b").unwrap();
        let us = all_unifiers(&ts, &UnifConfig::default(), &s, &t, &[xv], 4);
        assert_eq!(us.len(), 1);
        let fa = parse_term(&ts.bank, &env, "f a").unwrap();
        assert_eq!(us[0].get(xv), Some(&fa));
    }

    #[test]
    fn rigid_clash_empty_stream() {
        let (ts, env) = fixture();
        let s = parse_term(&ts.bank, &env, "a").unwrap();
        let t = parse_term(&ts.bank, &env, "b").unwrap();
        let us = all_unifiers(&ts, &UnifConfig::default(), &s, &t, &[], 4);
        assert!(us.is_empty());
    }

    #[test]
    fn type_clash_empty_stream() {
        let (ts, env) = fixture();
        let s = parse_term(&ts.bank, &env, "a").unwrap();
        let t = parse_term(&ts.bank, &env, "f").unwrap();
        let mut stream = csu(&ts.bank, &UnifConfig::default(), &s, &t, &[]);
        assert!(stream.next().is_none());
    }

    #[test]
    fn projection_solution() {
        // Y a ≟ a has the projection solution Y ↦ λx. x and the imitation
        // solution Y ↦ λx. a
        let (ts, mut env) = fixture();
        let fun = Type::arrow(ts.iota.clone(), ts.iota.clone());
        let yv = env.declare(&ts.bank, "Y", fun);
        let s = parse_term(&ts.bank, &env, "Y a").unwrap();
        let t = parse_term(&ts.bank, &env, "a").unwrap();
        let us = all_unifiers(&ts, &UnifConfig::default(), &s, &t, &[yv], 8);
        assert!(us.len() >= 2);
        for u in &us {
            let inst = u.apply(&ts.bank, &s);
            assert_eq!(inst, t);
        }
    }

    #[test]
    fn infinite_family_f_chain() {
        // f (Y a) ≟ Y (f a) admits Y ↦ λx. fⁿ x for n = 1, 2, …
        let (ts, mut env) = fixture();
        let fun = Type::arrow(ts.iota.clone(), ts.iota.clone());
        let yv = env.declare(&ts.bank, "Y", fun);
        let s = parse_term(&ts.bank, &env, "f (Y a)").unwrap();
        let t = parse_term(&ts.bank, &env, "Y (f a)").unwrap();
        let mut cfg = UnifConfig::default();
        cfg.fuel = 8;
        cfg.max_unifiers = 64;
        let us = all_unifiers(&ts, &cfg, &s, &t, &[yv], 24);
        // expect at least three members of the family
        let mut family = 0;
        for u in &us {
            let img = u.get(yv).expect("Y must be bound");
            let mut expect = ts.bank.sym(ts.f, vec![], vec![]);
            for _ in 0..8 {
                if *img == expect {
                    family += 1;
                    break;
                }
                let b0 = ts.bank.bound(0, ts.iota.clone());
                let body = ts
                    .bank
                    .sym(ts.f, vec![], vec![ts.bank.app(ts.bank.shift(&expect, 0, 1), vec![b0])]);
                expect = ts.bank.lam(ts.iota.clone(), body);
            }
        }
        assert!(family >= 3, "found {} family members among {}", family, us.len());
    }

    #[test]
    fn flex_flex_mgu_modulo_renaming() {
        // y a b ≟ z b' a' has the MGU y ↦ λw x. h w x b' a', z ↦ h a b
        // (paper's example with c, d renamed to our constants)
        let (ts, mut env) = fixture();
        let i = ts.iota.clone();
        let two = Type::arrow(i.clone(), Type::arrow(i.clone(), i.clone()));
        let yv = env.declare(&ts.bank, "Y", two.clone());
        let zv = env.declare(&ts.bank, "Z", two.clone());
        let s = parse_term(&ts.bank, &env, "Y a b").unwrap();
        let t = parse_term(&ts.bank, &env, "Z b a").unwrap();
        let us = all_unifiers(&ts, &UnifConfig::default(), &s, &t, &[yv, zv], 16);
        assert!(!us.is_empty());
        // the stream must contain the paper-shaped MGU: Z ↦ h a b with the
        // same fresh head h inside Y's λ-image
        let found = us.iter().any(|u| {
            let yimg = u.get(yv);
            let zimg = u.get(zv);
            match (yimg, zimg) {
                (Some(yi), Some(zi)) => match zi.kind() {
                    TermKind::App(Head::Var(h, _), args) => {
                        args.len() == 2 && yi.is_lam() && yi.contains_var(*h)
                    }
                    _ => false,
                },
                _ => false,
            }
        });
        assert!(found, "MGU shape not found among {} unifiers", us.len());
        for u in &us {
            assert_eq!(u.apply(&ts.bank, &s), u.apply(&ts.bank, &t));
        }
    }

    #[test]
    fn flex_flex_disabled_pragmatic_mode() {
        let (ts, mut env) = fixture();
        let i = ts.iota.clone();
        let fun = Type::arrow(i.clone(), i.clone());
        let yv = env.declare(&ts.bank, "Y", fun.clone());
        let zv = env.declare(&ts.bank, "Z", fun.clone());
        let s = parse_term(&ts.bank, &env, "Y a").unwrap();
        let t = parse_term(&ts.bank, &env, "Z b").unwrap();
        let mut cfg = UnifConfig::default();
        cfg.flex_flex = false;
        cfg.pattern_fast_path = false;
        let us = all_unifiers(&ts, &cfg, &s, &t, &[yv, zv], 4);
        assert!(us.is_empty());
    }

    #[test]
    fn pattern_fast_path_single_mgu() {
        // λx. Y x ≟ λx. f x in the pattern fragment: exactly one unifier
        let (ts, mut env) = fixture();
        let fun = Type::arrow(ts.iota.clone(), ts.iota.clone());
        let yv = env.declare(&ts.bank, "Y", fun);
        let s = parse_term(&ts.bank, &env, "\\x:i. Y x").unwrap();
        let t = parse_term(&ts.bank, &env, "\\x:i. f x").unwrap();
        let us = all_unifiers(&ts, &UnifConfig::default(), &s, &t, &[yv], 8);
        assert_eq!(us.len(), 1);
        assert_eq!(us[0].get(yv), Some(&ts.bank.sym(ts.f, vec![], vec![])));
    }

    #[test]
    fn pattern_flex_flex_intersection() {
        // λx y. Z x ≟ λx y. W y forces Z and W to a shared constant
        let (ts, mut env) = fixture();
        let i = ts.iota.clone();
        let fun = Type::arrow(i.clone(), i.clone());
        let zv = env.declare(&ts.bank, "Z", fun.clone());
        let wv = env.declare(&ts.bank, "W", fun.clone());
        let s = parse_term(&ts.bank, &env, "\\x:i. \\y:i. Z x").unwrap();
        let t = parse_term(&ts.bank, &env, "\\x:i. \\y:i. W y").unwrap();
        let us = all_unifiers(&ts, &UnifConfig::default(), &s, &t, &[zv, wv], 4);
        assert_eq!(us.len(), 1);
        let sigma = &us[0];
        assert_eq!(sigma.apply(&ts.bank, &s), sigma.apply(&ts.bank, &t));
        // both images are constant functions over a shared fresh variable
        let zi = sigma.get(zv).unwrap();
        assert!(zi.is_lam());
    }

    #[test]
    fn soundness_fuzz() {
        let (ts, _) = fixture();
        let mut rng = Rng::new(31337);
        let fun = Type::arrow(ts.iota.clone(), ts.iota.clone());
        let (xv, _) = ts.bank.fresh_var("x", ts.iota.clone());
        let (yv, _) = ts.bank.fresh_var("y", fun.clone());
        let vars = vec![(xv, ts.iota.clone()), (yv, fun)];
        let mut cfg = UnifConfig::default();
        cfg.fuel = 5;
        cfg.max_unifiers = 8;
        for round in 0..150 {
            let s = ts.open_term(&mut rng, &ts.iota.clone(), 2, &vars);
            let t = ts.open_term(&mut rng, &ts.iota.clone(), 2, &vars);
            let mut stream = csu(&ts.bank, &cfg, &s, &t, &[xv, yv]);
            for u in stream.collect_unifiers(8) {
                let us = u.apply(&ts.bank, &s);
                let ut = u.apply(&ts.bank, &t);
                assert_eq!(us, ut, "round {}: unsound unifier", round);
            }
        }
    }

    #[test]
    fn determinism_same_problem_same_prefix() {
        let (ts, mut env) = fixture();
        let fun = Type::arrow(ts.iota.clone(), ts.iota.clone());
        let yv = env.declare(&ts.bank, "Y", fun);
        let s = parse_term(&ts.bank, &env, "Y a").unwrap();
        let t = parse_term(&ts.bank, &env, "f a").unwrap();
        let run = || {
            let mut stream = csu(&ts.bank, &UnifConfig::default(), &s, &t, &[yv]);
            stream
                .collect_unifiers(8)
                .iter()
                .map(|u| {
                    crate::syntax::print::term_string(&ts.bank, &u.apply(&ts.bank, &s))
                })
                .collect::<Vec<_>>()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn idempotence_on_problem_vars() {
        let (ts, mut env) = fixture();
        let fun = Type::arrow(ts.iota.clone(), ts.iota.clone());
        let yv = env.declare(&ts.bank, "Y", fun);
        let xv = env.declare(&ts.bank, "X", ts.iota.clone());
        let s = parse_term(&ts.bank, &env, "Y X").unwrap();
        let t = parse_term(&ts.bank, &env, "f (f a)").unwrap();
        let us = all_unifiers(&ts, &UnifConfig::default(), &s, &t, &[yv, xv], 8);
        assert!(!us.is_empty());
        for u in &us {
            for v in [yv, xv] {
                if let Some(img) = u.get(v) {
                    assert_eq!(&u.apply(&ts.bank, img), img, "not idempotent on X");
                }
            }
        }
    }
}
