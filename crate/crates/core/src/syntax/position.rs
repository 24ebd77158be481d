//! Green and orange subterm navigation.
//!
//! Green subterms are reachable from the root only through arguments of
//! symbol-headed applications: never under a λ, never inside an argument of
//! an applied variable. Orange subterms additionally descend through λ
//! bodies and applied-variable arguments.

use super::term::{Head, Term, TermBank, TermError, TermKind};
use super::ty::Type;

/// A green position: a sequence of 1-based argument indices.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GreenPos(pub Vec<u32>);

impl GreenPos {
    pub fn root() -> GreenPos {
        GreenPos(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, i: u32) -> GreenPos {
        let mut v = self.0.clone();
        v.push(i);
        GreenPos(v)
    }
}

impl std::fmt::Display for GreenPos {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join("."))
    }
}

/// All green positions of `t`, leftmost-outermost first.
pub fn green_positions(t: &Term) -> Vec<GreenPos> {
    let mut out = Vec::new();
    collect_green(t, GreenPos::root(), &mut out);
    out
}

fn collect_green(t: &Term, here: GreenPos, out: &mut Vec<GreenPos>) {
    out.push(here.clone());
    if let TermKind::App(Head::Sym(..), args) = t.kind() {
        for (i, a) in args.iter().enumerate() {
            collect_green(a, here.child(i as u32 + 1), out);
        }
    }
}

/// All green subterms of `t` with their positions, leftmost-outermost first.
pub fn green_subterms(t: &Term) -> Vec<(GreenPos, Term)> {
    green_positions(t)
        .into_iter()
        .map(|p| {
            let sub = green_subterm_at(t, &p).expect("position from enumeration");
            (p, sub)
        })
        .collect()
}

pub fn green_subterm_at(t: &Term, p: &GreenPos) -> Result<Term, TermError> {
    let mut cur = t.clone();
    for &i in &p.0 {
        match cur.kind() {
            TermKind::App(Head::Sym(..), args) if i >= 1 && (i as usize) <= args.len() => {
                cur = args[i as usize - 1].clone();
            }
            _ => return Err(TermError::InvalidPosition),
        }
    }
    Ok(cur)
}

/// Replaces the green subterm at `p` by `u`. Inserting a canonical term into
/// a green context yields a canonical term, so no renormalization happens.
pub fn replace_green(bank: &TermBank, t: &Term, p: &GreenPos, u: &Term) -> Result<Term, TermError> {
    replace_green_from(bank, t, &p.0, u)
}

fn replace_green_from(bank: &TermBank, t: &Term, path: &[u32], u: &Term) -> Result<Term, TermError> {
    match path.split_first() {
        None => {
            if t.ty() != u.ty() {
                return Err(TermError::TypeMismatch {
                    expected: format!("{}", t.ty()),
                    found: format!("{}", u.ty()),
                    context: "green replacement".into(),
                });
            }
            Ok(u.clone())
        }
        Some((&i, rest)) => match t.kind() {
            TermKind::App(Head::Sym(f, tyargs), args) if i >= 1 && (i as usize) <= args.len() => {
                let mut nargs = args.clone();
                nargs[i as usize - 1] = replace_green_from(bank, &args[i as usize - 1], rest, u)?;
                bank.try_sym(*f, tyargs.clone(), nargs)
            }
            _ => Err(TermError::InvalidPosition),
        },
    }
}

/// One step of an orange path: into the i-th argument (1-based) of a spine,
/// or into a λ body.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum OrangeStep {
    Arg(u32),
    Body,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct OrangePos(pub Vec<OrangeStep>);

impl OrangePos {
    pub fn root() -> OrangePos {
        OrangePos(Vec::new())
    }

    pub fn child(&self, s: OrangeStep) -> OrangePos {
        let mut v = self.0.clone();
        v.push(s);
        OrangePos(v)
    }

    /// Number of λ binders the path crosses.
    pub fn binder_depth(&self) -> usize {
        self.0.iter().filter(|s| matches!(s, OrangeStep::Body)).count()
    }
}

/// An orange occurrence: the path, the binder types crossed
/// (outermost-first), and the subterm. Loose indices in `term` refer to the
/// crossed binders.
#[derive(Clone, Debug)]
pub struct OrangeOcc {
    pub pos: OrangePos,
    pub binders: Vec<Type>,
    pub term: Term,
}

/// All orange subterms of `t`: green subterms plus descent through λ bodies
/// and applied-variable arguments.
pub fn orange_subterms(t: &Term) -> Vec<OrangeOcc> {
    let mut out = Vec::new();
    collect_orange(t, OrangePos::root(), &mut Vec::new(), &mut out);
    out
}

fn collect_orange(t: &Term, here: OrangePos, binders: &mut Vec<Type>, out: &mut Vec<OrangeOcc>) {
    out.push(OrangeOcc { pos: here.clone(), binders: binders.clone(), term: t.clone() });
    match t.kind() {
        TermKind::App(_, args) => {
            for (i, a) in args.iter().enumerate() {
                collect_orange(a, here.child(OrangeStep::Arg(i as u32 + 1)), binders, out);
            }
        }
        TermKind::Lam(bty, body) => {
            binders.push(bty.clone());
            collect_orange(body, here.child(OrangeStep::Body), binders, out);
            binders.pop();
        }
    }
}

pub fn orange_subterm_at(t: &Term, p: &OrangePos) -> Result<Term, TermError> {
    let mut cur = t.clone();
    for step in &p.0 {
        match (step, cur.kind()) {
            (OrangeStep::Arg(i), TermKind::App(_, args))
                if *i >= 1 && (*i as usize) <= args.len() =>
            {
                cur = args[*i as usize - 1].clone();
            }
            (OrangeStep::Body, TermKind::Lam(_, body)) => cur = body.clone(),
            _ => return Err(TermError::InvalidPosition),
        }
    }
    Ok(cur)
}
