//! System F with explicit annotations, plus the unit/product extension used
//! for typed η.
//!
//! Term and type variables are both nameless but counted in separate
//! namespaces: a term index skips type entries of the context and vice
//! versa. Relations only accept terms that pass [`typecheck`] first.

mod reduce;
mod syntax;
mod typecheck;

use std::fmt;

pub use reduce::{
    erase, typed_beta_reducts, typed_complete_dev, typed_eta_reducts, typed_eta_reducts_ext,
    typed_par_reducts, typed_par_step_check, EtaRules,
};
pub use syntax::{parse_signature, parse_tterm, parse_ty, pretty_tterm, pretty_ty, Signature};
pub use typecheck::typecheck;

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Ty {
    TVar(usize),
    Arr(Box<Ty>, Box<Ty>),
    All(Box<Ty>),
    Unit,
    Prod(Box<Ty>, Box<Ty>),
}

impl Ty {
    pub fn arr(dom: Ty, cod: Ty) -> Ty {
        Ty::Arr(Box::new(dom), Box::new(cod))
    }

    pub fn all(body: Ty) -> Ty {
        Ty::All(Box::new(body))
    }

    pub fn prod(a: Ty, b: Ty) -> Ty {
        Ty::Prod(Box::new(a), Box::new(b))
    }

    /// `TVar` and `Unit` have height 0.
    pub fn height(&self) -> usize {
        match self {
            Ty::TVar(_) | Ty::Unit => 0,
            Ty::All(b) => 1 + b.height(),
            Ty::Arr(a, b) | Ty::Prod(a, b) => 1 + a.height().max(b.height()),
        }
    }

    /// True iff every type variable is below `depth`.
    pub fn is_well_formed(&self, depth: usize) -> bool {
        match self {
            Ty::TVar(i) => *i < depth,
            Ty::Unit => true,
            Ty::All(b) => b.is_well_formed(depth + 1),
            Ty::Arr(a, b) | Ty::Prod(a, b) => a.is_well_formed(depth) && b.is_well_formed(depth),
        }
    }

    pub fn mentions_extension(&self) -> bool {
        match self {
            Ty::TVar(_) => false,
            Ty::Unit | Ty::Prod(..) => true,
            Ty::All(b) => b.mentions_extension(),
            Ty::Arr(a, b) => a.mentions_extension() || b.mentions_extension(),
        }
    }
}

impl fmt::Debug for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Nameless rendering, used in diagnostics: `#0 -> #0`, `∀. #0`.
impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ty::TVar(i) => write!(f, "#{i}"),
            Ty::Unit => write!(f, "Unit"),
            Ty::All(b) => write!(f, "(∀. {b})"),
            Ty::Arr(a, b) => write!(f, "({a} -> {b})"),
            Ty::Prod(a, b) => write!(f, "({a} * {b})"),
        }
    }
}

pub fn ty_shift_up(t: &Ty, amount: usize, cutoff: usize) -> Ty {
    if amount == 0 {
        return t.clone();
    }
    match t {
        Ty::TVar(i) if *i >= cutoff => Ty::TVar(i + amount),
        Ty::TVar(_) | Ty::Unit => t.clone(),
        Ty::All(b) => Ty::all(ty_shift_up(b, amount, cutoff + 1)),
        Ty::Arr(a, b) => Ty::arr(ty_shift_up(a, amount, cutoff), ty_shift_up(b, amount, cutoff)),
        Ty::Prod(a, b) => Ty::prod(ty_shift_up(a, amount, cutoff), ty_shift_up(b, amount, cutoff)),
    }
}

/// Type-level counterpart of [`subst`](crate::term::subst): replaces `j` by
/// `b` and moves the type variables above `j` down by one.
pub fn ty_subst(a: &Ty, j: usize, b: &Ty) -> Ty {
    fn go(a: &Ty, depth: usize, j: usize, b: &Ty) -> Ty {
        match a {
            Ty::TVar(i) => {
                let target = j + depth;
                if *i == target {
                    ty_shift_up(b, depth, 0)
                } else if *i > target {
                    Ty::TVar(i - 1)
                } else {
                    Ty::TVar(*i)
                }
            }
            Ty::Unit => Ty::Unit,
            Ty::All(body) => Ty::all(go(body, depth + 1, j, b)),
            Ty::Arr(x, y) => Ty::arr(go(x, depth, j, b), go(y, depth, j, b)),
            Ty::Prod(x, y) => Ty::prod(go(x, depth, j, b), go(y, depth, j, b)),
        }
    }
    go(a, 0, j, b)
}

/// A type-annotated term.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum TTerm {
    Var(usize),
    Lam(Ty, Box<TTerm>),
    App(Box<TTerm>, Box<TTerm>),
    TLam(Box<TTerm>),
    TApp(Box<TTerm>, Ty),
    Unit,
    Pair(Box<TTerm>, Box<TTerm>),
    Fst(Box<TTerm>),
    Snd(Box<TTerm>),
}

impl TTerm {
    pub fn lam(annot: Ty, body: TTerm) -> TTerm {
        TTerm::Lam(annot, Box::new(body))
    }

    pub fn app(f: TTerm, a: TTerm) -> TTerm {
        TTerm::App(Box::new(f), Box::new(a))
    }

    pub fn tlam(body: TTerm) -> TTerm {
        TTerm::TLam(Box::new(body))
    }

    pub fn tapp(f: TTerm, ty: Ty) -> TTerm {
        TTerm::TApp(Box::new(f), ty)
    }

    pub fn pair(a: TTerm, b: TTerm) -> TTerm {
        TTerm::Pair(Box::new(a), Box::new(b))
    }

    pub fn fst(p: TTerm) -> TTerm {
        TTerm::Fst(Box::new(p))
    }

    pub fn snd(p: TTerm) -> TTerm {
        TTerm::Snd(Box::new(p))
    }

    pub fn height(&self) -> usize {
        match self {
            TTerm::Var(_) | TTerm::Unit => 0,
            TTerm::Lam(_, b) | TTerm::TLam(b) | TTerm::TApp(b, _) | TTerm::Fst(b) | TTerm::Snd(b) => {
                1 + b.height()
            }
            TTerm::App(a, b) | TTerm::Pair(a, b) => 1 + a.height().max(b.height()),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            TTerm::Var(_) | TTerm::Unit => 1,
            TTerm::Lam(_, b) | TTerm::TLam(b) | TTerm::TApp(b, _) | TTerm::Fst(b) | TTerm::Snd(b) => {
                1 + b.size()
            }
            TTerm::App(a, b) | TTerm::Pair(a, b) => 1 + a.size() + b.size(),
        }
    }
}

impl fmt::Debug for TTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TTerm::Var(i) => write!(f, "{i}"),
            TTerm::Lam(a, b) => write!(f, "λ:{a}.{b:?}"),
            TTerm::App(a, b) => write!(f, "({a:?} {b:?})"),
            TTerm::TLam(b) => write!(f, "Λ.{b:?}"),
            TTerm::TApp(a, t) => write!(f, "({a:?} [{t}])"),
            TTerm::Unit => write!(f, "()"),
            TTerm::Pair(a, b) => write!(f, "<{a:?}, {b:?}>"),
            TTerm::Fst(a) => write!(f, "(fst {a:?})"),
            TTerm::Snd(a) => write!(f, "(snd {a:?})"),
        }
    }
}

/// Shifts free term variables up.
pub fn tm_shift_terms(t: &TTerm, amount: usize, cutoff: usize) -> TTerm {
    map_vars(t, cutoff, &|i, depth| if i >= depth { TTerm::Var(i + amount) } else { TTerm::Var(i) })
}

/// Rebuilds `t` with each term variable replaced via `f(index, binder_depth)`,
/// where the depth starts at `start` and counts term binders only.
fn map_vars(t: &TTerm, start: usize, f: &dyn Fn(usize, usize) -> TTerm) -> TTerm {
    fn go(t: &TTerm, depth: usize, f: &dyn Fn(usize, usize) -> TTerm) -> TTerm {
        match t {
            TTerm::Var(i) => f(*i, depth),
            TTerm::Lam(a, b) => TTerm::lam(a.clone(), go(b, depth + 1, f)),
            TTerm::App(a, b) => TTerm::app(go(a, depth, f), go(b, depth, f)),
            TTerm::TLam(b) => TTerm::tlam(go(b, depth, f)),
            TTerm::TApp(a, ty) => TTerm::tapp(go(a, depth, f), ty.clone()),
            TTerm::Unit => TTerm::Unit,
            TTerm::Pair(a, b) => TTerm::pair(go(a, depth, f), go(b, depth, f)),
            TTerm::Fst(a) => TTerm::fst(go(a, depth, f)),
            TTerm::Snd(a) => TTerm::snd(go(a, depth, f)),
        }
    }
    go(t, start, f)
}

/// Applies `f(ty, type_binder_depth)` to every annotation and type argument.
fn map_types(t: &TTerm, f: &dyn Fn(&Ty, usize) -> Ty) -> TTerm {
    fn go(t: &TTerm, depth: usize, f: &dyn Fn(&Ty, usize) -> Ty) -> TTerm {
        match t {
            TTerm::Var(i) => TTerm::Var(*i),
            TTerm::Lam(a, b) => TTerm::lam(f(a, depth), go(b, depth, f)),
            TTerm::App(a, b) => TTerm::app(go(a, depth, f), go(b, depth, f)),
            TTerm::TLam(b) => TTerm::tlam(go(b, depth + 1, f)),
            TTerm::TApp(a, ty) => TTerm::tapp(go(a, depth, f), f(ty, depth)),
            TTerm::Unit => TTerm::Unit,
            TTerm::Pair(a, b) => TTerm::pair(go(a, depth, f), go(b, depth, f)),
            TTerm::Fst(a) => TTerm::fst(go(a, depth, f)),
            TTerm::Snd(a) => TTerm::snd(go(a, depth, f)),
        }
    }
    go(t, 0, f)
}

/// Shifts free type variables (in annotations and type arguments) up.
pub fn tm_shift_types(t: &TTerm, amount: usize, cutoff: usize) -> TTerm {
    if amount == 0 {
        return t.clone();
    }
    map_types(t, &|ty, depth| ty_shift_up(ty, amount, cutoff + depth))
}

/// Substitutes `s` for term variable `j`, closing the gap above it.
pub fn tm_subst(t: &TTerm, j: usize, s: &TTerm) -> TTerm {
    fn go(t: &TTerm, tm_depth: usize, ty_depth: usize, j: usize, s: &TTerm) -> TTerm {
        match t {
            TTerm::Var(i) => {
                let target = j + tm_depth;
                if *i == target {
                    tm_shift_types(&tm_shift_terms(s, tm_depth, 0), ty_depth, 0)
                } else if *i > target {
                    TTerm::Var(i - 1)
                } else {
                    TTerm::Var(*i)
                }
            }
            TTerm::Lam(a, b) => TTerm::lam(a.clone(), go(b, tm_depth + 1, ty_depth, j, s)),
            TTerm::App(a, b) => TTerm::app(go(a, tm_depth, ty_depth, j, s), go(b, tm_depth, ty_depth, j, s)),
            TTerm::TLam(b) => TTerm::tlam(go(b, tm_depth, ty_depth + 1, j, s)),
            TTerm::TApp(a, ty) => TTerm::tapp(go(a, tm_depth, ty_depth, j, s), ty.clone()),
            TTerm::Unit => TTerm::Unit,
            TTerm::Pair(a, b) => TTerm::pair(go(a, tm_depth, ty_depth, j, s), go(b, tm_depth, ty_depth, j, s)),
            TTerm::Fst(a) => TTerm::fst(go(a, tm_depth, ty_depth, j, s)),
            TTerm::Snd(a) => TTerm::snd(go(a, tm_depth, ty_depth, j, s)),
        }
    }
    go(t, 0, 0, j, s)
}

/// Substitutes type `b` for type variable `j` throughout `t`.
pub fn tm_ty_subst(t: &TTerm, j: usize, b: &Ty) -> TTerm {
    map_types(t, &|ty, depth| ty_subst(ty, j + depth, &ty_shift_up(b, depth, 0)))
}

/// True iff term variable `j` occurs free in `t`.
pub fn tm_occurs(t: &TTerm, j: usize) -> bool {
    match t {
        TTerm::Var(i) => *i == j,
        TTerm::Lam(_, b) => tm_occurs(b, j + 1),
        TTerm::TLam(b) | TTerm::TApp(b, _) | TTerm::Fst(b) | TTerm::Snd(b) => tm_occurs(b, j),
        TTerm::App(a, b) | TTerm::Pair(a, b) => tm_occurs(a, j) || tm_occurs(b, j),
        TTerm::Unit => false,
    }
}

/// Drops the unused term variable `j`. Callers check [`tm_occurs`] first.
pub fn tm_strengthen(t: &TTerm, j: usize) -> Option<TTerm> {
    if tm_occurs(t, j) {
        return None;
    }
    Some(map_vars(t, 0, &|i, depth| {
        if i > j + depth {
            TTerm::Var(i - 1)
        } else {
            TTerm::Var(i)
        }
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CtxEntry {
    Term(Ty),
    Type,
}

/// Interleaved term and type bindings, outermost first.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct TyCtx {
    entries: Vec<CtxEntry>,
}

impl TyCtx {
    pub fn empty() -> TyCtx {
        TyCtx::default()
    }

    pub fn from_entries(entries: Vec<CtxEntry>) -> TyCtx {
        TyCtx { entries }
    }

    pub fn entries(&self) -> &[CtxEntry] {
        &self.entries
    }

    pub fn with_term(&self, ty: Ty) -> TyCtx {
        let mut c = self.clone();
        c.entries.push(CtxEntry::Term(ty));
        c
    }

    pub fn with_type(&self) -> TyCtx {
        let mut c = self.clone();
        c.entries.push(CtxEntry::Type);
        c
    }

    pub fn push_term(&mut self, ty: Ty) {
        self.entries.push(CtxEntry::Term(ty));
    }

    pub fn push_type(&mut self) {
        self.entries.push(CtxEntry::Type);
    }

    pub fn pop(&mut self) -> Option<CtxEntry> {
        self.entries.pop()
    }

    pub fn type_depth(&self) -> usize {
        self.entries.iter().filter(|e| matches!(e, CtxEntry::Type)).count()
    }

    pub fn term_count(&self) -> usize {
        self.entries.len() - self.type_depth()
    }

    /// Type of term variable `index`, adjusted for the type binders that
    /// were pushed after it.
    pub fn lookup(&self, index: usize) -> Option<Ty> {
        let mut seen_terms = 0;
        let mut types_after = 0;
        for entry in self.entries.iter().rev() {
            match entry {
                CtxEntry::Type => types_after += 1,
                CtxEntry::Term(ty) => {
                    if seen_terms == index {
                        return Some(ty_shift_up(ty, types_after, 0));
                    }
                    seen_terms += 1;
                }
            }
        }
        None
    }

    /// All term variables with their types, index 0 first.
    pub fn term_vars(&self) -> Vec<(usize, Ty)> {
        (0..self.term_count())
            .map(|i| (i, self.lookup(i).expect("in range")))
            .collect()
    }
}
