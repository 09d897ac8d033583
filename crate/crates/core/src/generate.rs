//! Exhaustive height-bounded generation of untyped and typed terms.
//!
//! Canonical order is height-major; within one height, constructors come in
//! declaration order and children are compared left to right, each in its own
//! canonical order.

use std::collections::HashMap;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::systemf::{ty_subst, CtxEntry, TTerm, Ty, TyCtx};
use crate::term::Term;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Calculus {
    Untyped,
    /// Polymorphic terms: λ, application, Λ and type application.
    SystemF,
    /// Simply typed terms plus `()`, pairs and projections.
    EtaExt,
    /// Simply typed λ and application only.
    SimplyTyped,
}

impl Calculus {
    pub fn name(self) -> &'static str {
        match self {
            Calculus::Untyped => "untyped",
            Calculus::SystemF => "system-f",
            Calculus::EtaExt => "eta-ext",
            Calculus::SimplyTyped => "simply-typed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusSpec {
    pub height_bound: usize,
    /// Number of free variables for untyped corpora.
    pub free_context_size: usize,
    pub calculus: Calculus,
    pub target_type: Option<Ty>,
    /// Height bound on the types used as λ annotations and type arguments.
    pub type_height: usize,
    /// Starting context for typed corpora.
    pub typed_context: TyCtx,
}

impl CorpusSpec {
    pub fn untyped(height_bound: usize, free_context_size: usize) -> CorpusSpec {
        CorpusSpec {
            height_bound,
            free_context_size,
            calculus: Calculus::Untyped,
            target_type: None,
            type_height: 0,
            typed_context: TyCtx::empty(),
        }
    }

    pub fn typed(calculus: Calculus, height_bound: usize, ctx: TyCtx) -> CorpusSpec {
        CorpusSpec {
            height_bound,
            free_context_size: ctx.term_count(),
            calculus,
            target_type: None,
            type_height: 1,
            typed_context: ctx,
        }
    }

    pub fn with_target(mut self, ty: Ty) -> CorpusSpec {
        self.target_type = Some(ty);
        self
    }

    pub fn with_type_height(mut self, h: usize) -> CorpusSpec {
        self.type_height = h;
        self
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "height_bound": self.height_bound,
            "free_context_size": self.free_context_size,
            "calculus": self.calculus.name(),
        });
        if self.calculus != Calculus::Untyped {
            let ctx: Vec<Value> = self
                .typed_context
                .entries()
                .iter()
                .map(|e| match e {
                    CtxEntry::Type => json!("type"),
                    CtxEntry::Term(ty) => ty.to_json(),
                })
                .collect();
            v["typed_context"] = Value::Array(ctx);
            v["type_height"] = json!(self.type_height);
            if let Some(ty) = &self.target_type {
                v["target_type"] = ty.to_json();
            }
        }
        v
    }
}

/// Memo table for untyped terms of one exact height.
#[derive(Default)]
struct Untyped {
    exact: HashMap<(usize, usize), Arc<Vec<Term>>>,
    upto: HashMap<(usize, usize), Arc<Vec<Term>>>,
}

impl Untyped {
    fn exact(&mut self, h: usize, ctx: usize) -> Arc<Vec<Term>> {
        if let Some(v) = self.exact.get(&(h, ctx)) {
            return v.clone();
        }
        let v: Vec<Term> = if h == 0 {
            (0..ctx).map(Term::Var).collect()
        } else {
            let bodies = self.exact(h - 1, ctx + 1);
            let below = self.upto(h - 1, ctx);
            let top = self.exact(h - 1, ctx);
            bodies
                .iter()
                .cloned()
                .map(Term::lam)
                .chain(apps(below, top, h - 1))
                .collect()
        };
        let v = Arc::new(v);
        self.exact.insert((h, ctx), v.clone());
        v
    }

    fn upto(&mut self, h: usize, ctx: usize) -> Arc<Vec<Term>> {
        if let Some(v) = self.upto.get(&(h, ctx)) {
            return v.clone();
        }
        let mut v = Vec::new();
        for k in 0..=h {
            v.extend(self.exact(k, ctx).iter().cloned());
        }
        let v = Arc::new(v);
        self.upto.insert((h, ctx), v.clone());
        v
    }
}

/// Applications of exact height `h + 1`: at least one child has height `h`.
fn apps(below: Arc<Vec<Term>>, top: Arc<Vec<Term>>, h: usize) -> impl Iterator<Item = Term> {
    (0..below.len()).flat_map(move |i| {
        let f = below[i].clone();
        let args = if f.height() == h { below.clone() } else { top.clone() };
        (0..args.len()).map(move |j| Term::app(f.clone(), args[j].clone()))
    })
}

/// Every untyped term of height at most `height_bound` with free indices
/// below `free_context_size`, once each, in canonical order.
///
/// Only the heights below the bound are materialized; the top layer is
/// streamed.
pub fn gen_terms(spec: &CorpusSpec) -> impl Iterator<Item = Term> + Send {
    let (h, c) = (spec.height_bound, spec.free_context_size);
    let mut memo = Untyped::default();
    let lower: Arc<Vec<Term>> = if h == 0 { Arc::new(Vec::new()) } else { memo.upto(h - 1, c) };
    let top: Box<dyn Iterator<Item = Term> + Send> = if h == 0 {
        Box::new((0..c).map(Term::Var))
    } else {
        let bodies = memo.exact(h - 1, c + 1);
        let below_top = memo.exact(h - 1, c);
        Box::new(
            (0..bodies.len())
                .map(move |i| Term::lam(bodies[i].clone()))
                .chain(apps(lower.clone(), below_top, h - 1)),
        )
    };
    (0..lower.len()).map(move |i| lower[i].clone()).chain(top)
}

/// Number of terms [`gen_terms`] yields, by the height recurrence.
pub fn count_terms(height_bound: usize, ctx: usize) -> u128 {
    fn upto(h: usize, c: usize, memo: &mut HashMap<(usize, usize), u128>) -> u128 {
        if let Some(&n) = memo.get(&(h, c)) {
            return n;
        }
        let n = if h == 0 {
            c as u128
        } else {
            let below = upto(h - 1, c, memo);
            c as u128 + upto(h - 1, c + 1, memo) + below * below
        };
        memo.insert((h, c), n);
        n
    }
    upto(height_bound, ctx, &mut HashMap::new())
}

type Typed = Arc<Vec<(TTerm, Ty)>>;

/// Memo table for well-typed terms keyed by context and exact height.
struct TypedGen {
    calculus: Calculus,
    type_height: usize,
    exact: HashMap<(TyCtx, usize), Typed>,
    pools: HashMap<usize, Arc<Vec<Ty>>>,
}

impl TypedGen {
    fn new(calculus: Calculus, type_height: usize) -> TypedGen {
        TypedGen {
            calculus,
            type_height,
            exact: HashMap::new(),
            pools: HashMap::new(),
        }
    }

    /// Candidate annotation types under `depth` type binders.
    fn pool(&mut self, depth: usize) -> Arc<Vec<Ty>> {
        if let Some(p) = self.pools.get(&depth) {
            return p.clone();
        }
        let p = Arc::new(self.types(self.type_height, depth));
        self.pools.insert(depth, p.clone());
        p
    }

    /// Types of height at most `h`, canonical order.
    fn types(&self, h: usize, depth: usize) -> Vec<Ty> {
        if h == 0 {
            let mut atoms: Vec<Ty> = (0..depth).map(Ty::TVar).collect();
            if self.calculus != Calculus::SystemF {
                atoms.push(Ty::Unit);
            }
            return atoms;
        }
        let below = self.types(h - 1, depth);
        let mut out = below.clone();
        let binary = |out: &mut Vec<Ty>, mk: fn(Ty, Ty) -> Ty| {
            for a in &below {
                for b in &below {
                    if a.height().max(b.height()) == h - 1 {
                        out.push(mk(a.clone(), b.clone()));
                    }
                }
            }
        };
        binary(&mut out, Ty::arr);
        if self.calculus == Calculus::SystemF {
            out.extend(self.types(h - 1, depth + 1).into_iter().filter(|b| b.height() == h - 1).map(Ty::all));
        }
        if self.calculus == Calculus::EtaExt {
            binary(&mut out, Ty::prod);
        }
        out
    }

    fn upto(&mut self, ctx: &TyCtx, h: usize) -> Vec<(TTerm, Ty)> {
        let mut v = Vec::new();
        for k in 0..=h {
            v.extend(self.exact(ctx, k).iter().cloned());
        }
        v
    }

    fn exact(&mut self, ctx: &TyCtx, h: usize) -> Typed {
        let key = (ctx.clone(), h);
        if let Some(v) = self.exact.get(&key) {
            return v.clone();
        }
        let ext = self.calculus == Calculus::EtaExt;
        let mut out: Vec<(TTerm, Ty)> = Vec::new();
        if h == 0 {
            out.extend(ctx.term_vars().into_iter().map(|(i, ty)| (TTerm::Var(i), ty)));
            if ext {
                out.push((TTerm::Unit, Ty::Unit));
            }
        } else {
            let depth = ctx.type_depth();
            for annot in self.pool(depth).iter() {
                for (b, ty) in self.exact(&ctx.with_term(annot.clone()), h - 1).iter() {
                    out.push((TTerm::lam(annot.clone(), b.clone()), Ty::arr(annot.clone(), ty.clone())));
                }
            }
            let below = self.upto(ctx, h - 1);
            let top = self.exact(ctx, h - 1);
            for (f, tf) in &below {
                let Ty::Arr(dom, cod) = tf else { continue };
                let args: &[(TTerm, Ty)] = if f.height() == h - 1 { &below } else { &top };
                for (a, ta) in args {
                    if ta == &**dom {
                        out.push((TTerm::app(f.clone(), a.clone()), (**cod).clone()));
                    }
                }
            }
            if self.calculus == Calculus::SystemF {
                for (b, ty) in self.exact(&ctx.with_type(), h - 1).iter() {
                    out.push((TTerm::tlam(b.clone()), Ty::all(ty.clone())));
                }
                let pool = self.pool(depth);
                for (f, tf) in top.iter() {
                    let Ty::All(body) = tf else { continue };
                    for arg in pool.iter() {
                        out.push((TTerm::tapp(f.clone(), arg.clone()), ty_subst(body, 0, arg)));
                    }
                }
            }
            if ext {
                for (a, ta) in &below {
                    let args: &[(TTerm, Ty)] = if a.height() == h - 1 { &below } else { &top };
                    for (b, tb) in args {
                        out.push((TTerm::pair(a.clone(), b.clone()), Ty::prod(ta.clone(), tb.clone())));
                    }
                }
                for (proj, pick) in [(TTerm::fst as fn(TTerm) -> TTerm, 0), (TTerm::snd, 1)] {
                    for (p, tp) in top.iter() {
                        if let Ty::Prod(a, b) = tp {
                            let ty = if pick == 0 { a } else { b };
                            out.push((proj(p.clone()), (**ty).clone()));
                        }
                    }
                }
            }
        }
        let v = Arc::new(out);
        self.exact.insert(key, v.clone());
        v
    }
}

/// Every well-typed term of the corpus (restricted to `target_type` when
/// set) with its type, in canonical order.
pub fn gen_typed_terms_with_types(spec: &CorpusSpec) -> Vec<(TTerm, Ty)> {
    if spec.calculus == Calculus::Untyped {
        return Vec::new();
    }
    let mut g = TypedGen::new(spec.calculus, spec.type_height);
    let mut out = g.upto(&spec.typed_context, spec.height_bound);
    if let Some(target) = &spec.target_type {
        out.retain(|(_, ty)| ty == target);
    }
    out
}

pub fn gen_typed_terms(spec: &CorpusSpec) -> Vec<TTerm> {
    gen_typed_terms_with_types(spec).into_iter().map(|(t, _)| t).collect()
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;
    use crate::systemf::{parse_signature, parse_tterm, typecheck, Signature};
    use crate::term::{parse, NamingContext};

    #[test]
    fn small_corpora() {
        let h1: Vec<Term> = gen_terms(&CorpusSpec::untyped(1, 0)).collect();
        assert_eq!(h1, vec![Term::identity()]);
        let h0: Vec<Term> = gen_terms(&CorpusSpec::untyped(0, 1)).collect();
        assert_eq!(h0, vec![Term::Var(0)]);
        assert_eq!(gen_terms(&CorpusSpec::untyped(0, 0)).count(), 0);
    }

    #[test]
    fn contains_the_beta_peak() {
        let peak = parse("(\\x. x x) ((\\y. y) (\\y. y))", &NamingContext::empty()).unwrap();
        assert!(gen_terms(&CorpusSpec::untyped(3, 0)).any(|t| t == peak));
    }

    #[test]
    fn canonical_order() {
        let terms: Vec<Term> = gen_terms(&CorpusSpec::untyped(2, 1)).collect();
        assert_eq!(terms[0], Term::Var(0));
        assert_eq!(terms[1], Term::lam(Term::Var(0)));
        assert!(terms.windows(2).all(|w| w[0].height() <= w[1].height()));
        let lam = terms.iter().position(|t| *t == Term::lam(Term::Var(1))).unwrap();
        let app = terms.iter().position(|t| *t == Term::app(Term::Var(0), Term::Var(0))).unwrap();
        assert!(lam < app);
    }

    #[test]
    fn counts_agree_with_formula() {
        for h in 0..=3 {
            for c in 0..=2 {
                let terms: Vec<Term> = gen_terms(&CorpusSpec::untyped(h, c)).collect();
                assert_eq!(terms.len() as u128, count_terms(h, c), "h={h} c={c}");
                assert_eq!(terms.iter().collect::<HashSet<_>>().len(), terms.len());
            }
        }
    }

    #[test]
    fn typed_examples() {
        let sig = parse_signature("b").unwrap();
        let spec = CorpusSpec::typed(Calculus::SimplyTyped, 2, sig.ctx().clone())
            .with_target(Ty::arr(Ty::TVar(0), Ty::TVar(0)));
        let id = parse_tterm("\\x:b. x", &sig).unwrap();
        assert!(gen_typed_terms(&spec).contains(&id));

        let unit = CorpusSpec::typed(Calculus::EtaExt, 1, TyCtx::empty()).with_target(Ty::Unit);
        assert!(gen_typed_terms(&unit).contains(&TTerm::Unit));

        let sig = parse_signature("p:Unit*Unit").unwrap();
        let spec = CorpusSpec::typed(Calculus::EtaExt, 3, sig.ctx().clone());
        let sp = parse_tterm("<fst p, snd p>", &sig).unwrap();
        assert!(gen_typed_terms(&spec).contains(&sp));
    }

    #[test]
    fn typed_output_is_well_typed_and_unique() {
        let sig = parse_signature("b, c:b").unwrap();
        for calculus in [Calculus::SystemF, Calculus::SimplyTyped, Calculus::EtaExt] {
            let spec = CorpusSpec::typed(calculus, 2, sig.ctx().clone());
            let terms = gen_typed_terms_with_types(&spec);
            assert!(!terms.is_empty());
            for (t, ty) in &terms {
                assert_eq!(typecheck(sig.ctx(), t).as_ref(), Ok(ty), "{t:?}");
                assert!(t.height() <= 2);
            }
            let set: HashSet<_> = terms.iter().map(|(t, _)| t).collect();
            assert_eq!(set.len(), terms.len());
        }
    }

    #[test]
    fn system_f_has_polymorphic_identity() {
        let spec = CorpusSpec::typed(Calculus::SystemF, 2, TyCtx::empty());
        let id = parse_tterm("/\\a. \\x:a. x", &Signature::empty()).unwrap();
        assert!(gen_typed_terms(&spec).contains(&id));
    }
}
