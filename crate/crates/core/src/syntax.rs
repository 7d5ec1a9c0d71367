//! Propositions and proof terms.
//!
//! Both ASTs are locally nameless: bound variables are de Bruijn indices,
//! free variables are names. Binders keep the surface name they were written
//! with as a [`Hint`], which takes no part in equality or hashing, so the
//! derived `PartialEq` *is* α-equivalence.
//!
//! Term variables and type variables live in separate index spaces. A term
//! binder (`λ`, the bodies of `δ⊗`, `δ&`, `δ⊕`, `δ!`) only shifts term indices;
//! `Λ` and `∀` only shift type indices.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use thiserror::Error;

use crate::semiring::{Scalar, Semiring};

pub type Name = String;

/// A variable occurrence: a de Bruijn index or a free name.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Var {
    Bound(usize),
    Free(Name),
}

/// Surface name of a binder. Ignored by `==` and `Hash`.
#[derive(Clone, Default)]
pub struct Hint(pub Name);

impl Hint {
    pub fn new(name: impl Into<Name>) -> Self {
        Hint(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl PartialEq for Hint {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Hint {}

impl Hash for Hint {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

impl fmt::Debug for Hint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Prop {
    Var(Var),
    One,
    Lolli(Box<Prop>, Box<Prop>),
    Tensor(Box<Prop>, Box<Prop>),
    Top,
    Zero,
    With(Box<Prop>, Box<Prop>),
    Plus(Box<Prop>, Box<Prop>),
    Bang(Box<Prop>),
    Forall(Hint, Box<Prop>),
}

/// A term binder `x^A`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Binder {
    pub hint: Hint,
    pub ty: Prop,
}

impl Binder {
    pub fn new(name: impl Into<Name>, ty: Prop) -> Self {
        Binder {
            hint: Hint::new(name),
            ty,
        }
    }
}

/// Proof terms.
///
/// `Inl` carries the right-hand disjunct, `Inr` the left-hand one and
/// `ElimZero` its conclusion, so that type checking is syntax directed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Var),
    Sum(Box<Term>, Box<Term>),
    Prod(Scalar, Box<Term>),
    Star(Scalar),
    ElimOne(Box<Term>, Box<Term>),
    Lam(Binder, Box<Term>),
    App(Box<Term>, Box<Term>),
    TensorI(Box<Term>, Box<Term>),
    /// `δ⊗(t, x^A y^B. u)`; in `u`, index 1 is `x` and index 0 is `y`.
    ElimTensor(Box<Term>, Binder, Binder, Box<Term>),
    Unit,
    ElimZero(Prop, Box<Term>),
    Pair(Box<Term>, Box<Term>),
    ElimWith1(Box<Term>, Binder, Box<Term>),
    ElimWith2(Box<Term>, Binder, Box<Term>),
    Inl(Box<Term>, Prop),
    Inr(Box<Term>, Prop),
    ElimPlus(Box<Term>, Binder, Box<Term>, Binder, Box<Term>),
    BangI(Box<Term>),
    ElimBang(Box<Term>, Binder, Box<Term>),
    TLam(Hint, Box<Term>),
    TApp(Box<Term>, Prop),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("the measure is only defined without `!`; found `{0}`")]
    BangOutsideFragment(&'static str),
}

// ---------------------------------------------------------------------------
// Propositions

impl Prop {
    pub fn var(name: impl Into<Name>) -> Prop {
        Prop::Var(Var::Free(name.into()))
    }

    pub fn lolli(a: Prop, b: Prop) -> Prop {
        Prop::Lolli(Box::new(a), Box::new(b))
    }

    pub fn tensor(a: Prop, b: Prop) -> Prop {
        Prop::Tensor(Box::new(a), Box::new(b))
    }

    pub fn with(a: Prop, b: Prop) -> Prop {
        Prop::With(Box::new(a), Box::new(b))
    }

    pub fn plus(a: Prop, b: Prop) -> Prop {
        Prop::Plus(Box::new(a), Box::new(b))
    }

    pub fn bang(a: Prop) -> Prop {
        Prop::Bang(Box::new(a))
    }

    /// `∀name. body`, abstracting the free variable `name` of `body`.
    pub fn forall(name: &str, body: Prop) -> Prop {
        Prop::Forall(Hint::new(name), Box::new(body.close(name)))
    }

    pub(crate) fn map_vars<F: Fn(&Var, usize) -> Prop>(&self, depth: usize, f: &F) -> Prop {
        let go = |p: &Prop| Box::new(p.map_vars(depth, f));
        match self {
            Prop::Var(v) => f(v, depth),
            Prop::One => Prop::One,
            Prop::Top => Prop::Top,
            Prop::Zero => Prop::Zero,
            Prop::Lolli(a, b) => Prop::Lolli(go(a), go(b)),
            Prop::Tensor(a, b) => Prop::Tensor(go(a), go(b)),
            Prop::With(a, b) => Prop::With(go(a), go(b)),
            Prop::Plus(a, b) => Prop::Plus(go(a), go(b)),
            Prop::Bang(a) => Prop::Bang(go(a)),
            Prop::Forall(h, a) => Prop::Forall(h.clone(), Box::new(a.map_vars(depth + 1, f))),
        }
    }

    /// Adds `d` to every bound index at or above `cutoff`.
    pub fn shift(&self, d: usize, cutoff: usize) -> Prop {
        if d == 0 {
            return self.clone();
        }
        self.map_vars(cutoff, &|v, c| match v {
            Var::Bound(i) if *i >= c => Prop::Var(Var::Bound(i + d)),
            _ => Prop::Var(v.clone()),
        })
    }

    /// Replaces index `depth` (as seen from the root of `self`) by `arg` and
    /// lowers the indices above it.
    pub(crate) fn subst_bound(&self, depth: usize, arg: &Prop) -> Prop {
        self.map_vars(depth, &|v, c| match v {
            Var::Bound(i) if *i == c => arg.shift(c, 0),
            Var::Bound(i) if *i > c => Prop::Var(Var::Bound(i - 1)),
            _ => Prop::Var(v.clone()),
        })
    }

    /// Opens the body of a `∀` with `arg`.
    pub fn instantiate(&self, arg: &Prop) -> Prop {
        self.subst_bound(0, arg)
    }

    pub(crate) fn close_at(&self, depth: usize, name: &str) -> Prop {
        self.map_vars(depth, &|v, c| match v {
            Var::Free(n) if n == name => Prop::Var(Var::Bound(c)),
            Var::Bound(i) if *i >= c => Prop::Var(Var::Bound(i + 1)),
            _ => Prop::Var(v.clone()),
        })
    }

    /// Turns the free variable `name` into the index of a new enclosing binder.
    pub fn close(&self, name: &str) -> Prop {
        self.close_at(0, name)
    }

    /// `(B/X)A` for a free variable `X`.
    pub fn subst_free(&self, name: &str, b: &Prop) -> Prop {
        self.map_vars(0, &|v, c| match v {
            Var::Free(n) if n == name => b.shift(c, 0),
            _ => Prop::Var(v.clone()),
        })
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<Name>) {
        match self {
            Prop::Var(Var::Free(n)) => {
                out.insert(n.clone());
            }
            Prop::Var(Var::Bound(_)) | Prop::One | Prop::Top | Prop::Zero => {}
            Prop::Lolli(a, b) | Prop::Tensor(a, b) | Prop::With(a, b) | Prop::Plus(a, b) => {
                a.collect_free(out);
                b.collect_free(out);
            }
            Prop::Bang(a) | Prop::Forall(_, a) => a.collect_free(out),
        }
    }

    /// True when no bound index escapes `depth` enclosing binders.
    pub fn is_scoped(&self, depth: usize) -> bool {
        match self {
            Prop::Var(Var::Bound(i)) => *i < depth,
            Prop::Var(Var::Free(_)) | Prop::One | Prop::Top | Prop::Zero => true,
            Prop::Lolli(a, b) | Prop::Tensor(a, b) | Prop::With(a, b) | Prop::Plus(a, b) => {
                a.is_scoped(depth) && b.is_scoped(depth)
            }
            Prop::Bang(a) => a.is_scoped(depth),
            Prop::Forall(_, a) => a.is_scoped(depth + 1),
        }
    }

    pub fn mentions_bang(&self) -> bool {
        match self {
            Prop::Bang(_) => true,
            Prop::Var(_) | Prop::One | Prop::Top | Prop::Zero => false,
            Prop::Lolli(a, b) | Prop::Tensor(a, b) | Prop::With(a, b) | Prop::Plus(a, b) => {
                a.mentions_bang() || b.mentions_bang()
            }
            Prop::Forall(_, a) => a.mentions_bang(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Prop::Var(_) | Prop::One | Prop::Top | Prop::Zero => 1,
            Prop::Lolli(a, b) | Prop::Tensor(a, b) | Prop::With(a, b) | Prop::Plus(a, b) => {
                1 + a.size() + b.size()
            }
            Prop::Bang(a) | Prop::Forall(_, a) => 1 + a.size(),
        }
    }
}

// ---------------------------------------------------------------------------
// Terms

fn bx(t: Term) -> Box<Term> {
    Box::new(t)
}

impl Term {
    pub fn var(name: impl Into<Name>) -> Term {
        Term::Var(Var::Free(name.into()))
    }

    pub fn sum(t: Term, u: Term) -> Term {
        Term::Sum(bx(t), bx(u))
    }

    pub fn prod(a: Scalar, t: Term) -> Term {
        Term::Prod(a, bx(t))
    }

    pub fn elim_one(t: Term, u: Term) -> Term {
        Term::ElimOne(bx(t), bx(u))
    }

    /// `λname^ty. body`, abstracting the free variable `name` of `body`.
    pub fn lam(name: &str, ty: Prop, body: Term) -> Term {
        Term::Lam(Binder::new(name, ty), bx(body.close(&[name])))
    }

    pub fn app(t: Term, u: Term) -> Term {
        Term::App(bx(t), bx(u))
    }

    /// Left-nested application `f a1 a2 ...`.
    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn tensor(t: Term, u: Term) -> Term {
        Term::TensorI(bx(t), bx(u))
    }

    pub fn elim_tensor(t: Term, x: &str, a: Prop, y: &str, b: Prop, body: Term) -> Term {
        Term::ElimTensor(bx(t), Binder::new(x, a), Binder::new(y, b), bx(body.close(&[x, y])))
    }

    pub fn elim_zero(c: Prop, t: Term) -> Term {
        Term::ElimZero(c, bx(t))
    }

    pub fn pair(t: Term, u: Term) -> Term {
        Term::Pair(bx(t), bx(u))
    }

    pub fn elim_with1(t: Term, x: &str, a: Prop, body: Term) -> Term {
        Term::ElimWith1(bx(t), Binder::new(x, a), bx(body.close(&[x])))
    }

    pub fn elim_with2(t: Term, x: &str, b: Prop, body: Term) -> Term {
        Term::ElimWith2(bx(t), Binder::new(x, b), bx(body.close(&[x])))
    }

    /// `inl(t) : A ⊕ right`.
    pub fn inl(t: Term, right: Prop) -> Term {
        Term::Inl(bx(t), right)
    }

    /// `inr(t) : left ⊕ B`.
    pub fn inr(t: Term, left: Prop) -> Term {
        Term::Inr(bx(t), left)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn elim_plus(t: Term, x: &str, a: Prop, u: Term, y: &str, b: Prop, v: Term) -> Term {
        Term::ElimPlus(
            bx(t),
            Binder::new(x, a),
            bx(u.close(&[x])),
            Binder::new(y, b),
            bx(v.close(&[y])),
        )
    }

    pub fn bang(t: Term) -> Term {
        Term::BangI(bx(t))
    }

    pub fn elim_bang(t: Term, x: &str, a: Prop, body: Term) -> Term {
        Term::ElimBang(bx(t), Binder::new(x, a), bx(body.close(&[x])))
    }

    /// `ΛX. body`, abstracting the free type variable `name` of `body`.
    pub fn tlam(name: &str, body: Term) -> Term {
        Term::TLam(Hint::new(name), bx(body.close_type(name)))
    }

    pub fn tapp(t: Term, a: Prop) -> Term {
        Term::TApp(bx(t), a)
    }

    /// Generic traversal: rebuilds the term, handing every variable
    /// occurrence to `fv` and every proposition annotation to `fp`, together
    /// with the number of term and type binders crossed so far.
    pub(crate) fn map_vars<FV, FP>(&self, td: usize, yd: usize, fv: &FV, fp: &FP) -> Term
    where
        FV: Fn(&Var, usize, usize) -> Term,
        FP: Fn(&Prop, usize) -> Prop,
    {
        let go = |t: &Term| bx(t.map_vars(td, yd, fv, fp));
        let under = |t: &Term, n: usize| bx(t.map_vars(td + n, yd, fv, fp));
        let bind = |b: &Binder| Binder {
            hint: b.hint.clone(),
            ty: fp(&b.ty, yd),
        };
        match self {
            Term::Var(v) => fv(v, td, yd),
            Term::Sum(t, u) => Term::Sum(go(t), go(u)),
            Term::Prod(a, t) => Term::Prod(a.clone(), go(t)),
            Term::Star(a) => Term::Star(a.clone()),
            Term::ElimOne(t, u) => Term::ElimOne(go(t), go(u)),
            Term::Lam(b, t) => Term::Lam(bind(b), under(t, 1)),
            Term::App(t, u) => Term::App(go(t), go(u)),
            Term::TensorI(t, u) => Term::TensorI(go(t), go(u)),
            Term::ElimTensor(t, x, y, u) => Term::ElimTensor(go(t), bind(x), bind(y), under(u, 2)),
            Term::Unit => Term::Unit,
            Term::ElimZero(c, t) => Term::ElimZero(fp(c, yd), go(t)),
            Term::Pair(t, u) => Term::Pair(go(t), go(u)),
            Term::ElimWith1(t, x, u) => Term::ElimWith1(go(t), bind(x), under(u, 1)),
            Term::ElimWith2(t, x, u) => Term::ElimWith2(go(t), bind(x), under(u, 1)),
            Term::Inl(t, b) => Term::Inl(go(t), fp(b, yd)),
            Term::Inr(t, a) => Term::Inr(go(t), fp(a, yd)),
            Term::ElimPlus(t, x, u, y, v) => {
                Term::ElimPlus(go(t), bind(x), under(u, 1), bind(y), under(v, 1))
            }
            Term::BangI(t) => Term::BangI(go(t)),
            Term::ElimBang(t, x, u) => Term::ElimBang(go(t), bind(x), under(u, 1)),
            Term::TLam(h, t) => Term::TLam(h.clone(), bx(t.map_vars(td, yd + 1, fv, fp))),
            Term::TApp(t, a) => Term::TApp(go(t), fp(a, yd)),
        }
    }

    /// Raises dangling term indices by `dt` and dangling type indices by `dy`.
    pub fn shifted(&self, dt: usize, dy: usize) -> Term {
        if dt == 0 && dy == 0 {
            return self.clone();
        }
        self.map_vars(
            0,
            0,
            &|v, c, _| match v {
                Var::Bound(i) if *i >= c => Term::Var(Var::Bound(i + dt)),
                _ => Term::Var(v.clone()),
            },
            &|p, c| p.shift(dy, c),
        )
    }

    /// Opens the body of a binder that binds `args.len()` term variables;
    /// `args[0]` is the outermost one.
    pub fn open(&self, args: &[Term]) -> Term {
        let n = args.len();
        self.map_vars(
            0,
            0,
            &|v, td, yd| match v {
                Var::Bound(i) if *i >= td && *i - td < n => args[n - 1 - (*i - td)].shifted(td, yd),
                Var::Bound(i) if *i >= td => Term::Var(Var::Bound(i - n)),
                _ => Term::Var(v.clone()),
            },
            &|p, _| p.clone(),
        )
    }

    /// Opens the body of a `Λ` with the proposition `arg`.
    pub fn open_type(&self, arg: &Prop) -> Term {
        self.map_vars(0, 0, &|v, _, _| Term::Var(v.clone()), &|p, yd| p.subst_bound(yd, arg))
    }

    /// Abstracts the free term variables `names` into binder indices;
    /// `names[0]` becomes the outermost binder.
    pub fn close(&self, names: &[&str]) -> Term {
        let n = names.len();
        self.map_vars(
            0,
            0,
            &|v, td, _| match v {
                Var::Free(x) => match names.iter().position(|m| m == x) {
                    Some(j) => Term::Var(Var::Bound(td + n - 1 - j)),
                    None => Term::Var(v.clone()),
                },
                Var::Bound(i) if *i >= td => Term::Var(Var::Bound(i + n)),
                Var::Bound(_) => Term::Var(v.clone()),
            },
            &|p, _| p.clone(),
        )
    }

    /// Abstracts the free type variable `name` into a new enclosing `Λ` index.
    pub fn close_type(&self, name: &str) -> Term {
        self.map_vars(0, 0, &|v, _, _| Term::Var(v.clone()), &|p, yd| p.close_at(yd, name))
    }

    /// `(u/x)t` for a free variable `x`.
    pub fn subst_free(&self, name: &str, u: &Term) -> Term {
        self.map_vars(
            0,
            0,
            &|v, td, yd| match v {
                Var::Free(x) if x == name => u.shifted(td, yd),
                _ => Term::Var(v.clone()),
            },
            &|p, _| p.clone(),
        )
    }

    /// `(B/X)t`: substitutes a proposition for a free type variable in every
    /// annotation of `t`.
    pub fn subst_free_type(&self, name: &str, b: &Prop) -> Term {
        self.map_vars(0, 0, &|v, _, _| Term::Var(v.clone()), &|p, _| p.subst_free(name, b))
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.visit(&mut |t| {
            if let Term::Var(Var::Free(x)) = t {
                out.insert(x.clone());
            }
        });
        out
    }

    pub fn free_type_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.visit_props(&mut |p| p.collect_free(&mut out));
        out
    }

    /// Pre-order walk over all subterms.
    pub fn visit<F: FnMut(&Term)>(&self, f: &mut F) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    /// Every proposition annotation, in pre-order.
    pub fn visit_props<F: FnMut(&Prop)>(&self, f: &mut F) {
        self.visit(&mut |t| {
            for p in t.annotations() {
                f(p);
            }
        });
    }

    /// The proposition annotations stored directly on this node.
    pub fn annotations(&self) -> Vec<&Prop> {
        match self {
            Term::Lam(b, _) | Term::ElimWith1(_, b, _) | Term::ElimWith2(_, b, _) | Term::ElimBang(_, b, _) => {
                vec![&b.ty]
            }
            Term::ElimTensor(_, x, y, _) | Term::ElimPlus(_, x, _, y, _) => vec![&x.ty, &y.ty],
            Term::ElimZero(c, _) | Term::Inl(_, c) | Term::Inr(_, c) | Term::TApp(_, c) => vec![c],
            _ => Vec::new(),
        }
    }

    /// Immediate subterms, in position order.
    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Var(_) | Term::Star(_) | Term::Unit => Vec::new(),
            Term::Prod(_, t)
            | Term::Lam(_, t)
            | Term::ElimZero(_, t)
            | Term::Inl(t, _)
            | Term::Inr(t, _)
            | Term::BangI(t)
            | Term::TLam(_, t)
            | Term::TApp(t, _) => vec![t],
            Term::Sum(t, u)
            | Term::ElimOne(t, u)
            | Term::App(t, u)
            | Term::TensorI(t, u)
            | Term::ElimTensor(t, _, _, u)
            | Term::Pair(t, u)
            | Term::ElimWith1(t, _, u)
            | Term::ElimWith2(t, _, u)
            | Term::ElimBang(t, _, u) => vec![t, u],
            Term::ElimPlus(t, _, u, _, v) => vec![t, u, v],
        }
    }

    pub fn children_mut(&mut self) -> Vec<&mut Term> {
        match self {
            Term::Var(_) | Term::Star(_) | Term::Unit => Vec::new(),
            Term::Prod(_, t)
            | Term::Lam(_, t)
            | Term::ElimZero(_, t)
            | Term::Inl(t, _)
            | Term::Inr(t, _)
            | Term::BangI(t)
            | Term::TLam(_, t)
            | Term::TApp(t, _) => vec![t],
            Term::Sum(t, u)
            | Term::ElimOne(t, u)
            | Term::App(t, u)
            | Term::TensorI(t, u)
            | Term::ElimTensor(t, _, _, u)
            | Term::Pair(t, u)
            | Term::ElimWith1(t, _, u)
            | Term::ElimWith2(t, _, u)
            | Term::ElimBang(t, _, u) => vec![t, u],
            Term::ElimPlus(t, _, u, _, v) => vec![t, u, v],
        }
    }

    pub fn subterm(&self, path: &[usize]) -> Option<&Term> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.children().get(i)?.subterm(rest),
        }
    }

    pub fn subterm_mut(&mut self, path: &[usize]) -> Option<&mut Term> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.children_mut().into_iter().nth(i)?.subterm_mut(rest),
        }
    }

    /// Number of AST nodes (annotations not counted).
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Introduction forms: `a.⋆`, `λ`, `⊗`, `⟨⟩`, pairs, injections, `!`, `Λ`.
    pub fn is_introduction(&self) -> bool {
        matches!(
            self,
            Term::Star(_)
                | Term::Lam(..)
                | Term::TensorI(..)
                | Term::Unit
                | Term::Pair(..)
                | Term::Inl(..)
                | Term::Inr(..)
                | Term::BangI(_)
                | Term::TLam(..)
        )
    }

    pub fn is_elimination(&self) -> bool {
        matches!(
            self,
            Term::ElimOne(..)
                | Term::App(..)
                | Term::ElimTensor(..)
                | Term::ElimZero(..)
                | Term::ElimWith1(..)
                | Term::ElimWith2(..)
                | Term::ElimPlus(..)
                | Term::ElimBang(..)
                | Term::TApp(..)
        )
    }

    /// True when `t` or one of its annotations mentions `!`.
    pub fn mentions_bang(&self) -> bool {
        let mut found = false;
        self.visit(&mut |t| {
            if matches!(t, Term::BangI(_) | Term::ElimBang(..)) {
                found = true;
            }
        });
        if !found {
            self.visit_props(&mut |p| found |= p.mentions_bang());
        }
        found
    }

    pub fn semirings(&self) -> BTreeSet<Semiring> {
        let mut out = BTreeSet::new();
        self.visit(&mut |t| {
            if let Term::Star(a) | Term::Prod(a, _) = t {
                out.insert(a.semiring());
            }
        });
        out
    }

    /// The measure μ on the `!`-free fragment.
    pub fn measure(&self) -> Result<u64, SyntaxError> {
        let m = |t: &Term| t.measure();
        Ok(match self {
            Term::Var(_) => 0,
            Term::Sum(t, u) | Term::Pair(t, u) => 1 + m(t)?.max(m(u)?),
            Term::Prod(_, t)
            | Term::Lam(_, t)
            | Term::ElimZero(_, t)
            | Term::Inl(t, _)
            | Term::Inr(t, _)
            | Term::TLam(_, t)
            | Term::TApp(t, _) => 1 + m(t)?,
            Term::Star(_) | Term::Unit => 1,
            Term::ElimOne(t, u)
            | Term::App(t, u)
            | Term::TensorI(t, u)
            | Term::ElimTensor(t, _, _, u)
            | Term::ElimWith1(t, _, u)
            | Term::ElimWith2(t, _, u) => 1 + m(t)? + m(u)?,
            Term::ElimPlus(t, _, u, _, v) => 1 + m(t)? + m(u)?.max(m(v)?),
            Term::BangI(_) => return Err(SyntaxError::BangOutsideFragment("!t")),
            Term::ElimBang(..) => return Err(SyntaxError::BangOutsideFragment("δ!")),
        })
    }
}

pub fn fv_term(t: &Term) -> BTreeSet<Name> {
    t.free_vars()
}

pub fn ftv_term(t: &Term) -> BTreeSet<Name> {
    t.free_type_vars()
}

pub fn ftv_prop(a: &Prop) -> BTreeSet<Name> {
    a.free_vars()
}

pub fn subst_term(t: &Term, x: &str, u: &Term) -> Term {
    t.subst_free(x, u)
}

pub fn subst_prop(a: &Prop, x: &str, b: &Prop) -> Prop {
    a.subst_free(x, b)
}

pub fn subst_prop_in_term(t: &Term, x: &str, b: &Prop) -> Term {
    t.subst_free_type(x, b)
}

pub fn alpha_eq_term(t: &Term, u: &Term) -> bool {
    t == u
}

pub fn alpha_eq_prop(a: &Prop, b: &Prop) -> bool {
    a == b
}

pub fn measure_mu(t: &Term) -> Result<u64, SyntaxError> {
    t.measure()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::Semiring;

    fn star(n: u64) -> Term {
        Term::Star(Semiring::Rat.from_u64(n))
    }

    fn x() -> Prop {
        Prop::var("X")
    }

    #[test]
    fn free_variables() {
        let id = Term::lam("x", Prop::One, Term::var("x"));
        assert!(fv_term(&id).is_empty());
        let t = Term::tensor(Term::var("x"), Term::var("y"));
        assert_eq!(fv_term(&t), ["x".to_string(), "y".to_string()].into());
        let a = Prop::forall("X", Prop::lolli(x(), Prop::var("Y")));
        assert_eq!(ftv_prop(&a), ["Y".to_string()].into());
    }

    #[test]
    fn term_substitution() {
        // (λy^1. y x)[2.⋆/x] = λy^1. y 2.⋆
        let t = Term::lam("y", Prop::One, Term::app(Term::var("y"), Term::var("x")));
        let want = Term::lam("y", Prop::One, Term::app(Term::var("y"), star(2)));
        assert_eq!(subst_term(&t, "x", &star(2)), want);
        // identity substitution
        assert_eq!(subst_term(&t, "x", &Term::var("x")), t);
        // shadowing: the bound x is untouched
        let id = Term::lam("x", Prop::One, Term::var("x"));
        assert_eq!(subst_term(&id, "x", &star(2)), id);
    }

    #[test]
    fn substitution_does_not_capture() {
        // (λy. x)[y/x] must not become λy. y
        let t = Term::lam("y", Prop::One, Term::var("x"));
        let r = subst_term(&t, "x", &Term::var("y"));
        assert_eq!(r, Term::lam("z", Prop::One, Term::var("y")));
        assert_ne!(r, Term::lam("y", Prop::One, Term::var("y")));
    }

    #[test]
    fn prop_substitution() {
        let b = Prop::tensor(Prop::One, Prop::Top);
        assert_eq!(subst_prop(&Prop::lolli(x(), x()), "X", &b), Prop::lolli(b.clone(), b.clone()));
        let shadowed = Prop::forall("X", x());
        assert_eq!(subst_prop(&shadowed, "X", &b), shadowed);
        let t = Term::tlam("Y", Term::lam("x", x(), Term::var("x")));
        let want = Term::tlam("Y", Term::lam("x", b.clone(), Term::var("x")));
        assert_eq!(subst_prop_in_term(&t, "X", &b), want);
    }

    #[test]
    fn prop_substitution_under_binder_shifts() {
        // (∀Y. Y ⊸ Z)[(∀W. W)/Z]
        let a = Prop::forall("Y", Prop::lolli(Prop::var("Y"), Prop::var("Z")));
        let b = Prop::forall("W", Prop::var("W"));
        let r = a.subst_free("Z", &b);
        assert_eq!(r, Prop::forall("Y", Prop::lolli(Prop::var("Y"), b)));
    }

    #[test]
    fn alpha_equivalence() {
        let a = Term::lam("x", Prop::One, Term::var("x"));
        let b = Term::lam("y", Prop::One, Term::var("y"));
        assert!(alpha_eq_term(&a, &b));
        assert!(alpha_eq_prop(&Prop::forall("X", x()), &Prop::forall("Y", Prop::var("Y"))));
        let c = Term::lam("x", Prop::Top, Term::var("x"));
        assert!(!alpha_eq_term(&a, &c));
    }

    #[test]
    fn open_instantiates_in_order() {
        // δ⊗(t, x y. x ⊗ y): opening with (a, b) gives a ⊗ b
        let body = Term::tensor(Term::var("x"), Term::var("y")).close(&["x", "y"]);
        let r = body.open(&[Term::var("a"), Term::var("b")]);
        assert_eq!(r, Term::tensor(Term::var("a"), Term::var("b")));
    }

    #[test]
    fn open_type_shifts_under_binders() {
        // (ΛX. λx^X. ΛY. x) [∀Z.Z]
        let inner = Term::tlam("Y", Term::var("x"));
        let body = Term::lam("x", x(), inner).close_type("X");
        let arg = Prop::forall("Z", Prop::var("Z"));
        let r = body.open_type(&arg);
        assert_eq!(r, Term::lam("x", arg, Term::tlam("Y", Term::var("x"))));
    }

    #[test]
    fn measure_examples() {
        assert_eq!(measure_mu(&Term::var("x")), Ok(0));
        assert_eq!(measure_mu(&star(3)), Ok(1));
        // μ(λx^1. x ⊞ x) = 1 + (1 + max(0, 0)) = 2
        let t = Term::lam("x", Prop::One, Term::sum(Term::var("x"), Term::var("x")));
        assert_eq!(measure_mu(&t), Ok(2));
        let b = Term::bang(star(1));
        assert!(matches!(measure_mu(&b), Err(SyntaxError::BangOutsideFragment(_))));
    }

    #[test]
    fn paths_address_children() {
        let t = Term::sum(star(1), Term::pair(star(2), star(3)));
        assert_eq!(t.subterm(&[1, 0]), Some(&star(2)));
        assert_eq!(t.subterm(&[2]), None);
        assert_eq!(t.size(), 5);
    }
}
