//! Linearity of the `!`-free fragment.
//!
//! Without `!`, a term `t` with `x:A ⊢ t : B` and `B` a vector type acts
//! linearly on its argument: `t{u1 + u2} ≡ t{u1} + t{u2}` and
//! `t{a . u} ≡ a . t{u}`. This module checks instances of those equations
//! and exposes the decomposition of an irreducible open term into an
//! elimination context around a head.

use std::fmt;

use thiserror::Error;

use crate::encode::{is_v_type, term_to_vec, DenseVec, EncodeError};
use crate::reduce::{is_normal, Mode};
use crate::semiring::Scalar;
use crate::syntax::{Binder, Prop, Term};
use crate::typing::{check, infer, TypeError, TypingCtx};

/// Name of the hole when a context is shown or type-checked as a term.
pub const HOLE: &str = "_";

/// True when neither `t` nor any annotation in it mentions `!`.
pub fn in_linear_fragment(t: &Term) -> bool {
    !t.mentions_bang()
}

/// One elimination wrapped around the hole. Minor premises are stored in
/// locally nameless form under their binders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Frame {
    /// `d1(_; u)`
    ElimOne(Term),
    /// `_ u`
    App(Term),
    /// `dx(_; x, y. v)`
    ElimTensor(Binder, Binder, Term),
    /// `d0[C](_)`
    ElimZero(Prop),
    /// `da1(_; x. r)`
    ElimWith1(Binder, Term),
    /// `da2(_; x. r)`
    ElimWith2(Binder, Term),
    /// `dp(_; x. r; y. s)`
    ElimPlus(Binder, Term, Binder, Term),
    /// `_ [A]`
    TApp(Prop),
}

impl Frame {
    fn wrap(&self, inner: Term) -> Term {
        let b = Box::new(inner);
        let c = |t: &Term| Box::new(t.clone());
        match self {
            Frame::ElimOne(u) => Term::ElimOne(b, c(u)),
            Frame::App(u) => Term::App(b, c(u)),
            Frame::ElimTensor(x, y, v) => Term::ElimTensor(b, x.clone(), y.clone(), c(v)),
            Frame::ElimZero(p) => Term::ElimZero(p.clone(), b),
            Frame::ElimWith1(x, r) => Term::ElimWith1(b, x.clone(), c(r)),
            Frame::ElimWith2(x, r) => Term::ElimWith2(b, x.clone(), c(r)),
            Frame::ElimPlus(x, r, y, s) => Term::ElimPlus(b, x.clone(), c(r), y.clone(), c(s)),
            Frame::TApp(p) => Term::TApp(b, p.clone()),
        }
    }

    fn minors(&self) -> Vec<&Term> {
        match self {
            Frame::ElimOne(u) | Frame::App(u) | Frame::ElimTensor(_, _, u) => vec![u],
            Frame::ElimWith1(_, r) | Frame::ElimWith2(_, r) => vec![r],
            Frame::ElimPlus(_, r, _, s) => vec![r, s],
            Frame::ElimZero(_) | Frame::TApp(_) => vec![],
        }
    }

    /// Splits an elimination into its major premise and the frame around it.
    fn split(t: &Term) -> Option<(&Term, Frame)> {
        let c = |t: &Term| t.clone();
        Some(match t {
            Term::ElimOne(m, u) => (m, Frame::ElimOne(c(u))),
            Term::App(m, u) => (m, Frame::App(c(u))),
            Term::ElimTensor(m, x, y, v) => (m, Frame::ElimTensor(x.clone(), y.clone(), c(v))),
            Term::ElimZero(p, m) => (m, Frame::ElimZero(p.clone())),
            Term::ElimWith1(m, x, r) => (m, Frame::ElimWith1(x.clone(), c(r))),
            Term::ElimWith2(m, x, r) => (m, Frame::ElimWith2(x.clone(), c(r))),
            Term::ElimPlus(m, x, r, y, s) => (m, Frame::ElimPlus(x.clone(), c(r), y.clone(), c(s))),
            Term::TApp(m, p) => (m, Frame::TApp(p.clone())),
            _ => return None,
        })
    }
}

/// A term with a single hole in elimination position. Frames are listed
/// from the hole outwards.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ElimContext {
    pub frames: Vec<Frame>,
}

impl ElimContext {
    pub fn hole() -> Self {
        Self::default()
    }

    pub fn is_hole(&self) -> bool {
        self.frames.is_empty()
    }

    /// Reads a context back from a term whose only free variable is [`HOLE`].
    pub fn from_term(t: &Term) -> Option<ElimContext> {
        let mut frames = Vec::new();
        let mut cur = t;
        loop {
            if *cur == Term::var(HOLE) {
                frames.reverse();
                let k = ElimContext { frames };
                return k.side_conditions_hold().then_some(k);
            }
            let (major, frame) = Frame::split(cur)?;
            frames.push(frame);
            cur = major;
        }
    }

    fn side_conditions_hold(&self) -> bool {
        self.frames.iter().all(|f| f.minors().iter().all(|m| m.free_vars().is_empty()))
    }

    /// `K{u}`
    pub fn plug(&self, u: &Term) -> Term {
        self.frames.iter().fold(u.clone(), |acc, f| f.wrap(acc))
    }

    /// The context as a term whose free variable [`HOLE`] marks the hole.
    pub fn to_term(&self) -> Term {
        self.plug(&Term::var(HOLE))
    }

    /// `μ(K)`, counting the hole as a variable.
    pub fn measure(&self) -> u64 {
        self.to_term().measure().expect("contexts are !-free")
    }
}

impl fmt::Display for ElimContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_term().fmt(f)
    }
}

/// What the head of a decomposition is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeadKind {
    Variable,
    Introduction,
    Sum,
    Product,
}

impl HeadKind {
    pub fn of(t: &Term) -> Option<HeadKind> {
        Some(match t {
            Term::Var(_) => HeadKind::Variable,
            Term::Sum(..) => HeadKind::Sum,
            Term::Prod(..) => HeadKind::Product,
            t if t.is_introduction() => HeadKind::Introduction,
            _ => return None,
        })
    }
}

/// `t = K{head}` with `_:cut_type ⊢ K : A` and `x:C ⊢ head : cut_type`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub context: ElimContext,
    pub head: Term,
    pub kind: HeadKind,
    pub cut_type: Prop,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecomposeError {
    #[error("term is not irreducible")]
    NotIrreducible,
    #[error("term mentions `!`")]
    OutsideFragment,
    #[error("free variables other than `{expected}`: {found:?}")]
    MultipleFreeVars { expected: String, found: Vec<String> },
    #[error(transparent)]
    IllTyped(#[from] TypeError),
    #[error("minor premise of `{0}` is not closed")]
    SideCondition(Term),
}

/// Splits an irreducible `!`-free term with `x:C ⊢ t : A` into an elimination
/// context and a head that is a variable, an introduction, a sum or a product.
pub fn decompose(t: &Term, x: &str, c: &Prop) -> Result<Decomposition, DecomposeError> {
    if !in_linear_fragment(t) || c.mentions_bang() {
        return Err(DecomposeError::OutsideFragment);
    }
    let extra: Vec<String> = t.free_vars().into_iter().filter(|y| y != x).collect();
    if !extra.is_empty() {
        return Err(DecomposeError::MultipleFreeVars {
            expected: x.to_string(),
            found: extra,
        });
    }
    if !is_normal(t, Mode::Standard) {
        return Err(DecomposeError::NotIrreducible);
    }
    let ctx = TypingCtx::empty().with_linear(x, c.clone());
    infer(&ctx, t)?;
    let mut frames = Vec::new();
    let mut cur = t;
    let kind = loop {
        if let Some(kind) = HeadKind::of(cur) {
            break kind;
        }
        let (major, frame) = Frame::split(cur).expect("irreducible terms are heads or eliminations");
        if frame.minors().iter().any(|m| !m.free_vars().is_empty()) {
            return Err(DecomposeError::SideCondition(cur.clone()));
        }
        frames.push(frame);
        cur = major;
    };
    frames.reverse();
    let head = cur.clone();
    let head_ctx = if head.free_vars().contains(x) {
        ctx
    } else {
        TypingCtx::empty()
    };
    let cut_type = infer(&head_ctx, &head)?.prop;
    Ok(Decomposition {
        context: ElimContext { frames },
        head,
        kind,
        cut_type,
    })
}

/// Which precondition of [`check_linearity`] failed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Precondition {
    #[error("{0} mentions `!`")]
    OutsideFragment(&'static str),
    #[error("`{0}` is not a vector type")]
    NotAVectorType(Prop),
    #[error("{0} is ill-typed: {1}")]
    IllTyped(&'static str, TypeError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinearityError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(#[from] Precondition),
    #[error(transparent)]
    Encode(#[from] EncodeError),
}

/// Both sides of one equation, read as vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub left: DenseVec,
    pub right: DenseVec,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        self.left == self.right
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearityReport {
    /// `t{u1 + u2}` against `t{u1} + t{u2}`.
    pub additivity: Verdict,
    /// `t{a . u1}` against `a . t{u1}`.
    pub homogeneity: Verdict,
}

impl LinearityReport {
    pub fn holds(&self) -> bool {
        self.additivity.holds() && self.homogeneity.holds()
    }
}

/// One instance of the linearity equations for `x:A ⊢ t : B`.
#[allow(clippy::too_many_arguments)]
pub fn check_linearity(
    t: &Term,
    x: &str,
    a_ty: &Prop,
    b_ty: &Prop,
    u1: &Term,
    u2: &Term,
    a: &Scalar,
    max_steps: usize,
) -> Result<LinearityReport, LinearityError> {
    for (what, term) in [("t", t), ("u1", u1), ("u2", u2)] {
        if !in_linear_fragment(term) {
            return Err(Precondition::OutsideFragment(what).into());
        }
    }
    if a_ty.mentions_bang() {
        return Err(Precondition::OutsideFragment("A").into());
    }
    let shape = is_v_type(b_ty).ok_or_else(|| Precondition::NotAVectorType(b_ty.clone()))?;
    let ctx = TypingCtx::empty().with_linear(x, a_ty.clone());
    check(&ctx, t, b_ty).map_err(|e| Precondition::IllTyped("t", e))?;
    for (what, u) in [("u1", u1), ("u2", u2)] {
        check(&TypingCtx::empty(), u, a_ty).map_err(|e| Precondition::IllTyped(what, e))?;
    }
    let at = |u: &Term| t.subst_free(x, u);
    let read = |v: &Term| term_to_vec(v, &shape, max_steps);
    let additivity = Verdict {
        left: read(&at(&Term::sum(u1.clone(), u2.clone())))?,
        right: read(&Term::sum(at(u1), at(u2)))?,
    };
    let homogeneity = Verdict {
        left: read(&at(&Term::prod(a.clone(), u1.clone())))?,
        right: read(&Term::prod(a.clone(), at(u1)))?,
    };
    Ok(LinearityReport {
        additivity,
        homogeneity,
    })
}

/// A context `c` with `_:B ⊢ c : C`, `C` a vector type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observation {
    pub context: Term,
    pub result_type: Prop,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObsReport {
    pub verdicts: Vec<Verdict>,
}

impl ObsReport {
    /// Some context tells the two terms apart, so they are not
    /// observationally equivalent.
    pub fn refuted(&self) -> bool {
        self.verdicts.iter().any(|v| !v.holds())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObsError {
    #[error("context {index} is ill-typed: {reason}")]
    IllTypedContext { index: usize, reason: String },
    #[error(transparent)]
    Encode(#[from] EncodeError),
}

/// Plugs `t1` and `t2` into each context and compares the results. A single
/// difference refutes `t1 ∼ t2`; agreement everywhere is only evidence.
pub fn obs_equiv_sample(
    t1: &Term,
    t2: &Term,
    b_ty: &Prop,
    contexts: &[Observation],
    max_steps: usize,
) -> Result<ObsReport, ObsError> {
    let mut verdicts = Vec::new();
    for (index, obs) in contexts.iter().enumerate() {
        let bad = |reason: String| ObsError::IllTypedContext { index, reason };
        let shape = is_v_type(&obs.result_type).ok_or_else(|| bad(format!("`{}` is not a vector type", obs.result_type)))?;
        let ctx = TypingCtx::empty().with_linear(HOLE, b_ty.clone());
        check(&ctx, &obs.context, &obs.result_type).map_err(|e| bad(e.to_string()))?;
        let plug = |t: &Term| obs.context.subst_free(HOLE, t);
        verdicts.push(Verdict {
            left: term_to_vec(&plug(t1), &shape, max_steps)?,
            right: term_to_vec(&plug(t2), &shape, max_steps)?,
        });
    }
    Ok(ObsReport { verdicts })
}
