//! Type checking `Ξ; Γ ⊢ t : A`.
//!
//! The linear context is not split nondeterministically. Instead each
//! subterm reports the linear variables it consumed plus a *slack* flag that
//! is raised by `⟨⟩` and `δ₀`, which may absorb any leftover resources:
//!
//! * multiplicative rules check the second premise against what the first
//!   one left over, and OR the slack flags;
//! * additive rules check both branches against the same context. Branch
//!   usages `(C₁, s₁)` and `(C₂, s₂)` join when `C₁ ∖ C₂` is empty or `s₂` holds
//!   and `C₂ ∖ C₁` is empty or `s₁` holds; the join is `(C₁ ∪ C₂, s₁ ∧ s₂)`.
//!
//! Binders are opened with fresh names, so the `∀ᵢ` side condition holds by
//! construction. It is still checked.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use thiserror::Error;

use crate::semiring::Semiring;
use crate::syntax::{Binder, Name, Prop, Term, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(Name),
    #[error("linear variable `{0}` is never used")]
    LinearVarUnused(Name),
    #[error("linear variable `{0}` is used more than once")]
    LinearVarReused(Name),
    #[error("the branches of {construct} use different linear variables: {{{}}} vs {{{}}}", .left.join(", "), .right.join(", "))]
    BranchUsageMismatch {
        construct: &'static str,
        left: Vec<Name>,
        right: Vec<Name>,
    },
    #[error("{construct}: expected {expected}, found `{found}`")]
    TypeMismatch {
        construct: &'static str,
        expected: String,
        found: Prop,
    },
    #[error("type variable `{0}` escapes its scope")]
    EscapingTypeVariable(Name),
    #[error("`!t` requires an empty linear context, but `t` uses {{{}}}", .0.join(", "))]
    NonEmptyLinearCtxUnderBang(Vec<Name>),
    #[error("expected type `{expected}`, found `{found}`")]
    AnnotationMismatch { expected: Prop, found: Prop },
    #[error("term mixes scalars from several semirings: {0:?}")]
    MixedSemiring(Vec<Semiring>),
    #[error("ill-formed context: {0}")]
    MalformedContext(String),
    #[error("dangling de Bruijn index in {0}")]
    IllScoped(&'static str),
}

type Result<T> = std::result::Result<T, TypeError>;

/// `Ξ; Γ`: non-linear and linear hypotheses, in declaration order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TypingCtx {
    pub xi: Vec<(Name, Prop)>,
    pub gamma: Vec<(Name, Prop)>,
}

impl TypingCtx {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn linear(gamma: impl IntoIterator<Item = (Name, Prop)>) -> Self {
        TypingCtx {
            xi: Vec::new(),
            gamma: gamma.into_iter().collect(),
        }
    }

    pub fn with_linear(mut self, name: impl Into<Name>, ty: Prop) -> Self {
        self.gamma.push((name.into(), ty));
        self
    }

    pub fn with_nonlinear(mut self, name: impl Into<Name>, ty: Prop) -> Self {
        self.xi.push((name.into(), ty));
        self
    }

    /// Names are distinct across both contexts and every type is scoped.
    pub fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for (x, a) in self.xi.iter().chain(&self.gamma) {
            if !seen.insert(x.as_str()) {
                return Err(TypeError::MalformedContext(format!("`{x}` is declared twice")));
            }
            if !a.is_scoped(0) {
                return Err(TypeError::IllScoped("a context entry"));
            }
        }
        Ok(())
    }

    pub fn linear_names(&self) -> BTreeSet<Name> {
        self.gamma.iter().map(|(x, _)| x.clone()).collect()
    }
}

/// Linear resources consumed by a derivation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Usage {
    pub consumed: BTreeSet<Name>,
    /// Set when a `⟨⟩` or `δ₀` can absorb any extra linear hypotheses.
    pub slack: bool,
}

impl Usage {
    fn exact(consumed: BTreeSet<Name>) -> Self {
        Usage { consumed, slack: false }
    }

    /// Usage of two premises whose contexts are disjoint.
    fn then(mut self, other: Usage) -> Usage {
        self.consumed.extend(other.consumed);
        self.slack |= other.slack;
        self
    }

    /// Usage of two premises sharing one context. On a mismatch the union
    /// is returned together with the error, so that checking can go on.
    fn join(self, other: Usage, construct: &'static str) -> (Usage, Option<TypeError>) {
        let left_only = self.consumed.difference(&other.consumed).next().is_some();
        let right_only = other.consumed.difference(&self.consumed).next().is_some();
        let err = ((left_only && !other.slack) || (right_only && !self.slack)).then(|| {
            TypeError::BranchUsageMismatch {
                construct,
                left: self.consumed.iter().map(|n| display_name(n)).collect(),
                right: other.consumed.iter().map(|n| display_name(n)).collect(),
            }
        });
        let joined = Usage {
            consumed: self.consumed.union(&other.consumed).cloned().collect(),
            slack: self.slack && other.slack,
        };
        (joined, err)
    }
}

/// Result of a successful check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeReport {
    pub prop: Prop,
    pub usage: Usage,
}

/// Infers the type of `t` and checks the judgement `Ξ; Γ ⊢ t : A`: every
/// linear hypothesis of `Γ` must be consumed, or absorbed by slack.
pub fn infer(ctx: &TypingCtx, t: &Term) -> Result<TypeReport> {
    ctx.validate()?;
    let semirings = t.semirings();
    if semirings.len() > 1 {
        return Err(TypeError::MixedSemiring(semirings.into_iter().collect()));
    }
    let xi: Env = ctx.xi.iter().cloned().collect();
    let gamma: Env = ctx.gamma.iter().cloned().collect();
    let mut checker = Checker {
        fresh: 0,
        linear: gamma.keys().cloned().collect(),
        mismatch: None,
    };
    // A branch mismatch is reported unless a reuse explains it: in
    // `(x + y) * (y + x)` the real culprit is the second use of `y`.
    let result = checker.synth(&xi, &gamma, t);
    let (prop, usage) = match (result, checker.mismatch) {
        (Err(e @ TypeError::LinearVarReused(_)), _) => return Err(e),
        (_, Some(e)) | (Err(e), None) => return Err(e),
        (Ok(r), None) => r,
    };
    if !usage.slack {
        if let Some(x) = gamma.keys().find(|x| !usage.consumed.contains(*x)) {
            return Err(TypeError::LinearVarUnused(x.clone()));
        }
    }
    Ok(TypeReport { prop, usage })
}

/// Checks `t` against an expected type (compared up to α).
pub fn check(ctx: &TypingCtx, t: &Term, expected: &Prop) -> Result<Usage> {
    let report = infer(ctx, t)?;
    if &report.prop != expected {
        return Err(TypeError::AnnotationMismatch {
            expected: expected.clone(),
            found: report.prop,
        });
    }
    Ok(report.usage)
}

/// Type of a closed term, if it has one.
pub fn type_of_closed(t: &Term) -> Result<Prop> {
    infer(&TypingCtx::empty(), t).map(|r| r.prop)
}

/// Fresh names are `hint#n`; this recovers the surface part for messages.
fn display_name(n: &str) -> String {
    n.split('#').next().unwrap_or(n).to_string()
}

type Env = BTreeMap<Name, Prop>;

struct Checker {
    fresh: usize,
    /// Every linear name ever introduced, to tell reuse from unbound.
    linear: HashSet<Name>,
    /// First additive join that failed.
    mismatch: Option<TypeError>,
}

fn mismatch(construct: &'static str, expected: impl Into<String>, found: &Prop) -> TypeError {
    TypeError::TypeMismatch {
        construct,
        expected: expected.into(),
        found: found.clone(),
    }
}

fn without(env: &Env, used: &BTreeSet<Name>) -> Env {
    env.iter()
        .filter(|(x, _)| !used.contains(*x))
        .map(|(x, a)| (x.clone(), a.clone()))
        .collect()
}

impl Checker {
    fn join(&mut self, u1: Usage, u2: Usage, construct: &'static str) -> Usage {
        let (u, err) = u1.join(u2, construct);
        if self.mismatch.is_none() {
            self.mismatch = err;
        }
        u
    }

    fn fresh(&mut self, hint: &str) -> Name {
        self.fresh += 1;
        let base = if hint.is_empty() { "x" } else { hint };
        format!("{}#{}", base, self.fresh)
    }

    fn scoped(&self, a: &Prop, what: &'static str) -> Result<()> {
        if a.is_scoped(0) {
            Ok(())
        } else {
            Err(TypeError::IllScoped(what))
        }
    }

    /// Type checks `body` under fresh linear binders, then discharges them.
    fn synth_under(&mut self, xi: &Env, avail: &Env, binders: &[&Binder], body: &Term) -> Result<(Prop, Usage)> {
        let mut inner = avail.clone();
        let mut names = Vec::with_capacity(binders.len());
        for b in binders {
            self.scoped(&b.ty, "a binder annotation")?;
            let x = self.fresh(b.hint.as_str());
            self.linear.insert(x.clone());
            inner.insert(x.clone(), b.ty.clone());
            names.push(x);
        }
        let args: Vec<Term> = names.iter().map(|x| Term::Var(Var::Free(x.clone()))).collect();
        let (prop, mut usage) = self.synth(xi, &inner, &body.open(&args))?;
        for x in &names {
            if !usage.consumed.remove(x) && !usage.slack {
                return Err(TypeError::LinearVarUnused(display_name(x)));
            }
        }
        Ok((prop, usage))
    }

    fn synth(&mut self, xi: &Env, avail: &Env, t: &Term) -> Result<(Prop, Usage)> {
        match t {
            Term::Var(Var::Free(x)) => {
                if let Some(a) = avail.get(x) {
                    Ok((a.clone(), Usage::exact([x.clone()].into())))
                } else if let Some(a) = xi.get(x) {
                    Ok((a.clone(), Usage::default()))
                } else if self.linear.contains(x) {
                    Err(TypeError::LinearVarReused(display_name(x)))
                } else {
                    Err(TypeError::UnboundVariable(x.clone()))
                }
            }
            Term::Var(Var::Bound(_)) => Err(TypeError::IllScoped("a term variable")),
            Term::Sum(t1, t2) => {
                let (a, u1) = self.synth(xi, avail, t1)?;
                let (b, u2) = self.synth(xi, avail, t2)?;
                if a != b {
                    return Err(mismatch("sum", format!("`{a}` on both sides"), &b));
                }
                Ok((a, self.join(u1, u2, "a sum")))
            }
            Term::Prod(_, t1) => self.synth(xi, avail, t1),
            Term::Star(_) => Ok((Prop::One, Usage::default())),
            Term::ElimOne(t1, t2) => {
                let (a, u1) = self.synth(xi, avail, t1)?;
                if a != Prop::One {
                    return Err(mismatch("δ₁", "`1`", &a));
                }
                let (b, u2) = self.synth(xi, &without(avail, &u1.consumed), t2)?;
                Ok((b, u1.then(u2)))
            }
            Term::Lam(x, body) => {
                let (b, u) = self.synth_under(xi, avail, &[x], body)?;
                Ok((Prop::lolli(x.ty.clone(), b), u))
            }
            Term::App(t1, t2) => {
                let (f, u1) = self.synth(xi, avail, t1)?;
                let Prop::Lolli(a, b) = f else {
                    return Err(mismatch("application", "a linear implication", &f));
                };
                let (a2, u2) = self.synth(xi, &without(avail, &u1.consumed), t2)?;
                if *a != a2 {
                    return Err(mismatch("application argument", format!("`{a}`"), &a2));
                }
                Ok((*b, u1.then(u2)))
            }
            Term::TensorI(t1, t2) => {
                let (a, u1) = self.synth(xi, avail, t1)?;
                let (b, u2) = self.synth(xi, &without(avail, &u1.consumed), t2)?;
                Ok((Prop::tensor(a, b), u1.then(u2)))
            }
            Term::ElimTensor(t1, x, y, body) => {
                let (p, u1) = self.synth(xi, avail, t1)?;
                let expected = Prop::tensor(x.ty.clone(), y.ty.clone());
                if p != expected {
                    return Err(mismatch("δ⊗", format!("`{expected}`"), &p));
                }
                let (c, u2) = self.synth_under(xi, &without(avail, &u1.consumed), &[x, y], body)?;
                Ok((c, u1.then(u2)))
            }
            Term::Unit => Ok((
                Prop::Top,
                Usage {
                    consumed: BTreeSet::new(),
                    slack: true,
                },
            )),
            Term::ElimZero(c, t1) => {
                self.scoped(c, "a δ₀ annotation")?;
                let (z, u) = self.synth(xi, avail, t1)?;
                if z != Prop::Zero {
                    return Err(mismatch("δ₀", "`0`", &z));
                }
                Ok((
                    c.clone(),
                    Usage {
                        consumed: u.consumed,
                        slack: true,
                    },
                ))
            }
            Term::Pair(t1, t2) => {
                let (a, u1) = self.synth(xi, avail, t1)?;
                let (b, u2) = self.synth(xi, avail, t2)?;
                Ok((Prop::with(a, b), self.join(u1, u2, "a pair")))
            }
            Term::ElimWith1(t1, x, body) | Term::ElimWith2(t1, x, body) => {
                let first = matches!(t, Term::ElimWith1(..));
                let construct = if first { "δ&¹" } else { "δ&²" };
                let (p, u1) = self.synth(xi, avail, t1)?;
                let Prop::With(a, b) = &p else {
                    return Err(mismatch(construct, "an additive conjunction", &p));
                };
                let component = if first { a } else { b };
                if **component != x.ty {
                    return Err(mismatch(construct, format!("component `{}`", x.ty), component));
                }
                let (c, u2) = self.synth_under(xi, &without(avail, &u1.consumed), &[x], body)?;
                Ok((c, u1.then(u2)))
            }
            Term::Inl(t1, b) => {
                self.scoped(b, "an inl annotation")?;
                let (a, u) = self.synth(xi, avail, t1)?;
                Ok((Prop::plus(a, b.clone()), u))
            }
            Term::Inr(t1, a) => {
                self.scoped(a, "an inr annotation")?;
                let (b, u) = self.synth(xi, avail, t1)?;
                Ok((Prop::plus(a.clone(), b), u))
            }
            Term::ElimPlus(t1, x, l, y, r) => {
                let (p, u1) = self.synth(xi, avail, t1)?;
                let expected = Prop::plus(x.ty.clone(), y.ty.clone());
                if p != expected {
                    return Err(mismatch("δ⊕", format!("`{expected}`"), &p));
                }
                let rest = without(avail, &u1.consumed);
                let (c1, ul) = self.synth_under(xi, &rest, &[x], l)?;
                let (c2, ur) = self.synth_under(xi, &rest, &[y], r)?;
                if c1 != c2 {
                    return Err(mismatch("δ⊕ branches", format!("`{c1}` in both branches"), &c2));
                }
                let branches = self.join(ul, ur, "δ⊕");
                Ok((c1, u1.then(branches)))
            }
            Term::BangI(t1) => {
                let (a, u) = self.synth(xi, avail, t1)?;
                if !u.consumed.is_empty() {
                    return Err(TypeError::NonEmptyLinearCtxUnderBang(
                        u.consumed.iter().map(|n| display_name(n)).collect(),
                    ));
                }
                Ok((Prop::bang(a), Usage::default()))
            }
            Term::ElimBang(t1, x, body) => {
                let (p, u1) = self.synth(xi, avail, t1)?;
                let expected = Prop::bang(x.ty.clone());
                if p != expected {
                    return Err(mismatch("δ!", format!("`{expected}`"), &p));
                }
                self.scoped(&x.ty, "a binder annotation")?;
                let name = self.fresh(x.hint.as_str());
                let mut xi2 = xi.clone();
                xi2.insert(name.clone(), x.ty.clone());
                let opened = body.open(&[Term::Var(Var::Free(name))]);
                let (c, u2) = self.synth(&xi2, &without(avail, &u1.consumed), &opened)?;
                Ok((c, u1.then(u2)))
            }
            Term::TLam(h, body) => {
                let name = self.fresh(if h.as_str().is_empty() { "X" } else { h.as_str() });
                let in_ctx = xi.values().chain(avail.values()).any(|a| a.free_vars().contains(&name));
                if in_ctx {
                    return Err(TypeError::EscapingTypeVariable(display_name(&name)));
                }
                let (b, u) = self.synth(xi, avail, &body.open_type(&Prop::Var(Var::Free(name.clone()))))?;
                Ok((Prop::Forall(h.clone(), Box::new(b.close(&name))), u))
            }
            Term::TApp(t1, a) => {
                self.scoped(a, "a type application")?;
                let (p, u) = self.synth(xi, avail, t1)?;
                let Prop::Forall(_, b) = &p else {
                    return Err(mismatch("type application", "a universal type", &p));
                };
                Ok((b.instantiate(a), u))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::Semiring;

    fn a() -> Prop {
        Prop::var("A")
    }

    fn v(x: &str) -> Term {
        Term::var(x)
    }

    fn star(n: u64) -> Term {
        Term::Star(Semiring::Rat.from_u64(n))
    }

    fn xy() -> TypingCtx {
        TypingCtx::empty().with_linear("x", a()).with_linear("y", a())
    }

    #[test]
    fn additive_sum_of_tensors() {
        let t = Term::sum(Term::tensor(v("x"), v("y")), Term::tensor(v("y"), v("x")));
        let r = infer(&xy(), &t).unwrap();
        assert_eq!(r.prop, Prop::tensor(a(), a()));
        assert_eq!(r.usage.consumed, ["x".to_string(), "y".to_string()].into());
        assert!(!r.usage.slack);
    }

    #[test]
    fn tensor_of_sums_is_rejected() {
        let t = Term::tensor(Term::sum(v("x"), v("y")), Term::sum(v("y"), v("x")));
        assert_eq!(infer(&xy(), &t), Err(TypeError::LinearVarReused("y".into())));
    }

    #[test]
    fn scalar_star() {
        let r = infer(&TypingCtx::empty(), &star(2)).unwrap();
        assert_eq!(r.prop, Prop::One);
    }

    #[test]
    fn church_zero() {
        let x = Prop::var("X");
        let endo = Prop::lolli(x.clone(), x.clone());
        let zero = Term::tlam(
            "X",
            Term::lam(
                "x",
                x.clone(),
                Term::lam("f", Prop::bang(endo.clone()), Term::elim_bang(v("f"), "g", endo.clone(), v("x"))),
            ),
        );
        let nat = Prop::forall("X", Prop::lolli(x.clone(), Prop::lolli(Prop::bang(endo), x)));
        assert_eq!(type_of_closed(&zero), Ok(nat));
    }

    #[test]
    fn top_absorbs_context() {
        let ctx = TypingCtx::empty().with_linear("x", Prop::One);
        let r = infer(&ctx, &Term::Unit).unwrap();
        assert_eq!(r.prop, Prop::Top);
        assert!(r.usage.slack);
        assert!(r.usage.consumed.is_empty());
    }

    #[test]
    fn check_against_expected() {
        let id = Term::lam("x", Prop::One, v("x"));
        let ctx = TypingCtx::empty();
        assert!(check(&ctx, &id, &Prop::lolli(Prop::One, Prop::One)).is_ok());
        assert!(matches!(
            check(&ctx, &id, &Prop::lolli(Prop::One, Prop::Top)),
            Err(TypeError::AnnotationMismatch { .. })
        ));
    }

    #[test]
    fn error_kinds() {
        let ctx = TypingCtx::empty();
        assert_eq!(infer(&ctx, &v("z")), Err(TypeError::UnboundVariable("z".into())));
        let drop = Term::lam("x", Prop::One, star(1));
        assert_eq!(infer(&ctx, &drop), Err(TypeError::LinearVarUnused("x".into())));
        let unused = TypingCtx::empty().with_linear("x", Prop::One);
        assert_eq!(infer(&unused, &star(1)), Err(TypeError::LinearVarUnused("x".into())));
        let bang = Term::bang(v("x"));
        assert_eq!(
            infer(&unused, &bang),
            Err(TypeError::NonEmptyLinearCtxUnderBang(vec!["x".into()]))
        );
        let bad_app = Term::app(star(1), star(2));
        assert!(matches!(infer(&ctx, &bad_app), Err(TypeError::TypeMismatch { .. })));
        let branch = Term::pair(v("x"), star(1));
        assert!(matches!(
            infer(&unused, &branch),
            Err(TypeError::BranchUsageMismatch { .. })
        ));
        let mixed = Term::sum(star(1), Term::Star(Semiring::Nat.from_u64(1)));
        assert!(matches!(infer(&ctx, &mixed), Err(TypeError::MixedSemiring(_))));
        let dup = TypingCtx::empty().with_linear("x", Prop::One).with_nonlinear("x", Prop::One);
        assert!(matches!(infer(&dup, &v("x")), Err(TypeError::MalformedContext(_))));
    }

    #[test]
    fn nonlinear_hypotheses_are_reusable_and_droppable() {
        let ctx = TypingCtx::empty().with_nonlinear("z", Prop::One);
        let t = Term::tensor(v("z"), v("z"));
        assert_eq!(infer(&ctx, &t).unwrap().prop, Prop::tensor(Prop::One, Prop::One));
        assert_eq!(infer(&ctx, &star(3)).unwrap().prop, Prop::One);
    }

    #[test]
    fn slack_in_one_branch_absorbs_the_other() {
        // ⟨⟩ ⊞ x  with x : ⊤
        let ctx = TypingCtx::empty().with_linear("x", Prop::Top);
        let r = infer(&ctx, &Term::sum(Term::Unit, v("x"))).unwrap();
        assert_eq!(r.usage.consumed, ["x".to_string()].into());
        assert!(!r.usage.slack);
    }

    #[test]
    fn zero_elimination_is_slack() {
        let ctx = TypingCtx::empty().with_linear("z", Prop::Zero).with_linear("y", Prop::One);
        let t = Term::elim_zero(Prop::One, v("z"));
        let r = infer(&ctx, &t).unwrap();
        assert_eq!(r.prop, Prop::One);
        assert!(r.usage.slack);
    }

    #[test]
    fn type_application_substitutes() {
        let x = Prop::var("X");
        let id = Term::tlam("X", Term::lam("x", x.clone(), v("x")));
        let t = Term::tapp(id, Prop::One);
        assert_eq!(type_of_closed(&t), Ok(Prop::lolli(Prop::One, Prop::One)));
    }

    #[test]
    fn weakening_in_xi_keeps_type() {
        let t = Term::sum(Term::tensor(v("x"), v("y")), Term::tensor(v("y"), v("x")));
        let base = infer(&xy(), &t).unwrap().prop;
        let wider = xy().with_nonlinear("w", Prop::bang(Prop::One));
        assert_eq!(infer(&wider, &t).unwrap().prop, base);
    }
}
