//! The rewrite system: nine cut-elimination rules, sixteen rules that push
//! `+` and `a .` through introductions and through `δ⊗`/`δ⊕`, and the three
//! projection rules of ultra-reduction.
//!
//! Positions are paths of child indices (see [`Term::children`]). Redexes are
//! listed leftmost-outermost, i.e. in pre-order, and by [`RuleId`] order at
//! the same position.

mod critical;
mod trace;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::syntax::Term;

pub use critical::{critical_pair_scan, critical_pair_scan_with, CriticalPair, CriticalPairReport, LinearityNote};
pub use trace::{format_position, replay, Position, ReplayError, Trace, TraceStep};

/// Which rule set to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    #[default]
    Standard,
    /// The standard rules plus `t + u → t`, `t + u → u` and `a . t → t`.
    Ultra,
}

macro_rules! rules {
    ($($id:ident => $name:literal,)*) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum RuleId { $($id,)* }

        impl RuleId {
            pub const ALL: &'static [RuleId] = &[$(RuleId::$id,)*];

            pub fn name(self) -> &'static str {
                match self { $(RuleId::$id => $name,)* }
            }
        }
    };
}

rules! {
    BetaOne => "beta.one",
    BetaLolli => "beta.lolli",
    BetaTensor => "beta.tensor",
    BetaWith1 => "beta.with1",
    BetaWith2 => "beta.with2",
    BetaPlusInl => "beta.plus.inl",
    BetaPlusInr => "beta.plus.inr",
    BetaBang => "beta.bang",
    BetaForall => "beta.forall",
    SumStar => "sum.star",
    SumLam => "sum.lam",
    SumTensorE => "sum.tensorE",
    SumUnit => "sum.unit",
    SumPair => "sum.pair",
    SumPlusE => "sum.plusE",
    SumBang => "sum.bang",
    SumTLam => "sum.tlam",
    ProdStar => "prod.star",
    ProdLam => "prod.lam",
    ProdTensorE => "prod.tensorE",
    ProdUnit => "prod.unit",
    ProdPair => "prod.pair",
    ProdPlusE => "prod.plusE",
    ProdBang => "prod.bang",
    ProdTLam => "prod.tlam",
    UltraLeft => "ultra.left",
    UltraRight => "ultra.right",
    UltraDrop => "ultra.drop",
}

impl RuleId {
    /// The 25 rules of the standard system.
    pub fn standard() -> &'static [RuleId] {
        &Self::ALL[..25]
    }

    pub fn is_ultra(self) -> bool {
        matches!(self, RuleId::UltraLeft | RuleId::UltraRight | RuleId::UltraDrop)
    }

    fn in_mode(self, mode: Mode) -> bool {
        mode == Mode::Ultra || !self.is_ultra()
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown rule `{0}`")]
pub struct UnknownRule(pub String);

impl FromStr for RuleId {
    type Err = UnknownRule;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .iter()
            .copied()
            .find(|r| r.name() == s)
            .ok_or_else(|| UnknownRule(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("no normal form within {limit} steps")]
    StepLimitExceeded {
        limit: usize,
        /// The steps taken so far.
        trace: Trace,
        /// The term reached after `limit` steps.
        last: Term,
    },
}

/// Rules whose left-hand side matches `t` at the root, in `RuleId` order.
fn root_rules(t: &Term, mode: Mode) -> Vec<RuleId> {
    use RuleId::*;
    let mut out = Vec::new();
    let mut push = |r: RuleId| {
        if r.in_mode(mode) {
            out.push(r)
        }
    };
    match t {
        Term::ElimOne(a, _) if matches!(**a, Term::Star(_)) => push(BetaOne),
        Term::App(f, _) if matches!(**f, Term::Lam(..)) => push(BetaLolli),
        Term::ElimTensor(m, ..) => match **m {
            Term::TensorI(..) => push(BetaTensor),
            Term::Sum(..) => push(SumTensorE),
            Term::Prod(..) => push(ProdTensorE),
            _ => {}
        },
        Term::ElimWith1(m, ..) if matches!(**m, Term::Pair(..)) => push(BetaWith1),
        Term::ElimWith2(m, ..) if matches!(**m, Term::Pair(..)) => push(BetaWith2),
        Term::ElimPlus(m, ..) => match **m {
            Term::Inl(..) => push(BetaPlusInl),
            Term::Inr(..) => push(BetaPlusInr),
            Term::Sum(..) => push(SumPlusE),
            Term::Prod(..) => push(ProdPlusE),
            _ => {}
        },
        Term::ElimBang(m, ..) if matches!(**m, Term::BangI(_)) => push(BetaBang),
        Term::TApp(m, _) if matches!(**m, Term::TLam(..)) => push(BetaForall),
        Term::Sum(l, r) => {
            match (&**l, &**r) {
                (Term::Star(a), Term::Star(b)) if a.semiring() == b.semiring() => push(SumStar),
                (Term::Lam(x, _), Term::Lam(y, _)) if x.ty == y.ty => push(SumLam),
                (Term::Unit, Term::Unit) => push(SumUnit),
                (Term::Pair(..), Term::Pair(..)) => push(SumPair),
                (Term::BangI(_), Term::BangI(_)) => push(SumBang),
                (Term::TLam(..), Term::TLam(..)) => push(SumTLam),
                _ => {}
            }
            push(UltraLeft);
            push(UltraRight);
        }
        Term::Prod(a, m) => {
            match &**m {
                Term::Star(b) if a.semiring() == b.semiring() => push(ProdStar),
                Term::Lam(..) => push(ProdLam),
                Term::Unit => push(ProdUnit),
                Term::Pair(..) => push(ProdPair),
                Term::BangI(_) => push(ProdBang),
                Term::TLam(..) => push(ProdTLam),
                _ => {}
            }
            push(UltraDrop);
        }
        _ => {}
    }
    out
}

/// Applies `rule` at the root of `t`, if it matches.
pub fn contract(t: &Term, rule: RuleId) -> Option<Term> {
    use RuleId::*;
    let b = Box::new;
    Some(match (rule, t) {
        (BetaOne, Term::ElimOne(m, u)) => match &**m {
            Term::Star(a) => Term::Prod(a.clone(), u.clone()),
            _ => return None,
        },
        (BetaLolli, Term::App(f, u)) => match &**f {
            Term::Lam(_, body) => body.open(&[(**u).clone()]),
            _ => return None,
        },
        (BetaTensor, Term::ElimTensor(m, _, _, w)) => match &**m {
            Term::TensorI(u, v) => w.open(&[(**u).clone(), (**v).clone()]),
            _ => return None,
        },
        (BetaWith1 | BetaWith2, Term::ElimWith1(m, _, v) | Term::ElimWith2(m, _, v)) => {
            let first = matches!(t, Term::ElimWith1(..));
            if first != (rule == BetaWith1) {
                return None;
            }
            match &**m {
                Term::Pair(t1, t2) => v.open(&[if first { (**t1).clone() } else { (**t2).clone() }]),
                _ => return None,
            }
        }
        (BetaPlusInl, Term::ElimPlus(m, _, v, _, _)) => match &**m {
            Term::Inl(u, _) => v.open(&[(**u).clone()]),
            _ => return None,
        },
        (BetaPlusInr, Term::ElimPlus(m, _, _, _, w)) => match &**m {
            Term::Inr(u, _) => w.open(&[(**u).clone()]),
            _ => return None,
        },
        (BetaBang, Term::ElimBang(m, _, u)) => match &**m {
            Term::BangI(s) => u.open(&[(**s).clone()]),
            _ => return None,
        },
        (BetaForall, Term::TApp(m, a)) => match &**m {
            Term::TLam(_, body) => body.open_type(a),
            _ => return None,
        },
        (SumTensorE, Term::ElimTensor(m, x, y, v)) => match &**m {
            Term::Sum(l, r) => Term::Sum(
                b(Term::ElimTensor(l.clone(), x.clone(), y.clone(), v.clone())),
                b(Term::ElimTensor(r.clone(), x.clone(), y.clone(), v.clone())),
            ),
            _ => return None,
        },
        (ProdTensorE, Term::ElimTensor(m, x, y, v)) => match &**m {
            Term::Prod(a, s) => Term::Prod(a.clone(), b(Term::ElimTensor(s.clone(), x.clone(), y.clone(), v.clone()))),
            _ => return None,
        },
        (SumPlusE, Term::ElimPlus(m, x, v, y, w)) => match &**m {
            Term::Sum(l, r) => Term::Sum(
                b(Term::ElimPlus(l.clone(), x.clone(), v.clone(), y.clone(), w.clone())),
                b(Term::ElimPlus(r.clone(), x.clone(), v.clone(), y.clone(), w.clone())),
            ),
            _ => return None,
        },
        (ProdPlusE, Term::ElimPlus(m, x, v, y, w)) => match &**m {
            Term::Prod(a, s) => Term::Prod(
                a.clone(),
                b(Term::ElimPlus(s.clone(), x.clone(), v.clone(), y.clone(), w.clone())),
            ),
            _ => return None,
        },
        (UltraLeft, Term::Sum(l, _)) => (**l).clone(),
        (UltraRight, Term::Sum(_, r)) => (**r).clone(),
        (UltraDrop, Term::Prod(_, s)) => (**s).clone(),
        (_, Term::Sum(l, r)) => match (rule, &**l, &**r) {
            (SumStar, Term::Star(a), Term::Star(c)) => Term::Star(a.try_add(c).ok()?),
            (SumLam, Term::Lam(x, t1), Term::Lam(y, t2)) if x.ty == y.ty => {
                Term::Lam(x.clone(), b(Term::Sum(t1.clone(), t2.clone())))
            }
            (SumUnit, Term::Unit, Term::Unit) => Term::Unit,
            (SumPair, Term::Pair(t1, u1), Term::Pair(t2, u2)) => {
                Term::Pair(b(Term::Sum(t1.clone(), t2.clone())), b(Term::Sum(u1.clone(), u2.clone())))
            }
            (SumBang, Term::BangI(t1), Term::BangI(t2)) => Term::BangI(b(Term::Sum(t1.clone(), t2.clone()))),
            (SumTLam, Term::TLam(h, t1), Term::TLam(_, t2)) => {
                Term::TLam(h.clone(), b(Term::Sum(t1.clone(), t2.clone())))
            }
            _ => return None,
        },
        (_, Term::Prod(a, s)) => {
            let scaled = |u: &Box<Term>| b(Term::Prod(a.clone(), u.clone()));
            match (rule, &**s) {
                (ProdStar, Term::Star(c)) => Term::Star(a.try_mul(c).ok()?),
                (ProdLam, Term::Lam(x, body)) => Term::Lam(x.clone(), scaled(body)),
                (ProdUnit, Term::Unit) => Term::Unit,
                (ProdPair, Term::Pair(t1, t2)) => Term::Pair(scaled(t1), scaled(t2)),
                (ProdBang, Term::BangI(u)) => Term::BangI(scaled(u)),
                (ProdTLam, Term::TLam(h, body)) => Term::TLam(h.clone(), scaled(body)),
                _ => return None,
            }
        }
        _ => return None,
    })
}

fn collect_redexes(t: &Term, mode: Mode, path: &mut Position, out: &mut Vec<(Position, RuleId)>) {
    for r in root_rules(t, mode) {
        out.push((path.clone(), r));
    }
    for (i, c) in t.children().into_iter().enumerate() {
        path.push(i);
        collect_redexes(c, mode, path, out);
        path.pop();
    }
}

/// Every redex of `t`, leftmost-outermost.
pub fn redexes(t: &Term, mode: Mode) -> Vec<(Position, RuleId)> {
    let mut out = Vec::new();
    collect_redexes(t, mode, &mut Vec::new(), &mut out);
    out
}

fn first_redex(t: &Term, path: &mut Position) -> Option<RuleId> {
    if let Some(&r) = root_rules(t, Mode::Standard).first() {
        return Some(r);
    }
    for (i, c) in t.children().into_iter().enumerate() {
        path.push(i);
        if let Some(r) = first_redex(c, path) {
            return Some(r);
        }
        path.pop();
    }
    None
}

/// Rewrites `t` with `rule` at `position`.
pub fn rewrite_at(t: &Term, position: &[usize], rule: RuleId) -> Option<Term> {
    let mut out = t.clone();
    let slot = out.subterm_mut(position)?;
    *slot = contract(slot, rule)?;
    Some(out)
}

/// A one-step reduct together with the rule and position that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduct {
    pub rule: RuleId,
    pub position: Position,
    pub term: Term,
}

/// All one-step reducts of `t`, leftmost-outermost then by rule.
pub fn reducts(t: &Term, mode: Mode) -> Vec<Reduct> {
    redexes(t, mode)
        .into_iter()
        .map(|(position, rule)| {
            let term = rewrite_at(t, &position, rule).expect("listed redex must contract");
            Reduct { rule, position, term }
        })
        .collect()
}

/// One leftmost-outermost step, with the position it was taken at.
pub fn step_at(t: &Term) -> Option<Reduct> {
    let mut position = Vec::new();
    let rule = first_redex(t, &mut position)?;
    let term = rewrite_at(t, &position, rule).expect("found redex must contract");
    Some(Reduct { rule, position, term })
}

/// One leftmost-outermost step.
pub fn step(t: &Term) -> Option<(RuleId, Term)> {
    step_at(t).map(|r| (r.rule, r.term))
}

pub fn is_normal(t: &Term, mode: Mode) -> bool {
    redexes(t, mode).is_empty()
}

/// A normal form and the reduction that reached it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normal {
    pub term: Term,
    pub trace: Trace,
}

fn drive(
    t: &Term,
    max_steps: usize,
    mut next: impl FnMut(&Term) -> Option<Reduct>,
) -> Result<Normal, ReduceError> {
    let mut trace = Trace::default();
    let mut cur = t.clone();
    loop {
        let Some(r) = next(&cur) else {
            return Ok(Normal { term: cur, trace });
        };
        if trace.len() == max_steps {
            return Err(ReduceError::StepLimitExceeded {
                limit: max_steps,
                trace,
                last: cur,
            });
        }
        trace.push(r.rule, r.position, &r.term);
        cur = r.term;
    }
}

/// Leftmost-outermost normalization.
pub fn normalize(t: &Term, max_steps: usize) -> Result<Normal, ReduceError> {
    drive(t, max_steps, step_at)
}

/// Normalization that picks each step uniformly among all redexes, with a
/// generator seeded by `seed`.
pub fn normalize_random(t: &Term, seed: u64, max_steps: usize, mode: Mode) -> Result<Normal, ReduceError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    drive(t, max_steps, |cur| {
        let all = redexes(cur, mode);
        if all.is_empty() {
            return None;
        }
        let (position, rule) = all[rng.gen_range(0..all.len())].clone();
        let term = rewrite_at(cur, &position, rule).expect("listed redex must contract");
        Some(Reduct { rule, position, term })
    })
}

/// `t ≡ u`, decided by comparing normal forms up to α. Only meaningful on
/// well-typed terms.
pub fn equiv(t: &Term, u: &Term, max_steps: usize) -> Result<bool, ReduceError> {
    Ok(normalize(t, max_steps)?.term == normalize(u, max_steps)?.term)
}
