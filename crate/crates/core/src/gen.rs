//! Seeded, type-directed generation of well-typed terms.
//!
//! Terms are built goal first: given linear hypotheses, non-linear
//! hypotheses and a goal proposition, the generator picks a rule whose
//! conclusion matches (an introduction, an elimination of a hypothesis, a cut
//! that creates a redex, a sum or a scalar product) and recurses on the
//! premises. Branches that get stuck, and all goals once the size budget is
//! spent, are closed by a small bounded proof search. Every result is
//! well-typed by construction; the tests re-check that anyway.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::encode::VShape;
use crate::semiring::{Scalar, Semiring};
use crate::syntax::{Name, Prop, Term};
use crate::typing::TypingCtx;

/// Knobs for the generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenConfig {
    pub semiring: Semiring,
    /// Upper bound on [`Term::size`] of generated terms.
    pub max_size: usize,
    /// Allow `!A`, `!t` and `db`.
    pub bang: bool,
    /// Allow `forall`, `/\` and type application.
    pub forall: bool,
}

impl GenConfig {
    pub fn new(semiring: Semiring) -> Self {
        GenConfig {
            semiring,
            max_size: 60,
            bang: true,
            forall: true,
        }
    }

    /// Restricts generation to the fragment without `!`.
    pub fn linear_fragment(mut self) -> Self {
        self.bang = false;
        self
    }

    pub fn max_size(mut self, n: usize) -> Self {
        self.max_size = n;
        self
    }
}

/// A term with the context and type it was generated for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    pub ctx: TypingCtx,
    pub term: Term,
    pub ty: Prop,
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_rat(rng: &mut impl Rng) -> BigRational {
    let num = rng.gen_range(-3i64..=6);
    let den = *[1i64, 1, 1, 2, 3].choose(rng).unwrap();
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// A small random scalar; rationals and Gaussian rationals may be negative
/// or fractional.
pub fn random_scalar(rng: &mut impl Rng, semiring: Semiring) -> Scalar {
    match semiring {
        Semiring::Unit => Scalar::Unit,
        Semiring::Nat => semiring.from_u64(rng.gen_range(0..6)),
        Semiring::Rat => Scalar::Rat(small_rat(rng)),
        Semiring::Gauss => {
            let im = if rng.gen_bool(0.6) {
                small_rat(rng)
            } else {
                BigRational::from_integer(0.into())
            };
            Scalar::Gauss(Complex::new(small_rat(rng), im))
        }
    }
}

type Hyps = Vec<(Name, Prop)>;

const SEARCH_DEPTH: usize = 7;
const SEARCH_BUDGET: usize = 500;
const WORK: usize = 60_000;

struct Gen<'c> {
    rng: ChaCha8Rng,
    cfg: &'c GenConfig,
    fresh: usize,
    budget: usize,
    closed_provable: HashMap<Prop, bool>,
    /// Names fresh binders must avoid.
    taken: HashSet<Name>,
    /// Steps left for the current attempt; once spent, every branch fails.
    work: usize,
}

fn without(hyps: &Hyps, i: usize) -> Hyps {
    let mut h = hyps.clone();
    h.remove(i);
    h
}

fn with(hyps: &Hyps, name: &str, ty: Prop) -> Hyps {
    let mut h = hyps.clone();
    h.push((name.to_string(), ty));
    h
}

/// All ways to split `hyps` in two, as bitmasks over positions.
fn split(hyps: &Hyps, mask: u32) -> (Hyps, Hyps) {
    let mut l = Vec::new();
    let mut r = Vec::new();
    for (i, h) in hyps.iter().enumerate() {
        if mask & (1 << i) != 0 {
            l.push(h.clone());
        } else {
            r.push(h.clone());
        }
    }
    (l, r)
}

impl<'c> Gen<'c> {
    fn new(cfg: &'c GenConfig, seed: u64) -> Self {
        Gen {
            rng: rng(seed),
            cfg,
            fresh: 0,
            budget: SEARCH_BUDGET,
            closed_provable: HashMap::new(),
            taken: HashSet::new(),
            work: WORK,
        }
    }

    fn name(&mut self, stem: &str) -> Name {
        loop {
            self.fresh += 1;
            let n = format!("{stem}{}", self.fresh);
            if !self.taken.contains(&n) {
                return n;
            }
        }
    }

    fn avoid(&mut self, hyps: &Hyps) {
        self.taken.extend(hyps.iter().map(|(x, _)| x.clone()));
    }

    fn scalar(&mut self) -> Scalar {
        random_scalar(&mut self.rng, self.cfg.semiring)
    }

    /// A random proposition over the type variables in `scope`.
    fn prop(&mut self, depth: usize, scope: &mut Vec<Name>) -> Prop {
        let leaf = depth == 0 || self.rng.gen_bool(0.3);
        if leaf {
            let k = self.rng.gen_range(0..20);
            return match k {
                0..=1 => Prop::Top,
                2 => Prop::Zero,
                3..=7 if !scope.is_empty() => Prop::var(scope.choose(&mut self.rng).unwrap().clone()),
                _ => Prop::One,
            };
        }
        let k = self.rng.gen_range(0..12);
        let sub = depth - 1;
        match k {
            0..=2 => Prop::lolli(self.prop(sub, scope), self.prop(sub, scope)),
            3..=4 => Prop::tensor(self.prop(sub, scope), self.prop(sub, scope)),
            5..=6 => Prop::with(self.prop(sub, scope), self.prop(sub, scope)),
            7..=8 => Prop::plus(self.prop(sub, scope), self.prop(sub, scope)),
            9 if self.cfg.bang => Prop::bang(self.prop(sub, scope)),
            10 if self.cfg.forall => {
                let x = self.name("X");
                scope.push(x.clone());
                let body = self.prop(sub, scope);
                scope.pop();
                Prop::forall(&x, body)
            }
            _ => Prop::with(self.prop(sub, scope), Prop::One),
        }
    }

    fn provable_closed(&mut self, a: &Prop) -> bool {
        if let Some(&b) = self.closed_provable.get(a) {
            return b;
        }
        let saved = (self.budget, self.work);
        (self.budget, self.work) = (SEARCH_BUDGET, SEARCH_BUDGET);
        let ok = self.search(&Vec::new(), &Vec::new(), a, SEARCH_DEPTH).is_some();
        (self.budget, self.work) = saved;
        self.closed_provable.insert(a.clone(), ok);
        ok
    }

    /// A closed proposition with a closed proof.
    fn inhabited(&mut self, depth: usize) -> Prop {
        loop {
            let a = self.prop(depth, &mut Vec::new());
            if self.provable_closed(&a) {
                return a;
            }
        }
    }

    /// Bounded proof search. Invertible rules are applied eagerly, the
    /// others are tried in turn.
    fn search(&mut self, lin: &Hyps, xi: &Hyps, goal: &Prop, depth: usize) -> Option<Term> {
        if depth == 0 || self.budget == 0 || self.work == 0 {
            return None;
        }
        self.budget -= 1;
        self.work -= 1;
        let d = depth - 1;
        if lin.len() == 1 && lin[0].1 == *goal {
            return Some(Term::var(lin[0].0.as_str()));
        }
        if lin.is_empty() {
            if let Some((y, _)) = xi.iter().find(|(_, a)| a == goal) {
                return Some(Term::var(y.as_str()));
            }
        }
        if *goal == Prop::Top {
            return Some(Term::Unit);
        }
        for (i, (x, a)) in lin.iter().enumerate() {
            let rest = without(lin, i);
            let xv = Term::var(x.as_str());
            match a {
                Prop::One => return Some(Term::elim_one(xv, self.search(&rest, xi, goal, d)?)),
                Prop::Zero => return Some(Term::elim_zero(goal.clone(), xv)),
                Prop::Tensor(b, c) => {
                    let (y, z) = (self.name("x"), self.name("x"));
                    let hs = with(&with(&rest, &y, (**b).clone()), &z, (**c).clone());
                    let body = self.search(&hs, xi, goal, d)?;
                    return Some(Term::elim_tensor(xv, &y, (**b).clone(), &z, (**c).clone(), body));
                }
                Prop::Plus(b, c) => {
                    let (y, z) = (self.name("x"), self.name("x"));
                    let l = self.search(&with(&rest, &y, (**b).clone()), xi, goal, d)?;
                    let r = self.search(&with(&rest, &z, (**c).clone()), xi, goal, d)?;
                    return Some(Term::elim_plus(xv, &y, (**b).clone(), l, &z, (**c).clone(), r));
                }
                Prop::Bang(b) => {
                    let y = self.name("x");
                    let body = self.search(&rest, &with(xi, &y, (**b).clone()), goal, d)?;
                    return Some(Term::elim_bang(xv, &y, (**b).clone(), body));
                }
                _ => {}
            }
        }
        match goal {
            Prop::Lolli(a, b) => {
                let x = self.name("x");
                let body = self.search(&with(lin, &x, (**a).clone()), xi, b, d)?;
                return Some(Term::lam(&x, (**a).clone(), body));
            }
            Prop::With(a, b) => {
                let l = self.search(lin, xi, a, d)?;
                let r = self.search(lin, xi, b, d)?;
                return Some(Term::pair(l, r));
            }
            Prop::Forall(h, body) => {
                let x = self.name(h.as_str().trim_end_matches(|c: char| c.is_ascii_digit()));
                let inner = self.search(lin, xi, &body.instantiate(&Prop::var(x.as_str())), d)?;
                return Some(Term::tlam(&x, inner));
            }
            Prop::One if lin.is_empty() => return Some(Term::Star(self.scalar())),
            _ => {}
        }
        if let Prop::Bang(a) = goal {
            if lin.is_empty() {
                if let Some(t) = self.search(lin, xi, a, d) {
                    return Some(Term::bang(t));
                }
            }
        }
        match goal {
            Prop::Tensor(a, b) if lin.len() <= 6 => {
                for mask in 0..(1u32 << lin.len()) {
                    let (l1, l2) = split(lin, mask);
                    if let Some(l) = self.search(&l1, xi, a, d) {
                        if let Some(r) = self.search(&l2, xi, b, d) {
                            return Some(Term::tensor(l, r));
                        }
                    }
                }
            }
            Prop::Plus(a, b) => {
                if let Some(t) = self.search(lin, xi, a, d) {
                    return Some(Term::inl(t, (**b).clone()));
                }
                if let Some(t) = self.search(lin, xi, b, d) {
                    return Some(Term::inr(t, (**a).clone()));
                }
            }
            _ => {}
        }
        let heads: Vec<(Option<usize>, Name, Prop)> = lin
            .iter()
            .enumerate()
            .map(|(i, (x, a))| (Some(i), x.clone(), a.clone()))
            .chain(xi.iter().map(|(x, a)| (None, x.clone(), a.clone())))
            .collect();
        for (i, x, a) in heads {
            let rest = match i {
                Some(i) => without(lin, i),
                None => lin.clone(),
            };
            let xv = Term::var(x.as_str());
            match &a {
                Prop::With(b, c) => {
                    for first in [true, false] {
                        let y = self.name("x");
                        let part = if first { b } else { c };
                        if let Some(body) = self.search(&with(&rest, &y, (**part).clone()), xi, goal, d) {
                            return Some(if first {
                                Term::elim_with1(xv, &y, (**part).clone(), body)
                            } else {
                                Term::elim_with2(xv, &y, (**part).clone(), body)
                            });
                        }
                    }
                }
                Prop::Lolli(b, c) if rest.len() <= 5 => {
                    for mask in 0..(1u32 << rest.len()) {
                        let (l1, l2) = split(&rest, mask);
                        if l2.is_empty() && **c == *goal {
                            if let Some(arg) = self.search(&l1, xi, b, d) {
                                return Some(Term::app(xv, arg));
                            }
                            continue;
                        }
                        let z = self.name("x");
                        let Some(k) = self.search(&with(&l2, &z, (**c).clone()), xi, goal, d) else {
                            continue;
                        };
                        if let Some(arg) = self.search(&l1, xi, b, d) {
                            let applied = Term::app(xv.clone(), arg);
                            return Some(Term::app(Term::lam(&z, (**c).clone(), k), applied));
                        }
                    }
                }
                Prop::Forall(_, body) => {
                    let mut candidates = vec![goal.clone(), Prop::One];
                    candidates.dedup();
                    for c in candidates {
                        let inst = body.instantiate(&c);
                        let z = self.name("x");
                        if inst == *goal && rest.is_empty() {
                            return Some(Term::tapp(xv, c));
                        }
                        if let Some(k) = self.search(&with(&rest, &z, inst.clone()), xi, goal, d) {
                            return Some(Term::app(Term::lam(&z, inst, k), Term::tapp(xv, c)));
                        }
                    }
                }
                _ => {}
            }
        }
        None
    }

    fn finish(&mut self, lin: &Hyps, xi: &Hyps, goal: &Prop) -> Option<Term> {
        self.budget = SEARCH_BUDGET;
        self.search(lin, xi, goal, SEARCH_DEPTH)
    }

    /// A random split of `lin`, biased towards keeping hypotheses on the right.
    fn random_split(&mut self, lin: &Hyps) -> (Hyps, Hyps) {
        let mut l = Vec::new();
        let mut r = Vec::new();
        for h in lin {
            if self.rng.gen_bool(0.35) {
                l.push(h.clone());
            } else {
                r.push(h.clone());
            }
        }
        (l, r)
    }

    fn gen(&mut self, lin: &Hyps, xi: &Hyps, goal: &Prop, fuel: usize) -> Option<Term> {
        if self.work == 0 {
            return None;
        }
        self.work -= 1;
        if fuel <= 1 {
            return self.finish(lin, xi, goal);
        }
        for _ in 0..2 {
            if let Some(t) = self.step(lin, xi, goal, fuel) {
                return Some(t);
            }
        }
        self.finish(lin, xi, goal)
    }

    fn step(&mut self, lin: &Hyps, xi: &Hyps, goal: &Prop, fuel: usize) -> Option<Term> {
        let f = fuel - 1;
        let half = f / 2;
        // `a.*` and `<>` end a branch, so they are rarely picked early
        let leaf_goal = matches!(goal, Prop::One | Prop::Top);
        let intro_end = if leaf_goal && fuel > 4 { 22 } else { 49 };
        match self.rng.gen_range(0..100) {
            0..=9 => {
                let l = self.gen(lin, xi, goal, half)?;
                let r = self.gen(lin, xi, goal, f - half)?;
                Some(Term::sum(l, r))
            }
            10..=16 => {
                let a = self.scalar();
                Some(Term::prod(a, self.gen(lin, xi, goal, f)?))
            }
            k if (17..=intro_end).contains(&k) => self.intro(lin, xi, goal, f),
            k if k <= 69 => self.left(lin, xi, goal, f),
            _ => self.cut(lin, xi, goal, f),
        }
    }

    fn intro(&mut self, lin: &Hyps, xi: &Hyps, goal: &Prop, f: usize) -> Option<Term> {
        let half = f / 2;
        Some(match goal {
            Prop::One if lin.is_empty() => Term::Star(self.scalar()),
            Prop::Lolli(a, b) => {
                let x = self.name("x");
                let body = self.gen(&with(lin, &x, (**a).clone()), xi, b, f)?;
                Term::lam(&x, (**a).clone(), body)
            }
            Prop::Tensor(a, b) => {
                let (l1, l2) = self.random_split(lin);
                let l = self.gen(&l1, xi, a, half)?;
                Term::tensor(l, self.gen(&l2, xi, b, f - half)?)
            }
            Prop::Top => Term::Unit,
            Prop::With(a, b) => {
                let l = self.gen(lin, xi, a, half)?;
                Term::pair(l, self.gen(lin, xi, b, f - half)?)
            }
            Prop::Plus(a, b) => {
                if self.rng.gen_bool(0.5) {
                    Term::inl(self.gen(lin, xi, a, f)?, (**b).clone())
                } else {
                    Term::inr(self.gen(lin, xi, b, f)?, (**a).clone())
                }
            }
            Prop::Bang(a) if lin.is_empty() => Term::bang(self.gen(lin, xi, a, f)?),
            Prop::Forall(h, body) => {
                let x = self.name(h.as_str().trim_end_matches(|c: char| c.is_ascii_digit()));
                let inner = self.gen(lin, xi, &body.instantiate(&Prop::var(x.as_str())), f)?;
                Term::tlam(&x, inner)
            }
            _ => return None,
        })
    }

    fn left(&mut self, lin: &Hyps, xi: &Hyps, goal: &Prop, f: usize) -> Option<Term> {
        let total = lin.len() + xi.len();
        if total == 0 {
            return None;
        }
        let k = self.rng.gen_range(0..total);
        let (x, a, rest) = if k < lin.len() {
            (lin[k].0.clone(), lin[k].1.clone(), without(lin, k))
        } else {
            let (x, a) = xi[k - lin.len()].clone();
            (x, a, lin.clone())
        };
        let xv = Term::var(x.as_str());
        let half = f / 2;
        Some(match a {
            Prop::One => Term::elim_one(xv, self.gen(&rest, xi, goal, f)?),
            Prop::Zero => Term::elim_zero(goal.clone(), xv),
            Prop::Tensor(b, c) => {
                let (y, z) = (self.name("x"), self.name("x"));
                let hs = with(&with(&rest, &y, (*b).clone()), &z, (*c).clone());
                Term::elim_tensor(xv, &y, *b, &z, *c, self.gen(&hs, xi, goal, f)?)
            }
            Prop::With(b, c) => {
                let y = self.name("x");
                if self.rng.gen_bool(0.5) {
                    Term::elim_with1(xv, &y, (*b).clone(), self.gen(&with(&rest, &y, *b), xi, goal, f)?)
                } else {
                    Term::elim_with2(xv, &y, (*c).clone(), self.gen(&with(&rest, &y, *c), xi, goal, f)?)
                }
            }
            Prop::Plus(b, c) => {
                let (y, z) = (self.name("x"), self.name("x"));
                let l = self.gen(&with(&rest, &y, (*b).clone()), xi, goal, half)?;
                let r = self.gen(&with(&rest, &z, (*c).clone()), xi, goal, f - half)?;
                Term::elim_plus(xv, &y, *b, l, &z, *c, r)
            }
            Prop::Bang(b) => {
                let y = self.name("x");
                let body = self.gen(&rest, &with(xi, &y, (*b).clone()), goal, f)?;
                Term::elim_bang(xv, &y, *b, body)
            }
            Prop::Lolli(b, c) => {
                let (l1, l2) = self.random_split(&rest);
                let arg = self.gen(&l1, xi, &b, half)?;
                if l2.is_empty() && *c == *goal {
                    Term::app(xv, arg)
                } else {
                    let z = self.name("x");
                    let k = self.gen(&with(&l2, &z, (*c).clone()), xi, goal, f - half)?;
                    Term::app(Term::lam(&z, *c, k), Term::app(xv, arg))
                }
            }
            Prop::Forall(_, body) => {
                let c = if self.rng.gen_bool(0.5) {
                    goal.clone()
                } else {
                    self.inhabited(1)
                };
                let inst = body.instantiate(&c);
                if inst == *goal && rest.is_empty() {
                    Term::tapp(xv, c)
                } else {
                    let z = self.name("x");
                    let k = self.gen(&with(&rest, &z, inst.clone()), xi, goal, f)?;
                    Term::app(Term::lam(&z, inst, k), Term::tapp(xv, c))
                }
            }
            Prop::Top | Prop::Var(_) => return None,
        })
    }

    /// An elimination whose major premise is generated, usually producing a
    /// redex.
    fn cut(&mut self, lin: &Hyps, xi: &Hyps, goal: &Prop, f: usize) -> Option<Term> {
        let (l1, l2) = self.random_split(lin);
        let half = f / 2;
        let b = self.inhabited(2);
        Some(match self.rng.gen_range(0..7) {
            0 => {
                let m = self.gen(&l1, xi, &Prop::One, half)?;
                Term::elim_one(m, self.gen(&l2, xi, goal, f - half)?)
            }
            1 => {
                let m = self.gen(&l1, xi, &Prop::lolli(b.clone(), goal.clone()), half)?;
                Term::app(m, self.gen(&l2, xi, &b, f - half)?)
            }
            2 => {
                let c = self.inhabited(1);
                let m = self.gen(&l1, xi, &Prop::tensor(b.clone(), c.clone()), half)?;
                let (y, z) = (self.name("x"), self.name("x"));
                let hs = with(&with(&l2, &y, b.clone()), &z, c.clone());
                Term::elim_tensor(m, &y, b, &z, c, self.gen(&hs, xi, goal, f - half)?)
            }
            3 => {
                let c = self.inhabited(1);
                let m = self.gen(&l1, xi, &Prop::with(b.clone(), c.clone()), half)?;
                let y = self.name("x");
                if self.rng.gen_bool(0.5) {
                    let body = self.gen(&with(&l2, &y, b.clone()), xi, goal, f - half)?;
                    Term::elim_with1(m, &y, b, body)
                } else {
                    let body = self.gen(&with(&l2, &y, c.clone()), xi, goal, f - half)?;
                    Term::elim_with2(m, &y, c, body)
                }
            }
            4 => {
                let c = self.inhabited(1);
                let m = self.gen(&l1, xi, &Prop::plus(b.clone(), c.clone()), half)?;
                let (y, z) = (self.name("x"), self.name("x"));
                let q = (f - half) / 2;
                let l = self.gen(&with(&l2, &y, b.clone()), xi, goal, q)?;
                let r = self.gen(&with(&l2, &z, c.clone()), xi, goal, q)?;
                Term::elim_plus(m, &y, b, l, &z, c, r)
            }
            5 if self.cfg.bang => {
                let m = self.gen(&l1, xi, &Prop::bang(b.clone()), half)?;
                let y = self.name("x");
                let body = self.gen(&l2, &with(xi, &y, b.clone()), goal, f - half)?;
                Term::elim_bang(m, &y, b, body)
            }
            _ if self.cfg.forall => {
                // a vacuous quantifier, or `forall X. X -o X` at `C -o C`
                let x = self.name("X");
                let (poly, arg) = match goal {
                    Prop::Lolli(c, d) if c == d && self.rng.gen_bool(0.7) => {
                        let xv = Prop::var(x.as_str());
                        (Prop::forall(&x, Prop::lolli(xv.clone(), xv)), (**c).clone())
                    }
                    _ => (Prop::forall(&x, goal.clone()), b),
                };
                Term::tapp(self.gen(lin, xi, &poly, f)?, arg)
            }
            _ => return None,
        })
    }
}

fn hyps_to_ctx(lin: &Hyps, xi: &Hyps) -> TypingCtx {
    let mut ctx = TypingCtx::linear(lin.iter().cloned());
    for (x, a) in xi {
        ctx = ctx.with_nonlinear(x.as_str(), a.clone());
    }
    ctx
}

const ATTEMPTS: u64 = 200;

fn fuel(cfg: &GenConfig, rng: &mut ChaCha8Rng) -> usize {
    rng.gen_range(cfg.max_size / 5..=cfg.max_size * 2 / 3).max(2)
}

/// A closed, provable proposition.
pub fn random_type(cfg: &GenConfig, seed: u64) -> Prop {
    let mut g = Gen::new(cfg, seed);
    let depth = g.rng.gen_range(1..=3);
    g.inhabited(depth)
}

/// A term of `goal` in `ctx`, if the generator finds one within
/// [`GenConfig::max_size`].
pub fn term_of_type(cfg: &GenConfig, seed: u64, ctx: &TypingCtx, goal: &Prop) -> Option<Term> {
    let mut g = Gen::new(cfg, seed);
    g.avoid(&ctx.gamma);
    g.avoid(&ctx.xi);
    for _ in 0..ATTEMPTS / 10 {
        let f = fuel(cfg, &mut g.rng);
        g.work = WORK;
        if let Some(t) = g.gen(&ctx.gamma, &ctx.xi, goal, f) {
            if t.size() <= cfg.max_size {
                return Some(t);
            }
        }
    }
    None
}

/// A closed term of a random provable type.
pub fn closed_term(cfg: &GenConfig, seed: u64) -> Sample {
    let mut g = Gen::new(cfg, seed);
    for _ in 0..ATTEMPTS {
        let depth = g.rng.gen_range(1..=3);
        let ty = g.inhabited(depth);
        let f = fuel(cfg, &mut g.rng);
        g.work = WORK;
        if let Some(term) = g.gen(&Vec::new(), &Vec::new(), &ty, f) {
            if term.size() <= cfg.max_size {
                return Sample {
                    ctx: TypingCtx::empty(),
                    term,
                    ty,
                };
            }
        }
    }
    panic!("no closed term found for seed {seed}")
}

/// A term over a random context of at most `max_linear` linear and two
/// non-linear hypotheses, whose types may mention the atoms `A` and `B`.
pub fn open_term(cfg: &GenConfig, seed: u64, max_linear: usize) -> Sample {
    let mut g = Gen::new(cfg, seed);
    for _ in 0..ATTEMPTS {
        let atoms = vec!["A".to_string(), "B".to_string()];
        let n = g.rng.gen_range(0..=max_linear);
        let mut lin = Vec::new();
        for i in 0..n {
            let depth = g.rng.gen_range(0..=2);
            let ty = g.prop(depth, &mut atoms.clone());
            lin.push((format!("x{i}"), ty));
        }
        let mut xi = Vec::new();
        if cfg.bang {
            for i in 0..g.rng.gen_range(0..=2) {
                let depth = g.rng.gen_range(0..=1);
                xi.push((format!("z{i}"), g.prop(depth, &mut atoms.clone())));
            }
        }
        let everything = lin.iter().map(|(_, a)| a.clone()).reduce(Prop::tensor);
        let mut goal = match g.rng.gen_range(0..4) {
            0 if everything.is_some() => everything.clone().unwrap(),
            1 => Prop::One,
            _ => {
                let depth = g.rng.gen_range(0..=2);
                g.prop(depth, &mut atoms.clone())
            }
        };
        g.avoid(&lin);
        g.avoid(&xi);
        g.work = WORK;
        if g.finish(&lin, &xi, &goal).is_none() {
            goal = everything.unwrap_or(Prop::Top);
        }
        let f = fuel(cfg, &mut g.rng);
        g.work = WORK;
        if let Some(term) = g.gen(&lin, &xi, &goal, f) {
            if term.size() <= cfg.max_size {
                return Sample {
                    ctx: hyps_to_ctx(&lin, &xi),
                    term,
                    ty: goal,
                };
            }
        }
    }
    panic!("no open term found for seed {seed}")
}

/// A closed term of the vector type `shape`.
pub fn vector_term(cfg: &GenConfig, seed: u64, shape: &VShape) -> Term {
    term_of_type(cfg, seed, &TypingCtx::empty(), &shape.to_prop())
        .unwrap_or_else(|| panic!("vector types are inhabited (seed {seed})"))
}

/// A random vector shape with at most `max_dim` leaves.
pub fn random_shape(rng: &mut impl Rng, max_dim: usize) -> VShape {
    fn exact(rng: &mut impl Rng, n: usize) -> VShape {
        if n == 1 {
            return VShape::Leaf;
        }
        let k = rng.gen_range(1..n);
        VShape::node(exact(rng, k), exact(rng, n - k))
    }
    let n = rng.gen_range(1..=max_dim.max(1));
    exact(rng, n)
}

/// A small perturbation of `t` that is often, but not always, ill-typed:
/// a variable renamed to another one in scope, a subterm replaced by a
/// variable, or a subterm duplicated into a sum or tensor.
pub fn mutate(seed: u64, sample: &Sample) -> Term {
    let mut rng = rng(seed);
    let names: Vec<Name> = sample
        .ctx
        .gamma
        .iter()
        .chain(&sample.ctx.xi)
        .map(|(x, _)| x.clone())
        .collect();
    let mut positions = Vec::new();
    collect_positions(&sample.term, &mut Vec::new(), &mut positions);
    let mut t = sample.term.clone();
    let pos = positions.choose(&mut rng).cloned().unwrap_or_default();
    let slot = t.subterm_mut(&pos).expect("collected position");
    let var = |rng: &mut ChaCha8Rng| match names.choose(rng) {
        Some(x) => Term::var(x.as_str()),
        None => Term::Unit,
    };
    *slot = match rng.gen_range(0..4) {
        0 => var(&mut rng),
        1 => Term::sum(slot.clone(), var(&mut rng)),
        2 => Term::tensor(slot.clone(), slot.clone()),
        _ => match &*slot {
            Term::Var(_) => var(&mut rng),
            other => Term::sum(other.clone(), other.clone()),
        },
    };
    t
}

fn collect_positions(t: &Term, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    out.push(path.clone());
    for (i, c) in t.children().into_iter().enumerate() {
        path.push(i);
        collect_positions(c, path, out);
        path.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::typing::{check, type_of_closed};

    #[test]
    fn closed_terms_are_well_typed() {
        for semiring in [Semiring::Rat, Semiring::Nat, Semiring::Gauss, Semiring::Unit] {
            let cfg = GenConfig::new(semiring);
            for seed in 0..150 {
                let s = closed_term(&cfg, seed);
                assert!(s.term.size() <= cfg.max_size);
                assert_eq!(type_of_closed(&s.term).as_ref(), Ok(&s.ty), "seed {seed}: {}", s.term);
            }
        }
    }

    #[test]
    fn open_terms_are_well_typed() {
        let cfg = GenConfig::new(Semiring::Rat);
        for seed in 0..300 {
            let s = open_term(&cfg, seed, 6);
            let r = check(&s.ctx, &s.term, &s.ty);
            assert!(r.is_ok(), "seed {seed}: {} : {} in {:?}: {:?}", s.term, s.ty, s.ctx, r);
        }
    }

    #[test]
    fn linear_fragment_has_no_bang() {
        let cfg = GenConfig::new(Semiring::Rat).linear_fragment();
        for seed in 0..100 {
            let s = closed_term(&cfg, seed);
            assert!(!s.term.mentions_bang() && !s.ty.mentions_bang(), "{}", s.term);
        }
    }

    #[test]
    fn vector_terms_have_their_shape() {
        let cfg = GenConfig::new(Semiring::Gauss);
        let mut r = rng(3);
        for seed in 0..100 {
            let shape = random_shape(&mut r, 8);
            let t = vector_term(&cfg, seed, &shape);
            assert_eq!(type_of_closed(&t).unwrap(), shape.to_prop());
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let cfg = GenConfig::new(Semiring::Rat);
        assert_eq!(closed_term(&cfg, 42), closed_term(&cfg, 42));
        assert_eq!(open_term(&cfg, 42, 4), open_term(&cfg, 42, 4));
    }

    #[test]
    fn generated_terms_are_varied() {
        let cfg = GenConfig::new(Semiring::Rat);
        let mut kinds = std::collections::HashSet::new();
        for seed in 0..200 {
            closed_term(&cfg, seed).term.visit(&mut |t| {
                kinds.insert(std::mem::discriminant(t));
            });
        }
        // every constructor except free variables shows up in closed terms
        assert!(kinds.len() >= 20, "only {} constructors", kinds.len());
    }
}
