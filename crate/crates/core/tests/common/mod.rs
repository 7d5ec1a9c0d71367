//! A declarative type checker used as an oracle for the library's checker.
//!
//! Every rule with two premises over disjoint contexts tries all ways of
//! splitting the linear context, exactly as the rules are written. Results
//! are memoized on (term, context), so the exponential search stays cheap on
//! small contexts.

#![allow(dead_code)]

use std::collections::HashMap;

use ls2::{Prop, Term};

type Hyps = Vec<(String, Prop)>;

#[derive(Default)]
pub struct Declarative {
    memo: HashMap<(Term, Hyps, Hyps), Option<Prop>>,
}

impl Declarative {
    /// The type of `t` under non-linear `xi` and linear `gamma`, where every
    /// hypothesis of `gamma` must be used.
    pub fn type_of(&mut self, xi: &Hyps, gamma: &Hyps, t: &Term) -> Option<Prop> {
        if t.semirings().len() > 1 {
            return None;
        }
        self.synth(xi, gamma, t, 0)
    }

    fn synth(&mut self, xi: &Hyps, gamma: &Hyps, t: &Term, depth: usize) -> Option<Prop> {
        let key = (t.clone(), xi.clone(), gamma.clone());
        if let Some(r) = self.memo.get(&key) {
            return r.clone();
        }
        let r = self.rule(xi, gamma, t, depth);
        self.memo.insert(key, r.clone());
        r
    }

    /// Tries every split `gamma = g1, g2` and returns the first that works.
    fn split<T>(&mut self, gamma: &Hyps, mut f: impl FnMut(&mut Self, &Hyps, &Hyps) -> Option<T>) -> Option<T> {
        let n = gamma.len();
        for mask in 0..(1u32 << n) {
            let (mut g1, mut g2) = (Vec::new(), Vec::new());
            for (i, h) in gamma.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    g1.push(h.clone());
                } else {
                    g2.push(h.clone());
                }
            }
            if let Some(r) = f(self, &g1, &g2) {
                return Some(r);
            }
        }
        None
    }

    fn body(&mut self, xi: &Hyps, gamma: &Hyps, binders: &[Prop], body: &Term, depth: usize) -> Option<Prop> {
        let names: Vec<String> = (0..binders.len()).map(|i| format!("#{depth}.{i}")).collect();
        let opened = body.open(&names.iter().map(|n| Term::var(n.as_str())).collect::<Vec<_>>());
        let mut g = gamma.clone();
        g.extend(names.into_iter().zip(binders.iter().cloned()));
        self.synth(xi, &g, &opened, depth + 1)
    }

    fn rule(&mut self, xi: &Hyps, gamma: &Hyps, t: &Term, d: usize) -> Option<Prop> {
        use Term as T;
        match t {
            T::Var(v) => {
                let ls2::Var::Free(x) = v else { return None };
                match gamma.as_slice() {
                    [(y, a)] if y == x => Some(a.clone()),
                    [] => xi.iter().find(|(y, _)| y == x).map(|(_, a)| a.clone()),
                    _ => None,
                }
            }
            T::Sum(t, u) => {
                let a = self.synth(xi, gamma, t, d)?;
                (self.synth(xi, gamma, u, d)? == a).then_some(a)
            }
            T::Prod(_, t) => self.synth(xi, gamma, t, d),
            T::Star(_) => gamma.is_empty().then_some(Prop::One),
            T::ElimOne(t, u) => self.split(gamma, |s, g1, g2| {
                (s.synth(xi, g1, t, d)? == Prop::One).then_some(())?;
                s.synth(xi, g2, u, d)
            }),
            T::Lam(b, body) => {
                let c = self.body(xi, gamma, std::slice::from_ref(&b.ty), body, d)?;
                Some(Prop::lolli(b.ty.clone(), c))
            }
            T::App(t, u) => self.split(gamma, |s, g1, g2| match s.synth(xi, g1, t, d)? {
                Prop::Lolli(a, b) => (s.synth(xi, g2, u, d)? == *a).then_some(*b),
                _ => None,
            }),
            T::TensorI(t, u) => self.split(gamma, |s, g1, g2| {
                Some(Prop::tensor(s.synth(xi, g1, t, d)?, s.synth(xi, g2, u, d)?))
            }),
            T::ElimTensor(t, x, y, u) => self.split(gamma, |s, g1, g2| match s.synth(xi, g1, t, d)? {
                Prop::Tensor(a, b) if *a == x.ty && *b == y.ty => {
                    s.body(xi, g2, &[x.ty.clone(), y.ty.clone()], u, d)
                }
                _ => None,
            }),
            T::Unit => Some(Prop::Top),
            T::ElimZero(c, t) => self.split(gamma, |s, g1, _| (s.synth(xi, g1, t, d)? == Prop::Zero).then(|| c.clone())),
            T::Pair(t, u) => Some(Prop::with(self.synth(xi, gamma, t, d)?, self.synth(xi, gamma, u, d)?)),
            T::ElimWith1(t, x, u) => self.split(gamma, |s, g1, g2| match s.synth(xi, g1, t, d)? {
                Prop::With(a, _) if *a == x.ty => s.body(xi, g2, &[x.ty.clone()], u, d),
                _ => None,
            }),
            T::ElimWith2(t, x, u) => self.split(gamma, |s, g1, g2| match s.synth(xi, g1, t, d)? {
                Prop::With(_, b) if *b == x.ty => s.body(xi, g2, &[x.ty.clone()], u, d),
                _ => None,
            }),
            T::Inl(t, b) => Some(Prop::plus(self.synth(xi, gamma, t, d)?, b.clone())),
            T::Inr(t, a) => Some(Prop::plus(a.clone(), self.synth(xi, gamma, t, d)?)),
            T::ElimPlus(t, x, u, y, v) => self.split(gamma, |s, g1, g2| match s.synth(xi, g1, t, d)? {
                Prop::Plus(a, b) if *a == x.ty && *b == y.ty => {
                    let c = s.body(xi, g2, &[x.ty.clone()], u, d)?;
                    (s.body(xi, g2, &[y.ty.clone()], v, d)? == c).then_some(c)
                }
                _ => None,
            }),
            T::BangI(t) => {
                if !gamma.is_empty() {
                    return None;
                }
                Some(Prop::bang(self.synth(xi, gamma, t, d)?))
            }
            T::ElimBang(t, x, u) => self.split(gamma, |s, g1, g2| match s.synth(xi, g1, t, d)? {
                Prop::Bang(a) if *a == x.ty => {
                    let name = format!("#{d}!");
                    let opened = u.open(&[Term::var(name.as_str())]);
                    let mut xi2 = xi.clone();
                    xi2.push((name, x.ty.clone()));
                    s.synth(&xi2, g2, &opened, d + 1)
                }
                _ => None,
            }),
            T::TLam(h, body) => {
                let name = format!("{}#{d}", h.0);
                let a = self.synth(xi, gamma, &body.open_type(&Prop::var(name.as_str())), d + 1)?;
                Some(Prop::forall(&name, a))
            }
            T::TApp(t, b) => match self.synth(xi, gamma, t, d)? {
                Prop::Forall(_, a) => Some(a.instantiate(b)),
                _ => None,
            },
        }
    }
}
