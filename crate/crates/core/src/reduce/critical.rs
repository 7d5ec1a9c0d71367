//! Critical pairs of the standard rules.
//!
//! Left-hand sides are read as first-order patterns: binder bodies, scalars
//! and annotations become metavariables. Two left-hand sides overlap when one
//! unifies with a non-variable subpattern of the other. Most syntactic
//! overlaps cannot occur in a typed term, e.g. `δ⊗(a.⋆ + b.⋆, xy.v)` puts a
//! proof of `1` where a proof of a tensor is expected. To rule those out every
//! pattern node carries a *sort*, the main connective of its type:
//! introductions fix it, the major premise of an elimination is forced to the
//! eliminated connective, and `+`/`a .` share the sort of their arguments. An
//! overlap is kept as a critical pair only when its sort constraints are
//! satisfiable.

use std::collections::HashMap;

use super::RuleId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Sym {
    Sum,
    Prod,
    Star,
    ElimOne,
    Lam,
    App,
    TensorI,
    ElimTensor,
    Unit,
    Pair,
    ElimWith1,
    ElimWith2,
    Inl,
    Inr,
    ElimPlus,
    BangI,
    ElimBang,
    TLam,
    TApp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Conn {
    One,
    Lolli,
    Tensor,
    Top,
    With,
    Plus,
    Bang,
    Forall,
}

impl Sym {
    /// Sort of a node headed by `self`, when it is fixed.
    fn sort(self) -> Option<Conn> {
        Some(match self {
            Sym::Star => Conn::One,
            Sym::Lam => Conn::Lolli,
            Sym::TensorI => Conn::Tensor,
            Sym::Unit => Conn::Top,
            Sym::Pair => Conn::With,
            Sym::Inl | Sym::Inr => Conn::Plus,
            Sym::BangI => Conn::Bang,
            Sym::TLam => Conn::Forall,
            _ => return None,
        })
    }

    /// Connective eliminated by the first argument.
    fn major(self) -> Option<Conn> {
        Some(match self {
            Sym::ElimOne => Conn::One,
            Sym::App => Conn::Lolli,
            Sym::ElimTensor => Conn::Tensor,
            Sym::ElimWith1 | Sym::ElimWith2 => Conn::With,
            Sym::ElimPlus => Conn::Plus,
            Sym::ElimBang => Conn::Bang,
            Sym::TApp => Conn::Forall,
            _ => return None,
        })
    }

    /// Arguments whose sort equals the node's own sort.
    fn same_sort_args(self) -> &'static [usize] {
        match self {
            Sym::Sum => &[0, 1],
            Sym::Prod => &[0],
            Sym::ElimOne | Sym::ElimTensor | Sym::ElimWith1 | Sym::ElimWith2 | Sym::ElimBang => &[1],
            Sym::ElimPlus => &[1, 2],
            _ => &[],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Pat {
    Var(u32),
    Node(Sym, Vec<Pat>),
}

/// A left-hand side with the metavariables that do not appear as pattern
/// arguments (scalars and annotations), listed for the linearity check.
struct Lhs {
    pat: Pat,
    side: &'static [&'static str],
}

fn lhs(rule: RuleId) -> Lhs {
    use Pat::{Node as N, Var as V};
    use RuleId::*;
    use Sym::*;
    let n = |s: Sym, args: Vec<Pat>| N(s, args);
    let (pat, side): (Pat, &[&str]) = match rule {
        BetaOne => (n(ElimOne, vec![n(Star, vec![]), V(0)]), &["a"]),
        BetaLolli => (n(App, vec![n(Lam, vec![V(0)]), V(1)]), &["A"]),
        BetaTensor => (n(ElimTensor, vec![n(TensorI, vec![V(0), V(1)]), V(2)]), &["A", "B"]),
        BetaWith1 => (n(ElimWith1, vec![n(Pair, vec![V(0), V(1)]), V(2)]), &["A"]),
        BetaWith2 => (n(ElimWith2, vec![n(Pair, vec![V(0), V(1)]), V(2)]), &["B"]),
        BetaPlusInl => (n(ElimPlus, vec![n(Inl, vec![V(0)]), V(1), V(2)]), &["B'", "A", "B"]),
        BetaPlusInr => (n(ElimPlus, vec![n(Inr, vec![V(0)]), V(1), V(2)]), &["A'", "A", "B"]),
        BetaBang => (n(ElimBang, vec![n(BangI, vec![V(0)]), V(1)]), &["A"]),
        BetaForall => (n(TApp, vec![n(TLam, vec![V(0)])]), &["A"]),
        SumStar => (n(Sum, vec![n(Star, vec![]), n(Star, vec![])]), &["a", "b"]),
        // The two annotations must agree. Typing already forces that (both
        // summands have the same type), so the second one is a separate
        // metavariable guarded by typing rather than a repeated one.
        SumLam => (n(Sum, vec![n(Lam, vec![V(0)]), n(Lam, vec![V(1)])]), &["A", "A'"]),
        SumTensorE => (n(ElimTensor, vec![n(Sum, vec![V(0), V(1)]), V(2)]), &["A", "B"]),
        SumUnit => (n(Sum, vec![n(Unit, vec![]), n(Unit, vec![])]), &[]),
        SumPair => (n(Sum, vec![n(Pair, vec![V(0), V(1)]), n(Pair, vec![V(2), V(3)])]), &[]),
        SumPlusE => (n(ElimPlus, vec![n(Sum, vec![V(0), V(1)]), V(2), V(3)]), &["A", "B"]),
        SumBang => (n(Sum, vec![n(BangI, vec![V(0)]), n(BangI, vec![V(1)])]), &[]),
        SumTLam => (n(Sum, vec![n(TLam, vec![V(0)]), n(TLam, vec![V(1)])]), &[]),
        ProdStar => (n(Prod, vec![n(Star, vec![])]), &["a", "b"]),
        ProdLam => (n(Prod, vec![n(Lam, vec![V(0)])]), &["a", "A"]),
        ProdTensorE => (n(ElimTensor, vec![n(Prod, vec![V(0)]), V(1)]), &["a", "A", "B"]),
        ProdUnit => (n(Prod, vec![n(Unit, vec![])]), &["a"]),
        ProdPair => (n(Prod, vec![n(Pair, vec![V(0), V(1)])]), &["a"]),
        ProdPlusE => (n(ElimPlus, vec![n(Prod, vec![V(0)]), V(1), V(2)]), &["a", "A", "B"]),
        ProdBang => (n(Prod, vec![n(BangI, vec![V(0)])]), &["a"]),
        ProdTLam => (n(Prod, vec![n(TLam, vec![V(0)])]), &["a"]),
        UltraLeft | UltraRight | UltraDrop => unreachable!("ultra rules are not scanned"),
    };
    Lhs { pat, side }
}

impl Pat {
    fn vars(&self, out: &mut Vec<u32>) {
        match self {
            Pat::Var(v) => out.push(*v),
            Pat::Node(_, args) => args.iter().for_each(|a| a.vars(out)),
        }
    }

    fn rename(&self, offset: u32) -> Pat {
        match self {
            Pat::Var(v) => Pat::Var(v + offset),
            Pat::Node(s, args) => Pat::Node(*s, args.iter().map(|a| a.rename(offset)).collect()),
        }
    }

    /// Non-variable positions, pre-order.
    fn positions(&self, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if let Pat::Node(_, args) = self {
            out.push(path.clone());
            for (i, a) in args.iter().enumerate() {
                path.push(i);
                a.positions(path, out);
                path.pop();
            }
        }
    }

    fn at(&self, path: &[usize]) -> &Pat {
        match (path.split_first(), self) {
            (None, _) => self,
            (Some((&i, rest)), Pat::Node(_, args)) => args[i].at(rest),
            _ => unreachable!("path leaves the pattern"),
        }
    }

    fn replace(&self, path: &[usize], with: &Pat) -> Pat {
        match (path.split_first(), self) {
            (None, _) => with.clone(),
            (Some((&i, rest)), Pat::Node(s, args)) => {
                let mut args = args.clone();
                args[i] = args[i].replace(rest, with);
                Pat::Node(*s, args)
            }
            _ => unreachable!("path leaves the pattern"),
        }
    }

    fn apply(&self, sub: &HashMap<u32, Pat>) -> Pat {
        match self {
            Pat::Var(v) => match sub.get(v) {
                Some(p) => p.apply(sub),
                None => self.clone(),
            },
            Pat::Node(s, args) => Pat::Node(*s, args.iter().map(|a| a.apply(sub)).collect()),
        }
    }
}

fn occurs(v: u32, p: &Pat, sub: &HashMap<u32, Pat>) -> bool {
    match p {
        Pat::Var(w) => *w == v || sub.get(w).is_some_and(|q| occurs(v, q, sub)),
        Pat::Node(_, args) => args.iter().any(|a| occurs(v, a, sub)),
    }
}

fn walk<'p>(p: &'p Pat, sub: &'p HashMap<u32, Pat>) -> &'p Pat {
    match p {
        Pat::Var(v) => sub.get(v).map_or(p, |q| walk(q, sub)),
        _ => p,
    }
}

fn unify(a: &Pat, b: &Pat, sub: &mut HashMap<u32, Pat>) -> bool {
    let (a, b) = (walk(a, sub).clone(), walk(b, sub).clone());
    match (&a, &b) {
        (Pat::Var(x), Pat::Var(y)) if x == y => true,
        (Pat::Var(x), other) | (other, Pat::Var(x)) => {
            if occurs(*x, other, sub) {
                return false;
            }
            sub.insert(*x, other.clone());
            true
        }
        (Pat::Node(s, xs), Pat::Node(t, ys)) => {
            s == t && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| unify(x, y, sub))
        }
    }
}

/// Union-find over pattern nodes, each class optionally fixed to a connective.
struct Sorts {
    parent: Vec<usize>,
    fixed: Vec<Option<Conn>>,
}

impl Sorts {
    fn fresh(&mut self, c: Option<Conn>) -> usize {
        self.parent.push(self.parent.len());
        self.fixed.push(c);
        self.parent.len() - 1
    }

    fn find(&mut self, i: usize) -> usize {
        if self.parent[i] != i {
            let r = self.find(self.parent[i]);
            self.parent[i] = r;
        }
        self.parent[i]
    }

    fn union(&mut self, i: usize, j: usize) -> bool {
        let (i, j) = (self.find(i), self.find(j));
        if i == j {
            return true;
        }
        match (self.fixed[i], self.fixed[j]) {
            (Some(a), Some(b)) if a != b => false,
            (a, b) => {
                self.parent[i] = j;
                self.fixed[j] = a.or(b);
                true
            }
        }
    }

    /// Assigns a sort class to every node of `p`; returns the root's class,
    /// or `None` when the constraints clash.
    fn assign(&mut self, p: &Pat, vars: &mut HashMap<u32, usize>) -> Option<usize> {
        match p {
            Pat::Var(v) => Some(*vars.entry(*v).or_insert_with(|| self.fresh(None))),
            Pat::Node(s, args) => {
                let me = self.fresh(s.sort());
                let mut kids = Vec::new();
                for a in args {
                    kids.push(self.assign(a, vars)?);
                }
                if let Some(c) = s.major() {
                    let forced = self.fresh(Some(c));
                    if !self.union(kids[0], forced) {
                        return None;
                    }
                }
                for &i in s.same_sort_args() {
                    if !self.union(kids[i], me) {
                        return None;
                    }
                }
                Some(me)
            }
        }
    }
}

fn well_sorted(p: &Pat) -> bool {
    let mut sorts = Sorts {
        parent: Vec::new(),
        fixed: Vec::new(),
    };
    sorts.assign(p, &mut HashMap::new()).is_some()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalPair {
    /// The rule whose left-hand side contains the overlap.
    pub outer: RuleId,
    /// The rule matched at `position` inside it.
    pub inner: RuleId,
    pub position: Vec<usize>,
    /// Whether the overlap satisfies the sort constraints.
    pub well_sorted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearityNote {
    pub rule: RuleId,
    pub left_linear: bool,
    /// Side conditions discharged by typing instead of by matching.
    pub guard: Option<&'static str>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalPairReport {
    pub rules: Vec<RuleId>,
    /// Every syntactic overlap, including ill-sorted ones.
    pub overlaps: Vec<CriticalPair>,
    pub linearity: Vec<LinearityNote>,
}

impl CriticalPairReport {
    /// Overlaps that can occur in a typed term.
    pub fn critical_pairs(&self) -> Vec<&CriticalPair> {
        self.overlaps.iter().filter(|o| o.well_sorted).collect()
    }

    pub fn left_linear_count(&self) -> usize {
        self.linearity.iter().filter(|l| l.left_linear).count()
    }
}

/// Scans all pairs of standard rules.
pub fn critical_pair_scan() -> CriticalPairReport {
    critical_pair_scan_with(RuleId::standard())
}

/// Scans all pairs drawn from `rules`; ultra rules are ignored.
pub fn critical_pair_scan_with(rules: &[RuleId]) -> CriticalPairReport {
    let rules: Vec<RuleId> = rules.iter().copied().filter(|r| !r.is_ultra()).collect();
    let mut overlaps = Vec::new();
    for &outer in &rules {
        let l1 = lhs(outer).pat;
        let mut positions = Vec::new();
        l1.positions(&mut Vec::new(), &mut positions);
        for &inner in &rules {
            let l2 = lhs(inner).pat.rename(1000);
            for pos in &positions {
                if pos.is_empty() && outer == inner {
                    continue;
                }
                let mut sub = HashMap::new();
                if !unify(l1.at(pos), &l2, &mut sub) {
                    continue;
                }
                let instance = l1.replace(pos, &l2).apply(&sub);
                overlaps.push(CriticalPair {
                    outer,
                    inner,
                    position: pos.clone(),
                    well_sorted: well_sorted(&instance),
                });
            }
        }
    }
    let linearity = rules
        .iter()
        .map(|&rule| {
            let l = lhs(rule);
            let mut vars = Vec::new();
            l.pat.vars(&mut vars);
            let mut sorted = vars.clone();
            sorted.sort_unstable();
            sorted.dedup();
            let mut side = l.side.to_vec();
            side.sort_unstable();
            side.dedup();
            LinearityNote {
                rule,
                left_linear: sorted.len() == vars.len() && side.len() == l.side.len(),
                guard: (rule == RuleId::SumLam).then_some("both annotations equal, implied by typing"),
            }
        })
        .collect();
    CriticalPairReport {
        rules,
        overlaps,
        linearity,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_critical_pairs_and_all_left_linear() {
        let r = critical_pair_scan();
        assert_eq!(r.rules.len(), 25);
        assert!(r.critical_pairs().is_empty(), "{:?}", r.critical_pairs());
        assert_eq!(r.left_linear_count(), 25);
    }

    #[test]
    fn ill_sorted_overlaps_exist() {
        let r = critical_pair_scan();
        let star_under_tensor = CriticalPair {
            outer: RuleId::SumTensorE,
            inner: RuleId::SumStar,
            position: vec![0],
            well_sorted: false,
        };
        assert!(r.overlaps.contains(&star_under_tensor));
        assert!(r.overlaps.iter().all(|o| !o.well_sorted));
    }

    #[test]
    fn subsets_stay_clean() {
        let without: Vec<RuleId> = RuleId::standard().iter().copied().filter(|&r| r != RuleId::SumPair).collect();
        let r = critical_pair_scan_with(&without);
        assert_eq!(r.rules.len(), 24);
        assert!(r.critical_pairs().is_empty());
    }

    #[test]
    fn sorts_detect_a_real_overlap() {
        // a hypothetical rule rooted at `+` on tensors would overlap sum.tensorE
        let bad = Pat::Node(
            Sym::ElimTensor,
            vec![Pat::Node(Sym::Sum, vec![Pat::Node(Sym::TensorI, vec![Pat::Var(0), Pat::Var(1)]), Pat::Var(2)]), Pat::Var(3)],
        );
        assert!(well_sorted(&bad));
        let ill = Pat::Node(Sym::ElimTensor, vec![Pat::Node(Sym::Star, vec![]), Pat::Var(0)]);
        assert!(!well_sorted(&ill));
    }
}
