//! Randomized checks of the calculus' metatheory over generated terms.
//!
//! A suite draws `samples` terms from the generator in [`crate::gen`].
//! Sample `i` of a run with seed `s` uses the seed `s + i`, so every failure
//! is reproduced by running the same suite with that seed and one sample.
//! Samples are checked in parallel; the report does not depend on the
//! number of threads.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::encode::{is_v_type, mat_vec, matrix_to_term, term_to_vec, vec_to_term, zero_term, DenseMat, DenseVec, VShape};
use crate::gen::{self, closed_term, open_term, random_scalar, random_shape, random_type, term_of_type, GenConfig, Sample};
use crate::linearity::{check_linearity, decompose, in_linear_fragment, HeadKind, HOLE};
use crate::reduce::{equiv, format_position, normalize, normalize_random, reducts, Mode};
use crate::semiring::{scalar_add, scalar_mul, Scalar, Semiring};
use crate::syntax::{Prop, Term};
use crate::typing::{check, type_of_closed, TypeError, TypingCtx};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    /// One-step reducts keep the type.
    SubjectReduction,
    /// Random reduction strategies agree on the normal form.
    Confluence,
    /// Standard and ultra reduction stop within the step limit.
    Termination,
    /// Closed normal forms have the shape their type dictates.
    Introduction,
    /// The seven vector-space laws on closed vector terms.
    Semimodule,
    /// `t{u1 + u2} ≡ t{u1} + t{u2}` and `t{a . u} ≡ a . t{u}`.
    Linearity,
    /// μ never grows under reduction and adds up over decompositions.
    Measure,
}

impl Suite {
    pub const ALL: &'static [Suite] = &[
        Suite::SubjectReduction,
        Suite::Confluence,
        Suite::Termination,
        Suite::Introduction,
        Suite::Semimodule,
        Suite::Linearity,
        Suite::Measure,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::SubjectReduction => "sr",
            Suite::Confluence => "confluence",
            Suite::Termination => "sn",
            Suite::Introduction => "intro",
            Suite::Semimodule => "semimodule",
            Suite::Linearity => "linearity",
            Suite::Measure => "measure",
        }
    }

    /// The properties the suite reports on, in report order.
    pub fn properties(self) -> &'static [&'static str] {
        match self {
            Suite::SubjectReduction => &["subject-reduction", "subject-reduction.ultra"],
            Suite::Confluence => &["confluence"],
            Suite::Termination => &["termination", "termination.ultra"],
            Suite::Introduction => &["introduction"],
            Suite::Semimodule => &LAWS,
            Suite::Linearity => &["linearity", "linearity.matrix"],
            Suite::Measure => &["measure.monotone", "decomposition", "measure.decomposition"],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown suite `{0}`")]
pub struct UnknownSuite(pub String);

impl FromStr for Suite {
    type Err = UnknownSuite;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .iter()
            .copied()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    pub semiring: Semiring,
    pub samples: usize,
    pub seed: u64,
    pub max_steps: usize,
}

impl SuiteConfig {
    pub fn new(semiring: Semiring) -> Self {
        SuiteConfig {
            semiring,
            samples: 100,
            seed: 0,
            max_steps: 10_000,
        }
    }

    pub fn samples(mut self, n: usize) -> Self {
        self.samples = n;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn max_steps(mut self, n: usize) -> Self {
        self.max_steps = n;
        self
    }
}

/// A failed check, with the seed of the sample that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub property: &'static str,
    pub seed: u64,
    pub size: usize,
    pub term: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyResult {
    pub property: &'static str,
    /// Number of samples the property was checked on.
    pub checked: usize,
    /// Size of the largest term checked.
    pub max_size: usize,
    pub failures: Vec<Failure>,
}

impl PropertyResult {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub name: String,
    pub seed: u64,
    pub samples: usize,
    pub properties: Vec<PropertyResult>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.properties.iter().all(PropertyResult::ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Failure> {
        self.properties.iter().flat_map(|p| &p.failures)
    }

    pub fn property(&self, name: &str) -> Option<&PropertyResult> {
        self.properties.iter().find(|p| p.property == name)
    }
}

/// One `PASS` line per property, or one `FAIL` line per failing sample
/// followed by the offending term.
impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.properties {
            if p.ok() {
                writeln!(
                    f,
                    "PASS {} seed={} size={} checked={}",
                    p.property, self.seed, p.max_size, p.checked
                )?;
            }
            for fail in &p.failures {
                writeln!(f, "FAIL {} seed={} size={}", fail.property, fail.seed, fail.size)?;
                writeln!(f, "  term: {}", fail.term)?;
                for line in fail.detail.lines() {
                    writeln!(f, "  {line}")?;
                }
            }
        }
        Ok(())
    }
}

struct Check {
    property: &'static str,
    size: usize,
    failure: Option<(String, String)>,
}

/// Collects the checks made on one sample.
struct Probe {
    checks: Vec<Check>,
}

impl Probe {
    fn record(&mut self, property: &'static str, term: &Term, outcome: Result<(), String>) {
        self.checks.push(Check {
            property,
            size: term.size(),
            failure: outcome.err().map(|detail| (term.to_string(), detail)),
        });
    }
}

fn sweep(name: &str, properties: &[&'static str], cfg: &SuiteConfig, sample: impl Fn(u64, &mut Probe) + Sync) -> Report {
    let probes: Vec<(u64, Probe)> = (0..cfg.samples as u64)
        .into_par_iter()
        .map(|i| {
            let seed = cfg.seed.wrapping_add(i);
            let mut probe = Probe { checks: Vec::new() };
            sample(seed, &mut probe);
            (seed, probe)
        })
        .collect();
    let mut results: Vec<PropertyResult> = properties
        .iter()
        .map(|&property| PropertyResult {
            property,
            checked: 0,
            max_size: 0,
            failures: Vec::new(),
        })
        .collect();
    for (seed, probe) in probes {
        for c in probe.checks {
            let r = results
                .iter_mut()
                .find(|r| r.property == c.property)
                .expect("suites only record their own properties");
            r.checked += 1;
            r.max_size = r.max_size.max(c.size);
            if let Some((term, detail)) = c.failure {
                r.failures.push(Failure {
                    property: c.property,
                    seed,
                    size: c.size,
                    term,
                    detail,
                });
            }
        }
    }
    Report {
        name: name.to_string(),
        seed: cfg.seed,
        samples: cfg.samples,
        properties: results,
    }
}

pub fn run(suite: Suite, cfg: &SuiteConfig) -> Report {
    let f: fn(&SuiteConfig, u64, &mut Probe) = match suite {
        Suite::SubjectReduction => subject_reduction,
        Suite::Confluence => confluence,
        Suite::Termination => termination,
        Suite::Introduction => introduction,
        Suite::Semimodule => semimodule,
        Suite::Linearity => linearity,
        Suite::Measure => measure,
    };
    sweep(suite.name(), suite.properties(), cfg, |seed, probe| f(cfg, seed, probe))
}

/// The shared corpus: closed terms on even seeds, open terms over at most six
/// linear hypotheses on odd ones.
pub fn corpus_sample(semiring: Semiring, seed: u64, linear_fragment: bool) -> Sample {
    let mut cfg = GenConfig::new(semiring);
    if linear_fragment {
        cfg = cfg.linear_fragment();
    }
    if seed % 2 == 0 {
        closed_term(&cfg, seed)
    } else {
        open_term(&cfg, seed, 6)
    }
}

fn subject_reduction(cfg: &SuiteConfig, seed: u64, probe: &mut Probe) {
    let s = corpus_sample(cfg.semiring, seed, false);
    for (mode, property) in [(Mode::Standard, "subject-reduction"), (Mode::Ultra, "subject-reduction.ultra")] {
        let outcome = reducts(&s.term, mode)
            .into_iter()
            .filter(|r| mode == Mode::Standard || r.rule.is_ultra())
            .try_for_each(|r| {
                check(&s.ctx, &r.term, &s.ty).map(drop).map_err(|e| {
                    format!(
                        "{} at {} gives {}\nwhich does not have type {}: {e}",
                        r.rule,
                        format_position(&r.position),
                        r.term,
                        s.ty
                    )
                })
            });
        probe.record(property, &s.term, outcome);
    }
}

const STRATEGIES: u64 = 20;

fn confluence(cfg: &SuiteConfig, seed: u64, probe: &mut Probe) {
    let s = corpus_sample(cfg.semiring, seed, false);
    let outcome = (|| {
        let nf = normalize(&s.term, cfg.max_steps).map_err(|e| e.to_string())?.term;
        let mut rng = gen::rng(seed);
        for _ in 0..STRATEGIES {
            let strategy = rng.gen();
            let other = normalize_random(&s.term, strategy, cfg.max_steps, Mode::Standard)
                .map_err(|e| e.to_string())?
                .term;
            if other != nf {
                return Err(format!(
                    "leftmost-outermost: {nf}\nrandom strategy {strategy}: {other}"
                ));
            }
        }
        Ok(())
    })();
    probe.record("confluence", &s.term, outcome);
}

fn termination(cfg: &SuiteConfig, seed: u64, probe: &mut Probe) {
    let s = corpus_sample(cfg.semiring, seed, false);
    let standard = normalize(&s.term, cfg.max_steps).map(drop).map_err(|e| e.to_string());
    probe.record("termination", &s.term, standard);
    let ultra = normalize_random(&s.term, seed, cfg.max_steps, Mode::Ultra)
        .map(drop)
        .map_err(|e| e.to_string());
    probe.record("termination.ultra", &s.term, ultra);
}

/// Whether a closed normal form of `ty` has an allowed head.
pub fn conforms(nf: &Term, ty: &Prop) -> bool {
    use Term as T;
    match ty {
        Prop::One => matches!(nf, T::Star(_)),
        Prop::Lolli(..) => matches!(nf, T::Lam(..)),
        Prop::Top => matches!(nf, T::Unit),
        Prop::With(..) => matches!(nf, T::Pair(..)),
        Prop::Bang(_) => matches!(nf, T::BangI(_)),
        Prop::Forall(..) => matches!(nf, T::TLam(..)),
        Prop::Tensor(..) => matches!(nf, T::TensorI(..) | T::Sum(..) | T::Prod(..)),
        Prop::Plus(..) => matches!(nf, T::Inl(..) | T::Inr(..) | T::Sum(..) | T::Prod(..)),
        Prop::Zero | Prop::Var(_) => false,
    }
}

fn introduction(cfg: &SuiteConfig, seed: u64, probe: &mut Probe) {
    let s = closed_term(&GenConfig::new(cfg.semiring), seed);
    let outcome = normalize(&s.term, cfg.max_steps)
        .map_err(|e| e.to_string())
        .and_then(|nf| {
            if conforms(&nf.term, &s.ty) {
                Ok(())
            } else {
                Err(format!("normal form {} does not fit type {}", nf.term, s.ty))
            }
        });
    probe.record("introduction", &s.term, outcome);
}

const LAWS: [&str; 7] = [
    "semimodule.sum-assoc",
    "semimodule.sum-comm",
    "semimodule.zero",
    "semimodule.prod-assoc",
    "semimodule.unit",
    "semimodule.distrib-vector",
    "semimodule.distrib-scalar",
];

/// A closed term of the vector type `shape`: generated when the generator
/// finds one, otherwise the canonical term of random entries.
fn vector(semiring: Semiring, rng: &mut impl Rng, shape: &VShape) -> Term {
    let cfg = GenConfig::new(semiring).max_size(40);
    term_of_type(&cfg, rng.gen(), &TypingCtx::empty(), &shape.to_prop()).unwrap_or_else(|| {
        let entries = (0..shape.dim()).map(|_| random_scalar(rng, semiring)).collect();
        vec_to_term(&DenseVec::new(entries, shape.clone()).expect("entries match the shape"))
    })
}

fn semimodule(cfg: &SuiteConfig, seed: u64, probe: &mut Probe) {
    let sr = cfg.semiring;
    let mut rng = gen::rng(seed);
    let shape = random_shape(&mut rng, 8);
    let [t, t1, t2, t3] = [(); 4].map(|_| vector(sr, &mut rng, &shape));
    let (a, b) = (random_scalar(&mut rng, sr), random_scalar(&mut rng, sr));
    let (ab, a_plus_b) = match (scalar_mul(&a, &b), scalar_add(&a, &b)) {
        (Ok(ab), Ok(s)) => (ab, s),
        _ => unreachable!("scalars come from one semiring"),
    };
    let sum = Term::sum;
    let prod = |s: &Scalar, t: &Term| Term::prod(s.clone(), t.clone());
    let c = |t: &Term| t.clone();
    let laws: [(Term, Term); 7] = [
        (sum(sum(c(&t1), c(&t2)), c(&t3)), sum(c(&t1), sum(c(&t2), c(&t3)))),
        (sum(c(&t1), c(&t2)), sum(c(&t2), c(&t1))),
        (sum(c(&t), zero_term(&shape, sr)), c(&t)),
        (prod(&a, &prod(&b, &t)), prod(&ab, &t)),
        (prod(&sr.one(), &t), c(&t)),
        (prod(&a, &sum(c(&t1), c(&t2))), sum(prod(&a, &t1), prod(&a, &t2))),
        (prod(&a_plus_b, &t), sum(prod(&a, &t), prod(&b, &t))),
    ];
    for (law, (lhs, rhs)) in LAWS.iter().zip(laws) {
        let outcome = match equiv(&lhs, &rhs, cfg.max_steps) {
            Ok(true) => Ok(()),
            Ok(false) => Err(format!("{lhs}\nis not equivalent to\n{rhs}")),
            Err(e) => Err(e.to_string()),
        };
        probe.record(law, &lhs, outcome);
    }
}

/// An instance of the linearity equations: `x:A ⊢ t : B` with `B` a vector
/// type, two closed arguments and a scalar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearityInstance {
    pub t: Term,
    pub a_ty: Prop,
    pub b_ty: Prop,
    pub u1: Term,
    pub u2: Term,
    pub scalar: Scalar,
    /// Set when `t` is built around a compiled matrix.
    pub matrix: Option<DenseMat>,
}

const X: &str = "x";

fn random_matrix(semiring: Semiring, rng: &mut impl Rng) -> DenseMat {
    let (dom, cod) = (random_shape(rng, 3), random_shape(rng, 3));
    let rows = (0..cod.dim())
        .map(|_| (0..dom.dim()).map(|_| random_scalar(rng, semiring)).collect())
        .collect();
    DenseMat::with_shapes(rows, dom, cod).expect("dimensions match the shapes")
}

fn random_vec(semiring: Semiring, rng: &mut impl Rng, shape: &VShape) -> DenseVec {
    let entries = (0..shape.dim()).map(|_| random_scalar(rng, semiring)).collect();
    DenseVec::new(entries, shape.clone()).expect("entries match the shape")
}

/// Wraps `x:A ⊢ t : B` in a construct that keeps its type and context.
fn wrap(semiring: Semiring, rng: &mut impl Rng, t: Term, a_ty: &Prop, b_ty: &Prop) -> Term {
    match rng.gen_range(0..4) {
        // η-expansion at the free variable
        0 => Term::app(Term::lam(X, a_ty.clone(), t), Term::var(X)),
        1 => Term::elim_with1(Term::pair(t.clone(), t), "y", b_ty.clone(), Term::var("y")),
        2 => Term::prod(random_scalar(rng, semiring), t),
        _ => {
            let id = Term::tlam("X", Term::lam("y", Prop::var("X"), Term::var("y")));
            Term::app(Term::tapp(id, b_ty.clone()), t)
        }
    }
}

/// A random instance: a compiled matrix applied to `x`, a combination
/// `a . t1 + t2` of generated terms, or a single generated term, under zero
/// to two random wrappers.
pub fn linearity_instance(semiring: Semiring, seed: u64) -> LinearityInstance {
    let mut rng = gen::rng(seed);
    let cfg = GenConfig::new(semiring).linear_fragment().max_size(40);
    let mut pick = rng.gen_range(0..3);
    loop {
        let (t, a_ty, b_ty, matrix) = if pick == 0 {
            let m = random_matrix(semiring, &mut rng);
            let t = Term::app(matrix_to_term(&m), Term::var(X));
            (t, m.domain().to_prop(), m.codomain().to_prop(), Some(m))
        } else {
            let a_ty = random_type(&cfg, rng.gen());
            let b_ty = random_shape(&mut rng, 4).to_prop();
            let ctx = TypingCtx::empty().with_linear(X, a_ty.clone());
            let mut term = || term_of_type(&cfg, rng.gen(), &ctx, &b_ty);
            let t = match (pick, term(), term()) {
                (1, Some(t1), Some(t2)) => Term::sum(Term::prod(random_scalar(&mut gen::rng(seed), semiring), t1), t2),
                (_, Some(t), _) => t,
                _ => {
                    pick = 0;
                    continue;
                }
            };
            (t, a_ty, b_ty, None)
        };
        let mut t = t;
        for _ in 0..rng.gen_range(0..=2) {
            t = wrap(semiring, &mut rng, t, &a_ty, &b_ty);
        }
        let argument = |rng: &mut ChaCha8Rng| match &matrix {
            Some(m) => Some(vec_to_term(&random_vec(semiring, rng, m.domain()))),
            None => term_of_type(&cfg, rng.gen(), &TypingCtx::empty(), &a_ty),
        };
        let (Some(u1), Some(u2)) = (argument(&mut rng), argument(&mut rng)) else {
            pick = 0;
            continue;
        };
        return LinearityInstance {
            t,
            a_ty,
            b_ty,
            u1,
            u2,
            scalar: random_scalar(&mut rng, semiring),
            matrix,
        };
    }
}

fn linearity(cfg: &SuiteConfig, seed: u64, probe: &mut Probe) {
    let sr = cfg.semiring;
    let inst = linearity_instance(sr, seed);
    let outcome = check_linearity(&inst.t, X, &inst.a_ty, &inst.b_ty, &inst.u1, &inst.u2, &inst.scalar, cfg.max_steps)
        .map_err(|e| e.to_string())
        .and_then(|r| {
            if r.holds() {
                Ok(())
            } else {
                Err(format!(
                    "u1 = {}, u2 = {}, a = {}\nsum: {} vs {}\nscaling: {} vs {}",
                    inst.u1,
                    inst.u2,
                    inst.scalar,
                    r.additivity.left,
                    r.additivity.right,
                    r.homogeneity.left,
                    r.homogeneity.right
                ))
            }
        });
    probe.record("linearity", &inst.t, outcome);
    if let Some(m) = &inst.matrix {
        let mut rng = gen::rng(seed ^ 0x6d61_7472);
        let outcome = matrix_is_linear(m, &mut rng, cfg.max_steps);
        probe.record("linearity.matrix", &inst.t, outcome);
    }
}

/// `F(u) = M ū` read back as a vector is additive, homogeneous and agrees
/// with the dense product.
fn matrix_is_linear(m: &DenseMat, rng: &mut impl Rng, max_steps: usize) -> Result<(), String> {
    let sr = m.semiring();
    let f = matrix_to_term(m);
    let apply = |v: &DenseVec| {
        term_to_vec(&Term::app(f.clone(), vec_to_term(v)), m.codomain(), max_steps).map_err(|e| e.to_string())
    };
    let u = random_vec(sr, rng, m.domain());
    let v = random_vec(sr, rng, m.domain());
    let a = random_scalar(rng, sr);
    let err = |e: crate::encode::EncodeError| e.to_string();
    let (fu, fv) = (apply(&u)?, apply(&v)?);
    let checks = [
        ("F(u + v) = F(u) + F(v)", apply(&u.add(&v).map_err(err)?)?, fu.add(&fv).map_err(err)?),
        ("F(a u) = a F(u)", apply(&u.scale(&a).map_err(err)?)?, fu.scale(&a).map_err(err)?),
        ("F(u) = M u", fu.clone(), mat_vec(m, &u).map_err(err)?),
    ];
    for (what, left, right) in checks {
        if left != right {
            return Err(format!("{what} fails for u = {u}, v = {v}, a = {a}: {left} vs {right}"));
        }
    }
    Ok(())
}

fn measure(cfg: &SuiteConfig, seed: u64, probe: &mut Probe) {
    let s = corpus_sample(cfg.semiring, seed, true);
    let outcome = s.term.measure().map_err(|e| e.to_string()).and_then(|mu| {
        for r in reducts(&s.term, Mode::Standard) {
            let after = r.term.measure().map_err(|e| e.to_string())?;
            if after > mu {
                return Err(format!(
                    "{} at {} raises μ from {mu} to {after}: {}",
                    r.rule,
                    format_position(&r.position),
                    r.term
                ));
            }
        }
        Ok(())
    });
    probe.record("measure.monotone", &s.term, outcome);

    let mut rng = gen::rng(seed ^ 0x6465_636f);
    let gcfg = GenConfig::new(cfg.semiring).linear_fragment().max_size(40);
    let c = random_type(&gcfg, rng.gen());
    let other = random_type(&gcfg, rng.gen());
    let goal = match rng.gen_range(0..4) {
        0 => c.clone(),
        1 => Prop::tensor(c.clone(), other),
        2 => Prop::with(c.clone(), c.clone()),
        _ => Prop::lolli(other.clone(), Prop::tensor(other, c.clone())),
    };
    let ctx = TypingCtx::empty().with_linear(X, c.clone());
    let Some(t) = term_of_type(&gcfg, rng.gen(), &ctx, &goal) else {
        return;
    };
    let nf = match normalize(&t, cfg.max_steps) {
        Ok(nf) => nf.term,
        Err(e) => return probe.record("decomposition", &t, Err(e.to_string())),
    };
    let d = match decompose(&nf, X, &c) {
        Ok(d) => d,
        Err(e) => return probe.record("decomposition", &nf, Err(e.to_string())),
    };
    let k = d.context.to_term();
    let outcome = if d.context.plug(&d.head) != nf {
        Err(format!("plugging {} into {k} gives {}", d.head, d.context.plug(&d.head)))
    } else if HeadKind::of(&d.head) != Some(d.kind) {
        Err(format!("head {} is classified as {:?}", d.head, d.kind))
    } else if let Err(e) = check(&TypingCtx::empty().with_linear(HOLE, d.cut_type.clone()), &k, &goal) {
        Err(format!("context {k} does not have type {goal} with _:{}: {e}", d.cut_type))
    } else if let Err(e) = check(&ctx, &d.head, &d.cut_type) {
        Err(format!("head {} does not have type {}: {e}", d.head, d.cut_type))
    } else {
        Ok(())
    };
    probe.record("decomposition", &nf, outcome);
    let outcome = nf.measure().map_err(|e| e.to_string()).and_then(|whole| {
        let parts = (d.context.measure(), d.head.measure().map_err(|e| e.to_string())?);
        if whole == parts.0 + parts.1 {
            Ok(())
        } else {
            Err(format!("μ = {whole} but μ(K) = {} and μ(head) = {}", parts.0, parts.1))
        }
    });
    probe.record("measure.decomposition", &nf, outcome);
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SweepError {
    #[error("expected a closed term of type A -o B with B a vector type, found type `{0}`")]
    NotALinearMap(Prop),
    #[error("the term mentions `!`")]
    OutsideFragment,
    #[error(transparent)]
    IllTyped(#[from] TypeError),
}

/// Checks the linearity equations for `f x`, where `f : A -o B` is closed
/// and `B` is a vector type, on random arguments of `A`.
pub fn linearity_of(f: &Term, cfg: &SuiteConfig) -> Result<Report, SweepError> {
    if !in_linear_fragment(f) {
        return Err(SweepError::OutsideFragment);
    }
    let ty = type_of_closed(f)?;
    let (a_ty, b_ty) = match &ty {
        Prop::Lolli(a, b) if is_v_type(b).is_some() => ((**a).clone(), (**b).clone()),
        _ => return Err(SweepError::NotALinearMap(ty)),
    };
    let t = Term::app(f.clone(), Term::var(X));
    let gcfg = GenConfig::new(cfg.semiring).linear_fragment().max_size(40);
    let a_shape = is_v_type(&a_ty);
    Ok(sweep("linearity", &["linearity"], cfg, |seed, probe| {
        let mut rng = gen::rng(seed);
        let argument = |rng: &mut ChaCha8Rng| match &a_shape {
            Some(s) => Some(vec_to_term(&random_vec(cfg.semiring, rng, s))),
            None => term_of_type(&gcfg, rng.gen(), &TypingCtx::empty(), &a_ty),
        };
        let (Some(u1), Some(u2)) = (argument(&mut rng), argument(&mut rng)) else {
            return;
        };
        let a = random_scalar(&mut rng, cfg.semiring);
        let outcome = check_linearity(&t, X, &a_ty, &b_ty, &u1, &u2, &a, cfg.max_steps)
            .map_err(|e| e.to_string())
            .and_then(|r| {
                if r.holds() {
                    Ok(())
                } else {
                    Err(format!("u1 = {u1}, u2 = {u2}, a = {a}"))
                }
            });
        probe.record("linearity", &t, outcome);
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(semiring: Semiring) -> SuiteConfig {
        SuiteConfig::new(semiring).samples(12).seed(3)
    }

    #[test]
    fn suite_names_round_trip() {
        for &s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>(), Ok(s));
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn every_suite_passes_a_few_samples() {
        for &suite in Suite::ALL {
            let report = run(suite, &small(Semiring::Rat));
            assert!(report.ok(), "{report}");
            for p in &report.properties {
                assert!(p.checked > 0 || p.property == "linearity.matrix", "{suite}: {} never checked", p.property);
            }
        }
    }

    #[test]
    fn reports_do_not_depend_on_scheduling() {
        let cfg = small(Semiring::Gauss);
        assert_eq!(run(Suite::Semimodule, &cfg), run(Suite::Semimodule, &cfg));
    }

    #[test]
    fn report_lines() {
        let report = run(Suite::Introduction, &SuiteConfig::new(Semiring::Nat).samples(3).seed(9));
        let text = report.to_string();
        assert!(text.starts_with("PASS introduction seed=9 size="), "{text}");
        let failing = Report {
            name: "x".into(),
            seed: 0,
            samples: 1,
            properties: vec![PropertyResult {
                property: "p",
                checked: 1,
                max_size: 1,
                failures: vec![Failure {
                    property: "p",
                    seed: 41,
                    size: 1,
                    term: "x".into(),
                    detail: "why".into(),
                }],
            }],
        };
        assert_eq!(failing.to_string(), "FAIL p seed=41 size=1\n  term: x\n  why\n");
    }

    #[test]
    fn introduction_table() {
        let t = |s: &str| crate::text::parse_term(s, Semiring::Rat).unwrap();
        let p = |s: &str| crate::text::parse_prop(s).unwrap();
        assert!(conforms(&t("1.*"), &p("1")));
        assert!(conforms(&t("1.* * 2.*"), &p("1 * 1")));
        assert!(conforms(&t("(1.* * 2.*) + (3.* * 4.*)"), &p("1 * 1")));
        assert!(conforms(&t("2 . inl[1](1.*)"), &p("1 (+) 1")));
        assert!(!conforms(&t("<1.*, 2.*>"), &p("1 * 1")));
        assert!(!conforms(&t("1.* + 1.*"), &p("1")));
    }

    #[test]
    fn matrix_functions_are_linear() {
        let sr = Semiring::Rat;
        for seed in 0..10 {
            let mut rng = gen::rng(seed);
            let m = random_matrix(sr, &mut rng);
            assert_eq!(matrix_is_linear(&m, &mut rng, 100_000), Ok(()));
        }
    }

    #[test]
    fn linearity_of_a_matrix_term() {
        let m = DenseMat::from_rows(vec![
            vec![Semiring::Rat.from_u64(1), Semiring::Rat.from_u64(3)],
            vec![Semiring::Rat.from_u64(2), Semiring::Rat.from_u64(4)],
        ])
        .unwrap();
        let report = linearity_of(&matrix_to_term(&m), &small(Semiring::Rat)).unwrap();
        assert!(report.ok(), "{report}");
        assert_eq!(report.properties[0].checked, 12);
        let not_linear = crate::text::parse_term(r"\x:1. <x, 1.*>", Semiring::Rat).unwrap();
        assert!(matches!(
            linearity_of(&not_linear, &small(Semiring::Rat)),
            Err(SweepError::IllTyped(_))
        ));
        let not_vector = crate::text::parse_term(r"\x:1. \y:1. d1(x; y)", Semiring::Rat).unwrap();
        assert!(matches!(
            linearity_of(&not_vector, &small(Semiring::Rat)),
            Err(SweepError::NotALinearMap(_))
        ));
    }
}
