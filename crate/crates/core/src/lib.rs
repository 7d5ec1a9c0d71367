//! Second-order intuitionistic linear logic with sums and scalars.
//!
//! Proof terms of this calculus carry an algebraic structure: two terms of
//! the same proposition can be added (`t + u`) and scaled (`a . t`), with
//! scalars drawn from a semiring. The crate provides
//!
//! * [`syntax`]: propositions and proof terms in locally nameless form;
//! * [`typing`]: a linear type checker;
//! * [`reduce`]: the rewrite system, normalization and a confluence scan;
//! * [`encode`]: vectors and matrices as proof terms, Church numerals;
//! * [`linearity`]: elimination contexts and checks that closed terms
//!   act linearly on their argument;
//! * [`text`]: a parser and printer for the concrete syntax;
//! * [`gen`]: seeded generation of well-typed terms;
//! * [`metatheory`]: randomized property suites built on the generator;
//! * [`cli`]: the `ls2` command line.

pub mod cli;
pub mod encode;
pub mod gen;
pub mod linearity;
pub mod metatheory;
pub mod reduce;
pub mod semiring;
pub mod syntax;
pub mod text;
pub mod typing;

pub use reduce::{normalize, step, Mode, RuleId};
pub use semiring::{Scalar, Semiring};
pub use syntax::{Binder, Hint, Name, Prop, Term, Var};
pub use text::{parse_prop, parse_term};
pub use typing::{check, infer, TypeError, TypingCtx};
