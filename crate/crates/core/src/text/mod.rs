//! Concrete syntax.
//!
//! ```text
//! A ::= X | 1 | 0 | top | A -o A | A * A | A & A | A (+) A | !A | forall X. A
//! t ::= x | t + t | s . t | s.* | d1(t; t) | \x:A. t | t t | t * t
//!     | dx(t; x:A, y:B. t) | <> | d0[C](t) | <t, t> | da1(t; x:A. t)
//!     | da2(t; x:B. t) | inl[B](t) | inr[A](t) | dp(t; x:A. t; y:B. t)
//!     | !t | db(t; x:A. t) | /\X. t | t [A]
//! ```
//!
//! Scalars `s` are bare naturals, `u` in the unit semiring, or any literal
//! of the active semiring in parentheses, such as `(1/2)` or `(2+3i)`.
//! Unicode notation (`⊸ ⊗ ⊕ ⊤ ∀ λ Λ ⟨⟩ ⋆ ⊞ • δ₁ δ⊗ δ₀ δ&¹ δ&² δ⊕ δ!`) is
//! accepted on input. `#` starts a comment.

mod parse;
mod print;

use std::fmt;

use thiserror::Error;

use crate::semiring::{Scalar, Semiring};
use crate::syntax::{Name, Prop, Term};

use parse::Parser;
pub use print::{print_matrix, print_prop, print_term, print_vector};

pub(crate) const RESERVED: [&str; 14] = [
    "def", "defprop", "main", "d1", "dx", "d0", "da1", "da2", "dp", "db", "inl", "inr", "top", "forall",
];

/// A region of the source text. Lines and columns are 1-based; columns
/// count characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
}

impl SourceSpan {
    pub(crate) fn locate(src: &str, start: usize, end: usize) -> Self {
        let before = &src[..start];
        let line = before.matches('\n').count() + 1;
        let line_start = before.rfind('\n').map_or(0, |i| i + 1);
        let column = src[line_start..start].chars().count() + 1;
        SourceSpan {
            start,
            end: end.max(start),
            line,
            column,
        }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: expected {}, found {found}", .expected.join(" or "))]
pub struct ParseError {
    pub span: SourceSpan,
    pub expected: Vec<String>,
    pub found: String,
}

fn whole<T>(src: &str, semiring: Semiring, f: impl FnOnce(&mut Parser) -> Result<T, ParseError>) -> Result<T, ParseError> {
    let mut p = Parser::new(src, semiring);
    let out = f(&mut p)?;
    p.finish()?;
    Ok(out)
}

pub fn parse_prop(src: &str) -> Result<Prop, ParseError> {
    whole(src, Semiring::Rat, |p| p.prop())
}

/// Parses a term whose scalar literals belong to `semiring`.
pub fn parse_term(src: &str, semiring: Semiring) -> Result<Term, ParseError> {
    whole(src, semiring, |p| p.term())
}

/// Parses a typing context `x:A, y:B`.
pub fn parse_ctx(src: &str) -> Result<Vec<(Name, Prop)>, ParseError> {
    whole(src, Semiring::Rat, |p| p.context())
}

/// Parses `[a, b, c]`.
pub fn parse_vector(src: &str, semiring: Semiring) -> Result<Vec<Scalar>, ParseError> {
    whole(src, semiring, |p| p.scalar_list())
}

/// Parses a row-major matrix `[[a, c], [b, d]]`. Rows must have equal length.
pub fn parse_matrix(src: &str, semiring: Semiring) -> Result<Vec<Vec<Scalar>>, ParseError> {
    let rows = whole(src, semiring, |p| p.matrix())?;
    if rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(ParseError {
            span: SourceSpan::locate(src, 0, src.len()),
            expected: vec!["rows of equal length".into()],
            found: format!("rows of lengths {:?}", rows.iter().map(Vec::len).collect::<Vec<_>>()),
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ItemKind {
    Def(Term),
    DefProp(Prop),
    Main(Term),
}

/// One top-level item of a `.ls2` file, already expanded: references to
/// earlier definitions have been substituted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Item {
    pub name: Name,
    pub kind: ItemKind,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Program {
    pub items: Vec<Item>,
}

impl Program {
    pub fn main(&self) -> Option<&Term> {
        self.items.iter().find_map(|i| match &i.kind {
            ItemKind::Main(t) => Some(t),
            _ => None,
        })
    }

    pub fn def(&self, name: &str) -> Option<&Term> {
        self.items.iter().find_map(|i| match &i.kind {
            ItemKind::Def(t) if i.name == name => Some(t),
            _ => None,
        })
    }

    /// Term definitions and `main`, in file order.
    pub fn terms(&self) -> impl Iterator<Item = (&Name, &Term, SourceSpan)> {
        self.items.iter().filter_map(|i| match &i.kind {
            ItemKind::Def(t) | ItemKind::Main(t) => Some((&i.name, t, i.span)),
            ItemKind::DefProp(_) => None,
        })
    }
}

/// Parses a `.ls2` file: `def name = term`, `defprop Name = prop` and at
/// most one `main = term`. Later items may refer to earlier ones.
pub fn parse_file(src: &str, semiring: Semiring) -> Result<Program, ParseError> {
    let mut p = Parser::new(src, semiring);
    let mut program = Program::default();
    while !p.at_end() {
        let start = p.pos();
        let item = if p.keyword("defprop") {
            let name = p.type_ident()?;
            expect_eq(&mut p)?;
            let a = p.prop()?;
            let a = p.expand_prop(a);
            p.props.insert(name.clone(), a.clone());
            (name, ItemKind::DefProp(a))
        } else if p.keyword("def") {
            let name = p.term_ident()?;
            expect_eq(&mut p)?;
            let t = p.term()?;
            let t = p.expand_term(t);
            p.defs.insert(name.clone(), t.clone());
            (name, ItemKind::Def(t))
        } else if p.keyword("main") {
            if program.main().is_some() {
                return Err(p.error(&["a single `main`"]));
            }
            expect_eq(&mut p)?;
            let t = p.term()?;
            ("main".to_string(), ItemKind::Main(p.expand_term(t)))
        } else {
            return Err(p.error(&["`def`", "`defprop`", "`main`"]));
        };
        let span = p.span(start, p.pos());
        program.items.push(Item {
            name: item.0,
            kind: item.1,
            span,
        });
    }
    Ok(program)
}

fn expect_eq(p: &mut Parser) -> Result<(), ParseError> {
    p.expect(&["="])
}

#[cfg(test)]
mod tests;
