//! Pretty printer. Output uses the ASCII syntax and the fewest parentheses
//! the parser needs; binder names are freshened when they would capture.

use std::collections::BTreeSet;
use std::fmt::{self, Write};

use crate::semiring::Scalar;
use crate::syntax::{Binder, Name, Prop, Term, Var};

use super::RESERVED;

/// Binder names in scope plus the free names a new binder must avoid.
#[derive(Default)]
struct Scope {
    terms: Vec<Name>,
    types: Vec<Name>,
    free_terms: BTreeSet<Name>,
    free_types: BTreeSet<Name>,
}

fn valid_ident(s: &str, upper: bool) -> bool {
    let mut cs = s.chars();
    let Some(c) = cs.next() else { return false };
    let head_ok = if upper {
        c.is_ascii_uppercase()
    } else {
        c.is_ascii_lowercase() || c == '_'
    };
    head_ok
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
        && !RESERVED.contains(&s)
}

impl Scope {
    fn fresh(&self, hint: &str, upper: bool) -> Name {
        let base = if valid_ident(hint, upper) {
            hint.to_string()
        } else if upper {
            "X".to_string()
        } else {
            "x".to_string()
        };
        let taken = |n: &str| {
            if upper {
                self.types.iter().any(|m| m == n) || self.free_types.contains(n)
            } else {
                self.terms.iter().any(|m| m == n) || self.free_terms.contains(n) || n == "u"
            }
        };
        if !taken(&base) {
            return base;
        }
        let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
        (1..).map(|k| format!("{stem}{k}")).find(|n| !taken(n)).unwrap()
    }

    fn term_var(&self, v: &Var) -> String {
        match v {
            Var::Free(n) => n.clone(),
            Var::Bound(i) => match self.terms.len().checked_sub(i + 1) {
                Some(k) => self.terms[k].clone(),
                None => format!("?{i}"),
            },
        }
    }

    fn type_var(&self, v: &Var, depth: &[Name]) -> String {
        match v {
            Var::Free(n) => n.clone(),
            Var::Bound(i) => {
                let all: Vec<&Name> = self.types.iter().chain(depth.iter()).collect();
                match all.len().checked_sub(i + 1) {
                    Some(k) => all[k].clone(),
                    None => format!("?{i}"),
                }
            }
        }
    }
}

fn scalar(out: &mut String, a: &Scalar) {
    if a.is_composite() {
        write!(out, "({a})").unwrap();
    } else {
        write!(out, "{a}").unwrap();
    }
}

// Prop levels: 0 forall, 1 -o, 2 binary connectives, 3 prefix !, 4 atoms.

fn binary_symbol(p: &Prop) -> Option<&'static str> {
    match p {
        Prop::Tensor(..) => Some("*"),
        Prop::With(..) => Some("&"),
        Prop::Plus(..) => Some("(+)"),
        _ => None,
    }
}

fn prop_level(p: &Prop) -> u8 {
    match p {
        Prop::Forall(..) => 0,
        Prop::Lolli(..) => 1,
        Prop::Tensor(..) | Prop::With(..) | Prop::Plus(..) => 2,
        Prop::Bang(_) => 3,
        _ => 4,
    }
}

fn prop(out: &mut String, sc: &mut Scope, inner: &mut Vec<Name>, p: &Prop, level: u8) {
    let paren = prop_level(p) < level;
    if paren {
        out.push('(');
    }
    match p {
        Prop::Var(v) => out.push_str(&sc.type_var(v, inner)),
        Prop::One => out.push('1'),
        Prop::Top => out.push_str("top"),
        Prop::Zero => out.push('0'),
        Prop::Lolli(a, b) => {
            prop(out, sc, inner, a, 2);
            out.push_str(" -o ");
            prop(out, sc, inner, b, 1);
        }
        Prop::Tensor(a, b) | Prop::With(a, b) | Prop::Plus(a, b) => {
            let sym = binary_symbol(p).unwrap();
            let left = if binary_symbol(a) == Some(sym) { 2 } else { 3 };
            prop(out, sc, inner, a, left);
            write!(out, " {sym} ").unwrap();
            prop(out, sc, inner, b, 3);
        }
        Prop::Bang(a) => {
            out.push('!');
            prop(out, sc, inner, a, 3);
        }
        Prop::Forall(h, a) => {
            let saved = std::mem::take(&mut sc.types);
            sc.types = saved.iter().chain(inner.iter()).cloned().collect();
            let name = sc.fresh(h.as_str(), true);
            sc.types = saved;
            write!(out, "forall {name}. ").unwrap();
            inner.push(name);
            prop(out, sc, inner, a, 0);
            inner.pop();
        }
    }
    if paren {
        out.push(')');
    }
}

fn annot(out: &mut String, sc: &mut Scope, p: &Prop, level: u8) {
    prop(out, sc, &mut Vec::new(), p, level);
}

// Term levels: 0 binders, 1 `+`, 2 `*`, 3 prefix `s .` and `!`, 4 application, 5 atoms.

fn term_level(t: &Term) -> u8 {
    match t {
        Term::Lam(..) | Term::TLam(..) => 0,
        Term::Sum(..) => 1,
        Term::TensorI(..) => 2,
        Term::Prod(..) | Term::BangI(_) => 3,
        Term::App(..) | Term::TApp(..) => 4,
        _ => 5,
    }
}

fn binder(out: &mut String, sc: &mut Scope, b: &Binder) -> Name {
    let n = sc.fresh(b.hint.as_str(), false);
    write!(out, "{n}:").unwrap();
    annot(out, sc, &b.ty, 1);
    n
}

fn term(out: &mut String, sc: &mut Scope, t: &Term, level: u8) {
    let paren = term_level(t) < level;
    if paren {
        out.push('(');
    }
    match t {
        Term::Var(v) => out.push_str(&sc.term_var(v)),
        Term::Sum(a, b) => {
            term(out, sc, a, 1);
            out.push_str(" + ");
            term(out, sc, b, 2);
        }
        Term::Prod(s, a) => {
            scalar(out, s);
            out.push_str(" . ");
            term(out, sc, a, 3);
        }
        Term::Star(s) => {
            scalar(out, s);
            out.push_str(".*");
        }
        Term::ElimOne(a, b) => {
            out.push_str("d1(");
            term(out, sc, a, 0);
            out.push_str("; ");
            term(out, sc, b, 0);
            out.push(')');
        }
        Term::Lam(b, body) => {
            out.push('\\');
            let n = binder(out, sc, b);
            out.push_str(". ");
            sc.terms.push(n);
            term(out, sc, body, 0);
            sc.terms.pop();
        }
        Term::App(a, b) => {
            term(out, sc, a, 4);
            out.push(' ');
            term(out, sc, b, 5);
        }
        Term::TensorI(a, b) => {
            term(out, sc, a, 2);
            out.push_str(" * ");
            term(out, sc, b, 3);
        }
        Term::ElimTensor(a, x, y, body) => {
            out.push_str("dx(");
            term(out, sc, a, 0);
            out.push_str("; ");
            let nx = binder(out, sc, x);
            sc.terms.push(nx);
            out.push_str(", ");
            let ny = binder(out, sc, y);
            sc.terms.push(ny);
            out.push_str(". ");
            term(out, sc, body, 0);
            sc.terms.truncate(sc.terms.len() - 2);
            out.push(')');
        }
        Term::Unit => out.push_str("<>"),
        Term::ElimZero(c, a) => {
            out.push_str("d0[");
            annot(out, sc, c, 0);
            out.push_str("](");
            term(out, sc, a, 0);
            out.push(')');
        }
        Term::Pair(a, b) => {
            out.push('<');
            term(out, sc, a, 0);
            out.push_str(", ");
            term(out, sc, b, 0);
            out.push('>');
        }
        Term::ElimWith1(a, x, body) | Term::ElimWith2(a, x, body) | Term::ElimBang(a, x, body) => {
            let kw = match t {
                Term::ElimWith1(..) => "da1",
                Term::ElimWith2(..) => "da2",
                _ => "db",
            };
            write!(out, "{kw}(").unwrap();
            term(out, sc, a, 0);
            out.push_str("; ");
            let n = binder(out, sc, x);
            out.push_str(". ");
            sc.terms.push(n);
            term(out, sc, body, 0);
            sc.terms.pop();
            out.push(')');
        }
        Term::Inl(a, p) | Term::Inr(a, p) => {
            out.push_str(if matches!(t, Term::Inl(..)) { "inl[" } else { "inr[" });
            annot(out, sc, p, 0);
            out.push_str("](");
            term(out, sc, a, 0);
            out.push(')');
        }
        Term::ElimPlus(a, x, l, y, r) => {
            out.push_str("dp(");
            term(out, sc, a, 0);
            for (b, body) in [(x, l), (y, r)] {
                out.push_str("; ");
                let n = binder(out, sc, b);
                out.push_str(". ");
                sc.terms.push(n);
                term(out, sc, body, 0);
                sc.terms.pop();
            }
            out.push(')');
        }
        Term::BangI(a) => {
            out.push('!');
            term(out, sc, a, 3);
        }
        Term::TLam(h, body) => {
            let n = sc.fresh(h.as_str(), true);
            write!(out, "/\\{n}. ").unwrap();
            sc.types.push(n);
            term(out, sc, body, 0);
            sc.types.pop();
        }
        Term::TApp(a, p) => {
            term(out, sc, a, 4);
            out.push_str(" [");
            annot(out, sc, p, 0);
            out.push(']');
        }
    }
    if paren {
        out.push(')');
    }
}

pub fn print_prop(p: &Prop) -> String {
    let mut sc = Scope {
        free_types: p.free_vars(),
        ..Scope::default()
    };
    let mut out = String::new();
    prop(&mut out, &mut sc, &mut Vec::new(), p, 0);
    out
}

pub fn print_term(t: &Term) -> String {
    let mut sc = Scope {
        free_terms: t.free_vars(),
        free_types: t.free_type_vars(),
        ..Scope::default()
    };
    let mut out = String::new();
    term(&mut out, &mut sc, t, 0);
    out
}

impl fmt::Display for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_prop(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self))
    }
}

/// `[a, b, c]`
pub fn print_vector(v: &[Scalar]) -> String {
    let items: Vec<String> = v.iter().map(|a| a.to_string()).collect();
    format!("[{}]", items.join(", "))
}

/// `[[a, c], [b, d]]`, row-major.
pub fn print_matrix(rows: &[Vec<Scalar>]) -> String {
    let items: Vec<String> = rows.iter().map(|r| print_vector(r)).collect();
    format!("[{}]", items.join(", "))
}
