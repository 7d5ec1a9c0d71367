//! Scannerless recursive-descent parser.

use std::collections::HashMap;

use crate::semiring::{Scalar, Semiring};
use crate::syntax::{Name, Prop, Term};

use super::{ParseError, SourceSpan, RESERVED};

type PResult<T> = Result<T, ParseError>;

pub(crate) struct Parser<'a> {
    src: &'a str,
    pos: usize,
    semiring: Semiring,
    pub(crate) defs: HashMap<Name, Term>,
    pub(crate) props: HashMap<Name, Prop>,
}

fn ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn scalar_char(c: char) -> bool {
    c.is_ascii_digit() || matches!(c, '/' | '+' | '-' | 'i' | 'u' | ' ')
}

impl<'a> Parser<'a> {
    pub(crate) fn new(src: &'a str, semiring: Semiring) -> Self {
        Parser {
            src,
            pos: 0,
            semiring,
            defs: HashMap::new(),
            props: HashMap::new(),
        }
    }

    pub(crate) fn span(&self, start: usize, end: usize) -> SourceSpan {
        SourceSpan::locate(self.src, start, end)
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub(crate) fn ws(&mut self) {
        loop {
            let r = self.rest();
            let trimmed = r.trim_start();
            self.pos += r.len() - trimmed.len();
            if trimmed.starts_with('#') {
                let line = trimmed.find('\n').unwrap_or(trimmed.len());
                self.pos += line;
            } else {
                break;
            }
        }
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.ws();
        self.pos == self.src.len()
    }

    fn peek(&mut self) -> Option<char> {
        self.ws();
        self.rest().chars().next()
    }

    fn at(&mut self, s: &str) -> bool {
        self.ws();
        self.rest().starts_with(s)
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.at(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn eat_any(&mut self, alts: &[&str]) -> bool {
        alts.iter().any(|s| self.eat(s))
    }

    fn found(&mut self) -> String {
        self.ws();
        match self.rest().chars().next() {
            None => "end of input".to_string(),
            Some(c) if ident_start(c) => {
                let end = self.rest().find(|c: char| !ident_char(c)).unwrap_or(self.rest().len());
                format!("`{}`", &self.rest()[..end])
            }
            Some(c) => format!("`{c}`"),
        }
    }

    pub(crate) fn error(&mut self, expected: &[&str]) -> ParseError {
        let found = self.found();
        let len = self.rest().chars().next().map_or(0, char::len_utf8);
        ParseError {
            span: self.span(self.pos, self.pos + len),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found,
        }
    }

    pub(crate) fn expect(&mut self, alts: &[&str]) -> PResult<()> {
        if self.eat_any(alts) {
            Ok(())
        } else {
            Err(self.error(&[alts[0]]))
        }
    }

    /// Next identifier, without consuming it.
    fn peek_ident(&mut self) -> Option<&'a str> {
        self.ws();
        let r = self.rest();
        if !r.starts_with(ident_start) {
            return None;
        }
        let end = r.find(|c: char| !ident_char(c)).unwrap_or(r.len());
        Some(&r[..end])
    }

    /// Consumes the keyword `kw` when it is a whole identifier.
    pub(crate) fn keyword(&mut self, kw: &str) -> bool {
        if self.peek_ident() == Some(kw) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    pub(crate) fn term_ident(&mut self) -> PResult<Name> {
        match self.peek_ident() {
            Some(id) if !id.starts_with(|c: char| c.is_ascii_uppercase()) && !RESERVED.contains(&id) => {
                self.pos += id.len();
                Ok(id.to_string())
            }
            _ => Err(self.error(&["term variable"])),
        }
    }

    pub(crate) fn type_ident(&mut self) -> PResult<Name> {
        match self.peek_ident() {
            Some(id) if id.starts_with(|c: char| c.is_ascii_uppercase()) => {
                self.pos += id.len();
                Ok(id.to_string())
            }
            _ => Err(self.error(&["type variable"])),
        }
    }

    // ---------------------------------------------------------------
    // Propositions

    pub(crate) fn prop(&mut self) -> PResult<Prop> {
        if self.keyword("forall") || self.eat("∀") {
            let x = self.type_ident()?;
            self.expect(&["."])?;
            let body = self.prop()?;
            return Ok(Prop::forall(&x, body));
        }
        let left = self.prop_binary()?;
        if self.eat_any(&["-o", "⊸"]) {
            let right = self.prop()?;
            return Ok(Prop::lolli(left, right));
        }
        Ok(left)
    }

    fn binary_op(&mut self) -> Option<(&'static str, usize)> {
        self.ws();
        let r = self.rest();
        for (tok, name) in [("*", "*"), ("⊗", "*"), ("&", "&"), ("(+)", "(+)"), ("⊕", "(+)")] {
            if r.starts_with(tok) {
                return Some((name, tok.len()));
            }
        }
        None
    }

    fn prop_binary(&mut self) -> PResult<Prop> {
        let mut left = self.prop_unary()?;
        let mut op: Option<&'static str> = None;
        while let Some((name, len)) = self.binary_op() {
            if op.is_some_and(|o| o != name) {
                return Err(self.error(&[op.unwrap(), "parentheses to mix connectives"]));
            }
            op = Some(name);
            self.pos += len;
            let right = self.prop_unary()?;
            left = match name {
                "*" => Prop::tensor(left, right),
                "&" => Prop::with(left, right),
                _ => Prop::plus(left, right),
            };
        }
        Ok(left)
    }

    fn prop_unary(&mut self) -> PResult<Prop> {
        if self.eat("!") {
            return Ok(Prop::bang(self.prop_unary()?));
        }
        self.prop_atom()
    }

    fn prop_atom(&mut self) -> PResult<Prop> {
        if self.at("(+)") {
            return Err(self.error(&["proposition"]));
        }
        if self.eat("(") {
            let p = self.prop()?;
            self.expect(&[")"])?;
            return Ok(p);
        }
        if self.eat("1") {
            return Ok(Prop::One);
        }
        if self.eat("0") {
            return Ok(Prop::Zero);
        }
        if self.keyword("top") || self.eat("⊤") {
            return Ok(Prop::Top);
        }
        if let Some(id) = self.peek_ident() {
            if id.starts_with(|c: char| c.is_ascii_uppercase()) {
                self.pos += id.len();
                return Ok(Prop::var(id));
            }
        }
        Err(self.error(&["proposition"]))
    }

    // ---------------------------------------------------------------
    // Terms

    pub(crate) fn term(&mut self) -> PResult<Term> {
        if let Some(t) = self.binder_form()? {
            return Ok(t);
        }
        let mut left = self.term_tensor()?;
        while self.eat_any(&["+", "⊞"]) {
            let right = self.term_tensor()?;
            left = Term::sum(left, right);
        }
        Ok(left)
    }

    /// `\x:A. t` and `/\X. t`, which extend as far right as possible.
    fn binder_form(&mut self) -> PResult<Option<Term>> {
        if self.eat_any(&["/\\", "Λ"]) {
            let x = self.type_ident()?;
            self.expect(&["."])?;
            let body = self.term()?;
            return Ok(Some(Term::tlam(&x, body)));
        }
        if self.eat_any(&["\\", "λ"]) {
            let x = self.term_ident()?;
            self.expect(&[":", "^"])?;
            let a = self.prop()?;
            self.expect(&["."])?;
            let body = self.term()?;
            return Ok(Some(Term::lam(&x, a, body)));
        }
        Ok(None)
    }

    fn term_tensor(&mut self) -> PResult<Term> {
        let mut left = self.term_prefix()?;
        loop {
            if self.at("*") || self.at("⊗") {
                self.eat_any(&["*", "⊗"]);
                let right = self.term_prefix()?;
                left = Term::tensor(left, right);
            } else {
                return Ok(left);
            }
        }
    }

    /// Recognises a scalar literal followed by `.` or `•` without consuming
    /// it. Returns the literal text and the position after the separator.
    fn scalar_prefix(&mut self) -> Option<(usize, &'a str, usize)> {
        self.ws();
        let start = self.pos;
        let r = self.rest();
        let (text, after) = if r.starts_with(|c: char| c.is_ascii_digit()) {
            let end = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
            (&r[..end], end)
        } else if r.starts_with('u') && !r[1..].starts_with(ident_char) {
            (&r[..1], 1)
        } else if let Some(inner) = r.strip_prefix('(') {
            let close = inner.find(|c: char| !scalar_char(c))?;
            if !inner[close..].starts_with(')') || inner[..close].trim().is_empty() {
                return None;
            }
            (&inner[..close], close + 2)
        } else {
            return None;
        };
        let tail = &r[after..];
        let trimmed = tail.trim_start();
        let gap = tail.len() - trimmed.len();
        for sep in [".", "•"] {
            if trimmed.starts_with(sep) {
                return Some((start, text, start + after + gap + sep.len()));
            }
        }
        None
    }

    fn scalar(&mut self, start: usize, text: &str) -> PResult<Scalar> {
        self.semiring.parse(text).map_err(|e| ParseError {
            span: self.span(start, start + text.len()),
            expected: vec![format!("{} literal", self.semiring)],
            found: format!("`{}` ({e})", text.trim()),
        })
    }

    fn star_follows(&self, after: usize) -> bool {
        let r = self.src[after..].trim_start();
        r.starts_with('*') || r.starts_with('⋆')
    }

    fn term_prefix(&mut self) -> PResult<Term> {
        if let Some((start, text, after)) = self.scalar_prefix() {
            if !self.star_follows(after) {
                let a = self.scalar(start, text)?;
                self.pos = after;
                let t = self.term_prefix_or_binder()?;
                return Ok(Term::prod(a, t));
            }
        }
        if self.eat("!") {
            let t = self.term_prefix_or_binder()?;
            return Ok(Term::bang(t));
        }
        self.term_app()
    }

    fn term_prefix_or_binder(&mut self) -> PResult<Term> {
        match self.binder_form()? {
            Some(t) => Ok(t),
            None => self.term_prefix(),
        }
    }

    fn term_app(&mut self) -> PResult<Term> {
        let mut head = self.term_atom()?;
        loop {
            if self.at("[") {
                self.eat("[");
                let a = self.prop()?;
                self.expect(&["]"])?;
                head = Term::tapp(head, a);
            } else if self.starts_atom() {
                let arg = self.term_atom()?;
                head = Term::app(head, arg);
            } else {
                return Ok(head);
            }
        }
    }

    fn starts_atom(&mut self) -> bool {
        if let Some((_, _, after)) = self.scalar_prefix() {
            return self.star_follows(after);
        }
        if let Some(id) = self.peek_ident() {
            return !id.starts_with(|c: char| c.is_ascii_uppercase())
                && !matches!(id, "def" | "defprop" | "main" | "top" | "forall");
        }
        matches!(
            self.peek(),
            Some('(' | '<' | '⟨' | '\\' | 'λ' | 'Λ' | 'δ')
        ) || self.at("/\\")
    }

    fn term_atom(&mut self) -> PResult<Term> {
        if let Some((start, text, after)) = self.scalar_prefix() {
            if self.star_follows(after) {
                let a = self.scalar(start, text)?;
                self.pos = after;
                self.eat_any(&["*", "⋆"]);
                return Ok(Term::Star(a));
            }
            return Err(self.error(&["term"]));
        }
        if let Some(t) = self.binder_form()? {
            return Ok(t);
        }
        if self.eat("(") {
            let t = self.term()?;
            self.expect(&[")"])?;
            return Ok(t);
        }
        if self.eat_any(&["<>", "⟨⟩"]) {
            return Ok(Term::Unit);
        }
        if self.eat_any(&["<", "⟨"]) {
            if self.eat_any(&[">", "⟩"]) {
                return Ok(Term::Unit);
            }
            let a = self.term()?;
            self.expect(&[","])?;
            let b = self.term()?;
            self.expect(&[">", "⟩"])?;
            return Ok(Term::pair(a, b));
        }
        if let Some(t) = self.keyword_form()? {
            return Ok(t);
        }
        let name = self.term_ident().map_err(|_| self.error(&["term"]))?;
        Ok(Term::var(name))
    }

    fn keyword_form(&mut self) -> PResult<Option<Term>> {
        const FORMS: [(&str, Option<&str>); 9] = [
            ("d1", Some("δ₁")),
            ("dx", Some("δ⊗")),
            ("d0", Some("δ₀")),
            ("da1", Some("δ&¹")),
            ("da2", Some("δ&²")),
            ("dp", Some("δ⊕")),
            ("db", Some("δ!")),
            ("inl", None),
            ("inr", None),
        ];
        let Some(kw) = FORMS
            .iter()
            .find(|(ascii, uni)| self.keyword(ascii) || uni.is_some_and(|u| self.eat(u)))
            .map(|(ascii, _)| *ascii)
        else {
            return Ok(None);
        };
        let t = match kw {
            "d0" | "inl" | "inr" => {
                self.expect(&["["])?;
                let a = self.prop()?;
                self.expect(&["]"])?;
                self.expect(&["("])?;
                let t = self.term()?;
                self.expect(&[")"])?;
                match kw {
                    "d0" => Term::elim_zero(a, t),
                    "inl" => Term::inl(t, a),
                    _ => Term::inr(t, a),
                }
            }
            _ => {
                self.expect(&["("])?;
                let t = self.term()?;
                self.expect(&[";"])?;
                let r = match kw {
                    "d1" => Term::elim_one(t, self.term()?),
                    "dx" => {
                        let (x, a) = self.typed_binder()?;
                        self.expect(&[","])?;
                        let (y, b) = self.typed_binder()?;
                        self.expect(&["."])?;
                        let body = self.term()?;
                        if x == y {
                            return Err(self.error(&["distinct binder names"]));
                        }
                        Term::elim_tensor(t, &x, a, &y, b, body)
                    }
                    "dp" => {
                        let (x, a) = self.typed_binder()?;
                        self.expect(&["."])?;
                        let u = self.term()?;
                        self.expect(&[";"])?;
                        let (y, b) = self.typed_binder()?;
                        self.expect(&["."])?;
                        let v = self.term()?;
                        Term::elim_plus(t, &x, a, u, &y, b, v)
                    }
                    _ => {
                        let (x, a) = self.typed_binder()?;
                        self.expect(&["."])?;
                        let body = self.term()?;
                        match kw {
                            "da1" => Term::elim_with1(t, &x, a, body),
                            "da2" => Term::elim_with2(t, &x, a, body),
                            _ => Term::elim_bang(t, &x, a, body),
                        }
                    }
                };
                self.expect(&[")"])?;
                r
            }
        };
        Ok(Some(t))
    }

    fn typed_binder(&mut self) -> PResult<(Name, Prop)> {
        let x = self.term_ident()?;
        self.expect(&[":", "^"])?;
        let a = self.prop()?;
        Ok((x, a))
    }

    // ---------------------------------------------------------------
    // Vectors and matrices

    pub(crate) fn scalar_list(&mut self) -> PResult<Vec<Scalar>> {
        self.expect(&["["])?;
        let mut out = Vec::new();
        loop {
            self.ws();
            let start = self.pos;
            let len = self.rest().find([',', ']']).unwrap_or(self.rest().len());
            let text = &self.src[start..start + len];
            if text.trim().is_empty() {
                return Err(self.error(&["scalar"]));
            }
            let a = self.scalar(start, text.trim_end())?;
            self.pos += len;
            out.push(a);
            if self.eat("]") {
                return Ok(out);
            }
            self.expect(&[","])?;
        }
    }

    pub(crate) fn matrix(&mut self) -> PResult<Vec<Vec<Scalar>>> {
        self.expect(&["["])?;
        let mut rows = vec![self.scalar_list()?];
        while self.eat(",") {
            rows.push(self.scalar_list()?);
        }
        self.expect(&["]"])?;
        Ok(rows)
    }

    /// `x:A, y:B`
    pub(crate) fn context(&mut self) -> PResult<Vec<(Name, Prop)>> {
        let mut out = Vec::new();
        if self.at_end() {
            return Ok(out);
        }
        loop {
            out.push(self.typed_binder()?);
            if !self.eat(",") {
                return Ok(out);
            }
        }
    }

    pub(crate) fn finish(&mut self) -> PResult<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error(&["end of input"]))
        }
    }

    pub(crate) fn pos(&self) -> usize {
        self.pos
    }

    /// Replaces references to earlier `defprop`s.
    pub(crate) fn expand_prop(&self, p: Prop) -> Prop {
        p.free_vars()
            .iter()
            .filter_map(|x| self.props.get(x).map(|b| (x, b)))
            .fold(p, |acc, (x, b)| acc.subst_free(x, b))
    }

    /// Replaces references to earlier `def`s and `defprop`s.
    pub(crate) fn expand_term(&self, t: Term) -> Term {
        let t = t
            .free_type_vars()
            .iter()
            .filter_map(|x| self.props.get(x).map(|b| (x, b)))
            .fold(t, |acc, (x, b)| acc.subst_free_type(x, b));
        t.free_vars()
            .iter()
            .filter_map(|x| self.defs.get(x).map(|u| (x, u)))
            .fold(t.clone(), |acc, (x, u)| acc.subst_free(x, u))
    }
}
