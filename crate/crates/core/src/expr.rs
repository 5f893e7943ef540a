//! Canonical text form for multivectors and a parser for the same grammar,
//! plus the system-file format consumed by the command-line tool.
//!
//! Grammar for expressions:
//!
//! ```text
//! expr     ::= ['-'] term (('+' | '-') term)*
//! term     ::= rational? ('*'? factor)*
//! factor   ::= var ('^' nat)?            even primal variable
//!            | gen ('^' gen)*            wedge word, gen ::= fam '^' nat
//!            | '(' mono ')_*'            dual even monomial block
//! rational ::= int ('/' posint)?
//! ```
//!
//! Display names come from a [`Names`] table aligned with the context's
//! families: even variables print by name (`x`, `y'`), odd generators as
//! `fam^i` with 1-based indices joined into wedge words (`f^1^f^2`), and
//! dual even content as a parenthesized monomial (`(x^2)_*`). Dual odd
//! families carry a `*` suffix in the family name itself (`f*^1`).
//!
//! System files:
//!
//! ```text
//! vars x y
//! f1 = x^2 - 1
//! f2 = 3/2*x*y + y^2
//! order 2 1        (optional, 1-based permutation)
//! degree 5         (optional truncation override)
//! seed 42          (optional)
//! ```

use std::cmp::Reverse;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num::{BigInt, One, Signed};

use crate::context::{Context, ContextBuilder};
use crate::mv::{Mv, Q, Term};

/// Per-family display names, aligned with `Context::families`.
#[derive(Debug, Clone)]
pub enum FamilyNames {
    /// Even primal family: one display name per slot.
    Even(Vec<String>),
    /// Even dual family: per-slot names used inside a `(...)_*` block.
    EvenDual(Vec<String>),
    /// Odd family (primal or dual): base name, generators `base^i`.
    Odd(String),
}

#[derive(Debug, Clone)]
pub struct Names {
    pub families: Vec<FamilyNames>,
}

impl Names {
    /// Names for `C(x, f̂_x)`: user variables and the `f` generators.
    pub fn cx(vars: &[String]) -> Names {
        Names {
            families: vec![
                FamilyNames::Even(vars.to_vec()),
                FamilyNames::Odd("f".into()),
            ],
        }
    }

    /// Names for `C(x, y, f̂_x, f̂_y)`: the second even copy prints as `y`
    /// (or `y1`, `y2`, …) when those names are free, matching the classical
    /// Bezoutian notation, and falls back to a prime suffix (`x'`) on
    /// collision; the odd copy prints as `f'`.
    pub fn cxy(vars: &[String]) -> Names {
        let n = vars.len();
        let cand: Vec<String> = if n == 1 {
            vec!["y".into()]
        } else {
            (1..=n).map(|i| format!("y{i}")).collect()
        };
        let primed: Vec<String> = if cand.iter().all(|c| !vars.contains(c)) {
            cand
        } else {
            vars.iter().map(|v| format!("{v}'")).collect()
        };
        Names {
            families: vec![
                FamilyNames::Even(vars.to_vec()),
                FamilyNames::Even(primed),
                FamilyNames::Odd("f".into()),
                FamilyNames::Odd("f'".into()),
            ],
        }
    }

    /// Names for the dual complex `C(x_*, f̂_*^x)`.
    pub fn dx(vars: &[String]) -> Names {
        Names {
            families: vec![
                FamilyNames::EvenDual(vars.to_vec()),
                FamilyNames::Odd("f*".into()),
            ],
        }
    }
}

/// A parse failure with 1-based position information.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for ParseError {}

// ---------------------------------------------------------------------
// serialization

fn format_coeff(c: &Q) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn push_factor(out: &mut Vec<String>, name: &str, e: u16) {
    if e == 1 {
        out.push(name.to_string());
    } else {
        out.push(format!("{name}^{e}"));
    }
}

/// Serialize in the canonical order: total degree ascending, then
/// exponents descending lexicographically, then wedge word.
pub fn format_mv(mv: &Mv, names: &Names) -> String {
    if mv.is_zero() {
        return "0".into();
    }
    let ctx = &mv.ctx;
    let mut terms: Vec<(&Term, &Q)> = mv.terms.iter().collect();
    terms.sort_by_key(|(t, _)| {
        (
            t.total_degree(),
            Reverse(t.exps.clone()),
            t.wedge.clone(),
        )
    });
    let mut out = String::new();
    for (i, (t, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let mag = if neg { -(*c).clone() } else { (*c).clone() };
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let mut factors: Vec<String> = Vec::new();
        for (fi, fam) in names.families.iter().enumerate() {
            match fam {
                FamilyNames::Even(slot_names) => {
                    let range = ctx.even_range(fi);
                    for (k, name) in slot_names.iter().enumerate() {
                        let e = t.exps[range.start + k];
                        if e > 0 {
                            push_factor(&mut factors, name, e);
                        }
                    }
                }
                FamilyNames::EvenDual(slot_names) => {
                    let range = ctx.even_range(fi);
                    let mut inner: Vec<String> = Vec::new();
                    for (k, name) in slot_names.iter().enumerate() {
                        let e = t.exps[range.start + k];
                        if e > 0 {
                            push_factor(&mut inner, name, e);
                        }
                    }
                    if !inner.is_empty() {
                        factors.push(format!("({})_*", inner.join("*")));
                    }
                }
                FamilyNames::Odd(_) => {}
            }
        }
        if !t.wedge.is_empty() {
            let gens: Vec<String> = t
                .wedge
                .iter()
                .map(|&(fi, gi)| match &names.families[fi as usize] {
                    FamilyNames::Odd(base) => format!("{base}^{}", gi + 1),
                    _ => unreachable!("wedge entry in even family"),
                })
                .collect();
            factors.push(gens.join("^"));
        }
        if factors.is_empty() {
            out.push_str(&format_coeff(&mag));
        } else {
            if !mag.is_one() {
                out.push_str(&format_coeff(&mag));
                out.push('*');
            }
            out.push_str(&factors.join("*"));
        }
    }
    out
}

// ---------------------------------------------------------------------
// tokenizer

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    /// The closing `)_*` of a dual even block.
    RParenDual,
    Eq,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn tokenize(text: &str, line: usize) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let col = i + 1;
        let c = chars[i];
        match c {
            ' ' | '\t' => {
                i += 1;
            }
            '+' => {
                toks.push(Spanned { tok: Tok::Plus, line, col });
                i += 1;
            }
            '-' => {
                toks.push(Spanned { tok: Tok::Minus, line, col });
                i += 1;
            }
            '*' => {
                toks.push(Spanned { tok: Tok::Star, line, col });
                i += 1;
            }
            '^' => {
                toks.push(Spanned { tok: Tok::Caret, line, col });
                i += 1;
            }
            '/' => {
                toks.push(Spanned { tok: Tok::Slash, line, col });
                i += 1;
            }
            '(' => {
                toks.push(Spanned { tok: Tok::LParen, line, col });
                i += 1;
            }
            ')' => {
                if chars.get(i + 1) == Some(&'_') && chars.get(i + 2) == Some(&'*') {
                    toks.push(Spanned { tok: Tok::RParenDual, line, col });
                    i += 3;
                } else {
                    return Err(ParseError {
                        line,
                        col,
                        msg: "expected `)_*` to close a dual block".into(),
                    });
                }
            }
            '=' => {
                toks.push(Spanned { tok: Tok::Eq, line, col });
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                toks.push(Spanned {
                    tok: Tok::Num(BigInt::from_str(&s).expect("digits")),
                    line,
                    col,
                });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
                {
                    i += 1;
                }
                // a trailing `*` belongs to the identifier only when it is
                // the dual marker of a generator family (`f*^1`), which is
                // recognizable by the `^` that must follow
                if chars.get(i) == Some(&'*') && chars.get(i + 1) == Some(&'^') {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                toks.push(Spanned { tok: Tok::Ident(s), line, col });
            }
            other => {
                return Err(ParseError {
                    line,
                    col,
                    msg: format!("unexpected character `{other}`"),
                });
            }
        }
    }
    Ok(toks)
}

// ---------------------------------------------------------------------
// expression parser

enum Resolved {
    EvenVar { family: usize, slot: usize, dual: bool },
    OddFam { family: usize },
}

struct Scope {
    ctx: Arc<Context>,
    table: Vec<(String, Resolved)>,
}

impl Scope {
    fn new(ctx: &Arc<Context>, names: &Names) -> Scope {
        let mut table = Vec::new();
        for (fi, fam) in names.families.iter().enumerate() {
            match fam {
                FamilyNames::Even(slots) | FamilyNames::EvenDual(slots) => {
                    let dual = matches!(fam, FamilyNames::EvenDual(_));
                    for (k, name) in slots.iter().enumerate() {
                        table.push((
                            name.clone(),
                            Resolved::EvenVar { family: fi, slot: k, dual },
                        ));
                    }
                }
                FamilyNames::Odd(base) => {
                    table.push((base.clone(), Resolved::OddFam { family: fi }));
                }
            }
        }
        Scope { ctx: ctx.clone(), table }
    }

    fn lookup(&self, name: &str) -> Option<&Resolved> {
        self.table.iter().find(|(n, _)| n == name).map(|(_, r)| r)
    }
}

struct P<'a> {
    toks: &'a [Spanned],
    pos: usize,
    line: usize,
}

impl<'a> P<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|s| (s.line, s.col))
            .unwrap_or((self.line, self.toks.last().map(|s| s.col + 1).unwrap_or(1)))
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError { line, col, msg: msg.into() }
    }

    fn bump(&mut self) -> Option<&Tok> {
        let t = self.toks.get(self.pos).map(|s| &s.tok);
        self.pos += 1;
        t
    }

    fn expect_nat(&mut self) -> Result<u16, ParseError> {
        match self.peek() {
            Some(Tok::Num(n)) if !n.is_negative() => {
                let v: u16 = n
                    .to_string()
                    .parse()
                    .map_err(|_| self.err("exponent out of range"))?;
                self.bump();
                Ok(v)
            }
            _ => Err(self.err("expected a natural number")),
        }
    }

    /// `rational ::= int ('/' posint)?` — the integer part was already
    /// consumed by the caller.
    fn rational_tail(&mut self, numer: BigInt) -> Result<Q, ParseError> {
        if self.peek() == Some(&Tok::Slash) {
            self.bump();
            match self.bump().cloned() {
                Some(Tok::Num(d)) if d.is_positive() => Ok(Q::new(numer, d)),
                _ => Err(self.err("expected a positive denominator")),
            }
        } else {
            Ok(Q::from(numer))
        }
    }

    /// One `term`: an optional rational times factors.
    fn term(&mut self, scope: &Scope) -> Result<Mv, ParseError> {
        let mut acc = Mv::one(&scope.ctx);
        let mut any = false;
        if let Some(Tok::Num(n)) = self.peek().cloned() {
            self.bump();
            let c = self.rational_tail(n)?;
            acc = acc.scale(&c);
            any = true;
        }
        loop {
            if self.peek() == Some(&Tok::Star) {
                self.bump();
                let f = self.factor(scope)?;
                acc = acc.mul(&f).map_err(|e| self.err(e.to_string()))?;
                any = true;
                continue;
            }
            match self.peek() {
                Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    let f = self.factor(scope)?;
                    acc = acc.mul(&f).map_err(|e| self.err(e.to_string()))?;
                    any = true;
                }
                _ => break,
            }
        }
        if !any {
            return Err(self.err("expected a term"));
        }
        Ok(acc)
    }

    fn factor(&mut self, scope: &Scope) -> Result<Mv, ParseError> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.bump();
                let mut acc = Mv::one(&scope.ctx);
                loop {
                    match self.peek().cloned() {
                        Some(Tok::Ident(_)) => {
                            let f = self.dual_var(scope)?;
                            acc = acc.mul(&f).map_err(|e| self.err(e.to_string()))?;
                        }
                        Some(Tok::Star) => {
                            self.bump();
                        }
                        Some(Tok::RParenDual) => {
                            self.bump();
                            return Ok(acc);
                        }
                        _ => return Err(self.err("expected a dual monomial")),
                    }
                }
            }
            Some(Tok::Ident(name)) => {
                match scope.lookup(&name) {
                    None => Err(self.err(format!("undeclared variable `{name}`"))),
                    Some(&Resolved::EvenVar { family, slot, dual }) => {
                        if dual {
                            return Err(self.err(format!(
                                "dual variable `{name}` must appear inside `(...)_*`"
                            )));
                        }
                        self.bump();
                        let base = Mv::var_by_name(
                            &scope.ctx,
                            &scope.ctx.families[family].name.clone(),
                            slot,
                        );
                        if self.peek() == Some(&Tok::Caret) {
                            self.bump();
                            let e = self.expect_nat()?;
                            base.pow(e as u32).map_err(|er| self.err(er.to_string()))
                        } else {
                            Ok(base)
                        }
                    }
                    Some(&Resolved::OddFam { .. }) => {
                        // wedge chain gen ('^' gen)*
                        let mut acc = self.wedge_gen(scope)?;
                        while self.peek() == Some(&Tok::Caret) {
                            // lookahead: a caret followed by an identifier
                            // continues the wedge word
                            match self.toks.get(self.pos + 1).map(|s| &s.tok) {
                                Some(Tok::Ident(_)) => {
                                    self.bump();
                                    let g = self.wedge_gen(scope)?;
                                    acc = acc.mul(&g).map_err(|e| self.err(e.to_string()))?;
                                }
                                _ => break,
                            }
                        }
                        Ok(acc)
                    }
                }
            }
            _ => Err(self.err("expected a factor")),
        }
    }

    /// `fam '^' nat` — one odd generator reference.
    fn wedge_gen(&mut self, scope: &Scope) -> Result<Mv, ParseError> {
        let name = match self.bump().cloned() {
            Some(Tok::Ident(n)) => n,
            _ => return Err(self.err("expected a generator family")),
        };
        let family = match scope.lookup(&name) {
            Some(&Resolved::OddFam { family }) => family,
            _ => return Err(self.err(format!("`{name}` is not a generator family"))),
        };
        if self.bump() != Some(&Tok::Caret) {
            return Err(self.err("expected `^<index>` after generator family"));
        }
        let idx = self.expect_nat()?;
        let fam = &scope.ctx.families[family];
        if idx == 0 || idx as usize > fam.arity {
            return Err(self.err(format!(
                "generator index {idx} out of range for `{name}` (1..{})",
                fam.arity
            )));
        }
        Ok(Mv::gen_by_name(
            &scope.ctx,
            &fam.name.clone(),
            idx as usize - 1,
        ))
    }

    /// A variable reference inside a `(...)_*` block.
    fn dual_var(&mut self, scope: &Scope) -> Result<Mv, ParseError> {
        let name = match self.bump().cloned() {
            Some(Tok::Ident(n)) => n,
            _ => return Err(self.err("expected a variable")),
        };
        let (family, slot) = match scope.lookup(&name) {
            Some(&Resolved::EvenVar { family, slot, dual: true }) => (family, slot),
            _ => {
                return Err(self.err(format!(
                    "`{name}` is not a dual variable of this context"
                )))
            }
        };
        let base = Mv::var_by_name(&scope.ctx, &scope.ctx.families[family].name.clone(), slot);
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let e = self.expect_nat()?;
            base.pow(e as u32).map_err(|er| self.err(er.to_string()))
        } else {
            Ok(base)
        }
    }

    fn expr(&mut self, scope: &Scope) -> Result<Mv, ParseError> {
        let mut neg = false;
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            neg = true;
        }
        let mut acc = self.term(scope)?;
        if neg {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let t = self.term(scope)?;
                    acc = acc.add(&t).map_err(|e| self.err(e.to_string()))?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let t = self.term(scope)?;
                    acc = acc.sub(&t).map_err(|e| self.err(e.to_string()))?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }
}

/// Parse one expression in the given context with the given display names.
pub fn parse_mv(text: &str, ctx: &Arc<Context>, names: &Names) -> Result<Mv, ParseError> {
    parse_mv_at(text, ctx, names, 1)
}

fn parse_mv_at(
    text: &str,
    ctx: &Arc<Context>,
    names: &Names,
    line: usize,
) -> Result<Mv, ParseError> {
    let toks = tokenize(text, line)?;
    let scope = Scope::new(ctx, names);
    let mut p = P { toks: &toks, pos: 0, line };
    let mv = p.expr(&scope)?;
    if p.pos < toks.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(mv)
}

// ---------------------------------------------------------------------
// system files

/// A parsed system file: declared variables, polynomials (in the context
/// `even("x", n)`), and optional run options.
#[derive(Debug, Clone)]
pub struct SystemFile {
    pub vars: Vec<String>,
    pub f: Vec<Mv>,
    pub order: Option<Vec<usize>>,
    pub degree: Option<u32>,
    pub seed: Option<u64>,
}

impl SystemFile {
    pub fn ctx(&self) -> Arc<Context> {
        ContextBuilder::new().even("x", self.vars.len()).build()
    }
}

/// Parse the `vars` / `f<i> = ...` file format. Blank lines and lines
/// starting with `#` are ignored.
pub fn parse_system(text: &str) -> Result<SystemFile, ParseError> {
    let mut vars: Option<Vec<String>> = None;
    let mut polys: Vec<(usize, Mv, usize)> = Vec::new(); // (index, poly, line)
    let mut order = None;
    let mut degree = None;
    let mut seed = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let bad = |col: usize, msg: String| ParseError { line, col, msg };
        if let Some(rest) = l.strip_prefix("vars") {
            if vars.is_some() {
                return Err(bad(1, "duplicate `vars` line".into()));
            }
            let names: Vec<String> = rest.split_whitespace().map(String::from).collect();
            if names.is_empty() {
                return Err(bad(5, "expected at least one variable name".into()));
            }
            for (i, n) in names.iter().enumerate() {
                let ok = n
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
                    && n.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_');
                if !ok || n == "f" {
                    return Err(bad(1, format!("invalid variable name `{n}`")));
                }
                if names[..i].contains(n) {
                    return Err(bad(1, format!("duplicate variable `{n}`")));
                }
            }
            vars = Some(names);
        } else if let Some(rest) = l.strip_prefix("order") {
            let parsed: Result<Vec<usize>, _> =
                rest.split_whitespace().map(|t| t.parse::<usize>()).collect();
            let mut p = parsed.map_err(|_| bad(6, "expected 1-based indices".into()))?;
            for v in p.iter_mut() {
                if *v == 0 {
                    return Err(bad(6, "order indices are 1-based".into()));
                }
                *v -= 1;
            }
            order = Some(p);
        } else if let Some(rest) = l.strip_prefix("degree") {
            degree = Some(
                rest.trim()
                    .parse::<u32>()
                    .map_err(|_| bad(7, "expected a degree".into()))?,
            );
        } else if let Some(rest) = l.strip_prefix("seed") {
            seed = Some(
                rest.trim()
                    .parse::<u64>()
                    .map_err(|_| bad(5, "expected a seed".into()))?,
            );
        } else if let Some(rest) = l.strip_prefix('f') {
            let vars = vars
                .as_ref()
                .ok_or_else(|| bad(1, "polynomials must come after `vars`".into()))?;
            let (idx_str, body) = rest
                .split_once('=')
                .ok_or_else(|| bad(2, "expected `f<i> = <expr>`".into()))?;
            let idx: usize = idx_str
                .trim()
                .parse()
                .map_err(|_| bad(2, "expected `f<i> = <expr>`".into()))?;
            if idx == 0 {
                return Err(bad(2, "polynomial indices are 1-based".into()));
            }
            if polys.iter().any(|&(i, _, _)| i == idx) {
                return Err(bad(1, format!("duplicate definition of f{idx}")));
            }
            let ctx = ContextBuilder::new().even("x", vars.len()).build();
            let names = Names {
                families: vec![FamilyNames::Even(vars.clone())],
            };
            let mv = parse_mv_at(body, &ctx, &names, line)?;
            polys.push((idx, mv, line));
        } else {
            return Err(bad(1, format!("unrecognized line `{l}`")));
        }
    }
    let vars = vars.ok_or(ParseError {
        line: 1,
        col: 1,
        msg: "missing `vars` line".into(),
    })?;
    polys.sort_by_key(|&(i, _, _)| i);
    for (k, &(i, _, line)) in polys.iter().enumerate() {
        if i != k + 1 {
            return Err(ParseError {
                line,
                col: 1,
                msg: format!("polynomial indices must be contiguous from f1 (found f{i})"),
            });
        }
    }
    if polys.is_empty() {
        return Err(ParseError {
            line: 1,
            col: 1,
            msg: "no polynomials defined".into(),
        });
    }
    Ok(SystemFile {
        vars,
        f: polys.into_iter().map(|(_, m, _)| m).collect(),
        order,
        degree,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mv::{q, qr};

    fn svec(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn system_parsing_examples() {
        let sf = parse_system("vars x\nf1 = x^2 - 1\n").unwrap();
        assert_eq!(sf.vars, svec(&["x"]));
        assert_eq!(sf.f.len(), 1);
        let ctx = sf.ctx();
        let x = Mv::var_by_name(&ctx, "x", 0);
        assert_eq!(sf.f[0], x.pow(2).unwrap().sub(&Mv::one(&ctx)).unwrap());

        let sf2 = parse_system("vars x y\nf1 = 3/2*x*y + y^2\n").unwrap();
        let ctx2 = sf2.ctx();
        let (xv, yv) = (Mv::var_by_name(&ctx2, "x", 0), Mv::var_by_name(&ctx2, "x", 1));
        let want = xv
            .mul(&yv)
            .unwrap()
            .scale(&qr(3, 2))
            .add(&yv.pow(2).unwrap())
            .unwrap();
        assert_eq!(sf2.f[0], want);

        // undeclared variable
        let err = parse_system("vars x\nf1 = z\n").unwrap_err();
        assert!(err.msg.contains("undeclared"), "{err}");
        assert_eq!(err.line, 2);

        // duplicate definition
        let err = parse_system("vars x\nf1 = x\nf1 = x^2\n").unwrap_err();
        assert!(err.msg.contains("duplicate"), "{err}");

        // options
        let sf3 =
            parse_system("vars x y\nf1 = x\nf2 = y\norder 2 1\ndegree 5\nseed 9\n").unwrap();
        assert_eq!(sf3.order, Some(vec![1, 0]));
        assert_eq!(sf3.degree, Some(5));
        assert_eq!(sf3.seed, Some(9));
    }

    #[test]
    fn canonical_form_and_round_trip() {
        let ctx = ContextBuilder::new().even("x", 2).odd("f^x", 2).build();
        let names = Names {
            families: vec![
                FamilyNames::Even(svec(&["x", "y"])),
                FamilyNames::Odd("f".into()),
            ],
        };
        let x = Mv::var_by_name(&ctx, "x", 0);
        let y = Mv::var_by_name(&ctx, "x", 1);
        let f1 = Mv::gen_by_name(&ctx, "f^x", 0);
        let f2 = Mv::gen_by_name(&ctx, "f^x", 1);

        let bez = x
            .pow(2)
            .unwrap()
            .add(&x.mul(&y).unwrap())
            .unwrap()
            .add(&y.pow(2).unwrap())
            .unwrap();
        assert_eq!(format_mv(&bez, &names), "x^2 + x*y + y^2");

        let m = x
            .mul(&f1)
            .unwrap()
            .mul(&f2)
            .unwrap()
            .scale(&qr(-3, 2))
            .add(&Mv::one(&ctx))
            .unwrap();
        let s = format_mv(&m, &names);
        assert_eq!(s, "1 - 3/2*x*f^1^f^2");
        assert_eq!(parse_mv(&s, &ctx, &names).unwrap(), m);

        // wedge anticommutativity normalizes sign
        let swapped = f2.mul(&f1).unwrap();
        assert_eq!(format_mv(&swapped, &names), "-f^1^f^2");
        assert_eq!(parse_mv("-f^1^f^2", &ctx, &names).unwrap(), swapped);
    }

    #[test]
    fn dual_form_round_trip() {
        let ctx = ContextBuilder::new()
            .even_dual("x*", 2, "x")
            .odd_dual("f*^x", 2, "f^x")
            .build();
        let names = Names::dx(&svec(&["x", "y"]));
        let mut t = Term::scalar(&ctx);
        t.exps[0] = 2;
        t.exps[1] = 1;
        t.wedge = vec![(1, 0)];
        let mut m = Mv::zero(&ctx);
        m.add_term(t, q(5));
        let s = format_mv(&m, &names);
        assert_eq!(s, "5*(x^2*y)_**f*^1");
        assert_eq!(parse_mv(&s, &ctx, &names).unwrap(), m);

        let e = parse_mv("(x)_* + 2*(y^3)_**f*^1^f*^2", &ctx, &names).unwrap();
        assert_eq!(format_mv(&e, &names), "(x)_* + 2*(y^3)_**f*^1^f*^2");
    }

    #[test]
    fn parse_errors_carry_position() {
        let ctx = ContextBuilder::new().even("x", 1).build();
        let names = Names {
            families: vec![FamilyNames::Even(svec(&["x"]))],
        };
        let err = parse_mv("x +", &ctx, &names).unwrap_err();
        assert_eq!(err.line, 1);
        assert!(err.col >= 3, "{err:?}");
        let err = parse_mv("x ? 1", &ctx, &names).unwrap_err();
        assert!(err.msg.contains("unexpected character"));
    }
}
