//! Session files: a line-oriented description of a polynomial ring, named
//! ideals and analysis options.
//!
//! ```text
//! # comments run to end of line
//! vars x y
//! ideal I = x^7, x^6*y, x^2*y^5, y^7
//! ideal J = x^7, x^6*y + y^7
//! option reduction.I J
//! option seed 42
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::bounds::TheoremId;
use crate::poly::{Monomial, Polynomial, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{column}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        line: usize,
        column: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("{line}:{column}: undeclared variable `{name}`")]
    UndeclaredVariable {
        line: usize,
        column: usize,
        name: String,
    },
    #[error("{line}:{column}: {message}")]
    Invalid {
        line: usize,
        column: usize,
        message: String,
    },
}

impl ParseError {
    pub fn position(&self) -> (usize, usize) {
        match self {
            ParseError::Syntax { line, column, .. }
            | ParseError::UndeclaredVariable { line, column, .. }
            | ParseError::Invalid { line, column, .. } => (*line, *column),
        }
    }
}

/// Analysis options. Unset fields take engine defaults.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Directives {
    pub seed: Option<u64>,
    pub nmax: Option<u32>,
    pub quotient_steps: Option<u32>,
    /// Powers on which behaves-well is checked.
    pub window: Option<u32>,
    pub chain_window: Option<u32>,
    pub chain_cap: Option<u32>,
    pub search_cap: Option<u32>,
    pub reduction_cap: Option<u32>,
    pub hilbert_cap: Option<u32>,
    /// Exponents `t` for which `ρ(I^t)` is computed.
    pub powers: Option<Vec<u32>>,
    /// Restrict reported verdicts to these theorems.
    pub theorems: Option<Vec<TheoremId>>,
    /// Ideal name to the name of its supplied reduction.
    pub reductions: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Session {
    pub var_names: Vec<String>,
    pub ideals: BTreeMap<String, Vec<Polynomial>>,
    pub directives: Directives,
}

const INT_KEYS: [&str; 9] = [
    "seed",
    "nmax",
    "quotient_steps",
    "window",
    "chain_window",
    "chain_cap",
    "search_cap",
    "reduction_cap",
    "hilbert_cap",
];

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(char),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::End => "end of line".to_string(),
        }
    }
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '.'
}

impl Lexer {
    fn new(text: &str, line: usize) -> Result<Lexer, ParseError> {
        let chars: Vec<char> = text.chars().collect();
        let mut toks = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c.is_whitespace() {
                i += 1;
            } else if is_ident_start(c) {
                let start = i;
                while i < chars.len() && is_ident_char(chars[i]) {
                    i += 1;
                }
                toks.push((Tok::Ident(chars[start..i].iter().collect()), col));
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                toks.push((Tok::Int(s.parse().expect("digits")), col));
            } else if "+-*/^,=".contains(c) {
                toks.push((Tok::Sym(c), col));
                i += 1;
            } else {
                return Err(ParseError::Syntax {
                    line,
                    column: col,
                    expected: vec!["a term".to_string()],
                    found: format!("`{c}`"),
                });
            }
        }
        toks.push((Tok::End, chars.len() + 1));
        Ok(Lexer { toks, pos: 0, line })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn column(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        ParseError::Syntax {
            line: self.line,
            column: self.column(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().describe(),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::End => Ok(()),
            _ => Err(self.error(&["end of line"])),
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, usize), ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let col = self.column();
                self.bump();
                Ok((s, col))
            }
            _ => Err(self.error(&[what])),
        }
    }

    fn int(&mut self, what: &str) -> Result<BigInt, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(n)
            }
            _ => Err(self.error(&[what])),
        }
    }
}

/// Split `word` into declared variable names, preferring longer names.
fn split_vars(word: &str, vars: &[String]) -> Option<Vec<usize>> {
    if word.is_empty() {
        return Some(Vec::new());
    }
    let mut order: Vec<usize> = (0..vars.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(vars[i].len()));
    for i in order {
        if let Some(rest) = word.strip_prefix(vars[i].as_str()) {
            if let Some(mut tail) = split_vars(rest, vars) {
                tail.insert(0, i);
                return Some(tail);
            }
        }
    }
    None
}

struct PolyParser<'a> {
    lx: Lexer,
    vars: &'a [String],
}

impl PolyParser<'_> {
    fn starts_factor(&self) -> bool {
        matches!(self.lx.peek(), Tok::Ident(_))
    }

    fn coefficient(&mut self) -> Result<Q, ParseError> {
        let n = self.lx.int("a coefficient")?;
        if self.lx.eat('/') {
            let col = self.lx.column();
            let d = self.lx.int("a denominator")?;
            if d.is_zero() {
                return Err(ParseError::Invalid {
                    line: self.lx.line,
                    column: col,
                    message: "zero denominator".to_string(),
                });
            }
            Ok(Q::new(n, d))
        } else {
            Ok(Q::from_integer(n))
        }
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        if !self.lx.eat('^') {
            return Ok(1);
        }
        let col = self.lx.column();
        let e = self.lx.int("an exponent")?;
        u32::try_from(e).map_err(|_| ParseError::Invalid {
            line: self.lx.line,
            column: col,
            message: "exponent out of range".to_string(),
        })
    }

    fn factor(&mut self, exps: &mut [u32]) -> Result<(), ParseError> {
        let (name, col) = self.lx.ident("a variable")?;
        let idx = match self.vars.iter().position(|v| *v == name) {
            Some(i) => vec![i],
            None => split_vars(&name, self.vars).ok_or_else(|| ParseError::UndeclaredVariable {
                line: self.lx.line,
                column: col,
                name: name.clone(),
            })?,
        };
        let e = self.exponent()?;
        let last = *idx.last().expect("nonempty identifier");
        for &i in &idx {
            exps[i] += if i == last { e } else { 1 };
        }
        Ok(())
    }

    fn term(&mut self, poly: &mut Polynomial, sign: Q) -> Result<(), ParseError> {
        let mut exps = vec![0u32; self.vars.len()];
        let coef = match self.lx.peek() {
            Tok::Int(_) => {
                let c = self.coefficient()?;
                if self.lx.eat('*') {
                    self.factor(&mut exps)?;
                }
                c
            }
            Tok::Ident(_) => {
                self.factor(&mut exps)?;
                Q::one()
            }
            _ => return Err(self.lx.error(&["a coefficient", "a variable"])),
        };
        while self.lx.eat('*') || self.starts_factor() {
            self.factor(&mut exps)?;
        }
        poly.add_term(Monomial::new(exps), sign * coef);
        Ok(())
    }

    fn polynomial(&mut self) -> Result<Polynomial, ParseError> {
        let mut poly = Polynomial::zero(self.vars.len());
        let mut sign = if self.lx.eat('-') {
            -Q::one()
        } else {
            self.lx.eat('+');
            Q::one()
        };
        loop {
            self.term(&mut poly, sign)?;
            sign = if self.lx.eat('+') {
                Q::one()
            } else if self.lx.eat('-') {
                -Q::one()
            } else {
                return Ok(poly);
            };
        }
    }
}

/// Parse one polynomial over the given variables.
pub fn parse_polynomial(text: &str, vars: &[String]) -> Result<Polynomial, ParseError> {
    let mut p = PolyParser {
        lx: Lexer::new(text, 1)?,
        vars,
    };
    let f = p.polynomial()?;
    p.lx.expect_end()?;
    Ok(f)
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn rest_after(raw: &str, col: usize) -> &str {
    let byte = raw.char_indices().nth(col - 1).map(|(b, _)| b).unwrap_or(raw.len());
    &raw[byte..]
}

pub fn parse_session(text: &str) -> Result<Session, ParseError> {
    let mut vars: Option<Vec<String>> = None;
    let mut ideals = BTreeMap::new();
    let mut d = Directives::default();
    let mut pending_reductions: Vec<(usize, usize, String, String)> = Vec::new();

    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let raw = strip_comment(raw);
        let mut lx = Lexer::new(raw, line_no)?;
        if *lx.peek() == Tok::End {
            continue;
        }
        let (kw, kw_col) = lx.ident("`vars`, `ideal` or `option`")?;
        let invalid = |column: usize, message: String| ParseError::Invalid {
            line: line_no,
            column,
            message,
        };
        match kw.as_str() {
            "vars" => {
                if vars.is_some() {
                    return Err(invalid(kw_col, "variables already declared".to_string()));
                }
                let mut names: Vec<String> = Vec::new();
                while *lx.peek() != Tok::End {
                    let (name, col) = lx.ident("a variable name")?;
                    if name.contains('.') {
                        return Err(invalid(col, format!("`{name}` is not a valid variable name")));
                    }
                    if names.contains(&name) {
                        return Err(invalid(col, format!("variable `{name}` declared twice")));
                    }
                    names.push(name);
                }
                if names.is_empty() {
                    return Err(lx.error(&["a variable name"]));
                }
                vars = Some(names);
            }
            "ideal" => {
                let names = vars
                    .as_ref()
                    .ok_or_else(|| invalid(kw_col, "`vars` must precede ideals".to_string()))?;
                let (name, col) = lx.ident("an ideal name")?;
                if ideals.contains_key(&name) {
                    return Err(invalid(col, format!("ideal `{name}` defined twice")));
                }
                if !lx.eat('=') {
                    return Err(lx.error(&["`=`"]));
                }
                let mut p = PolyParser { lx, vars: names };
                let mut gens = vec![p.polynomial()?];
                while p.lx.eat(',') {
                    gens.push(p.polynomial()?);
                }
                p.lx.expect_end()?;
                ideals.insert(name, gens);
            }
            "option" => {
                let (key, key_col) = lx.ident("an option name")?;
                let value_col = lx.column();
                let value = rest_after(raw, value_col).trim().to_string();
                if value.is_empty() {
                    return Err(lx.error(&["an option value"]));
                }
                if let Some(target) = key.strip_prefix("reduction.") {
                    let (j, _) = lx.ident("an ideal name")?;
                    lx.expect_end()?;
                    pending_reductions.push((line_no, key_col, target.to_string(), j));
                    continue;
                }
                if INT_KEYS.contains(&key.as_str()) {
                    let v = lx.int("an integer")?;
                    lx.expect_end()?;
                    let bad = || invalid(value_col, format!("value of `{key}` out of range"));
                    match key.as_str() {
                        "seed" => d.seed = Some(u64::try_from(&v).map_err(|_| bad())?),
                        other => {
                            let v = u32::try_from(&v).map_err(|_| bad())?;
                            let slot = match other {
                                "nmax" => &mut d.nmax,
                                "quotient_steps" => &mut d.quotient_steps,
                                "window" => &mut d.window,
                                "chain_window" => &mut d.chain_window,
                                "chain_cap" => &mut d.chain_cap,
                                "search_cap" => &mut d.search_cap,
                                "reduction_cap" => &mut d.reduction_cap,
                                _ => &mut d.hilbert_cap,
                            };
                            *slot = Some(v);
                        }
                    }
                    continue;
                }
                match key.as_str() {
                    "powers" => {
                        let mut ts = vec![];
                        loop {
                            let col = lx.column();
                            let t = lx.int("an integer")?;
                            ts.push(u32::try_from(t).map_err(|_| invalid(col, "power out of range".to_string()))?);
                            if !lx.eat(',') {
                                break;
                            }
                        }
                        lx.expect_end()?;
                        d.powers = Some(ts);
                    }
                    "theorems" => {
                        let mut ids = vec![];
                        loop {
                            let (name, col) = lx.ident("a theorem identifier")?;
                            ids.push(
                                TheoremId::from_name(&name)
                                    .ok_or_else(|| invalid(col, format!("unknown theorem `{name}`")))?,
                            );
                            if !lx.eat(',') {
                                break;
                            }
                        }
                        lx.expect_end()?;
                        d.theorems = Some(ids);
                    }
                    _ => {
                        let mut expected: Vec<String> = INT_KEYS.iter().map(|k| format!("`{k}`")).collect();
                        expected.extend(["`powers`", "`theorems`", "`reduction.NAME`"].map(String::from));
                        return Err(ParseError::Syntax {
                            line: line_no,
                            column: key_col,
                            expected,
                            found: format!("`{key}`"),
                        });
                    }
                }
            }
            _ => {
                return Err(ParseError::Syntax {
                    line: line_no,
                    column: kw_col,
                    expected: vec!["`vars`".into(), "`ideal`".into(), "`option`".into()],
                    found: format!("`{kw}`"),
                })
            }
        }
    }

    let var_names = vars.ok_or(ParseError::Invalid {
        line: text.lines().count().max(1),
        column: 1,
        message: "missing `vars` declaration".to_string(),
    })?;
    for (line, column, target, j) in pending_reductions {
        for name in [&target, &j] {
            if !ideals.contains_key(name) {
                return Err(ParseError::Invalid {
                    line,
                    column,
                    message: format!("unknown ideal `{name}`"),
                });
            }
        }
        d.reductions.insert(target, j);
    }
    Ok(Session {
        var_names,
        ideals,
        directives: d,
    })
}

impl Session {
    pub fn num_vars(&self) -> usize {
        self.var_names.len()
    }

    /// Names of ideals that serve as a supplied reduction of another ideal.
    pub fn reduction_names(&self) -> BTreeSet<&str> {
        self.directives.reductions.values().map(String::as_str).collect()
    }

    /// Canonical text: variables, options in a fixed order, then ideals
    /// sorted by name.
    pub fn to_canonical(&self) -> String {
        let mut out = format!("vars {}\n", self.var_names.join(" "));
        let d = &self.directives;
        let ints = [
            ("seed", d.seed),
            ("nmax", d.nmax.map(u64::from)),
            ("quotient_steps", d.quotient_steps.map(u64::from)),
            ("window", d.window.map(u64::from)),
            ("chain_window", d.chain_window.map(u64::from)),
            ("chain_cap", d.chain_cap.map(u64::from)),
            ("search_cap", d.search_cap.map(u64::from)),
            ("reduction_cap", d.reduction_cap.map(u64::from)),
            ("hilbert_cap", d.hilbert_cap.map(u64::from)),
        ];
        for (k, v) in ints {
            if let Some(v) = v {
                writeln!(out, "option {k} {v}").unwrap();
            }
        }
        if let Some(ts) = &d.powers {
            let list: Vec<String> = ts.iter().map(|t| t.to_string()).collect();
            writeln!(out, "option powers {}", list.join(", ")).unwrap();
        }
        if let Some(ids) = &d.theorems {
            let list: Vec<&str> = ids.iter().map(|t| t.name()).collect();
            writeln!(out, "option theorems {}", list.join(", ")).unwrap();
        }
        for (i, j) in &d.reductions {
            writeln!(out, "option reduction.{i} {j}").unwrap();
        }
        for (name, gens) in &self.ideals {
            let list: Vec<String> = gens.iter().map(|g| g.render(&self.var_names)).collect();
            writeln!(out, "ideal {name} = {}", list.join(", ")).unwrap();
        }
        out
    }
}
