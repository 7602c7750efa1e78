//! Concrete syntax: parsing and printing.
//!
//! ```text
//! term    := atom | abs | app | susp
//! abs     := atom "." term
//! app     := SYM "(" term ("," term)* ")" | SYM      SYM lowercase-initial
//! susp    := perm "*" VAR | VAR                      VAR uppercase-initial
//! perm    := ("(" atom " " atom ")")+ | "Id"         leftmost swapping applied last
//! atom    := lowercase-initial identifier
//! context := "{" (atom "#" VAR ("," atom "#" VAR)*)? "}"
//! ```
//!
//! A lowercase identifier followed by `(` is a function symbol and one
//! followed by `.` is a binder; otherwise it is a zero-argument application
//! when the signature declares it and an atom if not. Names starting with
//! `#` are reserved for machinery-generated fresh names and are rejected
//! unless the parser is put in lenient mode (used to read reports back).

use std::collections::BTreeMap;
use std::fmt;

use crate::alpha::{FreshnessContext, FreshnessFormula};
use crate::perm::{Permutation, Swapping};
use crate::term::{Atom, AtomSet, NominalTerm, VarName};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.pos, self.msg)
    }
}

impl std::error::Error for ParseError {}

/// Declared function symbols with their arities.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    arities: BTreeMap<String, usize>,
}

impl Signature {
    pub fn new() -> Self {
        Signature::default()
    }

    /// Parses the `f/2, g/1` format.
    pub fn parse(src: &str) -> Result<Signature, ParseError> {
        let mut sig = Signature::new();
        for (i, entry) in src.split(',').enumerate() {
            let entry = entry.trim();
            if entry.is_empty() {
                if i == 0 && src.trim().is_empty() {
                    break;
                }
                return Err(ParseError {
                    pos: 0,
                    msg: "empty signature entry".into(),
                });
            }
            let (name, arity) = entry.split_once('/').ok_or_else(|| ParseError {
                pos: 0,
                msg: format!("signature entry `{entry}` is not of the form sym/arity"),
            })?;
            let name = name.trim();
            if !name.chars().next().is_some_and(|c| c.is_ascii_lowercase()) {
                return Err(ParseError {
                    pos: 0,
                    msg: format!("function symbol `{name}` must start lowercase"),
                });
            }
            let arity: usize = arity.trim().parse().map_err(|_| ParseError {
                pos: 0,
                msg: format!("bad arity in signature entry `{entry}`"),
            })?;
            sig.arities.insert(name.to_string(), arity);
        }
        Ok(sig)
    }

    pub fn declare(&mut self, symbol: impl Into<String>, arity: usize) {
        self.arities.insert(symbol.into(), arity);
    }

    pub fn declares(&self, symbol: &str) -> bool {
        self.arities.contains_key(symbol)
    }

    pub fn arity(&self, symbol: &str) -> Option<usize> {
        self.arities.get(symbol).copied()
    }

    pub fn is_empty(&self) -> bool {
        self.arities.is_empty()
    }

    /// Checks every application against the declared arities.
    pub fn check_term(&self, term: &NominalTerm) -> Result<(), String> {
        match term {
            NominalTerm::Atom(_) | NominalTerm::Susp(_, _) => Ok(()),
            NominalTerm::Abs(_, t) => self.check_term(t),
            NominalTerm::App(f, args) => {
                if let Some(n) = self.arity(f) {
                    if n != args.len() {
                        return Err(format!(
                            "symbol {f} declared with arity {n}, used with {}",
                            args.len()
                        ));
                    }
                }
                args.iter().try_for_each(|t| self.check_term(t))
            }
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (sym, n)) in self.arities.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{sym}/{n}")?;
        }
        Ok(())
    }
}

/// Configurable parser front-end. The free functions below cover the
/// common strict cases.
#[derive(Debug, Clone, Copy, Default)]
pub struct TermParser<'s> {
    sig: Option<&'s Signature>,
    allow_fresh: bool,
}

impl<'s> TermParser<'s> {
    pub fn new() -> Self {
        TermParser::default()
    }

    pub fn with_signature(mut self, sig: &'s Signature) -> Self {
        self.sig = Some(sig);
        self
    }

    pub fn maybe_signature(mut self, sig: Option<&'s Signature>) -> Self {
        self.sig = sig;
        self
    }

    /// Accept machinery-generated `#v.. / #a..` names.
    pub fn allow_fresh_names(mut self) -> Self {
        self.allow_fresh = true;
        self
    }

    pub fn parse_term(&self, src: &str) -> Result<NominalTerm, ParseError> {
        let mut p = Parser::new(src, *self);
        let t = p.term()?;
        p.expect_eof()?;
        Ok(t)
    }

    pub fn parse_context(&self, src: &str) -> Result<FreshnessContext, ParseError> {
        let mut p = Parser::new(src, *self);
        let ctx = p.context()?;
        p.expect_eof()?;
        Ok(ctx)
    }

    pub fn parse_formulas(&self, src: &str) -> Result<Vec<FreshnessFormula>, ParseError> {
        let mut p = Parser::new(src, *self);
        let fs = p.formulas()?;
        p.expect_eof()?;
        Ok(fs)
    }

    pub fn parse_permutation(&self, src: &str) -> Result<Permutation, ParseError> {
        let mut p = Parser::new(src, *self);
        p.skip_ws();
        let perm = if p.peek() == Some('(') {
            p.permutation()?
        } else {
            let (name, _) = p.name()?;
            if name != "Id" {
                return Err(p.err(format!("expected a permutation, found `{name}`")));
            }
            Permutation::identity()
        };
        p.expect_eof()?;
        Ok(perm)
    }

    pub fn parse_atom(&self, src: &str) -> Result<Atom, ParseError> {
        let mut p = Parser::new(src, *self);
        let a = p.atom_name()?;
        p.expect_eof()?;
        Ok(a)
    }

    /// Comma-separated atom names, optionally wrapped in braces.
    pub fn parse_atom_set(&self, src: &str) -> Result<AtomSet, ParseError> {
        let mut p = Parser::new(src, *self);
        p.skip_ws();
        let braced = p.peek() == Some('{');
        if braced {
            p.bump();
            p.skip_ws();
        }
        let mut set = AtomSet::new();
        let done = |p: &mut Parser| {
            p.skip_ws();
            if braced {
                p.peek() == Some('}')
            } else {
                p.peek().is_none()
            }
        };
        if !done(&mut p) {
            loop {
                set.insert(p.atom_name()?);
                p.skip_ws();
                if p.peek() == Some(',') {
                    p.bump();
                } else {
                    break;
                }
            }
        }
        if braced {
            p.expect('}')?;
        }
        p.expect_eof()?;
        Ok(set)
    }
}

pub fn parse_term(src: &str, sig: Option<&Signature>) -> Result<NominalTerm, ParseError> {
    TermParser::new().maybe_signature(sig).parse_term(src)
}

pub fn parse_context(src: &str) -> Result<FreshnessContext, ParseError> {
    TermParser::new().parse_context(src)
}

pub fn parse_formulas(src: &str, sig: Option<&Signature>) -> Result<Vec<FreshnessFormula>, ParseError> {
    TermParser::new().maybe_signature(sig).parse_formulas(src)
}

pub fn parse_permutation(src: &str) -> Result<Permutation, ParseError> {
    TermParser::new().parse_permutation(src)
}

pub fn parse_atom_set(src: &str) -> Result<AtomSet, ParseError> {
    TermParser::new().parse_atom_set(src)
}

enum NameClass {
    Atomish,
    Varish,
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    end: usize,
    opts: TermParser<'a>,
}

impl<'a> Parser<'a> {
    fn new(src: &str, opts: TermParser<'a>) -> Parser<'a> {
        Parser {
            chars: src.char_indices().collect(),
            pos: 0,
            end: src.len(),
            opts,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn peek_snd(&self) -> Option<char> {
        self.chars.get(self.pos + 1).map(|&(_, c)| c)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn byte_pos(&self) -> usize {
        self.chars.get(self.pos).map_or(self.end, |&(i, _)| i)
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError {
            pos: self.byte_pos(),
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.bump();
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.err(format!(
                "expected `{c}`, found {}",
                self.describe_here()
            )))
        }
    }

    fn expect_eof(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        if self.peek().is_none() {
            Ok(())
        } else {
            Err(self.err(format!("unexpected trailing {}", self.describe_here())))
        }
    }

    fn describe_here(&self) -> String {
        match self.peek() {
            Some(c) => format!("`{c}`"),
            None => "end of input".to_string(),
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        let mut out = String::new();
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() => {
                out.push(c);
                self.bump();
            }
            _ => return Err(self.err("expected an identifier")),
        }
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' || c == '\'' {
                out.push(c);
                self.bump();
            } else {
                break;
            }
        }
        Ok(out)
    }

    /// A possibly `#`-prefixed name with its class. In strict mode `#`
    /// names are rejected outright.
    fn name(&mut self) -> Result<(String, NameClass), ParseError> {
        self.skip_ws();
        if self.peek() == Some('#') {
            if !self.opts.allow_fresh
                || !self.peek_snd().is_some_and(|c| c == 'a' || c == 'v')
            {
                return Err(self.err("names may not start with `#`"));
            }
            self.bump();
            let rest = self.ident()?;
            let class = if rest.starts_with('v') {
                NameClass::Varish
            } else {
                NameClass::Atomish
            };
            return Ok((format!("#{rest}"), class));
        }
        let id = self.ident()?;
        let class = if id.chars().next().unwrap().is_ascii_uppercase() {
            NameClass::Varish
        } else {
            NameClass::Atomish
        };
        Ok((id, class))
    }

    fn atom_name(&mut self) -> Result<Atom, ParseError> {
        match self.name()? {
            (n, NameClass::Atomish) => Ok(Atom::new(n)),
            (n, NameClass::Varish) => {
                Err(self.err(format!("expected an atom, found variable `{n}`")))
            }
        }
    }

    fn var_name(&mut self) -> Result<VarName, ParseError> {
        match self.name()? {
            (n, NameClass::Varish) => Ok(VarName::new(n)),
            (n, NameClass::Atomish) => {
                Err(self.err(format!("expected a variable, found `{n}`")))
            }
        }
    }

    fn term(&mut self) -> Result<NominalTerm, ParseError> {
        self.skip_ws();
        if self.peek() == Some('(') {
            let perm = self.permutation()?;
            self.expect('*')?;
            self.skip_ws();
            let var = self.var_name()?;
            return Ok(NominalTerm::Susp(perm, var));
        }
        let (name, class) = self.name()?;
        if let NameClass::Varish = class {
            return Ok(NominalTerm::var(VarName::new(name)));
        }
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.bump();
                let mut args = vec![self.term()?];
                loop {
                    self.skip_ws();
                    match self.peek() {
                        Some(',') => {
                            self.bump();
                            args.push(self.term()?);
                        }
                        Some(')') => {
                            self.bump();
                            break;
                        }
                        _ => {
                            return Err(self.err(format!(
                                "expected `,` or `)`, found {}",
                                self.describe_here()
                            )))
                        }
                    }
                }
                self.check_arity(&name, args.len())?;
                Ok(NominalTerm::App(name, args))
            }
            Some('.') => {
                self.bump();
                let body = self.term()?;
                Ok(NominalTerm::abs(Atom::new(name), body))
            }
            _ => {
                if self.opts.sig.is_some_and(|s| s.declares(&name)) {
                    self.check_arity(&name, 0)?;
                    Ok(NominalTerm::constant(name))
                } else {
                    Ok(NominalTerm::Atom(Atom::new(name)))
                }
            }
        }
    }

    fn check_arity(&self, symbol: &str, used: usize) -> Result<(), ParseError> {
        if let Some(declared) = self.opts.sig.and_then(|s| s.arity(symbol)) {
            if declared != used {
                return Err(self.err(format!(
                    "arity mismatch: {symbol} is declared {symbol}/{declared} but used with {used} argument(s)"
                )));
            }
        }
        Ok(())
    }

    fn permutation(&mut self) -> Result<Permutation, ParseError> {
        let mut swaps = Vec::new();
        loop {
            self.skip_ws();
            if self.peek() != Some('(') {
                break;
            }
            self.bump();
            self.skip_ws();
            let left = self.atom_name()?;
            self.skip_ws();
            let right = self.atom_name()?;
            self.expect(')')?;
            swaps.push(Swapping::new(left, right));
        }
        if swaps.is_empty() {
            return Err(self.err("expected at least one swapping"));
        }
        Ok(Permutation::from_swaps(swaps))
    }

    fn context(&mut self) -> Result<FreshnessContext, ParseError> {
        self.expect('{')?;
        let mut ctx = FreshnessContext::new();
        self.skip_ws();
        if self.peek() == Some('}') {
            self.bump();
            return Ok(ctx);
        }
        loop {
            self.skip_ws();
            let atom = self.atom_name()?;
            self.expect('#')?;
            self.skip_ws();
            let var = self.var_name()?;
            ctx.insert(atom, var);
            self.skip_ws();
            match self.bump() {
                Some(',') => continue,
                Some('}') => break,
                _ => {
                    return Err(self.err("expected `,` or `}` in freshness context"));
                }
            }
        }
        Ok(ctx)
    }

    fn formulas(&mut self) -> Result<Vec<FreshnessFormula>, ParseError> {
        self.expect('{')?;
        let mut out = Vec::new();
        self.skip_ws();
        if self.peek() == Some('}') {
            self.bump();
            return Ok(out);
        }
        loop {
            self.skip_ws();
            let atom = self.atom_name()?;
            self.expect('#')?;
            let term = self.term()?;
            out.push(FreshnessFormula { atom, term });
            self.skip_ws();
            match self.bump() {
                Some(',') => continue,
                Some('}') => break,
                _ => {
                    return Err(self.err("expected `,` or `}` in formula set"));
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for NominalTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NominalTerm::Atom(a) => write!(f, "{a}"),
            NominalTerm::Abs(a, t) => write!(f, "{a}.{t}"),
            NominalTerm::App(sym, args) => {
                write!(f, "{sym}")?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (i, arg) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ", ")?;
                        }
                        write!(f, "{arg}")?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
            NominalTerm::Susp(p, x) => {
                if p.is_written_identity() {
                    write!(f, "{x}")
                } else {
                    for s in p.written_swaps() {
                        write!(f, "{s}")?;
                    }
                    write!(f, "*{x}")
                }
            }
        }
    }
}
