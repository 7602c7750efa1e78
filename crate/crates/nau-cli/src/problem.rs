//! The stanza problem-file format and term-in-context pairs.
//!
//! ```text
//! # comment
//! sig: f/2, g/1
//! atoms: a, b, c, d
//! context: {a#X}
//! left: f(a, b)
//! right: f(b, c)
//! eq: t ~ s          (equivariance problems, repeatable)
//! ```
//!
//! Flags override file fields; the signature line is read first since it
//! steers term parsing.

use anyhow::{anyhow, bail, Context as _, Result};

use nau::{
    AtomSet, EquivEquation, FreshnessContext, NominalTerm, Signature, TermInContext, TermParser,
};

#[derive(Debug, Clone, Default)]
pub struct ProblemFile {
    pub atoms: Option<AtomSet>,
    pub context: Option<FreshnessContext>,
    pub left: Option<NominalTerm>,
    pub right: Option<NominalTerm>,
    pub equations: Vec<EquivEquation>,
    pub signature: Option<Signature>,
}

impl ProblemFile {
    pub fn parse(text: &str, default_sig: Option<&Signature>) -> Result<ProblemFile> {
        let mut out = ProblemFile::default();
        for line in text.lines() {
            let line = line.trim();
            if let Some(rest) = line.strip_prefix("sig:") {
                out.signature = Some(Signature::parse(rest.trim())?);
            }
        }
        let sig = out.signature.clone();
        let sig = sig.as_ref().or(default_sig);
        let parser = TermParser::new().maybe_signature(sig);
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once(':')
                .ok_or_else(|| anyhow!("line {}: expected `key: value`", lineno + 1))?;
            let value = value.trim();
            let where_ = || format!("line {}", lineno + 1);
            match key.trim() {
                "sig" => {}
                "atoms" => {
                    out.atoms =
                        Some(parser.parse_atom_set(value).with_context(where_)?)
                }
                "context" => {
                    out.context =
                        Some(parser.parse_context(value).with_context(where_)?)
                }
                "left" => out.left = Some(parser.parse_term(value).with_context(where_)?),
                "right" => out.right = Some(parser.parse_term(value).with_context(where_)?),
                "eq" => {
                    let (l, r) = value
                        .split_once('~')
                        .ok_or_else(|| anyhow!("line {}: `eq` needs `t ~ s`", lineno + 1))?;
                    out.equations.push(EquivEquation::new(
                        parser.parse_term(l.trim()).with_context(where_)?,
                        parser.parse_term(r.trim()).with_context(where_)?,
                    ));
                }
                other => bail!("line {}: unknown key `{other}`", lineno + 1),
            }
        }
        Ok(out)
    }

    /// Everything mentioned must live inside the declared atom set.
    pub fn validate_basedness(&self) -> Result<()> {
        let Some(atoms) = &self.atoms else {
            return Ok(());
        };
        let check = |what: &str, mentioned: Vec<nau::Atom>| -> Result<()> {
            for a in mentioned {
                if !atoms.contains(&a) {
                    bail!("{what} mentions atom `{a}` outside atoms: {atoms}");
                }
            }
            Ok(())
        };
        if let Some(ctx) = &self.context {
            check("context", ctx.atoms().into_iter().collect())?;
        }
        if let Some(t) = &self.left {
            check("left term", t.atoms().into_iter().collect())?;
        }
        if let Some(t) = &self.right {
            check("right term", t.atoms().into_iter().collect())?;
        }
        for eq in &self.equations {
            check("equation", eq.lhs.atoms().into_iter().collect())?;
            check("equation", eq.rhs.atoms().into_iter().collect())?;
        }
        Ok(())
    }
}

/// A term-in-context literal: an optional `{...}` context followed by a
/// term, e.g. `{a#X} f(X)` or plain `f(X)`.
pub fn parse_pair(src: &str, sig: Option<&Signature>) -> Result<TermInContext> {
    let parser = TermParser::new().maybe_signature(sig);
    let src = src.trim();
    if let Some(rest) = src.strip_prefix('{') {
        let close = rest
            .find('}')
            .ok_or_else(|| anyhow!("unclosed context in `{src}`"))?;
        let ctx = parser.parse_context(&src[..close + 2])?;
        let term = parser.parse_term(src[close + 2..].trim())?;
        Ok(TermInContext::new(ctx, term))
    } else {
        Ok(TermInContext::new(
            FreshnessContext::new(),
            parser.parse_term(src)?,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stanza_files_parse() {
        let text = "\
# golden instance
sig: f/2
atoms: a, b, c, d
context: {}
left: f(a, b)
right: f(b, c)
";
        let p = ProblemFile::parse(text, None).unwrap();
        assert_eq!(p.atoms.unwrap().len(), 4);
        assert!(p.context.unwrap().is_empty());
        assert!(p.left.is_some() && p.right.is_some());
        assert!(p.signature.unwrap().declares("f"));
    }

    #[test]
    fn equations_and_validation() {
        let text = "\
atoms: a, b
eq: a ~ b
eq: f(a) ~ f(b)
";
        let p = ProblemFile::parse(text, None).unwrap();
        assert_eq!(p.equations.len(), 2);
        p.validate_basedness().unwrap();

        let bad = "atoms: a\nleft: f(b)\n";
        let p = ProblemFile::parse(bad, None).unwrap();
        assert!(p.validate_basedness().is_err());
    }

    #[test]
    fn signature_is_read_before_terms() {
        let text = "left: c\nsig: c/0\n";
        let p = ProblemFile::parse(text, None).unwrap();
        assert_eq!(p.left.unwrap(), NominalTerm::constant("c"));
    }

    #[test]
    fn pair_literals() {
        let p = parse_pair("{a#X} f(X)", None).unwrap();
        assert_eq!(p.ctx.len(), 1);
        let p = parse_pair("f(Y)", None).unwrap();
        assert!(p.ctx.is_empty());
        assert!(parse_pair("{a#X", None).is_err());
    }
}
