//! Base files: one rule per line, `#` comments.
//!
//! ```text
//! l |- r.                          axiomatic rule
//! l |- p ==> |- u.                 premises separated by ';'
//! [Cut] ?G, p |- bot ==> ?G |- bot.   schema with an optional name
//! ```

use thiserror::Error;

use super::{AtomicRule, AtomicSequent, Base, ContextPattern, Meta, RuleSchema, SequentPattern};
use crate::syntax::{ParseError, Parser, Tok};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct BaseFileError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

pub const DEFAULT_SCHEMA_NAME: &str = "Schema";

pub fn parse_base(src: &str) -> Result<Base, BaseFileError> {
    let mut base = Base::default();
    for (i, raw) in src.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let trimmed = line.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let indent = line.len() - trimmed.len();
        let err = |pos: usize, message: String| BaseFileError {
            line: i + 1,
            column: pos + 1,
            message,
        };
        let (name, body, offset) = match trimmed.strip_prefix('[') {
            Some(after) => {
                let close = after
                    .find(']')
                    .ok_or_else(|| err(indent, "unterminated rule name".into()))?;
                let name = after[..close].trim();
                if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                    return Err(err(indent + 1, format!("invalid rule name '{name}'")));
                }
                (Some(name.to_string()), &after[close + 1..], indent + close + 2)
            }
            None => (None, trimmed, indent),
        };
        let rule = parse_rule(body).map_err(|e| err(offset + e.pos, e.message))?;
        match rule {
            Parsed::Concrete(r) => {
                if name.is_some() {
                    return Err(err(indent, "only schemas carry names".into()));
                }
                base.rules.insert(r);
            }
            Parsed::Schema(premises, conclusion) => {
                let name = name.unwrap_or_else(|| DEFAULT_SCHEMA_NAME.to_string());
                base.schemas.insert(RuleSchema {
                    name,
                    premises,
                    conclusion,
                });
            }
        }
    }
    Ok(base)
}

enum Parsed {
    Concrete(AtomicRule),
    Schema(Vec<SequentPattern>, SequentPattern),
}

fn parse_rule(body: &str) -> Result<Parsed, ParseError> {
    let mut p = Parser::new(body)?;
    let mut seqs = Vec::new();
    let mut premises = None;
    if p.eat(&Tok::Arrow) {
        premises = Some(vec![]);
    }
    loop {
        seqs.push(pattern(&mut p)?);
        if p.eat(&Tok::Semi) {
            continue;
        }
        if p.eat(&Tok::Arrow) {
            if premises.is_some() {
                return Err(p.error("more than one '==>'"));
            }
            premises = Some(std::mem::take(&mut seqs));
            continue;
        }
        break;
    }
    p.expect(&Tok::Dot, "'.' at end of rule")?;
    p.finish()?;
    let premises = premises.unwrap_or_default();
    if seqs.len() != 1 {
        return Err(p.error("a rule has exactly one conclusion"));
    }
    let conclusion = seqs.pop().expect("one conclusion");
    let schematic = premises
        .iter()
        .chain([&conclusion])
        .any(|s| !s.context.metas.is_empty());
    if schematic {
        return Ok(Parsed::Schema(premises, conclusion));
    }
    let concrete = |s: SequentPattern| AtomicSequent {
        context: s.context.atoms,
        conclusion: s.conclusion,
    };
    Ok(Parsed::Concrete(AtomicRule {
        premises: premises.into_iter().map(concrete).collect(),
        conclusion: concrete(conclusion),
    }))
}

fn pattern(p: &mut Parser) -> Result<SequentPattern, ParseError> {
    let mut ctx = ContextPattern::default();
    if p.peek() != Some(&Tok::Turnstile) {
        loop {
            if let Some(Tok::Meta(m)) = p.peek().cloned() {
                p.bump();
                ctx.metas.insert(Meta(m));
            } else {
                ctx.atoms.insert(p.atom()?);
            }
            if !p.eat(&Tok::Comma) {
                break;
            }
        }
    }
    p.expect(&Tok::Turnstile, "'|-'")?;
    let conclusion = p.atom()?;
    Ok(SequentPattern {
        context: ctx,
        conclusion,
    })
}
