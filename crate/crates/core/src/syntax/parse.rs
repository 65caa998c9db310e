//! Concrete ASCII syntax.
//!
//! ```text
//! atoms     [a-z][a-z0-9_]*      units  bot  1  0  top
//! binders   ~  *  |  &  +  -o    (tightest first; -o right-assoc)
//! sequents  p, q |- r            |- r
//! ```

use thiserror::Error;

use super::formula::{negate, Atom, AtomicMultiset, Formula, Sequent};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at position {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

impl ParseError {
    fn new(pos: usize, message: impl Into<String>) -> Self {
        ParseError {
            pos,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    One,
    Zero,
    Star,
    Bar,
    Amp,
    PlusSign,
    Lolli,
    Tilde,
    LParen,
    RParen,
    Comma,
    Turnstile,
    Semi,
    Arrow,
    Meta(String),
    LBrace,
    RBrace,
    Caret,
    Dot,
}

pub(crate) fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let two = src.get(i..i + 2).unwrap_or("");
        let three = src.get(i..i + 3).unwrap_or("");
        let tok = if three == "==>" {
            i += 3;
            Tok::Arrow
        } else if two == "-o" {
            i += 2;
            Tok::Lolli
        } else if two == "|-" {
            i += 2;
            Tok::Turnstile
        } else if c.is_ascii_lowercase() {
            while i < bytes.len()
                && (bytes[i].is_ascii_lowercase() || bytes[i].is_ascii_digit() || bytes[i] == b'_')
            {
                i += 1;
            }
            Tok::Ident(src[start..i].to_string())
        } else if c == '?' && i + 1 < bytes.len() && bytes[i + 1].is_ascii_alphabetic() {
            i += 1;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            Tok::Meta(src[start + 1..i].to_string())
        } else {
            i += 1;
            match c {
                '1' => Tok::One,
                '0' => Tok::Zero,
                '*' => Tok::Star,
                '|' => Tok::Bar,
                '&' => Tok::Amp,
                '+' => Tok::PlusSign,
                '~' => Tok::Tilde,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                ';' => Tok::Semi,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                '^' => Tok::Caret,
                '.' => Tok::Dot,
                '!' | '?' => {
                    return Err(ParseError::new(start, "exponentials out of scope"));
                }
                _ => return Err(ParseError::new(start, format!("unexpected character '{c}'"))),
            }
        };
        out.push((start, tok));
    }
    Ok(out)
}

pub(crate) struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    pub(crate) fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
            end: src.len(),
        })
    }

    pub(crate) fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    pub(crate) fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    pub(crate) fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    pub(crate) fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, tok: &Tok, what: &str) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub(crate) fn finish(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error("unexpected trailing input"))
        }
    }

    pub(crate) fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.offset(), message)
    }

    pub(crate) fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.plus()?;
        if self.eat(&Tok::Lolli) {
            let rhs = self.formula()?;
            Ok(Formula::lolli(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn plus(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.with()?;
        while self.eat(&Tok::PlusSign) {
            lhs = Formula::plus(lhs, self.with()?);
        }
        Ok(lhs)
    }

    fn with(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.par()?;
        while self.eat(&Tok::Amp) {
            lhs = Formula::with(lhs, self.par()?);
        }
        Ok(lhs)
    }

    fn par(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.tensor()?;
        while self.eat(&Tok::Bar) {
            lhs = Formula::par(lhs, self.tensor()?);
        }
        Ok(lhs)
    }

    fn tensor(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::Star) {
            lhs = Formula::tensor(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.eat(&Tok::Tilde) {
            return Ok(negate(&self.unary()?));
        }
        let at = self.offset();
        match self.bump() {
            Some(Tok::LParen) => {
                let f = self.formula()?;
                self.expect(&Tok::RParen, "')'")?;
                Ok(f)
            }
            Some(Tok::One) => Ok(Formula::One),
            Some(Tok::Zero) => Ok(Formula::Zero),
            Some(Tok::Ident(name)) => Ok(match name.as_str() {
                "bot" => Formula::bottom(),
                "top" => Formula::Top,
                _ => Formula::atom(&name),
            }),
            Some(Tok::Meta(_)) => Err(ParseError::new(at, "exponentials out of scope")),
            Some(_) => Err(ParseError::new(at, "expected a formula")),
            None => Err(ParseError::new(at, "unexpected end of input")),
        }
    }

    /// Comma-separated formulas up to (not including) `|-`.
    pub(crate) fn context(&mut self) -> Result<Vec<Formula>, ParseError> {
        let mut ctx = Vec::new();
        if self.peek() == Some(&Tok::Turnstile) {
            return Ok(ctx);
        }
        loop {
            ctx.push(self.formula()?);
            if !self.eat(&Tok::Comma) {
                return Ok(ctx);
            }
        }
    }

    pub(crate) fn sequent(&mut self) -> Result<Sequent, ParseError> {
        let ctx = self.context()?;
        self.expect(&Tok::Turnstile, "'|-'")?;
        let concl = self.formula()?;
        Ok(Sequent::new(ctx, concl))
    }

    pub(crate) fn atom(&mut self) -> Result<Atom, ParseError> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Ident(name)) if name == "bot" => Ok(Atom::bottom()),
            Some(Tok::Ident(name)) if name != "top" => Ok(Atom::new(&name)),
            _ => Err(ParseError::new(at, "expected an atom")),
        }
    }

    /// Comma-separated atoms; stops before any token that cannot start an atom.
    pub(crate) fn atom_list(&mut self) -> Result<AtomicMultiset, ParseError> {
        let mut out = AtomicMultiset::new();
        if !matches!(self.peek(), Some(Tok::Ident(_))) {
            return Ok(out);
        }
        loop {
            out.insert(self.atom()?);
            if !self.eat(&Tok::Comma) {
                return Ok(out);
            }
        }
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_sequent(text: &str) -> Result<Sequent, ParseError> {
    let mut p = Parser::new(text)?;
    let s = p.sequent()?;
    p.finish()?;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: &str) -> Formula {
        Formula::atom(n)
    }

    #[test]
    fn grammar_cases() {
        assert_eq!(parse_formula("p * q").unwrap(), Formula::tensor(a("p"), a("q")));
        assert_eq!(parse_formula("~p").unwrap(), Formula::lolli(a("p"), Formula::bottom()));
        assert_eq!(
            parse_formula("p -o q -o r").unwrap(),
            Formula::lolli(a("p"), Formula::lolli(a("q"), a("r")))
        );
        assert_eq!(
            parse_formula("p * q | r & s + t").unwrap(),
            Formula::plus(
                Formula::with(Formula::par(Formula::tensor(a("p"), a("q")), a("r")), a("s")),
                a("t")
            )
        );
        assert_eq!(
            parse_formula("p + q + r").unwrap(),
            Formula::plus(Formula::plus(a("p"), a("q")), a("r"))
        );
        assert_eq!(parse_formula("top & 1 + 0").unwrap().to_string(), "top & 1 + 0");
        assert_eq!(
            parse_formula("~p * q").unwrap(),
            Formula::tensor(Formula::lolli(a("p"), Formula::bottom()), a("q"))
        );
    }

    #[test]
    fn sequents() {
        let s = parse_sequent("p, q |- r").unwrap();
        assert_eq!(s.context.len(), 2);
        assert_eq!(s.to_string(), "p, q |- r");
        let s = parse_sequent("|- r").unwrap();
        assert!(s.context.is_empty());
        assert_eq!(s.to_string(), "|- r");
        assert_eq!(parse_sequent("~~p |- p").unwrap().to_string(), "~~p |- p");
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_formula("p * !q").unwrap_err();
        assert_eq!(e.pos, 4);
        assert!(e.message.contains("exponentials out of scope"));
        let e = parse_formula("?p").unwrap_err();
        assert!(e.message.contains("exponentials"));
        let e = parse_formula("p * ").unwrap_err();
        assert_eq!(e.pos, 4);
        let e = parse_formula("(p * q").unwrap_err();
        assert!(e.message.contains("')'"));
        assert!(parse_formula("p q").is_err());
    }

    #[test]
    fn printing_is_minimal() {
        for src in [
            "(p -o q) -o r",
            "p -o q -o r",
            "p * (q * r)",
            "~(p * q)",
            "~~p",
            "(p + q) * r",
            "p | q & r",
            "~bot",
            "p -o ~q",
        ] {
            assert_eq!(parse_formula(src).unwrap().to_string(), src);
        }
    }
}
