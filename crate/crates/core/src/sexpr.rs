//! The derivation file format: `(RULE "sequent" child*)`.

use std::fmt::Write;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub label: String,
    pub text: String,
    pub children: Vec<Node>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("derivation syntax error at position {pos}: {message}")]
pub struct SexprError {
    pub pos: usize,
    pub message: String,
}

pub fn parse(src: &str) -> Result<Node, SexprError> {
    let mut r = Reader { src, pos: 0 };
    let node = r.node()?;
    r.skip_ws();
    if r.pos != src.len() {
        return Err(r.err("unexpected trailing input"));
    }
    Ok(node)
}

struct Reader<'a> {
    src: &'a str,
    pos: usize,
}

impl Reader<'_> {
    fn err(&self, message: &str) -> SexprError {
        SexprError {
            pos: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else if c == ';' {
                // line comment
                while let Some(c) = self.src[self.pos..].chars().next() {
                    self.pos += c.len_utf8();
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn node(&mut self) -> Result<Node, SexprError> {
        self.skip_ws();
        if self.peek() != Some('(') {
            return Err(self.err("expected '('"));
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a rule label"));
        }
        let label = self.src[start..self.pos].to_string();
        self.skip_ws();
        if self.peek() != Some('"') {
            return Err(self.err("expected a quoted sequent"));
        }
        self.pos += 1;
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c != '"') {
            self.pos += self.peek().map_or(1, char::len_utf8);
        }
        if self.peek() != Some('"') {
            return Err(self.err("unterminated string"));
        }
        let text = self.src[start..self.pos].to_string();
        self.pos += 1;
        let mut children = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(')') => {
                    self.pos += 1;
                    return Ok(Node {
                        label,
                        text,
                        children,
                    });
                }
                Some('(') => children.push(self.node()?),
                _ => return Err(self.err("expected '(' or ')'")),
            }
        }
    }
}

/// Pretty-prints one node per line, children indented by two spaces.
pub fn render(node: &Node) -> String {
    let mut out = String::new();
    render_into(node, 0, &mut out);
    out.push('\n');
    out
}

fn render_into(node: &Node, indent: usize, out: &mut String) {
    let _ = write!(out, "{:indent$}({} \"{}\"", "", node.label, node.text);
    for c in &node.children {
        out.push('\n');
        render_into(c, indent + 2, out);
    }
    out.push(')');
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_nested() {
        let src = r#"(Raa "~~p |- p" (LolliE "~~p, ~p |- bot" (Ax "~~p |- ~~p") (Ax "~p |- ~p")))"#;
        let n = parse(src).unwrap();
        assert_eq!(n.label, "Raa");
        assert_eq!(n.children.len(), 1);
        assert_eq!(n.children[0].children.len(), 2);
        assert_eq!(n.children[0].children[1].text, "~p |- ~p");
        assert_eq!(parse(&render(&n)).unwrap(), n);
    }

    #[test]
    fn reports_errors() {
        assert!(parse("(Ax \"p |- p\"").is_err());
        assert!(parse("Ax").is_err());
        assert!(parse("(Ax \"p |- p\") x").is_err());
    }
}
