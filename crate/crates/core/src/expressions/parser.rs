//! Recursive-descent parser for the candidate/velocity expression grammar.
//!
//! ```text
//! expr     := term (('+'|'-') term)*
//! term     := factor (('*'|'/') factor)*
//! factor   := '-' factor | base ('^' exponent)?
//! base     := 'a' | 'b' | 's' | number | '(' expr ')' | 'sqrt' '(' expr ')'
//! exponent := ['+'|'-'] number | 's' | '(' expr ')'      -- must not depend on a, b
//! ```

use super::Expr;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at position {pos}")]
    UnknownIdentifier { pos: usize, name: String },
    #[error("exponent at position {pos} depends on a or b")]
    NonConstantExponent { pos: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

impl Lexer {
    fn new(src: &str) -> Result<Self, ParseError> {
        let bytes = src.as_bytes();
        let mut toks = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let ch = bytes[i] as char;
            if ch.is_ascii_whitespace() {
                i += 1;
            } else if ch.is_ascii_digit() || ch == '.' {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let text = &src[start..i];
                let v: f64 = text.parse().map_err(|_| ParseError::Syntax {
                    pos: start,
                    msg: format!("malformed number `{text}`"),
                })?;
                toks.push((Tok::Num(v), start));
            } else if ch.is_ascii_alphabetic() || ch == '_' {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                toks.push((Tok::Ident(src[start..i].to_string()), start));
            } else if "+-*/^()".contains(ch) {
                toks.push((Tok::Op(ch), i));
                i += 1;
            } else {
                return Err(ParseError::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{ch}`"),
                });
            }
        }
        toks.push((Tok::End, src.len()));
        Ok(Lexer { toks })
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    s: f64,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }
    fn pos(&self) -> usize {
        self.toks[self.at].1
    }
    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }
    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if *self.peek() == Tok::Op(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&format!("expected `{c}`")))
        }
    }
    fn unexpected(&self, msg: &str) -> ParseError {
        let found = match self.peek() {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Op(c) => format!("`{c}`"),
            Tok::End => "end of input".into(),
        };
        ParseError::Syntax {
            pos: self.pos(),
            msg: format!("{msg}, found {found}"),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Op('-') => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Tok::Op('*') => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Tok::Op('/') => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Op('-') {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.base()?;
        if *self.peek() == Tok::Op('^') {
            self.bump();
            let p = self.exponent()?;
            return Ok(Expr::Pow(Box::new(base), p));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(Expr::Const(v))
            }
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "a" => Ok(Expr::A),
                    "b" => Ok(Expr::B),
                    "s" => Ok(Expr::Const(self.s)),
                    "sqrt" => {
                        self.expect('(')?;
                        let inner = self.expr()?;
                        self.expect(')')?;
                        Ok(Expr::Sqrt(Box::new(inner)))
                    }
                    _ => Err(ParseError::UnknownIdentifier { pos, name }),
                }
            }
            Tok::Op('(') => {
                self.bump();
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            _ => Err(self.unexpected("expected a, b, s, a number, `(` or sqrt")),
        }
    }

    fn exponent(&mut self) -> Result<f64, ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Op('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect(')')?;
                e.constant_value().ok_or(ParseError::NonConstantExponent { pos })
            }
            Tok::Op(c @ ('+' | '-')) => {
                self.bump();
                match self.bump() {
                    Tok::Num(v) => Ok(if c == '-' { -v } else { v }),
                    _ => Err(ParseError::Syntax {
                        pos,
                        msg: "expected a number after the exponent sign".into(),
                    }),
                }
            }
            Tok::Num(v) => {
                self.bump();
                Ok(v)
            }
            Tok::Ident(name) if name == "s" => {
                self.bump();
                Ok(self.s)
            }
            Tok::Ident(_) => Err(ParseError::NonConstantExponent { pos }),
            _ => Err(self.unexpected("expected a signed number, `s` or `(` after `^`")),
        }
    }
}

/// Parse `text`, substituting the parameter `s` by `s_value`.
pub fn parse(text: &str, s_value: f64) -> Result<Expr, ParseError> {
    let lx = Lexer::new(text)?;
    let mut p = Parser {
        toks: lx.toks,
        at: 0,
        s: s_value,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("unexpected trailing input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_positions() {
        match parse("(a-b)^2 * c", 0.0) {
            Err(ParseError::UnknownIdentifier { pos, name }) => {
                assert_eq!(pos, 10);
                assert_eq!(name, "c");
            }
            other => panic!("{other:?}"),
        }
        match parse("(a+b", 0.0) {
            Err(ParseError::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse("a^(b)", 0.0),
            Err(ParseError::NonConstantExponent { pos: 2 })
        ));
        assert!(matches!(parse("a^2^3", 0.0), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse("a + # b", 0.0), Err(ParseError::Syntax { pos: 4, .. })));
    }

    #[test]
    fn exponent_forms() {
        let e = parse("(a*b)^(s/2)", 3.0).unwrap();
        assert!(matches!(e, Expr::Pow(_, p) if p == 1.5));
        let e = parse("a^-1", 0.0).unwrap();
        assert!(matches!(e, Expr::Pow(_, p) if p == -1.0));
        let e = parse("a^s", 2.5).unwrap();
        assert!(matches!(e, Expr::Pow(_, p) if p == 2.5));
        assert!(matches!(
            parse("a^b", 0.0),
            Err(ParseError::NonConstantExponent { pos: 2 })
        ));
        let e = parse("a^1e-1", 0.0).unwrap();
        assert!(matches!(e, Expr::Pow(_, p) if p == 0.1));
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        let e = parse("-a^2", 0.0).unwrap();
        assert!(matches!(e, Expr::Neg(_)));
    }
}
