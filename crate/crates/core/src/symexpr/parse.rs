//! Recursive-descent parser for scalar expressions.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := factor (('*' | '/') factor)*
//! factor   := '-' factor | atom ('^' exponent)?
//! exponent := integer | '-' integer | '(' '-'? integer ('/' integer)? ')'
//! atom     := number | 'x' | ident | '(' expr ')' | 'ln' '(' expr ')' | 'exp' '(' expr ')'
//! ```

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::rational::decimal;
use super::{Expr, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum TokenKind {
    Number(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub kind: TokenKind,
    pub offset: usize,
}

pub(crate) struct Lexer {
    tokens: Vec<Token>,
    pos: usize,
}

impl Lexer {
    pub fn new(text: &str) -> Result<Self> {
        let bytes = text.as_bytes();
        let mut tokens = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let start = i;
            let kind = match c {
                '+' => TokenKind::Plus,
                '-' => TokenKind::Minus,
                '*' => TokenKind::Star,
                '/' => TokenKind::Slash,
                '^' => TokenKind::Caret,
                '(' => TokenKind::LParen,
                ')' => TokenKind::RParen,
                _ if c.is_ascii_digit() || c == '.' => {
                    while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                        i += 1;
                    }
                    let lit = &text[start..i];
                    let value = decimal(lit)
                        .ok_or_else(|| Error::Syntax { offset: start, message: format!("malformed number `{lit}`") })?;
                    tokens.push(Token { kind: TokenKind::Number(value), offset: start });
                    continue;
                }
                _ if c.is_ascii_alphabetic() || c == '_' => {
                    while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                        i += 1;
                    }
                    tokens.push(Token { kind: TokenKind::Ident(text[start..i].to_string()), offset: start });
                    continue;
                }
                _ => return Err(Error::Syntax { offset: start, message: format!("unexpected character `{c}`") }),
            };
            tokens.push(Token { kind, offset: start });
            i += 1;
        }
        tokens.push(Token { kind: TokenKind::Eof, offset: text.len() });
        Ok(Lexer { tokens, pos: 0 })
    }

    pub fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    pub fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    pub fn eat(&mut self, kind: &TokenKind) -> bool {
        if &self.peek().kind == kind {
            self.next();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, kind: TokenKind, what: &str) -> Result<Token> {
        if self.peek().kind == kind {
            Ok(self.next())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    pub fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax { offset: self.peek().offset, message: message.into() }
    }

    pub fn expect_eof(&self) -> Result<()> {
        match self.peek().kind {
            TokenKind::Eof => Ok(()),
            _ => Err(self.error("unexpected trailing input")),
        }
    }

    /// Exponent after `^`: a signed integer, or a parenthesized signed
    /// rational.
    pub fn exponent(&mut self) -> Result<Rational> {
        if self.eat(&TokenKind::LParen) {
            let neg = self.eat(&TokenKind::Minus);
            let num = self.integer()?;
            let mut r = Rational::from_integer(num);
            if self.eat(&TokenKind::Slash) {
                let den = self.integer()?;
                if den.is_zero() {
                    return Err(self.error("zero denominator in exponent"));
                }
                r /= Rational::from_integer(den);
            }
            self.expect(TokenKind::RParen, "`)` after exponent")?;
            Ok(if neg { -r } else { r })
        } else {
            let neg = self.eat(&TokenKind::Minus);
            let r = Rational::from_integer(self.integer()?);
            Ok(if neg { -r } else { r })
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        match &self.peek().kind {
            TokenKind::Number(n) if n.is_integer() && !n.is_negative() => {
                let v = n.to_integer();
                self.next();
                Ok(v)
            }
            _ => Err(self.error("expected integer exponent")),
        }
    }
}

/// Parser configuration: identifier bindings and whether free identifiers
/// become opaque symbols.
#[derive(Clone, Debug, Default)]
pub struct Parser {
    bindings: BTreeMap<String, Expr>,
    strict: bool,
}

impl Parser {
    pub fn new() -> Self {
        Self::default()
    }

    /// Substitute `expr` wherever the identifier `name` occurs.
    pub fn bind(mut self, name: impl Into<String>, expr: Expr) -> Self {
        self.bindings.insert(name.into(), expr);
        self
    }

    /// Reject identifiers that are neither `x`, a function name, nor bound.
    pub fn strict(mut self, strict: bool) -> Self {
        self.strict = strict;
        self
    }

    pub fn parse(&self, text: &str) -> Result<Expr> {
        let mut lx = Lexer::new(text)?;
        let e = self.expr(&mut lx)?;
        lx.expect_eof()?;
        Ok(e)
    }

    fn expr(&self, lx: &mut Lexer) -> Result<Expr> {
        let first = self.term(lx)?;
        let mut terms: Option<Vec<Expr>> = None;
        loop {
            let neg = match lx.peek().kind {
                TokenKind::Plus => false,
                TokenKind::Minus => true,
                _ => break,
            };
            lx.next();
            let t = self.term(lx)?;
            let t = if neg { Expr::Neg(Box::new(t)) } else { t };
            let acc = terms.get_or_insert_with(|| match &first {
                Expr::Sum(ts) => ts.clone(),
                other => vec![other.clone()],
            });
            acc.push(t);
        }
        Ok(terms.map(Expr::Sum).unwrap_or(first))
    }

    fn term(&self, lx: &mut Lexer) -> Result<Expr> {
        // A leading minus negates the whole product: -a*b is -(a*b).
        if lx.eat(&TokenKind::Minus) {
            return Ok(Expr::Neg(Box::new(self.term(lx)?)));
        }
        let mut acc = self.factor(lx)?;
        loop {
            match lx.peek().kind {
                TokenKind::Star => {
                    lx.next();
                    let f = self.factor(lx)?;
                    acc = match acc {
                        Expr::Product(mut fs) => {
                            fs.push(f);
                            Expr::Product(fs)
                        }
                        other => Expr::Product(vec![other, f]),
                    };
                }
                TokenKind::Slash => {
                    lx.next();
                    let f = self.factor(lx)?;
                    acc = Expr::Quotient(Box::new(acc), Box::new(f));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&self, lx: &mut Lexer) -> Result<Expr> {
        if lx.eat(&TokenKind::Minus) {
            return Ok(Expr::Neg(Box::new(self.factor(lx)?)));
        }
        let base = self.atom(lx)?;
        if lx.eat(&TokenKind::Caret) {
            let r = lx.exponent()?;
            return Ok(Expr::Power(Box::new(base), r));
        }
        Ok(base)
    }

    fn atom(&self, lx: &mut Lexer) -> Result<Expr> {
        let tok = lx.next();
        match tok.kind {
            TokenKind::Number(n) => Ok(Expr::Const(n)),
            TokenKind::LParen => {
                let e = self.expr(lx)?;
                lx.expect(TokenKind::RParen, "`)`")?;
                Ok(e)
            }
            TokenKind::Ident(name) => {
                if lx.peek().kind == TokenKind::LParen {
                    let wrap: fn(Box<Expr>) -> Expr = match name.as_str() {
                        "ln" => Expr::Ln,
                        "exp" => Expr::Exp,
                        _ => return Err(Error::UnknownIdentifier { name, offset: tok.offset }),
                    };
                    lx.next();
                    let arg = self.expr(lx)?;
                    lx.expect(TokenKind::RParen, "`)`")?;
                    return Ok(wrap(Box::new(arg)));
                }
                if name == "x" {
                    Ok(Expr::Var)
                } else if let Some(e) = self.bindings.get(&name) {
                    Ok(e.clone())
                } else if self.strict || name == "ln" || name == "exp" {
                    Err(Error::UnknownIdentifier { name, offset: tok.offset })
                } else {
                    Ok(Expr::Symbol(name))
                }
            }
            TokenKind::Eof => Err(Error::Syntax { offset: tok.offset, message: "unexpected end of input".into() }),
            other => Err(Error::Syntax { offset: tok.offset, message: format!("unexpected token {other:?}") }),
        }
    }
}

/// Parses with the default configuration: free identifiers other than `x`
/// are opaque symbols.
pub fn parse_expr(text: &str) -> Result<Expr> {
    Parser::new().parse(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::rat;

    #[test]
    fn sum_of_power_and_constant() {
        assert_eq!(
            parse_expr("x^2 + 1").unwrap(),
            Expr::Sum(vec![Expr::Power(Box::new(Expr::Var), rat(2, 1)), Expr::int(1)])
        );
    }

    #[test]
    fn bound_identifier_is_substituted() {
        let th = parse_expr("x^2 - 1").unwrap();
        let e = Parser::new().bind("th", th.clone()).parse("(x^2 - th)^(-1/4)").unwrap();
        let expected = Expr::Power(
            Box::new(Expr::Sum(vec![Expr::Power(Box::new(Expr::Var), rat(2, 1)), Expr::Neg(Box::new(th))])),
            rat(-1, 4),
        );
        assert_eq!(e, expected);
    }

    #[test]
    fn unbalanced_parenthesis_reports_offset() {
        match parse_expr("1/(x+c") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 6),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_function_and_strict_mode() {
        assert!(matches!(parse_expr("sin(x)"), Err(Error::UnknownIdentifier { offset: 0, .. })));
        assert!(matches!(Parser::new().strict(true).parse("x + c"), Err(Error::UnknownIdentifier { offset: 4, .. })));
        assert_eq!(parse_expr("x + c").unwrap(), Expr::Sum(vec![Expr::Var, Expr::symbol("c")]));
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        assert_eq!(parse_expr("-x^2").unwrap(), Expr::Neg(Box::new(Expr::Power(Box::new(Expr::Var), rat(2, 1)))));
        assert_eq!(parse_expr("-x*y").unwrap(), Expr::Neg(Box::new(Expr::Product(vec![Expr::Var, Expr::symbol("y")]))));
    }

    #[test]
    fn bare_integer_exponent_then_division() {
        // x^2/3 is (x^2)/3; fractional exponents need parentheses.
        assert_eq!(
            parse_expr("x^2/3").unwrap(),
            Expr::Quotient(Box::new(Expr::Power(Box::new(Expr::Var), rat(2, 1))), Box::new(Expr::int(3)))
        );
        assert_eq!(parse_expr("x^-2").unwrap(), Expr::Power(Box::new(Expr::Var), rat(-2, 1)));
        assert!(parse_expr("x^(1/0)").is_err());
    }

    #[test]
    fn decimals_are_exact() {
        assert_eq!(parse_expr("0.25").unwrap(), Expr::Const(rat(1, 4)));
    }
}
