//! Text form of density operators.
//!
//! ```text
//! op     := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | atom ('^' exponent)?
//! atom   := number | 'x' | 't' | 'w' | 'd' | ident | '(' op ')' | ('ln' | 'exp') '(' op ')'
//! ```
//!
//! `*` is composition, `t^a` takes any rational exponent, other operators
//! only non-negative integer powers. Division is by scalars only.

use num_traits::{Signed, ToPrimitive, Zero};

use super::DensOp;
use crate::error::{Error, Result};
use crate::symexpr::{fmt_rational, negated_term, present, with_prec, Expr, Lexer, Rational, TokenKind};

enum Val {
    Scalar(Expr),
    Op(DensOp),
}

impl Val {
    fn into_op(self) -> DensOp {
        match self {
            Val::Scalar(e) => DensOp::scalar(e.simplify()),
            Val::Op(o) => o,
        }
    }
}

/// Parses the operator DSL, e.g. `t^2 * (d^2 - w^2 - w)`.
pub fn parse_op(text: &str) -> Result<DensOp> {
    let mut lx = Lexer::new(text)?;
    let v = op(&mut lx)?;
    lx.expect_eof()?;
    Ok(v.into_op())
}

fn op(lx: &mut Lexer) -> Result<Val> {
    let mut acc = term(lx)?;
    loop {
        let offset = lx.peek().offset;
        let neg = match lx.peek().kind {
            TokenKind::Plus => false,
            TokenKind::Minus => true,
            _ => return Ok(acc),
        };
        lx.next();
        let rhs = term(lx)?;
        acc = match (acc, rhs) {
            (Val::Scalar(a), Val::Scalar(b)) => {
                let b = if neg { Expr::Neg(Box::new(b)) } else { b };
                Val::Scalar(Expr::Sum(vec![a, b]))
            }
            (a, b) => {
                let (a, b) = (a.into_op(), b.into_op());
                let r = if neg { a.sub(&b) } else { a.add(&b) };
                Val::Op(r.map_err(|e| at(e, offset))?)
            }
        };
    }
}

fn at(e: Error, offset: usize) -> Error {
    match e {
        Error::WeightMismatch { .. } => e,
        other => Error::Syntax { offset, message: other.to_string() },
    }
}

fn term(lx: &mut Lexer) -> Result<Val> {
    let mut acc = factor(lx)?;
    loop {
        match lx.peek().kind {
            TokenKind::Star => {
                lx.next();
                let rhs = factor(lx)?;
                acc = match (acc, rhs) {
                    (Val::Scalar(a), Val::Scalar(b)) => Val::Scalar(Expr::Product(vec![a, b])),
                    (a, b) => Val::Op(a.into_op().multiply(&b.into_op())),
                };
            }
            TokenKind::Slash => {
                let offset = lx.peek().offset;
                lx.next();
                let rhs = factor(lx)?;
                acc = match (acc, rhs) {
                    (_, Val::Op(_)) => return Err(Error::Syntax { offset, message: "division by an operator".into() }),
                    (Val::Scalar(a), Val::Scalar(b)) => Val::Scalar(Expr::Quotient(Box::new(a), Box::new(b))),
                    (Val::Op(a), Val::Scalar(b)) => Val::Op(a.scale_left(&b.simplify().recip())),
                };
            }
            _ => return Ok(acc),
        }
    }
}

fn factor(lx: &mut Lexer) -> Result<Val> {
    if lx.eat(&TokenKind::Minus) {
        return Ok(match factor(lx)? {
            Val::Scalar(e) => Val::Scalar(Expr::Neg(Box::new(e))),
            Val::Op(o) => Val::Op(o.neg()),
        });
    }
    let is_t = matches!(&lx.peek().kind, TokenKind::Ident(n) if n == "t");
    let base = atom(lx)?;
    if !lx.eat(&TokenKind::Caret) {
        return Ok(base);
    }
    let offset = lx.peek().offset;
    let r = lx.exponent()?;
    Ok(match base {
        Val::Scalar(e) => Val::Scalar(Expr::Power(Box::new(e), r)),
        Val::Op(_) if is_t => Val::Op(DensOp::t_pow(r)),
        Val::Op(o) => {
            let n = (r.is_integer() && !r.is_negative()).then(|| r.to_integer().to_u32()).flatten();
            match n {
                Some(n) => Val::Op(o.pow(n)),
                None => {
                    return Err(Error::Syntax {
                        offset,
                        message: "operators only take non-negative integer powers".into(),
                    })
                }
            }
        }
    })
}

fn atom(lx: &mut Lexer) -> Result<Val> {
    let tok = lx.next();
    match tok.kind {
        TokenKind::Number(n) => Ok(Val::Scalar(Expr::Const(n))),
        TokenKind::LParen => {
            let v = op(lx)?;
            lx.expect(TokenKind::RParen, "`)`")?;
            Ok(v)
        }
        TokenKind::Ident(name) => {
            if lx.peek().kind == TokenKind::LParen {
                let wrap: fn(Box<Expr>) -> Expr = match name.as_str() {
                    "ln" => Expr::Ln,
                    "exp" => Expr::Exp,
                    _ => return Err(Error::UnknownIdentifier { name, offset: tok.offset }),
                };
                lx.next();
                let arg_offset = lx.peek().offset;
                let arg = match op(lx)? {
                    Val::Scalar(e) => e,
                    Val::Op(_) => {
                        return Err(Error::Syntax { offset: arg_offset, message: format!("{name} of an operator") })
                    }
                };
                lx.expect(TokenKind::RParen, "`)`")?;
                return Ok(Val::Scalar(wrap(Box::new(arg))));
            }
            Ok(match name.as_str() {
                "x" => Val::Scalar(Expr::Var),
                "t" => Val::Op(DensOp::t_pow(Rational::from_integer(1.into()))),
                "w" => Val::Op(DensOp::w()),
                "d" => Val::Op(DensOp::d()),
                "ln" | "exp" => return Err(Error::UnknownIdentifier { name, offset: tok.offset }),
                _ => Val::Scalar(Expr::Symbol(name)),
            })
        }
        TokenKind::Eof => Err(Error::Syntax { offset: tok.offset, message: "unexpected end of input".into() }),
        other => Err(Error::Syntax { offset: tok.offset, message: format!("unexpected token {other:?}") }),
    }
}

fn monomial(p: u32, q: u32) -> String {
    let part = |name: &str, k: u32| match k {
        0 => None,
        1 => Some(name.to_string()),
        k => Some(format!("{name}^{k}")),
    };
    [part("w", p), part("d", q)].into_iter().flatten().collect::<Vec<_>>().join("*")
}

pub(super) fn print_op(a: &DensOp) -> String {
    let mut body = String::new();
    let mut count = 0;
    let mut leading_neg = false;
    for (&(p, q), c) in a.coeffs() {
        let (neg, abs) = match negated_term(c) {
            Some(pos) => (true, pos),
            None => (false, c.clone()),
        };
        let m = monomial(p, q);
        let cs = present(&abs);
        let text = if m.is_empty() {
            with_prec(&cs, 2)
        } else if abs.is_one() {
            m
        } else {
            format!("{}*{m}", with_prec(&cs, 2))
        };
        match (count, neg) {
            (0, true) => {
                leading_neg = true;
                body.push('-');
                body.push_str(&text);
            }
            (0, false) => body.push_str(&text),
            (_, true) => body.push_str(&format!(" - {text}")),
            (_, false) => body.push_str(&format!(" + {text}")),
        }
        count += 1;
    }
    if count == 0 {
        return "0".into();
    }
    let w = a.weight();
    if w.is_zero() {
        return body;
    }
    let t = if w.is_integer() && w.is_positive() {
        if w == &Rational::from_integer(1.into()) {
            "t".to_string()
        } else {
            format!("t^{}", fmt_rational(w))
        }
    } else {
        format!("t^({})", fmt_rational(w))
    };
    if body == "1" {
        t
    } else if count > 1 || leading_neg || body.contains('/') {
        format!("{t} * ({body})")
    } else {
        format!("{t} * {body}")
    }
}
