//! Printer emitting the parser's grammar.
//!
//! [`write_expr`] prints any tree faithfully, so raw parse trees re-parse to
//! the same tree. [`present`] rewrites a canonical tree into a readable
//! presentation (quotients for negative powers, `a - b` for negative terms)
//! before printing.

use std::fmt;

use num_traits::{One, Signed, Zero};

use super::{Expr, Rational};

pub(crate) fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Binding strength: 1 sum, 2 product/quotient, 3 unary minus, 4 power,
/// 5 atom.
pub(crate) fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Sum(ts) if ts.len() > 1 => 1,
        Expr::Sum(_) => 5,
        Expr::Product(fs) if fs.len() > 1 => 2,
        Expr::Product(_) => 5,
        Expr::Quotient(..) => 2,
        Expr::Const(c) if !c.is_integer() => 2,
        Expr::Const(c) if c.is_negative() => 3,
        Expr::Neg(_) => 3,
        Expr::Power(..) => 4,
        _ => 5,
    }
}

/// Leading operand of `*` or `/`. A bare `-a` there would re-parse as a
/// negation of the whole product.
fn leading(e: &Expr) -> String {
    match e {
        Expr::Neg(_) => format!("({e})"),
        _ => with_prec(e, 2),
    }
}

pub(crate) fn with_prec(e: &Expr, min: u8) -> String {
    if prec(e) < min {
        format!("({e})")
    } else {
        e.to_string()
    }
}

pub(crate) fn write_expr(f: &mut fmt::Formatter<'_>, e: &Expr) -> fmt::Result {
    match e {
        Expr::Const(c) => f.write_str(&fmt_rational(c)),
        Expr::Var => f.write_str("x"),
        Expr::Symbol(s) => f.write_str(s),
        Expr::Sum(ts) => {
            if ts.is_empty() {
                return f.write_str("0");
            }
            for (i, t) in ts.iter().enumerate() {
                match (i, t) {
                    (0, t) => f.write_str(&with_prec(t, 2))?,
                    (_, Expr::Neg(inner)) => write!(f, " - {}", with_prec(inner, 2))?,
                    (_, t) => write!(f, " + {}", with_prec(t, 2))?,
                }
            }
            Ok(())
        }
        Expr::Product(fs) => {
            if fs.is_empty() {
                return f.write_str("1");
            }
            for (i, factor) in fs.iter().enumerate() {
                if i == 0 {
                    f.write_str(&leading(factor))?;
                } else {
                    write!(f, "*{}", with_prec(factor, 3))?;
                }
            }
            Ok(())
        }
        Expr::Quotient(a, b) => write!(f, "{}/{}", leading(a), with_prec(b, 3)),
        // A constant operand re-parses to an equal value without brackets.
        Expr::Neg(a) if matches!(**a, Expr::Const(_)) => write!(f, "-{a}"),
        Expr::Neg(a) => write!(f, "-{}", with_prec(a, 2)),
        Expr::Power(b, r) => {
            let base = with_prec(b, 5);
            if r.is_integer() && !r.is_negative() {
                write!(f, "{base}^{}", fmt_rational(r))
            } else {
                write!(f, "{base}^({})", fmt_rational(r))
            }
        }
        Expr::Ln(a) => write!(f, "ln({a})"),
        Expr::Exp(a) => write!(f, "exp({a})"),
    }
}

fn degree_hint(e: &Expr) -> Rational {
    match e {
        Expr::Var => Rational::one(),
        Expr::Power(b, r) => degree_hint(b) * r,
        Expr::Product(fs) => fs.iter().map(degree_hint).sum(),
        Expr::Sum(ts) => ts.iter().map(degree_hint).max().unwrap_or_else(Rational::zero),
        _ => Rational::zero(),
    }
}

/// Readable presentation of a canonical tree.
pub(crate) fn present(e: &Expr) -> Expr {
    match e {
        Expr::Const(c) if c.is_negative() => Expr::Neg(Box::new(Expr::Const(-c))),
        Expr::Const(_) | Expr::Var | Expr::Symbol(_) => e.clone(),
        Expr::Sum(ts) => {
            let mut order: Vec<&Expr> = ts.iter().collect();
            // Descending degree, constants last; stable on canonical order.
            order.sort_by(|a, b| {
                let ca = matches!(a, Expr::Const(_));
                let cb = matches!(b, Expr::Const(_));
                ca.cmp(&cb).then_with(|| degree_hint(b).cmp(&degree_hint(a)))
            });
            Expr::Sum(
                order
                    .into_iter()
                    .map(|t| match negated_term(t) {
                        Some(pos) => Expr::Neg(Box::new(present(&pos))),
                        None => present(t),
                    })
                    .collect(),
            )
        }
        Expr::Product(fs) => present_product(fs),
        Expr::Power(b, r) if r.is_negative() => {
            let den = if (-r).is_one() { present(b) } else { Expr::Power(Box::new(present(b)), -r) };
            Expr::Quotient(Box::new(Expr::one()), Box::new(den))
        }
        Expr::Power(b, r) => Expr::Power(Box::new(present(b)), r.clone()),
        Expr::Quotient(a, b) => Expr::Quotient(Box::new(present(a)), Box::new(present(b))),
        Expr::Ln(a) => Expr::Ln(Box::new(present(a))),
        Expr::Exp(a) => Expr::Exp(Box::new(present(a))),
        Expr::Neg(a) => Expr::Neg(Box::new(present(a))),
    }
}

fn present_product(fs: &[Expr]) -> Expr {
    let (coeff, rest) = match fs.first() {
        Some(Expr::Const(c)) => (c.clone(), &fs[1..]),
        _ => (Rational::one(), fs),
    };
    let mut num = Vec::new();
    let mut den = Vec::new();
    let abs = coeff.abs();
    let p = Rational::from_integer(abs.numer().clone());
    let q = Rational::from_integer(abs.denom().clone());
    for f in rest {
        match f {
            Expr::Power(b, r) if r.is_negative() => {
                den.push(if (-r).is_one() { present(b) } else { Expr::Power(Box::new(present(b)), -r) })
            }
            other => num.push(present(other)),
        }
    }
    if !p.is_one() || num.is_empty() {
        num.insert(0, Expr::Const(p));
    }
    if !q.is_one() {
        den.insert(0, Expr::Const(q));
    }
    let collect = |mut v: Vec<Expr>| if v.len() == 1 { v.pop().unwrap() } else { Expr::Product(v) };
    let num = collect(num);
    let body = if den.is_empty() { num } else { Expr::Quotient(Box::new(num), Box::new(collect(den))) };
    if coeff.is_negative() {
        Expr::Neg(Box::new(body))
    } else {
        body
    }
}

/// `-t` for a canonical term that prints with a leading minus.
pub(crate) fn negated_term(t: &Expr) -> Option<Expr> {
    match t {
        Expr::Const(c) if c.is_negative() => Some(Expr::Const(-c)),
        Expr::Product(fs) => match fs.first() {
            Some(Expr::Const(c)) if c.is_negative() => {
                let mut fs = fs.clone();
                if (-c).is_one() {
                    fs.remove(0);
                } else {
                    fs[0] = Expr::Const(-c);
                }
                Some(if fs.len() == 1 { fs.pop().unwrap() } else { Expr::Product(fs) })
            }
            _ => None,
        },
        _ => None,
    }
}
