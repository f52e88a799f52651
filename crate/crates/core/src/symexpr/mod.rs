//! Symbolic scalar expressions in the single variable `x`.
//!
//! Trees are built either by [`parse_expr`] (raw parse trees that keep
//! `Quotient` and `Neg` nodes) or through the smart constructors in this
//! module, which always return the simplified canonical shape. Every other
//! module in the crate works with canonical trees only.

mod diff;
mod equality;
mod eval;
mod parse;
mod print;
mod ratfunc;
mod rational;
mod simplify;

use std::fmt;
use std::ops;

pub use diff::differentiate;
pub use equality::{equal_probabilistic, is_zero_probabilistic, EqualityConfig, Interval};
pub use eval::{evaluate, evaluate_with, Bindings};
pub use parse::{parse_expr, Parser};
pub use ratfunc::normalize_rational;
pub use rational::{parse_rational, rat, Rational};
pub use simplify::simplify;

pub(crate) use parse::{Lexer, TokenKind};
pub(crate) use print::{fmt_rational, negated_term, present, with_prec};
pub(crate) use rational::{binomial, pow_int};

use num_traits::{One, Signed, Zero};

/// A scalar expression.
///
/// `Sum`, `Product`, `Power`, `Ln` and `Exp` are the canonical node kinds;
/// `Quotient` and `Neg` only occur in raw parse trees and disappear under
/// [`simplify`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Expr {
    Const(Rational),
    Var,
    /// Opaque named constant.
    Symbol(String),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Quotient(Box<Expr>, Box<Expr>),
    Power(Box<Expr>, Rational),
    Ln(Box<Expr>),
    Exp(Box<Expr>),
    Neg(Box<Expr>),
}

impl Expr {
    pub fn zero() -> Expr {
        Expr::Const(Rational::zero())
    }

    pub fn one() -> Expr {
        Expr::Const(Rational::one())
    }

    pub fn x() -> Expr {
        Expr::Var
    }

    pub fn constant(c: Rational) -> Expr {
        Expr::Const(c)
    }

    pub fn int(n: i64) -> Expr {
        Expr::Const(Rational::from_integer(n.into()))
    }

    pub fn frac(n: i64, d: i64) -> Expr {
        Expr::Const(rat(n, d))
    }

    pub fn symbol(name: impl Into<String>) -> Expr {
        Expr::Symbol(name.into())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Const(c) if c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Expr::Const(c) if c.is_one())
    }

    pub fn as_const(&self) -> Option<&Rational> {
        match self {
            Expr::Const(c) => Some(c),
            _ => None,
        }
    }

    /// `self^r`, simplified.
    pub fn pow(&self, r: Rational) -> Expr {
        simplify::make_power(self.clone(), r)
    }

    pub fn powi(&self, n: i64) -> Expr {
        self.pow(Rational::from_integer(n.into()))
    }

    pub fn sqrt(&self) -> Expr {
        self.pow(rat(1, 2))
    }

    pub fn recip(&self) -> Expr {
        self.powi(-1)
    }

    pub fn ln(&self) -> Expr {
        simplify::make_ln(self.clone())
    }

    pub fn exp(&self) -> Expr {
        simplify::make_exp(self.clone())
    }

    pub fn scale(&self, c: &Rational) -> Expr {
        simplify::make_product(vec![Expr::Const(c.clone()), self.clone()])
    }

    /// Derivative of a canonical tree; see [`differentiate`] for raw input.
    pub fn derivative(&self) -> Expr {
        diff::derive(self)
    }

    pub fn nth_derivative(&self, n: u32) -> Expr {
        let mut e = self.clone();
        for _ in 0..n {
            e = e.derivative();
        }
        e
    }

    pub fn simplify(&self) -> Expr {
        simplify::simplify(self)
    }

    /// Replace the variable `x` by `with`, then simplify.
    pub fn substitute(&self, with: &Expr) -> Expr {
        simplify(&self.replace(&|e| matches!(e, Expr::Var).then(|| with.clone())))
    }

    /// Replace every occurrence of the named symbol, then simplify.
    pub fn substitute_symbol(&self, name: &str, with: &Expr) -> Expr {
        simplify(&self.replace(&|e| match e {
            Expr::Symbol(s) if s == name => Some(with.clone()),
            _ => None,
        }))
    }

    fn replace(&self, f: &dyn Fn(&Expr) -> Option<Expr>) -> Expr {
        if let Some(r) = f(self) {
            return r;
        }
        match self {
            Expr::Const(_) | Expr::Var | Expr::Symbol(_) => self.clone(),
            Expr::Sum(ts) => Expr::Sum(ts.iter().map(|t| t.replace(f)).collect()),
            Expr::Product(fs) => Expr::Product(fs.iter().map(|t| t.replace(f)).collect()),
            Expr::Quotient(a, b) => Expr::Quotient(Box::new(a.replace(f)), Box::new(b.replace(f))),
            Expr::Power(b, r) => Expr::Power(Box::new(b.replace(f)), r.clone()),
            Expr::Ln(a) => Expr::Ln(Box::new(a.replace(f))),
            Expr::Exp(a) => Expr::Exp(Box::new(a.replace(f))),
            Expr::Neg(a) => Expr::Neg(Box::new(a.replace(f))),
        }
    }

    /// Names of all opaque symbols, sorted.
    pub fn symbols(&self) -> Vec<String> {
        let mut out = std::collections::BTreeSet::new();
        self.collect_symbols(&mut out);
        out.into_iter().collect()
    }

    fn collect_symbols(&self, out: &mut std::collections::BTreeSet<String>) {
        match self {
            Expr::Symbol(s) => {
                out.insert(s.clone());
            }
            Expr::Const(_) | Expr::Var => {}
            Expr::Sum(ts) | Expr::Product(ts) => ts.iter().for_each(|t| t.collect_symbols(out)),
            Expr::Quotient(a, b) => {
                a.collect_symbols(out);
                b.collect_symbols(out);
            }
            Expr::Power(a, _) | Expr::Ln(a) | Expr::Exp(a) | Expr::Neg(a) => a.collect_symbols(out),
        }
    }

    /// Whether the variable `x` occurs in the tree.
    pub fn depends_on_x(&self) -> bool {
        match self {
            Expr::Var => true,
            Expr::Const(_) | Expr::Symbol(_) => false,
            Expr::Sum(ts) | Expr::Product(ts) => ts.iter().any(Expr::depends_on_x),
            Expr::Quotient(a, b) => a.depends_on_x() || b.depends_on_x(),
            Expr::Power(a, _) | Expr::Ln(a) | Expr::Exp(a) | Expr::Neg(a) => a.depends_on_x(),
        }
    }

    /// Whether a canonical tree reads as negative when printed, i.e. it is a
    /// negative constant or a product with a negative leading coefficient.
    pub fn is_negative_term(&self) -> bool {
        match self {
            Expr::Const(c) => c.is_negative(),
            Expr::Product(fs) => matches!(fs.first(), Some(Expr::Const(c)) if c.is_negative()),
            Expr::Neg(_) => true,
            _ => false,
        }
    }

    /// Display string of the canonical form: simplified, with quotients and
    /// negations restored for readability. Re-parses to an equal expression.
    pub fn pretty(&self) -> String {
        print::present(&self.simplify()).to_string()
    }

    pub fn node_count(&self) -> usize {
        1 + match self {
            Expr::Const(_) | Expr::Var | Expr::Symbol(_) => 0,
            Expr::Sum(ts) | Expr::Product(ts) => ts.iter().map(Expr::node_count).sum(),
            Expr::Quotient(a, b) => a.node_count() + b.node_count(),
            Expr::Power(a, _) | Expr::Ln(a) | Expr::Exp(a) | Expr::Neg(a) => a.node_count(),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print::write_expr(f, self)
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

impl From<Rational> for Expr {
    fn from(c: Rational) -> Self {
        Expr::Const(c)
    }
}

// Arithmetic on canonical trees. Results are canonical when operands are.

impl ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        simplify::make_sum(vec![self, rhs])
    }
}

impl ops::Add for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        simplify::make_sum(vec![self.clone(), rhs.clone()])
    }
}

impl ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        simplify::make_sum(vec![self, -rhs])
    }
}

impl ops::Sub for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        simplify::make_sum(vec![self.clone(), -rhs])
    }
}

impl ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        simplify::make_product(vec![self, rhs])
    }
}

impl ops::Mul for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        simplify::make_product(vec![self.clone(), rhs.clone()])
    }
}

impl ops::Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        simplify::make_product(vec![self, rhs.recip()])
    }
}

impl ops::Div for &Expr {
    type Output = Expr;
    fn div(self, rhs: &Expr) -> Expr {
        simplify::make_product(vec![self.clone(), rhs.recip()])
    }
}

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        simplify::make_product(vec![Expr::int(-1), self])
    }
}

impl ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -self.clone()
    }
}

/// Sum of canonical trees.
pub fn sum(terms: impl IntoIterator<Item = Expr>) -> Expr {
    simplify::make_sum(terms.into_iter().collect())
}

/// Product of canonical trees.
pub fn product(factors: impl IntoIterator<Item = Expr>) -> Expr {
    simplify::make_product(factors.into_iter().collect())
}
