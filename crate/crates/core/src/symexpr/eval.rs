use std::collections::BTreeMap;

use num_traits::{ToPrimitive, Zero};

use super::rational::{exact_pow, to_f64};
use super::{Expr, Rational};

/// Numeric values for opaque symbols.
pub type Bindings = BTreeMap<String, f64>;

/// Floating-point value of `e` at `x = x0`, or `None` where the expression is
/// undefined (division by zero, `ln` of a non-positive value, a non-integer
/// power of a negative base, overflow, or an unbound symbol).
pub fn evaluate(e: &Expr, x0: f64) -> Option<f64> {
    evaluate_with(e, x0, &Bindings::new())
}

pub fn evaluate_with(e: &Expr, x0: f64, symbols: &Bindings) -> Option<f64> {
    let v = eval(e, x0, symbols)?;
    v.is_finite().then_some(v)
}

fn eval(e: &Expr, x0: f64, env: &Bindings) -> Option<f64> {
    let v = match e {
        Expr::Const(c) => to_f64(c),
        Expr::Var => x0,
        Expr::Symbol(s) => *env.get(s)?,
        Expr::Sum(ts) => {
            let mut acc = 0.0;
            for t in ts {
                acc += eval(t, x0, env)?;
            }
            acc
        }
        Expr::Product(fs) => {
            let mut acc = 1.0;
            for f in fs {
                acc *= eval(f, x0, env)?;
            }
            acc
        }
        Expr::Quotient(a, b) => {
            let den = eval(b, x0, env)?;
            if den == 0.0 {
                return None;
            }
            eval(a, x0, env)? / den
        }
        Expr::Power(b, r) => {
            let base = eval(b, x0, env)?;
            if r.is_integer() {
                let n = r.to_integer().to_i32()?;
                if base == 0.0 && n < 0 {
                    return None;
                }
                base.powi(n)
            } else if base < 0.0 {
                return None;
            } else if base == 0.0 {
                if to_f64(r) > 0.0 {
                    0.0
                } else {
                    return None;
                }
            } else {
                base.powf(to_f64(r))
            }
        }
        Expr::Ln(a) => {
            let v = eval(a, x0, env)?;
            if v <= 0.0 {
                return None;
            }
            v.ln()
        }
        Expr::Exp(a) => eval(a, x0, env)?.exp(),
        Expr::Neg(a) => -eval(a, x0, env)?,
    };
    v.is_finite().then_some(v)
}

/// Exact value at a rational point, when the expression is a rational
/// function there: integer powers, perfect rational roots, `exp(0)` and
/// `ln(1)`. `None` when undefined or not rational at the point.
pub(crate) fn evaluate_exact(e: &Expr, x0: &Rational, env: &BTreeMap<String, Rational>) -> Option<Rational> {
    Some(match e {
        Expr::Const(c) => c.clone(),
        Expr::Var => x0.clone(),
        Expr::Symbol(s) => env.get(s)?.clone(),
        Expr::Sum(ts) => {
            let mut acc = Rational::zero();
            for t in ts {
                acc += evaluate_exact(t, x0, env)?;
            }
            acc
        }
        Expr::Product(fs) => {
            let mut acc = Rational::from_integer(1.into());
            for f in fs {
                acc *= evaluate_exact(f, x0, env)?;
            }
            acc
        }
        Expr::Quotient(a, b) => {
            let den = evaluate_exact(b, x0, env)?;
            if den.is_zero() {
                return None;
            }
            evaluate_exact(a, x0, env)? / den
        }
        Expr::Power(b, r) => {
            let base = evaluate_exact(b, x0, env)?;
            if base.is_zero() && !r.is_integer() && *r > Rational::zero() {
                return Some(base);
            }
            exact_pow(&base, r)?
        }
        Expr::Ln(a) => {
            let v = evaluate_exact(a, x0, env)?;
            if v != Rational::from_integer(1.into()) {
                return None;
            }
            Rational::zero()
        }
        Expr::Exp(a) => {
            if !evaluate_exact(a, x0, env)?.is_zero() {
                return None;
            }
            Rational::from_integer(1.into())
        }
        Expr::Neg(a) => -evaluate_exact(a, x0, env)?,
    })
}
