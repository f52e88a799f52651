use num_traits::One;

use super::simplify::{make_exp, make_power, make_product, make_sum, simplify};
use super::{Expr, Rational};

/// d/dx of any expression. The input is simplified first, so the result is
/// canonical.
pub fn differentiate(e: &Expr) -> Expr {
    derive(&simplify(e))
}

pub(crate) fn derive(e: &Expr) -> Expr {
    match e {
        Expr::Const(_) | Expr::Symbol(_) => Expr::zero(),
        Expr::Var => Expr::one(),
        Expr::Sum(ts) => make_sum(ts.iter().map(derive).collect()),
        Expr::Product(fs) => {
            let mut terms = Vec::with_capacity(fs.len());
            for (i, f) in fs.iter().enumerate() {
                let df = derive(f);
                if df.is_zero() {
                    continue;
                }
                let mut factors = fs.clone();
                factors[i] = df;
                terms.push(make_product(factors));
            }
            make_sum(terms)
        }
        Expr::Quotient(a, b) => {
            // (a'b - ab') / b^2
            let (a, b) = (simplify(a), simplify(b));
            let num = make_sum(vec![
                make_product(vec![derive(&a), b.clone()]),
                make_product(vec![Expr::int(-1), a, derive(&b)]),
            ]);
            make_product(vec![num, make_power(b, Rational::from_integer((-2).into()))])
        }
        Expr::Power(b, r) => {
            let db = derive(b);
            if db.is_zero() {
                return Expr::zero();
            }
            make_product(vec![Expr::Const(r.clone()), make_power((**b).clone(), r - Rational::one()), db])
        }
        Expr::Ln(a) => make_product(vec![derive(a), make_power((**a).clone(), -Rational::one())]),
        Expr::Exp(a) => make_product(vec![make_exp((**a).clone()), derive(a)]),
        Expr::Neg(a) => make_product(vec![Expr::int(-1), derive(a)]),
    }
}
