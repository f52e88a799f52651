//! Best-effort normalization.
//!
//! Canonical trees have flattened, sorted sums and products, folded
//! constants (leading in a product), like terms collected, powers of equal
//! bases merged and products distributed over sums. This is not a canonical
//! form for rational or transcendental expressions; identities are decided by
//! [`super::equal_probabilistic`].

use std::collections::BTreeMap;

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::exact_pow;
use super::{Expr, Rational};

/// Largest positive integer power of a sum that is expanded.
const MAX_EXPAND_POWER: i64 = 8;
/// Distribution is abandoned when it would produce more terms than this.
const MAX_EXPANDED_TERMS: usize = 4096;

pub fn simplify(e: &Expr) -> Expr {
    match e {
        Expr::Const(_) | Expr::Var | Expr::Symbol(_) => e.clone(),
        Expr::Sum(ts) => make_sum(ts.iter().map(simplify).collect()),
        Expr::Product(fs) => make_product(fs.iter().map(simplify).collect()),
        Expr::Quotient(a, b) => make_product(vec![simplify(a), make_power(simplify(b), -Rational::one())]),
        Expr::Power(b, r) => make_power(simplify(b), r.clone()),
        Expr::Ln(a) => make_ln(simplify(a)),
        Expr::Exp(a) => make_exp(simplify(a)),
        Expr::Neg(a) => make_product(vec![Expr::int(-1), simplify(a)]),
    }
}

fn split_coeff(e: Expr) -> (Rational, Expr) {
    match e {
        Expr::Product(mut fs) if matches!(fs.first(), Some(Expr::Const(_))) => {
            let c = match fs.remove(0) {
                Expr::Const(c) => c,
                _ => unreachable!(),
            };
            let rest = if fs.len() == 1 { fs.pop().unwrap() } else { Expr::Product(fs) };
            (c, rest)
        }
        Expr::Const(c) => (c, Expr::one()),
        other => (Rational::one(), other),
    }
}

fn with_coeff(c: Rational, m: Expr) -> Expr {
    if c.is_one() {
        return m;
    }
    match m {
        Expr::Product(mut fs) => {
            fs.insert(0, Expr::Const(c));
            Expr::Product(fs)
        }
        other => Expr::Product(vec![Expr::Const(c), other]),
    }
}

pub(crate) fn make_sum(terms: Vec<Expr>) -> Expr {
    let mut constant = Rational::zero();
    let mut groups: BTreeMap<Expr, Rational> = BTreeMap::new();
    let mut stack = terms;
    while let Some(t) = stack.pop() {
        match t {
            Expr::Sum(inner) => stack.extend(inner),
            Expr::Const(c) => constant += c,
            other => {
                let (c, m) = split_coeff(other);
                *groups.entry(m).or_insert_with(Rational::zero) += c;
            }
        }
    }
    let mut out: Vec<Expr> = Vec::with_capacity(groups.len() + 1);
    if !constant.is_zero() {
        out.push(Expr::Const(constant));
    }
    out.extend(groups.into_iter().filter(|(_, c)| !c.is_zero()).map(|(m, c)| with_coeff(c, m)));
    match out.len() {
        0 => Expr::zero(),
        1 => out.pop().unwrap(),
        _ => Expr::Sum(out),
    }
}

pub(crate) fn make_product(factors: Vec<Expr>) -> Expr {
    product_inner(factors, true)
}

fn product_inner(factors: Vec<Expr>, expand: bool) -> Expr {
    let mut coeff = Rational::one();
    let mut bases: BTreeMap<Expr, Rational> = BTreeMap::new();
    let mut exp_args: Vec<Expr> = Vec::new();
    let mut stack = factors;
    while let Some(f) = stack.pop() {
        match f {
            Expr::Product(inner) => stack.extend(inner),
            Expr::Const(c) => coeff *= c,
            Expr::Power(b, r) => *bases.entry(*b).or_insert_with(Rational::zero) += r,
            Expr::Exp(a) => exp_args.push(*a),
            other => *bases.entry(other).or_insert_with(Rational::zero) += Rational::one(),
        }
    }
    if coeff.is_zero() {
        return Expr::zero();
    }
    let mut plain: Vec<Expr> = Vec::new();
    for (b, r) in bases {
        if r.is_zero() {
            continue;
        }
        match power_raw(b, r) {
            Expr::Const(c) => coeff *= c,
            Expr::Product(fs) => {
                for f in fs {
                    match f {
                        Expr::Const(c) => coeff *= c,
                        other => plain.push(other),
                    }
                }
            }
            other => plain.push(other),
        }
    }
    if !exp_args.is_empty() {
        match make_exp(make_sum(exp_args)) {
            Expr::Const(c) => coeff *= c,
            other => plain.push(other),
        }
    }
    if coeff.is_zero() {
        return Expr::zero();
    }
    plain.sort();

    if expand {
        if let Some(expanded) = distribute(&coeff, &plain) {
            return expanded;
        }
    }

    let mut out = Vec::with_capacity(plain.len() + 1);
    if !coeff.is_one() || plain.is_empty() {
        out.push(Expr::Const(coeff));
    }
    out.extend(plain);
    if out.len() == 1 {
        out.pop().unwrap()
    } else {
        Expr::Product(out)
    }
}

/// Multiplies out sum factors (and small positive integer powers of sums).
fn distribute(coeff: &Rational, plain: &[Expr]) -> Option<Expr> {
    let mut rest = Vec::new();
    let mut sums: Vec<&Vec<Expr>> = Vec::new();
    for f in plain {
        match f {
            Expr::Sum(ts) => sums.push(ts),
            Expr::Power(b, r)
                if matches!(**b, Expr::Sum(_))
                    && r.is_integer()
                    && r.is_positive()
                    && *r <= Rational::from_integer(MAX_EXPAND_POWER.into()) =>
            {
                let n: i64 = r.to_integer().try_into().ok()?;
                if let Expr::Sum(ts) = &**b {
                    for _ in 0..n {
                        sums.push(ts);
                    }
                }
            }
            other => rest.push(other.clone()),
        }
    }
    if sums.is_empty() {
        return None;
    }
    let total: usize = sums.iter().try_fold(1usize, |acc, s| acc.checked_mul(s.len()))?;
    if total > MAX_EXPANDED_TERMS {
        return None;
    }
    let mut terms: Vec<Vec<Expr>> = vec![{
        let mut base = rest;
        base.push(Expr::Const(coeff.clone()));
        base
    }];
    for s in sums {
        let mut next = Vec::with_capacity(terms.len() * s.len());
        for t in &terms {
            for summand in s {
                let mut nt = t.clone();
                nt.push(summand.clone());
                next.push(nt);
            }
        }
        terms = next;
    }
    Some(make_sum(terms.into_iter().map(|fs| product_inner(fs, false)).collect()))
}

/// Power without expansion of sums.
fn power_raw(b: Expr, r: Rational) -> Expr {
    if r.is_zero() {
        return Expr::one();
    }
    if r.is_one() {
        return b;
    }
    match b {
        Expr::Const(c) => match exact_pow(&c, &r) {
            Some(v) => Expr::Const(v),
            None => {
                // 4^(1/4) = 2^(1/2): pull out the largest exact root.
                let n = r.denom().to_u32().unwrap_or(1);
                for k in (2..=n.min(64)).rev().filter(|k| n.is_multiple_of(*k)) {
                    if let Some(root) = exact_pow(&c, &Rational::new(1.into(), k.into())) {
                        return power_raw(Expr::Const(root), r * Rational::from_integer(k.into()));
                    }
                }
                Expr::Power(Box::new(Expr::Const(c)), r)
            }
        },
        // (a^s)^r = a^(sr) whenever a^s already forces a > 0 (s not an
        // integer) or r is an integer.
        // The variable is taken positive, so (x^s)^r = x^(sr) as well.
        Expr::Power(inner, s) if !s.is_integer() || r.is_integer() || *inner == Expr::Var => power_raw(*inner, s * r),
        Expr::Product(fs) if r.is_integer() || fs.iter().all(is_positive_factor) => {
            product_inner(fs.into_iter().map(|f| power_raw(f, r.clone())).collect(), false)
        }
        Expr::Product(mut fs) if matches!(fs.first(), Some(Expr::Const(c)) if c.is_positive()) => {
            let c = match fs.remove(0) {
                Expr::Const(c) => c,
                _ => unreachable!(),
            };
            let rest = if fs.len() == 1 { fs.pop().unwrap() } else { Expr::Product(fs) };
            product_inner(vec![power_raw(Expr::Const(c), r.clone()), power_raw(rest, r)], false)
        }
        Expr::Exp(a) => make_exp(make_product(vec![Expr::Const(r), *a])),
        other => Expr::Power(Box::new(other), r),
    }
}

/// Factors that are positive wherever they are defined.
fn is_positive_factor(e: &Expr) -> bool {
    match e {
        Expr::Const(c) => c.is_positive(),
        Expr::Var | Expr::Exp(_) => true,
        Expr::Power(b, s) => !s.is_integer() || is_positive_factor(b),
        _ => false,
    }
}

pub(crate) fn make_power(b: Expr, r: Rational) -> Expr {
    let p = power_raw(b, r);
    match &p {
        Expr::Power(base, e) if matches!(**base, Expr::Sum(_)) && e.is_integer() && e.is_positive() => {
            make_product(vec![p])
        }
        Expr::Product(_) => make_product(vec![p]),
        _ => p,
    }
}

pub(crate) fn make_ln(a: Expr) -> Expr {
    match a {
        Expr::Const(c) if c.is_one() => Expr::zero(),
        Expr::Exp(y) => *y,
        Expr::Power(b, r) if !r.is_integer() => make_product(vec![Expr::Const(r), make_ln(*b)]),
        other => Expr::Ln(Box::new(other)),
    }
}

pub(crate) fn make_exp(a: Expr) -> Expr {
    match a {
        Expr::Const(c) if c.is_zero() => Expr::one(),
        Expr::Ln(y) => *y,
        other => Expr::Exp(Box::new(other)),
    }
}
