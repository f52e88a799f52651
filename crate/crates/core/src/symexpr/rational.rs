use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number used for constants, exponents and weights.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"3"`, `"-1/2"`, `"0.25"` into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest.trim_start()),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let value = if let Some((n, d)) = body.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() || d.is_negative() {
            return None;
        }
        Rational::new(n, d)
    } else {
        decimal(body)?
    };
    Some(if neg { -value } else { value })
}

pub(crate) fn decimal(s: &str) -> Option<Rational> {
    if s.is_empty() || s.starts_with('-') || s.starts_with('+') {
        return None;
    }
    match s.split_once('.') {
        None => Some(Rational::from_integer(s.parse().ok()?)),
        Some((int, frac)) => {
            if !frac.chars().all(|c| c.is_ascii_digit()) || (int.is_empty() && frac.is_empty()) {
                return None;
            }
            let int: BigInt = if int.is_empty() { BigInt::zero() } else { int.parse().ok()? };
            let scale = BigInt::from(10).pow(frac.len() as u32);
            let frac: BigInt = if frac.is_empty() { BigInt::zero() } else { frac.parse().ok()? };
            Some(Rational::new(int * &scale + frac, scale))
        }
    }
}

pub(crate) fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn pow_int(base: &Rational, exp: i64) -> Option<Rational> {
    if exp < 0 && base.is_zero() {
        return None;
    }
    let mut result = Rational::one();
    let mut b = if exp < 0 { base.recip() } else { base.clone() };
    let mut e = exp.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            result *= &b;
        }
        e >>= 1;
        if e > 0 {
            b = &b * &b;
        }
    }
    Some(result)
}

/// `base^exp` when the result is again rational (perfect roots of a
/// positive base, or integer exponents of a nonzero base).
pub(crate) fn exact_pow(base: &Rational, exp: &Rational) -> Option<Rational> {
    if exp.is_integer() {
        let e = exp.to_integer().to_i64()?;
        if e.unsigned_abs() > 4096 {
            return None;
        }
        return pow_int(base, e);
    }
    if base.is_zero() {
        return exp.is_positive().then(Rational::zero);
    }
    if base.is_negative() {
        return None;
    }
    let q = exp.denom().to_u32()?;
    let p = exp.numer().to_i64()?;
    if p.unsigned_abs() > 4096 {
        return None;
    }
    let root_n = base.numer().nth_root(q);
    let root_d = base.denom().nth_root(q);
    if root_n.pow(q) != *base.numer() || root_d.pow(q) != *base.denom() {
        return None;
    }
    pow_int(&Rational::new(root_n, root_d), p)
}

pub(crate) fn binomial(n: u32, k: u32) -> Rational {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rational::from_integer(acc)
}
