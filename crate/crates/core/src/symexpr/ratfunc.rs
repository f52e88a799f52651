use num_traits::{One, ToPrimitive, Zero};

use super::{sum, Expr, Rational};

/// Degree bound past which normalization gives up.
const MAX_DEGREE: usize = 48;

/// Dense polynomial in `x`, ascending coefficients, no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
struct Poly(Vec<Rational>);

impl Poly {
    fn constant(c: Rational) -> Poly {
        Poly(vec![c]).trimmed()
    }

    fn x() -> Poly {
        Poly(vec![Rational::zero(), Rational::one()])
    }

    fn trimmed(mut self) -> Poly {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
        self
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lead(&self) -> &Rational {
        self.0.last().expect("nonzero polynomial")
    }

    fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let z = Rational::zero();
        Poly((0..n).map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z)).collect()).trimmed()
    }

    fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly(vec![]);
        }
        let mut out = vec![Rational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out).trimmed()
    }

    fn scale(&self, c: &Rational) -> Poly {
        Poly(self.0.iter().map(|a| a * c).collect()).trimmed()
    }

    /// Quotient and remainder; `d` nonzero.
    fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let mut r = self.clone();
        let mut q = vec![Rational::zero(); self.0.len().saturating_sub(d.degree()).max(1)];
        while !r.is_zero() && r.degree() >= d.degree() {
            let shift = r.degree() - d.degree();
            let c = r.lead() / d.lead();
            for (i, b) in d.0.iter().enumerate() {
                r.0[i + shift] -= &c * b;
            }
            q[shift] = c;
            r = r.trimmed();
        }
        (Poly(q).trimmed(), r)
    }

    fn monic(&self) -> Poly {
        self.scale(&self.lead().recip())
    }

    fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    fn to_expr(&self) -> Expr {
        sum(self.0.iter().enumerate().map(|(k, c)| Expr::x().powi(k as i64).scale(c)))
    }
}

/// `num/den` with `den` nonzero.
#[derive(Clone, Debug)]
struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    fn poly(p: Poly) -> RatFunc {
        RatFunc { num: p, den: Poly::constant(Rational::one()) }
    }

    fn reduced(num: Poly, den: Poly) -> Option<RatFunc> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(RatFunc::poly(num));
        }
        let g = num.gcd(&den);
        let (num, den) = (num.div_rem(&g).0, den.div_rem(&g).0);
        let c = den.lead().recip();
        let out = RatFunc { num: num.scale(&c), den: den.scale(&c) };
        (out.num.degree() <= MAX_DEGREE && out.den.degree() <= MAX_DEGREE).then_some(out)
    }

    fn add(&self, o: &RatFunc) -> Option<RatFunc> {
        RatFunc::reduced(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    fn mul(&self, o: &RatFunc) -> Option<RatFunc> {
        RatFunc::reduced(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    fn recip(&self) -> Option<RatFunc> {
        RatFunc::reduced(self.den.clone(), self.num.clone())
    }

    fn powi(&self, n: i64) -> Option<RatFunc> {
        let base = if n < 0 { self.recip()? } else { self.clone() };
        let mut out = RatFunc::poly(Poly::constant(Rational::one()));
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base)?;
        }
        Some(out)
    }
}

fn convert(e: &Expr) -> Option<RatFunc> {
    match e {
        Expr::Const(c) => Some(RatFunc::poly(Poly::constant(c.clone()))),
        Expr::Var => Some(RatFunc::poly(Poly::x())),
        Expr::Sum(ts) => {
            let mut acc = RatFunc::poly(Poly(vec![]));
            for t in ts {
                acc = acc.add(&convert(t)?)?;
            }
            Some(acc)
        }
        Expr::Product(fs) => {
            let mut acc = RatFunc::poly(Poly::constant(Rational::one()));
            for f in fs {
                acc = acc.mul(&convert(f)?)?;
            }
            Some(acc)
        }
        Expr::Quotient(a, b) => convert(a)?.mul(&convert(b)?.recip()?),
        Expr::Neg(a) => {
            let r = convert(a)?;
            Some(RatFunc { num: r.num.neg(), den: r.den })
        }
        Expr::Power(b, r) if r.is_integer() => {
            let n = r.to_integer().to_i64().filter(|n| n.unsigned_abs() as usize <= MAX_DEGREE)?;
            convert(b)?.powi(n)
        }
        _ => None,
    }
}

/// Lowest-terms form `P/Q` of a rational function of `x` with rational
/// coefficients, `Q` monic. `None` when `e` is not such a function (symbols,
/// `ln`, `exp`, fractional powers), when a denominator vanishes identically,
/// or when degrees grow past a fixed bound.
pub fn normalize_rational(e: &Expr) -> Option<Expr> {
    let r = convert(e)?;
    let num = r.num.to_expr();
    if r.den.degree() == 0 {
        return Some(num);
    }
    // A monomial denominator reads better distributed over the numerator.
    if r.den.0[..r.den.degree()].iter().all(Zero::is_zero) {
        let k = r.den.degree() as i64;
        return Some(sum(r.num.0.iter().enumerate().map(|(i, c)| Expr::x().powi(i as i64 - k).scale(c))));
    }
    Some(num * r.den.to_expr().powi(-1))
}
