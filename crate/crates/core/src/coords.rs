//! Changes of coordinate `x' = φ(x)` on the line and the transformation
//! laws of the Sturm–Liouville data.
//!
//! Laws are first computed as functions of the old coordinate (the
//! pullback) and then re-expressed in the new one by substituting the
//! caller-supplied inverse. The new coordinate is again written `x`.

use crate::error::{Error, Result};
use crate::sturm::GenSL;
use crate::symexpr::{equal_probabilistic, evaluate_with, normalize_rational, rat, EqualityConfig, Expr, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct CoordChange {
    forward: Expr,
    inverse: Option<Expr>,
    d1: Expr,
    d2: Expr,
    d3: Expr,
}

impl CoordChange {
    pub fn new(forward: Expr, inverse: Option<Expr>) -> Result<Self> {
        let forward = forward.simplify();
        let d1 = forward.derivative();
        if d1.is_zero() {
            return Err(Error::DegenerateMap);
        }
        let d2 = d1.derivative();
        let d3 = d2.derivative();
        Ok(CoordChange { forward, inverse: inverse.map(|e| e.simplify()), d1, d2, d3 })
    }

    pub fn identity() -> Self {
        Self::new(Expr::x(), Some(Expr::x())).expect("identity map")
    }

    pub fn forward(&self) -> &Expr {
        &self.forward
    }

    pub fn inverse(&self) -> Option<&Expr> {
        self.inverse.as_ref()
    }

    /// `φ'`, `φ''`, `φ'''`.
    pub fn derivatives(&self) -> [&Expr; 3] {
        [&self.d1, &self.d2, &self.d3]
    }

    /// Checks `φ' > 0` at the sample points and, when an inverse is present,
    /// `φ(φ⁻¹(y)) ≡ y`.
    pub fn validate(&self, cfg: &EqualityConfig) -> Result<()> {
        for (x0, env, _) in cfg.sample_points(&[&self.d1])? {
            if evaluate_with(&self.d1, x0, &env).is_some_and(|v| v <= 0.0) {
                return Err(Error::OrientationReversing);
            }
        }
        if let Some(inv) = &self.inverse {
            if !equal_probabilistic(&self.forward.substitute(inv), &Expr::x(), cfg)? {
                return Err(Error::InverseMismatch);
            }
        }
        Ok(())
    }

    /// Re-expresses a function of the old coordinate in the new one.
    pub fn push(&self, e: &Expr) -> Result<Expr> {
        let inv = self.inverse.as_ref().ok_or(Error::MissingInverse)?;
        Ok(e.substitute(inv))
    }
}

/// `f'''/f' - (3/2)(f''/f')²`.
pub fn schwarzian(f: &Expr) -> Result<Expr> {
    let c = CoordChange::new(f.clone(), None)?;
    let s = schwarzian_of(&c);
    // Rational maps get lowest terms, so Möbius maps give a literal 0.
    Ok(normalize_rational(&s).unwrap_or(s))
}

fn schwarzian_of(c: &CoordChange) -> Expr {
    let [d1, d2, d3] = c.derivatives();
    let ratio = d2.clone() / d1.clone();
    d3.clone() / d1.clone() - ratio.powi(2).scale(&rat(3, 2))
}

/// The transformed `(γ, θ)` as functions of the old coordinate.
pub fn pullback_gsl(g: &GenSL, c: &CoordChange) -> GenSL {
    let [d1, d2, _] = c.derivatives();
    let gamma = (g.gamma.clone() * d1.clone() + d2.clone()) * d1.powi(-2);
    let theta =
        (g.theta.clone() * d1.powi(2) + (g.gamma.clone() * d1.clone() * d2.clone()).scale(&rat(2, 1)) + d2.powi(2))
            * d1.powi(-4);
    GenSL::new(gamma, theta)
}

pub fn transform_gsl(g: &GenSL, c: &CoordChange) -> Result<GenSL> {
    let pulled = pullback_gsl(g, c);
    Ok(GenSL::new(c.push(&pulled.gamma)?, c.push(&pulled.theta)?))
}

/// `u' = (u - ½𝔖φ)(φ')⁻²`, in the new coordinate.
pub fn transform_potential(u: &Expr, c: &CoordChange) -> Result<Expr> {
    let pulled = (u.simplify() - schwarzian_of(c).scale(&rat(1, 2))) * c.derivatives()[0].powi(-2);
    c.push(&pulled)
}

/// Transformation of the principal symbol data `(S, γ, θ)` of a canonical
/// operator of weight `mu`.
pub fn transform_coefficients_1d(
    s: &Expr,
    gamma: &Expr,
    theta: &Expr,
    mu: &Rational,
    c: &CoordChange,
) -> Result<(Expr, Expr, Expr)> {
    let [d1, d2, _] = c.derivatives();
    let (s, gamma, theta) = (s.simplify(), gamma.simplify(), theta.simplify());
    let two = rat(2, 1);
    let s_new = s.clone() * d1.pow(&two - mu);
    let gamma_new = (gamma.clone() * d1.clone() + s.clone() * d2.clone()) * d1.pow(-mu.clone());
    let theta_new =
        (theta * d1.powi(2) + (gamma * d1.clone() * d2.clone()).scale(&two) + s * d2.powi(2)) * d1.pow(-mu - &two);
    Ok((c.push(&s_new)?, c.push(&gamma_new)?, c.push(&theta_new)?))
}

/// Whether `γ'² - θ' ≡ (γ² - θ)(φ')⁻²`, i.e. whether `(γ² - θ)|dx|²` is
/// carried to `(γ'² - θ')|dx'|²`.
///
/// Both sides are compared in the new coordinate. Composing back with `φ`
/// instead gives the same identity but nests quotients that the simplifier
/// does not bring to a common denominator, which costs floating-point
/// accuracy at the sample points.
pub fn check_psi_invariance(g: &GenSL, c: &CoordChange, cfg: &EqualityConfig) -> Result<bool> {
    if equal_probabilistic(&g.gamma.powi(2), &g.theta, cfg)? {
        return Err(Error::DegenerateRadicand);
    }
    let lhs = transform_gsl(g, c)?.radicand();
    let rhs = c.push(&(g.radicand() * c.derivatives()[0].powi(-2)))?;
    equal_probabilistic(&lhs, &rhs, cfg)
}
